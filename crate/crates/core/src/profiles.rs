//! Colored profiles and the permutation groupoid acting on them.

use std::fmt;

use itertools::Itertools;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// An interned color: an index into a [`ColorSet`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Color(pub u32);

impl Color {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

/// A declared, nonempty, finite set of color names. The order of the names
/// fixes the total order on colors.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ColorSet {
    names: Vec<String>,
}

impl ColorSet {
    pub fn new<S: Into<String>>(names: impl IntoIterator<Item = S>) -> Result<Self> {
        let names: Vec<String> = names.into_iter().map(Into::into).collect();
        if names.is_empty() {
            return Err(Error::Format("the color set must be nonempty".into()));
        }
        if names.iter().duplicates().next().is_some() {
            return Err(Error::Format("duplicate color names".into()));
        }
        Ok(ColorSet { names })
    }

    /// `n` colors named `c0`, `c1`, ...
    pub fn anonymous(n: usize) -> Self {
        ColorSet {
            names: (0..n.max(1)).map(|i| format!("c{i}")).collect(),
        }
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn colors(&self) -> impl Iterator<Item = Color> + '_ {
        (0..self.names.len() as u32).map(Color)
    }

    pub fn contains(&self, c: Color) -> bool {
        c.index() < self.names.len()
    }

    pub fn name(&self, c: Color) -> &str {
        &self.names[c.index()]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn lookup(&self, name: &str) -> Result<Color> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|i| Color(i as u32))
            .ok_or_else(|| Error::UnknownColor(name.to_string()))
    }

    pub fn profile(&self, names: &[&str]) -> Result<Profile> {
        names.iter().map(|n| self.lookup(n)).collect::<Result<Vec<_>>>().map(Profile)
    }

    pub fn profile_names(&self, p: &Profile) -> Vec<String> {
        p.0.iter().map(|&c| self.name(c).to_string()).collect()
    }
}

/// A finite, possibly empty, sequence of colors.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(transparent)]
pub struct Profile(pub Vec<Color>);

impl Profile {
    pub fn empty() -> Self {
        Profile(Vec::new())
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn colors(&self) -> &[Color] {
        &self.0
    }

    /// The colors sorted; equal for two profiles iff they share an orbit.
    pub fn sorted(&self) -> Profile {
        let mut v = self.0.clone();
        v.sort();
        Profile(v)
    }
}

impl From<Vec<Color>> for Profile {
    fn from(v: Vec<Color>) -> Self {
        Profile(v)
    }
}

/// An input/output profile pair `(inputs; outputs)`.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct ProfilePair {
    pub inputs: Profile,
    pub outputs: Profile,
}

impl ProfilePair {
    pub fn new(inputs: impl Into<Profile>, outputs: impl Into<Profile>) -> Self {
        ProfilePair {
            inputs: inputs.into(),
            outputs: outputs.into(),
        }
    }

    /// `(c; c)`.
    pub fn unary(c: Color) -> Self {
        ProfilePair::new(vec![c], vec![c])
    }

    pub fn arity(&self) -> usize {
        self.inputs.len() + self.outputs.len()
    }

    /// Canonical representatives of both orbits.
    pub fn orbit_key(&self) -> ProfilePair {
        ProfilePair {
            inputs: self.inputs.sorted(),
            outputs: self.outputs.sorted(),
        }
    }

    pub fn same_orbit(&self, other: &ProfilePair) -> bool {
        self.orbit_key() == other.orbit_key()
    }

    /// Parses `in;out` or `(in;out)`, each side a comma-separated list of
    /// color names, as printed by [`ProfilePair::display`].
    pub fn parse(text: &str, colors: &ColorSet) -> Result<Self> {
        let t = text.trim();
        let t = t.strip_prefix('(').and_then(|x| x.strip_suffix(')')).unwrap_or(t);
        let (i, o) = t
            .split_once(';')
            .ok_or_else(|| Error::Format(format!("profile `{text}` needs a `;` between inputs and outputs")))?;
        let side = |s: &str| -> Result<Profile> {
            s.split(',')
                .map(str::trim)
                .filter(|x| !x.is_empty())
                .map(|n| colors.lookup(n))
                .collect::<Result<Vec<_>>>()
                .map(Profile)
        };
        Ok(ProfilePair::new(side(i)?, side(o)?))
    }

    pub fn display(&self, colors: &ColorSet) -> String {
        format!(
            "({};{})",
            colors.profile_names(&self.inputs).join(","),
            colors.profile_names(&self.outputs).join(",")
        )
    }

    /// All color-preserving pairs of permutations, i.e. the automorphism
    /// group of this object in the groupoid of profile pairs.
    pub fn stabilizer(&self) -> Vec<(Perm, Perm)> {
        let ins = color_preserving(&self.inputs);
        let outs = color_preserving(&self.outputs);
        ins.iter()
            .cartesian_product(outs.iter())
            .map(|(a, b)| (a.clone(), b.clone()))
            .collect()
    }
}

impl fmt::Display for ProfilePair {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |p: &Profile| p.0.iter().map(|c| c.0.to_string()).join(",");
        write!(f, "({};{})", show(&self.inputs), show(&self.outputs))
    }
}

/// JSON form `{"in": [...], "out": [...]}` with color names.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ProfilePairJson {
    #[serde(rename = "in")]
    pub inputs: Vec<String>,
    #[serde(rename = "out")]
    pub outputs: Vec<String>,
}

impl ProfilePairJson {
    pub fn from_pair(p: &ProfilePair, colors: &ColorSet) -> Self {
        ProfilePairJson {
            inputs: colors.profile_names(&p.inputs),
            outputs: colors.profile_names(&p.outputs),
        }
    }

    pub fn to_pair(&self, colors: &ColorSet) -> Result<ProfilePair> {
        let get = |v: &[String]| {
            v.iter()
                .map(|n| colors.lookup(n))
                .collect::<Result<Vec<_>>>()
                .map(Profile)
        };
        Ok(ProfilePair {
            inputs: get(&self.inputs)?,
            outputs: get(&self.outputs)?,
        })
    }
}

/// A permutation in one-line notation, 0-indexed: `self[i] = σ(i)`.
/// Serialized 1-indexed.
#[derive(Debug, Clone, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Perm(Vec<usize>);

impl Perm {
    pub fn new(images: Vec<usize>) -> Result<Self> {
        let n = images.len();
        let mut seen = vec![false; n];
        for &i in &images {
            if i >= n || seen[i] {
                return Err(Error::InvalidPermutation(format!("{images:?} is not a bijection")));
            }
            seen[i] = true;
        }
        Ok(Perm(images))
    }

    pub fn identity(n: usize) -> Self {
        Perm((0..n).collect())
    }

    /// The transposition swapping `a` and `b`.
    pub fn transposition(n: usize, a: usize, b: usize) -> Self {
        let mut v: Vec<usize> = (0..n).collect();
        v.swap(a, b);
        Perm(v)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn images(&self) -> &[usize] {
        &self.0
    }

    pub fn apply(&self, i: usize) -> usize {
        self.0[i]
    }

    pub fn is_identity(&self) -> bool {
        self.0.iter().enumerate().all(|(i, &j)| i == j)
    }

    pub fn inverse(&self) -> Perm {
        let mut inv = vec![0; self.0.len()];
        for (i, &j) in self.0.iter().enumerate() {
            inv[j] = i;
        }
        Perm(inv)
    }

    /// `self ∘ other`, i.e. `i ↦ self(other(i))`.
    pub fn compose(&self, other: &Perm) -> Perm {
        assert_eq!(self.len(), other.len(), "composing permutations of different sizes");
        Perm(other.0.iter().map(|&i| self.0[i]).collect())
    }

    /// Every permutation of `n` letters, in lexicographic order.
    pub fn all(n: usize) -> Vec<Perm> {
        (0..n).permutations(n).map(Perm).collect()
    }

    /// Rearranges a sequence by the left action: `result[i] = seq[σ⁻¹(i)]`.
    pub fn permute_left<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        let inv = self.inverse();
        (0..seq.len()).map(|i| seq[inv.0[i]].clone()).collect()
    }

    /// `result[i] = seq[σ(i)]`.
    pub fn permute_right<T: Clone>(&self, seq: &[T]) -> Vec<T> {
        self.0.iter().map(|&j| seq[j].clone()).collect()
    }

    pub fn to_one_indexed(&self) -> Vec<usize> {
        self.0.iter().map(|i| i + 1).collect()
    }

    pub fn from_one_indexed(v: &[usize]) -> Result<Self> {
        if v.contains(&0) {
            return Err(Error::InvalidPermutation("entries are 1-indexed".into()));
        }
        Perm::new(v.iter().map(|i| i - 1).collect())
    }
}

impl Serialize for Perm {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        self.to_one_indexed().serialize(s)
    }
}

impl<'de> Deserialize<'de> for Perm {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let v = Vec::<usize>::deserialize(d)?;
        Perm::from_one_indexed(&v).map_err(serde::de::Error::custom)
    }
}

/// Which side a permutation acts from.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Side {
    Left,
    Right,
}

/// `σ·p = (p_{σ⁻¹(1)}, …)` on the left and `p·σ = (p_{σ(1)}, …)` on the right.
pub fn act(sigma: &Perm, p: &Profile, side: Side) -> Result<Profile> {
    if sigma.len() != p.len() {
        return Err(Error::InvalidPermutation(format!(
            "permutation of size {} applied to a profile of length {}",
            sigma.len(),
            p.len()
        )));
    }
    Ok(Profile(match side {
        Side::Left => sigma.permute_left(&p.0),
        Side::Right => sigma.permute_right(&p.0),
    }))
}

/// The orbit of a profile under permutations.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Orbit {
    pub canonical_rep: Profile,
    pub size: u128,
}

pub fn orbit_of(p: &Profile) -> Orbit {
    let rep = p.sorted();
    let mut size: u128 = factorial(p.len());
    for (_, group) in &rep.0.iter().chunk_by(|c| **c) {
        size /= factorial(group.count());
    }
    Orbit {
        canonical_rep: rep,
        size,
    }
}

pub fn factorial(n: usize) -> u128 {
    (1..=n as u128).product()
}

/// All permutations `σ` with `p·σ = p`, i.e. `p[σ(i)] = p[i]`.
pub fn color_preserving(p: &Profile) -> Vec<Perm> {
    let n = p.len();
    // product over color classes of the symmetric groups on their positions
    let mut result = vec![vec![usize::MAX; n]];
    let mut by_color: Vec<(Color, Vec<usize>)> = Vec::new();
    for (i, &c) in p.0.iter().enumerate() {
        match by_color.iter_mut().find(|(d, _)| *d == c) {
            Some((_, v)) => v.push(i),
            None => by_color.push((c, vec![i])),
        }
    }
    for (_, positions) in by_color {
        let mut next = Vec::new();
        for partial in &result {
            for images in positions.iter().permutations(positions.len()) {
                let mut q = partial.clone();
                for (src, &&dst) in positions.iter().zip(images.iter()) {
                    q[*src] = dst;
                }
                next.push(q);
            }
        }
        result = next;
    }
    let mut perms: Vec<Perm> = result.into_iter().map(Perm).collect();
    perms.sort();
    perms
}

/// All bijections `σ` with `from·σ = to` (i.e. `from[σ(i)] = to[i]`).
pub fn matching_perms(from: &Profile, to: &Profile) -> Vec<Perm> {
    if from.sorted() != to.sorted() {
        return Vec::new();
    }
    // one particular solution, then compose with the stabilizer of `from`
    let mut used = vec![false; from.len()];
    let mut base = Vec::with_capacity(to.len());
    for c in &to.0 {
        let j = (0..from.len())
            .find(|&j| !used[j] && from.0[j] == *c)
            .expect("orbits agree");
        used[j] = true;
        base.push(j);
    }
    let base = Perm(base);
    let mut out: Vec<Perm> = color_preserving(from)
        .into_iter()
        .map(|s| s.compose(&base))
        .collect();
    out.sort();
    out
}
