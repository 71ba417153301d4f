//! Finite groups as explicit multiplication tables.

use std::collections::HashMap;
use std::hash::Hash;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::profiles::Perm;

/// A finite group on the elements `0..order`; `mul[a][b] = a·b`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FiniteGroup {
    mul: Vec<Vec<usize>>,
    inv: Vec<usize>,
    identity: usize,
}

impl FiniteGroup {
    /// Validates a multiplication table: closure, an identity, inverses
    /// and associativity.
    pub fn from_table(mul: Vec<Vec<usize>>) -> Result<Self> {
        let n = mul.len();
        let bad = |m: &str| Err(Error::InvalidSubgroup(format!("not a group table: {m}")));
        if n == 0 || mul.iter().any(|row| row.len() != n || row.iter().any(|&x| x >= n)) {
            return bad("rows must have one entry per element");
        }
        let Some(identity) = (0..n).find(|&e| (0..n).all(|a| mul[e][a] == a && mul[a][e] == a)) else {
            return bad("no identity");
        };
        let mut inv = vec![usize::MAX; n];
        for a in 0..n {
            match (0..n).find(|&b| mul[a][b] == identity && mul[b][a] == identity) {
                Some(b) => inv[a] = b,
                None => return bad("missing inverse"),
            }
        }
        for a in 0..n {
            for b in 0..n {
                for c in 0..n {
                    if mul[mul[a][b]][c] != mul[a][mul[b][c]] {
                        return bad("not associative");
                    }
                }
            }
        }
        Ok(FiniteGroup { mul, inv, identity })
    }

    /// The group generated by closing `elements` under `mul`. The elements
    /// are returned in table order, starting with the given ones.
    pub fn from_elements<T, F>(elements: Vec<T>, mul: F) -> (Self, Vec<T>)
    where
        T: Clone + Eq + Hash,
        F: Fn(&T, &T) -> T,
    {
        let mut elems = elements;
        let mut index: HashMap<T, usize> = HashMap::new();
        elems.retain(|e| {
            let fresh = !index.contains_key(e);
            if fresh {
                index.insert(e.clone(), index.len());
            }
            fresh
        });
        let mut i = 0;
        while i < elems.len() {
            for j in 0..=i {
                for (a, b) in [(i, j), (j, i)] {
                    let p = mul(&elems[a], &elems[b]);
                    if !index.contains_key(&p) {
                        index.insert(p.clone(), elems.len());
                        elems.push(p);
                    }
                }
            }
            i += 1;
        }
        let table: Vec<Vec<usize>> = elems
            .iter()
            .map(|a| elems.iter().map(|b| index[&mul(a, b)]).collect())
            .collect();
        let g = FiniteGroup::from_table(table).expect("closure of a set under a group law");
        (g, elems)
    }

    pub fn trivial() -> Self {
        FiniteGroup {
            mul: vec![vec![0]],
            inv: vec![0],
            identity: 0,
        }
    }

    pub fn cyclic(n: usize) -> Self {
        let n = n.max(1);
        let mul = (0..n).map(|a| (0..n).map(|b| (a + b) % n).collect()).collect();
        FiniteGroup {
            mul,
            inv: (0..n).map(|a| (n - a) % n).collect(),
            identity: 0,
        }
    }

    /// `Σ_n` on the permutations of `n` letters in lexicographic order,
    /// with `σ·τ = σ∘τ`.
    pub fn symmetric(n: usize) -> (Self, Vec<Perm>) {
        let perms = Perm::all(n);
        let index: HashMap<Perm, usize> =
            perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        let mul: Vec<Vec<usize>> = perms
            .iter()
            .map(|a| perms.iter().map(|b| index[&a.compose(b)]).collect())
            .collect();
        let inv = perms.iter().map(|p| index[&p.inverse()]).collect();
        (
            FiniteGroup {
                mul,
                inv,
                identity: 0,
            },
            perms,
        )
    }

    pub fn order(&self) -> usize {
        self.mul.len()
    }

    pub fn identity(&self) -> usize {
        self.identity
    }

    pub fn mul(&self, a: usize, b: usize) -> usize {
        self.mul[a][b]
    }

    pub fn inv(&self, a: usize) -> usize {
        self.inv[a]
    }

    pub fn elements(&self) -> std::ops::Range<usize> {
        0..self.order()
    }

    pub fn table(&self) -> &[Vec<usize>] {
        &self.mul
    }

    /// The direct product; `(a, b)` is element `a * |other| + b`.
    pub fn product(&self, other: &FiniteGroup) -> FiniteGroup {
        let m = other.order();
        let n = self.order() * m;
        let mul = (0..n)
            .map(|x| {
                (0..n)
                    .map(|y| self.mul(x / m, y / m) * m + other.mul(x % m, y % m))
                    .collect()
            })
            .collect();
        FiniteGroup {
            mul,
            inv: (0..n)
                .map(|x| self.inv(x / m) * m + other.inv(x % m))
                .collect(),
            identity: self.identity * m + other.identity,
        }
    }
}

/// An injective homomorphism `H → G`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Embedding {
    pub map: Vec<usize>,
}

impl Embedding {
    pub fn new(sub: &FiniteGroup, group: &FiniteGroup, map: Vec<usize>) -> Result<Self> {
        if map.len() != sub.order() || map.iter().any(|&x| x >= group.order()) {
            return Err(Error::InvalidSubgroup("embedding has the wrong shape".into()));
        }
        let mut seen = vec![false; group.order()];
        for &x in &map {
            if std::mem::replace(&mut seen[x], true) {
                return Err(Error::InvalidSubgroup("embedding is not injective".into()));
            }
        }
        for a in sub.elements() {
            for b in sub.elements() {
                if map[sub.mul(a, b)] != group.mul(map[a], map[b]) {
                    return Err(Error::InvalidSubgroup(format!(
                        "embedding is not a homomorphism at ({a}, {b})"
                    )));
                }
            }
        }
        Ok(Embedding { map })
    }

    pub fn identity(g: &FiniteGroup) -> Self {
        Embedding {
            map: g.elements().collect(),
        }
    }
}

/// Left cosets `gH` of an embedded subgroup: representatives and, for
/// every element, its decomposition `g = rep[j]·h`.
#[derive(Debug, Clone)]
pub struct Cosets {
    pub reps: Vec<usize>,
    /// `decompose[g] = (j, h)` with `g = reps[j] · emb(h)`.
    pub decompose: Vec<(usize, usize)>,
}

impl Cosets {
    pub fn new(group: &FiniteGroup, sub: &FiniteGroup, emb: &Embedding) -> Self {
        let mut decompose = vec![(usize::MAX, 0); group.order()];
        let mut reps = Vec::new();
        for g in group.elements() {
            if decompose[g].0 != usize::MAX {
                continue;
            }
            let j = reps.len();
            reps.push(g);
            for h in sub.elements() {
                decompose[group.mul(g, emb.map[h])] = (j, h);
            }
        }
        Cosets { reps, decompose }
    }
}

/// `Σ_n` with its permutations and their indices.
#[derive(Debug, Clone)]
pub struct SymmetricGroup {
    pub group: Arc<FiniteGroup>,
    pub perms: Vec<Perm>,
    index: HashMap<Perm, usize>,
}

impl SymmetricGroup {
    pub fn new(n: usize) -> Self {
        let (g, perms) = FiniteGroup::symmetric(n);
        let index = perms.iter().cloned().enumerate().map(|(i, p)| (p, i)).collect();
        SymmetricGroup {
            group: Arc::new(g),
            perms,
            index,
        }
    }

    pub fn degree(&self) -> usize {
        self.perms[0].len()
    }

    pub fn index_of(&self, p: &Perm) -> usize {
        self.index[p]
    }

    /// The block-sum embedding `Σ_a × Σ_b → Σ_{a+b}`, where `(α, β)` is
    /// element `α * |Σ_b| + β` of the product.
    pub fn block_embedding(&self, a: &SymmetricGroup, b: &SymmetricGroup) -> Embedding {
        let na = a.degree();
        let map = a
            .perms
            .iter()
            .flat_map(|alpha| {
                b.perms.iter().map(move |beta| {
                    let images = alpha
                        .images()
                        .iter()
                        .copied()
                        .chain(beta.images().iter().map(|&j| na + j))
                        .collect();
                    Perm::new(images).expect("block sum of permutations")
                })
            })
            .map(|p| self.index_of(&p))
            .collect();
        Embedding { map }
    }
}

/// JSON description of a group.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum GroupJson {
    Trivial,
    Cyclic(usize),
    Symmetric(usize),
    Table(Vec<Vec<usize>>),
}

impl GroupJson {
    pub fn build(&self) -> Result<FiniteGroup> {
        Ok(match self {
            GroupJson::Trivial => FiniteGroup::trivial(),
            GroupJson::Cyclic(n) => FiniteGroup::cyclic(*n),
            GroupJson::Symmetric(n) => FiniteGroup::symmetric(*n).0,
            GroupJson::Table(t) => FiniteGroup::from_table(t.clone())?,
        })
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn symmetric_group_laws() {
        let (s3, perms) = FiniteGroup::symmetric(3);
        assert_eq!(s3.order(), 6);
        assert!(perms[s3.identity()].is_identity());
        assert!(FiniteGroup::from_table(s3.table().to_vec()).is_ok());
        for a in s3.elements() {
            assert_eq!(s3.mul(a, s3.inv(a)), s3.identity());
        }
    }

    #[test]
    fn closure_builds_the_generated_group() {
        let t = Perm::new(vec![1, 0, 2]).unwrap();
        let c = Perm::new(vec![1, 2, 0]).unwrap();
        let (g, elems) = FiniteGroup::from_elements(vec![t, c], |a, b| a.compose(b));
        assert_eq!(g.order(), 6);
        assert_eq!(elems.len(), 6);
    }

    #[test]
    fn bad_tables_and_embeddings() {
        assert!(FiniteGroup::from_table(vec![vec![0, 0], vec![0, 0]]).is_err());
        let c2 = FiniteGroup::cyclic(2);
        let c4 = FiniteGroup::cyclic(4);
        assert!(Embedding::new(&c2, &c4, vec![0, 2]).is_ok());
        assert!(Embedding::new(&c2, &c4, vec![0, 1]).is_err());
    }

    #[test]
    fn block_embedding_is_a_homomorphism() {
        let (s2, s1, s3) = (SymmetricGroup::new(2), SymmetricGroup::new(1), SymmetricGroup::new(3));
        let prod = s2.group.product(&s1.group);
        let emb = s3.block_embedding(&s2, &s1);
        assert!(Embedding::new(&prod, &s3.group, emb.map).is_ok());
    }

    #[test]
    fn cosets_partition() {
        let (s3, _) = FiniteGroup::symmetric(3);
        let c2 = FiniteGroup::cyclic(2);
        // the transposition (0 1) is [1,0,2], index 2 in lexicographic order
        let emb = Embedding::new(&c2, &s3, vec![0, 2]).unwrap();
        let cos = Cosets::new(&s3, &c2, &emb);
        assert_eq!(cos.reps.len(), 3);
        for g in s3.elements() {
            let (j, h) = cos.decompose[g];
            assert_eq!(s3.mul(cos.reps[j], emb.map[h]), g);
        }
    }
}
