//! Finite sets with a finite group action.

use std::sync::Arc;

use crate::error::{Error, Result};
use crate::graph::UnionFind;

use super::group::{Cosets, Embedding, FiniteGroup};

/// A finite `G`-set on `0..size`; `action[g][x] = g·x`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GSet {
    pub group: Arc<FiniteGroup>,
    action: Vec<Vec<usize>>,
}

impl GSet {
    pub fn new(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Result<Self> {
        let bad = |m: String| Err(Error::Equivariance(m));
        if action.len() != group.order() {
            return bad("one permutation per group element is required".into());
        }
        let size = action.first().map_or(0, Vec::len);
        for row in &action {
            let mut seen = vec![false; size];
            if row.len() != size || row.iter().any(|&x| x >= size || std::mem::replace(&mut seen[x], true)) {
                return bad("every group element must act by a permutation".into());
            }
        }
        if action[group.identity()].iter().enumerate().any(|(i, &x)| i != x) {
            return bad("the identity must act trivially".into());
        }
        for a in group.elements() {
            for b in group.elements() {
                let ab = group.mul(a, b);
                if (0..size).any(|x| action[ab][x] != action[a][action[b][x]]) {
                    return bad(format!("the action is not a homomorphism at ({a}, {b})"));
                }
            }
        }
        Ok(GSet { group, action })
    }

    pub(crate) fn new_unchecked(group: Arc<FiniteGroup>, action: Vec<Vec<usize>>) -> Self {
        GSet { group, action }
    }

    /// `size` points with the trivial action.
    pub fn trivial(group: Arc<FiniteGroup>, size: usize) -> Self {
        let action = vec![(0..size).collect(); group.order()];
        GSet { group, action }
    }

    /// The group acting on itself by left multiplication.
    pub fn regular(group: Arc<FiniteGroup>) -> Self {
        let action = group
            .elements()
            .map(|g| group.elements().map(|x| group.mul(g, x)).collect())
            .collect();
        GSet { group, action }
    }

    /// `A × A` for `|A| = n` with `Σ₂` swapping the factors; `(a, b)` is
    /// point `a * n + b`.
    pub fn swap_square(n: usize) -> Self {
        let group = Arc::new(FiniteGroup::cyclic(2));
        let id: Vec<usize> = (0..n * n).collect();
        let swap: Vec<usize> = (0..n * n).map(|x| (x % n) * n + x / n).collect();
        GSet {
            group,
            action: vec![id, swap],
        }
    }

    pub fn size(&self) -> usize {
        self.action.first().map_or(0, Vec::len)
    }

    pub fn act(&self, g: usize, x: usize) -> usize {
        self.action[g][x]
    }

    pub fn action(&self) -> &[Vec<usize>] {
        &self.action
    }

    pub fn same_group(&self, other: &GSet) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group == other.group
    }

    /// Checks that `map: self → target` commutes with the actions.
    pub fn is_equivariant(&self, target: &GSet, map: &[usize]) -> bool {
        self.same_group(target)
            && map.len() == self.size()
            && map.iter().all(|&y| y < target.size())
            && self.group.elements().all(|g| {
                (0..self.size()).all(|x| map[self.act(g, x)] == target.act(g, map[x]))
            })
    }

    pub fn stabilizer(&self, x: usize) -> Vec<usize> {
        self.group.elements().filter(|&g| self.act(g, x) == x).collect()
    }

    /// Orbits as sorted point lists, ordered by least point.
    pub fn orbits(&self) -> Vec<Vec<usize>> {
        let mut uf = UnionFind::new(self.size());
        for g in self.group.elements() {
            for x in 0..self.size() {
                uf.union(x, self.act(g, x));
            }
        }
        let (class, k) = uf.classes();
        let mut out = vec![Vec::new(); k];
        for (x, c) in class.into_iter().enumerate() {
            out[c].push(x);
        }
        out
    }

    /// A point fixed by a nonidentity element, if any.
    pub fn fixed_point_witness(&self) -> Option<(usize, usize)> {
        let e = self.group.identity();
        self.group
            .elements()
            .filter(|&g| g != e)
            .find_map(|g| (0..self.size()).find(|&x| self.act(g, x) == x).map(|x| (g, x)))
    }

    pub fn is_free(&self) -> bool {
        self.fixed_point_witness().is_none()
    }

    /// Restriction along an embedding `H → G`.
    pub fn restrict(&self, sub: Arc<FiniteGroup>, emb: &Embedding) -> GSet {
        let action = sub.elements().map(|h| self.action[emb.map[h]].clone()).collect();
        GSet { group: sub, action }
    }
}

/// `G ·_H X`: the pairs `(coset j, x)`, point `j * |X| + x`.
pub fn induce(group: Arc<FiniteGroup>, emb: &Embedding, x: &GSet) -> Result<(GSet, Cosets)> {
    let sub = &x.group;
    let emb = Embedding::new(sub, &group, emb.map.clone())?;
    let cos = Cosets::new(&group, sub, &emb);
    let n = x.size();
    let action = group
        .elements()
        .map(|g| {
            let mut row = vec![0; cos.reps.len() * n];
            for (j, &r) in cos.reps.iter().enumerate() {
                let (k, h) = cos.decompose[group.mul(g, r)];
                for p in 0..n {
                    row[j * n + p] = k * n + x.act(h, p);
                }
            }
            row
        })
        .collect();
    Ok((GSet::new_unchecked(group, action), cos))
}

/// Induction along any homomorphism `hom: H → G`: the quotient of `G × X`
/// by `(g · hom(h), x) ~ (g, h · x)`.
#[derive(Debug, Clone)]
pub struct HomInduced {
    pub set: GSet,
    /// The class of `(g, x)`, indexed by `g * |X| + x`.
    pub class: Vec<usize>,
    /// One pair `(g, x)` per class.
    pub reps: Vec<(usize, usize)>,
}

pub fn induce_hom(group: Arc<FiniteGroup>, hom: &[usize], x: &GSet) -> Result<HomInduced> {
    let sub = &x.group;
    if hom.len() != sub.order()
        || hom.iter().any(|&g| g >= group.order())
        || sub.elements().any(|a| sub.elements().any(|b| hom[sub.mul(a, b)] != group.mul(hom[a], hom[b])))
    {
        return Err(Error::InvalidSubgroup("the map of groups is not a homomorphism".into()));
    }
    let n = x.size();
    let mut uf = UnionFind::new(group.order() * n);
    for g in group.elements() {
        for h in sub.elements() {
            let gh = group.mul(g, hom[h]);
            for p in 0..n {
                uf.union(gh * n + p, g * n + x.act(h, p));
            }
        }
    }
    let (class, k) = uf.classes();
    let mut reps = vec![(usize::MAX, 0); k];
    for (i, &c) in class.iter().enumerate() {
        if reps[c].0 == usize::MAX {
            reps[c] = (i / n, i % n);
        }
    }
    let action = group
        .elements()
        .map(|a| reps.iter().map(|&(g, p)| class[group.mul(a, g) * n + p]).collect())
        .collect();
    Ok(HomInduced {
        set: GSet::new_unchecked(group, action),
        class,
        reps,
    })
}

/// The diagonal action on `A × B`; `(a, b)` is point `a * |B| + b`.
pub fn product(a: &GSet, b: &GSet) -> Result<GSet> {
    if !a.same_group(b) {
        return Err(Error::Equivariance("factors over different groups".into()));
    }
    let m = b.size();
    let action = a
        .group
        .elements()
        .map(|g| {
            (0..a.size() * m)
                .map(|x| a.act(g, x / m) * m + b.act(g, x % m))
                .collect()
        })
        .collect();
    Ok(GSet::new_unchecked(a.group.clone(), action))
}

/// `A × B` over `G × H` acting factorwise; `(g, h)` is element
/// `g * |H| + h` as in [`FiniteGroup::product`].
pub fn external_product(a: &GSet, b: &GSet) -> GSet {
    let group = Arc::new(a.group.product(&b.group));
    let (m, hb) = (b.size(), b.group.order());
    let action = group
        .elements()
        .map(|gh| {
            (0..a.size() * m)
                .map(|x| a.act(gh / hb, x / m) * m + b.act(gh % hb, x % m))
                .collect()
        })
        .collect();
    GSet { group, action }
}

/// The disjoint union of sets over one group, in order.
pub fn coproduct(group: Arc<FiniteGroup>, parts: &[&GSet]) -> Result<GSet> {
    if parts.iter().any(|p| !Arc::ptr_eq(&p.group, &group) && *p.group != *group) {
        return Err(Error::Equivariance("summands over different groups".into()));
    }
    let action = group
        .elements()
        .map(|g| {
            let mut row = Vec::new();
            for p in parts {
                let off = row.len();
                row.extend((0..p.size()).map(|x| off + p.act(g, x)));
            }
            row
        })
        .collect();
    Ok(GSet::new_unchecked(group, action))
}

/// A pushout of `G`-sets with its two legs.
#[derive(Debug, Clone)]
pub struct SetPushout {
    pub object: GSet,
    pub from_a: Vec<usize>,
    pub from_b: Vec<usize>,
}

/// `A ⊔_C B` for equivariant `f: C → A`, `g: C → B`.
pub fn pushout(c: &GSet, a: &GSet, f: &[usize], b: &GSet, g: &[usize]) -> Result<SetPushout> {
    if !c.is_equivariant(a, f) || !c.is_equivariant(b, g) {
        return Err(Error::Equivariance("pushout legs must be equivariant maps out of a common source over one group".into()));
    }
    let na = a.size();
    let mut uf = UnionFind::new(na + b.size());
    for x in 0..c.size() {
        uf.union(f[x], na + g[x]);
    }
    let (class, k) = uf.classes();
    let mut rep = vec![usize::MAX; k];
    for (p, &cl) in class.iter().enumerate() {
        if rep[cl] == usize::MAX {
            rep[cl] = p;
        }
    }
    let act = |h: usize, p: usize| {
        if p < na {
            a.act(h, p)
        } else {
            na + b.act(h, p - na)
        }
    };
    let action = a
        .group
        .elements()
        .map(|h| (0..k).map(|cl| class[act(h, rep[cl])]).collect())
        .collect();
    Ok(SetPushout {
        object: GSet::new_unchecked(a.group.clone(), action),
        from_a: class[..na].to_vec(),
        from_b: class[na..].to_vec(),
    })
}

/// An equivariant bijection `X → Y`, if one exists, found orbit by orbit
/// by matching stabilizers.
pub fn find_equivariant_iso(x: &GSet, y: &GSet) -> Option<Vec<usize>> {
    if !x.same_group(y) || x.size() != y.size() {
        return None;
    }
    let y_orbits = y.orbits();
    let mut used = vec![false; y_orbits.len()];
    let mut map = vec![usize::MAX; x.size()];
    for orbit in x.orbits() {
        let p = orbit[0];
        let stab = x.stabilizer(p);
        let found = y_orbits.iter().enumerate().find_map(|(i, yo)| {
            if used[i] || yo.len() != orbit.len() {
                return None;
            }
            yo.iter().find(|&&q| y.stabilizer(q) == stab).map(|&q| (i, q))
        });
        let (i, q) = found?;
        used[i] = true;
        for g in x.group.elements() {
            map[x.act(g, p)] = y.act(g, q);
        }
    }
    Some(map)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn induced_sizes() {
        let (s3, _) = FiniteGroup::symmetric(3);
        let s3 = Arc::new(s3);
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let emb = Embedding::new(&c2, &s3, vec![0, 2]).unwrap();
        for n in 0..4 {
            let (ind, _) = induce(s3.clone(), &emb, &GSet::trivial(c2.clone(), n)).unwrap();
            assert_eq!(ind.size(), 3 * n);
            assert!(GSet::new(s3.clone(), ind.action().to_vec()).is_ok());
        }
        let triv = Arc::new(FiniteGroup::trivial());
        let c2g = Arc::new(FiniteGroup::cyclic(2));
        let e = Embedding::new(&triv, &c2g, vec![0]).unwrap();
        let (free, _) = induce(c2g, &e, &GSet::trivial(triv, 1)).unwrap();
        assert_eq!(free.size(), 2);
        assert!(free.is_free());
    }

    #[test]
    fn one_identification() {
        let t = Arc::new(FiniteGroup::trivial());
        let c = GSet::trivial(t.clone(), 1);
        let a = GSet::trivial(t.clone(), 2);
        let b = GSet::trivial(t, 1);
        let p = pushout(&c, &a, &[0], &b, &[0]).unwrap();
        assert_eq!(p.object.size(), 2);
    }

    #[test]
    fn swap_square_is_not_free() {
        for n in 1..=4 {
            let sq = GSet::swap_square(n);
            let (g, x) = sq.fixed_point_witness().unwrap();
            assert_eq!(g, 1);
            assert_eq!(x / n, x % n);
        }
        assert!(GSet::regular(Arc::new(FiniteGroup::cyclic(5))).is_free());
    }

    #[test]
    fn iso_search() {
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        let x = GSet::swap_square(2);
        let y = GSet::new(c2, vec![vec![0, 1, 2, 3], vec![1, 0, 2, 3]]).unwrap();
        let m = find_equivariant_iso(&x, &y).unwrap();
        assert!(x.is_equivariant(&y, &m));
        let z = GSet::trivial(x.group.clone(), 4);
        assert!(find_equivariant_iso(&x, &z).is_none());
    }

    #[test]
    fn induction_along_homomorphisms() {
        let s3 = Arc::new(FiniteGroup::symmetric(3).0);
        let c2 = Arc::new(FiniteGroup::cyclic(2));
        // trivial hom: C2 acts on 2 points by swap, induced set collapses the swap
        let x = GSet::regular(c2.clone());
        let ind = induce_hom(s3.clone(), &[0, 0], &x).unwrap();
        assert_eq!(ind.set.size(), 6);
        assert!(ind.set.is_free());
        // injective hom agrees with coset induction in size
        let t = GSet::trivial(Arc::new(FiniteGroup::trivial()), 2);
        let ind = induce_hom(s3.clone(), &[0], &t).unwrap();
        assert_eq!(ind.set.size(), 12);
        assert!(induce_hom(s3, &[1, 1], &x).is_err());
    }

}
