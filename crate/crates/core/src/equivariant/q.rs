//! The tower `X^{×t} = Q^t_0 → Q^t_1 → … → Q^t_t = Y^{×t}` of `Σ_t`-sets
//! built from a map of finite sets `i: X → Y` by iterated pushouts.
//!
//! Every element is labelled by the tagged tuples it identifies: a tuple of
//! length `t` whose coordinates are `X(x)` or `Y(y)`. The labels only serve
//! to define the attaching maps; the identifications come from the pushouts.

use std::collections::HashMap;

use crate::error::{Error, Result};

use super::finset::{external_product, induce, pushout, GSet};
use super::group::SymmetricGroup;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Tag {
    X(usize),
    Y(usize),
}

pub type Tagged = Vec<Tag>;

/// One stage `Q^t_q` with the labels of its elements and its canonical map
/// to `Y^{×t}`.
#[derive(Debug, Clone)]
pub struct QObject {
    pub set: GSet,
    /// Every tagged tuple identified into each element, first one canonical.
    pub members: Vec<Vec<Tagged>>,
    index: HashMap<Tagged, usize>,
    /// The map to `Y^{×t}`, tuples encoded base `|Y|`, first coordinate
    /// most significant.
    pub to_y: Vec<usize>,
}

impl QObject {
    pub fn size(&self) -> usize {
        self.set.size()
    }

    pub fn lookup(&self, t: &[Tag]) -> Option<usize> {
        self.index.get(t).copied()
    }

    fn new(set: GSet, members: Vec<Vec<Tagged>>, to_y: Vec<usize>) -> Self {
        let index = members
            .iter()
            .enumerate()
            .flat_map(|(e, ts)| ts.iter().map(move |t| (t.clone(), e)))
            .collect();
        QObject {
            set,
            members,
            index,
            to_y,
        }
    }
}

/// `i: X → Y` between `0..nx` and `0..ny`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SetMap {
    pub nx: usize,
    pub ny: usize,
    pub map: Vec<usize>,
}

impl SetMap {
    pub fn new(nx: usize, ny: usize, map: Vec<usize>) -> Result<Self> {
        if map.len() != nx || map.iter().any(|&y| y >= ny) {
            return Err(Error::Equivariance(format!("not a map from {nx} to {ny} points")));
        }
        Ok(SetMap { nx, ny, map })
    }

    pub fn inclusion(nx: usize, ny: usize) -> Result<Self> {
        SetMap::new(nx, ny, (0..nx).collect())
    }

    pub fn is_injective(&self) -> bool {
        let mut seen = vec![false; self.ny];
        self.map.iter().all(|&y| !std::mem::replace(&mut seen[y], true))
    }

    fn image(&self, t: &[Tag]) -> usize {
        t.iter().fold(0, |acc, tag| {
            acc * self.ny
                + match *tag {
                    Tag::X(x) => self.map[x],
                    Tag::Y(y) => y,
                }
        })
    }
}

/// `Q^t_0, …, Q^t_t` with the maps between consecutive stages.
#[derive(Debug, Clone)]
pub struct QConstruction {
    pub t: usize,
    pub sym: SymmetricGroup,
    pub stages: Vec<QObject>,
    /// `maps[q]` is `Q^t_q → Q^t_{q+1}`.
    pub maps: Vec<Vec<usize>>,
}

impl QConstruction {
    pub fn sizes(&self) -> Vec<usize> {
        self.stages.iter().map(QObject::size).collect()
    }

    /// `i^□t: Q^t_{t−1} → Y^{×t}`; `None` for `t = 0`.
    pub fn pushout_product(&self) -> Option<(&QObject, &[usize])> {
        (self.t > 0).then(|| {
            let q = &self.stages[self.t - 1];
            (q, q.to_y.as_slice())
        })
    }

    pub fn top(&self) -> &QObject {
        &self.stages[self.t]
    }
}

/// The `Σ_t`-set of `t`-tuples of tagged points, all tagged by `tag`.
fn power(sym: &SymmetricGroup, n: usize, tag: fn(usize) -> Tag) -> (GSet, Vec<Tagged>) {
    let t = sym.degree();
    let count = n.pow(t as u32);
    let tuples: Vec<Tagged> = (0..count)
        .map(|mut code| {
            let mut v = vec![tag(0); t];
            for slot in v.iter_mut().rev() {
                *slot = tag(code % n);
                code /= n;
            }
            v
        })
        .collect();
    let encode = |v: &[Tag]| {
        v.iter().fold(0, |acc, x| {
            acc * n
                + match *x {
                    Tag::X(a) | Tag::Y(a) => a,
                }
        })
    };
    let action = sym
        .perms
        .iter()
        .map(|p| tuples.iter().map(|v| encode(&p.permute_left(v))).collect())
        .collect();
    (GSet::new_unchecked(sym.group.clone(), action), tuples)
}

/// Builds `Q^t_q(i)` for every `q`, using `Q^q_{q−1}` for `q < t` from
/// the towers of smaller length.
pub fn q_construction(i: &SetMap, t: usize) -> Result<QConstruction> {
    let mut towers: Vec<QConstruction> = Vec::with_capacity(t + 1);
    for len in 0..=t {
        let tower = build(i, len, &towers)?;
        towers.push(tower);
    }
    Ok(towers.pop().expect("at least one tower"))
}

fn build(i: &SetMap, t: usize, smaller: &[QConstruction]) -> Result<QConstruction> {
    let sym = SymmetricGroup::new(t);
    let (x_set, x_tuples) = power(&sym, i.nx, Tag::X);
    let to_y = x_tuples.iter().map(|v| i.image(v)).collect();
    let mut stages = vec![QObject::new(x_set, x_tuples.into_iter().map(|v| vec![v]).collect(), to_y)];
    let mut maps = Vec::new();
    for q in 1..t {
        let prev = stages.last().expect("stage 0 exists");
        let sym_a = SymmetricGroup::new(t - q);
        let (xs, x_tuples) = power(&sym_a, i.nx, Tag::X);
        let boxed = &smaller[q].stages[q - 1];
        let (yq, y_tuples) = power(&smaller[q].sym, i.ny, Tag::Y);
        let emb = sym.block_embedding(&sym_a, &smaller[q].sym);
        let c_small = external_product(&xs, &boxed.set);
        let b_small = external_product(&xs, &yq);
        let (c, cos) = induce(sym.group.clone(), &emb, &c_small)?;
        let (b, _) = induce(sym.group.clone(), &emb, &b_small)?;
        let (nc, nb, nq, ny_q) = (c_small.size(), b_small.size(), boxed.size(), yq.size());
        let shuffle = |j: usize, v: Tagged| sym.perms[cos.reps[j]].permute_left(&v);
        let concat = |u: usize, tail: &[Tag]| -> Tagged {
            x_tuples[u].iter().chain(tail).copied().collect()
        };
        let mut f = vec![0; c.size()];
        let mut g = vec![0; c.size()];
        for j in 0..cos.reps.len() {
            for u in 0..xs.size() {
                for v in 0..nq {
                    let p = j * nc + u * nq + v;
                    let label = shuffle(j, concat(u, &boxed.members[v][0]));
                    f[p] = prev.lookup(&label).ok_or_else(|| {
                        Error::Equivariance("attaching map leaves the previous stage".into())
                    })?;
                    g[p] = j * nb + u * ny_q + boxed.to_y[v];
                }
            }
        }
        let po = pushout(&c, &prev.set, &f, &b, &g)?;
        let mut members: Vec<Vec<Tagged>> = vec![Vec::new(); po.object.size()];
        for (e, ts) in prev.members.iter().enumerate() {
            members[po.from_a[e]].extend(ts.iter().cloned());
        }
        for j in 0..cos.reps.len() {
            for u in 0..xs.size() {
                for (w, yt) in y_tuples.iter().enumerate() {
                    members[po.from_b[j * nb + u * ny_q + w]].push(shuffle(j, concat(u, yt)));
                }
            }
        }
        let to_y = members.iter().map(|ts| i.image(&ts[0])).collect();
        maps.push(po.from_a);
        stages.push(QObject::new(po.object, members, to_y));
    }
    if t > 0 {
        let (y_set, y_tuples) = power(&sym, i.ny, Tag::Y);
        let to_y = (0..y_tuples.len()).collect();
        maps.push(stages.last().expect("stage t-1 exists").to_y.clone());
        stages.push(QObject::new(y_set, y_tuples.into_iter().map(|v| vec![v]).collect(), to_y));
    }
    Ok(QConstruction { t, sym, stages, maps })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn one_point_into_two() {
        let i = SetMap::inclusion(1, 2).unwrap();
        let q = q_construction(&i, 3).unwrap();
        assert_eq!(q.sizes(), vec![1, 4, 7, 8]);
        for s in &q.stages {
            assert!(GSet::new(s.set.group.clone(), s.set.action().to_vec()).is_ok());
        }
        for (q_idx, m) in q.maps.iter().enumerate() {
            assert!(q.stages[q_idx].set.is_equivariant(&q.stages[q_idx + 1].set, m));
        }
    }

    #[test]
    fn empty_source_kills_the_pushout_product() {
        let i = SetMap::inclusion(0, 3).unwrap();
        for t in 1..=3 {
            let q = q_construction(&i, t).unwrap();
            assert_eq!(q.pushout_product().unwrap().0.size(), 0);
        }
    }

    #[test]
    fn identity_gives_constant_tower() {
        let i = SetMap::inclusion(2, 2).unwrap();
        let q = q_construction(&i, 3).unwrap();
        assert_eq!(q.sizes(), vec![8; 4]);
        let (_, m) = q.pushout_product().unwrap();
        let mut sorted = m.to_vec();
        sorted.sort_unstable();
        assert_eq!(sorted, (0..8).collect::<Vec<_>>());
    }
}
