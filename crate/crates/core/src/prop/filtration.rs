//! The filtration `A = A_0 → A_1 → …` of the pushout of a free prop `A`
//! along `Free(X) → Free(Y)`, computed one profile orbit at a time.
//!
//! Stage `k` glues, for each reduced marked graph `G` with `k`
//! distinguished vertices, the set `Σ_[r] ·_{Aut(G)} (A(n(G)) × Y^k)` to
//! `A_{k−1}` along its part over `Q^k_{k−1}`. Every element carries a
//! descriptor: the decorated graph obtained by substituting the `A`
//! elements and generators into `G`. Descriptors are what the oracle
//! comparison matches on.

use std::collections::HashMap;
use std::sync::Arc;

use rayon::prelude::*;

use super::collection::{Alphabet, Collection, EntrySet};
use super::decorate::{decorate, decorate_distinguished, AutGroup};
use super::decorated::{DecKey, Decorated};
use super::free::FreeProp;
use crate::budget::Budget;
use crate::equivariant::finset::{coproduct, induce_hom, pushout};
use crate::equivariant::q::{q_construction, SetMap, Tag};
use crate::equivariant::GSet;
use crate::error::{Error, Result};
use crate::graph::IsoClassKey;
use crate::marked::{enumerate_reduced, enumerate_reduced_where, MarkedGraph, ReducedClass};
use crate::profiles::ProfilePair;

/// `A` free on `Z`, and `X → Y` at the sorted profile `s` with `f: X → A(s)`.
pub struct PushoutProblem {
    pub a: FreeProp,
    pub s: ProfilePair,
    pub x: Arc<EntrySet>,
    pub y: Arc<EntrySet>,
    pub i: Vec<usize>,
    pub f: Vec<usize>,
    /// Labels of `Z` followed by those of `Y`.
    pub alpha: Arc<Alphabet>,
    preimage: Vec<Option<usize>>,
}

impl std::fmt::Debug for PushoutProblem {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("PushoutProblem")
            .field("a", &self.a)
            .field("s", &self.s)
            .field("i", &self.i)
            .field("f", &self.f)
            .finish()
    }
}

impl PushoutProblem {
    pub fn new(a: FreeProp, x: EntrySet, y: EntrySet, i: Vec<usize>, f: Vec<usize>) -> Result<Self> {
        let s = y.stab.profile.clone();
        if x.stab.profile != s || s != s.orbit_key() {
            return Err(Error::Format("X and Y must sit at the same sorted profile".into()));
        }
        if i.len() != x.len() || !x.set.is_equivariant(&y.set, &i) {
            return Err(Error::Equivariance("i: X → Y is not an equivariant map".into()));
        }
        let mut preimage = vec![None; y.len()];
        for (xi, &yi) in i.iter().enumerate() {
            if preimage[yi].replace(xi).is_some() {
                return Err(Error::Format("i: X → Y must be injective".into()));
            }
        }
        let target = a.entry(&s)?;
        if f.len() != x.len() || !x.set.is_equivariant(&target.set, &f) {
            return Err(Error::Equivariance("f: X → A(s) is not an equivariant map".into()));
        }
        let mut ys = Collection::new();
        ys.insert(y.clone())?;
        let alpha = Arc::new(Alphabet::new(vec![a.alpha.part(0).clone(), ys]));
        Ok(PushoutProblem {
            a,
            s,
            x: Arc::new(x),
            y: Arc::new(y),
            i,
            f,
            alpha,
            preimage,
        })
    }

    /// The decorated graph standing for a tag at a distinguished vertex:
    /// `f(x)` for elements of `X` and their images, a corolla otherwise.
    pub fn ds_piece(&self, tag: Tag) -> Result<Decorated> {
        let x = match tag {
            Tag::X(x) => Some(x),
            Tag::Y(y) => self.preimage[y],
        };
        Ok(match (x, tag) {
            (Some(x), _) => self.a.entry(&self.s)?.elements[self.f[x]].clone(),
            (None, Tag::Y(y)) => {
                Decorated::corolla(&self.s, self.alpha.label(1, &self.s, y).expect("Y labels exist"))
            }
            (None, Tag::X(_)) => unreachable!(),
        })
    }

    /// Reduced graphs with `k` distinguished vertices at `s`, skipping
    /// those with a normal vertex where `A` is empty.
    pub fn classes(&self, r: &ProfilePair, k: usize, budget: &Budget) -> Result<Vec<ReducedClass>> {
        let nonempty = |q: &ProfilePair| self.a.entry(q).map_or(true, |e| !e.is_empty());
        enumerate_reduced_where(&self.a.scheme, r, &self.s, k, budget, &nonempty)
    }

    pub fn is_new(&self, y: usize) -> bool {
        self.preimage[y].is_none()
    }

    pub fn key(&self, d: &Decorated) -> DecKey {
        d.key(&self.alpha)
    }

    fn act_tag(&self, g: usize, t: &Tag) -> Tag {
        match *t {
            Tag::X(x) => Tag::X(self.x.set.act(g, x)),
            Tag::Y(y) => Tag::Y(self.y.set.act(g, y)),
        }
    }
}

/// Bookkeeping for one summand of a stage.
#[derive(Debug, Clone)]
pub struct Summand {
    pub key: IsoClassKey,
    pub marked: MarkedGraph,
    pub aut_order: usize,
    /// Whether `Aut(G, ds) → Σ_[r]` is injective.
    pub acts_on_legs_faithfully: bool,
    pub decoration: usize,
    pub q: usize,
    pub y: usize,
    pub induced_q: usize,
    pub induced_y: usize,
}

impl Summand {
    /// `|Σ_[r]| / |Aut| · |A(n(G))| · |Y^k|` when the leg action is faithful.
    pub fn sizes_consistent(&self, sigma_order: usize) -> bool {
        !self.acts_on_legs_faithfully
            || (self.induced_y * self.aut_order == sigma_order * self.decoration * self.y
                && self.induced_q * self.aut_order == sigma_order * self.decoration * self.q)
    }
}

#[derive(Debug, Clone)]
pub struct Stage {
    pub k: usize,
    pub set: GSet,
    pub descriptors: Vec<Decorated>,
    pub keys: Vec<DecKey>,
    /// `h_k: A_{k−1} → A_k`; empty for stage 0.
    pub from_previous: Vec<usize>,
    pub summands: Vec<Summand>,
    /// Pairs of distinct elements with equal descriptors.
    pub collisions: usize,
    index: HashMap<DecKey, usize>,
}

impl Stage {
    pub fn size(&self) -> usize {
        self.set.size()
    }

    pub fn lookup(&self, key: &DecKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    fn new(k: usize, set: GSet, descriptors: Vec<Decorated>, p: &PushoutProblem) -> Self {
        let keys: Vec<DecKey> = descriptors.iter().map(|d| p.key(d)).collect();
        let mut index = HashMap::new();
        let mut collisions = 0;
        for (e, key) in keys.iter().enumerate() {
            if index.insert(key.clone(), e).is_some() {
                collisions += 1;
            }
        }
        Stage {
            k,
            set,
            descriptors,
            keys,
            from_previous: Vec::new(),
            summands: Vec::new(),
            collisions,
            index,
        }
    }

    pub fn map_is_injective(&self) -> bool {
        let mut seen = vec![false; self.size()];
        self.from_previous.iter().all(|&e| !std::mem::replace(&mut seen[e], true))
    }
}

#[derive(Debug, Clone)]
pub struct Filtration {
    pub profile: ProfilePair,
    pub stages: Vec<Stage>,
    /// Elements that stage `k_max + 1` would add.
    pub next_new: usize,
}

impl Filtration {
    pub fn top(&self) -> &Stage {
        self.stages.last().expect("stage 0 always exists")
    }
}

/// One summand's contribution: the induced sets over `Q^k_{k−1}` and
/// `Y^k`, the map between them, and the descriptors.
struct Piece {
    summand: Summand,
    c: GSet,
    d: GSet,
    c_to_d: Vec<usize>,
    c_descr: Vec<Decorated>,
    d_descr: Vec<Decorated>,
}

fn summand_piece(
    p: &PushoutProblem,
    class: &ReducedClass,
    k: usize,
    budget: &Budget,
    with_descriptors: bool,
) -> Result<Piece> {
    let aut = Arc::new(AutGroup::new(&class.marked, budget.aut_cap)?);
    let dec = decorate(&p.a, aut.clone())?;
    let qc = q_construction(&SetMap::new(p.x.len(), p.y.len(), p.i.clone())?, k)?;
    let (qobj, q_to_top) = qc.pushout_product().expect("k ≥ 1");
    let top = qc.top();
    let act = |g: usize, t: &Tag| p.act_tag(g, t);
    let firsts = |o: &crate::equivariant::q::QObject| -> Vec<Vec<Tag>> {
        o.members.iter().map(|m| m[0].clone()).collect()
    };
    let qset = decorate_distinguished(&aut, &firsts(qobj), act, |t| qobj.lookup(t))?;
    let yset = decorate_distinguished(&aut, &firsts(top), act, |t| top.lookup(t))?;
    let sigma = aut.stab_r.group.clone();
    let zq = crate::equivariant::finset::product(&dec.set, &qset)?;
    let zy = crate::equivariant::finset::product(&dec.set, &yset)?;
    let cq = induce_hom(sigma.clone(), &aut.leg_hom, &zq)?;
    let dy = induce_hom(sigma.clone(), &aut.leg_hom, &zy)?;
    let (nq, ny) = (qset.size(), yset.size());
    let c_to_d: Vec<usize> = cq
        .reps
        .iter()
        .map(|&(g, pt)| dy.class[g * zy.size() + (pt / nq) * ny + q_to_top[pt % nq]])
        .collect();

    let mut faithful = vec![false; sigma.order()];
    let acts_on_legs_faithfully = aut.leg_hom.iter().all(|&h| !std::mem::replace(&mut faithful[h], true));
    let summand = Summand {
        key: class.key.clone(),
        marked: class.marked.clone(),
        aut_order: aut.order(),
        acts_on_legs_faithfully,
        decoration: dec.set.size(),
        q: nq,
        y: ny,
        induced_q: cq.set.size(),
        induced_y: dy.set.size(),
    };
    let (mut c_descr, mut d_descr) = (Vec::new(), Vec::new());
    if with_descriptors {
        let entries = dec
            .vertices
            .iter()
            .map(|&u| p.a.entry(&aut.graph.vertex(u).profile()))
            .collect::<Result<Vec<_>>>()?;
        let flatten = |g: usize, z: usize, tags: &[Tag]| -> Result<Decorated> {
            let mut pieces: Vec<Option<Decorated>> = vec![None; aut.graph.num_vertices()];
            for (pos, (&u, &a)) in dec.vertices.iter().zip(&dec.tuple(z)).enumerate() {
                pieces[u] = Some(entries[pos].elements[a].clone());
            }
            for (&d, &t) in aut.ds.iter().zip(tags) {
                pieces[d] = Some(p.ds_piece(t)?);
            }
            let pieces: Vec<Decorated> = pieces.into_iter().map(|x| x.expect("every vertex")).collect();
            Ok(Decorated::substitute(&aut.graph, &pieces)?.move_listing(&aut.stab_r, g))
        };
        for &(g, pt) in &cq.reps {
            let (z, q) = (pt / nq, pt % nq);
            let mut found: Option<(DecKey, Decorated)> = None;
            for tags in &qobj.members[q] {
                let d = flatten(g, z, tags)?;
                let key = p.key(&d);
                match &found {
                    None => found = Some((key, d)),
                    Some((k0, _)) if *k0 != key => {
                        return Err(Error::Equivariance(format!(
                            "the attaching map is not well defined on summand {}",
                            class.key
                        )))
                    }
                    Some(_) => {}
                }
            }
            c_descr.push(found.expect("elements have members").1);
        }
        for &(g, pt) in &dy.reps {
            let (z, y) = (pt / ny, pt % ny);
            d_descr.push(flatten(g, z, &top.members[y][0])?);
        }
    }
    Ok(Piece {
        summand,
        c: cq.set,
        d: dy.set,
        c_to_d,
        c_descr,
        d_descr,
    })
}

/// Stages `0..=k_max` at the orbit of `r`.
pub fn filtration(p: &PushoutProblem, r: &ProfilePair, k_max: usize, budget: &Budget) -> Result<Filtration> {
    if !p.a.scheme.shrinkable_flag() {
        return Err(Error::Unsupported(format!(
            "the filtration needs a shrinkable scheme; {} is not",
            p.a.scheme.name()
        )));
    }
    let r = r.orbit_key();
    let a0 = p.a.entry(&r)?;
    let mut stages = vec![Stage::new(0, a0.set.clone(), a0.elements.clone(), p)];
    for k in 1..=k_max {
        let prev = stages.last().expect("nonempty");
        let classes = p.classes(&r, k, budget)?;
        let pieces = classes
            .par_iter()
            .map(|c| summand_piece(p, c, k, budget, true))
            .collect::<Result<Vec<_>>>()?;
        let group = prev.set.group.clone();
        let c = coproduct(group.clone(), &pieces.iter().map(|x| &x.c).collect::<Vec<_>>())?;
        let d = coproduct(group, &pieces.iter().map(|x| &x.d).collect::<Vec<_>>())?;
        let mut c_to_d = Vec::with_capacity(c.size());
        let mut d_descr = Vec::with_capacity(d.size());
        let mut attach = Vec::with_capacity(c.size());
        let mut off = 0;
        for piece in &pieces {
            c_to_d.extend(piece.c_to_d.iter().map(|&x| x + off));
            off += piece.d.size();
            d_descr.extend(piece.d_descr.iter().cloned());
            for desc in &piece.c_descr {
                let key = p.key(desc);
                attach.push(prev.lookup(&key).ok_or_else(|| {
                    Error::Equivariance(format!(
                        "stage {k}: an attached element has no counterpart in stage {}",
                        k - 1
                    ))
                })?);
            }
        }
        let po = pushout(&c, &prev.set, &attach, &d, &c_to_d)?;
        let mut descr: Vec<Option<Decorated>> = vec![None; po.object.size()];
        for (e, &t) in po.from_a.iter().enumerate() {
            descr[t].get_or_insert_with(|| prev.descriptors[e].clone());
        }
        for (e, &t) in po.from_b.iter().enumerate() {
            descr[t].get_or_insert_with(|| d_descr[e].clone());
        }
        let descriptors = descr.into_iter().map(|x| x.expect("pushouts are jointly surjective")).collect();
        let mut stage = Stage::new(k, po.object, descriptors, p);
        stage.from_previous = po.from_a;
        stage.summands = pieces.into_iter().map(|x| x.summand).collect();
        stages.push(stage);
    }
    let classes = p.classes(&r, k_max + 1, budget)?;
    let next_new = classes
        .par_iter()
        .map(|c| summand_piece(p, c, k_max + 1, budget, false).map(|x| x.summand.induced_y - x.summand.induced_q))
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .sum();
    Ok(Filtration {
        profile: r,
        stages,
        next_new,
    })
}

/// The map `Y → B(s)` through the spider summand of stage 1: the center
/// carries `y` and every leg a unit.
#[derive(Debug, Clone)]
pub struct UnitMaps {
    /// Image of each element of `Y` in the top stage at `s`.
    pub map: Vec<usize>,
    /// Whether each image's descriptor is the corolla on `y`.
    pub is_corolla: Vec<bool>,
    /// Whether `Y → B` after `i` equals `X → A → B`, for each `x`.
    pub coherent: Vec<bool>,
}

pub fn attach_unit_maps(p: &PushoutProblem, at_s: &Filtration, budget: &Budget) -> Result<UnitMaps> {
    if at_s.profile != p.s || at_s.stages.len() < 2 {
        return Err(Error::Format("unit maps need stage 1 at the attaching profile".into()));
    }
    let spider = crate::marked::spider(&p.s);
    let key = spider.key();
    let classes = enumerate_reduced(&p.a.scheme, &p.s, &p.s, 1, budget)?;
    let class = classes
        .iter()
        .find(|c| c.key == key)
        .ok_or_else(|| Error::Unsupported("the spider is not a reduced member of this scheme".into()))?;
    let aut = AutGroup::new(&class.marked, budget.aut_cap)?;
    let g = &aut.graph;
    let center = aut.ds[0];
    // where each leg of the spider meets the center
    let inc = g.incidence();
    let port_of = |leg: usize, input: bool| -> Option<usize> {
        let e = g.edge(leg);
        let v = if input { e.target()? } else { e.source()? };
        let hop = if input { &inc.out_edges[v.vertex] } else { &inc.in_edges[v.vertex] };
        hop.iter().find_map(|&h| {
            let far = if input { g.edge(h).target()? } else { g.edge(h).source()? };
            (far.vertex == center).then_some(far.port)
        })
    };
    let ins = g.in_listing().iter().map(|&l| port_of(l, true)).collect::<Option<Vec<_>>>();
    let outs = g.out_listing().iter().map(|&l| port_of(l, false)).collect::<Option<Vec<_>>>();
    let (ins, outs) = ins.zip(outs).ok_or_else(|| Error::InvalidGraph("malformed spider".into()))?;
    let sigma = aut.stab_r.index_of(&ins, &outs).expect("the spider preserves colors");
    let mut pieces: Vec<Decorated> = Vec::with_capacity(g.num_vertices());
    let mut map = Vec::with_capacity(p.y.len());
    let mut is_corolla = Vec::with_capacity(p.y.len());
    let top = at_s.top();
    for y in 0..p.y.len() {
        pieces.clear();
        for v in 0..g.num_vertices() {
            pieces.push(if v == center {
                p.ds_piece(Tag::Y(y))?
            } else {
                let unit = p.a.entry(&g.vertex(v).profile())?;
                unit.elements
                    .iter()
                    .find(|d| d.graph.num_vertices() == 0)
                    .cloned()
                    .ok_or_else(|| Error::Unsupported("no unit in A".into()))?
            });
        }
        let d = Decorated::substitute(g, &pieces)?.move_listing(&aut.stab_r, sigma);
        let key = p.key(&d);
        let e = top
            .lookup(&key)
            .ok_or_else(|| Error::Equivariance("a unit-map image is missing from the colimit".into()))?;
        map.push(e);
        let expected = p.ds_piece(Tag::Y(y))?;
        is_corolla.push(top.keys[e] == p.key(&expected));
    }
    // push stage 0 forward to the top
    let a_to_top = |mut e: usize| {
        for st in &at_s.stages[1..] {
            e = st.from_previous[e];
        }
        e
    };
    let coherent = (0..p.x.len()).map(|x| map[p.i[x]] == a_to_top(p.f[x])).collect();
    Ok(UnitMaps {
        map,
        is_corolla,
        coherent,
    })
}
