//! The pushout computed by brute force: decorated graphs over `Z ⊔ Y` up
//! to the congruence generated by `i(x) ~ f(x)`, one entry at a time.

use std::collections::HashMap;

use super::decorated::{DecKey, Decorated};
use super::filtration::PushoutProblem;
use super::free::FreeProp;
use crate::budget::Budget;
use crate::equivariant::q::Tag;
use crate::equivariant::GSet;
use crate::error::{Error, Result};
use crate::graph::UnionFind;
use crate::profiles::ProfilePair;

#[derive(Debug, Clone)]
pub struct OracleEntry {
    pub profile: ProfilePair,
    pub set: GSet,
    /// Class of every decorated graph in the window, by key.
    pub class_of: HashMap<DecKey, usize>,
    /// Least element of each class.
    pub reps: Vec<Decorated>,
    /// Decorated graphs before the quotient.
    pub raw: usize,
    /// Rewrites whose result fell outside the vertex window.
    pub out_of_window: usize,
    pub steps: usize,
}

impl OracleEntry {
    pub fn size(&self) -> usize {
        self.set.size()
    }
}

/// The entry at `r` of `A ⊔_{Free(X)} Free(Y)`, enumerating decorated
/// graphs with at most `max_vertices` vertices.
pub fn pushout_oracle(p: &PushoutProblem, r: &ProfilePair, max_vertices: usize, budget: &Budget) -> Result<OracleEntry> {
    let r = r.orbit_key();
    let free = FreeProp::with_alphabet(p.a.scheme.clone(), p.alpha.clone(), p.a.colors, max_vertices);
    let entry = free.entry(&r)?;
    let n = entry.len();
    let mut uf = UnionFind::new(n);
    let (mut steps, mut out_of_window) = (0usize, 0usize);
    // elements are already sorted by key, so the sweep is deterministic
    for e in 0..n {
        let d = &entry.elements[e];
        for (v, &label) in d.labels.iter().enumerate() {
            let info = p.alpha.info(label);
            if info.part != 1 || p.is_new(info.local) {
                continue;
            }
            steps += 1;
            if steps > budget.saturation_steps {
                return Err(Error::IncompleteOracle(format!(
                    "saturation at {r} exceeded {} steps",
                    budget.saturation_steps
                )));
            }
            let rewritten = d.substitute_at(v, &p.ds_piece(Tag::Y(info.local))?)?;
            match entry.lookup(&p.key(&rewritten)) {
                Some(t) => {
                    uf.union(e, t);
                }
                None => out_of_window += 1,
            }
        }
    }
    let (class, k) = uf.classes();
    let mut reps: Vec<Option<Decorated>> = vec![None; k];
    for (e, &c) in class.iter().enumerate() {
        reps[c].get_or_insert_with(|| entry.elements[e].clone());
    }
    let action = entry
        .set
        .group
        .elements()
        .map(|g| {
            let mut row = vec![usize::MAX; k];
            for e in 0..n {
                let t = class[entry.set.act(g, e)];
                let slot = &mut row[class[e]];
                if *slot != usize::MAX && *slot != t {
                    return Err(Error::Equivariance(format!("the congruence at {r} is not invariant")));
                }
                *slot = t;
            }
            Ok(row)
        })
        .collect::<Result<Vec<_>>>()?;
    Ok(OracleEntry {
        profile: r,
        set: GSet::new(entry.set.group.clone(), action)?,
        class_of: entry.keys.iter().cloned().zip(class.iter().copied()).collect(),
        reps: reps.into_iter().map(|x| x.expect("classes are nonempty")).collect(),
        raw: n,
        out_of_window,
        steps,
    })
}
