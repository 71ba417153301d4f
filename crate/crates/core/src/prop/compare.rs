//! Matching the colimit of the filtration against the oracle entry.

use serde::Serialize;

use super::filtration::Filtration;
use super::oracle::OracleEntry;
use crate::equivariant::finset::find_equivariant_iso;

#[derive(Debug, Clone, Serialize)]
pub struct Comparison {
    pub stage_sizes: Vec<usize>,
    pub oracle_size: usize,
    /// Colimit elements whose descriptor the oracle does not know.
    pub unmatched: usize,
    /// Oracle classes hit by no colimit element.
    pub uncovered: usize,
    /// Colimit elements sharing an oracle class with another.
    pub merged: usize,
    pub descriptor_collisions: usize,
    /// The descriptor bijection commutes with `Σ_[r]`.
    pub equivariant: bool,
    pub injective_stage_maps: bool,
    pub summand_sizes_consistent: bool,
    /// An equivariant bijection exists at all (orbit-type search).
    pub abstract_iso: bool,
    pub oracle_out_of_window: usize,
    /// Elements the next stage would add.
    pub next_stage_new: usize,
    /// The explicit bijection, colimit element to oracle class.
    pub iso: Option<Vec<usize>>,
}

impl Comparison {
    pub fn passed(&self) -> bool {
        self.iso.is_some()
            && self.equivariant
            && self.injective_stage_maps
            && self.summand_sizes_consistent
            && self.oracle_out_of_window == 0
    }
}

pub fn compare(filt: &Filtration, oracle: &OracleEntry) -> Comparison {
    let top = filt.top();
    let map: Vec<Option<usize>> = top.keys.iter().map(|k| oracle.class_of.get(k).copied()).collect();
    let unmatched = map.iter().filter(|m| m.is_none()).count();
    let mut hits = vec![0usize; oracle.size()];
    for &c in map.iter().flatten() {
        hits[c] += 1;
    }
    let uncovered = hits.iter().filter(|&&h| h == 0).count();
    let merged = hits.iter().map(|&h| h.saturating_sub(1)).sum();
    let equivariant = top.set.group.elements().all(|g| {
        (0..top.size()).all(|e| match (map[top.set.act(g, e)], map[e]) {
            (Some(a), Some(b)) => a == oracle.set.act(g, b),
            _ => false,
        })
    });
    let bijective = unmatched == 0 && uncovered == 0 && merged == 0;
    let sigma = top.set.group.order();
    Comparison {
        stage_sizes: filt.stages.iter().map(|s| s.size()).collect(),
        oracle_size: oracle.size(),
        unmatched,
        uncovered,
        merged,
        descriptor_collisions: filt.stages.iter().map(|s| s.collisions).sum(),
        equivariant,
        injective_stage_maps: filt.stages.iter().all(|s| s.map_is_injective()),
        summand_sizes_consistent: filt
            .stages
            .iter()
            .all(|s| s.summands.iter().all(|x| x.sizes_consistent(sigma))),
        abstract_iso: top.set.same_group(&oracle.set) && find_equivariant_iso(&top.set, &oracle.set).is_some(),
        oracle_out_of_window: oracle.out_of_window,
        next_stage_new: filt.next_new,
        iso: (bijective && equivariant).then(|| map.into_iter().map(|m| m.expect("bijective")).collect()),
    }
}
