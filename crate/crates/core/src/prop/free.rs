//! Free props on finite-set generators, truncated by vertex count. An
//! element of the entry at `r` is a member graph with profile exactly `r`
//! whose vertices are labelled by generators, up to isomorphism.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, OnceLock};

use itertools::Itertools;

use super::collection::{Alphabet, Collection};
use super::decorated::{DecKey, Decorated};
use super::sigma::{sort_ports, StabGroup};
use crate::budget::Budget;
use crate::equivariant::GSet;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::profiles::ProfilePair;
use crate::schemes::{enumerate_graphs, Bound, PastingScheme};

/// One entry of a prop: a `Σ_[r]`-set of decorated graphs.
#[derive(Debug, Clone)]
pub struct PropEntry {
    pub profile: ProfilePair,
    pub stab: Arc<StabGroup>,
    pub elements: Vec<Decorated>,
    pub keys: Vec<DecKey>,
    index: HashMap<DecKey, usize>,
    pub set: GSet,
}

impl PropEntry {
    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn lookup(&self, key: &DecKey) -> Option<usize> {
        self.index.get(key).copied()
    }

    /// Builds the entry from decorated graphs with profile `profile`,
    /// closing nothing: every listing must already be present.
    pub fn from_elements(profile: &ProfilePair, alpha: &Alphabet, elements: Vec<Decorated>) -> Result<Self> {
        let stab = Arc::new(StabGroup::new(profile));
        let mut keyed: Vec<(DecKey, Decorated)> = elements.into_iter().map(|d| (d.key(alpha), d)).collect();
        keyed.sort_by(|a, b| a.0.cmp(&b.0));
        keyed.dedup_by(|a, b| a.0 == b.0);
        let (keys, elements): (Vec<DecKey>, Vec<Decorated>) = keyed.into_iter().unzip();
        let index: HashMap<DecKey, usize> = keys.iter().cloned().enumerate().map(|(i, k)| (k, i)).collect();
        let action = stab
            .group
            .elements()
            .map(|g| {
                elements
                    .iter()
                    .map(|d| {
                        index.get(&d.move_listing(&stab, g).key(alpha)).copied().ok_or_else(|| {
                            Error::Truncation(format!("entry at {profile} is not closed under relisting"))
                        })
                    })
                    .collect::<Result<Vec<_>>>()
            })
            .collect::<Result<Vec<_>>>()?;
        let set = GSet::new(stab.group.clone(), action)?;
        Ok(PropEntry {
            profile: profile.clone(),
            stab,
            elements,
            keys,
            index,
            set,
        })
    }
}

/// The free prop on `generators` in `scheme`, keeping graphs with at most
/// `max_vertices` vertices.
pub struct FreeProp {
    pub scheme: PastingScheme,
    pub alpha: Arc<Alphabet>,
    pub max_vertices: usize,
    pub colors: usize,
    pub budget: Budget,
    graphs: OnceLock<std::result::Result<Vec<Graph>, Error>>,
    entries: Mutex<HashMap<ProfilePair, Arc<PropEntry>>>,
}

impl std::fmt::Debug for FreeProp {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("FreeProp")
            .field("scheme", &self.scheme.name())
            .field("max_vertices", &self.max_vertices)
            .finish()
    }
}

impl FreeProp {
    pub fn new(scheme: PastingScheme, generators: Collection, colors: usize, max_vertices: usize) -> Self {
        FreeProp::with_alphabet(scheme, Arc::new(Alphabet::new(vec![generators])), colors, max_vertices)
    }

    pub fn with_alphabet(scheme: PastingScheme, alpha: Arc<Alphabet>, colors: usize, max_vertices: usize) -> Self {
        FreeProp {
            scheme,
            alpha,
            max_vertices,
            colors,
            budget: Budget::from_env(),
            graphs: OnceLock::new(),
            entries: Mutex::new(HashMap::new()),
        }
    }

    /// The initial prop: no generators.
    pub fn initial(scheme: PastingScheme, colors: usize) -> Self {
        FreeProp::new(scheme, Collection::new(), colors, 0)
    }

    /// Member graphs within the truncation whose vertices can be labelled.
    fn graphs(&self) -> Result<&[Graph]> {
        let r = self.graphs.get_or_init(|| {
            let profiles = self.alpha.vertex_profiles();
            let max_arity = profiles.iter().map(ProfilePair::arity).max().unwrap_or(0);
            let bound = Bound::new(self.max_vertices, (max_arity * self.max_vertices).max(1), self.colors);
            let mut universe = self.scheme.universe(bound);
            let base = universe.vertex_ok.clone();
            universe.vertex_ok = Arc::new(move |p| base(p) && profiles.contains(&p.orbit_key()));
            Ok(enumerate_graphs(&universe, &self.budget)?
                .into_iter()
                .map(|(_, g)| g)
                .filter(|g| self.scheme.member(g))
                .map(|g| sort_ports(&g))
                .collect())
        });
        r.as_deref().map_err(Clone::clone)
    }

    /// The entry at the sorted profile `r`. Fails with a truncation error
    /// when some element reaches the vertex bound and the bound is not
    /// known to be sufficient.
    pub fn entry(&self, r: &ProfilePair) -> Result<Arc<PropEntry>> {
        let r = r.orbit_key();
        if let Some(e) = self.entries.lock().expect("entry cache").get(&r) {
            return Ok(e.clone());
        }
        let stab = StabGroup::new(&r);
        let mut elements = Vec::new();
        let mut boundary = false;
        for g in self.graphs()?.iter().filter(|g| g.profile() == r) {
            let choices: Vec<Vec<usize>> =
                g.vertices().iter().map(|v| self.alpha.labels_at(&v.profile())).collect();
            for labels in product_or_unit(&choices) {
                boundary |= g.num_vertices() == self.max_vertices && self.max_vertices > 0;
                for e in stab.group.elements() {
                    elements.push(Decorated {
                        graph: stab.move_listing(g, e),
                        labels: labels.clone(),
                    });
                }
            }
        }
        if boundary && !self.certified(&r) {
            return Err(Error::Truncation(format!(
                "entry at {r} reaches the bound of {} vertices",
                self.max_vertices
            )));
        }
        let entry = Arc::new(PropEntry::from_elements(&r, &self.alpha, elements)?);
        self.entries.lock().expect("entry cache").insert(r, entry.clone());
        Ok(entry)
    }

    /// Whether every member with profile `r` fits in the bound: in a tree
    /// whose vertices all have degree at least 3, `|V| ≤ |legs| − 2`.
    pub fn certified(&self, r: &ProfilePair) -> bool {
        let forest = self.scheme.universe(Bound::default()).forest;
        let min_degree = self.alpha.vertex_profiles().iter().map(ProfilePair::arity).min();
        match min_degree {
            None => true,
            Some(d) => forest && d >= 3 && r.arity() < self.max_vertices + 3,
        }
    }

    pub fn lookup(&self, d: &Decorated) -> Result<Option<usize>> {
        Ok(self.entry(&d.profile())?.lookup(&d.key(&self.alpha)))
    }

    /// The structure map: substitute the `v`-th element into vertex `v`.
    pub fn compose(&self, g: &Graph, pieces: &[Decorated]) -> Result<Decorated> {
        Decorated::substitute(g, pieces)
    }
}

/// All choices of one item per slot; a single empty choice for no slots.
pub(crate) fn product_or_unit(slots: &[Vec<usize>]) -> Vec<Vec<usize>> {
    if slots.is_empty() {
        return vec![Vec::new()];
    }
    slots.iter().map(|c| c.iter().copied()).multi_cartesian_product().collect()
}

#[cfg(test)]
mod tests {
    use super::super::collection::EntrySet;
    use super::*;
    use crate::profiles::Color;
    use crate::schemes::Builtin;

    const C: Color = Color(0);

    #[test]
    fn initial_prop_wheeled_and_not() {
        let unit = ProfilePair::unary(C);
        let empty = ProfilePair::default();
        let wf = FreeProp::initial(PastingScheme::builtin(Builtin::ConnectedWheelFree), 1);
        assert_eq!(wf.entry(&unit).unwrap().len(), 1);
        assert_eq!(wf.entry(&empty).unwrap().len(), 0);
        let w = FreeProp::initial(PastingScheme::builtin(Builtin::ConnectedWheeled), 1);
        assert_eq!(w.entry(&unit).unwrap().len(), 1);
        assert_eq!(w.entry(&empty).unwrap().len(), 1);
        assert_eq!(w.entry(&ProfilePair::new(vec![C, C], vec![C])).unwrap().len(), 0);
    }

    #[test]
    fn binary_trees_with_free_generator() {
        let p = ProfilePair::new(vec![C, C], vec![C]);
        let mut z = Collection::new();
        z.insert(EntrySet::free(&p, &["mu".into()])).unwrap();
        let a = FreeProp::new(PastingScheme::builtin(Builtin::UnitalTrees), z, 1, 3);
        // a free Σ_2-generator gives n! · Catalan(n−1) at arity n
        assert_eq!(a.entry(&p).unwrap().len(), 2);
        assert_eq!(a.entry(&ProfilePair::new(vec![C; 3], vec![C])).unwrap().len(), 6 * 2);
        assert_eq!(a.entry(&ProfilePair::new(vec![C; 4], vec![C])).unwrap().len(), 24 * 5);
        assert!(a.entry(&ProfilePair::new(vec![C; 4], vec![C])).unwrap().set.is_free());
    }
}
