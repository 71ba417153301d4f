//! Finite-set collections: one `Σ_[r]`-set per sorted profile pair.

use std::collections::{BTreeMap, HashMap};
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use super::sigma::StabGroup;
use crate::equivariant::GSet;
use crate::error::{Error, Result};
use crate::profiles::{ColorSet, ProfilePair, ProfilePairJson};

/// One entry: a `Σ_[r]`-set with element names.
#[derive(Debug, Clone)]
pub struct EntrySet {
    pub stab: Arc<StabGroup>,
    pub set: GSet,
    pub names: Vec<String>,
}

impl EntrySet {
    pub fn trivial(profile: &ProfilePair, names: Vec<String>) -> Self {
        let stab = Arc::new(StabGroup::new(profile));
        let set = GSet::trivial(stab.group.clone(), names.len());
        EntrySet { stab, set, names }
    }

    /// The free `Σ_[r]`-set on the given orbit names; element
    /// `o * |Σ_[r]| + h` is `h` applied to orbit `o`.
    pub fn free(profile: &ProfilePair, orbits: &[String]) -> Self {
        let stab = Arc::new(StabGroup::new(profile));
        let n = stab.order();
        let g = &stab.group;
        let action = g
            .elements()
            .map(|h| (0..orbits.len() * n).map(|x| (x / n) * n + g.mul(h, x % n)).collect())
            .collect();
        let set = GSet::new(g.clone(), action).expect("left multiplication is an action");
        let names = orbits
            .iter()
            .flat_map(|o| (0..n).map(move |h| if h == 0 { o.clone() } else { format!("{o}.{h}") }))
            .collect();
        EntrySet { stab, set, names }
    }

    pub fn len(&self) -> usize {
        self.set.size()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }
}

#[derive(Debug, Clone, Default)]
pub struct Collection {
    entries: BTreeMap<ProfilePair, Arc<EntrySet>>,
}

impl Collection {
    pub fn new() -> Self {
        Collection::default()
    }

    /// Adds an entry at a sorted profile pair.
    pub fn insert(&mut self, entry: EntrySet) -> Result<()> {
        let p = entry.stab.profile.clone();
        if p != p.orbit_key() {
            return Err(Error::Format(format!("entry profile {p} is not sorted")));
        }
        if self.entries.insert(p.clone(), Arc::new(entry)).is_some() {
            return Err(Error::Format(format!("duplicate entry at {p}")));
        }
        Ok(())
    }

    pub fn get(&self, p: &ProfilePair) -> Option<&Arc<EntrySet>> {
        self.entries.get(&p.orbit_key())
    }

    pub fn profiles(&self) -> impl Iterator<Item = &ProfilePair> {
        self.entries.keys()
    }

    pub fn entries(&self) -> impl Iterator<Item = (&ProfilePair, &Arc<EntrySet>)> {
        self.entries.iter()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.values().all(|e| e.is_empty())
    }
}

/// A label alphabet for decorated graphs: the elements of several
/// collections, numbered consecutively.
#[derive(Debug, Clone)]
pub struct Alphabet {
    parts: Vec<Collection>,
    /// `(part, profile) → first label`.
    offsets: HashMap<(usize, ProfilePair), usize>,
    labels: Vec<LabelInfo>,
}

#[derive(Debug, Clone)]
pub struct LabelInfo {
    pub part: usize,
    pub profile: ProfilePair,
    pub local: usize,
    pub entry: Arc<EntrySet>,
}

impl Alphabet {
    pub fn new(parts: Vec<Collection>) -> Self {
        let mut offsets = HashMap::new();
        let mut labels = Vec::new();
        for (i, c) in parts.iter().enumerate() {
            for (p, e) in c.entries() {
                offsets.insert((i, p.clone()), labels.len());
                for local in 0..e.len() {
                    labels.push(LabelInfo {
                        part: i,
                        profile: p.clone(),
                        local,
                        entry: e.clone(),
                    });
                }
            }
        }
        Alphabet {
            parts,
            offsets,
            labels,
        }
    }

    pub fn part(&self, i: usize) -> &Collection {
        &self.parts[i]
    }

    pub fn len(&self) -> usize {
        self.labels.len()
    }

    pub fn is_empty(&self) -> bool {
        self.labels.is_empty()
    }

    pub fn info(&self, label: usize) -> &LabelInfo {
        &self.labels[label]
    }

    pub fn label(&self, part: usize, profile: &ProfilePair, local: usize) -> Option<usize> {
        self.offsets.get(&(part, profile.clone())).map(|o| o + local)
    }

    /// Labels available at a sorted vertex profile, over all parts.
    pub fn labels_at(&self, profile: &ProfilePair) -> Vec<usize> {
        (0..self.parts.len())
            .filter_map(|i| {
                let e = self.parts[i].get(profile)?;
                let o = self.offsets[&(i, profile.clone())];
                Some(o..o + e.len())
            })
            .flatten()
            .collect()
    }

    /// `g · label` for `g` in the stabilizer of the label's profile.
    pub fn act(&self, label: usize, g: usize) -> usize {
        let info = &self.labels[label];
        label - info.local + info.entry.set.act(g, info.local)
    }

    pub fn vertex_profiles(&self) -> Vec<ProfilePair> {
        let mut v: Vec<ProfilePair> = self
            .parts
            .iter()
            .flat_map(|c| c.entries().filter(|(_, e)| !e.is_empty()).map(|(p, _)| p.clone()))
            .collect();
        v.sort();
        v.dedup();
        v
    }

    pub fn name(&self, label: usize) -> &str {
        let info = &self.labels[label];
        &info.entry.names[info.local]
    }
}

/// How an entry's group acts in JSON: `"trivial"`, `"free"` (the names
/// are orbit names) or an explicit table, one permutation per element of
/// `Σ_[r]` in its internal order.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(untagged)]
pub enum ActionJson {
    Kind(ActionKind),
    Table { table: Vec<Vec<usize>> },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActionKind {
    Trivial,
    Free,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct EntryJson {
    pub profile: ProfilePairJson,
    pub elements: Vec<String>,
    #[serde(default = "trivial_action")]
    pub action: ActionJson,
}

fn trivial_action() -> ActionJson {
    ActionJson::Kind(ActionKind::Trivial)
}

impl EntryJson {
    pub fn build(&self, colors: &ColorSet) -> Result<EntrySet> {
        let p = self.profile.to_pair(colors)?;
        if p != p.orbit_key() {
            return Err(Error::Format(format!(
                "entry profile {} must list colors in sorted order",
                p.display(colors)
            )));
        }
        Ok(match &self.action {
            ActionJson::Kind(ActionKind::Trivial) => EntrySet::trivial(&p, self.elements.clone()),
            ActionJson::Kind(ActionKind::Free) => EntrySet::free(&p, &self.elements),
            ActionJson::Table { table } => {
                let stab = Arc::new(StabGroup::new(&p));
                let set = GSet::new(stab.group.clone(), table.clone())?;
                if set.size() != self.elements.len() {
                    return Err(Error::Format("action table and element list disagree".into()));
                }
                EntrySet {
                    stab,
                    set,
                    names: self.elements.clone(),
                }
            }
        })
    }
}

pub fn collection_from_json(entries: &[EntryJson], colors: &ColorSet) -> Result<Collection> {
    let mut c = Collection::new();
    for e in entries {
        c.insert(e.build(colors)?)?;
    }
    Ok(c)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::profiles::Color;

    #[test]
    fn free_entries_are_free() {
        let c = Color(0);
        let p = ProfilePair::new(vec![c, c], vec![c]);
        let e = EntrySet::free(&p, &["mu".into()]);
        assert_eq!(e.len(), 2);
        assert!(e.set.is_free());
        assert_eq!(e.names, vec!["mu".to_string(), "mu.1".to_string()]);
    }

    #[test]
    fn alphabet_numbering() {
        let c = Color(0);
        let p = ProfilePair::new(vec![c, c], vec![c]);
        let mut a = Collection::new();
        a.insert(EntrySet::free(&p, &["mu".into()])).unwrap();
        let mut b = Collection::new();
        b.insert(EntrySet::free(&p, &["y".into()])).unwrap();
        let alpha = Alphabet::new(vec![a, b]);
        assert_eq!(alpha.labels_at(&p), vec![0, 1, 2, 3]);
        assert_eq!(alpha.act(2, 1), 3);
        assert_eq!(alpha.name(3), "y.1");
    }
}
