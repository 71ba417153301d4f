//! Finite sets and finite-dimensional rational vector spaces with finite
//! group actions: induction, pushouts, products and the Q-construction.

pub mod finset;
pub mod finvect;
pub mod group;
pub mod linalg;
pub mod q;

use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

pub use finset::{coproduct, induce_hom, GSet, HomInduced};
pub use finvect::GVect;
pub use group::{Cosets, Embedding, FiniteGroup, GroupJson, SymmetricGroup};
pub use linalg::{Matrix, Q};
pub use q::{q_construction, QConstruction, SetMap};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum EquivariantObject {
    FinSet(GSet),
    FinVect(GVect),
}

/// The underlying map of an equivariant map.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum MapData {
    Function(Vec<usize>),
    Linear(Matrix),
}

#[derive(Debug, Clone)]
pub struct EquivariantMap {
    pub source: EquivariantObject,
    pub target: EquivariantObject,
    pub map: MapData,
}

impl EquivariantMap {
    pub fn new(source: EquivariantObject, target: EquivariantObject, map: MapData) -> Result<Self> {
        let ok = match (&source, &target, &map) {
            (EquivariantObject::FinSet(a), EquivariantObject::FinSet(b), MapData::Function(f)) => {
                a.is_equivariant(b, f)
            }
            (EquivariantObject::FinVect(a), EquivariantObject::FinVect(b), MapData::Linear(m)) => {
                a.is_equivariant(b, m)
            }
            _ => return Err(Error::Equivariance("mixed base categories".into())),
        };
        if !ok {
            return Err(Error::Equivariance("the map does not commute with the action".into()));
        }
        Ok(EquivariantMap { source, target, map })
    }
}

/// Result of the free-action check: a nonidentity element with a fixed point.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct FreeCheck {
    pub free: bool,
    pub witness: Option<FixedPoint>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct FixedPoint {
    pub element: usize,
    pub point: usize,
}

impl EquivariantObject {
    pub fn group(&self) -> &Arc<FiniteGroup> {
        match self {
            EquivariantObject::FinSet(x) => &x.group,
            EquivariantObject::FinVect(v) => &v.group,
        }
    }

    /// Number of elements or dimension.
    pub fn size(&self) -> usize {
        match self {
            EquivariantObject::FinSet(x) => x.size(),
            EquivariantObject::FinVect(v) => v.dim(),
        }
    }

    pub fn is_free_action(&self) -> Result<FreeCheck> {
        match self {
            EquivariantObject::FinSet(x) => {
                let witness = x
                    .fixed_point_witness()
                    .map(|(element, point)| FixedPoint { element, point });
                Ok(FreeCheck {
                    free: witness.is_none(),
                    witness,
                })
            }
            EquivariantObject::FinVect(_) => Err(Error::Unsupported(
                "the free-action check applies to finite sets only".into(),
            )),
        }
    }

    /// Projectivity over the group algebra; for finite sets this is
    /// freeness, for rational representations it always holds.
    pub fn is_projective(&self) -> bool {
        match self {
            EquivariantObject::FinSet(x) => x.is_free(),
            EquivariantObject::FinVect(v) => v.is_projective(),
        }
    }
}

pub fn induce(group: Arc<FiniteGroup>, emb: &Embedding, x: &EquivariantObject) -> Result<EquivariantObject> {
    Ok(match x {
        EquivariantObject::FinSet(s) => EquivariantObject::FinSet(finset::induce(group, emb, s)?.0),
        EquivariantObject::FinVect(v) => EquivariantObject::FinVect(finvect::induce(group, emb, v)?.0),
    })
}

/// A pushout with both legs.
#[derive(Debug, Clone)]
pub struct Pushout {
    pub object: EquivariantObject,
    pub from_a: MapData,
    pub from_b: MapData,
}

pub fn pushout(f: &EquivariantMap, g: &EquivariantMap) -> Result<Pushout> {
    use EquivariantObject::{FinSet, FinVect};
    match (&f.source, &f.target, &f.map, &g.source, &g.target, &g.map) {
        (FinSet(c), FinSet(a), MapData::Function(fm), FinSet(c2), FinSet(b), MapData::Function(gm)) if c == c2 => {
            let p = finset::pushout(c, a, fm, b, gm)?;
            Ok(Pushout {
                object: FinSet(p.object),
                from_a: MapData::Function(p.from_a),
                from_b: MapData::Function(p.from_b),
            })
        }
        (FinVect(c), FinVect(a), MapData::Linear(fm), FinVect(c2), FinVect(b), MapData::Linear(gm)) if c == c2 => {
            let p = finvect::pushout(c, a, fm, b, gm)?;
            Ok(Pushout {
                object: FinVect(p.object),
                from_a: MapData::Linear(p.from_a),
                from_b: MapData::Linear(p.from_b),
            })
        }
        _ => Err(Error::Equivariance("pushout legs need a common source in one base category".into())),
    }
}

/// The monoidal product with the diagonal action.
pub fn tensor(a: &EquivariantObject, b: &EquivariantObject) -> Result<EquivariantObject> {
    match (a, b) {
        (EquivariantObject::FinSet(x), EquivariantObject::FinSet(y)) => {
            Ok(EquivariantObject::FinSet(finset::product(x, y)?))
        }
        (EquivariantObject::FinVect(x), EquivariantObject::FinVect(y)) => {
            Ok(EquivariantObject::FinVect(finvect::tensor(x, y)?))
        }
        _ => Err(Error::Equivariance("mixed base categories".into())),
    }
}

/// JSON form: finite sets list their elements and one permutation per
/// group element; vector spaces give the dimension and one matrix of
/// `"p/q"` strings per group element.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ObjectJson {
    Finset {
        group: GroupJson,
        elements: Vec<String>,
        action: Vec<Vec<usize>>,
    },
    Finvect {
        group: GroupJson,
        dim: usize,
        action: Vec<Vec<Vec<String>>>,
    },
}

impl ObjectJson {
    pub fn from_object(x: &EquivariantObject, group: GroupJson, names: Option<Vec<String>>) -> Self {
        match x {
            EquivariantObject::FinSet(s) => ObjectJson::Finset {
                group,
                elements: names.unwrap_or_else(|| (0..s.size()).map(|i| i.to_string()).collect()),
                action: s.action().to_vec(),
            },
            EquivariantObject::FinVect(v) => ObjectJson::Finvect {
                group,
                dim: v.dim(),
                action: v.action().iter().map(matrix_to_strings).collect(),
            },
        }
    }

    pub fn group(&self) -> &GroupJson {
        match self {
            ObjectJson::Finset { group, .. } | ObjectJson::Finvect { group, .. } => group,
        }
    }

    pub fn to_object(&self, group: Arc<FiniteGroup>) -> Result<EquivariantObject> {
        match self {
            ObjectJson::Finset {
                elements, action, ..
            } => {
                let set = GSet::new(group, action.clone())?;
                if set.size() != elements.len() && !(elements.is_empty() && action.iter().all(Vec::is_empty)) {
                    return Err(Error::Format("element list and action tables disagree in size".into()));
                }
                Ok(EquivariantObject::FinSet(set))
            }
            ObjectJson::Finvect { dim, action, .. } => {
                let mats = action
                    .iter()
                    .map(|m| matrix_from_strings(*dim, *dim, m))
                    .collect::<Result<Vec<_>>>()?;
                Ok(EquivariantObject::FinVect(GVect::new(group, *dim, mats)?))
            }
        }
    }
}

pub fn matrix_to_strings(m: &Matrix) -> Vec<Vec<String>> {
    m.to_rows()
        .into_iter()
        .map(|r| r.into_iter().map(|x| format!("{}/{}", x.numer(), x.denom())).collect())
        .collect()
}

pub fn matrix_from_strings(rows: usize, cols: usize, m: &[Vec<String>]) -> Result<Matrix> {
    let entries = m
        .iter()
        .map(|r| {
            r.iter()
                .map(|s| linalg::parse_rational(s).ok_or_else(|| Error::Format(format!("bad rational `{s}`"))))
                .collect::<Result<Vec<_>>>()
        })
        .collect::<Result<Vec<_>>>()?;
    Matrix::from_rows(rows, cols, entries).ok_or_else(|| Error::Format("matrix has the wrong shape".into()))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn trivial_group_is_always_free() {
        let x = EquivariantObject::FinSet(GSet::trivial(Arc::new(FiniteGroup::trivial()), 5));
        assert!(x.is_free_action().unwrap().free);
        let v = EquivariantObject::FinVect(GVect::trivial(Arc::new(FiniteGroup::cyclic(2)), 2));
        assert!(matches!(v.is_free_action(), Err(Error::Unsupported(_))));
        assert!(v.is_projective());
    }

    #[test]
    fn json_round_trip() {
        let g = GroupJson::Cyclic(2);
        let grp = Arc::new(g.build().unwrap());
        let x = EquivariantObject::FinSet(GSet::swap_square(2));
        let j = ObjectJson::from_object(&x, g.clone(), None);
        assert_eq!(j.to_object(grp.clone()).unwrap(), x);
        let v = EquivariantObject::FinVect(GVect::permutation(grp.clone(), GSet::swap_square(2).action()));
        let j = ObjectJson::from_object(&v, g, None);
        let text = serde_json::to_string(&j).unwrap();
        assert!(text.contains("\"1/1\""));
        let back: ObjectJson = serde_json::from_str(&text).unwrap();
        assert_eq!(back.to_object(grp).unwrap(), v);
    }
}
