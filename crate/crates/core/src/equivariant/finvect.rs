//! Finite-dimensional rational representations of finite groups.

use std::sync::Arc;

use num::Zero;

use crate::error::{Error, Result};

use super::group::{Cosets, Embedding, FiniteGroup};
use super::linalg::{Matrix, Q};

/// `Q^dim` with `action[g]` the matrix of `g` in the standard basis.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GVect {
    pub group: Arc<FiniteGroup>,
    dim: usize,
    action: Vec<Matrix>,
}

impl GVect {
    pub fn new(group: Arc<FiniteGroup>, dim: usize, action: Vec<Matrix>) -> Result<Self> {
        let bad = |m: String| Err(Error::Equivariance(m));
        if action.len() != group.order() || action.iter().any(|m| m.rows() != dim || m.cols() != dim) {
            return bad("one square matrix of the right size per group element is required".into());
        }
        if action[group.identity()] != Matrix::identity(dim) {
            return bad("the identity must act trivially".into());
        }
        for a in group.elements() {
            for b in group.elements() {
                if action[group.mul(a, b)] != action[a].mul(&action[b]) {
                    return bad(format!("the action is not a homomorphism at ({a}, {b})"));
                }
            }
        }
        Ok(GVect { group, dim, action })
    }

    pub fn trivial(group: Arc<FiniteGroup>, dim: usize) -> Self {
        let action = vec![Matrix::identity(dim); group.order()];
        GVect { group, dim, action }
    }

    /// The linearization of a permutation action.
    pub fn permutation(group: Arc<FiniteGroup>, action: &[Vec<usize>]) -> Self {
        let dim = action.first().map_or(0, Vec::len);
        let action = action.iter().map(|p| Matrix::permutation(p)).collect();
        GVect { group, dim, action }
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn act(&self, g: usize) -> &Matrix {
        &self.action[g]
    }

    pub fn action(&self) -> &[Matrix] {
        &self.action
    }

    pub fn same_group(&self, other: &GVect) -> bool {
        Arc::ptr_eq(&self.group, &other.group) || self.group == other.group
    }

    /// Checks that the `target.dim × self.dim` matrix `map` commutes with
    /// the actions.
    pub fn is_equivariant(&self, target: &GVect, map: &Matrix) -> bool {
        self.same_group(target)
            && map.rows() == target.dim
            && map.cols() == self.dim
            && self
                .group
                .elements()
                .all(|g| map.mul(&self.action[g]) == target.action[g].mul(map))
    }

    /// Over the rationals every representation of a finite group is
    /// projective (Maschke), so this always holds.
    pub fn is_projective(&self) -> bool {
        true
    }

    /// The invariant subspace as the image of the averaging idempotent,
    /// returned as a basis matrix.
    pub fn averaging_idempotent(&self) -> Matrix {
        let mut sum = Matrix::zeros(self.dim, self.dim);
        for m in &self.action {
            sum = sum.add(m);
        }
        sum.scale(&Q::new(1.into(), (self.group.order() as i64).into()))
    }
}

/// `G ·_H V`: basis vector `(coset j, i)` is `j * dim V + i`.
pub fn induce(group: Arc<FiniteGroup>, emb: &Embedding, v: &GVect) -> Result<(GVect, Cosets)> {
    let sub = &v.group;
    let emb = Embedding::new(sub, &group, emb.map.clone())?;
    let cos = Cosets::new(&group, sub, &emb);
    let n = v.dim;
    let k = cos.reps.len();
    let action = group
        .elements()
        .map(|g| {
            let mut m = Matrix::zeros(k * n, k * n);
            for (j, &r) in cos.reps.iter().enumerate() {
                let (l, h) = cos.decompose[group.mul(g, r)];
                let a = v.act(h);
                for row in 0..n {
                    for col in 0..n {
                        m[(l * n + row, j * n + col)] = a[(row, col)].clone();
                    }
                }
            }
            m
        })
        .collect();
    Ok((
        GVect {
            group,
            dim: k * n,
            action,
        },
        cos,
    ))
}

/// `V ⊗ W` with the diagonal action, in the Kronecker basis.
pub fn tensor(a: &GVect, b: &GVect) -> Result<GVect> {
    if !a.same_group(b) {
        return Err(Error::Equivariance("factors over different groups".into()));
    }
    let action = a.action.iter().zip(&b.action).map(|(x, y)| x.kronecker(y)).collect();
    Ok(GVect {
        group: a.group.clone(),
        dim: a.dim * b.dim,
        action,
    })
}

/// A pushout of representations: `P = (A ⊕ B) / im(f, −g)`.
#[derive(Debug, Clone)]
pub struct VectPushout {
    pub object: GVect,
    pub from_a: Matrix,
    pub from_b: Matrix,
    /// Columns spanning a complement of `im(f, −g)` in `A ⊕ B`; `P`'s
    /// basis is their image.
    pub section: Matrix,
}

pub fn pushout(c: &GVect, a: &GVect, f: &Matrix, b: &GVect, g: &Matrix) -> Result<VectPushout> {
    if !c.is_equivariant(a, f) || !c.is_equivariant(b, g) {
        return Err(Error::Equivariance("pushout legs must be equivariant maps out of a common source over one group".into()));
    }
    let n = a.dim + b.dim;
    let w = f.vcat(&g.scale(&-Q::from_integer(1.into())));
    let (_, pivots) = w.rref();
    let image: Vec<Vec<Q>> = pivots.iter().map(|&j| w.column(j)).collect();
    // complete to a basis greedily with standard vectors, lowest index first
    let mut basis = Matrix::from_columns(n, &image);
    let mut complement = Vec::new();
    for i in 0..n {
        let mut e = vec![Q::zero(); n];
        e[i] = Q::from_integer(1.into());
        let trial = basis.hcat(&Matrix::from_columns(n, std::slice::from_ref(&e)));
        if trial.rank() > basis.cols() {
            basis = trial;
            complement.push(e);
        }
    }
    let r = image.len();
    let proj = basis
        .inverse()
        .expect("a basis is invertible")
        .submatrix_rows(r..n);
    let section = Matrix::from_columns(n, &complement);
    let action = a
        .group
        .elements()
        .map(|h| proj.mul(&a.act(h).block_diag(b.act(h))).mul(&section))
        .collect();
    Ok(VectPushout {
        object: GVect {
            group: a.group.clone(),
            dim: n - r,
            action,
        },
        from_a: proj.submatrix_cols(0..a.dim),
        from_b: proj.submatrix_cols(a.dim..n),
        section,
    })
}

impl VectPushout {
    /// The unique map `P → T` restricting to `u` and `v`, when `(u, v)` is
    /// a cocone; `None` otherwise.
    pub fn factor(&self, f: &Matrix, g: &Matrix, u: &Matrix, v: &Matrix) -> Option<Matrix> {
        if u.mul(f) != v.mul(g) {
            return None;
        }
        let phi = u.hcat(v).mul(&self.section);
        (phi.mul(&self.from_a) == *u && phi.mul(&self.from_b) == *v).then_some(phi)
    }
}

#[cfg(test)]
mod tests {
    use super::super::linalg::q;
    use super::*;

    #[test]
    fn dimension_formula() {
        let t = Arc::new(FiniteGroup::trivial());
        let c = GVect::trivial(t.clone(), 2);
        let a = GVect::trivial(t.clone(), 3);
        let b = GVect::trivial(t, 2);
        let f = Matrix::from_rows(3, 2, vec![vec![q(1), q(0)], vec![q(0), q(1)], vec![q(1), q(1)]]).unwrap();
        let g = Matrix::from_rows(2, 2, vec![vec![q(1), q(2)], vec![q(2), q(4)]]).unwrap();
        let p = pushout(&c, &a, &f, &b, &g).unwrap();
        let rank = f.vcat(&g).rank();
        assert_eq!(p.object.dim(), 3 + 2 - rank);
        assert_eq!(p.from_a.mul(&f), p.from_b.mul(&g));
    }

    #[test]
    fn induced_regular_representation() {
        let c3 = Arc::new(FiniteGroup::cyclic(3));
        let t = Arc::new(FiniteGroup::trivial());
        let e = Embedding::new(&t, &c3, vec![0]).unwrap();
        let (r, _) = induce(c3.clone(), &e, &GVect::trivial(t, 1)).unwrap();
        assert_eq!(r.dim(), 3);
        assert!(GVect::new(c3, 3, r.action().to_vec()).is_ok());
        assert_eq!(r.averaging_idempotent().rank(), 1);
    }
}
