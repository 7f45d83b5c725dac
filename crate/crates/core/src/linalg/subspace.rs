use super::matrix::{eliminate, Matrix};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// A linear subspace of `k^ambient`, stored by its canonical basis: the
/// columns of a reduced column-echelon matrix. Equal subspaces have
/// identical bases.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Subspace {
    basis: Matrix,
    pivots: Vec<usize>,
}

impl Subspace {
    pub fn zero(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::zeros(field, ambient, 0),
            pivots: Vec::new(),
        }
    }

    pub fn full(field: Field, ambient: usize) -> Subspace {
        Subspace {
            basis: Matrix::identity(field, ambient),
            pivots: (0..ambient).collect(),
        }
    }

    /// The span of the columns of `m`.
    pub fn span(m: &Matrix) -> Subspace {
        let mut rows = m.transpose().to_rows();
        let pivots = eliminate(&mut rows, m.rows(), true);
        rows.truncate(pivots.len());
        let dim = pivots.len();
        let data: Vec<Scalar> = rows.into_iter().flatten().collect();
        let basis = Matrix::from_vec(m.field(), dim, m.rows(), data).transpose();
        Subspace { basis, pivots }
    }

    /// The null space of `m`.
    pub fn kernel_of(m: &Matrix) -> Subspace {
        let field = m.field();
        let n = m.cols();
        let (r, pivots) = m.rref();
        let mut is_pivot = vec![false; n];
        for &p in &pivots {
            is_pivot[p] = true;
        }
        let free: Vec<usize> = (0..n).filter(|&j| !is_pivot[j]).collect();
        let mut gens = Matrix::zeros(field, n, free.len());
        for (k, &f) in free.iter().enumerate() {
            gens.set(f, k, field.one());
            for (row, &p) in pivots.iter().enumerate() {
                let v = r.get(row, f);
                if !v.is_zero() {
                    gens.set(p, k, -v);
                }
            }
        }
        Subspace::span(&gens)
    }

    pub fn field(&self) -> Field {
        self.basis.field()
    }

    pub fn ambient_dim(&self) -> usize {
        self.basis.rows()
    }

    pub fn dim(&self) -> usize {
        self.basis.cols()
    }

    /// Canonical basis, one column per basis vector.
    pub fn basis(&self) -> &Matrix {
        &self.basis
    }

    /// Rows where the canonical basis has its identity entries.
    pub fn pivot_rows(&self) -> &[usize] {
        &self.pivots
    }

    /// A surjection `k^ambient -> k^(ambient - dim)` whose kernel is this subspace.
    pub fn quotient_map(&self) -> Matrix {
        let field = self.field();
        let amb = self.ambient_dim();
        let mut is_pivot = vec![false; amb];
        for &p in &self.pivots {
            is_pivot[p] = true;
        }
        let others: Vec<usize> = (0..amb).filter(|&j| !is_pivot[j]).collect();
        let mut q = Matrix::zeros(field, others.len(), amb);
        for (row, &j) in others.iter().enumerate() {
            q.set(row, j, field.one());
            for (k, &p) in self.pivots.iter().enumerate() {
                let v = self.basis.get(j, k);
                if !v.is_zero() {
                    q.set(row, p, -v);
                }
            }
        }
        q
    }

    /// Coordinates of the columns of `v` in the canonical basis, if they lie in the subspace.
    pub fn coordinates(&self, v: &Matrix) -> Option<Matrix> {
        if !self.quotient_map().mul(v).is_zero() {
            return None;
        }
        Some(v.select_rows(&self.pivots))
    }

    pub fn contains(&self, other: &Subspace) -> bool {
        self.ambient_dim() == other.ambient_dim()
            && self.quotient_map().mul(&other.basis).is_zero()
    }

    pub fn sum(&self, other: &Subspace) -> Subspace {
        Subspace::span(&self.basis.hstack(&other.basis))
    }

    pub fn intersection(&self, other: &Subspace) -> Subspace {
        let q = other.quotient_map().mul(&self.basis);
        let coeffs = Subspace::kernel_of(&q);
        Subspace::span(&self.basis.mul(coeffs.basis()))
    }

    /// `{ x : m x in target }`.
    pub fn preimage(m: &Matrix, target: &Subspace) -> Subspace {
        Subspace::kernel_of(&target.quotient_map().mul(m))
    }

    /// The image of this subspace under `m`.
    pub fn image_under(&self, m: &Matrix) -> Subspace {
        Subspace::span(&m.mul(&self.basis))
    }
}

/// The null space of `m`.
pub fn kernel_basis(m: &Matrix) -> Subspace {
    Subspace::kernel_of(m)
}

/// A complement of `sub` inside `inside`, chosen greedily: the canonical
/// basis vectors of `inside` are scanned in order and kept when independent
/// of `sub` and of those already kept.
pub fn complement(inside: &Subspace, sub: &Subspace) -> Result<Subspace> {
    if !inside.contains(sub) {
        return Err(Error::NotContained);
    }
    let field = inside.field();
    let amb = inside.ambient_dim();
    let mut echelon: Vec<(usize, Vec<Scalar>)> = Vec::new();
    for j in 0..sub.dim() {
        push_reduced(sub.basis().col(j), &mut echelon);
    }
    let mut chosen = Vec::new();
    for j in 0..inside.dim() {
        let c = inside.basis().col(j);
        if push_reduced(c.clone(), &mut echelon) {
            chosen.extend(c);
        }
    }
    let k = chosen.len() / amb.max(1);
    let cols = Matrix::from_vec(field, k, amb, chosen).transpose();
    Ok(Subspace::span(&cols))
}

/// Reduces `v` against `echelon` and appends it when a nonzero remainder is left.
fn push_reduced(mut v: Vec<Scalar>, echelon: &mut Vec<(usize, Vec<Scalar>)>) -> bool {
    for (p, row) in echelon.iter() {
        if !v[*p].is_zero() {
            let f = v[*p].clone();
            for (x, y) in v.iter_mut().zip(row) {
                if !y.is_zero() {
                    *x = &*x - &(&f * y);
                }
            }
        }
    }
    match v.iter().position(|x| !x.is_zero()) {
        Some(p) => {
            let inv = v[p].inv().expect("nonzero");
            let v = v.iter().map(|x| x * &inv).collect();
            echelon.push((p, v));
            true
        }
        None => false,
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn kernel_examples() {
        assert_eq!(Subspace::kernel_of(&Matrix::identity(Q, 2)).dim(), 0);
        let k = Subspace::kernel_of(&Matrix::zeros(Q, 2, 3));
        assert_eq!(k, Subspace::full(Q, 3));
        let k = Subspace::kernel_of(&Matrix::from_ints(Q, 1, 2, &[1, 1]));
        assert_eq!(k.basis(), &Matrix::from_ints(Q, 2, 1, &[1, -1]));
    }

    #[test]
    fn complement_examples() {
        let full = Subspace::full(Q, 2);
        let e1 = Subspace::span(&Matrix::from_ints(Q, 2, 1, &[1, 0]));
        let e2 = Subspace::span(&Matrix::from_ints(Q, 2, 1, &[0, 1]));
        assert_eq!(complement(&full, &e1).unwrap(), e2);
        assert_eq!(complement(&full, &full).unwrap().dim(), 0);
        let diag = Subspace::span(&Matrix::from_ints(Q, 2, 1, &[1, 1]));
        assert_eq!(complement(&full, &diag).unwrap(), e1);
        assert_eq!(complement(&e1, &e2), Err(Error::NotContained));
    }

    #[test]
    fn canonical_form_is_basis_independent() {
        let a = Subspace::span(&Matrix::from_ints(Q, 3, 2, &[1, 2, 1, 0, 0, 1]));
        let b = Subspace::span(&Matrix::from_ints(Q, 3, 2, &[3, 1, 1, 1, 1, 0]));
        assert_eq!(a, b);
    }

    #[test]
    fn intersection_and_preimage() {
        let a = Subspace::span(&Matrix::from_ints(Q, 3, 2, &[1, 0, 0, 1, 0, 0]));
        let b = Subspace::span(&Matrix::from_ints(Q, 3, 2, &[0, 0, 1, 0, 0, 1]));
        let i = a.intersection(&b);
        assert_eq!(i, Subspace::span(&Matrix::from_ints(Q, 3, 1, &[0, 1, 0])));
        let proj = Matrix::from_ints(Q, 3, 3, &[1, 0, 0, 0, 0, 0, 0, 0, 0]);
        let pre = Subspace::preimage(&proj, &Subspace::zero(Q, 3));
        assert_eq!(pre, b);
    }
}
