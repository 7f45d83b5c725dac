use std::fmt;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::error::{Error, Result};
use crate::linalg::{Field, Matrix, Scalar};
use crate::sheaves::{Form, LinearForm};

/// A functor restricted to the line bundles `O(lo), ..., O(hi)`.
///
/// `dims[n - lo] = dim F(O(n))`; `x0[n - lo - 1]` and `x1[n - lo - 1]` are
/// `F(x0 *)` and `F(x1 *)` from `F(O(n-1))` to `F(O(n))`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct FunctorData {
    field: Field,
    lo: i64,
    hi: i64,
    dims: Vec<usize>,
    x0: Vec<Matrix>,
    x1: Vec<Matrix>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    Shape { degree: i64, map: &'static str, found: (usize, usize) },
    Commutation { degree: i64 },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::Shape { degree, map, found } => {
                write!(f, "{map} into degree {degree} has shape {}x{}", found.0, found.1)
            }
            Violation::Commutation { degree } => write!(f, "x0 and x1 do not commute into degree {degree}"),
        }
    }
}

impl FunctorData {
    pub fn new(field: Field, lo: i64, hi: i64, dims: Vec<usize>, x0: Vec<Matrix>, x1: Vec<Matrix>) -> Result<FunctorData> {
        if hi < lo {
            return Err(Error::Format(format!("empty window [{lo}, {hi}]")));
        }
        let len = (hi - lo) as usize;
        if dims.len() != len + 1 || x0.len() != len || x1.len() != len {
            return Err(Error::Format(format!(
                "window [{lo}, {hi}] needs {} dims and {len} maps of each kind",
                len + 1
            )));
        }
        if x0.iter().chain(&x1).any(|m| m.field() != field) {
            return Err(Error::Format("matrix over the wrong field".into()));
        }
        Ok(FunctorData {
            field,
            lo,
            hi,
            dims,
            x0,
            x1,
        })
    }

    pub fn zero(field: Field, lo: i64, hi: i64) -> FunctorData {
        let len = (hi - lo).max(0) as usize;
        FunctorData {
            field,
            lo,
            hi,
            dims: vec![0; len + 1],
            x0: vec![Matrix::zeros(field, 0, 0); len],
            x1: vec![Matrix::zeros(field, 0, 0); len],
        }
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn lo(&self) -> i64 {
        self.lo
    }

    pub fn hi(&self) -> i64 {
        self.hi
    }

    pub fn dims(&self) -> &[usize] {
        &self.dims
    }

    pub fn x0_maps(&self) -> &[Matrix] {
        &self.x0
    }

    pub fn x1_maps(&self) -> &[Matrix] {
        &self.x1
    }

    pub fn contains(&self, n: i64) -> bool {
        self.lo <= n && n <= self.hi
    }

    /// `dim F(O(n))`; panics outside the window.
    pub fn dim(&self, n: i64) -> usize {
        assert!(self.contains(n), "degree {n} outside [{}, {}]", self.lo, self.hi);
        self.dims[(n - self.lo) as usize]
    }

    /// `F(x0 *) : F(O(n-1)) -> F(O(n))`, for `lo < n <= hi`.
    pub fn a(&self, n: i64) -> &Matrix {
        assert!(self.lo < n && n <= self.hi, "no map into degree {n}");
        &self.x0[(n - self.lo - 1) as usize]
    }

    /// `F(x1 *) : F(O(n-1)) -> F(O(n))`, for `lo < n <= hi`.
    pub fn b(&self, n: i64) -> &Matrix {
        assert!(self.lo < n && n <= self.hi, "no map into degree {n}");
        &self.x1[(n - self.lo - 1) as usize]
    }

    /// All shape and commutation violations, in degree order.
    pub fn validate(&self) -> Vec<Violation> {
        let mut out = Vec::new();
        for n in self.lo + 1..=self.hi {
            let want = (self.dim(n), self.dim(n - 1));
            for (name, m) in [("x0", self.a(n)), ("x1", self.b(n))] {
                if m.shape() != want {
                    out.push(Violation::Shape {
                        degree: n,
                        map: name,
                        found: m.shape(),
                    });
                }
            }
        }
        if !out.is_empty() {
            return out;
        }
        for n in self.lo + 2..=self.hi {
            if self.a(n).mul(self.b(n - 1)) != self.b(n).mul(self.a(n - 1)) {
                out.push(Violation::Commutation { degree: n });
            }
        }
        out
    }

    pub fn is_valid(&self) -> bool {
        self.validate().is_empty()
    }

    /// `Err(NotAdmissible)` listing the violations, if any.
    pub fn ensure_valid(&self) -> Result<()> {
        let v = self.validate();
        if v.is_empty() {
            return Ok(());
        }
        let msgs: Vec<String> = v.iter().map(|x| x.to_string()).collect();
        Err(Error::NotAdmissible(msgs.join("; ")))
    }

    pub fn restrict(&self, lo: i64, hi: i64) -> Result<FunctorData> {
        if lo < self.lo || hi > self.hi || hi < lo {
            return Err(Error::WindowTooSmall(format!(
                "[{lo}, {hi}] is not inside [{}, {}]",
                self.lo, self.hi
            )));
        }
        let s = (lo - self.lo) as usize;
        let e = (hi - self.lo) as usize;
        FunctorData::new(
            self.field,
            lo,
            hi,
            self.dims[s..=e].to_vec(),
            self.x0[s..e].to_vec(),
            self.x1[s..e].to_vec(),
        )
    }

    /// `c0 * F(x0) + c1 * F(x1)` into degree `n`.
    pub fn act_linear(&self, l: &LinearForm, n: i64) -> Result<Matrix> {
        self.check_span(n - 1, n)?;
        Ok(self.a(n).combine(&l.c0, self.b(n), &l.c1))
    }

    /// `F(l^k) : F(O(n-k)) -> F(O(n))`.
    pub fn act_power(&self, l: &LinearForm, k: usize, n: i64) -> Result<Matrix> {
        self.check_span(n - k as i64, n)?;
        let mut m = Matrix::identity(self.field, self.dim(n - k as i64));
        for j in (n - k as i64 + 1)..=n {
            m = self.a(j).combine(&l.c0, self.b(j), &l.c1).mul(&m);
        }
        Ok(m)
    }

    /// `F(f) : F(O(n-d)) -> F(O(n))` for a form of degree `d`. Negative
    /// degrees give the zero map.
    pub fn act_poly(&self, form: &Form, n: i64) -> Result<Matrix> {
        let d = form.degree();
        if d < 0 {
            self.check_span(n - d, n)?;
            return Ok(Matrix::zeros(self.field, self.dim(n), self.dim(n - d)));
        }
        self.check_span(n - d, n)?;
        Ok(self.act_coeffs(form.coeffs(), n))
    }

    /// Peels off `x0`: `f = x0 * g + c_d * x1^d`.
    fn act_coeffs(&self, coeffs: &[Scalar], n: i64) -> Matrix {
        let d = coeffs.len() as i64 - 1;
        if d == 0 {
            return Matrix::scalar_diag(self.dim(n), &coeffs[0]);
        }
        if d == 1 {
            return self.a(n).combine(&coeffs[0], self.b(n), &coeffs[1]);
        }
        let last = &coeffs[d as usize];
        let head = &coeffs[..d as usize];
        let mut out = if head.iter().all(Scalar::is_zero) {
            Matrix::zeros(self.field, self.dim(n), self.dim(n - d))
        } else {
            self.a(n).mul(&self.act_coeffs(head, n - 1))
        };
        if !last.is_zero() {
            let mut pw = Matrix::identity(self.field, self.dim(n - d));
            for j in (n - d + 1)..=n {
                pw = self.b(j).mul(&pw);
            }
            out = out.add(&pw.scale(last));
        }
        out
    }

    pub(crate) fn check_span(&self, from: i64, to: i64) -> Result<()> {
        if from < self.lo || to > self.hi {
            return Err(Error::WindowTooSmall(format!(
                "degrees {from}..{to} leave the window [{}, {}]",
                self.lo, self.hi
            )));
        }
        Ok(())
    }

    /// Degreewise direct sum.
    pub fn direct_sum(&self, other: &FunctorData) -> Result<FunctorData> {
        if self.field != other.field || self.lo != other.lo || self.hi != other.hi {
            return Err(Error::WindowMismatch);
        }
        let f = self.field;
        let dims = self.dims.iter().zip(&other.dims).map(|(a, b)| a + b).collect();
        let x0 = self.x0.iter().zip(&other.x0).map(|(a, b)| Matrix::block_diag(&[a, b], f)).collect();
        let x1 = self.x1.iter().zip(&other.x1).map(|(a, b)| Matrix::block_diag(&[a, b], f)).collect();
        FunctorData::new(f, self.lo, self.hi, dims, x0, x1)
    }

    /// Transport along degreewise isomorphisms `u[n - lo]` with inverses
    /// `u_inv`: `x0'[n] = u[n] x0[n] u[n-1]^-1`.
    pub fn conjugate(&self, u: &[Matrix], u_inv: &[Matrix]) -> FunctorData {
        let len = (self.hi - self.lo) as usize;
        let x0 = (0..len).map(|k| u[k + 1].mul(&self.x0[k]).mul(&u_inv[k])).collect();
        let x1 = (0..len).map(|k| u[k + 1].mul(&self.x1[k]).mul(&u_inv[k])).collect();
        FunctorData {
            field: self.field,
            lo: self.lo,
            hi: self.hi,
            dims: self.dims.clone(),
            x0,
            x1,
        }
    }
}

/// A pseudorandom invertible matrix and its inverse: a permutation followed
/// by `2n` transvections with coefficients `+-1`.
pub fn random_invertible(field: Field, n: usize, rng: &mut ChaCha8Rng) -> (Matrix, Matrix) {
    let mut perm: Vec<usize> = (0..n).collect();
    perm.shuffle(rng);
    let mut u = Matrix::zeros(field, n, n);
    for (i, &p) in perm.iter().enumerate() {
        u.set(i, p, field.one());
    }
    let mut u_inv = u.transpose();
    if n < 2 {
        return (u, u_inv);
    }
    for _ in 0..2 * n {
        let i = rng.gen_range(0..n);
        let mut j = rng.gen_range(0..n - 1);
        if j >= i {
            j += 1;
        }
        let c = if rng.gen_bool(0.5) { field.one() } else { -field.one() };
        // u <- u (I + c E_ij): column j += c * column i
        for r in 0..n {
            let v = u.get(r, i);
            if !v.is_zero() {
                let nv = u.get(r, j) + &(&c * v);
                u.set(r, j, nv);
            }
        }
        // u_inv <- (I - c E_ij) u_inv: row i -= c * row j
        for col in 0..n {
            let v = u_inv.get(j, col);
            if !v.is_zero() {
                let nv = u_inv.get(i, col) - &(&c * v);
                u_inv.set(i, col, nv);
            }
        }
    }
    (u, u_inv)
}

/// `F` conjugated by seeded random changes of basis, together with the
/// witnessing isomorphism family `u[n - lo] : F(O(n)) -> F'(O(n))`.
pub fn gauge_scramble_with_witness(f: &FunctorData, seed: u64) -> (FunctorData, Vec<Matrix>) {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u, u_inv): (Vec<Matrix>, Vec<Matrix>) =
        f.dims.iter().map(|&d| random_invertible(f.field, d, &mut rng)).unzip();
    (f.conjugate(&u, &u_inv), u)
}

pub fn gauge_scramble(f: &FunctorData, seed: u64) -> FunctorData {
    gauge_scramble_with_witness(f, seed).0
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    fn scalar_functor(lo: i64, hi: i64, a: i64, b: i64) -> FunctorData {
        let len = (hi - lo) as usize;
        FunctorData::new(
            Q,
            lo,
            hi,
            vec![1; len + 1],
            vec![Matrix::from_ints(Q, 1, 1, &[a]); len],
            vec![Matrix::from_ints(Q, 1, 1, &[b]); len],
        )
        .unwrap()
    }

    #[test]
    fn constructor_checks_counts() {
        assert!(FunctorData::new(Q, 0, 2, vec![1, 1], vec![], vec![]).is_err());
        assert!(FunctorData::new(Q, 3, 2, vec![], vec![], vec![]).is_err());
        assert!(FunctorData::zero(Q, 0, 0).is_valid());
    }

    #[test]
    fn shape_violation_reported() {
        let mut f = scalar_functor(0, 2, 1, 1);
        f.x0[1] = Matrix::zeros(Q, 2, 1);
        let v = f.validate();
        assert_eq!(v, vec![Violation::Shape { degree: 2, map: "x0", found: (2, 1) }]);
    }

    #[test]
    fn act_poly_expands_monomials() {
        let f = scalar_functor(-2, 2, 2, 3);
        let x0 = Form::linear(&LinearForm::x0(Q));
        let x1 = Form::linear(&LinearForm::x1(Q));
        // 5*x0^2 - x0*x1 + 7*x1^2 evaluated at (2, 3)
        let g = x0.pow(2).scale(&Q.from_i64(5)).add(&x0.mul(&x1).neg()).add(&x1.pow(2).scale(&Q.from_i64(7)));
        let m = f.act_poly(&g, 2).unwrap();
        assert_eq!(m, Matrix::from_ints(Q, 1, 1, &[20 - 6 + 63]));
        assert!(f.act_poly(&g.pow(2), 1).is_err());
        let id = f.act_poly(&Form::one(Q), 0).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn random_invertible_inverse_is_exact() {
        let mut rng = ChaCha8Rng::seed_from_u64(9);
        for n in 0..6 {
            let (u, ui) = random_invertible(Q, n, &mut rng);
            assert!(u.mul(&ui).is_identity());
        }
    }

    #[test]
    fn restriction_keeps_maps() {
        let f = scalar_functor(-3, 3, 2, 5);
        let r = f.restrict(-1, 2).unwrap();
        assert_eq!(r.dims(), &[1, 1, 1, 1]);
        assert_eq!(r.a(0), f.a(0));
        assert!(f.restrict(-4, 0).is_err());
    }
}
