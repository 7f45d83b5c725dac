//! Regular matrix pencils `x0*A + x1*B` and their Weierstrass data.

use std::cmp::Ordering;

use super::matrix::Matrix;
use super::poly::{distinct_roots, Poly};
use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Normalizes `[p0:p1]`: `(p0/p1, 1)` when `p1 != 0`, otherwise `(1, 0)`.
/// Panics on `(0, 0)`.
pub fn normalize_point(p0: &Scalar, p1: &Scalar) -> (Scalar, Scalar) {
    let f = p0.field();
    if !p1.is_zero() {
        (p0 / p1, f.one())
    } else {
        assert!(!p0.is_zero(), "[0:0] is not a point");
        (f.one(), f.zero())
    }
}

/// Canonical order on normalized points: finite points by coordinate, the
/// point `[1:0]` last.
pub fn cmp_points(a: &(Scalar, Scalar), b: &(Scalar, Scalar)) -> Ordering {
    match (a.1.is_zero(), b.1.is_zero()) {
        (false, false) => a.0.cmp(&b.0),
        (x, y) => x.cmp(&y),
    }
}

/// One generalized eigenpoint with the sizes of its Jordan blocks (ascending).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PencilBlock {
    pub point: (Scalar, Scalar),
    pub sizes: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct PencilDecomposition {
    pub blocks: Vec<PencilBlock>,
}

impl PencilDecomposition {
    /// Sum of all block sizes.
    pub fn size(&self) -> usize {
        self.blocks.iter().flat_map(|b| &b.sizes).sum()
    }

    /// Block model `(A, B)`: at a finite point `z` a Jordan block `J(z)` for
    /// `A` and the identity for `B`; at `[1:0]` the identity for `A` and a
    /// nilpotent Jordan block for `B`.
    pub fn model(&self, field: Field) -> (Matrix, Matrix) {
        let mut a = Vec::new();
        let mut b = Vec::new();
        for blk in &self.blocks {
            for &m in &blk.sizes {
                let (ja, jb) = jordan_pair(&blk.point, m, field);
                a.push(ja);
                b.push(jb);
            }
        }
        let a_refs: Vec<&Matrix> = a.iter().collect();
        let b_refs: Vec<&Matrix> = b.iter().collect();
        (Matrix::block_diag(&a_refs, field), Matrix::block_diag(&b_refs, field))
    }
}

/// The model pair for a single block of size `m` at a normalized point.
pub fn jordan_pair(point: &(Scalar, Scalar), m: usize, field: Field) -> (Matrix, Matrix) {
    let mut nil = Matrix::zeros(field, m, m);
    for i in 0..m.saturating_sub(1) {
        nil.set(i, i + 1, field.one());
    }
    let id = Matrix::identity(field, m);
    if point.1.is_zero() {
        (id, nil)
    } else {
        let j = nil.add(&Matrix::scalar_diag(m, &point.0));
        (j, id)
    }
}

/// Coefficients `c_k` of `det(x0*A + x1*B) = sum_k c_k x0^(n-k) x1^k`.
pub fn pencil_det_form(a: &Matrix, b: &Matrix) -> Vec<Scalar> {
    check_square_pair(a, b);
    let n = a.rows();
    let field = a.field();
    let enough_points = field.order().is_none_or(|q| q > n as u64);
    let poly = if enough_points {
        let pts: Vec<(Scalar, Scalar)> = (0..=n as i64)
            .map(|t| {
                let t = field.from_i64(t);
                let v = a.combine(&field.one(), b, &t).det();
                (t, v)
            })
            .collect();
        Poly::interpolate(field, &pts)
    } else {
        poly_det(a, b)
    };
    let mut c = poly.coeffs().to_vec();
    c.resize(n + 1, field.zero());
    c
}

/// `det(A + tB)` by fraction-free elimination over `k[t]`.
fn poly_det(a: &Matrix, b: &Matrix) -> Poly {
    let n = a.rows();
    let field = a.field();
    let mut m: Vec<Vec<Poly>> = (0..n)
        .map(|i| {
            (0..n)
                .map(|j| Poly::new(field, vec![a.get(i, j).clone(), b.get(i, j).clone()]))
                .collect()
        })
        .collect();
    let mut sign = field.one();
    let mut prev = Poly::constant(field.one());
    for k in 0..n {
        let Some(p) = (k..n).find(|&r| !m[r][k].is_zero()) else {
            return Poly::zero(field);
        };
        if p != k {
            m.swap(p, k);
            sign = -sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = m[i][j].mul(&m[k][k]).sub(&m[i][k].mul(&m[k][j]));
                m[i][j] = num.divrem(&prev).0;
            }
        }
        prev = m[k][k].clone();
    }
    if n == 0 {
        return Poly::constant(field.one());
    }
    m[n - 1][n - 1].scale(&sign)
}

fn check_square_pair(a: &Matrix, b: &Matrix) {
    assert!(
        a.is_square() && a.shape() == b.shape(),
        "pencil needs two square matrices of equal size"
    );
}

/// An invertible combination `c0*A + c1*B`, probing `(1,0), (0,1), (1,1), ..., (1,n)`
/// and then the remaining points of a finite field.
pub fn invertible_combination(a: &Matrix, b: &Matrix) -> Result<(Scalar, Scalar)> {
    check_square_pair(a, b);
    let n = a.rows();
    let field = a.field();
    let mut probes = vec![(field.one(), field.zero()), (field.zero(), field.one())];
    for t in 1..=n as i64 {
        probes.push((field.one(), field.from_i64(t)));
    }
    if let Some(q) = field.order() {
        for t in (n as u64 + 1)..q {
            probes.push((field.one(), field.from_i64(t as i64)));
        }
    }
    let mut seen = Vec::new();
    for (c0, c1) in probes {
        let key = normalize_point(&c0, &c1);
        if seen.contains(&key) {
            continue;
        }
        if a.combine(&c0, b, &c1).is_invertible() {
            return Ok((c0, c1));
        }
        seen.push(key);
    }
    if pencil_det_form(a, b).iter().all(Scalar::is_zero) {
        Err(Error::SingularPencil)
    } else {
        // regular, but every point of this finite field is an eigenpoint
        Err(Error::FieldExhausted)
    }
}

/// Weierstrass data of a regular pencil: eigenpoints `[p0:p1]` where
/// `p1*A - p0*B` is singular, each with its Jordan block sizes.
pub fn pencil_weierstrass(a: &Matrix, b: &Matrix) -> Result<PencilDecomposition> {
    check_square_pair(a, b);
    let n = a.rows();
    let field = a.field();
    if n == 0 {
        return Ok(PencilDecomposition { blocks: Vec::new() });
    }
    let (c0, c1) = invertible_combination(a, b)?;
    let (d0, d1) = if c0.is_zero() {
        (field.one(), field.zero())
    } else {
        (field.zero(), field.one())
    };
    let c = a.combine(&c0, b, &c1);
    let d = a.combine(&d0, b, &d1);
    let m = c.inverse().expect("probed invertible").mul(&d);
    let chi = char_poly(&m);
    let mut blocks = Vec::new();
    let mut total = 0;
    for lambda in distinct_roots(&chi)? {
        let shifted = m.sub(&Matrix::scalar_diag(n, &lambda));
        let sizes = jordan_sizes(&shifted);
        total += sizes.iter().sum::<usize>();
        let p0 = &(&lambda * &c1) - &d1;
        let p1 = &d0 - &(&lambda * &c0);
        blocks.push(PencilBlock {
            point: normalize_point(&p0, &p1),
            sizes,
        });
    }
    if total != n {
        return Err(Error::SplitFailure(format!(
            "characteristic polynomial of degree {n} has only {total} roots in {}",
            field.tag()
        )));
    }
    blocks.sort_by(|x, y| cmp_points(&x.point, &y.point));
    Ok(PencilDecomposition { blocks })
}

/// Jordan block sizes (ascending) of a nilpotent-on-its-generalized-eigenspace
/// matrix, read off the rank sequence of its powers.
fn jordan_sizes(n_mat: &Matrix) -> Vec<usize> {
    let dim = n_mat.rows();
    let mut ranks = vec![dim];
    let mut power = n_mat.clone();
    loop {
        let r = power.rank();
        let last = *ranks.last().unwrap();
        if r == last {
            break;
        }
        ranks.push(r);
        power = power.mul(n_mat);
    }
    // at_least[k] = number of blocks of size >= k+1
    let at_least: Vec<usize> = ranks.windows(2).map(|w| w[0] - w[1]).collect();
    let mut sizes = Vec::new();
    for k in 0..at_least.len() {
        let next = at_least.get(k + 1).copied().unwrap_or(0);
        for _ in 0..at_least[k] - next {
            sizes.push(k + 1);
        }
    }
    sizes.sort_unstable();
    sizes
}

/// Characteristic polynomial `det(tI - M)` via reduction to Hessenberg form.
pub fn char_poly(m: &Matrix) -> Poly {
    let n = m.rows();
    let field = m.field();
    let mut h = m.to_rows();
    for k in 0..n.saturating_sub(2) {
        let Some(p) = (k + 1..n).find(|&i| !h[i][k].is_zero()) else {
            continue;
        };
        if p != k + 1 {
            h.swap(p, k + 1);
            for row in h.iter_mut() {
                row.swap(p, k + 1);
            }
        }
        let inv = h[k + 1][k].inv().unwrap();
        for i in k + 2..n {
            if h[i][k].is_zero() {
                continue;
            }
            let f = &h[i][k] * &inv;
            // row_i -= f * row_{k+1}; col_{k+1} += f * col_i
            for j in 0..n {
                let v = &h[k + 1][j] * &f;
                h[i][j] = &h[i][j] - &v;
            }
            for row in h.iter_mut() {
                let v = &row[i] * &f;
                row[k + 1] = &row[k + 1] + &v;
            }
        }
    }
    let t = Poly::new(field, vec![field.zero(), field.one()]);
    let mut ps: Vec<Poly> = vec![Poly::constant(field.one())];
    for mi in 0..n {
        let mut next = t.sub(&Poly::constant(h[mi][mi].clone())).mul(&ps[mi]);
        let mut prod = field.one();
        for i in (0..mi).rev() {
            prod = &prod * &h[i + 1][i];
            if prod.is_zero() {
                break;
            }
            let c = &prod * &h[i][mi];
            next = next.sub(&ps[i].scale(&c));
        }
        ps.push(next);
    }
    ps.pop().unwrap()
}
