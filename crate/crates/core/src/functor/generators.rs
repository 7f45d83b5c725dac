//! The three canonical families of window functors.

use super::data::FunctorData;
use crate::error::{Error, Result};
use crate::linalg::pencil::jordan_pair;
use crate::linalg::{Field, Matrix};
use crate::sheaves::{P1Point, TorsionSheaf};

/// `H^0(-, - (x) T)` on line bundles. Each block `(p, m)` contributes a Jordan
/// pair in the chart where `p` is finite.
pub fn generator_h0_torsion(field: Field, t: &TorsionSheaf, lo: i64, hi: i64) -> FunctorData {
    let (a, b): (Vec<Matrix>, Vec<Matrix>) = t
        .blocks()
        .iter()
        .map(|blk| jordan_pair(&blk.point.coords(), blk.mult, field))
        .unzip();
    let a = Matrix::block_diag(&a.iter().collect::<Vec<_>>(), field);
    let b = Matrix::block_diag(&b.iter().collect::<Vec<_>>(), field);
    constant_functor(field, lo, hi, a, b)
}

fn constant_functor(field: Field, lo: i64, hi: i64, a: Matrix, b: Matrix) -> FunctorData {
    let len = (hi - lo) as usize;
    FunctorData::new(field, lo, hi, vec![a.rows(); len + 1], vec![a; len], vec![b; len])
        .expect("counts match the window")
}

/// `dim H^1(O(n + i))`.
pub fn h1_dim_at(i: i64, n: i64) -> usize {
    (-n - i - 1).max(0) as usize
}

/// `H^1(-(i))` on line bundles. The basis of `F(O(n))` is the Cech classes
/// `x0^-a x1^-b` with `a + b = -(n + i)`, ordered by `b = 1, 2, ...`.
pub fn generator_h1(field: Field, i: i64, lo: i64, hi: i64) -> FunctorData {
    let dims: Vec<usize> = (lo..=hi).map(|n| h1_dim_at(i, n)).collect();
    let mut x0 = Vec::new();
    let mut x1 = Vec::new();
    for n in lo + 1..=hi {
        let (r, c) = (h1_dim_at(i, n), h1_dim_at(i, n - 1));
        let mut a = Matrix::zeros(field, r, c);
        let mut b = Matrix::zeros(field, r, c);
        // lowering a keeps b; lowering b moves class b to b - 1
        for k in 0..r {
            a.set(k, k, field.one());
            b.set(k, k + 1, field.one());
        }
        x0.push(a);
        x1.push(b);
    }
    FunctorData::new(field, lo, hi, dims, x0, x1).expect("counts match the window")
}

/// The functor `R_q` on line bundles: one-dimensional everywhere, a form
/// acting by its value at `q`. The auxiliary point `p` must differ from `q`.
pub fn generator_rq(q: &P1Point, p: &P1Point, lo: i64, hi: i64) -> Result<FunctorData> {
    if q == p {
        return Err(Error::EqualPoints);
    }
    let field = q.field();
    let a = Matrix::column(field, vec![q.p0().clone()]);
    let b = Matrix::column(field, vec![q.p1().clone()]);
    Ok(constant_functor(field, lo, hi, a, b))
}
