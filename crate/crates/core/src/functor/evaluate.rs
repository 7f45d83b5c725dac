//! Right-exact evaluation of window functors on coherent sheaves and maps.

use super::data::FunctorData;
use crate::error::{Error, Result};
use crate::linalg::{Matrix, Subspace};
use crate::sheaves::{koszul_sequence, vanishing_form, BundleMap, CoherentSheaf, P1Point, TorsionChainMap, TorsionPresentation};

/// `F(s)` computed from presentations: the line bundle values read off the
/// window, and for each torsion block the quotient map
/// `F(O(d)) -> coker F(l_p^m)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SheafValue {
    pub dim: usize,
    pub bundle_dims: Vec<usize>,
    pub torsion_quotients: Vec<Matrix>,
}

/// `F(coker(relation))` for one presentation: the quotient map from
/// `F(O(twist))` onto it, and the subspace it kills.
fn cokernel_of(f: &FunctorData, p: &TorsionPresentation) -> Result<(Matrix, Subspace)> {
    let rel = f.act_power(&vanishing_form(&p.point), p.mult, p.twist)?;
    let image = Subspace::span(&rel);
    Ok((image.quotient_map(), image))
}

pub fn evaluate_on_sheaf(f: &FunctorData, s: &CoherentSheaf, d: i64) -> Result<SheafValue> {
    let mut bundle_dims = Vec::new();
    for &a in s.bundle() {
        f.check_span(a, a)?;
        bundle_dims.push(f.dim(a));
    }
    let mut torsion_quotients = Vec::new();
    for blk in s.torsion().blocks() {
        let pres = TorsionPresentation {
            point: blk.point.clone(),
            mult: blk.mult,
            twist: d,
        };
        torsion_quotients.push(cokernel_of(f, &pres)?.0);
    }
    let dim = bundle_dims.iter().sum::<usize>() + torsion_quotients.iter().map(Matrix::rows).sum::<usize>();
    Ok(SheafValue {
        dim,
        bundle_dims,
        torsion_quotients,
    })
}

/// The map `F(source) -> F(target)` induced on cokernels: lift along a
/// section of the source quotient, push through `F(top)`, and project.
pub fn apply_to_torsion_map(f: &FunctorData, chain: &TorsionChainMap) -> Result<Matrix> {
    let (q_s, image_s) = cokernel_of(f, &chain.source)?;
    let (q_t, _) = cokernel_of(f, &chain.target)?;
    let top = f.act_poly(&chain.top, chain.target.twist)?;
    let section = quotient_section(&image_s, q_s.rows());
    Ok(q_t.mul(&top).mul(&section))
}

/// A right inverse of `image.quotient_map()`: the standard vectors at the
/// non-pivot coordinates.
fn quotient_section(image: &Subspace, rank: usize) -> Matrix {
    let field = image.field();
    let amb = image.ambient_dim();
    let pivots = image.pivot_rows();
    let mut s = Matrix::zeros(field, amb, rank);
    for (k, j) in (0..amb).filter(|j| !pivots.contains(j)).enumerate() {
        s.set(j, k, field.one());
    }
    s
}

/// `F` applied to a map between sums of line bundles.
pub fn apply_bundle_map(f: &FunctorData, m: &BundleMap) -> Result<Matrix> {
    let field = f.field();
    for &n in m.source().iter().chain(m.target()) {
        f.check_span(n, n)?;
    }
    let mut rows = Matrix::zeros(field, 0, m.source().iter().map(|&a| f.dim(a)).sum());
    for (j, &t) in m.target().iter().enumerate() {
        let mut row = Matrix::zeros(field, f.dim(t), 0);
        for (i, &s) in m.source().iter().enumerate() {
            let block = if t < s {
                Matrix::zeros(field, f.dim(t), f.dim(s))
            } else {
                f.act_poly(m.entry(j, i), t)?
            };
            row = row.hstack(&block);
        }
        rows = rows.vstack(&row);
    }
    Ok(rows)
}

/// A short exact sequence `0 -> E' -> E -> E'' -> 0` of split bundles.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SesOfBundles {
    pub first: BundleMap,
    pub second: BundleMap,
}

impl SesOfBundles {
    /// Checks composability, `second o first = 0`, and that ranks and degrees add up.
    pub fn new(first: BundleMap, second: BundleMap) -> Result<SesOfBundles> {
        if !second.compose(&first)?.is_zero() {
            return Err(Error::Format("second map after first is not zero".into()));
        }
        let rank_ok = first.source().len() + second.target().len() == first.target().len();
        let deg = |v: &[i64]| v.iter().sum::<i64>();
        let deg_ok = deg(first.source()) + deg(second.target()) == deg(first.target());
        if !rank_ok || !deg_ok {
            return Err(Error::Format("ranks or degrees do not add up".into()));
        }
        Ok(SesOfBundles { first, second })
    }

    pub fn koszul(j: i64, p: &P1Point, q: &P1Point) -> Result<SesOfBundles> {
        let (first, second) = koszul_sequence(j, p, q)?;
        SesOfBundles::new(first, second)
    }
}

/// Whether `0 -> F(E') -> F(E) -> F(E'') -> 0` is exact. The right half must
/// be exact for any right-exact functor; a failure there is `NotAdmissible`.
pub fn check_exactness_on_ses(f: &FunctorData, s: &SesOfBundles) -> Result<bool> {
    let m1 = apply_bundle_map(f, &s.first)?;
    let m2 = apply_bundle_map(f, &s.second)?;
    let r1 = m1.rank();
    let r2 = m2.rank();
    if r2 != m2.rows() || r1 + r2 != m2.cols() {
        return Err(Error::NotAdmissible(
            "functor is not right exact on a sequence of bundles".into(),
        ));
    }
    Ok(r1 == m1.cols())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::generators::{generator_h0_torsion, generator_h1};
    use crate::linalg::Field;
    use crate::sheaves::{local_cohomology_system, TorsionSheaf};

    const Q: Field = Field::Rational;

    fn pt(a: i64, b: i64) -> P1Point {
        P1Point::from_ints(Q, a, b).unwrap()
    }

    #[test]
    fn evaluation_on_skyscrapers() {
        let q = pt(1, 1);
        let f = generator_h0_torsion(Q, &TorsionSheaf::block(q.clone(), 1), -3, 3);
        let kq = CoherentSheaf::torsion_only(TorsionSheaf::block(q, 1));
        let kp = CoherentSheaf::torsion_only(TorsionSheaf::block(pt(0, 1), 1));
        assert_eq!(evaluate_on_sheaf(&f, &kq, 0).unwrap().dim, 1);
        assert_eq!(evaluate_on_sheaf(&f, &kp, 0).unwrap().dim, 0);
        let h = generator_h1(Q, 0, -3, 3);
        assert_eq!(evaluate_on_sheaf(&h, &kp, 0).unwrap().dim, 0);
        assert!(evaluate_on_sheaf(&h, &kp, -3).is_err());
    }

    #[test]
    fn mu_maps_on_torsion_generator() {
        let p = pt(0, 1);
        let f = generator_h0_torsion(Q, &TorsionSheaf::block(p.clone(), 1), -1, 6);
        let sys = local_cohomology_system(&p, 3).unwrap();
        let m12 = apply_to_torsion_map(&f, &sys.maps[0]).unwrap();
        assert_eq!(m12.shape(), (1, 1));
        assert!(m12.is_zero());
        let id = apply_to_torsion_map(&f, &TorsionChainMap::identity(&sys.presentations[1])).unwrap();
        assert!(id.is_identity());
    }

    #[test]
    fn exactness_on_koszul() {
        let p = pt(0, 1);
        let q = P1Point::infinity(Q);
        let ses = SesOfBundles::koszul(0, &p, &q).unwrap();
        let t = generator_h0_torsion(Q, &TorsionSheaf::block(pt(1, 1), 2), -4, 2);
        assert!(check_exactness_on_ses(&t, &ses).unwrap());
        let h = generator_h1(Q, 0, -4, 2);
        assert!(!check_exactness_on_ses(&h, &ses).unwrap());
        assert!(!check_exactness_on_ses(&t.direct_sum(&h).unwrap(), &ses).unwrap());
    }
}
