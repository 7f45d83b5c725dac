//! Recognizing integral transforms and pullbacks along points.

use crate::error::{Error, Result};
use crate::functor::{check_exactness_on_ses, FunctorData, SesOfBundles};
use crate::sheaves::P1Point;
use crate::watts::{compute_w, gamma_window};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Mode {
    /// Dimension test only.
    Quick,
    /// All equivalent criteria, which must agree.
    Verify,
}

fn dims_constant(f: &FunctorData) -> bool {
    f.dims().windows(2).all(|w| w[0] == w[1])
}

/// Exactness of `F` on the twisted Koszul sequences built from pairs of the
/// first four enumerated points, every twist that fits, scanned from the top
/// twist down and stopping at the first failure.
pub fn exact_on_koszul_battery(f: &FunctorData) -> Result<bool> {
    let pts: Vec<P1Point> = (0..4).map_while(|k| P1Point::enumerate(f.field(), k)).collect();
    for j in (f.lo() + 2..=f.hi()).rev() {
        for (a, p) in pts.iter().enumerate() {
            for q in &pts[a + 1..] {
                let ses = SesOfBundles::koszul(j, p, q)?;
                if !check_exactness_on_ses(f, &ses)? {
                    return Ok(false);
                }
            }
        }
    }
    Ok(true)
}

fn gamma_is_iso(f: &FunctorData) -> Result<bool> {
    let g = gamma_window(f)?;
    Ok(g.gamma.components.iter().all(|c| c.is_invertible()))
}

/// Whether `F` is `H^0(- (x) G)` for a coherent `G`: constant dimensions, or
/// in verify mode additionally `Gamma` invertible and exactness on bundles,
/// all three agreeing.
pub fn is_integral_transform(f: &FunctorData, mode: Mode) -> Result<bool> {
    f.ensure_valid()?;
    let constant = dims_constant(f);
    if mode == Mode::Quick {
        return Ok(constant);
    }
    let iso = gamma_is_iso(f)?;
    let exact = exact_on_koszul_battery(f)?;
    if constant != iso || iso != exact {
        return Err(Error::Disagreement(format!(
            "constant dims {constant}, gamma invertible {iso}, exact on bundles {exact}"
        )));
    }
    Ok(constant)
}

/// The point `r` when `F` is `H^0(- (x) k(r))`.
pub fn is_pullback(f: &FunctorData, mode: Mode) -> Result<Option<P1Point>> {
    f.ensure_valid()?;
    let all_one = f.dims().iter().all(|&d| d == 1);
    let w = compute_w(f)?;
    let simple = match w.blocks() {
        [b] if b.mult == 1 => Some(b.point.clone()),
        _ => None,
    };
    let by_dims = if all_one { simple.clone() } else { None };
    if mode == Mode::Quick {
        return Ok(by_dims);
    }
    let by_sheaf = if is_integral_transform(f, Mode::Verify)? { simple } else { None };
    let by_exactness = exact_on_koszul_battery(f)? && f.dims().contains(&1);
    if by_sheaf.is_some() != all_one || all_one != by_exactness || by_sheaf != by_dims {
        return Err(Error::Disagreement(format!(
            "sheaf is a simple point {}, dims all one {all_one}, exact with a one-dimensional value {by_exactness}",
            by_sheaf.is_some()
        )));
    }
    Ok(by_dims)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::functor::{gauge_scramble, generator_h0_torsion, generator_h1};
    use crate::linalg::Field;
    use crate::sheaves::{TorsionBlock, TorsionSheaf};

    const Q: Field = Field::Rational;

    fn pt(a: i64, b: i64) -> P1Point {
        P1Point::from_ints(Q, a, b).unwrap()
    }

    #[test]
    fn integral_transform_examples() {
        let t = TorsionSheaf::new(vec![
            TorsionBlock { point: pt(1, 1), mult: 2 },
            TorsionBlock { point: pt(1, 3), mult: 1 },
        ]);
        let tf = gauge_scramble(&generator_h0_torsion(Q, &t, -4, 4), 2);
        assert!(is_integral_transform(&tf, Mode::Verify).unwrap());
        let h = generator_h1(Q, -1, -6, 3).direct_sum(&generator_h0_torsion(Q, &t, -6, 3)).unwrap();
        assert!(!is_integral_transform(&h, Mode::Verify).unwrap());
        assert!(!is_integral_transform(&h, Mode::Quick).unwrap());
        assert!(is_integral_transform(&FunctorData::zero(Q, -3, 3), Mode::Verify).unwrap());
    }

    #[test]
    fn pullback_examples() {
        let r = pt(1, 1);
        let f = gauge_scramble(&generator_h0_torsion(Q, &TorsionSheaf::block(r.clone(), 1), -4, 4), 8);
        assert_eq!(is_pullback(&f, Mode::Verify).unwrap(), Some(r.clone()));
        let two = generator_h0_torsion(Q, &TorsionSheaf::block(r, 2), -4, 4);
        assert_eq!(is_pullback(&two, Mode::Verify).unwrap(), None);
        let h = generator_h1(Q, 0, -6, 3);
        assert_eq!(is_pullback(&h, Mode::Verify).unwrap(), None);
    }
}
