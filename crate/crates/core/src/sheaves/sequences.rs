use super::form::Form;
use super::point::{vanishing_form, P1Point};
use crate::error::{Error, Result};
use crate::linalg::Field;

/// A map `O(source_1) + ... -> O(target_1) + ...` between sums of line
/// bundles; entry `(j, i)` is a form of degree `target[j] - source[i]`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct BundleMap {
    field: Field,
    source: Vec<i64>,
    target: Vec<i64>,
    entries: Vec<Vec<Form>>,
}

impl BundleMap {
    pub fn new(field: Field, source: Vec<i64>, target: Vec<i64>, entries: Vec<Vec<Form>>) -> Result<BundleMap> {
        if entries.len() != target.len() || entries.iter().any(|r| r.len() != source.len()) {
            return Err(Error::Format("bundle map entry grid does not match its summands".into()));
        }
        for (j, row) in entries.iter().enumerate() {
            for (i, e) in row.iter().enumerate() {
                if e.degree() != target[j] - source[i] {
                    return Err(Error::Format(format!(
                        "entry ({j}, {i}) has degree {} but should have degree {}",
                        e.degree(),
                        target[j] - source[i]
                    )));
                }
            }
        }
        Ok(BundleMap {
            field,
            source,
            target,
            entries,
        })
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn source(&self) -> &[i64] {
        &self.source
    }

    pub fn target(&self) -> &[i64] {
        &self.target
    }

    pub fn entry(&self, j: usize, i: usize) -> &Form {
        &self.entries[j][i]
    }

    /// `self o first`.
    pub fn compose(&self, first: &BundleMap) -> Result<BundleMap> {
        if first.target != self.source {
            return Err(Error::Format("bundle maps do not compose".into()));
        }
        let entries = (0..self.target.len())
            .map(|j| {
                (0..first.source.len())
                    .map(|i| {
                        let deg = self.target[j] - first.source[i];
                        (0..self.source.len()).fold(Form::zero(self.field, deg), |acc, k| {
                            acc.add(&self.entries[j][k].mul(&first.entries[k][i]))
                        })
                    })
                    .collect()
            })
            .collect();
        BundleMap::new(self.field, first.source.clone(), self.target.clone(), entries)
    }

    pub fn is_zero(&self) -> bool {
        self.entries.iter().flatten().all(Form::is_zero)
    }
}

/// `0 -> O(j-2) -> O(j-1)^2 -> O(j) -> 0` built from the forms vanishing at
/// `p` and `q`: first map `(l_p, -l_q)`, second map `(l_q, l_p)`.
pub fn koszul_sequence(j: i64, p: &P1Point, q: &P1Point) -> Result<(BundleMap, BundleMap)> {
    if p == q {
        return Err(Error::EqualPoints);
    }
    let field = p.field();
    let lp = Form::linear(&vanishing_form(p));
    let lq = Form::linear(&vanishing_form(q));
    let first = BundleMap::new(field, vec![j - 2], vec![j - 1, j - 1], vec![vec![lp.clone()], vec![lq.neg()]])?;
    let second = BundleMap::new(field, vec![j - 1, j - 1], vec![j], vec![vec![lq, lp]])?;
    Ok((first, second))
}

/// The block `O_{p,mult}` presented as the cokernel of
/// `l_p^mult : O(twist - mult) -> O(twist)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct TorsionPresentation {
    pub point: P1Point,
    pub mult: usize,
    pub twist: i64,
}

impl TorsionPresentation {
    pub fn source_degree(&self) -> i64 {
        self.twist - self.mult as i64
    }

    pub fn relation(&self) -> Form {
        Form::linear(&vanishing_form(&self.point)).pow(self.mult as u32)
    }

    pub fn shifted(&self, d: i64) -> TorsionPresentation {
        TorsionPresentation {
            twist: self.twist + d,
            ..self.clone()
        }
    }
}

/// A morphism of presentations: `top` on the generators, `bottom` on the
/// relations, with `target.relation * bottom = top * source.relation`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TorsionChainMap {
    pub source: TorsionPresentation,
    pub target: TorsionPresentation,
    pub top: Form,
    pub bottom: Form,
}

impl TorsionChainMap {
    pub fn new(source: TorsionPresentation, target: TorsionPresentation, top: Form, bottom: Form) -> Result<TorsionChainMap> {
        let ok_deg = top.degree() == target.twist - source.twist
            && bottom.degree() == target.source_degree() - source.source_degree();
        if !ok_deg {
            return Err(Error::Format("chain map components have the wrong degrees".into()));
        }
        let lhs = target.relation().mul(&bottom);
        let rhs = top.mul(&source.relation());
        if lhs != rhs {
            return Err(Error::Format("chain map square does not commute".into()));
        }
        Ok(TorsionChainMap {
            source,
            target,
            top,
            bottom,
        })
    }

    pub fn identity(p: &TorsionPresentation) -> TorsionChainMap {
        let f = p.point.field();
        TorsionChainMap {
            source: p.clone(),
            target: p.clone(),
            top: Form::one(f),
            bottom: Form::one(f),
        }
    }

    /// `self o first`.
    pub fn compose(&self, first: &TorsionChainMap) -> Result<TorsionChainMap> {
        if first.target != self.source {
            return Err(Error::Format("chain maps do not compose".into()));
        }
        TorsionChainMap::new(
            first.source.clone(),
            self.target.clone(),
            self.top.mul(&first.top),
            self.bottom.mul(&first.bottom),
        )
    }

    pub fn shifted(&self, d: i64) -> TorsionChainMap {
        TorsionChainMap {
            source: self.source.shifted(d),
            target: self.target.shifted(d),
            ..self.clone()
        }
    }
}

/// The direct system `O_1 -> O_2 -> ... -> O_N` at a point, each `O_i`
/// presented from `O(0)` into `O(i)`, with `mu_{i,i+1}` given by
/// `(l_p, 1)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct LocalCohomologySystem {
    pub point: P1Point,
    pub presentations: Vec<TorsionPresentation>,
    pub maps: Vec<TorsionChainMap>,
}

impl LocalCohomologySystem {
    pub fn shifted(&self, d: i64) -> LocalCohomologySystem {
        LocalCohomologySystem {
            point: self.point.clone(),
            presentations: self.presentations.iter().map(|p| p.shifted(d)).collect(),
            maps: self.maps.iter().map(|m| m.shifted(d)).collect(),
        }
    }
}

pub fn local_cohomology_system(p: &P1Point, n: usize) -> Result<LocalCohomologySystem> {
    if n < 2 {
        return Err(Error::WindowTooSmall("a direct system needs at least two terms".into()));
    }
    let field = p.field();
    let presentations: Vec<TorsionPresentation> = (1..=n)
        .map(|i| TorsionPresentation {
            point: p.clone(),
            mult: i,
            twist: i as i64,
        })
        .collect();
    let lp = Form::linear(&vanishing_form(p));
    let maps = presentations
        .windows(2)
        .map(|w| TorsionChainMap::new(w[0].clone(), w[1].clone(), lp.clone(), Form::one(field)))
        .collect::<Result<Vec<_>>>()?;
    Ok(LocalCohomologySystem {
        point: p.clone(),
        presentations,
        maps,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::sheaves::LinearForm;

    const Q: Field = Field::Rational;

    fn pt(a: i64, b: i64) -> P1Point {
        P1Point::from_ints(Q, a, b).unwrap()
    }

    #[test]
    fn koszul_for_coordinate_points() {
        let (first, second) = koszul_sequence(0, &pt(0, 1), &P1Point::infinity(Q)).unwrap();
        let x0 = Form::linear(&LinearForm::x0(Q));
        let x1 = Form::linear(&LinearForm::x1(Q));
        assert_eq!(first.entry(0, 0), &x0);
        assert_eq!(first.entry(1, 0), &x1.neg());
        assert_eq!(second.entry(0, 0), &x1);
        assert_eq!(second.entry(0, 1), &x0);
        assert!(second.compose(&first).unwrap().is_zero());
        assert_eq!(koszul_sequence(0, &pt(1, 1), &pt(2, 2)), Err(Error::EqualPoints));
    }

    #[test]
    fn koszul_twisted() {
        let (first, second) = koszul_sequence(2, &pt(0, 1), &pt(1, 1)).unwrap();
        assert_eq!(first.source(), &[0]);
        assert_eq!(second.target(), &[2]);
        // l_q = x0 - x1 by hand
        let lq = Form::from_coeffs(Q, vec![Q.one(), -Q.one()]);
        assert_eq!(second.entry(0, 0), &lq);
        assert_eq!(first.entry(1, 0), &lq.neg());
        assert!(second.compose(&first).unwrap().is_zero());
    }

    #[test]
    fn local_system_data() {
        let p = pt(0, 1);
        let sys = local_cohomology_system(&p, 5).unwrap();
        assert_eq!(sys.presentations[0].mult, 1);
        assert_eq!(sys.presentations[1].mult, 2);
        assert_eq!(sys.maps[0].top, Form::linear(&LinearForm::x0(Q)));
        assert_eq!(sys.maps[0].bottom, Form::one(Q));
        for pres in &sys.presentations {
            assert_eq!(pres.source_degree(), 0);
        }
        let m13 = sys.maps[1].compose(&sys.maps[0]).unwrap();
        let direct = TorsionChainMap::new(
            sys.presentations[0].clone(),
            sys.presentations[2].clone(),
            Form::linear(&LinearForm::x0(Q)).pow(2),
            Form::one(Q),
        )
        .unwrap();
        assert_eq!(m13, direct);
        assert!(local_cohomology_system(&p, 1).is_err());
    }
}
