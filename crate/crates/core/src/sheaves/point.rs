use std::cmp::Ordering;
use std::fmt;

use crate::error::{Error, Result};
use crate::linalg::pencil::{cmp_points, normalize_point};
use crate::linalg::{Field, Scalar};

/// A closed point `[p0:p1]` of the projective line, stored normalized:
/// `(p0/p1, 1)` when `p1 != 0`, else `(1, 0)`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct P1Point {
    p0: Scalar,
    p1: Scalar,
}

impl P1Point {
    pub fn new(p0: &Scalar, p1: &Scalar) -> Result<P1Point> {
        if p0.is_zero() && p1.is_zero() {
            return Err(Error::Format("[0:0] is not a point".into()));
        }
        let (p0, p1) = normalize_point(p0, p1);
        Ok(P1Point { p0, p1 })
    }

    /// The point `[z:1]`.
    pub fn finite(z: Scalar) -> P1Point {
        let f = z.field();
        P1Point { p0: z, p1: f.one() }
    }

    /// The point `[1:0]`.
    pub fn infinity(field: Field) -> P1Point {
        P1Point {
            p0: field.one(),
            p1: field.zero(),
        }
    }

    pub fn from_ints(field: Field, p0: i64, p1: i64) -> Result<P1Point> {
        P1Point::new(&field.from_i64(p0), &field.from_i64(p1))
    }

    /// The `k`-th point of the fixed enumeration `[0:1], [1:0], [1:1], [1:2], ...`;
    /// `None` once a finite field runs out of points.
    pub fn enumerate(field: Field, k: usize) -> Option<P1Point> {
        match k {
            0 => Some(P1Point::finite(field.zero())),
            1 => Some(P1Point::infinity(field)),
            _ => {
                let d = (k - 1) as u64;
                if field.order().is_some_and(|q| d >= q) {
                    return None;
                }
                let z = field.from_i64(d as i64).inv()?;
                Some(P1Point::finite(z))
            }
        }
    }

    pub fn field(&self) -> Field {
        self.p0.field()
    }

    pub fn p0(&self) -> &Scalar {
        &self.p0
    }

    pub fn p1(&self) -> &Scalar {
        &self.p1
    }

    pub fn is_infinity(&self) -> bool {
        self.p1.is_zero()
    }

    pub fn coords(&self) -> (Scalar, Scalar) {
        (self.p0.clone(), self.p1.clone())
    }
}

impl Ord for P1Point {
    fn cmp(&self, other: &Self) -> Ordering {
        cmp_points(&self.coords(), &other.coords())
    }
}

impl PartialOrd for P1Point {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for P1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[{}:{}]", self.p0, self.p1)
    }
}

/// `c0*x0 + c1*x1`, scaled so the first nonzero coefficient is 1.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    pub c0: Scalar,
    pub c1: Scalar,
}

impl LinearForm {
    pub fn new(c0: &Scalar, c1: &Scalar) -> Result<LinearForm> {
        let lead = if c0.is_zero() { c1 } else { c0 };
        let inv = lead
            .inv()
            .ok_or_else(|| Error::Format("the zero linear form".into()))?;
        Ok(LinearForm {
            c0: c0 * &inv,
            c1: c1 * &inv,
        })
    }

    pub fn x0(field: Field) -> LinearForm {
        LinearForm {
            c0: field.one(),
            c1: field.zero(),
        }
    }

    pub fn x1(field: Field) -> LinearForm {
        LinearForm {
            c0: field.zero(),
            c1: field.one(),
        }
    }

    pub fn field(&self) -> Field {
        self.c0.field()
    }

    pub fn eval(&self, p: &P1Point) -> Scalar {
        &(&self.c0 * p.p0()) + &(&self.c1 * p.p1())
    }
}

impl fmt::Display for LinearForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let term = |c: &Scalar, v: &str| -> Option<String> {
            if c.is_zero() {
                None
            } else if c.is_one() {
                Some(v.to_string())
            } else {
                Some(format!("{c}*{v}"))
            }
        };
        let parts: Vec<String> = [term(&self.c0, "x0"), term(&self.c1, "x1")]
            .into_iter()
            .flatten()
            .collect();
        write!(f, "{}", parts.join(" + "))
    }
}

/// The normalized linear form vanishing at `p`: `p1*x0 - p0*x1`.
pub fn vanishing_form(p: &P1Point) -> LinearForm {
    LinearForm::new(p.p1(), &-p.p0()).expect("a point has a nonzero coordinate")
}
