//! Exact field elements.
//!
//! Two fields are supported: the rationals and prime fields `F_p` with
//! `p < 2^32`. Rationals use a machine-word fast path and fall back to
//! arbitrary precision on overflow, so values are always exact.

use std::cmp::Ordering;
use std::fmt;
use std::ops::{Add, Div, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use num_traits::{CheckedAdd, CheckedDiv, CheckedMul, CheckedSub, One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// The active base field.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Field {
    Rational,
    Prime(u64),
}

impl Field {
    /// A prime field; rejects composites and moduli that do not fit in 32 bits.
    pub fn prime(p: u64) -> Result<Field> {
        if !(2..(1 << 32)).contains(&p) {
            return Err(Error::Format(format!("unsupported modulus {p}")));
        }
        let mut d = 2u64;
        while d * d <= p {
            if p.is_multiple_of(d) {
                return Err(Error::Format(format!("modulus {p} is not prime")));
            }
            d += 1;
        }
        Ok(Field::Prime(p))
    }

    /// Parses the file tag: `"Q"` or `"Fp:<p>"`.
    pub fn parse_tag(tag: &str) -> Result<Field> {
        if tag == "Q" {
            return Ok(Field::Rational);
        }
        match tag.strip_prefix("Fp:") {
            Some(p) => {
                let p: u64 = p
                    .trim()
                    .parse()
                    .map_err(|_| Error::Format(format!("bad field tag {tag:?}")))?;
                Field::prime(p)
            }
            None => Err(Error::Format(format!("bad field tag {tag:?}"))),
        }
    }

    pub fn tag(self) -> String {
        match self {
            Field::Rational => "Q".to_string(),
            Field::Prime(p) => format!("Fp:{p}"),
        }
    }

    /// Number of elements, `None` for the rationals.
    pub fn order(self) -> Option<u64> {
        match self {
            Field::Rational => None,
            Field::Prime(p) => Some(p),
        }
    }

    pub fn zero(self) -> Scalar {
        self.from_i64(0)
    }

    pub fn one(self) -> Scalar {
        self.from_i64(1)
    }

    pub fn from_i64(self, v: i64) -> Scalar {
        match self {
            Field::Rational => Scalar(Repr::Small(Ratio::from_integer(v))),
            Field::Prime(p) => Scalar(Repr::Mod {
                v: v.rem_euclid(p as i64) as u64,
                p,
            }),
        }
    }

    /// `num / den` in this field; `den` must be nonzero in the field.
    pub fn fraction(self, num: i64, den: i64) -> Result<Scalar> {
        let d = self.from_i64(den);
        let inv = d
            .inv()
            .ok_or_else(|| Error::Format(format!("denominator {den} vanishes in {}", self.tag())))?;
        Ok(&self.from_i64(num) * &inv)
    }

    pub fn from_big_rational(self, r: &BigRational) -> Result<Scalar> {
        match self {
            Field::Rational => Ok(Scalar::from_big(r.clone())),
            Field::Prime(p) => {
                let pb = BigInt::from(p);
                let n = r.numer().mod_floor(&pb).to_u64().unwrap_or(0);
                let d = r.denom().mod_floor(&pb).to_u64().unwrap_or(0);
                if d == 0 {
                    return Err(Error::Format(format!(
                        "denominator of {r} vanishes modulo {p}"
                    )));
                }
                let num = Scalar(Repr::Mod { v: n, p });
                let den = Scalar(Repr::Mod { v: d, p });
                Ok(&num * &den.inv().expect("nonzero"))
            }
        }
    }

    /// Parses a decimal integer or `"a/b"` string into this field.
    pub fn parse(self, s: &str) -> Result<Scalar> {
        let s = s.trim();
        let bad = || Error::Format(format!("bad scalar {s:?}"));
        let (n, d) = match s.split_once('/') {
            Some((n, d)) => (
                n.trim().parse::<BigInt>().map_err(|_| bad())?,
                d.trim().parse::<BigInt>().map_err(|_| bad())?,
            ),
            None => (s.parse::<BigInt>().map_err(|_| bad())?, BigInt::one()),
        };
        if d.is_zero() {
            return Err(bad());
        }
        self.from_big_rational(&BigRational::new(n, d))
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
enum Repr {
    // Invariant: Big is used only when the value does not fit Small.
    Small(Ratio<i64>),
    Big(Box<BigRational>),
    Mod { v: u64, p: u64 },
}

/// An exact element of a [`Field`].
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Scalar(Repr);

fn fits(v: &Ratio<i64>) -> bool {
    *v.numer() != i64::MIN
}

impl Scalar {
    fn from_big(r: BigRational) -> Scalar {
        if let (Some(n), Some(d)) = (r.numer().to_i64(), r.denom().to_i64()) {
            if n != i64::MIN {
                return Scalar(Repr::Small(Ratio::new_raw(n, d)));
            }
        }
        Scalar(Repr::Big(Box::new(r)))
    }

    fn small(r: Ratio<i64>) -> Scalar {
        if fits(&r) {
            Scalar(Repr::Small(r))
        } else {
            Scalar(Repr::Big(Box::new(to_big(&r))))
        }
    }

    pub fn field(&self) -> Field {
        match &self.0 {
            Repr::Small(_) | Repr::Big(_) => Field::Rational,
            Repr::Mod { p, .. } => Field::Prime(*p),
        }
    }

    pub fn is_zero(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_zero(),
            Repr::Big(r) => r.is_zero(),
            Repr::Mod { v, .. } => *v == 0,
        }
    }

    pub fn is_one(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_one(),
            Repr::Big(r) => r.is_one(),
            Repr::Mod { v, .. } => *v == 1,
        }
    }

    /// Multiplicative inverse, `None` for zero.
    pub fn inv(&self) -> Option<Scalar> {
        if self.is_zero() {
            return None;
        }
        Some(match &self.0 {
            Repr::Small(r) => Scalar::small(r.recip()),
            Repr::Big(r) => Scalar::from_big(r.recip()),
            Repr::Mod { v, p } => Scalar(Repr::Mod {
                v: pow_mod(*v, *p - 2, *p),
                p: *p,
            }),
        })
    }

    pub fn pow(&self, mut e: u64) -> Scalar {
        let mut base = self.clone();
        let mut acc = self.field().one();
        while e > 0 {
            if e & 1 == 1 {
                acc = &acc * &base;
            }
            base = &base * &base;
            e >>= 1;
        }
        acc
    }

    /// The value as an arbitrary-precision rational (rational field only).
    pub fn to_big_rational(&self) -> Option<BigRational> {
        match &self.0 {
            Repr::Small(r) => Some(to_big(r)),
            Repr::Big(r) => Some((**r).clone()),
            Repr::Mod { .. } => None,
        }
    }

    /// The residue in `[0, p)` (prime fields only).
    pub fn residue(&self) -> Option<u64> {
        match &self.0 {
            Repr::Mod { v, .. } => Some(*v),
            _ => None,
        }
    }

    /// Number of decimal digits-ish; used to pick small pivots.
    pub(crate) fn weight(&self) -> u64 {
        match &self.0 {
            Repr::Small(r) => {
                let n = r.numer().unsigned_abs();
                let d = r.denom().unsigned_abs();
                (64 - n.leading_zeros() as u64) + (64 - d.leading_zeros() as u64)
            }
            Repr::Big(r) => r.numer().bits() + r.denom().bits(),
            Repr::Mod { .. } => 0,
        }
    }

    fn add_ref(&self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_add(b) {
                Some(r) => Scalar::small(r),
                None => Scalar::from_big(to_big(a) + to_big(b)),
            },
            (Repr::Mod { v: a, p }, Repr::Mod { v: b, p: q }) => {
                debug_assert_eq!(p, q, "mixed fields");
                Scalar(Repr::Mod {
                    v: (a + b) % p,
                    p: *p,
                })
            }
            _ => Scalar::from_big(self.big() + o.big()),
        }
    }

    fn sub_ref(&self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_sub(b) {
                Some(r) => Scalar::small(r),
                None => Scalar::from_big(to_big(a) - to_big(b)),
            },
            (Repr::Mod { v: a, p }, Repr::Mod { v: b, p: q }) => {
                debug_assert_eq!(p, q, "mixed fields");
                Scalar(Repr::Mod {
                    v: (a + p - b) % p,
                    p: *p,
                })
            }
            _ => Scalar::from_big(self.big() - o.big()),
        }
    }

    fn mul_ref(&self, o: &Scalar) -> Scalar {
        match (&self.0, &o.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_mul(b) {
                Some(r) => Scalar::small(r),
                None => Scalar::from_big(to_big(a) * to_big(b)),
            },
            (Repr::Mod { v: a, p }, Repr::Mod { v: b, p: q }) => {
                debug_assert_eq!(p, q, "mixed fields");
                Scalar(Repr::Mod {
                    v: a * b % p,
                    p: *p,
                })
            }
            _ => Scalar::from_big(self.big() * o.big()),
        }
    }

    fn div_ref(&self, o: &Scalar) -> Scalar {
        assert!(!o.is_zero(), "division by zero");
        match (&self.0, &o.0) {
            (Repr::Small(a), Repr::Small(b)) => match a.checked_div(b) {
                Some(r) => Scalar::small(r),
                None => Scalar::from_big(to_big(a) / to_big(b)),
            },
            (Repr::Mod { .. }, Repr::Mod { .. }) => self.mul_ref(&o.inv().expect("nonzero")),
            _ => Scalar::from_big(self.big() / o.big()),
        }
    }

    fn neg_ref(&self) -> Scalar {
        match &self.0 {
            Repr::Small(a) => Scalar::small(-a),
            Repr::Big(a) => Scalar::from_big(-(**a).clone()),
            Repr::Mod { v, p } => Scalar(Repr::Mod {
                v: (p - v) % p,
                p: *p,
            }),
        }
    }

    fn big(&self) -> BigRational {
        self.to_big_rational()
            .expect("mixed rational and modular arithmetic")
    }
}

fn to_big(r: &Ratio<i64>) -> BigRational {
    BigRational::new_raw(BigInt::from(*r.numer()), BigInt::from(*r.denom()))
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1 % p;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * b % p;
        }
        b = b * b % p;
        e >>= 1;
    }
    acc
}

macro_rules! forward_binop {
    ($tr:ident, $method:ident, $inner:ident) => {
        impl $tr<&Scalar> for &Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                self.$inner(o)
            }
        }
        impl $tr<Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: Scalar) -> Scalar {
                self.$inner(&o)
            }
        }
        impl $tr<&Scalar> for Scalar {
            type Output = Scalar;
            fn $method(self, o: &Scalar) -> Scalar {
                self.$inner(o)
            }
        }
    };
}

forward_binop!(Add, add, add_ref);
forward_binop!(Sub, sub, sub_ref);
forward_binop!(Mul, mul, mul_ref);
forward_binop!(Div, div, div_ref);

impl Neg for &Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl Neg for Scalar {
    type Output = Scalar;
    fn neg(self) -> Scalar {
        self.neg_ref()
    }
}

impl PartialOrd for Scalar {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Numeric order on the rationals, residue order on `F_p`.
impl Ord for Scalar {
    fn cmp(&self, other: &Self) -> Ordering {
        match (&self.0, &other.0) {
            (Repr::Small(a), Repr::Small(b)) => a.cmp(b),
            (Repr::Mod { v: a, .. }, Repr::Mod { v: b, .. }) => a.cmp(b),
            (Repr::Mod { .. }, _) => Ordering::Greater,
            (_, Repr::Mod { .. }) => Ordering::Less,
            _ => self.big().cmp(&other.big()),
        }
    }
}

impl fmt::Display for Scalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.0 {
            Repr::Small(r) => write!(f, "{r}"),
            Repr::Big(r) => write!(f, "{r}"),
            Repr::Mod { v, .. } => write!(f, "{v}"),
        }
    }
}

impl Scalar {
    pub fn is_negative(&self) -> bool {
        match &self.0 {
            Repr::Small(r) => r.is_negative(),
            Repr::Big(r) => r.is_negative(),
            Repr::Mod { .. } => false,
        }
    }
}
