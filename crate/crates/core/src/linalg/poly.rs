//! Dense univariate polynomials and root finding over the supported fields.
//!
//! Rational roots are found by lifting simple roots modulo a small prime
//! (Newton iteration) and recovering them by rational reconstruction; every
//! candidate is verified exactly. Roots over large prime fields come from
//! `gcd(f, x^p - x)` and equal-degree splitting.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use super::scalar::{Field, Scalar};
use crate::error::{Error, Result};

/// Polynomial with coefficients listed from the constant term upward; never
/// carries trailing zeros.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Poly {
    field: Field,
    coeffs: Vec<Scalar>,
}

impl Poly {
    pub fn new(field: Field, mut coeffs: Vec<Scalar>) -> Poly {
        while coeffs.last().is_some_and(Scalar::is_zero) {
            coeffs.pop();
        }
        Poly { field, coeffs }
    }

    pub fn zero(field: Field) -> Poly {
        Poly::new(field, Vec::new())
    }

    pub fn constant(c: Scalar) -> Poly {
        let field = c.field();
        Poly::new(field, vec![c])
    }

    /// `x - r`.
    pub fn linear_root(r: &Scalar) -> Poly {
        let f = r.field();
        Poly::new(f, vec![-r, f.one()])
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn lead(&self) -> Option<&Scalar> {
        self.coeffs.last()
    }

    pub fn eval(&self, x: &Scalar) -> Scalar {
        let mut acc = self.field.zero();
        for c in self.coeffs.iter().rev() {
            acc = &(&acc * x) + c;
        }
        acc
    }

    pub fn add(&self, o: &Poly) -> Poly {
        let n = self.coeffs.len().max(o.coeffs.len());
        let z = self.field.zero();
        let c = (0..n)
            .map(|i| self.coeffs.get(i).unwrap_or(&z) + o.coeffs.get(i).unwrap_or(&z))
            .collect();
        Poly::new(self.field, c)
    }

    pub fn sub(&self, o: &Poly) -> Poly {
        self.add(&o.scale(&-self.field.one()))
    }

    pub fn scale(&self, s: &Scalar) -> Poly {
        Poly::new(self.field, self.coeffs.iter().map(|c| c * s).collect())
    }

    pub fn mul(&self, o: &Poly) -> Poly {
        if self.is_zero() || o.is_zero() {
            return Poly::zero(self.field);
        }
        let mut c = vec![self.field.zero(); self.coeffs.len() + o.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                c[i + j] = &c[i + j] + &(a * b);
            }
        }
        Poly::new(self.field, c)
    }

    pub fn monic(&self) -> Poly {
        match self.lead() {
            Some(l) => self.scale(&l.inv().expect("nonzero lead")),
            None => self.clone(),
        }
    }

    pub fn derivative(&self) -> Poly {
        let c = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, a)| a * &self.field.from_i64(i as i64))
            .collect();
        Poly::new(self.field, c)
    }

    /// Quotient and remainder; panics on a zero divisor.
    pub fn divrem(&self, d: &Poly) -> (Poly, Poly) {
        let dd = d.degree().expect("division by the zero polynomial");
        let inv = d.lead().unwrap().inv().expect("nonzero lead");
        let mut r = self.coeffs.clone();
        if r.len() <= dd {
            return (Poly::zero(self.field), self.clone());
        }
        let mut q = vec![self.field.zero(); r.len() - dd];
        for k in (0..q.len()).rev() {
            let c = &r[k + dd] * &inv;
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                r[k + j] = &r[k + j] - &(&c * dj);
            }
            q[k] = c;
        }
        r.truncate(dd);
        (Poly::new(self.field, q), Poly::new(self.field, r))
    }

    pub fn rem(&self, d: &Poly) -> Poly {
        self.divrem(d).1
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, o: &Poly) -> Poly {
        let (mut a, mut b) = (self.clone(), o.clone());
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// `self^e mod m`.
    pub fn pow_mod(&self, mut e: u64, m: &Poly) -> Poly {
        let mut base = self.rem(m);
        let mut acc = Poly::constant(self.field.one()).rem(m);
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base).rem(m);
            }
            base = base.mul(&base).rem(m);
            e >>= 1;
        }
        acc
    }

    /// The unique polynomial of degree `< points.len()` through the given nodes.
    pub fn interpolate(field: Field, points: &[(Scalar, Scalar)]) -> Poly {
        let mut acc = Poly::zero(field);
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Poly::constant(field.one());
            let mut denom = field.one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Poly::linear_root(xj));
                    denom = &denom * &(xi - xj);
                }
            }
            let s = yi / &denom;
            acc = acc.add(&basis.scale(&s));
        }
        acc
    }
}

/// Distinct roots of `f` in its field, in increasing order.
pub fn distinct_roots(f: &Poly) -> Result<Vec<Scalar>> {
    if f.is_zero() {
        return Err(Error::SplitFailure("zero polynomial has no finite root set".into()));
    }
    let mut roots = match f.field() {
        Field::Rational => rational_roots(f),
        Field::Prime(p) => prime_field_roots(f, p),
    };
    roots.sort();
    roots.dedup();
    Ok(roots)
}

fn squarefree_part(f: &Poly) -> Poly {
    let g = f.gcd(&f.derivative());
    if g.degree() == Some(0) {
        f.monic()
    } else {
        f.divrem(&g).0.monic()
    }
}

fn rational_roots(f: &Poly) -> Vec<Scalar> {
    let q = Field::Rational;
    let mut g = squarefree_part(f);
    let mut roots = Vec::new();
    if g.degree() == Some(0) {
        return roots;
    }
    if g.coeffs[0].is_zero() {
        roots.push(q.zero());
        g = g.divrem(&Poly::linear_root(&q.zero())).0;
    }
    if g.degree() == Some(0) {
        return roots;
    }
    let ints = integer_coefficients(&g);
    let lead = ints.last().unwrap().abs();
    let cst = ints[0].abs();
    // any root a/b has |a| <= |cst| and 0 < b <= |lead|
    let bound: BigInt = BigInt::from(2) * &cst * &lead;
    let Some((p, residues)) = choose_prime(&ints) else {
        return roots;
    };
    let der: Vec<BigInt> = ints
        .iter()
        .enumerate()
        .skip(1)
        .map(|(i, c)| c * BigInt::from(i))
        .collect();
    for r in residues {
        let (lifted, m) = hensel_lift(&ints, &der, r, p, &bound);
        if let Some(cand) = reconstruct(&lifted, &m, &cst, &lead) {
            if eval_big(&ints, &cand).is_zero() {
                roots.push(q.from_big_rational(&cand).expect("rational"));
            }
        }
    }
    roots
}

fn integer_coefficients(g: &Poly) -> Vec<BigInt> {
    let rats: Vec<BigRational> = g
        .coeffs
        .iter()
        .map(|c| c.to_big_rational().expect("rational coefficient"))
        .collect();
    let lcm = rats
        .iter()
        .fold(BigInt::one(), |acc, r| acc.lcm(r.denom()));
    let ints: Vec<BigInt> = rats
        .iter()
        .map(|r| (r * BigRational::from_integer(lcm.clone())).to_integer())
        .collect();
    let content = ints.iter().fold(BigInt::zero(), |acc, c| acc.gcd(c));
    ints.into_iter().map(|c| c / &content).collect()
}

const PRIME_START: u64 = 10_007;

fn choose_prime(ints: &[BigInt]) -> Option<(u64, Vec<u64>)> {
    let mut p = PRIME_START;
    for _ in 0..200 {
        while !is_prime(p) {
            p += 2;
        }
        let pb = BigInt::from(p);
        let modp: Vec<u64> = ints
            .iter()
            .map(|c| c.mod_floor(&pb).to_u64().unwrap())
            .collect();
        if *modp.last().unwrap() != 0 {
            let field = Field::Prime(p);
            let fp = Poly::new(field, modp.iter().map(|&v| field.from_i64(v as i64)).collect());
            if fp.gcd(&fp.derivative()).degree() == Some(0) {
                let roots = (0..p).filter(|&x| eval_mod(&modp, x, p) == 0).collect();
                return Some((p, roots));
            }
        }
        p += 2;
    }
    None
}

fn is_prime(p: u64) -> bool {
    p >= 2 && (2..).take_while(|d| d * d <= p).all(|d| !p.is_multiple_of(d))
}

fn eval_mod(c: &[u64], x: u64, p: u64) -> u64 {
    c.iter().rev().fold(0, |acc, &a| (acc * x + a) % p)
}

fn eval_int(c: &[BigInt], x: &BigInt, m: &BigInt) -> BigInt {
    c.iter()
        .rev()
        .fold(BigInt::zero(), |acc, a| (acc * x + a).mod_floor(m))
}

fn eval_big(c: &[BigInt], x: &BigRational) -> BigRational {
    c.iter().rev().fold(BigRational::zero(), |acc, a| {
        acc * x + BigRational::from_integer(a.clone())
    })
}

fn hensel_lift(f: &[BigInt], df: &[BigInt], r: u64, p: u64, bound: &BigInt) -> (BigInt, BigInt) {
    let mut m = BigInt::from(p);
    let mut x = BigInt::from(r);
    while &m <= bound {
        m = &m * &m;
        let fx = eval_int(f, &x, &m);
        let dfx = eval_int(df, &x, &m);
        let inv = mod_inverse(&dfx, &m).expect("simple root has invertible derivative");
        x = (x - fx * inv).mod_floor(&m);
    }
    (x, m)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> Option<BigInt> {
    let e = a.extended_gcd(m);
    if e.gcd.is_one() {
        Some(e.x.mod_floor(m))
    } else {
        None
    }
}

/// Finds `a/b = r mod m` with `|a| <= num_bound`, `0 < b <= den_bound`.
fn reconstruct(r: &BigInt, m: &BigInt, num_bound: &BigInt, den_bound: &BigInt) -> Option<BigRational> {
    let (mut r0, mut r1) = (m.clone(), r.clone());
    let (mut t0, mut t1) = (BigInt::zero(), BigInt::one());
    while &r1 > num_bound {
        let q = &r0 / &r1;
        let r2 = &r0 - &q * &r1;
        let t2 = &t0 - &q * &t1;
        r0 = std::mem::replace(&mut r1, r2);
        t0 = std::mem::replace(&mut t1, t2);
    }
    if t1.is_zero() || &t1.abs() > den_bound {
        return None;
    }
    Some(BigRational::new(r1, t1))
}

fn prime_field_roots(f: &Poly, p: u64) -> Vec<Scalar> {
    let field = Field::Prime(p);
    if p <= 1 << 16 {
        return (0..p)
            .map(|x| field.from_i64(x as i64))
            .filter(|x| f.eval(x).is_zero())
            .collect();
    }
    let f = f.monic();
    if f.degree() == Some(0) {
        return Vec::new();
    }
    let x = Poly::new(field, vec![field.zero(), field.one()]);
    let xp = x.pow_mod(p, &f);
    let g = f.gcd(&xp.sub(&x));
    let mut out = Vec::new();
    split_linear(&g, p, &mut out);
    out
}

fn split_linear(g: &Poly, p: u64, out: &mut Vec<Scalar>) {
    let field = Field::Prime(p);
    match g.degree() {
        None | Some(0) => {}
        Some(1) => out.push(-&g.monic().coeffs[0]),
        Some(_) => {
            for a in 1..p {
                let shift = Poly::new(field, vec![field.from_i64(a as i64), field.one()]);
                let h = shift
                    .pow_mod((p - 1) / 2, g)
                    .sub(&Poly::constant(field.one()));
                let s = g.gcd(&h);
                let ds = s.degree().unwrap_or(0);
                if ds > 0 && Some(ds) < g.degree() {
                    split_linear(&s, p, out);
                    split_linear(&g.divrem(&s).0, p, out);
                    return;
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn q(v: &[i64]) -> Poly {
        Poly::new(Field::Rational, v.iter().map(|&x| Field::Rational.from_i64(x)).collect())
    }

    #[test]
    fn rational_roots_of_split_polynomial() {
        // (2x - 3)(x + 5)(7x - 1)^2
        let f = q(&[-3, 2])
            .mul(&q(&[5, 1]))
            .mul(&q(&[-1, 7]))
            .mul(&q(&[-1, 7]));
        let roots: Vec<String> = distinct_roots(&f).unwrap().iter().map(|r| r.to_string()).collect();
        assert_eq!(roots, ["-5", "1/7", "3/2"]);
    }

    #[test]
    fn irrational_roots_are_not_reported() {
        // x^2 - 2 has no rational root; x(x^2 + 1)(x - 4) has 0 and 4
        assert!(distinct_roots(&q(&[-2, 0, 1])).unwrap().is_empty());
        let f = q(&[0, 1]).mul(&q(&[1, 0, 1])).mul(&q(&[-4, 1]));
        let roots: Vec<String> = distinct_roots(&f).unwrap().iter().map(|r| r.to_string()).collect();
        assert_eq!(roots, ["0", "4"]);
    }

    #[test]
    fn large_rational_roots() {
        let big = Field::Rational.parse("123456789012345/987654321").unwrap();
        let f = Poly::linear_root(&big).mul(&q(&[3, 1]));
        let roots = distinct_roots(&f).unwrap();
        assert_eq!(roots, vec![Field::Rational.from_i64(-3), big]);
    }

    #[test]
    fn prime_field_roots_small_and_large() {
        for p in [7u64, 1_000_003] {
            let f = Field::Prime(p);
            let r: Vec<Scalar> = [2i64, 5, 6].iter().map(|&v| f.from_i64(v)).collect();
            let mut poly = Poly::constant(f.one());
            for x in &r {
                poly = poly.mul(&Poly::linear_root(x));
            }
            // times an irreducible quadratic x^2 + 1 when p = 3 mod 4
            if p % 4 == 3 {
                poly = poly.mul(&Poly::new(f, vec![f.one(), f.zero(), f.one()]));
            }
            assert_eq!(distinct_roots(&poly).unwrap(), r);
        }
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let f = q(&[4, -1, 0, 3]);
        let pts: Vec<(Scalar, Scalar)> = (0..4)
            .map(|i| {
                let x = Field::Rational.from_i64(i);
                let y = f.eval(&x);
                (x, y)
            })
            .collect();
        assert_eq!(Poly::interpolate(Field::Rational, &pts), f);
    }
}
