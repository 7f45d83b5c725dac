use std::fmt;

use super::point::LinearForm;
use crate::linalg::{Field, Scalar};

/// A binary form of fixed degree. Coefficient `k` multiplies
/// `x0^(d-k) * x1^k`. Negative degrees carry no coefficients and denote the
/// zero map between line bundles.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Form {
    field: Field,
    degree: i64,
    coeffs: Vec<Scalar>,
}

impl Form {
    pub fn zero(field: Field, degree: i64) -> Form {
        let n = if degree < 0 { 0 } else { degree as usize + 1 };
        Form {
            field,
            degree,
            coeffs: vec![field.zero(); n],
        }
    }

    pub fn constant(c: Scalar) -> Form {
        Form {
            field: c.field(),
            degree: 0,
            coeffs: vec![c],
        }
    }

    pub fn one(field: Field) -> Form {
        Form::constant(field.one())
    }

    /// Builds a form of degree `coeffs.len() - 1`.
    pub fn from_coeffs(field: Field, coeffs: Vec<Scalar>) -> Form {
        assert!(!coeffs.is_empty(), "a form needs at least one coefficient");
        Form {
            field,
            degree: coeffs.len() as i64 - 1,
            coeffs,
        }
    }

    pub fn linear(l: &LinearForm) -> Form {
        Form::from_coeffs(l.field(), vec![l.c0.clone(), l.c1.clone()])
    }

    /// `x0^(d-k) * x1^k`.
    pub fn monomial(field: Field, d: usize, k: usize) -> Form {
        let mut f = Form::zero(field, d as i64);
        f.coeffs[k] = field.one();
        f
    }

    pub fn field(&self) -> Field {
        self.field
    }

    pub fn degree(&self) -> i64 {
        self.degree
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn add(&self, o: &Form) -> Form {
        assert_eq!(self.degree, o.degree, "adding forms of different degree");
        Form {
            field: self.field,
            degree: self.degree,
            coeffs: self.coeffs.iter().zip(&o.coeffs).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn scale(&self, s: &Scalar) -> Form {
        Form {
            field: self.field,
            degree: self.degree,
            coeffs: self.coeffs.iter().map(|c| c * s).collect(),
        }
    }

    pub fn neg(&self) -> Form {
        self.scale(&-self.field.one())
    }

    pub fn mul(&self, o: &Form) -> Form {
        let degree = self.degree + o.degree;
        if self.degree < 0 || o.degree < 0 {
            return Form::zero(self.field, degree);
        }
        let mut out = Form::zero(self.field, degree);
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in o.coeffs.iter().enumerate() {
                out.coeffs[i + j] = &out.coeffs[i + j] + &(a * b);
            }
        }
        out
    }

    pub fn pow(&self, e: u32) -> Form {
        (0..e).fold(Form::one(self.field), |acc, _| acc.mul(self))
    }

    pub fn eval(&self, x0: &Scalar, x1: &Scalar) -> Scalar {
        let d = self.coeffs.len();
        let mut acc = self.field.zero();
        for (k, c) in self.coeffs.iter().enumerate() {
            if !c.is_zero() {
                acc = &acc + &(&(c * &x0.pow((d - 1 - k) as u64)) * &x1.pow(k as u64));
            }
        }
        acc
    }
}

impl fmt::Display for Form {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let d = self.degree as usize;
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " + ")?;
            }
            first = false;
            let mono = match (d - k, k) {
                (0, 0) => String::new(),
                (a, 0) => power("x0", a),
                (0, b) => power("x1", b),
                (a, b) => format!("{}*{}", power("x0", a), power("x1", b)),
            };
            match (c.is_one(), mono.is_empty()) {
                (_, true) => write!(f, "{c}")?,
                (true, false) => write!(f, "{mono}")?,
                (false, false) => write!(f, "{c}*{mono}")?,
            }
        }
        Ok(())
    }
}

fn power(v: &str, e: usize) -> String {
    if e == 1 {
        v.to_string()
    } else {
        format!("{v}^{e}")
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: Field = Field::Rational;

    #[test]
    fn products_and_powers() {
        let x0 = Form::linear(&LinearForm::x0(Q));
        let x1 = Form::linear(&LinearForm::x1(Q));
        let l = x0.add(&x1.neg());
        assert_eq!(l.pow(2).to_string(), "x0^2 + -2*x0*x1 + x1^2");
        assert!(x0.mul(&x1).add(&x1.mul(&x0).neg()).is_zero());
        assert_eq!(l.pow(3).eval(&Q.from_i64(3), &Q.from_i64(1)), Q.from_i64(8));
    }

    #[test]
    fn negative_degree_is_zero() {
        let z = Form::zero(Q, -2);
        assert!(z.is_zero());
        assert!(z.coeffs().is_empty());
        assert_eq!(z.mul(&Form::one(Q)).degree(), -2);
    }
}
