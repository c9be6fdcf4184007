//! Exact univariate polynomials over arbitrary-precision integers.
//!
//! `Poly` is the scalar ring for every morphism coefficient in this crate:
//! degree values, Möbius coefficients and all structure constants live in
//! Z[t].  Coefficients are stored lowest degree first with no trailing
//! zeros, so equality of values is equality of representations.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

/// The indeterminate is called `t` throughout.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Poly {
    coeffs: Vec<BigInt>,
}

impl Poly {
    pub fn zero() -> Self {
        Poly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Poly::constant(1)
    }

    pub fn constant(c: i64) -> Self {
        Poly::from_bigint(BigInt::from(c))
    }

    pub fn from_bigint(c: BigInt) -> Self {
        if c.is_zero() {
            Poly::zero()
        } else {
            Poly { coeffs: vec![c] }
        }
    }

    /// The monomial `t`.
    pub fn t() -> Self {
        Poly::monomial(1, BigInt::one())
    }

    /// `c * t^deg`.
    pub fn monomial(deg: usize, c: BigInt) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); deg + 1];
        coeffs[deg] = c;
        Poly { coeffs }
    }

    pub fn from_coeffs(coeffs: Vec<BigInt>) -> Self {
        let mut p = Poly { coeffs };
        p.normalize();
        p
    }

    fn normalize(&mut self) {
        while self.coeffs.last().is_some_and(Zero::is_zero) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.coeffs.len() == 1 && self.coeffs[0].is_one()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn scale(&self, c: &BigInt) -> Self {
        if c.is_zero() {
            return Poly::zero();
        }
        Poly {
            coeffs: self.coeffs.iter().map(|a| a * c).collect(),
        }
    }

    /// Exact Horner evaluation at a rational point.
    pub fn eval(&self, v: &BigRational) -> BigRational {
        let mut acc = BigRational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * v + BigRational::from(c.clone());
        }
        acc
    }

    /// Integer-coefficient array, lowest degree first.
    pub fn to_json(&self) -> serde_json::Value {
        serde_json::Value::Array(
            self.coeffs
                .iter()
                .map(|c| {
                    serde_json::Value::Number(
                        serde_json::Number::from_string_unchecked(c.to_string()),
                    )
                })
                .collect(),
        )
    }
}

impl fmt::Display for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mag = c.abs();
            if first {
                if c.is_negative() {
                    write!(f, "-")?;
                }
                first = false;
            } else if c.is_negative() {
                write!(f, " - ")?;
            } else {
                write!(f, " + ")?;
            }
            if i == 0 {
                write!(f, "{mag}")?;
            } else {
                if !mag.is_one() {
                    write!(f, "{mag}*")?;
                }
                if i == 1 {
                    write!(f, "t")?;
                } else {
                    write!(f, "t^{i}")?;
                }
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Poly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Poly({self})")
    }
}

impl Add for &Poly {
    type Output = Poly;
    fn add(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            coeffs.push(a + b);
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Sub for &Poly {
    type Output = Poly;
    fn sub(self, rhs: &Poly) -> Poly {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        let mut coeffs = Vec::with_capacity(n);
        for i in 0..n {
            let a = self.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            let b = rhs.coeffs.get(i).cloned().unwrap_or_else(BigInt::zero);
            coeffs.push(a - b);
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Mul for &Poly {
    type Output = Poly;
    fn mul(self, rhs: &Poly) -> Poly {
        if self.is_zero() || rhs.is_zero() {
            return Poly::zero();
        }
        let mut coeffs = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in rhs.coeffs.iter().enumerate() {
                coeffs[i + j] += a * b;
            }
        }
        Poly::from_coeffs(coeffs)
    }
}

impl Neg for &Poly {
    type Output = Poly;
    fn neg(self) -> Poly {
        Poly {
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }
}

impl AddAssign<&Poly> for Poly {
    fn add_assign(&mut self, rhs: &Poly) {
        *self = &*self + rhs;
    }
}

/// Parse an exact rational such as `3`, `-2`, or `5/2`.
pub fn parse_rational(s: &str) -> crate::error::Result<BigRational> {
    let s = s.trim();
    let parse_int = |x: &str| -> crate::error::Result<BigInt> {
        x.trim()
            .parse::<BigInt>()
            .map_err(|_| crate::error::Error::Invalid(format!("bad integer `{x}`")))
    };
    match s.split_once('/') {
        Some((num, den)) => {
            let d = parse_int(den)?;
            if d.is_zero() {
                return Err(crate::error::Error::Invalid("zero denominator".into()));
            }
            Ok(BigRational::new(parse_int(num)?, d))
        }
        None => Ok(BigRational::from(parse_int(s)?)),
    }
}

/// Render a rational: `7` when integral, `5/2` otherwise.
pub fn rational_to_string(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn p(coeffs: &[i64]) -> Poly {
        Poly::from_coeffs(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    #[test]
    fn basic_arith() {
        // (t, 1, add) -> t + 1
        assert_eq!(&Poly::t() + &Poly::one(), p(&[1, 1]));
        // (t-2)(t-1) = t^2 - 3t + 2
        assert_eq!(&p(&[-2, 1]) * &p(&[-1, 1]), p(&[2, -3, 1]));
        // 0 * p = 0
        assert_eq!(&Poly::zero() * &p(&[4, 7, -1]), Poly::zero());
    }

    #[test]
    fn eval_examples() {
        let two = BigRational::from(BigInt::from(2));
        assert_eq!(p(&[2, -3, 1]).eval(&two), BigRational::zero());
        assert_eq!(Poly::one().eval(&two), BigRational::one());
        let five = BigRational::from(BigInt::from(5));
        assert_eq!(Poly::t().eval(&five), five);
    }

    #[test]
    fn display_form() {
        assert_eq!(p(&[2, -3, 1]).to_string(), "2 - 3*t + t^2");
        assert_eq!(p(&[0, 1]).to_string(), "t");
        assert_eq!(Poly::zero().to_string(), "0");
        assert_eq!(p(&[-1, 0, 2]).to_string(), "-1 + 2*t^2");
    }

    #[test]
    fn json_form() {
        assert_eq!(p(&[2, -3, 1]).to_json().to_string(), "[2,-3,1]");
        assert_eq!(Poly::zero().to_json().to_string(), "[]");
    }

    #[test]
    fn parse_rationals() {
        assert_eq!(parse_rational("5/2").unwrap().to_string(), "5/2");
        assert_eq!(rational_to_string(&parse_rational("4/2").unwrap()), "2");
        assert!(parse_rational("1/0").is_err());
    }

    fn arb_poly() -> impl Strategy<Value = Poly> {
        proptest::collection::vec(-50i64..50, 0..6).prop_map(|v| p(&v))
    }

    proptest! {
        #[test]
        fn add_assoc_comm(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a + &b) + &c, &a + &(&b + &c));
            prop_assert_eq!(&a + &b, &b + &a);
        }

        #[test]
        fn mul_assoc_distributes(a in arb_poly(), b in arb_poly(), c in arb_poly()) {
            prop_assert_eq!(&(&a * &b) * &c, &a * &(&b * &c));
            prop_assert_eq!(&a * &(&b + &c), &(&a * &b) + &(&a * &c));
        }

        #[test]
        fn eval_is_ring_hom(a in arb_poly(), b in arb_poly(), n in -20i64..20, d in 1i64..8) {
            let v = BigRational::new(BigInt::from(n), BigInt::from(d));
            prop_assert_eq!((&a * &b).eval(&v), a.eval(&v) * b.eval(&v));
            prop_assert_eq!((&a + &b).eval(&v), a.eval(&v) + b.eval(&v));
        }
    }
}
