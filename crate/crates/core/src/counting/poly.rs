//! Univariate integer polynomials with arbitrary-precision coefficients.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

/// A polynomial in `q`; `coeffs[i]` is the coefficient of `q^i`.
/// No trailing zeros are stored.
#[derive(Clone, PartialEq, Eq, Hash, Debug, Default)]
pub struct IntPolynomial {
    coeffs: Vec<BigInt>,
}

impl IntPolynomial {
    pub fn new(coeffs: Vec<BigInt>) -> IntPolynomial {
        let mut p = IntPolynomial { coeffs };
        p.trim();
        p
    }

    pub fn from_i64(coeffs: &[i64]) -> IntPolynomial {
        IntPolynomial::new(coeffs.iter().map(|&c| BigInt::from(c)).collect())
    }

    pub fn zero() -> IntPolynomial {
        IntPolynomial { coeffs: Vec::new() }
    }

    pub fn one() -> IntPolynomial {
        IntPolynomial::from_i64(&[1])
    }

    /// `q^k`.
    pub fn monomial(k: usize) -> IntPolynomial {
        let mut c = vec![BigInt::zero(); k + 1];
        c[k] = BigInt::one();
        IntPolynomial { coeffs: c }
    }

    /// `1 + q + ... + q^k`.
    pub fn geometric(k: usize) -> IntPolynomial {
        IntPolynomial::new(vec![BigInt::one(); k + 1])
    }

    fn trim(&mut self) {
        while self.coeffs.last().is_some_and(|c| c.is_zero()) {
            self.coeffs.pop();
        }
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> BigInt {
        self.coeffs.get(i).cloned().unwrap_or_default()
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, or `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn eval(&self, q: &BigInt) -> BigInt {
        self.coeffs.iter().rev().fold(BigInt::zero(), |acc, c| acc * q + c)
    }

    pub fn eval_i64(&self, q: i64) -> BigInt {
        self.eval(&BigInt::from(q))
    }

    /// `p(q^r)`.
    pub fn substitute_power(&self, r: usize) -> IntPolynomial {
        assert!(r >= 1);
        let mut c = vec![BigInt::zero(); self.coeffs.len().saturating_sub(1) * r + 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            c[i * r] = a.clone();
        }
        IntPolynomial::new(c)
    }

    pub fn scale(&self, k: &BigInt) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| c * k).collect())
    }

    pub fn is_palindromic(&self) -> bool {
        let n = self.coeffs.len();
        (0..n).all(|i| self.coeffs[i] == self.coeffs[n - 1 - i])
    }

    pub fn has_nonnegative_coeffs(&self) -> bool {
        self.coeffs.iter().all(|c| !c.is_negative())
    }

    /// Division by a monic polynomial: `(quotient, remainder)`.
    pub fn div_rem_monic(&self, d: &IntPolynomial) -> (IntPolynomial, IntPolynomial) {
        let dd = d.degree().expect("division by zero polynomial");
        assert!(d.coeffs[dd].is_one(), "divisor must be monic");
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (IntPolynomial::zero(), self.clone());
        }
        let mut quo = vec![BigInt::zero(); rem.len() - dd];
        for i in (0..quo.len()).rev() {
            let c = rem[i + dd].clone();
            if c.is_zero() {
                continue;
            }
            for (j, dj) in d.coeffs.iter().enumerate() {
                rem[i + j] -= &c * dj;
            }
            quo[i] = c;
        }
        (IntPolynomial::new(quo), IntPolynomial::new(rem))
    }

    pub fn divisible_by_monic(&self, d: &IntPolynomial) -> bool {
        self.div_rem_monic(d).1.is_zero()
    }

    pub fn pow(&self, e: u32) -> IntPolynomial {
        (0..e).fold(IntPolynomial::one(), |acc, _| &acc * self)
    }

    /// Coefficients as `i64` when they all fit.
    pub fn to_i64_vec(&self) -> Option<Vec<i64>> {
        use num_traits::ToPrimitive;
        self.coeffs.iter().map(|c| c.to_i64()).collect()
    }
}

impl Add for &IntPolynomial {
    type Output = IntPolynomial;
    fn add(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) + rhs.coeff(i)).collect())
    }
}

impl Sub for &IntPolynomial {
    type Output = IntPolynomial;
    fn sub(self, rhs: &IntPolynomial) -> IntPolynomial {
        let n = self.coeffs.len().max(rhs.coeffs.len());
        IntPolynomial::new((0..n).map(|i| self.coeff(i) - rhs.coeff(i)).collect())
    }
}

impl Neg for &IntPolynomial {
    type Output = IntPolynomial;
    fn neg(self) -> IntPolynomial {
        IntPolynomial::new(self.coeffs.iter().map(|c| -c).collect())
    }
}

impl Mul for &IntPolynomial {
    type Output = IntPolynomial;
    fn mul(self, rhs: &IntPolynomial) -> IntPolynomial {
        if self.is_zero() || rhs.is_zero() {
            return IntPolynomial::zero();
        }
        let mut c = vec![BigInt::zero(); self.coeffs.len() + rhs.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in rhs.coeffs.iter().enumerate() {
                c[i + j] += a * b;
            }
        }
        IntPolynomial::new(c)
    }
}

impl fmt::Display for IntPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let sign = if c.is_negative() { "-" } else { "+" };
            let abs = c.abs();
            if first {
                if c.is_negative() {
                    f.write_str("-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            first = false;
            match (i, abs.is_one()) {
                (0, _) => write!(f, "{abs}")?,
                (1, true) => f.write_str("q")?,
                (1, false) => write!(f, "{abs}q")?,
                (_, true) => write!(f, "q^{i}")?,
                (_, false) => write!(f, "{abs}q^{i}")?,
            }
        }
        Ok(())
    }
}

impl Serialize for IntPolynomial {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        super::ser_bigints(&self.coeffs, s)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic() {
        let a = IntPolynomial::from_i64(&[1, 1]);
        let b = IntPolynomial::from_i64(&[-1, 1]);
        assert_eq!(&a * &b, IntPolynomial::from_i64(&[-1, 0, 1]));
        assert_eq!(&(&a + &b) - &a, b);
        assert_eq!((&a - &a).degree(), None);
        assert_eq!(a.pow(3), IntPolynomial::from_i64(&[1, 3, 3, 1]));
    }

    #[test]
    fn division() {
        let p = IntPolynomial::from_i64(&[0, 6, -5, 1]);
        let d = IntPolynomial::from_i64(&[-2, 1]);
        let (q, r) = p.div_rem_monic(&d);
        assert!(r.is_zero());
        assert_eq!(q, IntPolynomial::from_i64(&[0, -3, 1]));
        assert!(!IntPolynomial::from_i64(&[1, 1]).divisible_by_monic(&d));
    }

    #[test]
    fn display() {
        assert_eq!(IntPolynomial::from_i64(&[6, -5, 1]).to_string(), "q^2 - 5q + 6");
        assert_eq!(IntPolynomial::from_i64(&[0, 0, -1]).to_string(), "-q^2");
    }
}
