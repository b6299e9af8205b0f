//! Coefficient fields for polynomial arithmetic.

use std::fmt::Debug;
use std::hash::Hash;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

pub trait Field: Clone + Debug + Send + Sync + 'static {
    type Elem: Clone + PartialEq + Eq + Hash + Debug + Send + Sync + 'static;

    fn name(&self) -> String;
    fn zero(&self) -> Self::Elem;
    fn one(&self) -> Self::Elem;
    fn is_zero(&self, a: &Self::Elem) -> bool;
    fn add(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn sub(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn mul(&self, a: &Self::Elem, b: &Self::Elem) -> Self::Elem;
    fn neg(&self, a: &Self::Elem) -> Self::Elem;
    /// Inverse of a nonzero element.
    fn inv(&self, a: &Self::Elem) -> Self::Elem;
    fn from_i64(&self, x: i64) -> Self::Elem;
    /// Image of a rational; panics if the denominator is not invertible.
    fn from_rational(&self, q: &BigRational) -> Self::Elem;
    fn format(&self, a: &Self::Elem) -> String;

    /// `a -= c * b`.
    fn sub_mul_assign(&self, a: &mut Self::Elem, c: &Self::Elem, b: &Self::Elem) {
        *a = self.sub(a, &self.mul(c, b));
    }

    fn is_one(&self, a: &Self::Elem) -> bool {
        *a == self.one()
    }
}

/// The prime field F_p, p < 2^31.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Fp {
    p: u32,
}

impl Fp {
    pub fn new(p: u32) -> Fp {
        assert!(p >= 2 && p < 1 << 31 && (2..).take_while(|d: &u32| (*d as u64) * (*d as u64) <= p as u64).all(|d| p % d != 0), "{p} is not prime");
        Fp { p }
    }

    pub fn f2() -> Fp {
        Fp { p: 2 }
    }

    pub fn p(&self) -> u32 {
        self.p
    }
}

impl Field for Fp {
    type Elem = u32;

    fn name(&self) -> String {
        format!("F{}", self.p)
    }
    fn zero(&self) -> u32 {
        0
    }
    fn one(&self) -> u32 {
        1
    }
    fn is_zero(&self, a: &u32) -> bool {
        *a == 0
    }
    fn add(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + *b as u64) % self.p as u64) as u32
    }
    fn sub(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 + self.p as u64 - *b as u64) % self.p as u64) as u32
    }
    fn mul(&self, a: &u32, b: &u32) -> u32 {
        ((*a as u64 * *b as u64) % self.p as u64) as u32
    }
    fn neg(&self, a: &u32) -> u32 {
        (self.p - a) % self.p
    }
    fn inv(&self, a: &u32) -> u32 {
        assert!(*a != 0, "inverse of zero");
        let (mut r, mut base, mut e) = (1u64, *a as u64, self.p as u64 - 2);
        while e > 0 {
            if e & 1 == 1 {
                r = r * base % self.p as u64;
            }
            base = base * base % self.p as u64;
            e >>= 1;
        }
        r as u32
    }
    fn from_i64(&self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }
    fn from_rational(&self, q: &BigRational) -> u32 {
        let p = BigInt::from(self.p);
        let red = |x: &BigInt| (((x % &p) + &p) % &p).to_u32().unwrap();
        self.mul(&red(q.numer()), &self.inv(&red(q.denom())))
    }
    fn format(&self, a: &u32) -> String {
        a.to_string()
    }
    fn sub_mul_assign(&self, a: &mut u32, c: &u32, b: &u32) {
        if self.p == 2 {
            *a ^= c & b;
        } else {
            let prod = (*c as u64 * *b as u64) % self.p as u64;
            *a = ((*a as u64 + self.p as u64 - prod) % self.p as u64) as u32;
        }
    }
}

/// The rationals with arbitrary-precision numerators and denominators.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Default)]
pub struct Rationals;

impl Field for Rationals {
    type Elem = BigRational;

    fn name(&self) -> String {
        "Q".into()
    }
    fn zero(&self) -> BigRational {
        BigRational::zero()
    }
    fn one(&self) -> BigRational {
        BigRational::one()
    }
    fn is_zero(&self, a: &BigRational) -> bool {
        a.is_zero()
    }
    fn add(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a + b
    }
    fn sub(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a - b
    }
    fn mul(&self, a: &BigRational, b: &BigRational) -> BigRational {
        a * b
    }
    fn neg(&self, a: &BigRational) -> BigRational {
        -a
    }
    fn inv(&self, a: &BigRational) -> BigRational {
        assert!(!a.is_zero(), "inverse of zero");
        a.recip()
    }
    fn from_i64(&self, x: i64) -> BigRational {
        BigRational::from_integer(BigInt::from(x))
    }
    fn from_rational(&self, q: &BigRational) -> BigRational {
        q.clone()
    }
    fn format(&self, a: &BigRational) -> String {
        a.to_string()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    proptest! {
        #[test]
        fn fp_laws(a in -1000i64..1000, b in -1000i64..1000, pi in 0usize..4) {
            let f = Fp::new([2, 3, 32003, 2147483647][pi]);
            let (x, y) = (f.from_i64(a), f.from_i64(b));
            prop_assert_eq!(f.add(&f.sub(&x, &y), &y), x);
            let mut z = x;
            f.sub_mul_assign(&mut z, &y, &y);
            prop_assert_eq!(z, f.sub(&x, &f.mul(&y, &y)));
            if y != 0 {
                prop_assert_eq!(f.mul(&y, &f.inv(&y)), 1);
            }
        }
    }

    #[test]
    fn rationals() {
        let q = Rationals;
        let a = q.from_i64(3);
        assert_eq!(q.mul(&a, &q.inv(&a)), q.one());
        assert_eq!(q.format(&q.neg(&a)), "-3");
        let half = BigRational::new(BigInt::from(-1), BigInt::from(2));
        assert_eq!(Fp::new(7).from_rational(&half), 3);
    }
}
