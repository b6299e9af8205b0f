//! Prime fields F_p with p < 2^16.

use std::fmt;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct PrimeField {
    p: u32,
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum FieldError {
    #[error("{0} is not a prime below 65536")]
    NotPrime(u64),
}

fn is_prime(n: u64) -> bool {
    n >= 2 && (2..).take_while(|d| d * d <= n).all(|d| n % d != 0)
}

impl PrimeField {
    pub fn new(p: u64) -> Result<PrimeField, FieldError> {
        if p >= 1 << 16 || !is_prime(p) {
            return Err(FieldError::NotPrime(p));
        }
        Ok(PrimeField { p: p as u32 })
    }

    pub fn p(self) -> u32 {
        self.p
    }

    pub fn elem(self, x: i64) -> u32 {
        x.rem_euclid(self.p as i64) as u32
    }

    pub fn add(self, a: u32, b: u32) -> u32 {
        (a + b) % self.p
    }

    pub fn sub(self, a: u32, b: u32) -> u32 {
        (a + self.p - b) % self.p
    }

    pub fn neg(self, a: u32) -> u32 {
        (self.p - a) % self.p
    }

    pub fn mul(self, a: u32, b: u32) -> u32 {
        a * b % self.p
    }

    pub fn pow(self, mut a: u32, mut e: u32) -> u32 {
        let mut r = 1 % self.p;
        while e > 0 {
            if e & 1 == 1 {
                r = self.mul(r, a);
            }
            a = self.mul(a, a);
            e >>= 1;
        }
        r
    }

    /// Multiplicative inverse; `None` for zero.
    pub fn inv(self, a: u32) -> Option<u32> {
        (a % self.p != 0).then(|| self.pow(a, self.p - 2))
    }

    pub fn elements(self) -> impl Iterator<Item = u32> {
        0..self.p
    }
}

impl fmt::Display for PrimeField {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "F_{}", self.p)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn rejects_composites() {
        assert!(PrimeField::new(4).is_err());
        assert!(PrimeField::new(1).is_err());
        assert!(PrimeField::new(65537).is_err());
        assert!(PrimeField::new(65521).is_ok());
    }

    proptest! {
        #[test]
        fn field_axioms(pi in 0usize..6, a in 0u32..1000, b in 0u32..1000, c in 0u32..1000) {
            let p = [2u64, 3, 5, 7, 251, 65521][pi];
            let f = PrimeField::new(p).unwrap();
            let (a, b, c) = (a % f.p(), b % f.p(), c % f.p());
            prop_assert_eq!(f.mul(a, f.add(b, c)), f.add(f.mul(a, b), f.mul(a, c)));
            prop_assert_eq!(f.add(a, f.neg(a)), 0);
            prop_assert_eq!(f.sub(f.add(a, b), b), a);
            if a != 0 {
                prop_assert_eq!(f.mul(a, f.inv(a).unwrap()), 1);
            }
        }
    }
}
