//! Packed monomials: 8-bit exponents, up to 40 variables, degrevlex order.

use std::cmp::Ordering;
use std::fmt;
use std::hash::{Hash, Hasher};

pub const MAX_VARS: usize = 40;
const WORDS: usize = MAX_VARS / 8;
const HIGH: u64 = 0x8080_8080_8080_8080;
const LOW: u64 = 0x0101_0101_0101_0101;
/// Exponents must stay below this so the guard bits stay clear.
pub const MAX_EXPONENT: u32 = 127;

#[derive(Clone, Copy, PartialEq, Eq)]
pub struct Monomial {
    w: [u64; WORDS],
    deg: u32,
}

impl Hash for Monomial {
    fn hash<H: Hasher>(&self, state: &mut H) {
        let mut x = self.deg as u64;
        for w in self.w {
            x = (x ^ w).wrapping_mul(0x9e37_79b9_7f4a_7c15).rotate_left(29);
        }
        state.write_u64(x);
    }
}

impl Default for Monomial {
    fn default() -> Self {
        Monomial::one()
    }
}

impl Monomial {
    pub fn one() -> Monomial {
        Monomial { w: [0; WORDS], deg: 0 }
    }

    pub fn var(i: usize) -> Monomial {
        Monomial::one().with_exp(i, 1)
    }

    pub fn from_exponents(exps: &[u32]) -> Monomial {
        assert!(exps.len() <= MAX_VARS);
        let mut m = Monomial::one();
        for (i, &e) in exps.iter().enumerate() {
            if e > 0 {
                m = m.with_exp(i, e);
            }
        }
        m
    }

    pub fn exp(&self, i: usize) -> u32 {
        ((self.w[i / 8] >> (8 * (i % 8))) & 0xff) as u32
    }

    /// Returns a copy with the exponent of variable `i` replaced.
    pub fn with_exp(mut self, i: usize, e: u32) -> Monomial {
        assert!(i < MAX_VARS && e <= MAX_EXPONENT, "exponent out of range");
        let old = self.exp(i);
        let shift = 8 * (i % 8);
        self.w[i / 8] = (self.w[i / 8] & !(0xff << shift)) | ((e as u64) << shift);
        self.deg = self.deg - old + e;
        self
    }

    pub fn degree(&self) -> u32 {
        self.deg
    }

    pub fn is_one(&self) -> bool {
        self.deg == 0
    }

    pub fn exponents(&self, nvars: usize) -> Vec<u32> {
        (0..nvars).map(|i| self.exp(i)).collect()
    }

    /// Indices of variables with nonzero exponent.
    pub fn support(&self) -> impl Iterator<Item = usize> + '_ {
        (0..MAX_VARS).filter(move |&i| self.w[i / 8] >> (8 * (i % 8)) & 0xff != 0)
    }

    pub fn mul(&self, other: &Monomial) -> Monomial {
        let mut w = [0; WORDS];
        for k in 0..WORDS {
            w[k] = self.w[k] + other.w[k];
            debug_assert_eq!(w[k] & HIGH, 0, "exponent overflow");
        }
        Monomial { w, deg: self.deg + other.deg }
    }

    pub fn mul_var(&self, i: usize) -> Monomial {
        let mut m = *self;
        m.w[i / 8] += 1 << (8 * (i % 8));
        m.deg += 1;
        debug_assert_eq!(m.w[i / 8] & HIGH, 0, "exponent overflow");
        m
    }

    /// `self / x_i`, if `x_i` divides `self`.
    pub fn div_var(&self, i: usize) -> Option<Monomial> {
        (self.exp(i) > 0).then(|| {
            let mut m = *self;
            m.w[i / 8] -= 1 << (8 * (i % 8));
            m.deg -= 1;
            m
        })
    }

    /// Whether `self` divides `other`.
    pub fn divides(&self, other: &Monomial) -> bool {
        self.deg <= other.deg
            && (0..WORDS).all(|k| ((other.w[k] | HIGH) - self.w[k]) & HIGH == HIGH)
    }

    /// `other / self`; caller guarantees divisibility.
    pub fn quotient_of(&self, other: &Monomial) -> Monomial {
        debug_assert!(self.divides(other));
        let mut w = [0; WORDS];
        for k in 0..WORDS {
            w[k] = other.w[k] - self.w[k];
        }
        Monomial { w, deg: other.deg - self.deg }
    }

    fn bytewise(&self, other: &Monomial, take_max: bool) -> Monomial {
        let mut w = [0; WORDS];
        let mut deg = 0;
        for k in 0..WORDS {
            // bytes where self >= other get their guard bit set
            let ge = ((self.w[k] | HIGH) - other.w[k]) & HIGH;
            let mask = (ge >> 7) * 0xff;
            w[k] = if take_max {
                (self.w[k] & mask) | (other.w[k] & !mask)
            } else {
                (other.w[k] & mask) | (self.w[k] & !mask)
            };
            deg += (w[k].wrapping_mul(LOW) >> 56) as u32;
        }
        Monomial { w, deg }
    }

    pub fn lcm(&self, other: &Monomial) -> Monomial {
        self.bytewise(other, true)
    }

    pub fn gcd(&self, other: &Monomial) -> Monomial {
        self.bytewise(other, false)
    }

    pub fn is_coprime(&self, other: &Monomial) -> bool {
        self.gcd(other).is_one()
    }

    pub fn display_with(&self, names: &[String]) -> String {
        if self.is_one() {
            return "1".into();
        }
        let parts: Vec<String> = self
            .support()
            .map(|i| match self.exp(i) {
                1 => names[i].clone(),
                e => format!("{}^{e}", names[i]),
            })
            .collect();
        parts.join("*")
    }
}

impl Ord for Monomial {
    /// Degree reverse lexicographic: higher degree first; on ties the
    /// monomial with the smaller exponent in the last differing variable wins.
    fn cmp(&self, other: &Self) -> Ordering {
        self.deg.cmp(&other.deg).then_with(|| {
            for k in (0..WORDS).rev() {
                if self.w[k] != other.w[k] {
                    return other.w[k].cmp(&self.w[k]);
                }
            }
            Ordering::Equal
        })
    }
}

impl PartialOrd for Monomial {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Monomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let e: Vec<u32> = (0..MAX_VARS).map(|i| self.exp(i)).collect();
        let last = e.iter().rposition(|&x| x != 0).map_or(0, |p| p + 1);
        write!(f, "x{:?}", &e[..last])
    }
}

/// All monomials of a given degree in `nvars` variables.
pub fn monomials_of_degree(nvars: usize, degree: u32) -> Vec<Monomial> {
    fn rec(var: usize, nvars: usize, left: u32, cur: Monomial, out: &mut Vec<Monomial>) {
        if var + 1 == nvars {
            out.push(cur.with_exp(var, left));
            return;
        }
        for e in 0..=left {
            rec(var + 1, nvars, left - e, cur.with_exp(var, e), out);
        }
    }
    let mut out = Vec::new();
    if nvars == 0 {
        if degree == 0 {
            out.push(Monomial::one());
        }
        return out;
    }
    rec(0, nvars, degree, Monomial::one(), &mut out);
    out
}
