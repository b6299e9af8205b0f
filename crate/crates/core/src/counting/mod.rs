//! Point counts, Betti numbers and the zeta function.

pub mod poly;
pub mod table;

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::Signed;
use serde::Serialize;

pub use poly::IntPolynomial;
pub use table::{CountRow, CountTable, FiberType};

use crate::diagram::{StratumRecord, StratumType};

/// Number of points of the complete flag variety over F_q.
pub fn flag_poly() -> IntPolynomial {
    &(&IntPolynomial::geometric(3) * &IntPolynomial::geometric(2)) * &IntPolynomial::geometric(1)
}

/// Σ multiplicity × count over all rows.
pub fn fiber_sum(t: &CountTable) -> IntPolynomial {
    t.rows.iter().fold(IntPolynomial::zero(), |acc, r| {
        &acc + &r.count.scale(&BigInt::from(r.multiplicity))
    })
}

/// Even Betti numbers b_0, b_2, ...; odd ones vanish.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BettiProfile {
    #[serde(serialize_with = "ser_bigints")]
    pub even: Vec<BigInt>,
}

/// Serializes integers as JSON numbers when they fit in `i64`, strings otherwise.
pub fn ser_bigints<S: serde::Serializer>(v: &[BigInt], s: S) -> Result<S::Ok, S::Error> {
    use num_traits::ToPrimitive;
    use serde::ser::SerializeSeq;
    let mut seq = s.serialize_seq(Some(v.len()))?;
    for b in v {
        match b.to_i64() {
            Some(x) => seq.serialize_element(&x)?,
            None => seq.serialize_element(&b.to_string())?,
        }
    }
    seq.end()
}

impl BettiProfile {
    /// Betti number in topological degree `k`.
    pub fn betti(&self, k: usize) -> BigInt {
        if k % 2 == 1 {
            return BigInt::default();
        }
        self.even.get(k / 2).cloned().unwrap_or_default()
    }

    pub fn euler_characteristic(&self) -> BigInt {
        self.even.iter().sum()
    }

    pub fn is_palindromic(&self) -> bool {
        self.even.iter().eq(self.even.iter().rev())
    }

    pub fn even_i64(&self) -> Vec<i64> {
        use num_traits::ToPrimitive;
        self.even.iter().map(|b| b.to_i64().expect("fits in i64")).collect()
    }

    /// All Betti numbers b_0..b_{2n}, odd ones included.
    pub fn full(&self) -> Vec<BigInt> {
        let n = self.even.len();
        (0..2 * n - 1).map(|k| self.betti(k)).collect()
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
#[error("negative coefficient {coeff} at q^{power}")]
pub struct NegativeCoefficient {
    pub power: usize,
    pub coeff: BigInt,
}

/// Reads Betti numbers off a point-count polynomial.
pub fn betti_from_count(p: &IntPolynomial) -> Result<BettiProfile, NegativeCoefficient> {
    if let Some((power, c)) = p.coeffs().iter().enumerate().find(|(_, c)| c.is_negative()) {
        return Err(NegativeCoefficient { power, coeff: c.clone() });
    }
    Ok(BettiProfile { even: p.coeffs().to_vec() })
}

/// Poincaré polynomial of the total space: fiber count times flag count.
pub fn total_poincare(t: &CountTable) -> BettiProfile {
    let p = &fiber_sum(t) * &flag_poly();
    betti_from_count(&p).expect("product of nonnegative polynomials")
}

/// `(i, a_i)` with Z(s) = Π (1 − q^i s)^{−a_i}.
pub fn zeta_exponents(t: &CountTable) -> Vec<(usize, BigInt)> {
    total_poincare(t).even.into_iter().enumerate().collect()
}

/// Expected fiber count polynomial.
pub fn expected_fiber_sum() -> IntPolynomial {
    IntPolynomial::from_i64(&[1, 23, 114, 189, 114, 23, 1])
}

#[derive(Clone, Debug, Serialize)]
pub struct RowCheck {
    pub ty: StratumType,
    pub multiplicity: usize,
    pub count: String,
    pub degree_ok: bool,
    pub dual_ok: bool,
    pub multiplicity_ok: bool,
    pub fibers_ok: bool,
}

impl RowCheck {
    pub fn ok(&self) -> bool {
        self.degree_ok && self.dual_ok && self.multiplicity_ok && self.fibers_ok
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct TableReport {
    pub rows: Vec<RowCheck>,
    pub fiber_sum: IntPolynomial,
    pub fiber_sum_ok: bool,
    pub failures: Vec<String>,
}

impl TableReport {
    pub fn ok(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Checks the table against the enumerated strata and the expected total.
pub fn verify_table(t: &CountTable, strata: &[StratumRecord]) -> TableReport {
    let mut by_type: BTreeMap<StratumType, usize> = BTreeMap::new();
    for r in strata {
        *by_type.entry(r.type_name).or_default() += 1;
    }
    let mut failures = Vec::new();
    let rows: Vec<RowCheck> = t
        .rows
        .iter()
        .map(|r| {
            let degree_ok = r.count.degree() == Some(6 - r.codim());
            let dual_ok = t.row(r.ty.dual()).is_some_and(|d| d.count == r.count);
            let multiplicity_ok = by_type.get(&r.ty).copied() == Some(r.multiplicity);
            let fibers_ok = r.count.divisible_by_monic(&r.fiber_factor());
            let check = RowCheck {
                ty: r.ty,
                multiplicity: r.multiplicity,
                count: r.count.to_string(),
                degree_ok,
                dual_ok,
                multiplicity_ok,
                fibers_ok,
            };
            for (ok, what) in [
                (degree_ok, "degree != 6 - codim"),
                (dual_ok, "differs from dual row"),
                (multiplicity_ok, "multiplicity differs from number of strata"),
                (fibers_ok, "annotated fiber factor does not divide count"),
            ] {
                if !ok {
                    failures.push(format!("{}: {what}", r.ty));
                }
            }
            check
        })
        .collect();
    let covered: usize = t.rows.iter().map(|r| r.multiplicity).sum();
    if covered != strata.len() {
        failures.push(format!("table covers {covered} strata, enumeration has {}", strata.len()));
    }
    let sum = fiber_sum(t);
    let fiber_sum_ok = sum == expected_fiber_sum();
    if !fiber_sum_ok {
        failures.push(format!("fiber sum is {sum}"));
    }
    TableReport { rows, fiber_sum: sum, fiber_sum_ok, failures }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn flag() {
        let f = flag_poly();
        assert_eq!(f, IntPolynomial::from_i64(&[1, 3, 5, 6, 5, 3, 1]));
        assert_eq!(f.eval_i64(2), BigInt::from(315));
        assert_eq!(f.eval_i64(1), BigInt::from(24));
    }

    #[test]
    fn betti_of_point() {
        let b = betti_from_count(&IntPolynomial::one()).unwrap();
        assert_eq!(b.full(), vec![BigInt::from(1)]);
        assert!(betti_from_count(&IntPolynomial::from_i64(&[1, -1])).is_err());
    }

    #[test]
    fn totals() {
        let t = CountTable::embedded();
        assert_eq!(fiber_sum(&t), expected_fiber_sum());
        assert_eq!(fiber_sum(&t).eval_i64(1), BigInt::from(465));
        let b = total_poincare(&t);
        assert_eq!(
            b.even_i64(),
            vec![1, 26, 188, 652, 1394, 2112, 2414, 2112, 1394, 652, 188, 26, 1]
        );
        assert_eq!(b.euler_characteristic(), BigInt::from(11160));
        let z = zeta_exponents(&t);
        assert_eq!(z.len(), 13);
        assert_eq!(z[6].1, BigInt::from(2414));
    }
}
