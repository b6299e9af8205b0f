use num_traits::ToPrimitive;
use proptest::prelude::*;
use tetra_core::counting::{fiber_sum, total_poincare, zeta_exponents, CountTable};

fn table_coeffs() -> Vec<(usize, Vec<i128>)> {
    CountTable::embedded()
        .rows
        .iter()
        .map(|r| (r.multiplicity, r.count.coeffs().iter().map(|c| c.to_i128().unwrap()).collect()))
        .collect()
}

fn eval(c: &[i128], q: i128) -> i128 {
    c.iter().rev().fold(0, |acc, a| acc * q + a)
}

fn convolve(a: &[i128], b: &[i128]) -> Vec<i128> {
    let mut out = vec![0; a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

#[test]
fn betti_numbers_by_direct_convolution() {
    let mut fiber = vec![0i128; 7];
    for (m, c) in table_coeffs() {
        for (i, a) in c.iter().enumerate() {
            fiber[i] += m as i128 * a;
        }
    }
    assert_eq!(fiber, [1, 23, 114, 189, 114, 23, 1]);
    // Points of the complete flag variety of C^4: [2]_q [3]_q [4]_q.
    let flag = convolve(&convolve(&[1, 1], &[1, 1, 1]), &[1, 1, 1, 1]);
    let total = convolve(&fiber, &flag);
    let even: Vec<i64> = total.iter().map(|&x| x as i64).collect();
    assert_eq!(total_poincare(&CountTable::embedded()).even_i64(), even);
    assert_eq!(total.iter().sum::<i128>(), 11160);
    let zeta: Vec<i128> = zeta_exponents(&CountTable::embedded()).iter().map(|(_, a)| a.to_i128().unwrap()).collect();
    assert_eq!(zeta, total);
}

#[test]
fn rows_are_nonnegative_at_small_primes() {
    for (_, c) in table_coeffs() {
        for q in [2, 3, 5] {
            assert!(eval(&c, q) >= 0, "{c:?} at {q}");
        }
    }
}

proptest! {
    #[test]
    fn weighted_sum_agrees_pointwise(q in 2i128..200) {
        let direct: i128 = table_coeffs().iter().map(|(m, c)| *m as i128 * eval(c, q)).sum();
        let poly = fiber_sum(&CountTable::embedded());
        prop_assert_eq!(poly.eval_i64(q as i64).to_i128().unwrap(), direct);
    }

    #[test]
    fn identity_survives_q_to_q_power(r in 1usize..4, q in 2i64..6) {
        let poly = fiber_sum(&CountTable::embedded());
        let lifted = poly.substitute_power(r);
        prop_assert_eq!(lifted.eval_i64(q), poly.eval_i64(q.pow(r as u32)));
    }
}
