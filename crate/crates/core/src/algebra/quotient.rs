//! The graded quotient ring determined by a Gröbner basis: standard-monomial
//! bases, multiplication by generators, normal forms and the duality pairing.

use std::collections::HashMap;

use rayon::prelude::*;
use serde::Serialize;

use super::field::{Field, Fp};
use super::groebner::{GbError, GroebnerBasis};
use super::monomial::Monomial;
use super::poly::Polynomial;

pub type SparseVec<E> = Vec<(u32, E)>;

/// Degree-wise dimensions of the quotient ring.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct HilbertFunction {
    /// Dimensions in degrees 0 through `dims.len() - 1`.
    pub dims: Vec<usize>,
    /// Dimension one degree above the last entry.
    pub next: usize,
}

impl HilbertFunction {
    pub fn is_palindromic(&self) -> bool {
        self.dims.iter().eq(self.dims.iter().rev())
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum RingError {
    #[error(transparent)]
    Groebner(#[from] GbError),
    #[error("top degree {degree} has dimension {dim}, expected 1")]
    TopNotOneDimensional { degree: u32, dim: usize },
}

/// Counts standard monomials in degrees `0..=top` and reports degree `top + 1`.
pub fn hilbert_function<F: Field>(gb: &GroebnerBasis<F>, top: u32) -> Result<HilbertFunction, GbError> {
    let dims = (0..=top).map(|d| gb.standard_monomials(d).map(|s| s.len())).collect::<Result<_, _>>()?;
    let next = gb.standard_monomials(top + 1)?.len();
    Ok(HilbertFunction { dims, next })
}

/// Multiplication tables of `S / I` in degrees `0..=top`.
pub struct QuotientRing<F: Field> {
    field: F,
    nvars: usize,
    top: u32,
    basis: Vec<Vec<Monomial>>,
    index: Vec<HashMap<Monomial, u32>>,
    /// `mult[d][x * len(B_d) + s]` is the normal form of `x * B_d[s]` in `B_{d+1}`.
    mult: Vec<Vec<SparseVec<F::Elem>>>,
}

impl<F: Field> QuotientRing<F> {
    pub fn new(gb: &GroebnerBasis<F>, top: u32) -> Result<QuotientRing<F>, GbError> {
        let f = gb.field().clone();
        let nvars = gb.nvars();
        let mut basis = Vec::new();
        for d in 0..=top + 1 {
            basis.push(gb.standard_monomials(d)?.to_vec());
        }
        let index: Vec<HashMap<Monomial, u32>> = basis
            .iter()
            .map(|b| b.iter().enumerate().map(|(i, m)| (*m, i as u32)).collect())
            .collect();
        let lt: HashMap<Monomial, &Polynomial<F::Elem>> =
            gb.basis().iter().map(|p| (p.leading_monomial().unwrap(), p)).collect();

        // normal forms of the border monomials x * s, one degree at a time
        let mut prev: HashMap<Monomial, SparseVec<F::Elem>> = HashMap::new();
        let mut mult = Vec::new();
        for d in 0..=top as usize {
            let mut border: Vec<Monomial> = basis[d]
                .iter()
                .flat_map(|s| (0..nvars).map(move |x| s.mul_var(x)))
                .collect();
            border.sort();
            border.dedup();
            let target = &index[d + 1];
            let mut dense = vec![f.zero(); basis[d + 1].len()];
            let mut cur: HashMap<Monomial, SparseVec<F::Elem>> = HashMap::with_capacity(border.len());
            for &m in &border {
                let v: SparseVec<F::Elem> = if let Some(&i) = target.get(&m) {
                    vec![(i, f.one())]
                } else if let Some(g) = lt.get(&m) {
                    g.terms()[1..].iter().map(|(t, c)| (target[t], f.neg(c))).collect()
                } else {
                    // some m / x_v is nonstandard; reduce through it
                    let (v, u) = m
                        .support()
                        .map(|v| (v, m.div_var(v).unwrap()))
                        .find(|(_, u)| !index[d].contains_key(u))
                        .expect("minimal nonstandard monomials are leading terms");
                    let mut touched: Vec<u32> = Vec::new();
                    for (t, c) in &prev[&u] {
                        let w = basis[d][*t as usize].mul_var(v);
                        for (k, y) in &cur[&w] {
                            let slot = &mut dense[*k as usize];
                            if f.is_zero(slot) {
                                touched.push(*k);
                            }
                            f.sub_mul_assign(slot, &f.neg(c), y);
                        }
                    }
                    touched.sort_unstable();
                    touched.dedup();
                    let mut out = Vec::new();
                    for k in touched {
                        let x = std::mem::replace(&mut dense[k as usize], f.zero());
                        if !f.is_zero(&x) {
                            out.push((k, x));
                        }
                    }
                    out
                };
                cur.insert(m, v);
            }
            let table: Vec<SparseVec<F::Elem>> = (0..nvars)
                .flat_map(|x| basis[d].iter().map(move |s| s.mul_var(x)))
                .map(|m| cur[&m].clone())
                .collect();
            mult.push(table);
            prev = cur;
        }
        Ok(QuotientRing { field: f, nvars, top, basis, index, mult })
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn top(&self) -> u32 {
        self.top
    }

    pub fn basis(&self, d: u32) -> &[Monomial] {
        &self.basis[d as usize]
    }

    pub fn dim(&self, d: u32) -> usize {
        self.basis.get(d as usize).map_or(0, |b| b.len())
    }

    /// Average number of nonzero entries in the multiplication tables.
    pub fn table_density(&self) -> f64 {
        let (n, t) = self
            .mult
            .iter()
            .flatten()
            .fold((0usize, 0usize), |(n, t), v| (n + 1, t + v.len()));
        t as f64 / n.max(1) as f64
    }

    /// Normal form of `x_var * B_d[s]`.
    pub fn times_var(&self, d: u32, s: u32, var: usize) -> &SparseVec<F::Elem> {
        &self.mult[d as usize][var * self.basis[d as usize].len() + s as usize]
    }

    /// Multiplies a degree-`d` element by a variable.
    pub fn mul_var(&self, d: u32, v: &SparseVec<F::Elem>, var: usize) -> SparseVec<F::Elem> {
        let f = &self.field;
        let mut acc: HashMap<u32, F::Elem> = HashMap::new();
        for (s, c) in v {
            for (k, y) in self.times_var(d, *s, var) {
                let slot = acc.entry(*k).or_insert_with(|| f.zero());
                *slot = f.add(slot, &f.mul(c, y));
            }
        }
        let mut out: SparseVec<F::Elem> = acc.into_iter().filter(|(_, c)| !f.is_zero(c)).collect();
        out.sort_by_key(|t| t.0);
        out
    }

    /// Coordinates of a monomial in the standard basis of its degree.
    pub fn monomial_coords(&self, m: &Monomial) -> SparseVec<F::Elem> {
        let mut v: SparseVec<F::Elem> = vec![(0, self.field.one())];
        let mut cur = Monomial::one();
        for var in m.support() {
            for _ in 0..m.exp(var) {
                if cur.degree() > self.top {
                    return Vec::new();
                }
                v = self.mul_var(cur.degree(), &v, var);
                cur = cur.mul_var(var);
            }
        }
        v
    }

    /// Normal form, computed from the multiplication tables. Degrees above
    /// `top + 1` are treated as zero, which requires `dim(top + 1) == 0`.
    pub fn normal_form(&self, p: &Polynomial<F::Elem>) -> Polynomial<F::Elem> {
        let f = &self.field;
        assert!(
            self.dim(self.top + 1) == 0 || p.degree().map_or(true, |d| d <= self.top + 1),
            "degree beyond the tables"
        );
        let mut terms = Vec::new();
        for (m, c) in p.terms() {
            let d = m.degree();
            if d > self.top + 1 {
                continue;
            }
            for (k, y) in self.monomial_coords(m) {
                terms.push((self.basis[d as usize][k as usize], f.mul(c, &y)));
            }
        }
        Polynomial::from_terms(f, terms)
    }

    /// Linear functionals `B_i -> (R_{top-i})^*` given by `m ↦ (v ↦ [m v]_top)`.
    fn pairing_rows(&self, i: u32) -> Vec<SparseVec<F::Elem>> {
        let f = &self.field;
        // phi[d][m] is a vector over B_{top-d}
        let mut phi: Vec<SparseVec<F::Elem>> = vec![vec![(0, f.one())]];
        for d in 1..=i {
            let lower_index = &self.index[d as usize - 1];
            let k = self.top - d;
            let dim_k = self.basis[k as usize].len();
            phi = self.basis[d as usize]
                .par_iter()
                .map(|m| {
                    let var = m.support().next().unwrap();
                    let u = m.div_var(var).unwrap();
                    let parent = &phi[lower_index[&u] as usize];
                    let mut dense = vec![f.zero(); self.basis[k as usize + 1].len()];
                    for (t, c) in parent {
                        dense[*t as usize] = c.clone();
                    }
                    (0..dim_k as u32)
                        .filter_map(|s| {
                            let mut acc = f.zero();
                            for (t, y) in self.times_var(k, s, var) {
                                let x = &dense[*t as usize];
                                if !f.is_zero(x) {
                                    acc = f.add(&acc, &f.mul(x, y));
                                }
                            }
                            (!f.is_zero(&acc)).then_some((s, acc))
                        })
                        .collect()
                })
                .collect();
        }
        phi
    }

    /// Matrix of the pairing `R_i × R_{top-i} -> R_top` in the standard bases.
    pub fn pairing_matrix(&self, i: u32) -> Result<Vec<SparseVec<F::Elem>>, RingError> {
        let dim = self.dim(self.top);
        if dim != 1 {
            return Err(RingError::TopNotOneDimensional { degree: self.top, dim });
        }
        Ok(self.pairing_rows(i))
    }
}

/// Rank of a sparse matrix over F_p.
pub fn rank_fp(f: &Fp, rows: &[SparseVec<u32>], ncols: usize) -> usize {
    if f.p() == 2 {
        let words = ncols.div_ceil(64);
        let mut m: Vec<Vec<u64>> = rows
            .iter()
            .map(|r| {
                let mut b = vec![0u64; words];
                for (c, x) in r {
                    if x % 2 == 1 {
                        b[*c as usize / 64] |= 1 << (c % 64);
                    }
                }
                b
            })
            .collect();
        let mut rank = 0;
        for c in 0..ncols {
            let (w, bit) = (c / 64, 1u64 << (c % 64));
            let Some(p) = (rank..m.len()).find(|&i| m[i][w] & bit != 0) else { continue };
            m.swap(rank, p);
            let pivot = m[rank].clone();
            m[rank + 1..].par_iter_mut().for_each(|row| {
                if row[w] & bit != 0 {
                    for (x, y) in row[w..].iter_mut().zip(&pivot[w..]) {
                        *x ^= y;
                    }
                }
            });
            rank += 1;
        }
        rank
    } else {
        let mut m: Vec<Vec<u32>> = rows
            .iter()
            .map(|r| {
                let mut v = vec![0u32; ncols];
                for (c, x) in r {
                    v[*c as usize] = *x;
                }
                v
            })
            .collect();
        let mut rank = 0;
        for c in 0..ncols {
            let Some(p) = (rank..m.len()).find(|&i| m[i][c] != 0) else { continue };
            m.swap(rank, p);
            let inv = f.inv(&m[rank][c]);
            let pivot: Vec<u32> = m[rank].iter().map(|x| f.mul(x, &inv)).collect();
            for row in m[rank + 1..].iter_mut() {
                let k = row[c];
                if k != 0 {
                    for (x, y) in row.iter_mut().zip(&pivot) {
                        f.sub_mul_assign(x, &k, y);
                    }
                }
            }
            rank += 1;
        }
        rank
    }
}

/// Rank of the degree-`i` pairing matrix over F_p.
pub fn pairing_rank(ring: &QuotientRing<Fp>, i: u32) -> Result<usize, RingError> {
    let rows = ring.pairing_matrix(i)?;
    Ok(rank_fp(ring.field(), &rows, ring.dim(ring.top() - i)))
}
