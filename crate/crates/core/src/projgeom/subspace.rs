//! Subspaces of F_p^4 in reduced row-echelon form.

use std::fmt;

use super::field::PrimeField;

pub type Vector = [u32; 4];

/// A linear subspace of F_p^4, stored as its RREF basis.
#[derive(Clone, PartialEq, Eq, Hash, Debug)]
pub struct Subspace {
    rows: Vec<Vector>,
}

/// Row-reduces in place and drops zero rows.
fn rref(f: PrimeField, mut rows: Vec<Vector>) -> Vec<Vector> {
    let mut r = 0;
    for col in 0..4 {
        let Some(piv) = (r..rows.len()).find(|&i| rows[i][col] != 0) else {
            continue;
        };
        rows.swap(r, piv);
        let inv = f.inv(rows[r][col]).unwrap();
        for x in rows[r].iter_mut() {
            *x = f.mul(*x, inv);
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] != 0 {
                let c = rows[i][col];
                for k in 0..4 {
                    rows[i][k] = f.sub(rows[i][k], f.mul(c, rows[r][k]));
                }
            }
        }
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    rows
}

impl Subspace {
    pub fn span(f: PrimeField, vectors: &[Vector]) -> Subspace {
        let rows = vectors.iter().map(|v| v.map(|x| x % f.p())).collect();
        Subspace { rows: rref(f, rows) }
    }

    pub fn zero() -> Subspace {
        Subspace { rows: Vec::new() }
    }

    pub fn whole(f: PrimeField) -> Subspace {
        Subspace::span(f, &[[1, 0, 0, 0], [0, 1, 0, 0], [0, 0, 1, 0], [0, 0, 0, 1]])
    }

    pub fn dim(&self) -> usize {
        self.rows.len()
    }

    pub fn basis(&self) -> &[Vector] {
        &self.rows
    }

    /// `self + other`.
    pub fn join(&self, f: PrimeField, other: &Subspace) -> Subspace {
        let mut v = self.rows.clone();
        v.extend_from_slice(&other.rows);
        Subspace { rows: rref(f, v) }
    }

    pub fn contains_vector(&self, f: PrimeField, v: &Vector) -> bool {
        let mut rows = self.rows.clone();
        rows.push(*v);
        rref(f, rows).len() == self.dim()
    }

    pub fn contains(&self, f: PrimeField, other: &Subspace) -> bool {
        other.rows.iter().all(|v| self.contains_vector(f, v))
    }

    /// Orthogonal complement under the standard pairing.
    pub fn annihilator(&self, f: PrimeField) -> Subspace {
        let pivots: Vec<usize> =
            self.rows.iter().map(|r| r.iter().position(|&x| x != 0).unwrap()).collect();
        let mut out = Vec::new();
        for free in (0..4).filter(|c| !pivots.contains(c)) {
            let mut v = [0u32; 4];
            v[free] = 1;
            for (r, &pc) in self.rows.iter().zip(&pivots) {
                v[pc] = f.neg(r[free]);
            }
            out.push(v);
        }
        Subspace::span(f, &out)
    }

    pub fn meet(&self, f: PrimeField, other: &Subspace) -> Subspace {
        self.annihilator(f).join(f, &other.annihilator(f)).annihilator(f)
    }

    pub fn meet_dim(&self, f: PrimeField, other: &Subspace) -> usize {
        self.dim() + other.dim() - self.join(f, other).dim()
    }

    /// Image under the linear map `v ↦ v·g` (rows of `g` are images of basis vectors).
    pub fn transform(&self, f: PrimeField, g: &[Vector; 4]) -> Subspace {
        let img: Vec<Vector> = self
            .rows
            .iter()
            .map(|v| {
                std::array::from_fn(|j| {
                    (0..4).fold(0, |acc, i| f.add(acc, f.mul(v[i], g[i][j])))
                })
            })
            .collect();
        Subspace::span(f, &img)
    }
}

impl fmt::Display for Subspace {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let rows: Vec<String> = self.rows.iter().map(|r| format!("{r:?}")).collect();
        write!(f, "<{}>", rows.join(", "))
    }
}

/// All subspaces of the given dimension, in RREF.
pub fn enumerate_subspaces(f: PrimeField, dim: usize) -> Vec<Subspace> {
    assert!(dim <= 4);
    let mut out = Vec::new();
    let p = f.p();
    for pivmask in 0u32..16 {
        if pivmask.count_ones() as usize != dim {
            continue;
        }
        let pivots: Vec<usize> = (0..4).filter(|c| pivmask & (1 << c) != 0).collect();
        // free slots: (row, col) with col > pivot of row and col not a pivot
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &pc)| {
                (pc + 1..4).filter(|c| pivmask & (1 << c) == 0).map(move |c| (r, c))
            })
            .collect();
        let total = (p as u64).pow(free.len() as u32);
        for mut code in 0..total {
            let mut rows = vec![[0u32; 4]; dim];
            for (r, &pc) in pivots.iter().enumerate() {
                rows[r][pc] = 1;
            }
            for &(r, c) in &free {
                rows[r][c] = (code % p as u64) as u32;
                code /= p as u64;
            }
            out.push(Subspace { rows });
        }
    }
    out
}

/// Gaussian binomial [n choose k]_q.
pub fn gaussian_binomial(n: u32, k: u32, q: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num *= q.pow(n - i) - 1;
        den *= q.pow(i + 1) - 1;
    }
    num / den
}
