//! Degree-by-degree Gröbner bases of homogeneous ideals (F4-style linear algebra).
//!
//! Each degree collects the S-polynomial halves whose lcm lives in that
//! degree, finds reducers for every monomial that appears (symbolic
//! preprocessing), reduces the rows in parallel and puts the remainders in
//! reduced row-echelon form. The resulting basis is the unique reduced
//! Gröbner basis, truncated at the requested degree.

use std::cmp::Reverse;
use std::collections::{BTreeMap, BinaryHeap, HashMap, HashSet};
use std::time::Instant;

use rayon::prelude::*;
use serde::Serialize;

use super::field::Field;
use super::monomial::Monomial;
use super::poly::Polynomial;

/// Order in which the rows of a degree are fed to the elimination.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub enum PairOrder {
    LcmAscending,
    LcmDescending,
}

#[derive(Clone, Debug, Default, PartialEq, Serialize)]
pub struct Budget {
    pub max_seconds: Option<f64>,
    pub max_basis: Option<usize>,
    pub max_columns: Option<usize>,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GbOptions {
    /// Highest degree computed; the basis is exact up to this degree.
    pub max_degree: u32,
    /// Worker threads for row reduction; `None` uses the global pool.
    pub threads: Option<usize>,
    pub order: PairOrder,
    /// Split each degree into batches of this many rows.
    pub batch_size: Option<usize>,
    pub budget: Budget,
}

impl Default for GbOptions {
    fn default() -> Self {
        GbOptions {
            max_degree: 13,
            threads: None,
            order: PairOrder::LcmAscending,
            batch_size: None,
            budget: Budget::default(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum GbError {
    #[error("input polynomial {index} is not homogeneous")]
    NotHomogeneous { index: usize },
    #[error("resource budget exceeded ({reason}); completed through degree {reached_degree}")]
    BudgetExceeded { reached_degree: u32, reason: String },
    #[error("degree {degree} is beyond the truncation degree {max_degree}")]
    BeyondTruncation { degree: u32, max_degree: u32 },
}

#[derive(Clone, Debug, Default, Serialize)]
pub struct DegreeStats {
    pub degree: u32,
    pub rows: usize,
    pub columns: usize,
    pub new_elements: usize,
    pub standard: usize,
    pub seconds: f64,
}

/// A reduced Gröbner basis in degrevlex, exact through `max_degree`.
#[derive(Clone, Debug)]
pub struct GroebnerBasis<F: Field> {
    field: F,
    nvars: usize,
    max_degree: u32,
    basis: Vec<Polynomial<F::Elem>>,
    standard: Vec<Vec<Monomial>>,
    standard_sets: Vec<HashSet<Monomial>>,
    lt_index: HashMap<Monomial, usize>,
    stats: Vec<DegreeStats>,
}

#[derive(Clone, Copy, Debug)]
struct Pair {
    i: u32,
    j: u32,
    lcm: Monomial,
}

type Row<E> = Vec<(u32, E)>;

struct Engine<F: Field> {
    nvars: usize,
    max_degree: u32,
    polys: Vec<Polynomial<F::Elem>>,
    lt: HashMap<Monomial, u32>,
    std_sets: Vec<HashSet<Monomial>>,
    memo: HashMap<Monomial, (u32, Monomial)>,
    queue: BTreeMap<u32, Vec<Pair>>,
    stats: Vec<DegreeStats>,
}

/// Symbolic-preprocessing output for one batch.
struct Matrix<E> {
    columns: Vec<Monomial>,
    rows: Vec<Row<E>>,
    /// Column -> index into `reducers`.
    pivot_of: Vec<Option<u32>>,
    /// Reducer rows without their leading entry (leading coefficient one).
    reducers: Vec<Row<E>>,
}

impl<F: Field> Engine<F> {
    fn new(nvars: usize, max_degree: u32) -> Self {
        let mut std_sets = vec![HashSet::new(); max_degree as usize + 1];
        std_sets[0].insert(Monomial::one());
        Engine {
            nvars,
            max_degree,
            polys: Vec::new(),
            lt: HashMap::new(),
            std_sets,
            memo: HashMap::new(),
            queue: BTreeMap::new(),
            stats: Vec::new(),
        }
    }

    fn is_standard(&self, m: &Monomial) -> bool {
        self.std_sets[m.degree() as usize].contains(m)
    }

    /// A basis element and multiplier whose product has leading monomial `m`.
    fn reducer(&mut self, m: Monomial) -> Option<(u32, Monomial)> {
        if let Some(&g) = self.lt.get(&m) {
            return Some((g, Monomial::one()));
        }
        if m.degree() == 0 {
            return None;
        }
        if let Some(&r) = self.memo.get(&m) {
            return Some(r);
        }
        for v in 0..self.nvars {
            let Some(u) = m.div_var(v) else { continue };
            if !self.is_standard(&u) {
                let (g, t) = self.reducer(u).expect("nonstandard monomial without reducer");
                let r = (g, t.mul_var(v));
                self.memo.insert(m, r);
                return Some(r);
            }
        }
        None
    }

    fn preprocess(&mut self, rows: &[(u32, Monomial)]) -> Matrix<F::Elem> {
        let mut index: HashMap<Monomial, u32> = HashMap::new();
        let mut mons: Vec<Monomial> = Vec::new();
        let mut red_of: Vec<Option<(u32, Monomial)>> = Vec::new();
        let mut work: Vec<u32> = Vec::new();
        let visit = |m: Monomial, index: &mut HashMap<Monomial, u32>, mons: &mut Vec<Monomial>, work: &mut Vec<u32>| {
            if !index.contains_key(&m) {
                index.insert(m, mons.len() as u32);
                mons.push(m);
                work.push(mons.len() as u32 - 1);
            }
        };
        for &(g, t) in rows {
            for (m, _) in self.polys[g as usize].terms() {
                visit(m.mul(&t), &mut index, &mut mons, &mut work);
            }
        }
        while let Some(id) = work.pop() {
            let m = mons[id as usize];
            let r = self.reducer(m);
            if red_of.len() < mons.len() {
                red_of.resize(mons.len(), None);
            }
            red_of[id as usize] = r;
            if let Some((g, t)) = r {
                for (mm, _) in self.polys[g as usize].terms().iter().skip(1) {
                    visit(mm.mul(&t), &mut index, &mut mons, &mut work);
                }
            }
        }
        red_of.resize(mons.len(), None);

        // columns in decreasing monomial order
        let mut order: Vec<u32> = (0..mons.len() as u32).collect();
        order.sort_unstable_by(|a, b| mons[*b as usize].cmp(&mons[*a as usize]));
        let mut col_of = vec![0u32; mons.len()];
        for (c, &id) in order.iter().enumerate() {
            col_of[id as usize] = c as u32;
        }
        let columns: Vec<Monomial> = order.iter().map(|&id| mons[id as usize]).collect();
        let expand = |g: u32, t: Monomial, skip: usize| -> Row<F::Elem> {
            self.polys[g as usize]
                .terms()
                .iter()
                .skip(skip)
                .map(|(m, c)| (col_of[index[&m.mul(&t)] as usize], c.clone()))
                .collect()
        };
        let mut pivot_of = vec![None; columns.len()];
        let mut reducers = Vec::new();
        for (c, &id) in order.iter().enumerate() {
            if let Some((g, t)) = red_of[id as usize] {
                pivot_of[c] = Some(reducers.len() as u32);
                reducers.push(expand(g, t, 1));
            }
        }
        let rows = rows
            .iter()
            .filter(|&&(g, t)| {
                // a row that is itself the reducer of its leading monomial reduces to zero
                let lead = self.polys[g as usize].leading_monomial().unwrap().mul(&t);
                red_of[index[&lead] as usize] != Some((g, t))
            })
            .map(|&(g, t)| expand(g, t, 0))
            .collect();
        Matrix { columns, rows, pivot_of, reducers }
    }

    fn add_element(&mut self, p: Polynomial<F::Elem>) -> u32 {
        let id = self.polys.len() as u32;
        self.lt.insert(p.leading_monomial().unwrap(), id);
        self.polys.push(p);
        id
    }

    fn lt_of(&self, i: u32) -> Monomial {
        self.polys[i as usize].leading_monomial().unwrap()
    }

    /// Gebauer–Möller update for a new element `h`.
    fn update_pairs(&mut self, h: u32) {
        let lh = self.lt_of(h);
        for pairs in self.queue.values_mut() {
            pairs.retain(|p| {
                !(lh.divides(&p.lcm)
                    && self.polys[p.i as usize].leading_monomial().unwrap().lcm(&lh) != p.lcm
                    && self.polys[p.j as usize].leading_monomial().unwrap().lcm(&lh) != p.lcm)
            });
        }
        let mut cands: Vec<(Monomial, bool, u32)> = (0..h)
            .filter_map(|g| {
                let lg = self.lt_of(g);
                let l = lg.lcm(&lh);
                (l.degree() <= self.max_degree).then(|| (l, lg.is_coprime(&lh), g))
            })
            .collect();
        cands.sort_by(|a, b| a.0.cmp(&b.0).then(b.1.cmp(&a.1)).then(a.2.cmp(&b.2)));
        let mut kept: Vec<(Monomial, bool, u32)> = Vec::new();
        for c in cands {
            if !kept.iter().any(|k| k.0.divides(&c.0)) {
                kept.push(c);
            }
        }
        for (l, coprime, g) in kept {
            if !coprime {
                self.queue.entry(l.degree()).or_default().push(Pair { i: g, j: h, lcm: l });
            }
        }
    }

    fn update_standard(&mut self, d: u32) {
        let prev = &self.std_sets[d as usize - 1];
        let mut cand: HashSet<Monomial> = HashSet::new();
        for s in prev {
            for v in 0..self.nvars {
                cand.insert(s.mul_var(v));
            }
        }
        let next: HashSet<Monomial> = cand
            .into_iter()
            .filter(|m| {
                !self.lt.contains_key(m)
                    && m.support().all(|v| prev.contains(&m.div_var(v).unwrap()))
            })
            .collect();
        self.std_sets[d as usize] = next;
    }
}

/// Reduces `row` by pivot rows whose leading coefficient is one.
fn reduce_row<F: Field>(
    f: &F,
    row: &[(u32, F::Elem)],
    pivot_of: &[Option<u32>],
    pivots: &[Row<F::Elem>],
    dense: &mut Vec<F::Elem>,
    live: &mut Vec<bool>,
) -> Row<F::Elem> {
    let mut heap: BinaryHeap<Reverse<u32>> = BinaryHeap::new();
    for (c, x) in row {
        let c = *c as usize;
        dense[c] = f.add(&dense[c], x);
        if !live[c] {
            live[c] = true;
            heap.push(Reverse(c as u32));
        }
    }
    let mut out = Vec::new();
    let zero = f.zero();
    while let Some(Reverse(c)) = heap.pop() {
        let c = c as usize;
        live[c] = false;
        let x = std::mem::replace(&mut dense[c], zero.clone());
        if f.is_zero(&x) {
            continue;
        }
        match pivot_of[c] {
            Some(r) => {
                for (c2, y) in &pivots[r as usize] {
                    let c2 = *c2 as usize;
                    f.sub_mul_assign(&mut dense[c2], &x, y);
                    if !live[c2] {
                        live[c2] = true;
                        heap.push(Reverse(c2 as u32));
                    }
                }
            }
            None => out.push((c as u32, x)),
        }
    }
    out
}

/// Reduced row-echelon form of sparse rows (columns sorted by importance).
fn rref<F: Field>(f: &F, ncols: usize, rows: Vec<Row<F::Elem>>) -> Vec<Row<F::Elem>> {
    let mut pivot_of: Vec<Option<u32>> = vec![None; ncols];
    let mut tails: Vec<Row<F::Elem>> = Vec::new();
    let mut leads: Vec<u32> = Vec::new();
    let mut dense = vec![f.zero(); ncols];
    let mut live = vec![false; ncols];
    for row in rows {
        let r = reduce_row(f, &row, &pivot_of, &tails, &mut dense, &mut live);
        if r.is_empty() {
            continue;
        }
        let inv = f.inv(&r[0].1);
        let lead = r[0].0;
        let tail: Row<F::Elem> = r[1..].iter().map(|(c, x)| (*c, f.mul(x, &inv))).collect();
        pivot_of[lead as usize] = Some(tails.len() as u32);
        tails.push(tail);
        leads.push(lead);
    }
    // back substitution, starting from the smallest leading monomial
    let mut idx: Vec<usize> = (0..leads.len()).collect();
    idx.sort_by_key(|&i| Reverse(leads[i]));
    let mut done: Vec<Option<u32>> = vec![None; ncols];
    let mut final_tails: Vec<Row<F::Elem>> = vec![Vec::new(); leads.len()];
    for i in idx {
        let t = reduce_row(f, &tails[i], &done, &final_tails, &mut dense, &mut live);
        final_tails[i] = t;
        done[leads[i] as usize] = Some(i as u32);
    }
    let mut out: Vec<Row<F::Elem>> = leads
        .iter()
        .zip(final_tails)
        .map(|(&l, t)| {
            let mut r = vec![(l, f.one())];
            r.extend(t);
            r
        })
        .collect();
    out.sort_by_key(|r| r[0].0);
    out
}

fn with_pool<T: Send>(threads: Option<usize>, job: impl FnOnce() -> T + Send) -> T {
    match threads {
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .expect("thread pool")
            .install(job),
        None => job(),
    }
}

impl<F: Field> GroebnerBasis<F> {
    /// Computes the reduced Gröbner basis of the ideal generated by `input`,
    /// exact through `opts.max_degree`.
    pub fn compute(
        f: &F,
        nvars: usize,
        input: &[Polynomial<F::Elem>],
        opts: &GbOptions,
    ) -> Result<GroebnerBasis<F>, GbError> {
        for (k, p) in input.iter().enumerate() {
            if !p.is_homogeneous() {
                return Err(GbError::NotHomogeneous { index: k });
            }
        }
        with_pool(opts.threads, || Self::compute_inner(f, nvars, input, opts))
    }

    fn compute_inner(
        f: &F,
        nvars: usize,
        input: &[Polynomial<F::Elem>],
        opts: &GbOptions,
    ) -> Result<GroebnerBasis<F>, GbError> {
        let start = Instant::now();
        let dmax = opts.max_degree;
        let mut eng = Engine::<F>::new(nvars, dmax);
        let mut by_degree: BTreeMap<u32, Vec<Polynomial<F::Elem>>> = BTreeMap::new();
        for p in input.iter().filter(|p| !p.is_zero()) {
            let d = p.degree().unwrap();
            if d == 0 {
                let one = Polynomial::constant(f, f.one());
                return Ok(Self::finish(f, nvars, dmax, vec![one], vec![HashSet::new(); dmax as usize + 1], Vec::new()));
            }
            if d <= dmax {
                by_degree.entry(d).or_default().push(p.monic(f));
            }
        }
        for d in 1..=dmax {
            let t0 = Instant::now();
            if let Some(limit) = opts.budget.max_seconds {
                if start.elapsed().as_secs_f64() > limit {
                    return Err(GbError::BudgetExceeded { reached_degree: d - 1, reason: format!("time limit {limit}s") });
                }
            }
            // inputs become temporary basis entries so they share the row machinery
            let first_new = eng.polys.len() as u32;
            let mut rows: Vec<(u32, Monomial)> = Vec::new();
            for p in by_degree.remove(&d).unwrap_or_default() {
                rows.push((eng.polys.len() as u32, Monomial::one()));
                eng.polys.push(p);
            }
            let n_inputs = rows.len();
            let mut pairs = eng.queue.remove(&d).unwrap_or_default();
            pairs.sort_by(|a, b| a.lcm.cmp(&b.lcm).then(a.i.cmp(&b.i)).then(a.j.cmp(&b.j)));
            if opts.order == PairOrder::LcmDescending {
                pairs.reverse();
            }
            let mut seen: HashSet<(u32, Monomial)> = HashSet::new();
            for p in &pairs {
                for g in [p.i, p.j] {
                    let t = eng.lt_of(g).quotient_of(&p.lcm);
                    if seen.insert((g, t)) {
                        rows.push((g, t));
                    }
                }
            }
            let total_rows = rows.len();
            let batch = opts.batch_size.unwrap_or(usize::MAX).max(1);
            let mut new_ids: Vec<u32> = Vec::new();
            let mut columns_seen = 0;
            for chunk in rows.chunks(batch) {
                if chunk.is_empty() {
                    continue;
                }
                let m = eng.preprocess(chunk);
                columns_seen = columns_seen.max(m.columns.len());
                if let Some(limit) = opts.budget.max_columns {
                    if m.columns.len() > limit {
                        return Err(GbError::BudgetExceeded {
                            reached_degree: d - 1,
                            reason: format!("{} columns in degree {d}", m.columns.len()),
                        });
                    }
                }
                let ncols = m.columns.len();
                let remainders: Vec<Row<F::Elem>> = m
                    .rows
                    .par_iter()
                    .map_init(
                        || (vec![f.zero(); ncols], vec![false; ncols]),
                        |(dense, live), row| reduce_row(f, row, &m.pivot_of, &m.reducers, dense, live),
                    )
                    .filter(|r| !r.is_empty())
                    .collect();
                for r in rref(f, ncols, remainders) {
                    let p = Polynomial::from_sorted_terms(
                        r.into_iter().map(|(c, x)| (m.columns[c as usize], x)).collect(),
                    );
                    new_ids.push(eng.add_element(p));
                }
            }
            // drop the temporary input entries; they are never referenced again
            if n_inputs > 0 {
                let keep: Vec<Polynomial<F::Elem>> = new_ids.iter().map(|&i| eng.polys[i as usize].clone()).collect();
                eng.polys.truncate(first_new as usize);
                eng.lt.retain(|_, v| *v < first_new);
                eng.memo.retain(|_, v| v.0 < first_new);
                new_ids.clear();
                for p in keep {
                    new_ids.push(eng.add_element(p));
                }
            }
            // interreduce the new elements of this degree
            if !new_ids.is_empty() && opts.batch_size.is_some() {
                let mut cols: Vec<Monomial> = new_ids
                    .iter()
                    .flat_map(|&i| eng.polys[i as usize].terms().iter().map(|t| t.0))
                    .collect();
                cols.sort_by(|a, b| b.cmp(a));
                cols.dedup();
                let pos: HashMap<Monomial, u32> = cols.iter().enumerate().map(|(k, m)| (*m, k as u32)).collect();
                let rows: Vec<Row<F::Elem>> = new_ids
                    .iter()
                    .map(|&i| eng.polys[i as usize].terms().iter().map(|(m, c)| (pos[m], c.clone())).collect())
                    .collect();
                let reduced = rref(f, cols.len(), rows);
                for r in reduced {
                    let p = Polynomial::from_sorted_terms(r.into_iter().map(|(c, x)| (cols[c as usize], x)).collect());
                    let id = eng.lt[&p.leading_monomial().unwrap()];
                    eng.polys[id as usize] = p;
                }
            }
            let mut sorted_new = new_ids.clone();
            sorted_new.sort_by_key(|&i| eng.lt_of(i));
            for &h in &sorted_new {
                eng.update_pairs(h);
            }
            eng.update_standard(d);
            let nstd = eng.std_sets[d as usize].len();
            eng.stats.push(DegreeStats {
                degree: d,
                rows: total_rows,
                columns: columns_seen,
                new_elements: new_ids.len(),
                standard: nstd,
                seconds: t0.elapsed().as_secs_f64(),
            });
            if let Some(limit) = opts.budget.max_basis {
                if eng.polys.len() > limit {
                    return Err(GbError::BudgetExceeded {
                        reached_degree: d,
                        reason: format!("basis size {} exceeds {limit}", eng.polys.len()),
                    });
                }
            }
            if nstd == 0 && by_degree.is_empty() {
                // every higher monomial lies in the leading-term ideal
                break;
            }
        }
        let Engine { polys, std_sets, stats, .. } = eng;
        Ok(Self::finish(f, nvars, dmax, polys, std_sets, stats))
    }

    fn finish(
        f: &F,
        nvars: usize,
        max_degree: u32,
        mut basis: Vec<Polynomial<F::Elem>>,
        standard_sets: Vec<HashSet<Monomial>>,
        stats: Vec<DegreeStats>,
    ) -> GroebnerBasis<F> {
        basis.sort_by_key(|p| p.leading_monomial());
        let lt_index = basis.iter().enumerate().map(|(k, p)| (p.leading_monomial().unwrap(), k)).collect();
        let standard = standard_sets
            .iter()
            .map(|s| {
                let mut v: Vec<Monomial> = s.iter().copied().collect();
                v.sort_by(|a, b| b.cmp(a));
                v
            })
            .collect();
        GroebnerBasis { field: f.clone(), nvars, max_degree, basis, standard, standard_sets, lt_index, stats }
    }

    pub fn field(&self) -> &F {
        &self.field
    }

    pub fn nvars(&self) -> usize {
        self.nvars
    }

    pub fn max_degree(&self) -> u32 {
        self.max_degree
    }

    /// Basis elements sorted by increasing leading monomial.
    pub fn basis(&self) -> &[Polynomial<F::Elem>] {
        &self.basis
    }

    pub fn len(&self) -> usize {
        self.basis.len()
    }

    pub fn is_empty(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn stats(&self) -> &[DegreeStats] {
        &self.stats
    }

    /// Standard monomials of degree `d` in decreasing order.
    pub fn standard_monomials(&self, d: u32) -> Result<&[Monomial], GbError> {
        if d > self.max_degree {
            return Err(GbError::BeyondTruncation { degree: d, max_degree: self.max_degree });
        }
        Ok(&self.standard[d as usize])
    }

    pub fn is_standard(&self, m: &Monomial) -> bool {
        m.degree() <= self.max_degree && self.standard_sets[m.degree() as usize].contains(m)
    }

    /// Lowest degree with no standard monomials, if within the truncation.
    pub fn vanishing_degree(&self) -> Option<u32> {
        (0..=self.max_degree).find(|&d| self.standard[d as usize].is_empty())
    }

    fn reducer(&self, m: &Monomial) -> Option<(usize, Monomial)> {
        if let Some(&g) = self.lt_index.get(m) {
            return Some((g, Monomial::one()));
        }
        for v in m.support() {
            let u = m.div_var(v).unwrap();
            if !self.is_standard(&u) {
                let (g, t) = self.reducer(&u)?;
                return Some((g, t.mul_var(v)));
            }
        }
        None
    }

    /// Unique remainder of `p`; zero exactly when `p` lies in the ideal.
    pub fn normal_form(&self, p: &Polynomial<F::Elem>) -> Result<Polynomial<F::Elem>, GbError> {
        let f = &self.field;
        let cutoff = self.vanishing_degree();
        let mut out = Polynomial::zero();
        for (d, part) in p.homogeneous_parts() {
            if cutoff.is_some_and(|c| d >= c) {
                continue;
            }
            if d > self.max_degree {
                return Err(GbError::BeyondTruncation { degree: d, max_degree: self.max_degree });
            }
            let mut acc: BTreeMap<Monomial, F::Elem> = part.into_terms().into_iter().collect();
            let mut rem = Vec::new();
            while let Some((m, c)) = acc.pop_last() {
                match self.reducer(&m) {
                    Some((g, t)) => {
                        for (mm, y) in self.basis[g].terms().iter().skip(1) {
                            let key = mm.mul(&t);
                            let slot = acc.entry(key).or_insert_with(|| f.zero());
                            f.sub_mul_assign(slot, &c, y);
                            if f.is_zero(slot) {
                                acc.remove(&key);
                            }
                        }
                    }
                    None => rem.push((m, c)),
                }
            }
            out = out.add(f, &Polynomial::from_sorted_terms(rem));
        }
        Ok(out)
    }

    pub fn contains(&self, p: &Polynomial<F::Elem>) -> Result<bool, GbError> {
        Ok(self.normal_form(p)?.is_zero())
    }

    /// One basis element per line.
    pub fn to_text(&self, names: &[String]) -> String {
        let mut s = String::new();
        for p in &self.basis {
            s.push_str(&p.format(&self.field, names));
            s.push('\n');
        }
        s
    }
}
