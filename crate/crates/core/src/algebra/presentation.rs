//! The presentation of the cohomology ring: 37 degree-one generators and
//! four families of relations, plus elimination of the linear relations.

use std::collections::HashSet;
use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use super::field::{Field, Rationals};
use super::monomial::Monomial;
use super::poly::Polynomial;
use crate::diagram::{compatible, Divisor, Perm};

pub type QPoly = Polynomial<BigRational>;

/// A generator. Index tuples are strictly increasing.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord)]
pub enum VarId {
    A,
    B,
    AStar,
    C(u8),
    CStar(u8),
    D(u8, u8),
    E(u8, u8),
    Y1(u8),
    Y2(u8, u8),
    Y3(u8, u8, u8),
}

const PAIRS: [(u8, u8); 6] = [(1, 2), (1, 3), (1, 4), (2, 3), (2, 4), (3, 4)];
const TRIPLES: [(u8, u8, u8); 4] = [(1, 2, 3), (1, 2, 4), (1, 3, 4), (2, 3, 4)];

fn sort2(i: u8, j: u8) -> (u8, u8) {
    assert!(i != j && (1..=4).contains(&i) && (1..=4).contains(&j));
    (i.min(j), i.max(j))
}

fn sort3(i: u8, j: u8, k: u8) -> (u8, u8, u8) {
    let mut v = [i, j, k];
    v.sort();
    assert!(v[0] >= 1 && v[2] <= 4 && v[0] < v[1] && v[1] < v[2]);
    (v[0], v[1], v[2])
}

impl VarId {
    pub fn d(i: u8, j: u8) -> VarId {
        let (a, b) = sort2(i, j);
        VarId::D(a, b)
    }
    pub fn e(i: u8, j: u8) -> VarId {
        let (a, b) = sort2(i, j);
        VarId::E(a, b)
    }
    pub fn y2(i: u8, j: u8) -> VarId {
        let (a, b) = sort2(i, j);
        VarId::Y2(a, b)
    }
    pub fn y3(i: u8, j: u8, k: u8) -> VarId {
        let (a, b, c) = sort3(i, j, k);
        VarId::Y3(a, b, c)
    }

    /// All 37 generators in the fixed variable order: divisor classes
    /// a, b, a*, c_i, c*_i, d_ij, e_ij, then y_i, y_ij, y_ijk.
    pub fn all() -> Vec<VarId> {
        let mut v = vec![VarId::A, VarId::B, VarId::AStar];
        v.extend((1..=4).map(VarId::C));
        v.extend((1..=4).map(VarId::CStar));
        v.extend(PAIRS.iter().map(|&(i, j)| VarId::D(i, j)));
        v.extend(PAIRS.iter().map(|&(i, j)| VarId::E(i, j)));
        v.extend((1..=4).map(VarId::Y1));
        v.extend(PAIRS.iter().map(|&(i, j)| VarId::Y2(i, j)));
        v.extend(TRIPLES.iter().map(|&(i, j, k)| VarId::Y3(i, j, k)));
        v
    }

    pub fn is_y(&self) -> bool {
        matches!(self, VarId::Y1(_) | VarId::Y2(..) | VarId::Y3(..))
    }

    pub fn act(&self, p: Perm) -> VarId {
        let s = |i: u8| p.apply(i);
        match *self {
            VarId::A | VarId::B | VarId::AStar => *self,
            VarId::C(i) => VarId::C(s(i)),
            VarId::CStar(i) => VarId::CStar(s(i)),
            VarId::D(i, j) => VarId::d(s(i), s(j)),
            VarId::E(i, j) => VarId::e(s(i), s(j)),
            VarId::Y1(i) => VarId::Y1(s(i)),
            VarId::Y2(i, j) => VarId::y2(s(i), s(j)),
            VarId::Y3(i, j, k) => VarId::y3(s(i), s(j), s(k)),
        }
    }

    pub fn parse(s: &str) -> Option<VarId> {
        VarId::all().into_iter().find(|v| v.to_string() == s)
    }

    /// The generator dual to a divisor.
    pub fn from_divisor(d: Divisor) -> VarId {
        let name = d.to_string().to_lowercase();
        let name = match name.split_once('*') {
            Some((head, tail)) => format!("{head}star{tail}"),
            None => name,
        };
        VarId::parse(&name).expect("every divisor has a generator")
    }
}

impl fmt::Display for VarId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            VarId::A => write!(f, "a"),
            VarId::B => write!(f, "b"),
            VarId::AStar => write!(f, "astar"),
            VarId::C(i) => write!(f, "c{i}"),
            VarId::CStar(i) => write!(f, "cstar{i}"),
            VarId::D(i, j) => write!(f, "d{i}{j}"),
            VarId::E(i, j) => write!(f, "e{i}{j}"),
            VarId::Y1(i) => write!(f, "y{i}"),
            VarId::Y2(i, j) => write!(f, "y{i}{j}"),
            VarId::Y3(i, j, k) => write!(f, "y{i}{j}{k}"),
        }
    }
}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, PartialOrd, Ord, serde::Serialize)]
pub enum Family {
    I,
    II,
    III,
    IV,
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Family::I => "i",
            Family::II => "ii",
            Family::III => "iii",
            Family::IV => "iv",
        })
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct Relation {
    pub family: Family,
    pub poly: QPoly,
    /// Added from divisor disjointness rather than the base list.
    pub supplementary: bool,
}

/// Generators and integer-coefficient relations.
#[derive(Clone, Debug, PartialEq)]
pub struct Presentation {
    vars: Vec<VarId>,
    relations: Vec<Relation>,
}

#[derive(Debug, Clone, PartialEq, thiserror::Error)]
pub enum AlgebraError {
    #[error("linear relations have rank {rank} over {field}, expected {expected}")]
    Rank { field: String, rank: usize, expected: usize },
    #[error("the eliminated variables do not form a pivot set: {0}")]
    BadSurvivors(String),
    #[error("substitution for {0} has non-integer coefficients")]
    NonIntegral(VarId),
    #[error("unknown variable {0}")]
    UnknownVariable(String),
    #[error("relation does not have integer coefficients: {0}")]
    NotIntegral(String),
}

/// Normalizes the sign so the leading coefficient is positive.
fn normalize_sign(p: QPoly) -> QPoly {
    match p.leading() {
        Some((_, c)) if c.is_negative() => p.neg(&Rationals),
        _ => p,
    }
}

impl Presentation {
    pub fn new(vars: Vec<VarId>, relations: Vec<Relation>) -> Presentation {
        Presentation { vars, relations }
    }

    pub fn vars(&self) -> &[VarId] {
        &self.vars
    }

    pub fn relations(&self) -> &[Relation] {
        &self.relations
    }

    pub fn nvars(&self) -> usize {
        self.vars.len()
    }

    pub fn names(&self) -> Vec<String> {
        self.vars.iter().map(|v| v.to_string()).collect()
    }

    pub fn var_index(&self, v: VarId) -> Option<usize> {
        self.vars.iter().position(|&w| w == v)
    }

    pub fn var(&self, v: VarId) -> QPoly {
        let i = self.var_index(v).expect("variable not in presentation");
        Polynomial::monomial(&Rationals, Monomial::var(i))
    }

    pub fn family_count(&self, fam: Family) -> usize {
        self.relations.iter().filter(|r| r.family == fam).count()
    }

    pub fn family(&self, fam: Family) -> impl Iterator<Item = &QPoly> {
        self.relations.iter().filter(move |r| r.family == fam).map(|r| &r.poly)
    }

    /// Relations with coefficients mapped into `f`.
    pub fn relations_in<F: Field>(&self, f: &F) -> Vec<Polynomial<F::Elem>> {
        self.relations.iter().map(|r| to_field(f, &r.poly)).filter(|p| !p.is_zero()).collect()
    }

    /// Applies a permutation of {1,2,3,4} to a polynomial in these variables.
    /// Returns `None` if an image variable is missing from the presentation.
    pub fn act(&self, p: &QPoly, perm: Perm) -> Option<QPoly> {
        let map: Option<Vec<usize>> = self.vars.iter().map(|v| self.var_index(v.act(perm))).collect();
        let map = map?;
        Some(Polynomial::from_terms(
            &Rationals,
            p.terms().iter().map(|(m, c)| {
                let mut out = Monomial::one();
                for v in m.support() {
                    out = out.with_exp(map[v], m.exp(v));
                }
                (out, c.clone())
            }),
        ))
    }

    /// Plain-text export, one relation per line as `family: polynomial`.
    pub fn to_text(&self) -> String {
        let names = self.names();
        let mut s = format!("# variables: {}\n", names.join(" "));
        for r in &self.relations {
            let tag = if r.supplementary { "+" } else { "" };
            s.push_str(&format!("{}{tag}: {}\n", r.family, r.poly.format(&Rationals, &names)));
        }
        s
    }

    /// Parses the format written by [`Presentation::to_text`].
    pub fn from_text(text: &str) -> Result<Presentation, AlgebraError> {
        let mut vars = Vec::new();
        let mut relations = Vec::new();
        for line in text.lines().map(str::trim).filter(|l| !l.is_empty()) {
            if let Some(rest) = line.strip_prefix("# variables:") {
                vars = rest
                    .split_whitespace()
                    .map(|n| VarId::parse(n).ok_or_else(|| AlgebraError::UnknownVariable(n.into())))
                    .collect::<Result<_, _>>()?;
                continue;
            }
            if line.starts_with('#') {
                continue;
            }
            let (fam, body) = line.split_once(':').ok_or_else(|| AlgebraError::NotIntegral(line.into()))?;
            let fam = fam.trim();
            let (fam, supplementary) = match fam.strip_suffix('+') {
                Some(f) => (f, true),
                None => (fam, false),
            };
            let family = match fam {
                "i" => Family::I,
                "ii" => Family::II,
                "iii" => Family::III,
                "iv" => Family::IV,
                other => return Err(AlgebraError::NotIntegral(other.into())),
            };
            relations.push(Relation { family, poly: parse_poly(body, &vars)?, supplementary });
        }
        Ok(Presentation { vars, relations })
    }
}

fn parse_poly(s: &str, vars: &[VarId]) -> Result<QPoly, AlgebraError> {
    let q = Rationals;
    let s = s.replace(" - ", " + -").replace("- ", "-");
    let mut terms = Vec::new();
    for tok in s.split(" + ").map(str::trim).filter(|t| !t.is_empty() && *t != "0") {
        let (neg, tok) = match tok.strip_prefix('-') {
            Some(t) => (true, t),
            None => (false, tok),
        };
        let mut coeff = BigInt::one();
        let mut mono = Monomial::one();
        for factor in tok.split('*') {
            if let Ok(n) = factor.parse::<BigInt>() {
                coeff *= n;
                continue;
            }
            let (name, e) = match factor.split_once('^') {
                Some((n, e)) => (n, e.parse::<u32>().map_err(|_| AlgebraError::NotIntegral(tok.into()))?),
                None => (factor, 1),
            };
            let i = vars
                .iter()
                .position(|v| v.to_string() == name)
                .ok_or_else(|| AlgebraError::UnknownVariable(name.into()))?;
            mono = mono.with_exp(i, mono.exp(i) + e);
        }
        if neg {
            coeff = -coeff;
        }
        terms.push((mono, BigRational::from_integer(coeff)));
    }
    Ok(Polynomial::from_terms(&q, terms))
}

/// Maps an integer or rational polynomial into another field.
pub fn to_field<F: Field>(f: &F, p: &QPoly) -> Polynomial<F::Elem> {
    Polynomial::from_terms(f, p.terms().iter().map(|(m, c)| (*m, f.from_rational(c))))
}

/// Builder for polynomials in the 37 generators.
struct Ring {
    vars: Vec<VarId>,
}

impl Ring {
    fn lin(&self, terms: &[(i64, VarId)]) -> QPoly {
        Polynomial::from_terms(
            &Rationals,
            terms.iter().map(|&(c, v)| {
                let i = self.vars.iter().position(|&w| w == v).unwrap();
                (Monomial::var(i), Rationals.from_i64(c))
            }),
        )
    }

    fn v(&self, v: VarId) -> QPoly {
        self.lin(&[(1, v)])
    }

    fn prod(&self, a: VarId, b: VarId) -> QPoly {
        self.v(a).mul(&Rationals, &self.v(b))
    }

    /// `x (p - q)` for variables x, p, q.
    fn times_diff(&self, x: VarId, p: VarId, q: VarId) -> QPoly {
        self.v(x).mul(&Rationals, &self.lin(&[(1, p), (-1, q)]))
    }
}

fn push_family(out: &mut Vec<Relation>, family: Family, polys: impl IntoIterator<Item = QPoly>) {
    let mut seen: HashSet<QPoly> = out.iter().map(|r| r.poly.clone()).collect();
    for p in polys {
        let p = normalize_sign(p);
        if !p.is_zero() && seen.insert(p.clone()) {
            out.push(Relation { family, poly: p, supplementary: false });
        }
    }
}

/// Instantiates every relation pattern over all assignments of distinct
/// indices i, j, k, l, deduplicated up to sign.
pub fn build_presentation() -> Presentation {
    use VarId::*;
    let r = Ring { vars: VarId::all() };
    let perms = Perm::all();
    let idx = |p: &Perm| (p.apply(1), p.apply(2), p.apply(3), p.apply(4));
    let mut rels = Vec::new();

    let fam_i = perms.iter().flat_map(|p| {
        let (i, j, k, l) = idx(p);
        [
            r.lin(&[(1, VarId::y2(i, j)), (-1, Y1(i)), (-1, Y1(j)), (1, A), (1, C(k)), (1, C(l)), (1, VarId::d(i, j)), (1, VarId::e(i, j))]),
            r.lin(&[
                (1, VarId::y3(i, j, k)),
                (-1, VarId::y2(i, j)),
                (-1, VarId::y2(i, k)),
                (1, Y1(i)),
                (1, B),
                (1, C(i)),
                (1, CStar(l)),
                (1, VarId::d(j, k)),
                (1, VarId::e(j, k)),
                (1, VarId::e(i, l)),
                (1, VarId::e(j, l)),
                (1, VarId::e(k, l)),
            ]),
            r.lin(&[
                (1, VarId::y2(i, j)),
                (-1, VarId::y3(i, j, k)),
                (-1, VarId::y3(i, j, l)),
                (1, AStar),
                (1, CStar(i)),
                (1, CStar(j)),
                (1, VarId::d(k, l)),
                (1, VarId::e(i, j)),
            ]),
        ]
    });
    // group by pattern so each pattern's orbit is contiguous
    let mut fam_i: Vec<(usize, QPoly)> = fam_i.enumerate().map(|(n, p)| (n % 3, p)).collect();
    fam_i.sort_by_key(|(pat, _)| *pat);
    push_family(&mut rels, Family::I, fam_i.into_iter().map(|(_, p)| p));

    type Pattern<'a> = Box<dyn Fn(u8, u8, u8, u8) -> QPoly + 'a>;
    let fam_ii: Vec<Pattern> = vec![
        Box::new(|i, j, _, _| r.prod(C(i), C(j))),
        Box::new(|i, j, _, _| r.prod(CStar(i), CStar(j))),
        Box::new(|i, j, _, _| r.prod(C(i), VarId::d(i, j))),
        Box::new(|i, j, _, _| r.prod(CStar(i), VarId::d(i, j))),
        Box::new(|i, j, _, _| r.prod(C(i), VarId::e(i, j))),
        Box::new(|i, j, k, _| r.prod(CStar(i), VarId::e(j, k))),
        Box::new(|i, j, k, _| r.prod(VarId::d(i, j), VarId::e(i, k))),
        Box::new(|i, j, k, _| r.prod(VarId::e(i, j), VarId::e(i, k))),
        Box::new(|i, j, k, l| r.prod(VarId::e(i, j), VarId::e(k, l))),
    ];
    for pat in &fam_ii {
        push_family(&mut rels, Family::II, perms.iter().map(|p| {
            let (i, j, k, l) = idx(p);
            pat(i, j, k, l)
        }));
    }

    let fam_iii: Vec<Pattern> = vec![
        Box::new(|i, j, _, _| r.times_diff(A, Y1(i), Y1(j))),
        Box::new(|i, j, k, _| r.times_diff(B, VarId::y2(i, j), VarId::y2(i, k))),
        Box::new(|i, j, k, l| r.times_diff(AStar, VarId::y3(i, j, k), VarId::y3(i, j, l))),
        Box::new(|i, j, k, _| r.times_diff(C(i), Y1(j), Y1(k))),
        Box::new(|i, j, k, _| r.times_diff(C(i), VarId::y2(i, j), VarId::y2(i, k))),
        Box::new(|i, j, k, l| r.times_diff(CStar(i), VarId::y2(j, k), VarId::y2(j, l))),
        Box::new(|i, j, k, l| r.times_diff(CStar(i), VarId::y3(i, j, k), VarId::y3(i, j, l))),
        Box::new(|i, j, _, _| r.times_diff(VarId::d(i, j), Y1(i), Y1(j))),
        Box::new(|i, j, k, _| r.times_diff(VarId::d(i, j), VarId::y2(i, k), VarId::y2(j, k))),
        Box::new(|i, j, k, l| r.times_diff(VarId::d(i, j), VarId::y3(i, k, l), VarId::y3(j, k, l))),
        Box::new(|i, j, _, _| r.times_diff(VarId::e(i, j), Y1(i), Y1(j))),
        Box::new(|i, j, k, l| r.times_diff(VarId::e(i, j), VarId::y2(k, l), VarId::y2(i, k))),
        Box::new(|i, j, k, l| r.times_diff(VarId::e(i, j), VarId::y3(i, j, k), VarId::y3(i, j, l))),
    ];
    for pat in &fam_iii {
        push_family(&mut rels, Family::III, perms.iter().map(|p| {
            let (i, j, k, l) = idx(p);
            pat(i, j, k, l)
        }));
    }

    let fam_iv: Vec<Pattern> = vec![
        Box::new(|i, j, k, _| chain_relations(&r, i, j, k)[0].clone()),
        Box::new(|i, j, k, _| chain_relations(&r, i, j, k)[1].clone()),
        Box::new(|i, j, k, _| chain_relations(&r, i, j, k)[2].clone()),
    ];
    for pat in &fam_iv {
        push_family(&mut rels, Family::IV, perms.iter().map(|p| {
            let (i, j, k, l) = idx(p);
            pat(i, j, k, l)
        }));
    }
    drop((fam_ii, fam_iii, fam_iv));
    Presentation { vars: r.vars, relations: rels }
}

/// Products of generators whose divisors are disjoint, in the 37 generators.
pub fn disjointness_relations() -> Vec<QPoly> {
    let r = Ring { vars: VarId::all() };
    let ds: Vec<Divisor> = Divisor::all().collect();
    let mut out = Vec::new();
    for (k, &a) in ds.iter().enumerate() {
        for &b in &ds[k + 1..] {
            if !compatible(a, b) {
                out.push(normalize_sign(r.prod(VarId::from_divisor(a), VarId::from_divisor(b))));
            }
        }
    }
    out
}

/// The base relations together with every disjointness product that
/// family (ii) does not already list.
pub fn build_completed_presentation() -> Presentation {
    let mut p = build_presentation();
    let known: HashSet<QPoly> = p.relations.iter().map(|r| r.poly.clone()).collect();
    let extra: Vec<QPoly> = disjointness_relations().into_iter().filter(|q| !known.contains(q)).collect();
    let at = p.relations.iter().rposition(|r| r.family == Family::II).map_or(0, |i| i + 1);
    let rows = extra.into_iter().map(|poly| Relation { family: Family::II, poly, supplementary: true });
    p.relations.splice(at..at, rows);
    p
}

/// The three relations attached to the flag i ⊂ ij ⊂ ijk.
fn chain_relations(r: &Ring, i: u8, j: u8, k: u8) -> [QPoly; 3] {
    let q = Rationals;
    let (yi, yij, yijk) = (r.v(VarId::Y1(i)), r.v(VarId::y2(i, j)), r.v(VarId::y3(i, j, k)));
    let sq = |p: &QPoly| p.mul(&q, p);
    let first = sq(&yi)
        .add(&q, &sq(&yij))
        .add(&q, &sq(&yijk))
        .sub(&q, &yi.mul(&q, &yij))
        .sub(&q, &yij.mul(&q, &yijk));
    let two = q.from_i64(2);
    let second = yij
        .pow(&q, 3)
        .sub(&q, &yi.mul(&q, &sq(&yij)).scale(&q, &two))
        .add(&q, &sq(&yi).mul(&q, &yij).scale(&q, &two));
    [first, second, yi.pow(&q, 4)]
}

/// Family (iv) for the single chain 1 ⊂ 12 ⊂ 123, in the 37 generators.
pub fn single_chain_relations() -> Vec<QPoly> {
    let r = Ring { vars: VarId::all() };
    chain_relations(&r, 1, 2, 3).into_iter().map(normalize_sign).collect()
}

/// The y-variables eliminated by the linear relations.
pub fn eliminated_vars() -> Vec<VarId> {
    use VarId::*;
    vec![
        Y1(2),
        Y1(3),
        Y1(4),
        Y2(1, 3),
        Y2(1, 4),
        Y2(2, 3),
        Y2(2, 4),
        Y2(3, 4),
        Y3(1, 2, 4),
        Y3(1, 3, 4),
        Y3(2, 3, 4),
    ]
}

/// Result of eliminating the linear relations.
#[derive(Clone, Debug)]
pub struct Elimination {
    /// Presentation in the surviving generators, without family (i).
    pub reduced: Presentation,
    /// Each eliminated variable with its integer expression in the survivors.
    pub substitution: Vec<(VarId, QPoly)>,
    pub rank_q: usize,
    pub rank_f2: usize,
    /// Image of each original variable in the reduced ring.
    images: Vec<QPoly>,
    original_vars: Vec<VarId>,
}

impl Elimination {
    /// Rewrites a polynomial in the original generators in terms of the survivors.
    pub fn reduce(&self, p: &QPoly) -> QPoly {
        p.substitute(&Rationals, &self.images)
    }

    /// Images of all original variables, in their order.
    pub fn images(&self) -> &[QPoly] {
        &self.images
    }

    pub fn image_of(&self, v: VarId) -> &QPoly {
        &self.images[self.original_vars.iter().position(|&w| w == v).unwrap()]
    }
}

fn rank_mod2(rows: &[Vec<BigRational>], cols: &[usize]) -> usize {
    let two = BigInt::from(2);
    let mut m: Vec<Vec<u8>> = rows
        .iter()
        .map(|r| cols.iter().map(|&c| if (r[c].numer() % &two).is_zero() { 0 } else { 1 }).collect())
        .collect();
    let mut rank = 0;
    for c in 0..cols.len() {
        let Some(p) = (rank..m.len()).find(|&i| m[i][c] == 1) else { continue };
        m.swap(rank, p);
        for i in 0..m.len() {
            if i != rank && m[i][c] == 1 {
                let pr = m[rank].clone();
                for (x, y) in m[i].iter_mut().zip(pr) {
                    *x ^= y;
                }
            }
        }
        rank += 1;
    }
    rank
}

/// Solves the family (i) relations for the eliminated y-variables and
/// substitutes them into the remaining relations.
pub fn eliminate_linear(p: &Presentation) -> Result<Elimination, AlgebraError> {
    let elim = eliminated_vars();
    let n = p.nvars();
    let elim_idx: Vec<usize> = elim
        .iter()
        .map(|&v| p.var_index(v).ok_or_else(|| AlgebraError::UnknownVariable(v.to_string())))
        .collect::<Result<_, _>>()?;
    let surv_idx: Vec<usize> = (0..n).filter(|i| !elim_idx.contains(i)).collect();
    let col_order: Vec<usize> = elim_idx.iter().chain(&surv_idx).copied().collect();

    let mut rows: Vec<Vec<BigRational>> = p
        .family(Family::I)
        .map(|poly| {
            let mut row = vec![BigRational::zero(); n];
            for (m, c) in poly.terms() {
                assert_eq!(m.degree(), 1, "family (i) must be linear");
                row[m.support().next().unwrap()] = c.clone();
            }
            row
        })
        .collect();
    let all_cols: Vec<usize> = (0..n).collect();
    let rank_f2 = rank_mod2(&rows, &all_cols);
    let rank_f2_elim = rank_mod2(&rows, &elim_idx);

    // RREF over Q with eliminated columns first
    let mut pivots = Vec::new();
    let mut r = 0;
    for &c in &col_order {
        let Some(pr) = (r..rows.len()).find(|&i| !rows[i][c].is_zero()) else { continue };
        rows.swap(r, pr);
        let inv = rows[r][c].recip();
        for x in rows[r].iter_mut() {
            *x = &*x * &inv;
        }
        for i in 0..rows.len() {
            if i != r && !rows[i][c].is_zero() {
                let f = rows[i][c].clone();
                let pivot_row = rows[r].clone();
                for (x, y) in rows[i].iter_mut().zip(&pivot_row) {
                    *x = &*x - &f * y;
                }
            }
        }
        pivots.push(c);
        r += 1;
    }
    let rank_q = pivots.len();
    let expected = elim.len();
    if rank_q != expected {
        return Err(AlgebraError::Rank { field: "Q".into(), rank: rank_q, expected });
    }
    if rank_f2 != expected || rank_f2_elim != expected {
        return Err(AlgebraError::Rank { field: "F2".into(), rank: rank_f2.min(rank_f2_elim), expected });
    }
    if pivots != elim_idx {
        return Err(AlgebraError::BadSurvivors(format!("pivots {pivots:?}")));
    }

    let q = Rationals;
    let new_vars: Vec<VarId> = surv_idx.iter().map(|&i| p.vars[i]).collect();
    let mut images: Vec<QPoly> = vec![Polynomial::zero(); n];
    for (k, &i) in surv_idx.iter().enumerate() {
        images[i] = Polynomial::monomial(&q, Monomial::var(k));
    }
    let mut substitution = Vec::new();
    for (row, &c) in rows.iter().zip(&pivots) {
        let expr = Polynomial::from_terms(
            &q,
            surv_idx
                .iter()
                .enumerate()
                .filter(|(_, &i)| !row[i].is_zero())
                .map(|(k, &i)| (Monomial::var(k), -row[i].clone())),
        );
        if expr.terms().iter().any(|(_, c)| !c.is_integer()) {
            return Err(AlgebraError::NonIntegral(p.vars[c]));
        }
        images[c] = expr.clone();
        substitution.push((p.vars[c], expr));
    }
    let mut relations = Vec::new();
    for rel in &p.relations {
        let reduced = rel.poly.substitute(&q, &images);
        if rel.family == Family::I {
            assert!(reduced.is_zero(), "linear relation not solved by substitution");
            continue;
        }
        let before = relations.len();
        push_family(&mut relations, rel.family, [reduced]);
        if relations.len() > before {
            relations.last_mut().unwrap().supplementary = rel.supplementary;
        }
    }
    Ok(Elimination {
        reduced: Presentation { vars: new_vars, relations },
        substitution,
        rank_q,
        rank_f2,
        images,
        original_vars: p.vars.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn family_sizes() {
        let p = build_presentation();
        assert_eq!(p.nvars(), 37);
        assert_eq!(p.family_count(Family::I), 24);
        assert_eq!(p.family_count(Family::II), 99);
        assert_eq!(p.family_count(Family::IV), 40);
        for rel in p.relations() {
            assert!(rel.poly.is_homogeneous());
            let d = rel.poly.degree().unwrap();
            match rel.family {
                Family::I => assert_eq!(d, 1),
                Family::II | Family::III => assert_eq!(d, 2),
                Family::IV => assert!((2..=4).contains(&d)),
            }
        }
    }

    #[test]
    fn contains_e12e34() {
        let p = build_presentation();
        let target = p.var(VarId::E(1, 2)).mul(&Rationals, &p.var(VarId::E(3, 4)));
        assert!(p.family(Family::II).any(|r| *r == target));
    }

    #[test]
    fn relation_set_is_s4_stable() {
        let p = build_presentation();
        let set: HashSet<QPoly> = p.relations().iter().map(|r| r.poly.clone()).collect();
        for perm in Perm::all() {
            for r in p.relations() {
                let img = normalize_sign(p.act(&r.poly, perm).unwrap());
                assert!(set.contains(&img), "{}", r.poly.format(&Rationals, &p.names()));
            }
        }
    }

    #[test]
    fn elimination() {
        let p = build_presentation();
        let e = eliminate_linear(&p).unwrap();
        assert_eq!(e.rank_q, 11);
        assert_eq!(e.rank_f2, 11);
        assert_eq!(e.reduced.nvars(), 26);
        assert_eq!(e.substitution.len(), 11);
        for (_, expr) in &e.substitution {
            assert!(expr.terms().iter().all(|(_, c)| c.is_integer()));
        }
        // every linear relation vanishes after substitution
        for r in p.family(Family::I) {
            assert!(e.reduce(r).is_zero());
        }
    }

    #[test]
    fn disjointness_extends_family_ii() {
        let p = build_presentation();
        let base: HashSet<QPoly> = p.family(Family::II).cloned().collect();
        let disjoint: HashSet<QPoly> = disjointness_relations().into_iter().collect();
        assert_eq!(disjoint.len(), 111);
        assert!(base.is_subset(&disjoint));
        let names = p.names();
        let mut extra: Vec<String> =
            disjoint.difference(&base).map(|q| q.format(&Rationals, &names)).collect();
        extra.sort();
        assert_eq!(extra.len(), 12);
        assert!(extra.iter().all(|t| {
            let (x, y) = t.split_once('*').unwrap();
            x.starts_with('d') && y.starts_with('d') && x[1..].chars().filter(|c| y[1..].contains(*c)).count() == 1
        }));
        let c = build_completed_presentation();
        assert_eq!(c.family_count(Family::II), 111);
        assert_eq!(c.relations().iter().filter(|r| r.supplementary).count(), 12);
    }

    #[test]
    fn divisor_generators() {
        assert_eq!(VarId::from_divisor(Divisor::parse("C*3").unwrap()), VarId::CStar(3));
        assert_eq!(VarId::from_divisor(Divisor::parse("A*").unwrap()), VarId::AStar);
        assert_eq!(VarId::from_divisor(Divisor::parse("D24").unwrap()), VarId::D(2, 4));
    }

    #[test]
    fn text_round_trip() {
        let p = build_completed_presentation();
        let text = p.to_text();
        assert!(text.contains("astar"));
        assert!(text.contains("cstar1"));
        assert_eq!(Presentation::from_text(&text).unwrap(), p);
    }
}
