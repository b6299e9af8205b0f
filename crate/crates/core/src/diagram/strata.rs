//! Divisor compatibility, clique enumeration and the stratum records.

use std::collections::{BTreeMap, HashMap};
use std::sync::OnceLock;

use serde::Serialize;

use super::complex::level_mask;
use super::divisor::{set_act, set_dual, set_iter, set_names, Divisor, DivisorSet};
use super::model::{diagram_of, Diagram};
use super::perm::Perm;
use super::types::{default_type_table, ShiftMask, SplitType, StratumType, TypeRow};

const SHIFTING: DivisorSet = 0b111;

/// Divisors whose diagram lies above `g` in the closure order.
pub fn divisors_above(g: &Diagram) -> DivisorSet {
    Divisor::all()
        .filter(|d| g.leq(&divisor_diagram(*d)))
        .fold(0, |m, d| m | d.bit())
}

pub fn divisor_diagram(d: Divisor) -> Diagram {
    static T: OnceLock<Vec<Diagram>> = OnceLock::new();
    T.get_or_init(|| Divisor::all().map(|d| diagram_of(d.bit())).collect())[d.index()]
}

/// Two divisors meet when the diagram of the pair is admissible and lies
/// below no other divisor.
pub fn compatible(d1: Divisor, d2: Divisor) -> bool {
    if d1 == d2 {
        return false;
    }
    let pair = d1.bit() | d2.bit();
    let g = diagram_of(pair);
    g.is_admissible() && divisors_above(&g) == pair
}

fn compat_matrix() -> &'static [DivisorSet; Divisor::COUNT] {
    static M: OnceLock<[DivisorSet; Divisor::COUNT]> = OnceLock::new();
    M.get_or_init(|| {
        let mut m = [0; Divisor::COUNT];
        for a in Divisor::all() {
            for b in Divisor::all() {
                if compatible(a, b) {
                    m[a.index()] |= b.bit();
                }
            }
        }
        m
    })
}

/// Divisors compatible with `d`.
pub fn neighbours(d: Divisor) -> DivisorSet {
    compat_matrix()[d.index()]
}

/// All cliques of the compatibility graph, including the empty one,
/// ordered by size then bitmask.
pub fn cliques() -> Vec<DivisorSet> {
    fn extend(clique: DivisorSet, candidates: DivisorSet, out: &mut Vec<DivisorSet>) {
        let mut rest = candidates;
        while rest != 0 {
            let i = rest.trailing_zeros() as usize;
            rest &= rest - 1;
            let d = Divisor::from_index(i);
            let c = clique | d.bit();
            out.push(c);
            extend(c, rest & neighbours(d), out);
        }
    }
    let mut out = vec![0];
    extend(0, (1 << Divisor::COUNT) - 1, &mut out);
    out.sort_by_key(|&c| (c.count_ones(), c));
    out
}

#[derive(Clone, Debug, Serialize)]
pub struct StratumRecord {
    #[serde(serialize_with = "ser_clique")]
    pub clique: DivisorSet,
    pub diagram: Diagram,
    pub type_name: StratumType,
    pub codim: usize,
    pub orbit_id: usize,
}

fn ser_clique<S: serde::Serializer>(c: &DivisorSet, s: S) -> Result<S::Ok, S::Error> {
    set_names(*c).serialize(s)
}

impl StratumRecord {
    pub fn shift(&self) -> ShiftMask {
        self.type_name.shift
    }

    pub fn split_clique(&self) -> DivisorSet {
        self.clique & !SHIFTING
    }
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum StrataError {
    #[error("clique {0:?} gives an inadmissible diagram: {1}")]
    Inadmissible(Vec<String>, String),
    #[error("cliques {0:?} and {1:?} give the same diagram")]
    Duplicate(Vec<String>, Vec<String>),
    #[error("clique {0:?} has no stratum type")]
    Unclassified(Vec<String>),
    #[error("type {ty}: expected {expected} strata of codim {codim}, found {found}")]
    TypeCount { ty: StratumType, codim: usize, expected: usize, found: usize },
    #[error("expected 1424 strata, found {0}")]
    Total(usize),
    #[error("diagram is not the diagram of any clique")]
    NotAStratum,
}

fn shift_of(clique: DivisorSet) -> ShiftMask {
    ShiftMask((clique & SHIFTING) as u8)
}

/// Canonical orbit representative: the least image under S₄.
fn orbit_rep(clique: DivisorSet) -> DivisorSet {
    Perm::all().into_iter().map(|p| set_act(clique, p)).min().unwrap()
}

/// Enumerates every stratum and checks it against the expected-type table.
pub fn enumerate_strata() -> Result<Vec<StratumRecord>, StrataError> {
    enumerate_strata_with(&default_type_table())
}

pub fn enumerate_strata_with(table: &[TypeRow]) -> Result<Vec<StratumRecord>, StrataError> {
    let mut records = Vec::new();
    let mut seen: HashMap<Diagram, DivisorSet> = HashMap::new();
    let mut orbit_ids: HashMap<DivisorSet, usize> = HashMap::new();
    for clique in cliques() {
        let diagram = diagram_of(clique);
        if let Err(v) = diagram.check_admissible() {
            return Err(StrataError::Inadmissible(set_names(clique), v.to_string()));
        }
        if let Some(&other) = seen.get(&diagram) {
            return Err(StrataError::Duplicate(set_names(other), set_names(clique)));
        }
        seen.insert(diagram, clique);
        let split = SplitType::classify(clique)
            .ok_or_else(|| StrataError::Unclassified(set_names(clique)))?;
        let next = orbit_ids.len();
        let orbit_id = *orbit_ids.entry(orbit_rep(clique)).or_insert(next);
        records.push(StratumRecord {
            clique,
            diagram,
            type_name: StratumType { split, shift: shift_of(clique) },
            codim: clique.count_ones() as usize,
            orbit_id,
        });
    }
    let mut counts: BTreeMap<StratumType, usize> = BTreeMap::new();
    for r in &records {
        *counts.entry(r.type_name).or_default() += 1;
    }
    for row in table {
        let found = counts.get(&row.ty).copied().unwrap_or(0);
        let codim_ok = records
            .iter()
            .filter(|r| r.type_name == row.ty)
            .all(|r| r.codim == row.codim);
        if found != row.multiplicity || !codim_ok {
            return Err(StrataError::TypeCount {
                ty: row.ty,
                codim: row.codim,
                expected: row.multiplicity,
                found,
            });
        }
    }
    if records.len() != 1424 {
        return Err(StrataError::Total(records.len()));
    }
    Ok(records)
}

/// Cached stratum list.
pub fn strata() -> &'static [StratumRecord] {
    static S: OnceLock<Vec<StratumRecord>> = OnceLock::new();
    S.get_or_init(|| enumerate_strata().expect("stratification is consistent"))
}

fn index_by_diagram() -> &'static HashMap<Diagram, usize> {
    static M: OnceLock<HashMap<Diagram, usize>> = OnceLock::new();
    M.get_or_init(|| strata().iter().enumerate().map(|(i, r)| (r.diagram, i)).collect())
}

fn index_by_clique() -> &'static HashMap<DivisorSet, usize> {
    static M: OnceLock<HashMap<DivisorSet, usize>> = OnceLock::new();
    M.get_or_init(|| strata().iter().enumerate().map(|(i, r)| (r.clique, i)).collect())
}

pub fn record_of_diagram(d: &Diagram) -> Option<&'static StratumRecord> {
    index_by_diagram().get(d).map(|&i| &strata()[i])
}

pub fn record_of_clique(c: DivisorSet) -> Option<&'static StratumRecord> {
    index_by_clique().get(&c).map(|&i| &strata()[i])
}

/// Splits a stratum diagram into its split part and its shift mask.
pub fn decompose(d: &Diagram) -> Result<(Diagram, ShiftMask), StrataError> {
    let r = record_of_diagram(d).ok_or(StrataError::NotAStratum)?;
    let split = diagram_of(r.split_clique());
    let shift = r.shift();
    let shift_edges = (1..=3).filter(|&k| shift.contains(k)).fold(0, |m, k| m | level_mask(k));
    assert_eq!(split.s | shift_edges, d.s, "reconstruction of S");
    Ok((split, shift))
}

pub fn codim(r: &StratumRecord) -> usize {
    r.codim
}

pub fn poset_leq(g: &Diagram, h: &Diagram) -> bool {
    g.leq(h)
}

pub fn act_record(r: &StratumRecord, p: Perm) -> &'static StratumRecord {
    record_of_clique(set_act(r.clique, p)).expect("strata are S4-stable")
}

pub fn dual_record(r: &StratumRecord) -> &'static StratumRecord {
    record_of_clique(set_dual(r.clique)).expect("strata are duality-stable")
}

/// Outcome of the closure-order checks over all strata.
#[derive(Clone, Debug, Default, Serialize)]
pub struct PosetReport {
    pub strata: usize,
    pub codim_mismatches: Vec<String>,
    pub downset_mismatches: usize,
}

impl PosetReport {
    pub fn ok(&self) -> bool {
        self.codim_mismatches.is_empty() && self.downset_mismatches == 0
    }
}

/// Checks codim = number of divisors above, and that the diagrams below a
/// stratum are exactly those of its supercliques.
pub fn check_poset(records: &[StratumRecord]) -> PosetReport {
    use rayon::prelude::*;
    let mut report = PosetReport { strata: records.len(), ..Default::default() };
    for r in records {
        let above = divisors_above(&r.diagram);
        if above != r.clique || r.codim != above.count_ones() as usize {
            report.codim_mismatches.push(format!(
                "{:?}: above {:?}",
                set_names(r.clique),
                set_names(above)
            ));
        }
    }
    report.downset_mismatches = records
        .par_iter()
        .map(|r| {
            records
                .iter()
                .filter(|s| s.diagram.leq(&r.diagram) != (s.clique & r.clique == r.clique))
                .count()
        })
        .sum();
    report
}

/// Sizes of S₄ orbits, keyed by orbit id.
pub fn orbit_sizes(records: &[StratumRecord]) -> BTreeMap<usize, usize> {
    let mut m = BTreeMap::new();
    for r in records {
        *m.entry(r.orbit_id).or_default() += 1;
    }
    m
}

pub fn clique_names(c: DivisorSet) -> Vec<String> {
    set_names(c)
}

pub fn clique_from_names(names: &[&str]) -> Option<DivisorSet> {
    names
        .iter()
        .map(|n| Divisor::parse(n).map(|d| d.bit()))
        .try_fold(0, |m, b| b.map(|b| m | b))
}

pub fn divisors_in(c: DivisorSet) -> Vec<Divisor> {
    set_iter(c).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(n: &str) -> Divisor {
        Divisor::parse(n).unwrap()
    }

    #[test]
    fn compatibility_examples() {
        assert!(!compatible(d("C1"), d("C2")));
        assert!(compatible(d("C1"), d("D23")));
        assert!(compatible(d("D12"), d("E12")));
        assert!(!compatible(d("D12"), d("E13")));
        assert!(!compatible(d("E12"), d("E34")));
    }

    #[test]
    fn census() {
        let r = strata();
        assert_eq!(r.len(), 1424);
        assert_eq!(r.iter().filter(|x| x.codim == 1).count(), 23);
        let split: Vec<_> = r.iter().filter(|x| x.shift().0 == 0).collect();
        assert_eq!(split.len(), 178);
        assert_eq!(split.iter().filter(|x| x.codim == 3).count(), 78);
        assert_eq!(r.iter().map(|x| x.codim).max(), Some(6));
    }

    #[test]
    fn decompose_examples() {
        let g = diagram_of(clique_from_names(&["A", "C1"]).unwrap());
        let (split, shift) = decompose(&g).unwrap();
        assert_eq!(split, diagram_of(d("C1").bit()));
        assert_eq!(shift.code(), "100");
        assert_eq!(decompose(&Diagram::empty()).unwrap(), (Diagram::empty(), ShiftMask(0)));
        let g = diagram_of(clique_from_names(&["B", "D12", "D34"]).unwrap());
        let (split, shift) = decompose(&g).unwrap();
        assert_eq!(shift.code(), "010");
        assert_eq!(split, diagram_of(clique_from_names(&["D12", "D34"]).unwrap()));
        assert_ne!(split.s & level_mask(2), level_mask(2));
    }

    #[test]
    fn orbits_are_types() {
        let r = strata();
        let mut by_orbit: BTreeMap<usize, StratumType> = BTreeMap::new();
        for x in r {
            let t = *by_orbit.entry(x.orbit_id).or_insert(x.type_name);
            assert_eq!(t, x.type_name);
        }
        assert_eq!(by_orbit.len(), 160);
    }
}
