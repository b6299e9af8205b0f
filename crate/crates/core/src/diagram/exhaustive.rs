//! Backtracking enumeration of every diagram satisfying the admissibility rules.

use std::collections::BTreeSet;

use serde::Serialize;

use super::complex::{related_pairs, Component, Edge, Face, SharpEdge};
use super::model::Diagram;
use super::strata::strata;

struct Slot {
    component: Component,
    /// Edge bitmask the component ranges over.
    edges: u32,
    candidates: Vec<u32>,
}

struct PairCheck {
    x_slot: usize,
    y_slot: usize,
    x_tri: u32,
    y_tri: u32,
    /// `(edge of x, matched edge of y)` as bit pairs.
    phi: [(u32, u32); 3],
}

fn subsets(mask: u32) -> impl Iterator<Item = u32> {
    let mut sub = mask;
    let mut done = false;
    std::iter::from_fn(move || {
        if done {
            return None;
        }
        let out = sub;
        if sub == 0 {
            done = true;
        } else {
            sub = (sub - 1) & mask;
        }
        Some(out)
    })
}

/// Local mark patterns allowed on a component: no triangle with 2 marks,
/// and not fully marked if projective.
pub fn local_patterns(c: Component) -> Vec<u32> {
    let edges = c.edges().iter().fold(0u32, |m, e| m | e.bit());
    let triangles: Vec<u32> = Face::all()
        .filter(|f| f.is_triangle() && f.edge_mask() & edges == f.edge_mask())
        .map(|f| f.edge_mask())
        .collect();
    let mut out: Vec<u32> = subsets(edges)
        .filter(|&p| triangles.iter().all(|&t| (p & t).count_ones() != 2))
        .filter(|&p| matches!(c, Component::Affine(_)) || p != edges)
        .collect();
    out.sort();
    out
}

fn slots() -> Vec<Slot> {
    let order: Vec<Component> = (1..=3u8)
        .flat_map(|k| [Component::Affine(k), Component::Projective(Face::hypersimplex(k as usize))])
        .chain(Face::all().filter(|f| f.is_triangle()).map(Component::Projective))
        .collect();
    order
        .into_iter()
        .map(|component| Slot {
            component,
            edges: component.edges().iter().fold(0, |m, e| m | e.bit()),
            candidates: local_patterns(component),
        })
        .collect()
}

fn pair_checks(slots: &[Slot]) -> Vec<PairCheck> {
    let slot_of = |c: Component| slots.iter().position(|s| s.component == c).unwrap();
    related_pairs()
        .iter()
        .map(|p| {
            let xe = p.x.triangle.edges();
            PairCheck {
                x_slot: slot_of(p.x.component),
                y_slot: slot_of(p.y.component),
                x_tri: p.x.triangle.edge_mask(),
                y_tri: p.y.triangle.edge_mask(),
                phi: std::array::from_fn(|k| (xe[k].bit(), p.phi[k].bit())),
            }
        })
        .collect()
}

fn pair_ok(pc: &PairCheck, assign: &[u32]) -> bool {
    let mx = assign[pc.x_slot] & pc.x_tri;
    let my = assign[pc.y_slot] & pc.y_tri;
    match (mx.count_ones(), my.count_ones()) {
        (0, 0) | (3, _) | (_, 3) => true,
        (1, 1) => pc.phi.iter().any(|&(a, b)| a == mx && b == my),
        _ => false,
    }
}

fn to_diagram(slots: &[Slot], assign: &[u32]) -> Diagram {
    let mut d = Diagram::empty();
    for (slot, &m) in slots.iter().zip(assign) {
        match slot.component {
            Component::Affine(_) => d.s |= m,
            Component::Projective(f) => {
                for e in Edge::all().filter(|e| m & e.bit() != 0) {
                    d.sharp |= SharpEdge::new(e, f).unwrap().bit();
                }
            }
        }
    }
    d
}

/// All diagrams satisfying Rule-i and Rule-ii.
pub fn exhaustive_rule_enumeration() -> BTreeSet<Diagram> {
    let slots = slots();
    let checks = pair_checks(&slots);
    // checks_at[k]: pairs whose later slot is k
    let mut checks_at: Vec<Vec<usize>> = vec![Vec::new(); slots.len()];
    for (i, c) in checks.iter().enumerate() {
        checks_at[c.x_slot.max(c.y_slot)].push(i);
    }
    let mut out = BTreeSet::new();
    let mut assign = vec![0u32; slots.len()];
    fn rec(
        k: usize,
        slots: &[Slot],
        checks: &[PairCheck],
        checks_at: &[Vec<usize>],
        assign: &mut Vec<u32>,
        out: &mut BTreeSet<Diagram>,
    ) {
        if k == slots.len() {
            out.insert(to_diagram(slots, assign));
            return;
        }
        for &cand in &slots[k].candidates {
            assign[k] = cand;
            if checks_at[k].iter().all(|&i| pair_ok(&checks[i], assign)) {
                rec(k + 1, slots, checks, checks_at, assign, out);
            }
        }
        assign[k] = 0;
    }
    rec(0, &slots, &checks, &checks_at, &mut assign, &mut out);
    debug_assert!(slots.iter().zip(&assign).all(|(s, &m)| m & !s.edges == 0));
    out
}

/// Whether each face that is not fully collapsed carries sharp marks exactly
/// on its collapsed edges.
pub fn respects_closure(d: &Diagram) -> bool {
    Face::all().all(|f| {
        let m = f.edge_mask();
        if d.s & m == m {
            return true;
        }
        f.edges().iter().all(|&e| {
            let marked = d.is_marked(Component::Projective(f), e);
            marked == (d.s & e.bit() != 0)
        })
    })
}

/// Comparison of the rule-generated set with the clique-generated set.
#[derive(Clone, Debug, Serialize)]
pub struct RuleComparison {
    pub rule_count: usize,
    pub clique_count: usize,
    pub missing: Vec<String>,
    pub extra: usize,
    pub extra_violating_closure: usize,
    pub extra_respecting_closure: usize,
    pub sample_extra: Vec<String>,
}

impl RuleComparison {
    pub fn equal(&self) -> bool {
        self.missing.is_empty() && self.extra == 0
    }
}

pub fn compare_with_strata(rule_set: &BTreeSet<Diagram>) -> RuleComparison {
    let clique_set: BTreeSet<Diagram> = strata().iter().map(|r| r.diagram).collect();
    let missing: Vec<String> = clique_set.difference(rule_set).map(|d| d.to_string()).collect();
    let extra: Vec<&Diagram> = rule_set.difference(&clique_set).collect();
    let violating = extra.iter().filter(|d| !respects_closure(d)).count();
    RuleComparison {
        rule_count: rule_set.len(),
        clique_count: clique_set.len(),
        missing,
        extra: extra.len(),
        extra_violating_closure: violating,
        extra_respecting_closure: extra.len() - violating,
        sample_extra: extra.iter().take(5).map(|d| d.to_string()).collect(),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn local_pattern_counts() {
        assert_eq!(local_patterns(Component::Affine(1)).len(), 15);
        assert_eq!(local_patterns(Component::Affine(3)).len(), 15);
        assert_eq!(local_patterns(Component::Projective(Face::hypersimplex(1))).len(), 14);
        for f in Face::all().filter(|f| f.is_triangle()) {
            assert_eq!(local_patterns(Component::Projective(f)).len(), 4);
        }
    }

    #[test]
    fn subsets_count() {
        assert_eq!(subsets(0b1011).count(), 8);
        assert_eq!(subsets(0).count(), 1);
    }
}
