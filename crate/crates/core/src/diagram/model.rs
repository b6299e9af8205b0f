//! Diagrams, the admissibility rules and the rate rule for sharp marks.

use std::fmt;

use serde::{Deserialize, Serialize};

use super::complex::{
    face_sharp_mask, related_pairs, Component, Edge, Face, SharpEdge, TriangleCopy,
};
use super::divisor::{set_iter, DivisorSet};
use super::perm::{dual, Perm};

/// A pair (S, S#): marked edges and marked sharp edges, stored as bitmasks.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default)]
pub struct Diagram {
    pub s: u32,
    pub sharp: u128,
}

/// Why a diagram fails admissibility.
#[derive(Clone, Debug, PartialEq, Eq, thiserror::Error)]
pub enum Violation {
    #[error("rule i: every edge of component {0} is marked")]
    FullProjective(Component),
    #[error("rule ii: {copy} carries {count} marks")]
    TriangleCount { copy: TriangleCopy, count: u32 },
    #[error("rule ii: pair {x} / {y} has mark counts ({nx},{ny})")]
    Pattern { x: TriangleCopy, y: TriangleCopy, nx: u32, ny: u32 },
    #[error("rule ii: single marks of {x} / {y} do not correspond")]
    Mismatch { x: TriangleCopy, y: TriangleCopy },
}

impl Diagram {
    pub fn empty() -> Diagram {
        Diagram::default()
    }

    pub fn new(s: impl IntoIterator<Item = Edge>, sharp: impl IntoIterator<Item = SharpEdge>) -> Diagram {
        Diagram {
            s: s.into_iter().fold(0, |m, e| m | e.bit()),
            sharp: sharp.into_iter().fold(0, |m, x| m | x.bit()),
        }
    }

    pub fn edges(&self) -> impl Iterator<Item = Edge> + '_ {
        Edge::all().filter(move |e| self.s & e.bit() != 0)
    }

    pub fn sharp_edges(&self) -> impl Iterator<Item = SharpEdge> + '_ {
        SharpEdge::all().filter(move |x| self.sharp & x.bit() != 0)
    }

    /// Marked edges of a triangle copy, as a 3-bit mask over the triangle's edge slots.
    pub fn copy_marks(&self, copy: TriangleCopy) -> u8 {
        let mut m = 0u8;
        for (k, &e) in copy.triangle.edges().iter().enumerate() {
            if self.is_marked(copy.component, e) {
                m |= 1 << k;
            }
        }
        m
    }

    /// Whether `e` is marked in component `c` (affine reads S, projective reads S#).
    pub fn is_marked(&self, c: Component, e: Edge) -> bool {
        match c {
            Component::Affine(_) => self.s & e.bit() != 0,
            Component::Projective(f) => match SharpEdge::new(e, f) {
                Some(x) => self.sharp & x.bit() != 0,
                None => false,
            },
        }
    }

    /// Checks Rule-i and Rule-ii, reporting the first failure.
    pub fn check_admissible(&self) -> Result<(), Violation> {
        for f in Face::all() {
            let m = face_sharp_mask(f);
            if self.sharp & m == m {
                return Err(Violation::FullProjective(Component::Projective(f)));
            }
        }
        for p in related_pairs() {
            let mx = self.copy_marks(p.x);
            let my = self.copy_marks(p.y);
            let (nx, ny) = (mx.count_ones(), my.count_ones());
            if nx == 2 {
                return Err(Violation::TriangleCount { copy: p.x, count: 2 });
            }
            if ny == 2 {
                return Err(Violation::TriangleCount { copy: p.y, count: 2 });
            }
            match (nx, ny) {
                (0, 1) | (1, 0) => {
                    return Err(Violation::Pattern { x: p.x, y: p.y, nx, ny });
                }
                (1, 1) => {
                    let image = p.phi[mx.trailing_zeros() as usize];
                    let target = p.y.triangle.edges()[my.trailing_zeros() as usize];
                    if image != target {
                        return Err(Violation::Mismatch { x: p.x, y: p.y });
                    }
                }
                _ => {}
            }
        }
        Ok(())
    }

    pub fn is_admissible(&self) -> bool {
        self.check_admissible().is_ok()
    }

    /// `self ≤ other` in the closure order: S ⊇ S' and S# ⊇ S#'.
    pub fn leq(&self, other: &Diagram) -> bool {
        self.s & other.s == other.s && self.sharp & other.sharp == other.sharp
    }

    pub fn union(&self, other: &Diagram) -> Diagram {
        Diagram { s: self.s | other.s, sharp: self.sharp | other.sharp }
    }

    pub fn act(&self, p: Perm) -> Diagram {
        Diagram::new(self.edges().map(|e| p.edge(e)), self.sharp_edges().map(|x| p.sharp(x)))
    }

    pub fn dual(&self) -> Diagram {
        Diagram::new(self.edges().map(dual::edge), self.sharp_edges().map(dual::sharp))
    }

    /// One-line serialization: sorted S, then sorted S#.
    pub fn serialize_line(&self) -> String {
        let s: Vec<String> = self.edges().map(|e| e.to_string()).collect();
        let x: Vec<String> = self.sharp_edges().map(|e| e.to_string()).collect();
        format!("S={{{}}} S#={{{}}}", s.join(","), x.join(","))
    }

    pub fn parse_line(line: &str) -> Option<Diagram> {
        let line = line.trim();
        let rest = line.strip_prefix("S={")?;
        let (s, rest) = rest.split_once("} S#={")?;
        let x = rest.strip_suffix('}')?;
        let edges = s
            .split(',')
            .filter(|t| !t.is_empty())
            .map(Edge::parse)
            .collect::<Option<Vec<_>>>()?;
        let sharps = x
            .split(',')
            .filter(|t| !t.is_empty())
            .map(SharpEdge::parse)
            .collect::<Option<Vec<_>>>()?;
        Some(Diagram::new(edges, sharps))
    }
}

impl fmt::Display for Diagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.serialize_line())
    }
}

impl Serialize for Diagram {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Repr {
            s: Vec<String>,
            sharp: Vec<String>,
        }
        Repr {
            s: self.edges().map(|e| e.to_string()).collect(),
            sharp: self.sharp_edges().map(|e| e.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for Diagram {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Repr {
            s: Vec<String>,
            sharp: Vec<String>,
        }
        let r = Repr::deserialize(deserializer)?;
        let edges = r
            .s
            .iter()
            .map(|t| Edge::parse(t).ok_or_else(|| serde::de::Error::custom(format!("bad edge {t}"))))
            .collect::<Result<Vec<_>, _>>()?;
        let sharps = r
            .sharp
            .iter()
            .map(|t| {
                SharpEdge::parse(t).ok_or_else(|| serde::de::Error::custom(format!("bad sharp edge {t}")))
            })
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Diagram::new(edges, sharps))
    }
}

/// Number of clique divisors collapsing each edge.
fn edge_levels(clique: DivisorSet) -> [u8; Edge::COUNT] {
    let mut lvl = [0u8; Edge::COUNT];
    for d in set_iter(clique) {
        for e in Edge::all() {
            if d.sset() & e.bit() != 0 {
                lvl[e.index()] += 1;
            }
        }
    }
    lvl
}

/// The rate rule: (α, β) is marked when α collapses on more clique divisors
/// than the least-collapsed edge of β.
pub fn sharp_marks(clique: DivisorSet) -> u128 {
    let lvl = edge_levels(clique);
    let mut out = 0u128;
    for f in Face::all() {
        let min = f.edges().iter().map(|e| lvl[e.index()]).min().unwrap();
        for &e in f.edges() {
            if lvl[e.index()] > min {
                out |= SharpEdge::new(e, f).unwrap().bit();
            }
        }
    }
    out
}

/// Diagram of a set of divisors: union of collapsed edges plus rate-rule marks.
pub fn diagram_of(clique: DivisorSet) -> Diagram {
    let s = set_iter(clique).fold(0, |m, d| m | d.sset());
    Diagram { s, sharp: sharp_marks(clique) }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::divisor::Divisor;

    fn set(names: &[&str]) -> DivisorSet {
        names.iter().fold(0, |m, n| m | Divisor::parse(n).unwrap().bit())
    }

    #[test]
    fn single_divisors_admissible() {
        for d in Divisor::all() {
            let g = diagram_of(d.bit());
            assert!(g.is_admissible(), "{d}: {:?}", g.check_admissible());
        }
    }

    #[test]
    fn two_marks_rejected() {
        let g = Diagram::new([Edge::parse("1-2").unwrap(), Edge::parse("1-3").unwrap()], []);
        assert!(matches!(g.check_admissible(), Err(Violation::TriangleCount { count: 2, .. })));
    }

    #[test]
    fn sharp_marks_examples() {
        assert_eq!(sharp_marks(set(&["A"])), 0);
        let c1 = sharp_marks(set(&["C1"]));
        let t234 = Face::parse("T1_234").unwrap();
        let h1 = Face::parse("H1").unwrap();
        assert_eq!(c1 & face_sharp_mask(t234), 0);
        let on_h1: Vec<String> = SharpEdge::all()
            .filter(|x| x.face() == h1 && c1 & x.bit() != 0)
            .map(|x| x.edge().to_string())
            .collect();
        assert_eq!(on_h1, vec!["2-3", "2-4", "3-4"]);
        let cd = sharp_marks(set(&["C1", "D23"]));
        let on_t: Vec<String> = SharpEdge::all()
            .filter(|x| x.face() == t234 && cd & x.bit() != 0)
            .map(|x| x.edge().to_string())
            .collect();
        assert_eq!(on_t, vec!["2-3"]);
    }

    #[test]
    fn serialization_roundtrip() {
        let g = diagram_of(set(&["C1", "D23", "B"]));
        assert_eq!(Diagram::parse_line(&g.serialize_line()), Some(g));
        let json = serde_json::to_string(&g).unwrap();
        assert_eq!(serde_json::from_str::<Diagram>(&json).unwrap(), g);
    }
}
