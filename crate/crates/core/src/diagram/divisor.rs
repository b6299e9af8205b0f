//! The 23 boundary divisors and their collapsed edge sets.

use std::fmt;
use std::sync::OnceLock;

use serde::{Deserialize, Serialize};

use super::complex::{Edge, FaceLabel};
use super::perm::Perm;
use crate::data::{self, DataError};

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize, Deserialize)]
pub enum DivisorKind {
    A,
    B,
    AStar,
    C(u8),
    CStar(u8),
    D(FaceLabel),
    E(FaceLabel),
}

/// A divisor, identified by its position 0..23 in the canonical order
/// A, B, A*, C1..C4, C*1..C*4, D12..D34, E12..E34.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct Divisor(u8);

fn pairs() -> [FaceLabel; 6] {
    let v: Vec<FaceLabel> = super::complex::all_labels()
        .iter()
        .copied()
        .filter(|l| l.level() == 2)
        .collect();
    v.try_into().unwrap()
}

impl Divisor {
    pub const COUNT: usize = 23;

    pub fn from_index(i: usize) -> Divisor {
        assert!(i < Self::COUNT);
        Divisor(i as u8)
    }

    pub fn index(self) -> usize {
        self.0 as usize
    }

    pub fn all() -> impl Iterator<Item = Divisor> {
        (0..Self::COUNT as u8).map(Divisor)
    }

    pub fn bit(self) -> u32 {
        1 << self.0
    }

    pub fn kind(self) -> DivisorKind {
        match self.0 {
            0 => DivisorKind::A,
            1 => DivisorKind::B,
            2 => DivisorKind::AStar,
            3..=6 => DivisorKind::C(self.0 - 2),
            7..=10 => DivisorKind::CStar(self.0 - 6),
            11..=16 => DivisorKind::D(pairs()[self.0 as usize - 11]),
            _ => DivisorKind::E(pairs()[self.0 as usize - 17]),
        }
    }

    pub fn from_kind(kind: DivisorKind) -> Divisor {
        Divisor::all().find(|d| d.kind() == kind).expect("valid divisor kind")
    }

    pub fn is_shifting(self) -> bool {
        self.0 < 3
    }

    /// Hypersimplex level collapsed by a shifting divisor.
    pub fn shift_level(self) -> Option<usize> {
        self.is_shifting().then(|| self.0 as usize + 1)
    }

    /// Edges collapsed along this divisor, as a bitmask over edge indices.
    pub fn sset(self) -> u32 {
        divisor_table()[self.index()]
    }

    pub fn edges(self) -> Vec<Edge> {
        Edge::all().filter(|e| self.sset() & e.bit() != 0).collect()
    }

    pub fn name(self) -> String {
        self.to_string()
    }

    pub fn parse(s: &str) -> Option<Divisor> {
        Divisor::all().find(|d| d.to_string() == s)
    }

    pub fn act(self, p: Perm) -> Divisor {
        let kind = match self.kind() {
            DivisorKind::C(i) => DivisorKind::C(p.apply(i)),
            DivisorKind::CStar(i) => DivisorKind::CStar(p.apply(i)),
            DivisorKind::D(l) => DivisorKind::D(p.label(l)),
            DivisorKind::E(l) => DivisorKind::E(p.label(l)),
            k => k,
        };
        Divisor::from_kind(kind)
    }

    pub fn dual(self) -> Divisor {
        let kind = match self.kind() {
            DivisorKind::A => DivisorKind::AStar,
            DivisorKind::AStar => DivisorKind::A,
            DivisorKind::B => DivisorKind::B,
            DivisorKind::C(i) => DivisorKind::CStar(i),
            DivisorKind::CStar(i) => DivisorKind::C(i),
            DivisorKind::D(l) => DivisorKind::D(l),
            DivisorKind::E(l) => DivisorKind::E(l.complement()),
        };
        Divisor::from_kind(kind)
    }
}

impl fmt::Display for Divisor {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind() {
            DivisorKind::A => write!(f, "A"),
            DivisorKind::B => write!(f, "B"),
            DivisorKind::AStar => write!(f, "A*"),
            DivisorKind::C(i) => write!(f, "C{i}"),
            DivisorKind::CStar(i) => write!(f, "C*{i}"),
            DivisorKind::D(l) => write!(f, "D{l}"),
            DivisorKind::E(l) => write!(f, "E{l}"),
        }
    }
}

fn divisor_table() -> &'static [u32; Divisor::COUNT] {
    static T: OnceLock<[u32; Divisor::COUNT]> = OnceLock::new();
    T.get_or_init(|| {
        parse_divisor_table(data::DIVISORS).expect("embedded divisor table is valid")
    })
}

/// Parses a divisor table: one line per divisor, name followed by edges.
pub fn parse_divisor_table(text: &str) -> Result<[u32; Divisor::COUNT], DataError> {
    let mut out = [0u32; Divisor::COUNT];
    let mut seen = [false; Divisor::COUNT];
    for (lineno, line) in data::content_lines(text) {
        let mut fields = line.split_whitespace();
        let name = fields.next().unwrap();
        let d = Divisor::parse(name)
            .ok_or_else(|| DataError::at(lineno, format!("unknown divisor `{name}`")))?;
        if seen[d.index()] {
            return Err(DataError::at(lineno, format!("duplicate divisor `{name}`")));
        }
        seen[d.index()] = true;
        for f in fields {
            let e = Edge::parse(f)
                .ok_or_else(|| DataError::at(lineno, format!("invalid edge `{f}`")))?;
            out[d.index()] |= e.bit();
        }
        if out[d.index()] == 0 {
            return Err(DataError::at(lineno, format!("divisor `{name}` has no edges")));
        }
    }
    if let Some(i) = seen.iter().position(|s| !s) {
        return Err(DataError::global(format!("missing divisor `{}`", Divisor::from_index(i))));
    }
    Ok(out)
}

/// Bitmask of divisors (bit = divisor index).
pub type DivisorSet = u32;

pub fn set_iter(set: DivisorSet) -> impl Iterator<Item = Divisor> {
    Divisor::all().filter(move |d| set & d.bit() != 0)
}

pub fn set_act(set: DivisorSet, p: Perm) -> DivisorSet {
    set_iter(set).fold(0, |m, d| m | d.act(p).bit())
}

pub fn set_dual(set: DivisorSet) -> DivisorSet {
    set_iter(set).fold(0, |m, d| m | d.dual().bit())
}

pub fn set_names(set: DivisorSet) -> Vec<String> {
    set_iter(set).map(|d| d.to_string()).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::diagram::perm::dual;

    #[test]
    fn names_roundtrip() {
        for d in Divisor::all() {
            assert_eq!(Divisor::parse(&d.to_string()), Some(d));
        }
        assert_eq!(Divisor::from_index(2).to_string(), "A*");
        assert_eq!(Divisor::from_index(22).to_string(), "E34");
    }

    #[test]
    fn sset_sizes() {
        let sizes: Vec<u32> = Divisor::all().map(|d| d.sset().count_ones()).collect();
        assert_eq!(&sizes[..3], &[6, 12, 6]);
        assert!(sizes[3..11].iter().all(|&s| s == 6));
        assert!(sizes[11..17].iter().all(|&s| s == 4));
        assert!(sizes[17..].iter().all(|&s| s == 10));
    }

    #[test]
    fn actions_match_ssets() {
        for d in Divisor::all() {
            let img = Edge::all()
                .filter(|e| d.sset() & e.bit() != 0)
                .fold(0, |m, e| m | dual::edge(e).bit());
            assert_eq!(img, d.dual().sset(), "{d}");
            for p in Perm::all() {
                let img = Edge::all()
                    .filter(|e| d.sset() & e.bit() != 0)
                    .fold(0, |m, e| m | p.edge(e).bit());
                assert_eq!(img, d.act(p).sset());
            }
        }
    }

    #[test]
    fn examples() {
        let c1 = Divisor::parse("C1").unwrap();
        assert_eq!(c1.act(Perm::transposition(1, 2)).to_string(), "C2");
        assert_eq!(Divisor::parse("E12").unwrap().dual().to_string(), "E34");
        assert_eq!(Divisor::parse("D12").unwrap().dual().to_string(), "D12");
    }

    #[test]
    fn parser_rejects() {
        assert!(parse_divisor_table("A 1-2\n").is_err());
        let bad = crate::data::DIVISORS.replace("C1    2-3", "C1    2-9");
        let err = parse_divisor_table(&bad).unwrap_err();
        assert!(err.to_string().contains("line"));
    }
}
