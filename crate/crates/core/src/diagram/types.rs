//! Stratum type names and the expected-type table.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use super::divisor::{set_iter, DivisorKind, DivisorSet};
use crate::data::{self, DataError};

/// Split part of a stratum type, named by its divisor letters.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub enum SplitType {
    X0,
    C,
    Cs,
    D,
    E,
    CCsNop,
    CCsOp,
    CD,
    CsD,
    CE,
    CsE,
    DDOp,
    DE,
    DEs,
    CCsOpD,
    CCsNopD,
    CCsE,
    CDE,
    CsDE,
    DDOpE,
}

impl SplitType {
    pub const ALL: [SplitType; 20] = [
        SplitType::X0,
        SplitType::C,
        SplitType::Cs,
        SplitType::D,
        SplitType::E,
        SplitType::CCsNop,
        SplitType::CCsOp,
        SplitType::CD,
        SplitType::CsD,
        SplitType::CE,
        SplitType::CsE,
        SplitType::DDOp,
        SplitType::DE,
        SplitType::DEs,
        SplitType::CCsOpD,
        SplitType::CCsNopD,
        SplitType::CCsE,
        SplitType::CDE,
        SplitType::CsDE,
        SplitType::DDOpE,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SplitType::X0 => "X0",
            SplitType::C => "C",
            SplitType::Cs => "Cs",
            SplitType::D => "D",
            SplitType::E => "E",
            SplitType::CCsNop => "CCs_nop",
            SplitType::CCsOp => "CCs_op",
            SplitType::CD => "CD",
            SplitType::CsD => "CsD",
            SplitType::CE => "CE",
            SplitType::CsE => "CsE",
            SplitType::DDOp => "DD_op",
            SplitType::DE => "DE",
            SplitType::DEs => "DEs",
            SplitType::CCsOpD => "CCs_opD",
            SplitType::CCsNopD => "CCs_nopD",
            SplitType::CCsE => "CCsE",
            SplitType::CDE => "CDE",
            SplitType::CsDE => "CsDE",
            SplitType::DDOpE => "DD_opE",
        }
    }

    /// Number of split divisors.
    pub fn codim(self) -> usize {
        match self {
            SplitType::X0 => 0,
            SplitType::C | SplitType::Cs | SplitType::D | SplitType::E => 1,
            SplitType::CCsOpD
            | SplitType::CCsNopD
            | SplitType::CCsE
            | SplitType::CDE
            | SplitType::CsDE
            | SplitType::DDOpE => 3,
            _ => 2,
        }
    }

    /// The type obtained by complementing all labels.
    pub fn dual(self) -> SplitType {
        match self {
            SplitType::C => SplitType::Cs,
            SplitType::Cs => SplitType::C,
            SplitType::CD => SplitType::CsD,
            SplitType::CsD => SplitType::CD,
            SplitType::CE => SplitType::CsE,
            SplitType::CsE => SplitType::CE,
            SplitType::DE => SplitType::DEs,
            SplitType::DEs => SplitType::DE,
            SplitType::CDE => SplitType::CsDE,
            SplitType::CsDE => SplitType::CDE,
            t => t,
        }
    }

    /// Classifies the split divisors of a clique. Returns `None` for a
    /// combination that is not a stratum type.
    pub fn classify(clique: DivisorSet) -> Option<SplitType> {
        let (mut c, mut cs, mut d, mut e) = (vec![], vec![], vec![], vec![]);
        for x in set_iter(clique) {
            match x.kind() {
                DivisorKind::C(i) => c.push(i),
                DivisorKind::CStar(i) => cs.push(i),
                DivisorKind::D(l) => d.push(l),
                DivisorKind::E(l) => e.push(l),
                _ => {}
            }
        }
        let disjoint = |a: crate::diagram::complex::FaceLabel, b: crate::diagram::complex::FaceLabel| {
            a.mask() & b.mask() == 0
        };
        let t = match (c.len(), cs.len(), d.len(), e.len()) {
            (0, 0, 0, 0) => SplitType::X0,
            (1, 0, 0, 0) => SplitType::C,
            (0, 1, 0, 0) => SplitType::Cs,
            (0, 0, 1, 0) => SplitType::D,
            (0, 0, 0, 1) => SplitType::E,
            (1, 1, 0, 0) if c[0] == cs[0] => SplitType::CCsOp,
            (1, 1, 0, 0) => SplitType::CCsNop,
            (1, 0, 1, 0) if !d[0].contains(c[0]) => SplitType::CD,
            (0, 1, 1, 0) if !d[0].contains(cs[0]) => SplitType::CsD,
            (1, 0, 0, 1) if !e[0].contains(c[0]) => SplitType::CE,
            (0, 1, 0, 1) if e[0].contains(cs[0]) => SplitType::CsE,
            (0, 0, 2, 0) if disjoint(d[0], d[1]) => SplitType::DDOp,
            (0, 0, 1, 1) if d[0] == e[0] => SplitType::DE,
            (0, 0, 1, 1) if disjoint(d[0], e[0]) => SplitType::DEs,
            (1, 1, 1, 0) if c[0] == cs[0] => SplitType::CCsOpD,
            (1, 1, 1, 0) => SplitType::CCsNopD,
            (1, 1, 0, 1) => SplitType::CCsE,
            (1, 0, 1, 1) => SplitType::CDE,
            (0, 1, 1, 1) => SplitType::CsDE,
            (0, 0, 2, 1) if disjoint(d[0], d[1]) => SplitType::DDOpE,
            _ => return None,
        };
        Some(t)
    }
}

impl fmt::Display for SplitType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for SplitType {
    type Err = String;
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        SplitType::ALL
            .iter()
            .copied()
            .find(|t| t.name() == s)
            .ok_or_else(|| format!("unknown split type `{s}`"))
    }
}

/// Set of collapsed hypersimplices; bit `k-1` stands for Δ_k.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Default, Serialize, Deserialize)]
pub struct ShiftMask(pub u8);

impl ShiftMask {
    pub fn all() -> impl Iterator<Item = ShiftMask> {
        [0b000, 0b001, 0b010, 0b100, 0b011, 0b101, 0b110, 0b111].into_iter().map(ShiftMask)
    }

    pub fn contains(self, level: usize) -> bool {
        self.0 & (1 << (level - 1)) != 0
    }

    pub fn count(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Reverses the order Δ1, Δ2, Δ3.
    pub fn dual(self) -> ShiftMask {
        let b = |k: usize| u8::from(self.contains(k));
        ShiftMask(b(3) | b(2) << 1 | b(1) << 2)
    }

    /// `1`/`0` per hypersimplex, Δ1 first.
    pub fn code(self) -> String {
        (1..=3).map(|k| if self.contains(k) { '1' } else { '0' }).collect()
    }

    /// `•` for collapsed, `∘` otherwise.
    pub fn dots(self) -> String {
        (1..=3).map(|k| if self.contains(k) { '•' } else { '∘' }).collect()
    }

    pub fn parse(s: &str) -> Option<ShiftMask> {
        if s.chars().count() != 3 {
            return None;
        }
        let mut m = 0u8;
        for (k, c) in s.chars().enumerate() {
            match c {
                '1' | '•' => m |= 1 << k,
                '0' | '∘' => {}
                _ => return None,
            }
        }
        Some(ShiftMask(m))
    }
}

impl fmt::Display for ShiftMask {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.code())
    }
}

/// Full stratum type: split letters plus shift mask.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize, Deserialize)]
pub struct StratumType {
    pub split: SplitType,
    pub shift: ShiftMask,
}

impl StratumType {
    pub fn codim(self) -> usize {
        self.split.codim() + self.shift.count()
    }

    pub fn dual(self) -> StratumType {
        StratumType { split: self.split.dual(), shift: self.shift.dual() }
    }
}

impl fmt::Display for StratumType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.split, self.shift)
    }
}

/// One row of the expected-type table.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TypeRow {
    pub ty: StratumType,
    pub codim: usize,
    pub multiplicity: usize,
}

pub fn parse_type_table(text: &str) -> Result<Vec<TypeRow>, DataError> {
    let mut rows: Vec<TypeRow> = Vec::new();
    for (lineno, line) in data::content_lines(text) {
        let f: Vec<&str> = line.split_whitespace().collect();
        if f.len() != 4 {
            return Err(DataError::at(lineno, format!("expected 4 columns, found {}", f.len())));
        }
        let split: SplitType = f[0].parse().map_err(|e: String| DataError::at(lineno, e))?;
        let shift = ShiftMask::parse(f[1])
            .ok_or_else(|| DataError::at(lineno, format!("invalid shift mask `{}`", f[1])))?;
        let codim: usize = f[2]
            .parse()
            .map_err(|_| DataError::at(lineno, format!("invalid codim `{}`", f[2])))?;
        let multiplicity: usize = f[3]
            .parse()
            .map_err(|_| DataError::at(lineno, format!("invalid multiplicity `{}`", f[3])))?;
        let ty = StratumType { split, shift };
        if ty.codim() != codim {
            return Err(DataError::at(
                lineno,
                format!("codim {codim} disagrees with type {ty} (letters give {})", ty.codim()),
            ));
        }
        if rows.iter().any(|r| r.ty == ty) {
            return Err(DataError::at(lineno, format!("duplicate type {ty}")));
        }
        rows.push(TypeRow { ty, codim, multiplicity });
    }
    if rows.len() != SplitType::ALL.len() * 8 {
        return Err(DataError::global(format!("expected 160 type rows, found {}", rows.len())));
    }
    Ok(rows)
}

pub fn default_type_table() -> Vec<TypeRow> {
    parse_type_table(data::STRATUM_TYPES).expect("embedded type table is valid")
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn shift_codes() {
        let m = ShiftMask::parse("100").unwrap();
        assert!(m.contains(1) && !m.contains(3));
        assert_eq!(m.dots(), "•∘∘");
        assert_eq!(m.dual().code(), "001");
        assert_eq!(ShiftMask::parse("•∘•"), Some(ShiftMask(0b101)));
        assert_eq!(ShiftMask::all().count(), 8);
    }

    #[test]
    fn names_roundtrip() {
        for t in SplitType::ALL {
            assert_eq!(t.name().parse::<SplitType>().unwrap(), t);
            assert_eq!(t.dual().dual(), t);
        }
    }

    #[test]
    fn table_loads() {
        let rows = default_type_table();
        assert_eq!(rows.iter().map(|r| r.multiplicity).sum::<usize>(), 1424);
    }

    #[test]
    fn table_rejects_duplicate() {
        let mut text = data::STRATUM_TYPES.to_string();
        text.push_str("X0 000 0 1\n");
        let err = parse_type_table(&text).unwrap_err();
        assert!(err.message.contains("duplicate"), "{err}");
        assert!(err.line.is_some());
    }
}
