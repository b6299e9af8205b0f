//! The per-stratum point-count table.

use std::fmt;

use num_bigint::BigInt;
use serde::Serialize;

use super::poly::IntPolynomial;
use crate::data::{self, DataError};
use crate::diagram::{ShiftMask, SplitType, StratumType};

/// Fiber factor types annotating a row.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Debug, Serialize)]
pub enum FiberType {
    I,
    II,
    III,
}

impl FiberType {
    /// The factor this fiber type contributes.
    pub fn factor(self) -> IntPolynomial {
        match self {
            FiberType::I => IntPolynomial::from_i64(&[6, -5, 1]),
            FiberType::II => IntPolynomial::from_i64(&[-2, 1]),
            FiberType::III => IntPolynomial::from_i64(&[-1, 1]),
        }
    }

    fn parse(s: &str) -> Option<FiberType> {
        match s {
            "I" => Some(FiberType::I),
            "II" => Some(FiberType::II),
            "III" => Some(FiberType::III),
            _ => None,
        }
    }
}

impl fmt::Display for FiberType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FiberType::I => "I",
            FiberType::II => "II",
            FiberType::III => "III",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CountRow {
    pub ty: StratumType,
    pub multiplicity: usize,
    pub count: IntPolynomial,
    pub fibers: Vec<(FiberType, u32)>,
    #[serde(skip)]
    pub line: usize,
}

impl CountRow {
    pub fn codim(&self) -> usize {
        self.ty.codim()
    }

    pub fn annotation(&self) -> String {
        if self.fibers.is_empty() {
            return "-".into();
        }
        let parts: Vec<String> = self
            .fibers
            .iter()
            .map(|(t, e)| if *e == 1 { t.to_string() } else { format!("{t}^{e}") })
            .collect();
        parts.join("*")
    }

    /// Product of the annotated fiber factors.
    pub fn fiber_factor(&self) -> IntPolynomial {
        self.fibers
            .iter()
            .fold(IntPolynomial::one(), |acc, (t, e)| &acc * &t.factor().pow(*e))
    }
}

#[derive(Clone, Debug, Serialize)]
pub struct CountTable {
    pub rows: Vec<CountRow>,
}

fn parse_annotation(s: &str) -> Option<Vec<(FiberType, u32)>> {
    if s == "-" {
        return Some(Vec::new());
    }
    s.split('*')
        .map(|part| {
            let (name, exp) = match part.split_once('^') {
                Some((n, e)) => (n, e.parse().ok()?),
                None => (part, 1),
            };
            Some((FiberType::parse(name)?, exp))
        })
        .collect()
}

impl CountTable {
    /// Parses a table without the cross-row checks.
    pub fn parse_rows(text: &str) -> Result<CountTable, DataError> {
        let mut rows = Vec::new();
        for (lineno, line) in data::content_lines(text) {
            let f: Vec<&str> = line.split_whitespace().collect();
            if f.len() != 5 {
                return Err(DataError::at(lineno, format!("expected 5 columns, found {}", f.len())));
            }
            let split: SplitType = f[0].parse().map_err(|e: String| DataError::at(lineno, e))?;
            let shift = ShiftMask::parse(f[1])
                .ok_or_else(|| DataError::at(lineno, format!("invalid shift mask `{}`", f[1])))?;
            let multiplicity: usize = f[2]
                .parse()
                .map_err(|_| DataError::at(lineno, format!("invalid multiplicity `{}`", f[2])))?;
            let coeffs = f[3]
                .split(',')
                .map(|c| c.parse::<BigInt>())
                .collect::<Result<Vec<_>, _>>()
                .map_err(|_| DataError::at(lineno, format!("invalid coefficient list `{}`", f[3])))?;
            let fibers = parse_annotation(f[4])
                .ok_or_else(|| DataError::at(lineno, format!("invalid fiber annotation `{}`", f[4])))?;
            rows.push(CountRow {
                ty: StratumType { split, shift },
                multiplicity,
                count: IntPolynomial::new(coeffs),
                fibers,
                line: lineno,
            });
        }
        Ok(CountTable { rows })
    }

    /// Parses and validates: 160 distinct rows, degree = 6 − codim, and
    /// equal counts for dual types.
    pub fn parse(text: &str) -> Result<CountTable, DataError> {
        let t = Self::parse_rows(text)?;
        for (i, r) in t.rows.iter().enumerate() {
            if let Some(prev) = t.rows[..i].iter().find(|p| p.ty == r.ty) {
                return Err(DataError::at(
                    r.line,
                    format!("duplicate row {} (first at line {})", r.ty, prev.line),
                ));
            }
            let expected = 6 - r.codim();
            if r.count.degree() != Some(expected) {
                return Err(DataError::at(
                    r.line,
                    format!("{}: degree {:?} but 6 - codim = {expected}", r.ty, r.count.degree()),
                ));
            }
        }
        for r in &t.rows {
            match t.row(r.ty.dual()) {
                Some(d) if d.count == r.count => {}
                Some(d) => {
                    return Err(DataError::at(
                        r.line,
                        format!("{} count differs from dual {} (line {})", r.ty, d.ty, d.line),
                    ))
                }
                None => {
                    return Err(DataError::at(r.line, format!("dual of {} missing", r.ty)));
                }
            }
        }
        if t.rows.len() != 160 {
            return Err(DataError::global(format!("expected 160 rows, found {}", t.rows.len())));
        }
        Ok(t)
    }

    pub fn embedded() -> CountTable {
        CountTable::parse(data::POINT_COUNTS).expect("embedded count table is valid")
    }

    pub fn row(&self, ty: StratumType) -> Option<&CountRow> {
        self.rows.iter().find(|r| r.ty == ty)
    }

    pub fn row_by_name(&self, split: &str, shift: &str) -> Option<&CountRow> {
        let ty = StratumType { split: split.parse().ok()?, shift: ShiftMask::parse(shift)? };
        self.row(ty)
    }
}
