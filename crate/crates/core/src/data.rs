//! Reference data shipped with the crate, plus shared parsing helpers.

use std::fmt;

pub const DIVISORS: &str = include_str!("../data/divisors.txt");
pub const POINT_COUNTS: &str = include_str!("../data/point_counts.txt");
pub const STRATUM_TYPES: &str = include_str!("../data/stratum_types.txt");

/// Error in a data file, with the offending line when known.
#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub struct DataError {
    pub line: Option<usize>,
    pub message: String,
}

impl DataError {
    pub fn at(line: usize, message: impl Into<String>) -> DataError {
        DataError { line: Some(line), message: message.into() }
    }

    pub fn global(message: impl Into<String>) -> DataError {
        DataError { line: None, message: message.into() }
    }
}

impl fmt::Display for DataError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.line {
            Some(l) => write!(f, "line {l}: {}", self.message),
            None => write!(f, "{}", self.message),
        }
    }
}

/// Non-empty, non-comment lines with 1-based line numbers.
pub fn content_lines(text: &str) -> impl Iterator<Item = (usize, &str)> {
    text.lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l.trim()))
        .filter(|(_, l)| !l.is_empty() && !l.starts_with('#'))
}
