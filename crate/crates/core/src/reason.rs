//! Machine-readable reasons attached to undefined values.

use std::fmt;

use serde::Serialize;

/// Why a value is absent.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Reason {
    /// An input observation for this country-year does not exist.
    MissingInput,
    /// Not enough consecutive history for the rolling window.
    InsufficientHistory,
    /// Fewer usable observations than the coverage gate requires.
    CoverageGate,
    /// Regression design was rank deficient.
    SingularDesign,
    /// Input had no variation (flat series, collapsed model).
    Degenerate,
    /// Input outside the operation's domain (e.g. non-positive level).
    NonPositive,
    /// Relative change against a zero baseline.
    ZeroBase,
    /// Every component of an aggregate was absent.
    AllComponentsMissing,
    /// Diagnostic intermediate; never scored.
    Unscored,
}

impl Reason {
    pub fn code(self) -> &'static str {
        match self {
            Reason::MissingInput => "missing_input",
            Reason::InsufficientHistory => "insufficient_history",
            Reason::CoverageGate => "coverage_gate",
            Reason::SingularDesign => "singular_design",
            Reason::Degenerate => "degenerate",
            Reason::NonPositive => "non_positive",
            Reason::ZeroBase => "zero_base",
            Reason::AllComponentsMissing => "all_components_missing",
            Reason::Unscored => "unscored",
        }
    }
}

impl fmt::Display for Reason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

/// A value that is either present or absent for a stated reason.
pub type Cell = Result<f64, Reason>;

/// Lifts an `Option` into a [`Cell`], tagging absence with `reason`.
pub fn cell(value: Option<f64>, reason: Reason) -> Cell {
    value.ok_or(reason)
}
