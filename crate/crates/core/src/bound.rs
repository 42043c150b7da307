use alloc::vec::Vec;

use crate::BoundKind;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Direction {
    Lower,
    Upper,
}

impl Direction {
    pub fn as_str(self) -> &'static str {
        match self {
            Direction::Lower => "lower",
            Direction::Upper => "upper",
        }
    }
}

/// Diagnostic payload attached to a bound value. Event indices are 0-based.
#[derive(Debug, Clone, PartialEq, Default)]
pub enum Detail {
    #[default]
    None,
    /// Index subset at which a subset-optimized bound was evaluated.
    Subset(Vec<usize>),
    /// Spanning tree edges `(i, j)` with `i < j`.
    Tree(Vec<(usize, usize)>),
    /// Coefficient vector `c` with `Σ c = α` on the retained indices; skipped indices hold 0.
    Coefficients(Vec<f64>),
    /// Adjacent degree pair `(k1, k2)` supporting the two-moment optimum.
    Support { k1: usize, k2: usize },
}

/// A single bound evaluation.
///
/// `value` is the raw formula output and may lie outside `[0, 1]` (a
/// Bonferroni lower bound can be negative). `clamped` records whether
/// rendering would have to clip it.
#[derive(Debug, Clone, PartialEq)]
pub struct BoundResult {
    pub kind: BoundKind,
    pub value: f64,
    pub clamped: bool,
    pub detail: Detail,
}

impl BoundResult {
    pub(crate) fn new(kind: BoundKind, value: f64) -> Self {
        BoundResult {
            kind,
            value,
            clamped: !(0.0..=1.0).contains(&value),
            detail: Detail::None,
        }
    }

    pub(crate) fn with_detail(mut self, detail: Detail) -> Self {
        self.detail = detail;
        self
    }

    pub fn direction(&self) -> Direction {
        self.kind.direction()
    }

    /// Value limited to `[0, 1]`, for display only.
    pub fn display_value(&self) -> f64 {
        self.value.clamp(0.0, 1.0)
    }
}
