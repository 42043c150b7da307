use alloc::vec::Vec;
use core::fmt;
use core::str::FromStr;

use crate::algorithmic::{self, DEFAULT_HUNTER_CAP, DEFAULT_KOUNIAS_CAP};
use crate::{closed, gk, BoundResult, Direction, Error, EventSystem, MomentSummary};

/// Tolerance for flagging a bound on the wrong side of the exact union probability.
pub const VIOLATION_TOLERANCE: f64 = 1e-9;

/// Every bound the crate knows, under its stable name.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum BoundKind {
    Bonferroni,
    Frac,
    Max,
    Cs,
    Ds,
    Dc,
    Kat,
    Kounias,
    KouniasStepwise,
    Gk,
    Union,
    New1,
    Hunter,
    HunterGreedy,
}

impl BoundKind {
    pub const ALL: [BoundKind; 14] = [
        BoundKind::Bonferroni,
        BoundKind::Frac,
        BoundKind::Max,
        BoundKind::Cs,
        BoundKind::Ds,
        BoundKind::Dc,
        BoundKind::Kat,
        BoundKind::Kounias,
        BoundKind::KouniasStepwise,
        BoundKind::Gk,
        BoundKind::Union,
        BoundKind::New1,
        BoundKind::Hunter,
        BoundKind::HunterGreedy,
    ];

    pub fn name(self) -> &'static str {
        match self {
            BoundKind::Bonferroni => "bonferroni",
            BoundKind::Frac => "frac",
            BoundKind::Max => "max",
            BoundKind::Cs => "cs",
            BoundKind::Ds => "ds",
            BoundKind::Dc => "dc",
            BoundKind::Kat => "kat",
            BoundKind::Kounias => "kounias",
            BoundKind::KouniasStepwise => "kounias-stepwise",
            BoundKind::Gk => "gk",
            BoundKind::Union => "union",
            BoundKind::New1 => "new1",
            BoundKind::Hunter => "hunter",
            BoundKind::HunterGreedy => "hunter-greedy",
        }
    }

    pub fn direction(self) -> Direction {
        match self {
            BoundKind::Union | BoundKind::New1 | BoundKind::Hunter | BoundKind::HunterGreedy => {
                Direction::Upper
            }
            _ => Direction::Lower,
        }
    }

    /// Evaluates this bound on `ms`.
    pub fn evaluate(self, ms: &MomentSummary, limits: &Limits) -> Result<BoundResult, Error> {
        match self {
            BoundKind::Bonferroni => Ok(closed::bonferroni_lower(ms)),
            BoundKind::Frac => Ok(closed::frac_lower(ms)),
            BoundKind::Max => Ok(closed::max_lower(ms)),
            BoundKind::Cs => Ok(closed::cs_lower(ms)),
            BoundKind::Ds => closed::ds_lower(ms),
            BoundKind::Dc => Ok(closed::dc_lower(ms)),
            BoundKind::Kat => closed::kat_lower(ms),
            BoundKind::Kounias => algorithmic::kounias_exhaustive(ms, limits.kounias_cap),
            BoundKind::KouniasStepwise => Ok(algorithmic::kounias_stepwise(ms)),
            BoundKind::Gk => gk::gk_direct(ms),
            BoundKind::Union => Ok(closed::union_upper(ms)),
            BoundKind::New1 => Ok(closed::new1_upper(ms)),
            BoundKind::Hunter => algorithmic::hunter_exhaustive(ms, limits.hunter_cap),
            BoundKind::HunterGreedy => Ok(algorithmic::hunter_greedy(ms)),
        }
    }
}

impl fmt::Display for BoundKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// A bound name that is not in [`BoundKind::ALL`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct UnknownBound(pub alloc::string::String);

impl fmt::Display for UnknownBound {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "unknown bound `{}`; valid names:", self.0)?;
        for kind in BoundKind::ALL {
            write!(f, " {kind}")?;
        }
        Ok(())
    }
}

impl core::error::Error for UnknownBound {}

impl FromStr for BoundKind {
    type Err = UnknownBound;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        BoundKind::ALL
            .into_iter()
            .find(|k| k.name() == s)
            .ok_or_else(|| UnknownBound(s.into()))
    }
}

/// Size caps for the exhaustive searches.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Limits {
    pub kounias_cap: usize,
    pub hunter_cap: usize,
}

impl Default for Limits {
    fn default() -> Self {
        Limits {
            kounias_cap: DEFAULT_KOUNIAS_CAP,
            hunter_cap: DEFAULT_HUNTER_CAP,
        }
    }
}

/// All requested bounds for one event system, next to its exact union probability.
#[derive(Debug, Clone, PartialEq)]
pub struct ComparisonRow {
    pub exact: f64,
    pub results: Vec<(BoundKind, Result<BoundResult, Error>)>,
    /// Lower bounds above `exact + 1e-9` and upper bounds below `exact − 1e-9`.
    pub violations: Vec<BoundKind>,
}

impl ComparisonRow {
    pub fn get(&self, kind: BoundKind) -> Option<&BoundResult> {
        self.results
            .iter()
            .find(|(k, _)| *k == kind)
            .and_then(|(_, r)| r.as_ref().ok())
    }

    pub fn value(&self, kind: BoundKind) -> Option<f64> {
        self.get(kind).map(|r| r.value)
    }
}

/// Summarizes `es` once and evaluates each bound in `kinds` against it.
///
/// A bound that cannot be evaluated (e.g. an exhaustive search above its
/// cap) keeps its error in the row and is never flagged as a violation.
pub fn compare(es: &EventSystem, kinds: &[BoundKind], limits: &Limits) -> ComparisonRow {
    let ms = es.summarize();
    let exact = es.union_probability();
    let results: Vec<_> = kinds
        .iter()
        .map(|&k| (k, k.evaluate(&ms, limits)))
        .collect();
    let violations = results
        .iter()
        .filter_map(|(k, r)| {
            let v = r.as_ref().ok()?.value;
            let bad = match k.direction() {
                Direction::Lower => v > exact + VIOLATION_TOLERANCE,
                Direction::Upper => v < exact - VIOLATION_TOLERANCE,
            };
            bad.then_some(*k)
        })
        .collect();
    ComparisonRow {
        exact,
        results,
        violations,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use alloc::string::ToString;
    use alloc::vec;

    #[test]
    fn names_round_trip() {
        for kind in BoundKind::ALL {
            assert_eq!(kind.name().parse::<BoundKind>().unwrap(), kind);
        }
        let err = "nope".parse::<BoundKind>().unwrap_err();
        assert!(err.to_string().contains("kounias-stepwise"));
    }

    #[test]
    fn compare_two_event_fixture() {
        let es = EventSystem::new(
            vec![0.25, 0.25, 0.25],
            vec![vec![true, false, true], vec![false, true, true]],
        )
        .unwrap();
        let row = compare(&es, &BoundKind::ALL, &Limits::default());
        assert_eq!(row.exact, 0.75);
        assert!(row.violations.is_empty());
        for k in [
            BoundKind::Ds,
            BoundKind::Kat,
            BoundKind::Bonferroni,
            BoundKind::Hunter,
        ] {
            assert!((row.value(k).unwrap() - 0.75).abs() < 1e-12, "{k}");
        }
        for k in [BoundKind::Cs, BoundKind::Dc, BoundKind::Gk] {
            assert!((row.value(k).unwrap() - 2.0 / 3.0).abs() < 1e-12, "{k}");
        }
    }

    #[test]
    fn compare_with_no_bounds() {
        let es = EventSystem::new(vec![0.3], vec![vec![true]]).unwrap();
        let row = compare(&es, &[], &Limits::default());
        assert_eq!(row.exact, 0.3);
        assert!(row.results.is_empty());
    }

    #[test]
    fn capped_bounds_report_errors_without_violations() {
        let es = EventSystem::new(vec![0.1], vec![vec![true]; 9]).unwrap();
        let row = compare(&es, &[BoundKind::Hunter], &Limits::default());
        assert!(row.results[0].1.is_err());
        assert!(row.violations.is_empty());
    }
}
