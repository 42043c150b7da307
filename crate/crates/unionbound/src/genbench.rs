//! Seeded instance generation and batch bound comparison.
//!
//! Every instance is drawn from a `ChaCha8Rng` seeded with
//! `seed_from_u64(config.seed)`; the identifier [`GENERATOR_ALGORITHM`] is
//! written into every report header so a run can be replayed elsewhere.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;
use unionbound_core::{compare, BoundKind, ComparisonRow, Direction, EventSystem, Limits};

use crate::Error;

pub const GENERATOR_ALGORITHM: &str = "chacha8-seed_from_u64/v1";

/// Mass removed from one atom of the duplicated event in the near-singular family.
pub const NEAR_SINGULAR_PERTURBATION: f64 = 1e-8;

/// Two bounds within this distance share a rank.
const RANK_TIE: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Family {
    Random,
    Disjoint,
    Identical,
    Nested,
    NearSingular,
}

impl Family {
    pub const ALL: [Family; 5] = [
        Family::Random,
        Family::Disjoint,
        Family::Identical,
        Family::Nested,
        Family::NearSingular,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Family::Random => "random",
            Family::Disjoint => "disjoint",
            Family::Identical => "identical",
            Family::Nested => "nested",
            Family::NearSingular => "near-singular",
        }
    }
}

impl fmt::Display for Family {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Family {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Family::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| {
                Error::Config(format!(
                    "unknown family `{s}` (random, disjoint, identical, nested, near-singular)"
                ))
            })
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GeneratorConfig {
    pub n_events: usize,
    pub n_atoms: usize,
    pub seed: u64,
    /// Probability that an atom belongs to an event (random and near-singular families).
    pub membership_density: f64,
    pub family: Family,
}

impl GeneratorConfig {
    pub fn new(family: Family, n_events: usize, n_atoms: usize, seed: u64) -> Self {
        GeneratorConfig {
            n_events,
            n_atoms,
            seed,
            membership_density: 0.5,
            family,
        }
    }

    pub fn validate(&self) -> Result<(), Error> {
        if self.n_events == 0 {
            return Err(Error::Config("n_events must be at least 1".into()));
        }
        if self.n_atoms == 0 {
            return Err(Error::Config("n_atoms must be at least 1".into()));
        }
        if !(self.membership_density > 0.0 && self.membership_density < 1.0) {
            return Err(Error::Config(
                "membership density must lie in (0, 1)".into(),
            ));
        }
        Ok(())
    }
}

/// Atom masses in (0, 1] normalized to sum to one.
fn masses(rng: &mut ChaCha8Rng, m: usize) -> Vec<f64> {
    let raw: Vec<f64> = (0..m).map(|_| 1.0 - rng.random::<f64>()).collect();
    let total: f64 = raw.iter().sum();
    raw.into_iter().map(|x| x / total).collect()
}

/// Coin-flip membership row, redrawn until it covers at least one atom.
fn random_row(rng: &mut ChaCha8Rng, m: usize, density: f64) -> Vec<bool> {
    loop {
        let row: Vec<bool> = (0..m).map(|_| rng.random_bool(density)).collect();
        if row.iter().any(|&b| b) {
            return row;
        }
    }
}

/// Draws one event system. Deterministic in the whole config.
///
/// * `random`: independent coin flips with `membership_density`, no empty event.
/// * `disjoint`: contiguous blocks of atoms, one block per event; uses
///   `max(n_atoms, n_events)` atoms so no event is empty.
/// * `identical`: one random row shared by all events.
/// * `nested`: event `i` holds a prefix of the atoms, prefixes shrink with `i`.
/// * `near-singular`: `n_events − 1` random events plus a duplicate of one
///   of them, with one of its atoms lightened by `1e-8`; the pairwise matrix
///   is rank deficient.
pub fn generate(config: &GeneratorConfig) -> Result<EventSystem, Error> {
    config.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (n, m, density) = (config.n_events, config.n_atoms, config.membership_density);
    let (masses, membership) = match config.family {
        Family::Random => {
            let masses = masses(&mut rng, m);
            (
                masses,
                (0..n).map(|_| random_row(&mut rng, m, density)).collect(),
            )
        }
        Family::Disjoint => {
            let m = m.max(n);
            let masses = masses(&mut rng, m);
            let rows = (0..n)
                .map(|i| (0..m).map(|w| w * n / m == i).collect())
                .collect();
            (masses, rows)
        }
        Family::Identical => {
            let masses = masses(&mut rng, m);
            let row = random_row(&mut rng, m, density);
            (masses, vec![row; n])
        }
        Family::Nested => {
            let masses = masses(&mut rng, m);
            let mut sizes: Vec<usize> = (0..n).map(|_| rng.random_range(1..=m)).collect();
            sizes.sort_unstable_by(|a, b| b.cmp(a));
            let rows = sizes
                .iter()
                .map(|&s| (0..m).map(|w| w < s).collect())
                .collect();
            (masses, rows)
        }
        Family::NearSingular => {
            let mut masses = masses(&mut rng, m);
            let mut rows: Vec<Vec<bool>> = (0..n.saturating_sub(1).max(1))
                .map(|_| random_row(&mut rng, m, density))
                .collect();
            if n >= 2 {
                let source = rng.random_range(0..rows.len());
                let copy = rows[source].clone();
                let heaviest = (0..m)
                    .filter(|&w| copy[w])
                    .max_by(|&a, &b| masses[a].total_cmp(&masses[b]))
                    .expect("rows are never empty");
                masses[heaviest] -= NEAR_SINGULAR_PERTURBATION.min(masses[heaviest]);
                rows.push(copy);
            }
            (masses, rows)
        }
    };
    Ok(EventSystem::new(masses, membership)?)
}

/// `count` configs sharing everything but the seed, which runs `seed, seed+1, …`.
pub fn replicate(config: &GeneratorConfig, count: usize) -> Vec<GeneratorConfig> {
    (0..count as u64)
        .map(|i| GeneratorConfig {
            seed: config.seed.wrapping_add(i),
            ..*config
        })
        .collect()
}

/// Configs cycling through all families with `N` and `M` drawn uniformly
/// from the given ranges (themselves drawn from `seed`).
pub fn mixed(
    seed: u64,
    count: usize,
    events: std::ops::RangeInclusive<usize>,
    atoms: std::ops::RangeInclusive<usize>,
) -> Vec<GeneratorConfig> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    (0..count)
        .map(|i| {
            let family = Family::ALL[i % Family::ALL.len()];
            let n = rng.random_range(events.clone());
            let m = rng.random_range(atoms.clone());
            let density = rng.random_range(0.15..0.85);
            GeneratorConfig {
                n_events: n,
                n_atoms: m,
                seed: rng.random(),
                membership_density: density,
                family,
            }
        })
        .collect()
}

/// One instance in a [`ComparisonReport`].
#[derive(Debug, Clone)]
pub struct ReportRow {
    pub config: GeneratorConfig,
    pub n_atoms: usize,
    pub comparison: ComparisonRow,
    /// Rank of each requested bound among bounds of the same direction
    /// (1 = tightest), aligned with [`ComparisonReport::kinds`]; `None` when unavailable.
    pub ranks: Vec<Option<usize>>,
}

impl ReportRow {
    pub fn clamped(&self) -> Vec<BoundKind> {
        self.comparison
            .results
            .iter()
            .filter(|(_, r)| r.as_ref().is_ok_and(|r| r.clamped))
            .map(|(k, _)| *k)
            .collect()
    }
}

#[derive(Debug, Clone)]
pub struct ComparisonReport {
    pub algorithm: &'static str,
    pub kinds: Vec<BoundKind>,
    pub rows: Vec<ReportRow>,
}

/// Per-bound aggregates over a report.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BoundSummary {
    #[serde(serialize_with = "kind_name")]
    pub kind: BoundKind,
    /// Instances where the bound was available.
    pub evaluated: usize,
    /// Mean of `|value − exact|`; `None` when never evaluated.
    pub mean_gap: Option<f64>,
    /// Instances where the bound was (jointly) the tightest in its direction.
    pub wins: usize,
}

pub(crate) fn kind_name<S: serde::Serializer>(kind: &BoundKind, s: S) -> Result<S::Ok, S::Error> {
    s.serialize_str(kind.name())
}

fn ranks(row: &ComparisonRow, kinds: &[BoundKind]) -> Vec<Option<usize>> {
    kinds
        .iter()
        .map(|&k| {
            let v = row.value(k)?;
            let dir = k.direction();
            let better = kinds
                .iter()
                .filter(|&&o| o.direction() == dir && o != k)
                .filter_map(|&o| row.value(o))
                .filter(|&o| match dir {
                    Direction::Lower => o > v + RANK_TIE,
                    Direction::Upper => o < v - RANK_TIE,
                })
                .count();
            Some(better + 1)
        })
        .collect()
}

/// Compares `kinds` on one event system.
pub fn compare_row(
    config: GeneratorConfig,
    es: &EventSystem,
    kinds: &[BoundKind],
    limits: &Limits,
) -> ReportRow {
    let comparison = compare(es, kinds, limits);
    let ranks = ranks(&comparison, kinds);
    ReportRow {
        config,
        n_atoms: es.n_atoms(),
        comparison,
        ranks,
    }
}

/// Generates and compares every config in parallel; rows keep input order.
pub fn batch_configs(
    configs: &[GeneratorConfig],
    kinds: &[BoundKind],
    limits: &Limits,
) -> Result<ComparisonReport, Error> {
    let rows = configs
        .par_iter()
        .map(|c| generate(c).map(|es| compare_row(*c, &es, kinds, limits)))
        .collect::<Result<Vec<_>, _>>()?;
    Ok(ComparisonReport {
        algorithm: GENERATOR_ALGORITHM,
        kinds: kinds.to_vec(),
        rows,
    })
}

/// `count` instances of `config` with consecutive seeds.
pub fn batch(
    config: &GeneratorConfig,
    count: usize,
    kinds: &[BoundKind],
    limits: &Limits,
) -> Result<ComparisonReport, Error> {
    config.validate()?;
    batch_configs(&replicate(config, count), kinds, limits)
}

impl ComparisonReport {
    pub fn summary(&self) -> Vec<BoundSummary> {
        self.kinds
            .iter()
            .enumerate()
            .map(|(col, &kind)| {
                let gaps: Vec<f64> = self
                    .rows
                    .iter()
                    .filter_map(|r| {
                        r.comparison
                            .value(kind)
                            .map(|v| (v - r.comparison.exact).abs())
                    })
                    .collect();
                let wins = self.rows.iter().filter(|r| r.ranks[col] == Some(1)).count();
                BoundSummary {
                    kind,
                    evaluated: gaps.len(),
                    mean_gap: (!gaps.is_empty())
                        .then(|| gaps.iter().sum::<f64>() / gaps.len() as f64),
                    wins,
                }
            })
            .collect()
    }

    pub fn violation_count(&self) -> usize {
        self.rows
            .iter()
            .map(|r| r.comparison.violations.len())
            .sum()
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn kinds() -> Vec<BoundKind> {
        BoundKind::ALL.to_vec()
    }

    #[test]
    fn disjoint_family_is_block_diagonal() {
        let es = generate(&GeneratorConfig::new(Family::Disjoint, 3, 7, 1)).unwrap();
        let ms = es.summarize();
        for i in 0..3 {
            for j in 0..3 {
                if i != j {
                    assert_eq!(ms.sigma(i, j), 0.0);
                }
            }
        }
        assert!(ms.alpha().iter().all(|&a| a > 0.0));
        let few = generate(&GeneratorConfig::new(Family::Disjoint, 5, 2, 1)).unwrap();
        assert_eq!(few.n_atoms(), 5);
    }

    #[test]
    fn identical_family_repeats_one_row() {
        let es = generate(&GeneratorConfig::new(Family::Identical, 3, 6, 9)).unwrap();
        assert!(es.membership().windows(2).all(|w| w[0] == w[1]));
    }

    #[test]
    fn nested_family_is_a_chain() {
        let es = generate(&GeneratorConfig::new(Family::Nested, 5, 10, 3)).unwrap();
        let ms = es.summarize();
        assert!((es.union_probability() - ms.alpha()[0]).abs() < 1e-15);
        for w in es.membership().windows(2) {
            assert!(w[0].iter().zip(&w[1]).all(|(a, b)| *a || !*b));
        }
    }

    #[test]
    fn near_singular_family_duplicates_an_event() {
        let es = generate(&GeneratorConfig::new(Family::NearSingular, 5, 12, 11)).unwrap();
        let rows = es.membership();
        assert!(rows[..4].contains(&rows[4]));
        let total: f64 = es.masses().iter().sum();
        assert!((total - (1.0 - NEAR_SINGULAR_PERTURBATION)).abs() < 1e-12);
    }

    #[test]
    fn generation_is_deterministic() {
        for family in Family::ALL {
            let c = GeneratorConfig::new(family, 6, 9, 42);
            assert_eq!(generate(&c).unwrap(), generate(&c).unwrap());
        }
        let a = generate(&GeneratorConfig::new(Family::Random, 6, 9, 1)).unwrap();
        let b = generate(&GeneratorConfig::new(Family::Random, 6, 9, 2)).unwrap();
        assert_ne!(a, b);
    }

    #[test]
    fn random_rows_are_never_empty() {
        for seed in 0..50 {
            let c = GeneratorConfig {
                membership_density: 0.05,
                ..GeneratorConfig::new(Family::Random, 8, 4, seed)
            };
            let es = generate(&c).unwrap();
            assert!(es.membership().iter().all(|r| r.iter().any(|&b| b)));
        }
    }

    #[test]
    fn rejects_bad_configs() {
        assert!(generate(&GeneratorConfig::new(Family::Random, 0, 4, 0)).is_err());
        let c = GeneratorConfig {
            membership_density: 1.0,
            ..GeneratorConfig::new(Family::Random, 2, 4, 0)
        };
        assert!(generate(&c).is_err());
        assert!("cubic".parse::<Family>().is_err());
    }

    #[test]
    fn empty_batch() {
        let r = batch(
            &GeneratorConfig::new(Family::Random, 4, 8, 0),
            0,
            &kinds(),
            &Limits::default(),
        )
        .unwrap();
        assert!(r.rows.is_empty());
        assert!(r.summary().iter().all(|s| s.mean_gap.is_none()));
    }

    #[test]
    fn disjoint_batch_has_zero_gaps_for_degree_bounds() {
        let r = batch(
            &GeneratorConfig::new(Family::Disjoint, 5, 12, 7),
            20,
            &kinds(),
            &Limits::default(),
        )
        .unwrap();
        for s in r.summary() {
            if matches!(s.kind, BoundKind::Ds | BoundKind::Dc | BoundKind::Kat) {
                assert!(s.mean_gap.unwrap() < 1e-12, "{:?}", s);
            }
        }
        assert_eq!(r.violation_count(), 0);
    }

    #[test]
    fn kat_beats_dc_on_average() {
        let r = batch(
            &GeneratorConfig::new(Family::Random, 6, 16, 5),
            100,
            &kinds(),
            &Limits::default(),
        )
        .unwrap();
        let s = r.summary();
        let gap = |k| s.iter().find(|b| b.kind == k).unwrap().mean_gap.unwrap();
        assert!(gap(BoundKind::Kat) <= gap(BoundKind::Dc));
        assert_eq!(r.violation_count(), 0);
    }

    #[test]
    fn ranks_share_ties() {
        let es = EventSystem::new(
            vec![0.25, 0.25, 0.25],
            vec![vec![true, false, true], vec![false, true, true]],
        )
        .unwrap();
        let row = compare_row(
            GeneratorConfig::new(Family::Random, 2, 3, 0),
            &es,
            &kinds(),
            &Limits::default(),
        );
        let rank = |k| row.ranks[kinds().iter().position(|&x| x == k).unwrap()];
        assert_eq!(rank(BoundKind::Ds), Some(1));
        assert_eq!(rank(BoundKind::Kat), Some(1));
        assert_eq!(rank(BoundKind::Hunter), Some(1));
        assert_eq!(rank(BoundKind::Union), Some(4));
    }

    #[test]
    fn mixed_cycles_families() {
        let configs = mixed(3, 10, 2..=10, 4..=64);
        assert_eq!(configs[0].family, Family::Random);
        assert_eq!(configs[4].family, Family::NearSingular);
        assert!(configs
            .iter()
            .all(|c| (2..=10).contains(&c.n_events) && (4..=64).contains(&c.n_atoms)));
        assert_eq!(configs, mixed(3, 10, 2..=10, 4..=64));
    }
}
