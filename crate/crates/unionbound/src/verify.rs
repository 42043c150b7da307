//! Invariant suites run by `unionbound verify`.
//!
//! Each suite checks a family of relations on generated event systems and
//! records every failing instance together with its JSON so it can be
//! replayed with `unionbound compute`.

use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use unionbound_core::algorithmic::{self, IndexSubset};
use unionbound_core::oracle::{self, TwoMomentInstance};
use unionbound_core::{
    closed, compare, gk, BoundKind, Direction, EventSystem, Limits, MomentSummary,
};

use crate::genbench::{generate, GeneratorConfig};
use crate::{Error, Instance};

/// Caps used by the sandwich suite: Kounias enumeration up to 12 events,
/// Hunter tree enumeration up to 8.
pub const VERIFY_LIMITS: Limits = Limits {
    kounias_cap: 12,
    hunter_cap: 8,
};

const SANDWICH_TOL: f64 = 1e-9;
const ORDER_TOL: f64 = 1e-12;
const LP_TOL: f64 = 1e-10;
const GK_NONSINGULAR_TOL: f64 = 1e-8;
const GK_RESTRICTED_TOL: f64 = 1e-6;
const RESIDUAL_FLOOR: f64 = -1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Suite {
    Sandwich,
    Ordering,
    GkEquiv,
    Achievability,
    OracleAgreement,
}

impl Suite {
    pub const ALL: [Suite; 5] = [
        Suite::Sandwich,
        Suite::Ordering,
        Suite::GkEquiv,
        Suite::Achievability,
        Suite::OracleAgreement,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Suite::Sandwich => "sandwich",
            Suite::Ordering => "ordering",
            Suite::GkEquiv => "gk-equiv",
            Suite::Achievability => "achievability",
            Suite::OracleAgreement => "oracle-agreement",
        }
    }

    /// `Ok(())` or the first violated relation.
    pub fn check(self, es: &EventSystem, seed: u64) -> Result<(), String> {
        match self {
            Suite::Sandwich => sandwich(es),
            Suite::Ordering => ordering(&es.summarize()),
            Suite::GkEquiv => gk_equiv(es, seed),
            Suite::Achievability => achievability(&es.summarize()),
            Suite::OracleAgreement => oracle_agreement(&es.summarize()),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// Parses a suite name; `all` expands to every suite.
pub fn parse_suites(name: &str) -> Result<Vec<Suite>, Error> {
    if name == "all" {
        return Ok(Suite::ALL.to_vec());
    }
    Suite::from_str(name).map(|s| vec![s])
}

impl FromStr for Suite {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self, Error> {
        Suite::ALL.into_iter().find(|x| x.name() == s).ok_or_else(|| {
            Error::Usage(format!(
                "unknown suite `{s}` (all, sandwich, ordering, gk-equiv, achievability, oracle-agreement)"
            ))
        })
    }
}

macro_rules! ensure {
    ($cond:expr, $($fmt:tt)+) => {{
        let ok: bool = $cond;
        if !ok {
            return Err(format!($($fmt)+));
        }
    }};
}

fn sandwich(es: &EventSystem) -> Result<(), String> {
    let row = compare(es, &BoundKind::ALL, &VERIFY_LIMITS);
    for (kind, r) in &row.results {
        let Ok(r) = r else { continue };
        match kind.direction() {
            Direction::Lower => ensure!(
                r.value <= row.exact + SANDWICH_TOL,
                "{kind} = {} above exact {}",
                r.value,
                row.exact
            ),
            Direction::Upper => ensure!(
                r.value >= row.exact - SANDWICH_TOL,
                "{kind} = {} below exact {}",
                r.value,
                row.exact
            ),
        }
    }
    Ok(())
}

fn ordering(ms: &MomentSummary) -> Result<(), String> {
    let err = |e: unionbound_core::Error| e.to_string();
    let kat = closed::kat_lower(ms).map_err(err)?.value;
    let ds = closed::ds_lower(ms).map_err(err)?.value;
    let dc = closed::dc_lower(ms).value;
    let cs = closed::cs_lower(ms).value;
    let frac = closed::frac_lower(ms).value;
    ensure!(kat >= dc - ORDER_TOL, "kat {kat} < dc {dc}");
    ensure!(kat >= ds - ORDER_TOL, "kat {kat} < ds {ds}");
    ensure!(kat <= 1.125 * dc + ORDER_TOL, "kat {kat} > 9/8 dc {dc}");
    ensure!(ds >= cs - ORDER_TOL, "ds {ds} < cs {cs}");
    ensure!(cs >= frac - ORDER_TOL, "cs {cs} < frac {frac}");

    let stepwise = algorithmic::kounias_stepwise(ms).value;
    if let Ok(kounias) = algorithmic::kounias_exhaustive(ms, VERIFY_LIMITS.kounias_cap) {
        let k = kounias.value;
        ensure!(
            k >= closed::bonferroni_lower(ms).value - ORDER_TOL,
            "kounias {k} < bonferroni"
        );
        ensure!(
            k >= closed::max_lower(ms).value - ORDER_TOL,
            "kounias {k} < max"
        );
        ensure!(
            stepwise <= k + ORDER_TOL,
            "stepwise {stepwise} > kounias {k}"
        );
    }
    let greedy = algorithmic::hunter_greedy(ms).value;
    ensure!(
        greedy <= closed::union_upper(ms).value + ORDER_TOL,
        "hunter-greedy {greedy} > union"
    );
    if let Ok(hunter) = algorithmic::hunter_exhaustive(ms, VERIFY_LIMITS.hunter_cap) {
        ensure!(
            hunter.value <= greedy + ORDER_TOL,
            "hunter {} > hunter-greedy {greedy}",
            hunter.value
        );
    }
    Ok(())
}

/// Dense `αᵀ Σ⁻¹ α` by Gaussian elimination with partial pivoting.
pub fn dense_gk(ms: &MomentSummary) -> Option<f64> {
    let n = ms.n_events();
    let mut a: Vec<Vec<f64>> = (0..n)
        .map(|i| {
            let mut row = ms.sigma_row(i).to_vec();
            row.push(ms.alpha()[i]);
            row
        })
        .collect();
    for col in 0..n {
        let pivot = (col..n).max_by(|&x, &y| a[x][col].abs().total_cmp(&a[y][col].abs()))?;
        if a[pivot][col].abs() < 1e-300 {
            return None;
        }
        a.swap(col, pivot);
        let (top, rest) = a.split_at_mut(col + 1);
        let pivot_row = &top[col];
        for row in rest {
            let f = row[col] / pivot_row[col];
            for (x, p) in row[col..].iter_mut().zip(&pivot_row[col..]) {
                *x -= f * p;
            }
        }
    }
    let mut x = vec![0.0; n];
    for r in (0..n).rev() {
        let s: f64 = (r + 1..n).map(|c| a[r][c] * x[c]).sum();
        x[r] = (a[r][n] - s) / a[r][r];
    }
    Some(x.iter().zip(ms.alpha()).map(|(c, a)| c * a).sum())
}

fn gk_equiv(es: &EventSystem, seed: u64) -> Result<(), String> {
    let ms = es.summarize();
    let n = ms.n_events();
    let report = gk::gk_iterative(&ms).map_err(|e| e.to_string())?;
    ensure!(report.value.is_finite(), "non-finite GK value");
    if let Some(r) = report.residuals.iter().find(|&&r| r < RESIDUAL_FLOOR) {
        return Err(format!("residual {r} below {RESIDUAL_FLOOR}"));
    }
    for w in report.running.windows(2) {
        ensure!(
            w[1] >= w[0] - 1e-10,
            "running GK bound decreased from {} to {}",
            w[0],
            w[1]
        );
    }
    if report.retained.is_empty() {
        ensure!(
            report.value == 0.0,
            "GK of empty retained set is {}",
            report.value
        );
    } else {
        let restricted = ms.restrict(&report.retained).map_err(|e| e.to_string())?;
        let dense = dense_gk(&restricted).ok_or("dense solve on retained indices is singular")?;
        let tol = if report.skipped.is_empty() {
            GK_NONSINGULAR_TOL
        } else {
            GK_RESTRICTED_TOL
        };
        ensure!(
            (report.value - dense).abs() <= tol,
            "iterative {} vs dense {dense}",
            report.value
        );
    }
    ensure!(
        report.value <= es.union_probability() + SANDWICH_TOL,
        "GK above exact union"
    );

    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    for _ in 0..10 {
        let picks: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
        if picks.is_empty() {
            continue;
        }
        let subset = IndexSubset::new(picks, n).map_err(|e| e.to_string())?;
        let sub = gk::gk_subset(&ms, &subset)
            .map_err(|e| e.to_string())?
            .value;
        ensure!(
            sub <= report.value + 1e-9,
            "subset {:?} GK {sub} exceeds full {}",
            subset.indices(),
            report.value
        );
    }
    for _ in 0..50 {
        let c: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
        if let Ok(r) = gk::gk_rayleigh(&ms, &c) {
            ensure!(
                r <= report.value + 1e-9,
                "Rayleigh ratio {r} exceeds GK {}",
                report.value
            );
        }
    }
    if report.value > 0.0 {
        let at_opt = gk::gk_rayleigh(&ms, &report.coefficients).map_err(|e| e.to_string())?;
        ensure!(
            (at_opt - report.value).abs() <= 1e-9,
            "Rayleigh at c̃ {at_opt} vs GK {}",
            report.value
        );
    }
    Ok(())
}

fn achievability(ms: &MomentSummary) -> Result<(), String> {
    if ms.theta1() <= 0.0 {
        return Ok(());
    }
    let err = |e: unionbound_core::Error| e.to_string();
    let ds = closed::ds_lower(ms).map_err(err)?.value;
    let built = oracle::construct_ds_achiever(ms).map_err(err)?;
    let back = built.summarize();
    ensure!(
        (back.theta1() - ms.theta1()).abs() <= LP_TOL,
        "DS achiever θ₁ {} vs {}",
        back.theta1(),
        ms.theta1()
    );
    ensure!(
        (back.theta2() - ms.theta2()).abs() <= LP_TOL,
        "DS achiever θ₂ {} vs {}",
        back.theta2(),
        ms.theta2()
    );
    ensure!(
        (built.union_probability() - ds).abs() <= 1e-12,
        "DS achiever union {} vs ds {ds}",
        built.union_probability()
    );

    let frac = oracle::construct_frac_achiever(ms.theta1(), ms.n_events()).map_err(err)?;
    ensure!(
        (frac.summarize().theta1() - ms.theta1()).abs() <= 1e-12,
        "frac achiever θ₁ mismatch"
    );
    ensure!(
        (frac.union_probability() - closed::frac_lower(ms).value).abs() <= 1e-12,
        "frac achiever union mismatch"
    );

    let max = oracle::construct_max_achiever(ms.alpha()).map_err(err)?;
    let alpha_back = max.summarize();
    ensure!(
        alpha_back
            .alpha()
            .iter()
            .zip(ms.alpha())
            .all(|(a, b)| (a - b).abs() <= 1e-12),
        "max achiever does not reproduce α"
    );
    ensure!(
        (max.union_probability() - closed::max_lower(ms).value).abs() <= 1e-12,
        "max achiever union mismatch"
    );
    Ok(())
}

fn oracle_agreement(ms: &MomentSummary) -> Result<(), String> {
    let err = |e: unionbound_core::Error| e.to_string();
    let n = ms.n_events();
    if ms.theta1() > 0.0 {
        let m2 = 2.0 * ms.theta2() + ms.theta1();
        let lp = oracle::two_moment_min(&TwoMomentInstance::dawson_sankoff(ms.theta1(), m2, n))
            .map_err(err)?;
        let ds = closed::ds_lower(ms).map_err(err)?.value;
        ensure!(
            (lp.value - ds).abs() <= LP_TOL,
            "DS {ds} vs LP {}",
            lp.value
        );
        let cs = closed::cs_lower(ms).value;
        ensure!(
            lp.value >= cs - ORDER_TOL,
            "LP {} below Cauchy–Schwarz {cs}",
            lp.value
        );
    }
    let mut per_event = 0.0;
    for (&a, &g) in ms.alpha().iter().zip(ms.gamma()) {
        per_event += oracle::kat_subproblem_min(a, g, n).map_err(err)?.value;
    }
    let kat = closed::kat_lower(ms).map_err(err)?.value;
    ensure!(
        (per_event - kat).abs() <= LP_TOL,
        "KAT {kat} vs per-event LP {per_event}"
    );
    Ok(())
}

#[derive(Debug, Clone)]
pub struct Failure {
    pub index: usize,
    pub config: GeneratorConfig,
    pub reason: String,
    /// Atoms-variant instance JSON reproducing the failure.
    pub instance: String,
}

#[derive(Debug, Clone)]
pub struct SuiteOutcome {
    pub suite: Suite,
    pub instances: usize,
    pub failures: Vec<Failure>,
}

impl SuiteOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Runs `suite` on every config in parallel; failures keep input order.
pub fn run_suite(suite: Suite, configs: &[GeneratorConfig]) -> Result<SuiteOutcome, Error> {
    let results = configs
        .par_iter()
        .enumerate()
        .map(|(index, config)| {
            let es = generate(config)?;
            Ok(suite.check(&es, config.seed).err().map(|reason| Failure {
                index,
                config: *config,
                reason,
                instance: Instance::from_event_system(&es).to_json(),
            }))
        })
        .collect::<Result<Vec<_>, Error>>()?;
    Ok(SuiteOutcome {
        suite,
        instances: configs.len(),
        failures: results.into_iter().flatten().collect(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::genbench::{mixed, Family};

    #[test]
    fn dense_solve_matches_hand_value() {
        let ms =
            MomentSummary::from_moments(vec![0.5, 0.5], vec![vec![0.5, 0.25], vec![0.25, 0.5]])
                .unwrap();
        assert!((dense_gk(&ms).unwrap() - 2.0 / 3.0).abs() < 1e-15);
        let singular = MomentSummary::from_moments(vec![0.0], vec![vec![0.0]]).unwrap();
        assert!(dense_gk(&singular).is_none());
    }

    #[test]
    fn suites_pass_on_mixed_instances() {
        let configs = mixed(1, 60, 2..=9, 4..=32);
        for suite in Suite::ALL {
            let out = run_suite(suite, &configs).unwrap();
            assert!(out.passed(), "{suite}: {:?}", out.failures.first());
        }
    }

    #[test]
    fn gk_equiv_exercises_the_skip_path() {
        let c = GeneratorConfig::new(Family::NearSingular, 6, 20, 4);
        let es = generate(&c).unwrap();
        let report = gk::gk_iterative(&es.summarize()).unwrap();
        assert!(!report.skipped.is_empty());
        assert_eq!(Suite::GkEquiv.check(&es, c.seed), Ok(()));
    }

    #[test]
    fn failure_json_replays() {
        let es = EventSystem::new(vec![0.5], vec![vec![true]]).unwrap();
        assert!(sandwich(&es).is_ok());
        let json = Instance::from_event_system(&es).to_json();
        assert_eq!(
            Instance::from_json(&json)
                .unwrap()
                .event_system()
                .unwrap()
                .unwrap(),
            es
        );
    }

    #[test]
    fn parses_suite_names() {
        assert_eq!(parse_suites("all").unwrap().len(), 5);
        assert_eq!(parse_suites("gk-equiv").unwrap(), vec![Suite::GkEquiv]);
        assert!(parse_suites("speed").is_err());
    }
}
