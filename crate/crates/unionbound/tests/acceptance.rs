//! Acceptance criteria, one PASS/FAIL line each. Exits non-zero if any fails.

use std::time::{Duration, Instant};

use nalgebra::{DMatrix, DVector};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use unionbound::cli::verify_configs;
use unionbound::genbench::{generate, mixed, Family, GeneratorConfig};
use unionbound::verify::{self, Suite};
use unionbound_core::algorithmic::{self, IndexSubset};
use unionbound_core::oracle::{self, TwoMomentInstance};
use unionbound_core::{
    closed, compare, gk, BoundKind, Detail, Direction, EventSystem, Limits, MomentSummary,
};

const SEED: u64 = 20_240_601;

struct Criterion {
    id: u32,
    title: &'static str,
    failures: Vec<String>,
    notes: Vec<String>,
}

impl Criterion {
    fn new(id: u32, title: &'static str) -> Self {
        Criterion {
            id,
            title,
            failures: Vec::new(),
            notes: Vec::new(),
        }
    }

    fn check(&mut self, ok: bool, what: impl FnOnce() -> String) {
        if !ok {
            self.failures.push(what());
        }
    }

    fn note(&mut self, text: String) {
        self.notes.push(text);
    }

    fn report(&self) -> bool {
        let status = if self.failures.is_empty() {
            "PASS"
        } else {
            "FAIL"
        };
        let notes = if self.notes.is_empty() {
            String::new()
        } else {
            format!(" [{}]", self.notes.join("; "))
        };
        println!("{status} criterion {}: {}{notes}", self.id, self.title);
        for f in self.failures.iter().take(5) {
            println!("    {f}");
        }
        if self.failures.len() > 5 {
            println!("    ... {} more", self.failures.len() - 5);
        }
        self.failures.is_empty()
    }
}

fn two_event() -> EventSystem {
    EventSystem::new(
        vec![0.25, 0.25, 0.25],
        vec![vec![true, false, true], vec![false, true, true]],
    )
    .unwrap()
}

fn instances(seed: u64, count: usize) -> Vec<(GeneratorConfig, EventSystem)> {
    mixed(seed, count, 2..=10, 4..=64)
        .into_iter()
        .map(|c| (c, generate(&c).unwrap()))
        .collect()
}

fn nalgebra_gk(ms: &MomentSummary) -> Option<f64> {
    let n = ms.n_events();
    let sigma = DMatrix::from_fn(n, n, |i, j| ms.sigma(i, j));
    let alpha = DVector::from_column_slice(ms.alpha());
    let x = sigma.lu().solve(&alpha)?;
    Some(alpha.dot(&x))
}

fn sandwich() -> (Criterion, Vec<(GeneratorConfig, EventSystem)>) {
    let mut c = Criterion::new(1, "sandwich validity on 1000 seeded systems");
    let start = Instant::now();
    let cases = instances(SEED, 1000);
    let limits = Limits {
        kounias_cap: 12,
        hunter_cap: 8,
    };
    for (cfg, es) in &cases {
        let row = compare(es, &BoundKind::ALL, &limits);
        for (kind, r) in &row.results {
            match r {
                Ok(r) => {
                    let ok = match kind.direction() {
                        Direction::Lower => r.value <= row.exact + 1e-9,
                        Direction::Upper => r.value >= row.exact - 1e-9,
                    };
                    c.check(ok, || {
                        format!(
                            "seed {} {kind} = {} vs exact {}",
                            cfg.seed, r.value, row.exact
                        )
                    });
                }
                Err(e) => {
                    let capped = matches!(kind, BoundKind::Hunter) && es.n_events() > 8;
                    c.check(capped, || format!("seed {} {kind} failed: {e}", cfg.seed));
                }
            }
        }
    }
    let elapsed = start.elapsed();
    c.check(elapsed < Duration::from_secs(30), || {
        format!("took {elapsed:?}")
    });
    c.note(format!("{} instances in {elapsed:.2?}", cases.len()));
    (c, cases)
}

fn ordering(cases: &[(GeneratorConfig, EventSystem)]) -> Criterion {
    let mut c = Criterion::new(
        2,
        "max(dc, ds) <= kat <= 9/8 dc, tight on the two-event fixture",
    );
    for (cfg, es) in cases {
        let ms = es.summarize();
        let kat = closed::kat_lower(&ms).unwrap().value;
        let dc = closed::dc_lower(&ms).value;
        let ds = closed::ds_lower(&ms).unwrap().value;
        c.check(kat >= dc.max(ds) - 1e-12, || {
            format!("seed {} kat {kat} < max(dc {dc}, ds {ds})", cfg.seed)
        });
        c.check(kat <= 1.125 * dc + 1e-12, || {
            format!("seed {} kat {kat} > 1.125 dc {dc}", cfg.seed)
        });
    }
    let ms = MomentSummary::from_moments(vec![0.5, 0.5], vec![vec![0.5, 0.25], vec![0.25, 0.5]])
        .unwrap();
    let ratio = closed::kat_lower(&ms).unwrap().value / closed::dc_lower(&ms).value;
    c.check((ratio - 1.125).abs() <= 1e-12, || {
        format!("fixture kat/dc = {ratio}")
    });
    c.note(format!("fixture kat/dc = {ratio}"));
    c
}

fn lp_agreement(cases: &[(GeneratorConfig, EventSystem)]) -> Criterion {
    let mut c = Criterion::new(3, "ds and kat equal their linear programs");
    let mut worst: f64 = 0.0;
    for (cfg, es) in cases {
        let ms = es.summarize();
        let n = ms.n_events();
        let lp = oracle::two_moment_min(&TwoMomentInstance::dawson_sankoff(
            ms.theta1(),
            2.0 * ms.theta2() + ms.theta1(),
            n,
        ))
        .unwrap()
        .value;
        let ds = closed::ds_lower(&ms).unwrap().value;
        worst = worst.max((lp - ds).abs());
        c.check((lp - ds).abs() <= 1e-10, || {
            format!("seed {} ds {ds} vs LP {lp}", cfg.seed)
        });
        let per_event: f64 = ms
            .alpha()
            .iter()
            .zip(ms.gamma())
            .map(|(&a, &g)| oracle::kat_subproblem_min(a, g, n).unwrap().value)
            .sum();
        let kat = closed::kat_lower(&ms).unwrap().value;
        worst = worst.max((per_event - kat).abs());
        c.check((per_event - kat).abs() <= 1e-10, || {
            format!("seed {} kat {kat} vs per-event LP {per_event}", cfg.seed)
        });
    }
    c.note(format!("max deviation {worst:.1e}"));
    c
}

fn achievability(cases: &[(GeneratorConfig, EventSystem)]) -> Criterion {
    let mut c = Criterion::new(4, "ds, frac and max achievers on 200 summaries");
    for (cfg, es) in cases.iter().take(200) {
        let ms = es.summarize();
        let built = oracle::construct_ds_achiever(&ms).unwrap();
        let back = built.summarize();
        let ds = closed::ds_lower(&ms).unwrap().value;
        c.check((back.theta1() - ms.theta1()).abs() <= 1e-10, || {
            format!("seed {} ds achiever theta1", cfg.seed)
        });
        c.check((back.theta2() - ms.theta2()).abs() <= 1e-10, || {
            format!("seed {} ds achiever theta2", cfg.seed)
        });
        c.check((built.union_probability() - ds).abs() <= 1e-12, || {
            format!(
                "seed {} ds achiever union {} vs {ds}",
                cfg.seed,
                built.union_probability()
            )
        });

        let frac = oracle::construct_frac_achiever(ms.theta1(), ms.n_events()).unwrap();
        c.check(
            (frac.summarize().theta1() - ms.theta1()).abs() <= 1e-10,
            || format!("seed {} frac theta1", cfg.seed),
        );
        c.check(
            (frac.union_probability() - closed::frac_lower(&ms).value).abs() <= 1e-12,
            || format!("seed {} frac achiever union", cfg.seed),
        );

        let max = oracle::construct_max_achiever(ms.alpha()).unwrap();
        let alpha_ok = max
            .summarize()
            .alpha()
            .iter()
            .zip(ms.alpha())
            .all(|(a, b)| (a - b).abs() <= 1e-10);
        c.check(alpha_ok, || format!("seed {} max achiever alpha", cfg.seed));
        c.check(
            (max.union_probability() - closed::max_lower(&ms).value).abs() <= 1e-12,
            || format!("seed {} max achiever union", cfg.seed),
        );
    }
    c
}

fn gk_consistency(cases: &[(GeneratorConfig, EventSystem)]) -> Criterion {
    let mut c = Criterion::new(5, "gk iterative matches a dense solve; near-singular path");
    let mut nonsingular = 0;
    let check_residuals = |c: &mut Criterion, seed: u64, report: &gk::GkReport| {
        for &r in &report.residuals {
            c.check(r >= -1e-9, || format!("seed {seed} residual {r}"));
        }
    };
    for (cfg, es) in cases {
        let ms = es.summarize();
        let report = gk::gk_iterative(&ms).unwrap();
        check_residuals(&mut c, cfg.seed, &report);
        if report.skipped.is_empty() {
            nonsingular += 1;
            let dense = nalgebra_gk(&ms).unwrap();
            let direct = gk::gk_direct(&ms).unwrap().value;
            c.check((report.value - dense).abs() <= 1e-8, || {
                format!("seed {} iterative {} vs LU {dense}", cfg.seed, report.value)
            });
            c.check(direct == report.value, || {
                format!(
                    "seed {} direct {direct} vs iterative {}",
                    cfg.seed, report.value
                )
            });
        }
    }
    let mut skipped = 0;
    for seed in 0..200 {
        let cfg = GeneratorConfig::new(
            Family::NearSingular,
            2 + (seed as usize % 9),
            8 + (seed as usize % 40),
            SEED + seed,
        );
        let ms = generate(&cfg).unwrap().summarize();
        let report = gk::gk_iterative(&ms).unwrap();
        check_residuals(&mut c, cfg.seed, &report);
        c.check(report.value.is_finite(), || {
            format!("near-singular seed {} value not finite", cfg.seed)
        });
        if !report.skipped.is_empty() {
            skipped += 1;
        }
        let restricted = ms.restrict(&report.retained).unwrap();
        let dense = nalgebra_gk(&restricted).unwrap();
        c.check((report.value - dense).abs() <= 1e-6, || {
            format!(
                "near-singular seed {} iterative {} vs restricted LU {dense}",
                cfg.seed, report.value
            )
        });
    }
    c.check(skipped > 0, || {
        "no near-singular instance exercised the skip path".into()
    });
    c.note(format!(
        "{nonsingular} nonsingular, {skipped}/200 near-singular with skipped indices"
    ));
    c
}

fn gk_monotonicity(cases: &[(GeneratorConfig, EventSystem)]) -> Criterion {
    let mut c = Criterion::new(6, "gk subset monotonicity and Rayleigh maximum");
    let mut rng = ChaCha8Rng::seed_from_u64(SEED);
    for (cfg, es) in cases.iter().take(200) {
        let ms = es.summarize();
        let n = ms.n_events();
        let full = gk::gk_direct(&ms).unwrap();
        for _ in 0..10 {
            let mut picks: Vec<usize> = (0..n).filter(|_| rng.random_bool(0.5)).collect();
            if picks.is_empty() {
                picks.push(rng.random_range(0..n));
            }
            let subset = IndexSubset::new(picks, n).unwrap();
            let sub = gk::gk_subset(&ms, &subset).unwrap().value;
            c.check(sub <= full.value + 1e-9, || {
                format!(
                    "seed {} subset {:?}: {sub} > {}",
                    cfg.seed,
                    subset.indices(),
                    full.value
                )
            });
        }
        for _ in 0..50 {
            let v: Vec<f64> = (0..n).map(|_| rng.random_range(-1.0..1.0)).collect();
            if let Ok(r) = gk::gk_rayleigh(&ms, &v) {
                c.check(r <= full.value + 1e-9, || {
                    format!("seed {} Rayleigh {r} > {}", cfg.seed, full.value)
                });
            }
        }
        let Detail::Coefficients(opt) = &full.detail else {
            unreachable!()
        };
        let at_opt = gk::gk_rayleigh(&ms, opt).unwrap();
        c.check((at_opt - full.value).abs() <= 1e-9, || {
            format!(
                "seed {} Rayleigh at optimum {at_opt} vs {}",
                cfg.seed, full.value
            )
        });
    }
    c
}

fn fixture() -> Criterion {
    let mut c = Criterion::new(7, "two-event fixture values");
    let row = compare(&two_event(), &BoundKind::ALL, &Limits::default());
    let expected = [
        (BoundKind::Bonferroni, 0.75),
        (BoundKind::Ds, 0.75),
        (BoundKind::Kat, 0.75),
        (BoundKind::Hunter, 0.75),
        (BoundKind::New1, 0.75),
        (BoundKind::Cs, 2.0 / 3.0),
        (BoundKind::Dc, 2.0 / 3.0),
        (BoundKind::Gk, 2.0 / 3.0),
        (BoundKind::Frac, 0.5),
        (BoundKind::Max, 0.5),
    ];
    c.check((row.exact - 0.75).abs() <= 1e-12, || {
        format!("exact {}", row.exact)
    });
    for (kind, want) in expected {
        let got = row.value(kind).unwrap();
        c.check((got - want).abs() <= 1e-12, || {
            format!("{kind} = {got}, expected {want}")
        });
    }
    c
}

fn greedy_vs_exhaustive(cases: &[(GeneratorConfig, EventSystem)]) -> Criterion {
    let mut c = Criterion::new(
        8,
        "hunter greedy equals exhaustive; stepwise <= exhaustive kounias",
    );
    let (mut trees, mut subsets, mut equal) = (0, 0, 0);
    for (cfg, es) in cases {
        let ms = es.summarize();
        let n = ms.n_events();
        if n <= 8 {
            trees += 1;
            let greedy = algorithmic::hunter_greedy(&ms).value;
            let exhaustive = algorithmic::hunter_exhaustive(&ms, 8).unwrap().value;
            c.check((greedy - exhaustive).abs() <= 1e-12, || {
                format!(
                    "seed {} greedy {greedy} vs exhaustive {exhaustive}",
                    cfg.seed
                )
            });
        }
        if n <= 10 {
            subsets += 1;
            let stepwise = algorithmic::kounias_stepwise(&ms).value;
            let exhaustive = algorithmic::kounias_exhaustive(&ms, 10).unwrap().value;
            c.check(stepwise <= exhaustive + 1e-12, || {
                format!(
                    "seed {} stepwise {stepwise} > exhaustive {exhaustive}",
                    cfg.seed
                )
            });
            if (stepwise - exhaustive).abs() <= 1e-12 {
                equal += 1;
            }
        }
    }
    c.note(format!(
        "{trees} tree instances; stepwise matched exhaustive on {equal}/{subsets} ({:.1}%)",
        100.0 * equal as f64 / subsets as f64
    ));
    c
}

fn verify_runtime() -> Criterion {
    let mut c = Criterion::new(9, "full verify suite under 2 minutes");
    let configs = verify_configs(200, 0, None, None);
    let start = Instant::now();
    for suite in Suite::ALL {
        let outcome = verify::run_suite(suite, &configs).unwrap();
        c.check(outcome.passed(), || {
            format!("{suite}: {:?}", outcome.failures.first())
        });
    }
    let elapsed = start.elapsed();
    c.check(elapsed < Duration::from_secs(120), || {
        format!("took {elapsed:?}")
    });
    c.note(format!(
        "{} instances x {} suites in {elapsed:.2?}",
        configs.len(),
        Suite::ALL.len()
    ));
    c
}

fn main() {
    let (criterion1, cases) = sandwich();
    let results = [
        criterion1,
        ordering(&cases),
        lp_agreement(&cases),
        achievability(&cases),
        gk_consistency(&cases),
        gk_monotonicity(&cases),
        fixture(),
        greedy_vs_exhaustive(&cases),
        verify_runtime(),
    ];
    let passed = results.iter().map(Criterion::report).filter(|&p| p).count();
    println!("{passed}/{} acceptance criteria passed", results.len());
    if passed != results.len() {
        std::process::exit(1);
    }
}
