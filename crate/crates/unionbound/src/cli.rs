//! The `unionbound` command line.
//!
//! Exit codes: 0 success, 1 usage/IO/parse errors, 2 inconsistent input,
//! 3 a verify suite failed.

use std::ffi::OsString;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use unionbound_core::{validate_summary, BoundKind, Limits, USER_TOLERANCE};

use crate::genbench::{self, Family, GeneratorConfig};
use crate::report::{self, Format};
use crate::verify;
use crate::{Error, Instance};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_INVALID: i32 = 2;
pub const EXIT_VERIFY_FAILED: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "unionbound",
    version,
    about = "Bounds on the probability of a union of events"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Evaluate bounds on one JSON instance.
    Compute {
        path: PathBuf,
        #[command(flatten)]
        output: Output,
    },
    /// Compare bounds on generated instances with consecutive seeds.
    Batch {
        #[command(flatten)]
        generator: Generator,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[command(flatten)]
        output: Output,
        /// Write the report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Run invariant suites: all, sandwich, ordering, gk-equiv, achievability, oracle-agreement.
    Verify {
        suite: String,
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        /// Use only this family instead of cycling through all of them.
        #[arg(long)]
        family: Option<String>,
        /// Fix the number of events instead of drawing it from 2..=10.
        #[arg(long)]
        n_events: Option<usize>,
    },
    /// Write one generated instance as atoms JSON.
    Generate {
        #[command(flatten)]
        generator: Generator,
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

#[derive(Debug, Args)]
struct Output {
    /// Comma-separated bound names, or `all`.
    #[arg(long, default_value = "all")]
    bounds: String,
    /// csv, md or json.
    #[arg(long, default_value = "csv")]
    format: String,
}

#[derive(Debug, Args)]
struct Generator {
    #[arg(long, default_value = "random")]
    family: String,
    #[arg(long, default_value_t = 5)]
    n_events: usize,
    #[arg(long, default_value_t = 16)]
    n_atoms: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    #[arg(long, default_value_t = 0.5)]
    density: f64,
}

impl Generator {
    fn config(&self) -> Result<GeneratorConfig, Error> {
        let family: Family = self.family.parse()?;
        let config = GeneratorConfig {
            membership_density: self.density,
            ..GeneratorConfig::new(family, self.n_events, self.n_atoms, self.seed)
        };
        config.validate()?;
        Ok(config)
    }
}

impl Output {
    fn parse(&self) -> Result<(Vec<BoundKind>, Format), Error> {
        let format = self.format.parse().map_err(Error::Usage)?;
        Ok((parse_bounds(&self.bounds)?, format))
    }
}

/// `all` or a comma-separated list of bound names.
pub fn parse_bounds(list: &str) -> Result<Vec<BoundKind>, Error> {
    if list.trim() == "all" {
        return Ok(BoundKind::ALL.to_vec());
    }
    Ok(list
        .split(',')
        .map(|s| s.trim().parse())
        .collect::<Result<_, _>>()?)
}

/// Parses `args` (including the program name) and runs the command.
/// Returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            if e.use_stderr() {
                let _ = write!(err, "{}", e.render());
                return EXIT_USAGE;
            }
            let _ = write!(out, "{}", e.render());
            return EXIT_OK;
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(code) => code,
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            match e {
                Error::Core(_) => EXIT_INVALID,
                _ => EXIT_USAGE,
            }
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> Result<i32, Error> {
    match command {
        Command::Compute { path, output } => compute(&path, &output, out, err),
        Command::Batch {
            generator,
            count,
            output,
            out: target,
        } => {
            let config = generator.config()?;
            let (kinds, format) = output.parse()?;
            let report = genbench::batch(&config, count, &kinds, &Limits::default())?;
            emit(
                &report::render_report(&report, format),
                target.as_deref(),
                out,
            )?;
            Ok(EXIT_OK)
        }
        Command::Verify {
            suite,
            count,
            seed,
            family,
            n_events,
        } => {
            let suites = verify::parse_suites(&suite)?;
            let family: Option<Family> = family.as_deref().map(str::parse).transpose()?;
            run_verify(&suites, count, seed, family, n_events, out)
        }
        Command::Generate {
            generator,
            out: target,
        } => {
            let es = genbench::generate(&generator.config()?)?;
            let mut json = Instance::from_event_system(&es).to_json();
            json.push('\n');
            emit(&json, target.as_deref(), out)?;
            Ok(EXIT_OK)
        }
    }
}

fn compute(
    path: &Path,
    output: &Output,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> Result<i32, Error> {
    let (kinds, format) = output.parse()?;
    let instance = Instance::load(path)?;
    let es = instance.event_system()?;
    let ms = instance.summary()?;
    let violations = validate_summary(&ms, USER_TOLERANCE);
    if !violations.is_empty() {
        for v in &violations {
            let _ = writeln!(err, "inconsistent summary: {v}");
        }
        return Ok(EXIT_INVALID);
    }
    let limits = Limits::default();
    let results: Vec<_> = kinds
        .iter()
        .map(|&k| (k, k.evaluate(&ms, &limits)))
        .collect();
    let exact = es.as_ref().map(|es| es.union_probability());
    emit(&report::render_results(exact, &results, format), None, out)?;
    Ok(EXIT_OK)
}

/// The instance list used by `verify`.
pub fn verify_configs(
    count: usize,
    seed: u64,
    family: Option<Family>,
    n_events: Option<usize>,
) -> Vec<GeneratorConfig> {
    let events = n_events.map_or(2..=10, |n| n..=n);
    let mut configs = genbench::mixed(seed, count, events, 4..=64);
    if let Some(family) = family {
        for c in &mut configs {
            c.family = family;
        }
    }
    configs
}

fn run_verify(
    suites: &[verify::Suite],
    count: usize,
    seed: u64,
    family: Option<Family>,
    n_events: Option<usize>,
    out: &mut dyn Write,
) -> Result<i32, Error> {
    let configs = verify_configs(count, seed, family, n_events);
    for c in &configs {
        c.validate()?;
    }
    let mut failed = false;
    for &suite in suites {
        let outcome = verify::run_suite(suite, &configs)?;
        let status = if outcome.passed() { "PASS" } else { "FAIL" };
        let _ = writeln!(
            out,
            "{suite}: {status} ({} instances, {} failures)",
            outcome.instances,
            outcome.failures.len()
        );
        for f in &outcome.failures {
            let _ = writeln!(
                out,
                "  instance {} (family {}, seed {}): {}\n  {}",
                f.index, f.config.family, f.config.seed, f.reason, f.instance
            );
        }
        failed |= !outcome.passed();
    }
    Ok(if failed { EXIT_VERIFY_FAILED } else { EXIT_OK })
}

fn emit(text: &str, target: Option<&Path>, out: &mut dyn Write) -> Result<(), Error> {
    match target {
        Some(path) => std::fs::write(path, text).map_err(|source| Error::Io {
            path: path.to_owned(),
            source,
        }),
        None => out.write_all(text.as_bytes()).map_err(|source| Error::Io {
            path: "<stdout>".into(),
            source,
        }),
    }
}
