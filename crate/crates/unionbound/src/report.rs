//! Rendering of bound results and batch reports.
//!
//! Machine formats (CSV, JSON) print numbers with 12 significant digits,
//! Markdown tables with 6. Event indices are printed 1-based.
//!
//! Batch CSV layout, one row per instance:
//!
//! ```text
//! instance,family,seed,n_events,n_atoms,exact,<bound>,<bound>_rank,...,clamped,violations
//! ```
//!
//! The first line is a `#` comment naming the generator algorithm; the
//! per-bound summary (mean gap to the exact union, win counts) follows the
//! table as `#` comment lines. Unavailable bounds leave their cells empty;
//! `clamped` and `violations` are `;`-separated bound names.

use std::fmt::Write as _;

use serde_json::{json, Value};
use unionbound_core::{BoundKind, BoundResult, Detail, Error as CoreError};

use crate::genbench::ComparisonReport;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Format {
    Csv,
    Markdown,
    Json,
}

impl std::str::FromStr for Format {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, String> {
        match s {
            "csv" => Ok(Format::Csv),
            "md" | "markdown" => Ok(Format::Markdown),
            "json" => Ok(Format::Json),
            other => Err(format!("unknown format `{other}` (csv, md, json)")),
        }
    }
}

pub const MACHINE_DIGITS: usize = 12;
pub const HUMAN_DIGITS: usize = 6;

/// `x` with `digits` significant digits, fixed notation for moderate
/// exponents and scientific otherwise, trailing zeros trimmed (like `%.{digits}g`).
pub fn format_sig(x: f64, digits: usize) -> String {
    if x == 0.0 {
        return "0".into();
    }
    if !x.is_finite() {
        return format!("{x}");
    }
    let sci = format!("{:.*e}", digits - 1, x);
    let (mantissa, exp) = sci.split_once('e').expect("scientific notation");
    let exp: i32 = exp.parse().expect("integer exponent");
    if exp < -5 || exp >= digits as i32 {
        let mantissa = trim_zeros(mantissa);
        return format!("{mantissa}e{exp}");
    }
    let decimals = (digits as i32 - 1 - exp).max(0) as usize;
    trim_zeros(&format!("{x:.decimals$}")).to_string()
}

fn trim_zeros(s: &str) -> &str {
    if s.contains('.') {
        s.trim_end_matches('0').trim_end_matches('.')
    } else {
        s
    }
}

/// `x` rounded to 12 significant digits, for JSON output.
fn machine_number(x: f64) -> Value {
    format_sig(x, MACHINE_DIGITS)
        .parse::<f64>()
        .map(Value::from)
        .unwrap_or(Value::Null)
}

pub fn detail_text(detail: &Detail) -> String {
    let one_based = |v: &[usize]| {
        v.iter()
            .map(|i| (i + 1).to_string())
            .collect::<Vec<_>>()
            .join(" ")
    };
    match detail {
        Detail::None => String::new(),
        Detail::Subset(s) => format!("subset {{{}}}", one_based(s)),
        Detail::Tree(edges) => {
            let e: Vec<String> = edges
                .iter()
                .map(|(i, j)| format!("{}-{}", i + 1, j + 1))
                .collect();
            format!("tree {}", e.join(" "))
        }
        Detail::Coefficients(c) => {
            let c: Vec<String> = c.iter().map(|x| format_sig(*x, HUMAN_DIGITS)).collect();
            format!("c = ({})", c.join(", "))
        }
        Detail::Support { k1, k2 } => format!("support ({k1}, {k2})"),
    }
}

fn detail_json(detail: &Detail) -> Value {
    match detail {
        Detail::None => Value::Null,
        Detail::Subset(s) => json!({ "subset": s.iter().map(|i| i + 1).collect::<Vec<_>>() }),
        Detail::Tree(e) => {
            json!({ "tree": e.iter().map(|(i, j)| [i + 1, j + 1]).collect::<Vec<_>>() })
        }
        Detail::Coefficients(c) => {
            json!({ "coefficients": c.iter().map(|x| machine_number(*x)).collect::<Vec<_>>() })
        }
        Detail::Support { k1, k2 } => json!({ "support": [k1, k2] }),
    }
}

/// Results for a single instance (the `compute` subcommand).
pub fn render_results(
    exact: Option<f64>,
    results: &[(BoundKind, Result<BoundResult, CoreError>)],
    format: Format,
) -> String {
    match format {
        Format::Json => {
            let bounds: Vec<Value> = results
                .iter()
                .map(|(k, r)| match r {
                    Ok(r) => json!({
                        "name": k.name(),
                        "direction": k.direction().as_str(),
                        "value": machine_number(r.value),
                        "clamped": r.clamped,
                        "detail": detail_json(&r.detail),
                    }),
                    Err(e) => json!({ "name": k.name(), "direction": k.direction().as_str(), "error": e.to_string() }),
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&json!({
                "exact": exact.map(machine_number),
                "bounds": bounds,
            }))
            .expect("json values serialize");
            out.push('\n');
            out
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["name", "direction", "value", "clamped", "detail"])
                .unwrap();
            if let Some(x) = exact {
                w.write_record(["exact", "", &format_sig(x, MACHINE_DIGITS), "false", ""])
                    .unwrap();
            }
            for (k, r) in results {
                let row = match r {
                    Ok(r) => [
                        k.name().to_string(),
                        k.direction().as_str().into(),
                        format_sig(r.value, MACHINE_DIGITS),
                        r.clamped.to_string(),
                        detail_text(&r.detail),
                    ],
                    Err(e) => [
                        k.name().into(),
                        k.direction().as_str().into(),
                        String::new(),
                        String::new(),
                        e.to_string(),
                    ],
                };
                w.write_record(&row).unwrap();
            }
            String::from_utf8(w.into_inner().unwrap()).unwrap()
        }
        Format::Markdown => {
            let mut out =
                String::from("| bound | direction | value | detail |\n|---|---|---|---|\n");
            if let Some(x) = exact {
                writeln!(out, "| exact | | {} | |", format_sig(x, HUMAN_DIGITS)).unwrap();
            }
            for (k, r) in results {
                match r {
                    Ok(r) => {
                        let mut value = format_sig(r.display_value(), HUMAN_DIGITS);
                        if r.clamped {
                            write!(value, " (raw {})", format_sig(r.value, HUMAN_DIGITS)).unwrap();
                        }
                        writeln!(
                            out,
                            "| {k} | {} | {value} | {} |",
                            k.direction().as_str(),
                            detail_text(&r.detail)
                        )
                        .unwrap();
                    }
                    Err(e) => {
                        writeln!(out, "| {k} | {} | n/a | {e} |", k.direction().as_str()).unwrap()
                    }
                }
            }
            out
        }
    }
}

fn names(kinds: &[BoundKind]) -> String {
    kinds.iter().map(|k| k.name()).collect::<Vec<_>>().join(";")
}

fn summary_lines(report: &ComparisonReport, digits: usize) -> String {
    let mut out = String::new();
    writeln!(out, "# instances: {}", report.rows.len()).unwrap();
    writeln!(out, "# violations: {}", report.violation_count()).unwrap();
    for s in report.summary() {
        let gap = s
            .mean_gap
            .map_or_else(|| "n/a".to_string(), |g| format_sig(g, digits));
        writeln!(
            out,
            "# {} ({}): evaluated={} mean_gap={} wins={}",
            s.kind,
            s.kind.direction().as_str(),
            s.evaluated,
            gap,
            s.wins
        )
        .unwrap();
    }
    out
}

pub fn render_report(report: &ComparisonReport, format: Format) -> String {
    match format {
        Format::Csv => {
            let mut out = format!(
                "# unionbound batch report; generator={}\n",
                report.algorithm
            );
            let mut w = csv::Writer::from_writer(Vec::new());
            let mut header: Vec<String> =
                ["instance", "family", "seed", "n_events", "n_atoms", "exact"]
                    .map(String::from)
                    .to_vec();
            for k in &report.kinds {
                header.push(k.name().into());
                header.push(format!("{}_rank", k.name()));
            }
            header.push("clamped".into());
            header.push("violations".into());
            w.write_record(&header).unwrap();
            for (i, row) in report.rows.iter().enumerate() {
                let mut rec = vec![
                    i.to_string(),
                    row.config.family.to_string(),
                    row.config.seed.to_string(),
                    row.config.n_events.to_string(),
                    row.n_atoms.to_string(),
                    format_sig(row.comparison.exact, MACHINE_DIGITS),
                ];
                for (col, k) in report.kinds.iter().enumerate() {
                    rec.push(
                        row.comparison
                            .value(*k)
                            .map(|v| format_sig(v, MACHINE_DIGITS))
                            .unwrap_or_default(),
                    );
                    rec.push(row.ranks[col].map(|r| r.to_string()).unwrap_or_default());
                }
                rec.push(names(&row.clamped()));
                rec.push(names(&row.comparison.violations));
                w.write_record(&rec).unwrap();
            }
            out.push_str(&String::from_utf8(w.into_inner().unwrap()).unwrap());
            out.push_str(&summary_lines(report, MACHINE_DIGITS));
            out
        }
        Format::Markdown => {
            let mut out = format!("# generator: {}\n\n", report.algorithm);
            out.push_str("| # | family | N | M | exact |");
            for k in &report.kinds {
                write!(out, " {k} |").unwrap();
            }
            out.push_str(" violations |\n|");
            for _ in 0..report.kinds.len() + 6 {
                out.push_str("---|");
            }
            out.push('\n');
            for (i, row) in report.rows.iter().enumerate() {
                write!(
                    out,
                    "| {i} | {} | {} | {} | {} |",
                    row.config.family,
                    row.config.n_events,
                    row.n_atoms,
                    format_sig(row.comparison.exact, HUMAN_DIGITS)
                )
                .unwrap();
                for k in &report.kinds {
                    match row.comparison.get(*k) {
                        Some(r) => {
                            write!(out, " {} |", format_sig(r.display_value(), HUMAN_DIGITS))
                                .unwrap()
                        }
                        None => out.push_str(" n/a |"),
                    }
                }
                writeln!(out, " {} |", names(&row.comparison.violations)).unwrap();
            }
            out.push('\n');
            out.push_str(&summary_lines(report, HUMAN_DIGITS));
            out
        }
        Format::Json => {
            let rows: Vec<Value> = report
                .rows
                .iter()
                .map(|row| {
                    let bounds: serde_json::Map<String, Value> = report
                        .kinds
                        .iter()
                        .zip(&row.ranks)
                        .map(|(k, rank)| {
                            let v = match row.comparison.get(*k) {
                                Some(r) => json!({ "value": machine_number(r.value), "clamped": r.clamped, "rank": rank }),
                                None => Value::Null,
                            };
                            (k.name().to_string(), v)
                        })
                        .collect();
                    json!({
                        "config": row.config,
                        "n_atoms": row.n_atoms,
                        "exact": machine_number(row.comparison.exact),
                        "bounds": bounds,
                        "violations": row.comparison.violations.iter().map(|k| k.name()).collect::<Vec<_>>(),
                    })
                })
                .collect();
            let summary: Vec<Value> = report
                .summary()
                .into_iter()
                .map(|s| {
                    json!({
                        "name": s.kind.name(),
                        "evaluated": s.evaluated,
                        "mean_gap": s.mean_gap.map(machine_number),
                        "wins": s.wins,
                    })
                })
                .collect();
            let mut out = serde_json::to_string_pretty(&json!({
                "generator": report.algorithm,
                "rows": rows,
                "summary": summary,
            }))
            .expect("json values serialize");
            out.push('\n');
            out
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn significant_digits() {
        assert_eq!(format_sig(2.0 / 3.0, 12), "0.666666666667");
        assert_eq!(format_sig(2.0 / 3.0, 6), "0.666667");
        assert_eq!(format_sig(0.75, 12), "0.75");
        assert_eq!(format_sig(-0.4, 6), "-0.4");
        assert_eq!(format_sig(1.0, 6), "1");
        assert_eq!(format_sig(1.5e-9, 6), "1.5e-9");
        assert_eq!(format_sig(123456.7, 6), "123457");
        assert_eq!(format_sig(0.0, 6), "0");
    }

    #[test]
    fn details_are_one_based() {
        assert_eq!(detail_text(&Detail::Subset(vec![0, 2])), "subset {1 3}");
        assert_eq!(
            detail_text(&Detail::Tree(vec![(0, 1), (0, 2)])),
            "tree 1-2 1-3"
        );
        assert_eq!(
            detail_text(&Detail::Support { k1: 1, k2: 2 }),
            "support (1, 2)"
        );
    }

    #[test]
    fn formats_parse() {
        assert_eq!("md".parse::<Format>().unwrap(), Format::Markdown);
        assert!("xml".parse::<Format>().is_err());
    }
}
