//! Gallot–Kounias lower bound `αᵀ Σ⁻¹ α`.
//!
//! All forms share one incremental path: events are appended in input order
//! to a bordered Cholesky factor of the leading principal submatrix. For
//! each new index `n` the Schur complement
//! `r_n = Σ_nn − β_nᵀ Σ_{n−1}⁻¹ β_n` (with `β_n` the column of
//! intersections with the retained events) decides whether `Σ_n` stays
//! nonsingular, and the bound grows by
//! `(α_n + b_nᵀ α_{n−1})² / r_n` where `b_n = −Σ_{n−1}⁻¹ β_n`.
//!
//! Indices whose residual is numerically zero are skipped: `α` lies in the
//! range of `Σ` for any genuine probability model, so dropping a dependent
//! event leaves the bound unchanged.

use alloc::vec;
use alloc::vec::Vec;

use crate::algorithmic::IndexSubset;
use crate::{BoundKind, BoundResult, Detail, Error, MomentSummary};

/// Relative residual at or below which an index is treated as linearly dependent.
pub const SKIP_THRESHOLD: f64 = 1e-10;
/// Residuals below this are reported as an inconsistent summary.
pub const NEGATIVE_RESIDUAL_LIMIT: f64 = -1e-6;
/// Smallest admissible quadratic-form denominator in [`gk_rayleigh`].
pub const RAYLEIGH_MIN_DENOMINATOR: f64 = 1e-15;

/// Outcome of appending one index to a [`SymmetricSolveWorkspace`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Step {
    Retained { residual: f64, increment: f64 },
    Skipped { residual: f64 },
}

impl Step {
    pub fn residual(&self) -> f64 {
        match *self {
            Step::Retained { residual, .. } | Step::Skipped { residual } => residual,
        }
    }
}

/// Cholesky factor `L Lᵀ = Σ_R` of the retained principal submatrix, with
/// `z = L⁻¹ α_R` so that the running bound is `‖z‖²`.
#[derive(Debug, Clone, Default)]
pub struct SymmetricSolveWorkspace {
    retained: Vec<usize>,
    // packed rows of L: row r holds r + 1 entries
    factor: Vec<f64>,
    z: Vec<f64>,
    value: f64,
}

impl SymmetricSolveWorkspace {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn dimension(&self) -> usize {
        self.retained.len()
    }

    pub fn retained(&self) -> &[usize] {
        &self.retained
    }

    /// GK bound of the retained events.
    pub fn value(&self) -> f64 {
        self.value
    }

    fn row(&self, r: usize) -> &[f64] {
        let start = r * (r + 1) / 2;
        &self.factor[start..start + r + 1]
    }

    /// Solves `L y = rhs`.
    fn forward(&self, rhs: &[f64]) -> Vec<f64> {
        let mut y = Vec::with_capacity(rhs.len());
        for (r, &b) in rhs.iter().enumerate() {
            let row = self.row(r);
            let s: f64 = row[..r].iter().zip(&y).map(|(l, y)| l * y).sum();
            y.push((b - s) / row[r]);
        }
        y
    }

    /// `(Σ_nn − β_nᵀ Σ_R⁻¹ β_n, L⁻¹ β_n)` for a candidate index.
    fn schur(&self, ms: &MomentSummary, index: usize) -> (f64, Vec<f64>) {
        let cross: Vec<f64> = self.retained.iter().map(|&j| ms.sigma(j, index)).collect();
        let y = self.forward(&cross);
        let residual = ms.sigma(index, index) - y.iter().map(|v| v * v).sum::<f64>();
        (residual, y)
    }

    /// Schur complement of `index` against the retained events.
    pub fn residual(&self, ms: &MomentSummary, index: usize) -> f64 {
        self.schur(ms, index).0
    }

    /// Borders the factor with `index`, or skips it when its residual is at
    /// or below `SKIP_THRESHOLD · max(1, α_index)`.
    pub fn push(&mut self, ms: &MomentSummary, index: usize) -> Step {
        let (residual, y) = self.schur(ms, index);
        let alpha_n = ms.alpha()[index];
        if residual <= SKIP_THRESHOLD * f64::max(1.0, alpha_n) {
            return Step::Skipped { residual };
        }
        // α_n + b_nᵀ α_R, with b_nᵀ α_R = −(L⁻¹β_n)ᵀ(L⁻¹α_R)
        let projected = alpha_n - y.iter().zip(&self.z).map(|(a, b)| a * b).sum::<f64>();
        let increment = projected * projected / residual;
        let pivot = libm::sqrt(residual);
        self.factor.extend_from_slice(&y);
        self.factor.push(pivot);
        self.z.push(projected / pivot);
        self.retained.push(index);
        self.value += increment;
        Step::Retained {
            residual,
            increment,
        }
    }

    /// `c` with `Σ_R c = α_R`, indexed like [`retained`](Self::retained).
    pub fn coefficients(&self) -> Vec<f64> {
        let d = self.dimension();
        let mut c = self.z.clone();
        for r in (0..d).rev() {
            c[r] /= self.row(r)[r];
            let cr = c[r];
            for (k, l) in self.row(r)[..r].iter().enumerate() {
                c[k] -= l * cr;
            }
        }
        c
    }
}

/// Full trace of the iterative evaluation.
#[derive(Debug, Clone, PartialEq)]
pub struct GkReport {
    pub value: f64,
    pub retained: Vec<usize>,
    /// Indices dropped for rank deficiency.
    pub skipped: Vec<usize>,
    /// `Σ_nn − β_nᵀ Σ_{n−1}⁻¹ β_n` for every index, in input order.
    pub residuals: Vec<f64>,
    /// Running bound after each index, in input order.
    pub running: Vec<f64>,
    /// Coefficient vector over all indices; skipped entries are 0.
    pub coefficients: Vec<f64>,
}

/// GK bound computed one event at a time.
pub fn gk_iterative(ms: &MomentSummary) -> Result<GkReport, Error> {
    let n = ms.n_events();
    let mut ws = SymmetricSolveWorkspace::new();
    let mut skipped = Vec::new();
    let mut residuals = Vec::with_capacity(n);
    let mut running = Vec::with_capacity(n);
    for index in 0..n {
        let step = ws.push(ms, index);
        let residual = step.residual();
        if residual < NEGATIVE_RESIDUAL_LIMIT {
            return Err(Error::Inconsistent {
                what: "negative Schur residual",
                index,
                value: residual,
            });
        }
        if let Step::Skipped { .. } = step {
            skipped.push(index);
        }
        residuals.push(residual);
        running.push(ws.value());
    }
    let mut coefficients = vec![0.0; n];
    for (&i, c) in ws.retained().iter().zip(ws.coefficients()) {
        coefficients[i] = c;
    }
    Ok(GkReport {
        value: ws.value(),
        retained: ws.retained().to_vec(),
        skipped,
        residuals,
        running,
        coefficients,
    })
}

/// `αᵀ Σ⁻¹ α`, restricted to a maximal nonsingular principal subsystem when
/// `Σ` is singular. Detail carries the coefficient vector `c̃`.
pub fn gk_direct(ms: &MomentSummary) -> Result<BoundResult, Error> {
    let report = gk_iterative(ms)?;
    Ok(BoundResult::new(BoundKind::Gk, report.value)
        .with_detail(Detail::Coefficients(report.coefficients)))
}

/// GK bound using only the events in `subset`; never exceeds [`gk_direct`].
pub fn gk_subset(ms: &MomentSummary, subset: &IndexSubset) -> Result<BoundResult, Error> {
    let restricted = ms.restrict(subset.indices())?;
    let report = gk_iterative(&restricted)?;
    let mut coefficients = vec![0.0; ms.n_events()];
    for (&i, c) in subset.indices().iter().zip(report.coefficients) {
        coefficients[i] = c;
    }
    Ok(BoundResult::new(BoundKind::Gk, report.value)
        .with_detail(Detail::Coefficients(coefficients)))
}

/// `(Σ_i c_i α_i)² / Σ_i Σ_k c_i c_k Σ_ik`; maximized at `c = c̃`.
pub fn gk_rayleigh(ms: &MomentSummary, c: &[f64]) -> Result<f64, Error> {
    let n = ms.n_events();
    if c.len() != n {
        return Err(Error::InvalidInput(
            "coefficient vector length must equal the event count",
        ));
    }
    let numerator: f64 = c.iter().zip(ms.alpha()).map(|(c, a)| c * a).sum();
    let denominator: f64 = (0..n)
        .map(|i| {
            c[i] * ms
                .sigma_row(i)
                .iter()
                .zip(c)
                .map(|(s, ck)| s * ck)
                .sum::<f64>()
        })
        .sum();
    if denominator <= RAYLEIGH_MIN_DENOMINATOR {
        return Err(Error::DegenerateDenominator(denominator));
    }
    Ok(numerator * numerator / denominator)
}

/// Schur residual `Σ_nn − β_nᵀ Σ_{n−1}⁻¹ β_n` of event `n` (0-based)
/// against events `0..n`. For a genuine probability model it is never
/// negative. Dependent earlier events are dropped as in [`gk_iterative`].
pub fn residual_condition(ms: &MomentSummary, n: usize) -> Result<f64, Error> {
    if n >= ms.n_events() {
        return Err(Error::IndexOutOfRange {
            index: n,
            n: ms.n_events(),
        });
    }
    let mut ws = SymmetricSolveWorkspace::new();
    for index in 0..n {
        ws.push(ms, index);
    }
    Ok(ws.residual(ms, n))
}
