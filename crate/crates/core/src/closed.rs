//! Closed-form bounds from `P(A_i)`, `Σ_j P(A_i ∩ A_j)` and their totals.
//!
//! Lower: Bonferroni, fractional `θ₁/N`, maximum `max α_i`, Cauchy–Schwarz,
//! Dawson–Sankoff, de Caen and the per-event two-moment bound `kat`.
//! Upper: the union bound and the maximum of the per-event LP.
//!
//! Values are raw formula outputs; see [`BoundResult::clamped`].

use crate::numeric::snapped_floor;
use crate::{BoundKind, BoundResult, Detail, Error, MomentSummary, USER_TOLERANCE};

/// `Σ_i P(A_i)`.
pub fn union_upper(ms: &MomentSummary) -> BoundResult {
    BoundResult::new(BoundKind::Union, ms.theta1())
}

/// `θ₁ − θ₂`. Can be negative.
pub fn bonferroni_lower(ms: &MomentSummary) -> BoundResult {
    BoundResult::new(BoundKind::Bonferroni, ms.theta1() - ms.theta2())
}

/// `θ₁ / N`, optimal given only `θ₁`.
pub fn frac_lower(ms: &MomentSummary) -> BoundResult {
    BoundResult::new(BoundKind::Frac, ms.theta1() / ms.n_events() as f64)
}

/// `max_i P(A_i)`, optimal given only the individual probabilities.
pub fn max_lower(ms: &MomentSummary) -> BoundResult {
    let best = ms.alpha().iter().copied().fold(f64::NEG_INFINITY, f64::max);
    BoundResult::new(BoundKind::Max, best)
}

/// `θ₁² / Σ_{i,j} P(A_i ∩ A_j)` with the sum taken as `2θ₂ + θ₁`; 0 when `θ₁ ≤ 0`.
pub fn cs_lower(ms: &MomentSummary) -> BoundResult {
    let t1 = ms.theta1();
    let value = if t1 > 0.0 {
        t1 * t1 / (2.0 * ms.theta2() + t1)
    } else {
        0.0
    };
    BoundResult::new(BoundKind::Cs, value)
}

/// Dawson–Sankoff bound, the optimal lower bound given `(θ₁, θ₂)`.
///
/// With `q = 2θ₂/θ₁` and `κ = q − ⌊q⌋` the value is
/// `κθ₁²/((2−κ)θ₁ + 2θ₂) + (1−κ)θ₁²/((1−κ)θ₁ + 2θ₂)`; the underlying
/// degree distribution is supported on `k1 = ⌊q⌋ + 1` and `k2 = k1 + 1`.
pub fn ds_lower(ms: &MomentSummary) -> Result<BoundResult, Error> {
    let (t1, t2) = (ms.theta1(), ms.theta2());
    if t2 < 0.0 {
        return Err(Error::Inconsistent {
            what: "negative pairwise total",
            index: 0,
            value: t2,
        });
    }
    if t1 <= 0.0 {
        return Ok(BoundResult::new(BoundKind::Ds, 0.0));
    }
    let q = 2.0 * t2 / t1;
    let fl = snapped_floor(q);
    let kappa = f64::max(q - fl, 0.0);
    let value = kappa * t1 * t1 / ((2.0 - kappa) * t1 + 2.0 * t2)
        + (1.0 - kappa) * t1 * t1 / ((1.0 - kappa) * t1 + 2.0 * t2);
    let k1 = fl as usize + 1;
    Ok(BoundResult::new(BoundKind::Ds, value).with_detail(Detail::Support { k1, k2: k1 + 1 }))
}

/// de Caen bound `Σ_i α_i² / γ_i`; events with `α_i = 0` contribute 0.
pub fn dc_lower(ms: &MomentSummary) -> BoundResult {
    let value = ms
        .alpha()
        .iter()
        .zip(ms.gamma())
        .filter(|(a, _)| **a > 0.0)
        .map(|(a, g)| a * a / g)
        .sum();
    BoundResult::new(BoundKind::Dc, value)
}

/// One event's term of the KAT bound: the minimum of `Σ_k a(k)/k` over
/// degree distributions with mass `α` and first moment `γ`.
///
/// With `r = γ/α` and `k = ⌊r⌋` the term is `[1/k − (r − k)/((k+1)k)]·α`.
pub fn kat_term(alpha: f64, gamma: f64) -> Result<f64, Error> {
    if alpha <= 0.0 {
        return Ok(0.0);
    }
    if gamma < alpha - USER_TOLERANCE {
        return Err(Error::Inconsistent {
            what: "gamma below alpha",
            index: 0,
            value: gamma - alpha,
        });
    }
    let ratio = f64::max(gamma / alpha, 1.0);
    let k = f64::max(snapped_floor(ratio), 1.0);
    let frac = f64::max(ratio - k, 0.0);
    Ok((1.0 / k - frac / ((1.0 + k) * k)) * alpha)
}

/// Per-event two-moment bound: sum of [`kat_term`] over events.
pub fn kat_lower(ms: &MomentSummary) -> Result<BoundResult, Error> {
    let mut total = 0.0;
    for (i, (&a, &g)) in ms.alpha().iter().zip(ms.gamma()).enumerate() {
        total += kat_term(a, g).map_err(|e| match e {
            Error::Inconsistent { what, value, .. } => Error::Inconsistent {
                what,
                index: i,
                value,
            },
            other => other,
        })?;
    }
    Ok(BoundResult::new(BoundKind::Kat, total))
}

/// `Σ_i α_i − (1/N) Σ_i β_i`, the maximum of the per-event LP.
pub fn new1_upper(ms: &MomentSummary) -> BoundResult {
    let n = ms.n_events() as f64;
    let beta_total: f64 = ms.beta().iter().sum();
    BoundResult::new(BoundKind::New1, ms.theta1() - beta_total / n)
}
