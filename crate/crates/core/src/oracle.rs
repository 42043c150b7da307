//! Independent ground truth for the closed-form bounds.
//!
//! The two-moment linear programs behind the Dawson–Sankoff and KAT bounds
//! are solved by brute-force vertex enumeration (every basic solution of a
//! two-constraint LP has at most two nonzero variables), and the
//! optimality of DS, `θ₁/N` and `max α_i` is witnessed by constructing
//! event systems that attain them.

use alloc::collections::BTreeMap;
use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, EventSystem, MomentSummary};

/// Slack on moment matching when checking feasibility.
pub const FEASIBILITY_SLACK: f64 = 1e-9;
/// Candidate components in `(−SNAP_NEGATIVE, 0)` are treated as 0.
pub const SNAP_NEGATIVE: f64 = 1e-12;

/// Which pair of linear moments the degree distribution `a(1..=N)` must match.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum MomentPair {
    /// `Σ_k k·a(k) = m1`, `Σ_k k²·a(k) = m2` (the DS program).
    Degree,
    /// `Σ_k a(k) = m1`, `Σ_k k·a(k) = m2` (one event's KAT subproblem).
    MassAndDegree,
}

impl MomentPair {
    fn coefficients(self, k: usize) -> (f64, f64) {
        let k = k as f64;
        match self {
            MomentPair::Degree => (k, k * k),
            MomentPair::MassAndDegree => (1.0, k),
        }
    }
}

/// `min Σ_k w(k)·a(k)` over `a ≥ 0` on `k = 1..=N` subject to two moment constraints.
#[derive(Debug, Clone, PartialEq)]
pub struct TwoMomentInstance {
    pub m1: f64,
    pub m2: f64,
    pub max_degree: usize,
    pub constraints: MomentPair,
    /// `objective_weights[k − 1] = w(k)`.
    pub objective_weights: Vec<f64>,
}

impl TwoMomentInstance {
    /// DS program: `m1 = Σ_i P(A_i)`, `m2 = Σ_{i,j} P(A_i ∩ A_j)`, `w ≡ 1`.
    pub fn dawson_sankoff(m1: f64, m2: f64, max_degree: usize) -> Self {
        TwoMomentInstance {
            m1,
            m2,
            max_degree,
            constraints: MomentPair::Degree,
            objective_weights: vec![1.0; max_degree],
        }
    }

    /// KAT subproblem for one event: mass `α_i`, first moment `γ_i`, `w(k) = 1/k`.
    pub fn kat_subproblem(alpha: f64, gamma: f64, max_degree: usize) -> Self {
        TwoMomentInstance {
            m1: alpha,
            m2: gamma,
            max_degree,
            constraints: MomentPair::MassAndDegree,
            objective_weights: (1..=max_degree).map(|k| 1.0 / k as f64).collect(),
        }
    }
}

/// Optimal value and the support `k → a(k)` of an optimal vertex.
#[derive(Debug, Clone, PartialEq)]
pub struct LpSolution {
    pub value: f64,
    pub support: BTreeMap<usize, f64>,
}

/// Solves a [`TwoMomentInstance`] by enumerating every single-point and
/// two-point support, keeping the feasible ones and returning the cheapest.
///
/// Among equal objectives the first candidate in `(k1, k2)` order wins.
pub fn two_moment_min(inst: &TwoMomentInstance) -> Result<LpSolution, Error> {
    let n = inst.max_degree;
    if inst.objective_weights.len() != n {
        return Err(Error::InvalidInput(
            "one objective weight per degree is required",
        ));
    }
    if inst.m1 == 0.0 && inst.m2 == 0.0 {
        return Ok(LpSolution {
            value: 0.0,
            support: BTreeMap::new(),
        });
    }
    let scale = f64::max(1.0, f64::max(inst.m1.abs(), inst.m2.abs()));
    let slack = FEASIBILITY_SLACK * scale;
    let weight = |k: usize| inst.objective_weights[k - 1];
    let mut best: Option<LpSolution> = None;
    let mut offer = |value: f64, support: BTreeMap<usize, f64>| {
        if best.as_ref().is_none_or(|b| value < b.value) {
            best = Some(LpSolution { value, support });
        }
    };

    for k in 1..=n {
        let (p, q) = inst.constraints.coefficients(k);
        let a = inst.m1 / p;
        if a >= -SNAP_NEGATIVE && (q * a - inst.m2).abs() <= slack {
            let a = a.max(0.0);
            offer(weight(k) * a, BTreeMap::from([(k, a)]));
        }
    }
    for k1 in 1..=n {
        for k2 in k1 + 1..=n {
            let (p1, q1) = inst.constraints.coefficients(k1);
            let (p2, q2) = inst.constraints.coefficients(k2);
            let det = p1 * q2 - p2 * q1;
            if det.abs() < 1e-300 {
                continue;
            }
            let mut a1 = (inst.m1 * q2 - inst.m2 * p2) / det;
            let mut a2 = (p1 * inst.m2 - q1 * inst.m1) / det;
            if a1 < -SNAP_NEGATIVE || a2 < -SNAP_NEGATIVE {
                continue;
            }
            a1 = a1.max(0.0);
            a2 = a2.max(0.0);
            if (p1 * a1 + p2 * a2 - inst.m1).abs() > slack
                || (q1 * a1 + q2 * a2 - inst.m2).abs() > slack
            {
                continue;
            }
            offer(
                weight(k1) * a1 + weight(k2) * a2,
                BTreeMap::from([(k1, a1), (k2, a2)]),
            );
        }
    }
    best.ok_or(Error::Infeasible)
}

/// One event's KAT subproblem solved by [`two_moment_min`].
pub fn kat_subproblem_min(alpha: f64, gamma: f64, max_degree: usize) -> Result<LpSolution, Error> {
    if alpha < 0.0
        || gamma < alpha - FEASIBILITY_SLACK
        || gamma > max_degree as f64 * alpha + FEASIBILITY_SLACK
    {
        return Err(Error::Infeasible);
    }
    two_moment_min(&TwoMomentInstance::kat_subproblem(alpha, gamma, max_degree))
}

/// Event system built from a degree distribution: an atom of mass `a(k)` for
/// every support point, contained in the first `k` events.
fn from_degree_support(support: &BTreeMap<usize, f64>, n: usize) -> Result<EventSystem, Error> {
    let atoms: Vec<(usize, f64)> = support
        .iter()
        .filter(|(_, &m)| m > 0.0)
        .map(|(&k, &m)| (k, m))
        .collect();
    if atoms.iter().any(|&(k, _)| k > n || k == 0) {
        return Err(Error::Unrealizable("support degree outside 1..=N"));
    }
    if atoms.iter().map(|&(_, m)| m).sum::<f64>() > 1.0 + SNAP_NEGATIVE {
        return Err(Error::Unrealizable("total mass exceeds one"));
    }
    let masses = atoms.iter().map(|&(_, m)| m).collect();
    let membership = (0..n)
        .map(|i| atoms.iter().map(|&(k, _)| i < k).collect())
        .collect();
    EventSystem::new(masses, membership)
}

/// An event system with the same `θ₁` and `θ₂` as `ms` whose union
/// probability equals the Dawson–Sankoff bound.
///
/// The degree distribution comes from [`two_moment_min`], not from the closed
/// form, so the round trip checks the formula against the program.
pub fn construct_ds_achiever(ms: &MomentSummary) -> Result<EventSystem, Error> {
    let n = ms.n_events();
    let (t1, t2) = (ms.theta1(), ms.theta2());
    if t1 <= 0.0 || t2 < 0.0 {
        return Err(Error::Infeasible);
    }
    let lp = two_moment_min(&TwoMomentInstance::dawson_sankoff(t1, 2.0 * t2 + t1, n))?;
    from_degree_support(&lp.support, n)
}

/// One atom of mass `θ₁/N` shared by all `N` events: union `θ₁/N`.
pub fn construct_frac_achiever(theta1: f64, n: usize) -> Result<EventSystem, Error> {
    if n == 0 {
        return Err(Error::InvalidInput(
            "an event system needs at least one event",
        ));
    }
    let mass = theta1 / n as f64;
    if !(0.0..=1.0 + SNAP_NEGATIVE).contains(&mass) {
        return Err(Error::Unrealizable("θ₁/N must lie in [0, 1]"));
    }
    EventSystem::new(vec![mass], vec![vec![true]; n])
}

/// Nested events realizing `alpha`: union `max_i α_i`.
///
/// Events sorted by decreasing probability form a chain; each atom carries
/// the gap between consecutive sorted probabilities and sits in every event
/// at least that likely. Zero gaps produce no atom.
pub fn construct_max_achiever(alpha: &[f64]) -> Result<EventSystem, Error> {
    if alpha.is_empty() {
        return Err(Error::InvalidInput(
            "an event system needs at least one event",
        ));
    }
    if alpha
        .iter()
        .any(|a| !(0.0..=1.0 + SNAP_NEGATIVE).contains(a))
    {
        return Err(Error::Unrealizable("probabilities must lie in [0, 1]"));
    }
    let mut order: Vec<usize> = (0..alpha.len()).collect();
    order.sort_by(|&a, &b| alpha[b].total_cmp(&alpha[a]).then(a.cmp(&b)));
    let mut rank = vec![0; alpha.len()];
    for (r, &i) in order.iter().enumerate() {
        rank[i] = r;
    }
    let mut masses = Vec::new();
    let mut depth = Vec::new();
    for (r, &i) in order.iter().enumerate() {
        let next = order.get(r + 1).map_or(0.0, |&j| alpha[j]);
        let gap = alpha[i] - next;
        if gap > 0.0 {
            masses.push(gap);
            depth.push(r);
        }
    }
    let membership = (0..alpha.len())
        .map(|i| depth.iter().map(|&d| rank[i] <= d).collect())
        .collect();
    EventSystem::new(masses, membership)
}
