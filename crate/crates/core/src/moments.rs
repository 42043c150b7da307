use alloc::vec::Vec;
use core::fmt;

use crate::Error;

/// Consistency tolerance for user-supplied summaries (which may come from rounded tables).
pub const USER_TOLERANCE: f64 = 1e-9;
/// Consistency tolerance for summaries computed from an [`EventSystem`](crate::EventSystem).
pub const INTERNAL_TOLERANCE: f64 = 1e-12;

/// The partial information every bound consumes.
///
/// `alpha[i] = P(A_i)` and `sigma(i, j) = P(A_i ∩ A_j)`; the derived
/// quantities are `beta[i] = Σ_{j≠i} sigma(i, j)`,
/// `gamma[i] = alpha[i] + beta[i]`, `theta1 = Σ_i alpha[i]` and
/// `theta2 = Σ_{i<j} sigma(i, j)`.
///
/// A summary can be built directly from numbers; [`validate_summary`]
/// reports inconsistencies but nothing here refuses them.
#[derive(Debug, Clone, PartialEq)]
pub struct MomentSummary {
    alpha: Vec<f64>,
    sigma: Vec<f64>,
    beta: Vec<f64>,
    gamma: Vec<f64>,
    theta1: f64,
    theta2: f64,
}

impl MomentSummary {
    /// Build from individual probabilities and the `N×N` pairwise matrix.
    pub fn from_moments(alpha: Vec<f64>, sigma: Vec<Vec<f64>>) -> Result<Self, Error> {
        let n = alpha.len();
        if n == 0 {
            return Err(Error::InvalidInput(
                "a moment summary needs at least one event",
            ));
        }
        if sigma.len() != n || sigma.iter().any(|row| row.len() != n) {
            return Err(Error::InvalidInput(
                "sigma must be an N×N matrix matching alpha",
            ));
        }
        let flat: Vec<f64> = sigma.into_iter().flatten().collect();
        if alpha.iter().chain(&flat).any(|x| !x.is_finite()) {
            return Err(Error::InvalidInput("moments must be finite"));
        }
        Ok(Self::from_parts(alpha, flat))
    }

    /// `sigma` is row-major `n×n`.
    pub(crate) fn from_parts(alpha: Vec<f64>, sigma: Vec<f64>) -> Self {
        let n = alpha.len();
        debug_assert_eq!(sigma.len(), n * n);
        let beta: Vec<f64> = (0..n)
            .map(|i| (0..n).filter(|&j| j != i).map(|j| sigma[i * n + j]).sum())
            .collect();
        let gamma = alpha.iter().zip(&beta).map(|(a, b)| a + b).collect();
        let theta1 = alpha.iter().sum();
        let theta2 = (0..n)
            .flat_map(|i| (i + 1..n).map(move |j| (i, j)))
            .map(|(i, j)| sigma[i * n + j])
            .sum();
        MomentSummary {
            alpha,
            sigma,
            beta,
            gamma,
            theta1,
            theta2,
        }
    }

    /// Summary of the events at `indices` (0-based, in the given order).
    pub fn restrict(&self, indices: &[usize]) -> Result<Self, Error> {
        let n = self.n_events();
        if let Some(&bad) = indices.iter().find(|&&i| i >= n) {
            return Err(Error::IndexOutOfRange { index: bad, n });
        }
        if indices.is_empty() {
            return Err(Error::InvalidInput("cannot restrict to an empty index set"));
        }
        let alpha = indices.iter().map(|&i| self.alpha[i]).collect();
        let sigma = indices
            .iter()
            .flat_map(|&i| indices.iter().map(move |&j| (i, j)))
            .map(|(i, j)| self.sigma(i, j))
            .collect();
        Ok(Self::from_parts(alpha, sigma))
    }

    pub fn n_events(&self) -> usize {
        self.alpha.len()
    }

    pub fn alpha(&self) -> &[f64] {
        &self.alpha
    }

    pub fn sigma(&self, i: usize, j: usize) -> f64 {
        self.sigma[i * self.n_events() + j]
    }

    pub fn sigma_row(&self, i: usize) -> &[f64] {
        let n = self.n_events();
        &self.sigma[i * n..(i + 1) * n]
    }

    pub fn beta(&self) -> &[f64] {
        &self.beta
    }

    pub fn gamma(&self) -> &[f64] {
        &self.gamma
    }

    pub fn theta1(&self) -> f64 {
        self.theta1
    }

    pub fn theta2(&self) -> f64 {
        self.theta2
    }

    /// Matrix rows as nested vectors, for serialization.
    pub fn sigma_rows(&self) -> Vec<Vec<f64>> {
        (0..self.n_events())
            .map(|i| self.sigma_row(i).to_vec())
            .collect()
    }
}

/// One broken consistency condition of a [`MomentSummary`]. Indices are 0-based.
#[derive(Debug, Clone, PartialEq)]
pub enum Violation {
    NegativeAlpha {
        i: usize,
    },
    NegativePair {
        i: usize,
        j: usize,
    },
    Asymmetric {
        i: usize,
        j: usize,
    },
    DiagonalMismatch {
        i: usize,
    },
    /// `P(A_i ∩ A_j) > min(P(A_i), P(A_j))`.
    PairExceedsIndividual {
        i: usize,
        j: usize,
    },
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::NegativeAlpha { i } => write!(f, "alpha[{}] is negative", i + 1),
            Violation::NegativePair { i, j } => {
                write!(f, "sigma[{}][{}] is negative", i + 1, j + 1)
            }
            Violation::Asymmetric { i, j } => {
                write!(
                    f,
                    "sigma[{0}][{1}] differs from sigma[{1}][{0}]",
                    i + 1,
                    j + 1
                )
            }
            Violation::DiagonalMismatch { i } => {
                write!(f, "sigma[{0}][{0}] differs from alpha[{0}]", i + 1)
            }
            Violation::PairExceedsIndividual { i, j } => write!(
                f,
                "sigma[{0}][{1}] exceeds min(alpha[{0}], alpha[{1}])",
                i + 1,
                j + 1
            ),
        }
    }
}

/// Every violated invariant of `ms` at tolerance `tol`. Pair conditions are
/// reported once per unordered pair.
pub fn validate_summary(ms: &MomentSummary, tol: f64) -> Vec<Violation> {
    let n = ms.n_events();
    let alpha = ms.alpha();
    let mut out = Vec::new();
    for (i, &a) in alpha.iter().enumerate() {
        if a < -tol {
            out.push(Violation::NegativeAlpha { i });
        }
        if (ms.sigma(i, i) - a).abs() > tol {
            out.push(Violation::DiagonalMismatch { i });
        }
    }
    for i in 0..n {
        for j in i + 1..n {
            let (a, b) = (ms.sigma(i, j), ms.sigma(j, i));
            if (a - b).abs() > tol {
                out.push(Violation::Asymmetric { i, j });
            }
            if a < -tol || b < -tol {
                out.push(Violation::NegativePair { i, j });
            }
            if f64::max(a, b) > f64::min(alpha[i], alpha[j]) + tol {
                out.push(Violation::PairExceedsIndividual { i, j });
            }
        }
    }
    out
}
