use alloc::vec;
use alloc::vec::Vec;

use crate::{Error, MomentSummary};

/// Slack allowed on the total atom mass before it is rejected as exceeding one.
const MASS_SLACK: f64 = 1e-12;

/// A finite probability space: atoms with masses and `N` events given as
/// rows of a boolean incidence matrix.
///
/// Mass not carried by any atom is the complement of every event. Zero-mass
/// atoms are allowed and contribute nothing anywhere.
#[derive(Debug, Clone, PartialEq)]
pub struct EventSystem {
    masses: Vec<f64>,
    membership: Vec<Vec<bool>>,
}

impl EventSystem {
    /// `membership[i][w]` is true iff atom `w` belongs to event `i`.
    pub fn new(masses: Vec<f64>, membership: Vec<Vec<bool>>) -> Result<Self, Error> {
        if membership.is_empty() {
            return Err(Error::InvalidInput(
                "an event system needs at least one event",
            ));
        }
        if membership.iter().any(|row| row.len() != masses.len()) {
            return Err(Error::InvalidInput(
                "every membership row must have one entry per atom",
            ));
        }
        if masses.iter().any(|m| !m.is_finite() || *m < 0.0) {
            return Err(Error::InvalidInput(
                "atom masses must be finite and non-negative",
            ));
        }
        if masses.iter().sum::<f64>() > 1.0 + MASS_SLACK {
            return Err(Error::InvalidInput("atom masses sum to more than one"));
        }
        Ok(EventSystem { masses, membership })
    }

    pub fn n_events(&self) -> usize {
        self.membership.len()
    }

    pub fn n_atoms(&self) -> usize {
        self.masses.len()
    }

    pub fn masses(&self) -> &[f64] {
        &self.masses
    }

    pub fn membership(&self) -> &[Vec<bool>] {
        &self.membership
    }

    /// Number of events containing atom `atom`.
    pub fn degree(&self, atom: usize) -> usize {
        self.membership.iter().filter(|row| row[atom]).count()
    }

    fn degrees(&self) -> impl Iterator<Item = (usize, f64)> + '_ {
        (0..self.n_atoms()).map(|w| (self.degree(w), self.masses[w]))
    }

    /// Exact `P(∪ A_i)`: total mass of atoms lying in at least one event.
    pub fn union_probability(&self) -> f64 {
        self.degrees().filter(|&(d, _)| d > 0).map(|(_, m)| m).sum()
    }

    pub fn degree_spectrum(&self) -> DegreeSpectrum {
        let mut a = vec![0.0; self.n_events()];
        for (d, m) in self.degrees() {
            if d > 0 && m > 0.0 {
                a[d - 1] += m;
            }
        }
        DegreeSpectrum { a }
    }

    pub fn per_event_spectrum(&self) -> PerEventSpectrum {
        let n = self.n_events();
        let mut data = vec![0.0; n * n];
        for w in 0..self.n_atoms() {
            let m = self.masses[w];
            if m == 0.0 {
                continue;
            }
            let d = self.degree(w);
            for (i, row) in self.membership.iter().enumerate() {
                if row[w] {
                    data[i * n + d - 1] += m;
                }
            }
        }
        PerEventSpectrum { n, data }
    }

    /// Individual and pairwise probabilities computed from the atoms.
    pub fn summarize(&self) -> MomentSummary {
        let n = self.n_events();
        let mut sigma = vec![0.0; n * n];
        for w in 0..self.n_atoms() {
            let m = self.masses[w];
            if m == 0.0 {
                continue;
            }
            for i in 0..n {
                if !self.membership[i][w] {
                    continue;
                }
                for j in i..n {
                    if self.membership[j][w] {
                        sigma[i * n + j] += m;
                    }
                }
            }
        }
        for i in 0..n {
            for j in 0..i {
                sigma[i * n + j] = sigma[j * n + i];
            }
        }
        let alpha = (0..n).map(|i| sigma[i * n + i]).collect();
        MomentSummary::from_parts(alpha, sigma)
    }
}

/// `a(k)`: total mass of union atoms whose degree is exactly `k`, for `k = 1..=N`.
#[derive(Debug, Clone, PartialEq)]
pub struct DegreeSpectrum {
    a: Vec<f64>,
}

impl DegreeSpectrum {
    /// Mass at degree `k` (1-based). Panics when `k` is 0 or above `N`.
    pub fn get(&self, k: usize) -> f64 {
        self.a[k - 1]
    }

    /// Entries for `k = 1..=N`, in order.
    pub fn as_slice(&self) -> &[f64] {
        &self.a
    }

    pub fn max_degree(&self) -> usize {
        self.a.len()
    }

    /// `Σ_k f(k)·a(k)`.
    pub fn moment(&self, f: impl Fn(f64) -> f64) -> f64 {
        self.a
            .iter()
            .enumerate()
            .map(|(i, a)| f((i + 1) as f64) * a)
            .sum()
    }
}

/// `a_i(k)`: mass of atoms inside `A_i` whose degree is exactly `k`.
#[derive(Debug, Clone, PartialEq)]
pub struct PerEventSpectrum {
    n: usize,
    data: Vec<f64>,
}

impl PerEventSpectrum {
    pub fn n_events(&self) -> usize {
        self.n
    }

    /// Mass of atoms in event `event` (0-based) with degree `k` (1-based).
    pub fn get(&self, event: usize, k: usize) -> f64 {
        self.row(event)[k - 1]
    }

    /// `a_i(1..=N)` for one event.
    pub fn row(&self, event: usize) -> &[f64] {
        &self.data[event * self.n..(event + 1) * self.n]
    }

    /// `Σ_i a_i(k) / k`, which recovers the degree spectrum.
    pub fn collapse(&self) -> Vec<f64> {
        (1..=self.n)
            .map(|k| (0..self.n).map(|i| self.get(i, k)).sum::<f64>() / k as f64)
            .collect()
    }
}
