//! Bounds on the probability of a finite union of events.
//!
//! Every bound here consumes a [`MomentSummary`]: the individual
//! probabilities `P(A_i)` and the pairwise intersection matrix
//! `P(A_i ∩ A_j)`. An [`EventSystem`] is a finite probability space (atoms
//! with masses plus an incidence structure) and is the ground truth the
//! bounds are checked against.
//!
//! The crate is `no_std` and only needs `alloc`.
//!
//! ```
//! use unionbound_core::{closed, EventSystem};
//!
//! // A_1 = {x, z}, A_2 = {y, z}, each atom has mass 1/4.
//! let es = EventSystem::new(
//!     vec![0.25, 0.25, 0.25],
//!     vec![vec![true, false, true], vec![false, true, true]],
//! )
//! .unwrap();
//! let ms = es.summarize();
//! assert_eq!(es.union_probability(), 0.75);
//! assert!((closed::ds_lower(&ms).unwrap().value - 0.75).abs() < 1e-12);
//! ```
#![no_std]

extern crate alloc;

pub mod algorithmic;
mod bound;
pub mod closed;
mod error;
mod event;
pub mod gk;
mod moments;
pub(crate) mod numeric;
pub mod oracle;
mod registry;

pub use bound::{BoundResult, Detail, Direction};
pub use error::Error;
pub use event::{DegreeSpectrum, EventSystem, PerEventSpectrum};
pub use moments::{validate_summary, MomentSummary, Violation, INTERNAL_TOLERANCE, USER_TOLERANCE};
pub use registry::{compare, BoundKind, ComparisonRow, Limits, UnknownBound, VIOLATION_TOLERANCE};
