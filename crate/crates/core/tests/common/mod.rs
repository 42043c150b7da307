#![allow(dead_code)]

use proptest::prelude::*;
use unionbound_core::EventSystem;

/// Event systems with `n_events` in `events` and up to `max_atoms` atoms whose
/// masses sum to a random total in (0, 1].
pub fn event_system(
    events: std::ops::RangeInclusive<usize>,
    max_atoms: usize,
) -> impl Strategy<Value = EventSystem> {
    (events, 1..=max_atoms, 0.05f64..=1.0).prop_flat_map(|(n, m, total)| {
        (
            prop::collection::vec(0.0f64..1.0, m),
            prop::collection::vec(prop::collection::vec(any::<bool>(), m), n),
        )
            .prop_map(move |(weights, membership)| {
                let sum: f64 = weights.iter().sum();
                let masses = if sum > 0.0 {
                    weights
                        .iter()
                        .map(|w| w / sum * total * (1.0 - 1e-15))
                        .collect()
                } else {
                    vec![0.0; weights.len()]
                };
                EventSystem::new(masses, membership).unwrap()
            })
    })
}

pub fn binom2(k: usize) -> f64 {
    (k * k.saturating_sub(1) / 2) as f64
}
