//! Checks for the conditions sparse recovery relies on: coherence and the
//! Welch bound, empirical RIP constants, concentration of random
//! ensembles, and the recovery error bounds.
//!
//! Reports render as flat `key=value` lines via [`KvRecord`].

mod bounds;
mod coherence;
mod concentration;
mod rip;

pub use bounds::{error_bound_constants, stable_embedding_samples, verify_recovery_bound, RecoveryBoundReport};
pub use coherence::{mutual_coherence, welch_bound};
pub use concentration::{concentration_check, concentration_check_fixed, ConcentrationReport};
pub use rip::{
    binomial, estimate_rip, estimate_rip_exhaustive, estimate_rip_monte_carlo, support_deviation, RipEstimate,
    EXHAUSTIVE_LIMIT,
};

/// Flat key-value rendering of a diagnostic report.
pub trait KvRecord {
    fn fields(&self) -> Vec<(&'static str, String)>;

    fn to_kv(&self) -> String {
        self.fields().into_iter().map(|(k, v)| format!("{k}={v}\n")).collect()
    }
}

impl KvRecord for RipEstimate {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("rip.k", self.k.to_string()),
            ("rip.delta_hat", self.delta_hat.to_string()),
            ("rip.trials", self.trials.to_string()),
            ("rip.exhaustive", self.exhaustive.to_string()),
            ("rip.lower_bound", self.is_lower_bound().to_string()),
        ]
    }
}

impl KvRecord for ConcentrationReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        let mut f = vec![
            (
                "concentration.ensemble",
                self.ensemble.map_or_else(|| "fixed".to_string(), |e| e.to_string()),
            ),
            ("concentration.alpha", self.alpha.to_string()),
            ("concentration.m", self.m.to_string()),
            ("concentration.n", self.n.to_string()),
            ("concentration.trials", self.trials.to_string()),
            ("concentration.empirical_tail", self.empirical_tail.to_string()),
        ];
        if let Some(c) = self.fitted_c {
            f.push(("concentration.fitted_c", c.to_string()));
            f.push(("concentration.bound_at_fitted_c", self.bound_at(c).to_string()));
        }
        f
    }
}

impl KvRecord for RecoveryBoundReport {
    fn fields(&self) -> Vec<(&'static str, String)> {
        vec![
            ("bound.lhs", self.lhs.to_string()),
            ("bound.rhs", self.rhs.to_string()),
            ("bound.c0", self.c0.to_string()),
            ("bound.c1", self.c1.to_string()),
            ("bound.slack", self.slack.to_string()),
            ("bound.holds", self.holds.to_string()),
        ]
    }
}
