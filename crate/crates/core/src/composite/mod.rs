//! Decision procedures for pair state transfer in tensor products and double
//! covers, plus the factorized evolution identities behind them.

mod cover;
mod identities;
mod tensor;

use std::collections::BTreeMap;

use nalgebra::DMatrix;
use num_complex::Complex64;
use num_rational::BigRational;
use serde::{Serialize, Serializer};

use crate::dynamics::{expm_oracle, fidelity_from, realized_phase};
use crate::graph::{Graph, State};
use crate::phase::{ExactTime, Phase};

pub use cover::{check_cor_double_cover, check_double_cover, CoverMode};
pub use identities::{cover_blocks_evolution, tensor_factorized_evolution};
pub use tensor::{
    check_tensor_swap, check_tensor_with_pairpst, check_tensor_with_pst, solve_tensor_time, TensorProblem,
    TensorTheorem,
};

/// Fidelity at or above `1 - FIDELITY_TOL` counts as perfect transfer.
pub const FIDELITY_TOL: f64 = 1e-9;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Outcome {
    Holds,
    /// Conditions of an equivalence theorem fail: no transfer at this time.
    DoesNotHold,
    /// Conditions of a sufficient-only theorem fail: the theorem is silent.
    FailsConditions,
    /// The exact conditions hold but the simulator disagrees.
    RefutedNumerically,
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct Condition {
    pub pass: bool,
    pub detail: String,
}

impl Condition {
    pub fn pass(detail: impl Into<String>) -> Self {
        Self { pass: true, detail: detail.into() }
    }

    pub fn fail(detail: impl Into<String>) -> Self {
        Self { pass: false, detail: detail.into() }
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct NumericCheck {
    pub fidelity: f64,
    pub phase_re: f64,
    pub phase_im: f64,
    /// `|realized - predicted|` when a phase is predicted and fidelity is 1.
    pub phase_error: Option<f64>,
    /// Exact verdict and simulator agree.
    pub consistent: bool,
}

fn ser_rational<S: Serializer>(q: &Option<BigRational>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match q {
        Some(q) => s.serialize_some(&q.to_string()),
        None => s.serialize_none(),
    }
}

#[derive(Debug, Clone, Serialize)]
pub struct CompositeVerdict {
    pub theorem: &'static str,
    pub product: String,
    pub holds: bool,
    pub outcome: Outcome,
    /// Whether the theorem is an equivalence (both directions).
    pub equivalence: bool,
    pub t: Option<ExactTime>,
    /// `t / tau`
    #[serde(serialize_with = "ser_rational")]
    pub q: Option<BigRational>,
    pub tau: Option<ExactTime>,
    pub lambda: Option<Phase>,
    pub p: Option<u64>,
    pub per_condition: BTreeMap<String, Condition>,
    pub derived_pairs: (State, State),
    /// Phase `χ` the theorem predicts for `U(t) from = χ to`.
    pub predicted_phase: Option<Phase>,
    pub nonexistence: Option<String>,
    pub numeric: Option<NumericCheck>,
    pub warnings: Vec<String>,
}

impl CompositeVerdict {
    fn new(theorem: &'static str, product: &Graph, equivalence: bool, from: State, to: State) -> Self {
        Self {
            theorem,
            product: product.name().to_string(),
            holds: false,
            outcome: if equivalence { Outcome::DoesNotHold } else { Outcome::FailsConditions },
            equivalence,
            t: None,
            q: None,
            tau: None,
            lambda: None,
            p: None,
            per_condition: BTreeMap::new(),
            derived_pairs: (from, to),
            predicted_phase: None,
            nonexistence: None,
            numeric: None,
            warnings: Vec::new(),
        }
    }

    fn set(&mut self, id: impl Into<String>, c: Condition) {
        self.per_condition.insert(id.into(), c);
    }

    fn finish(&mut self) {
        self.holds = !self.per_condition.is_empty() && self.per_condition.values().all(|c| c.pass);
        self.outcome = match (self.holds, self.equivalence) {
            (true, _) => Outcome::Holds,
            (false, true) => Outcome::DoesNotHold,
            (false, false) => Outcome::FailsConditions,
        };
    }

    /// Failing condition ids.
    pub fn failures(&self) -> Vec<&str> {
        self.per_condition.iter().filter(|(_, c)| !c.pass).map(|(k, _)| k.as_str()).collect()
    }

    /// Simulates the walk on `product` (series oracle, no spectral data) at
    /// the verdict's time and records the measured fidelity and phase.
    pub fn verify_on(&mut self, product: &Graph) {
        self.verify_on_with(product, FIDELITY_TOL);
    }

    /// [`verify_on`](Self::verify_on) with fidelity tolerance `tol`; phases
    /// must then match within `10 tol`.
    pub fn verify_on_with(&mut self, product: &Graph, tol: f64) {
        let Some(t) = self.t.as_ref() else {
            return;
        };
        let l = product.laplacian().map(|x| x as f64);
        let check = measure(&l, t.to_f64(), &self.derived_pairs, self.predicted_phase.as_ref(), tol);
        let perfect = check.fidelity >= 1.0 - tol;
        let phase_ok = check.phase_error.is_none_or(|e| e < 10.0 * tol);
        let consistent = if self.holds {
            perfect && phase_ok
        } else {
            !self.equivalence || !perfect
        };
        if self.holds && !consistent {
            self.outcome = Outcome::RefutedNumerically;
        }
        self.numeric = Some(NumericCheck { consistent, ..check });
    }
}

fn measure(l: &DMatrix<f64>, t: f64, states: &(State, State), predicted: Option<&Phase>, tol: f64) -> NumericCheck {
    let u = expm_oracle(l, t);
    let fidelity = fidelity_from(&u, &states.0, &states.1);
    let chi: Complex64 = realized_phase(&u, &states.0, &states.1);
    let phase_error = predicted.filter(|_| fidelity >= 1.0 - tol).map(|p| (p.to_complex() - chi).norm());
    NumericCheck { fidelity, phase_re: chi.re, phase_im: chi.im, phase_error, consistent: true }
}
