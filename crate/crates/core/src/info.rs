//! Information measures on four-state distributions, in nats.
//!
//! The integrated-information measure compares the interacting steady state
//! `p` with the steady state `q` of the same device with the Coulomb
//! coupling switched off, `Φ = D_KL(p || q)`. `q` is the full joint
//! stationary distribution at `u = 0`, not a product of marginals; the
//! textbook mutual information (joint against the product of its own
//! marginals) is available separately as [`standard_mutual_information`].

use std::fmt;

use serde::{Serialize, Serializer};

use crate::error::Result;
use crate::generator::build_generator;
use crate::params::{Param, SystemParams};
use crate::solver::{steady_state, StateDistribution};

/// Value of a Kullback–Leibler divergence. Support mismatch is reported as
/// [`Divergence::Infinite`] rather than an overflowed float.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum Divergence {
    Finite(f64),
    Infinite,
}

impl Divergence {
    pub fn is_finite(self) -> bool {
        matches!(self, Divergence::Finite(_))
    }

    /// The value as a float, `+inf` for [`Divergence::Infinite`].
    pub fn value(self) -> f64 {
        match self {
            Divergence::Finite(v) => v,
            Divergence::Infinite => f64::INFINITY,
        }
    }
}

impl fmt::Display for Divergence {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Divergence::Finite(v) => write!(f, "{v}"),
            Divergence::Infinite => f.write_str("inf"),
        }
    }
}

impl Serialize for Divergence {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Divergence::Finite(v) => serializer.serialize_f64(*v),
            Divergence::Infinite => serializer.serialize_str("inf"),
        }
    }
}

/// Per-state contributions `p_i ln(p_i / q_i)`, with `0 ln(0/q) = 0`.
pub fn kl_terms(p: &StateDistribution, q: &StateDistribution) -> [f64; 4] {
    std::array::from_fn(|i| {
        let (pi, qi) = (p[i], q[i]);
        if pi == 0.0 {
            0.0
        } else if qi == 0.0 {
            f64::INFINITY
        } else {
            pi * (pi / qi).ln()
        }
    })
}

fn sum_terms(terms: &[f64; 4]) -> Divergence {
    if terms.iter().any(|t| t.is_infinite()) {
        return Divergence::Infinite;
    }
    let total: f64 = terms.iter().sum();
    // rounding can leave a tiny negative sum for p ≈ q
    Divergence::Finite(if total > 0.0 { total } else { 0.0 })
}

/// `D_KL(p || q)`.
pub fn kl_divergence(p: &StateDistribution, q: &StateDistribution) -> Divergence {
    sum_terms(&kl_terms(p, q))
}

/// `-Σ p ln p`, in `[0, ln 4]`.
pub fn shannon_entropy(p: &StateDistribution) -> f64 {
    let h: f64 = p
        .as_array()
        .iter()
        .filter(|v| **v > 0.0)
        .map(|v| -v * v.ln())
        .sum();
    h.max(0.0)
}

/// KL divergence of `p` from the product of its detector and system
/// marginals.
pub fn standard_mutual_information(p: &StateDistribution) -> f64 {
    let mx = p.detector_marginal();
    let my = p.system_marginal();
    let product = [mx[0] * my[0], mx[0] * my[1], mx[1] * my[0], mx[1] * my[1]];
    let terms: [f64; 4] = std::array::from_fn(|i| {
        let pi = p[i];
        // product[i] >= p[i] > 0 whenever p[i] > 0
        if pi == 0.0 {
            0.0
        } else {
            pi * (pi / product[i]).ln()
        }
    });
    terms.iter().sum::<f64>().max(0.0)
}

/// Connected and disconnected steady states with their divergence.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct PhiResult {
    pub phi: Divergence,
    pub p: StateDistribution,
    pub q: StateDistribution,
    pub per_state_terms: [f64; 4],
}

/// Steady state with the Coulomb coupling removed, every other field of
/// `params` unchanged.
pub fn disconnected_distribution(params: &SystemParams) -> Result<StateDistribution> {
    steady_state(&build_generator(&params.with(Param::U, 0.0))?)
}

/// `Φ` for `params`, disconnecting by setting `u = 0` and keeping all other
/// values, including `mu_d`, as given.
pub fn phi_mi(params: &SystemParams) -> Result<PhiResult> {
    phi_mi_against(params, &params.with(Param::U, 0.0))
}

/// `Φ` with an explicitly supplied disconnected parameter set. Used when
/// the disconnected device is not simply `params` with `u = 0`, e.g. when
/// `mu_d` is defined relative to `u`.
pub fn phi_mi_against(connected: &SystemParams, disconnected: &SystemParams) -> Result<PhiResult> {
    let p = steady_state(&build_generator(connected)?)?;
    let q = steady_state(&build_generator(disconnected)?)?;
    let per_state_terms = kl_terms(&p, &q);
    Ok(PhiResult {
        phi: sum_terms(&per_state_terms),
        p,
        q,
        per_state_terms,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::LN_2;

    fn dist(p: [f64; 4]) -> StateDistribution {
        StateDistribution::new(p).unwrap()
    }

    #[test]
    fn kl_reference_values() {
        let u = StateDistribution::uniform();
        assert_eq!(kl_divergence(&u, &u), Divergence::Finite(0.0));
        let half = kl_divergence(&dist([0.5, 0.5, 0.0, 0.0]), &u).value();
        assert!((half - LN_2).abs() < 1e-15);
        let one = kl_divergence(&dist([0.0, 0.0, 1.0, 0.0]), &u).value();
        assert!((one - 4f64.ln()).abs() < 1e-15);
        assert_eq!(
            kl_divergence(&dist([1.0, 0.0, 0.0, 0.0]), &dist([0.0, 1.0, 0.0, 0.0])),
            Divergence::Infinite
        );
    }

    #[test]
    fn entropy_reference_values() {
        assert!((shannon_entropy(&StateDistribution::uniform()) - 4f64.ln()).abs() < 1e-15);
        assert_eq!(shannon_entropy(&dist([1.0, 0.0, 0.0, 0.0])), 0.0);
        assert!((shannon_entropy(&dist([0.5, 0.5, 0.0, 0.0])) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn standard_mi_reference_values() {
        let product = dist([0.3 * 0.6, 0.3 * 0.4, 0.7 * 0.6, 0.7 * 0.4]);
        assert!(standard_mutual_information(&product) < 1e-15);
        let correlated = dist([0.5, 0.0, 0.0, 0.5]);
        assert!((standard_mutual_information(&correlated) - LN_2).abs() < 1e-15);
    }

    #[test]
    fn zero_coupling_gives_zero_phi() {
        let r = phi_mi(&SystemParams::reference()).unwrap();
        assert_eq!(r.phi, Divergence::Finite(0.0));
        assert_eq!(r.p, r.q);
        assert_eq!(r.per_state_terms, [0.0; 4]);
    }

    #[test]
    fn disconnected_is_idempotent_at_zero_coupling() {
        let params = SystemParams::reference();
        let q = disconnected_distribution(&params).unwrap();
        let p = steady_state(&build_generator(&params).unwrap()).unwrap();
        assert_eq!(p, q);
    }

    #[test]
    fn aligned_detector_has_even_marginal() {
        // mu_d = eps_x: the detector fill fraction is exactly 1/2
        let q = disconnected_distribution(&SystemParams::reference()).unwrap();
        let m = q.detector_marginal();
        assert!((m[0] - 0.5).abs() < 1e-14);
    }

    #[test]
    fn phi_is_sum_of_terms() {
        let params = SystemParams::reference()
            .with(Param::U, 1.7)
            .with(Param::MuD, 1.85);
        let r = phi_mi_against(&params, &SystemParams::reference()).unwrap();
        let sum: f64 = r.per_state_terms.iter().sum();
        assert!((r.phi.value() - sum).abs() < 1e-12);
        assert!(r.phi.value() > 0.0);
    }

    #[test]
    fn divergence_serializes_infinite_as_string() {
        assert_eq!(
            serde_json::to_string(&Divergence::Infinite).unwrap(),
            "\"inf\""
        );
        assert_eq!(
            serde_json::to_string(&Divergence::Finite(0.0)).unwrap(),
            "0.0"
        );
    }
}
