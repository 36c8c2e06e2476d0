//! Stationary distribution of a [`Generator`] and time integration of the
//! master equation.

use std::ops::Index;

use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::generator::Generator;
use crate::params::DotState;

/// Largest deviation of the input sum from 1 accepted by
/// [`StateDistribution::new`].
pub const NORMALIZATION_TOLERANCE: f64 = 1e-9;

/// Negative entries down to this size are treated as rounding noise.
const CLAMP_TOLERANCE: f64 = 1e-12;

/// Largest accepted `‖G p‖∞` for a returned stationary vector.
pub const RESIDUAL_TOLERANCE: f64 = 1e-10;

/// Pivots smaller than this fraction of the largest matrix entry mark the
/// system singular.
const PIVOT_TOLERANCE: f64 = 1e-13;

/// Probability vector over the four states in canonical order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct StateDistribution([f64; 4]);

impl StateDistribution {
    /// Validates and renormalizes `p`. Entries must be finite and in
    /// `[0, 1]`; the sum must be within [`NORMALIZATION_TOLERANCE`] of 1.
    pub fn new(p: [f64; 4]) -> Result<Self> {
        if p.iter().any(|v| !v.is_finite() || *v < 0.0 || *v > 1.0) {
            return Err(Error::Domain(format!(
                "probabilities must lie in [0, 1]: {p:?}"
            )));
        }
        let sum: f64 = p.iter().sum();
        if (sum - 1.0).abs() > NORMALIZATION_TOLERANCE {
            return Err(Error::Domain(format!("distribution sums to {sum}, not 1")));
        }
        Ok(StateDistribution(p.map(|v| v / sum)))
    }

    pub fn uniform() -> Self {
        StateDistribution([0.25; 4])
    }

    pub fn as_array(&self) -> &[f64; 4] {
        &self.0
    }

    pub fn get(&self, state: DotState) -> f64 {
        self.0[state.index()]
    }

    /// `(P(x=0), P(x=1))`.
    pub fn detector_marginal(&self) -> [f64; 2] {
        [self.0[0] + self.0[1], self.0[2] + self.0[3]]
    }

    /// `(P(y=0), P(y=1))`.
    pub fn system_marginal(&self) -> [f64; 2] {
        [self.0[0] + self.0[2], self.0[1] + self.0[3]]
    }

    pub fn max_abs_diff(&self, other: &StateDistribution) -> f64 {
        self.0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .fold(0.0, f64::max)
    }

    /// Half the L1 distance.
    pub fn total_variation(&self, other: &StateDistribution) -> f64 {
        0.5 * self
            .0
            .iter()
            .zip(other.0.iter())
            .map(|(a, b)| (a - b).abs())
            .sum::<f64>()
    }
}

impl Index<usize> for StateDistribution {
    type Output = f64;

    fn index(&self, index: usize) -> &f64 {
        &self.0[index]
    }
}

impl Serialize for StateDistribution {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

/// Stationary distribution of `generator`.
///
/// Solves `G p = 0` with the first equation replaced by `Σ p = 1`.
pub fn steady_state(generator: &Generator) -> Result<StateDistribution> {
    steady_state_replacing_row(generator, 0)
}

/// As [`steady_state`], replacing equation `row` with the normalization.
pub fn steady_state_replacing_row(generator: &Generator, row: usize) -> Result<StateDistribution> {
    assert!(row < 4, "row index out of range: {row}");
    let mut a = *generator.matrix();
    a[row] = [1.0; 4];
    let mut b = [0.0; 4];
    b[row] = 1.0;

    let raw = solve_dense(a, b).map_err(|pivot| Error::Singular {
        generator: Box::new(*generator),
        pivot,
    })?;
    let p = clamp_and_normalize(raw)?;

    let residual = generator
        .apply(p.as_array())
        .iter()
        .fold(0.0f64, |acc, r| acc.max(r.abs()));
    if !(residual <= RESIDUAL_TOLERANCE) {
        return Err(Error::Numerical(format!(
            "steady-state residual {residual:e} exceeds {RESIDUAL_TOLERANCE:e}"
        )));
    }
    Ok(p)
}

/// Gaussian elimination with partial pivoting. On failure returns the
/// offending pivot.
fn solve_dense(mut a: [[f64; 4]; 4], mut b: [f64; 4]) -> std::result::Result<[f64; 4], f64> {
    let scale = a.iter().flatten().fold(0.0f64, |m, v| m.max(v.abs()));
    let tolerance = PIVOT_TOLERANCE * scale;
    for col in 0..4 {
        let pivot_row = (col..4)
            .max_by(|&i, &j| a[i][col].abs().total_cmp(&a[j][col].abs()))
            .expect("nonempty range");
        let pivot = a[pivot_row][col];
        if !(pivot.abs() > tolerance) {
            return Err(pivot);
        }
        a.swap(col, pivot_row);
        b.swap(col, pivot_row);
        for r in col + 1..4 {
            let factor = a[r][col] / pivot;
            if factor == 0.0 {
                continue;
            }
            for c in col..4 {
                a[r][c] -= factor * a[col][c];
            }
            b[r] -= factor * b[col];
        }
    }
    let mut x = [0.0; 4];
    for r in (0..4).rev() {
        let tail: f64 = (r + 1..4).map(|c| a[r][c] * x[c]).sum();
        x[r] = (b[r] - tail) / a[r][r];
    }
    Ok(x)
}

fn clamp_and_normalize(raw: [f64; 4]) -> Result<StateDistribution> {
    let mut p = raw;
    for v in p.iter_mut() {
        if !v.is_finite() || *v < -CLAMP_TOLERANCE || *v > 1.0 + CLAMP_TOLERANCE {
            return Err(Error::Numerical(format!(
                "stationary solution out of range: {raw:?}"
            )));
        }
        *v = v.clamp(0.0, 1.0);
    }
    let sum: f64 = p.iter().sum();
    StateDistribution::new(p.map(|v| v / sum))
}

/// Time step used when [`evolve`] is called without one.
pub fn auto_time_step(generator: &Generator) -> f64 {
    0.1 / generator.max_exit_rate()
}

/// Integrates `dp/dt = G p` from `p0` up to `t_end` with classical RK4.
///
/// With `dt = None` the step is `0.1 / max_j |G[j][j]|`. The step is shrunk
/// so that a whole number of steps lands on `t_end`.
pub fn evolve(
    generator: &Generator,
    p0: &StateDistribution,
    t_end: f64,
    dt: Option<f64>,
) -> Result<StateDistribution> {
    if !(t_end > 0.0) || !t_end.is_finite() {
        return Err(Error::Domain(format!(
            "t_end must be positive and finite, got {t_end}"
        )));
    }
    let requested = match dt {
        Some(dt) => dt,
        None => auto_time_step(generator),
    };
    if !(requested > 0.0) || !requested.is_finite() {
        return Err(Error::Domain(format!(
            "time step must be positive and finite, got {requested}"
        )));
    }
    let n_steps = (t_end / requested).ceil().max(1.0);
    if n_steps > 1e12 {
        return Err(Error::Domain(format!(
            "{n_steps:e} integration steps requested"
        )));
    }
    let n_steps = n_steps as u64;
    let h = t_end / n_steps as f64;

    let axpy = |p: &[f64; 4], k: &[f64; 4], s: f64| -> [f64; 4] {
        std::array::from_fn(|i| p[i] + s * k[i])
    };

    let mut p = *p0.as_array();
    for step in 0..n_steps {
        let k1 = generator.apply(&p);
        let k2 = generator.apply(&axpy(&p, &k1, 0.5 * h));
        let k3 = generator.apply(&axpy(&p, &k2, 0.5 * h));
        let k4 = generator.apply(&axpy(&p, &k3, h));
        for i in 0..4 {
            p[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        let drift = (p.iter().sum::<f64>() - 1.0).abs();
        if !(drift <= NORMALIZATION_TOLERANCE) {
            return Err(Error::Numerical(format!(
                "probability mass drifted by {drift:e} at step {step}"
            )));
        }
    }
    clamp_and_normalize(p)
}
