//! Transition-rate generator of the four-state bipartite jump process.
//!
//! Column convention: `dp/dt = G p`, with `G[i][j]` (i != j) the rate of the
//! jump `j -> i` and each diagonal entry the negated column sum. Only one
//! dot changes occupation per jump, so entries linking states that differ in
//! both coordinates are zero.

use serde::Serialize;

use crate::error::Result;
use crate::params::{
    detector_fill_fraction, system_fill_fraction, DotState, Reservoir, SystemParams,
};

/// Which tunneling barrier a jump crosses.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Channel {
    Detector,
    System(Reservoir),
}

/// A single elementary jump with its rate.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Jump {
    pub from: DotState,
    pub to: DotState,
    pub channel: Channel,
    pub rate: f64,
}

/// Every elementary jump of the model, one per (direction, channel).
///
/// The detector contributes one jump per direction for each `y`; the
/// system dot contributes one per lead and direction for each `x`.
pub fn jump_channels(params: &SystemParams) -> Result<Vec<Jump>> {
    let mut jumps = Vec::with_capacity(12);
    for y in 0..=1u8 {
        let fill = detector_fill_fraction(params, y)?;
        let empty = DotState::new(0, y);
        let full = DotState::new(1, y);
        jumps.push(Jump {
            from: empty,
            to: full,
            channel: Channel::Detector,
            rate: params.gamma_d * fill,
        });
        jumps.push(Jump {
            from: full,
            to: empty,
            channel: Channel::Detector,
            rate: params.gamma_d * (1.0 - fill),
        });
    }
    for x in 0..=1u8 {
        let empty = DotState::new(x, 0);
        let full = DotState::new(x, 1);
        for reservoir in Reservoir::BOTH {
            let fill = system_fill_fraction(params, x, reservoir)?;
            let gamma = params.system_rate(x, reservoir);
            jumps.push(Jump {
                from: empty,
                to: full,
                channel: Channel::System(reservoir),
                rate: gamma * fill,
            });
            jumps.push(Jump {
                from: full,
                to: empty,
                channel: Channel::System(reservoir),
                rate: gamma * (1.0 - fill),
            });
        }
    }
    Ok(jumps)
}

/// 4x4 rate matrix indexed by [`DotState::index`].
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Generator {
    matrix: [[f64; 4]; 4],
}

impl Generator {
    /// Builds a generator from off-diagonal rates, filling the diagonal with
    /// negated column sums. Diagonal entries of `rates` are ignored.
    pub fn from_rates(rates: [[f64; 4]; 4]) -> Self {
        let mut matrix = rates;
        for j in 0..4 {
            matrix[j][j] = 0.0;
            let outflow: f64 = (0..4).filter(|&i| i != j).map(|i| matrix[i][j]).sum();
            matrix[j][j] = -outflow;
        }
        Generator { matrix }
    }

    pub fn matrix(&self) -> &[[f64; 4]; 4] {
        &self.matrix
    }

    /// Rate of the jump `from -> to`.
    pub fn rate(&self, from: DotState, to: DotState) -> f64 {
        self.matrix[to.index()][from.index()]
    }

    /// Largest total exit rate over all states.
    pub fn max_exit_rate(&self) -> f64 {
        (0..4).map(|j| self.matrix[j][j].abs()).fold(0.0, f64::max)
    }

    pub fn scaled(&self, factor: f64) -> Self {
        let mut matrix = self.matrix;
        matrix.iter_mut().flatten().for_each(|g| *g *= factor);
        Generator { matrix }
    }

    /// `G p`.
    pub fn apply(&self, p: &[f64; 4]) -> [f64; 4] {
        let mut out = [0.0; 4];
        for (row, o) in self.matrix.iter().zip(out.iter_mut()) {
            *o = row.iter().zip(p).map(|(g, v)| g * v).sum();
        }
        out
    }
}

/// Assembles the generator, summing the two system leads into one rate per
/// direction.
pub fn build_generator(params: &SystemParams) -> Result<Generator> {
    params.validate()?;
    let mut rates = [[0.0; 4]; 4];
    for jump in jump_channels(params)? {
        rates[jump.to.index()][jump.from.index()] += jump.rate;
    }
    Ok(Generator::from_rates(rates))
}
