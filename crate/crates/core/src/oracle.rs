//! Kinetic Monte Carlo sampler for the same jump process.
//!
//! Direct Gillespie method: from state `s` the waiting time is exponential
//! with the total exit rate `R(s)`, and the next jump is picked with
//! probability proportional to its rate. The two system leads are separate
//! jumps. Occupation is estimated by the fraction of simulated time spent in
//! each state, which makes it an estimate of the stationary distribution
//! independent of the linear solver.
//!
//! Randomness comes from ChaCha8 (`rand_chacha::ChaCha8Rng`) seeded with
//! `seed_from_u64`, so a run is fully determined by its seed.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::generator::jump_channels;
use crate::params::{DotState, SystemParams};
use crate::solver::StateDistribution;

/// Events discarded before tallying when no burn-in is given.
pub const DEFAULT_BURN_IN: u64 = 10_000;

/// Time-weighted summary of one trajectory.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct TrajectoryStats {
    /// Fraction of tallied time spent in each state.
    pub occupation: [f64; 4],
    /// Tallied simulated time.
    pub total_time: f64,
    /// Tallied jumps (burn-in excluded).
    pub n_events: u64,
    pub seed: u64,
}

impl TrajectoryStats {
    pub fn distribution(&self) -> Result<StateDistribution> {
        StateDistribution::new(self.occupation)
    }
}

struct Exit {
    to: usize,
    rate: f64,
}

/// Runs `burn_in_events + n_events` jumps starting from `(0,0)` and returns
/// the occupation accumulated over the last `n_events` sojourns.
pub fn sample_steady(
    params: &SystemParams,
    seed: u64,
    n_events: u64,
    burn_in_events: u64,
) -> Result<TrajectoryStats> {
    if n_events == 0 {
        return Err(Error::Domain("n_events must be positive".into()));
    }
    params.validate()?;

    let mut exits: [Vec<Exit>; 4] = Default::default();
    for jump in jump_channels(params)? {
        if !jump.rate.is_finite() || jump.rate < 0.0 {
            return Err(Error::Numerical(format!("invalid jump rate {}", jump.rate)));
        }
        if jump.rate > 0.0 {
            exits[jump.from.index()].push(Exit {
                to: jump.to.index(),
                rate: jump.rate,
            });
        }
    }
    let totals: [f64; 4] = std::array::from_fn(|s| exits[s].iter().map(|e| e.rate).sum());

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut state = DotState::new(0, 0).index();
    let mut dwell = [0.0f64; 4];

    for event in 0..burn_in_events + n_events {
        let total = totals[state];
        if total <= 0.0 {
            let s = DotState::from_index(state);
            return Err(Error::AbsorbingState { x: s.x, y: s.y });
        }
        let u: f64 = rng.random();
        let wait = -(1.0 - u).ln() / total;
        if event >= burn_in_events {
            dwell[state] += wait;
        }

        let mut target = rng.random::<f64>() * total;
        let choices = &exits[state];
        let mut next = choices[choices.len() - 1].to;
        for exit in choices {
            if target < exit.rate {
                next = exit.to;
                break;
            }
            target -= exit.rate;
        }
        state = next;
    }

    let total_time: f64 = dwell.iter().sum();
    Ok(TrajectoryStats {
        occupation: dwell.map(|t| t / total_time),
        total_time,
        n_events,
        seed,
    })
}
