//! Physical parameters of the double-dot model and the Fermi occupation
//! function that turns them into reservoir fill fractions.
//!
//! Energies, potentials and temperatures share one unit with the Boltzmann
//! constant absorbed into the temperatures. Tunneling rates are inverse
//! times in an arbitrary unit.

use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Occupation of one reservoir level at `energy` for a reservoir with
/// potential `mu` and temperature `temperature`.
///
/// Evaluated on the overflow-free side of the logistic: for
/// `z = (energy - mu) / T >= 0` this is `e^-z / (1 + e^-z)`, otherwise
/// `1 / (1 + e^z)`. At `T = 0` the step-function limit is returned, with
/// exactly one half at `energy == mu`.
pub fn fermi(energy: f64, mu: f64, temperature: f64) -> Result<f64> {
    if !(temperature >= 0.0) || !temperature.is_finite() {
        return Err(Error::Domain(format!(
            "temperature must be finite and nonnegative, got {temperature}"
        )));
    }
    if !energy.is_finite() || !mu.is_finite() {
        return Err(Error::Domain(format!(
            "energy and potential must be finite, got energy={energy}, mu={mu}"
        )));
    }
    let delta = energy - mu;
    if temperature == 0.0 {
        return Ok(if delta < 0.0 {
            1.0
        } else if delta > 0.0 {
            0.0
        } else {
            0.5
        });
    }
    let z = delta / temperature;
    Ok(if z >= 0.0 {
        let e = (-z).exp();
        e / (1.0 + e)
    } else {
        1.0 / (1.0 + z.exp())
    })
}

/// One of the two leads attached to the system dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub enum Reservoir {
    /// Higher-potential lead (`mu_h`).
    High,
    /// Lower-potential lead (`mu_l`).
    Low,
}

impl Reservoir {
    pub const BOTH: [Reservoir; 2] = [Reservoir::High, Reservoir::Low];
}

/// Joint occupation `(x, y)` of the detector dot and the system dot.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct DotState {
    /// Detector occupation.
    pub x: u8,
    /// System occupation.
    pub y: u8,
}

impl DotState {
    /// States in canonical order (0,0), (0,1), (1,0), (1,1).
    pub const ALL: [DotState; 4] = [
        DotState { x: 0, y: 0 },
        DotState { x: 0, y: 1 },
        DotState { x: 1, y: 0 },
        DotState { x: 1, y: 1 },
    ];

    pub fn new(x: u8, y: u8) -> Self {
        assert!(x <= 1 && y <= 1, "dot occupations are 0 or 1");
        DotState { x, y }
    }

    /// Canonical index `2x + y`.
    pub fn index(self) -> usize {
        2 * self.x as usize + self.y as usize
    }

    pub fn from_index(index: usize) -> Self {
        assert!(index < 4, "state index out of range: {index}");
        DotState {
            x: (index / 2) as u8,
            y: (index % 2) as u8,
        }
    }

    pub fn label(self) -> String {
        format!("{}{}", self.x, self.y)
    }
}

impl fmt::Display for DotState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.x, self.y)
    }
}

/// Constants of one model instance.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct SystemParams {
    /// Detector dot level.
    pub eps_x: f64,
    /// System dot level.
    pub eps_y: f64,
    /// Inter-dot Coulomb energy.
    pub u: f64,
    /// Detector reservoir potential.
    pub mu_d: f64,
    /// Higher system reservoir potential.
    pub mu_h: f64,
    /// Lower system reservoir potential.
    pub mu_l: f64,
    /// Detector-side temperature.
    pub t_d: f64,
    /// System-side temperature.
    pub t_s: f64,
    /// Detector tunneling rate, independent of `y`.
    pub gamma_d: f64,
    /// System dot to H lead, detector empty.
    pub gamma_h0: f64,
    /// System dot to H lead, detector filled.
    pub gamma_h1: f64,
    /// System dot to L lead, detector empty.
    pub gamma_l0: f64,
    /// System dot to L lead, detector filled.
    pub gamma_l1: f64,
}

impl SystemParams {
    /// Shared constants of the interaction-strength sweeps: both dot levels
    /// at 1, leads at 1.1 / 0.9, `T_S = 1`, `Γ = 100`, favoured rates 10 and
    /// disfavoured rates 0.1. `u`, `mu_d` and `t_d` are left at 0 / 1 / 0.1.
    pub fn reference() -> Self {
        SystemParams {
            eps_x: 1.0,
            eps_y: 1.0,
            u: 0.0,
            mu_d: 1.0,
            mu_h: 1.1,
            mu_l: 0.9,
            t_d: 0.1,
            t_s: 1.0,
            gamma_d: 100.0,
            gamma_h0: 10.0,
            gamma_h1: 0.1,
            gamma_l0: 0.1,
            gamma_l1: 10.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for param in Param::ALL {
            let v = self.get(param);
            if !v.is_finite() {
                return Err(Error::InvalidParams(format!("{param} is not finite ({v})")));
            }
        }
        if self.t_d < 0.0 || self.t_s < 0.0 {
            return Err(Error::InvalidParams(format!(
                "temperatures must be nonnegative (t_d={}, t_s={})",
                self.t_d, self.t_s
            )));
        }
        if self.u < 0.0 {
            return Err(Error::InvalidParams(format!(
                "u must be nonnegative, got {}",
                self.u
            )));
        }
        if !(self.mu_h > self.mu_l) {
            return Err(Error::InvalidParams(format!(
                "mu_h must exceed mu_l (mu_h={}, mu_l={})",
                self.mu_h, self.mu_l
            )));
        }
        for param in [
            Param::GammaD,
            Param::GammaH0,
            Param::GammaH1,
            Param::GammaL0,
            Param::GammaL1,
        ] {
            if self.get(param) < 0.0 {
                return Err(Error::InvalidParams(format!("{param} must be nonnegative")));
            }
        }
        if self.gamma_d == 0.0 {
            return Err(Error::InvalidParams(
                "gamma_d is zero: the detector dot can never flip".into(),
            ));
        }
        if self.gamma_h0 + self.gamma_l0 == 0.0 || self.gamma_h1 + self.gamma_l1 == 0.0 {
            return Err(Error::InvalidParams(
                "system dot has no tunneling channel for some detector state".into(),
            ));
        }
        Ok(())
    }

    pub fn from_json_str(text: &str) -> Result<Self> {
        let params: SystemParams = serde_json::from_str(text)?;
        params.validate()?;
        Ok(params)
    }

    pub fn to_json_string(&self) -> String {
        serde_json::to_string_pretty(self).expect("plain struct of floats serializes")
    }

    pub fn get(&self, param: Param) -> f64 {
        match param {
            Param::EpsX => self.eps_x,
            Param::EpsY => self.eps_y,
            Param::U => self.u,
            Param::MuD => self.mu_d,
            Param::MuH => self.mu_h,
            Param::MuL => self.mu_l,
            Param::TD => self.t_d,
            Param::TS => self.t_s,
            Param::GammaD => self.gamma_d,
            Param::GammaH0 => self.gamma_h0,
            Param::GammaH1 => self.gamma_h1,
            Param::GammaL0 => self.gamma_l0,
            Param::GammaL1 => self.gamma_l1,
        }
    }

    pub fn set(&mut self, param: Param, value: f64) {
        let slot = match param {
            Param::EpsX => &mut self.eps_x,
            Param::EpsY => &mut self.eps_y,
            Param::U => &mut self.u,
            Param::MuD => &mut self.mu_d,
            Param::MuH => &mut self.mu_h,
            Param::MuL => &mut self.mu_l,
            Param::TD => &mut self.t_d,
            Param::TS => &mut self.t_s,
            Param::GammaD => &mut self.gamma_d,
            Param::GammaH0 => &mut self.gamma_h0,
            Param::GammaH1 => &mut self.gamma_h1,
            Param::GammaL0 => &mut self.gamma_l0,
            Param::GammaL1 => &mut self.gamma_l1,
        };
        *slot = value;
    }

    pub fn with(mut self, param: Param, value: f64) -> Self {
        self.set(param, value);
        self
    }

    /// Tunneling rate between the system dot and `reservoir` when the
    /// detector holds `x` electrons.
    pub fn system_rate(&self, x: u8, reservoir: Reservoir) -> f64 {
        match (reservoir, x) {
            (Reservoir::High, 0) => self.gamma_h0,
            (Reservoir::High, _) => self.gamma_h1,
            (Reservoir::Low, 0) => self.gamma_l0,
            (Reservoir::Low, _) => self.gamma_l1,
        }
    }

    pub fn reservoir_potential(&self, reservoir: Reservoir) -> f64 {
        match reservoir {
            Reservoir::High => self.mu_h,
            Reservoir::Low => self.mu_l,
        }
    }

    /// All five tunneling rates multiplied by `factor`.
    pub fn scale_rates(mut self, factor: f64) -> Self {
        self.gamma_d *= factor;
        self.gamma_h0 *= factor;
        self.gamma_h1 *= factor;
        self.gamma_l0 *= factor;
        self.gamma_l1 *= factor;
        self
    }
}

/// Probability that the detector reservoir fills the detector dot while the
/// system dot holds `y` electrons.
pub fn detector_fill_fraction(params: &SystemParams, y: u8) -> Result<f64> {
    fermi(
        params.eps_x + f64::from(y) * params.u,
        params.mu_d,
        params.t_d,
    )
}

/// Probability that lead `reservoir` fills the system dot while the detector
/// holds `x` electrons.
pub fn system_fill_fraction(params: &SystemParams, x: u8, reservoir: Reservoir) -> Result<f64> {
    fermi(
        params.eps_y + f64::from(x) * params.u,
        params.reservoir_potential(reservoir),
        params.t_s,
    )
}

/// Name of a scalar field of [`SystemParams`], matching its JSON key.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Param {
    EpsX,
    EpsY,
    U,
    MuD,
    MuH,
    MuL,
    TD,
    TS,
    GammaD,
    GammaH0,
    GammaH1,
    GammaL0,
    GammaL1,
}

impl Param {
    pub const ALL: [Param; 13] = [
        Param::EpsX,
        Param::EpsY,
        Param::U,
        Param::MuD,
        Param::MuH,
        Param::MuL,
        Param::TD,
        Param::TS,
        Param::GammaD,
        Param::GammaH0,
        Param::GammaH1,
        Param::GammaL0,
        Param::GammaL1,
    ];

    pub fn key(self) -> &'static str {
        match self {
            Param::EpsX => "eps_x",
            Param::EpsY => "eps_y",
            Param::U => "u",
            Param::MuD => "mu_d",
            Param::MuH => "mu_h",
            Param::MuL => "mu_l",
            Param::TD => "t_d",
            Param::TS => "t_s",
            Param::GammaD => "gamma_d",
            Param::GammaH0 => "gamma_h0",
            Param::GammaH1 => "gamma_h1",
            Param::GammaL0 => "gamma_l0",
            Param::GammaL1 => "gamma_l1",
        }
    }
}

impl fmt::Display for Param {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.key())
    }
}

impl FromStr for Param {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Param::ALL
            .into_iter()
            .find(|p| p.key() == s)
            .ok_or_else(|| Error::Usage(format!("unknown parameter name '{s}'")))
    }
}
