//! One-parameter sweeps of `Φ` and the figure presets built on them.

use std::fmt;
use std::io::Write;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::info::{phi_mi_against, shannon_entropy, standard_mutual_information};
use crate::params::{Param, SystemParams};

/// Right-hand side of a parameter binding.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BindExpr {
    /// `eps_x + u/2` (`sign = +1`) or `eps_x - u/2` (`sign = -1`).
    HalfCoupling { sign: f64 },
    /// `source + offset`.
    Offset { source: Param, offset: f64 },
}

/// A parameter recomputed from others at every grid point.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Binding {
    pub target: Param,
    pub expr: BindExpr,
}

impl Binding {
    /// `mu_d = eps_x + sign * u/2`.
    pub fn mu_d_tied(sign: f64) -> Self {
        Binding {
            target: Param::MuD,
            expr: BindExpr::HalfCoupling {
                sign: sign.signum(),
            },
        }
    }

    fn evaluate(&self, params: &SystemParams) -> f64 {
        match self.expr {
            BindExpr::HalfCoupling { sign } => params.eps_x + sign * params.u / 2.0,
            BindExpr::Offset { source, offset } => params.get(source) + offset,
        }
    }

    pub fn apply(&self, params: &mut SystemParams) {
        params.set(self.target, self.evaluate(params));
    }
}

impl FromStr for Binding {
    type Err = Error;

    /// Accepts `target=eps_x+u/2`, `target=eps_x-u/2` and
    /// `target=source+c` / `target=source-c` for a numeric constant `c`.
    fn from_str(s: &str) -> Result<Self> {
        let compact: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        let (lhs, rhs) = compact
            .split_once('=')
            .ok_or_else(|| Error::Usage(format!("binding '{s}' has no '='")))?;
        let target: Param = lhs.parse()?;
        let expr = match rhs {
            "eps_x+u/2" => BindExpr::HalfCoupling { sign: 1.0 },
            "eps_x-u/2" => BindExpr::HalfCoupling { sign: -1.0 },
            _ => {
                let split = rhs
                    .char_indices()
                    .skip(1)
                    .filter(|(_, c)| *c == '+' || *c == '-')
                    .map(|(i, _)| i)
                    .find(|&i| rhs[..i].parse::<Param>().is_ok())
                    .ok_or_else(|| {
                        Error::Usage(format!("unsupported binding expression '{rhs}'"))
                    })?;
                let source: Param = rhs[..split].parse()?;
                let offset: f64 = rhs[split..]
                    .trim_start_matches('+')
                    .parse()
                    .map_err(|_| Error::Usage(format!("bad constant in binding '{rhs}'")))?;
                BindExpr::Offset { source, offset }
            }
        };
        Ok(Binding { target, expr })
    }
}

impl fmt::Display for Binding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.expr {
            BindExpr::HalfCoupling { sign } if sign > 0.0 => write!(f, "{}=eps_x+u/2", self.target),
            BindExpr::HalfCoupling { .. } => write!(f, "{}=eps_x-u/2", self.target),
            BindExpr::Offset { source, offset } => {
                write!(f, "{}={}{:+}", self.target, source, offset)
            }
        }
    }
}

/// How the disconnected reference device is formed from a grid point.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq)]
pub enum Disconnection {
    /// Set `u = 0`, then re-evaluate the bindings. A preset with
    /// `mu_d = eps_x ± u/2` compares against `mu_d = eps_x`.
    #[default]
    Rebind,
    /// Set `u = 0` and keep every bound value as resolved at the grid point.
    KeepResolved,
}

impl FromStr for Disconnection {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "rebind" => Ok(Disconnection::Rebind),
            "keep" => Ok(Disconnection::KeepResolved),
            other => Err(Error::Usage(format!(
                "unknown disconnection mode '{other}' (expected rebind or keep)"
            ))),
        }
    }
}

/// A one-parameter sweep.
#[derive(Debug, Clone, PartialEq)]
pub struct SweepSpec {
    pub base: SystemParams,
    pub swept: Param,
    pub grid: Vec<f64>,
    pub bindings: Vec<Binding>,
    pub disconnection: Disconnection,
}

impl SweepSpec {
    pub fn new(base: SystemParams, swept: Param, grid: Vec<f64>) -> Self {
        SweepSpec {
            base,
            swept,
            grid,
            bindings: Vec::new(),
            disconnection: Disconnection::default(),
        }
    }

    pub fn with_binding(mut self, binding: Binding) -> Self {
        self.bindings.push(binding);
        self
    }

    pub fn validate(&self) -> Result<()> {
        if self.grid.is_empty() {
            return Err(Error::Usage("sweep grid is empty".into()));
        }
        if self.grid.iter().any(|v| !v.is_finite()) {
            return Err(Error::Usage(
                "sweep grid contains a non-finite value".into(),
            ));
        }
        if self.grid.windows(2).any(|w| !(w[1] > w[0])) {
            return Err(Error::Usage(
                "sweep grid must be strictly increasing".into(),
            ));
        }
        for b in &self.bindings {
            if b.target == self.swept {
                return Err(Error::Usage(format!(
                    "binding {b} overrides the swept parameter"
                )));
            }
            if b.target == Param::U {
                return Err(Error::Usage(format!("binding {b} targets the coupling u")));
            }
            if let BindExpr::Offset { source, offset } = b.expr {
                if source == b.target || !offset.is_finite() {
                    return Err(Error::Usage(format!("binding {b} is not well formed")));
                }
            }
        }
        Ok(())
    }

    /// Parameters of the interacting device at grid value `value`.
    pub fn connected(&self, value: f64) -> SystemParams {
        let mut params = self.base.with(self.swept, value);
        self.bindings.iter().for_each(|b| b.apply(&mut params));
        params
    }

    /// Parameters of the reference device with the coupling removed.
    pub fn disconnected(&self, value: f64) -> SystemParams {
        match self.disconnection {
            Disconnection::KeepResolved => self.connected(value).with(Param::U, 0.0),
            Disconnection::Rebind => {
                let mut params = self.base.with(self.swept, value).with(Param::U, 0.0);
                self.bindings.iter().for_each(|b| b.apply(&mut params));
                params
            }
        }
    }

    /// Evaluates a single grid value.
    pub fn record_at(&self, value: f64) -> Result<SweepRecord> {
        let params = self.connected(value);
        let reference = self.disconnected(value);
        let result = phi_mi_against(&params, &reference)?;
        Ok(SweepRecord {
            swept_value: value,
            phi: result.phi.value(),
            p: *result.p.as_array(),
            q: *result.q.as_array(),
            entropy_p: shannon_entropy(&result.p),
            standard_mi: standard_mutual_information(&result.p),
            params,
        })
    }
}

/// One row of sweep output.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepRecord {
    pub swept_value: f64,
    /// `+inf` when `q` misses part of the support of `p`.
    pub phi: f64,
    pub p: [f64; 4],
    pub q: [f64; 4],
    pub entropy_p: f64,
    pub standard_mi: f64,
    /// Resolved parameters of the interacting device.
    #[serde(skip)]
    pub params: SystemParams,
}

/// Evaluates every grid point; records come back in grid order.
pub fn run_sweep(spec: &SweepSpec) -> Result<Vec<SweepRecord>> {
    spec.validate()?;
    let results: Vec<Result<SweepRecord>> = spec
        .grid
        .par_iter()
        .map(|&value| {
            spec.record_at(value).map_err(|e| Error::SweepPoint {
                parameter: spec.swept.key().to_string(),
                value,
                source: Box::new(e),
            })
        })
        .collect();
    results.into_iter().collect()
}

/// `from, from + step, ...` up to and including `to` (within rounding).
pub fn linear_grid(from: f64, to: f64, step: f64) -> Result<Vec<f64>> {
    if !(step > 0.0) || !step.is_finite() || !from.is_finite() || !to.is_finite() {
        return Err(Error::Usage(format!(
            "bad grid from={from} to={to} step={step}"
        )));
    }
    if to < from {
        return Err(Error::Usage(format!(
            "grid end {to} lies before start {from}"
        )));
    }
    let n = ((to - from) / step + 1e-9).floor() as usize;
    Ok((0..=n).map(|i| from + i as f64 * step).collect())
}

/// Grid used by all presets: `u` from 0 to 20 in steps of 0.05.
pub fn default_coupling_grid() -> Vec<f64> {
    linear_grid(0.0, 20.0, 0.05).expect("constant grid is valid")
}

/// Detector temperatures used for the two interaction-strength families.
pub const DEFAULT_DETECTOR_TEMPERATURES: [f64; 4] = [0.1, 0.2, 0.5, 1.0];

/// Named sweep families.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Figure {
    /// `mu_d = eps_x - u/2`, one curve per detector temperature.
    Fig3a,
    /// `mu_d = eps_x + u/2`, one curve per detector temperature.
    Fig3b,
    /// Favoured tunneling rates `gamma_h0 = gamma_l1` in {10, 1, 0.1}.
    Fig4,
    /// System lead potentials shifted relative to `eps_y`.
    Fig5,
    /// Lead potentials (3.1, 2.9); read for the state probabilities.
    Fig6,
}

impl Figure {
    pub const ALL: [Figure; 5] = [
        Figure::Fig3a,
        Figure::Fig3b,
        Figure::Fig4,
        Figure::Fig5,
        Figure::Fig6,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Figure::Fig3a => "fig3a",
            Figure::Fig3b => "fig3b",
            Figure::Fig4 => "fig4",
            Figure::Fig5 => "fig5",
            Figure::Fig6 => "fig6",
        }
    }
}

impl FromStr for Figure {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Figure::ALL
            .into_iter()
            .find(|f| f.name() == s)
            .ok_or_else(|| Error::Usage(format!("unknown figure '{s}'")))
    }
}

/// A labelled member of a preset family.
#[derive(Debug, Clone, PartialEq)]
pub struct PresetMember {
    pub label: String,
    pub spec: SweepSpec,
}

impl PresetMember {
    /// `<figure>_<label>.csv`.
    pub fn file_name(&self, figure: Figure) -> String {
        format!("{}_{}.csv", figure.name(), self.label)
    }
}

fn coupling_sweep(base: SystemParams, sign: f64) -> SweepSpec {
    SweepSpec::new(base, Param::U, default_coupling_grid()).with_binding(Binding::mu_d_tied(sign))
}

/// The sweep family for `figure`, all over `u` on [`default_coupling_grid`].
pub fn figure_preset(figure: Figure) -> Vec<PresetMember> {
    let base = SystemParams::reference();
    match figure {
        Figure::Fig3a | Figure::Fig3b => {
            let sign = if figure == Figure::Fig3a { -1.0 } else { 1.0 };
            DEFAULT_DETECTOR_TEMPERATURES
                .iter()
                .map(|&t_d| PresetMember {
                    label: format!("td{t_d}"),
                    spec: coupling_sweep(base.with(Param::TD, t_d), sign),
                })
                .collect()
        }
        Figure::Fig4 => [10.0, 1.0, 0.1]
            .iter()
            .map(|&g| PresetMember {
                label: format!("gamma{g}"),
                spec: coupling_sweep(base.with(Param::GammaH0, g).with(Param::GammaL1, g), 1.0),
            })
            .collect(),
        Figure::Fig5 => [(0.4, 0.2), (1.1, 0.9), (3.1, 2.9)]
            .iter()
            .map(|&(mu_h, mu_l)| PresetMember {
                label: format!("mu{mu_h}-{mu_l}"),
                spec: coupling_sweep(base.with(Param::MuH, mu_h).with(Param::MuL, mu_l), 1.0),
            })
            .collect(),
        Figure::Fig6 => vec![PresetMember {
            label: "mu3.1-2.9".to_string(),
            spec: coupling_sweep(base.with(Param::MuH, 3.1).with(Param::MuL, 2.9), 1.0),
        }],
    }
}

pub const CSV_HEADER: &str =
    "swept_value,phi,p00,p01,p10,p11,q00,q01,q10,q11,entropy_p,standard_mi";

/// Shortest decimal that parses back to the same `f64`; exponent form
/// outside `[1e-5, 1e16)`, `0` for zero.
pub fn format_float(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_nan() {
        "NaN".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf" } else { "-inf" }.to_string()
    } else if (1e-5..1e16).contains(&v.abs()) {
        format!("{v}")
    } else {
        format!("{v:e}")
    }
}

pub fn emit_csv<W: Write>(records: &[SweepRecord], out: &mut W) -> Result<()> {
    if records.is_empty() {
        return Err(Error::Usage("no records to write".into()));
    }
    let mut text = String::with_capacity(64 * (records.len() + 1));
    text.push_str(CSV_HEADER);
    text.push('\n');
    for r in records {
        let fields = [r.swept_value, r.phi]
            .into_iter()
            .chain(r.p)
            .chain(r.q)
            .chain([r.entropy_p, r.standard_mi])
            .map(format_float)
            .collect::<Vec<_>>();
        text.push_str(&fields.join(","));
        text.push('\n');
    }
    out.write_all(text.as_bytes())?;
    Ok(())
}
