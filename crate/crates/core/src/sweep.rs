//! Grid evaluation of the squeezing formula, the working-point table and
//! lifetime curves.

use std::fmt;
use std::str::FromStr;

use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{db_to_variance, squeezing_parameter, variance_to_db, ChannelSpec};
use crate::stochastic::lifetime::lifetime_decay;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum AxisKind {
    /// κ√(1−ε), the measurement-to-light-noise ratio.
    KappaEff,
    /// ϱ, alkali-to-noble noise ratio.
    Rho,
    Eta,
    Kappa,
    Epsilon,
}

impl AxisKind {
    pub fn name(self) -> &'static str {
        match self {
            AxisKind::KappaEff => "kappa_eff",
            AxisKind::Rho => "rho",
            AxisKind::Eta => "eta",
            AxisKind::Kappa => "kappa",
            AxisKind::Epsilon => "epsilon",
        }
    }
}

impl fmt::Display for AxisKind {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for AxisKind {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "kappa_eff" | "sigma_b/sigma_L" => Ok(AxisKind::KappaEff),
            "rho" | "sigma_a/sigma_b" => Ok(AxisKind::Rho),
            "eta" => Ok(AxisKind::Eta),
            "kappa" => Ok(AxisKind::Kappa),
            "epsilon" => Ok(AxisKind::Epsilon),
            other => Err(Error::validation("grid", format!("unknown axis `{other}`"))),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepAxis {
    pub kind: AxisKind,
    pub min: f64,
    pub max: f64,
    pub steps: usize,
    pub log: bool,
}

impl SweepAxis {
    pub fn linear(kind: AxisKind, min: f64, max: f64, steps: usize) -> Self {
        SweepAxis {
            kind,
            min,
            max,
            steps,
            log: false,
        }
    }

    pub fn log(kind: AxisKind, min: f64, max: f64, steps: usize) -> Self {
        SweepAxis {
            kind,
            min,
            max,
            steps,
            log: true,
        }
    }

    pub fn validate(&self, field: &str) -> Result<()> {
        if self.steps < 2 {
            return Err(Error::validation(field, "needs at least 2 steps"));
        }
        if !(self.min.is_finite() && self.max.is_finite() && self.min < self.max) {
            return Err(Error::validation(field, "needs finite min < max"));
        }
        if self.log && self.min <= 0.0 {
            return Err(Error::validation(field, "log axis needs min > 0"));
        }
        Ok(())
    }

    pub fn value(&self, i: usize) -> f64 {
        let frac = i as f64 / (self.steps - 1) as f64;
        if i == 0 {
            return self.min;
        }
        if i == self.steps - 1 {
            return self.max;
        }
        if self.log {
            let (a, b) = (self.min.log10(), self.max.log10());
            10f64.powf(a + frac * (b - a))
        } else {
            self.min + frac * (self.max - self.min)
        }
    }

    pub fn values(&self) -> Vec<f64> {
        (0..self.steps).map(|i| self.value(i)).collect()
    }

    /// Parse `MIN:MAX:STEPS`, with an optional `:log` suffix.
    pub fn parse(kind: AxisKind, text: &str) -> Result<Self> {
        let parts: Vec<&str> = text.split(':').collect();
        let bad = || Error::validation("grid", format!("expected MIN:MAX:STEPS[:log], got `{text}`"));
        if !(parts.len() == 3 || parts.len() == 4) {
            return Err(bad());
        }
        let min: f64 = parts[0].trim().parse().map_err(|_| bad())?;
        let max: f64 = parts[1].trim().parse().map_err(|_| bad())?;
        let steps: usize = parts[2].trim().parse().map_err(|_| bad())?;
        let log = match parts.get(3).map(|s| s.trim()) {
            None | Some("lin") => false,
            Some("log") => true,
            Some(_) => return Err(bad()),
        };
        let axis = SweepAxis {
            kind,
            min,
            max,
            steps,
            log,
        };
        axis.validate("grid")?;
        Ok(axis)
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SweepGrid {
    pub x: SweepAxis,
    pub y: SweepAxis,
    /// Values for the parameters not on an axis.
    pub fixed: ChannelSpec,
}

impl Default for SweepGrid {
    fn default() -> Self {
        SweepGrid {
            x: SweepAxis::linear(AxisKind::KappaEff, 0.0, 5.0, 101),
            y: SweepAxis::log(AxisKind::Rho, 1e-3, 1.0, 101),
            fixed: ChannelSpec {
                kappa: 2.0,
                epsilon: 0.3,
                eta: 0.12,
                rho: 0.162,
            },
        }
    }
}

impl SweepGrid {
    pub fn validate(&self) -> Result<()> {
        self.x.validate("grid.x")?;
        self.y.validate("grid.y")?;
        if self.x.kind == self.y.kind {
            return Err(Error::validation("grid", "x and y axes must differ"));
        }
        let kappa_like = |k| matches!(k, AxisKind::Kappa | AxisKind::KappaEff);
        if kappa_like(self.x.kind) && kappa_like(self.y.kind) {
            return Err(Error::validation("grid", "kappa and kappa_eff cannot both be axes"));
        }
        self.fixed.validate()
    }

    /// Channel parameters at one node. κ√(1−ε) is turned into κ using the
    /// node's ε.
    pub fn spec_at(&self, x: f64, y: f64) -> ChannelSpec {
        let mut spec = self.fixed;
        let mut kappa_eff = None;
        for (kind, v) in [(self.x.kind, x), (self.y.kind, y)] {
            match kind {
                AxisKind::KappaEff => kappa_eff = Some(v),
                AxisKind::Rho => spec.rho = v,
                AxisKind::Eta => spec.eta = v,
                AxisKind::Kappa => spec.kappa = v,
                AxisKind::Epsilon => spec.epsilon = v,
            }
        }
        if let Some(k) = kappa_eff {
            spec.kappa = k / (1.0 - spec.epsilon).sqrt();
        }
        spec
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SweepResult {
    pub grid: SweepGrid,
    pub x_values: Vec<f64>,
    pub y_values: Vec<f64>,
    /// dB of squeezing, row-major with x outer and y inner.
    pub values_db: Vec<f64>,
    /// exp(−2ξ), same layout.
    pub values_linear: Vec<f64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct GridPeak {
    pub x: f64,
    pub y: f64,
    pub value_db: f64,
}

impl SweepResult {
    pub fn at(&self, ix: usize, iy: usize) -> f64 {
        self.values_db[ix * self.y_values.len() + iy]
    }

    /// Iterate over (x, y, dB, linear) in storage order.
    pub fn rows(&self) -> impl Iterator<Item = (f64, f64, f64, f64)> + '_ {
        let ny = self.y_values.len();
        self.values_db
            .iter()
            .zip(&self.values_linear)
            .enumerate()
            .map(move |(n, (&db, &lin))| (self.x_values[n / ny], self.y_values[n % ny], db, lin))
    }

    /// Largest value on the grid; ties go to the first in storage order.
    pub fn argmax(&self) -> GridPeak {
        let mut best = GridPeak {
            x: f64::NAN,
            y: f64::NAN,
            value_db: f64::NEG_INFINITY,
        };
        for (x, y, db, _) in self.rows() {
            if db > best.value_db {
                best = GridPeak { x, y, value_db: db };
            }
        }
        best
    }

    /// Index of the node closest to (x, y), with y compared on a log scale
    /// when that axis is logarithmic.
    pub fn nearest(&self, x: f64, y: f64) -> (usize, usize) {
        let closest = |vals: &[f64], target: f64, log: bool| {
            let key = |v: f64| if log { v.ln() } else { v };
            let t = key(target);
            (0..vals.len())
                .min_by(|&a, &b| (key(vals[a]) - t).abs().total_cmp(&(key(vals[b]) - t).abs()))
                .unwrap_or(0)
        };
        (
            closest(&self.x_values, x, self.grid.x.log),
            closest(&self.y_values, y, self.grid.y.log),
        )
    }
}

/// Evaluate the squeezing formula at every node of `grid`.
pub fn squeezing_map(grid: &SweepGrid) -> Result<SweepResult> {
    grid.validate()?;
    let x_values = grid.x.values();
    let y_values = grid.y.values();
    let ny = y_values.len();
    let nodes: Vec<(f64, f64)> = (0..x_values.len() * ny)
        .into_par_iter()
        .map(|n| {
            let spec = grid.spec_at(x_values[n / ny], y_values[n % ny]);
            let r = squeezing_parameter(&spec);
            (r.squeezing_db, 2.0 * r.var_out)
        })
        .collect();
    let (values_db, values_linear) = nodes.into_iter().unzip();
    Ok(SweepResult {
        grid: *grid,
        x_values,
        y_values,
        values_db,
        values_linear,
    })
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct WorkingPoint {
    pub label: &'static str,
    pub spec: ChannelSpec,
    pub xi_computed: f64,
    pub db_computed: f64,
    /// Squeezing parameter quoted for this configuration in the literature.
    pub xi_quoted: f64,
    pub abs_dev: f64,
}

/// Reference configurations: (label, κ, ε, η, ϱ, quoted ξ).
pub const WORKING_POINTS: [(&str, f64, f64, f64, f64, f64); 3] = [
    ("he3_k_headline", 2.0, 0.3, 0.125, 0.162, 0.45),
    ("he3_k_low_pressure", 2.9, 0.3, 0.12, 0.02, 0.68),
    ("xe129_rb87", 1.8, 0.28, 0.22, 0.17, 0.34),
];

pub fn working_points() -> Vec<WorkingPoint> {
    WORKING_POINTS
        .iter()
        .map(|&(label, kappa, epsilon, eta, rho, xi_quoted)| {
            let spec = ChannelSpec {
                kappa,
                epsilon,
                eta,
                rho,
            };
            let r = squeezing_parameter(&spec);
            WorkingPoint {
                label,
                spec,
                xi_computed: r.xi,
                db_computed: r.squeezing_db,
                xi_quoted,
                abs_dev: (r.xi - xi_quoted).abs(),
            }
        })
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifetimeCurve {
    pub initial_db: f64,
    pub times: Vec<f64>,
    pub variance: Vec<f64>,
    pub db: Vec<f64>,
}

pub const DEFAULT_INITIAL_DB: [f64; 5] = [1.0, 3.0, 5.0, 7.0, 10.0];

/// Analytic decay curves on `steps` evenly spaced times in [0, t_max].
pub fn lifetime_curves(initial_db: &[f64], gamma: f64, t_max: f64, steps: usize) -> Result<Vec<LifetimeCurve>> {
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::validation("gamma", "must be > 0"));
    }
    if !(t_max.is_finite() && t_max > 0.0) || steps < 2 {
        return Err(Error::validation("t_max", "need t_max > 0 and at least 2 steps"));
    }
    if let Some(&bad) = initial_db.iter().find(|d| !(d.is_finite() && **d >= 0.0)) {
        return Err(Error::validation("initial_db", format!("must be >= 0, got {bad}")));
    }
    let times: Vec<f64> = (0..steps)
        .map(|i| t_max * i as f64 / (steps - 1) as f64)
        .collect();
    Ok(initial_db
        .iter()
        .map(|&db0| {
            let variance = lifetime_decay(db_to_variance(db0), gamma, &times);
            let db = variance.iter().map(|&v| variance_to_db(v)).collect();
            LifetimeCurve {
                initial_db: db0,
                times: times.clone(),
                variance,
                db,
            }
        })
        .collect())
}
