//! Monte-Carlo cross-checks of the closed-form model.
//!
//! Every trajectory draws from its own ChaCha stream keyed by (seed, index),
//! so results do not depend on thread scheduling. Samples are collected in
//! index order and reduced sequentially.

pub mod langevin;
pub mod lifetime;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rand_distr::StandardNormal;
use rayon::prelude::*;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::gaussian::{optimal_gain, ChannelSpec, VACUUM};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct McSettings {
    pub n_samples: usize,
    pub seed: u64,
    /// Integration step for time-resolved paths, s.
    pub dt: f64,
    /// Length of time-resolved paths, s.
    pub t_final: f64,
}

impl McSettings {
    pub fn new(n_samples: usize, seed: u64) -> Self {
        McSettings {
            n_samples,
            seed,
            dt: 1e-3,
            t_final: 1.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        if self.n_samples == 0 {
            return Err(Error::validation("samples", "need at least one sample"));
        }
        if !(self.dt.is_finite() && self.dt > 0.0) {
            return Err(Error::validation("dt", format!("must be > 0, got {}", self.dt)));
        }
        if !(self.t_final >= self.dt) {
            return Err(Error::validation(
                "t_final",
                format!("must be >= dt, got {}", self.t_final),
            ));
        }
        Ok(())
    }

    pub fn steps(&self) -> usize {
        (self.t_final / self.dt).round().max(1.0) as usize
    }
}

/// Generator for trajectory `index` under `seed`.
pub fn trajectory_rng(seed: u64, index: u64) -> ChaCha8Rng {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    rng.set_stream(index);
    rng
}

/// Standard normal scaled to standard deviation `sd`.
#[inline]
pub fn normal(rng: &mut impl Rng, sd: f64) -> f64 {
    let z: f64 = rng.sample(StandardNormal);
    sd * z
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ObservableStats {
    pub mean: f64,
    /// Unbiased sample variance.
    pub variance: f64,
    /// Standard error of `variance`.
    pub stderr_var: f64,
}

impl ObservableStats {
    /// Two-pass moments of `xs`.
    pub fn from_samples(xs: &[f64]) -> Self {
        let n = xs.len() as f64;
        let mean = xs.iter().sum::<f64>() / n;
        let (mut m2, mut m4) = (0.0, 0.0);
        for &x in xs {
            let d = (x - mean) * (x - mean);
            m2 += d;
            m4 += d * d;
        }
        if xs.len() < 2 {
            return ObservableStats {
                mean,
                variance: 0.0,
                stderr_var: f64::INFINITY,
            };
        }
        let variance = m2 / (n - 1.0);
        let mu4 = m4 / n;
        let s4 = variance * variance;
        let var_of_var = (mu4 - s4 * (n - 3.0) / (n - 1.0)) / n;
        ObservableStats {
            mean,
            variance,
            stderr_var: var_of_var.max(f64::MIN_POSITIVE).sqrt(),
        }
    }

    /// |variance − target| in units of the standard error.
    pub fn z_score(&self, target: f64) -> f64 {
        (self.variance - target).abs() / self.stderr_var
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct TrajectoryStats {
    pub n_samples: usize,
    pub labels: Vec<&'static str>,
    pub observables: Vec<ObservableStats>,
}

impl TrajectoryStats {
    pub fn get(&self, label: &str) -> Option<&ObservableStats> {
        self.labels
            .iter()
            .position(|l| *l == label)
            .map(|i| &self.observables[i])
    }

    /// Column-wise statistics of per-trajectory observable vectors.
    pub fn from_rows(labels: Vec<&'static str>, rows: &[Vec<f64>]) -> Self {
        let observables = (0..labels.len())
            .map(|j| {
                let col: Vec<f64> = rows.iter().map(|r| r[j]).collect();
                ObservableStats::from_samples(&col)
            })
            .collect();
        TrajectoryStats {
            n_samples: rows.len(),
            labels,
            observables,
        }
    }
}

pub const P_B_FEEDBACK: &str = "p_b_feedback";
pub const X_L_OUT: &str = "x_L_out";
pub const P_B_OUT: &str = "p_b_out";

/// Sample the noisy input-output relations with classical Gaussian variables
/// of vacuum variance and apply optimal feedback to each draw.
pub fn sample_io(spec: &ChannelSpec, settings: &McSettings) -> Result<TrajectoryStats> {
    spec.validate()?;
    settings.validate()?;
    let ChannelSpec {
        kappa,
        epsilon,
        eta,
        rho,
    } = *spec;
    let gain = optimal_gain(spec);
    let sd = VACUUM.sqrt();
    let (se, sqe) = ((1.0 - epsilon).sqrt(), epsilon.sqrt());
    let (sh, sqh) = ((1.0 - eta).sqrt(), eta.sqrt());
    let alkali = kappa * rho.sqrt();

    let rows: Vec<Vec<f64>> = (0..settings.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trajectory_rng(settings.seed, i);
            let mut draw = || normal(&mut rng, sd);
            let (x_l, _p_l, _x_b, p_b) = (draw(), draw(), draw(), draw());
            let w: [f64; 5] = [draw(), draw(), draw(), draw(), draw()];
            let x_l_out = se * (x_l + kappa * p_b + alkali * w[0]) + sqe * w[1];
            let p_b_out = sh * p_b + sqh * w[4];
            vec![p_b_out + gain * x_l_out, x_l_out, p_b_out]
        })
        .collect();
    Ok(TrajectoryStats::from_rows(
        vec![P_B_FEEDBACK, X_L_OUT, P_B_OUT],
        &rows,
    ))
}
