//! Decay of squeezing after the measurement: each difference quadrature
//! relaxes as an Ornstein–Uhlenbeck process dp = −Γp dt + √Γ dW towards the
//! vacuum variance 1/2.

use rayon::prelude::*;
use serde::Serialize;

use super::{normal, trajectory_rng, McSettings, ObservableStats};
use crate::error::{Error, Result};
use crate::gaussian::VACUUM;

/// var(t) = 1/2 + (var0 − 1/2)·exp(−2Γt) at each of `times`.
pub fn lifetime_decay(var0: f64, gamma: f64, times: &[f64]) -> Vec<f64> {
    times
        .iter()
        .map(|&t| VACUUM + (var0 - VACUUM) * (-2.0 * gamma * t).exp())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct LifetimeSeries {
    pub times: Vec<f64>,
    pub variance: Vec<f64>,
    pub stderr: Vec<f64>,
    /// Number of independent quadrature samples per time point.
    pub n_samples: usize,
}

fn check_inputs(var0: f64, gamma: f64) -> Result<()> {
    if !(var0.is_finite() && var0 >= 0.0) {
        return Err(Error::validation("var0", format!("must be >= 0, got {var0}")));
    }
    if !(gamma.is_finite() && gamma > 0.0) {
        return Err(Error::validation("gamma", format!("must be > 0, got {gamma}")));
    }
    Ok(())
}

/// Euler–Maruyama paths of both transverse quadratures, pooled per time point.
/// Each path starts from N(0, var0); statistics are recorded every
/// `record_every` steps including t = 0.
pub fn lifetime_mc(var0: f64, gamma: f64, settings: &McSettings, record_every: usize) -> Result<LifetimeSeries> {
    check_inputs(var0, gamma)?;
    settings.validate()?;
    let steps = settings.steps();
    let every = record_every.max(1);
    let n_records = steps / every + 1;
    let dt = settings.dt;
    let decay = 1.0 - gamma * dt;
    let kick = (gamma * dt).sqrt();
    let sd0 = var0.sqrt();

    let paths: Vec<Vec<[f64; 2]>> = (0..settings.n_samples as u64)
        .into_par_iter()
        .map(|i| {
            let mut rng = trajectory_rng(settings.seed, i);
            let mut p = [normal(&mut rng, sd0), normal(&mut rng, sd0)];
            let mut rec = Vec::with_capacity(n_records);
            rec.push(p);
            for n in 1..=steps {
                for x in p.iter_mut() {
                    *x = decay * *x + normal(&mut rng, kick);
                }
                if n % every == 0 {
                    rec.push(p);
                }
            }
            rec
        })
        .collect();

    let mut times = Vec::with_capacity(n_records);
    let mut variance = Vec::with_capacity(n_records);
    let mut stderr = Vec::with_capacity(n_records);
    let mut pooled = Vec::with_capacity(2 * paths.len());
    for r in 0..n_records {
        pooled.clear();
        for path in &paths {
            pooled.extend_from_slice(&path[r]);
        }
        let s = ObservableStats::from_samples(&pooled);
        times.push((r * every) as f64 * dt);
        variance.push(s.variance);
        stderr.push(s.stderr_var);
    }
    Ok(LifetimeSeries {
        times,
        variance,
        stderr,
        n_samples: pooled.len(),
    })
}

/// Least-squares slope of ln(1/2 − var) against t over points with t ≤ t_max
/// and a positive gap. Returns the decay rate (minus the slope). With
/// `stderr` each point is weighted by (gap / stderr)², the inverse variance
/// of its logarithm.
pub fn gap_decay_rate(times: &[f64], variance: &[f64], stderr: Option<&[f64]>, t_max: f64) -> Option<f64> {
    let pts: Vec<(f64, f64, f64)> = (0..times.len())
        .filter(|&i| times[i] <= t_max && variance[i] < VACUUM)
        .map(|i| {
            let gap = VACUUM - variance[i];
            let w = stderr.map_or(1.0, |e| (gap / e[i]).powi(2));
            (times[i], gap.ln(), w)
        })
        .collect();
    if pts.len() < 2 {
        return None;
    }
    let sw: f64 = pts.iter().map(|p| p.2).sum();
    let mt = pts.iter().map(|p| p.2 * p.0).sum::<f64>() / sw;
    let my = pts.iter().map(|p| p.2 * p.1).sum::<f64>() / sw;
    let sxy: f64 = pts.iter().map(|p| p.2 * (p.0 - mt) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| p.2 * (p.0 - mt).powi(2)).sum();
    Some(-sxy / sxx)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn analytic_cases() {
        assert!(lifetime_decay(0.5, 3.0, &[0.0, 1.0, 10.0]).iter().all(|&v| v == 0.5));
        let gamma = 2.0;
        let t = 2f64.ln() / (2.0 * gamma);
        assert!((lifetime_decay(0.25, gamma, &[t])[0] - 0.375).abs() < 1e-15);
        let v = lifetime_decay(0.05, 1.0, &[0.5])[0];
        assert!((v - 0.334_454_2).abs() < 1e-6, "{v}");
    }

    #[test]
    fn rejects_bad_inputs() {
        let s = McSettings::new(10, 1);
        assert!(lifetime_mc(-0.1, 1.0, &s, 1).is_err());
        assert!(lifetime_mc(0.1, 0.0, &s, 1).is_err());
    }

    #[test]
    fn exact_slope_recovered() {
        let times: Vec<f64> = (0..20).map(|i| i as f64 * 0.05).collect();
        let v = lifetime_decay(0.1, 0.7, &times);
        let rate = gap_decay_rate(&times, &v, None, 1.0).unwrap();
        assert!((rate - 1.4).abs() < 1e-12);
        let se = vec![0.01; times.len()];
        let rate = gap_decay_rate(&times, &v, Some(&se), 1.0).unwrap();
        assert!((rate - 1.4).abs() < 1e-12);
    }

    #[test]
    fn stationary_vacuum() {
        let mut s = McSettings::new(2_000, 3);
        s.dt = 1e-2;
        s.t_final = 1.0;
        let series = lifetime_mc(0.5, 1.0, &s, 10).unwrap();
        for (v, e) in series.variance.iter().zip(&series.stderr) {
            assert!((v - 0.5).abs() < 4.0 * e);
        }
    }
}
