//! Closed-form Gaussian model of one measurement round.
//!
//! A sector holds the first two moments of (x_L, p_L, x_b, p_b) for one
//! transverse component. Vacuum has variance 1/2 per quadrature.

use nalgebra::{Matrix2, Matrix4, Vector4};
use serde::Serialize;

use crate::error::{Error, Result};

pub const XL: usize = 0;
pub const PL: usize = 1;
pub const XB: usize = 2;
pub const PB: usize = 3;

pub const VACUUM: f64 = 0.5;

/// Measured variance below which conditioning is refused.
const DEGENERATE_VARIANCE: f64 = 1e-15;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum Sector {
    Y,
    Z,
}

#[derive(Debug, Clone, PartialEq)]
pub struct GaussianSector {
    pub label: Sector,
    pub mean: Vector4<f64>,
    pub cov: Matrix4<f64>,
}

impl GaussianSector {
    pub fn vacuum(label: Sector) -> Self {
        GaussianSector {
            label,
            mean: Vector4::zeros(),
            cov: Matrix4::identity() * VACUUM,
        }
    }

    pub fn variance(&self, i: usize) -> f64 {
        self.cov[(i, i)]
    }

    pub fn symplectic_eigenvalues(&self) -> [f64; 2] {
        symplectic_eigenvalues(&self.cov)
    }

    /// All symplectic eigenvalues at or above the vacuum level, up to `tol`.
    pub fn is_physical(&self, tol: f64) -> bool {
        let sym = (self.cov - self.cov.transpose()).abs().max() <= 1e-12;
        sym && self.symplectic_eigenvalues()[0] >= VACUUM - tol
    }
}

/// Dimensionless description of one measurement round.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ChannelSpec {
    pub kappa: f64,
    pub epsilon: f64,
    pub eta: f64,
    pub rho: f64,
}

impl ChannelSpec {
    pub fn ideal(kappa: f64) -> Self {
        ChannelSpec {
            kappa,
            epsilon: 0.0,
            eta: 0.0,
            rho: 0.0,
        }
    }

    pub fn validate(&self) -> Result<()> {
        let bad = |field: &str, msg: &str| Err(Error::validation(field, msg));
        if !(self.kappa.is_finite() && self.kappa >= 0.0) {
            return bad("kappa", "must be finite and >= 0");
        }
        if !(0.0..=1.0).contains(&self.epsilon) {
            return bad("epsilon", "must lie in [0, 1]");
        }
        if !(0.0..=1.0).contains(&self.eta) {
            return bad("eta", "must lie in [0, 1]");
        }
        if !(self.rho.is_finite() && self.rho >= 0.0) {
            return bad("rho", "must be finite and >= 0");
        }
        Ok(())
    }
}

/// Linear map plus additive noise: mean ↦ X·mean, cov ↦ X·cov·Xᵀ + Y.
#[derive(Debug, Clone, PartialEq)]
pub struct GaussianChannel {
    pub x: Matrix4<f64>,
    pub y: Matrix4<f64>,
}

impl GaussianChannel {
    pub fn apply(&self, s: &GaussianSector) -> GaussianSector {
        GaussianSector {
            label: s.label,
            mean: self.x * s.mean,
            cov: self.x * s.cov * self.x.transpose() + self.y,
        }
    }
}

/// Lossless exchange of quadratures between light and the noble-gas mode.
pub fn ideal_channel(kappa: f64) -> GaussianChannel {
    let mut x = Matrix4::identity();
    x[(XL, PB)] = kappa;
    x[(XB, PL)] = kappa;
    GaussianChannel {
        x,
        y: Matrix4::zeros(),
    }
}

/// Measurement round with light loss ε, noble-gas decay η and alkali noise ϱ.
pub fn lossy_channel(spec: &ChannelSpec) -> GaussianChannel {
    let ChannelSpec {
        kappa,
        epsilon,
        eta,
        rho,
    } = *spec;
    let se = (1.0 - epsilon).sqrt();
    let sh = (1.0 - eta).sqrt();
    #[rustfmt::skip]
    let x = Matrix4::new(
        se,  0.0,        0.0, se * kappa,
        0.0, se,         0.0, 0.0,
        0.0, sh * kappa, sh,  0.0,
        0.0, 0.0,        0.0, sh,
    );
    let y = Matrix4::from_diagonal(&Vector4::new(
        (1.0 - epsilon) * kappa * kappa * rho + epsilon,
        epsilon,
        eta,
        eta,
    )) * VACUUM;
    GaussianChannel { x, y }
}

/// Feedback gain minimizing var(p_b + G·x_L) after the lossy round.
pub fn optimal_gain(spec: &ChannelSpec) -> f64 {
    let ChannelSpec {
        kappa,
        epsilon,
        eta,
        rho,
    } = *spec;
    -kappa * (1.0 - epsilon).sqrt() * (1.0 - eta).sqrt()
        / (1.0 + kappa * kappa * (rho + 1.0) * (1.0 - epsilon))
}

/// Displace p_b by G·x_L. The conjugate kick p_L += G·x_b is applied too, so
/// the map stays symplectic; x_L and the noble-gas marginal are as for a bare shear.
pub fn feedback(s: &GaussianSector, gain: f64) -> GaussianSector {
    let mut x = Matrix4::identity();
    x[(PB, XL)] = gain;
    x[(PL, XB)] = gain;
    GaussianChannel {
        x,
        y: Matrix4::zeros(),
    }
    .apply(s)
}

/// var(p_b + G·x_L) read off the covariance, without building the full map.
pub fn feedback_variance(s: &GaussianSector, gain: f64) -> f64 {
    let c = &s.cov;
    c[(PB, PB)] + 2.0 * gain * c[(PB, XL)] + gain * gain * c[(XL, XL)]
}

/// Closed-form post-feedback variance of p_b.
pub fn minimal_variance(spec: &ChannelSpec) -> f64 {
    let ChannelSpec {
        kappa,
        epsilon,
        eta,
        rho,
    } = *spec;
    let k2 = kappa * kappa * (1.0 - epsilon);
    VACUUM * (k2 * (eta + rho) + 1.0) / (k2 * (1.0 + rho) + 1.0)
}

/// Squeezing in dB relative to vacuum; positive means squeezed.
pub fn variance_to_db(variance: f64) -> f64 {
    // `+ 0.0` folds −0 into +0 at the vacuum.
    -10.0 * (2.0 * variance).log10() + 0.0
}

pub fn db_to_variance(db: f64) -> f64 {
    VACUUM * 10f64.powf(-db / 10.0)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SqueezeResult {
    pub xi: f64,
    pub var_out: f64,
    pub squeezing_db: f64,
    pub gain: f64,
    pub epr_value: f64,
    pub entangled: bool,
}

/// Best two-mode squeezing after one round with optimal feedback, both sectors alike.
pub fn squeezing_parameter(spec: &ChannelSpec) -> SqueezeResult {
    let ChannelSpec {
        kappa,
        epsilon,
        eta,
        rho,
    } = *spec;
    let k2 = kappa * kappa * (1.0 - epsilon);
    let xi = 0.5 * ((k2 * (1.0 + rho) + 1.0) / (k2 * (eta + rho) + 1.0)).ln();
    let var_out = (-2.0 * xi).exp() / 2.0;
    let epr_value = 4.0 * var_out;
    SqueezeResult {
        xi,
        var_out,
        squeezing_db: variance_to_db(var_out),
        gain: optimal_gain(spec),
        epr_value,
        entangled: epr_value < 2.0,
    }
}

/// Sum of the two difference-variable variances, var(k_1y−k_2y) + var(k_1z−k_2z).
pub fn epr_criterion(y: &GaussianSector, z: &GaussianSector) -> (f64, bool) {
    let value = 2.0 * y.variance(PB) + 2.0 * z.variance(PB);
    (value, value < 2.0)
}

/// Variance of p_b conditioned on a measurement of x_L.
pub fn conditional_variance(s: &GaussianSector) -> Result<f64> {
    let vx = s.cov[(XL, XL)];
    if vx <= DEGENERATE_VARIANCE {
        return Err(Error::DegenerateMeasurement { variance: vx });
    }
    let c = s.cov[(PB, XL)];
    Ok(s.cov[(PB, PB)] - c * c / vx)
}

/// The two symplectic eigenvalues, ascending, of a covariance over
/// (x_1, p_1, x_2, p_2).
pub fn symplectic_eigenvalues(cov: &Matrix4<f64>) -> [f64; 2] {
    let a: Matrix2<f64> = cov.fixed_view::<2, 2>(0, 0).into();
    let b: Matrix2<f64> = cov.fixed_view::<2, 2>(2, 2).into();
    let c: Matrix2<f64> = cov.fixed_view::<2, 2>(0, 2).into();
    let delta = a.determinant() + b.determinant() + 2.0 * c.determinant();
    let det = cov.determinant();
    let disc = (delta * delta - 4.0 * det).max(0.0).sqrt();
    let lo = ((delta - disc) / 2.0).max(0.0).sqrt();
    let hi = ((delta + disc) / 2.0).max(0.0).sqrt();
    [lo, hi]
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use nalgebra::SymmetricEigen;

    const HEADLINE: ChannelSpec = ChannelSpec {
        kappa: 2.0,
        epsilon: 0.3,
        eta: 0.125,
        rho: 0.162,
    };

    fn omega() -> Matrix4<f64> {
        #[rustfmt::skip]
        let m = Matrix4::new(
            0.0, 1.0, 0.0, 0.0,
            -1.0, 0.0, 0.0, 0.0,
            0.0, 0.0, 0.0, 1.0,
            0.0, 0.0, -1.0, 0.0,
        );
        m
    }

    /// ν² are the eigenvalues of V^½ Ωᵀ V Ω V^½.
    fn symplectic_oracle(v: &Matrix4<f64>) -> [f64; 2] {
        let e = SymmetricEigen::new(*v);
        let root = e.eigenvectors
            * Matrix4::from_diagonal(&e.eigenvalues.map(f64::sqrt))
            * e.eigenvectors.transpose();
        let m = root * omega().transpose() * v * omega() * root;
        let mut ev: Vec<f64> = SymmetricEigen::new((m + m.transpose()) / 2.0)
            .eigenvalues
            .iter()
            .map(|x| x.max(0.0).sqrt())
            .collect();
        ev.sort_by(f64::total_cmp);
        [ev[0], ev[2]]
    }

    #[test]
    fn ideal_channel_is_symplectic_and_qnd() {
        let x = ideal_channel(1.7).x;
        assert_relative_eq!(x * omega() * x.transpose(), omega(), epsilon = 1e-14);
        assert_relative_eq!(x.determinant(), 1.0, epsilon = 1e-14);
        assert_eq!(ideal_channel(0.0).x, Matrix4::identity());

        let out = ideal_channel(2.0).apply(&GaussianSector::vacuum(Sector::Y));
        assert_relative_eq!(out.variance(XL), 2.5, epsilon = 1e-15);
        assert_eq!(out.variance(PB), 0.5);
        assert_eq!(out.mean, Vector4::zeros());
    }

    #[test]
    fn lossy_reduces_to_ideal() {
        let l = lossy_channel(&ChannelSpec::ideal(1.3));
        assert_eq!(l.x, ideal_channel(1.3).x);
        assert_eq!(l.y, Matrix4::zeros());
    }

    #[test]
    fn lossy_vacuum_output() {
        let out = lossy_channel(&HEADLINE).apply(&GaussianSector::vacuum(Sector::Z));
        // 0.7·(0.5 + 4·0.5 + 4·0.162·0.5) + 0.3·0.5
        assert_relative_eq!(out.variance(XL), 2.1268, epsilon = 1e-12);
        let thermal = ChannelSpec { eta: 1.0, ..HEADLINE };
        let mut squeezed = GaussianSector::vacuum(Sector::Y);
        squeezed.cov[(PB, PB)] = 0.01;
        let out = lossy_channel(&thermal).apply(&squeezed);
        assert_eq!(out.variance(PB), 0.5);
    }

    #[test]
    fn gain_values() {
        assert_eq!(optimal_gain(&ChannelSpec::ideal(0.0)), 0.0);
        assert_eq!(optimal_gain(&ChannelSpec::ideal(1.0)), -0.5);
        assert_relative_eq!(optimal_gain(&HEADLINE), -0.367_981_846_965, epsilon = 1e-11);
    }

    #[test]
    fn headline_feedback_variance() {
        let out = lossy_channel(&HEADLINE).apply(&GaussianSector::vacuum(Sector::Y));
        let fb = feedback(&out, optimal_gain(&HEADLINE));
        assert_relative_eq!(fb.variance(PB), 0.5 * 1.8036 / 4.2536, epsilon = 1e-12);
        assert_relative_eq!(fb.variance(PB), minimal_variance(&HEADLINE), epsilon = 1e-14);
        assert_eq!(fb.mean[PB], 0.0);
        assert_eq!(fb.variance(XL), out.variance(XL));
    }

    #[test]
    fn feedback_is_symplectic() {
        let g = -0.7;
        let mut x = Matrix4::identity();
        x[(PB, XL)] = g;
        x[(PL, XB)] = g;
        assert_relative_eq!(x * omega() * x.transpose(), omega(), epsilon = 1e-15);
        let v = GaussianSector::vacuum(Sector::Y);
        assert_eq!(feedback(&v, 0.0), v);
    }

    #[test]
    fn working_point_values() {
        let r = squeezing_parameter(&HEADLINE);
        assert_relative_eq!(r.xi, 0.428_990_507_8, epsilon = 1e-9);
        assert!((r.squeezing_db - 3.73).abs() < 0.01);
        assert_relative_eq!(r.epr_value, 0.848, epsilon = 1e-3);
        assert!(r.entangled);

        let low = squeezing_parameter(&ChannelSpec {
            kappa: 2.9,
            epsilon: 0.3,
            eta: 0.12,
            rho: 0.02,
        });
        assert_relative_eq!(low.xi, 0.6727, epsilon = 1e-3);
        let xe = squeezing_parameter(&ChannelSpec {
            kappa: 1.8,
            epsilon: 0.28,
            eta: 0.22,
            rho: 0.17,
        });
        assert_relative_eq!(xe.xi, 0.3346, epsilon = 1e-3);
    }

    #[test]
    fn noiseless_closed_form() {
        let r = squeezing_parameter(&ChannelSpec::ideal(2.0));
        assert_relative_eq!(r.xi, 5f64.ln() / 2.0, epsilon = 1e-15);
        assert_relative_eq!(r.var_out, 0.1, epsilon = 1e-15);
        let zero = squeezing_parameter(&ChannelSpec::ideal(0.0));
        assert_eq!(zero.xi, 0.0);
        assert!(!zero.entangled);
        let dead = squeezing_parameter(&ChannelSpec { eta: 1.0, ..HEADLINE });
        assert_relative_eq!(dead.xi, 0.0, epsilon = 1e-15);
    }

    #[test]
    fn epr_cases() {
        let v = GaussianSector::vacuum(Sector::Y);
        let w = GaussianSector::vacuum(Sector::Z);
        assert_eq!(epr_criterion(&v, &w), (2.0, false));
        let mut a = v.clone();
        let mut b = w.clone();
        a.cov[(PB, PB)] = 0.1;
        b.cov[(PB, PB)] = 0.1;
        let (val, ent) = epr_criterion(&a, &b);
        assert_relative_eq!(val, 0.4, epsilon = 1e-15);
        assert!(ent);
    }

    #[test]
    fn conditional_cases() {
        let v = GaussianSector::vacuum(Sector::Y);
        assert_eq!(conditional_variance(&v).unwrap(), 0.5);
        let out = ideal_channel(2.0).apply(&v);
        assert_relative_eq!(conditional_variance(&out).unwrap(), 0.1, epsilon = 1e-15);
        let mut degenerate = v.clone();
        degenerate.cov[(XL, XL)] = 0.0;
        assert!(matches!(
            conditional_variance(&degenerate),
            Err(Error::DegenerateMeasurement { .. })
        ));
    }

    #[test]
    fn symplectic_eigenvalues_match_oracle() {
        let out = lossy_channel(&HEADLINE).apply(&GaussianSector::vacuum(Sector::Y));
        let fb = feedback(&out, -0.4);
        for v in [GaussianSector::vacuum(Sector::Y).cov, out.cov, fb.cov] {
            let fast = symplectic_eigenvalues(&v);
            let slow = symplectic_oracle(&v);
            assert_relative_eq!(fast[0], slow[0], epsilon = 1e-10);
            assert_relative_eq!(fast[1], slow[1], epsilon = 1e-10);
        }
        assert_eq!(symplectic_eigenvalues(&(Matrix4::identity() * 0.5)), [0.5, 0.5]);
    }

    #[test]
    fn db_round_trip() {
        assert_eq!(variance_to_db(0.5), 0.0);
        assert_relative_eq!(variance_to_db(db_to_variance(10.0)), 10.0, epsilon = 1e-12);
    }
}
