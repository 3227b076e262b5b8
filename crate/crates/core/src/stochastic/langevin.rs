//! Transverse spin dynamics of the two cells in the frame co-rotating with the
//! noble-gas fluctuations, with the Faraday light record accumulated alongside.
//!
//! Vectors are (y, z) pairs. `cross(v)` is v × e_x = (v_z, −v_y). The frame
//! rotates at ω_b − δ, where δ is the exchange-induced noble-gas shift, so the
//! alkali precesses at Δ + δ and the noble gas is stationary once the alkali
//! is eliminated. The optical axis in this frame is e(t) = (sin θ, cos θ)
//! and the rotated e_y is u(t) = (cos θ, −sin θ), θ = (ω_b − δ)t.
//!
//! Light quadratures of sector y/z are the sin θ / cos θ projections of the
//! Stokes records, normalized so that shot noise alone gives variance 1/2.
//! S_z enters the alkali as back-action with white-noise strength T/2.

use std::f64::consts::SQRT_2;

use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{normal, trajectory_rng};
use crate::error::{Error, Result};
use crate::params::DerivedParams;

/// Points per fastest oscillation period the step must resolve.
pub const STEPS_PER_RATE: f64 = 20.0;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameModel {
    pub j: f64,
    pub q: f64,
    /// Alkali/noble detuning Δ, rad/s.
    pub detuning: f64,
    pub gamma_a: f64,
    pub gamma_b: f64,
    pub q_factor: f64,
    /// Noble-gas precession frequency in the lab frame, rad/s.
    pub omega_b: f64,
    pub pulse_duration: f64,
}

impl From<&DerivedParams> for FrameModel {
    fn from(p: &DerivedParams) -> Self {
        FrameModel {
            j: p.j,
            q: p.q,
            detuning: p.detuning,
            gamma_a: p.gamma_a,
            gamma_b: p.gamma_b,
            q_factor: p.q_factor,
            omega_b: p.omega_b,
            pulse_duration: p.pulse_duration,
        }
    }
}

impl FrameModel {
    /// Self-consistent noble-gas shift δ = J²(Δ+δ)/((Δ+δ)² + γ_a²).
    pub fn shift(&self) -> f64 {
        let (j2, g2) = (self.j * self.j, self.gamma_a * self.gamma_a);
        let mut delta = 0.0;
        for _ in 0..200 {
            let d = self.detuning + delta;
            let next = j2 * d / (d * d + g2);
            if (next - delta).abs() <= 1e-15 * next.abs().max(f64::MIN_POSITIVE) {
                return next;
            }
            delta = next;
        }
        delta
    }

    /// Largest step satisfying the resolution guard.
    pub fn max_step(&self) -> f64 {
        let fastest = self
            .detuning
            .abs()
            .max((self.detuning + self.shift()).abs())
            .max(self.omega_b.abs());
        1.0 / (STEPS_PER_RATE * fastest)
    }

    pub fn check_step(&self, dt: f64) -> Result<()> {
        let limit = self.max_step();
        if !(dt > 0.0 && dt <= limit * (1.0 + 1e-12)) {
            return Err(Error::StepTooLarge { dt, limit });
        }
        Ok(())
    }

    /// Coupling constant κ = J|Q|T/√(Δ² + γ_a²).
    pub fn kappa(&self) -> f64 {
        self.j * self.q.abs() * self.pulse_duration
            / (self.detuning * self.detuning + self.gamma_a * self.gamma_a).sqrt()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub enum CellOrientation {
    /// Cells polarized in opposite directions; back-action cancels in the sum.
    Opposite,
    Parallel,
}

impl CellOrientation {
    pub fn signs(self) -> [f64; 2] {
        match self {
            CellOrientation::Opposite => [1.0, -1.0],
            CellOrientation::Parallel => [1.0, 1.0],
        }
    }
}

/// Deterministic S_z drive injected on top of any noise.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub enum SzDrive {
    None,
    Constant(f64),
    /// Light displaced by (p_L,y, p_L,z) in quadrature units.
    Quadrature([f64; 2]),
}

impl SzDrive {
    fn at(&self, s: f64, c: f64) -> f64 {
        match *self {
            SzDrive::None => 0.0,
            SzDrive::Constant(v) => v,
            SzDrive::Quadrature([py, pz]) => SQRT_2 * (py * s + pz * c),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Default, Serialize)]
pub struct RotatingFrameState {
    pub t: f64,
    /// Alkali fluctuations per cell, (y, z).
    pub f: [[f64; 2]; 2],
    /// Noble-gas fluctuations per cell, (y, z).
    pub k: [[f64; 2]; 2],
    /// Accumulated light quadratures, (y, z) sectors.
    pub x_l: [f64; 2],
    pub p_l: [f64; 2],
}

/// Cell components from the two-cell canonical quadratures of both sectors.
pub fn cells_from_quadratures(x_b: [f64; 2], p_b: [f64; 2]) -> [[f64; 2]; 2] {
    let [xy, xz] = x_b;
    let [py, pz] = p_b;
    [
        [(py + xz) / SQRT_2, (pz - xy) / SQRT_2],
        [(xz - py) / SQRT_2, (-xy - pz) / SQRT_2],
    ]
}

/// Inverse of [`cells_from_quadratures`]: returns (x_b, p_b).
pub fn quadratures_from_cells(k: [[f64; 2]; 2]) -> ([f64; 2], [f64; 2]) {
    let [[k1y, k1z], [k2y, k2z]] = k;
    (
        [-(k1z + k2z) / SQRT_2, (k1y + k2y) / SQRT_2],
        [(k1y - k2y) / SQRT_2, (k1z - k2z) / SQRT_2],
    )
}

#[inline]
fn cross(v: [f64; 2]) -> [f64; 2] {
    [v[1], -v[0]]
}

#[inline]
fn dot(a: [f64; 2], b: [f64; 2]) -> f64 {
    a[0] * b[0] + a[1] * b[1]
}

/// Steady-state alkali response to k and S_z including the ψ rotation.
pub fn alkali_steady_state(model: &FrameModel, sign: f64, k: [f64; 2], sz: f64, theta: f64) -> [f64; 2] {
    let d = model.detuning + model.shift();
    let g = model.gamma_a;
    let den = d * d + g * g;
    let (s, c) = theta.sin_cos();
    let e = [s, c];
    let u = [c, -s];
    let ck = cross(k);
    let mut out = [0.0; 2];
    for i in 0..2 {
        out[i] = sign
            * (model.j * (d * k[i] + g * ck[i]) + model.q * sz * (d * e[i] + g * u[i]))
            / den;
    }
    out
}

/// Leading-order following f = ±(J/Δ)k ± (Q/Δ)S_z e(t), with no phase lag.
pub fn alkali_eliminated(model: &FrameModel, sign: f64, k: [f64; 2], sz: f64, theta: f64) -> [f64; 2] {
    let (s, c) = theta.sin_cos();
    let d = model.detuning;
    [
        sign * (model.j * k[0] + model.q * sz * s) / d,
        sign * (model.j * k[1] + model.q * sz * c) / d,
    ]
}

impl RotatingFrameState {
    /// Noble-gas displacement (x_b, p_b) with the alkali in its steady state.
    pub fn prepared(model: &FrameModel, orientation: CellOrientation, x_b: [f64; 2], p_b: [f64; 2]) -> Self {
        let k = cells_from_quadratures(x_b, p_b);
        let signs = orientation.signs();
        let f = [
            alkali_steady_state(model, signs[0], k[0], 0.0, 0.0),
            alkali_steady_state(model, signs[1], k[1], 0.0, 0.0),
        ];
        RotatingFrameState {
            f,
            k,
            ..Default::default()
        }
    }

    /// Noble-gas displacement with the alkali at rest.
    pub fn displaced(x_b: [f64; 2], p_b: [f64; 2]) -> Self {
        RotatingFrameState {
            k: cells_from_quadratures(x_b, p_b),
            ..Default::default()
        }
    }

    pub fn noble_quadratures(&self) -> ([f64; 2], [f64; 2]) {
        quadratures_from_cells(self.k)
    }

    fn pack(&self) -> [f64; N] {
        let mut y = [0.0; N];
        y[0..2].copy_from_slice(&self.f[0]);
        y[2..4].copy_from_slice(&self.f[1]);
        y[4..6].copy_from_slice(&self.k[0]);
        y[6..8].copy_from_slice(&self.k[1]);
        y[8..10].copy_from_slice(&self.x_l);
        y[10..12].copy_from_slice(&self.p_l);
        y[12..14].copy_from_slice(&self.k[0]);
        y[14..16].copy_from_slice(&self.k[1]);
        y
    }

    fn unpack(t: f64, y: &[f64; N]) -> Self {
        RotatingFrameState {
            t,
            f: [[y[0], y[1]], [y[2], y[3]]],
            k: [[y[4], y[5]], [y[6], y[7]]],
            x_l: [y[8], y[9]],
            p_l: [y[10], y[11]],
        }
    }
}

/// Full state plus the companion noble-gas pair evolved under the eliminated model.
const N: usize = 16;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Noise {
    Off,
    On { seed: u64, index: u64 },
}

/// Step-by-step integrator: RK4 without noise, Euler–Maruyama with noise.
pub struct FrameIntegrator {
    model: FrameModel,
    signs: [f64; 2],
    /// δ.
    shift: f64,
    /// Δ + δ.
    alkali_detuning: f64,
    frame_frequency: f64,
    drive: SzDrive,
    dt: f64,
    t: f64,
    y: [f64; N],
    rng: Option<ChaCha8Rng>,
}

impl FrameIntegrator {
    pub fn new(
        model: &FrameModel,
        orientation: CellOrientation,
        initial: &RotatingFrameState,
        dt: f64,
        drive: SzDrive,
        noise: Noise,
    ) -> Result<Self> {
        model.check_step(dt)?;
        let shift = model.shift();
        Ok(FrameIntegrator {
            model: *model,
            signs: orientation.signs(),
            shift,
            alkali_detuning: model.detuning + shift,
            frame_frequency: model.omega_b - shift,
            drive,
            dt,
            t: initial.t,
            y: initial.pack(),
            rng: match noise {
                Noise::Off => None,
                Noise::On { seed, index } => Some(trajectory_rng(seed, index)),
            },
        })
    }

    pub fn time(&self) -> f64 {
        self.t
    }

    pub fn theta(&self) -> f64 {
        self.frame_frequency * self.t
    }

    pub fn state(&self) -> RotatingFrameState {
        RotatingFrameState::unpack(self.t, &self.y)
    }

    /// Noble-gas pair of the eliminated companion model.
    pub fn eliminated_noble(&self) -> [[f64; 2]; 2] {
        [[self.y[12], self.y[13]], [self.y[14], self.y[15]]]
    }

    /// Deterministic S_z drive at the current time.
    pub fn sz(&self) -> f64 {
        let (s, c) = self.theta().sin_cos();
        self.drive.at(s, c)
    }

    /// Noise-free Faraday signal T·Q·Σ f_i·e(t) at the current time.
    pub fn faraday_signal(&self) -> f64 {
        let (s, c) = self.theta().sin_cos();
        let e = [s, c];
        let sum = [self.y[0] + self.y[2], self.y[1] + self.y[3]];
        self.model.pulse_duration * self.model.q * dot(sum, e)
    }

    /// Eliminated-model alkali response to the current full noble-gas state.
    pub fn eliminated_alkali(&self) -> [[f64; 2]; 2] {
        let th = self.theta();
        let sz = self.sz();
        let k = self.state().k;
        [
            alkali_eliminated(&self.model, self.signs[0], k[0], sz, th),
            alkali_eliminated(&self.model, self.signs[1], k[1], sz, th),
        ]
    }

    fn derivative(&self, t: f64, y: &[f64; N]) -> [f64; N] {
        let m = &self.model;
        let (s, c) = (self.frame_frequency * t).sin_cos();
        let e = [s, c];
        let u = [c, -s];
        let sz = self.drive.at(s, c);
        let mut dy = [0.0; N];
        let mut f_sum = [0.0; 2];
        for cell in 0..2 {
            let sg = self.signs[cell];
            let f = [y[2 * cell], y[2 * cell + 1]];
            let k = [y[4 + 2 * cell], y[5 + 2 * cell]];
            let kel = [y[12 + 2 * cell], y[13 + 2 * cell]];

            let df = cross([
                sg * m.j * k[0] - self.alkali_detuning * f[0],
                sg * m.j * k[1] - self.alkali_detuning * f[1],
            ]);
            let dk = cross([
                sg * m.j * f[0] - self.shift * k[0],
                sg * m.j * f[1] - self.shift * k[1],
            ]);
            let fel = alkali_eliminated(m, sg, kel, sz, self.frame_frequency * t);
            let dkel = cross([
                sg * m.j * fel[0] - self.shift * kel[0],
                sg * m.j * fel[1] - self.shift * kel[1],
            ]);
            for a in 0..2 {
                dy[2 * cell + a] = df[a] + sg * m.q * sz * u[a] - m.gamma_a * f[a];
                dy[4 + 2 * cell + a] = dk[a] - m.gamma_b * k[a];
                dy[12 + 2 * cell + a] = dkel[a] - m.gamma_b * kel[a];
                f_sum[a] += f[a];
            }
        }
        let signal = m.pulse_duration * m.q * dot(f_sum, e);
        let norm = SQRT_2 / m.pulse_duration;
        dy[8] = norm * signal * s;
        dy[9] = norm * signal * c;
        dy[10] = norm * sz * s;
        dy[11] = norm * sz * c;
        dy
    }

    pub fn step(&mut self) {
        match self.rng.take() {
            None => self.step_rk4(),
            Some(mut rng) => {
                self.step_em(&mut rng);
                self.rng = Some(rng);
            }
        }
    }

    fn step_rk4(&mut self) {
        let (t, h) = (self.t, self.dt);
        let add = |y: &[f64; N], k: &[f64; N], w: f64| {
            let mut out = *y;
            for i in 0..N {
                out[i] += w * k[i];
            }
            out
        };
        let k1 = self.derivative(t, &self.y);
        let k2 = self.derivative(t + h / 2.0, &add(&self.y, &k1, h / 2.0));
        let k3 = self.derivative(t + h / 2.0, &add(&self.y, &k2, h / 2.0));
        let k4 = self.derivative(t + h, &add(&self.y, &k3, h));
        for i in 0..N {
            self.y[i] += h / 6.0 * (k1[i] + 2.0 * k2[i] + 2.0 * k3[i] + k4[i]);
        }
        self.t += h;
    }

    fn step_em(&mut self, rng: &mut ChaCha8Rng) {
        let m = self.model;
        let (t, h) = (self.t, self.dt);
        let drift = self.derivative(t, &self.y);
        let (s, c) = (self.frame_frequency * t).sin_cos();
        let u = [c, -s];
        let sqrt_h = h.sqrt();
        let dw_y = normal(rng, sqrt_h);
        let dw_z = normal(rng, sqrt_h);
        let sz_increment = (m.pulse_duration / 2.0).sqrt() * dw_z;
        let alkali_sd = (m.q_factor * m.gamma_a * h).sqrt();
        let noble_sd = (m.gamma_b * h).sqrt();
        for i in 0..N {
            self.y[i] += h * drift[i];
        }
        for cell in 0..2 {
            let sg = self.signs[cell];
            for a in 0..2 {
                self.y[2 * cell + a] += sg * m.q * sz_increment * u[a] + normal(rng, alkali_sd);
                let dk = normal(rng, noble_sd);
                self.y[4 + 2 * cell + a] += dk;
                self.y[12 + 2 * cell + a] += dk;
            }
        }
        let shot = 1.0 / m.pulse_duration.sqrt();
        self.y[8] += shot * s * dw_y;
        self.y[9] += shot * c * dw_y;
        self.y[10] += shot * s * dw_z;
        self.y[11] += shot * c * dw_z;
        self.t += h;
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct IntegrationOptions {
    pub dt: f64,
    pub t_final: f64,
    pub orientation: CellOrientation,
    pub drive: SzDrive,
    pub noise: Noise,
    /// Record every n-th step (the final state is always recorded).
    pub record_every: usize,
}

impl Serialize for Noise {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        match self {
            Noise::Off => s.serialize_str("off"),
            Noise::On { seed, index } => s.serialize_str(&format!("seed={seed},index={index}")),
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct FrameSample {
    pub state: RotatingFrameState,
    /// Eliminated-model alkali evaluated on the full noble-gas state.
    pub eliminated_f: [[f64; 2]; 2],
    /// Noble-gas pair evolved under the eliminated model.
    pub eliminated_k: [[f64; 2]; 2],
}

/// Integrate from `initial` and return the recorded samples, first and last included.
pub fn integrate_rotating_frame(
    model: &FrameModel,
    initial: &RotatingFrameState,
    options: &IntegrationOptions,
) -> Result<Vec<FrameSample>> {
    if !(options.t_final > 0.0) {
        return Err(Error::validation("t_final", "must be > 0"));
    }
    let mut it = FrameIntegrator::new(
        model,
        options.orientation,
        initial,
        options.dt,
        options.drive,
        options.noise,
    )?;
    let steps = (options.t_final / options.dt).round() as usize;
    let every = options.record_every.max(1);
    let sample = |it: &FrameIntegrator| FrameSample {
        state: it.state(),
        eliminated_f: it.eliminated_alkali(),
        eliminated_k: it.eliminated_noble(),
    };
    let mut out = Vec::with_capacity(steps / every + 2);
    out.push(sample(&it));
    for n in 1..=steps {
        it.step();
        if n % every == 0 || n == steps {
            out.push(sample(&it));
        }
    }
    Ok(out)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct KappaEstimate {
    /// Amplitude of the least-squares fit of the Faraday signal to the noble-gas difference.
    pub fitted: f64,
    /// |x_L| accumulated over the pulse.
    pub accumulated: f64,
    pub x_l: [f64; 2],
    /// Closed-form κ of the model.
    pub expected: f64,
}

/// Response of the light record to a unit p_b,y displacement over one pulse.
///
/// The signal is fitted as c₁(Δk·e) + c₂(cross(Δk)·e) with Δk = k₁ − k₂ taken
/// from the trajectory itself, which removes the effects of noble-gas decay,
/// the ψ phase and incomplete averaging of the fast terms. κ = √(c₁² + c₂²).
pub fn kappa_from_trajectories(model: &FrameModel, dt: f64, p_b: [f64; 2]) -> Result<KappaEstimate> {
    let orientation = CellOrientation::Opposite;
    let initial = RotatingFrameState::prepared(model, orientation, [0.0, 0.0], p_b);
    let mut it = FrameIntegrator::new(model, orientation, &initial, dt, SzDrive::None, Noise::Off)?;
    let steps = (model.pulse_duration / dt).round() as usize;
    let (mut s11, mut s12, mut s22, mut s1y, mut s2y) = (0.0, 0.0, 0.0, 0.0, 0.0);
    for n in 0..=steps {
        let st = it.state();
        let dk = [st.k[0][0] - st.k[1][0], st.k[0][1] - st.k[1][1]];
        let (s, c) = it.theta().sin_cos();
        let e = [s, c];
        let a = dot(dk, e);
        let b = dot(cross(dk), e);
        let y = it.faraday_signal();
        s11 += a * a;
        s12 += a * b;
        s22 += b * b;
        s1y += a * y;
        s2y += b * y;
        if n < steps {
            it.step();
        }
    }
    let det = s11 * s22 - s12 * s12;
    let fitted = if det > 0.0 {
        let c1 = (s22 * s1y - s12 * s2y) / det;
        let c2 = (s11 * s2y - s12 * s1y) / det;
        c1.hypot(c2)
    } else {
        0.0
    };
    let x_l = it.state().x_l;
    Ok(KappaEstimate {
        fitted,
        accumulated: x_l[0].hypot(x_l[1]),
        x_l,
        expected: model.kappa(),
    })
}

/// |x_L| after one pulse of a unit p_L,y light displacement with the noble gas
/// and alkali initially at rest.
pub fn faraday_response(model: &FrameModel, dt: f64, orientation: CellOrientation) -> Result<f64> {
    let opts = IntegrationOptions {
        dt,
        t_final: model.pulse_duration,
        orientation,
        drive: SzDrive::Quadrature([1.0, 0.0]),
        noise: Noise::Off,
        record_every: usize::MAX,
    };
    let samples = integrate_rotating_frame(model, &RotatingFrameState::default(), &opts)?;
    let x = samples.last().map(|s| s.state.x_l).unwrap_or_default();
    Ok(x[0].hypot(x[1]))
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct AdiabaticReport {
    pub detuning: f64,
    /// max over the window of |f − f_elim| / |f_elim|.
    pub max_relative: f64,
    pub rms_relative: f64,
}

/// Deviation of the full alkali trajectory from leading-order following,
/// measured after the start-up transient. The noble gas starts from a unit
/// p_b,y displacement with the alkali at rest.
pub fn adiabatic_deviation(model: &FrameModel, dt: f64, settle: f64, duration: f64) -> Result<AdiabaticReport> {
    let orientation = CellOrientation::Opposite;
    let initial = RotatingFrameState::displaced([0.0, 0.0], [1.0, 0.0]);
    let mut it = FrameIntegrator::new(model, orientation, &initial, dt, SzDrive::None, Noise::Off)?;
    let steps = (duration / dt).round() as usize;
    let (mut worst, mut sum_sq, mut count) = (0.0f64, 0.0, 0usize);
    for _ in 0..steps {
        it.step();
        if it.time() < settle {
            continue;
        }
        let f = it.state().f;
        let fe = it.eliminated_alkali();
        let mut num = 0.0;
        let mut den = 0.0;
        for cell in 0..2 {
            for a in 0..2 {
                num += (f[cell][a] - fe[cell][a]).powi(2);
                den += fe[cell][a].powi(2);
            }
        }
        let rel = (num / den).sqrt();
        worst = worst.max(rel);
        sum_sq += rel * rel;
        count += 1;
    }
    if count == 0 {
        return Err(Error::validation("duration", "must exceed the settling time"));
    }
    Ok(AdiabaticReport {
        detuning: model.detuning,
        max_relative: worst,
        rms_relative: (sum_sq / count as f64).sqrt(),
    })
}

/// Scaled toy system for elimination checks: J = Q = γ_a = ω_b = 1, Δ = 50.
pub fn reference_model() -> FrameModel {
    FrameModel {
        j: 1.0,
        q: 1.0,
        detuning: 50.0,
        gamma_a: 1.0,
        gamma_b: 0.0,
        q_factor: 1.0,
        omega_b: 1.0,
        pulse_duration: 1.0,
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct AdiabaticScan {
    pub reports: Vec<AdiabaticReport>,
    /// Log-log slope of the maximal deviation against Δ.
    pub exponent: f64,
}

/// [`adiabatic_deviation`] at each detuning. Without an explicit `dt` each run
/// uses its largest allowed step.
pub fn adiabatic_scan(
    base: &FrameModel,
    detunings: &[f64],
    dt: Option<f64>,
    settle: f64,
    duration: f64,
) -> Result<AdiabaticScan> {
    if detunings.len() < 2 {
        return Err(Error::validation("detunings", "need at least two values"));
    }
    let reports = detunings
        .par_iter()
        .map(|&d| {
            let model = FrameModel { detuning: d, ..*base };
            adiabatic_deviation(&model, dt.unwrap_or(model.max_step()), settle, duration)
        })
        .collect::<Result<Vec<_>>>()?;
    let pts: Vec<(f64, f64)> = reports
        .iter()
        .map(|r| (r.detuning.ln(), r.max_relative.ln()))
        .collect();
    let n = pts.len() as f64;
    let mx = pts.iter().map(|p| p.0).sum::<f64>() / n;
    let my = pts.iter().map(|p| p.1).sum::<f64>() / n;
    let sxy: f64 = pts.iter().map(|p| (p.0 - mx) * (p.1 - my)).sum();
    let sxx: f64 = pts.iter().map(|p| (p.0 - mx).powi(2)).sum();
    Ok(AdiabaticScan {
        reports,
        exponent: sxy / sxx,
    })
}
