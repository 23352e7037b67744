//! Explicit Runge–Kutta stepping for complex linear ODEs `ẏ = f(t, y)`.
//!
//! The right-hand side is sampled at the stage times themselves, so explicitly
//! time-dependent generators keep the full order of the method.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Anything the integrators can step: a dense complex array.
pub trait OdeState: Clone {
    /// `self += a · x`.
    fn add_scaled(&mut self, a: f64, x: &Self);
    fn values(&self) -> &[C64];
}

impl OdeState for DVector<C64> {
    fn add_scaled(&mut self, a: f64, x: &Self) {
        self.axpy(C64::new(a, 0.0), x, C64::new(1.0, 0.0));
    }

    fn values(&self) -> &[C64] {
        self.as_slice()
    }
}

impl OdeState for DMatrix<C64> {
    fn add_scaled(&mut self, a: f64, x: &Self) {
        let a = C64::new(a, 0.0);
        self.zip_apply(x, |s, v| *s += a * v);
    }

    fn values(&self) -> &[C64] {
        self.as_slice()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum Method {
    /// Classical fourth-order Runge–Kutta with a fixed step.
    Rk4Fixed,
    /// Dormand–Prince 5(4) with embedded error control.
    Rk45Adaptive { abs_tol: f64, rel_tol: f64 },
}

/// How to integrate and where to sample.
///
/// Output times are `k · dt · sample_every` for `k = 0, 1, …`, with `t_end`
/// always included as the final sample. In adaptive mode `dt` is only the
/// initial step guess; the output grid is the same.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct IntegratorConfig {
    pub method: Method,
    pub dt: f64,
    pub t_end: f64,
    pub sample_every: usize,
}

/// Default points per period of the fastest frequency.
const STEPS_PER_PERIOD: f64 = 50.0;
/// Smallest step the adaptive stepper may take, relative to `t_end`.
const MIN_STEP_FRACTION: f64 = 1e-14;
const MAX_ADAPTIVE_STEPS: usize = 50_000_000;

impl IntegratorConfig {
    pub fn rk4(dt: f64, t_end: f64, sample_every: usize) -> Self {
        Self {
            method: Method::Rk4Fixed,
            dt,
            t_end,
            sample_every,
        }
    }

    pub fn rk45(abs_tol: f64, rel_tol: f64, output_dt: f64, t_end: f64) -> Self {
        Self {
            method: Method::Rk45Adaptive { abs_tol, rel_tol },
            dt: output_dt,
            t_end,
            sample_every: 1,
        }
    }

    /// RK4 sampled at `samples` evenly spaced points on `[0, t_end]`, with the
    /// step `min(2π / (50 ω_max), sample spacing)` shrunk so that it divides
    /// the spacing evenly.
    pub fn uniform_rk4(max_frequency: f64, t_end: f64, samples: usize) -> Result<Self> {
        if samples < 2 {
            return Err(Error::invalid("need at least two samples"));
        }
        if !(t_end > 0.0 && t_end.is_finite()) {
            return Err(Error::invalid("t_end must be positive"));
        }
        let spacing = t_end / (samples - 1) as f64;
        let dt_max = if max_frequency > 0.0 {
            (std::f64::consts::TAU / (STEPS_PER_PERIOD * max_frequency)).min(spacing)
        } else {
            spacing
        };
        let per_sample = (spacing / dt_max - 1e-9).ceil().max(1.0) as usize;
        Ok(Self::rk4(spacing / per_sample as f64, t_end, per_sample))
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.dt > 0.0 && self.dt.is_finite()) {
            return Err(Error::invalid(format!(
                "dt must be positive, got {}",
                self.dt
            )));
        }
        if !(self.t_end >= 0.0 && self.t_end.is_finite()) {
            return Err(Error::invalid(format!(
                "t_end must be non-negative, got {}",
                self.t_end
            )));
        }
        if self.sample_every == 0 {
            return Err(Error::invalid("sample_every must be at least 1"));
        }
        if let Method::Rk45Adaptive { abs_tol, rel_tol } = self.method {
            if !(abs_tol > 0.0 && rel_tol > 0.0) {
                return Err(Error::invalid("tolerances must be positive"));
            }
        }
        Ok(())
    }

    /// Number of fixed steps and the step actually used, `t_end / n_steps`.
    fn fixed_steps(&self) -> (usize, f64) {
        if self.t_end == 0.0 {
            return (0, self.dt);
        }
        let n = (self.t_end / self.dt - 1e-9).ceil().max(1.0) as usize;
        (n, self.t_end / n as f64)
    }

    /// The sample times this configuration produces.
    pub fn output_times(&self) -> Vec<f64> {
        let (n, dt) = self.fixed_steps();
        let mut times: Vec<f64> = (0..=n)
            .step_by(self.sample_every)
            .map(|k| k as f64 * dt)
            .collect();
        if n % self.sample_every != 0 {
            times.push(self.t_end);
        }
        if let Some(last) = times.last_mut() {
            *last = self.t_end;
        }
        times
    }
}

fn rk4_step<Y, F>(f: &mut F, t: f64, y: &Y, dt: f64) -> Y
where
    Y: OdeState,
    F: FnMut(f64, &Y) -> Y,
{
    let k1 = f(t, y);
    let mut tmp = y.clone();
    tmp.add_scaled(0.5 * dt, &k1);
    let k2 = f(t + 0.5 * dt, &tmp);
    tmp = y.clone();
    tmp.add_scaled(0.5 * dt, &k2);
    let k3 = f(t + 0.5 * dt, &tmp);
    tmp = y.clone();
    tmp.add_scaled(dt, &k3);
    let k4 = f(t + dt, &tmp);

    let mut out = y.clone();
    out.add_scaled(dt / 6.0, &k1);
    out.add_scaled(dt / 3.0, &k2);
    out.add_scaled(dt / 3.0, &k3);
    out.add_scaled(dt / 6.0, &k4);
    out
}

// Dormand–Prince 5(4) tableau.
const DP_C: [f64; 7] = [0.0, 1.0 / 5.0, 3.0 / 10.0, 4.0 / 5.0, 8.0 / 9.0, 1.0, 1.0];
const DP_A: [&[f64]; 7] = [
    &[],
    &[1.0 / 5.0],
    &[3.0 / 40.0, 9.0 / 40.0],
    &[44.0 / 45.0, -56.0 / 15.0, 32.0 / 9.0],
    &[
        19372.0 / 6561.0,
        -25360.0 / 2187.0,
        64448.0 / 6561.0,
        -212.0 / 729.0,
    ],
    &[
        9017.0 / 3168.0,
        -355.0 / 33.0,
        46732.0 / 5247.0,
        49.0 / 176.0,
        -5103.0 / 18656.0,
    ],
    &[
        35.0 / 384.0,
        0.0,
        500.0 / 1113.0,
        125.0 / 192.0,
        -2187.0 / 6784.0,
        11.0 / 84.0,
    ],
];
/// Fifth-order weights minus embedded fourth-order weights.
const DP_E: [f64; 7] = [
    71.0 / 57600.0,
    0.0,
    -71.0 / 16695.0,
    71.0 / 1920.0,
    -17253.0 / 339200.0,
    22.0 / 525.0,
    -1.0 / 40.0,
];

/// One Dormand–Prince step; returns the fifth-order solution and the scaled
/// error norm (≤ 1 means accept).
fn dp_step<Y, F>(f: &mut F, t: f64, y: &Y, h: f64, abs_tol: f64, rel_tol: f64) -> (Y, f64)
where
    Y: OdeState,
    F: FnMut(f64, &Y) -> Y,
{
    let mut k: Vec<Y> = Vec::with_capacity(7);
    let mut stage_y = y.clone();
    for (row, c) in DP_A.iter().zip(DP_C) {
        stage_y.clone_from(y);
        for (a, kj) in row.iter().zip(&k) {
            if *a != 0.0 {
                stage_y.add_scaled(h * a, kj);
            }
        }
        k.push(f(t + c * h, &stage_y));
    }
    // the last stage point is the fifth-order solution
    let mut err = k[0].clone();
    err.add_scaled(-1.0, &k[0]);
    for (e, ki) in DP_E.iter().zip(&k) {
        if *e != 0.0 {
            err.add_scaled(h * e, ki);
        }
    }
    let norm = err
        .values()
        .iter()
        .zip(y.values().iter().zip(stage_y.values()))
        .map(|(e, (a, b))| e.norm() / (abs_tol + rel_tol * a.norm().max(b.norm())))
        .fold(
            0.0,
            |m: f64, v| if v.is_nan() { f64::INFINITY } else { m.max(v) },
        );
    (stage_y, norm)
}

/// Integrates from `t = 0` and returns the sampled times and states.
///
/// `post_step` runs on the state after every accepted step (the Lindblad
/// integrator uses it to re-symmetrize `ρ`).
pub fn integrate<Y, F, P>(
    mut f: F,
    y0: Y,
    cfg: &IntegratorConfig,
    mut post_step: P,
) -> Result<(Vec<f64>, Vec<Y>)>
where
    Y: OdeState,
    F: FnMut(f64, &Y) -> Y,
    P: FnMut(&mut Y),
{
    cfg.validate()?;
    let times = cfg.output_times();
    let mut states = Vec::with_capacity(times.len());
    states.push(y0.clone());
    let mut y = y0;

    match cfg.method {
        Method::Rk4Fixed => {
            let (n, dt) = cfg.fixed_steps();
            for step in 0..n {
                let t = step as f64 * dt;
                y = rk4_step(&mut f, t, &y, dt);
                post_step(&mut y);
                if !y
                    .values()
                    .iter()
                    .all(|c| c.re.is_finite() && c.im.is_finite())
                {
                    return Err(Error::IntegrationFailure {
                        t_reached: t,
                        reason: "state became non-finite".into(),
                    });
                }
                let done = step + 1;
                if done % cfg.sample_every == 0 || done == n {
                    states.push(y.clone());
                }
            }
        }
        Method::Rk45Adaptive { abs_tol, rel_tol } => {
            let h_min = MIN_STEP_FRACTION * cfg.t_end.max(f64::MIN_POSITIVE);
            let mut t = 0.0;
            let mut h = cfg.dt;
            let mut steps = 0usize;
            for &t_out in &times[1..] {
                while t < t_out {
                    let last = h >= t_out - t;
                    let h_try = if last { t_out - t } else { h };
                    let (y_new, err) = dp_step(&mut f, t, &y, h_try, abs_tol, rel_tol);
                    steps += 1;
                    let factor = if err == 0.0 {
                        5.0
                    } else if !err.is_finite() {
                        0.2
                    } else {
                        (0.9 * err.powf(-0.2)).clamp(0.2, 5.0)
                    };
                    if err <= 1.0 {
                        t = if last { t_out } else { t + h_try };
                        y = y_new;
                        post_step(&mut y);
                        // a step clipped to the output grid says nothing about h
                        h = if last {
                            h.max(h_try * factor)
                        } else {
                            h_try * factor
                        };
                    } else {
                        h = h_try * factor.min(1.0);
                    }
                    if h < h_min || !h.is_finite() {
                        return Err(Error::IntegrationFailure {
                            t_reached: t,
                            reason: format!("step size underflow (h = {h:e})"),
                        });
                    }
                    if steps > MAX_ADAPTIVE_STEPS {
                        return Err(Error::IntegrationFailure {
                            t_reached: t,
                            reason: "step budget exhausted".into(),
                        });
                    }
                }
                states.push(y.clone());
            }
        }
    }
    debug_assert_eq!(times.len(), states.len());
    Ok((times, states))
}
