//! Closed-form single-excitation amplitudes for balanced couplings.
//!
//! Resonant case (`g₁ = g₂ = g`, `J₁ = J₂ = J`), with `W = √(J² + 2g²)` and
//! amplitudes ordered `NE₁, Q₁, Q₂, BUS, NE₂`:
//!
//! ```text
//! C₁ =  g²/W² + ½ cos Jt + J²/(2W²) cos Wt
//! C₂ = −i ½ sin Jt − i J/(2W) sin Wt
//! C₃ =  i ½ sin Jt − i J/(2W) sin Wt
//! C₄ = −Jg/W² + Jg/W² cos Wt
//! C₅ =  g²/W² − ½ cos Jt + J²/(2W²) cos Wt
//! ```
//!
//! Dispersive case (`λ₁ = λ₂ = λ`, `J₁ = J₂ = J`), with `κ = √(λ² + J²)` and
//! amplitudes ordered `NE₁, Q₁, Q₂, NE₂`:
//!
//! ```text
//! D₁ = J²/(4(κ²+λκ)) e^{−i(λ+κ)t} + J²/(4(κ²−λκ)) e^{−i(λ−κ)t} + ½ cos Jt
//! D₂ = J(λ+κ)/(4(κ²+λκ)) e^{−i(λ+κ)t} + J(λ−κ)/(4(κ²−λκ)) e^{−i(λ−κ)t} − i ½ sin Jt
//! D₃ = (same exponentials as D₂)                                      + i ½ sin Jt
//! D₄ = (same exponentials as D₁)                                      − ½ cos Jt
//! ```
//!
//! Both start from the excitation on the first ensemble.

use log::warn;
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Ratio beyond which a coupling counts as "much larger" than the other.
pub const STRONG_COUPLING_RATIO: f64 = 10.0;

const I: C64 = C64 { re: 0.0, im: 1.0 };

fn real(x: f64) -> C64 {
    C64::new(x, 0.0)
}

fn check_nonnegative(name: &str, v: f64) -> Result<()> {
    if v >= 0.0 && v.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be finite and non-negative, got {v}"
        )))
    }
}

/// Amplitudes on `NE₁, Q₁, Q₂, BUS, NE₂` for the resonant interaction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct ResonantCoefficients {
    pub c: [C64; 5],
}

impl ResonantCoefficients {
    pub fn c1(&self) -> C64 {
        self.c[0]
    }

    pub fn c5(&self) -> C64 {
        self.c[4]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.c.iter().map(|c| c.norm_sqr()).sum()
    }
}

pub fn resonant_coefficients(t: f64, g: f64, j: f64) -> Result<ResonantCoefficients> {
    check_nonnegative("g", g)?;
    check_nonnegative("J", j)?;
    if g == 0.0 && j == 0.0 {
        return Err(Error::DegenerateParameters(
            "g and J are both zero; nothing couples".into(),
        ));
    }
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    let w2 = j * j + 2.0 * g * g;
    let w = w2.sqrt();
    let (sj, cj) = (j * t).sin_cos();
    let (sw, cw) = (w * t).sin_cos();
    let c1 = g * g / w2 + 0.5 * cj + j * j / (2.0 * w2) * cw;
    let c2 = -I * (0.5 * sj) - I * (j / (2.0 * w) * sw);
    let c3 = I * (0.5 * sj) - I * (j / (2.0 * w) * sw);
    let c4 = -j * g / w2 + j * g / w2 * cw;
    let c5 = g * g / w2 - 0.5 * cj + j * j / (2.0 * w2) * cw;
    Ok(ResonantCoefficients {
        c: [real(c1), c2, c3, real(c4), real(c5)],
    })
}

/// Amplitudes on `NE₁, Q₁, Q₂, NE₂` for the effective dispersive interaction.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct DispersiveCoefficients {
    pub d: [C64; 4],
    /// `κ = √(λ² + J²)`.
    pub kappa: f64,
}

impl DispersiveCoefficients {
    pub fn d1(&self) -> C64 {
        self.d[0]
    }

    pub fn d4(&self) -> C64 {
        self.d[3]
    }

    pub fn norm_sqr(&self) -> f64 {
        self.d.iter().map(|d| d.norm_sqr()).sum()
    }
}

pub fn dispersive_coefficients(t: f64, lambda: f64, j: f64) -> Result<DispersiveCoefficients> {
    if !t.is_finite() {
        return Err(Error::invalid("time must be finite"));
    }
    if lambda == 0.0 {
        return Err(Error::DegenerateParameters(
            "λ = 0 decouples the qubits; use the resonant two-qubit limit instead".into(),
        ));
    }
    if !(lambda > 0.0 && lambda.is_finite()) {
        return Err(Error::invalid(format!("λ must be positive, got {lambda}")));
    }
    check_nonnegative("J", j)?;
    if j == 0.0 {
        return Err(Error::SingularDenominator(
            "J = 0 gives κ = λ and κ² − λκ = 0".into(),
        ));
    }
    let kappa = lambda.hypot(j);
    let plus = 4.0 * (kappa * kappa + lambda * kappa);
    let minus = 4.0 * (kappa * kappa - lambda * kappa);
    let e_plus = C64::from_polar(1.0, -(lambda + kappa) * t);
    let e_minus = C64::from_polar(1.0, -(lambda - kappa) * t);
    let (sj, cj) = (j * t).sin_cos();

    let outer = e_plus * (j * j / plus) + e_minus * (j * j / minus);
    let inner = e_plus * (j * (lambda + kappa) / plus) + e_minus * (j * (lambda - kappa) / minus);
    Ok(DispersiveCoefficients {
        d: [
            outer + 0.5 * cj,
            inner - I * (0.5 * sj),
            inner + I * (0.5 * sj),
            outer - 0.5 * cj,
        ],
        kappa,
    })
}

/// The three coupling regimes discussed for balanced resonant transfer.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum LimitCase {
    /// `g = J`.
    Equilibrium,
    /// `J ≫ g`.
    StrongMagnetic,
    /// `J ≪ g`.
    StrongInductance,
}

/// `(C₁, C₅)` under one of the limiting approximations.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LimitEvaluation {
    pub c1: C64,
    pub c5: C64,
    /// False when `(g, J)` lie outside the regime the approximation assumes.
    pub in_regime: bool,
}

/// Evaluates the simplified amplitudes for `which`. Parameters outside the
/// stated regime produce a warning and `in_regime = false`, not an error.
///
/// `StrongMagnetic` has no simpler form, so it returns the full resonant
/// amplitudes.
pub fn limit_case(which: LimitCase, t: f64, g: f64, j: f64) -> Result<LimitEvaluation> {
    let (c1, c5, in_regime) = match which {
        LimitCase::Equilibrium => {
            let (cj, c3) = ((j * t).cos(), (3f64.sqrt() * j * t).cos());
            let c1 = 1.0 / 3.0 + 0.5 * cj + c3 / 6.0;
            let c5 = 1.0 / 3.0 - 0.5 * cj + c3 / 6.0;
            let close = (g - j).abs() <= 1e-9 * g.abs().max(j.abs());
            (real(c1), real(c5), close)
        }
        LimitCase::StrongInductance => {
            let cj = (j * t).cos();
            (
                real(0.5 + 0.5 * cj),
                real(0.5 - 0.5 * cj),
                j * STRONG_COUPLING_RATIO <= g,
            )
        }
        LimitCase::StrongMagnetic => {
            let full = resonant_coefficients(t, g, j)?;
            (full.c1(), full.c5(), j >= STRONG_COUPLING_RATIO * g)
        }
    };
    if !in_regime {
        warn!("{which:?} approximation evaluated outside its regime (g = {g}, J = {j})");
    }
    Ok(LimitEvaluation { c1, c5, in_regime })
}

/// Couplings selecting which closed form drives the transfer.
#[derive(Clone, Copy, Debug, PartialEq)]
pub enum TransferMode {
    Resonant { g: f64, j: f64 },
    Dispersive { lambda: f64, j: f64 },
}

/// Checks `|α|² + |β|² = 1` to within 1e-9.
pub fn check_encoding(alpha: C64, beta: C64) -> Result<()> {
    let norm_sqr = alpha.norm_sqr() + beta.norm_sqr();
    if (norm_sqr - 1.0).abs() > crate::basis::SUPERPOSE_NORM_TOL {
        return Err(Error::Normalization { norm_sqr });
    }
    Ok(())
}

/// `F = |α|² + |β A(t)|²`, where `A` is the amplitude on the destination
/// ensemble (`C₅` or `D₄`).
pub fn transfer_fidelity(mode: TransferMode, t: f64, alpha: C64, beta: C64) -> Result<f64> {
    check_encoding(alpha, beta)?;
    let target = match mode {
        TransferMode::Resonant { g, j } => resonant_coefficients(t, g, j)?.c5(),
        TransferMode::Dispersive { lambda, j } => dispersive_coefficients(t, lambda, j)?.d4(),
    };
    Ok(alpha.norm_sqr() + (beta * target).norm_sqr())
}
