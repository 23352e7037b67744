//! Numerical time evolution: Schrödinger equation for state vectors and the
//! Lindblad master equation for density matrices.

mod integrator;
mod lindblad;

pub use integrator::{integrate, IntegratorConfig, Method, OdeState};
pub use lindblad::{
    build_collapse_operators, evolve_lindblad, Channel, ChannelKind, Dissipator, LindbladModel,
};

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::basis::{DensityMatrix, ExcitationBasis, StateVector};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;

const MINUS_I: C64 = C64 { re: 0.0, im: -1.0 };

/// What produced a trajectory.
#[derive(Clone, Debug, PartialEq)]
pub enum TrajectorySource {
    Unitary(HamiltonianSpec),
    Lindblad(LindbladModel),
}

impl TrajectorySource {
    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        match self {
            TrajectorySource::Unitary(h) => h,
            TrajectorySource::Lindblad(m) => m.hamiltonian(),
        }
    }
}

/// Sampled states on a strictly increasing time grid starting at `t = 0`.
#[derive(Clone, Debug)]
pub struct Trajectory<S> {
    times: Vec<f64>,
    states: Vec<S>,
    source: TrajectorySource,
    config: IntegratorConfig,
}

impl<S> Trajectory<S> {
    pub fn times(&self) -> &[f64] {
        &self.times
    }

    pub fn states(&self) -> &[S] {
        &self.states
    }

    pub fn source(&self) -> &TrajectorySource {
        &self.source
    }

    pub fn config(&self) -> &IntegratorConfig {
        &self.config
    }

    pub fn len(&self) -> usize {
        self.times.len()
    }

    pub fn is_empty(&self) -> bool {
        self.times.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (f64, &S)> {
        self.times.iter().copied().zip(&self.states)
    }

    pub fn last(&self) -> &S {
        self.states
            .last()
            .expect("a trajectory holds at least the initial state")
    }
}

impl Trajectory<StateVector> {
    /// `max_t |‖ψ(t)‖² − 1|`. States are never renormalized, so this measures
    /// integrator quality.
    pub fn max_norm_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|s| (s.norm_sqr() - 1.0).abs())
            .fold(0.0, f64::max)
    }
}

impl Trajectory<DensityMatrix> {
    pub fn max_trace_drift(&self) -> f64 {
        self.states
            .iter()
            .map(|r| (r.trace() - 1.0).abs())
            .fold(0.0, f64::max)
    }

    pub fn max_hermiticity_error(&self) -> f64 {
        self.states
            .iter()
            .map(DensityMatrix::hermiticity_error)
            .fold(0.0, f64::max)
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.states
            .iter()
            .map(DensityMatrix::min_eigenvalue)
            .fold(f64::INFINITY, f64::min)
    }
}

fn check_basis(spec: &HamiltonianSpec, basis: &ExcitationBasis) -> Result<()> {
    let expected = spec.basis();
    if &expected != basis {
        return Err(Error::BasisMismatch {
            expected: expected.to_string(),
            found: basis.to_string(),
        });
    }
    Ok(())
}

/// The generator `−iH(t)`, rendered once when `H` is constant.
pub(crate) enum Generator<'a> {
    Constant(DMatrix<C64>),
    TimeDependent(&'a HamiltonianSpec),
}

impl<'a> Generator<'a> {
    pub(crate) fn new(spec: &'a HamiltonianSpec) -> Self {
        if spec.is_time_dependent() {
            Generator::TimeDependent(spec)
        } else {
            Generator::Constant(spec.render_at(0.0) * MINUS_I)
        }
    }

    /// `−iH(t)`.
    pub(crate) fn at(&self, t: f64) -> std::borrow::Cow<'_, DMatrix<C64>> {
        match self {
            Generator::Constant(m) => std::borrow::Cow::Borrowed(m),
            Generator::TimeDependent(spec) => std::borrow::Cow::Owned(spec.render_at(t) * MINUS_I),
        }
    }
}

/// Integrates `i dψ/dt = H(t) ψ` from `psi0`.
pub fn evolve_schrodinger(
    spec: &HamiltonianSpec,
    psi0: &StateVector,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<StateVector>> {
    check_basis(spec, psi0.basis())?;
    let generator = Generator::new(spec);
    let rhs = |t: f64, y: &DVector<C64>| -> DVector<C64> { generator.at(t).as_ref() * y };
    let (times, states) = integrate(rhs, psi0.amplitudes().clone(), cfg, |_| {})?;
    let basis = psi0.basis().clone();
    Ok(Trajectory {
        times,
        states: states
            .into_iter()
            .map(|a| StateVector::from_evolved(basis.clone(), a))
            .collect(),
        source: TrajectorySource::Unitary(spec.clone()),
        config: *cfg,
    })
}
