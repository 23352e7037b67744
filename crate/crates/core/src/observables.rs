//! Populations, transfer fidelity and transfer times extracted from
//! trajectories.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::analytic::check_encoding;
use crate::basis::{BasisState, DensityMatrix, ExcitationBasis, StateVector};
use crate::dynamics::Trajectory;
use crate::error::{Error, Result};

/// Default population threshold for "the transfer has happened".
pub const DEFAULT_TRANSFER_THRESHOLD: f64 = 0.99;

/// Something that has a probability per basis state.
pub trait Populated {
    fn basis(&self) -> &ExcitationBasis;
    fn populations(&self) -> Vec<f64>;
    fn population(&self, state: BasisState) -> f64;
    /// `⟨ψ|A|ψ⟩` or `Tr(ρA)`.
    fn expectation(&self, op: &DMatrix<C64>) -> C64;
}

impl Populated for StateVector {
    fn basis(&self) -> &ExcitationBasis {
        StateVector::basis(self)
    }

    fn populations(&self) -> Vec<f64> {
        StateVector::populations(self)
    }

    fn population(&self, state: BasisState) -> f64 {
        StateVector::population(self, state)
    }

    fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        let a = self.amplitudes();
        a.dotc(&(op * a))
    }
}

impl Populated for DensityMatrix {
    fn basis(&self) -> &ExcitationBasis {
        DensityMatrix::basis(self)
    }

    fn populations(&self) -> Vec<f64> {
        DensityMatrix::populations(self)
    }

    fn population(&self, state: BasisState) -> f64 {
        DensityMatrix::population(self, state)
    }

    fn expectation(&self, op: &DMatrix<C64>) -> C64 {
        (self.matrix() * op).trace()
    }
}

/// Population of every basis state at every sample.
#[derive(Clone, Debug, PartialEq)]
pub struct PopulationSeries {
    pub times: Vec<f64>,
    pub basis: ExcitationBasis,
    /// `values[k][i]` is the population of basis state `i` at `times[k]`.
    pub values: Vec<Vec<f64>>,
}

impl PopulationSeries {
    /// The time series of one basis state.
    pub fn of(&self, state: BasisState) -> Result<Vec<f64>> {
        let i = self.basis.require(state)?;
        Ok(self.values.iter().map(|row| row[i]).collect())
    }

    pub fn totals(&self) -> Vec<f64> {
        self.values.iter().map(|row| row.iter().sum()).collect()
    }
}

pub fn populations<S: Populated>(traj: &Trajectory<S>) -> PopulationSeries {
    PopulationSeries {
        times: traj.times().to_vec(),
        basis: traj.last().basis().clone(),
        values: traj.states().iter().map(Populated::populations).collect(),
    }
}

/// `⟨H(t)⟩` at every sample, with `H` the Hamiltonian that generated the
/// trajectory.
pub fn energy<S: Populated>(traj: &Trajectory<S>) -> Result<Vec<f64>> {
    let spec = traj.source().hamiltonian();
    traj.iter()
        .map(|(t, s)| Ok(s.expectation(&spec.render(s.basis(), t)?).re))
        .collect()
}

#[derive(Clone, Debug, PartialEq)]
pub struct FidelitySeries {
    pub times: Vec<f64>,
    pub values: Vec<f64>,
    pub alpha: C64,
    pub beta: C64,
}

/// Transfer fidelity `F(t) = |α|² + |β|² P_target(t)` for a trajectory that
/// started with the excitation on the source ensemble.
///
/// The encoded ground-state component `α|G⟩` is invariant under every
/// interaction-frame generator, so only the excited branch needs evolving;
/// `P_target` is `|C_target|²` for state vectors and `ρ_target,target` for
/// density matrices.
pub fn fidelity<S: Populated>(
    traj: &Trajectory<S>,
    alpha: C64,
    beta: C64,
    target: BasisState,
) -> Result<FidelitySeries> {
    check_encoding(alpha, beta)?;
    traj.last().basis().require(target)?;
    let (a2, b2) = (alpha.norm_sqr(), beta.norm_sqr());
    Ok(FidelitySeries {
        times: traj.times().to_vec(),
        values: traj
            .states()
            .iter()
            .map(|s| a2 + b2 * s.population(target))
            .collect(),
        alpha,
        beta,
    })
}

/// `|Ψ_T⟩ = α|G⟩ + β|target⟩`.
pub fn target_state(
    basis: &ExcitationBasis,
    alpha: C64,
    beta: C64,
    target: BasisState,
) -> Result<StateVector> {
    crate::basis::superpose(basis, &[(BasisState::Ground, alpha), (target, beta)])
}

/// Strict overlap fidelity `⟨Ψ_T|ρ(t)|Ψ_T⟩` (or `|⟨Ψ_T|ψ(t)⟩|²`) for a
/// trajectory that started from the full encoded state `α|G⟩ + β|source⟩`.
/// Unlike [`fidelity`] this is sensitive to the relative phase between the two
/// branches.
pub fn overlap_fidelity<S: Overlap>(
    traj: &Trajectory<S>,
    alpha: C64,
    beta: C64,
    target: BasisState,
) -> Result<FidelitySeries> {
    check_encoding(alpha, beta)?;
    let psi_t = target_state(traj.last().overlap_basis(), alpha, beta, target)?;
    let values = traj
        .states()
        .iter()
        .map(|s| s.overlap_with(&psi_t))
        .collect::<Result<Vec<_>>>()?;
    Ok(FidelitySeries {
        times: traj.times().to_vec(),
        values,
        alpha,
        beta,
    })
}

/// `⟨Ψ|·|Ψ⟩` for pure and mixed states.
pub trait Overlap {
    fn overlap_basis(&self) -> &ExcitationBasis;
    fn overlap_with(&self, psi: &StateVector) -> Result<f64>;
}

impl Overlap for StateVector {
    fn overlap_basis(&self) -> &ExcitationBasis {
        self.basis()
    }

    fn overlap_with(&self, psi: &StateVector) -> Result<f64> {
        Ok(psi.inner(self)?.norm_sqr())
    }
}

impl Overlap for DensityMatrix {
    fn overlap_basis(&self) -> &ExcitationBasis {
        self.basis()
    }

    fn overlap_with(&self, psi: &StateVector) -> Result<f64> {
        self.expectation_in(psi)
    }
}

/// First time the population of `target` reaches `threshold`, refined by a
/// quadratic through the samples around the first crossing. `None` if the
/// threshold is never reached.
pub fn transfer_time(
    series: &PopulationSeries,
    target: BasisState,
    threshold: f64,
) -> Result<Option<f64>> {
    if !(threshold > 0.0 && threshold <= 1.0) {
        return Err(Error::invalid(format!(
            "threshold must lie in (0, 1], got {threshold}"
        )));
    }
    let p = series.of(target)?;
    Ok(first_crossing(&series.times, &p, threshold))
}

/// Converts dimensionless `Jt` to seconds for a coupling `J` given in Hz
/// (cycles per second, so the angular coupling is `2π·j_hz`).
pub fn physical_time(jt: f64, j_hz: f64) -> Result<f64> {
    if !(j_hz > 0.0 && j_hz.is_finite()) {
        return Err(Error::invalid(format!(
            "J must be a positive frequency, got {j_hz} Hz"
        )));
    }
    Ok(jt / (std::f64::consts::TAU * j_hz))
}

pub(crate) fn first_crossing(times: &[f64], p: &[f64], threshold: f64) -> Option<f64> {
    let k = p.iter().position(|&v| v >= threshold)?;
    if k == 0 {
        return Some(times[0]);
    }
    let (t0, t1) = (times[k - 1], times[k]);
    // three points bracketing the crossing, preferring one past it
    let idx = if k + 1 < p.len() {
        [k - 1, k, k + 1]
    } else if k >= 2 {
        [k - 2, k - 1, k]
    } else {
        return Some(linear(t0, p[k - 1], t1, p[k], threshold));
    };
    quadratic_root(idx.map(|i| (times[i], p[i])), threshold, t0, t1)
        .or_else(|| Some(linear(t0, p[k - 1], t1, p[k], threshold)))
}

fn linear(t0: f64, p0: f64, t1: f64, p1: f64, level: f64) -> f64 {
    if p1 == p0 {
        t1
    } else {
        t0 + (level - p0) * (t1 - t0) / (p1 - p0)
    }
}

/// Root of the Lagrange quadratic through `pts` minus `level`, inside `[lo, hi]`.
fn quadratic_root(pts: [(f64, f64); 3], level: f64, lo: f64, hi: f64) -> Option<f64> {
    let [(x0, y0), (x1, y1), (x2, y2)] = pts;
    // Newton form around x0: y = y0 + d1 (x-x0) + d2 (x-x0)(x-x1)
    let d01 = (y1 - y0) / (x1 - x0);
    let d12 = (y2 - y1) / (x2 - x1);
    let d2 = (d12 - d01) / (x2 - x0);
    // in u = x - x0: d2 u² + (d01 - d2 (x1 - x0)) u + (y0 - level) = 0
    let a = d2;
    let b = d01 - d2 * (x1 - x0);
    let c = y0 - level;
    let in_range =
        |x: f64| x >= lo - 1e-12 * hi.abs().max(1.0) && x <= hi + 1e-12 * hi.abs().max(1.0);
    let roots: Vec<f64> = if a.abs() < 1e-14 * (b.abs() + c.abs()) {
        if b == 0.0 {
            return None;
        }
        vec![-c / b]
    } else {
        let disc = b * b - 4.0 * a * c;
        if disc < 0.0 {
            return None;
        }
        let q = -0.5 * (b + b.signum() * disc.sqrt());
        let mut r = vec![q / a];
        if q != 0.0 {
            r.push(c / q);
        }
        r
    };
    roots
        .into_iter()
        .map(|u| x0 + u)
        .filter(|x| in_range(*x))
        .min_by(f64::total_cmp)
        .map(|x| x.clamp(lo, hi))
}
