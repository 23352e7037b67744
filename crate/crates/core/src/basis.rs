//! The truncated Hilbert space: the global ground state plus every state with
//! exactly one excitation, together with the state-vector and density-matrix
//! types defined over it.
//!
//! Basis ordering is fixed across the crate:
//!
//! ```text
//! GROUND, NE1, Q1, NE2, Q2, ..., NEn, Qn, BUS
//! ```
//!
//! The bus is omitted when the basis is built for the effective dispersive
//! Hamiltonian, where the LC mode has been eliminated.

use std::fmt;
use std::str::FromStr;

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Tolerance on `Σ|c|² = 1` when a state vector is constructed directly.
pub const STATE_NORM_TOL: f64 = 1e-12;
/// Tolerance on `Σ|c|² = 1` for user-supplied superposition coefficients.
pub const SUPERPOSE_NORM_TOL: f64 = 1e-9;
/// Hermiticity and unit-trace tolerance for density matrices.
pub const DENSITY_TOL: f64 = 1e-12;
/// Smallest eigenvalue accepted as numerically positive semidefinite.
pub const PSD_TOL: f64 = -1e-10;

/// One physical two-level (or truncated bosonic) node of the circuit.
///
/// Site indices are 1-based.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum NodeLabel {
    /// Spin ensemble `j`, treated as a collective two-level system.
    Nvce(usize),
    /// Flux qubit `j`.
    Qubit(usize),
    /// The shared LC resonator.
    Bus,
}

impl NodeLabel {
    pub fn site(&self) -> Option<usize> {
        match *self {
            NodeLabel::Nvce(j) | NodeLabel::Qubit(j) => Some(j),
            NodeLabel::Bus => None,
        }
    }
}

impl fmt::Display for NodeLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            NodeLabel::Nvce(j) => write!(f, "NE{j}"),
            NodeLabel::Qubit(j) => write!(f, "Q{j}"),
            NodeLabel::Bus => f.write_str("BUS"),
        }
    }
}

impl FromStr for NodeLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let s = s.trim();
        let upper = s.to_ascii_uppercase();
        if upper == "BUS" || upper == "L" || upper == "LC" {
            return Ok(NodeLabel::Bus);
        }
        let (ctor, digits): (fn(usize) -> NodeLabel, &str) =
            if let Some(rest) = upper.strip_prefix("NE") {
                (NodeLabel::Nvce, rest)
            } else if let Some(rest) = upper.strip_prefix('Q') {
                (NodeLabel::Qubit, rest)
            } else {
                return Err(Error::invalid(format!("unknown node label `{s}`")));
            };
        match digits.parse::<usize>() {
            Ok(j) if j >= 1 => Ok(ctor(j)),
            _ => Err(Error::invalid(format!(
                "bad site index in node label `{s}`"
            ))),
        }
    }
}

/// A basis vector of the truncated space.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum BasisState {
    /// No excitation anywhere.
    Ground,
    /// Exactly one excitation, located at the given node.
    At(NodeLabel),
}

impl fmt::Display for BasisState {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            BasisState::Ground => f.write_str("G"),
            BasisState::At(node) => node.fmt(f),
        }
    }
}

impl FromStr for BasisState {
    type Err = Error;

    /// `G` (or `GROUND`) for the ground state, otherwise a node label.
    fn from_str(s: &str) -> Result<Self> {
        match s.trim().to_ascii_uppercase().as_str() {
            "G" | "GROUND" => Ok(BasisState::Ground),
            _ => s.parse().map(BasisState::At),
        }
    }
}

impl From<NodeLabel> for BasisState {
    fn from(node: NodeLabel) -> Self {
        BasisState::At(node)
    }
}

/// Ordered zero- and single-excitation basis for `n_sites` (NVCE, qubit)
/// pairs, optionally including the bus mode.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExcitationBasis {
    n_sites: usize,
    include_bus: bool,
}

impl ExcitationBasis {
    pub fn new(n_sites: usize, include_bus: bool) -> Result<Self> {
        if n_sites < 1 {
            return Err(Error::invalid("n_sites must be at least 1"));
        }
        Ok(Self {
            n_sites,
            include_bus,
        })
    }

    pub fn n_sites(&self) -> usize {
        self.n_sites
    }

    pub fn has_bus(&self) -> bool {
        self.include_bus
    }

    pub fn dim(&self) -> usize {
        2 * self.n_sites + 1 + usize::from(self.include_bus)
    }

    pub fn ground_index(&self) -> usize {
        0
    }

    pub fn nvce_index(&self, site: usize) -> Option<usize> {
        (1..=self.n_sites).contains(&site).then(|| 2 * site - 1)
    }

    pub fn qubit_index(&self, site: usize) -> Option<usize> {
        (1..=self.n_sites).contains(&site).then(|| 2 * site)
    }

    pub fn bus_index(&self) -> Option<usize> {
        self.include_bus.then(|| 2 * self.n_sites + 1)
    }

    pub fn index_of(&self, state: BasisState) -> Option<usize> {
        match state {
            BasisState::Ground => Some(0),
            BasisState::At(NodeLabel::Nvce(j)) => self.nvce_index(j),
            BasisState::At(NodeLabel::Qubit(j)) => self.qubit_index(j),
            BasisState::At(NodeLabel::Bus) => self.bus_index(),
        }
    }

    /// The basis state at position `index`.
    ///
    /// *Panics* if `index >= self.dim()`.
    pub fn state(&self, index: usize) -> BasisState {
        assert!(index < self.dim(), "basis index {index} out of range");
        if index == 0 {
            BasisState::Ground
        } else if self.include_bus && index == 2 * self.n_sites + 1 {
            BasisState::At(NodeLabel::Bus)
        } else if index % 2 == 1 {
            BasisState::At(NodeLabel::Nvce(index.div_ceil(2)))
        } else {
            BasisState::At(NodeLabel::Qubit(index / 2))
        }
    }

    pub fn states(&self) -> impl Iterator<Item = BasisState> + '_ {
        (0..self.dim()).map(|i| self.state(i))
    }

    pub(crate) fn require(&self, state: BasisState) -> Result<usize> {
        self.index_of(state)
            .ok_or_else(|| Error::invalid(format!("state {state} is not in {self}")))
    }

    pub(crate) fn check_same(&self, other: &ExcitationBasis) -> Result<()> {
        if self == other {
            Ok(())
        } else {
            Err(Error::BasisMismatch {
                expected: self.to_string(),
                found: other.to_string(),
            })
        }
    }
}

impl fmt::Display for ExcitationBasis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "basis(n_sites={}, bus={}, dim={})",
            self.n_sites,
            if self.include_bus { "yes" } else { "no" },
            self.dim()
        )
    }
}

pub fn make_basis(n_sites: usize, include_bus: bool) -> Result<ExcitationBasis> {
    ExcitationBasis::new(n_sites, include_bus)
}

/// Complex amplitudes over an [`ExcitationBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct StateVector {
    basis: ExcitationBasis,
    amplitudes: DVector<C64>,
}

impl StateVector {
    /// Builds a state from raw amplitudes, rejecting anything whose squared
    /// norm is further than [`STATE_NORM_TOL`] from one.
    pub fn new(basis: ExcitationBasis, amplitudes: DVector<C64>) -> Result<Self> {
        if amplitudes.len() != basis.dim() {
            return Err(Error::invalid(format!(
                "{} amplitudes supplied for {basis}",
                amplitudes.len()
            )));
        }
        let norm_sqr = amplitudes.norm_squared();
        if (norm_sqr - 1.0).abs() > STATE_NORM_TOL {
            return Err(Error::Normalization { norm_sqr });
        }
        Ok(Self { basis, amplitudes })
    }

    /// Integrator output; the norm is whatever the step left behind.
    pub(crate) fn from_evolved(basis: ExcitationBasis, amplitudes: DVector<C64>) -> Self {
        debug_assert_eq!(amplitudes.len(), basis.dim());
        Self { basis, amplitudes }
    }

    pub fn basis(&self) -> &ExcitationBasis {
        &self.basis
    }

    pub fn amplitudes(&self) -> &DVector<C64> {
        &self.amplitudes
    }

    /// Amplitude on `state`, or zero if the state is not in the basis.
    pub fn amplitude(&self, state: BasisState) -> C64 {
        self.basis
            .index_of(state)
            .map_or(C64::new(0.0, 0.0), |i| self.amplitudes[i])
    }

    pub fn population(&self, state: BasisState) -> f64 {
        self.amplitude(state).norm_sqr()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.amplitudes.iter().map(|c| c.norm_sqr()).collect()
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amplitudes.norm_squared()
    }

    /// `⟨self|other⟩`.
    pub fn inner(&self, other: &StateVector) -> Result<C64> {
        self.basis.check_same(&other.basis)?;
        Ok(self.amplitudes.dotc(&other.amplitudes))
    }
}

pub fn pure_state(basis: &ExcitationBasis, which: BasisState) -> Result<StateVector> {
    let idx = basis.require(which)?;
    let mut amplitudes = DVector::zeros(basis.dim());
    amplitudes[idx] = C64::new(1.0, 0.0);
    Ok(StateVector {
        basis: basis.clone(),
        amplitudes,
    })
}

/// Superposition `Σ c_k |s_k⟩`. The coefficients must already be normalized
/// (to within [`SUPERPOSE_NORM_TOL`]); nothing is rescaled.
///
/// Repeated basis states have their coefficients summed.
pub fn superpose(basis: &ExcitationBasis, terms: &[(BasisState, C64)]) -> Result<StateVector> {
    let mut amplitudes = DVector::<C64>::zeros(basis.dim());
    for &(state, coeff) in terms {
        let idx = basis.require(state)?;
        amplitudes[idx] += coeff;
    }
    let norm_sqr = amplitudes.norm_squared();
    if (norm_sqr - 1.0).abs() > SUPERPOSE_NORM_TOL {
        return Err(Error::Normalization { norm_sqr });
    }
    Ok(StateVector {
        basis: basis.clone(),
        amplitudes,
    })
}

/// Hermitian, unit-trace, positive-semidefinite operator over an
/// [`ExcitationBasis`].
#[derive(Clone, Debug, PartialEq)]
pub struct DensityMatrix {
    basis: ExcitationBasis,
    matrix: DMatrix<C64>,
}

impl DensityMatrix {
    pub fn new(basis: ExcitationBasis, matrix: DMatrix<C64>) -> Result<Self> {
        let d = basis.dim();
        if matrix.shape() != (d, d) {
            return Err(Error::invalid(format!(
                "{:?} matrix supplied for {basis}",
                matrix.shape()
            )));
        }
        let rho = Self { basis, matrix };
        let herm = rho.hermiticity_error();
        if herm > DENSITY_TOL {
            return Err(Error::invalid(format!(
                "density matrix is not Hermitian (max |ρ-ρ†| = {herm:e})"
            )));
        }
        let tr = rho.trace();
        if (tr - 1.0).abs() > DENSITY_TOL {
            return Err(Error::invalid(format!("density matrix trace is {tr}")));
        }
        let min_eig = rho.min_eigenvalue();
        if min_eig < PSD_TOL {
            return Err(Error::invalid(format!(
                "density matrix has eigenvalue {min_eig:e}"
            )));
        }
        Ok(rho)
    }

    pub(crate) fn from_evolved(basis: ExcitationBasis, matrix: DMatrix<C64>) -> Self {
        debug_assert_eq!(matrix.nrows(), basis.dim());
        Self { basis, matrix }
    }

    pub fn from_state(psi: &StateVector) -> Self {
        let a = &psi.amplitudes;
        Self {
            basis: psi.basis.clone(),
            matrix: a * a.adjoint(),
        }
    }

    pub fn basis(&self) -> &ExcitationBasis {
        &self.basis
    }

    pub fn matrix(&self) -> &DMatrix<C64> {
        &self.matrix
    }

    /// Matrix element `⟨a|ρ|b⟩`; zero if either state is outside the basis.
    pub fn element(&self, a: BasisState, b: BasisState) -> C64 {
        match (self.basis.index_of(a), self.basis.index_of(b)) {
            (Some(i), Some(j)) => self.matrix[(i, j)],
            _ => C64::new(0.0, 0.0),
        }
    }

    pub fn population(&self, state: BasisState) -> f64 {
        self.element(state, state).re
    }

    pub fn populations(&self) -> Vec<f64> {
        self.matrix.diagonal().iter().map(|c| c.re).collect()
    }

    pub fn trace(&self) -> f64 {
        self.matrix.trace().re
    }

    pub fn purity(&self) -> f64 {
        // tr(ρ²) = Σ_ij ρ_ij ρ_ji = Σ_ij |ρ_ij|² for Hermitian ρ
        self.matrix.iter().map(|c| c.norm_sqr()).sum()
    }

    pub fn hermiticity_error(&self) -> f64 {
        let d = self.matrix.nrows();
        let mut worst = 0.0_f64;
        for i in 0..d {
            for j in i..d {
                worst = worst.max((self.matrix[(i, j)] - self.matrix[(j, i)].conj()).norm());
            }
        }
        worst
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        let herm = (&self.matrix + self.matrix.adjoint()) * C64::new(0.5, 0.0);
        let mut vals: Vec<f64> = herm.symmetric_eigenvalues().iter().copied().collect();
        vals.sort_by(f64::total_cmp);
        vals
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `⟨ψ|ρ|ψ⟩`.
    pub fn expectation_in(&self, psi: &StateVector) -> Result<f64> {
        self.basis.check_same(&psi.basis)?;
        let v = &psi.amplitudes;
        Ok(v.dotc(&(&self.matrix * v)).re)
    }
}

pub fn density_from_state(psi: &StateVector) -> DensityMatrix {
    DensityMatrix::from_state(psi)
}
