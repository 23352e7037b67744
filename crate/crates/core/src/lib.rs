//! Quantum-state transfer between two NV-centre spin ensembles coupled to flux
//! qubits sharing an LC bus, in the single-excitation subspace.
//!
//! The crate covers the truncated basis, Hamiltonians in four frames,
//! closed-form amplitudes for the resonant and dispersive protocols, numerical
//! Schrödinger and Lindblad evolution, and the observables used to judge a
//! transfer (populations, fidelity, transfer time). The [`scenario`] module
//! drives named reproduction runs and parameter sweeps.
//!
//! Time is measured in units of `1/J₁` throughout unless noted; all couplings
//! and frequencies are angular (rad per unit time).
//!
//! ```
//! use nvce_transfer::prelude::*;
//!
//! let spec = HamiltonianSpec::resonant(CouplingGraph::uniform(2, 10.0, 1.0)?)?;
//! let psi0 = pure_state(&spec.basis(), NodeLabel::Nvce(1).into())?;
//! let traj = evolve_schrodinger(&spec, &psi0, &IntegratorConfig::rk4(0.005, 4.0, 10))?;
//! let t = transfer_time(&populations(&traj), NodeLabel::Nvce(2).into(), 0.99)?;
//! assert!((t.unwrap() - 3.02).abs() < 0.01);
//! # Ok::<(), nvce_transfer::Error>(())
//! ```

pub mod analytic;
pub mod basis;
pub mod dynamics;
mod error;
pub mod hamiltonian;
pub mod observables;
pub mod params;
pub mod scenario;

pub use error::{Error, Result};

/// The names most programs need.
pub mod prelude {
    pub use crate::analytic::{
        dispersive_coefficients, limit_case, resonant_coefficients, transfer_fidelity, LimitCase,
        TransferMode,
    };
    pub use crate::basis::{
        density_from_state, make_basis, pure_state, superpose, BasisState, DensityMatrix,
        ExcitationBasis, NodeLabel, StateVector,
    };
    pub use crate::dynamics::{
        evolve_lindblad, evolve_schrodinger, IntegratorConfig, LindbladModel, Method, Trajectory,
    };
    pub use crate::hamiltonian::{
        render_hamiltonian, toggle_site, CouplingGraph, DispersiveCouplings, Frame, HamiltonianSpec,
    };
    pub use crate::observables::{
        fidelity, overlap_fidelity, physical_time, populations, transfer_time,
    };
    pub use crate::{Error, Result};
}
