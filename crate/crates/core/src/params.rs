//! Device-level parameter derivations.
//!
//! The free functions are the bare formulas in `ħ = 1` units: every input and
//! output frequency is an angular frequency and couplings are energies divided
//! by `ħ`. [`DeviceParams`] works in SI units and inserts `ħ` where needed.

use std::f64::consts::TAU;

use crate::error::{Error, Result};
use crate::hamiltonian::{CouplingGraph, Frequencies};

/// Reduced Planck constant, J·s.
pub const HBAR: f64 = 1.054_571_817e-34;
/// Bohr magneton, J/T.
pub const BOHR_MAGNETON: f64 = 9.274_010_078_3e-24;
/// Electron g-factor of the NV ground state.
pub const NV_LANDE_FACTOR: f64 = 2.003;
/// Zero-field splitting of the NV ground state, rad/s.
pub const NV_ZERO_FIELD_SPLITTING: f64 = TAU * 2.88e9;

fn positive(name: &str, value: f64) -> Result<()> {
    if value > 0.0 && value.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "{name} must be positive and finite, got {value}"
        )))
    }
}

/// `ω = 1/√(LC)`.
pub fn derive_bus_frequency(inductance: f64, capacitance: f64) -> Result<f64> {
    positive("inductance", inductance)?;
    positive("capacitance", capacitance)?;
    Ok(1.0 / (inductance * capacitance).sqrt())
}

/// `g_j = M_j I_p √(ω / 2L)`.
pub fn derive_qubit_bus_coupling(
    mutual_inductance: f64,
    persistent_current: f64,
    bus_frequency: f64,
    inductance: f64,
) -> Result<f64> {
    positive("inductance", inductance)?;
    positive("bus frequency", bus_frequency)?;
    Ok(mutual_inductance * persistent_current * (bus_frequency / (2.0 * inductance)).sqrt())
}

/// `ω_q = √(ε² + Δ²)`.
pub fn derive_qubit_frequency(bias: f64, gap: f64) -> f64 {
    bias.hypot(gap)
}

/// `Ω = D − g_e μ_B B_z`. `bohr_magneton` must be expressed in the same
/// frequency-per-tesla units as `zero_field_splitting`.
pub fn derive_nvce_gap(
    zero_field_splitting: f64,
    lande: f64,
    bohr_magneton: f64,
    field: f64,
) -> f64 {
    zero_field_splitting - lande * bohr_magneton * field
}

/// Circuit and spin parameters in SI units (henries, farads, amperes, tesla,
/// rad/s).
#[derive(Clone, Debug, PartialEq)]
pub struct DeviceParams {
    pub inductance: f64,
    pub capacitance: f64,
    /// `M_j` per site.
    pub mutual_inductances: Vec<f64>,
    pub persistent_current: f64,
    pub zero_field_splitting: f64,
    pub lande_factor: f64,
    /// J/T.
    pub bohr_magneton: f64,
    pub axial_field: f64,
    /// `ε_j` per site, rad/s.
    pub qubit_bias: Vec<f64>,
    /// `Δ_j` per site, rad/s.
    pub qubit_gap: Vec<f64>,
}

impl DeviceParams {
    /// NV defaults for `n_sites` identical qubits at their degeneracy point.
    pub fn new(
        inductance: f64,
        capacitance: f64,
        mutual_inductances: Vec<f64>,
        persistent_current: f64,
        qubit_gap: Vec<f64>,
    ) -> Result<Self> {
        let n = mutual_inductances.len();
        let params = Self {
            inductance,
            capacitance,
            mutual_inductances,
            persistent_current,
            zero_field_splitting: NV_ZERO_FIELD_SPLITTING,
            lande_factor: NV_LANDE_FACTOR,
            bohr_magneton: BOHR_MAGNETON,
            axial_field: 0.0,
            qubit_bias: vec![0.0; n],
            qubit_gap,
        };
        params.validate()?;
        Ok(params)
    }

    pub fn n_sites(&self) -> usize {
        self.mutual_inductances.len()
    }

    pub fn validate(&self) -> Result<()> {
        positive("inductance", self.inductance)?;
        positive("capacitance", self.capacitance)?;
        positive("persistent current", self.persistent_current)?;
        let n = self.n_sites();
        if n == 0 {
            return Err(Error::invalid("at least one mutual inductance is required"));
        }
        if self.qubit_bias.len() != n || self.qubit_gap.len() != n {
            return Err(Error::invalid(
                "per-site arrays must all have n_sites entries",
            ));
        }
        if self
            .mutual_inductances
            .iter()
            .any(|m| !(*m >= 0.0 && m.is_finite()))
        {
            return Err(Error::invalid(
                "mutual inductances must be finite and non-negative",
            ));
        }
        let scalars = [
            self.zero_field_splitting,
            self.lande_factor,
            self.bohr_magneton,
            self.axial_field,
        ];
        if scalars
            .iter()
            .chain(&self.qubit_bias)
            .chain(&self.qubit_gap)
            .any(|v| !v.is_finite())
        {
            return Err(Error::invalid("device parameters must be finite"));
        }
        Ok(())
    }

    pub fn bus_frequency(&self) -> Result<f64> {
        derive_bus_frequency(self.inductance, self.capacitance)
    }

    /// `g_j` in rad/s: `M_j I_p √(ω / 2Lħ)`.
    pub fn bus_coupling(&self, site: usize) -> Result<f64> {
        let m = *self
            .mutual_inductances
            .get(site.wrapping_sub(1))
            .ok_or_else(|| Error::invalid(format!("site {site} out of range")))?;
        let omega = self.bus_frequency()?;
        Ok(
            derive_qubit_bus_coupling(m, self.persistent_current, omega, self.inductance)?
                / HBAR.sqrt(),
        )
    }

    pub fn qubit_frequency(&self, site: usize) -> Result<f64> {
        let i = site.wrapping_sub(1);
        match (self.qubit_bias.get(i), self.qubit_gap.get(i)) {
            (Some(&eps), Some(&gap)) => Ok(derive_qubit_frequency(eps, gap)),
            _ => Err(Error::invalid(format!("site {site} out of range"))),
        }
    }

    /// `Ω` in rad/s.
    pub fn nvce_gap(&self) -> f64 {
        derive_nvce_gap(
            self.zero_field_splitting,
            self.lande_factor,
            self.bohr_magneton / HBAR,
            self.axial_field,
        )
    }

    /// Coupling graph with every site enabled. The spin–qubit couplings `J_j`
    /// are measured quantities and have to be supplied.
    pub fn coupling_graph(&self, nvce_coupling: Vec<f64>) -> Result<CouplingGraph> {
        let n = self.n_sites();
        let g = (1..=n)
            .map(|j| self.bus_coupling(j))
            .collect::<Result<Vec<_>>>()?;
        let qubit = (1..=n)
            .map(|j| self.qubit_frequency(j))
            .collect::<Result<Vec<_>>>()?;
        let freqs = Frequencies {
            bus: self.bus_frequency()?,
            qubit,
            nvce: vec![self.nvce_gap(); n],
        };
        CouplingGraph::new(g, nvce_coupling)?.with_frequencies(freqs)
    }
}
