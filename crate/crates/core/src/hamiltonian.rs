//! Hamiltonians of the bus–qubit–ensemble circuit, rendered as dense
//! Hermitian matrices over an [`ExcitationBasis`].
//!
//! Four frames are supported:
//!
//! - [`Frame::Lab`]: the full Hamiltonian with free energies and couplings.
//! - [`Frame::ResonantInteraction`]: interaction picture when bus, qubits and
//!   ensembles share one frequency; only the couplings remain.
//! - [`Frame::DetunedInteraction`]: interaction picture with qubit–bus
//!   detunings `δ_j`; the bus–qubit elements rotate as `g_j e^{iδ_j t}`.
//! - [`Frame::EffectiveDispersive`]: the bus adiabatically eliminated, leaving
//!   Stark shifts `λ_j` on the qubits and a bus-mediated qubit–qubit exchange.
//!
//! All couplings are angular frequencies (`ħ = 1`).

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use crate::basis::ExcitationBasis;
use crate::error::{Error, Result};

/// Relative tolerance when checking the resonance condition `ω = ω_q = Ω`.
const RESONANCE_RTOL: f64 = 1e-9;

/// Bare transition frequencies, rad/s.
#[derive(Clone, Debug, PartialEq)]
pub struct Frequencies {
    pub bus: f64,
    pub qubit: Vec<f64>,
    pub nvce: Vec<f64>,
}

/// Which qubits talk to the bus, and how strongly everything is coupled.
#[derive(Clone, Debug, PartialEq)]
pub struct CouplingGraph {
    bus_coupling: Vec<f64>,
    nvce_coupling: Vec<f64>,
    enabled: Vec<bool>,
    frequencies: Option<Frequencies>,
}

fn check_rates(name: &str, values: &[f64]) -> Result<()> {
    match values.iter().find(|v| !(**v >= 0.0 && v.is_finite())) {
        Some(v) => Err(Error::invalid(format!(
            "{name} couplings must be finite and non-negative, got {v}"
        ))),
        None => Ok(()),
    }
}

impl CouplingGraph {
    /// `bus_coupling[j-1] = g_j`, `nvce_coupling[j-1] = J_j`. All sites start
    /// enabled.
    pub fn new(bus_coupling: Vec<f64>, nvce_coupling: Vec<f64>) -> Result<Self> {
        if bus_coupling.is_empty() {
            return Err(Error::invalid("a coupling graph needs at least one site"));
        }
        if bus_coupling.len() != nvce_coupling.len() {
            return Err(Error::invalid(format!(
                "{} bus couplings but {} ensemble couplings",
                bus_coupling.len(),
                nvce_coupling.len()
            )));
        }
        check_rates("bus", &bus_coupling)?;
        check_rates("ensemble", &nvce_coupling)?;
        let n = bus_coupling.len();
        Ok(Self {
            bus_coupling,
            nvce_coupling,
            enabled: vec![true; n],
            frequencies: None,
        })
    }

    pub fn uniform(n_sites: usize, g: f64, j: f64) -> Result<Self> {
        Self::new(vec![g; n_sites], vec![j; n_sites])
    }

    pub fn with_frequencies(mut self, frequencies: Frequencies) -> Result<Self> {
        let n = self.n_sites();
        if frequencies.qubit.len() != n || frequencies.nvce.len() != n {
            return Err(Error::invalid("frequency arrays must have n_sites entries"));
        }
        if std::iter::once(&frequencies.bus)
            .chain(&frequencies.qubit)
            .chain(&frequencies.nvce)
            .any(|f| !f.is_finite())
        {
            return Err(Error::invalid("frequencies must be finite"));
        }
        self.frequencies = Some(frequencies);
        Ok(self)
    }

    /// Enables only the listed (1-based) sites.
    pub fn with_enabled_sites(mut self, sites: &[usize]) -> Result<Self> {
        let mut enabled = vec![false; self.n_sites()];
        for &j in sites {
            *enabled
                .get_mut(j.wrapping_sub(1))
                .ok_or_else(|| Error::invalid(format!("site {j} out of range")))? = true;
        }
        self.enabled = enabled;
        Ok(self)
    }

    pub fn n_sites(&self) -> usize {
        self.bus_coupling.len()
    }

    pub fn bus_coupling(&self) -> &[f64] {
        &self.bus_coupling
    }

    pub fn nvce_coupling(&self) -> &[f64] {
        &self.nvce_coupling
    }

    pub fn enabled(&self) -> &[bool] {
        &self.enabled
    }

    pub fn is_enabled(&self, site: usize) -> bool {
        self.enabled
            .get(site.wrapping_sub(1))
            .copied()
            .unwrap_or(false)
    }

    pub fn frequencies(&self) -> Option<&Frequencies> {
        self.frequencies.as_ref()
    }

    /// `g_j` if site `j` is coupled to the bus, zero otherwise.
    pub fn active_bus_coupling(&self, site: usize) -> f64 {
        if self.is_enabled(site) {
            self.bus_coupling[site - 1]
        } else {
            0.0
        }
    }

    /// Returns a copy with site `site`'s bus coupling switched on or off. The
    /// qubit–ensemble coupling is untouched.
    pub fn toggle_site(&self, site: usize, enabled: bool) -> Result<Self> {
        if !(1..=self.n_sites()).contains(&site) {
            return Err(Error::invalid(format!(
                "site {site} out of range 1..={}",
                self.n_sites()
            )));
        }
        let mut out = self.clone();
        out.enabled[site - 1] = enabled;
        Ok(out)
    }
}

pub fn toggle_site(graph: &CouplingGraph, site: usize, enabled: bool) -> Result<CouplingGraph> {
    graph.toggle_site(site, enabled)
}

/// Stark shifts and exchange rates of the effective dispersive Hamiltonian,
/// stored as one symmetric matrix: the diagonal holds `λ_j`, off-diagonal
/// entries hold the exchange `λ_jk` between qubits `j` and `k`.
#[derive(Clone, Debug, PartialEq)]
pub struct DispersiveCouplings {
    matrix: DMatrix<f64>,
}

impl DispersiveCouplings {
    /// `λ_j = g_j²/δ_j` and `λ_jk = (g_j g_k / 2)(1/δ_j + 1/δ_k)`.
    pub fn from_detuning(bus_coupling: &[f64], detuning: &[f64]) -> Result<Self> {
        let n = bus_coupling.len();
        if detuning.len() != n {
            return Err(Error::invalid("detuning array must have n_sites entries"));
        }
        if detuning.iter().any(|d| *d == 0.0 || !d.is_finite()) {
            return Err(Error::invalid("detunings must be finite and non-zero"));
        }
        let matrix = DMatrix::from_fn(n, n, |j, k| {
            0.5 * bus_coupling[j] * bus_coupling[k] * (1.0 / detuning[j] + 1.0 / detuning[k])
        });
        Ok(Self { matrix })
    }

    /// Builds the couplings from the Stark shifts alone, assuming a common
    /// detuning: `λ_jk = ±√(λ_j λ_k)`. All shifts must share a sign.
    pub fn from_stark_shifts(stark: &[f64]) -> Result<Self> {
        if stark.is_empty() {
            return Err(Error::invalid("need at least one Stark shift"));
        }
        if stark.iter().any(|l| !l.is_finite()) {
            return Err(Error::invalid("Stark shifts must be finite"));
        }
        let negative = stark.iter().any(|l| *l < 0.0);
        if negative && stark.iter().any(|l| *l > 0.0) {
            return Err(Error::invalid(
                "Stark shifts of mixed sign need explicit detunings",
            ));
        }
        let sign = if negative { -1.0 } else { 1.0 };
        let n = stark.len();
        let matrix = DMatrix::from_fn(n, n, |j, k| {
            if j == k {
                stark[j]
            } else {
                sign * (stark[j] * stark[k]).sqrt()
            }
        });
        Ok(Self { matrix })
    }

    /// Overrides the exchange rate between sites `j` and `k` (1-based, `j ≠ k`).
    pub fn with_exchange(mut self, j: usize, k: usize, value: f64) -> Result<Self> {
        let n = self.n_sites();
        if j == k || !(1..=n).contains(&j) || !(1..=n).contains(&k) {
            return Err(Error::invalid(format!("bad exchange pair ({j}, {k})")));
        }
        self.matrix[(j - 1, k - 1)] = value;
        self.matrix[(k - 1, j - 1)] = value;
        Ok(self)
    }

    pub fn n_sites(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn stark_shift(&self, site: usize) -> f64 {
        self.matrix[(site - 1, site - 1)]
    }

    pub fn exchange(&self, j: usize, k: usize) -> f64 {
        self.matrix[(j - 1, k - 1)]
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum Frame {
    Lab,
    ResonantInteraction,
    DetunedInteraction { detuning: Vec<f64> },
    EffectiveDispersive(DispersiveCouplings),
}

impl Frame {
    pub fn name(&self) -> &'static str {
        match self {
            Frame::Lab => "lab",
            Frame::ResonantInteraction => "resonant",
            Frame::DetunedInteraction { .. } => "detuned",
            Frame::EffectiveDispersive(_) => "effective",
        }
    }
}

/// A coupling graph together with the frame it is rendered in.
#[derive(Clone, Debug, PartialEq)]
pub struct HamiltonianSpec {
    graph: CouplingGraph,
    frame: Frame,
}

impl HamiltonianSpec {
    pub fn new(graph: CouplingGraph, frame: Frame) -> Result<Self> {
        let n = graph.n_sites();
        match &frame {
            Frame::Lab => {
                if graph.frequencies.is_none() {
                    return Err(Error::Configuration(
                        "lab frame needs bus, qubit and ensemble frequencies".into(),
                    ));
                }
            }
            Frame::ResonantInteraction => {
                if let Some(f) = &graph.frequencies {
                    let close =
                        |a: f64, b: f64| (a - b).abs() <= RESONANCE_RTOL * a.abs().max(b.abs());
                    for j in (1..=n).filter(|&j| graph.is_enabled(j)) {
                        if !close(f.bus, f.qubit[j - 1]) || !close(f.bus, f.nvce[j - 1]) {
                            return Err(Error::Configuration(format!(
                                "resonant frame requires ω = ω_q = Ω, site {j} has \
                                 ω = {}, ω_q = {}, Ω = {}",
                                f.bus,
                                f.qubit[j - 1],
                                f.nvce[j - 1]
                            )));
                        }
                    }
                }
            }
            Frame::DetunedInteraction { detuning } => {
                if detuning.len() != n || detuning.iter().any(|d| !d.is_finite()) {
                    return Err(Error::Configuration(
                        "detuned frame needs one finite detuning per site".into(),
                    ));
                }
            }
            Frame::EffectiveDispersive(c) => {
                if c.n_sites() != n {
                    return Err(Error::Configuration(
                        "dispersive couplings must cover every site".into(),
                    ));
                }
            }
        }
        Ok(Self { graph, frame })
    }

    pub fn resonant(graph: CouplingGraph) -> Result<Self> {
        Self::new(graph, Frame::ResonantInteraction)
    }

    pub fn detuned(graph: CouplingGraph, detuning: Vec<f64>) -> Result<Self> {
        Self::new(graph, Frame::DetunedInteraction { detuning })
    }

    /// Effective dispersive Hamiltonian derived from the graph's `g_j` and the
    /// given detunings.
    pub fn effective_from_detuning(graph: CouplingGraph, detuning: &[f64]) -> Result<Self> {
        let couplings = DispersiveCouplings::from_detuning(graph.bus_coupling(), detuning)?;
        Self::new(graph, Frame::EffectiveDispersive(couplings))
    }

    /// Effective dispersive Hamiltonian from Stark shifts `λ_j` directly.
    pub fn effective_from_stark(graph: CouplingGraph, stark: &[f64]) -> Result<Self> {
        let couplings = DispersiveCouplings::from_stark_shifts(stark)?;
        Self::new(graph, Frame::EffectiveDispersive(couplings))
    }

    pub fn graph(&self) -> &CouplingGraph {
        &self.graph
    }

    pub fn frame(&self) -> &Frame {
        &self.frame
    }

    pub fn n_sites(&self) -> usize {
        self.graph.n_sites()
    }

    pub fn with_graph(&self, graph: CouplingGraph) -> Result<Self> {
        Self::new(graph, self.frame.clone())
    }

    pub fn toggle_site(&self, site: usize, enabled: bool) -> Result<Self> {
        self.with_graph(self.graph.toggle_site(site, enabled)?)
    }

    /// Whether the bus mode is part of this Hamiltonian's Hilbert space.
    pub fn has_bus(&self) -> bool {
        !matches!(self.frame, Frame::EffectiveDispersive(_))
    }

    pub fn is_time_dependent(&self) -> bool {
        match &self.frame {
            Frame::DetunedInteraction { detuning } => detuning.iter().any(|d| *d != 0.0),
            _ => false,
        }
    }

    /// The basis this Hamiltonian acts on.
    pub fn basis(&self) -> ExcitationBasis {
        ExcitationBasis::new(self.n_sites(), self.has_bus())
            .expect("graph always has at least one site")
    }

    pub fn check_basis(&self, basis: &ExcitationBasis) -> Result<()> {
        if basis.n_sites() != self.n_sites() || basis.has_bus() != self.has_bus() {
            return Err(Error::Configuration(format!(
                "{} frame on {} sites cannot act on {basis}",
                self.frame.name(),
                self.n_sites()
            )));
        }
        Ok(())
    }

    /// Energy of the all-ground state in the lab frame: the eigenvalue of the
    /// `½ω σ_z`-type free terms with every node unexcited.
    pub fn zero_point_energy(&self) -> f64 {
        match (&self.frame, &self.graph.frequencies) {
            (Frame::Lab, Some(f)) => {
                -0.5 * (f.bus + f.qubit.iter().sum::<f64>() + f.nvce.iter().sum::<f64>())
            }
            _ => 0.0,
        }
    }

    /// The Hamiltonian at time `t`.
    pub fn render(&self, basis: &ExcitationBasis, t: f64) -> Result<DMatrix<C64>> {
        self.check_basis(basis)?;
        Ok(self.render_at(t))
    }

    pub(crate) fn render_at(&self, t: f64) -> DMatrix<C64> {
        let basis = self.basis();
        let dim = basis.dim();
        let n = self.n_sites();
        let graph = &self.graph;
        let mut h = DMatrix::<C64>::zeros(dim, dim);
        let mut couple = |a: usize, b: usize, v: C64| {
            h[(a, b)] += v;
            h[(b, a)] += v.conj();
        };

        for j in 1..=n {
            let ne = basis.nvce_index(j).unwrap();
            let q = basis.qubit_index(j).unwrap();
            couple(q, ne, C64::new(graph.nvce_coupling[j - 1], 0.0));
        }

        match &self.frame {
            Frame::Lab | Frame::ResonantInteraction => {
                let bus = basis.bus_index().unwrap();
                for j in 1..=n {
                    let g = graph.active_bus_coupling(j);
                    couple(basis.qubit_index(j).unwrap(), bus, C64::new(g, 0.0));
                }
            }
            Frame::DetunedInteraction { detuning } => {
                let bus = basis.bus_index().unwrap();
                for j in 1..=n {
                    let g = graph.active_bus_coupling(j);
                    // a σ_j⁺ e^{iδt} takes |BUS⟩ to |Q_j⟩
                    let phase = C64::from_polar(g, detuning[j - 1] * t);
                    couple(basis.qubit_index(j).unwrap(), bus, phase);
                }
            }
            Frame::EffectiveDispersive(c) => {
                let active: Vec<usize> = (1..=n).filter(|&j| graph.is_enabled(j)).collect();
                for &j in &active {
                    let q = basis.qubit_index(j).unwrap();
                    h[(q, q)] += C64::new(c.stark_shift(j), 0.0);
                }
                for (a, &j) in active.iter().enumerate() {
                    for &k in &active[a + 1..] {
                        let (qj, qk) =
                            (basis.qubit_index(j).unwrap(), basis.qubit_index(k).unwrap());
                        h[(qj, qk)] += C64::new(c.exchange(j, k), 0.0);
                        h[(qk, qj)] += C64::new(c.exchange(j, k), 0.0);
                    }
                }
            }
        }

        if let (Frame::Lab, Some(f)) = (&self.frame, &graph.frequencies) {
            let zero = self.zero_point_energy();
            h[(0, 0)] += C64::new(zero, 0.0);
            for j in 1..=n {
                let ne = basis.nvce_index(j).unwrap();
                let q = basis.qubit_index(j).unwrap();
                h[(ne, ne)] += C64::new(zero + f.nvce[j - 1], 0.0);
                h[(q, q)] += C64::new(zero + f.qubit[j - 1], 0.0);
            }
            let bus = basis.bus_index().unwrap();
            h[(bus, bus)] += C64::new(zero + f.bus, 0.0);
        }
        h
    }

    /// Upper bound on the fastest frequency in the dynamics: the Gershgorin
    /// radius of `H(0)` plus the largest detuning.
    pub fn max_frequency(&self) -> f64 {
        let h = self.render_at(0.0);
        let gersh = h
            .row_iter()
            .map(|row| row.iter().map(|c| c.norm()).sum::<f64>())
            .fold(0.0, f64::max);
        let detune = match &self.frame {
            Frame::DetunedInteraction { detuning } => {
                detuning.iter().map(|d| d.abs()).fold(0.0, f64::max)
            }
            _ => 0.0,
        };
        gersh + detune
    }
}

/// Renders `spec` at time `t` on `basis`.
pub fn render_hamiltonian(
    spec: &HamiltonianSpec,
    basis: &ExcitationBasis,
    t: f64,
) -> Result<DMatrix<C64>> {
    spec.render(basis, t)
}
