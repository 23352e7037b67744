//! Master-equation evolution with bus photon loss, qubit and ensemble
//! relaxation, and qubit and ensemble dephasing:
//!
//! ```text
//! ρ̇ = −i[H, ρ] + (κ/2)(2aρa† − a†aρ − ρa†a)
//!      + Σ_j (γ'_qj/2)(σ_z^j ρ σ_z^j − ρ) + (γ'_Nj/2)(S_z^j ρ S_z^j − ρ)
//!      + Σ_j (γ_qj/2)(2σ_j⁻ρσ_j⁺ − ρσ_j⁺σ_j⁻ − σ_j⁺σ_j⁻ρ)
//!      + Σ_j (γ_Nj/2)(2S_j⁻ρS_j⁺ − ρS_j⁺S_j⁻ − S_j⁺S_j⁻ρ)
//! ```
//!
//! The dephasing terms are written exactly as `(γ'/2)(ZρZ − ρ)`. Since
//! `Z² = 1` this equals `(γ'/4)(2ZρZ − Z²ρ − ρZ²)`, i.e. a standard Lindblad
//! dissipator with rate `γ'/2`, not `γ'`. Don't swap one for the other.
//!
//! On the single-excitation basis every jump operator is a rank-one map to the
//! ground state (`a = |G⟩⟨BUS|`, `σ_j⁻ = |G⟩⟨Q_j|`, `S_j⁻ = |G⟩⟨NE_j|`) and
//! every `Z` is diagonal with `+1` on the excited node and `−1` elsewhere.

use nalgebra::DMatrix;
use num_complex::Complex64 as C64;

use super::{check_basis, integrate, Generator, IntegratorConfig, Trajectory, TrajectorySource};
use crate::basis::{DensityMatrix, ExcitationBasis};
use crate::error::{Error, Result};
use crate::hamiltonian::HamiltonianSpec;

/// A Hamiltonian plus its dissipation rates (all in the Hamiltonian's
/// frequency units).
#[derive(Clone, Debug, PartialEq)]
pub struct LindbladModel {
    hamiltonian: HamiltonianSpec,
    bus_decay: f64,
    qubit_dephasing: Vec<f64>,
    nvce_dephasing: Vec<f64>,
    qubit_relaxation: Vec<f64>,
    nvce_relaxation: Vec<f64>,
}

impl LindbladModel {
    pub fn new(
        hamiltonian: HamiltonianSpec,
        bus_decay: f64,
        qubit_dephasing: Vec<f64>,
        nvce_dephasing: Vec<f64>,
        qubit_relaxation: Vec<f64>,
        nvce_relaxation: Vec<f64>,
    ) -> Result<Self> {
        let n = hamiltonian.n_sites();
        for (name, rates) in [
            ("qubit dephasing", &qubit_dephasing),
            ("ensemble dephasing", &nvce_dephasing),
            ("qubit relaxation", &qubit_relaxation),
            ("ensemble relaxation", &nvce_relaxation),
        ] {
            if rates.len() != n {
                return Err(Error::invalid(format!(
                    "{name} needs {n} rates, got {}",
                    rates.len()
                )));
            }
            if let Some(r) = rates.iter().find(|r| !(**r >= 0.0 && r.is_finite())) {
                return Err(Error::invalid(format!(
                    "{name} rate must be non-negative, got {r}"
                )));
            }
        }
        if !(bus_decay >= 0.0 && bus_decay.is_finite()) {
            return Err(Error::invalid(format!(
                "bus decay rate must be non-negative, got {bus_decay}"
            )));
        }
        if !hamiltonian.has_bus() && bus_decay != 0.0 {
            return Err(Error::Configuration(
                "the effective Hamiltonian has no bus mode, so its decay rate must be zero".into(),
            ));
        }
        Ok(Self {
            hamiltonian,
            bus_decay,
            qubit_dephasing,
            nvce_dephasing,
            qubit_relaxation,
            nvce_relaxation,
        })
    }

    /// No dissipation at all.
    pub fn coherent(hamiltonian: HamiltonianSpec) -> Self {
        let n = hamiltonian.n_sites();
        Self::new(
            hamiltonian,
            0.0,
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
            vec![0.0; n],
        )
        .expect("zero rates are always valid")
    }

    /// Every channel at the same `rate` (the bus channel only if the frame has
    /// a bus).
    pub fn uniform(hamiltonian: HamiltonianSpec, rate: f64) -> Result<Self> {
        let n = hamiltonian.n_sites();
        let kappa = if hamiltonian.has_bus() { rate } else { 0.0 };
        Self::new(
            hamiltonian,
            kappa,
            vec![rate; n],
            vec![rate; n],
            vec![rate; n],
            vec![rate; n],
        )
    }

    pub fn hamiltonian(&self) -> &HamiltonianSpec {
        &self.hamiltonian
    }

    pub fn bus_decay(&self) -> f64 {
        self.bus_decay
    }

    pub fn qubit_dephasing(&self) -> &[f64] {
        &self.qubit_dephasing
    }

    pub fn nvce_dephasing(&self) -> &[f64] {
        &self.nvce_dephasing
    }

    pub fn qubit_relaxation(&self) -> &[f64] {
        &self.qubit_relaxation
    }

    pub fn nvce_relaxation(&self) -> &[f64] {
        &self.nvce_relaxation
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum ChannelKind {
    BusDecay,
    QubitRelaxation(usize),
    NvceRelaxation(usize),
    QubitDephasing(usize),
    NvceDephasing(usize),
}

/// Which functional form the channel enters the master equation with.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Dissipator {
    /// `(γ/2)(2LρL† − L†Lρ − ρL†L)`.
    Lowering,
    /// `(γ/2)(ZρZ − ρ)`.
    Dephasing,
}

#[derive(Clone, Debug, PartialEq)]
pub struct Channel {
    pub kind: ChannelKind,
    pub dissipator: Dissipator,
    pub operator: DMatrix<C64>,
    pub rate: f64,
}

fn lowering(basis: &ExcitationBasis, from: usize) -> DMatrix<C64> {
    let mut m = DMatrix::zeros(basis.dim(), basis.dim());
    m[(basis.ground_index(), from)] = C64::new(1.0, 0.0);
    m
}

fn pauli_z(basis: &ExcitationBasis, excited: usize) -> DMatrix<C64> {
    let mut m = DMatrix::from_diagonal_element(basis.dim(), basis.dim(), C64::new(-1.0, 0.0));
    m[(excited, excited)] = C64::new(1.0, 0.0);
    m
}

/// The model's jump operators on `basis`, in a fixed order (bus decay, then
/// per site: qubit relaxation, ensemble relaxation, qubit dephasing, ensemble
/// dephasing). Zero-rate channels are left out.
pub fn build_collapse_operators(
    model: &LindbladModel,
    basis: &ExcitationBasis,
) -> Result<Vec<Channel>> {
    check_basis(&model.hamiltonian, basis)?;
    let mut channels = Vec::new();
    let mut push = |kind, dissipator, operator, rate: f64| {
        if rate > 0.0 {
            channels.push(Channel {
                kind,
                dissipator,
                operator,
                rate,
            });
        }
    };
    if let Some(bus) = basis.bus_index() {
        push(
            ChannelKind::BusDecay,
            Dissipator::Lowering,
            lowering(basis, bus),
            model.bus_decay,
        );
    }
    for j in 1..=basis.n_sites() {
        let q = basis.qubit_index(j).unwrap();
        let ne = basis.nvce_index(j).unwrap();
        push(
            ChannelKind::QubitRelaxation(j),
            Dissipator::Lowering,
            lowering(basis, q),
            model.qubit_relaxation[j - 1],
        );
        push(
            ChannelKind::NvceRelaxation(j),
            Dissipator::Lowering,
            lowering(basis, ne),
            model.nvce_relaxation[j - 1],
        );
        push(
            ChannelKind::QubitDephasing(j),
            Dissipator::Dephasing,
            pauli_z(basis, q),
            model.qubit_dephasing[j - 1],
        );
        push(
            ChannelKind::NvceDephasing(j),
            Dissipator::Dephasing,
            pauli_z(basis, ne),
            model.nvce_dephasing[j - 1],
        );
    }
    Ok(channels)
}

/// A channel reduced to the cheapest exact way of applying its dissipator.
enum PreparedChannel {
    /// `L = v|to⟩⟨from|`: `LρL† = |v|² ρ_ff |to⟩⟨to|`, `L†L = |v|² |from⟩⟨from|`.
    Transition {
        to: usize,
        from: usize,
        weight: f64,
        half_rate: f64,
    },
    /// Diagonal `L`: `(LρL†)_ab = l_a ρ_ab l_b*`.
    Diagonal {
        diag: Vec<C64>,
        dissipator: Dissipator,
        half_rate: f64,
    },
    Dense {
        dissipator: Dissipator,
        op: DMatrix<C64>,
        op_dag: DMatrix<C64>,
        op_dag_op: DMatrix<C64>,
        half_rate: f64,
    },
}

impl PreparedChannel {
    fn new(c: Channel) -> Self {
        let half_rate = 0.5 * c.rate;
        let op = &c.operator;
        let nonzero: Vec<(usize, usize)> = (0..op.ncols())
            .flat_map(|j| (0..op.nrows()).map(move |i| (i, j)))
            .filter(|&(i, j)| op[(i, j)] != C64::new(0.0, 0.0))
            .collect();
        if c.dissipator == Dissipator::Lowering
            && nonzero.len() == 1
            && nonzero[0].0 != nonzero[0].1
        {
            let (to, from) = nonzero[0];
            return PreparedChannel::Transition {
                to,
                from,
                weight: op[(to, from)].norm_sqr(),
                half_rate,
            };
        }
        if nonzero.iter().all(|(i, j)| i == j) {
            return PreparedChannel::Diagonal {
                diag: op.diagonal().iter().copied().collect(),
                dissipator: c.dissipator,
                half_rate,
            };
        }
        let op_dag = c.operator.adjoint();
        let op_dag_op = &op_dag * &c.operator;
        PreparedChannel::Dense {
            dissipator: c.dissipator,
            op: c.operator,
            op_dag,
            op_dag_op,
            half_rate,
        }
    }

    fn add_to(&self, rho: &DMatrix<C64>, out: &mut DMatrix<C64>) {
        match self {
            &PreparedChannel::Transition {
                to,
                from,
                weight,
                half_rate,
            } => {
                // (γ/2)(2LρL† − L†Lρ − ρL†L): row and column `from` decay, `to` gains
                let s = half_rate * weight;
                let n = rho.nrows();
                for k in 0..n {
                    out[(from, k)] -= rho[(from, k)] * s;
                    out[(k, from)] -= rho[(k, from)] * s;
                }
                out[(to, to)] += rho[(from, from)] * (2.0 * s);
            }
            PreparedChannel::Diagonal {
                diag,
                dissipator,
                half_rate,
            } => {
                let n = rho.nrows();
                for b in 0..n {
                    for a in 0..n {
                        let sandwich = diag[a] * rho[(a, b)] * diag[b].conj();
                        let term = match dissipator {
                            Dissipator::Lowering => {
                                2.0 * sandwich
                                    - (diag[a].norm_sqr() + diag[b].norm_sqr()) * rho[(a, b)]
                            }
                            Dissipator::Dephasing => sandwich - rho[(a, b)],
                        };
                        out[(a, b)] += term * *half_rate;
                    }
                }
            }
            PreparedChannel::Dense {
                dissipator,
                op,
                op_dag,
                op_dag_op,
                half_rate,
            } => {
                let scale = C64::new(*half_rate, 0.0);
                let sandwich = op * rho * op_dag;
                match dissipator {
                    Dissipator::Lowering => {
                        let term =
                            sandwich * C64::new(2.0, 0.0) - op_dag_op * rho - rho * op_dag_op;
                        *out += term * scale;
                    }
                    Dissipator::Dephasing => {
                        *out += (sandwich - rho) * scale;
                    }
                }
            }
        }
    }
}

/// Integrates the master equation from `rho0`. `ρ` is re-symmetrized to
/// `(ρ + ρ†)/2` after every step.
pub fn evolve_lindblad(
    model: &LindbladModel,
    rho0: &DensityMatrix,
    cfg: &IntegratorConfig,
) -> Result<Trajectory<DensityMatrix>> {
    let basis = rho0.basis().clone();
    let channels: Vec<PreparedChannel> = build_collapse_operators(model, &basis)?
        .into_iter()
        .map(PreparedChannel::new)
        .collect();
    let generator = Generator::new(&model.hamiltonian);

    let rhs = |t: f64, rho: &DMatrix<C64>| -> DMatrix<C64> {
        // with A = −iH: Aρ − ρA = −i[H, ρ]
        let a = generator.at(t);
        let mut out = a.as_ref() * rho - rho * a.as_ref();
        for c in &channels {
            c.add_to(rho, &mut out);
        }
        out
    };
    let symmetrize = |rho: &mut DMatrix<C64>| {
        let adj = rho.adjoint();
        *rho += adj;
        *rho *= C64::new(0.5, 0.0);
    };
    let (times, states) = integrate(rhs, rho0.matrix().clone(), cfg, symmetrize)?;
    Ok(Trajectory {
        times,
        states: states
            .into_iter()
            .map(|m| DensityMatrix::from_evolved(basis.clone(), m))
            .collect(),
        source: TrajectorySource::Lindblad(model.clone()),
        config: *cfg,
    })
}
