//! Named reproduction runs, configuration files and parameter sweeps.
//!
//! A [`ScenarioConfig`] fully describes one run: Hamiltonian frame and
//! couplings, optional dissipation, the initial and target states, which
//! populations to record, and the time grid. [`run_scenario`] turns it into a
//! [`ResultTable`] whose first column is `Jt` with `J ≡ J₁`.

mod builtin;
mod config;
mod table;

pub use builtin::{builtin, builtin_ids, BUILTIN_IDS};
pub use config::{load_config, parse_config};
pub use table::{format_g12, write_atomic, ResultTable, POPULATION_SLACK};

use std::fmt;
use std::path::PathBuf;
use std::str::FromStr;

use rayon::prelude::*;

use crate::basis::{density_from_state, pure_state, BasisState, NodeLabel};
use crate::dynamics::{
    evolve_lindblad, evolve_schrodinger, IntegratorConfig, LindbladModel, Trajectory,
};
use crate::error::{Error, Result};
use crate::hamiltonian::{CouplingGraph, DispersiveCouplings, Frame, Frequencies, HamiltonianSpec};
use crate::observables::{
    fidelity, populations, transfer_time, Populated, DEFAULT_TRANSFER_THRESHOLD,
};

/// Output samples per unit of `Jt` when `samples` is not given.
pub const DEFAULT_SAMPLES_PER_JT: f64 = 20.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum FrameChoice {
    Lab,
    Resonant,
    Detuned,
    Effective,
}

impl FromStr for FrameChoice {
    type Err = String;

    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s.to_ascii_lowercase().as_str() {
            "lab" => Ok(FrameChoice::Lab),
            "resonant" => Ok(FrameChoice::Resonant),
            "detuned" => Ok(FrameChoice::Detuned),
            "effective" | "dispersive" => Ok(FrameChoice::Effective),
            _ => Err(format!(
                "unknown frame `{s}` (expected lab, resonant, detuned or effective)"
            )),
        }
    }
}

impl fmt::Display for FrameChoice {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            FrameChoice::Lab => "lab",
            FrameChoice::Resonant => "resonant",
            FrameChoice::Detuned => "detuned",
            FrameChoice::Effective => "effective",
        })
    }
}

/// Dissipation rates. Empty per-site lists mean zero.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Rates {
    pub bus_decay: f64,
    pub qubit_dephasing: Vec<f64>,
    pub nvce_dephasing: Vec<f64>,
    pub qubit_relaxation: Vec<f64>,
    pub nvce_relaxation: Vec<f64>,
}

impl Rates {
    pub fn uniform(n_sites: usize, rate: f64, with_bus: bool) -> Self {
        Rates {
            bus_decay: if with_bus { rate } else { 0.0 },
            qubit_dephasing: vec![rate; n_sites],
            nvce_dephasing: vec![rate; n_sites],
            qubit_relaxation: vec![rate; n_sites],
            nvce_relaxation: vec![rate; n_sites],
        }
    }

    fn site_lists(&self) -> [(&'static str, &Vec<f64>); 4] {
        [
            ("qubit_dephasing", &self.qubit_dephasing),
            ("nvce_dephasing", &self.nvce_dephasing),
            ("qubit_relaxation", &self.qubit_relaxation),
            ("nvce_relaxation", &self.nvce_relaxation),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.bus_decay == 0.0
            && self
                .site_lists()
                .iter()
                .all(|(_, v)| v.iter().all(|r| *r == 0.0))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub enum IntegratorChoice {
    /// Fixed-step RK4; `dt` in the same time unit as `t_end` (`1/J₁`). When
    /// absent the step follows the Hamiltonian's fastest frequency.
    Rk4 {
        dt: Option<f64>,
    },
    Rk45 {
        abs_tol: f64,
        rel_tol: f64,
    },
}

/// Scalar knobs a sweep can turn.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SweepAxis {
    G,
    J,
    Delta,
    Lambda,
    JOverG,
    DeltaOverG,
    JOverLambda,
    Rates,
    TEnd,
}

impl SweepAxis {
    pub const ALL: [SweepAxis; 9] = [
        SweepAxis::G,
        SweepAxis::J,
        SweepAxis::Delta,
        SweepAxis::Lambda,
        SweepAxis::JOverG,
        SweepAxis::DeltaOverG,
        SweepAxis::JOverLambda,
        SweepAxis::Rates,
        SweepAxis::TEnd,
    ];

    pub fn name(self) -> &'static str {
        match self {
            SweepAxis::G => "g",
            SweepAxis::J => "J",
            SweepAxis::Delta => "delta",
            SweepAxis::Lambda => "lambda",
            SweepAxis::JOverG => "J_over_g",
            SweepAxis::DeltaOverG => "delta_over_g",
            SweepAxis::JOverLambda => "J_over_lambda",
            SweepAxis::Rates => "rates",
            SweepAxis::TEnd => "t_end",
        }
    }

    /// Sets the swept quantity on every site.
    pub fn apply(self, cfg: &mut ScenarioConfig, value: f64) -> Result<()> {
        let field = format!("sweep.{}", self.name());
        if !value.is_finite() {
            return Err(Error::config(field, format!("value {value} is not finite")));
        }
        let n = cfg.n_sites;
        let positive = |what: &str| {
            if value > 0.0 {
                Ok(())
            } else {
                Err(Error::config(
                    field.clone(),
                    format!("{what} must be positive, got {value}"),
                ))
            }
        };
        match self {
            SweepAxis::G => cfg.g = vec![value; n],
            SweepAxis::J => cfg.j = vec![value; n],
            SweepAxis::Delta => {
                cfg.delta = Some(vec![value; n]);
                cfg.lambda = None;
            }
            SweepAxis::Lambda => {
                cfg.lambda = Some(vec![value; n]);
                cfg.delta = None;
            }
            SweepAxis::JOverG => {
                positive("J/g")?;
                cfg.g = cfg.j.iter().map(|j| j / value).collect();
            }
            SweepAxis::DeltaOverG => {
                cfg.delta = Some(cfg.g.iter().map(|g| g * value).collect());
                cfg.lambda = None;
            }
            SweepAxis::JOverLambda => {
                positive("J/λ")?;
                cfg.lambda = Some(cfg.j.iter().map(|j| j / value).collect());
                cfg.delta = None;
            }
            SweepAxis::Rates => {
                cfg.rates = Rates::uniform(n, value, cfg.frame != FrameChoice::Effective);
            }
            SweepAxis::TEnd => {
                positive("t_end")?;
                cfg.t_end = value;
            }
        }
        Ok(())
    }
}

impl FromStr for SweepAxis {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SweepAxis::ALL
            .into_iter()
            .find(|a| a.name() == s)
            .ok_or_else(|| {
                let names: Vec<_> = SweepAxis::ALL.iter().map(|a| a.name()).collect();
                Error::config(
                    "sweep.axis",
                    format!("unknown axis `{s}` (expected one of {})", names.join(", ")),
                )
            })
    }
}

impl fmt::Display for SweepAxis {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SweepSpec {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
}

/// Everything needed for one run. Couplings, detunings and rates share one
/// angular-frequency unit; `t_end` is in units of `1/J₁`.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioConfig {
    pub id: String,
    pub frame: FrameChoice,
    pub n_sites: usize,
    pub g: Vec<f64>,
    pub j: Vec<f64>,
    /// Qubit–bus detunings (detuned frame, or the effective frame derived from them).
    pub delta: Option<Vec<f64>>,
    /// Stark shifts `λⱼ` for the effective frame given directly.
    pub lambda: Option<Vec<f64>>,
    /// 1-based sites coupled to the bus; all when absent.
    pub enabled: Option<Vec<usize>>,
    pub frequencies: Option<Frequencies>,
    pub rates: Rates,
    pub alpha: f64,
    pub beta: f64,
    pub initial: BasisState,
    pub target: BasisState,
    pub track: Vec<BasisState>,
    pub fidelity: bool,
    pub t_end: f64,
    pub samples: Option<usize>,
    pub integrator: IntegratorChoice,
    pub output: Option<PathBuf>,
    pub sweep: Option<SweepSpec>,
}

impl ScenarioConfig {
    /// Two sites, resonant frame, `g = J = 1`, excitation on `NE1`, target `NE2`.
    pub fn new(id: impl Into<String>) -> Self {
        ScenarioConfig {
            id: id.into(),
            frame: FrameChoice::Resonant,
            n_sites: 2,
            g: vec![1.0; 2],
            j: vec![1.0; 2],
            delta: None,
            lambda: None,
            enabled: None,
            frequencies: None,
            rates: Rates::default(),
            alpha: 0.0,
            beta: 1.0,
            initial: NodeLabel::Nvce(1).into(),
            target: NodeLabel::Nvce(2).into(),
            track: vec![NodeLabel::Nvce(1).into(), NodeLabel::Nvce(2).into()],
            fidelity: false,
            t_end: 30.0,
            samples: None,
            integrator: IntegratorChoice::Rk4 { dt: None },
            output: None,
            sweep: None,
        }
    }

    pub fn samples(&self) -> usize {
        self.samples
            .unwrap_or_else(|| (DEFAULT_SAMPLES_PER_JT * self.t_end).round() as usize + 1)
    }

    pub fn is_dissipative(&self) -> bool {
        !self.rates.is_zero()
    }

    /// Checks every field, naming the first offending one.
    pub fn validate(&self) -> Result<()> {
        let n = self.n_sites;
        if n == 0 {
            return Err(Error::config("scenario.n_sites", "must be at least 1"));
        }
        let check_len = |field: &str, v: &[f64]| {
            if v.len() != n {
                return Err(Error::config(
                    field,
                    format!("expected {n} values, got {}", v.len()),
                ));
            }
            if let Some(x) = v.iter().find(|x| !x.is_finite()) {
                return Err(Error::config(field, format!("value {x} is not finite")));
            }
            Ok(())
        };
        let check_coupling = |field: &str, v: &[f64]| {
            check_len(field, v)?;
            match v.iter().find(|x| **x < 0.0) {
                Some(x) => Err(Error::config(field, format!("coupling {x} is negative"))),
                None => Ok(()),
            }
        };
        let needs_g =
            !(self.frame == FrameChoice::Effective && self.lambda.is_some()) || !self.g.is_empty();
        if needs_g {
            check_coupling("couplings.g", &self.g)?;
        }
        check_coupling("couplings.J", &self.j)?;
        if self.j[0] <= 0.0 {
            return Err(Error::config(
                "couplings.J",
                "J of site 1 must be positive; it sets the Jt axis",
            ));
        }
        if let Some(d) = &self.delta {
            check_len("couplings.delta", d)?;
        }
        if let Some(l) = &self.lambda {
            check_coupling("couplings.lambda", l)?;
        }
        match self.frame {
            FrameChoice::Detuned if self.delta.is_none() => {
                return Err(Error::config(
                    "couplings.delta",
                    "the detuned frame needs detunings",
                ));
            }
            FrameChoice::Effective => match (&self.delta, &self.lambda) {
                (None, None) => {
                    return Err(Error::config(
                        "couplings.lambda",
                        "the effective frame needs lambda or delta",
                    ));
                }
                (Some(_), Some(_)) => {
                    return Err(Error::config(
                        "couplings.lambda",
                        "give either lambda or delta, not both",
                    ));
                }
                _ => {}
            },
            FrameChoice::Lab if self.frequencies.is_none() => {
                return Err(Error::config(
                    "frequencies",
                    "the lab frame needs bus, qubit and nvce frequencies",
                ));
            }
            _ => {}
        }
        if let Some(sites) = &self.enabled {
            if let Some(s) = sites.iter().find(|s| **s == 0 || **s > n) {
                return Err(Error::config(
                    "couplings.enabled",
                    format!("site {s} is outside 1..={n}"),
                ));
            }
        }
        if !(self.bus_decay_allowed() || self.rates.bus_decay == 0.0) {
            return Err(Error::config(
                "dissipation.bus_decay",
                "the bus is eliminated in the effective frame; its decay rate must be 0",
            ));
        }
        if !(self.rates.bus_decay >= 0.0 && self.rates.bus_decay.is_finite()) {
            return Err(Error::config(
                "dissipation.bus_decay",
                "must be finite and non-negative",
            ));
        }
        for (name, list) in self.rates.site_lists() {
            let field = format!("dissipation.{name}");
            if !list.is_empty() {
                check_len(&field, list)?;
            }
            if list.iter().any(|r| *r < 0.0) {
                return Err(Error::config(field, "rates must be non-negative"));
            }
        }
        let norm = self.alpha * self.alpha + self.beta * self.beta;
        if !self.alpha.is_finite()
            || !self.beta.is_finite()
            || (norm - 1.0).abs() > crate::basis::SUPERPOSE_NORM_TOL
        {
            return Err(Error::config(
                "transfer.beta",
                format!("|alpha|² + |beta|² = {norm}, expected 1"),
            ));
        }
        let basis = crate::basis::make_basis(n, self.frame != FrameChoice::Effective)?;
        for (field, s) in [
            ("transfer.initial", &self.initial),
            ("transfer.target", &self.target),
        ]
        .into_iter()
        .chain(self.track.iter().map(|s| ("output.track", s)))
        {
            if basis.index_of(*s).is_none() {
                return Err(Error::config(
                    field,
                    format!("{s} is not a state of the {basis} basis"),
                ));
            }
        }
        if !(self.t_end > 0.0 && self.t_end.is_finite()) {
            return Err(Error::config(
                "output.t_end",
                format!("must be positive, got {}", self.t_end),
            ));
        }
        if self.samples() < 2 {
            return Err(Error::config("output.samples", "need at least 2 samples"));
        }
        match self.integrator {
            IntegratorChoice::Rk4 { dt: Some(dt) } if !(dt > 0.0 && dt.is_finite()) => {
                return Err(Error::config(
                    "integrator.dt",
                    format!("must be positive, got {dt}"),
                ));
            }
            IntegratorChoice::Rk45 { abs_tol, rel_tol } if !(abs_tol > 0.0 && rel_tol > 0.0) => {
                return Err(Error::config(
                    "integrator.abs_tol",
                    "tolerances must be positive",
                ));
            }
            _ => {}
        }
        if let Some(sweep) = &self.sweep {
            if let Some(v) = sweep.values.iter().find(|v| !v.is_finite()) {
                return Err(Error::config(
                    "sweep.values",
                    format!("value {v} is not finite"),
                ));
            }
        }
        Ok(())
    }

    fn bus_decay_allowed(&self) -> bool {
        self.frame != FrameChoice::Effective
    }

    /// The Hamiltonian this configuration describes.
    pub fn hamiltonian(&self) -> Result<HamiltonianSpec> {
        let g = if self.g.is_empty() {
            vec![0.0; self.n_sites]
        } else {
            self.g.clone()
        };
        let mut graph = CouplingGraph::new(g, self.j.clone())?;
        if let Some(sites) = &self.enabled {
            graph = graph.with_enabled_sites(sites)?;
        }
        let frame = match self.frame {
            FrameChoice::Lab => {
                graph = graph.with_frequencies(self.frequencies.clone().expect("validated"))?;
                Frame::Lab
            }
            FrameChoice::Resonant => Frame::ResonantInteraction,
            FrameChoice::Detuned => Frame::DetunedInteraction {
                detuning: self.delta.clone().expect("validated"),
            },
            FrameChoice::Effective => {
                Frame::EffectiveDispersive(match (&self.lambda, &self.delta) {
                    (Some(l), _) => DispersiveCouplings::from_stark_shifts(l)?,
                    (None, Some(d)) => DispersiveCouplings::from_detuning(graph.bus_coupling(), d)?,
                    (None, None) => unreachable!("validated"),
                })
            }
        };
        HamiltonianSpec::new(graph, frame)
    }

    fn integrator_config(&self, spec: &HamiltonianSpec) -> Result<IntegratorConfig> {
        let j1 = self.j[0];
        let t_end = self.t_end / j1;
        let samples = self.samples();
        match self.integrator {
            IntegratorChoice::Rk4 { dt: None } => {
                IntegratorConfig::uniform_rk4(spec.max_frequency(), t_end, samples)
            }
            IntegratorChoice::Rk4 { dt: Some(dt) } => {
                let spacing = t_end / (samples - 1) as f64;
                let per = (spacing / (dt / j1)).ceil().max(1.0);
                Ok(IntegratorConfig::rk4(spacing / per, t_end, per as usize))
            }
            IntegratorChoice::Rk45 { abs_tol, rel_tol } => Ok(IntegratorConfig::rk45(
                abs_tol,
                rel_tol,
                t_end / (samples - 1) as f64,
                t_end,
            )),
        }
    }

    fn lindblad_model(&self, spec: HamiltonianSpec) -> Result<LindbladModel> {
        let n = self.n_sites;
        let or_zero = |v: &Vec<f64>| {
            if v.is_empty() {
                vec![0.0; n]
            } else {
                v.clone()
            }
        };
        LindbladModel::new(
            spec,
            self.rates.bus_decay,
            or_zero(&self.rates.qubit_dephasing),
            or_zero(&self.rates.nvce_dephasing),
            or_zero(&self.rates.qubit_relaxation),
            or_zero(&self.rates.nvce_relaxation),
        )
    }

    pub fn headers(&self) -> Vec<String> {
        let mut h = vec!["Jt".to_string()];
        h.extend(self.track.iter().map(|s| format!("P_{s}")));
        if self.fidelity {
            h.push("F".into());
        }
        h
    }
}

/// A finished run together with the figures a sweep summarises.
#[derive(Clone, Debug, PartialEq)]
pub struct ScenarioOutcome {
    pub table: ResultTable,
    /// Largest sampled population of the target state.
    pub peak_target: f64,
    /// First `Jt` where the target population reaches 0.99.
    pub transfer_jt: Option<f64>,
}

pub fn run_scenario(cfg: &ScenarioConfig) -> Result<ResultTable> {
    Ok(run_scenario_outcome(cfg)?.table)
}

pub fn run_scenario_outcome(cfg: &ScenarioConfig) -> Result<ScenarioOutcome> {
    cfg.validate()?;
    let spec = cfg.hamiltonian()?;
    let icfg = cfg.integrator_config(&spec)?;
    let psi0 = pure_state(&spec.basis(), cfg.initial)?;
    if cfg.is_dissipative() {
        let model = cfg.lindblad_model(spec)?;
        let traj = evolve_lindblad(&model, &density_from_state(&psi0), &icfg)?;
        outcome(cfg, &traj)
    } else {
        let traj = evolve_schrodinger(&spec, &psi0, &icfg)?;
        outcome(cfg, &traj)
    }
}

fn outcome<S: Populated>(cfg: &ScenarioConfig, traj: &Trajectory<S>) -> Result<ScenarioOutcome> {
    let j1 = cfg.j[0];
    let series = populations(traj);
    let columns: Vec<Vec<f64>> = cfg
        .track
        .iter()
        .map(|s| series.of(*s))
        .collect::<Result<_>>()?;
    let f = if cfg.fidelity {
        let c = |x| num_complex::Complex64::new(x, 0.0);
        Some(fidelity(traj, c(cfg.alpha), c(cfg.beta), cfg.target)?.values)
    } else {
        None
    };
    let rows = (0..series.times.len())
        .map(|k| {
            let mut row = Vec::with_capacity(columns.len() + 2);
            row.push(j1 * series.times[k]);
            row.extend(columns.iter().map(|c| c[k]));
            row.extend(f.as_ref().map(|f| f[k]));
            row
        })
        .collect();
    let table = ResultTable::new(cfg.headers(), rows)?;
    let target = series.of(cfg.target)?;
    Ok(ScenarioOutcome {
        table,
        peak_target: target.iter().copied().fold(0.0, f64::max),
        transfer_jt: transfer_time(&series, cfg.target, DEFAULT_TRANSFER_THRESHOLD)?
            .map(|t| j1 * t),
    })
}

/// One table per swept value plus a summary.
#[derive(Clone, Debug, PartialEq)]
pub struct SweepResult {
    pub axis: SweepAxis,
    pub values: Vec<f64>,
    pub configs: Vec<ScenarioConfig>,
    pub outcomes: Vec<ScenarioOutcome>,
}

impl SweepResult {
    pub fn tables(&self) -> impl Iterator<Item = &ResultTable> {
        self.outcomes.iter().map(|o| &o.table)
    }

    /// `value,peak_P_<target>,transfer_Jt`; the last cell is empty when the
    /// threshold was never reached.
    pub fn summary_csv(&self, target: BasisState) -> String {
        let mut out = format!("{},peak_P_{target},transfer_Jt\n", self.axis);
        for (v, o) in self.values.iter().zip(&self.outcomes) {
            table::push_row(
                &mut out,
                [
                    format_g12(*v),
                    format_g12(o.peak_target),
                    o.transfer_jt.map(format_g12).unwrap_or_default(),
                ]
                .into_iter(),
            );
        }
        out
    }
}

/// Runs `base` once per value with `axis` set to that value. Runs are
/// independent and execute on up to `jobs` threads (all cores when `None`);
/// results keep the order of `values`.
pub fn run_sweep(
    base: &ScenarioConfig,
    axis: SweepAxis,
    values: &[f64],
    jobs: Option<usize>,
) -> Result<SweepResult> {
    let configs = values
        .iter()
        .map(|v| {
            let mut cfg = base.clone();
            cfg.sweep = None;
            axis.apply(&mut cfg, *v)?;
            cfg.id = format!("{}_{}={}", base.id, axis, format_g12(*v));
            Ok(cfg)
        })
        .collect::<Result<Vec<_>>>()?;
    let outcomes = run_many(&configs, jobs)?;
    Ok(SweepResult {
        axis,
        values: values.to_vec(),
        configs,
        outcomes,
    })
}

/// Runs independent scenarios in parallel, keeping input order. The first
/// error in input order is returned.
pub fn run_many(configs: &[ScenarioConfig], jobs: Option<usize>) -> Result<Vec<ScenarioOutcome>> {
    run_each(configs, jobs)?.into_iter().collect()
}

/// Like [`run_many`] but keeps every run's own result. The outer error only
/// reports a thread pool that could not be started.
pub fn run_each(
    configs: &[ScenarioConfig],
    jobs: Option<usize>,
) -> Result<Vec<Result<ScenarioOutcome>>> {
    let work = || {
        configs
            .par_iter()
            .map(run_scenario_outcome)
            .collect::<Vec<_>>()
    };
    Ok(match jobs {
        Some(k) => rayon::ThreadPoolBuilder::new()
            .num_threads(k.max(1))
            .build()
            .map_err(|e| Error::Configuration(format!("cannot start {k} worker threads: {e}")))?
            .install(work),
        None => work(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_abs_diff_eq;

    #[test]
    fn default_samples_follow_t_end() {
        let mut cfg = ScenarioConfig::new("x");
        assert_eq!(cfg.samples(), 601);
        cfg.t_end = 100.0;
        assert_eq!(cfg.samples(), 2001);
        cfg.samples = Some(11);
        assert_eq!(cfg.samples(), 11);
    }

    #[test]
    fn validation_names_the_field() {
        let field_of = |cfg: &ScenarioConfig| match cfg.validate() {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        };
        let mut cfg = ScenarioConfig::new("x");
        cfg.g = vec![1.0];
        assert_eq!(field_of(&cfg), "couplings.g");
        let mut cfg = ScenarioConfig::new("x");
        cfg.frame = FrameChoice::Detuned;
        assert_eq!(field_of(&cfg), "couplings.delta");
        let mut cfg = ScenarioConfig::new("x");
        cfg.t_end = 0.0;
        assert_eq!(field_of(&cfg), "output.t_end");
        let mut cfg = ScenarioConfig::new("x");
        cfg.samples = Some(1);
        assert_eq!(field_of(&cfg), "output.samples");
        let mut cfg = ScenarioConfig::new("x");
        cfg.alpha = 0.5;
        assert_eq!(field_of(&cfg), "transfer.beta");
        let mut cfg = ScenarioConfig::new("x");
        cfg.frame = FrameChoice::Effective;
        cfg.lambda = Some(vec![1.0, 1.0]);
        cfg.track.push(NodeLabel::Bus.into());
        assert_eq!(field_of(&cfg), "output.track");
        let mut cfg = ScenarioConfig::new("x");
        cfg.frame = FrameChoice::Effective;
        cfg.lambda = Some(vec![1.0, 1.0]);
        cfg.rates.bus_decay = 0.1;
        assert_eq!(field_of(&cfg), "dissipation.bus_decay");
        let mut cfg = ScenarioConfig::new("x");
        cfg.enabled = Some(vec![3]);
        assert_eq!(field_of(&cfg), "couplings.enabled");
    }

    #[test]
    fn resonant_run_matches_closed_form() {
        let mut cfg = ScenarioConfig::new("x");
        cfg.t_end = 10.0;
        cfg.integrator = IntegratorChoice::Rk4 { dt: Some(0.005) };
        let table = run_scenario(&cfg).unwrap();
        assert_eq!(table.headers(), ["Jt", "P_NE1", "P_NE2"]);
        assert_eq!(table.len(), 201);
        for row in table.rows() {
            let c = crate::analytic::resonant_coefficients(row[0], 1.0, 1.0).unwrap();
            assert_abs_diff_eq!(row[1], c.c1().norm_sqr(), epsilon = 1e-8);
            assert_abs_diff_eq!(row[2], c.c5().norm_sqr(), epsilon = 1e-8);
        }
    }

    #[test]
    fn jt_axis_scales_with_j1() {
        let mut a = ScenarioConfig::new("a");
        a.t_end = 5.0;
        let mut b = a.clone();
        b.g = vec![2.0; 2];
        b.j = vec![2.0; 2];
        let (ta, tb) = (run_scenario(&a).unwrap(), run_scenario(&b).unwrap());
        assert_eq!(ta.len(), tb.len());
        for (ra, rb) in ta.rows().iter().zip(tb.rows()) {
            assert_abs_diff_eq!(ra[0], rb[0], epsilon = 1e-12);
            assert_abs_diff_eq!(ra[2], rb[2], epsilon = 1e-6);
        }
    }

    #[test]
    fn sweep_axes_parse_and_apply() {
        assert_eq!("J_over_g".parse::<SweepAxis>().unwrap(), SweepAxis::JOverG);
        assert!(matches!(
            "bogus".parse::<SweepAxis>(),
            Err(Error::Config { .. })
        ));
        let mut cfg = ScenarioConfig::new("x");
        SweepAxis::JOverG.apply(&mut cfg, 0.1).unwrap();
        assert_eq!(cfg.g, vec![10.0, 10.0]);
        SweepAxis::DeltaOverG.apply(&mut cfg, 20.0).unwrap();
        assert_eq!(cfg.delta, Some(vec![200.0, 200.0]));
        SweepAxis::Rates.apply(&mut cfg, 0.01).unwrap();
        assert!(cfg.is_dissipative());
        assert!(SweepAxis::JOverG.apply(&mut cfg, 0.0).is_err());
        assert!(SweepAxis::G.apply(&mut cfg, f64::NAN).is_err());
    }

    #[test]
    fn empty_sweep_is_empty() {
        let r = run_sweep(&ScenarioConfig::new("x"), SweepAxis::G, &[], Some(2)).unwrap();
        assert!(r.outcomes.is_empty());
        assert_eq!(
            r.summary_csv(NodeLabel::Nvce(2).into()),
            "g,peak_P_NE2,transfer_Jt\n"
        );
    }

    #[test]
    fn sweep_results_keep_order_and_match_single_runs() {
        let mut base = ScenarioConfig::new("base");
        base.t_end = 8.0;
        let values = [0.1, 1.0, 10.0];
        let r = run_sweep(&base, SweepAxis::JOverG, &values, Some(3)).unwrap();
        for (v, o) in values.iter().zip(&r.outcomes) {
            let mut single = base.clone();
            SweepAxis::JOverG.apply(&mut single, *v).unwrap();
            assert_eq!(o.table, run_scenario(&single).unwrap());
        }
        // strong inductance transfers near π, equilibrium later, strong magnetic not within Jt = 8
        assert!((r.outcomes[0].transfer_jt.unwrap() - 3.02).abs() < 0.01);
        assert!(r.outcomes[2].transfer_jt.is_none());
        let csv = r.summary_csv(NodeLabel::Nvce(2).into());
        assert_eq!(csv.lines().count(), 4);
        assert!(csv.lines().nth(3).unwrap().ends_with(','));
    }
}
