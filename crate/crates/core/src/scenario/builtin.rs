//! Parameter sets for the reproduction runs. Every set uses `J₁ = 1`, so
//! couplings and rates are in units of `J₁`.

use super::{FrameChoice, Rates, ScenarioConfig};
use crate::basis::NodeLabel;
use crate::error::{Error, Result};

pub const BUILTIN_IDS: [&str; 17] = [
    "res-bal-eq",
    "res-bal-mag",
    "res-bal-ind",
    "res-unbal-eq",
    "res-unbal-mag",
    "res-unbal-ind",
    "disp-bal-eq",
    "disp-bal-mag",
    "disp-bal-ind",
    "disp-unbal-eq",
    "disp-unbal-mag",
    "disp-unbal-ind",
    "fid-res",
    "fid-disp",
    "fid-res-dissip",
    "fid-disp-dissip",
    "chain-select",
];

pub fn builtin_ids() -> &'static [&'static str] {
    &BUILTIN_IDS
}

/// Strong-magnetic runs need longer to show a full exchange.
const T_END: f64 = 30.0;
const T_END_MAGNETIC: f64 = 100.0;
const FIDELITY_RATE: f64 = 0.001;

fn resonant(id: &str, g: [f64; 2], j: [f64; 2], t_end: f64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(id);
    cfg.g = g.to_vec();
    cfg.j = j.to_vec();
    cfg.t_end = t_end;
    cfg
}

fn dispersive(id: &str, lambda: [f64; 2], j: [f64; 2], t_end: f64) -> ScenarioConfig {
    let mut cfg = ScenarioConfig::new(id);
    cfg.frame = FrameChoice::Effective;
    cfg.g = Vec::new();
    cfg.lambda = Some(lambda.to_vec());
    cfg.j = j.to_vec();
    cfg.t_end = t_end;
    cfg
}

fn with_fidelity(mut cfg: ScenarioConfig, dissipative: bool) -> ScenarioConfig {
    cfg.alpha = 1.0 / 3f64.sqrt();
    cfg.beta = (2.0f64 / 3.0).sqrt();
    cfg.fidelity = true;
    if dissipative {
        cfg.rates = Rates::uniform(
            cfg.n_sites,
            FIDELITY_RATE,
            cfg.frame != FrameChoice::Effective,
        );
    }
    cfg
}

/// The configuration registered under `id`.
pub fn builtin(id: &str) -> Result<ScenarioConfig> {
    // unbalanced sets: the second pair is scaled by 1/0.9 relative to the first
    let r = 1.0 / 0.9;
    let cfg = match id {
        "res-bal-eq" => resonant(id, [1.0, 1.0], [1.0, 1.0], T_END),
        "res-bal-mag" => resonant(id, [0.1, 0.1], [1.0, 1.0], T_END_MAGNETIC),
        "res-bal-ind" => resonant(id, [10.0, 10.0], [1.0, 1.0], T_END),
        "res-unbal-eq" => resonant(id, [0.9, 0.81], [1.0, 0.9], T_END),
        "res-unbal-mag" => resonant(id, [0.1, 0.1 * r], [1.0, r], T_END_MAGNETIC),
        "res-unbal-ind" => resonant(id, [10.0, 10.0 * r], [1.0, r], T_END),
        "disp-bal-eq" => dispersive(id, [1.0, 1.0], [1.0, 1.0], T_END),
        "disp-bal-mag" => dispersive(id, [0.1, 0.1], [1.0, 1.0], T_END_MAGNETIC),
        "disp-bal-ind" => dispersive(id, [10.0, 10.0], [1.0, 1.0], T_END),
        "disp-unbal-eq" => dispersive(id, [0.9, 0.81], [1.0, 0.9], T_END),
        "disp-unbal-mag" => dispersive(id, [0.1, 0.1 * r], [1.0, r], T_END_MAGNETIC),
        "disp-unbal-ind" => dispersive(id, [10.0, 10.0 * r], [1.0, r], T_END),
        "fid-res" => with_fidelity(resonant(id, [10.0, 10.0], [1.0, 1.0], T_END), false),
        "fid-res-dissip" => with_fidelity(resonant(id, [10.0, 10.0], [1.0, 1.0], T_END), true),
        "fid-disp" => with_fidelity(dispersive(id, [10.0, 10.0], [1.0, 1.0], T_END), false),
        "fid-disp-dissip" => with_fidelity(dispersive(id, [10.0, 10.0], [1.0, 1.0], T_END), true),
        "chain-select" => {
            let mut cfg = ScenarioConfig::new(id);
            cfg.n_sites = 4;
            cfg.g = vec![1.0; 4];
            cfg.j = vec![1.0; 4];
            cfg.enabled = Some(vec![2, 4]);
            cfg.initial = NodeLabel::Nvce(2).into();
            cfg.target = NodeLabel::Nvce(4).into();
            cfg.track = vec![cfg.initial, cfg.target];
            cfg
        }
        _ => {
            return Err(Error::config(
                "scenario.id",
                format!("unknown scenario `{id}`; known: {}", BUILTIN_IDS.join(", ")),
            ))
        }
    };
    Ok(cfg)
}
