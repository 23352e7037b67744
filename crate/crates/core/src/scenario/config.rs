//! Scenario files: `key = value` lines grouped under `[section]` headers.
//!
//! ```text
//! # strong mutual-inductance run with a longer window
//! [scenario]
//! base = res-bal-ind
//! id = ind-long
//!
//! [couplings]
//! g = 10, 10
//! J = 1, 1
//!
//! [output]
//! t_end = 60
//! track = NE1, Q1, BUS, NE2
//! ```
//!
//! Arrays are comma separated and must have one entry per site. `#` and `;`
//! start comments. With `base` the named built-in scenario supplies every
//! field the file leaves out.

use std::collections::HashMap;
use std::path::{Path, PathBuf};

use super::{builtin, FrameChoice, IntegratorChoice, Rates, ScenarioConfig, SweepSpec};
use crate::basis::BasisState;
use crate::error::{Error, Result};
use crate::hamiltonian::Frequencies;

const KEYS: &[(&str, &[&str])] = &[
    ("scenario", &["id", "base", "frame", "n_sites"]),
    ("couplings", &["g", "J", "delta", "lambda", "enabled"]),
    ("frequencies", &["bus", "qubit", "nvce"]),
    (
        "dissipation",
        &[
            "uniform",
            "bus_decay",
            "qubit_dephasing",
            "nvce_dephasing",
            "qubit_relaxation",
            "nvce_relaxation",
        ],
    ),
    ("transfer", &["alpha", "beta", "initial", "target"]),
    ("integrator", &["method", "dt", "abs_tol", "rel_tol"]),
    ("output", &["t_end", "samples", "track", "fidelity", "path"]),
    ("sweep", &["axis", "values"]),
];

struct Entries {
    map: HashMap<String, (String, usize)>,
}

impl Entries {
    fn parse(text: &str) -> Result<Self> {
        let mut map = HashMap::new();
        let mut section: Option<&str> = None;
        for (i, raw) in text.lines().enumerate() {
            let line_no = i + 1;
            let line = raw.split(['#', ';']).next().unwrap_or("").trim();
            if line.is_empty() {
                continue;
            }
            if let Some(name) = line.strip_prefix('[') {
                let name = name
                    .strip_suffix(']')
                    .ok_or_else(|| {
                        Error::config(format!("line {line_no}"), "unterminated section header")
                    })?
                    .trim();
                let known = KEYS.iter().find(|(s, _)| *s == name).ok_or_else(|| {
                    Error::config(
                        format!("[{name}]"),
                        format!("unknown section on line {line_no}"),
                    )
                })?;
                section = Some(known.0);
                continue;
            }
            let (key, value) = line.split_once('=').ok_or_else(|| {
                Error::config(format!("line {line_no}"), "expected `key = value`")
            })?;
            let key = key.trim();
            let section = section.ok_or_else(|| {
                Error::config(key, format!("line {line_no} is outside any section"))
            })?;
            let field = format!("{section}.{key}");
            let allowed = KEYS
                .iter()
                .find(|(s, _)| *s == section)
                .map(|(_, k)| *k)
                .unwrap_or_default();
            if !allowed.contains(&key) {
                return Err(Error::config(
                    field,
                    format!("unknown key on line {line_no}"),
                ));
            }
            if map
                .insert(field.clone(), (value.trim().to_string(), line_no))
                .is_some()
            {
                return Err(Error::config(
                    field,
                    format!("given twice (again on line {line_no})"),
                ));
            }
        }
        Ok(Entries { map })
    }

    fn get(&self, field: &str) -> Option<&str> {
        self.map.get(field).map(|(v, _)| v.as_str())
    }

    fn has(&self, field: &str) -> bool {
        self.map.contains_key(field)
    }

    fn parsed<T: std::str::FromStr>(&self, field: &str) -> Result<Option<T>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(field)
            .map(|v| {
                v.parse::<T>()
                    .map_err(|e| Error::config(field, format!("cannot parse `{v}`: {e}")))
            })
            .transpose()
    }

    fn list<T: std::str::FromStr>(&self, field: &str) -> Result<Option<Vec<T>>>
    where
        T::Err: std::fmt::Display,
    {
        self.get(field)
            .map(|v| {
                if v.is_empty() {
                    return Ok(Vec::new());
                }
                v.split(',')
                    .map(|item| {
                        let item = item.trim();
                        item.parse::<T>().map_err(|e| {
                            Error::config(field, format!("cannot parse `{item}`: {e}"))
                        })
                    })
                    .collect()
            })
            .transpose()
    }
}

fn parse_bool(field: &str, v: &str) -> Result<bool> {
    match v.to_ascii_lowercase().as_str() {
        "true" | "yes" | "on" | "1" => Ok(true),
        "false" | "no" | "off" | "0" => Ok(false),
        _ => Err(Error::config(
            field,
            format!("expected true or false, got `{v}`"),
        )),
    }
}

/// Parses a scenario file. Relative output paths are kept as written.
pub fn parse_config(text: &str) -> Result<ScenarioConfig> {
    let e = Entries::parse(text)?;
    let mut cfg = match e.get("scenario.base") {
        Some(base) => builtin(base).map_err(|err| match err {
            Error::Config { message, .. } => Error::config("scenario.base", message),
            other => other,
        })?,
        None => {
            if !e.has("scenario.id") {
                return Err(Error::config(
                    "scenario.id",
                    "required unless `base` is given",
                ));
            }
            ScenarioConfig::new("")
        }
    };
    if let Some(id) = e.get("scenario.id") {
        if id.is_empty() || id.contains(['/', '\\']) {
            return Err(Error::config(
                "scenario.id",
                format!("`{id}` is not a usable name"),
            ));
        }
        cfg.id = id.to_string();
    }
    if let Some(frame) = e.get("scenario.frame") {
        cfg.frame = frame
            .parse::<FrameChoice>()
            .map_err(|m| Error::config("scenario.frame", m))?;
        if cfg.frame != FrameChoice::Effective {
            cfg.lambda = None;
        }
    }
    if let Some(n) = e.parsed::<usize>("scenario.n_sites")? {
        cfg.n_sites = n;
    }

    if let Some(g) = e.list("couplings.g")? {
        cfg.g = g;
    }
    if let Some(j) = e.list("couplings.J")? {
        cfg.j = j;
    }
    let delta = e.list("couplings.delta")?;
    let lambda = e.list("couplings.lambda")?;
    // one of the two replaces whatever the base used
    if delta.is_some() || lambda.is_some() {
        cfg.delta = delta;
        cfg.lambda = lambda;
    }
    if let Some(sites) = e.list::<usize>("couplings.enabled")? {
        cfg.enabled = Some(sites);
    }

    let freq_keys = ["frequencies.bus", "frequencies.qubit", "frequencies.nvce"];
    if freq_keys.iter().any(|k| e.has(k)) {
        let missing = freq_keys.iter().find(|k| !e.has(k));
        if let Some(k) = missing {
            return Err(Error::config(
                *k,
                "bus, qubit and nvce frequencies must be given together",
            ));
        }
        cfg.frequencies = Some(Frequencies {
            bus: e.parsed("frequencies.bus")?.expect("present"),
            qubit: e.list("frequencies.qubit")?.expect("present"),
            nvce: e.list("frequencies.nvce")?.expect("present"),
        });
    }

    if let Some(rate) = e.parsed::<f64>("dissipation.uniform")? {
        cfg.rates = Rates::uniform(cfg.n_sites, rate, cfg.frame != FrameChoice::Effective);
    }
    if let Some(k) = e.parsed("dissipation.bus_decay")? {
        cfg.rates.bus_decay = k;
    }
    for (key, slot) in [
        (
            "dissipation.qubit_dephasing",
            &mut cfg.rates.qubit_dephasing,
        ),
        ("dissipation.nvce_dephasing", &mut cfg.rates.nvce_dephasing),
        (
            "dissipation.qubit_relaxation",
            &mut cfg.rates.qubit_relaxation,
        ),
        (
            "dissipation.nvce_relaxation",
            &mut cfg.rates.nvce_relaxation,
        ),
    ] {
        if let Some(v) = e.list(key)? {
            *slot = v;
        }
    }

    if let Some(a) = e.parsed("transfer.alpha")? {
        cfg.alpha = a;
    }
    if let Some(b) = e.parsed("transfer.beta")? {
        cfg.beta = b;
    }
    let initial = e.parsed::<BasisState>("transfer.initial")?;
    let target = e.parsed::<BasisState>("transfer.target")?;
    if let Some(s) = initial {
        cfg.initial = s;
    }
    if let Some(s) = target {
        cfg.target = s;
    }
    if initial.is_some() || target.is_some() {
        cfg.track = vec![cfg.initial, cfg.target];
    }

    if let Some(method) = e.get("integrator.method") {
        cfg.integrator = match method.to_ascii_lowercase().as_str() {
            "rk4" => IntegratorChoice::Rk4 { dt: None },
            "rk45" | "dopri5" => IntegratorChoice::Rk45 {
                abs_tol: 1e-10,
                rel_tol: 1e-10,
            },
            _ => {
                return Err(Error::config(
                    "integrator.method",
                    format!("unknown method `{method}` (rk4 or rk45)"),
                ));
            }
        };
    }
    match &mut cfg.integrator {
        IntegratorChoice::Rk4 { dt } => {
            if let Some(v) = e.parsed("integrator.dt")? {
                *dt = Some(v);
            }
            for k in ["integrator.abs_tol", "integrator.rel_tol"] {
                if e.has(k) {
                    return Err(Error::config(k, "only used with method = rk45"));
                }
            }
        }
        IntegratorChoice::Rk45 { abs_tol, rel_tol } => {
            if e.has("integrator.dt") {
                return Err(Error::config(
                    "integrator.dt",
                    "only used with method = rk4",
                ));
            }
            if let Some(v) = e.parsed("integrator.abs_tol")? {
                *abs_tol = v;
            }
            if let Some(v) = e.parsed("integrator.rel_tol")? {
                *rel_tol = v;
            }
        }
    }

    if let Some(t) = e.parsed("output.t_end")? {
        cfg.t_end = t;
    }
    if let Some(n) = e.parsed("output.samples")? {
        cfg.samples = Some(n);
    }
    if let Some(track) = e.get("output.track") {
        cfg.track = if track.eq_ignore_ascii_case("all") {
            let bus = cfg.frame != FrameChoice::Effective;
            crate::basis::make_basis(cfg.n_sites.max(1), bus)?
                .states()
                .filter(|s| *s != BasisState::Ground)
                .collect()
        } else {
            e.list("output.track")?.expect("present")
        };
    }
    if let Some(f) = e.get("output.fidelity") {
        cfg.fidelity = parse_bool("output.fidelity", f)?;
    }
    if let Some(p) = e.get("output.path") {
        cfg.output = Some(PathBuf::from(p));
    }

    match (e.get("sweep.axis"), e.has("sweep.values")) {
        (Some(axis), _) => {
            cfg.sweep = Some(SweepSpec {
                axis: axis.parse()?,
                values: e.list("sweep.values")?.unwrap_or_default(),
            });
        }
        (None, true) => {
            return Err(Error::config(
                "sweep.axis",
                "sweep values given without an axis",
            ))
        }
        (None, false) => {}
    }

    cfg.validate()?;
    Ok(cfg)
}

/// Reads and parses a scenario file. A relative `output.path` is resolved
/// against the file's directory.
pub fn load_config(path: &Path) -> Result<ScenarioConfig> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    let mut cfg = parse_config(&text)?;
    if let (Some(out), Some(dir)) = (&cfg.output, path.parent()) {
        if out.is_relative() {
            cfg.output = Some(dir.join(out));
        }
    }
    Ok(cfg)
}

#[cfg(test)]
mod tests {
    use super::super::SweepAxis;
    use super::*;
    use crate::basis::NodeLabel;

    fn field(r: Result<ScenarioConfig>) -> String {
        match r {
            Err(Error::Config { field, .. }) => field,
            other => panic!("expected config error, got {other:?}"),
        }
    }

    #[test]
    fn full_custom_file() {
        let cfg = parse_config(
            "# detuned run\n\
             [scenario]\n\
             id = det\n\
             frame = detuned\n\
             n_sites = 2\n\
             [couplings]\n\
             g = 1, 1 ; inline comment\n\
             J = 0.05, 0.05\n\
             delta = 20, 20\n\
             [dissipation]\n\
             uniform = 0.001\n\
             [transfer]\n\
             alpha = 0.6\n\
             beta = 0.8\n\
             [integrator]\n\
             method = rk45\n\
             abs_tol = 1e-9\n\
             [output]\n\
             t_end = 10\n\
             samples = 101\n\
             track = all\n\
             fidelity = yes\n\
             path = out/det.csv\n",
        )
        .unwrap();
        assert_eq!(cfg.id, "det");
        assert_eq!(cfg.frame, FrameChoice::Detuned);
        assert_eq!(cfg.delta, Some(vec![20.0, 20.0]));
        assert_eq!(cfg.rates.bus_decay, 0.001);
        assert_eq!(
            cfg.integrator,
            IntegratorChoice::Rk45 {
                abs_tol: 1e-9,
                rel_tol: 1e-10
            }
        );
        assert_eq!(cfg.track.len(), 5);
        assert!(cfg.track.contains(&NodeLabel::Bus.into()));
        assert!(cfg.fidelity);
        assert_eq!(cfg.samples(), 101);
        assert_eq!(cfg.output, Some(PathBuf::from("out/det.csv")));
    }

    #[test]
    fn base_scenario_with_overrides() {
        let cfg =
            parse_config("[scenario]\nbase = disp-bal-eq\n[couplings]\nlambda = 2, 2\n").unwrap();
        assert_eq!(cfg.id, "disp-bal-eq");
        assert_eq!(cfg.lambda, Some(vec![2.0, 2.0]));
        let cfg =
            parse_config("[scenario]\nbase = disp-bal-eq\n[couplings]\ng = 1, 1\ndelta = 5, 5\n")
                .unwrap();
        assert_eq!(cfg.lambda, None);
        let cfg =
            parse_config("[scenario]\nbase = chain-select\n[transfer]\ntarget = NE3\n").unwrap();
        assert_eq!(
            cfg.track,
            vec![NodeLabel::Nvce(2).into(), NodeLabel::Nvce(3).into()]
        );
    }

    #[test]
    fn sweep_section() {
        let cfg = parse_config(
            "[scenario]\nbase = res-bal-eq\n[sweep]\naxis = J_over_g\nvalues = 0.1, 1, 10\n",
        )
        .unwrap();
        let s = cfg.sweep.unwrap();
        assert_eq!(s.axis, SweepAxis::JOverG);
        assert_eq!(s.values, vec![0.1, 1.0, 10.0]);
        let cfg =
            parse_config("[scenario]\nbase = res-bal-eq\n[sweep]\naxis = g\nvalues =\n").unwrap();
        assert!(cfg.sweep.unwrap().values.is_empty());
        assert_eq!(
            field(parse_config(
                "[scenario]\nbase = res-bal-eq\n[sweep]\naxis = mass\n"
            )),
            "sweep.axis"
        );
        assert_eq!(
            field(parse_config(
                "[scenario]\nbase = res-bal-eq\n[sweep]\nvalues = 1\n"
            )),
            "sweep.axis"
        );
    }

    #[test]
    fn errors_name_fields() {
        assert_eq!(
            field(parse_config("[scenario]\nframe = resonant\n")),
            "scenario.id"
        );
        assert_eq!(
            field(parse_config("[scenario]\nbase = nope\n")),
            "scenario.base"
        );
        assert_eq!(
            field(parse_config("[scenario]\nid = x\ncolour = red\n")),
            "scenario.colour"
        );
        assert_eq!(field(parse_config("[physics]\n")), "[physics]");
        assert_eq!(field(parse_config("id = x\n")), "id");
        assert_eq!(
            field(parse_config("[scenario]\nid = x\nid = y\n")),
            "scenario.id"
        );
        assert_eq!(
            field(parse_config(
                "[scenario]\nid = x\n[couplings]\ng = 1, one\n"
            )),
            "couplings.g"
        );
        assert_eq!(
            field(parse_config("[scenario]\nid = x\n[couplings]\ng = 1\n")),
            "couplings.g"
        );
        assert_eq!(
            field(parse_config("[scenario]\nid = x\nframe = warped\n")),
            "scenario.frame"
        );
        assert_eq!(
            field(parse_config("[scenario]\nid = x\n[output]\nsamples = 1\n")),
            "output.samples"
        );
        assert_eq!(
            field(parse_config("[scenario]\nid = x\n[output]\nt_end = -3\n")),
            "output.t_end"
        );
        assert_eq!(
            field(parse_config(
                "[scenario]\nid = x\n[output]\nfidelity = maybe\n"
            )),
            "output.fidelity"
        );
        assert_eq!(
            field(parse_config(
                "[scenario]\nid = x\n[transfer]\ninitial = NE9\n"
            )),
            "transfer.initial"
        );
        assert_eq!(
            field(parse_config(
                "[scenario]\nid = x\n[integrator]\nabs_tol = 1e-6\n"
            )),
            "integrator.abs_tol"
        );
        assert_eq!(field(parse_config("[scenario]\nid = a/b\n")), "scenario.id");
        assert_eq!(field(parse_config("[scenario\n")), "line 1");
        assert_eq!(
            field(parse_config("[scenario]\nid = x\n[frequencies]\nbus = 1\n")),
            "frequencies.qubit"
        );
    }

    #[test]
    fn lab_frame_file() {
        let cfg = parse_config(
            "[scenario]\nid = lab\nframe = lab\n[frequencies]\nbus = 50\nqubit = 50, 50\nnvce = 50, 50\n[output]\nt_end = 2\n",
        )
        .unwrap();
        assert_eq!(cfg.frequencies.as_ref().unwrap().qubit, vec![50.0, 50.0]);
        cfg.hamiltonian().unwrap();
    }

    #[test]
    fn load_resolves_relative_paths() {
        let dir = tempfile::tempdir().unwrap();
        let file = dir.path().join("run.cfg");
        std::fs::write(
            &file,
            "[scenario]\nbase = res-bal-eq\n[output]\npath = a.csv\n",
        )
        .unwrap();
        assert_eq!(
            load_config(&file).unwrap().output,
            Some(dir.path().join("a.csv"))
        );
        assert!(matches!(
            load_config(&dir.path().join("missing.cfg")),
            Err(Error::Io { .. })
        ));
    }
}
