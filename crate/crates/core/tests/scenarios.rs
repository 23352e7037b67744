use std::f64::consts::PI;

use nvce_transfer::analytic::resonant_coefficients;
use nvce_transfer::basis::{pure_state, NodeLabel};
use nvce_transfer::dynamics::{evolve_schrodinger, IntegratorConfig};
use nvce_transfer::hamiltonian::{CouplingGraph, HamiltonianSpec};
use nvce_transfer::observables::{physical_time, populations, transfer_time};
use nvce_transfer::scenario::{
    builtin, load_config, parse_config, run_scenario, run_sweep, FrameChoice, ResultTable,
    ScenarioConfig, SweepAxis,
};
use nvce_transfer::Error;

/// Value of `column` at `jt`, from the quadratic through the three nearest samples.
fn at(table: &ResultTable, column: &str, jt: f64) -> f64 {
    let x = table.column("Jt").unwrap();
    let y = table.column(column).unwrap();
    let k = x.partition_point(|v| *v < jt).clamp(1, x.len() - 2);
    let (x0, x1, x2) = (x[k - 1], x[k], x[k + 1]);
    let l0 = (jt - x1) * (jt - x2) / ((x0 - x1) * (x0 - x2));
    let l1 = (jt - x0) * (jt - x2) / ((x1 - x0) * (x1 - x2));
    let l2 = (jt - x0) * (jt - x1) / ((x2 - x0) * (x2 - x1));
    l0 * y[k - 1] + l1 * y[k] + l2 * y[k + 1]
}

#[test]
fn strong_inductance_transfers_at_pi() {
    let table = run_scenario(&builtin("res-bal-ind").unwrap()).unwrap();
    assert_eq!(table.headers(), ["Jt", "P_NE1", "P_NE2"]);
    // the fast bus beat (W ≈ 14) limits how well a 0.05 grid pins the value at π
    let p = at(&table, "P_NE2", PI);
    assert!(p >= 0.999, "|C5|² at π = {p}");
    let exact = resonant_coefficients(PI / 1.0, 10.0, 1.0)
        .unwrap()
        .c5()
        .norm_sqr();
    assert!((p - exact).abs() < 1e-4, "{p} vs {exact}");
}

#[test]
fn resonant_fidelity_reaches_one_at_pi() {
    let table = run_scenario(&builtin("fid-res").unwrap()).unwrap();
    let f = at(&table, "F", PI);
    let c5 = resonant_coefficients(PI, 10.0, 1.0)
        .unwrap()
        .c5()
        .norm_sqr();
    assert!((f - (1.0 + 2.0 * c5) / 3.0).abs() < 1e-4, "{f} vs {c5}");
    assert!(f >= 0.999);
    assert!((table.column("F").unwrap()[0] - 1.0 / 3.0).abs() < 1e-15);
}

#[test]
fn chain_selection_equals_two_site_run() {
    let chain = run_scenario(&builtin("chain-select").unwrap()).unwrap();
    let pair = run_scenario(&builtin("res-bal-eq").unwrap()).unwrap();
    assert_eq!(chain.headers(), ["Jt", "P_NE2", "P_NE4"]);
    assert_eq!(chain.len(), pair.len());
    for (a, b) in chain.rows().iter().zip(pair.rows()) {
        assert_eq!(a[0], b[0]);
        assert!((a[1] - b[1]).abs() <= 1e-9 && (a[2] - b[2]).abs() <= 1e-9);
    }
}

#[test]
fn dissipation_is_negligible_at_small_jt() {
    for (lossy, lossless) in [
        ("fid-res-dissip", "fid-res"),
        ("fid-disp-dissip", "fid-disp"),
    ] {
        let a = run_scenario(&builtin(lossy).unwrap()).unwrap();
        let b = run_scenario(&builtin(lossless).unwrap()).unwrap();
        let mut worst: f64 = 0.0;
        for (ra, rb) in a.rows().iter().zip(b.rows()) {
            if ra[0] <= PI {
                worst = worst.max((ra[3] - rb[3]).abs() / rb[3]);
            }
        }
        assert!(worst < 0.01, "{lossy}: relative deviation {worst}");
        // and the loss is visible by the end of the window
        assert!(a.rows().last().unwrap()[3] < b.rows().last().unwrap()[3] + 1e-12 || worst > 0.0);
    }
}

#[test]
fn coupling_ratio_sweep_reproduces_the_balanced_panels() {
    let base = builtin("res-bal-eq").unwrap();
    let sweep = run_sweep(&base, SweepAxis::JOverG, &[0.1, 1.0, 10.0], Some(2)).unwrap();
    let panels = ["res-bal-ind", "res-bal-eq", "res-bal-mag"];
    for (table, id) in sweep.tables().zip(panels) {
        let reference = run_scenario(&builtin(id).unwrap()).unwrap();
        // the strong-magnetic panel runs longer; compare the shared window
        assert_eq!(table.rows(), &reference.rows()[..table.len()], "{id}");
    }
    let summary = sweep.summary_csv(base.target);
    let lines: Vec<&str> = summary.lines().collect();
    assert_eq!(lines[0], "J_over_g,peak_P_NE2,transfer_Jt");
    assert!(lines[1].starts_with("0.1,0.99"));
}

#[test]
fn detuning_sweep_suppresses_the_bus() {
    let mut base = ScenarioConfig::new("dispersive-grid");
    base.frame = FrameChoice::Detuned;
    base.g = vec![1.0; 2];
    base.j = vec![0.05; 2];
    base.delta = Some(vec![20.0; 2]);
    base.track = vec![
        NodeLabel::Nvce(1).into(),
        NodeLabel::Bus.into(),
        NodeLabel::Nvce(2).into(),
    ];
    base.t_end = 10.0;
    base.samples = Some(201);
    let sweep = run_sweep(&base, SweepAxis::DeltaOverG, &[10.0, 20.0, 50.0], None).unwrap();
    let peaks: Vec<f64> = sweep
        .tables()
        .map(|t| t.column("P_BUS").unwrap().into_iter().fold(0.0, f64::max))
        .collect();
    assert!(peaks[0] > peaks[1] && peaks[1] > peaks[2], "{peaks:?}");
    for (p, d) in peaks.iter().zip([10.0, 20.0, 50.0]) {
        assert!(*p <= 2.0 / (d * d) * 1.01, "bus peak {p} at δ/g = {d}");
    }
}

#[test]
fn empty_sweep_gives_empty_output() {
    let sweep = run_sweep(&builtin("res-bal-eq").unwrap(), SweepAxis::G, &[], None).unwrap();
    assert_eq!(sweep.tables().count(), 0);
}

#[test]
fn transfer_time_in_physical_units() {
    // J = 0.1 g; with J = 2π·70 MHz the 0.999 crossing sits just before Jt = π
    let spec = HamiltonianSpec::resonant(CouplingGraph::uniform(2, 10.0, 1.0).unwrap()).unwrap();
    let psi0 = pure_state(&spec.basis(), NodeLabel::Nvce(1).into()).unwrap();
    let traj = evolve_schrodinger(&spec, &psi0, &IntegratorConfig::rk4(0.002, 4.0, 10)).unwrap();
    let jt = transfer_time(&populations(&traj), NodeLabel::Nvce(2).into(), 0.999)
        .unwrap()
        .unwrap();
    assert!((jt - 3.0972).abs() < 1e-3, "Jt = {jt}");
    let ns = physical_time(jt, 70e6).unwrap() * 1e9;
    assert!((ns - 7.04).abs() < 0.01, "{ns} ns");
    assert!(transfer_time(&populations(&traj), NodeLabel::Nvce(2).into(), 1.1).is_err());
}

#[test]
fn config_files_round_trip() {
    let dir = tempfile::tempdir().unwrap();
    let file = dir.path().join("eff.cfg");
    std::fs::write(
        &file,
        "[scenario]\nid = eff\nframe = effective\n\n[couplings]\ng = 1, 1\nJ = 1, 1\ndelta = 1, 1\n\n\
         [output]\nt_end = 5\nsamples = 51\nfidelity = true\npath = eff.csv\n\n[transfer]\nalpha = 0.6\nbeta = 0.8\n",
    )
    .unwrap();
    let cfg = load_config(&file).unwrap();
    let table = run_scenario(&cfg).unwrap();
    assert_eq!(table.headers(), ["Jt", "P_NE1", "P_NE2", "F"]);
    assert_eq!(table.len(), 51);
    // λ = g²/δ = 1 = J: same dynamics as the built-in equilibrium dispersive run
    let reference = run_scenario(&builtin("disp-bal-eq").unwrap()).unwrap();
    for (row, r) in table.rows().iter().zip(reference.rows().iter().step_by(2)) {
        assert!((row[2] - r[2]).abs() < 1e-6);
    }
    table.write_csv(cfg.output.as_ref().unwrap()).unwrap();
    assert!(dir.path().join("eff.csv").exists());
}

#[test]
fn invalid_configurations_name_their_field() {
    for (text, field) in [
        (
            "[scenario]\nbase = res-bal-eq\n[couplings]\nJ = 1, 1, 1\n",
            "couplings.J",
        ),
        (
            "[scenario]\nbase = res-bal-eq\n[sweep]\naxis = temperature\n",
            "sweep.axis",
        ),
        (
            "[scenario]\nbase = fid-disp\n[dissipation]\nbus_decay = 0.1\n",
            "dissipation.bus_decay",
        ),
        (
            "[scenario]\nbase = res-bal-eq\n[transfer]\nalpha = 2\n",
            "transfer.beta",
        ),
    ] {
        match parse_config(text) {
            Err(Error::Config { field: f, .. }) => assert_eq!(f, field),
            other => panic!("{text}: {other:?}"),
        }
    }
}
