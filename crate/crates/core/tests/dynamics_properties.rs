use approx::assert_abs_diff_eq;
use nvce_transfer::basis::{density_from_state, pure_state, BasisState, NodeLabel};
use nvce_transfer::dynamics::{
    evolve_lindblad, evolve_schrodinger, IntegratorConfig, LindbladModel,
};
use nvce_transfer::hamiltonian::{CouplingGraph, HamiltonianSpec};
use nvce_transfer::observables::{energy, populations};
use proptest::prelude::*;

fn graph(g: &[f64], j: &[f64]) -> CouplingGraph {
    CouplingGraph::new(g.to_vec(), j.to_vec()).unwrap()
}

fn node(n: usize, pick: usize) -> BasisState {
    let site = pick % n + 1;
    match pick % 3 {
        0 => NodeLabel::Nvce(site).into(),
        1 => NodeLabel::Qubit(site).into(),
        _ => NodeLabel::Bus.into(),
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(24))]

    #[test]
    fn unitary_runs_conserve_norm_and_energy(
        n in 1usize..=3,
        g in prop::collection::vec(0.1f64..3.0, 3),
        j in prop::collection::vec(0.1f64..3.0, 3),
        pick in 0usize..9,
    ) {
        let spec = HamiltonianSpec::resonant(graph(&g[..n], &j[..n])).unwrap();
        let psi0 = pure_state(&spec.basis(), node(n, pick)).unwrap();
        let traj = evolve_schrodinger(&spec, &psi0, &IntegratorConfig::rk4(0.002, 3.0, 50)).unwrap();
        prop_assert!(traj.max_norm_drift() <= 1e-9);
        for total in populations(&traj).totals() {
            prop_assert!((total - 1.0).abs() <= 1e-9);
        }
        let e = energy(&traj).unwrap();
        for v in &e {
            prop_assert!((v - e[0]).abs() <= 1e-9, "energy drifted from {} to {}", e[0], v);
        }
    }

    #[test]
    fn lindblad_runs_stay_physical(
        g in 0.1f64..3.0,
        j in 0.1f64..3.0,
        rates in prop::collection::vec(0.0f64..0.5, 9),
        pick in 0usize..6,
    ) {
        let spec = HamiltonianSpec::resonant(CouplingGraph::uniform(2, g, j).unwrap()).unwrap();
        let model = LindbladModel::new(
            spec.clone(),
            rates[0],
            rates[1..3].to_vec(),
            rates[3..5].to_vec(),
            rates[5..7].to_vec(),
            rates[7..9].to_vec(),
        )
        .unwrap();
        let psi0 = pure_state(&spec.basis(), node(2, pick)).unwrap();
        let traj = evolve_lindblad(&model, &density_from_state(&psi0), &IntegratorConfig::rk4(0.005, 4.0, 20)).unwrap();
        prop_assert!(traj.max_trace_drift() <= 1e-8);
        prop_assert!(traj.max_hermiticity_error() <= 1e-10);
        prop_assert!(traj.min_eigenvalue() >= -1e-7);
    }
}

#[test]
fn purity_decreases_on_the_dissipative_scenarios() {
    let rate = 0.001;
    let resonant =
        HamiltonianSpec::resonant(CouplingGraph::uniform(2, 10.0, 1.0).unwrap()).unwrap();
    let effective = HamiltonianSpec::effective_from_stark(
        CouplingGraph::uniform(2, 0.0, 1.0).unwrap(),
        &[10.0, 10.0],
    )
    .unwrap();
    let models = [
        LindbladModel::uniform(resonant, rate).unwrap(),
        LindbladModel::new(
            effective,
            0.0,
            vec![rate; 2],
            vec![rate; 2],
            vec![rate; 2],
            vec![rate; 2],
        )
        .unwrap(),
    ];
    for model in models {
        let psi0 = pure_state(&model.hamiltonian().basis(), NodeLabel::Nvce(1).into()).unwrap();
        let cfg = IntegratorConfig::rk4(0.005, 30.0, 20);
        let traj = evolve_lindblad(&model, &density_from_state(&psi0), &cfg).unwrap();
        let purity: Vec<f64> = traj.states().iter().map(|r| r.purity()).collect();
        assert_abs_diff_eq!(purity[0], 1.0, epsilon = 1e-15);
        for w in purity.windows(2) {
            assert!(
                w[1] <= w[0] + 1e-12,
                "purity rose from {} to {}",
                w[0],
                w[1]
            );
        }
        assert!(*purity.last().unwrap() < 0.99);
    }
}

#[test]
fn detuned_frame_at_zero_detuning_is_the_resonant_frame() {
    let g = graph(&[0.7, 1.3], &[1.0, 0.8]);
    let resonant = HamiltonianSpec::resonant(g.clone()).unwrap();
    let detuned = HamiltonianSpec::detuned(g, vec![0.0, 0.0]).unwrap();
    let psi0 = pure_state(&resonant.basis(), NodeLabel::Nvce(1).into()).unwrap();
    let cfg = IntegratorConfig::rk4(0.01, 10.0, 10);
    let a = evolve_schrodinger(&resonant, &psi0, &cfg).unwrap();
    let b = evolve_schrodinger(&detuned, &psi0, &cfg).unwrap();
    assert_eq!(a.times(), b.times());
    assert_eq!(a.states(), b.states());
}

#[test]
fn large_detuning_keeps_the_bus_empty() {
    for ratio in [20.0, 50.0] {
        let (g, j) = (1.0, 1.0 / ratio);
        let delta = ratio * g;
        let spec =
            HamiltonianSpec::detuned(CouplingGraph::uniform(2, g, j).unwrap(), vec![delta; 2])
                .unwrap();
        let psi0 = pure_state(&spec.basis(), NodeLabel::Nvce(1).into()).unwrap();
        let t_end = 10.0 / j;
        let cfg = IntegratorConfig::uniform_rk4(spec.max_frequency(), t_end, 401).unwrap();
        let traj = evolve_schrodinger(&spec, &psi0, &cfg).unwrap();
        let bus = populations(&traj).of(NodeLabel::Bus.into()).unwrap();
        let peak = bus.iter().copied().fold(0.0, f64::max);
        assert!(
            peak <= 2.0 * (g / delta).powi(2),
            "δ = {delta}: bus peak {peak}"
        );
    }
}

#[test]
fn disabled_sites_do_not_move() {
    let g = CouplingGraph::uniform(3, 1.0, 1.0)
        .unwrap()
        .with_enabled_sites(&[1, 3])
        .unwrap();
    let spec = HamiltonianSpec::resonant(g).unwrap();
    let psi0 = pure_state(&spec.basis(), NodeLabel::Nvce(1).into()).unwrap();
    let traj = evolve_schrodinger(&spec, &psi0, &IntegratorConfig::rk4(0.01, 20.0, 10)).unwrap();
    let series = populations(&traj);
    for s in [NodeLabel::Nvce(2), NodeLabel::Qubit(2)] {
        assert!(series.of(s.into()).unwrap().iter().all(|p| *p == 0.0));
    }
    assert!(series
        .of(NodeLabel::Nvce(3).into())
        .unwrap()
        .iter()
        .any(|p| *p > 0.9));
}
