//! Propagation and observables checked against brute-force sums and closed forms.

use polariton_core::c64;
use polariton_core::constants::HBAR;
use polariton_core::PhysicalConstants;
use polariton_core::dynamics::{
    evolve, migration_interval, migration_probability, prepare_wavepacket, rmsd, simulate,
    Propagator, SimulationOptions, StateVector, WavepacketSpec,
};
use polariton_core::model::{CavityGeometry, MatterSpec, Realization, WireModel};
use polariton_core::spectrum::{diagonalize, Spectrum};
use polariton_core::theory::early_growth_exact;

fn small_model(n_sites: usize, m_max: u32, energy_sd: f64, spacing_sd: f64, rabi: f64) -> WireModel {
    WireModel {
        geometry: CavityGeometry {
            lx: n_sites as f64 * 10.0,
            ly: 200.0,
            lz: 400.0,
            epsilon: 3.0,
            m_max,
        },
        matter: MatterSpec {
            n_sites,
            spacing: 10.0,
            spacing_sd,
            energy: 2.0,
            energy_sd,
            rabi,
        },
    }
}

struct Setup {
    model: WireModel,
    real: Realization,
    spec: Spectrum,
    wp: WavepacketSpec,
    psi0: StateVector,
}

fn setup(model: WireModel, seed: u64, sigma_x: f64, qbar0: f64) -> Setup {
    let real = model.sample(seed).unwrap();
    let h = model.hamiltonian(&real).unwrap();
    let spec = diagonalize(&h).unwrap();
    let wp = WavepacketSpec::centred(model.geometry.lx, sigma_x, qbar0);
    let psi0 = prepare_wavepacket(&wp, &real, h.basis()).unwrap();
    Setup { model, real, spec, wp, psi0 }
}

/// ψ(t) by an explicit double loop over eigenpairs, without dense products.
fn brute_force_state(spec: &Spectrum, psi0: &StateVector, t: f64) -> Vec<c64> {
    let v = spec.vectors();
    let dim = spec.dim();
    let mut out = vec![c64::new(0.0, 0.0); dim];
    for a in 0..dim {
        let mut overlap = c64::new(0.0, 0.0);
        for i in 0..dim {
            overlap += v[(i, a)].conj() * psi0.amplitudes()[i];
        }
        let phase = c64::new(0.0, -spec.omega()[a] * t).exp();
        for i in 0..dim {
            out[i] += v[(i, a)] * overlap * phase;
        }
    }
    out
}

#[test]
fn time_zero_returns_initial_state() {
    let s = setup(small_model(120, 10, 0.02, 1.0, 0.1), 3, 60.0, 0.0);
    let states = evolve(&s.psi0, &s.spec, &[0.0, 10.0]).unwrap();
    assert_eq!(states[0], s.psi0);
}

#[test]
fn norm_energy_and_reversibility() {
    let s = setup(small_model(200, 20, 0.05, 1.0, 0.1), 9, 80.0, 0.003);
    let h = s.model.hamiltonian(&s.real).unwrap();
    let e0 = h.expectation(s.psi0.amplitudes());
    let prop = Propagator::new(&s.spec, s.psi0.clone()).unwrap();
    let times: Vec<f64> = (0..=40).map(|k| k as f64 * 25.0).collect();
    for psi in prop.states(&times) {
        assert!((psi.norm() - 1.0).abs() < 1e-12);
        assert!((h.expectation(psi.amplitudes()) - e0).abs() < 1e-10);
        assert!((psi.matter_probability() + psi.photon_probability() - 1.0).abs() < 1e-10);
    }
    let forward = prop.state_at(700.0);
    let back = Propagator::new(&s.spec, forward).unwrap().state_at(-700.0);
    let worst = back
        .amplitudes()
        .iter()
        .zip(s.psi0.amplitudes())
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-10, "{worst:e}");
}

#[test]
fn dense_propagation_matches_brute_force_sum() {
    let s = setup(small_model(200, 40, 0.0, 0.0, 0.1), 0, 60.0, 0.0);
    let fast = Propagator::new(&s.spec, s.psi0.clone()).unwrap().state_at(100.0);
    let slow = brute_force_state(&s.spec, &s.psi0, 100.0);
    let worst = fast
        .amplitudes()
        .iter()
        .zip(&slow)
        .map(|(a, b)| (a - b).norm())
        .fold(0.0, f64::max);
    assert!(worst < 1e-12, "{worst:e}");

    // χ from an explicit sum over the window.
    let interval = migration_interval(&s.real, &s.wp);
    let p_m: f64 = slow[..200].iter().map(|a| a.norm_sqr()).sum();
    let inside: f64 = slow[interval].iter().map(|a| a.norm_sqr()).sum();
    let chi_ref = 1.0 - inside / p_m;
    let chi = migration_probability(&fast, &s.real, &s.wp).unwrap();
    assert!((chi - chi_ref).abs() < 1e-12);
}

#[test]
fn single_dipole_rabi_oscillation() {
    let mut model = small_model(1, 0, 0.0, 0.0, 0.1);
    model.matter.energy = model.geometry.cutoff_energy();
    let real = model.sample(0).unwrap();
    let h = model.hamiltonian(&real).unwrap();
    let spec = diagonalize(&h).unwrap();
    let psi0 = StateVector::new(vec![c64::new(1.0, 0.0), c64::new(0.0, 0.0)], 1).unwrap();
    let times: Vec<f64> = (0..=200).map(|k| k as f64 * 0.5).collect();
    let states = evolve(&psi0, &spec, &times).unwrap();
    for (t, psi) in times.iter().zip(&states) {
        let expected = (0.1 * t / (2.0 * HBAR)).cos().powi(2);
        assert!((psi.matter_probability() - expected).abs() < 1e-12);
    }
    // Period h/Ω_R.
    assert!((PhysicalConstants::CODATA.planck() / 0.1 - 41.36).abs() < 0.01);
}

#[test]
fn uncoupled_wire_keeps_all_weight_on_sites() {
    let s = setup(small_model(150, 10, 0.03, 1.0, 0.0), 2, 50.0, 0.0);
    for psi in evolve(&s.psi0, &s.spec, &[10.0, 100.0, 1000.0]).unwrap() {
        assert!((psi.matter_probability() - 1.0).abs() < 1e-12);
    }
}

#[test]
fn initial_observables() {
    let s = setup(WireModel::desk_scale(2.0, 0.0, 0.1), 1, 120.0, 0.0);
    let r0 = rmsd(&s.psi0, &s.real, s.wp.x0).unwrap();
    assert!((r0 / 120.0 - 1.0).abs() < 0.02, "{r0}");
    assert!(migration_probability(&s.psi0, &s.real, &s.wp).unwrap() <= 0.01);
}

#[test]
fn early_growth_matches_small_time_difference() {
    let s = setup(small_model(200, 40, 0.0, 0.0, 0.1), 0, 60.0, 0.0);
    let interval = migration_interval(&s.real, &s.wp);
    let g = early_growth_exact(&s.spec, &s.psi0, interval.clone()).unwrap();
    let prop = Propagator::new(&s.spec, s.psi0.clone()).unwrap();
    let chi = |t: f64| migration_probability(&prop.state_at(t), &s.real, &s.wp).unwrap();
    let dt = 0.5;
    let fd = (chi(dt) - chi(0.0)) / (dt * dt);
    println!("G exact {g:e}, finite difference {fd:e}");
    assert!(((fd - g) / g).abs() < 0.05);

    // Pair-sum form of the same coefficient, including the P_M renormalization.
    let v = s.spec.vectors();
    let w = s.spec.omega();
    let dim = s.spec.dim();
    let a: Vec<c64> = (0..dim)
        .map(|k| (0..dim).map(|i| v[(i, k)].conj() * s.psi0.amplitudes()[i]).sum())
        .collect();
    let coef = |n: usize| -> f64 {
        let mut acc = 0.0;
        for x in 0..dim {
            for y in 0..dim {
                let d = w[x] - w[y];
                acc += (v[(n, x)] * v[(n, y)].conj() * a[x] * a[y].conj()).re * d * d;
            }
        }
        -0.5 * acc
    };
    let s2: f64 = interval.clone().map(coef).sum();
    let m2: f64 = (0..200).map(coef).sum();
    let s0: f64 = s.psi0.dipoles()[interval].iter().map(|c| c.norm_sqr()).sum();
    let pair = -(s2 - s0 * m2);
    assert!(((pair - g) / g).abs() < 1e-6, "{pair:e} vs {g:e}");
}

#[test]
fn simulate_records_consistent_series() {
    let s = setup(small_model(300, 30, 0.05, 1.0, 0.1), 5, 60.0, 0.0);
    let h = s.model.hamiltonian(&s.real).unwrap();
    let opts = SimulationOptions {
        times: SimulationOptions::uniform_times(300.0, 5.0).unwrap(),
        n_edge: 10,
        bin_width: 100.0,
        span: s.model.geometry.lx,
        profile_times: vec![0.0, 150.0],
    };
    let ts = simulate(&s.spec, &s.real, &s.psi0, &s.wp, &opts, Some(&h)).unwrap();
    assert_eq!(ts.len(), 61);
    assert!(ts.max_norm_error < 1e-12);
    assert!(ts.max_energy_drift < 1e-10);
    assert_eq!(ts.profiles.len(), 2);
    let (t0, prof0) = &ts.profiles[0];
    assert_eq!(*t0, 0.0);
    let peak = prof0
        .probability
        .iter()
        .enumerate()
        .max_by(|a, b| a.1.total_cmp(b.1))
        .unwrap()
        .0;
    assert!((prof0.centres[peak] - s.wp.x0).abs() <= 50.0);
    let (_, prof) = &ts.profiles[1];
    let k = ts.nearest(150.0).unwrap();
    assert!((prof.probability.iter().sum::<f64>() - ts.p_m[k]).abs() < 1e-12);
    for k in 0..ts.len() {
        for p in [ts.p_m[k], ts.chi[k], ts.p_boundary[k]] {
            assert!((0.0..=1.0).contains(&p));
        }
    }
    assert!(ts.p_boundary[0] < 1e-12);
}
