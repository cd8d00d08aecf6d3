use proptest::prelude::*;
use qcap_core::bench::{
    estimate_success, generate_mirror_circuit, measure_capability, MirrorCircuit, PauliFrame,
    ShotPlan,
};
use qcap_core::quop::{default_depth_grid, success_probability};
use qcap_core::seed::circuit_seed;
use qcap_core::{AnalysisConfig, ErrorRates, ProgramShape};
use qcap_testkit::{exact_mirror_success, LayerSpec};

fn layers_of(c: &MirrorCircuit) -> Vec<LayerSpec> {
    c.layers()
        .iter()
        .map(|l| (l.pairs.clone(), l.singles.clone()))
        .collect()
}

/// Exact probability pooled over the circuits of `plan`, weighted by shots.
fn pooled_exact(shape: ProgramShape, rates: &ErrorRates, meas: bool, plan: &ShotPlan) -> f64 {
    (0..plan.n_circuits)
        .map(|i| {
            let c = generate_mirror_circuit(
                shape.width(),
                shape.depth(),
                rates.two_qubit_density(),
                circuit_seed(plan.seed, i),
            )
            .unwrap();
            let exact = exact_mirror_success(
                c.width(),
                &layers_of(&c),
                rates.eps_1q(),
                rates.eps_2q(),
                rates.eps_meas(),
                meas,
            );
            exact * plan.shots_for(i) as f64
        })
        .sum::<f64>()
        / plan.shots as f64
}

#[test]
fn monte_carlo_matches_enumeration_on_small_circuits() {
    let plan = ShotPlan {
        shots: 20_000,
        n_circuits: 4,
        seed: 99,
    };
    for eps in [0.05, 0.1, 0.2] {
        for zeta in [0.0, 1.0] {
            for w in 1..=3u64 {
                let rates = ErrorRates::new(eps, eps, eps, zeta).unwrap();
                if rates.paired_qubits(w).is_err() {
                    continue;
                }
                for d in [2, 4] {
                    let shape = ProgramShape::new(w, d).unwrap();
                    let est = estimate_success(shape, &rates, true, &plan).unwrap();
                    let exact = pooled_exact(shape, &rates, true, &plan);
                    assert!(
                        (est.p_hat - exact).abs() <= 4.0 * est.stderr,
                        "w={w} d={d} eps={eps} zeta={zeta}: {} vs {exact}",
                        est.p_hat
                    );
                }
            }
        }
    }
}

#[test]
fn single_control_error_flips_two_bits() {
    let mut frame = PauliFrame::new(4);
    frame.flip(1);
    frame.propagate_cnot(1, 3);
    assert_eq!(frame.weight(), 2);
    assert!(frame.get(1) && frame.get(3));
}

#[test]
fn determinism_across_thread_counts() {
    let rates = ErrorRates::new(0.01, 0.02, 0.01, 1.0).unwrap();
    let cfg = AnalysisConfig {
        depth_max: 32,
        depth_grid: default_depth_grid(32),
        ..AnalysisConfig::default()
    };
    let plan = ShotPlan {
        shots: 10_000,
        n_circuits: 3,
        seed: 5,
    };
    let run = |threads| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| measure_capability(&rates, &cfg, &[2, 4, 6], &plan).unwrap())
    };
    let one = run(1);
    assert_eq!(one, run(4));
    assert_eq!(one, run(3));
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn mirror_identity_without_noise(
        w in 1u64..40, half in 1u64..20, paired in any::<bool>(), seed in any::<u64>(),
    ) {
        let zeta = if paired { 1.0 } else { 0.0 };
        let w = if paired { 2 * w } else { w };
        let c = generate_mirror_circuit(w, 2 * half, zeta, seed).unwrap();
        prop_assert!(c.is_well_formed());
        let rates = ErrorRates::new(0.0, 0.0, 0.0, zeta).unwrap();
        let plan = ShotPlan { shots: 50, n_circuits: 5, seed };
        let est = estimate_success(ProgramShape::new(w, 2 * half).unwrap(), &rates, true, &plan).unwrap();
        prop_assert_eq!(est.successes, 50);
    }

    #[test]
    fn zero_error_probability_is_a_lower_bound(
        eps in 1e-4..0.02f64, half_w in 1u64..8, half_d in 1u64..16, seed in any::<u64>(),
    ) {
        let rates = ErrorRates::new(eps, eps, eps, 1.0).unwrap();
        let (w, d) = (2 * half_w, 2 * half_d);
        let shape = ProgramShape::new(w, d).unwrap();
        let cfg = AnalysisConfig::default();
        let zero_error = success_probability(shape, &rates, &cfg).unwrap();
        let plan = ShotPlan { shots: 4000, n_circuits: 4, seed };
        let est = estimate_success(shape, &rates, true, &plan).unwrap();
        // a floor on stderr keeps the bound meaningful when p_hat hits 1
        let se = est.stderr.max(1.0 / plan.shots as f64);
        prop_assert!(est.p_hat >= zero_error - 4.0 * se);
        let expected_errors = -zero_error.ln();
        prop_assert!(est.p_hat - zero_error <= 2.0 * expected_errors.powi(2) + 4.0 * se);
    }
}

#[test]
fn measured_region_tracks_analytic_region() {
    let rates = ErrorRates::uniform(0.01).unwrap();
    let cfg = AnalysisConfig {
        depth_max: 64,
        depth_grid: default_depth_grid(64),
        ..AnalysisConfig::default()
    };
    let plan = ShotPlan {
        shots: 10_000,
        n_circuits: 10,
        seed: 1,
    };
    let run = measure_capability(&rates, &cfg, &[1, 2, 4, 8], &plan).unwrap();
    for w in [2, 4, 8] {
        let analytic = qcap_core::quop::max_reliable_depth(w, &rates, &cfg).unwrap();
        // with no pairs single-qubit flips cancel in pairs, so the measured
        // frontier sits at or above the no-error bound
        assert!(
            run.region.max_depth(w) as f64 >= analytic as f64 / 2.0,
            "w={w}"
        );
    }
    assert!(run.region.is_non_increasing());
}
