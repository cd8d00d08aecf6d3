use qcap_core::bench::{
    benchmark_depths, estimate_success, generate_mirror_circuit, measure_capability, ShotPlan,
};
use qcap_core::quop::{capability_frontier, default_depth_grid};
use qcap_core::seed::circuit_seed;
use qcap_core::{AnalysisConfig, ErrorRates, ProgramShape};
use qcap_testkit::exact_mirror_success;

use crate::{check, Outcome};

fn pooled_exact(shape: ProgramShape, rates: &ErrorRates, plan: &ShotPlan) -> f64 {
    (0..plan.n_circuits)
        .map(|i| {
            let c = generate_mirror_circuit(
                shape.width(),
                shape.depth(),
                rates.two_qubit_density(),
                circuit_seed(plan.seed, i),
            )
            .unwrap();
            let layers: Vec<_> = c
                .layers()
                .iter()
                .map(|l| (l.pairs.clone(), l.singles.clone()))
                .collect();
            let p = exact_mirror_success(
                c.width(),
                &layers,
                rates.eps_1q(),
                rates.eps_2q(),
                rates.eps_meas(),
                true,
            );
            p * plan.shots_for(i) as f64
        })
        .sum::<f64>()
        / plan.shots as f64
}

pub fn monte_carlo_vs_exact() -> Outcome {
    let plan = ShotPlan {
        shots: 100_000,
        n_circuits: 10,
        seed: 2024,
    };
    let mut cells = 0;
    let mut worst = 0.0f64;
    let mut misses = Vec::new();
    for eps in [0.05, 0.1, 0.2] {
        for zeta in [0.0, 1.0] {
            let rates = ErrorRates::new(eps, eps, eps, zeta).unwrap();
            for w in 1..=3u64 {
                // odd widths cannot be fully paired
                if rates.paired_qubits(w).is_err() {
                    continue;
                }
                // mirror circuits have even depth
                for d in [2u64, 4] {
                    let shape = ProgramShape::new(w, d).unwrap();
                    let est = estimate_success(shape, &rates, true, &plan).unwrap();
                    let exact = pooled_exact(shape, &rates, &plan);
                    let z = (est.p_hat - exact).abs() / est.stderr;
                    worst = worst.max(z);
                    cells += 1;
                    if z > 4.0 {
                        misses.push(format!("w={w} d={d} eps={eps} zeta={zeta} z={z:.2}"));
                    }
                }
            }
        }
    }
    check(
        misses.is_empty(),
        format!(
            "{cells} shapes at 1e5 shots, worst deviation {worst:.2} stderr (limit 4){}",
            if misses.is_empty() {
                String::new()
            } else {
                format!("; misses: {}", misses.join(", "))
            }
        ),
    )
}

/// Index of the largest grid entry not above `depth`, or `None` below the grid.
fn grid_index(grid: &[u64], depth: u64) -> Option<usize> {
    grid.iter().rposition(|&g| g <= depth)
}

pub fn cross_engine_agreement() -> Outcome {
    let rates = ErrorRates::uniform(0.01).unwrap();
    let cfg = AnalysisConfig {
        width_max: 8,
        depth_max: 64,
        depth_grid: default_depth_grid(64),
        ..AnalysisConfig::default()
    };
    let plan = ShotPlan {
        shots: 10_000,
        n_circuits: 10,
        seed: 1,
    };
    let widths = [1u64, 2, 4, 8];
    let grid = benchmark_depths(&cfg);
    let run = measure_capability(&rates, &cfg, &widths, &plan).map_err(|e| e.to_string())?;
    let analytic = capability_frontier(&rates, &cfg).map_err(|e| e.to_string())?;
    let mut ok = true;
    let mut rows = Vec::new();
    for w in widths {
        let a = analytic.max_depth(w);
        let e = run.region.max_depth(w);
        let (ia, ie) = (grid_index(&grid, a), grid_index(&grid, e));
        let steps = match (ia, ie) {
            (Some(x), Some(y)) => x.abs_diff(y),
            (None, None) => 0,
            (Some(x), None) | (None, Some(x)) => x + 1,
        };
        ok &= steps <= 1;
        rows.push(format!("w={w} analytic {a} empirical {e} ({steps} steps)"));
    }
    check(ok, format!("grid {grid:?}: {}", rows.join(", ")))
}
