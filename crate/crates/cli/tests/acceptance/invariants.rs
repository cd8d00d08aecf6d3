use proptest::prelude::*;
use proptest::strategy::ValueTree;
use proptest::test_runner::TestRunner;
use qcap_core::bench::{benchmark_depths, measure_capability, BenchmarkRun, ShotPlan};
use qcap_core::mitigation::{mitigated_frontier, MitigationModel};
use qcap_core::qec::{logical_error_rate, physical_cost, qec_capability_region, SurfaceCodeModel};
use qcap_core::quop::{capability_frontier, default_depth_grid, success_probability};
use qcap_core::{AnalysisConfig, CapabilityRegion, ErrorRates, ProgramShape};

use crate::{check, Outcome};

#[derive(Debug, Clone)]
struct Config {
    eps: f64,
    scale: f64,
    eps_meas: f64,
    zeta: f64,
    tau: f64,
    tau_lower: f64,
    include_measurement: bool,
    width_max: u64,
    budgets: (u64, u64),
    exponent: f64,
    qubits: (u64, u64),
    p: f64,
    seed: u64,
}

fn configs() -> impl Strategy<Value = Config> {
    (
        (
            -4.0..-1.0f64,
            0.1..1.0f64,
            0.0..0.05f64,
            prop::sample::select(vec![0.0, 0.5, 1.0]),
        ),
        (0.05..0.9f64, 0.5..1.0f64, any::<bool>(), 1u64..12),
        (1u64..1_000_000, 1u64..1_000_000, 1.0..6.0f64),
        (18u64..200_000, 18u64..200_000, -5.0..-2.1f64, any::<u64>()),
    )
        .prop_map(
            |((e, scale, em, zeta), (tau, tl, meas, wmax), (b1, b2, x), (q1, q2, lp, seed))| {
                Config {
                    eps: 10f64.powf(e),
                    scale,
                    eps_meas: em,
                    zeta,
                    tau,
                    tau_lower: tau * tl,
                    include_measurement: meas,
                    width_max: wmax,
                    budgets: (b1.min(b2), b1.max(b2)),
                    exponent: x,
                    qubits: (q1.min(q2), q1.max(q2)),
                    p: 10f64.powf(lp),
                    seed,
                }
            },
        )
}

/// Every depth up to the analytic frontier passes and the next one fails.
fn analytic_closed(r: &CapabilityRegion, rates: &ErrorRates, cfg: &AnalysisConfig) -> bool {
    r.frontier.iter().all(|(&w, p)| {
        let passes = |d: u64| {
            d == 0
                || success_probability(ProgramShape::new(w, d).unwrap(), rates, cfg).unwrap()
                    >= cfg.threshold
        };
        let d = p.max_depth;
        passes(d) && passes(d / 2) && passes(d.min(1)) && (d == cfg.depth_max || !passes(d + 1))
    })
}

/// Every measured cell at or below the frontier passed, and the frontier is a
/// grid depth.
fn empirical_closed(run: &BenchmarkRun, cfg: &AnalysisConfig) -> bool {
    let grid = benchmark_depths(cfg);
    run.region.frontier.iter().all(|(&w, p)| {
        (p.max_depth == 0 || grid.contains(&p.max_depth))
            && run
                .cells
                .iter()
                .filter(|c| c.shape.width() == w && c.shape.depth() <= p.max_depth)
                .all(|c| c.p_hat >= cfg.threshold)
            && run.cells.iter().filter(|c| c.shape.width() == w).count()
                >= grid.iter().filter(|&&g| g <= p.max_depth).count()
    })
}

/// The recorded code distance reaches the frontier depth at the logical rate
/// and fits the width in the budget.
fn qec_closed(r: &CapabilityRegion, p: f64, model: &SurfaceCodeModel) -> bool {
    let ln_tau = r.threshold.ln();
    let budget: u64 = r.metadata["physical_qubits"].parse().unwrap();
    r.frontier.iter().all(|(&w, pt)| match pt.d_code {
        None => pt.max_depth == 0,
        Some(d) => {
            let pl = logical_error_rate(p, d, model).unwrap().p_logical;
            let slots = (w * pt.max_depth) as f64;
            physical_cost(w, d, model).unwrap() <= budget && slots * (-pl).ln_1p() >= ln_tau - 1e-9
        }
    })
}

fn one(c: &Config) -> Result<(), String> {
    let rates = ErrorRates::new(c.eps, c.eps, c.eps_meas, c.zeta).map_err(|e| e.to_string())?;
    let better = ErrorRates::new(
        c.eps * c.scale,
        c.eps * c.scale,
        c.eps_meas * c.scale,
        c.zeta,
    )
    .map_err(|e| e.to_string())?;
    let cfg = AnalysisConfig {
        threshold: c.tau,
        include_measurement: c.include_measurement,
        width_max: c.width_max,
        depth_max: 1_000_000,
        depth_grid: default_depth_grid(1_000_000),
    };
    let lenient = AnalysisConfig {
        threshold: c.tau_lower,
        ..cfg.clone()
    };
    let e = |e: qcap_core::Error| e.to_string();
    let mut fail = Vec::new();

    let analytic = capability_frontier(&rates, &cfg).map_err(e)?;
    if !analytic_closed(&analytic, &rates, &cfg) {
        fail.push("analytic not downward closed");
    }
    // per-slot rates are width independent only without pairing
    if c.zeta == 0.0 && !analytic.is_non_increasing() {
        fail.push("analytic frontier increases with width");
    }
    if !analytic.is_subset_of(&capability_frontier(&better, &cfg).map_err(e)?) {
        fail.push("analytic not monotone in error rates");
    }
    if !analytic.is_subset_of(&capability_frontier(&rates, &lenient).map_err(e)?) {
        fail.push("analytic not monotone in threshold");
    }

    let bench_cfg = AnalysisConfig {
        depth_max: 16,
        depth_grid: default_depth_grid(16),
        ..cfg.clone()
    };
    let plan = ShotPlan {
        shots: 64,
        n_circuits: 2,
        seed: c.seed,
    };
    let widths: Vec<u64> = (1..=c.width_max.min(6)).collect();
    let run = measure_capability(&rates, &bench_cfg, &widths, &plan).map_err(e)?;
    let feasible: Vec<u64> = widths
        .iter()
        .copied()
        .filter(|&w| rates.paired_qubits(w).is_ok())
        .collect();
    if !empirical_closed(&run, &bench_cfg) || run.region.widths().ne(feasible.iter().copied()) {
        fail.push("empirical not downward closed");
    }

    let small = MitigationModel::new(c.exponent, 100, c.budgets.0).map_err(e)?;
    let large = MitigationModel::new(c.exponent, 100, c.budgets.1).map_err(e)?;
    let m_small = mitigated_frontier(&rates, &small, &cfg).map_err(e)?;
    let m_large = mitigated_frontier(&rates, &large, &cfg).map_err(e)?;
    if c.zeta == 0.0 && !(m_small.is_non_increasing() && m_large.is_non_increasing()) {
        fail.push("mitigated frontier increases with width");
    }
    if !analytic.is_subset_of(&m_small) || !m_small.is_subset_of(&m_large) {
        fail.push("mitigated not monotone in budget");
    }

    let model = SurfaceCodeModel::default();
    let q_small = qec_capability_region(c.qubits.0, c.p, &model, &cfg).map_err(e)?;
    let q_large = qec_capability_region(c.qubits.1, c.p, &model, &cfg).map_err(e)?;
    let q_better = qec_capability_region(c.qubits.0, c.p * c.scale, &model, &cfg).map_err(e)?;
    if !qec_closed(&q_small, c.p, &model) || !qec_closed(&q_large, c.p, &model) {
        fail.push("qec not downward closed");
    }
    if !q_small.is_non_increasing() || !q_large.is_non_increasing() {
        fail.push("qec frontier increases with width");
    }
    if !q_small.is_subset_of(&q_large) {
        fail.push("qec not monotone in physical qubits");
    }
    if !q_small.is_subset_of(&q_better) {
        fail.push("qec not monotone in physical error rate");
    }

    if fail.is_empty() {
        Ok(())
    } else {
        Err(fail.join(", "))
    }
}

pub fn region_invariants() -> Outcome {
    let mut runner = TestRunner::deterministic();
    let strategy = configs();
    let mut failures = Vec::new();
    let n = 1000;
    for _ in 0..n {
        let c = strategy.new_tree(&mut runner).unwrap().current();
        if let Err(msg) = one(&c) {
            failures.push(format!("{msg} at {c:?}"));
        }
    }
    check(
        failures.is_empty(),
        format!(
            "{}/{n} random configs across analytic, empirical, mitigated and qec engines satisfy \
             downward closure and monotonicity{}",
            n - failures.len(),
            failures
                .first()
                .map(|f| format!("; first failure: {f}"))
                .unwrap_or_default()
        ),
    )
}
