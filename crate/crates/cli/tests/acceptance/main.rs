//! Acceptance suite: one PASS/FAIL line per criterion, each with its time
//! limit. Exits non-zero if any criterion fails.

mod arithmetic;
mod determinism;
mod invariants;
mod simulation;

use std::time::{Duration, Instant};

/// `Ok(detail)` on pass, `Err(detail)` on failure.
pub type Outcome = Result<String, String>;

pub fn check(ok: bool, detail: String) -> Outcome {
    if ok {
        Ok(detail)
    } else {
        Err(detail)
    }
}

struct Criterion {
    id: u32,
    name: &'static str,
    limit: Duration,
    run: fn() -> Outcome,
}

fn main() {
    let secs = Duration::from_secs;
    let criteria = [
        Criterion {
            id: 1,
            name: "100-quop rule",
            limit: secs(1),
            run: arithmetic::hundred_quop_rule,
        },
        Criterion {
            id: 2,
            name: "10-kiloquop rule",
            limit: secs(1),
            run: arithmetic::ten_kiloquop_rule,
        },
        Criterion {
            id: 3,
            name: "eight-orders gap",
            limit: secs(1),
            run: arithmetic::eight_orders_gap,
        },
        Criterion {
            id: 4,
            name: "Monte Carlo vs exact oracle",
            limit: secs(60),
            run: simulation::monte_carlo_vs_exact,
        },
        Criterion {
            id: 5,
            name: "cross-engine agreement",
            limit: secs(60),
            run: simulation::cross_engine_agreement,
        },
        Criterion {
            id: 6,
            name: "suppression identity",
            limit: secs(1),
            run: arithmetic::suppression_identity,
        },
        Criterion {
            id: 7,
            name: "distance plan",
            limit: secs(1),
            run: arithmetic::distance_plan,
        },
        Criterion {
            id: 8,
            name: "teraquop under QEC",
            limit: secs(5),
            run: arithmetic::teraquop_under_qec,
        },
        Criterion {
            id: 9,
            name: "mitigation laws",
            limit: secs(5),
            run: arithmetic::mitigation_laws,
        },
        Criterion {
            id: 10,
            name: "determinism",
            limit: secs(120),
            run: determinism::byte_identical_runs,
        },
        Criterion {
            id: 11,
            name: "region invariants",
            limit: secs(60),
            run: invariants::region_invariants,
        },
    ];

    let only: Vec<u32> = std::env::args()
        .skip(1)
        .filter_map(|a| a.strip_prefix("criterion-").and_then(|n| n.parse().ok()))
        .collect();
    let mut failed = 0;
    let mut ran = 0;
    for c in criteria
        .iter()
        .filter(|c| only.is_empty() || only.contains(&c.id))
    {
        let start = Instant::now();
        let outcome =
            std::panic::catch_unwind(c.run).unwrap_or_else(|_| Err("panicked".to_string()));
        let elapsed = start.elapsed();
        let (verdict, detail) = match outcome {
            Ok(d) if elapsed <= c.limit => ("PASS", d),
            Ok(d) => ("FAIL", format!("{d}; over the {:?} limit", c.limit)),
            Err(d) => ("FAIL", d),
        };
        if verdict == "FAIL" {
            failed += 1;
        }
        ran += 1;
        println!(
            "criterion {:>2} {verdict} {}: {detail} [{:.2}s / {}s]",
            c.id,
            c.name,
            elapsed.as_secs_f64(),
            c.limit.as_secs()
        );
    }
    println!("acceptance: {}/{ran} criteria passed", ran - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
