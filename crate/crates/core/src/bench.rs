//! Randomized mirror-circuit benchmarks under stochastic bit-flip noise.
//!
//! A mirror circuit of even depth repeats its first half in reverse order, so
//! with no noise it acts as the identity and always returns the all-zeros
//! string. Noise is tracked as an X-only Pauli frame: single-qubit gates are
//! error locations, and each two-qubit gate copies the control's bit-flip onto
//! the target (`x_t ^= x_c`), which is how one error spreads to many qubits.
//! A shot succeeds iff the frame is clear after the final readout.

use rayon::prelude::*;
use serde::Serialize;

use crate::quop::{paired_qubit_count, AnalysisConfig, ErrorRates, ProgramShape};
use crate::region::{CapabilityRegion, FrontierPoint, RegionSource};
use crate::seed::{self, SplitMix64};
use crate::{Error, Result};

/// Shots per parallel work unit. Fixed so that chunking never depends on the
/// thread count.
const SHOT_BLOCK: u64 = 4096;

/// One layer: disjoint `(control, target)` pairs plus the qubits carrying
/// single-qubit gates. Together they cover every qubit exactly once.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct Layer {
    pub pairs: Vec<(usize, usize)>,
    pub singles: Vec<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize)]
pub struct MirrorCircuit {
    width: usize,
    layers: Vec<Layer>,
}

impl MirrorCircuit {
    pub fn width(&self) -> usize {
        self.width
    }

    pub fn depth(&self) -> usize {
        self.layers.len()
    }

    pub fn layers(&self) -> &[Layer] {
        &self.layers
    }

    /// Noiseless output: all zeros.
    pub fn target_bitstring(&self) -> Vec<bool> {
        vec![false; self.width]
    }

    /// Layer `k` and layer `depth - 1 - k` carry the same pairs, and every
    /// layer partitions the qubits.
    pub fn is_well_formed(&self) -> bool {
        let depth = self.layers.len();
        let mirrored =
            (0..depth / 2).all(|k| self.layers[k].pairs == self.layers[depth - 1 - k].pairs);
        let partitions = self.layers.iter().all(|layer| {
            let mut seen = vec![false; self.width];
            let qubits = layer
                .pairs
                .iter()
                .flat_map(|&(c, t)| [c, t])
                .chain(layer.singles.iter().copied());
            for q in qubits {
                if q >= self.width || std::mem::replace(&mut seen[q], true) {
                    return false;
                }
            }
            seen.into_iter().all(|s| s)
        });
        depth.is_multiple_of(2) && mirrored && partitions
    }
}

/// Builds a mirror circuit. Each of the first `depth / 2` layers pairs
/// `round(zeta * width)` qubits drawn by a partial Fisher-Yates shuffle; the
/// order within each drawn pair fixes (control, target). The second half
/// repeats the first in reverse order.
pub fn generate_mirror_circuit(
    width: u64,
    depth: u64,
    zeta: f64,
    seed: u64,
) -> Result<MirrorCircuit> {
    ProgramShape::new(width, depth)?;
    if depth % 2 == 1 {
        return Err(Error::OddDepth(depth));
    }
    if !(zeta.is_finite() && (0.0..=1.0).contains(&zeta)) {
        return Err(Error::out_of_range("zeta", zeta, "[0, 1]"));
    }
    let paired = paired_qubit_count(width, zeta)? as usize;
    let width = usize::try_from(width).map_err(|_| Error::Overflow("circuit width"))?;
    let half = usize::try_from(depth / 2).map_err(|_| Error::Overflow("circuit depth"))?;

    let mut rng = SplitMix64::new(seed);
    let mut layers = Vec::with_capacity(2 * half);
    let mut order: Vec<usize> = (0..width).collect();
    for _ in 0..half {
        order.iter_mut().enumerate().for_each(|(i, q)| *q = i);
        for i in 0..paired {
            let j = i + rng.below((width - i) as u64) as usize;
            order.swap(i, j);
        }
        let mut pairs: Vec<(usize, usize)> = order[..paired]
            .chunks_exact(2)
            .map(|p| (p[0], p[1]))
            .collect();
        pairs.sort_unstable();
        let mut singles = order[paired..].to_vec();
        singles.sort_unstable();
        layers.push(Layer { pairs, singles });
    }
    let mirror: Vec<Layer> = layers.iter().rev().cloned().collect();
    layers.extend(mirror);
    Ok(MirrorCircuit { width, layers })
}

/// X component of a Pauli error frame: bit `q` set means qubit `q` is flipped.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PauliFrame {
    words: Vec<u64>,
    width: usize,
}

impl PauliFrame {
    pub fn new(width: usize) -> Self {
        Self {
            words: vec![0; width.div_ceil(64)],
            width,
        }
    }

    pub fn width(&self) -> usize {
        self.width
    }

    #[inline]
    pub fn get(&self, qubit: usize) -> bool {
        self.words[qubit / 64] >> (qubit % 64) & 1 == 1
    }

    #[inline]
    pub fn flip(&mut self, qubit: usize) {
        self.words[qubit / 64] ^= 1 << (qubit % 64);
    }

    /// X propagation through a CNOT: the control's flip is copied onto the target.
    #[inline]
    pub fn propagate_cnot(&mut self, control: usize, target: usize) {
        if self.get(control) {
            self.flip(target);
        }
    }

    pub fn is_clear(&self) -> bool {
        self.words.iter().all(|&w| w == 0)
    }

    pub fn weight(&self) -> u32 {
        self.words.iter().map(|w| w.count_ones()).sum()
    }

    pub fn clear(&mut self) {
        self.words.iter_mut().for_each(|w| *w = 0);
    }
}

/// Flip probability for each qubit of a pair, `1 - sqrt(1 - eps_2q)`, so that
/// a pair sees at least one flip with probability `eps_2q`.
pub fn pair_qubit_flip_prob(eps_2q: f64) -> f64 {
    -(0.5 * (-eps_2q).ln_1p()).exp_m1()
}

/// Runs one noisy shot, reusing `frame` as scratch. Returns true when the
/// final frame is clear.
pub fn simulate_shot_with(
    circuit: &MirrorCircuit,
    rates: &ErrorRates,
    include_measurement: bool,
    rng: &mut SplitMix64,
    frame: &mut PauliFrame,
) -> bool {
    frame.clear();
    let pair_flip = pair_qubit_flip_prob(rates.eps_2q());
    for layer in &circuit.layers {
        for &q in &layer.singles {
            if rng.bernoulli(rates.eps_1q()) {
                frame.flip(q);
            }
        }
        for &(c, t) in &layer.pairs {
            if rng.bernoulli(pair_flip) {
                frame.flip(c);
            }
            if rng.bernoulli(pair_flip) {
                frame.flip(t);
            }
        }
        for &(c, t) in &layer.pairs {
            frame.propagate_cnot(c, t);
        }
    }
    if include_measurement {
        for q in 0..circuit.width {
            if rng.bernoulli(rates.eps_meas()) {
                frame.flip(q);
            }
        }
    }
    frame.is_clear()
}

pub fn simulate_shot(
    circuit: &MirrorCircuit,
    rates: &ErrorRates,
    include_measurement: bool,
    rng: &mut SplitMix64,
) -> bool {
    let mut frame = PauliFrame::new(circuit.width);
    simulate_shot_with(circuit, rates, include_measurement, rng, &mut frame)
}

/// Shot count and seeding for one estimate.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ShotPlan {
    pub shots: u64,
    pub n_circuits: u64,
    pub seed: u64,
}

impl ShotPlan {
    pub fn validate(&self) -> Result<()> {
        if self.n_circuits == 0 {
            return Err(Error::Config("n_circuits must be >= 1".into()));
        }
        if self.shots < self.n_circuits {
            return Err(Error::Config(format!(
                "shots ({}) must be at least n_circuits ({})",
                self.shots, self.n_circuits
            )));
        }
        Ok(())
    }

    /// Shots assigned to circuit `index`: `shots / n_circuits`, plus one for
    /// the first `shots % n_circuits` circuits.
    pub fn shots_for(&self, index: u64) -> u64 {
        self.shots / self.n_circuits + u64::from(index < self.shots % self.n_circuits)
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SuccessEstimate {
    pub shape: ProgramShape,
    pub shots: u64,
    pub successes: u64,
    pub p_hat: f64,
    /// Wald standard error, `sqrt(p_hat (1 - p_hat) / shots)`.
    pub stderr: f64,
    pub seed: u64,
}

impl SuccessEstimate {
    pub fn from_counts(shape: ProgramShape, shots: u64, successes: u64, seed: u64) -> Self {
        let p_hat = successes as f64 / shots as f64;
        Self {
            shape,
            shots,
            successes,
            p_hat,
            stderr: (p_hat * (1.0 - p_hat) / shots as f64).sqrt(),
            seed,
        }
    }
}

/// Draws `plan.n_circuits` mirror circuits (circuit `i` seeded with
/// [`seed::circuit_seed`]`(plan.seed, i)`), runs each for its share of the
/// shots (shot `j` seeded with [`seed::shot_seed`]) and pools the successes.
/// The two-qubit density comes from `rates`.
pub fn estimate_success(
    shape: ProgramShape,
    rates: &ErrorRates,
    include_measurement: bool,
    plan: &ShotPlan,
) -> Result<SuccessEstimate> {
    plan.validate()?;
    let circuits = (0..plan.n_circuits)
        .map(|i| {
            generate_mirror_circuit(
                shape.width(),
                shape.depth(),
                rates.two_qubit_density(),
                seed::circuit_seed(plan.seed, i),
            )
        })
        .collect::<Result<Vec<_>>>()?;

    let units: Vec<(usize, u64, u64)> = circuits
        .iter()
        .enumerate()
        .flat_map(|(i, _)| {
            let shots = plan.shots_for(i as u64);
            (0..shots.div_ceil(SHOT_BLOCK)).map(move |b| {
                let start = b * SHOT_BLOCK;
                (i, start, (start + SHOT_BLOCK).min(shots))
            })
        })
        .collect();

    let successes: u64 = units
        .par_iter()
        .map(|&(i, start, end)| {
            let circuit = &circuits[i];
            let key = seed::circuit_seed(plan.seed, i as u64);
            let mut frame = PauliFrame::new(circuit.width());
            (start..end)
                .filter(|&j| {
                    let mut rng = SplitMix64::new(seed::shot_seed(key, j));
                    simulate_shot_with(circuit, rates, include_measurement, &mut rng, &mut frame)
                })
                .count() as u64
        })
        .sum();

    Ok(SuccessEstimate::from_counts(
        shape, plan.shots, successes, plan.seed,
    ))
}

/// Empirical region plus every cell estimate that was run.
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct BenchmarkRun {
    pub region: CapabilityRegion,
    pub cells: Vec<SuccessEstimate>,
}

/// Even depths of the configured grid, up to `depth_max`.
pub fn benchmark_depths(config: &AnalysisConfig) -> Vec<u64> {
    config
        .depth_grid
        .iter()
        .copied()
        .filter(|&d| d % 2 == 0 && d <= config.depth_max)
        .collect()
}

/// Estimates the empirical capability region on the grid `widths x
/// benchmark_depths(config)`. Cell `(w, d)` uses `plan` with its seed replaced
/// by [`seed::cell_seed`]`(plan.seed, w, d)`. Depths are scanned upward and the
/// scan at a width stops at the first depth with `p_hat < threshold`, so the
/// region stays downward closed. Widths whose pairing is infeasible are
/// skipped with a warning.
pub fn measure_capability(
    rates: &ErrorRates,
    config: &AnalysisConfig,
    widths: &[u64],
    plan: &ShotPlan,
) -> Result<BenchmarkRun> {
    config.validate()?;
    plan.validate()?;
    let depths = benchmark_depths(config);
    let label = format!(
        "empirical {} tau={} shots={} seed={}",
        rates.describe(),
        config.threshold,
        plan.shots,
        plan.seed
    );
    let mut region = CapabilityRegion::new(label, RegionSource::Empirical, config.threshold);
    let mut cells = Vec::new();
    let mut widths = widths.to_vec();
    widths.sort_unstable();
    widths.dedup();

    for &width in &widths {
        if let Err(e) = rates.paired_qubits(width) {
            region.warnings.push(format!("width {width} skipped: {e}"));
            continue;
        }
        let mut point = FrontierPoint::default();
        for &depth in &depths {
            let cell_plan = ShotPlan {
                seed: seed::cell_seed(plan.seed, width, depth),
                ..*plan
            };
            let shape = ProgramShape::new(width, depth)?;
            let estimate = estimate_success(shape, rates, config.include_measurement, &cell_plan)?;
            let passed = estimate.p_hat >= config.threshold;
            if passed || point.max_depth == 0 {
                point.p_hat = Some(estimate.p_hat);
                point.stderr = Some(estimate.stderr);
            }
            cells.push(estimate);
            if !passed {
                break;
            }
            point.max_depth = depth;
        }
        region.insert(width, point);
    }
    region.metadata.insert("rates".into(), rates.describe());
    region
        .metadata
        .insert("shots".into(), plan.shots.to_string());
    region
        .metadata
        .insert("n_circuits".into(), plan.n_circuits.to_string());
    region.metadata.insert("seed".into(), plan.seed.to_string());
    Ok(BenchmarkRun { region, cells })
}
