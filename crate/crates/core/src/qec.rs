//! Surface-code projections: logical error rates, distance selection, qubit
//! and time costs, and the capability region of a physical-qubit budget.
//!
//! Logical error per logical qubit per logical layer follows
//! `p_L = A * (p / p_th)^((d + 1) / 2)`, so every step `d -> d + 2` multiplies
//! `p_L` by `p / p_th`. A logical layer of width `w` charges `w` independent
//! `p_L` slots; magic-state production and routing are not modeled.

use serde::Serialize;

use crate::quop::{max_reliable_depth, required_error_rate};
use crate::region::{CapabilityRegion, FrontierPoint, RegionSource};
use crate::{AnalysisConfig, Error, ErrorRates, ProgramShape, Result};

/// Relative slack when comparing a computed `p_L` against a target, covering
/// the rounding of the repeated products (`0.1 * 0.1^11` evaluates to
/// `1.0000000000000012e-12`).
const TARGET_RELATIVE_SLACK: f64 = 64.0 * f64::EPSILON;

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SurfaceCodeModel {
    /// Threshold physical error rate `p_th`.
    pub threshold: f64,
    /// Suppression prefactor `A`.
    pub prefactor: f64,
    /// Physical qubits per logical qubit are `qubits_per_logical_factor * d^2`.
    pub qubits_per_logical_factor: u64,
    /// Largest distance ever considered.
    pub max_distance: u64,
    /// Seconds per syndrome-extraction round; a logical layer takes `d` rounds.
    pub cycle_time: f64,
}

impl Default for SurfaceCodeModel {
    fn default() -> Self {
        Self {
            threshold: 0.01,
            prefactor: 0.1,
            qubits_per_logical_factor: 2,
            max_distance: 101,
            cycle_time: 1e-6,
        }
    }
}

impl SurfaceCodeModel {
    pub const MIN_DISTANCE: u64 = 3;

    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::out_of_range("p_th", self.threshold, "(0, 1)"));
        }
        if !(self.prefactor.is_finite() && self.prefactor > 0.0) {
            return Err(Error::out_of_range("prefactor", self.prefactor, "(0, inf)"));
        }
        if self.qubits_per_logical_factor == 0 {
            return Err(Error::Config(
                "qubits_per_logical_factor must be >= 1".into(),
            ));
        }
        check_distance(self.max_distance)?;
        if !(self.cycle_time.is_finite() && self.cycle_time > 0.0) {
            return Err(Error::out_of_range(
                "cycle_time",
                self.cycle_time,
                "(0, inf)",
            ));
        }
        Ok(())
    }

    pub fn qubits_per_logical(&self, distance: u64) -> Result<u64> {
        distance
            .checked_mul(distance)
            .and_then(|d2| d2.checked_mul(self.qubits_per_logical_factor))
            .ok_or(Error::Overflow("qubits per logical qubit"))
    }

    pub fn rounds_per_layer(&self, distance: u64) -> u64 {
        distance
    }

    pub fn describe(&self) -> String {
        format!(
            "A={} p_th={} cost={}d^2",
            self.prefactor, self.threshold, self.qubits_per_logical_factor
        )
    }

    fn check_physical(&self, p: f64) -> Result<()> {
        if p.is_nan() || p <= 0.0 {
            return Err(Error::out_of_range("p", p, "(0, p_th)"));
        }
        if p >= self.threshold {
            return Err(Error::AboveThreshold {
                p,
                threshold: self.threshold,
            });
        }
        Ok(())
    }
}

fn check_distance(d: u64) -> Result<()> {
    if d < SurfaceCodeModel::MIN_DISTANCE || d.is_multiple_of(2) {
        return Err(Error::InvalidDistance(d));
    }
    Ok(())
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct LogicalRates {
    pub p_logical: f64,
    pub distance: u64,
    pub physical: f64,
}

/// `A * r^k` with `r = p / p_th`, `k = (d + 1) / 2`, by repeated
/// multiplication so that consecutive distances differ by a single rounding.
fn suppressed(prefactor: f64, ratio: f64, distance: u64) -> f64 {
    (0..distance.div_ceil(2))
        .fold(prefactor, |acc, _| acc * ratio)
        .min(1.0)
}

/// Logical error probability per logical qubit per logical layer.
pub fn logical_error_rate(p: f64, distance: u64, model: &SurfaceCodeModel) -> Result<LogicalRates> {
    model.validate()?;
    model.check_physical(p)?;
    check_distance(distance)?;
    Ok(LogicalRates {
        p_logical: suppressed(model.prefactor, p / model.threshold, distance),
        distance,
        physical: p,
    })
}

fn meets(p_logical: f64, target: f64) -> bool {
    p_logical <= target * (1.0 + TARGET_RELATIVE_SLACK)
}

/// Smallest odd `d >= 3` with `p_L(p, d) <= target` (up to rounding slack).
pub fn min_distance(p: f64, target: f64, model: &SurfaceCodeModel) -> Result<u64> {
    model.validate()?;
    model.check_physical(p)?;
    if !(target > 0.0 && target < 1.0) {
        return Err(Error::out_of_range("target p_L", target, "(0, 1)"));
    }
    let ratio = p / model.threshold;
    let rate = |d: u64| suppressed(model.prefactor, ratio, d);
    // A * r^k <= t  <=>  k >= ln(t / A) / ln(r)
    let k = ((target / model.prefactor).ln() / ratio.ln())
        .ceil()
        .max(2.0);
    let mut d = if k.is_finite() && k < (model.max_distance as f64 + 1.0) / 2.0 {
        2 * k as u64 - 1
    } else {
        model.max_distance
    };
    while !meets(rate(d), target) {
        if d + 2 > model.max_distance {
            return Err(Error::DistanceUnreachable {
                target,
                max_distance: model.max_distance,
            });
        }
        d += 2;
    }
    while d > SurfaceCodeModel::MIN_DISTANCE && meets(rate(d - 2), target) {
        d -= 2;
    }
    Ok(d)
}

/// Physical qubits for `n_logical` logical qubits at distance `d`.
pub fn physical_cost(n_logical: u64, distance: u64, model: &SurfaceCodeModel) -> Result<u64> {
    check_distance(distance)?;
    if n_logical == 0 {
        return Err(Error::Config("n_logical must be >= 1".into()));
    }
    n_logical
        .checked_mul(model.qubits_per_logical(distance)?)
        .ok_or(Error::Overflow("physical qubit count"))
}

/// Capability region of a machine with `budget` physical qubits at physical
/// error rate `p`. For every odd distance that fits at least one logical
/// qubit, widths up to `budget / (factor d^2)` run at uniform rate `p_L(d)`
/// with measurement excluded. The frontier takes the best distance per width;
/// `d_code` records the smallest distance reaching that depth.
pub fn qec_capability_region(
    budget: u64,
    p: f64,
    model: &SurfaceCodeModel,
    config: &AnalysisConfig,
) -> Result<CapabilityRegion> {
    model.validate()?;
    model.check_physical(p)?;
    config.validate()?;
    let cfg = config.without_measurement();
    let label = format!(
        "qec Q={} p={} {} tau={} (logical quops)",
        budget,
        p,
        model.describe(),
        config.threshold
    );
    let mut region = CapabilityRegion::new(label, RegionSource::Qec, config.threshold);
    region
        .metadata
        .insert("physical_qubits".into(), budget.to_string());
    region.metadata.insert("p".into(), p.to_string());
    region.metadata.insert("model".into(), model.describe());
    region
        .metadata
        .insert("charging".into(), "logical quops".into());

    let smallest = model.qubits_per_logical(SurfaceCodeModel::MIN_DISTANCE)?;
    if budget < smallest {
        region.warnings.push(format!(
            "budget of {budget} physical qubits is below one distance-3 logical qubit ({smallest})"
        ));
        return Ok(region);
    }
    let ratio = p / model.threshold;
    let mut d = SurfaceCodeModel::MIN_DISTANCE;
    while d <= model.max_distance {
        let per_logical = model.qubits_per_logical(d)?;
        if per_logical > budget {
            break;
        }
        let p_logical = suppressed(model.prefactor, ratio, d);
        let widths = (budget / per_logical).min(config.width_max);
        for width in 1..=widths {
            let depth = if p_logical < 1.0 {
                max_reliable_depth(width, &ErrorRates::uniform(p_logical)?, &cfg)?
            } else {
                0
            };
            let better = region
                .frontier
                .get(&width)
                .is_none_or(|old| depth > old.max_depth);
            if better {
                region.insert(
                    width,
                    FrontierPoint {
                        max_depth: depth,
                        d_code: Some(d),
                        ..FrontierPoint::default()
                    },
                );
            }
        }
        d += 2;
    }
    Ok(region)
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct QecPlan {
    pub shape: ProgramShape,
    pub required_rate: f64,
    pub distance: u64,
    pub p_logical: f64,
    pub physical_qubits: u64,
    pub wall_clock_seconds: f64,
}

/// Distance, qubit count and runtime for running `shape` logically at
/// physical rate `p`. The per-slot target is [`required_error_rate`] under
/// `config` with measurement excluded, as in [`qec_capability_region`].
pub fn plan_for_target(
    shape: ProgramShape,
    p: f64,
    model: &SurfaceCodeModel,
    config: &AnalysisConfig,
) -> Result<QecPlan> {
    let required_rate = required_error_rate(shape, &config.without_measurement())?;
    let distance = min_distance(p, required_rate, model)?;
    let p_logical = logical_error_rate(p, distance, model)?.p_logical;
    let physical_qubits = physical_cost(shape.width(), distance, model)?;
    let wall_clock_seconds =
        shape.depth() as f64 * model.rounds_per_layer(distance) as f64 * model.cycle_time;
    Ok(QecPlan {
        shape,
        required_rate,
        distance,
        p_logical,
        physical_qubits,
        wall_clock_seconds,
    })
}

/// Parameter grid explored by [`sensitivity_scan`].
#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityGrid {
    pub prefactors: Vec<f64>,
    pub thresholds: Vec<f64>,
    pub physical_rates: Vec<f64>,
    pub qubits_per_logical_factors: Vec<u64>,
}

impl Default for SensitivityGrid {
    fn default() -> Self {
        Self {
            prefactors: vec![0.1, 0.03],
            thresholds: vec![0.01, 0.008],
            physical_rates: vec![1e-3, 5e-4, 1e-4, 5e-5, 1e-5],
            qubits_per_logical_factors: vec![2, 1],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct SensitivityRow {
    pub prefactor: f64,
    pub threshold: f64,
    pub p: f64,
    pub qubits_per_logical_factor: u64,
    pub distance: u64,
    pub physical_qubits: u64,
    pub fits_budget: bool,
}

/// Plans `shape` for every grid combination and reports whether the result
/// fits in `budget` physical qubits. Combinations above threshold are omitted.
pub fn sensitivity_scan(
    shape: ProgramShape,
    budget: u64,
    base: &SurfaceCodeModel,
    grid: &SensitivityGrid,
    config: &AnalysisConfig,
) -> Result<Vec<SensitivityRow>> {
    let mut rows = Vec::new();
    for &prefactor in &grid.prefactors {
        for &threshold in &grid.thresholds {
            for &p in &grid.physical_rates {
                for &factor in &grid.qubits_per_logical_factors {
                    let model = SurfaceCodeModel {
                        prefactor,
                        threshold,
                        qubits_per_logical_factor: factor,
                        ..*base
                    };
                    let plan = match plan_for_target(shape, p, &model, config) {
                        Ok(plan) => plan,
                        Err(Error::AboveThreshold { .. }) => continue,
                        Err(e) => return Err(e),
                    };
                    rows.push(SensitivityRow {
                        prefactor,
                        threshold,
                        p,
                        qubits_per_logical_factor: factor,
                        distance: plan.distance,
                        physical_qubits: plan.physical_qubits,
                        fits_budget: plan.physical_qubits <= budget,
                    });
                }
            }
        }
    }
    Ok(rows)
}
