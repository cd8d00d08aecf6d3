//! Error mitigation as exact bias removal bought with samples.
//!
//! A shape with noise strength `L = -ln P(success)` costs `N0 * exp(b * L)`
//! shots to estimate at the precision `N0` shots buy at zero noise. Under a
//! budget of `B` shots every shape with `L <= ln(B / N0) / b` is affordable.

use serde::Serialize;

use crate::quop::{ln_layer_success, ln_success_probability, refine_depth};
use crate::region::{CapabilityRegion, FrontierPoint, RegionSource};
use crate::{quop, AnalysisConfig, Error, ErrorRates, ProgramShape, Result};

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct MitigationModel {
    /// `b` in `exp(b * L)`.
    pub overhead_exponent: f64,
    /// Shots needed at zero noise, `N0`.
    pub base_shots: u64,
    /// Total shots available, `B`.
    pub shot_budget: u64,
}

impl MitigationModel {
    pub const DEFAULT_OVERHEAD_EXPONENT: f64 = 4.0;
    pub const DEFAULT_BASE_SHOTS: u64 = 1000;

    pub fn new(overhead_exponent: f64, base_shots: u64, shot_budget: u64) -> Result<Self> {
        let model = Self {
            overhead_exponent,
            base_shots,
            shot_budget,
        };
        model.validate()?;
        Ok(model)
    }

    /// Default `b` and `N0` with the given budget.
    pub fn with_budget(shot_budget: u64) -> Result<Self> {
        Self::new(
            Self::DEFAULT_OVERHEAD_EXPONENT,
            Self::DEFAULT_BASE_SHOTS,
            shot_budget,
        )
    }

    pub fn validate(&self) -> Result<()> {
        if !(self.overhead_exponent.is_finite() && self.overhead_exponent > 0.0) {
            return Err(Error::out_of_range(
                "overhead_exponent",
                self.overhead_exponent,
                "(0, inf)",
            ));
        }
        if self.base_shots == 0 {
            return Err(Error::Config("base_shots must be >= 1".into()));
        }
        if self.shot_budget == 0 {
            return Err(Error::Config("shot budget must be >= 1".into()));
        }
        Ok(())
    }

    /// Affordable noise strength `ln(B / N0) / b`, or `None` when `B < N0`.
    pub fn noise_budget(&self) -> Option<f64> {
        if self.shot_budget < self.base_shots {
            return None;
        }
        Some(
            ((self.shot_budget as f64).ln() - (self.base_shots as f64).ln())
                / self.overhead_exponent,
        )
    }
}

/// Expected-error measure `L = -ln P(success)`; zero iff success is certain.
#[derive(Debug, Clone, Copy, PartialEq, PartialOrd, Serialize)]
pub struct NoiseStrength(f64);

impl NoiseStrength {
    pub fn value(&self) -> f64 {
        self.0
    }
}

/// `-ln P(success)`, evaluated in log space.
pub fn noise_strength(
    shape: ProgramShape,
    rates: &ErrorRates,
    config: &AnalysisConfig,
) -> Result<NoiseStrength> {
    let ln_p = ln_success_probability(shape, rates, config)?;
    // -0.0 for noiseless rates
    Ok(NoiseStrength((-ln_p).max(0.0)))
}

/// Multiplicative shot cost of mitigating a shape.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct SamplingOverhead {
    /// `exp(b * L)`; `+inf` when not representable.
    pub factor: f64,
    /// `b * L`, always finite.
    pub ln_factor: f64,
    /// False when `factor` overflowed.
    pub feasible: bool,
}

pub fn sampling_overhead(
    shape: ProgramShape,
    rates: &ErrorRates,
    model: &MitigationModel,
    config: &AnalysisConfig,
) -> Result<SamplingOverhead> {
    model.validate()?;
    let ln_factor = model.overhead_exponent * noise_strength(shape, rates, config)?.value();
    let factor = ln_factor.exp();
    Ok(SamplingOverhead {
        factor,
        ln_factor,
        feasible: factor.is_finite(),
    })
}

/// Deepest affordable depth at `width`: largest `d` with `L(width, d) <= budget`.
pub fn max_mitigated_depth(
    width: u64,
    rates: &ErrorRates,
    budget: f64,
    config: &AnalysisConfig,
) -> Result<u64> {
    ProgramShape::new(width, 1)?;
    let layer = ln_layer_success(width, rates)?;
    let meas = if config.include_measurement {
        width as f64 * (-rates.eps_meas()).ln_1p()
    } else {
        0.0
    };
    let affordable = |d: u64| -(d as f64 * layer + meas) <= budget;
    let estimate = if layer == 0.0 {
        if -meas <= budget {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        (budget + meas) / -layer
    };
    Ok(refine_depth(estimate, config.depth_max, affordable))
}

/// Pointwise maximum of the unmitigated frontier and the affordable set
/// `N0 * exp(b * L) <= B`. With `B < N0` only the unmitigated region remains
/// and a warning is attached.
pub fn mitigated_frontier(
    rates: &ErrorRates,
    model: &MitigationModel,
    config: &AnalysisConfig,
) -> Result<CapabilityRegion> {
    model.validate()?;
    let base = quop::capability_frontier(rates, config)?;
    let label = format!(
        "mitigated {} B={} N0={} b={} tau={}",
        rates.describe(),
        model.shot_budget,
        model.base_shots,
        model.overhead_exponent,
        config.threshold
    );
    let mut region = CapabilityRegion::new(label, RegionSource::Mitigated, config.threshold);
    region.warnings = base.warnings.clone();
    region.metadata = base.metadata.clone();
    region
        .metadata
        .insert("shot_budget".into(), model.shot_budget.to_string());
    region
        .metadata
        .insert("base_shots".into(), model.base_shots.to_string());
    region.metadata.insert(
        "overhead_exponent".into(),
        model.overhead_exponent.to_string(),
    );

    let budget = model.noise_budget();
    if budget.is_none() {
        region.warnings.push(format!(
            "shot budget {} is below base shots {}: no mitigation possible",
            model.shot_budget, model.base_shots
        ));
    }
    for (&width, point) in &base.frontier {
        let mitigated = match budget {
            Some(budget) => max_mitigated_depth(width, rates, budget, config)?,
            None => 0,
        };
        region.insert(width, FrontierPoint::depth(point.max_depth.max(mitigated)));
    }
    Ok(region)
}
