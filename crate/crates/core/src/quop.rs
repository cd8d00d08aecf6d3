//! Closed-form capability model.
//!
//! Success means no error anywhere: every qubit-layer slot survives
//! independently, so the success probability of a shape is a product of
//! per-slot survival probabilities. All products are evaluated as sums of
//! `ln(1 - eps)` terms so that teraquop-scale shapes do not underflow.

use serde::{Deserialize, Serialize};

use crate::region::{CapabilityRegion, FrontierPoint, RegionSource};
use crate::{Error, Result};

/// `1/e`, the default success threshold.
pub const INV_E: f64 = 0.367_879_441_171_442_33;

/// A rectangle of `width` qubits by `depth` gate layers.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct ProgramShape {
    width: u64,
    depth: u64,
}

impl ProgramShape {
    pub fn new(width: u64, depth: u64) -> Result<Self> {
        if width == 0 || depth == 0 {
            return Err(Error::EmptyShape { width, depth });
        }
        Ok(Self { width, depth })
    }

    pub fn width(&self) -> u64 {
        self.width
    }

    pub fn depth(&self) -> u64 {
        self.depth
    }

    /// Size in quops, `width * depth`.
    pub fn quops(&self) -> Result<u64> {
        self.width
            .checked_mul(self.depth)
            .ok_or(Error::Overflow("quop size"))
    }
}

impl std::fmt::Display for ProgramShape {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}x{}", self.width, self.depth)
    }
}

/// Size of a shape in quops.
pub fn quop_size(shape: ProgramShape) -> Result<u64> {
    shape.quops()
}

/// Per-operation error probabilities plus the fraction of qubits that take
/// part in two-qubit gates in each layer.
#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct ErrorRates {
    eps_1q: f64,
    eps_2q: f64,
    eps_meas: f64,
    two_qubit_density: f64,
}

pub(crate) fn check_probability(name: &str, value: f64) -> Result<f64> {
    if value.is_finite() && (0.0..1.0).contains(&value) {
        Ok(value)
    } else {
        Err(Error::out_of_range(name, value, "[0, 1)"))
    }
}

impl ErrorRates {
    pub fn new(eps_1q: f64, eps_2q: f64, eps_meas: f64, two_qubit_density: f64) -> Result<Self> {
        check_probability("eps_1q", eps_1q)?;
        check_probability("eps_2q", eps_2q)?;
        check_probability("eps_meas", eps_meas)?;
        if !(two_qubit_density.is_finite() && (0.0..=1.0).contains(&two_qubit_density)) {
            return Err(Error::out_of_range("zeta", two_qubit_density, "[0, 1]"));
        }
        Ok(Self {
            eps_1q,
            eps_2q,
            eps_meas,
            two_qubit_density,
        })
    }

    /// Every qubit-layer slot fails with probability `eps`; readout is perfect
    /// and there are no two-qubit gates, so a shape of size `s` succeeds with
    /// probability `(1 - eps)^s`.
    pub fn uniform(eps: f64) -> Result<Self> {
        Self::new(eps, eps, 0.0, 0.0)
    }

    /// Uniform rates where the final readout of each qubit is one more slot
    /// failing with probability `eps`.
    pub fn uniform_with_measurement(eps: f64) -> Result<Self> {
        Self::new(eps, eps, eps, 0.0)
    }

    pub fn noiseless() -> Self {
        Self {
            eps_1q: 0.0,
            eps_2q: 0.0,
            eps_meas: 0.0,
            two_qubit_density: 0.0,
        }
    }

    pub fn eps_1q(&self) -> f64 {
        self.eps_1q
    }

    pub fn eps_2q(&self) -> f64 {
        self.eps_2q
    }

    pub fn eps_meas(&self) -> f64 {
        self.eps_meas
    }

    pub fn two_qubit_density(&self) -> f64 {
        self.two_qubit_density
    }

    /// Number of qubits sitting in two-qubit gates in a layer of `width`
    /// qubits, `round(zeta * width)`. Fails when that count is odd.
    pub fn paired_qubits(&self, width: u64) -> Result<u64> {
        paired_qubit_count(width, self.two_qubit_density)
    }

    pub fn eps_is_zero(&self) -> bool {
        self.eps_1q == 0.0 && self.eps_2q == 0.0 && self.eps_meas == 0.0
    }

    /// Short provenance string, e.g. `eps1q=0.001 eps2q=0.001 epsmeas=0 zeta=0`.
    pub fn describe(&self) -> String {
        format!(
            "eps1q={} eps2q={} epsmeas={} zeta={}",
            self.eps_1q, self.eps_2q, self.eps_meas, self.two_qubit_density
        )
    }
}

pub(crate) fn paired_qubit_count(width: u64, zeta: f64) -> Result<u64> {
    let paired = (zeta * width as f64).round() as u64;
    if paired % 2 == 1 {
        return Err(Error::PairingInfeasible {
            width,
            zeta,
            paired,
        });
    }
    Ok(paired.min(width))
}

/// Threshold and grid settings shared by every engine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AnalysisConfig {
    pub threshold: f64,
    pub include_measurement: bool,
    pub width_max: u64,
    pub depth_max: u64,
    pub depth_grid: Vec<u64>,
}

impl Default for AnalysisConfig {
    fn default() -> Self {
        let depth_max = 1_000_000_000_000;
        Self {
            threshold: INV_E,
            include_measurement: true,
            width_max: 10_000,
            depth_max,
            depth_grid: default_depth_grid(depth_max),
        }
    }
}

impl AnalysisConfig {
    pub fn validate(&self) -> Result<()> {
        if !(self.threshold > 0.0 && self.threshold < 1.0) {
            return Err(Error::out_of_range("threshold", self.threshold, "(0, 1)"));
        }
        if self.width_max == 0 {
            return Err(Error::Config("width_max must be >= 1".into()));
        }
        if self.depth_max == 0 {
            return Err(Error::Config("depth_max must be >= 1".into()));
        }
        if self.depth_grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Config(
                "depth_grid must be strictly ascending".into(),
            ));
        }
        if let Some(&last) = self.depth_grid.last() {
            if last > self.depth_max {
                return Err(Error::Config(format!(
                    "depth_grid entry {last} exceeds depth_max {}",
                    self.depth_max
                )));
            }
        }
        if self.depth_grid.first() == Some(&0) {
            return Err(Error::Config("depth_grid entries must be >= 1".into()));
        }
        Ok(())
    }

    /// Copy with measurement excluded from the error budget.
    pub fn without_measurement(&self) -> Self {
        Self {
            include_measurement: false,
            ..self.clone()
        }
    }
}

/// Every power of 2 and every power of 10 up to `depth_max`, ascending.
pub fn default_depth_grid(depth_max: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    for base in [2u64, 10] {
        let mut d = 1u64;
        while d <= depth_max {
            grid.push(d);
            match d.checked_mul(base) {
                Some(next) => d = next,
                None => break,
            }
        }
    }
    grid.sort_unstable();
    grid.dedup();
    grid
}

/// `ln` of the probability that one layer of `width` qubits runs without error.
pub fn ln_layer_success(width: u64, rates: &ErrorRates) -> Result<f64> {
    let paired = rates.paired_qubits(width)?;
    let single = width - paired;
    Ok(single as f64 * (-rates.eps_1q).ln_1p() + (paired / 2) as f64 * (-rates.eps_2q).ln_1p())
}

/// Probability that one layer of `width` qubits runs without error:
/// `(1 - eps_1q)^n1 * (1 - eps_2q)^(n2 / 2)`.
pub fn layer_success_prob(width: u64, rates: &ErrorRates) -> Result<f64> {
    ln_layer_success(width, rates).map(f64::exp)
}

fn ln_measurement(width: u64, rates: &ErrorRates, config: &AnalysisConfig) -> f64 {
    if config.include_measurement {
        width as f64 * (-rates.eps_meas).ln_1p()
    } else {
        0.0
    }
}

/// `ln` of [`success_probability`].
pub fn ln_success_probability(
    shape: ProgramShape,
    rates: &ErrorRates,
    config: &AnalysisConfig,
) -> Result<f64> {
    let layer = ln_layer_success(shape.width(), rates)?;
    Ok(shape.depth() as f64 * layer + ln_measurement(shape.width(), rates, config))
}

/// Probability that `shape` runs with no error at all.
pub fn success_probability(
    shape: ProgramShape,
    rates: &ErrorRates,
    config: &AnalysisConfig,
) -> Result<f64> {
    ln_success_probability(shape, rates, config).map(f64::exp)
}

/// Largest `d` in `0..=depth_max` with `passes(d)`, starting from a closed-form
/// `estimate` that is off by at most a rounding step. `passes` must be
/// monotone: true up to some depth and false after it.
pub(crate) fn refine_depth(estimate: f64, depth_max: u64, passes: impl Fn(u64) -> bool) -> u64 {
    let mut d = if estimate.is_nan() || estimate < 0.0 {
        0
    } else if estimate >= depth_max as f64 {
        depth_max
    } else {
        estimate.floor() as u64
    };
    while d < depth_max && passes(d + 1) {
        d += 1;
    }
    while d > 0 && !passes(d) {
        d -= 1;
    }
    d
}

/// Largest depth `d <= depth_max` with `success_probability((width, d)) >= threshold`,
/// or 0 when even depth 1 fails.
pub fn max_reliable_depth(width: u64, rates: &ErrorRates, config: &AnalysisConfig) -> Result<u64> {
    ProgramShape::new(width, 1)?;
    let layer = ln_layer_success(width, rates)?;
    let meas = ln_measurement(width, rates, config);
    let tau = config.threshold;
    let passes = |d: u64| (d as f64 * layer + meas).exp() >= tau;
    let estimate = if layer == 0.0 {
        if meas >= tau.ln() {
            f64::INFINITY
        } else {
            0.0
        }
    } else {
        (tau.ln() - meas) / layer
    };
    Ok(refine_depth(estimate, config.depth_max, passes))
}

/// Analytic capability region: the maximum reliable depth at every width in
/// `1..=width_max`. Widths whose two-qubit pairing is infeasible are skipped.
pub fn capability_frontier(
    rates: &ErrorRates,
    config: &AnalysisConfig,
) -> Result<CapabilityRegion> {
    config.validate()?;
    let label = format!("analytic {} tau={}", rates.describe(), config.threshold);
    let mut region = CapabilityRegion::new(label, RegionSource::Analytic, config.threshold);
    let mut skipped = 0u64;
    for width in 1..=config.width_max {
        match max_reliable_depth(width, rates, config) {
            Ok(depth) => region.insert(width, FrontierPoint::depth(depth)),
            Err(Error::PairingInfeasible { .. }) => skipped += 1,
            Err(e) => return Err(e),
        }
    }
    if skipped > 0 {
        region.warnings.push(format!(
            "{skipped} widths skipped: two-qubit pairing infeasible at zeta={}",
            rates.two_qubit_density()
        ));
    }
    region.metadata.insert("rates".into(), rates.describe());
    region
        .metadata
        .insert("threshold".into(), config.threshold.to_string());
    region.metadata.insert(
        "include_measurement".into(),
        config.include_measurement.to_string(),
    );
    Ok(region)
}

/// Largest per-slot error rate `eps` for which `shape` still meets the
/// threshold in uniform mode: `1 - exp(ln(tau) / s_eff)`, where `s_eff` adds
/// one readout slot per qubit when measurement is included.
pub fn required_error_rate(shape: ProgramShape, config: &AnalysisConfig) -> Result<f64> {
    config.validate()?;
    let mut slots = shape.quops()?;
    if config.include_measurement {
        slots = slots
            .checked_add(shape.width())
            .ok_or(Error::Overflow("slot count"))?;
    }
    Ok(-(config.threshold.ln() / slots as f64).exp_m1())
}
