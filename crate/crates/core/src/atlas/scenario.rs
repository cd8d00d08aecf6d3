//! Scenario files.
//!
//! Scenarios are TOML documents with the sections `rates`, `analysis`,
//! `benchmark`, `mitigation`, `qec`, `atlas` and `output`. Every key is
//! optional and unknown keys are rejected. The full schema with defaults is
//! documented in `docs/scenario.md`; [`ScenarioConfig::to_toml`] emits the
//! resolved form, which parses back to an equal config.

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::bench::ShotPlan;
use crate::mitigation::MitigationModel;
use crate::qec::SurfaceCodeModel;
use crate::quop::default_depth_grid;
use crate::{AnalysisConfig, ErrorRates};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ScenarioError {
    #[error("syntax error at line {line}, column {column}: {message}")]
    Syntax {
        line: usize,
        column: usize,
        message: String,
    },

    #[error("unknown key `{key}`{}", suggestion.as_ref().map(|s| format!(", did you mean `{s}`?")).unwrap_or_default())]
    UnknownKey {
        key: String,
        suggestion: Option<String>,
    },

    #[error("{key} = {value} is outside {bound}")]
    Domain {
        key: String,
        value: String,
        bound: String,
    },

    #[error("invalid scenario: {0}")]
    Invalid(String),
}

fn domain(key: &str, value: impl ToString, bound: &str) -> ScenarioError {
    ScenarioError::Domain {
        key: key.to_string(),
        value: value.to_string(),
        bound: bound.to_string(),
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct RatesSection {
    pub eps_1q: f64,
    /// Defaults to `eps_1q`.
    pub eps_2q: Option<f64>,
    pub eps_meas: f64,
    pub zeta: f64,
}

impl Default for RatesSection {
    fn default() -> Self {
        Self {
            eps_1q: 1e-3,
            eps_2q: None,
            eps_meas: 0.0,
            zeta: 0.0,
        }
    }
}

impl RatesSection {
    pub fn uniform(eps: f64) -> Self {
        Self {
            eps_1q: eps,
            eps_2q: Some(eps),
            eps_meas: 0.0,
            zeta: 0.0,
        }
    }

    fn validate(&self, prefix: &str) -> Result<(), ScenarioError> {
        for (key, value) in [
            ("eps_1q", Some(self.eps_1q)),
            ("eps_2q", self.eps_2q),
            ("eps_meas", Some(self.eps_meas)),
        ] {
            if let Some(v) = value {
                if !(v.is_finite() && (0.0..1.0).contains(&v)) {
                    return Err(domain(&format!("{prefix}.{key}"), v, "[0, 1)"));
                }
            }
        }
        if !(self.zeta.is_finite() && (0.0..=1.0).contains(&self.zeta)) {
            return Err(domain(&format!("{prefix}.zeta"), self.zeta, "[0, 1]"));
        }
        Ok(())
    }

    pub fn error_rates(&self) -> ErrorRates {
        ErrorRates::new(
            self.eps_1q,
            self.eps_2q.unwrap_or(self.eps_1q),
            self.eps_meas,
            self.zeta,
        )
        .expect("validated rates")
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AnalysisSection {
    pub threshold: f64,
    pub include_measurement: bool,
    pub width_max: u64,
    pub depth_max: u64,
    /// Defaults to powers of 2 and 10 up to `depth_max`.
    pub depth_grid: Option<Vec<u64>>,
}

impl Default for AnalysisSection {
    fn default() -> Self {
        let cfg = AnalysisConfig::default();
        Self {
            threshold: cfg.threshold,
            include_measurement: cfg.include_measurement,
            width_max: cfg.width_max,
            depth_max: cfg.depth_max,
            depth_grid: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct BenchmarkSection {
    pub shots: u64,
    pub n_circuits: u64,
    pub seed: u64,
    pub widths: Vec<u64>,
    pub depth_max: u64,
    pub allow_long: bool,
}

impl Default for BenchmarkSection {
    fn default() -> Self {
        Self {
            shots: 10_000,
            n_circuits: 10,
            seed: 1,
            widths: vec![1, 2, 4, 8],
            depth_max: 64,
            allow_long: false,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct MitigationSection {
    pub overhead_exponent: f64,
    pub base_shots: u64,
    pub budgets: Vec<u64>,
}

impl Default for MitigationSection {
    fn default() -> Self {
        Self {
            overhead_exponent: MitigationModel::DEFAULT_OVERHEAD_EXPONENT,
            base_shots: MitigationModel::DEFAULT_BASE_SHOTS,
            budgets: vec![100_000, 10_000_000, 1_000_000_000],
        }
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct QecSection {
    pub p: f64,
    pub p_th: f64,
    pub prefactor: f64,
    pub qubits_per_logical_factor: u64,
    pub distances_max: u64,
    pub budgets_physical_qubits: Vec<u64>,
    pub cycle_time: f64,
}

impl Default for QecSection {
    fn default() -> Self {
        let m = SurfaceCodeModel::default();
        Self {
            p: 1e-3,
            p_th: m.threshold,
            prefactor: m.prefactor,
            qubits_per_logical_factor: m.qubits_per_logical_factor,
            distances_max: m.max_distance,
            budgets_physical_qubits: vec![10_000, 100_000, 1_000_000],
            cycle_time: m.cycle_time,
        }
    }
}

/// A named rate set for the empirical atlas panel. Unknown keys are caught
/// by the key check in [`parse_scenario`], since serde cannot combine
/// `flatten` with `deny_unknown_fields`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DeviceProfile {
    pub label: String,
    #[serde(flatten)]
    pub rates: RatesSection,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct AtlasSection {
    pub analytic_eps: Vec<f64>,
    pub mitigation_eps: f64,
    pub teraquop_guide: bool,
    pub devices: Vec<DeviceProfile>,
}

impl Default for AtlasSection {
    fn default() -> Self {
        Self {
            analytic_eps: vec![1e-3, 1e-4, 1e-5],
            mitigation_eps: 1e-3,
            teraquop_guide: true,
            devices: vec![
                DeviceProfile {
                    label: "illustrative device A".into(),
                    rates: RatesSection {
                        eps_1q: 1e-3,
                        eps_2q: Some(1e-2),
                        eps_meas: 1e-2,
                        zeta: 1.0,
                    },
                },
                DeviceProfile {
                    label: "illustrative device B".into(),
                    rates: RatesSection {
                        eps_1q: 2e-4,
                        eps_2q: Some(2e-3),
                        eps_meas: 3e-3,
                        zeta: 1.0,
                    },
                },
            ],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum OutputFormat {
    Csv,
    Svg,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct OutputSection {
    pub formats: Vec<OutputFormat>,
    pub dir: String,
    /// File stem; defaults to the command name.
    pub stem: Option<String>,
}

impl Default for OutputSection {
    fn default() -> Self {
        Self {
            formats: vec![OutputFormat::Csv, OutputFormat::Svg],
            dir: ".".into(),
            stem: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq, Default, Serialize, Deserialize)]
#[serde(default, deny_unknown_fields)]
pub struct ScenarioConfig {
    pub rates: RatesSection,
    pub analysis: AnalysisSection,
    pub benchmark: BenchmarkSection,
    pub mitigation: MitigationSection,
    pub qec: QecSection,
    pub atlas: AtlasSection,
    pub output: OutputSection,
}

const SECTION_KEYS: &[(&str, &[&str])] = &[
    ("rates", &["eps_1q", "eps_2q", "eps_meas", "zeta"]),
    (
        "analysis",
        &[
            "threshold",
            "include_measurement",
            "width_max",
            "depth_max",
            "depth_grid",
        ],
    ),
    (
        "benchmark",
        &[
            "shots",
            "n_circuits",
            "seed",
            "widths",
            "depth_max",
            "allow_long",
        ],
    ),
    (
        "mitigation",
        &["overhead_exponent", "base_shots", "budgets"],
    ),
    (
        "qec",
        &[
            "p",
            "p_th",
            "prefactor",
            "qubits_per_logical_factor",
            "distances_max",
            "budgets_physical_qubits",
            "cycle_time",
        ],
    ),
    (
        "atlas",
        &[
            "analytic_eps",
            "mitigation_eps",
            "teraquop_guide",
            "devices",
        ],
    ),
    ("output", &["formats", "dir", "stem"]),
];

const DEVICE_KEYS: &[&str] = &["label", "eps_1q", "eps_2q", "eps_meas", "zeta"];

fn unknown(key: String, candidates: impl IntoIterator<Item = String>) -> ScenarioError {
    let leaf = key.rsplit('.').next().unwrap_or(&key).to_string();
    let suggestion = candidates
        .into_iter()
        .map(|c| {
            let c_leaf = c.rsplit('.').next().unwrap_or(&c).to_string();
            (strsim::levenshtein(&leaf, &c_leaf), c)
        })
        .filter(|(dist, _)| *dist <= 3)
        .min()
        .map(|(_, c)| c);
    ScenarioError::UnknownKey { key, suggestion }
}

fn check_keys(doc: &toml::Table) -> Result<(), ScenarioError> {
    for (section, value) in doc {
        let Some(&(_, keys)) = SECTION_KEYS.iter().find(|(s, _)| s == section) else {
            return Err(unknown(
                section.clone(),
                SECTION_KEYS.iter().map(|(s, _)| s.to_string()),
            ));
        };
        let Some(table) = value.as_table() else {
            continue;
        };
        for (key, inner) in table {
            if !keys.contains(&key.as_str()) {
                return Err(unknown(
                    format!("{section}.{key}"),
                    keys.iter().map(|k| format!("{section}.{k}")),
                ));
            }
            if section == "atlas" && key == "devices" {
                for device in inner.as_array().into_iter().flatten() {
                    for field in device.as_table().into_iter().flat_map(|t| t.keys()) {
                        if !DEVICE_KEYS.contains(&field.as_str()) {
                            return Err(unknown(
                                format!("atlas.devices.{field}"),
                                DEVICE_KEYS.iter().map(|k| format!("atlas.devices.{k}")),
                            ));
                        }
                    }
                }
            }
        }
    }
    Ok(())
}

fn line_column(text: &str, offset: usize) -> (usize, usize) {
    let offset = offset.min(text.len());
    let before = &text[..offset];
    let line = before.matches('\n').count() + 1;
    let column = before.rsplit('\n').next().map_or(0, |l| l.chars().count()) + 1;
    (line, column)
}

fn syntax(text: &str, err: &toml::de::Error) -> ScenarioError {
    let (line, column) = err.span().map_or((1, 1), |s| line_column(text, s.start));
    ScenarioError::Syntax {
        line,
        column,
        message: err.message().trim().to_string(),
    }
}

/// Parses, defaults and validates a scenario document.
pub fn parse_scenario(text: &str) -> Result<ScenarioConfig, ScenarioError> {
    let doc: toml::Table = text.parse().map_err(|e| syntax(text, &e))?;
    check_keys(&doc)?;
    let mut config: ScenarioConfig = toml::from_str(text).map_err(|e| syntax(text, &e))?;
    config.resolve();
    config.validate()?;
    Ok(config)
}

impl ScenarioConfig {
    /// Fills defaults that depend on other fields.
    pub fn resolve(&mut self) {
        self.rates.eps_2q.get_or_insert(self.rates.eps_1q);
        for device in &mut self.atlas.devices {
            device.rates.eps_2q.get_or_insert(device.rates.eps_1q);
        }
        if self.analysis.depth_grid.is_none() {
            self.analysis.depth_grid = Some(default_depth_grid(self.analysis.depth_max));
        }
    }

    pub fn validate(&self) -> Result<(), ScenarioError> {
        self.rates.validate("rates")?;

        let a = &self.analysis;
        if !(a.threshold > 0.0 && a.threshold < 1.0) {
            return Err(domain("analysis.threshold", a.threshold, "(0, 1)"));
        }
        if a.width_max == 0 {
            return Err(domain("analysis.width_max", 0, "[1, inf)"));
        }
        if a.depth_max == 0 {
            return Err(domain("analysis.depth_max", 0, "[1, inf)"));
        }
        let grid = a.depth_grid.as_deref().unwrap_or_default();
        if grid.first() == Some(&0) || grid.windows(2).any(|w| w[0] >= w[1]) {
            return Err(ScenarioError::Invalid(
                "analysis.depth_grid must be strictly ascending positive depths".into(),
            ));
        }
        if let Some(&last) = grid.last() {
            if last > a.depth_max {
                return Err(domain(
                    "analysis.depth_grid",
                    last,
                    "[1, analysis.depth_max]",
                ));
            }
        }

        let b = &self.benchmark;
        if b.n_circuits == 0 {
            return Err(domain("benchmark.n_circuits", 0, "[1, inf)"));
        }
        if b.shots < b.n_circuits {
            return Err(domain(
                "benchmark.shots",
                b.shots,
                "[benchmark.n_circuits, inf)",
            ));
        }
        if b.widths.is_empty() || b.widths.contains(&0) {
            return Err(ScenarioError::Invalid(
                "benchmark.widths must list at least one width >= 1".into(),
            ));
        }
        if b.depth_max < 2 {
            return Err(domain("benchmark.depth_max", b.depth_max, "[2, inf)"));
        }

        let m = &self.mitigation;
        if !(m.overhead_exponent.is_finite() && m.overhead_exponent > 0.0) {
            return Err(domain(
                "mitigation.overhead_exponent",
                m.overhead_exponent,
                "(0, inf)",
            ));
        }
        if m.base_shots == 0 {
            return Err(domain("mitigation.base_shots", 0, "[1, inf)"));
        }
        if m.budgets.contains(&0) {
            return Err(domain("mitigation.budgets", 0, "[1, inf)"));
        }

        let q = &self.qec;
        if !(q.p_th > 0.0 && q.p_th < 1.0) {
            return Err(domain("qec.p_th", q.p_th, "(0, 1)"));
        }
        if !(q.p > 0.0 && q.p < q.p_th) {
            return Err(ScenarioError::Domain {
                key: "qec.p".into(),
                value: q.p.to_string(),
                bound: format!("(0, p_th = {}): above threshold, no suppression", q.p_th),
            });
        }
        if !(q.prefactor.is_finite() && q.prefactor > 0.0) {
            return Err(domain("qec.prefactor", q.prefactor, "(0, inf)"));
        }
        if q.qubits_per_logical_factor == 0 {
            return Err(domain("qec.qubits_per_logical_factor", 0, "[1, inf)"));
        }
        if q.distances_max < 3 || q.distances_max.is_multiple_of(2) {
            return Err(domain(
                "qec.distances_max",
                q.distances_max,
                "odd integers >= 3",
            ));
        }
        if !(q.cycle_time.is_finite() && q.cycle_time > 0.0) {
            return Err(domain("qec.cycle_time", q.cycle_time, "(0, inf)"));
        }

        for &eps in &self.atlas.analytic_eps {
            if !(eps.is_finite() && (0.0..1.0).contains(&eps)) {
                return Err(domain("atlas.analytic_eps", eps, "[0, 1)"));
            }
        }
        let eps = self.atlas.mitigation_eps;
        if !(eps.is_finite() && (0.0..1.0).contains(&eps)) {
            return Err(domain("atlas.mitigation_eps", eps, "[0, 1)"));
        }
        for device in &self.atlas.devices {
            device.rates.validate("atlas.devices")?;
        }
        Ok(())
    }

    /// Resolved document; reparses to an equal config.
    pub fn to_toml(&self) -> String {
        toml::to_string(self).expect("scenario serializes to TOML")
    }

    pub fn error_rates(&self) -> ErrorRates {
        self.rates.error_rates()
    }

    pub fn analysis_config(&self) -> AnalysisConfig {
        let a = &self.analysis;
        AnalysisConfig {
            threshold: a.threshold,
            include_measurement: a.include_measurement,
            width_max: a.width_max,
            depth_max: a.depth_max,
            depth_grid: a
                .depth_grid
                .clone()
                .unwrap_or_else(|| default_depth_grid(a.depth_max)),
        }
    }

    /// Analysis settings restricted to the benchmark's depth cap.
    pub fn benchmark_config(&self) -> AnalysisConfig {
        let mut cfg = self.analysis_config();
        cfg.depth_max = self.benchmark.depth_max.min(cfg.depth_max);
        cfg.depth_grid.retain(|&d| d <= cfg.depth_max);
        cfg
    }

    pub fn shot_plan(&self) -> ShotPlan {
        ShotPlan {
            shots: self.benchmark.shots,
            n_circuits: self.benchmark.n_circuits,
            seed: self.benchmark.seed,
        }
    }

    pub fn mitigation_models(&self) -> Vec<MitigationModel> {
        let m = &self.mitigation;
        m.budgets
            .iter()
            .map(|&shot_budget| MitigationModel {
                overhead_exponent: m.overhead_exponent,
                base_shots: m.base_shots,
                shot_budget,
            })
            .collect()
    }

    pub fn surface_code_model(&self) -> SurfaceCodeModel {
        let q = &self.qec;
        SurfaceCodeModel {
            threshold: q.p_th,
            prefactor: q.prefactor,
            qubits_per_logical_factor: q.qubits_per_logical_factor,
            max_distance: q.distances_max,
            cycle_time: q.cycle_time,
        }
    }
}
