use std::fmt;
use std::path::{Path, PathBuf};

use qcap_core::atlas::scenario::{OutputFormat, RatesSection};
use qcap_core::atlas::{parse_scenario, ScenarioConfig, ScenarioError};
use qcap_core::quop::default_depth_grid;

use crate::cli::{BenchFlags, Common, FormatArg, MitigationFlags, QecFlags};

pub const SCENARIO_DIR_ENV: &str = "QCAP_SCENARIO_DIR";

/// Failure classes with distinct exit codes.
#[derive(Debug)]
pub enum Failure {
    /// Bad flags, scenario or parameter domain: exit 2.
    Config(String),
    /// Anything else: exit 1.
    Runtime(anyhow::Error),
}

impl Failure {
    pub fn exit_code(&self) -> i32 {
        match self {
            Failure::Config(_) => 2,
            Failure::Runtime(_) => 1,
        }
    }
}

impl fmt::Display for Failure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Failure::Config(msg) => write!(f, "config error: {msg}"),
            Failure::Runtime(e) => write!(f, "error: {e:#}"),
        }
    }
}

impl From<ScenarioError> for Failure {
    fn from(e: ScenarioError) -> Self {
        Failure::Config(e.to_string())
    }
}

impl From<qcap_core::Error> for Failure {
    fn from(e: qcap_core::Error) -> Self {
        match e {
            qcap_core::Error::Overflow(_) => Failure::Runtime(e.into()),
            e => Failure::Config(e.to_string()),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Runtime(e.into())
    }
}

pub type CliResult<T> = Result<T, Failure>;

fn resolve_path(path: &Path) -> PathBuf {
    if path.exists() || path.is_absolute() {
        return path.to_path_buf();
    }
    match std::env::var_os(SCENARIO_DIR_ENV) {
        Some(dir) => Path::new(&dir).join(path),
        None => path.to_path_buf(),
    }
}

/// A resolved scenario plus the rate sets requested with repeated `--eps`.
#[derive(Debug, Clone)]
pub struct Loaded {
    pub config: ScenarioConfig,
    pub rate_sets: Vec<RatesSection>,
}

impl Loaded {
    /// Resolved TOML with a comment header, embedded in every artifact.
    pub fn provenance(&self, command: &str) -> String {
        let mut out = format!("# qcap {} {command}\n", env!("CARGO_PKG_VERSION"));
        if self.rate_sets.len() > 1 {
            let eps: Vec<String> = self
                .rate_sets
                .iter()
                .map(|r| r.eps_1q.to_string())
                .collect();
            out += &format!("# rate sets: eps = [{}]\n", eps.join(", "));
        }
        out + &self.config.to_toml()
    }

    pub fn wants(&self, format: OutputFormat) -> bool {
        self.config.output.formats.contains(&format)
    }
}

#[derive(Default)]
pub struct Overrides<'a> {
    pub bench: Option<&'a BenchFlags>,
    pub mitigation: Option<&'a MitigationFlags>,
    pub qec: Option<&'a QecFlags>,
}

/// Scenario file (or defaults), then flag overrides, then validation.
pub fn load(common: &Common, overrides: Overrides<'_>) -> CliResult<Loaded> {
    let mut config = match &common.scenario {
        Some(path) => {
            let path = resolve_path(path);
            let text = std::fs::read_to_string(&path)
                .map_err(|e| Failure::Config(format!("cannot read {}: {e}", path.display())))?;
            parse_scenario(&text)
                .map_err(|e| Failure::Config(format!("{}: {e}", path.display())))?
        }
        None => parse_scenario("")?,
    };

    if let Some(&eps) = common.eps.first() {
        config.rates.eps_1q = eps;
        config.rates.eps_2q = Some(eps);
    }
    if let Some(v) = common.eps_2q {
        config.rates.eps_2q = Some(v);
    }
    if let Some(v) = common.eps_meas {
        config.rates.eps_meas = v;
    }
    if let Some(v) = common.zeta {
        config.rates.zeta = v;
    }

    let a = &mut config.analysis;
    if let Some(v) = common.threshold {
        a.threshold = v;
    }
    if let Some(v) = common.width_max {
        a.width_max = v;
    }
    if let Some(v) = common.depth_max {
        if a.depth_grid.as_deref() == Some(&default_depth_grid(a.depth_max)) {
            a.depth_grid = Some(default_depth_grid(v));
        }
        a.depth_max = v;
    }
    if let Some(v) = common.include_measurement {
        a.include_measurement = v;
    }

    if let Some(out) = &common.out {
        config.output.dir = out.to_string_lossy().into_owned();
    }
    if let Some(f) = common.format {
        config.output.formats = match f {
            FormatArg::Csv => vec![OutputFormat::Csv],
            FormatArg::Svg => vec![OutputFormat::Svg],
            FormatArg::Both => vec![OutputFormat::Csv, OutputFormat::Svg],
        };
    }
    if let Some(stem) = &common.stem {
        config.output.stem = Some(stem.clone());
    }

    if let Some(b) = overrides.bench {
        let s = &mut config.benchmark;
        if let Some(v) = b.shots {
            s.shots = v;
        }
        if let Some(v) = b.seed {
            s.seed = v;
        }
        if let Some(v) = b.n_circuits {
            s.n_circuits = v;
        }
        if let Some(v) = &b.widths {
            s.widths = v.clone();
        }
        if let Some(v) = b.bench_depth_max {
            s.depth_max = v;
        }
        s.allow_long |= b.allow_long;
    }
    if let Some(m) = overrides.mitigation {
        let s = &mut config.mitigation;
        if !m.budget.is_empty() {
            s.budgets = m.budget.clone();
        }
        if let Some(v) = m.overhead_exponent {
            s.overhead_exponent = v;
        }
        if let Some(v) = m.base_shots {
            s.base_shots = v;
        }
    }
    if let Some(q) = overrides.qec {
        let s = &mut config.qec;
        if !q.physical_qubits.is_empty() {
            s.budgets_physical_qubits = q.physical_qubits.clone();
        }
        if let Some(v) = q.p {
            s.p = v;
        }
        if let Some(v) = q.p_th {
            s.p_th = v;
        }
        if let Some(v) = q.prefactor {
            s.prefactor = v;
        }
        if let Some(v) = q.qubits_per_logical_factor {
            s.qubits_per_logical_factor = v;
        }
        if let Some(v) = q.distances_max {
            s.distances_max = v;
        }
        if let Some(v) = q.cycle_time {
            s.cycle_time = v;
        }
    }

    config.resolve();
    config.validate()?;

    let rate_sets = if common.eps.len() > 1 {
        let mut sets = Vec::new();
        for &eps in &common.eps {
            let mut probe = config.clone();
            probe.rates.eps_1q = eps;
            probe.rates.eps_2q = Some(common.eps_2q.unwrap_or(eps));
            probe.validate()?;
            sets.push(probe.rates);
        }
        sets
    } else {
        vec![config.rates.clone()]
    };
    Ok(Loaded { config, rate_sets })
}
