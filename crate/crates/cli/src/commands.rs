use qcap_core::atlas::scenario::OutputFormat;
use qcap_core::atlas::{emit_cells_csv, emit_csv, render_svg, Marker, RegionTable, SvgStyle};
use qcap_core::bench::{benchmark_depths, measure_capability, SuccessEstimate};
use qcap_core::mitigation::mitigated_frontier;
use qcap_core::qec::{plan_for_target, qec_capability_region, sensitivity_scan, SensitivityGrid};
use qcap_core::quop::capability_frontier;
use qcap_core::{CapabilityRegion, ErrorRates, ProgramShape};
use serde_json::{json, Value};

use crate::config::{CliResult, Failure, Loaded};
use crate::output::{Artifacts, Log};

/// Benchmark work limit in qubit-layer-shots, `shots * sum(widths) * sum(depths)`,
/// above which `--allow-long` is required.
pub const BENCHMARK_COST_CAP: u64 = 2_000_000_000;

/// What a command produced, before anything touches the disk.
#[derive(Debug, Default)]
pub struct Outcome {
    pub artifacts: Artifacts,
    pub regions: Vec<CapabilityRegion>,
    /// Printed to stdout as JSON regardless of `--quiet` (plan and sensitivity modes).
    pub report: Option<Value>,
}

fn decade_ceiling(x: f64) -> f64 {
    10f64.powf(x.max(10.0).log10().ceil())
}

fn style(
    loaded: &Loaded,
    command: &str,
    title: &str,
    widths: (f64, f64),
    depths: (f64, f64),
) -> SvgStyle {
    SvgStyle {
        width_range: widths,
        depth_range: depths,
        title: Some(title.into()),
        teraquop_guide: loaded.config.atlas.teraquop_guide,
        metadata: Some(loaded.provenance(command)),
        ..SvgStyle::default()
    }
}

fn analytic_axes(loaded: &Loaded) -> ((f64, f64), (f64, f64)) {
    let a = &loaded.config.analysis;
    (
        (1.0, decade_ceiling(a.width_max as f64)),
        (1.0, decade_ceiling(a.depth_max as f64)),
    )
}

fn stem<'a>(loaded: &'a Loaded, default: &'a str) -> &'a str {
    loaded.config.output.stem.as_deref().unwrap_or(default)
}

fn warn_all(log: &Log, regions: &[CapabilityRegion]) {
    for r in regions {
        for w in &r.warnings {
            log.warn(format!("{}: {w}", r.label));
        }
    }
}

fn emit_regions(
    outcome: &mut Outcome,
    loaded: &Loaded,
    command: &str,
    file_stem: &str,
    style: SvgStyle,
) -> CliResult<()> {
    if loaded.wants(OutputFormat::Csv) {
        let table = RegionTable::from_regions(&outcome.regions);
        outcome.artifacts.add(
            format!("{file_stem}.csv"),
            emit_csv(&[table], Some(&loaded.provenance(command))),
        );
    }
    if loaded.wants(OutputFormat::Svg) && !outcome.regions.is_empty() {
        outcome.artifacts.add(
            format!("{file_stem}.svg"),
            render_svg(&outcome.regions, &style)?,
        );
    }
    Ok(())
}

pub fn frontier(loaded: &Loaded, log: &Log) -> CliResult<Outcome> {
    let cfg = loaded.config.analysis_config();
    let mut outcome = Outcome::default();
    for rates in &loaded.rate_sets {
        let region = capability_frontier(&rates.error_rates(), &cfg)?;
        log.debug(format!(
            "{}: max quops {}",
            region.label,
            region.max_quops()
        ));
        outcome.regions.push(region);
    }
    warn_all(log, &outcome.regions);
    let (w, d) = analytic_axes(loaded);
    let style = style(loaded, "frontier", "analytic capability regions", w, d);
    emit_regions(
        &mut outcome,
        loaded,
        "frontier",
        stem(loaded, "frontier"),
        style,
    )?;
    Ok(outcome)
}

fn benchmark_regions(
    loaded: &Loaded,
    rate_sets: &[(String, ErrorRates)],
    log: &Log,
) -> CliResult<(Vec<CapabilityRegion>, Vec<SuccessEstimate>)> {
    let b = &loaded.config.benchmark;
    let cfg = loaded.config.benchmark_config();
    let depths = benchmark_depths(&cfg);
    if depths.is_empty() {
        return Err(Failure::Config(
            "no even depth of analysis.depth_grid lies within benchmark.depth_max".into(),
        ));
    }
    let cost = (b.shots as u128)
        * b.widths.iter().map(|&w| w as u128).sum::<u128>()
        * depths.iter().map(|&d| d as u128).sum::<u128>()
        * rate_sets.len() as u128;
    if cost > BENCHMARK_COST_CAP as u128 && !b.allow_long {
        return Err(Failure::Config(format!(
            "benchmark grid needs up to {cost} qubit-layer-shots (cap {BENCHMARK_COST_CAP}); \
             shrink shots/widths/depths or pass --allow-long"
        )));
    }
    let plan = loaded.config.shot_plan();
    let mut regions = Vec::new();
    let mut cells = Vec::new();
    for (i, (name, rates)) in rate_sets.iter().enumerate() {
        let run = measure_capability(rates, &cfg, &b.widths, &plan)?;
        log.debug(format!(
            "[{}/{}] {}: {} cells",
            i + 1,
            rate_sets.len(),
            run.region.label,
            run.cells.len()
        ));
        let mut region = run.region;
        if !name.is_empty() {
            region.label = format!("{name}: {}", region.label);
        }
        regions.push(region);
        cells.extend(run.cells);
    }
    Ok((regions, cells))
}

fn benchmark_axes(loaded: &Loaded) -> ((f64, f64), (f64, f64)) {
    let b = &loaded.config.benchmark;
    let w_max = b.widths.iter().copied().max().unwrap_or(1) + 1;
    let d_max = b.depth_max.min(loaded.config.analysis.depth_max);
    (
        (1.0, decade_ceiling(w_max as f64)),
        (1.0, decade_ceiling(d_max as f64)),
    )
}

pub fn benchmark(loaded: &Loaded, log: &Log) -> CliResult<Outcome> {
    let sets: Vec<(String, ErrorRates)> = loaded
        .rate_sets
        .iter()
        .map(|r| (String::new(), r.error_rates()))
        .collect();
    let (regions, cells) = benchmark_regions(loaded, &sets, log)?;
    let mut outcome = Outcome {
        regions,
        ..Outcome::default()
    };
    warn_all(log, &outcome.regions);
    let file_stem = stem(loaded, "benchmark");
    if loaded.wants(OutputFormat::Csv) {
        outcome.artifacts.add(
            format!("{file_stem}_cells.csv"),
            emit_cells_csv(&cells, Some(&loaded.provenance("benchmark"))),
        );
    }
    let (w, d) = benchmark_axes(loaded);
    let style = style(loaded, "benchmark", "empirical capability regions", w, d);
    emit_regions(&mut outcome, loaded, "benchmark", file_stem, style)?;
    Ok(outcome)
}

fn mitigation_regions(
    loaded: &Loaded,
    rates: &ErrorRates,
    log: &Log,
) -> CliResult<Vec<CapabilityRegion>> {
    let cfg = loaded.config.analysis_config();
    let mut regions = vec![capability_frontier(rates, &cfg)?];
    for model in loaded.config.mitigation_models() {
        let region = mitigated_frontier(rates, &model, &cfg)?;
        log.debug(format!(
            "{}: max quops {}",
            region.label,
            region.max_quops()
        ));
        regions.push(region);
    }
    Ok(regions)
}

pub fn mitigate(loaded: &Loaded, log: &Log) -> CliResult<Outcome> {
    let mut outcome = Outcome::default();
    for rates in &loaded.rate_sets {
        outcome
            .regions
            .extend(mitigation_regions(loaded, &rates.error_rates(), log)?);
    }
    warn_all(log, &outcome.regions);
    let (w, d) = analytic_axes(loaded);
    let style = style(loaded, "mitigate", "mitigated capability regions", w, d);
    emit_regions(
        &mut outcome,
        loaded,
        "mitigate",
        stem(loaded, "mitigate"),
        style,
    )?;
    Ok(outcome)
}

fn qec_regions(loaded: &Loaded, log: &Log) -> CliResult<Vec<CapabilityRegion>> {
    let cfg = loaded.config.analysis_config();
    let model = loaded.config.surface_code_model();
    let mut regions = Vec::new();
    for &budget in &loaded.config.qec.budgets_physical_qubits {
        let region = qec_capability_region(budget, loaded.config.qec.p, &model, &cfg)?;
        log.debug(format!(
            "{}: max quops {}",
            region.label,
            region.max_quops()
        ));
        regions.push(region);
    }
    Ok(regions)
}

pub fn qec(
    loaded: &Loaded,
    log: &Log,
    target: Option<(u64, u64)>,
    sensitivity: bool,
) -> CliResult<Outcome> {
    let cfg = loaded.config.analysis_config();
    let model = loaded.config.surface_code_model();
    let p = loaded.config.qec.p;
    if sensitivity {
        let (w, d) = target.unwrap_or((10_000, 100_000_000));
        let shape = ProgramShape::new(w, d)?;
        let budget = loaded
            .config
            .qec
            .budgets_physical_qubits
            .iter()
            .copied()
            .max()
            .unwrap_or(1_000_000);
        let rows = sensitivity_scan(shape, budget, &model, &SensitivityGrid::default(), &cfg)?;
        let fitting = rows.iter().filter(|r| r.fits_budget).count();
        return Ok(Outcome {
            report: Some(json!({
                "mode": "sensitivity",
                "width": w,
                "depth": d,
                "physical_qubit_budget": budget,
                "fitting": fitting,
                "rows": rows,
            })),
            ..Outcome::default()
        });
    }
    if let Some((w, d)) = target {
        let plan = plan_for_target(ProgramShape::new(w, d)?, p, &model, &cfg)?;
        return Ok(Outcome {
            report: Some(json!({
                "mode": "plan",
                "width": w,
                "depth": d,
                "p": p,
                "model": model.describe(),
                "required_rate": plan.required_rate,
                "d": plan.distance,
                "p_logical": plan.p_logical,
                "physical_qubits": plan.physical_qubits,
                "wall_clock": plan.wall_clock_seconds,
            })),
            ..Outcome::default()
        });
    }
    let mut outcome = Outcome {
        regions: qec_regions(loaded, log)?,
        ..Outcome::default()
    };
    warn_all(log, &outcome.regions);
    let (w, d) = analytic_axes(loaded);
    let style = style(
        loaded,
        "qec",
        "error-corrected capability regions (logical quops)",
        w,
        d,
    );
    emit_regions(&mut outcome, loaded, "qec", stem(loaded, "qec"), style)?;
    Ok(outcome)
}

/// Panels: (a) benchmarked device profiles, (b) analytic rates, (c) one rate
/// under several shot budgets, (d) QEC budgets. One CSV holds every region.
pub fn atlas(loaded: &Loaded, log: &Log) -> CliResult<Outcome> {
    let atlas = &loaded.config.atlas;
    let cfg = loaded.config.analysis_config();

    let devices: Vec<(String, ErrorRates)> = atlas
        .devices
        .iter()
        .map(|d| (d.label.clone(), d.rates.error_rates()))
        .collect();
    let (panel_a, _) = if devices.is_empty() {
        (Vec::new(), Vec::new())
    } else {
        benchmark_regions(loaded, &devices, log)?
    };
    let panel_b = atlas
        .analytic_eps
        .iter()
        .map(|&eps| capability_frontier(&ErrorRates::uniform(eps)?, &cfg))
        .collect::<Result<Vec<_>, _>>()?;
    let panel_c = mitigation_regions(loaded, &ErrorRates::uniform(atlas.mitigation_eps)?, log)?;
    let panel_d = qec_regions(loaded, log)?;

    let file_stem = stem(loaded, "atlas");
    let mut artifacts = Artifacts::default();
    let markers = if atlas.teraquop_guide {
        vec![Marker {
            label: "10^4 x 10^8".into(),
            width: 1e4,
            depth: 1e8,
        }]
    } else {
        Vec::new()
    };
    let (wb, db) = benchmark_axes(loaded);
    let (wa, da) = analytic_axes(loaded);
    let panels = [
        (
            "a_benchmark",
            "(a) benchmarked devices",
            &panel_a,
            wb,
            db,
            false,
        ),
        (
            "b_analytic",
            "(b) reduced error rates",
            &panel_b,
            wa,
            da,
            true,
        ),
        (
            "c_mitigation",
            "(c) error mitigation",
            &panel_c,
            wa,
            da,
            true,
        ),
        ("d_qec", "(d) error correction", &panel_d, wa, da, true),
    ];
    for (suffix, title, regions, w, d, guide) in panels {
        warn_all(log, regions);
        if !loaded.wants(OutputFormat::Svg) {
            continue;
        }
        if regions.is_empty() {
            log.warn(format!("panel {suffix} has no regions; skipped"));
            continue;
        }
        let mut s = style(loaded, "atlas", title, w, d);
        s.teraquop_guide &= guide;
        if guide {
            s.markers = markers.clone();
        }
        artifacts.add(
            format!("{file_stem}_{suffix}.svg"),
            render_svg(regions, &s)?,
        );
    }

    let regions: Vec<CapabilityRegion> = [panel_a, panel_b, panel_c, panel_d].concat();
    if loaded.wants(OutputFormat::Csv) {
        let table = RegionTable::from_regions(&regions);
        artifacts.add(
            format!("{file_stem}.csv"),
            emit_csv(&[table], Some(&loaded.provenance("atlas"))),
        );
    }
    Ok(Outcome {
        artifacts,
        regions,
        report: None,
    })
}
