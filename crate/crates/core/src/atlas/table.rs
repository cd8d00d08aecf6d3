use serde::Serialize;

use crate::bench::SuccessEstimate;
use crate::region::{CapabilityRegion, RegionSource};

pub const REGION_HEADER: &str = "region_label,width,max_depth,quops,source,p_hat,stderr,d_code";
pub const CELL_HEADER: &str = "width,depth,shots,successes,p_hat,stderr,seed";

#[derive(Debug, Clone, PartialEq, Serialize)]
pub struct RegionRow {
    pub region_label: String,
    pub width: u64,
    pub max_depth: u64,
    pub quops: u64,
    pub source: RegionSource,
    pub p_hat: Option<f64>,
    pub stderr: Option<f64>,
    pub d_code: Option<u64>,
}

/// Flattened frontier rows, sorted by `(region_label, width)`. `p_hat` and
/// `stderr` are set only for empirical rows, `d_code` only for QEC rows.
#[derive(Debug, Clone, PartialEq, Default, Serialize)]
pub struct RegionTable {
    rows: Vec<RegionRow>,
}

impl RegionTable {
    pub fn from_region(region: &CapabilityRegion) -> Self {
        Self::from_regions(std::slice::from_ref(region))
    }

    pub fn from_regions(regions: &[CapabilityRegion]) -> Self {
        let mut rows: Vec<RegionRow> = regions
            .iter()
            .flat_map(|region| {
                region.frontier.iter().map(move |(&width, point)| {
                    let empirical = region.source == RegionSource::Empirical;
                    RegionRow {
                        region_label: region.label.clone(),
                        width,
                        max_depth: point.max_depth,
                        quops: width.saturating_mul(point.max_depth),
                        source: region.source,
                        p_hat: point.p_hat.filter(|_| empirical),
                        stderr: point.stderr.filter(|_| empirical),
                        d_code: point.d_code.filter(|_| region.source == RegionSource::Qec),
                    }
                })
            })
            .collect();
        rows.sort_by(|a, b| (&a.region_label, a.width).cmp(&(&b.region_label, b.width)));
        Self { rows }
    }

    pub fn rows(&self) -> &[RegionRow] {
        &self.rows
    }

    pub fn is_empty(&self) -> bool {
        self.rows.is_empty()
    }
}

fn writer(out: &mut Vec<u8>) -> csv::Writer<&mut Vec<u8>> {
    csv::WriterBuilder::new()
        .has_headers(false)
        .terminator(csv::Terminator::Any(b'\n'))
        .from_writer(out)
}

fn write_provenance(out: &mut Vec<u8>, provenance: Option<&str>) {
    for line in provenance.into_iter().flat_map(str::lines) {
        out.extend_from_slice(b"# ");
        out.extend_from_slice(line.as_bytes());
        out.push(b'\n');
    }
}

fn opt<T: ToString>(v: Option<T>) -> String {
    v.map(|v| v.to_string()).unwrap_or_default()
}

/// CSV with header [`REGION_HEADER`], LF line endings, shortest round-trip
/// decimals and empty cells for absent values. Each provenance line is
/// emitted first behind a `# ` prefix.
pub fn emit_csv(tables: &[RegionTable], provenance: Option<&str>) -> Vec<u8> {
    let mut out = Vec::new();
    write_provenance(&mut out, provenance);
    out.extend_from_slice(REGION_HEADER.as_bytes());
    out.push(b'\n');
    {
        let mut w = writer(&mut out);
        for row in tables.iter().flat_map(|t| t.rows.iter()) {
            w.write_record([
                row.region_label.clone(),
                row.width.to_string(),
                row.max_depth.to_string(),
                row.quops.to_string(),
                row.source.to_string(),
                opt(row.p_hat),
                opt(row.stderr),
                opt(row.d_code),
            ])
            .expect("in-memory CSV write");
        }
        w.flush().expect("in-memory CSV flush");
    }
    out
}

/// Per-cell benchmark estimates with header [`CELL_HEADER`].
pub fn emit_cells_csv(cells: &[SuccessEstimate], provenance: Option<&str>) -> Vec<u8> {
    let mut out = Vec::new();
    write_provenance(&mut out, provenance);
    out.extend_from_slice(CELL_HEADER.as_bytes());
    out.push(b'\n');
    {
        let mut w = writer(&mut out);
        for c in cells {
            w.write_record([
                c.shape.width().to_string(),
                c.shape.depth().to_string(),
                c.shots.to_string(),
                c.successes.to_string(),
                c.p_hat.to_string(),
                c.stderr.to_string(),
                c.seed.to_string(),
            ])
            .expect("in-memory CSV write");
        }
        w.flush().expect("in-memory CSV flush");
    }
    out
}
