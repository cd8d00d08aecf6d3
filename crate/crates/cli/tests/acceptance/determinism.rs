use std::collections::BTreeMap;
use std::path::Path;
use std::process::Command;

use crate::{check, Outcome};

/// Runs in `cwd` with a relative output directory, so the provenance header
/// (which records that directory) is the same for every run.
fn run(args: &[&str], threads: &str, cwd: &Path) -> Result<BTreeMap<String, Vec<u8>>, String> {
    let status = Command::new(env!("CARGO_BIN_EXE_qcap"))
        .args(args)
        .args(["--threads", threads, "--quiet", "--out", "out"])
        .current_dir(cwd)
        .output()
        .map_err(|e| e.to_string())?;
    if !status.status.success() {
        return Err(format!(
            "qcap {} failed: {}",
            args.join(" "),
            String::from_utf8_lossy(&status.stderr)
        ));
    }
    let mut files = BTreeMap::new();
    for entry in std::fs::read_dir(cwd.join("out")).map_err(|e| e.to_string())? {
        let path = entry.map_err(|e| e.to_string())?.path();
        let name = path.file_name().unwrap().to_string_lossy().into_owned();
        files.insert(name, std::fs::read(&path).map_err(|e| e.to_string())?);
    }
    Ok(files)
}

pub fn byte_identical_runs() -> Outcome {
    let scenarios: [&[&str]; 2] = [
        &[
            "benchmark",
            "--eps",
            "0.01",
            "--seed",
            "7",
            "--shots",
            "4000",
        ],
        &["atlas", "--seed", "7"],
    ];
    let mut report = Vec::new();
    let mut ok = true;
    for args in scenarios {
        let mut outputs = Vec::new();
        for threads in ["1", "4", "1", "4"] {
            let dir = tempfile::tempdir().map_err(|e| e.to_string())?;
            outputs.push(run(args, threads, dir.path())?);
        }
        let first = &outputs[0];
        let same = outputs.iter().all(|o| o == first);
        let bytes: usize = first.values().map(Vec::len).sum();
        ok &= same && !first.is_empty();
        report.push(format!(
            "{} {} files {} bytes {}",
            args[0],
            first.len(),
            bytes,
            if same { "identical" } else { "DIFFER" }
        ));
    }
    check(ok, format!("threads 1,4,1,4: {}", report.join("; ")))
}
