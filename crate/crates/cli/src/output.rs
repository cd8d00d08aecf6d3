use std::io::Write;
use std::path::{Path, PathBuf};

use anyhow::Context;
use tempfile::NamedTempFile;

/// Output files buffered in memory and written only once every engine has
/// finished, so a failed run leaves nothing behind.
#[derive(Debug, Default)]
pub struct Artifacts {
    files: Vec<(String, Vec<u8>)>,
}

impl Artifacts {
    pub fn add(&mut self, name: impl Into<String>, bytes: impl Into<Vec<u8>>) {
        self.files.push((name.into(), bytes.into()));
    }

    pub fn is_empty(&self) -> bool {
        self.files.is_empty()
    }

    /// Writes each file through a temp file in `dir` and an atomic rename.
    pub fn write(mut self, dir: &Path) -> anyhow::Result<Vec<PathBuf>> {
        self.files.sort_by(|a, b| a.0.cmp(&b.0));
        std::fs::create_dir_all(dir).with_context(|| format!("creating {}", dir.display()))?;
        let mut written = Vec::with_capacity(self.files.len());
        for (name, bytes) in &self.files {
            let path = dir.join(name);
            let mut tmp = NamedTempFile::new_in(dir)
                .with_context(|| format!("creating temp file in {}", dir.display()))?;
            tmp.write_all(bytes)?;
            // temp files are created owner-only; artifacts get the usual mode
            #[cfg(unix)]
            {
                use std::os::unix::fs::PermissionsExt;
                tmp.as_file()
                    .set_permissions(std::fs::Permissions::from_mode(0o644))?;
            }
            tmp.as_file().sync_all()?;
            tmp.persist(&path)
                .with_context(|| format!("renaming into {}", path.display()))?;
            written.push(path);
        }
        Ok(written)
    }
}

/// Messages on stderr, gated by `--quiet` and `--verbose`; warnings always go out.
#[derive(Debug, Clone, Copy)]
pub struct Log {
    pub quiet: bool,
    pub verbose: bool,
}

impl Log {
    pub fn info(&self, msg: impl AsRef<str>) {
        if !self.quiet {
            eprintln!("{}", msg.as_ref());
        }
    }

    pub fn debug(&self, msg: impl AsRef<str>) {
        if self.verbose {
            eprintln!("{}", msg.as_ref());
        }
    }

    pub fn warn(&self, msg: impl AsRef<str>) {
        eprintln!("warning: {}", msg.as_ref());
    }
}

/// Prints to stdout, treating a closed pipe as the reader being done.
pub fn stdout_line(text: &str) -> std::io::Result<()> {
    let mut out = std::io::stdout().lock();
    match writeln!(out, "{text}").and_then(|()| out.flush()) {
        Err(e) if e.kind() == std::io::ErrorKind::BrokenPipe => Ok(()),
        r => r,
    }
}
