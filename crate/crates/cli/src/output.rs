//! Output destinations. Files are created before any computation so that an
//! unwritable path fails fast, and removed again if the command fails.

use std::fs::File;
use std::io::Write;
use std::path::PathBuf;

use floquet_core::io::{write_json, SCHEMA_VERSION};
use serde_json::{json, Value};

use crate::CliError;

pub struct Sink {
    path: Option<PathBuf>,
    file: Option<File>,
    committed: bool,
}

impl Sink {
    pub fn open(target: &str) -> Result<Self, CliError> {
        if target == "-" {
            return Ok(Self { path: None, file: None, committed: false });
        }
        let path = PathBuf::from(target);
        let file = File::create(&path)
            .map_err(|e| CliError::Usage(format!("cannot write output {}: {e}", path.display())))?;
        Ok(Self { path: Some(path), file: Some(file), committed: false })
    }

    /// Writes the payload and, for files, a `.meta.json` sidecar describing
    /// the invocation.
    pub fn commit(mut self, command: &str, payload: &[u8]) -> Result<(), CliError> {
        let io = |e: std::io::Error| CliError::Usage(format!("write failed: {e}"));
        match (&mut self.file, &self.path) {
            (Some(file), Some(path)) => {
                file.write_all(payload).map_err(io)?;
                file.flush().map_err(io)?;
                let meta = sidecar(command);
                let mut meta_path = path.clone().into_os_string();
                meta_path.push(".meta.json");
                let meta_file = File::create(PathBuf::from(meta_path)).map_err(io)?;
                write_json(&meta, meta_file)?;
            }
            _ => {
                let mut out = std::io::stdout().lock();
                out.write_all(payload).map_err(io)?;
                out.flush().map_err(io)?;
            }
        }
        self.committed = true;
        Ok(())
    }
}

impl Drop for Sink {
    fn drop(&mut self) {
        if !self.committed {
            if let Some(path) = &self.path {
                self.file = None;
                let _ = std::fs::remove_file(path);
            }
        }
    }
}

fn sidecar(command: &str) -> Value {
    json!({
        "schema_version": SCHEMA_VERSION,
        "tool": "floquet",
        "version": env!("CARGO_PKG_VERSION"),
        "command": command,
        "arguments": std::env::args().skip(1).collect::<Vec<_>>(),
    })
}
