//! Report envelopes and atomic file output.

use std::io::Write;
use std::path::Path;

use serde::Serialize;

use crate::config::RunConfig;
use crate::Failure;

/// Version of the JSON report layout.
pub const SCHEMA: u32 = 1;

#[derive(Serialize)]
struct Envelope<'a, T: Serialize> {
    schema: u32,
    command: &'a str,
    config: &'a RunConfig,
    result: &'a T,
}

/// Pretty JSON of a report with its config, newline terminated.
pub fn report_json<T: Serialize>(cfg: &RunConfig, result: &T) -> Result<String, Failure> {
    let env = Envelope {
        schema: SCHEMA,
        command: &cfg.command,
        config: cfg,
        result,
    };
    let mut s = serde_json::to_string_pretty(&env)
        .map_err(|e| Failure::usage(format!("cannot encode report: {e}")))?;
    s.push('\n');
    Ok(s)
}

/// Writes `bytes` to a temporary file next to `path`, then renames it over
/// `path`.
pub fn write_atomic(path: &Path, bytes: &[u8], flag: &str) -> Result<(), Failure> {
    let io =
        |e: std::io::Error| Failure::usage(format!("{flag}: cannot write {}: {e}", path.display()));
    let dir = match path.parent() {
        Some(d) if !d.as_os_str().is_empty() => d,
        _ => Path::new("."),
    };
    if !dir.is_dir() {
        return Err(Failure::usage(format!(
            "{flag}: directory {} does not exist",
            dir.display()
        )));
    }
    let mut tmp = tempfile::NamedTempFile::new_in(dir).map_err(io)?;
    tmp.write_all(bytes).map_err(io)?;
    tmp.as_file().sync_all().map_err(io)?;
    tmp.persist(path).map_err(|e| io(e.error))?;
    log::info!("wrote {}", path.display());
    Ok(())
}

/// Sends the report to `--json` if set, otherwise to stdout.
pub fn emit_json<T: Serialize>(
    cfg: &RunConfig,
    result: &T,
    out: &mut dyn Write,
) -> Result<(), Failure> {
    let text = report_json(cfg, result)?;
    match &cfg.json {
        Some(path) => write_atomic(path, text.as_bytes(), "--json"),
        None => out
            .write_all(text.as_bytes())
            .map_err(|e| Failure::usage(format!("cannot write to stdout: {e}"))),
    }
}

/// Serialises `rows` under `header` and writes them to `--csv`, if set.
pub fn emit_csv<R: Serialize>(
    cfg: &RunConfig,
    header: &[&str],
    rows: impl IntoIterator<Item = R>,
) -> Result<(), Failure> {
    let Some(path) = &cfg.csv else {
        return Ok(());
    };
    let enc = |e: csv::Error| Failure::usage(format!("--csv: {e}"));
    let mut w = csv::WriterBuilder::new()
        .has_headers(false)
        .from_writer(Vec::new());
    w.write_record(header).map_err(enc)?;
    for r in rows {
        w.serialize(r).map_err(enc)?;
    }
    let bytes = w
        .into_inner()
        .map_err(|e| Failure::usage(format!("--csv: {e}")))?;
    write_atomic(path, &bytes, "--csv")
}
