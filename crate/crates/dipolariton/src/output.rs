//! Deterministic CSV serialization of sweep results.
//!
//! The file starts with a `#`-prefixed metadata block (tool, mode,
//! labelling, and a config echo that parses back to the exact same
//! configuration), followed by one header row and one data row per field
//! value. Real numbers are printed with 12 significant digits, zero as a
//! bare `0`, and lossless lifetimes as `inf`; identical inputs produce
//! byte-identical files.

use std::io::Write;
use std::path::Path;

use crate::config::Config;
use crate::error::{Error, Result};
use crate::sweep::{BranchRecord, SweepRow};

const BRANCH_NAMES: [&str; 3] = ["LP", "MP", "UP"];

/// 12 significant digits in scientific notation; exact zeros and the
/// infinite-lifetime sentinel keep their short spellings.
pub fn fmt_value(v: f64) -> String {
    if v == 0.0 {
        "0".to_string()
    } else if v.is_infinite() {
        if v > 0.0 { "inf".to_string() } else { "-inf".to_string() }
    } else {
        format!("{v:.11e}")
    }
}

fn branch_headers(prefix: &str, out: &mut Vec<String>) {
    for name in BRANCH_NAMES {
        out.push(format!("E_{prefix}{name}_meV"));
        out.push(format!("ImE_{prefix}{name}_meV"));
        out.push(format!("frac_ix_{prefix}{name}"));
        out.push(format!("frac_dx_{prefix}{name}"));
        out.push(format!("frac_g_{prefix}{name}"));
        out.push(format!("bpd_{prefix}{name}"));
        out.push(format!("edm_{prefix}{name}_nm"));
        out.push(format!("gamma_{prefix}{name}_GHz"));
        out.push(format!("tau_{prefix}{name}_ps"));
        out.push(format!("regime_{prefix}{name}"));
    }
}

fn push_branch_cells(rec: &BranchRecord, out: &mut Vec<String>) {
    out.push(fmt_value(rec.re_e_mev));
    out.push(fmt_value(rec.im_e_mev));
    for f in rec.obs.fractions {
        out.push(fmt_value(f));
    }
    out.push(fmt_value(rec.obs.bpd));
    out.push(fmt_value(rec.obs.edm_nm));
    out.push(fmt_value(rec.obs.gamma_ghz));
    out.push(fmt_value(rec.obs.tau_ps));
    out.push(rec.obs.regime.as_str().to_string());
}

/// Serialize rows to a writer. `effective` only tags the metadata block;
/// the rows already carry the data of whichever matrix they came from.
pub fn emit_csv_to<W: Write>(
    rows: &[SweepRow],
    cfg: &Config,
    effective: bool,
    w: &mut W,
) -> Result<()> {
    if rows.is_empty() {
        return Err(Error::InvalidParameter("no sweep rows to serialize".into()));
    }
    let labeling = cfg.sweep.labeling;
    if labeling.wants_tracked() && rows.iter().any(|r| r.tracked.is_none()) {
        return Err(Error::InvalidParameter(
            "rows carry no tracked labels but the labelling policy wants them".into(),
        ));
    }

    let mut buf = String::new();
    buf.push_str(&format!(
        "# dipolariton sweep v{}\n",
        env!("CARGO_PKG_VERSION")
    ));
    buf.push_str(&format!(
        "# mode: {}\n",
        if effective { "effective" } else { "hermitian" }
    ));
    buf.push_str(&format!("# labeling: {}\n", labeling.as_str()));
    buf.push_str("# column groups: spectrum E_*/ImE_*, composition frac_*, brightness bpd_*, dipole edm_*, decay gamma_*/tau_*\n");
    buf.push_str("# tracked-label columns carry the tr_ prefix; tracking_overlap is the per-step continuity diagnostic (3 = perfect)\n");
    buf.push_str("# config-echo-begin\n");
    for line in cfg.echo_lines() {
        buf.push_str("# ");
        buf.push_str(&line);
        buf.push('\n');
    }
    buf.push_str("# config-echo-end\n");

    let mut headers = vec!["F_kVcm".to_string()];
    if labeling.wants_energy() {
        branch_headers("", &mut headers);
    }
    if labeling.wants_tracked() {
        branch_headers("tr_", &mut headers);
        headers.push("tracking_overlap".to_string());
    }
    buf.push_str(&headers.join(","));
    buf.push('\n');

    for row in rows {
        let mut cells = vec![fmt_value(row.f_kvcm)];
        if labeling.wants_energy() {
            for rec in &row.energy_ordered {
                push_branch_cells(rec, &mut cells);
            }
        }
        if labeling.wants_tracked() {
            let (records, overlap) = row.tracked.as_ref().expect("checked above");
            for rec in records {
                push_branch_cells(rec, &mut cells);
            }
            cells.push(fmt_value(*overlap));
        }
        debug_assert_eq!(cells.len(), headers.len());
        buf.push_str(&cells.join(","));
        buf.push('\n');
    }

    w.write_all(buf.as_bytes()).map_err(|source| Error::Io {
        path: Path::new("<writer>").to_path_buf(),
        source,
    })
}

/// Serialize rows straight into a string (the CLI and tests both lean on
/// this for byte-identity checks).
pub fn csv_string(rows: &[SweepRow], cfg: &Config, effective: bool) -> Result<String> {
    let mut buf = Vec::new();
    emit_csv_to(rows, cfg, effective, &mut buf)?;
    Ok(String::from_utf8(buf).expect("csv output is utf-8"))
}

/// Write rows to a file.
pub fn emit_csv(rows: &[SweepRow], cfg: &Config, effective: bool, path: &Path) -> Result<()> {
    let text = csv_string(rows, cfg, effective)?;
    std::fs::write(path, text).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })
}

/// Pull the config echo back out of an emitted file.
pub fn extract_echo(csv_text: &str) -> Option<String> {
    let mut lines = Vec::new();
    let mut inside = false;
    for line in csv_text.lines() {
        match line {
            "# config-echo-begin" => inside = true,
            "# config-echo-end" => return Some(lines.join("\n")),
            _ if inside => lines.push(line.strip_prefix("# ")?.to_string()),
            _ => {}
        }
    }
    None
}
