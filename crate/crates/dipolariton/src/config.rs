//! Line-oriented `key = value` configuration with unit-suffixed keys.
//!
//! Every physical key carries an explicit unit suffix (`J_meV`, `d_nm`,
//! `F_start_kVcm`); couplings and loss rates accept either the `_meV`
//! spelling or the angular `_2pi_GHz` spelling, which removes the 2π
//! ambiguity those numbers are usually quoted with. Unknown keys are hard
//! errors, a wrong suffix on a known stem is reported as such, and any
//! absent key falls back to the documented default. The sweep window
//! defaults to the tunneling resonance ± 20 kV/cm.

use std::path::{Path, PathBuf};

use crate::error::{Error, Result};
use crate::model::SystemParams;
use crate::polariton::RegimeThresholds;
use crate::sweep::{Labeling, SweepSpec};
use crate::units::angular_ghz_to_energy;

/// Fully resolved run configuration.
#[derive(Debug, Clone, PartialEq)]
pub struct Config {
    pub params: SystemParams,
    pub sweep: SweepSpec,
    pub thresholds: RegimeThresholds,
    pub out: Option<PathBuf>,
}

#[derive(Debug, Default)]
struct Raw {
    omega_c_mev: Option<f64>,
    delta_ix_dx_mev: Option<f64>,
    delta_c_dx_mev: Option<f64>,
    d_nm: Option<f64>,
    j_mev: Option<f64>,
    g_mev: Option<f64>,
    kappa_mev: Option<f64>,
    gamma_dx_mev: Option<f64>,
    gamma_ix_mev: Option<f64>,
    f_start_kvcm: Option<f64>,
    f_end_kvcm: Option<f64>,
    steps: Option<usize>,
    n: Option<u32>,
    labeling: Option<Labeling>,
    bpd_high: Option<f64>,
    bpd_low: Option<f64>,
    edm_high_nm: Option<f64>,
    edm_low_nm: Option<f64>,
    out: Option<PathBuf>,
}

/// Known key stems and the suffix they must carry, for the wrong-suffix
/// diagnostic.
const STEM_SUFFIXES: [(&str, &str); 13] = [
    ("omega_c", "_meV"),
    ("delta_ix_dx", "_meV"),
    ("delta_c_dx", "_meV"),
    ("d", "_nm"),
    ("J", "_meV"),
    ("g", "_meV or _2pi_GHz"),
    ("kappa", "_meV or _2pi_GHz"),
    ("gamma_dx", "_meV or _2pi_GHz"),
    ("gamma_ix", "_meV or _2pi_GHz"),
    ("F_start", "_kVcm"),
    ("F_end", "_kVcm"),
    ("edm_high", "_nm"),
    ("edm_low", "_nm"),
];

/// Load and validate a configuration file.
pub fn load_config(path: &Path) -> Result<Config> {
    let text = std::fs::read_to_string(path).map_err(|source| Error::Io {
        path: path.to_path_buf(),
        source,
    })?;
    parse_config(&text)
}

/// The configuration produced by an empty file: every key at its default.
pub fn default_config() -> Config {
    parse_config("").expect("built-in defaults are valid")
}

/// Parse configuration text. `#` starts a comment, blank lines are
/// ignored, each remaining line must be `key = value`.
pub fn parse_config(text: &str) -> Result<Config> {
    let mut raw = Raw::default();
    let mut seen: Vec<String> = Vec::new();

    for (idx, full_line) in text.lines().enumerate() {
        let line_no = idx + 1;
        let line = match full_line.find('#') {
            Some(pos) => &full_line[..pos],
            None => full_line,
        };
        let line = line.trim();
        if line.is_empty() {
            continue;
        }
        let Some((key, value)) = line.split_once('=') else {
            return Err(Error::ConfigParse {
                line: line_no,
                message: format!("expected `key = value`, got `{line}`"),
            });
        };
        let key = key.trim();
        let value = value.trim();
        if value.is_empty() {
            return Err(Error::ConfigParse {
                line: line_no,
                message: format!("key `{key}` has no value"),
            });
        }
        apply_key(&mut raw, &mut seen, key, value, line_no)?;
    }

    build(raw)
}

fn canonical_group(key: &str) -> &str {
    // alternate spellings of one parameter share a duplicate-detection group
    match key {
        "g_meV" | "g_2pi_GHz" => "g",
        "kappa_meV" | "kappa_2pi_GHz" => "kappa",
        "gamma_dx_meV" | "gamma_dx_2pi_GHz" => "gamma_dx",
        "gamma_ix_meV" | "gamma_ix_2pi_GHz" => "gamma_ix",
        other => match other {
            "omega_c_meV" => "omega_c",
            "delta_ix_dx_meV" => "delta_ix_dx",
            "delta_c_dx_meV" => "delta_c_dx",
            "d_nm" => "d",
            "J_meV" => "J",
            "F_start_kVcm" => "F_start",
            "F_end_kVcm" => "F_end",
            "edm_high_nm" => "edm_high",
            "edm_low_nm" => "edm_low",
            k => k,
        },
    }
}

fn apply_key(
    raw: &mut Raw,
    seen: &mut Vec<String>,
    key: &str,
    value: &str,
    line: usize,
) -> Result<()> {
    let group = canonical_group(key);
    if seen.iter().any(|s| s == group) {
        return Err(Error::DuplicateKey {
            line,
            key: key.to_string(),
        });
    }

    let parse_f64 = |value: &str| -> Result<f64> {
        value.parse::<f64>().map_err(|_| Error::ConfigParse {
            line,
            message: format!("`{value}` is not a number"),
        })
    };
    let angular = |value: &str| -> Result<f64> {
        let ghz = parse_f64(value)?;
        if ghz < 0.0 {
            return Err(Error::ConfigParse {
                line,
                message: format!("rates must be non-negative, got {ghz}"),
            });
        }
        angular_ghz_to_energy(ghz)?.mev()
    };

    match key {
        "omega_c_meV" => raw.omega_c_mev = Some(parse_f64(value)?),
        "delta_ix_dx_meV" => raw.delta_ix_dx_mev = Some(parse_f64(value)?),
        "delta_c_dx_meV" => raw.delta_c_dx_mev = Some(parse_f64(value)?),
        "d_nm" => raw.d_nm = Some(parse_f64(value)?),
        "J_meV" => raw.j_mev = Some(parse_f64(value)?),
        "g_meV" => raw.g_mev = Some(parse_f64(value)?),
        "g_2pi_GHz" => raw.g_mev = Some(angular(value)?),
        "kappa_meV" => raw.kappa_mev = Some(parse_f64(value)?),
        "kappa_2pi_GHz" => raw.kappa_mev = Some(angular(value)?),
        "gamma_dx_meV" => raw.gamma_dx_mev = Some(parse_f64(value)?),
        "gamma_dx_2pi_GHz" => raw.gamma_dx_mev = Some(angular(value)?),
        "gamma_ix_meV" => raw.gamma_ix_mev = Some(parse_f64(value)?),
        "gamma_ix_2pi_GHz" => raw.gamma_ix_mev = Some(angular(value)?),
        "F_start_kVcm" => raw.f_start_kvcm = Some(parse_f64(value)?),
        "F_end_kVcm" => raw.f_end_kvcm = Some(parse_f64(value)?),
        "steps" => {
            raw.steps = Some(value.parse::<usize>().map_err(|_| Error::ConfigParse {
                line,
                message: format!("`{value}` is not a positive integer"),
            })?)
        }
        "n" => {
            raw.n = Some(value.parse::<u32>().map_err(|_| Error::ConfigParse {
                line,
                message: format!("`{value}` is not a positive integer"),
            })?)
        }
        "labeling" => {
            raw.labeling = Some(match value {
                "energy" => Labeling::EnergyOrdered,
                "tracked" => Labeling::Tracked,
                "both" => Labeling::Both,
                other => {
                    return Err(Error::ConfigParse {
                        line,
                        message: format!(
                            "labeling must be energy, tracked or both, got `{other}`"
                        ),
                    })
                }
            })
        }
        "bpd_high" => raw.bpd_high = Some(parse_f64(value)?),
        "bpd_low" => raw.bpd_low = Some(parse_f64(value)?),
        "edm_high_nm" => raw.edm_high_nm = Some(parse_f64(value)?),
        "edm_low_nm" => raw.edm_low_nm = Some(parse_f64(value)?),
        "out" => raw.out = Some(PathBuf::from(value)),
        unknown => {
            // a known stem with the wrong suffix earns a precise complaint
            for (stem, suffix) in STEM_SUFFIXES {
                if unknown == stem || unknown.starts_with(&format!("{stem}_")) {
                    return Err(Error::WrongUnitSuffix {
                        line,
                        key: unknown.to_string(),
                        expected: suffix,
                    });
                }
            }
            return Err(Error::UnknownKey {
                line,
                key: unknown.to_string(),
            });
        }
    }
    seen.push(group.to_string());
    Ok(())
}

fn build(raw: Raw) -> Result<Config> {
    let g_default = angular_ghz_to_energy(16.0)?.mev()?;
    let gamma_dx_default = angular_ghz_to_energy(0.1)?.mev()?;

    let d_nm = raw.d_nm.unwrap_or(15.0);
    let params = SystemParams::from_mev_nm(
        raw.omega_c_mev.unwrap_or(1320.7),
        raw.delta_ix_dx_mev.unwrap_or(-8.625),
        raw.delta_c_dx_mev.unwrap_or(0.0),
        d_nm,
        raw.j_mev.unwrap_or(0.828),
        raw.g_mev.unwrap_or(g_default),
        raw.kappa_mev.unwrap_or(g_default),
        raw.gamma_dx_mev.unwrap_or(gamma_dx_default),
        raw.gamma_ix_mev.unwrap_or(0.0),
    )?;

    let (f_start, f_end) = match (raw.f_start_kvcm, raw.f_end_kvcm) {
        (Some(a), Some(b)) => (a, b),
        (None, None) => {
            let f_star = params.delta_ix_dx_mev() / (0.1 * params.d_nm());
            (f_star - 20.0, f_star + 20.0)
        }
        _ => {
            return Err(Error::InvalidParameter(
                "F_start_kVcm and F_end_kVcm must be given together".into(),
            ))
        }
    };

    let sweep = SweepSpec {
        f_start_kvcm: f_start,
        f_end_kvcm: f_end,
        steps: raw.steps.unwrap_or(801),
        n: raw.n.unwrap_or(1),
        labeling: raw.labeling.unwrap_or(Labeling::Both),
    };
    sweep.validate()?;

    let thresholds = RegimeThresholds::new(
        raw.bpd_high.unwrap_or(0.3),
        raw.bpd_low.unwrap_or(0.05),
        raw.edm_high_nm.unwrap_or(0.5 * d_nm),
        raw.edm_low_nm.unwrap_or(0.1 * d_nm),
    )?;
    thresholds.validate(Some(d_nm))?;

    Ok(Config {
        params,
        sweep,
        thresholds,
        out: raw.out,
    })
}

impl Config {
    /// Canonical `key = value` lines that reproduce this configuration
    /// exactly when parsed back (float values print in shortest
    /// round-trip form).
    pub fn echo_lines(&self) -> Vec<String> {
        let p = &self.params;
        let mut lines = vec![
            format!("omega_c_meV = {}", p.omega_c_mev()),
            format!("delta_ix_dx_meV = {}", p.delta_ix_dx_mev()),
            format!("delta_c_dx_meV = {}", p.delta_c_dx_mev()),
            format!("d_nm = {}", p.d_nm()),
            format!("J_meV = {}", p.j_mev()),
            format!("g_meV = {}", p.g_mev()),
            format!("kappa_meV = {}", p.kappa_mev()),
            format!("gamma_dx_meV = {}", p.gamma_dx_mev()),
            format!("gamma_ix_meV = {}", p.gamma_ix_mev()),
            format!("F_start_kVcm = {}", self.sweep.f_start_kvcm),
            format!("F_end_kVcm = {}", self.sweep.f_end_kvcm),
            format!("steps = {}", self.sweep.steps),
            format!("n = {}", self.sweep.n),
            format!("labeling = {}", self.sweep.labeling.as_str()),
            format!("bpd_high = {}", self.thresholds.bpd_high),
            format!("bpd_low = {}", self.thresholds.bpd_low),
            format!("edm_high_nm = {}", self.thresholds.edm_high_nm),
            format!("edm_low_nm = {}", self.thresholds.edm_low_nm),
        ];
        if let Some(out) = &self.out {
            lines.push(format!("out = {}", out.display()));
        }
        lines
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_config_is_the_default_run() {
        let cfg = parse_config("").unwrap();
        assert_eq!(cfg.params.omega_c_mev(), 1320.7);
        assert_eq!(cfg.params.delta_ix_dx_mev(), -8.625);
        assert_eq!(cfg.params.delta_c_dx_mev(), 0.0);
        assert_eq!(cfg.params.d_nm(), 15.0);
        assert_eq!(cfg.params.j_mev(), 0.828);
        assert_eq!(
            cfg.params.g_mev(),
            angular_ghz_to_energy(16.0).unwrap().mev().unwrap()
        );
        assert!((cfg.params.g_mev() - 0.06617068314566406).abs() < 1e-16);
        assert_eq!(cfg.params.kappa_mev(), cfg.params.g_mev());
        assert_eq!(
            cfg.params.gamma_dx_mev(),
            angular_ghz_to_energy(0.1).unwrap().mev().unwrap()
        );
        assert_eq!(cfg.params.gamma_ix_mev(), 0.0);
        // window centered on the tunneling resonance
        assert_eq!(cfg.sweep.f_start_kvcm, -25.75);
        assert_eq!(cfg.sweep.f_end_kvcm, 14.25);
        assert_eq!(cfg.sweep.steps, 801);
        assert_eq!(cfg.sweep.n, 1);
        assert_eq!(cfg.sweep.labeling, Labeling::Both);
    }

    #[test]
    fn comments_and_blanks_are_ignored() {
        let cfg = parse_config(
            "# heading\n\n  J_meV = 1.0  # trailing comment\n\nsteps = 11\n",
        )
        .unwrap();
        assert_eq!(cfg.params.j_mev(), 1.0);
        assert_eq!(cfg.sweep.steps, 11);
    }

    #[test]
    fn angular_and_mev_spellings_agree() {
        let a = parse_config("g_2pi_GHz = 16.0").unwrap();
        let b = parse_config("g_meV = 0.0662").unwrap();
        // identical to three significant figures
        let rel = (a.params.g_mev() - b.params.g_mev()).abs() / a.params.g_mev();
        assert!(rel < 5e-3, "rel = {rel}");
    }

    #[test]
    fn validation_errors() {
        assert!(matches!(
            parse_config("J_meV = -1"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            parse_config("mystery = 3"),
            Err(Error::UnknownKey { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("d_meV = 15"),
            Err(Error::WrongUnitSuffix { expected: "_nm", .. })
        ));
        assert!(matches!(
            parse_config("g_GHz = 16"),
            Err(Error::WrongUnitSuffix { .. })
        ));
        assert!(matches!(
            parse_config("J_meV = 0.5\nJ_meV = 0.6"),
            Err(Error::DuplicateKey { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("g_meV = 0.1\ng_2pi_GHz = 16"),
            Err(Error::DuplicateKey { line: 2, .. })
        ));
        assert!(matches!(
            parse_config("steps = 801.5"),
            Err(Error::ConfigParse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("J_meV"),
            Err(Error::ConfigParse { line: 1, .. })
        ));
        assert!(matches!(
            parse_config("F_start_kVcm = 0.0"),
            Err(Error::InvalidParameter(_))
        ));
        assert!(matches!(
            parse_config("labeling = sideways"),
            Err(Error::ConfigParse { line: 1, .. })
        ));
        assert!(parse_config("steps = 1").is_err());
        assert!(load_config(Path::new("/nonexistent/config.cfg")).is_err());
    }

    #[test]
    fn parser_never_panics() {
        let mut runner = proptest::test_runner::TestRunner::default();
        runner
            .run(&".{0,200}", |s| {
                let _ = parse_config(&s);
                Ok(())
            })
            .unwrap();
    }

    #[test]
    fn echo_round_trips_exactly() {
        let cfg = parse_config(
            "omega_c_meV = 1320.7\ng_2pi_GHz = 16.0\nkappa_2pi_GHz = 16.0\n\
             gamma_dx_2pi_GHz = 0.1\nsteps = 801\nlabeling = both\nout = data.csv\n",
        )
        .unwrap();
        let echo = cfg.echo_lines().join("\n");
        let reparsed = parse_config(&echo).unwrap();
        assert_eq!(cfg, reparsed);
    }
}
