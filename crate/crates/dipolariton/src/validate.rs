//! Built-in invariant suite, runnable against any loaded configuration.
//!
//! These are the structural identities of the model (hermiticity, the
//! trace closed form, gauge equivalence of the two interdot-coupling sign
//! conventions, eigensolver residual certificates, normalization and sum
//! rules, resonance consistency, and the bare JC splitting), each with
//! its pinned tolerance. The CLI `validate` subcommand prints one line per
//! check and exits nonzero if any fails.

use crate::config::Config;
use crate::mat3::dot_conj;
use crate::model::{build_effective, build_hermitian, effective_trace, SystemParams};
use crate::polariton::hopfield;
use crate::spectral::{eig3, RESIDUAL_TOL};
use crate::sweep::{find_resonance, run_sweep_seq, Labeling, SweepSpec};
use crate::units::{bias_to_energy, Quantity};

/// Outcome of one named invariant check.
#[derive(Debug, Clone)]
pub struct CheckResult {
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

impl CheckResult {
    fn pass(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: true,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        CheckResult {
            name,
            passed: false,
            detail,
        }
    }

    fn from_worst(name: &'static str, worst: f64, tol: f64) -> Self {
        if worst <= tol {
            Self::pass(name, format!("worst {worst:.3e} <= {tol:.1e}"))
        } else {
            Self::fail(name, format!("worst {worst:.3e} exceeds {tol:.1e}"))
        }
    }
}

fn sample_fields(cfg: &Config) -> Vec<f64> {
    let f_star = cfg.params.delta_ix_dx_mev() / (0.1 * cfg.params.d_nm());
    [-7.0, -2.0, 0.0, 1.0, 5.0]
        .iter()
        .map(|off| f_star + off)
        .collect()
}

fn check_units(cfg: &Config) -> CheckResult {
    let p = &cfg.params;
    let mut worst = 0.0f64;
    // energy -> rate -> energy round trip on each loss/coupling scale
    for e in [p.g_mev(), p.kappa_mev(), p.gamma_dx_mev(), p.gamma_ix_mev()] {
        if e == 0.0 {
            continue;
        }
        let r = crate::units::energy_to_rate(Quantity::energy_mev(e)).unwrap();
        let back = r.per_s().unwrap() * crate::units::constants::HBAR_MEV_S;
        worst = worst.max((back - e).abs() / e);
    }
    // bias linearity: finite-difference slope equals -e*d exactly
    let d = p.d();
    let at = |f: f64| {
        bias_to_energy(Quantity::field_kvcm(f), d)
            .unwrap()
            .mev()
            .unwrap()
    };
    let slope = (at(3.0) - at(1.0)) / 2.0;
    worst = worst.max((slope - 0.1 * p.d_nm()).abs() / (0.1 * p.d_nm()));
    CheckResult::from_worst("units-roundtrip", worst, 1e-12)
}

fn check_hermiticity(cfg: &Config) -> CheckResult {
    let mut worst = 0.0f64;
    for f in sample_fields(cfg) {
        let h = match build_hermitian(&cfg.params, cfg.sweep.n, Quantity::field_kvcm(f)) {
            Ok(h) => h,
            Err(e) => return CheckResult::fail("hermitian-symmetry", e.to_string()),
        };
        worst = worst.max(h.entries().hermiticity_defect());
        // no direct IX-cavity coupling in either convention
        worst = worst.max(h.entries().e[0][2].norm());
        worst = worst.max(h.entries().e[2][0].norm());
    }
    CheckResult::from_worst("hermitian-symmetry", worst, 0.0)
}

fn check_trace(cfg: &Config) -> CheckResult {
    let mut worst = 0.0f64;
    for f in sample_fields(cfg) {
        let fq = Quantity::field_kvcm(f);
        let h = build_effective(&cfg.params, cfg.sweep.n, fq).unwrap();
        let t = h.entries().trace();
        let closed = effective_trace(&cfg.params, cfg.sweep.n, fq).unwrap();
        worst = worst.max((t - closed).norm() / t.norm());
    }
    CheckResult::from_worst("trace-identity", worst, 1e-12)
}

fn check_gauge(cfg: &Config) -> CheckResult {
    // -J/2 (closed-system) vs +J/2 (lossless effective): same spectrum,
    // same modulus-derived observables
    let lossless = cfg.params.lossless();
    let mut worst = 0.0f64;
    for f in sample_fields(cfg) {
        let fq = Quantity::field_kvcm(f);
        let a = eig3(&build_hermitian(&cfg.params, cfg.sweep.n, fq).unwrap()).unwrap();
        let b = eig3(&build_effective(&lossless, cfg.sweep.n, fq).unwrap()).unwrap();
        let scale = a[2].hnorm;
        for k in 0..3 {
            worst = worst.max((a[k].value - b[k].value).norm() / scale);
            let fa = hopfield(&a[k]);
            let fb = hopfield(&b[k]);
            for x in 0..3 {
                worst = worst.max((fa[x] - fb[x]).abs());
            }
        }
    }
    CheckResult::from_worst("gauge-equivalence", worst, 1e-12)
}

fn check_residuals(cfg: &Config) -> CheckResult {
    let mut worst = 0.0f64;
    let mut worst_norm = 0.0f64;
    let mut worst_ortho = 0.0f64;
    for f in sample_fields(cfg) {
        let fq = Quantity::field_kvcm(f);
        for effective in [false, true] {
            let h = if effective {
                build_effective(&cfg.params, cfg.sweep.n, fq).unwrap()
            } else {
                build_hermitian(&cfg.params, cfg.sweep.n, fq).unwrap()
            };
            let pairs = match eig3(&h) {
                Ok(p) => p,
                Err(e) => return CheckResult::fail("residual-certificates", e.to_string()),
            };
            for p in &pairs {
                worst = worst.max(p.residual / p.hnorm);
                let n: f64 = p.vector.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt();
                worst_norm = worst_norm.max((n - 1.0).abs());
            }
            if !effective {
                for i in 0..3 {
                    for j in (i + 1)..3 {
                        worst_ortho = worst_ortho
                            .max(dot_conj(&pairs[i].vector, &pairs[j].vector).norm());
                    }
                }
            }
        }
    }
    if worst <= RESIDUAL_TOL && worst_norm <= 1e-14 && worst_ortho <= 1e-10 {
        CheckResult::pass(
            "residual-certificates",
            format!("residual {worst:.3e}, norm defect {worst_norm:.3e}, overlap {worst_ortho:.3e}"),
        )
    } else {
        CheckResult::fail(
            "residual-certificates",
            format!("residual {worst:.3e}, norm defect {worst_norm:.3e}, overlap {worst_ortho:.3e}"),
        )
    }
}

fn check_sum_rules(cfg: &Config) -> CheckResult {
    let spec = SweepSpec {
        steps: 101,
        labeling: Labeling::EnergyOrdered,
        ..cfg.sweep
    };
    let p = &cfg.params;
    let mut worst_frac = 0.0f64;
    let mut worst_col = 0.0f64;
    let mut worst_gamma = 0.0f64;

    let hermitian_rows = match run_sweep_seq(p, &spec, false, &cfg.thresholds) {
        Ok(r) => r,
        Err(e) => return CheckResult::fail("sum-rules", e.to_string()),
    };
    for row in &hermitian_rows {
        let mut col = [0.0f64; 3];
        for rec in &row.energy_ordered {
            let s: f64 = rec.obs.fractions.iter().sum();
            worst_frac = worst_frac.max((s - 1.0).abs());
            for (c, fr) in col.iter_mut().zip(rec.obs.fractions) {
                *c += fr;
            }
        }
        for c in col {
            worst_col = worst_col.max((c - 1.0).abs());
        }
    }

    let effective_rows = run_sweep_seq(p, &spec, true, &cfg.thresholds).unwrap();
    let nf = f64::from(spec.n);
    let gamma_total_mev =
        (3.0 * nf - 2.0) * p.kappa_mev() + p.gamma_dx_mev() + p.gamma_ix_mev();
    if gamma_total_mev > 0.0 {
        let expected_ghz = gamma_total_mev / crate::units::constants::HBAR_MEV_S / 1e9;
        for row in &effective_rows {
            let total: f64 = row.energy_ordered.iter().map(|r| r.obs.gamma_ghz).sum();
            worst_gamma = worst_gamma.max((total - expected_ghz).abs() / expected_ghz);
        }
    }

    if worst_frac <= 1e-12 && worst_col <= 1e-10 && worst_gamma <= 1e-10 {
        CheckResult::pass(
            "sum-rules",
            format!("fractions {worst_frac:.3e}, columns {worst_col:.3e}, gamma trace {worst_gamma:.3e}"),
        )
    } else {
        CheckResult::fail(
            "sum-rules",
            format!("fractions {worst_frac:.3e}, columns {worst_col:.3e}, gamma trace {worst_gamma:.3e}"),
        )
    }
}

fn check_resonance(cfg: &Config) -> CheckResult {
    match find_resonance(&cfg.params, cfg.sweep.n) {
        Ok(r) => {
            let err = (r.numeric_kvcm - r.closed_form_kvcm).abs();
            if err <= 1e-4 && !r.at_boundary {
                CheckResult::pass(
                    "resonance-consistency",
                    format!(
                        "closed form {} kV/cm, numeric off by {err:.2e}",
                        r.closed_form_kvcm
                    ),
                )
            } else {
                CheckResult::fail(
                    "resonance-consistency",
                    format!(
                        "closed form {}, numeric {} (boundary: {})",
                        r.closed_form_kvcm, r.numeric_kvcm, r.at_boundary
                    ),
                )
            }
        }
        Err(e) => CheckResult::fail("resonance-consistency", e.to_string()),
    }
}

fn check_jc_splitting(cfg: &Config) -> CheckResult {
    let g = cfg.params.g_mev();
    if g == 0.0 {
        return CheckResult::pass("jc-splitting", "g = 0, nothing to check".into());
    }
    // cavity resonant with DX, tunneling off, IX parked 30 meV above
    let p = SystemParams::from_mev_nm(
        cfg.params.omega_c_mev(),
        30.0,
        0.0,
        cfg.params.d_nm(),
        0.0,
        g,
        0.0,
        0.0,
        0.0,
    )
    .unwrap();
    let mut worst = 0.0f64;
    for n in [1u32, 4] {
        let h = build_hermitian(&p, n, Quantity::field_kvcm(0.0)).unwrap();
        let pairs = eig3(&h).unwrap();
        let split = pairs[1].value.re - pairs[0].value.re;
        let expect = 2.0 * g * f64::from(n).sqrt();
        worst = worst.max((split - expect).abs() / expect);
    }
    CheckResult::from_worst("jc-splitting", worst, 1e-10)
}

/// Run every invariant check against a configuration.
pub fn run_all(cfg: &Config) -> Vec<CheckResult> {
    vec![
        check_units(cfg),
        check_hermiticity(cfg),
        check_trace(cfg),
        check_gauge(cfg),
        check_residuals(cfg),
        check_sum_rules(cfg),
        check_resonance(cfg),
        check_jc_splitting(cfg),
    ]
}
