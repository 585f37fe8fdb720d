//! End-to-end checks of the config → sweep → CSV pipeline plus the bulk
//! algebraic invariants of the eigensolver.

mod common;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use dipolariton::config::{load_config, parse_config};
use dipolariton::model::SystemParams;
use dipolariton::output::{csv_string, extract_echo};
use dipolariton::spectral::eig3_matrix;
use dipolariton::sweep::{run_sweep, run_sweep_seq, Labeling, SweepSpec};
use num_complex::Complex64;

#[test]
fn shipped_default_config_matches_documented_values() {
    let cfg = load_config(&common::repo_path("configs/default.cfg")).unwrap();
    assert_eq!(cfg.params.omega_c_mev(), 1320.7);
    assert_eq!(cfg.params.delta_ix_dx_mev(), -8.625);
    assert_eq!(cfg.params.delta_c_dx_mev(), 0.0);
    assert_eq!(cfg.params.d_nm(), 15.0);
    assert_eq!(cfg.params.j_mev(), 0.828);
    let g16 = dipolariton::units::angular_ghz_to_energy(16.0)
        .unwrap()
        .mev()
        .unwrap();
    assert_eq!(cfg.params.g_mev(), g16);
    assert_eq!(cfg.params.kappa_mev(), g16);
    let g01 = dipolariton::units::angular_ghz_to_energy(0.1)
        .unwrap()
        .mev()
        .unwrap();
    assert_eq!(cfg.params.gamma_dx_mev(), g01);
    assert_eq!(cfg.params.gamma_ix_mev(), 0.0);
    assert_eq!(cfg.sweep.steps, 801);
    assert_eq!(cfg.sweep.n, 1);
    assert_eq!(cfg.sweep.labeling, Labeling::Both);
    // window defaulted around the tunneling resonance
    assert_eq!(cfg.sweep.f_start_kvcm, -25.75);
    assert_eq!(cfg.sweep.f_end_kvcm, 14.25);

    let detuned = load_config(&common::repo_path("configs/detuned_cavity.cfg")).unwrap();
    assert_eq!(detuned.params.delta_c_dx_mev(), 10.7);
}

#[test]
fn csv_is_rectangular_and_parses_without_quotes() {
    let cfg = load_config(&common::repo_path("configs/default.cfg")).unwrap();
    let rows = run_sweep(&cfg.params, &cfg.sweep, true, &cfg.thresholds).unwrap();
    let text = csv_string(&rows, &cfg, true).unwrap();

    let data: Vec<&str> = text.lines().filter(|l| !l.starts_with('#')).collect();
    assert_eq!(data.len(), 1 + 801);
    let width = data[0].split(',').count();
    for line in &data {
        assert_eq!(line.split(',').count(), width);
        assert!(!line.contains('"') && !line.contains(';'));
    }
    // every header is unique
    let mut headers: Vec<&str> = data[0].split(',').collect();
    let total = headers.len();
    headers.sort_unstable();
    headers.dedup();
    assert_eq!(headers.len(), total);

    // the echo block reproduces the configuration exactly
    let echo = extract_echo(&text).unwrap();
    assert_eq!(parse_config(&echo).unwrap(), cfg);
}

#[test]
fn middle_branch_energy_is_continuous() {
    // Eigenvalues move no faster than the bias term itself: only the IX
    // diagonal depends on F, so per step |dE| <= e*d*dF (Weyl). The
    // observed maximum is far below even that.
    let cfg = load_config(&common::repo_path("configs/default.cfg")).unwrap();
    let rows = run_sweep(&cfg.params, &cfg.sweep, false, &cfg.thresholds).unwrap();
    let df = (cfg.sweep.f_end_kvcm - cfg.sweep.f_start_kvcm) / (cfg.sweep.steps - 1) as f64;
    let weyl_bound = 0.1 * cfg.params.d_nm() * df;
    let mut max_step = 0.0f64;
    for w in rows.windows(2) {
        let de = (w[1].energy_ordered[1].re_e_mev - w[0].energy_ordered[1].re_e_mev).abs();
        max_step = max_step.max(de);
    }
    assert!(
        max_step <= weyl_bound,
        "E_MP jumped {max_step} meV in one step (bound {weyl_bound})"
    );
}

#[test]
fn tracked_labels_follow_character_through_true_crossings() {
    // g = 0 decouples the photon, so the cavity line truly crosses the
    // exciton branches; overlap tracking must keep the photon label on
    // the photon while the energy ordering swaps.
    let p =
        SystemParams::from_mev_nm(1320.7, -8.625, 10.7, 15.0, 0.828, 0.0, 0.0, 0.0, 0.0).unwrap();
    let spec = SweepSpec {
        f_start_kvcm: -25.75,
        f_end_kvcm: 14.25,
        steps: 801,
        n: 1,
        labeling: Labeling::Both,
    };
    let thresholds =
        dipolariton::polariton::RegimeThresholds::default_for(dipolariton::units::Quantity::length_nm(15.0))
            .unwrap();
    let rows = run_sweep_seq(&p, &spec, false, &thresholds).unwrap();

    // seeded at the left edge the MP label is the photon line
    let mut saw_energy_disagreement = false;
    for row in &rows {
        let (tracked, overlap) = row.tracked.as_ref().unwrap();
        assert!(tracked[1].obs.fractions[2] > 0.999, "MP lost photon character at F = {}", row.f_kvcm);
        assert!(*overlap > 2.9);
        if (tracked[1].re_e_mev - row.energy_ordered[1].re_e_mev).abs() > 1e-9 {
            saw_energy_disagreement = true;
        }
    }
    // and the photon line really does change its energy rank inside the window
    assert!(saw_energy_disagreement);
}

#[test]
fn tracked_equals_energy_order_far_from_crossings() {
    // every inter-branch gap in this window stays far above J and 2g
    let p =
        SystemParams::from_mev_nm(1320.7, -40.0, 20.0, 15.0, 0.828, 0.0662, 0.0, 0.0, 0.0).unwrap();
    let spec = SweepSpec {
        f_start_kvcm: -5.0,
        f_end_kvcm: 5.0,
        steps: 101,
        n: 1,
        labeling: Labeling::Both,
    };
    let thresholds =
        dipolariton::polariton::RegimeThresholds::default_for(dipolariton::units::Quantity::length_nm(15.0))
            .unwrap();
    let rows = run_sweep_seq(&p, &spec, false, &thresholds).unwrap();
    let mut min_gap = f64::INFINITY;
    for row in &rows {
        let e = &row.energy_ordered;
        min_gap = min_gap.min(e[1].re_e_mev - e[0].re_e_mev);
        min_gap = min_gap.min(e[2].re_e_mev - e[1].re_e_mev);
        let (tracked, _) = row.tracked.as_ref().unwrap();
        for k in 0..3 {
            assert_eq!(tracked[k].re_e_mev, e[k].re_e_mev);
        }
    }
    assert!(min_gap > 0.828f64.max(2.0 * 0.0662));
}

#[test]
fn middle_branch_darkens_and_polarizes_at_resonance() {
    // narrow window around the tunneling resonance: the MP brightness
    // dips to zero exactly at F* while its dipole moment peaks there
    let cfg = load_config(&common::repo_path("configs/default.cfg")).unwrap();
    let f_star = cfg.params.delta_ix_dx_mev() / (0.1 * cfg.params.d_nm());
    let spec = SweepSpec {
        f_start_kvcm: f_star - 10.0,
        f_end_kvcm: f_star + 10.0,
        steps: 401,
        n: 1,
        labeling: Labeling::EnergyOrdered,
    };
    let rows = run_sweep_seq(&cfg.params, &spec, false, &cfg.thresholds).unwrap();
    let i_star = 200;
    assert_eq!(rows[i_star].f_kvcm, f_star);
    let bpd: Vec<f64> = rows.iter().map(|r| r.energy_ordered[1].obs.bpd).collect();
    let edm: Vec<f64> = rows
        .iter()
        .map(|r| r.energy_ordered[1].obs.edm_nm)
        .collect();
    assert!(bpd[i_star] < 1e-6, "bpd at resonance: {}", bpd[i_star]);
    for i in 0..rows.len() {
        assert!(bpd[i] >= bpd[i_star]);
        assert!(edm[i] <= edm[i_star]);
    }
    // and away from resonance the MP brightens back toward the
    // conventional-polariton plateau
    assert!(bpd[0] > 0.45 && bpd[bpd.len() - 1] > 0.45);
}

#[test]
fn eigenvalue_sums_match_trace_and_determinant() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x7a11_ce55);
    for _ in 0..200 {
        let m = common::random_complex(&mut rng, 1.0);
        let pairs = eig3_matrix(&m).unwrap();
        let sum: Complex64 = pairs.iter().map(|p| p.value).sum();
        let prod: Complex64 = pairs.iter().map(|p| p.value).product();
        let tr = m.trace();
        let det = m.det();
        assert!(
            (sum - tr).norm() <= 1e-11 * tr.norm().max(1.0),
            "trace mismatch {:e}",
            (sum - tr).norm()
        );
        assert!(
            (prod - det).norm() <= 1e-10 * det.norm().max(1.0),
            "determinant mismatch {:e}",
            (prod - det).norm()
        );
    }
}

#[test]
fn hermitian_eigenvalues_respect_weyl_perturbation_bound() {
    let mut rng = ChaCha8Rng::seed_from_u64(0x0b5e_55ed);
    for _ in 0..200 {
        let m = common::random_hermitian(&mut rng, 1.0);
        let scale = rng.gen_range(1e-8..1e-2);
        let delta = common::random_hermitian(&mut rng, scale);
        let mut shifted = m.e;
        for i in 0..3 {
            for j in 0..3 {
                shifted[i][j] += delta.e[i][j];
            }
        }
        let m2 = dipolariton::mat3::Matrix3c::from_rows(shifted);
        let a = eig3_matrix(&m).unwrap();
        let b = eig3_matrix(&m2).unwrap();
        // ||delta||_2 <= ||delta||_F
        let bound = delta.frobenius_norm() + 1e-12;
        for k in 0..3 {
            assert!(
                (a[k].value.re - b[k].value.re).abs() <= bound,
                "Weyl violated: {} > {}",
                (a[k].value.re - b[k].value.re).abs(),
                bound
            );
        }
    }
}
