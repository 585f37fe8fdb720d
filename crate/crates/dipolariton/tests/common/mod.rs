//! Shared test oracles, independent of the library's eigensolver path.
//!
//! Two routes are provided: cyclic complex Jacobi rotations for Hermitian
//! matrices, and characteristic-polynomial roots for general complex
//! matrices where the polynomial is recovered by *interpolation of
//! determinant evaluations* and solved by Durand-Kerner iteration:
//! no Cardano, no trace/minor formulas, no shared code with the crate.

#![allow(dead_code)]

use num_complex::Complex64;
use rand::Rng;

use dipolariton::mat3::Matrix3c;

type C = Complex64;

fn det3(m: &[[C; 3]; 3]) -> C {
    m[0][0] * (m[1][1] * m[2][2] - m[1][2] * m[2][1])
        - m[0][1] * (m[1][0] * m[2][2] - m[1][2] * m[2][0])
        + m[0][2] * (m[1][0] * m[2][1] - m[1][1] * m[2][0])
}

/// Monic characteristic polynomial x^3 + a2 x^2 + a1 x + a0 recovered from
/// det(A - xI) evaluated at x = 0, 1, -1 (with x = 2 as a consistency
/// probe).
fn char_poly_by_interpolation(m: &Matrix3c) -> (C, C, C) {
    let eval = |x: f64| -> C {
        let mut b = m.e;
        for k in 0..3 {
            b[k][k] -= C::new(x, 0.0);
        }
        -det3(&b)
    };
    let m0 = eval(0.0);
    let m1 = eval(1.0);
    let mm1 = eval(-1.0);
    let m2 = eval(2.0);
    let a0 = m0;
    let a2 = (m1 + mm1) / 2.0 - a0;
    let a1 = (m1 - mm1) / 2.0 - C::new(1.0, 0.0);
    // consistency: the recovered cubic must reproduce the fourth sample
    let check = C::new(8.0, 0.0) + 4.0 * a2 + 2.0 * a1 + a0;
    let scale = 1.0 + m2.norm();
    assert!(
        (check - m2).norm() <= 1e-9 * scale,
        "char-poly interpolation inconsistent: {:?} vs {:?}",
        check,
        m2
    );
    (a2, a1, a0)
}

/// Durand-Kerner (Weierstrass) simultaneous root iteration.
fn durand_kerner(a2: C, a1: C, a0: C) -> [C; 3] {
    let p = |x: C| ((x + a2) * x + a1) * x + a0;
    let radius = 1.0 + a2.norm().max(a1.norm()).max(a0.norm());
    let seed = C::new(0.4, 0.9);
    let mut z = [
        seed * radius,
        seed * seed * radius,
        seed * seed * seed * radius,
    ];
    for _ in 0..200 {
        let mut step_max = 0.0f64;
        for i in 0..3 {
            let mut denom = C::new(1.0, 0.0);
            for j in 0..3 {
                if i != j {
                    denom *= z[i] - z[j];
                }
            }
            if denom.norm() == 0.0 {
                // nudge coincident iterates apart deterministically
                z[i] += C::new(1e-6 * radius, 1e-6 * radius);
                continue;
            }
            let delta = p(z[i]) / denom;
            z[i] -= delta;
            step_max = step_max.max(delta.norm());
        }
        if step_max <= 1e-15 * radius {
            break;
        }
    }
    z
}

/// Eigenvalues of an arbitrary complex 3×3 matrix via the interpolated
/// characteristic polynomial, sorted by (Re, Im).
pub fn eigenvalues_char_poly(m: &Matrix3c) -> [C; 3] {
    let (a2, a1, a0) = char_poly_by_interpolation(m);
    let mut roots = durand_kerner(a2, a1, a0);
    roots.sort_by(|x, y| (x.re, x.im).partial_cmp(&(y.re, y.im)).unwrap());
    roots
}

/// Cyclic complex Jacobi diagonalization of a Hermitian matrix. Returns
/// eigenvalues sorted ascending and the unitary eigenvector columns.
pub fn jacobi_hermitian(m: &Matrix3c) -> ([f64; 3], [[C; 3]; 3]) {
    let mut a = m.e;
    // eigenvector accumulator: columns of V
    let mut v = [[C::new(0.0, 0.0); 3]; 3];
    for (k, row) in v.iter_mut().enumerate() {
        row[k] = C::new(1.0, 0.0);
    }
    let scale = {
        let mut s = 0.0;
        for row in &a {
            for z in row {
                s += z.norm_sqr();
            }
        }
        s.sqrt().max(1e-300)
    };

    for _sweep in 0..60 {
        let mut off = 0.0f64;
        for p in 0..3 {
            for q in (p + 1)..3 {
                off += a[p][q].norm_sqr();
            }
        }
        if off.sqrt() <= 1e-15 * scale {
            break;
        }
        for p in 0..3 {
            for q in (p + 1)..3 {
                let apq = a[p][q];
                if apq.norm() <= 1e-300 {
                    continue;
                }
                // unitary rotation zeroing a[p][q]
                let phase = apq / apq.norm();
                let tau = (a[q][q].re - a[p][p].re) / (2.0 * apq.norm());
                let t = if tau >= 0.0 {
                    1.0 / (tau + (1.0 + tau * tau).sqrt())
                } else {
                    -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = t * c;
                // columns transform: col_p' = c*col_p - s*conj(phase)*col_q,
                // col_q' = s*phase*col_p + c*col_q
                let rot = |mat: &mut [[C; 3]; 3]| {
                    for i in 0..3 {
                        let xp = mat[i][p];
                        let xq = mat[i][q];
                        mat[i][p] = c * xp - s * phase.conj() * xq;
                        mat[i][q] = s * phase * xp + c * xq;
                    }
                };
                rot(&mut a);
                rot(&mut v);
                // rows: conjugate-transpose action
                for j in 0..3 {
                    let xp = a[p][j];
                    let xq = a[q][j];
                    a[p][j] = c * xp - s * phase * xq;
                    a[q][j] = s * phase.conj() * xp + c * xq;
                }
            }
        }
    }

    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| a[i][i].re.partial_cmp(&a[j][j].re).unwrap());
    let values = [
        a[order[0]][order[0]].re,
        a[order[1]][order[1]].re,
        a[order[2]][order[2]].re,
    ];
    let mut vectors = [[C::new(0.0, 0.0); 3]; 3];
    for (slot, &col) in order.iter().enumerate() {
        for i in 0..3 {
            vectors[slot][i] = v[i][col];
        }
    }
    (values, vectors)
}

/// Random Hermitian matrix with entries of order `scale`.
pub fn random_hermitian<R: Rng>(rng: &mut R, scale: f64) -> Matrix3c {
    let mut e = [[C::new(0.0, 0.0); 3]; 3];
    for i in 0..3 {
        e[i][i] = C::new(rng.gen_range(-scale..scale), 0.0);
        for j in (i + 1)..3 {
            let z = C::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
            e[i][j] = z;
            e[j][i] = z.conj();
        }
    }
    Matrix3c::from_rows(e)
}

/// Random dense complex matrix with entries of order `scale`.
pub fn random_complex<R: Rng>(rng: &mut R, scale: f64) -> Matrix3c {
    let mut e = [[C::new(0.0, 0.0); 3]; 3];
    for row in e.iter_mut() {
        for z in row.iter_mut() {
            *z = C::new(rng.gen_range(-scale..scale), rng.gen_range(-scale..scale));
        }
    }
    Matrix3c::from_rows(e)
}

/// Greedy-exhaustive matching of two eigenvalue triples: the permutation
/// minimizing the total distance. Returns the per-pair distances.
pub fn match_eigenvalues(a: &[C; 3], b: &[C; 3]) -> [f64; 3] {
    const PERMS: [[usize; 3]; 6] = [
        [0, 1, 2],
        [0, 2, 1],
        [1, 0, 2],
        [1, 2, 0],
        [2, 0, 1],
        [2, 1, 0],
    ];
    let mut best = [f64::INFINITY; 3];
    let mut best_total = f64::INFINITY;
    for perm in PERMS {
        let d = [
            (a[0] - b[perm[0]]).norm(),
            (a[1] - b[perm[1]]).norm(),
            (a[2] - b[perm[2]]).norm(),
        ];
        let total = d[0] + d[1] + d[2];
        if total < best_total {
            best_total = total;
            best = d;
        }
    }
    best
}

/// Path to a file shipped at the repository root.
pub fn repo_path(rel: &str) -> std::path::PathBuf {
    std::path::Path::new(env!("CARGO_MANIFEST_DIR"))
        .join("../..")
        .join(rel)
}
