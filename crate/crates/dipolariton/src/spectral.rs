//! Eigendecomposition of the 3×3 rung matrices with certified residuals,
//! plus branch identification across a sweep.
//!
//! The solver shifts by trace/3 and rescales by the Frobenius norm before
//! extracting the roots of the characteristic cubic (Cardano, then Newton
//! polish), so the cubic coefficients stay O(1) even though the physical
//! diagonal sits three orders of magnitude above the couplings. Right
//! eigenvectors come from bilinear row cross products of `H − λI`, with a
//! rank-aware fallback for degenerate clusters and an inverse-iteration
//! rescue step. Every returned pair carries `‖H·v − λ·v‖₂` as a residual
//! certificate; pairs whose certificate would exceed
//! [`RESIDUAL_TOL`]`·‖H‖_F` are an error, not a silent result.
//!
//! Conventions: eigenvalues are ordered by (Re, Im); each vector has unit
//! 2-norm and its largest-magnitude component made real and non-negative,
//! so output is deterministic. For Hermitian input the imaginary parts are
//! validated against 1e-12·‖H‖_F and then zeroed, and degenerate subspaces
//! are orthogonalized.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat3::{
    cross_bilinear, dot_conj, normalize, scale_vec, sub_vec, vec_norm, Matrix3c, Vec3c,
};
use crate::model::RungMatrix;

/// Residual certificate bound, relative to ‖H‖_F.
pub const RESIDUAL_TOL: f64 = 1e-10;

/// Eigenvalues closer than this (relative to ‖H‖_F) are treated as one
/// degenerate cluster.
pub const DEGENERACY_TOL: f64 = 1e-12;

/// Pairwise eigenvector overlap above which the matrix is flagged as
/// (near-)defective, i.e. at an exceptional point.
pub const DEFECTIVE_OVERLAP: f64 = 0.999;

const ZERO: Complex64 = Complex64::new(0.0, 0.0);

/// One certified right eigenpair.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EigenPair {
    /// Complex energy in meV.
    pub value: Complex64,
    /// Unit-norm right eigenvector in the (IX, DX, photon) basis.
    pub vector: Vec3c,
    /// Certified residual ‖H·v − λ·v‖₂ in meV.
    pub residual: f64,
    /// Frobenius norm of the source matrix (the residual's reference scale).
    pub hnorm: f64,
    /// True when this vector overlaps another eigenvector beyond
    /// [`DEFECTIVE_OVERLAP`].
    pub near_defective: bool,
}

/// The three branches of one rung, labelled LP/MP/UP.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct BranchSet {
    pub lp: EigenPair,
    pub mp: EigenPair,
    pub up: EigenPair,
}

impl BranchSet {
    /// Label eigenpairs by ascending real part (the energy-ordered policy).
    pub fn energy_ordered(pairs: [EigenPair; 3]) -> Self {
        let mut p = pairs;
        p.sort_by(|a, b| {
            (a.value.re, a.value.im)
                .partial_cmp(&(b.value.re, b.value.im))
                .expect("finite eigenvalues")
        });
        BranchSet {
            lp: p[0],
            mp: p[1],
            up: p[2],
        }
    }

    pub fn as_array(&self) -> [&EigenPair; 3] {
        [&self.lp, &self.mp, &self.up]
    }
}

/// Outcome of overlap continuation between adjacent sweep points.
#[derive(Debug, Clone, Copy)]
pub struct TrackedBranches {
    pub set: BranchSet,
    /// Σ of the chosen permutation's overlaps; 3.0 means perfect continuity.
    pub total_overlap: f64,
    /// `permutation[k]` is the index into `current` assigned to label k.
    pub permutation: [usize; 3],
}

/// Diagonalize a rung matrix.
pub fn eig3(h: &RungMatrix) -> Result<[EigenPair; 3]> {
    eig3_matrix(h.entries())
}

/// Diagonalize a raw complex 3×3 matrix.
pub fn eig3_matrix(m: &Matrix3c) -> Result<[EigenPair; 3]> {
    if !m.is_finite() {
        return Err(Error::NonFiniteInput);
    }
    let hnorm = m.frobenius_norm();
    if hnorm == 0.0 {
        return Ok(std::array::from_fn(|i| {
            let mut v = [ZERO; 3];
            v[i] = Complex64::new(1.0, 0.0);
            EigenPair {
                value: ZERO,
                vector: v,
                residual: 0.0,
                hnorm,
                near_defective: false,
            }
        }));
    }

    let max_abs = m
        .e
        .iter()
        .flatten()
        .map(|z| z.norm())
        .fold(0.0f64, f64::max);
    let hermitian = m.hermiticity_defect() <= 1e-14 * max_abs;

    // Work in the shifted, scaled frame C = m/||m||_F − (tr/3)·I. The
    // cubic coefficients stay O(1), and more importantly the Rayleigh
    // refinement below sees a matrix whose entries are the couplings and
    // detunings themselves, not the huge common diagonal, which keeps
    // tiny level splittings accurate in absolute terms.
    let a = m.scale(1.0 / hnorm);
    let shift = a.trace() / 3.0;
    let c = a.sub_scalar_diag(shift);

    // char poly of the traceless C: mu^3 + p*mu + q
    let p = c.second_invariant();
    let q = -c.det();
    let mut mus = depressed_cubic_roots(p, q);
    for r in mus.iter_mut() {
        *r = newton_polish(*r, p, q);
    }
    if hermitian {
        for mu in mus.iter_mut() {
            if mu.im.abs() > 1e-12 {
                return Err(Error::NumericalFailure {
                    residual: mu.im.abs() * hnorm,
                });
            }
            mu.im = 0.0;
        }
    }
    mus.sort_by(|x, y| {
        (x.re, x.im)
            .partial_cmp(&(y.re, y.im))
            .expect("finite roots")
    });

    let vectors = eigenvectors(&c, &mus);

    // refine each (mu, v) in the shifted frame
    let mut refined: [(Complex64, Vec3c, f64); 3] = std::array::from_fn(|k| {
        let mut v = vectors[k];
        fix_phase(&mut v);
        let mut mu = mus[k];
        let mut res = residual_norm(&c, mu, &v);
        refine_pair(&c, &mut mu, &mut v, &mut res, hermitian);
        (mu, v, res)
    });
    if hermitian {
        reorthogonalize_if_collapsed(&c, &mut refined);
    }
    // refinement may nudge eigenvalues; restore the (Re, Im) order
    refined.sort_by(|x, y| {
        (x.0.re, x.0.im)
            .partial_cmp(&(y.0.re, y.0.im))
            .expect("finite eigenvalues")
    });

    let bound = RESIDUAL_TOL * hnorm;
    let mut pairs: [EigenPair; 3] = std::array::from_fn(|k| {
        let (mu, v, _) = refined[k];
        let value = (mu + shift) * hnorm;
        EigenPair {
            value,
            vector: v,
            residual: residual_norm(m, value, &v),
            hnorm,
            near_defective: false,
        }
    });
    for pair in &pairs {
        if pair.residual > bound {
            return Err(Error::NumericalFailure {
                residual: pair.residual,
            });
        }
    }

    // exceptional-point diagnostic
    for i in 0..3 {
        for j in (i + 1)..3 {
            if dot_conj(&pairs[i].vector, &pairs[j].vector).norm() > DEFECTIVE_OVERLAP {
                pairs[i].near_defective = true;
                pairs[j].near_defective = true;
            }
        }
    }

    Ok(pairs)
}

/// When refinement drags two copies of a close Hermitian pair onto the
/// same eigenvector, split them back apart inside their invariant
/// subspace. Eigenvectors of distinct Hermitian eigenvalues are
/// orthogonal, so the orthogonalized vector is again an eigenvector and
/// its Rayleigh quotient the matching eigenvalue.
fn reorthogonalize_if_collapsed(c: &Matrix3c, triples: &mut [(Complex64, Vec3c, f64); 3]) {
    for i in 0..3 {
        for j in (i + 1)..3 {
            let overlap = dot_conj(&triples[i].1, &triples[j].1).norm();
            if overlap <= 0.99 {
                continue;
            }
            let vi = triples[i].1;
            let proj = dot_conj(&vi, &triples[j].1);
            let mut w = sub_vec(&triples[j].1, &scale_vec(&vi, proj));
            if normalize(&mut w) < 1e-8 {
                w = fallback_orthogonal(&vi);
                // keep it orthogonal to the remaining vector as well
                let k = 3 - i - j;
                let proj2 = dot_conj(&triples[k].1, &w);
                w = sub_vec(&w, &scale_vec(&triples[k].1, proj2));
                if normalize(&mut w) < 1e-8 {
                    continue;
                }
            }
            fix_phase(&mut w);
            let mu = Complex64::new(rayleigh(c, &w).re, 0.0);
            let res = residual_norm(c, mu, &w);
            if res <= triples[j].2.max(RESIDUAL_TOL) {
                triples[j] = (mu, w, res);
            }
        }
    }
}

fn rayleigh(m: &Matrix3c, v: &Vec3c) -> Complex64 {
    let hv = m.mul_vec(v);
    dot_conj(v, &hv)
}

/// Roots of mu^3 + p*mu + q with complex coefficients (Cardano). The
/// sqrt branch with the larger |−q/2 ± √Δ| avoids cancellation.
fn depressed_cubic_roots(p: Complex64, q: Complex64) -> [Complex64; 3] {
    if p.norm() == 0.0 && q.norm() == 0.0 {
        return [ZERO; 3];
    }
    let half_q = q / 2.0;
    let disc = half_q * half_q + (p / 3.0).powu(3);
    let sq = disc.sqrt();
    let t1 = -half_q + sq;
    let t2 = -half_q - sq;
    let t = if t1.norm() >= t2.norm() { t1 } else { t2 };
    if t.norm() == 0.0 {
        // t vanishes only when p = q = 0, handled above; belt anyway
        return [ZERO; 3];
    }
    let u = t.cbrt();
    let omega = Complex64::new(-0.5, 0.75f64.sqrt());
    let mut out = [ZERO; 3];
    let mut w = u;
    for root in out.iter_mut() {
        *root = w - p / (3.0 * w);
        w *= omega;
    }
    out
}

fn newton_polish(mut mu: Complex64, p: Complex64, q: Complex64) -> Complex64 {
    let f = |z: Complex64| (z * z * z) + p * z + q;
    let mut best = mu;
    let mut best_norm = f(mu).norm();
    for _ in 0..20 {
        let fv = f(mu);
        if fv.norm() == 0.0 {
            return mu;
        }
        let dv = 3.0 * mu * mu + p;
        if dv.norm() == 0.0 {
            break;
        }
        let step = fv / dv;
        if !step.re.is_finite() || !step.im.is_finite() {
            break;
        }
        mu -= step;
        let n = f(mu).norm();
        if n < best_norm {
            best_norm = n;
            best = mu;
        } else {
            break;
        }
    }
    best
}

/// Right eigenvectors of the scaled matrix `a` for sorted eigenvalues,
/// handled cluster by cluster so degenerate and defective cases stay
/// deterministic.
fn eigenvectors(a: &Matrix3c, lam: &[Complex64; 3]) -> [Vec3c; 3] {
    // ||a||_F = 1 by construction, so the cluster tolerance is absolute.
    let close = |x: Complex64, y: Complex64| (x - y).norm() <= DEGENERACY_TOL;

    let mut out = [[ZERO; 3]; 3];
    let mut k = 0;
    while k < 3 {
        let mut size = 1;
        while k + size < 3 && close(lam[k + size - 1], lam[k + size]) {
            size += 1;
        }
        match size {
            1 => {
                out[k] = simple_vector(a, lam[k]);
            }
            2 => {
                let pair = cluster_vectors_2(a, (lam[k] + lam[k + 1]) / 2.0);
                out[k] = pair[0];
                out[k + 1] = pair[1];
            }
            _ => {
                let triple = cluster_vectors_3(a, (lam[0] + lam[1] + lam[2]) / 3.0);
                out = triple;
            }
        }
        k += size;
    }
    out
}

fn simple_vector(a: &Matrix3c, lam: Complex64) -> Vec3c {
    let b = a.sub_scalar_diag(lam);
    let crosses = [
        cross_bilinear(&b.row(0), &b.row(1)),
        cross_bilinear(&b.row(1), &b.row(2)),
        cross_bilinear(&b.row(2), &b.row(0)),
    ];
    let mut best = crosses[0];
    let mut best_norm = vec_norm(&best);
    for c in &crosses[1..] {
        let n = vec_norm(c);
        if n > best_norm {
            best = *c;
            best_norm = n;
        }
    }
    if best_norm < 1e-300 {
        // numerically rank <= 1 even for a "simple" eigenvalue
        return rank1_null_basis(&b)[0];
    }
    let mut v = best;
    normalize(&mut v);
    v
}

/// Two null-space vectors when `a − λI` has numerical rank ≤ 1
/// (diagonalizable double eigenvalue), or the single defective vector
/// repeated when the rank is 2 (Jordan block).
fn cluster_vectors_2(a: &Matrix3c, lam: Complex64) -> [Vec3c; 2] {
    let b = a.sub_scalar_diag(lam);
    let crosses = [
        cross_bilinear(&b.row(0), &b.row(1)),
        cross_bilinear(&b.row(1), &b.row(2)),
        cross_bilinear(&b.row(2), &b.row(0)),
    ];
    let cross_max = crosses.iter().map(vec_norm).fold(0.0f64, f64::max);
    if cross_max > 1e-8 {
        // rank 2: geometric multiplicity 1, genuinely defective
        let v = simple_vector(a, lam);
        return [v, v];
    }
    let basis = rank1_null_basis(&b);
    let mut v1 = basis[0];
    let mut v2 = basis[1];
    // Gram-Schmidt keeps v2 inside the null space (it is a linear
    // subspace) while making the pair orthonormal.
    let proj = dot_conj(&v1, &v2);
    v2 = sub_vec(&v2, &scale_vec(&v1, proj));
    if normalize(&mut v2) < 1e-12 {
        v2 = fallback_orthogonal(&v1);
    }
    normalize(&mut v1);
    [v1, v2]
}

fn cluster_vectors_3(a: &Matrix3c, lam: Complex64) -> [Vec3c; 3] {
    let b = a.sub_scalar_diag(lam);
    if b.frobenius_norm() < 1e-10 {
        // scalar matrix: any orthonormal basis works; use the standard one
        return std::array::from_fn(|i| {
            let mut v = [ZERO; 3];
            v[i] = Complex64::new(1.0, 0.0);
            v
        });
    }
    let crosses = [
        cross_bilinear(&b.row(0), &b.row(1)),
        cross_bilinear(&b.row(1), &b.row(2)),
        cross_bilinear(&b.row(2), &b.row(0)),
    ];
    let cross_max = crosses.iter().map(vec_norm).fold(0.0f64, f64::max);
    if cross_max > 1e-8 {
        // rank 2: one eigenvector for the whole chain
        let v = simple_vector(a, lam);
        return [v, v, v];
    }
    // rank 1: two-dimensional eigenspace, third copy repeats the first
    let basis = cluster_vectors_2(a, lam);
    [basis[0], basis[1], basis[0]]
}

/// Orthonormal-ish pair spanning `{v : r·v = 0}` (bilinear) for the
/// largest row r of a rank-1 matrix.
fn rank1_null_basis(b: &Matrix3c) -> [Vec3c; 2] {
    let rows = [b.row(0), b.row(1), b.row(2)];
    let mut r = rows[0];
    let mut rn = vec_norm(&r);
    for row in &rows[1..] {
        let n = vec_norm(row);
        if n > rn {
            r = *row;
            rn = n;
        }
    }
    if rn < 1e-300 {
        return [
            [Complex64::new(1.0, 0.0), ZERO, ZERO],
            [ZERO, Complex64::new(1.0, 0.0), ZERO],
        ];
    }
    let (x, y, z) = (r[0], r[1], r[2]);
    // each candidate is bilinear-orthogonal to r by construction
    let candidates: [Vec3c; 3] = [[y, -x, ZERO], [z, ZERO, -x], [ZERO, z, -y]];
    let mut order = [0usize, 1, 2];
    order.sort_by(|&i, &j| {
        vec_norm(&candidates[j])
            .partial_cmp(&vec_norm(&candidates[i]))
            .expect("finite")
    });
    let mut v1 = candidates[order[0]];
    let mut v2 = candidates[order[1]];
    normalize(&mut v1);
    normalize(&mut v2);
    [v1, v2]
}

fn fallback_orthogonal(v: &Vec3c) -> Vec3c {
    for i in 0..3 {
        let mut e = [ZERO; 3];
        e[i] = Complex64::new(1.0, 0.0);
        let proj = dot_conj(v, &e);
        let mut w = sub_vec(&e, &scale_vec(v, proj));
        if normalize(&mut w) > 0.5 {
            return w;
        }
    }
    [Complex64::new(1.0, 0.0), ZERO, ZERO]
}

/// Largest-magnitude component made real and non-negative. Ties go to the
/// lowest index so output is reproducible.
fn fix_phase(v: &mut Vec3c) {
    let mut idx = 0;
    let mut mag = v[0].norm();
    for (i, z) in v.iter().enumerate().skip(1) {
        if z.norm() > mag {
            mag = z.norm();
            idx = i;
        }
    }
    if mag == 0.0 {
        return;
    }
    let phase = v[idx] / mag;
    let rot = phase.conj();
    for z in v.iter_mut() {
        *z *= rot;
    }
    // kill the residual imaginary dust on the anchor component
    v[idx] = Complex64::new(v[idx].re.abs(), 0.0);
}

fn residual_norm(m: &Matrix3c, lam: Complex64, v: &Vec3c) -> f64 {
    let hv = m.mul_vec(v);
    let lv = scale_vec(v, lam);
    vec_norm(&sub_vec(&hv, &lv))
}

/// Rayleigh quotient iteration in the shifted frame, keeping the best
/// (μ, v) seen by residual. Converges cubically for Hermitian input and
/// fast enough otherwise; for genuinely defective matrices it simply
/// stops improving and the best pair stands.
fn refine_pair(
    c: &Matrix3c,
    mu_best: &mut Complex64,
    v_best: &mut Vec3c,
    res_best: &mut f64,
    hermitian: bool,
) {
    let mut mu = *mu_best;
    let mut v = *v_best;
    let mut res = *res_best;
    for _ in 0..5 {
        if res <= 4.0 * f64::EPSILON {
            break;
        }
        let b = c.sub_scalar_diag(mu);
        let Some(mut w) = lu_solve(&b, &v) else {
            break;
        };
        if normalize(&mut w) == 0.0 {
            break;
        }
        fix_phase(&mut w);
        let mut mu_new = rayleigh(c, &w);
        if hermitian {
            mu_new.im = 0.0;
        }
        let r = residual_norm(c, mu_new, &w);
        if r < *res_best {
            *res_best = r;
            *v_best = w;
            *mu_best = mu_new;
        }
        if r >= res {
            break;
        }
        v = w;
        mu = mu_new;
        res = r;
    }
}

/// 3×3 complex LU with partial pivoting; exactly singular pivots are
/// nudged, which is the standard inverse-iteration trick.
fn lu_solve(b: &Matrix3c, rhs: &Vec3c) -> Option<Vec3c> {
    let mut m = b.e;
    let mut x = *rhs;
    let scale = b.frobenius_norm().max(1e-300);
    for col in 0..3 {
        let mut piv = col;
        for row in (col + 1)..3 {
            if m[row][col].norm() > m[piv][col].norm() {
                piv = row;
            }
        }
        if piv != col {
            m.swap(col, piv);
            x.swap(col, piv);
        }
        if m[col][col].norm() < 1e-300 {
            m[col][col] = Complex64::new(f64::EPSILON * scale, 0.0);
        }
        for row in (col + 1)..3 {
            let factor = m[row][col] / m[col][col];
            for k in col..3 {
                let sub = factor * m[col][k];
                m[row][k] -= sub;
            }
            let subx = factor * x[col];
            x[row] -= subx;
        }
    }
    for col in (0..3).rev() {
        for k in (col + 1)..3 {
            let sub = m[col][k] * x[k];
            x[col] -= sub;
        }
        x[col] /= m[col][col];
        if !x[col].re.is_finite() || !x[col].im.is_finite() {
            return None;
        }
    }
    Some(x)
}

const PERMUTATIONS: [[usize; 3]; 6] = [
    [0, 1, 2],
    [0, 2, 1],
    [1, 0, 2],
    [1, 2, 0],
    [2, 0, 1],
    [2, 1, 0],
];

/// Reassign LP/MP/UP labels by maximal eigenvector overlap with the
/// previous sweep point, exhaustively over all six permutations.
pub fn track_branches(prev: &BranchSet, current: &[EigenPair; 3]) -> TrackedBranches {
    let prev_vecs = [&prev.lp.vector, &prev.mp.vector, &prev.up.vector];
    let mut overlap = [[0.0f64; 3]; 3];
    for (i, pv) in prev_vecs.iter().enumerate() {
        for (j, cur) in current.iter().enumerate() {
            overlap[i][j] = dot_conj(pv, &cur.vector).norm();
        }
    }
    let mut best = PERMUTATIONS[0];
    let mut best_total = -1.0;
    for perm in PERMUTATIONS {
        let total: f64 = (0..3).map(|i| overlap[i][perm[i]]).sum();
        if total > best_total {
            best_total = total;
            best = perm;
        }
    }
    TrackedBranches {
        set: BranchSet {
            lp: current[best[0]],
            mp: current[best[1]],
            up: current[best[2]],
        },
        total_overlap: best_total,
        permutation: best,
    }
}
