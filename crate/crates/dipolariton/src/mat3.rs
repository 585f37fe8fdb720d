//! Minimal complex 3×3 matrix and 3-vector helpers.

use num_complex::Complex64;

pub type Vec3c = [Complex64; 3];

/// Dense complex 3×3 matrix, row-major.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Matrix3c {
    pub e: [[Complex64; 3]; 3],
}

impl Matrix3c {
    pub fn zero() -> Self {
        Matrix3c {
            e: [[Complex64::new(0.0, 0.0); 3]; 3],
        }
    }

    pub fn from_rows(rows: [[Complex64; 3]; 3]) -> Self {
        Matrix3c { e: rows }
    }

    pub fn is_finite(&self) -> bool {
        self.e
            .iter()
            .flatten()
            .all(|z| z.re.is_finite() && z.im.is_finite())
    }

    pub fn trace(&self) -> Complex64 {
        self.e[0][0] + self.e[1][1] + self.e[2][2]
    }

    pub fn det(&self) -> Complex64 {
        let e = &self.e;
        e[0][0] * (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            - e[0][1] * (e[1][0] * e[2][2] - e[1][2] * e[2][0])
            + e[0][2] * (e[1][0] * e[2][1] - e[1][1] * e[2][0])
    }

    /// Sum of the three principal 2×2 minors (the λ¹ coefficient of the
    /// characteristic polynomial).
    pub fn second_invariant(&self) -> Complex64 {
        let e = &self.e;
        (e[1][1] * e[2][2] - e[1][2] * e[2][1])
            + (e[0][0] * e[2][2] - e[0][2] * e[2][0])
            + (e[0][0] * e[1][1] - e[0][1] * e[1][0])
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.e
            .iter()
            .flatten()
            .map(|z| z.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }

    pub fn scale(&self, s: f64) -> Self {
        let mut out = *self;
        for row in out.e.iter_mut() {
            for z in row.iter_mut() {
                *z *= s;
            }
        }
        out
    }

    /// `self - z·I`.
    pub fn sub_scalar_diag(&self, z: Complex64) -> Self {
        let mut out = *self;
        out.e[0][0] -= z;
        out.e[1][1] -= z;
        out.e[2][2] -= z;
        out
    }

    pub fn mul_vec(&self, v: &Vec3c) -> Vec3c {
        let mut out = [Complex64::new(0.0, 0.0); 3];
        for (i, row) in self.e.iter().enumerate() {
            out[i] = row[0] * v[0] + row[1] * v[1] + row[2] * v[2];
        }
        out
    }

    pub fn row(&self, i: usize) -> Vec3c {
        self.e[i]
    }

    /// Max deviation from the conjugate transpose.
    pub fn hermiticity_defect(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..3 {
            for j in 0..3 {
                let d = (self.e[i][j] - self.e[j][i].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }
}

pub fn vec_norm(v: &Vec3c) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Sesquilinear inner product ⟨a, b⟩ = Σ conj(aᵢ)·bᵢ.
pub fn dot_conj(a: &Vec3c, b: &Vec3c) -> Complex64 {
    a.iter().zip(b).map(|(x, y)| x.conj() * y).sum()
}

/// Formal (bilinear, no conjugation) cross product. A null vector of a
/// complex matrix must satisfy r·v = 0 against every row in the bilinear
/// sense, which is what this product delivers.
pub fn cross_bilinear(a: &Vec3c, b: &Vec3c) -> Vec3c {
    [
        a[1] * b[2] - a[2] * b[1],
        a[2] * b[0] - a[0] * b[2],
        a[0] * b[1] - a[1] * b[0],
    ]
}

pub fn normalize(v: &mut Vec3c) -> f64 {
    let n = vec_norm(v);
    if n > 0.0 {
        for z in v.iter_mut() {
            *z /= n;
        }
    }
    n
}

pub fn scale_vec(v: &Vec3c, s: Complex64) -> Vec3c {
    [v[0] * s, v[1] * s, v[2] * s]
}

pub fn sub_vec(a: &Vec3c, b: &Vec3c) -> Vec3c {
    [a[0] - b[0], a[1] - b[1], a[2] - b[2]]
}
