//! Device parameters and the 3×3 rung matrices.
//!
//! The fixed basis order is (|n−1, IX⟩, |n−1, DX⟩, |n, g⟩): indirect
//! exciton, direct exciton, photon. Two builders are provided:
//!
//! * [`build_hermitian`]: the closed-system rung Hamiltonian, with the
//!   interdot coupling entered as −J/2;
//! * [`build_effective`]: the open-system effective Hamiltonian, which
//!   carries +J/2 and imaginary loss terms −(i/2)(n−1)κ on both exciton
//!   rows, −(i/2)γ_DX (−(i/2)γ_IX) on the DX (IX) row, and −(i/2)nκ on
//!   the photon row.
//!
//! The two J signs differ by the phase of one basis vector, so spectra and
//! every |amplitude|-derived observable coincide; each builder keeps its
//! own convention and the equivalence is enforced by tests.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::mat3::Matrix3c;
use crate::units::{bias_to_energy, Dimension, Quantity};

/// Basis index of the indirect exciton amplitude.
pub const IX: usize = 0;
/// Basis index of the direct exciton amplitude.
pub const DX: usize = 1;
/// Basis index of the photon amplitude.
pub const PHOTON: usize = 2;

/// All physical constants of the device, dimension-tagged.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SystemParams {
    omega_c: Quantity,
    delta_ix_dx: Quantity,
    delta_c_dx: Quantity,
    d: Quantity,
    j: Quantity,
    g: Quantity,
    kappa: Quantity,
    gamma_dx: Quantity,
    gamma_ix: Quantity,
}

impl SystemParams {
    /// Validate dimensions and sign constraints. Couplings and loss rates
    /// must be non-negative energies (already ħ-converted); d must be a
    /// positive length.
    #[allow(clippy::too_many_arguments)]
    pub fn new(
        omega_c: Quantity,
        delta_ix_dx: Quantity,
        delta_c_dx: Quantity,
        d: Quantity,
        j: Quantity,
        g: Quantity,
        kappa: Quantity,
        gamma_dx: Quantity,
        gamma_ix: Quantity,
    ) -> Result<Self> {
        for (q, name) in [
            (&omega_c, "omega_c"),
            (&delta_ix_dx, "delta_ix_dx"),
            (&delta_c_dx, "delta_c_dx"),
            (&j, "J"),
            (&g, "g"),
            (&kappa, "kappa"),
            (&gamma_dx, "gamma_dx"),
            (&gamma_ix, "gamma_ix"),
        ] {
            if q.dimension() != Dimension::Energy {
                return Err(Error::DimensionMismatch {
                    expected: Dimension::Energy,
                    found: q.dimension(),
                    context: "SystemParams",
                });
            }
            let nonneg = matches!(name, "J" | "g" | "kappa" | "gamma_dx" | "gamma_ix");
            if nonneg && q.value() < 0.0 {
                return Err(Error::InvalidParameter(format!(
                    "{name} must be non-negative, got {} meV",
                    q.value()
                )));
            }
            if !q.value().is_finite() {
                return Err(Error::InvalidParameter(format!("{name} is not finite")));
            }
        }
        if d.dimension() != Dimension::Length {
            return Err(Error::DimensionMismatch {
                expected: Dimension::Length,
                found: d.dimension(),
                context: "SystemParams",
            });
        }
        if !(d.value() > 0.0) || !d.value().is_finite() {
            return Err(Error::InvalidParameter(format!(
                "interdot distance must be positive, got {} nm",
                d.value()
            )));
        }
        Ok(SystemParams {
            omega_c,
            delta_ix_dx,
            delta_c_dx,
            d,
            j,
            g,
            kappa,
            gamma_dx,
            gamma_ix,
        })
    }

    /// Convenience constructor from canonical units (meV and nm).
    #[allow(clippy::too_many_arguments)]
    pub fn from_mev_nm(
        omega_c_mev: f64,
        delta_ix_dx_mev: f64,
        delta_c_dx_mev: f64,
        d_nm: f64,
        j_mev: f64,
        g_mev: f64,
        kappa_mev: f64,
        gamma_dx_mev: f64,
        gamma_ix_mev: f64,
    ) -> Result<Self> {
        SystemParams::new(
            Quantity::energy_mev(omega_c_mev),
            Quantity::energy_mev(delta_ix_dx_mev),
            Quantity::energy_mev(delta_c_dx_mev),
            Quantity::length_nm(d_nm),
            Quantity::energy_mev(j_mev),
            Quantity::energy_mev(g_mev),
            Quantity::energy_mev(kappa_mev),
            Quantity::energy_mev(gamma_dx_mev),
            Quantity::energy_mev(gamma_ix_mev),
        )
    }

    pub fn omega_c_mev(&self) -> f64 {
        self.omega_c.value()
    }
    pub fn delta_ix_dx_mev(&self) -> f64 {
        self.delta_ix_dx.value()
    }
    pub fn delta_c_dx_mev(&self) -> f64 {
        self.delta_c_dx.value()
    }
    pub fn d_nm(&self) -> f64 {
        self.d.value()
    }
    pub fn d(&self) -> Quantity {
        self.d
    }
    pub fn j_mev(&self) -> f64 {
        self.j.value()
    }
    pub fn g_mev(&self) -> f64 {
        self.g.value()
    }
    pub fn kappa_mev(&self) -> f64 {
        self.kappa.value()
    }
    pub fn gamma_dx_mev(&self) -> f64 {
        self.gamma_dx.value()
    }
    pub fn gamma_ix_mev(&self) -> f64 {
        self.gamma_ix.value()
    }

    /// Copy with a different g (used by limit checks).
    pub fn with_g_mev(&self, g_mev: f64) -> Result<Self> {
        let mut p = *self;
        if g_mev < 0.0 {
            return Err(Error::InvalidParameter("g must be non-negative".into()));
        }
        p.g = Quantity::energy_mev(g_mev);
        Ok(p)
    }

    /// Copy with all loss rates removed (the closed-system limit).
    pub fn lossless(&self) -> Self {
        let mut p = *self;
        p.kappa = Quantity::energy_mev(0.0);
        p.gamma_dx = Quantity::energy_mev(0.0);
        p.gamma_ix = Quantity::energy_mev(0.0);
        p
    }
}

/// A rung matrix in the fixed (IX, DX, photon) basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RungMatrix {
    n: u32,
    entries: Matrix3c,
    hermitian: bool,
}

impl RungMatrix {
    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn entries(&self) -> &Matrix3c {
        &self.entries
    }

    pub fn is_hermitian(&self) -> bool {
        self.hermitian
    }

    /// Wrap an arbitrary matrix (diagnostics and tests).
    pub fn from_matrix(n: u32, entries: Matrix3c, hermitian: bool) -> Self {
        RungMatrix {
            n,
            entries,
            hermitian,
        }
    }
}

fn diagonal_real_parts(p: &SystemParams, n: u32, f: Quantity) -> Result<[f64; 3]> {
    if n < 1 {
        return Err(Error::InvalidRung(n));
    }
    let nf = f64::from(n);
    let edf = bias_to_energy(f, p.d())?.mev()?;
    let base = p.omega_c_mev() * nf;
    Ok([
        base + p.delta_ix_dx_mev() - p.delta_c_dx_mev() - edf,
        base - p.delta_c_dx_mev(),
        base,
    ])
}

/// Closed-system rung Hamiltonian (real symmetric, interdot coupling −J/2).
pub fn build_hermitian(p: &SystemParams, n: u32, f: Quantity) -> Result<RungMatrix> {
    let diag = diagonal_real_parts(p, n, f)?;
    let g_n = p.g_mev() * f64::from(n).sqrt();
    let jhalf = -p.j_mev() / 2.0;

    let re = |x: f64| Complex64::new(x, 0.0);
    let entries = Matrix3c::from_rows([
        [re(diag[IX]), re(jhalf), re(0.0)],
        [re(jhalf), re(diag[DX]), re(g_n)],
        [re(0.0), re(g_n), re(diag[PHOTON])],
    ]);
    Ok(RungMatrix {
        n,
        entries,
        hermitian: true,
    })
}

/// Open-system effective Hamiltonian (interdot coupling +J/2, loss terms on
/// the diagonal).
pub fn build_effective(p: &SystemParams, n: u32, f: Quantity) -> Result<RungMatrix> {
    let diag = diagonal_real_parts(p, n, f)?;
    let g_n = p.g_mev() * f64::from(n).sqrt();
    let jhalf = p.j_mev() / 2.0;
    let nf = f64::from(n);

    let loss_ix = 0.5 * ((nf - 1.0) * p.kappa_mev() + p.gamma_ix_mev());
    let loss_dx = 0.5 * ((nf - 1.0) * p.kappa_mev() + p.gamma_dx_mev());
    let loss_ph = 0.5 * nf * p.kappa_mev();

    let re = |x: f64| Complex64::new(x, 0.0);
    let entries = Matrix3c::from_rows([
        [
            Complex64::new(diag[IX], -loss_ix),
            re(jhalf),
            re(0.0),
        ],
        [
            re(jhalf),
            Complex64::new(diag[DX], -loss_dx),
            re(g_n),
        ],
        [
            re(0.0),
            re(g_n),
            Complex64::new(diag[PHOTON], -loss_ph),
        ],
    ]);
    let hermitian = loss_ix == 0.0 && loss_dx == 0.0 && loss_ph == 0.0;
    Ok(RungMatrix {
        n,
        entries,
        hermitian,
    })
}

/// Closed-form trace of [`build_effective`]:
/// 3nω_C + Δ_ix,dx − 2Δ_c,dx − e·d·F − (i/2)[2(n−1)κ + nκ + γ_DX + γ_IX].
pub fn effective_trace(p: &SystemParams, n: u32, f: Quantity) -> Result<Complex64> {
    if n < 1 {
        return Err(Error::InvalidRung(n));
    }
    let nf = f64::from(n);
    let edf = bias_to_energy(f, p.d())?.mev()?;
    let re = 3.0 * nf * p.omega_c_mev() + p.delta_ix_dx_mev() - 2.0 * p.delta_c_dx_mev() - edf;
    let im = -0.5
        * (2.0 * (nf - 1.0) * p.kappa_mev()
            + nf * p.kappa_mev()
            + p.gamma_dx_mev()
            + p.gamma_ix_mev());
    Ok(Complex64::new(re, im))
}
