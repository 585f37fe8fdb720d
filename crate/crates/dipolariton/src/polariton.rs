//! Observables derived from the eigenpairs: Hopfield fractions, bright
//! polariton degree, exciton dipole moment, decay rate, lifetime, and the
//! qualitative regime classification.
//!
//! The BPD of a branch is |C_g·C_DX|, how strongly the photon and the
//! bright exciton mix; the EDM is d·|C_IX|, the static dipole length
//! the branch inherits from its indirect-exciton component. Both use
//! unit-norm right-eigenvector amplitudes.

use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::model::{DX, IX, PHOTON};
use crate::spectral::EigenPair;
use crate::units::{
    constants::DARK_RATE_FLOOR_GHZ, energy_to_rate, rate_to_ghz, rate_to_lifetime, Lifetime,
    Quantity,
};

/// Branch labels, ordered LP < MP < UP when energy-ordered labelling is in
/// force.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BranchLabel {
    Lp,
    Mp,
    Up,
}

impl BranchLabel {
    pub fn as_str(&self) -> &'static str {
        match self {
            BranchLabel::Lp => "LP",
            BranchLabel::Mp => "MP",
            BranchLabel::Up => "UP",
        }
    }
}

/// One polariton branch: complex energy plus the three bare amplitudes.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PolaritonBranch {
    pub label: BranchLabel,
    /// Complex energy in meV.
    pub energy: Complex64,
    /// Indirect-exciton amplitude C_IX.
    pub c_ix: Complex64,
    /// Direct-exciton amplitude C_DX.
    pub c_dx: Complex64,
    /// Photon amplitude C_g.
    pub c_g: Complex64,
}

impl PolaritonBranch {
    /// Extract the bare amplitudes of an eigenpair (the Hopfield
    /// coefficients). The eigenpair's unit norm is the normalization
    /// invariant |C_IX|² + |C_DX|² + |C_g|² = 1.
    pub fn from_eigenpair(label: BranchLabel, pair: &EigenPair) -> Self {
        PolaritonBranch {
            label,
            energy: pair.value,
            c_ix: pair.vector[IX],
            c_dx: pair.vector[DX],
            c_g: pair.vector[PHOTON],
        }
    }

    /// Fractions (|C_IX|², |C_DX|², |C_g|²) in basis order.
    pub fn fractions(&self) -> [f64; 3] {
        [
            self.c_ix.norm_sqr(),
            self.c_dx.norm_sqr(),
            self.c_g.norm_sqr(),
        ]
    }
}

/// Hopfield fractions of an eigenpair in basis order (IX, DX, photon).
pub fn hopfield(pair: &EigenPair) -> [f64; 3] {
    [
        pair.vector[IX].norm_sqr(),
        pair.vector[DX].norm_sqr(),
        pair.vector[PHOTON].norm_sqr(),
    ]
}

/// Bright polariton degree |C_g · C_DX| ∈ [0, 1/2].
pub fn bpd(branch: &PolaritonBranch) -> f64 {
    branch.c_g.norm() * branch.c_dx.norm()
}

/// Exciton dipole moment d·|C_IX| ∈ [0, d].
pub fn edm(branch: &PolaritonBranch, d: Quantity) -> Result<Quantity> {
    let d_nm = d.nm()?;
    if !(d_nm > 0.0) {
        return Err(Error::InvalidParameter(format!(
            "interdot distance must be positive, got {d_nm} nm"
        )));
    }
    Ok(Quantity::length_nm(d_nm * branch.c_ix.norm()))
}

/// Population decay rate Γ = −2·Im(λ) of an effective-Hamiltonian
/// eigenvalue, as an angular rate. A positive imaginary part beyond the
/// numerical floor means the matrix was not dissipative and is reported as
/// a model violation.
pub fn decay_rate(pair: &EigenPair) -> Result<Quantity> {
    decay_rate_from_im(pair.value.im, pair.hnorm)
}

fn decay_rate_from_im(im_mev: f64, scale_mev: f64) -> Result<Quantity> {
    let tol = 1e-12 * scale_mev;
    if im_mev > tol {
        return Err(Error::ModelViolation(format!(
            "eigenvalue has gain: Im = {im_mev:+.3e} meV exceeds {tol:.3e}"
        )));
    }
    let gamma_mev = (-2.0 * im_mev).max(0.0);
    energy_to_rate(Quantity::energy_mev(gamma_mev))
}

/// Lifetime for a decay rate, with rates below
/// [`DARK_RATE_FLOOR_GHZ`] reported as the infinite sentinel.
pub fn lifetime(gamma: Quantity) -> Result<Lifetime> {
    let ghz = rate_to_ghz(gamma)?;
    if ghz < DARK_RATE_FLOOR_GHZ {
        Ok(Lifetime::Infinite)
    } else {
        rate_to_lifetime(gamma)
    }
}

/// The three qualitative regimes of the middle-branch landscape, plus the
/// gray zone. Threshold-dependent: a diagnostic, not a sharp physical
/// boundary.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Regime {
    ConventionalPolariton,
    DarkDipolariton,
    BrightDipolariton,
    Unclassified,
}

impl Regime {
    pub fn as_str(&self) -> &'static str {
        match self {
            Regime::ConventionalPolariton => "conventional_polariton",
            Regime::DarkDipolariton => "dark_dipolariton",
            Regime::BrightDipolariton => "bright_dipolariton",
            Regime::Unclassified => "unclassified",
        }
    }
}

/// Classification thresholds. `bpd` bounds are dimensionless in (0, 1/2);
/// `edm` bounds are lengths in (0, d).
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct RegimeThresholds {
    pub bpd_high: f64,
    pub bpd_low: f64,
    pub edm_high_nm: f64,
    pub edm_low_nm: f64,
}

impl RegimeThresholds {
    pub fn new(bpd_high: f64, bpd_low: f64, edm_high_nm: f64, edm_low_nm: f64) -> Result<Self> {
        let t = RegimeThresholds {
            bpd_high,
            bpd_low,
            edm_high_nm,
            edm_low_nm,
        };
        t.validate(None)?;
        Ok(t)
    }

    /// Defaults scaled to the interdot distance: edm_high = d/2,
    /// edm_low = d/10.
    pub fn default_for(d: Quantity) -> Result<Self> {
        let d_nm = d.nm()?;
        RegimeThresholds::new(0.3, 0.05, 0.5 * d_nm, 0.1 * d_nm)
    }

    pub fn validate(&self, d_nm: Option<f64>) -> Result<()> {
        let ok_bpd =
            0.0 < self.bpd_low && self.bpd_low < self.bpd_high && self.bpd_high < 0.5;
        let mut ok_edm = 0.0 < self.edm_low_nm && self.edm_low_nm < self.edm_high_nm;
        if let Some(d) = d_nm {
            ok_edm &= self.edm_high_nm < d;
        }
        if ok_bpd && ok_edm {
            Ok(())
        } else {
            Err(Error::InvalidParameter(format!(
                "malformed regime thresholds: {self:?}"
            )))
        }
    }
}

/// All scalar observables of one branch, in output units.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Observables {
    pub fractions: [f64; 3],
    pub bpd: f64,
    pub edm_nm: f64,
    /// Angular decay rate in GHz (s⁻¹/1e9); exactly 0 in the Hermitian limit.
    pub gamma_ghz: f64,
    /// Lifetime in ps; `f64::INFINITY` for lossless branches.
    pub tau_ps: f64,
    pub regime: Regime,
}

impl Observables {
    pub fn compute(
        branch: &PolaritonBranch,
        d: Quantity,
        thresholds: &RegimeThresholds,
    ) -> Result<Self> {
        let gamma = decay_rate_from_im(branch.energy.im, branch.energy.norm().max(1.0))?;
        let gamma_ghz = rate_to_ghz(gamma)?;
        let tau_ps = lifetime(gamma)?.ps();
        let edm_nm = edm(branch, d)?.nm()?;
        let b = bpd(branch);
        let obs = Observables {
            fractions: branch.fractions(),
            bpd: b,
            edm_nm,
            gamma_ghz,
            tau_ps,
            regime: Regime::Unclassified,
        };
        Ok(Observables {
            regime: classify_regime(&obs, thresholds)?,
            ..obs
        })
    }
}

/// Regime predicate, evaluated in order:
/// (I) bright with negligible dipole, (II) dark with large dipole,
/// (III) significant brightness and dipole together; everything else is
/// unclassified.
pub fn classify_regime(obs: &Observables, thresholds: &RegimeThresholds) -> Result<Regime> {
    thresholds.validate(None)?;
    let t = thresholds;
    if obs.bpd >= t.bpd_high && obs.edm_nm <= t.edm_low_nm {
        Ok(Regime::ConventionalPolariton)
    } else if obs.bpd <= t.bpd_low && obs.edm_nm >= t.edm_high_nm {
        Ok(Regime::DarkDipolariton)
    } else if obs.bpd >= t.bpd_low && obs.edm_nm >= t.edm_low_nm {
        Ok(Regime::BrightDipolariton)
    } else {
        Ok(Regime::Unclassified)
    }
}
