//! Two-qubit entanglement: Wootters concurrence, the X-state shortcut and
//! the signed Q factor.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, psd_factor, psd_sqrt, sigma_yy, singular_values, CMatrix4};
use crate::state::{validate_density, TwoQubitDensity};

/// Inputs with a minimum eigenvalue below this are rejected as non-physical.
pub const NONPHYSICAL_EIGENVALUE: f64 = -1e-6;

/// Which anti-diagonal coherence an [`XElements`] carries.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Channel {
    /// ρ23, coupling `eg` and `ge`.
    Inner,
    /// ρ14, coupling `ee` and `gg`.
    Outer,
}

/// Independent entries of an X-shaped two-qubit density matrix with a
/// single anti-diagonal coherence.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct XElements {
    pub r11: f64,
    pub r22: f64,
    pub r33: f64,
    pub r44: f64,
    pub coh: C64,
    pub channel: Channel,
}

impl XElements {
    pub fn inner(r11: f64, r22: f64, r33: f64, r44: f64, rho23: C64) -> Self {
        XElements { r11, r22, r33, r44, coh: rho23, channel: Channel::Inner }
    }

    pub fn outer(r11: f64, r22: f64, r33: f64, r44: f64, rho14: C64) -> Self {
        XElements { r11, r22, r33, r44, coh: rho14, channel: Channel::Outer }
    }

    /// Reads the diagonal and the requested coherence out of `rho`.
    pub fn from_density(rho: &TwoQubitDensity, channel: Channel) -> Self {
        let coh = match channel {
            Channel::Inner => rho.entry(1, 2),
            Channel::Outer => rho.entry(0, 3),
        };
        XElements {
            r11: rho.entry(0, 0).re,
            r22: rho.entry(1, 1).re,
            r33: rho.entry(2, 2).re,
            r44: rho.entry(3, 3).re,
            coh,
            channel,
        }
    }

    /// Checks unit trace, nonnegative populations and positivity of the
    /// 2×2 block holding the coherence.
    pub fn check(&self) -> Result<()> {
        let pops = [self.r11, self.r22, self.r33, self.r44];
        if pops.iter().any(|p| *p < -1e-12) {
            return Err(Error::InvalidParameter("negative population".into()));
        }
        let total: f64 = pops.iter().sum();
        if (total - 1.0).abs() > 1e-10 {
            return Err(Error::InvalidParameter(format!(
                "populations sum to {total}, not 1"
            )));
        }
        if self.coh.norm() > self.block_bound() + 1e-9 {
            return Err(Error::InvalidParameter(
                "coherence exceeds the positivity bound of its block".into(),
            ));
        }
        Ok(())
    }

    /// √(ρ22ρ33) for ρ23, √(ρ11ρ44) for ρ14.
    fn block_bound(&self) -> f64 {
        match self.channel {
            Channel::Inner => (self.r22 * self.r33).max(0.0).sqrt(),
            Channel::Outer => (self.r11 * self.r44).max(0.0).sqrt(),
        }
    }

    /// The population product competing with the coherence in Q.
    fn complementary_bound(&self) -> f64 {
        match self.channel {
            Channel::Inner => (self.r11 * self.r44).max(0.0).sqrt(),
            Channel::Outer => (self.r22 * self.r33).max(0.0).sqrt(),
        }
    }

    pub fn embed(&self) -> TwoQubitDensity {
        let mut m = CMatrix4::zeros();
        m[(0, 0)] = C64::new(self.r11, 0.0);
        m[(1, 1)] = C64::new(self.r22, 0.0);
        m[(2, 2)] = C64::new(self.r33, 0.0);
        m[(3, 3)] = C64::new(self.r44, 0.0);
        let (i, j) = match self.channel {
            Channel::Inner => (1, 2),
            Channel::Outer => (0, 3),
        };
        m[(i, j)] = self.coh;
        m[(j, i)] = self.coh.conj();
        TwoQubitDensity::from_matrix(m)
    }
}

/// Signed Q of the element's channel: |ρ23| − √(ρ11ρ44) or |ρ14| − √(ρ22ρ33).
///
/// Negative values certify a separable, mixed state.
pub fn q_factor(x: &XElements) -> f64 {
    x.coh.norm() - x.complementary_bound()
}

pub fn concurrence_x(x: &XElements) -> f64 {
    (2.0 * q_factor(x).max(0.0)).min(1.0)
}

/// Larger of the two channel Q values of the X part of `rho`.
pub fn q_max(rho: &TwoQubitDensity) -> f64 {
    q_factor(&XElements::from_density(rho, Channel::Inner))
        .max(q_factor(&XElements::from_density(rho, Channel::Outer)))
}

/// Zeroes every entry of `rho` off the diagonal and anti-diagonal.
pub fn x_projection(rho: &TwoQubitDensity) -> TwoQubitDensity {
    let m = rho.matrix();
    TwoQubitDensity::from_matrix(CMatrix4::from_fn(|i, j| {
        if i == j || i + j == 3 {
            m[(i, j)]
        } else {
            C64::new(0.0, 0.0)
        }
    }))
}

/// Wootters concurrence of an arbitrary two-qubit density matrix.
///
/// With ρ = W·W†, the square roots of the eigenvalues of ρ(σy⊗σy)ρ*(σy⊗σy)
/// are the singular values of Wᵀ(σy⊗σy)W. Taking them directly keeps
/// absolute accuracy near rank-deficient states, where square roots of
/// tiny computed eigenvalues would not.
pub fn concurrence_general(rho: &TwoQubitDensity) -> Result<f64> {
    check_physical(rho)?;
    let w = psd_factor(rho.matrix());
    let s = singular_values(&(w.transpose() * sigma_yy() * w));
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

/// Same quantity from the eigenvalues of the Hermitian matrix √ρ ρ̃ √ρ.
/// Loses about half the digits of the smallest eigenvalues; kept as an
/// independent cross-check.
pub fn concurrence_hermitian_proxy(rho: &TwoQubitDensity) -> Result<f64> {
    check_physical(rho)?;
    let m = rho.matrix();
    let yy = sigma_yy();
    let flipped = yy * m.conjugate() * yy;
    let root = psd_sqrt(m, 0.0);
    let mut lambdas = hermitian_eigenvalues(&(root * flipped * root));
    lambdas.reverse();
    let s = lambdas.map(|l| if l > -1e-10 { l.max(0.0).sqrt() } else { 0.0 });
    Ok((s[0] - s[1] - s[2] - s[3]).clamp(0.0, 1.0))
}

fn check_physical(rho: &TwoQubitDensity) -> Result<()> {
    let diag = validate_density(rho);
    if diag.min_eigenvalue < NONPHYSICAL_EIGENVALUE {
        return Err(Error::NonPhysical { min_eigenvalue: diag.min_eigenvalue });
    }
    Ok(())
}
