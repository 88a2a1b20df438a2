//! Jaynes–Cummings spectral data and exact single-site propagators.
//!
//! Sign convention: states evolve as e^{−iHt}, so a resonant excitation
//! swap picks up a −i·sin factor. Propagators work in the frame rotating
//! with the field: the free energy nω of each excitation manifold is
//! dropped. Both choices only move local diagonal phases, which leave every
//! concurrence in this crate unchanged. [`dressed`] still reports the
//! absolute eigenvalues including nω.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};

/// Coupling `g`, detuning `Δ = ω0 − ω` and field frequency `ω`, all in rad
/// per unit time.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteParams {
    pub g: f64,
    pub delta: f64,
    pub omega: f64,
}

impl SiteParams {
    pub fn new(g: f64, delta: f64) -> Result<Self> {
        Self::with_omega(g, delta, 0.0)
    }

    pub fn with_omega(g: f64, delta: f64, omega: f64) -> Result<Self> {
        if !(g > 0.0) || !g.is_finite() {
            return Err(Error::InvalidParameter(format!("coupling g must be > 0, got {g}")));
        }
        if !delta.is_finite() || !omega.is_finite() {
            return Err(Error::InvalidParameter("detuning and frequency must be finite".into()));
        }
        Ok(SiteParams { g, delta, omega })
    }

    pub fn resonant(g: f64) -> Result<Self> {
        Self::new(g, 0.0)
    }
}

/// Dressed-state data of the n-excitation manifold {|e, n−1⟩, |g, n⟩}.
///
/// |ψ+⟩ = c|e,n−1⟩ + s|g,n⟩ and |ψ−⟩ = −s|e,n−1⟩ + c|g,n⟩.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DressedPair {
    pub lambda_plus: f64,
    pub lambda_minus: f64,
    /// Mixing angle in [0, π].
    pub theta: f64,
    pub c: f64,
    pub s: f64,
}

/// n-photon Rabi frequency 2g√n.
pub fn rabi_freq(n: usize, g: f64) -> Result<f64> {
    if n == 0 {
        return Err(Error::InvalidParameter(
            "Rabi frequency is defined for n >= 1 (the vacuum Rabi frequency is n = 1)".into(),
        ));
    }
    Ok(2.0 * g * (n as f64).sqrt())
}

pub fn dressed(n: usize, p: &SiteParams) -> Result<DressedPair> {
    let big_g = rabi_freq(n, p.g)?;
    let root = p.delta.hypot(big_g);
    let theta = big_g.atan2(p.delta);
    let base = n as f64 * p.omega;
    Ok(DressedPair {
        lambda_plus: base + 0.5 * (p.delta + root),
        lambda_minus: base + 0.5 * (p.delta - root),
        theta,
        c: (0.5 * theta).cos(),
        s: (0.5 * theta).sin(),
    })
}

/// Bare single-site basis state: atom level and photon number.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SiteState {
    Excited(usize),
    Ground(usize),
}

/// Image of a bare state under resonant evolution: the state itself and,
/// except for |g,0⟩, its partner in the same excitation manifold.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SiteEvolution {
    pub stay: (SiteState, C64),
    pub partner: Option<(SiteState, C64)>,
}

impl SiteEvolution {
    pub fn norm_sqr(&self) -> f64 {
        self.stay.1.norm_sqr() + self.partner.map_or(0.0, |(_, a)| a.norm_sqr())
    }
}

/// Resonant evolution of one bare state for dimensionless time τ = g·t.
///
/// (e,n) → cos(τ√(n+1))(e,n) − i·sin(τ√(n+1))(g,n+1)
/// (g,n) → cos(τ√n)(g,n) − i·sin(τ√n)(e,n−1)
pub fn propagate_site_resonant(state: SiteState, tau: f64) -> SiteEvolution {
    match state {
        SiteState::Excited(n) => {
            let w = tau * ((n + 1) as f64).sqrt();
            SiteEvolution {
                stay: (state, C64::new(w.cos(), 0.0)),
                partner: Some((SiteState::Ground(n + 1), C64::new(0.0, -w.sin()))),
            }
        }
        SiteState::Ground(0) => SiteEvolution {
            stay: (state, C64::new(1.0, 0.0)),
            partner: None,
        },
        SiteState::Ground(n) => {
            let w = tau * (n as f64).sqrt();
            SiteEvolution {
                stay: (state, C64::new(w.cos(), 0.0)),
                partner: Some((SiteState::Excited(n - 1), C64::new(0.0, -w.sin()))),
            }
        }
    }
}

/// Evolves amplitudes on the manifold {|e,n−1⟩, |g,n⟩} for physical time
/// `t`, at arbitrary detuning, by projecting onto the dressed states and
/// applying e^{−i(λ± − nω)t}.
pub fn propagate_block(n: usize, amp_e: C64, amp_g: C64, p: &SiteParams, t: f64) -> Result<(C64, C64)> {
    let d = dressed(n, p)?;
    let base = n as f64 * p.omega;
    let plus = amp_e * d.c + amp_g * d.s;
    let minus = -amp_e * d.s + amp_g * d.c;
    let plus = plus * C64::from_polar(1.0, -(d.lambda_plus - base) * t);
    let minus = minus * C64::from_polar(1.0, -(d.lambda_minus - base) * t);
    Ok((plus * d.c - minus * d.s, plus * d.s + minus * d.c))
}

/// [`propagate_block`] on the single-excitation manifold {|e,0⟩, |g,1⟩}.
pub fn propagate_vacuum_block_detuned(amp_e0: C64, amp_g1: C64, p: &SiteParams, t: f64) -> (C64, C64) {
    propagate_block(1, amp_e0, amp_g1, p, t).expect("n = 1 is always a valid manifold")
}
