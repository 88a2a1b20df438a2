//! Two atoms in a partially entangled Bell state, each inside its own
//! vacuum cavity.
//!
//! Initial state (cosα|ee⟩ + sinα|gg⟩) ⊗ |0,0⟩. Each site only explores
//! {|g,0⟩, |e,0⟩, |g,1⟩}, so the four subsystems are qubits and the joint
//! state lives in 16 dimensions. Two routes are provided: the closed-form
//! X elements of ρ_AB and brute-force evolution of the 16-amplitude state.

use std::f64::consts::{FRAC_PI_2, PI};

use num_complex::Complex64 as C64;

use crate::entanglement::{concurrence_general, XElements};
use crate::error::{Error, Result};
use crate::jc::{dressed, propagate_vacuum_block_detuned, SiteParams};
use crate::state::{pair_reduce, Pair, PureState16, EXCITED, GROUND};

/// |tanα| within this distance of 1 is treated as the boundary case with
/// isolated zeros only.
const TAN_BOUNDARY_TOL: f64 = 1e-12;

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct VacuumScenario {
    pub bell_angle: f64,
    /// Shared by both sites.
    pub site: SiteParams,
}

impl VacuumScenario {
    pub fn new(bell_angle: f64, site: SiteParams) -> Result<Self> {
        if !(bell_angle > -FRAC_PI_2 && bell_angle <= FRAC_PI_2) {
            return Err(Error::InvalidParameter(format!(
                "bell angle must lie in (-pi/2, pi/2], got {bell_angle}"
            )));
        }
        Ok(VacuumScenario { bell_angle, site })
    }
}

/// Q^AB = cos²α·cos²τ·(|tanα| − sin²τ) on resonance, τ = g·t.
pub fn q_ab_closed(bell_angle: f64, tau: f64) -> f64 {
    let (s, c) = bell_angle.sin_cos();
    if c.abs() < 1e-12 {
        return 0.0;
    }
    let (st, ct) = tau.sin_cos();
    // cos²α·|tanα| written as |sinα·cosα| so α → ±π/2 needs no guard
    ct * ct * ((s * c).abs() - c * c * st * st)
}

/// Resonant atom–atom concurrence 2·max(0, Q^AB).
pub fn concurrence_ab_closed(bell_angle: f64, tau: f64) -> f64 {
    2.0 * q_ab_closed(bell_angle, tau).max(0.0)
}

/// Where C^AB vanishes within one resonant period τ ∈ [0, π].
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum EsdWindow {
    /// α = 0 or ±π/2: the atoms start in a product state and stay separable.
    AlwaysSeparable,
    /// |tanα| ≥ 1: C^AB only touches zero at τ = π/2 + kπ.
    IsolatedZeros,
    /// |tanα| < 1: C^AB = 0 on the closed interval [death, rebirth].
    Dead { death: f64, rebirth: f64 },
}

pub fn esd_interval(bell_angle: f64) -> EsdWindow {
    let (s, c) = bell_angle.sin_cos();
    if s.abs() < 1e-12 || c.abs() < 1e-12 {
        return EsdWindow::AlwaysSeparable;
    }
    let t = (s / c).abs();
    if t >= 1.0 - TAN_BOUNDARY_TOL {
        return EsdWindow::IsolatedZeros;
    }
    let death = t.sqrt().asin();
    EsdWindow::Dead { death, rebirth: PI - death }
}

/// Closed-form X elements of ρ_AB at physical time `t`, any detuning.
///
/// The ρ14 coherence carries its phase; its modulus is
/// |sinα cosα|·(c0⁴ + s0⁴ + 2c0²s0² cos δt) with δ = √(Δ² + 4g²).
pub fn x_elements_detuned(sc: &VacuumScenario, t: f64) -> XElements {
    let d = dressed(1, &sc.site).expect("n = 1 manifold");
    let (c2, s2) = (d.c * d.c, d.s * d.s);
    let delta = d.lambda_plus - d.lambda_minus;
    let cd = (delta * t).cos();
    let stay = c2 * c2 + s2 * s2 + 2.0 * c2 * s2 * cd;
    let moved = c2 * s2 * (2.0 - 2.0 * cd);
    let (sa, ca) = sc.bell_angle.sin_cos();

    let base = sc.site.omega;
    let ep = C64::from_polar(1.0, -(d.lambda_plus - base) * t);
    let em = C64::from_polar(1.0, -(d.lambda_minus - base) * t);
    let amp_e0 = ep * c2 + em * s2;
    let rho14 = amp_e0 * amp_e0 * (ca * sa);

    let r11 = ca * ca * stay * stay;
    let r22 = ca * ca * stay * moved;
    let r44 = sa * sa + ca * ca * moved * moved;
    XElements::outer(r11, r22, r22, r44, rho14)
}

/// Exact 16-amplitude state at physical time `t`.
pub fn evolve_fourqubit(sc: &VacuumScenario, t: f64) -> PureState16 {
    let (sa, ca) = sc.bell_angle.sin_cos();
    let (x, y) = propagate_vacuum_block_detuned(C64::new(1.0, 0.0), C64::new(0.0, 0.0), &sc.site, t);
    let mut amps = [C64::new(0.0, 0.0); 16];
    amps[PureState16::index(EXCITED, EXCITED, 0, 0)] = x * x * ca;
    amps[PureState16::index(EXCITED, GROUND, 0, 1)] = x * y * ca;
    amps[PureState16::index(GROUND, EXCITED, 1, 0)] = y * x * ca;
    amps[PureState16::index(GROUND, GROUND, 1, 1)] = y * y * ca;
    amps[PureState16::index(GROUND, GROUND, 0, 0)] += C64::new(sa, 0.0);
    PureState16::new(amps).expect("unitary evolution preserves the norm")
}

/// Concurrences of all six qubit pairs, in [`Pair::ALL`] order.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PairConcurrences([f64; 6]);

impl PairConcurrences {
    pub fn get(&self, pair: Pair) -> f64 {
        let i = Pair::ALL.iter().position(|p| *p == pair).unwrap();
        self.0[i]
    }

    pub fn iter(&self) -> impl Iterator<Item = (Pair, f64)> + '_ {
        Pair::ALL.iter().copied().zip(self.0.iter().copied())
    }
}

pub fn all_pairwise(phi: &PureState16) -> Result<PairConcurrences> {
    let mut out = [0.0; 6];
    for (slot, pair) in out.iter_mut().zip(Pair::ALL) {
        *slot = concurrence_general(&pair_reduce(phi, pair))?;
    }
    Ok(PairConcurrences(out))
}
