//! Bell pair driven by two equal coherent fields, evolved exactly in a
//! truncated Fock space.
//!
//! Initial state: a two-atom Bell state ⊗ |α_c⟩|α_c⟩ with real α_c > 0.
//! Each site evolves independently, so the joint amplitudes are built from
//! two per-site vectors at the requested τ; there is no time stepping.
//! Components pushed to photon number N+1 are dropped and their weight is
//! reported as leakage.

use std::f64::consts::FRAC_1_SQRT_2;

use num_complex::Complex64 as C64;
use rayon::prelude::*;

use crate::entanglement::{concurrence_general, q_max};
use crate::error::{Error, Result};
use crate::jc::{propagate_site_resonant, SiteState};
use crate::state::{partial_trace_fields, pair_index, JointAmplitudeTensor, TwoQubitDensity, EXCITED, GROUND};

pub const DEFAULT_TAIL_TOLERANCE: f64 = 1e-12;
/// Evolution fails once the dropped weight exceeds this.
pub const LEAKAGE_LIMIT: f64 = 1e-8;

/// Two-atom state at τ = 0.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum BellState {
    /// (|eg⟩ + |ge⟩)/√2.
    PsiPlus,
    /// cosβ|ee⟩ + sinβ|gg⟩.
    PhiAlpha(f64),
}

impl BellState {
    fn coefficients(self) -> [f64; 4] {
        match self {
            BellState::PsiPlus => [0.0, FRAC_1_SQRT_2, FRAC_1_SQRT_2, 0.0],
            BellState::PhiAlpha(b) => [b.cos(), 0.0, 0.0, b.sin()],
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentScenario {
    pub coherent_amp: f64,
    pub bell_state: BellState,
    pub cutoff: usize,
    pub tail_tolerance: f64,
}

impl CoherentScenario {
    /// Picks the cutoff from the tail tolerance unless `cutoff_override` is
    /// given, in which case only N ≥ 1 is required.
    pub fn new(
        coherent_amp: f64,
        bell_state: BellState,
        cutoff_override: Option<usize>,
        tail_tolerance: f64,
    ) -> Result<Self> {
        if !(coherent_amp > 0.0) || !coherent_amp.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "coherent amplitude must be > 0, got {coherent_amp}"
            )));
        }
        if !(tail_tolerance > 0.0 && tail_tolerance < 1.0) {
            return Err(Error::InvalidParameter(format!(
                "tail tolerance must lie in (0, 1), got {tail_tolerance}"
            )));
        }
        let cutoff = match cutoff_override {
            Some(n) if n < 1 => return Err(Error::InvalidCutoff(n)),
            Some(n) => n,
            None => choose_cutoff(coherent_amp * coherent_amp, tail_tolerance)?,
        };
        Ok(CoherentScenario { coherent_amp, bell_state, cutoff, tail_tolerance })
    }

    /// Psi-plus initial state with the default tail tolerance.
    pub fn psi_plus(coherent_amp: f64) -> Result<Self> {
        Self::new(coherent_amp, BellState::PsiPlus, None, DEFAULT_TAIL_TOLERANCE)
    }

    pub fn mean_photons(&self) -> f64 {
        self.coherent_amp * self.coherent_amp
    }
}

/// ln p_n of the Poisson distribution with mean `nbar`, for n = 0..len.
fn log_poisson(nbar: f64, len: usize) -> Vec<f64> {
    let ln_nbar = nbar.ln();
    let mut out = Vec::with_capacity(len);
    let mut lp = -nbar;
    for n in 0..len {
        if n > 0 {
            lp += ln_nbar - (n as f64).ln();
        }
        out.push(lp);
    }
    out
}

/// Smallest N whose Poisson tail mass beyond N is below `eps`, floored at
/// ⌈n̄ + 6√n̄⌉.
pub fn choose_cutoff(nbar: f64, eps: f64) -> Result<usize> {
    if !(nbar > 0.0) || !nbar.is_finite() {
        return Err(Error::InvalidParameter(format!("mean photon number must be > 0, got {nbar}")));
    }
    if !(eps > 0.0 && eps < 1.0) {
        return Err(Error::InvalidParameter(format!("tail tolerance must lie in (0, 1), got {eps}")));
    }
    let floor = (nbar + 6.0 * nbar.sqrt()).ceil() as usize;
    // past this point every mass is below eps·1e-30 and falling geometrically
    let target = eps.ln() - 70.0;
    let mut len = floor.max(16);
    let lp = loop {
        let lp = log_poisson(nbar, len);
        if lp[len - 1] < target && (len - 1) as f64 > nbar {
            break lp;
        }
        len *= 2;
    };
    // suffix sums from the top keep small masses from being swamped
    let mut tail = 0.0;
    let mut tails = vec![0.0; len + 1];
    for n in (0..len).rev() {
        tail += lp[n].exp();
        tails[n] = tail;
    }
    let n = (0..len).find(|&n| tails[n + 1] < eps).expect("tail vanishes at the top");
    Ok(n.max(floor))
}

/// A_n = e^{−n̄/2}·α_c^n/√(n!) for n = 0..=N.
#[derive(Debug, Clone, PartialEq)]
pub struct PoissonAmps {
    pub amps: Vec<f64>,
    /// 1 − Σ A_n².
    pub mass_defect: f64,
}

/// Amplitudes by log-domain upward recursion; fails if the missing mass
/// exceeds `eps`.
pub fn poisson_amplitudes(coherent_amp: f64, cutoff: usize, eps: f64) -> Result<PoissonAmps> {
    if !(coherent_amp >= 0.0) || !coherent_amp.is_finite() {
        return Err(Error::InvalidParameter(format!(
            "coherent amplitude must be >= 0, got {coherent_amp}"
        )));
    }
    let amps: Vec<f64> = if coherent_amp == 0.0 {
        (0..=cutoff).map(|n| if n == 0 { 1.0 } else { 0.0 }).collect()
    } else {
        log_poisson(coherent_amp * coherent_amp, cutoff + 1)
            .into_iter()
            .map(|lp| (0.5 * lp).exp())
            .collect()
    };
    let mass: f64 = amps.iter().map(|a| a * a).sum();
    let mass_defect = (1.0 - mass).max(0.0);
    if mass_defect > eps {
        return Err(Error::Truncation { deficit: mass_defect, limit: eps });
    }
    Ok(PoissonAmps { amps, mass_defect })
}

/// One site's evolved state for a given initial atom level, over photon
/// numbers 0..=N+1, indexed `[atom][n]`.
type SiteVector = [Vec<C64>; 2];

fn site_vector(atom0: usize, amps: &[f64], tau: f64) -> SiteVector {
    let len = amps.len() + 1;
    let mut v = [vec![C64::new(0.0, 0.0); len], vec![C64::new(0.0, 0.0); len]];
    let mut put = |s: SiteState, a: C64| match s {
        SiteState::Excited(n) => v[EXCITED][n] += a,
        SiteState::Ground(n) => v[GROUND][n] += a,
    };
    for (n, &an) in amps.iter().enumerate() {
        let start = if atom0 == EXCITED { SiteState::Excited(n) } else { SiteState::Ground(n) };
        let evo = propagate_site_resonant(start, tau);
        put(evo.stay.0, evo.stay.1 * an);
        if let Some((s, a)) = evo.partner {
            put(s, a * an);
        }
    }
    v
}

#[derive(Debug, Clone, PartialEq)]
pub struct EvolvedState {
    pub tensor: JointAmplitudeTensor,
    /// Norm dropped at photon number N+1 in either mode.
    pub leakage: f64,
}

/// Exact joint state at dimensionless time τ.
pub fn evolve_exact(sc: &CoherentScenario, tau: f64) -> Result<EvolvedState> {
    let poisson = poisson_amplitudes(sc.coherent_amp, sc.cutoff, sc.tail_tolerance)?;
    let coeffs = sc.bell_state.coefficients();
    let sites = [site_vector(EXCITED, &poisson.amps, tau), site_vector(GROUND, &poisson.amps, tau)];
    let n_cut = sc.cutoff;
    let dim = n_cut + 1;

    let mut tensor = JointAmplitudeTensor::zeros(n_cut)?;
    let mut leakage = 0.0;
    for a in 0..2 {
        for b in 0..2 {
            let block = tensor.block_mut(pair_index(a, b));
            let mut edge = 0.0;
            for (a0, b0, c) in nonzero_terms(&coeffs) {
                let (va, vb) = (&sites[a0][a], &sites[b0][b]);
                for n in 0..dim {
                    let x = va[n] * c;
                    if x == C64::new(0.0, 0.0) {
                        continue;
                    }
                    let row = &mut block[n * dim..(n + 1) * dim];
                    for (slot, y) in row.iter_mut().zip(&vb[..dim]) {
                        *slot += x * y;
                    }
                }
            }
            // dropped entries: n = N+1 or m = N+1
            for n in 0..=dim {
                for m in 0..=dim {
                    if n < dim && m < dim {
                        continue;
                    }
                    let amp: C64 = nonzero_terms(&coeffs)
                        .map(|(a0, b0, c)| sites[a0][a][n] * sites[b0][b][m] * c)
                        .sum();
                    edge += amp.norm_sqr();
                }
            }
            leakage += edge;
        }
    }
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::Leakage { leakage, limit: LEAKAGE_LIMIT });
    }
    Ok(EvolvedState { tensor, leakage })
}

fn nonzero_terms(coeffs: &[f64; 4]) -> impl Iterator<Item = (usize, usize, f64)> + '_ {
    coeffs
        .iter()
        .enumerate()
        .filter(|(_, c)| **c != 0.0)
        .map(|(i, &c)| (i >> 1, i & 1, c))
}

/// Reduced atom–atom density at τ and the leakage of the underlying state.
pub fn reduced_density(sc: &CoherentScenario, tau: f64) -> Result<(TwoQubitDensity, f64)> {
    let evolved = evolve_exact(sc, tau)?;
    Ok((partial_trace_fields(&evolved.tensor)?, evolved.leakage))
}

/// ρ23, ρ11 and ρ44 of the psi-plus state from the doubly infinite series,
/// truncated by setting A_k = 0 outside 0..=N.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SeriesElements {
    pub rho23: f64,
    pub rho11: f64,
    pub rho44: f64,
    /// Weight of the components at photon number N+1, which the series
    /// includes and [`evolve_exact`] drops.
    pub leakage: f64,
}

/// Term-by-term evaluation of the three double sums with C_k = cos(τ√k),
/// S_k = sin(τ√k).
pub fn x_elements_series(sc: &CoherentScenario, tau: f64) -> Result<SeriesElements> {
    if sc.bell_state != BellState::PsiPlus {
        return Err(Error::Unsupported("the element series covers the psi-plus initial state only"));
    }
    let poisson = poisson_amplitudes(sc.coherent_amp, sc.cutoff, sc.tail_tolerance)?;
    let n_cut = sc.cutoff as isize;
    // tables cover indices −2..=N+3; negative indices only ever meet a
    // vanishing amplitude
    const PAD: isize = 2;
    let table = |f: fn(f64) -> f64| -> Vec<f64> {
        (-PAD..=n_cut + 3).map(|k| f(tau * (k.max(0) as f64).sqrt())).collect()
    };
    let (cos_t, sin_t) = (table(f64::cos), table(f64::sin));
    let amp_t: Vec<f64> = (-PAD..=n_cut + 3)
        .map(|k| if (0..=n_cut).contains(&k) { poisson.amps[k as usize] } else { 0.0 })
        .collect();
    let at = |v: &[f64], k: isize| v[(k + PAD) as usize];
    let amp = |k: isize| at(&amp_t, k);
    let cs = |k: isize| at(&cos_t, k);
    let sn = |k: isize| at(&sin_t, k);

    let (mut z, mut a, mut d) = (0.0, 0.0, 0.0);
    for n in 0..=n_cut {
        let an = amp(n);
        for m in 0..=n_cut {
            let am = amp(m);
            let sq = an * an * am * am;
            z += sq * cs(n) * cs(n + 1) * cs(m) * cs(m + 1)
                - an * amp(n - 1) * am * amp(m + 1) * sn(n) * cs(n + 1) * cs(m) * sn(m + 1)
                + an * amp(n - 2) * am * amp(m + 2) * sn(n) * sn(n - 1) * sn(m + 1) * sn(m + 2)
                - an * amp(n - 1) * am * amp(m + 1) * sn(n) * cs(n - 1) * sn(m + 1) * cs(m + 2);
            let shared = an * amp(n + 1) * am * amp(m - 1) * sn(n + 1) * cs(n + 1) * sn(m) * cs(m)
                + an * amp(n - 1) * am * amp(m + 1) * sn(n) * cs(n) * sn(m + 1) * cs(m + 1);
            a += sq * cs(n + 1).powi(2) * sn(m).powi(2) + sq * sn(n).powi(2) * cs(m + 1).powi(2) + shared;
            d += sq * sn(n + 1).powi(2) * cs(m).powi(2) + sq * cs(n).powi(2) * sn(m + 1).powi(2) + shared;
        }
    }
    let mass: f64 = poisson.amps.iter().map(|x| x * x).sum();
    let top = poisson.amps[sc.cutoff];
    let leakage = top * top * sn(n_cut + 1).powi(2) * mass;
    if leakage > LEAKAGE_LIMIT {
        return Err(Error::Leakage { leakage, limit: LEAKAGE_LIMIT });
    }
    Ok(SeriesElements { rho23: 0.5 * z, rho11: 0.5 * a, rho44: 0.5 * d, leakage })
}

/// One grid point of [`concurrence_timeseries`].
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct CoherentRow {
    pub tau: f64,
    /// Wootters concurrence of the full reduced ρ.
    pub c_full: f64,
    /// X-state concurrence of ρ with its off-X entries zeroed.
    pub c_xproj: f64,
    /// Larger channel Q of the X projection.
    pub q_xproj: f64,
    pub rho23: C64,
    pub rho11: f64,
    pub rho44: f64,
    pub leakage: f64,
}

pub fn coherent_row(sc: &CoherentScenario, tau: f64) -> Result<CoherentRow> {
    let (rho, leakage) = reduced_density(sc, tau)?;
    let q = q_max(&rho);
    Ok(CoherentRow {
        tau,
        c_full: concurrence_general(&rho)?,
        c_xproj: (2.0 * q.max(0.0)).min(1.0),
        q_xproj: q,
        rho23: rho.entry(1, 2),
        rho11: rho.entry(0, 0).re,
        rho44: rho.entry(3, 3).re,
        leakage,
    })
}

/// Rows in grid order; grid points are evaluated in parallel on the
/// current rayon pool.
pub fn concurrence_timeseries(sc: &CoherentScenario, grid: &[f64]) -> Result<Vec<CoherentRow>> {
    if grid.windows(2).any(|w| !(w[1] > w[0])) {
        return Err(Error::InvalidParameter("time grid must be strictly increasing".into()));
    }
    grid.par_iter().map(|&tau| coherent_row(sc, tau)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::state::validate_density;

    #[test]
    fn cutoff_floor_and_small_mean() {
        assert_eq!(choose_cutoff(100.0, 0.5).unwrap(), 160);
        let n1 = choose_cutoff(1.0, 1e-12).unwrap();
        assert!((12..=16).contains(&n1), "{n1}");
        assert!(choose_cutoff(0.0, 1e-12).is_err());
        assert!(choose_cutoff(4.0, 1.5).is_err());
    }

    #[test]
    fn poisson_vacuum_and_mode() {
        let p = poisson_amplitudes(0.0, 5, 1e-12).unwrap();
        assert_eq!(p.amps, vec![1.0, 0.0, 0.0, 0.0, 0.0, 0.0]);
        let n = choose_cutoff(100.0, 1e-12).unwrap();
        let p = poisson_amplitudes(10.0, n, 1e-12).unwrap();
        let argmax = (0..p.amps.len()).max_by(|&i, &j| p.amps[i].total_cmp(&p.amps[j])).unwrap();
        assert!(argmax == 99 || argmax == 100);
        assert!(p.mass_defect < 1e-12);
        assert!(poisson_amplitudes(10.0, 120, 1e-12).is_err());
    }

    #[test]
    fn initial_state_is_the_bell_pair() {
        let sc = CoherentScenario::psi_plus(2.0).unwrap();
        let (rho, leakage) = reduced_density(&sc, 0.0).unwrap();
        assert!((rho.entry(1, 2).re - 0.5).abs() < 1e-12);
        assert!(rho.entry(0, 0).re.abs() < 1e-15 && rho.entry(3, 3).re.abs() < 1e-15);
        assert!((concurrence_general(&rho).unwrap() - 1.0).abs() < 1e-10);
        assert_eq!(leakage, 0.0);
    }

    #[test]
    fn evolution_preserves_norm_and_physicality() {
        let sc = CoherentScenario::psi_plus(3.0).unwrap();
        for k in 0..20 {
            let tau = 0.37 * k as f64;
            let e = evolve_exact(&sc, tau).unwrap();
            let total = e.tensor.norm_sqr() + e.leakage;
            // the truncated initial state already misses the Poisson tail
            assert!((1.0 - 1e-10..=1.0 + 1e-12).contains(&total), "{total}");
            let rho = partial_trace_fields(&e.tensor).unwrap();
            assert!(validate_density(&rho).is_physical());
        }
    }

    #[test]
    fn series_matches_trace_at_fixed_point() {
        let sc = CoherentScenario::psi_plus(2.0).unwrap();
        for &tau in &[0.0, 0.7, 1.0] {
            let s = x_elements_series(&sc, tau).unwrap();
            let (rho, _) = reduced_density(&sc, tau).unwrap();
            assert!((s.rho23 - rho.entry(1, 2).re).abs() < 1e-10);
            assert!(rho.entry(1, 2).im.abs() < 1e-14);
            assert!((s.rho11 - rho.entry(0, 0).re).abs() < 1e-10);
            assert!((s.rho44 - rho.entry(3, 3).re).abs() < 1e-10);
        }
        let s0 = x_elements_series(&sc, 0.0).unwrap();
        assert!((s0.rho23 - 0.5).abs() < 1e-12 && s0.rho11 == 0.0 && s0.rho44 == 0.0);
    }

    #[test]
    fn series_rejects_phi_states() {
        let sc = CoherentScenario::new(2.0, BellState::PhiAlpha(0.3), None, 1e-12).unwrap();
        assert!(matches!(x_elements_series(&sc, 1.0), Err(Error::Unsupported(_))));
        // the exact engine handles them
        let (rho, _) = reduced_density(&sc, 0.0).unwrap();
        assert!((rho.entry(0, 0).re - 0.3f64.cos().powi(2)).abs() < 1e-12);
    }

    #[test]
    fn small_cutoff_override_leaks() {
        let sc = CoherentScenario::new(1.0, BellState::PsiPlus, Some(3), 0.5).unwrap();
        assert!(matches!(evolve_exact(&sc, 1.3), Err(Error::Leakage { .. })));
    }

    #[test]
    fn collapse_region_is_separable() {
        let sc = CoherentScenario::psi_plus(10.0).unwrap();
        let row = coherent_row(&sc, 5.0).unwrap();
        assert!(row.c_full < 0.02, "{}", row.c_full);
    }

    #[test]
    fn timeseries_keeps_grid_order() {
        let sc = CoherentScenario::psi_plus(2.0).unwrap();
        let grid: Vec<f64> = (0..50).map(|k| 0.1 * k as f64).collect();
        let rows = concurrence_timeseries(&sc, &grid).unwrap();
        assert!(rows.iter().zip(&grid).all(|(r, t)| r.tau == *t));
        assert!((rows[0].c_full - 1.0).abs() < 1e-10 && (rows[0].c_xproj - 1.0).abs() < 1e-10);
        assert!(concurrence_timeseries(&sc, &[1.0, 0.5]).is_err());
    }
}
