//! Saddle-point approximations for the coherent-field problem: the sums
//! I12 = Σ A_n² e^{iτ/2√n} and I34 = Σ A_n² e^{2iτ√n}, the resulting
//! working formula for Λ(τ) = ρ23 − √(ρ11ρ44), and the revival envelope.
//!
//! Λ is assembled as ¼[|I12|² − 1 + 2·Re(I34²)] with the cross terms
//! between different revival indices dropped. This form gives Λ(0) = 1/2
//! and peak concurrences equal to [`envelope`]. Two literal variants with
//! different k = 0 damping, [`lambda_literal_main`] and
//! [`lambda_literal_appendix`], are for comparison only; both give Λ(0) = 1/4.

use std::f64::consts::PI;

use num_complex::Complex64 as C64;

use crate::coherent::poisson_amplitudes;
use crate::error::{Error, Result};

/// Validity of the approximation degrades quickly below this amplitude.
pub const RECOMMENDED_MIN_AMP: f64 = 10.0;

/// Coherent amplitude and the number of revival terms kept.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct SaddleParams {
    pub coherent_amp: f64,
    pub kmax: usize,
}

impl SaddleParams {
    pub fn new(coherent_amp: f64, kmax: usize) -> Result<Self> {
        if !(coherent_amp >= 1.0) || !coherent_amp.is_finite() {
            return Err(Error::InvalidParameter(format!(
                "saddle-point formulas need coherent amplitude >= 1, got {coherent_amp}"
            )));
        }
        Ok(SaddleParams { coherent_amp, kmax })
    }

    /// Enough revival terms to cover τ ≤ `tau_max`.
    pub fn for_range(coherent_amp: f64, tau_max: f64) -> Result<Self> {
        Self::new(coherent_amp, default_kmax(tau_max, coherent_amp))
    }
}

/// ⌈τ_max/(2πα_c)⌉ + 1.
pub fn default_kmax(tau_max: f64, coherent_amp: f64) -> usize {
    (tau_max.max(0.0) / (2.0 * PI * coherent_amp)).ceil() as usize + 1
}

/// Revival index nearest to τ, at least 1.
pub fn nearest_revival(tau: f64, coherent_amp: f64) -> usize {
    ((tau / (2.0 * PI * coherent_amp)).round() as usize).max(1)
}

/// exp(−τ²/32α⁴)·e^{iτ/2α}.
pub fn i12(tau: f64, coherent_amp: f64) -> C64 {
    let a2 = coherent_amp * coherent_amp;
    C64::from_polar((-tau * tau / (32.0 * a2 * a2)).exp(), tau / (2.0 * coherent_amp))
}

/// k = 0 term of I34: e^{−τ²/2}·e^{2iατ}.
pub fn i34_collapse_term(tau: f64, coherent_amp: f64) -> C64 {
    C64::from_polar((-0.5 * tau * tau).exp(), 2.0 * coherent_amp * tau)
}

/// Real k ≥ 1 term of I34: √(1/πk)·exp[−Δ²/(1+π²k²)]·cos(2αΔ), Δ = τ − 2πkα.
pub fn i34_revival_term(tau: f64, coherent_amp: f64, k: usize) -> f64 {
    let kf = k as f64;
    let d = tau - 2.0 * PI * kf * coherent_amp;
    (1.0 / (PI * kf)).sqrt() * (-d * d / (1.0 + PI * PI * kf * kf)).exp() * (2.0 * coherent_amp * d).cos()
}

pub fn i34(tau: f64, coherent_amp: f64, kmax: usize) -> C64 {
    (1..=kmax).fold(i34_collapse_term(tau, coherent_amp), |acc, k| {
        acc + i34_revival_term(tau, coherent_amp, k)
    })
}

/// Λ(τ) with cross-revival interference dropped from I34².
pub fn lambda_approx(tau: f64, p: &SaddleParams) -> f64 {
    let a = p.coherent_amp;
    let t0 = i34_collapse_term(tau, a);
    let diag: f64 = (t0 * t0).re
        + (1..=p.kmax)
            .map(|k| i34_revival_term(tau, a, k).powi(2))
            .sum::<f64>();
    0.25 * (i12(tau, a).norm_sqr() - 1.0 + 2.0 * diag)
}

pub fn concurrence_approx(tau: f64, p: &SaddleParams) -> f64 {
    (2.0 * lambda_approx(tau, p).max(0.0)).min(1.0)
}

/// ¼[S1² + S2² + 2S3² − 2S4² − 1] for S1 + iS2 ≈ I12 and S3 + iS4 ≈ I34.
pub fn lambda_from_sums(s12: C64, s34: C64) -> f64 {
    0.25 * (s12.re * s12.re + s12.im * s12.im + 2.0 * s34.re * s34.re - 2.0 * s34.im * s34.im - 1.0)
}

fn revival_terms_literal(tau: f64, a: f64, kmax: usize) -> f64 {
    (1..=kmax)
        .map(|k| {
            let kf = k as f64;
            let d = tau - 2.0 * PI * kf * a;
            (-2.0 * d * d / (1.0 + PI * PI * kf * kf)).exp() * (4.0 * a * d).cos() / (2.0 * PI * kf)
        })
        .sum()
}

/// Literal variant with k = 0 damping e^{−τ²/2}.
pub fn lambda_literal_main(tau: f64, p: &SaddleParams) -> f64 {
    let a = p.coherent_amp;
    let a4 = a.powi(4);
    0.25 * ((-tau * tau / (16.0 * a4)).exp() - 1.0 + (-0.5 * tau * tau).exp() * (4.0 * a * tau).cos())
        + revival_terms_literal(tau, a, p.kmax)
}

/// Literal variant with k = 0 damping e^{−τ²}.
pub fn lambda_literal_appendix(tau: f64, p: &SaddleParams) -> f64 {
    let a = p.coherent_amp;
    let a4 = a.powi(4);
    0.25 * ((-tau * tau / (16.0 * a4)).exp() - 1.0 + (-tau * tau).exp() * (4.0 * a * tau).cos())
        + revival_terms_literal(tau, a, p.kmax)
}

/// Peak concurrence of revival `k`, at τ = 2πkα_c.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct EnvelopeValue {
    pub tau_center: f64,
    /// 1/(πk) − (1 − e^{−τ²/16α⁴})/2; negative for late revivals.
    pub raw: f64,
    pub clamped: f64,
}

pub fn envelope(k: usize, coherent_amp: f64) -> Result<EnvelopeValue> {
    if k == 0 {
        return Err(Error::InvalidParameter("revival index starts at 1".into()));
    }
    let tau = 2.0 * PI * k as f64 * coherent_amp;
    let raw = 1.0 / (PI * k as f64) - 0.5 * (1.0 - (-tau * tau / (16.0 * coherent_amp.powi(4))).exp());
    Ok(EnvelopeValue { tau_center: tau, raw, clamped: raw.max(0.0) })
}

/// Truncated Poisson-weighted sums that the saddle-point results replace.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DiscreteSums {
    /// Σ_{n≥1} A_n² e^{iτ/2√n}; the n = 0 term (weight e^{−n̄}) is dropped.
    pub s12: C64,
    /// Σ_{n≥0} A_n² e^{2iτ√n}.
    pub s34: C64,
}

pub fn discrete_sums(tau: f64, coherent_amp: f64, cutoff: usize) -> Result<DiscreteSums> {
    let amps = poisson_amplitudes(coherent_amp, cutoff, 1.0)?.amps;
    let mut s12 = C64::new(0.0, 0.0);
    let mut s34 = C64::new(0.0, 0.0);
    for (n, a) in amps.iter().enumerate() {
        let w = a * a;
        let r = (n as f64).sqrt();
        if n > 0 {
            s12 += C64::from_polar(w, tau / (2.0 * r));
        }
        s34 += C64::from_polar(w, 2.0 * tau * r);
    }
    Ok(DiscreteSums { s12, s34 })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::coherent::choose_cutoff;

    fn p10(kmax: usize) -> SaddleParams {
        SaddleParams::new(10.0, kmax).unwrap()
    }

    #[test]
    fn i12_values() {
        assert_eq!(i12(0.0, 10.0), C64::new(1.0, 0.0));
        let m = i12(20.0 * PI, 10.0).norm();
        assert!((m - 0.98774).abs() < 1e-5, "{m}");
        let mut last = 1.0;
        for k in 1..50 {
            let v = i12(k as f64 * 3.0, 10.0).norm();
            assert!(v < last);
            last = v;
        }
    }

    #[test]
    fn i34_values() {
        assert!((i34(0.0, 10.0, 3) - C64::new(1.0, 0.0)).norm() < 1e-12);
        let c = i34(20.0 * PI, 10.0, 3);
        assert!((c.re - (1.0 / PI).sqrt()).abs() < 1e-12 && c.im.abs() < 1e-12);
        assert!(i34(10.0 * PI, 10.0, 3).norm() < 1e-6);
    }

    #[test]
    fn lambda_values() {
        assert!((lambda_approx(0.0, &p10(3)) - 0.5).abs() < 1e-12);
        assert!((concurrence_approx(0.0, &p10(3)) - 1.0).abs() < 1e-12);
        let l40 = lambda_approx(40.0, &p10(3));
        assert!((l40 - 0.25 * ((-0.01f64).exp() - 1.0)).abs() < 1e-6, "{l40}");
        assert_eq!(concurrence_approx(40.0, &p10(3)), 0.0);
        let peak = lambda_approx(20.0 * PI, &p10(3));
        assert!((peak - 0.1531).abs() < 1e-4, "{peak}");
        let env = envelope(1, 10.0).unwrap();
        assert!((2.0 * peak - env.raw).abs() < 1e-12);
    }

    #[test]
    fn assembly_identity() {
        let p = p10(4);
        for j in 0..400 {
            let tau = 0.35 * j as f64;
            let via_sums = lambda_from_sums(i12(tau, 10.0), i34(tau, 10.0, p.kmax));
            assert!((via_sums - lambda_approx(tau, &p)).abs() < 1e-12, "tau={tau}");
        }
    }

    #[test]
    fn literal_variants_differ_only_near_origin() {
        let p = p10(3);
        assert!((lambda_literal_main(0.0, &p) - 0.25).abs() < 1e-12);
        assert!((lambda_literal_appendix(0.0, &p) - 0.25).abs() < 1e-12);
        let tau = 20.0 * PI + 0.3;
        assert!((lambda_literal_main(tau, &p) - lambda_literal_appendix(tau, &p)).abs() < 1e-15);
    }

    #[test]
    fn envelope_values() {
        assert!((envelope(1, 10.0).unwrap().raw - 0.3061).abs() < 1e-4);
        assert!((envelope(2, 10.0).unwrap().raw - 0.1122).abs() < 1e-4);
        for k in 1..5 {
            assert!(envelope(k + 1, 10.0).unwrap().raw < envelope(k, 10.0).unwrap().raw);
        }
        assert!(envelope(0, 10.0).is_err());
        let late = envelope(40, 3.0).unwrap();
        assert!(late.raw < 0.0 && late.clamped == 0.0);
    }

    #[test]
    fn kmax_rule() {
        assert_eq!(default_kmax(140.0, 10.0), 4);
        assert_eq!(default_kmax(0.0, 10.0), 1);
        assert_eq!(nearest_revival(0.0, 10.0), 1);
        assert_eq!(nearest_revival(130.0, 10.0), 2);
    }

    #[test]
    fn discrete_sums_at_origin() {
        let n = choose_cutoff(100.0, 1e-12).unwrap();
        let s = discrete_sums(0.0, 10.0, n).unwrap();
        assert!((s.s12.re - 1.0).abs() < 1e-12 && s.s12.im == 0.0);
        assert!((s.s34.re - 1.0).abs() < 1e-12 && s.s34.im == 0.0);
    }

    #[test]
    fn discrete_sums_track_i12_early() {
        let n = choose_cutoff(100.0, 1e-12).unwrap();
        let s = discrete_sums(10.0, 10.0, n).unwrap();
        assert!((s.s12 - i12(10.0, 10.0)).norm() < 5e-3);
    }
}
