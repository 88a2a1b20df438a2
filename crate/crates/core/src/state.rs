//! Pure-state containers, partial traces and density-matrix diagnostics.
//!
//! # Basis conventions
//!
//! Every two-qubit density matrix in this crate uses the ordering
//! `[ee, eg, ge, gg]`: the first qubit is the more significant index and
//! the atomic excited state `e` is index 0, the ground state `g` index 1.
//! Field qubits (vacuum engine) are indexed by photon number, so `0`
//! photons is index 0. All engines share these conventions.

use num_complex::Complex64 as C64;

use crate::error::{Error, Result};
use crate::linalg::{hermitian_eigenvalues, CMatrix4};

/// Atomic excited state index.
pub const EXCITED: usize = 0;
/// Atomic ground state index.
pub const GROUND: usize = 1;

/// Labels of the two-qubit basis, in storage order.
pub const BASIS_LABELS: [&str; 4] = ["ee", "eg", "ge", "gg"];

pub const HERMITICITY_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-10;
pub const POSITIVITY_TOL: f64 = 1e-9;
/// Norm deficit above which a traced amplitude tensor is rejected.
pub const TRUNCATION_LIMIT: f64 = 1e-6;

#[inline]
pub fn pair_index(first: usize, second: usize) -> usize {
    2 * first + second
}

/// A 4×4 two-qubit density matrix in the `[ee, eg, ge, gg]` basis.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TwoQubitDensity(CMatrix4);

impl TwoQubitDensity {
    pub fn from_matrix(m: CMatrix4) -> Self {
        TwoQubitDensity(m)
    }

    /// Projector onto a (not necessarily normalized) pure state.
    pub fn from_pure(psi: &[C64; 4]) -> Self {
        TwoQubitDensity(CMatrix4::from_fn(|i, j| psi[i] * psi[j].conj()))
    }

    pub fn maximally_mixed() -> Self {
        TwoQubitDensity(CMatrix4::identity() * C64::new(0.25, 0.0))
    }

    pub fn matrix(&self) -> &CMatrix4 {
        &self.0
    }

    pub fn into_matrix(self) -> CMatrix4 {
        self.0
    }

    pub fn entry(&self, row: usize, col: usize) -> C64 {
        self.0[(row, col)]
    }

    pub fn trace(&self) -> C64 {
        self.0.trace()
    }

    /// Relabel the two qubits (first ↔ second).
    pub fn swap_qubits(&self) -> Self {
        let perm = [0usize, 2, 1, 3];
        TwoQubitDensity(CMatrix4::from_fn(|i, j| self.0[(perm[i], perm[j])]))
    }

    /// Convex combination `w·self + (1−w)·other`.
    pub fn mix(&self, other: &Self, w: f64) -> Self {
        TwoQubitDensity(self.0 * C64::new(w, 0.0) + other.0 * C64::new(1.0 - w, 0.0))
    }
}

/// Result of [`validate_density`]. Thresholds are left to the caller.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct DensityDiagnostics {
    /// max |ρ_ij − conj(ρ_ji)|
    pub hermiticity_defect: f64,
    /// |tr ρ − 1|
    pub trace_defect: f64,
    /// Smallest eigenvalue of the Hermitian part; values in (−1e−9, 0) are
    /// clamped to 0.
    pub min_eigenvalue: f64,
}

impl DensityDiagnostics {
    pub fn is_physical(&self) -> bool {
        self.hermiticity_defect <= HERMITICITY_TOL
            && self.trace_defect <= TRACE_TOL
            && self.min_eigenvalue >= -POSITIVITY_TOL
    }
}

pub fn validate_density(rho: &TwoQubitDensity) -> DensityDiagnostics {
    let m = rho.matrix();
    let mut herm: f64 = 0.0;
    for i in 0..4 {
        for j in 0..4 {
            herm = herm.max((m[(i, j)] - m[(j, i)].conj()).norm());
        }
    }
    let trace_defect = (m.trace() - C64::new(1.0, 0.0)).norm();
    let mut min_eigenvalue = hermitian_eigenvalues(m)[0];
    if min_eigenvalue > -POSITIVITY_TOL && min_eigenvalue < 0.0 {
        min_eigenvalue = 0.0;
    }
    DensityDiagnostics {
        hermiticity_defect: herm,
        trace_defect,
        min_eigenvalue,
    }
}

/// The four qubits of the vacuum scenario: two atoms and two field modes
/// restricted to 0/1 photons.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Qubit {
    AtomA,
    AtomB,
    FieldA,
    FieldB,
}

impl Qubit {
    /// Bit position inside a [`PureState16`] flat index.
    fn shift(self) -> usize {
        match self {
            Qubit::AtomA => 3,
            Qubit::AtomB => 2,
            Qubit::FieldA => 1,
            Qubit::FieldB => 0,
        }
    }
}

/// The six distinguishable qubit pairs of the two-site system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Pair {
    /// AB: the two atoms.
    Atoms,
    /// ab: the two field modes.
    Fields,
    /// Aa: atom and field at site A.
    SiteA,
    /// Bb: atom and field at site B.
    SiteB,
    /// Ab
    AtomAFieldB,
    /// Ba
    AtomBFieldA,
}

impl Pair {
    pub const ALL: [Pair; 6] = [
        Pair::Atoms,
        Pair::Fields,
        Pair::SiteA,
        Pair::SiteB,
        Pair::AtomAFieldB,
        Pair::AtomBFieldA,
    ];

    pub fn qubits(self) -> (Qubit, Qubit) {
        match self {
            Pair::Atoms => (Qubit::AtomA, Qubit::AtomB),
            Pair::Fields => (Qubit::FieldA, Qubit::FieldB),
            Pair::SiteA => (Qubit::AtomA, Qubit::FieldA),
            Pair::SiteB => (Qubit::AtomB, Qubit::FieldB),
            Pair::AtomAFieldB => (Qubit::AtomA, Qubit::FieldB),
            Pair::AtomBFieldA => (Qubit::AtomB, Qubit::FieldA),
        }
    }

    pub fn label(self) -> &'static str {
        match self {
            Pair::Atoms => "AB",
            Pair::Fields => "ab",
            Pair::SiteA => "Aa",
            Pair::SiteB => "Bb",
            Pair::AtomAFieldB => "Ab",
            Pair::AtomBFieldA => "Ba",
        }
    }
}

/// Normalized pure state of atoms A, B and fields a, b, each restricted to a
/// qubit. Flat index `8·A + 4·B + 2·n_a + n_b`.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct PureState16 {
    amps: [C64; 16],
}

impl PureState16 {
    pub const NORM_TOL: f64 = 1e-12;

    pub fn new(amps: [C64; 16]) -> Result<Self> {
        let norm: f64 = amps.iter().map(|a| a.norm_sqr()).sum();
        let defect = (norm - 1.0).abs();
        if defect > Self::NORM_TOL {
            return Err(Error::NotNormalized { defect });
        }
        Ok(PureState16 { amps })
    }

    #[inline]
    pub fn index(atom_a: usize, atom_b: usize, photons_a: usize, photons_b: usize) -> usize {
        8 * atom_a + 4 * atom_b + 2 * photons_a + photons_b
    }

    pub fn amplitude(&self, atom_a: usize, atom_b: usize, photons_a: usize, photons_b: usize) -> C64 {
        self.amps[Self::index(atom_a, atom_b, photons_a, photons_b)]
    }

    pub fn amplitudes(&self) -> &[C64; 16] {
        &self.amps
    }

    /// Exchange site A (atom A, field a) with site B (atom B, field b).
    pub fn swap_sites(&self) -> Self {
        let mut out = [C64::new(0.0, 0.0); 16];
        for a in 0..2 {
            for b in 0..2 {
                for na in 0..2 {
                    for nb in 0..2 {
                        out[Self::index(b, a, nb, na)] = self.amps[Self::index(a, b, na, nb)];
                    }
                }
            }
        }
        PureState16 { amps: out }
    }
}

/// Reduced density matrix of `pair`, tracing out the complementary two
/// qubits. The first qubit of the pair is the more significant index.
pub fn pair_reduce(phi: &PureState16, pair: Pair) -> TwoQubitDensity {
    let (q1, q2) = pair.qubits();
    let (s1, s2) = (q1.shift(), q2.shift());
    let rest: Vec<usize> = (0..4).filter(|&s| s != s1 && s != s2).collect();
    let amps = phi.amplitudes();
    let mut rho = CMatrix4::zeros();
    for r in 0..4usize {
        let env = ((r >> 1) & 1) << rest[1] | (r & 1) << rest[0];
        for x in 0..4usize {
            let ix = env | ((x >> 1) & 1) << s1 | (x & 1) << s2;
            for y in 0..4usize {
                let iy = env | ((y >> 1) & 1) << s1 | (y & 1) << s2;
                rho[(x, y)] += amps[ix] * amps[iy].conj();
            }
        }
    }
    TwoQubitDensity(rho)
}

/// Pure-state amplitudes of two atoms and two truncated field modes, shape
/// `2 × 2 × (N+1) × (N+1)` with the photon numbers `(n, m)` fastest.
#[derive(Debug, Clone, PartialEq)]
pub struct JointAmplitudeTensor {
    cutoff: usize,
    amps: Vec<C64>,
}

impl JointAmplitudeTensor {
    pub fn zeros(cutoff: usize) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        let dim = cutoff + 1;
        Ok(JointAmplitudeTensor {
            cutoff,
            amps: vec![C64::new(0.0, 0.0); 4 * dim * dim],
        })
    }

    pub fn from_amplitudes(cutoff: usize, amps: Vec<C64>) -> Result<Self> {
        if cutoff < 1 {
            return Err(Error::InvalidCutoff(cutoff));
        }
        let dim = cutoff + 1;
        if amps.len() != 4 * dim * dim {
            return Err(Error::InvalidParameter(format!(
                "amplitude array of length {} does not match cutoff {}",
                amps.len(),
                cutoff
            )));
        }
        Ok(JointAmplitudeTensor { cutoff, amps })
    }

    /// `atoms ⊗ field_a ⊗ field_b`; both field vectors must have `N+1` entries.
    pub fn product(atoms: &[C64; 4], field_a: &[C64], field_b: &[C64]) -> Result<Self> {
        if field_a.len() != field_b.len() || field_a.len() < 2 {
            return Err(Error::InvalidParameter(
                "field vectors must share a length of at least 2".into(),
            ));
        }
        let mut t = Self::zeros(field_a.len() - 1)?;
        for (s, &c) in atoms.iter().enumerate() {
            for (n, &fa) in field_a.iter().enumerate() {
                for (m, &fb) in field_b.iter().enumerate() {
                    *t.get_mut(s, n, m) = c * fa * fb;
                }
            }
        }
        Ok(t)
    }

    pub fn cutoff(&self) -> usize {
        self.cutoff
    }

    #[inline]
    fn offset(&self, atoms: usize, n: usize, m: usize) -> usize {
        let dim = self.cutoff + 1;
        (atoms * dim + n) * dim + m
    }

    pub fn get(&self, atoms: usize, n: usize, m: usize) -> C64 {
        self.amps[self.offset(atoms, n, m)]
    }

    pub fn get_mut(&mut self, atoms: usize, n: usize, m: usize) -> &mut C64 {
        let o = self.offset(atoms, n, m);
        &mut self.amps[o]
    }

    /// Contiguous `(N+1)²` block belonging to the two-atom basis state `atoms`.
    pub fn block(&self, atoms: usize) -> &[C64] {
        let len = (self.cutoff + 1) * (self.cutoff + 1);
        &self.amps[atoms * len..(atoms + 1) * len]
    }

    pub fn block_mut(&mut self, atoms: usize) -> &mut [C64] {
        let len = (self.cutoff + 1) * (self.cutoff + 1);
        &mut self.amps[atoms * len..(atoms + 1) * len]
    }

    pub fn amplitudes(&self) -> &[C64] {
        &self.amps
    }

    pub fn norm_sqr(&self) -> f64 {
        self.amps.iter().map(|a| a.norm_sqr()).sum()
    }
}

/// Reduced two-atom density matrix: ρ[s,s'] = Σ_{n,m} Ψ[s,n,m]·conj(Ψ[s',n,m]).
pub fn partial_trace_fields(psi: &JointAmplitudeTensor) -> Result<TwoQubitDensity> {
    if psi.cutoff() < 1 {
        return Err(Error::InvalidCutoff(psi.cutoff()));
    }
    let mut rho = CMatrix4::zeros();
    for s in 0..4 {
        let bs = psi.block(s);
        for t in s..4 {
            let bt = psi.block(t);
            let v = bs
                .iter()
                .zip(bt)
                .fold(C64::new(0.0, 0.0), |acc, (x, y)| acc + x * y.conj());
            rho[(s, t)] = v;
            rho[(t, s)] = v.conj();
        }
    }
    let deficit = (1.0 - rho.trace().re).abs();
    if deficit > TRUNCATION_LIMIT {
        return Err(Error::Truncation {
            deficit,
            limit: TRUNCATION_LIMIT,
        });
    }
    Ok(TwoQubitDensity(rho))
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::FRAC_1_SQRT_2;

    fn c(re: f64) -> C64 {
        C64::new(re, 0.0)
    }

    fn bell_psi_plus() -> [C64; 4] {
        [c(0.0), c(FRAC_1_SQRT_2), c(FRAC_1_SQRT_2), c(0.0)]
    }

    #[test]
    fn product_state_reduces_to_pure_projector() {
        let mut field = vec![c(0.0); 4];
        field[0] = c(1.0);
        let psi = JointAmplitudeTensor::product(&[c(1.0), c(0.0), c(0.0), c(0.0)], &field, &field)
            .unwrap();
        let rho = partial_trace_fields(&psi).unwrap();
        assert_eq!(rho.entry(0, 0), c(1.0));
        assert!((rho.trace() - c(1.0)).norm() < 1e-15);
        for i in 0..4 {
            for j in 0..4 {
                if (i, j) != (0, 0) {
                    assert_eq!(rho.entry(i, j), c(0.0));
                }
            }
        }
    }

    #[test]
    fn bell_times_field_product_factors_out() {
        // arbitrary normalized field states
        let fa = [c(0.6), C64::new(0.0, 0.8), c(0.0)];
        let fb = [C64::new(0.48, 0.0), c(0.64), C64::new(0.0, -0.6)];
        let psi = JointAmplitudeTensor::product(&bell_psi_plus(), &fa, &fb).unwrap();
        let rho = partial_trace_fields(&psi).unwrap();
        let want = TwoQubitDensity::from_pure(&bell_psi_plus());
        assert!((rho.matrix() - want.matrix()).norm() < 1e-15);
        assert!((rho.entry(1, 2).re - 0.5).abs() < 1e-15);
        assert!((rho.entry(1, 1).re - 0.5).abs() < 1e-15);
    }

    #[test]
    fn rejects_zero_cutoff_and_truncated_norm() {
        assert_eq!(JointAmplitudeTensor::zeros(0), Err(Error::InvalidCutoff(0)));
        let mut psi = JointAmplitudeTensor::zeros(2).unwrap();
        *psi.get_mut(0, 0, 0) = c(0.999);
        assert!(matches!(
            partial_trace_fields(&psi),
            Err(Error::Truncation { .. })
        ));
    }

    #[test]
    fn validate_maximally_mixed() {
        let d = validate_density(&TwoQubitDensity::maximally_mixed());
        assert_eq!(d.hermiticity_defect, 0.0);
        assert!(d.trace_defect < 1e-15);
        assert!((d.min_eigenvalue - 0.25).abs() < 1e-14);
        assert!(d.is_physical());
    }

    #[test]
    fn validate_pure_bell_projector() {
        let d = validate_density(&TwoQubitDensity::from_pure(&bell_psi_plus()));
        assert!(d.min_eigenvalue.abs() < 1e-12);
        assert!(d.is_physical());
    }

    #[test]
    fn validate_reports_trace_defect() {
        let m = CMatrix4::identity() * c(0.245);
        let d = validate_density(&TwoQubitDensity::from_matrix(m));
        assert!((d.trace_defect - 0.02).abs() < 1e-14);
        assert!(!d.is_physical());
    }

    #[test]
    fn validate_reports_non_hermitian() {
        let mut m = *TwoQubitDensity::maximally_mixed().matrix();
        m[(0, 1)] = C64::new(0.0, 0.1);
        let d = validate_density(&TwoQubitDensity::from_matrix(m));
        assert!((d.hermiticity_defect - 0.1).abs() < 1e-15);
    }

    fn bell_ab_vacuum() -> PureState16 {
        let mut a = [c(0.0); 16];
        a[PureState16::index(EXCITED, GROUND, 0, 0)] = c(FRAC_1_SQRT_2);
        a[PureState16::index(GROUND, EXCITED, 0, 0)] = c(FRAC_1_SQRT_2);
        PureState16::new(a).unwrap()
    }

    #[test]
    fn pair_reduce_bell_on_atoms() {
        let phi = bell_ab_vacuum();
        let ab = pair_reduce(&phi, Pair::Atoms);
        let want = TwoQubitDensity::from_pure(&bell_psi_plus());
        assert!((ab.matrix() - want.matrix()).norm() < 1e-15);

        let fields = pair_reduce(&phi, Pair::Fields);
        assert!((fields.entry(0, 0) - c(1.0)).norm() < 1e-15);
        assert!((fields.trace() - c(1.0)).norm() < 1e-15);
    }

    #[test]
    fn pair_reduce_site_pairs_are_mixed() {
        let phi = bell_ab_vacuum();
        let aa = pair_reduce(&phi, Pair::SiteA);
        // atom A is maximally mixed, its field is in vacuum
        assert!((aa.entry(0, 0).re - 0.5).abs() < 1e-15);
        assert!((aa.entry(2, 2).re - 0.5).abs() < 1e-15);
        assert!(aa.entry(0, 2).norm() < 1e-15);
    }

    #[test]
    fn unnormalized_pure_state_rejected() {
        let mut a = [c(0.0); 16];
        a[0] = c(0.9);
        assert!(matches!(PureState16::new(a), Err(Error::NotNormalized { .. })));
    }

    #[test]
    fn swap_sites_is_involution() {
        let mut a = [c(0.0); 16];
        for (k, v) in a.iter_mut().enumerate() {
            *v = C64::new(k as f64, -(k as f64) * 0.5);
        }
        let norm: f64 = a.iter().map(|x| x.norm_sqr()).sum::<f64>().sqrt();
        for v in a.iter_mut() {
            *v /= norm;
        }
        let phi = PureState16::new(a).unwrap();
        assert_eq!(phi.swap_sites().swap_sites(), phi);
        assert_eq!(
            phi.swap_sites().amplitude(1, 0, 1, 0),
            phi.amplitude(0, 1, 0, 1)
        );
    }
}
