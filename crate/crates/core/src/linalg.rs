//! Small dense Hermitian helpers on 4×4 complex matrices.

use nalgebra::{linalg::SymmetricEigen, Matrix4};
use num_complex::Complex64 as C64;

pub type CMatrix4 = Matrix4<C64>;

/// Eigenvalues of the Hermitian part of `m`, ascending.
pub fn hermitian_eigenvalues(m: &CMatrix4) -> [f64; 4] {
    let h = hermitian_part(m);
    let eig = SymmetricEigen::new(h);
    let mut vals = [0.0; 4];
    for (v, e) in vals.iter_mut().zip(eig.eigenvalues.iter()) {
        *v = *e;
    }
    vals.sort_by(|a, b| a.total_cmp(b));
    vals
}

/// Factor W with `m = W·W†`: eigenvectors scaled by the square roots of
/// the eigenvalues of the Hermitian part, negatives set to zero.
pub fn psd_factor(m: &CMatrix4) -> CMatrix4 {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let mut w = eig.eigenvectors;
    for (k, l) in eig.eigenvalues.iter().enumerate() {
        let root = C64::new(l.max(0.0).sqrt(), 0.0);
        for x in w.column_mut(k).iter_mut() {
            *x *= root;
        }
    }
    w
}

/// Singular values, descending.
pub fn singular_values(m: &CMatrix4) -> [f64; 4] {
    let sv = m.singular_values();
    let mut vals = [sv[0], sv[1], sv[2], sv[3]];
    vals.sort_by(|a, b| b.total_cmp(a));
    vals
}

/// Principal square root of a positive semidefinite Hermitian matrix.
///
/// Eigenvalues below `floor` (absolute) are treated as zero before taking
/// the root.
pub fn psd_sqrt(m: &CMatrix4, floor: f64) -> CMatrix4 {
    let eig = SymmetricEigen::new(hermitian_part(m));
    let roots = eig
        .eigenvalues
        .map(|l| if l > floor { l.sqrt() } else { 0.0 });
    let v = &eig.eigenvectors;
    let mut out = CMatrix4::zeros();
    for k in 0..4 {
        if roots[k] == 0.0 {
            continue;
        }
        let col = v.column(k);
        out += (col * col.adjoint()) * C64::new(roots[k], 0.0);
    }
    out
}

pub fn hermitian_part(m: &CMatrix4) -> CMatrix4 {
    (m + m.adjoint()) * C64::new(0.5, 0.0)
}

/// σ_y ⊗ σ_y in the computational basis. Real and symmetric.
pub fn sigma_yy() -> CMatrix4 {
    let mut m = CMatrix4::zeros();
    m[(0, 3)] = C64::new(-1.0, 0.0);
    m[(1, 2)] = C64::new(1.0, 0.0);
    m[(2, 1)] = C64::new(1.0, 0.0);
    m[(3, 0)] = C64::new(-1.0, 0.0);
    m
}
