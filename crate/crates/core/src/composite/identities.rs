//! Transition matrices of products assembled from walks on the factors.

use num_complex::Complex64;

use crate::dynamics::{transition_matrix, CMatrix};
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::spectral::eigen_decompose;

/// `U_{L(G×H)}(t) = exp(-i r1 r2 t) Σ_θ F_θ ⊗ U_{A_H}((θ - r1) t)`, with `F_θ`
/// the Laplacian eigenprojectors of `G`.
pub fn tensor_factorized_evolution(g: &Graph, h: &Graph, t: f64) -> Result<CMatrix> {
    let r1 = g.regularity().ok_or(Error::NotRegular("G"))?;
    let r2 = h.regularity().ok_or(Error::NotRegular("H"))?;
    let dec_g = eigen_decompose(&g.laplacian(), "L(G)")?;
    let dec_h = eigen_decompose(h.adjacency(), "A(H)")?;
    let (n, m) = (g.n(), h.n());
    let mut u = CMatrix::zeros(n * m, n * m);
    for pair in dec_g.pairs() {
        let f = pair.projector().map(|x| Complex64::new(x, 0.0));
        let inner = transition_matrix(&dec_h, (pair.value.to_f64() - r1 as f64) * t);
        u += f.kronecker(&inner);
    }
    Ok(u * Complex64::from_polar(1.0, -((r1 * r2) as f64) * t))
}

/// `U_{A(G⋉H)}(t) = ½ [[U₊ + U₋, U₊ - U₋], [U₊ - U₋, U₊ + U₋]]` with
/// `U± = U_{A_G ± A_H}(t)`.
pub fn cover_blocks_evolution(g: &Graph, h: &Graph, t: f64) -> Result<CMatrix> {
    let n = g.n();
    if h.n() != n {
        return Err(Error::SizeMismatch { left: n, right: h.n() });
    }
    let up = transition_matrix(&eigen_decompose(&(g.adjacency() + h.adjacency()), "A_G + A_H")?, t);
    let um = transition_matrix(&eigen_decompose(&(g.adjacency() - h.adjacency()), "A_G - A_H")?, t);
    let half = Complex64::new(0.5, 0.0);
    let (sum, diff) = ((&up + &um) * half, (&up - &um) * half);
    let mut u = CMatrix::zeros(2 * n, 2 * n);
    u.view_mut((0, 0), (n, n)).copy_from(&sum);
    u.view_mut((n, n), (n, n)).copy_from(&sum);
    u.view_mut((0, n), (n, n)).copy_from(&diff);
    u.view_mut((n, 0), (n, n)).copy_from(&diff);
    Ok(u)
}
