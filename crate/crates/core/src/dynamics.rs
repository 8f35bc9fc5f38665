//! Numerical quantum-walk evolution: spectral transition matrices, an
//! independent series exponential, fidelities and time sweeps.

use std::io::Write;

use nalgebra::DMatrix;
use num_complex::Complex64;
use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::State;
use crate::phase::{ExactTime, Phase};
use crate::spectral::SpectralDecomposition;

pub type CMatrix = DMatrix<Complex64>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Method {
    Spectral,
    SeriesOracle,
}

/// `U(t) = Σ exp(-i t λ_r) F_r`
pub fn transition_matrix(dec: &SpectralDecomposition, t: f64) -> CMatrix {
    let phases: Vec<Complex64> =
        dec.pairs().iter().map(|p| Complex64::from_polar(1.0, -t * p.value.to_f64())).collect();
    combine(dec, &phases)
}

/// Same as [`transition_matrix`] with each `exp(-i t λ_r)` evaluated exactly
/// first, which removes rounding at certified times such as `π/2`.
pub fn transition_matrix_exact(dec: &SpectralDecomposition, t: &ExactTime) -> CMatrix {
    let phases: Vec<Complex64> = dec
        .pairs()
        .iter()
        .map(|p| match p.value.to_surd() {
            Some(l) => Phase::evolution(t, &l).to_complex(),
            None => Complex64::from_polar(1.0, -t.to_f64() * p.value.to_f64()),
        })
        .collect();
    combine(dec, &phases)
}

fn combine(dec: &SpectralDecomposition, phases: &[Complex64]) -> CMatrix {
    let n = dec.dim();
    let mut u = CMatrix::zeros(n, n);
    for (p, z) in dec.pairs().iter().zip(phases) {
        u.zip_apply(p.projector(), |acc, f| *acc += z * f);
    }
    u
}

/// `exp(-i t M)` by scaling and squaring of the Taylor series. Uses no
/// eigendecomposition.
pub fn expm_oracle(m: &DMatrix<f64>, t: f64) -> CMatrix {
    let n = m.nrows();
    let x: CMatrix = m.map(|v| Complex64::new(0.0, -t * v));
    let norm1 = (0..n).map(|j| x.column(j).iter().map(|z| z.norm()).sum::<f64>()).fold(0.0, f64::max);
    let mut squarings = 0u32;
    let mut scale = 1.0;
    while norm1 * scale > 0.5 {
        scale *= 0.5;
        squarings += 1;
    }
    let xs = x * Complex64::new(scale, 0.0);
    let mut sum = CMatrix::identity(n, n);
    let mut term = CMatrix::identity(n, n);
    for k in 1..=40 {
        term = &term * &xs * Complex64::new(1.0 / k as f64, 0.0);
        sum += &term;
        if term.iter().map(|z| z.norm()).fold(0.0, f64::max) < 1e-18 {
            break;
        }
    }
    for _ in 0..squarings {
        sum = &sum * &sum;
    }
    sum
}

/// Evolution by either method. The oracle needs the original matrix.
pub fn evolve(dec: &SpectralDecomposition, m: &DMatrix<f64>, t: f64, method: Method) -> CMatrix {
    match method {
        Method::Spectral => transition_matrix(dec, t),
        Method::SeriesOracle => expm_oracle(m, t),
    }
}

/// `s2ᵀ U s1`
pub fn overlap(u: &CMatrix, s1: &State, s2: &State) -> Complex64 {
    let mut acc = Complex64::new(0.0, 0.0);
    for (i, ci) in s2.terms() {
        for (j, cj) in s1.terms() {
            acc += u[(i, j)] * (ci * cj) as f64;
        }
    }
    acc
}

/// `|s2ᵀ U s1|² / (‖s1‖² ‖s2‖²)`, the ½-normalized overlap for pair states.
pub fn fidelity_from(u: &CMatrix, s1: &State, s2: &State) -> f64 {
    overlap(u, s1, s2).norm_sqr() / (s1.norm_sq() * s2.norm_sq())
}

/// `χ` in `U s1 = χ s2`, read off from the overlap. Meaningful only when the
/// fidelity is 1.
pub fn realized_phase(u: &CMatrix, s1: &State, s2: &State) -> Complex64 {
    overlap(u, s1, s2) / s2.norm_sq()
}

/// Fidelity computed from the spectral weights `s2ᵀ F_r s1` without forming
/// `U(t)`.
pub fn fidelity(dec: &SpectralDecomposition, s1: &State, s2: &State, t: f64) -> f64 {
    let amp: Complex64 = dec
        .overlap_weights(s1, s2)
        .iter()
        .zip(dec.pairs())
        .map(|(w, p)| Complex64::from_polar(*w, -t * p.value.to_f64()))
        .sum();
    amp.norm_sqr() / (s1.norm_sq() * s2.norm_sq())
}

/// Largest entry of `|U Uᴴ - I|`.
pub fn unitarity_error(u: &CMatrix) -> f64 {
    let n = u.nrows();
    (u * u.adjoint() - CMatrix::identity(n, n)).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

pub fn max_abs_diff(a: &CMatrix, b: &CMatrix) -> f64 {
    (a - b).iter().map(|z| z.norm()).fold(0.0, f64::max)
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize)]
pub struct Peak {
    pub t: f64,
    pub fidelity: f64,
}

#[derive(Debug, Clone, Serialize)]
pub struct SweepResult {
    pub times: Vec<f64>,
    pub fidelities: Vec<f64>,
    pub peaks: Vec<Peak>,
}

/// Fidelities below this are not reported as peaks.
pub const PEAK_THRESHOLD: f64 = 0.5;

impl SweepResult {
    pub fn max(&self) -> Option<Peak> {
        self.times
            .iter()
            .zip(&self.fidelities)
            .map(|(&t, &fidelity)| Peak { t, fidelity })
            .max_by(|a, b| a.fidelity.total_cmp(&b.fidelity))
    }

    /// CSV with header `t,fidelity`, 17 significant digits.
    pub fn write_csv<W: Write>(&self, mut out: W) -> std::io::Result<()> {
        writeln!(out, "t,fidelity")?;
        for (t, f) in self.times.iter().zip(&self.fidelities) {
            writeln!(out, "{t:.16e},{f:.16e}")?;
        }
        Ok(())
    }
}

/// Fidelity on `steps` equally spaced times in `[t_min, t_max]`. A single
/// row is produced when `t_min == t_max`.
pub fn sweep(dec: &SpectralDecomposition, s1: &State, s2: &State, t_min: f64, t_max: f64, steps: usize) -> Result<SweepResult> {
    if !t_min.is_finite() || !t_max.is_finite() || t_max < t_min {
        return Err(Error::InvalidParams(format!("bad time range [{t_min}, {t_max}]")));
    }
    let times: Vec<f64> = if t_min == t_max {
        vec![t_min]
    } else if steps < 2 {
        return Err(Error::InvalidParams(format!("a sweep needs at least 2 steps, got {steps}")));
    } else {
        let h = (t_max - t_min) / (steps - 1) as f64;
        (0..steps).map(|k| if k + 1 == steps { t_max } else { t_min + h * k as f64 }).collect()
    };
    let weights = dec.overlap_weights(s1, s2);
    let norm = s1.norm_sq() * s2.norm_sq();
    let fidelities: Vec<f64> = times
        .iter()
        .map(|&t| {
            let amp: Complex64 = weights
                .iter()
                .zip(dec.pairs())
                .map(|(w, p)| Complex64::from_polar(*w, -t * p.value.to_f64()))
                .sum();
            amp.norm_sqr() / norm
        })
        .collect();
    let mut peaks = Vec::new();
    for k in 0..fidelities.len() {
        let f = fidelities[k];
        let left = if k > 0 { fidelities[k - 1] } else { f64::NEG_INFINITY };
        let right = fidelities.get(k + 1).copied().unwrap_or(f64::NEG_INFINITY);
        if f >= PEAK_THRESHOLD && f >= left && f > right {
            peaks.push(Peak { t: times[k], fidelity: f });
        }
    }
    Ok(SweepResult { times, fidelities, peaks })
}

/// Largest `|s1ᵀ U(t) s2|` over the sample times, via the series oracle.
pub fn max_pair_overlap(m: &DMatrix<f64>, s1: &State, s2: &State, times: &[f64]) -> f64 {
    times.iter().map(|&t| overlap(&expm_oracle(m, t), s2, s1).norm()).fold(0.0, f64::max)
}

/// Checks `|(e_a - e_b)ᵀ U(t) (e_c - e_d)| ≤ 2` at every sample time.
pub fn bounded_overlap_check(m: &DMatrix<f64>, s1: &State, s2: &State, times: &[f64]) -> Result<bool> {
    if !matches!((s1, s2), (State::Pair(_), State::Pair(_))) {
        return Err(Error::KindMismatch);
    }
    Ok(max_pair_overlap(m, s1, s2, times) <= 2.0 + 1e-9)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::Graph;
    use crate::spectral::eigen_decompose;
    use std::f64::consts::PI;

    fn as_f64(m: &DMatrix<i64>) -> DMatrix<f64> {
        m.map(|x| x as f64)
    }

    #[test]
    fn identity_at_zero() {
        let dec = eigen_decompose(&Graph::cycle(5).unwrap().laplacian(), "L").unwrap();
        assert!(max_abs_diff(&transition_matrix(&dec, 0.0), &CMatrix::identity(5, 5)) < 1e-12);
        assert!(max_abs_diff(&expm_oracle(&DMatrix::zeros(3, 3), 2.0), &CMatrix::identity(3, 3)) == 0.0);
    }

    #[test]
    fn path_two_examples() {
        let g = Graph::path(2).unwrap();
        let l = eigen_decompose(&g.laplacian(), "L").unwrap();
        let s = State::pair(0, 1, 2).unwrap();
        let u = transition_matrix(&l, PI / 2.0);
        assert!((realized_phase(&u, &s, &s) - Complex64::new(-1.0, 0.0)).norm() < 1e-12);

        let a = eigen_decompose(g.adjacency(), "A").unwrap();
        let u = transition_matrix_exact(&a, &ExactTime::pi_ratio(1, 2));
        assert_eq!(u[(1, 0)], Complex64::new(0.0, -1.0));
        assert_eq!(u[(0, 0)], Complex64::new(0.0, 0.0));
    }

    #[test]
    fn oracle_matches_spectral_on_cycle() {
        let g = Graph::cycle(4).unwrap();
        let dec = eigen_decompose(&g.laplacian(), "L").unwrap();
        let diff = max_abs_diff(&transition_matrix(&dec, 1.0), &expm_oracle(&as_f64(&g.laplacian()), 1.0));
        assert!(diff < 1e-10, "{diff}");
    }

    #[test]
    fn oracle_inverse_identity() {
        let m = as_f64(&Graph::complete(6).unwrap().laplacian());
        let prod = expm_oracle(&m, 3.7) * expm_oracle(&m, -3.7);
        assert!(max_abs_diff(&prod, &CMatrix::identity(6, 6)) < 1e-10);
    }

    #[test]
    fn four_cycle_fidelities() {
        let dec = eigen_decompose(&Graph::cycle(4).unwrap().laplacian(), "L").unwrap();
        let (s1, s2) = (State::pair(0, 1, 4).unwrap(), State::pair(2, 3, 4).unwrap());
        assert!((fidelity(&dec, &s1, &s2, PI / 2.0) - 1.0).abs() < 1e-12);
        assert!((fidelity(&dec, &s1, &s1, 0.0) - 1.0).abs() < 1e-12);
        let quarter = fidelity(&dec, &s1, &s2, PI / 4.0);
        let u = expm_oracle(&as_f64(&Graph::cycle(4).unwrap().laplacian()), PI / 4.0);
        assert!((quarter - fidelity_from(&u, &s1, &s2)).abs() < 1e-12);
        assert!(quarter < 1.0 - 1e-3);
    }

    #[test]
    fn sweep_peaks_at_half_pi() {
        let dec = eigen_decompose(&Graph::cycle(4).unwrap().laplacian(), "L").unwrap();
        let (s1, s2) = (State::pair(0, 1, 4).unwrap(), State::pair(2, 3, 4).unwrap());
        let res = sweep(&dec, &s1, &s2, 0.0, PI, 721).unwrap();
        let best = res.max().unwrap();
        assert!((best.t - PI / 2.0).abs() < PI / 720.0);
        assert!((best.fidelity - 1.0).abs() < 1e-12);
        assert!(res.fidelities.iter().all(|&f| (0.0..=1.0 + 1e-9).contains(&f)));
        assert!(res.peaks.iter().any(|p| (p.t - PI / 2.0).abs() < 1e-9));

        let single = sweep(&dec, &s1, &s1, 0.0, 0.0, 1).unwrap();
        assert_eq!(single.times, vec![0.0]);
        assert!((single.fidelities[0] - 1.0).abs() < 1e-12);
        assert!(sweep(&dec, &s1, &s2, 0.0, 1.0, 1).is_err());
    }

    #[test]
    fn singleton_support_sweep_is_constant() {
        let dec = eigen_decompose(&Graph::complete(5).unwrap().laplacian(), "L").unwrap();
        let s = State::pair(1, 3, 5).unwrap();
        let res = sweep(&dec, &s, &s, 0.0, 10.0, 101).unwrap();
        assert!(res.fidelities.iter().all(|f| (f - 1.0).abs() < 1e-12));
    }

    #[test]
    fn csv_format() {
        let dec = eigen_decompose(&Graph::cycle(4).unwrap().laplacian(), "L").unwrap();
        let s = State::pair(0, 1, 4).unwrap();
        let res = sweep(&dec, &s, &s, 0.0, 1.0, 3).unwrap();
        let mut buf = Vec::new();
        res.write_csv(&mut buf).unwrap();
        let text = String::from_utf8(buf).unwrap();
        let lines: Vec<&str> = text.lines().collect();
        assert_eq!(lines[0], "t,fidelity");
        assert_eq!(lines.len(), 4);
        assert_eq!(lines[1], "0.0000000000000000e0,1.0000000000000000e0");
    }

    #[test]
    fn overlap_bound_equality_cases() {
        let m = as_f64(&Graph::cycle(4).unwrap().laplacian());
        let (s1, s2) = (State::pair(0, 1, 4).unwrap(), State::pair(2, 3, 4).unwrap());
        assert!((max_pair_overlap(&m, &s1, &s2, &[PI / 2.0]) - 2.0).abs() < 1e-10);
        let zero = DMatrix::zeros(4, 4);
        assert!((max_pair_overlap(&zero, &s1, &s1, &[0.3, 5.0]) - 2.0).abs() < 1e-15);
        assert!(bounded_overlap_check(&m, &s1, &s2, &[0.1, 1.0, 2.0]).unwrap());
        assert_eq!(
            bounded_overlap_check(&m, &State::vertex(0, 4).unwrap(), &s2, &[1.0]).unwrap_err(),
            Error::KindMismatch
        );
    }

    #[test]
    fn regular_graph_laplacian_adjacency_relation() {
        for g in [Graph::cycle(6).unwrap(), Graph::complete(5).unwrap(), Graph::circulant(8, &[1, 3, 5, 7]).unwrap()] {
            let r = g.regularity().unwrap() as f64;
            let l = eigen_decompose(&g.laplacian(), "L").unwrap();
            let a = eigen_decompose(g.adjacency(), "A").unwrap();
            for t in [0.3, 1.0, PI / 2.0, 4.2] {
                let lhs = transition_matrix(&l, t);
                let rhs = transition_matrix(&a, -t) * Complex64::from_polar(1.0, -t * r);
                assert!(max_abs_diff(&lhs, &rhs) < 1e-10);
            }
        }
    }
}
