use nalgebra::{DMatrix, DVector, SymmetricEigen};
use num_rational::BigRational;

use super::charpoly::{char_poly, BigMatrix};
use super::factor::{factor, gershgorin_bound, Factor};
use super::scalar::ExactScalar;
use crate::error::{Error, Result};
use crate::graph::State;
use crate::surd::Surd;

/// Numerical thresholds used on the float path.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Tolerances {
    /// Eigenvalues closer than this are merged into one eigenspace.
    pub group: f64,
    /// Entrywise tolerance for projector identities.
    pub validate: f64,
    /// Projections with a smaller norm count as zero.
    pub support: f64,
}

impl Default for Tolerances {
    fn default() -> Self {
        Self { group: 1e-9, validate: 1e-10, support: 1e-10 }
    }
}

impl Tolerances {
    /// Scales the whole family so that `group` becomes `base`.
    pub fn scaled(base: f64) -> Self {
        Self { group: base, validate: base * 0.1, support: base * 0.1 }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize, serde::Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Exactness {
    Exact,
    Float,
}

/// Symmetric matrix with exact entries.
#[derive(Debug, Clone, PartialEq)]
pub struct ExactMatrix {
    n: usize,
    data: Vec<Surd>,
}

impl ExactMatrix {
    pub fn zeros(n: usize) -> Self {
        Self { n, data: vec![Surd::zero(); n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = Surd::one();
        }
        m
    }

    pub fn from_i64(m: &DMatrix<i64>) -> Self {
        let n = m.nrows();
        Self { n, data: (0..n * n).map(|k| Surd::from_int(m[(k / n, k % n)])).collect() }
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> &Surd {
        &self.data[i * self.n + j]
    }

    pub fn to_f64(&self) -> DMatrix<f64> {
        DMatrix::from_fn(self.n, self.n, |i, j| self.get(i, j).to_f64())
    }

    pub fn mul(&self, rhs: &ExactMatrix) -> ExactMatrix {
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.get(i, k);
                if a.is_zero() {
                    continue;
                }
                for j in 0..n {
                    let b = rhs.get(k, j);
                    if !b.is_zero() {
                        out.data[i * n + j] = &out.data[i * n + j] + &(a * b);
                    }
                }
            }
        }
        out
    }

    pub fn add(&self, rhs: &ExactMatrix) -> ExactMatrix {
        ExactMatrix { n: self.n, data: self.data.iter().zip(&rhs.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, k: &Surd) -> ExactMatrix {
        ExactMatrix { n: self.n, data: self.data.iter().map(|a| a * k).collect() }
    }

    pub fn trace(&self) -> Surd {
        (0..self.n).fold(Surd::zero(), |acc, i| &acc + self.get(i, i))
    }

    /// `M · s` for a basis or pair state.
    pub fn apply(&self, s: &State) -> Vec<Surd> {
        let terms = s.terms();
        (0..self.n)
            .map(|i| {
                terms.iter().fold(Surd::zero(), |acc, &(j, c)| {
                    let v = self.get(i, j);
                    if c == 1 {
                        &acc + v
                    } else {
                        &acc - v
                    }
                })
            })
            .collect()
    }
}

/// One eigenvalue with its eigenprojector.
#[derive(Debug, Clone)]
pub struct EigenPair {
    pub value: ExactScalar,
    pub multiplicity: usize,
    exact: Option<ExactMatrix>,
    float: DMatrix<f64>,
}

impl EigenPair {
    /// The projector with exact entries (exact path only).
    pub fn exact_projector(&self) -> Option<&ExactMatrix> {
        self.exact.as_ref()
    }

    /// The projector in floating point (always available).
    pub fn projector(&self) -> &DMatrix<f64> {
        &self.float
    }
}

/// `M = Σ λ_r F_r` with distinct eigenvalues in ascending order.
#[derive(Debug, Clone)]
pub struct SpectralDecomposition {
    source: String,
    dim: usize,
    pairs: Vec<EigenPair>,
    exactness: Exactness,
    tolerances: Tolerances,
}

impl SpectralDecomposition {
    pub fn source(&self) -> &str {
        &self.source
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn pairs(&self) -> &[EigenPair] {
        &self.pairs
    }

    pub fn exactness(&self) -> Exactness {
        self.exactness
    }

    pub fn is_exact(&self) -> bool {
        self.exactness == Exactness::Exact
    }

    pub fn tolerances(&self) -> &Tolerances {
        &self.tolerances
    }

    pub fn eigenvalues(&self) -> Vec<&ExactScalar> {
        self.pairs.iter().map(|p| &p.value).collect()
    }

    /// `s2ᵀ F_r s1` for every eigenpair, in floating point.
    pub fn overlap_weights(&self, s1: &State, s2: &State) -> Vec<f64> {
        let (t1, t2) = (s1.terms(), s2.terms());
        self.pairs
            .iter()
            .map(|p| {
                let mut acc = 0.0;
                for &(i, ci) in &t2 {
                    for &(j, cj) in &t1 {
                        acc += (ci * cj) as f64 * p.float[(i, j)];
                    }
                }
                acc
            })
            .collect()
    }

    /// `F_r s` in floating point.
    pub fn project_float(&self, index: usize, s: &State) -> DVector<f64> {
        let f = &self.pairs[index].float;
        let mut out = DVector::zeros(self.dim);
        for (j, c) in s.terms() {
            out += f.column(j) * c as f64;
        }
        out
    }

    /// Checks `Σ F = I`, `F_r F_s = δ_rs F_r` and `Σ λ F = M`: exactly on the
    /// exact path, within `tolerances.validate` otherwise.
    pub fn check_invariants(&self, m: &DMatrix<f64>) -> std::result::Result<(), String> {
        let n = self.dim;
        if self.is_exact() {
            let mut sum = ExactMatrix::zeros(n);
            let mut recon = ExactMatrix::zeros(n);
            for (r, p) in self.pairs.iter().enumerate() {
                let f = p.exact.as_ref().ok_or("missing exact projector")?;
                sum = sum.add(f);
                recon = recon.add(&f.scale(&p.value.to_surd().ok_or("float eigenvalue")?));
                for (s, q) in self.pairs.iter().enumerate().skip(r) {
                    let prod = f.mul(q.exact.as_ref().ok_or("missing exact projector")?);
                    let expect = if r == s { f.clone() } else { ExactMatrix::zeros(n) };
                    if prod != expect {
                        return Err(format!("F_{r} F_{s} is not {}", if r == s { "F_r" } else { "0" }));
                    }
                }
                if p.exact.as_ref().unwrap().trace() != Surd::from_int(p.multiplicity as i64) {
                    return Err(format!("trace of F_{r} differs from multiplicity {}", p.multiplicity));
                }
            }
            if sum != ExactMatrix::identity(n) {
                return Err("projectors do not sum to the identity".into());
            }
            let target = DMatrix::from_fn(n, n, |i, j| m[(i, j)].round() as i64);
            if recon != ExactMatrix::from_i64(&target) || target.map(|x| x as f64) != *m {
                return Err("Σ λ F does not reconstruct the matrix".into());
            }
            return Ok(());
        }
        let tol = self.tolerances.validate;
        let close = |a: &DMatrix<f64>, b: &DMatrix<f64>| (a - b).amax() <= tol * (1.0 + b.amax());
        let mut sum = DMatrix::zeros(n, n);
        let mut recon = DMatrix::zeros(n, n);
        for (r, p) in self.pairs.iter().enumerate() {
            sum += &p.float;
            recon += &p.float * p.value.to_f64();
            for (s, q) in self.pairs.iter().enumerate().skip(r) {
                let prod = &p.float * &q.float;
                let expect = if r == s { p.float.clone() } else { DMatrix::zeros(n, n) };
                if !close(&prod, &expect) {
                    return Err(format!("F_{r} F_{s} off by {}", (prod - expect).amax()));
                }
            }
        }
        if !close(&sum, &DMatrix::identity(n, n)) {
            return Err("projectors do not sum to the identity".into());
        }
        if !close(&recon, m) {
            return Err(format!("reconstruction off by {}", (recon - m).amax()));
        }
        Ok(())
    }
}

fn check_symmetric_i64(m: &DMatrix<i64>) -> Result<()> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidParams("matrix must be square and non-empty".into()));
    }
    for i in 0..m.nrows() {
        for j in 0..i {
            if m[(i, j)] != m[(j, i)] {
                return Err(Error::NotSymmetric(i, j));
            }
        }
    }
    Ok(())
}

/// Spectral decomposition of a symmetric integer matrix with default
/// tolerances.
pub fn eigen_decompose(m: &DMatrix<i64>, source: impl Into<String>) -> Result<SpectralDecomposition> {
    eigen_decompose_with(m, source, Tolerances::default())
}

/// Exact decomposition when every irreducible factor of the characteristic
/// polynomial has degree at most two; otherwise the float decomposition.
pub fn eigen_decompose_with(
    m: &DMatrix<i64>,
    source: impl Into<String>,
    tolerances: Tolerances,
) -> Result<SpectralDecomposition> {
    check_symmetric_i64(m)?;
    let source = source.into();
    let mf = m.map(|x| x as f64);
    let approx = SymmetricEigen::new(mf.clone()).eigenvalues;
    let poly = char_poly(m);
    let split = factor(&poly, gershgorin_bound(m), approx.as_slice());
    if !split.is_complete() {
        return float_decompose_with(&mf, source, tolerances);
    }
    let n = m.nrows();
    let big = BigMatrix::from_i64(m);
    let factors: Vec<(Factor, usize)> = split.factors;
    // f_j(M) for each distinct irreducible factor
    let evaluated: Vec<BigMatrix> = factors.iter().map(|(f, _)| eval_factor(f, &big)).collect();
    let k = evaluated.len();
    let mut prefix = Vec::with_capacity(k);
    let mut acc = BigMatrix::identity(n);
    for f in &evaluated {
        prefix.push(acc.clone());
        acc = acc.mul(f);
    }
    let mut suffix = vec![BigMatrix::identity(n); k];
    let mut acc = BigMatrix::identity(n);
    for j in (0..k).rev() {
        suffix[j] = acc.clone();
        acc = evaluated[j].mul(&acc);
    }

    let mut pairs = Vec::new();
    for (i, (fac, mult)) in factors.iter().enumerate() {
        let numer = prefix[i].mul(&suffix[i]);
        match fac {
            Factor::Linear(root) => {
                let root_s = Surd::from_bigint(root.clone());
                let denom = other_factors_at(&factors, i, &root_s);
                let inv = denom.inverse().expect("distinct roots give a nonzero denominator");
                let proj = big_to_exact(&numer).scale(&inv);
                pairs.push(finish_pair(ExactScalar::Integer(root.clone()), *mult, proj));
            }
            Factor::Quadratic { s, k: disc_k, delta, .. } => {
                let nm = numer.mul(&big);
                for sign in [1i64, -1] {
                    let b = disc_k * sign;
                    let value = ExactScalar::quadratic(s.clone(), b.clone(), *delta)?;
                    let rho = value.to_surd().expect("exact");
                    let conj = ExactScalar::quadratic(s.clone(), -b.clone(), *delta)?.to_surd().expect("exact");
                    let denom = &other_factors_at(&factors, i, &rho) * &(&rho - &conj);
                    let inv = denom.inverse().expect("distinct roots give a nonzero denominator");
                    // F_ρ = N (M - ρ̄ I) / (D(ρ) (ρ - ρ̄))
                    let data = (0..n * n)
                        .map(|idx| {
                            let e = &Surd::from_bigint(nm.data[idx].clone())
                                - &(&conj * &Surd::from_bigint(numer.data[idx].clone()));
                            &e * &inv
                        })
                        .collect();
                    pairs.push(finish_pair(value, *mult, ExactMatrix { n, data }));
                }
            }
        }
    }
    pairs.sort_by(|a, b| a.value.cmp_value(&b.value));
    Ok(SpectralDecomposition { source, dim: n, pairs, exactness: Exactness::Exact, tolerances })
}

fn finish_pair(value: ExactScalar, multiplicity: usize, proj: ExactMatrix) -> EigenPair {
    let float = proj.to_f64();
    EigenPair { value, multiplicity, exact: Some(proj), float }
}

fn eval_factor(f: &Factor, m: &BigMatrix) -> BigMatrix {
    match f {
        Factor::Linear(r) => {
            let mut out = m.clone();
            out.add_diag(&-r.clone());
            out
        }
        Factor::Quadratic { s, p, .. } => {
            let mut out = m.mul(m).scaled_add(&-s.clone(), m);
            out.add_diag(p);
            out
        }
    }
}

/// `Π_{j≠i} f_j(x)`.
fn other_factors_at(factors: &[(Factor, usize)], i: usize, x: &Surd) -> Surd {
    factors.iter().enumerate().filter(|(j, _)| *j != i).fold(Surd::one(), |acc, (_, (f, _))| {
        let coeffs = f.coefficients();
        let val = coeffs
            .iter()
            .rev()
            .fold(Surd::zero(), |v, c| &(&v * x) + &Surd::from_bigint(c.clone()));
        &acc * &val
    })
}

fn big_to_exact(m: &BigMatrix) -> ExactMatrix {
    ExactMatrix {
        n: m.n,
        data: m.data.iter().map(|x| Surd::from_rational(BigRational::from_integer(x.clone()))).collect(),
    }
}

/// Numerical decomposition of any real symmetric matrix.
pub fn float_decompose(m: &DMatrix<f64>, source: impl Into<String>) -> Result<SpectralDecomposition> {
    float_decompose_with(m, source, Tolerances::default())
}

pub fn float_decompose_with(
    m: &DMatrix<f64>,
    source: impl Into<String>,
    tolerances: Tolerances,
) -> Result<SpectralDecomposition> {
    if !m.is_square() || m.nrows() == 0 {
        return Err(Error::InvalidParams("matrix must be square and non-empty".into()));
    }
    let n = m.nrows();
    let eig = SymmetricEigen::new(m.clone());
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| eig.eigenvalues[a].total_cmp(&eig.eigenvalues[b]));
    let scale = 1.0 + m.amax();
    let mut clusters: Vec<Vec<usize>> = Vec::new();
    for &idx in &order {
        let x = eig.eigenvalues[idx];
        if let Some(last) = clusters.last_mut() {
            let prev = eig.eigenvalues[*last.last().unwrap()];
            let gap = x - prev;
            if gap <= tolerances.group * scale {
                last.push(idx);
                continue;
            }
            if gap <= 1e3 * tolerances.group * scale {
                return Err(Error::NumericFailure(format!(
                    "eigenvalues {prev} and {x} are {gap:e} apart, inside the ambiguous band"
                )));
            }
        }
        clusters.push(vec![idx]);
    }
    let pairs = clusters
        .into_iter()
        .map(|cluster| {
            let vals: Vec<f64> = cluster.iter().map(|&i| eig.eigenvalues[i]).collect();
            let mean = vals.iter().sum::<f64>() / vals.len() as f64;
            let spread = vals.iter().map(|v| (v - mean).abs()).fold(0.0, f64::max);
            let mut proj = DMatrix::zeros(n, n);
            for &i in &cluster {
                let v = eig.eigenvectors.column(i);
                proj += v * v.transpose();
            }
            EigenPair {
                value: ExactScalar::Float { value: mean, err: spread + f64::EPSILON * scale * n as f64 },
                multiplicity: cluster.len(),
                exact: None,
                float: proj,
            }
        })
        .collect();
    Ok(SpectralDecomposition { source: source.into(), dim: n, pairs, exactness: Exactness::Float, tolerances })
}
