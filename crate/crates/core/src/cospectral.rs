//! Eigenvalue supports and strong cospectrality of basis and pair states.

use serde::Serialize;

use crate::error::{Error, Result};
use crate::graph::State;
use crate::spectral::{ExactScalar, SpectralDecomposition};
use crate::surd::Surd;

/// Projection norms in this band are reported as numerically ambiguous.
const AMBIGUOUS_BAND: (f64, f64) = (1e-12, 1e-8);

/// Projections of two states onto an eigenspace where they are neither equal
/// nor opposite.
#[derive(Debug, Clone, Serialize)]
pub struct Witness {
    pub eigenvalue: ExactScalar,
    pub projected1: Vec<f64>,
    pub projected2: Vec<f64>,
}

#[derive(Debug, Clone, Serialize)]
pub struct CospectralReport {
    pub support1: Vec<ExactScalar>,
    pub support2: Vec<ExactScalar>,
    /// Λ⁺: eigenvalues with `F s1 = F s2 ≠ 0`.
    pub plus: Vec<ExactScalar>,
    /// Λ⁻: eigenvalues with `F s1 = -F s2 ≠ 0`.
    pub minus: Vec<ExactScalar>,
    pub strongly_cospectral: bool,
    pub witnesses: Vec<Witness>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub support_idx: Vec<usize>,
    #[serde(skip)]
    pub plus_idx: Vec<usize>,
    #[serde(skip)]
    pub minus_idx: Vec<usize>,
}

enum Projection {
    Exact(Vec<Surd>),
    Float(Vec<f64>),
}

impl Projection {
    fn is_zero(&self, tol: f64) -> bool {
        match self {
            Projection::Exact(v) => v.iter().all(Surd::is_zero),
            Projection::Float(v) => norm(v) <= tol,
        }
    }

    fn to_f64(&self) -> Vec<f64> {
        match self {
            Projection::Exact(v) => v.iter().map(Surd::to_f64).collect(),
            Projection::Float(v) => v.clone(),
        }
    }
}

fn norm(v: &[f64]) -> f64 {
    v.iter().map(|x| x * x).sum::<f64>().sqrt()
}

fn project(dec: &SpectralDecomposition, index: usize, s: &State) -> Projection {
    match dec.pairs()[index].exact_projector() {
        Some(f) => Projection::Exact(f.apply(s)),
        None => Projection::Float(dec.project_float(index, s).as_slice().to_vec()),
    }
}

fn ambiguity(dec: &SpectralDecomposition, index: usize, label: &str, v: &Projection, out: &mut Vec<String>) {
    if let Projection::Float(x) = v {
        let nrm = norm(x);
        if (AMBIGUOUS_BAND.0..=AMBIGUOUS_BAND.1).contains(&nrm) {
            out.push(format!(
                "projection of {label} onto eigenvalue {} has norm {nrm:e}, close to the zero threshold",
                dec.pairs()[index].value
            ));
        }
    }
}

/// Indices (into `dec.pairs()`) of eigenvalues whose projector does not
/// annihilate `s`.
pub fn support_indices(dec: &SpectralDecomposition, s: &State) -> Result<Vec<usize>> {
    s.check_dim(dec.dim())?;
    let tol = dec.tolerances().support;
    Ok((0..dec.pairs().len()).filter(|&r| !project(dec, r, s).is_zero(tol)).collect())
}

/// The eigenvalue support of `s`.
pub fn support(dec: &SpectralDecomposition, s: &State) -> Result<Vec<ExactScalar>> {
    Ok(support_indices(dec, s)?.into_iter().map(|r| dec.pairs()[r].value.clone()).collect())
}

/// Classifies each eigenvalue of the supports into Λ⁺, Λ⁻ or neither.
pub fn strong_cospectral(dec: &SpectralDecomposition, s1: &State, s2: &State) -> Result<CospectralReport> {
    if !s1.same_kind(s2) {
        return Err(Error::KindMismatch);
    }
    s1.check_dim(dec.dim())?;
    s2.check_dim(dec.dim())?;
    let tol = dec.tolerances().support;
    let mut report = CospectralReport {
        support1: Vec::new(),
        support2: Vec::new(),
        plus: Vec::new(),
        minus: Vec::new(),
        strongly_cospectral: true,
        witnesses: Vec::new(),
        warnings: Vec::new(),
        support_idx: Vec::new(),
        plus_idx: Vec::new(),
        minus_idx: Vec::new(),
    };
    for r in 0..dec.pairs().len() {
        let value = &dec.pairs()[r].value;
        let p1 = project(dec, r, s1);
        let p2 = project(dec, r, s2);
        ambiguity(dec, r, &s1.to_string(), &p1, &mut report.warnings);
        ambiguity(dec, r, &s2.to_string(), &p2, &mut report.warnings);
        let (z1, z2) = (p1.is_zero(tol), p2.is_zero(tol));
        if !z1 {
            report.support1.push(value.clone());
            report.support_idx.push(r);
        }
        if !z2 {
            report.support2.push(value.clone());
        }
        if z1 && z2 {
            continue;
        }
        let (same, opposite) = match (&p1, &p2) {
            (Projection::Exact(a), Projection::Exact(b)) => {
                (a == b, a.iter().zip(b).all(|(x, y)| (x + y).is_zero()))
            }
            _ => {
                let (a, b) = (p1.to_f64(), p2.to_f64());
                let diff: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x - y).collect();
                let sum: Vec<f64> = a.iter().zip(&b).map(|(x, y)| x + y).collect();
                (norm(&diff) < tol, norm(&sum) < tol)
            }
        };
        if z1 || z2 || !(same || opposite) {
            report.strongly_cospectral = false;
            report.witnesses.push(Witness {
                eigenvalue: value.clone(),
                projected1: p1.to_f64(),
                projected2: p2.to_f64(),
            });
        } else if same {
            report.plus.push(value.clone());
            report.plus_idx.push(r);
        } else {
            report.minus.push(value.clone());
            report.minus_idx.push(r);
        }
    }
    Ok(report)
}
