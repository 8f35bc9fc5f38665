//! Exact certificates for perfect state transfer, pair state transfer and
//! periodicity.
//!
//! All checks run on exact decompositions only. Eigenvalues of the support
//! are written as `(a + y_r √Δ)/2` with one common `a`; transfer and
//! periodicity then reduce to integer arithmetic on the `y_r`.

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::cospectral::{strong_cospectral, support_indices, CospectralReport};
use crate::error::{Error, Result};
use crate::graph::{PairState, State, VertexState};
use crate::phase::{ExactTime, Phase};
use crate::spectral::{ExactScalar, SpectralDecomposition};
use crate::surd::Surd;

/// Why a certificate was refused.
#[derive(Debug, Clone, PartialEq, Serialize)]
#[serde(tag = "reason", content = "eigenvalue")]
pub enum CertFailure {
    NotStronglyCospectral,
    MixedFields,
    /// The difference to this eigenvalue is not an integer multiple of `√Δ`.
    RatioCondition(ExactScalar),
    /// This eigenvalue sits in the wrong sign class for its parity.
    ParityCondition(ExactScalar),
    EmptyLambdaPlus,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TransferKind {
    Pst,
    PairTransfer,
}

#[derive(Debug, Clone, Serialize)]
pub struct TransferCertificate {
    pub kind: TransferKind,
    pub source: String,
    pub from: State,
    pub to: State,
    pub exists: bool,
    pub delta: Option<u64>,
    pub g: Option<u64>,
    pub tau0: Option<ExactTime>,
    pub theta0: Option<ExactScalar>,
    pub phase: Option<Phase>,
    pub failure: Option<CertFailure>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    pub cospectral: CospectralReport,
}

impl TransferCertificate {
    /// `U(k τ₀) from` equals `phase^k to` for odd `k` and `phase^k from` for
    /// even `k`. Returns the predicted target and phase.
    pub fn predict(&self, k: i64) -> Option<(State, Phase)> {
        let phase = self.phase.as_ref()?.pow(k);
        Some((if k.rem_euclid(2) == 1 { self.to } else { self.from }, phase))
    }
}

/// Eigenvalues of one support in the form `(a + y_r √Δ)/2`.
struct FieldForm {
    delta: u64,
    y: Vec<BigInt>,
}

fn field_form(values: &[&ExactScalar]) -> std::result::Result<FieldForm, CertFailure> {
    let forms: Vec<(BigInt, BigInt, u64)> = values.iter().map(|v| v.half_form().expect("exact eigenvalue")).collect();
    let mut deltas: Vec<u64> = forms.iter().map(|f| f.2).filter(|&d| d > 1).collect();
    deltas.sort_unstable();
    deltas.dedup();
    match deltas.as_slice() {
        [] => Ok(FieldForm { delta: 1, y: forms.into_iter().map(|f| f.0).collect() }),
        [delta] => {
            let a = &forms[0].0;
            if let Some(i) = forms.iter().position(|f| &f.0 != a) {
                return Err(CertFailure::RatioCondition(values[i].clone()));
            }
            let y: Vec<BigInt> = forms.iter().map(|f| f.1.clone()).collect();
            // differences (y_0 - y_r)/2 must be integers
            if let Some(i) = y.iter().position(|yr| (yr - &y[0]).is_odd()) {
                return Err(CertFailure::RatioCondition(values[i].clone()));
            }
            Ok(FieldForm { delta: *delta, y })
        }
        _ => Err(CertFailure::MixedFields),
    }
}

/// `gcd{(y_0 - y_r)/2}`
fn difference_gcd(y: &[BigInt], base: &BigInt) -> BigInt {
    y.iter().fold(BigInt::zero(), |g, yr| g.gcd(&((base - yr) / 2)))
}

fn zero_warning(values: &[&ExactScalar], delta: u64, out: &mut Vec<String>) {
    if delta > 1 && values.iter().any(|v| v.as_integer().is_some_and(Zero::is_zero)) {
        out.push(format!(
            "0 lies in the support together with eigenvalues of Q(sqrt({delta})); the common (a + b sqrt(D))/2 form was applied to it as well"
        ));
    }
}

fn require_exact(dec: &SpectralDecomposition) -> Result<()> {
    if dec.is_exact() {
        Ok(())
    } else {
        Err(Error::NotExact)
    }
}

fn certify_transfer(dec: &SpectralDecomposition, s1: State, s2: State, kind: TransferKind) -> Result<TransferCertificate> {
    require_exact(dec)?;
    let same = match (s1, s2) {
        (State::Pair(p), State::Pair(q)) => p.same_pair(q),
        _ => s1 == s2,
    };
    if same {
        return Err(Error::SameState);
    }
    let report = strong_cospectral(dec, &s1, &s2)?;
    let mut cert = TransferCertificate {
        kind,
        source: dec.source().to_string(),
        from: s1,
        to: s2,
        exists: false,
        delta: None,
        g: None,
        tau0: None,
        theta0: None,
        phase: None,
        failure: None,
        warnings: report.warnings.clone(),
        cospectral: report,
    };
    let (plus_idx, minus_idx) = (cert.cospectral.plus_idx.clone(), cert.cospectral.minus_idx.clone());
    if !cert.cospectral.strongly_cospectral {
        cert.failure = Some(CertFailure::NotStronglyCospectral);
        return Ok(cert);
    }
    if plus_idx.is_empty() {
        cert.failure = Some(CertFailure::EmptyLambdaPlus);
        return Ok(cert);
    }
    // θ₀ = max Λ⁺; pairs are sorted ascending
    let theta0_idx = *plus_idx.last().expect("non-empty Λ⁺");
    let mut idx: Vec<usize> = plus_idx.iter().chain(&minus_idx).copied().collect();
    idx.sort_unstable();
    let values: Vec<&ExactScalar> = idx.iter().map(|&r| &dec.pairs()[r].value).collect();
    let form = match field_form(&values) {
        Ok(f) => f,
        Err(e) => {
            cert.failure = Some(e);
            return Ok(cert);
        }
    };
    let mut warnings = Vec::new();
    zero_warning(&values, form.delta, &mut warnings);
    cert.warnings.extend(warnings);
    cert.delta = Some(form.delta);
    let pos0 = idx.iter().position(|&r| r == theta0_idx).expect("θ₀ in support");
    let y0 = form.y[pos0].clone();
    let g = difference_gcd(&form.y, &y0);
    if g.is_zero() {
        return Err(Error::SameState);
    }
    cert.g = g.to_u64();
    for (pos, &r) in idx.iter().enumerate() {
        let k: BigInt = (&y0 - &form.y[pos]) / 2 / &g;
        if k.is_even() != plus_idx.contains(&r) {
            cert.failure = Some(CertFailure::ParityCondition(dec.pairs()[r].value.clone()));
            return Ok(cert);
        }
    }
    let theta0 = dec.pairs()[theta0_idx].value.clone();
    let tau0 = ExactTime::pi_over(&g, form.delta);
    cert.phase = Some(Phase::evolution(&tau0, &theta0.to_surd().expect("exact")));
    cert.tau0 = Some(tau0);
    cert.theta0 = Some(theta0);
    cert.exists = true;
    Ok(cert)
}

/// Pair state transfer `s1 → s2` for the matrix behind `dec` (Laplacian or
/// adjacency).
pub fn certify_pair_transfer(dec: &SpectralDecomposition, s1: PairState, s2: PairState) -> Result<TransferCertificate> {
    certify_transfer(dec, State::Pair(s1), State::Pair(s2), TransferKind::PairTransfer)
}

/// Vertex state transfer `u → v`.
pub fn certify_pst(dec: &SpectralDecomposition, u: VertexState, v: VertexState) -> Result<TransferCertificate> {
    certify_transfer(dec, State::Vertex(u), State::Vertex(v), TransferKind::Pst)
}

#[derive(Debug, Clone, Serialize)]
pub struct PeriodicityCertificate {
    pub source: String,
    pub state: State,
    pub periodic: bool,
    /// Singleton support: periodic at every time.
    pub all_times: bool,
    pub minimal_period: Option<ExactTime>,
    pub phase_at_period: Option<Phase>,
    pub support: Vec<ExactScalar>,
    pub delta: Option<u64>,
    pub g: Option<u64>,
    pub failure: Option<CertFailure>,
    pub warnings: Vec<String>,
    #[serde(skip)]
    support_values: Vec<Surd>,
}

impl PeriodicityCertificate {
    /// Phase of the return at `t`, or `None` when the state is not periodic
    /// at `t`.
    pub fn phase_at(&self, t: &ExactTime) -> Option<Phase> {
        common_phase(&self.support_values, t)
    }
}

fn common_phase(values: &[Surd], t: &ExactTime) -> Option<Phase> {
    let first = Phase::evolution(t, values.first()?);
    values[1..].iter().all(|v| Phase::evolution(t, v) == first).then_some(first)
}

/// Periodicity of `s` under the matrix behind `dec`.
pub fn certify_periodic(dec: &SpectralDecomposition, s: State) -> Result<PeriodicityCertificate> {
    require_exact(dec)?;
    let idx = support_indices(dec, &s)?;
    let values: Vec<&ExactScalar> = idx.iter().map(|&r| &dec.pairs()[r].value).collect();
    let mut cert = PeriodicityCertificate {
        source: dec.source().to_string(),
        state: s,
        periodic: false,
        all_times: false,
        minimal_period: None,
        phase_at_period: None,
        support: values.iter().map(|v| (*v).clone()).collect(),
        delta: None,
        g: None,
        failure: None,
        warnings: Vec::new(),
        support_values: values.iter().map(|v| v.to_surd().expect("exact")).collect(),
    };
    if values.len() == 1 {
        cert.periodic = true;
        cert.all_times = true;
        cert.delta = values[0].delta();
        return Ok(cert);
    }
    let form = match field_form(&values) {
        Ok(f) => f,
        Err(CertFailure::MixedFields) => return Err(Error::MixedFields),
        Err(e) => {
            cert.failure = Some(e);
            return Ok(cert);
        }
    };
    zero_warning(&values, form.delta, &mut cert.warnings);
    let y0 = form.y.last().expect("non-empty support").clone();
    let g = difference_gcd(&form.y, &y0);
    let period = ExactTime::pi_over(&g, form.delta).scale(&BigInt::from(2).into());
    cert.phase_at_period = cert.phase_at(&period);
    debug_assert!(cert.phase_at_period.is_some());
    cert.periodic = true;
    cert.delta = Some(form.delta);
    cert.g = g.to_u64();
    cert.minimal_period = Some(period);
    Ok(cert)
}

/// `exp(-i t λ)` common to the whole support of `s`, if `s` is periodic at
/// `t`.
pub fn phase_at(dec: &SpectralDecomposition, s: &State, t: &ExactTime) -> Result<Option<Phase>> {
    require_exact(dec)?;
    let values: Vec<Surd> = support_indices(dec, s)?
        .into_iter()
        .map(|r| dec.pairs()[r].value.to_surd().expect("exact"))
        .collect();
    Ok(common_phase(&values, t))
}

/// The phase `χ` with `U(t) s1 = χ s2`, if that holds exactly.
pub fn transfer_phase_at(dec: &SpectralDecomposition, s1: &State, s2: &State, t: &ExactTime) -> Result<Option<Phase>> {
    require_exact(dec)?;
    let report = strong_cospectral(dec, s1, s2)?;
    if !report.strongly_cospectral {
        return Ok(None);
    }
    let signed = |r: usize, minus: bool| {
        let p = Phase::evolution(t, &dec.pairs()[r].value.to_surd().expect("exact"));
        if minus {
            -&p
        } else {
            p
        }
    };
    let mut all = report.plus_idx.iter().map(|&r| signed(r, false)).chain(report.minus_idx.iter().map(|&r| signed(r, true)));
    let Some(first) = all.next() else {
        return Ok(None);
    };
    Ok(all.all(|p| p == first).then_some(first))
}
