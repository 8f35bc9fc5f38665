//! Pair state transfer in tensor products `G × H` of regular graphs.

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::Serialize;

use super::{CompositeVerdict, Condition};
use crate::certify::{certify_pair_transfer, certify_periodic, certify_pst, TransferCertificate};
use crate::cospectral::{strong_cospectral, support_indices};
use crate::error::{Error, Result};
use crate::graph::{tensor_index, Graph, PairState, State, VertexState};
use crate::phase::{ExactTime, Phase};
use crate::spectral::{eigen_decompose, ExactScalar, SpectralDecomposition};
use crate::surd::Surd;

/// Which theorem instance, with vertex arguments in the factor graphs.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum TensorTheorem {
    /// `H` has PST between `w` and `z`; pairs `(a, b)`, `(c, d)` live in `G`.
    /// Transfer `e_(a,w) - e_(b,w) → e_(c,z) - e_(d,z)`.
    Pst { ab: (usize, usize), cd: (usize, usize), wz: (usize, usize) },
    /// `H` has adjacency pair transfer `(a, b) → (c, d)`; `w`, `z` live in
    /// `G`. Transfer `e_(w,a) - e_(w,b) → e_(z,c) - e_(z,d)`.
    PairPst { wz: (usize, usize), ab: (usize, usize), cd: (usize, usize) },
    /// `U_{A_H}(τ) e_z = λ e_w`; `a`, `b` live in `G`.
    /// Transfer `e_(a,w) - e_(b,z) → e_(b,w) - e_(a,z)`.
    Swap { ab: (usize, usize), wz: (usize, usize) },
}

impl TensorTheorem {
    fn id(&self) -> &'static str {
        match self {
            TensorTheorem::Pst { .. } => "tensor1",
            TensorTheorem::PairPst { .. } => "tensor2",
            TensorTheorem::Swap { .. } => "tensor3",
        }
    }
}

#[derive(Debug, Clone)]
pub struct TensorProblem {
    pub g: Graph,
    pub h: Graph,
    pub theorem: TensorTheorem,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Class {
    /// Same sign class as the reference eigenvalue.
    Same,
    Opposite,
    /// No sign classes (swap theorem).
    Free,
}

#[derive(Debug, Clone)]
struct Entry {
    value: ExactScalar,
    /// `θ_r - r_1` or `μ_r`: the factor with `d_r · t / τ` the walk time on `H`.
    d: Surd,
    class: Class,
}

struct Setup {
    template: CompositeVerdict,
    tau: ExactTime,
    lambda: Phase,
    /// Reference eigenvalue first.
    entries: Vec<Entry>,
    r1r2: i64,
    /// The reference eigenvalue lies in Λ⁻ (only when Λ⁺ is empty).
    reference_in_minus: bool,
    ready: bool,
}

fn exact(m: &nalgebra::DMatrix<i64>, source: String) -> Result<SpectralDecomposition> {
    let dec = eigen_decompose(m, source)?;
    if !dec.is_exact() {
        return Err(Error::NotExact);
    }
    Ok(dec)
}

fn h_failure(cert: &TransferCertificate) -> Error {
    Error::HNoPST(format!("{} → {}: {:?}", cert.from, cert.to, cert.failure))
}

fn h_same(e: Error) -> Error {
    match e {
        Error::SameState => Error::HNoPST("source and target coincide".into()),
        other => other,
    }
}

/// Orders entries with the reference first: max of Λ⁺, else max of Λ⁻.
fn classified(dec: &SpectralDecomposition, plus: &[usize], minus: &[usize], shift: i64) -> (Vec<Entry>, bool) {
    let (reference_set, other_set, in_minus) = if plus.is_empty() { (minus, plus, true) } else { (plus, minus, false) };
    let make = |r: usize, class| {
        let value = dec.pairs()[r].value.clone();
        let d = &value.to_surd().expect("exact") - &Surd::from_int(shift);
        Entry { value, d, class }
    };
    let mut entries: Vec<Entry> = reference_set.iter().rev().map(|&r| make(r, Class::Same)).collect();
    entries.extend(other_set.iter().rev().map(|&r| make(r, Class::Opposite)));
    (entries, in_minus)
}

impl TensorProblem {
    pub fn new(g: Graph, h: Graph, theorem: TensorTheorem) -> Self {
        Self { g, h, theorem }
    }

    pub fn product(&self) -> Graph {
        self.g.tensor_product(&self.h)
    }

    fn setup(&self) -> Result<Setup> {
        let r1 = self.g.regularity().ok_or(Error::NotRegular("G"))?;
        let r2 = self.h.regularity().ok_or(Error::NotRegular("H"))?;
        let (n, m) = (self.g.n(), self.h.n());
        let nm = n * m;
        let product = self.product();
        let id = self.theorem.id();
        let pre = format!("{id}(pre)");
        let hyp = format!("{id}(H)");
        let mut ready = true;
        let (template, tau, lambda, entries, reference_in_minus) = match self.theorem {
            TensorTheorem::Pst { ab, cd, wz } => {
                let (p1, p2) = (PairState::new(ab.0, ab.1, n)?, PairState::new(cd.0, cd.1, n)?);
                let (w, z) = (VertexState::new(wz.0, m)?, VertexState::new(wz.1, m)?);
                let from = State::pair(tensor_index(ab.0, w.u, m), tensor_index(ab.1, w.u, m), nm)?;
                let to = State::pair(tensor_index(cd.0, z.u, m), tensor_index(cd.1, z.u, m), nm)?;
                let dec_h = exact(self.h.adjacency(), format!("A({})", self.h.name()))?;
                let cert = certify_pst(&dec_h, w, z).map_err(h_same)?;
                if !cert.exists {
                    return Err(h_failure(&cert));
                }
                let dec_g = exact(&self.g.laplacian(), format!("L({})", self.g.name()))?;
                let rep = strong_cospectral(&dec_g, &State::Pair(p1), &State::Pair(p2))?;
                let mut v = CompositeVerdict::new(id, &product, true, from, to);
                v.set(&hyp, Condition::pass(format!("A_H has PST {} → {} at tau = {}", cert.from, cert.to, cert.tau0.clone().unwrap())));
                if rep.strongly_cospectral {
                    v.set(&pre, Condition::pass("pairs are Laplacian strongly cospectral in G"));
                } else {
                    v.set(&pre, Condition::fail("pairs are not Laplacian strongly cospectral in G"));
                    ready = false;
                }
                let (entries, in_minus) = classified(&dec_g, &rep.plus_idx, &rep.minus_idx, r1);
                (v, cert.tau0.unwrap(), cert.phase.unwrap(), entries, in_minus)
            }
            TensorTheorem::PairPst { wz, ab, cd } => {
                let (w, z) = (State::vertex(wz.0, n)?, State::vertex(wz.1, n)?);
                let (p1, p2) = (PairState::new(ab.0, ab.1, m)?, PairState::new(cd.0, cd.1, m)?);
                let from = State::pair(tensor_index(wz.0, ab.0, m), tensor_index(wz.0, ab.1, m), nm)?;
                let to = State::pair(tensor_index(wz.1, cd.0, m), tensor_index(wz.1, cd.1, m), nm)?;
                let dec_h = exact(self.h.adjacency(), format!("A({})", self.h.name()))?;
                let cert = certify_pair_transfer(&dec_h, p1, p2).map_err(h_same)?;
                if !cert.exists {
                    return Err(h_failure(&cert));
                }
                let dec_g = exact(self.g.adjacency(), format!("A({})", self.g.name()))?;
                let rep = strong_cospectral(&dec_g, &w, &z)?;
                let mut v = CompositeVerdict::new(id, &product, true, from, to);
                v.set(
                    &hyp,
                    Condition::pass(format!("A_H has pair transfer {} → {} at tau = {}", cert.from, cert.to, cert.tau0.clone().unwrap())),
                );
                if rep.strongly_cospectral {
                    v.set(&pre, Condition::pass("w and z are adjacency strongly cospectral in G"));
                } else {
                    v.set(&pre, Condition::fail("w and z are not adjacency strongly cospectral in G"));
                    ready = false;
                }
                let (entries, in_minus) = classified(&dec_g, &rep.plus_idx, &rep.minus_idx, 0);
                (v, cert.tau0.unwrap(), cert.phase.unwrap(), entries, in_minus)
            }
            TensorTheorem::Swap { ab, wz } => {
                PairState::new(ab.0, ab.1, n)?;
                let (w, z) = (VertexState::new(wz.0, m)?, VertexState::new(wz.1, m)?);
                let from = State::pair(tensor_index(ab.0, w.u, m), tensor_index(ab.1, z.u, m), nm)?;
                let to = State::pair(tensor_index(ab.1, w.u, m), tensor_index(ab.0, z.u, m), nm)?;
                let dec_h = exact(self.h.adjacency(), format!("A({})", self.h.name()))?;
                let (tau, lambda, detail) = if w != z {
                    let cert = certify_pst(&dec_h, z, w)?;
                    if !cert.exists {
                        return Err(h_failure(&cert));
                    }
                    let tau = cert.tau0.unwrap();
                    let detail = format!("U_A_H(tau) e{} = lambda e{} at tau = {tau}", z.u, w.u);
                    (tau, cert.phase.unwrap(), detail)
                } else {
                    let cert = certify_periodic(&dec_h, State::Vertex(z))?;
                    if cert.all_times {
                        return Err(Error::HNoPST(format!("e{} has a single support eigenvalue: no minimum period", z.u)));
                    }
                    let Some(tau) = cert.minimal_period else {
                        return Err(Error::HNoPST(format!("e{} is not periodic: {:?}", z.u, cert.failure)));
                    };
                    let detail = format!("e{} periodic under A_H with minimum period {tau}", z.u);
                    (tau, cert.phase_at_period.unwrap(), detail)
                };
                let dec_g = exact(self.g.adjacency(), format!("A({})", self.g.name()))?;
                let mut idx = support_indices(&dec_g, &State::vertex(ab.0, n)?)?;
                idx.extend(support_indices(&dec_g, &State::vertex(ab.1, n)?)?);
                idx.sort_unstable();
                idx.dedup();
                let entries = idx
                    .iter()
                    .rev()
                    .map(|&r| {
                        let value = dec_g.pairs()[r].value.clone();
                        Entry { d: value.to_surd().expect("exact"), value, class: Class::Free }
                    })
                    .collect();
                let mut v = CompositeVerdict::new(id, &product, false, from, to);
                v.set(&hyp, Condition::pass(detail));
                (v, tau, lambda, entries, false)
            }
        };
        let mut template = template;
        template.tau = Some(tau.clone());
        template.lambda = Some(lambda.clone());
        template.p = lambda.order().and_then(|p| p.to_u64());
        Ok(Setup { template, tau, lambda, entries, r1r2: r1 * r2, reference_in_minus, ready })
    }

    fn evaluate(&self, s: &Setup, q: &BigRational) -> CompositeVerdict {
        let id = self.theorem.id();
        let mut v = s.template.clone();
        let t = s.tau.scale(q);
        v.q = Some(q.clone());
        v.t = Some(t.clone());
        if !s.ready {
            v.finish();
            return v;
        }
        let label = match self.theorem {
            TensorTheorem::Pst { .. } => "(theta - r1)",
            _ => "mu",
        };
        let ks: Vec<Option<BigInt>> = s.entries.iter().map(|e| e.d.scale(q).as_integer()).collect();
        let bad = s.entries.iter().zip(&ks).find(|(_, k)| !k.as_ref().is_some_and(Integer::is_odd));
        v.set(
            format!("{id}(a)"),
            match bad {
                None => Condition::pass(format!(
                    "{label} t / tau = {} all odd",
                    ks.iter().map(|k| k.as_ref().unwrap().to_string()).collect::<Vec<_>>().join(", ")
                )),
                Some((e, _)) => Condition::fail(format!(
                    "{label} t / tau = {} for eigenvalue {} is not an odd integer",
                    e.d.scale(q),
                    e.value
                )),
            },
        );
        if ks.iter().any(Option::is_none) {
            v.set(format!("{id}(b)"), Condition::fail("congruences need integer multiples of tau"));
            v.finish();
            return v;
        }
        let ks: Vec<BigInt> = ks.into_iter().map(Option::unwrap).collect();
        let k0 = ks[0].clone();
        let power = |m: &BigInt| m.to_i64().map(|m| s.lambda.pow(m));
        let root = match v.p {
            Some(p) => format!("lambda = {} is a primitive root of unity of order {p}", s.lambda),
            None => format!("lambda = {} is not a root of unity", s.lambda),
        };
        let minus_one = -&Phase::one();
        match self.theorem {
            TensorTheorem::Swap { .. } => {
                let bad = s.entries.iter().zip(&ks).find(|(_, k)| power(&(&k0 - *k)) != Some(Phase::one()));
                v.set(
                    format!("{id}(b)"),
                    match bad {
                        None => Condition::pass(format!("{root}; all (mu_r - mu_s) t / tau ≡ 0")),
                        Some((e, k)) => Condition::fail(format!(
                            "{root}; (mu_0 - mu_r) t / tau = {} for mu_r = {} is not ≡ 0 mod p",
                            &k0 - k,
                            e.value
                        )),
                    },
                );
            }
            _ => {
                let has_opposite = s.entries.iter().any(|e| e.class == Class::Opposite);
                let p_ok = match v.p {
                    Some(p) => p % 2 == 0 || !has_opposite,
                    None => s.entries.len() == 1,
                };
                v.set(
                    format!("{id}(b)"),
                    if p_ok {
                        Condition::pass(root)
                    } else {
                        Condition::fail(format!("{root}, but the sign classes need an even order"))
                    },
                );
                for (class, sub, target, residue) in
                    [(Class::Same, "(b)(i)", Phase::one(), "0"), (Class::Opposite, "(b)(ii)", minus_one.clone(), "p/2")]
                {
                    let members: Vec<(&Entry, &BigInt)> = s.entries.iter().zip(&ks).filter(|(e, _)| e.class == class).collect();
                    if members.is_empty() {
                        continue;
                    }
                    let bad = members.iter().find(|(_, k)| power(&(&k0 - *k)).as_ref() != Some(&target));
                    v.set(
                        format!("{id}{sub}"),
                        match bad {
                            None => Condition::pass(format!("all differences ≡ {residue} mod p")),
                            Some((e, k)) => Condition::fail(format!(
                                "(theta_0 - theta_r) t / tau = {} for eigenvalue {} is not ≡ {residue} mod p",
                                &k0 - *k,
                                e.value
                            )),
                        },
                    );
                }
            }
        }
        v.finish();
        if v.holds {
            let outer = Phase::evolution(&t, &Surd::from_int(s.r1r2));
            let k0 = k0.to_i64().expect("small multiple");
            let mut chi = match self.theorem {
                TensorTheorem::Pst { .. } => &outer * &s.lambda.pow(k0),
                TensorTheorem::PairPst { .. } => &outer * &s.lambda.pow(-k0),
                TensorTheorem::Swap { .. } => -&(&outer * &s.lambda.pow(-k0)),
            };
            if s.reference_in_minus {
                chi = -&chi;
            }
            v.predicted_phase = Some(chi);
        }
        v
    }

    /// Verdict at time `t`, which must be a positive rational multiple of
    /// the base time `τ` on `H`.
    pub fn check(&self, t: &ExactTime) -> Result<CompositeVerdict> {
        let s = self.setup()?;
        let q = t
            .ratio_to(&s.tau)
            .ok_or_else(|| Error::InvalidTime(format!("{t} is not a rational multiple of tau = {}", s.tau)))?;
        if !q.is_positive() {
            return Err(Error::InvalidTime(format!("{t} is not positive")));
        }
        Ok(self.evaluate(&s, &q))
    }

    /// Smallest `t = q τ` (`q` rational) at which the theorem's conditions
    /// hold, or a verdict carrying the reason none exists.
    pub fn solve(&self) -> Result<CompositeVerdict> {
        let s = self.setup()?;
        let none = |reason: String| {
            let mut v = s.template.clone();
            v.finish();
            v.holds = false;
            v.outcome = if v.equivalence { super::Outcome::DoesNotHold } else { super::Outcome::FailsConditions };
            v.nonexistence = Some(reason);
            v
        };
        if !s.ready {
            return Ok(none("theorem preconditions fail".into()));
        }
        let mut ds = Vec::with_capacity(s.entries.len());
        for e in &s.entries {
            match e.d.as_integer() {
                Some(d) if d.is_zero() => {
                    return Ok(none(format!("multiplier of eigenvalue {} is 0, so (a) never holds", e.value)))
                }
                Some(d) => ds.push(d),
                None => {
                    return Ok(none(format!(
                        "multiplier {} of eigenvalue {} is irrational, so no rational multiple of tau satisfies (a)",
                        e.d, e.value
                    )))
                }
            }
        }
        let nu = ds[0].trailing_zeros().unwrap_or(0);
        if ds.iter().any(|d| d.trailing_zeros().unwrap_or(0) != nu) {
            return Ok(none("multipliers have different 2-adic valuations, so they cannot all be odd multiples".into()));
        }
        let odd: Vec<BigInt> = ds.iter().map(|d| d.abs() >> nu).collect();
        let gcd = odd.iter().fold(BigInt::zero(), |g, d| g.gcd(d));
        let period = BigInt::from(s.template.p.unwrap_or(1));
        let two_nu = BigInt::one() << nu;
        let mut candidates: Vec<BigRational> = Vec::new();
        let mut u = BigInt::one();
        while u <= gcd {
            if (&gcd % &u).is_zero() {
                let bound = BigInt::from(2) * &period * &u;
                let mut c = BigInt::one();
                while c <= bound {
                    if c.gcd(&u).is_one() {
                        candidates.push(BigRational::new(c.clone(), &u * &two_nu));
                    }
                    c += 2;
                }
            }
            u += 2;
        }
        candidates.sort();
        for q in &candidates {
            let v = self.evaluate(&s, q);
            if v.holds {
                return Ok(v);
            }
        }
        Ok(none("no odd residue c mod 2pu satisfies the congruence conditions".into()))
    }
}

/// `G × H` with `H` admitting PST between `w` and `z`.
pub fn check_tensor_with_pst(
    g: &Graph,
    h: &Graph,
    ab: (usize, usize),
    cd: (usize, usize),
    wz: (usize, usize),
    t: &ExactTime,
) -> Result<CompositeVerdict> {
    TensorProblem::new(g.clone(), h.clone(), TensorTheorem::Pst { ab, cd, wz }).check(t)
}

/// `G × H` with `H` admitting adjacency pair transfer.
pub fn check_tensor_with_pairpst(
    g: &Graph,
    h: &Graph,
    wz: (usize, usize),
    ab: (usize, usize),
    cd: (usize, usize),
    t: &ExactTime,
) -> Result<CompositeVerdict> {
    TensorProblem::new(g.clone(), h.clone(), TensorTheorem::PairPst { wz, ab, cd }).check(t)
}

/// Swapped pair states `e_(a,w) - e_(b,z) → e_(b,w) - e_(a,z)`. Sufficient
/// conditions only.
pub fn check_tensor_swap(g: &Graph, h: &Graph, ab: (usize, usize), wz: (usize, usize), t: &ExactTime) -> Result<CompositeVerdict> {
    TensorProblem::new(g.clone(), h.clone(), TensorTheorem::Swap { ab, wz }).check(t)
}

pub fn solve_tensor_time(problem: &TensorProblem) -> Result<CompositeVerdict> {
    problem.solve()
}
