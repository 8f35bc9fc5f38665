//! Pair state transfer in double covers `G ⋉ H` of regular graphs.

use nalgebra::DMatrix;
use serde::Serialize;

use super::{CompositeVerdict, Condition};
use crate::certify::{phase_at, transfer_phase_at};
use crate::error::{Error, Result};
use crate::graph::{cover_index, Graph, PairState, State};
use crate::phase::{ExactTime, Phase};
use crate::spectral::{eigen_decompose, SpectralDecomposition};
use crate::surd::Surd;

/// Which pair states of the cover are tested, with pairs in the common vertex set.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase", tag = "mode")]
pub enum CoverMode {
    /// `e_0 ⊗ (e_a - e_b) → e_1 ⊗ (e_a - e_b)`
    A { ab: (usize, usize) },
    /// `e_i ⊗ (e_a - e_b) → e_i ⊗ (e_c - e_d)`
    B { ab: (usize, usize), cd: (usize, usize), side: usize },
    /// `e_0 ⊗ (e_a - e_b) → e_1 ⊗ (e_c - e_d)`
    C { ab: (usize, usize), cd: (usize, usize) },
}

fn cover_pair(side: usize, p: PairState, n: usize) -> Result<State> {
    State::pair(cover_index(side, p.a, n), cover_index(side, p.b, n), 2 * n)
}

fn regular(g: &Graph, h: &Graph) -> Result<(i64, i64)> {
    if g.n() != h.n() {
        return Err(Error::SizeMismatch { left: g.n(), right: h.n() });
    }
    Ok((g.regularity().ok_or(Error::NotRegular("G"))?, h.regularity().ok_or(Error::NotRegular("H"))?))
}

fn check_time(tau: &ExactTime) -> Result<()> {
    if !tau.is_positive() {
        return Err(Error::InvalidTime(format!("{tau} is not positive")));
    }
    Ok(())
}

fn exact(m: &DMatrix<i64>, source: String) -> Result<SpectralDecomposition> {
    let dec = eigen_decompose(m, source)?;
    if !dec.is_exact() {
        return Err(Error::NotExact);
    }
    Ok(dec)
}

fn show(p: &Option<Phase>) -> String {
    p.as_ref().map_or_else(|| "none".to_string(), ToString::to_string)
}

/// `exp(-iτ(r1 + r2)) · conj(χ₊)`, the Laplacian phase on the cover.
fn cover_phase(tau: &ExactTime, r: i64, chi_plus: &Phase) -> Phase {
    &Phase::evolution(tau, &Surd::from_int(r)) * &chi_plus.conj()
}

/// Decides Laplacian pair state transfer in `G ⋉ H` at time `τ` through the
/// walks of `A_G + A_H` and `A_G - A_H`.
pub fn check_double_cover(g: &Graph, h: &Graph, mode: CoverMode, tau: &ExactTime) -> Result<CompositeVerdict> {
    let (r1, r2) = regular(g, h)?;
    check_time(tau)?;
    let n = g.n();
    let plus_m = g.adjacency() + h.adjacency();
    let minus_m = g.adjacency() - h.adjacency();
    let plus = exact(&plus_m, format!("A({}) + A({})", g.name(), h.name()))?;
    let minus = exact(&minus_m, format!("A({}) - A({})", g.name(), h.name()))?;
    let product = g.double_cover(h, Default::default())?;
    let (id, from, to, p1, p2) = match mode {
        CoverMode::A { ab } => {
            let p = PairState::new(ab.0, ab.1, n)?;
            ("cover(a)", cover_pair(0, p, n)?, cover_pair(1, p, n)?, p, p)
        }
        CoverMode::B { ab, cd, side } => {
            if side > 1 {
                return Err(Error::InvalidParams(format!("cover side must be 0 or 1, got {side}")));
            }
            let (p1, p2) = (PairState::new(ab.0, ab.1, n)?, PairState::new(cd.0, cd.1, n)?);
            if p1.same_pair(p2) {
                return Err(Error::SameState);
            }
            ("cover(b)", cover_pair(side, p1, n)?, cover_pair(side, p2, n)?, p1, p2)
        }
        CoverMode::C { ab, cd } => {
            let (p1, p2) = (PairState::new(ab.0, ab.1, n)?, PairState::new(cd.0, cd.1, n)?);
            ("cover(c)", cover_pair(0, p1, n)?, cover_pair(1, p2, n)?, p1, p2)
        }
    };
    let mut v = CompositeVerdict::new(id, &product, true, from, to);
    v.t = Some(tau.clone());
    v.tau = Some(tau.clone());
    let (s1, s2) = (State::Pair(p1), State::Pair(p2));
    let (chi_plus, chi_minus) = match mode {
        CoverMode::A { .. } => (phase_at(&plus, &s1, tau)?, phase_at(&minus, &s1, tau)?),
        _ => (transfer_phase_at(&plus, &s1, &s2, tau)?, transfer_phase_at(&minus, &s1, &s2, tau)?),
    };
    let what = if matches!(mode, CoverMode::A { .. }) {
        format!("{s1} periodic")
    } else {
        format!("pair transfer {s1} → {s2}")
    };
    for (sign, chi) in [("+", &chi_plus), ("-", &chi_minus)] {
        v.set(
            format!("{id}{sign}"),
            match chi {
                Some(c) => Condition::pass(format!("A_G {sign} A_H: {what} at {tau} with phase {c}")),
                None => Condition::fail(format!("A_G {sign} A_H: no {what} at {tau}")),
            },
        );
    }
    if let (Some(cp), Some(cm)) = (&chi_plus, &chi_minus) {
        let want_equal = matches!(mode, CoverMode::B { .. });
        let ok = if want_equal { cp == cm } else { cp == &-cm };
        let relation = if want_equal { "equal" } else { "opposite" };
        v.set(
            format!("{id}(phase)"),
            if ok {
                Condition::pass(format!("phases {cp} and {cm} are {relation}"))
            } else {
                Condition::fail(format!("phases {cp} and {cm} are not {relation}"))
            },
        );
    } else {
        v.set(
            format!("{id}(phase)"),
            Condition::fail(format!("phases {} and {} not both defined", show(&chi_plus), show(&chi_minus))),
        );
    }
    v.finish();
    if v.holds {
        v.predicted_phase = chi_plus.as_ref().map(|c| cover_phase(tau, r1 + r2, c));
    }
    Ok(v)
}

/// Sufficient condition for `e_0 ⊗ (e_a - e_b) → e_1 ⊗ (e_a - e_b)` when
/// `A_G` and `A_H` commute: the pair is periodic under `A_G` at `τ` and
/// under `A_H` with phase `±i`.
pub fn check_cor_double_cover(g: &Graph, h: &Graph, ab: (usize, usize), tau: &ExactTime) -> Result<CompositeVerdict> {
    let (r1, r2) = regular(g, h)?;
    check_time(tau)?;
    let (ag, ah) = (g.adjacency(), h.adjacency());
    if ag * ah != ah * ag {
        return Err(Error::NonCommuting);
    }
    let n = g.n();
    let p = PairState::new(ab.0, ab.1, n)?;
    let s = State::Pair(p);
    let dec_g = exact(ag, format!("A({})", g.name()))?;
    let dec_h = exact(ah, format!("A({})", h.name()))?;
    let product = g.double_cover(h, Default::default())?;
    let mut v = CompositeVerdict::new("cover-cor", &product, false, cover_pair(0, p, n)?, cover_pair(1, p, n)?);
    v.t = Some(tau.clone());
    v.tau = Some(tau.clone());
    let chi = phase_at(&dec_g, &s, tau)?;
    let k = phase_at(&dec_h, &s, tau)?;
    v.set(
        "cover-cor(G)",
        match &chi {
            Some(c) => Condition::pass(format!("{s} periodic under A_G at {tau} with phase {c}")),
            None => Condition::fail(format!("{s} not periodic under A_G at {tau}")),
        },
    );
    let i = Phase::from_angle(Surd::ratio(1, 2));
    v.set(
        "cover-cor(H)",
        match &k {
            Some(k) if *k == i || *k == -&i => Condition::pass(format!("{s} periodic under A_H at {tau} with phase {k}")),
            Some(k) => Condition::fail(format!("{s} periodic under A_H at {tau} with phase {k}, not ±i")),
            None => Condition::fail(format!("{s} not periodic under A_H at {tau}")),
        },
    );
    v.finish();
    if v.holds {
        let (chi, k) = (chi.unwrap(), k.unwrap());
        v.predicted_phase = Some(cover_phase(tau, r1 + r2, &(&chi * &k)));
    }
    Ok(v)
}
