//! Splitting an integer characteristic polynomial into linear and
//! irreducible quadratic factors.
//!
//! Integer roots are found by exhaustive search inside the Gershgorin bound.
//! Quadratic factors `x² - s x + p` are proposed from numerical eigenvalues
//! and accepted only after exact polynomial division.

use num_bigint::BigInt;
use num_traits::{ToPrimitive, Zero};

use super::charpoly::{div_exact, eval};
use crate::surd::squarefree_kernel;

#[derive(Debug, Clone, PartialEq, Eq)]
pub(crate) enum Factor {
    /// `x - root`
    Linear(BigInt),
    /// `x² - s x + p` with discriminant `k² Δ`, `Δ > 1` square-free.
    Quadratic { s: BigInt, p: BigInt, k: BigInt, delta: u64 },
}

impl Factor {
    pub fn coefficients(&self) -> Vec<BigInt> {
        match self {
            Factor::Linear(r) => vec![-r.clone(), BigInt::from(1)],
            Factor::Quadratic { s, p, .. } => vec![p.clone(), -s.clone(), BigInt::from(1)],
        }
    }
}

#[derive(Debug, Clone)]
pub(crate) struct Factorization {
    pub factors: Vec<(Factor, usize)>,
    /// Unfactored part; degree 0 when the split is complete.
    pub remainder: Vec<BigInt>,
}

impl Factorization {
    pub fn is_complete(&self) -> bool {
        self.remainder.len() == 1
    }
}

/// Splits `poly` (monic, ascending coefficients) using `bound` on the
/// absolute value of every root and approximate roots `approx`.
pub(crate) fn factor(poly: &[BigInt], bound: i64, approx: &[f64]) -> Factorization {
    let mut rest = poly.to_vec();
    let mut factors = Vec::new();
    let mut leftover: Vec<f64> = approx.to_vec();

    for r in -bound..=bound {
        let root = BigInt::from(r);
        let c0 = &rest[0];
        if r != 0 && !c0.is_zero() && !(c0 % &root).is_zero() {
            continue;
        }
        if !eval(&rest, &root).is_zero() {
            continue;
        }
        let lin = Factor::Linear(root);
        let mut mult = 0;
        while let Some(q) = div_exact(&rest, &lin.coefficients()) {
            rest = q;
            mult += 1;
            remove_nearest(&mut leftover, r as f64);
        }
        factors.push((lin, mult));
        if rest.len() == 1 {
            break;
        }
    }

    leftover.sort_by(f64::total_cmp);
    let mut distinct: Vec<f64> = Vec::new();
    for x in leftover {
        if distinct.last().is_none_or(|&l| (x - l).abs() > 1e-6) {
            distinct.push(x);
        }
    }
    let mut used = vec![false; distinct.len()];
    for i in 0..distinct.len() {
        if rest.len() < 3 {
            break;
        }
        if used[i] {
            continue;
        }
        for j in (i + 1)..distinct.len() {
            if used[j] {
                continue;
            }
            let Some(fac) = quadratic_candidate(distinct[i], distinct[j]) else {
                continue;
            };
            let mut mult = 0;
            while let Some(q) = div_exact(&rest, &fac.coefficients()) {
                rest = q;
                mult += 1;
            }
            if mult > 0 {
                factors.push((fac, mult));
                used[i] = true;
                used[j] = true;
                break;
            }
        }
    }
    Factorization { factors, remainder: rest }
}

fn remove_nearest(xs: &mut Vec<f64>, target: f64) {
    if let Some((idx, _)) = xs
        .iter()
        .enumerate()
        .min_by(|a, b| (a.1 - target).abs().total_cmp(&(b.1 - target).abs()))
    {
        xs.swap_remove(idx);
    }
}

fn quadratic_candidate(x: f64, y: f64) -> Option<Factor> {
    let (sum, prod) = (x + y, x * y);
    let s = sum.round();
    let p = prod.round();
    let scale = 1.0 + sum.abs().max(prod.abs());
    if (sum - s).abs() > 1e-6 * scale || (prod - p).abs() > 1e-6 * scale {
        return None;
    }
    let (s, p) = (s.to_i64()?, p.to_i64()?);
    let disc = (s as i128) * (s as i128) - 4 * (p as i128);
    if disc <= 0 {
        return None;
    }
    let (delta, k) = squarefree_kernel(disc).ok()?;
    if delta == 1 {
        return None;
    }
    Some(Factor::Quadratic { s: s.into(), p: p.into(), k: k.into(), delta })
}

/// Largest absolute row sum, which bounds every eigenvalue.
pub(crate) fn gershgorin_bound(m: &nalgebra::DMatrix<i64>) -> i64 {
    m.row_iter().map(|r| r.iter().map(|x| x.abs()).sum::<i64>()).max().unwrap_or(0)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn ints(xs: &[i64]) -> Vec<BigInt> {
        xs.iter().map(|&x| BigInt::from(x)).collect()
    }

    #[test]
    fn integer_roots_with_multiplicity() {
        // x (x-3)^2
        let f = factor(&ints(&[0, 9, -6, 1]), 4, &[0.0, 3.0, 3.0]);
        assert!(f.is_complete());
        assert_eq!(f.factors, vec![(Factor::Linear(0.into()), 1), (Factor::Linear(3.into()), 2)]);
    }

    #[test]
    fn golden_quadratic() {
        // (x - 2)(x^2 - x - 1)
        let poly = ints(&[2, 1, -3, 1]);
        let phi = (1.0 + 5f64.sqrt()) / 2.0;
        let f = factor(&poly, 3, &[2.0, phi, 1.0 - phi]);
        assert!(f.is_complete());
        assert_eq!(f.factors[1].0, Factor::Quadratic { s: 1.into(), p: (-1).into(), k: 1.into(), delta: 5 });
    }

    #[test]
    fn cubic_is_left_over() {
        // x^3 - 3x + 1 is irreducible with three real roots
        let roots = [1.532_088_886_237_956, 0.347_296_355_333_860_7, -1.879_385_241_571_817];
        let f = factor(&ints(&[1, -3, 0, 1]), 3, &roots);
        assert!(!f.is_complete());
        assert_eq!(f.remainder.len(), 4);
    }
}
