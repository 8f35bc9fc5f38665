//! Exact real numbers of the form `c_1 + c_2 √m_2 + ... ` with rational
//! coefficients and square-free radicands.
//!
//! This is the scalar type for exact eigenprojector entries, eigenvalue
//! differences, times (in units of π) and phase angles. Products of two
//! radicals are reduced back to square-free form, so the set is closed under
//! `+`, `-` and `*`. Division is supported when the divisor lives in a single
//! quadratic field.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::error::{Error, Result};

/// Splits `d > 0` as `k² · Δ` with `Δ` square-free. Returns `(Δ, k)`.
pub fn squarefree_kernel(d: i128) -> Result<(u64, u64)> {
    if d <= 0 {
        return Err(Error::NonPositive(d.to_string()));
    }
    let mut rest = d as u128;
    let mut kernel: u128 = 1;
    let mut k: u128 = 1;
    let mut p: u128 = 2;
    while p * p <= rest {
        let mut e = 0u32;
        while rest % p == 0 {
            rest /= p;
            e += 1;
        }
        k *= p.pow(e / 2);
        if e % 2 == 1 {
            kernel *= p;
        }
        p += if p == 2 { 1 } else { 2 };
    }
    kernel *= rest;
    let kernel = u64::try_from(kernel).map_err(|_| Error::InvalidParams(format!("{d} too large")))?;
    let k = u64::try_from(k).map_err(|_| Error::InvalidParams(format!("{d} too large")))?;
    Ok((kernel, k))
}

/// `Σ coeff · √radicand`, terms sorted by radicand, no zero coefficients.
#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Surd {
    terms: Vec<(u64, BigRational)>,
}

impl Surd {
    pub fn zero() -> Self {
        Self { terms: Vec::new() }
    }

    pub fn one() -> Self {
        Self::from_int(1)
    }

    pub fn from_int(x: i64) -> Self {
        Self::from_rational(BigRational::from_integer(BigInt::from(x)))
    }

    pub fn from_bigint(x: BigInt) -> Self {
        Self::from_rational(BigRational::from_integer(x))
    }

    pub fn from_rational(x: BigRational) -> Self {
        Self::term(1, x)
    }

    pub fn ratio(num: i64, den: i64) -> Self {
        Self::from_rational(BigRational::new(num.into(), den.into()))
    }

    /// `c · √m` for square-free `m ≥ 1`.
    pub fn term(m: u64, c: BigRational) -> Self {
        debug_assert!(m >= 1);
        if c.is_zero() {
            Self::zero()
        } else {
            Self { terms: vec![(m, c)] }
        }
    }

    /// `√d` for any positive integer `d`.
    pub fn sqrt(d: u64) -> Result<Self> {
        let (m, k) = squarefree_kernel(d as i128)?;
        Ok(Self::term(m, BigRational::from_integer(BigInt::from(k))))
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> &[(u64, BigRational)] {
        &self.terms
    }

    /// The value, if it is rational.
    pub fn as_rational(&self) -> Option<BigRational> {
        match self.terms.as_slice() {
            [] => Some(BigRational::zero()),
            [(1, c)] => Some(c.clone()),
            _ => None,
        }
    }

    /// The value, if it is an integer.
    pub fn as_integer(&self) -> Option<BigInt> {
        self.as_rational().filter(|r| r.is_integer()).map(|r| r.to_integer())
    }

    /// Coefficient of `√m` (zero when absent).
    pub fn coeff(&self, m: u64) -> BigRational {
        self.terms
            .iter()
            .find(|(r, _)| *r == m)
            .map(|(_, c)| c.clone())
            .unwrap_or_else(BigRational::zero)
    }

    /// Irrational radicands present.
    pub fn radicands(&self) -> impl Iterator<Item = u64> + '_ {
        self.terms.iter().map(|(m, _)| *m).filter(|&m| m != 1)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(m, c)| c.to_f64().unwrap_or(f64::NAN) * (*m as f64).sqrt())
            .sum()
    }

    pub fn scale(&self, k: &BigRational) -> Self {
        if k.is_zero() {
            return Self::zero();
        }
        Self { terms: self.terms.iter().map(|(m, c)| (*m, c * k)).collect() }
    }

    /// Conjugate in `ℚ(√Δ)`: flips the sign of the `√Δ` part.
    fn conjugate(&self) -> Self {
        Self {
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, if *m == 1 { c.clone() } else { -c }))
                .collect(),
        }
    }

    /// Multiplicative inverse. Only defined for elements of a single quadratic
    /// field `ℚ(√Δ)`; returns `None` for zero or for mixed radicands.
    pub fn inverse(&self) -> Option<Self> {
        if self.is_zero() || self.radicands().count() > 1 {
            return None;
        }
        let conj = self.conjugate();
        let norm = (self * &conj).as_rational()?;
        Some(conj.scale(&norm.recip()))
    }

    pub fn checked_div(&self, rhs: &Surd) -> Option<Self> {
        Some(self * &rhs.inverse()?)
    }

    /// Sign, computed in floating point; exact when the value is rational.
    pub fn signum(&self) -> i32 {
        if let Some(r) = self.as_rational() {
            return if r.is_zero() { 0 } else if r.is_positive() { 1 } else { -1 };
        }
        let v = self.to_f64();
        if v > 0.0 {
            1
        } else {
            -1
        }
    }

    fn add_term(terms: &mut Vec<(u64, BigRational)>, m: u64, c: BigRational) {
        match terms.binary_search_by_key(&m, |(r, _)| *r) {
            Ok(i) => {
                let sum = &terms[i].1 + c;
                if sum.is_zero() {
                    terms.remove(i);
                } else {
                    terms[i].1 = sum;
                }
            }
            Err(i) => {
                if !c.is_zero() {
                    terms.insert(i, (m, c));
                }
            }
        }
    }
}

/// `√a · √b = k √m` with `m` square-free.
fn radical_product(a: u64, b: u64) -> (u64, BigInt) {
    if a == 1 || b == 1 {
        return (a * b, BigInt::one());
    }
    let g = a.gcd(&b);
    // √a √b = g √((a/g)(b/g)); a/g, b/g coprime and square-free
    ((a / g) * (b / g), BigInt::from(g))
}

impl Add<&Surd> for &Surd {
    type Output = Surd;
    fn add(self, rhs: &Surd) -> Surd {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Surd::add_term(&mut terms, *m, c.clone());
        }
        Surd { terms }
    }
}

impl Sub<&Surd> for &Surd {
    type Output = Surd;
    fn sub(self, rhs: &Surd) -> Surd {
        let mut terms = self.terms.clone();
        for (m, c) in &rhs.terms {
            Surd::add_term(&mut terms, *m, -c.clone());
        }
        Surd { terms }
    }
}

impl Mul<&Surd> for &Surd {
    type Output = Surd;
    fn mul(self, rhs: &Surd) -> Surd {
        let mut terms = Vec::new();
        for (m1, c1) in &self.terms {
            for (m2, c2) in &rhs.terms {
                let (m, k) = radical_product(*m1, *m2);
                Surd::add_term(&mut terms, m, c1 * c2 * BigRational::from_integer(k));
            }
        }
        Surd { terms }
    }
}

impl Neg for &Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        Surd { terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect() }
    }
}

macro_rules! forward_owned {
    ($tr:ident, $f:ident) => {
        impl $tr<Surd> for Surd {
            type Output = Surd;
            fn $f(self, rhs: Surd) -> Surd {
                (&self).$f(&rhs)
            }
        }
        impl $tr<&Surd> for Surd {
            type Output = Surd;
            fn $f(self, rhs: &Surd) -> Surd {
                (&self).$f(rhs)
            }
        }
    };
}
forward_owned!(Add, add);
forward_owned!(Sub, sub);
forward_owned!(Mul, mul);

impl Neg for Surd {
    type Output = Surd;
    fn neg(self) -> Surd {
        -&self
    }
}

fn fmt_rational(r: &BigRational) -> String {
    if r.is_integer() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl fmt::Display for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let neg = c.is_negative();
            let mag = c.abs();
            if i == 0 {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            if *m == 1 {
                f.write_str(&fmt_rational(&mag))?;
            } else if mag.is_one() {
                write!(f, "√{m}")?;
            } else {
                write!(f, "{}√{m}", fmt_rational(&mag))?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Surd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Surd({self})")
    }
}

impl From<i64> for Surd {
    fn from(x: i64) -> Self {
        Surd::from_int(x)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn kernel_examples() {
        assert_eq!(squarefree_kernel(8).unwrap(), (2, 2));
        assert_eq!(squarefree_kernel(5).unwrap(), (5, 1));
        assert_eq!(squarefree_kernel(36).unwrap(), (1, 6));
        assert_eq!(squarefree_kernel(1).unwrap(), (1, 1));
        assert_eq!(squarefree_kernel(720).unwrap(), (5, 12));
        assert!(matches!(squarefree_kernel(0), Err(Error::NonPositive(_))));
        assert!(matches!(squarefree_kernel(-4), Err(Error::NonPositive(_))));
    }

    #[test]
    fn radicals_reduce() {
        let r2 = Surd::sqrt(2).unwrap();
        let r6 = Surd::sqrt(6).unwrap();
        assert_eq!(&r2 * &r2, Surd::from_int(2));
        assert_eq!(&r2 * &r6, Surd::sqrt(12).unwrap());
        assert_eq!(Surd::sqrt(12).unwrap().coeff(3), BigRational::from_integer(2.into()));
    }

    #[test]
    fn inverse_in_quadratic_field() {
        // (1 + √5)/2 is the golden ratio φ, and 1/φ = φ - 1
        let phi = &Surd::ratio(1, 2) + &Surd::term(5, BigRational::new(1.into(), 2.into()));
        let inv = phi.inverse().unwrap();
        assert_eq!(inv, &phi - &Surd::one());
        let mixed = &Surd::sqrt(2).unwrap() + &Surd::sqrt(3).unwrap();
        assert!(mixed.inverse().is_none());
    }

    #[test]
    fn display_forms() {
        let x = &Surd::ratio(-3, 2) + &Surd::sqrt(5).unwrap();
        assert_eq!(x.to_string(), "-3/2 + √5");
        assert_eq!(Surd::zero().to_string(), "0");
    }

    fn small_surd() -> impl Strategy<Value = Surd> {
        proptest::collection::vec((prop::sample::select(vec![1u64, 2, 3, 5, 6]), -6i64..6, 1i64..4), 0..4)
            .prop_map(|ts| {
                ts.into_iter().fold(Surd::zero(), |acc, (m, p, q)| {
                    &acc + &Surd::term(m, BigRational::new(p.into(), q.into()))
                })
            })
    }

    proptest! {
        #[test]
        fn ring_laws_match_floats(a in small_surd(), b in small_surd(), c in small_surd()) {
            let lhs = &(&a + &b) * &c;
            let rhs = &(&a * &c) + &(&b * &c);
            prop_assert_eq!(&lhs, &rhs);
            prop_assert!((lhs.to_f64() - (a.to_f64() + b.to_f64()) * c.to_f64()).abs() < 1e-9);
            prop_assert!((&a - &a).is_zero());
        }

        #[test]
        fn kernel_reconstructs(d in 1i128..100_000) {
            let (m, k) = squarefree_kernel(d).unwrap();
            prop_assert_eq!((k as i128) * (k as i128) * (m as i128), d);
            let mut p = 2u64;
            while p * p <= m {
                prop_assert!(m % (p * p) != 0);
                p += 1;
            }
        }
    }
}
