//! Exact times and unimodular phases, both stored as multiples of π.

use std::fmt;
use std::ops::{Mul, Neg};

use num_bigint::BigInt;
use num_complex::Complex64;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::surd::Surd;

/// A real time `t = π · k` with `k` an exact surd.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ExactTime {
    over_pi: Surd,
}

impl ExactTime {
    pub fn zero() -> Self {
        Self { over_pi: Surd::zero() }
    }

    /// `π · k`
    pub fn pi_times(k: Surd) -> Self {
        Self { over_pi: k }
    }

    /// `π · num / den`
    pub fn pi_ratio(num: i64, den: i64) -> Self {
        Self::pi_times(Surd::ratio(num, den))
    }

    /// `π / (g √Δ)`
    pub fn pi_over(g: &BigInt, delta: u64) -> Self {
        let c = BigRational::new(BigInt::one(), g * BigInt::from(delta));
        Self::pi_times(Surd::term(delta, c))
    }

    pub fn over_pi(&self) -> &Surd {
        &self.over_pi
    }

    pub fn to_f64(&self) -> f64 {
        self.over_pi.to_f64() * std::f64::consts::PI
    }

    pub fn is_positive(&self) -> bool {
        self.over_pi.signum() > 0
    }

    pub fn scale(&self, q: &BigRational) -> Self {
        Self::pi_times(self.over_pi.scale(q))
    }

    /// `self / base` when the quotient is rational.
    pub fn ratio_to(&self, base: &ExactTime) -> Option<BigRational> {
        self.over_pi.checked_div(&base.over_pi)?.as_rational()
    }

    /// Parses `pi`, `pi/2`, `3pi/4`, `1/2pi`, `3/4*pi`, `0` and plain
    /// rationals followed by `pi`.
    pub fn parse(token: &str) -> Result<Self> {
        let bad = || Error::InvalidTime(format!("cannot parse `{token}` as a rational multiple of pi"));
        let s: String = token.chars().filter(|c| !c.is_whitespace()).collect();
        let s = s.replace('π', "pi");
        if s == "0" {
            return Ok(Self::zero());
        }
        let (before, after) = s.split_once("pi").ok_or_else(bad)?;
        let before = before.trim_end_matches('*');
        let mut q = if before.is_empty() {
            BigRational::one()
        } else if before == "-" {
            -BigRational::one()
        } else {
            parse_rational(before).ok_or_else(bad)?
        };
        if !after.is_empty() {
            let den = after.strip_prefix('/').ok_or_else(bad)?;
            let den: BigInt = den.parse().map_err(|_| bad())?;
            if den.is_zero() {
                return Err(bad());
            }
            q /= BigRational::from_integer(den);
        }
        Ok(Self::pi_times(Surd::from_rational(q)))
    }
}

fn parse_rational(s: &str) -> Option<BigRational> {
    match s.split_once('/') {
        Some((n, d)) => {
            let d: BigInt = d.parse().ok()?;
            let n: BigInt = n.parse().ok()?;
            (!d.is_zero()).then(|| BigRational::new(n, d))
        }
        None => Some(BigRational::from_integer(s.parse().ok()?)),
    }
}

impl fmt::Display for ExactTime {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let k = &self.over_pi;
        if let Some(q) = k.as_rational() {
            if q.is_zero() {
                return f.write_str("0");
            }
            let sign = if q.is_negative() { "-" } else { "" };
            let (n, d) = (q.numer().abs(), q.denom().clone());
            let head = if n.is_one() { String::new() } else { format!("{n}*") };
            return if d.is_one() {
                write!(f, "{sign}{head}pi")
            } else {
                write!(f, "{sign}{head}pi/{d}")
            };
        }
        // c√m with c = 1/(g m) renders as pi/(g*sqrt(m))
        if let [(m, c)] = k.terms() {
            let inv = (c * BigRational::from_integer(BigInt::from(*m))).recip();
            if inv.is_integer() && inv.is_positive() {
                let g = inv.to_integer();
                return if g.is_one() {
                    write!(f, "pi/sqrt({m})")
                } else {
                    write!(f, "pi/({g}*sqrt({m}))")
                };
            }
        }
        write!(f, "pi*({k})")
    }
}

impl Serialize for ExactTime {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.serialize_str(&self.to_string())
    }
}

/// `exp(iπ·a)` with the rational part of `a` reduced into `(-1, 1]`.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Phase {
    angle: Surd,
}

fn reduce_mod_two(q: &BigRational) -> BigRational {
    let two = BigRational::from_integer(BigInt::from(2));
    let k = ((q - BigRational::one()) / &two).ceil();
    q - k * two
}

impl Phase {
    pub fn one() -> Self {
        Self { angle: Surd::zero() }
    }

    /// `exp(iπ·angle)`
    pub fn from_angle(angle: Surd) -> Self {
        let rational = angle.coeff(1);
        let reduced = reduce_mod_two(&rational);
        let angle = &angle + &Surd::from_rational(reduced - rational);
        Self { angle }
    }

    /// `exp(-i t λ)`
    pub fn evolution(t: &ExactTime, lambda: &Surd) -> Self {
        Self::from_angle(-(t.over_pi() * lambda))
    }

    /// The angle in units of π, rational part in `(-1, 1]`.
    pub fn angle(&self) -> &Surd {
        &self.angle
    }

    pub fn is_root_of_unity(&self) -> bool {
        self.angle.as_rational().is_some()
    }

    /// Order `p` of the phase as a root of unity.
    pub fn order(&self) -> Option<BigInt> {
        let q = self.angle.as_rational()?;
        let two_den = q.denom() * 2;
        Some(&two_den / q.numer().gcd(&two_den))
    }

    pub fn to_complex(&self) -> Complex64 {
        if let Some(q) = self.angle.as_rational() {
            let twice = &q * BigRational::from_integer(BigInt::from(2));
            if twice.is_integer() {
                // multiples of π/2 are rendered without rounding
                return match twice.to_integer().mod_floor(&BigInt::from(4)).to_u8() {
                    Some(0) => Complex64::new(1.0, 0.0),
                    Some(1) => Complex64::new(0.0, 1.0),
                    Some(2) => Complex64::new(-1.0, 0.0),
                    _ => Complex64::new(0.0, -1.0),
                };
            }
        }
        Complex64::from_polar(1.0, self.angle.to_f64() * std::f64::consts::PI)
    }

    pub fn pow(&self, k: i64) -> Self {
        Self::from_angle(self.angle.scale(&BigRational::from_integer(BigInt::from(k))))
    }

    pub fn conj(&self) -> Self {
        Self::from_angle(-self.angle.clone())
    }
}

impl Mul<&Phase> for &Phase {
    type Output = Phase;
    fn mul(self, rhs: &Phase) -> Phase {
        Phase::from_angle(&self.angle + &rhs.angle)
    }
}

impl Neg for &Phase {
    type Output = Phase;
    fn neg(self) -> Phase {
        Phase::from_angle(&self.angle + &Surd::one())
    }
}

impl fmt::Display for Phase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if let Some(q) = self.angle.as_rational() {
            let half = BigRational::new(BigInt::one(), BigInt::from(2));
            if q.is_zero() {
                return f.write_str("1");
            } else if q.is_one() {
                return f.write_str("-1");
            } else if q == half {
                return f.write_str("i");
            } else if q == -half {
                return f.write_str("-i");
            }
        }
        write!(f, "exp(i*pi*({}))", self.angle)
    }
}

impl Serialize for Phase {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        let z = self.to_complex();
        let mut st = serializer.serialize_struct("Phase", 3)?;
        st.serialize_field("exact", &self.to_string())?;
        st.serialize_field("float_re", &z.re)?;
        st.serialize_field("float_im", &z.im)?;
        st.end()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn parses_time_tokens() {
        for (tok, num, den) in [("pi", 1, 1), ("pi/2", 1, 2), ("1/2pi", 1, 2), ("3/4*pi", 3, 4), ("3pi/4", 3, 4)] {
            assert_eq!(ExactTime::parse(tok).unwrap(), ExactTime::pi_ratio(num, den), "{tok}");
        }
        assert_eq!(ExactTime::parse("0").unwrap(), ExactTime::zero());
        assert!(ExactTime::parse("1.5").is_err());
        assert!(ExactTime::parse("pi/0").is_err());
    }

    #[test]
    fn time_rendering() {
        assert_eq!(ExactTime::pi_ratio(1, 2).to_string(), "pi/2");
        assert_eq!(ExactTime::pi_ratio(3, 4).to_string(), "3*pi/4");
        assert_eq!(ExactTime::pi_ratio(2, 1).to_string(), "2*pi");
        assert_eq!(ExactTime::pi_over(&BigInt::from(2), 5).to_string(), "pi/(2*sqrt(5))");
        assert_eq!(ExactTime::pi_over(&BigInt::from(1), 2).to_string(), "pi/sqrt(2)");
        let t = ExactTime::pi_over(&BigInt::from(3), 5);
        assert!((t.to_f64() - std::f64::consts::PI / (3.0 * 5f64.sqrt())).abs() < 1e-15);
    }

    #[test]
    fn named_phases() {
        assert_eq!(Phase::from_angle(Surd::ratio(-1, 2)).to_string(), "-i");
        assert_eq!(Phase::from_angle(Surd::ratio(5, 2)).to_string(), "i");
        assert_eq!(Phase::from_angle(Surd::from_int(-3)).to_string(), "-1");
        assert_eq!(Phase::from_angle(Surd::from_int(4)).to_string(), "1");
        assert_eq!(Phase::from_angle(Surd::ratio(1, 3)).to_string(), "exp(i*pi*(1/3))");
    }

    #[test]
    fn root_of_unity_order() {
        let order = |n, d| Phase::from_angle(Surd::ratio(n, d)).order().unwrap();
        assert_eq!(order(-1, 2), 4.into());
        assert_eq!(order(1, 1), 2.into());
        assert_eq!(order(0, 1), 1.into());
        assert_eq!(order(2, 3), 3.into());
        assert_eq!(order(1, 3), 6.into());
        assert!(Phase::from_angle(Surd::sqrt(2).unwrap()).order().is_none());
    }

    #[test]
    fn evolution_phase_of_path() {
        // exp(-i (pi/2) 1) = -i
        let p = Phase::evolution(&ExactTime::pi_ratio(1, 2), &Surd::one());
        assert_eq!(p.to_string(), "-i");
        assert_eq!(p.to_complex(), Complex64::new(0.0, -1.0));
    }

    proptest! {
        #[test]
        fn phase_arithmetic_matches_complex(a in -40i64..40, b in 1i64..12, c in -40i64..40, d in 1i64..12) {
            let x = Phase::from_angle(Surd::ratio(a, b));
            let y = Phase::from_angle(Surd::ratio(c, d));
            let (zx, zy) = (x.to_complex(), y.to_complex());
            prop_assert!(((&x * &y).to_complex() - zx * zy).norm() < 1e-12);
            prop_assert!(((-&x).to_complex() + zx).norm() < 1e-12);
            let r = x.angle().as_rational().unwrap();
            prop_assert!(r > -BigRational::one() && r <= BigRational::one());
            if let Some(p) = x.order() {
                let p = p.to_i64().unwrap();
                prop_assert!((zx.powi(p as i32) - Complex64::new(1.0, 0.0)).norm() < 1e-9);
                prop_assert_eq!(x.pow(p), Phase::one());
            }
        }
    }
}
