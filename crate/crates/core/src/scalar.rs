//! Exact scalars for spectral parameters.
//!
//! A scalar is `k·τ + re + i·im` with `re, im` rational and `τ` a fixed real
//! number transcendental over ℚ. `k ≠ 0` marks the scalar as generic: it
//! satisfies no polynomial relation with rational coefficients, so it is
//! never zero and never an integer.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use thiserror::Error;

/// Exact rational numbers used throughout the crate.
pub type Rational = BigRational;

/// Builds a rational from a small integer.
pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Builds the rational `n/d`.
pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

/// Returns `x` as an `i64` if it is an integer in range.
pub fn rational_to_i64(x: &Rational) -> Option<i64> {
    if x.is_integer() {
        x.to_integer().to_i64()
    } else {
        None
    }
}

/// Smallest integer `≥ x`.
pub fn ceil_i64(x: &Rational) -> i64 {
    x.ceil()
        .to_integer()
        .to_i64()
        .expect("rational out of i64 range")
}

/// Largest integer `≤ x`.
pub fn floor_i64(x: &Rational) -> i64 {
    x.floor()
        .to_integer()
        .to_i64()
        .expect("rational out of i64 range")
}

/// Formats a rational as `n` or `n/d`.
pub fn fmt_rational(x: &Rational) -> String {
    if x.is_integer() {
        x.numer().to_string()
    } else {
        format!("{}/{}", x.numer(), x.denom())
    }
}

/// Error raised when a scalar literal cannot be parsed.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("invalid scalar literal `{0}`")]
pub struct ParseScalarError(pub String);

/// An exact complex scalar, optionally carrying a generic transcendental part.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExactScalar {
    re: Rational,
    im: Rational,
    tau: i64,
}

impl ExactScalar {
    /// The rational scalar `x`.
    pub fn rational(x: Rational) -> Self {
        ExactScalar {
            re: x,
            im: Rational::zero(),
            tau: 0,
        }
    }

    /// The integer scalar `n`.
    pub fn int(n: i64) -> Self {
        Self::rational(rat(n))
    }

    /// The complex scalar `re + i·im`.
    pub fn complex(re: Rational, im: Rational) -> Self {
        ExactScalar { re, im, tau: 0 }
    }

    /// The generic scalar `τ`.
    pub fn generic() -> Self {
        ExactScalar {
            re: Rational::zero(),
            im: Rational::zero(),
            tau: 1,
        }
    }

    /// Zero.
    pub fn zero() -> Self {
        Self::int(0)
    }

    /// Real rational part (the offset from the generic part when generic).
    pub fn re(&self) -> &Rational {
        &self.re
    }

    /// Imaginary part.
    pub fn im(&self) -> &Rational {
        &self.im
    }

    /// True when the scalar carries a transcendental part.
    pub fn is_generic(&self) -> bool {
        self.tau != 0
    }

    /// Exact zero test.
    pub fn is_zero(&self) -> bool {
        self.tau == 0 && self.re.is_zero() && self.im.is_zero()
    }

    /// True for real scalars. Generic scalars are real by construction.
    pub fn is_real(&self) -> bool {
        self.im.is_zero()
    }

    /// The rational value when the scalar is real and not generic.
    pub fn as_rational(&self) -> Option<&Rational> {
        if self.tau == 0 && self.im.is_zero() {
            Some(&self.re)
        } else {
            None
        }
    }

    /// The integer value when the scalar is a rational integer.
    pub fn as_integer(&self) -> Option<i64> {
        self.as_rational().and_then(rational_to_i64)
    }

    /// True when the scalar is an integer.
    pub fn is_integer(&self) -> bool {
        self.as_integer().is_some()
    }

    /// `self + n`.
    pub fn add_int(&self, n: i64) -> Self {
        self.add_rational(&rat(n))
    }

    /// `self + x`.
    pub fn add_rational(&self, x: &Rational) -> Self {
        ExactScalar {
            re: &self.re + x,
            im: self.im.clone(),
            tau: self.tau,
        }
    }

    /// `self + other`.
    pub fn add(&self, other: &ExactScalar) -> Self {
        ExactScalar {
            re: &self.re + &other.re,
            im: &self.im + &other.im,
            tau: self.tau + other.tau,
        }
    }

    /// `self − other`.
    pub fn sub(&self, other: &ExactScalar) -> Self {
        self.add(&other.neg())
    }

    /// `−self`.
    pub fn neg(&self) -> Self {
        ExactScalar {
            re: -&self.re,
            im: -&self.im,
            tau: -self.tau,
        }
    }

    /// `n·self` for an integer `n`.
    pub fn scale(&self, n: i64) -> Self {
        ExactScalar {
            re: &self.re * rat(n),
            im: &self.im * rat(n),
            tau: self.tau * n,
        }
    }

    /// `x·self` for a rational `x`. Generic parts are only scaled by integers.
    pub fn scale_rational(&self, x: &Rational) -> Option<Self> {
        if self.tau != 0 && !(x * rat(self.tau)).is_integer() {
            return None;
        }
        let tau = if self.tau == 0 {
            0
        } else {
            rational_to_i64(&(x * rat(self.tau)))?
        };
        Some(ExactScalar {
            re: &self.re * x,
            im: &self.im * x,
            tau,
        })
    }

    /// Complex conjugate.
    pub fn conj(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: -&self.im,
            tau: self.tau,
        }
    }

    /// Real part as a scalar (keeps the generic part, which is real).
    pub fn real_part(&self) -> Self {
        ExactScalar {
            re: self.re.clone(),
            im: Rational::zero(),
            tau: self.tau,
        }
    }

    /// `|Re|` rounded up, ignoring any generic part.
    pub fn abs_re_ceil(&self) -> i64 {
        ceil_i64(&self.re.abs())
    }

    /// Parity of an integer scalar, if any.
    pub fn parity(&self) -> Option<i64> {
        self.as_integer().map(|n| n.mod_floor(&2))
    }
}

impl From<i64> for ExactScalar {
    fn from(n: i64) -> Self {
        ExactScalar::int(n)
    }
}

impl From<Rational> for ExactScalar {
    fn from(x: Rational) -> Self {
        ExactScalar::rational(x)
    }
}

impl fmt::Display for ExactScalar {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut parts: Vec<String> = Vec::new();
        if self.tau != 0 {
            parts.push(match self.tau {
                1 => "generic".to_string(),
                -1 => "-generic".to_string(),
                k => format!("{k}*generic"),
            });
        }
        if !self.re.is_zero() || (self.tau == 0 && self.im.is_zero()) {
            parts.push(fmt_rational(&self.re));
        }
        if !self.im.is_zero() {
            parts.push(if self.im.is_one() {
                "i".to_string()
            } else {
                format!("{}i", fmt_rational(&self.im))
            });
        }
        let mut out = String::new();
        for (k, part) in parts.iter().enumerate() {
            if k > 0 && !part.starts_with('-') {
                out.push('+');
            }
            out.push_str(part);
        }
        f.write_str(&out)
    }
}

/// Parses an exact rational from `n`, `n/d` or a decimal literal.
pub fn parse_rational(s: &str) -> Result<Rational, ParseScalarError> {
    let err = || ParseScalarError(s.to_string());
    let t = s.trim();
    if t.is_empty() {
        return Err(err());
    }
    if let Some((n, d)) = t.split_once('/') {
        let n: BigInt = n.trim().parse().map_err(|_| err())?;
        let d: BigInt = d.trim().parse().map_err(|_| err())?;
        if d.is_zero() {
            return Err(err());
        }
        return Ok(Rational::new(n, d));
    }
    if let Some((int_part, frac_part)) = t.split_once('.') {
        let negative = int_part.trim_start().starts_with('-');
        let digits = int_part.trim_start_matches(['-', '+']);
        if !frac_part.chars().all(|c| c.is_ascii_digit())
            || !digits.chars().all(|c| c.is_ascii_digit())
            || (digits.is_empty() && frac_part.is_empty())
        {
            return Err(err());
        }
        let whole: BigInt = if digits.is_empty() {
            BigInt::zero()
        } else {
            digits.parse().map_err(|_| err())?
        };
        let frac: BigInt = if frac_part.is_empty() {
            BigInt::zero()
        } else {
            frac_part.parse().map_err(|_| err())?
        };
        let scale = num_traits::pow(BigInt::from(10), frac_part.len());
        let magnitude = Rational::new(whole * &scale + frac, scale);
        return Ok(if negative { -magnitude } else { magnitude });
    }
    let n: BigInt = t.parse().map_err(|_| err())?;
    Ok(Rational::from_integer(n))
}

impl FromStr for ExactScalar {
    type Err = ParseScalarError;

    /// Accepts `generic`, rationals (`n`, `n/d`, decimals) and complex
    /// literals `x+yi`, `x-yi`, `yi`.
    fn from_str(s: &str) -> Result<Self, Self::Err> {
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t == "generic" {
            return Ok(ExactScalar::generic());
        }
        if let Some(body) = t.strip_suffix('i') {
            let split = body
                .char_indices()
                .skip(1)
                .filter(|&(k, c)| (c == '+' || c == '-') && !body[..k].ends_with('/'))
                .map(|(k, _)| k)
                .last();
            let (re_s, im_s) = match split {
                Some(k) => (&body[..k], &body[k..]),
                None => ("0", body),
            };
            let im = match im_s {
                "" | "+" => Rational::one(),
                "-" => -Rational::one(),
                other => parse_rational(other.trim_start_matches('+'))?,
            };
            let re = parse_rational(re_s)?;
            return Ok(ExactScalar::complex(re, im));
        }
        parse_rational(&t).map(ExactScalar::rational)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn generic_never_zero() {
        let g = ExactScalar::generic();
        assert!(!g.is_zero());
        assert!(!g.add_int(-3).is_zero());
        assert!(g.sub(&g).is_zero());
        assert!(!g.is_integer());
    }

    #[test]
    fn parses_literals() {
        assert_eq!(
            "1/2".parse::<ExactScalar>().unwrap(),
            ExactScalar::rational(ratio(1, 2))
        );
        assert_eq!(
            "-0.25".parse::<ExactScalar>().unwrap(),
            ExactScalar::rational(ratio(-1, 4))
        );
        assert_eq!(
            "-2+5i".parse::<ExactScalar>().unwrap(),
            ExactScalar::complex(rat(-2), rat(5))
        );
        assert_eq!(
            "1-i".parse::<ExactScalar>().unwrap(),
            ExactScalar::complex(rat(1), rat(-1))
        );
        assert_eq!(
            "3i".parse::<ExactScalar>().unwrap(),
            ExactScalar::complex(rat(0), rat(3))
        );
        assert_eq!(
            "-1/2+3/4i".parse::<ExactScalar>().unwrap(),
            ExactScalar::complex(ratio(-1, 2), ratio(3, 4))
        );
        assert!("generic".parse::<ExactScalar>().unwrap().is_generic());
        assert!("abc".parse::<ExactScalar>().is_err());
        assert!("1/0".parse::<ExactScalar>().is_err());
    }

    #[test]
    fn display_round_trips() {
        for s in ["0", "3", "-7/2", "1+i", "-2+5i", "3i", "1/3-2/5i"] {
            let x: ExactScalar = s.parse().unwrap();
            assert_eq!(x.to_string().parse::<ExactScalar>().unwrap(), x, "{s}");
        }
        assert_eq!(ExactScalar::generic().add_int(2).to_string(), "generic+2");
    }
}
