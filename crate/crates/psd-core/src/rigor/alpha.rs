//! The exponent type: a non-integral rational greater than 1.
//!
//! Decimal inputs ("3.1416") become exact rationals at the given scale, so
//! floors of powers stay exactly computable for every representable exponent.

use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Zero};
use std::fmt;
use std::str::FromStr;

use super::RigorError;

/// How the exponent was written down; the value itself is always the reduced
/// rational `numer/denom`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum AlphaKind {
    ExactRational,
    Decimal { digits: String, scale: u32 },
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Alpha {
    numer: BigUint,
    denom: BigUint,
    kind: AlphaKind,
}

impl Alpha {
    /// Exact rational exponent p/q, reduced; must be > 1 and non-integral.
    pub fn from_rational(p: impl Into<BigUint>, q: impl Into<BigUint>) -> Result<Self, RigorError> {
        let p = p.into();
        let q = q.into();
        if q.is_zero() {
            return Err(RigorError::InvalidAlpha("zero denominator".into()));
        }
        let g = num_integer::Integer::gcd(&p, &q);
        let numer = &p / &g;
        let denom = &q / &g;
        Self::validated(numer, denom, AlphaKind::ExactRational)
    }

    /// Decimal exponent such as "3.1416"; converted to digits/10^scale and reduced.
    pub fn from_decimal_str(s: &str) -> Result<Self, RigorError> {
        let s = s.trim();
        let (int_part, frac_part) = match s.split_once('.') {
            Some((i, f)) => (i, f),
            None => (s, ""),
        };
        if int_part.is_empty() && frac_part.is_empty() {
            return Err(RigorError::InvalidAlpha(format!("unparseable decimal '{s}'")));
        }
        if !int_part.chars().all(|c| c.is_ascii_digit()) || !frac_part.chars().all(|c| c.is_ascii_digit()) {
            return Err(RigorError::InvalidAlpha(format!("unparseable decimal '{s}'")));
        }
        let digits: String = format!("{int_part}{frac_part}");
        let scale = frac_part.len() as u32;
        let numer = BigUint::from_str(if digits.is_empty() { "0" } else { &digits })
            .map_err(|_| RigorError::InvalidAlpha(format!("unparseable decimal '{s}'")))?;
        let denom = BigUint::from(10u32).pow(scale);
        let g = num_integer::Integer::gcd(&numer, &denom);
        Self::validated(&numer / &g, &denom / &g, AlphaKind::Decimal { digits, scale })
    }

    /// Accepts "p/q" or a decimal string.
    pub fn parse(s: &str) -> Result<Self, RigorError> {
        if let Some((p, q)) = s.split_once('/') {
            let p = BigUint::from_str(p.trim())
                .map_err(|_| RigorError::InvalidAlpha(format!("unparseable rational '{s}'")))?;
            let q = BigUint::from_str(q.trim())
                .map_err(|_| RigorError::InvalidAlpha(format!("unparseable rational '{s}'")))?;
            Alpha::from_rational(p, q)
        } else {
            Alpha::from_decimal_str(s)
        }
    }

    fn validated(numer: BigUint, denom: BigUint, kind: AlphaKind) -> Result<Self, RigorError> {
        if denom.is_one() {
            return Err(RigorError::InvalidAlpha("exponent must be non-integral".into()));
        }
        if numer <= denom {
            return Err(RigorError::InvalidAlpha("exponent must exceed 1".into()));
        }
        Ok(Alpha { numer, denom, kind })
    }

    pub fn numer(&self) -> &BigUint {
        &self.numer
    }

    pub fn denom(&self) -> &BigUint {
        &self.denom
    }

    pub fn kind(&self) -> &AlphaKind {
        &self.kind
    }

    /// Exponent of the numerator as u32 (powers n^p are formed with it).
    pub fn numer_u32(&self) -> u32 {
        u32::try_from(&self.numer).expect("exponent numerator exceeds u32")
    }

    pub fn denom_u32(&self) -> u32 {
        u32::try_from(&self.denom).expect("exponent denominator exceeds u32")
    }

    pub fn to_rational(&self) -> BigRational {
        BigRational::new(BigInt::from(self.numer.clone()), BigInt::from(self.denom.clone()))
    }

    pub fn to_f64(&self) -> f64 {
        let p: f64 = self.numer.to_string().parse().unwrap_or(f64::NAN);
        let q: f64 = self.denom.to_string().parse().unwrap_or(f64::NAN);
        p / q
    }

    /// beta = 1/(alpha - 1).
    pub fn beta(&self) -> f64 {
        1.0 / (self.to_f64() - 1.0)
    }
}

impl fmt::Display for Alpha {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match &self.kind {
            AlphaKind::ExactRational => write!(f, "{}/{}", self.numer, self.denom),
            AlphaKind::Decimal { digits, scale } => {
                if *scale == 0 {
                    write!(f, "{digits}")
                } else {
                    let (i, fr) = digits.split_at(digits.len() - *scale as usize);
                    write!(f, "{}.{}", if i.is_empty() { "0" } else { i }, fr)
                }
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn rational_construction() {
        let a = Alpha::from_rational(3u32, 2u32).unwrap();
        assert_eq!(a.numer_u32(), 3);
        assert_eq!(a.denom_u32(), 2);
        assert_eq!(a.to_string(), "3/2");
        // Reduction happens before validation.
        assert!(Alpha::from_rational(6u32, 4u32).is_ok());
    }

    #[test]
    fn integral_rejected() {
        assert!(Alpha::from_rational(2u32, 1u32).is_err());
        assert!(Alpha::from_rational(4u32, 2u32).is_err());
        assert!(Alpha::from_decimal_str("3.0").is_err());
        assert!(Alpha::from_decimal_str("2").is_err());
    }

    #[test]
    fn at_most_one_rejected() {
        assert!(Alpha::from_rational(1u32, 2u32).is_err());
        assert!(Alpha::from_rational(3u32, 3u32).is_err());
        assert!(Alpha::from_decimal_str("0.9").is_err());
        assert!(Alpha::from_decimal_str("1.0").is_err());
    }

    #[test]
    fn decimal_reduces() {
        let a = Alpha::from_decimal_str("3.1416").unwrap();
        assert_eq!(a.numer_u32(), 3927);
        assert_eq!(a.denom_u32(), 1250);
        assert_eq!(a.to_string(), "3.1416");
        assert!(matches!(a.kind(), AlphaKind::Decimal { scale: 4, .. }));
    }

    #[test]
    fn parse_both_forms() {
        assert_eq!(Alpha::parse("7/2").unwrap().to_string(), "7/2");
        assert_eq!(Alpha::parse("1.5").unwrap().numer_u32(), 3);
        assert!(Alpha::parse("abc").is_err());
        assert!(Alpha::parse("2.0").is_err());
    }
}
