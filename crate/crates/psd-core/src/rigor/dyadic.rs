//! Dyadic rationals `mant * 2^exp` with exact arithmetic and directed rounding.
//!
//! These are the endpoints of every enclosure produced by this crate. All
//! operations are exact unless an explicit `round_*` is requested, so an
//! enclosure never silently loses its containment guarantee.

use num_bigint::{BigInt, BigUint, Sign};
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use std::cmp::Ordering;

/// Rounding direction for precision-limited results.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Round {
    Down,
    Up,
}

impl Round {
    pub fn flip(self) -> Round {
        match self {
            Round::Down => Round::Up,
            Round::Up => Round::Down,
        }
    }
}

/// An exact dyadic rational `mant * 2^exp`.
///
/// Normalised so that `mant` is odd or zero (zero has `exp = 0`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Dyadic {
    mant: BigInt,
    exp: i64,
}

impl Dyadic {
    pub fn new(mant: BigInt, exp: i64) -> Self {
        let mut d = Dyadic { mant, exp };
        d.normalize();
        d
    }

    fn normalize(&mut self) {
        if self.mant.is_zero() {
            self.exp = 0;
            return;
        }
        let tz = self.mant.trailing_zeros().unwrap_or(0);
        if tz > 0 {
            self.mant >>= tz;
            self.exp += tz as i64;
        }
    }

    pub fn zero() -> Self {
        Dyadic { mant: BigInt::zero(), exp: 0 }
    }

    pub fn one() -> Self {
        Dyadic { mant: BigInt::one(), exp: 0 }
    }

    pub fn from_int(n: impl Into<BigInt>) -> Self {
        Dyadic::new(n.into(), 0)
    }

    /// Exact conversion; every f64 is a dyadic rational.
    pub fn from_f64(x: f64) -> Self {
        assert!(x.is_finite(), "non-finite f64 into Dyadic");
        if x == 0.0 {
            return Dyadic::zero();
        }
        let bits = x.to_bits();
        let sign = if bits >> 63 == 1 { -1i64 } else { 1 };
        let exp_field = ((bits >> 52) & 0x7ff) as i64;
        let frac = bits & ((1u64 << 52) - 1);
        let (mant, exp) = if exp_field == 0 {
            (frac, -1074)
        } else {
            (frac | (1u64 << 52), exp_field - 1075)
        };
        Dyadic::new(BigInt::from(sign * mant as i64), exp)
    }

    pub fn mant(&self) -> &BigInt {
        &self.mant
    }

    pub fn exp(&self) -> i64 {
        self.exp
    }

    pub fn is_zero(&self) -> bool {
        self.mant.is_zero()
    }

    pub fn is_negative(&self) -> bool {
        self.mant.is_negative()
    }

    pub fn is_positive(&self) -> bool {
        self.mant.is_positive()
    }

    /// Number of significant bits of the mantissa.
    pub fn mant_bits(&self) -> u64 {
        self.mant.magnitude().bits()
    }

    /// floor(log2 |x|) for x != 0.
    pub fn log2_floor(&self) -> i64 {
        debug_assert!(!self.is_zero());
        self.mant_bits() as i64 - 1 + self.exp
    }

    pub fn neg(&self) -> Dyadic {
        Dyadic { mant: -self.mant.clone(), exp: self.exp }
    }

    pub fn abs(&self) -> Dyadic {
        Dyadic { mant: self.mant.abs(), exp: self.exp }
    }

    pub fn add(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let (lo, hi) = if self.exp <= other.exp { (self, other) } else { (other, self) };
        let shift = (hi.exp - lo.exp) as u64;
        let mant = (hi.mant.clone() << shift) + &lo.mant;
        Dyadic::new(mant, lo.exp)
    }

    pub fn sub(&self, other: &Dyadic) -> Dyadic {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Dyadic) -> Dyadic {
        if self.is_zero() || other.is_zero() {
            return Dyadic::zero();
        }
        Dyadic::new(&self.mant * &other.mant, self.exp + other.exp)
    }

    pub fn mul_pow2(&self, k: i64) -> Dyadic {
        if self.is_zero() {
            return Dyadic::zero();
        }
        Dyadic { mant: self.mant.clone(), exp: self.exp + k }
    }

    /// Round to at most `bits` mantissa bits in direction `dir`.
    pub fn round(&self, bits: u32, dir: Round) -> Dyadic {
        let nbits = self.mant_bits();
        if nbits <= bits as u64 {
            return self.clone();
        }
        let shift = nbits - bits as u64;
        let shifted = &self.mant >> shift; // floor shift
        let mant = match dir {
            Round::Down => shifted,
            Round::Up => {
                let back = shifted.clone() << shift;
                if back == self.mant {
                    shifted
                } else {
                    shifted + 1
                }
            }
        };
        Dyadic::new(mant, self.exp + shift as i64)
    }

    /// `num/den` rounded in direction `dir` to `bits` fraction bits.
    pub fn from_ratio(num: &BigInt, den: &BigInt, bits: u32, dir: Round) -> Dyadic {
        assert!(!den.is_zero());
        let mut num = num.clone();
        let mut den = den.clone();
        if den.is_negative() {
            num = -num;
            den = -den;
        }
        if num.is_zero() {
            return Dyadic::zero();
        }
        // Scale so that the quotient carries `bits` significant bits.
        let scale = bits as i64 + 2 + den.magnitude().bits() as i64 - num.magnitude().bits() as i64;
        let scale = scale.max(0) as u64;
        let scaled = num << scale;
        let (q, rem) = num_integer::Integer::div_rem(&scaled, &den);
        let mant = match dir {
            Round::Down => {
                if rem.is_negative() {
                    q - 1
                } else {
                    q
                }
            }
            Round::Up => {
                if rem.is_positive() {
                    q + 1
                } else {
                    q
                }
            }
        };
        Dyadic::new(mant, -(scale as i64))
    }

    pub fn from_rational(q: &BigRational, bits: u32, dir: Round) -> Dyadic {
        Dyadic::from_ratio(q.numer(), q.denom(), bits, dir)
    }

    /// Divide, rounded in `dir` to `bits` significant bits.
    pub fn div(&self, other: &Dyadic, bits: u32, dir: Round) -> Dyadic {
        assert!(!other.is_zero());
        if self.is_zero() {
            return Dyadic::zero();
        }
        let d = Dyadic::from_ratio(&self.mant, &other.mant, bits, if other.is_negative() { dir.flip() } else { dir });
        d.mul_pow2(self.exp - other.exp)
    }

    pub fn floor(&self) -> BigInt {
        if self.exp >= 0 {
            self.mant.clone() << self.exp as u64
        } else {
            self.mant.clone() >> (-self.exp) as u64
        }
    }

    pub fn ceil(&self) -> BigInt {
        -((self.neg()).floor())
    }

    /// Nearest f64 approximation (not directed; diagnostics and serialization only).
    pub fn to_f64(&self) -> f64 {
        if self.is_zero() {
            return 0.0;
        }
        let bits = self.mant_bits();
        if bits <= 62 && self.exp.abs() < 900 {
            let m: i64 = self.mant.clone().try_into().expect("fits");
            return m as f64 * (self.exp as f64).exp2();
        }
        // Take the top 63 bits and adjust the exponent.
        let shift = bits as i64 - 63;
        let top = if shift > 0 { &self.mant >> shift as u64 } else { self.mant.clone() << (-shift) as u64 };
        let m: i64 = top.try_into().expect("63 bits fit");
        m as f64 * ((self.exp + shift) as f64).exp2()
    }

    pub fn to_rational(&self) -> BigRational {
        if self.exp >= 0 {
            BigRational::from_integer(self.mant.clone() << self.exp as u64)
        } else {
            BigRational::new(self.mant.clone(), BigInt::one() << (-self.exp) as u64)
        }
    }
}

impl PartialOrd for Dyadic {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl Ord for Dyadic {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self.mant.sign(), other.mant.sign()) {
            (Sign::Minus, Sign::NoSign) | (Sign::Minus, Sign::Plus) | (Sign::NoSign, Sign::Plus) => {
                return Ordering::Less
            }
            (Sign::Plus, Sign::NoSign) | (Sign::Plus, Sign::Minus) | (Sign::NoSign, Sign::Minus) => {
                return Ordering::Greater
            }
            (Sign::NoSign, Sign::NoSign) => return Ordering::Equal,
            _ => {}
        }
        // Same nonzero sign: compare aligned mantissas.
        let (a, b) = (self, other);
        if a.exp <= b.exp {
            let shift = (b.exp - a.exp) as u64;
            a.mant.cmp(&(b.mant.clone() << shift))
        } else {
            let shift = (a.exp - b.exp) as u64;
            (a.mant.clone() << shift).cmp(&b.mant)
        }
    }
}

/// A closed interval with dyadic endpoints; the basic enclosure carrier.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RInterval {
    pub lo: Dyadic,
    pub hi: Dyadic,
}

impl RInterval {
    pub fn new(lo: Dyadic, hi: Dyadic) -> Self {
        debug_assert!(lo <= hi, "interval endpoints out of order");
        RInterval { lo, hi }
    }

    pub fn point(x: Dyadic) -> Self {
        RInterval { lo: x.clone(), hi: x }
    }

    pub fn zero() -> Self {
        RInterval::point(Dyadic::zero())
    }

    pub fn from_f64(x: f64) -> Self {
        RInterval::point(Dyadic::from_f64(x))
    }

    pub fn from_rational(q: &BigRational, bits: u32) -> Self {
        RInterval {
            lo: Dyadic::from_rational(q, bits, Round::Down),
            hi: Dyadic::from_rational(q, bits, Round::Up),
        }
    }

    pub fn add(&self, other: &RInterval, bits: u32) -> RInterval {
        RInterval {
            lo: self.lo.add(&other.lo).round(bits, Round::Down),
            hi: self.hi.add(&other.hi).round(bits, Round::Up),
        }
    }

    pub fn sub(&self, other: &RInterval, bits: u32) -> RInterval {
        RInterval {
            lo: self.lo.sub(&other.hi).round(bits, Round::Down),
            hi: self.hi.sub(&other.lo).round(bits, Round::Up),
        }
    }

    pub fn neg(&self) -> RInterval {
        RInterval { lo: self.hi.neg(), hi: self.lo.neg() }
    }

    pub fn mul(&self, other: &RInterval, bits: u32) -> RInterval {
        let candidates = [
            self.lo.mul(&other.lo),
            self.lo.mul(&other.hi),
            self.hi.mul(&other.lo),
            self.hi.mul(&other.hi),
        ];
        let mut lo = candidates[0].clone();
        let mut hi = candidates[0].clone();
        for c in &candidates[1..] {
            if *c < lo {
                lo = c.clone();
            }
            if *c > hi {
                hi = c.clone();
            }
        }
        RInterval { lo: lo.round(bits, Round::Down), hi: hi.round(bits, Round::Up) }
    }

    /// Divide by a positive integer (series denominators).
    pub fn div_uint(&self, k: u64, bits: u32) -> RInterval {
        let kb = BigInt::from(k);
        RInterval {
            lo: Dyadic::from_ratio(&self.lo.mant, &kb, bits, Round::Down).mul_pow2(self.lo.exp),
            hi: Dyadic::from_ratio(&self.hi.mant, &kb, bits, Round::Up).mul_pow2(self.hi.exp),
        }
    }

    pub fn mul_pow2(&self, k: i64) -> RInterval {
        RInterval { lo: self.lo.mul_pow2(k), hi: self.hi.mul_pow2(k) }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn contains_zero(&self) -> bool {
        !self.lo.is_positive() && !self.hi.is_negative()
    }

    /// Sign of every point in the interval, if uniform.
    pub fn sign(&self) -> Option<Ordering> {
        if self.lo.is_positive() {
            Some(Ordering::Greater)
        } else if self.hi.is_negative() {
            Some(Ordering::Less)
        } else if self.lo.is_zero() && self.hi.is_zero() {
            Some(Ordering::Equal)
        } else {
            None
        }
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    /// Outward widening by 2^-k * max(1, |interval|) is not needed; this widens
    /// by an absolute dyadic amount on both sides.
    pub fn widen(&self, eps: &Dyadic) -> RInterval {
        RInterval { lo: self.lo.sub(eps), hi: self.hi.add(eps) }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn d(x: f64) -> Dyadic {
        Dyadic::from_f64(x)
    }

    #[test]
    fn f64_roundtrip_exact() {
        for &x in &[0.0, 1.0, -1.5, 0.1, 3.141592653589793, 1e-300, -7.25e10] {
            assert_eq!(d(x).to_f64(), x);
        }
    }

    #[test]
    fn arithmetic_exact() {
        let a = d(1.5);
        let b = d(0.25);
        assert_eq!(a.add(&b).to_f64(), 1.75);
        assert_eq!(a.sub(&b).to_f64(), 1.25);
        assert_eq!(a.mul(&b).to_f64(), 0.375);
        assert_eq!(a.floor(), BigInt::from(1));
        assert_eq!(a.ceil(), BigInt::from(2));
        assert_eq!(d(-1.5).floor(), BigInt::from(-2));
        assert_eq!(d(-1.5).ceil(), BigInt::from(-1));
        assert_eq!(d(2.0).floor(), BigInt::from(2));
        assert_eq!(d(2.0).ceil(), BigInt::from(2));
    }

    #[test]
    fn rounding_directions_bracket() {
        let num = BigInt::from(1);
        let den = BigInt::from(3);
        let lo = Dyadic::from_ratio(&num, &den, 40, Round::Down);
        let hi = Dyadic::from_ratio(&num, &den, 40, Round::Up);
        assert!(lo < hi);
        assert!(lo.to_f64() < 1.0 / 3.0 && 1.0 / 3.0 < hi.to_f64());
        let w = hi.sub(&lo);
        assert!(w.to_f64() < 2.0_f64.powi(-38));
    }

    #[test]
    fn interval_mul_contains_products() {
        let a = RInterval::new(d(-2.0), d(3.0));
        let b = RInterval::new(d(0.5), d(4.0));
        let p = a.mul(&b, 64);
        assert!(p.lo.to_f64() <= -8.0 && p.hi.to_f64() >= 12.0);
    }

    #[test]
    fn ordering_across_exponents() {
        assert!(d(0.5) < d(0.75));
        assert!(d(-3.0) < d(0.001));
        assert!(Dyadic::new(BigInt::from(1), 10) > Dyadic::new(BigInt::from(1023), 0));
    }

    #[test]
    fn round_directed() {
        let x = Dyadic::new(BigInt::from(0b10110111), 0); // 183
        let down = x.round(4, Round::Down);
        let up = x.round(4, Round::Up);
        assert!(down <= x && x <= up);
        assert_eq!(down.to_f64(), 176.0);
        assert_eq!(up.to_f64(), 184.0);
    }
}
