//! Exact and adaptively-precise real arithmetic: floors of rational powers,
//! guaranteed enclosures of n^alpha, and integer location inside enclosed
//! intervals. Everything downstream (membership tests, root brackets, the
//! envelope analysis) rests on the containment guarantees made here.

pub mod alpha;
pub mod dyadic;
pub mod functions;

pub use alpha::{Alpha, AlphaKind};
pub use dyadic::{Dyadic, RInterval, Round};
pub use functions::PrecisionCtx;

use num_bigint::{BigInt, BigUint};
use num_traits::{One, Pow, ToPrimitive, Zero};
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum RigorError {
    #[error("invalid exponent: {0}")]
    InvalidAlpha(String),
    #[error("enclosure still straddles an integer at {bits} bits")]
    PrecisionExhausted { bits: u32 },
    #[error("endpoint enclosures overlap an integer boundary")]
    Undecidable,
}

/// Default ceiling for the adaptive precision loop; `PSD_MAX_PRECISION_BITS`
/// overrides it per process.
pub const DEFAULT_MAX_PRECISION_BITS: u32 = 4096;

pub fn max_precision_bits() -> u32 {
    std::env::var("PSD_MAX_PRECISION_BITS")
        .ok()
        .and_then(|v| v.parse().ok())
        .unwrap_or(DEFAULT_MAX_PRECISION_BITS)
}

/// A dyadic interval guaranteed to contain the exact real value, together
/// with the working precision that produced it.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BoundedReal {
    pub lo: Dyadic,
    pub hi: Dyadic,
    pub precision_bits: u32,
}

impl BoundedReal {
    pub fn new(lo: Dyadic, hi: Dyadic, precision_bits: u32) -> Self {
        assert!(lo <= hi, "BoundedReal endpoints out of order");
        BoundedReal { lo, hi, precision_bits }
    }

    pub fn point(x: Dyadic, precision_bits: u32) -> Self {
        BoundedReal { lo: x.clone(), hi: x, precision_bits }
    }

    pub fn from_interval(iv: RInterval, precision_bits: u32) -> Self {
        BoundedReal { lo: iv.lo, hi: iv.hi, precision_bits }
    }

    pub fn width(&self) -> Dyadic {
        self.hi.sub(&self.lo)
    }

    pub fn mid_f64(&self) -> f64 {
        0.5 * (self.lo.to_f64() + self.hi.to_f64())
    }

    pub fn contains(&self, other: &BoundedReal) -> bool {
        self.lo <= other.lo && other.hi <= self.hi
    }

    pub fn interval(&self) -> RInterval {
        RInterval::new(self.lo.clone(), self.hi.clone())
    }
}

/// The unique k >= 0 with k^q <= m < (k+1)^q.
pub fn nth_root_floor(m: &BigUint, q: u32) -> BigUint {
    assert!(q >= 1, "root order must be positive");
    if m.is_zero() {
        return BigUint::zero();
    }
    if q == 1 {
        return m.clone();
    }
    if let Some(small) = m.to_u128() {
        return BigUint::from(nth_root_floor_u128(small, q));
    }
    use num_integer::Roots;
    m.nth_root(q)
}

/// u128 fast path: float seed, integer Newton, then a guarded fixup.
pub(crate) fn nth_root_floor_u128(m: u128, q: u32) -> u128 {
    if m == 0 {
        return 0;
    }
    if q == 1 {
        return m;
    }
    if q >= 128 || (m >> q) == 0 {
        // Root is 1 unless m == 0: 2^q > m means floor root is 1.
        return 1;
    }
    let seed = (m as f64).powf(1.0 / q as f64);
    let mut k = seed as u128;
    if k < 1 {
        k = 1;
    }
    // Newton on x -> ((q-1) x + m / x^(q-1)) / q, staying on integers.
    for _ in 0..4 {
        let p = match checked_pow_u128(k, q - 1) {
            Some(p) if p > 0 => p,
            _ => break,
        };
        let next = ((q as u128 - 1) * k + m / p) / q as u128;
        if next == k {
            break;
        }
        k = next;
    }
    while pow_le(k + 1, q, m) {
        k += 1;
    }
    while !pow_le(k, q, m) {
        k -= 1;
    }
    k
}

fn checked_pow_u128(base: u128, mut e: u32) -> Option<u128> {
    let mut acc: u128 = 1;
    let mut b = base;
    loop {
        if e & 1 == 1 {
            acc = acc.checked_mul(b)?;
        }
        e >>= 1;
        if e == 0 {
            return Some(acc);
        }
        b = b.checked_mul(b)?;
    }
}

/// base^q <= m, with overflow counting as "greater".
fn pow_le(base: u128, q: u32, m: u128) -> bool {
    match checked_pow_u128(base, q) {
        Some(p) => p <= m,
        None => false,
    }
}

/// Guaranteed enclosure of n^alpha with absolute width 2^-precision_bits.
///
/// Since n >= 1 and alpha > 1, the absolute bound implies the relative-width
/// guarantee. Enclosures at doubled precision nest inside coarser ones.
pub fn eval_pow_interval(n: &BigUint, alpha: &Alpha, precision_bits: u32) -> BoundedReal {
    assert!(!n.is_zero(), "index must be positive");
    let bits = precision_bits.max(32);
    let p = alpha.numer_u32();
    let q = alpha.denom_u32();
    // n^alpha = (n^p)^(1/q); scale by 2^(q*bits) so the integer root carries
    // `bits` fractional bits: k 2^-bits <= n^alpha < (k+1) 2^-bits.
    let scaled: BigUint = n.pow(p) << (q as u64 * bits as u64);
    let k = nth_root_floor(&scaled, q);
    let lo = Dyadic::new(BigInt::from(k.clone()), -(bits as i64));
    let hi = Dyadic::new(BigInt::from(k + 1u32), -(bits as i64));
    BoundedReal::new(lo, hi, bits)
}

/// Exactly floor(n^alpha).
///
/// Rational exponents go through the integer root; decimal exponents run the
/// adaptive enclosure loop (they reduce to exact rationals, so the loop always
/// terminates in practice, but the ceiling is still enforced).
pub fn floor_pow(n: &BigUint, alpha: &Alpha) -> Result<BigUint, RigorError> {
    assert!(!n.is_zero(), "index must be positive");
    match alpha.kind() {
        AlphaKind::ExactRational => {
            let p = alpha.numer_u32();
            let q = alpha.denom_u32();
            Ok(nth_root_floor(&n.pow(p), q))
        }
        AlphaKind::Decimal { .. } => {
            let max_bits = max_precision_bits();
            let mut bits = 64u32;
            loop {
                let enc = eval_pow_interval(n, alpha, bits);
                let flo = enc.lo.floor();
                let fhi = enc.hi.floor();
                if flo == fhi {
                    return Ok(flo.try_into().expect("n^alpha is positive"));
                }
                // hi may sit exactly on the integer boundary while the true
                // value is just below it; only a genuine straddle needs more
                // precision.
                if &flo + BigInt::one() == fhi && enc.hi == Dyadic::from_int(fhi.clone()) {
                    return Ok(flo.try_into().expect("n^alpha is positive"));
                }
                if bits >= max_bits {
                    return Err(RigorError::PrecisionExhausted { bits });
                }
                bits = (bits * 2).min(max_bits);
            }
        }
    }
}

/// Least integer in [lo, hi) (or [lo, hi] when `half_open` is false), where
/// both endpoints are themselves enclosures of exact reals.
pub fn contains_integer(
    lo: &BoundedReal,
    hi: &BoundedReal,
    half_open: bool,
) -> Result<Option<BigInt>, RigorError> {
    let c_lo = lo.lo.ceil();
    let c_hi = lo.hi.ceil();
    if c_lo != c_hi {
        return Err(RigorError::Undecidable);
    }
    let cand = c_lo;
    let cand_d = Dyadic::from_int(cand.clone());
    let above = if half_open { cand_d < hi.lo } else { cand_d <= hi.lo };
    let below = if half_open { cand_d >= hi.hi } else { cand_d > hi.hi };
    if above {
        Ok(Some(cand))
    } else if below {
        Ok(None)
    } else {
        Err(RigorError::Undecidable)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::FromPrimitive;
    use proptest::prelude::*;

    fn b(n: u64) -> BigUint {
        BigUint::from(n)
    }

    /// Independent oracle: binary search on k^q <= m.
    fn nth_root_floor_bisect(m: &BigUint, q: u32) -> BigUint {
        if m.is_zero() {
            return BigUint::zero();
        }
        let mut lo = BigUint::one();
        let mut hi = m.clone() + BigUint::one();
        while &lo + BigUint::one() < hi {
            let mid: BigUint = (&lo + &hi) >> 1;
            if mid.clone().pow(q) <= *m {
                lo = mid;
            } else {
                hi = mid;
            }
        }
        lo
    }

    #[test]
    fn nth_root_examples() {
        assert_eq!(nth_root_floor(&b(0), 5), b(0));
        assert_eq!(nth_root_floor(&b(125), 2), b(11));
        assert_eq!(nth_root_floor(&b(26), 3), b(2));
        assert_eq!(nth_root_floor(&b(27), 3), b(3));
        assert_eq!(nth_root_floor(&b(1), 7), b(1));
    }

    #[test]
    fn nth_root_big_path() {
        let m = BigUint::from(10u32).pow(60u32) + BigUint::one();
        let r = nth_root_floor(&m, 5);
        assert_eq!(r, BigUint::from(10u32).pow(12u32));
        assert_eq!(nth_root_floor_bisect(&m, 5), r);
    }

    proptest! {
        #[test]
        fn nth_root_matches_bisect_oracle(m in 0u128..u128::MAX / 2, q in 1u32..40) {
            let m = BigUint::from_u128(m).unwrap();
            let ours = nth_root_floor(&m, q);
            let oracle = nth_root_floor_bisect(&m, q);
            prop_assert_eq!(ours, oracle);
        }

        #[test]
        fn nth_root_postcondition(m in 0u128..u128::MAX / 2, q in 1u32..24) {
            let mb = BigUint::from_u128(m).unwrap();
            let k = nth_root_floor(&mb, q);
            prop_assert!(k.clone().pow(q) <= mb);
            prop_assert!((k + BigUint::one()).pow(q) > mb);
        }
    }

    #[test]
    fn floor_pow_examples() {
        let a32 = Alpha::from_rational(3u32, 2u32).unwrap();
        assert_eq!(floor_pow(&b(4), &a32).unwrap(), b(8)); // 4^(3/2) = 8 exactly
        assert_eq!(floor_pow(&b(5), &a32).unwrap(), b(11));
        let a72 = Alpha::from_rational(7u32, 2u32).unwrap();
        assert_eq!(floor_pow(&b(2), &a72).unwrap(), b(11)); // floor(8 sqrt 2)
        assert_eq!(floor_pow(&b(1), &a72).unwrap(), b(1));
    }

    #[test]
    fn floor_pow_decimal_adaptive_agrees_with_exact() {
        // 1.5 written as a decimal takes the adaptive path but must agree with
        // the exact-rational route at the same reduced exponent.
        let dec = Alpha::from_decimal_str("1.5").unwrap();
        let rat = Alpha::from_rational(3u32, 2u32).unwrap();
        for n in 1u64..400 {
            assert_eq!(floor_pow(&b(n), &dec).unwrap(), floor_pow(&b(n), &rat).unwrap());
        }
        let pi4 = Alpha::from_decimal_str("3.1416").unwrap();
        let pi4r = Alpha::from_rational(31416u32, 10000u32).unwrap();
        for n in 1u64..60 {
            assert_eq!(floor_pow(&b(n), &pi4).unwrap(), floor_pow(&b(n), &pi4r).unwrap());
        }
    }

    #[test]
    fn eval_pow_interval_examples() {
        let a = Alpha::from_rational(3u32, 2u32).unwrap();
        let one = eval_pow_interval(&b(1), &a, 64);
        assert!(one.lo <= Dyadic::one() && Dyadic::one() <= one.hi);

        // n=5: interval must contain sqrt(125), bracketed via integer sqrt
        // with extra scaling (independent of eval_pow_interval's own shift).
        let enc = eval_pow_interval(&b(5), &a, 64);
        let scale = 80u64;
        let v = BigUint::from(125u32) << (2 * scale);
        let r = nth_root_floor(&v, 2);
        let lo_oracle = Dyadic::new(BigInt::from(r.clone()), -(scale as i64));
        let hi_oracle = Dyadic::new(BigInt::from(r + 1u32), -(scale as i64));
        assert!(enc.lo <= hi_oracle && lo_oracle <= enc.hi);
        assert!(enc.width().to_f64() <= 2.0_f64.powi(-64));

        // n=2, alpha=7/2: contains 8 sqrt 2.
        let a72 = Alpha::from_rational(7u32, 2u32).unwrap();
        let enc = eval_pow_interval(&b(2), &a72, 64);
        assert!(enc.lo.to_f64() < 11.313708499 && 11.313708498 < enc.hi.to_f64());
    }

    proptest! {
        #[test]
        fn monotone_refinement(n in 1u64..5000, bits in 34u32..80) {
            let a = Alpha::from_rational(7u32, 5u32).unwrap();
            let coarse = eval_pow_interval(&b(n), &a, bits);
            let fine = eval_pow_interval(&b(n), &a, bits * 2);
            prop_assert!(coarse.contains(&fine));
        }

        #[test]
        fn floor_pow_monotone(n in 1u64..20000) {
            let a = Alpha::from_rational(5u32, 3u32).unwrap();
            let v1 = floor_pow(&b(n), &a).unwrap();
            let v2 = floor_pow(&b(n + 1), &a).unwrap();
            prop_assert!(v1 <= v2);
        }
    }

    #[test]
    fn contains_integer_examples() {
        let p = |x: f64| BoundedReal::point(Dyadic::from_f64(x), 53);
        assert_eq!(contains_integer(&p(2.1), &p(2.9), true).unwrap(), None);
        assert_eq!(contains_integer(&p(2.0), &p(2.5), true).unwrap(), Some(BigInt::from(2)));
        assert_eq!(contains_integer(&p(11.18), &p(11.32), true).unwrap(), None);
        // Closed right endpoint matters.
        assert_eq!(contains_integer(&p(2.5), &p(3.0), true).unwrap(), None);
        assert_eq!(contains_integer(&p(2.5), &p(3.0), false).unwrap(), Some(BigInt::from(3)));
    }

    #[test]
    fn contains_integer_undecidable() {
        let fuzzy = BoundedReal::new(Dyadic::from_f64(1.999), Dyadic::from_f64(2.001), 10);
        let hi = BoundedReal::point(Dyadic::from_f64(2.9), 53);
        assert_eq!(contains_integer(&fuzzy, &hi, true), Err(RigorError::Undecidable));
    }
}
