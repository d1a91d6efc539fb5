//! Rigorous `ln` and `exp` on dyadic intervals at a chosen working precision.
//!
//! Both are computed from argument-reduced power series with explicit tail
//! bounds folded into the enclosure, so the returned interval always contains
//! the exact value. Precision is a parameter of the evaluation context, not a
//! global; callers own their contexts, which keeps every operation pure.

use super::dyadic::{Dyadic, RInterval, Round};
use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Signed, Zero};
use std::collections::HashMap;

/// Worker-local evaluation context: target precision plus constant caches.
#[derive(Debug, Clone)]
pub struct PrecisionCtx {
    bits: u32,
    ln2: RInterval,
    ln_cache: HashMap<(BigInt, BigInt), RInterval>,
}

impl PrecisionCtx {
    pub fn new(bits: u32) -> Self {
        let bits = bits.max(32);
        PrecisionCtx { bits, ln2: ln2_interval(bits), ln_cache: HashMap::new() }
    }

    pub fn bits(&self) -> u32 {
        self.bits
    }

    pub fn ln2(&self) -> &RInterval {
        &self.ln2
    }

    /// ln of a positive rational, cached on (numer, denom).
    pub fn ln_rational(&mut self, q: &BigRational) -> RInterval {
        debug_assert!(q.is_positive());
        let key = (q.numer().clone(), q.denom().clone());
        if let Some(v) = self.ln_cache.get(&key) {
            return v.clone();
        }
        let num = ln_interval(&Dyadic::from_int(q.numer().clone()), self.bits, &self.ln2);
        let den = ln_interval(&Dyadic::from_int(q.denom().clone()), self.bits, &self.ln2);
        let v = num.sub(&den, self.bits);
        self.ln_cache.insert(key, v.clone());
        v
    }

    pub fn ln_dyadic(&self, x: &Dyadic) -> RInterval {
        ln_interval(x, self.bits, &self.ln2)
    }

    pub fn exp(&self, x: &RInterval) -> RInterval {
        RInterval::new(
            exp_dyadic(&x.lo, self.bits, &self.ln2, Round::Down),
            exp_dyadic(&x.hi, self.bits, &self.ln2, Round::Up),
        )
    }

    /// q^u for positive rational q and dyadic-interval exponent u.
    pub fn pow_rational(&mut self, q: &BigRational, u: &RInterval) -> RInterval {
        let lnq = self.ln_rational(q);
        let prod = u.mul(&lnq, self.bits + 16);
        self.exp(&prod)
    }
}

/// One ulp at the working precision relative to scale 1.
fn tail_eps(bits: u32) -> Dyadic {
    Dyadic::new(BigInt::from(1), -(bits as i64) - 4)
}

/// ln 2 = 2 atanh(1/3) = 2 * sum_{k>=0} (1/3)^(2k+1) / (2k+1).
pub fn ln2_interval(bits: u32) -> RInterval {
    let work = bits + 16;
    let third = RInterval::from_rational(&BigRational::new(BigInt::from(1), BigInt::from(3)), work);
    let z2 = third.mul(&third, work);
    let mut term = third.clone(); // z^(2k+1)
    let mut sum = RInterval::zero();
    let mut k = 0u64;
    loop {
        sum = sum.add(&term.div_uint(2 * k + 1, work), work);
        term = term.mul(&z2, work);
        k += 1;
        if term.hi < tail_eps(work) {
            break;
        }
    }
    // Tail: sum_{j>k} z^(2j+1)/(2j+1) <= z^(2k+1) / (1 - z^2) <= term * 9/8.
    let tail = term.hi.mul(&Dyadic::from_f64(1.125)).round(work, Round::Up);
    let sum = RInterval::new(sum.lo, sum.hi.add(&tail));
    sum.mul_pow2(1)
}

/// Rigorous enclosure of ln(x) for a positive dyadic x.
pub fn ln_interval(x: &Dyadic, bits: u32, ln2: &RInterval) -> RInterval {
    assert!(x.is_positive(), "ln of non-positive value");
    let work = bits + 16;
    // x = m * 2^e with m in [1, 2).
    let e = x.log2_floor();
    let m = x.mul_pow2(-e);
    debug_assert!(m >= Dyadic::one() && m < Dyadic::from_int(2));
    // ln m = 2 atanh(z), z = (m-1)/(m+1) in [0, 1/3).
    let one = RInterval::point(Dyadic::one());
    let mi = RInterval::point(m);
    let num = mi.sub(&one, work);
    let den = mi.add(&one, work);
    let z = RInterval::new(
        num.lo.div(&den.hi, work, Round::Down),
        num.hi.div(&den.lo, work, Round::Up),
    );
    let z2 = z.mul(&z, work);
    let mut term = z.clone();
    let mut sum = RInterval::zero();
    let mut k = 0u64;
    loop {
        sum = sum.add(&term.div_uint(2 * k + 1, work), work);
        term = term.mul(&z2, work);
        k += 1;
        if term.hi < tail_eps(work) || term.hi.is_zero() {
            break;
        }
    }
    let tail = term.hi.mul(&Dyadic::from_f64(1.125)).round(work, Round::Up);
    let atanh = RInterval::new(sum.lo, sum.hi.add(&tail));
    let ln_m = atanh.mul_pow2(1);
    // ln x = ln m + e * ln 2.
    if e == 0 {
        return ln_m;
    }
    let e_iv = RInterval::point(Dyadic::from_int(e));
    ln_m.add(&e_iv.mul(ln2, work), work)
}

/// Rigorous directed exp of a dyadic point.
pub fn exp_dyadic(x: &Dyadic, bits: u32, ln2: &RInterval, dir: Round) -> Dyadic {
    let work = bits + 16;
    // Reduce: x = n ln2 + t, |t| <= 0.75. n from a float estimate is fine; only
    // the smallness of t matters, not the exact rounding of n.
    let n = (x.to_f64() / std::f64::consts::LN_2).round();
    assert!(n.abs() < 9.0e15, "exp argument out of supported range");
    let n = n as i64;
    let n_iv = RInterval::point(Dyadic::from_int(n));
    let t = RInterval::point(x.clone()).sub(&n_iv.mul(ln2, work), work);
    debug_assert!(t.lo.to_f64() > -0.8 && t.hi.to_f64() < 0.8);
    // exp(t) = sum t^k / k!, tail bounded once k >= 2 by |term| * 2.
    let mut term = RInterval::point(Dyadic::one());
    let mut sum = RInterval::point(Dyadic::one());
    let mut k = 1u64;
    loop {
        term = term.mul(&t, work).div_uint(k, work);
        sum = sum.add(&term, work);
        k += 1;
        let mag = if term.lo.abs() > term.hi.abs() { term.lo.abs() } else { term.hi.abs() };
        if k > 3 && mag < tail_eps(work) {
            // |tail| <= |t|^(k)/k! * 1/(1-|t|/(k+1)) <= 2 * mag for |t| <= 0.8, k >= 3.
            let tail = mag.mul_pow2(1).round(work, Round::Up);
            sum = sum.widen(&tail);
            break;
        }
    }
    let sum = sum.mul_pow2(n);
    match dir {
        Round::Down => sum.lo.round(bits, Round::Down),
        Round::Up => sum.hi.round(bits, Round::Up),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_bigint::BigInt;

    // Reference digits computed independently at 40 significant digits.
    const LN2: f64 = 0.6931471805599453;

    #[test]
    fn ln2_matches_reference() {
        for bits in [48, 96, 192, 384] {
            let iv = ln2_interval(bits);
            assert!(iv.lo.to_f64() <= LN2 && LN2 <= iv.hi.to_f64());
            assert!(iv.width().to_f64() < 2.0_f64.powi(-(bits as i32) + 2));
        }
    }

    #[test]
    fn ln_of_integers() {
        let ctx = PrecisionCtx::new(128);
        let e_iv = ln_interval(&Dyadic::from_int(10), 128, ctx.ln2());
        let ln10 = 2.302585092994046;
        assert!(e_iv.lo.to_f64() <= ln10 && ln10 <= e_iv.hi.to_f64());
        let one = ln_interval(&Dyadic::one(), 128, ctx.ln2());
        assert!(one.contains_zero());
        assert!(one.width().to_f64() < 1e-30);
    }

    #[test]
    fn exp_matches_reference() {
        let ctx = PrecisionCtx::new(128);
        for &x in &[0.0, 1.0, -1.0, 0.5, -3.75, 10.0, -20.25] {
            let lo = exp_dyadic(&Dyadic::from_f64(x), 128, ctx.ln2(), Round::Down);
            let hi = exp_dyadic(&Dyadic::from_f64(x), 128, ctx.ln2(), Round::Up);
            let reference = x.exp();
            assert!(lo.to_f64() <= reference * (1.0 + 1e-12));
            assert!(hi.to_f64() >= reference * (1.0 - 1e-12));
            assert!(lo <= hi);
            let rel = hi.sub(&lo).to_f64() / reference;
            assert!(rel < 1e-30, "rel width {rel} at x={x}");
        }
    }

    #[test]
    fn exp_ln_roundtrip() {
        let mut ctx = PrecisionCtx::new(160);
        let q = BigRational::new(BigInt::from(3), BigInt::from(5));
        let u = RInterval::point(Dyadic::from_f64(2.0));
        let p = ctx.pow_rational(&q, &u);
        // (3/5)^2 = 9/25 = 0.36 exactly.
        assert!(p.lo.to_f64() <= 0.36 && 0.36 <= p.hi.to_f64());
        assert!(p.width().to_f64() < 1e-40);
    }

    #[test]
    fn ln_rational_sign() {
        let mut ctx = PrecisionCtx::new(96);
        let q = BigRational::new(BigInt::from(3), BigInt::from(2));
        let l = ctx.ln_rational(&q);
        let reference = 0.4054651081081644;
        assert!(l.lo.to_f64() <= reference && reference <= l.hi.to_f64());
        let qinv = BigRational::new(BigInt::from(1), BigInt::from(2));
        let l2 = ctx.ln_rational(&qinv);
        assert!(l2.hi.is_negative());
    }
}
