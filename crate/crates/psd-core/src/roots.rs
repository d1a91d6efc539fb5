//! Bracketed root finding: an Illinois-accelerated f64 pass and a dyadic
//! bisection that keeps a guaranteed sign-change bracket at every step.

use crate::rigor::dyadic::{Dyadic, RInterval};

/// Refines a sign-change bracket [a, b] (f(a) and f(b) of opposite sign) with
/// the Illinois variant of regula falsi. The bracket is preserved throughout;
/// returns the final (a, b).
pub fn illinois_f64(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, max_iter: u32) -> (f64, f64) {
    let mut fa = f(a);
    let mut fb = f(b);
    if fa == 0.0 {
        return (a, a);
    }
    if fb == 0.0 {
        return (b, b);
    }
    debug_assert!(fa.signum() != fb.signum(), "illinois needs a sign change");
    let mut side = 0i8;
    for _ in 0..max_iter {
        if fb == fa {
            break;
        }
        let mut c = b - fb * (b - a) / (fb - fa);
        // Secant step degenerating onto an endpoint: bisect instead.
        if !(c > a.min(b) && c < a.max(b)) || !c.is_finite() {
            c = 0.5 * (a + b);
        }
        let fc = f(c);
        if fc == 0.0 {
            return (c, c);
        }
        if fc.signum() == fb.signum() {
            b = c;
            fb = fc;
            if side == -1 {
                fa *= 0.5;
            }
            side = -1;
        } else {
            a = c;
            fa = fc;
            if side == 1 {
                fb *= 0.5;
            }
            side = 1;
        }
        if (b - a).abs() <= f64::EPSILON * (a.abs() + b.abs()) {
            break;
        }
    }
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Plain bisection on f64 for callers that want the simplest guaranteed
/// contraction; returns the final bracket.
pub fn bisect_f64(mut f: impl FnMut(f64) -> f64, mut a: f64, mut b: f64, max_iter: u32) -> (f64, f64) {
    let mut fa = f(a);
    if fa == 0.0 {
        return (a, a);
    }
    for _ in 0..max_iter {
        let mid = 0.5 * (a + b);
        if mid <= a.min(b) || mid >= a.max(b) {
            break;
        }
        let fm = f(mid);
        if fm == 0.0 {
            return (mid, mid);
        }
        if fm.signum() == fa.signum() {
            a = mid;
            fa = fm;
        } else {
            b = mid;
        }
    }
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Sign of a rigorous enclosure: negative, positive, or straddling zero.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum EncSign {
    Neg,
    Pos,
    Straddle,
}

pub fn enc_sign(iv: &RInterval) -> EncSign {
    if iv.hi.is_negative() {
        EncSign::Neg
    } else if iv.lo.is_positive() {
        EncSign::Pos
    } else {
        EncSign::Straddle
    }
}

/// Dyadic bisection on a sign oracle. `a` must evaluate negative and `b`
/// positive (pass a negated oracle otherwise). Stops when the bracket width
/// drops below `target_width` or the oracle straddles zero at the midpoint
/// (the root is then localized inside the returned bracket anyway).
pub fn bisect_dyadic(
    mut sign_at: impl FnMut(&Dyadic) -> EncSign,
    mut a: Dyadic,
    mut b: Dyadic,
    target_width: &Dyadic,
    max_iter: u32,
) -> (Dyadic, Dyadic) {
    for _ in 0..max_iter {
        if b.sub(&a) <= *target_width {
            break;
        }
        let mid = a.add(&b).mul_pow2(-1).round(192, crate::rigor::Round::Down);
        if mid <= a || mid >= b {
            break;
        }
        match sign_at(&mid) {
            EncSign::Neg => a = mid,
            EncSign::Pos => b = mid,
            EncSign::Straddle => {
                // Root pinned to within the oracle's own resolution; narrow
                // around the midpoint and stop.
                let w = b.sub(&a).mul_pow2(-2);
                let lo = mid.sub(&w).max(a.clone());
                let hi = mid.add(&w).min(b.clone());
                return (lo, hi);
            }
        }
    }
    (a, b)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn illinois_finds_sqrt2() {
        let (a, b) = illinois_f64(|x| x * x - 2.0, 1.0, 2.0, 80);
        assert!(a <= 2.0f64.sqrt() && 2.0f64.sqrt() <= b + 1e-15);
        assert!((b - a).abs() < 1e-13);
    }

    #[test]
    fn bisect_f64_bracket_shrinks() {
        let (a, b) = bisect_f64(|x| x.exp() - 3.0, 0.0, 2.0, 80);
        let root = 3.0f64.ln();
        assert!(a - 1e-15 <= root && root <= b + 1e-15);
    }

    #[test]
    fn dyadic_bisection_localizes() {
        // sign of x^2 - 2 evaluated exactly on dyadics
        let two = Dyadic::from_int(2);
        let sign = |x: &Dyadic| {
            let v = x.mul(x).sub(&two);
            if v.is_negative() {
                EncSign::Neg
            } else if v.is_positive() {
                EncSign::Pos
            } else {
                EncSign::Straddle
            }
        };
        let w = Dyadic::new(num_bigint::BigInt::from(1), -90);
        let (a, b) = bisect_dyadic(sign, Dyadic::from_int(1), Dyadic::from_int(2), &w, 200);
        let mid = 0.5 * (a.to_f64() + b.to_f64());
        assert!((mid - std::f64::consts::SQRT_2).abs() < 1e-12);
        assert!(b.sub(&a).to_f64() < 2.0_f64.powi(-80));
    }
}
