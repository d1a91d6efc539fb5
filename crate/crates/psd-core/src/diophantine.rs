//! The linear equation y = a_1 x_1 + ... + a_k x_k over PS(alpha)^{k+1}:
//! solution classification, collision reduction, pruned exhaustive search,
//! and the solution-count growth experiments.

use crate::ps_seq::MembershipTable;
use crate::rigor::{Alpha, RigorError};
use num_bigint::{BigInt, BigUint};
use num_rational::BigRational;
use num_traits::{One, Signed, ToPrimitive, Zero};
use rayon::prelude::*;
use thiserror::Error;

#[derive(Debug, Error, Clone, PartialEq)]
pub enum DioError {
    #[error("coefficient is not a positive rational: {0}")]
    CoefficientNotRational(String),
    #[error("tuple does not satisfy the equation")]
    EquationViolated,
    #[error("collision reduction needs a_i < 1, got a_{i} = {coeff}")]
    InvalidCollision { i: usize, coeff: String },
    #[error("growth fit needs at least 3 positive counts")]
    DegenerateFit,
    #[error(transparent)]
    Rigor(#[from] RigorError),
}

/// Exact positive rational coefficients (a_1, ..., a_k).
#[derive(Debug, Clone, PartialEq)]
pub struct LinearEquation {
    coeffs: Vec<BigRational>,
}

impl LinearEquation {
    pub fn new(coeffs: Vec<BigRational>) -> Result<Self, DioError> {
        if coeffs.is_empty() {
            return Err(DioError::CoefficientNotRational("empty coefficient list".into()));
        }
        for c in &coeffs {
            if !c.is_positive() {
                return Err(DioError::CoefficientNotRational(format!("{c}")));
            }
        }
        Ok(LinearEquation { coeffs })
    }

    /// Parses "1,1" or "1/2,1/2" or decimals like "0.5,0.25".
    pub fn parse(s: &str) -> Result<Self, DioError> {
        let coeffs: Result<Vec<BigRational>, DioError> =
            s.split(',').map(|t| parse_rational(t.trim())).collect();
        LinearEquation::new(coeffs?)
    }

    pub fn k(&self) -> usize {
        self.coeffs.len()
    }

    pub fn coeffs(&self) -> &[BigRational] {
        &self.coeffs
    }

    pub fn coeff_sum(&self) -> BigRational {
        self.coeffs.iter().sum()
    }

    pub fn sum_is_one(&self) -> bool {
        self.coeff_sum() == BigRational::one()
    }

    /// Integer form: (L, c_1..c_k) with L y = sum c_i x_i, L = lcm of denominators.
    pub fn scaled(&self) -> (BigUint, Vec<BigUint>) {
        let mut l = BigInt::one();
        for c in &self.coeffs {
            l = num_integer::Integer::lcm(&l, c.denom());
        }
        let cs = self
            .coeffs
            .iter()
            .map(|c| {
                let v = c.numer() * (&l / c.denom());
                v.to_biguint().expect("positive coefficient")
            })
            .collect();
        (l.to_biguint().expect("positive lcm"), cs)
    }
}

pub fn parse_rational(t: &str) -> Result<BigRational, DioError> {
    let mk_err = || DioError::CoefficientNotRational(t.to_string());
    if let Some((p, q)) = t.split_once('/') {
        let p: BigInt = p.trim().parse().map_err(|_| mk_err())?;
        let q: BigInt = q.trim().parse().map_err(|_| mk_err())?;
        if q.is_zero() {
            return Err(mk_err());
        }
        Ok(BigRational::new(p, q))
    } else if let Some((i, f)) = t.split_once('.') {
        if !i.chars().all(|c| c.is_ascii_digit()) || !f.chars().all(|c| c.is_ascii_digit()) {
            return Err(mk_err());
        }
        let digits: BigInt = format!("{i}{f}").parse().map_err(|_| mk_err())?;
        Ok(BigRational::new(digits, BigInt::from(10u32).pow(f.len() as u32)))
    } else {
        let p: BigInt = t.parse().map_err(|_| mk_err())?;
        Ok(BigRational::from_integer(p))
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, serde::Serialize)]
pub enum Classification {
    Trivial,
    Degenerate,
    NonTrivial,
}

/// A solution (r; q_1..q_k) with its values and classification.
#[derive(Debug, Clone, PartialEq)]
pub struct SolutionTuple {
    pub r: u64,
    pub q: Vec<u64>,
    pub y_value: BigUint,
    pub x_values: Vec<BigUint>,
    pub classification: Classification,
}

/// Classifies a value tuple against the equation; the tuple must satisfy it.
///
/// Trivial means the coefficient sum is 1 and all values coincide. A
/// non-trivial tuple with a value collision (y = x_i, or x_i = x_j) is
/// Degenerate; those reduce to a shorter equation via [`reduce_equation`].
pub fn classify_solution(
    eq: &LinearEquation,
    y_value: &BigUint,
    x_values: &[BigUint],
) -> Result<Classification, DioError> {
    if x_values.len() != eq.k() {
        return Err(DioError::EquationViolated);
    }
    let y = BigRational::from_integer(BigInt::from(y_value.clone()));
    let rhs: BigRational = eq
        .coeffs
        .iter()
        .zip(x_values)
        .map(|(a, x)| a * BigRational::from_integer(BigInt::from(x.clone())))
        .sum();
    if y != rhs {
        return Err(DioError::EquationViolated);
    }
    let all_equal = x_values.iter().all(|x| x == y_value);
    if eq.sum_is_one() && all_equal {
        return Ok(Classification::Trivial);
    }
    let mut distinct: Vec<&BigUint> = Vec::with_capacity(x_values.len() + 1);
    distinct.push(y_value);
    for x in x_values {
        if !distinct.contains(&x) {
            distinct.push(x);
        }
    }
    if distinct.len() < eq.k() + 1 {
        Ok(Classification::Degenerate)
    } else {
        Ok(Classification::NonTrivial)
    }
}

/// The collision patterns of a degenerate solution.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Collision {
    /// y = x_i (0-based i).
    YEqualsX(usize),
    /// x_i = x_j, i != j (0-based).
    XEqualsX(usize, usize),
}

/// Eliminates one collision, producing the (k-1)-variable equation with
/// positive coefficients: a_j / (1 - a_i) for y = x_i, or a_i + a_j merged for
/// x_i = x_j.
pub fn reduce_equation(eq: &LinearEquation, collision: Collision) -> Result<LinearEquation, DioError> {
    match collision {
        Collision::YEqualsX(i) => {
            assert!(i < eq.k(), "collision index out of range");
            let ai = &eq.coeffs[i];
            if *ai >= BigRational::one() {
                return Err(DioError::InvalidCollision { i, coeff: format!("{ai}") });
            }
            let denom = BigRational::one() - ai;
            let coeffs = eq
                .coeffs
                .iter()
                .enumerate()
                .filter(|(j, _)| *j != i)
                .map(|(_, a)| a / &denom)
                .collect();
            LinearEquation::new(coeffs)
        }
        Collision::XEqualsX(i, j) => {
            assert!(i != j && i < eq.k() && j < eq.k(), "collision indices out of range");
            let (lo, hi) = (i.min(j), i.max(j));
            let merged = &eq.coeffs[lo] + &eq.coeffs[hi];
            let mut coeffs = Vec::with_capacity(eq.k() - 1);
            for (idx, a) in eq.coeffs.iter().enumerate() {
                if idx == hi {
                    continue;
                }
                coeffs.push(if idx == lo { merged.clone() } else { a.clone() });
            }
            LinearEquation::new(coeffs)
        }
    }
}

/// Upper integer bound for q_j at radius r: q_j < b_j^(-1/alpha) r + 1, with a
/// small outward slack so no true solution is ever pruned. Over-enumeration is
/// harmless; candidates beyond the true bound cannot satisfy the equation.
pub fn search_bound(b_j: &BigRational, alpha: &Alpha, r: u64) -> u64 {
    let factor = (1.0 / rational_to_f64(b_j)).powf(1.0 / alpha.to_f64());
    (factor * r as f64 * (1.0 + 1e-9) + 2.0).floor() as u64
}

pub fn rational_to_f64(q: &BigRational) -> f64 {
    let n: f64 = q.numer().to_string().parse().unwrap_or(f64::NAN);
    let d: f64 = q.denom().to_string().parse().unwrap_or(f64::NAN);
    n / d
}

/// All solutions with r <= n_max and q_j within the pruning bound, each q
/// vector in lexicographic order within ascending r.
///
/// The innermost index is recovered by a membership query against the
/// generated prefix (solve for c_k x_k, check divisibility, look the value
/// up), so the scan is O(N^k) rather than O(N^{k+1}).
pub fn search_solutions(
    eq: &LinearEquation,
    alpha: &Alpha,
    n_max: u64,
) -> Result<Vec<SolutionTuple>, DioError> {
    assert!(n_max >= 2, "search needs n_max >= 2");
    let k = eq.k();
    let table_max = (1..=k)
        .map(|j| search_bound(&eq.coeffs[j - 1], alpha, n_max))
        .max()
        .unwrap()
        .max(n_max);
    let table = MembershipTable::build(alpha, table_max)?;
    let (l, cs) = eq.scaled();

    // u128 fast lane whenever every scaled product fits.
    let fast = table.max_value_u128().and_then(|vmax| {
        let lu = l.to_u128()?;
        lu.checked_mul(vmax)?;
        let mut csu = Vec::with_capacity(k);
        for c in &cs {
            let cu = c.to_u128()?;
            cu.checked_mul(vmax)?;
            csu.push(cu);
        }
        Some((lu, csu))
    });

    let hits: Vec<Vec<(u64, Vec<u64>)>> = (1..=n_max)
        .into_par_iter()
        .map(|r| {
            let mut found = Vec::new();
            match &fast {
                Some((lu, csu)) => {
                    let target = lu * table.value_u128(r).expect("fast lane");
                    let mut qs = vec![0u64; k];
                    search_rec_u128(eq, alpha, &table, csu, r, target, 0, &mut qs, &mut found);
                }
                None => {
                    let target = BigUint::from(l.clone()) * table.value(r);
                    let mut qs = vec![0u64; k];
                    search_rec_big(eq, alpha, &table, &cs, r, target, 0, &mut qs, &mut found);
                }
            }
            found
        })
        .collect();

    let mut out = Vec::new();
    for per_r in hits {
        for (r, q) in per_r {
            let y_value = table.value(r);
            let x_values: Vec<BigUint> = q.iter().map(|&qi| table.value(qi)).collect();
            let classification = classify_solution(eq, &y_value, &x_values)?;
            out.push(SolutionTuple { r, q, y_value, x_values, classification });
        }
    }
    Ok(out)
}

#[allow(clippy::too_many_arguments)]
fn search_rec_u128(
    eq: &LinearEquation,
    alpha: &Alpha,
    table: &MembershipTable,
    cs: &[u128],
    r: u64,
    remaining: u128,
    pos: usize,
    qs: &mut [u64],
    found: &mut Vec<(u64, Vec<u64>)>,
) {
    let k = cs.len();
    if pos == k - 1 {
        let ck = cs[k - 1];
        if remaining == 0 || remaining % ck != 0 {
            return;
        }
        if let Some(qk) = table.lookup_u128(remaining / ck) {
            qs[k - 1] = qk;
            found.push((r, qs.to_vec()));
        }
        return;
    }
    let bound = search_bound(&eq.coeffs()[pos], alpha, r);
    for q in 1..=bound.min(table.len() as u64) {
        let term = cs[pos] * table.value_u128(q).expect("fast lane");
        if term >= remaining {
            // Values increase with q; nothing further can leave room for the
            // remaining positive terms.
            break;
        }
        qs[pos] = q;
        search_rec_u128(eq, alpha, table, cs, r, remaining - term, pos + 1, qs, found);
    }
}

#[allow(clippy::too_many_arguments)]
fn search_rec_big(
    eq: &LinearEquation,
    alpha: &Alpha,
    table: &MembershipTable,
    cs: &[BigUint],
    r: u64,
    remaining: BigUint,
    pos: usize,
    qs: &mut [u64],
    found: &mut Vec<(u64, Vec<u64>)>,
) {
    let k = cs.len();
    if pos == k - 1 {
        let ck = &cs[k - 1];
        if remaining.is_zero() {
            return;
        }
        let (quot, rem) = num_integer::Integer::div_rem(&remaining, ck);
        if !rem.is_zero() {
            return;
        }
        if let Some(qk) = table.lookup_big(&quot) {
            qs[k - 1] = qk;
            found.push((r, qs.to_vec()));
        }
        return;
    }
    let bound = search_bound(&eq.coeffs()[pos], alpha, r);
    for q in 1..=bound.min(table.len() as u64) {
        let term = &cs[pos] * table.value(q);
        if term >= remaining {
            break;
        }
        qs[pos] = q;
        search_rec_big(eq, alpha, table, cs, r, remaining.clone() - term, pos + 1, qs, found);
    }
}

/// Which coordinate of the count #{(l, m, n): floor(l^a)+floor(m^a)=floor(n^a)}
/// is bounded by x. The source count bounds l with m, n free; that set is
/// approximated by `SmallestLessThanX` with the documented truncation, while
/// `LargestLessThanX` bounds the result index n instead.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CountMode {
    /// min(l, m) < x, with n < x^(ceil(beta)+1) (configurable) so the
    /// enumeration terminates.
    SmallestLessThanX,
    /// n < x.
    LargestLessThanX,
}

/// Counts ordered tuples (l, m, n) with floor(l^a) + floor(m^a) = floor(n^a)
/// under the chosen normalization.
pub fn count_fermat(
    alpha: &Alpha,
    x: u64,
    mode: CountMode,
    n_cap_override: Option<u64>,
) -> Result<u64, DioError> {
    assert!(x >= 2, "count needs x >= 2");
    match mode {
        CountMode::LargestLessThanX => {
            if x <= 2 {
                return Ok(0);
            }
            let table = MembershipTable::build(alpha, x - 1)?;
            let mut count = 0u64;
            if let MembershipTable::Small(vals) = &table {
                for n in 2..x as usize {
                    let vn = vals[n - 1];
                    for l in 1..n {
                        let target = vn - vals[l - 1];
                        if target >= 1 && vals.binary_search(&target).is_ok() {
                            count += 1;
                        }
                    }
                }
            } else {
                for n in 2..=(x - 1) {
                    let vn = table.value(n);
                    for l in 1..n {
                        let target = &vn - table.value(l);
                        if !target.is_zero() && table.lookup_big(&target).is_some() {
                            count += 1;
                        }
                    }
                }
            }
            Ok(count)
        }
        CountMode::SmallestLessThanX => {
            let beta = alpha.beta();
            let cap = n_cap_override
                .unwrap_or_else(|| x.saturating_pow(beta.ceil() as u32 + 1));
            count_smallest(alpha, x, cap)
        }
    }
}

/// Ordered count with min(l, m) < x and n < cap, via 2 A - B where A bounds the
/// first summand and B bounds both.
fn count_smallest(alpha: &Alpha, x: u64, cap: u64) -> Result<u64, DioError> {
    if cap <= 1 {
        return Ok(0);
    }
    let a_f = alpha.to_f64();
    let table = MembershipTable::build(alpha, cap - 1)?;
    let vals = match &table {
        MembershipTable::Small(v) => v,
        MembershipTable::Big(_) => {
            return Err(DioError::CoefficientNotRational(
                "value range exceeds the u128 fast lane; lower x or the n-cap".into(),
            ))
        }
    };
    let mut a_count: u64 = 0;
    let mut b_count: u64 = 0;
    for l in 1..x.min(cap) as usize {
        let vl = vals[l - 1];
        // Beyond m_stop the gap v_{m+1} - v_m >= alpha m^(alpha-1) - 1 exceeds
        // v_l, so v_l + v_m falls strictly between consecutive values.
        let m_stop = (((vl as f64 + 1.0) / a_f).powf(1.0 / (a_f - 1.0)) * 1.02 + 10.0) as u64;
        let m_stop = m_stop.min(cap - 1) as usize;
        for m in 1..=m_stop {
            let target = vl + vals[m - 1];
            if vals.binary_search(&target).is_ok() {
                a_count += 1;
                if (m as u64) < x {
                    b_count += 1;
                }
            }
        }
    }
    Ok(2 * a_count - b_count)
}

/// Ordinary least squares of log(count) against log(x).
///
/// Returns (slope, intercept, residual), residual being the maximum absolute
/// log deviation.
pub fn fit_growth_exponent(points: &[(f64, f64)]) -> Result<(f64, f64, f64), DioError> {
    let pts: Vec<(f64, f64)> = points
        .iter()
        .filter(|(x, c)| *x > 0.0 && *c > 0.0)
        .map(|(x, c)| (x.ln(), c.ln()))
        .collect();
    if pts.len() < 3 {
        return Err(DioError::DegenerateFit);
    }
    let n = pts.len() as f64;
    let sx: f64 = pts.iter().map(|p| p.0).sum();
    let sy: f64 = pts.iter().map(|p| p.1).sum();
    let sxx: f64 = pts.iter().map(|p| p.0 * p.0).sum();
    let sxy: f64 = pts.iter().map(|p| p.0 * p.1).sum();
    let denom = n * sxx - sx * sx;
    if denom.abs() < 1e-12 {
        return Err(DioError::DegenerateFit);
    }
    let slope = (n * sxy - sx * sy) / denom;
    let intercept = (sy - slope * sx) / n;
    let residual = pts
        .iter()
        .map(|(x, y)| (y - slope * x - intercept).abs())
        .fold(0.0, f64::max);
    Ok((slope, intercept, residual))
}

/// The predicted solution-count growth for x + y = z at a given alpha:
/// count(x) ~ beta alpha^(-beta) zeta(beta) x^(alpha(beta-1)+1).
#[derive(Debug, Clone, serde::Serialize)]
pub struct GrowthModel {
    pub beta: f64,
    pub zeta_beta: f64,
    pub zeta_error_bound: f64,
    pub predicted_exponent: f64,
    pub leading_constant: f64,
}

impl GrowthModel {
    pub fn new(alpha: &Alpha) -> Self {
        let a = alpha.to_f64();
        let beta = 1.0 / (a - 1.0);
        let (zeta_beta, zeta_error_bound) = zeta_certified(beta, 1e-10);
        GrowthModel {
            beta,
            zeta_beta,
            zeta_error_bound,
            predicted_exponent: a * (beta - 1.0) + 1.0,
            leading_constant: beta * a.powf(-beta) * zeta_beta,
        }
    }
}

/// zeta(s) for s > 1 by direct series plus an integral tail bracket; the
/// returned error bound covers the bracket half-width.
pub fn zeta_certified(s: f64, tol: f64) -> (f64, f64) {
    assert!(s > 1.0, "zeta series needs s > 1");
    let mut n: u64 = 64;
    loop {
        let nf = n as f64;
        let half_width =
            (nf.powf(1.0 - s) - (nf + 1.0).powf(1.0 - s)) / (2.0 * (s - 1.0));
        if half_width <= tol / 2.0 || n >= 1 << 34 {
            // Kahan summation keeps the float error negligible next to the
            // bracket half-width.
            let mut sum = 0.0f64;
            let mut comp = 0.0f64;
            for k in 1..=n {
                let term = (k as f64).powf(-s);
                let y = term - comp;
                let t = sum + y;
                comp = (t - sum) - y;
                sum = t;
            }
            let tail_mid =
                ((nf + 1.0).powf(1.0 - s) + nf.powf(1.0 - s)) / (2.0 * (s - 1.0));
            return (sum + tail_mid, half_width + 1e-13 * sum.abs());
        }
        n *= 2;
    }
}
