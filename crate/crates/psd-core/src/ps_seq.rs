//! Piatetski-Shapiro prefixes and exact membership.
//!
//! A value m belongs to PS(alpha) exactly when the preimage interval
//! [m^(1/alpha), (m+1)^(1/alpha)) contains an integer; with rational alpha both
//! endpoint comparisons reduce to integer power comparisons, so membership is
//! decided exactly in O(1) root extractions per query.

use crate::rigor::{self, Alpha, RigorError};
use num_bigint::BigUint;
use num_traits::{One, Pow, ToPrimitive, Zero};
use rayon::prelude::*;

/// One term of the sequence: index n and value floor(n^alpha).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct PSTerm {
    pub n: u64,
    pub value: BigUint,
}

/// Prefixes beyond this length must go through [`ps_for_each`].
pub const MATERIALIZE_LIMIT: u64 = 10_000_000;

/// The first N terms, strictly increasing in value.
pub fn ps_range(alpha: &Alpha, n_max: u64) -> Result<Vec<PSTerm>, RigorError> {
    assert!(n_max >= 1, "prefix length must be positive");
    assert!(
        n_max <= MATERIALIZE_LIMIT,
        "prefix of {n_max} terms exceeds the materialization threshold; stream with ps_for_each"
    );
    const PAR_THRESHOLD: u64 = 4096;
    if n_max < PAR_THRESHOLD {
        (1..=n_max)
            .map(|n| Ok(PSTerm { n, value: rigor::floor_pow(&BigUint::from(n), alpha)? }))
            .collect()
    } else {
        // Disjoint index blocks; concatenation order is fixed by block index,
        // so the result does not depend on the worker count.
        let block = 8192u64;
        let blocks: Vec<(u64, u64)> = (1..=n_max)
            .step_by(block as usize)
            .map(|start| (start, (start + block - 1).min(n_max)))
            .collect();
        let parts: Result<Vec<Vec<PSTerm>>, RigorError> = blocks
            .into_par_iter()
            .map(|(lo, hi)| {
                (lo..=hi)
                    .map(|n| Ok(PSTerm { n, value: rigor::floor_pow(&BigUint::from(n), alpha)? }))
                    .collect()
            })
            .collect();
        Ok(parts?.into_iter().flatten().collect())
    }
}

/// Streaming generation over an index range, in order, without materializing.
pub fn ps_for_each(
    alpha: &Alpha,
    range: std::ops::RangeInclusive<u64>,
    mut f: impl FnMut(PSTerm) -> Result<(), RigorError>,
) -> Result<(), RigorError> {
    for n in range {
        let value = rigor::floor_pow(&BigUint::from(n), alpha)?;
        f(PSTerm { n, value })?;
    }
    Ok(())
}

/// The unique n with floor(n^alpha) = m, if any.
pub fn is_member(m: &BigUint, alpha: &Alpha) -> Result<Option<u64>, RigorError> {
    assert!(!m.is_zero(), "membership is asked for positive values");
    let p = alpha.numer_u32();
    let q = alpha.denom_u32();
    // Candidate n0 = ceil(m^(q/p)), the least integer in the preimage.
    let mq = m.pow(q);
    let c = rigor::nth_root_floor(&mq, p);
    let n0 = if c.clone().pow(p) == mq { c } else { c + BigUint::one() };
    // Member iff n0 < (m+1)^(q/p), i.e. n0^p < (m+1)^q.
    if n0.clone().pow(p) < (m + BigUint::one()).pow(q) {
        Ok(Some(n0.to_u64().expect("preimage index fits u64 at desk scale")))
    } else {
        Ok(None)
    }
}

/// Sorted value table for bulk membership queries.
///
/// The search module issues ~N^2 queries against a bounded value range; a
/// generated prefix answers each by binary search with no root extraction.
#[derive(Debug, Clone)]
pub enum MembershipTable {
    Small(Vec<u128>),
    Big(Vec<BigUint>),
}

impl MembershipTable {
    pub fn build(alpha: &Alpha, n_max: u64) -> Result<MembershipTable, RigorError> {
        let terms = ps_range(alpha, n_max)?;
        let fits = terms.last().map(|t| t.value.to_u128().is_some()).unwrap_or(true);
        if fits {
            Ok(MembershipTable::Small(terms.iter().map(|t| t.value.to_u128().unwrap()).collect()))
        } else {
            Ok(MembershipTable::Big(terms.into_iter().map(|t| t.value).collect()))
        }
    }

    pub fn len(&self) -> usize {
        match self {
            MembershipTable::Small(v) => v.len(),
            MembershipTable::Big(v) => v.len(),
        }
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn max_value_u128(&self) -> Option<u128> {
        match self {
            MembershipTable::Small(v) => v.last().copied(),
            MembershipTable::Big(v) => v.last().and_then(|b| b.to_u128()),
        }
    }

    /// Index n with value_n == v, for v within the covered range.
    pub fn lookup_u128(&self, v: u128) -> Option<u64> {
        match self {
            MembershipTable::Small(t) => t.binary_search(&v).ok().map(|i| i as u64 + 1),
            MembershipTable::Big(t) => {
                let vb = BigUint::from(v);
                t.binary_search(&vb).ok().map(|i| i as u64 + 1)
            }
        }
    }

    pub fn lookup_big(&self, v: &BigUint) -> Option<u64> {
        match self {
            MembershipTable::Small(t) => {
                let vv = v.to_u128()?;
                t.binary_search(&vv).ok().map(|i| i as u64 + 1)
            }
            MembershipTable::Big(t) => t.binary_search(v).ok().map(|i| i as u64 + 1),
        }
    }

    pub fn value(&self, n: u64) -> BigUint {
        match self {
            MembershipTable::Small(t) => BigUint::from(t[n as usize - 1]),
            MembershipTable::Big(t) => t[n as usize - 1].clone(),
        }
    }

    pub fn value_u128(&self, n: u64) -> Option<u128> {
        match self {
            MembershipTable::Small(t) => Some(t[n as usize - 1]),
            MembershipTable::Big(t) => t[n as usize - 1].to_u128(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rigor::{eval_pow_interval, contains_integer, BoundedReal};

    fn alpha(p: u32, q: u32) -> Alpha {
        Alpha::from_rational(p, q).unwrap()
    }

    #[test]
    fn prefix_examples() {
        let vals: Vec<u64> = ps_range(&alpha(3, 2), 5)
            .unwrap()
            .iter()
            .map(|t| t.value.to_u64().unwrap())
            .collect();
        assert_eq!(vals, vec![1, 2, 5, 8, 11]);

        let vals: Vec<u64> = ps_range(&alpha(5, 2), 3)
            .unwrap()
            .iter()
            .map(|t| t.value.to_u64().unwrap())
            .collect();
        assert_eq!(vals, vec![1, 5, 15]);

        let vals = ps_range(&alpha(7, 3), 1).unwrap();
        assert_eq!(vals[0].value, BigUint::one());
    }

    #[test]
    fn prefix_strictly_increasing() {
        for a in [alpha(3, 2), alpha(7, 5), alpha(7, 2)] {
            let terms = ps_range(&a, 500).unwrap();
            for w in terms.windows(2) {
                assert!(w[0].value < w[1].value, "not strictly increasing at n={}", w[0].n);
            }
        }
    }

    #[test]
    fn member_examples() {
        let a = alpha(3, 2);
        assert_eq!(is_member(&BigUint::from(11u32), &a).unwrap(), Some(5));
        assert_eq!(is_member(&BigUint::from(3u32), &a).unwrap(), None);
        assert_eq!(is_member(&BigUint::from(1u32), &a).unwrap(), Some(1));
        assert_eq!(is_member(&BigUint::from(1u32), &alpha(9, 4)).unwrap(), Some(1));
    }

    #[test]
    fn member_round_trip() {
        for a in [alpha(3, 2), alpha(7, 5)] {
            for n in 1u64..2000 {
                let v = rigor::floor_pow(&BigUint::from(n), &a).unwrap();
                assert_eq!(is_member(&v, &a).unwrap(), Some(n), "round trip failed at n={n}");
            }
        }
    }

    #[test]
    fn member_completeness_against_prefix() {
        let a = alpha(3, 2);
        let terms = ps_range(&a, 40).unwrap();
        let set: std::collections::HashSet<u64> =
            terms.iter().map(|t| t.value.to_u64().unwrap()).collect();
        let max = terms.last().unwrap().value.to_u64().unwrap();
        for m in 1..=max {
            let got = is_member(&BigUint::from(m), &a).unwrap();
            assert_eq!(got.is_some(), set.contains(&m), "mismatch at m={m}");
        }
    }

    #[test]
    fn member_agrees_with_interval_route() {
        // Dual route: bracket the preimage [m^(1/a), (m+1)^(1/a)) with rigorous
        // enclosures and locate the integer with contains_integer.
        let a = alpha(7, 5);
        let inv = Alpha::from_rational(5u32, 7u32);
        assert!(inv.is_err()); // 1/alpha is not a valid exponent; build enclosures directly.
        for m in 1u64..400 {
            let bits = 96;
            let p = a.numer_u32();
            let q = a.denom_u32();
            // m^(q/p) enclosure via scaled integer root.
            let enc = |x: u64| -> BoundedReal {
                let scaled = BigUint::from(x).pow(q) << (p as u64 * bits as u64);
                let k = rigor::nth_root_floor(&scaled, p);
                BoundedReal::new(
                    crate::rigor::Dyadic::new(num_bigint::BigInt::from(k.clone()), -(bits as i64)),
                    crate::rigor::Dyadic::new(num_bigint::BigInt::from(k + 1u32), -(bits as i64)),
                    bits,
                )
            };
            let lo = enc(m);
            let hi = enc(m + 1);
            let via_interval = contains_integer(&lo, &hi, true).unwrap();
            let direct = is_member(&BigUint::from(m), &a).unwrap();
            assert_eq!(via_interval.map(|n| n.to_u64().unwrap()), direct, "m={m}");
        }
    }

    #[test]
    fn membership_table_lookup() {
        let a = alpha(3, 2);
        let table = MembershipTable::build(&a, 300).unwrap();
        assert_eq!(table.lookup_u128(11), Some(5));
        assert_eq!(table.lookup_u128(3), None);
        for n in 1..=300u64 {
            let v = table.value_u128(n).unwrap();
            assert_eq!(table.lookup_u128(v), Some(n));
        }
    }

    #[test]
    fn enclosure_width_meets_contract() {
        let a = alpha(7, 5);
        for n in [1u64, 17, 999] {
            let enc = eval_pow_interval(&BigUint::from(n), &a, 80);
            assert!(enc.width().to_f64() <= 2.0_f64.powi(-80));
        }
    }
}
