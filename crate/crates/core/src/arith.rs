//! Exact integer arithmetic for filtration dimension counts.
//!
//! The graded layers of the mod-p dimension subgroup filtration of a free
//! group of rank r have dimensions given by sums of necklace numbers
//! (Witt's formula).  Everything in this module is exact: dimensions are
//! arbitrary-precision integers and the inequality scanner compares
//! integer cross-products, never floating point ratios.

use num_bigint::BigInt;
use num_traits::{Signed, Zero};

/// Moebius function.  `1` on squarefree n with an even number of prime
/// factors, `-1` on squarefree n with an odd number, `0` otherwise.
///
/// Panics on `n = 0`.
pub fn moebius(n: u64) -> i32 {
    assert!(n >= 1, "moebius(0) is undefined");
    let mut n = n;
    let mut factors = 0u32;
    let mut d = 2u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            n /= d;
            if n.is_multiple_of(d) {
                return 0;
            }
            factors += 1;
        }
        d += 1;
    }
    if n > 1 {
        factors += 1;
    }
    if factors.is_multiple_of(2) {
        1
    } else {
        -1
    }
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    assert!(n >= 1);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut d = 1u64;
    while d * d <= n {
        if n.is_multiple_of(d) {
            small.push(d);
            if d * d != n {
                large.push(n / d);
            }
        }
        d += 1;
    }
    large.reverse();
    small.extend(large);
    small
}

/// Deterministic primality test by trial division; fine for the word
/// sizes used here (characteristics are tiny, caps are explicit).
pub fn is_prime(p: u64) -> bool {
    if p < 2 {
        return false;
    }
    let mut d = 2u64;
    while d * d <= p {
        if p.is_multiple_of(d) {
            return false;
        }
        d += 1;
    }
    true
}

/// Necklace number `w_n(r) = (1/n) * sum_{m | n} mu(m) r^{n/m}`: the
/// number of Lyndon words of length n over an r-letter alphabet, equally
/// the rank of the degree-n part of the free Lie ring on r generators.
///
/// The division is checked to be exact; a remainder would mean a broken
/// Moebius sum, so it panics.
pub fn witt(r: u64, n: u64) -> BigInt {
    assert!(r >= 1, "rank must be positive");
    assert!(n >= 1, "degree must be positive");
    let mut sum = BigInt::zero();
    for m in divisors(n) {
        let mu = moebius(m);
        if mu != 0 {
            sum += BigInt::from(mu) * BigInt::from(r).pow((n / m) as u32);
        }
    }
    let q = &sum / &BigInt::from(n);
    let rem = &sum - &q * &BigInt::from(n);
    assert!(
        rem.is_zero(),
        "necklace sum not divisible by n at r={r}, n={n}"
    );
    assert!(!q.is_negative(), "necklace count negative at r={r}, n={n}");
    q
}

/// Dimension of the n-th graded layer of the mod-p dimension subgroup
/// filtration of a free group of rank r.
///
/// Writing `n = p^k * m` with `p` not dividing `m`, the layer dimension
/// is `sum_{i=0}^{k} w_{p^i * m}(r)`.  In particular it equals `witt(r, n)`
/// whenever `p` does not divide `n`.
///
/// Panics if `p` is not prime.
pub fn zassenhaus_dim(r: u64, n: u64, p: u64) -> BigInt {
    assert!(is_prime(p), "p={p} is not prime");
    assert!(n >= 1, "layer index must be positive");
    let mut m = n;
    while m.is_multiple_of(p) {
        m /= p;
    }
    let mut sum = BigInt::zero();
    let mut t = m;
    loop {
        sum += witt(r, t);
        if t == n {
            break;
        }
        t *= p;
    }
    sum
}

/// `log_p` of the index of the (n+1)-st filtration subgroup: the sum of
/// the layer dimensions `c_1 + ... + c_n`.
pub fn cumulative_log_index(r: u64, n: u64, p: u64) -> BigInt {
    assert!(n >= 1, "need at least one layer");
    (1..=n).map(|k| zassenhaus_dim(r, k, p)).sum()
}

/// Per-layer record produced by [`scan_growth_inequalities`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthScanRow {
    pub n: u64,
    /// Layer dimension `c_n`.
    pub dim: BigInt,
    /// Running total `c_1 + ... + c_n`.
    pub cumulative: BigInt,
    /// Whether `2n * c_n >= r^n` holds at this layer.
    pub dim_bound_holds: bool,
    /// Whether `15 * c_n > c_1 + ... + c_n` holds at this layer.
    pub share_bound_holds: bool,
}

/// Empirical findings for one inequality over the scanned range.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct InequalityFindings {
    /// Smallest `n0` such that the inequality holds for every
    /// `n` in `[n0, n_max]`; `None` if it fails at `n_max` itself.
    pub threshold: Option<u64>,
    /// Every `n` in the scanned range where the inequality fails.
    pub exceptions: Vec<u64>,
}

impl InequalityFindings {
    fn from_failures(failures: Vec<u64>, n_max: u64) -> Self {
        let threshold = match failures.last() {
            None => Some(1),
            Some(&last) if last < n_max => Some(last + 1),
            Some(_) => None,
        };
        InequalityFindings {
            threshold,
            exceptions: failures,
        }
    }
}

/// Report of [`scan_growth_inequalities`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GrowthScan {
    pub r: u64,
    pub p: u64,
    pub n_max: u64,
    pub rows: Vec<GrowthScanRow>,
    /// Findings for `2n * c_n >= r^n` (each layer is at least a
    /// `1/(2n)`-th of the ambient word count).
    pub dim_bound: InequalityFindings,
    /// Findings for `15 * c_n > c_1 + ... + c_n` (each layer carries more
    /// than a fifteenth of the cumulative dimension).
    pub share_bound: InequalityFindings,
}

impl GrowthScan {
    pub fn to_json(&self) -> serde_json::Value {
        let findings = |f: &InequalityFindings| {
            serde_json::json!({
                "threshold": f.threshold,
                "exceptions": f.exceptions,
            })
        };
        serde_json::json!({
            "r": self.r,
            "p": self.p,
            "n_max": self.n_max,
            "rows": self.rows.iter().map(|row| {
                serde_json::json!({
                    "n": row.n,
                    "dim": row.dim.to_string(),
                    "cumulative": row.cumulative.to_string(),
                    "dim_bound_holds": row.dim_bound_holds,
                    "share_bound_holds": row.share_bound_holds,
                })
            }).collect::<Vec<_>>(),
            "dim_bound": findings(&self.dim_bound),
            "share_bound": findings(&self.share_bound),
        })
    }
}

/// Scan two exact growth inequalities for the layer dimensions `c_n` of
/// the rank-r free group over layers `1..=n_max`:
///
/// * dimension bound: `2n * c_n >= r^n`
/// * share bound: `15 * c_n > c_1 + ... + c_n`
///
/// Both sides are compared as exact integers.  For each inequality the
/// report records the smallest `n0` past which it holds through `n_max`
/// together with every exception below it.
///
/// Panics unless `n_max >= 2` and `p` is prime.
pub fn scan_growth_inequalities(r: u64, p: u64, n_max: u64) -> GrowthScan {
    assert!(n_max >= 2, "a scan needs at least two layers");
    assert!(is_prime(p), "p={p} is not prime");
    assert!(r >= 1, "rank must be positive");
    let mut rows = Vec::with_capacity(n_max as usize);
    let mut cumulative = BigInt::zero();
    let mut dim_failures = Vec::new();
    let mut share_failures = Vec::new();
    for n in 1..=n_max {
        let dim = zassenhaus_dim(r, n, p);
        cumulative += &dim;
        let dim_bound_holds = BigInt::from(2 * n) * &dim >= BigInt::from(r).pow(n as u32);
        let share_bound_holds = BigInt::from(15) * &dim > cumulative;
        if !dim_bound_holds {
            dim_failures.push(n);
        }
        if !share_bound_holds {
            share_failures.push(n);
        }
        rows.push(GrowthScanRow {
            n,
            dim,
            cumulative: cumulative.clone(),
            dim_bound_holds,
            share_bound_holds,
        });
    }
    GrowthScan {
        r,
        p,
        n_max,
        rows,
        dim_bound: InequalityFindings::from_failures(dim_failures, n_max),
        share_bound: InequalityFindings::from_failures(share_failures, n_max),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Independent route to the necklace numbers: recurse on the identity
    /// `sum_{d | n} d * w_d(r) = r^n` instead of Moebius inversion.
    fn witt_by_necklace_recursion(r: u64, n: u64) -> BigInt {
        let mut sum = BigInt::zero();
        for d in divisors(n) {
            if d < n {
                sum += BigInt::from(d) * witt_by_necklace_recursion(r, d);
            }
        }
        let numerator = BigInt::from(r).pow(n as u32) - sum;
        let q = &numerator / &BigInt::from(n);
        assert_eq!(&q * &BigInt::from(n), numerator);
        q
    }

    #[test]
    fn moebius_small_values() {
        assert_eq!(moebius(1), 1);
        assert_eq!(moebius(2), -1);
        assert_eq!(moebius(3), -1);
        assert_eq!(moebius(4), 0);
        assert_eq!(moebius(6), 1);
        assert_eq!(moebius(12), 0);
        assert_eq!(moebius(30), -1);
    }

    #[test]
    #[should_panic(expected = "moebius(0)")]
    fn moebius_rejects_zero() {
        moebius(0);
    }

    #[test]
    fn divisors_are_sorted_and_complete() {
        assert_eq!(divisors(1), vec![1]);
        assert_eq!(divisors(12), vec![1, 2, 3, 4, 6, 12]);
        assert_eq!(divisors(36), vec![1, 2, 3, 4, 6, 9, 12, 18, 36]);
    }

    #[test]
    fn witt_small_values() {
        assert_eq!(witt(2, 1), BigInt::from(2));
        assert_eq!(witt(2, 2), BigInt::from(1));
        assert_eq!(witt(2, 3), BigInt::from(2));
        assert_eq!(witt(2, 4), BigInt::from(3));
        assert_eq!(witt(2, 6), BigInt::from(9));
        assert_eq!(witt(3, 4), BigInt::from(18));
    }

    #[test]
    fn witt_rank_one_vanishes_beyond_degree_one() {
        assert_eq!(witt(1, 1), BigInt::from(1));
        for n in 2..=20 {
            assert_eq!(witt(1, n), BigInt::zero(), "degree {n}");
        }
    }

    #[test]
    fn witt_matches_necklace_recursion() {
        for r in 1..=5 {
            for n in 1..=20 {
                assert_eq!(
                    witt(r, n),
                    witt_by_necklace_recursion(r, n),
                    "r={r}, n={n}"
                );
            }
        }
    }

    #[test]
    fn necklace_identity() {
        for r in 1..=5u64 {
            for n in 1..=30u64 {
                let total: BigInt = divisors(n)
                    .into_iter()
                    .map(|d| BigInt::from(d) * witt(r, d))
                    .sum();
                assert_eq!(total, BigInt::from(r).pow(n as u32), "r={r}, n={n}");
            }
        }
    }

    #[test]
    fn witt_strictly_increasing_in_rank() {
        for n in 1..=12 {
            for r in 1..=4 {
                assert!(witt(r + 1, n) > witt(r, n), "r={r}, n={n}");
            }
        }
    }

    #[test]
    fn layer_dims_small_values() {
        assert_eq!(zassenhaus_dim(2, 1, 2), BigInt::from(2));
        assert_eq!(zassenhaus_dim(2, 2, 2), BigInt::from(3));
        // 4 = 2^2, so the layer collects w_1 + w_2 + w_4 = 2 + 1 + 3.
        assert_eq!(zassenhaus_dim(2, 4, 2), BigInt::from(6));
        // 6 = 2 * 3 collects w_3 + w_6 = 2 + 9.
        assert_eq!(zassenhaus_dim(2, 6, 2), BigInt::from(11));
        assert_eq!(zassenhaus_dim(2, 3, 3), BigInt::from(4));
    }

    #[test]
    fn layer_dim_equals_witt_away_from_p() {
        for r in 1..=4u64 {
            for p in [2u64, 3, 5] {
                for n in 1..=24u64 {
                    if n % p != 0 {
                        assert_eq!(zassenhaus_dim(r, n, p), witt(r, n), "r={r}, n={n}, p={p}");
                    }
                }
            }
        }
    }

    #[test]
    fn layer_dims_nondecreasing_in_rank() {
        for p in [2u64, 3] {
            for n in 1..=16 {
                for r in 1..=4 {
                    assert!(
                        zassenhaus_dim(r + 1, n, p) >= zassenhaus_dim(r, n, p),
                        "r={r}, n={n}, p={p}"
                    );
                }
            }
        }
    }

    #[test]
    #[should_panic(expected = "not prime")]
    fn layer_dim_rejects_composite_characteristic() {
        zassenhaus_dim(2, 3, 6);
    }

    #[test]
    fn cumulative_log_index_small_values() {
        assert_eq!(cumulative_log_index(2, 1, 2), BigInt::from(2));
        assert_eq!(cumulative_log_index(2, 2, 2), BigInt::from(5));
        assert_eq!(cumulative_log_index(2, 3, 2), BigInt::from(7));
    }

    #[test]
    fn rank_one_layers_detect_p_powers() {
        for p in [2u64, 3, 5] {
            for n in 1..=30u64 {
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                let expect = if m == 1 { 1 } else { 0 };
                assert_eq!(zassenhaus_dim(1, n, p), BigInt::from(expect), "n={n}, p={p}");
            }
        }
    }

    #[test]
    fn scan_spot_checks() {
        let scan = scan_growth_inequalities(2, 2, 8);
        let row1 = &scan.rows[0];
        assert_eq!(row1.dim, BigInt::from(2));
        assert!(row1.dim_bound_holds, "2*1*2 >= 2");
        let row6 = &scan.rows[5];
        assert_eq!(row6.dim, BigInt::from(11));
        assert!(row6.dim_bound_holds, "2*6*11 = 132 >= 64");
    }

    /// Unoptimized second path: rebuild every scanned comparison from the
    /// recursion-based necklace numbers and plain summation.
    #[test]
    fn scan_matches_naive_recomputation() {
        for (r, p) in [(2u64, 2u64), (3, 2), (2, 3), (5, 3)] {
            let n_max = 24;
            let scan = scan_growth_inequalities(r, p, n_max);
            let mut cumulative = BigInt::zero();
            for n in 1..=n_max {
                let mut m = n;
                while m % p == 0 {
                    m /= p;
                }
                let mut dim = BigInt::zero();
                let mut t = m;
                loop {
                    dim += witt_by_necklace_recursion(r, t);
                    if t == n {
                        break;
                    }
                    t *= p;
                }
                cumulative += &dim;
                let row = &scan.rows[(n - 1) as usize];
                assert_eq!(row.dim, dim, "r={r}, p={p}, n={n}");
                assert_eq!(row.cumulative, cumulative, "r={r}, p={p}, n={n}");
                assert_eq!(
                    row.dim_bound_holds,
                    BigInt::from(2 * n) * &dim >= BigInt::from(r).pow(n as u32),
                    "r={r}, p={p}, n={n}"
                );
                assert_eq!(
                    row.share_bound_holds,
                    BigInt::from(15) * &dim > cumulative,
                    "r={r}, p={p}, n={n}"
                );
            }
        }
    }

    #[test]
    fn scan_threshold_semantics() {
        let f = InequalityFindings::from_failures(vec![], 10);
        assert_eq!(f.threshold, Some(1));
        let f = InequalityFindings::from_failures(vec![1, 3], 10);
        assert_eq!(f.threshold, Some(4));
        let f = InequalityFindings::from_failures(vec![2, 10], 10);
        assert_eq!(f.threshold, None);
    }

    #[test]
    #[should_panic(expected = "at least two layers")]
    fn scan_rejects_single_layer() {
        scan_growth_inequalities(2, 2, 1);
    }

    #[test]
    fn scan_json_uses_decimal_strings() {
        let scan = scan_growth_inequalities(2, 2, 3);
        let v = scan.to_json();
        assert_eq!(v["rows"][1]["dim"], serde_json::json!("3"));
        assert_eq!(v["dim_bound"]["exceptions"], serde_json::json!([]));
    }

    proptest::proptest! {
        /// The necklace identity `sum_{d | n} d * w_d(r) = r^n` pins the
        /// whole Witt table, not just the frozen small values.
        #[test]
        fn witt_satisfies_the_necklace_identity(r in 1u64..=12, n in 1u64..=12) {
            let mut sum = BigInt::zero();
            for d in divisors(n) {
                sum += BigInt::from(d) * witt(r, d);
            }
            proptest::prop_assert_eq!(sum, BigInt::from(r).pow(n as u32));
        }

        /// Layer dimensions telescope along division by p: stripping one
        /// factor of p from n drops exactly the top Witt summand.
        #[test]
        fn layer_dims_telescope_along_p(r in 1u64..=12, n in 1u64..=15, p_idx in 0usize..3) {
            let p = [2u64, 3, 5][p_idx];
            let expected = if n.is_multiple_of(p) {
                witt(r, n) + zassenhaus_dim(r, n / p, p)
            } else {
                witt(r, n)
            };
            proptest::prop_assert_eq!(zassenhaus_dim(r, n, p), expected);
        }
    }
}
