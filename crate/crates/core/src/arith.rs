//! Exact integer arithmetic.
//!
//! Every comparison against `√(2n)`, `√(n/2)` or `(n+1)/(√(2n)+1)` is decided
//! by squaring both sides in `u128` with the sign of each side checked first.
//! No floating point is used anywhere in this module, so the results are exact
//! for all `n, d < 2^62`.

use serde::{Deserialize, Serialize};
use thiserror::Error;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ArithError {
    #[error("{name} must be a positive integer, got {value}")]
    NonPositive { name: &'static str, value: i128 },
}

/// `n = k·d + r` with `r` in the balanced window `[-⌊d/2⌋, ⌈d/2⌉ - 1]`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct BalancedDivision {
    pub n: u64,
    pub d: u64,
    pub k: u64,
    pub r: i64,
}

impl BalancedDivision {
    /// `k - |r|`, the quantity whose sign decides membership.
    pub fn margin(&self) -> i64 {
        self.k as i64 - self.r.abs()
    }
}

/// Lowest admissible balanced remainder for divisor `d`, i.e. `-⌊d/2⌋`.
pub fn remainder_floor(d: u64) -> i64 {
    -((d / 2) as i64)
}

/// Highest admissible balanced remainder for divisor `d`, i.e. `⌈d/2⌉ - 1`.
pub fn remainder_ceil(d: u64) -> i64 {
    (d.div_ceil(2) as i64) - 1
}

pub(crate) fn positive(name: &'static str, value: u64) -> Result<u64, ArithError> {
    if value == 0 {
        Err(ArithError::NonPositive { name, value: 0 })
    } else {
        Ok(value)
    }
}

/// Converts a signed CLI-style argument into a positive integer.
pub fn require_positive(name: &'static str, value: i64) -> Result<u64, ArithError> {
    if value <= 0 {
        Err(ArithError::NonPositive {
            name,
            value: value as i128,
        })
    } else {
        Ok(value as u64)
    }
}

/// The unique `(k, r)` with `n = k·d + r` and `r ∈ [-⌊d/2⌋, ⌈d/2⌉ - 1]`.
///
/// For even `d` the window is asymmetric: `r = -d/2` is representable and
/// `r = d/2` is not.
pub fn balanced_division(n: u64, d: u64) -> Result<BalancedDivision, ArithError> {
    positive("n", n)?;
    positive("d", d)?;
    let q = n / d;
    let rem = n % d;
    let (k, r) = if (rem as i64) <= remainder_ceil(d) {
        (q, rem as i64)
    } else {
        (q + 1, rem as i64 - d as i64)
    };
    Ok(BalancedDivision { n, d, k, r })
}

/// `⌊√m⌋` by integer Newton iteration.
pub fn isqrt(m: u64) -> u64 {
    isqrt_u128(m as u128) as u64
}

pub(crate) fn isqrt_u128(m: u128) -> u128 {
    if m < 2 {
        return m;
    }
    // Start above the root so the iteration decreases monotonically.
    let bits = 128 - m.leading_zeros();
    let mut x: u128 = 1 << bits.div_ceil(2);
    loop {
        let y = (x + m / x) / 2;
        if y >= x {
            return x;
        }
        x = y;
    }
}

/// `q·(√(2n) + 1) ≤ n + 1`, decided exactly.
fn ratio_at_most(q: u64, n: u64) -> bool {
    let n = n as u128;
    let q = q as u128;
    if q > n + 1 {
        return false;
    }
    2 * n * q * q <= (n + 1 - q) * (n + 1 - q)
}

/// `q·(√(2n) + 1) < n + 1`, decided exactly.
pub fn below_ratio(q: u64, n: u64) -> bool {
    let n = n as u128;
    let q = q as u128;
    if q > n {
        return false;
    }
    2 * n * q * q < (n + 1 - q) * (n + 1 - q)
}

/// `k ≥ (n + 1)/(√(2n) + 1)`, the lower edge of the correction band.
pub fn at_or_above_ratio(k: u64, n: u64) -> bool {
    !below_ratio(k, n)
}

/// Largest `q` satisfying the monotone predicate `ok`, searching `[0, hi]`.
/// Requires `ok(0)`.
fn last_true(hi: u64, ok: impl Fn(u64) -> bool) -> u64 {
    let (mut lo, mut hi) = (0u64, hi);
    while lo < hi {
        let mid = lo + (hi - lo).div_ceil(2);
        if ok(mid) {
            lo = mid;
        } else {
            hi = mid - 1;
        }
    }
    lo
}

/// `⌊(n + 1)/(√(2n) + 1)⌋`.
pub fn floor_ratio(n: u64) -> Result<u64, ArithError> {
    positive("n", n)?;
    // The ratio is below √(n/2) + 1, so this bracket is safe.
    Ok(last_true(isqrt(n) + 2, |q| ratio_at_most(q, n)))
}

/// Number of integers `k ≥ 1` with `k < (n + 1)/(√(2n) + 1)`.
///
/// Equals [`floor_ratio`] unless the ratio is itself an integer, which only
/// happens at `n = 2`.
pub fn count_below_ratio(n: u64) -> Result<u64, ArithError> {
    positive("n", n)?;
    Ok(last_true(isqrt(n) + 2, |q| q == 0 || below_ratio(q, n)))
}

/// `d > √(2n)`, i.e. `d² > 2n`.
pub fn exceeds_sqrt2n(d: u64, n: u64) -> bool {
    (d as u128) * (d as u128) > 2 * n as u128
}

/// `k < √(n/2) + 1/2`, i.e. `(2k - 1)² < 2n` for `k ≥ 1`.
pub fn k_below_upper(k: u64, n: u64) -> bool {
    if k == 0 {
        return true;
    }
    let t = 2 * k as u128 - 1;
    t * t < 2 * n as u128
}

/// All positive divisors of `n`, ascending.
pub fn divisors(n: u64) -> Vec<u64> {
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while (i as u128) * (i as u128) <= n as u128 {
        if n.is_multiple_of(i) {
            small.push(i);
            if i != n / i {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

fn mul_mod(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

fn pow_mod(mut base: u64, mut exp: u64, m: u64) -> u64 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

/// Deterministic primality for all `u64`.
///
/// Small factors are stripped by trial division; the remainder goes through
/// Miller-Rabin with the first twelve prime bases, which is exact below 3.3·10^24.
pub fn is_prime(n: u64) -> bool {
    const BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];
    if n < 2 {
        return false;
    }
    for &p in &BASES {
        if n.is_multiple_of(p) {
            return n == p;
        }
    }
    let mut s = 0;
    let mut odd = n - 1;
    while odd.is_multiple_of(2) {
        odd /= 2;
        s += 1;
    }
    'witness: for &a in &BASES {
        let mut x = pow_mod(a, odd, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mul_mod(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}
