//! Membership in the obstruction set `A_n`.
//!
//! `d ∈ A_n` exactly when `k(n, d) ≥ |r(n, d)| + 1` for the balanced division
//! `n = k·d + r`. Everything here is a thin layer over [`balanced_division`].

use serde::{Deserialize, Serialize};

use crate::arith::{balanced_division, positive, ArithError};

/// `A_n` restricted to its members, ascending. Every member is at most `n`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ObstructionSet {
    pub n: u64,
    pub members: Vec<u64>,
}

impl ObstructionSet {
    pub fn contains(&self, d: u64) -> bool {
        self.members.binary_search(&d).is_ok()
    }

    pub fn len(&self) -> usize {
        self.members.len()
    }

    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }
}

/// Whether every walk with a real difference `n` also has the real difference `d`.
pub fn is_unavoidable(n: u64, d: u64) -> Result<bool, ArithError> {
    let bd = balanced_division(n, d)?;
    Ok(bd.k as i128 > bd.r.unsigned_abs() as i128)
}

/// `A_n`, enumerated over `d = 1..=n`.
///
/// No `d > n` can be a member: for `n < d ≤ 2n` the division is
/// `n = 1·d - (d - n)` and `1 < d - n + 1`, and beyond `2n` the quotient is 0.
pub fn obstruction_set(n: u64) -> Result<ObstructionSet, ArithError> {
    positive("n", n)?;
    let mut members = Vec::new();
    for d in 1..=n {
        if is_unavoidable(n, d)? {
            members.push(d);
        }
    }
    Ok(ObstructionSet { n, members })
}

/// `2n ≥ d²`, which is enough to force `d ∈ A_n`.
pub fn guaranteed_by_halfsquare(n: u64, d: u64) -> bool {
    2 * n as u128 >= (d as u128) * (d as u128)
}

/// Whether a walk containing the complex difference `n + ih` must contain the
/// real difference `d`, via `k(n, d) ≥ |r(n, d)| + |h| + 1`.
///
/// With `h = 0` this is [`is_unavoidable`].
pub fn forces_from_complex(n: u64, h: i64, d: u64) -> Result<bool, ArithError> {
    let bd = balanced_division(n, d)?;
    Ok(bd.k as i128 > bd.r.unsigned_abs() as i128 + h.unsigned_abs() as i128)
}
