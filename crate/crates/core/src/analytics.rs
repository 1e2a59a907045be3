//! Cardinality of `A_n` and the divisor-neighbourhood classifications.

use std::collections::BTreeSet;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::arith::{
    at_or_above_ratio, balanced_division, below_ratio, count_below_ratio, divisors, exceeds_sqrt2n,
    is_prime, isqrt, k_below_upper, positive, ArithError,
};
use crate::construction::{avoiding_walk, CertificateDocument, ConstructionError};
use crate::membership::{is_unavoidable, obstruction_set};
use crate::walks::{RowIndex, Walk, WalkDocument};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum AnalyticsError {
    #[error(transparent)]
    Arith(#[from] ArithError),
    #[error(transparent)]
    Construction(#[from] ConstructionError),
    #[error("cardinality formula gives {formula} for n = {n}, enumeration gives {enumerated}")]
    FormulaMismatch { n: u64, formula: u64, enumerated: u64 },
    #[error("case analysis failed for n = {n}, K = {k}: {reason}")]
    CaseAnalysis { n: u64, k: u64, reason: String },
}

/// The summands of `|A_n|`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct CardinalityBreakdown {
    pub n: u64,
    pub floor_sqrt2n: u64,
    /// Twice the number of `k ≥ 1` strictly below `(n+1)/(√(2n)+1)`.
    pub twice_floor_ratio: u64,
    pub small_divisor_count: u64,
    pub theta: u64,
    pub total: u64,
}

/// Members `d > √(2n)` of `A_n` whose quotient lies in `[(n+1)/(√(2n)+1), √(n/2)+1/2)`.
///
/// The band is narrower than 1, so at most one `k` qualifies, and each `k`
/// is the quotient of at most two `d`.
pub fn theta(n: u64) -> Result<u64, ArithError> {
    let first = count_below_ratio(n)? + 1;
    let mut hits = BTreeSet::new();
    for k in (first..first + 2).filter(|&k| at_or_above_ratio(k, n) && k_below_upper(k, n)) {
        let centre = n / k;
        for d in centre.saturating_sub(1).max(1)..=centre + 2 {
            if exceeds_sqrt2n(d, n) && balanced_division(n, d)?.k == k && is_unavoidable(n, d)? {
                hits.insert(d);
            }
        }
    }
    Ok(hits.len() as u64)
}

/// Computes every summand independently, then checks the total against the
/// enumerated obstruction set.
pub fn cardinality_breakdown(n: u64) -> Result<CardinalityBreakdown, AnalyticsError> {
    positive("n", n)?;
    let floor_sqrt2n = isqrt(2 * n);
    let twice_floor_ratio = 2 * count_below_ratio(n)?;
    let small_divisor_count = divisors(n).into_iter().filter(|&d| below_ratio(d, n)).count() as u64;
    let theta = theta(n)?;
    let total = floor_sqrt2n + twice_floor_ratio - small_divisor_count + theta;
    let enumerated = obstruction_set(n)?.len() as u64;
    if total != enumerated {
        return Err(AnalyticsError::FormulaMismatch {
            n,
            formula: total,
            enumerated,
        });
    }
    Ok(CardinalityBreakdown {
        n,
        floor_sqrt2n,
        twice_floor_ratio,
        small_divisor_count,
        theta,
        total,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
pub struct AsymptoticRow {
    pub n: u64,
    pub cardinality: u64,
    /// `|A_n| / (2√(2n))`, rounded half-away-from-zero to 6 decimals.
    pub ratio: f64,
}

pub fn asymptotic_report(samples: &[u64]) -> Result<Vec<AsymptoticRow>, AnalyticsError> {
    samples
        .iter()
        .map(|&n| {
            let cardinality = cardinality_breakdown(n)?.total;
            let raw = cardinality as f64 / (2.0 * (2.0 * n as f64).sqrt());
            Ok(AsymptoticRow {
                n,
                cardinality,
                ratio: (raw * 1e6).round() / 1e6,
            })
        })
        .collect()
}

/// Whether `A_n` is exactly the set of divisors of `n`.
pub fn q2_is_divisor_set(n: u64) -> Result<bool, ArithError> {
    Ok(obstruction_set(n)?.members == divisors(n))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Question {
    Q2,
    Q4,
    Q5,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Verdict {
    Member,
    NonMember,
    Undetermined,
}

impl std::fmt::Display for Verdict {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            Verdict::Member => "member",
            Verdict::NonMember => "non-member",
            Verdict::Undetermined => "undetermined",
        })
    }
}

/// A walk containing the difference `n` on which the hypothesis was checked.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "lowercase")]
pub enum Witness {
    /// `0, 1, …, n` along the real axis.
    Straight { walk: WalkDocument },
    /// A construction avoiding the single value `avoids`.
    Certificate {
        avoids: u64,
        certificate: CertificateDocument,
    },
}

impl Witness {
    pub fn walk(&self) -> Walk {
        match self {
            Witness::Straight { walk } => walk.to_walk().expect("stored walks are valid"),
            Witness::Certificate { certificate, .. } => certificate
                .clone()
                .into_certificate()
                .expect("stored certificates are valid")
                .walk,
        }
    }
}

/// A divisor `d` whose window `d-K..=d+K` lies inside `A_n` without dividing `n`
/// throughout, so no walk containing `n` satisfies the hypothesis.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Obstruction {
    pub d: u64,
    /// `d-K..=d+K`, all members of `A_n`.
    pub blocking: Vec<u64>,
    /// The values of `blocking` that do not divide `n`.
    pub non_divisors: Vec<u64>,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ClassificationReport {
    pub question: Question,
    pub n: u64,
    #[serde(rename = "K")]
    pub k: Option<u64>,
    pub verdict: Verdict,
    pub case: Option<u8>,
    pub witness: Option<Witness>,
    pub obstruction: Option<Obstruction>,
    /// Labels of the threshold inequalities that fail (Q5 case 3 only).
    #[serde(default, skip_serializing_if = "Vec::is_empty")]
    pub failed_thresholds: Vec<char>,
}

/// Divisors `d` of `n` with `K < d < upper` whose window `d-K..=d+K` does
/// not consist of divisors of `n` only.
fn unsatisfied_divisors(n: u64, k: u64, upper: u64) -> Vec<u64> {
    divisors(n)
        .into_iter()
        .filter(|&d| d > k && d < upper)
        .filter(|&d| (d - k..=d + k).any(|v| !n.is_multiple_of(v)))
        .collect()
}

/// Whether the walk contains `n` and, for each unsatisfied divisor, misses
/// some value of its window.
fn hypothesis_holds(walk: &Walk, n: u64, k: u64, upper: u64) -> bool {
    let rows = RowIndex::new(walk);
    let realised = |v: u64| rows.realises(v);
    realised(n)
        && unsatisfied_divisors(n, k, upper)
            .into_iter()
            .all(|d| (d - k..=d + k).any(|v| !realised(v)))
}

fn obstruction_at(n: u64, k: u64, d: u64) -> Result<Option<Obstruction>, ArithError> {
    let blocking: Vec<u64> = (d - k..=d + k).collect();
    let non_divisors: Vec<u64> = blocking.iter().copied().filter(|v| !n.is_multiple_of(*v)).collect();
    if non_divisors.is_empty() {
        return Ok(None);
    }
    for &v in &blocking {
        if !is_unavoidable(n, v)? {
            return Ok(None);
        }
    }
    Ok(Some(Obstruction {
        d,
        blocking,
        non_divisors,
    }))
}

fn scan_obstruction(n: u64, k: u64, upper: u64) -> Result<Option<Obstruction>, ArithError> {
    for d in unsatisfied_divisors(n, k, upper) {
        if let Some(o) = obstruction_at(n, k, d)? {
            return Ok(Some(o));
        }
    }
    Ok(None)
}

fn straight_witness(n: u64) -> Witness {
    Witness::Straight {
        walk: WalkDocument::from_walk(&Walk::straight(n), None),
    }
}

fn certificate_witness(n: u64, b: u64) -> Result<Witness, ConstructionError> {
    Ok(Witness::Certificate {
        avoids: b,
        certificate: avoiding_walk(n, b)?.to_document(),
    })
}

/// First witness that passes the hypothesis check: the straight walk, then
/// walks avoiding one non-member `b` from an unsatisfied window.
fn search_witness(n: u64, k: u64, upper: u64) -> Result<Option<Witness>, AnalyticsError> {
    let straight = straight_witness(n);
    if hypothesis_holds(&straight.walk(), n, k, upper) {
        return Ok(Some(straight));
    }
    let mut tried = BTreeSet::new();
    for d in unsatisfied_divisors(n, k, upper) {
        for b in d - k..=d + k {
            if b < 2 || !tried.insert(b) || is_unavoidable(n, b)? {
                continue;
            }
            let w = certificate_witness(n, b)?;
            if hypothesis_holds(&w.walk(), n, k, upper) {
                return Ok(Some(w));
            }
        }
    }
    Ok(None)
}

fn report(question: Question, n: u64, k: Option<u64>, verdict: Verdict) -> ClassificationReport {
    ClassificationReport {
        question,
        n,
        k,
        verdict,
        case: None,
        witness: None,
        obstruction: None,
        failed_thresholds: Vec::new(),
    }
}

/// Q2 as a report: member iff `A_n` is the divisor set of `n`.
pub fn q2_classify(n: u64) -> Result<ClassificationReport, ArithError> {
    let verdict = if q2_is_divisor_set(n)? {
        Verdict::Member
    } else {
        Verdict::NonMember
    };
    Ok(report(Question::Q2, n, None, verdict))
}

/// Is there a walk containing `n` such that every divisor `1 < d < n` has
/// `d±1` both dividing `n` or one of `d±1` missing from the walk?
pub fn q4_classify(n: u64) -> Result<ClassificationReport, AnalyticsError> {
    positive("n", n)?;
    if let Some(o) = scan_obstruction(n, 1, n)? {
        let mut r = report(Question::Q4, n, None, Verdict::NonMember);
        r.obstruction = Some(o);
        return Ok(r);
    }
    let witness = if n == 1 || is_prime(n) {
        Some(straight_witness(n))
    } else {
        search_witness(n, 1, n)?
    };
    let verdict = if witness.is_some() {
        Verdict::Member
    } else {
        Verdict::Undetermined
    };
    let mut r = report(Question::Q4, n, None, verdict);
    r.witness = witness;
    Ok(r)
}

/// The four inequalities whose conjunction (outside case 1) forces a
/// non-member, in exact integer form, labelled `A`-`D`.
pub fn q5_thresholds(n: u64, k: u64) -> [(char, bool); 4] {
    let (n, k) = (n as u128, k as u128);
    let kk = k * k;
    [
        ('A', n >= (2 * k + 1) * k),
        ('B', 2 * n > (kk + k) * (kk + k)),
        ('C', n >= kk && (n - kk) * (n - kk) >= 4 * kk * n),
        ('D', (n + kk + k) * (n + kk + k) > 2 * n * (2 * k + 1) * (2 * k + 1)),
    ]
}

/// `n = m·p` with `m ≤ K` and `p` a prime `≥ 2K+1`; `p` is then unique.
pub fn q5_case1_prime(n: u64, k: u64) -> Option<u64> {
    (1..=k.min(n))
        .filter(|m| n.is_multiple_of(*m))
        .map(|m| n / m)
        .find(|&p| p > 2 * k && is_prime(p))
}

/// Is there a walk containing `n` such that every divisor `K < d < n-K` has
/// its window `d-K..=d+K` dividing `n` or partly missing from the walk?
pub fn q5_classify(n: u64, k: u64) -> Result<ClassificationReport, AnalyticsError> {
    positive("n", n)?;
    positive("K", k)?;
    let upper = n.saturating_sub(k);
    let fail = |reason: String| AnalyticsError::CaseAnalysis { n, k, reason };

    if let Some(p) = q5_case1_prime(n, k) {
        let w = certificate_witness(n, p + 1)?;
        if !hypothesis_holds(&w.walk(), n, k, upper) {
            return Err(fail(format!("walk avoiding {} misses the hypothesis", p + 1)));
        }
        let mut r = report(Question::Q5, n, Some(k), Verdict::Member);
        r.case = Some(1);
        r.witness = Some(w);
        return Ok(r);
    }

    let thresholds = q5_thresholds(n, k);
    if thresholds.iter().all(|&(_, ok)| ok) {
        let d = divisors(n)
            .into_iter()
            .filter(|&d| (d + k) as u128 * (d + k) as u128 <= 2 * n as u128)
            .max()
            .ok_or_else(|| fail("no divisor below √(2n) - K".into()))?;
        if !(d > k && d < upper) {
            return Err(fail(format!("divisor {d} outside (K, n-K)")));
        }
        let o = obstruction_at(n, k, d)?
            .ok_or_else(|| fail(format!("window around {d} is not an obstruction")))?;
        let mut r = report(Question::Q5, n, Some(k), Verdict::NonMember);
        r.case = Some(2);
        r.obstruction = Some(o);
        return Ok(r);
    }

    let mut r = report(Question::Q5, n, Some(k), Verdict::Undetermined);
    r.case = Some(3);
    r.failed_thresholds = thresholds.iter().filter(|t| !t.1).map(|t| t.0).collect();
    if let Some(o) = scan_obstruction(n, k, upper)? {
        r.verdict = Verdict::NonMember;
        r.obstruction = Some(o);
    } else if let Some(w) = search_witness(n, k, upper)? {
        r.verdict = Verdict::Member;
        r.witness = Some(w);
    }
    Ok(r)
}

/// Every `n ≤ n_max` falling in case 3, resolved where possible.
pub fn q5_exceptional_scan(k: u64, n_max: u64) -> Result<Vec<ClassificationReport>, AnalyticsError> {
    let mut out = Vec::new();
    for n in 1..=n_max {
        let r = q5_classify(n, k)?;
        if r.case == Some(3) {
            out.push(r);
        }
    }
    Ok(out)
}
