//! t-number products `(k)_t = 1 + t + … + t^{k-1}`: expansion,
//! factorization of complete Hilbert series, refutation from coefficient
//! prefixes, and the top-degree numerology table.

use std::collections::HashSet;
use std::fmt;

use serde::{Deserialize, Serialize};

use crate::groebner::HilbertSeries;

/// The t-number `(k)_t`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct TNumber(u32);

impl TNumber {
    /// `None` for `k = 0`.
    pub fn new(k: u32) -> Option<Self> {
        (k >= 1).then_some(TNumber(k))
    }

    pub fn k(self) -> u32 {
        self.0
    }

    pub fn degree(self) -> usize {
        self.0 as usize - 1
    }

    pub fn coefficients(self) -> Vec<u64> {
        vec![1; self.0 as usize]
    }
}

fn mul_t_number(p: &[u64], k: usize) -> Vec<u64> {
    // running window sum of width k
    let mut out = vec![0u64; p.len() + k - 1];
    let mut window = 0u64;
    for (i, slot) in out.iter_mut().enumerate() {
        if i < p.len() {
            window += p[i];
        }
        if i >= k {
            window -= p[i - k];
        }
        *slot = window;
    }
    out
}

/// Exact product of the t-numbers `(k)_t` for `k` in `factors`.
pub fn expand_t_product(factors: &[u32]) -> HilbertSeries {
    assert!(factors.iter().all(|&k| k >= 1), "t-numbers start at (1)_t");
    let mut p = vec![1u64];
    for &k in factors {
        p = mul_t_number(&p, k as usize);
    }
    HilbertSeries::complete(p)
}

/// `p / (k)_t` if the division is exact with nonnegative quotient.
fn divide_t_number(p: &[u64], k: usize) -> Option<Vec<u64>> {
    if k == 1 {
        return Some(p.to_vec());
    }
    if p.len() < k {
        return None;
    }
    // p = q · (1 + … + t^{k-1})  ⇔  q_i = p_i − p_{i−1} + q_{i−k}
    let qlen = p.len() - k + 1;
    let mut q = vec![0i128; qlen];
    for i in 0..p.len() {
        let mut v = p[i] as i128 - if i > 0 { p[i - 1] as i128 } else { 0 };
        if i >= k {
            v += q[i - k];
        }
        if i < qlen {
            if v < 0 {
                return None;
            }
            q[i] = v;
        } else if v != 0 {
            return None;
        }
    }
    Some(q.into_iter().map(|v| v as u64).collect())
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum TNumberFactorization {
    /// Multiset of `k >= 2`, sorted descending.
    Product { factors: Vec<u32> },
    /// No product of t-numbers equals the input.
    Refuted { reason: String },
}

impl TNumberFactorization {
    pub fn factors(&self) -> Option<&[u32]> {
        match self {
            TNumberFactorization::Product { factors } => Some(factors),
            TNumberFactorization::Refuted { .. } => None,
        }
    }
}

impl fmt::Display for TNumberFactorization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            TNumberFactorization::Product { factors } if factors.is_empty() => {
                write!(f, "empty product")
            }
            TNumberFactorization::Product { factors } => {
                let parts: Vec<String> = factors.iter().map(|k| format!("({k})_t")).collect();
                write!(f, "{}", parts.join(" "))
            }
            TNumberFactorization::Refuted { reason } => write!(f, "refuted: {reason}"),
        }
    }
}

struct Search {
    failed: HashSet<(Vec<u64>, u32)>,
}

impl Search {
    /// Factors `p` with t-numbers of size at most `max_k`, largest first.
    fn run(&mut self, p: &[u64], max_k: u32, out: &mut Vec<u32>) -> bool {
        let degree = p.len() - 1;
        if degree == 0 {
            return p[0] == 1;
        }
        if self.failed.contains(&(p.to_vec(), max_k)) {
            return false;
        }
        let value: u128 = p.iter().map(|&c| c as u128).sum();
        let top = max_k.min(degree as u32 + 1);
        for k in (2..=top).rev() {
            if !value.is_multiple_of(k as u128) {
                continue;
            }
            if let Some(q) = divide_t_number(p, k as usize) {
                out.push(k);
                if self.run(&q, k, out) {
                    return true;
                }
                out.pop();
            }
        }
        self.failed.insert((p.to_vec(), max_k));
        false
    }
}

/// Writes a complete series as a product of t-numbers `(k)_t`, `k >= 2`.
///
/// Since `(k)_t` is the product of the cyclotomic polynomials `Φ_d` over
/// the divisors `d > 1` of `k`, such a factorization is unique when it
/// exists; the search tries `k` from `degree + 1` down with backtracking.
pub fn factor_t_numbers(p: &HilbertSeries) -> TNumberFactorization {
    let coeffs = p.trimmed();
    if coeffs.first() != Some(&1) {
        return TNumberFactorization::Refuted {
            reason: "constant term is not 1".into(),
        };
    }
    let mut out = Vec::new();
    if (Search {
        failed: HashSet::new(),
    })
    .run(&coeffs, u32::MAX, &mut out)
    {
        TNumberFactorization::Product { factors: out }
    } else {
        TNumberFactorization::Refuted {
            reason: format!("no product of t-numbers has coefficients {:?}", coeffs),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case", tag = "result")]
pub enum PrefixVerdict {
    /// `witness` matches the prefix through the requested depth; factors
    /// larger than the depth stand for "any k > depth".
    Consistent {
        witness: Vec<u32>,
    },
    Refuted {
        degree: usize,
        reason: String,
    },
}

fn binomial(n: u128, k: u128) -> u128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1u128, |acc, i| acc * (n - i) / (i + 1))
}

/// Coefficients through `t^depth` of `Π (k)_t^{a_k} · (1 − t)^{−rest}`.
fn truncated_profile_series(counts: &[(u32, u64)], rest: u64, depth: usize) -> Vec<u128> {
    let mut p = vec![0u128; depth + 1];
    p[0] = 1;
    for &(k, a) in counts {
        for _ in 0..a {
            let mut q = vec![0u128; depth + 1];
            for i in 0..=depth {
                q[i] = (i.saturating_sub(k as usize - 1)..=i).map(|j| p[j]).sum();
            }
            p = q;
        }
    }
    for _ in 0..rest {
        for i in 1..=depth {
            p[i] += p[i - 1];
        }
    }
    p
}

/// Decides whether some product of t-numbers (`k >= 2`) agrees with
/// `prefix` in degrees `0..=depth`.
///
/// Modulo `t^{depth+1}` a factor with `k > depth` is indistinguishable from
/// `1/(1−t)`, and replacing one such factor by `(d)_t` lowers the
/// coefficient of `t^d` by exactly one while leaving lower degrees alone.
/// So the number of factors equal to `d` is forced, degree by degree: it is
/// the surplus of the "all factors large" coefficient over the observed one.
pub fn prefix_consistency(prefix: &[u64], depth: usize) -> PrefixVerdict {
    assert!(depth < prefix.len(), "depth beyond the available prefix");
    assert_eq!(prefix[0], 1, "prefix must start with 1");
    if depth == 0 {
        return PrefixVerdict::Consistent {
            witness: Vec::new(),
        };
    }
    let m = prefix[1];
    let mut counts: Vec<(u32, u64)> = Vec::new();
    let mut large = m;
    for d in 2..=depth {
        let base = truncated_profile_series(&counts, large, d)[d];
        let observed = prefix[d] as u128;
        if observed > base {
            let reason = if d == 2 {
                format!(
                    "coefficient {observed} at t^2 needs {} of the {m} factors to have k >= 3, since C({m},2) = {}",
                    observed - binomial(m as u128, 2),
                    binomial(m as u128, 2)
                )
            } else {
                format!("coefficient {observed} at t^{d} exceeds the maximum {base} attainable by the {large} factors with k >= {d}")
            };
            return PrefixVerdict::Refuted { degree: d, reason };
        }
        let exact_d = base - observed;
        if exact_d > large as u128 {
            return PrefixVerdict::Refuted {
                degree: d,
                reason: format!("coefficient {observed} at t^{d} would need {exact_d} factors (d)_t among the {large} with k >= {d}"),
            };
        }
        if exact_d > 0 {
            counts.push((d as u32, exact_d as u64));
        }
        large -= exact_d as u64;
    }
    let mut witness: Vec<u32> = std::iter::repeat_n(depth as u32 + 1, large as usize).collect();
    for &(k, a) in counts.iter().rev() {
        witness.extend(std::iter::repeat_n(k, a as usize));
    }
    PrefixVerdict::Consistent { witness }
}

/// Literature values: number of indecomposable modules over the
/// preprojective algebra of type `A_{n-1}` and number of clusters of
/// `C[N]` for `SL_n`. These are hardcoded constants, not computed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumerologyRow {
    pub n: usize,
    /// Expected top degree of the Hilbert series; `None` when unknown.
    pub top_degree: Option<usize>,
    /// `None` means infinite.
    pub indecomposables: Option<usize>,
    /// `None` means infinite.
    pub clusters: Option<usize>,
}

pub fn numerology_row(n: usize) -> NumerologyRow {
    let finite = |v| NumerologyRow {
        n,
        top_degree: Some(v),
        indecomposables: Some(v),
        clusters: Some(v),
    };
    match n {
        3 => finite(4),
        4 => finite(12),
        5 => finite(40),
        _ => NumerologyRow {
            n,
            top_degree: None,
            indecomposables: None,
            clusters: None,
        },
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct NumerologyReport {
    pub row: NumerologyRow,
    /// Top degree of the computed series, when the series is complete.
    pub computed_top_degree: Option<usize>,
    /// Lower bound on the top degree from an incomplete prefix.
    pub top_degree_at_least: Option<usize>,
    pub consistent: bool,
    pub message: String,
}

pub fn numerology_report(n: usize, computed: &HilbertSeries) -> NumerologyReport {
    assert!(n >= 3);
    let row = numerology_row(n);
    let show = |v: Option<usize>| v.map_or("∞".to_string(), |x| x.to_string());
    if computed.complete {
        let top = computed.top_degree().unwrap_or(0);
        let consistent = row.indecomposables == Some(top) && row.clusters == Some(top);
        let message = if consistent {
            format!("match: degree {top} = indecomposables {top} = clusters {top}")
        } else {
            format!(
                "mismatch: degree {top}, indecomposables {}, clusters {}",
                show(row.indecomposables),
                show(row.clusters)
            )
        };
        NumerologyReport {
            row,
            computed_top_degree: Some(top),
            top_degree_at_least: None,
            consistent,
            message,
        }
    } else {
        let lower = computed.top_degree().unwrap_or(0);
        let (consistent, message) = match row.indecomposables {
            None => (
                true,
                format!(
                    "no finite degree established (top degree >= {lower}); table row ∞, consistent"
                ),
            ),
            Some(v) if v >= lower => (
                true,
                format!("top degree >= {lower}; table value {v} not yet reached"),
            ),
            Some(v) => (
                false,
                format!("top degree >= {lower} exceeds table value {v}"),
            ),
        };
        NumerologyReport {
            row,
            computed_top_degree: None,
            top_degree_at_least: Some(lower),
            consistent,
            message,
        }
    }
}
