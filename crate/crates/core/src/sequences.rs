//! Ratio sequences behind the deterministic lower bound.
//!
//! Indexing in this module is 1-based: a sequence is `h_1, h_2, ...` and the
//! index reported alongside every ratio is that 1-based `i`. Internally the
//! values sit in 0-based vectors, so `h_i` is `h[i - 1]`.
//!
//! A w-sequence pairs every extent `h_i > 0` with a path label `a_i`. Its
//! ratio sequence is `H_i = (h_1 + ... + h_{i'-1}) / h_i`, where `i'` is the
//! next index carrying the same label. A cyclic sequence has `a_i = i mod w`
//! and ratio sequence `S_i = (s_1 + ... + s_{i+w-1}) / s_i`.

use serde::{Deserialize, Serialize};

use crate::analytic::cyclic_ratio_limit;
use crate::error::{domain, Error, Result};

/// Slack for comparing sums of the same values added in different orders.
pub const ROUNDING_SLACK: f64 = 1e-12;

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct WSequence {
    pub w: usize,
    pub h: Vec<f64>,
    pub a: Vec<usize>,
}

impl WSequence {
    pub fn new(w: usize, h: Vec<f64>, a: Vec<usize>) -> Result<Self> {
        if w < 2 {
            return domain(format!("need w >= 2, got {w}"));
        }
        if h.len() != a.len() {
            return domain(format!("{} extents but {} labels", h.len(), a.len()));
        }
        if let Some(i) = h.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
            return domain(format!("h_{} = {} is not a positive real", i + 1, h[i]));
        }
        Ok(Self { w, h, a })
    }

    pub fn len(&self) -> usize {
        self.h.len()
    }

    pub fn is_empty(&self) -> bool {
        self.h.is_empty()
    }

    /// Labels that occur at least twice in the prefix.
    pub fn recurring_labels(&self) -> usize {
        let mut counts = std::collections::BTreeMap::new();
        for label in &self.a {
            *counts.entry(label).or_insert(0usize) += 1;
        }
        counts.values().filter(|&&c| c >= 2).count()
    }

    /// Whether the prefix is consistent with a w-sequence: at least `w`
    /// labels recur. Recurring infinitely often cannot be checked on a prefix.
    pub fn is_w_sequence_prefix(&self) -> bool {
        self.recurring_labels() >= self.w
    }

    /// 0-based position of the next occurrence of the label at 0-based `k`.
    fn next_same_label(&self) -> Vec<Option<usize>> {
        let mut next = vec![None; self.len()];
        let mut last_seen = std::collections::HashMap::new();
        for k in (0..self.len()).rev() {
            next[k] = last_seen.get(&self.a[k]).copied();
            last_seen.insert(self.a[k], k);
        }
        next
    }
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CyclicSequence {
    pub w: usize,
    pub values: Vec<f64>,
}

impl CyclicSequence {
    pub fn new(w: usize, values: Vec<f64>) -> Result<Self> {
        if w < 2 {
            return domain(format!("need w >= 2, got {w}"));
        }
        if let Some(i) = values.iter().position(|x| !(*x > 0.0) || !x.is_finite()) {
            return domain(format!("s_{} = {} is not a positive real", i + 1, values[i]));
        }
        Ok(Self { w, values })
    }

    /// `s_i = rate^(i-1)` for `i = 1..=len`.
    pub fn geometric(w: usize, rate: f64, len: usize) -> Result<Self> {
        let values: Vec<f64> = (0..len).map(|k| rate.powi(k as i32)).collect();
        Self::new(w, values)
    }
}

/// Ratio values keyed by 1-based index, plus the indices whose ratio the
/// prefix cannot determine.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct RatioTable {
    pub values: Vec<(usize, f64)>,
    pub unresolved: Vec<usize>,
}

fn prefix_sums(xs: &[f64]) -> Vec<f64> {
    std::iter::once(0.0)
        .chain(xs.iter().scan(0.0, |acc, x| {
            *acc += x;
            Some(*acc)
        }))
        .collect()
}

/// `H_i` for every `i` whose next same-label index lies in the prefix.
pub fn ratio_h(seq: &WSequence) -> Result<RatioTable> {
    if seq.is_empty() {
        return domain("empty sequence");
    }
    let sums = prefix_sums(&seq.h);
    let mut table = RatioTable { values: Vec::new(), unresolved: Vec::new() };
    for (k, next) in seq.next_same_label().into_iter().enumerate() {
        match next {
            // h_1 + ... + h_{i'-1} with i' = next + 1 (1-based).
            Some(next) => table.values.push((k + 1, sums[next] / seq.h[k])),
            None => table.unresolved.push(k + 1),
        }
    }
    Ok(table)
}

/// `S_i` for `i = 1..=N-w+1`.
pub fn ratio_s(seq: &CyclicSequence) -> Result<RatioTable> {
    let (w, n) = (seq.w, seq.values.len());
    if n < w {
        return domain(format!("prefix of length {n} is shorter than w = {w}"));
    }
    let sums = prefix_sums(&seq.values);
    let values = (1..=n - w + 1).map(|i| (i, sums[i + w - 1] / seq.values[i - 1])).collect();
    let unresolved = (n - w + 2..=n).collect();
    Ok(RatioTable { values, unresolved })
}

/// Sorts the extents ascending; the result is read as a cyclic sequence.
pub fn cyclic_convert(seq: &WSequence) -> CyclicSequence {
    let mut values = seq.h.clone();
    values.sort_by(f64::total_cmp);
    CyclicSequence { w: seq.w, values }
}

/// Which branch of the construction produced a witness.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum WitnessCase {
    /// A late extent no larger than `s_j` exists.
    LateSmallExtent,
    /// Every late extent exceeds `s_j`; a label's last early occurrence is used.
    EarlyLabel,
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Witness {
    pub j: usize,
    pub j_star: usize,
    pub s_j: f64,
    pub h_j_star: f64,
    pub case: WitnessCase,
}

impl Witness {
    /// `S_j <= H_{j*}`, allowing for summation-order rounding.
    pub fn holds(&self) -> bool {
        self.s_j <= self.h_j_star * (1.0 + ROUNDING_SLACK)
    }
}

/// Precomputed data for repeated witness queries on one sequence.
pub struct WitnessFinder<'a> {
    seq: &'a WSequence,
    sorted: Vec<f64>,
    sorted_sums: Vec<f64>,
    sums: Vec<f64>,
    next: Vec<Option<usize>>,
}

impl<'a> WitnessFinder<'a> {
    pub fn new(seq: &'a WSequence) -> Self {
        let sorted = cyclic_convert(seq).values;
        let sorted_sums = prefix_sums(&sorted);
        Self { seq, sorted, sorted_sums, sums: prefix_sums(&seq.h), next: seq.next_same_label() }
    }

    /// `H` at 1-based index `t`, if resolvable.
    fn h_ratio(&self, t: usize) -> Option<f64> {
        self.next[t - 1].map(|next| self.sums[next] / self.seq.h[t - 1])
    }

    /// Finds `j*` with `S_j <= H_{j*}` (`S` of the sorted sequence, `H` of
    /// the original), following the two-case construction.
    pub fn find(&self, j: usize) -> Result<Witness> {
        let seq = self.seq;
        let (w, n) = (seq.w, seq.len());
        if j < 1 || j + w - 1 > n {
            return Err(Error::InsufficientHorizon(format!("S_{j} needs {} terms, prefix has {n}", j + w - 1)));
        }
        let s_j = self.sorted[j - 1];
        let ratio_s = self.sorted_sums[j + w - 1] / s_j;
        let witness = |j_star: usize, h_j_star: f64, case| Witness { j, j_star, s_j: ratio_s, h_j_star, case };

        // Case 1: some t >= j+w-1 with h_t <= s_j; then t' > t and H_t works.
        let late: Vec<usize> = (j + w - 1..=n).filter(|&t| seq.h[t - 1] <= s_j).collect();
        if !late.is_empty() {
            return late
                .iter()
                .find_map(|&t| self.h_ratio(t).map(|h| witness(t, h, WitnessCase::LateSmallExtent)))
                .ok_or_else(|| {
                    Error::InsufficientHorizon(format!("no late small extent for j = {j} recurs within the prefix"))
                });
        }

        // Case 2: all values <= s_j sit among the first j+w-2 extents. For each
        // label take its last occurrence at or before j+w-2.
        let cutoff = j + w - 2;
        let mut last: std::collections::BTreeMap<usize, usize> = std::collections::BTreeMap::new();
        for t in 1..=cutoff {
            last.insert(seq.a[t - 1], t);
        }
        let resolved: Vec<usize> = last.values().copied().filter(|&t| self.next[t - 1].is_some()).collect();
        if resolved.len() < w {
            return Err(Error::InsufficientHorizon(format!(
                "only {} labels seen before index {cutoff} recur within the prefix; need {w}",
                resolved.len()
            )));
        }
        resolved
            .iter()
            .rev()
            .copied()
            .filter(|&t| seq.h[t - 1] <= s_j && self.next[t - 1].is_some_and(|nx| nx + 1 > j + w - 1))
            .find_map(|t| self.h_ratio(t).map(|h| witness(t, h, WitnessCase::EarlyLabel)))
            .ok_or(Error::WitnessNotFound { j })
    }
}

/// One-shot form of [`WitnessFinder::find`].
pub fn witness_check(seq: &WSequence, j: usize) -> Result<Witness> {
    WitnessFinder::new(seq).find(j)
}

/// Finite-horizon stand-in for `limsup S_i - w^w/(w-1)^(w-1)`: the largest of
/// the last `window` ratios minus the bound.
pub fn limit_gap(seq: &CyclicSequence, window: usize) -> Result<f64> {
    if window < 1 {
        return domain("window must be at least 1");
    }
    if seq.values.len() < window + seq.w {
        return domain(format!(
            "window {window} needs a prefix of at least {} terms, got {}",
            window + seq.w,
            seq.values.len()
        ));
    }
    let table = ratio_s(seq)?;
    let tail = &table.values[table.values.len() - window..];
    let max = tail.iter().map(|&(_, s)| s).fold(f64::NEG_INFINITY, f64::max);
    Ok(max - cyclic_ratio_limit(seq.w))
}

/// `S_i` of the geometric sequence `s_i = rate^(i-1)`, computed from a
/// prefix long enough that the remaining drift is below `tol`.
pub fn geometric_s_limit(w: usize, rate: f64, tol: f64) -> Result<f64> {
    if !(rate > 1.0) || !rate.is_finite() {
        return domain(format!("rate must exceed 1, got {rate}"));
    }
    if !(tol > 0.0) {
        return domain(format!("tolerance must be positive, got {tol}"));
    }
    // S_i = r^w/(r-1) - 1/((r-1) r^(i-1)); aim an order of magnitude below tol.
    let needed = ((1.0 / (0.1 * tol * (rate - 1.0))).ln() / rate.ln()).ceil().max(0.0) as usize + 1;
    let len = needed + w;
    let seq = CyclicSequence::geometric(w, rate, len)?;
    let table = ratio_s(&seq)?;
    let (_, last) = *table.values.last().expect("prefix holds at least one ratio");
    if !last.is_finite() {
        return domain(format!("rate {rate} overflows before the ratio settles"));
    }
    Ok(last)
}
