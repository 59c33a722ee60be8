//! Windowed co-occurrence: pair tables, association measures, co-occurrent
//! rankings, second-order structure, and per-slice association timelines.
//!
//! An event is an unordered token-position pair {i, j} with j - i <= w
//! inside one charter; windows never cross charter boundaries. Marginals
//! are computed over the event table (an event contributes one endpoint to
//! each member, two to a same-lemma pair), which is what keeps Dice within
//! [0, 1].

use std::collections::HashMap;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{CharterFilter, Index, SlicePlan};
use crate::model::LemmaId;

/// Association measures over a [`PairTable`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum Measure {
    /// 2 f(x,y) / (f(x) + f(y)), in [0, 1].
    Dice,
    /// Dunning log-likelihood ratio, >= 0.
    Llr,
}

impl std::fmt::Display for Measure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Measure::Dice => write!(f, "dice"),
            Measure::Llr => write!(f, "llr"),
        }
    }
}

impl std::str::FromStr for Measure {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "dice" => Ok(Measure::Dice),
            "llr" => Ok(Measure::Llr),
            other => Err(format!("unknown measure {other:?} (expected dice or llr)")),
        }
    }
}

fn pair_key(a: LemmaId, b: LemmaId) -> (LemmaId, LemmaId) {
    if a.0 <= b.0 {
        (a, b)
    } else {
        (b, a)
    }
}

/// Unordered co-occurrence events within a window, with event marginals.
#[derive(Debug, Clone)]
pub struct PairTable {
    pub window: usize,
    pub events: HashMap<(LemmaId, LemmaId), u64>,
    /// f(x): endpoints contributed by x over all events; a {x,x} event
    /// contributes 2.
    pub marginals: HashMap<LemmaId, u64>,
    /// E: total number of events.
    pub total_events: u64,
}

impl PairTable {
    pub fn joint(&self, x: LemmaId, y: LemmaId) -> u64 {
        self.events.get(&pair_key(x, y)).copied().unwrap_or(0)
    }

    pub fn marginal(&self, x: LemmaId) -> u64 {
        self.marginals.get(&x).copied().unwrap_or(0)
    }

    /// The marginal identity f(x) = sum_y f(x,y) + 2 f(x,x), exact.
    pub fn marginals_consistent(&self) -> bool {
        let mut recomputed: HashMap<LemmaId, u64> = HashMap::new();
        for (&(a, b), &n) in &self.events {
            if a == b {
                *recomputed.entry(a).or_insert(0) += 2 * n;
            } else {
                *recomputed.entry(a).or_insert(0) += n;
                *recomputed.entry(b).or_insert(0) += n;
            }
        }
        recomputed == self.marginals
            && self.total_events == self.events.values().sum::<u64>()
    }
}

/// Build the pair table over the filtered corpus. `stop_lemmas` drop every
/// event touching them; their positions still occupy window slots.
pub fn pair_table(
    index: &Index,
    window: usize,
    filter: &CharterFilter,
    stop_lemmas: &[String],
) -> Result<PairTable> {
    let charters: Vec<u32> = (0..index.charters.len() as u32)
        .filter(|&ci| filter.matches(&index.charters[ci as usize].meta))
        .collect();
    if charters.is_empty() {
        return Err(Error::EmptyFilter);
    }
    pair_table_over(index, window, &charters, stop_lemmas)
}

/// Pair table restricted to an explicit charter subset.
pub fn pair_table_over(
    index: &Index,
    window: usize,
    charters: &[u32],
    stop_lemmas: &[String],
) -> Result<PairTable> {
    if window == 0 {
        return Err(Error::InvalidInput("window must be at least 1".into()));
    }
    let stopped: Vec<bool> = {
        let mut v = vec![false; index.lemmas.len()];
        for lemma in stop_lemmas {
            if let Some(id) = index.lemmas.id(lemma) {
                v[id as usize] = true;
            }
        }
        v
    };

    let events = charters
        .par_iter()
        .fold(
            HashMap::<(LemmaId, LemmaId), u64>::new,
            |mut acc, &ci| {
                let tokens = &index.charters[ci as usize].tokens;
                for j in 0..tokens.len() {
                    let lo = j.saturating_sub(window);
                    for i in lo..j {
                        let (a, b) = (tokens[i].lemma, tokens[j].lemma);
                        if stopped[a.index()] || stopped[b.index()] {
                            continue;
                        }
                        *acc.entry(pair_key(a, b)).or_insert(0) += 1;
                    }
                }
                acc
            },
        )
        .reduce(HashMap::new, |mut a, b| {
            for (k, v) in b {
                *a.entry(k).or_insert(0) += v;
            }
            a
        });

    let mut marginals: HashMap<LemmaId, u64> = HashMap::new();
    let mut total_events = 0u64;
    for (&(a, b), &n) in &events {
        total_events += n;
        if a == b {
            *marginals.entry(a).or_insert(0) += 2 * n;
        } else {
            *marginals.entry(a).or_insert(0) += n;
            *marginals.entry(b).or_insert(0) += n;
        }
    }

    Ok(PairTable {
        window,
        events,
        marginals,
        total_events,
    })
}

/// Pivot-target association score with the counts behind it.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct AssociationScore {
    pub pivot: String,
    pub target: String,
    pub measure: Measure,
    pub value: f64,
    pub f_xy: u64,
    pub f_x: u64,
    pub f_y: u64,
}

fn dice(f_xy: u64, f_x: u64, f_y: u64) -> f64 {
    2.0 * f_xy as f64 / (f_x + f_y) as f64
}

fn xlogx(x: f64) -> f64 {
    if x > 0.0 {
        x * x.ln()
    } else {
        0.0
    }
}

/// Dunning's G2 over the 2x2 event table. Self-pair mass elsewhere in the
/// table can push the complement cell below zero; it is clamped.
fn llr(f_xy: u64, f_x: u64, f_y: u64, total: u64) -> f64 {
    let k11 = f_xy as f64;
    let k12 = (f_x - f_xy) as f64;
    let k21 = (f_y - f_xy) as f64;
    let k22 = (total as f64 - f_x as f64 - f_y as f64 + f_xy as f64).max(0.0);
    let n = k11 + k12 + k21 + k22;
    if n == 0.0 {
        return 0.0;
    }
    let row1 = k11 + k12;
    let row2 = k21 + k22;
    let col1 = k11 + k21;
    let col2 = k12 + k22;
    let g2 = 2.0
        * (xlogx(k11) + xlogx(k12) + xlogx(k21) + xlogx(k22) + xlogx(n)
            - xlogx(row1)
            - xlogx(row2)
            - xlogx(col1)
            - xlogx(col2));
    // Numerical floor: G2 is nonnegative for true tables.
    if g2 < 0.0 && g2 > -1e-9 {
        0.0
    } else {
        g2
    }
}

/// Score one pair. Errors when both marginals are zero.
pub fn associate(
    index: &Index,
    table: &PairTable,
    x: &str,
    y: &str,
    measure: Measure,
) -> Result<AssociationScore> {
    let xid = index
        .lemmas
        .id(x)
        .map(LemmaId)
        .ok_or_else(|| Error::UnknownLemma(x.to_string()))?;
    let yid = index
        .lemmas
        .id(y)
        .map(LemmaId)
        .ok_or_else(|| Error::UnknownLemma(y.to_string()))?;
    associate_ids(index, table, xid, yid, measure)
}

fn associate_ids(
    index: &Index,
    table: &PairTable,
    x: LemmaId,
    y: LemmaId,
    measure: Measure,
) -> Result<AssociationScore> {
    let f_xy = table.joint(x, y);
    let f_x = table.marginal(x);
    let f_y = table.marginal(y);
    if f_x + f_y == 0 {
        return Err(Error::InvalidInput(format!(
            "both {} and {} have zero event marginals",
            index.lemmas.string(x.0),
            index.lemmas.string(y.0)
        )));
    }
    let value = match measure {
        Measure::Dice => dice(f_xy, f_x, f_y),
        Measure::Llr => llr(f_xy, f_x, f_y, table.total_events),
    };
    Ok(AssociationScore {
        pivot: index.lemmas.string(x.0).to_string(),
        target: index.lemmas.string(y.0).to_string(),
        measure,
        value,
        f_xy,
        f_x,
        f_y,
    })
}

/// Ranked co-occurrents of a pivot: score descending, ties by target
/// frequency descending then lexicographic. Self pairs are excluded.
pub fn top_cooccurrents(
    index: &Index,
    table: &PairTable,
    pivot: &str,
    k: usize,
    measure: Measure,
    min_freq: u64,
) -> Result<Vec<AssociationScore>> {
    let pid = index
        .lemmas
        .id(pivot)
        .map(LemmaId)
        .ok_or_else(|| Error::UnknownLemma(pivot.to_string()))?;
    let mut scored: Vec<AssociationScore> = table
        .events
        .iter()
        .filter_map(|(&(a, b), _)| {
            let other = if a == pid && b != pid {
                Some(b)
            } else if b == pid && a != pid {
                Some(a)
            } else {
                None
            };
            other
        })
        .filter(|&t| table.marginal(t) >= min_freq)
        .map(|t| associate_ids(index, table, pid, t, measure))
        .collect::<Result<_>>()?;
    scored.sort_by(|a, b| {
        b.value
            .partial_cmp(&a.value)
            .unwrap()
            .then_with(|| b.f_y.cmp(&a.f_y))
            .then_with(|| a.target.cmp(&b.target))
    });
    scored.truncate(k);
    Ok(scored)
}

/// Square association matrix over a pivot's top-k co-occurrents.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SecondOrderMatrix {
    pub pivot: String,
    pub terms: Vec<String>,
    pub measure: Measure,
    /// Row-major k x k values, symmetric.
    pub values: Vec<f64>,
}

impl SecondOrderMatrix {
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.values[i * self.terms.len() + j]
    }
}

/// Associations among the pivot's top co-occurrents ("co-occurrents of
/// co-occurrents"), the input for factorial maps of a semantic field.
pub fn second_order(
    index: &Index,
    table: &PairTable,
    pivot: &str,
    k: usize,
    measure: Measure,
) -> Result<SecondOrderMatrix> {
    let ranked = top_cooccurrents(index, table, pivot, k, measure, 0)?;
    if ranked.len() < 2 {
        return Err(Error::NoCooccurrents(pivot.to_string()));
    }
    let ids: Vec<LemmaId> = ranked
        .iter()
        .map(|s| LemmaId(index.lemmas.id(&s.target).unwrap()))
        .collect();
    let n = ids.len();
    let mut values = vec![0.0; n * n];
    for i in 0..n {
        for j in 0..n {
            values[i * n + j] = associate_ids(index, table, ids[i], ids[j], measure)?.value;
        }
    }
    Ok(SecondOrderMatrix {
        pivot: pivot.to_string(),
        terms: ranked.into_iter().map(|s| s.target).collect(),
        measure,
        values,
    })
}

/// Per-slice association between a pivot and a target. Slices where either
/// lemma contributes no events report `None`, not zero.
pub fn association_timeline(
    index: &Index,
    pivot: &str,
    target: &str,
    plan: &SlicePlan,
    window: usize,
    measure: Measure,
) -> Result<Vec<(String, Option<AssociationScore>)>> {
    if plan.slices.is_empty() {
        return Err(Error::EmptySlicePlan);
    }
    let pid = index
        .lemmas
        .id(pivot)
        .map(LemmaId)
        .ok_or_else(|| Error::UnknownLemma(pivot.to_string()))?;
    let tid = index
        .lemmas
        .id(target)
        .map(LemmaId)
        .ok_or_else(|| Error::UnknownLemma(target.to_string()))?;

    let mut out = Vec::with_capacity(plan.slices.len());
    for slice in &plan.slices {
        if slice.charters.is_empty() {
            out.push((slice.label.clone(), None));
            continue;
        }
        let table = pair_table_over(index, window, &slice.charters, &[])?;
        if table.marginal(pid) == 0 || table.marginal(tid) == 0 {
            out.push((slice.label.clone(), None));
            continue;
        }
        out.push((
            slice.label.clone(),
            Some(associate_ids(index, &table, pid, tid, measure)?),
        ));
    }
    Ok(out)
}
