//! Distributional semantic vectors: term-context counts, PPMI weighting,
//! truncated SVD projection, cosine neighborhoods, and semantic-field maps.

use std::collections::HashMap;

use nalgebra::DMatrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::factor::kmeans;
use crate::index::{ContingencyTable, Index};
use crate::svd::svd;

/// Default parameters at corpus scale: targets are lemmas seen at least 50
/// times, contexts the 5,000 most frequent lemmas, window 10, 100 axes.
pub const DEFAULT_TARGET_MIN_FREQ: u64 = 50;
pub const DEFAULT_CONTEXT_TOP: usize = 5_000;
pub const DEFAULT_WINDOW: usize = 10;
pub const DEFAULT_DIM: usize = 100;

/// Lemmas with corpus frequency >= `min_freq`, sorted by frequency
/// descending then lemma ascending.
pub fn terms_by_min_freq(index: &Index, min_freq: u64) -> Vec<String> {
    let mut terms: Vec<(String, u64)> = index
        .lemmas
        .iter()
        .filter(|&(id, _)| index.lemma_freq[id as usize] >= min_freq)
        .map(|(id, s)| (s.to_string(), index.lemma_freq[id as usize]))
        .collect();
    terms.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
    terms.into_iter().map(|(s, _)| s).collect()
}

/// The `top` most frequent lemmas.
pub fn top_terms(index: &Index, top: usize) -> Vec<String> {
    let mut all = terms_by_min_freq(index, 1);
    all.truncate(top);
    all
}

/// Directional co-occurrence counts: cell (t, c) is the number of ordered
/// position pairs where context c falls within +-window of an occurrence of
/// target t, inside one charter.
pub fn term_context_matrix(
    index: &Index,
    targets: &[String],
    contexts: &[String],
    window: usize,
) -> Result<ContingencyTable> {
    if targets.is_empty() || contexts.is_empty() {
        return Err(Error::EmptyTable);
    }
    if window == 0 {
        return Err(Error::InvalidInput("window must be at least 1".into()));
    }
    let target_of: HashMap<u32, usize> = targets
        .iter()
        .enumerate()
        .filter_map(|(i, t)| index.lemmas.id(t).map(|id| (id, i)))
        .collect();
    let context_of: HashMap<u32, usize> = contexts
        .iter()
        .enumerate()
        .filter_map(|(i, c)| index.lemmas.id(c).map(|id| (id, i)))
        .collect();

    let cols = contexts.len();
    let counts = index
        .charters
        .par_iter()
        .fold(
            || vec![0u64; targets.len() * cols],
            |mut acc, charter| {
                let tokens = &charter.tokens;
                for (i, token) in tokens.iter().enumerate() {
                    let Some(&t) = target_of.get(&token.lemma.0) else {
                        continue;
                    };
                    let lo = i.saturating_sub(window);
                    let hi = (i + window).min(tokens.len().saturating_sub(1));
                    for j in lo..=hi {
                        if j == i {
                            continue;
                        }
                        if let Some(&c) = context_of.get(&tokens[j].lemma.0) {
                            acc[t * cols + c] += 1;
                        }
                    }
                }
                acc
            },
        )
        .reduce(
            || vec![0u64; targets.len() * cols],
            |mut a, b| {
                for (x, y) in a.iter_mut().zip(b) {
                    *x += y;
                }
                a
            },
        );

    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyTable);
    }
    Ok(ContingencyTable::from_counts(
        targets.to_vec(),
        contexts.to_vec(),
        counts,
    ))
}

/// A real-weighted labeled matrix (PPMI output, SVD input).
#[derive(Debug, Clone)]
pub struct WeightedMatrix {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    pub values: DMatrix<f64>,
}

/// Positive pointwise mutual information with probabilities taken from the
/// table marginals. Zero cells stay zero; no smoothing.
pub fn ppmi(counts: &ContingencyTable) -> WeightedMatrix {
    let n = counts.n as f64;
    let rows = counts.rows();
    let cols = counts.cols();
    let mut values = DMatrix::zeros(rows, cols);
    for r in 0..rows {
        let p_r = counts.row_totals[r] as f64 / n;
        if p_r == 0.0 {
            continue;
        }
        for c in 0..cols {
            let joint = counts.get(r, c);
            if joint == 0 {
                continue;
            }
            let p_c = counts.col_totals[c] as f64 / n;
            let pmi = ((joint as f64 / n) / (p_r * p_c)).ln();
            if pmi > 0.0 {
                values[(r, c)] = pmi;
            }
        }
    }
    WeightedMatrix {
        row_labels: counts.row_labels.clone(),
        col_labels: counts.col_labels.clone(),
        values,
    }
}

/// Term vectors in a reduced space: row i of `vectors` is U_d * Sigma_d for
/// term i. Singular values are non-increasing.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct VectorSpace {
    pub terms: Vec<String>,
    pub dim: usize,
    pub vectors: Vec<Vec<f64>>,
    pub singular_values: Vec<f64>,
}

impl VectorSpace {
    pub fn vector(&self, term: &str) -> Option<&[f64]> {
        self.terms
            .iter()
            .position(|t| t == term)
            .map(|i| self.vectors[i].as_slice())
    }
}

/// Rank-d truncation of the SVD; deterministic up to the documented sign
/// rule. `d` is clamped to the full rank dimension.
pub fn truncated_svd(matrix: &WeightedMatrix, d: usize) -> Result<VectorSpace> {
    if d == 0 {
        return Err(Error::BadDimension { d, max: 0 });
    }
    let full = matrix.values.nrows().min(matrix.values.ncols());
    let keep = d.min(full);
    let decomposition = svd(&matrix.values);
    let vectors: Vec<Vec<f64>> = (0..matrix.values.nrows())
        .map(|i| {
            (0..keep)
                .map(|k| decomposition.u[(i, k)] * decomposition.sigma[k])
                .collect()
        })
        .collect();
    Ok(VectorSpace {
        terms: matrix.row_labels.clone(),
        dim: keep,
        vectors,
        singular_values: decomposition.sigma[..keep].to_vec(),
    })
}

/// Embed a labeled square matrix (e.g. second-order associations) as a
/// vector space for neighborhood and field analysis.
pub fn space_from_matrix(labels: &[String], values: &[f64], d: usize) -> Result<VectorSpace> {
    let n = labels.len();
    if values.len() != n * n {
        return Err(Error::InvalidInput("matrix must be square over labels".into()));
    }
    let matrix = WeightedMatrix {
        row_labels: labels.to_vec(),
        col_labels: labels.to_vec(),
        values: DMatrix::from_row_slice(n, n, values),
    };
    truncated_svd(&matrix, d)
}

fn cosine(a: &[f64], b: &[f64]) -> f64 {
    let dot: f64 = a.iter().zip(b).map(|(x, y)| x * y).sum();
    let na: f64 = a.iter().map(|x| x * x).sum::<f64>().sqrt();
    let nb: f64 = b.iter().map(|x| x * x).sum::<f64>().sqrt();
    if na == 0.0 || nb == 0.0 {
        0.0
    } else {
        dot / (na * nb)
    }
}

/// Nearest neighbors by cosine, self excluded, ties by term order. Errors
/// when the query term is absent or has a zero vector; zero-vector
/// neighbors are skipped.
pub fn cosine_neighbors(space: &VectorSpace, term: &str, k: usize) -> Result<Vec<(String, f64)>> {
    let query = space
        .vector(term)
        .ok_or_else(|| Error::UnknownTerm(term.to_string()))?;
    if query.iter().all(|&x| x == 0.0) {
        return Err(Error::ZeroVector(term.to_string()));
    }
    let mut scored: Vec<(String, f64)> = space
        .terms
        .iter()
        .zip(&space.vectors)
        .filter(|(t, v)| t.as_str() != term && v.iter().any(|&x| x != 0.0))
        .map(|(t, v)| (t.clone(), cosine(query, v)))
        .collect();
    scored.sort_by(|a, b| {
        b.1.partial_cmp(&a.1)
            .unwrap()
            .then_with(|| a.0.cmp(&b.0))
    });
    scored.truncate(k);
    Ok(scored)
}

/// A pivot's top-k neighbors grouped into g clusters, with 2-D plot
/// coordinates taken from the first two axes of the space.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SemanticField {
    pub pivot: String,
    pub members: Vec<FieldMember>,
    pub groups: usize,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct FieldMember {
    pub term: String,
    pub cosine: f64,
    pub group: usize,
    pub x: f64,
    pub y: f64,
}

/// Cluster the pivot's neighborhood into g groups (seeded k-means on the
/// full vectors).
pub fn semantic_field(
    space: &VectorSpace,
    pivot: &str,
    k: usize,
    g: usize,
    seed: u64,
) -> Result<SemanticField> {
    if g == 0 || k < g {
        return Err(Error::BadClusterCount { k: g, n: k });
    }
    let neighbors = cosine_neighbors(space, pivot, k)?;
    if neighbors.len() < g {
        return Err(Error::BadClusterCount {
            k: g,
            n: neighbors.len(),
        });
    }
    let points: Vec<Vec<f64>> = neighbors
        .iter()
        .map(|(t, _)| space.vector(t).unwrap().to_vec())
        .collect();
    let clustering = kmeans(&points, g, seed, 100)?;
    let members = neighbors
        .into_iter()
        .zip(&clustering.assignments)
        .map(|((term, cos), &group)| {
            let v = space.vector(&term).unwrap();
            FieldMember {
                term,
                cosine: cos,
                group,
                x: v.first().copied().unwrap_or(0.0),
                y: v.get(1).copied().unwrap_or(0.0),
            }
        })
        .collect();
    Ok(SemanticField {
        pivot: pivot.to_string(),
        members,
        groups: g,
    })
}
