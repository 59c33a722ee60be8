//! Tokenization and lookup lemmatization.
//!
//! Medieval Latin spelling varies freely between u/v and i/j, so both the
//! lexicon keys and the tokens are folded to one orthography before lookup.
//! Disambiguation is context-free: the highest-weight candidate wins, ties
//! break lexicographically. Unknown forms pass through as their own lemma
//! with `known = false`, which keeps token counts stable and makes the
//! unknown rate a reportable number.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufRead, BufReader};
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Lowercase maximal runs of Unicode letters; digits and punctuation are
/// discarded. Roman numerals are letter runs and survive as tokens.
pub fn tokenize(text: &str) -> Vec<String> {
    let mut tokens = Vec::new();
    let mut current = String::new();
    for ch in text.chars() {
        if ch.is_alphabetic() {
            for lower in ch.to_lowercase() {
                current.push(lower);
            }
        } else if !current.is_empty() {
            tokens.push(std::mem::take(&mut current));
        }
    }
    if !current.is_empty() {
        tokens.push(current);
    }
    tokens
}

/// Fold orthographic variants onto one key: v->u, j->i, ae/oe ligatures
/// expanded. Input is expected lowercase (tokenize output). Idempotent.
pub fn normalize_form(form: &str) -> String {
    let mut out = String::with_capacity(form.len());
    for ch in form.chars() {
        match ch {
            'v' => out.push('u'),
            'j' => out.push('i'),
            'æ' => out.push_str("ae"),
            'œ' => out.push_str("oe"),
            _ => out.push(ch),
        }
    }
    out
}

/// A lemma candidate for one normalized form.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Candidate {
    pub lemma: String,
    pub weight: f64,
}

/// Lookup lexicon: normalized surface form -> weighted lemma candidates.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Lexicon {
    entries: HashMap<String, Vec<Candidate>>,
    /// Rows dropped while loading, with reasons.
    pub skipped_rows: Vec<(usize, String)>,
}

impl Lexicon {
    pub fn new() -> Self {
        Lexicon::default()
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Add one (form, lemma, weight) row. The form is normalized here;
    /// duplicate (form, lemma) pairs accumulate weight.
    pub fn add(&mut self, form: &str, lemma: &str, weight: f64) {
        let key = normalize_form(&form.to_lowercase());
        let candidates = self.entries.entry(key).or_default();
        match candidates.iter_mut().find(|c| c.lemma == lemma) {
            Some(c) => c.weight += weight,
            None => candidates.push(Candidate {
                lemma: lemma.to_string(),
                weight,
            }),
        }
    }

    pub fn candidates(&self, normalized_form: &str) -> Option<&[Candidate]> {
        self.entries.get(normalized_form).map(|v| v.as_slice())
    }

    /// Winning lemma for a normalized form: weight argmax, ties broken
    /// lexicographically. None when the form is unknown.
    pub fn best_lemma(&self, normalized_form: &str) -> Option<&str> {
        let candidates = self.entries.get(normalized_form)?;
        candidates
            .iter()
            .max_by(|a, b| {
                a.weight
                    .partial_cmp(&b.weight)
                    .unwrap()
                    .then_with(|| b.lemma.cmp(&a.lemma))
            })
            .map(|c| c.lemma.as_str())
    }
}

/// Load a `form<TAB>lemma<TAB>weight` lexicon. Malformed rows are skipped
/// with a note; a lexicon with no valid rows is an error.
pub fn load_lexicon(path: &Path) -> Result<Lexicon> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let mut lexicon = Lexicon::new();
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() || line.starts_with('#') {
            continue;
        }
        let fields: Vec<&str> = line.split('\t').collect();
        if fields.len() != 3 {
            lexicon
                .skipped_rows
                .push((lineno + 1, format!("expected 3 fields, got {}", fields.len())));
            continue;
        }
        let (form, lemma) = (fields[0].trim(), fields[1].trim());
        if form.is_empty() || lemma.is_empty() {
            lexicon
                .skipped_rows
                .push((lineno + 1, "empty form or lemma".to_string()));
            continue;
        }
        match fields[2].trim().parse::<f64>() {
            Ok(w) if w >= 0.0 && w.is_finite() => lexicon.add(form, lemma, w),
            _ => lexicon
                .skipped_rows
                .push((lineno + 1, format!("invalid weight {:?}", fields[2]))),
        }
    }
    if lexicon.is_empty() {
        return Err(Error::EmptyLexicon {
            path: path.display().to_string(),
        });
    }
    Ok(lexicon)
}

/// One lemmatized token, as strings. Interning into dense ids happens when
/// the index is built.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct LemmaToken {
    pub form: String,
    pub lemma: String,
    pub known: bool,
}

/// Map every token to exactly one lemma. Total: token count in equals token
/// count out, and unknown forms map to themselves.
pub fn lemmatize(tokens: &[String], lexicon: &Lexicon) -> Vec<LemmaToken> {
    tokens
        .iter()
        .map(|token| {
            let normalized = normalize_form(token);
            match lexicon.best_lemma(&normalized) {
                Some(lemma) => LemmaToken {
                    form: normalized,
                    lemma: lemma.to_string(),
                    known: true,
                },
                None => LemmaToken {
                    lemma: normalized.clone(),
                    form: normalized,
                    known: false,
                },
            }
        })
        .collect()
}
