//! The queryable corpus: interned token streams, frequency tables, postings,
//! temporal slice plans, and contingency-table extraction.
//!
//! Charters are sorted by id before numbering, so the built index is
//! identical whatever the input order or thread count.

use std::collections::HashMap;
use std::fs::File;
use std::io::{BufReader, BufWriter, Read, Write};
use std::path::Path;

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::ingest::Corpus;
use crate::lemma::{lemmatize, tokenize, Lexicon};
use crate::model::{Charter, FormId, LemmaId};

/// Bijective string <-> dense id mapping, stable for a built index.
#[derive(Debug, Clone, Default, Serialize, Deserialize)]
pub struct Vocabulary {
    strings: Vec<String>,
    #[serde(skip)]
    ids: HashMap<String, u32>,
}

impl Vocabulary {
    pub fn new() -> Self {
        Vocabulary::default()
    }

    fn rebuild_ids(&mut self) {
        self.ids = self
            .strings
            .iter()
            .enumerate()
            .map(|(i, s)| (s.clone(), i as u32))
            .collect();
    }

    pub fn intern(&mut self, s: &str) -> u32 {
        if let Some(&id) = self.ids.get(s) {
            return id;
        }
        let id = self.strings.len() as u32;
        self.strings.push(s.to_string());
        self.ids.insert(s.to_string(), id);
        id
    }

    pub fn id(&self, s: &str) -> Option<u32> {
        self.ids.get(s).copied()
    }

    pub fn string(&self, id: u32) -> &str {
        &self.strings[id as usize]
    }

    pub fn len(&self) -> usize {
        self.strings.len()
    }

    pub fn is_empty(&self) -> bool {
        self.strings.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = (u32, &str)> {
        self.strings
            .iter()
            .enumerate()
            .map(|(i, s)| (i as u32, s.as_str()))
    }
}

/// One token of a charter after lemmatization and interning.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct Token {
    pub form: FormId,
    pub lemma: LemmaId,
    pub known: bool,
}

/// A charter plus its token stream.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct IndexedCharter {
    pub meta: Charter,
    pub provenance: Vec<String>,
    pub tokens: Vec<Token>,
}

/// The built corpus index.
#[derive(Debug, Clone)]
pub struct Index {
    pub charters: Vec<IndexedCharter>,
    pub forms: Vocabulary,
    pub lemmas: Vocabulary,
    /// Corpus frequency per lemma id.
    pub lemma_freq: Vec<u64>,
    /// Occurrences of each lemma as (charter index, token position), in
    /// charter order.
    pub postings: Vec<Vec<(u32, u32)>>,
    pub total_tokens: u64,
    pub unknown_tokens: u64,
    id_to_idx: HashMap<String, u32>,
}

impl Index {
    pub fn charter_count(&self) -> usize {
        self.charters.len()
    }

    pub fn token_count(&self, charter: usize) -> u64 {
        self.charters[charter].tokens.len() as u64
    }

    pub fn unknown_rate(&self) -> f64 {
        if self.total_tokens == 0 {
            0.0
        } else {
            self.unknown_tokens as f64 / self.total_tokens as f64
        }
    }

    pub fn charter_index(&self, id: &str) -> Option<u32> {
        self.id_to_idx.get(id).copied()
    }

    pub fn lemma_id(&self, lemma: &str) -> Option<LemmaId> {
        self.lemmas.id(lemma).map(LemmaId)
    }

    /// Frequency of a lemma string, 0 if unknown.
    pub fn lemma_frequency(&self, lemma: &str) -> u64 {
        self.lemma_id(lemma)
            .map(|id| self.lemma_freq[id.index()])
            .unwrap_or(0)
    }

    /// Unknown surface forms with their frequencies, sorted by frequency
    /// descending then form ascending.
    pub fn unknown_report(&self) -> Vec<(String, u64)> {
        let mut freq: HashMap<u32, u64> = HashMap::new();
        for charter in &self.charters {
            for token in &charter.tokens {
                if !token.known {
                    *freq.entry(token.form.0).or_insert(0) += 1;
                }
            }
        }
        let mut rows: Vec<(String, u64)> = freq
            .into_iter()
            .map(|(form, n)| (self.forms.string(form).to_string(), n))
            .collect();
        rows.sort_by(|a, b| b.1.cmp(&a.1).then_with(|| a.0.cmp(&b.0)));
        rows
    }
}

/// Tokenize, lemmatize and intern a merged corpus.
///
/// Lemmatization runs in parallel per charter; interning and numbering is a
/// single deterministic pass over the id-sorted charters.
pub fn build_index(corpus: &Corpus, lexicon: &Lexicon) -> Index {
    let mut order: Vec<usize> = (0..corpus.charters.len()).collect();
    order.sort_by(|&a, &b| corpus.charters[a].id.cmp(&corpus.charters[b].id));

    let lemmatized: Vec<Vec<crate::lemma::LemmaToken>> = order
        .par_iter()
        .map(|&i| lemmatize(&tokenize(&corpus.charters[i].text), lexicon))
        .collect();

    let mut forms = Vocabulary::new();
    let mut lemmas = Vocabulary::new();
    let mut charters = Vec::with_capacity(order.len());
    let mut total_tokens = 0u64;
    let mut unknown_tokens = 0u64;

    for (slot, &src) in order.iter().enumerate() {
        let stream: Vec<Token> = lemmatized[slot]
            .iter()
            .map(|t| {
                if !t.known {
                    unknown_tokens += 1;
                }
                Token {
                    form: FormId(forms.intern(&t.form)),
                    lemma: LemmaId(lemmas.intern(&t.lemma)),
                    known: t.known,
                }
            })
            .collect();
        total_tokens += stream.len() as u64;
        charters.push(IndexedCharter {
            meta: corpus.charters[src].clone(),
            provenance: corpus
                .provenance
                .get(src)
                .cloned()
                .unwrap_or_default(),
            tokens: stream,
        });
    }

    let (lemma_freq, postings) = tally(&charters, lemmas.len());
    let id_to_idx = charters
        .iter()
        .enumerate()
        .map(|(i, c)| (c.meta.id.clone(), i as u32))
        .collect();

    Index {
        charters,
        forms,
        lemmas,
        lemma_freq,
        postings,
        total_tokens,
        unknown_tokens,
        id_to_idx,
    }
}

fn tally(charters: &[IndexedCharter], n_lemmas: usize) -> (Vec<u64>, Vec<Vec<(u32, u32)>>) {
    let mut freq = vec![0u64; n_lemmas];
    let mut postings = vec![Vec::new(); n_lemmas];
    for (ci, charter) in charters.iter().enumerate() {
        for (pos, token) in charter.tokens.iter().enumerate() {
            freq[token.lemma.index()] += 1;
            postings[token.lemma.index()].push((ci as u32, pos as u32));
        }
    }
    (freq, postings)
}

// ---------------------------------------------------------------------------
// Persistence
// ---------------------------------------------------------------------------

const INDEX_MAGIC: &[u8; 4] = b"SCIX";
const INDEX_VERSION: u32 = 1;

// Charter metadata uses a flattened map for its unrecognized fields, which
// the binary codec cannot encode; on disk the map travels as a JSON string.
#[derive(Serialize, Deserialize)]
struct CharterDisk {
    id: String,
    source_corpus: String,
    text: String,
    not_before: i32,
    not_after: i32,
    lat: Option<f64>,
    lon: Option<f64>,
    region: Option<String>,
    institution: Option<String>,
    doc_type: Option<String>,
    language: Option<String>,
    extra_json: String,
}

impl CharterDisk {
    fn from_charter(c: &Charter) -> Self {
        CharterDisk {
            id: c.id.clone(),
            source_corpus: c.source_corpus.clone(),
            text: c.text.clone(),
            not_before: c.not_before,
            not_after: c.not_after,
            lat: c.lat,
            lon: c.lon,
            region: c.region.clone(),
            institution: c.institution.clone(),
            doc_type: c.doc_type.clone(),
            language: c.language.clone(),
            extra_json: if c.extra.is_empty() {
                String::new()
            } else {
                serde_json::to_string(&c.extra).expect("extra map serializes")
            },
        }
    }

    fn into_charter(self) -> std::result::Result<Charter, serde_json::Error> {
        let extra = if self.extra_json.is_empty() {
            Default::default()
        } else {
            serde_json::from_str(&self.extra_json)?
        };
        Ok(Charter {
            id: self.id,
            source_corpus: self.source_corpus,
            text: self.text,
            not_before: self.not_before,
            not_after: self.not_after,
            lat: self.lat,
            lon: self.lon,
            region: self.region,
            institution: self.institution,
            doc_type: self.doc_type,
            language: self.language,
            extra,
        })
    }
}

#[derive(Serialize, Deserialize)]
struct IndexedCharterDisk {
    meta: CharterDisk,
    provenance: Vec<String>,
    tokens: Vec<Token>,
}

#[derive(Serialize, Deserialize)]
struct IndexFile {
    charters: Vec<IndexedCharterDisk>,
    forms: Vocabulary,
    lemmas: Vocabulary,
}

impl Index {
    /// Persist to a single binary file with an embedded format version.
    /// Postings and frequency tables are rebuilt on load.
    pub fn save(&self, path: &Path) -> Result<()> {
        let file = File::create(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut writer = BufWriter::new(file);
        writer
            .write_all(INDEX_MAGIC)
            .and_then(|_| writer.write_all(&INDEX_VERSION.to_le_bytes()))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let body = IndexFile {
            charters: self
                .charters
                .iter()
                .map(|c| IndexedCharterDisk {
                    meta: CharterDisk::from_charter(&c.meta),
                    provenance: c.provenance.clone(),
                    tokens: c.tokens.clone(),
                })
                .collect(),
            forms: self.forms.clone(),
            lemmas: self.lemmas.clone(),
        };
        bincode::serialize_into(&mut writer, &body).map_err(|e| Error::BadIndexFile {
            path: path.display().to_string(),
            reason: e.to_string(),
        })?;
        writer
            .flush()
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    pub fn load(path: &Path) -> Result<Index> {
        let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut reader = BufReader::new(file);
        let mut magic = [0u8; 4];
        let mut version = [0u8; 4];
        reader
            .read_exact(&mut magic)
            .and_then(|_| reader.read_exact(&mut version))
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        if &magic != INDEX_MAGIC {
            return Err(Error::BadIndexFile {
                path: path.display().to_string(),
                reason: "not an index file (bad magic)".into(),
            });
        }
        let version = u32::from_le_bytes(version);
        if version != INDEX_VERSION {
            return Err(Error::IndexVersion {
                found: version,
                expected: INDEX_VERSION,
            });
        }
        let mut body: IndexFile =
            bincode::deserialize_from(&mut reader).map_err(|e| Error::BadIndexFile {
                path: path.display().to_string(),
                reason: e.to_string(),
            })?;
        body.forms.rebuild_ids();
        body.lemmas.rebuild_ids();

        let mut charters = Vec::with_capacity(body.charters.len());
        for disk in body.charters {
            let meta = disk.meta.into_charter().map_err(|e| Error::BadIndexFile {
                path: path.display().to_string(),
                reason: format!("corrupt metadata: {e}"),
            })?;
            charters.push(IndexedCharter {
                meta,
                provenance: disk.provenance,
                tokens: disk.tokens,
            });
        }

        let (lemma_freq, postings) = tally(&charters, body.lemmas.len());
        let total_tokens: u64 = charters.iter().map(|c| c.tokens.len() as u64).sum();
        let unknown_tokens: u64 = charters
            .iter()
            .flat_map(|c| c.tokens.iter())
            .filter(|t| !t.known)
            .count() as u64;
        let id_to_idx = charters
            .iter()
            .enumerate()
            .map(|(i, c)| (c.meta.id.clone(), i as u32))
            .collect();
        Ok(Index {
            charters,
            forms: body.forms,
            lemmas: body.lemmas,
            lemma_freq,
            postings,
            total_tokens,
            unknown_tokens,
            id_to_idx,
        })
    }
}

// ---------------------------------------------------------------------------
// Slice plans
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum SliceKind {
    HalfCentury,
    EqualTokens,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Slice {
    pub label: String,
    /// Charter indices into the index, ascending.
    pub charters: Vec<u32>,
    pub tokens: u64,
}

/// An ordered partition of the dateable corpus into labeled slices.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlicePlan {
    pub kind: SliceKind,
    pub slices: Vec<Slice>,
    /// Charters outside the requested range, excluded but counted.
    pub excluded: usize,
}

impl SlicePlan {
    /// Charter index -> slice position lookup.
    pub fn assignment(&self, n_charters: usize) -> Vec<Option<u32>> {
        let mut map = vec![None; n_charters];
        for (si, slice) in self.slices.iter().enumerate() {
            for &ci in &slice.charters {
                map[ci as usize] = Some(si as u32);
            }
        }
        map
    }
}

/// Half-century label, e.g. "900–949".
fn half_century_label(bin_start: i32) -> String {
    format!("{}–{}", bin_start, bin_start + 49)
}

/// Assign each charter to the half-century containing its midpoint year.
/// `range` is `[year_lo, year_hi)` with both bounds multiples of 50; bins
/// are `[x00–x49]` and `[x50–x99]`. Out-of-range charters are excluded and
/// counted.
pub fn slice_by_halfcentury(index: &Index, range: (i32, i32)) -> Result<SlicePlan> {
    let (lo, hi) = range;
    if lo % 50 != 0 || hi % 50 != 0 || lo >= hi {
        return Err(Error::BadSliceRange { lo, hi });
    }
    let n_bins = ((hi - lo) / 50) as usize;
    let mut slices: Vec<Slice> = (0..n_bins)
        .map(|b| Slice {
            label: half_century_label(lo + 50 * b as i32),
            charters: Vec::new(),
            tokens: 0,
        })
        .collect();
    let mut excluded = 0usize;
    let mut any = false;
    for (ci, charter) in index.charters.iter().enumerate() {
        let y = charter.meta.midpoint();
        if y < lo || y >= hi {
            excluded += 1;
            continue;
        }
        any = true;
        let bin = ((y - lo) / 50) as usize;
        slices[bin].charters.push(ci as u32);
        slices[bin].tokens += charter.tokens.len() as u64;
    }
    if !any {
        return Err(Error::NoDateableCharters);
    }
    Ok(SlicePlan {
        kind: SliceKind::HalfCentury,
        slices,
        excluded,
    })
}

/// Cut the corpus into `k` chronological slices of near-equal token counts,
/// labeled P1..Pk. Charters are ordered by midpoint year (ties by id) and
/// greedily assigned until each slice reaches its share of the remaining
/// tokens.
pub fn slice_equal_tokens(index: &Index, k: usize) -> Result<SlicePlan> {
    if k == 0 {
        return Err(Error::BadSliceCount(0));
    }
    let n = index.charters.len();
    if n == 0 {
        return Err(Error::NoDateableCharters);
    }
    if k > n {
        return Err(Error::TooManySlices { k, n });
    }
    let mut order: Vec<u32> = (0..n as u32).collect();
    order.sort_by(|&a, &b| {
        let ca = &index.charters[a as usize];
        let cb = &index.charters[b as usize];
        ca.meta
            .midpoint()
            .cmp(&cb.meta.midpoint())
            .then_with(|| ca.meta.id.cmp(&cb.meta.id))
    });

    let mut remaining_tokens: u64 = index.total_tokens;
    let mut slices = Vec::with_capacity(k);
    let mut cursor = 0usize;
    for s in 0..k {
        let slices_left = (k - s) as u64;
        let target = remaining_tokens.div_ceil(slices_left);
        let mut slice = Slice {
            label: format!("P{}", s + 1),
            charters: Vec::new(),
            tokens: 0,
        };
        while cursor < n {
            let charters_left = (n - cursor) as u64;
            let ci = order[cursor];
            let t = index.charters[ci as usize].tokens.len() as u64;
            let must_take = slice.charters.is_empty();
            // Later slices each still need one charter.
            let may_take = charters_left > slices_left - 1;
            // Take the straddling charter only if that lands closer to the
            // target than stopping short would.
            let closer = slice.tokens < target
                && (slice.tokens + t).abs_diff(target) <= target - slice.tokens;
            if must_take || (may_take && closer) {
                slice.charters.push(ci);
                slice.tokens += t;
                remaining_tokens -= t;
                cursor += 1;
            } else {
                break;
            }
        }
        slices.push(slice);
    }
    // The last target is exactly the remaining mass, so Pk drains the corpus.
    debug_assert_eq!(cursor, n);
    for slice in &mut slices {
        slice.charters.sort_unstable();
    }
    Ok(SlicePlan {
        kind: SliceKind::EqualTokens,
        slices,
        excluded: 0,
    })
}

// ---------------------------------------------------------------------------
// Charter filters
// ---------------------------------------------------------------------------

/// Metadata predicate for selecting charters. Empty filter matches all.
#[derive(Debug, Clone, Default)]
pub struct CharterFilter {
    pub sources: Option<Vec<String>>,
    pub regions: Option<Vec<String>>,
    pub doc_types: Option<Vec<String>>,
    /// Midpoint year within `[lo, hi]`, inclusive.
    pub date_range: Option<(i32, i32)>,
}

impl CharterFilter {
    pub fn matches(&self, charter: &Charter) -> bool {
        if let Some(sources) = &self.sources {
            if !sources.iter().any(|s| s == &charter.source_corpus) {
                return false;
            }
        }
        if let Some(regions) = &self.regions {
            match &charter.region {
                Some(r) if regions.iter().any(|x| x == r) => {}
                _ => return false,
            }
        }
        if let Some(doc_types) = &self.doc_types {
            match &charter.doc_type {
                Some(t) if doc_types.iter().any(|x| x == t) => {}
                _ => return false,
            }
        }
        if let Some((lo, hi)) = self.date_range {
            let y = charter.midpoint();
            if y < lo || y > hi {
                return false;
            }
        }
        true
    }
}

// ---------------------------------------------------------------------------
// Contingency tables
// ---------------------------------------------------------------------------

/// Row/column counts with marginals; the input to correspondence analysis
/// and to PPMI weighting.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ContingencyTable {
    pub row_labels: Vec<String>,
    pub col_labels: Vec<String>,
    /// Row-major counts, `rows x cols`.
    pub counts: Vec<u64>,
    pub row_totals: Vec<u64>,
    pub col_totals: Vec<u64>,
    pub n: u64,
}

impl ContingencyTable {
    pub fn from_counts(
        row_labels: Vec<String>,
        col_labels: Vec<String>,
        counts: Vec<u64>,
    ) -> Self {
        assert_eq!(counts.len(), row_labels.len() * col_labels.len());
        let rows = row_labels.len();
        let cols = col_labels.len();
        let mut row_totals = vec![0u64; rows];
        let mut col_totals = vec![0u64; cols];
        let mut n = 0u64;
        for r in 0..rows {
            for c in 0..cols {
                let v = counts[r * cols + c];
                row_totals[r] += v;
                col_totals[c] += v;
                n += v;
            }
        }
        ContingencyTable {
            row_labels,
            col_labels,
            counts,
            row_totals,
            col_totals,
            n,
        }
    }

    pub fn rows(&self) -> usize {
        self.row_labels.len()
    }

    pub fn cols(&self) -> usize {
        self.col_labels.len()
    }

    pub fn get(&self, r: usize, c: usize) -> u64 {
        self.counts[r * self.cols() + c]
    }

    /// Marginal/total consistency, exact integer arithmetic.
    pub fn is_consistent(&self) -> bool {
        let rows = self.rows();
        let cols = self.cols();
        let mut n = 0u64;
        for r in 0..rows {
            let sum: u64 = (0..cols).map(|c| self.get(r, c)).sum();
            if sum != self.row_totals[r] {
                return false;
            }
            n += sum;
        }
        for c in 0..cols {
            let sum: u64 = (0..rows).map(|r| self.get(r, c)).sum();
            if sum != self.col_totals[c] {
                return false;
            }
        }
        n == self.n
    }
}

/// What the rows and columns of a contingency table should be.
#[derive(Debug, Clone)]
pub enum TableSpec<'a> {
    /// Rows = the given lemmas, columns = the plan's slices.
    LemmasBySlice {
        lemmas: &'a [String],
        plan: &'a SlicePlan,
    },
    /// Rows = charters, columns = lemma or bi-lemma features with corpus
    /// frequency >= `min_freq` over the filtered charters.
    ChartersByFeatures {
        features: FeatureKind,
        min_freq: u64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum FeatureKind {
    Lemmas,
    /// Adjacent ordered lemma pairs within one charter.
    Bilemmas,
}

/// Build a contingency table over the filtered corpus.
pub fn contingency(index: &Index, spec: TableSpec<'_>, filter: &CharterFilter) -> Result<ContingencyTable> {
    match spec {
        TableSpec::LemmasBySlice { lemmas, plan } => lemmas_by_slice(index, lemmas, plan, filter),
        TableSpec::ChartersByFeatures { features, min_freq } => {
            charters_by_features(index, features, min_freq, filter)
        }
    }
}

fn lemmas_by_slice(
    index: &Index,
    lemmas: &[String],
    plan: &SlicePlan,
    filter: &CharterFilter,
) -> Result<ContingencyTable> {
    if lemmas.is_empty() || plan.slices.is_empty() {
        return Err(Error::EmptyTable);
    }
    let assignment = plan.assignment(index.charters.len());
    let keep: Vec<bool> = index
        .charters
        .iter()
        .map(|c| filter.matches(&c.meta))
        .collect();
    let cols = plan.slices.len();
    let mut counts = vec![0u64; lemmas.len() * cols];
    for (r, lemma) in lemmas.iter().enumerate() {
        if let Some(id) = index.lemmas.id(lemma) {
            for &(ci, _) in &index.postings[id as usize] {
                if !keep[ci as usize] {
                    continue;
                }
                if let Some(s) = assignment[ci as usize] {
                    counts[r * cols + s as usize] += 1;
                }
            }
        }
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyTable);
    }
    Ok(ContingencyTable::from_counts(
        lemmas.to_vec(),
        plan.slices.iter().map(|s| s.label.clone()).collect(),
        counts,
    ))
}

fn charters_by_features(
    index: &Index,
    features: FeatureKind,
    min_freq: u64,
    filter: &CharterFilter,
) -> Result<ContingencyTable> {
    let selected: Vec<u32> = (0..index.charters.len() as u32)
        .filter(|&ci| filter.matches(&index.charters[ci as usize].meta))
        .collect();
    if selected.is_empty() {
        return Err(Error::EmptyTable);
    }

    // Frequency pass over the filtered charters.
    let mut freq: HashMap<String, u64> = HashMap::new();
    for &ci in &selected {
        let charter = &index.charters[ci as usize];
        match features {
            FeatureKind::Lemmas => {
                for t in &charter.tokens {
                    *freq
                        .entry(index.lemmas.string(t.lemma.0).to_string())
                        .or_insert(0) += 1;
                }
            }
            FeatureKind::Bilemmas => {
                for pair in charter.tokens.windows(2) {
                    let label = format!(
                        "{} {}",
                        index.lemmas.string(pair[0].lemma.0),
                        index.lemmas.string(pair[1].lemma.0)
                    );
                    *freq.entry(label).or_insert(0) += 1;
                }
            }
        }
    }
    let mut cols: Vec<String> = freq
        .iter()
        .filter(|(_, &n)| n >= min_freq)
        .map(|(label, _)| label.clone())
        .collect();
    cols.sort();
    if cols.is_empty() {
        return Err(Error::EmptyTable);
    }
    let col_of: HashMap<&str, usize> = cols.iter().enumerate().map(|(i, s)| (s.as_str(), i)).collect();

    let mut counts = vec![0u64; selected.len() * cols.len()];
    for (r, &ci) in selected.iter().enumerate() {
        let charter = &index.charters[ci as usize];
        match features {
            FeatureKind::Lemmas => {
                for t in &charter.tokens {
                    if let Some(&c) = col_of.get(index.lemmas.string(t.lemma.0)) {
                        counts[r * cols.len() + c] += 1;
                    }
                }
            }
            FeatureKind::Bilemmas => {
                for pair in charter.tokens.windows(2) {
                    let label = format!(
                        "{} {}",
                        index.lemmas.string(pair[0].lemma.0),
                        index.lemmas.string(pair[1].lemma.0)
                    );
                    if let Some(&c) = col_of.get(label.as_str()) {
                        counts[r * cols.len() + c] += 1;
                    }
                }
            }
        }
    }
    if counts.iter().all(|&c| c == 0) {
        return Err(Error::EmptyTable);
    }
    Ok(ContingencyTable::from_counts(
        selected
            .iter()
            .map(|&ci| index.charters[ci as usize].meta.id.clone())
            .collect(),
        cols,
        counts,
    ))
}
