//! Reading source corpora, cleaning edition text, and merging batches into
//! one deduplicated corpus.
//!
//! Two input formats are supported: JSON Lines with one charter object per
//! line, and a TSV metadata table next to a directory of `<id>.txt` files.
//! Malformed records never abort a batch; they land in `rejects`.

use std::collections::{BTreeMap, HashMap, HashSet};
use std::fs::File;
use std::io::{BufRead, BufReader, Read};
use std::path::{Path, PathBuf};

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::model::{validate_charter, Charter, Rejection};

/// Input format of a source corpus.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum CorpusFormat {
    /// One JSON charter object per line.
    Jsonl,
    /// TSV metadata table; charter text in `<id>.txt` files in a sibling
    /// directory (`<table stem>_texts/` by default).
    TsvTextDir,
}

/// One source corpus read from disk: cleaned charters in input order plus
/// the records that failed validation.
#[derive(Debug, Clone)]
pub struct CorpusBatch {
    pub source: String,
    pub charters: Vec<Charter>,
    pub rejects: Vec<Rejection>,
}

/// A merged, deduplicated document set. `provenance[i]` lists the
/// `source:original_id` pairs that contributed charter `i`.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct Corpus {
    pub charters: Vec<Charter>,
    pub provenance: Vec<Vec<String>>,
}

impl Corpus {
    pub fn len(&self) -> usize {
        self.charters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.charters.is_empty()
    }
}

/// Strip editorial apparatus and normalize whitespace. Idempotent.
///
/// Square-bracket insertions (folio marks, "[sic]", editorial completions)
/// are removed whole; parenthesized text is part of the charter and kept.
/// Control characters are dropped and all whitespace runs collapse to a
/// single space.
pub fn clean_text(raw: &str) -> String {
    // Pass 1: drop [...] spans. An unmatched '[' is kept literally.
    let mut no_brackets = String::with_capacity(raw.len());
    let mut rest = raw;
    while let Some(open) = rest.find('[') {
        let (before, from_open) = rest.split_at(open);
        no_brackets.push_str(before);
        match from_open.find(']') {
            Some(close) => rest = &from_open[close + 1..],
            None => {
                no_brackets.push_str(from_open);
                rest = "";
            }
        }
    }
    no_brackets.push_str(rest);

    // Pass 2: drop control characters, collapse whitespace.
    let mut out = String::with_capacity(no_brackets.len());
    let mut pending_space = false;
    for ch in no_brackets.chars() {
        if ch.is_whitespace() {
            pending_space = true;
        } else if ch.is_control() {
            continue;
        } else {
            if pending_space && !out.is_empty() {
                out.push(' ');
            }
            pending_space = false;
            out.push(ch);
        }
    }
    out
}

/// Read one source corpus. Every record becomes a charter or a rejection;
/// input order is preserved. The batch `source` is the file stem.
pub fn read_corpus(path: &Path, format: CorpusFormat) -> Result<CorpusBatch> {
    let source = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| path.display().to_string());
    let mut batch = CorpusBatch {
        source,
        charters: Vec::new(),
        rejects: Vec::new(),
    };
    match format {
        CorpusFormat::Jsonl => read_jsonl(path, &mut batch)?,
        CorpusFormat::TsvTextDir => read_tsv(path, &mut batch)?,
    }
    enforce_unique_ids(&mut batch);
    Ok(batch)
}

fn read_jsonl(path: &Path, batch: &mut CorpusBatch) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    for (lineno, line) in reader.lines().enumerate() {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str::<Charter>(&line) {
            Ok(mut charter) => {
                charter.text = clean_text(&charter.text);
                if charter.source_corpus.is_empty() {
                    charter.source_corpus = batch.source.clone();
                }
                match validate_charter(charter) {
                    Ok(c) => batch.charters.push(c),
                    Err(r) => batch.rejects.push(r),
                }
            }
            Err(e) => batch.rejects.push(Rejection::new(
                format!("line {}", lineno + 1),
                "record",
                format!("malformed json: {e}"),
            )),
        }
    }
    Ok(())
}

const TSV_HEADER: [&str; 9] = [
    "id",
    "not_before",
    "not_after",
    "lat",
    "lon",
    "region",
    "institution",
    "doc_type",
    "language",
];

/// Directory holding `<id>.txt` files for a TSV table at `path`.
pub fn text_dir_for(path: &Path) -> PathBuf {
    let stem = path
        .file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_default();
    path.with_file_name(format!("{stem}_texts"))
}

fn read_tsv(path: &Path, batch: &mut CorpusBatch) -> Result<()> {
    let file = File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let reader = BufReader::new(file);
    let text_dir = text_dir_for(path);
    let mut lines = reader.lines().enumerate();

    let header = match lines.next() {
        Some((_, line)) => line.map_err(|e| Error::io(path.display().to_string(), e))?,
        None => return Ok(()), // empty file, empty batch
    };
    let cols: Vec<&str> = header.split('\t').collect();
    if cols != TSV_HEADER {
        return Err(Error::InvalidInput(format!(
            "unexpected TSV header in {}: expected {}",
            path.display(),
            TSV_HEADER.join("\\t")
        )));
    }

    for (lineno, line) in lines {
        let line = line.map_err(|e| Error::io(path.display().to_string(), e))?;
        if line.trim().is_empty() {
            continue;
        }
        match parse_tsv_row(&line, &text_dir, &batch.source) {
            Ok(charter) => match validate_charter(charter) {
                Ok(c) => batch.charters.push(c),
                Err(r) => batch.rejects.push(r),
            },
            Err(r) => batch.rejects.push(Rejection {
                id: if r.id.is_empty() {
                    format!("line {}", lineno + 1)
                } else {
                    r.id
                },
                ..r
            }),
        }
    }
    Ok(())
}

fn parse_tsv_row(line: &str, text_dir: &Path, source: &str) -> std::result::Result<Charter, Rejection> {
    let fields: Vec<&str> = line.split('\t').collect();
    if fields.len() != TSV_HEADER.len() {
        return Err(Rejection::new(
            "",
            "record",
            format!("expected {} fields, got {}", TSV_HEADER.len(), fields.len()),
        ));
    }
    let id = fields[0].trim();
    let year = |s: &str, field: &str| -> std::result::Result<i32, Rejection> {
        s.trim()
            .parse::<i32>()
            .map_err(|_| Rejection::new(id, field, format!("invalid year {s:?}")))
    };
    let coord = |s: &str, field: &str| -> std::result::Result<Option<f64>, Rejection> {
        let s = s.trim();
        if s.is_empty() {
            return Ok(None);
        }
        s.parse::<f64>()
            .map(Some)
            .map_err(|_| Rejection::new(id, field, format!("invalid coordinate {s:?}")))
    };
    let opt = |s: &str| -> Option<String> {
        let s = s.trim();
        (!s.is_empty()).then(|| s.to_string())
    };

    let text_path = text_dir.join(format!("{id}.txt"));
    let mut text = String::new();
    match File::open(&text_path) {
        Ok(mut f) => {
            f.read_to_string(&mut text)
                .map_err(|_| Rejection::new(id, "text", "text file not valid UTF-8"))?;
        }
        Err(_) => return Err(Rejection::new(id, "text", "text file absent")),
    }

    Ok(Charter {
        id: id.to_string(),
        source_corpus: source.to_string(),
        text: clean_text(&text),
        not_before: year(fields[1], "not_before")?,
        not_after: year(fields[2], "not_after")?,
        lat: coord(fields[3], "lat")?,
        lon: coord(fields[4], "lon")?,
        region: opt(fields[5]),
        institution: opt(fields[6]),
        doc_type: opt(fields[7]),
        language: opt(fields[8]),
        extra: BTreeMap::new(),
    })
}

/// Second and later occurrences of an id within one batch are rejected.
fn enforce_unique_ids(batch: &mut CorpusBatch) {
    let mut seen = HashSet::new();
    let mut kept = Vec::with_capacity(batch.charters.len());
    for charter in batch.charters.drain(..) {
        if seen.insert(charter.id.clone()) {
            kept.push(charter);
        } else {
            batch
                .rejects
                .push(Rejection::new(&charter.id, "id", "duplicate id within batch"));
        }
    }
    batch.charters = kept;
}

/// Merge batches into one corpus.
///
/// Batches are processed in source-name order, so the result does not depend
/// on the order in which they were read. Records with identical cleaned text
/// and date interval collapse to one charter whose provenance lists every
/// contributor. When the same id appears in several batches with different
/// content, every bearer of that id is renamed `source:id`.
pub fn merge_corpora(batches: Vec<CorpusBatch>) -> Corpus {
    let mut batches = batches;
    batches.sort_by(|a, b| a.source.cmp(&b.source));

    // How many distinct batches carry each id; needed to spot collisions.
    let mut id_sources: HashMap<String, HashSet<String>> = HashMap::new();
    for batch in &batches {
        for charter in &batch.charters {
            id_sources
                .entry(charter.id.clone())
                .or_default()
                .insert(batch.source.clone());
        }
    }

    let mut charters: Vec<Charter> = Vec::new();
    let mut provenance: Vec<Vec<String>> = Vec::new();
    // (cleaned text, not_before, not_after) -> index into `charters`
    let mut dedup: BTreeMap<(String, i32, i32), usize> = BTreeMap::new();

    for batch in batches {
        for mut charter in batch.charters {
            let origin = format!("{}:{}", batch.source, charter.id);
            let key = (charter.text.clone(), charter.not_before, charter.not_after);
            if let Some(&at) = dedup.get(&key) {
                provenance[at].push(origin);
                continue;
            }
            let collides = id_sources
                .get(&charter.id)
                .map(|sources| sources.len() > 1)
                .unwrap_or(false);
            if collides {
                charter.id = origin.clone();
            }
            dedup.insert(key, charters.len());
            charters.push(charter);
            provenance.push(vec![origin]);
        }
    }

    Corpus {
        charters,
        provenance,
    }
}
