//! Corpus analytics for medieval charter collections.
//!
//! The pipeline is: ingest source corpora ([`ingest`]), lemmatize with a
//! lookup lexicon ([`lemma`]), build a queryable index ([`index`]), then run
//! lexical-richness, timeline, geographic, co-occurrence, distributional,
//! factorial and classification studies on top of it.

pub mod chronogeo;
pub mod classify;
pub mod cooc;
pub mod dsm;
pub mod error;
pub mod export;
pub mod factor;
pub mod index;
pub mod ingest;
pub mod lemma;
pub mod model;
pub mod richness;
pub mod synth;
pub(crate) mod svd;

pub use error::{Error, Result};
pub use index::{ContingencyTable, Index, SlicePlan};
pub use ingest::{Corpus, CorpusBatch};
pub use lemma::Lexicon;
pub use model::{Charter, FormId, LemmaId, Rejection};
