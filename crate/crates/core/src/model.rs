//! Shared domain types: the charter record, date handling, and the dense
//! integer handles used by the index and every analysis on top of it.

use std::collections::BTreeMap;

use serde::{Deserialize, Serialize};

/// One diplomatic document: the unit of analysis for every statistic.
///
/// Dates are a closed interval `[not_before, not_after]` of Julian calendar
/// years; most charters carry a single year, cartulary copies often only a
/// range. Coordinates, region, institution, typology and language are all
/// optional because source corpora disagree wildly about which metadata they
/// provide. Fields we do not model are kept verbatim in `extra` so that a
/// record survives a round-trip unchanged.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Charter {
    pub id: String,
    #[serde(default)]
    pub source_corpus: String,
    pub text: String,
    pub not_before: i32,
    pub not_after: i32,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lat: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub lon: Option<f64>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub region: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub institution: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub doc_type: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub language: Option<String>,
    /// Unrecognized metadata, passed through untouched.
    #[serde(flatten, skip_serializing_if = "BTreeMap::is_empty", default)]
    pub extra: BTreeMap<String, serde_json::Value>,
}

impl Charter {
    /// Midpoint year of the date interval, the value used for temporal binning.
    pub fn midpoint(&self) -> i32 {
        date_midpoint(self.not_before, self.not_after)
    }

    pub fn has_coords(&self) -> bool {
        self.lat.is_some() && self.lon.is_some()
    }
}

/// Collapse a date interval to a single year: floor((not_before+not_after)/2).
///
/// Uses Euclidean flooring so BC intervals behave the same as AD ones.
pub fn date_midpoint(not_before: i32, not_after: i32) -> i32 {
    (not_before as i64 + not_after as i64).div_euclid(2) as i32
}

/// Why a raw record was refused, with the offending field named.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct Rejection {
    /// Identifier of the record if one could be read, else empty.
    pub id: String,
    pub field: String,
    pub reason: String,
}

impl Rejection {
    pub fn new(id: impl Into<String>, field: impl Into<String>, reason: impl Into<String>) -> Self {
        Rejection {
            id: id.into(),
            field: field.into(),
            reason: reason.into(),
        }
    }
}

impl std::fmt::Display for Rejection {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        write!(f, "{}: {} ({})", self.id, self.reason, self.field)
    }
}

/// Check every charter invariant, returning the record or a rejection that
/// names the violated field. Total and deterministic.
pub fn validate_charter(charter: Charter) -> Result<Charter, Rejection> {
    if charter.id.is_empty() {
        return Err(Rejection::new("", "id", "empty id"));
    }
    if charter.text.trim().is_empty() {
        return Err(Rejection::new(&charter.id, "text", "empty text"));
    }
    if charter.not_before > charter.not_after {
        return Err(Rejection::new(
            &charter.id,
            "not_before",
            "date interval inverted",
        ));
    }
    if let Some(lat) = charter.lat {
        if !(-90.0..=90.0).contains(&lat) || lat.is_nan() {
            return Err(Rejection::new(&charter.id, "lat", "latitude out of range"));
        }
    }
    if let Some(lon) = charter.lon {
        if !(-180.0..=180.0).contains(&lon) || lon.is_nan() {
            return Err(Rejection::new(&charter.id, "lon", "longitude out of range"));
        }
    }
    Ok(charter)
}

/// Dense handle for a lemma interned in a [`crate::index::Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct LemmaId(pub u32);

/// Dense handle for a surface form interned in a [`crate::index::Vocabulary`].
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FormId(pub u32);

impl LemmaId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl FormId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn raw(id: &str, text: &str, not_before: i32, not_after: i32) -> Charter {
        Charter {
            id: id.into(),
            source_corpus: "test".into(),
            text: text.into(),
            not_before,
            not_after,
            lat: None,
            lon: None,
            region: None,
            institution: None,
            doc_type: None,
            language: None,
            extra: BTreeMap::new(),
        }
    }

    #[test]
    fn accepts_single_year_charter() {
        // A plain donation with a one-year date interval.
        let c = validate_charter(raw("c1", "in nomine", 937, 937)).unwrap();
        assert_eq!(c.midpoint(), 937);
    }

    #[test]
    fn rejects_inverted_interval() {
        let err = validate_charter(raw("c2", "x", 1100, 1050)).unwrap_err();
        assert_eq!(err.reason, "date interval inverted");
        assert_eq!(err.field, "not_before");
    }

    #[test]
    fn rejects_empty_id() {
        let err = validate_charter(raw("", "x", 1, 2)).unwrap_err();
        assert_eq!(err.reason, "empty id");
    }

    #[test]
    fn rejects_blank_text() {
        let err = validate_charter(raw("c3", "   ", 900, 910)).unwrap_err();
        assert_eq!(err.field, "text");
    }

    #[test]
    fn rejects_out_of_range_coordinates() {
        let mut c = raw("c4", "terra", 900, 910);
        c.lat = Some(91.0);
        assert_eq!(validate_charter(c).unwrap_err().field, "lat");

        let mut c = raw("c5", "terra", 900, 910);
        c.lon = Some(-180.5);
        assert_eq!(validate_charter(c).unwrap_err().field, "lon");
    }

    #[test]
    fn midpoint_stays_inside_interval() {
        for (lo, hi) in [(937, 937), (900, 949), (-50, 23), (1050, 1051)] {
            let m = date_midpoint(lo, hi);
            assert!(lo <= m && m <= hi, "midpoint {m} outside [{lo}, {hi}]");
        }
    }

    #[test]
    fn charter_round_trips_through_json() {
        let mut c = raw("c6", "in nomine dei", 1087, 1087);
        c.doc_type = Some("private".into());
        c.extra
            .insert("seal".into(), serde_json::json!("pendant, damaged"));
        let json = serde_json::to_string(&c).unwrap();
        let back: Charter = serde_json::from_str(&json).unwrap();
        assert_eq!(c, back);
    }
}
