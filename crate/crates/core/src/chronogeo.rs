//! Frequency timelines over slice plans and geographic grid densities for
//! lemma occurrences.
//!
//! Raw counts conflate corpus growth with usage change, so the normalized
//! series (occurrences per million tokens) is the default plotted one; raw
//! and cumulative stay available to reproduce count-style figures.

use std::collections::HashMap;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::index::{Index, SlicePlan};

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub enum TimelineMode {
    Raw,
    PerMillion,
    Cumulative,
}

impl std::str::FromStr for TimelineMode {
    type Err = String;
    fn from_str(s: &str) -> std::result::Result<Self, String> {
        match s {
            "raw" => Ok(TimelineMode::Raw),
            "per_million" => Ok(TimelineMode::PerMillion),
            "cumulative" => Ok(TimelineMode::Cumulative),
            other => Err(format!(
                "unknown mode {other:?} (expected raw, per_million or cumulative)"
            )),
        }
    }
}

/// Per-slice occurrence counts for a lemma set, with every derived series.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Timeline {
    pub slices: Vec<String>,
    pub counts: Vec<u64>,
    /// Total tokens in each slice, the normalization denominator.
    pub tokens: Vec<u64>,
    /// Occurrences per million tokens.
    pub per_million: Vec<f64>,
    /// Prefix sums of `counts`.
    pub cumulative: Vec<u64>,
    /// Requested lemmas absent from the index vocabulary.
    pub absent_lemmas: Vec<String>,
}

impl Timeline {
    pub fn series(&self, mode: TimelineMode) -> Vec<f64> {
        match mode {
            TimelineMode::Raw => self.counts.iter().map(|&c| c as f64).collect(),
            TimelineMode::PerMillion => self.per_million.clone(),
            TimelineMode::Cumulative => self.cumulative.iter().map(|&c| c as f64).collect(),
        }
    }
}

/// Summed per-slice counts over a lemma set. Absent lemmas contribute zero
/// and are reported in the result.
pub fn timeline(index: &Index, lemmas: &[String], plan: &SlicePlan) -> Result<Timeline> {
    if plan.slices.is_empty() {
        return Err(Error::EmptySlicePlan);
    }
    let assignment = plan.assignment(index.charters.len());
    let mut counts = vec![0u64; plan.slices.len()];
    let mut absent = Vec::new();
    for lemma in lemmas {
        match index.lemmas.id(lemma) {
            Some(id) => {
                for &(ci, _) in &index.postings[id as usize] {
                    if let Some(s) = assignment[ci as usize] {
                        counts[s as usize] += 1;
                    }
                }
            }
            None => absent.push(lemma.clone()),
        }
    }
    let tokens: Vec<u64> = plan.slices.iter().map(|s| s.tokens).collect();
    let per_million: Vec<f64> = counts
        .iter()
        .zip(&tokens)
        .map(|(&c, &t)| {
            if t == 0 {
                0.0
            } else {
                c as f64 / t as f64 * 1_000_000.0
            }
        })
        .collect();
    let cumulative: Vec<u64> = counts
        .iter()
        .scan(0u64, |acc, &c| {
            *acc += c;
            Some(*acc)
        })
        .collect();
    Ok(Timeline {
        slices: plan.slices.iter().map(|s| s.label.clone()).collect(),
        counts,
        tokens,
        per_million,
        cumulative,
        absent_lemmas: absent,
    })
}

/// One timeline per region value found in the metadata, computed over the
/// charters of that region only.
pub fn regional_timelines(
    index: &Index,
    lemmas: &[String],
    plan: &SlicePlan,
) -> Result<Vec<(String, Timeline)>> {
    if plan.slices.is_empty() {
        return Err(Error::EmptySlicePlan);
    }
    let assignment = plan.assignment(index.charters.len());
    let mut regions: Vec<String> = index
        .charters
        .iter()
        .filter_map(|c| c.meta.region.clone())
        .collect();
    regions.sort();
    regions.dedup();

    let lemma_ids: Vec<Option<u32>> = lemmas.iter().map(|l| index.lemmas.id(l)).collect();
    let absent: Vec<String> = lemmas
        .iter()
        .zip(&lemma_ids)
        .filter(|(_, id)| id.is_none())
        .map(|(l, _)| l.clone())
        .collect();

    let mut out = Vec::with_capacity(regions.len());
    for region in regions {
        let mut counts = vec![0u64; plan.slices.len()];
        let mut tokens = vec![0u64; plan.slices.len()];
        for (ci, charter) in index.charters.iter().enumerate() {
            if charter.meta.region.as_deref() != Some(region.as_str()) {
                continue;
            }
            if let Some(s) = assignment[ci] {
                tokens[s as usize] += charter.tokens.len() as u64;
            }
        }
        for id in lemma_ids.iter().flatten() {
            for &(ci, _) in &index.postings[*id as usize] {
                if index.charters[ci as usize].meta.region.as_deref() != Some(region.as_str()) {
                    continue;
                }
                if let Some(s) = assignment[ci as usize] {
                    counts[s as usize] += 1;
                }
            }
        }
        let per_million: Vec<f64> = counts
            .iter()
            .zip(&tokens)
            .map(|(&c, &t)| {
                if t == 0 {
                    0.0
                } else {
                    c as f64 / t as f64 * 1_000_000.0
                }
            })
            .collect();
        let cumulative: Vec<u64> = counts
            .iter()
            .scan(0u64, |acc, &c| {
                *acc += c;
                Some(*acc)
            })
            .collect();
        out.push((
            region,
            Timeline {
                slices: plan.slices.iter().map(|s| s.label.clone()).collect(),
                counts,
                tokens,
                per_million,
                cumulative,
                absent_lemmas: absent.clone(),
            },
        ));
    }
    Ok(out)
}

/// Slice of maximum normalized rate per region; ties resolve to the
/// earlier slice. A region with no tokens at all is an error.
pub fn peak_slice(timelines: &[(String, Timeline)]) -> Result<Vec<(String, String)>> {
    let mut out = Vec::with_capacity(timelines.len());
    for (region, tl) in timelines {
        if tl.tokens.iter().all(|&t| t == 0) {
            return Err(Error::EmptyRegion(region.clone()));
        }
        let mut best = 0usize;
        for i in 1..tl.per_million.len() {
            if tl.per_million[i] > tl.per_million[best] {
                best = i;
            }
        }
        out.push((region.clone(), tl.slices[best].clone()));
    }
    Ok(out)
}

/// A flat lat/lon grid of kernel-smoothed occurrence mass.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct GeoGrid {
    pub lon_min: f64,
    pub lat_min: f64,
    pub lon_max: f64,
    pub lat_max: f64,
    pub cell_size: f64,
    pub bandwidth: f64,
    pub cols: usize,
    pub rows: usize,
    /// Row-major from the south-west corner.
    pub values: Vec<f64>,
    /// Occurrences that landed inside the bounding box.
    pub located: u64,
}

impl GeoGrid {
    pub fn get(&self, col: usize, row: usize) -> f64 {
        self.values[row * self.cols + col]
    }

    pub fn cell_center(&self, col: usize, row: usize) -> (f64, f64) {
        (
            self.lon_min + (col as f64 + 0.5) * self.cell_size,
            self.lat_min + (row as f64 + 0.5) * self.cell_size,
        )
    }

    pub fn total_mass(&self) -> f64 {
        self.values.iter().sum()
    }
}

/// Kernel-smoothed occurrence density of a lemma set.
///
/// Each located occurrence adds one unit of mass as a Gaussian truncated at
/// three bandwidths, discretized over cell centers and normalized before
/// clipping at the bounding box; bandwidth 0 degenerates to a histogram.
/// Charters without coordinates fall back to the per-region centroid table
/// when one is supplied, else are excluded.
pub fn geo_density(
    index: &Index,
    lemmas: &[String],
    cell_size: f64,
    bandwidth: f64,
    bbox: (f64, f64, f64, f64),
    region_centroids: &HashMap<String, (f64, f64)>,
) -> Result<GeoGrid> {
    let (lon_min, lat_min, lon_max, lat_max) = bbox;
    if !(lon_min < lon_max && lat_min < lat_max) || cell_size <= 0.0 {
        return Err(Error::EmptyBbox);
    }
    if bandwidth < 0.0 {
        return Err(Error::InvalidInput("bandwidth must be non-negative".into()));
    }
    let cols = ((lon_max - lon_min) / cell_size).ceil() as usize;
    let rows = ((lat_max - lat_min) / cell_size).ceil() as usize;
    if cols == 0 || rows == 0 {
        return Err(Error::EmptyBbox);
    }

    // Occurrence count per charter over the lemma set.
    let mut per_charter: HashMap<u32, u64> = HashMap::new();
    for lemma in lemmas {
        if let Some(id) = index.lemmas.id(lemma) {
            for &(ci, _) in &index.postings[id as usize] {
                *per_charter.entry(ci).or_insert(0) += 1;
            }
        }
    }

    let mut grid = GeoGrid {
        lon_min,
        lat_min,
        lon_max,
        lat_max,
        cell_size,
        bandwidth,
        cols,
        rows,
        values: vec![0.0; cols * rows],
        located: 0,
    };

    let mut entries: Vec<(u32, u64)> = per_charter.into_iter().collect();
    entries.sort_unstable();
    for (ci, count) in entries {
        let meta = &index.charters[ci as usize].meta;
        let position = match (meta.lat, meta.lon) {
            (Some(lat), Some(lon)) => Some((lon, lat)),
            _ => meta
                .region
                .as_ref()
                .and_then(|r| region_centroids.get(r))
                .map(|&(lat, lon)| (lon, lat)),
        };
        let Some((lon, lat)) = position else {
            continue;
        };
        if lon < lon_min || lon > lon_max || lat < lat_min || lat > lat_max {
            continue;
        }
        grid.located += count;
        deposit(&mut grid, lon, lat, count as f64);
    }

    if grid.located == 0 {
        return Err(Error::NoLocatedOccurrences);
    }
    Ok(grid)
}

fn clamp_cell(value: f64, max: usize) -> usize {
    if value < 0.0 {
        0
    } else {
        (value as usize).min(max - 1)
    }
}

fn deposit(grid: &mut GeoGrid, lon: f64, lat: f64, mass: f64) {
    let cs = grid.cell_size;
    if grid.bandwidth == 0.0 {
        let col = clamp_cell((lon - grid.lon_min) / cs, grid.cols);
        let row = clamp_cell((lat - grid.lat_min) / cs, grid.rows);
        grid.values[row * grid.cols + col] += mass;
        return;
    }
    let radius = 3.0 * grid.bandwidth;
    let col_lo = ((lon - radius - grid.lon_min) / cs).floor() as i64;
    let col_hi = ((lon + radius - grid.lon_min) / cs).ceil() as i64;
    let row_lo = ((lat - radius - grid.lat_min) / cs).floor() as i64;
    let row_hi = ((lat + radius - grid.lat_min) / cs).ceil() as i64;
    let inv2h2 = 1.0 / (2.0 * grid.bandwidth * grid.bandwidth);

    // Normalize the discrete stamp before clipping, so interior points
    // conserve mass exactly and only bbox-edge truncation loses any.
    let mut stamp: Vec<(i64, i64, f64)> = Vec::new();
    let mut norm = 0.0f64;
    for row in row_lo..=row_hi {
        for col in col_lo..=col_hi {
            let (cx, cy) = (
                grid.lon_min + (col as f64 + 0.5) * cs,
                grid.lat_min + (row as f64 + 0.5) * cs,
            );
            let d2 = (cx - lon).powi(2) + (cy - lat).powi(2);
            if d2 <= radius * radius {
                let w = (-d2 * inv2h2).exp();
                stamp.push((col, row, w));
                norm += w;
            }
        }
    }
    if norm == 0.0 {
        // Degenerate stamp (bandwidth much smaller than a cell): histogram.
        let col = clamp_cell((lon - grid.lon_min) / cs, grid.cols);
        let row = clamp_cell((lat - grid.lat_min) / cs, grid.rows);
        grid.values[row * grid.cols + col] += mass;
        return;
    }
    for (col, row, w) in stamp {
        if col < 0 || row < 0 || col >= grid.cols as i64 || row >= grid.rows as i64 {
            continue;
        }
        grid.values[row as usize * grid.cols + col as usize] += mass * w / norm;
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::index::{build_index, slice_by_halfcentury};
    use crate::ingest::Corpus;
    use crate::lemma::Lexicon;
    use crate::model::Charter;
    use std::collections::BTreeMap;

    fn charter(id: &str, text: &str, year: i32) -> Charter {
        Charter {
            id: id.to_string(),
            source_corpus: "t".into(),
            text: text.to_string(),
            not_before: year,
            not_after: year,
            lat: None,
            lon: None,
            region: None,
            institution: None,
            doc_type: None,
            language: None,
            extra: BTreeMap::new(),
        }
    }

    fn index_of(charters: Vec<Charter>) -> Index {
        let provenance = charters.iter().map(|c| vec![c.id.clone()]).collect();
        build_index(
            &Corpus {
                charters,
                provenance,
            },
            &Lexicon::new(),
        )
    }

    fn s(v: &[&str]) -> Vec<String> {
        v.iter().map(|x| x.to_string()).collect()
    }

    #[test]
    fn cumulative_is_prefix_sum() {
        let index = index_of(vec![
            charter("a", "terra", 910),
            charter("b", "terra terra", 960),
            charter("c", "terra terra terra", 1010),
        ]);
        let plan = slice_by_halfcentury(&index, (900, 1050)).unwrap();
        let tl = timeline(&index, &s(&["terra"]), &plan).unwrap();
        assert_eq!(tl.counts, vec![1, 2, 3]);
        assert_eq!(tl.cumulative, vec![1, 3, 6]);
    }

    #[test]
    fn per_million_normalization() {
        let filler = vec!["x"; 995].join(" ");
        let text = format!("terra terra terra terra terra {filler}");
        let index = index_of(vec![charter("a", &text, 910)]);
        let plan = slice_by_halfcentury(&index, (900, 950)).unwrap();
        let tl = timeline(&index, &s(&["terra"]), &plan).unwrap();
        assert_eq!(tl.tokens, vec![1000]);
        assert!((tl.per_million[0] - 5000.0).abs() < 1e-9);
    }

    #[test]
    fn lemma_set_additivity() {
        let index = index_of(vec![
            charter("a", "grangia horreum terra", 910),
            charter("b", "horreum horreum", 970),
        ]);
        let plan = slice_by_halfcentury(&index, (900, 1000)).unwrap();
        let both = timeline(&index, &s(&["grangia", "horreum"]), &plan).unwrap();
        let g = timeline(&index, &s(&["grangia"]), &plan).unwrap();
        let h = timeline(&index, &s(&["horreum"]), &plan).unwrap();
        for i in 0..both.counts.len() {
            assert_eq!(both.counts[i], g.counts[i] + h.counts[i]);
        }
    }

    #[test]
    fn absent_lemma_reported_and_counts_zero() {
        let index = index_of(vec![charter("a", "terra", 910)]);
        let plan = slice_by_halfcentury(&index, (900, 950)).unwrap();
        let tl = timeline(&index, &s(&["finagium"]), &plan).unwrap();
        assert_eq!(tl.counts, vec![0]);
        assert_eq!(tl.absent_lemmas, vec!["finagium"]);
    }

    #[test]
    fn peak_monotone_series_is_last_slice() {
        let tl = Timeline {
            slices: s(&["P1", "P2", "P3"]),
            counts: vec![1, 2, 3],
            tokens: vec![100, 100, 100],
            per_million: vec![1.0, 2.0, 3.0],
            cumulative: vec![1, 3, 6],
            absent_lemmas: vec![],
        };
        let peaks = peak_slice(&[("east".into(), tl)]).unwrap();
        assert_eq!(peaks[0].1, "P3");
    }

    #[test]
    fn peak_tie_goes_to_earlier_slice() {
        let tl = Timeline {
            slices: s(&["P1", "P2", "P3"]),
            counts: vec![3, 1, 3],
            tokens: vec![100, 100, 100],
            per_million: vec![30.0, 10.0, 30.0],
            cumulative: vec![3, 4, 7],
            absent_lemmas: vec![],
        };
        let peaks = peak_slice(&[("east".into(), tl)]).unwrap();
        assert_eq!(peaks[0].1, "P1");
    }

    #[test]
    fn peak_zero_token_region_errors() {
        let tl = Timeline {
            slices: s(&["P1"]),
            counts: vec![0],
            tokens: vec![0],
            per_million: vec![0.0],
            cumulative: vec![0],
            absent_lemmas: vec![],
        };
        assert!(matches!(
            peak_slice(&[("west".into(), tl)]),
            Err(Error::EmptyRegion(_))
        ));
    }

    #[test]
    fn planted_regional_peaks_recovered() {
        let mut charters = Vec::new();
        // Region A surges 1000-1049; region B surges 1200-1249. Background
        // token mass is constant per slice.
        for (region, peak_year) in [("A", 1000), ("B", 1200)] {
            for half_century in 0..6 {
                let year = 950 + half_century * 50 + 10;
                let hits = if year / 50 * 50 == peak_year { 20 } else { 2 };
                let mut text = vec!["molina"; hits];
                text.extend(vec!["pad"; 100 - hits]);
                let mut c = charter(
                    &format!("{region}{half_century}"),
                    &text.join(" "),
                    year,
                );
                c.region = Some(region.to_string());
                charters.push(c);
            }
        }
        let index = index_of(charters);
        let plan = slice_by_halfcentury(&index, (950, 1250)).unwrap();
        let tls = regional_timelines(&index, &s(&["molina"]), &plan).unwrap();
        let peaks = peak_slice(&tls).unwrap();
        let peak_of = |r: &str| {
            peaks
                .iter()
                .find(|(region, _)| region == r)
                .map(|(_, s)| s.clone())
                .unwrap()
        };
        assert_eq!(peak_of("A"), "1000–1049");
        assert_eq!(peak_of("B"), "1200–1249");
    }

    fn located(id: &str, text: &str, lat: f64, lon: f64) -> Charter {
        let mut c = charter(id, text, 1000);
        c.lat = Some(lat);
        c.lon = Some(lon);
        c
    }

    #[test]
    fn histogram_single_occurrence() {
        let index = index_of(vec![located("a", "finagium", 47.2, 5.1)]);
        let grid = geo_density(
            &index,
            &s(&["finagium"]),
            0.5,
            0.0,
            (0.0, 40.0, 10.0, 50.0),
            &HashMap::new(),
        )
        .unwrap();
        let nonzero: Vec<f64> = grid.values.iter().copied().filter(|&v| v != 0.0).collect();
        assert_eq!(nonzero, vec![1.0]);
        assert_eq!(grid.located, 1);
    }

    #[test]
    fn histogram_two_occurrences_same_point() {
        let index = index_of(vec![
            located("a", "finagium", 47.2, 5.1),
            located("b", "finagium finagium", 47.2, 5.1),
        ]);
        let grid = geo_density(
            &index,
            &s(&["finagium"]),
            0.5,
            0.0,
            (0.0, 40.0, 10.0, 50.0),
            &HashMap::new(),
        )
        .unwrap();
        assert_eq!(grid.total_mass(), 3.0);
        let max = grid.values.iter().cloned().fold(0.0, f64::max);
        assert_eq!(max, 3.0);
    }

    #[test]
    fn histogram_matches_oracle_grid() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(3);
        let mut charters = Vec::new();
        let mut points = Vec::new();
        for i in 0..50 {
            let lat = rng.gen_range(41.0..49.0);
            let lon = rng.gen_range(1.0..9.0);
            points.push((lon, lat));
            charters.push(located(&format!("c{i}"), "tellus", lat, lon));
        }
        let index = index_of(charters);
        let grid = geo_density(
            &index,
            &s(&["tellus"]),
            0.25,
            0.0,
            (0.0, 40.0, 10.0, 50.0),
            &HashMap::new(),
        )
        .unwrap();
        // Oracle: direct 2-D binning.
        let cols = (10.0f64 / 0.25).ceil() as usize;
        let rows = (10.0f64 / 0.25).ceil() as usize;
        let mut oracle = vec![0.0f64; cols * rows];
        for (lon, lat) in points {
            let col = ((lon - 0.0) / 0.25) as usize;
            let row = ((lat - 40.0) / 0.25) as usize;
            oracle[row * cols + col] += 1.0;
        }
        assert_eq!(grid.values, oracle);
    }

    #[test]
    fn smoothing_conserves_mass_for_interior_scatter() {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(5);
        let mut charters = Vec::new();
        for i in 0..40 {
            // Margin of 3 bandwidths from every bbox edge.
            let lat = rng.gen_range(43.0..47.0);
            let lon = rng.gen_range(3.0..7.0);
            charters.push(located(&format!("c{i}"), "tellus tellus", lat, lon));
        }
        let index = index_of(charters);
        let grid = geo_density(
            &index,
            &s(&["tellus"]),
            0.2,
            0.5,
            (0.0, 40.0, 10.0, 50.0),
            &HashMap::new(),
        )
        .unwrap();
        let mass = grid.total_mass();
        assert!(
            (mass - 80.0).abs() / 80.0 < 0.01,
            "mass {mass} should be within 1% of 80"
        );
    }

    #[test]
    fn centroid_fallback_locates_region_only_charters() {
        let mut c = charter("a", "finagium", 1000);
        c.region = Some("burgundy".into());
        let index = index_of(vec![c]);
        let mut centroids = HashMap::new();
        centroids.insert("burgundy".to_string(), (47.0, 4.8));
        let grid = geo_density(
            &index,
            &s(&["finagium"]),
            0.5,
            0.0,
            (0.0, 40.0, 10.0, 50.0),
            &centroids,
        )
        .unwrap();
        assert_eq!(grid.located, 1);

        // Without the table the same corpus has nothing to map.
        assert!(matches!(
            geo_density(
                &index,
                &s(&["finagium"]),
                0.5,
                0.0,
                (0.0, 40.0, 10.0, 50.0),
                &HashMap::new(),
            ),
            Err(Error::NoLocatedOccurrences)
        ));
    }

    #[test]
    fn inverted_bbox_errors() {
        let index = index_of(vec![located("a", "tellus", 45.0, 5.0)]);
        assert!(matches!(
            geo_density(
                &index,
                &s(&["tellus"]),
                0.5,
                0.0,
                (10.0, 40.0, 0.0, 50.0),
                &HashMap::new()
            ),
            Err(Error::EmptyBbox)
        ));
    }
}
