//! Activity categories, the quarter-hour day grid, diaries and community
//! covariates.
//!
//! Everything downstream indexes vectors and matrices by
//! [`ActivityCategory::index`], so the order `c01 < c02 < ... < c08` is fixed.

use std::collections::BTreeMap;
use std::fmt;
use std::io::Read;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// Number of activity categories.
pub const NCAT: usize = 8;
/// Number of quarter-hour steps in a day.
pub const STEPS: usize = 96;
/// Minutes per step.
pub const SLOT_MINUTES: u32 = 15;
/// Minutes per day.
pub const DAY_MINUTES: u32 = 1440;

/// A composition over the eight activity categories.
pub type Composition = [f64; NCAT];

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum ActivityCategory {
    /// Health emergency.
    C01,
    /// Biological needs (sleeping, eating).
    C02,
    /// Household management.
    C03,
    /// Personal obligation (shopping, banking, childcare).
    C04,
    /// Working.
    C05,
    /// Education.
    C06,
    /// Personal preference (leisure, socializing, sports).
    C07,
    /// Others, including travel.
    C08,
}

impl ActivityCategory {
    pub const ALL: [ActivityCategory; NCAT] = [
        ActivityCategory::C01,
        ActivityCategory::C02,
        ActivityCategory::C03,
        ActivityCategory::C04,
        ActivityCategory::C05,
        ActivityCategory::C06,
        ActivityCategory::C07,
        ActivityCategory::C08,
    ];

    pub fn index(self) -> usize {
        self as usize
    }

    pub fn from_index(index: usize) -> Option<Self> {
        Self::ALL.get(index).copied()
    }

    pub fn code(self) -> &'static str {
        ["c01", "c02", "c03", "c04", "c05", "c06", "c07", "c08"][self.index()]
    }

    pub fn label(self) -> &'static str {
        [
            "health emergency",
            "biological needs",
            "household management",
            "personal obligation",
            "working",
            "education",
            "personal preference",
            "others",
        ][self.index()]
    }
}

impl fmt::Display for ActivityCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.code())
    }
}

impl FromStr for ActivityCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        let t = s.trim().to_ascii_lowercase();
        Self::ALL
            .iter()
            .copied()
            .find(|c| c.code() == t)
            .ok_or_else(|| Error::InvalidInput(format!("`{s}` is not an activity category (c01..c08)")))
    }
}

/// The 96-step day grid. Step `t` (1-based) covers minutes
/// `[(t-1)*15, t*15)` starting at midnight.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct TimeGrid {
    pub steps: usize,
    pub slot_minutes: u32,
}

impl Default for TimeGrid {
    fn default() -> Self {
        TimeGrid { steps: STEPS, slot_minutes: SLOT_MINUTES }
    }
}

impl TimeGrid {
    /// Only the quarter-hour grid is supported; anything else is a configuration error.
    pub fn new(steps: usize, slot_minutes: u32) -> Result<Self> {
        if steps != STEPS || slot_minutes != SLOT_MINUTES {
            return Err(Error::Config(format!(
                "grid must be {STEPS} steps of {SLOT_MINUTES} minutes, got {steps} x {slot_minutes}"
            )));
        }
        Ok(TimeGrid { steps, slot_minutes })
    }

    /// Minute interval `[start, end)` of 1-based step `t`.
    pub fn slot_bounds(&self, t: usize) -> (u32, u32) {
        let start = (t as u32 - 1) * self.slot_minutes;
        (start, start + self.slot_minutes)
    }

    /// Time scaled to `[-1, 1]`, centred on mid-day.
    pub fn scaled_time(&self, t: usize) -> f64 {
        let mid = (self.steps as f64 + 1.0) / 2.0;
        (t as f64 - mid) / (mid - 1.0)
    }

    /// Squared scaled time, the time regressor.
    pub fn time_sq(&self, t: usize) -> f64 {
        let s = self.scaled_time(t);
        s * s
    }
}

/// One raw diary row after category mapping.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DiaryEvent {
    pub start: u32,
    pub end: u32,
    pub category: ActivityCategory,
}

impl DiaryEvent {
    pub fn new(start: u32, end: u32, category: ActivityCategory) -> Result<Self> {
        if start >= DAY_MINUTES {
            return Err(Error::InvalidEvent(format!("start minute {start} outside [0, 1440)")));
        }
        if end > DAY_MINUTES {
            return Err(Error::InvalidEvent(format!("event {start}..{end} crosses midnight; split it before ingest")));
        }
        if start >= end {
            return Err(Error::InvalidEvent(format!("event start {start} is not before end {end}")));
        }
        Ok(DiaryEvent { start, end, category })
    }
}

/// One person-day on the 96-step grid.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ActivitySequence {
    pub person_id: String,
    pub community_id: String,
    slots: Vec<ActivityCategory>,
}

impl ActivitySequence {
    pub fn new(
        person_id: impl Into<String>,
        community_id: impl Into<String>,
        slots: Vec<ActivityCategory>,
    ) -> Result<Self> {
        if slots.len() != STEPS {
            return Err(Error::InvalidInput(format!("activity sequence has {} slots, expected {STEPS}", slots.len())));
        }
        Ok(ActivitySequence { person_id: person_id.into(), community_id: community_id.into(), slots })
    }

    pub fn slots(&self) -> &[ActivityCategory] {
        &self.slots
    }

    /// Category at 1-based step `t`.
    pub fn at(&self, t: usize) -> ActivityCategory {
        self.slots[t - 1]
    }

    /// Slot-aligned events, merging runs of equal categories.
    pub fn to_events(&self, grid: &TimeGrid) -> Vec<DiaryEvent> {
        let mut events: Vec<DiaryEvent> = Vec::new();
        for (i, &category) in self.slots.iter().enumerate() {
            let (start, end) = grid.slot_bounds(i + 1);
            match events.last_mut() {
                Some(last) if last.category == category => last.end = end,
                _ => events.push(DiaryEvent { start, end, category }),
            }
        }
        events
    }
}

/// Discretizes a day of events onto the grid.
///
/// Each slot takes the category holding the most minutes inside it; ties go
/// to the event that started first. Events must tile `[0, 1440)` exactly.
pub fn diary_to_sequence(
    person_id: &str,
    community_id: &str,
    events: &[DiaryEvent],
    grid: &TimeGrid,
) -> Result<ActivitySequence> {
    if events.is_empty() {
        return Err(Error::CoverageGap { person: person_id.to_string(), start: 0, end: DAY_MINUTES });
    }
    let mut sorted = events.to_vec();
    sorted.sort_by_key(|e| (e.start, e.end));

    let mut cursor = 0u32;
    for e in &sorted {
        if e.start > cursor {
            return Err(Error::CoverageGap { person: person_id.to_string(), start: cursor, end: e.start });
        }
        if e.start < cursor {
            return Err(Error::OverlapError { person: person_id.to_string(), at: e.start });
        }
        cursor = e.end;
    }
    if cursor < DAY_MINUTES {
        return Err(Error::CoverageGap { person: person_id.to_string(), start: cursor, end: DAY_MINUTES });
    }

    let mut slots = Vec::with_capacity(grid.steps);
    let mut first = 0usize;
    for t in 1..=grid.steps {
        let (lo, hi) = grid.slot_bounds(t);
        while sorted[first].end <= lo {
            first += 1;
        }
        let mut best: Option<(u32, ActivityCategory)> = None;
        for e in sorted[first..].iter().take_while(|e| e.start < hi) {
            let minutes = e.end.min(hi) - e.start.max(lo);
            // strict comparison keeps the earlier-starting event on ties
            if best.is_none_or(|(m, _)| minutes > m) {
                best = Some((minutes, e.category));
            }
        }
        slots.push(best.expect("events tile the day").1);
    }
    ActivitySequence::new(person_id, community_id, slots)
}

/// Raw survey activity code to category.
#[derive(Debug, Clone, PartialEq, Eq, Default, Serialize, Deserialize)]
pub struct CategoryMapping {
    entries: BTreeMap<String, ActivityCategory>,
}

const DEFAULT_MAPPING_CSV: &str = include_str!("../data/default_mapping.csv");

#[derive(Deserialize)]
struct MappingRow {
    raw_code: String,
    category: String,
}

impl CategoryMapping {
    /// The bundled survey-code mapping (`data/default_mapping.csv`).
    pub fn default_atus() -> Self {
        Self::from_csv(DEFAULT_MAPPING_CSV.as_bytes(), "default_mapping.csv").expect("bundled mapping is valid")
    }

    /// Maps `c01`..`c08` onto themselves.
    pub fn identity() -> Self {
        CategoryMapping { entries: ActivityCategory::ALL.iter().map(|c| (c.code().to_string(), *c)).collect() }
    }

    pub fn from_entries(entries: impl IntoIterator<Item = (String, ActivityCategory)>) -> Result<Self> {
        let mut map = BTreeMap::new();
        for (raw, cat) in entries {
            let raw = raw.trim().to_string();
            if let Some(prev) = map.insert(raw.clone(), cat) {
                if prev != cat {
                    return Err(Error::InvalidInput(format!("raw code `{raw}` maps to both {prev} and {cat}")));
                }
            }
        }
        if map.is_empty() {
            return Err(Error::EmptyInput("category mapping has no entries".into()));
        }
        Ok(CategoryMapping { entries: map })
    }

    /// Reads a two-column `raw_code,category` CSV.
    pub fn from_csv<R: Read>(reader: R, file: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut entries = Vec::new();
        for row in rdr.deserialize::<MappingRow>() {
            let row = row.map_err(|e| parse_error(file, &e))?;
            let cat = row.category.parse().map_err(|e: Error| Error::Parse {
                file: file.to_string(),
                line: 0,
                column: Some("category".into()),
                message: e.to_string(),
            })?;
            entries.push((row.raw_code, cat));
        }
        Self::from_entries(entries)
    }

    pub fn map(&self, raw_code: &str) -> Result<ActivityCategory> {
        self.entries.get(raw_code.trim()).copied().ok_or_else(|| Error::UnknownRawCode(raw_code.to_string()))
    }

    pub fn entries(&self) -> impl Iterator<Item = (&str, ActivityCategory)> {
        self.entries.iter().map(|(k, v)| (k.as_str(), *v))
    }

    /// First raw code (in sorted order) for each category, if any.
    pub fn representative_codes(&self) -> BTreeMap<ActivityCategory, String> {
        let mut out = BTreeMap::new();
        for (raw, cat) in &self.entries {
            out.entry(*cat).or_insert_with(|| raw.clone());
        }
        out
    }
}

/// Maps a raw code using `mapping`.
pub fn map_raw_activity(raw_code: &str, mapping: &CategoryMapping) -> Result<ActivityCategory> {
    mapping.map(raw_code)
}

pub(crate) fn parse_error(file: &str, e: &csv::Error) -> Error {
    parse_error_named(file, e, None)
}

/// Like [`parse_error`], naming the column from `headers` when available.
pub(crate) fn parse_error_named(file: &str, e: &csv::Error, headers: Option<&csv::StringRecord>) -> Error {
    let line = e.position().map(|p| p.line()).unwrap_or(0);
    let column = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err
            .field()
            .map(|f| headers.and_then(|h| h.get(f as usize)).map_or_else(|| (f + 1).to_string(), str::to_string)),
        _ => None,
    };
    let message = match e.kind() {
        csv::ErrorKind::Deserialize { err, .. } => err.kind().to_string(),
        _ => e.to_string(),
    };
    Error::Parse { file: file.to_string(), line, column, message }
}

/// Socio-demographic and built-environment covariates of one community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct CommunityCovariates {
    pub community_id: String,
    /// People per square mile.
    pub population_density: f64,
    /// Diversity index, 0 to 87.5.
    pub diversity: f64,
    /// Theil index.
    pub racial_segregation: f64,
    pub median_age: f64,
    /// Percent.
    pub male_female_ratio: f64,
    /// Percent.
    pub disabilities: f64,
    /// USD.
    pub household_median_income: f64,
    /// Percent.
    pub unemployment: f64,
    /// Percent with at least a high school diploma.
    pub education: f64,
    /// Mean minutes of travel to work.
    pub transportation: f64,
    pub institutional: f64,
    pub residential: f64,
    pub mercantile: f64,
    pub business: f64,
}

impl CommunityCovariates {
    pub const FIELDS: [&'static str; 14] = [
        "population_density",
        "diversity",
        "racial_segregation",
        "median_age",
        "male_female_ratio",
        "disabilities",
        "household_median_income",
        "unemployment",
        "education",
        "transportation",
        "institutional",
        "residential",
        "mercantile",
        "business",
    ];

    pub fn get(&self, field: &str) -> Option<f64> {
        Some(match field {
            "population_density" => self.population_density,
            "diversity" => self.diversity,
            "racial_segregation" => self.racial_segregation,
            "median_age" => self.median_age,
            "male_female_ratio" => self.male_female_ratio,
            "disabilities" => self.disabilities,
            "household_median_income" => self.household_median_income,
            "unemployment" => self.unemployment,
            "education" => self.education,
            "transportation" => self.transportation,
            "institutional" => self.institutional,
            "residential" => self.residential,
            "mercantile" => self.mercantile,
            "business" => self.business,
            _ => return None,
        })
    }

    /// Short column label used in reports.
    pub fn short_label(field: &str) -> &str {
        match field {
            "population_density" => "PD",
            "diversity" => "Diversity",
            "racial_segregation" => "Racial_seg",
            "median_age" => "Med_Age",
            "male_female_ratio" => "M_F_Ratio",
            "disabilities" => "Disabilities",
            "household_median_income" => "Hou_Minc",
            "unemployment" => "Unemp",
            "education" => "Edu",
            "transportation" => "Trans",
            "institutional" => "Int",
            "residential" => "Res",
            "mercantile" => "Mer",
            "business" => "Bus",
            "time_sq" => "Time^2",
            other => other,
        }
    }

    pub fn validate(&self) -> Result<()> {
        for field in Self::FIELDS {
            let v = self.get(field).unwrap_or(f64::NAN);
            if !v.is_finite() {
                return Err(Error::InvalidInput(format!("community `{}`: {field} is not finite", self.community_id)));
            }
        }
        for (name, v) in [
            ("institutional", self.institutional),
            ("residential", self.residential),
            ("mercantile", self.mercantile),
            ("business", self.business),
        ] {
            if !(0.0..=1.0).contains(&v) {
                return Err(Error::InvalidInput(format!(
                    "community `{}`: building share {name} = {v} outside [0, 1]",
                    self.community_id
                )));
            }
        }
        Ok(())
    }

    pub fn read_csv<R: Read>(reader: R, file: &str) -> Result<Vec<CommunityCovariates>> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut out = Vec::new();
        let headers = rdr.headers().ok().cloned();
        for row in rdr.deserialize::<CommunityCovariates>() {
            let row = row.map_err(|e| parse_error_named(file, &e, headers.as_ref()))?;
            row.validate()?;
            out.push(row);
        }
        Ok(out)
    }

    pub fn write_csv(rows: &[CommunityCovariates]) -> Result<Vec<u8>> {
        let mut w = csv::WriterBuilder::new().terminator(csv::Terminator::Any(b'\n')).from_writer(Vec::new());
        for r in rows {
            w.serialize(r).map_err(|e| Error::InvalidInput(e.to_string()))?;
        }
        w.into_inner().map_err(|e| Error::InvalidInput(e.to_string()))
    }
}

/// 96 x 8 activity-share trajectory of one community.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct CompositionMatrix {
    rows: Vec<Composition>,
}

/// Row-sum tolerance for compositions.
pub const ROW_SUM_TOL: f64 = 1e-9;

impl CompositionMatrix {
    pub fn new(rows: Vec<Composition>) -> Result<Self> {
        if rows.len() != STEPS {
            return Err(Error::InvalidInput(format!("composition matrix has {} rows, expected {STEPS}", rows.len())));
        }
        for (i, row) in rows.iter().enumerate() {
            check_composition(row).map_err(|msg| Error::OutsideSimplex(format!("row {}: {msg}", i + 1)))?;
        }
        Ok(CompositionMatrix { rows })
    }

    pub fn rows(&self) -> &[Composition] {
        &self.rows
    }

    /// Composition at 1-based step `t`.
    pub fn step(&self, t: usize) -> &Composition {
        &self.rows[t - 1]
    }

    pub fn is_strictly_positive(&self) -> bool {
        self.rows.iter().flatten().all(|&v| v > 0.0)
    }

    /// CSV with header `step,c01..c08`, one row per step.
    pub fn to_csv(&self) -> String {
        let mut s = String::from("step,c01,c02,c03,c04,c05,c06,c07,c08\n");
        for (i, row) in self.rows.iter().enumerate() {
            s.push_str(&(i + 1).to_string());
            for v in row {
                s.push(',');
                s.push_str(&v.to_string());
            }
            s.push('\n');
        }
        s
    }

    pub fn from_csv<R: Read>(reader: R, file: &str) -> Result<Self> {
        let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
        let mut rows = Vec::new();
        for rec in rdr.deserialize::<(usize, f64, f64, f64, f64, f64, f64, f64, f64)>() {
            let (_, a, b, c, d, e, f, g, h) = rec.map_err(|e| parse_error(file, &e))?;
            rows.push([a, b, c, d, e, f, g, h]);
        }
        Self::new(rows)
    }
}

/// Checks non-negativity and unit sum.
pub(crate) fn check_composition(row: &[f64]) -> std::result::Result<(), String> {
    if let Some(v) = row.iter().find(|v| !v.is_finite() || **v < 0.0) {
        return Err(format!("entry {v} is negative or not finite"));
    }
    let sum: f64 = row.iter().sum();
    if (sum - 1.0).abs() > ROW_SUM_TOL {
        return Err(format!("row sums to {sum}"));
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use ActivityCategory::*;

    fn ev(start: u32, end: u32, c: ActivityCategory) -> DiaryEvent {
        DiaryEvent::new(start, end, c).unwrap()
    }

    #[test]
    fn default_mapping_examples() {
        let m = CategoryMapping::default_atus();
        assert_eq!(map_raw_activity("sleeping", &m).unwrap(), C02);
        assert_eq!(map_raw_activity("socializing", &m).unwrap(), C07);
        assert_eq!(map_raw_activity("relaxing", &m).unwrap(), C07);
        assert_eq!(map_raw_activity("sports", &m).unwrap(), C07);
        assert_eq!(map_raw_activity("05", &m).unwrap(), C05);
        assert!(matches!(
            map_raw_activity("juggling", &m),
            Err(Error::UnknownRawCode(code)) if code == "juggling"
        ));
    }

    #[test]
    fn default_mapping_reaches_every_category() {
        let reps = CategoryMapping::default_atus().representative_codes();
        assert_eq!(reps.len(), NCAT);
    }

    #[test]
    fn identity_mapping() {
        let m = CategoryMapping::identity();
        assert_eq!(map_raw_activity("c05", &m).unwrap(), C05);
    }

    #[test]
    fn conflicting_mapping_rejected() {
        let err = CategoryMapping::from_entries([("x".to_string(), C01), ("x".to_string(), C02)]);
        assert!(err.is_err());
    }

    #[test]
    fn full_day_single_activity() {
        let seq = diary_to_sequence("p", "c", &[ev(0, 1440, C02)], &TimeGrid::default()).unwrap();
        assert!(seq.slots().iter().all(|&c| c == C02));
    }

    #[test]
    fn exact_boundary_halves() {
        let seq = diary_to_sequence("p", "c", &[ev(720, 1440, C05), ev(0, 720, C02)], &TimeGrid::default()).unwrap();
        assert!((1..=48).all(|t| seq.at(t) == C02));
        assert!((49..=96).all(|t| seq.at(t) == C05));
    }

    #[test]
    fn majority_of_slot_minutes() {
        let events = [ev(0, 10, C02), ev(10, 15, C05), ev(15, 1440, C07)];
        let seq = diary_to_sequence("p", "c", &events, &TimeGrid::default()).unwrap();
        assert_eq!(seq.at(1), C02);
        assert_eq!(seq.at(2), C07);
    }

    #[test]
    fn tie_goes_to_earlier_start() {
        // 5 + 5 + 5 minutes in slot 1; the earliest wins
        let events = [ev(0, 5, C03), ev(5, 10, C04), ev(10, 1440, C05)];
        let seq = diary_to_sequence("p", "c", &events, &TimeGrid::default()).unwrap();
        assert_eq!(seq.at(1), C03);
        // 7.5 vs 7.5 is impossible with whole minutes; 8 vs 7 picks the longer one
        let events = [ev(0, 7, C03), ev(7, 1440, C04)];
        let seq = diary_to_sequence("p", "c", &events, &TimeGrid::default()).unwrap();
        assert_eq!(seq.at(1), C04);
    }

    #[test]
    fn gap_and_overlap_errors() {
        let g = TimeGrid::default();
        assert!(matches!(
            diary_to_sequence("p", "c", &[ev(0, 600, C02), ev(610, 1440, C02)], &g),
            Err(Error::CoverageGap { start: 600, end: 610, .. })
        ));
        assert!(matches!(
            diary_to_sequence("p", "c", &[ev(0, 600, C02), ev(590, 1440, C02)], &g),
            Err(Error::OverlapError { at: 590, .. })
        ));
        assert!(matches!(
            diary_to_sequence("p", "c", &[ev(0, 1400, C02)], &g),
            Err(Error::CoverageGap { start: 1400, end: 1440, .. })
        ));
        assert!(matches!(diary_to_sequence("p", "c", &[], &g), Err(Error::CoverageGap { .. })));
    }

    #[test]
    fn midnight_crossing_rejected() {
        assert!(DiaryEvent::new(1400, 1500, C02).is_err());
        assert!(DiaryEvent::new(10, 10, C02).is_err());
    }

    #[test]
    fn scaled_time_symmetric() {
        let g = TimeGrid::default();
        assert_eq!(g.scaled_time(1), -1.0);
        assert_eq!(g.scaled_time(96), 1.0);
        assert_eq!(g.time_sq(1), g.time_sq(96));
        assert_eq!(g.time_sq(10), g.time_sq(87));
    }

    #[test]
    fn composition_matrix_rejects_bad_rows() {
        let mut rows = vec![[0.125; NCAT]; STEPS];
        assert!(CompositionMatrix::new(rows.clone()).is_ok());
        rows[3][0] = 0.2;
        assert!(CompositionMatrix::new(rows).is_err());
        assert!(CompositionMatrix::new(vec![[0.125; NCAT]; 95]).is_err());
    }

    #[test]
    fn composition_csv_round_trip() {
        let mut rows = vec![[0.125; NCAT]; STEPS];
        rows[0] = [0.1, 0.2, 0.3, 0.05, 0.05, 0.1, 0.1, 0.1];
        let m = CompositionMatrix::new(rows).unwrap();
        let csv = m.to_csv();
        assert!(csv.starts_with("step,c01,c02,c03,c04,c05,c06,c07,c08\n1,0.1,0.2,"));
        assert_eq!(CompositionMatrix::from_csv(csv.as_bytes(), "m.csv").unwrap(), m);
    }

    #[test]
    fn covariate_building_shares_checked() {
        let csv = "community_id,population_density,diversity,racial_segregation,median_age,male_female_ratio,disabilities,household_median_income,unemployment,education,transportation,institutional,residential,mercantile,business\n\
                   a,1,2,0.3,40,90,10,50000,4,80,40,0.1,1.2,0.1,0.1\n";
        assert!(CommunityCovariates::read_csv(csv.as_bytes(), "cov.csv").is_err());
    }
}
