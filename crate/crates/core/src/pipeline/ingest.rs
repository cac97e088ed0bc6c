use std::collections::HashMap;
use std::io::Read;
use std::path::Path;

use serde::{Deserialize, Serialize};

use crate::activity::{
    diary_to_sequence, parse_error_named, ActivitySequence, CategoryMapping, CommunityCovariates, DiaryEvent, TimeGrid,
};
use crate::error::{Error, Result};
use crate::pipeline::config::PipelineConfig;

/// One row of the diary CSV. `weight` is accepted and ignored.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct DiaryRecord {
    pub person_id: String,
    pub community_id: String,
    pub start_min: u32,
    pub end_min: u32,
    pub raw_code: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub weight: Option<f64>,
}

/// Diaries of one community, in order of first appearance.
#[derive(Debug, Clone, PartialEq)]
pub struct CommunityDiaries {
    pub community_id: String,
    pub diaries: Vec<ActivitySequence>,
}

#[derive(Debug, Clone, PartialEq)]
pub struct IngestedData {
    pub communities: Vec<CommunityDiaries>,
    /// Covariates aligned with `communities`.
    pub covariates: Vec<CommunityCovariates>,
    pub n_records: usize,
}

/// Parses diary rows and converts each person's events into a sequence.
/// Communities and persons keep their order of first appearance.
pub fn read_diaries<R: Read>(
    reader: R,
    file: &str,
    mapping: &CategoryMapping,
    grid: &TimeGrid,
) -> Result<(Vec<CommunityDiaries>, usize)> {
    let mut rdr = csv::ReaderBuilder::new().trim(csv::Trim::All).from_reader(reader);
    let mut community_index: HashMap<String, usize> = HashMap::new();
    let mut person_index: HashMap<(String, String), (usize, usize)> = HashMap::new();
    let mut groups: Vec<(String, Vec<(String, Vec<DiaryEvent>)>)> = Vec::new();
    let mut n_records = 0;
    let headers = rdr.headers().ok().cloned();
    for rec in rdr.deserialize::<DiaryRecord>() {
        let rec = rec.map_err(|e| parse_error_named(file, &e, headers.as_ref()))?;
        n_records += 1;
        let line = n_records + 1;
        let category = mapping.map(&rec.raw_code)?;
        let event = DiaryEvent::new(rec.start_min, rec.end_min, category).map_err(|e| Error::Parse {
            file: file.to_string(),
            line: line as u64,
            column: None,
            message: e.to_string(),
        })?;
        let ci = *community_index.entry(rec.community_id.clone()).or_insert_with(|| {
            groups.push((rec.community_id.clone(), Vec::new()));
            groups.len() - 1
        });
        let key = (rec.community_id, rec.person_id);
        let (ci, pi) = *person_index.entry(key.clone()).or_insert_with(|| {
            groups[ci].1.push((key.1.clone(), Vec::new()));
            (ci, groups[ci].1.len() - 1)
        });
        groups[ci].1[pi].1.push(event);
    }
    if n_records == 0 {
        return Err(Error::EmptyInput(format!("{file}: no diary records")));
    }
    let communities = groups
        .into_iter()
        .map(|(cid, persons)| {
            let diaries = persons
                .into_iter()
                .map(|(pid, events)| diary_to_sequence(&pid, &cid, &events, grid))
                .collect::<Result<Vec<_>>>()?;
            Ok(CommunityDiaries { community_id: cid, diaries })
        })
        .collect::<Result<Vec<_>>>()?;
    Ok((communities, n_records))
}

/// Orders covariate rows like `communities`.
pub fn align_covariates(
    communities: &[CommunityDiaries],
    covariates: &[CommunityCovariates],
) -> Result<Vec<CommunityCovariates>> {
    communities
        .iter()
        .map(|c| {
            covariates
                .iter()
                .find(|v| v.community_id == c.community_id)
                .cloned()
                .ok_or_else(|| Error::CommunityMismatch(c.community_id.clone()))
        })
        .collect()
}

fn open(path: &Path) -> Result<std::fs::File> {
    std::fs::File::open(path).map_err(|e| Error::io(path, e))
}

/// Reads the mapping, diaries and covariates named in `config`.
pub fn ingest(config: &PipelineConfig) -> Result<IngestedData> {
    let mapping = config.mapping()?;
    let grid = config.grid();
    let dpath = &config.paths.diaries;
    let (communities, n_records) = read_diaries(open(dpath)?, &dpath.display().to_string(), &mapping, &grid)?;
    let cpath = &config.paths.covariates;
    let covariates = CommunityCovariates::read_csv(open(cpath)?, &cpath.display().to_string())?;
    let covariates = align_covariates(&communities, &covariates)?;
    Ok(IngestedData { communities, covariates, n_records })
}
