//! Flat landmark CSV: one row per frame.
//!
//! ```text
//! subject_id,group,task,repetition_id,frame_index,x0,y0,x1,y1,...,x67,y67
//! HC01,HC,SPREAD,r01,0,3.8600000000000001e1,8.2000000000000000e1,...
//! ```
//!
//! Coordinates are written with 17 significant digits so every `f64`
//! survives a write/read cycle unchanged.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::Path;

use super::write_atomic;
use crate::error::{Error, Result};
use crate::geometry::{LandmarkFrame, Point2D, NUM_LANDMARKS};
use crate::pipeline::{Class, Dataset, Repetition, Subject, Task};

const META_COLUMNS: [&str; 5] = [
    "subject_id",
    "group",
    "task",
    "repetition_id",
    "frame_index",
];
pub const NUM_COLUMNS: usize = META_COLUMNS.len() + 2 * NUM_LANDMARKS;

pub fn header() -> Vec<String> {
    let mut cols: Vec<String> = META_COLUMNS.iter().map(|s| s.to_string()).collect();
    for i in 0..NUM_LANDMARKS {
        cols.push(format!("x{i}"));
        cols.push(format!("y{i}"));
    }
    cols
}

type RepKey = (Task, String);
type Frames = BTreeMap<u32, LandmarkFrame>;

struct SubjectRows {
    group: Class,
    first_line: u64,
    reps: BTreeMap<RepKey, Frames>,
}

/// Parse a landmark CSV into a dataset. Every row is validated, including
/// rows of tasks excluded by `task_filter`; any violation fails the load.
pub fn load_dataset(path: &Path, task_filter: Option<Task>) -> Result<Dataset> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Error::Config(format!("{}: {e}", path.display())))?;
    parse_dataset(&text, path, task_filter)
}

pub fn parse_dataset(text: &str, path: &Path, task_filter: Option<Task>) -> Result<Dataset> {
    let parse_err = |line: u64, msg: String| Error::Parse {
        path: path.to_path_buf(),
        line,
        msg,
    };
    let mut reader = csv::ReaderBuilder::new()
        .has_headers(true)
        .flexible(true)
        .from_reader(text.as_bytes());
    let found: Vec<String> = reader
        .headers()
        .map_err(|e| parse_err(1, e.to_string()))?
        .iter()
        .map(str::to_string)
        .collect();
    if found != header() {
        return Err(parse_err(
            1,
            format!(
                "header must list {} columns subject_id,...,y67",
                NUM_COLUMNS
            ),
        ));
    }

    let mut subjects: BTreeMap<String, SubjectRows> = BTreeMap::new();
    for record in reader.records() {
        let record = record.map_err(|e| {
            let line = e.position().map_or(0, |p| p.line());
            parse_err(line, e.to_string())
        })?;
        let line = record.position().map_or(0, |p| p.line());
        if record.len() != NUM_COLUMNS {
            return Err(parse_err(
                line,
                format!(
                    "expected {NUM_COLUMNS} fields ({} coordinates), got {} ({} coordinates)",
                    2 * NUM_LANDMARKS,
                    record.len(),
                    record.len().saturating_sub(META_COLUMNS.len())
                ),
            ));
        }
        let subject_id = record[0].to_string();
        if subject_id.is_empty() || record[3].is_empty() {
            return Err(parse_err(line, "empty subject or repetition id".into()));
        }
        let group: Class = record[1]
            .parse()
            .map_err(|e: Error| parse_err(line, e.to_string()))?;
        let task: Task = record[2]
            .parse()
            .map_err(|e: Error| parse_err(line, e.to_string()))?;
        let frame_index: u32 = record[4]
            .parse()
            .map_err(|_| parse_err(line, format!("bad frame_index {:?}", &record[4])))?;
        let mut points = Vec::with_capacity(NUM_LANDMARKS);
        for i in 0..NUM_LANDMARKS {
            let coord = |k: usize| -> Result<f64> {
                let raw = &record[META_COLUMNS.len() + k];
                let v: f64 = raw
                    .trim()
                    .parse()
                    .map_err(|_| parse_err(line, format!("bad coordinate {raw:?}")))?;
                if !v.is_finite() {
                    return Err(parse_err(line, format!("non-finite coordinate {raw:?}")));
                }
                Ok(v)
            };
            points.push(Point2D::new(coord(2 * i)?, coord(2 * i + 1)?));
        }
        let frame = LandmarkFrame::new(points, frame_index)?;

        let entry = subjects
            .entry(subject_id.clone())
            .or_insert_with(|| SubjectRows {
                group,
                first_line: line,
                reps: BTreeMap::new(),
            });
        if entry.group != group {
            return Err(Error::Integrity(format!(
                "line {line}: subject {subject_id} is {group} here but {} on line {}",
                entry.group, entry.first_line
            )));
        }
        let frames = entry.reps.entry((task, record[3].to_string())).or_default();
        if frames.insert(frame_index, frame).is_some() {
            return Err(Error::Integrity(format!(
                "line {line}: duplicate frame {frame_index} in {subject_id}/{task}/{}",
                &record[3]
            )));
        }
    }

    let mut out = Vec::with_capacity(subjects.len());
    for (id, rows) in subjects {
        let reps: Vec<Repetition> = rows
            .reps
            .into_iter()
            .filter(|((task, _), _)| task_filter.is_none_or(|t| t == *task))
            .map(|((task, rep_id), frames)| {
                Repetition::new(rep_id, task, rows.group, frames.into_values().collect())
            })
            .collect::<Result<_>>()?;
        if !reps.is_empty() {
            out.push(Subject::new(id, rows.group, reps)?);
        }
    }
    Dataset::new(out, task_filter)
}

pub fn dataset_to_csv(dataset: &Dataset) -> String {
    let mut s = header().join(",");
    s.push('\n');
    for subject in dataset.subjects() {
        for rep in subject.repetitions() {
            for frame in rep.frames() {
                write!(
                    s,
                    "{},{},{},{},{}",
                    subject.subject_id,
                    subject.group,
                    rep.task,
                    rep.repetition_id,
                    frame.frame_index()
                )
                .unwrap();
                for p in frame.points() {
                    write!(s, ",{:.16e},{:.16e}", p.x, p.y).unwrap();
                }
                s.push('\n');
            }
        }
    }
    s
}

pub fn write_dataset(dataset: &Dataset, path: &Path) -> Result<()> {
    write_atomic(path, dataset_to_csv(dataset).as_bytes())
}
