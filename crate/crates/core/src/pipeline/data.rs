use std::collections::BTreeSet;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::geometry::LandmarkFrame;

/// Diagnostic class. HC is the negative class and the tie-break default.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Class {
    #[serde(rename = "HC")]
    Hc,
    #[serde(rename = "ALS")]
    Als,
}

impl Class {
    pub fn index(self) -> usize {
        match self {
            Class::Hc => 0,
            Class::Als => 1,
        }
    }

    pub fn from_index(i: usize) -> Option<Class> {
        match i {
            0 => Some(Class::Hc),
            1 => Some(Class::Als),
            _ => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Class::Hc => "HC",
            Class::Als => "ALS",
        }
    }
}

impl fmt::Display for Class {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Class {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "HC" => Ok(Class::Hc),
            "ALS" => Ok(Class::Als),
            other => Err(Error::Config(format!(
                "unknown group {other:?} (expected HC or ALS)"
            ))),
        }
    }
}

/// Oro-facial clinical task.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum Task {
    Spread,
    Kiss,
    Open,
    Blow,
    Bbp,
    Pa,
    Pataka,
}

impl Task {
    pub const ALL: [Task; 7] = [
        Task::Spread,
        Task::Kiss,
        Task::Open,
        Task::Blow,
        Task::Bbp,
        Task::Pa,
        Task::Pataka,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            Task::Spread => "SPREAD",
            Task::Kiss => "KISS",
            Task::Open => "OPEN",
            Task::Blow => "BLOW",
            Task::Bbp => "BBP",
            Task::Pa => "PA",
            Task::Pataka => "PATAKA",
        }
    }
}

impl fmt::Display for Task {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Task {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Task::ALL
            .into_iter()
            .find(|t| t.as_str() == s)
            .ok_or_else(|| Error::Config(format!("unknown task {s:?}")))
    }
}

/// One performance of a task, as an ordered run of frames.
#[derive(Debug, Clone, PartialEq)]
pub struct Repetition {
    pub repetition_id: String,
    pub task: Task,
    pub label: Class,
    frames: Vec<LandmarkFrame>,
}

impl Repetition {
    pub fn new(
        repetition_id: impl Into<String>,
        task: Task,
        label: Class,
        frames: Vec<LandmarkFrame>,
    ) -> Result<Self> {
        let repetition_id = repetition_id.into();
        if frames.is_empty() {
            return Err(Error::EmptyInput(format!(
                "repetition {repetition_id} has no frames"
            )));
        }
        if let Some(w) = frames
            .windows(2)
            .find(|w| w[0].frame_index() >= w[1].frame_index())
        {
            return Err(Error::Integrity(format!(
                "repetition {repetition_id}: frame {} does not follow {}",
                w[1].frame_index(),
                w[0].frame_index()
            )));
        }
        Ok(Repetition {
            repetition_id,
            task,
            label,
            frames,
        })
    }

    pub fn frames(&self) -> &[LandmarkFrame] {
        &self.frames
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct Subject {
    pub subject_id: String,
    pub group: Class,
    repetitions: Vec<Repetition>,
}

impl Subject {
    /// Repetitions are kept sorted by `(task, repetition_id)`.
    pub fn new(
        subject_id: impl Into<String>,
        group: Class,
        mut repetitions: Vec<Repetition>,
    ) -> Result<Self> {
        let subject_id = subject_id.into();
        if repetitions.is_empty() {
            return Err(Error::EmptyInput(format!(
                "subject {subject_id} has no repetitions"
            )));
        }
        if let Some(r) = repetitions.iter().find(|r| r.label != group) {
            return Err(Error::Integrity(format!(
                "subject {subject_id} is {group} but repetition {} is labelled {}",
                r.repetition_id, r.label
            )));
        }
        repetitions.sort_by(|a, b| (a.task, &a.repetition_id).cmp(&(b.task, &b.repetition_id)));
        if let Some(w) = repetitions
            .windows(2)
            .find(|w| w[0].task == w[1].task && w[0].repetition_id == w[1].repetition_id)
        {
            return Err(Error::Integrity(format!(
                "subject {subject_id}: repetition {} of {} listed twice",
                w[0].repetition_id, w[0].task
            )));
        }
        Ok(Subject {
            subject_id,
            group,
            repetitions,
        })
    }

    pub fn repetitions(&self) -> &[Repetition] {
        &self.repetitions
    }
}

/// Subjects sorted by id.
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    subjects: Vec<Subject>,
    task_filter: Option<Task>,
}

impl Dataset {
    pub fn new(mut subjects: Vec<Subject>, task_filter: Option<Task>) -> Result<Self> {
        subjects.sort_by(|a, b| a.subject_id.cmp(&b.subject_id));
        if let Some(w) = subjects
            .windows(2)
            .find(|w| w[0].subject_id == w[1].subject_id)
        {
            return Err(Error::Integrity(format!(
                "subject {} listed twice",
                w[0].subject_id
            )));
        }
        if let Some(task) = task_filter {
            if subjects
                .iter()
                .flat_map(|s| s.repetitions())
                .any(|r| r.task != task)
            {
                return Err(Error::Integrity(format!(
                    "dataset filtered to {task} holds other tasks"
                )));
            }
        }
        Ok(Dataset {
            subjects,
            task_filter,
        })
    }

    pub fn subjects(&self) -> &[Subject] {
        &self.subjects
    }

    pub fn task_filter(&self) -> Option<Task> {
        self.task_filter
    }

    pub fn subject(&self, id: &str) -> Option<&Subject> {
        self.subjects.iter().find(|s| s.subject_id == id)
    }

    pub fn tasks(&self) -> BTreeSet<Task> {
        self.subjects
            .iter()
            .flat_map(|s| s.repetitions().iter().map(|r| r.task))
            .collect()
    }

    /// Keep only repetitions of `task`; subjects left without any are dropped.
    pub fn filter_task(&self, task: Task) -> Dataset {
        let subjects = self
            .subjects
            .iter()
            .filter_map(|s| {
                let reps: Vec<Repetition> = s
                    .repetitions()
                    .iter()
                    .filter(|r| r.task == task)
                    .cloned()
                    .collect();
                Subject::new(s.subject_id.clone(), s.group, reps).ok()
            })
            .collect();
        Dataset {
            subjects,
            task_filter: Some(task),
        }
    }

    pub fn count_group(&self, group: Class) -> usize {
        self.subjects.iter().filter(|s| s.group == group).count()
    }
}
