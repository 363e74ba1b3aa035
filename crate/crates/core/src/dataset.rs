//! Labeled observation collections shared by the learners, the evaluation
//! harness, and the binary container formats.

use crate::error::{Error, Result};
use crate::linalg::Tensor3;
use crate::preprocess::AssembleMode;
use serde::{Deserialize, Serialize};
use std::fmt;

/// The four gear quality classes.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Serialize, Deserialize)]
#[serde(rename_all = "UPPERCASE")]
pub enum ClassLabel {
    Ok,
    Nok1,
    Nok2,
    Nok3,
}

impl ClassLabel {
    pub const ALL: [ClassLabel; 4] = [
        ClassLabel::Ok,
        ClassLabel::Nok1,
        ClassLabel::Nok2,
        ClassLabel::Nok3,
    ];

    pub const COUNT: usize = 4;

    pub fn index(self) -> usize {
        match self {
            ClassLabel::Ok => 0,
            ClassLabel::Nok1 => 1,
            ClassLabel::Nok2 => 2,
            ClassLabel::Nok3 => 3,
        }
    }

    pub fn from_index(i: usize) -> Result<Self> {
        Self::ALL
            .get(i)
            .copied()
            .ok_or_else(|| Error::Corrupt(format!("class index {} outside 0..4", i)))
    }

    pub fn name(self) -> &'static str {
        match self {
            ClassLabel::Ok => "OK",
            ClassLabel::Nok1 => "NOK1",
            ClassLabel::Nok2 => "NOK2",
            ClassLabel::Nok3 => "NOK3",
        }
    }
}

impl fmt::Display for ClassLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl std::str::FromStr for ClassLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_uppercase().as_str() {
            "OK" => Ok(ClassLabel::Ok),
            "NOK1" => Ok(ClassLabel::Nok1),
            "NOK2" => Ok(ClassLabel::Nok2),
            "NOK3" => Ok(ClassLabel::Nok3),
            other => Err(Error::Config(format!("unknown class label '{}'", other))),
        }
    }
}

/// Assembled observations with class labels. Samples are stored as tensors:
/// `w x b x 1` for vector/merged modes, `w x b x 2` for spectrogram pairs.
#[derive(Debug, Clone)]
pub struct LabeledDataset {
    pub mode: AssembleMode,
    pub frames: usize,
    pub bins: usize,
    pub samples: Vec<Tensor3>,
    pub labels: Vec<ClassLabel>,
}

impl LabeledDataset {
    pub fn new(
        mode: AssembleMode,
        frames: usize,
        bins: usize,
        samples: Vec<Tensor3>,
        labels: Vec<ClassLabel>,
    ) -> Result<Self> {
        if samples.len() != labels.len() {
            return Err(Error::Dimension(format!(
                "{} samples vs {} labels",
                samples.len(),
                labels.len()
            )));
        }
        let channels = mode.channels();
        for (i, s) in samples.iter().enumerate() {
            if s.dims() != (frames, bins, channels) {
                return Err(Error::Dimension(format!(
                    "sample {} has dims {:?}, expected ({}, {}, {})",
                    i,
                    s.dims(),
                    frames,
                    bins,
                    channels
                )));
            }
        }
        Ok(LabeledDataset {
            mode,
            frames,
            bins,
            samples,
            labels,
        })
    }

    pub fn len(&self) -> usize {
        self.samples.len()
    }

    pub fn is_empty(&self) -> bool {
        self.samples.is_empty()
    }

    pub fn channels(&self) -> usize {
        self.mode.channels()
    }

    /// Per-class sample counts indexed by `ClassLabel::index`.
    pub fn class_counts(&self) -> [usize; ClassLabel::COUNT] {
        let mut counts = [0usize; ClassLabel::COUNT];
        for l in &self.labels {
            counts[l.index()] += 1;
        }
        counts
    }

    /// Class indices (0..4) for the learners.
    pub fn label_indices(&self) -> Vec<usize> {
        self.labels.iter().map(|l| l.index()).collect()
    }

    /// Row-major flattening of sample `i` (vector and merged modes only).
    pub fn flat_sample(&self, i: usize) -> Result<Vec<f64>> {
        if self.channels() != 1 {
            return Err(Error::Dimension(
                "flattening only applies to single-channel samples".into(),
            ));
        }
        Ok(self.samples[i].as_slice().to_vec())
    }

    /// All samples flattened (vector and merged modes only).
    pub fn flat_samples(&self) -> Result<Vec<Vec<f64>>> {
        (0..self.len()).map(|i| self.flat_sample(i)).collect()
    }

    /// New dataset containing the given sample indices, in order.
    pub fn subset(&self, indices: &[usize]) -> Result<LabeledDataset> {
        let mut samples = Vec::with_capacity(indices.len());
        let mut labels = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::Index(format!("sample index {} of {}", i, self.len())));
            }
            samples.push(self.samples[i].clone());
            labels.push(self.labels[i]);
        }
        LabeledDataset::new(self.mode, self.frames, self.bins, samples, labels)
    }

    /// Same observations with labels replaced (used by shuffle controls).
    pub fn with_labels(&self, labels: Vec<ClassLabel>) -> Result<LabeledDataset> {
        LabeledDataset::new(
            self.mode,
            self.frames,
            self.bins,
            self.samples.clone(),
            labels,
        )
    }
}
