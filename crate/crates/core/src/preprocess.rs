//! Grayscale normalization, Hadamard fusion of the two sensor spectrograms,
//! and assembly of learner inputs (flattened vectors, merged maps, or
//! spectrogram-pair tensors).

use crate::error::{Error, Result};
use crate::linalg::{Matrix, Tensor3};
use crate::spectrogram::{stft, RawObservation, Spectrogram, StftConfig};
use serde::{Deserialize, Serialize};

/// Fused spindle/tailstock map, values in `[0, 255]`.
#[derive(Debug, Clone, PartialEq)]
pub struct MergedMap {
    pub values: Matrix,
}

impl MergedMap {
    pub fn frames(&self) -> usize {
        self.values.rows()
    }

    pub fn bins(&self) -> usize {
        self.values.cols()
    }
}

/// Two normalized, unmerged channel maps stacked along mode 3:
/// channel 0 = spindle, channel 1 = tailstock.
#[derive(Debug, Clone, PartialEq)]
pub struct ObservationTensor {
    pub values: Tensor3,
}

/// Which learner input `assemble` produces.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum AssembleMode {
    /// Flattened merged map, length `w * b`.
    Vector,
    /// Merged map as a `w x b` matrix.
    Merged,
    /// Normalized spectrogram pair as a `w x b x 2` tensor.
    Pair,
}

impl AssembleMode {
    pub fn tag(self) -> u32 {
        match self {
            AssembleMode::Vector => 0,
            AssembleMode::Merged => 1,
            AssembleMode::Pair => 2,
        }
    }

    pub fn from_tag(tag: u32) -> Result<Self> {
        match tag {
            0 => Ok(AssembleMode::Vector),
            1 => Ok(AssembleMode::Merged),
            2 => Ok(AssembleMode::Pair),
            other => Err(Error::Corrupt(format!("unknown mode tag {}", other))),
        }
    }

    pub fn channels(self) -> usize {
        match self {
            AssembleMode::Pair => 2,
            _ => 1,
        }
    }
}

/// One assembled observation, shaped for the chosen mode.
#[derive(Debug, Clone, PartialEq)]
pub enum LearnerInput {
    Vector(Vec<f64>),
    Merged(MergedMap),
    Pair(ObservationTensor),
}

impl LearnerInput {
    /// Uniform tensor view: vectors/merged maps become `w x b x 1`.
    pub fn into_tensor(self, frames: usize, bins: usize) -> Result<Tensor3> {
        match self {
            LearnerInput::Vector(v) => Tensor3::from_vec(frames, bins, 1, v),
            LearnerInput::Merged(m) => Ok(Tensor3::from_matrix(&m.values)),
            LearnerInput::Pair(t) => Ok(t.values),
        }
    }
}

/// Affine min-max map onto `[0, 255]`. Values stay continuous (quantization
/// happens only at image export); a constant input maps to all zeros.
pub fn normalize_gray_matrix(m: &Matrix) -> Matrix {
    let mut lo = f64::INFINITY;
    let mut hi = f64::NEG_INFINITY;
    for &x in m.as_slice() {
        lo = lo.min(x);
        hi = hi.max(x);
    }
    let mut out = Matrix::zeros(m.rows(), m.cols());
    if hi > lo {
        let span = hi - lo;
        // The ratio is <= 1 even after rounding, so the output stays in range.
        for (dst, &src) in out.as_mut_slice().iter_mut().zip(m.as_slice()) {
            *dst = 255.0 * ((src - lo) / span);
        }
    }
    out
}

/// Grayscale normalization of a spectrogram.
pub fn normalize_gray(s: &Spectrogram) -> Spectrogram {
    Spectrogram {
        magnitudes: normalize_gray_matrix(&s.magnitudes),
    }
}

/// Elementwise (Hadamard) product of the two normalized maps followed by a
/// second min-max rescale onto `[0, 255]`.
pub fn merge_hadamard(sp: &Spectrogram, tl: &Spectrogram) -> Result<MergedMap> {
    if sp.frames() != tl.frames() || sp.bins() != tl.bins() {
        return Err(Error::Dimension(format!(
            "merge dimensions differ: {}x{} vs {}x{}",
            sp.frames(),
            sp.bins(),
            tl.frames(),
            tl.bins()
        )));
    }
    let mut prod = Matrix::zeros(sp.frames(), sp.bins());
    for (dst, (&a, &b)) in prod
        .as_mut_slice()
        .iter_mut()
        .zip(sp.magnitudes.as_slice().iter().zip(tl.magnitudes.as_slice()))
    {
        *dst = a * b;
    }
    Ok(MergedMap {
        values: normalize_gray_matrix(&prod),
    })
}

/// Row-major (frame-major) flattening: index = frame * bins + bin.
pub fn flatten(m: &MergedMap) -> Vec<f64> {
    m.values.as_slice().to_vec()
}

/// Inverse of [`flatten`].
pub fn reshape(v: &[f64], frames: usize, bins: usize) -> Result<MergedMap> {
    Ok(MergedMap {
        values: Matrix::from_vec(frames, bins, v.to_vec())?,
    })
}

/// Full preprocessing chain for one observation: STFT per channel, grayscale
/// normalization, then mode-dependent packaging.
pub fn assemble(raw: &RawObservation, cfg: &StftConfig, mode: AssembleMode) -> Result<LearnerInput> {
    let sp = normalize_gray(&stft(&raw.spindle, cfg)?);
    let tl = normalize_gray(&stft(&raw.tailstock, cfg)?);
    match mode {
        AssembleMode::Vector => Ok(LearnerInput::Vector(flatten(&merge_hadamard(&sp, &tl)?))),
        AssembleMode::Merged => Ok(LearnerInput::Merged(merge_hadamard(&sp, &tl)?)),
        AssembleMode::Pair => Ok(LearnerInput::Pair(ObservationTensor {
            values: Tensor3::from_channels(&[sp.magnitudes, tl.magnitudes])?,
        })),
    }
}
