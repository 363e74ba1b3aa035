//! In-process gear honing quality monitoring.
//!
//! Pipeline: two-channel vibration signals -> STFT magnitude spectrograms ->
//! grayscale fusion -> subspace feature extraction (PCA, PCA-LDA, R-UMLDA) ->
//! Gaussian-kernel ECOC-SVM classification into four quality classes
//! (OK, NOK1, NOK2, NOK3). A deterministic synthetic signal generator stands
//! in for machine data so the whole chain can be exercised end to end.

pub mod dataset;
pub mod error;
pub mod pca;
pub mod linalg;
pub mod preprocess;
pub mod spectrogram;

pub use dataset::{ClassLabel, LabeledDataset};
pub use error::{Error, Result};
pub use linalg::{gen_sym_eig, sym_eig, EigenPairs, Matrix, Tensor3};
pub use preprocess::AssembleMode;
pub use spectrogram::{RawObservation, Spectrogram, StftConfig};
