//! STFT magnitude spectrograms from raw two-channel vibration signals.
//!
//! The transform keeps its own small radix-2 FFT (naive DFT for odd sizes)
//! instead of a vendored FFT: no runtime SIMD dispatch means the summation
//! order, and therefore every output bit, is identical on any IEEE-754
//! machine.

use crate::error::{Error, Result};
use crate::linalg::Matrix;
use serde::{Deserialize, Serialize};
use std::f64::consts::PI;

/// One machining cycle as captured by the two accelerometers.
#[derive(Debug, Clone)]
pub struct RawObservation {
    pub spindle: Vec<f64>,
    pub tailstock: Vec<f64>,
    pub sample_rate: f64,
}

impl RawObservation {
    pub fn new(spindle: Vec<f64>, tailstock: Vec<f64>, sample_rate: f64) -> Result<Self> {
        if spindle.len() != tailstock.len() {
            return Err(Error::Dimension(format!(
                "channel lengths differ: {} vs {}",
                spindle.len(),
                tailstock.len()
            )));
        }
        if !(sample_rate > 0.0) {
            return Err(Error::Config("sample_rate must be positive".into()));
        }
        if !spindle.iter().chain(tailstock.iter()).all(|x| x.is_finite()) {
            return Err(Error::Numeric("raw observation has non-finite samples".into()));
        }
        Ok(RawObservation {
            spindle,
            tailstock,
            sample_rate,
        })
    }

    pub fn len(&self) -> usize {
        self.spindle.len()
    }

    pub fn is_empty(&self) -> bool {
        self.spindle.is_empty()
    }
}

/// Window taper family.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum WindowKind {
    Hamming,
    Rectangular,
}

impl Default for WindowKind {
    fn default() -> Self {
        WindowKind::Hamming
    }
}

/// STFT configuration. Defaults reproduce the acquisition setup: 512-point
/// Hamming window, 200 time frames, 512 (two-sided) frequency bins.
#[derive(Debug, Clone, Copy, PartialEq, Serialize, Deserialize)]
#[serde(deny_unknown_fields, default)]
pub struct StftConfig {
    pub window_len: usize,
    pub frames: usize,
    pub bins: usize,
    pub window: WindowKind,
}

impl Default for StftConfig {
    fn default() -> Self {
        StftConfig {
            window_len: 512,
            frames: 200,
            bins: 512,
            window: WindowKind::Hamming,
        }
    }
}

impl StftConfig {
    pub fn validate(&self) -> Result<()> {
        if self.window_len < 2 {
            return Err(Error::Config("window_len must be >= 2".into()));
        }
        if self.frames < 2 {
            return Err(Error::Config("frames must be >= 2".into()));
        }
        let one_sided = self.window_len / 2 + 1;
        if self.bins != self.window_len && self.bins != one_sided {
            return Err(Error::Config(format!(
                "bins must be window_len ({}) or window_len/2+1 ({}), got {}",
                self.window_len, one_sided, self.bins
            )));
        }
        Ok(())
    }

    /// Hop between frame starts for a signal of `len` samples.
    pub fn hop(&self, len: usize) -> Result<usize> {
        if len < self.window_len {
            return Err(Error::Config(format!(
                "signal of {} samples is shorter than the {}-point window",
                len, self.window_len
            )));
        }
        let hop = (len - self.window_len) / (self.frames - 1);
        if hop < 1 {
            return Err(Error::Config(format!(
                "signal of {} samples cannot supply {} frames of {} points",
                len, self.frames, self.window_len
            )));
        }
        Ok(hop)
    }
}

/// Non-negative STFT magnitude map: `frames` rows x `bins` columns.
#[derive(Debug, Clone, PartialEq)]
pub struct Spectrogram {
    pub magnitudes: Matrix,
}

impl Spectrogram {
    pub fn frames(&self) -> usize {
        self.magnitudes.rows()
    }

    pub fn bins(&self) -> usize {
        self.magnitudes.cols()
    }
}

/// Hamming coefficients `0.54 - 0.46 cos(2 pi n / (L - 1))`.
pub fn window_coefficients(kind: WindowKind, len: usize) -> Vec<f64> {
    match kind {
        WindowKind::Hamming => (0..len)
            .map(|n| 0.54 - 0.46 * (2.0 * PI * n as f64 / (len as f64 - 1.0)).cos())
            .collect(),
        WindowKind::Rectangular => vec![1.0; len],
    }
}

/// Magnitude STFT. Frame `j` covers samples `[j*hop, j*hop + window_len)`;
/// each frame is tapered, Fourier transformed, and stored as magnitudes.
/// With `bins == window_len` the full conjugate-symmetric spectrum is kept,
/// with `bins == window_len/2 + 1` only the one-sided half.
pub fn stft(signal: &[f64], cfg: &StftConfig) -> Result<Spectrogram> {
    cfg.validate()?;
    if !signal.iter().all(|x| x.is_finite()) {
        return Err(Error::Numeric("signal has non-finite samples".into()));
    }
    let hop = cfg.hop(signal.len())?;
    let window = window_coefficients(cfg.window, cfg.window_len);
    let mut mags = Matrix::zeros(cfg.frames, cfg.bins);
    let mut re = vec![0.0; cfg.window_len];
    let mut im = vec![0.0; cfg.window_len];
    for frame in 0..cfg.frames {
        let start = frame * hop;
        for n in 0..cfg.window_len {
            re[n] = signal[start + n] * window[n];
            im[n] = 0.0;
        }
        dft_in_place(&mut re, &mut im);
        let row = mags.row_mut(frame);
        for (k, slot) in row.iter_mut().enumerate() {
            *slot = (re[k] * re[k] + im[k] * im[k]).sqrt();
        }
    }
    Ok(Spectrogram { magnitudes: mags })
}

/// Drops the leading `fraction` of the signal, keeping the trailing part.
/// The retained length is rounded up so the observation window never shrinks
/// below the advertised share.
pub fn trim_observation(signal: &[f64], fraction: f64) -> Result<Vec<f64>> {
    if !(0.0..1.0).contains(&fraction) {
        return Err(Error::Config(format!(
            "trim fraction must be in [0, 1), got {}",
            fraction
        )));
    }
    let keep = ((signal.len() as f64) * (1.0 - fraction)).ceil() as usize;
    Ok(signal[signal.len() - keep..].to_vec())
}

/// In-place complex DFT: iterative radix-2 Cooley-Tukey for power-of-two
/// lengths, direct summation otherwise (config sizes are small).
fn dft_in_place(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    if n.is_power_of_two() {
        fft_radix2(re, im);
    } else {
        let mut out_re = vec![0.0; n];
        let mut out_im = vec![0.0; n];
        for (k, (or, oi)) in out_re.iter_mut().zip(out_im.iter_mut()).enumerate() {
            let mut sr = 0.0;
            let mut si = 0.0;
            for t in 0..n {
                let ang = -2.0 * PI * (k * t % n) as f64 / n as f64;
                let (s, c) = ang.sin_cos();
                sr += re[t] * c - im[t] * s;
                si += re[t] * s + im[t] * c;
            }
            *or = sr;
            *oi = si;
        }
        re.copy_from_slice(&out_re);
        im.copy_from_slice(&out_im);
    }
}

fn fft_radix2(re: &mut [f64], im: &mut [f64]) {
    let n = re.len();
    // Bit-reversal permutation.
    let mut j = 0usize;
    for i in 1..n {
        let mut bit = n >> 1;
        while j & bit != 0 {
            j ^= bit;
            bit >>= 1;
        }
        j |= bit;
        if i < j {
            re.swap(i, j);
            im.swap(i, j);
        }
    }
    let mut len = 2;
    while len <= n {
        let ang = -2.0 * PI / len as f64;
        let (wl_s, wl_c) = ang.sin_cos();
        let mut i = 0;
        while i < n {
            let mut wr = 1.0;
            let mut wi = 0.0;
            for k in 0..len / 2 {
                let (ur, ui) = (re[i + k], im[i + k]);
                let (vr0, vi0) = (re[i + k + len / 2], im[i + k + len / 2]);
                let vr = vr0 * wr - vi0 * wi;
                let vi = vr0 * wi + vi0 * wr;
                re[i + k] = ur + vr;
                im[i + k] = ui + vi;
                re[i + k + len / 2] = ur - vr;
                im[i + k + len / 2] = ui - vi;
                let nwr = wr * wl_c - wi * wl_s;
                wi = wr * wl_s + wi * wl_c;
                wr = nwr;
            }
            i += len;
        }
        len <<= 1;
    }
}
