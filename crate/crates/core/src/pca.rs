//! Unsupervised eigen-map extraction: principal components of the total
//! scatter matrix, with the N x N Gram-matrix construction for the usual
//! case where the map dimensionality far exceeds the sample count.

use crate::error::{Error, Result};
use crate::linalg::{self, sym_eig, Matrix};
use crate::preprocess::normalize_gray_matrix;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

/// Which scatter eigendecomposition route `fit_pca_with` takes.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum PcaPath {
    /// Gram path when `D > 4 N`, direct otherwise.
    Auto,
    /// Eigendecompose the D x D scatter directly (small D only).
    Direct,
    /// Eigendecompose the N x N Gram matrix of centered samples and map the
    /// eigenvectors back.
    Gram,
}

/// Trained PCA projector.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct PcaModel {
    /// Training mean, length D.
    pub mean: Vec<f64>,
    /// D x P matrix; column p is the p-th principal component.
    pub components: Matrix,
    /// Scatter-matrix eigenvalues, descending, one per component.
    pub eigenvalues: Vec<f64>,
    /// Spectrogram shape behind the flattened vectors, `w * b == D`.
    pub map_dims: (usize, usize),
}

impl PcaModel {
    pub fn input_dim(&self) -> usize {
        self.mean.len()
    }

    pub fn num_components(&self) -> usize {
        self.components.cols()
    }

    /// Attaches the spectrogram shape used by `eigen_map`.
    pub fn with_map_dims(mut self, frames: usize, bins: usize) -> Result<Self> {
        if frames * bins != self.input_dim() {
            return Err(Error::Dimension(format!(
                "map dims {}x{} incompatible with D = {}",
                frames,
                bins,
                self.input_dim()
            )));
        }
        self.map_dims = (frames, bins);
        Ok(self)
    }

    /// Keeps the leading `p` components; truncation of a larger fit equals a
    /// direct fit with the smaller `p`.
    pub fn truncated(&self, p: usize) -> Result<PcaModel> {
        if p < 1 || p > self.num_components() {
            return Err(Error::Index(format!(
                "p = {} outside 1..={}",
                p,
                self.num_components()
            )));
        }
        let d = self.input_dim();
        let mut components = Matrix::zeros(d, p);
        for j in 0..p {
            for i in 0..d {
                components.set(i, j, self.components.get(i, j));
            }
        }
        Ok(PcaModel {
            mean: self.mean.clone(),
            components,
            eigenvalues: self.eigenvalues[..p].to_vec(),
            map_dims: self.map_dims,
        })
    }
}

fn compute_mean(data: &[Vec<f64>]) -> Vec<f64> {
    let d = data[0].len();
    let mut mean = vec![0.0; d];
    for x in data {
        for (m, v) in mean.iter_mut().zip(x.iter()) {
            *m += v;
        }
    }
    let inv = 1.0 / data.len() as f64;
    for m in &mut mean {
        *m *= inv;
    }
    mean
}

/// Fits PCA on `data` (N vectors of equal length D), keeping `p` components.
pub fn fit_pca(data: &[Vec<f64>], p: usize) -> Result<PcaModel> {
    fit_pca_with(data, p, PcaPath::Auto)
}

/// As [`fit_pca`] with an explicit scatter route (the two routes agree to
/// 1e-8; `Auto` picks Gram when `D > 4 N`).
pub fn fit_pca_with(data: &[Vec<f64>], p: usize, path: PcaPath) -> Result<PcaModel> {
    let n = data.len();
    if n < 2 {
        return Err(Error::Config("PCA needs at least 2 samples".into()));
    }
    let d = data[0].len();
    if data.iter().any(|x| x.len() != d) {
        return Err(Error::Dimension("samples have inconsistent lengths".into()));
    }
    if d == 0 {
        return Err(Error::Dimension("samples are empty".into()));
    }
    let p_max = (n - 1).min(d);
    if p < 1 || p > p_max {
        return Err(Error::Config(format!(
            "p = {} outside 1..=min(N-1, D) = {}",
            p, p_max
        )));
    }
    for x in data {
        if !x.iter().all(|v| v.is_finite()) {
            return Err(Error::Numeric("sample with non-finite entries".into()));
        }
    }

    let mean = compute_mean(data);
    let centered: Vec<Vec<f64>> = data
        .iter()
        .map(|x| x.iter().zip(mean.iter()).map(|(v, m)| v - m).collect())
        .collect();

    let use_gram = match path {
        PcaPath::Auto => d > 4 * n,
        PcaPath::Direct => false,
        PcaPath::Gram => true,
    };

    let (eigenvalues, components) = if use_gram {
        gram_eigenmaps(&centered, p)?
    } else {
        direct_eigenmaps(&centered, p)?
    };

    Ok(PcaModel {
        mean,
        components,
        eigenvalues,
        map_dims: (1, d),
    })
}

/// Direct route: S_T = sum of centered outer products, then `sym_eig`.
fn direct_eigenmaps(centered: &[Vec<f64>], p: usize) -> Result<(Vec<f64>, Matrix)> {
    let d = centered[0].len();
    let mut scatter = Matrix::zeros(d, d);
    for x in centered {
        scatter.add_outer(x, 1.0);
    }
    let pairs = sym_eig(&scatter)?;
    let mut components = Matrix::zeros(d, p);
    let mut eigenvalues = Vec::with_capacity(p);
    for k in 0..p {
        eigenvalues.push(pairs.values[k].max(0.0));
        for i in 0..d {
            components.set(i, k, pairs.vectors.get(i, k));
        }
    }
    Ok((eigenvalues, components))
}

/// Gram route: eigendecompose the N x N matrix of centered inner products
/// and map each eigenvector w back to the sample space as `B^T w`.
fn gram_eigenmaps(centered: &[Vec<f64>], p: usize) -> Result<(Vec<f64>, Matrix)> {
    let n = centered.len();
    let d = centered[0].len();
    let rows: Vec<Vec<f64>> = (0..n)
        .into_par_iter()
        .map(|i| {
            (0..n)
                .map(|j| linalg::dot(&centered[i], &centered[j]))
                .collect()
        })
        .collect();
    let mut gram = Matrix::zeros(n, n);
    for (i, row) in rows.into_iter().enumerate() {
        gram.row_mut(i).copy_from_slice(&row);
    }
    let pairs = sym_eig(&gram.symmetrized())?;

    let scale = pairs.values.first().copied().unwrap_or(0.0).max(0.0);
    let mut components = Matrix::zeros(d, p);
    let mut eigenvalues = Vec::with_capacity(p);
    for k in 0..p {
        let lambda = pairs.values[k].max(0.0);
        if lambda <= 1e-12 * scale.max(1.0) {
            return Err(Error::Numeric(format!(
                "data rank {} is below the requested {} components",
                k, p
            )));
        }
        eigenvalues.push(lambda);
        let w = pairs.vector(k);
        let mut u = vec![0.0; d];
        for (i, x) in centered.iter().enumerate() {
            let wi = w[i];
            if wi == 0.0 {
                continue;
            }
            for (uj, xj) in u.iter_mut().zip(x.iter()) {
                *uj += wi * xj;
            }
        }
        linalg::normalize_in_place(&mut u);
        for i in 0..d {
            components.set(i, k, u[i]);
        }
    }
    crate::linalg::fix_column_signs(&mut components);
    Ok((eigenvalues, components))
}

/// Projects onto the component space: `y = U^T (x - mean)`.
pub fn project_pca(model: &PcaModel, x: &[f64]) -> Result<Vec<f64>> {
    let d = model.input_dim();
    if x.len() != d {
        return Err(Error::Dimension(format!(
            "input length {} != D = {}",
            x.len(),
            d
        )));
    }
    let p = model.num_components();
    let mut y = vec![0.0; p];
    for (i, (&xi, &mi)) in x.iter().zip(model.mean.iter()).enumerate() {
        let c = xi - mi;
        if c == 0.0 {
            continue;
        }
        let row = model.components.row(i);
        for (k, slot) in y.iter_mut().enumerate() {
            *slot += c * row[k];
        }
    }
    Ok(y)
}

/// Back-projection `mean + U y`.
pub fn reconstruct(model: &PcaModel, y: &[f64]) -> Result<Vec<f64>> {
    let p = model.num_components();
    if y.len() != p {
        return Err(Error::Dimension(format!(
            "feature length {} != P = {}",
            y.len(),
            p
        )));
    }
    let d = model.input_dim();
    let mut x = model.mean.clone();
    for i in 0..d {
        let row = model.components.row(i);
        for k in 0..p {
            x[i] += row[k] * y[k];
        }
    }
    Ok(x)
}

/// Component `p` (0-based) reshaped to map dims and display-scaled to
/// `[0, 255]`.
pub fn eigen_map(model: &PcaModel, p: usize) -> Result<Matrix> {
    if p >= model.num_components() {
        return Err(Error::Index(format!(
            "component {} of {}",
            p,
            model.num_components()
        )));
    }
    let (w, b) = model.map_dims;
    let raw = Matrix::from_vec(w, b, model.components.col(p))?;
    Ok(normalize_gray_matrix(&raw))
}
