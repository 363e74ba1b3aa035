//! Third-order tensors with mode-n unfolding and mode-vector contraction.
//!
//! Layout convention shared by every learner and test in the crate:
//! unfolding along mode `m` puts the mode-`m` fibers in columns, with the
//! remaining indices varying lower-numbered-mode fastest.

use super::Matrix;
use crate::error::{Error, Result};
use serde::{Deserialize, Serialize};

/// Dense order-3 tensor. A `Tensor3` with `d3 == 1` is interchangeable with
/// a `Matrix`.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct Tensor3 {
    d1: usize,
    d2: usize,
    d3: usize,
    data: Vec<f64>,
}

impl Tensor3 {
    pub fn zeros(d1: usize, d2: usize, d3: usize) -> Self {
        assert!(d1 >= 1 && d2 >= 1 && d3 >= 1, "tensor dims must be >= 1");
        Tensor3 {
            d1,
            d2,
            d3,
            data: vec![0.0; d1 * d2 * d3],
        }
    }

    pub fn from_vec(d1: usize, d2: usize, d3: usize, data: Vec<f64>) -> Result<Self> {
        if d1 < 1 || d2 < 1 || d3 < 1 || data.len() != d1 * d2 * d3 {
            return Err(Error::Dimension(format!(
                "expected {}x{}x{} = {} entries, got {}",
                d1,
                d2,
                d3,
                d1 * d2 * d3,
                data.len()
            )));
        }
        if !data.iter().all(|x| x.is_finite()) {
            return Err(Error::Numeric("tensor contains non-finite entries".into()));
        }
        Ok(Tensor3 { d1, d2, d3, data })
    }

    pub fn from_matrix(m: &Matrix) -> Self {
        Tensor3 {
            d1: m.rows(),
            d2: m.cols(),
            d3: 1,
            data: m.as_slice().to_vec(),
        }
    }

    /// Stacks `channels` same-sized matrices along mode 3.
    pub fn from_channels(channels: &[Matrix]) -> Result<Self> {
        if channels.is_empty() {
            return Err(Error::Dimension("need at least one channel".into()));
        }
        let (r, c) = (channels[0].rows(), channels[0].cols());
        for ch in channels {
            if ch.rows() != r || ch.cols() != c {
                return Err(Error::Dimension("channel shape mismatch".into()));
            }
        }
        let d3 = channels.len();
        let mut t = Tensor3::zeros(r, c, d3);
        for (k, ch) in channels.iter().enumerate() {
            for i in 0..r {
                for j in 0..c {
                    t.set(i, j, k, ch.get(i, j));
                }
            }
        }
        Ok(t)
    }

    #[inline]
    pub fn dims(&self) -> (usize, usize, usize) {
        (self.d1, self.d2, self.d3)
    }

    pub fn dim(&self, mode: usize) -> usize {
        match mode {
            1 => self.d1,
            2 => self.d2,
            3 => self.d3,
            _ => panic!("mode {} out of range", mode),
        }
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize, k: usize) -> f64 {
        debug_assert!(i < self.d1 && j < self.d2 && k < self.d3);
        self.data[(i * self.d2 + j) * self.d3 + k]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, k: usize, v: f64) {
        debug_assert!(i < self.d1 && j < self.d2 && k < self.d3);
        self.data[(i * self.d2 + j) * self.d3 + k] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn as_mut_slice(&mut self) -> &mut [f64] {
        &mut self.data
    }

    pub fn is_finite(&self) -> bool {
        self.data.iter().all(|x| x.is_finite())
    }

    /// Mode-`k` slice as a matrix (only meaningful for mode 3 here, where it
    /// extracts one sensor channel).
    pub fn channel(&self, k: usize) -> Result<Matrix> {
        if k >= self.d3 {
            return Err(Error::Index(format!("channel {} of {}", k, self.d3)));
        }
        let mut m = Matrix::zeros(self.d1, self.d2);
        for i in 0..self.d1 {
            for j in 0..self.d2 {
                m.set(i, j, self.get(i, j, k));
            }
        }
        Ok(m)
    }

    pub fn to_matrix(&self) -> Result<Matrix> {
        if self.d3 != 1 {
            return Err(Error::Dimension(format!(
                "tensor with d3 = {} is not a matrix",
                self.d3
            )));
        }
        self.channel(0)
    }

    /// Unfolds along `mode` (1-based): result has `d_mode` rows and the
    /// product of the other dims as columns, remaining indices varying
    /// lower-numbered-mode fastest.
    pub fn mode_unfold(&self, mode: usize) -> Result<Matrix> {
        let (d1, d2, d3) = self.dims();
        let mut out = match mode {
            1 => Matrix::zeros(d1, d2 * d3),
            2 => Matrix::zeros(d2, d1 * d3),
            3 => Matrix::zeros(d3, d1 * d2),
            _ => return Err(Error::Index(format!("mode {} outside 1..=3", mode))),
        };
        for i in 0..d1 {
            for j in 0..d2 {
                for k in 0..d3 {
                    let v = self.get(i, j, k);
                    match mode {
                        1 => out.set(i, j + k * d2, v),
                        2 => out.set(j, i + k * d1, v),
                        _ => out.set(k, i + j * d1, v),
                    }
                }
            }
        }
        Ok(out)
    }

    /// Inverse of [`mode_unfold`](Self::mode_unfold) given the original dims.
    pub fn refold(m: &Matrix, mode: usize, dims: (usize, usize, usize)) -> Result<Tensor3> {
        let (d1, d2, d3) = dims;
        let (exp_rows, exp_cols) = match mode {
            1 => (d1, d2 * d3),
            2 => (d2, d1 * d3),
            3 => (d3, d1 * d2),
            _ => return Err(Error::Index(format!("mode {} outside 1..=3", mode))),
        };
        if m.rows() != exp_rows || m.cols() != exp_cols {
            return Err(Error::Dimension(format!(
                "refold mode {} expects {}x{}, got {}x{}",
                mode,
                exp_rows,
                exp_cols,
                m.rows(),
                m.cols()
            )));
        }
        let mut t = Tensor3::zeros(d1, d2, d3);
        for i in 0..d1 {
            for j in 0..d2 {
                for k in 0..d3 {
                    let v = match mode {
                        1 => m.get(i, j + k * d2),
                        2 => m.get(j, i + k * d1),
                        _ => m.get(k, i + j * d1),
                    };
                    t.set(i, j, k, v);
                }
            }
        }
        Ok(t)
    }

    /// Contracts `mode` with `v`, reducing the order by one. The result is a
    /// matrix over the two remaining modes in ascending order.
    pub fn mode_vec_product(&self, v: &[f64], mode: usize) -> Result<Matrix> {
        let (d1, d2, d3) = self.dims();
        let dm = match mode {
            1 => d1,
            2 => d2,
            3 => d3,
            _ => return Err(Error::Index(format!("mode {} outside 1..=3", mode))),
        };
        if v.len() != dm {
            return Err(Error::Dimension(format!(
                "mode-{} contraction expects length {}, got {}",
                mode,
                dm,
                v.len()
            )));
        }
        let mut out = match mode {
            1 => Matrix::zeros(d2, d3),
            2 => Matrix::zeros(d1, d3),
            _ => Matrix::zeros(d1, d2),
        };
        match mode {
            1 => {
                for j in 0..d2 {
                    for k in 0..d3 {
                        let mut s = 0.0;
                        for i in 0..d1 {
                            s += self.get(i, j, k) * v[i];
                        }
                        out.set(j, k, s);
                    }
                }
            }
            2 => {
                for i in 0..d1 {
                    for k in 0..d3 {
                        let mut s = 0.0;
                        for j in 0..d2 {
                            s += self.get(i, j, k) * v[j];
                        }
                        out.set(i, k, s);
                    }
                }
            }
            _ => {
                for i in 0..d1 {
                    for j in 0..d2 {
                        let mut s = 0.0;
                        for k in 0..d3 {
                            s += self.get(i, j, k) * v[k];
                        }
                        out.set(i, j, s);
                    }
                }
            }
        }
        Ok(out)
    }

    /// Full contraction with one vector per mode, yielding a scalar.
    /// Contraction order: mode 3, then 2, then 1.
    pub fn contract_all(&self, u1: &[f64], u2: &[f64], u3: &[f64]) -> Result<f64> {
        let m = self.mode_vec_product(u3, 3)?; // d1 x d2
        let row = m.mode_vec_product_matrix(u2, 2)?; // length d1
        if u1.len() != row.len() {
            return Err(Error::Dimension("mode-1 vector length mismatch".into()));
        }
        Ok(super::dot(u1, &row))
    }
}

impl Matrix {
    /// Mode-vector contraction for matrices (order-2 tensors): mode 1
    /// contracts rows, mode 2 contracts columns.
    pub fn mode_vec_product_matrix(&self, v: &[f64], mode: usize) -> Result<Vec<f64>> {
        match mode {
            1 => {
                if v.len() != self.rows() {
                    return Err(Error::Dimension("mode-1 length mismatch".into()));
                }
                let mut out = vec![0.0; self.cols()];
                for i in 0..self.rows() {
                    let vi = v[i];
                    let row = self.row(i);
                    for j in 0..self.cols() {
                        out[j] += vi * row[j];
                    }
                }
                Ok(out)
            }
            2 => self.mul_vec(v),
            _ => Err(Error::Index(format!("matrix mode {} outside 1..=2", mode))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_tensor(d1: usize, d2: usize, d3: usize, rng: &mut StdRng) -> Tensor3 {
        let data = (0..d1 * d2 * d3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        Tensor3::from_vec(d1, d2, d3, data).unwrap()
    }

    #[test]
    fn degenerate_third_mode_unfold_is_the_matrix() {
        let t = Tensor3::from_vec(2, 2, 1, vec![1.0, 2.0, 3.0, 4.0]).unwrap();
        let u = t.mode_unfold(1).unwrap();
        assert_eq!(u, Matrix::from_vec(2, 2, vec![1.0, 2.0, 3.0, 4.0]).unwrap());
    }

    #[test]
    fn mode2_unfold_columns_are_fibers() {
        // Independent oracle: enumerate fibers by explicit index loops.
        let mut rng = StdRng::seed_from_u64(2);
        let t = random_tensor(2, 3, 2, &mut rng);
        let u = t.mode_unfold(2).unwrap();
        assert_eq!(u.rows(), 3);
        assert_eq!(u.cols(), 4);
        let (d1, _, d3) = t.dims();
        for k in 0..d3 {
            for i in 0..d1 {
                let col = i + k * d1; // lower-numbered mode fastest
                for j in 0..3 {
                    assert_eq!(u.get(j, col), t.get(i, j, k));
                }
            }
        }
    }

    #[test]
    fn unfold_refold_roundtrip() {
        let mut rng = StdRng::seed_from_u64(4);
        for mode in 1..=3 {
            let t = random_tensor(3, 4, 2, &mut rng);
            let u = t.mode_unfold(mode).unwrap();
            let back = Tensor3::refold(&u, mode, t.dims()).unwrap();
            assert_eq!(back, t);
        }
    }

    #[test]
    fn mode_out_of_range() {
        let t = Tensor3::zeros(2, 2, 2);
        assert!(t.mode_unfold(0).is_err());
        assert!(t.mode_unfold(4).is_err());
    }

    #[test]
    fn basis_vector_extracts_slice() {
        let mut rng = StdRng::seed_from_u64(6);
        let t = random_tensor(3, 4, 2, &mut rng);
        let slice = t.mode_vec_product(&[1.0, 0.0], 3).unwrap();
        assert_eq!(slice, t.channel(0).unwrap());
    }

    #[test]
    fn contraction_matches_triple_loop() {
        let mut rng = StdRng::seed_from_u64(8);
        let t = random_tensor(3, 4, 2, &mut rng);
        let v: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let m = t.mode_vec_product(&v, 2).unwrap();
        for i in 0..3 {
            for k in 0..2 {
                let mut s = 0.0;
                for j in 0..4 {
                    s += t.get(i, j, k) * v[j];
                }
                assert!((m.get(i, k) - s).abs() < 1e-12);
            }
        }
    }

    #[test]
    fn full_contraction_order_independent() {
        let mut rng = StdRng::seed_from_u64(10);
        let t = random_tensor(3, 4, 2, &mut rng);
        let u1: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u2: Vec<f64> = (0..4).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let u3: Vec<f64> = (0..2).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let a = t.contract_all(&u1, &u2, &u3).unwrap();
        // Alternative order: contract mode 1 first, then 2, then 3.
        let m = t.mode_vec_product(&u1, 1).unwrap(); // d2 x d3
        let r = m.mode_vec_product_matrix(&u2, 1).unwrap(); // length d3
        let b = crate::linalg::dot(&u3, &r);
        assert!((a - b).abs() < 1e-12);
        // Triple-loop oracle.
        let mut s = 0.0;
        for i in 0..3 {
            for j in 0..4 {
                for k in 0..2 {
                    s += t.get(i, j, k) * u1[i] * u2[j] * u3[k];
                }
            }
        }
        assert!((a - s).abs() < 1e-12);
    }

    #[test]
    fn linearity_superposition() {
        let mut rng = StdRng::seed_from_u64(12);
        let t1 = random_tensor(2, 3, 2, &mut rng);
        let t2 = random_tensor(2, 3, 2, &mut rng);
        let v: Vec<f64> = (0..3).map(|_| rng.gen_range(-1.0..1.0)).collect();
        let (a, b) = (rng.gen_range(-2.0..2.0), rng.gen_range(-2.0..2.0));
        let mut combo = Tensor3::zeros(2, 3, 2);
        for idx in 0..combo.as_slice().len() {
            combo.as_mut_slice()[idx] = a * t1.as_slice()[idx] + b * t2.as_slice()[idx];
        }
        let lhs = combo.mode_vec_product(&v, 2).unwrap();
        let r1 = t1.mode_vec_product(&v, 2).unwrap();
        let r2 = t2.mode_vec_product(&v, 2).unwrap();
        for i in 0..2 {
            for k in 0..2 {
                let rhs = a * r1.get(i, k) + b * r2.get(i, k);
                assert!((lhs.get(i, k) - rhs).abs() < 1e-12);
            }
        }
    }
}
