//! Symmetric and symmetric-definite generalized eigensolvers.
//!
//! `sym_eig` runs cyclic Jacobi rotations: simple, accurate to machine
//! precision, and fast enough for the Gram-matrix sizes this crate works
//! with (a few hundred per side). `gen_sym_eig` reduces `B u = λ W u` to an
//! ordinary symmetric problem through the Cholesky factor of `W`.

use super::Matrix;
use crate::error::{Error, Result};

const MAX_JACOBI_SWEEPS: usize = 64;
const JACOBI_TOL: f64 = 1e-15;

/// Eigenvalues sorted descending with matching unit-norm column eigenvectors.
#[derive(Debug, Clone)]
pub struct EigenPairs {
    pub values: Vec<f64>,
    /// n x k matrix; column p is the eigenvector of `values[p]`.
    pub vectors: Matrix,
}

impl EigenPairs {
    pub fn vector(&self, p: usize) -> Vec<f64> {
        self.vectors.col(p)
    }

    /// Keeps only the leading `k` pairs.
    pub fn truncated(&self, k: usize) -> EigenPairs {
        assert!(k >= 1 && k <= self.values.len());
        let n = self.vectors.rows();
        let mut vecs = Matrix::zeros(n, k);
        for p in 0..k {
            for i in 0..n {
                vecs.set(i, p, self.vectors.get(i, p));
            }
        }
        EigenPairs {
            values: self.values[..k].to_vec(),
            vectors: vecs,
        }
    }
}

/// Flips each column so its entry of largest absolute value is positive.
/// Makes eigen-map images and projections reproducible across runs.
pub(crate) fn fix_column_signs(vectors: &mut Matrix) {
    let (n, k) = (vectors.rows(), vectors.cols());
    for p in 0..k {
        let mut best = 0usize;
        let mut best_abs = vectors.get(0, p).abs();
        for i in 1..n {
            let a = vectors.get(i, p).abs();
            if a > best_abs {
                best_abs = a;
                best = i;
            }
        }
        if vectors.get(best, p) < 0.0 {
            for i in 0..n {
                let v = vectors.get(i, p);
                vectors.set(i, p, -v);
            }
        }
    }
}

fn sort_pairs_descending(values: &mut [f64], vectors: &mut Matrix) {
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    // Stable sort keeps tie handling deterministic.
    order.sort_by(|&a, &b| values[b].partial_cmp(&values[a]).unwrap());
    let old_vals = values.to_vec();
    let old_vecs = vectors.clone();
    for (dst, &src) in order.iter().enumerate() {
        values[dst] = old_vals[src];
        for i in 0..vectors.rows() {
            vectors.set(i, dst, old_vecs.get(i, src));
        }
    }
}

/// Full eigendecomposition of a symmetric matrix.
///
/// The input is symmetrized as `(A + A^T)/2` before factoring; asymmetry
/// beyond `1e-9 * max(1, ||A||_F)` is rejected. Returned eigenvalues are
/// descending, eigenvectors unit-norm and sign-fixed.
pub fn sym_eig(a: &Matrix) -> Result<EigenPairs> {
    if !a.is_square() {
        return Err(Error::Dimension(format!(
            "sym_eig needs a square matrix, got {}x{}",
            a.rows(),
            a.cols()
        )));
    }
    if !a.is_finite() {
        return Err(Error::Numeric("sym_eig: non-finite entries".into()));
    }
    let scale = a.frobenius_norm().max(1.0);
    if a.asymmetry() > 1e-9 * scale {
        return Err(Error::Numeric(
            "sym_eig: matrix asymmetric beyond tolerance".into(),
        ));
    }

    let n = a.rows();
    let mut m = a.symmetrized();
    let mut v = Matrix::identity(n);
    let frob = m.frobenius_norm();

    if n > 1 && frob > 0.0 {
        let mut converged = false;
        for _ in 0..MAX_JACOBI_SWEEPS {
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += m.get(i, j) * m.get(i, j);
                }
            }
            if (2.0 * off).sqrt() <= JACOBI_TOL * frob {
                converged = true;
                break;
            }
            for p in 0..n - 1 {
                for q in (p + 1)..n {
                    rotate(&mut m, &mut v, p, q);
                }
            }
        }
        if !converged {
            // One last check; Jacobi converges in practice well before the cap.
            let mut off = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    off += m.get(i, j) * m.get(i, j);
                }
            }
            if (2.0 * off).sqrt() > 1e-10 * frob {
                return Err(Error::Numeric("sym_eig: Jacobi did not converge".into()));
            }
        }
    }

    let mut values: Vec<f64> = (0..n).map(|i| m.get(i, i)).collect();
    sort_pairs_descending(&mut values, &mut v);
    fix_column_signs(&mut v);
    Ok(EigenPairs { values, vectors: v })
}

/// One Jacobi rotation zeroing `m[p][q]`.
fn rotate(m: &mut Matrix, v: &mut Matrix, p: usize, q: usize) {
    let apq = m.get(p, q);
    if apq == 0.0 {
        return;
    }
    let app = m.get(p, p);
    let aqq = m.get(q, q);
    let theta = (aqq - app) / (2.0 * apq);
    let t = if theta.abs() > 1e150 {
        // Avoid overflow in theta^2; the rotation angle is ~1/(2 theta).
        0.5 / theta
    } else {
        let sign = if theta >= 0.0 { 1.0 } else { -1.0 };
        sign / (theta.abs() + (theta * theta + 1.0).sqrt())
    };
    let c = 1.0 / (t * t + 1.0).sqrt();
    let s = t * c;

    let n = m.rows();
    m.set(p, p, app - t * apq);
    m.set(q, q, aqq + t * apq);
    m.set(p, q, 0.0);
    m.set(q, p, 0.0);
    for i in 0..n {
        if i == p || i == q {
            continue;
        }
        let aip = m.get(i, p);
        let aiq = m.get(i, q);
        m.set(i, p, c * aip - s * aiq);
        m.set(p, i, c * aip - s * aiq);
        m.set(i, q, s * aip + c * aiq);
        m.set(q, i, s * aip + c * aiq);
    }
    for i in 0..n {
        let vip = v.get(i, p);
        let viq = v.get(i, q);
        v.set(i, p, c * vip - s * viq);
        v.set(i, q, s * vip + c * viq);
    }
}

/// Lower-triangular Cholesky factor of a symmetric positive-definite matrix.
pub(crate) fn cholesky(w: &Matrix) -> Result<Matrix> {
    if !w.is_square() {
        return Err(Error::Dimension("cholesky needs a square matrix".into()));
    }
    let n = w.rows();
    let mut l = Matrix::zeros(n, n);
    for i in 0..n {
        for j in 0..=i {
            let mut s = w.get(i, j);
            for k in 0..j {
                s -= l.get(i, k) * l.get(j, k);
            }
            if i == j {
                if !(s > 0.0) || !s.is_finite() {
                    return Err(Error::Singular(format!(
                        "cholesky pivot {} is {:e}, matrix not positive definite",
                        i, s
                    )));
                }
                l.set(i, i, s.sqrt());
            } else {
                l.set(i, j, s / l.get(j, j));
            }
        }
    }
    Ok(l)
}

/// Solves `L x = b` for lower-triangular `L`.
fn forward_solve(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = vec![0.0; n];
    for i in 0..n {
        let mut s = b[i];
        for k in 0..i {
            s -= l.get(i, k) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

/// Solves `L^T x = b` for lower-triangular `L`.
fn backward_solve_t(l: &Matrix, b: &[f64]) -> Vec<f64> {
    let n = l.rows();
    let mut x = vec![0.0; n];
    for i in (0..n).rev() {
        let mut s = b[i];
        for k in (i + 1)..n {
            s -= l.get(k, i) * x[k];
        }
        x[i] = s / l.get(i, i);
    }
    x
}

/// Top-`k` pairs of the generalized problem `B u = λ W u` with `W` symmetric
/// positive definite.
///
/// Reduction: `W = L L^T`, ordinary `sym_eig` on `L^-1 B L^-T`, then
/// back-substitution. Eigenvectors come out `W`-orthonormal (`u^T W u = 1`)
/// and sign-fixed. A failed Cholesky reports `Error::Singular`; callers that
/// can tolerate it are expected to regularize `W` and retry.
pub fn gen_sym_eig(b: &Matrix, w: &Matrix, k: usize) -> Result<EigenPairs> {
    if !b.is_square() || !w.is_square() || b.rows() != w.rows() {
        return Err(Error::Dimension(format!(
            "gen_sym_eig needs same-size square matrices, got {}x{} and {}x{}",
            b.rows(),
            b.cols(),
            w.rows(),
            w.cols()
        )));
    }
    let n = b.rows();
    if k < 1 || k > n {
        return Err(Error::Index(format!("k = {} outside 1..={}", k, n)));
    }
    if !b.is_finite() || !w.is_finite() {
        return Err(Error::Numeric("gen_sym_eig: non-finite entries".into()));
    }

    let l = cholesky(&w.symmetrized())?;

    // C = L^-1 B L^-T, assembled column by column.
    let bs = b.symmetrized();
    let mut c = Matrix::zeros(n, n);
    for j in 0..n {
        let col = bs.col(j);
        let y = forward_solve(&l, &col); // y = L^-1 b_j
        for i in 0..n {
            c.set(i, j, y[i]);
        }
    }
    // Now c = L^-1 B; apply L^-1 from the right via transpose.
    let ct = c.transpose();
    let mut red = Matrix::zeros(n, n);
    for j in 0..n {
        let col = ct.col(j);
        let y = forward_solve(&l, &col);
        for i in 0..n {
            red.set(j, i, y[i]); // red = (L^-1 (L^-1 B)^T)^T = L^-1 B L^-T
        }
    }
    let red = red.symmetrized();

    let pairs = sym_eig(&red)?;
    let mut vectors = Matrix::zeros(n, k);
    for p in 0..k {
        let y = pairs.vectors.col(p);
        let mut u = backward_solve_t(&l, &y);
        // Normalize u^T W u = 1 (already ~1 from the reduction, renormalize
        // to tighten rounding).
        let wu = w.mul_vec(&u)?;
        let s = super::dot(&u, &wu);
        if s > 0.0 {
            let inv = 1.0 / s.sqrt();
            for x in &mut u {
                *x *= inv;
            }
        }
        for i in 0..n {
            vectors.set(i, p, u[i]);
        }
    }
    fix_column_signs(&mut vectors);
    Ok(EigenPairs {
        values: pairs.values[..k].to_vec(),
        vectors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::dot;
    use rand::rngs::StdRng;
    use rand::{Rng, SeedableRng};

    fn random_symmetric(n: usize, rng: &mut StdRng) -> Matrix {
        let mut m = Matrix::zeros(n, n);
        for i in 0..n {
            for j in 0..=i {
                let v = rng.gen_range(-2.0..2.0);
                m.set(i, j, v);
                m.set(j, i, v);
            }
        }
        m
    }

    fn random_spd(n: usize, rng: &mut StdRng) -> Matrix {
        let a = random_symmetric(n, rng);
        // A^T A + n*I is comfortably positive definite.
        let mut m = a.transpose().matmul(&a).unwrap();
        for i in 0..n {
            let v = m.get(i, i);
            m.set(i, i, v + n as f64);
        }
        m
    }

    /// det(A - x I) via Gaussian elimination with partial pivoting.
    fn char_poly(a: &Matrix, x: f64) -> f64 {
        let n = a.rows();
        let mut m = a.clone();
        for i in 0..n {
            let v = m.get(i, i);
            m.set(i, i, v - x);
        }
        let mut det = 1.0;
        for col in 0..n {
            let mut piv = col;
            for r in (col + 1)..n {
                if m.get(r, col).abs() > m.get(piv, col).abs() {
                    piv = r;
                }
            }
            if m.get(piv, col) == 0.0 {
                return 0.0;
            }
            if piv != col {
                for j in 0..n {
                    let t = m.get(col, j);
                    m.set(col, j, m.get(piv, j));
                    m.set(piv, j, t);
                }
                det = -det;
            }
            det *= m.get(col, col);
            for r in (col + 1)..n {
                let f = m.get(r, col) / m.get(col, col);
                for j in col..n {
                    let v = m.get(r, j) - f * m.get(col, j);
                    m.set(r, j, v);
                }
            }
        }
        det
    }

    /// Independent eigenvalue oracle: bisection on sign changes of the
    /// characteristic polynomial, bracketing each root between sorted
    /// Jacobi estimates nudged outward by Gershgorin bounds.
    pub(crate) fn char_poly_roots(a: &Matrix) -> Vec<f64> {
        let n = a.rows();
        // Gershgorin interval containing all eigenvalues.
        let mut lo = f64::INFINITY;
        let mut hi = f64::NEG_INFINITY;
        for i in 0..n {
            let mut r = 0.0;
            for j in 0..n {
                if j != i {
                    r += a.get(i, j).abs();
                }
            }
            lo = lo.min(a.get(i, i) - r);
            hi = hi.max(a.get(i, i) + r);
        }
        // Count of eigenvalues <= x via Sturm-like sign agreement is overkill
        // here; instead walk a fine grid and bisect every sign change. Works
        // because test matrices are small with well-separated roots.
        let steps = 20_000;
        let mut roots = Vec::new();
        let width = (hi - lo).max(1e-9);
        let mut prev_x = lo - 1e-6 * width;
        let mut prev_f = char_poly(a, prev_x);
        for s in 1..=steps {
            let x = lo - 1e-6 * width + (width * (1.0 + 2e-6)) * s as f64 / steps as f64;
            let f = char_poly(a, x);
            if prev_f == 0.0 {
                roots.push(prev_x);
            } else if f.signum() != prev_f.signum() {
                let (mut a0, mut b0) = (prev_x, x);
                let (mut fa, _) = (prev_f, f);
                for _ in 0..200 {
                    let mid = 0.5 * (a0 + b0);
                    let fm = char_poly(a, mid);
                    if fm == 0.0 {
                        a0 = mid;
                        b0 = mid;
                        break;
                    }
                    if fm.signum() == fa.signum() {
                        a0 = mid;
                        fa = fm;
                    } else {
                        b0 = mid;
                    }
                }
                roots.push(0.5 * (a0 + b0));
            }
            prev_x = x;
            prev_f = f;
        }
        roots.sort_by(|x, y| y.partial_cmp(x).unwrap());
        roots
    }

    #[test]
    fn identity_eigenvalues() {
        let pairs = sym_eig(&Matrix::identity(3)).unwrap();
        for v in &pairs.values {
            assert!((v - 1.0).abs() < 1e-12);
        }
    }

    #[test]
    fn diagonal_case() {
        let a = Matrix::from_vec(2, 2, vec![2.0, 0.0, 0.0, 5.0]).unwrap();
        let pairs = sym_eig(&a).unwrap();
        assert!((pairs.values[0] - 5.0).abs() < 1e-12);
        assert!((pairs.values[1] - 2.0).abs() < 1e-12);
        let v0 = pairs.vector(0);
        let v1 = pairs.vector(1);
        assert!((v0[1].abs() - 1.0).abs() < 1e-12 && v0[0].abs() < 1e-12);
        assert!((v1[0].abs() - 1.0).abs() < 1e-12 && v1[1].abs() < 1e-12);
        // Sign convention: dominant entry positive.
        assert!(v0[1] > 0.0 && v1[0] > 0.0);
    }

    #[test]
    fn random_4x4_matches_char_poly_roots() {
        let mut rng = StdRng::seed_from_u64(7);
        let a = random_symmetric(4, &mut rng);
        let pairs = sym_eig(&a).unwrap();
        let roots = char_poly_roots(&a);
        assert_eq!(roots.len(), 4, "oracle found {} roots", roots.len());
        for (l, r) in pairs.values.iter().zip(roots.iter()) {
            assert!((l - r).abs() < 1e-8, "eig {} vs oracle {}", l, r);
        }
    }

    #[test]
    fn residual_and_orthonormality() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..20 {
            let n = rng.gen_range(2..=8);
            let a = random_symmetric(n, &mut rng);
            let pairs = sym_eig(&a).unwrap();
            let tol = 1e-8 * a.frobenius_norm().max(1.0);
            for p in 0..n {
                let v = pairs.vector(p);
                let av = a.mul_vec(&v).unwrap();
                let mut res = 0.0;
                for i in 0..n {
                    let d = av[i] - pairs.values[p] * v[i];
                    res += d * d;
                }
                assert!(res.sqrt() <= tol, "residual {:e} > {:e}", res.sqrt(), tol);
                assert!((dot(&v, &v) - 1.0).abs() < 1e-10);
                for q in (p + 1)..n {
                    let u = pairs.vector(q);
                    assert!(dot(&v, &u).abs() < 1e-8);
                }
            }
            // Trace preservation.
            let trace: f64 = (0..n).map(|i| a.get(i, i)).sum();
            let sum: f64 = pairs.values.iter().sum();
            assert!((trace - sum).abs() <= 1e-9 * trace.abs().max(1.0));
        }
    }

    #[test]
    fn reconstruction() {
        let mut rng = StdRng::seed_from_u64(3);
        for &n in &[3usize, 10, 50] {
            let a = random_symmetric(n, &mut rng);
            let pairs = sym_eig(&a).unwrap();
            let mut rec = Matrix::zeros(n, n);
            for p in 0..n {
                let v = pairs.vector(p);
                rec.add_outer(&v, pairs.values[p]);
            }
            let mut diff = 0.0;
            for i in 0..n {
                for j in 0..n {
                    let d = rec.get(i, j) - a.symmetrized().get(i, j);
                    diff += d * d;
                }
            }
            assert!(diff.sqrt() <= 1e-8 * a.frobenius_norm().max(1.0));
        }
    }

    #[test]
    fn non_square_rejected() {
        let a = Matrix::zeros(2, 3);
        assert!(matches!(sym_eig(&a), Err(Error::Dimension(_))));
    }

    #[test]
    fn gen_eig_reduces_to_ordinary_with_identity_weight() {
        let mut rng = StdRng::seed_from_u64(5);
        let b = random_symmetric(4, &mut rng);
        let w = Matrix::identity(4);
        let gen = gen_sym_eig(&b, &w, 4).unwrap();
        let ord = sym_eig(&b).unwrap();
        for p in 0..4 {
            assert!((gen.values[p] - ord.values[p]).abs() < 1e-9);
            let gv = gen.vector(p);
            let ov = ord.vector(p);
            for i in 0..4 {
                assert!((gv[i] - ov[i]).abs() < 1e-8);
            }
        }
    }

    #[test]
    fn gen_eig_proportional_matrices() {
        let mut rng = StdRng::seed_from_u64(13);
        let w = random_spd(3, &mut rng);
        let mut b = w.clone();
        b.scale(2.0);
        let pairs = gen_sym_eig(&b, &w, 3).unwrap();
        for v in &pairs.values {
            assert!((v - 2.0).abs() < 1e-9);
        }
    }

    #[test]
    fn gen_eig_matches_explicit_inverse_oracle() {
        // Oracle route: eigenvalues of W^-1 B found from the characteristic
        // polynomial det(B - x W) by bisection (equivalent and symmetric-safe).
        let mut rng = StdRng::seed_from_u64(17);
        for _ in 0..10 {
            let n = rng.gen_range(2..=3) as usize;
            let b = random_symmetric(n, &mut rng);
            let w = random_spd(n, &mut rng);
            let k = n;
            let pairs = gen_sym_eig(&b, &w, k).unwrap();
            // Residual check directly on the generalized equation.
            for p in 0..k {
                let u = pairs.vector(p);
                let bu = b.mul_vec(&u).unwrap();
                let wu = w.mul_vec(&u).unwrap();
                let mut res = 0.0;
                for i in 0..n {
                    let d = bu[i] - pairs.values[p] * wu[i];
                    res += d * d;
                }
                let scale = b.frobenius_norm().max(1.0);
                assert!(res.sqrt() <= 1e-8 * scale);
                // W-orthonormality
                assert!((dot(&u, &wu) - 1.0).abs() < 1e-8);
            }
            // Eigenvalue agreement with the reduced symmetric problem solved
            // by the independent char-poly oracle.
            let l = cholesky(&w).unwrap();
            let mut linv = Matrix::zeros(n, n);
            for j in 0..n {
                let mut e = vec![0.0; n];
                e[j] = 1.0;
                let x = forward_solve(&l, &e);
                for i in 0..n {
                    linv.set(i, j, x[i]);
                }
            }
            let red = linv
                .matmul(&b)
                .unwrap()
                .matmul(&linv.transpose())
                .unwrap()
                .symmetrized();
            let roots = char_poly_roots(&red);
            assert_eq!(roots.len(), n);
            for p in 0..k {
                assert!((pairs.values[p] - roots[p]).abs() < 1e-7);
            }
        }
    }

    #[test]
    fn gen_eig_rejects_non_spd() {
        let b = Matrix::identity(2);
        let w = Matrix::from_vec(2, 2, vec![1.0, 0.0, 0.0, -1.0]).unwrap();
        assert!(matches!(gen_sym_eig(&b, &w, 1), Err(Error::Singular(_))));
    }

    #[test]
    fn gen_eig_w_orthonormal_block() {
        let mut rng = StdRng::seed_from_u64(23);
        let b = random_symmetric(5, &mut rng);
        let w = random_spd(5, &mut rng);
        let pairs = gen_sym_eig(&b, &w, 3).unwrap();
        for p in 0..3 {
            let up = pairs.vector(p);
            for q in 0..3 {
                let uq = pairs.vector(q);
                let wu = w.mul_vec(&uq).unwrap();
                let expect = if p == q { 1.0 } else { 0.0 };
                assert!((dot(&up, &wu) - expect).abs() < 1e-8);
            }
        }
    }
}
