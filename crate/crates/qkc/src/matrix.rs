//! Dense complex matrices at desk scale (dims ≤ 256) with the handful of
//! operations the rest of the crate needs: Kronecker products, a
//! deterministic Hermitian eigensolver, PSD square roots, and partial
//! traces over explicit subsystem factorizations.
//!
//! The eigensolver is a cyclic Jacobi iteration: each off-diagonal entry is
//! annihilated in turn by a complex plane rotation, sweeping until the
//! off-diagonal Frobenius mass drops below 1e-12 (at most 100 sweeps). No
//! external linear-algebra backend is involved, so results are bit-for-bit
//! reproducible for a given input.

use crate::error::{QkcError, Result};

/// Complex scalar used for all matrix and state data.
pub type C64 = num_complex::Complex<f64>;

/// Off-diagonal Frobenius mass below which a Jacobi iteration is converged.
/// 1e-12 is the documented contract; sweeps actually continue to the
/// machine-precision floor below so that small eigenvalues keep *relative*
/// accuracy (fidelity takes square roots of them).
const JACOBI_OFF_TOL: f64 = 1e-12;
const JACOBI_RELATIVE_FLOOR: f64 = 1e-15;
/// Hard cap on Jacobi sweeps; reached only for pathological inputs.
const JACOBI_MAX_SWEEPS: usize = 100;
/// Hermiticity gate applied before eigendecomposition.
const HERMITIAN_TOL: f64 = 1e-10;
/// Eigenvalues above this (negative) floor are clamped to zero by
/// [`ComplexMatrix::psd_sqrt`]; anything below is a hard rejection.
const PSD_EIG_FLOOR: f64 = -1e-8;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct ComplexMatrix {
    rows: usize,
    cols: usize,
    data: Vec<C64>,
}

impl ComplexMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        Self { rows, cols, data: vec![C64::new(0.0, 0.0); rows * cols] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = C64::new(1.0, 0.0);
        }
        m
    }

    /// Builds a matrix from a row-major coefficient vector.
    pub fn from_vec(rows: usize, cols: usize, data: Vec<C64>) -> Result<Self> {
        if data.len() != rows * cols {
            return Err(QkcError::DimensionMismatch(format!(
                "{}x{} matrix needs {} entries, got {}",
                rows,
                cols,
                rows * cols,
                data.len()
            )));
        }
        Ok(Self { rows, cols, data })
    }

    pub fn from_fn(rows: usize, cols: usize, mut f: impl FnMut(usize, usize) -> C64) -> Self {
        let mut m = Self::zeros(rows, cols);
        for i in 0..rows {
            for j in 0..cols {
                m[(i, j)] = f(i, j);
            }
        }
        m
    }

    /// Real diagonal matrix.
    pub fn diag(entries: &[f64]) -> Self {
        let mut m = Self::zeros(entries.len(), entries.len());
        for (i, &x) in entries.iter().enumerate() {
            m[(i, i)] = C64::new(x, 0.0);
        }
        m
    }

    pub fn rows(&self) -> usize {
        self.rows
    }

    pub fn cols(&self) -> usize {
        self.cols
    }

    pub fn is_square(&self) -> bool {
        self.rows == self.cols
    }

    pub fn data(&self) -> &[C64] {
        &self.data
    }

    pub fn mul(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        if self.cols != other.rows {
            return Err(QkcError::DimensionMismatch(format!(
                "cannot multiply {}x{} by {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let mut out = ComplexMatrix::zeros(self.rows, other.cols);
        for i in 0..self.rows {
            for k in 0..self.cols {
                let a = self[(i, k)];
                if a.norm_sqr() == 0.0 {
                    continue;
                }
                for j in 0..other.cols {
                    out[(i, j)] += a * other[(k, j)];
                }
            }
        }
        Ok(out)
    }

    pub fn add(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a + b)
    }

    pub fn sub(&self, other: &ComplexMatrix) -> Result<ComplexMatrix> {
        self.zip_with(other, |a, b| a - b)
    }

    fn zip_with(&self, other: &ComplexMatrix, f: impl Fn(C64, C64) -> C64) -> Result<ComplexMatrix> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QkcError::DimensionMismatch(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        let data = self.data.iter().zip(&other.data).map(|(&a, &b)| f(a, b)).collect();
        Ok(ComplexMatrix { rows: self.rows, cols: self.cols, data })
    }

    pub fn scale(&self, k: C64) -> ComplexMatrix {
        let data = self.data.iter().map(|&a| a * k).collect();
        ComplexMatrix { rows: self.rows, cols: self.cols, data }
    }

    pub fn scale_re(&self, k: f64) -> ComplexMatrix {
        self.scale(C64::new(k, 0.0))
    }

    /// Conjugate transpose.
    pub fn adjoint(&self) -> ComplexMatrix {
        ComplexMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    pub fn trace(&self) -> C64 {
        (0..self.rows.min(self.cols)).map(|i| self[(i, i)]).sum()
    }

    /// Kronecker product; block (i,j) of the result is `self[(i,j)] * other`.
    pub fn tensor(&self, other: &ComplexMatrix) -> ComplexMatrix {
        let mut out = ComplexMatrix::zeros(self.rows * other.rows, self.cols * other.cols);
        for i in 0..self.rows {
            for j in 0..self.cols {
                let a = self[(i, j)];
                for k in 0..other.rows {
                    for l in 0..other.cols {
                        out[(i * other.rows + k, j * other.cols + l)] = a * other[(k, l)];
                    }
                }
            }
        }
        out
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|a| a.norm_sqr()).sum::<f64>().sqrt()
    }

    /// Largest entry-wise absolute difference; both shapes must agree.
    pub fn max_abs_diff(&self, other: &ComplexMatrix) -> Result<f64> {
        if self.rows != other.rows || self.cols != other.cols {
            return Err(QkcError::DimensionMismatch(format!(
                "shape {}x{} vs {}x{}",
                self.rows, self.cols, other.rows, other.cols
            )));
        }
        Ok(self
            .data
            .iter()
            .zip(&other.data)
            .map(|(a, b)| (a - b).norm())
            .fold(0.0, f64::max))
    }

    /// Max |a_ij - conj(a_ji)| over all entries; zero iff exactly Hermitian.
    pub fn hermitian_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.rows {
            for j in i..self.cols {
                let d = (self[(i, j)] - self[(j, i)].conj()).norm();
                worst = worst.max(d);
            }
        }
        worst
    }

    fn off_diagonal_frobenius(&self) -> f64 {
        let mut s = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                if i != j {
                    s += self[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    }

    /// Eigendecomposition of a Hermitian matrix by cyclic Jacobi rotations.
    ///
    /// Rejects inputs whose Hermitian asymmetry exceeds 1e-10. Eigenvalues
    /// come back sorted descending, with eigenvector columns reordered to
    /// match.
    pub fn hermitian_eig(&self) -> Result<EigenDecomposition> {
        if !self.is_square() {
            return Err(QkcError::DimensionMismatch(format!(
                "eigendecomposition needs a square matrix, got {}x{}",
                self.rows, self.cols
            )));
        }
        let asym = self.hermitian_asymmetry();
        if asym > HERMITIAN_TOL {
            return Err(QkcError::NotHermitian(asym));
        }
        let n = self.rows;
        let mut a = self.clone();
        // Symmetrize once so the iteration works on an exactly Hermitian copy.
        for i in 0..n {
            for j in i + 1..n {
                let avg = (a[(i, j)] + a[(j, i)].conj()) * 0.5;
                a[(i, j)] = avg;
                a[(j, i)] = avg.conj();
            }
            a[(i, i)] = C64::new(a[(i, i)].re, 0.0);
        }
        let mut v = ComplexMatrix::identity(n);

        let scale = a.frobenius_norm().max(1.0);
        let stop = (JACOBI_RELATIVE_FLOOR * scale).min(JACOBI_OFF_TOL);
        let mut prev_off = f64::INFINITY;
        for _sweep in 0..JACOBI_MAX_SWEEPS {
            let off = a.off_diagonal_frobenius();
            if off < stop || off >= prev_off {
                break;
            }
            prev_off = off;
            for p in 0..n {
                for q in p + 1..n {
                    let apq = a[(p, q)];
                    let b = apq.norm();
                    if b < 1e-300 {
                        continue;
                    }
                    // Phase that makes the pivot real, then a standard real
                    // rotation that annihilates it.
                    let phase = apq / b; // e^{i phi}
                    let app = a[(p, p)].re;
                    let aqq = a[(q, q)].re;
                    let tau = (aqq - app) / (2.0 * b);
                    let t = if tau >= 0.0 {
                        1.0 / (tau + (1.0 + tau * tau).sqrt())
                    } else {
                        -1.0 / (-tau + (1.0 + tau * tau).sqrt())
                    };
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = t * c;
                    // Plane rotation J: J_pp = c, J_pq = s,
                    // J_qp = -s * conj(phase), J_qq = c * conj(phase).
                    let jqp = -s * phase.conj();
                    let jqq = c * phase.conj();

                    // A <- A J (columns p, q).
                    for i in 0..n {
                        let aip = a[(i, p)];
                        let aiq = a[(i, q)];
                        a[(i, p)] = aip * c + aiq * jqp;
                        a[(i, q)] = aip * s + aiq * jqq;
                    }
                    // A <- J^dagger A (rows p, q).
                    for i in 0..n {
                        let api = a[(p, i)];
                        let aqi = a[(q, i)];
                        a[(p, i)] = api * c + aqi * jqp.conj();
                        a[(q, i)] = api * s + aqi * jqq.conj();
                    }
                    // Pivot is annihilated up to roundoff; pin it to zero so
                    // the off-diagonal mass estimate stays honest.
                    a[(p, q)] = C64::new(0.0, 0.0);
                    a[(q, p)] = C64::new(0.0, 0.0);

                    // V <- V J (columns p, q).
                    for i in 0..n {
                        let vip = v[(i, p)];
                        let viq = v[(i, q)];
                        v[(i, p)] = vip * c + viq * jqp;
                        v[(i, q)] = vip * s + viq * jqq;
                    }
                }
            }
        }

        let mut order: Vec<usize> = (0..n).collect();
        let diag: Vec<f64> = (0..n).map(|i| a[(i, i)].re).collect();
        order.sort_by(|&i, &j| diag[j].partial_cmp(&diag[i]).expect("eigenvalues are finite"));
        let values: Vec<f64> = order.iter().map(|&i| diag[i]).collect();
        let vectors = ComplexMatrix::from_fn(n, n, |i, j| v[(i, order[j])]);
        Ok(EigenDecomposition { values, vectors })
    }

    /// Unique PSD square root B with B·B = A.
    ///
    /// Eigenvalues in `[-1e-8, 0)` are treated as roundoff and clamped to
    /// zero; anything further below zero rejects the input as not PSD.
    pub fn psd_sqrt(&self) -> Result<ComplexMatrix> {
        let eig = self.hermitian_eig()?;
        if let Some(&worst) = eig.values.last() {
            if worst < PSD_EIG_FLOOR {
                return Err(QkcError::NotPsd(worst));
            }
        }
        // Eigenvalues that are pure roundoff dust relative to the leading one
        // are zeroed before the square root; √ amplifies absolute error near
        // zero, and this keeps true-zero eigenvalues exactly zero.
        let dust = eig.values.first().copied().unwrap_or(0.0).max(0.0) * 1e-15;
        let roots: Vec<f64> =
            eig.values.iter().map(|&l| if l > dust { l.sqrt() } else { 0.0 }).collect();
        Ok(eig.recompose(&roots))
    }

    /// Traces out the subsystems *not* listed in `keep`.
    ///
    /// `dims` factorizes the matrix as a tensor product (first factor is the
    /// most significant index digit); `keep` lists the subsystem positions to
    /// retain, in increasing order.
    pub fn partial_trace(&self, dims: &[usize], keep: &[usize]) -> Result<ComplexMatrix> {
        let total: usize = dims.iter().product();
        if !self.is_square() || self.rows != total {
            return Err(QkcError::DimensionMismatch(format!(
                "matrix is {}x{} but subsystem dims multiply to {}",
                self.rows, self.cols, total
            )));
        }
        if keep.windows(2).any(|w| w[0] >= w[1]) || keep.iter().any(|&k| k >= dims.len()) {
            return Err(QkcError::DimensionMismatch(format!(
                "keep list {:?} is not a strictly increasing subset of 0..{}",
                keep,
                dims.len()
            )));
        }
        let traced: Vec<usize> = (0..dims.len()).filter(|i| !keep.contains(i)).collect();
        let kept_dims: Vec<usize> = keep.iter().map(|&i| dims[i]).collect();
        let traced_dims: Vec<usize> = traced.iter().map(|&i| dims[i]).collect();
        let out_dim: usize = kept_dims.iter().product::<usize>().max(1);
        let traced_total: usize = traced_dims.iter().product::<usize>().max(1);

        // Stride of each subsystem inside the flat index.
        let mut strides = vec![1usize; dims.len()];
        for i in (0..dims.len().saturating_sub(1)).rev() {
            strides[i] = strides[i + 1] * dims[i + 1];
        }
        let flat = |digits_kept: usize, digits_traced: usize| -> usize {
            let mut idx = 0;
            let mut rk = digits_kept;
            for (pos, &sub) in keep.iter().enumerate().rev() {
                let d = kept_dims[pos];
                idx += (rk % d) * strides[sub];
                rk /= d;
            }
            let mut rt = digits_traced;
            for (pos, &sub) in traced.iter().enumerate().rev() {
                let d = traced_dims[pos];
                idx += (rt % d) * strides[sub];
                rt /= d;
            }
            idx
        };

        let mut out = ComplexMatrix::zeros(out_dim, out_dim);
        for r in 0..out_dim {
            for c in 0..out_dim {
                let mut s = C64::new(0.0, 0.0);
                for t in 0..traced_total {
                    s += self[(flat(r, t), flat(c, t))];
                }
                out[(r, c)] = s;
            }
        }
        Ok(out)
    }
}

impl std::ops::Index<(usize, usize)> for ComplexMatrix {
    type Output = C64;
    fn index(&self, (i, j): (usize, usize)) -> &C64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for ComplexMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut C64 {
        &mut self.data[i * self.cols + j]
    }
}

/// Result of [`ComplexMatrix::hermitian_eig`]: real eigenvalues sorted
/// descending and the matching orthonormal eigenvector columns.
#[derive(Clone, Debug)]
pub struct EigenDecomposition {
    pub values: Vec<f64>,
    pub vectors: ComplexMatrix,
}

impl EigenDecomposition {
    /// V diag(f) V^dagger for an arbitrary real spectrum replacement `f`.
    pub fn recompose(&self, new_values: &[f64]) -> ComplexMatrix {
        let n = self.vectors.rows();
        let mut out = ComplexMatrix::zeros(n, n);
        for (k, &lambda) in new_values.iter().enumerate() {
            if lambda == 0.0 {
                continue;
            }
            for i in 0..n {
                let vik = self.vectors[(i, k)] * lambda;
                for j in 0..n {
                    out[(i, j)] += vik * self.vectors[(j, k)].conj();
                }
            }
        }
        out
    }

    /// V diag(values) V^dagger; equals the original matrix up to solver error.
    pub fn reconstruct(&self) -> ComplexMatrix {
        self.recompose(&self.values)
    }

    /// Column `k` as a vector.
    pub fn vector(&self, k: usize) -> Vec<C64> {
        (0..self.vectors.rows()).map(|i| self.vectors[(i, k)]).collect()
    }
}
