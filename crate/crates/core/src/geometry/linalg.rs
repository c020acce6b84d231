//! Small dense square matrices and a cyclic Jacobi eigensolver.
//!
//! Matrices here are tiny (SPD points are at most ~20x20), so everything is
//! stored row-major in a flat `Vec<f64>` and the algorithms favour robustness
//! over asymptotic speed.

use crate::{Error, Result};

/// Convergence threshold of the Jacobi sweeps, relative to the Frobenius norm.
const JACOBI_TOL: f64 = 1e-14;
const JACOBI_MAX_SWEEPS: usize = 100;
/// Relative symmetry tolerance accepted by [`sym_eig`].
pub const SYMMETRY_TOL: f64 = 1e-9;

/// Row-major `n x n` matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct SquareMatrix {
    n: usize,
    data: Vec<f64>,
}

impl SquareMatrix {
    pub fn zeros(n: usize) -> Self {
        SquareMatrix {
            n,
            data: vec![0.0; n * n],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    pub fn from_diagonal(diag: &[f64]) -> Self {
        let n = diag.len();
        let mut m = Self::zeros(n);
        for (i, &d) in diag.iter().enumerate() {
            m.data[i * n + i] = d;
        }
        m
    }

    /// Builds a matrix from `n * n` row-major entries.
    pub fn from_row_major(n: usize, data: Vec<f64>) -> Result<Self> {
        if data.len() != n * n {
            return Err(Error::WrongDimension {
                expected: n * n,
                got: data.len(),
            });
        }
        Ok(SquareMatrix { n, data })
    }

    pub fn from_fn(n: usize, mut f: impl FnMut(usize, usize) -> f64) -> Self {
        let mut data = Vec::with_capacity(n * n);
        for i in 0..n {
            for j in 0..n {
                data.push(f(i, j));
            }
        }
        SquareMatrix { n, data }
    }

    #[inline]
    pub fn size(&self) -> usize {
        self.n
    }

    #[inline]
    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    #[inline]
    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn into_vec(self) -> Vec<f64> {
        self.data
    }

    pub fn transpose(&self) -> Self {
        Self::from_fn(self.n, |i, j| self.get(j, i))
    }

    pub fn matmul(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        let n = self.n;
        let mut out = Self::zeros(n);
        for i in 0..n {
            for k in 0..n {
                let a = self.data[i * n + k];
                if a == 0.0 {
                    continue;
                }
                for j in 0..n {
                    out.data[i * n + j] += a * other.data[k * n + j];
                }
            }
        }
        out
    }

    /// `g * self * g^T`.
    pub fn congruence(&self, g: &SquareMatrix) -> Self {
        g.matmul(self).matmul(&g.transpose())
    }

    /// `s * self * s` for symmetric `s`, symmetrised to remove rounding skew.
    pub fn sandwich(&self, s: &SquareMatrix) -> Self {
        s.matmul(self).matmul(s).symmetrize()
    }

    pub fn scale(&self, c: f64) -> Self {
        SquareMatrix {
            n: self.n,
            data: self.data.iter().map(|v| v * c).collect(),
        }
    }

    pub fn add(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        SquareMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect(),
        }
    }

    pub fn sub(&self, other: &SquareMatrix) -> Self {
        assert_eq!(self.n, other.n, "matrix size mismatch");
        SquareMatrix {
            n: self.n,
            data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|v| v * v).sum::<f64>().sqrt()
    }

    pub fn max_asymmetry(&self) -> f64 {
        let mut worst = 0.0f64;
        for i in 0..self.n {
            for j in (i + 1)..self.n {
                worst = worst.max((self.get(i, j) - self.get(j, i)).abs());
            }
        }
        worst
    }

    /// `(A + A^T) / 2`.
    pub fn symmetrize(&self) -> Self {
        Self::from_fn(self.n, |i, j| 0.5 * (self.get(i, j) + self.get(j, i)))
    }

    pub fn mul_vec(&self, v: &[f64]) -> Vec<f64> {
        assert_eq!(v.len(), self.n, "vector length mismatch");
        (0..self.n)
            .map(|i| {
                self.data[i * self.n..(i + 1) * self.n]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    /// Lower Cholesky factor, or `None` if a pivot is not strictly positive.
    pub fn cholesky(&self) -> Option<SquareMatrix> {
        let n = self.n;
        let mut l = Self::zeros(n);
        for j in 0..n {
            let mut d = self.get(j, j);
            for k in 0..j {
                d -= l.get(j, k) * l.get(j, k);
            }
            if !(d > 0.0) {
                return None;
            }
            let djj = d.sqrt();
            l.set(j, j, djj);
            for i in (j + 1)..n {
                let mut s = self.get(i, j);
                for k in 0..j {
                    s -= l.get(i, k) * l.get(j, k);
                }
                l.set(i, j, s / djj);
            }
        }
        Some(l)
    }

    /// Orthonormalises the columns with modified Gram-Schmidt. Columns that
    /// collapse numerically are replaced by unit basis vectors completed
    /// against the previous ones.
    pub fn orthonormalize_columns(&self) -> SquareMatrix {
        let n = self.n;
        let mut cols: Vec<Vec<f64>> = (0..n).map(|j| (0..n).map(|i| self.get(i, j)).collect()).collect();
        for j in 0..n {
            let mut attempt = 0;
            loop {
                for k in 0..j {
                    let dot: f64 = (0..n).map(|i| cols[j][i] * cols[k][i]).sum();
                    for i in 0..n {
                        cols[j][i] -= dot * cols[k][i];
                    }
                }
                let norm = cols[j].iter().map(|v| v * v).sum::<f64>().sqrt();
                if norm > 1e-10 {
                    cols[j].iter_mut().for_each(|v| *v /= norm);
                    break;
                }
                cols[j] = (0..n).map(|i| if i == attempt { 1.0 } else { 0.0 }).collect();
                attempt += 1;
            }
        }
        Self::from_fn(n, |i, j| cols[j][i])
    }
}

/// Eigen-decomposition of a symmetric matrix.
#[derive(Debug, Clone)]
pub struct SymEigen {
    /// Eigenvalues in descending order.
    pub values: Vec<f64>,
    /// Orthonormal eigenvectors, stored as columns in the order of `values`.
    pub vectors: SquareMatrix,
}

impl SymEigen {
    /// `V f(Λ) V^T`.
    pub fn map(&self, f: impl Fn(f64) -> f64) -> SquareMatrix {
        let n = self.values.len();
        let fl: Vec<f64> = self.values.iter().map(|&l| f(l)).collect();
        let v = &self.vectors;
        let mut out = SquareMatrix::zeros(n);
        for i in 0..n {
            for j in i..n {
                let mut s = 0.0;
                for k in 0..n {
                    s += v.get(i, k) * fl[k] * v.get(j, k);
                }
                out.set(i, j, s);
                out.set(j, i, s);
            }
        }
        out
    }

    pub fn min_value(&self) -> f64 {
        *self.values.last().unwrap_or(&0.0)
    }

    pub fn max_value(&self) -> f64 {
        *self.values.first().unwrap_or(&0.0)
    }
}

/// Symmetric eigendecomposition by cyclic Jacobi rotations.
pub fn sym_eig(a: &SquareMatrix) -> Result<SymEigen> {
    let n = a.size();
    let norm = a.frobenius_norm();
    let asym = a.max_asymmetry();
    if asym > SYMMETRY_TOL * norm.max(1.0) {
        return Err(Error::NotSymmetric { asymmetry: asym });
    }
    if a.as_slice().iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite);
    }
    let mut m = a.symmetrize();
    let mut v = SquareMatrix::identity(n);
    let tol = JACOBI_TOL * norm;

    for _ in 0..JACOBI_MAX_SWEEPS {
        let off: f64 = {
            let mut s = 0.0;
            for i in 0..n {
                for j in (i + 1)..n {
                    s += m.get(i, j) * m.get(i, j);
                }
            }
            (2.0 * s).sqrt()
        };
        if off <= tol {
            break;
        }
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m.get(p, q);
                if apq == 0.0 {
                    continue;
                }
                let theta = (m.get(q, q) - m.get(p, p)) / (2.0 * apq);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                m.set(p, p, m.get(p, p) - t * apq);
                m.set(q, q, m.get(q, q) + t * apq);
                m.set(p, q, 0.0);
                m.set(q, p, 0.0);
                for r in 0..n {
                    if r != p && r != q {
                        let arp = m.get(r, p);
                        let arq = m.get(r, q);
                        let new_rp = c * arp - s * arq;
                        let new_rq = s * arp + c * arq;
                        m.set(r, p, new_rp);
                        m.set(p, r, new_rp);
                        m.set(r, q, new_rq);
                        m.set(q, r, new_rq);
                    }
                    let vrp = v.get(r, p);
                    let vrq = v.get(r, q);
                    v.set(r, p, c * vrp - s * vrq);
                    v.set(r, q, s * vrp + c * vrq);
                }
            }
        }
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m.get(j, j).total_cmp(&m.get(i, i)));
    let values = order.iter().map(|&i| m.get(i, i)).collect();
    let vectors = SquareMatrix::from_fn(n, |r, c| v.get(r, order[c]));
    Ok(SymEigen { values, vectors })
}

/// Scalar functions that can be lifted to symmetric matrices.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum MatrixFunction {
    Sqrt,
    InvSqrt,
    Log,
    Exp,
    Pow(f64),
}

/// Applies `f` to the eigenvalues of `a`.
///
/// Every function except `Exp` requires `a` to be positive definite.
pub fn spd_map(f: MatrixFunction, a: &SquareMatrix) -> Result<SquareMatrix> {
    let eig = sym_eig(a)?;
    if f != MatrixFunction::Exp && !(eig.min_value() > 0.0) {
        return Err(Error::NotPositiveDefinite {
            min_eigenvalue: eig.min_value(),
        });
    }
    Ok(match f {
        MatrixFunction::Sqrt => eig.map(f64::sqrt),
        MatrixFunction::InvSqrt => eig.map(|l| 1.0 / l.sqrt()),
        MatrixFunction::Log => eig.map(f64::ln),
        MatrixFunction::Exp => eig.map(f64::exp),
        MatrixFunction::Pow(s) => eig.map(|l| l.powf(s)),
    })
}
