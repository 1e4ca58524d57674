//! Dense square `f64` matrices: just enough linear algebra for matrix
//! cocycles and adjoint operators.

use alloc::vec;
use alloc::vec::Vec;

/// Row-major square matrix.
#[derive(Debug, Clone, PartialEq)]
pub struct Mat {
    n: usize,
    data: Vec<f64>,
}

impl Mat {
    pub fn zeros(n: usize) -> Self {
        Mat { n, data: vec![0.0; n * n] }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Mat::zeros(n);
        for i in 0..n {
            m.data[i * n + i] = 1.0;
        }
        m
    }

    /// Panics unless `rows` is square.
    pub fn from_rows(rows: &[Vec<f64>]) -> Self {
        let n = rows.len();
        assert!(rows.iter().all(|r| r.len() == n), "matrix must be square");
        Mat { n, data: rows.iter().flatten().copied().collect() }
    }

    pub fn diagonal(entries: &[f64]) -> Self {
        let mut m = Mat::zeros(entries.len());
        for (i, &v) in entries.iter().enumerate() {
            m.data[i * entries.len() + i] = v;
        }
        m
    }

    /// Counterclockwise planar rotation by `angle`.
    pub fn rotation2(angle: f64) -> Self {
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        Mat { n: 2, data: vec![c, -s, s, c] }
    }

    /// Rotation by `angle` about a unit `axis` (Rodrigues).
    pub fn rotation3(axis: [f64; 3], angle: f64) -> Self {
        let norm = libm::sqrt(axis.iter().map(|x| x * x).sum());
        let [x, y, z] = axis.map(|v| v / norm);
        let (s, c) = (libm::sin(angle), libm::cos(angle));
        let t = 1.0 - c;
        Mat {
            n: 3,
            data: vec![
                t * x * x + c,
                t * x * y - s * z,
                t * x * z + s * y,
                t * x * y + s * z,
                t * y * y + c,
                t * y * z - s * x,
                t * x * z - s * y,
                t * y * z + s * x,
                t * z * z + c,
            ],
        }
    }

    /// Upper unitriangular `[[1, a, c], [0, 1, b], [0, 0, 1]]`.
    pub fn unipotent3(a: f64, b: f64, c: f64) -> Self {
        Mat { n: 3, data: vec![1.0, a, c, 0.0, 1.0, b, 0.0, 0.0, 1.0] }
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.data[i * self.n + j]
    }

    pub fn set(&mut self, i: usize, j: usize, v: f64) {
        self.data[i * self.n + j] = v;
    }

    pub fn rows(&self) -> Vec<Vec<f64>> {
        self.data.chunks(self.n.max(1)).map(<[f64]>::to_vec).collect()
    }

    pub fn as_slice(&self) -> &[f64] {
        &self.data
    }

    pub fn mul(&self, other: &Mat) -> Mat {
        let n = self.n;
        assert_eq!(n, other.n, "dimension mismatch");
        let mut out = Mat::zeros(n);
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

    pub fn sub(&self, other: &Mat) -> Mat {
        Mat { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a - b).collect() }
    }

    pub fn add(&self, other: &Mat) -> Mat {
        Mat { n: self.n, data: self.data.iter().zip(&other.data).map(|(a, b)| a + b).collect() }
    }

    pub fn scale(&self, s: f64) -> Mat {
        Mat { n: self.n, data: self.data.iter().map(|a| a * s).collect() }
    }

    pub fn transpose(&self) -> Mat {
        let n = self.n;
        let mut out = Mat::zeros(n);
        for i in 0..n {
            for j in 0..n {
                out.data[j * n + i] = self.data[i * n + j];
            }
        }
        out
    }

    pub fn commutator(&self, other: &Mat) -> Mat {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn frobenius_norm(&self) -> f64 {
        libm::sqrt(self.data.iter().map(|a| a * a).sum())
    }

    pub fn max_abs(&self) -> f64 {
        self.data.iter().fold(0.0, |m, a| m.max(libm::fabs(*a)))
    }

    /// Frobenius distance to the identity.
    pub fn distance_to_identity(&self) -> f64 {
        self.sub(&Mat::identity(self.n)).frobenius_norm()
    }

    /// Determinant by partial-pivot elimination.
    pub fn determinant(&self) -> f64 {
        let n = self.n;
        let mut a = self.data.clone();
        let mut det = 1.0;
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| libm::fabs(a[x * n + c]).total_cmp(&libm::fabs(a[y * n + c]))).unwrap();
            if a[p * n + c] == 0.0 {
                return 0.0;
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                }
                det = -det;
            }
            let piv = a[c * n + c];
            det *= piv;
            for r in c + 1..n {
                let f = a[r * n + c] / piv;
                for j in c..n {
                    a[r * n + j] -= f * a[c * n + j];
                }
            }
        }
        det
    }

    /// Gauss-Jordan inverse; `None` when a pivot falls below `tol` relative
    /// to the largest entry.
    pub fn inverse(&self, tol: f64) -> Option<Mat> {
        let n = self.n;
        let scale = self.max_abs().max(f64::MIN_POSITIVE);
        let mut a = self.data.clone();
        let mut inv = Mat::identity(n).data;
        for c in 0..n {
            let p = (c..n).max_by(|&x, &y| libm::fabs(a[x * n + c]).total_cmp(&libm::fabs(a[y * n + c]))).unwrap();
            if libm::fabs(a[p * n + c]) <= tol * scale {
                return None;
            }
            if p != c {
                for j in 0..n {
                    a.swap(p * n + j, c * n + j);
                    inv.swap(p * n + j, c * n + j);
                }
            }
            let piv = a[c * n + c];
            for j in 0..n {
                a[c * n + j] /= piv;
                inv[c * n + j] /= piv;
            }
            for r in 0..n {
                if r == c {
                    continue;
                }
                let f = a[r * n + c];
                if f == 0.0 {
                    continue;
                }
                for j in 0..n {
                    a[r * n + j] -= f * a[c * n + j];
                    inv[r * n + j] -= f * inv[c * n + j];
                }
            }
        }
        Some(Mat { n, data: inv })
    }

    /// Largest singular value (square root of the top eigenvalue of `AᵀA`).
    pub fn spectral_norm(&self) -> f64 {
        let ata = self.transpose().mul(self);
        let top = symmetric_eigenvalues(&ata).into_iter().fold(0.0, f64::max);
        libm::sqrt(top.max(0.0))
    }

    /// Spectral radius through Gelfand's formula on repeated squares,
    /// renormalizing at every step: `rho = lim ||A^(2^j)||^(1/2^j)`.
    pub fn spectral_radius(&self) -> f64 {
        let norm = self.frobenius_norm();
        if norm == 0.0 {
            return 0.0;
        }
        let mut log_rho = libm::log(norm);
        let mut b = self.scale(1.0 / norm);
        let mut weight = 0.5;
        for _ in 0..64 {
            let sq = b.mul(&b);
            let s = sq.frobenius_norm();
            if s == 0.0 {
                return 0.0;
            }
            log_rho += weight * libm::log(s);
            weight *= 0.5;
            b = sq.scale(1.0 / s);
        }
        libm::exp(log_rho)
    }
}

/// Eigenvalues of a symmetric matrix by cyclic Jacobi rotations.
pub fn symmetric_eigenvalues(m: &Mat) -> Vec<f64> {
    let n = m.n;
    let mut a = m.data.clone();
    for _sweep in 0..100 {
        let off: f64 = (0..n).flat_map(|i| (0..n).filter(move |&j| j != i).map(move |j| (i, j))).map(|(i, j)| a[i * n + j] * a[i * n + j]).sum();
        let diag: f64 = (0..n).map(|i| a[i * n + i] * a[i * n + i]).sum();
        if off <= 1e-30 * diag.max(f64::MIN_POSITIVE) {
            break;
        }
        for p in 0..n {
            for q in p + 1..n {
                let apq = a[p * n + q];
                if apq == 0.0 {
                    continue;
                }
                let theta = (a[q * n + q] - a[p * n + p]) / (2.0 * apq);
                let t = libm::copysign(1.0, theta) / (libm::fabs(theta) + libm::sqrt(theta * theta + 1.0));
                let c = 1.0 / libm::sqrt(t * t + 1.0);
                let s = t * c;
                for k in 0..n {
                    let akp = a[k * n + p];
                    let akq = a[k * n + q];
                    a[k * n + p] = c * akp - s * akq;
                    a[k * n + q] = s * akp + c * akq;
                }
                for k in 0..n {
                    let apk = a[p * n + k];
                    let aqk = a[q * n + k];
                    a[p * n + k] = c * apk - s * aqk;
                    a[q * n + k] = s * apk + c * aqk;
                }
            }
        }
    }
    (0..n).map(|i| a[i * n + i]).collect()
}
