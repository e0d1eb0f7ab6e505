//! Dense kernels for the tiny systems of the reference estimators.

use thiserror::Error;

pub const MAX_DIM: usize = 6;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("matrix is singular to working precision")]
    Singular,
    #[error("matrix dimension {0} outside 1..={MAX_DIM}")]
    BadDimension(usize),
    #[error("matrix has non-finite entries")]
    NonFinite,
}

/// Square matrix of order at most [`MAX_DIM`], row-major.
#[derive(Debug, Clone, PartialEq)]
pub struct SmallMatrix {
    n: usize,
    a: [[f64; MAX_DIM]; MAX_DIM],
}

impl SmallMatrix {
    pub fn from_rows(rows: &[Vec<f64>]) -> Result<Self, LinalgError> {
        let n = rows.len();
        if n == 0 || n > MAX_DIM || rows.iter().any(|r| r.len() != n) {
            return Err(LinalgError::BadDimension(n));
        }
        let mut a = [[0.0; MAX_DIM]; MAX_DIM];
        for (i, r) in rows.iter().enumerate() {
            for (j, &v) in r.iter().enumerate() {
                if !v.is_finite() {
                    return Err(LinalgError::NonFinite);
                }
                a[i][j] = v;
            }
        }
        Ok(SmallMatrix { n, a })
    }

    pub fn identity(n: usize) -> Result<Self, LinalgError> {
        let rows: Vec<Vec<f64>> = (0..n)
            .map(|i| (0..n).map(|j| if i == j { 1.0 } else { 0.0 }).collect())
            .collect();
        Self::from_rows(&rows)
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn get(&self, i: usize, j: usize) -> f64 {
        self.a[i][j]
    }

    /// Gaussian elimination with partial pivoting.
    pub fn solve(&self, rhs: &[f64]) -> Result<Vec<f64>, LinalgError> {
        let n = self.n;
        if rhs.len() != n {
            return Err(LinalgError::BadDimension(rhs.len()));
        }
        let mut a = self.a;
        let mut b = [0.0; MAX_DIM];
        b[..n].copy_from_slice(rhs);
        let scale = (0..n)
            .flat_map(|i| (0..n).map(move |j| (i, j)))
            .map(|(i, j)| a[i][j].abs())
            .fold(0.0, f64::max);
        if scale == 0.0 {
            return Err(LinalgError::Singular);
        }
        for k in 0..n {
            let p = (k..n)
                .max_by(|&i, &j| a[i][k].abs().total_cmp(&a[j][k].abs()))
                .unwrap_or(k);
            if a[p][k].abs() <= 1e-14 * scale {
                return Err(LinalgError::Singular);
            }
            a.swap(k, p);
            b.swap(k, p);
            for i in k + 1..n {
                let f = a[i][k] / a[k][k];
                for j in k..n {
                    a[i][j] -= f * a[k][j];
                }
                b[i] -= f * b[k];
            }
        }
        let mut x = vec![0.0; n];
        for i in (0..n).rev() {
            let s: f64 = (i + 1..n).map(|j| a[i][j] * x[j]).sum();
            x[i] = (b[i] - s) / a[i][i];
        }
        if x.iter().all(|v| v.is_finite()) {
            Ok(x)
        } else {
            Err(LinalgError::Singular)
        }
    }

    /// Singular values in descending order (one-sided Jacobi sweeps on the
    /// columns, equivalent to diagonalizing `M^T M`).
    pub fn singular_values(&self) -> Vec<f64> {
        let n = self.n;
        if n == 2 {
            let (s1, s2) = singular_values_2x2(self.a[0][0], self.a[0][1], self.a[1][0], self.a[1][1]);
            return vec![s1, s2];
        }
        // Columns as vectors.
        let mut u = [[0.0; MAX_DIM]; MAX_DIM];
        for (j, col) in u.iter_mut().enumerate().take(n) {
            for i in 0..n {
                col[i] = self.a[i][j];
            }
        }
        for _sweep in 0..60 {
            let mut rotated = false;
            for p in 0..n {
                for q in p + 1..n {
                    let alpha: f64 = (0..n).map(|i| u[p][i] * u[p][i]).sum();
                    let beta: f64 = (0..n).map(|i| u[q][i] * u[q][i]).sum();
                    let gamma: f64 = (0..n).map(|i| u[p][i] * u[q][i]).sum();
                    if gamma == 0.0 || gamma.abs() <= 1e-15 * (alpha * beta).sqrt() {
                        continue;
                    }
                    rotated = true;
                    let zeta = (beta - alpha) / (2.0 * gamma);
                    let t = zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt());
                    let c = 1.0 / (1.0 + t * t).sqrt();
                    let s = c * t;
                    for i in 0..n {
                        let (x, y) = (u[p][i], u[q][i]);
                        u[p][i] = c * x - s * y;
                        u[q][i] = s * x + c * y;
                    }
                }
            }
            if !rotated {
                break;
            }
        }
        let mut sv: Vec<f64> = (0..n)
            .map(|j| (0..n).map(|i| u[j][i] * u[j][i]).sum::<f64>().sqrt())
            .collect();
        sv.sort_by(|a, b| b.total_cmp(a));
        sv
    }
}

/// Closed-form singular values of `[[a, b], [c, d]]`, largest first.
pub fn singular_values_2x2(a: f64, b: f64, c: f64, d: f64) -> (f64, f64) {
    let sum = (a + d).hypot(c - b);
    let diff = (a - d).hypot(b + c);
    let smax = (sum + diff) / 2.0;
    // Product of singular values is |det|; avoids cancellation in (sum - diff).
    let det = (a * d - b * c).abs();
    let smin = if smax > 0.0 { det / smax } else { 0.0 };
    (smax, smin)
}

/// 2-norm condition number; `+inf` for exactly singular matrices.
pub fn spectral_condition(m: &SmallMatrix) -> f64 {
    let sv = m.singular_values();
    let (smax, smin) = (sv[0], sv[sv.len() - 1]);
    if smin == 0.0 || smax == 0.0 {
        f64::INFINITY
    } else {
        smax / smin
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn identity_condition_is_one() {
        let m = SmallMatrix::identity(5).unwrap();
        assert!((spectral_condition(&m) - 1.0).abs() < 1e-15);
    }

    #[test]
    fn diagonal_condition() {
        let m = SmallMatrix::from_rows(&[vec![10.0, 0.0], vec![0.0, 1.0]]).unwrap();
        assert!((spectral_condition(&m) - 10.0).abs() < 1e-14);
        let m = SmallMatrix::from_rows(&[
            vec![10.0, 0.0, 0.0],
            vec![0.0, 1.0, 0.0],
            vec![0.0, 0.0, 0.5],
        ])
        .unwrap();
        assert!((spectral_condition(&m) - 20.0).abs() < 1e-13);
    }

    #[test]
    fn singular_is_infinite() {
        let m = SmallMatrix::from_rows(&[vec![1.0, 2.0], vec![2.0, 4.0]]).unwrap();
        assert!(spectral_condition(&m).is_infinite());
        let m = SmallMatrix::from_rows(&[
            vec![1.0, 2.0, 3.0],
            vec![2.0, 4.0, 6.0],
            vec![0.0, 0.0, 0.0],
        ])
        .unwrap();
        assert!(spectral_condition(&m).is_infinite());
    }

    #[test]
    fn solve_small_system() {
        let m = SmallMatrix::from_rows(&[
            vec![2.0, 1.0, 0.0],
            vec![1.0, 3.0, 1.0],
            vec![0.0, 1.0, 4.0],
        ])
        .unwrap();
        let x = m.solve(&[3.0, 5.0, 5.0]).unwrap();
        for (xi, ei) in x.iter().zip([1.0, 1.0, 1.0]) {
            assert!((xi - ei).abs() < 1e-14);
        }
        let s = SmallMatrix::from_rows(&[vec![1.0, 1.0], vec![1.0, 1.0]]).unwrap();
        assert_eq!(s.solve(&[1.0, 2.0]), Err(LinalgError::Singular));
    }

    #[test]
    fn rejects_bad_shapes() {
        assert_eq!(
            SmallMatrix::from_rows(&vec![vec![1.0; 7]; 7]).unwrap_err(),
            LinalgError::BadDimension(7)
        );
        assert_eq!(
            SmallMatrix::from_rows(&[vec![1.0, f64::NAN], vec![0.0, 1.0]]).unwrap_err(),
            LinalgError::NonFinite
        );
    }
}
