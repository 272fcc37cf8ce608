//! Dense complex matrices and a cyclic Jacobi eigensolver for Hermitian input.

use num_complex::Complex64;

use crate::CoreError;

/// Row-major dense complex matrix.
#[derive(Clone, Debug, PartialEq)]
pub struct CMatrix {
    rows: usize,
    cols: usize,
    data: Vec<Complex64>,
}

impl CMatrix {
    pub fn zeros(rows: usize, cols: usize) -> Self {
        CMatrix {
            rows,
            cols,
            data: vec![Complex64::new(0.0, 0.0); rows * cols],
        }
    }

    pub fn identity(n: usize) -> Self {
        let mut m = Self::zeros(n, n);
        for i in 0..n {
            m[(i, i)] = Complex64::new(1.0, 0.0);
        }
        m
    }

    pub fn from_real(rows: usize, cols: usize, data: &[f64]) -> Self {
        assert_eq!(data.len(), rows * cols);
        CMatrix {
            rows,
            cols,
            data: data.iter().map(|&x| Complex64::new(x, 0.0)).collect(),
        }
    }

    pub fn from_fn(rows: usize, cols: usize, f: impl Fn(usize, usize) -> Complex64) -> Self {
        let mut data = Vec::with_capacity(rows * cols);
        for i in 0..rows {
            for j in 0..cols {
                data.push(f(i, j));
            }
        }
        CMatrix { rows, cols, data }
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

    pub fn data(&self) -> &[Complex64] {
        &self.data
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.data.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
    }

    pub fn add_scaled(&mut self, other: &CMatrix, c: f64) {
        assert_eq!((self.rows, self.cols), (other.rows, other.cols));
        for (a, b) in self.data.iter_mut().zip(&other.data) {
            *a += b * c;
        }
    }

    pub fn mul_vec(&self, v: &[Complex64]) -> Vec<Complex64> {
        assert_eq!(v.len(), self.cols);
        (0..self.rows)
            .map(|i| {
                self.data[i * self.cols..(i + 1) * self.cols]
                    .iter()
                    .zip(v)
                    .map(|(a, b)| a * b)
                    .sum()
            })
            .collect()
    }

    pub fn matmul(&self, other: &CMatrix) -> CMatrix {
        assert_eq!(self.cols, other.rows);
        CMatrix::from_fn(self.rows, other.cols, |i, j| {
            (0..self.cols).map(|k| self[(i, k)] * other[(k, j)]).sum()
        })
    }

    pub fn adjoint(&self) -> CMatrix {
        CMatrix::from_fn(self.cols, self.rows, |i, j| self[(j, i)].conj())
    }

    /// Largest `|A_ij - conj(A_ji)|`.
    pub fn hermitian_defect(&self) -> f64 {
        let mut worst: f64 = 0.0;
        for i in 0..self.rows {
            for j in 0..self.cols {
                worst = worst.max((self[(i, j)] - self[(j, i)].conj()).norm());
            }
        }
        worst
    }

    /// `ψ† A ψ` without normalization.
    pub fn quadratic_form(&self, psi: &[Complex64]) -> Complex64 {
        let av = self.mul_vec(psi);
        psi.iter().zip(&av).map(|(a, b)| a.conj() * b).sum()
    }
}

impl std::ops::Index<(usize, usize)> for CMatrix {
    type Output = Complex64;
    fn index(&self, (i, j): (usize, usize)) -> &Complex64 {
        &self.data[i * self.cols + j]
    }
}

impl std::ops::IndexMut<(usize, usize)> for CMatrix {
    fn index_mut(&mut self, (i, j): (usize, usize)) -> &mut Complex64 {
        &mut self.data[i * self.cols + j]
    }
}

pub fn norm(v: &[Complex64]) -> f64 {
    v.iter().map(|z| z.norm_sqr()).sum::<f64>().sqrt()
}

/// Eigenvalues (ascending) and orthonormal eigenvectors of a Hermitian matrix.
#[derive(Clone, Debug)]
pub struct SpectrumResult {
    pub eigenvalues: Vec<f64>,
    /// `eigenvectors[k]` belongs to `eigenvalues[k]`; first component of
    /// magnitude above noise is real and positive.
    pub eigenvectors: Vec<Vec<Complex64>>,
    /// `degenerate[k]` is set when eigenvalue `k` is within the degeneracy
    /// threshold of a neighbour.
    pub degenerate: Vec<bool>,
    pub sweeps: usize,
    pub matrix_norm: f64,
}

impl SpectrumResult {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }
}

const MAX_SWEEPS: usize = 100;
/// Relative off-diagonal Frobenius norm at which sweeps stop.
const OFF_DIAGONAL_TOL: f64 = 1e-12;
/// Relative gap under which neighbouring eigenvalues count as degenerate.
pub const DEGENERACY_TOL: f64 = 1e-10;
const HERMITIAN_TOL: f64 = 1e-12;

/// Cyclic Jacobi diagonalization of a Hermitian matrix.
///
/// Each rotation first removes the phase of `A_pq` and then applies a real
/// Givens rotation, so the scheme is the classical real Jacobi method on the
/// rephased matrix. Rotations run in fixed row-major order, which makes the
/// output a deterministic function of the input.
pub fn eigh(a: &CMatrix) -> Result<SpectrumResult, CoreError> {
    if !a.is_square() {
        return Err(CoreError::DimensionMismatch {
            expected: a.rows(),
            found: a.cols(),
        });
    }
    let n = a.rows();
    let scale = a.frobenius_norm();
    if a.hermitian_defect() > HERMITIAN_TOL * scale.max(1.0) {
        return Err(CoreError::NotHermitian(a.hermitian_defect()));
    }
    let mut m = a.clone();
    // Symmetrize exactly so the diagonal is real from the start.
    for i in 0..n {
        m[(i, i)] = Complex64::new(m[(i, i)].re, 0.0);
        for j in (i + 1)..n {
            let avg = (m[(i, j)] + m[(j, i)].conj()) * 0.5;
            m[(i, j)] = avg;
            m[(j, i)] = avg.conj();
        }
    }
    let mut v = CMatrix::identity(n);
    let off = |m: &CMatrix| -> f64 {
        let mut s = 0.0;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    s += m[(i, j)].norm_sqr();
                }
            }
        }
        s.sqrt()
    };
    let mut sweeps = 0;
    while sweeps < MAX_SWEEPS && off(&m) > OFF_DIAGONAL_TOL * scale.max(f64::MIN_POSITIVE) {
        sweeps += 1;
        for p in 0..n {
            for q in (p + 1)..n {
                let apq = m[(p, q)];
                let r = apq.norm();
                if r == 0.0 {
                    continue;
                }
                // Phase: scale column q by e^{-iφ}, row q by e^{iφ}.
                let phase = apq / r;
                let ph_c = phase.conj();
                for k in 0..n {
                    m[(k, q)] *= ph_c;
                }
                for k in 0..n {
                    m[(q, k)] *= phase;
                }
                for k in 0..n {
                    v[(k, q)] *= ph_c;
                }
                // Real rotation zeroing the (now real) pq entry.
                let app = m[(p, p)].re;
                let aqq = m[(q, q)].re;
                let theta = (aqq - app) / (2.0 * r);
                let t = theta.signum() / (theta.abs() + (theta * theta + 1.0).sqrt());
                let t = if theta == 0.0 { 1.0 } else { t };
                let c = 1.0 / (t * t + 1.0).sqrt();
                let s = t * c;
                for k in 0..n {
                    let kp = m[(k, p)];
                    let kq = m[(k, q)];
                    m[(k, p)] = kp * c - kq * s;
                    m[(k, q)] = kp * s + kq * c;
                }
                for k in 0..n {
                    let pk = m[(p, k)];
                    let qk = m[(q, k)];
                    m[(p, k)] = pk * c - qk * s;
                    m[(q, k)] = pk * s + qk * c;
                }
                m[(p, q)] = Complex64::new(0.0, 0.0);
                m[(q, p)] = Complex64::new(0.0, 0.0);
                m[(p, p)] = Complex64::new(m[(p, p)].re, 0.0);
                m[(q, q)] = Complex64::new(m[(q, q)].re, 0.0);
                for k in 0..n {
                    let kp = v[(k, p)];
                    let kq = v[(k, q)];
                    v[(k, p)] = kp * c - kq * s;
                    v[(k, q)] = kp * s + kq * c;
                }
            }
        }
    }
    if off(&m) > OFF_DIAGONAL_TOL * scale.max(f64::MIN_POSITIVE) * 10.0 {
        return Err(CoreError::NoConvergence { sweeps });
    }

    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&i, &j| m[(i, i)].re.total_cmp(&m[(j, j)].re).then(i.cmp(&j)));
    let eigenvalues: Vec<f64> = order.iter().map(|&i| m[(i, i)].re).collect();
    let eigenvectors: Vec<Vec<Complex64>> = order
        .iter()
        .map(|&k| {
            let mut col: Vec<Complex64> = (0..n).map(|i| v[(i, k)]).collect();
            let nrm = norm(&col);
            for z in col.iter_mut() {
                *z /= nrm;
            }
            fix_phase(&mut col);
            col
        })
        .collect();
    let gap_tol = DEGENERACY_TOL * scale.max(f64::MIN_POSITIVE);
    let degenerate = (0..n)
        .map(|k| {
            (k > 0 && eigenvalues[k] - eigenvalues[k - 1] < gap_tol)
                || (k + 1 < n && eigenvalues[k + 1] - eigenvalues[k] < gap_tol)
        })
        .collect();
    Ok(SpectrumResult {
        eigenvalues,
        eigenvectors,
        degenerate,
        sweeps,
        matrix_norm: scale,
    })
}

/// Rotates a vector so its first non-negligible component is real and positive.
pub fn fix_phase(v: &mut [Complex64]) {
    let nrm = norm(v);
    if nrm == 0.0 {
        return;
    }
    if let Some(lead) = v.iter().find(|z| z.norm() > 1e-8 * nrm).copied() {
        let phase = lead.conj() / lead.norm();
        for z in v.iter_mut() {
            *z *= phase;
        }
    }
}

/// Singular values of a rectangular matrix, descending.
///
/// One-sided (Hestenes) Jacobi on the rows of the wider orientation: pairs of
/// rows are rotated until mutually orthogonal, after which the row norms are
/// the singular values. Small singular values come out with absolute accuracy
/// near machine precision times the matrix norm, which the Gram-matrix route
/// cannot deliver.
pub fn singular_values(a: &CMatrix) -> Result<Vec<f64>, CoreError> {
    let a = if a.rows() <= a.cols() {
        a.clone()
    } else {
        a.adjoint()
    };
    let (m, k) = (a.rows(), a.cols());
    let mut rows: Vec<Vec<Complex64>> = (0..m)
        .map(|i| (0..k).map(|j| a[(i, j)]).collect())
        .collect();
    let mut sweeps = 0;
    loop {
        let mut rotated = false;
        for p in 0..m {
            for q in (p + 1)..m {
                let alpha: f64 = rows[p].iter().map(|z| z.norm_sqr()).sum();
                let beta: f64 = rows[q].iter().map(|z| z.norm_sqr()).sum();
                let gamma: Complex64 = rows[p]
                    .iter()
                    .zip(&rows[q])
                    .map(|(x, y)| x * y.conj())
                    .sum();
                let g = gamma.norm();
                if g <= f64::EPSILON * (alpha * beta).sqrt() || g == 0.0 {
                    continue;
                }
                rotated = true;
                let phase = gamma / g;
                let zeta = (beta - alpha) / (2.0 * g);
                let t = if zeta == 0.0 {
                    1.0
                } else {
                    zeta.signum() / (zeta.abs() + (1.0 + zeta * zeta).sqrt())
                };
                let c = 1.0 / (1.0 + t * t).sqrt();
                let s = c * t;
                for j in 0..k {
                    let rp = rows[p][j];
                    let rq = rows[q][j] * phase;
                    rows[p][j] = rp * c - rq * s;
                    rows[q][j] = rp * s + rq * c;
                }
            }
        }
        sweeps += 1;
        if !rotated {
            break;
        }
        if sweeps > MAX_SWEEPS {
            return Err(CoreError::NoConvergence { sweeps });
        }
    }
    let mut sv: Vec<f64> = rows.iter().map(|r| norm(r)).collect();
    sv.sort_by(|x, y| y.total_cmp(x));
    Ok(sv)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(re: f64, im: f64) -> Complex64 {
        Complex64::new(re, im)
    }

    fn check_decomposition(a: &CMatrix, spec: &SpectrumResult) {
        let n = a.rows();
        let scale = a.frobenius_norm().max(1.0);
        for k in 0..n {
            let v = &spec.eigenvectors[k];
            let av = a.mul_vec(v);
            let res: f64 = av
                .iter()
                .zip(v)
                .map(|(x, y)| (x - y * spec.eigenvalues[k]).norm_sqr())
                .sum::<f64>()
                .sqrt();
            assert!(res <= 1e-10 * scale, "residual {res}");
            for l in 0..n {
                let ip: Complex64 = spec.eigenvectors[l].iter().zip(v).map(|(x, y)| x.conj() * y).sum();
                let expected = if k == l { 1.0 } else { 0.0 };
                assert!((ip - c(expected, 0.0)).norm() < 1e-12);
            }
        }
        assert!(spec.eigenvalues.windows(2).all(|w| w[0] <= w[1]));
    }

    #[test]
    fn diagonal_input() {
        let a = CMatrix::from_real(3, 3, &[2.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 0.0]);
        let spec = eigh(&a).unwrap();
        assert_eq!(spec.eigenvalues, vec![0.0, 1.0, 2.0]);
        check_decomposition(&a, &spec);
    }

    #[test]
    fn complex_hermitian_input() {
        let a = CMatrix::from_fn(3, 3, |i, j| match (i, j) {
            (0, 0) => c(1.0, 0.0),
            (1, 1) => c(-2.0, 0.0),
            (2, 2) => c(0.5, 0.0),
            (0, 1) => c(0.3, 0.7),
            (1, 0) => c(0.3, -0.7),
            (1, 2) => c(0.0, -1.1),
            (2, 1) => c(0.0, 1.1),
            (0, 2) => c(-0.2, 0.0),
            (2, 0) => c(-0.2, 0.0),
            _ => unreachable!(),
        });
        let spec = eigh(&a).unwrap();
        check_decomposition(&a, &spec);
        let trace: f64 = spec.eigenvalues.iter().sum();
        assert!((trace + 0.5).abs() < 1e-12);
        for v in &spec.eigenvectors {
            let lead = v.iter().find(|z| z.norm() > 1e-8).unwrap();
            assert!(lead.im.abs() < 1e-14 && lead.re > 0.0);
        }
    }

    #[test]
    fn degenerate_spectrum_is_flagged() {
        let a = CMatrix::from_real(3, 3, &[1.0, 0.0, 0.0, 0.0, 1.0, 0.0, 0.0, 0.0, 3.0]);
        let spec = eigh(&a).unwrap();
        assert_eq!(spec.degenerate, vec![true, true, false]);
    }

    #[test]
    fn rejects_non_hermitian() {
        let a = CMatrix::from_real(2, 2, &[0.0, 1.0, 0.0, 0.0]);
        assert!(matches!(eigh(&a), Err(CoreError::NotHermitian(_))));
    }

    #[test]
    fn singular_values_of_rank_deficient_matrix() {
        let a = CMatrix::from_real(2, 3, &[1.0, 2.0, 3.0, 2.0, 4.0, 6.0]);
        let sv = singular_values(&a).unwrap();
        assert_eq!(sv.len(), 2);
        assert!((sv[0] - (5.0 * 14.0f64).sqrt()).abs() < 1e-12);
        assert!(sv[1] < 1e-14);
    }
}
