//! Dense complex linear algebra on small matrices.

use nalgebra::{DMatrix, DVector};
use num_complex::Complex64;

use crate::error::{Error, Result};

pub type C64 = Complex64;

/// Square, row/column addressable complex matrix.
pub type ComplexMatrix = DMatrix<C64>;

/// Eigenvector matrices whose condition number exceeds this are rejected.
pub const MAX_EIGENVECTOR_CONDITION: f64 = 1e8;

pub fn zero() -> C64 {
    C64::new(0.0, 0.0)
}

pub fn is_finite(m: &ComplexMatrix) -> bool {
    m.iter().all(|z| z.re.is_finite() && z.im.is_finite())
}

/// Largest absolute entrywise difference between two matrices of equal shape.
pub fn max_abs_diff(a: &ComplexMatrix, b: &ComplexMatrix) -> f64 {
    assert_eq!(a.shape(), b.shape());
    a.iter()
        .zip(b.iter())
        .map(|(x, y)| (x - y).norm())
        .fold(0.0, f64::max)
}

/// Largest entry of `|m - m†|`.
pub fn hermiticity_defect(m: &ComplexMatrix) -> f64 {
    max_abs_diff(m, &m.adjoint())
}

/// Matrix exponential by scaling and squaring with Padé approximants.
pub fn matrix_exponential(m: &ComplexMatrix) -> Result<ComplexMatrix> {
    if !m.is_square() {
        return Err(Error::Numeric(format!(
            "matrix exponential of non-square {}x{} matrix",
            m.nrows(),
            m.ncols()
        )));
    }
    if !is_finite(m) {
        return Err(Error::Numeric("matrix exponential of non-finite matrix".into()));
    }
    if m.nrows() == 0 {
        return Ok(m.clone());
    }
    let out = m.exp();
    if !is_finite(&out) {
        return Err(Error::Numeric("matrix exponential overflowed".into()));
    }
    Ok(out)
}

/// Diagonalization `H = V diag(values) V⁻¹` of a general complex matrix.
#[derive(Debug, Clone)]
pub struct Eigensystem {
    pub values: DVector<C64>,
    /// Right eigenvectors as unit-norm columns.
    pub vectors: ComplexMatrix,
    pub inverse: ComplexMatrix,
    /// 2-norm condition number of `vectors`.
    pub condition: f64,
}

impl Eigensystem {
    /// Diagonalizes `h`, resolving degenerate eigenvalue clusters through
    /// the null space of `h - μ` so that exactly repeated eigenvalues of
    /// diagonalizable matrices are handled.
    pub fn new(h: &ComplexMatrix) -> Result<Self> {
        let n = h.nrows();
        if !h.is_square() || n == 0 {
            return Err(Error::Numeric("eigendecomposition needs a non-empty square matrix".into()));
        }
        if !is_finite(h) {
            return Err(Error::Numeric("eigendecomposition of non-finite matrix".into()));
        }
        let scale = h.iter().map(|z| z.norm()).fold(1.0, f64::max);

        // strongly degenerate spectra can stall the QR iteration at machine
        // precision; the final eigenvalues are recomputed from V⁻¹HV anyway
        let schur = [(f64::EPSILON, 10_000), (1e-14, 100_000), (1e-12, 100_000)]
            .into_iter()
            .find_map(|(eps, iters)| nalgebra::Schur::try_new(h.clone(), eps, iters))
            .ok_or_else(|| Error::Numeric("Schur iteration did not converge".into()))?;
        let (_, t) = schur.unpack();
        let raw: Vec<C64> = (0..n).map(|i| t[(i, i)]).collect();

        let cluster_tol = 1e-8 * scale;
        let mut assigned = vec![false; n];
        let mut columns: Vec<DVector<C64>> = Vec::with_capacity(n);
        for i in 0..n {
            if assigned[i] {
                continue;
            }
            let mut members = vec![i];
            assigned[i] = true;
            // single linkage: grow until no unassigned value is near a member
            let mut grew = true;
            while grew {
                grew = false;
                for j in 0..n {
                    if !assigned[j] && members.iter().any(|&m| (raw[m] - raw[j]).norm() < cluster_tol) {
                        assigned[j] = true;
                        members.push(j);
                        grew = true;
                    }
                }
            }
            let mult = members.len();
            let centre = members.iter().map(|&m| raw[m]).sum::<C64>() / mult as f64;
            let shifted = h - ComplexMatrix::identity(n, n) * centre;
            let svd = nalgebra::SVD::try_new(shifted, false, true, f64::EPSILON, 10_000)
                .ok_or_else(|| Error::Numeric("SVD did not converge".into()))?;
            let v_t = svd
                .v_t
                .as_ref()
                .ok_or_else(|| Error::Numeric("SVD returned no right singular vectors".into()))?;
            // singular values are sorted descending; the null space is at the end
            for row in (n - mult)..n {
                let v: DVector<C64> = v_t.row(row).adjoint();
                columns.push(v.normalize());
            }
        }

        let vectors = ComplexMatrix::from_columns(&columns);
        let inverse = vectors
            .clone()
            .try_inverse()
            .ok_or_else(|| Error::Numeric("eigenvector matrix is singular".into()))?;
        let sv = vectors.clone().singular_values();
        let smax = sv.iter().cloned().fold(0.0, f64::max);
        let smin = sv.iter().cloned().fold(f64::INFINITY, f64::min);
        let condition = if smin > 0.0 { smax / smin } else { f64::INFINITY };
        if !(condition <= MAX_EIGENVECTOR_CONDITION) {
            return Err(Error::Numeric(format!(
                "eigenvector condition number {condition:.3e} exceeds {MAX_EIGENVECTOR_CONDITION:e}"
            )));
        }

        let d = &inverse * h * &vectors;
        let mut off = 0.0f64;
        for i in 0..n {
            for j in 0..n {
                if i != j {
                    off = off.max(d[(i, j)].norm());
                }
            }
        }
        if off > 1e-9 * scale * condition.max(1.0).sqrt() {
            return Err(Error::Numeric(format!(
                "eigenvectors do not diagonalize the matrix (off-diagonal residual {off:.3e})"
            )));
        }
        let values = DVector::from_iterator(n, (0..n).map(|i| d[(i, i)]));
        Ok(Self { values, vectors, inverse, condition })
    }

    pub fn dim(&self) -> usize {
        self.values.len()
    }

    /// `V diag(f(λ)) V⁻¹`.
    pub fn apply_function(&self, f: impl Fn(C64) -> C64) -> ComplexMatrix {
        let mut scaled = self.vectors.clone();
        for (j, lambda) in self.values.iter().enumerate() {
            let mut col = scaled.column_mut(j);
            col *= f(*lambda);
        }
        scaled * &self.inverse
    }
}
