//! Density matrices in the single-excitation subspace and their free
//! evolution under a (generally non-Hermitian) effective Hamiltonian.

use crate::error::{Error, Result};
use crate::linalg::{self, matrix_exponential, ComplexMatrix, Eigensystem, C64};

/// Tolerances accepted by [`DensityMatrix::validate`].
pub const HERMITIAN_TOL: f64 = 1e-12;
pub const EIGENVALUE_TOL: f64 = 1e-10;
pub const TRACE_TOL: f64 = 1e-12;

/// Sub-normalized state of a single excitation; the missing weight
/// `1 - Tr ρ` sits in the sink.
#[derive(Debug, Clone, PartialEq)]
pub struct DensityMatrix(ComplexMatrix);

impl DensityMatrix {
    /// `|node⟩⟨node|`.
    pub fn localized(n: usize, node: usize) -> Self {
        assert!(node < n, "node {node} out of range for dimension {n}");
        let mut m = ComplexMatrix::zeros(n, n);
        m[(node, node)] = C64::new(1.0, 0.0);
        Self(m)
    }

    /// Wraps a matrix after checking Hermiticity, positivity and trace.
    pub fn new(m: ComplexMatrix) -> Result<Self> {
        let rho = Self(m);
        rho.validate()?;
        Ok(rho)
    }

    pub(crate) fn from_matrix_unchecked(m: ComplexMatrix) -> Self {
        Self(m)
    }

    pub fn validate(&self) -> Result<()> {
        let m = &self.0;
        if !m.is_square() {
            return Err(Error::Numeric("density matrix is not square".into()));
        }
        if !linalg::is_finite(m) {
            return Err(Error::Numeric("density matrix has non-finite entries".into()));
        }
        let defect = linalg::hermiticity_defect(m);
        if defect > HERMITIAN_TOL {
            return Err(Error::Numeric(format!("density matrix not Hermitian (defect {defect:.3e})")));
        }
        let tr = self.trace();
        if !(tr > 0.0 && tr <= 1.0 + TRACE_TOL) {
            return Err(Error::Numeric(format!("density matrix trace {tr} outside (0, 1]")));
        }
        let min_ev = self.min_eigenvalue();
        if min_ev < -EIGENVALUE_TOL {
            return Err(Error::Numeric(format!("density matrix has negative eigenvalue {min_ev:.3e}")));
        }
        Ok(())
    }

    pub fn dim(&self) -> usize {
        self.0.nrows()
    }

    pub fn matrix(&self) -> &ComplexMatrix {
        &self.0
    }

    pub fn into_matrix(self) -> ComplexMatrix {
        self.0
    }

    pub fn trace(&self) -> f64 {
        self.0.diagonal().iter().map(|z| z.re).sum()
    }

    /// `1 - Tr ρ`.
    pub fn sink_population(&self) -> f64 {
        1.0 - self.trace()
    }

    pub fn populations(&self) -> Vec<f64> {
        self.0.diagonal().iter().map(|z| z.re).collect()
    }

    pub fn eigenvalues(&self) -> Vec<f64> {
        // Hermitian part only; anti-Hermitian residue is rounding noise
        let h = (&self.0 + self.0.adjoint()) * C64::new(0.5, 0.0);
        let mut ev: Vec<f64> = h.symmetric_eigen().eigenvalues.iter().cloned().collect();
        ev.sort_by(f64::total_cmp);
        ev
    }

    pub fn min_eigenvalue(&self) -> f64 {
        self.eigenvalues().first().copied().unwrap_or(0.0)
    }

    /// `ρ ← (ρ + ρ†)/2`.
    pub fn symmetrize(&mut self) {
        let adj = self.0.adjoint();
        self.0 = (&self.0 + adj) * C64::new(0.5, 0.0);
    }
}

/// `ρ' = U ρ U†` with `U = exp(-iΔt·H)`.
pub fn evolve(rho: &DensityMatrix, h_eff: &ComplexMatrix, dt: f64) -> Result<DensityMatrix> {
    if !(dt >= 0.0) || !dt.is_finite() {
        return Err(Error::Numeric(format!("time step must be finite and >= 0, got {dt}")));
    }
    if h_eff.shape() != rho.0.shape() {
        return Err(Error::Numeric(format!(
            "Hamiltonian is {:?} but state is {:?}",
            h_eff.shape(),
            rho.0.shape()
        )));
    }
    if !linalg::is_finite(rho.matrix()) {
        return Err(Error::Numeric("state has non-finite entries".into()));
    }
    if dt == 0.0 {
        return Ok(rho.clone());
    }
    let u = matrix_exponential(&(h_eff * C64::new(0.0, -dt)))?;
    let mut out = DensityMatrix(&u * &rho.0 * u.adjoint());
    out.symmetrize();
    Ok(out)
}

/// Noiseless, sink-free population `|⟨k|e^{-itH}|r⟩|²` on the fully
/// connected graph with uniform hopping `g`.
pub fn analytic_fc_population(n: usize, g: f64, t: f64, initial: usize, node: usize) -> f64 {
    let nf = n as f64;
    let c = (g * nf * t).cos();
    let delta = if initial == node { 1.0 } else { 0.0 };
    delta * (1.0 + 2.0 / nf * (c - 1.0)) + 2.0 / (nf * nf) * (1.0 - c)
}

/// Largest sink population reachable without noise on the fully connected
/// graph: the weight of the initial state outside the sink-decoupled
/// eigenspace, `1/(N-1)`.
pub fn unprotected_population(n: usize) -> f64 {
    assert!(n >= 2, "need at least two nodes");
    1.0 / (n as f64 - 1.0)
}

/// Precomputed free propagator used by the trajectory engine.
///
/// When the effective Hamiltonian is diagonalizable with a well-conditioned
/// eigenbasis, states are carried in eigen-coordinates `σ = V⁻¹ ρ V⁻†` so that
/// an arbitrary free step and a single-node dephasing both cost `O(N²)`.
/// Otherwise states stay in the site basis and every step exponentiates.
#[derive(Debug, Clone)]
pub struct Propagator {
    n: usize,
    h: ComplexMatrix,
    kind: Kind,
}

#[derive(Debug, Clone)]
enum Kind {
    Spectral(Spectral),
    Dense,
}

#[derive(Debug, Clone)]
struct Spectral {
    values: Vec<C64>,
    /// Row-major eigenvectors `V`.
    v: Vec<C64>,
    /// Row-major `V⁻¹`.
    w: Vec<C64>,
    /// Row-major `V†V`, for traces.
    gram: Vec<C64>,
}

/// Trajectory state in the propagator's working basis (row-major, kept
/// exactly Hermitian).
#[derive(Debug, Clone, PartialEq)]
pub struct FrameState {
    data: Vec<C64>,
}

/// Reusable buffers for the hot loops.
#[derive(Debug, Clone, Default)]
pub struct Scratch {
    phases: Vec<C64>,
    x: Vec<C64>,
    b: Vec<C64>,
}

fn row_major(m: &ComplexMatrix) -> Vec<C64> {
    let (r, c) = m.shape();
    let mut out = Vec::with_capacity(r * c);
    for i in 0..r {
        for j in 0..c {
            out.push(m[(i, j)]);
        }
    }
    out
}

impl Propagator {
    pub fn new(h_eff: &ComplexMatrix) -> Result<Self> {
        if !h_eff.is_square() || h_eff.nrows() == 0 {
            return Err(Error::Numeric("Hamiltonian must be square and non-empty".into()));
        }
        if !linalg::is_finite(h_eff) {
            return Err(Error::Numeric("Hamiltonian has non-finite entries".into()));
        }
        let n = h_eff.nrows();
        let kind = match Eigensystem::new(h_eff) {
            Ok(es) => {
                let gram = es.vectors.adjoint() * &es.vectors;
                Kind::Spectral(Spectral {
                    values: es.values.iter().cloned().collect(),
                    v: row_major(&es.vectors),
                    w: row_major(&es.inverse),
                    gram: row_major(&gram),
                })
            }
            Err(e) => {
                log::debug!("falling back to dense exponentials: {e}");
                Kind::Dense
            }
        };
        Ok(Self { n, h: h_eff.clone(), kind })
    }

    /// Forces the exponential-per-step path.
    pub fn dense(h_eff: &ComplexMatrix) -> Result<Self> {
        let mut p = Self::new(h_eff)?;
        p.kind = Kind::Dense;
        Ok(p)
    }

    pub fn is_spectral(&self) -> bool {
        matches!(self.kind, Kind::Spectral(_))
    }

    pub fn dim(&self) -> usize {
        self.n
    }

    pub fn hamiltonian(&self) -> &ComplexMatrix {
        &self.h
    }

    pub fn enter(&self, rho: &DensityMatrix) -> FrameState {
        let n = self.n;
        let data = match &self.kind {
            Kind::Dense => row_major(rho.matrix()),
            Kind::Spectral(s) => {
                let w = ComplexMatrix::from_row_slice(n, n, &s.w);
                row_major(&(&w * rho.matrix() * w.adjoint()))
            }
        };
        let mut st = FrameState { data };
        hermitize(&mut st.data, n);
        st
    }

    /// `|node⟩⟨node|` in the working basis.
    pub fn localized(&self, node: usize) -> FrameState {
        let n = self.n;
        match &self.kind {
            Kind::Dense => {
                let mut data = vec![C64::new(0.0, 0.0); n * n];
                data[node * n + node] = C64::new(1.0, 0.0);
                FrameState { data }
            }
            Kind::Spectral(s) => {
                // σ = (W e_node)(W e_node)†
                let col: Vec<C64> = (0..n).map(|i| s.w[i * n + node]).collect();
                let mut data = vec![C64::new(0.0, 0.0); n * n];
                for i in 0..n {
                    for j in 0..n {
                        data[i * n + j] = col[i] * col[j].conj();
                    }
                }
                let mut st = FrameState { data };
                hermitize(&mut st.data, n);
                st
            }
        }
    }

    pub fn leave(&self, st: &FrameState) -> DensityMatrix {
        let n = self.n;
        let m = ComplexMatrix::from_row_slice(n, n, &st.data);
        let rho = match &self.kind {
            Kind::Dense => m,
            Kind::Spectral(s) => {
                let v = ComplexMatrix::from_row_slice(n, n, &s.v);
                &v * m * v.adjoint()
            }
        };
        let mut rho = DensityMatrix::from_matrix_unchecked(rho);
        rho.symmetrize();
        rho
    }

    /// Free evolution over `dt`.
    pub fn evolve(&self, st: &mut FrameState, dt: f64, scratch: &mut Scratch) -> Result<()> {
        if dt == 0.0 {
            return Ok(());
        }
        if !(dt > 0.0) || !dt.is_finite() {
            return Err(Error::Numeric(format!("time step must be finite and >= 0, got {dt}")));
        }
        let n = self.n;
        match &self.kind {
            Kind::Spectral(s) => {
                scratch.phases.clear();
                scratch.phases.extend(s.values.iter().map(|&lambda| (lambda * C64::new(0.0, -dt)).exp()));
                let p = &scratch.phases;
                for i in 0..n {
                    let pi = p[i];
                    let row = &mut st.data[i * n..(i + 1) * n];
                    for j in i..n {
                        row[j] *= pi * p[j].conj();
                    }
                }
                mirror_upper(&mut st.data, n);
                if !st.data[0].re.is_finite() {
                    return Err(Error::Numeric("state became non-finite".into()));
                }
            }
            Kind::Dense => {
                let u = matrix_exponential(&(&self.h * C64::new(0.0, -dt)))?;
                let m = ComplexMatrix::from_row_slice(n, n, &st.data);
                st.data = row_major(&(&u * m * u.adjoint()));
                hermitize(&mut st.data, n);
            }
        }
        Ok(())
    }

    /// Scales the coherences between `node` and every other node by
    /// `1 - strength`; populations are untouched.
    pub fn dephase(&self, st: &mut FrameState, node: usize, strength: f64, scratch: &mut Scratch) {
        if strength == 0.0 {
            return;
        }
        let n = self.n;
        match &self.kind {
            Kind::Dense => {
                let keep = 1.0 - strength;
                for j in 0..n {
                    if j != node {
                        st.data[node * n + j] *= keep;
                        st.data[j * n + node] *= keep;
                    }
                }
            }
            Kind::Spectral(s) => {
                // Δρ = -c (a e_mᵀ + e_m a†) with a = ρ e_m minus its m-th entry;
                // in eigen-coordinates Δσ = -c (b w† + w b†), w = W e_m and
                // b = W a = x - ρ_mm w with x = σ V† e_m.
                let sigma = &st.data;
                scratch.x.clear();
                for i in 0..n {
                    let row = &sigma[i * n..(i + 1) * n];
                    let mut acc = C64::new(0.0, 0.0);
                    for j in 0..n {
                        acc += row[j] * s.v[node * n + j].conj();
                    }
                    scratch.x.push(acc);
                }
                let vrow = &s.v[node * n..(node + 1) * n];
                let mut pop = C64::new(0.0, 0.0);
                for i in 0..n {
                    pop += vrow[i] * scratch.x[i];
                }
                scratch.b.clear();
                for i in 0..n {
                    scratch.b.push(scratch.x[i] - s.w[i * n + node] * pop);
                }
                let b = &scratch.b;
                for i in 0..n {
                    let wi = s.w[i * n + node];
                    let bi = b[i];
                    let row = &mut st.data[i * n..(i + 1) * n];
                    for j in i..n {
                        let wj = s.w[j * n + node];
                        row[j] -= (bi * wj.conj() + wi * b[j].conj()) * strength;
                    }
                }
                mirror_upper(&mut st.data, n);
            }
        }
    }

    pub fn trace(&self, st: &FrameState) -> f64 {
        let n = self.n;
        match &self.kind {
            Kind::Dense => (0..n).map(|i| st.data[i * n + i].re).sum(),
            Kind::Spectral(s) => {
                // Tr(V σ V†) = Σ_ij σ_ij (V†V)_ji
                let mut acc = 0.0;
                for i in 0..n {
                    for j in 0..n {
                        acc += (st.data[i * n + j] * s.gram[j * n + i]).re;
                    }
                }
                acc
            }
        }
    }
}

/// Copies the upper triangle onto the lower one and zeroes the imaginary
/// part of the diagonal.
fn mirror_upper(data: &mut [C64], n: usize) {
    for i in 0..n {
        data[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            data[j * n + i] = data[i * n + j].conj();
        }
    }
}

/// `σ ← (σ + σ†)/2`.
fn hermitize(data: &mut [C64], n: usize) {
    for i in 0..n {
        data[i * n + i].im = 0.0;
        for j in (i + 1)..n {
            let avg = (data[i * n + j] + data[j * n + i].conj()) * 0.5;
            data[i * n + j] = avg;
            data[j * n + i] = avg.conj();
        }
    }
}
