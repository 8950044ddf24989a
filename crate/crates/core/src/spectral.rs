//! Graph and joint (time-vertex) Fourier transforms.
//!
//! The graph Fourier transform projects each time snapshot onto the
//! eigenbasis of the Laplacian (or any supplied symmetric PSD operator);
//! the joint transform additionally applies a unitary DFT along the time
//! axis. Filters act by elementwise multiplication in the joint spectral
//! domain. The DFT is applied as a dense matrix, which keeps conventions
//! explicit and is fast enough for the signal lengths targeted here.

use ndarray::{Array1, Array2};
use num_complex::Complex64;

use crate::error::{Error, Result};
use crate::graph::OperatorMatrix;
use crate::linalg;

/// Default relative tolerance for the Jacobi eigensolver.
pub const DEFAULT_EIGEN_TOL: f64 = 1e-12;
const MAX_JACOBI_SWEEPS: usize = 100;

/// Orthonormal eigenbasis of a symmetric PSD operator, eigenvalues
/// ascending. The sign of each eigenvector is fixed so that its
/// largest-magnitude entry is positive, making downstream coefficient
/// estimates reproducible across runs.
#[derive(Debug, Clone)]
pub struct EigenBasis {
    eigenvalues: Array1<f64>,
    eigenvectors: Array2<f64>,
}

impl EigenBasis {
    pub fn dim(&self) -> usize {
        self.eigenvalues.len()
    }

    /// Ascending eigenvalues.
    pub fn eigenvalues(&self) -> &Array1<f64> {
        &self.eigenvalues
    }

    /// Eigenvector matrix; column `n` pairs with eigenvalue `n`.
    pub fn eigenvectors(&self) -> &Array2<f64> {
        &self.eigenvectors
    }

    /// The eigenbasis of the identity operator: useful to drive the
    /// graph-aware machinery in a graph-agnostic (per-node) mode.
    pub fn identity(n: usize) -> Self {
        EigenBasis {
            eigenvalues: Array1::ones(n),
            eigenvectors: Array2::eye(n),
        }
    }

    pub fn largest_eigenvalue(&self) -> f64 {
        *self
            .eigenvalues
            .last()
            .expect("eigenbasis must be non-empty")
    }

    /// SHA-256 over the canonical little-endian byte layout of the basis,
    /// used to pair serialized models with the basis they were fitted on.
    pub fn sha256(&self) -> String {
        use sha2::{Digest, Sha256};
        let mut hasher = Sha256::new();
        hasher.update((self.dim() as u64).to_le_bytes());
        for v in self.eigenvalues.iter() {
            hasher.update(v.to_le_bytes());
        }
        for v in self.eigenvectors.iter() {
            hasher.update(v.to_le_bytes());
        }
        let digest = hasher.finalize();
        digest.iter().map(|b| format!("{b:02x}")).collect()
    }

    /// Rebuild a basis from stored eigenvalues and eigenvectors,
    /// revalidating orthonormality.
    pub fn from_parts(eigenvalues: Array1<f64>, eigenvectors: Array2<f64>) -> Result<Self> {
        let n = eigenvalues.len();
        if eigenvectors.dim() != (n, n) {
            return Err(Error::DimensionMismatch(format!(
                "eigenvector matrix {:?} for {n} eigenvalues",
                eigenvectors.dim()
            )));
        }
        let gram = eigenvectors.t().dot(&eigenvectors);
        for i in 0..n {
            for j in 0..n {
                let want = if i == j { 1.0 } else { 0.0 };
                if (gram[[i, j]] - want).abs() > 1e-8 {
                    return Err(Error::InvalidArgument(
                        "eigenvectors are not orthonormal".into(),
                    ));
                }
            }
        }
        if eigenvalues.windows(2).into_iter().any(|w| w[0] > w[1]) {
            return Err(Error::InvalidArgument(
                "eigenvalues must be ascending".into(),
            ));
        }
        Ok(EigenBasis {
            eigenvalues,
            eigenvectors,
        })
    }
}

/// Eigendecompose a symmetric PSD operator with cyclic Jacobi rotations.
///
/// Eigenvalues within `-1e-9 * lambda_max` of zero are clamped to zero so
/// that responses like `sqrt(lambda)` stay defined; anything more negative
/// fails the PSD contract and is an error.
pub fn eigendecompose(op: &OperatorMatrix, tol: f64) -> Result<EigenBasis> {
    let (values, vectors) = linalg::sym_eigen_jacobi(&op.view(), tol, MAX_JACOBI_SWEEPS)?;
    let n = values.len();
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| values[a].total_cmp(&values[b]).then(a.cmp(&b)));

    let mut eigenvalues = Array1::<f64>::zeros(n);
    let mut eigenvectors = Array2::<f64>::zeros((n, n));
    for (dst, &src) in order.iter().enumerate() {
        eigenvalues[dst] = values[src];
        let mut flip = false;
        let mut best = 0.0f64;
        for i in 0..n {
            let v = vectors[[i, src]];
            if v.abs() > best {
                best = v.abs();
                flip = v < 0.0;
            }
        }
        for i in 0..n {
            let v = vectors[[i, src]];
            eigenvectors[[i, dst]] = if flip { -v } else { v };
        }
    }

    let lambda_max_abs = eigenvalues.iter().fold(0.0f64, |m, v| m.max(v.abs()));
    let floor = -1e-9 * lambda_max_abs;
    for v in eigenvalues.iter_mut() {
        if *v < floor {
            return Err(Error::InvalidArgument(format!(
                "operator is not positive semi-definite: eigenvalue {v}"
            )));
        }
        if *v < 0.0 {
            *v = 0.0;
        }
    }
    Ok(EigenBasis {
        eigenvalues,
        eigenvectors,
    })
}

/// An `N x T` real matrix whose columns are graph signals at successive
/// unit-spaced times.
#[derive(Debug, Clone, PartialEq)]
pub struct TimeVertexSignal {
    values: Array2<f64>,
}

impl TimeVertexSignal {
    pub fn new(values: Array2<f64>) -> Result<Self> {
        if let Some(bad) = values.iter().find(|v| !v.is_finite()) {
            return Err(Error::NonFinite(format!("signal entry {bad}")));
        }
        Ok(TimeVertexSignal { values })
    }

    pub fn vertex_count(&self) -> usize {
        self.values.nrows()
    }

    pub fn time_len(&self) -> usize {
        self.values.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.values
    }

    /// Columns `start..end` as a new signal.
    pub fn slice_cols(&self, start: usize, end: usize) -> TimeVertexSignal {
        TimeVertexSignal {
            values: self
                .values
                .slice(ndarray::s![.., start..end])
                .to_owned(),
        }
    }

    pub fn frobenius_norm(&self) -> f64 {
        linalg::frobenius(&self.values.view())
    }
}

/// Joint spectral coefficients: rows are graph frequencies, columns the
/// angular frequencies `omega_tau = 2 pi tau / T`, `tau = 0..T-1`.
#[derive(Debug, Clone)]
pub struct JointSpectrum {
    coefficients: Array2<Complex64>,
}

impl JointSpectrum {
    pub fn new(coefficients: Array2<Complex64>) -> Self {
        JointSpectrum { coefficients }
    }

    pub fn vertex_count(&self) -> usize {
        self.coefficients.nrows()
    }

    pub fn time_len(&self) -> usize {
        self.coefficients.ncols()
    }

    pub fn coefficients(&self) -> &Array2<Complex64> {
        &self.coefficients
    }

    pub fn angular_frequency(&self, tau: usize) -> f64 {
        angular_frequency(tau, self.time_len())
    }

    /// Eigenvalue `e^{-j omega_tau}` of the unit lag operator. Recorded
    /// for completeness; no computation in this crate consumes it.
    pub fn lag_eigenvalue(&self, tau: usize) -> Complex64 {
        Complex64::from_polar(1.0, -self.angular_frequency(tau))
    }

    pub fn frobenius_norm(&self) -> f64 {
        self.coefficients
            .iter()
            .map(|c| c.norm_sqr())
            .sum::<f64>()
            .sqrt()
    }
}

pub fn angular_frequency(tau: usize, t_len: usize) -> f64 {
    2.0 * std::f64::consts::PI * tau as f64 / t_len as f64
}

/// Unitary DFT matrix `[U_T]_{t,tau} = exp(j omega_tau t) / sqrt(T)`.
pub fn dft_matrix(t_len: usize) -> Array2<Complex64> {
    let scale = 1.0 / (t_len as f64).sqrt();
    Array2::from_shape_fn((t_len, t_len), |(t, tau)| {
        let phase = angular_frequency(tau, t_len) * t as f64;
        Complex64::from_polar(scale, phase)
    })
}

fn check_vertex_dim(basis: &EigenBasis, n: usize) -> Result<()> {
    if basis.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} vertices but signal has {n}",
            basis.dim()
        )));
    }
    Ok(())
}

/// Graph Fourier transform: project every column onto the eigenbasis.
pub fn gft(basis: &EigenBasis, x: &TimeVertexSignal) -> Result<Array2<f64>> {
    check_vertex_dim(basis, x.vertex_count())?;
    Ok(basis.eigenvectors().t().dot(x.values()))
}

/// Inverse graph Fourier transform.
pub fn igft(basis: &EigenBasis, x_hat: &Array2<f64>) -> Result<TimeVertexSignal> {
    check_vertex_dim(basis, x_hat.nrows())?;
    TimeVertexSignal::new(basis.eigenvectors().dot(x_hat))
}

/// Joint Fourier transform: GFT over vertices, unitary DFT over time.
pub fn jft(basis: &EigenBasis, x: &TimeVertexSignal) -> Result<JointSpectrum> {
    check_vertex_dim(basis, x.vertex_count())?;
    let t_len = x.time_len();
    let rotated = basis.eigenvectors().t().dot(x.values());
    let rotated_c = rotated.mapv(|v| Complex64::new(v, 0.0));
    let ut_conj = dft_matrix(t_len).mapv(|c| c.conj());
    Ok(JointSpectrum::new(rotated_c.dot(&ut_conj)))
}

/// Inverse joint Fourier transform; returns the real part, which loses
/// nothing when the spectrum has the conjugate symmetry of a real signal.
pub fn ijft(basis: &EigenBasis, spectrum: &JointSpectrum) -> Result<TimeVertexSignal> {
    check_vertex_dim(basis, spectrum.vertex_count())?;
    let t_len = spectrum.time_len();
    let ut_t = dft_matrix(t_len).reversed_axes();
    let back = spectrum.coefficients().dot(&ut_t);
    let u_c = basis
        .eigenvectors()
        .mapv(|v| Complex64::new(v, 0.0));
    let full = u_c.dot(&back);
    TimeVertexSignal::new(full.mapv(|c| c.re))
}

/// Apply a joint filter `h(lambda, omega)` to a signal: multiply each joint
/// spectral coefficient by the response and transform back.
pub fn apply_joint_filter<F>(
    basis: &EigenBasis,
    response: F,
    x: &TimeVertexSignal,
) -> Result<TimeVertexSignal>
where
    F: Fn(f64, f64) -> f64,
{
    let mut spectrum = jft(basis, x)?;
    let t_len = spectrum.time_len();
    for n in 0..spectrum.vertex_count() {
        let lambda = basis.eigenvalues()[n];
        for tau in 0..t_len {
            let h = response(lambda, angular_frequency(tau, t_len));
            if !h.is_finite() {
                return Err(Error::NonFinite(format!(
                    "filter response {h} at graph frequency {n}, angular frequency index {tau}"
                )));
            }
            spectrum.coefficients[[n, tau]] *= h;
        }
    }
    ijft(basis, &spectrum)
}
