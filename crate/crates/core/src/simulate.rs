//! Synthetic process generators.
//!
//! `generate_jwss` shapes white noise with the square root of a target
//! joint power spectral density, which by construction yields a process
//! that is stationary jointly in time and on the graph. `generate_wave`
//! integrates a damped-free wave recursion per graph frequency under
//! white spectral input; its spectrum couples time and graph frequencies,
//! so it cannot be factored into separate time and graph parts.

use ndarray::Array2;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rand_distr::{Distribution, StandardNormal};

use crate::error::{Error, Result};
use crate::graph::{laplacian, Graph};
use crate::spectral::{self, EigenBasis, TimeVertexSignal, DEFAULT_EIGEN_TOL};

/// Default number of leading wave steps discarded as transient.
pub const DEFAULT_WAVE_BURN_IN: usize = 50;

/// Derive a per-frequency stream seed; splitmix64 keeps streams decoupled
/// regardless of evaluation order.
pub(crate) fn sub_seed(seed: u64, stream: u64) -> u64 {
    let mut z = seed ^ stream.wrapping_mul(0x9E37_79B9_7F4A_7C15);
    z = (z ^ (z >> 30)).wrapping_mul(0xBF58_476D_1CE4_E5B9);
    z = (z ^ (z >> 27)).wrapping_mul(0x94D0_49BB_1331_11EB);
    z ^ (z >> 31)
}

/// Generate a jointly stationary signal with JPSD `h` by filtering seeded
/// white Gaussian noise with `sqrt(h)`.
pub fn generate_jwss<F>(
    basis: &EigenBasis,
    h: F,
    t_len: usize,
    seed: u64,
) -> Result<TimeVertexSignal>
where
    F: Fn(f64, f64) -> f64,
{
    let n = basis.dim();
    if t_len == 0 {
        return Err(Error::InvalidArgument("t_len must be positive".into()));
    }
    // Validate the spectrum on the whole grid before touching the RNG.
    for f in 0..n {
        let lambda = basis.eigenvalues()[f];
        for tau in 0..t_len {
            let omega = spectral::angular_frequency(tau, t_len);
            let v = h(lambda, omega);
            if !v.is_finite() || v < 0.0 {
                return Err(Error::InvalidArgument(format!(
                    "JPSD must be finite and nonnegative, got {v} at graph frequency {f}, \
                     angular frequency index {tau}"
                )));
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let noise = TimeVertexSignal::new(Array2::from_shape_fn((n, t_len), |_| {
        StandardNormal.sample(&mut rng)
    }))?;
    spectral::apply_joint_filter(basis, |l, w| h(l, w).sqrt(), &noise)
}

/// Per-frequency white Gaussian inputs for the wave recursion.
fn wave_noise(seed: u64, freq: u64, len: usize, std: f64) -> Vec<f64> {
    let mut rng = ChaCha8Rng::seed_from_u64(sub_seed(seed, freq));
    (0..len)
        .map(|_| {
            let z: f64 = StandardNormal.sample(&mut rng);
            std * z
        })
        .collect()
}

fn wave_rows(
    basis: &EigenBasis,
    t_len: usize,
    c: f64,
    noise_std: f64,
    burn_in: usize,
    seed: u64,
) -> Array2<f64> {
    let n = basis.dim();
    let total = burn_in + t_len;
    let mut rows = Array2::<f64>::zeros((n, t_len));
    for f in 0..n {
        let theta = c * basis.eigenvalues()[f].sqrt();
        let coeff = 2.0 * theta.cos();
        let eps = wave_noise(seed, f as u64, total, noise_std);
        let mut prev2 = 0.0;
        let mut prev = 0.0;
        for (step, &e) in eps.iter().enumerate() {
            let next = coeff * prev - prev2 + e;
            prev2 = prev;
            prev = next;
            if step >= burn_in {
                rows[[f, step - burn_in]] = next;
            }
        }
    }
    rows
}

/// Simulate `t_len` steps of the graph wave recursion
/// `x^_{t+1}(n) = 2 cos(c sqrt(lambda_n)) x^_t(n) - x^_{t-1}(n) + e_t(n)`
/// in the spectral domain, from zero initial conditions, discarding
/// `burn_in` leading steps. Requires `c * sqrt(lambda_max) < pi` to keep
/// the propagator free of aliasing.
pub fn generate_wave(
    graph: &Graph,
    t_len: usize,
    c: f64,
    noise_std: f64,
    burn_in: usize,
    seed: u64,
) -> Result<TimeVertexSignal> {
    if t_len < 3 {
        return Err(Error::InvalidArgument(format!(
            "t_len = {t_len} must be at least 3"
        )));
    }
    if !(c > 0.0 && noise_std >= 0.0) {
        return Err(Error::InvalidArgument(
            "wave speed must be positive and noise_std nonnegative".into(),
        ));
    }
    let basis = eigendecompose_graph(graph)?;
    let guard = c * basis.largest_eigenvalue().sqrt();
    if guard >= std::f64::consts::PI {
        return Err(Error::InvalidArgument(format!(
            "aliasing guard violated: c * sqrt(lambda_max) = {guard:.4} >= pi; \
             use a wave speed below {:.4}",
            std::f64::consts::PI / basis.largest_eigenvalue().sqrt()
        )));
    }
    let rows = wave_rows(&basis, t_len, c, noise_std, burn_in, seed);
    spectral::igft(&basis, &rows)
}

/// A wave speed that keeps the propagator comfortably inside the
/// aliasing guard for this graph: `2 / sqrt(lambda_max)`.
pub fn default_wave_speed(graph: &Graph) -> Result<f64> {
    let basis = eigendecompose_graph(graph)?;
    let lam = basis.largest_eigenvalue();
    if lam <= 0.0 {
        return Err(Error::InvalidArgument(
            "graph has no positive Laplacian eigenvalue".into(),
        ));
    }
    Ok(2.0 / lam.sqrt())
}

fn eigendecompose_graph(graph: &Graph) -> Result<EigenBasis> {
    spectral::eigendecompose(&laplacian(graph), DEFAULT_EIGEN_TOL)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{random_geometric_graph, OperatorMatrix};
    use crate::joint_causal::{self, SelectionCriterion};
    use crate::spectral::eigendecompose;
    use rand::Rng;

    fn random_basis(n: usize, seed: u64) -> EigenBasis {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Array2::from_shape_fn((n, n), |_| rng.random_range(-1.0..1.0));
        eigendecompose(&OperatorMatrix::new(b.t().dot(&b)).unwrap(), DEFAULT_EIGEN_TOL)
            .unwrap()
    }

    #[test]
    fn unit_jpsd_output_is_empirically_white() {
        let n = 4;
        let t = 32;
        let reals = 50usize;
        let basis = random_basis(n, 1);

        // Pool realizations: spatial covariance over (t, realization)
        // samples, temporal covariance over (vertex, realization) samples.
        let mut spatial = Array2::<f64>::zeros((n, n));
        let mut temporal = Array2::<f64>::zeros((t, t));
        for r in 0..reals {
            let x = generate_jwss(&basis, |_, _| 1.0, t, 100 + r as u64).unwrap();
            let v = x.values();
            spatial = spatial + v.dot(&v.t());
            temporal = temporal + v.t().dot(v);
        }
        spatial.mapv_inplace(|v| v / (reals * t) as f64);
        temporal.mapv_inplace(|v| v / (reals * n) as f64);

        let mass = |m: &Array2<f64>| {
            let mut off = 0.0;
            let mut total = 0.0;
            for i in 0..m.nrows() {
                for j in 0..m.ncols() {
                    let v = m[[i, j]] * m[[i, j]];
                    total += v;
                    if i != j {
                        off += v;
                    }
                }
            }
            off / total
        };
        assert!(mass(&spatial) < 0.15, "spatial off mass {}", mass(&spatial));
        assert!(
            mass(&temporal) < 0.15,
            "temporal off mass {}",
            mass(&temporal)
        );
        // Diagonals near unit variance.
        let mean_diag = spatial.diag().mean().unwrap();
        assert!((mean_diag - 1.0).abs() < 0.2, "mean variance {mean_diag}");
    }

    #[test]
    fn zero_jpsd_gives_zero_signal() {
        let basis = random_basis(3, 2);
        let x = generate_jwss(&basis, |_, _| 0.0, 16, 3).unwrap();
        assert!(x.frobenius_norm() < 1e-12);
    }

    #[test]
    fn jwss_is_seed_deterministic() {
        let basis = random_basis(3, 4);
        let a = generate_jwss(&basis, |l, w| 1.0 + l + w.cos().abs(), 20, 9).unwrap();
        let b = generate_jwss(&basis, |l, w| 1.0 + l + w.cos().abs(), 20, 9).unwrap();
        assert_eq!(a.values(), b.values());
    }

    #[test]
    fn negative_jpsd_is_rejected() {
        let basis = random_basis(3, 5);
        assert!(generate_jwss(&basis, |_, w| w.cos(), 8, 1).is_err());
    }

    /// Replaying the recursion on the rotated output with regenerated
    /// noise must reproduce it to machine precision.
    #[test]
    fn wave_satisfies_scalar_recursion_exactly() {
        let g = random_geometric_graph(8, 3.0, 6).unwrap();
        let basis = eigendecompose_graph(&g).unwrap();
        let c = default_wave_speed(&g).unwrap();
        let t = 64;
        let x = generate_wave(&g, t, c, 1.0, 0, 11).unwrap();
        let rows = spectral::gft(&basis, &x).unwrap();
        let scale = rows.iter().fold(1.0f64, |m, v| m.max(v.abs()));
        for f in 0..8 {
            let theta = c * basis.eigenvalues()[f].sqrt();
            let coeff = 2.0 * theta.cos();
            let eps = wave_noise(11, f as u64, t, 1.0);
            for tt in 2..t {
                let expected = coeff * rows[[f, tt - 1]] - rows[[f, tt - 2]] + eps[tt];
                assert!(
                    (rows[[f, tt]] - expected).abs() < 1e-10 * scale,
                    "frequency {f} step {tt}"
                );
            }
        }
    }

    #[test]
    fn zero_noise_zero_init_is_identically_zero() {
        let g = random_geometric_graph(6, 3.0, 7).unwrap();
        let c = default_wave_speed(&g).unwrap();
        let x = generate_wave(&g, 32, c, 0.0, 10, 12).unwrap();
        assert!(x.frobenius_norm() == 0.0);
    }

    #[test]
    fn wave_at_paper_scale_runs() {
        let g = random_geometric_graph(50, 5.0, 1).unwrap();
        let c = default_wave_speed(&g).unwrap();
        let x = generate_wave(&g, 200, c, 1.0, DEFAULT_WAVE_BURN_IN, 13).unwrap();
        assert_eq!(x.vertex_count(), 50);
        assert_eq!(x.time_len(), 200);
        assert!((4.5..=5.5).contains(&g.average_degree()));
    }

    #[test]
    fn wave_aliasing_guard() {
        let g = random_geometric_graph(10, 3.0, 8).unwrap();
        let basis = eigendecompose_graph(&g).unwrap();
        let too_fast = 1.1 * std::f64::consts::PI / basis.largest_eigenvalue().sqrt();
        let err = generate_wave(&g, 32, too_fast, 1.0, 0, 1).unwrap_err();
        assert!(err.to_string().contains("aliasing"), "{err}");
    }

    #[test]
    fn wave_is_seed_deterministic() {
        let g = random_geometric_graph(10, 3.0, 9).unwrap();
        let c = default_wave_speed(&g).unwrap();
        let a = generate_wave(&g, 40, c, 1.0, 5, 77).unwrap();
        let b = generate_wave(&g, 40, c, 1.0, 5, 77).unwrap();
        assert_eq!(a.values(), b.values());
    }

    /// The wave process is an exact AR(2) per graph frequency; a fitted
    /// decoupled model must recover the propagator coefficients.
    #[test]
    fn wave_fits_ar2_per_frequency() {
        let g = random_geometric_graph(6, 3.0, 10).unwrap();
        let basis = eigendecompose_graph(&g).unwrap();
        let c = default_wave_speed(&g).unwrap();
        let x = generate_wave(&g, 4000, c, 1.0, DEFAULT_WAVE_BURN_IN, 21).unwrap();
        let model =
            joint_causal::fit(&x, &basis, 2, 0, SelectionCriterion::Count(6)).unwrap();
        for (idx, &f) in model.selected().iter().enumerate() {
            let theta = c * basis.eigenvalues()[f].sqrt();
            let a1_true = -2.0 * theta.cos();
            let got = model.models()[idx].ar();
            assert!(
                (got[0] - a1_true).abs() < 0.1,
                "frequency {f}: a1 {} vs {a1_true}",
                got[0]
            );
            assert!(
                (got[1] - 1.0).abs() < 0.1,
                "frequency {f}: a2 {} vs 1",
                got[1]
            );
        }
    }

    /// Residuals of per-frequency fits on jointly stationary data should
    /// decorrelate across graph frequencies.
    #[test]
    fn jwss_fit_residuals_are_spectrally_diagonal() {
        let n = 8;
        let t = 2048;
        let reals = 20;
        let basis = random_basis(n, 30);
        let lam_max = basis.largest_eigenvalue();
        let h = move |l: f64, w: f64| {
            let a = 0.2 + 0.6 * l / lam_max;
            1.0 / ((1.0 - a * w.cos()).powi(2) + (a * w.sin()).powi(2))
        };

        let mut cov = Array2::<f64>::zeros((n, n));
        let mut samples = 0usize;
        for r in 0..reals {
            let x = generate_jwss(&basis, h, t, 400 + r).unwrap();
            let model =
                joint_causal::fit(&x, &basis, 1, 0, SelectionCriterion::Count(n)).unwrap();
            let centered = TimeVertexSignal::new(
                x.values() - &model.mean().view().insert_axis(ndarray::Axis(1)),
            )
            .unwrap();
            let rotated = spectral::gft(&basis, &centered).unwrap();
            let mut resid_rows = Array2::<f64>::zeros((n, t));
            for (idx, &f) in model.selected().iter().enumerate() {
                let series: Vec<f64> = rotated.row(f).to_vec();
                let e = crate::arma::residuals(&model.models()[idx], &series).unwrap();
                for (tt, v) in e.into_iter().enumerate() {
                    resid_rows[[f, tt]] = v;
                }
            }
            // Pool time samples of the rotated residual vectors.
            cov = cov + resid_rows.dot(&resid_rows.t());
            samples += t;
        }
        cov.mapv_inplace(|v| v / samples as f64);

        let mut off = 0.0;
        let mut total = 0.0;
        for i in 0..n {
            for j in 0..n {
                let v = cov[[i, j]] * cov[[i, j]];
                total += v;
                if i != j {
                    off += v;
                }
            }
        }
        assert!(off / total < 0.2, "off-diagonal mass {}", off / total);
    }
}
