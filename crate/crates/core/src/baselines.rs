//! Comparison predictors: per-node causal models that ignore the graph,
//! and the conditional-Gaussian non-causal predictor driven by an
//! estimated joint power spectral density.
//!
//! The non-causal predictor conditions a window of `T_w` samples on its
//! observed prefix. Because the window covariance built from a JPSD is
//! block-diagonal across graph frequencies once rotated by the eigenbasis,
//! the conditional expectation decouples into one small Hermitian solve
//! per frequency; this is numerically identical to assembling the full
//! `(N T_w)^2` covariance and partitioning it, at a fraction of the cost.

use ndarray::{Array1, Array2, Axis};
use num_complex::Complex64;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arma::{self, ArmaModel};
use crate::error::{Error, Result};
use crate::joint_causal::{self, SelectionCriterion};
use crate::linalg;
use crate::spectral::{self, EigenBasis, TimeVertexSignal};

/// Independent per-node ARMA models plus per-node means. Nodes outside
/// `selected` (only possible for low-rank fits) forecast their mean.
#[derive(Debug, Clone)]
pub struct DisjointModel {
    selected: Vec<usize>,
    models: Vec<ArmaModel>,
    means: Array1<f64>,
    p: usize,
    q: usize,
    variance_retained: f64,
}

#[derive(Serialize, Deserialize)]
struct DisjointModelFile {
    p: usize,
    q: usize,
    means: Vec<f64>,
    selected: Vec<usize>,
    models: Vec<ArmaModel>,
    variance_retained: f64,
}

impl DisjointModel {
    pub fn vertex_count(&self) -> usize {
        self.means.len()
    }

    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    pub fn models(&self) -> &[ArmaModel] {
        &self.models
    }

    pub fn means(&self) -> &Array1<f64> {
        &self.means
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    pub fn variance_retained(&self) -> f64 {
        self.variance_retained
    }

    pub fn min_history(&self) -> usize {
        self.p.max(self.q) + 1
    }

    /// Forecast `k` columns ahead; each modeled node runs its own scalar
    /// recursion on its demeaned history.
    pub fn predict(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>> {
        let n = self.vertex_count();
        if history.vertex_count() != n {
            return Err(Error::DimensionMismatch(format!(
                "history has {} vertices, model has {n}",
                history.vertex_count()
            )));
        }
        if k < 1 {
            return Err(Error::InvalidArgument("forecast horizon must be >= 1".into()));
        }
        if history.time_len() < self.min_history() {
            return Err(Error::InsufficientData(format!(
                "history of {} columns, need at least {}",
                history.time_len(),
                self.min_history()
            )));
        }
        let mut out = Array2::<f64>::zeros((n, k));
        for i in 0..n {
            for step in 0..k {
                out[[i, step]] = self.means[i];
            }
        }
        for (idx, &node) in self.selected.iter().enumerate() {
            let series: Vec<f64> = history
                .values()
                .row(node)
                .iter()
                .map(|v| v - self.means[node])
                .collect();
            let model = &self.models[idx];
            let resid =
                arma::residuals(model, &series).map_err(|e| Error::at_frequency(node, e))?;
            let path = arma::k_step_forecast(model, &series, &resid, k)
                .map_err(|e| Error::at_frequency(node, e))?;
            for (step, value) in path.into_iter().enumerate() {
                out[[node, step]] += value;
            }
        }
        Ok(out)
    }

    pub fn to_json(&self) -> Result<String> {
        let file = DisjointModelFile {
            p: self.p,
            q: self.q,
            means: self.means.to_vec(),
            selected: self.selected.clone(),
            models: self.models.clone(),
            variance_retained: self.variance_retained,
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    pub fn from_json(text: &str) -> Result<Self> {
        let file: DisjointModelFile = serde_json::from_str(text)?;
        if file.models.len() != file.selected.len() {
            return Err(Error::Parse(format!(
                "{} models for {} selected nodes",
                file.models.len(),
                file.selected.len()
            )));
        }
        Ok(DisjointModel {
            selected: file.selected,
            models: file.models,
            means: Array1::from_vec(file.means),
            p: file.p,
            q: file.q,
            variance_retained: file.variance_retained,
        })
    }
}

fn fit_disjoint_impl(
    x_train: &TimeVertexSignal,
    p: usize,
    q: usize,
    selection: Option<SelectionCriterion>,
) -> Result<DisjointModel> {
    let n = x_train.vertex_count();
    if n == 0 {
        return Err(Error::InvalidArgument("empty signal".into()));
    }
    let t_len = x_train.time_len();
    if t_len < 10 * (p + q + 1) {
        return Err(Error::InsufficientData(format!(
            "training length {t_len} too short for ARMA({p},{q}); need {}",
            10 * (p + q + 1)
        )));
    }
    let means = x_train
        .values()
        .mean_axis(Axis(1))
        .expect("at least one column");
    let centered = x_train.values() - &means.view().insert_axis(Axis(1));

    let spectrum = joint_causal::energy_from_rows(&centered);
    let (selected, variance_retained) = match selection {
        None => ((0..n).collect::<Vec<_>>(), 1.0),
        Some(criterion) => {
            let selected = joint_causal::select_top_k(&spectrum, criterion)?;
            let total = spectrum.total();
            let retained = if total > 0.0 {
                selected
                    .iter()
                    .map(|&i| spectrum.values()[i])
                    .sum::<f64>()
                    / total
            } else {
                1.0
            };
            (selected, retained)
        }
    };

    // Collect everything before surfacing failures so the reported error
    // is the lowest-index one regardless of scheduling.
    let fits: Vec<Result<ArmaModel>> = selected
        .par_iter()
        .map(|&node| {
            let series: Vec<f64> = centered.row(node).to_vec();
            arma::fit_arma(&series, p, q).map_err(|e| Error::at_frequency(node, e))
        })
        .collect();
    let models: Vec<ArmaModel> = fits.into_iter().collect::<Result<Vec<_>>>()?;

    Ok(DisjointModel {
        selected,
        models,
        means,
        p,
        q,
        variance_retained,
    })
}

/// Fit one ARMA(P,Q) per node on its demeaned series, graph ignored.
pub fn fit_disjoint(x_train: &TimeVertexSignal, p: usize, q: usize) -> Result<DisjointModel> {
    fit_disjoint_impl(x_train, p, q, None)
}

/// Low-rank variant: model only the nodes with the highest training
/// energy in the native (vertex) domain; the rest forecast their mean.
pub fn fit_disjoint_lowrank(
    x_train: &TimeVertexSignal,
    p: usize,
    q: usize,
    criterion: SelectionCriterion,
) -> Result<DisjointModel> {
    fit_disjoint_impl(x_train, p, q, Some(criterion))
}

/// A joint power spectral density sampled on the `(lambda_n, omega_tau)`
/// grid of an analysis window of length `T_w`.
#[derive(Debug, Clone)]
pub struct Jpsd {
    h: Array2<f64>,
}

impl Jpsd {
    pub fn new(h: Array2<f64>) -> Result<Self> {
        if let Some(bad) = h.iter().find(|v| !v.is_finite() || **v < 0.0) {
            return Err(Error::InvalidArgument(format!(
                "JPSD values must be finite and nonnegative, found {bad}"
            )));
        }
        Ok(Jpsd { h })
    }

    /// Sample a response function on the grid of a given basis and window.
    pub fn from_function<F>(basis: &EigenBasis, window_len: usize, response: F) -> Result<Self>
    where
        F: Fn(f64, f64) -> f64,
    {
        let h = Array2::from_shape_fn((basis.dim(), window_len), |(n, tau)| {
            response(
                basis.eigenvalues()[n],
                spectral::angular_frequency(tau, window_len),
            )
        });
        Jpsd::new(h)
    }

    pub fn vertex_count(&self) -> usize {
        self.h.nrows()
    }

    pub fn window_len(&self) -> usize {
        self.h.ncols()
    }

    pub fn values(&self) -> &Array2<f64> {
        &self.h
    }
}

/// Bartlett estimate of the JPSD: average of squared joint-spectrum
/// magnitudes over non-overlapping windows of length `window_len`.
/// Requires at least two full windows.
pub fn estimate_jpsd(
    x_train: &TimeVertexSignal,
    basis: &EigenBasis,
    window_len: usize,
) -> Result<Jpsd> {
    if window_len == 0 {
        return Err(Error::InvalidArgument("window length must be positive".into()));
    }
    let windows = x_train.time_len() / window_len;
    if windows < 2 {
        return Err(Error::InsufficientData(format!(
            "too few windows: {} columns give {windows} windows of length {window_len}, need 2",
            x_train.time_len()
        )));
    }
    let n = x_train.vertex_count();
    let mut acc = Array2::<f64>::zeros((n, window_len));
    for w in 0..windows {
        let segment = x_train.slice_cols(w * window_len, (w + 1) * window_len);
        let spec = spectral::jft(basis, &segment)?;
        for i in 0..n {
            for tau in 0..window_len {
                acc[[i, tau]] += spec.coefficients()[[i, tau]].norm_sqr();
            }
        }
    }
    acc.mapv_inplace(|v| v / windows as f64);
    Jpsd::new(acc)
}

/// Oversampling factor used when turning a JPSD grid into window
/// autocovariances. The analysis window is a cut from a much longer
/// stationary record, so its covariance is the Toeplitz restriction of a
/// finer circulant; resolving the spectrum on `OVERSAMPLE * T_w` points
/// keeps the unknown block from wrapping around onto the oldest samples.
const SPECTRUM_OVERSAMPLE: usize = 8;

/// Periodic linear interpolation of one spectral row onto a finer grid.
pub(crate) fn oversample_spectrum_row(row: &[f64], fine_len: usize) -> Vec<f64> {
    let coarse = row.len();
    (0..fine_len)
        .map(|m| {
            let pos = m as f64 * coarse as f64 / fine_len as f64;
            let lo = pos.floor() as usize % coarse;
            let hi = (lo + 1) % coarse;
            let frac = pos - pos.floor();
            row[lo] * (1.0 - frac) + row[hi] * frac
        })
        .collect()
}

/// Window autocovariances `gamma(0..T_w-1)` of one graph frequency.
pub(crate) fn window_autocovariance(row: &[f64], t_w: usize) -> Vec<Complex64> {
    let fine_len = SPECTRUM_OVERSAMPLE * t_w;
    let fine = oversample_spectrum_row(row, fine_len);
    (0..t_w)
        .map(|d| {
            let mut acc = Complex64::new(0.0, 0.0);
            for (m, &h) in fine.iter().enumerate() {
                let phase = spectral::angular_frequency(m, fine_len) * d as f64;
                acc += Complex64::from_polar(h, phase);
            }
            acc / fine_len as f64
        })
        .collect()
}

/// Per-frequency linear predictor weights `W_n = C_fp (C_pp + dI)^{-1}`
/// of the window-conditional Gaussian estimator for horizon `k`.
fn noncausal_weights(
    jpsd: &Jpsd,
    basis: &EigenBasis,
    k: usize,
) -> Result<Vec<Array2<Complex64>>> {
    let n = jpsd.vertex_count();
    let t_w = jpsd.window_len();
    if basis.dim() != n {
        return Err(Error::DimensionMismatch(format!(
            "basis has {} vertices, JPSD has {n}",
            basis.dim()
        )));
    }
    if k >= t_w {
        return Err(Error::InvalidArgument(format!(
            "horizon {k} must be smaller than the window length {t_w}"
        )));
    }
    let m = t_w - k;

    let autocov: Vec<Vec<Complex64>> = (0..n)
        .map(|f| window_autocovariance(jpsd.h.row(f).as_slice().unwrap(), t_w))
        .collect();

    // Global Tikhonov level from the trace of the past block.
    let trace_pp: f64 = autocov.iter().map(|gamma| gamma[0].re * m as f64).sum();
    let delta = 1e-6 * trace_pp / (n * t_w) as f64;

    let mut weights = Vec::with_capacity(n);
    for gamma in autocov.iter() {
        // Toeplitz window covariance: C[t, s] = gamma(t - s).
        let cov = |t: usize, s: usize| {
            if t >= s {
                gamma[t - s]
            } else {
                gamma[s - t].conj()
            }
        };
        let mut cpp = Array2::<Complex64>::zeros((m, m));
        for t in 0..m {
            for s in 0..m {
                cpp[[t, s]] = cov(t, s);
            }
            cpp[[t, t]] += delta;
        }
        // rhs = C_fp^H (m x k), so W = solve(C_pp, rhs)^H.
        let mut rhs = Array2::<Complex64>::zeros((m, k));
        for s in 0..m {
            for (col, t) in (m..t_w).enumerate() {
                rhs[[s, col]] = cov(t, s).conj();
            }
        }
        let z = linalg::solve_hermitian(&cpp.view(), &rhs.view()).map_err(|e| match e {
            Error::Singular(msg) => Error::Singular(format!(
                "window covariance singular despite regularization: {msg}"
            )),
            other => other,
        })?;
        let mut w = Array2::<Complex64>::zeros((k, m));
        for s in 0..m {
            for col in 0..k {
                w[[col, s]] = z[[s, col]].conj();
            }
        }
        weights.push(w);
    }
    Ok(weights)
}

fn apply_noncausal_weights(
    weights: &[Array2<Complex64>],
    basis: &EigenBasis,
    observed: &TimeVertexSignal,
    k: usize,
) -> Result<Array2<f64>> {
    let n = basis.dim();
    let m = weights.first().map_or(0, |w| w.ncols());
    if observed.vertex_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "observed window has {} vertices, basis has {n}",
            observed.vertex_count()
        )));
    }
    if observed.time_len() != m {
        return Err(Error::DimensionMismatch(format!(
            "observed window has {} columns, predictor expects {m}",
            observed.time_len()
        )));
    }
    let rotated = basis.eigenvectors().t().dot(observed.values());
    let mut future_hat = Array2::<Complex64>::zeros((n, k));
    for f in 0..n {
        for step in 0..k {
            let mut acc = Complex64::new(0.0, 0.0);
            for s in 0..m {
                acc += weights[f][[step, s]] * rotated[[f, s]];
            }
            future_hat[[f, step]] = acc;
        }
    }
    // Rotate back; the basis is real so only the real part survives.
    let mut out = Array2::<f64>::zeros((n, k));
    for i in 0..n {
        for step in 0..k {
            let mut acc = 0.0;
            for f in 0..n {
                acc += basis.eigenvectors()[[i, f]] * future_hat[[f, step]].re;
            }
            out[[i, step]] = acc;
        }
    }
    Ok(out)
}

/// Minimum mean-squared-error estimate of the last `k` columns of an
/// analysis window given the first `T_w - k`, under the window covariance
/// induced by `jpsd`. `observed` holds the known `T_w - k` columns;
/// `k = 0` returns an empty matrix.
pub fn predict_noncausal(
    jpsd: &Jpsd,
    basis: &EigenBasis,
    observed: &TimeVertexSignal,
    k: usize,
) -> Result<Array2<f64>> {
    if k == 0 {
        return Ok(Array2::zeros((jpsd.vertex_count(), 0)));
    }
    let weights = noncausal_weights(jpsd, basis, k)?;
    apply_noncausal_weights(&weights, basis, observed, k)
}

/// A ready-to-run non-causal predictor: an estimated (or supplied) JPSD,
/// the basis, the training mean, and precomputed conditional weights for
/// every horizon up to `k_max`.
#[derive(Debug, Clone)]
pub struct NoncausalPredictor {
    jpsd: Jpsd,
    basis: EigenBasis,
    mean: Array1<f64>,
    weights_by_horizon: Vec<Vec<Array2<Complex64>>>,
}

impl NoncausalPredictor {
    pub fn new(jpsd: Jpsd, basis: EigenBasis, mean: Array1<f64>, k_max: usize) -> Result<Self> {
        if mean.len() != basis.dim() {
            return Err(Error::DimensionMismatch(format!(
                "mean has {} entries for {} vertices",
                mean.len(),
                basis.dim()
            )));
        }
        if k_max == 0 || k_max >= jpsd.window_len() {
            return Err(Error::InvalidArgument(format!(
                "k_max = {k_max} must be in 1..window length {}",
                jpsd.window_len()
            )));
        }
        let weights_by_horizon = (1..=k_max)
            .into_par_iter()
            .map(|k| noncausal_weights(&jpsd, &basis, k))
            .collect::<Result<Vec<_>>>()?;
        Ok(NoncausalPredictor {
            jpsd,
            basis,
            mean,
            weights_by_horizon,
        })
    }

    /// Estimate the JPSD from a demeaned training signal and build the
    /// predictor.
    pub fn fit(
        x_train: &TimeVertexSignal,
        basis: &EigenBasis,
        window_len: usize,
        k_max: usize,
    ) -> Result<Self> {
        let mean = x_train
            .values()
            .mean_axis(Axis(1))
            .expect("at least one column");
        let centered =
            TimeVertexSignal::new(x_train.values() - &mean.view().insert_axis(Axis(1)))?;
        let jpsd = estimate_jpsd(&centered, basis, window_len)?;
        NoncausalPredictor::new(jpsd, basis.clone(), mean, k_max)
    }

    pub fn jpsd(&self) -> &Jpsd {
        &self.jpsd
    }

    pub fn k_max(&self) -> usize {
        self.weights_by_horizon.len()
    }

    /// History columns needed before a horizon-`k` forecast.
    pub fn min_history(&self, k: usize) -> usize {
        self.jpsd.window_len().saturating_sub(k)
    }

    /// Forecast the next `k` columns from the trailing window of history.
    pub fn forecast(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>> {
        if k == 0 || k > self.k_max() {
            return Err(Error::InvalidArgument(format!(
                "horizon {k} outside prepared range 1..={}",
                self.k_max()
            )));
        }
        let m = self.jpsd.window_len() - k;
        if history.time_len() < m {
            return Err(Error::InsufficientData(format!(
                "history of {} columns, need at least {m}",
                history.time_len()
            )));
        }
        let tail = history.slice_cols(history.time_len() - m, history.time_len());
        let centered =
            TimeVertexSignal::new(tail.values() - &self.mean.view().insert_axis(Axis(1)))?;
        let raw = apply_noncausal_weights(
            &self.weights_by_horizon[k - 1],
            &self.basis,
            &centered,
            k,
        )?;
        Ok(raw + self.mean.view().insert_axis(Axis(1)))
    }
}
