//! Scalar ARMA(P,Q) estimation and recursive prediction.
//!
//! Coefficients follow the convention
//!
//! ```text
//! sum_{p=0}^P a_p x_{t-p} = sum_{q=0}^Q b_q e_{t-q},    a_0 = b_0 = 1,
//! ```
//!
//! so the one-step predictor is `x~_t = sum_q b_q e_{t-q} - sum_p a_p
//! x_{t-p}`. Estimation runs a Hannan-Rissanen initialization (long
//! autoregression to proxy the innovations, then least squares on lagged
//! observations and proxy innovations) followed by a damped Gauss-Newton
//! refinement of the one-step prediction error. Pre-sample values are
//! treated as zero throughout (conditional least squares). The moving
//! average polynomial is kept invertible by reflecting offending roots
//! outside the unit circle.

use num_complex::Complex64;
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::linalg;

const GN_MAX_ITERATIONS: usize = 50;
const GN_MAX_HALVINGS: usize = 10;
const LONG_AR_CAP: usize = 20;
/// Reflected roots are pushed to at least this modulus.
const ROOT_MARGIN: f64 = 1.001;

/// A scalar ARMA model: AR coefficients `a_1..a_P`, MA coefficients
/// `b_1..b_Q`, and the innovation variance (`a_0 = b_0 = 1` implicit).
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(try_from = "ArmaModelDto", into = "ArmaModelDto")]
pub struct ArmaModel {
    ar: Vec<f64>,
    ma: Vec<f64>,
    innovation_variance: f64,
    ar_fallback: bool,
}

#[derive(Serialize, Deserialize)]
struct ArmaModelDto {
    p: usize,
    q: usize,
    ar: Vec<f64>,
    ma: Vec<f64>,
    var: f64,
    #[serde(default)]
    ar_fallback: bool,
}

impl From<ArmaModel> for ArmaModelDto {
    fn from(m: ArmaModel) -> Self {
        ArmaModelDto {
            p: m.ar.len(),
            q: m.ma.len(),
            ar: m.ar,
            ma: m.ma,
            var: m.innovation_variance,
            ar_fallback: m.ar_fallback,
        }
    }
}

impl TryFrom<ArmaModelDto> for ArmaModel {
    type Error = Error;

    fn try_from(dto: ArmaModelDto) -> Result<Self> {
        if dto.p != dto.ar.len() || dto.q != dto.ma.len() {
            return Err(Error::Parse(format!(
                "order fields (P={}, Q={}) disagree with coefficient lengths ({}, {})",
                dto.p,
                dto.q,
                dto.ar.len(),
                dto.ma.len()
            )));
        }
        let mut m = ArmaModel::new(dto.ar, dto.ma, dto.var)?;
        m.ar_fallback = dto.ar_fallback;
        Ok(m)
    }
}

impl ArmaModel {
    /// Validate and build a model. The MA polynomial `1 + sum b_q z^q`
    /// must have all roots strictly outside the unit circle.
    pub fn new(ar: Vec<f64>, ma: Vec<f64>, innovation_variance: f64) -> Result<Self> {
        if ar.iter().chain(ma.iter()).any(|v| !v.is_finite()) {
            return Err(Error::NonFinite("ARMA coefficient".into()));
        }
        if !(innovation_variance >= 0.0 && innovation_variance.is_finite()) {
            return Err(Error::InvalidArgument(format!(
                "innovation variance {innovation_variance} must be finite and nonnegative"
            )));
        }
        for root in linalg::poly_roots_unit_constant(&ma)? {
            if root.norm() <= 1.0 {
                return Err(Error::InvalidArgument(format!(
                    "MA polynomial not invertible: root with modulus {:.6}",
                    root.norm()
                )));
            }
        }
        Ok(ArmaModel {
            ar,
            ma,
            innovation_variance,
            ar_fallback: false,
        })
    }

    pub fn ar_order(&self) -> usize {
        self.ar.len()
    }

    pub fn ma_order(&self) -> usize {
        self.ma.len()
    }

    /// AR coefficients `a_1..a_P`.
    pub fn ar(&self) -> &[f64] {
        &self.ar
    }

    /// MA coefficients `b_1..b_Q`.
    pub fn ma(&self) -> &[f64] {
        &self.ma
    }

    pub fn innovation_variance(&self) -> f64 {
        self.innovation_variance
    }

    /// True when Gauss-Newton diverged and a pure AR fit was used instead.
    pub fn is_ar_fallback(&self) -> bool {
        self.ar_fallback
    }

    fn max_lag(&self) -> usize {
        self.ar.len().max(self.ma.len())
    }
}

/// One-step residual recursion for arbitrary coefficient vectors.
/// Pre-sample observations and residuals are zero.
fn residuals_raw(ar: &[f64], ma: &[f64], series: &[f64]) -> Vec<f64> {
    let mut e = vec![0.0; series.len()];
    for t in 0..series.len() {
        let mut pred = 0.0;
        for (idx, &b) in ma.iter().enumerate() {
            let lag = idx + 1;
            if t >= lag {
                pred += b * e[t - lag];
            }
        }
        for (idx, &a) in ar.iter().enumerate() {
            let lag = idx + 1;
            if t >= lag {
                pred -= a * series[t - lag];
            }
        }
        e[t] = series[t] - pred;
    }
    e
}

/// One-step prediction errors `e_t = x_t - x~_t` over the whole series,
/// with unavailable history treated as zero.
pub fn residuals(model: &ArmaModel, series: &[f64]) -> Result<Vec<f64>> {
    if series.len() < model.max_lag() + 1 {
        return Err(Error::InsufficientData(format!(
            "series of length {} is shorter than max(P, Q) + 1 = {}",
            series.len(),
            model.max_lag() + 1
        )));
    }
    Ok(residuals_raw(&model.ar, &model.ma, series))
}

/// Predict the next value from trailing history and residuals.
/// `history` and `past_residuals` end at time `t - 1`.
pub fn one_step_predict(
    model: &ArmaModel,
    history: &[f64],
    past_residuals: &[f64],
) -> Result<f64> {
    if history.len() < model.ar.len() || past_residuals.len() < model.ma.len() {
        return Err(Error::InsufficientData(format!(
            "need {} history values and {} residuals, got {} and {}",
            model.ar.len(),
            model.ma.len(),
            history.len(),
            past_residuals.len()
        )));
    }
    let mut pred = 0.0;
    for (idx, &b) in model.ma.iter().enumerate() {
        pred += b * past_residuals[past_residuals.len() - 1 - idx];
    }
    for (idx, &a) in model.ar.iter().enumerate() {
        pred -= a * history[history.len() - 1 - idx];
    }
    Ok(pred)
}

/// Iterated `k`-step forecast: predictions are fed back as
/// pseudo-observations and future innovations are set to their mean, zero.
pub fn k_step_forecast(
    model: &ArmaModel,
    history: &[f64],
    past_residuals: &[f64],
    k: usize,
) -> Result<Vec<f64>> {
    if k < 1 {
        return Err(Error::InvalidArgument("forecast horizon must be >= 1".into()));
    }
    let mut hist = history.to_vec();
    let mut resid = past_residuals.to_vec();
    let mut out = Vec::with_capacity(k);
    for _ in 0..k {
        let next = one_step_predict(model, &hist, &resid)?;
        out.push(next);
        hist.push(next);
        resid.push(0.0);
    }
    Ok(out)
}

/// Reflect MA roots on or inside the unit circle to `1 / conj(root)` and
/// rebuild the coefficients; returns the (possibly unchanged) vector.
fn enforce_invertibility(ma: &[f64]) -> Result<Vec<f64>> {
    if ma.iter().all(|&b| b == 0.0) {
        return Ok(ma.to_vec());
    }
    let mut roots = linalg::poly_roots_unit_constant(ma)?;
    let mut changed = false;
    for r in roots.iter_mut() {
        let m = r.norm();
        if m <= 1.0 {
            *r = Complex64::new(1.0, 0.0) / r.conj();
            changed = true;
        }
        if r.norm() < ROOT_MARGIN {
            *r *= ROOT_MARGIN / r.norm();
            changed = true;
        }
    }
    if !changed {
        return Ok(ma.to_vec());
    }
    // Expand prod (1 - z / r_i); conjugate pairs keep coefficients real.
    roots.sort_by(|a, b| a.re.total_cmp(&b.re).then(a.im.total_cmp(&b.im)));
    let mut poly = vec![Complex64::new(1.0, 0.0)];
    for r in &roots {
        let inv = Complex64::new(1.0, 0.0) / r;
        let mut next = vec![Complex64::new(0.0, 0.0); poly.len() + 1];
        for (kk, &c) in poly.iter().enumerate() {
            next[kk] += c;
            next[kk + 1] -= c * inv;
        }
        poly = next;
    }
    let mut out: Vec<f64> = poly[1..].iter().map(|c| c.re).collect();
    out.resize(ma.len(), 0.0);
    Ok(out)
}

/// Conditional residual recursion used by the fit objective: the first
/// `P` observations are conditioned on (their residuals are zero), so the
/// boundary cannot dominate the loss for strongly trending series.
fn residuals_conditioned(ar: &[f64], ma: &[f64], series: &[f64]) -> Vec<f64> {
    let p = ar.len();
    let mut e = vec![0.0; series.len()];
    for t in p..series.len() {
        let mut pred = 0.0;
        for (idx, &b) in ma.iter().enumerate() {
            let lag = idx + 1;
            if t >= lag {
                pred += b * e[t - lag];
            }
        }
        for (idx, &a) in ar.iter().enumerate() {
            pred -= a * series[t - idx - 1];
        }
        e[t] = series[t] - pred;
    }
    e
}

/// Conditional sum of squared residuals; `None` signals numerical blow-up.
fn css_loss(ar: &[f64], ma: &[f64], series: &[f64]) -> Option<(Vec<f64>, f64)> {
    let e = residuals_conditioned(ar, ma, series);
    let mut loss = 0.0;
    for &v in &e {
        if !v.is_finite() || v.abs() > 1e150 {
            return None;
        }
        loss += v * v;
    }
    loss.is_finite().then_some((e, loss))
}

fn ols_ar_fit(series: &[f64], p: usize) -> Result<Vec<f64>> {
    if p == 0 {
        return Ok(Vec::new());
    }
    let t_len = series.len();
    let rows = t_len - p;
    let mut design = ndarray::Array2::<f64>::zeros((rows, p));
    let mut rhs = ndarray::Array1::<f64>::zeros(rows);
    for (row, t) in (p..t_len).enumerate() {
        for lag in 1..=p {
            design[[row, lag - 1]] = series[t - lag];
        }
        rhs[row] = series[t];
    }
    let phi = linalg::lstsq(&design.view(), &rhs.view())?;
    // x_t = sum phi_i x_{t-i} + e_t  <=>  a_i = -phi_i.
    Ok(phi.iter().map(|&v| -v).collect())
}

fn hannan_rissanen_init(series: &[f64], p: usize, q: usize) -> Result<(Vec<f64>, Vec<f64>)> {
    let t_len = series.len();
    if q == 0 {
        return Ok((ols_ar_fit(series, p)?, Vec::new()));
    }
    let long_order = (t_len / 10).clamp(1, LONG_AR_CAP);
    let long_ar = ols_ar_fit(series, long_order)?;
    let mut proxy = vec![0.0; t_len];
    for t in long_order..t_len {
        let mut pred = 0.0;
        for (idx, &a) in long_ar.iter().enumerate() {
            pred -= a * series[t - idx - 1];
        }
        proxy[t] = series[t] - pred;
    }

    // Regress x_t on its own lags and proxy-innovation lags, starting
    // late enough that no padded proxy values enter the design.
    let start = (long_order + q).max(p);
    let rows = t_len.saturating_sub(start);
    if rows < p + q + 1 {
        return Err(Error::InsufficientData(format!(
            "only {rows} usable rows for Hannan-Rissanen regression"
        )));
    }
    let mut design = ndarray::Array2::<f64>::zeros((rows, p + q));
    let mut rhs = ndarray::Array1::<f64>::zeros(rows);
    for (row, t) in (start..t_len).enumerate() {
        for lag in 1..=p {
            design[[row, lag - 1]] = series[t - lag];
        }
        for lag in 1..=q {
            design[[row, p + lag - 1]] = proxy[t - lag];
        }
        rhs[row] = series[t];
    }
    let beta = linalg::lstsq(&design.view(), &rhs.view())?;
    let ar: Vec<f64> = beta.iter().take(p).map(|&v| -v).collect();
    let ma: Vec<f64> = beta.iter().skip(p).copied().collect();
    Ok((ar, enforce_invertibility(&ma)?))
}

/// Jacobian of the residual sequence with respect to `[ar..., ma...]`.
fn residual_jacobian(ar: &[f64], ma: &[f64], series: &[f64], e: &[f64]) -> ndarray::Array2<f64> {
    let t_len = series.len();
    let p = ar.len();
    let q = ma.len();
    let mut jac = ndarray::Array2::<f64>::zeros((t_len, p + q));
    // de_t/da_i = x_{t-i} - sum_j b_j de_{t-j}/da_i
    // de_t/db_j = -e_{t-j} - sum_j' b_j' de_{t-j'}/db_j
    // Rows below P stay zero to match the conditioned residuals.
    for col in 0..p + q {
        for t in p..t_len {
            let mut g = 0.0;
            if col < p {
                let lag = col + 1;
                if t >= lag {
                    g = series[t - lag];
                }
            } else {
                let lag = col - p + 1;
                if t >= lag {
                    g = -e[t - lag];
                }
            }
            for (idx, &b) in ma.iter().enumerate() {
                let lag = idx + 1;
                if t >= lag {
                    g -= b * jac[[t - lag, col]];
                }
            }
            jac[[t, col]] = g;
        }
    }
    jac
}

fn gauss_newton_refine(
    series: &[f64],
    mut ar: Vec<f64>,
    mut ma: Vec<f64>,
) -> Option<(Vec<f64>, Vec<f64>)> {
    let p = ar.len();
    let (mut e, mut loss) = css_loss(&ar, &ma, series)?;
    for _ in 0..GN_MAX_ITERATIONS {
        let jac = residual_jacobian(&ar, &ma, series, &e);
        let neg_e = ndarray::Array1::from_iter(e.iter().map(|v| -v));
        let step = linalg::lstsq(&jac.view(), &neg_e.view())
            .ok()
            .filter(|s| s.iter().all(|v| v.is_finite()))
            .or_else(|| {
                // Unusable GN system: take a plain unit gradient step.
                let grad = jac.t().dot(&neg_e);
                let norm = grad.iter().map(|v| v * v).sum::<f64>().sqrt();
                (norm > 0.0).then(|| grad.mapv(|v| v / norm))
            })?;

        let mut accepted = false;
        let mut alpha = 1.0;
        for _ in 0..=GN_MAX_HALVINGS {
            let cand_ar: Vec<f64> = ar
                .iter()
                .enumerate()
                .map(|(i, &v)| v + alpha * step[i])
                .collect();
            let cand_ma: Vec<f64> = ma
                .iter()
                .enumerate()
                .map(|(j, &v)| v + alpha * step[p + j])
                .collect();
            if let Some((cand_e, cand_loss)) = css_loss(&cand_ar, &cand_ma, series) {
                if cand_loss < loss {
                    let improvement = loss - cand_loss;
                    ar = cand_ar;
                    ma = cand_ma;
                    e = cand_e;
                    loss = cand_loss;
                    accepted = true;
                    if improvement <= 1e-12 * (1.0 + loss) {
                        return Some((ar, ma));
                    }
                    break;
                }
            }
            alpha *= 0.5;
        }
        if !accepted {
            break; // local minimum within step resolution
        }
    }
    Some((ar, ma))
}

/// Fit an ARMA(P,Q) model to a demeaned series by conditional least squares.
///
/// Requires `T >= 10 (P + Q + 1)`. If the Gauss-Newton refinement
/// diverges, the fit falls back to a pure AR(P) least-squares model with
/// zero MA coefficients, flagged via [`ArmaModel::is_ar_fallback`].
pub fn fit_arma(series: &[f64], p: usize, q: usize) -> Result<ArmaModel> {
    let t_len = series.len();
    if t_len < 10 * (p + q + 1) {
        return Err(Error::InsufficientData(format!(
            "series of length {t_len} too short for ARMA({p},{q}); need {}",
            10 * (p + q + 1)
        )));
    }
    if series.iter().any(|v| !v.is_finite()) {
        return Err(Error::NonFinite("series entry".into()));
    }
    if p == 0 && q == 0 {
        let var = series.iter().map(|v| v * v).sum::<f64>() / t_len as f64;
        return ArmaModel::new(Vec::new(), Vec::new(), var);
    }

    let refined = hannan_rissanen_init(series, p, q)
        .ok()
        .and_then(|(ar0, ma0)| gauss_newton_refine(series, ar0, ma0));

    let (ar, ma, fallback) = match refined {
        Some((ar, ma)) => (ar, enforce_invertibility(&ma)?, false),
        None => (ols_ar_fit(series, p)?, vec![0.0; q], true),
    };

    let e = residuals_conditioned(&ar, &ma, series);
    let var = e[p..].iter().map(|v| v * v).sum::<f64>() / (t_len - p) as f64;
    if !var.is_finite() {
        // Even the fallback blew up; refuse rather than return garbage.
        return Err(Error::Convergence(
            "ARMA fit produced non-finite residual variance".into(),
        ));
    }
    let mut model = ArmaModel::new(ar, ma, var)?;
    model.ar_fallback = fallback;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn white_noise(t_len: usize, seed: u64) -> Vec<f64> {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        (0..t_len)
            .map(|_| StandardNormal.sample(&mut rng))
            .collect()
    }

    /// Generate from the model recursion with zero pre-sample values,
    /// returning both the series and the innovations that drove it.
    fn generate(ar: &[f64], ma: &[f64], t_len: usize, seed: u64) -> (Vec<f64>, Vec<f64>) {
        let eps = white_noise(t_len, seed);
        let mut x = vec![0.0; t_len];
        for t in 0..t_len {
            let mut v = eps[t];
            for (idx, &b) in ma.iter().enumerate() {
                if t > idx {
                    v += b * eps[t - idx - 1];
                }
            }
            for (idx, &a) in ar.iter().enumerate() {
                if t > idx {
                    v -= a * x[t - idx - 1];
                }
            }
            x[t] = v;
        }
        (x, eps)
    }

    #[test]
    fn fit_recovers_ar1_coefficient() {
        // x_t = 0.9 x_{t-1} + eps  <=>  a_1 = -0.9
        let (x, _) = generate(&[-0.9], &[], 2000, 3);
        let m = fit_arma(&x, 1, 0).unwrap();
        assert!(
            (-0.95..=-0.85).contains(&m.ar()[0]),
            "a1 = {}",
            m.ar()[0]
        );
        assert!(!m.is_ar_fallback());
    }

    #[test]
    fn fit_white_noise_variance() {
        let x = white_noise(2000, 5);
        let mean = x.iter().sum::<f64>() / x.len() as f64;
        let centered: Vec<f64> = x.iter().map(|v| v - mean).collect();
        let m = fit_arma(&centered, 0, 0).unwrap();
        let sample_var =
            centered.iter().map(|v| v * v).sum::<f64>() / centered.len() as f64;
        assert!((m.innovation_variance() - sample_var).abs() <= 0.1 * sample_var);
        assert!(m.ar().is_empty() && m.ma().is_empty());
    }

    #[test]
    fn fit_recovers_ma1_coefficient() {
        // x_t = eps_t + 0.5 eps_{t-1}  <=>  b_1 = 0.5
        let (x, _) = generate(&[], &[0.5], 5000, 7);
        let m = fit_arma(&x, 0, 1).unwrap();
        assert!((0.4..=0.6).contains(&m.ma()[0]), "b1 = {}", m.ma()[0]);
    }

    #[test]
    fn residuals_of_trivial_model_echo_series() {
        let m = ArmaModel::new(vec![], vec![], 1.0).unwrap();
        let x = vec![1.0, -2.0, 3.0];
        assert_eq!(residuals(&m, &x).unwrap(), x);
    }

    #[test]
    fn residuals_recover_seeded_innovations() {
        let ar = vec![-0.6, 0.2];
        let ma = vec![0.4];
        let (x, eps) = generate(&ar, &ma, 500, 11);
        let m = ArmaModel::new(ar, ma, 1.0).unwrap();
        let e = residuals(&m, &x).unwrap();
        for t in 2..500 {
            assert!(
                (e[t] - eps[t]).abs() < 1e-6,
                "t={t}: {} vs {}",
                e[t],
                eps[t]
            );
        }
    }

    #[test]
    fn residuals_of_zero_series_are_zero() {
        let m = ArmaModel::new(vec![-0.5], vec![0.3], 1.0).unwrap();
        let e = residuals(&m, &[0.0; 20]).unwrap();
        assert!(e.iter().all(|&v| v == 0.0));
    }

    #[test]
    fn one_step_ar1() {
        let m = ArmaModel::new(vec![-0.9], vec![], 1.0).unwrap();
        let pred = one_step_predict(&m, &[2.0], &[]).unwrap();
        assert!((pred - 1.8).abs() < 1e-12);
    }

    #[test]
    fn one_step_ma1() {
        let m = ArmaModel::new(vec![], vec![0.5], 1.0).unwrap();
        let pred = one_step_predict(&m, &[], &[1.0]).unwrap();
        assert!((pred - 0.5).abs() < 1e-12);
    }

    #[test]
    fn one_step_zero_inputs() {
        let m = ArmaModel::new(vec![-0.7, 0.1], vec![0.2], 1.0).unwrap();
        let pred = one_step_predict(&m, &[0.0, 0.0], &[0.0]).unwrap();
        assert_eq!(pred, 0.0);
    }

    #[test]
    fn k_step_ar1_closed_form() {
        let m = ArmaModel::new(vec![-0.9], vec![], 1.0).unwrap();
        let f = k_step_forecast(&m, &[1.0], &[], 3).unwrap();
        assert!((f[0] - 0.9).abs() < 1e-12);
        assert!((f[1] - 0.81).abs() < 1e-12);
        assert!((f[2] - 0.729).abs() < 1e-12);
    }

    #[test]
    fn k_step_ma1_memory_exhausts() {
        let m = ArmaModel::new(vec![], vec![0.5], 1.0).unwrap();
        let f = k_step_forecast(&m, &[], &[2.0], 2).unwrap();
        assert!((f[0] - 1.0).abs() < 1e-12);
        assert_eq!(f[1], 0.0);
    }

    /// Manual unrolling oracle: replay the forecast recursion by hand.
    #[test]
    fn k_step_arma11_matches_hand_recursion() {
        let a1 = -0.6;
        let b1 = 0.4;
        let m = ArmaModel::new(vec![a1], vec![b1], 1.0).unwrap();
        let history = [1.0, 2.0];
        let resid = [0.3, -0.1];
        let f = k_step_forecast(&m, &history, &resid, 3).unwrap();

        let mut xs = history.to_vec();
        let mut es = resid.to_vec();
        let mut expected = Vec::new();
        for _ in 0..3 {
            let next = b1 * es[es.len() - 1] - a1 * xs[xs.len() - 1];
            expected.push(next);
            xs.push(next);
            es.push(0.0);
        }
        for (got, want) in f.iter().zip(expected.iter()) {
            assert!((got - want).abs() < 1e-12);
        }
    }

    #[test]
    fn k_step_rejects_zero_horizon() {
        let m = ArmaModel::new(vec![-0.5], vec![], 1.0).unwrap();
        assert!(k_step_forecast(&m, &[1.0], &[], 0).is_err());
    }

    #[test]
    fn fit_rejects_short_series() {
        let x = white_noise(25, 1);
        assert!(matches!(
            fit_arma(&x, 1, 1),
            Err(Error::InsufficientData(_))
        ));
    }

    #[test]
    fn insufficient_history_is_rejected() {
        let m = ArmaModel::new(vec![-0.5, 0.1], vec![], 1.0).unwrap();
        assert!(one_step_predict(&m, &[1.0], &[]).is_err());
    }

    #[test]
    fn invertibility_is_enforced_on_fit_output() {
        let (x, _) = generate(&[-0.4, 0.15], &[0.6, 0.2], 3000, 13);
        let m = fit_arma(&x, 2, 2).unwrap();
        for root in linalg::poly_roots_unit_constant(m.ma()).unwrap() {
            assert!(root.norm() > 1.0, "root modulus {}", root.norm());
        }
    }

    #[test]
    fn reflection_of_non_invertible_polynomial() {
        // 1 + 2z has root -1/2; reflected to -2 gives 1 + 0.5z.
        let fixed = enforce_invertibility(&[2.0]).unwrap();
        assert!((fixed[0] - 0.5).abs() < 1e-9);
    }

    #[test]
    fn model_constructor_rejects_non_invertible_ma() {
        assert!(ArmaModel::new(vec![], vec![1.5], 1.0).is_err());
    }

    /// A series large enough to trip the loss blow-up guard (but still
    /// regressable) sends the fit down the pure-AR fallback, flagged.
    #[test]
    fn extreme_scale_series_falls_back_to_ar() {
        let (x, _) = generate(&[-0.8], &[], 400, 31);
        let scaled: Vec<f64> = x.iter().map(|v| v * 1e151).collect();
        let m = fit_arma(&scaled, 1, 1).unwrap();
        assert!(m.is_ar_fallback());
        assert!(m.ma().iter().all(|&b| b == 0.0));
        assert!((m.ar()[0] + 0.8).abs() < 0.1, "fallback AR {}", m.ar()[0]);
    }

    /// The true model's conditional residuals must beat every perturbed
    /// coefficient set in mean squared error.
    #[test]
    fn residual_optimality_against_perturbations() {
        let ar = vec![-0.5, 0.1];
        let ma = vec![0.4];
        let (x, _) = generate(&ar, &ma, 5000, 17);
        let mse = |ar: &[f64], ma: &[f64]| {
            let e = residuals_raw(ar, ma, &x);
            e.iter().map(|v| v * v).sum::<f64>() / e.len() as f64
        };
        let base = mse(&ar, &ma);
        let mut rng = ChaCha8Rng::seed_from_u64(18);
        for trial in 0..100 {
            let perturb = |rng: &mut ChaCha8Rng| {
                let mag: f64 = rand::Rng::random_range(rng, 0.05..0.3);
                let sign = if rand::Rng::random_bool(rng, 0.5) { 1.0 } else { -1.0 };
                sign * mag
            };
            let par: Vec<f64> = ar.iter().map(|&v| v + perturb(&mut rng)).collect();
            let pma: Vec<f64> = ma.iter().map(|&v| v + perturb(&mut rng)).collect();
            let perturbed = mse(&par, &pma);
            assert!(
                base <= perturbed,
                "trial {trial}: true MSE {base} > perturbed {perturbed}"
            );
        }
    }

    /// Refitting on data generated from a fitted model recovers its
    /// coefficients.
    #[test]
    fn fit_idempotence_direction() {
        let (x, _) = generate(&[-0.7, 0.2], &[0.4], 4000, 21);
        let m1 = fit_arma(&x, 2, 1).unwrap();
        let (y, _) = generate(m1.ar(), m1.ma(), 10_000, 22);
        let m2 = fit_arma(&y, 2, 1).unwrap();
        for (c1, c2) in m1.ar().iter().zip(m2.ar().iter()) {
            assert!((c1 - c2).abs() < 0.1, "AR {c1} vs {c2}");
        }
        for (c1, c2) in m1.ma().iter().zip(m2.ma().iter()) {
            assert!((c1 - c2).abs() < 0.1, "MA {c1} vs {c2}");
        }
    }

    #[test]
    fn json_round_trip() {
        let m = ArmaModel::new(vec![-0.8, 0.1], vec![0.3], 0.5).unwrap();
        let text = serde_json::to_string(&m).unwrap();
        assert!(text.contains("\"p\":2"));
        assert!(text.contains("\"var\":0.5"));
        let back: ArmaModel = serde_json::from_str(&text).unwrap();
        assert_eq!(m, back);
    }

    #[test]
    fn json_rejects_inconsistent_orders() {
        let text = r#"{"p": 2, "q": 0, "ar": [0.1], "ma": [], "var": 1.0}"#;
        assert!(serde_json::from_str::<ArmaModel>(text).is_err());
    }
}
