//! Rolling-origin forecast evaluation.
//!
//! The data is split in half along time; models are fitted on the first
//! half and, for every test time `t`, asked to forecast `k` steps ahead
//! from all columns observed so far (training plus already-revealed test
//! columns). Accuracy is the relative error
//! `||x~_{t+k|t} - x_{t+k}|| / ||x_{t+k}||`, summarized per horizon by
//! median, mean and standard deviation.

use std::time::Instant;

use ndarray::Array2;
use serde::{Deserialize, Serialize};

use crate::baselines::{self, DisjointModel, NoncausalPredictor};
use crate::error::{Error, Result};
use crate::joint_causal::{self, JointCausalModel, SelectionCriterion};
use crate::spectral::{EigenBasis, TimeVertexSignal};

/// Anything that can forecast `k` columns ahead of a history matrix.
pub trait Forecaster {
    fn forecast(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>>;

    /// History columns required before forecasting at horizon `k`.
    fn min_history(&self, k: usize) -> usize;

    /// Fraction of training variance retained, when the model truncates.
    fn variance_retained(&self) -> Option<f64> {
        None
    }
}

impl Forecaster for JointCausalModel {
    fn forecast(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>> {
        self.predict(history, k)
    }

    fn min_history(&self, _k: usize) -> usize {
        JointCausalModel::min_history(self)
    }

    fn variance_retained(&self) -> Option<f64> {
        Some(JointCausalModel::variance_retained(self))
    }
}

impl Forecaster for DisjointModel {
    fn forecast(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>> {
        self.predict(history, k)
    }

    fn min_history(&self, _k: usize) -> usize {
        DisjointModel::min_history(self)
    }

    fn variance_retained(&self) -> Option<f64> {
        Some(DisjointModel::variance_retained(self))
    }
}

impl Forecaster for NoncausalPredictor {
    fn forecast(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>> {
        NoncausalPredictor::forecast(self, history, k)
    }

    fn min_history(&self, k: usize) -> usize {
        NoncausalPredictor::min_history(self, k)
    }
}

/// Split along time: the first `ceil(T/2)` columns train, the rest test.
pub fn split_train_test(x: &TimeVertexSignal) -> (TimeVertexSignal, TimeVertexSignal) {
    let t = x.time_len();
    let train = t.div_ceil(2);
    (x.slice_cols(0, train), x.slice_cols(train, t))
}

/// Aggregates of the relative errors recorded at one horizon.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StepSummary {
    pub k: usize,
    pub median: f64,
    pub mean: f64,
    pub std: f64,
    /// Evaluated (t, k) pairs.
    pub count: usize,
    /// Pairs skipped because the target column had zero norm.
    pub skipped: usize,
}

/// Rolling-origin evaluation results.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ForecastReport {
    pub k_max: usize,
    pub steps: Vec<StepSummary>,
    pub fit_seconds: Option<f64>,
    pub predict_seconds: f64,
    pub variance_retained: Option<f64>,
    /// Raw relative errors per horizon (not serialized; export via CSV).
    #[serde(skip)]
    pub errors: Vec<Vec<f64>>,
}

impl ForecastReport {
    pub fn with_fit_seconds(mut self, seconds: f64) -> Self {
        self.fit_seconds = Some(seconds);
        self
    }

    pub fn median_at(&self, k: usize) -> Option<f64> {
        self.steps.iter().find(|s| s.k == k).map(|s| s.median)
    }
}

pub(crate) fn median(values: &[f64]) -> f64 {
    if values.is_empty() {
        return f64::NAN;
    }
    let mut v = values.to_vec();
    v.sort_by(f64::total_cmp);
    let mid = v.len() / 2;
    if v.len() % 2 == 1 {
        v[mid]
    } else {
        0.5 * (v[mid - 1] + v[mid])
    }
}

fn summarize(k: usize, errors: &[f64], skipped: usize) -> StepSummary {
    let count = errors.len();
    let mean = if count > 0 {
        errors.iter().sum::<f64>() / count as f64
    } else {
        f64::NAN
    };
    let std = if count > 1 {
        (errors.iter().map(|e| (e - mean).powi(2)).sum::<f64>() / (count - 1) as f64).sqrt()
    } else {
        0.0
    };
    StepSummary {
        k,
        median: median(errors),
        mean,
        std,
        count,
        skipped,
    }
}

/// Evaluate a fitted predictor on the test half of `x`.
///
/// The predictor must have been fitted on the training half only. For
/// each test time `t` and horizon `k <= k_max` with `t + k <= T`, the
/// forecast is made from all columns up to `t`; pairs whose target column
/// has zero norm are skipped and counted.
pub fn evaluate(
    predictor: &dyn Forecaster,
    x: &TimeVertexSignal,
    k_max: usize,
) -> Result<ForecastReport> {
    let t_total = x.time_len();
    let train_len = t_total.div_ceil(2);
    let test_len = t_total - train_len;
    if k_max == 0 {
        return Err(Error::InvalidArgument("k_max must be positive".into()));
    }
    if k_max >= test_len {
        return Err(Error::InvalidArgument(format!(
            "k_max = {k_max} must be below the test length {test_len}"
        )));
    }
    for k in 1..=k_max {
        if predictor.min_history(k) > train_len {
            return Err(Error::InsufficientData(format!(
                "predictor needs {} history columns at horizon {k} but training has {train_len}",
                predictor.min_history(k)
            )));
        }
    }

    let mut errors: Vec<Vec<f64>> = vec![Vec::new(); k_max];
    let mut skipped = vec![0usize; k_max];
    let started = Instant::now();
    for t in train_len..t_total {
        let max_k = k_max.min(t_total - t);
        if max_k == 0 {
            continue;
        }
        let history = x.slice_cols(0, t);
        for k in 1..=max_k {
            let forecast = predictor.forecast(&history, k)?;
            let target = x.values().column(t + k - 1);
            let target_norm = target.iter().map(|v| v * v).sum::<f64>().sqrt();
            if target_norm == 0.0 {
                skipped[k - 1] += 1;
                continue;
            }
            let pred_col = forecast.column(k - 1);
            let err_norm = pred_col
                .iter()
                .zip(target.iter())
                .map(|(p, y)| (p - y) * (p - y))
                .sum::<f64>()
                .sqrt();
            errors[k - 1].push(err_norm / target_norm);
        }
    }
    let predict_seconds = started.elapsed().as_secs_f64();

    let steps = (1..=k_max)
        .map(|k| summarize(k, &errors[k - 1], skipped[k - 1]))
        .collect();
    Ok(ForecastReport {
        k_max,
        steps,
        fit_seconds: None,
        predict_seconds,
        variance_retained: predictor.variance_retained(),
        errors,
    })
}

/// Exhaustive validation-error search over ARMA orders `P, Q <= max`.
///
/// Each candidate is fitted on the first half of `train` and scored by
/// its median relative error at horizon `k_eval` on the second half;
/// ties prefer the smaller model. `basis` selects the joint model (full
/// rank); `None` scores the per-node disjoint model instead.
pub fn grid_search_orders(
    train: &TimeVertexSignal,
    basis: Option<&EigenBasis>,
    max_p: usize,
    max_q: usize,
    k_eval: usize,
) -> Result<(usize, usize)> {
    let sub_len = train.time_len().div_ceil(2);
    let mut best: Option<(f64, usize, usize)> = None;
    for p in 0..=max_p {
        for q in 0..=max_q {
            if sub_len < 10 * (p + q + 1) {
                continue;
            }
            let report = match basis {
                Some(b) => {
                    let model = match joint_causal::fit(
                        &train.slice_cols(0, sub_len),
                        b,
                        p,
                        q,
                        SelectionCriterion::VarianceFraction(1.0),
                    ) {
                        Ok(m) => m,
                        Err(_) => continue,
                    };
                    evaluate(&model, train, k_eval)
                }
                None => {
                    let model =
                        match baselines::fit_disjoint(&train.slice_cols(0, sub_len), p, q) {
                            Ok(m) => m,
                            Err(_) => continue,
                        };
                    evaluate(&model, train, k_eval)
                }
            };
            let Ok(report) = report else { continue };
            let Some(score) = report.median_at(k_eval) else {
                continue;
            };
            if !score.is_finite() {
                continue;
            }
            let better = match &best {
                None => true,
                Some((s, bp, bq)) => {
                    score < *s - 1e-12
                        || ((score - s).abs() <= 1e-12 && (p + q, p) < (bp + bq, *bp))
                }
            };
            if better {
                best = Some((score, p, q));
            }
        }
    }
    best.map(|(_, p, q)| (p, q)).ok_or_else(|| {
        Error::InsufficientData("no admissible (P, Q) candidate for this training length".into())
    })
}

/// One model's entry in a low-rank sweep row.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepEntry {
    pub components_kept: usize,
    pub variance_retained: f64,
    pub median_two_step_error: f64,
    pub fit_seconds: f64,
}

/// Low-rank sweep results at one ignored-variance fraction.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepRow {
    pub fraction_ignored: f64,
    /// Truncation in the graph spectral domain.
    pub joint: SweepEntry,
    /// Truncation over nodes in the native graph domain.
    pub disjoint: SweepEntry,
}

/// For each ignored-variance fraction, fit a truncated joint model (graph
/// spectral domain) and a truncated per-node model (native domain), then
/// report two-step accuracy and fit time for both.
pub fn lowrank_sweep(
    x: &TimeVertexSignal,
    basis: &EigenBasis,
    fractions: &[f64],
    p: usize,
    q: usize,
) -> Result<Vec<SweepRow>> {
    let mut rows = Vec::with_capacity(fractions.len());
    for &fraction in fractions {
        if !(0.0..1.0).contains(&fraction) {
            return Err(Error::InvalidArgument(format!(
                "ignored fraction {fraction} out of range [0, 1)"
            )));
        }
        let rho = 1.0 - fraction;

        let started = Instant::now();
        let joint = joint_causal::fit(
            &split_train_test(x).0,
            basis,
            p,
            q,
            SelectionCriterion::VarianceFraction(rho),
        )?;
        let joint_fit_seconds = started.elapsed().as_secs_f64();
        let joint_report = evaluate(&joint, x, 2)?;

        let started = Instant::now();
        let disjoint = baselines::fit_disjoint_lowrank(
            &split_train_test(x).0,
            p,
            q,
            SelectionCriterion::VarianceFraction(rho),
        )?;
        let disjoint_fit_seconds = started.elapsed().as_secs_f64();
        let disjoint_report = evaluate(&disjoint, x, 2)?;

        rows.push(SweepRow {
            fraction_ignored: fraction,
            joint: SweepEntry {
                components_kept: joint.selected().len(),
                variance_retained: joint.variance_retained(),
                median_two_step_error: joint_report.median_at(2).unwrap_or(f64::NAN),
                fit_seconds: joint_fit_seconds,
            },
            disjoint: SweepEntry {
                components_kept: disjoint.selected().len(),
                variance_retained: disjoint.variance_retained(),
                median_two_step_error: disjoint_report.median_at(2).unwrap_or(f64::NAN),
                fit_seconds: disjoint_fit_seconds,
            },
        });
    }
    Ok(rows)
}
