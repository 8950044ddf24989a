//! The graph-frequency-decoupled causal model.
//!
//! A vector ARMA model whose matrix coefficients are diagonalized by the
//! graph eigenbasis splits, after rotation by that basis, into independent
//! scalar ARMA models, one per graph frequency. Fitting therefore reduces
//! to per-frequency scalar fits on the rotated training signal, and
//! forecasting to per-frequency scalar recursions rotated back. An
//! optional truncation keeps only the highest-energy graph frequencies,
//! which is the best rank-K approximation of the data among all rotations
//! and trades a controlled amount of reconstruction energy for a
//! proportional reduction in estimation work.

use ndarray::{Array1, Array2, Axis};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arma::{self, ArmaModel};
use crate::error::{Error, Result};
use crate::spectral::{self, EigenBasis, TimeVertexSignal};

/// How to choose the retained graph-frequency set.
#[derive(Debug, Clone, Copy, PartialEq)]
pub enum SelectionCriterion {
    /// Keep exactly `K` frequencies, the ones with the largest energies.
    Count(usize),
    /// Keep the smallest set whose energy reaches this fraction of the
    /// total (in `(0, 1]`).
    VarianceFraction(f64),
}

/// Per-frequency training energies `sum_t x_hat_t(n)^2` of a rotated
/// signal: the empirical diagonal of the rotated covariance, up to a
/// factor of the sample count.
#[derive(Debug, Clone)]
pub struct EnergySpectrum {
    energies: Array1<f64>,
}

impl EnergySpectrum {
    pub fn values(&self) -> &Array1<f64> {
        &self.energies
    }

    pub fn len(&self) -> usize {
        self.energies.len()
    }

    pub fn is_empty(&self) -> bool {
        self.energies.is_empty()
    }

    pub fn total(&self) -> f64 {
        self.energies.sum()
    }
}

pub(crate) fn energy_from_rows(rotated: &Array2<f64>) -> EnergySpectrum {
    let energies = rotated.map_axis(Axis(1), |row| row.iter().map(|v| v * v).sum());
    EnergySpectrum { energies }
}

/// Per-frequency energy of a (caller-demeaned) signal in the basis domain.
pub fn energy_spectrum(basis: &EigenBasis, x: &TimeVertexSignal) -> Result<EnergySpectrum> {
    let rotated = spectral::gft(basis, x)?;
    Ok(energy_from_rows(&rotated))
}

/// Indices of the retained frequencies, ascending. Energy ties are broken
/// toward the lower index.
pub fn select_top_k(spectrum: &EnergySpectrum, criterion: SelectionCriterion) -> Result<Vec<usize>> {
    let n = spectrum.len();
    if n == 0 {
        return Err(Error::InvalidArgument("empty energy spectrum".into()));
    }
    let mut order: Vec<usize> = (0..n).collect();
    order.sort_by(|&a, &b| {
        spectrum.energies[b]
            .total_cmp(&spectrum.energies[a])
            .then(a.cmp(&b))
    });
    let mut chosen = match criterion {
        SelectionCriterion::Count(k) => {
            if k == 0 || k > n {
                return Err(Error::InvalidArgument(format!(
                    "rank K = {k} out of range 1..={n}"
                )));
            }
            order[..k].to_vec()
        }
        SelectionCriterion::VarianceFraction(rho) => {
            if !(rho > 0.0 && rho <= 1.0) {
                return Err(Error::InvalidArgument(format!(
                    "variance fraction {rho} out of range (0, 1]"
                )));
            }
            let total = spectrum.total();
            let mut acc = 0.0;
            let mut keep = Vec::new();
            for &idx in &order {
                keep.push(idx);
                acc += spectrum.energies[idx];
                if acc >= rho * total {
                    break;
                }
            }
            keep
        }
    };
    chosen.sort_unstable();
    Ok(chosen)
}

/// A fitted decoupled causal model: eigenbasis, retained frequency set,
/// one scalar ARMA model per retained frequency, and the per-node
/// training mean.
#[derive(Debug, Clone)]
pub struct JointCausalModel {
    basis: EigenBasis,
    selected: Vec<usize>,
    models: Vec<ArmaModel>,
    mean: Array1<f64>,
    p: usize,
    q: usize,
    variance_retained: f64,
}

#[derive(Serialize, Deserialize)]
struct JointModelFile {
    p: usize,
    q: usize,
    mean: Vec<f64>,
    selected: Vec<usize>,
    models: Vec<ArmaModel>,
    variance_retained: f64,
    basis_sha256: String,
}

impl JointCausalModel {
    /// Assemble a model from parts, validating the index set.
    pub fn from_parts(
        basis: EigenBasis,
        selected: Vec<usize>,
        models: Vec<ArmaModel>,
        mean: Array1<f64>,
        p: usize,
        q: usize,
    ) -> Result<Self> {
        let n = basis.dim();
        if mean.len() != n {
            return Err(Error::DimensionMismatch(format!(
                "mean has {} entries for {} vertices",
                mean.len(),
                n
            )));
        }
        if selected.is_empty() || selected.len() > n {
            return Err(Error::InvalidArgument(format!(
                "selected set size {} out of range 1..={n}",
                selected.len()
            )));
        }
        if selected.windows(2).any(|w| w[0] >= w[1]) || *selected.last().unwrap() >= n {
            return Err(Error::InvalidArgument(
                "selected indices must be strictly ascending and in range".into(),
            ));
        }
        if models.len() != selected.len() {
            return Err(Error::DimensionMismatch(format!(
                "{} models for {} selected frequencies",
                models.len(),
                selected.len()
            )));
        }
        Ok(JointCausalModel {
            basis,
            selected,
            models,
            mean,
            p,
            q,
            variance_retained: 1.0,
        })
    }

    pub fn basis(&self) -> &EigenBasis {
        &self.basis
    }

    /// Retained frequency indices, ascending.
    pub fn selected(&self) -> &[usize] {
        &self.selected
    }

    /// Scalar models aligned with [`Self::selected`].
    pub fn models(&self) -> &[ArmaModel] {
        &self.models
    }

    pub fn mean(&self) -> &Array1<f64> {
        &self.mean
    }

    pub fn orders(&self) -> (usize, usize) {
        (self.p, self.q)
    }

    /// Fraction of training energy captured by the retained set.
    pub fn variance_retained(&self) -> f64 {
        self.variance_retained
    }

    /// Minimum history length required by [`Self::predict`].
    pub fn min_history(&self) -> usize {
        self.p.max(self.q) + 1
    }

    /// Forecast `k` columns ahead of `history`.
    ///
    /// The history is demeaned with the training mean, rotated to the
    /// basis domain, forecast per retained frequency (non-retained
    /// frequencies forecast as zero, their conditional mean under the
    /// truncated model), rotated back, and re-meaned.
    pub fn predict(&self, history: &TimeVertexSignal, k: usize) -> Result<Array2<f64>> {
        let n = self.basis.dim();
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
        let centered = TimeVertexSignal::new(
            history.values() - &self.mean.view().insert_axis(Axis(1)),
        )?;
        let rotated = spectral::gft(&self.basis, &centered)?;

        let mut forecast_hat = Array2::<f64>::zeros((n, k));
        for (idx, &freq) in self.selected.iter().enumerate() {
            let series: Vec<f64> = rotated.row(freq).to_vec();
            let model = &self.models[idx];
            let resid = arma::residuals(model, &series)
                .map_err(|e| Error::at_frequency(freq, e))?;
            let path = arma::k_step_forecast(model, &series, &resid, k)
                .map_err(|e| Error::at_frequency(freq, e))?;
            for (step, value) in path.into_iter().enumerate() {
                forecast_hat[[freq, step]] = value;
            }
        }
        let native = self.basis.eigenvectors().dot(&forecast_hat);
        Ok(native + self.mean.view().insert_axis(Axis(1)))
    }

    /// Serialize to JSON. The eigenbasis itself is stored separately; the
    /// JSON carries a checksum so a reloaded model can verify it is paired
    /// with the right basis.
    pub fn to_json(&self) -> Result<String> {
        let file = JointModelFile {
            p: self.p,
            q: self.q,
            mean: self.mean.to_vec(),
            selected: self.selected.clone(),
            models: self.models.clone(),
            variance_retained: self.variance_retained,
            basis_sha256: self.basis.sha256(),
        };
        Ok(serde_json::to_string_pretty(&file)?)
    }

    /// Deserialize from JSON, verifying the basis checksum.
    pub fn from_json(text: &str, basis: EigenBasis) -> Result<Self> {
        let file: JointModelFile = serde_json::from_str(text)?;
        let checksum = basis.sha256();
        if checksum != file.basis_sha256 {
            return Err(Error::ChecksumMismatch(format!(
                "model expects basis {} but was given {}",
                file.basis_sha256, checksum
            )));
        }
        let mut model = JointCausalModel::from_parts(
            basis,
            file.selected,
            file.models,
            Array1::from_vec(file.mean),
            file.p,
            file.q,
        )?;
        model.variance_retained = file.variance_retained;
        Ok(model)
    }
}

/// Fit a decoupled causal model on a training signal.
///
/// The per-node temporal mean is removed, the signal is rotated by the
/// basis, frequencies are ranked by training energy and truncated per
/// `criterion`, and an ARMA(P,Q) model is fitted to each retained
/// frequency independently (in parallel; results are deterministic).
pub fn fit(
    x_train: &TimeVertexSignal,
    basis: &EigenBasis,
    p: usize,
    q: usize,
    criterion: SelectionCriterion,
) -> Result<JointCausalModel> {
    let n = basis.dim();
    if x_train.vertex_count() != n {
        return Err(Error::DimensionMismatch(format!(
            "training signal has {} vertices, basis has {n}",
            x_train.vertex_count()
        )));
    }
    let t_len = x_train.time_len();
    if t_len < 10 * (p + q + 1) {
        return Err(Error::InsufficientData(format!(
            "training length {t_len} too short for ARMA({p},{q}); need {}",
            10 * (p + q + 1)
        )));
    }
    let mean = x_train
        .values()
        .mean_axis(Axis(1))
        .expect("training signal has at least one column");
    let centered =
        TimeVertexSignal::new(x_train.values() - &mean.view().insert_axis(Axis(1)))?;
    let rotated = spectral::gft(basis, &centered)?;

    let spectrum = energy_from_rows(&rotated);
    let selected = select_top_k(&spectrum, criterion)?;
    let total = spectrum.total();
    let variance_retained = if total > 0.0 {
        selected.iter().map(|&i| spectrum.energies[i]).sum::<f64>() / total
    } else {
        1.0
    };

    // Collect everything before surfacing failures so the reported error
    // is the lowest-index one regardless of scheduling.
    let fits: Vec<Result<ArmaModel>> = selected
        .par_iter()
        .map(|&freq| {
            let series: Vec<f64> = rotated.row(freq).to_vec();
            arma::fit_arma(&series, p, q).map_err(|e| Error::at_frequency(freq, e))
        })
        .collect();
    let models: Vec<ArmaModel> = fits.into_iter().collect::<Result<Vec<_>>>()?;

    let mut model = JointCausalModel::from_parts(basis.clone(), selected, models, mean, p, q)?;
    model.variance_retained = variance_retained;
    Ok(model)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::graph::{laplacian, random_geometric_graph, Edge, Graph, OperatorMatrix};
    use crate::spectral::{eigendecompose, DEFAULT_EIGEN_TOL};
    use rand::Rng;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;
    use rand_distr::{Distribution, StandardNormal};

    fn path_basis(n: usize) -> EigenBasis {
        let edges = (0..n - 1)
            .map(|i| Edge {
                i,
                j: i + 1,
                weight: 1.0,
            })
            .collect();
        let g = Graph::new(n, edges, None).unwrap();
        eigendecompose(&laplacian(&g), DEFAULT_EIGEN_TOL).unwrap()
    }

    fn random_basis(n: usize, seed: u64) -> EigenBasis {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let b = Array2::from_shape_fn((n, n), |_| rng.random_range(-1.0..1.0));
        eigendecompose(&OperatorMatrix::new(b.t().dot(&b)).unwrap(), DEFAULT_EIGEN_TOL).unwrap()
    }

    fn random_signal(n: usize, t: usize, seed: u64) -> TimeVertexSignal {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        TimeVertexSignal::new(Array2::from_shape_fn((n, t), |_| {
            rng.random_range(-1.0..1.0)
        }))
        .unwrap()
    }

    #[test]
    fn energy_concentrates_for_graph_constant_signal() {
        let basis = path_basis(4);
        let x = TimeVertexSignal::new(Array2::from_elem((4, 5), 1.5)).unwrap();
        let s = energy_spectrum(&basis, &x).unwrap();
        assert!(s.values()[0] > 1.0);
        for n in 1..4 {
            assert!(s.values()[n].abs() < 1e-18);
        }
    }

    #[test]
    fn energy_of_zero_signal_is_zero() {
        let basis = path_basis(3);
        let x = TimeVertexSignal::new(Array2::zeros((3, 4))).unwrap();
        let s = energy_spectrum(&basis, &x).unwrap();
        assert!(s.values().iter().all(|&v| v == 0.0));
    }

    #[test]
    fn energy_sums_to_signal_energy() {
        let basis = random_basis(5, 31);
        let x = random_signal(5, 9, 32);
        let s = energy_spectrum(&basis, &x).unwrap();
        let total = x.frobenius_norm().powi(2);
        assert!((s.total() - total).abs() <= 1e-9 * total);
    }

    #[test]
    fn select_top_k_by_count() {
        let s = EnergySpectrum {
            energies: Array1::from_vec(vec![5.0, 1.0, 3.0]),
        };
        assert_eq!(
            select_top_k(&s, SelectionCriterion::Count(2)).unwrap(),
            vec![0, 2]
        );
    }

    #[test]
    fn select_top_k_tie_breaks_to_lower_index() {
        let s = EnergySpectrum {
            energies: Array1::from_vec(vec![4.0, 4.0, 2.0]),
        };
        assert_eq!(
            select_top_k(&s, SelectionCriterion::Count(1)).unwrap(),
            vec![0]
        );
    }

    #[test]
    fn select_full_fraction_keeps_everything() {
        let s = EnergySpectrum {
            energies: Array1::from_vec(vec![1.0, 2.0, 0.5]),
        };
        assert_eq!(
            select_top_k(&s, SelectionCriterion::VarianceFraction(1.0)).unwrap(),
            vec![0, 1, 2]
        );
    }

    #[test]
    fn select_rejects_bad_criteria() {
        let s = EnergySpectrum {
            energies: Array1::from_vec(vec![1.0, 2.0]),
        };
        assert!(select_top_k(&s, SelectionCriterion::Count(0)).is_err());
        assert!(select_top_k(&s, SelectionCriterion::Count(3)).is_err());
        assert!(select_top_k(&s, SelectionCriterion::VarianceFraction(0.0)).is_err());
        let empty = EnergySpectrum {
            energies: Array1::from_vec(vec![]),
        };
        assert!(select_top_k(&empty, SelectionCriterion::Count(1)).is_err());
    }

    /// With the identity operator the rotation is a no-op, so the joint
    /// fit must coincide with fitting each node's series directly.
    #[test]
    fn identity_basis_reduces_to_per_node_fits() {
        let n = 4;
        let t = 400;
        let mut rng = ChaCha8Rng::seed_from_u64(40);
        let mut values = Array2::<f64>::zeros((n, t));
        for i in 0..n {
            let a = 0.3 + 0.1 * i as f64;
            for tt in 1..t {
                let eps: f64 = StandardNormal.sample(&mut rng);
                values[[i, tt]] = a * values[[i, tt - 1]] + eps;
            }
        }
        let x = TimeVertexSignal::new(values.clone()).unwrap();
        let model = fit(
            &x,
            &EigenBasis::identity(n),
            1,
            0,
            SelectionCriterion::Count(n),
        )
        .unwrap();

        let mean = values.mean_axis(Axis(1)).unwrap();
        for (idx, &freq) in model.selected().iter().enumerate() {
            let series: Vec<f64> = (0..t).map(|tt| values[[freq, tt]] - mean[freq]).collect();
            let direct = arma::fit_arma(&series, 1, 0).unwrap();
            assert!(
                (model.models()[idx].ar()[0] - direct.ar()[0]).abs() < 1e-9,
                "frequency {freq}"
            );
        }
    }

    /// Generator oracle: data built from known per-frequency AR(1) models
    /// must be recovered frequency by frequency.
    #[test]
    fn fit_recovers_decoupled_coefficients() {
        let n = 5;
        let t = 4000;
        let basis = random_basis(n, 50);
        let mut rng = ChaCha8Rng::seed_from_u64(51);
        let poles: Vec<f64> = (0..n).map(|i| 0.2 + 0.12 * i as f64).collect();
        let mut rotated = Array2::<f64>::zeros((n, t));
        for f in 0..n {
            for tt in 1..t {
                let eps: f64 = StandardNormal.sample(&mut rng);
                rotated[[f, tt]] = poles[f] * rotated[[f, tt - 1]] + eps;
            }
        }
        let x = TimeVertexSignal::new(basis.eigenvectors().dot(&rotated)).unwrap();
        let model = fit(&x, &basis, 1, 0, SelectionCriterion::Count(n)).unwrap();
        for (idx, &freq) in model.selected().iter().enumerate() {
            let got = model.models()[idx].ar()[0];
            let want = -poles[freq];
            assert!((got - want).abs() < 0.1, "freq {freq}: {got} vs {want}");
        }
    }

    #[test]
    fn all_static_models_forecast_the_mean() {
        let basis = path_basis(3);
        let mut values = random_signal(3, 60, 60).values().clone();
        for i in 0..3 {
            for t in 0..60 {
                values[[i, t]] += i as f64;
            }
        }
        let x = TimeVertexSignal::new(values).unwrap();
        let model = fit(&x, &basis, 0, 0, SelectionCriterion::Count(3)).unwrap();
        let pred = model.predict(&x, 4).unwrap();
        for i in 0..3 {
            for step in 0..4 {
                assert!(
                    (pred[[i, step]] - model.mean()[i]).abs() < 1e-9,
                    "node {i} step {step}"
                );
            }
        }
    }

    /// Decoupling oracle: the spectral-domain forecast must match the
    /// explicit vector recursion with matrix coefficients
    /// `a_p(L) = U diag(a_p(n)) U^T` run entirely in the native domain.
    #[test]
    fn prediction_matches_native_matrix_recursion() {
        let n = 3;
        let t = 50;
        let k = 4;
        let basis = random_basis(n, 70);
        let mut rng = ChaCha8Rng::seed_from_u64(71);

        let mut models = Vec::new();
        for _ in 0..n {
            let ar = vec![rng.random_range(-0.4..0.4), rng.random_range(-0.3..0.3)];
            let ma = vec![rng.random_range(-0.4..0.4)];
            models.push(ArmaModel::new(ar, ma, 1.0).unwrap());
        }
        let mean = Array1::from_shape_fn(n, |_| rng.random_range(-1.0..1.0));
        let history = random_signal(n, t, 72);
        let model = JointCausalModel::from_parts(
            basis.clone(),
            (0..n).collect(),
            models.clone(),
            mean.clone(),
            2,
            1,
        )
        .unwrap();
        let fast = model.predict(&history, k).unwrap();

        // Independent oracle: dense matrix recursion.
        let u = basis.eigenvectors();
        let coeff_matrix = |pick: &dyn Fn(&ArmaModel) -> f64| {
            let d = Array2::from_diag(&Array1::from_shape_fn(n, |f| pick(&models[f])));
            u.dot(&d).dot(&u.t())
        };
        let a_mats: Vec<Array2<f64>> =
            (0..2).map(|p| coeff_matrix(&|m| m.ar()[p])).collect();
        let b_mats: Vec<Array2<f64>> =
            (0..1).map(|q| coeff_matrix(&|m| m.ma()[q])).collect();

        let centered: Vec<Array1<f64>> = (0..t)
            .map(|tt| {
                Array1::from_shape_fn(n, |i| history.values()[[i, tt]] - mean[i])
            })
            .collect();
        let mut resid: Vec<Array1<f64>> = Vec::with_capacity(t);
        for tt in 0..t {
            let mut pred = Array1::<f64>::zeros(n);
            for (qi, bq) in b_mats.iter().enumerate() {
                if tt > qi {
                    pred = pred + bq.dot(&resid[tt - qi - 1]);
                }
            }
            for (pi, ap) in a_mats.iter().enumerate() {
                if tt > pi {
                    pred = pred - ap.dot(&centered[tt - pi - 1]);
                }
            }
            resid.push(&centered[tt] - &pred);
        }
        let mut xs = centered;
        let mut es = resid;
        let mut expected = Array2::<f64>::zeros((n, k));
        for step in 0..k {
            let mut pred = Array1::<f64>::zeros(n);
            for (qi, bq) in b_mats.iter().enumerate() {
                let idx = xs.len() as isize - 1 - qi as isize;
                if idx >= 0 {
                    pred = pred + bq.dot(&es[idx as usize]);
                }
            }
            for (pi, ap) in a_mats.iter().enumerate() {
                let idx = xs.len() as isize - 1 - pi as isize;
                if idx >= 0 {
                    pred = pred - ap.dot(&xs[idx as usize]);
                }
            }
            for i in 0..n {
                expected[[i, step]] = pred[i] + mean[i];
            }
            xs.push(pred);
            es.push(Array1::zeros(n));
        }

        for i in 0..n {
            for step in 0..k {
                assert!(
                    (fast[[i, step]] - expected[[i, step]]).abs() < 1e-8,
                    "node {i} step {step}: {} vs {}",
                    fast[[i, step]],
                    expected[[i, step]]
                );
            }
        }
    }

    /// With the same AR(1) pole on every frequency the one-step forecast
    /// reduces to scaling the last column, visible without any rotation.
    #[test]
    fn uniform_ar1_forecast_scales_last_column() {
        let n = 4;
        let basis = random_basis(n, 75);
        let models: Vec<ArmaModel> = (0..n)
            .map(|_| ArmaModel::new(vec![-0.9], vec![], 1.0).unwrap())
            .collect();
        let model = JointCausalModel::from_parts(
            basis,
            (0..n).collect(),
            models,
            Array1::zeros(n),
            1,
            0,
        )
        .unwrap();
        let history = random_signal(n, 10, 76);
        let pred = model.predict(&history, 1).unwrap();
        for i in 0..n {
            let want = 0.9 * history.values()[[i, 9]];
            assert!((pred[[i, 0]] - want).abs() < 1e-10);
        }
    }

    /// Dropping the complement of S removes exactly its energy from the
    /// training reconstruction.
    #[test]
    fn truncation_energy_identity() {
        let n = 6;
        let basis = random_basis(n, 80);
        let x = random_signal(n, 40, 81);
        let rotated = spectral::gft(&basis, &x).unwrap();
        let spectrum = energy_from_rows(&rotated);
        let selected = select_top_k(&spectrum, SelectionCriterion::Count(3)).unwrap();

        let mut kept = rotated.clone();
        for f in 0..n {
            if !selected.contains(&f) {
                kept.row_mut(f).fill(0.0);
            }
        }
        let reconstructed = spectral::igft(&basis, &kept).unwrap();
        let diff = reconstructed.values() - x.values();
        let err_energy: f64 = diff.iter().map(|v| v * v).sum();
        let dropped: f64 = (0..n)
            .filter(|f| !selected.contains(f))
            .map(|f| spectrum.values()[f])
            .sum();
        assert!(
            (err_energy - dropped).abs() <= 1e-8 * dropped.max(1e-12),
            "{err_energy} vs {dropped}"
        );
    }

    /// Content in frequencies outside S must not leak into predictions.
    #[test]
    fn non_selected_frequencies_do_not_influence_predictions() {
        let n = 4;
        let basis = random_basis(n, 90);
        let x = random_signal(n, 120, 91);
        let model = fit(&x, &basis, 1, 0, SelectionCriterion::Count(2)).unwrap();
        let outside: Vec<usize> = (0..n)
            .filter(|f| !model.selected().contains(f))
            .collect();
        assert!(!outside.is_empty());

        // Inject a large disturbance living purely on a non-selected
        // frequency.
        let mut disturbance_hat = Array2::<f64>::zeros((n, x.time_len()));
        for t in 0..x.time_len() {
            disturbance_hat[[outside[0], t]] = 100.0 * ((t as f64) * 0.7).sin();
        }
        let disturbance = basis.eigenvectors().dot(&disturbance_hat);
        let perturbed = TimeVertexSignal::new(x.values() + &disturbance).unwrap();

        let base = model.predict(&x, 3).unwrap();
        let shifted = model.predict(&perturbed, 3).unwrap();
        // Predictions may differ on the disturbed frequency's native image,
        // but their rotated rows inside S must be identical.
        let base_hat = basis.eigenvectors().t().dot(&base);
        let shifted_hat = basis.eigenvectors().t().dot(&shifted);
        for &f in model.selected() {
            for step in 0..3 {
                assert!(
                    (base_hat[[f, step]] - shifted_hat[[f, step]]).abs() < 1e-8,
                    "frequency {f} step {step}"
                );
            }
        }
    }

    #[test]
    fn fit_rejects_zero_rank_and_short_series() {
        let basis = path_basis(3);
        let x = random_signal(3, 100, 95);
        assert!(fit(&x, &basis, 1, 0, SelectionCriterion::Count(0)).is_err());
        let short = random_signal(3, 15, 96);
        assert!(fit(&short, &basis, 1, 0, SelectionCriterion::Count(3)).is_err());
    }

    #[test]
    fn json_round_trip_with_checksum() {
        let g = random_geometric_graph(6, 3.0, 7).unwrap();
        let basis = eigendecompose(&laplacian(&g), DEFAULT_EIGEN_TOL).unwrap();
        let x = random_signal(6, 200, 97);
        let model = fit(&x, &basis, 1, 1, SelectionCriterion::VarianceFraction(0.9)).unwrap();
        let text = model.to_json().unwrap();
        let back = JointCausalModel::from_json(&text, basis.clone()).unwrap();
        assert_eq!(model.selected(), back.selected());
        assert_eq!(model.models(), back.models());
        assert!((model.variance_retained() - back.variance_retained()).abs() < 1e-15);

        let wrong = random_basis(6, 98);
        assert!(matches!(
            JointCausalModel::from_json(&text, wrong),
            Err(Error::ChecksumMismatch(_))
        ));
    }
}
