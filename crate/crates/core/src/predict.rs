//! Next-value prediction for yearly series: a single-hidden-layer sigmoid
//! perceptron trained by full-batch backpropagation on sliding windows.
//!
//! With only a handful of yearly points per series there is no statistical
//! claim here; the predictor is a faithful mechanism that extrapolates the
//! learned window mapping by one step.

use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};

/// Training hyperparameters.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TrainConfig {
    /// Sliding window length; must be shorter than the series.
    pub window: usize,
    pub hidden: usize,
    pub learning_rate: f64,
    pub epochs: usize,
    pub seed: u64,
}

impl Default for TrainConfig {
    fn default() -> Self {
        TrainConfig { window: 3, hidden: 5, learning_rate: 0.1, epochs: 5000, seed: 0 }
    }
}

/// `sigmoid(w2 · sigmoid(w1 x + b1) + b2)`.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    pub w1: Vec<Vec<f64>>, // hidden x window
    pub b1: Vec<f64>,
    pub w2: Vec<f64>, // 1 x hidden
    pub b2: f64,
}

fn sigmoid(x: f64) -> f64 {
    1.0 / (1.0 + (-x).exp())
}

impl MlpModel {
    pub fn zeros(window: usize, hidden: usize) -> Self {
        MlpModel {
            w1: vec![vec![0.0; window]; hidden],
            b1: vec![0.0; hidden],
            w2: vec![0.0; hidden],
            b2: 0.0,
        }
    }

    /// Seeded Uniform[-0.5, 0.5] initialization.
    pub fn init(window: usize, hidden: usize, rng: &mut StdRng) -> Self {
        let mut model = MlpModel::zeros(window, hidden);
        for row in &mut model.w1 {
            for w in row {
                *w = rng.gen_range(-0.5..0.5);
            }
        }
        for b in &mut model.b1 {
            *b = rng.gen_range(-0.5..0.5);
        }
        for w in &mut model.w2 {
            *w = rng.gen_range(-0.5..0.5);
        }
        model.b2 = rng.gen_range(-0.5..0.5);
        model
    }

    pub fn window(&self) -> usize {
        self.w1[0].len()
    }

    fn hidden_activations(&self, input: &[f64]) -> Vec<f64> {
        self.w1
            .iter()
            .zip(&self.b1)
            .map(|(row, b)| sigmoid(row.iter().zip(input).map(|(w, x)| w * x).sum::<f64>() + b))
            .collect()
    }

    /// Scalar output in (0, 1).
    pub fn forward(&self, input: &[f64]) -> f64 {
        assert_eq!(input.len(), self.window(), "input length must match the window");
        let hidden = self.hidden_activations(input);
        sigmoid(self.w2.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>() + self.b2)
    }
}

/// Gradients of ½(forward(x) − t)² with respect to every parameter.
#[derive(Debug, Clone, PartialEq)]
pub struct Gradients {
    pub w1: Vec<Vec<f64>>,
    pub b1: Vec<f64>,
    pub w2: Vec<f64>,
    pub b2: f64,
}

/// Exact backpropagation for one (input, target) sample.
pub fn gradient(model: &MlpModel, input: &[f64], target: f64) -> Gradients {
    let hidden = model.hidden_activations(input);
    let y = sigmoid(model.w2.iter().zip(&hidden).map(|(w, h)| w * h).sum::<f64>() + model.b2);
    let dy = (y - target) * y * (1.0 - y);

    let dw2: Vec<f64> = hidden.iter().map(|h| dy * h).collect();
    let db2 = dy;
    let dhidden: Vec<f64> = model
        .w2
        .iter()
        .zip(&hidden)
        .map(|(w, h)| dy * w * h * (1.0 - h))
        .collect();
    let dw1: Vec<Vec<f64>> =
        dhidden.iter().map(|dh| input.iter().map(|x| dh * x).collect()).collect();
    Gradients { w1: dw1, b1: dhidden, w2: dw2, b2: db2 }
}

/// Min-max normalization of a series into [0.1, 0.9]; a constant series
/// maps to 0.5 everywhere and denormalizes back to the constant.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Normalizer {
    min: f64,
    max: f64,
}

impl Normalizer {
    pub fn fit(values: &[f64]) -> Self {
        let min = values.iter().copied().fold(f64::INFINITY, f64::min);
        let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
        Normalizer { min, max }
    }

    pub fn normalize(&self, v: f64) -> f64 {
        if self.max > self.min {
            0.1 + 0.8 * (v - self.min) / (self.max - self.min)
        } else {
            0.5
        }
    }

    pub fn denormalize(&self, y: f64) -> f64 {
        if self.max > self.min {
            self.min + (y - 0.1) * (self.max - self.min) / 0.8
        } else {
            self.min
        }
    }
}

/// Sliding-window supervision pairs over the normalized series:
/// each consecutive window of `window` values maps to the next value.
pub fn make_windows(values: &[f64], window: usize) -> Result<Vec<(Vec<f64>, f64)>, String> {
    if values.len() < window + 1 {
        return Err(format!(
            "series too short for prediction: {} values, window {window} needs at least {}",
            values.len(),
            window + 1
        ));
    }
    let norm = Normalizer::fit(values);
    let scaled: Vec<f64> = values.iter().map(|&v| norm.normalize(v)).collect();
    Ok((0..values.len() - window)
        .map(|i| (scaled[i..i + window].to_vec(), scaled[i + window]))
        .collect())
}

/// Full-batch gradient descent from a seeded random initialization.
pub fn train(pairs: &[(Vec<f64>, f64)], config: &TrainConfig) -> MlpModel {
    assert!(!pairs.is_empty(), "training needs at least one pair");
    let mut rng = StdRng::seed_from_u64(config.seed);
    let mut model = MlpModel::init(config.window, config.hidden, &mut rng);
    let n = pairs.len() as f64;
    for _ in 0..config.epochs {
        let mut acc = Gradients {
            w1: vec![vec![0.0; config.window]; config.hidden],
            b1: vec![0.0; config.hidden],
            w2: vec![0.0; config.hidden],
            b2: 0.0,
        };
        for (input, target) in pairs {
            let g = gradient(&model, input, *target);
            for (row, grow) in acc.w1.iter_mut().zip(&g.w1) {
                for (a, b) in row.iter_mut().zip(grow) {
                    *a += b;
                }
            }
            for (a, b) in acc.b1.iter_mut().zip(&g.b1) {
                *a += b;
            }
            for (a, b) in acc.w2.iter_mut().zip(&g.w2) {
                *a += b;
            }
            acc.b2 += g.b2;
        }
        let step = config.learning_rate / n;
        for (row, grow) in model.w1.iter_mut().zip(&acc.w1) {
            for (w, g) in row.iter_mut().zip(grow) {
                *w -= step * g;
            }
        }
        for (b, g) in model.b1.iter_mut().zip(&acc.b1) {
            *b -= step * g;
        }
        for (w, g) in model.w2.iter_mut().zip(&acc.w2) {
            *w -= step * g;
        }
        model.b2 -= step * acc.b2;
    }
    model
}

pub fn mse(model: &MlpModel, pairs: &[(Vec<f64>, f64)]) -> f64 {
    pairs
        .iter()
        .map(|(input, target)| {
            let e = model.forward(input) - target;
            e * e
        })
        .sum::<f64>()
        / pairs.len() as f64
}

/// Trains on the series windows and extrapolates one step, denormalized
/// back to the series scale. Returns `None` (prediction skipped) when the
/// series is shorter than `window + 1`.
pub fn predict_next(values: &[f64], config: &TrainConfig) -> Option<f64> {
    let pairs = make_windows(values, config.window).ok()?;
    let model = train(&pairs, config);
    let norm = Normalizer::fit(values);
    let last: Vec<f64> = values[values.len() - config.window..]
        .iter()
        .map(|&v| norm.normalize(v))
        .collect();
    Some(norm.denormalize(model.forward(&last)))
}

/// Stable per-series seed: base seed mixed with an FNV-1a hash of the agent
/// name and metric, so independent series train independently but
/// reproducibly.
pub fn series_seed(base: u64, agent: &str, metric: &str) -> u64 {
    let mut hash = 0xcbf29ce484222325u64;
    for byte in agent.bytes().chain([0u8]).chain(metric.bytes()) {
        hash ^= byte as u64;
        hash = hash.wrapping_mul(0x100000001b3);
    }
    base ^ hash
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn windows_enumerate_consecutively() {
        let pairs = make_windows(&[1.0, 2.0, 3.0, 4.0, 5.0], 3).unwrap();
        assert_eq!(pairs.len(), 2);
        let norm = Normalizer::fit(&[1.0, 2.0, 3.0, 4.0, 5.0]);
        assert_eq!(pairs[0].0, vec![norm.normalize(1.0), norm.normalize(2.0), norm.normalize(3.0)]);
        assert_eq!(pairs[0].1, norm.normalize(4.0));
        assert_eq!(pairs[1].1, norm.normalize(5.0));
    }

    #[test]
    fn eight_year_series_yields_five_pairs() {
        let values: Vec<f64> = (0..8).map(|i| i as f64).collect();
        assert_eq!(make_windows(&values, 3).unwrap().len(), 5);
    }

    #[test]
    fn constant_series_normalizes_to_half() {
        let pairs = make_windows(&[5.0; 6], 3).unwrap();
        for (input, target) in &pairs {
            assert!(input.iter().all(|&v| v == 0.5));
            assert_eq!(*target, 0.5);
        }
    }

    #[test]
    fn too_short_series_is_an_error() {
        assert!(make_windows(&[1.0, 2.0, 3.0], 3).is_err());
    }

    #[test]
    fn zero_model_outputs_half() {
        let model = MlpModel::zeros(3, 5);
        assert_eq!(model.forward(&[0.3, 0.4, 0.5]), 0.5);
    }

    #[test]
    fn forward_matches_hand_computation() {
        // 2 inputs, 1 hidden unit: y = s(0.5 * s(0.25*0.2 + (-0.5)*0.4 + 0.1) - 0.3)
        let model = MlpModel {
            w1: vec![vec![0.25, -0.5]],
            b1: vec![0.1],
            w2: vec![0.5],
            b2: -0.3,
        };
        let h = sigmoid(0.25 * 0.2 + (-0.5) * 0.4 + 0.1);
        let expected = sigmoid(0.5 * h - 0.3);
        assert!((model.forward(&[0.2, 0.4]) - expected).abs() < 1e-12);
    }

    fn finite_difference(model: &MlpModel, input: &[f64], target: f64) -> Gradients {
        let eps = 1e-5;
        let loss = |m: &MlpModel| {
            let e = m.forward(input) - target;
            0.5 * e * e
        };
        let mut out = Gradients {
            w1: vec![vec![0.0; model.window()]; model.w1.len()],
            b1: vec![0.0; model.b1.len()],
            w2: vec![0.0; model.w2.len()],
            b2: 0.0,
        };
        let mut probe = model.clone();
        for i in 0..model.w1.len() {
            for j in 0..model.window() {
                probe.w1[i][j] = model.w1[i][j] + eps;
                let up = loss(&probe);
                probe.w1[i][j] = model.w1[i][j] - eps;
                let down = loss(&probe);
                probe.w1[i][j] = model.w1[i][j];
                out.w1[i][j] = (up - down) / (2.0 * eps);
            }
        }
        for i in 0..model.b1.len() {
            probe.b1[i] = model.b1[i] + eps;
            let up = loss(&probe);
            probe.b1[i] = model.b1[i] - eps;
            let down = loss(&probe);
            probe.b1[i] = model.b1[i];
            out.b1[i] = (up - down) / (2.0 * eps);
        }
        for i in 0..model.w2.len() {
            probe.w2[i] = model.w2[i] + eps;
            let up = loss(&probe);
            probe.w2[i] = model.w2[i] - eps;
            let down = loss(&probe);
            probe.w2[i] = model.w2[i];
            out.w2[i] = (up - down) / (2.0 * eps);
        }
        probe.b2 = model.b2 + eps;
        let up = loss(&probe);
        probe.b2 = model.b2 - eps;
        let down = loss(&probe);
        out.b2 = (up - down) / (2.0 * eps);
        out
    }

    fn assert_close(analytic: f64, numeric: f64) {
        let tol = 1e-6 * analytic.abs().max(numeric.abs()).max(1.0);
        assert!(
            (analytic - numeric).abs() <= tol,
            "gradient mismatch: analytic {analytic} vs numeric {numeric}"
        );
    }

    #[test]
    fn gradients_match_finite_differences() {
        let mut rng = StdRng::seed_from_u64(11);
        for _ in 0..10 {
            let window = rng.gen_range(2..=4);
            let hidden = rng.gen_range(2..=6);
            let model = MlpModel::init(window, hidden, &mut rng);
            let input: Vec<f64> = (0..window).map(|_| rng.gen_range(0.0..1.0)).collect();
            let target = rng.gen_range(0.0..1.0);
            let analytic = gradient(&model, &input, target);
            let numeric = finite_difference(&model, &input, target);
            for (arow, nrow) in analytic.w1.iter().zip(&numeric.w1) {
                for (&a, &n) in arow.iter().zip(nrow) {
                    assert_close(a, n);
                }
            }
            for (&a, &n) in analytic.b1.iter().zip(&numeric.b1) {
                assert_close(a, n);
            }
            for (&a, &n) in analytic.w2.iter().zip(&numeric.w2) {
                assert_close(a, n);
            }
            assert_close(analytic.b2, numeric.b2);
        }
    }

    #[test]
    fn zero_error_sample_has_zero_gradients() {
        let mut rng = StdRng::seed_from_u64(5);
        let model = MlpModel::init(3, 4, &mut rng);
        let input = [0.2, 0.5, 0.8];
        let target = model.forward(&input);
        let g = gradient(&model, &input, target);
        assert!(g.w1.iter().flatten().all(|&v| v == 0.0));
        assert!(g.b1.iter().all(|&v| v == 0.0));
        assert!(g.w2.iter().all(|&v| v == 0.0));
        assert_eq!(g.b2, 0.0);
    }

    #[test]
    fn zero_input_freezes_first_layer_weights() {
        // dL/dw1[i][j] = dh[i] * x[j]; with x = 0 the whole matrix gradient
        // vanishes while biases still move
        let mut rng = StdRng::seed_from_u64(6);
        let model = MlpModel::init(3, 4, &mut rng);
        let g = gradient(&model, &[0.0, 0.0, 0.0], 0.9);
        assert!(g.w1.iter().flatten().all(|&v| v == 0.0));
        assert!(g.b1.iter().any(|&v| v != 0.0));
    }

    #[test]
    fn training_on_constant_series_converges() {
        let pairs = make_windows(&[5.0; 8], 3).unwrap();
        let config = TrainConfig { seed: 42, ..TrainConfig::default() };
        let model = train(&pairs, &config);
        assert!(mse(&model, &pairs) <= 1e-4);
    }

    #[test]
    fn training_is_deterministic() {
        let values: Vec<f64> = (0..8).map(|i| (i as f64).sin() + 2.0).collect();
        let pairs = make_windows(&values, 3).unwrap();
        let config = TrainConfig { seed: 7, ..TrainConfig::default() };
        assert_eq!(train(&pairs, &config), train(&pairs, &config));
    }

    #[test]
    fn zero_epochs_returns_initialization() {
        let pairs = make_windows(&[1.0, 2.0, 3.0, 4.0, 5.0], 3).unwrap();
        let config = TrainConfig { epochs: 0, seed: 3, ..TrainConfig::default() };
        let mut rng = StdRng::seed_from_u64(3);
        let expected = MlpModel::init(3, 5, &mut rng);
        assert_eq!(train(&pairs, &config), expected);
    }

    #[test]
    fn loss_is_non_increasing_over_epoch_strides() {
        let values: Vec<f64> = (0..8).map(|i| 10.0 + 3.0 * (i as f64 * 0.7).cos()).collect();
        let pairs = make_windows(&values, 3).unwrap();
        let mut last = f64::INFINITY;
        for checkpoints in 1..=10 {
            let config = TrainConfig { epochs: checkpoints * 100, seed: 9, ..TrainConfig::default() };
            let model = train(&pairs, &config);
            let loss = mse(&model, &pairs);
            assert!(loss <= last + 1e-12, "loss rose from {last} to {loss}");
            last = loss;
        }
    }

    #[test]
    fn constant_series_predicts_the_constant() {
        let prediction = predict_next(&[5.0; 5], &TrainConfig { seed: 1, ..TrainConfig::default() });
        let v = prediction.unwrap();
        assert!((v - 5.0).abs() <= 0.5, "got {v}");
    }

    #[test]
    fn ramp_prediction_clears_directional_floor() {
        let values: Vec<f64> = (1..=8).map(|i| i as f64).collect();
        let v = predict_next(&values, &TrainConfig { seed: 1, ..TrainConfig::default() }).unwrap();
        assert!(v > 6.0, "expected ramp prediction above 6.0, got {v}");
    }

    #[test]
    fn short_series_prediction_is_skipped() {
        assert_eq!(predict_next(&[1.0, 2.0, 3.0], &TrainConfig::default()), None);
    }

    #[test]
    fn normalization_round_trips() {
        let values = [3.0, 9.5, 4.25, 8.0];
        let norm = Normalizer::fit(&values);
        for v in values {
            assert!((norm.denormalize(norm.normalize(v)) - v).abs() < 1e-12);
        }
    }

    #[test]
    fn predictions_stay_within_the_scale_band() {
        let mut rng = StdRng::seed_from_u64(21);
        for case in 0..10 {
            let values: Vec<f64> = (0..8).map(|_| rng.gen_range(-50.0..50.0)).collect();
            let config = TrainConfig { seed: case, ..TrainConfig::default() };
            let v = predict_next(&values, &config).unwrap();
            let min = values.iter().copied().fold(f64::INFINITY, f64::min);
            let max = values.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let range = max - min;
            assert!(v >= min - 0.5 * range && v <= max + 0.5 * range, "{v} outside band");
        }
    }

    #[test]
    fn series_seed_is_stable_and_distinct() {
        assert_eq!(series_seed(42, "P1", "finance"), series_seed(42, "P1", "finance"));
        assert_ne!(series_seed(42, "P1", "finance"), series_seed(42, "P1", "commodity"));
        assert_ne!(series_seed(42, "P1", "finance"), series_seed(42, "P2", "finance"));
    }
}
