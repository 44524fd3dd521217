//! Fully connected networks trained by plain mini-batch SGD.
//!
//! One or two ReLU hidden layers; identity output with mean squared error
//! (regression) or softmax output with mean cross-entropy
//! (classification). Regression targets are standardised internally and
//! predictions mapped back. Weights use He-uniform initialisation
//! `U(−√(6/fan_in), √(6/fan_in))` with zero biases, drawn from the
//! training seed; mini-batch order is reshuffled every epoch from an
//! independent substream. No momentum, no early stopping.
//!
//! Parameters live in one flat vector: for each layer, the weight matrix
//! (row-major, `out × in`) followed by the bias vector. [`MlpNet`] exposes
//! the loss and its analytic gradient over that vector.

use super::ModelError;
use crate::rng::Stream;
use serde::{Deserialize, Serialize};

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpParams {
    pub hidden: Vec<usize>,
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
}

/// Network shape and loss, independent of any particular weights.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpNet {
    /// Layer widths: input, hidden…, output.
    pub sizes: Vec<usize>,
    pub classification: bool,
}

impl MlpNet {
    pub fn new(inputs: usize, hidden: &[usize], outputs: usize, classification: bool) -> Self {
        let mut sizes = vec![inputs];
        sizes.extend_from_slice(hidden);
        sizes.push(outputs);
        MlpNet {
            sizes,
            classification,
        }
    }

    pub fn n_params(&self) -> usize {
        self.sizes.windows(2).map(|w| w[1] * w[0] + w[1]).sum()
    }

    pub fn init(&self, stream: &mut Stream) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.n_params());
        for w in self.sizes.windows(2) {
            let bound = (6.0 / w[0] as f64).sqrt();
            p.extend((0..w[0] * w[1]).map(|_| stream.uniform_range(-bound, bound)));
            p.extend(std::iter::repeat_n(0.0, w[1]));
        }
        p
    }

    /// Layer activations for one input; the last entry is the raw output
    /// (before softmax).
    fn forward(&self, params: &[f64], x: &[f64]) -> Vec<Vec<f64>> {
        let mut acts = vec![x.to_vec()];
        let mut off = 0;
        let layers = self.sizes.len() - 1;
        for (l, w) in self.sizes.windows(2).enumerate() {
            let (n_in, n_out) = (w[0], w[1]);
            let weights = &params[off..off + n_in * n_out];
            let bias = &params[off + n_in * n_out..off + n_in * n_out + n_out];
            off += n_in * n_out + n_out;
            let input = &acts[l];
            let mut out: Vec<f64> = (0..n_out)
                .map(|o| {
                    bias[o]
                        + weights[o * n_in..(o + 1) * n_in]
                            .iter()
                            .zip(input)
                            .map(|(a, b)| a * b)
                            .sum::<f64>()
                })
                .collect();
            if l + 1 < layers {
                for v in &mut out {
                    *v = v.max(0.0);
                }
            }
            acts.push(out);
        }
        acts
    }

    /// Output for one input: a value, or class probabilities.
    pub fn output(&self, params: &[f64], x: &[f64]) -> Vec<f64> {
        let raw = self.forward(params, x).pop().unwrap_or_default();
        if self.classification {
            softmax(&raw)
        } else {
            raw
        }
    }

    /// Mean loss over a batch; `y` holds targets or class indices.
    pub fn loss(&self, params: &[f64], x: &[Vec<f64>], y: &[f64]) -> f64 {
        let total: f64 = x
            .iter()
            .zip(y)
            .map(|(row, t)| {
                let raw = self.forward(params, row).pop().unwrap_or_default();
                self.sample_loss(&raw, *t)
            })
            .sum();
        total / x.len() as f64
    }

    fn sample_loss(&self, raw: &[f64], t: f64) -> f64 {
        if self.classification {
            let m = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
            let lse = m + raw.iter().map(|v| (v - m).exp()).sum::<f64>().ln();
            lse - raw[t as usize]
        } else {
            (raw[0] - t).powi(2)
        }
    }

    /// Mean loss and its gradient with respect to the flat parameters.
    pub fn loss_and_gradient(&self, params: &[f64], x: &[Vec<f64>], y: &[f64]) -> (f64, Vec<f64>) {
        let b = x.len() as f64;
        let mut grad = vec![0.0; params.len()];
        let mut loss = 0.0;
        let layers = self.sizes.len() - 1;
        let offsets: Vec<usize> = self
            .sizes
            .windows(2)
            .scan(0, |acc, w| {
                let at = *acc;
                *acc += w[0] * w[1] + w[1];
                Some(at)
            })
            .collect();
        for (row, t) in x.iter().zip(y) {
            let acts = self.forward(params, row);
            let raw = &acts[layers];
            loss += self.sample_loss(raw, *t);
            let mut delta: Vec<f64> = if self.classification {
                let mut p = softmax(raw);
                p[*t as usize] -= 1.0;
                p.iter().map(|v| v / b).collect()
            } else {
                vec![2.0 * (raw[0] - t) / b]
            };
            for l in (0..layers).rev() {
                let (n_in, n_out) = (self.sizes[l], self.sizes[l + 1]);
                let off = offsets[l];
                let input = &acts[l];
                for o in 0..n_out {
                    for i in 0..n_in {
                        grad[off + o * n_in + i] += delta[o] * input[i];
                    }
                    grad[off + n_in * n_out + o] += delta[o];
                }
                if l > 0 {
                    let weights = &params[off..off + n_in * n_out];
                    delta = (0..n_in)
                        .map(|i| {
                            if input[i] <= 0.0 {
                                0.0
                            } else {
                                (0..n_out).map(|o| weights[o * n_in + i] * delta[o]).sum()
                            }
                        })
                        .collect();
                }
            }
        }
        (loss / b, grad)
    }
}

fn softmax(raw: &[f64]) -> Vec<f64> {
    let m = raw.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let e: Vec<f64> = raw.iter().map(|v| (v - m).exp()).collect();
    let s: f64 = e.iter().sum();
    e.iter().map(|v| v / s).collect()
}

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct MlpModel {
    pub net: MlpNet,
    pub params: Vec<f64>,
    /// Target standardisation (regression only).
    pub y_mean: f64,
    pub y_sd: f64,
}

impl MlpModel {
    /// `y` holds regression targets or class indices; `n_classes` selects
    /// classification.
    pub fn fit(
        x: &[Vec<f64>],
        y: &[f64],
        n_classes: Option<usize>,
        p: &MlpParams,
        seed: u64,
    ) -> Result<MlpModel, ModelError> {
        if p.hidden.is_empty() || p.hidden.len() > 2 || p.hidden.contains(&0) {
            return Err(ModelError::Spec(
                "mlp needs 1 or 2 hidden layers of width >= 1".into(),
            ));
        }
        if !(p.learning_rate > 0.0 && p.learning_rate.is_finite()) || p.batch_size == 0 {
            return Err(ModelError::Spec(
                "mlp needs learning_rate > 0 and batch_size >= 1".into(),
            ));
        }
        if x.is_empty() {
            return Err(ModelError::Training("mlp needs training rows".into()));
        }
        let net = MlpNet::new(x[0].len(), &p.hidden, n_classes.unwrap_or(1), n_classes.is_some());
        let (y_mean, y_sd, targets) = if n_classes.is_some() {
            (0.0, 1.0, y.to_vec())
        } else {
            let m = y.iter().sum::<f64>() / y.len() as f64;
            let var = y.iter().map(|v| (v - m).powi(2)).sum::<f64>() / y.len() as f64;
            let sd = if var > 0.0 { var.sqrt() } else { 1.0 };
            (m, sd, y.iter().map(|v| (v - m) / sd).collect())
        };
        let root = Stream::new(seed);
        let mut params = net.init(&mut root.substream(0));
        let mut order_stream = root.substream(1);
        let n = x.len();
        let mut bx = Vec::with_capacity(p.batch_size);
        let mut by = Vec::with_capacity(p.batch_size);
        for _ in 0..p.epochs {
            let perm = order_stream.permutation(n);
            for chunk in perm.chunks(p.batch_size) {
                bx.clear();
                by.clear();
                for &i in chunk {
                    bx.push(x[i].clone());
                    by.push(targets[i]);
                }
                let (_, g) = net.loss_and_gradient(&params, &bx, &by);
                for (w, gi) in params.iter_mut().zip(&g) {
                    *w -= p.learning_rate * gi;
                }
            }
        }
        if params.iter().any(|v| !v.is_finite()) {
            return Err(ModelError::Training(
                "mlp weights diverged; lower the learning rate".into(),
            ));
        }
        Ok(MlpModel {
            net,
            params,
            y_mean,
            y_sd,
        })
    }

    /// Value (regression) or class index (classification).
    pub fn predict_row(&self, row: &[f64]) -> f64 {
        let out = self.net.output(&self.params, row);
        if self.net.classification {
            super::argmax(&out) as f64
        } else {
            out[0] * self.y_sd + self.y_mean
        }
    }
}
