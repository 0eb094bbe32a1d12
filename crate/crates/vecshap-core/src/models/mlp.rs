use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::data::{Dataset, TargetKind};
use crate::linalg::Matrix;
use crate::models::{check_batch, PredictiveModel};
use crate::rng::standard_normal;
use crate::{Error, Result};

/// Hyperparameters for [`fit_mlp`]. The architecture is fixed to two
/// tanh hidden layers and a linear scalar output.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpConfig {
    pub hidden: (usize, usize),
    pub learning_rate: f64,
    pub epochs: usize,
    pub batch_size: usize,
    pub seed: u64,
}

impl Default for MlpConfig {
    fn default() -> Self {
        MlpConfig {
            hidden: (32, 16),
            learning_rate: 1e-2,
            epochs: 200,
            batch_size: 32,
            seed: 0,
        }
    }
}

/// Two-hidden-layer perceptron trained by plain mini-batch gradient
/// descent on mean squared error. The forward pass is deterministic given
/// the weights; training is deterministic given the seed and data order.
#[derive(Debug, Clone, PartialEq)]
pub struct MlpModel {
    dim: usize,
    h1: usize,
    h2: usize,
    // Row-major: w1[i * h1 + j] connects input i to hidden-1 unit j.
    w1: Vec<f64>,
    b1: Vec<f64>,
    w2: Vec<f64>,
    b2: Vec<f64>,
    w3: Vec<f64>,
    b3: f64,
}

impl MlpModel {
    /// Freshly seeded network: weights drawn N(0, 1/fan_in), biases zero.
    pub fn init(dim: usize, hidden: (usize, usize), seed: u64) -> Self {
        let (h1, h2) = hidden;
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut draw = |count: usize, fan_in: usize| -> Vec<f64> {
            let scale = 1.0 / libm::sqrt(fan_in as f64);
            (0..count)
                .map(|_| scale * standard_normal(&mut rng))
                .collect()
        };
        let w1 = draw(dim * h1, dim);
        let w2 = draw(h1 * h2, h1);
        let w3 = draw(h2, h2);
        MlpModel {
            dim,
            h1,
            h2,
            w1,
            b1: vec![0.0; h1],
            w2,
            b2: vec![0.0; h2],
            w3,
            b3: 0.0,
        }
    }

    pub fn hidden(&self) -> (usize, usize) {
        (self.h1, self.h2)
    }

    /// Raw parameter views for serialization.
    pub fn weights(&self) -> (&[f64], &[f64], &[f64], &[f64], &[f64], f64) {
        (&self.w1, &self.b1, &self.w2, &self.b2, &self.w3, self.b3)
    }

    pub fn from_weights(
        dim: usize,
        hidden: (usize, usize),
        w1: Vec<f64>,
        b1: Vec<f64>,
        w2: Vec<f64>,
        b2: Vec<f64>,
        w3: Vec<f64>,
        b3: f64,
    ) -> Result<Self> {
        let (h1, h2) = hidden;
        if w1.len() != dim * h1 || b1.len() != h1 || w2.len() != h1 * h2 || b2.len() != h2
            || w3.len() != h2
        {
            return Err(Error::Invalid("MLP weight shapes are inconsistent".into()));
        }
        Ok(MlpModel {
            dim,
            h1,
            h2,
            w1,
            b1,
            w2,
            b2,
            w3,
            b3,
        })
    }

    pub fn n_params(&self) -> usize {
        self.w1.len() + self.b1.len() + self.w2.len() + self.b2.len() + self.w3.len() + 1
    }

    /// All parameters flattened in the order w1, b1, w2, b2, w3, b3.
    pub fn params(&self) -> Vec<f64> {
        let mut p = Vec::with_capacity(self.n_params());
        p.extend_from_slice(&self.w1);
        p.extend_from_slice(&self.b1);
        p.extend_from_slice(&self.w2);
        p.extend_from_slice(&self.b2);
        p.extend_from_slice(&self.w3);
        p.push(self.b3);
        p
    }

    /// Overwrites all parameters from a flat slice in [`params`] order.
    pub fn set_params(&mut self, p: &[f64]) -> Result<()> {
        if p.len() != self.n_params() {
            return Err(Error::DimMismatch {
                expected: self.n_params(),
                got: p.len(),
            });
        }
        let mut offset = 0;
        for dst in [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2, &mut self.w3] {
            dst.copy_from_slice(&p[offset..offset + dst.len()]);
            offset += dst.len();
        }
        self.b3 = p[offset];
        Ok(())
    }

    fn forward_row(&self, x: &[f64], a1: &mut [f64], a2: &mut [f64]) -> f64 {
        for j in 0..self.h1 {
            let mut z = self.b1[j];
            for (i, &v) in x.iter().enumerate() {
                z += v * self.w1[i * self.h1 + j];
            }
            a1[j] = libm::tanh(z);
        }
        for k in 0..self.h2 {
            let mut z = self.b2[k];
            for (j, &v) in a1.iter().enumerate() {
                z += v * self.w2[j * self.h2 + k];
            }
            a2[k] = libm::tanh(z);
        }
        let mut out = self.b3;
        for (k, &v) in a2.iter().enumerate() {
            out += v * self.w3[k];
        }
        out
    }

    /// Mean squared error over the batch.
    pub fn loss(&self, batch: &Matrix, targets: &[f64]) -> Result<f64> {
        let preds = self.predict(batch)?;
        if preds.len() != targets.len() {
            return Err(Error::DimMismatch {
                expected: preds.len(),
                got: targets.len(),
            });
        }
        if preds.is_empty() {
            return Ok(0.0);
        }
        Ok(preds
            .iter()
            .zip(targets)
            .map(|(p, y)| (p - y) * (p - y))
            .sum::<f64>()
            / preds.len() as f64)
    }

    /// Mean-squared-error loss and its analytic gradient with respect to
    /// every parameter, flattened in [`params`] order.
    pub fn loss_and_grad(&self, batch: &Matrix, targets: &[f64]) -> Result<(f64, Vec<f64>)> {
        check_batch(self.dim, batch)?;
        if batch.rows() != targets.len() {
            return Err(Error::DimMismatch {
                expected: batch.rows(),
                got: targets.len(),
            });
        }
        let k_inv = if batch.rows() == 0 {
            0.0
        } else {
            1.0 / batch.rows() as f64
        };

        let mut gw1 = vec![0.0; self.w1.len()];
        let mut gb1 = vec![0.0; self.h1];
        let mut gw2 = vec![0.0; self.w2.len()];
        let mut gb2 = vec![0.0; self.h2];
        let mut gw3 = vec![0.0; self.h2];
        let mut gb3 = 0.0;
        let mut loss = 0.0;

        let mut a1 = vec![0.0; self.h1];
        let mut a2 = vec![0.0; self.h2];
        let mut dz2 = vec![0.0; self.h2];
        let mut dz1 = vec![0.0; self.h1];

        for (row, &y) in batch.iter_rows().zip(targets) {
            let out = self.forward_row(row, &mut a1, &mut a2);
            let err = out - y;
            loss += err * err * k_inv;
            let dout = 2.0 * err * k_inv;

            for k in 0..self.h2 {
                gw3[k] += dout * a2[k];
                // d tanh = 1 - tanh^2
                dz2[k] = dout * self.w3[k] * (1.0 - a2[k] * a2[k]);
            }
            gb3 += dout;

            for j in 0..self.h1 {
                let mut da1 = 0.0;
                for k in 0..self.h2 {
                    gw2[j * self.h2 + k] += dz2[k] * a1[j];
                    da1 += dz2[k] * self.w2[j * self.h2 + k];
                }
                dz1[j] = da1 * (1.0 - a1[j] * a1[j]);
                gb1[j] += dz1[j];
            }
            for k in 0..self.h2 {
                gb2[k] += dz2[k];
            }
            for (i, &v) in row.iter().enumerate() {
                for j in 0..self.h1 {
                    gw1[i * self.h1 + j] += dz1[j] * v;
                }
            }
        }

        let mut grad = Vec::with_capacity(self.n_params());
        grad.extend_from_slice(&gw1);
        grad.extend_from_slice(&gb1);
        grad.extend_from_slice(&gw2);
        grad.extend_from_slice(&gb2);
        grad.extend_from_slice(&gw3);
        grad.push(gb3);
        Ok((loss, grad))
    }

    fn gradient_step(&mut self, grad: &[f64], lr: f64) {
        let mut offset = 0;
        for dst in [&mut self.w1, &mut self.b1, &mut self.w2, &mut self.b2, &mut self.w3] {
            for (p, g) in dst.iter_mut().zip(&grad[offset..]) {
                *p -= lr * g;
            }
            offset += dst.len();
        }
        self.b3 -= lr * grad[offset];
    }
}

impl PredictiveModel for MlpModel {
    fn dim(&self) -> usize {
        self.dim
    }

    fn predict(&self, batch: &Matrix) -> Result<Vec<f64>> {
        check_batch(self.dim, batch)?;
        let mut a1 = vec![0.0; self.h1];
        let mut a2 = vec![0.0; self.h2];
        Ok(batch
            .iter_rows()
            .map(|row| self.forward_row(row, &mut a1, &mut a2))
            .collect())
    }
}

/// Trains an MLP regressor with plain mini-batch gradient descent.
/// A non-finite loss aborts with [`Error::Diverged`] naming the epoch.
pub fn fit_mlp(train: &Dataset, config: &MlpConfig) -> Result<MlpModel> {
    if train.target_kind() != TargetKind::Continuous {
        return Err(Error::Invalid("MLP regression requires a continuous target".into()));
    }
    if train.len() < 2 {
        return Err(Error::Invalid("MLP training needs at least 2 records".into()));
    }
    if config.hidden.0 == 0 || config.hidden.1 == 0 {
        return Err(Error::Invalid("hidden widths must be positive".into()));
    }
    if config.batch_size == 0 {
        return Err(Error::Invalid("batch_size must be positive".into()));
    }
    if !(config.learning_rate > 0.0 && config.learning_rate.is_finite()) {
        return Err(Error::Invalid("learning_rate must be positive and finite".into()));
    }

    let mut model = MlpModel::init(train.dim(), config.hidden, config.seed);
    // The init draws above consumed from a seed-derived stream; shuffles
    // continue on an independent stream so changing widths does not
    // reshuffle the data.
    let mut shuffle_rng = ChaCha8Rng::seed_from_u64(crate::rng::mix(config.seed));

    let x = train.embeddings();
    let y = train.targets();
    let mut order: Vec<usize> = (0..train.len()).collect();

    for epoch in 0..config.epochs {
        order.shuffle(&mut shuffle_rng);
        for chunk in order.chunks(config.batch_size) {
            let mut rows = Vec::with_capacity(chunk.len() * train.dim());
            let mut targets = Vec::with_capacity(chunk.len());
            for &i in chunk {
                rows.extend_from_slice(x.row(i));
                targets.push(y[i]);
            }
            let batch = Matrix::from_vec(chunk.len(), train.dim(), rows);
            let (_, grad) = model.loss_and_grad(&batch, &targets)?;
            model.gradient_step(&grad, config.learning_rate);
        }
        let epoch_loss = model.loss(x, y)?;
        if !epoch_loss.is_finite() {
            return Err(Error::Diverged { epoch });
        }
    }
    Ok(model)
}
