use alloc::vec;
use alloc::vec::Vec;

use crate::data::{Dataset, TargetKind};
use crate::linalg::{dot, solve, Matrix};
use crate::models::{check_batch, LinearForm, PredictiveModel};
use crate::{Error, Result};

/// Linear regressor in mean-deviation form:
/// `predict(x) = target_mean + coefficients . (x - feature_means)`,
/// equivalently `intercept + coefficients . x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearModel {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
    pub feature_means: Vec<f64>,
    pub target_mean: f64,
}

impl LinearModel {
    pub fn predict_row(&self, x: &[f64]) -> f64 {
        let mut acc = self.target_mean;
        for ((c, m), v) in self.coefficients.iter().zip(&self.feature_means).zip(x) {
            acc += c * (v - m);
        }
        acc
    }
}

impl PredictiveModel for LinearModel {
    fn dim(&self) -> usize {
        self.coefficients.len()
    }

    fn predict(&self, batch: &Matrix) -> Result<Vec<f64>> {
        check_batch(self.dim(), batch)?;
        Ok(batch.iter_rows().map(|row| self.predict_row(row)).collect())
    }

    fn linear_form(&self) -> Option<LinearForm> {
        Some(LinearForm {
            intercept: self.intercept,
            coefficients: self.coefficients.clone(),
        })
    }
}

/// Fits a linear model minimizing `mean((y - w.x - b)^2) + lambda * |w|^2`
/// on the centered normal equations. With `lambda = 0` and a full-rank
/// design this is ordinary least squares.
pub fn fit_ridge(train: &Dataset, ridge_lambda: f64) -> Result<LinearModel> {
    if train.target_kind() != TargetKind::Continuous {
        return Err(Error::Invalid(
            "ridge regression requires a continuous target".into(),
        ));
    }
    if train.len() < 2 {
        return Err(Error::Invalid("ridge regression needs at least 2 records".into()));
    }
    if !(ridge_lambda >= 0.0) {
        return Err(Error::Invalid("ridge_lambda must be nonnegative".into()));
    }

    let x = train.embeddings();
    let y = train.targets();
    let (n, d) = (x.rows(), x.cols());
    let n_f = n as f64;

    let feature_means = x.col_means();
    let target_mean = y.iter().sum::<f64>() / n_f;

    // Normal equations on centered data:
    //   (Xc^T Xc / N + lambda I) w = Xc^T yc / N
    let mut gram = Matrix::zeros(d, d);
    let mut rhs = vec![0.0; d];
    let mut centered = vec![0.0; d];
    for (row, &target) in x.iter_rows().zip(y) {
        for (c, (v, m)) in centered.iter_mut().zip(row.iter().zip(&feature_means)) {
            *c = v - m;
        }
        let yc = target - target_mean;
        for a in 0..d {
            let ca = centered[a];
            rhs[a] += ca * yc;
            let grow = gram.row_mut(a);
            for (b, &cb) in centered.iter().enumerate() {
                grow[b] += ca * cb;
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            let v = gram.get(a, b) / n_f;
            gram.set(a, b, v);
        }
        gram.set(a, a, gram.get(a, a) + ridge_lambda);
        rhs[a] /= n_f;
    }

    let coefficients = solve(
        &gram,
        &rhs,
        "normal equations are singular; use a positive ridge_lambda",
    )?;
    let intercept = target_mean - dot(&coefficients, &feature_means);
    Ok(LinearModel {
        intercept,
        coefficients,
        feature_means,
        target_mean,
    })
}
