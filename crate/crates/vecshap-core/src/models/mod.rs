//! The predictive-model zoo: ridge-regularized linear regression, a
//! two-hidden-layer MLP, a mean-voting ensemble, and an LDA binary
//! classifier, all behind one `fit`/`predict` contract.
//!
//! A fitted model is immutable plain data; `predict` is a pure function of
//! its input and may be called from many threads at once. The attribution
//! engines rely on both properties.

mod lda;
mod linear;
mod mlp;

pub use lda::{fit_lda, LdaModel};
pub use linear::{fit_ridge, LinearModel};
pub use mlp::{fit_mlp, MlpConfig, MlpModel};

use alloc::boxed::Box;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use crate::data::Dataset;
use crate::linalg::Matrix;
use crate::{Error, Result};

/// Affine representation of a model: `intercept + coefficients . x`.
#[derive(Debug, Clone, PartialEq)]
pub struct LinearForm {
    pub intercept: f64,
    pub coefficients: Vec<f64>,
}

impl LinearForm {
    pub fn evaluate(&self, x: &[f64]) -> f64 {
        self.intercept + crate::linalg::dot(&self.coefficients, x)
    }
}

/// The game whose payout the Shapley values distribute: batch prediction
/// on D-dimensional inputs.
pub trait PredictiveModel: Send + Sync {
    /// Input dimension D.
    fn dim(&self) -> usize;

    /// Predicts one value per row. Empty batches yield an empty vector;
    /// a width other than `dim` is an error.
    fn predict(&self, batch: &Matrix) -> Result<Vec<f64>>;

    /// The model's affine form, when its output is affine in the input.
    /// Models without one (the MLP) return `None`.
    fn linear_form(&self) -> Option<LinearForm> {
        None
    }

    /// Single-row convenience wrapper around [`PredictiveModel::predict`].
    fn predict_one(&self, x: &[f64]) -> Result<f64> {
        if x.len() != self.dim() {
            return Err(Error::DimMismatch {
                expected: self.dim(),
                got: x.len(),
            });
        }
        let batch = Matrix::from_vec(1, x.len(), x.to_vec());
        Ok(self.predict(&batch)?[0])
    }
}

pub(crate) fn check_batch(dim: usize, batch: &Matrix) -> Result<()> {
    if batch.rows() > 0 && batch.cols() != dim {
        return Err(Error::DimMismatch {
            expected: dim,
            got: batch.cols(),
        });
    }
    Ok(())
}

/// Arithmetic mean of at least two member models.
pub struct VotingModel {
    members: Vec<Box<dyn PredictiveModel>>,
}

impl VotingModel {
    pub fn new(members: Vec<Box<dyn PredictiveModel>>) -> Result<Self> {
        if members.len() < 2 {
            return Err(Error::Invalid(
                "voting ensemble needs at least two members".into(),
            ));
        }
        let dim = members[0].dim();
        if members.iter().any(|m| m.dim() != dim) {
            return Err(Error::Invalid(
                "voting members disagree on input dimension".into(),
            ));
        }
        Ok(VotingModel { members })
    }

    pub fn members(&self) -> &[Box<dyn PredictiveModel>] {
        &self.members
    }
}

impl PredictiveModel for VotingModel {
    fn dim(&self) -> usize {
        self.members[0].dim()
    }

    fn predict(&self, batch: &Matrix) -> Result<Vec<f64>> {
        check_batch(self.dim(), batch)?;
        let mut acc = vec![0.0; batch.rows()];
        for member in &self.members {
            for (a, p) in acc.iter_mut().zip(member.predict(batch)?) {
                *a += p;
            }
        }
        let scale = 1.0 / self.members.len() as f64;
        for a in &mut acc {
            *a *= scale;
        }
        Ok(acc)
    }

    fn linear_form(&self) -> Option<LinearForm> {
        // The mean of affine models is affine.
        let forms: Vec<LinearForm> = self
            .members
            .iter()
            .map(|m| m.linear_form())
            .collect::<Option<_>>()?;
        let scale = 1.0 / forms.len() as f64;
        let mut intercept = 0.0;
        let mut coefficients = vec![0.0; self.dim()];
        for form in &forms {
            intercept += form.intercept;
            for (c, f) in coefficients.iter_mut().zip(&form.coefficients) {
                *c += f;
            }
        }
        intercept *= scale;
        for c in &mut coefficients {
            *c *= scale;
        }
        Some(LinearForm {
            intercept,
            coefficients,
        })
    }
}

/// Declarative model configuration, used by cross-validation and the CLI.
#[derive(Debug, Clone, PartialEq)]
pub enum ModelSpec {
    Ridge { lambda: f64 },
    Mlp(MlpConfig),
    Voting(Vec<ModelSpec>),
    Lda { shrinkage: f64 },
}

impl ModelSpec {
    /// Short name used in evaluation reports.
    pub fn name(&self) -> String {
        match self {
            ModelSpec::Ridge { .. } => "ridge".into(),
            ModelSpec::Mlp(_) => "mlp".into(),
            ModelSpec::Voting(members) => {
                let names: Vec<String> = members.iter().map(ModelSpec::name).collect();
                format!("vr({})", names.join("+"))
            }
            ModelSpec::Lda { .. } => "lda".into(),
        }
    }
}

/// Fits the configured model on `train`. Target-kind preconditions are
/// enforced by the individual fitters.
pub fn fit_model(spec: &ModelSpec, train: &Dataset) -> Result<Box<dyn PredictiveModel>> {
    Ok(match spec {
        ModelSpec::Ridge { lambda } => Box::new(fit_ridge(train, *lambda)?),
        ModelSpec::Mlp(config) => Box::new(fit_mlp(train, config)?),
        ModelSpec::Lda { shrinkage } => Box::new(fit_lda(train, *shrinkage)?),
        ModelSpec::Voting(specs) => {
            let members = specs
                .iter()
                .map(|s| fit_model(s, train))
                .collect::<Result<Vec<_>>>()?;
            Box::new(VotingModel::new(members)?)
        }
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn constant_model(dim: usize, value: f64) -> LinearModel {
        LinearModel {
            intercept: value,
            coefficients: vec![0.0; dim],
            feature_means: vec![0.0; dim],
            target_mean: value,
        }
    }

    #[test]
    fn linear_predict_is_plain_arithmetic() {
        let model = LinearModel {
            intercept: 0.0,
            coefficients: vec![2.0, 3.0],
            feature_means: vec![0.0, 0.0],
            target_mean: 0.0,
        };
        assert_eq!(model.predict_one(&[1.0, 1.0]).unwrap(), 5.0);
    }

    #[test]
    fn voting_is_member_mean() {
        let voting = VotingModel::new(vec![
            Box::new(constant_model(3, 1.0)),
            Box::new(constant_model(3, 3.0)),
        ])
        .unwrap();
        let batch = Matrix::from_vec(2, 3, vec![0.0; 6]);
        assert_eq!(voting.predict(&batch).unwrap(), vec![2.0, 2.0]);
    }

    #[test]
    fn voting_needs_two_members() {
        let err = VotingModel::new(vec![Box::new(constant_model(2, 1.0))]).unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn voting_rejects_mixed_dims() {
        let err = VotingModel::new(vec![
            Box::new(constant_model(2, 1.0)),
            Box::new(constant_model(3, 1.0)),
        ])
        .unwrap_err();
        assert!(matches!(err, Error::Invalid(_)));
    }

    #[test]
    fn empty_batch_gives_empty_vector() {
        let model = constant_model(2, 4.0);
        let batch = Matrix::zeros(0, 2);
        assert_eq!(model.predict(&batch).unwrap(), Vec::<f64>::new());
    }

    #[test]
    fn dim_mismatch_is_reported() {
        let model = constant_model(2, 4.0);
        let batch = Matrix::zeros(1, 3);
        assert!(matches!(
            model.predict(&batch),
            Err(Error::DimMismatch {
                expected: 2,
                got: 3
            })
        ));
    }

    #[test]
    fn voting_linear_form_is_member_average() {
        let a = LinearModel {
            intercept: 1.0,
            coefficients: vec![2.0, 0.0],
            feature_means: vec![0.0, 0.0],
            target_mean: 1.0,
        };
        let b = LinearModel {
            intercept: 3.0,
            coefficients: vec![0.0, 4.0],
            feature_means: vec![0.0, 0.0],
            target_mean: 3.0,
        };
        let voting = VotingModel::new(vec![Box::new(a), Box::new(b)]).unwrap();
        let form = voting.linear_form().unwrap();
        assert_eq!(form.intercept, 2.0);
        assert_eq!(form.coefficients, vec![1.0, 2.0]);
    }

    #[test]
    fn models_are_send_and_sync() {
        fn assert_send_sync<T: Send + Sync>() {}
        assert_send_sync::<LinearModel>();
        assert_send_sync::<MlpModel>();
        assert_send_sync::<LdaModel>();
        assert_send_sync::<VotingModel>();
    }

    #[test]
    fn spec_names() {
        let spec = ModelSpec::Voting(vec![
            ModelSpec::Ridge { lambda: 1e-6 },
            ModelSpec::Mlp(MlpConfig::default()),
        ]);
        assert_eq!(spec.name(), "vr(ridge+mlp)");
    }
}
