use alloc::vec;
use alloc::vec::Vec;

use crate::data::{Dataset, TargetKind};
use crate::linalg::{dot, solve, Matrix};
use crate::models::{check_batch, LinearForm, PredictiveModel};
use crate::{Error, Result};

/// Two-class linear discriminant. `predict` returns the real-valued
/// decision score (the explanation target); labels come from
/// [`LdaModel::classify`], which thresholds the score at 0.
#[derive(Debug, Clone, PartialEq)]
pub struct LdaModel {
    pub class_means: [Vec<f64>; 2],
    /// Regularized inverse pooled covariance applied to the mean
    /// difference.
    pub projection: Vec<f64>,
    pub bias: f64,
    pub priors: [f64; 2],
}

impl LdaModel {
    pub fn score_row(&self, x: &[f64]) -> f64 {
        dot(&self.projection, x) + self.bias
    }

    /// Hard labels: 1 where the decision score is positive.
    pub fn classify(&self, batch: &Matrix) -> Result<Vec<u8>> {
        Ok(self
            .predict(batch)?
            .into_iter()
            .map(|s| u8::from(s > 0.0))
            .collect())
    }
}

impl PredictiveModel for LdaModel {
    fn dim(&self) -> usize {
        self.projection.len()
    }

    fn predict(&self, batch: &Matrix) -> Result<Vec<f64>> {
        check_batch(self.dim(), batch)?;
        Ok(batch.iter_rows().map(|row| self.score_row(row)).collect())
    }

    fn linear_form(&self) -> Option<LinearForm> {
        Some(LinearForm {
            intercept: self.bias,
            coefficients: self.projection.clone(),
        })
    }
}

/// Fits a two-class LDA. The pooled within-class covariance is
/// regularized as `(1 - shrinkage) * S + shrinkage * diag(S)` before
/// inversion.
pub fn fit_lda(train: &Dataset, shrinkage: f64) -> Result<LdaModel> {
    if train.target_kind() != TargetKind::Binary {
        return Err(Error::Invalid("LDA requires a binary target".into()));
    }
    if !(0.0..=1.0).contains(&shrinkage) {
        return Err(Error::Invalid("shrinkage must lie in [0, 1]".into()));
    }
    let labels = train.binary_labels()?;
    let d = train.dim();
    let x = train.embeddings();

    let counts = [
        labels.iter().filter(|&&l| l == 0).count(),
        labels.iter().filter(|&&l| l == 1).count(),
    ];
    if counts[0] == 0 || counts[1] == 0 {
        return Err(Error::Invalid(alloc::format!(
            "class {} is absent from the training data",
            usize::from(counts[0] != 0)
        )));
    }

    let mut class_means = [vec![0.0; d], vec![0.0; d]];
    for (row, &label) in x.iter_rows().zip(&labels) {
        for (m, v) in class_means[label as usize].iter_mut().zip(row) {
            *m += v;
        }
    }
    for (mean, &count) in class_means.iter_mut().zip(&counts) {
        for m in mean.iter_mut() {
            *m /= count as f64;
        }
    }

    // Pooled within-class covariance.
    let denom = (train.len().saturating_sub(2)).max(1) as f64;
    let mut pooled = Matrix::zeros(d, d);
    let mut centered = vec![0.0; d];
    for (row, &label) in x.iter_rows().zip(&labels) {
        let mean = &class_means[label as usize];
        for (c, (v, m)) in centered.iter_mut().zip(row.iter().zip(mean)) {
            *c = v - m;
        }
        for a in 0..d {
            let ca = centered[a];
            let prow = pooled.row_mut(a);
            for (b, &cb) in centered.iter().enumerate() {
                prow[b] += ca * cb / denom;
            }
        }
    }
    for a in 0..d {
        for b in 0..d {
            if a != b {
                pooled.set(a, b, (1.0 - shrinkage) * pooled.get(a, b));
            }
        }
    }

    let mean_diff: Vec<f64> = class_means[1]
        .iter()
        .zip(&class_means[0])
        .map(|(m1, m0)| m1 - m0)
        .collect();
    let projection = solve(
        &pooled,
        &mean_diff,
        "pooled covariance is singular; use a positive shrinkage",
    )?;

    let priors = [
        counts[0] as f64 / train.len() as f64,
        counts[1] as f64 / train.len() as f64,
    ];
    let midpoint: Vec<f64> = class_means[0]
        .iter()
        .zip(&class_means[1])
        .map(|(m0, m1)| 0.5 * (m0 + m1))
        .collect();
    let bias = libm::log(priors[1] / priors[0]) - dot(&projection, &midpoint);

    Ok(LdaModel {
        class_means,
        projection,
        bias,
        priors,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rng::standard_normal;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn gaussian_classes(
        separation: f64,
        dim: usize,
        per_class: usize,
        seed: u64,
    ) -> (Vec<Vec<f64>>, Vec<f64>) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let mut rows = Vec::new();
        let mut labels = Vec::new();
        for class in 0..2usize {
            let shift = if class == 0 { -separation } else { separation };
            for _ in 0..per_class {
                let mut row: Vec<f64> = (0..dim).map(|_| standard_normal(&mut rng)).collect();
                row[0] += shift;
                rows.push(row);
                labels.push(class as f64);
            }
        }
        (rows, labels)
    }

    fn dataset(rows: &[Vec<f64>], labels: &[f64]) -> Dataset {
        Dataset::new(
            Matrix::from_rows(rows).unwrap(),
            labels.to_vec(),
            (0..labels.len()).map(|i| alloc::format!("s{i}")).collect(),
            TargetKind::Binary,
            "label".into(),
        )
        .unwrap()
    }

    #[test]
    fn separated_gaussians_are_classified() {
        let (rows, labels) = gaussian_classes(3.0, 2, 200, 1);
        let ds = dataset(&rows, &labels);
        let model = fit_lda(&ds, 1e-3).unwrap();
        let preds = model.classify(ds.embeddings()).unwrap();
        let lda_acc = preds
            .iter()
            .zip(&labels)
            .filter(|(p, l)| **p as f64 == **l)
            .count() as f64
            / labels.len() as f64;
        assert!(lda_acc >= 0.99, "lda accuracy {lda_acc}");

        // Independent check: with isotropic classes the nearest class
        // mean is the optimal rule; LDA must not fall notably behind it.
        let mut means = [vec![0.0; 2], vec![0.0; 2]];
        let mut counts = [0usize; 2];
        for (row, &l) in rows.iter().zip(&labels) {
            let c = l as usize;
            counts[c] += 1;
            for (m, v) in means[c].iter_mut().zip(row) {
                *m += v;
            }
        }
        for c in 0..2 {
            for m in means[c].iter_mut() {
                *m /= counts[c] as f64;
            }
        }
        let nearest_acc = rows
            .iter()
            .zip(&labels)
            .filter(|(row, l)| {
                let dist = |m: &[f64]| -> f64 {
                    row.iter().zip(m).map(|(a, b)| (a - b) * (a - b)).sum()
                };
                let pred = u8::from(dist(&means[1]) < dist(&means[0]));
                pred as f64 == **l
            })
            .count() as f64
            / labels.len() as f64;
        assert!(nearest_acc >= 0.99, "nearest-mean accuracy {nearest_acc}");
        assert!(lda_acc >= nearest_acc - 0.01);
    }

    #[test]
    fn shuffled_labels_score_near_chance() {
        // Identical class distributions: held-out accuracy concentrates
        // around 0.5. Averaged over seeds to keep the test stable.
        let mut acc_sum = 0.0;
        let n_seeds = 20;
        for seed in 0..n_seeds {
            let (rows, _) = gaussian_classes(0.0, 3, 60, 100 + seed);
            let labels: Vec<f64> = (0..120).map(|i| f64::from(i % 2 == 0)).collect();
            let train = dataset(&rows[..80], &labels[..80]);
            let model = fit_lda(&train, 1e-3).unwrap();
            let test = Matrix::from_rows(&rows[80..]).unwrap();
            let preds = model.classify(&test).unwrap();
            acc_sum += preds
                .iter()
                .zip(&labels[80..])
                .filter(|(p, l)| **p as f64 == **l)
                .count() as f64
                / preds.len() as f64;
        }
        let mean_acc = acc_sum / n_seeds as f64;
        assert!(
            (0.35..=0.65).contains(&mean_acc),
            "mean held-out accuracy {mean_acc}"
        );
    }

    #[test]
    fn single_class_errors() {
        let rows = vec![vec![1.0, 0.0], vec![0.5, 0.2]];
        let ds = dataset(&rows, &[1.0, 1.0]);
        match fit_lda(&ds, 0.0) {
            Err(Error::Invalid(msg)) => assert!(msg.contains("absent")),
            other => panic!("expected missing-class error, got {other:?}"),
        }
    }

    #[test]
    fn singular_covariance_advises_shrinkage() {
        // Feature 1 duplicates feature 0, collapsing the pooled covariance.
        let (base, labels) = gaussian_classes(2.0, 1, 20, 3);
        let rows: Vec<Vec<f64>> = base.iter().map(|r| vec![r[0], r[0]]).collect();
        let ds = dataset(&rows, &labels);
        match fit_lda(&ds, 0.0) {
            Err(Error::Singular(msg)) => assert!(msg.contains("shrinkage")),
            other => panic!("expected singular error, got {other:?}"),
        }
        assert!(fit_lda(&ds, 1e-3).is_ok());
    }

    #[test]
    fn score_is_affine_and_thresholded() {
        let (rows, labels) = gaussian_classes(3.0, 2, 50, 9);
        let ds = dataset(&rows, &labels);
        let model = fit_lda(&ds, 1e-3).unwrap();
        let form = model.linear_form().unwrap();
        let scores = model.predict(ds.embeddings()).unwrap();
        let classes = model.classify(ds.embeddings()).unwrap();
        for ((row, score), class) in ds.embeddings().iter_rows().zip(&scores).zip(&classes) {
            assert!((form.evaluate(row) - score).abs() < 1e-12);
            assert_eq!(*class, u8::from(*score > 0.0));
        }
    }
}
