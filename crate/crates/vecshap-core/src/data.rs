//! Dataset representation, deterministic synthetic generation with planted
//! structure, and speaker-disjoint splitting.

use alloc::collections::BTreeSet;
use alloc::format;
use alloc::string::String;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use crate::linalg::Matrix;
use crate::rng::standard_normal;
use crate::{Error, Result};

/// Whether targets are continuous reals or binary {0, 1} labels.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum TargetKind {
    Continuous,
    Binary,
}

/// N embedding vectors of dimension D with one target, speaker id, and
/// target metadata per record. Immutable after construction; all
/// invariants are checked by [`Dataset::new`].
#[derive(Debug, Clone, PartialEq)]
pub struct Dataset {
    embeddings: Matrix,
    targets: Vec<f64>,
    speaker_ids: Vec<String>,
    target_kind: TargetKind,
    target_name: String,
}

impl Dataset {
    pub fn new(
        embeddings: Matrix,
        targets: Vec<f64>,
        speaker_ids: Vec<String>,
        target_kind: TargetKind,
        target_name: String,
    ) -> Result<Self> {
        let n = embeddings.rows();
        if n == 0 || embeddings.cols() == 0 {
            return Err(Error::Invalid(
                "dataset needs at least one record and one dimension".into(),
            ));
        }
        if !embeddings.is_finite() {
            return Err(Error::Invalid(
                "embeddings contain a non-finite value".into(),
            ));
        }
        if targets.len() != n {
            return Err(Error::Invalid(format!(
                "{} targets for {n} records",
                targets.len()
            )));
        }
        if speaker_ids.len() != n {
            return Err(Error::Invalid(format!(
                "{} speaker ids for {n} records",
                speaker_ids.len()
            )));
        }
        match target_kind {
            TargetKind::Continuous => {
                if let Some(i) = targets.iter().position(|t| !t.is_finite()) {
                    return Err(Error::Invalid(format!(
                        "target at record {i} is not finite"
                    )));
                }
            }
            TargetKind::Binary => {
                if let Some(i) = targets.iter().position(|t| *t != 0.0 && *t != 1.0) {
                    return Err(Error::Invalid(format!(
                        "binary target at record {i} is {} (must be 0 or 1)",
                        targets[i]
                    )));
                }
            }
        }
        Ok(Dataset {
            embeddings,
            targets,
            speaker_ids,
            target_kind,
            target_name,
        })
    }

    pub fn embeddings(&self) -> &Matrix {
        &self.embeddings
    }

    pub fn targets(&self) -> &[f64] {
        &self.targets
    }

    pub fn speaker_ids(&self) -> &[String] {
        &self.speaker_ids
    }

    pub fn target_kind(&self) -> TargetKind {
        self.target_kind
    }

    pub fn target_name(&self) -> &str {
        &self.target_name
    }

    /// Number of records.
    pub fn len(&self) -> usize {
        self.embeddings.rows()
    }

    pub fn is_empty(&self) -> bool {
        false // N >= 1 by construction
    }

    /// Embedding dimension D.
    pub fn dim(&self) -> usize {
        self.embeddings.cols()
    }

    /// Targets as {0, 1} labels; errors for continuous datasets.
    pub fn binary_labels(&self) -> Result<Vec<u8>> {
        if self.target_kind != TargetKind::Binary {
            return Err(Error::Invalid(
                "binary labels requested from a continuous-target dataset".into(),
            ));
        }
        Ok(self.targets.iter().map(|t| *t as u8).collect())
    }

    /// Sorted, de-duplicated speaker ids.
    pub fn distinct_speakers(&self) -> Vec<String> {
        let set: BTreeSet<&String> = self.speaker_ids.iter().collect();
        set.into_iter().cloned().collect()
    }

    /// New dataset holding the given records, in the given order.
    pub fn select_rows(&self, indices: &[usize]) -> Result<Dataset> {
        let mut rows = Vec::with_capacity(indices.len());
        let mut targets = Vec::with_capacity(indices.len());
        let mut speakers = Vec::with_capacity(indices.len());
        for &i in indices {
            if i >= self.len() {
                return Err(Error::Invalid(format!("row index {i} out of range")));
            }
            rows.push(self.embeddings.row(i).to_vec());
            targets.push(self.targets[i]);
            speakers.push(self.speaker_ids[i].clone());
        }
        Dataset::new(
            Matrix::from_rows(&rows)?,
            targets,
            speakers,
            self.target_kind,
            self.target_name.clone(),
        )
    }
}

/// Reference samples used to marginalize absent features.
#[derive(Debug, Clone, PartialEq)]
pub struct BackgroundSet {
    samples: Matrix,
}

impl BackgroundSet {
    pub fn new(samples: Matrix) -> Result<Self> {
        if samples.rows() == 0 || samples.cols() == 0 {
            return Err(Error::Invalid(
                "background set needs at least one sample and one dimension".into(),
            ));
        }
        if !samples.is_finite() {
            return Err(Error::Invalid(
                "background set contains a non-finite value".into(),
            ));
        }
        Ok(BackgroundSet { samples })
    }

    /// Draws `m` distinct rows from `source` (all rows when `m` exceeds the
    /// count). Row order follows the original matrix. Deterministic in
    /// `seed`.
    pub fn sample_from(source: &Matrix, m: usize, seed: u64) -> Result<Self> {
        if m == 0 {
            return Err(Error::Invalid("background size must be positive".into()));
        }
        let n = source.rows();
        let picked: Vec<usize> = if m >= n {
            (0..n).collect()
        } else {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let mut idx: Vec<usize> = (0..n).collect();
            idx.shuffle(&mut rng);
            let mut chosen: Vec<usize> = idx.into_iter().take(m).collect();
            chosen.sort_unstable();
            chosen
        };
        let rows: Vec<Vec<f64>> = picked.iter().map(|&i| source.row(i).to_vec()).collect();
        BackgroundSet::new(Matrix::from_rows(&rows)?)
    }

    pub fn samples(&self) -> &Matrix {
        &self.samples
    }

    pub fn len(&self) -> usize {
        self.samples.rows()
    }

    pub fn is_empty(&self) -> bool {
        false // M >= 1 by construction
    }

    pub fn dim(&self) -> usize {
        self.samples.cols()
    }

    /// Per-dimension mean of the samples.
    pub fn mean(&self) -> Vec<f64> {
        self.samples.col_means()
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Task {
    Regression,
    Classification,
}

/// Recipe for a synthetic embedding dataset with planted structure.
///
/// Speakers get mean vectors drawn from a standard normal; utterances add
/// isotropic noise of scale `noise_std`. The target is a fixed unit-norm
/// linear combination of the speaker-mean coordinates at
/// `informative_dims`: regression adds observation noise of the same
/// scale, classification thresholds at the population median so classes
/// balance at speaker level.
#[derive(Debug, Clone, PartialEq)]
pub struct SyntheticSpec {
    pub n_speakers: usize,
    pub utterances_per_speaker: usize,
    pub dim: usize,
    pub informative_dims: Vec<usize>,
    pub task: Task,
    pub noise_std: f64,
    pub seed: u64,
}

impl SyntheticSpec {
    fn validate(&self) -> Result<()> {
        if self.n_speakers == 0 || self.utterances_per_speaker == 0 || self.dim == 0 {
            return Err(Error::Invalid(
                "speakers, utterances per speaker, and dim must be positive".into(),
            ));
        }
        if self.informative_dims.is_empty() {
            return Err(Error::Invalid("informative_dims must be nonempty".into()));
        }
        let mut seen = BTreeSet::new();
        for &d in &self.informative_dims {
            if d >= self.dim {
                return Err(Error::Invalid(format!(
                    "informative dim {d} out of range for dim {}",
                    self.dim
                )));
            }
            if !seen.insert(d) {
                return Err(Error::Invalid(format!("informative dim {d} repeated")));
            }
        }
        if !(self.noise_std >= 0.0) {
            return Err(Error::Invalid("noise_std must be nonnegative".into()));
        }
        Ok(())
    }
}

/// Deterministic synthetic dataset generation; identical spec and seed
/// yield bit-identical datasets.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<Dataset> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let d = spec.dim;
    let k = spec.informative_dims.len();

    // Fixed unit-norm combination over the informative coordinates.
    let mut beta = vec![0.0; k];
    loop {
        for b in beta.iter_mut() {
            *b = standard_normal(&mut rng);
        }
        let norm = libm::sqrt(beta.iter().map(|b| b * b).sum());
        if norm > 1e-12 {
            for b in beta.iter_mut() {
                *b /= norm;
            }
            break;
        }
    }

    // Per-speaker mean vectors and their noiseless target scores.
    let mut speaker_means = Matrix::zeros(spec.n_speakers, d);
    let mut scores = vec![0.0; spec.n_speakers];
    for s in 0..spec.n_speakers {
        let row = speaker_means.row_mut(s);
        for v in row.iter_mut() {
            *v = standard_normal(&mut rng);
        }
        scores[s] = spec
            .informative_dims
            .iter()
            .zip(&beta)
            .map(|(&j, b)| b * row[j])
            .sum();
    }

    // Classification labels: top half of the score ranking gets label 1,
    // so speaker-level class counts differ by at most one.
    let labels: Vec<f64> = match spec.task {
        Task::Regression => Vec::new(),
        Task::Classification => {
            let mut order: Vec<usize> = (0..spec.n_speakers).collect();
            order.sort_by(|&a, &b| {
                scores[a]
                    .partial_cmp(&scores[b])
                    .unwrap_or(core::cmp::Ordering::Equal)
                    .then(a.cmp(&b))
            });
            let mut labels = vec![0.0; spec.n_speakers];
            for (rank, &s) in order.iter().enumerate() {
                if rank >= spec.n_speakers - spec.n_speakers / 2 {
                    labels[s] = 1.0;
                }
            }
            labels
        }
    };

    let n = spec.n_speakers * spec.utterances_per_speaker;
    let mut embeddings = Matrix::zeros(n, d);
    let mut targets = Vec::with_capacity(n);
    let mut speakers = Vec::with_capacity(n);
    let mut row_idx = 0;
    for s in 0..spec.n_speakers {
        let id = format!("spk{s:04}");
        for _ in 0..spec.utterances_per_speaker {
            {
                let row = embeddings.row_mut(row_idx);
                for (v, m) in row.iter_mut().zip(speaker_means.row(s)) {
                    *v = m + spec.noise_std * standard_normal(&mut rng);
                }
            }
            let target = match spec.task {
                Task::Regression => scores[s] + spec.noise_std * standard_normal(&mut rng),
                Task::Classification => labels[s],
            };
            targets.push(target);
            speakers.push(id.clone());
            row_idx += 1;
        }
    }

    let kind = match spec.task {
        Task::Regression => TargetKind::Continuous,
        Task::Classification => TargetKind::Binary,
    };
    Dataset::new(embeddings, targets, speakers, kind, "synthetic".into())
}

/// Partitions speakers (never records) into train/test; the train side
/// gets `round(train_fraction * n_speakers)` speakers. Speakers are sorted
/// before the seeded shuffle so the split is independent of record order.
pub fn split_by_speaker(
    dataset: &Dataset,
    train_fraction: f64,
    seed: u64,
) -> Result<(Dataset, Dataset)> {
    if !(train_fraction > 0.0 && train_fraction < 1.0) {
        return Err(Error::Invalid(format!(
            "train_fraction {train_fraction} outside (0, 1)"
        )));
    }
    let mut speakers = dataset.distinct_speakers();
    let n = speakers.len();
    if n < 2 {
        return Err(Error::Invalid(
            "split requires at least two distinct speakers".into(),
        ));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    speakers.shuffle(&mut rng);
    let n_train = libm::round(train_fraction * n as f64) as usize;
    if n_train == 0 || n_train == n {
        return Err(Error::Invalid(format!(
            "train_fraction {train_fraction} leaves one side of the split empty"
        )));
    }
    let train_set: BTreeSet<&String> = speakers.iter().take(n_train).collect();
    let mut train_rows = Vec::new();
    let mut test_rows = Vec::new();
    for (i, id) in dataset.speaker_ids().iter().enumerate() {
        if train_set.contains(id) {
            train_rows.push(i);
        } else {
            test_rows.push(i);
        }
    }
    Ok((
        dataset.select_rows(&train_rows)?,
        dataset.select_rows(&test_rows)?,
    ))
}
