//! Built-in evaluation harness: k-nearest-neighbour classification over
//! Hamming distance, stratified train/test splits, and repeated-trial
//! comparison curves of original versus refined training data.

use alloc::collections::BTreeMap;
use alloc::string::ToString;
use alloc::vec;
use alloc::vec::Vec;

use rand::seq::SliceRandom;
use rand::RngCore;

use crate::data::{Dataset, Instance};
use crate::error::Error;
use crate::math;
use crate::pipeline::{refine, RefineConfig, Stage, StageError};
use crate::rng;

/// Number of feature positions at which the two value vectors differ.
pub fn hamming(a: &[usize], b: &[usize]) -> usize {
    debug_assert_eq!(a.len(), b.len());
    a.iter().zip(b).filter(|(x, y)| x != y).count()
}

/// Majority label among the `k` nearest training instances.
///
/// Distance ties are broken toward the lower training index, and label ties
/// toward the label that appears earlier in the class domain, so the result
/// is a pure function of its inputs.
pub fn knn_classify(train: &Dataset, query: &Instance, k: usize) -> Result<usize, Error> {
    if k == 0 {
        return Err(Error::InvalidConfig("k must be at least 1".to_string()));
    }
    if train.is_empty() {
        return Err(Error::EmptyTrainingSet);
    }
    let mut by_distance: Vec<(usize, usize)> = train
        .instances()
        .iter()
        .enumerate()
        .map(|(index, t)| (hamming(&t.values, &query.values), index))
        .collect();
    by_distance.sort_unstable();

    let mut tally = vec![0usize; train.schema().class().arity()];
    for &(_, index) in by_distance.iter().take(k) {
        tally[train.instances()[index].class_value] += 1;
    }
    let mut best = 0;
    for (label, &count) in tally.iter().enumerate() {
        if count > tally[best] {
            best = label;
        }
    }
    Ok(best)
}

/// Fraction of `test` instances the k-NN classifier labels correctly.
pub fn accuracy(train: &Dataset, test: &[Instance], k: usize) -> Result<f64, Error> {
    if test.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut correct = 0usize;
    for query in test {
        if knn_classify(train, query, k)? == query.class_value {
            correct += 1;
        }
    }
    Ok(correct as f64 / test.len() as f64)
}

/// Splits instance indices into (train, test) with the class proportions of
/// the whole dataset preserved in the training side. Each stratum
/// contributes round(fraction × size) instances; a stratum rounding to zero
/// is an error rather than a silently missing class. Both halves come back
/// sorted. `fraction` must lie in (0, 1]; at 1.0 the test side is empty.
pub fn stratified_split(
    dataset: &Dataset,
    fraction: f64,
    rng: &mut dyn RngCore,
) -> Result<(Vec<usize>, Vec<usize>), Error> {
    if !(fraction > 0.0 && fraction <= 1.0) {
        return Err(Error::RatioOutOfRange { name: "fraction", value: fraction });
    }
    let mut strata: BTreeMap<usize, Vec<usize>> = BTreeMap::new();
    for (index, instance) in dataset.instances().iter().enumerate() {
        strata.entry(instance.class_value).or_default().push(index);
    }
    if strata.is_empty() {
        return Err(Error::EmptyDataset);
    }
    let mut train = Vec::new();
    let mut test = Vec::new();
    for (label, mut indices) in strata {
        indices.shuffle(rng);
        let take = (math::round(fraction * indices.len() as f64) as usize).min(indices.len());
        if take == 0 {
            return Err(Error::EmptyStratum {
                label: dataset.schema().class().domain()[label].clone(),
            });
        }
        train.extend_from_slice(&indices[..take]);
        test.extend_from_slice(&indices[take..]);
    }
    train.sort_unstable();
    test.sort_unstable();
    Ok((train, test))
}

/// Which variable a [`Comparison`] sweeps along its x axis.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SweepAxis {
    /// x = training fraction, generation budget held fixed.
    TrainFraction,
    /// x = virtual-sample fraction I, training fraction held fixed.
    VirtualBudget,
}

/// One x position on a comparison curve: accuracy of k-NN trained on the
/// original split versus the refined split, aggregated over trials.
#[derive(Debug, Clone, PartialEq)]
pub struct CurvePoint {
    pub x: f64,
    pub mean_original: f64,
    pub sd_original: f64,
    pub mean_refined: f64,
    pub sd_refined: f64,
}

#[derive(Debug, Clone, PartialEq)]
pub struct Comparison {
    pub axis: SweepAxis,
    pub points: Vec<CurvePoint>,
    pub trials: usize,
    pub k: usize,
}

/// What to run: either a learning curve over training fractions or a budget
/// curve over virtual-sample fractions (exactly one may have several
/// points), repeated `trials` times per point.
#[derive(Debug, Clone, PartialEq)]
pub struct ExperimentSpec {
    /// Training fractions in (0, 1]. A fraction of 1.0 trains on everything
    /// and tests on the training set itself (resubstitution).
    pub fractions: Vec<f64>,
    /// Virtual-sample fractions to sweep; empty means sweep fractions
    /// instead.
    pub budget_sweep: Vec<f64>,
    pub trials: usize,
    pub k: usize,
    pub seed: u64,
    /// Train the refined classifier on virtual instances only, discarding
    /// the kept originals.
    pub virtual_only: bool,
}

impl Default for ExperimentSpec {
    fn default() -> Self {
        ExperimentSpec {
            fractions: vec![1.0],
            budget_sweep: Vec::new(),
            trials: 20,
            k: 3,
            seed: 0,
            virtual_only: false,
        }
    }
}

// Domain-separation tags for deriving the split, refinement, and
// subsampling seeds of a trial from the experiment seed.
const SPLIT_TAG: u64 = 0x5350_4c49_5400_0000;
const REFINE_TAG: u64 = 0x5245_4649_4e45_0000;
const SUBSET_TAG: u64 = 0x5355_4253_4554_0000;

fn eval_err(error: Error) -> StageError {
    StageError::new(Stage::Eval, error)
}

fn subset(dataset: &Dataset, indices: &[usize]) -> Dataset {
    let instances = indices
        .iter()
        .map(|&i| dataset.instances()[i].clone())
        .collect();
    dataset
        .with_instances(instances)
        .expect("subset of a valid dataset is valid")
}

fn mean_sd(samples: &[f64]) -> (f64, f64) {
    let n = samples.len() as f64;
    let mean = samples.iter().sum::<f64>() / n;
    if samples.len() < 2 {
        return (mean, 0.0);
    }
    let var = samples.iter().map(|x| (x - mean) * (x - mean)).sum::<f64>() / (n - 1.0);
    (mean, math::sqrt(var))
}

impl ExperimentSpec {
    fn check(&self) -> Result<(), Error> {
        if self.trials == 0 {
            return Err(Error::InvalidConfig("trials must be at least 1".to_string()));
        }
        if self.k == 0 {
            return Err(Error::InvalidConfig("k must be at least 1".to_string()));
        }
        if self.fractions.is_empty() {
            return Err(Error::InvalidConfig(
                "at least one training fraction is required".to_string(),
            ));
        }
        for &f in &self.fractions {
            if !(f > 0.0 && f <= 1.0) {
                return Err(Error::RatioOutOfRange { name: "fraction", value: f });
            }
        }
        for &b in &self.budget_sweep {
            if !b.is_finite() || b < 0.0 {
                return Err(Error::RatioOutOfRange { name: "budget", value: b });
            }
        }
        if self.fractions.len() > 1 && self.budget_sweep.len() > 1 {
            return Err(Error::SweepConflict);
        }
        Ok(())
    }
}

/// Draws a stratified `rate` subsample, or clones the pool whole when the
/// rate is 1. Both arms of a curve point call this with the same seed, so
/// identical pools yield identical subsamples.
fn subsample(pool: &Dataset, rate: f64, seed: u64) -> Result<Dataset, StageError> {
    if rate >= 1.0 {
        return Ok(pool.clone());
    }
    let mut rng = rng::stream(seed, 0);
    let (keep, _) = stratified_split(pool, rate, &mut rng).map_err(eval_err)?;
    Ok(subset(pool, &keep))
}

/// Runs the experiment. Each trial draws one stratified split: a training
/// pool sized by the largest requested fraction (the fixed fraction for
/// budget sweeps) and a held-out test partition. The pool is refined once
/// at full pool size, and every curve point then subsamples the original
/// and the refined pool at the same rate — augmentation happens up front
/// and the learner consumes a slice of it, so points differ only in how
/// much data the learner saw. Budget sweeps instead re-refine the whole
/// pool at each swept I. All curve points of a trial share the same split
/// (a paired comparison), test instances are never shown to the
/// refinement, and the result is deterministic in `spec.seed`.
pub fn run_comparison(
    dataset: &Dataset,
    ruleset_text: &str,
    config: &RefineConfig,
    spec: &ExperimentSpec,
) -> Result<Comparison, StageError> {
    spec.check().map_err(eval_err)?;

    let (axis, xs) = if spec.budget_sweep.is_empty() {
        (SweepAxis::TrainFraction, spec.fractions.clone())
    } else {
        (SweepAxis::VirtualBudget, spec.budget_sweep.clone())
    };
    let pool_fraction = match axis {
        SweepAxis::TrainFraction => xs.iter().copied().fold(f64::NEG_INFINITY, f64::max),
        SweepAxis::VirtualBudget => spec.fractions[0],
    };

    let mut original_accuracies = vec![Vec::with_capacity(spec.trials); xs.len()];
    let mut refined_accuracies = vec![Vec::with_capacity(spec.trials); xs.len()];
    for trial in 0..spec.trials {
        let trial_seed = rng::mix(spec.seed, trial as u64);
        let mut split_rng = rng::stream(rng::mix(trial_seed, SPLIT_TAG), 0);
        let (pool_idx, test_idx) =
            stratified_split(dataset, pool_fraction, &mut split_rng).map_err(eval_err)?;
        let pool = subset(dataset, &pool_idx);
        // Resubstitution when the split leaves nothing held out.
        let test: Vec<Instance> = if test_idx.is_empty() {
            pool.instances().to_vec()
        } else {
            test_idx
                .iter()
                .map(|&i| dataset.instances()[i].clone())
                .collect()
        };

        let mut trial_config = config.clone();
        trial_config.seed = rng::mix(trial_seed, REFINE_TAG);
        let refined_pool = match axis {
            SweepAxis::TrainFraction => Some(refine(ruleset_text, &pool, &trial_config)?.0),
            SweepAxis::VirtualBudget => None,
        };

        // The refinement must not have touched the held-out instances.
        for (position, &index) in test_idx.iter().enumerate() {
            assert_eq!(test[position], dataset.instances()[index]);
        }

        for (point, &x) in xs.iter().enumerate() {
            let subsample_seed = rng::mix(trial_seed, SUBSET_TAG);
            let (original_train, refined_train) = match axis {
                SweepAxis::TrainFraction => {
                    let refined_pool =
                        refined_pool.as_ref().expect("refined once per fraction-sweep trial");
                    let rate = x / pool_fraction;
                    (
                        subsample(&pool, rate, subsample_seed)?,
                        subsample(refined_pool, rate, subsample_seed)?,
                    )
                }
                SweepAxis::VirtualBudget => {
                    let mut budget_config = trial_config.clone();
                    budget_config.virtual_fraction = x;
                    let (refined, _) = refine(ruleset_text, &pool, &budget_config)?;
                    (pool.clone(), refined)
                }
            };

            let refined_train = if spec.virtual_only {
                let virtuals: Vec<Instance> = refined_train
                    .instances()
                    .iter()
                    .filter(|i| i.is_virtual())
                    .cloned()
                    .collect();
                refined_train
                    .with_instances(virtuals)
                    .expect("virtual instances conform to the schema")
            } else {
                refined_train
            };

            original_accuracies[point]
                .push(accuracy(&original_train, &test, spec.k).map_err(eval_err)?);
            refined_accuracies[point]
                .push(accuracy(&refined_train, &test, spec.k).map_err(eval_err)?);
        }
    }

    let points = xs
        .iter()
        .enumerate()
        .map(|(point, &x)| {
            let (mean_original, sd_original) = mean_sd(&original_accuracies[point]);
            let (mean_refined, sd_refined) = mean_sd(&refined_accuracies[point]);
            CurvePoint { x, mean_original, sd_original, mean_refined, sd_refined }
        })
        .collect();
    Ok(Comparison { axis, points, trials: spec.trials, k: spec.k })
}
