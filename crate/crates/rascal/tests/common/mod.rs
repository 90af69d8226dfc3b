//! Shared synthetic classification task for the acceptance suite: ten
//! binary features, a four-term DNF target concept, and label noise.

#![allow(dead_code)]

use rand::Rng;
use rascal_core::data::{Dataset, Instance};
use rascal_core::rng;
use rascal_core::schema::{Feature, Schema};

pub const FEATURES: usize = 10;

pub fn schema10() -> Schema {
    let features = (0..FEATURES)
        .map(|i| Feature::binary(format!("w{i}")))
        .collect();
    Schema::new(features, Feature::binary("class")).unwrap()
}

/// The target concept, a four-term DNF over the ten features.
pub fn concept(values: &[usize]) -> bool {
    (values[0] == 1 && values[1] == 1 && values[2] == 0)
        || (values[3] == 1 && values[4] == 1)
        || (values[5] == 1 && values[6] == 0 && values[7] == 1)
        || (values[0] == 1 && values[8] == 1 && values[9] == 1)
}

/// The same concept in rule syntax, stated through one intermediate symbol
/// so the flattener has real work to do.
pub const CONCEPT_RULES: &str = "\
covered <- w0 & w1 & !w2.
covered <- w3 & w4.
covered <- w5 & !w6 & w7.
covered <- w0 & w8 & w9.
class <- covered.
";

/// Draws `n` uniform feature vectors labelled by the concept, then flips
/// each label independently with probability `noise`. Returns the dataset
/// and a per-instance flag marking the flipped (noised) rows.
pub fn noisy_sample(n: usize, noise: f64, seed: u64) -> (Dataset, Vec<bool>) {
    let mut rng = rng::stream(seed, 0);
    let mut flipped = Vec::with_capacity(n);
    let instances = (0..n)
        .map(|_| {
            let values: Vec<usize> = (0..FEATURES).map(|_| rng.gen_range(0..2usize)).collect();
            let truth = concept(&values);
            let flip = noise > 0.0 && rng.gen_bool(noise);
            flipped.push(flip);
            Instance::original(values, usize::from(truth != flip))
        })
        .collect();
    (Dataset::new(schema10(), instances).unwrap(), flipped)
}
