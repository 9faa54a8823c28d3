use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::tree::{train_tree_on, DecisionTree, TreeConfig};
use super::{label_of, validate};
use crate::corpus::Label;
use crate::error::{Error, Result};
use crate::nn::seeded_rng;
use crate::parallel::{BatchMap, Sequential};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct ForestConfig {
    pub n_trees: usize,
    pub max_depth: usize,
    pub features_per_split: usize,
    pub min_samples_leaf: usize,
}

impl Default for ForestConfig {
    fn default() -> Self {
        ForestConfig {
            n_trees: 100,
            max_depth: 8,
            features_per_split: 3,
            min_samples_leaf: 2,
        }
    }
}

impl ForestConfig {
    pub fn tree_config(&self) -> TreeConfig {
        TreeConfig {
            max_depth: self.max_depth,
            min_samples_leaf: self.min_samples_leaf,
            features_per_split: Some(self.features_per_split),
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub struct RandomForest {
    trees: Vec<DecisionTree>,
    /// Seed each tree's bootstrap sample and feature draws came from.
    tree_seeds: Vec<u64>,
}

/// Row indices of a bootstrap sample of size `n`.
pub fn bootstrap_indices(n: usize, seed: u64) -> Vec<usize> {
    let mut rng = seeded_rng(seed);
    (0..n).map(|_| rng.gen_range(0..n)).collect()
}

fn feature_seed(tree_seed: u64) -> u64 {
    tree_seed.rotate_left(17) ^ 0x9e37_79b9_7f4a_7c15
}

impl RandomForest {
    pub fn from_trees(trees: Vec<DecisionTree>, tree_seeds: Vec<u64>) -> Result<Self> {
        if trees.is_empty() {
            return Err(Error::invalid("forest has no trees"));
        }
        crate::error::check_dim("tree seeds", trees.len(), tree_seeds.len())?;
        let d = trees[0].n_features();
        for t in &trees {
            crate::error::check_dim("tree feature count", d, t.n_features())?;
        }
        Ok(RandomForest { trees, tree_seeds })
    }

    pub fn trees(&self) -> &[DecisionTree] {
        &self.trees
    }

    pub fn tree_seeds(&self) -> &[u64] {
        &self.tree_seeds
    }

    pub fn n_features(&self) -> usize {
        self.trees[0].n_features()
    }

    /// Number of trees voting fake.
    pub fn fake_votes(&self, row: &[f64]) -> Result<usize> {
        let mut votes = 0;
        for t in &self.trees {
            if t.predict(row)? == Label::Fake {
                votes += 1;
            }
        }
        Ok(votes)
    }

    /// Share of trees voting fake.
    pub fn predict_proba(&self, row: &[f64]) -> Result<f64> {
        Ok(self.fake_votes(row)? as f64 / self.trees.len() as f64)
    }

    /// Majority vote; a tied vote counts as fake.
    pub fn predict(&self, row: &[f64]) -> Result<Label> {
        Ok(label_of(2 * self.fake_votes(row)? >= self.trees.len()))
    }

    /// Mean over trees of each feature's weighted impurity decrease,
    /// normalized to sum to one (uniform when no tree ever split).
    pub fn feature_importances(&self) -> Vec<f64> {
        let d = self.n_features();
        let mut total = vec![0.0; d];
        for t in &self.trees {
            for (acc, v) in total.iter_mut().zip(t.impurity_decreases()) {
                *acc += v;
            }
        }
        let n = self.trees.len() as f64;
        total.iter_mut().for_each(|v| *v /= n);
        let sum: f64 = total.iter().sum();
        if sum > 0.0 {
            total.iter_mut().for_each(|v| *v /= sum);
        } else {
            total.fill(1.0 / d as f64);
        }
        total
    }
}

pub fn train_forest(x: &[Vec<f64>], y: &[Label], config: ForestConfig, seed: u64) -> Result<RandomForest> {
    train_forest_with(&Sequential, x, y, config, seed)
}

/// Trains the trees through `map`; every tree depends only on its own seed,
/// so the result does not depend on how `map` schedules them.
pub fn train_forest_with<M: BatchMap>(
    map: &M,
    x: &[Vec<f64>],
    y: &[Label],
    config: ForestConfig,
    seed: u64,
) -> Result<RandomForest> {
    validate(x, y)?;
    if config.n_trees == 0 || config.features_per_split == 0 {
        return Err(Error::invalid("n_trees and features_per_split must be positive"));
    }
    let mut master = seeded_rng(seed);
    let tree_seeds: Vec<u64> = (0..config.n_trees).map(|_| master.gen()).collect();
    let tree_config = config.tree_config();
    let trees = map
        .map(config.n_trees, |i| {
            let rows = bootstrap_indices(x.len(), tree_seeds[i]);
            train_tree_on(x, y, &rows, tree_config, feature_seed(tree_seeds[i]))
        })
        .into_iter()
        .collect::<Result<Vec<_>>>()?;
    Ok(RandomForest { trees, tree_seeds })
}
