use alloc::vec;
use alloc::vec::Vec;

use rand::seq::index;
use rand_chacha::ChaCha8Rng;

use super::{label_of, validate};
use crate::corpus::Label;
use crate::error::{check_dim, Error, Result};
use crate::nn::seeded_rng;

/// Splits must improve impurity by more than this.
const MIN_GAIN: f64 = 1e-12;

/// Gini impurity of a binary node with `fake` positives out of `total`.
pub fn gini(fake: usize, total: usize) -> f64 {
    if total == 0 {
        return 0.0;
    }
    let p = fake as f64 / total as f64;
    1.0 - p * p - (1.0 - p) * (1.0 - p)
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct TreeConfig {
    pub max_depth: usize,
    pub min_samples_leaf: usize,
    /// Candidate features drawn per node; `None` considers all of them.
    pub features_per_split: Option<usize>,
}

impl Default for TreeConfig {
    fn default() -> Self {
        TreeConfig {
            max_depth: 8,
            min_samples_leaf: 2,
            features_per_split: None,
        }
    }
}

#[derive(Debug, Clone, PartialEq)]
pub enum Node {
    Leaf {
        p_fake: f64,
        samples: usize,
    },
    /// Rows with `x[feature] <= threshold` go left.
    Split {
        feature: usize,
        threshold: f64,
        left: usize,
        right: usize,
        samples: usize,
        /// Gini decrease weighted by the share of training rows reaching the node.
        impurity_decrease: f64,
    },
}

/// A CART tree stored as a flat node list; node 0 is the root and children
/// always come after their parent.
#[derive(Debug, Clone, PartialEq)]
pub struct DecisionTree {
    nodes: Vec<Node>,
    n_features: usize,
}

impl DecisionTree {
    /// Rebuilds a tree from stored nodes, checking its structure.
    pub fn from_nodes(nodes: Vec<Node>, n_features: usize) -> Result<Self> {
        if nodes.is_empty() {
            return Err(Error::invalid("tree has no nodes"));
        }
        let mut parents = vec![0usize; nodes.len()];
        for (i, node) in nodes.iter().enumerate() {
            match *node {
                Node::Leaf { p_fake, .. } => {
                    if !(0.0..=1.0).contains(&p_fake) {
                        return Err(Error::invalid("leaf probability outside [0, 1]"));
                    }
                }
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => {
                    if feature >= n_features {
                        return Err(Error::IndexOutOfRange {
                            index: feature,
                            len: n_features,
                        });
                    }
                    if !threshold.is_finite() {
                        return Err(Error::invalid("non-finite split threshold"));
                    }
                    for child in [left, right] {
                        if child <= i || child >= nodes.len() {
                            return Err(Error::invalid("tree child index out of order"));
                        }
                        parents[child] += 1;
                    }
                }
            }
        }
        if parents[0] != 0 || parents[1..].iter().any(|&p| p != 1) {
            return Err(Error::invalid("tree nodes do not form a single tree"));
        }
        Ok(DecisionTree { nodes, n_features })
    }

    pub fn nodes(&self) -> &[Node] {
        &self.nodes
    }

    pub fn n_features(&self) -> usize {
        self.n_features
    }

    pub fn depth(&self) -> usize {
        fn walk(nodes: &[Node], i: usize) -> usize {
            match nodes[i] {
                Node::Leaf { .. } => 0,
                Node::Split { left, right, .. } => 1 + walk(nodes, left).max(walk(nodes, right)),
            }
        }
        walk(&self.nodes, 0)
    }

    pub fn leaf_count(&self) -> usize {
        self.nodes.iter().filter(|n| matches!(n, Node::Leaf { .. })).count()
    }

    pub fn predict_proba(&self, row: &[f64]) -> Result<f64> {
        check_dim("tree input", self.n_features, row.len())?;
        let mut i = 0;
        loop {
            match self.nodes[i] {
                Node::Leaf { p_fake, .. } => return Ok(p_fake),
                Node::Split {
                    feature,
                    threshold,
                    left,
                    right,
                    ..
                } => i = if row[feature] <= threshold { left } else { right },
            }
        }
    }

    /// Fake when the leaf's fake share is at least one half.
    pub fn predict(&self, row: &[f64]) -> Result<Label> {
        Ok(label_of(self.predict_proba(row)? >= 0.5))
    }

    /// Total weighted impurity decrease per feature.
    pub fn impurity_decreases(&self) -> Vec<f64> {
        let mut out = vec![0.0; self.n_features];
        for node in &self.nodes {
            if let Node::Split {
                feature,
                impurity_decrease,
                ..
            } = *node
            {
                out[feature] += impurity_decrease;
            }
        }
        out
    }
}

#[derive(Debug, Clone, Copy)]
struct Candidate {
    feature: usize,
    threshold: f64,
    gain: f64,
}

struct Builder<'a> {
    x: &'a [Vec<f64>],
    fake: &'a [bool],
    config: TreeConfig,
    rng: ChaCha8Rng,
    total: f64,
    nodes: Vec<Node>,
}

impl Builder<'_> {
    fn candidate_features(&mut self) -> Vec<usize> {
        let d = self.x[0].len();
        match self.config.features_per_split {
            Some(k) if k < d => {
                let mut f = index::sample(&mut self.rng, d, k).into_vec();
                f.sort_unstable();
                f
            }
            _ => (0..d).collect(),
        }
    }

    /// Best split of `rows` on `feature`; thresholds are visited in
    /// increasing order and only a strictly larger gain replaces the best.
    fn best_on_feature(&self, rows: &[usize], feature: usize, parent: f64, best: &mut Option<Candidate>) {
        let n = rows.len();
        let leaf = self.config.min_samples_leaf.max(1);
        let mut sorted: Vec<(f64, bool)> = rows.iter().map(|&r| (self.x[r][feature], self.fake[r])).collect();
        sorted.sort_by(|a, b| a.0.total_cmp(&b.0));
        let total_fake = sorted.iter().filter(|s| s.1).count();
        let mut left_fake = 0;
        for i in 1..n {
            left_fake += usize::from(sorted[i - 1].1);
            let (lo, hi) = (sorted[i - 1].0, sorted[i].0);
            if lo == hi || i < leaf || n - i < leaf {
                continue;
            }
            let weighted = (i as f64 * gini(left_fake, i) + (n - i) as f64 * gini(total_fake - left_fake, n - i)) / n as f64;
            let gain = parent - weighted;
            if gain > MIN_GAIN && best.map_or(true, |b| gain > b.gain) {
                let mut threshold = lo + (hi - lo) / 2.0;
                if threshold >= hi {
                    threshold = lo;
                }
                *best = Some(Candidate {
                    feature,
                    threshold,
                    gain,
                });
            }
        }
    }

    fn grow(&mut self, rows: Vec<usize>, depth: usize) -> usize {
        let n = rows.len();
        let n_fake = rows.iter().filter(|&&r| self.fake[r]).count();
        let id = self.nodes.len();
        self.nodes.push(Node::Leaf {
            p_fake: n_fake as f64 / n as f64,
            samples: n,
        });
        let parent = gini(n_fake, n);
        if depth >= self.config.max_depth || parent == 0.0 || n < 2 * self.config.min_samples_leaf.max(1) {
            return id;
        }
        let mut best = None;
        for f in self.candidate_features() {
            self.best_on_feature(&rows, f, parent, &mut best);
        }
        let Some(split) = best else {
            return id;
        };
        let (left_rows, right_rows): (Vec<usize>, Vec<usize>) =
            rows.iter().partition(|&&r| self.x[r][split.feature] <= split.threshold);
        let left = self.grow(left_rows, depth + 1);
        let right = self.grow(right_rows, depth + 1);
        self.nodes[id] = Node::Split {
            feature: split.feature,
            threshold: split.threshold,
            left,
            right,
            samples: n,
            impurity_decrease: n as f64 / self.total * split.gain,
        };
        id
    }
}

/// Fits a tree on all rows. `seed` only matters when
/// `config.features_per_split` restricts the candidate features.
pub fn train_tree(x: &[Vec<f64>], y: &[Label], config: TreeConfig, seed: u64) -> Result<DecisionTree> {
    let rows: Vec<usize> = (0..x.len()).collect();
    train_tree_on(x, y, &rows, config, seed)
}

/// Fits a tree on the given row indices, which may repeat.
pub fn train_tree_on(x: &[Vec<f64>], y: &[Label], rows: &[usize], config: TreeConfig, seed: u64) -> Result<DecisionTree> {
    let fake = validate(x, y)?;
    if rows.is_empty() {
        return Err(Error::invalid("no training rows"));
    }
    if let Some(&r) = rows.iter().find(|&&r| r >= x.len()) {
        return Err(Error::IndexOutOfRange { index: r, len: x.len() });
    }
    if config.features_per_split == Some(0) {
        return Err(Error::invalid("features_per_split must be positive"));
    }
    let mut builder = Builder {
        x,
        fake: &fake,
        config,
        rng: seeded_rng(seed),
        total: rows.len() as f64,
        nodes: Vec::new(),
    };
    builder.grow(rows.to_vec(), 0);
    Ok(DecisionTree {
        nodes: builder.nodes,
        n_features: x[0].len(),
    })
}
