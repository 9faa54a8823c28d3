//! Baseline classifiers over the simple features: CART decision trees,
//! random forests with impurity-based importances, and logistic regression.
//!
//! All models take row-major inputs (`&[Vec<f64>]`) and fake/real labels.

mod forest;
mod logistic;
mod tree;

pub use forest::{bootstrap_indices, train_forest, train_forest_with, ForestConfig, RandomForest};
pub use logistic::{train_logistic, LogisticConfig, LogisticModel};
pub use tree::{gini, train_tree, train_tree_on, DecisionTree, Node, TreeConfig};

use alloc::vec::Vec;

use crate::corpus::Label;
use crate::error::{Error, Result};

/// Checks shape and labels, returning `true` for fake rows.
pub(crate) fn validate(x: &[Vec<f64>], y: &[Label]) -> Result<Vec<bool>> {
    if x.is_empty() {
        return Err(Error::invalid("no training rows"));
    }
    crate::error::check_dim("label count", x.len(), y.len())?;
    let width = x[0].len();
    if width == 0 {
        return Err(Error::invalid("rows have no features"));
    }
    for row in x {
        crate::error::check_dim("feature row", width, row.len())?;
        if row.iter().any(|v| !v.is_finite()) {
            return Err(Error::invalid("non-finite feature value"));
        }
    }
    y.iter()
        .map(|l| match l {
            Label::Fake => Ok(true),
            Label::Real => Ok(false),
            other => Err(Error::invalid(alloc::format!(
                "classifiers need fake/real labels, found `{}`",
                other.as_str()
            ))),
        })
        .collect()
}

pub(crate) fn label_of(fake: bool) -> Label {
    if fake {
        Label::Fake
    } else {
        Label::Real
    }
}
