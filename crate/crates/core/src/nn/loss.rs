use alloc::vec::Vec;

use crate::error::{Error, Result};

/// Probabilities below this are clamped before taking the logarithm.
pub const PROBABILITY_FLOOR: f64 = 1e-12;

pub(crate) fn softmax_in_place(v: &mut [f64]) {
    let max = v.iter().copied().fold(f64::NEG_INFINITY, f64::max);
    let mut sum = 0.0;
    for x in v.iter_mut() {
        *x = libm::exp(*x - max);
        sum += *x;
    }
    for x in v.iter_mut() {
        *x /= sum;
    }
}

pub fn softmax(logits: &[f64]) -> Vec<f64> {
    let mut v = logits.to_vec();
    softmax_in_place(&mut v);
    v
}

/// `-ln(max(p[true_class], 1e-12))`
pub fn cross_entropy(probabilities: &[f64], true_class: usize) -> Result<f64> {
    let p = *probabilities.get(true_class).ok_or(Error::IndexOutOfRange {
        index: true_class,
        len: probabilities.len(),
    })?;
    Ok(-libm::log(p.max(PROBABILITY_FLOOR)))
}

/// Gradient of [`cross_entropy`] w.r.t. the probability vector. Zero in the
/// clamped region, where the loss is constant.
pub(crate) fn cross_entropy_grad(probabilities: &[f64], true_class: usize) -> Vec<f64> {
    let mut g = alloc::vec![0.0; probabilities.len()];
    let p = probabilities[true_class];
    if p > PROBABILITY_FLOOR {
        g[true_class] = -1.0 / p;
    }
    g
}
