use alloc::string::String;

use super::Parameterized;
use crate::error::{Error, Result};

/// Worst disagreement found by [`gradient_check`].
#[derive(Debug, Clone, PartialEq)]
pub struct GradientCheck {
    pub max_relative_error: f64,
    pub tensor: String,
    pub index: usize,
    pub analytic: f64,
    pub numeric: f64,
    pub parameters_checked: usize,
}

/// Compares `analytic` against central differences of `loss` around
/// `params`, one parameter at a time. The relative error of a parameter is
/// `|a - n| / max(|a|, |n|, 1e-8)`.
pub fn gradient_check<P, F>(params: &P, analytic: &P, h: f64, mut loss: F) -> Result<GradientCheck>
where
    P: Parameterized,
    F: FnMut(&P) -> Result<f64>,
{
    let base = loss(params)?;
    if !base.is_finite() {
        return Err(Error::NonFiniteLoss);
    }
    let names: alloc::vec::Vec<(String, &[f64])> = analytic
        .tensors()
        .into_iter()
        .map(|t| (t.name, t.data))
        .collect();
    let mut probe = params.clone();
    let mut worst = GradientCheck {
        max_relative_error: 0.0,
        tensor: String::new(),
        index: 0,
        analytic: 0.0,
        numeric: 0.0,
        parameters_checked: 0,
    };
    for (t, (name, grads)) in names.iter().enumerate() {
        for i in 0..grads.len() {
            let original = probe.tensors_mut()[t][i];
            probe.tensors_mut()[t][i] = original + h;
            let plus = loss(&probe)?;
            probe.tensors_mut()[t][i] = original - h;
            let minus = loss(&probe)?;
            probe.tensors_mut()[t][i] = original;
            if !plus.is_finite() || !minus.is_finite() {
                return Err(Error::NonFiniteLoss);
            }
            let numeric = (plus - minus) / (2.0 * h);
            let a = grads[i];
            let rel = (a - numeric).abs() / a.abs().max(numeric.abs()).max(1e-8);
            worst.parameters_checked += 1;
            if rel > worst.max_relative_error || worst.tensor.is_empty() {
                worst.max_relative_error = rel;
                worst.tensor = name.clone();
                worst.index = i;
                worst.analytic = a;
                worst.numeric = numeric;
            }
        }
    }
    Ok(worst)
}
