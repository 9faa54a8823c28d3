use alloc::vec;
use alloc::vec::Vec;

use super::{label_of, validate};
use crate::corpus::Label;
use crate::error::{check_dim, Error, Result};
use crate::nn::{sigmoid, Parameterized, Tensor, PROBABILITY_FLOOR};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct LogisticConfig {
    pub learning_rate: f64,
    pub epochs: usize,
}

impl Default for LogisticConfig {
    fn default() -> Self {
        LogisticConfig {
            learning_rate: 0.1,
            epochs: 1000,
        }
    }
}

/// `p_fake = sigmoid(w · x + b)`
#[derive(Debug, Clone, PartialEq)]
pub struct LogisticModel {
    pub weights: Vec<f64>,
    pub intercept: f64,
}

impl Parameterized for LogisticModel {
    fn tensors(&self) -> Vec<Tensor<'_>> {
        vec![
            Tensor {
                name: "weights".into(),
                shape: vec![self.weights.len()],
                data: &self.weights,
            },
            Tensor {
                name: "intercept".into(),
                shape: vec![1],
                data: core::slice::from_ref(&self.intercept),
            },
        ]
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        vec![&mut self.weights, core::slice::from_mut(&mut self.intercept)]
    }
}

impl LogisticModel {
    pub fn zeros(n_features: usize) -> Self {
        LogisticModel {
            weights: vec![0.0; n_features],
            intercept: 0.0,
        }
    }

    pub fn predict_proba(&self, row: &[f64]) -> Result<f64> {
        check_dim("logistic input", self.weights.len(), row.len())?;
        Ok(sigmoid(crate::nn::dot(&self.weights, row) + self.intercept))
    }

    pub fn predict(&self, row: &[f64]) -> Result<Label> {
        Ok(label_of(self.predict_proba(row)? >= 0.5))
    }

    /// Mean cross-entropy over the rows.
    pub fn loss(&self, x: &[Vec<f64>], y: &[Label]) -> Result<f64> {
        let fake = validate(x, y)?;
        let mut total = 0.0;
        for (row, &f) in x.iter().zip(&fake) {
            let p = self.predict_proba(row)?;
            let q = if f { p } else { 1.0 - p };
            total -= libm::log(q.max(PROBABILITY_FLOOR));
        }
        Ok(total / x.len() as f64)
    }

    /// Gradient of [`LogisticModel::loss`].
    pub fn gradient(&self, x: &[Vec<f64>], y: &[Label]) -> Result<LogisticModel> {
        let fake = validate(x, y)?;
        let mut g = LogisticModel::zeros(self.weights.len());
        let n = x.len() as f64;
        for (row, &f) in x.iter().zip(&fake) {
            let residual = (self.predict_proba(row)? - if f { 1.0 } else { 0.0 }) / n;
            crate::nn::axpy(residual, row, &mut g.weights);
            g.intercept += residual;
        }
        Ok(g)
    }
}

/// Full-batch gradient descent from zero weights.
pub fn train_logistic(x: &[Vec<f64>], y: &[Label], config: LogisticConfig) -> Result<LogisticModel> {
    let fake = validate(x, y)?;
    for (present, label) in [(fake.iter().any(|f| *f), Label::Fake), (fake.iter().any(|f| !*f), Label::Real)] {
        if !present {
            return Err(Error::InsufficientClass {
                class: label.as_str(),
                count: 0,
                required: 1,
            });
        }
    }
    let mut model = LogisticModel::zeros(x[0].len());
    for _ in 0..config.epochs {
        let g = model.gradient(x, y)?;
        model.add_scaled(&g, -config.learning_rate);
    }
    if !model.all_finite() {
        return Err(Error::NonFiniteLoss);
    }
    Ok(model)
}
