use alloc::vec;
use alloc::vec::Vec;

use super::Parameterized;
use crate::error::{check_dim, Result};

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct AdamConfig {
    pub learning_rate: f64,
    pub beta1: f64,
    pub beta2: f64,
    pub epsilon: f64,
}

impl AdamConfig {
    pub fn with_learning_rate(learning_rate: f64) -> Self {
        AdamConfig {
            learning_rate,
            ..AdamConfig::default()
        }
    }
}

impl Default for AdamConfig {
    fn default() -> Self {
        AdamConfig {
            learning_rate: 1e-3,
            beta1: 0.9,
            beta2: 0.999,
            epsilon: 1e-8,
        }
    }
}

/// Moment estimates for one parameter set.
#[derive(Debug, Clone, PartialEq)]
pub struct AdamState {
    pub config: AdamConfig,
    pub step: u64,
    first_moment: Vec<Vec<f64>>,
    second_moment: Vec<Vec<f64>>,
}

impl AdamState {
    pub fn new<P: Parameterized>(config: AdamConfig, params: &P) -> Self {
        let zeros: Vec<Vec<f64>> = params
            .tensors()
            .iter()
            .map(|t| vec![0.0; t.data.len()])
            .collect();
        AdamState {
            config,
            step: 0,
            first_moment: zeros.clone(),
            second_moment: zeros,
        }
    }

    /// One bias-corrected Adam update of `params` in place.
    pub fn update<P: Parameterized>(&mut self, params: &mut P, grads: &P) -> Result<()> {
        let grads: Vec<&[f64]> = grads.tensors().into_iter().map(|t| t.data).collect();
        let mut params = params.tensors_mut();
        check_dim("adam tensor count", self.first_moment.len(), params.len())?;
        check_dim("adam gradient count", self.first_moment.len(), grads.len())?;
        for ((p, g), m) in params.iter().zip(&grads).zip(&self.first_moment) {
            check_dim("adam parameter length", m.len(), p.len())?;
            check_dim("adam gradient length", m.len(), g.len())?;
        }

        self.step += 1;
        let AdamConfig {
            learning_rate,
            beta1,
            beta2,
            epsilon,
        } = self.config;
        let t = self.step as f64;
        let bias1 = 1.0 - libm::pow(beta1, t);
        let bias2 = 1.0 - libm::pow(beta2, t);
        for (((p, g), m), v) in params
            .iter_mut()
            .zip(grads)
            .zip(&mut self.first_moment)
            .zip(&mut self.second_moment)
        {
            for i in 0..p.len() {
                m[i] = beta1 * m[i] + (1.0 - beta1) * g[i];
                v[i] = beta2 * v[i] + (1.0 - beta2) * g[i] * g[i];
                let m_hat = m[i] / bias1;
                let v_hat = v[i] / bias2;
                p[i] -= learning_rate * m_hat / (libm::sqrt(v_hat) + epsilon);
            }
        }
        Ok(())
    }
}
