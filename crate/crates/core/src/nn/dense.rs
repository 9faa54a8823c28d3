use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{glorot_uniform, Activation, Matrix, Parameterized, Tensor};
use crate::error::{check_dim, Result};

/// Fully connected layer computing `activation(W x + b)`.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseLayer {
    pub weights: Matrix,
    pub bias: Vec<f64>,
    pub activation: Activation,
}

/// Values saved by [`DenseLayer::forward_cached`] for the backward pass.
#[derive(Debug, Clone, PartialEq)]
pub struct DenseCache {
    pub input: Vec<f64>,
    pub pre: Vec<f64>,
    pub output: Vec<f64>,
}

impl DenseLayer {
    pub fn zeros(input_dim: usize, output_dim: usize, activation: Activation) -> Self {
        DenseLayer {
            weights: Matrix::zeros(output_dim, input_dim),
            bias: vec![0.0; output_dim],
            activation,
        }
    }

    /// Glorot-uniform weights, zero bias.
    pub fn glorot<R: Rng>(rng: &mut R, input_dim: usize, output_dim: usize, activation: Activation) -> Self {
        let mut layer = DenseLayer::zeros(input_dim, output_dim, activation);
        glorot_uniform(rng, input_dim, output_dim, layer.weights.as_mut_slice());
        layer
    }

    pub fn input_dim(&self) -> usize {
        self.weights.cols()
    }

    pub fn output_dim(&self) -> usize {
        self.weights.rows()
    }

    pub fn forward(&self, x: &[f64]) -> Result<Vec<f64>> {
        Ok(self.forward_cached(x)?.output)
    }

    pub fn forward_cached(&self, x: &[f64]) -> Result<DenseCache> {
        check_dim("dense input", self.input_dim(), x.len())?;
        let mut pre = self.bias.clone();
        self.weights.matvec_acc(x, &mut pre);
        let mut output = vec![0.0; pre.len()];
        self.activation.apply(&pre, &mut output);
        Ok(DenseCache {
            input: x.to_vec(),
            pre,
            output,
        })
    }

    /// Accumulates parameter gradients into `grad` and returns the gradient
    /// w.r.t. the layer input. `d_output` is the loss gradient w.r.t. the
    /// activation output.
    pub fn backward(&self, cache: &DenseCache, d_output: &[f64], grad: &mut DenseLayer) -> Vec<f64> {
        let mut d_pre = d_output.to_vec();
        self.activation.backprop(&cache.pre, &cache.output, &mut d_pre);
        grad.weights.add_outer(&d_pre, &cache.input, 1.0);
        for (b, d) in grad.bias.iter_mut().zip(&d_pre) {
            *b += d;
        }
        let mut d_input = vec![0.0; self.input_dim()];
        self.weights.matvec_transposed_acc(&d_pre, &mut d_input);
        d_input
    }

    pub(crate) fn named_tensors<'a>(&'a self, prefix: &str) -> [Tensor<'a>; 2] {
        [
            Tensor {
                name: alloc::format!("{prefix}weights"),
                shape: vec![self.output_dim(), self.input_dim()],
                data: self.weights.as_slice(),
            },
            Tensor {
                name: alloc::format!("{prefix}bias"),
                shape: vec![self.output_dim()],
                data: &self.bias,
            },
        ]
    }

    pub(crate) fn buffers_mut(&mut self) -> [&mut [f64]; 2] {
        [self.weights.as_mut_slice(), &mut self.bias]
    }
}

impl Parameterized for DenseLayer {
    fn tensors(&self) -> Vec<Tensor<'_>> {
        self.named_tensors("").into()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.buffers_mut().into()
    }
}
