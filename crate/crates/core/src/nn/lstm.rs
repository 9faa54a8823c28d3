use alloc::vec;
use alloc::vec::Vec;

use rand::Rng;

use super::{glorot_uniform, sigmoid, Matrix, Parameterized, Tensor};
use crate::error::{check_dim, Result};

/// LSTM cell. Gate blocks are stacked row-wise in the order input, forget,
/// output, candidate; each block has `hidden_dim` rows.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmCell {
    pub input_dim: usize,
    pub hidden_dim: usize,
    /// `[4H × input_dim]`
    pub w_input: Matrix,
    /// `[4H × H]`
    pub w_hidden: Matrix,
    /// `[4H]`
    pub bias: Vec<f64>,
}

const INPUT: usize = 0;
const FORGET: usize = 1;
const OUTPUT: usize = 2;
const CANDIDATE: usize = 3;

#[derive(Debug, Clone, PartialEq)]
struct Step {
    x: Vec<f64>,
    h_prev: Vec<f64>,
    c_prev: Vec<f64>,
    /// Activated gates, `[4H]`, same block order as the weights.
    gates: Vec<f64>,
    tanh_c: Vec<f64>,
}

/// Forward-pass record for backpropagation through time.
#[derive(Debug, Clone, PartialEq)]
pub struct LstmTrace {
    steps: Vec<Step>,
    hidden: Vec<f64>,
}

impl LstmTrace {
    /// Final hidden state; zeros for an empty sequence.
    pub fn hidden(&self) -> &[f64] {
        &self.hidden
    }

    pub fn len(&self) -> usize {
        self.steps.len()
    }

    pub fn is_empty(&self) -> bool {
        self.steps.is_empty()
    }
}

impl LstmCell {
    pub fn zeros(input_dim: usize, hidden_dim: usize) -> Self {
        LstmCell {
            input_dim,
            hidden_dim,
            w_input: Matrix::zeros(4 * hidden_dim, input_dim),
            w_hidden: Matrix::zeros(4 * hidden_dim, hidden_dim),
            bias: vec![0.0; 4 * hidden_dim],
        }
    }

    /// Glorot-uniform weights per gate block, zero biases except the forget
    /// gate, which starts at 1.
    pub fn glorot<R: Rng>(rng: &mut R, input_dim: usize, hidden_dim: usize) -> Self {
        let mut cell = LstmCell::zeros(input_dim, hidden_dim);
        glorot_uniform(rng, input_dim, hidden_dim, cell.w_input.as_mut_slice());
        glorot_uniform(rng, hidden_dim, hidden_dim, cell.w_hidden.as_mut_slice());
        cell.bias[FORGET * hidden_dim..(FORGET + 1) * hidden_dim].fill(1.0);
        cell
    }

    /// Runs the recurrence from zero state and returns the last hidden state.
    pub fn forward_sequence<V: AsRef<[f64]>>(&self, inputs: &[V]) -> Result<Vec<f64>> {
        let h = self.hidden_dim;
        let mut hidden = vec![0.0; h];
        let mut cell = vec![0.0; h];
        let mut gates = vec![0.0; 4 * h];
        for x in inputs {
            let x = x.as_ref();
            check_dim("lstm input", self.input_dim, x.len())?;
            self.gates(x, &hidden, &mut gates);
            for j in 0..h {
                cell[j] = gates[FORGET * h + j] * cell[j] + gates[INPUT * h + j] * gates[CANDIDATE * h + j];
                hidden[j] = gates[OUTPUT * h + j] * libm::tanh(cell[j]);
            }
        }
        Ok(hidden)
    }

    fn gates(&self, x: &[f64], h_prev: &[f64], gates: &mut [f64]) {
        let h = self.hidden_dim;
        gates.copy_from_slice(&self.bias);
        self.w_input.matvec_acc(x, gates);
        self.w_hidden.matvec_acc(h_prev, gates);
        for g in &mut gates[..3 * h] {
            *g = sigmoid(*g);
        }
        for g in &mut gates[3 * h..] {
            *g = libm::tanh(*g);
        }
    }

    /// Same recurrence as [`LstmCell::forward_sequence`], keeping every step.
    pub fn forward_trace<V: AsRef<[f64]>>(&self, inputs: &[V]) -> Result<LstmTrace> {
        let h = self.hidden_dim;
        let mut steps = Vec::with_capacity(inputs.len());
        let mut hidden = vec![0.0; h];
        let mut cell = vec![0.0; h];
        for x in inputs {
            let x = x.as_ref();
            check_dim("lstm input", self.input_dim, x.len())?;
            let mut gates = vec![0.0; 4 * h];
            self.gates(x, &hidden, &mut gates);
            let mut next_cell = vec![0.0; h];
            let mut tanh_c = vec![0.0; h];
            let mut next_hidden = vec![0.0; h];
            for j in 0..h {
                next_cell[j] = gates[FORGET * h + j] * cell[j] + gates[INPUT * h + j] * gates[CANDIDATE * h + j];
                tanh_c[j] = libm::tanh(next_cell[j]);
                next_hidden[j] = gates[OUTPUT * h + j] * tanh_c[j];
            }
            steps.push(Step {
                x: x.to_vec(),
                h_prev: core::mem::replace(&mut hidden, next_hidden),
                c_prev: core::mem::replace(&mut cell, next_cell),
                gates,
                tanh_c,
            });
        }
        Ok(LstmTrace { steps, hidden })
    }

    /// Backpropagation through the whole sequence, given the loss gradient
    /// w.r.t. the final hidden state. Parameter gradients are accumulated
    /// into `grad`.
    pub fn backward(&self, trace: &LstmTrace, d_hidden: &[f64], grad: &mut LstmCell) {
        let h = self.hidden_dim;
        let mut dh = d_hidden.to_vec();
        let mut dc = vec![0.0; h];
        let mut d_pre = vec![0.0; 4 * h];
        for step in trace.steps.iter().rev() {
            let g = &step.gates;
            for j in 0..h {
                let (i, f, o, cand) = (g[INPUT * h + j], g[FORGET * h + j], g[OUTPUT * h + j], g[CANDIDATE * h + j]);
                let tc = step.tanh_c[j];
                let d_o = dh[j] * tc;
                let d_c = dc[j] + dh[j] * o * (1.0 - tc * tc);
                d_pre[INPUT * h + j] = d_c * cand * i * (1.0 - i);
                d_pre[FORGET * h + j] = d_c * step.c_prev[j] * f * (1.0 - f);
                d_pre[OUTPUT * h + j] = d_o * o * (1.0 - o);
                d_pre[CANDIDATE * h + j] = d_c * i * (1.0 - cand * cand);
                dc[j] = d_c * f;
            }
            grad.w_input.add_outer(&d_pre, &step.x, 1.0);
            grad.w_hidden.add_outer(&d_pre, &step.h_prev, 1.0);
            for (b, d) in grad.bias.iter_mut().zip(&d_pre) {
                *b += d;
            }
            dh.fill(0.0);
            self.w_hidden.matvec_transposed_acc(&d_pre, &mut dh);
        }
    }

    pub(crate) fn named_tensors<'a>(&'a self, prefix: &str) -> [Tensor<'a>; 3] {
        let rows = 4 * self.hidden_dim;
        [
            Tensor {
                name: alloc::format!("{prefix}w_input"),
                shape: vec![rows, self.input_dim],
                data: self.w_input.as_slice(),
            },
            Tensor {
                name: alloc::format!("{prefix}w_hidden"),
                shape: vec![rows, self.hidden_dim],
                data: self.w_hidden.as_slice(),
            },
            Tensor {
                name: alloc::format!("{prefix}bias"),
                shape: vec![rows],
                data: &self.bias,
            },
        ]
    }

    pub(crate) fn buffers_mut(&mut self) -> [&mut [f64]; 3] {
        [
            self.w_input.as_mut_slice(),
            self.w_hidden.as_mut_slice(),
            &mut self.bias,
        ]
    }
}

impl Parameterized for LstmCell {
    fn tensors(&self) -> Vec<Tensor<'_>> {
        self.named_tensors("").into()
    }

    fn tensors_mut(&mut self) -> Vec<&mut [f64]> {
        self.buffers_mut().into()
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::nn::{gradient_check, seeded_rng};

    #[test]
    fn empty_sequence_gives_zero_state() {
        let cell = LstmCell::glorot(&mut seeded_rng(1), 3, 4);
        let empty: [[f64; 3]; 0] = [];
        assert_eq!(cell.forward_sequence(&empty).unwrap(), vec![0.0; 4]);
    }

    #[test]
    fn zero_parameters_keep_state_at_zero() {
        let cell = LstmCell::zeros(2, 3);
        let out = cell.forward_sequence(&[[5.0, -1.0], [2.0, 7.0]]).unwrap();
        assert_eq!(out, vec![0.0; 3]);
    }

    #[test]
    fn dimension_mismatch_is_an_error() {
        let cell = LstmCell::zeros(2, 3);
        assert!(cell.forward_sequence(&[vec![1.0]]).is_err());
    }

    /// Scalar recurrence written out per gate, one hidden unit at a time.
    fn hand_recurrence(cell: &LstmCell, xs: &[[f64; 2]]) -> Vec<f64> {
        let h = cell.hidden_dim;
        let mut hs = vec![0.0; h];
        let mut cs = vec![0.0; h];
        for x in xs {
            let prev = hs.clone();
            for j in 0..h {
                let pre = |block: usize| {
                    let r = block * h + j;
                    let mut s = cell.bias[r];
                    s += cell.w_input.get(r, 0) * x[0] + cell.w_input.get(r, 1) * x[1];
                    for k in 0..h {
                        s += cell.w_hidden.get(r, k) * prev[k];
                    }
                    s
                };
                let i = 1.0 / (1.0 + (-pre(0)).exp());
                let f = 1.0 / (1.0 + (-pre(1)).exp());
                let o = 1.0 / (1.0 + (-pre(2)).exp());
                let g = pre(3).tanh();
                cs[j] = f * cs[j] + i * g;
                hs[j] = o * cs[j].tanh();
            }
        }
        hs
    }

    #[test]
    fn two_steps_match_hand_recurrence() {
        let cell = LstmCell::glorot(&mut seeded_rng(11), 2, 2);
        let xs = [[0.5, -1.0], [1.5, 0.25]];
        let got = cell.forward_sequence(&xs).unwrap();
        let want = hand_recurrence(&cell, &xs);
        for (a, b) in got.iter().zip(&want) {
            assert!((a - b).abs() < 1e-10, "{a} vs {b}");
        }
        assert_eq!(cell.forward_trace(&xs).unwrap().hidden(), &got[..]);
    }

    #[test]
    fn bptt_matches_finite_differences() {
        let mut rng = seeded_rng(5);
        let cell = LstmCell::glorot(&mut rng, 3, 4);
        let xs: Vec<Vec<f64>> = (0..5)
            .map(|t| (0..3).map(|k| ((t * 3 + k) as f64 * 0.37).sin()).collect())
            .collect();
        let target = [0.3, -0.2, 0.5, 0.1];
        let loss = |c: &LstmCell| -> Result<f64> {
            let h = c.forward_sequence(&xs)?;
            Ok(h.iter().zip(&target).map(|(a, b)| 0.5 * (a - b) * (a - b)).sum())
        };
        let trace = cell.forward_trace(&xs).unwrap();
        let d_h: Vec<f64> = trace.hidden().iter().zip(&target).map(|(a, b)| a - b).collect();
        let mut grad = cell.zeros_like();
        cell.backward(&trace, &d_h, &mut grad);
        let check = gradient_check(&cell, &grad, 1e-5, loss).unwrap();
        assert!(check.max_relative_error < 1e-6, "{check:?}");
    }
}
