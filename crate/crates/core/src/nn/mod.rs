//! Dense and LSTM layers with hand-written backpropagation, softmax
//! cross-entropy, Adam, and a finite-difference gradient checker.
//!
//! Everything is `f64`. Layers hold their parameters in [`Matrix`] and `Vec`
//! buffers; gradients use the same types so that a gradient is simply a
//! parameter set of the same shape (see [`Parameterized`]).

mod activation;
mod adam;
mod dense;
mod gradcheck;
mod init;
mod loss;
mod lstm;
mod matrix;
mod params;

pub use activation::{relu, sigmoid, Activation};
pub use adam::{AdamConfig, AdamState};
pub use dense::{DenseCache, DenseLayer};
pub use gradcheck::{gradient_check, GradientCheck};
pub use init::{glorot_uniform, seeded_rng};
pub use loss::{cross_entropy, softmax, PROBABILITY_FLOOR};
pub use lstm::{LstmCell, LstmTrace};
pub use matrix::Matrix;
pub use params::{Parameterized, Tensor};
pub(crate) use loss::cross_entropy_grad as loss_grad;
pub(crate) use matrix::{axpy, dot};
