use crate::nn::loss::softmax_in_place;

pub fn sigmoid(x: f64) -> f64 {
    if x >= 0.0 {
        1.0 / (1.0 + libm::exp(-x))
    } else {
        let e = libm::exp(x);
        e / (1.0 + e)
    }
}

pub fn relu(x: f64) -> f64 {
    if x > 0.0 {
        x
    } else {
        0.0
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Activation {
    Sigmoid,
    Relu,
    Softmax,
    Identity,
}

impl Activation {
    pub fn as_str(self) -> &'static str {
        match self {
            Activation::Sigmoid => "sigmoid",
            Activation::Relu => "relu",
            Activation::Softmax => "softmax",
            Activation::Identity => "identity",
        }
    }

    pub fn parse(s: &str) -> Option<Self> {
        match s {
            "sigmoid" => Some(Activation::Sigmoid),
            "relu" => Some(Activation::Relu),
            "softmax" => Some(Activation::Softmax),
            "identity" => Some(Activation::Identity),
            _ => None,
        }
    }

    pub(crate) fn apply(self, pre: &[f64], out: &mut [f64]) {
        match self {
            Activation::Sigmoid => pre.iter().zip(out).for_each(|(p, o)| *o = sigmoid(*p)),
            Activation::Relu => pre.iter().zip(out).for_each(|(p, o)| *o = relu(*p)),
            Activation::Identity => out.copy_from_slice(pre),
            Activation::Softmax => {
                out.copy_from_slice(pre);
                softmax_in_place(out);
            }
        }
    }

    /// Maps the gradient w.r.t. the activation output to the gradient w.r.t.
    /// the pre-activation, in place.
    pub(crate) fn backprop(self, pre: &[f64], out: &[f64], grad: &mut [f64]) {
        match self {
            Activation::Sigmoid => grad
                .iter_mut()
                .zip(out)
                .for_each(|(g, o)| *g *= o * (1.0 - o)),
            Activation::Relu => grad.iter_mut().zip(pre).for_each(|(g, p)| {
                if *p <= 0.0 {
                    *g = 0.0
                }
            }),
            Activation::Identity => {}
            Activation::Softmax => {
                let s: f64 = grad.iter().zip(out).map(|(g, o)| g * o).sum();
                grad.iter_mut().zip(out).for_each(|(g, o)| *g = o * (*g - s));
            }
        }
    }
}
