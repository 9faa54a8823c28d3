use alloc::string::String;
use alloc::vec::Vec;

/// A named, shaped view of one parameter buffer.
#[derive(Debug, Clone, PartialEq)]
pub struct Tensor<'a> {
    pub name: String,
    pub shape: Vec<usize>,
    pub data: &'a [f64],
}

/// A fixed collection of parameter buffers. Gradients are represented by a
/// value of the same type, so the two always line up tensor by tensor.
pub trait Parameterized: Clone {
    /// Tensors in a fixed order.
    fn tensors(&self) -> Vec<Tensor<'_>>;

    /// Mutable buffers in the same order as [`Parameterized::tensors`].
    fn tensors_mut(&mut self) -> Vec<&mut [f64]>;

    fn zeros_like(&self) -> Self {
        let mut z = self.clone();
        for t in z.tensors_mut() {
            t.fill(0.0);
        }
        z
    }

    fn parameter_count(&self) -> usize {
        self.tensors().iter().map(|t| t.data.len()).sum()
    }

    /// `self += scale * other`, tensor by tensor.
    fn add_scaled(&mut self, other: &Self, scale: f64) {
        let src: Vec<&[f64]> = other.tensors().into_iter().map(|t| t.data).collect();
        for (dst, src) in self.tensors_mut().into_iter().zip(src) {
            for (d, s) in dst.iter_mut().zip(src) {
                *d += scale * s;
            }
        }
    }

    fn all_finite(&self) -> bool {
        self.tensors()
            .iter()
            .all(|t| t.data.iter().all(|x| x.is_finite()))
    }
}
