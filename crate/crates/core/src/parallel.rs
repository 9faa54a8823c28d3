//! Order-preserving map used by training loops that may fan out work.

use alloc::vec::Vec;

/// Runs `f(0..n)` and returns the results in index order. Implementations may
/// evaluate in parallel; callers reduce results in index order, so outcomes
/// do not depend on the implementation.
pub trait BatchMap {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Evaluates in the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl BatchMap for Sequential {
    fn map<T, F>(&self, n: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..n).map(f).collect()
    }
}
