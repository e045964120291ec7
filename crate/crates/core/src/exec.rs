//! Pluggable evaluation of independent work items.

use alloc::vec::Vec;

/// Evaluates `f(0..len)` and returns the results in index order.
///
/// Implementations may run items concurrently but must preserve ordering;
/// callers reduce the returned vector with [`crate::quad::pairwise_sum`]
/// so the final value is independent of the schedule.
pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send;
}

/// Runs everything on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        (0..len).map(f).collect()
    }
}
