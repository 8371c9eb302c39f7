//! Execution of independent, index-keyed work units.

use alloc::vec::Vec;

/// Runs `count` independent tasks and returns their outputs in index order.
///
/// Every task in this crate derives its randomness from its own index, so an
/// executor may run tasks in any order or on any number of threads; the
/// returned vector, and everything folded from it, is identical.
pub trait Executor: Sync {
    fn map_indexed<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync;
}

/// Runs tasks one after another on the calling thread.
#[derive(Debug, Clone, Copy, Default)]
pub struct Sequential;

impl Executor for Sequential {
    fn map_indexed<T, F>(&self, count: usize, task: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync,
    {
        (0..count).map(task).collect()
    }
}
