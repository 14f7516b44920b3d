//! Execution mode for the data-parallel loops.
//!
//! With the `parallel` feature, [`Exec::Parallel`] dispatches to rayon on the
//! current thread pool. Without it, both modes run sequentially. All results
//! are exact, so the mode never changes an answer.

use std::time::Instant;

use crate::error::{Error, Result};

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    Parallel,
}

impl Default for Exec {
    fn default() -> Self {
        if cfg!(feature = "parallel") {
            Exec::Parallel
        } else {
            Exec::Sequential
        }
    }
}

impl Exec {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }

    /// Runs both closures, concurrently when parallel.
    pub fn join<A, B, RA, RB>(self, a: A, b: B) -> (RA, RB)
    where
        A: FnOnce() -> RA + Send,
        B: FnOnce() -> RB + Send,
        RA: Send,
        RB: Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            return rayon::join(a, b);
        }
        (a(), b())
    }

    /// Maps `f` over `items`, preserving order.
    pub fn map<T, R, F>(self, items: Vec<T>, f: F) -> Vec<R>
    where
        T: Send,
        R: Send,
        F: Fn(T) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return items.into_par_iter().map(f).collect();
        }
        items.into_iter().map(f).collect()
    }

    /// Maps `f` over `0..len` and folds the results with `combine`.
    ///
    /// `combine` must be associative with `identity` as its unit; the
    /// reduction tree differs between modes.
    pub fn map_reduce<R, F, I, C>(self, len: u64, f: F, identity: I, combine: C) -> R
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
        I: Fn() -> R + Sync + Send,
        C: Fn(R, R) -> R + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if self.is_parallel() {
            use rayon::prelude::*;
            return (0..len).into_par_iter().map(f).reduce(identity, combine);
        }
        (0..len).map(f).fold(identity(), combine)
    }
}

/// Runs `f` on a dedicated pool with `workers` threads.
///
/// Without the `parallel` feature this just calls `f`.
pub fn with_workers<R: Send>(workers: usize, f: impl FnOnce() -> R + Send) -> R {
    #[cfg(feature = "parallel")]
    {
        match rayon::ThreadPoolBuilder::new()
            .num_threads(workers.max(1))
            .build()
        {
            Ok(pool) => pool.install(f),
            Err(_) => f(),
        }
    }
    #[cfg(not(feature = "parallel"))]
    {
        let _ = workers;
        f()
    }
}

/// Optional wall-clock deadline shared by long computations.
#[derive(Debug, Clone, Copy, Default)]
pub struct Deadline(Option<Instant>);

impl Deadline {
    pub const NONE: Deadline = Deadline(None);

    pub fn at(instant: Instant) -> Self {
        Deadline(Some(instant))
    }

    pub fn after(d: std::time::Duration) -> Self {
        Deadline(Instant::now().checked_add(d))
    }

    pub fn expired(&self) -> bool {
        self.0.is_some_and(|t| Instant::now() >= t)
    }

    pub fn check(&self) -> Result<()> {
        if self.expired() {
            Err(Error::Deadline)
        } else {
            Ok(())
        }
    }
}
