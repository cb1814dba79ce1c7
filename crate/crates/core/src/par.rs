//! Trial-level parallelism.
//!
//! Every Monte-Carlo loop in the crate goes through [`map_trials`]. With the
//! `parallel` feature the trials are spread over the rayon pool; without it,
//! or with [`Execution::Sequential`], they run in index order on the calling
//! thread. Results are always returned in trial order, so aggregation is
//! identical either way.

/// How trial loops are executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Execution {
    Sequential,
    /// Falls back to sequential when the crate is built without `parallel`.
    #[default]
    Parallel,
}

impl Execution {
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Execution::Parallel
    }
}

/// Runs `f(i)` for `i in 0..n` with per-worker state from `init`.
pub fn map_trials<S, T, I, F>(exec: Execution, n: usize, init: I, f: F) -> Vec<T>
where
    T: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, usize) -> T + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return (0..n)
            .into_par_iter()
            .map_init(&init, |s, i| f(s, i))
            .collect();
    }
    let _ = exec;
    let mut state = init();
    (0..n).map(|i| f(&mut state, i)).collect()
}
