//! Batch execution with an explicit sequential/parallel switch.
//!
//! Without the `parallel` feature both modes run sequentially. Results are
//! always returned in input order, so output is deterministic either way.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub enum Exec {
    Sequential,
    #[default]
    Parallel,
}

impl Exec {
    /// True when work will actually be spread over threads.
    pub fn is_parallel(self) -> bool {
        cfg!(feature = "parallel") && self == Exec::Parallel
    }
}

pub fn map<T, R, F>(exec: Exec, items: &[T], f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    F: Fn(&T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        return items.par_iter().map(f).collect();
    }
    let _ = exec;
    items.iter().map(f).collect()
}

/// Like [`map`], with per-task state (e.g. memo tables that must not be shared).
pub fn map_init<T, S, R, I, F>(exec: Exec, items: &[T], init: I, f: F) -> Vec<R>
where
    T: Sync,
    R: Send,
    I: Fn() -> S + Sync + Send,
    F: Fn(&mut S, &T) -> R + Sync + Send,
{
    #[cfg(feature = "parallel")]
    if exec.is_parallel() {
        use rayon::prelude::*;
        // One state per contiguous chunk so memo tables see neighbouring items.
        let threads = rayon::current_num_threads();
        if threads > 1 {
            let chunk = items.len().div_ceil(threads * 4).max(1);
            let parts: Vec<Vec<R>> = items
                .par_chunks(chunk)
                .map(|c| {
                    let mut s = init();
                    c.iter().map(|t| f(&mut s, t)).collect()
                })
                .collect();
            return parts.into_iter().flatten().collect();
        }
    }
    let _ = exec;
    let mut state = init();
    items.iter().map(|t| f(&mut state, t)).collect()
}
