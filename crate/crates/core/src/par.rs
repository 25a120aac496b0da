//! Index-parallel map with a sequential fallback.

/// How independent jobs are scheduled.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ExecMode {
    Sequential,
    /// Uses the rayon pool when the `parallel` feature is on, and runs
    /// sequentially otherwise.
    #[default]
    Parallel,
}

impl ExecMode {
    pub fn is_parallel_available() -> bool {
        cfg!(feature = "parallel")
    }
}

/// `(0..count).map(f)` collected in index order, whatever the scheduling.
pub fn map_indexed<T, F>(mode: ExecMode, count: usize, f: F) -> Vec<T>
where
    T: Send,
    F: Fn(usize) -> T + Sync + Send,
{
    match mode {
        #[cfg(feature = "parallel")]
        ExecMode::Parallel => {
            use rayon::prelude::*;
            (0..count).into_par_iter().map(f).collect()
        }
        _ => (0..count).map(f).collect(),
    }
}
