//! Data-parallel helpers with a sequential fallback.
//!
//! With the `parallel` feature (default) [`ExecMode::Parallel`] runs on the
//! rayon global pool; without it every mode runs sequentially. Results are
//! always returned in input order, so both modes produce identical output.

use std::ops::Range;

#[cfg(feature = "parallel")]
use rayon::prelude::*;

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub enum ExecMode {
    Sequential,
    #[default]
    Parallel,
}

impl ExecMode {
    /// The mode actually used, given the compiled features.
    pub fn effective(self) -> ExecMode {
        if cfg!(feature = "parallel") {
            self
        } else {
            ExecMode::Sequential
        }
    }

    pub fn map<T, R, F>(self, items: &[T], f: F) -> Vec<R>
    where
        T: Sync,
        R: Send,
        F: Fn(&T) -> R + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => items.par_iter().map(f).collect(),
            _ => items.iter().map(f).collect(),
        }
    }

    pub fn map_range<R, F>(self, range: Range<u64>, f: F) -> Vec<R>
    where
        R: Send,
        F: Fn(u64) -> R + Sync + Send,
    {
        match self.effective() {
            #[cfg(feature = "parallel")]
            ExecMode::Parallel => range.into_par_iter().map(f).collect(),
            _ => range.map(f).collect(),
        }
    }
}
