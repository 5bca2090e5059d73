//! Data-parallel helpers with a sequential fallback.
//!
//! All heavy loops in the solvers are maps over independent indices (target
//! points, Jacobian block rows, ladder levels). They go through
//! [`Execution::map`] / [`Execution::try_map`], which use rayon when the
//! `parallel` feature is enabled and plain iterators otherwise. Each mapped
//! element is computed by the same sequential code in both modes, so results
//! are bit-identical regardless of the execution mode.

use serde::{Deserialize, Serialize};

use crate::error::Result;

#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Execution {
    Sequential,
    /// Rayon work-stealing; identical to `Sequential` without the `parallel` feature.
    #[default]
    Parallel,
}

impl Execution {
    /// Whether this build can actually run in parallel.
    pub const fn parallel_available() -> bool {
        cfg!(feature = "parallel")
    }

    pub fn map<T, F>(self, len: usize, f: F) -> Vec<T>
    where
        T: Send,
        F: Fn(usize) -> T + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }

    pub fn try_map<T, F>(self, len: usize, f: F) -> Result<Vec<T>>
    where
        T: Send,
        F: Fn(usize) -> Result<T> + Sync + Send,
    {
        match self {
            #[cfg(feature = "parallel")]
            Execution::Parallel => {
                use rayon::prelude::*;
                (0..len).into_par_iter().map(f).collect()
            }
            _ => (0..len).map(f).collect(),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::error::Error;

    #[test]
    fn modes_agree() {
        let f = |i: usize| (i as f64).sqrt().sin();
        assert_eq!(Execution::Sequential.map(1000, f), Execution::Parallel.map(1000, f));
    }

    #[test]
    fn try_map_propagates_errors() {
        for exec in [Execution::Sequential, Execution::Parallel] {
            let out = exec.try_map(50, |i| {
                if i == 17 {
                    Err(Error::Configuration("boom".into()))
                } else {
                    Ok(i)
                }
            });
            assert!(out.is_err());
        }
    }
}
