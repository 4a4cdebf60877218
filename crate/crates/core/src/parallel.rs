//! Data-parallel map over independent work items. With the `parallel`
//! feature, `Parallelism::Workers(n)` runs on a dedicated rayon pool;
//! otherwise every map runs sequentially.

use crate::Error;

#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum Parallelism {
    #[default]
    Sequential,
    Workers(usize),
}

impl Parallelism {
    pub fn from_workers(n: usize) -> Self {
        if n <= 1 {
            Self::Sequential
        } else {
            Self::Workers(n)
        }
    }
}

pub(crate) struct Executor {
    #[cfg(feature = "parallel")]
    pool: Option<rayon::ThreadPool>,
}

impl Executor {
    pub(crate) fn new(parallelism: Parallelism) -> Result<Self, Error> {
        #[cfg(feature = "parallel")]
        {
            let pool = match parallelism {
                Parallelism::Sequential | Parallelism::Workers(0 | 1) => None,
                Parallelism::Workers(n) => Some(
                    rayon::ThreadPoolBuilder::new()
                        .num_threads(n)
                        .build()
                        .map_err(|e| Error::ThreadPool(e.to_string()))?,
                ),
            };
            Ok(Self { pool })
        }
        #[cfg(not(feature = "parallel"))]
        {
            let _ = parallelism;
            Ok(Self {})
        }
    }

    /// Maps `f` over `items`, preserving order.
    pub(crate) fn map<T, U, F>(&self, items: &[T], f: F) -> Vec<U>
    where
        T: Sync,
        U: Send,
        F: Fn(&T) -> U + Sync + Send,
    {
        #[cfg(feature = "parallel")]
        if let Some(pool) = &self.pool {
            use rayon::prelude::*;
            return pool.install(|| items.par_iter().map(&f).collect());
        }
        items.iter().map(f).collect()
    }
}
