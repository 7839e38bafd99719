//! Execution strategy for the data-parallel loops (enumeration, DP layers).
//!
//! With the `parallel` feature (on by default) work is spread over the rayon
//! pool; otherwise everything runs on the calling thread. Every reduction is an
//! exact integer sum, so both strategies give identical results.

/// Layers smaller than this are always processed on the calling thread.
pub const PARALLEL_MIN_LEN: usize = 1 << 12;

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Strategy {
    Sequential,
    #[cfg(feature = "parallel")]
    Parallel,
}

impl Default for Strategy {
    /// Parallel when the rayon pool has more than one thread.
    fn default() -> Strategy {
        #[cfg(feature = "parallel")]
        {
            if rayon::current_num_threads() > 1 {
                Strategy::Parallel
            } else {
                Strategy::Sequential
            }
        }
        #[cfg(not(feature = "parallel"))]
        {
            Strategy::Sequential
        }
    }
}

impl Strategy {
    /// Every strategy compiled into this build.
    pub fn available() -> Vec<Strategy> {
        #[cfg(feature = "parallel")]
        {
            vec![Strategy::Sequential, Strategy::Parallel]
        }
        #[cfg(not(feature = "parallel"))]
        {
            vec![Strategy::Sequential]
        }
    }

    /// Falls back to sequential for inputs too small to be worth splitting.
    pub(crate) fn for_len(self, len: usize) -> Strategy {
        if len < PARALLEL_MIN_LEN {
            Strategy::Sequential
        } else {
            self
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Strategy::Sequential => "sequential",
            #[cfg(feature = "parallel")]
            Strategy::Parallel => "parallel",
        }
    }
}
