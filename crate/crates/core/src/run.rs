//! Shared check configuration, deterministic sampling, and the
//! sequential/parallel scan helpers used by the exhaustive verifiers.

/// How a universally quantified check is executed.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Mode {
    Exhaustive,
    Sampled,
}

impl std::fmt::Display for Mode {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Mode::Exhaustive => write!(f, "exhaustive"),
            Mode::Sampled => write!(f, "sampled"),
        }
    }
}

/// Requested mode: `Auto` picks exhaustive for enumerable fields and
/// sampled otherwise. Explicit `Exhaustive` refuses inputs beyond the cap
/// instead of silently sampling.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum ModeChoice {
    #[default]
    Auto,
    Exhaustive,
    Sampled,
}

#[derive(Debug, Clone, Copy)]
pub struct CheckConfig {
    pub mode: ModeChoice,
    /// Enumeration cap: exhaustive scans refuse structures larger than this.
    pub cap: usize,
    /// Sample count for sampled-mode checks.
    pub samples: usize,
    pub seed: u64,
    /// Fan independent checks across threads (no-op when the crate is
    /// built without the `parallel` feature).
    pub parallel: bool,
}

impl Default for CheckConfig {
    fn default() -> Self {
        CheckConfig {
            mode: ModeChoice::Auto,
            cap: 20_000,
            samples: 500,
            seed: 0,
            parallel: true,
        }
    }
}

impl CheckConfig {
    pub fn with_seed(mut self, seed: u64) -> Self {
        self.seed = seed;
        self
    }

    pub fn sequential(mut self) -> Self {
        self.parallel = false;
        self
    }
}

/// SplitMix64: tiny fixed-stream generator so that equal seeds give
/// byte-identical reports across builds and platforms.
#[derive(Debug, Clone)]
pub struct SplitMix64 {
    state: u64,
}

impl SplitMix64 {
    pub fn new(seed: u64) -> Self {
        SplitMix64 { state: seed }
    }

    pub fn next_u64(&mut self) -> u64 {
        self.state = self.state.wrapping_add(0x9e3779b97f4a7c15);
        let mut z = self.state;
        z = (z ^ (z >> 30)).wrapping_mul(0xbf58476d1ce4e5b9);
        z = (z ^ (z >> 27)).wrapping_mul(0x94d049bb133111eb);
        z ^ (z >> 31)
    }

    /// Uniform value in `0..n` (n > 0).
    pub fn below(&mut self, n: u64) -> u64 {
        self.next_u64() % n
    }

    pub fn int_in(&mut self, lo: i64, hi: i64) -> i64 {
        debug_assert!(lo <= hi);
        lo + self.below((hi - lo + 1) as u64) as i64
    }
}

#[cfg(feature = "parallel")]
mod scan {
    use rayon::prelude::*;

    pub fn all_range(n: usize, parallel: bool, f: impl Fn(usize) -> bool + Sync + Send) -> bool {
        if parallel {
            (0..n).into_par_iter().all(f)
        } else {
            (0..n).all(f)
        }
    }

    /// First (lowest-index) counterexample/witness; deterministic in both modes.
    pub fn find_first_range<R: Send>(
        n: usize,
        parallel: bool,
        f: impl Fn(usize) -> Option<R> + Sync + Send,
    ) -> Option<R> {
        if parallel {
            (0..n).into_par_iter().find_map_first(f)
        } else {
            (0..n).find_map(f)
        }
    }

    pub fn map_range<R: Send>(
        n: usize,
        parallel: bool,
        f: impl Fn(usize) -> R + Sync + Send,
    ) -> Vec<R> {
        if parallel {
            (0..n).into_par_iter().map(f).collect()
        } else {
            (0..n).map(f).collect()
        }
    }
}

#[cfg(not(feature = "parallel"))]
mod scan {
    pub fn all_range(n: usize, _parallel: bool, f: impl Fn(usize) -> bool + Sync + Send) -> bool {
        (0..n).all(f)
    }

    pub fn find_first_range<R: Send>(
        n: usize,
        _parallel: bool,
        f: impl Fn(usize) -> Option<R> + Sync + Send,
    ) -> Option<R> {
        (0..n).find_map(f)
    }

    pub fn map_range<R: Send>(
        n: usize,
        _parallel: bool,
        f: impl Fn(usize) -> R + Sync + Send,
    ) -> Vec<R> {
        (0..n).map(f).collect()
    }
}

pub use scan::{all_range, find_first_range, map_range};
