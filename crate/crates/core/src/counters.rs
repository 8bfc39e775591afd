use std::ops::{Add, AddAssign, Sub};

/// Instrumented operation counts for one run.
///
/// `lifting_steps` counts single-sample applications of a prediction or
/// update step (plain or denoised), `encoded_symbols` counts samples handed
/// to the entropy coder, and `entropy_evals` counts samples histogrammed by
/// the memoryless-entropy estimator.
#[derive(Debug, Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct CostCounters {
    pub lifting_steps: u64,
    pub encoded_symbols: u64,
    pub entropy_evals: u64,
}

impl CostCounters {
    pub fn reset(&mut self) {
        *self = Self::default();
    }
}

impl AddAssign for CostCounters {
    fn add_assign(&mut self, rhs: Self) {
        self.lifting_steps += rhs.lifting_steps;
        self.encoded_symbols += rhs.encoded_symbols;
        self.entropy_evals += rhs.entropy_evals;
    }
}

impl Add for CostCounters {
    type Output = Self;

    fn add(mut self, rhs: Self) -> Self {
        self += rhs;
        self
    }
}

impl Sub for CostCounters {
    type Output = Self;

    fn sub(self, rhs: Self) -> Self {
        Self {
            lifting_steps: self.lifting_steps - rhs.lifting_steps,
            encoded_symbols: self.encoded_symbols - rhs.encoded_symbols,
            entropy_evals: self.entropy_evals - rhs.entropy_evals,
        }
    }
}
