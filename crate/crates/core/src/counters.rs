//! Work counters threaded through the solvers.

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct Counters {
    pub lll_invocations: u64,
    pub pslq_iterations: u64,
}

impl Counters {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn absorb(&mut self, other: &Counters) {
        self.lll_invocations += other.lll_invocations;
        self.pslq_iterations += other.pslq_iterations;
    }
}
