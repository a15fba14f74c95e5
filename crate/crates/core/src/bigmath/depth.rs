/// Multiplication counts for one computation: the longest dependency chain and
/// the overall total.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Hash)]
pub struct DepthTrace {
    pub sequential_depth: u64,
    pub total_mults: u64,
}

impl DepthTrace {
    pub const ZERO: DepthTrace = DepthTrace { sequential_depth: 0, total_mults: 0 };

    /// Trace of running `self` and then feeding its result into `next`.
    pub fn then(self, next: DepthTrace) -> DepthTrace {
        DepthTrace {
            sequential_depth: self.sequential_depth + next.sequential_depth,
            total_mults: self.total_mults + next.total_mults,
        }
    }

    /// Trace of running `self` and `other` on independent inputs.
    pub fn alongside(self, other: DepthTrace) -> DepthTrace {
        DepthTrace {
            sequential_depth: self.sequential_depth.max(other.sequential_depth),
            total_mults: self.total_mults + other.total_mults,
        }
    }
}

/// Counter threaded through instrumented multiplications. Each value carries
/// its own depth; a product sits one level above the deeper of its inputs.
#[derive(Debug, Default)]
pub(crate) struct Tally {
    total: u64,
}

impl Tally {
    pub(crate) fn mul(&mut self, a: u64, b: u64) -> u64 {
        self.total += 1;
        a.max(b) + 1
    }

    pub(crate) fn finish(self, depth: u64) -> DepthTrace {
        DepthTrace { sequential_depth: depth, total_mults: self.total }
    }
}
