//! Limits of transfinite sequences of surreal numbers, computed on their
//! sign expansions.
//!
//! Ordinals below ε₀ are kept in Cantor normal form ([`ordinal`]); surreals
//! are run-length sign expansions ([`sign_expansion`]). Dyadics and reals
//! cross over through [`real_bridge`]. [`limit_engine`] computes the
//! s-limit and its variants on finitely presented sequences, and
//! [`transfinite_sum`] builds s-sums on top of it.

pub mod ordinal;
pub mod sign_expansion;
pub mod real_bridge;
pub mod limit_engine;
pub mod real_sequence;
pub mod transfinite_sum;
pub mod canonical_repr;
pub mod cli;

#[cfg(test)]
mod test_support;

/// Resource limits shared by the command line and the demo.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Config {
    /// Deepest exponent nesting accepted in ordinals and run lengths.
    pub max_cnf_depth: usize,
    /// Rows sampled per oracle claim.
    pub probe_budget: u64,
    /// Places examined for oracle sequences.
    pub probe_places: u64,
    /// Most branches in a periodic parametric family.
    pub max_period: usize,
    /// Indices sampled when checking that a family is nondecreasing.
    pub monotone_samples: u64,
}

impl Default for Config {
    fn default() -> Self {
        Config {
            max_cnf_depth: 8,
            probe_budget: 64,
            probe_places: 32,
            max_period: 4,
            monotone_samples: 64,
        }
    }
}
