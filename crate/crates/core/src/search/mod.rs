//! Exact maximisation of `|A||B|` (and `Π|A_i|`) over cross-intersecting
//! subfamilies of given grounds.
//!
//! For any cross-intersecting `(A, B)`, replacing `B` by the best partner of
//! `A` and then `A` by the best partner of `B` never lowers the product. So it
//! suffices to range over Galois-closed `A`, and every closed `A` is upward
//! closed inside its ground. The three strategies enumerate, respectively, all
//! subfamilies of the smaller ground, the closed subfamilies in lectic order,
//! and the upsets of the ground via their antichains of minimal members.

mod closure;
mod kfold;
mod pair;
mod squaring;
mod verify;

use std::fmt;
use std::str::FromStr;

use serde::Serialize;
use thiserror::Error;

use crate::{FamilyError, SetFamily};

pub use closure::{best_partner, best_partner_in, galois_closure, galois_closure_in, is_closed_in};
pub use kfold::{max_product_k, KSearchResult};
pub use pair::{max_product_in, max_product_pair};
pub use squaring::{mod_star, pairwise_to_k_product, squaring_pairing};
pub use verify::{
    verify_corollary3, verify_theorem1, verify_theorem2, verify_theorem4, verify_theorem5,
};

/// Default cap on search nodes (subsets, closures or antichains visited).
pub const DEFAULT_NODE_BUDGET: u64 = 1 << 26;
/// Largest ground a pair search enumerates subfamilies of.
pub const MAX_ENUMERATED_GROUND: usize = 64;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SearchError {
    #[error("search budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("parameter out of range: {0}")]
    ParameterOutOfRange(String),
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("bound violated: found product {observed} above proven bound {bound}")]
    BoundViolation { observed: u64, bound: u64 },
    #[error("bound not attained: maximum {observed} below bound {bound} despite the star witness")]
    BoundNotAttained { observed: u64, bound: u64 },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl SearchError {
    /// A verification failure, as opposed to bad input or an exhausted budget.
    pub fn is_verification_failure(&self) -> bool {
        matches!(
            self,
            SearchError::BoundViolation { .. } | SearchError::BoundNotAttained { .. }
        )
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Strategy {
    SubsetExhaustive,
    GaloisClosed,
    AntichainClosed,
}

impl fmt::Display for Strategy {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Strategy::SubsetExhaustive => "subset-exhaustive",
            Strategy::GaloisClosed => "galois-closed",
            Strategy::AntichainClosed => "antichain-closed",
        })
    }
}

/// Strategy request; `Auto` picks by the size of the smaller ground.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default)]
pub enum StrategyChoice {
    #[default]
    Auto,
    Exhaustive,
    Galois,
    Antichain,
}

impl FromStr for StrategyChoice {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s {
            "auto" => Ok(StrategyChoice::Auto),
            "exhaustive" => Ok(StrategyChoice::Exhaustive),
            "galois" => Ok(StrategyChoice::Galois),
            "antichain" => Ok(StrategyChoice::Antichain),
            other => Err(format!(
                "unknown strategy `{other}` (expected auto|exhaustive|galois|antichain)"
            )),
        }
    }
}

impl StrategyChoice {
    /// Up to 16 members: every subfamily. Up to 22: closed families only.
    /// Beyond that: upsets through their minimal members.
    pub fn resolve(self, enumerated_len: usize) -> Strategy {
        match self {
            StrategyChoice::Exhaustive => Strategy::SubsetExhaustive,
            StrategyChoice::Galois => Strategy::GaloisClosed,
            StrategyChoice::Antichain => Strategy::AntichainClosed,
            StrategyChoice::Auto if enumerated_len <= 16 => Strategy::SubsetExhaustive,
            StrategyChoice::Auto if enumerated_len <= 22 => Strategy::GaloisClosed,
            StrategyChoice::Auto => Strategy::AntichainClosed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SearchOptions {
    pub strategy: StrategyChoice,
    pub node_budget: u64,
    /// Worker cap; `None` uses the global pool.
    pub threads: Option<usize>,
}

impl Default for SearchOptions {
    fn default() -> Self {
        SearchOptions {
            strategy: StrategyChoice::Auto,
            node_budget: DEFAULT_NODE_BUDGET,
            threads: None,
        }
    }
}

impl SearchOptions {
    pub fn with_strategy(strategy: StrategyChoice) -> Self {
        SearchOptions {
            strategy,
            ..Default::default()
        }
    }

    pub(crate) fn install<T: Send>(&self, job: impl FnOnce() -> T + Send) -> T {
        match self.threads {
            Some(t) => match rayon::ThreadPoolBuilder::new().num_threads(t.max(1)).build() {
                Ok(pool) => pool.install(job),
                Err(_) => job(),
            },
            None => job(),
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SearchResult {
    pub max_product: u64,
    pub witness_a: SetFamily,
    pub witness_b: SetFamily,
    pub bound: Option<u64>,
    pub equality: bool,
    pub nodes_explored: u64,
    pub strategy: Strategy,
}
