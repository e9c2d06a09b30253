use std::sync::atomic::{AtomicBool, AtomicU64, Ordering};

use rayon::prelude::*;

use super::closure::Incidence;
use super::{SearchError, SearchOptions, SearchResult, Strategy, MAX_ENUMERATED_GROUND};
use crate::{GroundSpec, SetFamily};

/// Exact maximum of `|A||B|` over cross-intersecting `A ⊆ ground_a`,
/// `B ⊆ ground_b`, compared against `|G(1)||H(1)|`.
pub fn max_product_pair(
    ground_a: &GroundSpec,
    ground_b: &GroundSpec,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    let mut res = max_product_in(ground_a.family(), ground_b.family(), opts)?;
    let bound = ground_a.star_size() * ground_b.star_size();
    res.bound = Some(bound);
    res.equality = res.max_product == bound;
    Ok(res)
}

/// Best pair seen so far, oriented as `(A, B)`.
///
/// Positive ties keep the pair that comes first in canonical family order.
/// A zero maximum is reported with the canonical witness `(∅, ground_b)`.
#[derive(Default)]
struct Best {
    product: u64,
    pair: Option<(SetFamily, SetFamily)>,
}

fn key(p: &(SetFamily, SetFamily)) -> (&[u64], &[u64]) {
    (p.0.words(), p.1.words())
}

impl Best {
    fn offer(&mut self, product: u64, make: impl FnOnce() -> (SetFamily, SetFamily)) {
        if product == 0 || product < self.product {
            return;
        }
        let cand = make();
        let better = product > self.product
            || self.pair.as_ref().is_none_or(|cur| key(&cand) < key(cur));
        if better {
            self.product = product;
            self.pair = Some(cand);
        }
    }

    fn merge(mut self, other: Best) -> Best {
        if let Some(pair) = other.pair {
            self.offer(other.product, || pair);
        }
        self
    }
}

struct Oriented<'g> {
    inc: Incidence<'g>,
    swapped: bool,
}

impl Oriented<'_> {
    fn pair(&self, mask: u64) -> (SetFamily, SetFamily) {
        let side = self.inc.family_of(mask);
        let other = self.inc.partner_of(mask);
        if self.swapped {
            (other, side)
        } else {
            (side, other)
        }
    }
}

/// [`max_product_pair`] over arbitrary ground families, without a bound.
pub fn max_product_in(
    ground_a: &SetFamily,
    ground_b: &SetFamily,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    let swapped = ground_b.len() < ground_a.len();
    let (side, other) = if swapped {
        (ground_b, ground_a)
    } else {
        (ground_a, ground_b)
    };
    if side.len() > MAX_ENUMERATED_GROUND {
        return Err(SearchError::BudgetExceeded(format!(
            "smaller ground has {} members; searches enumerate at most {MAX_ENUMERATED_GROUND}",
            side.len()
        )));
    }
    let strategy = opts.strategy.resolve(side.len());
    let ctx = Oriented {
        inc: Incidence::new(side, other),
        swapped,
    };
    let (best, nodes) = opts.install(|| match strategy {
        Strategy::SubsetExhaustive => exhaustive(&ctx, opts.node_budget),
        Strategy::GaloisClosed => next_closure(&ctx, opts.node_budget),
        Strategy::AntichainClosed => antichains(&ctx, opts.node_budget),
    })?;
    let (witness_a, witness_b) = match best.pair {
        Some(p) => p,
        None => (
            SetFamily::from_sorted_unchecked(ground_a.ground_n(), Vec::new()),
            ground_b.clone(),
        ),
    };
    debug_assert!(super::closure::cross_ok(&witness_a, &witness_b));
    Ok(SearchResult {
        max_product: best.product,
        witness_a,
        witness_b,
        bound: None,
        equality: false,
        nodes_explored: nodes,
        strategy,
    })
}

fn exhaustive(ctx: &Oriented, budget: u64) -> Result<(Best, u64), SearchError> {
    let p = ctx.inc.side.len() as u32;
    if p >= 63 || 1u64 << p > budget {
        return Err(SearchError::BudgetExceeded(format!(
            "exhaustive search over 2^{p} subfamilies exceeds node budget {budget}"
        )));
    }
    let total = 1u64 << p;
    const CHUNK: u64 = 1 << 12;
    let chunks = total.div_ceil(CHUNK);
    let best = (0..chunks)
        .into_par_iter()
        .map(|c| {
            let mut best = Best::default();
            for mask in c * CHUNK..((c + 1) * CHUNK).min(total) {
                let prod = u64::from(mask.count_ones()) * ctx.inc.partner_count(mask);
                best.offer(prod, || ctx.pair(mask));
            }
            best
        })
        .reduce(Best::default, Best::merge);
    Ok((best, total))
}

/// Lectic enumeration of closed subfamilies.
fn next_closure(ctx: &Oriented, budget: u64) -> Result<(Best, u64), SearchError> {
    let inc = &ctx.inc;
    let p = inc.side.len();
    let mut best = Best::default();
    let mut nodes = 1u64;
    let mut current = inc.closure(0);
    loop {
        let prod = u64::from(current.count_ones()) * inc.partner_count(current);
        best.offer(prod, || ctx.pair(current));
        let mut advanced = false;
        for i in (0..p).rev() {
            if current >> i & 1 == 1 {
                continue;
            }
            let below = (1u64 << i) - 1;
            let prefix = current & below;
            let candidate = inc.closure(prefix | 1 << i);
            nodes += 1;
            if nodes > budget {
                return Err(SearchError::BudgetExceeded(format!(
                    "closed-set enumeration exceeded node budget {budget}"
                )));
            }
            if candidate & below == prefix {
                current = candidate;
                advanced = true;
                break;
            }
        }
        if !advanced {
            break;
        }
    }
    Ok((best, nodes))
}

struct AntichainCtx<'a, 'g> {
    ctx: &'a Oriented<'g>,
    comparable: Vec<u64>,
    up: Vec<u64>,
    nodes: AtomicU64,
    /// Shared lower bound fixed before the parallel part, so node counts do
    /// not depend on scheduling.
    floor: u64,
    budget: u64,
    aborted: AtomicBool,
}

impl AntichainCtx<'_, '_> {
    fn visit(&self, start: usize, blocked: u64, upset: u64, anti: u64, best: &mut Best) {
        if self.aborted.load(Ordering::Relaxed) {
            return;
        }
        if self.nodes.fetch_add(1, Ordering::Relaxed) + 1 > self.budget {
            self.aborted.store(true, Ordering::Relaxed);
            return;
        }
        let inc = &self.ctx.inc;
        let partners = inc.partner_count(anti);
        let prod = u64::from(upset.count_ones()) * partners;
        best.offer(prod, || self.ctx.pair(upset));
        // anything added later is unblocked with index >= start, and partners only shrink
        let p = inc.side.len();
        let tail = if start >= 64 { 0 } else { inc.full & !((1u64 << start) - 1) };
        let reachable = upset | (tail & !blocked);
        let bound = u64::from(reachable.count_ones()) * partners;
        if bound < self.floor.max(best.product) {
            return;
        }
        for x in start..p {
            if blocked >> x & 1 == 0 {
                self.visit(
                    x + 1,
                    blocked | self.comparable[x],
                    upset | self.up[x],
                    anti | 1 << x,
                    best,
                );
            }
        }
    }
}

/// Upsets of the enumerated ground, one per antichain of minimal members.
fn antichains(ctx: &Oriented, budget: u64) -> Result<(Best, u64), SearchError> {
    let words = ctx.inc.side.words();
    let p = words.len();
    let up: Vec<u64> = (0..p)
        .map(|i| {
            (0..p)
                .filter(|&j| words[i] & !words[j] == 0)
                .fold(0u64, |m, j| m | 1 << j)
        })
        .collect();
    let comparable: Vec<u64> = (0..p)
        .map(|i| {
            (0..p)
                .filter(|&j| words[i] & !words[j] == 0 || words[j] & !words[i] == 0)
                .fold(0u64, |m, j| m | 1 << j)
        })
        .collect();
    let floor = (0..p)
        .map(|x| u64::from(up[x].count_ones()) * ctx.inc.partner_count(1 << x))
        .max()
        .unwrap_or(0);
    let ac = AntichainCtx {
        ctx,
        comparable,
        up,
        nodes: AtomicU64::new(1),
        floor,
        budget,
        aborted: AtomicBool::new(false),
    };
    // the empty antichain is the empty family, product 0
    let best = (0..p)
        .into_par_iter()
        .map(|x| {
            let mut best = Best::default();
            ac.visit(x + 1, ac.comparable[x], ac.up[x], 1 << x, &mut best);
            best
        })
        .reduce(Best::default, Best::merge);
    if ac.aborted.load(Ordering::Relaxed) {
        return Err(SearchError::BudgetExceeded(format!(
            "antichain enumeration exceeded node budget {budget}"
        )));
    }
    Ok((best, ac.nodes.load(Ordering::Relaxed)))
}
