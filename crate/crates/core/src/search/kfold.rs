use serde::Serialize;

use super::{SearchError, SearchOptions, MAX_ENUMERATED_GROUND};
use crate::SetFamily;

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct KSearchResult {
    pub max_product: u64,
    pub witnesses: Vec<SetFamily>,
    pub bound: Option<u64>,
    pub equality: bool,
    pub nodes_explored: u64,
}

/// Exact maximum of `Π|A_i|` over pairwise cross-intersecting `A_i ⊆ grounds[i]`.
///
/// At a positive maximum every `A_i` is the best partner of the union of the
/// others, hence an upset of its ground. Levels `1..k-1` range over upsets
/// (as antichains of minimal members) of the part of their ground still
/// compatible with earlier choices; the last family is forced.
pub fn max_product_k(
    grounds: &[SetFamily],
    opts: &SearchOptions,
) -> Result<KSearchResult, SearchError> {
    let k = grounds.len();
    if k < 2 {
        return Err(SearchError::ParameterOutOfRange(format!(
            "k-fold search needs at least two grounds, got {k}"
        )));
    }
    if let Some(g) = grounds.iter().find(|g| g.len() > MAX_ENUMERATED_GROUND) {
        return Err(SearchError::BudgetExceeded(format!(
            "ground with {} members; k-fold search handles at most {MAX_ENUMERATED_GROUND}",
            g.len()
        )));
    }
    let mut search = KSearch::new(grounds, opts.node_budget);
    let allowed: Vec<u64> = grounds.iter().map(|g| full_mask(g.len())).collect();
    search.level(0, 1, &allowed, &mut Vec::with_capacity(k))?;

    let witnesses = match search.best_masks {
        Some(ref masks) => search.families(masks),
        None => grounds
            .iter()
            .enumerate()
            .map(|(i, g)| {
                if i + 1 == k {
                    g.clone()
                } else {
                    SetFamily::from_sorted_unchecked(g.ground_n(), Vec::new())
                }
            })
            .collect(),
    };
    Ok(KSearchResult {
        max_product: search.best,
        witnesses,
        bound: None,
        equality: false,
        nodes_explored: search.nodes,
    })
}

fn full_mask(len: usize) -> u64 {
    if len >= 64 {
        u64::MAX
    } else {
        (1u64 << len) - 1
    }
}

fn bits_of(mask: u64) -> impl Iterator<Item = usize> {
    (0..64).filter(move |i| mask >> i & 1 == 1)
}

struct KSearch<'g> {
    grounds: &'g [SetFamily],
    /// `meets[i][j][x]`: members of ground `j` meeting member `x` of ground `i`.
    meets: Vec<Vec<Vec<u64>>>,
    up: Vec<Vec<u64>>,
    comparable: Vec<Vec<u64>>,
    budget: u64,
    nodes: u64,
    best: u64,
    best_masks: Option<Vec<u64>>,
}

impl<'g> KSearch<'g> {
    fn new(grounds: &'g [SetFamily], budget: u64) -> Self {
        let meets = grounds
            .iter()
            .map(|gi| {
                grounds
                    .iter()
                    .map(|gj| {
                        gi.words()
                            .iter()
                            .map(|&a| {
                                gj.words()
                                    .iter()
                                    .enumerate()
                                    .filter(|&(_, &b)| a & b != 0)
                                    .fold(0u64, |m, (t, _)| m | 1 << t)
                            })
                            .collect()
                    })
                    .collect()
            })
            .collect();
        let rel = |w: &[u64], f: &dyn Fn(u64, u64) -> bool| -> Vec<u64> {
            (0..w.len())
                .map(|i| {
                    (0..w.len())
                        .filter(|&j| f(w[i], w[j]))
                        .fold(0u64, |m, j| m | 1 << j)
                })
                .collect()
        };
        let up = grounds
            .iter()
            .map(|g| rel(g.words(), &|a, b| a & !b == 0))
            .collect();
        let comparable = grounds
            .iter()
            .map(|g| rel(g.words(), &|a, b| a & !b == 0 || b & !a == 0))
            .collect();
        KSearch {
            grounds,
            meets,
            up,
            comparable,
            budget,
            nodes: 0,
            best: 0,
            best_masks: None,
        }
    }

    fn families(&self, masks: &[u64]) -> Vec<SetFamily> {
        masks
            .iter()
            .zip(self.grounds)
            .map(|(&m, g)| {
                let words = bits_of(m).map(|t| g.words()[t]).collect();
                SetFamily::from_sorted_unchecked(g.ground_n(), words)
            })
            .collect()
    }

    fn offer(&mut self, product: u64, masks: &[u64]) {
        if product == 0 || product < self.best {
            return;
        }
        let better = product > self.best
            || self.best_masks.as_ref().is_none_or(|cur| {
                let cand = self.families(masks);
                let cur = self.families(cur);
                cand.iter().map(SetFamily::words).lt(cur.iter().map(SetFamily::words))
            });
        if better {
            self.best = product;
            self.best_masks = Some(masks.to_vec());
        }
    }

    fn tick(&mut self) -> Result<(), SearchError> {
        self.nodes += 1;
        if self.nodes > self.budget {
            return Err(SearchError::BudgetExceeded(format!(
                "k-fold search exceeded node budget {}",
                self.budget
            )));
        }
        Ok(())
    }

    fn level(
        &mut self,
        i: usize,
        product: u64,
        allowed: &[u64],
        chosen: &mut Vec<u64>,
    ) -> Result<(), SearchError> {
        let k = self.grounds.len();
        if i + 1 == k {
            self.tick()?;
            chosen.push(allowed[i]);
            self.offer(product * u64::from(allowed[i].count_ones()), chosen);
            chosen.pop();
            return Ok(());
        }
        let blocked = !allowed[i];
        let len = self.grounds[i].len();
        self.antichains(i, 0, len, blocked, 0, product, allowed.to_vec(), chosen)
    }

    #[allow(clippy::too_many_arguments)]
    fn antichains(
        &mut self,
        i: usize,
        start: usize,
        len: usize,
        blocked: u64,
        upset: u64,
        product: u64,
        allowed: Vec<u64>,
        chosen: &mut Vec<u64>,
    ) -> Result<(), SearchError> {
        for x in start..len {
            if blocked >> x & 1 == 1 {
                continue;
            }
            self.tick()?;
            let new_upset = upset | self.up[i][x];
            let mut next = allowed.clone();
            for (j, slot) in next.iter_mut().enumerate().skip(i + 1) {
                *slot &= self.meets[i][j][x];
            }
            let new_blocked = blocked | self.comparable[i][x];
            // upset can only grow inside `reachable`; later allowances only shrink
            let tail = full_mask(len) & !full_mask(x + 1);
            let reachable = new_upset | (tail & !new_blocked);
            let bound = next[i + 1..]
                .iter()
                .fold(product * u64::from(reachable.count_ones()), |b, m| {
                    b * u64::from(m.count_ones())
                });
            if bound < self.best || bound == 0 {
                continue;
            }
            chosen.push(new_upset);
            let here = product * u64::from(new_upset.count_ones());
            let res = self.level(i + 1, here, &next, chosen);
            chosen.pop();
            res?;
            self.antichains(i, x + 1, len, new_blocked, new_upset, product, next, chosen)?;
        }
        Ok(())
    }
}
