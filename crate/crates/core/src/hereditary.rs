//! Hereditary families: catalogues of downsets and the star-size lemma for
//! families with a base avoiding the star's centre.

use serde::Serialize;
use thiserror::Error;

use crate::family::{bases, is_hereditary};
use crate::{FamilyError, SetFamily, SetWord};

/// Largest ground for a catalogue of all downsets.
pub const MAX_DOWNSET_GROUND: u32 = 5;
/// Largest ground for a catalogue of compressed downsets.
pub const MAX_COMPRESSED_DOWNSET_GROUND: u32 = 6;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum HereditaryError {
    #[error("enumeration budget exceeded: {0}")]
    BudgetExceeded(String),
    #[error("family is not hereditary")]
    NotHereditary,
    #[error("two-base hypothesis not met: no pair of bases separates element {0}")]
    HypothesisNotMet(u32),
    #[error(transparent)]
    Family(#[from] FamilyError),
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct DownsetCatalog {
    pub ground_n: u32,
    pub compressed_only: bool,
    pub families: Vec<SetFamily>,
}

/// Partial order on the `2^n` subsets of `[n]`, indexed by word value.
///
/// `below[x]` has bit `y` set iff `y <= x` (reflexive). Both orders used here
/// refine numeric order, so index order is a linear extension.
struct WordPoset {
    below: Vec<u64>,
}

impl WordPoset {
    fn subset_order(n: u32) -> Self {
        let size = 1u64 << n;
        let below = (0..size)
            .map(|x| (0..size).filter(|&y| y & !x == 0).fold(0u64, |m, y| m | 1 << y))
            .collect();
        WordPoset { below }
    }

    /// `y ≼ x` iff `y` is reachable from `x` by deleting elements and shifting
    /// elements to smaller free ones. Downsets of this order are exactly the
    /// hereditary compressed families.
    fn shift_order(n: u32) -> Self {
        let size = 1u64 << n;
        let below = (0..size)
            .map(|x| (0..size).filter(|&y| shift_dominated(y, x)).fold(0u64, |m, y| m | 1 << y))
            .collect();
        WordPoset { below }
    }

    fn comparable(&self, x: usize) -> u64 {
        let mut mask = self.below[x];
        for (y, &b) in self.below.iter().enumerate() {
            if b >> x & 1 == 1 {
                mask |= 1 << y;
            }
        }
        mask
    }
}

/// There is an injection from `small` into `big` that never decreases an element.
fn shift_dominated(small: u64, big: u64) -> bool {
    let s = elements_of(small);
    let b = elements_of(big);
    if s.len() > b.len() {
        return false;
    }
    let off = b.len() - s.len();
    s.iter().enumerate().all(|(t, &e)| e <= b[t + off])
}

fn elements_of(w: u64) -> Vec<u32> {
    (0..64).filter(|i| w >> i & 1 == 1).map(|i| i + 1).collect()
}

/// Every downset of `poset` as the down-closure of an antichain of maximal
/// elements, in depth-first antichain order.
fn downsets_via_antichains(poset: &WordPoset, mut emit: impl FnMut(u64)) {
    let size = poset.below.len();
    let comparable: Vec<u64> = (0..size).map(|x| poset.comparable(x)).collect();

    fn rec(
        start: usize,
        blocked: u64,
        closure: u64,
        poset: &WordPoset,
        comparable: &[u64],
        emit: &mut dyn FnMut(u64),
    ) {
        emit(closure);
        for x in start..poset.below.len() {
            if blocked >> x & 1 == 0 {
                rec(
                    x + 1,
                    blocked | comparable[x],
                    closure | poset.below[x],
                    poset,
                    comparable,
                    emit,
                );
            }
        }
    }
    rec(0, 0, 0, poset, &comparable, &mut emit);
}

/// All hereditary subfamilies of `2^[n]`, optionally only the compressed ones.
///
/// Guarded at `n <= 5` (all) and `n <= 6` (compressed only).
pub fn enumerate_downsets(n: u32, compressed_only: bool) -> Result<DownsetCatalog, HereditaryError> {
    let cap = if compressed_only {
        MAX_COMPRESSED_DOWNSET_GROUND
    } else {
        MAX_DOWNSET_GROUND
    };
    if n > cap {
        return Err(HereditaryError::BudgetExceeded(format!(
            "downset catalogue over [{n}] (compressed_only={compressed_only}) exceeds cap [{cap}]"
        )));
    }
    let poset = if compressed_only {
        WordPoset::shift_order(n)
    } else {
        WordPoset::subset_order(n)
    };
    let mut families = Vec::new();
    downsets_via_antichains(&poset, |mask| {
        let words = (0..64u64).filter(|i| mask >> i & 1 == 1).collect();
        families.push(SetFamily::from_sorted_unchecked(n, words));
    });
    Ok(DownsetCatalog {
        ground_n: n,
        compressed_only,
        families,
    })
}

/// Bases `X`, `Y` of `h` with `x ∈ X` and `x ∉ Y`, if they exist.
pub fn separating_bases(h: &SetFamily, x: u32) -> Option<(SetWord, SetWord)> {
    let bs = bases(h);
    let with = bs.iter().find(|b| b.contains(x))?;
    let without = bs.iter().find(|b| !b.contains(x))?;
    Some((with, without))
}

fn check_element(h: &SetFamily, x: u32) -> Result<(), FamilyError> {
    if x == 0 || x > h.ground_n() {
        Err(FamilyError::ElementOutOfRange {
            element: x,
            ground_n: h.ground_n(),
        })
    } else {
        Ok(())
    }
}

/// Evaluates `2|H(x)| < |H|` for hereditary `h` when some base contains `x`
/// and another avoids it. Otherwise reports the hypothesis as unmet.
pub fn lemma2_check(h: &SetFamily, x: u32) -> Result<bool, HereditaryError> {
    check_element(h, x)?;
    if !is_hereditary(h) {
        return Err(HereditaryError::NotHereditary);
    }
    if separating_bases(h, x).is_none() {
        return Err(HereditaryError::HypothesisNotMet(x));
    }
    let star = h.star_unchecked(x).len();
    Ok(2 * star < h.len())
}

/// The map `A ↦ A \ {x}` from the star `H(x)` into `I = {H ∈ h : x ∉ H}`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct InjectionReport {
    pub x: u32,
    pub mapping: Vec<(SetWord, SetWord)>,
    pub codomain_size: usize,
    /// Every image lies in `I`.
    pub well_defined: bool,
    pub injective: bool,
    /// Members of `I` outside the image.
    pub unhit: Vec<SetWord>,
    pub surjective: bool,
    /// Some pair of bases separates `x`; then the map cannot be onto.
    pub hypothesis_holds: bool,
}

pub fn lemma2_injection(h: &SetFamily, x: u32) -> Result<InjectionReport, HereditaryError> {
    check_element(h, x)?;
    if !is_hereditary(h) {
        return Err(HereditaryError::NotHereditary);
    }
    let codomain = h.filter(|s| !s.contains(x));
    let mapping: Vec<(SetWord, SetWord)> = h
        .iter()
        .filter(|s| s.contains(x))
        .map(|a| (a, a.remove(x)))
        .collect();
    let well_defined = mapping.iter().all(|&(_, img)| codomain.contains(img));
    let mut images: Vec<u64> = mapping.iter().map(|&(_, img)| img.bits()).collect();
    images.sort_unstable();
    let before = images.len();
    images.dedup();
    let injective = images.len() == before;
    let unhit: Vec<SetWord> = codomain
        .iter()
        .filter(|s| images.binary_search(&s.bits()).is_err())
        .collect();
    Ok(InjectionReport {
        x,
        surjective: unhit.is_empty(),
        codomain_size: codomain.len(),
        mapping,
        well_defined,
        injective,
        unhit,
        hypothesis_holds: separating_bases(h, x).is_some(),
    })
}

#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct Lemma2Report {
    pub n: u32,
    pub families_checked: usize,
    pub hypotheses_checked: usize,
    pub violations: usize,
    pub injections_checked: usize,
    /// Not well-defined, not injective, or onto despite separating bases.
    pub injection_failures: usize,
}

/// Runs the star-size check and the injection check for every downset over
/// `[n]` and every element.
pub fn lemma2_sweep(n: u32) -> Result<Lemma2Report, HereditaryError> {
    let catalog = enumerate_downsets(n, false)?;
    let mut rep = Lemma2Report {
        n,
        ..Default::default()
    };
    for h in &catalog.families {
        rep.families_checked += 1;
        for x in 1..=n {
            match lemma2_check(h, x) {
                Ok(holds) => {
                    rep.hypotheses_checked += 1;
                    if !holds {
                        rep.violations += 1;
                    }
                }
                Err(HereditaryError::HypothesisNotMet(_)) => {}
                Err(e) => return Err(e),
            }
            let inj = lemma2_injection(h, x)?;
            rep.injections_checked += 1;
            if !inj.well_defined || !inj.injective || (inj.hypothesis_holds && inj.surjective) {
                rep.injection_failures += 1;
            }
        }
    }
    Ok(rep)
}
