use crate::family::words_cross_intersect;
use crate::{GroundSpec, SetFamily};

/// `{B ∈ ground : B ∩ A ≠ ∅ for all A ∈ a}`, the largest family inside
/// `ground` cross-intersecting `a`.
pub fn best_partner(a: &SetFamily, ground: &GroundSpec) -> SetFamily {
    best_partner_in(a, ground.family())
}

/// [`best_partner`] over an arbitrary ground family.
pub fn best_partner_in(a: &SetFamily, ground: &SetFamily) -> SetFamily {
    ground.filter(|b| a.words().iter().all(|&x| x & b.bits() != 0))
}

/// `best_partner(best_partner(a, ground_b), ground_a)`.
pub fn galois_closure(a: &SetFamily, ground_a: &GroundSpec, ground_b: &GroundSpec) -> SetFamily {
    galois_closure_in(a, ground_a.family(), ground_b.family())
}

pub fn galois_closure_in(a: &SetFamily, ground_a: &SetFamily, ground_b: &SetFamily) -> SetFamily {
    best_partner_in(&best_partner_in(a, ground_b), ground_a)
}

pub fn is_closed_in(a: &SetFamily, ground_a: &SetFamily, ground_b: &SetFamily) -> bool {
    galois_closure_in(a, ground_a, ground_b) == *a
}

/// Index-level view of a pair of grounds for the searches.
///
/// The enumerated side has at most 64 members so its subfamilies are `u64`
/// masks. For every member `B_j` of the other side, `hits[j]` is the mask of
/// enumerated members meeting `B_j`; then `B_j` cross-intersects a mask `A`
/// iff `A ⊆ hits[j]`.
pub(crate) struct Incidence<'g> {
    pub side: &'g SetFamily,
    pub other: &'g SetFamily,
    pub hits: Vec<u64>,
    pub full: u64,
}

impl<'g> Incidence<'g> {
    pub fn new(side: &'g SetFamily, other: &'g SetFamily) -> Self {
        debug_assert!(side.len() <= 64);
        let hits = other
            .words()
            .iter()
            .map(|&b| {
                side.words()
                    .iter()
                    .enumerate()
                    .filter(|&(_, &a)| a & b != 0)
                    .fold(0u64, |m, (i, _)| m | 1 << i)
            })
            .collect();
        let full = if side.len() == 64 {
            u64::MAX
        } else {
            (1u64 << side.len()) - 1
        };
        Incidence {
            side,
            other,
            hits,
            full,
        }
    }

    #[inline]
    pub fn partner_count(&self, mask: u64) -> u64 {
        self.hits.iter().filter(|&&h| mask & !h == 0).count() as u64
    }

    /// Mask of enumerated-side members meeting every partner of `mask`.
    #[inline]
    pub fn closure(&self, mask: u64) -> u64 {
        self.hits
            .iter()
            .filter(|&&h| mask & !h == 0)
            .fold(self.full, |acc, &h| acc & h)
    }

    pub fn family_of(&self, mask: u64) -> SetFamily {
        let words = self
            .side
            .words()
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask >> i & 1 == 1)
            .map(|(_, &w)| w)
            .collect();
        SetFamily::from_sorted_unchecked(self.side.ground_n(), words)
    }

    pub fn partner_of(&self, mask: u64) -> SetFamily {
        let words = self
            .other
            .words()
            .iter()
            .zip(&self.hits)
            .filter(|&(_, &h)| mask & !h == 0)
            .map(|(&w, _)| w)
            .collect();
        SetFamily::from_sorted_unchecked(self.other.ground_n(), words)
    }
}

pub(crate) fn cross_ok(a: &SetFamily, b: &SetFamily) -> bool {
    words_cross_intersect(a.words(), b.words())
}
