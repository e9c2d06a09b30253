//! Element-pair compressions (shifts) and the fixed-point procedures built on them.

use serde::Serialize;
use thiserror::Error;

use crate::family::are_cross_intersecting;
use crate::{FamilyError, SetFamily, SetWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CompressionError {
    #[error("input families are not cross-intersecting")]
    NotCrossIntersecting,
    #[error(transparent)]
    Family(#[from] FamilyError),
}

/// The ordered element pair `(i, j)` of a compression moving `j` to `i`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct CompressionPair {
    i: u32,
    j: u32,
}

impl CompressionPair {
    /// Both elements must lie in `[n]`. `i == j` is allowed and acts as the identity.
    pub fn new(i: u32, j: u32, ground_n: u32) -> Result<Self, FamilyError> {
        for e in [i, j] {
            if e == 0 || e > ground_n {
                return Err(FamilyError::ElementOutOfRange {
                    element: e,
                    ground_n,
                });
            }
        }
        Ok(CompressionPair { i, j })
    }

    pub(crate) fn unchecked(i: u32, j: u32) -> Self {
        CompressionPair { i, j }
    }

    pub fn i(self) -> u32 {
        self.i
    }

    pub fn j(self) -> u32 {
        self.j
    }

    /// A left-compression moves an element to a smaller one.
    pub fn is_left(self) -> bool {
        self.i < self.j
    }

    #[inline]
    fn shift_word(self, a: u64) -> u64 {
        let ib = 1u64 << (self.i - 1);
        let jb = 1u64 << (self.j - 1);
        if a & jb != 0 && a & ib == 0 {
            (a & !jb) | ib
        } else {
            a
        }
    }
}

/// `δ_{i,j}`: replace `j` by `i` when `j ∈ A` and `i ∉ A`.
pub fn delta(p: CompressionPair, a: SetWord) -> Result<SetWord, FamilyError> {
    if p.i.max(p.j) > a.ground_n() {
        return Err(FamilyError::ElementOutOfRange {
            element: p.i.max(p.j),
            ground_n: a.ground_n(),
        });
    }
    Ok(SetWord::from_raw(p.shift_word(a.bits()), a.ground_n()))
}

/// `Δ_{i,j}`: move each member to its image unless the image is already present.
///
/// Elements of `p` above the family's ground leave it unchanged.
pub fn apply_compression(p: CompressionPair, f: &SetFamily) -> SetFamily {
    let n = f.ground_n();
    if p.i.max(p.j) > n || p.i == p.j {
        return f.clone();
    }
    let words: Vec<u64> = f
        .words()
        .iter()
        .map(|&a| {
            let d = p.shift_word(a);
            if d != a && !f.contains_word(d) {
                d
            } else {
                a
            }
        })
        .collect();
    let out = SetFamily::from_unsorted_unchecked(n, words);
    debug_assert_eq!(out.len(), f.len());
    out
}

/// Whether `Δ_{i,j}` would change `f`, without building the image.
fn compression_changes(p: CompressionPair, f: &SetFamily) -> bool {
    if p.i.max(p.j) > f.ground_n() || p.i == p.j {
        return false;
    }
    f.words().iter().any(|&a| {
        let d = p.shift_word(a);
        d != a && !f.contains_word(d)
    })
}

/// Invariant under every left-compression.
pub fn is_compressed(f: &SetFamily) -> bool {
    let n = f.ground_n();
    f.words().iter().all(|&w| {
        (1..=n).filter(|&j| w >> (j - 1) & 1 == 1).all(|j| {
            (1..j)
                .filter(|&i| w >> (i - 1) & 1 == 0)
                .all(|i| f.contains_word(w & !(1 << (j - 1)) | 1 << (i - 1)))
        })
    })
}

/// `Σ_{F ∈ f} Σ_{a ∈ F} a`; strictly decreases under a changing left-compression.
pub fn potential(f: &SetFamily) -> u64 {
    f.iter().map(SetWord::element_sum).sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionStep {
    pub i: u32,
    pub j: u32,
    pub potential_before: u64,
    pub potential_after: u64,
}

/// Record of a fixed-point run over one family or a pair of families.
///
/// For pairs, potentials are summed over both families.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct CompressionTrace {
    pub steps: Vec<CompressionStep>,
    pub initial: Vec<SetFamily>,
    #[serde(rename = "final")]
    pub final_families: Vec<SetFamily>,
}

impl CompressionTrace {
    pub fn potentials_strictly_decrease(&self) -> bool {
        self.steps
            .iter()
            .all(|s| s.potential_after < s.potential_before)
            && self
                .steps
                .windows(2)
                .all(|w| w[1].potential_before == w[0].potential_after)
    }
}

/// First left-compression in lexicographic `(i, j)` order that changes any of `fams`.
fn first_changing_pair(n: u32, fams: &[&SetFamily]) -> Option<CompressionPair> {
    (1..=n)
        .flat_map(|i| (i + 1..=n).map(move |j| CompressionPair::unchecked(i, j)))
        .find(|&p| fams.iter().any(|f| compression_changes(p, f)))
}

/// Applies changing left-compressions until none applies.
///
/// Pairs are scanned lexicographically and the scan restarts after each change,
/// so the trace is deterministic.
pub fn compress_to_fixed_point(f: &SetFamily) -> (SetFamily, CompressionTrace) {
    let mut cur = f.clone();
    let mut steps = Vec::new();
    let mut pot = potential(&cur);
    while let Some(p) = first_changing_pair(cur.ground_n(), &[&cur]) {
        cur = apply_compression(p, &cur);
        let next = potential(&cur);
        steps.push(CompressionStep {
            i: p.i,
            j: p.j,
            potential_before: pot,
            potential_after: next,
        });
        pot = next;
    }
    let trace = CompressionTrace {
        steps,
        initial: vec![f.clone()],
        final_families: vec![cur.clone()],
    };
    (cur, trace)
}

/// Compresses two cross-intersecting families simultaneously.
///
/// Each chosen left-compression is applied to both families, so the pair stays
/// cross-intersecting and both sizes are preserved.
pub fn compress_pair_to_fixed_point(
    a: &SetFamily,
    b: &SetFamily,
) -> Result<(SetFamily, SetFamily, CompressionTrace), CompressionError> {
    if !are_cross_intersecting(a, b) {
        return Err(CompressionError::NotCrossIntersecting);
    }
    let n = a.ground_n().max(b.ground_n());
    let (mut ca, mut cb) = (a.clone(), b.clone());
    let mut pot = potential(&ca) + potential(&cb);
    let mut steps = Vec::new();
    while let Some(p) = first_changing_pair(n, &[&ca, &cb]) {
        ca = apply_compression(p, &ca);
        cb = apply_compression(p, &cb);
        let next = potential(&ca) + potential(&cb);
        steps.push(CompressionStep {
            i: p.i,
            j: p.j,
            potential_before: pot,
            potential_after: next,
        });
        pot = next;
    }
    let trace = CompressionTrace {
        steps,
        initial: vec![a.clone(), b.clone()],
        final_families: vec![ca.clone(), cb.clone()],
    };
    Ok((ca, cb, trace))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::family::{bounded_family, is_hereditary};
    use proptest::prelude::*;

    fn fam(n: u32, lists: &[&[u32]]) -> SetFamily {
        SetFamily::from_lists(n, lists).unwrap()
    }

    fn set(n: u32, e: &[u32]) -> SetWord {
        SetWord::from_elements(e.iter().copied(), n).unwrap()
    }

    /// Literal two-part definition of `Δ_{i,j}`, kept separate from the
    /// implementation above.
    fn compression_by_definition(i: u32, j: u32, f: &SetFamily) -> SetFamily {
        let n = f.ground_n();
        let d = |a: SetWord| -> SetWord {
            if a.contains(j) && !a.contains(i) {
                SetWord::from_elements(a.elements().filter(|&e| e != j).chain([i]), n).unwrap()
            } else {
                a
            }
        };
        let moved = f.iter().map(d).filter(|x| !f.contains(*x));
        let kept = f.iter().filter(|&a| f.contains(d(a)));
        SetFamily::from_sets(n, moved.chain(kept)).unwrap()
    }

    #[test]
    fn delta_examples() {
        let p13 = CompressionPair::new(1, 3, 3).unwrap();
        assert_eq!(delta(p13, set(3, &[2, 3])).unwrap(), set(3, &[1, 2]));
        assert_eq!(delta(p13, set(3, &[1, 3])).unwrap(), set(3, &[1, 3]));
        for w in 0..8 {
            let a = SetWord::new(w, 3).unwrap();
            for i in 1..=3 {
                let p = CompressionPair::new(i, i, 3).unwrap();
                assert_eq!(delta(p, a).unwrap(), a);
            }
            assert_eq!(delta(p13, a).unwrap().len(), a.len());
        }
        assert!(CompressionPair::new(1, 4, 3).is_err());
        assert!(CompressionPair::new(0, 2, 3).is_err());
        assert!(CompressionPair::new(1, 2, 3).unwrap().is_left());
        assert!(!CompressionPair::new(2, 1, 3).unwrap().is_left());
    }

    #[test]
    fn apply_compression_examples() {
        let p12 = CompressionPair::new(1, 2, 2).unwrap();
        assert_eq!(apply_compression(p12, &fam(2, &[&[2]])), fam(2, &[&[1]]));
        assert_eq!(
            apply_compression(p12, &fam(2, &[&[1], &[2]])),
            fam(2, &[&[1], &[2]])
        );
        // {1,2} is already present, so {2,3} stays
        let p13 = CompressionPair::new(1, 3, 3).unwrap();
        let f = fam(3, &[&[2, 3], &[1, 2]]);
        assert_eq!(apply_compression(p13, &f), fam(3, &[&[1, 2], &[2, 3]]));
        assert_eq!(apply_compression(p13, &f), compression_by_definition(1, 3, &f));
    }

    #[test]
    fn compression_matches_definition_exhaustively_on_three() {
        for raw in 0u32..256 {
            let f = SetFamily::from_words(3, (0..8).filter(|b| raw >> b & 1 == 1)).unwrap();
            for i in 1..=3 {
                for j in 1..=3 {
                    let p = CompressionPair::new(i, j, 3).unwrap();
                    let got = apply_compression(p, &f);
                    assert_eq!(got, compression_by_definition(i, j, &f));
                    assert_eq!(got.len(), f.len());
                }
            }
        }
    }

    #[test]
    fn is_compressed_examples() {
        for n in 0..=6 {
            for r in 0..=n {
                assert!(is_compressed(&bounded_family(n, r).unwrap()));
            }
        }
        assert!(!is_compressed(&fam(2, &[&[2]])));
        assert!(is_compressed(&fam(2, &[&[]])));
        assert!(is_compressed(&SetFamily::empty(2).unwrap()));
    }

    #[test]
    fn potential_examples() {
        assert_eq!(potential(&fam(2, &[&[1, 2]])), 3);
        assert_eq!(potential(&SetFamily::empty(3).unwrap()), 0);
        assert_eq!(potential(&fam(3, &[&[2], &[2, 3]])), 7);
    }

    #[test]
    fn fixed_point_examples() {
        let (out, trace) = compress_to_fixed_point(&fam(3, &[&[2], &[2, 3]]));
        assert_eq!(out, fam(3, &[&[1], &[1, 2]]));
        assert!(trace.potentials_strictly_decrease());
        assert_eq!(trace.steps.first().unwrap().potential_before, 7);
        assert_eq!(trace.steps.last().unwrap().potential_after, 4);

        let b = bounded_family(3, 2).unwrap();
        let (out, trace) = compress_to_fixed_point(&b);
        assert_eq!(out, b);
        assert!(trace.steps.is_empty());

        let (out, trace) = compress_to_fixed_point(&fam(3, &[&[3]]));
        assert_eq!(out, fam(3, &[&[1]]));
        assert_eq!(trace.steps.len(), 1);
        assert_eq!((trace.steps[0].i, trace.steps[0].j), (1, 3));
    }

    #[test]
    fn pair_fixed_point_examples() {
        let a = fam(2, &[&[2]]);
        let (ca, cb, trace) = compress_pair_to_fixed_point(&a, &a).unwrap();
        assert_eq!(ca, fam(2, &[&[1]]));
        assert_eq!(cb, fam(2, &[&[1]]));
        assert_eq!(trace.steps.len(), 1);

        let s = fam(3, &[&[1], &[1, 2]]);
        let (ca, cb, trace) = compress_pair_to_fixed_point(&s, &s).unwrap();
        assert_eq!((ca, cb), (s.clone(), s));
        assert!(trace.steps.is_empty());

        let t = fam(3, &[&[2, 3]]);
        let (ca, cb, trace) = compress_pair_to_fixed_point(&t, &t).unwrap();
        assert_eq!(ca, fam(3, &[&[1, 2]]));
        assert_eq!(cb, fam(3, &[&[1, 2]]));
        assert!(trace.potentials_strictly_decrease());

        assert_eq!(
            compress_pair_to_fixed_point(&fam(2, &[&[1]]), &fam(2, &[&[2]])),
            Err(CompressionError::NotCrossIntersecting)
        );
    }

    #[test]
    fn pair_compression_keeps_cross_intersection_at_every_step() {
        let a = fam(4, &[&[2, 4], &[3, 4], &[2, 3, 4]]);
        let b = fam(4, &[&[4], &[2, 3]]);
        assert!(are_cross_intersecting(&a, &b));
        let (_, _, trace) = compress_pair_to_fixed_point(&a, &b).unwrap();
        let (mut ca, mut cb) = (a, b);
        for s in &trace.steps {
            let p = CompressionPair::new(s.i, s.j, 4).unwrap();
            ca = apply_compression(p, &ca);
            cb = apply_compression(p, &cb);
            assert!(are_cross_intersecting(&ca, &cb));
        }
        assert!(is_compressed(&ca) && is_compressed(&cb));
    }

    fn family_strategy(max_n: u32) -> impl Strategy<Value = SetFamily> {
        (1..=max_n).prop_flat_map(|n| {
            proptest::collection::vec(0u64..(1 << n), 0..24)
                .prop_map(move |ws| SetFamily::from_words(n, ws).unwrap())
        })
    }

    proptest! {
        #[test]
        fn size_preserved(f in family_strategy(7), i in 1u32..8, j in 1u32..8) {
            let p = CompressionPair::unchecked(i, j);
            prop_assert_eq!(apply_compression(p, &f).len(), f.len());
        }

        #[test]
        fn fixed_point_is_compressed_and_idempotent(f in family_strategy(8)) {
            let (out, trace) = compress_to_fixed_point(&f);
            prop_assert!(is_compressed(&out));
            prop_assert_eq!(out.len(), f.len());
            prop_assert!(trace.potentials_strictly_decrease());
            prop_assert!(trace.steps.len() as u64 <= potential(&f));
            let (again, t2) = compress_to_fixed_point(&out);
            prop_assert_eq!(again, out);
            prop_assert!(t2.steps.is_empty());
        }

        #[test]
        fn fixed_point_stays_inside_compressed_superfamily(
            f in family_strategy(6), r_frac in 0u32..=6,
        ) {
            // bounded families are compressed supersets of anything that fits
            let n = f.ground_n();
            let r = r_frac.min(n);
            let g = bounded_family(n, r).unwrap();
            let f = f.filter(|s| s.len() <= r);
            let (out, _) = compress_to_fixed_point(&f);
            prop_assert!(out.is_subfamily_of(&g));
        }

        #[test]
        fn compression_preserves_hereditary(f in family_strategy(5)) {
            let h = crate::family::downward_closure(&f).unwrap();
            prop_assume!(is_hereditary(&h));
            for i in 1..=h.ground_n() {
                for j in i + 1..=h.ground_n() {
                    let c = apply_compression(CompressionPair::unchecked(i, j), &h);
                    prop_assert!(is_hereditary(&c));
                }
            }
        }
    }
}
