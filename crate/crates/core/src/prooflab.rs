//! Step-by-step replay of the slice-and-alter argument for a compressed
//! cross-intersecting pair `(A, B)` over a common ground `[n]`.
//!
//! Slicing at `n` splits a family into the members avoiding `n` and the
//! members containing it (with `n` removed). When the upper slices `A_1`, `B_1`
//! fail to cross-intersect, the conflicting sets `A_i ∈ A_1` each have a unique
//! partner `B_i = [n-1] \ A_i` in `B_1`. Moving half of the conflicts between
//! slices yields four primed families (and, for odd conflict counts, four
//! double-primed ones) that are pairwise cross-intersecting. Every claim along
//! the way is evaluated on the concrete instance and recorded as a [`Check`].

use rand::Rng;
use serde::Serialize;
use thiserror::Error;

use crate::compression::{compress_pair_to_fixed_point, is_compressed};
use crate::family::{are_cross_intersecting, downward_closure, is_hereditary, star_size_of};
use crate::{FamilyError, SetFamily, SetWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ProofError {
    #[error("precondition violated: {0}")]
    PreconditionViolation(String),
    #[error("uniqueness claim failed: {0}")]
    UniquenessViolation(String),
    #[error("identity check failed: {}", failed.join(", "))]
    IdentityViolation {
        failed: Vec<String>,
        ledger: Option<Box<AlterationLedger>>,
    },
    #[error(transparent)]
    Family(#[from] FamilyError),
}

impl ProofError {
    fn identity(failed: Vec<String>) -> Self {
        ProofError::IdentityViolation {
            failed,
            ledger: None,
        }
    }
}

/// A named claim evaluated on one instance.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Check {
    pub name: String,
    pub holds: bool,
}

fn check(checks: &mut Vec<Check>, name: impl Into<String>, holds: bool) {
    checks.push(Check {
        name: name.into(),
        holds,
    });
}

fn failed(checks: &[Check]) -> Vec<String> {
    checks
        .iter()
        .filter(|c| !c.holds)
        .map(|c| c.name.clone())
        .collect()
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceDecomposition {
    /// The sliced element, equal to the origin's ground size.
    pub element: u32,
    pub origin: SetFamily,
    /// Members avoiding `element`, on ground `[n-1]`.
    pub f0: SetFamily,
    /// Members containing `element`, with it removed, on ground `[n-1]`.
    pub f1: SetFamily,
}

impl SliceDecomposition {
    /// Compressed (resp. hereditary) origins have compressed (resp.
    /// hereditary) slices.
    pub fn preserves_predicates(&self) -> bool {
        let comp = !is_compressed(&self.origin) || (is_compressed(&self.f0) && is_compressed(&self.f1));
        let her = !is_hereditary(&self.origin) || (is_hereditary(&self.f0) && is_hereditary(&self.f1));
        comp && her
    }
}

pub fn slice(f: &SetFamily) -> Result<SliceDecomposition, ProofError> {
    let n = f.ground_n();
    if n == 0 {
        return Err(ProofError::PreconditionViolation(
            "cannot slice a family over [0]".into(),
        ));
    }
    let top = 1u64 << (n - 1);
    let (mut w0, mut w1) = (Vec::new(), Vec::new());
    for &w in f.words() {
        if w & top == 0 {
            w0.push(w);
        } else {
            w1.push(w & !top);
        }
    }
    // removing the top bit keeps both lists sorted
    let s = SliceDecomposition {
        element: n,
        origin: f.clone(),
        f0: SetFamily::from_sorted_unchecked(n - 1, w0),
        f1: SetFamily::from_sorted_unchecked(n - 1, w1),
    };
    debug_assert_eq!(s.f0.len() + s.f1.len(), f.len());
    Ok(s)
}

/// `(|F(1)|, |F_0(1)|, |F_1(1)|)`, checking the first is the sum of the others.
pub fn star_slice_identity(f: &SetFamily) -> Result<(u64, u64, u64), ProofError> {
    if f.ground_n() < 2 {
        return Err(ProofError::PreconditionViolation(
            "star/slice identity needs ground size >= 2".into(),
        ));
    }
    let s = slice(f)?;
    let whole = star_size_of(f);
    let lo = star_size_of(&s.f0);
    let hi = star_size_of(&s.f1);
    if whole != lo + hi {
        return Err(ProofError::identity(vec![format!(
            "star split: {whole} != {lo} + {hi}"
        )]));
    }
    Ok((whole, lo, hi))
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct ConflictPair {
    pub a_i: SetWord,
    pub b_i: SetWord,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ConflictSystem {
    pub n: u32,
    pub a_slices: SliceDecomposition,
    pub b_slices: SliceDecomposition,
    /// Members of `A_1` disjoint from some member of `B_1`.
    pub c: SetFamily,
    /// Ordered by ascending `A_i`.
    pub pairs: Vec<ConflictPair>,
    pub k: usize,
    pub r: usize,
    pub checks: Vec<Check>,
}

fn require_pair_preconditions(a: &SetFamily, b: &SetFamily) -> Result<(), ProofError> {
    if a.ground_n() != b.ground_n() {
        return Err(ProofError::PreconditionViolation(format!(
            "families live on different grounds [{}] and [{}]",
            a.ground_n(),
            b.ground_n()
        )));
    }
    // over [1] the slice at n is the star at 1 itself
    if a.ground_n() < 2 {
        return Err(ProofError::PreconditionViolation(
            "ground size must be at least 2".into(),
        ));
    }
    if !is_compressed(a) || !is_compressed(b) {
        return Err(ProofError::PreconditionViolation(
            "both families must be compressed".into(),
        ));
    }
    if !are_cross_intersecting(a, b) {
        return Err(ProofError::PreconditionViolation(
            "families are not cross-intersecting".into(),
        ));
    }
    Ok(())
}

/// Slices both families at `n`, collects the conflict list and verifies the
/// two uniqueness claims. `k == 0` means the upper slices cross-intersect.
pub fn find_conflicts(a: &SetFamily, b: &SetFamily) -> Result<ConflictSystem, ProofError> {
    require_pair_preconditions(a, b)?;
    let n = a.ground_n();
    let sa = slice(a)?;
    let sb = slice(b)?;
    let (a1, b1) = (&sa.f1, &sb.f1);

    let c = a1.filter(|x| b1.iter().any(|y| !x.intersects(y)));
    let pairs: Vec<ConflictPair> = c
        .iter()
        .map(|a_i| ConflictPair {
            a_i,
            b_i: a_i.complement(),
        })
        .collect();

    let mut checks = Vec::new();
    check(&mut checks, "slices preserve compressed/hereditary", sa.preserves_predicates() && sb.preserves_predicates());
    for (idx, p) in pairs.iter().enumerate() {
        let i = idx + 1;
        let disjoint_in_b1: Vec<SetWord> = b1.iter().filter(|y| !p.a_i.intersects(*y)).collect();
        if disjoint_in_b1 != [p.b_i] {
            return Err(ProofError::UniquenessViolation(format!(
                "B_{i} = {} is not the unique member of B_1 disjoint from A_{i} = {} (found {disjoint_in_b1:?})",
                p.b_i, p.a_i
            )));
        }
        let disjoint_in_a1: Vec<SetWord> = a1.iter().filter(|x| !p.b_i.intersects(*x)).collect();
        if disjoint_in_a1 != [p.a_i] {
            return Err(ProofError::UniquenessViolation(format!(
                "A_{i} = {} is not the unique member of A_1 disjoint from B_{i} = {} (found {disjoint_in_a1:?})",
                p.a_i, p.b_i
            )));
        }
        check(&mut checks, format!("unique partner of A_{i} in B_1"), true);
        check(&mut checks, format!("unique partner of B_{i} in A_1"), true);
        let lifted_a = p.a_i.bits() | 1 << (n - 1);
        let lifted_b = p.b_i.bits() | 1 << (n - 1);
        check(&mut checks, format!("A_{i} + n in A"), a.contains_word(lifted_a));
        check(&mut checks, format!("B_{i} + n in B"), b.contains_word(lifted_b));
    }
    let bad = failed(&checks);
    if !bad.is_empty() {
        return Err(ProofError::identity(bad));
    }
    let k = pairs.len();
    Ok(ConflictSystem {
        n,
        c,
        k,
        r: k / 2,
        pairs,
        a_slices: sa,
        b_slices: sb,
        checks,
    })
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SliceQuad {
    pub a0: SetFamily,
    pub a1: SetFamily,
    pub b0: SetFamily,
    pub b1: SetFamily,
}

impl SliceQuad {
    fn a(&self, p: usize) -> &SetFamily {
        if p == 0 {
            &self.a0
        } else {
            &self.a1
        }
    }

    fn b(&self, q: usize) -> &SetFamily {
        if q == 0 {
            &self.b0
        } else {
            &self.b1
        }
    }
}

/// Every size the argument talks about. Primes are spelled `_p` / `_pp`.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct LedgerSizes {
    pub size_a: u64,
    pub size_b: u64,
    pub a: [u64; 2],
    pub b: [u64; 2],
    pub a_p: [u64; 2],
    pub b_p: [u64; 2],
    pub a_pp: Option<[u64; 2]>,
    pub b_pp: Option<[u64; 2]>,
    /// `|G_p(1)|`
    pub g: [u64; 2],
    /// `|H_p(1)|`
    pub h: [u64; 2],
    pub g_star: u64,
    pub h_star: u64,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct AlterationLedger {
    pub n: u32,
    pub k: usize,
    pub r: usize,
    pub pairs: Vec<ConflictPair>,
    pub slices: SliceQuad,
    pub ground_g: SetFamily,
    pub ground_h: SetFamily,
    pub primed: SliceQuad,
    pub double_primed: Option<SliceQuad>,
    pub sizes: LedgerSizes,
    pub checks: Vec<Check>,
}

impl AlterationLedger {
    pub fn all_hold(&self) -> bool {
        self.checks.iter().all(|c| c.holds)
    }
}

fn validate_grounds(
    a: &SetFamily,
    b: &SetFamily,
    grounds: Option<(&SetFamily, &SetFamily)>,
) -> Result<(SetFamily, SetFamily), ProofError> {
    match grounds {
        Some((g, h)) => {
            for (name, ground, fam) in [("G", g, a), ("H", h, b)] {
                if ground.ground_n() != fam.ground_n() {
                    return Err(ProofError::PreconditionViolation(format!(
                        "ground {name} is not over [{}]",
                        fam.ground_n()
                    )));
                }
                if !is_hereditary(ground) || !is_compressed(ground) {
                    return Err(ProofError::PreconditionViolation(format!(
                        "ground {name} must be hereditary and compressed"
                    )));
                }
                if !fam.is_subfamily_of(ground) {
                    return Err(ProofError::PreconditionViolation(format!(
                        "family is not contained in ground {name}"
                    )));
                }
            }
            Ok((g.clone(), h.clone()))
        }
        // the down-closure of a compressed family is hereditary and compressed
        None => Ok((downward_closure(a)?, downward_closure(b)?)),
    }
}

/// Builds the primed (and for odd `k` the double-primed) families and checks
/// every cross-intersection, membership, containment, counting identity and
/// slice-level product inequality against the grounds.
///
/// Without explicit grounds, `G` and `H` default to the down-closures of `a`
/// and `b`.
pub fn build_alteration(
    cs: &ConflictSystem,
    a: &SetFamily,
    b: &SetFamily,
    grounds: Option<(&SetFamily, &SetFamily)>,
) -> Result<AlterationLedger, ProofError> {
    if cs.k == 0 {
        return Err(ProofError::PreconditionViolation(
            "alteration needs at least one conflict pair".into(),
        ));
    }
    if cs.a_slices.origin != *a || cs.b_slices.origin != *b {
        return Err(ProofError::PreconditionViolation(
            "conflict system was built from different families".into(),
        ));
    }
    let (g, h) = validate_grounds(a, b, grounds)?;
    let (k, r, n) = (cs.k, cs.r, cs.n);
    let m = n - 1;
    let sa = &cs.a_slices;
    let sb = &cs.b_slices;
    let a_first = |upto: usize| cs.pairs[..upto].iter().map(|p| p.a_i.bits());
    let a_rest = |from: usize| cs.pairs[from..].iter().map(|p| p.a_i.bits());
    let b_first = |upto: usize| cs.pairs[..upto].iter().map(|p| p.b_i.bits());
    let b_rest = |from: usize| cs.pairs[from..].iter().map(|p| p.b_i.bits());
    let add = |f: &SetFamily, extra: Vec<u64>| {
        SetFamily::from_unsorted_unchecked(m, f.words().iter().copied().chain(extra).collect())
    };
    let remove = |f: &SetFamily, gone: Vec<u64>| f.filter(|s| !gone.contains(&s.bits()));

    let primed = SliceQuad {
        a0: add(&sa.f0, a_first(r).collect()),
        a1: remove(&sa.f1, a_rest(r).collect()),
        b0: add(&sb.f0, b_rest(r).collect()),
        b1: remove(&sb.f1, b_first(r).collect()),
    };
    let double_primed = (k % 2 == 1).then(|| {
        let mid_a = cs.pairs[r].a_i.bits();
        let mid_b = cs.pairs[r].b_i.bits();
        SliceQuad {
            a0: add(&primed.a0, vec![mid_a]),
            a1: add(&primed.a1, vec![mid_a]),
            b0: remove(&primed.b0, vec![mid_b]),
            b1: remove(&primed.b1, vec![mid_b]),
        }
    });

    let gs = slice(&g)?;
    let hs = slice(&h)?;
    let len = |f: &SetFamily| f.len() as u64;
    let sizes = LedgerSizes {
        size_a: len(a),
        size_b: len(b),
        a: [len(&sa.f0), len(&sa.f1)],
        b: [len(&sb.f0), len(&sb.f1)],
        a_p: [len(&primed.a0), len(&primed.a1)],
        b_p: [len(&primed.b0), len(&primed.b1)],
        a_pp: double_primed.as_ref().map(|d| [len(&d.a0), len(&d.a1)]),
        b_pp: double_primed.as_ref().map(|d| [len(&d.b0), len(&d.b1)]),
        g: [star_size_of(&gs.f0), star_size_of(&gs.f1)],
        h: [star_size_of(&hs.f0), star_size_of(&hs.f1)],
        g_star: star_size_of(&g),
        h_star: star_size_of(&h),
    };

    let mut checks = Vec::new();
    let (ku, ru) = (k as i64, r as i64);
    let s = |v: u64| v as i64;

    check(&mut checks, "|A| = a_0 + a_1", sizes.size_a == sizes.a[0] + sizes.a[1]);
    check(&mut checks, "|B| = b_0 + b_1", sizes.size_b == sizes.b[0] + sizes.b[1]);
    check(&mut checks, "|G(1)| = g_0 + g_1", sizes.g_star == sizes.g[0] + sizes.g[1]);
    check(&mut checks, "|H(1)| = h_0 + h_1", sizes.h_star == sizes.h[0] + sizes.h[1]);

    for p in 0..2 {
        for q in 0..2 {
            check(
                &mut checks,
                format!("A'_{p} and B'_{q} cross-intersect"),
                are_cross_intersecting(primed.a(p), primed.b(q)),
            );
        }
    }
    for (idx, pair) in cs.pairs.iter().enumerate() {
        let i = idx + 1;
        check(&mut checks, format!("A_{i} not in A_0"), !sa.f0.contains(pair.a_i));
        check(&mut checks, format!("B_{i} not in B_0"), !sb.f0.contains(pair.b_i));
        check(&mut checks, format!("A_{i} in G_0"), gs.f0.contains(pair.a_i));
        check(&mut checks, format!("B_{i} in H_0"), hs.f0.contains(pair.b_i));
    }

    check(&mut checks, "a'_0 = a_0 + r", s(sizes.a_p[0]) == s(sizes.a[0]) + ru);
    check(&mut checks, "a'_1 = a_1 + r - k", s(sizes.a_p[1]) == s(sizes.a[1]) + ru - ku);
    check(&mut checks, "b'_0 = b_0 + k - r", s(sizes.b_p[0]) == s(sizes.b[0]) + ku - ru);
    check(&mut checks, "b'_1 = b_1 - r", s(sizes.b_p[1]) == s(sizes.b[1]) - ru);
    check(
        &mut checks,
        "|A| = a'_0 + a'_1 + k - 2r",
        s(sizes.size_a) == s(sizes.a_p[0]) + s(sizes.a_p[1]) + ku - 2 * ru,
    );
    check(
        &mut checks,
        "|B| = b'_0 + b'_1 + 2r - k",
        s(sizes.size_b) == s(sizes.b_p[0]) + s(sizes.b_p[1]) + 2 * ru - ku,
    );

    for p in 0..2 {
        check(&mut checks, format!("A'_{p} within G_{p}"), primed.a(p).is_subfamily_of(if p == 0 { &gs.f0 } else { &gs.f1 }));
        check(&mut checks, format!("B'_{p} within H_{p}"), primed.b(p).is_subfamily_of(if p == 0 { &hs.f0 } else { &hs.f1 }));
        for q in 0..2 {
            check(
                &mut checks,
                format!("a'_{p} b'_{q} <= g_{p} h_{q}"),
                sizes.a_p[p] * sizes.b_p[q] <= sizes.g[p] * sizes.h[q],
            );
        }
    }

    if let (Some(dp), Some(app), Some(bpp)) = (&double_primed, sizes.a_pp, sizes.b_pp) {
        for p in 0..2 {
            check(&mut checks, format!("a''_{p} = a'_{p} + 1"), app[p] == sizes.a_p[p] + 1);
            check(&mut checks, format!("b''_{p} = b'_{p} - 1"), s(bpp[p]) == s(sizes.b_p[p]) - 1);
            check(&mut checks, format!("A''_{p} within G_{p}"), dp.a(p).is_subfamily_of(if p == 0 { &gs.f0 } else { &gs.f1 }));
            check(&mut checks, format!("B''_{p} within H_{p}"), dp.b(p).is_subfamily_of(if p == 0 { &hs.f0 } else { &hs.f1 }));
            for (q, &bq) in bpp.iter().enumerate() {
                check(
                    &mut checks,
                    format!("A''_{p} and B''_{q} cross-intersect"),
                    are_cross_intersecting(dp.a(p), dp.b(q)),
                );
                check(
                    &mut checks,
                    format!("a''_{p} b''_{q} <= g_{p} h_{q}"),
                    app[p] * bq <= sizes.g[p] * sizes.h[q],
                );
            }
        }
    }
    check(
        &mut checks,
        "(a'_0 + a'_1)(b'_0 + b'_1) <= |G(1)||H(1)|",
        (sizes.a_p[0] + sizes.a_p[1]) * (sizes.b_p[0] + sizes.b_p[1]) <= sizes.g_star * sizes.h_star,
    );
    check(
        &mut checks,
        "|A||B| <= |G(1)||H(1)|",
        sizes.size_a * sizes.size_b <= sizes.g_star * sizes.h_star,
    );

    let ledger = AlterationLedger {
        n,
        k,
        r,
        pairs: cs.pairs.clone(),
        slices: SliceQuad {
            a0: sa.f0.clone(),
            a1: sa.f1.clone(),
            b0: sb.f0.clone(),
            b1: sb.f1.clone(),
        },
        ground_g: g,
        ground_h: h,
        primed,
        double_primed,
        sizes,
        checks,
    };
    let bad = failed(&ledger.checks);
    if bad.is_empty() {
        Ok(ledger)
    } else {
        Err(ProofError::IdentityViolation {
            failed: bad,
            ledger: Some(Box::new(ledger)),
        })
    }
}

/// `|A|(2^n - |A|)`, checked against `(2^{n-1})^2`.
pub fn am_gm_endgame(n: u32, a_size: u128) -> Result<u128, ProofError> {
    if n == 0 || n > 63 {
        return Err(ProofError::PreconditionViolation(format!(
            "ground size {n} outside 1..=63"
        )));
    }
    let total = 1u128 << n;
    if a_size > total {
        return Err(ProofError::PreconditionViolation(format!(
            "|A| = {a_size} exceeds 2^{n}"
        )));
    }
    let value = a_size * (total - a_size);
    let cap = 1u128 << (2 * (n - 1));
    if value > cap {
        return Err(ProofError::identity(vec![format!(
            "{value} > 4^{}",
            n - 1
        )]));
    }
    Ok(value)
}

/// Full replay for one pair: conflicts, and the alteration when there are any.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct ProofReplay {
    pub conflicts: ConflictSystem,
    /// Without conflicts, all four slice pairs cross-intersect.
    pub slice_checks: Vec<Check>,
    pub ledger: Option<AlterationLedger>,
}

impl ProofReplay {
    pub fn all_hold(&self) -> bool {
        self.conflicts.checks.iter().all(|c| c.holds)
            && self.slice_checks.iter().all(|c| c.holds)
            && self.ledger.as_ref().is_none_or(AlterationLedger::all_hold)
    }
}

pub fn replay(
    a: &SetFamily,
    b: &SetFamily,
    grounds: Option<(&SetFamily, &SetFamily)>,
) -> Result<ProofReplay, ProofError> {
    let cs = find_conflicts(a, b)?;
    let mut slice_checks = Vec::new();
    let (sa, sb) = (&cs.a_slices, &cs.b_slices);
    for (p, fa) in [(0, &sa.f0), (1, &sa.f1)] {
        for (q, fb) in [(0, &sb.f0), (1, &sb.f1)] {
            let must = cs.k == 0 || (p, q) != (1, 1);
            if must {
                check(
                    &mut slice_checks,
                    format!("A_{p} and B_{q} cross-intersect"),
                    are_cross_intersecting(fa, fb),
                );
            }
        }
    }
    let ledger = if cs.k > 0 {
        Some(build_alteration(&cs, a, b, grounds)?)
    } else {
        validate_grounds(a, b, grounds)?;
        None
    };
    let bad = failed(&slice_checks);
    if !bad.is_empty() {
        return Err(ProofError::identity(bad));
    }
    Ok(ProofReplay {
        conflicts: cs,
        slice_checks,
        ledger,
    })
}

/// A random compressed cross-intersecting pair over `[n]`.
///
/// Draws `A` without the empty set, thins the largest partner of `A` for `B`,
/// then compresses both simultaneously.
pub fn random_compressed_cross_pair<R: Rng + ?Sized>(
    rng: &mut R,
    n: u32,
) -> Result<(SetFamily, SetFamily), ProofError> {
    if n == 0 || n > crate::family::ENUMERATION_CAP {
        return Err(ProofError::PreconditionViolation(format!(
            "random pairs need 1 <= n <= {}",
            crate::family::ENUMERATION_CAP
        )));
    }
    let pa: f64 = rng.gen_range(0.05..0.6);
    let pb: f64 = rng.gen_range(0.3..1.0);
    let a_words: Vec<u64> = (1..1u64 << n).filter(|_| rng.gen_bool(pa)).collect();
    let b_words: Vec<u64> = (1..1u64 << n)
        .filter(|&w| a_words.iter().all(|&x| x & w != 0))
        .filter(|_| rng.gen_bool(pb))
        .collect();
    let a = SetFamily::from_sorted_unchecked(n, a_words);
    let b = SetFamily::from_sorted_unchecked(n, b_words);
    let (ca, cb, _) = compress_pair_to_fixed_point(&a, &b).map_err(|e| {
        ProofError::PreconditionViolation(format!("random pair generation failed: {e}"))
    })?;
    Ok((ca, cb))
}
