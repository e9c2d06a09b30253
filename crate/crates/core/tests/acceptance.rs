//! Acceptance suite: one PASS/FAIL line per criterion.
//!
//! Every check compares library output with an oracle written here from the
//! definitions (sets as `BTreeSet<u32>`), never with the library itself.

use std::collections::BTreeSet;
use std::panic::{self, AssertUnwindSafe};
use std::time::Instant;

use crossfam::compression::{apply_compression, compress_to_fixed_point, potential, CompressionPair};
use crossfam::hereditary::{enumerate_downsets, lemma2_injection, lemma2_sweep};
use crossfam::prooflab::{random_compressed_cross_pair, replay};
use crossfam::search::{
    max_product_in, pairwise_to_k_product, verify_corollary3, verify_theorem1, verify_theorem4,
    SearchOptions, StrategyChoice,
};
use crossfam::{SetFamily, SetWord};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

type Set = BTreeSet<u32>;
type Fam = BTreeSet<Set>;

// ---------------------------------------------------------------- oracles

fn to_fam(f: &SetFamily) -> Fam {
    f.iter().map(|w| w.elements().collect()).collect()
}

fn from_fam(n: u32, f: &Fam) -> SetFamily {
    SetFamily::from_sets(
        n,
        f.iter()
            .map(|s| SetWord::from_elements(s.iter().copied(), n).unwrap()),
    )
    .unwrap()
}

fn all_subsets(n: u32) -> Vec<Set> {
    (0u32..1 << n)
        .map(|m| (1..=n).filter(|e| m >> (e - 1) & 1 == 1).collect())
        .collect()
}

fn oracle_cross(a: &Fam, b: &Fam) -> bool {
    a.iter().all(|x| b.iter().all(|y| !x.is_disjoint(y)))
}

fn oracle_delta(i: u32, j: u32, a: &Set) -> Set {
    if a.contains(&j) && !a.contains(&i) {
        let mut out = a.clone();
        out.remove(&j);
        out.insert(i);
        out
    } else {
        a.clone()
    }
}

fn oracle_compress(i: u32, j: u32, f: &Fam) -> Fam {
    f.iter()
        .map(|a| {
            let d = oracle_delta(i, j, a);
            if f.contains(&d) {
                a.clone()
            } else {
                d
            }
        })
        .collect()
}

fn oracle_is_compressed(n: u32, f: &Fam) -> bool {
    (1..=n).all(|i| (i + 1..=n).all(|j| oracle_compress(i, j, f) == *f))
}

fn oracle_hereditary(f: &Fam) -> bool {
    f.iter().all(|a| {
        a.iter().all(|x| {
            let mut b = a.clone();
            b.remove(x);
            f.contains(&b)
        })
    })
}

fn binom(n: u64, k: u64) -> u64 {
    if k > n {
        return 0;
    }
    (0..k).fold(1, |acc, t| acc * (n - t) / (t + 1))
}

/// `Σ_{i=1}^{r} C(n-1, i-1)`: sets of size ≤ r containing 1.
fn oracle_star_bound(n: u32, r: u32) -> u64 {
    (1..=u64::from(r)).map(|i| binom(u64::from(n) - 1, i - 1)).sum()
}

fn oracle_star_size(f: &Fam) -> u64 {
    f.iter().filter(|s| s.contains(&1)).count() as u64
}

/// Every pair of subfamilies of the two grounds.
fn oracle_max_product(ga: &[Set], gb: &[Set]) -> u64 {
    let mut best = 0;
    for ma in 0u32..1 << ga.len() {
        let a: Vec<&Set> = (0..ga.len()).filter(|t| ma >> t & 1 == 1).map(|t| &ga[t]).collect();
        for mb in 0u32..1 << gb.len() {
            let b: Vec<&Set> = (0..gb.len()).filter(|t| mb >> t & 1 == 1).map(|t| &gb[t]).collect();
            if a.iter().all(|x| b.iter().all(|y| !x.is_disjoint(y))) {
                best = best.max((a.len() * b.len()) as u64);
            }
        }
    }
    best
}

fn random_family(rng: &mut ChaCha8Rng, n: u32, max_members: usize) -> SetFamily {
    let count = rng.gen_range(0..=max_members);
    let words: Vec<u64> = (0..count).map(|_| rng.gen_range(0..1u64 << n)).collect();
    SetFamily::from_words(n, words).unwrap()
}

// ---------------------------------------------------------------- harness

type Criterion = (&'static str, fn() -> Outcome);

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome {
        pass,
        detail: detail.into(),
    }
}

fn main() {
    let criteria: [Criterion; 10] = [
        ("bounded grounds, m, n <= 4: maximum equals star bound", c1_bounded_small),
        ("bounded grounds, m = n = 5, antichain strategy", c2_bounded_five),
        ("compressed downsets of [3], all ordered pairs", c3_hereditary_pairs),
        ("simultaneous compression keeps cross-intersection", c4_pair_compression),
        ("two-base downsets: 2|H(x)| < |H| and injection", c5_two_base_lemma),
        ("compression fixed point: termination and potential", c6_fixed_point),
        ("slice-and-alter replay soundness", c7_prooflab),
        ("power-set k-fold maxima 2^(sum n - k)", c8_power_sets),
        ("pruned search equals naive enumeration", c9_search_oracle),
        ("pairwise bounds multiply to the k-fold bound", c10_squaring),
    ];
    let mut failures = 0;
    for (idx, (name, run)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let out = panic::catch_unwind(AssertUnwindSafe(run)).unwrap_or_else(|e| {
            let msg = e
                .downcast_ref::<String>()
                .cloned()
                .or_else(|| e.downcast_ref::<&str>().map(|s| s.to_string()))
                .unwrap_or_default();
            outcome(false, format!("panicked: {msg}"))
        });
        if !out.pass {
            failures += 1;
        }
        println!(
            "criterion {:>2}: {} | {} | {} | {:.2}s",
            idx + 1,
            if out.pass { "PASS" } else { "FAIL" },
            name,
            out.detail,
            start.elapsed().as_secs_f64()
        );
    }
    println!("acceptance: {} of {} criteria passed", criteria.len() - failures, criteria.len());
    if failures > 0 {
        std::process::exit(1);
    }
}

// ---------------------------------------------------------------- criteria

fn check_bounded(m: u32, n: u32, r: u32, s: u32, opts: &SearchOptions) -> Result<(), String> {
    let res = verify_theorem1(m, n, r, s, opts).map_err(|e| format!("({m},{n},{r},{s}): {e}"))?;
    let expected = oracle_star_bound(m, r) * oracle_star_bound(n, s);
    let a = to_fam(&res.witness_a);
    let b = to_fam(&res.witness_b);
    let ok = res.max_product == expected
        && res.bound == Some(expected)
        && res.equality
        && oracle_cross(&a, &b)
        && (a.len() * b.len()) as u64 == expected
        && a.iter().all(|x| x.len() as u32 <= r)
        && b.iter().all(|y| y.len() as u32 <= s);
    if ok {
        Ok(())
    } else {
        Err(format!("({m},{n},{r},{s}): got {} expected {expected}", res.max_product))
    }
}

fn c1_bounded_small() -> Outcome {
    let opts = SearchOptions::default();
    let mut cases = 0;
    let mut bad = Vec::new();
    for m in 1..=4 {
        for n in 1..=4 {
            for r in 1..=m {
                for s in 1..=n {
                    cases += 1;
                    if let Err(e) = check_bounded(m, n, r, s, &opts) {
                        bad.push(e);
                    }
                }
            }
        }
    }
    outcome(bad.is_empty(), format!("{cases} cases, {} mismatches {:?}", bad.len(), bad))
}

fn c2_bounded_five() -> Outcome {
    let opts = SearchOptions::with_strategy(StrategyChoice::Antichain);
    let mut bad = Vec::new();
    let mut nodes_max = 0;
    for r in 1..=5 {
        for s in 1..=5 {
            if let Err(e) = check_bounded(5, 5, r, s, &opts) {
                bad.push(e);
            }
            if let Ok(res) = verify_theorem1(5, 5, r, s, &opts) {
                nodes_max = nodes_max.max(res.nodes_explored);
            }
        }
    }
    outcome(
        bad.is_empty() && nodes_max <= 7581,
        format!("25 cases, {} mismatches {:?}, max nodes {nodes_max}", bad.len(), bad),
    )
}

fn c3_hereditary_pairs() -> Outcome {
    let catalog = enumerate_downsets(3, true).unwrap().families;
    // independent catalogue by filtering all subfamilies of 2^[3]
    let subsets = all_subsets(3);
    let oracle: BTreeSet<Fam> = (0u32..1 << 8)
        .map(|m| (0..8).filter(|t| m >> t & 1 == 1).map(|t| subsets[t].clone()).collect::<Fam>())
        .filter(|f| oracle_hereditary(f) && oracle_is_compressed(3, f))
        .collect();
    let lib: BTreeSet<Fam> = catalog.iter().map(to_fam).collect();
    if lib != oracle {
        return outcome(false, format!("catalogue has {} families, oracle {}", lib.len(), oracle.len()));
    }
    let opts = SearchOptions::default();
    let mut violations = 0;
    let mut pairs = 0;
    for g in &catalog {
        for h in &catalog {
            pairs += 1;
            let gs: Vec<Set> = to_fam(g).into_iter().collect();
            let hs: Vec<Set> = to_fam(h).into_iter().collect();
            let expected = oracle_star_size(&to_fam(g)) * oracle_star_size(&to_fam(h));
            let naive = oracle_max_product(&gs, &hs);
            match verify_theorem4(g, h, &opts) {
                Ok(res) if res.max_product == expected && naive == expected => {}
                _ => violations += 1,
            }
        }
    }
    outcome(
        violations == 0,
        format!("{} families, {pairs} ordered pairs, {violations} violations", catalog.len()),
    )
}

fn check_pair_compression(n: u32, i: u32, j: u32, a: &SetFamily, b: &SetFamily) -> bool {
    let p = CompressionPair::new(i, j, n).unwrap();
    let ca = apply_compression(p, a);
    let cb = apply_compression(p, b);
    let (fa, fb) = (to_fam(a), to_fam(b));
    let (oa, ob) = (oracle_compress(i, j, &fa), oracle_compress(i, j, &fb));
    to_fam(&ca) == oa
        && to_fam(&cb) == ob
        && oa.len() == fa.len()
        && ob.len() == fb.len()
        && oracle_cross(&oa, &ob)
}

fn c4_pair_compression() -> Outcome {
    let n = 3;
    let all: Vec<SetFamily> = (0u64..1 << 8)
        .map(|m| SetFamily::from_words(n, (0..8u64).filter(|t| m >> t & 1 == 1)).unwrap())
        .collect();
    let mut exhaustive = 0u64;
    let mut violations = 0u64;
    for a in &all {
        for b in &all {
            if !oracle_cross(&to_fam(a), &to_fam(b)) {
                continue;
            }
            for i in 1..=n {
                for j in 1..=n {
                    if i != j {
                        exhaustive += 1;
                        if !check_pair_compression(n, i, j, a, b) {
                            violations += 1;
                        }
                    }
                }
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x11);
    let mut random = 0;
    while random < 10_000 {
        let n = rng.gen_range(4..=8);
        let a = random_family(&mut rng, n, 12);
        // keep a random part of the sets meeting every member of `a`
        let keep: f64 = rng.gen_range(0.1..1.0);
        let b_words: Vec<u64> = (0..1u64 << n)
            .filter(|&w| a.words().iter().all(|&x| x & w != 0))
            .filter(|_| rng.gen_bool(keep))
            .collect();
        let b = SetFamily::from_words(n, b_words).unwrap();
        let i = rng.gen_range(1..=n);
        let mut j = rng.gen_range(1..=n);
        while j == i {
            j = rng.gen_range(1..=n);
        }
        random += 1;
        if !check_pair_compression(n, i, j, &a, &b) {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("{exhaustive} exhaustive checks over [3], {random} random pairs, {violations} violations"),
    )
}

fn c5_two_base_lemma() -> Outcome {
    let mut details = Vec::new();
    let mut pass = true;
    for n in [4u32, 5] {
        let catalog = enumerate_downsets(n, false).unwrap().families;
        let expected_count = if n == 4 { 168 } else { 7581 };
        let mut hypotheses = 0;
        let mut violations = 0;
        let mut injection_failures = 0;
        for h in &catalog {
            let fh = to_fam(h);
            if !oracle_hereditary(&fh) {
                violations += 1;
            }
            let bases: Vec<&Set> = fh
                .iter()
                .filter(|a| !fh.iter().any(|b| b.len() > a.len() && a.is_subset(b)))
                .collect();
            for x in 1..=n {
                let has_with = bases.iter().any(|b| b.contains(&x));
                let has_without = bases.iter().any(|b| !b.contains(&x));
                let inj = lemma2_injection(h, x).unwrap();
                // oracle for the map A -> A \ {x} on H(x)
                let star: Vec<&Set> = fh.iter().filter(|a| a.contains(&x)).collect();
                let images: BTreeSet<Set> = star
                    .iter()
                    .map(|a| {
                        let mut b = (*a).clone();
                        b.remove(&x);
                        b
                    })
                    .collect();
                let lands = images.iter().all(|b| fh.contains(b) && !b.contains(&x));
                let codomain = fh.iter().filter(|a| !a.contains(&x)).count();
                if !(lands && images.len() == star.len())
                    || inj.well_defined != lands
                    || !inj.injective
                    || inj.hypothesis_holds != (has_with && has_without)
                {
                    injection_failures += 1;
                }
                if has_with && has_without {
                    hypotheses += 1;
                    // H(x) maps into a proper part of H \ H(x)
                    if !(2 * star.len() < fh.len()) || inj.surjective || images.len() >= codomain {
                        violations += 1;
                    }
                }
            }
        }
        let sweep = lemma2_sweep(n).unwrap();
        let agree = sweep.families_checked == expected_count
            && sweep.violations == 0
            && sweep.injection_failures == 0
            && sweep.hypotheses_checked == hypotheses;
        pass &= catalog.len() == expected_count && violations == 0 && injection_failures == 0 && agree;
        details.push(format!(
            "n={n}: {} downsets, {hypotheses} hypotheses, {violations} violations, {injection_failures} injection failures",
            catalog.len()
        ));
    }
    outcome(pass, details.join("; "))
}

fn c6_fixed_point() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x66);
    let mut violations = 0;
    let mut max_steps = 0;
    for _ in 0..10_000 {
        let n = rng.gen_range(1..=10);
        let f = random_family(&mut rng, n, 24);
        let (out, trace) = compress_to_fixed_point(&f);
        let steps = trace.steps.len() as u64;
        max_steps = max_steps.max(steps);
        let ff = to_fam(&f);
        let fo = to_fam(&out);
        let oracle_potential: u64 = ff.iter().flat_map(|s| s.iter()).map(|&e| u64::from(e)).sum();
        let decreasing = trace.steps.iter().all(|s| s.potential_after < s.potential_before)
            && trace.steps.windows(2).all(|w| w[1].potential_before == w[0].potential_after)
            && trace.steps.first().is_none_or(|s| s.potential_before == oracle_potential);
        let ok = steps <= oracle_potential
            && potential(&f) == oracle_potential
            && oracle_is_compressed(n, &fo)
            && fo.len() == ff.len()
            && decreasing
            && trace.potentials_strictly_decrease();
        if !ok {
            violations += 1;
        }
    }
    outcome(
        violations == 0,
        format!("10000 random families over n <= 10, max {max_steps} steps, {violations} violations"),
    )
}

fn c7_prooflab() -> Outcome {
    let n = 3;
    let compressed: Vec<SetFamily> = (0u64..1 << 8)
        .map(|m| SetFamily::from_words(n, (0..8u64).filter(|t| m >> t & 1 == 1)).unwrap())
        .filter(|f| oracle_is_compressed(n, &to_fam(f)))
        .collect();
    let mut pairs = 0;
    let mut altered = 0;
    let mut violations = Vec::new();
    let mut run = |a: &SetFamily, b: &SetFamily, violations: &mut Vec<String>| match replay(a, b, None) {
        Ok(rep) if rep.all_hold() => {
            if rep.ledger.is_some() {
                altered += 1;
            }
        }
        Ok(_) => violations.push(format!("checks failed for {a:?} / {b:?}")),
        Err(e) => violations.push(format!("{e} for {a:?} / {b:?}")),
    };
    for a in &compressed {
        for b in &compressed {
            if oracle_cross(&to_fam(a), &to_fam(b)) {
                pairs += 1;
                run(a, b, &mut violations);
            }
        }
    }
    let mut rng = ChaCha8Rng::seed_from_u64(0x77);
    for _ in 0..200 {
        let n = rng.gen_range(4..=6);
        let (a, b) = random_compressed_cross_pair(&mut rng, n).unwrap();
        let ok = oracle_is_compressed(n, &to_fam(&a))
            && oracle_is_compressed(n, &to_fam(&b))
            && oracle_cross(&to_fam(&a), &to_fam(&b));
        if !ok {
            violations.push("generator produced an invalid pair".into());
        }
        run(&a, &b, &mut violations);
    }
    outcome(
        violations.is_empty() && altered > 0,
        format!(
            "{pairs} exhaustive pairs over [3] + 200 random, {altered} with conflicts, {} violations {:?}",
            violations.len(),
            violations.iter().take(3).collect::<Vec<_>>()
        ),
    )
}

fn c8_power_sets() -> Outcome {
    let opts = SearchOptions::default();
    let mut bad = Vec::new();
    let mut got = Vec::new();
    for (list, expected) in [(vec![2u32, 2], 4u64), (vec![2, 2, 2], 8), (vec![3, 3], 16)] {
        let oracle = 1u64 << (list.iter().sum::<u32>() - list.len() as u32);
        match verify_corollary3(&list, &opts) {
            Ok(res) => {
                let fams: Vec<Fam> = res.witnesses.iter().map(to_fam).collect();
                let pairwise = (0..fams.len())
                    .all(|i| (i + 1..fams.len()).all(|j| oracle_cross(&fams[i], &fams[j])));
                let prod: u64 = fams.iter().map(|f| f.len() as u64).product();
                got.push(format!("{list:?}->{}", res.max_product));
                if res.max_product != expected || expected != oracle || !pairwise || prod != expected {
                    bad.push(format!("{list:?}"));
                }
            }
            Err(e) => bad.push(format!("{list:?}: {e}")),
        }
    }
    outcome(bad.is_empty(), format!("{} , failures {:?}", got.join(", "), bad))
}

fn c9_search_oracle() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x99);
    let strategies = [
        StrategyChoice::Auto,
        StrategyChoice::Exhaustive,
        StrategyChoice::Galois,
        StrategyChoice::Antichain,
    ];
    let mut mismatches = 0;
    for _ in 0..50 {
        let na = rng.gen_range(1..=5);
        let nb = rng.gen_range(1..=5);
        let ga = random_family(&mut rng, na, 8);
        let gb = random_family(&mut rng, nb, 8);
        let sa: Vec<Set> = to_fam(&ga).into_iter().collect();
        let sb: Vec<Set> = to_fam(&gb).into_iter().collect();
        let naive = oracle_max_product(&sa, &sb);
        for s in strategies {
            let res = max_product_in(&ga, &gb, &SearchOptions::with_strategy(s)).unwrap();
            let (wa, wb) = (to_fam(&res.witness_a), to_fam(&res.witness_b));
            let ok = res.max_product == naive
                && oracle_cross(&wa, &wb)
                && (wa.len() * wb.len()) as u64 == naive
                && wa.is_subset(&to_fam(&ga))
                && wb.is_subset(&to_fam(&gb));
            if !ok {
                mismatches += 1;
            }
        }
        // from_fam keeps the oracle conversion honest
        debug_assert_eq!(from_fam(na, &to_fam(&ga)), ga);
    }
    outcome(mismatches == 0, format!("50 ground pairs x 4 strategies, {mismatches} mismatches"))
}

fn c10_squaring() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(0x1010);
    let mut accepted = 0;
    let mut exceeding = 0;
    let mut violations = 0;
    while accepted < 10_000 {
        let k = rng.gen_range(2..=6);
        let s: Vec<u64> = (0..k).map(|_| rng.gen_range(1..=60)).collect();
        // perturb each a_i around s_i; some a_i may exceed s_i
        let a: Vec<u64> = s
            .iter()
            .map(|&x| (x as f64 * rng.gen_range(0.2..1.6)).round() as u64)
            .collect();
        let pairwise = (0..k).all(|i| (0..k).all(|j| i == j || a[i] * a[j] <= s[i] * s[j]));
        if !pairwise {
            if pairwise_to_k_product(&a, &s).is_ok() {
                violations += 1;
            }
            continue;
        }
        accepted += 1;
        if a.iter().zip(&s).any(|(x, y)| x > y) {
            exceeding += 1;
        }
        let oracle = a.iter().map(|&x| u128::from(x)).product::<u128>()
            <= s.iter().map(|&x| u128::from(x)).product::<u128>();
        match pairwise_to_k_product(&a, &s) {
            Ok(true) if oracle => {}
            _ => violations += 1,
        }
    }
    outcome(
        violations == 0,
        format!("{accepted} vectors ({exceeding} with some a_i > s_i), {violations} violations"),
    )
}
