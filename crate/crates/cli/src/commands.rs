use std::collections::BTreeMap;
use std::path::{Path, PathBuf};
use std::time::Instant;

use crossfam::compression::{compress_pair_to_fixed_point, compress_to_fixed_point, is_compressed, CompressionError};
use crossfam::hereditary::{enumerate_downsets, lemma2_sweep, HereditaryError};
use crossfam::io::{format_family, read_family_file, FamilyFileError};
use crossfam::prooflab::{random_compressed_cross_pair, replay, ProofError};
use crossfam::search::{
    max_product_in, max_product_pair, verify_corollary3, verify_theorem1, verify_theorem2,
    verify_theorem4, verify_theorem5, SearchError, SearchOptions, StrategyChoice, DEFAULT_NODE_BUDGET,
};
use crossfam::{FamilyError, GroundSpec, SetFamily};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use crate::report::RunReport;
use crate::Command;

pub const BUDGET_ENV: &str = "CROSSFAM_BUDGET";

const EXIT_OK: u8 = 0;
const EXIT_VERIFICATION: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

/// Largest ground for random prooflab pairs.
const RANDOM_PAIR_MAX_N: u32 = 10;

pub struct Context {
    pub threads: Option<usize>,
    pub seed: u64,
    pub out: Option<PathBuf>,
}

#[derive(Debug)]
pub enum Failure {
    Usage(String),
    Budget(String),
    /// A checked statement came out false; the report is still written.
    Verification { msg: String, results: Value },
}

impl Failure {
    fn verification(msg: impl Into<String>, results: Value) -> Self {
        Failure::Verification {
            msg: msg.into(),
            results,
        }
    }
}

impl From<SearchError> for Failure {
    fn from(e: SearchError) -> Self {
        match e {
            SearchError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            _ if e.is_verification_failure() => {
                Failure::verification(e.to_string(), json!({ "error": e.to_string() }))
            }
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<HereditaryError> for Failure {
    fn from(e: HereditaryError) -> Self {
        match e {
            HereditaryError::BudgetExceeded(_) => Failure::Budget(e.to_string()),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<ProofError> for Failure {
    fn from(e: ProofError) -> Self {
        match &e {
            ProofError::UniquenessViolation(_) => {
                Failure::verification(e.to_string(), json!({ "error": e.to_string() }))
            }
            ProofError::IdentityViolation { failed, ledger } => Failure::verification(
                e.to_string(),
                json!({ "error": e.to_string(), "failed": failed, "ledger": to_value(ledger) }),
            ),
            _ => Failure::Usage(e.to_string()),
        }
    }
}

impl From<FamilyFileError> for Failure {
    fn from(e: FamilyFileError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<FamilyError> for Failure {
    fn from(e: FamilyError) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<CompressionError> for Failure {
    fn from(e: CompressionError) -> Self {
        Failure::Usage(e.to_string())
    }
}

type Params = BTreeMap<String, Value>;
type Outcome = Result<Value, Failure>;

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("library types serialize to JSON")
}

fn node_budget() -> Result<u64, Failure> {
    match std::env::var(BUDGET_ENV) {
        Ok(raw) => raw
            .trim()
            .parse::<u64>()
            .ok()
            .filter(|&b| b > 0)
            .ok_or_else(|| Failure::Usage(format!("{BUDGET_ENV} must be a positive integer, got `{raw}`"))),
        Err(_) => Ok(DEFAULT_NODE_BUDGET),
    }
}

fn search_options(ctx: &Context, strategy: StrategyChoice) -> Result<SearchOptions, Failure> {
    Ok(SearchOptions {
        strategy,
        node_budget: node_budget()?,
        threads: ctx.threads,
    })
}

fn strategy_name(s: StrategyChoice) -> &'static str {
    match s {
        StrategyChoice::Auto => "auto",
        StrategyChoice::Exhaustive => "exhaustive",
        StrategyChoice::Galois => "galois",
        StrategyChoice::Antichain => "antichain",
    }
}

fn path_value(p: &Path) -> Value {
    json!(p.display().to_string())
}

/// Runs one subcommand and returns its exit code.
pub fn run(command: Command, ctx: &Context) -> u8 {
    let start = Instant::now();
    let mut params = Params::new();
    let (name, outcome) = dispatch(command, ctx, &mut params);
    let (code, results) = match outcome {
        Ok(results) => (EXIT_OK, results),
        Err(Failure::Verification { msg, results }) => {
            eprintln!("verification failed: {msg}");
            (EXIT_VERIFICATION, results)
        }
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_USAGE;
        }
        Err(Failure::Budget(msg)) => {
            eprintln!("error: {msg}");
            return EXIT_BUDGET;
        }
    };
    let report = RunReport {
        command: name.to_string(),
        parameters: params,
        results,
        wall_time_ms: start.elapsed().as_millis() as u64,
        version: env!("CARGO_PKG_VERSION").to_string(),
    };
    if let Err(e) = report.emit(ctx.out.as_deref()) {
        eprintln!("error: cannot write report: {e}");
        return EXIT_USAGE;
    }
    code
}

fn dispatch(command: Command, ctx: &Context, params: &mut Params) -> (&'static str, Outcome) {
    match command {
        Command::VerifyBounded { m, n, r, s, strategy } => {
            params.insert("m".into(), json!(m));
            params.insert("n".into(), json!(n));
            params.insert("r".into(), json!(r));
            params.insert("s".into(), json!(s));
            params.insert("strategy".into(), json!(strategy_name(strategy)));
            ("verify-bounded", verify_bounded(ctx, m, n, r, s, strategy))
        }
        Command::VerifyHereditary { n, all_pairs, strategy } => {
            params.insert("n".into(), json!(n));
            params.insert("all_pairs".into(), json!(all_pairs));
            params.insert("strategy".into(), json!(strategy_name(strategy)));
            ("verify-hereditary", verify_hereditary(ctx, n, all_pairs, strategy))
        }
        Command::VerifyK { grounds, n_list, r_list } => {
            if !grounds.is_empty() {
                params.insert("grounds".into(), grounds.iter().map(|p| path_value(p)).collect());
            }
            if !n_list.is_empty() {
                params.insert("n_list".into(), json!(n_list));
            }
            if !r_list.is_empty() {
                params.insert("r_list".into(), json!(r_list));
            }
            ("verify-k", verify_k(ctx, &grounds, &n_list, &r_list))
        }
        Command::Compress { input, pair_with, write_family } => {
            params.insert("in".into(), path_value(&input));
            if let Some(p) = &pair_with {
                params.insert("pair_with".into(), path_value(p));
            }
            if let Some(p) = &write_family {
                params.insert("write_family".into(), path_value(p));
            }
            ("compress", compress(&input, pair_with.as_deref(), write_family.as_deref()))
        }
        Command::Prooflab {
            in_a,
            in_b,
            in_g,
            in_h,
            compress,
            random,
            n_min,
            n_max,
        } => {
            params.insert("compress".into(), json!(compress));
            let outcome = match (random, in_a, in_b) {
                (Some(trials), _, _) => {
                    params.insert("random".into(), json!(trials));
                    params.insert("seed".into(), json!(ctx.seed));
                    params.insert("n_min".into(), json!(n_min));
                    params.insert("n_max".into(), json!(n_max));
                    prooflab_random(ctx.seed, trials, n_min, n_max)
                }
                (None, Some(a), Some(b)) => {
                    params.insert("in_a".into(), path_value(&a));
                    params.insert("in_b".into(), path_value(&b));
                    if let (Some(g), Some(h)) = (&in_g, &in_h) {
                        params.insert("in_g".into(), path_value(g));
                        params.insert("in_h".into(), path_value(h));
                    }
                    let grounds = in_g.zip(in_h);
                    prooflab_files(&a, &b, grounds.as_ref(), compress)
                }
                _ => Err(Failure::Usage("prooflab needs --in-a and --in-b, or --random".into())),
            };
            ("prooflab", outcome)
        }
        Command::Lemma2 { n } => {
            params.insert("n".into(), json!(n));
            ("lemma2", lemma2(n))
        }
        Command::Search { in_a, in_b, strategy } => {
            params.insert("in_a".into(), path_value(&in_a));
            params.insert("in_b".into(), path_value(&in_b));
            params.insert("strategy".into(), json!(strategy_name(strategy)));
            ("search", search(ctx, &in_a, &in_b, strategy))
        }
    }
}

fn verify_bounded(ctx: &Context, m: u32, n: u32, r: u32, s: u32, strategy: StrategyChoice) -> Outcome {
    let opts = search_options(ctx, strategy)?;
    let res = verify_theorem1(m, n, r, s, &opts)?;
    Ok(to_value(&res))
}

fn verify_hereditary(ctx: &Context, n: u32, all_pairs: bool, strategy: StrategyChoice) -> Outcome {
    let opts = search_options(ctx, strategy)?;
    let catalog = enumerate_downsets(n, true)?.families;
    let pairs: Vec<(usize, usize)> = if all_pairs {
        (0..catalog.len())
            .flat_map(|i| (0..catalog.len()).map(move |j| (i, j)))
            .collect()
    } else {
        (0..catalog.len()).map(|i| (i, i)).collect()
    };
    let mut rows = Vec::with_capacity(pairs.len());
    let mut violations = Vec::new();
    let mut nodes = 0u64;
    for (i, j) in pairs {
        match verify_theorem4(&catalog[i], &catalog[j], &opts) {
            Ok(res) => {
                nodes += res.nodes_explored;
                rows.push(json!({ "g": i, "h": j, "max_product": res.max_product, "bound": res.bound }));
            }
            Err(e) if e.is_verification_failure() => {
                violations.push(json!({ "g": i, "h": j, "error": e.to_string() }));
            }
            Err(e) => return Err(e.into()),
        }
    }
    let results = json!({
        "n": n,
        "families": to_value(&catalog),
        "pairs_checked": rows.len() + violations.len(),
        "violations": violations.len(),
        "nodes_explored": nodes,
        "pairs": rows,
        "failures": violations,
    });
    if violations.is_empty() {
        Ok(results)
    } else {
        Err(Failure::verification(
            format!("{} ground pairs miss the star bound", violations.len()),
            results,
        ))
    }
}

fn verify_k(ctx: &Context, grounds: &[PathBuf], n_list: &[u32], r_list: &[u32]) -> Outcome {
    let opts = search_options(ctx, StrategyChoice::Auto)?;
    let res = if !grounds.is_empty() {
        let fams = grounds
            .iter()
            .map(read_family_file)
            .collect::<Result<Vec<SetFamily>, _>>()?;
        verify_theorem5(&fams, &opts)?
    } else if n_list.is_empty() {
        return Err(Failure::Usage("verify-k needs --grounds or --n-list".into()));
    } else if r_list.is_empty() {
        verify_corollary3(n_list, &opts)?
    } else if r_list.len() != n_list.len() {
        return Err(Failure::Usage(format!(
            "--r-list has {} entries but --n-list has {}",
            r_list.len(),
            n_list.len()
        )));
    } else {
        let pairs: Vec<(u32, u32)> = n_list.iter().copied().zip(r_list.iter().copied()).collect();
        verify_theorem2(&pairs, &opts)?
    };
    Ok(to_value(&res))
}

fn compress(input: &Path, pair_with: Option<&Path>, write_family: Option<&Path>) -> Outcome {
    let a = read_family_file(input)?;
    match pair_with {
        None => {
            let (out, trace) = compress_to_fixed_point(&a);
            if let Some(path) = write_family {
                std::fs::write(path, format_family(&out))
                    .map_err(|e| Failure::Usage(format!("cannot write {}: {e}", path.display())))?;
            }
            Ok(json!({
                "output": to_value(&out),
                "is_compressed": is_compressed(&out),
                "steps": trace.steps.len(),
                "potentials_strictly_decrease": trace.potentials_strictly_decrease(),
                "trace": to_value(&trace),
            }))
        }
        Some(path) => {
            let b = read_family_file(path)?;
            let (ca, cb, trace) = compress_pair_to_fixed_point(&a, &b)?;
            Ok(json!({
                "output_a": to_value(&ca),
                "output_b": to_value(&cb),
                "is_compressed": is_compressed(&ca) && is_compressed(&cb),
                "steps": trace.steps.len(),
                "potentials_strictly_decrease": trace.potentials_strictly_decrease(),
                "trace": to_value(&trace),
            }))
        }
    }
}

fn prooflab_files(a: &Path, b: &Path, grounds: Option<&(PathBuf, PathBuf)>, compress: bool) -> Outcome {
    let mut fa = read_family_file(a)?;
    let mut fb = read_family_file(b)?;
    if compress {
        let (ca, cb, _) = compress_pair_to_fixed_point(&fa, &fb)?;
        fa = ca;
        fb = cb;
    }
    let ground_fams = match grounds {
        Some((g, h)) => Some((read_family_file(g)?, read_family_file(h)?)),
        None => None,
    };
    let rep = replay(&fa, &fb, ground_fams.as_ref().map(|(g, h)| (g, h)))?;
    let results = json!({
        "a": to_value(&fa),
        "b": to_value(&fb),
        "all_hold": rep.all_hold(),
        "replay": to_value(&rep),
    });
    if rep.all_hold() {
        Ok(results)
    } else {
        Err(Failure::verification("replay checks failed", results))
    }
}

fn prooflab_random(seed: u64, trials: usize, n_min: u32, n_max: u32) -> Outcome {
    if n_min < 2 || n_min > n_max || n_max > RANDOM_PAIR_MAX_N {
        return Err(Failure::Usage(format!(
            "random pairs need 2 <= n-min <= n-max <= {RANDOM_PAIR_MAX_N}, got {n_min}..{n_max}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut with_conflicts = 0usize;
    let mut failures = Vec::new();
    for trial in 0..trials {
        let n = rng.gen_range(n_min..=n_max);
        let (a, b) = random_compressed_cross_pair(&mut rng, n)?;
        match replay(&a, &b, None) {
            Ok(rep) if rep.all_hold() => {
                if rep.ledger.is_some() {
                    with_conflicts += 1;
                }
            }
            Ok(_) => failures.push(json!({ "trial": trial, "a": to_value(&a), "b": to_value(&b) })),
            Err(e @ (ProofError::UniquenessViolation(_) | ProofError::IdentityViolation { .. })) => {
                failures.push(json!({
                    "trial": trial,
                    "a": to_value(&a),
                    "b": to_value(&b),
                    "error": e.to_string(),
                }))
            }
            Err(e) => return Err(e.into()),
        }
    }
    let results = json!({
        "trials": trials,
        "with_conflicts": with_conflicts,
        "violations": failures.len(),
        "failures": failures,
    });
    if failures.is_empty() {
        Ok(results)
    } else {
        Err(Failure::verification(
            format!("{} random pairs failed the replay", failures.len()),
            results,
        ))
    }
}

fn lemma2(n: u32) -> Outcome {
    let rep = lemma2_sweep(n)?;
    let results = to_value(&rep);
    if rep.violations == 0 && rep.injection_failures == 0 {
        Ok(results)
    } else {
        Err(Failure::verification(
            format!(
                "{} inequality violations, {} injection failures",
                rep.violations, rep.injection_failures
            ),
            results,
        ))
    }
}

fn search(ctx: &Context, in_a: &Path, in_b: &Path, strategy: StrategyChoice) -> Outcome {
    let opts = search_options(ctx, strategy)?;
    let a = read_family_file(in_a)?;
    let b = read_family_file(in_b)?;
    let res = match (GroundSpec::explicit(a.clone()), GroundSpec::explicit(b.clone())) {
        (Ok(ga), Ok(gb)) => max_product_pair(&ga, &gb, &opts)?,
        _ => max_product_in(&a, &b, &opts)?,
    };
    if res.bound.is_some_and(|bound| res.max_product > bound) {
        return Err(Failure::verification(
            "maximum exceeds the star bound",
            to_value(&res),
        ));
    }
    Ok(to_value(&res))
}
