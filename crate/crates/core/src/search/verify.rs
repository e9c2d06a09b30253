use super::{max_product_k, max_product_pair, KSearchResult, SearchError, SearchOptions, SearchResult};
use crate::family::{bounded_family, star_size_bound, star_size_of};
use crate::{FamilyError, GroundSpec, SetFamily};

fn compare(observed: u64, bound: u64) -> Result<(), SearchError> {
    if observed > bound {
        Err(SearchError::BoundViolation { observed, bound })
    } else if observed < bound {
        Err(SearchError::BoundNotAttained { observed, bound })
    } else {
        Ok(())
    }
}

fn finish_pair(mut res: SearchResult, bound: u64) -> Result<SearchResult, SearchError> {
    res.bound = Some(bound);
    res.equality = res.max_product == bound;
    compare(res.max_product, bound)?;
    Ok(res)
}

fn finish_k(mut res: KSearchResult, bound: u64) -> Result<KSearchResult, SearchError> {
    res.bound = Some(bound);
    res.equality = res.max_product == bound;
    compare(res.max_product, bound)?;
    Ok(res)
}

fn hereditary_compressed(g: &SetFamily, label: &str) -> Result<GroundSpec, SearchError> {
    GroundSpec::explicit(g.clone()).map_err(|e| match e {
        FamilyError::NotHereditary | FamilyError::NotCompressed => {
            SearchError::PreconditionViolation(format!("{label}: {e}"))
        }
        other => SearchError::Family(other),
    })
}

fn check_rank(n: u32, r: u32, name: &str) -> Result<(), SearchError> {
    if n == 0 || r == 0 || r > n {
        return Err(SearchError::ParameterOutOfRange(format!(
            "{name} = {r} must lie in [1, {n}]"
        )));
    }
    Ok(())
}

/// Exact maximum over `([m] choose ≤r) × ([n] choose ≤s)`, which must equal
/// the product of the two star sizes.
pub fn verify_theorem1(
    m: u32,
    n: u32,
    r: u32,
    s: u32,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    check_rank(m, r, "r")?;
    check_rank(n, s, "s")?;
    let ga = GroundSpec::bounded(m, r)?;
    let gb = GroundSpec::bounded(n, s)?;
    let res = max_product_pair(&ga, &gb, opts)?;
    finish_pair(res, star_size_bound(m, r) * star_size_bound(n, s))
}

/// Exact maximum over two hereditary compressed grounds against `|G(1)||H(1)|`.
pub fn verify_theorem4(
    g: &SetFamily,
    h: &SetFamily,
    opts: &SearchOptions,
) -> Result<SearchResult, SearchError> {
    let ga = hereditary_compressed(g, "g")?;
    let gb = hereditary_compressed(h, "h")?;
    let res = max_product_pair(&ga, &gb, opts)?;
    finish_pair(res, ga.star_size() * gb.star_size())
}

/// k-fold maximum over power sets `2^[n_i]` against `2^(Σn_i - k)`.
pub fn verify_corollary3(n_list: &[u32], opts: &SearchOptions) -> Result<KSearchResult, SearchError> {
    if n_list.len() < 2 {
        return Err(SearchError::ParameterOutOfRange(format!(
            "need at least two ground sizes, got {}",
            n_list.len()
        )));
    }
    if let Some(&bad) = n_list.iter().find(|&&n| n == 0) {
        return Err(SearchError::ParameterOutOfRange(format!(
            "ground size {bad} must be at least 1"
        )));
    }
    let grounds = n_list
        .iter()
        .map(|&n| SetFamily::power_set(n))
        .collect::<Result<Vec<_>, _>>()?;
    let res = max_product_k(&grounds, opts)?;
    let exponent: u32 = n_list.iter().sum::<u32>() - n_list.len() as u32;
    finish_k(res, 1u64 << exponent)
}

/// k-fold maximum over `([n_i] choose ≤r_i)` against the product of star sizes.
pub fn verify_theorem2(params: &[(u32, u32)], opts: &SearchOptions) -> Result<KSearchResult, SearchError> {
    if params.len() < 2 {
        return Err(SearchError::ParameterOutOfRange(format!(
            "need at least two (n, r) pairs, got {}",
            params.len()
        )));
    }
    let mut grounds = Vec::with_capacity(params.len());
    let mut bound = 1u64;
    for &(n, r) in params {
        check_rank(n, r, "r")?;
        grounds.push(bounded_family(n, r)?);
        bound *= star_size_bound(n, r);
    }
    let res = max_product_k(&grounds, opts)?;
    finish_k(res, bound)
}

/// k-fold maximum over hereditary compressed grounds against `Π|H_i(1)|`.
pub fn verify_theorem5(grounds: &[SetFamily], opts: &SearchOptions) -> Result<KSearchResult, SearchError> {
    if grounds.len() < 2 {
        return Err(SearchError::ParameterOutOfRange(format!(
            "need at least two grounds, got {}",
            grounds.len()
        )));
    }
    for (i, g) in grounds.iter().enumerate() {
        hereditary_compressed(g, &format!("ground {}", i + 1))?;
    }
    let bound = grounds.iter().map(star_size_of).product();
    let res = max_product_k(grounds, opts)?;
    finish_k(res, bound)
}
