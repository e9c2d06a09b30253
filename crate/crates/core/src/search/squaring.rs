use num_bigint::BigUint;

use super::SearchError;

/// `x mod* y`: the residue of `x` modulo `y` taken in `1..=y` instead of `0..y`.
pub fn mod_star(x: u64, y: u64) -> u64 {
    assert!(y > 0, "mod* needs a positive modulus");
    (x + y - 1) % y + 1
}

/// Pairs `((2t-1) mod* k, 2t mod* k)` for `t = 1..=k` (1-based indices).
///
/// The `2k` entries list every index exactly twice and no pair repeats an
/// index, so multiplying the `k` pairwise bounds squares both products.
pub fn squaring_pairing(k: usize) -> Vec<(usize, usize)> {
    let k64 = k as u64;
    (1..=k64)
        .map(|t| {
            (
                mod_star(2 * t - 1, k64) as usize,
                mod_star(2 * t, k64) as usize,
            )
        })
        .collect()
}

/// From `a_i a_j ≤ s_i s_j` for all `i ≠ j`, derives `Π a_i ≤ Π s_i` by
/// multiplying the bounds along [`squaring_pairing`].
pub fn pairwise_to_k_product(a_sizes: &[u64], s_sizes: &[u64]) -> Result<bool, SearchError> {
    let k = a_sizes.len();
    if k < 2 || s_sizes.len() != k {
        return Err(SearchError::ParameterOutOfRange(format!(
            "need two equal-length vectors of length at least 2, got {} and {}",
            k,
            s_sizes.len()
        )));
    }
    for i in 0..k {
        for j in 0..k {
            if i != j
                && u128::from(a_sizes[i]) * u128::from(a_sizes[j])
                    > u128::from(s_sizes[i]) * u128::from(s_sizes[j])
            {
                return Err(SearchError::PreconditionViolation(format!(
                    "a_{}·a_{} = {} exceeds s_{}·s_{} = {}",
                    i + 1,
                    j + 1,
                    u128::from(a_sizes[i]) * u128::from(a_sizes[j]),
                    i + 1,
                    j + 1,
                    u128::from(s_sizes[i]) * u128::from(s_sizes[j]),
                )));
            }
        }
    }

    let pairs = squaring_pairing(k);
    let mut lhs = BigUint::from(1u32);
    let mut rhs = BigUint::from(1u32);
    let mut uses = vec![0u32; k];
    for &(p, q) in &pairs {
        debug_assert_ne!(p, q);
        uses[p - 1] += 1;
        uses[q - 1] += 1;
        lhs *= BigUint::from(a_sizes[p - 1]) * BigUint::from(a_sizes[q - 1]);
        rhs *= BigUint::from(s_sizes[p - 1]) * BigUint::from(s_sizes[q - 1]);
    }
    // the multiplied pairwise bounds
    if lhs > rhs || uses.iter().any(|&u| u != 2) {
        return Ok(false);
    }
    let prod_a: BigUint = a_sizes.iter().map(|&x| BigUint::from(x)).product();
    let prod_s: BigUint = s_sizes.iter().map(|&x| BigUint::from(x)).product();
    if &prod_a * &prod_a != lhs || &prod_s * &prod_s != rhs {
        return Ok(false);
    }
    // squares of non-negative integers compare like their roots
    Ok(prod_a <= prod_s)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn mod_star_values() {
        assert_eq!(mod_star(3, 3), 3);
        assert_eq!(mod_star(4, 3), 1);
        assert_eq!(mod_star(6, 3), 3);
        assert_eq!(mod_star(1, 1), 1);
        assert_eq!(mod_star(7, 5), 2);
    }

    #[test]
    fn pairing_covers_each_index_twice() {
        assert_eq!(squaring_pairing(2), vec![(1, 2), (1, 2)]);
        assert_eq!(squaring_pairing(3), vec![(1, 2), (3, 1), (2, 3)]);
        for k in 2..=12 {
            let mut uses = vec![0; k];
            for (p, q) in squaring_pairing(k) {
                assert_ne!(p, q);
                uses[p - 1] += 1;
                uses[q - 1] += 1;
            }
            assert!(uses.iter().all(|&u| u == 2));
        }
    }

    #[test]
    fn examples() {
        assert!(pairwise_to_k_product(&[2, 2, 2], &[2, 2, 2]).unwrap());
        assert!(pairwise_to_k_product(&[1, 4], &[2, 2]).unwrap());
        assert!(matches!(
            pairwise_to_k_product(&[3, 3], &[2, 2]),
            Err(SearchError::PreconditionViolation(_))
        ));
        assert!(matches!(
            pairwise_to_k_product(&[1], &[1]),
            Err(SearchError::ParameterOutOfRange(_))
        ));
        assert!(pairwise_to_k_product(&[2, 9, 9], &[1, 1, 81]).is_err());
        assert!(pairwise_to_k_product(&[0, 9, 9], &[1, 1, 81]).unwrap());
        assert!(pairwise_to_k_product(&[0, 5, 5], &[5, 5, 5]).unwrap());
    }

    #[test]
    fn large_values_do_not_overflow() {
        let big = u64::MAX;
        assert!(pairwise_to_k_product(&[big; 6], &[big; 6]).unwrap());
    }
}
