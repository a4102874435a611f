//! Exact descent statistics of uniform permutations, by brute force.

use itertools::Itertools;
use num_bigint::BigInt;

use crate::error::{Error, Result};
use crate::measure::Q;

/// Largest `n` accepted by the factorial-time enumerations.
pub const MAX_ENUMERATION: usize = 9;

pub fn count_descents(perm: &[usize]) -> usize {
    perm.windows(2).filter(|w| w[0] > w[1]).count()
}

fn check_size(n: usize) -> Result<()> {
    if n == 0 || n > MAX_ENUMERATION {
        return Err(Error::OutOfRange(format!("permutation size {n} not in 1..={MAX_ENUMERATION}")));
    }
    Ok(())
}

fn to_pmf(counts: Vec<u64>) -> Vec<Q> {
    let total: u64 = counts.iter().sum();
    counts
        .into_iter()
        .map(|c| Q::new(BigInt::from(c), BigInt::from(total)))
        .collect()
}

/// Law of `|Desc(sigma)|` for uniform `sigma` in `S_n`, indexed by descent count.
pub fn enumerate_descents(n: usize) -> Result<Vec<Q>> {
    check_size(n)?;
    let mut counts = vec![0u64; n];
    for perm in (1..=n).permutations(n) {
        counts[count_descents(&perm)] += 1;
    }
    Ok(to_pmf(counts))
}

/// Same law, generated by the insertion algorithm: start from the identity on
/// `{1}` and compose `sigma_{m+1} = sigma_m o (m+1 m ... U)` over every choice
/// of `U in {1, ..., m+1}`.
pub fn descents_by_insertion(n: usize) -> Result<Vec<Q>> {
    check_size(n)?;
    let mut counts = vec![0u64; n];
    let mut stack: Vec<Vec<usize>> = vec![vec![1]];
    while let Some(sigma) = stack.pop() {
        let m = sigma.len();
        if m == n {
            counts[count_descents(&sigma)] += 1;
            continue;
        }
        for u in 1..=m + 1 {
            stack.push(compose_with_cycle(&sigma, u));
        }
    }
    Ok(to_pmf(counts))
}

/// `sigma o c` where `c` is the cycle `m+1 -> m -> ... -> u -> m+1` and
/// `sigma` is extended by `sigma(m+1) = m+1`.
fn compose_with_cycle(sigma: &[usize], u: usize) -> Vec<usize> {
    let m = sigma.len();
    let extended = |i: usize| if i == m + 1 { m + 1 } else { sigma[i - 1] };
    (1..=m + 1)
        .map(|i| {
            let c = if i < u {
                i
            } else if i == u {
                m + 1
            } else {
                i - 1
            };
            extended(c)
        })
        .collect()
}
