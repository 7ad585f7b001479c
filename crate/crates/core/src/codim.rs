//! The combinatorial codimension numbers C_a and the expected-rank formulas
//! built from them.

use crate::combinatorics::binomial;
use crate::Error;

/// C_a for a multiset a = (a_1, ..., a_s) of positive integers:
///
///   C(n+1+d, n+1) - Σ_{k=1}^{s} (-1)^{k-1} Σ_{|S|=k, Σ_{i∈S} a_i <= d}
///       C(n+1+d - Σ_{i∈S} a_i, n+1)
///
/// where S runs over index subsets of the multiset, so repeated values
/// contribute with multiplicity. This is the codimension, in the space of all
/// degree-d hypersurfaces, of the locus of those containing the cycle cut by
/// hypersurfaces of the given degrees.
pub fn codim(n: u32, d: u32, a: &[u32]) -> u64 {
    assert!(!a.is_empty() && a.iter().all(|&v| v >= 1), "multiset entries must be >= 1");
    let top = n as u64 + 1;
    let mut acc: i128 = binomial(top + d as u64, top) as i128;
    // index subsets via bitmask; s <= n+2 at the call sites, so this is cheap
    assert!(a.len() < 64);
    for mask in 1u64..(1u64 << a.len()) {
        let mut sum: u64 = 0;
        for (idx, &v) in a.iter().enumerate() {
            if mask >> idx & 1 == 1 {
                sum += v as u64;
            }
        }
        if sum > d as u64 {
            continue;
        }
        let k = mask.count_ones();
        let term = binomial(top + d as u64 - sum, top) as i128;
        // outer sign: subtracting (-1)^{k-1} * term
        if k % 2 == 1 {
            acc -= term;
        } else {
            acc += term;
        }
    }
    u64::try_from(acc).expect("codimension is non-negative")
}

/// Multiset 1^{n/2+1}, (d-1)^{n/2+1} and its m-dependent companion, combined
/// as 2 C_{1^{n/2+1},(d-1)^{n/2+1}} - C_{1^{n-m+1},(d-1)^{m+1}}. This is the
/// expected rank of the period matrix of a pair of linear cycles meeting in
/// P^m (m = -1 meaning disjoint).
pub fn expected_rank_linear_pair(n: u32, d: u32, m: i64) -> Result<u64, Error> {
    if n < 2 || n % 2 != 0 || d < 2 {
        return Err(Error::BadParams(format!("invalid (n, d) = ({n}, {d})")));
    }
    if m < -1 || m > n as i64 / 2 {
        return Err(Error::BadParams(format!("m = {m} out of range [-1, {}]", n / 2)));
    }
    let half = n / 2 + 1;
    let mut both = vec![1u32; half as usize];
    both.extend(std::iter::repeat(d - 1).take(half as usize));
    let first = 2 * codim(n, d, &both);

    let mut joint = vec![1u32; (n as i64 - m + 1) as usize];
    joint.extend(std::iter::repeat(d - 1).take((m + 1) as usize));
    Ok(first - codim(n, d, &joint))
}

/// Expected rank C_{d_1,...,d_{n/2+1},d-d_1,...,d-d_{n/2+1}} of the period
/// matrix of a complete-intersection cycle of the given degrees.
pub fn expected_rank_ci(n: u32, d: u32, degrees: &[u32]) -> Result<u64, Error> {
    if degrees.len() != (n / 2 + 1) as usize {
        return Err(Error::BadParams(format!(
            "expected {} degrees, got {}",
            n / 2 + 1,
            degrees.len()
        )));
    }
    if degrees.iter().any(|&k| k < 1 || k >= d) {
        return Err(Error::BadParams(format!("degrees {degrees:?} must lie in [1, {}]", d - 1)));
    }
    let mut multiset = degrees.to_vec();
    multiset.extend(degrees.iter().map(|&k| d - k));
    Ok(codim(n, d, &multiset))
}

/// Closed form C(n/2+d, d) - (n/2+1)^2 for the all-ones case. Matches the
/// codimension number C_{1^{n/2+1},(d-1)^{n/2+1}} whenever d >= 2 + 4/n.
pub fn expected_rank_ci_all_ones(n: u32, d: u32) -> u64 {
    let half = n as u64 / 2;
    let v = binomial(half + d as u64, d as u64) as i128 - ((half + 1) * (half + 1)) as i128;
    u64::try_from(v).expect("closed form is non-negative for admissible degrees")
}

/// Smallest degree the complete-intersection statements admit: d >= 2 + 4/n,
/// rounded up.
pub fn min_ci_degree(n: u32) -> u32 {
    (2 + (4 + n - 1) / n).max(2)
}
