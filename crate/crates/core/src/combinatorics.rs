//! Exponent index sets, linear cycles on the Fermat variety, and their
//! counting formulas.

use serde::{Deserialize, Serialize};

use crate::Error;

/// Parameters of the Fermat hypersurface x_0^d + ... + x_{n+1}^d = 0:
/// even dimension n and degree d.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FermatParams {
    pub n: u32,
    pub d: u32,
}

impl FermatParams {
    pub fn new(n: u32, d: u32) -> Result<Self, Error> {
        if n < 2 || n % 2 != 0 {
            return Err(Error::BadParams(format!("dimension n = {n} must be even and >= 2")));
        }
        if d < 2 {
            return Err(Error::BadParams(format!("degree d = {d} must be >= 2")));
        }
        Ok(FermatParams { n, d })
    }

    /// n/2.
    pub fn m2(&self) -> u32 {
        self.n / 2
    }

    /// Number of homogeneous coordinates, n + 2.
    pub fn vars(&self) -> usize {
        (self.n + 2) as usize
    }

    /// Order 2d of the root of unity all periods live over.
    pub fn zeta_order(&self) -> u32 {
        2 * self.d
    }

    /// Total degree (n/2 + 1)d - n - 2 of indices carrying nonzero periods.
    pub fn period_degree(&self) -> i64 {
        (self.m2() as i64 + 1) * self.d as i64 - self.n as i64 - 2
    }

    /// Total degree (n/2)d - n - 2 of the row index set.
    pub fn row_degree(&self) -> i64 {
        self.m2() as i64 * self.d as i64 - self.n as i64 - 2
    }
}

/// Integer exponent tuple (i_0, ..., i_{n+1}).
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct ExponentIndex(pub Vec<u32>);

impl ExponentIndex {
    pub fn total(&self) -> i64 {
        self.0.iter().map(|&v| v as i64).sum()
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    /// Componentwise sum.
    pub fn plus(&self, other: &ExponentIndex) -> ExponentIndex {
        debug_assert_eq!(self.0.len(), other.0.len());
        ExponentIndex(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }
}

/// All tuples in I_N = { i : 0 <= i_e <= d-2, Σ i_e = N }, in lexicographic
/// order. Degenerate N yields the empty list, so downstream matrix builders
/// naturally produce 0 x k matrices.
pub fn enumerate_index_set(params: FermatParams, total: i64) -> Vec<ExponentIndex> {
    let vars = params.vars();
    let cap = params.d as i64 - 2;
    if total < 0 || total > vars as i64 * cap {
        return Vec::new();
    }
    let mut out = Vec::new();
    let mut cur = vec![0u32; vars];
    fill_lex(&mut out, &mut cur, 0, total, cap);
    out
}

fn fill_lex(out: &mut Vec<ExponentIndex>, cur: &mut Vec<u32>, pos: usize, left: i64, cap: i64) {
    let remaining_slots = cur.len() - pos;
    if remaining_slots == 0 {
        if left == 0 {
            out.push(ExponentIndex(cur.clone()));
        }
        return;
    }
    let lo = (left - (remaining_slots as i64 - 1) * cap).max(0);
    let hi = left.min(cap);
    for v in lo..=hi {
        cur[pos] = v as u32;
        fill_lex(out, cur, pos + 1, left - v, cap);
    }
    cur[pos] = 0;
}

/// Size of I_N without enumeration, by inclusion-exclusion:
/// Σ_k (-1)^k C(n+2, k) C(N - k(d-1) + n+1, n+1).
pub fn index_set_size(params: FermatParams, total: i64) -> u64 {
    let vars = params.vars() as i64;
    if total < 0 {
        return 0;
    }
    let mut acc: i128 = 0;
    for k in 0..=vars {
        let rem = total - k * (params.d as i64 - 1);
        if rem < 0 {
            break;
        }
        let term = binomial(vars as u64, k as u64) as i128
            * binomial((rem + vars - 1) as u64, (vars - 1) as u64) as i128;
        if k % 2 == 0 {
            acc += term;
        } else {
            acc -= term;
        }
    }
    u64::try_from(acc).expect("index set size is non-negative")
}

pub(crate) fn binomial(n: u64, k: u64) -> u128 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for j in 0..k {
        acc = acc * (n - j) as u128 / (j + 1) as u128;
    }
    acc
}

/// True iff `i` lies in the check set Ǐ: total degree (n/2+1)d - n - 2 and
/// every consecutive coordinate pair summing to d - 2.
pub fn in_check_set(params: FermatParams, i: &ExponentIndex) -> bool {
    if i.len() != params.vars() {
        return false;
    }
    let target = params.d - 2;
    (0..params.vars() / 2).all(|l| i.0[2 * l] + i.0[2 * l + 1] == target)
    // pair sums d-2 everywhere force both the box constraint and the total
}

/// A linear cycle P^{n/2}_{a,b}: the subspace cut by
/// x_{b_{2e}} = ζ_{2d}^{1+2a_{e+1}} x_{b_{2e+1}}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LinearCycle {
    /// (a_1, a_3, ..., a_{n+1}), one entry per defining equation, 0 <= a < d.
    pub a: Vec<u32>,
    /// Permutation b of {0, ..., n+1}.
    pub b: Vec<u32>,
    /// Parity of b: +1 for even permutations.
    pub sign: i8,
}

impl LinearCycle {
    pub fn new(a: Vec<u32>, b: Vec<u32>) -> Result<Self, Error> {
        let sign = permutation_sign(&b)?;
        Ok(LinearCycle { a, b, sign })
    }
}

/// Standard permutation parity: +1 for even permutations. Non-bijective
/// input is rejected.
pub fn permutation_sign(b: &[u32]) -> Result<i8, Error> {
    let n = b.len();
    let mut seen = vec![false; n];
    for &v in b {
        if v as usize >= n || seen[v as usize] {
            return Err(Error::BadParams(format!("{b:?} is not a permutation of 0..{n}")));
        }
        seen[v as usize] = true;
    }
    let mut inversions = 0usize;
    for i in 0..n {
        for j in i + 1..n {
            if b[i] > b[j] {
                inversions += 1;
            }
        }
    }
    Ok(if inversions % 2 == 0 { 1 } else { -1 })
}

/// All canonical-form linear cycles: b_0 = 0 and every even slot takes the
/// smallest index unused so far. The list has exactly
/// 1·3···(n-1)(n+1)·d^{n/2+1} entries.
pub fn enumerate_linear_cycles(params: FermatParams) -> Vec<LinearCycle> {
    let vars = params.vars();
    let mut perms = Vec::new();
    let mut cur = Vec::with_capacity(vars);
    let mut used = vec![false; vars];
    fill_perms(&mut perms, &mut cur, &mut used, vars);

    let pairs = params.m2() as usize + 1;
    let mut out = Vec::new();
    let total = (params.d as u64).pow(pairs as u32);
    for b in &perms {
        let sign = permutation_sign(b).expect("enumerator builds valid permutations");
        for code in 0..total {
            let mut a = vec![0u32; pairs];
            let mut rest = code;
            for slot in (0..pairs).rev() {
                a[slot] = (rest % params.d as u64) as u32;
                rest /= params.d as u64;
            }
            out.push(LinearCycle { a, b: b.clone(), sign });
        }
    }
    out
}

fn fill_perms(out: &mut Vec<Vec<u32>>, cur: &mut Vec<u32>, used: &mut [bool], vars: usize) {
    if cur.len() == vars {
        out.push(cur.clone());
        return;
    }
    if cur.len() % 2 == 0 {
        // even slot: forced to the smallest unused index
        let v = used.iter().position(|&u| !u).unwrap();
        used[v] = true;
        cur.push(v as u32);
        fill_perms(out, cur, used, vars);
        cur.pop();
        used[v] = false;
    } else {
        for v in 0..vars {
            if !used[v] {
                used[v] = true;
                cur.push(v as u32);
                fill_perms(out, cur, used, vars);
                cur.pop();
                used[v] = false;
            }
        }
    }
}

/// Closed count 1·3···(n-1)(n+1)·d^{n/2+1}.
pub fn linear_cycle_count(params: FermatParams) -> u128 {
    let mut acc: u128 = 1;
    let mut k = 1u128;
    while k <= params.n as u128 + 1 {
        acc *= k;
        k += 2;
    }
    for _ in 0..=params.m2() {
        acc *= params.d as u128;
    }
    acc
}
