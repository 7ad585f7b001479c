//! Closed-form periods of linear cycles, fixed pairs of linear cycles, and
//! complete-intersection cycles on the Fermat variety.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::One;
use serde::{Deserialize, Serialize};

use crate::combinatorics::{in_check_set, ExponentIndex, FermatParams, LinearCycle};
use crate::cyclotomic::CycElt;
use crate::Error;

/// A period split into its cyclotomic-integer part (carrying sign(b) and
/// (-1)^{n/2}) and the global positive scalar 1/(d^{n/2+1}·(n/2)!). The full
/// period is `scalar * normalized`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PeriodValue {
    pub normalized: CycElt,
    pub scalar: BigRational,
}

/// The scalar 1/(d^{n/2+1}·(n/2)!) shared by all linear-cycle periods of a
/// given (n, d).
pub fn global_scalar(params: FermatParams) -> BigRational {
    let mut den = BigInt::one();
    for _ in 0..=params.m2() {
        den *= params.d;
    }
    for k in 2..=params.m2() {
        den *= k;
    }
    BigRational::new(BigInt::one(), den)
}

/// Period of ω_i over the linear cycle P^{n/2}_{a,b}:
/// zero unless i_{b_{2e-2}} + i_{b_{2e-1}} = d-2 for every e, and otherwise
/// sign(b)·(-1)^{n/2}·ζ_{2d}^{Σ_e (i_{b_{2e}}+1)(1+2a_{2e+1})} times the
/// global scalar. The total degree of i must be (n/2+1)d - n - 2.
pub fn linear_cycle_period(
    params: FermatParams,
    cycle: &LinearCycle,
    i: &ExponentIndex,
) -> Result<PeriodValue, Error> {
    if i.len() != params.vars() {
        return Err(Error::BadParams(format!(
            "exponent index has length {}, expected {}",
            i.len(),
            params.vars()
        )));
    }
    if i.total() != params.period_degree() {
        return Err(Error::BadParams(format!(
            "total degree {} differs from (n/2+1)d-n-2 = {}",
            i.total(),
            params.period_degree()
        )));
    }
    if cycle.b.len() != params.vars() || cycle.a.len() != params.m2() as usize + 1 {
        return Err(Error::BadParams("cycle shape does not match parameters".into()));
    }
    Ok(PeriodValue {
        normalized: linear_cycle_normalized(params, cycle, i),
        scalar: global_scalar(params),
    })
}

/// The cyclotomic-integer part alone; callers guarantee the total degree.
pub(crate) fn linear_cycle_normalized(
    params: FermatParams,
    cycle: &LinearCycle,
    i: &ExponentIndex,
) -> CycElt {
    let order = params.zeta_order();
    let target = params.d - 2;
    let pairs = params.m2() as usize + 1;
    for e in 0..pairs {
        let lhs = i.0[cycle.b[2 * e] as usize] + i.0[cycle.b[2 * e + 1] as usize];
        if lhs != target {
            return CycElt::zero(order);
        }
    }
    let mut exp: i64 = 0;
    for e in 0..pairs {
        exp += (i.0[cycle.b[2 * e] as usize] as i64 + 1) * (1 + 2 * cycle.a[e] as i64);
    }
    let mut val = CycElt::root_power(order, exp);
    let mut sign = cycle.sign as i64;
    if params.m2() % 2 == 1 {
        sign = -sign;
    }
    if sign < 0 {
        val = val.neg();
    }
    val
}

/// The fixed pair of cycles behind the two-cycle period matrix: both use the
/// identity permutation; the first has a = 0 and the second
/// a = (0^{m+1}, 1, ..., 1), so they intersect in P^m (m = -1: disjoint).
pub fn pair_cycles(params: FermatParams, m: i64) -> Result<(LinearCycle, LinearCycle), Error> {
    if m < -1 || m > params.m2() as i64 {
        return Err(Error::BadParams(format!(
            "m = {m} out of range [-1, {}]",
            params.m2()
        )));
    }
    let identity: Vec<u32> = (0..params.vars() as u32).collect();
    let pairs = params.m2() as usize + 1;
    let first = LinearCycle::new(vec![0; pairs], identity.clone())?;
    let mut a = vec![0u32; pairs];
    for v in a.iter_mut().skip((m + 1) as usize) {
        *v = 1;
    }
    let second = LinearCycle::new(a, identity)?;
    Ok((first, second))
}

/// Sum of the two linear-cycle periods of [`pair_cycles`]. Indices of wrong
/// total degree or outside the exponent box give zero by convention, which is
/// what the matrix builder relies on when forming i + j sums.
pub fn pair_period(params: FermatParams, m: i64, i: &ExponentIndex) -> Result<PeriodValue, Error> {
    let (first, second) = pair_cycles(params, m)?;
    let scalar = global_scalar(params);
    if i.len() != params.vars() || i.total() != params.period_degree() {
        return Ok(PeriodValue {
            normalized: CycElt::zero(params.zeta_order()),
            scalar,
        });
    }
    let normalized = linear_cycle_normalized(params, &first, i)
        .add(&linear_cycle_normalized(params, &second, i));
    Ok(PeriodValue { normalized, scalar })
}

/// Degrees (d_1, ..., d_{n/2+1}) of a complete-intersection cycle together
/// with root sets B_k ⊂ {ζ : ζ^d = -1}, encoded by the odd exponents 1+2a of
/// ζ_{2d}.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeVector {
    pub degrees: Vec<u32>,
    pub root_sets: Vec<Vec<u32>>,
}

impl DegreeVector {
    /// Canonical choice B_k = {ζ_{2d}^{1+2a} : a = 0, ..., d_k - 1}, mirroring
    /// the factorized cycle x_{2k} - ζ x_{2k+1} products.
    pub fn canonical(params: FermatParams, degrees: Vec<u32>) -> Result<Self, Error> {
        if degrees.len() != params.m2() as usize + 1 {
            return Err(Error::BadParams(format!(
                "expected {} degrees, got {}",
                params.m2() + 1,
                degrees.len()
            )));
        }
        if degrees.iter().any(|&k| k < 1 || k >= params.d) {
            return Err(Error::BadParams(format!(
                "degrees {degrees:?} must lie in [1, {}]",
                params.d - 1
            )));
        }
        let root_sets = degrees
            .iter()
            .map(|&k| (0..k).map(|a| 1 + 2 * a).collect())
            .collect();
        Ok(DegreeVector { degrees, root_sets })
    }

    /// Explicit root sets; cardinalities must match the degrees and every
    /// exponent must be odd and within [1, 2d-1].
    pub fn with_root_sets(
        params: FermatParams,
        degrees: Vec<u32>,
        root_sets: Vec<Vec<u32>>,
    ) -> Result<Self, Error> {
        let base = Self::canonical(params, degrees)?;
        if root_sets.len() != base.degrees.len() {
            return Err(Error::BadParams("one root set per degree required".into()));
        }
        for (k, set) in root_sets.iter().enumerate() {
            if set.len() != base.degrees[k] as usize {
                return Err(Error::BadParams(format!(
                    "root set {k} has {} elements, degree says {}",
                    set.len(),
                    base.degrees[k]
                )));
            }
            let mut seen = std::collections::HashSet::new();
            for &e in set {
                if e % 2 == 0 || e >= params.zeta_order() || !seen.insert(e) {
                    return Err(Error::BadParams(format!(
                        "root exponent {e} is not a distinct odd exponent below {}",
                        params.zeta_order()
                    )));
                }
            }
        }
        Ok(DegreeVector {
            degrees: base.degrees,
            root_sets,
        })
    }
}

/// Complete-intersection period: zero off the check set Ǐ, and otherwise the
/// product over k of Σ_{ζ ∈ B_{k+1}} ζ^{i_{2k}+1}. The value agrees with the
/// true integral up to an i-independent constant, which rank statements never
/// see.
pub fn ci_period(params: FermatParams, dv: &DegreeVector, i: &ExponentIndex) -> CycElt {
    let order = params.zeta_order();
    if !in_check_set(params, i) {
        return CycElt::zero(order);
    }
    let mut acc = CycElt::one(order);
    for (k, set) in dv.root_sets.iter().enumerate() {
        let power = i.0[2 * k] as i64 + 1;
        let mut factor = CycElt::zero(order);
        for &e in set {
            factor = factor.add(&CycElt::root_power(order, e as i64 * power));
        }
        if factor.is_zero() {
            return CycElt::zero(order);
        }
        acc = acc.mul(&factor);
    }
    acc
}
