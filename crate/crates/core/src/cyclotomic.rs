//! Exact arithmetic in the ring Z[ζ_{2d}] and the field Q(ζ_{2d}), plus
//! specialization of ζ_{2d} to an element of matching order in a prime field.
//!
//! Elements are stored on the power basis 1, ζ, ..., ζ^{d-1} with the relation
//! ζ^d = -1, i.e. as residues in Z[x]/(x^d + 1). This makes the exponent
//! arithmetic of the period formulas a one-line fold; reduction to the
//! φ(2d)-dimensional field basis happens only inside the rank engine.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::Error;

/// Element of Z[ζ_{2d}], canonically normalized to the length-d window.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct CycElt {
    order: u32,
    coeffs: Vec<BigInt>,
}

impl CycElt {
    /// The additive identity of Z[ζ_{order}].
    pub fn zero(order: u32) -> Self {
        assert!(order >= 2 && order % 2 == 0, "order must be even and >= 2");
        CycElt {
            order,
            coeffs: vec![BigInt::zero(); (order / 2) as usize],
        }
    }

    pub fn one(order: u32) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[0] = BigInt::one();
        e
    }

    /// ζ_{order}^exp in canonical form. The exponent is reduced mod `order`,
    /// then folded into the length-d window with a sign via ζ^{d+k} = -ζ^k.
    pub fn root_power(order: u32, exp: i64) -> Self {
        let mut e = Self::zero(order);
        let m = exp.rem_euclid(order as i64) as u32;
        let d = order / 2;
        if m < d {
            e.coeffs[m as usize] = BigInt::one();
        } else {
            e.coeffs[(m - d) as usize] = -BigInt::one();
        }
        e
    }

    pub fn from_integer(order: u32, v: impl Into<BigInt>) -> Self {
        let mut e = Self::zero(order);
        e.coeffs[0] = v.into();
        e
    }

    /// Build from a raw coefficient vector of length d = order/2.
    pub fn from_coeffs(order: u32, coeffs: Vec<BigInt>) -> Result<Self, Error> {
        if order < 2 || order % 2 != 0 {
            return Err(Error::BadParams(format!("invalid cyclotomic order {order}")));
        }
        if coeffs.len() != (order / 2) as usize {
            return Err(Error::BadParams(format!(
                "expected {} coefficients for order {}, got {}",
                order / 2,
                order,
                coeffs.len()
            )));
        }
        Ok(CycElt { order, coeffs })
    }

    pub fn order(&self) -> u32 {
        self.order
    }

    pub fn coeffs(&self) -> &[BigInt] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(|c| c.is_zero())
    }

    pub fn add(&self, other: &CycElt) -> CycElt {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a + b)
            .collect();
        CycElt { order: self.order, coeffs }
    }

    pub fn sub(&self, other: &CycElt) -> CycElt {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
        let coeffs = self
            .coeffs
            .iter()
            .zip(&other.coeffs)
            .map(|(a, b)| a - b)
            .collect();
        CycElt { order: self.order, coeffs }
    }

    pub fn neg(&self) -> CycElt {
        CycElt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| -c).collect(),
        }
    }

    /// Ring product in Z[x]/(x^d + 1): convolution followed by the sign fold.
    pub fn mul(&self, other: &CycElt) -> CycElt {
        assert_eq!(self.order, other.order, "cyclotomic order mismatch");
        let d = (self.order / 2) as usize;
        let mut acc = vec![BigInt::zero(); d];
        for (i, a) in self.coeffs.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in other.coeffs.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let k = i + j;
                if k < d {
                    acc[k] += a * b;
                } else {
                    acc[k - d] -= a * b;
                }
            }
        }
        CycElt { order: self.order, coeffs: acc }
    }

    pub fn scale(&self, k: &BigInt) -> CycElt {
        CycElt {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c * k).collect(),
        }
    }

    /// Galois twist ζ ↦ ζ^k for gcd(k, order) = 1.
    pub fn galois_twist(&self, k: u32) -> Result<CycElt, Error> {
        if num_integer::gcd(k, self.order) != 1 {
            return Err(Error::BadParams(format!(
                "galois exponent {k} not coprime to order {}",
                self.order
            )));
        }
        let d = self.order / 2;
        let mut out = CycElt::zero(self.order);
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let e = (j as u64 * k as u64 % self.order as u64) as u32;
            if e < d {
                out.coeffs[e as usize] += c;
            } else {
                out.coeffs[(e - d) as usize] -= c;
            }
        }
        Ok(out)
    }
}

impl fmt::Debug for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "CycElt(ζ_{}; {:?})", self.order, self.coeffs)
    }
}

impl fmt::Display for CycElt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for (k, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            if !first {
                write!(f, " {} ", if c.is_negative() { "-" } else { "+" })?;
            } else if c.is_negative() {
                write!(f, "-")?;
            }
            let a = c.abs();
            match k {
                0 => write!(f, "{a}")?,
                _ => {
                    if !a.is_one() {
                        write!(f, "{a}*")?;
                    }
                    if k == 1 {
                        write!(f, "z{}", self.order)?;
                    } else {
                        write!(f, "z{}^{}", self.order, k)?;
                    }
                }
            }
            first = false;
        }
        Ok(())
    }
}

// Wire format: {"order": 2d, "coeffs": ["c0", "c1", ...]} with decimal strings,
// so arbitrary-precision coefficients survive JSON round trips.
impl Serialize for CycElt {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        struct Wire {
            order: u32,
            coeffs: Vec<String>,
        }
        Wire {
            order: self.order,
            coeffs: self.coeffs.iter().map(|c| c.to_string()).collect(),
        }
        .serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for CycElt {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        #[derive(Deserialize)]
        struct Wire {
            order: u32,
            coeffs: Vec<String>,
        }
        let w = Wire::deserialize(deserializer)?;
        let coeffs = w
            .coeffs
            .iter()
            .map(|s| s.parse::<BigInt>().map_err(|e| D::Error::custom(format!("bad coefficient {s:?}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        CycElt::from_coeffs(w.order, coeffs).map_err(D::Error::custom)
    }
}

/// Element of Q(ζ_{2d}) with a common integer denominator, kept normalized so
/// the denominator is positive and coprime to the numerator content.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CycRational {
    pub numerator: CycElt,
    pub denominator: BigInt,
}

impl CycRational {
    pub fn new(numerator: CycElt, denominator: BigInt) -> Result<Self, Error> {
        if denominator.is_zero() {
            return Err(Error::BadParams("zero denominator".into()));
        }
        let mut r = CycRational { numerator, denominator };
        r.normalize();
        Ok(r)
    }

    fn normalize(&mut self) {
        if self.denominator.is_negative() {
            self.denominator = -&self.denominator;
            self.numerator = self.numerator.neg();
        }
        let mut g = self.denominator.clone();
        for c in self.numerator.coeffs() {
            g = num_integer::gcd(g, c.abs());
            if g.is_one() {
                return;
            }
        }
        if !g.is_one() && !g.is_zero() {
            self.denominator = &self.denominator / &g;
            let coeffs = self.numerator.coeffs.iter().map(|c| c / &g).collect();
            self.numerator = CycElt {
                order: self.numerator.order,
                coeffs,
            };
        }
    }
}

/// The m-th cyclotomic polynomial Φ_m as a monic integer coefficient vector,
/// index k holding the coefficient of x^k.
pub fn cyclotomic_polynomial(m: u32) -> Vec<BigInt> {
    assert!(m >= 1);
    // Φ_m = (x^m - 1) / ∏_{e | m, e < m} Φ_e
    let mut num = vec![BigInt::zero(); m as usize + 1];
    num[0] = -BigInt::one();
    num[m as usize] = BigInt::one();
    for e in 1..m {
        if m % e == 0 {
            num = poly_div_exact(&num, &cyclotomic_polynomial(e));
        }
    }
    num
}

/// Exact division of integer polynomials; `b` must be monic and divide `a`.
fn poly_div_exact(a: &[BigInt], b: &[BigInt]) -> Vec<BigInt> {
    let db = b.len() - 1;
    assert!(b[db].is_one(), "divisor must be monic");
    let mut rem = a.to_vec();
    let da = rem.len() - 1;
    let mut quot = vec![BigInt::zero(); da - db + 1];
    for k in (0..=da - db).rev() {
        let c = rem[db + k].clone();
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=db {
            let t = &b[j] * &c;
            rem[j + k] -= t;
        }
    }
    assert!(rem.iter().all(|c| c.is_zero()), "inexact polynomial division");
    quot
}

/// Euler totient.
pub fn euler_phi(mut m: u32) -> u32 {
    let mut result = m;
    let mut p = 2;
    while p * p <= m {
        if m % p == 0 {
            while m % p == 0 {
                m /= p;
            }
            result = result / p * (p - 1);
        }
        p += 1;
    }
    if m > 1 {
        result = result / m * (m - 1);
    }
    result
}

/// The field Q(ζ_{order}) presented as Q[x]/Φ_{order}.
#[derive(Clone, Debug)]
pub struct CyclotomicField {
    pub order: u32,
    pub degree: u32,
    pub minimal_polynomial: Vec<BigInt>,
}

impl CyclotomicField {
    pub fn new(order: u32) -> Self {
        let min_poly = cyclotomic_polynomial(order);
        CyclotomicField {
            order,
            degree: (min_poly.len() - 1) as u32,
            minimal_polynomial: min_poly,
        }
    }
}

/// Remainder of Σ c_k x^k modulo the monic minimal polynomial; integer input
/// stays integer. Length of the result is the field degree.
pub(crate) fn reduce_int(coeffs: &[BigInt], field: &CyclotomicField) -> Vec<BigInt> {
    let phi = field.degree as usize;
    let mp = &field.minimal_polynomial;
    let mut rem = coeffs.to_vec();
    if rem.len() < phi {
        rem.resize(phi, BigInt::zero());
    }
    for k in (phi..rem.len()).rev() {
        let c = std::mem::replace(&mut rem[k], BigInt::zero());
        if c.is_zero() {
            continue;
        }
        for j in 0..phi {
            let t = &mp[j] * &c;
            rem[k - phi + j] -= t;
        }
    }
    rem.truncate(phi);
    rem
}

/// Coordinates of `x` in the power basis of Q[x]/Φ_{2d}. Two elements of
/// Z[ζ_{2d}] are equal as complex numbers iff their reductions agree.
pub fn reduce_to_field(x: &CycElt, field: &CyclotomicField) -> Result<Vec<BigRational>, Error> {
    if x.order() != field.order {
        return Err(Error::BadParams(format!(
            "element order {} does not match field order {}",
            x.order(),
            field.order
        )));
    }
    Ok(reduce_int(x.coeffs(), field)
        .into_iter()
        .map(BigRational::from_integer)
        .collect())
}

pub(crate) fn pow_mod(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc: u64 = 1;
    b %= p;
    while e > 0 {
        if e & 1 == 1 {
            acc = ((acc as u128 * b as u128) % p as u128) as u64;
        }
        b = ((b as u128 * b as u128) % p as u128) as u64;
        e >>= 1;
    }
    acc
}

pub(crate) fn is_prime_u64(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        if n % p == 0 {
            return n == p;
        }
    }
    // deterministic Miller-Rabin for u64
    let d = n - 1;
    let s = d.trailing_zeros();
    let d = d >> s;
    'witness: for a in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37] {
        let mut x = pow_mod(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = ((x as u128 * x as u128) % n as u128) as u64;
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

fn prime_factors(mut n: u64) -> Vec<u64> {
    let mut out = Vec::new();
    let mut p = 2u64;
    while p * p <= n {
        if n % p == 0 {
            out.push(p);
            while n % p == 0 {
                n /= p;
            }
        }
        p += 1;
    }
    if n > 1 {
        out.push(n);
    }
    out
}

/// Smallest primitive root mod p (p prime).
pub(crate) fn smallest_primitive_root(p: u64) -> u64 {
    let factors = prime_factors(p - 1);
    'g: for g in 2..p {
        for q in &factors {
            if pow_mod(g, (p - 1) / q, p) == 1 {
                continue 'g;
            }
        }
        return g;
    }
    unreachable!("no primitive root found for prime {p}")
}

/// Deterministic residue ω of exact multiplicative order `order` in F_p,
/// derived from the smallest primitive root of p. Requires p ≡ 1 (mod order).
pub fn modular_embedding(order: u32, p: u64) -> Result<u64, Error> {
    if !is_prime_u64(p) {
        return Err(Error::BadPrime {
            prime: p,
            order,
            reason: "not prime".into(),
        });
    }
    if (p - 1) % order as u64 != 0 {
        return Err(Error::BadPrime {
            prime: p,
            order,
            reason: format!("{p} is not congruent to 1 mod {order}"),
        });
    }
    let g = smallest_primitive_root(p);
    Ok(pow_mod(g, (p - 1) / order as u64, p))
}

/// The deterministic prime sequence for modular rank runs: the `count`
/// smallest primes p ≡ 1 (mod order) with p > 2^20.
pub fn modular_primes(order: u32, count: usize) -> Vec<u64> {
    let mut out = Vec::with_capacity(count);
    let step = order as u64;
    let mut p = (1u64 << 20) / step * step + 1;
    while p <= 1 << 20 {
        p += step;
    }
    while out.len() < count {
        if is_prime_u64(p) {
            out.push(p);
        }
        p += step;
    }
    out
}

/// Image of `x` under ζ ↦ ω in F_p. Assumes ω was produced by
/// [`modular_embedding`] for the matching order.
pub fn embed_mod(x: &CycElt, p: u64, omega: u64) -> u64 {
    let pb = BigInt::from(p);
    let mut acc: u64 = 0;
    let mut w: u64 = 1;
    for c in x.coeffs() {
        if !c.is_zero() {
            let r = ((c % &pb) + &pb) % &pb;
            let r: u64 = r.try_into().expect("residue fits u64");
            acc = ((acc as u128 + r as u128 * w as u128) % p as u128) as u64;
        }
        w = ((w as u128 * omega as u128) % p as u128) as u64;
    }
    acc
}
