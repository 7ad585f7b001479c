//! Certified rank of period matrices over Q(ζ_{2d}).
//!
//! The exact path reduces entries into the degree-φ(2d) field presentation
//! Q[x]/Φ_{2d} and runs fraction-free (Bareiss) elimination with deterministic
//! pivoting, so intermediate entries stay minors of the input and coefficient
//! growth stays polynomial. The modular path specializes ζ to an element of
//! order 2d in F_p for primes p ≡ 1 (mod 2d); specialization can only
//! decrease rank, so a nonzero modular minor certifies an exact lower bound.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::cyclotomic::{
    embed_mod, euler_phi, modular_embedding, modular_primes, reduce_int, CycElt, CyclotomicField,
};
use crate::matrix::PeriodMatrix;

/// Column count above which the default method switches from exact
/// elimination to modular ranks plus an exact check of the certifying minor.
pub const EXACT_COLUMN_THRESHOLD: usize = 500;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", rename_all = "kebab-case")]
pub enum RankMethod {
    Exact,
    Modular { primes: Vec<u64> },
}

/// Outcome of a rank computation. `certified` is true for the exact path
/// unconditionally, and for the modular path when all requested primes agree
/// and the certifying minor was confirmed nonsingular exactly.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RankResult {
    pub rank: usize,
    pub method: RankMethod,
    pub certified: bool,
}

/// Borrowed dense view of a cyclotomic matrix, row-major.
#[derive(Clone, Copy)]
pub struct MatrixView<'a> {
    pub order: u32,
    pub rows: usize,
    pub cols: usize,
    pub entries: &'a [CycElt],
}

impl<'a> MatrixView<'a> {
    pub fn new(order: u32, rows: usize, cols: usize, entries: &'a [CycElt]) -> Self {
        assert_eq!(entries.len(), rows * cols);
        MatrixView { order, rows, cols, entries }
    }

    pub fn of(m: &'a PeriodMatrix) -> Self {
        MatrixView {
            order: m.params.zeta_order(),
            rows: m.rows(),
            cols: m.cols(),
            entries: &m.entries,
        }
    }

    fn at(&self, r: usize, c: usize) -> &CycElt {
        &self.entries[r * self.cols + c]
    }
}

pub fn rank_exact(m: &PeriodMatrix) -> RankResult {
    RankResult {
        rank: rank_exact_view(MatrixView::of(m)),
        method: RankMethod::Exact,
        certified: true,
    }
}

pub fn rank_modular(m: &PeriodMatrix, prime_count: usize) -> RankResult {
    rank_modular_view(MatrixView::of(m), prime_count)
}

/// Exact for narrow matrices, modular plus exact minor confirmation for wide
/// ones.
pub fn rank_auto(m: &PeriodMatrix, prime_count: usize) -> RankResult {
    rank_auto_view(MatrixView::of(m), prime_count)
}

pub fn rank_exact_view(view: MatrixView<'_>) -> usize {
    let ctx = FieldCtx::new(view.order);
    let mut rows: Vec<Vec<Poly>> = (0..view.rows)
        .map(|r| (0..view.cols).map(|c| ctx.from_cyc(view.at(r, c))).collect())
        .collect();
    bareiss_rank(&ctx, &mut rows, view.cols)
}

pub fn rank_modular_view(view: MatrixView<'_>, prime_count: usize) -> RankResult {
    assert!(prime_count >= 1);
    let primes = modular_primes(view.order, prime_count);
    let ranks: Vec<usize> = primes
        .par_iter()
        .map(|&p| modular_rank_at_prime(view, p).0)
        .collect();
    let max = ranks.iter().copied().max().unwrap_or(0);
    RankResult {
        rank: max,
        method: RankMethod::Modular { primes },
        certified: ranks.iter().all(|&r| r == max),
    }
}

pub fn rank_auto_view(view: MatrixView<'_>, prime_count: usize) -> RankResult {
    if view.cols <= EXACT_COLUMN_THRESHOLD {
        return RankResult {
            rank: rank_exact_view(view),
            method: RankMethod::Exact,
            certified: true,
        };
    }
    let primes = modular_primes(view.order, prime_count.max(1));
    let results: Vec<(usize, Vec<usize>, Vec<usize>)> = primes
        .par_iter()
        .map(|&p| modular_rank_at_prime(view, p))
        .collect();
    let max = results.iter().map(|r| r.0).max().unwrap_or(0);
    let agree = results.iter().all(|r| r.0 == max);
    // exact confirmation of the certifying minor found at the first prime
    // reporting the maximum rank
    let (_, pivot_rows, pivot_cols) = results.iter().find(|r| r.0 == max).unwrap();
    let ctx = FieldCtx::new(view.order);
    let mut minor: Vec<Vec<Poly>> = pivot_rows
        .iter()
        .map(|&r| pivot_cols.iter().map(|&c| ctx.from_cyc(view.at(r, c))).collect())
        .collect();
    let minor_rank = bareiss_rank(&ctx, &mut minor, pivot_cols.len());
    RankResult {
        rank: max,
        method: RankMethod::Modular { primes },
        certified: agree && minor_rank == max,
    }
}

/// Rank over F_p together with the pivot rows and columns of the elimination,
/// which index a nonsingular minor witnessing the rank.
fn modular_rank_at_prime(view: MatrixView<'_>, p: u64) -> (usize, Vec<usize>, Vec<usize>) {
    let omega = modular_embedding(view.order, p).expect("primes come from the admissible sequence");
    let cols = view.cols;
    let mut data: Vec<u64> = Vec::with_capacity(view.rows * cols);
    for e in view.entries {
        data.push(embed_mod(e, p, omega));
    }
    // row order bookkeeping so pivot positions refer to the original matrix
    let mut row_of: Vec<usize> = (0..view.rows).collect();
    let mut col_used = vec![false; cols];
    let mut pivot_rows = Vec::new();
    let mut pivot_cols = Vec::new();
    let mut top = 0usize;
    while top < view.rows {
        // first nonzero entry in a row-major scan over the unused columns
        let mut pivot = None;
        'scan: for r in top..view.rows {
            for c in 0..cols {
                if !col_used[c] && data[r * cols + c] != 0 {
                    pivot = Some((r, c));
                    break 'scan;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        data_swap_rows(&mut data, cols, top, pr);
        row_of.swap(top, pr);
        col_used[pc] = true;
        pivot_rows.push(row_of[top]);
        pivot_cols.push(pc);
        let inv = inv_mod(data[top * cols + pc], p);
        for r in top + 1..view.rows {
            let factor = data[r * cols + pc];
            if factor == 0 {
                continue;
            }
            let scale = ((factor as u128 * inv as u128) % p as u128) as u64;
            // the pivot row is zero in every other unused column before pc,
            // so columns left of pc are unaffected by the update
            for c in pc..cols {
                let sub = (data[top * cols + c] as u128 * scale as u128) % p as u128;
                let cur = data[r * cols + c] as u128;
                data[r * cols + c] = ((cur + p as u128 - sub) % p as u128) as u64;
            }
        }
        top += 1;
    }
    (pivot_rows.len(), pivot_rows, pivot_cols)
}

fn data_swap_rows(data: &mut [u64], cols: usize, a: usize, b: usize) {
    if a == b {
        return;
    }
    for c in 0..cols {
        data.swap(a * cols + c, b * cols + c);
    }
}

fn inv_mod(a: u64, p: u64) -> u64 {
    crate::cyclotomic::pow_mod(a, p - 2, p)
}

/// Integer-coefficient residue in Z[x]/Φ_{2d}, length φ(2d).
pub(crate) type Poly = Vec<BigInt>;

/// Shared context for arithmetic in Q[x]/Φ_{2d} with integer representatives.
pub(crate) struct FieldCtx {
    pub field: CyclotomicField,
    phi: usize,
    /// x^{φ+k} reduced mod Φ, for k = 0 .. φ-2.
    tail: Vec<Poly>,
}

impl FieldCtx {
    pub fn new(order: u32) -> Self {
        let field = CyclotomicField::new(order);
        let phi = field.degree as usize;
        debug_assert_eq!(phi, euler_phi(order) as usize);
        let mut tail = Vec::with_capacity(phi.saturating_sub(1));
        for k in 0..phi.saturating_sub(1) {
            let mut x = vec![BigInt::zero(); phi + k + 1];
            x[phi + k] = BigInt::one();
            tail.push(reduce_int(&x, &field));
        }
        FieldCtx { field, phi, tail }
    }

    pub fn from_cyc(&self, x: &CycElt) -> Poly {
        reduce_int(x.coeffs(), &self.field)
    }

    pub fn zero(&self) -> Poly {
        vec![BigInt::zero(); self.phi]
    }

    pub fn is_zero(&self, p: &Poly) -> bool {
        p.iter().all(|c| c.is_zero())
    }

    pub fn mul(&self, a: &Poly, b: &Poly) -> Poly {
        let mut conv = vec![BigInt::zero(); 2 * self.phi - 1];
        for (i, x) in a.iter().enumerate() {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate() {
                if y.is_zero() {
                    continue;
                }
                conv[i + j] += x * y;
            }
        }
        let mut out: Poly = conv[..self.phi].to_vec();
        for k in 0..self.phi.saturating_sub(1) {
            let c = &conv[self.phi + k];
            if c.is_zero() {
                continue;
            }
            for (slot, red) in out.iter_mut().zip(&self.tail[k]) {
                *slot += red * c;
            }
        }
        out
    }

    /// Inverse of a nonzero element, scaled to integers: returns (adj, den)
    /// with a·adj ≡ den (mod Φ) and den a positive integer.
    pub fn inverse_scaled(&self, a: &Poly) -> (Poly, BigInt) {
        assert!(!self.is_zero(a), "inverse of zero");
        let to_rat = |p: &[BigInt]| -> Vec<BigRational> {
            p.iter().map(|c| BigRational::from_integer(c.clone())).collect()
        };
        let modulus = to_rat(&self.field.minimal_polynomial);
        // extended Euclid: track u with u·a ≡ r (mod Φ)
        let mut r0 = modulus;
        let mut r1 = to_rat(a);
        trim(&mut r0);
        trim(&mut r1);
        let mut u0: Vec<BigRational> = vec![];
        let mut u1: Vec<BigRational> = vec![BigRational::one()];
        while r1.len() > 1 || !r1.is_empty() && !r1[0].is_zero() {
            if r1.len() == 1 {
                break;
            }
            let (q, r) = rat_poly_divmod(&r0, &r1);
            let next_u = rat_poly_sub(&u0, &rat_poly_mul(&q, &u1));
            r0 = r1;
            r1 = r;
            trim(&mut r1);
            u0 = u1;
            u1 = next_u;
            if r1.is_empty() {
                break;
            }
        }
        assert!(r1.len() == 1 && !r1[0].is_zero(), "Φ is irreducible, gcd must be constant");
        let g = r1[0].clone();
        // inverse = u1 / g; clear denominators
        let inv: Vec<BigRational> = u1.iter().map(|c| c / &g).collect();
        let mut den = BigInt::one();
        for c in &inv {
            den = num_integer::lcm(den, c.denom().clone());
        }
        let mut adj = vec![BigInt::zero(); self.phi];
        for (k, c) in inv.iter().enumerate() {
            adj[k] = c.numer() * (&den / c.denom());
        }
        if den.is_negative() {
            den = -den;
            for c in adj.iter_mut() {
                *c = -&*c;
            }
        }
        (adj, den)
    }

    /// Exact division z / b given b's scaled inverse.
    fn div_with_inverse(&self, z: &Poly, adj: &Poly, den: &BigInt) -> Poly {
        let mut q = self.mul(z, adj);
        for c in q.iter_mut() {
            let (quot, rem) = num_integer::Integer::div_rem(&*c, den);
            debug_assert!(rem.is_zero(), "inexact Bareiss division");
            *c = quot;
        }
        q
    }
}

fn trim(p: &mut Vec<BigRational>) {
    while p.last().map_or(false, |c| c.is_zero()) {
        p.pop();
    }
}

fn rat_poly_divmod(a: &[BigRational], b: &[BigRational]) -> (Vec<BigRational>, Vec<BigRational>) {
    let db = b.len() - 1;
    let lead = &b[db];
    let mut rem = a.to_vec();
    if rem.len() <= db {
        return (vec![], rem);
    }
    let mut quot = vec![BigRational::zero(); rem.len() - db];
    for k in (0..=rem.len() - 1 - db).rev() {
        let c = &rem[db + k] / lead;
        if c.is_zero() {
            continue;
        }
        quot[k] = c.clone();
        for j in 0..=db {
            let t = &b[j] * &c;
            rem[j + k] -= t;
        }
    }
    rem.truncate(db);
    (quot, rem)
}

fn rat_poly_mul(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    if a.is_empty() || b.is_empty() {
        return vec![];
    }
    let mut out = vec![BigRational::zero(); a.len() + b.len() - 1];
    for (i, x) in a.iter().enumerate() {
        for (j, y) in b.iter().enumerate() {
            out[i + j] += x * y;
        }
    }
    out
}

fn rat_poly_sub(a: &[BigRational], b: &[BigRational]) -> Vec<BigRational> {
    let mut out = vec![BigRational::zero(); a.len().max(b.len())];
    for (k, c) in a.iter().enumerate() {
        out[k] += c;
    }
    for (k, c) in b.iter().enumerate() {
        out[k] -= c;
    }
    out
}

/// Fraction-free elimination: after each pivot, updated entries equal minors
/// of the original matrix, and the one-step Sylvester identity divides out
/// the previous pivot exactly. Pivot selection is the first nonzero entry in
/// a row-major scan of the remaining submatrix, so runs are deterministic.
pub(crate) fn bareiss_rank(ctx: &FieldCtx, rows: &mut [Vec<Poly>], cols: usize) -> usize {
    let nrows = rows.len();
    let mut pivot_col_used = vec![false; cols];
    let mut prev: Option<(Poly, BigInt)> = None; // previous pivot's scaled inverse
    let mut top = 0usize;
    while top < nrows {
        // deterministic pivot: first nonzero in row-major scan
        let mut pivot = None;
        'scan: for r in top..nrows {
            for c in 0..cols {
                if !pivot_col_used[c] && !ctx.is_zero(&rows[r][c]) {
                    pivot = Some((r, c));
                    break 'scan;
                }
            }
        }
        let Some((pr, pc)) = pivot else { break };
        rows.swap(top, pr);
        pivot_col_used[pc] = true;
        let pivot_val = rows[top][pc].clone();
        let (pivot_row_snapshot, rest) = rows.split_at_mut(top + 1);
        let pivot_row = &pivot_row_snapshot[top];
        rest.par_iter_mut().for_each(|row| {
            let factor = std::mem::replace(&mut row[pc], ctx.zero());
            for c in 0..cols {
                if pivot_col_used[c] {
                    continue;
                }
                let mut v = ctx.mul(&pivot_val, &row[c]);
                if !ctx.is_zero(&factor) && !ctx.is_zero(&pivot_row[c]) {
                    let t = ctx.mul(&factor, &pivot_row[c]);
                    for (a, b) in v.iter_mut().zip(&t) {
                        *a -= b;
                    }
                }
                if let Some((adj, den)) = &prev {
                    if !ctx.is_zero(&v) {
                        v = ctx.div_with_inverse(&v, adj, den);
                    }
                }
                row[c] = v;
            }
        });
        prev = Some(ctx.inverse_scaled(&pivot_val));
        top += 1;
    }
    top
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::combinatorics::FermatParams;
    use crate::matrix::{build_matrix, Provenance};
    use proptest::prelude::*;

    fn view_rank_exact(order: u32, rows: usize, cols: usize, entries: &[CycElt]) -> usize {
        rank_exact_view(MatrixView::new(order, rows, cols, entries))
    }

    #[test]
    fn tiny_examples() {
        let z = |e: i64| CycElt::root_power(6, e);
        // [[1, ζ], [ζ, ζ²]] has rank 1: second row is ζ × first
        let entries = vec![z(0), z(1), z(1), z(2)];
        assert_eq!(view_rank_exact(6, 2, 2, &entries), 1);
        let r = rank_modular_view(MatrixView::new(6, 2, 2, &entries), 2);
        assert_eq!(r.rank, 1);
        assert!(r.certified);

        let zeros = vec![CycElt::zero(6); 6];
        assert_eq!(view_rank_exact(6, 2, 3, &zeros), 0);
        let r = rank_modular_view(MatrixView::new(6, 2, 3, &zeros), 1);
        assert_eq!(r.rank, 0);
    }

    #[test]
    fn pair_matrix_2_5_has_rank_4() {
        let m = build_matrix(FermatParams::new(2, 5).unwrap(), Provenance::LinearPair { m: -1 }).unwrap();
        assert_eq!(rank_exact(&m).rank, 4);
        let modular = rank_modular(&m, 2);
        assert_eq!(modular.rank, 4);
        assert!(modular.certified);
    }

    #[test]
    fn field_inverse_roundtrip() {
        for order in [6u32, 8, 10, 12] {
            let ctx = FieldCtx::new(order);
            let elems = [
                ctx.from_cyc(&CycElt::root_power(order, 1)),
                ctx.from_cyc(&CycElt::root_power(order, 3).add(&CycElt::one(order))),
                ctx.from_cyc(&CycElt::from_integer(order, 7)),
            ];
            for a in &elems {
                if ctx.is_zero(a) {
                    continue;
                }
                let (adj, den) = ctx.inverse_scaled(a);
                let prod = ctx.mul(a, &adj);
                let mut expect = ctx.zero();
                expect[0] = den.clone();
                assert_eq!(prod, expect, "order {order}");
            }
        }
    }

    /// Brute-force rank by minor expansion, independent of the elimination
    /// path: the rank is the largest k with a nonzero k×k minor.
    fn minor_expansion_rank(ctx: &FieldCtx, m: &[Vec<Poly>], cols: usize) -> usize {
        let rows = m.len();
        let max = rows.min(cols);
        for k in (1..=max).rev() {
            for rsel in combos(rows, k) {
                for csel in combos(cols, k) {
                    if !ctx.is_zero(&det(ctx, m, &rsel, &csel)) {
                        return k;
                    }
                }
            }
        }
        0
    }

    fn combos(n: usize, k: usize) -> Vec<Vec<usize>> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        fn rec(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
            if cur.len() == k {
                out.push(cur.clone());
                return;
            }
            for v in start..n {
                cur.push(v);
                rec(v + 1, n, k, cur, out);
                cur.pop();
            }
        }
        rec(0, n, k, &mut cur, &mut out);
        out
    }

    fn det(ctx: &FieldCtx, m: &[Vec<Poly>], rsel: &[usize], csel: &[usize]) -> Poly {
        if rsel.len() == 1 {
            return m[rsel[0]][csel[0]].clone();
        }
        let mut acc = ctx.zero();
        for (k, &c) in csel.iter().enumerate() {
            if ctx.is_zero(&m[rsel[0]][c]) {
                continue;
            }
            let rest_rows = &rsel[1..];
            let rest_cols: Vec<usize> = csel.iter().copied().filter(|&x| x != c).collect();
            let sub = det(ctx, m, rest_rows, &rest_cols);
            let term = ctx.mul(&m[rsel[0]][c], &sub);
            for (a, b) in acc.iter_mut().zip(&term) {
                if k % 2 == 0 {
                    *a += b;
                } else {
                    *a -= b;
                }
            }
        }
        acc
    }

    fn random_matrix(order: u32, rows: usize, cols: usize, seed: &mut u64) -> Vec<CycElt> {
        let mut next = || {
            *seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
            (*seed >> 33) as i64
        };
        (0..rows * cols)
            .map(|_| {
                let coeffs: Vec<BigInt> = (0..order / 2).map(|_| BigInt::from(next() % 3 - 1)).collect();
                CycElt::from_coeffs(order, coeffs).unwrap()
            })
            .collect()
    }

    #[test]
    fn exact_rank_matches_minor_expansion_oracle() {
        let mut seed = 0xfeed_5eed_u64;
        for order in [6u32, 8] {
            let ctx = FieldCtx::new(order);
            for trial in 0..40 {
                let rows = 1 + (trial % 5);
                let cols = 1 + (trial * 7 % 5);
                let entries = random_matrix(order, rows, cols, &mut seed);
                let view = MatrixView::new(order, rows, cols, &entries);
                let got = rank_exact_view(view);
                let polys: Vec<Vec<Poly>> = (0..rows)
                    .map(|r| (0..cols).map(|c| ctx.from_cyc(view.at(r, c))).collect())
                    .collect();
                assert_eq!(got, minor_expansion_rank(&ctx, &polys, cols));
                // modular never exceeds exact
                let modular = rank_modular_view(view, 2);
                assert!(modular.rank <= got);
            }
        }
    }

    #[test]
    fn rank_invariances() {
        let params = FermatParams::new(2, 5).unwrap();
        let m = build_matrix(params, Provenance::LinearPair { m: 0 }).unwrap();
        let base = rank_exact(&m).rank;

        // row scaling by a nonzero cyclotomic integer
        let mut scaled = m.clone();
        let z = CycElt::root_power(10, 3).add(&CycElt::one(10));
        let cols = scaled.cols();
        for c in 0..cols {
            scaled.entries[c] = scaled.entries[c].mul(&z);
        }
        assert_eq!(rank_exact(&scaled).rank, base);

        // global scalar multiplication
        let mut global = m.clone();
        for e in global.entries.iter_mut() {
            *e = e.scale(&BigInt::from(17));
        }
        assert_eq!(rank_exact(&global).rank, base);

        // row and column permutation
        let mut permuted = m.clone();
        permuted.row_index.swap(0, 2);
        for c in 0..cols {
            let a = 0 * cols + c;
            let b = 2 * cols + c;
            permuted.entries.swap(a, b);
        }
        assert_eq!(rank_exact(&permuted).rank, base);

        // Galois twist ζ -> ζ^3 (gcd(3, 10) = 1)
        let mut twisted = m.clone();
        for e in twisted.entries.iter_mut() {
            *e = e.galois_twist(3).unwrap();
        }
        assert_eq!(rank_exact(&twisted).rank, base);
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(32))]
        #[test]
        fn modular_rank_never_exceeds_exact(seed in 0u64..1_000_000) {
            let mut s = seed.wrapping_mul(2654435761).wrapping_add(1);
            let rows = 1 + (seed % 4) as usize;
            let cols = 1 + (seed / 4 % 4) as usize;
            let entries = random_matrix(6, rows, cols, &mut s);
            let view = MatrixView::new(6, rows, cols, &entries);
            let exact = rank_exact_view(view);
            let modular = rank_modular_view(view, 1);
            prop_assert!(modular.rank <= exact);
        }
    }
}
