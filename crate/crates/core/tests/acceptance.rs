//! End-to-end acceptance gate: the seven headline checks of the toolkit,
//! one test and one pass/fail line each.

use num_bigint::BigInt;
use num_traits::Zero;

use fermat_periods::codim::{codim, expected_rank_ci, expected_rank_ci_all_ones, min_ci_degree};
use fermat_periods::combinatorics::{
    enumerate_index_set, enumerate_linear_cycles, index_set_size, linear_cycle_count,
    permutation_sign, ExponentIndex, FermatParams, LinearCycle,
};
use fermat_periods::cyclotomic::{reduce_to_field, CycElt, CyclotomicField};
use fermat_periods::periods::linear_cycle_period;
use fermat_periods::rank::{rank_exact_view, rank_modular_view, MatrixView};
use fermat_periods::verify::{
    run_all_ones_suite, run_ci_suite, run_linear_pair_suite, Report, SuiteConfig,
};

fn gate(name: &str, ok: bool, detail: &str) {
    println!("[{}] {name}: {detail}", if ok { "PASS" } else { "FAIL" });
    assert!(ok, "{name}: {detail}");
}

fn suite_line(report: &Report) -> String {
    format!(
        "{} cases, {} passed, {} failed, {} errored ({:.1}s)",
        report.cases.len(),
        report.passed,
        report.failed,
        report.errored,
        report.wall_time
    )
}

#[test]
fn criterion_1_linear_pair_rank_identities() {
    let report = run_linear_pair_suite(&SuiteConfig::default());
    let ok = report.all_passed() && report.cases.len() == 23;
    gate("criterion 1: 23 linear-pair rank identities", ok, &suite_line(&report));
}

#[test]
fn criterion_2_complete_intersection_rank_identities() {
    let report = run_ci_suite(&SuiteConfig::default());
    // exhaustive multisets for n = 2, d <= 8; at least 3 per remaining point
    let exhaustive: usize = (4..=8).map(|d: usize| d * (d - 1) / 2).sum();
    let sampled_points = 7 + 4 + 2; // n=2 d=9..15, n=4 d=3..6, n=6 d=3..4
    let ok = report.all_passed() && report.cases.len() >= exhaustive + 3 * sampled_points;
    gate(
        "criterion 2: complete-intersection rank identities over the full grid",
        ok,
        &suite_line(&report),
    );
}

#[test]
fn criterion_3_all_ones_closed_form() {
    let report = run_all_ones_suite(&SuiteConfig::default());
    let grid: usize = [2u32, 4, 6, 8, 10]
        .iter()
        .map(|&n| (6 - min_ci_degree(n) + 1) as usize)
        .sum();
    let ok = report.all_passed()
        && report.cases.len() == grid
        && report
            .cases
            .iter()
            .all(|c| c.detail.as_deref().is_some_and(|s| s.contains("structural path")));
    gate(
        "criterion 3: all-ones closed form and row-generation identity",
        ok,
        &suite_line(&report),
    );
}

#[test]
fn criterion_4_period_formula_unit_values() {
    let params = FermatParams::new(2, 3).unwrap();
    let id: Vec<u32> = (0..4).collect();
    let cycle = LinearCycle::new(vec![0, 0], id.clone()).unwrap();
    let value = linear_cycle_period(params, &cycle, &ExponentIndex(vec![1, 0, 1, 0])).unwrap();
    let mut ok = value.scalar.to_string() == "1/9" && value.normalized == CycElt::root_power(6, 1);

    // vanishing off the pair-sum condition
    let v = linear_cycle_period(params, &cycle, &ExponentIndex(vec![0, 0, 1, 1])).unwrap();
    ok &= v.normalized.is_zero();

    // root-exponent shift multiplies by a root of unity
    let p25 = FermatParams::new(2, 5).unwrap();
    let base = LinearCycle::new(vec![0, 0], id.clone()).unwrap();
    let shifted = LinearCycle::new(vec![1, 0], id.clone()).unwrap();
    let i = ExponentIndex(vec![2, 1, 3, 0]);
    let a = linear_cycle_period(p25, &base, &i).unwrap().normalized;
    let b = linear_cycle_period(p25, &shifted, &i).unwrap().normalized;
    ok &= b == a.mul(&CycElt::root_power(10, 2 * (i.0[0] as i64 + 1)));

    // sign flip under a transposed permutation
    let swapped = LinearCycle::new(vec![0, 0], vec![1, 0, 2, 3]).unwrap();
    let j = ExponentIndex(vec![1, 2, 3, 0]);
    let lhs = linear_cycle_period(p25, &swapped, &j).unwrap().normalized;
    let composed = ExponentIndex(vec![2, 1, 3, 0]);
    let rhs = linear_cycle_period(p25, &base, &composed).unwrap().normalized.neg();
    ok &= lhs == rhs;

    // permutation equivariance over 1000 deterministic randomized trials:
    // period(a, b, i) = sign(b) * period(a, id, i o b)
    let cycles = enumerate_linear_cycles(p25);
    let indices = enumerate_index_set(p25, p25.period_degree());
    let mut trials = 0;
    let mut seed = 0x243f6a8885a308d3u64;
    while trials < 1000 {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let cycle = &cycles[(seed >> 33) as usize % cycles.len()];
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        let i = &indices[(seed >> 33) as usize % indices.len()];
        let lhs = linear_cycle_period(p25, cycle, i).unwrap().normalized;
        let composed = ExponentIndex(cycle.b.iter().map(|&bk| i.0[bk as usize]).collect());
        let identity = LinearCycle::new(cycle.a.clone(), id.clone()).unwrap();
        let mut rhs = linear_cycle_period(p25, &identity, &composed).unwrap().normalized;
        if permutation_sign(&cycle.b).unwrap() < 0 {
            rhs = rhs.neg();
        }
        if lhs != rhs {
            ok = false;
            break;
        }
        trials += 1;
    }
    gate(
        "criterion 4: period formula unit values and equivariance",
        ok,
        &format!("unit values exact, {trials}/1000 equivariance trials"),
    );
}

#[test]
fn criterion_5_combinatorial_counts() {
    let mut ok = linear_cycle_count(FermatParams::new(2, 3).unwrap()) == 27;
    ok &= enumerate_linear_cycles(FermatParams::new(2, 3).unwrap()).len() == 27;

    // enumerated canonical cycles match the closed count for n <= 6, d <= 5
    for n in [2u32, 4, 6] {
        for d in 2..=5u32 {
            let params = FermatParams::new(n, d).unwrap();
            ok &= enumerate_linear_cycles(params).len() as u128 == linear_cycle_count(params);
        }
    }

    // |I_N| by enumeration vs inclusion-exclusion over a 50-point grid
    let mut checked = 0;
    'grid: for n in [2u32, 4, 6] {
        for d in 3..=6u32 {
            let params = FermatParams::new(n, d).unwrap();
            for total in 0..=params.period_degree().min(8) {
                ok &= enumerate_index_set(params, total).len() as u64
                    == index_set_size(params, total);
                checked += 1;
                if checked == 50 {
                    break 'grid;
                }
            }
        }
    }
    gate(
        "criterion 5: combinatorial counts",
        ok && checked == 50,
        &format!("27 lines, closed cycle counts, {checked} index-set sizes"),
    );
}

#[test]
fn criterion_6_codimension_values() {
    let mut ok = codim(2, 4, &[1, 1, 3, 3]) == 1 && codim(2, 5, &[1, 1, 4, 4]) == 2;
    for n in (2..=10u32).step_by(2) {
        for d in 2..=8u32 {
            ok &= codim(n, d, &vec![1; (n + 2) as usize]) == 0;
        }
    }
    // cross-formula consistency on the admissible grid
    for n in (2..=10u32).step_by(2) {
        for d in min_ci_degree(n)..=8u32 {
            let ones = vec![1u32; (n / 2 + 1) as usize];
            ok &= expected_rank_ci_all_ones(n, d) == expected_rank_ci(n, d, &ones).unwrap();
        }
    }
    gate(
        "criterion 6: codimension spot values and cross-formula consistency",
        ok,
        "exact over the full grid",
    );
}

#[test]
fn criterion_7_rank_engine_oracle_equivalence() {
    let mut seed = 0x9e3779b97f4a7c15u64;
    let mut next = move || {
        seed = seed.wrapping_mul(6364136223846793005).wrapping_add(1442695040888963407);
        (seed >> 33) as i64
    };
    let mut random_entries = |order: u32, count: usize| -> Vec<CycElt> {
        (0..count)
            .map(|_| {
                let coeffs: Vec<BigInt> =
                    (0..order / 2).map(|_| BigInt::from(next() % 5 - 2)).collect();
                CycElt::from_coeffs(order, coeffs).unwrap()
            })
            .collect()
    };

    let mut ok = true;
    let mut oracle_checks = 0;
    for trial in 0..200usize {
        let order = if trial % 2 == 0 { 6 } else { 8 };
        let rows = 1 + trial % 5;
        let cols = 1 + (trial / 5) % 5;
        let entries = random_entries(order, rows * cols);
        let view = MatrixView::new(order, rows, cols, &entries);
        let exact = rank_exact_view(view);
        ok &= exact == minor_expansion_rank(order, rows, cols, &entries);
        ok &= rank_modular_view(view, 1).rank <= exact;
        oracle_checks += 1;
    }

    // Galois-twist invariance on 100 random matrices
    let mut twist_checks = 0;
    for trial in 0..100usize {
        let order = if trial % 2 == 0 { 10 } else { 8 };
        let k = if trial % 2 == 0 { 3 } else { 5 };
        let rows = 2 + trial % 3;
        let cols = 2 + (trial / 3) % 3;
        let entries = random_entries(order, rows * cols);
        let twisted: Vec<CycElt> = entries.iter().map(|e| e.galois_twist(k).unwrap()).collect();
        ok &= rank_exact_view(MatrixView::new(order, rows, cols, &entries))
            == rank_exact_view(MatrixView::new(order, rows, cols, &twisted));
        twist_checks += 1;
    }
    gate(
        "criterion 7: rank engine vs minor-expansion oracle",
        ok,
        &format!("{oracle_checks} oracle comparisons, {twist_checks} Galois twists"),
    );
}

/// Independent brute-force rank: the largest k admitting a k x k minor that
/// is nonzero in Q(zeta), computed by Laplace expansion in Z[x]/(x^{d}+1) and
/// reduced into the field at the end.
fn minor_expansion_rank(order: u32, rows: usize, cols: usize, entries: &[CycElt]) -> usize {
    let field = CyclotomicField::new(order);
    let at = |r: usize, c: usize| &entries[r * cols + c];
    for k in (1..=rows.min(cols)).rev() {
        for rsel in combinations(rows, k) {
            for csel in combinations(cols, k) {
                let det = laplace_det(&rsel, &csel, &at, order);
                let reduced = reduce_to_field(&det, &field).unwrap();
                if reduced.iter().any(|c| !c.is_zero()) {
                    return k;
                }
            }
        }
    }
    0
}

fn laplace_det<'a>(
    rsel: &[usize],
    csel: &[usize],
    at: &impl Fn(usize, usize) -> &'a CycElt,
    order: u32,
) -> CycElt {
    if rsel.len() == 1 {
        return at(rsel[0], csel[0]).clone();
    }
    let mut acc = CycElt::zero(order);
    for (pos, &c) in csel.iter().enumerate() {
        let entry = at(rsel[0], c);
        if entry.is_zero() {
            continue;
        }
        let rest: Vec<usize> = csel.iter().copied().filter(|&x| x != c).collect();
        let mut term = entry.mul(&laplace_det(&rsel[1..], &rest, at, order));
        if pos % 2 == 1 {
            term = term.neg();
        }
        acc = acc.add(&term);
    }
    acc
}

fn combinations(n: usize, k: usize) -> Vec<Vec<usize>> {
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
    let mut out = Vec::new();
    rec(0, n, k, &mut Vec::new(), &mut out);
    out
}
