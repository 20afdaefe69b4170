// Acceptance gate: ten end-to-end checks, one printed verdict line each.
// Run with `cargo test --test acceptance -- --nocapture --test-threads=1`
// to see every line in order. Tolerances are pinned next to the assertions
// they guard; timed checks assert their wall-clock budget.

mod common;

use std::sync::LazyLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive};
use rayon::prelude::*;

use frobclt_core::clt::{
    family_moments, gaussian_moment, normalized_statistic, sample_family_statistics,
    sample_symbols, SamplerConfig,
};
use frobclt_core::cubic::{enumerate_fields, CubicFieldRecord, SignatureFilter};
use frobclt_core::densities::{density, main_term, measure_total, Group};
use frobclt_core::frobenius::{form_splitting, scan_form, scan_poly, PrimeTable};
use frobclt_core::hecke::{hecke_power_expand, psi};
use frobclt_core::satotate::{
    cdf_measure_moment, horizontal_moment, vertical_moment, vertical_reference,
    MeasureMomentRequest, MeasurePoint, RamifiedPolicy,
};
use frobclt_core::splitting::SplittingSymbol;
use frobclt_core::symchar::{standard_character, trivial_multiplicity, CharacterTable};

/// Fixed seed for every Monte Carlo check in this gate.
const MC_SEED: u64 = 0;

/// Cubic family |d_K| < 10^6, shared by the statistical criteria (5, 6, 9).
static FIELDS: LazyLock<Vec<CubicFieldRecord>> =
    LazyLock::new(|| enumerate_fields(1_000_000, SignatureFilter::All).unwrap());

fn verdict(n: u32, pass: bool, detail: &str) {
    println!(
        "criterion {n:02} {}  {detail}",
        if pass { "PASS" } else { "FAIL" }
    );
    assert!(pass, "criterion {n:02}: {detail}");
}

fn rat(n: i64) -> BigRational {
    BigRational::from_integer(BigInt::from(n))
}

// ---------------------------------------------------------------------
// 1. Exact identities, all under one second.

#[test]
fn criterion_01_exact_identities() {
    let t0 = Instant::now();
    let mut ok = true;

    // Character orthogonality and the standard-character sums for S3..S5.
    for n in 3..=5u32 {
        let ct = CharacterTable::new(n).unwrap();
        let order: i64 = (1..=n as i64).product();
        let nc = ct.classes().len();
        for i in 0..ct.irreps().len() {
            for j in 0..=i {
                let dot: i64 = (0..nc)
                    .map(|c| ct.class_sizes()[c] as i64 * ct.value(i, c) * ct.value(j, c))
                    .sum();
                ok &= dot == if i == j { order } else { 0 };
            }
        }
        let s1: i64 = (0..nc)
            .map(|c| ct.class_sizes()[c] as i64 * standard_character(&ct.classes()[c]))
            .sum();
        let s2: i64 = (0..nc)
            .map(|c| ct.class_sizes()[c] as i64 * standard_character(&ct.classes()[c]).pow(2))
            .sum();
        ok &= s1 == 0 && s2 == order;
    }

    // Local measures sum to exactly 1.
    for g in [Group::S3, Group::S4, Group::S5] {
        for p in [2u64, 3, 5, 7, 101] {
            ok &= measure_total(g, p).unwrap() == BigRational::one();
        }
    }

    // Gaussian moments.
    for (r, m) in [(2u32, 1i64), (4, 3), (6, 15), (8, 105)] {
        ok &= gaussian_moment(r).unwrap() == rat(m);
    }

    // Hecke power expansion: sum_j h_n(j) (j+1) = 2^n (evaluate at the
    // trivial eigenvalue a(p^j) = j+1).
    for n in 1..=20u32 {
        let e = hecke_power_expand(n).unwrap();
        let total: u64 = (0..=n).map(|j| e.coefficient(j) * (j as u64 + 1)).sum();
        ok &= total == 1u64 << n;
    }

    // psi is multiplicative on coprime arguments.
    ok &= psi(12).unwrap() == 24;
    for (m, n) in [
        (4u64, 9u64),
        (5, 8),
        (7, 11),
        (12, 25),
        (16, 81),
        (1000, 1001),
    ] {
        ok &= psi(m * n).unwrap() == psi(m).unwrap() * psi(n).unwrap();
    }

    let ms = t0.elapsed().as_millis();
    ok &= ms < 1000;
    verdict(
        1,
        ok,
        &format!("orthogonality, measure totals, gaussian moments, hecke identity, psi in {ms} ms"),
    );
}

// ---------------------------------------------------------------------
// 2. trivial_multiplicity vs direct group averaging.

fn for_each_permutation(n: usize, f: &mut impl FnMut(&[usize])) {
    let mut perm: Vec<usize> = (0..n).collect();
    // Heap's algorithm.
    fn heap(k: usize, perm: &mut [usize], f: &mut impl FnMut(&[usize])) {
        if k <= 1 {
            f(perm);
            return;
        }
        for i in 0..k {
            heap(k - 1, perm, f);
            if k % 2 == 0 {
                perm.swap(i, k - 1);
            } else {
                perm.swap(0, k - 1);
            }
        }
    }
    heap(n, &mut perm, f);
}

#[test]
fn criterion_02_moment_multiplicities() {
    let mut ok = true;
    for n in 2..=6u32 {
        let fact: i128 = (1..=n as i128).product();
        let mut sums = [0i128; 9];
        for_each_permutation(n as usize, &mut |perm| {
            let fix = perm.iter().enumerate().filter(|&(i, &v)| i == v).count() as i128;
            let mut pw = 1i128;
            for s in sums.iter_mut().skip(1) {
                pw *= fix - 1;
                *s += pw;
            }
        });
        for r in 1..=8u32 {
            let avg = sums[r as usize];
            ok &= avg % fact == 0;
            ok &= (avg / fact) == trivial_multiplicity(n, r).unwrap() as i128;
        }
    }
    let anchors: Vec<u64> = (1..=4)
        .map(|r| trivial_multiplicity(3, r).unwrap())
        .collect();
    ok &= anchors == vec![0, 1, 1, 3];
    verdict(
        2,
        ok,
        "group-average oracle matches for n ≤ 6, r ≤ 8; S3 anchors 0,1,1,3",
    );
}

// ---------------------------------------------------------------------
// 3. Form enumeration vs the independent generator-search oracle.

#[test]
fn criterion_03_enumeration_vs_oracle() {
    let t0 = Instant::now();
    let forms = enumerate_fields(100_000, SignatureFilter::All).unwrap();
    let oracle = common::enumerate_oracle(100_000);
    let secs = t0.elapsed().as_secs_f64();

    let mut ok = forms.len() == oracle.len();
    ok &= forms.iter().zip(&oracle).all(|(f, o)| f.d_k == o.d_k);
    let first_complex = forms.iter().find(|r| r.d_k < 0).map(|r| r.d_k);
    let first_real = forms.iter().find(|r| r.d_k > 0).map(|r| r.d_k);
    ok &= first_complex == Some(-23) && first_real == Some(49);
    ok &= secs <= 120.0;
    verdict(
        3,
        ok,
        &format!(
            "{} fields vs {} oracle fields at 10^5, first d_K {:?}/{:?}, {:.1} s",
            forms.len(),
            oracle.len(),
            first_complex,
            first_real,
            secs
        ),
    );
}

// ---------------------------------------------------------------------
// 4. Counts at 10^6 vs main + secondary term, single-threaded.

#[test]
fn criterion_04_density_convergence() {
    let t0 = Instant::now();
    let pool = rayon::ThreadPoolBuilder::new()
        .num_threads(1)
        .build()
        .unwrap();
    let (n_complex, n_real) = pool.install(|| {
        (
            enumerate_fields(1_000_000, SignatureFilter::Complex)
                .unwrap()
                .len() as f64,
            enumerate_fields(1_000_000, SignatureFilter::TotallyReal)
                .unwrap()
                .len() as f64,
        )
    });
    let secs = t0.elapsed().as_secs_f64();

    let pred_complex = main_term(Group::S3, 1, 1e6, true, 2).unwrap().value;
    let pred_real = main_term(Group::S3, 0, 1e6, true, 2).unwrap().value;
    let rel_complex = (n_complex - pred_complex).abs() / pred_complex;
    let rel_real = (n_real - pred_real).abs() / pred_real;

    let ok = rel_complex <= 0.015 && rel_real <= 0.025 && secs <= 900.0;
    verdict(
        4,
        ok,
        &format!(
            "complex {n_complex} vs {pred_complex:.1} ({:.3}%), real {n_real} vs {pred_real:.1} ({:.3}%), {secs:.1} s single-threaded",
            100.0 * rel_complex,
            100.0 * rel_real
        ),
    );
}

// ---------------------------------------------------------------------
// 5. Local splitting frequencies in the complex family.

#[test]
fn criterion_05_local_frequencies() {
    let complex: Vec<&CubicFieldRecord> = FIELDS.iter().filter(|r| r.d_k < 0).collect();
    let n = complex.len() as f64;
    let split5 = complex
        .iter()
        .filter(|r| {
            let s = form_splitting(r.form.a, r.form.b, r.form.c, r.form.d, 5).unwrap();
            s.pairs() == [(1, 1), (1, 1), (1, 1)]
        })
        .count() as f64;
    let inert7 = complex
        .iter()
        .filter(|r| {
            let s = form_splitting(r.form.a, r.form.b, r.form.c, r.form.d, 7).unwrap();
            s.pairs() == [(1, 3)]
        })
        .count() as f64;

    let ref5 = density(Group::S3, &"1.1.1".parse::<SplittingSymbol>().unwrap(), 5)
        .unwrap()
        .to_f64()
        .unwrap();
    let ref7 = density(Group::S3, &"3".parse::<SplittingSymbol>().unwrap(), 7)
        .unwrap()
        .to_f64()
        .unwrap();

    let rel5 = (split5 / n - ref5).abs() / ref5;
    let rel7 = (inert7 / n - ref7).abs() / ref7;
    let ok = rel5 <= 0.03 && rel7 <= 0.03;
    verdict(
        5,
        ok,
        &format!(
            "split at 5: {:.5} vs {:.5} ({:.2}%); inert at 7: {:.5} vs {:.5} ({:.2}%)",
            split5 / n,
            ref5,
            100.0 * rel5,
            inert7 / n,
            ref7,
            100.0 * rel7
        ),
    );
}

// ---------------------------------------------------------------------
// 6. Empirical central limit behavior of the real cubic family.

#[test]
fn criterion_06_family_clt() {
    let table = PrimeTable::up_to(1000).unwrap();
    let stats: Vec<f64> = FIELDS
        .par_iter()
        .map(|r| {
            let series = scan_form(r.form.a, r.form.b, r.form.c, r.form.d, &table).unwrap();
            normalized_statistic(&series, RamifiedPolicy::Exclude).unwrap()
        })
        .collect();
    let reports = family_moments(&stats, 4, 1000).unwrap();
    let tolerances = [0.05, 0.10, 0.3, 0.5];
    let ok = reports
        .iter()
        .zip(tolerances)
        .all(|(rep, tol)| rep.deviation <= tol);
    verdict(
        6,
        ok,
        &format!(
            "moments at x=10^3 over {} fields: m1 {:.4}, m2 {:.4}, m3 {:.4}, m4 {:.4}",
            stats.len(),
            reports[0].empirical,
            reports[1].empirical,
            reports[2].empirical,
            reports[3].empirical
        ),
    );
}

// ---------------------------------------------------------------------
// 7. Monte Carlo CLT for the quartic and quintic models.

#[test]
fn criterion_07_monte_carlo_clt() {
    let t0 = Instant::now();
    let mut ok = true;
    let mut detail = String::new();
    for group in [Group::S4, Group::S5] {
        let cfg = SamplerConfig {
            group,
            x: 10_000,
            samples: 100_000,
            seed: MC_SEED,
            include_ramified: false,
        };
        let stats = sample_family_statistics(&cfg).unwrap();
        let reports = family_moments(&stats, 6, 10_000).unwrap();
        let worst = reports
            .iter()
            .map(|rep| rep.deviation / rep.stderr)
            .fold(0.0f64, f64::max);
        ok &= reports.iter().all(|rep| rep.deviation <= 4.0 * rep.stderr);
        detail.push_str(&format!("{group} worst {worst:.2} SE; "));
    }
    let secs = t0.elapsed().as_secs_f64();
    ok &= secs <= 600.0;
    detail.push_str(&format!("seed {MC_SEED}, {secs:.1} s"));
    verdict(7, ok, &detail);
}

// ---------------------------------------------------------------------
// 8. Horizontal statistics of the discriminant −23 field.

#[test]
fn criterion_08_horizontal_sato_tate() {
    let table = PrimeTable::up_to(1_000_000).unwrap();
    let series = scan_poly(&[-1, -1, 0, 1], &BigInt::from(-23), &table).unwrap();
    let m1 = horizontal_moment(&series, 1).unwrap();
    let m2 = horizontal_moment(&series, 2).unwrap();
    let ok = (m2 - 1.0).abs() <= 0.02 && m1.abs() <= 0.02;
    verdict(
        8,
        ok,
        &format!(
            "x^3 - x - 1 at 10^6: mean {m1:.5}, second moment {m2:.5} over {} primes",
            series.prime_count()
        ),
    );
}

// ---------------------------------------------------------------------
// 9. Vertical statistics: the enumerated family and the quintic model.

#[test]
fn criterion_09_vertical_sato_tate() {
    // Family side at p = 5: ramified fields are masked from the numerator,
    // so the reference is n_2 / (1 + f(5)).
    let symbols: Vec<Option<SplittingSymbol>> = FIELDS
        .iter()
        .map(|r| Some(form_splitting(r.form.a, r.form.b, r.form.c, r.form.d, 5).unwrap()))
        .collect();
    let m2 = vertical_moment(&symbols, 2, RamifiedPolicy::Exclude).unwrap();
    let ref2 = vertical_reference(Group::S3, 5, 2, RamifiedPolicy::Exclude)
        .unwrap()
        .to_f64()
        .unwrap();
    let rel = (m2 - ref2).abs() / ref2;
    let mut ok = rel <= 0.05;

    // Model side at p = 101: drawn symbols against the exact table.
    let draws = sample_symbols(Group::S5, 101, 100_000, MC_SEED).unwrap();
    let mut detail = format!("family m2@5 {m2:.5} vs {ref2:.5} ({:.2}%); ", 100.0 * rel);
    for r in [1u32, 2] {
        let vals: Vec<f64> = draws
            .iter()
            .map(|s| (s.artin_trace() as f64).powi(r as i32))
            .collect();
        let n = vals.len() as f64;
        let mean = vals.iter().sum::<f64>() / n;
        let var = vals.iter().map(|v| (v - mean) * (v - mean)).sum::<f64>() / n;
        let se = (var / n).sqrt();
        let reference = vertical_reference(Group::S5, 101, r, RamifiedPolicy::Include)
            .unwrap()
            .to_f64()
            .unwrap();
        let dev = (mean - reference).abs() / se;
        ok &= dev <= 4.0;
        detail.push_str(&format!("S5 r={r}: {dev:.2} SE; "));
    }
    verdict(9, ok, &detail);
}

// ---------------------------------------------------------------------
// 10. The vertical measure: normalization and moment convergence.

#[test]
fn criterion_10_cdf_measure() {
    let moment = |point: MeasurePoint, order: u32| {
        cdf_measure_moment(&MeasureMomentRequest {
            point,
            order,
            resolution: 64,
        })
        .unwrap()
    };
    let mut ok = true;

    // Normalization at small primes, to quadrature accuracy.
    for p in [2u64, 3, 5, 101] {
        ok &= (moment(MeasurePoint::Finite(p), 0) - 1.0).abs() <= 1e-9;
    }

    // Semicircle limit moments are the Catalan numbers.
    let mut detail = String::from("limit moments ");
    for (order, catalan) in [(2u32, 1.0), (4, 2.0), (6, 5.0)] {
        let m = moment(MeasurePoint::Limit, order);
        ok &= (m - catalan).abs() <= 1e-6;
        detail.push_str(&format!("{m:.8} "));
    }

    // At p = 10^6 the finite measure matches its closed-form moments
    // 1 + q and (1 + q)(2 + q), q = 10^-6, already within O(q) of Catalan.
    let q = 1e-6;
    let m2 = moment(MeasurePoint::Finite(1_000_000), 2);
    let m4 = moment(MeasurePoint::Finite(1_000_000), 4);
    ok &= (m2 - (1.0 + q)).abs() <= 2e-9;
    ok &= (m4 - (1.0 + q) * (2.0 + q)).abs() <= 2e-9;
    detail.push_str(&format!("; at 10^6: m2 {m2:.9}, m4 {m4:.9}"));
    verdict(10, ok, &detail);
}
