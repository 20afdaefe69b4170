//! Unconditional enumeration of cubic fields ordered by |discriminant|,
//! via integral binary cubic forms F(x,y) = ax³ + bx²y + cxy² + dy³.
//!
//! Every cubic field corresponds to exactly one GL₂(ℤ)-orbit of
//! irreducible forms whose ring is maximal, with d_K = disc(F). We
//! enumerate one representative per orbit using the positive definite
//! quadratic covariant J_F = Σᵢ |f'(θᵢ)|⁻² |x − θᵢ y|² (θᵢ the roots of
//! F(x,1)), which works uniformly for both discriminant signs and
//! satisfies det J = 3/|disc F| (AC − B²/4 normalization). A form is kept
//! when J_F is a reduced quadratic form; reduction theory then yields the
//! search box, for |disc| < X and a ≥ 1:
//!
//!   A ≥ 3 a^(2/3) |D|^(-2/3) and A ≤ 2 |D|^(-1/2)  ⇒  a ≤ (2/3)^(3/2) X^(1/4)
//!   C ≥ 3 |d|^(2/3) |D|^(-2/3), AC ≤ 4/|D|        ⇒  |d| ≤ (8/27) √X / a
//!   J(1,±1) ≤ 3C                                   ⇒  |F(1,±1)| ≤ (4/3)^(3/2) √X
//!
//! and F(1,1) ± F(1,-1) bound |a+c| and |b+d|. The J test is numerical
//! with a generous acceptance margin (it may over-retain, never
//! under-retain: ill-conditioned root configurations are retained
//! unconditionally), so orbits can surface more than one candidate;
//! candidates are merged by discriminant plus splitting fingerprint,
//! which also collapses the extra representatives of forms with
//! automorphisms (cyclic fields).

use std::sync::LazyLock;

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::frobenius::form_splitting;
use crate::primes;
use crate::splitting::SplittingSymbol;

pub const MAX_ENUM_BOUND: u64 = 100_000_000;

/// Trial-division primes for square-part detection: p² | D and |D| < 10⁸
/// force p ≤ 10⁴.
static SMALL_PRIMES: LazyLock<Vec<u64>> = LazyLock::new(|| primes::primes_up_to(10_000));

/// Fixed fingerprint primes for same-discriminant disambiguation.
static FP_PRIMES: LazyLock<Vec<u64>> = LazyLock::new(|| {
    let mut v = primes::primes_up_to(400);
    v.truncate(64);
    v
});

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Debug)]
pub struct BinaryCubicForm {
    pub a: i64,
    pub b: i64,
    pub c: i64,
    pub d: i64,
}

impl BinaryCubicForm {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Self {
        BinaryCubicForm { a, b, c, d }
    }

    /// 18abcd + b²c² − 4ac³ − 4b³d − 27a²d².
    pub fn disc(&self) -> i128 {
        let (a, b, c, d) = (
            self.a as i128,
            self.b as i128,
            self.c as i128,
            self.d as i128,
        );
        18 * a * b * c * d + b * b * c * c
            - 4 * a * c * c * c
            - 4 * b * b * b * d
            - 27 * a * a * d * d
    }

    pub fn content(&self) -> u64 {
        let g = gcd_u(
            gcd_u(self.a.unsigned_abs(), self.b.unsigned_abs()),
            gcd_u(self.c.unsigned_abs(), self.d.unsigned_abs()),
        );
        g
    }

    pub fn evaluate(&self, x: i64, y: i64) -> i128 {
        let (x, y) = (x as i128, y as i128);
        self.a as i128 * x * x * x
            + self.b as i128 * x * x * y
            + self.c as i128 * x * y * y
            + self.d as i128 * y * y * y
    }

    /// A cubic form is reducible over ℚ exactly when it has a rational
    /// projective zero (p : q), which forces q | a and p | d.
    pub fn is_irreducible(&self) -> bool {
        if self.a == 0 || self.d == 0 {
            return false;
        }
        for q in divisors(self.a.unsigned_abs()) {
            for p in divisors(self.d.unsigned_abs()) {
                if gcd_u(p, q) != 1 {
                    continue;
                }
                let (p, q) = (p as i64, q as i64);
                if self.evaluate(p, q) == 0 || self.evaluate(-p, q) == 0 {
                    return false;
                }
            }
        }
        true
    }

    /// Monic defining polynomial of the same field: if θ is a root of
    /// F(x,1) then aθ is a root of x³ + b x² + ac x + a²d. Coefficients
    /// low to high; disc of this polynomial is a² disc(F).
    pub fn monic_polynomial(&self) -> [i64; 4] {
        [self.a * self.a * self.d, self.a * self.c, self.b, 1]
    }
}

fn gcd_u(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd_u(b, a % b)
    }
}

fn divisors(n: u64) -> Vec<u64> {
    debug_assert!(n > 0);
    let mut small = Vec::new();
    let mut large = Vec::new();
    let mut i = 1u64;
    while i * i <= n {
        if n % i == 0 {
            small.push(i);
            if i * i != n {
                large.push(n / i);
            }
        }
        i += 1;
    }
    small.extend(large.into_iter().rev());
    small
}

#[derive(Clone, Debug)]
pub struct CubicFieldRecord {
    pub form: BinaryCubicForm,
    pub d_k: i64,
    pub r1: u32,
    pub r2: u32,
    /// Monic defining polynomial, coefficients low to high.
    pub monic: [i64; 4],
}

#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum SignatureFilter {
    TotallyReal,
    Complex,
    All,
}

impl SignatureFilter {
    /// Whether a field with discriminant `d_k` passes this filter.
    pub fn admits(self, d_k: i64) -> bool {
        match self {
            SignatureFilter::TotallyReal => d_k > 0,
            SignatureFilter::Complex => d_k < 0,
            SignatureFilter::All => true,
        }
    }
}

// ---------------------------------------------------------------------
// Julia covariant and the reduction filter

/// Roots of ax³ + bx² + cx + d as (real, imaginary) pairs.
fn cubic_roots(a: f64, b: f64, c: f64, d: f64) -> [(f64, f64); 3] {
    // depressed form t³ + pt + q, x = t − b/(3a)
    let shift = b / (3.0 * a);
    let p = c / a - shift * shift * 3.0;
    let q = 2.0 * shift * shift * shift - shift * c / a + d / a;
    let disc = -4.0 * p * p * p - 27.0 * q * q;
    if disc > 0.0 {
        // three real roots: trigonometric form
        let m = 2.0 * (-p / 3.0).sqrt();
        let arg = (3.0 * q / (p * m)).clamp(-1.0, 1.0);
        let phi = arg.acos();
        let mut out = [(0.0, 0.0); 3];
        for (k, slot) in out.iter_mut().enumerate() {
            let t = m * ((phi - 2.0 * std::f64::consts::PI * k as f64) / 3.0).cos();
            *slot = (t - shift, 0.0);
        }
        out
    } else {
        // one real root via Cardano (sign-stable), then the conjugate pair
        let half_q = q / 2.0;
        let rad = (half_q * half_q + p * p * p / 27.0).max(0.0).sqrt();
        let u = if half_q >= 0.0 {
            -(half_q + rad).cbrt()
        } else {
            (rad - half_q).cbrt()
        };
        let t0 = if u == 0.0 { 0.0 } else { u - p / (3.0 * u) };
        // t³ + pt + q = (t − t0)(t² + t0 t + (t0² + p))
        let re = -t0 / 2.0;
        let im2 = (3.0 * t0 * t0 + 4.0 * p).max(0.0) / 4.0;
        let im = im2.sqrt();
        [(t0 - shift, 0.0), (re - shift, im), (re - shift, -im)]
    }
}

/// Coefficients (A, B, C) of J_F = A x² + B xy + C y², or None when the
/// root configuration is too ill-conditioned to trust in f64 (the caller
/// must then retain the form).
fn julia_covariant(form: &BinaryCubicForm) -> Option<(f64, f64, f64)> {
    let (a, b, c, d) = (form.a as f64, form.b as f64, form.c as f64, form.d as f64);
    let roots = cubic_roots(a, b, c, d);
    let scale = 1.0
        + roots
            .iter()
            .map(|&(re, im)| re.hypot(im))
            .fold(0.0f64, f64::max);
    // conditioning guard: nearly coincident roots make 1/|f'(θ)|² wild
    for i in 0..3 {
        for j in i + 1..3 {
            let dr = roots[i].0 - roots[j].0;
            let di = roots[i].1 - roots[j].1;
            if dr.hypot(di) < 1e-4 * scale {
                return None;
            }
        }
    }
    let (mut ja, mut jb, mut jc) = (0.0f64, 0.0f64, 0.0f64);
    let mut i = 0;
    while i < 3 {
        let (re, im) = roots[i];
        // f'(θ) = 3aθ² + 2bθ + c in complex arithmetic
        let (t2re, t2im) = (re * re - im * im, 2.0 * re * im);
        let dre = 3.0 * a * t2re + 2.0 * b * re + c;
        let dim = 3.0 * a * t2im + 2.0 * b * im;
        let norm = dre * dre + dim * dim;
        if norm < 1e-12 {
            return None;
        }
        if im == 0.0 {
            let w = 1.0 / norm;
            ja += w;
            jb += -2.0 * re * w;
            jc += re * re * w;
            i += 1;
        } else {
            // conjugate pair contributes 2w((x − re·y)² + im²y²)
            let w = 2.0 / norm;
            ja += w;
            jb += -2.0 * re * w;
            jc += (re * re + im * im) * w;
            i += 2;
        }
    }
    Some((ja, jb, jc))
}

/// Margins are one-sided: a genuinely reduced form always passes; near
/// misses pass too and are cleaned up by deduplication.
const REDUCTION_SLACK: f64 = 1e-3;

fn passes_reduction_filter(form: &BinaryCubicForm) -> bool {
    match julia_covariant(form) {
        None => true,
        Some((a, b, c)) => {
            b.abs() <= a * (1.0 + REDUCTION_SLACK)
                && a <= c * (1.0 + REDUCTION_SLACK)
                && b >= -REDUCTION_SLACK * a
        }
    }
}

// ---------------------------------------------------------------------
// Maximality

/// True iff the cubic ring of the form is maximal at p. The ring fails
/// maximality at p exactly when p divides the content, or some multiple
/// zero (r : s) of F mod p in P¹(F_p) lifts to p² | F(r, s).
pub fn is_maximal_at(form: &BinaryCubicForm, p: u64) -> bool {
    debug_assert!(primes::is_prime(p));
    let pi = p as i64;
    if form.content() % p == 0 {
        return false;
    }
    let p2 = (p * p) as i128;
    // affine multiple roots: F(r,1) ≡ F'(r,1) ≡ 0 mod p
    for r in 0..pi {
        let fr = form.evaluate(r, 1).rem_euclid(p as i128);
        if fr != 0 {
            continue;
        }
        let dfr = (3 * form.a as i128 * (r as i128) * (r as i128)
            + 2 * form.b as i128 * (r as i128)
            + form.c as i128)
            .rem_euclid(p as i128);
        if dfr != 0 {
            continue;
        }
        if form.evaluate(r, 1).rem_euclid(p2) == 0 {
            return false;
        }
    }
    // zero at infinity (1 : 0) is multiple iff p | a and p | b
    if form.a % pi == 0 && form.b % pi == 0 && (form.a as i128).rem_euclid(p2) == 0 {
        return false;
    }
    true
}

/// Maximality needs checking only at primes whose square divides the
/// form discriminant (an index p always contributes p² to it).
fn is_maximal_everywhere(form: &BinaryCubicForm, disc_abs: u64) -> bool {
    for &p in SMALL_PRIMES.iter() {
        if p * p > disc_abs {
            break;
        }
        if disc_abs % (p * p) == 0 && !is_maximal_at(form, p) {
            return false;
        }
    }
    true
}

// ---------------------------------------------------------------------
// Search box and partition enumeration

/// Largest leading coefficient a J-reduced form with |disc| < x can have,
/// with safety margin over (2/3)^(3/2) x^(1/4) ≈ 0.5443 x^(1/4).
pub fn max_leading_coefficient(x: u64) -> i64 {
    (0.56 * (x as f64).powf(0.25)).floor() as i64 + 2
}

/// All filtered candidates with leading coefficient a (one deterministic
/// partition of the search). Candidates may still contain several
/// representatives of one field.
pub fn enumerate_partition(x: u64, a: i64) -> Vec<BinaryCubicForm> {
    debug_assert!(a >= 1);
    let xf = x as f64;
    let sqx = xf.sqrt();
    let value_bound = 1.6 * sqx + 4.0; // |F(1,±1)| ≤ (4/3)^(3/2)√X plus slack
    let d_bound = 0.30 * sqx / a as f64 + 4.0; // (8/27)√X/a plus slack
    let b_max = (value_bound + d_bound).ceil() as i64;
    let c_max = (value_bound).ceil() as i64 + a;
    let mut out = Vec::new();
    let k = 27.0 * (a * a) as f64;
    for b in -b_max..=b_max {
        for c in -c_max..=c_max {
            // disc as a quadratic in d: −27a²d² + (18abc − 4b³)d + (b²c² − 4ac³)
            let u = (18 * a * b * c - 4 * b * b * b) as f64;
            let v = (b * b * c * c) as f64 - (4 * a * c * c * c) as f64;
            // disc > −X between t∓; disc ≥ X on [s−, s+] (empty if Δ₁ < 0)
            let d2 = u * u + 4.0 * k * (v + xf);
            if d2 <= 0.0 {
                continue;
            }
            let t_lo = (u - d2.sqrt()) / (2.0 * k);
            let t_hi = (u + d2.sqrt()) / (2.0 * k);
            let d1 = u * u + 4.0 * k * (v - xf);
            let segments: [(f64, f64); 2] = if d1 > 0.0 {
                let s_lo = (u - d1.sqrt()) / (2.0 * k);
                let s_hi = (u + d1.sqrt()) / (2.0 * k);
                [(t_lo, s_lo), (s_hi, t_hi)]
            } else {
                [(t_lo, t_hi), (1.0, 0.0)]
            };
            for (lo, hi) in segments {
                if lo > hi {
                    continue;
                }
                // clip by the coverage bounds on d, a+c, b+d
                let lo = lo.max(-d_bound).max(-(value_bound) - (b as f64)).floor() as i64 - 1;
                let hi = hi.min(d_bound).min(value_bound - b as f64).ceil() as i64 + 1;
                for d in lo..=hi {
                    if d == 0 {
                        continue;
                    }
                    let form = BinaryCubicForm::new(a, b, c, d);
                    let disc = form.disc();
                    if disc == 0 || disc.unsigned_abs() >= x as u128 {
                        continue;
                    }
                    if !passes_reduction_filter(&form) {
                        continue;
                    }
                    if !form.is_irreducible() {
                        continue;
                    }
                    if !is_maximal_everywhere(&form, disc.unsigned_abs() as u64) {
                        continue;
                    }
                    out.push(form);
                }
            }
        }
    }
    out
}

fn fingerprint(form: &BinaryCubicForm) -> Vec<u8> {
    let mut out = Vec::with_capacity(FP_PRIMES.len() * 3);
    for &p in FP_PRIMES.iter() {
        let symbol = form_splitting(form.a, form.b, form.c, form.d, p)
            .expect("maximal form has nonvanishing reduction");
        for (e, f) in symbol.pairs() {
            out.push((e << 4) | f);
        }
        out.push(0xFF);
    }
    out
}

fn record_from(form: BinaryCubicForm) -> CubicFieldRecord {
    let d_k = form.disc() as i64;
    let (r1, r2) = if d_k > 0 { (3, 0) } else { (1, 1) };
    CubicFieldRecord {
        monic: form.monic_polynomial(),
        form,
        d_k,
        r1,
        r2,
    }
}

/// Merge candidates into one record per field: group by discriminant,
/// split groups by splitting fingerprint (isomorphic fields agree at
/// every prime; non-isomorphic cubic fields cannot), and keep the
/// lexicographically smallest form of each class.
pub fn dedup_candidates(mut candidates: Vec<BinaryCubicForm>) -> Vec<CubicFieldRecord> {
    candidates.sort_unstable_by_key(|f| (f.disc() as i64, f.a, f.b, f.c, f.d));
    candidates.dedup();
    let mut records: Vec<CubicFieldRecord> = Vec::new();
    let mut i = 0;
    while i < candidates.len() {
        let disc = candidates[i].disc();
        let mut j = i + 1;
        while j < candidates.len() && candidates[j].disc() == disc {
            j += 1;
        }
        if j - i == 1 {
            records.push(record_from(candidates[i]));
        } else {
            // same-discriminant cluster: separate genuine distinct fields
            let mut classes: Vec<(Vec<u8>, BinaryCubicForm)> = Vec::new();
            for form in &candidates[i..j] {
                let fp = fingerprint(form);
                // first (lexicographically least) representative wins
                if !classes.iter().any(|(existing, _)| *existing == fp) {
                    classes.push((fp, *form));
                }
            }
            for (_, form) in classes {
                records.push(record_from(form));
            }
        }
        i = j;
    }
    records.sort_unstable_by_key(|r| {
        (
            r.d_k.unsigned_abs(),
            r.d_k,
            r.form.a,
            r.form.b,
            r.form.c,
            r.form.d,
        )
    });
    records
}

/// All cubic fields with |d_K| < x and the requested signature, exactly
/// one record per isomorphism class, ordered by |d_K| then by form
/// coefficients. Partitions over the leading coefficient run in parallel
/// and merge deterministically.
pub fn enumerate_fields(x: u64, filter: SignatureFilter) -> Result<Vec<CubicFieldRecord>> {
    if x > MAX_ENUM_BOUND {
        return Err(Error::Resource(format!(
            "enumeration bound {x} exceeds maximum {MAX_ENUM_BOUND}"
        )));
    }
    let a_max = max_leading_coefficient(x);
    let candidates: Vec<BinaryCubicForm> = (1..=a_max)
        .into_par_iter()
        .map(|a| enumerate_partition(x, a))
        .reduce(Vec::new, |mut acc, mut part| {
            acc.append(&mut part);
            acc
        });
    Ok(dedup_candidates(candidates)
        .into_iter()
        .filter(|r| filter.admits(r.d_k))
        .collect())
}

/// Count enumerated fields that satisfy every local splitting condition.
pub fn count_fields(
    x: u64,
    filter: SignatureFilter,
    conditions: &[(u64, SplittingSymbol)],
) -> Result<usize> {
    for (p, symbol) in conditions {
        if !primes::is_prime(*p) {
            return Err(Error::Argument(format!("condition prime {p} is not prime")));
        }
        if symbol.degree() != 3 {
            return Err(Error::Argument(format!(
                "condition symbol {symbol} has degree {} ≠ 3",
                symbol.degree()
            )));
        }
    }
    let fields = enumerate_fields(x, filter)?;
    let mut count = 0usize;
    for record in &fields {
        let f = &record.form;
        let ok = conditions.iter().all(|(p, wanted)| {
            form_splitting(f.a, f.b, f.c, f.d, *p)
                .map(|s| s == *wanted)
                .unwrap_or(false)
        });
        if ok {
            count += 1;
        }
    }
    Ok(count)
}
