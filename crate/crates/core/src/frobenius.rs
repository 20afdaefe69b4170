//! Splitting behaviour of rational primes in a fixed field, via two
//! routes: factorization of an integral binary cubic form over F_p (exact
//! at every prime, including ramified ones, when the form corresponds to
//! the maximal order), and factorization of a monic defining polynomial
//! (exact away from index primes, which are detected by comparing
//! discriminant valuations and reported as unresolved).

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::polyfp::{self, PolyFp};
use crate::primes;
use crate::splitting::SplittingSymbol;

/// Hard ceiling on scan bounds; a sieve beyond this is a config mistake.
pub const MAX_SCAN_BOUND: u64 = 1_000_000_000;

/// A shared, immutable list of primes up to a bound.
#[derive(Clone, Debug)]
pub struct PrimeTable {
    limit: u64,
    primes: Vec<u64>,
}

impl PrimeTable {
    pub fn up_to(limit: u64) -> Result<PrimeTable> {
        if limit > MAX_SCAN_BOUND {
            return Err(Error::Resource(format!(
                "prime table bound {limit} exceeds maximum {MAX_SCAN_BOUND}"
            )));
        }
        Ok(PrimeTable {
            limit,
            primes: primes::primes_up_to(limit),
        })
    }

    pub fn limit(&self) -> u64 {
        self.limit
    }

    pub fn primes(&self) -> &[u64] {
        &self.primes
    }

    pub fn len(&self) -> usize {
        self.primes.len()
    }

    pub fn is_empty(&self) -> bool {
        self.primes.is_empty()
    }
}

/// Splitting type of p read off a binary cubic form a x^3 + b x^2 y
/// + c x y^2 + d y^3 attached to a maximal cubic ring. The factor
/// multiplicities give e, the degrees give f; a zero of y (the point at
/// infinity) appears when p | a.
pub fn form_splitting(a: i64, b: i64, c: i64, d: i64, p: u64) -> Result<SplittingSymbol> {
    if !primes::is_prime(p) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    let f = PolyFp::from_signed(p, &[d, c, b, a]);
    let Some(deg) = f.deg() else {
        return Err(Error::DataQuality(format!(
            "form ({a},{b},{c},{d}) vanishes mod {p}; ring is not maximal"
        )));
    };
    let mut shape = polyfp::factor_shape(&f);
    let at_infinity = 3 - deg as u32;
    if at_infinity > 0 {
        shape.push((at_infinity, 1));
    }
    SplittingSymbol::from_shape(&shape)
}

/// Discriminant of a monic polynomial (coefficients low to high, last
/// entry 1): (-1)^(n(n-1)/2) Res(f, f').
pub fn monic_disc(coeffs: &[i64]) -> Result<BigInt> {
    let n = coeffs.len().saturating_sub(1);
    if n < 2 || *coeffs.last().unwrap() != 1 {
        return Err(Error::Argument(
            "defining polynomial must be monic of degree >= 2".into(),
        ));
    }
    let f: Vec<BigInt> = coeffs.iter().map(|&c| BigInt::from(c)).collect();
    let df: Vec<BigInt> = (1..=n).map(|i| BigInt::from(i as i64) * &f[i]).collect();
    let res = resultant(&f, &df);
    if (n * (n - 1) / 2) % 2 == 1 {
        Ok(-res)
    } else {
        Ok(res)
    }
}

/// Resultant via the Sylvester matrix and fraction-free (Bareiss)
/// elimination; degrees here are tiny, so no PRS machinery is needed.
fn resultant(f: &[BigInt], g: &[BigInt]) -> BigInt {
    let n = f.len() - 1;
    let m = g.len() - 1;
    let size = n + m;
    let mut mat = vec![vec![BigInt::zero(); size]; size];
    for row in 0..m {
        for (i, c) in f.iter().rev().enumerate() {
            mat[row][row + i] = c.clone();
        }
    }
    for row in 0..n {
        for (i, c) in g.iter().rev().enumerate() {
            mat[m + row][row + i] = c.clone();
        }
    }
    det_bareiss(mat)
}

fn det_bareiss(mut m: Vec<Vec<BigInt>>) -> BigInt {
    let n = m.len();
    let mut sign = false;
    let mut prev = BigInt::one();
    for k in 0..n.saturating_sub(1) {
        if m[k][k].is_zero() {
            let Some(r) = (k + 1..n).find(|&r| !m[r][k].is_zero()) else {
                return BigInt::zero();
            };
            m.swap(k, r);
            sign = !sign;
        }
        for i in k + 1..n {
            for j in k + 1..n {
                let num = &m[i][j] * &m[k][k] - &m[i][k] * &m[k][j];
                debug_assert!((&num % &prev).is_zero());
                m[i][j] = num / &prev;
            }
            m[i][k] = BigInt::zero();
        }
        prev = m[k][k].clone();
    }
    let det = m[n - 1][n - 1].clone();
    if sign {
        -det
    } else {
        det
    }
}

fn valuation_big(x: &BigInt, p: u64) -> u32 {
    debug_assert!(!x.is_zero());
    let pb = BigInt::from(p);
    let mut v = 0;
    let mut cur = x.abs();
    loop {
        let (q, r) = cur.div_rem(&pb);
        if !r.is_zero() {
            return v;
        }
        v += 1;
        cur = q;
    }
}

/// Splitting type of p from a monic defining polynomial, given the true
/// field discriminant. Returns None when p divides the index (the
/// polynomial's shape is not trustworthy there), detected as
/// v_p(disc f) > v_p(d_K).
pub fn resolve_poly(
    coeffs: &[i64],
    field_disc: &BigInt,
    p: u64,
) -> Result<Option<SplittingSymbol>> {
    let poly_disc = monic_disc(coeffs)?;
    if poly_disc.is_zero() {
        return Err(Error::Argument(
            "defining polynomial is not separable".into(),
        ));
    }
    if field_disc.is_zero() {
        return Err(Error::Argument("field discriminant must be nonzero".into()));
    }
    if valuation_big(&poly_disc, p) > valuation_big(field_disc, p) {
        return Ok(None);
    }
    let f = PolyFp::from_signed(p, coeffs);
    let shape = polyfp::factor_shape(&f);
    Some(SplittingSymbol::from_shape(&shape)).transpose()
}

/// One prime's outcome in a scan.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct TraceEntry {
    pub p: u64,
    /// None = unresolved (index prime on the polynomial route).
    pub symbol: Option<SplittingSymbol>,
}

impl TraceEntry {
    /// Frobenius trace a(p) = (#degree-one primes above p) - 1.
    pub fn trace(&self) -> Option<i64> {
        self.symbol.as_ref().map(|s| s.artin_trace())
    }
}

/// Splitting data for one field at every prime up to a bound.
#[derive(Clone, Debug)]
pub struct TraceSeries {
    pub x: u64,
    pub entries: Vec<TraceEntry>,
}

impl TraceSeries {
    pub fn prime_count(&self) -> usize {
        self.entries.len()
    }

    pub fn unresolved(&self) -> usize {
        self.entries.iter().filter(|e| e.symbol.is_none()).count()
    }
}

/// Scan a maximal binary cubic form at all primes <= table bound.
pub fn scan_form(a: i64, b: i64, c: i64, d: i64, table: &PrimeTable) -> Result<TraceSeries> {
    let mut entries = Vec::with_capacity(table.len());
    for &p in table.primes() {
        entries.push(TraceEntry {
            p,
            symbol: Some(form_splitting(a, b, c, d, p)?),
        });
    }
    Ok(TraceSeries {
        x: table.limit(),
        entries,
    })
}

/// Fraction of scanned primes that may be unresolved before the data is
/// rejected as unusable for statistics.
pub const MAX_UNRESOLVED_FRACTION: f64 = 0.01;

/// Scan a monic defining polynomial at all primes <= table bound. Index
/// primes are carried as unresolved entries; if more than 1% of primes
/// are unresolved the series is rejected outright.
pub fn scan_poly(coeffs: &[i64], field_disc: &BigInt, table: &PrimeTable) -> Result<TraceSeries> {
    let poly_disc = monic_disc(coeffs)?;
    if poly_disc.is_zero() {
        return Err(Error::Argument(
            "defining polynomial is not separable".into(),
        ));
    }
    if field_disc.is_zero() {
        return Err(Error::Argument("field discriminant must be nonzero".into()));
    }
    let mut entries = Vec::with_capacity(table.len());
    let mut unresolved = 0usize;
    for &p in table.primes() {
        // valuations only matter at primes dividing the polynomial
        // discriminant; everywhere else the shape is authoritative
        let symbol = if (&poly_disc % BigInt::from(p)).is_zero() {
            resolve_poly(coeffs, field_disc, p)?
        } else {
            let f = PolyFp::from_signed(p, coeffs);
            Some(SplittingSymbol::from_shape(&polyfp::factor_shape(&f))?)
        };
        if symbol.is_none() {
            unresolved += 1;
        }
        entries.push(TraceEntry { p, symbol });
    }
    if !entries.is_empty() && unresolved as f64 > MAX_UNRESOLVED_FRACTION * entries.len() as f64 {
        return Err(Error::DataQuality(format!(
            "{unresolved} of {} primes unresolved (index primes); defining data \
             is too coarse for statistics",
            entries.len()
        )));
    }
    Ok(TraceSeries {
        x: table.limit(),
        entries,
    })
}
