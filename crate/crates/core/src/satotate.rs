//! Horizontal and vertical Sato-Tate-style statistics: moments of
//! Frobenius traces along primes for a fixed field, family averages at a
//! fixed prime, and quadrature of the Conrey–Duke–Farmer vertical measure
//! (2/π)(1+1/p) sin²θ / ((1−1/p)² + (4/p) sin²θ) dθ together with its
//! p → ∞ semicircle limit.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::Zero;

use crate::densities::{self, Group};
use crate::error::{Error, Result};
use crate::frobenius::TraceSeries;
use crate::special;
use crate::splitting::SplittingSymbol;

/// How ramified primes enter family averages: kept with their actual
/// trace, or masked to zero (the numerator drops them, the denominator
/// does not — this is the average the conjectured n_r/(1+f(p)) limit
/// describes, since ramified entries land in its error term).
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum RamifiedPolicy {
    Include,
    Exclude,
}

/// (1/π(x)) Σ_{p ≤ x} a_ρ(p)^r for one field. Unresolved primes are
/// skipped (their count is already capped at scan time); ramified primes
/// contribute their actual trace.
pub fn horizontal_moment(series: &TraceSeries, r: u32) -> Result<f64> {
    if series.entries.is_empty() {
        return Err(Error::Argument("empty trace series (need π(x) ≥ 1)".into()));
    }
    let mut sum: i128 = 0;
    for e in &series.entries {
        if let Some(a) = e.trace() {
            sum += (a as i128).pow(r);
        }
    }
    Ok(sum as f64 / series.entries.len() as f64)
}

/// Family average of a_ρ(p)^r at one prime: `symbols[i]` is field i's
/// splitting symbol at p (None = unresolved, skipped in the numerator).
pub fn vertical_moment(
    symbols: &[Option<SplittingSymbol>],
    r: u32,
    policy: RamifiedPolicy,
) -> Result<f64> {
    if symbols.is_empty() {
        return Err(Error::Argument("empty family".into()));
    }
    let mut sum: i128 = 0;
    for s in symbols.iter().flatten() {
        if policy == RamifiedPolicy::Exclude && !s.unramified() {
            continue;
        }
        sum += (s.artin_trace() as i128).pow(r);
    }
    Ok(sum as f64 / symbols.len() as f64)
}

/// Exact model expectation of a_ρ(p)^r under the local splitting measure:
/// Σ_symbols density(symbol) · trace(symbol)^r, optionally restricted to
/// unramified symbols. With the restriction this equals n_r/(1 + f(p)).
pub fn vertical_reference(
    group: Group,
    p: u64,
    r: u32,
    policy: RamifiedPolicy,
) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (symbol, d) in densities::density_table(group, p)? {
        if policy == RamifiedPolicy::Exclude && !symbol.unramified() {
            continue;
        }
        let a = BigInt::from(symbol.artin_trace());
        acc += d * BigRational::from_integer(a.pow(r));
    }
    Ok(acc)
}

/// Evaluation point of the vertical measure: a finite parameter p ≥ 2
/// (not necessarily prime — it is a parameter of the density), or the
/// p → ∞ semicircle limit.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum MeasurePoint {
    Finite(u64),
    Limit,
}

#[derive(Clone, Copy, Debug)]
pub struct MeasureMomentRequest {
    pub point: MeasurePoint,
    /// Moment order n: the integrand is (2 cos θ)^n.
    pub order: u32,
    /// Initial panel count for composite quadrature; at least 64.
    pub resolution: u32,
}

pub const QUADRATURE_TOLERANCE: f64 = 1e-9;
pub const MIN_PANELS: u32 = 64;
const MAX_PANELS: u32 = 1 << 20;
pub const MAX_MEASURE_ORDER: u32 = 100;

fn measure_density(point: MeasurePoint, theta: f64) -> f64 {
    let s2 = theta.sin().powi(2);
    match point {
        MeasurePoint::Limit => 2.0 / std::f64::consts::PI * s2,
        MeasurePoint::Finite(p) => {
            let q = 1.0 / p as f64;
            2.0 / std::f64::consts::PI * (1.0 + q) * s2 / ((1.0 - q).powi(2) + 4.0 * q * s2)
        }
    }
}

/// ∫₀^π (2 cos θ)^n dμ_p(θ) by composite Gauss–Legendre quadrature with
/// dyadic panel refinement until two successive refinements agree to
/// within the tolerance.
pub fn cdf_measure_moment(req: &MeasureMomentRequest) -> Result<f64> {
    if let MeasurePoint::Finite(p) = req.point {
        if p < 2 {
            return Err(Error::Range(format!("measure parameter {p} must be ≥ 2")));
        }
    }
    if req.resolution < MIN_PANELS {
        return Err(Error::Range(format!(
            "resolution {} below minimum {MIN_PANELS}",
            req.resolution
        )));
    }
    if req.order > MAX_MEASURE_ORDER {
        return Err(Error::Range(format!(
            "moment order {} exceeds maximum {MAX_MEASURE_ORDER}",
            req.order
        )));
    }
    let nodes = special::gauss_legendre(16);
    let n = req.order as i32;
    let f = |theta: f64| (2.0 * theta.cos()).powi(n) * measure_density(req.point, theta);
    let composite = |panels: u32| -> f64 {
        let width = std::f64::consts::PI / panels as f64;
        // pairwise-ish stable sum: panels accumulated in order, each panel
        // internally a 16-term dot product; adequate at these sizes
        let mut total = 0.0;
        for k in 0..panels {
            let a = k as f64 * width;
            let mid = a + width / 2.0;
            let half = width / 2.0;
            let mut acc = 0.0;
            for &(x, w) in &nodes {
                acc += w * f(mid + half * x);
            }
            total += acc * half;
        }
        total
    };
    let mut panels = req.resolution;
    let mut prev = composite(panels);
    while panels <= MAX_PANELS {
        panels *= 2;
        let cur = composite(panels);
        if (cur - prev).abs() < QUADRATURE_TOLERANCE {
            return Ok(cur);
        }
        prev = cur;
    }
    Err(Error::Quadrature(format!(
        "moment integral did not stabilize below {QUADRATURE_TOLERANCE} within {MAX_PANELS} panels"
    )))
}
