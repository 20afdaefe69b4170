//! Normalized prime-sum statistics over families of fields, their
//! empirical moments against exact Gaussian moments, and Monte Carlo
//! simulation of synthetic families drawn from the local splitting
//! measures (independently across primes, which is exactly the product
//! structure the limiting conjecture asserts).

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};
use rayon::prelude::*;

use crate::densities::{self, Group};
use crate::error::{Error, Result};
use crate::frobenius::{PrimeTable, TraceEntry, TraceSeries, MAX_UNRESOLVED_FRACTION};
use crate::rng::{self, ThresholdSampler};
use crate::satotate::RamifiedPolicy;
use crate::splitting::SplittingSymbol;

pub const MAX_GAUSSIAN_ORDER: u32 = 30;

/// Moments of the standard Gaussian: r!/((r/2)! 2^(r/2)) for even r,
/// zero for odd r. Exact.
pub fn gaussian_moment(r: u32) -> Result<BigRational> {
    if r > MAX_GAUSSIAN_ORDER {
        return Err(Error::Range(format!(
            "moment order {r} exceeds maximum {MAX_GAUSSIAN_ORDER}"
        )));
    }
    if r % 2 == 1 {
        return Ok(BigRational::zero());
    }
    // r! / (r/2)! = (r/2+1)(r/2+2)...r
    let half = r / 2;
    let mut num = BigInt::one();
    for k in half + 1..=r {
        num *= BigInt::from(k);
    }
    let den = BigInt::from(2u64).pow(half);
    Ok(BigRational::new(num, den))
}

/// Σ_{p ≤ x} a_ρ(p) / √π(x). Unresolved primes are skipped; they must be
/// under the 1% cap. Ramified primes enter per the chosen policy.
pub fn normalized_statistic(series: &TraceSeries, policy: RamifiedPolicy) -> Result<f64> {
    let len = series.entries.len();
    if len == 0 {
        return Err(Error::Argument("empty trace series (need π(x) ≥ 1)".into()));
    }
    let unresolved = series.unresolved();
    if unresolved as f64 > MAX_UNRESOLVED_FRACTION * len as f64 {
        return Err(Error::DataQuality(format!(
            "{unresolved} of {len} primes unresolved exceeds the 1% cap"
        )));
    }
    let mut sum: i64 = 0;
    for e in &series.entries {
        let Some(symbol) = &e.symbol else { continue };
        if policy == RamifiedPolicy::Exclude && !symbol.unramified() {
            continue;
        }
        sum += symbol.artin_trace();
    }
    Ok(sum as f64 / (len as f64).sqrt())
}

/// Deterministic pairwise-tree summation: the reduction order is a fixed
/// binary tree over indices, so results are bit-identical regardless of
/// how the work is scheduled.
pub fn pairwise_sum(v: &[f64]) -> f64 {
    if v.len() <= 32 {
        return v.iter().sum();
    }
    let (a, b) = v.split_at(v.len() / 2);
    pairwise_sum(a) + pairwise_sum(b)
}

pub const MAX_FAMILY_MOMENT_ORDER: u32 = 12;

#[derive(Clone, Debug)]
pub struct MomentReport {
    pub r: u32,
    pub empirical: f64,
    /// Exact Gaussian reference moment.
    pub reference: BigRational,
    pub deviation: f64,
    pub family_size: usize,
    pub x: u64,
    /// Estimated standard error of the empirical moment.
    pub stderr: f64,
}

/// Empirical moments r = 1..max_r of a family's normalized statistics,
/// each compared against the Gaussian reference.
pub fn family_moments(stats: &[f64], max_r: u32, x: u64) -> Result<Vec<MomentReport>> {
    if stats.is_empty() {
        return Err(Error::Argument("empty family".into()));
    }
    if max_r == 0 || max_r > MAX_FAMILY_MOMENT_ORDER {
        return Err(Error::Range(format!(
            "max moment order must be in 1..={MAX_FAMILY_MOMENT_ORDER}, got {max_r}"
        )));
    }
    let n = stats.len() as f64;
    let mut reports = Vec::with_capacity(max_r as usize);
    for r in 1..=max_r {
        let powers: Vec<f64> = stats.iter().map(|v| v.powi(r as i32)).collect();
        let empirical = pairwise_sum(&powers) / n;
        let squares: Vec<f64> = powers.iter().map(|w| w * w).collect();
        let second = pairwise_sum(&squares) / n;
        let variance = (second - empirical * empirical).max(0.0);
        let stderr = (variance / n).sqrt();
        let reference = gaussian_moment(r)?;
        let deviation = (empirical - reference.to_f64().unwrap()).abs();
        reports.push(MomentReport {
            r,
            empirical,
            reference,
            deviation,
            family_size: stats.len(),
            x,
            stderr,
        });
    }
    Ok(reports)
}

/// Classification of one multinomial expansion term of the r-th moment:
/// compositions with every exponent equal to 2 produce the main term; all
/// others are absorbed into error terms.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum TermClass {
    Main,
    ErrorTerm,
}

pub fn multinomial_term_audit(r_total: u32, composition: &[u32]) -> Result<TermClass> {
    if composition.is_empty() || composition.iter().any(|&r| r == 0) {
        return Err(Error::Argument("composition parts must be positive".into()));
    }
    let sum: u32 = composition.iter().sum();
    if sum != r_total {
        return Err(Error::Argument(format!(
            "composition sums to {sum}, expected {r_total}"
        )));
    }
    if composition.iter().all(|&r| r == 2) {
        Ok(TermClass::Main)
    } else {
        Ok(TermClass::ErrorTerm)
    }
}

/// Configuration for synthetic-family sampling. With
/// `include_ramified = false` the symbol at each prime is drawn from the
/// unramified-conditioned measure (weights |C|/|G|); with `true` it is
/// drawn from the full table including ramified symbols.
#[derive(Clone, Copy, Debug)]
pub struct SamplerConfig {
    pub group: Group,
    pub x: u64,
    pub samples: u64,
    pub seed: u64,
    pub include_ramified: bool,
}

struct LocalSampler {
    sampler: ThresholdSampler,
    symbols: Vec<SplittingSymbol>,
    traces: Vec<i64>,
}

fn build_samplers(cfg: &SamplerConfig, table: &PrimeTable) -> Result<Vec<LocalSampler>> {
    table
        .primes()
        .iter()
        .map(|&p| {
            let full = densities::density_table(cfg.group, p)?;
            let rows: Vec<(SplittingSymbol, BigRational)> = if cfg.include_ramified {
                full
            } else {
                let norm = BigRational::one() + densities::ramification_mass(cfg.group, p)?;
                full.into_iter()
                    .filter(|(s, _)| s.unramified())
                    .map(|(s, d)| (s, d * norm.clone()))
                    .collect()
            };
            let weights: Vec<BigRational> = rows.iter().map(|(_, d)| d.clone()).collect();
            let sampler = ThresholdSampler::new(&weights)?;
            let traces = rows.iter().map(|(s, _)| s.artin_trace()).collect();
            let symbols = rows.into_iter().map(|(s, _)| s).collect();
            Ok(LocalSampler {
                sampler,
                symbols,
                traces,
            })
        })
        .collect()
}

fn validate_config(cfg: &SamplerConfig) -> Result<()> {
    if cfg.samples == 0 {
        return Err(Error::Argument("sample count must be at least 1".into()));
    }
    Ok(())
}

/// Draw index for sample j at prime index i: one u64 from the counter
/// stream at position j·L + i, L = number of primes in range. Sampling is
/// embarrassingly parallel and reproducible across thread counts.
fn draw(seed: u64, j: u64, l: u64, i: u64, sampler: &ThresholdSampler) -> usize {
    sampler.sample(rng::at(seed, j * l + i))
}

/// Normalized statistics of a synthetic family, one per sample, without
/// materializing the series.
pub fn sample_family_statistics(cfg: &SamplerConfig) -> Result<Vec<f64>> {
    validate_config(cfg)?;
    let table = PrimeTable::up_to(cfg.x)?;
    let samplers = build_samplers(cfg, &table)?;
    let l = samplers.len() as u64;
    if l == 0 {
        return Err(Error::Argument("no primes in range (need π(x) ≥ 1)".into()));
    }
    let sqrt_l = (l as f64).sqrt();
    Ok((0..cfg.samples)
        .into_par_iter()
        .map(|j| {
            let mut sum: i64 = 0;
            for (i, s) in samplers.iter().enumerate() {
                let idx = draw(cfg.seed, j, l, i as u64, &s.sampler);
                sum += s.traces[idx];
            }
            sum as f64 / sqrt_l
        })
        .collect())
}

/// Cap on materialized synthetic entries; larger experiments must use the
/// streaming statistics path.
pub const MAX_MATERIALIZED_ENTRIES: u64 = 20_000_000;

/// Fully materialized synthetic families (one TraceSeries per sample),
/// for small runs and inspection.
pub fn sample_frobenius_family(cfg: &SamplerConfig) -> Result<Vec<TraceSeries>> {
    validate_config(cfg)?;
    let table = PrimeTable::up_to(cfg.x)?;
    let samplers = build_samplers(cfg, &table)?;
    let l = samplers.len() as u64;
    if cfg.samples.saturating_mul(l) > MAX_MATERIALIZED_ENTRIES {
        return Err(Error::Resource(format!(
            "{} samples × {l} primes exceeds the materialization cap {MAX_MATERIALIZED_ENTRIES}; \
             use the streaming statistics path",
            cfg.samples
        )));
    }
    Ok((0..cfg.samples)
        .map(|j| {
            let entries = samplers
                .iter()
                .enumerate()
                .map(|(i, s)| {
                    let idx = draw(cfg.seed, j, l, i as u64, &s.sampler);
                    TraceEntry {
                        p: table.primes()[i],
                        symbol: Some(s.symbols[idx].clone()),
                    }
                })
                .collect();
            TraceSeries { x: cfg.x, entries }
        })
        .collect())
}

/// Draws of the splitting symbol at a single prime from the full local
/// table (draw k uses counter position k, consistent with the family
/// scheme at L = 1).
pub fn sample_symbols(group: Group, p: u64, count: u64, seed: u64) -> Result<Vec<SplittingSymbol>> {
    let rows = densities::density_table(group, p)?;
    let weights: Vec<BigRational> = rows.iter().map(|(_, d)| d.clone()).collect();
    let sampler = ThresholdSampler::new(&weights)?;
    Ok((0..count)
        .map(|k| rows[sampler.sample(rng::at(seed, k))].0.clone())
        .collect())
}
