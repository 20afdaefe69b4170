//! Splitting symbols: how a rational prime decomposes in a number field,
//! recorded as the multiset of (ramification index, residue degree) pairs
//! of the primes above it.
//!
//! Notation follows the f^e convention: `1^2.1` is one ramified prime with
//! e=2, f=1 plus one unramified degree-1 prime (a partially ramified prime
//! of a cubic field). Pairs are kept in canonical order — ramification
//! index descending, then residue degree ascending — so symbols compare
//! and hash structurally.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::partition::Partition;

#[derive(Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Debug)]
pub struct SplittingSymbol {
    pairs: Vec<(u8, u8)>, // (e, f)
}

impl SplittingSymbol {
    pub fn new(mut pairs: Vec<(u8, u8)>) -> Result<Self> {
        if pairs.is_empty() {
            return Err(Error::Argument("empty splitting symbol".into()));
        }
        if pairs.iter().any(|&(e, f)| e == 0 || f == 0) {
            return Err(Error::Argument(
                "ramification index and residue degree must be >= 1".into(),
            ));
        }
        pairs.sort_by(|a, b| b.0.cmp(&a.0).then(a.1.cmp(&b.1)));
        Ok(SplittingSymbol { pairs })
    }

    /// Build from a factorization shape `(multiplicity, degree)` as produced
    /// by `polyfp::factor_shape`: multiplicity becomes e, degree becomes f.
    pub fn from_shape(shape: &[(u32, u32)]) -> Result<Self> {
        let pairs = shape
            .iter()
            .map(|&(m, d)| {
                if m > u8::MAX as u32 || d > u8::MAX as u32 {
                    return Err(Error::Argument(format!(
                        "factor shape ({m},{d}) out of symbol range"
                    )));
                }
                Ok((m as u8, d as u8))
            })
            .collect::<Result<Vec<_>>>()?;
        SplittingSymbol::new(pairs)
    }

    pub fn pairs(&self) -> &[(u8, u8)] {
        &self.pairs
    }

    /// Sum of e_i * f_i — the field degree.
    pub fn degree(&self) -> u32 {
        self.pairs.iter().map(|&(e, f)| e as u32 * f as u32).sum()
    }

    pub fn unramified(&self) -> bool {
        self.pairs.iter().all(|&(e, _)| e == 1)
    }

    /// For an unramified symbol, the residue degrees form a cycle type of
    /// the Frobenius conjugacy class.
    pub fn cycle_type(&self) -> Option<Partition> {
        if !self.unramified() {
            return None;
        }
        let parts: Vec<u32> = self.pairs.iter().map(|&(_, f)| f as u32).collect();
        Some(Partition::new(parts).expect("validated parts"))
    }

    /// Trace of Frobenius on the standard representation, read off the
    /// Dirichlet coefficient of zeta_K/zeta: (#primes of residue degree 1)
    /// minus 1, ramified or not.
    pub fn artin_trace(&self) -> i64 {
        self.pairs.iter().filter(|&&(_, f)| f == 1).count() as i64 - 1
    }
}

impl fmt::Display for SplittingSymbol {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for &(e, f) in &self.pairs {
            if !first {
                out.write_str(".")?;
            }
            first = false;
            if e == 1 {
                write!(out, "{f}")?;
            } else {
                write!(out, "{f}^{e}")?;
            }
        }
        Ok(())
    }
}

impl FromStr for SplittingSymbol {
    type Err = Error;

    /// Accepts `f^e` pairs joined by `.` (e.g. `1^2.1`, `1.1.1`, `3`), or
    /// one of the conventional cubic names: ts, ps, in, pr, tr.
    fn from_str(s: &str) -> Result<Self> {
        let bad = |s: &str| Error::Argument(format!("malformed splitting symbol '{s}'"));
        match s.to_ascii_lowercase().as_str() {
            "ts" => return SplittingSymbol::new(vec![(1, 1), (1, 1), (1, 1)]),
            "ps" => return SplittingSymbol::new(vec![(1, 1), (1, 2)]),
            "in" => return SplittingSymbol::new(vec![(1, 3)]),
            "pr" => return SplittingSymbol::new(vec![(2, 1), (1, 1)]),
            "tr" => return SplittingSymbol::new(vec![(3, 1)]),
            _ => {}
        }
        let mut pairs = Vec::new();
        for tok in s.split('.') {
            let (f_str, e_str) = match tok.split_once('^') {
                Some((f, e)) => (f, e),
                None => (tok, "1"),
            };
            let f: u8 = f_str.trim().parse().map_err(|_| bad(s))?;
            let e: u8 = e_str.trim().parse().map_err(|_| bad(s))?;
            pairs.push((e, f));
        }
        SplittingSymbol::new(pairs)
    }
}
