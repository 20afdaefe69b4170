//! Exact local splitting-measure tables for families of S₃ cubic, S₄
//! quartic, and S₅ quintic fields, plus the leading (and, for cubics,
//! secondary) coefficients of the field-counting main terms.
//!
//! Every density has the shape numerator/(1 + f(p)) where the numerator is
//! |C|/|G| for unramified symbols and c_i(p) — a rational constant times a
//! power of 1/p — for ramified ones, and f(p) is the group's total ramified
//! mass. Normalization (all densities sum to exactly 1) is structural:
//! the unramified numerators sum to 1 and the ramified ones to f(p).
//! Everything is computed in arbitrary-precision rationals; floats appear
//! only in the main-term estimates.

use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::primes;
use crate::special;
use crate::splitting::SplittingSymbol;

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub enum Group {
    S3,
    S4,
    S5,
}

impl Group {
    pub fn degree(self) -> u32 {
        match self {
            Group::S3 => 3,
            Group::S4 => 4,
            Group::S5 => 5,
        }
    }

    pub fn order(self) -> u64 {
        match self {
            Group::S3 => 6,
            Group::S4 => 24,
            Group::S5 => 120,
        }
    }

    pub fn from_degree(d: u32) -> Option<Group> {
        match d {
            3 => Some(Group::S3),
            4 => Some(Group::S4),
            5 => Some(Group::S5),
            _ => None,
        }
    }

    pub const ALL: [Group; 3] = [Group::S3, Group::S4, Group::S5];
}

impl fmt::Display for Group {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Group::S3 => "s3",
            Group::S4 => "s4",
            Group::S5 => "s5",
        })
    }
}

impl FromStr for Group {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s.to_ascii_lowercase().as_str() {
            "s3" | "cubic" => Ok(Group::S3),
            "s4" | "quartic" => Ok(Group::S4),
            "s5" | "quintic" => Ok(Group::S5),
            _ => Err(Error::Argument(format!("unknown group '{s}'"))),
        }
    }
}

fn rat(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Table rows: (symbol, base numerator, power k so that the density
/// numerator is base p^-k). Unramified rows have k = 0 and base = |C|/|G|;
/// ramified rows carry the c_i(p) constants. Row order is the order tables
/// are printed in.
fn table_spec(group: Group) -> &'static [(&'static str, (i64, i64), u32)] {
    match group {
        Group::S3 => &[
            ("1.1.1", (1, 6), 0),
            ("1.2", (1, 2), 0),
            ("3", (1, 3), 0),
            ("1^2.1", (1, 1), 1),
            ("1^3", (1, 1), 2),
        ],
        Group::S4 => &[
            ("1.1.1.1", (1, 24), 0),
            ("1.1.2", (1, 4), 0),
            ("1.3", (1, 3), 0),
            ("2.2", (1, 8), 0),
            ("4", (1, 4), 0),
            ("1^2.1.1", (1, 2), 1),
            ("1^2.2", (1, 2), 1),
            ("1^2.1^2", (1, 2), 2),
            ("2^2", (1, 2), 2),
            ("1^3.1", (1, 1), 2),
            ("1^4", (1, 1), 3),
        ],
        Group::S5 => &[
            ("1.1.1.1.1", (1, 120), 0),
            ("1.1.1.2", (1, 12), 0),
            ("1.2.2", (1, 8), 0),
            ("1.1.3", (1, 6), 0),
            ("2.3", (1, 6), 0),
            ("1.4", (1, 4), 0),
            ("5", (1, 5), 0),
            ("1^2.1.1.1", (1, 6), 1),
            ("1^2.1.2", (1, 2), 1),
            ("1^2.3", (1, 3), 1),
            ("1^2.1^2.1", (1, 2), 2),
            ("2^2.1", (1, 2), 2),
            ("1^3.1.1", (1, 2), 2),
            ("1^3.2", (1, 2), 2),
            ("1^3.1^2", (1, 1), 3),
            ("1^4.1", (1, 1), 3),
            ("1^5", (1, 1), 4),
        ],
    }
}

fn check_prime(p: u64) -> Result<()> {
    if !primes::is_prime(p) {
        return Err(Error::Argument(format!("{p} is not prime")));
    }
    Ok(())
}

/// Total ramified mass f(p): p⁻¹+p⁻² (S₃), p⁻¹+2p⁻²+p⁻³ (S₄),
/// p⁻¹+2p⁻²+2p⁻³+p⁻⁴ (S₅).
pub fn ramification_mass(group: Group, p: u64) -> Result<BigRational> {
    check_prime(p)?;
    let coeffs: &[i64] = match group {
        Group::S3 => &[1, 1],
        Group::S4 => &[1, 2, 1],
        Group::S5 => &[1, 2, 2, 1],
    };
    let pb = BigInt::from(p);
    let mut acc = BigRational::zero();
    let mut denom = BigInt::one();
    for &c in coeffs {
        denom *= &pb;
        acc += BigRational::new(BigInt::from(c), denom.clone());
    }
    Ok(acc)
}

/// All admissible splitting symbols, in table order: 5 for S₃, 11 for S₄,
/// 17 for S₅ (every (e,f) multiset of total degree n occurs).
pub fn admissible_symbols(group: Group) -> Vec<SplittingSymbol> {
    table_spec(group)
        .iter()
        .map(|(s, _, _)| s.parse().expect("static table symbol"))
        .collect()
}

/// Density of one symbol at p: numerator(p) / (1 + f(p)).
pub fn density(group: Group, symbol: &SplittingSymbol, p: u64) -> Result<BigRational> {
    check_prime(p)?;
    for (s, (num, den), k) in table_spec(group) {
        let row: SplittingSymbol = s.parse().expect("static table symbol");
        if row == *symbol {
            let pk = BigInt::from(p).pow(*k);
            let numerator = rat(*num, *den) / BigRational::from_integer(pk);
            let denom = BigRational::one() + ramification_mass(group, p)?;
            return Ok(numerator / denom);
        }
    }
    Err(Error::UnsupportedSymbol {
        group: group.to_string(),
        symbol: symbol.to_string(),
    })
}

/// The full table at one prime, in print order.
pub fn density_table(group: Group, p: u64) -> Result<Vec<(SplittingSymbol, BigRational)>> {
    admissible_symbols(group)
        .into_iter()
        .map(|s| {
            let d = density(group, &s, p)?;
            Ok((s, d))
        })
        .collect()
}

/// Sum of all densities; exactly 1 unless a table row is wrong.
pub fn measure_total(group: Group, p: u64) -> Result<BigRational> {
    let mut acc = BigRational::zero();
    for (_, d) in density_table(group, p)? {
        acc += d;
    }
    Ok(acc)
}

/// Product of density values over a set of local conditions at distinct
/// primes (the measure of the cylinder set they define).
pub fn local_condition_product(
    group: Group,
    conditions: &[(u64, SplittingSymbol)],
) -> Result<BigRational> {
    let mut seen: Vec<u64> = Vec::new();
    let mut acc = BigRational::one();
    for (p, symbol) in conditions {
        if seen.contains(p) {
            return Err(Error::Argument(format!("repeated prime {p} in conditions")));
        }
        seen.push(*p);
        acc *= density(group, symbol, *p)?;
    }
    Ok(acc)
}

/// Default truncation point for the S₄/S₅ Euler products.
pub const DEFAULT_EULER_BOUND: u64 = 1_000_000;

#[derive(Clone, Copy, Debug)]
pub struct MainTermEstimate {
    pub value: f64,
    /// Relative bound on the truncated Euler-product tail (0 for cubic,
    /// where the constants are closed-form).
    pub euler_tail_bound: f64,
}

/// Predicted number of fields of the given signature with |d_K| < x.
///
/// Cubic (r2 = 1 complex, r2 = 0 totally real) uses the Davenport–Heilbronn
/// main term C±/(12 zeta(3)) x with the Roberts / Taniguchi–Thorne secondary
/// term 4 K± zeta(1/3) / (5 Gamma(2/3)^3 zeta(5/3)) x^(5/6); zeta(1/3) < 0,
/// so the secondary correction is negative. Quartic/quintic use the
/// signature constants d_i times a truncated Euler product.
pub fn main_term(
    group: Group,
    r2: u32,
    x: f64,
    include_secondary: bool,
    euler_bound: u64,
) -> Result<MainTermEstimate> {
    if !(x >= 0.0) {
        return Err(Error::Argument(format!("negative or NaN bound {x}")));
    }
    if include_secondary && group != Group::S3 {
        return Err(Error::Argument(
            "secondary term is only known for the cubic family".into(),
        ));
    }
    match group {
        Group::S3 => {
            let (c, k) = match r2 {
                1 => (3.0, 3f64.sqrt()), // complex: d_K < 0
                0 => (1.0, 1.0),         // totally real: d_K > 0
                _ => return Err(Error::Argument(format!("cubic signature r2={r2}"))),
            };
            let mut value = c / (12.0 * special::zeta(3.0)) * x;
            if include_secondary && x > 0.0 {
                let gamma_cubed = (3.0 * special::ln_gamma(2.0 / 3.0)).exp();
                value += 4.0 * k * special::zeta(1.0 / 3.0)
                    / (5.0 * gamma_cubed * special::zeta(5.0 / 3.0))
                    * x.powf(5.0 / 6.0);
            }
            Ok(MainTermEstimate {
                value,
                euler_tail_bound: 0.0,
            })
        }
        Group::S4 | Group::S5 => {
            let d_i: f64 = match (group, r2) {
                (Group::S4, 0) => 1.0 / 48.0,
                (Group::S4, 1) => 1.0 / 8.0,
                (Group::S4, 2) => 1.0 / 16.0,
                (Group::S5, 0) => 1.0 / 240.0,
                (Group::S5, 1) => 1.0 / 24.0,
                (Group::S5, 2) => 1.0 / 16.0,
                _ => {
                    return Err(Error::Argument(format!(
                        "signature r2={r2} invalid for {group}"
                    )))
                }
            };
            if euler_bound < 2 {
                return Err(Error::Argument("euler bound must be >= 2".into()));
            }
            let mut product = 1.0f64;
            for p in primes::primes_up_to(euler_bound) {
                let pf = p as f64;
                let factor = match group {
                    Group::S4 => 1.0 + pf.powi(-2) - pf.powi(-3) - pf.powi(-4),
                    Group::S5 => 1.0 + pf.powi(-2) - pf.powi(-4) - pf.powi(-5),
                    Group::S3 => unreachable!(),
                };
                product *= factor;
            }
            // omitted factors are 1 + O(2 p^-2); sum_{p > B} 2 p^-2 < 2/B
            Ok(MainTermEstimate {
                value: d_i * product * x,
                euler_tail_bound: 2.0 / euler_bound as f64,
            })
        }
    }
}
