//! Hecke-eigenvalue power combinatorics for level-aspect averages: the
//! expansion a_f(p)^n = Σ_j h_n(j) a_f(p^j) obtained by inverting the
//! recurrence a_f(p^j) = a_f(p) a_f(p^(j-1)) - a_f(p^(j-2)), the index
//! ψ(N) of Γ₀(N), and the averaged main term of Σ_f a_f(n) over S_k(N)
//! (trivial character).

use num_rational::BigRational;

use crate::clt;
use crate::error::{Error, Result};
use crate::primes;

pub const MAX_EXPANSION_ORDER: u32 = 30;

/// Coefficients h_n(0..n) with a_f(p)^n = Σ_j h_n(j) a_f(p^j).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct HeckePowerExpansion {
    n: u32,
    coefficients: Vec<u64>,
}

impl HeckePowerExpansion {
    pub fn order(&self) -> u32 {
        self.n
    }

    /// h_n(j); zero for j > n.
    pub fn coefficient(&self, j: u32) -> u64 {
        self.coefficients.get(j as usize).copied().unwrap_or(0)
    }

    pub fn coefficients(&self) -> &[u64] {
        &self.coefficients
    }
}

/// Expand a_f(p)^n in the a_f(p^j) basis. In the Chebyshev-like basis
/// U_0 = 1, U_1 = t, U_{j+1} = t U_j - U_{j-1} multiplication by t sends
/// U_j to U_{j+1} + U_{j-1}, so the power's coefficient vector is built by
/// n such shifts.
pub fn hecke_power_expand(n: u32) -> Result<HeckePowerExpansion> {
    if n == 0 {
        return Err(Error::Range("expansion order must be positive".into()));
    }
    if n > MAX_EXPANSION_ORDER {
        return Err(Error::Range(format!(
            "expansion order {n} exceeds maximum {MAX_EXPANSION_ORDER}"
        )));
    }
    let mut cur: Vec<u64> = vec![1]; // t^0 = U_0
    for _ in 0..n {
        let mut next = vec![0u64; cur.len() + 1];
        for (j, &cj) in cur.iter().enumerate() {
            if cj == 0 {
                continue;
            }
            next[j + 1] = next[j + 1]
                .checked_add(cj)
                .ok_or_else(|| Error::Overflow("hecke expansion coefficient".into()))?;
            if j >= 1 {
                next[j - 1] = next[j - 1]
                    .checked_add(cj)
                    .ok_or_else(|| Error::Overflow("hecke expansion coefficient".into()))?;
            }
        }
        cur = next;
    }
    Ok(HeckePowerExpansion {
        n,
        coefficients: cur,
    })
}

pub const MAX_PSI_ARGUMENT: u64 = 1_000_000_000_000;

/// ψ(N) = N Π_{l | N} (1 + 1/l), the index of Γ₀(N).
pub fn psi(n: u64) -> Result<u64> {
    if n == 0 {
        return Err(Error::Range("psi is defined for positive integers".into()));
    }
    if n > MAX_PSI_ARGUMENT {
        return Err(Error::Resource(format!(
            "psi argument {n} exceeds factorization budget {MAX_PSI_ARGUMENT}"
        )));
    }
    let mut result = n;
    for (l, _) in primes::factor(n) {
        result = result / l * (l + 1);
    }
    Ok(result)
}

/// Averaged main term of Σ_{f in S_k(N)} a_f(n) with trivial character:
/// ((k-1)/12) χ(√n) n^(-1/2) ψ(N), where χ(√n) = 1 exactly when √n is a
/// positive integer coprime to N. Non-squares average to zero.
pub fn serre_main_term(n: u64, level: u64, k: u32) -> Result<f64> {
    if k < 2 {
        return Err(Error::Range("weight must be at least 2".into()));
    }
    if n == 0 {
        return Err(Error::Range("Hecke index n must be positive".into()));
    }
    let seed = (n as f64).sqrt().round() as u64;
    let root =
        (seed.saturating_sub(2)..=seed.saturating_add(2)).find(|r| r.checked_mul(*r) == Some(n));
    let Some(root) = root else {
        return Ok(0.0);
    };
    if gcd(root, level) != 1 {
        return Ok(0.0);
    }
    let psi_n = psi(level)? as f64;
    Ok((k as f64 - 1.0) / 12.0 * psi_n / root as f64)
}

/// Main term of dim S_k(N): (k-1) ψ(N) / 12.
pub fn dim_main_term(level: u64, k: u32) -> Result<f64> {
    serre_main_term(1, level, k)
}

pub const MAX_MOMENT_MAIN_TERM_ORDER: u32 = 12;

/// Normalized leading coefficient of the r-th moment of the family sums:
/// after dividing by π(x)^(r/2) #S_k(N), the r-th moment's main term is
/// the standard Gaussian moment.
pub fn hecke_moment_main_term(r: u32) -> Result<BigRational> {
    if r > MAX_MOMENT_MAIN_TERM_ORDER {
        return Err(Error::Range(format!(
            "moment order {r} exceeds maximum {MAX_MOMENT_MAIN_TERM_ORDER}"
        )));
    }
    clt::gaussian_moment(r)
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}
