//! Symmetric-group character theory: class sizes, irreducible character
//! values via the Murnaghan–Nakayama rule, and moments of the standard
//! character.
//!
//! Everything here is exact integer arithmetic. Character values are
//! computed with beta numbers (first-column hook lengths), which turns hook
//! removal into "subtract k from one beta number if the result is not
//! already a beta number" and makes the leg-length sign a simple count of
//! displaced entries.

use std::collections::{HashMap, HashSet};

use crate::error::{Error, Result};
use crate::partition::{partitions, Partition};

/// Largest symmetric group the moment routines accept. Chosen so all
/// intermediate sums fit comfortably in `i128`.
pub const MAX_N: u32 = 12;

/// Largest moment order for [`trivial_multiplicity`].
pub const MAX_MOMENT_ORDER: u32 = 20;

fn factorial_u128(n: u32) -> u128 {
    (1..=n as u128).product()
}

/// Size of the conjugacy class of cycle type `class` in the symmetric group
/// on `n` letters: n! / prod_k (k^{m_k} m_k!).
pub fn class_size(n: u32, class: &Partition) -> Result<u64> {
    if class.n() != n {
        return Err(Error::Argument(format!(
            "cycle type {class} is not a partition of {n}"
        )));
    }
    let mut denom: u128 = 1;
    for (k, m) in class.multiplicities() {
        denom *= (k as u128).pow(m) * factorial_u128(m);
    }
    let num = factorial_u128(n);
    debug_assert_eq!(num % denom, 0);
    Ok((num / denom) as u64)
}

type Memo = HashMap<(Vec<u32>, Vec<u32>), i64>;

/// Murnaghan–Nakayama recursion. `lambda` and `rho` are partitions of the
/// same integer; removes the first cycle of `rho` as a border strip in all
/// possible ways.
fn mn(lambda: &[u32], rho: &[u32], memo: &mut Memo) -> i64 {
    if lambda.is_empty() {
        debug_assert!(rho.is_empty());
        return 1;
    }
    let key = (lambda.to_vec(), rho.to_vec());
    if let Some(&v) = memo.get(&key) {
        return v;
    }
    let k = rho[0] as i64;
    let rest = &rho[1..];
    let m = lambda.len();
    // beta numbers: strictly decreasing, beta[j] = lambda[j] + (m-1-j)
    let beta: Vec<i64> = lambda
        .iter()
        .enumerate()
        .map(|(j, &l)| l as i64 + (m - 1 - j) as i64)
        .collect();
    let beta_set: HashSet<i64> = beta.iter().copied().collect();
    let mut total: i64 = 0;
    for (j, &b) in beta.iter().enumerate() {
        let nb = b - k;
        if nb < 0 || beta_set.contains(&nb) {
            continue;
        }
        // leg length of the removed strip = betas displaced past nb
        let height = beta.iter().filter(|&&x| nb < x && x < b).count();
        let sign = if height % 2 == 0 { 1 } else { -1 };
        let mut nbeta = beta.clone();
        nbeta[j] = nb;
        nbeta.sort_unstable_by(|a, b| b.cmp(a));
        let mut nl: Vec<u32> = Vec::with_capacity(m);
        for (i, &x) in nbeta.iter().enumerate() {
            let part = x - (m - 1 - i) as i64;
            debug_assert!(part >= 0);
            if part > 0 {
                nl.push(part as u32);
            }
        }
        total += sign * mn(&nl, rest, memo);
    }
    memo.insert(key, total);
    total
}

/// Value of the irreducible character indexed by `irrep` on the class of
/// cycle type `class`. Both must be partitions of the same integer.
pub fn character_value(irrep: &Partition, class: &Partition) -> Result<i64> {
    if irrep.n() != class.n() {
        return Err(Error::Argument(format!(
            "character {irrep} and class {class} label different groups"
        )));
    }
    let mut memo = Memo::new();
    Ok(mn(irrep.parts(), class.parts(), &mut memo))
}

/// Value of the (n-1)-dimensional standard character on a class:
/// fixed points minus one.
pub fn standard_character(class: &Partition) -> i64 {
    class.fixed_points() as i64 - 1
}

/// Multiplicity of the trivial representation in the r-th tensor power of
/// the standard representation of the symmetric group on `n` letters:
/// the r-th moment (1/n!) sum_C |C| (fix(C) - 1)^r, always a non-negative
/// integer.
pub fn trivial_multiplicity(n: u32, r: u32) -> Result<u64> {
    if n == 0 || n > MAX_N {
        return Err(Error::Range(format!(
            "group degree {n} outside 1..={MAX_N}"
        )));
    }
    if r > MAX_MOMENT_ORDER {
        return Err(Error::Range(format!(
            "moment order {r} exceeds {MAX_MOMENT_ORDER}"
        )));
    }
    let mut sum: i128 = 0;
    for class in partitions(n) {
        let size = class_size(n, &class)? as i128;
        let v = standard_character(&class) as i128;
        sum += size * v.pow(r);
    }
    let fact = factorial_u128(n) as i128;
    debug_assert!(sum >= 0 && sum % fact == 0);
    if sum < 0 || sum % fact != 0 {
        return Err(Error::Overflow(format!(
            "moment sum {sum} not a multiple of {n}! — accumulator corrupted"
        )));
    }
    Ok((sum / fact) as u64)
}

/// Full character table of a symmetric group, rows indexed by irreducible
/// (a partition), columns by conjugacy class (a cycle type), both in
/// lexicographically decreasing order.
pub struct CharacterTable {
    n: u32,
    classes: Vec<Partition>,
    irreps: Vec<Partition>,
    class_sizes: Vec<u64>,
    values: Vec<Vec<i64>>,
}

impl CharacterTable {
    pub fn new(n: u32) -> Result<Self> {
        if n == 0 || n > MAX_N {
            return Err(Error::Range(format!(
                "group degree {n} outside 1..={MAX_N}"
            )));
        }
        let classes = partitions(n);
        let irreps = classes.clone();
        let class_sizes = classes
            .iter()
            .map(|c| class_size(n, c))
            .collect::<Result<Vec<_>>>()?;
        let mut memo = Memo::new();
        let values = irreps
            .iter()
            .map(|ir| {
                classes
                    .iter()
                    .map(|c| mn(ir.parts(), c.parts(), &mut memo))
                    .collect()
            })
            .collect();
        Ok(CharacterTable {
            n,
            classes,
            irreps,
            class_sizes,
            values,
        })
    }

    pub fn n(&self) -> u32 {
        self.n
    }

    pub fn classes(&self) -> &[Partition] {
        &self.classes
    }

    pub fn irreps(&self) -> &[Partition] {
        &self.irreps
    }

    pub fn class_sizes(&self) -> &[u64] {
        &self.class_sizes
    }

    /// chi_{irreps[i]}(classes[c]).
    pub fn value(&self, i: usize, c: usize) -> i64 {
        self.values[i][c]
    }

    pub fn irrep_index(&self, irrep: &Partition) -> Option<usize> {
        self.irreps.iter().position(|p| p == irrep)
    }

    pub fn class_index(&self, class: &Partition) -> Option<usize> {
        self.classes.iter().position(|p| p == class)
    }

    /// Comma-separated table: a class-label row, a class-size row, then one
    /// row per irreducible.
    pub fn to_csv(&self) -> String {
        let mut out = String::new();
        out.push_str("class");
        for c in &self.classes {
            out.push_str(&format!(",{c}"));
        }
        out.push('\n');
        out.push_str("size");
        for s in &self.class_sizes {
            out.push_str(&format!(",{s}"));
        }
        out.push('\n');
        for (i, ir) in self.irreps.iter().enumerate() {
            out.push_str(&format!("chi[{ir}]"));
            for v in &self.values[i] {
                out.push_str(&format!(",{v}"));
            }
            out.push('\n');
        }
        out
    }
}
