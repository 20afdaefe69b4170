//! Prime sieving, deterministic primality, and integer factorization for
//! 64-bit inputs.

use num_integer::Integer;

/// All primes `<= limit`, ascending. Odd-only sieve of Eratosthenes.
pub fn primes_up_to(limit: u64) -> Vec<u64> {
    if limit < 2 {
        return Vec::new();
    }
    let n = limit as usize;
    // index i represents the odd number 2i + 1
    let mut composite = vec![false; n / 2 + 1];
    let mut out = vec![2u64];
    let mut i = 1usize;
    while (2 * i + 1) * (2 * i + 1) <= n {
        if !composite[i] {
            let p = 2 * i + 1;
            let mut j = (p * p) / 2;
            while j < composite.len() {
                composite[j] = true;
                j += p;
            }
        }
        i += 1;
    }
    for i in 1..composite.len() {
        let v = 2 * i + 1;
        if v <= n && !composite[i] {
            out.push(v as u64);
        }
    }
    out
}

/// Prime-counting function computed by sieving; fine for limits up to ~10^8.
pub fn prime_pi(limit: u64) -> u64 {
    primes_up_to(limit).len() as u64
}

pub fn mod_mul(a: u64, b: u64, m: u64) -> u64 {
    ((a as u128 * b as u128) % m as u128) as u64
}

pub fn mod_pow(mut base: u64, mut exp: u64, m: u64) -> u64 {
    if m == 1 {
        return 0;
    }
    let mut acc = 1u64;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mod_mul(acc, base, m);
        }
        base = mod_mul(base, base, m);
        exp >>= 1;
    }
    acc
}

const MR_BASES: [u64; 12] = [2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37];

/// Deterministic Miller–Rabin for the full u64 range (the first twelve
/// prime bases are a proven witness set there).
pub fn is_prime(n: u64) -> bool {
    if n < 2 {
        return false;
    }
    for p in MR_BASES {
        if n == p {
            return true;
        }
        if n % p == 0 {
            return false;
        }
    }
    let mut d = n - 1;
    let mut s = 0u32;
    while d % 2 == 0 {
        d /= 2;
        s += 1;
    }
    'witness: for a in MR_BASES {
        let mut x = mod_pow(a, d, n);
        if x == 1 || x == n - 1 {
            continue;
        }
        for _ in 1..s {
            x = mod_mul(x, x, n);
            if x == n - 1 {
                continue 'witness;
            }
        }
        return false;
    }
    true
}

/// One nontrivial factor of an odd composite `n` (Pollard rho, Floyd cycle).
fn pollard_rho(n: u64, c: u64) -> u64 {
    let f = |x: u64| (mod_mul(x, x, n) + c) % n;
    let mut x = 2u64;
    let mut y = 2u64;
    loop {
        x = f(x);
        y = f(f(y));
        let d = x.abs_diff(y).gcd(&n);
        if d != 1 {
            return d; // may be n itself: caller retries with a new c
        }
    }
}

/// Prime factorization `(p, e)` sorted by `p`. Returns empty for `n <= 1`.
pub fn factor(n: u64) -> Vec<(u64, u32)> {
    fn split(n: u64, out: &mut Vec<u64>) {
        if n == 1 {
            return;
        }
        if is_prime(n) {
            out.push(n);
            return;
        }
        let mut c = 1u64;
        loop {
            let d = pollard_rho(n, c);
            if d != n {
                split(d, out);
                split(n / d, out);
                return;
            }
            c += 1;
        }
    }
    let mut n = n;
    let mut flat: Vec<u64> = Vec::new();
    for p in [2u64, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47] {
        while n % p == 0 {
            flat.push(p);
            n /= p;
        }
    }
    if n > 1 {
        split(n, &mut flat);
    }
    flat.sort_unstable();
    let mut out: Vec<(u64, u32)> = Vec::new();
    for p in flat {
        match out.last_mut() {
            Some((q, e)) if *q == p => *e += 1,
            _ => out.push((p, 1)),
        }
    }
    out
}

/// Distinct prime divisors, ascending.
pub fn distinct_primes(n: u64) -> Vec<u64> {
    factor(n).into_iter().map(|(p, _)| p).collect()
}

/// p-adic valuation of `n` (n != 0).
pub fn valuation(mut n: u64, p: u64) -> u32 {
    debug_assert!(n != 0 && p >= 2);
    let mut v = 0;
    while n % p == 0 {
        n /= p;
        v += 1;
    }
    v
}
