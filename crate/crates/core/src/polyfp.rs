//! Dense univariate polynomial arithmetic over a prime field F_p, plus the
//! two factorization routines the splitting-type scans need: squarefree
//! decomposition (correct in small characteristic, where derivatives can
//! vanish) and distinct-degree factorization.
//!
//! Only the *shape* of a factorization — multiplicities and degrees — is
//! ever needed, so no equal-degree splitting is implemented.

use crate::primes::{mod_mul, mod_pow};

/// Polynomial over F_p. Invariant: no trailing zero coefficients and every
/// coefficient is `< p`; the zero polynomial has an empty vector.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PolyFp {
    p: u64,
    coeffs: Vec<u64>,
}

impl PolyFp {
    pub fn new(p: u64, mut coeffs: Vec<u64>) -> Self {
        assert!(p >= 2);
        for c in &mut coeffs {
            *c %= p;
        }
        let mut out = PolyFp { p, coeffs };
        out.trim();
        out
    }

    /// Reduce signed integer coefficients, lowest degree first.
    pub fn from_signed(p: u64, coeffs: &[i64]) -> Self {
        assert!(p >= 2 && p < (1 << 62));
        let v = coeffs
            .iter()
            .map(|&c| c.rem_euclid(p as i64) as u64)
            .collect();
        PolyFp::new(p, v)
    }

    pub fn zero(p: u64) -> Self {
        PolyFp { p, coeffs: vec![] }
    }

    pub fn constant(p: u64, c: u64) -> Self {
        PolyFp::new(p, vec![c])
    }

    pub fn x(p: u64) -> Self {
        PolyFp::new(p, vec![0, 1])
    }

    pub fn p(&self) -> u64 {
        self.p
    }

    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    fn trim(&mut self) {
        while self.coeffs.last() == Some(&0) {
            self.coeffs.pop();
        }
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree; `None` for the zero polynomial.
    pub fn deg(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> u64 {
        *self.coeffs.last().expect("leading coefficient of zero")
    }

    pub fn eval(&self, x: u64) -> u64 {
        let mut acc = 0u64;
        for &c in self.coeffs.iter().rev() {
            acc = (mod_mul(acc, x % self.p, self.p) + c) % self.p;
        }
        acc
    }

    pub fn add(&self, other: &PolyFp) -> PolyFp {
        assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (a + b) % self.p;
        }
        let mut r = PolyFp {
            p: self.p,
            coeffs: out,
        };
        r.trim();
        r
    }

    pub fn sub(&self, other: &PolyFp) -> PolyFp {
        assert_eq!(self.p, other.p);
        let n = self.coeffs.len().max(other.coeffs.len());
        let mut out = vec![0u64; n];
        for i in 0..n {
            let a = self.coeffs.get(i).copied().unwrap_or(0);
            let b = other.coeffs.get(i).copied().unwrap_or(0);
            out[i] = (a + self.p - b) % self.p;
        }
        let mut r = PolyFp {
            p: self.p,
            coeffs: out,
        };
        r.trim();
        r
    }

    pub fn mul(&self, other: &PolyFp) -> PolyFp {
        assert_eq!(self.p, other.p);
        if self.is_zero() || other.is_zero() {
            return PolyFp::zero(self.p);
        }
        let mut out = vec![0u64; self.coeffs.len() + other.coeffs.len() - 1];
        for (i, &a) in self.coeffs.iter().enumerate() {
            if a == 0 {
                continue;
            }
            for (j, &b) in other.coeffs.iter().enumerate() {
                out[i + j] = (out[i + j] + mod_mul(a, b, self.p)) % self.p;
            }
        }
        let mut r = PolyFp {
            p: self.p,
            coeffs: out,
        };
        r.trim();
        r
    }

    pub fn scale(&self, k: u64) -> PolyFp {
        let coeffs = self
            .coeffs
            .iter()
            .map(|&c| mod_mul(c, k % self.p, self.p))
            .collect();
        let mut r = PolyFp { p: self.p, coeffs };
        r.trim();
        r
    }

    /// Quotient and remainder by a nonzero divisor.
    pub fn div_rem(&self, divisor: &PolyFp) -> (PolyFp, PolyFp) {
        assert_eq!(self.p, divisor.p);
        assert!(!divisor.is_zero(), "division by zero polynomial");
        let p = self.p;
        let dd = divisor.deg().unwrap();
        if self.deg().map_or(true, |d| d < dd) {
            return (PolyFp::zero(p), self.clone());
        }
        let inv_lead = mod_pow(divisor.leading(), p - 2, p);
        let mut rem = self.coeffs.clone();
        let mut quot = vec![0u64; rem.len() - dd];
        for k in (dd..rem.len()).rev() {
            if rem[k] == 0 {
                continue;
            }
            let q = mod_mul(rem[k], inv_lead, p);
            quot[k - dd] = q;
            for (j, &dc) in divisor.coeffs.iter().enumerate() {
                let idx = k - dd + j;
                rem[idx] = (rem[idx] + p - mod_mul(q, dc, p)) % p;
            }
        }
        rem.truncate(dd);
        let mut r = PolyFp { p, coeffs: rem };
        r.trim();
        let mut qq = PolyFp { p, coeffs: quot };
        qq.trim();
        (qq, r)
    }

    pub fn rem(&self, divisor: &PolyFp) -> PolyFp {
        self.div_rem(divisor).1
    }

    /// Exact quotient; panics in debug builds if the division leaves a
    /// remainder (callers only divide by known factors).
    pub fn div_exact(&self, divisor: &PolyFp) -> PolyFp {
        let (q, r) = self.div_rem(divisor);
        debug_assert!(r.is_zero(), "inexact polynomial division");
        q
    }

    pub fn monic(&self) -> PolyFp {
        if self.is_zero() {
            return self.clone();
        }
        let inv = mod_pow(self.leading(), self.p - 2, self.p);
        self.scale(inv)
    }

    /// Monic greatest common divisor.
    pub fn gcd(&self, other: &PolyFp) -> PolyFp {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let r = a.rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    pub fn derivative(&self) -> PolyFp {
        if self.coeffs.len() <= 1 {
            return PolyFp::zero(self.p);
        }
        let coeffs = self
            .coeffs
            .iter()
            .enumerate()
            .skip(1)
            .map(|(i, &c)| mod_mul(c, i as u64 % self.p, self.p))
            .collect();
        let mut r = PolyFp { p: self.p, coeffs };
        r.trim();
        r
    }

    /// self^exp reduced mod `modulus`.
    pub fn pow_mod(&self, mut exp: u64, modulus: &PolyFp) -> PolyFp {
        let mut base = self.rem(modulus);
        let mut acc = PolyFp::constant(self.p, 1).rem(modulus);
        while exp > 0 {
            if exp & 1 == 1 {
                acc = acc.mul(&base).rem(modulus);
            }
            base = base.mul(&base).rem(modulus);
            exp >>= 1;
        }
        acc
    }

    /// p-th root of a polynomial with zero derivative: every exponent with
    /// a nonzero coefficient is a multiple of p, and c^(1/p) = c in F_p.
    fn pth_root(&self) -> PolyFp {
        let p = self.p as usize;
        let mut out = Vec::with_capacity(self.coeffs.len() / p + 1);
        for (i, &c) in self.coeffs.iter().enumerate() {
            if i % p == 0 {
                out.push(c);
            } else {
                debug_assert_eq!(c, 0, "pth_root of a non-p-th-power");
            }
        }
        let mut r = PolyFp {
            p: self.p,
            coeffs: out,
        };
        r.trim();
        r
    }
}

/// Squarefree decomposition of `f`: pairs `(m, g_m)` with the `g_m` monic,
/// squarefree, pairwise coprime and `f ~ prod g_m^m`. Handles multiplicities
/// divisible by the characteristic via p-th roots, so it is correct for any
/// prime p. Sorted by multiplicity.
pub fn squarefree_decomposition(f: &PolyFp) -> Vec<(u32, PolyFp)> {
    fn go(f: &PolyFp, stride: u32, out: &mut Vec<(u32, PolyFp)>) {
        if f.deg().map_or(true, |d| d == 0) {
            return;
        }
        let p = f.p();
        let d = f.derivative();
        if d.is_zero() {
            // f = g(x^p); only possible when p <= deg f
            go(&f.pth_root(), stride * p as u32, out);
            return;
        }
        let c0 = f.gcd(&d);
        let mut w = f.div_exact(&c0).monic();
        let mut c = c0;
        let mut i = 1u32;
        while w.deg().unwrap() > 0 {
            let y = w.gcd(&c);
            let fac = w.div_exact(&y).monic();
            if fac.deg().unwrap() > 0 {
                out.push((i * stride, fac));
            }
            w = y;
            c = c.div_exact(&w);
            i += 1;
        }
        if c.deg().unwrap() > 0 {
            go(&c.pth_root(), stride * p as u32, out);
        }
    }
    assert!(!f.is_zero(), "squarefree decomposition of zero");
    let mut out = Vec::new();
    go(&f.monic(), 1, &mut out);
    out.sort_by_key(|&(m, _)| m);
    out
}

/// Distinct-degree factorization of a squarefree `f`: pairs `(d, count)`
/// meaning `count` irreducible factors of degree `d`, ascending in `d`.
pub fn distinct_degree_counts(f: &PolyFp) -> Vec<(u32, u32)> {
    let p = f.p();
    let mut v = f.monic();
    let mut out = Vec::new();
    if v.deg().map_or(true, |d| d == 0) {
        return out;
    }
    let mut h = PolyFp::x(p).rem(&v);
    let mut d = 1u32;
    while 2 * (d as usize) <= v.deg().unwrap() {
        h = h.pow_mod(p, &v); // now h = x^(p^d) mod v
        let g = h.sub(&PolyFp::x(p).rem(&v)).gcd(&v);
        if let Some(gd) = g.deg().filter(|&gd| gd > 0) {
            debug_assert_eq!(gd % d as usize, 0);
            out.push((d, (gd / d as usize) as u32));
            v = v.div_exact(&g);
            if v.deg() == Some(0) {
                return out;
            }
            h = h.rem(&v);
        }
        d += 1;
    }
    if v.deg().unwrap() > 0 {
        out.push((v.deg().unwrap() as u32, 1));
    }
    out
}

/// Full factorization shape of `f` mod p: one `(multiplicity, degree)` pair
/// per irreducible factor, sorted. The irreducibles themselves are never
/// materialized.
pub fn factor_shape(f: &PolyFp) -> Vec<(u32, u32)> {
    let mut pairs = Vec::new();
    for (m, w) in squarefree_decomposition(f) {
        for (d, cnt) in distinct_degree_counts(&w) {
            for _ in 0..cnt {
                pairs.push((m, d));
            }
        }
    }
    pairs.sort_unstable();
    pairs
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    #[test]
    fn ring_identities() {
        let p = 5;
        let a = PolyFp::new(p, vec![1, 1]); // x + 1
        let b = PolyFp::new(p, vec![2, 1]); // x + 2
        assert_eq!(a.mul(&b), PolyFp::new(p, vec![2, 3, 1]));
        let f = PolyFp::new(p, vec![3, 0, 4, 1]);
        let (q, r) = f.div_rem(&b);
        assert_eq!(q.mul(&b).add(&r), f);
        assert!(r.deg() < b.deg());
    }

    #[test]
    fn from_signed_reduces_negatives() {
        let f = PolyFp::from_signed(7, &[-1, 0, -8, 1]);
        assert_eq!(f.coeffs(), &[6, 0, 6, 1]);
    }

    #[test]
    fn gcd_of_shared_factor() {
        let p = 7;
        // (x-1)(x+1) and (x+1)^2
        let a = PolyFp::from_signed(p, &[-1, 0, 1]);
        let b = PolyFp::new(p, vec![1, 2, 1]);
        assert_eq!(a.gcd(&b), PolyFp::new(p, vec![1, 1]));
    }

    #[test]
    fn eval_matches_horner() {
        let f = PolyFp::from_signed(11, &[3, 0, 1, 5]); // 5x^3 + x^2 + 3
        assert_eq!(f.eval(2), (5 * 8 + 4 + 3) % 11);
    }

    #[test]
    fn squarefree_decomposition_tame() {
        let p = 5;
        // x * (x+1)^2 * (x+2)^3
        let f = PolyFp::new(p, vec![0, 1])
            .mul(&PolyFp::new(p, vec![1, 1]).mul(&PolyFp::new(p, vec![1, 1])))
            .mul(
                &PolyFp::new(p, vec![2, 1])
                    .pow_mod(3, &PolyFp::new(p, vec![0, 0, 0, 0, 0, 0, 0, 1])),
            );
        let sfd = squarefree_decomposition(&f);
        assert_eq!(
            sfd,
            vec![
                (1, PolyFp::new(p, vec![0, 1])),
                (2, PolyFp::new(p, vec![1, 1])),
                (3, PolyFp::new(p, vec![2, 1])),
            ]
        );
    }

    #[test]
    fn squarefree_decomposition_wild() {
        let p = 5;
        // (x+1)^5: derivative vanishes identically
        let x1 = PolyFp::new(p, vec![1, 1]);
        let modulus = PolyFp::new(p, vec![0, 0, 0, 0, 0, 0, 1]);
        let f = x1.pow_mod(5, &modulus);
        assert_eq!(squarefree_decomposition(&f), vec![(5, x1.clone())]);
        // (x+1)^5 * (x+2)^2: mixed tame/wild multiplicities
        let g = f
            .mul(&PolyFp::new(p, vec![2, 1]))
            .mul(&PolyFp::new(p, vec![2, 1]));
        let sfd = squarefree_decomposition(&g);
        assert_eq!(sfd, vec![(2, PolyFp::new(p, vec![2, 1])), (5, x1)]);
    }

    #[test]
    fn ddf_known_shapes() {
        // x^2 + 1 irreducible over F_3, split over F_5
        let f3 = PolyFp::new(3, vec![1, 0, 1]);
        assert_eq!(distinct_degree_counts(&f3), vec![(2, 1)]);
        let f5 = PolyFp::new(5, vec![1, 0, 1]);
        assert_eq!(distinct_degree_counts(&f5), vec![(1, 2)]);
        // x^3 - 2 irreducible over F_7 (2 is not a cube mod 7)
        let f7 = PolyFp::from_signed(7, &[-2, 0, 0, 1]);
        assert_eq!(distinct_degree_counts(&f7), vec![(3, 1)]);
        // x^p - x splits completely
        let fp = PolyFp::from_signed(7, &[0, -1, 0, 0, 0, 0, 0, 1]);
        assert_eq!(distinct_degree_counts(&fp), vec![(1, 7)]);
    }

    #[test]
    fn factor_shape_mixed() {
        let p = 3;
        // (x^2+1)^2 * x : over F_3, x^2+1 irreducible
        let q = PolyFp::new(p, vec![1, 0, 1]);
        let f = q.mul(&q).mul(&PolyFp::x(p));
        assert_eq!(factor_shape(&f), vec![(1, 1), (2, 2)]);
    }

    proptest! {
        /// Reassemble squarefree decomposition and check degrees.
        #[test]
        fn sfd_reassembles(pidx in 0usize..4, coeffs in proptest::collection::vec(0u64..7, 2..9)) {
            let p = [2u64, 3, 5, 7][pidx];
            let f = PolyFp::new(p, coeffs);
            prop_assume!(f.deg().map_or(false, |d| d >= 1));
            let sfd = squarefree_decomposition(&f);
            let mut prod = PolyFp::constant(p, 1);
            for (m, g) in &sfd {
                // g must be squarefree: gcd(g, g') = 1
                let d = g.derivative();
                if !d.is_zero() {
                    prop_assert_eq!(g.gcd(&d).deg(), Some(0));
                }
                for _ in 0..*m {
                    prod = prod.mul(g);
                }
            }
            prop_assert_eq!(prod, f.monic());
        }

        /// DDF degree bookkeeping: sum of d * count equals deg f for
        /// squarefree f.
        #[test]
        fn ddf_degrees_sum(pidx in 0usize..4, coeffs in proptest::collection::vec(0u64..7, 2..9)) {
            let p = [2u64, 3, 5, 7][pidx];
            let f = PolyFp::new(p, coeffs);
            prop_assume!(f.deg().map_or(false, |d| d >= 1));
            let radical = squarefree_decomposition(&f)
                .into_iter()
                .fold(PolyFp::constant(p, 1), |acc, (_, g)| acc.mul(&g));
            let total: usize = distinct_degree_counts(&radical)
                .iter()
                .map(|&(d, c)| d as usize * c as usize)
                .sum();
            prop_assert_eq!(total, radical.deg().unwrap());
        }
    }
}
