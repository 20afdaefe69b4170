// Independent reference pipeline for cubic field tables: monic generator
// search inside Hunter's bound, followed by round-2 (Pohst–Zassenhaus)
// maximalization of Z[theta] to obtain the field discriminant.  It shares no
// arithmetic with the form-based enumeration in the library; the integration
// tests certify that the two pipelines agree exactly.
#![allow(dead_code)] // included by several test binaries, each using a subset

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{ToPrimitive, Zero};
use std::sync::OnceLock;

/// Hermite constant gamma_2 = 2/sqrt(3), the planar lattice packing bound.
const HERMITE_2: f64 = 1.154_700_538_379_251_5;

/// One isomorphism class found by the reference search.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleField {
    pub d_k: i64,
    /// Ascending coefficients of a monic generator; last entry is 1.
    pub poly: [i64; 4],
}

pub fn signature(d_k: i64) -> (u32, u32) {
    if d_k < 0 {
        (1, 1)
    } else {
        (3, 0)
    }
}

// ---------------------------------------------------------------------
// Elementary number theory helpers (deliberately re-implemented here)

fn small_primes() -> &'static [u64] {
    static PRIMES: OnceLock<Vec<u64>> = OnceLock::new();
    PRIMES.get_or_init(|| {
        // Enough to trial-divide any discriminant the search box can produce.
        let bound = 40_000usize;
        let mut composite = vec![false; bound + 1];
        let mut out = Vec::new();
        for n in 2..=bound {
            if !composite[n] {
                out.push(n as u64);
                let mut k = n * n;
                while k <= bound {
                    composite[k] = true;
                    k += n;
                }
            }
        }
        out
    })
}

/// Discriminant of the monic cubic x^3 + c[2] x^2 + c[1] x + c[0].
pub fn cubic_disc(c: &[i64; 4]) -> i128 {
    assert_eq!(c[3], 1);
    let (c0, c1, c2) = (c[0] as i128, c[1] as i128, c[2] as i128);
    18 * c2 * c1 * c0 + c2 * c2 * c1 * c1 - 4 * c1 * c1 * c1 - 4 * c2 * c2 * c2 * c0 - 27 * c0 * c0
}

/// Primes whose square divides n, and n divided by its largest square divisor.
fn square_part(n: u64) -> (Vec<u64>, u64) {
    let mut rem = n;
    let mut square_primes = Vec::new();
    let mut kernel = 1u64;
    for &p in small_primes() {
        if p * p > rem {
            break;
        }
        if rem % p == 0 {
            let mut v = 0u32;
            while rem % p == 0 {
                rem /= p;
                v += 1;
            }
            if v >= 2 {
                square_primes.push(p);
            }
            if v % 2 == 1 {
                kernel *= p;
            }
        }
    }
    // Whatever survives trial division is 1 or a prime appearing once.
    (square_primes, kernel * rem)
}

/// A monic integer cubic is reducible over Q iff it has an integer root
/// dividing its constant term.
fn has_rational_root(c: &[i64; 4]) -> bool {
    let eval = |x: i128| ((x + c[2] as i128) * x + c[1] as i128) * x + c[0] as i128;
    let c0 = (c[0] as i128).unsigned_abs();
    let mut i = 1u128;
    while i * i <= c0 {
        if c0 % i == 0 {
            for d in [i as i128, (c0 / i) as i128] {
                if eval(d) == 0 || eval(-d) == 0 {
                    return true;
                }
            }
        }
        i += 1;
    }
    false
}

// ---------------------------------------------------------------------
// Exact 3x3 linear algebra over Z

type Mat = [[BigInt; 3]; 3];
type Triple = [BigInt; 3];

fn zero_triple() -> Triple {
    std::array::from_fn(|_| BigInt::ZERO)
}

fn identity_mat() -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| BigInt::from((i == j) as i64)))
}

fn det3(m: &Mat) -> BigInt {
    // Signed cofactor along the first row via cyclic index shifts.
    (0..3).map(|j| &m[0][j] * cofactor(m, 0, j)).sum()
}

fn cofactor(m: &Mat, r: usize, c: usize) -> BigInt {
    let (r1, r2) = ((r + 1) % 3, (r + 2) % 3);
    let (c1, c2) = ((c + 1) % 3, (c + 2) % 3);
    &m[r1][c1] * &m[r2][c2] - &m[r1][c2] * &m[r2][c1]
}

/// Adjugate: m * adj(m) = det(m) * I.
fn adj3(m: &Mat) -> Mat {
    std::array::from_fn(|i| std::array::from_fn(|j| cofactor(m, j, i)))
}

fn exact_div(n: BigInt, d: &BigInt) -> BigInt {
    let (q, r) = n.div_rem(d);
    assert!(r.is_zero(), "non-integral quotient in order arithmetic");
    q
}

fn bmod(x: &BigInt, p: u64) -> u64 {
    x.mod_floor(&BigInt::from(p)).to_u64().unwrap()
}

// ---------------------------------------------------------------------
// Round-2 maximalization

/// An order in Q[x]/(f): rows of `m`, divided by `den`, are a basis written
/// in the power basis {1, theta, theta^2}.
#[derive(Clone)]
struct Order {
    m: Mat,
    den: BigInt,
}

impl Order {
    fn equation_order() -> Self {
        Order {
            m: identity_mat(),
            den: BigInt::from(1),
        }
    }
}

/// Product of two elements in power coordinates, reduced mod f.
fn polymul_reduce(u: &Triple, v: &Triple, f: &[i64; 4]) -> Triple {
    let mut q: [BigInt; 5] = std::array::from_fn(|_| BigInt::ZERO);
    for i in 0..3 {
        for j in 0..3 {
            q[i + j] += &u[i] * &v[j];
        }
    }
    // theta^k = -c2 theta^(k-1) - c1 theta^(k-2) - c0 theta^(k-3)
    for k in [4usize, 3] {
        let t = std::mem::replace(&mut q[k], BigInt::ZERO);
        q[k - 1] -= &t * f[2];
        q[k - 2] -= &t * f[1];
        q[k - 3] -= &t * f[0];
    }
    [q[0].clone(), q[1].clone(), q[2].clone()]
}

/// Structure constants of the order: table[i][j] holds the basis coordinates
/// of w_i * w_j (always integral), plus the coordinates of 1.
fn mult_table(ord: &Order, f: &[i64; 4]) -> ([[Triple; 3]; 3], Triple) {
    let det = det3(&ord.m);
    let adj = adj3(&ord.m);
    let scale = &det * &ord.den;
    let to_coords = |v: Triple| -> Triple {
        std::array::from_fn(|k| {
            let num: BigInt = (0..3).map(|l| &v[l] * &adj[l][k]).sum();
            exact_div(num, &scale)
        })
    };
    let table = std::array::from_fn(|i| {
        std::array::from_fn(|j| to_coords(polymul_reduce(&ord.m[i], &ord.m[j], f)))
    });
    // 1 has power coordinates (1, 0, 0); coords = den * adj_row_0 / det.
    let one = std::array::from_fn(|k| exact_div(&adj[0][k] * &ord.den, &det));
    (table, one)
}

// --- dense linear algebra mod p on n x 3 matrices ---

fn modpow(mut b: u64, mut e: u64, p: u64) -> u64 {
    let mut acc = 1u128;
    let mut bb = b as u128 % p as u128;
    while e > 0 {
        if e & 1 == 1 {
            acc = acc * bb % p as u128;
        }
        bb = bb * bb % p as u128;
        e >>= 1;
    }
    b = acc as u64;
    b
}

fn modinv(a: u64, p: u64) -> u64 {
    modpow(a, p - 2, p)
}

/// Reduced row echelon form; returns the nonzero rows and their pivot columns.
fn rref(mut rows: Vec<[u64; 3]>, p: u64) -> (Vec<[u64; 3]>, Vec<usize>) {
    let mut pivots = Vec::new();
    let mut r = 0usize;
    for col in 0..3 {
        let Some(sel) = (r..rows.len()).find(|&i| rows[i][col] % p != 0) else {
            continue;
        };
        rows.swap(r, sel);
        let inv = modinv(rows[r][col] % p, p) as u128;
        for x in rows[r].iter_mut() {
            *x = (*x as u128 * inv % p as u128) as u64;
        }
        for i in 0..rows.len() {
            if i != r && rows[i][col] % p != 0 {
                let f = rows[i][col] as u128;
                for k in 0..3 {
                    let sub = f * rows[r][k] as u128 % p as u128;
                    rows[i][k] = ((rows[i][k] as u128 + p as u128 - sub) % p as u128) as u64;
                }
            }
        }
        pivots.push(col);
        r += 1;
        if r == rows.len() {
            break;
        }
    }
    rows.truncate(r);
    (rows, pivots)
}

/// Basis of {c in F_p^3 : rows * c = 0}.
fn nullspace(rows: Vec<[u64; 3]>, p: u64) -> Vec<[u64; 3]> {
    let (r, pivots) = rref(rows, p);
    let mut basis = Vec::new();
    for free in (0..3).filter(|c| !pivots.contains(c)) {
        let mut v = [0u64; 3];
        v[free] = 1;
        for (row, &pc) in r.iter().zip(&pivots) {
            v[pc] = (p - row[free] % p) % p;
        }
        basis.push(v);
    }
    basis
}

/// Upper-triangular basis of {x in Z^3 : x mod p lies in the given subspace};
/// pivot columns keep their lifted echelon row, free columns contribute p*e_j.
fn lattice_from_subspace(vecs: Vec<[u64; 3]>, p: u64) -> [[i64; 3]; 3] {
    let (r, pivots) = rref(vecs, p);
    let mut rows = [[0i64; 3]; 3];
    for j in 0..3 {
        if let Some(pos) = pivots.iter().position(|&pc| pc == j) {
            rows[j] = [r[pos][0] as i64, r[pos][1] as i64, r[pos][2] as i64];
        } else {
            rows[j][j] = p as i64;
        }
    }
    rows
}

/// Solve z * U = v for an upper-triangular lattice basis U; exact by
/// construction because v lies in the lattice.
fn solve_triangular(u: &[[i64; 3]; 3], v: &Triple) -> Triple {
    let mut z = zero_triple();
    let z0 = exact_div(v[0].clone(), &BigInt::from(u[0][0]));
    let z1 = exact_div(&v[1] - &z0 * u[0][1], &BigInt::from(u[1][1]));
    let z2 = exact_div(
        &v[2] - &z0 * u[0][2] - &z1 * u[1][2],
        &BigInt::from(u[2][2]),
    );
    z[0] = z0;
    z[1] = z1;
    z[2] = z2;
    z
}

/// Images of the basis under x -> x^(p^e) with p^e >= 3, as matrix rows.
fn frobenius_rows(tp: &[[[u64; 3]; 3]; 3], one: &[u64; 3], p: u64) -> [[u64; 3]; 3] {
    let mul = |a: &[u64; 3], b: &[u64; 3]| -> [u64; 3] {
        let mut r = [0u128; 3];
        for i in 0..3 {
            for j in 0..3 {
                let c = a[i] as u128 * b[j] as u128 % p as u128;
                for (k, acc) in r.iter_mut().enumerate() {
                    *acc = (*acc + c * tp[i][j][k] as u128) % p as u128;
                }
            }
        }
        [r[0] as u64, r[1] as u64, r[2] as u64]
    };
    let exponent = if p == 2 { 4 } else { p };
    std::array::from_fn(|i| {
        let mut base: [u64; 3] = [0; 3];
        base[i] = 1;
        let mut acc = *one;
        let mut e = exponent;
        while e > 0 {
            if e & 1 == 1 {
                acc = mul(&acc, &base);
            }
            base = mul(&base, &base);
            e >>= 1;
        }
        acc
    })
}

/// One round-2 pass: grow the order at p until it is p-maximal.
fn p_maximalize(mut ord: Order, f: &[i64; 4], p: u64) -> Order {
    for _round in 0..64 {
        let (table, one) = mult_table(&ord, f);
        let tp: [[[u64; 3]; 3]; 3] = std::array::from_fn(|i| {
            std::array::from_fn(|j| std::array::from_fn(|k| bmod(&table[i][j][k], p)))
        });
        let onep = std::array::from_fn(|k| bmod(&one[k], p));
        let frob = frobenius_rows(&tp, &onep, p);
        // Radical of O/pO = kernel of Frobenius: rows of the condition matrix
        // are the columns of frob.
        let conditions: Vec<[u64; 3]> = (0..3)
            .map(|k| [frob[0][k], frob[1][k], frob[2][k]])
            .collect();
        let radical = nullspace(conditions, p);
        let u = lattice_from_subspace(radical, p);
        // Ring of multipliers: y with y * I <= p * I, i.e. the U-basis
        // coordinates of every y * u_j vanish mod p.
        let mut cond: Vec<[u64; 3]> = Vec::with_capacity(9);
        for j in 0..3 {
            let mut z_rows: [Triple; 3] = std::array::from_fn(|_| zero_triple());
            for (i, z_row) in z_rows.iter_mut().enumerate() {
                let mut prod = zero_triple();
                for k in 0..3 {
                    for (slot, t) in prod.iter_mut().zip(&table[i][k]) {
                        *slot += t * u[j][k];
                    }
                }
                *z_row = solve_triangular(&u, &prod);
            }
            for l in 0..3 {
                cond.push([
                    bmod(&z_rows[0][l], p),
                    bmod(&z_rows[1][l], p),
                    bmod(&z_rows[2][l], p),
                ]);
            }
        }
        let kernel = nullspace(cond, p);
        if kernel.is_empty() {
            return ord; // p-maximal
        }
        let t3 = lattice_from_subspace(kernel, p);
        let mut nm: Mat = std::array::from_fn(|i| {
            std::array::from_fn(|j| (0..3).map(|k| &ord.m[k][j] * t3[i][k]).sum())
        });
        let mut nden = &ord.den * p;
        // Strip common content to keep entries small.
        let mut g = nden.clone();
        for row in &nm {
            for x in row {
                g = g.gcd(x);
            }
        }
        if g > BigInt::from(1) {
            for row in nm.iter_mut() {
                for x in row.iter_mut() {
                    *x = exact_div(std::mem::replace(x, BigInt::ZERO), &g);
                }
            }
            nden = exact_div(nden, &g);
        }
        ord = Order { m: nm, den: nden };
    }
    panic!("round-2 failed to terminate at p = {p}");
}

fn maximal_order_disc_with(c: &[i64; 4], square_primes: &[u64]) -> i128 {
    let disc = cubic_disc(c);
    assert!(disc != 0, "singular cubic");
    let mut ord = Order::equation_order();
    for &p in square_primes {
        ord = p_maximalize(ord, c, p);
    }
    let det = det3(&ord.m);
    let den2 = &ord.den * &ord.den;
    let den6 = &den2 * &den2 * &den2;
    let d = exact_div(BigInt::from(disc) * &det * &det, &den6)
        .to_i128()
        .unwrap();
    debug_assert!(d.rem_euclid(4) <= 1, "discriminant violates Stickelberger");
    d
}

/// Field discriminant of the maximal order containing Z[x]/(f), f monic cubic.
pub fn oracle_disc(c: &[i64; 4]) -> i128 {
    let disc = cubic_disc(c);
    assert!(disc != 0 && !has_rational_root(c));
    let (square_primes, _) = square_part(disc.unsigned_abs().try_into().unwrap());
    maximal_order_disc_with(c, &square_primes)
}

// ---------------------------------------------------------------------
// Factor shapes mod p, used only to separate same-discriminant fields

/// Degrees and multiplicities of the irreducible factors of the monic cubic
/// mod p, sorted: (multiplicity, degree) per factor.
pub fn poly_shape(c: &[i64; 4], p: u64) -> Vec<(u8, u8)> {
    let pi = p as i128;
    // Descending coefficients for synthetic division.
    let mut cur: Vec<i128> = vec![
        1,
        (c[2] as i128).rem_euclid(pi),
        (c[1] as i128).rem_euclid(pi),
        (c[0] as i128).rem_euclid(pi),
    ];
    let eval = |poly: &[i128], x: i128| -> i128 {
        poly.iter()
            .fold(0i128, |acc, &co| (acc * x + co).rem_euclid(pi))
    };
    let mut shape: Vec<(u8, u8)> = Vec::new();
    for r in 0..pi {
        let mut mult = 0u8;
        while cur.len() > 1 && eval(&cur, r) == 0 {
            // Synthetic division by (x - r).
            let mut q = Vec::with_capacity(cur.len() - 1);
            let mut carry = 0i128;
            for &co in &cur[..cur.len() - 1] {
                carry = (carry * r + co).rem_euclid(pi);
                q.push(carry);
            }
            cur = q;
            mult += 1;
        }
        if mult > 0 {
            shape.push((mult, 1));
        }
        if cur.len() == 1 {
            break;
        }
    }
    match cur.len() {
        1 => {}
        3 => shape.push((1, 2)),
        4 => shape.push((1, 3)),
        _ => unreachable!("linear factor left behind by the root scan"),
    }
    shape.sort_unstable();
    shape
}

const FP_PRIME_COUNT: usize = 40;

pub fn valuation(mut n: u128, p: u64) -> u32 {
    let mut v = 0;
    while n % p as u128 == 0 {
        n /= p as u128;
        v += 1;
    }
    v
}

/// Splitting fingerprint: factor shape at each of the first 40 primes, masked
/// (None) wherever p divides the index [O_K : Z[theta]], because there the
/// shape of f mod p need not match the splitting of p.
fn fingerprint(poly: &[i64; 4], d_k: i64) -> Vec<Option<Vec<(u8, u8)>>> {
    let disc_f = cubic_disc(poly).unsigned_abs();
    let dk_abs = d_k.unsigned_abs() as u128;
    small_primes()[..FP_PRIME_COUNT]
        .iter()
        .map(|&p| {
            if valuation(disc_f, p) == valuation(dk_abs, p) {
                Some(poly_shape(poly, p))
            } else {
                None
            }
        })
        .collect()
}

/// Same field iff the fingerprints agree wherever both are unmasked.
/// Distinct cubic fields sharing a discriminant always disagree at a small
/// unmasked prime (arithmetic equivalence implies isomorphism in degree 3).
fn same_field(a: &[Option<Vec<(u8, u8)>>], b: &[Option<Vec<(u8, u8)>>]) -> bool {
    let mut common = 0usize;
    for (x, y) in a.iter().zip(b) {
        if let (Some(sx), Some(sy)) = (x, y) {
            if sx != sy {
                return false;
            }
            common += 1;
        }
    }
    assert!(common >= 20, "fingerprint overlap too small to decide");
    true
}

// ---------------------------------------------------------------------
// Hunter-bound enumeration

/// Every cubic field with |d_K| < x, one record per isomorphism class.
/// Generators theta are searched over the Hunter box: trace t in {0, 1},
/// sum |theta_i|^2 <= t^2/3 + gamma_2 sqrt(|d_K|/3), which bounds the
/// remaining coefficients s = e_2 and m = e_3 of x^3 - t x^2 + s x - m.
pub fn enumerate_oracle(x: u64) -> Vec<OracleField> {
    assert!((2..=2_000_000).contains(&x), "oracle bound out of range");
    let mut raw: Vec<(i64, [i64; 4])> = Vec::new();
    for t in 0..=1i64 {
        let tt = (t * t) as f64;
        let b = tt / 3.0 + HERMITE_2 * (((x - 1) as f64) / 3.0).sqrt() + 1e-9;
        let s_hi = ((tt + b) / 2.0).floor() as i64 + 1;
        let s_lo = ((tt - b) / 2.0).ceil() as i64 - 1;
        let m_max = (b / 3.0).powf(1.5).floor() as i64 + 1;
        for s in s_lo..=s_hi {
            for m in -m_max..=m_max {
                if m == 0 {
                    continue;
                }
                let c = [-m, s, -t, 1];
                let disc = cubic_disc(&c);
                if disc == 0 {
                    continue;
                }
                let adisc = disc.unsigned_abs() as u64;
                let (square_primes, kernel) = square_part(adisc);
                // |d_K| is a multiple of the squarefree kernel of disc(f).
                if kernel >= x {
                    continue;
                }
                if has_rational_root(&c) {
                    continue;
                }
                let d_k = if square_primes.is_empty() {
                    disc
                } else {
                    maximal_order_disc_with(&c, &square_primes)
                };
                if d_k.unsigned_abs() < x as u128 {
                    raw.push((d_k as i64, c));
                }
            }
        }
    }

    // Group by discriminant, then split groups by splitting fingerprint.
    raw.sort_unstable();
    let mut out: Vec<OracleField> = Vec::new();
    let mut i = 0;
    while i < raw.len() {
        let d_k = raw[i].0;
        let mut j = i;
        while j < raw.len() && raw[j].0 == d_k {
            j += 1;
        }
        if j - i == 1 {
            out.push(OracleField {
                d_k,
                poly: raw[i].1,
            });
        } else {
            let mut classes: Vec<(Vec<Option<Vec<(u8, u8)>>>, [i64; 4])> = Vec::new();
            for (_, poly) in &raw[i..j] {
                let fp = fingerprint(poly, d_k);
                if !classes.iter().any(|(cfp, _)| same_field(cfp, &fp)) {
                    classes.push((fp, *poly));
                }
            }
            for (_, poly) in classes {
                out.push(OracleField { d_k, poly });
            }
        }
        i = j;
    }
    out.sort_unstable_by_key(|f| (f.d_k.unsigned_abs(), f.d_k, f.poly));
    out
}
