//! Special functions needed at runtime: the Riemann zeta function on the
//! real line (Euler–Maclaurin, valid well left of s = 1), the log-gamma
//! function (Stirling with argument shift), and Gauss–Legendre quadrature
//! nodes.
//!
//! All routines target full f64 accuracy so downstream tolerances are
//! limited by statistics, not by these evaluations.

/// (B_{2k}, (2k)!) for k = 1..=7.
const BERNOULLI: [(f64, f64); 7] = [
    (1.0 / 6.0, 2.0),
    (-1.0 / 30.0, 24.0),
    (1.0 / 42.0, 720.0),
    (-1.0 / 30.0, 40_320.0),
    (5.0 / 66.0, 3_628_800.0),
    (-691.0 / 2730.0, 479_001_600.0),
    (7.0 / 6.0, 87_178_291_200.0),
];

/// Riemann zeta for real s with s != 1.
///
/// Arguments right of -1/4 use Euler–Maclaurin directly; left of that the
/// reflection formula zeta(s) = 2^s pi^(s-1) sin(pi s/2) Gamma(1-s)
/// zeta(1-s) avoids the catastrophic cancellation Euler–Maclaurin suffers
/// for negative s (its partial sums grow like N^(1+|s|)).
pub fn zeta(s: f64) -> f64 {
    assert!(s != 1.0, "zeta has a pole at s = 1");
    assert!(s > -100.0, "reflection through Gamma(1 - s) overflows");
    if s < -0.25 {
        let pi = std::f64::consts::PI;
        return 2f64.powf(s)
            * pi.powf(s - 1.0)
            * (pi * s / 2.0).sin()
            * ln_gamma(1.0 - s).exp()
            * zeta_euler_maclaurin(1.0 - s);
    }
    zeta_euler_maclaurin(s)
}

fn zeta_euler_maclaurin(s: f64) -> f64 {
    let n = 50.0f64;
    let mut sum = 0.0;
    let mut i = 1.0;
    while i < n {
        sum += i.powf(-s);
        i += 1.0;
    }
    sum += n.powf(1.0 - s) / (s - 1.0);
    sum += 0.5 * n.powf(-s);
    // sum_k B_2k/(2k)! * s(s+1)...(s+2k-2) * n^(-s-2k+1)
    let mut poch = s;
    let mut npow = n.powf(-s - 1.0);
    for (k, &(b, fact)) in BERNOULLI.iter().enumerate() {
        sum += b / fact * poch * npow;
        let j = 2.0 * (k as f64 + 1.0);
        poch *= (s + j - 1.0) * (s + j);
        npow /= n * n;
    }
    sum
}

/// Natural log of the gamma function for x > 0.
///
/// Stirling's series after shifting the argument up to >= 12, where the
/// B_14 tail term is below 1e-16 relative.
pub fn ln_gamma(x: f64) -> f64 {
    assert!(x > 0.0, "ln_gamma requires a positive argument");
    let mut shift = 0.0f64;
    let mut z = x;
    while z < 12.0 {
        shift += z.ln();
        z += 1.0;
    }
    let mut s = (z - 0.5) * z.ln() - z + 0.5 * (2.0 * std::f64::consts::PI).ln();
    let mut zpow = z;
    for (k, &(b, _)) in BERNOULLI.iter().enumerate() {
        let two_k = 2.0 * (k as f64 + 1.0);
        s += b / (two_k * (two_k - 1.0) * zpow);
        zpow *= z * z;
    }
    s - shift
}

/// Nodes and weights of n-point Gauss–Legendre quadrature on [-1, 1].
/// Exact for polynomials of degree <= 2n - 1.
pub fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    assert!(n >= 1);
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        // Chebyshev-like initial guess, then Newton on P_n
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // evaluate P_n and P_n' by the three-term recurrence
            let mut p0 = 1.0f64;
            let mut p1 = x;
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-15 {
                break;
            }
        }
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        out.push((x, w));
    }
    out.sort_by(|a, b| a.0.partial_cmp(&b.0).unwrap());
    out
}

/// Integrate `f` over [a, b] with composite 16-point Gauss–Legendre on
/// `segments` equal subintervals.
pub fn integrate<F: Fn(f64) -> f64>(f: &F, a: f64, b: f64, segments: usize) -> f64 {
    let nodes = gauss_legendre(16);
    let h = (b - a) / segments as f64;
    let mut total = 0.0;
    for s in 0..segments {
        let lo = a + s as f64 * h;
        let mid = lo + 0.5 * h;
        let half = 0.5 * h;
        let mut acc = 0.0;
        for &(x, w) in &nodes {
            acc += w * f(mid + half * x);
        }
        total += acc * half;
    }
    total
}
