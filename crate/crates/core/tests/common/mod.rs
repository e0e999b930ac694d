//! Test-only reference routines, deliberately simpler than the library ones.
#![allow(dead_code)]

use marcumq::scalar::gamma_q;

pub fn rel(x: f64, want: f64) -> f64 {
    if want == 0.0 {
        x.abs()
    } else {
        ((x - want) / want).abs()
    }
}

/// Gauss-Legendre nodes and weights on [-1, 1] by Newton iteration.
fn gauss_legendre(n: usize) -> Vec<(f64, f64)> {
    let mut out = Vec::with_capacity(n);
    for i in 0..n {
        let mut x = (std::f64::consts::PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let kf = k as f64;
                let p2 = ((2.0 * kf - 1.0) * x * p1 - (kf - 1.0) * p0) / kf;
                p0 = p1;
                p1 = p2;
            }
            dp = n as f64 * (x * p1 - p0) / (x * x - 1.0);
            let dx = p1 / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        out.push((x, 2.0 / ((1.0 - x * x) * dp * dp)));
    }
    out
}

/// Composite 20-point Gauss-Legendre, doubling panels until two successive
/// results agree to about 1e-14.
pub fn integrate<F: Fn(f64) -> f64>(f: F, lo: f64, hi: f64) -> f64 {
    let rule = gauss_legendre(20);
    let composite = |panels: usize| {
        let h = (hi - lo) / panels as f64;
        let mut s = 0.0;
        for p in 0..panels {
            let mid = lo + (p as f64 + 0.5) * h;
            for &(x, w) in &rule {
                s += w * f(mid + 0.5 * h * x);
            }
        }
        0.5 * h * s
    };
    let mut panels = 4;
    let mut prev = composite(panels);
    loop {
        panels *= 2;
        let cur = composite(panels);
        if (cur - prev).abs() <= 1e-14 * cur.abs() || panels >= 1 << 14 {
            return cur;
        }
        prev = cur;
    }
}

/// `I_nu(x)` by its power series, summed from the smallest term upward.
pub fn bessel_i_series(nu: f64, x: f64) -> f64 {
    let q = 0.25 * x * x;
    let mut terms = Vec::new();
    let mut t = (nu * (0.5 * x).ln() - libm::lgamma(nu + 1.0)).exp();
    let mut k = 0.0;
    loop {
        terms.push(t);
        k += 1.0;
        t *= q / (k * (k + nu));
        if t < 1e-18 * terms.iter().sum::<f64>() && k > q.sqrt() {
            break;
        }
    }
    terms.iter().rev().sum()
}

/// `Q_nu(a, b)` as a Poisson mixture of central tails,
/// `sum_j Poisson(j; a^2/2) Q_{nu+j}(0, b)`, stopped past both the Poisson and gamma peaks once terms fall below 1e-18 of the sum.
pub fn marcum_poisson(nu: f64, a: f64, b: f64) -> f64 {
    let lambda = 0.5 * a * a;
    let x = 0.5 * b * b;
    let mut sum = 0.0;
    let mut j = 0u32;
    loop {
        let jf = f64::from(j);
        let w = (-lambda + jf * lambda.ln() - libm::lgamma(jf + 1.0)).exp();
        let w = if lambda == 0.0 { if j == 0 { 1.0 } else { 0.0 } } else { w };
        let term = w * gamma_q(nu + jf, x).unwrap();
        sum += term;
        j += 1;
        if (jf > lambda + x && term <= 1e-18 * sum) || j > 5000 {
            return sum;
        }
    }
}
