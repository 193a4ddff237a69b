//! Gauss–Legendre rules on intervals and collapsed (Duffy) rules on triangles.

use std::f64::consts::PI;

/// Gauss–Legendre nodes and weights on `[-1, 1]`.
pub fn gauss_legendre(n: usize) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let mut nodes = vec![0.0; n];
    let mut weights = vec![0.0; n];
    for i in 0..n.div_ceil(2) {
        let mut x = (PI * (i as f64 + 0.75) / (n as f64 + 0.5)).cos();
        let mut dp = 0.0;
        for _ in 0..100 {
            // Legendre recurrence for P_n(x) and P_n'(x)
            let (mut p0, mut p1) = (1.0, x);
            for k in 2..=n {
                let k = k as f64;
                let p2 = ((2.0 * k - 1.0) * x * p1 - (k - 1.0) * p0) / k;
                p0 = p1;
                p1 = p2;
            }
            let pn = if n == 1 { x } else { p1 };
            let pn1 = if n == 1 { 1.0 } else { p0 };
            dp = n as f64 * (x * pn - pn1) / (x * x - 1.0);
            let dx = pn / dp;
            x -= dx;
            if dx.abs() < 1e-16 {
                break;
            }
        }
        if n == 1 {
            nodes[0] = 0.0;
            weights[0] = 2.0;
            break;
        }
        nodes[i] = -x;
        nodes[n - 1 - i] = x;
        let w = 2.0 / ((1.0 - x * x) * dp * dp);
        weights[i] = w;
        weights[n - 1 - i] = w;
    }
    (nodes, weights)
}

/// Gauss–Legendre on `[a, b]`.
pub fn gauss_legendre_on(n: usize, a: f64, b: f64) -> Vec<(f64, f64)> {
    let (x, w) = gauss_legendre(n);
    let half = 0.5 * (b - a);
    x.iter()
        .zip(&w)
        .map(|(&xi, &wi)| (a + half * (xi + 1.0), half * wi))
        .collect()
}

/// Quadrature on the reference triangle `{(s, t): s, t >= 0, s + t <= 1}`,
/// returned as `(s, t, weight)`. Exact for polynomials of total degree
/// `<= 2 n - 2`.
pub fn triangle_rule(n: usize) -> Vec<(f64, f64, f64)> {
    let line = gauss_legendre_on(n, 0.0, 1.0);
    let mut out = Vec::with_capacity(n * n);
    for &(u, wu) in &line {
        for &(v, wv) in &line {
            out.push((u, v * (1.0 - u), wu * wv * (1.0 - u)));
        }
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials_exactly() {
        for n in 1..12 {
            let rule = gauss_legendre_on(n, 0.0, 2.0);
            for p in 0..(2 * n) {
                let got: f64 = rule.iter().map(|(x, w)| w * x.powi(p as i32)).sum();
                let exact = 2f64.powi(p as i32 + 1) / (p as f64 + 1.0);
                assert!((got - exact).abs() < 1e-12 * exact, "n={n} p={p}");
            }
        }
    }

    #[test]
    fn triangle_rule_moments() {
        // int s^a t^b over the reference triangle = a! b! / (a + b + 2)!
        let fact = |k: u32| (1..=k).map(f64::from).product::<f64>();
        let rule = triangle_rule(5);
        for a in 0..5u32 {
            for b in 0..(9 - a) {
                let got: f64 = rule.iter().map(|(s, t, w)| w * s.powi(a as i32) * t.powi(b as i32)).sum();
                let exact = fact(a) * fact(b) / fact(a + b + 2);
                assert!((got - exact).abs() < 1e-14, "a={a} b={b}");
            }
        }
    }
}
