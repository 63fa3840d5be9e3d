//! One-dimensional Gauss rules computed from the Jacobi recurrence.
//!
//! Nodes are the roots of the orthonormal polynomial q_n for the weight
//! (1-x)^a (1+x)^b on [-1,1], located by a sign scan plus bisection and
//! polished with Newton steps; weights come from the Christoffel function
//! w_i = 1 / sum_{k<n} q_k(x_i)^2. Everything is computed in f64 and cast
//! to the caller's scalar type when the rule is built.

/// Recurrence coefficients for the orthonormal Jacobi polynomials.
struct JacobiRecurrence {
    mu0: f64,
    a: Vec<f64>,
    b: Vec<f64>, // b[k] multiplies q_{k-1}; b[0] unused
}

impl JacobiRecurrence {
    fn new(n: usize, alpha: f64, beta: f64) -> Self {
        let mu0 = 2f64.powf(alpha + beta + 1.0) * beta_fn(alpha + 1.0, beta + 1.0);
        let mut a = vec![0.0; n + 1];
        let mut b = vec![0.0; n + 1];
        a[0] = (beta - alpha) / (alpha + beta + 2.0);
        for k in 1..=n {
            let kf = k as f64;
            let s = 2.0 * kf + alpha + beta;
            a[k] = (beta * beta - alpha * alpha) / (s * (s + 2.0));
            let num = 4.0 * kf * (kf + alpha) * (kf + beta) * (kf + alpha + beta);
            let den = s * s * (s + 1.0) * (s - 1.0);
            b[k] = (num / den).sqrt();
        }
        JacobiRecurrence { mu0, a, b }
    }

    /// Value and derivative of q_n at x, plus the weight sum over q_0..q_{n-1}.
    fn eval(&self, n: usize, x: f64) -> (f64, f64, f64) {
        let mut q_prev = 0.0;
        let mut q = 1.0 / self.mu0.sqrt();
        let mut dq_prev = 0.0;
        let mut dq = 0.0;
        let mut christoffel = q * q;
        for k in 0..n {
            let q_next = ((x - self.a[k]) * q - self.b[k] * q_prev) / self.b[k + 1];
            let dq_next = ((x - self.a[k]) * dq + q - self.b[k] * dq_prev) / self.b[k + 1];
            q_prev = q;
            q = q_next;
            dq_prev = dq;
            dq = dq_next;
            if k + 1 < n {
                christoffel += q * q;
            }
        }
        (q, dq, christoffel)
    }
}

fn beta_fn(a: f64, b: f64) -> f64 {
    // only small integer arguments occur here
    gamma_int(a) * gamma_int(b) / gamma_int(a + b)
}

fn gamma_int(x: f64) -> f64 {
    let n = x.round() as u64;
    debug_assert!((x - n as f64).abs() < 1e-12 && n >= 1);
    (1..n).map(|k| k as f64).product::<f64>().max(1.0)
}

/// Gauss-Jacobi rule on [-1,1] for the weight (1-x)^alpha (1+x)^beta.
pub fn gauss_jacobi(n: usize, alpha: f64, beta: f64) -> (Vec<f64>, Vec<f64>) {
    assert!(n >= 1);
    let rec = JacobiRecurrence::new(n, alpha, beta);

    // sign scan: roots are simple and interior, clustered like cos near +-1
    let grid = 40 * n * n + 64;
    let mut nodes = Vec::with_capacity(n);
    let mut x_prev = -1.0 + 1e-14;
    let mut f_prev = rec.eval(n, x_prev).0;
    for i in 1..=grid {
        let x = -1.0 + 2.0 * i as f64 / grid as f64 - 1e-14;
        let f = rec.eval(n, x).0;
        if f_prev * f < 0.0 {
            let mut lo = x_prev;
            let mut hi = x;
            let mut flo = f_prev;
            for _ in 0..80 {
                let mid = 0.5 * (lo + hi);
                let fm = rec.eval(n, mid).0;
                if flo * fm <= 0.0 {
                    hi = mid;
                } else {
                    lo = mid;
                    flo = fm;
                }
            }
            let mut root = 0.5 * (lo + hi);
            for _ in 0..3 {
                let (q, dq, _) = rec.eval(n, root);
                let step = q / dq;
                if step.is_finite() {
                    root -= step;
                }
            }
            nodes.push(root);
        }
        x_prev = x;
        f_prev = f;
    }
    assert_eq!(nodes.len(), n, "gauss rule root scan missed roots");

    let weights = nodes
        .iter()
        .map(|&x| 1.0 / rec.eval(n, x).2)
        .collect::<Vec<_>>();
    (nodes, weights)
}

/// Gauss-Legendre rule mapped to [0,1] (integrates plain dx).
pub fn gauss_legendre_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(n, 0.0, 0.0);
    (
        x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|&t| 0.5 * t).collect(),
    )
}

/// Gauss rule on [0,1] for the weight s ds (radial factor of the conical map).
pub fn gauss_radial_01(n: usize) -> (Vec<f64>, Vec<f64>) {
    let (x, w) = gauss_jacobi(n, 0.0, 1.0);
    // s = (1+x)/2, s ds = (1+x)/4 dx, and the Jacobi weight already carries (1+x)
    (
        x.iter().map(|&t| 0.5 * (t + 1.0)).collect(),
        w.iter().map(|&t| 0.25 * t).collect(),
    )
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn legendre_integrates_polynomials() {
        for n in 1..=10 {
            let (x, w) = gauss_legendre_01(n);
            for p in 0..=(2 * n - 1) {
                let approx: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(p as i32)).sum();
                let exact = 1.0 / (p as f64 + 1.0);
                assert!(
                    (approx - exact).abs() < 1e-13,
                    "n={n} p={p}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn radial_rule_integrates_weighted_polynomials() {
        // integral of s * s^p over [0,1] is 1/(p+2)
        for n in 1..=8 {
            let (x, w) = gauss_radial_01(n);
            for p in 0..=(2 * n - 1) {
                let approx: f64 = x.iter().zip(&w).map(|(&xi, &wi)| wi * xi.powi(p as i32)).sum();
                let exact = 1.0 / (p as f64 + 2.0);
                assert!(
                    (approx - exact).abs() < 1e-13,
                    "n={n} p={p}: {approx} vs {exact}"
                );
            }
        }
    }

    #[test]
    fn known_two_point_legendre() {
        let (x, w) = gauss_jacobi(2, 0.0, 0.0);
        let r = 1.0 / 3f64.sqrt();
        assert!((x[0] + r).abs() < 1e-14 && (x[1] - r).abs() < 1e-14);
        assert!((w[0] - 1.0).abs() < 1e-14 && (w[1] - 1.0).abs() < 1e-14);
    }
}
