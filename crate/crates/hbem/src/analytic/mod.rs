//! Closed-form reference solutions, sphere operator symbols, the Robin
//! eigenvalue root finder and error metrics.

mod bessel;

use num_complex::Complex;

use crate::formulation::TraceSolution;
use crate::geometry::{dot, sub, Point3};
use crate::operators::OperatorKind;
use crate::quadrature::gauss_triangle;
use crate::{lit, Cplx, Error, Result, Scalar};

pub use bessel::{spherical_j, spherical_y};

/// First source point of the manufactured exterior solution.
pub fn source_one<T: Scalar>() -> Point3<T> {
    [lit(0.1), lit(0.5), lit(0.5)]
}

/// Second source point of the manufactured exterior solution.
pub fn source_two<T: Scalar>() -> Point3<T> {
    [lit(0.1), lit(0.25), lit(0.25)]
}

/// Two-point-source Helmholtz field used as manufactured Dirichlet data.
#[derive(Debug, Clone, Copy)]
pub struct PointSourceData<T: Scalar> {
    pub k: T,
}

impl<T: Scalar> PointSourceData<T> {
    pub fn sources() -> [Point3<T>; 2] {
        [source_one(), source_two()]
    }
}

/// g_D(x) = e^{ik|r1|}/|r1| + e^{ik|r2|}/|r2| with r_i = x - source_i.
pub fn point_source_field<T: Scalar>(k: T, x: Point3<T>) -> Result<Cplx<T>> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for s in PointSourceData::<T>::sources() {
        let r = sub(x, s);
        let rn = crate::geometry::norm(r);
        if rn == T::zero() {
            return Err(Error::SingularEvaluation);
        }
        let (sn, cs) = (k * rn).sin_cos();
        acc += Complex::new(cs, sn) / rn;
    }
    Ok(acc)
}

/// Normal derivative of the two-source field at x in direction n:
/// sum of (ik|r| - 1) e^{ik|r|} / |r|^3 (r . n).
pub fn point_source_neumann_trace<T: Scalar>(
    k: T,
    x: Point3<T>,
    n: Point3<T>,
) -> Result<Cplx<T>> {
    let mut acc = Complex::new(T::zero(), T::zero());
    for s in PointSourceData::<T>::sources() {
        let r = sub(x, s);
        let rn2 = dot(r, r);
        if rn2 == T::zero() {
            return Err(Error::SingularEvaluation);
        }
        let rn = rn2.sqrt();
        let (sn, cs) = (k * rn).sin_cos();
        let phase = Complex::new(cs, sn);
        let factor = Complex::new(-T::one(), k * rn) * phase / (rn2 * rn);
        acc += factor * dot(r, n);
    }
    Ok(acc)
}

/// Spherical-harmonic symbol of V or W on the unit sphere.
///
/// V_l = i k j_l(k) h_l(k); W_l = -i k^3 j_l'(k) h_l'(k). Restricted to
/// k >= 0.5 and l <= 10, where the recurrences are accurate.
pub fn sphere_symbol_oracle<T: Scalar>(kind: OperatorKind, l: u32, k: T) -> Result<Cplx<T>> {
    if l > 10 {
        return Err(Error::Config(format!("symbol oracle supports l <= 10, got {l}")));
    }
    if k < lit::<T>(0.5) {
        return Err(Error::Config(format!(
            "symbol oracle restricted to k >= 0.5, got {k}"
        )));
    }
    let (j, dj) = spherical_j(l, k);
    let (y, dy) = spherical_y(l, k);
    let h = Complex::new(j, y);
    let dh = Complex::new(dj, dy);
    match kind {
        OperatorKind::SingleLayer => Ok(Complex::new(T::zero(), k) * h * j),
        OperatorKind::Hypersingular => {
            Ok(Complex::new(T::zero(), -k * k * k) * dh * dj)
        }
        other => Err(Error::Contract(format!(
            "no sphere symbol oracle for operator {other}"
        ))),
    }
}

/// Smallest k in [0.1, 20] with k j_l'(k) + beta j_l(k) = 0, the Robin
/// wavenumber of the unit ball for mode l. Complex beta has no real Robin
/// eigenvalues, so the oracle returns None.
pub fn robin_wavenumber_oracle<T: Scalar>(l: u32, beta: Cplx<T>) -> Option<T> {
    if beta.im != T::zero() {
        return None;
    }
    let b = beta.re;
    let f = |k: T| -> T {
        let (j, dj) = spherical_j(l, k);
        k * dj + b * j
    };
    let lo = lit::<T>(0.1);
    let hi = lit::<T>(20.0);
    let steps = 4000;
    let dx = (hi - lo) / lit::<T>(steps as f64);
    let mut a = lo;
    let mut fa = f(a);
    for i in 1..=steps {
        let x = lo + dx * lit::<T>(i as f64);
        let fx = f(x);
        if fa == T::zero() {
            return Some(a);
        }
        if fa * fx < T::zero() {
            let mut left = a;
            let mut right = x;
            let mut fleft = fa;
            while right - left > lit::<T>(1e-10) {
                let mid = lit::<T>(0.5) * (left + right);
                let fm = f(mid);
                if fleft * fm <= T::zero() {
                    right = mid;
                } else {
                    left = mid;
                    fleft = fm;
                }
            }
            return Some(lit::<T>(0.5) * (left + right));
        }
        a = x;
        fa = fx;
    }
    None
}

/// L2 error metrics of a trace solution against evaluable exact traces.
#[derive(Debug, Clone, Copy)]
pub struct ErrorMetric<T: Scalar> {
    pub rel_l2_u: T,
    pub rel_l2_lambda: T,
    /// |beta|^{1/2}-weighted absolute Dirichlet misfit.
    pub penalty_l2_u: T,
    /// Set when an exact norm vanished and the corresponding field reports
    /// the absolute misfit instead of a ratio.
    pub absolute: bool,
}

/// Elementwise-quadrature relative L2(Gamma) errors. The exact traces are
/// evaluated at quadrature points of the flat elements with the element
/// normal.
pub fn relative_error<T: Scalar>(
    sol: &TraceSolution<T>,
    exact_u: impl Fn(Point3<T>, Point3<T>) -> Cplx<T>,
    exact_lambda: impl Fn(Point3<T>, Point3<T>) -> Cplx<T>,
    beta: Cplx<T>,
) -> Result<ErrorMetric<T>> {
    let space_u = sol.space_u();
    let space_l = sol.space_lambda();
    let mesh = space_u.mesh();
    let rule = gauss_triangle::<T>(6)?;
    let mut diff_u = T::zero();
    let mut norm_u = T::zero();
    let mut diff_l = T::zero();
    let mut norm_l = T::zero();
    for t in 0..mesh.n_triangles() {
        let tri = mesh.triangle(t);
        let n = mesh.normal(t);
        let two_area = mesh.area(t) + mesh.area(t);
        for (p, &w) in rule.points.iter().zip(&rule.weights) {
            let b = [T::one() - p[0] - p[1], p[0], p[1]];
            let x = [
                tri[0][0] * b[0] + tri[1][0] * b[1] + tri[2][0] * b[2],
                tri[0][1] * b[0] + tri[1][1] * b[1] + tri[2][1] * b[2],
                tri[0][2] * b[0] + tri[1][2] * b[1] + tri[2][2] * b[2],
            ];
            let scale = w * two_area;
            let uh = space_u.evaluate(sol.u_coeffs(), t, b);
            let ue = exact_u(x, n);
            diff_u += (uh - ue).norm_sqr() * scale;
            norm_u += ue.norm_sqr() * scale;
            let lh = space_l.evaluate(sol.lambda_coeffs(), t, b);
            let le = exact_lambda(x, n);
            diff_l += (lh - le).norm_sqr() * scale;
            norm_l += le.norm_sqr() * scale;
        }
    }
    let mut absolute = false;
    let rel_u = if norm_u > T::zero() {
        (diff_u / norm_u).sqrt()
    } else {
        absolute = true;
        diff_u.sqrt()
    };
    let rel_l = if norm_l > T::zero() {
        (diff_l / norm_l).sqrt()
    } else {
        absolute = true;
        diff_l.sqrt()
    };
    Ok(ErrorMetric {
        rel_l2_u: rel_u,
        rel_l2_lambda: rel_l,
        penalty_l2_u: beta.norm().sqrt() * diff_u.sqrt(),
        absolute,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use approx::assert_relative_eq;
    use num_complex::Complex64;

    #[test]
    fn sources_inside_unit_sphere() {
        for s in PointSourceData::<f64>::sources() {
            assert!(crate::geometry::norm(s) < 1.0);
        }
    }

    #[test]
    fn field_value_at_reference_point() {
        // direct evaluation with |r1| = sqrt(1.31), |r2| = sqrt(0.935)
        let v = point_source_field(2.0, [1.0, 0.0, 0.0]).unwrap();
        assert_relative_eq!(v.re, -0.942_318_300_4, max_relative = 1e-9);
        assert_relative_eq!(v.im, 1.624_572_534_1, max_relative = 1e-9);
    }

    #[test]
    fn field_is_green_kernel_sum_times_4pi() {
        let k = 3.0;
        let x = [0.2, -0.8, 0.9];
        let direct = point_source_field(k, x).unwrap();
        let via_green = (crate::operators::green_kernel(k, x, source_one()).unwrap()
            + crate::operators::green_kernel(k, x, source_two()).unwrap())
            * 4.0
            * std::f64::consts::PI;
        assert_relative_eq!(direct.re, via_green.re, max_relative = 1e-13);
        assert_relative_eq!(direct.im, via_green.im, max_relative = 1e-13);
    }

    #[test]
    fn field_errors_at_source() {
        assert!(matches!(
            point_source_field(1.0, source_one::<f64>()),
            Err(Error::SingularEvaluation)
        ));
    }

    #[test]
    fn neumann_trace_matches_finite_difference() {
        let k = 2.0;
        let x = [0.9, 0.1, -0.4];
        let n = crate::geometry::normalize([0.2, -0.7, 0.4]);
        let h = 1e-5;
        let xp = [x[0] + h * n[0], x[1] + h * n[1], x[2] + h * n[2]];
        let xm = [x[0] - h * n[0], x[1] - h * n[1], x[2] - h * n[2]];
        let fd = (point_source_field(k, xp).unwrap() - point_source_field(k, xm).unwrap())
            / (2.0 * h);
        let v = point_source_neumann_trace(k, x, n).unwrap();
        assert_relative_eq!(v.re, fd.re, max_relative = 1e-6);
        assert_relative_eq!(v.im, fd.im, max_relative = 1e-6);
    }

    #[test]
    fn neumann_trace_orthogonal_normal_is_zero() {
        // pick x so that both r1 and r2 are orthogonal to n
        // r1 = x - s1, r2 = x - s2 differ by (0, 0.25, 0.25); n orthogonal to both
        let x = [0.1, 0.75, -0.25];
        // r1 = (0, .25, -.75), r2 = (0, .5, -.5); a vector orthogonal to both:
        let n = [1.0, 0.0, 0.0];
        let v = point_source_neumann_trace(2.0, x, n).unwrap();
        assert!(v.norm() < 1e-14);
    }

    #[test]
    fn neumann_trace_laplace_limit() {
        let x = [1.0, 0.0, 0.0];
        let n = [0.0, 0.0, 1.0];
        let v = point_source_neumann_trace(1e-12, x, n).unwrap();
        let mut expected = 0.0;
        for s in PointSourceData::<f64>::sources() {
            let r = sub(x, s);
            let rn = crate::geometry::norm(r);
            expected -= dot(r, n) / (rn * rn * rn);
        }
        assert_relative_eq!(v.re, expected, max_relative = 1e-9);
        assert!(v.im.abs() < 1e-9);
    }

    #[test]
    fn field_satisfies_helmholtz_pointwise() {
        // central-difference Laplacian residual shrinks with the step
        let k = 2.0;
        let points = [[1.3, 0.2, -0.5], [0.0, 1.8, 0.3], [-1.1, -0.9, 1.2]];
        for x in points {
            let mut residuals = Vec::new();
            for &h in &[1e-3, 5e-4] {
                let u = |p: [f64; 3]| point_source_field(k, p).unwrap();
                let mut lap = Complex64::new(0.0, 0.0);
                for d in 0..3 {
                    let mut xp = x;
                    let mut xm = x;
                    xp[d] += h;
                    xm[d] -= h;
                    lap += u(xp) + u(xm);
                }
                lap = (lap - 6.0 * u(x)) / (h * h);
                let res = (-lap - k * k * u(x)).norm() / u(x).norm();
                residuals.push(res);
            }
            assert!(residuals[1] < residuals[0]);
            assert!(residuals[1] < 1e-4, "residual {}", residuals[1]);
        }
    }

    #[test]
    fn v_symbol_closed_form_l0() {
        // V symbol at l = 0, k = 2 equals j_0(2) e^{2i}
        let s = sphere_symbol_oracle(OperatorKind::SingleLayer, 0, 2.0).unwrap();
        assert_relative_eq!(s.re, -0.189_200_623_826_982, max_relative = 1e-12);
        assert_relative_eq!(s.im, 0.413_410_905_215_903, max_relative = 1e-12);
    }

    #[test]
    fn symbol_domain_guards() {
        assert!(sphere_symbol_oracle::<f64>(OperatorKind::SingleLayer, 0, 0.4).is_err());
        assert!(sphere_symbol_oracle::<f64>(OperatorKind::SingleLayer, 11, 2.0).is_err());
        assert!(sphere_symbol_oracle::<f64>(OperatorKind::DoubleLayer, 0, 2.0).is_err());
    }

    #[test]
    fn symbols_continuous_in_k() {
        // no poles for real k: scan a grid and bound the relative jumps
        for l in 0..=10u32 {
            for kind in [OperatorKind::SingleLayer, OperatorKind::Hypersingular] {
                let mut prev: Option<Complex64> = None;
                let n = 500;
                for i in 0..=n {
                    let k = 0.5 + 9.5 * i as f64 / n as f64;
                    let s = sphere_symbol_oracle(kind, l, k).unwrap();
                    assert!(s.re.is_finite() && s.im.is_finite());
                    if let Some(p) = prev {
                        assert!(
                            (s - p).norm() < 0.2 * (1.0 + p.norm()),
                            "jump at l={l} k={k}"
                        );
                    }
                    prev = Some(s);
                }
            }
        }
    }

    #[test]
    fn robin_root_l0_is_half_pi() {
        let k = robin_wavenumber_oracle(0, Complex64::new(1.0, 0.0)).unwrap();
        assert_relative_eq!(k, std::f64::consts::FRAC_PI_2, epsilon = 1e-9);
    }

    #[test]
    fn robin_root_l1_near_2744() {
        let k = robin_wavenumber_oracle(1, Complex64::new(1.0, 0.0)).unwrap();
        assert!((2.70..=2.80).contains(&k), "root {k}");
        assert_relative_eq!(k, 2.743_707_27, epsilon = 1e-6);
        // residual of the defining equation
        let (j, dj) = spherical_j(1, k);
        assert!((k * dj + j).abs() < 1e-9);
    }

    #[test]
    fn robin_complex_beta_returns_none() {
        assert!(robin_wavenumber_oracle::<f64>(1, Complex64::new(1.0, -1.0)).is_none());
    }
}
