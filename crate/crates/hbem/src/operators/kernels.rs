//! Helmholtz kernel evaluation.

use num_complex::Complex;

use crate::geometry::{dot, sub, Point3};
use crate::{lit, Cplx, Error, Result, Scalar};

/// e^{ik|x-y|} / (4 pi |x-y|)
pub fn green_kernel<T: Scalar>(k: T, x: Point3<T>, y: Point3<T>) -> Result<Cplx<T>> {
    let d = sub(x, y);
    let r2 = dot(d, d);
    if r2 == T::zero() {
        return Err(Error::SingularEvaluation);
    }
    let r = r2.sqrt();
    Ok(green_of_r(k, r))
}

#[inline]
pub(crate) fn green_of_r<T: Scalar>(k: T, r: T) -> Cplx<T> {
    let inv_4pi = lit::<T>(0.25) * T::FRAC_1_PI();
    let (s, c) = (k * r).sin_cos();
    Complex::new(c, s) * (inv_4pi / r)
}

/// Normal derivative of the kernel in its second argument,
/// dG/dnu_y = e^{ikr} (ikr - 1) (y - x) . n / (4 pi r^3).
pub fn green_normal_derivative<T: Scalar>(
    k: T,
    x: Point3<T>,
    y: Point3<T>,
    n: Point3<T>,
) -> Result<Cplx<T>> {
    let d = sub(x, y);
    let r2 = dot(d, d);
    if r2 == T::zero() {
        return Err(Error::SingularEvaluation);
    }
    let r = r2.sqrt();
    let g = green_of_r(k, r);
    // q = G (ikr - 1) / r^2; dG/dnu_y = -q (x - y) . n
    let q = g * Complex::new(-T::one(), k * r) / r2;
    Ok(-q * dot(d, n))
}

/// All kernel values an operator pass can need at one point pair.
#[derive(Debug, Clone, Copy)]
pub(crate) struct KernelValues<T: Scalar> {
    /// G(x, y)
    pub g: Cplx<T>,
    /// dG/dnu_y with the trial-side normal
    pub dg_ny: Cplx<T>,
    /// dG/dnu_x with the test-side normal
    pub dg_nx: Cplx<T>,
}

/// Evaluates the kernel bundle for x on the test element and y on the trial
/// element. `need_derivs` skips the directional parts when only G is used.
#[inline]
pub(crate) fn kernel_bundle<T: Scalar>(
    k: T,
    x: Point3<T>,
    y: Point3<T>,
    n_test: Point3<T>,
    n_trial: Point3<T>,
    need_derivs: bool,
) -> KernelValues<T> {
    let d = sub(x, y);
    let r2 = dot(d, d);
    let r = r2.sqrt();
    let g = green_of_r(k, r);
    if !need_derivs {
        let zero = Complex::new(T::zero(), T::zero());
        return KernelValues {
            g,
            dg_ny: zero,
            dg_nx: zero,
        };
    }
    let q = g * Complex::new(-T::one(), k * r) / r2;
    KernelValues {
        g,
        dg_ny: -q * dot(d, n_trial),
        dg_nx: q * dot(d, n_test),
    }
}
