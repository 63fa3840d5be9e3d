//! Spherical Bessel functions: closed forms for l <= 2, upward recurrence
//! above. Adequate for the small orders and moderate arguments the sphere
//! oracles use.

use crate::{lit, Scalar};

/// j_l(x) together with its derivative.
pub fn spherical_j<T: Scalar>(l: u32, x: T) -> (T, T) {
    let j = j_table(l.max(1) + 1, x);
    let deriv = if l == 0 {
        -j[1]
    } else {
        j[(l - 1) as usize] - (lit::<T>(l as f64 + 1.0) / x) * j[l as usize]
    };
    (j[l as usize], deriv)
}

/// y_l(x) together with its derivative.
pub fn spherical_y<T: Scalar>(l: u32, x: T) -> (T, T) {
    let y = y_table(l.max(1) + 1, x);
    let deriv = if l == 0 {
        -y[1]
    } else {
        y[(l - 1) as usize] - (lit::<T>(l as f64 + 1.0) / x) * y[l as usize]
    };
    (y[l as usize], deriv)
}

fn j_table<T: Scalar>(l_max: u32, x: T) -> Vec<T> {
    let (s, c) = x.sin_cos();
    let mut j = Vec::with_capacity(l_max as usize + 1);
    j.push(s / x);
    if l_max >= 1 {
        j.push(s / (x * x) - c / x);
    }
    if l_max >= 2 {
        let three = lit::<T>(3.0);
        j.push((three / (x * x * x) - T::one() / x) * s - three * c / (x * x));
    }
    for l in 3..=l_max as usize {
        let f = lit::<T>(2.0 * (l as f64 - 1.0) + 1.0) / x;
        let next = f * j[l - 1] - j[l - 2];
        j.push(next);
    }
    j
}

fn y_table<T: Scalar>(l_max: u32, x: T) -> Vec<T> {
    let (s, c) = x.sin_cos();
    let mut y = Vec::with_capacity(l_max as usize + 1);
    y.push(-c / x);
    if l_max >= 1 {
        y.push(-c / (x * x) - s / x);
    }
    if l_max >= 2 {
        let three = lit::<T>(3.0);
        y.push((T::one() / x - three / (x * x * x)) * c - three * s / (x * x));
    }
    for l in 3..=l_max as usize {
        let f = lit::<T>(2.0 * (l as f64 - 1.0) + 1.0) / x;
        let next = f * y[l - 1] - y[l - 2];
        y.push(next);
    }
    y
}
