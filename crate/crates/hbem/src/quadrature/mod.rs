//! Triangle quadrature: regular Gauss rules on the reference simplex and
//! regularizing coordinate-transform rules for singular triangle pairs.

mod gauss1d;

use crate::mesh::PairTag;
use crate::{lit, Error, Result, Scalar};

pub use gauss1d::gauss_legendre_01;

/// Largest supported polynomial exactness for the regular rules.
pub const MAX_ORDER: usize = 20;

/// Quadrature rule on the reference simplex {x >= 0, y >= 0, x + y <= 1}.
/// Points are the last two barycentric coordinates; weights carry the
/// reference measure (they sum to 1/2).
#[derive(Debug, Clone, PartialEq)]
pub struct TriangleRule<T: Scalar> {
    pub points: Vec<[T; 2]>,
    pub weights: Vec<T>,
}

impl<T: Scalar> TriangleRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }

    pub fn is_empty(&self) -> bool {
        self.weights.is_empty()
    }
}

/// Rule over a pair of reference triangles. Each point is
/// (x_test, y_test, x_trial, y_trial); weights sum to 1/4.
///
/// For the singular classes the points assume the canonical vertex
/// arrangement: shared vertices come first in both triangles, in matching
/// order. Assembly permutes barycentric coordinates accordingly.
#[derive(Debug, Clone, PartialEq)]
pub struct PairRule<T: Scalar> {
    pub points: Vec<[T; 4]>,
    pub weights: Vec<T>,
    pub class: PairTag,
}

impl<T: Scalar> PairRule<T> {
    pub fn len(&self) -> usize {
        self.weights.len()
    }
}

/// Gauss rule on the reference triangle with the stated polynomial exactness.
///
/// Order 1 is the centroid rule and order 2 the classic three-point rule;
/// higher orders use the conical product of a radial Gauss-Jacobi rule with
/// Gauss-Legendre, which has positive weights at every order.
pub fn gauss_triangle<T: Scalar>(order: usize) -> Result<TriangleRule<T>> {
    if order == 0 || order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let third = lit::<T>(1.0 / 3.0);
    let half = lit::<T>(0.5);
    match order {
        1 => Ok(TriangleRule {
            points: vec![[third, third]],
            weights: vec![half],
        }),
        2 => {
            let a = lit::<T>(1.0 / 6.0);
            let b = lit::<T>(2.0 / 3.0);
            Ok(TriangleRule {
                points: vec![[a, a], [b, a], [a, b]],
                weights: vec![a, a, a],
            })
        }
        _ => {
            let n = order / 2 + 1;
            let (s, ws) = gauss1d::gauss_radial_01(n);
            let (t, wt) = gauss1d::gauss_legendre_01(n);
            let mut points = Vec::with_capacity(n * n);
            let mut weights = Vec::with_capacity(n * n);
            for (si, wsi) in s.iter().zip(&ws) {
                for (tj, wtj) in t.iter().zip(&wt) {
                    points.push([lit::<T>(si * (1.0 - tj)), lit::<T>(si * tj)]);
                    weights.push(lit::<T>(wsi * wtj));
                }
            }
            Ok(TriangleRule { points, weights })
        }
    }
}

/// Tensor product of two triangle rules, for disjoint pairs.
pub fn tensor_rule<T: Scalar>(test: &TriangleRule<T>, trial: &TriangleRule<T>) -> PairRule<T> {
    let mut points = Vec::with_capacity(test.len() * trial.len());
    let mut weights = Vec::with_capacity(test.len() * trial.len());
    for (p, wp) in test.points.iter().zip(&test.weights) {
        for (q, wq) in trial.points.iter().zip(&trial.weights) {
            points.push([p[0], p[1], q[0], q[1]]);
            weights.push(*wp * *wq);
        }
    }
    PairRule {
        points,
        weights,
        class: PairTag::Disjoint,
    }
}

/// Maps a point of the Sauter-Schwab parameter triangle {0 <= v <= u <= 1}
/// to reference simplex coordinates.
#[inline]
fn to_simplex(u: f64, v: f64) -> [f64; 2] {
    [u - v, v]
}

/// Regularizing transform rule for a singular triangle pair, with `order`
/// Gauss-Legendre points per hypercube dimension.
///
/// The transforms split the 4D parameter domain into 6 (coincident),
/// 5 (edge) or 2 (vertex) subregions on which the integrand of a weakly
/// singular kernel becomes smooth; all weights are positive.
pub fn singular_rule<T: Scalar>(class: PairTag, order: usize) -> Result<PairRule<T>> {
    if class == PairTag::Disjoint {
        return Err(Error::Contract(
            "disjoint pairs use the tensor product of regular rules".into(),
        ));
    }
    if order < 2 || order > MAX_ORDER {
        return Err(Error::UnsupportedOrder(order));
    }
    let (g, gw) = gauss1d::gauss_legendre_01(order);
    let mut points: Vec<[T; 4]> = Vec::new();
    let mut weights: Vec<T> = Vec::new();
    let mut push = |x: [f64; 2], y: [f64; 2], w: f64| {
        let xs = to_simplex(x[0], x[1]);
        let ys = to_simplex(y[0], y[1]);
        points.push([lit(xs[0]), lit(xs[1]), lit(ys[0]), lit(ys[1])]);
        weights.push(lit(w));
    };
    for (&xi, &wa) in g.iter().zip(&gw) {
        for (&e1, &wb) in g.iter().zip(&gw) {
            for (&e2, &wc) in g.iter().zip(&gw) {
                for (&e3, &wd) in g.iter().zip(&gw) {
                    let w0 = wa * wb * wc * wd;
                    match class {
                        PairTag::Coincident => {
                            let j = xi.powi(3) * e1 * e1 * e2;
                            let w = w0 * j;
                            push(
                                [xi, xi * (1.0 - e1 + e1 * e2)],
                                [xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)],
                                w,
                            );
                            push(
                                [xi * (1.0 - e1 * e2 * e3), xi * (1.0 - e1)],
                                [xi, xi * (1.0 - e1 + e1 * e2)],
                                w,
                            );
                            push(
                                [xi, xi * e1 * (1.0 - e2 + e2 * e3)],
                                [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
                                w,
                            );
                            push(
                                [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
                                [xi, xi * e1 * (1.0 - e2 + e2 * e3)],
                                w,
                            );
                            push(
                                [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)],
                                [xi, xi * e1 * (1.0 - e2)],
                                w,
                            );
                            push(
                                [xi, xi * e1 * (1.0 - e2)],
                                [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)],
                                w,
                            );
                        }
                        PairTag::EdgeAdjacent => {
                            let j2 = xi.powi(3) * e1 * e1;
                            push(
                                [xi, xi * e1 * e3],
                                [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
                                w0 * j2,
                            );
                            let j3 = j2 * e2;
                            push(
                                [xi, xi * e1],
                                [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)],
                                w0 * j3,
                            );
                            push(
                                [xi * (1.0 - e1 * e2), xi * e1 * (1.0 - e2)],
                                [xi, xi * e1 * e2 * e3],
                                w0 * j3,
                            );
                            push(
                                [xi * (1.0 - e1 * e2 * e3), xi * e1 * e2 * (1.0 - e3)],
                                [xi, xi * e1],
                                w0 * j3,
                            );
                            push(
                                [xi * (1.0 - e1 * e2 * e3), xi * e1 * (1.0 - e2 * e3)],
                                [xi, xi * e1 * e2],
                                w0 * j3,
                            );
                        }
                        PairTag::VertexAdjacent => {
                            let j = xi.powi(3) * e2;
                            push([xi, xi * e1], [xi * e2, xi * e2 * e3], w0 * j);
                            push([xi * e2, xi * e2 * e3], [xi, xi * e1], w0 * j);
                        }
                        PairTag::Disjoint => unreachable!(),
                    }
                }
            }
        }
    }
    Ok(PairRule {
        points,
        weights,
        class,
    })
}
