//! Galerkin boundary element library for the exterior 3D Helmholtz Dirichlet
//! problem with weakly imposed boundary conditions.
//!
//! The full Calderón system is assembled for both the Dirichlet trace and the
//! flux, the boundary condition enters through a complex penalty form, and the
//! blocked system is solved by mass-preconditioned GMRES. All core math is
//! generic over the real scalar type (`f32` or `f64`); the concrete `f64`
//! aliases at the crate root are what most callers want.

use std::fmt::{Debug, Display, LowerExp};
use std::iter::Sum;

use num_complex::Complex;
use num_traits::{Float, FloatConst, FromPrimitive, NumAssign};

pub mod analytic;
pub mod error;
pub mod formulation;
mod geometry;
pub mod la;
pub mod mesh;
pub mod operators;
pub mod quadrature;
pub mod solver;

pub use error::{Error, Result};

/// Real scalar type the library is generic over: `f32` or `f64`.
pub trait Scalar:
    Float
    + FloatConst
    + FromPrimitive
    + NumAssign
    + Sum
    + Debug
    + Display
    + LowerExp
    + Send
    + Sync
    + 'static
{
}

impl Scalar for f32 {}
impl Scalar for f64 {}

/// Complex number over the generic real scalar.
pub type Cplx<T> = Complex<T>;

/// Converts an `f64` literal into the generic scalar type.
#[inline]
pub(crate) fn lit<T: Scalar>(x: f64) -> T {
    T::from_f64(x).expect("literal out of range for scalar type")
}

pub type Mesh64 = mesh::Mesh<f64>;
pub type DofSpace64 = operators::DofSpace<f64>;
pub type BoundaryOperatorMatrix64 = operators::BoundaryOperatorMatrix<f64>;
pub type MassMatrix64 = operators::MassMatrix<f64>;
pub type BlockOperator64 = solver::BlockOperator<f64>;
pub type Preconditioner64 = solver::Preconditioner<f64>;
pub type SolveReport64 = solver::SolveReport<f64>;
pub type BlockedDirichletSystem64 = formulation::BlockedDirichletSystem<f64>;
pub type TraceSolution64 = formulation::TraceSolution<f64>;
