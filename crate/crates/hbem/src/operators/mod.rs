//! Discrete trace spaces, Helmholtz boundary operators and mass matrices.

mod assembly;
mod kernels;

use std::io::{Read as _, Write as _};
use std::path::Path;
use std::sync::Arc;

use num_complex::Complex;

use crate::geometry::Point3;
use crate::la::{CsrMatrix, DenseMatrix};
use crate::mesh::Mesh;
use crate::{lit, Cplx, Error, Result, Scalar};

pub use assembly::{
    assemble_boundary_operator, assemble_functional, assemble_operators, OperatorRequest,
};
pub use kernels::{green_kernel, green_normal_derivative};

/// Positive real wavenumber.
#[derive(Debug, Clone, Copy, PartialEq)]
pub struct Wavenumber<T: Scalar>(T);

impl<T: Scalar> Wavenumber<T> {
    pub fn new(k: T) -> Result<Self> {
        if k > T::zero() && k.is_finite() {
            Ok(Wavenumber(k))
        } else {
            Err(Error::Config(format!("wavenumber must be positive, got {k}")))
        }
    }

    pub fn get(self) -> T {
        self.0
    }
}

/// Supported discrete trace spaces on a triangulation.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum SpaceKind {
    /// Continuous piecewise linears; one dof per vertex.
    P1Continuous,
    /// Piecewise constants; one dof per triangle.
    Dp0,
    /// Discontinuous piecewise linears; three dofs per triangle.
    Dp1,
}

/// One of the four boundary operators of the Calderón system.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum OperatorKind {
    /// V: single layer
    SingleLayer,
    /// K: double layer
    DoubleLayer,
    /// K': adjoint double layer
    AdjointDoubleLayer,
    /// W: hypersingular, assembled in integration-by-parts form
    Hypersingular,
}

impl std::fmt::Display for OperatorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        let s = match self {
            OperatorKind::SingleLayer => "V",
            OperatorKind::DoubleLayer => "K",
            OperatorKind::AdjointDoubleLayer => "K'",
            OperatorKind::Hypersingular => "W",
        };
        f.write_str(s)
    }
}

/// Quadrature orders used by assembly.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct QuadConfig {
    pub regular_order: usize,
    pub singular_order: usize,
}

impl Default for QuadConfig {
    fn default() -> Self {
        QuadConfig {
            regular_order: 4,
            singular_order: 4,
        }
    }
}

/// A discrete trace space bound to a mesh, with its local-to-global map.
#[derive(Debug, Clone)]
pub struct DofSpace<T: Scalar> {
    kind: SpaceKind,
    mesh: Arc<Mesh<T>>,
    dof_count: usize,
    local_to_global: Vec<[usize; 3]>,
    n_local: usize,
}

impl<T: Scalar> DofSpace<T> {
    pub fn new(kind: SpaceKind, mesh: Arc<Mesh<T>>) -> Self {
        let nt = mesh.n_triangles();
        let (dof_count, n_local) = match kind {
            SpaceKind::P1Continuous => (mesh.n_vertices(), 3),
            SpaceKind::Dp0 => (nt, 1),
            SpaceKind::Dp1 => (3 * nt, 3),
        };
        let local_to_global = (0..nt)
            .map(|t| match kind {
                SpaceKind::P1Continuous => mesh.triangles()[t],
                SpaceKind::Dp0 => [t, usize::MAX, usize::MAX],
                SpaceKind::Dp1 => [3 * t, 3 * t + 1, 3 * t + 2],
            })
            .collect();
        DofSpace {
            kind,
            mesh,
            dof_count,
            local_to_global,
            n_local,
        }
    }

    pub fn kind(&self) -> SpaceKind {
        self.kind
    }

    pub fn mesh(&self) -> &Arc<Mesh<T>> {
        &self.mesh
    }

    pub fn dof_count(&self) -> usize {
        self.dof_count
    }

    pub fn n_local(&self) -> usize {
        self.n_local
    }

    pub fn local_dofs(&self, t: usize) -> &[usize] {
        &self.local_to_global[t][..self.n_local]
    }

    pub fn same_mesh(&self, other: &DofSpace<T>) -> bool {
        Arc::ptr_eq(&self.mesh, &other.mesh)
    }

    /// Basis function values at a barycentric point of a triangle.
    #[inline]
    pub fn shape(&self, bary: [T; 3]) -> [T; 3] {
        match self.kind {
            SpaceKind::P1Continuous | SpaceKind::Dp1 => bary,
            SpaceKind::Dp0 => [T::one(), T::zero(), T::zero()],
        }
    }

    /// Evaluates a coefficient vector at a barycentric point of triangle `t`.
    pub fn evaluate(&self, coeffs: &[Cplx<T>], t: usize, bary: [T; 3]) -> Cplx<T> {
        let shapes = self.shape(bary);
        let mut acc = Complex::new(T::zero(), T::zero());
        for (l, &g) in self.local_dofs(t).iter().enumerate() {
            acc += coeffs[g] * shapes[l];
        }
        acc
    }

    /// Interpolates a function of (point, normal) into dof coefficients.
    /// P1 dofs use area-weighted vertex normals; triangle-based dofs use the
    /// flat element normal.
    pub fn interpolate(&self, f: impl Fn(Point3<T>, Point3<T>) -> Cplx<T>) -> Vec<Cplx<T>> {
        match self.kind {
            SpaceKind::P1Continuous => {
                let normals = self.mesh.vertex_normals();
                self.mesh
                    .vertices()
                    .iter()
                    .zip(&normals)
                    .map(|(&v, &n)| f(v, n))
                    .collect()
            }
            SpaceKind::Dp0 => (0..self.mesh.n_triangles())
                .map(|t| f(self.mesh.centroid(t), self.mesh.normal(t)))
                .collect(),
            SpaceKind::Dp1 => {
                let mut out = Vec::with_capacity(self.dof_count);
                for t in 0..self.mesh.n_triangles() {
                    let tri = self.mesh.triangle(t);
                    let n = self.mesh.normal(t);
                    for v in tri {
                        out.push(f(v, n));
                    }
                }
                out
            }
        }
    }
}

/// Dense complex Galerkin matrix of one boundary operator.
#[derive(Debug, Clone)]
pub struct BoundaryOperatorMatrix<T: Scalar> {
    pub kind: OperatorKind,
    pub wavenumber: T,
    matrix: DenseMatrix<Cplx<T>>,
    trial: DofSpace<T>,
    test: DofSpace<T>,
}

impl<T: Scalar> BoundaryOperatorMatrix<T> {
    pub(crate) fn new(
        kind: OperatorKind,
        wavenumber: T,
        matrix: DenseMatrix<Cplx<T>>,
        trial: DofSpace<T>,
        test: DofSpace<T>,
    ) -> Self {
        BoundaryOperatorMatrix {
            kind,
            wavenumber,
            matrix,
            trial,
            test,
        }
    }

    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn entry(&self, i: usize, j: usize) -> Cplx<T> {
        self.matrix.get(i, j)
    }

    pub fn matrix(&self) -> &DenseMatrix<Cplx<T>> {
        &self.matrix
    }

    pub fn into_matrix(self) -> DenseMatrix<Cplx<T>> {
        self.matrix
    }

    pub fn trial_space(&self) -> &DofSpace<T> {
        &self.trial
    }

    pub fn test_space(&self) -> &DofSpace<T> {
        &self.test
    }

    /// Bilinear form value x_test^T A x_trial (no conjugation; bases are real).
    pub fn bilinear(&self, test_coeffs: &[Cplx<T>], trial_coeffs: &[Cplx<T>]) -> Cplx<T> {
        let mut acc = Complex::new(T::zero(), T::zero());
        for i in 0..self.nrows() {
            let mut row = Complex::new(T::zero(), T::zero());
            for (j, &a) in self.matrix.row(i).iter().enumerate() {
                row += a * trial_coeffs[j];
            }
            acc += test_coeffs[i] * row;
        }
        acc
    }

    /// Writes the flat binary dump: 16-byte header (rows, cols as u64 LE)
    /// followed by row-major complex doubles.
    pub fn write_binary(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut f = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut buf = Vec::with_capacity(16 + self.matrix.data().len() * 16);
        buf.extend_from_slice(&(self.nrows() as u64).to_le_bytes());
        buf.extend_from_slice(&(self.ncols() as u64).to_le_bytes());
        for z in self.matrix.data() {
            buf.extend_from_slice(&z.re.to_f64().unwrap().to_le_bytes());
            buf.extend_from_slice(&z.im.to_f64().unwrap().to_le_bytes());
        }
        f.write_all(&buf)
            .map_err(|e| Error::io(path.display().to_string(), e))
    }
}

/// Reads a matrix dump written by [`BoundaryOperatorMatrix::write_binary`].
pub fn read_matrix_binary(path: impl AsRef<Path>) -> Result<DenseMatrix<Complex<f64>>> {
    let path = path.as_ref();
    let mut f =
        std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
    let mut bytes = Vec::new();
    f.read_to_end(&mut bytes)
        .map_err(|e| Error::io(path.display().to_string(), e))?;
    if bytes.len() < 16 {
        return Err(Error::Config(format!(
            "{}: truncated matrix dump",
            path.display()
        )));
    }
    let rows = u64::from_le_bytes(bytes[0..8].try_into().unwrap()) as usize;
    let cols = u64::from_le_bytes(bytes[8..16].try_into().unwrap()) as usize;
    let expected = 16 + rows * cols * 16;
    if bytes.len() != expected {
        return Err(Error::Config(format!(
            "{}: expected {expected} bytes, found {}",
            path.display(),
            bytes.len()
        )));
    }
    let mut data = Vec::with_capacity(rows * cols);
    for chunk in bytes[16..].chunks_exact(16) {
        let re = f64::from_le_bytes(chunk[0..8].try_into().unwrap());
        let im = f64::from_le_bytes(chunk[8..16].try_into().unwrap());
        data.push(Complex::new(re, im));
    }
    Ok(DenseMatrix::from_rows(rows, cols, data))
}

/// Sparse real Gram matrix between two trace spaces.
#[derive(Debug, Clone)]
pub struct MassMatrix<T: Scalar> {
    matrix: CsrMatrix<T>,
    trial: DofSpace<T>,
    test: DofSpace<T>,
}

impl<T: Scalar> MassMatrix<T> {
    pub fn nrows(&self) -> usize {
        self.matrix.nrows()
    }

    pub fn ncols(&self) -> usize {
        self.matrix.ncols()
    }

    pub fn entry(&self, i: usize, j: usize) -> T {
        self.matrix.get(i, j)
    }

    pub fn csr(&self) -> &CsrMatrix<T> {
        &self.matrix
    }

    pub fn sum(&self) -> T {
        self.matrix.sum()
    }

    pub fn trial_space(&self) -> &DofSpace<T> {
        &self.trial
    }

    pub fn test_space(&self) -> &DofSpace<T> {
        &self.test
    }
}

/// Exact Galerkin mass matrix between piecewise-polynomial trace spaces.
pub fn assemble_mass<T: Scalar>(trial: &DofSpace<T>, test: &DofSpace<T>) -> Result<MassMatrix<T>> {
    if !trial.same_mesh(test) {
        return Err(Error::Contract(
            "mass assembly requires trial and test spaces on the same mesh".into(),
        ));
    }
    let mesh = trial.mesh();
    let linear = |k: SpaceKind| !matches!(k, SpaceKind::Dp0);
    let mut triplets = Vec::with_capacity(mesh.n_triangles() * 9);
    let sixth = lit::<T>(1.0 / 6.0);
    let twelfth = lit::<T>(1.0 / 12.0);
    let third = lit::<T>(1.0 / 3.0);
    for t in 0..mesh.n_triangles() {
        let area = mesh.area(t);
        for (li, &gi) in test.local_dofs(t).iter().enumerate() {
            for (lj, &gj) in trial.local_dofs(t).iter().enumerate() {
                let v = match (linear(test.kind()), linear(trial.kind())) {
                    (true, true) => {
                        if li == lj {
                            area * sixth
                        } else {
                            area * twelfth
                        }
                    }
                    (true, false) | (false, true) => area * third,
                    (false, false) => area,
                };
                triplets.push((gi, gj, v));
            }
        }
    }
    Ok(MassMatrix {
        matrix: CsrMatrix::from_triplets(test.dof_count(), trial.dof_count(), triplets),
        trial: trial.clone(),
        test: test.clone(),
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_icosphere;
    use approx::assert_relative_eq;

    fn reference_triangle_mesh() -> Arc<Mesh<f64>> {
        Arc::new(
            Mesh::open_patch(
                vec![[0.0, 0.0, 0.0], [1.0, 0.0, 0.0], [0.0, 1.0, 0.0]],
                vec![[0, 1, 2]],
            )
            .unwrap(),
        )
    }

    #[test]
    fn p1_mass_on_reference_triangle() {
        let mesh = reference_triangle_mesh();
        let space = DofSpace::new(SpaceKind::P1Continuous, mesh);
        let m = assemble_mass(&space, &space).unwrap();
        for i in 0..3 {
            for j in 0..3 {
                let expected = if i == j { 1.0 / 12.0 } else { 1.0 / 24.0 };
                assert_relative_eq!(m.entry(i, j), expected, max_relative = 1e-14);
            }
        }
    }

    #[test]
    fn mass_sums_to_surface_area() {
        let mesh = Arc::new(build_icosphere::<f64>(2).unwrap());
        let total: f64 = (0..mesh.n_triangles()).map(|t| mesh.area(t)).sum();
        for kind in [SpaceKind::P1Continuous, SpaceKind::Dp0, SpaceKind::Dp1] {
            let space = DofSpace::new(kind, mesh.clone());
            let m = assemble_mass(&space, &space).unwrap();
            assert_relative_eq!(m.sum(), total, max_relative = 1e-12);
        }
    }

    #[test]
    fn mass_symmetric_exactly() {
        let mesh = Arc::new(build_icosphere::<f64>(1).unwrap());
        let space = DofSpace::new(SpaceKind::P1Continuous, mesh);
        let m = assemble_mass(&space, &space).unwrap();
        for i in 0..m.nrows() {
            for j in 0..i {
                assert_eq!(m.entry(i, j), m.entry(j, i));
            }
        }
    }

    #[test]
    fn cross_space_mass_dimensions() {
        let mesh = Arc::new(build_icosphere::<f64>(1).unwrap());
        let p1 = DofSpace::new(SpaceKind::P1Continuous, mesh.clone());
        let dp0 = DofSpace::new(SpaceKind::Dp0, mesh.clone());
        let m = assemble_mass(&p1, &dp0).unwrap();
        assert_eq!(m.nrows(), mesh.n_triangles());
        assert_eq!(m.ncols(), mesh.n_vertices());
        // each row integrates the three vertex hats over one triangle
        let (cols, vals) = m.csr().row(0);
        assert_eq!(cols.len(), 3);
        let a = mesh.area(0);
        for &v in vals {
            assert_relative_eq!(v, a / 3.0, max_relative = 1e-14);
        }
    }

    #[test]
    fn dof_counts_match_spaces() {
        let mesh = Arc::new(build_icosphere::<f64>(1).unwrap());
        assert_eq!(
            DofSpace::new(SpaceKind::P1Continuous, mesh.clone()).dof_count(),
            42
        );
        assert_eq!(DofSpace::new(SpaceKind::Dp0, mesh.clone()).dof_count(), 80);
        assert_eq!(DofSpace::new(SpaceKind::Dp1, mesh.clone()).dof_count(), 240);
    }

    #[test]
    fn wavenumber_guard() {
        assert!(Wavenumber::new(2.0).is_ok());
        assert!(Wavenumber::new(0.0).is_err());
        assert!(Wavenumber::new(-1.0).is_err());
        assert!(Wavenumber::new(f64::NAN).is_err());
    }

    #[test]
    fn binary_dump_round_trip() {
        let mesh = Arc::new(build_icosphere::<f64>(0).unwrap());
        let space = DofSpace::new(SpaceKind::P1Continuous, mesh);
        let op = assemble_boundary_operator(
            OperatorKind::SingleLayer,
            &space,
            &space,
            Wavenumber::new(2.0).unwrap(),
            &QuadConfig::default(),
        )
        .unwrap();
        let dir = std::env::temp_dir().join("hbem_dump_test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("v.bin");
        op.write_binary(&path).unwrap();
        let back = read_matrix_binary(&path).unwrap();
        assert_eq!(back.nrows(), op.nrows());
        assert_eq!(back.ncols(), op.ncols());
        for i in 0..op.nrows() {
            for j in 0..op.ncols() {
                assert_eq!(back.get(i, j), op.entry(i, j));
            }
        }
    }
}
