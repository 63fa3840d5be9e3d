//! Galerkin assembly of the boundary operators.
//!
//! Triangle pairs are integrated with tensor Gauss rules when disjoint (with
//! the order doubled for close pairs) and with the regularizing transform
//! rules otherwise. All four operators of a system can be assembled in one
//! pass so the kernel evaluations are shared.
//!
//! Parallelism is over test triangles; per-triangle row blocks are merged in
//! triangle order, so the assembled matrices are bitwise independent of the
//! thread count.

use num_complex::Complex;
use rayon::prelude::*;

use crate::geometry::{dist, dot, scale, sub, Point3};
use crate::la::DenseMatrix;
use crate::mesh::{classify_pair, Mesh, PairClass, PairTag};
use crate::quadrature::{gauss_triangle, singular_rule, tensor_rule, PairRule, MAX_ORDER};
use crate::{Cplx, Error, Result, Scalar};

use super::kernels::kernel_bundle;
use super::{BoundaryOperatorMatrix, DofSpace, OperatorKind, QuadConfig, SpaceKind, Wavenumber};

/// One operator to assemble: kind plus its trial and test spaces.
#[derive(Clone, Copy)]
pub struct OperatorRequest<'a, T: Scalar> {
    pub kind: OperatorKind,
    pub trial: &'a DofSpace<T>,
    pub test: &'a DofSpace<T>,
}

/// Disjoint pairs closer than this multiple of the larger element diameter
/// get the doubled regular order.
const NEAR_FIELD_FACTOR: f64 = 2.0;

/// Test triangles per parallel wave; fixed so results do not depend on the
/// number of worker threads.
const WAVE: usize = 64;

#[derive(Clone, Copy, PartialEq, Eq)]
enum KernelPart {
    G,
    DGdNy,
    DGdNx,
}

#[derive(Clone, Copy, PartialEq, Eq)]
struct MomentSpec {
    kernel: KernelPart,
    test_kind: SpaceKind,
    trial_kind: SpaceKind,
}

impl MomentSpec {
    fn n_test(&self) -> usize {
        n_local(self.test_kind)
    }
    fn n_trial(&self) -> usize {
        n_local(self.trial_kind)
    }
}

fn n_local(kind: SpaceKind) -> usize {
    match kind {
        SpaceKind::Dp0 => 1,
        _ => 3,
    }
}

#[inline]
fn shape_values<T: Scalar>(kind: SpaceKind, bary: [T; 3]) -> [T; 3] {
    match kind {
        SpaceKind::Dp0 => [T::one(), T::zero(), T::zero()],
        _ => bary,
    }
}

enum OpPlan {
    /// V, K, K': a single kernel moment.
    Simple { moment: usize },
    /// W: curl-curl times the scalar G moment minus k^2 (n.n) times the
    /// P1-P1 G moment.
    Hyper { scalar: usize, mass: usize },
}

struct TriGeom<T: Scalar> {
    v: [Point3<T>; 3],
    normal: Point3<T>,
    area: T,
    centroid: Point3<T>,
    diameter: T,
    /// Surface curls of the three vertex hats (up to a global sign that
    /// cancels in products): opposite edge over twice the area.
    curl: [Point3<T>; 3],
}

fn tri_geoms<T: Scalar>(mesh: &Mesh<T>) -> Vec<TriGeom<T>> {
    (0..mesh.n_triangles())
        .map(|t| {
            let v = mesh.triangle(t);
            let area = mesh.area(t);
            let inv_two_area = T::one() / (area + area);
            let curl = [
                scale(sub(v[2], v[1]), inv_two_area),
                scale(sub(v[0], v[2]), inv_two_area),
                scale(sub(v[1], v[0]), inv_two_area),
            ];
            TriGeom {
                v,
                normal: mesh.normal(t),
                area,
                centroid: mesh.centroid(t),
                diameter: mesh.diameter(t),
                curl,
            }
        })
        .collect()
}

struct RuleSet<T: Scalar> {
    regular: PairRule<T>,
    near: PairRule<T>,
    coincident: PairRule<T>,
    edge: PairRule<T>,
    vertex: PairRule<T>,
}

impl<T: Scalar> RuleSet<T> {
    fn build(quad: &QuadConfig) -> Result<Self> {
        let reg = gauss_triangle::<T>(quad.regular_order)?;
        let near1 = gauss_triangle::<T>((2 * quad.regular_order).min(MAX_ORDER))?;
        let singular_order = quad.singular_order.max(2);
        Ok(RuleSet {
            regular: tensor_rule(&reg, &reg),
            near: tensor_rule(&near1, &near1),
            coincident: singular_rule(PairTag::Coincident, singular_order)?,
            edge: singular_rule(PairTag::EdgeAdjacent, singular_order)?,
            vertex: singular_rule(PairTag::VertexAdjacent, singular_order)?,
        })
    }
}

/// Local vertex permutations that put the shared simplex first in both
/// triangles, in matching global order.
fn canonical_perms(class: &PairClass) -> ([usize; 3], [usize; 3]) {
    let shared = class.shared_vertices();
    match class.tag {
        PairTag::Coincident | PairTag::Disjoint => ([0, 1, 2], [0, 1, 2]),
        PairTag::EdgeAdjacent => {
            let (a0, b0) = (shared[0].0 as usize, shared[0].1 as usize);
            let (a1, b1) = (shared[1].0 as usize, shared[1].1 as usize);
            ([a0, a1, 3 - a0 - a1], [b0, b1, 3 - b0 - b1])
        }
        PairTag::VertexAdjacent => {
            let (a, b) = (shared[0].0 as usize, shared[0].1 as usize);
            ([a, (a + 1) % 3, (a + 2) % 3], [b, (b + 1) % 3, (b + 2) % 3])
        }
    }
}

#[inline]
fn permuted_bary<T: Scalar>(p: [T; 2], perm: [usize; 3]) -> [T; 3] {
    let canon = [T::one() - p[0] - p[1], p[0], p[1]];
    let mut b = [T::zero(); 3];
    b[perm[0]] = canon[0];
    b[perm[1]] = canon[1];
    b[perm[2]] = canon[2];
    b
}

#[inline]
fn map_point<T: Scalar>(g: &TriGeom<T>, b: [T; 3]) -> Point3<T> {
    [
        g.v[0][0] * b[0] + g.v[1][0] * b[1] + g.v[2][0] * b[2],
        g.v[0][1] * b[0] + g.v[1][1] * b[1] + g.v[2][1] * b[2],
        g.v[0][2] * b[0] + g.v[1][2] * b[1] + g.v[2][2] * b[2],
    ]
}

const MAX_MOMENTS: usize = 6;

struct EngineCtx<'a, T: Scalar> {
    mesh: &'a Mesh<T>,
    geoms: Vec<TriGeom<T>>,
    rules: RuleSet<T>,
    moments: Vec<MomentSpec>,
    plans: Vec<OpPlan>,
    requests: Vec<(OperatorKind, SpaceKind, SpaceKind)>,
    k: T,
    need_derivs: bool,
}

/// Fills the moment blocks for one triangle pair. Blocks are scaled by the
/// physical measure 4 A_test A_trial.
fn process_pair<T: Scalar>(
    ctx: &EngineCtx<'_, T>,
    t: usize,
    s: usize,
    blocks: &mut [[Cplx<T>; 9]; MAX_MOMENTS],
) {
    let zero = Complex::new(T::zero(), T::zero());
    for b in blocks.iter_mut() {
        b.fill(zero);
    }
    let gt = &ctx.geoms[t];
    let gs = &ctx.geoms[s];

    let class = classify_pair(ctx.mesh, t, s);
    // which rule, and how canonical rule points map onto (t, s)
    let (rule, perm_t, perm_s, swapped): (&PairRule<T>, [usize; 3], [usize; 3], bool) =
        match class.tag {
            PairTag::Disjoint => {
                let d = dist(gt.centroid, gs.centroid);
                let near = d
                    < crate::lit::<T>(NEAR_FIELD_FACTOR) * gt.diameter.max(gs.diameter);
                let rule = if near { &ctx.rules.near } else { &ctx.rules.regular };
                (rule, [0, 1, 2], [0, 1, 2], false)
            }
            PairTag::Coincident => (&ctx.rules.coincident, [0, 1, 2], [0, 1, 2], false),
            PairTag::EdgeAdjacent | PairTag::VertexAdjacent => {
                let rule = match class.tag {
                    PairTag::EdgeAdjacent => &ctx.rules.edge,
                    _ => &ctx.rules.vertex,
                };
                // generate points for the canonical (low, high) orientation so
                // the same physical point set serves both pair orders
                if t <= s {
                    let (pt, ps) = canonical_perms(&class);
                    (rule, pt, ps, false)
                } else {
                    let cls = classify_pair(ctx.mesh, s, t);
                    let (ps, pt) = canonical_perms(&cls);
                    (rule, pt, ps, true)
                }
            }
        };

    let nm = ctx.moments.len();
    for (p, &w) in rule.points.iter().zip(&rule.weights) {
        let (pt_ref, ps_ref) = if swapped {
            ([p[2], p[3]], [p[0], p[1]])
        } else {
            ([p[0], p[1]], [p[2], p[3]])
        };
        let bt = permuted_bary(pt_ref, perm_t);
        let bs = permuted_bary(ps_ref, perm_s);
        let x = map_point(gt, bt);
        let y = map_point(gs, bs);
        let kv = kernel_bundle(ctx.k, x, y, gt.normal, gs.normal, ctx.need_derivs);
        for m in 0..nm {
            let spec = ctx.moments[m];
            let st = shape_values(spec.test_kind, bt);
            let sr = shape_values(spec.trial_kind, bs);
            let kval = match spec.kernel {
                KernelPart::G => kv.g,
                KernelPart::DGdNy => kv.dg_ny,
                KernelPart::DGdNx => kv.dg_nx,
            };
            let block = &mut blocks[m];
            let (nt_loc, ns_loc) = (spec.n_test(), spec.n_trial());
            for i in 0..nt_loc {
                let wi = w * st[i];
                for j in 0..ns_loc {
                    block[i * ns_loc + j] += kval * (wi * sr[j]);
                }
            }
        }
    }

    let measure = crate::lit::<T>(4.0) * gt.area * gs.area;
    for b in blocks.iter_mut().take(nm) {
        for v in b.iter_mut() {
            *v = *v * measure;
        }
    }
}

/// Assembles several boundary operators over the same mesh in one pass,
/// sharing kernel evaluations between them.
pub fn assemble_operators<T: Scalar>(
    requests: &[OperatorRequest<'_, T>],
    k: Wavenumber<T>,
    quad: &QuadConfig,
) -> Result<Vec<BoundaryOperatorMatrix<T>>> {
    if requests.is_empty() {
        return Err(Error::Contract("no operators requested".into()));
    }
    let mesh = requests[0].trial.mesh();
    for r in requests {
        if !r.trial.same_mesh(requests[0].trial) || !r.test.same_mesh(requests[0].trial) {
            return Err(Error::Contract(
                "all spaces in one assembly pass must share a mesh".into(),
            ));
        }
        if r.kind == OperatorKind::Hypersingular
            && (r.trial.kind() != SpaceKind::P1Continuous
                || r.test.kind() != SpaceKind::P1Continuous)
        {
            return Err(Error::Contract(
                "the hypersingular operator requires continuous P1 spaces".into(),
            ));
        }
    }

    // deduplicated moment plan
    let mut moments: Vec<MomentSpec> = Vec::new();
    let intern = |spec: MomentSpec, moments: &mut Vec<MomentSpec>| -> usize {
        if let Some(i) = moments.iter().position(|m| *m == spec) {
            i
        } else {
            moments.push(spec);
            moments.len() - 1
        }
    };
    let mut plans = Vec::with_capacity(requests.len());
    for r in requests {
        let plan = match r.kind {
            OperatorKind::SingleLayer => OpPlan::Simple {
                moment: intern(
                    MomentSpec {
                        kernel: KernelPart::G,
                        test_kind: r.test.kind(),
                        trial_kind: r.trial.kind(),
                    },
                    &mut moments,
                ),
            },
            OperatorKind::DoubleLayer => OpPlan::Simple {
                moment: intern(
                    MomentSpec {
                        kernel: KernelPart::DGdNy,
                        test_kind: r.test.kind(),
                        trial_kind: r.trial.kind(),
                    },
                    &mut moments,
                ),
            },
            OperatorKind::AdjointDoubleLayer => OpPlan::Simple {
                moment: intern(
                    MomentSpec {
                        kernel: KernelPart::DGdNx,
                        test_kind: r.test.kind(),
                        trial_kind: r.trial.kind(),
                    },
                    &mut moments,
                ),
            },
            OperatorKind::Hypersingular => OpPlan::Hyper {
                scalar: intern(
                    MomentSpec {
                        kernel: KernelPart::G,
                        test_kind: SpaceKind::Dp0,
                        trial_kind: SpaceKind::Dp0,
                    },
                    &mut moments,
                ),
                mass: intern(
                    MomentSpec {
                        kernel: KernelPart::G,
                        test_kind: SpaceKind::P1Continuous,
                        trial_kind: SpaceKind::P1Continuous,
                    },
                    &mut moments,
                ),
            },
        };
        plans.push(plan);
    }
    assert!(moments.len() <= MAX_MOMENTS);
    let need_derivs = moments
        .iter()
        .any(|m| m.kernel != KernelPart::G);

    let ctx = EngineCtx {
        mesh,
        geoms: tri_geoms(mesh),
        rules: RuleSet::build(quad)?,
        moments,
        plans,
        requests: requests
            .iter()
            .map(|r| (r.kind, r.test.kind(), r.trial.kind()))
            .collect(),
        k: k.get(),
        need_derivs,
    };

    let nt = mesh.n_triangles();
    let mut matrices: Vec<DenseMatrix<Cplx<T>>> = requests
        .iter()
        .map(|r| DenseMatrix::zeros(r.test.dof_count(), r.trial.dof_count()))
        .collect();

    let ncols: Vec<usize> = requests.iter().map(|r| r.trial.dof_count()).collect();
    let zero = Complex::new(T::zero(), T::zero());

    for wave_start in (0..nt).step_by(WAVE) {
        let wave_end = (wave_start + WAVE).min(nt);
        let results: Vec<Result<Vec<Vec<Cplx<T>>>>> = (wave_start..wave_end)
            .into_par_iter()
            .map(|t| {
                let mut rows: Vec<Vec<Cplx<T>>> = ctx
                    .requests
                    .iter()
                    .zip(&ncols)
                    .map(|(&(_, test_kind, _), &nc)| vec![zero; n_local(test_kind) * nc])
                    .collect();
                let mut blocks = [[zero; 9]; MAX_MOMENTS];
                for s in 0..nt {
                    process_pair(&ctx, t, s, &mut blocks);
                    for (op, plan) in ctx.plans.iter().enumerate() {
                        let (_, test_kind, trial_kind) = ctx.requests[op];
                        let (nlt, nls) = (n_local(test_kind), n_local(trial_kind));
                        let trial_dofs = requests[op].trial.local_dofs(s);
                        let nc = ncols[op];
                        match plan {
                            OpPlan::Simple { moment } => {
                                let b = &blocks[*moment];
                                for i in 0..nlt {
                                    for j in 0..nls {
                                        let v = b[i * nls + j];
                                        if !v.re.is_finite() || !v.im.is_finite() {
                                            return Err(Error::NonFiniteEntry { test: t, trial: s });
                                        }
                                        rows[op][i * nc + trial_dofs[j]] += v;
                                    }
                                }
                            }
                            OpPlan::Hyper { scalar, mass } => {
                                let sg = blocks[*scalar][0];
                                let bm = &blocks[*mass];
                                let gt = &ctx.geoms[t];
                                let gs = &ctx.geoms[s];
                                let nxny = dot(gt.normal, gs.normal);
                                let k2 = ctx.k * ctx.k;
                                for i in 0..3 {
                                    for j in 0..3 {
                                        let curls = dot(gt.curl[i], gs.curl[j]);
                                        let v = sg * curls - bm[i * 3 + j] * (k2 * nxny);
                                        if !v.re.is_finite() || !v.im.is_finite() {
                                            return Err(Error::NonFiniteEntry { test: t, trial: s });
                                        }
                                        rows[op][i * nc + trial_dofs[j]] += v;
                                    }
                                }
                            }
                        }
                    }
                }
                Ok(rows)
            })
            .collect();

        for (t, res) in (wave_start..wave_end).zip(results) {
            let rows = res?;
            for (op, row_block) in rows.into_iter().enumerate() {
                let nc = ncols[op];
                for (li, &gi) in requests[op].test.local_dofs(t).iter().enumerate() {
                    let dst = matrices[op].row_mut(gi);
                    for (d, v) in dst.iter_mut().zip(&row_block[li * nc..(li + 1) * nc]) {
                        *d += *v;
                    }
                }
            }
        }
    }

    Ok(matrices
        .into_iter()
        .zip(requests)
        .map(|(m, r)| {
            BoundaryOperatorMatrix::new(r.kind, k.get(), m, r.trial.clone(), r.test.clone())
        })
        .collect())
}

/// Assembles a single boundary operator.
pub fn assemble_boundary_operator<T: Scalar>(
    kind: OperatorKind,
    trial: &DofSpace<T>,
    test: &DofSpace<T>,
    k: Wavenumber<T>,
    quad: &QuadConfig,
) -> Result<BoundaryOperatorMatrix<T>> {
    let mut out = assemble_operators(&[OperatorRequest { kind, trial, test }], k, quad)?;
    Ok(out.pop().expect("one request yields one matrix"))
}

/// Moments of a function against the test basis: out[i] = integral f phi_i.
pub fn assemble_functional<T: Scalar>(
    space: &DofSpace<T>,
    f: &(impl Fn(Point3<T>) -> Cplx<T> + Sync),
    order: usize,
) -> Result<Vec<Cplx<T>>> {
    let rule = gauss_triangle::<T>(order)?;
    let mesh = space.mesh();
    let geoms = tri_geoms(mesh);
    let zero = Complex::new(T::zero(), T::zero());
    let mut out = vec![zero; space.dof_count()];
    for (t, g) in geoms.iter().enumerate() {
        let two_area = g.area + g.area;
        let dofs = space.local_dofs(t);
        for (p, &w) in rule.points.iter().zip(&rule.weights) {
            let b = [T::one() - p[0] - p[1], p[0], p[1]];
            let x = map_point(g, b);
            let val = f(x) * (w * two_area);
            let shapes = shape_values(space.kind(), b);
            for (l, &gd) in dofs.iter().enumerate() {
                out[gd] += val * shapes[l];
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::mesh::build_icosphere;
    use crate::operators::assemble_mass;
    use approx::assert_relative_eq;
    use num_complex::Complex64;
    use std::sync::Arc;

    fn p1_space(level: u32) -> DofSpace<f64> {
        let mesh = Arc::new(build_icosphere::<f64>(level).unwrap());
        DofSpace::new(SpaceKind::P1Continuous, mesh)
    }

    #[test]
    fn single_layer_symmetric() {
        let space = p1_space(1);
        let v = assemble_boundary_operator(
            OperatorKind::SingleLayer,
            &space,
            &space,
            Wavenumber::new(2.0).unwrap(),
            &QuadConfig::default(),
        )
        .unwrap();
        let mut max_asym: f64 = 0.0;
        let mut max_abs: f64 = 0.0;
        for i in 0..v.nrows() {
            for j in 0..v.ncols() {
                max_asym = max_asym.max((v.entry(i, j) - v.entry(j, i)).norm());
                max_abs = max_abs.max(v.entry(i, j).norm());
            }
        }
        assert!(max_asym < 1e-12 * max_abs, "asymmetry {max_asym}");
    }

    #[test]
    fn adjoint_double_layer_is_transpose_of_double_layer() {
        let space = p1_space(1);
        let k = Wavenumber::new(2.0).unwrap();
        let quad = QuadConfig::default();
        let kd = assemble_boundary_operator(OperatorKind::DoubleLayer, &space, &space, k, &quad)
            .unwrap();
        let ka = assemble_boundary_operator(
            OperatorKind::AdjointDoubleLayer,
            &space,
            &space,
            k,
            &quad,
        )
        .unwrap();
        let mut max_diff: f64 = 0.0;
        for i in 0..kd.nrows() {
            for j in 0..kd.ncols() {
                max_diff = max_diff.max((ka.entry(i, j) - kd.entry(j, i)).norm());
            }
        }
        assert!(max_diff < 1e-12, "K' vs K^T deviation {max_diff}");
    }

    #[test]
    fn hypersingular_nearly_annihilates_constants_at_small_k() {
        let space = p1_space(1);
        let w = assemble_boundary_operator(
            OperatorKind::Hypersingular,
            &space,
            &space,
            Wavenumber::new(1e-4).unwrap(),
            &QuadConfig::default(),
        )
        .unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); w.ncols()];
        let val = w.bilinear(&ones, &ones);
        assert!(val.norm() <= 1e-6, "<W1,1> = {val}");
    }

    #[test]
    fn rayleigh_quotient_of_v_matches_sphere_symbol() {
        // level-3 sphere, k = 2: <V1,1>/(4 pi) approximates j_0(2) e^{2i}
        let space = p1_space(3);
        let v = assemble_boundary_operator(
            OperatorKind::SingleLayer,
            &space,
            &space,
            Wavenumber::new(2.0).unwrap(),
            &QuadConfig {
                regular_order: 3,
                singular_order: 4,
            },
        )
        .unwrap();
        let ones = vec![Complex64::new(1.0, 0.0); v.ncols()];
        let q = v.bilinear(&ones, &ones) / (4.0 * std::f64::consts::PI);
        let expected = Complex64::new(-0.189_200_623_826_982, 0.413_410_905_215_903);
        assert!(
            (q - expected).norm() / expected.norm() < 0.02,
            "quotient {q} vs {expected}"
        );
    }

    #[test]
    fn mismatched_meshes_rejected() {
        let a = p1_space(0);
        let b = p1_space(0);
        let err = assemble_boundary_operator(
            OperatorKind::SingleLayer,
            &a,
            &b,
            Wavenumber::new(1.0).unwrap(),
            &QuadConfig::default(),
        );
        assert!(matches!(err, Err(Error::Contract(_))));
    }

    #[test]
    fn hypersingular_requires_p1() {
        let mesh = Arc::new(build_icosphere::<f64>(0).unwrap());
        let dp0 = DofSpace::new(SpaceKind::Dp0, mesh);
        let err = assemble_boundary_operator(
            OperatorKind::Hypersingular,
            &dp0,
            &dp0,
            Wavenumber::new(1.0).unwrap(),
            &QuadConfig::default(),
        );
        assert!(matches!(err, Err(Error::Contract(_))));
    }

    #[test]
    fn assembly_independent_of_thread_count() {
        let space = p1_space(1);
        let k = Wavenumber::new(3.0).unwrap();
        let quad = QuadConfig::default();
        let run = |threads: usize| {
            let pool = rayon::ThreadPoolBuilder::new()
                .num_threads(threads)
                .build()
                .unwrap();
            pool.install(|| {
                assemble_boundary_operator(OperatorKind::DoubleLayer, &space, &space, k, &quad)
                    .unwrap()
            })
        };
        let a = run(1);
        let b = run(4);
        for i in 0..a.nrows() {
            for j in 0..a.ncols() {
                assert_eq!(a.entry(i, j), b.entry(i, j), "entry ({i},{j})");
            }
        }
    }

    #[test]
    fn shared_pass_matches_individual_assembly() {
        let space = p1_space(1);
        let k = Wavenumber::new(2.0).unwrap();
        let quad = QuadConfig::default();
        let reqs = [
            OperatorRequest {
                kind: OperatorKind::SingleLayer,
                trial: &space,
                test: &space,
            },
            OperatorRequest {
                kind: OperatorKind::Hypersingular,
                trial: &space,
                test: &space,
            },
        ];
        let both = assemble_operators(&reqs, k, &quad).unwrap();
        let v = assemble_boundary_operator(OperatorKind::SingleLayer, &space, &space, k, &quad)
            .unwrap();
        for i in 0..v.nrows() {
            for j in 0..v.ncols() {
                assert_eq!(both[0].entry(i, j), v.entry(i, j));
            }
        }
    }

    #[test]
    fn functional_integrates_constants_to_area() {
        let mesh = Arc::new(build_icosphere::<f64>(1).unwrap());
        let space = DofSpace::new(SpaceKind::P1Continuous, mesh.clone());
        let m = assemble_functional(&space, &|_x| Complex64::new(1.0, 0.0), 4).unwrap();
        let total: Complex64 = m.iter().sum();
        let area: f64 = (0..mesh.n_triangles()).map(|t| mesh.area(t)).sum();
        assert_relative_eq!(total.re, area, max_relative = 1e-12);
        assert!(total.im.abs() < 1e-14);
    }

    #[test]
    fn interpolation_against_mass_quadrature() {
        // <u_I, 1> by mass matrix vs direct functional integration of u
        let mesh = Arc::new(build_icosphere::<f64>(2).unwrap());
        let space = DofSpace::new(SpaceKind::P1Continuous, mesh);
        let f = |x: [f64; 3]| Complex64::new(x[2], 0.0);
        let coeffs = space.interpolate(|x, _n| f(x));
        let m = assemble_mass(&space, &space).unwrap();
        let mut mc = vec![Complex64::new(0.0, 0.0); coeffs.len()];
        m.csr().matvec_add_complex(Complex64::new(1.0, 0.0), &coeffs, &mut mc);
        let lhs: Complex64 = mc.iter().sum();
        let rhs: Complex64 = assemble_functional(&space, &f, 4).unwrap().iter().sum();
        // interpolation of a linear function is exact on flat triangles
        assert_relative_eq!(lhs.re, rhs.re, max_relative = 1e-12, epsilon = 1e-13);
    }
}
