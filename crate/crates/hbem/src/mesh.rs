//! Triangulated closed surfaces: icosphere generation, adjacency
//! classification for singular quadrature, and a plain-text exchange format.

use std::collections::HashMap;
use std::io::{BufRead, BufReader, Write};
use std::path::Path;

use crate::geometry::{cross, dist, dot, normalize, scale, sub, Point3};
use crate::{lit, Error, Result, Scalar};

/// Largest icosphere refinement level the generator accepts.
pub const MAX_REFINEMENT_LEVEL: u32 = 7;

/// Immutable triangulated closed surface with the per-element data needed by
/// Galerkin assembly. Safe to share across threads.
#[derive(Debug, Clone)]
pub struct Mesh<T: Scalar> {
    vertices: Vec<Point3<T>>,
    triangles: Vec<[usize; 3]>,
    normals: Vec<Point3<T>>,
    areas: Vec<T>,
    centroids: Vec<Point3<T>>,
    diameters: Vec<T>,
    h_max: T,
}

/// Summary data for a mesh.
#[derive(Debug, Clone, Copy)]
pub struct MeshStats<T: Scalar> {
    pub h_max: T,
    pub min_area: T,
    pub total_area: T,
    pub n_vertices: usize,
    pub n_triangles: usize,
}

/// How two triangles of a mesh relate, by shared global vertices.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum PairTag {
    Coincident,
    EdgeAdjacent,
    VertexAdjacent,
    Disjoint,
}

/// Adjacency class of a triangle pair together with the local index
/// correspondence of the shared simplex, ordered by ascending local index
/// of the first triangle.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct PairClass {
    pub tag: PairTag,
    shared: [(u8, u8); 3],
    n_shared: u8,
}

impl PairClass {
    pub fn shared_vertices(&self) -> &[(u8, u8)] {
        &self.shared[..self.n_shared as usize]
    }
}

impl<T: Scalar> Mesh<T> {
    /// Builds a mesh and validates all invariants, including that the surface
    /// is closed and consistently oriented outward.
    pub fn new(vertices: Vec<Point3<T>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        let mesh = Self::from_parts(vertices, triangles)?;
        mesh.validate_closed()?;
        Ok(mesh)
    }

    /// Builds a mesh without the closed-surface check. Intended for small
    /// fixtures (single reference triangles and the like); boundary integral
    /// operators are only meaningful on closed surfaces.
    pub fn open_patch(vertices: Vec<Point3<T>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        Self::from_parts(vertices, triangles)
    }

    fn from_parts(vertices: Vec<Point3<T>>, triangles: Vec<[usize; 3]>) -> Result<Self> {
        if triangles.is_empty() {
            return Err(Error::InvalidMesh("mesh has no triangles".into()));
        }
        let n = vertices.len();
        let mut normals = Vec::with_capacity(triangles.len());
        let mut areas = Vec::with_capacity(triangles.len());
        let mut centroids = Vec::with_capacity(triangles.len());
        let mut diameters = Vec::with_capacity(triangles.len());
        let mut h_max = T::zero();
        let third = lit::<T>(1.0 / 3.0);
        for (t, tri) in triangles.iter().enumerate() {
            for &v in tri {
                if v >= n {
                    return Err(Error::InvalidMesh(format!(
                        "triangle {t} references vertex {v} out of {n}"
                    )));
                }
            }
            let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
            let nvec = cross(sub(b, a), sub(c, a));
            let two_area = crate::geometry::norm(nvec);
            let area = lit::<T>(0.5) * two_area;
            if !(area > T::zero()) || !area.is_finite() {
                return Err(Error::InvalidMesh(format!(
                    "triangle {t} is degenerate (area {area})"
                )));
            }
            let diam = dist(a, b).max(dist(b, c)).max(dist(c, a));
            h_max = h_max.max(diam);
            normals.push(scale(nvec, T::one() / two_area));
            areas.push(area);
            centroids.push(scale(
                [a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]],
                third,
            ));
            diameters.push(diam);
        }
        Ok(Mesh {
            vertices,
            triangles,
            normals,
            areas,
            centroids,
            diameters,
            h_max,
        })
    }

    /// Checks that every edge is shared by exactly two triangles traversed in
    /// opposite directions and that the enclosed volume is positive (outward
    /// orientation).
    pub fn validate_closed(&self) -> Result<()> {
        let mut edges: HashMap<(usize, usize), (usize, usize)> = HashMap::new();
        for tri in &self.triangles {
            for e in 0..3 {
                let (a, b) = (tri[e], tri[(e + 1) % 3]);
                let key = (a.min(b), a.max(b));
                let entry = edges.entry(key).or_insert((0, 0));
                if a < b {
                    entry.0 += 1;
                } else {
                    entry.1 += 1;
                }
            }
        }
        for (key, (fwd, bwd)) in &edges {
            if *fwd != 1 || *bwd != 1 {
                return Err(Error::InvalidMesh(format!(
                    "edge {key:?} seen {fwd} forward / {bwd} backward times; surface not closed and orientable"
                )));
            }
        }
        // signed volume via the divergence theorem
        let mut six_vol = T::zero();
        for tri in &self.triangles {
            let [a, b, c] = [
                self.vertices[tri[0]],
                self.vertices[tri[1]],
                self.vertices[tri[2]],
            ];
            six_vol += dot(a, cross(b, c));
        }
        if six_vol <= T::zero() {
            return Err(Error::InvalidMesh(
                "surface is oriented inward (negative volume)".into(),
            ));
        }
        Ok(())
    }

    pub fn n_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn n_triangles(&self) -> usize {
        self.triangles.len()
    }

    pub fn vertices(&self) -> &[Point3<T>] {
        &self.vertices
    }

    pub fn triangles(&self) -> &[[usize; 3]] {
        &self.triangles
    }

    pub fn triangle(&self, t: usize) -> [Point3<T>; 3] {
        let tri = self.triangles[t];
        [
            self.vertices[tri[0]],
            self.vertices[tri[1]],
            self.vertices[tri[2]],
        ]
    }

    pub fn normal(&self, t: usize) -> Point3<T> {
        self.normals[t]
    }

    pub fn area(&self, t: usize) -> T {
        self.areas[t]
    }

    pub fn centroid(&self, t: usize) -> Point3<T> {
        self.centroids[t]
    }

    pub fn diameter(&self, t: usize) -> T {
        self.diameters[t]
    }

    pub fn h_max(&self) -> T {
        self.h_max
    }

    /// Area-weighted vertex normals, normalized to unit length.
    pub fn vertex_normals(&self) -> Vec<Point3<T>> {
        let mut acc = vec![[T::zero(); 3]; self.vertices.len()];
        for (t, tri) in self.triangles.iter().enumerate() {
            let w = scale(self.normals[t], self.areas[t]);
            for &v in tri {
                acc[v] = crate::geometry::add(acc[v], w);
            }
        }
        acc.into_iter().map(normalize).collect()
    }

    /// Writes the plain-text exchange format: `nv nt`, then `x y z` lines,
    /// then 0-based `i j k` lines.
    pub fn write_text(&self, path: impl AsRef<Path>) -> Result<()> {
        let path = path.as_ref();
        let mut out = String::new();
        out.push_str(&format!("{} {}\n", self.n_vertices(), self.n_triangles()));
        for v in &self.vertices {
            out.push_str(&format!("{:.17e} {:.17e} {:.17e}\n", v[0], v[1], v[2]));
        }
        for t in &self.triangles {
            out.push_str(&format!("{} {} {}\n", t[0], t[1], t[2]));
        }
        let mut f = std::fs::File::create(path)
            .map_err(|e| Error::io(path.display().to_string(), e))?;
        f.write_all(out.as_bytes())
            .map_err(|e| Error::io(path.display().to_string(), e))
    }

    /// Reads the plain-text exchange format and validates the mesh.
    pub fn read_text(path: impl AsRef<Path>) -> Result<Self> {
        let path = path.as_ref();
        let file =
            std::fs::File::open(path).map_err(|e| Error::io(path.display().to_string(), e))?;
        let mut lines = BufReader::new(file).lines();
        let mut next_line = || -> Result<String> {
            loop {
                match lines.next() {
                    Some(Ok(l)) => {
                        if !l.trim().is_empty() {
                            return Ok(l);
                        }
                    }
                    Some(Err(e)) => return Err(Error::io(path.display().to_string(), e)),
                    None => return Err(Error::InvalidMesh("unexpected end of file".into())),
                }
            }
        };
        let header = next_line()?;
        let mut it = header.split_whitespace();
        let nv: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidMesh("bad header line".into()))?;
        let nt: usize = it
            .next()
            .and_then(|s| s.parse().ok())
            .ok_or_else(|| Error::InvalidMesh("bad header line".into()))?;
        let mut vertices = Vec::with_capacity(nv);
        for _ in 0..nv {
            let line = next_line()?;
            let coords: Vec<f64> = line
                .split_whitespace()
                .map(|s| s.parse::<f64>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidMesh(format!("bad vertex line: {line}")))?;
            if coords.len() != 3 {
                return Err(Error::InvalidMesh(format!("bad vertex line: {line}")));
            }
            vertices.push([lit::<T>(coords[0]), lit::<T>(coords[1]), lit::<T>(coords[2])]);
        }
        let mut triangles = Vec::with_capacity(nt);
        for _ in 0..nt {
            let line = next_line()?;
            let idx: Vec<usize> = line
                .split_whitespace()
                .map(|s| s.parse::<usize>())
                .collect::<std::result::Result<_, _>>()
                .map_err(|_| Error::InvalidMesh(format!("bad triangle line: {line}")))?;
            if idx.len() != 3 {
                return Err(Error::InvalidMesh(format!("bad triangle line: {line}")));
            }
            triangles.push([idx[0], idx[1], idx[2]]);
        }
        Mesh::new(vertices, triangles)
    }
}

/// Subdivides an icosahedron `level` times, projecting every vertex onto the
/// unit sphere. Orientation is outward.
pub fn build_icosphere<T: Scalar>(level: u32) -> Result<Mesh<T>> {
    if level > MAX_REFINEMENT_LEVEL {
        return Err(Error::Capacity {
            level,
            max: MAX_REFINEMENT_LEVEL,
        });
    }
    let phi = (1.0 + 5f64.sqrt()) / 2.0;
    let raw: [[f64; 3]; 12] = [
        [-1.0, phi, 0.0],
        [1.0, phi, 0.0],
        [-1.0, -phi, 0.0],
        [1.0, -phi, 0.0],
        [0.0, -1.0, phi],
        [0.0, 1.0, phi],
        [0.0, -1.0, -phi],
        [0.0, 1.0, -phi],
        [phi, 0.0, -1.0],
        [phi, 0.0, 1.0],
        [-phi, 0.0, -1.0],
        [-phi, 0.0, 1.0],
    ];
    let mut vertices: Vec<Point3<T>> = raw
        .iter()
        .map(|v| normalize([lit(v[0]), lit(v[1]), lit(v[2])]))
        .collect();
    let mut triangles: Vec<[usize; 3]> = vec![
        [0, 11, 5],
        [0, 5, 1],
        [0, 1, 7],
        [0, 7, 10],
        [0, 10, 11],
        [1, 5, 9],
        [5, 11, 4],
        [11, 10, 2],
        [10, 7, 6],
        [7, 1, 8],
        [3, 9, 4],
        [3, 4, 2],
        [3, 2, 6],
        [3, 6, 8],
        [3, 8, 9],
        [4, 9, 5],
        [2, 4, 11],
        [6, 2, 10],
        [8, 6, 7],
        [9, 8, 1],
    ];
    // make the base winding outward; subdivision preserves it
    for tri in triangles.iter_mut() {
        let [a, b, c] = [vertices[tri[0]], vertices[tri[1]], vertices[tri[2]]];
        let n = cross(sub(b, a), sub(c, a));
        let centroid = [a[0] + b[0] + c[0], a[1] + b[1] + c[1], a[2] + b[2] + c[2]];
        if dot(centroid, n) < T::zero() {
            tri.swap(1, 2);
        }
    }

    for _ in 0..level {
        let mut midpoint: HashMap<(usize, usize), usize> = HashMap::new();
        let mut next = Vec::with_capacity(triangles.len() * 4);
        for tri in &triangles {
            let mut mid = |i: usize, j: usize, vertices: &mut Vec<Point3<T>>| -> usize {
                let key = (i.min(j), i.max(j));
                if let Some(&m) = midpoint.get(&key) {
                    return m;
                }
                let m = normalize(scale(
                    crate::geometry::add(vertices[i], vertices[j]),
                    lit(0.5),
                ));
                vertices.push(m);
                let idx = vertices.len() - 1;
                midpoint.insert(key, idx);
                idx
            };
            let [a, b, c] = *tri;
            let ab = mid(a, b, &mut vertices);
            let bc = mid(b, c, &mut vertices);
            let ca = mid(c, a, &mut vertices);
            next.push([a, ab, ca]);
            next.push([b, bc, ab]);
            next.push([c, ca, bc]);
            next.push([ab, bc, ca]);
        }
        triangles = next;
    }
    Mesh::new(vertices, triangles)
}

/// Picks the refinement level whose achieved `h_max` is closest to `target`
/// in log scale and returns the level together with the mesh.
pub fn build_icosphere_for_target<T: Scalar>(target: T) -> Result<(u32, Mesh<T>)> {
    if !(target > T::zero()) {
        return Err(Error::Config(format!("h target must be positive, got {target}")));
    }
    let mut best: Option<(u32, Mesh<T>, T)> = None;
    for level in 0..=MAX_REFINEMENT_LEVEL {
        let mesh = build_icosphere::<T>(level)?;
        let d = (mesh.h_max() / target).ln().abs();
        let done = mesh.h_max() < target;
        match &best {
            Some((_, _, dist)) if *dist <= d => {}
            _ => best = Some((level, mesh, d)),
        }
        if done {
            break;
        }
    }
    let (level, mesh, _) = best.expect("at least one level is generated");
    Ok((level, mesh))
}

/// Classifies a triangle pair by its number of shared global vertices.
pub fn classify_pair<T: Scalar>(mesh: &Mesh<T>, i: usize, j: usize) -> PairClass {
    let ti = mesh.triangles[i];
    let tj = mesh.triangles[j];
    let mut shared = [(0u8, 0u8); 3];
    let mut n_shared = 0u8;
    for (li, vi) in ti.iter().enumerate() {
        for (lj, vj) in tj.iter().enumerate() {
            if vi == vj {
                shared[n_shared as usize] = (li as u8, lj as u8);
                n_shared += 1;
            }
        }
    }
    let tag = match n_shared {
        3 => PairTag::Coincident,
        2 => PairTag::EdgeAdjacent,
        1 => PairTag::VertexAdjacent,
        _ => PairTag::Disjoint,
    };
    PairClass {
        tag,
        shared,
        n_shared,
    }
}

/// Computes summary statistics for a mesh.
pub fn mesh_stats<T: Scalar>(mesh: &Mesh<T>) -> MeshStats<T> {
    let mut min_area = T::infinity();
    let mut total_area = T::zero();
    for &a in &mesh.areas {
        min_area = min_area.min(a);
        total_area += a;
    }
    MeshStats {
        h_max: mesh.h_max,
        min_area,
        total_area,
        n_vertices: mesh.n_vertices(),
        n_triangles: mesh.n_triangles(),
    }
}
