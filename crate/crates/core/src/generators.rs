//! Parametrised triangulation families, truncated at a finite depth.
//!
//! Every generator numbers vertices `0, 1, 2, ...` layer by layer, records the
//! layer of each vertex in the [`Layout`](crate::complex::Layout) and marks the
//! outermost layer as truncation boundary.

use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::complex::{ComplexError, Triangulation, TriangulationBuilder, VertexId};

/// Refuse to materialise complexes larger than this many vertices.
pub const MAX_VERTICES: usize = 4_000_000;

#[derive(Debug, Error)]
pub enum GeneratorError {
    #[error("off({n}) is not a positive integer")]
    OffspringNotRepresentable { n: usize },
    #[error("offspring sequence is undefined at level {n}")]
    OffspringUndefined { n: usize },
    #[error("complex would have {vertices} vertices (limit {MAX_VERTICES})")]
    TooLarge { vertices: u128 },
    #[error("invalid layer sizes: {0}")]
    InvalidSizes(String),
    #[error("invalid parameter: {0}")]
    InvalidParameter(String),
    #[error(transparent)]
    Complex(#[from] ComplexError),
}

/// User-supplied offspring function.
#[derive(Clone)]
pub struct OffspringFn(pub Arc<dyn Fn(usize) -> u128 + Send + Sync>);

impl fmt::Debug for OffspringFn {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("OffspringFn(..)")
    }
}

/// Child count per generation of a triangular tree.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "kind")]
pub enum OffspringSpec {
    /// `off(n) = floor(n^alpha) + 1`
    #[serde(rename = "poly")]
    PolynomialFloor { alpha: f64 },
    /// `off(n) = ceil(q^n)`
    #[serde(rename = "geom")]
    Geometric { q: f64 },
    #[serde(rename = "const")]
    Constant { k: u64 },
    #[serde(rename = "explicit")]
    Explicit { values: Vec<u128> },
    #[serde(skip)]
    Custom(OffspringFn),
}

impl OffspringSpec {
    /// `off(n)`, or `None` past the end of an explicit sequence.
    pub fn off(&self, n: usize) -> Option<u128> {
        match self {
            OffspringSpec::PolynomialFloor { alpha } => Some((n as f64).powf(*alpha).floor() as u128 + 1),
            OffspringSpec::Geometric { q } => Some((q.powi(n as i32).ceil() as u128).max(1)),
            OffspringSpec::Constant { k } => Some(u128::from(*k)),
            OffspringSpec::Explicit { values } => values.get(n).copied(),
            OffspringSpec::Custom(f) => Some((f.0)(n)),
        }
    }

    pub fn off_checked(&self, n: usize) -> Result<u128, GeneratorError> {
        match self.off(n) {
            None => Err(GeneratorError::OffspringUndefined { n }),
            Some(0) => Err(GeneratorError::OffspringNotRepresentable { n }),
            Some(k) => Ok(k),
        }
    }

    /// Sphere cardinalities `#S_0 .. #S_depth` of the tree this spec generates.
    pub fn sphere_sizes(&self, depth: usize) -> Result<Vec<u128>, GeneratorError> {
        let mut sizes = vec![1u128];
        for n in 0..depth {
            let next = sizes[n]
                .checked_mul(self.off_checked(n)?)
                .ok_or(GeneratorError::TooLarge { vertices: u128::MAX })?;
            sizes.push(next);
        }
        Ok(sizes)
    }

    /// Parses the CLI short form: `poly:2`, `geom:1.5`, `const:4`, `explicit:2,8,512`.
    pub fn parse(s: &str) -> Result<Self, GeneratorError> {
        let bad = || GeneratorError::InvalidParameter(format!("cannot parse offspring spec {s:?}"));
        let (kind, arg) = s.split_once(':').ok_or_else(bad)?;
        let spec = match kind {
            "poly" => OffspringSpec::PolynomialFloor { alpha: arg.parse().map_err(|_| bad())? },
            "geom" => OffspringSpec::Geometric { q: arg.parse().map_err(|_| bad())? },
            "const" => OffspringSpec::Constant { k: arg.parse().map_err(|_| bad())? },
            "explicit" => OffspringSpec::Explicit {
                values: arg.split(',').map(|t| t.trim().parse()).collect::<Result<_, _>>().map_err(|_| bad())?,
            },
            _ => return Err(bad()),
        };
        Ok(spec)
    }
}

/// How consecutive layers are stitched together.
#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum Wiring {
    /// Each layer is a path; consecutive paths are zipped into a triangulated strip.
    #[default]
    Strip,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LayerSpec {
    pub sizes: Vec<usize>,
    #[serde(default)]
    pub wiring: Wiring,
}

fn id(i: usize) -> VertexId {
    VertexId(i as i64)
}

/// Accumulates a layered complex with sequential vertex ids and unit weights.
struct LayeredBuilder {
    builder: TriangulationBuilder,
    layers: Vec<(VertexId, usize)>,
    next: usize,
}

impl LayeredBuilder {
    fn new() -> Self {
        LayeredBuilder { builder: TriangulationBuilder::new(), layers: Vec::new(), next: 0 }
    }

    fn add_layer(&mut self, layer: usize, count: usize) -> Vec<usize> {
        let start = self.next;
        for v in start..start + count {
            self.builder.vertex(id(v), 1.0);
            self.layers.push((id(v), layer));
        }
        self.next += count;
        (start..start + count).collect()
    }

    fn edge(&mut self, a: usize, b: usize) {
        self.builder.edge(id(a), id(b), 1.0);
    }

    fn face(&mut self, a: usize, b: usize, c: usize) {
        self.builder.face([id(a), id(b), id(c)], 1.0);
    }

    fn finish(mut self, boundary: &[usize]) -> Result<Triangulation, GeneratorError> {
        self.builder.origin(id(0)).layers(self.layers).boundary(boundary.iter().map(|&v| id(v)));
        Ok(self.builder.build()?)
    }
}

fn check_size(total: u128) -> Result<(), GeneratorError> {
    if total > MAX_VERTICES as u128 {
        Err(GeneratorError::TooLarge { vertices: total })
    } else {
        Ok(())
    }
}

/// Patch of the 6-regular triangular lattice: all vertices within hex
/// distance `radius` of the origin, unit weights, every lattice triangle a face.
pub fn regular_patch(radius: usize) -> Result<Triangulation, GeneratorError> {
    if radius == 0 {
        return Err(GeneratorError::InvalidParameter("radius must be at least 1".into()));
    }
    check_size(1 + 3 * radius as u128 * (radius as u128 + 1))?;
    const DIRS: [(i64, i64); 6] = [(1, 0), (1, -1), (0, -1), (-1, 0), (-1, 1), (0, 1)];
    let mut coords = vec![(0i64, 0i64)];
    let mut ring_of = vec![0usize];
    for k in 1..=radius as i64 {
        let (mut q, mut r) = (DIRS[4].0 * k, DIRS[4].1 * k);
        for dir in DIRS {
            for _ in 0..k {
                coords.push((q, r));
                ring_of.push(k as usize);
                q += dir.0;
                r += dir.1;
            }
        }
    }
    let position: std::collections::HashMap<(i64, i64), usize> =
        coords.iter().enumerate().map(|(i, &p)| (p, i)).collect();

    let mut b = TriangulationBuilder::new();
    for v in 0..coords.len() {
        b.vertex(id(v), 1.0);
    }
    for (v, &(q, r)) in coords.iter().enumerate() {
        for &(dq, dr) in &DIRS[..3] {
            if let Some(&w) = position.get(&(q + dq, r + dr)) {
                b.edge(id(v), id(w), 1.0);
            }
        }
    }
    b.origin(id(0))
        .layers(ring_of.iter().enumerate().map(|(v, &k)| (id(v), k)).collect())
        .boundary((0..coords.len()).filter(|&v| ring_of[v] == radius).map(id));
    Ok(b.build()?.complete_triangles())
}

/// Triangular tree of the given depth: every vertex of `S_n` has `off(n)`
/// children, the children of one parent form a path, and each pair of
/// consecutive siblings spans a face with their parent.
pub fn triangular_tree(off: &OffspringSpec, depth: usize) -> Result<Triangulation, GeneratorError> {
    let sizes = off.sphere_sizes(depth)?;
    check_size(sizes.iter().sum())?;
    let mut lb = LayeredBuilder::new();
    let mut current = lb.add_layer(0, 1);
    for n in 0..depth {
        let children_per = off.off_checked(n)? as usize;
        let mut next = Vec::with_capacity(current.len() * children_per);
        for &parent in &current {
            let children = lb.add_layer(n + 1, children_per);
            for &ch in &children {
                lb.edge(parent, ch);
            }
            for pair in children.windows(2) {
                lb.edge(pair[0], pair[1]);
                lb.face(parent, pair[0], pair[1]);
            }
            next.extend(children);
        }
        current = next;
    }
    lb.finish(&current)
}

/// Complex with a 1-dimensional decomposition `S_0, ..., S_depth` of the
/// given sizes, stitched according to `spec.wiring`.
pub fn layered_triangulation(spec: &LayerSpec, depth: usize) -> Result<Triangulation, GeneratorError> {
    if spec.sizes.len() <= depth {
        return Err(GeneratorError::InvalidSizes(format!(
            "need {} layer sizes, got {}",
            depth + 1,
            spec.sizes.len()
        )));
    }
    if spec.sizes[..=depth].contains(&0) {
        return Err(GeneratorError::InvalidSizes("layer sizes must be positive".into()));
    }
    check_size(spec.sizes[..=depth].iter().map(|&s| s as u128).sum())?;
    let mut lb = LayeredBuilder::new();
    let mut layers: Vec<Vec<usize>> = Vec::new();
    for n in 0..=depth {
        let layer = lb.add_layer(n, spec.sizes[n]);
        for pair in layer.windows(2) {
            lb.edge(pair[0], pair[1]);
        }
        if let Some(prev) = layers.last() {
            match spec.wiring {
                Wiring::Strip => zip_strip(&mut lb, prev, &layer),
            }
        }
        layers.push(layer);
    }
    let boundary = layers.last().cloned().unwrap_or_default();
    Ok(lb.finish(&boundary)?.complete_triangles())
}

/// Triangulates the strip between two paths by advancing along whichever
/// path is proportionally behind.
fn zip_strip(lb: &mut LayeredBuilder, p: &[usize], q: &[usize]) {
    let (a, b) = (p.len(), q.len());
    let (mut i, mut j) = (0, 0);
    lb.edge(p[0], q[0]);
    while i + 1 < a || j + 1 < b {
        let advance_p = if i + 1 == a {
            false
        } else if j + 1 == b {
            true
        } else {
            (i + 1) * (b - 1) <= (j + 1) * (a - 1)
        };
        if advance_p {
            lb.face(p[i], p[i + 1], q[j]);
            i += 1;
        } else {
            lb.face(q[j], q[j + 1], p[i]);
            j += 1;
        }
        lb.edge(p[i], q[j]);
    }
}

/// The alternating family: every odd sphere `S_{2n+1}` is a single edge, every
/// even-sphere vertex is joined to both endpoints of the neighbouring odd
/// edges, and the faces are exactly `(e_{2n+1}, x)` with `x` in `S_{2n}` or
/// `S_{2n+2}`. `even_sizes[m]` is `#S_{2m}`; `depth` is the outermost sphere.
pub fn bipartite_layer_family(even_sizes: &[usize], depth: usize) -> Result<Triangulation, GeneratorError> {
    if depth == 0 {
        return Err(GeneratorError::InvalidParameter("depth must be at least 1".into()));
    }
    let needed = depth / 2 + 1;
    if even_sizes.len() < needed {
        return Err(GeneratorError::InvalidSizes(format!("need {needed} even sphere sizes, got {}", even_sizes.len())));
    }
    if even_sizes[..needed].contains(&0) {
        return Err(GeneratorError::InvalidSizes("sphere sizes must be positive".into()));
    }
    check_size(even_sizes[..needed].iter().map(|&s| s as u128).sum::<u128>() + 2 * (depth as u128 / 2 + 1))?;
    let mut lb = LayeredBuilder::new();
    let mut spheres: Vec<Vec<usize>> = Vec::new();
    for n in 0..=depth {
        let count = if n % 2 == 0 { even_sizes[n / 2] } else { 2 };
        spheres.push(lb.add_layer(n, count));
    }
    for n in (1..=depth).step_by(2) {
        let (a, b) = (spheres[n][0], spheres[n][1]);
        lb.edge(a, b);
        let below = spheres[n - 1].clone();
        let above = spheres.get(n + 1).cloned().unwrap_or_default();
        for x in below.into_iter().chain(above) {
            lb.edge(a, x);
            lb.edge(b, x);
            lb.face(a, b, x);
        }
    }
    let boundary = spheres[depth].clone();
    lb.finish(&boundary)
}

/// Serialisable generator descriptor, as accepted by the CLI.
#[derive(Clone, Debug, Serialize, Deserialize)]
#[serde(tag = "family", rename_all = "snake_case")]
pub enum GeneratorDescriptor {
    Triangle,
    Regular { radius: usize },
    Tree { off: OffspringSpec, depth: usize },
    Layered { sizes: Vec<usize>, depth: usize, #[serde(default)] wiring: Wiring },
    Bipartite { sizes: Vec<usize>, depth: usize },
}

impl GeneratorDescriptor {
    pub fn generate(&self) -> Result<Triangulation, GeneratorError> {
        match self {
            GeneratorDescriptor::Triangle => {
                let mut lb = LayeredBuilder::new();
                lb.add_layer(0, 1);
                lb.add_layer(1, 2);
                lb.edge(0, 1);
                lb.edge(1, 2);
                lb.edge(2, 0);
                lb.face(0, 1, 2);
                lb.finish(&[])
            }
            GeneratorDescriptor::Regular { radius } => regular_patch(*radius),
            GeneratorDescriptor::Tree { off, depth } => triangular_tree(off, *depth),
            GeneratorDescriptor::Layered { sizes, depth, wiring } => {
                layered_triangulation(&LayerSpec { sizes: sizes.clone(), wiring: *wiring }, *depth)
            }
            GeneratorDescriptor::Bipartite { sizes, depth } => bipartite_layer_family(sizes, *depth),
        }
    }
}
