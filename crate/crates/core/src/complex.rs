//! Finite weighted triangulations.
//!
//! A [`Triangulation`] stores vertices with weights `c`, undirected edges with
//! weights `r` and triangular faces with weights `s`. Edges and faces are kept
//! once, on a canonical representative: an edge as the pair `(a, b)` with `a`
//! inserted before `b`, a face as its vertex triple sorted by insertion order.
//! Orientation is recovered from the parity of the permutation that maps a
//! requested vertex tuple onto the canonical one.

use std::collections::{HashMap, HashSet, VecDeque};
use std::fmt;
use std::sync::atomic::{AtomicU64, Ordering};

use serde::{Deserialize, Serialize};
use thiserror::Error;

static NEXT_COMPLEX_ID: AtomicU64 = AtomicU64::new(1);

/// Opaque vertex identifier.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(transparent)]
pub struct VertexId(pub i64);

impl fmt::Display for VertexId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.0)
    }
}

/// An oriented edge `tail -> head`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct EdgeKey {
    pub tail: VertexId,
    pub head: VertexId,
}

impl EdgeKey {
    pub fn new(tail: VertexId, head: VertexId) -> Self {
        EdgeKey { tail, head }
    }

    pub fn reversed(self) -> Self {
        EdgeKey { tail: self.head, head: self.tail }
    }
}

impl fmt::Display for EdgeKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.tail, self.head)
    }
}

/// An oriented triangular face, stored as its canonical triple plus a sign.
///
/// `orientation` is `+1` when the face was requested in an even permutation
/// of the canonical triple and `-1` otherwise.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct FaceKey {
    pub canonical: [VertexId; 3],
    pub orientation: i8,
}

impl fmt::Display for FaceKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let [a, b, c] = self.canonical;
        let sign = if self.orientation < 0 { "-" } else { "" };
        write!(f, "{sign}[{a},{b},{c}]")
    }
}

#[derive(Debug, Clone, PartialEq, Error)]
pub enum ComplexError {
    #[error("complex has no vertices")]
    EmptyComplex,
    #[error("duplicate vertex {0}")]
    DuplicateVertex(VertexId),
    #[error("unknown vertex {0}")]
    UnknownVertex(VertexId),
    #[error("unknown edge {0}")]
    UnknownEdge(EdgeKey),
    #[error("unknown face [{},{},{}]", .0[0], .0[1], .0[2])]
    UnknownFace([VertexId; 3]),
    #[error("loop edge at vertex {0}")]
    LoopEdge(VertexId),
    #[error("face [{},{},{}] repeats a vertex", .0[0], .0[1], .0[2])]
    DegenerateFace([VertexId; 3]),
    #[error("face [{},{},{}] needs edge {edge} which is not in the complex", .face[0], .face[1], .face[2])]
    MissingEdgeForFace { face: [VertexId; 3], edge: EdgeKey },
    #[error("weight {weight} on {simplex} is not a positive finite number")]
    NonPositiveWeight { simplex: String, weight: f64 },
    #[error("{simplex} listed twice with different weights")]
    InconsistentWeight { simplex: String },
    #[error("complex is disconnected: vertex {0} is unreachable from the first vertex")]
    DisconnectedComplex(VertexId),
}

/// Optional layer metadata attached by the generators.
///
/// `layer[i]` is the sphere (or decomposition layer) index of the `i`-th
/// vertex in insertion order; `boundary[i]` marks vertices on the truncation
/// rim, where the finite complex differs from the infinite family it samples.
#[derive(Clone, Debug, Default, PartialEq)]
pub struct Layout {
    pub origin: Option<usize>,
    pub layer: Option<Vec<usize>>,
    pub boundary: Vec<bool>,
}

/// A validated, immutable, connected weighted triangulation.
#[derive(Clone, Debug)]
pub struct Triangulation {
    id: u64,
    vertex_ids: Vec<VertexId>,
    index: HashMap<VertexId, usize>,
    c: Vec<f64>,
    edges: Vec<[usize; 2]>,
    r: Vec<f64>,
    edge_index: HashMap<[usize; 2], usize>,
    faces: Vec<[usize; 3]>,
    s: Vec<f64>,
    face_index: HashMap<[usize; 3], usize>,
    /// vertex -> (neighbour, canonical edge), sorted by neighbour
    star: Vec<Vec<(usize, usize)>>,
    /// canonical edge -> (face, apex), sorted by apex
    edge_faces: Vec<Vec<(usize, usize)>>,
    layout: Layout,
}

/// Collects simplices and weights, then validates them into a [`Triangulation`].
#[derive(Clone, Debug, Default)]
pub struct TriangulationBuilder {
    vertices: Vec<(VertexId, f64)>,
    edges: Vec<(VertexId, VertexId, f64)>,
    faces: Vec<([VertexId; 3], f64)>,
    origin: Option<VertexId>,
    layers: Option<Vec<(VertexId, usize)>>,
    boundary: Vec<VertexId>,
}

impl TriangulationBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn vertex(&mut self, id: VertexId, c: f64) -> &mut Self {
        self.vertices.push((id, c));
        self
    }

    pub fn edge(&mut self, tail: VertexId, head: VertexId, r: f64) -> &mut Self {
        self.edges.push((tail, head, r));
        self
    }

    pub fn face(&mut self, vertices: [VertexId; 3], s: f64) -> &mut Self {
        self.faces.push((vertices, s));
        self
    }

    pub fn origin(&mut self, o: VertexId) -> &mut Self {
        self.origin = Some(o);
        self
    }

    pub fn layers(&mut self, layers: Vec<(VertexId, usize)>) -> &mut Self {
        self.layers = Some(layers);
        self
    }

    pub fn boundary(&mut self, ids: impl IntoIterator<Item = VertexId>) -> &mut Self {
        self.boundary.extend(ids);
        self
    }

    pub fn build(&self) -> Result<Triangulation, ComplexError> {
        if self.vertices.is_empty() {
            return Err(ComplexError::EmptyComplex);
        }
        let mut index = HashMap::with_capacity(self.vertices.len());
        let mut vertex_ids = Vec::with_capacity(self.vertices.len());
        let mut c = Vec::with_capacity(self.vertices.len());
        for &(id, w) in &self.vertices {
            check_weight(w, || format!("vertex {id}"))?;
            if index.insert(id, vertex_ids.len()).is_some() {
                return Err(ComplexError::DuplicateVertex(id));
            }
            vertex_ids.push(id);
            c.push(w);
        }
        let lookup = |id: VertexId| index.get(&id).copied().ok_or(ComplexError::UnknownVertex(id));

        let mut edge_index: HashMap<[usize; 2], usize> = HashMap::new();
        let mut edges = Vec::new();
        let mut r = Vec::new();
        for &(x, y, w) in &self.edges {
            let (a, b) = (lookup(x)?, lookup(y)?);
            if a == b {
                return Err(ComplexError::LoopEdge(x));
            }
            check_weight(w, || format!("edge {}", EdgeKey::new(x, y)))?;
            let key = sorted2(a, b);
            match edge_index.get(&key) {
                Some(&e) if r[e] != w => {
                    return Err(ComplexError::InconsistentWeight {
                        simplex: format!("edge {}", EdgeKey::new(x, y)),
                    })
                }
                Some(_) => {}
                None => {
                    edge_index.insert(key, edges.len());
                    edges.push(key);
                    r.push(w);
                }
            }
        }

        let mut face_index: HashMap<[usize; 3], usize> = HashMap::new();
        let mut faces = Vec::new();
        let mut s = Vec::new();
        for &(vs, w) in &self.faces {
            let idx = [lookup(vs[0])?, lookup(vs[1])?, lookup(vs[2])?];
            if idx[0] == idx[1] || idx[1] == idx[2] || idx[0] == idx[2] {
                return Err(ComplexError::DegenerateFace(vs));
            }
            check_weight(w, || format!("face [{},{},{}]", vs[0], vs[1], vs[2]))?;
            for (p, q) in [(0, 1), (1, 2), (2, 0)] {
                if !edge_index.contains_key(&sorted2(idx[p], idx[q])) {
                    return Err(ComplexError::MissingEdgeForFace {
                        face: vs,
                        edge: EdgeKey::new(vs[p], vs[q]),
                    });
                }
            }
            let (key, _) = canonical3(idx);
            match face_index.get(&key) {
                Some(&f) if s[f] != w => {
                    return Err(ComplexError::InconsistentWeight {
                        simplex: format!("face [{},{},{}]", vs[0], vs[1], vs[2]),
                    })
                }
                Some(_) => {}
                None => {
                    face_index.insert(key, faces.len());
                    faces.push(key);
                    s.push(w);
                }
            }
        }

        let n = vertex_ids.len();
        let mut layout = Layout { boundary: vec![false; n], ..Layout::default() };
        if let Some(o) = self.origin {
            layout.origin = Some(lookup(o)?);
        }
        if let Some(layers) = &self.layers {
            let mut layer = vec![0; n];
            for &(id, l) in layers {
                layer[lookup(id)?] = l;
            }
            layout.layer = Some(layer);
        }
        for &id in &self.boundary {
            layout.boundary[lookup(id)?] = true;
        }

        let tri = Triangulation::from_parts(vertex_ids, c, edges, r, faces, s, layout);
        tri.check_connected()?;
        Ok(tri)
    }
}

fn check_weight(w: f64, what: impl FnOnce() -> String) -> Result<(), ComplexError> {
    if w.is_finite() && w > 0.0 {
        Ok(())
    } else {
        Err(ComplexError::NonPositiveWeight { simplex: what(), weight: w })
    }
}

fn sorted2(a: usize, b: usize) -> [usize; 2] {
    if a < b {
        [a, b]
    } else {
        [b, a]
    }
}

/// Sorts a triple of distinct indices and returns the permutation parity
/// (`+1` even, `-1` odd).
pub(crate) fn canonical3(mut v: [usize; 3]) -> ([usize; 3], i8) {
    let mut sign = 1i8;
    if v[0] > v[1] {
        v.swap(0, 1);
        sign = -sign;
    }
    if v[1] > v[2] {
        v.swap(1, 2);
        sign = -sign;
    }
    if v[0] > v[1] {
        v.swap(0, 1);
        sign = -sign;
    }
    (v, sign)
}

impl Triangulation {
    pub fn builder() -> TriangulationBuilder {
        TriangulationBuilder::new()
    }

    /// Builds a complex from weighted simplex lists. Edges may be listed in one
    /// orientation only; the reverse orientation is added with the same weight.
    pub fn build(
        vertices: &[(VertexId, f64)],
        edges: &[(VertexId, VertexId, f64)],
        faces: &[([VertexId; 3], f64)],
    ) -> Result<Self, ComplexError> {
        let mut b = TriangulationBuilder::new();
        b.vertices = vertices.to_vec();
        b.edges = edges.to_vec();
        b.faces = faces.to_vec();
        b.build()
    }

    fn from_parts(
        vertex_ids: Vec<VertexId>,
        c: Vec<f64>,
        edges: Vec<[usize; 2]>,
        r: Vec<f64>,
        faces: Vec<[usize; 3]>,
        s: Vec<f64>,
        layout: Layout,
    ) -> Self {
        let index = vertex_ids.iter().enumerate().map(|(i, &v)| (v, i)).collect();
        let edge_index = edges.iter().enumerate().map(|(i, &e)| (e, i)).collect();
        let face_index: HashMap<[usize; 3], usize> =
            faces.iter().enumerate().map(|(i, &f)| (f, i)).collect();
        let mut star = vec![Vec::new(); vertex_ids.len()];
        for (e, &[a, b]) in edges.iter().enumerate() {
            star[a].push((b, e));
            star[b].push((a, e));
        }
        for nb in &mut star {
            nb.sort_unstable();
        }
        let mut edge_faces = vec![Vec::new(); edges.len()];
        let edge_lookup: &HashMap<[usize; 2], usize> = &edge_index;
        for (f, &[a, b, c3]) in faces.iter().enumerate() {
            edge_faces[edge_lookup[&[a, b]]].push((f, c3));
            edge_faces[edge_lookup[&[b, c3]]].push((f, a));
            edge_faces[edge_lookup[&[a, c3]]].push((f, b));
        }
        for ring in &mut edge_faces {
            ring.sort_unstable_by_key(|&(_, apex)| apex);
        }
        Triangulation {
            id: NEXT_COMPLEX_ID.fetch_add(1, Ordering::Relaxed),
            vertex_ids,
            index,
            c,
            edges,
            r,
            edge_index,
            faces,
            s,
            face_index,
            star,
            edge_faces,
            layout,
        }
    }

    fn check_connected(&self) -> Result<(), ComplexError> {
        let dist = self.distances_from(0);
        match dist.iter().position(|&d| d == usize::MAX) {
            Some(i) => Err(ComplexError::DisconnectedComplex(self.vertex_ids[i])),
            None => Ok(()),
        }
    }

    /// Identity token shared by clones; cochains use it to refuse mixing complexes.
    pub fn id(&self) -> u64 {
        self.id
    }

    pub fn num_vertices(&self) -> usize {
        self.vertex_ids.len()
    }

    /// Number of canonical (unoriented) edges.
    pub fn num_edges(&self) -> usize {
        self.edges.len()
    }

    pub fn num_faces(&self) -> usize {
        self.faces.len()
    }

    pub fn vertex_ids(&self) -> &[VertexId] {
        &self.vertex_ids
    }

    pub fn vertex_id(&self, i: usize) -> VertexId {
        self.vertex_ids[i]
    }

    pub fn vertex_index(&self, id: VertexId) -> Result<usize, ComplexError> {
        self.index.get(&id).copied().ok_or(ComplexError::UnknownVertex(id))
    }

    /// Canonical edges as index pairs `[a, b]` with `a < b`.
    pub fn edges(&self) -> &[[usize; 2]] {
        &self.edges
    }

    /// Canonical faces as sorted index triples.
    pub fn faces(&self) -> &[[usize; 3]] {
        &self.faces
    }

    pub fn vertex_weights(&self) -> &[f64] {
        &self.c
    }

    pub fn edge_weights(&self) -> &[f64] {
        &self.r
    }

    pub fn face_weights(&self) -> &[f64] {
        &self.s
    }

    /// Inner-product weights of the canonical `k`-simplices.
    pub fn weights(&self, k: usize) -> &[f64] {
        match k {
            0 => &self.c,
            1 => &self.r,
            2 => &self.s,
            _ => panic!("no {k}-simplices in a triangulation"),
        }
    }

    pub fn num_simplices(&self, k: usize) -> usize {
        self.weights(k).len()
    }

    /// Neighbours of vertex `v` with the connecting canonical edge.
    pub fn star(&self, v: usize) -> &[(usize, usize)] {
        &self.star[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.star[v].len()
    }

    /// Faces on canonical edge `e` as `(face, apex)` pairs.
    pub fn edge_ring(&self, e: usize) -> &[(usize, usize)] {
        &self.edge_faces[e]
    }

    /// Canonical edge index and orientation sign of the oriented edge `a -> b`.
    pub fn find_edge(&self, a: usize, b: usize) -> Option<(usize, f64)> {
        let key = sorted2(a, b);
        self.edge_index.get(&key).map(|&e| (e, if a < b { 1.0 } else { -1.0 }))
    }

    /// Canonical face index and orientation sign of the oriented face `(a, b, c)`.
    pub fn find_face(&self, a: usize, b: usize, c: usize) -> Option<(usize, f64)> {
        if a == b || b == c || a == c {
            return None;
        }
        let (key, sign) = canonical3([a, b, c]);
        self.face_index.get(&key).map(|&f| (f, f64::from(sign)))
    }

    pub fn edge_key(&self, e: usize) -> EdgeKey {
        let [a, b] = self.edges[e];
        EdgeKey::new(self.vertex_ids[a], self.vertex_ids[b])
    }

    pub fn face_key(&self, f: usize) -> FaceKey {
        let [a, b, c] = self.faces[f];
        FaceKey {
            canonical: [self.vertex_ids[a], self.vertex_ids[b], self.vertex_ids[c]],
            orientation: 1,
        }
    }

    /// Resolves an oriented vertex triple to its [`FaceKey`].
    pub fn face_key_of(&self, vs: [VertexId; 3]) -> Result<FaceKey, ComplexError> {
        let idx = [self.vertex_index(vs[0])?, self.vertex_index(vs[1])?, self.vertex_index(vs[2])?];
        let (f, sign) = self.find_face(idx[0], idx[1], idx[2]).ok_or(ComplexError::UnknownFace(vs))?;
        let mut key = self.face_key(f);
        key.orientation = sign as i8;
        Ok(key)
    }

    pub fn has_edge(&self, e: EdgeKey) -> bool {
        match (self.index.get(&e.tail), self.index.get(&e.head)) {
            (Some(&a), Some(&b)) => self.find_edge(a, b).is_some(),
            _ => false,
        }
    }

    pub fn layout(&self) -> &Layout {
        &self.layout
    }

    pub fn origin(&self) -> usize {
        self.layout.origin.unwrap_or(0)
    }

    pub fn is_boundary_vertex(&self, v: usize) -> bool {
        self.layout.boundary.get(v).copied().unwrap_or(false)
    }

    /// An edge is interior when neither endpoint lies on the truncation rim,
    /// so its full operator stencil is present in the finite complex.
    pub fn is_interior_edge(&self, e: usize) -> bool {
        self.edges[e].iter().all(|&v| !self.is_boundary_vertex(v))
    }

    pub fn is_interior_face(&self, f: usize) -> bool {
        self.faces[f].iter().all(|&v| !self.is_boundary_vertex(v))
    }

    pub fn is_interior(&self, k: usize, i: usize) -> bool {
        match k {
            0 => !self.is_boundary_vertex(i),
            1 => self.is_interior_edge(i),
            2 => self.is_interior_face(i),
            _ => false,
        }
    }

    /// Per-vertex layer index: the generator's decomposition when present,
    /// otherwise combinatorial spheres around the origin.
    pub fn layers(&self) -> Vec<usize> {
        match &self.layout.layer {
            Some(l) => l.clone(),
            None => self.distances_from(self.origin()),
        }
    }

    /// Vertices grouped by layer, in insertion order within each layer.
    pub fn spheres(&self) -> Vec<Vec<usize>> {
        let layers = self.layers();
        let depth = layers.iter().copied().max().unwrap_or(0);
        let mut out = vec![Vec::new(); depth + 1];
        for (v, &l) in layers.iter().enumerate() {
            out[l].push(v);
        }
        out
    }

    /// Returns a copy with every weight replaced by the given callbacks.
    pub fn reweighted(
        &self,
        c: impl Fn(VertexId) -> f64,
        r: impl Fn(EdgeKey) -> f64,
        s: impl Fn([VertexId; 3]) -> f64,
    ) -> Result<Self, ComplexError> {
        let cw: Vec<f64> = self.vertex_ids.iter().map(|&v| c(v)).collect();
        for (i, &w) in cw.iter().enumerate() {
            check_weight(w, || format!("vertex {}", self.vertex_ids[i]))?;
        }
        let rw: Vec<f64> = (0..self.num_edges()).map(|e| r(self.edge_key(e))).collect();
        for (e, &w) in rw.iter().enumerate() {
            check_weight(w, || format!("edge {}", self.edge_key(e)))?;
        }
        let sw: Vec<f64> = (0..self.num_faces()).map(|f| s(self.face_key(f).canonical)).collect();
        for (f, &w) in sw.iter().enumerate() {
            check_weight(w, || format!("face {}", self.face_key(f)))?;
        }
        Ok(Self::from_parts(
            self.vertex_ids.clone(),
            cw,
            self.edges.clone(),
            rw,
            self.faces.clone(),
            sw,
            self.layout.clone(),
        ))
    }

    /// Makes every 3-cycle of the graph a face; new faces get `s = 1`.
    pub fn complete_triangles(&self) -> Self {
        self.complete_triangles_with(|_| 1.0)
    }

    /// Like [`complete_triangles`](Self::complete_triangles) with a weight
    /// callback for the added faces. Existing faces keep their weight.
    ///
    /// # Panics
    /// If the callback returns a non-positive weight.
    pub fn complete_triangles_with(&self, weight: impl Fn([VertexId; 3]) -> f64) -> Self {
        let mut faces = self.faces.clone();
        let mut s = self.s.clone();
        for &[a, b] in &self.edges {
            for &(k, _) in &self.star[b] {
                if k <= b {
                    continue;
                }
                let key = [a, b, k];
                if self.find_edge(a, k).is_some() && !self.face_index.contains_key(&key) {
                    let ids = key.map(|v| self.vertex_ids[v]);
                    let w = weight(ids);
                    assert!(w.is_finite() && w > 0.0, "non-positive face weight {w}");
                    faces.push(key);
                    s.push(w);
                }
            }
        }
        Self::from_parts(
            self.vertex_ids.clone(),
            self.c.clone(),
            self.edges.clone(),
            self.r.clone(),
            faces,
            s,
            self.layout.clone(),
        )
    }

    pub fn is_triangle_complete(&self) -> bool {
        self.complete_triangles().num_faces() == self.num_faces()
    }

    /// Apexes `x` of the faces `(e⁻, e⁺, x)` on the oriented edge `e`.
    pub fn face_ring(&self, e: EdgeKey) -> Result<Vec<VertexId>, ComplexError> {
        let (a, b) = (self.vertex_index(e.tail)?, self.vertex_index(e.head)?);
        let (ei, _) = self.find_edge(a, b).ok_or(ComplexError::UnknownEdge(e))?;
        Ok(self.edge_faces[ei].iter().map(|&(_, x)| self.vertex_ids[x]).collect())
    }

    /// BFS distances from vertex index `o`; `usize::MAX` marks unreachable vertices.
    pub fn distances_from(&self, o: usize) -> Vec<usize> {
        let mut dist = vec![usize::MAX; self.num_vertices()];
        let mut queue = VecDeque::new();
        dist[o] = 0;
        queue.push_back(o);
        while let Some(v) = queue.pop_front() {
            for &(w, _) in &self.star[v] {
                if dist[w] == usize::MAX {
                    dist[w] = dist[v] + 1;
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn comb_distance(&self, x: VertexId, y: VertexId) -> Result<usize, ComplexError> {
        let (a, b) = (self.vertex_index(x)?, self.vertex_index(y)?);
        Ok(self.distances_from(a)[b])
    }

    pub fn sphere(&self, o: VertexId, n: usize) -> Result<Vec<VertexId>, ComplexError> {
        let dist = self.distances_from(self.vertex_index(o)?);
        Ok(self.select(|v| dist[v] == n))
    }

    pub fn ball(&self, o: VertexId, n: usize) -> Result<Vec<VertexId>, ComplexError> {
        let dist = self.distances_from(self.vertex_index(o)?);
        Ok(self.select(|v| dist[v] <= n))
    }

    fn select(&self, keep: impl Fn(usize) -> bool) -> Vec<VertexId> {
        (0..self.num_vertices()).filter(|&v| keep(v)).map(|v| self.vertex_ids[v]).collect()
    }

    fn membership(&self, set: &[VertexId]) -> Result<Vec<bool>, ComplexError> {
        let mut inside = vec![false; self.num_vertices()];
        for &id in set {
            inside[self.vertex_index(id)?] = true;
        }
        Ok(inside)
    }

    /// Oriented edges with exactly one endpoint in `set`, both orientations listed.
    pub fn edge_boundary(&self, set: &[VertexId]) -> Result<Vec<EdgeKey>, ComplexError> {
        let inside = self.membership(set)?;
        let mut out = Vec::new();
        for e in self.crossing_edges(&inside) {
            let key = self.edge_key(e);
            out.push(key);
            out.push(key.reversed());
        }
        Ok(out)
    }

    /// Canonical faces having at least one edge in the edge boundary of `set`.
    pub fn face_boundary(&self, set: &[VertexId]) -> Result<Vec<FaceKey>, ComplexError> {
        let inside = self.membership(set)?;
        let mut hit = HashSet::new();
        for e in self.crossing_edges(&inside) {
            hit.extend(self.edge_faces[e].iter().map(|&(f, _)| f));
        }
        let mut faces: Vec<usize> = hit.into_iter().collect();
        faces.sort_unstable();
        Ok(faces.into_iter().map(|f| self.face_key(f)).collect())
    }

    fn crossing_edges<'a>(&'a self, inside: &'a [bool]) -> impl Iterator<Item = usize> + 'a {
        self.edges
            .iter()
            .enumerate()
            .filter(move |(_, &[a, b])| inside[a] != inside[b])
            .map(|(e, _)| e)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn v(i: i64) -> VertexId {
        VertexId(i)
    }

    pub(crate) fn unit_triangle() -> Triangulation {
        Triangulation::build(
            &[(v(0), 1.0), (v(1), 1.0), (v(2), 1.0)],
            &[(v(0), v(1), 1.0), (v(1), v(2), 1.0), (v(2), v(0), 1.0)],
            &[([v(0), v(1), v(2)], 1.0)],
        )
        .unwrap()
    }

    #[test]
    fn single_triangle() {
        let t = unit_triangle();
        assert_eq!(t.num_vertices(), 3);
        assert_eq!(2 * t.num_edges(), 6);
        assert_eq!(t.num_faces(), 1);
        for e in 0..t.num_edges() {
            let key = t.edge_key(e);
            assert!(t.has_edge(key) && t.has_edge(key.reversed()));
        }
    }

    #[test]
    fn missing_edge_for_face() {
        let err = Triangulation::build(
            &[(v(0), 1.0), (v(1), 1.0), (v(2), 1.0)],
            &[(v(0), v(1), 1.0), (v(0), v(2), 1.0)],
            &[([v(0), v(1), v(2)], 1.0)],
        )
        .unwrap_err();
        assert!(matches!(err, ComplexError::MissingEdgeForFace { edge, .. } if edge == EdgeKey::new(v(1), v(2))));
    }

    #[test]
    fn disconnected_is_rejected() {
        let vs: Vec<_> = (0..6).map(|i| (v(i), 1.0)).collect();
        let es = [(0, 1), (1, 2), (2, 0), (3, 4), (4, 5), (5, 3)].map(|(a, b)| (v(a), v(b), 1.0));
        let fs = [([v(0), v(1), v(2)], 1.0), ([v(3), v(4), v(5)], 1.0)];
        let err = Triangulation::build(&vs, &es, &fs).unwrap_err();
        assert_eq!(err, ComplexError::DisconnectedComplex(v(3)));
    }

    #[test]
    fn rejects_bad_input() {
        let vs = [(v(0), 1.0), (v(1), 1.0)];
        assert!(matches!(
            Triangulation::build(&vs, &[(v(0), v(0), 1.0)], &[]),
            Err(ComplexError::LoopEdge(_))
        ));
        assert!(matches!(
            Triangulation::build(&vs, &[(v(0), v(1), 0.0)], &[]),
            Err(ComplexError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Triangulation::build(&vs, &[(v(0), v(1), f64::NAN)], &[]),
            Err(ComplexError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Triangulation::build(&[(v(0), -1.0)], &[], &[]),
            Err(ComplexError::NonPositiveWeight { .. })
        ));
        assert!(matches!(
            Triangulation::build(&vs, &[(v(0), v(1), 1.0), (v(1), v(0), 2.0)], &[]),
            Err(ComplexError::InconsistentWeight { .. })
        ));
        assert!(matches!(
            Triangulation::build(&vs, &[(v(0), v(7), 1.0)], &[]),
            Err(ComplexError::UnknownVertex(VertexId(7)))
        ));
        assert_eq!(Triangulation::build(&[], &[], &[]).unwrap_err(), ComplexError::EmptyComplex);
    }

    #[test]
    fn face_orientation_parity() {
        let t = unit_triangle();
        let plus = t.face_key_of([v(0), v(1), v(2)]).unwrap();
        assert_eq!(plus.orientation, 1);
        assert_eq!(t.face_key_of([v(1), v(2), v(0)]).unwrap().orientation, 1);
        assert_eq!(t.face_key_of([v(2), v(0), v(1)]).unwrap().orientation, 1);
        for odd in [[1, 0, 2], [0, 2, 1], [2, 1, 0]] {
            let key = t.face_key_of(odd.map(v)).unwrap();
            assert_eq!(key.canonical, plus.canonical);
            assert_eq!(key.orientation, -1);
        }
    }

    #[test]
    fn face_weight_survives_permuted_duplicate() {
        let mut b = Triangulation::builder();
        for i in 0..3 {
            b.vertex(v(i), 1.0);
        }
        b.edge(v(0), v(1), 1.0).edge(v(1), v(2), 1.0).edge(v(0), v(2), 1.0);
        b.face([v(0), v(1), v(2)], 7.0).face([v(2), v(1), v(0)], 7.0);
        let t = b.build().unwrap();
        assert_eq!(t.num_faces(), 1);
        b.face([v(1), v(0), v(2)], 3.0);
        assert!(matches!(b.build(), Err(ComplexError::InconsistentWeight { .. })));
    }

    fn k4_graph() -> Triangulation {
        let vs: Vec<_> = (0..4).map(|i| (v(i), 1.0)).collect();
        let es: Vec<_> = [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)]
            .iter()
            .map(|&(a, b)| (v(a), v(b), 1.0))
            .collect();
        Triangulation::build(&vs, &es, &[]).unwrap()
    }

    #[test]
    fn complete_triangles_on_k4() {
        let t = k4_graph().complete_triangles();
        let mut brute = 0;
        for a in 0..4 {
            for b in a + 1..4 {
                for c in b + 1..4 {
                    if t.find_edge(a, b).is_some() && t.find_edge(b, c).is_some() && t.find_edge(a, c).is_some() {
                        brute += 1;
                    }
                }
            }
        }
        assert_eq!(brute, 4);
        assert_eq!(t.num_faces(), 4);
        assert_eq!(t.complete_triangles().num_faces(), 4);
    }

    #[test]
    fn complete_triangles_keeps_existing_weight() {
        let t = Triangulation::build(
            &[(v(0), 1.0), (v(1), 1.0), (v(2), 1.0)],
            &[(v(0), v(1), 1.0), (v(1), v(2), 1.0), (v(2), v(0), 1.0)],
            &[([v(1), v(2), v(0)], 7.0)],
        )
        .unwrap();
        let done = t.complete_triangles_with(|_| 2.0);
        assert_eq!(done.num_faces(), 1);
        assert_eq!(done.face_weights(), &[7.0]);
    }

    #[test]
    fn face_ring_and_distance() {
        let t = unit_triangle();
        assert_eq!(t.face_ring(EdgeKey::new(v(0), v(1))).unwrap(), vec![v(2)]);
        assert_eq!(t.face_ring(EdgeKey::new(v(1), v(0))).unwrap(), vec![v(2)]);
        assert!(matches!(t.face_ring(EdgeKey::new(v(0), v(9))), Err(ComplexError::UnknownVertex(_))));
        assert_eq!(t.comb_distance(v(0), v(0)).unwrap(), 0);
        assert_eq!(t.comb_distance(v(0), v(2)).unwrap(), 1);
        assert!(t.comb_distance(v(0), v(5)).is_err());

        let path = Triangulation::build(&[(v(0), 1.0), (v(1), 1.0)], &[(v(0), v(1), 1.0)], &[]).unwrap();
        assert!(path.face_ring(EdgeKey::new(v(0), v(1))).unwrap().is_empty());
    }

    #[test]
    fn boundaries_of_single_vertex() {
        let t = unit_triangle();
        let mut eb = t.edge_boundary(&[v(0)]).unwrap();
        eb.sort();
        let mut expected =
            vec![EdgeKey::new(v(0), v(1)), EdgeKey::new(v(1), v(0)), EdgeKey::new(v(0), v(2)), EdgeKey::new(v(2), v(0))];
        expected.sort();
        assert_eq!(eb, expected);
        assert_eq!(t.face_boundary(&[v(0)]).unwrap().len(), 1);
        let all = t.vertex_ids().to_vec();
        assert!(t.edge_boundary(&all).unwrap().is_empty());
        assert!(t.face_boundary(&all).unwrap().is_empty());
    }

    #[test]
    fn reweighted_checks_weights() {
        let t = unit_triangle();
        let w = t.reweighted(|_| 2.0, |_| 3.0, |_| 4.0).unwrap();
        assert_eq!(w.vertex_weights(), &[2.0; 3]);
        assert_eq!(w.edge_weights(), &[3.0; 3]);
        assert_eq!(w.face_weights(), &[4.0]);
        assert!(t.reweighted(|_| 1.0, |_| -1.0, |_| 1.0).is_err());
    }
}
