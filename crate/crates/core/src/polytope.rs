//! Combinatorial simple polytopes and subcomplexes of their face posets.
//!
//! A simple polytope of dimension n is given by its vertices, each recorded as
//! the set of the n facets containing it. A face is determined by the set S of
//! facets cutting it out; S is a face exactly when S is contained in the facet
//! set of some vertex. Facet and vertex sets are bitmasks, which limits both
//! counts to [`MAX_ELEMENTS`].

use std::collections::{BTreeSet, VecDeque};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

pub type Mask = u128;

pub const MAX_ELEMENTS: usize = 128;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum PolytopeError {
    #[error("dimension must be at least 1")]
    ZeroDimension,
    #[error("at most {MAX_ELEMENTS} facets and vertices are supported (got {0})")]
    TooLarge(usize),
    #[error("vertex {vertex} lies on {found} facets, expected {expected}")]
    WrongCardinality {
        vertex: usize,
        expected: usize,
        found: usize,
    },
    #[error("vertex {vertex} refers to facet {facet}, but there are only {facets} facets")]
    FacetOutOfRange {
        vertex: usize,
        facet: usize,
        facets: usize,
    },
    #[error("vertices {0} and {1} lie on the same facets")]
    DuplicateVertex(usize, usize),
    #[error("facet {0} contains no vertex")]
    UnusedFacet(usize),
    #[error("the edge of vertex {vertex} avoiding facet {facet} does not end in exactly one other vertex")]
    BrokenEdge { vertex: usize, facet: usize },
    #[error("vertex graph is not connected")]
    Disconnected,
    #[error("vertex {0} is not in the complex")]
    VertexNotInComplex(usize),
    #[error("facet set {0:?} is not a face")]
    NotAFace(Vec<usize>),
}

/// Face of a simple polytope, identified by the facets cutting it out.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Face {
    pub facets: Mask,
    pub vertices: Mask,
    pub dim: usize,
}

impl Face {
    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices >> v & 1 == 1
    }

    pub fn is_subface_of(&self, other: &Face) -> bool {
        self.vertices & !other.vertices == 0
    }

    pub fn facet_list(&self) -> Vec<usize> {
        bits(self.facets)
    }

    pub fn vertex_list(&self) -> Vec<usize> {
        bits(self.vertices)
    }
}

pub fn bits(mut m: Mask) -> Vec<usize> {
    let mut out = Vec::with_capacity(m.count_ones() as usize);
    while m != 0 {
        let i = m.trailing_zeros() as usize;
        out.push(i);
        m &= m - 1;
    }
    out
}

pub fn mask_of(items: &[usize]) -> Mask {
    items.iter().fold(0, |m, &i| m | 1 << i)
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SimplePolytope {
    dim: usize,
    facets: usize,
    vertices: Vec<Mask>,
}

/// JSON form: 1-based facet indices.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct PolytopeSpec {
    pub dim: usize,
    pub facets: usize,
    pub vertices: Vec<Vec<usize>>,
}

impl SimplePolytope {
    /// Validates and builds a polytope from 0-based facet sets.
    ///
    /// Checks cardinalities, distinctness, that every facet is used, that each
    /// (n-1)-subset of a vertex's facets is shared with exactly one other vertex
    /// (so the graph is n-regular), and connectivity. Realizability as a convex
    /// polytope is not checked.
    pub fn new(dim: usize, facets: usize, vertices: Vec<Vec<usize>>) -> Result<Self, PolytopeError> {
        if dim == 0 {
            return Err(PolytopeError::ZeroDimension);
        }
        if facets > MAX_ELEMENTS || vertices.len() > MAX_ELEMENTS {
            return Err(PolytopeError::TooLarge(facets.max(vertices.len())));
        }
        let mut masks = Vec::with_capacity(vertices.len());
        for (v, fs) in vertices.iter().enumerate() {
            if let Some(&facet) = fs.iter().find(|&&f| f >= facets) {
                return Err(PolytopeError::FacetOutOfRange {
                    vertex: v,
                    facet,
                    facets,
                });
            }
            let m = mask_of(fs);
            if m.count_ones() as usize != dim || fs.len() != dim {
                return Err(PolytopeError::WrongCardinality {
                    vertex: v,
                    expected: dim,
                    found: m.count_ones() as usize,
                });
            }
            if let Some(w) = masks.iter().position(|&x| x == m) {
                return Err(PolytopeError::DuplicateVertex(w, v));
            }
            masks.push(m);
        }
        let used = masks.iter().fold(0, |a, &m| a | m);
        if let Some(f) = (0..facets).find(|&f| used >> f & 1 == 0) {
            return Err(PolytopeError::UnusedFacet(f));
        }
        let p = SimplePolytope {
            dim,
            facets,
            vertices: masks,
        };
        for v in 0..p.vertices.len() {
            for f in bits(p.vertices[v]) {
                let ridge = p.vertices[v] & !(1 << f);
                if p.vertices_containing(ridge).count_ones() != 2 {
                    return Err(PolytopeError::BrokenEdge { vertex: v, facet: f });
                }
            }
        }
        if !p.is_connected() {
            return Err(PolytopeError::Disconnected);
        }
        Ok(p)
    }

    pub fn from_spec(spec: &PolytopeSpec) -> Result<Self, PolytopeError> {
        let mut vertices = Vec::with_capacity(spec.vertices.len());
        for (v, fs) in spec.vertices.iter().enumerate() {
            let mut zero_based = Vec::with_capacity(fs.len());
            for &f in fs {
                if f == 0 || f > spec.facets {
                    return Err(PolytopeError::FacetOutOfRange {
                        vertex: v,
                        facet: f,
                        facets: spec.facets,
                    });
                }
                zero_based.push(f - 1);
            }
            vertices.push(zero_based);
        }
        Self::new(spec.dim, spec.facets, vertices)
    }

    pub fn to_spec(&self) -> PolytopeSpec {
        PolytopeSpec {
            dim: self.dim,
            facets: self.facets,
            vertices: self
                .vertices
                .iter()
                .map(|&m| bits(m).into_iter().map(|f| f + 1).collect())
                .collect(),
        }
    }

    /// The n-simplex: facets 0..=n, vertex i is the one missing facet i.
    pub fn simplex(n: usize) -> Self {
        let all: Mask = (1 << (n + 1)) - 1;
        SimplePolytope {
            dim: n,
            facets: n + 1,
            vertices: (0..=n).map(|i| all & !(1 << i)).collect(),
        }
    }

    /// Cartesian product; facets of `q` are shifted past those of `self`, and
    /// the vertex (i, j) gets index `i * |V(q)| + j`.
    pub fn product(&self, q: &SimplePolytope) -> Result<Self, PolytopeError> {
        let facets = self.facets + q.facets;
        let nv = self.vertices.len() * q.vertices.len();
        if facets > MAX_ELEMENTS || nv > MAX_ELEMENTS {
            return Err(PolytopeError::TooLarge(facets.max(nv)));
        }
        let mut vertices = Vec::with_capacity(nv);
        for &a in &self.vertices {
            for &b in &q.vertices {
                vertices.push(a | b << self.facets);
            }
        }
        Ok(SimplePolytope {
            dim: self.dim + q.dim,
            facets,
            vertices,
        })
    }

    pub fn cube(n: usize) -> Self {
        let seg = Self::simplex(1);
        let mut p = seg.clone();
        for _ in 1..n {
            p = p.product(&seg).expect("cube fits in a mask");
        }
        p
    }

    /// Convex m-gon with edges 0..m in cyclic order; vertex i joins edges i and i+1.
    pub fn polygon(m: usize) -> Result<Self, PolytopeError> {
        let vertices = (0..m).map(|i| vec![i, (i + 1) % m]).collect();
        Self::new(2, m, vertices)
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn num_facets(&self) -> usize {
        self.facets
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices.len()
    }

    pub fn all_vertices(&self) -> Mask {
        if self.vertices.len() == MAX_ELEMENTS {
            Mask::MAX
        } else {
            (1 << self.vertices.len()) - 1
        }
    }

    pub fn vertex_facets(&self, v: usize) -> Mask {
        self.vertices[v]
    }

    pub fn vertex_facet_list(&self, v: usize) -> Vec<usize> {
        bits(self.vertices[v])
    }

    /// Vertex with exactly the given facet set, if any.
    pub fn vertex_index(&self, facets: Mask) -> Option<usize> {
        self.vertices.iter().position(|&m| m == facets)
    }

    pub fn vertices_containing(&self, facets: Mask) -> Mask {
        self.vertices
            .iter()
            .enumerate()
            .filter(|(_, &m)| m & facets == facets)
            .fold(0, |acc, (i, _)| acc | 1 << i)
    }

    /// The face cut out by `facets`, or `None` when that set is not a face.
    pub fn face(&self, facets: Mask) -> Option<Face> {
        let vertices = self.vertices_containing(facets);
        (vertices != 0).then(|| Face {
            facets,
            vertices,
            dim: self.dim - facets.count_ones() as usize,
        })
    }

    pub fn face_from_list(&self, facets: &[usize]) -> Result<Face, PolytopeError> {
        if facets.iter().any(|&f| f >= self.facets) {
            return Err(PolytopeError::NotAFace(facets.to_vec()));
        }
        self.face(mask_of(facets))
            .ok_or_else(|| PolytopeError::NotAFace(facets.to_vec()))
    }

    pub fn whole(&self) -> Face {
        self.face(0).expect("polytope has a vertex")
    }

    pub fn vertex_face(&self, v: usize) -> Face {
        Face {
            facets: self.vertices[v],
            vertices: 1 << v,
            dim: 0,
        }
    }

    /// Facets of the face `e` (as faces of the polytope), paired with the facet index
    /// of the polytope that cuts them out of `e`.
    pub fn facets_of_face(&self, e: &Face) -> Vec<(usize, Face)> {
        (0..self.facets)
            .filter(|&i| e.facets >> i & 1 == 0)
            .filter_map(|i| self.face(e.facets | 1 << i).map(|f| (i, f)))
            .collect()
    }

    pub fn adjacent(&self, v: usize, w: usize) -> bool {
        (self.vertices[v] & self.vertices[w]).count_ones() as usize == self.dim - 1
    }

    pub fn neighbours(&self, v: usize) -> Vec<usize> {
        (0..self.vertices.len())
            .filter(|&w| w != v && self.adjacent(v, w))
            .collect()
    }

    fn is_connected(&self) -> bool {
        if self.vertices.is_empty() {
            return false;
        }
        let mut seen = vec![false; self.vertices.len()];
        let mut queue = VecDeque::from([0]);
        seen[0] = true;
        while let Some(v) = queue.pop_front() {
            for w in self.neighbours(v) {
                if !seen[w] {
                    seen[w] = true;
                    queue.push_back(w);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// All nonempty faces, including the polytope itself, ordered by
    /// decreasing dimension and then by facet mask.
    pub fn all_faces(&self) -> Vec<Face> {
        let mut sets = BTreeSet::new();
        for &m in &self.vertices {
            for sub in submasks(m) {
                sets.insert(sub);
            }
        }
        let mut faces: Vec<Face> = sets.into_iter().filter_map(|s| self.face(s)).collect();
        faces.sort_by_key(|f| (std::cmp::Reverse(f.dim), f.facets));
        faces
    }

    /// (f_0, ..., f_n) with f_n = 1.
    pub fn f_vector(&self) -> Vec<usize> {
        let mut f = vec![0; self.dim + 1];
        for face in self.all_faces() {
            f[face.dim] += 1;
        }
        f
    }
}

/// All submasks of `m`, including 0 and `m`.
pub fn submasks(m: Mask) -> impl Iterator<Item = Mask> {
    let mut next = Some(m);
    std::iter::from_fn(move || {
        let cur = next?;
        next = if cur == 0 { None } else { Some((cur - 1) & m) };
        Some(cur)
    })
}

impl fmt::Display for SimplePolytope {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "simple {}-polytope with {} facets and {} vertices",
            self.dim,
            self.facets,
            self.vertices.len()
        )
    }
}

/// A subcomplex of the face poset of a polytope, stored through its maximal faces.
#[derive(Clone, Debug)]
pub struct Subcomplex {
    parent: Arc<SimplePolytope>,
    maximal: Vec<Face>,
}

impl PartialEq for Subcomplex {
    fn eq(&self, other: &Self) -> bool {
        self.maximal == other.maximal && *self.parent == *other.parent
    }
}

impl Eq for Subcomplex {}

impl Subcomplex {
    pub fn full(parent: Arc<SimplePolytope>) -> Self {
        let whole = parent.whole();
        Subcomplex {
            parent,
            maximal: vec![whole],
        }
    }

    /// Subcomplex generated by the given faces (non-maximal ones are dropped).
    pub fn generated_by(parent: Arc<SimplePolytope>, faces: impl IntoIterator<Item = Face>) -> Self {
        let mut candidates: Vec<Face> = faces.into_iter().collect();
        candidates.sort_by_key(|f| (std::cmp::Reverse(f.dim), f.vertices));
        candidates.dedup();
        let mut maximal: Vec<Face> = Vec::new();
        for f in candidates {
            if !maximal.iter().any(|g| f.is_subface_of(g)) {
                maximal.push(f);
            }
        }
        maximal.sort_by_key(|f| (std::cmp::Reverse(f.dim), f.facets));
        Subcomplex { parent, maximal }
    }

    pub fn parent(&self) -> &Arc<SimplePolytope> {
        &self.parent
    }

    pub fn maximal_faces(&self) -> &[Face] {
        &self.maximal
    }

    pub fn is_empty(&self) -> bool {
        self.maximal.is_empty()
    }

    /// Dimension of the complex; 0 for the empty complex.
    pub fn dim(&self) -> usize {
        self.maximal.iter().map(|f| f.dim).max().unwrap_or(0)
    }

    pub fn vertices(&self) -> Mask {
        self.maximal.iter().fold(0, |m, f| m | f.vertices)
    }

    pub fn vertex_list(&self) -> Vec<usize> {
        bits(self.vertices())
    }

    pub fn num_vertices(&self) -> usize {
        self.vertices().count_ones() as usize
    }

    pub fn is_single_vertex(&self) -> bool {
        self.maximal.len() == 1 && self.maximal[0].dim == 0
    }

    pub fn contains_vertex(&self, v: usize) -> bool {
        self.vertices() >> v & 1 == 1
    }

    /// Identifies the complex within its parent.
    pub fn key(&self) -> Vec<Mask> {
        self.maximal.iter().map(|f| f.facets).collect()
    }

    pub fn maximal_faces_containing(&self, v: usize) -> Vec<Face> {
        self.maximal
            .iter()
            .filter(|f| f.contains_vertex(v))
            .copied()
            .collect()
    }

    /// Every face of the complex, ordered by decreasing dimension then facet mask.
    pub fn faces(&self) -> Vec<Face> {
        let mut sets = BTreeSet::new();
        for g in &self.maximal {
            for v in bits(g.vertices) {
                let free = self.parent.vertex_facets(v) & !g.facets;
                for sub in submasks(free) {
                    sets.insert(g.facets | sub);
                }
            }
        }
        let mut faces: Vec<Face> = sets
            .into_iter()
            .filter_map(|s| self.parent.face(s))
            .collect();
        faces.sort_by_key(|f| (std::cmp::Reverse(f.dim), f.facets));
        faces
    }

    /// (f_0, ..., f_dim) of the complex.
    pub fn f_vector(&self) -> Vec<usize> {
        if self.is_empty() {
            return Vec::new();
        }
        let mut f = vec![0; self.dim() + 1];
        for face in self.faces() {
            f[face.dim] += 1;
        }
        f
    }

    /// The subcomplex of faces not containing `v`.
    pub fn delete_vertex(&self, v: usize) -> Result<Subcomplex, PolytopeError> {
        if !self.contains_vertex(v) {
            return Err(PolytopeError::VertexNotInComplex(v));
        }
        let fv = self.parent.vertex_facets(v);
        let mut kept = Vec::new();
        for g in &self.maximal {
            if !g.contains_vertex(v) {
                kept.push(*g);
                continue;
            }
            for i in 0..self.parent.num_facets() {
                if fv >> i & 1 == 1 {
                    continue;
                }
                if let Some(h) = self.parent.face(g.facets | 1 << i) {
                    kept.push(h);
                }
            }
        }
        Ok(Subcomplex::generated_by(self.parent.clone(), kept))
    }
}
