//! Retraction sequences of simple polytopes.
//!
//! Starting from the whole polytope, a retraction repeatedly removes a free
//! vertex (one lying in a unique maximal face whose dimension is that of the
//! current complex) until a single vertex is left. The set of complexes that
//! occur on complete retractions is explored as a DAG memoized on the maximal
//! faces, so sequences never need to be listed to compute minima over them.

use std::collections::{HashMap, VecDeque};
use std::ops::ControlFlow;
use std::sync::Arc;

use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::polytope::{Face, Mask, PolytopeError, SimplePolytope, Subcomplex};

pub const DEFAULT_MAX_VERTICES: usize = 12;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum RetractionError {
    #[error(transparent)]
    Polytope(#[from] PolytopeError),
    #[error("polytope has {vertices} vertices, above the enumeration cap of {cap}")]
    TooManyVertices { vertices: usize, cap: usize },
    #[error("polytope admits no retraction sequence")]
    NoAdmissibleRetraction,
    #[error("vertex {vertex} is not free at step {step}")]
    NotFree { step: usize, vertex: usize },
    #[error("f-vector {0:?} does not come from a simple polytope")]
    InvalidFVector(Vec<usize>),
}

/// Unique maximal face through `v` when `v` is free in `b`.
pub fn top_face_at(b: &Subcomplex, v: usize) -> Option<Face> {
    if !b.contains_vertex(v) {
        return None;
    }
    match b.maximal_faces_containing(v).as_slice() {
        [e] if e.dim == b.dim() => Some(*e),
        _ => None,
    }
}

pub fn is_free(b: &Subcomplex, v: usize) -> bool {
    top_face_at(b, v).is_some()
}

pub fn free_vertices(b: &Subcomplex) -> Vec<usize> {
    b.vertex_list()
        .into_iter()
        .filter(|&v| is_free(b, v))
        .collect()
}

/// Free vertex whose removal leaves a single vertex or a complex with a free vertex.
pub fn is_admissible_free(b: &Subcomplex, v: usize) -> bool {
    if !is_free(b, v) {
        return false;
    }
    if b.is_single_vertex() {
        return true;
    }
    let next = b.delete_vertex(v).expect("v lies in b");
    next.is_single_vertex() || next.vertex_list().into_iter().any(|w| is_free(&next, w))
}

pub fn admissible_free_vertices(b: &Subcomplex) -> Vec<usize> {
    b.vertex_list()
        .into_iter()
        .filter(|&v| is_admissible_free(b, v))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionStep {
    pub complex: Subcomplex,
    pub top_face: Face,
    pub vertex: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RetractionSequence {
    pub steps: Vec<RetractionStep>,
}

impl RetractionSequence {
    pub fn vertex_order(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.vertex).collect()
    }

    pub fn dims(&self) -> Vec<usize> {
        self.steps.iter().map(|s| s.complex.dim()).collect()
    }

    /// Replays a vertex order on `polytope`, checking freeness at every step.
    pub fn from_vertex_order(polytope: Arc<SimplePolytope>, order: &[usize]) -> Result<Self, RetractionError> {
        let mut b = Subcomplex::full(polytope);
        let mut steps = Vec::with_capacity(order.len());
        for (step, &v) in order.iter().enumerate() {
            let top_face = top_face_at(&b, v).ok_or(RetractionError::NotFree { step, vertex: v })?;
            let next = b.delete_vertex(v)?;
            steps.push(RetractionStep {
                complex: b,
                top_face,
                vertex: v,
            });
            b = next;
        }
        if !b.is_empty() {
            return Err(RetractionError::NotFree {
                step: order.len(),
                vertex: b.vertex_list()[0],
            });
        }
        Ok(RetractionSequence { steps })
    }
}

/// One complex occurring on some complete retraction.
#[derive(Clone, Debug)]
pub struct ComplexNode {
    pub complex: Subcomplex,
    pub free: Vec<usize>,
    pub admissible: Vec<usize>,
    /// Admissible free vertices after which no retraction can be completed.
    pub dead_ends: Vec<usize>,
    /// (vertex, node index) for removals that stay on complete retractions.
    pub successors: Vec<(usize, usize)>,
}

impl ComplexNode {
    pub fn dim(&self) -> usize {
        self.complex.dim()
    }
}

/// The DAG of complexes on complete retraction sequences, rooted at the polytope.
#[derive(Clone, Debug)]
pub struct RetractionAnalysis {
    polytope: Arc<SimplePolytope>,
    nodes: Vec<ComplexNode>,
}

impl RetractionAnalysis {
    pub fn explore(polytope: Arc<SimplePolytope>, max_vertices: usize) -> Result<Self, RetractionError> {
        if polytope.num_vertices() > max_vertices {
            return Err(RetractionError::TooManyVertices {
                vertices: polytope.num_vertices(),
                cap: max_vertices,
            });
        }
        let root = Subcomplex::full(polytope.clone());
        let mut memo = HashMap::new();
        if !completable(&root, &mut memo) {
            return Err(RetractionError::NoAdmissibleRetraction);
        }
        let mut index: HashMap<Vec<Mask>, usize> = HashMap::new();
        let mut nodes: Vec<ComplexNode> = Vec::new();
        let mut queue = VecDeque::new();
        index.insert(root.key(), 0);
        nodes.push(empty_node(root.clone()));
        queue.push_back(root);
        while let Some(b) = queue.pop_front() {
            let me = index[&b.key()];
            let free = free_vertices(&b);
            let mut admissible = Vec::new();
            let mut dead_ends = Vec::new();
            let mut successors = Vec::new();
            for &v in &free {
                if b.is_single_vertex() {
                    admissible.push(v);
                    continue;
                }
                let next = b.delete_vertex(v)?;
                let locally_ok =
                    next.is_single_vertex() || next.vertex_list().into_iter().any(|w| is_free(&next, w));
                let ok = completable(&next, &mut memo);
                if locally_ok {
                    admissible.push(v);
                    if !ok {
                        dead_ends.push(v);
                    }
                }
                if ok {
                    let key = next.key();
                    let id = match index.get(&key) {
                        Some(&id) => id,
                        None => {
                            let id = nodes.len();
                            index.insert(key, id);
                            nodes.push(empty_node(next.clone()));
                            queue.push_back(next);
                            id
                        }
                    };
                    successors.push((v, id));
                }
            }
            let node = &mut nodes[me];
            node.free = free;
            node.admissible = admissible;
            node.dead_ends = dead_ends;
            node.successors = successors;
        }
        Ok(RetractionAnalysis { polytope, nodes })
    }

    pub fn polytope(&self) -> &Arc<SimplePolytope> {
        &self.polytope
    }

    pub fn nodes(&self) -> &[ComplexNode] {
        &self.nodes
    }

    /// (j, r_j) for j = n, n-1, ..., 2: the least number of admissible free
    /// vertices of a j-dimensional complex on a complete retraction.
    pub fn r_vector(&self) -> Vec<(usize, usize)> {
        let n = self.polytope.dim();
        (2..=n)
            .rev()
            .filter_map(|j| {
                self.nodes
                    .iter()
                    .filter(|node| node.dim() == j)
                    .map(|node| node.admissible.len())
                    .min()
                    .map(|r| (j, r))
            })
            .collect()
    }

    /// Calls `visit` on complete retraction sequences in lexicographic vertex order.
    /// Stops early when `visit` breaks. Returns the number of sequences visited.
    pub fn for_each_sequence<F>(&self, mut visit: F) -> usize
    where
        F: FnMut(&RetractionSequence) -> ControlFlow<()>,
    {
        let mut steps = Vec::new();
        let mut count = 0;
        let _ = self.walk(0, &mut steps, &mut count, &mut visit);
        count
    }

    fn walk<F>(
        &self,
        node: usize,
        steps: &mut Vec<RetractionStep>,
        count: &mut usize,
        visit: &mut F,
    ) -> ControlFlow<()>
    where
        F: FnMut(&RetractionSequence) -> ControlFlow<()>,
    {
        let b = &self.nodes[node].complex;
        if b.is_single_vertex() {
            let v = b.vertex_list()[0];
            steps.push(RetractionStep {
                complex: b.clone(),
                top_face: b.maximal_faces()[0],
                vertex: v,
            });
            *count += 1;
            let flow = visit(&RetractionSequence { steps: steps.clone() });
            steps.pop();
            return flow;
        }
        for &(v, next) in &self.nodes[node].successors {
            steps.push(RetractionStep {
                complex: b.clone(),
                top_face: top_face_at(b, v).expect("successor vertices are free"),
                vertex: v,
            });
            let flow = self.walk(next, steps, count, visit);
            steps.pop();
            flow?;
        }
        ControlFlow::Continue(())
    }

    /// Up to `limit` complete sequences.
    pub fn sequences(&self, limit: usize) -> Vec<RetractionSequence> {
        let mut out = Vec::new();
        if limit == 0 {
            return out;
        }
        self.for_each_sequence(|s| {
            out.push(s.clone());
            if out.len() >= limit {
                ControlFlow::Break(())
            } else {
                ControlFlow::Continue(())
            }
        });
        out
    }

    /// Total number of complete sequences, counted through the DAG.
    pub fn count_sequences(&self) -> u128 {
        let mut memo = vec![None; self.nodes.len()];
        self.count_from(0, &mut memo)
    }

    fn count_from(&self, node: usize, memo: &mut Vec<Option<u128>>) -> u128 {
        if let Some(c) = memo[node] {
            return c;
        }
        let c = if self.nodes[node].complex.is_single_vertex() {
            1
        } else {
            self.nodes[node]
                .successors
                .iter()
                .map(|&(_, next)| self.count_from(next, memo))
                .sum()
        };
        memo[node] = Some(c);
        c
    }
}

fn empty_node(complex: Subcomplex) -> ComplexNode {
    ComplexNode {
        complex,
        free: Vec::new(),
        admissible: Vec::new(),
        dead_ends: Vec::new(),
        successors: Vec::new(),
    }
}

fn completable(b: &Subcomplex, memo: &mut HashMap<Vec<Mask>, bool>) -> bool {
    if b.is_single_vertex() {
        return true;
    }
    if b.is_empty() {
        return false;
    }
    let key = b.key();
    if let Some(&c) = memo.get(&key) {
        return c;
    }
    let ok = free_vertices(b).into_iter().any(|v| {
        let next = b.delete_vertex(v).expect("v lies in b");
        completable(&next, memo)
    });
    memo.insert(key, ok);
    ok
}

/// Step dimensions forced by the f-vector of a simple polytope.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimensionProfile {
    /// k_d for d = 0..=n: the number of steps whose complex has dimension d.
    pub counts: Vec<usize>,
    /// p_d for d = 0..=n: index (1-based) of the last step of dimension d.
    pub thresholds: Vec<usize>,
    /// dim B_l for l = 1..=|V|.
    pub dims: Vec<usize>,
}

fn binomial(n: usize, k: usize) -> i128 {
    if k > n {
        return 0;
    }
    (0..k).fold(1i128, |acc, i| acc * (n - i) as i128 / (i + 1) as i128)
}

/// k_n = 1 and k_d = f_d - Σ_{i>d} C(i, d) k_i; then p_n = 1, p_d = p_{d+1} + k_d.
pub fn dimension_profile(f: &[usize]) -> Result<DimensionProfile, RetractionError> {
    if f.is_empty() || f[f.len() - 1] != 1 {
        return Err(RetractionError::InvalidFVector(f.to_vec()));
    }
    let n = f.len() - 1;
    let mut k = vec![0i128; n + 1];
    k[n] = 1;
    for d in (0..n).rev() {
        let sub: i128 = (d + 1..=n).map(|i| binomial(i, d) * k[i]).sum();
        k[d] = f[d] as i128 - sub;
        if k[d] < 0 {
            return Err(RetractionError::InvalidFVector(f.to_vec()));
        }
    }
    let counts: Vec<usize> = k.iter().map(|&x| x as usize).collect();
    let mut thresholds = vec![0; n + 1];
    thresholds[n] = 1;
    for d in (0..n).rev() {
        thresholds[d] = thresholds[d + 1] + counts[d];
    }
    let mut dims = Vec::with_capacity(thresholds[0]);
    for d in (0..=n).rev() {
        dims.extend(std::iter::repeat_n(d, counts[d]));
    }
    Ok(DimensionProfile {
        counts,
        thresholds,
        dims,
    })
}

/// Retraction of P × Q built from retractions of the factors.
///
/// Pairs (x_a, y_b) are removed in order of decreasing dim P_a + dim Q_b, then
/// increasing b, then increasing a. Each removal is checked for freeness.
pub fn product_retraction(
    product: Arc<SimplePolytope>,
    p: &RetractionSequence,
    q: &RetractionSequence,
) -> Result<RetractionSequence, RetractionError> {
    let nq = q.steps.len();
    let dp = p.dims();
    let dq = q.dims();
    let mut pairs: Vec<(usize, usize)> = (0..p.steps.len())
        .flat_map(|a| (0..nq).map(move |b| (a, b)))
        .collect();
    pairs.sort_by_key(|&(a, b)| (std::cmp::Reverse(dp[a] + dq[b]), b, a));
    let order: Vec<usize> = pairs
        .into_iter()
        .map(|(a, b)| p.steps[a].vertex * nq + q.steps[b].vertex)
        .collect();
    RetractionSequence::from_vertex_order(product, &order)
}
