//! Graph model and the combinatorial operators derived from it.
//!
//! A graph here is a finite simple undirected graph with a fixed (arbitrary)
//! orientation per edge and an optional *boundary*: a set of vertices, each of
//! degree exactly one, at which functions on the metric realization are pinned
//! to zero. Removing the boundary vertices together with their pendant edges
//! yields the [`InteriorGraph`], which drives the adjacency-based mode
//! construction while remembering how many pendant edges were stripped from
//! each surviving vertex.

use std::collections::BTreeMap;
use std::ops::Deref;

use ndarray::Array2;
use thiserror::Error;

/// Errors from parsing or from operations whose preconditions a graph violates.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GraphError {
    #[error("line {line}: expected `e <u> <v>`, `b <v>`, or a `#` comment, found {found:?}")]
    Malformed { line: usize, found: String },
    #[error("line {line}: self-loop at vertex {id}")]
    SelfLoop { line: usize, id: u64 },
    #[error("line {line}: duplicate edge {u} {v}")]
    DuplicateEdge { line: usize, u: u64, v: u64 },
    #[error("line {line}: boundary vertex {id} has degree {degree}, expected exactly 1")]
    BoundaryDegree { line: usize, id: u64, degree: usize },
    #[error("interior vertex {id} is isolated, row normalization is undefined")]
    IsolatedInteriorVertex { id: u64 },
}

/// Undirected simple graph with oriented edges, unit edge lengths, and an
/// optional separated boundary (every boundary vertex has degree exactly 1).
///
/// Vertices are dense `usize` indices in first-appearance order of the input;
/// the original integer labels are kept for diagnostics and output. Each edge
/// `(tail, head)` carries the coordinate `x` running from 0 at the tail to 1
/// at the head.
#[derive(Debug, Clone, PartialEq)]
pub struct Graph {
    ids: Vec<u64>,
    index: BTreeMap<u64, usize>,
    edges: Vec<(usize, usize)>,
    boundary: Vec<bool>,
    incident: Vec<Vec<usize>>,
}

/// Summary facts about a graph; failures are reported, not raised.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ValidationReport {
    pub vertex_count: usize,
    pub edge_count: usize,
    pub boundary_count: usize,
    pub connected: bool,
    /// 2-colorability of the interior graph (the whole graph when no boundary).
    pub interior_bipartite: bool,
    pub boundary_separated: bool,
}

impl Graph {
    /// Parses the edge-list format: one `e <u> <v>` or `b <v>` declaration per
    /// line, `#` starting a comment line, blank lines ignored. Edge
    /// orientation is `u -> v` as written. Errors carry 1-based line numbers.
    pub fn parse(text: &str) -> Result<Self, GraphError> {
        let mut ids = Vec::new();
        let mut index = BTreeMap::new();
        let mut intern = |id: u64, ids: &mut Vec<u64>| -> usize {
            *index.entry(id).or_insert_with(|| {
                ids.push(id);
                ids.len() - 1
            })
        };

        let mut edges: Vec<(usize, usize)> = Vec::new();
        let mut seen_pairs: BTreeMap<(u64, u64), ()> = BTreeMap::new();
        // Boundary declarations are checked against degrees only after the
        // whole file is read, so `b` lines may precede their edges.
        let mut boundary_decls: Vec<(usize, u64)> = Vec::new();

        for (lineno, raw) in text.lines().enumerate() {
            let line = lineno + 1;
            let trimmed = raw.trim();
            if trimmed.is_empty() || trimmed.starts_with('#') {
                continue;
            }
            let tokens: Vec<&str> = trimmed.split_whitespace().collect();
            let malformed = || GraphError::Malformed {
                line,
                found: trimmed.to_string(),
            };
            match tokens.as_slice() {
                ["e", u, v] => {
                    let u: u64 = u.parse().map_err(|_| malformed())?;
                    let v: u64 = v.parse().map_err(|_| malformed())?;
                    if u == v {
                        return Err(GraphError::SelfLoop { line, id: u });
                    }
                    let key = (u.min(v), u.max(v));
                    if seen_pairs.insert(key, ()).is_some() {
                        return Err(GraphError::DuplicateEdge { line, u, v });
                    }
                    let ui = intern(u, &mut ids);
                    let vi = intern(v, &mut ids);
                    edges.push((ui, vi));
                }
                ["b", v] => {
                    let v: u64 = v.parse().map_err(|_| malformed())?;
                    intern(v, &mut ids);
                    boundary_decls.push((line, v));
                }
                _ => return Err(malformed()),
            }
        }

        let mut incident = vec![Vec::new(); ids.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }

        let mut boundary = vec![false; ids.len()];
        for (line, id) in boundary_decls {
            let v = index[&id];
            let degree = incident[v].len();
            if degree != 1 {
                return Err(GraphError::BoundaryDegree { line, id, degree });
            }
            boundary[v] = true;
        }

        Ok(Graph {
            ids,
            index,
            edges,
            boundary,
            incident,
        })
    }

    /// Builds a graph from explicit edge and boundary lists; same rules and
    /// errors as [`Graph::parse`], with line numbers referring to the
    /// synthesized document (edges first, in order, then boundary marks).
    pub fn from_edges(edges: &[(u64, u64)], boundary: &[u64]) -> Result<Self, GraphError> {
        let mut text = String::new();
        for (u, v) in edges {
            text.push_str(&format!("e {u} {v}\n"));
        }
        for v in boundary {
            text.push_str(&format!("b {v}\n"));
        }
        Self::parse(&text)
    }

    pub fn vertex_count(&self) -> usize {
        self.ids.len()
    }

    pub fn edge_count(&self) -> usize {
        self.edges.len()
    }

    /// Original integer label of internal vertex `v`.
    pub fn external_id(&self, v: usize) -> u64 {
        self.ids[v]
    }

    pub fn vertex_index(&self, id: u64) -> Option<usize> {
        self.index.get(&id).copied()
    }

    /// Edges as `(tail, head)` internal index pairs, in input order.
    pub fn edges(&self) -> &[(usize, usize)] {
        &self.edges
    }

    pub fn is_boundary(&self, v: usize) -> bool {
        self.boundary[v]
    }

    pub fn boundary_count(&self) -> usize {
        self.boundary.iter().filter(|&&b| b).count()
    }

    /// Non-boundary vertices in internal order; these index the rows of the
    /// incidence matrices.
    pub fn non_boundary_vertices(&self) -> Vec<usize> {
        (0..self.vertex_count())
            .filter(|&v| !self.boundary[v])
            .collect()
    }

    /// Indices of edges incident on `v`, in edge order.
    pub fn incident_edges(&self, v: usize) -> &[usize] {
        &self.incident[v]
    }

    pub fn degree(&self, v: usize) -> usize {
        self.incident[v].len()
    }

    pub fn degrees(&self) -> Vec<usize> {
        self.incident.iter().map(Vec::len).collect()
    }

    /// Neighbors of `v` in incident-edge order.
    pub fn neighbors(&self, v: usize) -> Vec<usize> {
        self.incident[v]
            .iter()
            .map(|&e| {
                let (u, w) = self.edges[e];
                if u == v {
                    w
                } else {
                    u
                }
            })
            .collect()
    }

    /// For edge `e` incident on `v`, the opposite endpoint.
    pub fn opposite(&self, e: usize, v: usize) -> usize {
        let (u, w) = self.edges[e];
        if u == v {
            w
        } else {
            u
        }
    }

    /// Symmetric 0/1 adjacency matrix with zero diagonal.
    pub fn adjacency(&self) -> Array2<f64> {
        let n = self.vertex_count();
        let mut a = Array2::zeros((n, n));
        for &(u, v) in &self.edges {
            a[[u, v]] = 1.0;
            a[[v, u]] = 1.0;
        }
        a
    }

    /// Hop distances from `source` by breadth-first search; `None` marks
    /// unreachable vertices.
    pub fn vertex_distances(&self, source: usize) -> Vec<Option<usize>> {
        let mut dist = vec![None; self.vertex_count()];
        dist[source] = Some(0);
        let mut queue = std::collections::VecDeque::from([source]);
        while let Some(v) = queue.pop_front() {
            let d = dist[v].unwrap();
            for w in self.neighbors(v) {
                if dist[w].is_none() {
                    dist[w] = Some(d + 1);
                    queue.push_back(w);
                }
            }
        }
        dist
    }

    pub fn is_connected(&self) -> bool {
        if self.vertex_count() <= 1 {
            return true;
        }
        self.vertex_distances(0).iter().all(Option::is_some)
    }

    pub fn validate(&self) -> ValidationReport {
        let interior = self.interior();
        ValidationReport {
            vertex_count: self.vertex_count(),
            edge_count: self.edge_count(),
            boundary_count: self.boundary_count(),
            connected: self.is_connected(),
            interior_bipartite: interior.is_bipartite(),
            boundary_separated: (0..self.vertex_count())
                .all(|v| !self.boundary[v] || self.degree(v) == 1),
        }
    }

    /// Unsigned incidence over non-boundary vertex rows and all edge columns:
    /// `M[v, e] = 1` iff `v` is an endpoint of `e`. On a boundary-free graph
    /// this is the full vertex-edge incidence.
    pub fn incidence_unsigned(&self) -> Array2<f64> {
        let rows = self.non_boundary_vertices();
        let mut m = Array2::zeros((rows.len(), self.edge_count()));
        for (r, &v) in rows.iter().enumerate() {
            for &e in &self.incident[v] {
                m[[r, e]] = 1.0;
            }
        }
        m
    }

    /// Signed incidence over non-boundary vertex rows and all edge columns:
    /// `S[v, e] = +1` where `e` ends at `v` (the `x = 1` side), `-1` where it
    /// starts, so `(S c)_v` is the head-minus-tail weight sum at `v`.
    pub fn incidence_signed(&self) -> Array2<f64> {
        let rows = self.non_boundary_vertices();
        let mut s = Array2::zeros((rows.len(), self.edge_count()));
        for (r, &v) in rows.iter().enumerate() {
            for &e in &self.incident[v] {
                let (tail, head) = self.edges[e];
                if head == v {
                    s[[r, e]] = 1.0;
                } else {
                    debug_assert_eq!(tail, v);
                    s[[r, e]] = -1.0;
                }
            }
        }
        s
    }

    /// Strips boundary vertices and their pendant edges.
    pub fn interior(&self) -> InteriorGraph {
        let kept: Vec<usize> = self.non_boundary_vertices();
        let mut to_interior = vec![usize::MAX; self.vertex_count()];
        for (i, &v) in kept.iter().enumerate() {
            to_interior[v] = i;
        }

        let mut parent_edge = Vec::new();
        let mut edges = Vec::new();
        for (e, &(u, v)) in self.edges.iter().enumerate() {
            if !self.boundary[u] && !self.boundary[v] {
                edges.push((to_interior[u], to_interior[v]));
                parent_edge.push(e);
            }
        }

        let mut incident = vec![Vec::new(); kept.len()];
        for (e, &(u, v)) in edges.iter().enumerate() {
            incident[u].push(e);
            incident[v].push(e);
        }

        let pendant_counts: Vec<usize> = kept
            .iter()
            .enumerate()
            .map(|(i, &v)| self.degree(v) - incident[i].len())
            .collect();

        let ids: Vec<u64> = kept.iter().map(|&v| self.ids[v]).collect();
        let index = ids.iter().enumerate().map(|(i, &id)| (id, i)).collect();

        InteriorGraph {
            graph: Graph {
                ids,
                index,
                edges,
                boundary: vec![false; kept.len()],
                incident,
            },
            parent_vertex: kept,
            parent_edge,
            pendant_counts,
        }
    }
}

/// The subgraph left after removing boundary vertices and their edges,
/// together with the maps back into the parent graph. Dereferences to the
/// boundary-free [`Graph`] it wraps.
#[derive(Debug, Clone, PartialEq)]
pub struct InteriorGraph {
    graph: Graph,
    parent_vertex: Vec<usize>,
    parent_edge: Vec<usize>,
    pendant_counts: Vec<usize>,
}

impl Deref for InteriorGraph {
    type Target = Graph;

    fn deref(&self) -> &Graph {
        &self.graph
    }
}

impl InteriorGraph {
    pub fn as_graph(&self) -> &Graph {
        &self.graph
    }

    /// Parent-graph index of interior vertex `v`.
    pub fn parent_vertex(&self, v: usize) -> usize {
        self.parent_vertex[v]
    }

    /// Parent-graph index of interior edge `e`.
    pub fn parent_edge(&self, e: usize) -> usize {
        self.parent_edge[e]
    }

    /// Number of pendant (boundary) edges removed at interior vertex `v`.
    pub fn pendant_count(&self, v: usize) -> usize {
        self.pendant_counts[v]
    }

    /// Degree of interior vertex `v` in the parent graph: interior degree
    /// plus removed pendant edges.
    pub fn full_degree(&self, v: usize) -> usize {
        self.graph.degree(v) + self.pendant_counts[v]
    }

    /// Row-normalized interior adjacency: row `i` is `A_i / deg(i)` with the
    /// degree taken inside the interior graph, so rows sum to 1. Errors on an
    /// isolated interior vertex.
    pub fn row_normalized(&self) -> Result<Array2<f64>, GraphError> {
        self.row_normalized_by(|v| self.graph.degree(v))
    }

    /// Interior adjacency with each row divided by the *parent-graph* degree,
    /// so pendant edges removed with the boundary still count toward the flux
    /// balance at their attachment vertex. Rows at pendant-touching vertices
    /// sum to less than 1; with no boundary this equals [`row_normalized`].
    ///
    /// [`row_normalized`]: InteriorGraph::row_normalized
    pub fn row_normalized_dirichlet(&self) -> Result<Array2<f64>, GraphError> {
        self.row_normalized_by(|v| self.full_degree(v))
    }

    fn row_normalized_by(
        &self,
        degree: impl Fn(usize) -> usize,
    ) -> Result<Array2<f64>, GraphError> {
        let n = self.graph.vertex_count();
        let mut a = self.graph.adjacency();
        for v in 0..n {
            let d = degree(v);
            if d == 0 {
                return Err(GraphError::IsolatedInteriorVertex {
                    id: self.graph.external_id(v),
                });
            }
            let scale = 1.0 / d as f64;
            a.row_mut(v).iter_mut().for_each(|x| *x *= scale);
        }
        Ok(a)
    }

    /// Number of connected components (isolated vertices count).
    pub fn component_count(&self) -> usize {
        self.component_labels().1
    }

    /// Per-vertex component label in `0..component_count()`.
    pub fn component_labels(&self) -> (Vec<usize>, usize) {
        let n = self.graph.vertex_count();
        let mut label = vec![usize::MAX; n];
        let mut next = 0;
        for start in 0..n {
            if label[start] != usize::MAX {
                continue;
            }
            let mut queue = std::collections::VecDeque::from([start]);
            label[start] = next;
            while let Some(v) = queue.pop_front() {
                for w in self.graph.neighbors(v) {
                    if label[w] == usize::MAX {
                        label[w] = next;
                        queue.push_back(w);
                    }
                }
            }
            next += 1;
        }
        (label, next)
    }

    /// Whether every component admits a proper 2-coloring.
    pub fn is_bipartite(&self) -> bool {
        self.bipartite_component_count() == self.component_count()
    }

    /// Number of components that admit a proper 2-coloring.
    pub fn bipartite_component_count(&self) -> usize {
        self.component_bipartite_flags()
            .iter()
            .filter(|&&b| b)
            .count()
    }

    /// Per-component 2-colorability, indexed by component label.
    pub fn component_bipartite_flags(&self) -> Vec<bool> {
        let n = self.graph.vertex_count();
        let mut color = vec![u8::MAX; n];
        let mut flags = Vec::new();
        for start in 0..n {
            if color[start] != u8::MAX {
                continue;
            }
            color[start] = 0;
            let mut ok = true;
            let mut queue = std::collections::VecDeque::from([start]);
            while let Some(v) = queue.pop_front() {
                for w in self.graph.neighbors(v) {
                    if color[w] == u8::MAX {
                        color[w] = 1 - color[v];
                        queue.push_back(w);
                    } else if color[w] == color[v] {
                        ok = false;
                    }
                }
            }
            flags.push(ok);
        }
        flags
    }

    /// Line-graph adjacency over directed edges: `(u, v)` connects to every
    /// `(v, w)` with `w ~ v`, including the reversal `w = u`. Arc `2e` is
    /// edge `e` forward, `2e + 1` its reversal; row sums are `deg(head)`.
    pub fn line_graph(&self) -> Array2<f64> {
        self.arc_adjacency(true)
    }

    /// Non-backtracking restriction of the line graph: reversals are dropped.
    pub fn oriented_line_graph(&self) -> OrientedLineGraph {
        OrientedLineGraph {
            t: self.arc_adjacency(false),
            arcs: self.arcs(),
        }
    }

    /// Directed edges (arcs) `(from, to)`; arc `2e` runs tail to head of edge
    /// `e`, arc `2e + 1` the reverse.
    pub fn arcs(&self) -> Vec<(usize, usize)> {
        self.graph
            .edges
            .iter()
            .flat_map(|&(u, v)| [(u, v), (v, u)])
            .collect()
    }

    fn arc_adjacency(&self, with_backtracking: bool) -> Array2<f64> {
        let arcs = self.arcs();
        let n = arcs.len();
        let mut m = Array2::zeros((n, n));
        for (i, &(from, to)) in arcs.iter().enumerate() {
            for &e in self.graph.incident_edges(to) {
                for k in [2 * e, 2 * e + 1] {
                    let (tail2, head2) = arcs[k];
                    if tail2 != to {
                        continue;
                    }
                    if with_backtracking || head2 != from {
                        m[[i, k]] = 1.0;
                    }
                }
            }
        }
        m
    }
}

/// Directed-edge ("arc") indexing together with the non-backtracking
/// adjacency matrix T: `T[(u,v),(w,x)] = 1` iff `v = w` and `u != x`.
#[derive(Debug, Clone, PartialEq)]
pub struct OrientedLineGraph {
    t: Array2<f64>,
    arcs: Vec<(usize, usize)>,
}

impl OrientedLineGraph {
    pub fn matrix(&self) -> &Array2<f64> {
        &self.t
    }

    pub fn arc_count(&self) -> usize {
        self.arcs.len()
    }

    /// Arc `i` as a `(from, to)` vertex pair.
    pub fn arc(&self, i: usize) -> (usize, usize) {
        self.arcs[i]
    }

    pub fn arcs(&self) -> &[(usize, usize)] {
        &self.arcs
    }

    /// Index of the reversed arc; arcs come in adjacent forward/reverse pairs.
    pub fn reverse(&self, i: usize) -> usize {
        i ^ 1
    }

    pub fn arc_index(&self, from: usize, to: usize) -> Option<usize> {
        self.arcs.iter().position(|&a| a == (from, to))
    }
}
