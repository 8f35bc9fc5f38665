//! Graphs as dense symmetric integer matrices, basis states, and the two
//! composite constructions (tensor product and double cover).

use std::fmt;

use nalgebra::{DMatrix, DVector};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// An undirected graph stored as its adjacency matrix.
///
/// Entries are non-negative integers with a zero diagonal. Every constructor
/// here yields a simple graph (entries in `{0, 1}`); weighted matrices are
/// accepted through [`Graph::from_adjacency`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Graph {
    adj: DMatrix<i64>,
    labels: Option<Vec<String>>,
    name: String,
}

/// Standard families accepted by [`Graph::build_named`].
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Family {
    Path(usize),
    Cycle(usize),
    Complete(usize),
    /// Circulant graph on `n` vertices; `u ~ v` iff `(v - u) mod n` is in the set.
    Circulant { n: usize, connections: Vec<usize> },
    EdgeList { n: usize, edges: Vec<(usize, usize)> },
}

/// How a double cover treats vertex pairs that are adjacent in both factors.
///
/// The block matrix `[[A_G, A_H], [A_H, A_G]]` places the two adjacency
/// matrices in different blocks, so a shared edge never produces a repeated
/// edge; `Strict` nevertheless refuses such inputs for callers that want the
/// factors edge-disjoint.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Default, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum CoverPolicy {
    #[default]
    Permissive,
    Strict,
}

impl Graph {
    /// Wraps a symmetric, zero-diagonal, non-negative integer matrix.
    pub fn from_adjacency(adj: DMatrix<i64>, name: impl Into<String>) -> Result<Self> {
        if !adj.is_square() || adj.nrows() == 0 {
            return Err(Error::InvalidParams(format!(
                "adjacency must be a non-empty square matrix, got {}x{}",
                adj.nrows(),
                adj.ncols()
            )));
        }
        let n = adj.nrows();
        for i in 0..n {
            if adj[(i, i)] != 0 {
                return Err(Error::InvalidParams(format!("loop at vertex {i}")));
            }
            for j in 0..i {
                if adj[(i, j)] != adj[(j, i)] {
                    return Err(Error::NotSymmetric(i, j));
                }
                if adj[(i, j)] < 0 {
                    return Err(Error::InvalidParams(format!("negative weight at ({i}, {j})")));
                }
            }
        }
        Ok(Self { adj, labels: None, name: name.into() })
    }

    pub fn build_named(family: Family) -> Result<Self> {
        match family {
            Family::Path(n) => Self::path(n),
            Family::Cycle(n) => Self::cycle(n),
            Family::Complete(n) => Self::complete(n),
            Family::Circulant { n, connections } => Self::circulant(n, &connections),
            Family::EdgeList { n, edges } => Self::from_edges(n, &edges),
        }
    }

    pub fn path(n: usize) -> Result<Self> {
        check_order(n, 1)?;
        let edges: Vec<_> = (1..n).map(|v| (v - 1, v)).collect();
        Ok(Self::from_edges(n, &edges)?.named(format!("P {n}")))
    }

    pub fn cycle(n: usize) -> Result<Self> {
        check_order(n, 3)?;
        let edges: Vec<_> = (0..n).map(|v| (v, (v + 1) % n)).collect();
        Ok(Self::from_edges(n, &edges)?.named(format!("C {n}")))
    }

    pub fn complete(n: usize) -> Result<Self> {
        check_order(n, 1)?;
        let adj = DMatrix::from_fn(n, n, |i, j| i64::from(i != j));
        Ok(Self { adj, labels: None, name: format!("K {n}") })
    }

    /// The graph on `n` vertices with no edges.
    pub fn empty(n: usize) -> Result<Self> {
        check_order(n, 1)?;
        Ok(Self { adj: DMatrix::zeros(n, n), labels: None, name: format!("edges {n}:") })
    }

    pub fn circulant(n: usize, connections: &[usize]) -> Result<Self> {
        check_order(n, 1)?;
        let mut set = vec![false; n];
        for &s in connections {
            if s == 0 || s >= n {
                return Err(Error::InvalidParams(format!(
                    "circulant connection {s} must lie in 1..{n}"
                )));
            }
            set[s] = true;
        }
        for s in 1..n {
            if set[s] && !set[n - s] {
                return Err(Error::InvalidParams(format!(
                    "circulant connection set is not symmetric mod {n}: has {s} but not {}",
                    n - s
                )));
            }
        }
        let adj = DMatrix::from_fn(n, n, |i, j| i64::from(set[(j + n - i) % n]));
        let list: Vec<String> = connections.iter().map(ToString::to_string).collect();
        Ok(Self { adj, labels: None, name: format!("circ {n}: {}", list.join(",")) })
    }

    /// Simple graph from an edge list. Repeated edges are merged.
    pub fn from_edges(n: usize, edges: &[(usize, usize)]) -> Result<Self> {
        check_order(n, 1)?;
        let mut adj = DMatrix::zeros(n, n);
        for &(u, v) in edges {
            check_vertex(u, n)?;
            check_vertex(v, n)?;
            if u == v {
                return Err(Error::InvalidParams(format!("loop at vertex {u}")));
            }
            adj[(u, v)] = 1;
            adj[(v, u)] = 1;
        }
        let list: Vec<String> = edges.iter().map(|(u, v)| format!("{u}-{v}")).collect();
        Ok(Self { adj, labels: None, name: format!("edges {n}: {}", list.join(",")) })
    }

    pub fn with_labels(mut self, labels: Vec<String>) -> Result<Self> {
        if labels.len() != self.n() {
            return Err(Error::SizeMismatch { left: labels.len(), right: self.n() });
        }
        self.labels = Some(labels);
        Ok(self)
    }

    pub fn named(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn n(&self) -> usize {
        self.adj.nrows()
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn labels(&self) -> Option<&[String]> {
        self.labels.as_deref()
    }

    pub fn adjacency(&self) -> &DMatrix<i64> {
        &self.adj
    }

    /// True when every entry is 0 or 1.
    pub fn is_simple(&self) -> bool {
        self.adj.iter().all(|&x| x == 0 || x == 1)
    }

    /// Weighted degrees (row sums).
    pub fn degrees(&self) -> Vec<i64> {
        self.adj.row_iter().map(|row| row.iter().sum()).collect()
    }

    /// `L = D - A`.
    pub fn laplacian(&self) -> DMatrix<i64> {
        let mut lap = -self.adj.clone();
        for (i, d) in self.degrees().into_iter().enumerate() {
            lap[(i, i)] = d;
        }
        lap
    }

    /// The common degree, if every vertex has the same one.
    pub fn regularity(&self) -> Option<i64> {
        let degrees = self.degrees();
        let first = degrees[0];
        degrees.iter().all(|&d| d == first).then_some(first)
    }

    /// Tensor (Kronecker) product; vertex `(u, v)` has index `u * |H| + v`.
    pub fn tensor_product(&self, other: &Graph) -> Graph {
        Graph {
            adj: self.adj.kronecker(&other.adj),
            labels: None,
            name: format!("tensor({},{})", self.name, other.name),
        }
    }

    /// Double cover on `{0, 1} x V` with adjacency `[[A_G, A_H], [A_H, A_G]]`;
    /// vertex `(i, u)` has index `i * n + u`.
    pub fn double_cover(&self, other: &Graph, policy: CoverPolicy) -> Result<Graph> {
        let n = self.n();
        if other.n() != n {
            return Err(Error::SizeMismatch { left: n, right: other.n() });
        }
        if policy == CoverPolicy::Strict {
            for i in 0..n {
                for j in (i + 1)..n {
                    if self.adj[(i, j)] != 0 && other.adj[(i, j)] != 0 {
                        return Err(Error::OverlappingEdges(i, j));
                    }
                }
            }
        }
        let mut adj = DMatrix::zeros(2 * n, 2 * n);
        adj.view_mut((0, 0), (n, n)).copy_from(&self.adj);
        adj.view_mut((n, n), (n, n)).copy_from(&self.adj);
        adj.view_mut((0, n), (n, n)).copy_from(&other.adj);
        adj.view_mut((n, 0), (n, n)).copy_from(&other.adj);
        Ok(Graph { adj, labels: None, name: format!("cover({},{})", self.name, other.name) })
    }
}

impl fmt::Display for Graph {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name)
    }
}

fn check_order(n: usize, min: usize) -> Result<()> {
    if n < min {
        return Err(Error::InvalidParams(format!("need at least {min} vertices, got {n}")));
    }
    Ok(())
}

fn check_vertex(u: usize, n: usize) -> Result<()> {
    if u >= n {
        return Err(Error::VertexOutOfRange { index: u, n });
    }
    Ok(())
}

/// Index of `(u, v)` in a tensor product whose second factor has `m` vertices.
pub fn tensor_index(u: usize, v: usize, m: usize) -> usize {
    u * m + v
}

/// Index of `(side, u)` in a double cover over `n` vertices.
pub fn cover_index(side: usize, u: usize, n: usize) -> usize {
    side * n + u
}

/// The basis vector `e_u`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct VertexState {
    pub u: usize,
}

/// The pair state `e_a - e_b`, `a != b`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct PairState {
    pub a: usize,
    pub b: usize,
}

impl VertexState {
    pub fn new(u: usize, n: usize) -> Result<Self> {
        check_vertex(u, n)?;
        Ok(Self { u })
    }
}

impl PairState {
    pub fn new(a: usize, b: usize, n: usize) -> Result<Self> {
        check_vertex(a, n)?;
        check_vertex(b, n)?;
        if a == b {
            return Err(Error::DegeneratePair(a));
        }
        Ok(Self { a, b })
    }

    /// `e_b - e_a`.
    pub fn negated(self) -> Self {
        Self { a: self.b, b: self.a }
    }

    /// Same unordered pair (so `±` the same vector).
    pub fn same_pair(self, other: PairState) -> bool {
        (self.a == other.a && self.b == other.b) || (self.a == other.b && self.b == other.a)
    }
}

/// A vertex state or a pair state.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum State {
    Vertex(VertexState),
    Pair(PairState),
}

impl State {
    pub fn vertex(u: usize, n: usize) -> Result<Self> {
        VertexState::new(u, n).map(State::Vertex)
    }

    pub fn pair(a: usize, b: usize, n: usize) -> Result<Self> {
        PairState::new(a, b, n).map(State::Pair)
    }

    pub fn same_kind(&self, other: &State) -> bool {
        matches!((self, other), (State::Vertex(_), State::Vertex(_)) | (State::Pair(_), State::Pair(_)))
    }

    /// Largest vertex index referenced.
    pub fn max_index(&self) -> usize {
        match *self {
            State::Vertex(v) => v.u,
            State::Pair(p) => p.a.max(p.b),
        }
    }

    /// Squared Euclidean norm (1 for vertices, 2 for pairs).
    pub fn norm_sq(&self) -> f64 {
        match self {
            State::Vertex(_) => 1.0,
            State::Pair(_) => 2.0,
        }
    }

    /// Signed support as `(index, coefficient)` terms.
    pub fn terms(&self) -> Vec<(usize, i64)> {
        match *self {
            State::Vertex(v) => vec![(v.u, 1)],
            State::Pair(p) => vec![(p.a, 1), (p.b, -1)],
        }
    }

    pub fn to_vector(&self, n: usize) -> DVector<f64> {
        let mut v = DVector::zeros(n);
        for (i, c) in self.terms() {
            v[i] += c as f64;
        }
        v
    }

    pub fn check_dim(&self, n: usize) -> Result<()> {
        if self.max_index() >= n {
            return Err(Error::DimensionMismatch { state: self.max_index() + 1, dim: n });
        }
        Ok(())
    }
}

impl fmt::Display for State {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            State::Vertex(v) => write!(f, "e{}", v.u),
            State::Pair(p) => write!(f, "e{}-e{}", p.a, p.b),
        }
    }
}
