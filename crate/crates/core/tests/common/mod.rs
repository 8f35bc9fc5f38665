#![allow(dead_code)]

use nalgebra::DMatrix;
use pairwalk::spectral::eigen_decompose;
use pairwalk::{Graph, SpectralDecomposition, State};
use rand::Rng;

/// Paths, cycles, complete graphs and a few circulants up to `max_n` vertices.
pub fn families(max_n: usize) -> Vec<Graph> {
    let mut out = Vec::new();
    for n in 2..=max_n {
        out.push(Graph::path(n).unwrap());
        out.push(Graph::complete(n).unwrap());
        if n >= 3 {
            out.push(Graph::cycle(n).unwrap());
        }
        if n >= 4 && n % 2 == 0 {
            out.push(Graph::circulant(n, &[1, n / 2, n - 1]).unwrap());
        }
        if n >= 5 {
            out.push(Graph::circulant(n, &[2, n - 2]).unwrap());
        }
    }
    out
}

/// A graph together with exact decompositions of `L` and `A`, when exact.
pub struct Decomposed {
    pub graph: Graph,
    pub laplacian: Option<SpectralDecomposition>,
    pub adjacency: Option<SpectralDecomposition>,
}

fn exact_only(m: &DMatrix<i64>, source: String) -> Option<SpectralDecomposition> {
    eigen_decompose(m, source).ok().filter(SpectralDecomposition::is_exact)
}

pub fn decomposed(max_n: usize) -> Vec<Decomposed> {
    families(max_n)
        .into_iter()
        .map(|graph| Decomposed {
            laplacian: exact_only(&graph.laplacian(), format!("L({graph})")),
            adjacency: exact_only(graph.adjacency(), format!("A({graph})")),
            graph,
        })
        .collect()
}

pub fn random_pair(rng: &mut impl Rng, n: usize) -> State {
    let a = rng.random_range(0..n);
    let mut b = rng.random_range(0..n - 1);
    if b >= a {
        b += 1;
    }
    State::pair(a, b, n).unwrap()
}

/// Two distinct states of one kind (pairs that are not `±` each other).
/// Falls back to vertex states on two vertices.
pub fn random_states(rng: &mut impl Rng, n: usize, pairs: bool) -> (State, State) {
    let pairs = pairs && n >= 3;
    loop {
        let (s1, s2) = if pairs {
            (random_pair(rng, n), random_pair(rng, n))
        } else {
            (State::vertex(rng.random_range(0..n), n).unwrap(), State::vertex(rng.random_range(0..n), n).unwrap())
        };
        let same = match (s1, s2) {
            (State::Pair(p), State::Pair(q)) => p.same_pair(q),
            _ => s1 == s2,
        };
        if !same {
            return (s1, s2);
        }
    }
}

/// Regular graphs on `n <= 6` vertices drawn from complete graphs, cycles,
/// circulants, perfect matchings and the empty graph.
pub fn regular_graphs(n: usize) -> Vec<Graph> {
    let mut out = vec![Graph::empty(n).unwrap(), Graph::complete(n).unwrap()];
    if n >= 3 {
        out.push(Graph::cycle(n).unwrap());
    }
    if n % 2 == 0 {
        out.push(Graph::circulant(n, &[n / 2]).unwrap());
        let matching: Vec<(usize, usize)> = (0..n / 2).map(|i| (2 * i, 2 * i + 1)).collect();
        out.push(Graph::from_edges(n, &matching).unwrap());
    }
    if n == 6 {
        out.push(Graph::circulant(6, &[2, 4]).unwrap());
        out.push(Graph::circulant(6, &[1, 3, 5]).unwrap());
    }
    out
}

/// Random real symmetric matrix with entries in `[-1, 1]`.
pub fn random_symmetric(rng: &mut impl Rng, n: usize) -> DMatrix<f64> {
    let mut m = DMatrix::zeros(n, n);
    for i in 0..n {
        for j in i..n {
            let x: f64 = rng.random_range(-1.0..1.0);
            m[(i, j)] = x;
            m[(j, i)] = x;
        }
    }
    m
}
