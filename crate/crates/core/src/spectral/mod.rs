//! Exact spectral decomposition of symmetric integer matrices.
//!
//! The characteristic polynomial is computed over ℤ and split into linear and
//! quadratic factors. Each eigenprojector is then a polynomial in the matrix,
//! `F_λ = Π_{μ≠λ} (M - μI)/(λ - μ)`, evaluated with exact entries in `ℚ(√Δ)`.
//! Matrices whose polynomial keeps an irreducible factor of degree three or
//! more fall back to a numerical eigendecomposition.

mod charpoly;
mod decompose;
mod factor;
mod scalar;

pub use charpoly::char_poly;
pub use decompose::{
    eigen_decompose, eigen_decompose_with, float_decompose, float_decompose_with, EigenPair, ExactMatrix,
    Exactness, SpectralDecomposition, Tolerances,
};
pub use scalar::ExactScalar;

pub use crate::surd::squarefree_kernel;

#[cfg(test)]
mod tests {
    use nalgebra::DMatrix;
    use num_rational::BigRational;

    use super::*;
    use crate::graph::{Graph, State};
    use crate::surd::Surd;

    fn values(dec: &SpectralDecomposition) -> Vec<String> {
        dec.eigenvalues().iter().map(|v| v.to_string()).collect()
    }

    fn rat(p: i64, q: i64) -> Surd {
        Surd::from_rational(BigRational::new(p.into(), q.into()))
    }

    #[test]
    fn complete_graph_laplacian() {
        for n in 2..=6usize {
            let lap = Graph::complete(n).unwrap().laplacian();
            let dec = eigen_decompose(&lap, "L(K)").unwrap();
            assert!(dec.is_exact());
            assert_eq!(values(&dec), vec!["0".to_string(), n.to_string()]);
            let f0 = dec.pairs()[0].exact_projector().unwrap();
            let fn_ = dec.pairs()[1].exact_projector().unwrap();
            for i in 0..n {
                for j in 0..n {
                    // F_0 = J/n, F_n = I - J/n
                    assert_eq!(f0.get(i, j), &rat(1, n as i64));
                    let id = if i == j { rat(1, 1) } else { Surd::zero() };
                    assert_eq!(fn_.get(i, j), &(&id - &rat(1, n as i64)));
                }
            }
            dec.check_invariants(&lap.map(|x| x as f64)).unwrap();
        }
    }

    #[test]
    fn complete_graph_adjacency() {
        for half in 1..=3usize {
            let n = 2 * half;
            let a = Graph::complete(n).unwrap().adjacency().clone();
            let dec = eigen_decompose(&a, "A(K)").unwrap();
            assert_eq!(values(&dec), vec!["-1".to_string(), (n - 1).to_string()]);
            assert_eq!(dec.pairs()[0].multiplicity, n - 1);
            let e_top = dec.pairs()[1].exact_projector().unwrap();
            assert_eq!(e_top.get(0, 1), &rat(1, n as i64));
        }
    }

    #[test]
    fn four_cycle_laplacian_projection() {
        let lap = Graph::cycle(4).unwrap().laplacian();
        let dec = eigen_decompose(&lap, "L(C4)").unwrap();
        assert_eq!(values(&dec), vec!["0", "2", "4"]);
        let f2 = dec.pairs()[1].exact_projector().unwrap();
        let v = f2.apply(&State::pair(0, 1, 4).unwrap());
        assert_eq!(v, vec![rat(1, 2), rat(-1, 2), rat(-1, 2), rat(1, 2)]);
    }

    #[test]
    fn four_cycle_adjacency_spectrum() {
        let a = Graph::cycle(4).unwrap().adjacency().clone();
        let dec = eigen_decompose(&a, "A(C4)").unwrap();
        assert_eq!(values(&dec), vec!["-2", "0", "2"]);
        let mults: Vec<usize> = dec.pairs().iter().map(|p| p.multiplicity).collect();
        assert_eq!(mults, vec![1, 2, 1]);
    }

    #[test]
    fn quadratic_eigenvalues_of_five_cycle() {
        // L(C5) has eigenvalues 0 and (5 ± √5)/2, each of multiplicity 2
        let lap = Graph::cycle(5).unwrap().laplacian();
        let dec = eigen_decompose(&lap, "L(C5)").unwrap();
        assert!(dec.is_exact());
        assert_eq!(values(&dec), vec!["0", "(5-√5)/2", "(5+√5)/2"]);
        dec.check_invariants(&lap.map(|x| x as f64)).unwrap();
    }

    #[test]
    fn path_three_adjacency_in_q_sqrt2() {
        let a = Graph::path(3).unwrap().adjacency().clone();
        let dec = eigen_decompose(&a, "A(P3)").unwrap();
        assert_eq!(values(&dec), vec!["(0-2√2)/2", "0", "(0+2√2)/2"]);
        dec.check_invariants(&a.map(|x| x as f64)).unwrap();
    }

    #[test]
    fn cubic_factor_falls_back_to_float() {
        // C7 adjacency: 2cos(2πk/7) are roots of an irreducible cubic
        let a = Graph::cycle(7).unwrap().adjacency().clone();
        let dec = eigen_decompose(&a, "A(C7)").unwrap();
        assert_eq!(dec.exactness(), Exactness::Float);
        assert_eq!(dec.pairs().len(), 4);
        dec.check_invariants(&a.map(|x| x as f64)).unwrap();
    }

    #[test]
    fn rejects_asymmetric() {
        let m = DMatrix::from_row_slice(2, 2, &[0, 1, 0, 0]);
        assert!(eigen_decompose(&m, "bad").is_err());
    }

    #[test]
    fn char_poly_vanishes_at_integer_eigenvalues() {
        let g = Graph::circulant(8, &[1, 2, 6, 7]).unwrap();
        for m in [g.laplacian(), g.adjacency().clone()] {
            let poly = char_poly(&m);
            let dec = eigen_decompose(&m, "circ").unwrap();
            for v in dec.eigenvalues() {
                if let Some(z) = v.as_integer() {
                    let val = poly.iter().rev().fold(num_bigint::BigInt::from(0), |acc, c| acc * z + c);
                    assert_eq!(val, 0.into());
                }
            }
        }
    }
}
