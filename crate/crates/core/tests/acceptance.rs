mod common;

use std::f64::consts::PI;
use std::time::Instant;

use pairwalk::certify::{certify_pair_transfer, certify_pst};
use pairwalk::composite::{
    check_cor_double_cover, check_tensor_swap, check_tensor_with_pairpst, cover_blocks_evolution,
    tensor_factorized_evolution, TensorProblem, TensorTheorem, FIDELITY_TOL,
};
use pairwalk::dynamics::{expm_oracle, fidelity, max_abs_diff, overlap, transition_matrix, unitarity_error};
use pairwalk::{eigen_decompose, ExactTime, Graph, PairState, State, VertexState};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

struct Outcome {
    pass: bool,
    detail: String,
}

fn outcome(pass: bool, detail: impl Into<String>) -> Outcome {
    Outcome { pass, detail: detail.into() }
}

fn half_pi() -> ExactTime {
    ExactTime::pi_ratio(1, 2)
}

fn k(n: usize) -> Graph {
    Graph::complete(n).unwrap()
}

fn measured(product: &Graph, states: &(State, State), t: f64) -> f64 {
    let u = expm_oracle(&product.laplacian().map(|x| x as f64), t);
    pairwalk::dynamics::fidelity_from(&u, &states.0, &states.1)
}

fn complete_times_path() -> Outcome {
    let start = Instant::now();
    let p2 = Graph::path(2).unwrap();
    let mut worst = 1.0f64;
    for n in 3..=8 {
        let problem = TensorProblem::new(k(n), p2.clone(), TensorTheorem::Pst { ab: (0, 1), cd: (0, 1), wz: (1, 0) });
        let v = match problem.solve() {
            Ok(v) => v,
            Err(e) => return outcome(false, format!("K{n} x P2: {e}")),
        };
        let t = v.t.as_ref().map(ToString::to_string).unwrap_or_default();
        if !v.holds || t != "pi/2" {
            return outcome(false, format!("K{n} x P2: holds = {}, t = {t}", v.holds));
        }
        worst = worst.min(measured(&problem.product(), &v.derived_pairs, PI / 2.0));
    }
    let elapsed = start.elapsed().as_secs_f64();
    outcome(
        1.0 - worst <= FIDELITY_TOL && elapsed < 1.0,
        format!("t = pi/2 for n = 3..8, min fidelity {worst:.12}, {elapsed:.3} s"),
    )
}

fn complete_times_cycle() -> Outcome {
    let c4 = Graph::cycle(4).unwrap();
    let dec = eigen_decompose(&c4.laplacian(), "L(C4)").unwrap();
    let cert = certify_pair_transfer(&dec, PairState { a: 0, b: 1 }, PairState { a: 2, b: 3 }).unwrap();
    let tau = cert.tau0.as_ref().map(ToString::to_string).unwrap_or_default();
    let phase = cert.phase.as_ref().map(ToString::to_string).unwrap_or_default();
    if !cert.exists || tau != "pi/2" || phase != "1" {
        return outcome(false, format!("L(C4) certificate: exists {}, tau0 {tau}, phase {phase}", cert.exists));
    }
    let mut worst = 1.0f64;
    for n in 1..=4 {
        let g = k(2 * n);
        let v = check_tensor_with_pairpst(&g, &c4, (0, 0), (0, 1), (2, 3), &half_pi()).unwrap();
        if !v.holds {
            return outcome(false, format!("K{} x C4 fails {:?}", 2 * n, v.failures()));
        }
        worst = worst.min(measured(&g.tensor_product(&c4), &v.derived_pairs, PI / 2.0));
    }
    outcome(
        1.0 - worst <= FIDELITY_TOL,
        format!("L(C4) tau0 = {tau}, phase {phase}; holds at pi/2 for n = 1..4, min fidelity {worst:.12}"),
    )
}

fn swap_family() -> Outcome {
    let p2 = Graph::path(2).unwrap();
    let mut worst = 1.0f64;
    let mut stated = 0.0f64;
    for n in 1..=3 {
        let g = k(4 * n);
        let v = check_tensor_swap(&g, &p2, (0, 1), (0, 1), &half_pi()).unwrap();
        if !v.holds || v.p != Some(4) {
            return outcome(false, format!("K{} x P2: holds {}, p {:?}", 4 * n, v.holds, v.p));
        }
        let product = g.tensor_product(&p2);
        worst = worst.min(measured(&product, &v.derived_pairs, PI / 2.0));
        let State::Pair(from) = v.derived_pairs.0 else { unreachable!() };
        stated = stated.max(measured(&product, &(v.derived_pairs.0, State::Pair(from.negated())), PI / 2.0));
    }
    outcome(
        1.0 - worst <= FIDELITY_TOL,
        format!(
            "p = 4 at pi/2 for n = 1..3; e(a,0)-e(b,1) -> e(b,0)-e(a,1) min fidelity {worst:.12}; \
             the example's printed target e(b,1)-e(a,0) is minus the source, fidelity {stated:.1e}"
        ),
    )
}

fn complete_double_cover() -> Outcome {
    let mut worst = 1.0f64;
    for n in 2..=6 {
        let g = k(n);
        let v = check_cor_double_cover(&g, &g, (0, 1), &half_pi()).unwrap();
        if !v.holds {
            return outcome(false, format!("K{n} cover: {:?}", v.failures()));
        }
        worst = worst.min(measured(&g.double_cover(&g, Default::default()).unwrap(), &v.derived_pairs, PI / 2.0));
    }
    outcome(1.0 - worst <= FIDELITY_TOL, format!("holds at pi/2 for n = 2..6, min fidelity {worst:.12}"))
}

fn certification_soundness() -> Outcome {
    let graphs: Vec<common::Decomposed> = common::decomposed(12);
    let mut rng = ChaCha8Rng::seed_from_u64(2000);
    let (mut positives, mut bad_tau, mut early) = (0, 0, 0);
    let mut trials = 0;
    while trials < 2000 {
        let d = &graphs[rng.random_range(0..graphs.len())];
        let dec = if rng.random_bool(0.5) { &d.laplacian } else { &d.adjacency };
        let Some(dec) = dec else { continue };
        trials += 1;
        let pairs = rng.random_bool(0.5);
        let (s1, s2) = common::random_states(&mut rng, d.graph.n(), pairs);
        let cert = match (s1, s2) {
            (State::Pair(p), State::Pair(q)) => certify_pair_transfer(dec, p, q),
            (State::Vertex(u), State::Vertex(v)) => certify_pst(dec, u, v),
            _ => unreachable!(),
        }
        .unwrap();
        if !cert.exists {
            continue;
        }
        positives += 1;
        let tau = cert.tau0.unwrap().to_f64();
        if fidelity(dec, &s1, &s2, tau) < 1.0 - FIDELITY_TOL {
            bad_tau += 1;
        }
        if (1..=1000).any(|j| fidelity(dec, &s1, &s2, tau * j as f64 / 1001.0) >= 1.0 - 1e-6) {
            early += 1;
        }
    }
    outcome(
        positives > 0 && bad_tau == 0 && early == 0,
        format!("{trials} trials, {positives} positive certificates, {bad_tau} miss at tau0, {early} transfer earlier"),
    )
}

fn random_graph(rng: &mut impl Rng) -> Graph {
    let n = rng.random_range(2..=12);
    let p: f64 = rng.random_range(0.2..0.8);
    let edges: Vec<(usize, usize)> =
        (0..n).flat_map(|u| ((u + 1)..n).map(move |v| (u, v))).filter(|_| rng.random_bool(p)).collect();
    Graph::from_edges(n, &edges).unwrap()
}

fn numerical_cross_validation() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(500);
    let families = common::families(12);
    let (mut oracle, mut unitary, mut group) = (0.0f64, 0.0f64, 0.0f64);
    for i in 0..500 {
        let g = if i % 2 == 0 { families[rng.random_range(0..families.len())].clone() } else { random_graph(&mut rng) };
        let m = if rng.random_bool(0.5) { g.laplacian() } else { g.adjacency().clone() };
        let dec = eigen_decompose(&m, "M").unwrap();
        let (s, t) = (rng.random_range(0.0..10.0), rng.random_range(0.0..10.0));
        let ut = transition_matrix(&dec, t);
        oracle = oracle.max(max_abs_diff(&ut, &expm_oracle(&m.map(|x| x as f64), t)));
        unitary = unitary.max(unitarity_error(&ut));
        group = group.max(max_abs_diff(&(transition_matrix(&dec, s) * &ut), &transition_matrix(&dec, s + t)));
    }
    outcome(
        oracle <= 1e-9 && unitary <= 1e-10 && group <= 1e-10,
        format!("500 samples: oracle diff {oracle:.1e}, unitarity {unitary:.1e}, group law {group:.1e}"),
    )
}

fn product_identities() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(50);
    let (mut tensor, mut cover) = (0.0f64, 0.0f64);
    for _ in 0..50 {
        let n = rng.random_range(2..=6);
        let m = rng.random_range(2..=6);
        let gs = common::regular_graphs(n);
        let g = &gs[rng.random_range(0..gs.len())];
        let hs = common::regular_graphs(m);
        let h = &hs[rng.random_range(0..hs.len())];
        let h2 = &gs[rng.random_range(0..gs.len())];
        let t = rng.random_range(0.0..2.0 * PI);
        let direct = expm_oracle(&g.tensor_product(h).laplacian().map(|x| x as f64), t);
        tensor = tensor.max(max_abs_diff(&direct, &tensor_factorized_evolution(g, h, t).unwrap()));
        let a = g.double_cover(h2, Default::default()).unwrap().adjacency().map(|x| x as f64);
        cover = cover.max(max_abs_diff(&expm_oracle(&a, t), &cover_blocks_evolution(g, h2, t).unwrap()));
    }
    outcome(
        tensor <= 1e-10 && cover <= 1e-10,
        format!("50 factor pairs: tensor identity {tensor:.1e}, cover block identity {cover:.1e}"),
    )
}

fn pair_overlap_bound() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(10_000);
    let mut worst = 0.0f64;
    for _ in 0..10_000 {
        let n = rng.random_range(2..=8);
        let x = common::random_symmetric(&mut rng, n);
        let t = rng.random_range(0.0..20.0);
        let u = expm_oracle(&x, t);
        let (s1, s2) = (common::random_pair(&mut rng, n), common::random_pair(&mut rng, n));
        worst = worst.max(overlap(&u, &s2, &s1).norm());
    }
    outcome(worst <= 2.0 + 1e-9, format!("10^4 samples, max |(e_a-e_b)^T U (e_c-e_d)| = {worst:.12}"))
}

fn pst_baseline() -> Outcome {
    let p2 = Graph::path(2).unwrap();
    let dec = eigen_decompose(p2.adjacency(), "A(P2)").unwrap();
    let cert = certify_pst(&dec, VertexState { u: 0 }, VertexState { u: 1 }).unwrap();
    let tau = cert.tau0.as_ref().map(ToString::to_string).unwrap_or_default();
    let phase = cert.phase.as_ref().map(ToString::to_string).unwrap_or_default();
    let c4 = Graph::cycle(4).unwrap();
    let dec4 = eigen_decompose(c4.adjacency(), "A(C4)").unwrap();
    let c = certify_pst(&dec4, VertexState { u: 0 }, VertexState { u: 2 }).unwrap();
    let tau4 = c.tau0.as_ref().map(ToString::to_string).unwrap_or_default();
    outcome(
        cert.exists && tau == "pi/2" && phase == "-i" && c.exists && tau4 == "pi/2",
        format!("P2: tau0 = {tau}, lambda = {phase}; C4 0 -> 2: exists {}, tau0 = {tau4}, g = {:?}", c.exists, c.g),
    )
}

fn main() {
    let criteria: [(&str, fn() -> Outcome); 9] = [
        ("K_n x P2 at pi/2", complete_times_path),
        ("K_2n x C4 at pi/2", complete_times_cycle),
        ("K_4n x P2 swap, p = 4", swap_family),
        ("K_n cover K_n at pi/2", complete_double_cover),
        ("certification soundness and minimality", certification_soundness),
        ("spectral vs series oracle", numerical_cross_validation),
        ("tensor and cover evolution identities", product_identities),
        ("pair overlap bound", pair_overlap_bound),
        ("PST baseline", pst_baseline),
    ];
    let mut failed = 0;
    for (i, (name, run)) in criteria.iter().enumerate() {
        let o = run();
        failed += usize::from(!o.pass);
        println!("{} [{}] {name}: {}", if o.pass { "PASS" } else { "FAIL" }, i + 1, o.detail);
    }
    if failed > 0 {
        eprintln!("{failed} acceptance criteria failed");
        std::process::exit(1);
    }
}
