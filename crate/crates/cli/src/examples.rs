//! Reproduces the four worked families: `K_n × P_2`, `K_2n × C_4`,
//! `K_4n × P_2` (swapped pairs) and `K_n ⋉ K_n`.

use std::fmt::Write as _;

use serde::Serialize;
use serde_json::json;

use pairwalk::certify::{certify_pair_transfer, certify_pst};
use pairwalk::composite::{check_cor_double_cover, TensorProblem, TensorTheorem};
use pairwalk::{eigen_decompose, CompositeVerdict, ExactTime, Graph, PairState, VertexState};

use crate::commands::{Ctx, Result};
use crate::report::{to_value, Exit, Outcome};

#[derive(Debug, Serialize)]
struct Case {
    family: &'static str,
    n: usize,
    graph: String,
    holds: bool,
    t: Option<String>,
    fidelity: Option<f64>,
    pass: bool,
    note: Option<String>,
}

fn complete(n: usize) -> Graph {
    Graph::complete(n).expect("n >= 1")
}

fn run(ctx: &Ctx, family: &'static str, n: usize, problem: &TensorProblem, t: &ExactTime) -> Result<Case> {
    let v = problem.check(t)?;
    Ok(finish(ctx, family, n, v, &problem.product()))
}

fn finish(ctx: &Ctx, family: &'static str, n: usize, mut v: CompositeVerdict, product: &Graph) -> Case {
    v.verify_on_with(product, ctx.tol);
    let num = v.numeric.as_ref();
    let fidelity = num.map(|c| c.fidelity);
    let pass = v.holds && num.is_some_and(|c| c.consistent);
    let note = (!v.holds).then(|| format!("failing conditions: {}", v.failures().join(", ")));
    Case { family, n, graph: product.name().to_string(), holds: v.holds, t: v.t.map(|t| t.to_string()), fidelity, pass, note }
}

/// Runs every family for `n` in `min_n..=max_n`, skipping sizes below a
/// family's smallest member. `self_test` replaces `π/2` by `π/3`, which
/// must make every case fail.
pub fn examples(ctx: &Ctx, min_n: usize, max_n: usize, self_test: bool) -> Result<Outcome> {
    let t = if self_test { ExactTime::pi_ratio(1, 3) } else { ExactTime::pi_ratio(1, 2) };
    let p2 = Graph::path(2)?;
    let c4 = Graph::cycle(4)?;
    let mut cases = Vec::new();
    let mut warnings = Vec::new();
    let mut baseline = Vec::new();

    let dec = eigen_decompose(p2.adjacency(), "A(P 2)")?;
    let pst = certify_pst(&dec, VertexState { u: 0 }, VertexState { u: 1 })?;
    baseline.push(json!({"certificate": "A(P 2): e0 → e1", "tau0": pst.tau0, "phase": pst.phase}));
    let dec = eigen_decompose(&c4.laplacian(), "L(C 4)")?;
    let lpst = certify_pair_transfer(&dec, PairState { a: 0, b: 1 }, PairState { a: 2, b: 3 })?;
    baseline.push(json!({"certificate": "L(C 4): e0-e1 → e2-e3", "tau0": lpst.tau0, "phase": lpst.phase}));
    let baseline_ok = pst.exists && lpst.exists;

    for n in min_n..=max_n {
        if n >= 2 {
            let p = TensorProblem::new(complete(n), p2.clone(), TensorTheorem::Pst { ab: (0, 1), cd: (0, 1), wz: (1, 0) });
            cases.push(run(ctx, "K_n x P_2", n, &p, &t)?);
        }
        let p = TensorProblem::new(complete(2 * n), c4.clone(), TensorTheorem::PairPst { wz: (0, 0), ab: (0, 1), cd: (2, 3) });
        cases.push(run(ctx, "K_2n x C_4", n, &p, &t)?);
        let p = TensorProblem::new(complete(4 * n), p2.clone(), TensorTheorem::Swap { ab: (0, 1), wz: (0, 1) });
        let mut case = run(ctx, "K_4n x P_2 (swap)", n, &p, &t)?;
        case.note.get_or_insert_with(|| {
            "target is e(b,0)-e(a,1); the printed target e(b,1)-e(a,0) equals minus the source".to_string()
        });
        cases.push(case);
        if n >= 2 {
            let k = complete(n);
            let v = check_cor_double_cover(&k, &k, (0, 1), &t)?;
            cases.push(finish(ctx, "K_n cover K_n", n, v, &k.double_cover(&k, Default::default())?));
        }
    }
    if self_test {
        warnings.push("self-test: every family evaluated at pi/3, failures expected".to_string());
    }

    let failed: Vec<&Case> = cases.iter().filter(|c| !c.pass).collect();
    let mut text = String::new();
    let show = |x: Option<String>| x.unwrap_or_else(|| "-".into());
    writeln!(
        text,
        "baseline: P 2 PST tau0 {} phase {}; C 4 pair LPST tau0 {} phase {}",
        show(pst.tau0.as_ref().map(ToString::to_string)),
        show(pst.phase.as_ref().map(ToString::to_string)),
        show(lpst.tau0.as_ref().map(ToString::to_string)),
        show(lpst.phase.as_ref().map(ToString::to_string)),
    )
    .unwrap();
    for c in &cases {
        writeln!(
            text,
            "{} {:<18} n = {:<2} {:<28} t = {:<6} fidelity {}",
            if c.pass { "PASS" } else { "FAIL" },
            c.family,
            c.n,
            c.graph,
            c.t.as_deref().unwrap_or("-"),
            c.fidelity.map_or("-".into(), |f| format!("{f:.12}")),
        )
        .unwrap();
        if let Some(note) = &c.note {
            writeln!(text, "     {note}").unwrap();
        }
    }
    writeln!(text, "{} cases, {} failed", cases.len(), failed.len()).unwrap();
    let exit = if failed.is_empty() && baseline_ok { Exit::Holds } else { Exit::DoesNotHold };
    Ok(Outcome {
        inputs: json!({"min_n": min_n, "max_n": max_n, "self_test": self_test}),
        result: json!({
            "baseline": baseline,
            "cases": to_value(&cases),
            "failures": failed.iter().map(|c| format!("{} n = {}", c.family, c.n)).collect::<Vec<_>>(),
        }),
        warnings,
        text,
        exit,
    })
}
