use std::fmt::Write as _;
use std::fs::File;
use std::io::BufWriter;

use nalgebra::DMatrix;
use serde_json::json;

use pairwalk::certify::{certify_pair_transfer, certify_periodic, certify_pst};
use pairwalk::composite::{
    check_cor_double_cover, check_double_cover, CoverMode, NumericCheck, TensorProblem, TensorTheorem,
};
use pairwalk::dynamics::{expm_oracle, fidelity_from, realized_phase, sweep as run_sweep};
use pairwalk::spectral::{eigen_decompose_with, Tolerances};
use pairwalk::{CompositeVerdict, ExactTime, Graph, Outcome as VerdictOutcome, SpectralDecomposition, State};

use crate::dsl::parse_graph;
use crate::report::{to_value, CliError, Exit, Outcome};

pub type Result<T> = std::result::Result<T, CliError>;

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum Matrix {
    Laplacian,
    Adjacency,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CertifyKind {
    /// Vertex state transfer (adjacency by default)
    Pst,
    /// Laplacian pair state transfer
    PairLpst,
    /// Adjacency pair state transfer
    PairPst,
    /// Periodicity of one state (Laplacian by default)
    Periodic,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, clap::ValueEnum)]
pub enum CoverKind {
    A,
    B,
    C,
    Cor,
}

/// Settings shared by all commands.
#[derive(Debug, Clone, Copy)]
pub struct Ctx {
    /// Fidelity tolerance; the rest of the float tolerances scale with it.
    pub tol: f64,
}

impl Ctx {
    pub fn from_env() -> Result<Self> {
        let tol = match std::env::var("PAIRWALK_TOL") {
            Ok(s) => s
                .trim()
                .parse::<f64>()
                .ok()
                .filter(|t| *t > 0.0 && *t < 1.0)
                .ok_or_else(|| CliError::Usage(format!("PAIRWALK_TOL must be a number in (0, 1), got '{s}'")))?,
            Err(_) => 1e-9,
        };
        Ok(Self { tol })
    }

    fn decompose(&self, m: &DMatrix<i64>, source: String) -> Result<SpectralDecomposition> {
        Ok(eigen_decompose_with(m, source, Tolerances::scaled(self.tol))?)
    }
}

pub fn graph(src: &str) -> Result<Graph> {
    parse_graph(src).map_err(|err| CliError::Parse { input: src.to_string(), err })
}

fn index(tok: &str) -> Result<usize> {
    tok.trim().parse().map_err(|_| CliError::Usage(format!("'{tok}' is not a vertex index")))
}

/// `a-b` as a pair of indices.
pub fn pair(tok: &str) -> Result<(usize, usize)> {
    let (a, b) = tok.split_once('-').ok_or_else(|| CliError::Usage(format!("expected a pair like 0-1, got '{tok}'")))?;
    Ok((index(a)?, index(b)?))
}

/// `u` is a vertex state, `a-b` a pair state.
pub fn state(tok: &str, n: usize) -> Result<State> {
    Ok(if tok.contains('-') {
        let (a, b) = pair(tok)?;
        State::pair(a, b, n)?
    } else {
        State::vertex(index(tok)?, n)?
    })
}

/// Exact time token, e.g. `pi/2` or `3/4pi`.
pub fn time(tok: &str) -> Result<ExactTime> {
    Ok(ExactTime::parse(tok)?)
}

/// Decimal seconds or an exact token.
fn real_time(tok: &str) -> Result<f64> {
    tok.trim().parse::<f64>().or_else(|_| time(tok).map(|t| t.to_f64()))
}

fn matrix_of(g: &Graph, m: Matrix) -> (DMatrix<i64>, String) {
    match m {
        Matrix::Laplacian => (g.laplacian(), format!("L({g})")),
        Matrix::Adjacency => (g.adjacency().clone(), format!("A({g})")),
    }
}

pub fn spectrum(ctx: &Ctx, src: &str, m: Matrix) -> Result<Outcome> {
    let g = graph(src)?;
    let (mat, name) = matrix_of(&g, m);
    let dec = ctx.decompose(&mat, name.clone())?;
    let eig: Vec<_> = dec
        .pairs()
        .iter()
        .map(|p| json!({"value": p.value, "multiplicity": p.multiplicity, "approx": p.value.to_f64()}))
        .collect();
    let mut text = format!("{name}: {} eigenvalues ({})\n", dec.pairs().len(), if dec.is_exact() { "exact" } else { "float" });
    for p in dec.pairs() {
        writeln!(text, "  {:>12}  x{}", p.value.to_string(), p.multiplicity).unwrap();
    }
    Ok(Outcome {
        inputs: json!({"graph": src, "matrix": name}),
        result: json!({"exact": dec.is_exact(), "eigenvalues": eig}),
        warnings: Vec::new(),
        text,
        exit: Exit::Holds,
    })
}

/// Fidelity and phase of `U(t) s1` against `χ s2` from the series oracle.
fn measure(m: &DMatrix<i64>, t: f64, s1: &State, s2: &State, predicted: Option<&pairwalk::Phase>, tol: f64) -> NumericCheck {
    let u = expm_oracle(&m.map(|x| x as f64), t);
    let fidelity = fidelity_from(&u, s1, s2);
    let chi = realized_phase(&u, s1, s2);
    let phase_error = predicted.filter(|_| fidelity >= 1.0 - tol).map(|p| (p.to_complex() - chi).norm());
    let consistent = fidelity >= 1.0 - tol && phase_error.is_none_or(|e| e < 10.0 * tol);
    NumericCheck { fidelity, phase_re: chi.re, phase_im: chi.im, phase_error, consistent }
}

pub fn certify(ctx: &Ctx, src: &str, kind: CertifyKind, states: &[String], m: Option<Matrix>, verify: bool) -> Result<Outcome> {
    let g = graph(src)?;
    let n = g.n();
    let m = m.unwrap_or(match kind {
        CertifyKind::Pst | CertifyKind::PairPst => Matrix::Adjacency,
        CertifyKind::PairLpst | CertifyKind::Periodic => Matrix::Laplacian,
    });
    let (mat, name) = matrix_of(&g, m);
    let want = if kind == CertifyKind::Periodic { 1 } else { 2 };
    if states.len() != want {
        return Err(CliError::Usage(format!("{kind:?} takes {want} state(s), got {}", states.len())));
    }
    let parsed: Vec<State> = states.iter().map(|s| state(s, n)).collect::<Result<_>>()?;
    let dec = ctx.decompose(&mat, name.clone())?;
    let inputs = json!({"graph": src, "matrix": name, "kind": format!("{kind:?}"), "states": states});
    let mut text = String::new();
    if kind == CertifyKind::Periodic {
        let cert = certify_periodic(&dec, parsed[0])?;
        writeln!(text, "{name}: {} periodic: {}", cert.state, if cert.periodic { "yes" } else { "no" }).unwrap();
        if cert.all_times {
            writeln!(text, "  single support eigenvalue: periodic at every time").unwrap();
        }
        if let (Some(t), Some(p)) = (&cert.minimal_period, &cert.phase_at_period) {
            writeln!(text, "  minimal period {t}, phase {p}").unwrap();
        }
        if let Some(f) = &cert.failure {
            writeln!(text, "  reason: {f:?}").unwrap();
        }
        let mut result = to_value(&cert);
        let mut exit = if cert.periodic { Exit::Holds } else { Exit::DoesNotHold };
        if verify {
            if let Some(t) = &cert.minimal_period {
                let check = measure(&mat, t.to_f64(), &cert.state, &cert.state, cert.phase_at_period.as_ref(), ctx.tol);
                writeln!(text, "  measured fidelity {:.12}", check.fidelity).unwrap();
                if !check.consistent {
                    exit = Exit::Inconsistent;
                }
                result["numeric"] = to_value(&check);
            }
        }
        return Ok(Outcome { inputs, result, warnings: cert.warnings.clone(), text, exit });
    }
    let cert = match (kind, parsed[0], parsed[1]) {
        (CertifyKind::Pst, State::Vertex(u), State::Vertex(v)) => certify_pst(&dec, u, v)?,
        (CertifyKind::PairLpst | CertifyKind::PairPst, State::Pair(p), State::Pair(q)) => certify_pair_transfer(&dec, p, q)?,
        _ => return Err(CliError::Usage(format!("{kind:?} needs {} states", if kind == CertifyKind::Pst { "vertex" } else { "pair" }))),
    };
    writeln!(text, "{name}: {} → {} transfer: {}", cert.from, cert.to, if cert.exists { "yes" } else { "no" }).unwrap();
    if let (Some(t), Some(p)) = (&cert.tau0, &cert.phase) {
        writeln!(text, "  minimum time {t}, phase {p}").unwrap();
    }
    if let (Some(g), Some(d)) = (cert.g, cert.delta) {
        writeln!(text, "  g = {g}, Δ = {d}").unwrap();
    }
    if let Some(f) = &cert.failure {
        writeln!(text, "  reason: {f:?}").unwrap();
    }
    let mut result = to_value(&cert);
    let mut exit = if cert.exists { Exit::Holds } else { Exit::DoesNotHold };
    if verify {
        if let Some(t) = &cert.tau0 {
            let check = measure(&mat, t.to_f64(), &cert.from, &cert.to, cert.phase.as_ref(), ctx.tol);
            writeln!(text, "  measured fidelity {:.12}", check.fidelity).unwrap();
            if !check.consistent {
                exit = Exit::Inconsistent;
            }
            result["numeric"] = to_value(&check);
        }
    }
    Ok(Outcome { inputs, result, warnings: cert.warnings.clone(), text, exit })
}

pub fn render_verdict(v: &CompositeVerdict) -> String {
    let mut s = String::new();
    let (from, to) = &v.derived_pairs;
    writeln!(s, "{} on {}: {from} → {to}", v.theorem, v.product).unwrap();
    writeln!(s, "  outcome: {:?}", v.outcome).unwrap();
    if let Some(t) = &v.t {
        write!(s, "  t = {t}").unwrap();
        if let Some(q) = &v.q {
            write!(s, " (q = {q})").unwrap();
        }
        writeln!(s).unwrap();
    }
    if let (Some(tau), Some(l)) = (&v.tau, &v.lambda) {
        writeln!(s, "  tau = {tau}, lambda = {l}, p = {}", v.p.map_or("-".into(), |p| p.to_string())).unwrap();
    }
    for (id, c) in &v.per_condition {
        writeln!(s, "  [{}] {id}: {}", if c.pass { "pass" } else { "FAIL" }, c.detail).unwrap();
    }
    if let Some(p) = &v.predicted_phase {
        writeln!(s, "  predicted phase {p}").unwrap();
    }
    if let Some(r) = &v.nonexistence {
        writeln!(s, "  no time exists: {r}").unwrap();
    }
    if let Some(num) = &v.numeric {
        writeln!(s, "  measured fidelity {:.12}, phase {:.6}{:+.6}i", num.fidelity, num.phase_re, num.phase_im).unwrap();
        if !num.consistent {
            writeln!(s, "  exact and numerical results DISAGREE").unwrap();
        }
    }
    s
}

fn verdict_exit(v: &CompositeVerdict) -> Exit {
    if v.outcome == VerdictOutcome::RefutedNumerically || v.numeric.as_ref().is_some_and(|n| !n.consistent) {
        Exit::Inconsistent
    } else if v.holds {
        Exit::Holds
    } else {
        Exit::DoesNotHold
    }
}

fn verdict_outcome(ctx: &Ctx, mut v: CompositeVerdict, product: &Graph, verify: bool, inputs: serde_json::Value) -> Outcome {
    if verify {
        v.verify_on_with(product, ctx.tol);
    }
    Outcome { inputs, result: to_value(&v), warnings: v.warnings.clone(), text: render_verdict(&v), exit: verdict_exit(&v) }
}

pub struct TensorArgs<'a> {
    pub theorem: &'a str,
    pub g: &'a str,
    pub h: &'a str,
    pub pairs: &'a [String],
    pub pst_pair: &'a [usize],
    pub vertex: &'a [usize],
    pub at: Option<&'a str>,
    pub verify: bool,
}

pub fn tensor(ctx: &Ctx, a: TensorArgs) -> Result<Outcome> {
    let (g, h) = (graph(a.g)?, graph(a.h)?);
    let pairs: Vec<(usize, usize)> = a.pairs.iter().map(|p| pair(p)).collect::<Result<_>>()?;
    let two = |v: &[usize], flag: &str| -> Result<(usize, usize)> {
        match v {
            [w, z] => Ok((*w, *z)),
            [w] => Ok((*w, *w)),
            _ => Err(CliError::Usage(format!("{flag} takes one or two vertices"))),
        }
    };
    let theorem = match a.theorem {
        "pst" => {
            let [ab, cd] = pairs[..] else {
                return Err(CliError::Usage("--pst needs --pairs a-b c-d".into()));
            };
            TensorTheorem::Pst { ab, cd, wz: two(a.pst_pair, "--pst-pair")? }
        }
        "pairpst" => {
            let [ab, cd] = pairs[..] else {
                return Err(CliError::Usage("--pairpst needs --pairs a-b c-d".into()));
            };
            TensorTheorem::PairPst { wz: two(a.vertex, "--vertex")?, ab, cd }
        }
        _ => {
            let [ab] = pairs[..] else {
                return Err(CliError::Usage("--swap needs one pair: --pairs a-b".into()));
            };
            TensorTheorem::Swap { ab, wz: two(a.pst_pair, "--pst-pair")? }
        }
    };
    let problem = TensorProblem::new(g, h, theorem);
    let v = match a.at {
        Some(t) => problem.check(&time(t)?)?,
        None => problem.solve()?,
    };
    let inputs = json!({
        "g": a.g, "h": a.h, "theorem": theorem, "at": a.at, "solve": a.at.is_none(), "verify": a.verify,
    });
    Ok(verdict_outcome(ctx, v, &problem.product(), a.verify, inputs))
}

pub struct CoverArgs<'a> {
    pub g: &'a str,
    pub h: &'a str,
    pub mode: CoverKind,
    pub pair: &'a str,
    pub target: Option<&'a str>,
    pub side: usize,
    pub at: &'a str,
    pub verify: bool,
}

pub fn cover(ctx: &Ctx, a: CoverArgs) -> Result<Outcome> {
    let (g, h) = (graph(a.g)?, graph(a.h)?);
    let ab = pair(a.pair)?;
    let tau = time(a.at)?;
    let target = || -> Result<(usize, usize)> {
        pair(a.target.ok_or_else(|| CliError::Usage("modes b and c need --target c-d".into()))?)
    };
    let v = match a.mode {
        CoverKind::A => check_double_cover(&g, &h, CoverMode::A { ab }, &tau)?,
        CoverKind::B => check_double_cover(&g, &h, CoverMode::B { ab, cd: target()?, side: a.side }, &tau)?,
        CoverKind::C => check_double_cover(&g, &h, CoverMode::C { ab, cd: target()? }, &tau)?,
        CoverKind::Cor => check_cor_double_cover(&g, &h, ab, &tau)?,
    };
    let product = g.double_cover(&h, Default::default())?;
    let inputs = json!({
        "g": a.g, "h": a.h, "mode": format!("{:?}", a.mode).to_lowercase(), "pair": a.pair,
        "target": a.target, "side": a.side, "at": a.at, "verify": a.verify,
    });
    Ok(verdict_outcome(ctx, v, &product, a.verify, inputs))
}

pub struct SweepArgs<'a> {
    pub graph: &'a str,
    pub from_state: &'a str,
    pub to_state: &'a str,
    pub matrix: Matrix,
    pub t_min: &'a str,
    pub t_max: &'a str,
    pub steps: usize,
    pub csv: Option<&'a str>,
}

pub fn sweep(ctx: &Ctx, a: SweepArgs) -> Result<Outcome> {
    let g = graph(a.graph)?;
    let (s1, s2) = (state(a.from_state, g.n())?, state(a.to_state, g.n())?);
    if !s1.same_kind(&s2) {
        return Err(pairwalk::Error::KindMismatch.into());
    }
    let (mat, name) = matrix_of(&g, a.matrix);
    let dec = ctx.decompose(&mat, name.clone())?;
    let (t0, t1) = (real_time(a.t_min)?, real_time(a.t_max)?);
    let res = run_sweep(&dec, &s1, &s2, t0, t1, a.steps)?;
    if let Some(path) = a.csv {
        let io = |source| CliError::Io { path: path.to_string(), source };
        res.write_csv(BufWriter::new(File::create(path).map_err(io)?)).map_err(io)?;
    }
    let best = res.max();
    let mut text = format!("{name}: {s1} → {s2} over [{t0}, {t1}], {} samples\n", res.times.len());
    if let Some(b) = &best {
        writeln!(text, "  max fidelity {:.12} at t = {:.9}", b.fidelity, b.t).unwrap();
    }
    for p in &res.peaks {
        writeln!(text, "  peak {:.12} at t = {:.9}", p.fidelity, p.t).unwrap();
    }
    if let Some(path) = a.csv {
        writeln!(text, "  wrote {path}").unwrap();
    }
    let inputs = json!({
        "graph": a.graph, "matrix": name, "from": a.from_state, "to": a.to_state,
        "t_min": t0, "t_max": t1, "steps": a.steps, "csv": a.csv,
    });
    let result = json!({
        "samples": res.times.len(),
        "max": best,
        "peaks": res.peaks,
        "perfect": best.is_some_and(|b| b.fidelity >= 1.0 - ctx.tol),
        "times": if a.csv.is_none() { Some(&res.times) } else { None },
        "fidelities": if a.csv.is_none() { Some(&res.fidelities) } else { None },
    });
    Ok(Outcome { inputs, result, warnings: Vec::new(), text, exit: Exit::Holds })
}
