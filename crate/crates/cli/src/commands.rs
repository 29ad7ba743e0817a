// Copyright 2026 The epmat Authors
// SPDX-License-Identifier: Apache-2.0

use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use epmat_core::consensus::{
    algebraic_connectivity, consensus_estimate, consensus_time, find_violation, ViolationWitness,
};
use epmat_core::ep::{CertificateKind, EPCertificate, TimeGrid};
use epmat_core::lcp::{LcpEnumeration, UniquenessReport};
use epmat_core::pclass::{PRINCIPAL_MINOR_LIMIT, SIGN_SYMMETRY_LIMIT};
use epmat_core::{
    audit_sign_nonreversal, classify_ep, enumerate_index_sets, expm, is_p0_matrix, is_p_matrix, is_q_matrix,
    is_sign_pattern_symmetric, is_sign_symmetric, kellogg_wedge_check, laplacian, minor, sign_reversal_search,
    simulate, solve_enumerate, uniqueness_crosscheck, EPStatus, EPVerdict, EpOptions, KelloggCheck,
    LCPInstance, PVerdict, RealMatrix, SignReversalAudit, SignReversalWitness,
};
use serde::Serialize;

use crate::csv;
use crate::docs::{read_text, GridSpec, MatrixDocument, ScenarioDocument, VectorDocument};
use crate::error::CliError;

/// What a command hands back to the report writer.
pub struct Outcome {
    pub inputs: Vec<String>,
    pub verdicts: serde_json::Value,
    pub human: String,
}

fn to_value<T: Serialize>(v: &T) -> serde_json::Value {
    serde_json::to_value(v).expect("verdicts serialize")
}

fn load_matrix(path: &Path) -> Result<(String, MatrixDocument), CliError> {
    let text = read_text(path)?;
    let doc = MatrixDocument::parse(&text)?;
    Ok((text, doc))
}

fn fmt_vec(v: &[f64]) -> String {
    let cells: Vec<String> = v.iter().map(|x| format!("{x:.6e}")).collect();
    format!("[{}]", cells.join(", "))
}

/// Canonical text of a matrix document; independent of `--format`.
pub fn normalize(path: &Path) -> Result<String, CliError> {
    let (_, doc) = load_matrix(path)?;
    Ok(MatrixDocument::from_matrix(&doc.name, &doc.matrix()).to_toml())
}

// ---------------------------------------------------------------- pcheck

pub struct PCheckArgs {
    pub matrix: PathBuf,
    pub tol: f64,
    pub sign_reversal_trials: usize,
    pub seed: u64,
}

#[derive(Serialize)]
struct PCheckVerdicts {
    name: String,
    n: usize,
    p: PVerdict,
    p0: bool,
    q: bool,
    sign_symmetric: Option<bool>,
    sign_pattern_symmetric: bool,
    kellogg: Option<KelloggCheck>,
    sign_reversal: Option<SignReversalWitness>,
    notes: Vec<String>,
}

pub fn pcheck(args: &PCheckArgs) -> Result<Outcome, CliError> {
    let (text, doc) = load_matrix(&args.matrix)?;
    let a = doc.matrix();
    let n = doc.n;
    let p = is_p_matrix(&a, args.tol)?;
    let mut notes = Vec::new();
    let sign_symmetric = if n <= SIGN_SYMMETRY_LIMIT {
        Some(is_sign_symmetric(&a, args.tol)?)
    } else {
        notes.push(format!("sign symmetry skipped above order {SIGN_SYMMETRY_LIMIT}"));
        None
    };
    let kellogg = if n >= 2 { Some(kellogg_wedge_check(&a)?) } else { None };
    let sign_reversal = if p.is_p {
        None
    } else {
        let w = sign_reversal_search(&a, args.sign_reversal_trials, args.seed);
        if w.is_none() {
            notes.push(format!("no sign-reversing vector in {} trials", args.sign_reversal_trials));
        }
        w
    };
    let v = PCheckVerdicts {
        name: doc.name.clone(),
        n,
        p0: is_p0_matrix(&a, args.tol)?,
        q: is_q_matrix(&a, args.tol)?,
        p,
        sign_symmetric,
        sign_pattern_symmetric: is_sign_pattern_symmetric(&a, args.tol),
        kellogg,
        sign_reversal,
        notes,
    };
    Ok(Outcome { inputs: vec![text], verdicts: to_value(&v), human: render_pcheck(&v) })
}

fn render_pcheck(v: &PCheckVerdicts) -> String {
    let mut s = String::new();
    writeln!(s, "matrix {:?} (n = {})", v.name, v.n).unwrap();
    writeln!(s, "P-matrix: {}{}", v.p.is_p, if v.p.marginal { " (marginal)" } else { "" }).unwrap();
    writeln!(s, "  smallest principal minor: {:.6e} (tolerance {:.1e})", v.p.min_principal_minor, v.p.tolerance_used)
        .unwrap();
    if let Some((al, val)) = &v.p.failing_minor {
        writeln!(s, "  failing minor: A({al}|{al}) = {val:.6e}").unwrap();
    }
    writeln!(s, "P0-matrix: {}", v.p0).unwrap();
    writeln!(s, "Q-matrix: {}", v.q).unwrap();
    match v.sign_symmetric {
        Some(b) => writeln!(s, "sign-symmetric: {b}").unwrap(),
        None => writeln!(s, "sign-symmetric: not checked").unwrap(),
    }
    writeln!(s, "sign-pattern symmetric: {}", v.sign_pattern_symmetric).unwrap();
    if let Some(k) = &v.kellogg {
        match k.violating_eigenvalue {
            None => writeln!(s, "eigenvalue wedge: respected").unwrap(),
            Some((re, im)) => writeln!(s, "eigenvalue wedge: violated by {re:.6e} {im:+.6e}i").unwrap(),
        }
    }
    if let Some(w) = &v.sign_reversal {
        writeln!(s, "sign-reversing vector x = {}", fmt_vec(w.x.as_slice())).unwrap();
        writeln!(s, "  x_i (A x)_i = {}", fmt_vec(&w.products)).unwrap();
    }
    for n in &v.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    s
}

// ---------------------------------------------------------------- epcheck

pub struct EpCheckArgs {
    pub matrix: PathBuf,
    pub tol: f64,
    pub grid: Option<usize>,
    pub t_max: Option<f64>,
    pub certificates_only: bool,
    pub sign_reversal_trials: usize,
    pub seed: u64,
    pub minor_csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct EpCheckVerdicts {
    name: String,
    n: usize,
    ep: EPVerdict,
    /// A vector whose signs `exp(A t)` reverses at the witness time.
    witness_sign_reversal: Option<SignReversalWitness>,
    minor_curves: Vec<String>,
}

pub fn epcheck(args: &EpCheckArgs) -> Result<Outcome, CliError> {
    let (text, doc) = load_matrix(&args.matrix)?;
    let a = doc.matrix();
    if doc.n > PRINCIPAL_MINOR_LIMIT {
        return Err(CliError::Capacity(format!(
            "capacity exceeded: EP classification order (limit {PRINCIPAL_MINOR_LIMIT}, requested {})",
            doc.n
        )));
    }
    let mut opts = EpOptions { tol: args.tol, certificates_only: args.certificates_only, ..EpOptions::default() };
    if let Some(g) = args.grid {
        opts.grid_points = g.max(2);
    }
    opts.t_max = args.t_max;
    let ep = classify_ep(&a, &opts);
    let witness_sign_reversal = match &ep.witness {
        Some(w) => sign_reversal_search(&expm(&a, w.t)?, args.sign_reversal_trials, args.seed),
        None => None,
    };
    let mut minor_curves = Vec::new();
    if let Some(prefix) = &args.minor_csv {
        let t_max = args.t_max.or(ep.evidence.grid.as_ref().map(|g| g.t_max)).unwrap_or(10.0);
        let grid = TimeGrid::log_linear(t_max, opts.grid_points, opts.grid_points).merged(&[0.0]);
        minor_curves = write_minor_curves(&a, &grid.points, prefix)?;
    }
    let v = EpCheckVerdicts { name: doc.name.clone(), n: doc.n, ep, witness_sign_reversal, minor_curves };
    Ok(Outcome { inputs: vec![text], verdicts: to_value(&v), human: render_epcheck(&v) })
}

fn write_minor_curves(a: &RealMatrix, times: &[f64], prefix: &Path) -> Result<Vec<String>, CliError> {
    let n = a.nrows();
    let exps: Vec<RealMatrix> = times.iter().map(|&t| expm(a, t)).collect::<Result<_, _>>()?;
    let mut written = Vec::new();
    for k in 1..=n {
        let sets = enumerate_index_sets(k, n)?;
        let mut header = vec!["t".to_string()];
        header.extend(sets.iter().map(|s| format!("{s}").replace(',', " ")));
        let records: Vec<Vec<f64>> = times
            .iter()
            .zip(&exps)
            .map(|(&t, e)| {
                let mut r = vec![t];
                r.extend(sets.iter().map(|s| minor(e, s, s).expect("valid index set")));
                r
            })
            .collect();
        let path = PathBuf::from(format!("{}_k{k}.csv", prefix.display()));
        csv::write(&path, &header, &records)?;
        written.push(path.display().to_string());
    }
    Ok(written)
}

fn render_epcheck(v: &EpCheckVerdicts) -> String {
    let mut s = String::new();
    let ep = &v.ep;
    writeln!(s, "matrix {:?} (n = {})", v.name, v.n).unwrap();
    writeln!(s, "EP status: {:?}", ep.status).unwrap();
    if let Some(c) = &ep.certificate {
        writeln!(s, "certificate chain:").unwrap();
        write!(s, "{c}").unwrap();
        if !s.ends_with('\n') {
            s.push('\n');
        }
        render_r_table(&mut s, c);
    }
    if let Some(c) = &ep.complex_spectrum {
        writeln!(
            s,
            "non-real eigenvalue {:.6e} {:+.6e}i; wedge time {:.9e}",
            c.eigenvalue.0, c.eigenvalue.1, c.kellogg_time
        )
        .unwrap();
    }
    if let Some(w) = &ep.witness {
        writeln!(
            s,
            "witness: t = {:.12e}, minor of exp(A t) on {} = {:.6e} (verified: {})",
            w.t, w.alpha, w.minor_value, w.verified
        )
        .unwrap();
    }
    if let Some(w) = &v.witness_sign_reversal {
        writeln!(s, "  exp(A t) reverses the signs of x = {}", fmt_vec(w.x.as_slice())).unwrap();
    }
    if let Some(g) = &ep.evidence.grid {
        writeln!(
            s,
            "grid: {} of {} points evaluated on [{:.3e}, {:.3e}], smallest scaled minor {:.3e}",
            g.evaluated, g.points, g.t_min, g.t_max, g.min_relative_minor
        )
        .unwrap();
    }
    if let Some(p) = &ep.evidence.power_screen {
        writeln!(s, "power sign-symmetry screen: passed = {} ({} checks)", p.passed, p.checks).unwrap();
    }
    for n in &ep.evidence.notes {
        writeln!(s, "note: {n}").unwrap();
    }
    for f in &v.minor_curves {
        writeln!(s, "wrote {f}").unwrap();
    }
    s
}

fn render_r_table(s: &mut String, c: &EPCertificate) {
    if let CertificateKind::MinorSymmetry { det_t, r_table, eigenvalues, .. } = &c.leaf().kind {
        writeln!(s, "eigenvalues: {}", fmt_vec(eigenvalues)).unwrap();
        writeln!(s, "det(T) = {det_t:.6e}").unwrap();
        writeln!(s, "r-table:").unwrap();
        for e in r_table {
            writeln!(s, "  r({}, {}) = {:.6e}", e.alpha, e.beta, e.r).unwrap();
        }
    }
}

// ---------------------------------------------------------------- lcp

pub struct LcpArgs {
    pub matrix: PathBuf,
    pub q: Option<PathBuf>,
    pub random_q: Option<usize>,
    pub seed: u64,
}

#[derive(Serialize)]
struct LcpVerdicts {
    name: String,
    n: usize,
    enumeration: Option<LcpEnumeration>,
    multiplicity: Option<usize>,
    random: Option<UniquenessReport>,
}

pub fn lcp(args: &LcpArgs) -> Result<Outcome, CliError> {
    let (text, doc) = load_matrix(&args.matrix)?;
    let m = doc.matrix();
    let mut inputs = vec![text];
    let mut v = LcpVerdicts { name: doc.name.clone(), n: doc.n, enumeration: None, multiplicity: None, random: None };
    if let Some(qp) = &args.q {
        let qt = read_text(qp)?;
        let qd = VectorDocument::parse(&qt)?;
        inputs.push(qt);
        if qd.n != doc.n {
            return Err(CliError::Parse(format!("q has length {}, matrix has order {}", qd.n, doc.n)));
        }
        let inst = LCPInstance::new(m.clone(), qd.vector())?;
        let e = solve_enumerate(&inst)?;
        v.multiplicity = Some(e.solutions.len());
        v.enumeration = Some(e);
    }
    if let Some(trials) = args.random_q {
        v.random = Some(uniqueness_crosscheck(&m, trials, args.seed)?);
    }
    Ok(Outcome { inputs, verdicts: to_value(&v), human: render_lcp(&v) })
}

fn render_lcp(v: &LcpVerdicts) -> String {
    let mut s = String::new();
    writeln!(s, "matrix {:?} (n = {})", v.name, v.n).unwrap();
    if let Some(e) = &v.enumeration {
        writeln!(s, "solutions: {}{}", e.solutions.len(), if e.degenerate { " (degenerate)" } else { "" }).unwrap();
        for sol in &e.solutions {
            writeln!(s, "  z = {}  w = {}", fmt_vec(sol.z.as_slice()), fmt_vec(sol.w.as_slice())).unwrap();
        }
        if e.degenerate_family {
            writeln!(s, "note: a singular basis admits a continuum of solutions").unwrap();
        }
    }
    if let Some(r) = &v.random {
        let hist: Vec<String> = r.histogram.iter().map(|(k, c)| format!("{k}:{c}")).collect();
        writeln!(s, "random q: {} trials, multiplicity histogram {{{}}}", r.trials, hist.join(", ")).unwrap();
        writeln!(s, "  degenerate trials: {}", r.degenerate_trials).unwrap();
        if let Some((q, k)) = &r.first_nonunique {
            writeln!(s, "  first non-unique q = {} with {k} solutions", fmt_vec(q)).unwrap();
        }
    }
    s
}

// ---------------------------------------------------------------- consensus

pub struct ConsensusArgs {
    pub scenario: PathBuf,
    pub tol: f64,
    pub t_max: Option<f64>,
    pub grid: Option<usize>,
    pub x0_search_trials: usize,
    pub seed: u64,
    pub trajectory_csv: Option<PathBuf>,
}

#[derive(Serialize)]
struct ConsensusEstimate {
    time: f64,
    value: f64,
    spread: f64,
}

#[derive(Serialize)]
struct ConsensusVerdicts {
    name: String,
    n: usize,
    laplacian: RealMatrix,
    ep: EPVerdict,
    grid: GridSpec,
    audits: Vec<SignReversalAudit>,
    violation_witness: Option<ViolationWitness>,
    algebraic_connectivity: Option<f64>,
    consensus: Vec<ConsensusEstimate>,
    trajectory_csv: Option<String>,
}

pub fn consensus(args: &ConsensusArgs) -> Result<Outcome, CliError> {
    let text = read_text(&args.scenario)?;
    let doc = ScenarioDocument::parse(&text)?;
    let mut grid = doc.grid.clone();
    if let Some(t) = args.t_max {
        if !(t.is_finite() && t > 0.0) {
            return Err(CliError::Parse(format!("--t-max must be positive, got {t}")));
        }
        grid.t_max = t;
    }
    if let Some(p) = args.grid {
        grid.points = p.max(2);
    }
    let times = grid.times();
    let l = laplacian(&doc.graph());
    let n = doc.n;
    let ep = classify_ep(&l, &EpOptions { tol: args.tol, ..EpOptions::default() });
    let x0s = doc.initial_vectors();
    let (audits, violation_witness, consensus) = if n == 1 {
        (Vec::new(), None, Vec::new())
    } else {
        let audits = audit_sign_nonreversal(&l, &x0s, &times)?;
        let witness = if ep.status == EPStatus::EP {
            None
        } else {
            find_violation(&l, &times, args.x0_search_trials, args.seed)?
        };
        let t = consensus_time(&l);
        let estimates = match t {
            Some(time) => x0s
                .iter()
                .map(|x0| {
                    let (value, x) = consensus_estimate(&l, x0)?;
                    let spread = x.iter().map(|v| (v - value).abs()).fold(0.0, f64::max);
                    Ok(ConsensusEstimate { time, value, spread })
                })
                .collect::<Result<_, epmat_core::Error>>()?,
            None => Vec::new(),
        };
        (audits, witness, estimates)
    };
    let mut trajectory_csv = None;
    if let Some(path) = &args.trajectory_csv {
        let mut header = vec!["t".to_string()];
        for j in 1..=x0s.len() {
            header.extend((1..=n).map(|i| format!("v{j}_x{i}")));
        }
        let trajs: Vec<Vec<Vec<f64>>> = x0s.iter().map(|x0| simulate(&l, x0, &times)).collect::<Result<_, _>>()?;
        let records: Vec<Vec<f64>> = times
            .iter()
            .enumerate()
            .map(|(i, &t)| {
                let mut r = vec![t];
                for tr in &trajs {
                    r.extend_from_slice(&tr[i]);
                }
                r
            })
            .collect();
        csv::write(path, &header, &records)?;
        trajectory_csv = Some(path.display().to_string());
    }
    let v = ConsensusVerdicts {
        name: doc.name.clone(),
        n,
        algebraic_connectivity: algebraic_connectivity(&l),
        laplacian: l,
        ep,
        grid,
        audits,
        violation_witness,
        consensus,
        trajectory_csv,
    };
    Ok(Outcome { inputs: vec![text], verdicts: to_value(&v), human: render_consensus(&v) })
}

fn render_consensus(v: &ConsensusVerdicts) -> String {
    let mut s = String::new();
    writeln!(s, "scenario {:?} (n = {})", v.name, v.n).unwrap();
    writeln!(s, "Laplacian:").unwrap();
    for r in v.laplacian.to_rows() {
        writeln!(s, "  {}", fmt_vec(&r)).unwrap();
    }
    write!(s, "Laplacian EP status: {:?}", v.ep.status).unwrap();
    match (&v.ep.certificate, &v.ep.complex_spectrum) {
        (Some(c), _) => writeln!(s, " ({})", c.leaf().kind_name()).unwrap(),
        (None, Some(_)) => writeln!(s, " (non-real spectrum)").unwrap(),
        _ => s.push('\n'),
    }
    if v.n == 1 {
        writeln!(s, "single node: consensus is trivial").unwrap();
    }
    for (j, a) in v.audits.iter().enumerate() {
        write!(s, "x0 #{}: {} violations over {} grid times", j + 1, a.violations(), a.grid.len()).unwrap();
        match &a.first_violation {
            Some(f) => writeln!(s, ", first at t = {:.6e}", f.t).unwrap(),
            None => s.push('\n'),
        }
    }
    if let Some(w) = &v.violation_witness {
        writeln!(s, "violation witness: t = {:.9e}, x0 = {}", w.t, fmt_vec(w.x0.as_slice())).unwrap();
        writeln!(s, "  x(t) = {}", fmt_vec(&w.x_t)).unwrap();
        writeln!(s, "  x_i(t) x_i(0) = {}", fmt_vec(&w.products)).unwrap();
    }
    for (j, c) in v.consensus.iter().enumerate() {
        writeln!(s, "x0 #{}: consensus value {:.12e} at t = {:.4e} (spread {:.1e})", j + 1, c.value, c.time, c.spread)
            .unwrap();
    }
    if let Some(p) = &v.trajectory_csv {
        writeln!(s, "wrote {p}").unwrap();
    }
    s
}
