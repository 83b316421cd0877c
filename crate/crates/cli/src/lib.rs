//! Suite runners behind the `qserre-lab` binary.
//!
//! Every runner returns a [`Run`]: a list of reports plus whatever payload the
//! command publishes (matrices, tables, graph summaries). Exit codes follow
//! [`Run::exit_code`] and [`RunError::exit_code`].

use qserre_core::carrier::{MatrixCarrier, ShuffleCarrier};
use qserre_core::drg::{self, DrgAnalysis, DrgConfig, Graph};
use qserre_core::leonard::{
    extract_rn, forbidden_xi, leonard_system_from_quad, quad_residuals, rn_by_recursion, solve_quad,
    verify_generating_functions, QTetQuad, RnSequence,
};
use qserre_core::relations::{verify_automorphisms, verify_relations, verify_word_images, Suite};
use qserre_core::report::{RESIDUAL_TERMS, SCHEMA};
use qserre_core::scalar::{format_rational, int, parse_rational};
use qserre_core::td::{render_tetrahedron, tetrahedron_report, transfer_basis, verify_block_tables};
use qserre_core::{generate_alternating, Error, Kind, NCPoly, QParams, Rational, Report, TruncatedSeries, Word};
use serde_json::{json, Map, Value};
use std::fmt::Write as _;
use std::path::Path;

pub const EXIT_OK: i32 = 0;
pub const EXIT_FAILED: i32 = 1;
pub const EXIT_CONFIG: i32 = 2;

/// Why a run stopped before producing a full report.
#[derive(Debug)]
pub enum RunError {
    /// Bad flags or parameters outside a module's preconditions.
    Config(String),
    /// A mathematical check failed hard.
    Check(Error),
}

impl RunError {
    pub fn exit_code(&self) -> i32 {
        match self {
            RunError::Config(_) => EXIT_CONFIG,
            RunError::Check(_) => EXIT_FAILED,
        }
    }

    pub fn message(&self) -> String {
        match self {
            RunError::Config(m) => m.clone(),
            RunError::Check(e) => e.to_string(),
        }
    }
}

impl From<Error> for RunError {
    fn from(e: Error) -> Self {
        match e {
            Error::Parse(_)
            | Error::Input(_)
            | Error::Domain(_)
            | Error::ForbiddenXi(_)
            | Error::TooLarge(_)
            | Error::WordTooLong
            | Error::InsufficientFamilyDepth { .. } => RunError::Config(e.to_string()),
            other => RunError::Check(other),
        }
    }
}

pub type RunResult<T> = std::result::Result<T, RunError>;

#[derive(Debug, Clone)]
pub struct Run {
    pub command: String,
    pub config: Value,
    pub reports: Vec<Report>,
    /// Reports published inside `payload` rather than under `reports`; they
    /// still count towards the summary.
    pub nested: Vec<Report>,
    pub payload: Map<String, Value>,
    /// Extra human-readable text for standard output.
    pub text: String,
}

impl Run {
    pub fn new(command: &str, config: Value) -> Self {
        Run {
            command: command.into(),
            config,
            reports: Vec::new(),
            nested: Vec::new(),
            payload: Map::new(),
            text: String::new(),
        }
    }

    fn all(&self) -> impl Iterator<Item = &Report> {
        self.reports.iter().chain(&self.nested)
    }

    pub fn totals(&self) -> (usize, usize) {
        self.all().fold((0, 0), |(t, f), r| {
            let s = r.summary();
            (t + s.total, f + s.failed)
        })
    }

    pub fn exit_code(&self) -> i32 {
        if self.totals().1 == 0 {
            EXIT_OK
        } else {
            EXIT_FAILED
        }
    }

    pub fn to_json(&self) -> Value {
        let (total, failed) = self.totals();
        let mut v = json!({
            "schema": SCHEMA,
            "command": self.command,
            "config": self.config,
            "reports": self.reports.iter().map(Report::to_json).collect::<Vec<_>>(),
            "summary": {"total": total, "passed": total - failed, "failed": failed},
        });
        let obj = v.as_object_mut().expect("object");
        for (k, x) in &self.payload {
            obj.insert(k.clone(), x.clone());
        }
        v
    }

    /// One line per report, then the first failures, then any extra text.
    pub fn summary_table(&self) -> String {
        let mut out = String::new();
        let line = |out: &mut String, name: &str, s: (usize, usize)| {
            let verdict = if s.1 == 0 { "PASS" } else { "FAIL" };
            let _ = writeln!(out, "{name:<32} {:>7}/{:<7} {verdict}", s.0 - s.1, s.0);
        };
        for r in &self.reports {
            let s = r.summary();
            line(&mut out, &r.suite, (s.total, s.failed));
        }
        if !self.nested.is_empty() {
            let s = self.nested.iter().fold((0, 0), |(t, f), r| (t + r.summary().total, f + r.summary().failed));
            line(&mut out, &format!("{} nested reports", self.nested.len()), s);
        }
        let (total, failed) = self.totals();
        line(&mut out, "total", (total, failed));
        for r in self.all() {
            for f in r.failures().take(5) {
                let _ = writeln!(out, "  FAILED {}: {} ({})", r.suite, f.id, f.residual.as_deref().unwrap_or(""));
            }
        }
        if !self.text.is_empty() {
            out.push('\n');
            out.push_str(&self.text);
        }
        out
    }
}

/// JSON for a run that stopped with an error.
pub fn error_json(command: &str, config: &Value, e: &RunError) -> Value {
    let kind = match e {
        RunError::Config(_) => "config",
        RunError::Check(_) => "check",
    };
    json!({
        "schema": SCHEMA,
        "command": command,
        "config": config,
        "error": {"kind": kind, "message": e.message()},
    })
}

/// Writes `text` next to `path` and renames it into place.
pub fn write_atomic(path: &Path, text: &str) -> std::io::Result<()> {
    let dir = match path.parent() {
        Some(p) if !p.as_os_str().is_empty() => p,
        _ => Path::new("."),
    };
    let mut tmp = tempfile::NamedTempFile::new_in(dir)?;
    std::io::Write::write_all(&mut tmp, text.as_bytes())?;
    tmp.as_file().sync_all()?;
    tmp.persist(path).map_err(|e| e.error)?;
    Ok(())
}

pub fn to_pretty(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn rational(name: &str, s: &str) -> RunResult<Rational> {
    parse_rational(s).map_err(|e| RunError::Config(format!("--{name}: {e}")))
}

fn qparams(s: &str) -> RunResult<QParams> {
    Ok(QParams::new(rational("q", s)?)?)
}

fn strs(v: &[Rational]) -> Vec<String> {
    v.iter().map(format_rational).collect()
}

// ---------------------------------------------------------------- shuffle

/// The shuffle-carrier suites: word images and automorphisms to `k + 1`,
/// nrel1/nrel2/fourP to `k`, the G-sum identity to `k + 2`, and q-Serre.
pub fn shuffle_verify(q: &str, k: usize, l0: &str, l1: &str) -> RunResult<Run> {
    let p = qparams(q)?;
    let (l0, l1) = (rational("l0", l0)?, rational("l1", l1)?);
    if l0 == int(0) || l1 == int(0) {
        return Err(RunError::Config("scaling factors must be nonzero".into()));
    }
    let mut run = Run::new(
        "shuffle verify",
        json!({"q": format_rational(p.q()), "K": k, "l0": format_rational(&l0), "l1": format_rational(&l1)}),
    );
    let c = ShuffleCarrier::new(p.bparams().clone());
    let fam = generate_alternating(&NCPoly::word(Word::X), &NCPoly::word(Word::Y), k + 1, p.bparams(), &c)?;
    run.reports.push(verify_word_images(&fam, k + 1)?);
    run.reports.push(verify_automorphisms(&fam, k + 1, &l0, &l1)?);
    for (suite, max) in [(Suite::QSerre, 0), (Suite::Nrel1, k), (Suite::Nrel2, k), (Suite::Ggww, k + 2), (Suite::FourP, k)] {
        run.reports.push(verify_relations(&fam, &c, suite, max)?);
    }
    let images: Map<String, Value> = (0..=k + 1)
        .flat_map(|i| {
            [
                (Kind::Wminus.label(i), fam.w_minus(i).to_json()),
                (Kind::Wplus.label(i), fam.w_pos(i + 1).to_json()),
                (Kind::G.label(i + 1), fam.g(i + 1).to_json()),
                (Kind::Gtilde.label(i + 1), fam.gt(i + 1).to_json()),
            ]
        })
        .collect();
    run.payload.insert("elements".into(), Value::Object(images));
    Ok(run)
}

// ---------------------------------------------------------------- leonard

fn check_xi(d: usize, p: &QParams, xi: &Rational) -> RunResult<()> {
    if d == 0 {
        return Err(RunError::Config("--d must be at least 1".into()));
    }
    if *xi == int(0) || forbidden_xi(d, p).contains(xi) {
        return Err(Error::ForbiddenXi(format_rational(xi)).into());
    }
    Ok(())
}

/// The twelve defining identities of the quadruple, the superdiagonal and
/// the Leonard system it carries.
pub fn identity_report(quad: &QTetQuad) -> RunResult<Report> {
    let mut rep = Report::new("identities");
    for (name, m) in quad_residuals(quad)? {
        rep.check(name, m.is_zero(), || m.render(RESIDUAL_TERMS));
    }
    for (i, f) in quad.f.iter().enumerate() {
        rep.check(format!("f_{i} != 0"), *f != int(0), || "vanishes".into());
    }
    match leonard_system_from_quad(quad) {
        Ok(sys) => {
            rep.pass("(x12, x30) is a Leonard system");
            rep.check("q-Serre type", sys.is_qserre(quad.params.b()), String::new);
        }
        Err(e) => rep.fail("(x12, x30) is a Leonard system", e.to_string()),
    }
    Ok(rep)
}

/// `r_n`, `r∨_n` read off the matrices against the recursion, termwise.
pub fn rn_report(quad: &QTetQuad, n_max: usize) -> RunResult<(Report, RnSequence)> {
    let mut rep = Report::new("rn-cross-route");
    let rec = rn_by_recursion(quad.d, &quad.params, &quad.xi, n_max);
    rep.check("recursion satisfies the r∨ convolution", rec.convolution_defect().is_none(), || {
        format!("first defect at n = {:?}", rec.convolution_defect())
    });
    match extract_rn(quad, n_max) {
        Err(e) => rep.fail("extract_rn", e.to_string()),
        Ok(ex) => {
            for n in 0..=n_max {
                rep.check(format!("r_{n}"), ex.r[n] == rec.r[n], || format!("{} vs {}", ex.r[n], rec.r[n]));
                rep.check(format!("r∨_{n}"), ex.rvee[n] == rec.rvee[n], || {
                    format!("{} vs {}", ex.rvee[n], rec.rvee[n])
                });
            }
        }
    }
    Ok((rep, rec))
}

/// The displayed closed forms of `r∨_1` and `r∨_2`.
pub fn rvee_example_report(seq: &RnSequence) -> RunResult<Report> {
    let mut rep = Report::new("rvee-examples");
    if seq.rvee.len() < 3 {
        return Err(RunError::Config("need r∨ through order 2".into()));
    }
    let p = QParams::new(seq.q.clone())?;
    let (di, xi) = (seq.d as i64, &seq.xi);
    let x2 = xi * xi;
    let want1 = p.qpow(1) + xi * p.qpow(di + 2) + xi * p.qpow(-di);
    let want2 = p.qpow(2) + &x2 * p.qpow(2 * di + 4) + &x2 * p.qpow(-2 * di) + xi * p.qpow(di + 3)
        + xi * p.qpow(1 - di)
        + &x2 * p.qpow(2);
    rep.check("r∨_1 = q + ξq^(d+2) + ξq^(-d)", seq.rvee[1] == want1, || format!("{} vs {want1}", seq.rvee[1]));
    rep.check(
        "r∨_2 = q^2 + ξ^2q^(2d+4) + ξ^2q^(-2d) + ξq^(d+3) + ξq^(1-d) + ξ^2q^2",
        seq.rvee[2] == want2,
        || format!("{} vs {want2}", seq.rvee[2]),
    );
    Ok(rep)
}

pub fn leonard_build(d: usize, q: &str, xi: &str, n_max: usize) -> RunResult<Run> {
    let p = qparams(q)?;
    let xi = rational("xi", xi)?;
    check_xi(d, &p, &xi)?;
    let mut run = Run::new("leonard build", json!({"d": d, "q": format_rational(p.q()), "xi": format_rational(&xi), "N": n_max}));
    let quad = solve_quad(d, &p, &xi)?;
    run.reports.push(identity_report(&quad)?);
    let (rn, seq) = rn_report(&quad, n_max)?;
    run.reports.push(rn);
    run.reports.push(rvee_example_report(&seq)?);
    run.reports.push(verify_generating_functions(&seq, n_max)?);
    let grid: Map<String, Value> = run.reports.iter().map(|r| (r.suite.clone(), Value::Bool(r.all_pass()))).collect();
    run.payload.insert(
        "matrices".into(),
        json!({"x01": quad.x01.to_json(), "x12": quad.x12.to_json(), "x23": quad.x23.to_json(), "x30": quad.x30.to_json()}),
    );
    run.payload.insert("f".into(), json!(strs(&quad.f)));
    run.payload.insert("upsilon".into(), json!(format_rational(&quad.upsilon)));
    run.payload.insert("r".into(), json!(strs(&seq.r)));
    run.payload.insert("rvee".into(), json!(strs(&seq.rvee)));
    run.payload.insert("pass_grid".into(), Value::Object(grid));
    let mut t = String::from(" n  r_n  r∨_n\n");
    for n in 0..=n_max {
        let _ = writeln!(t, "{n:>2}  {}  {}", seq.r[n], seq.rvee[n]);
    }
    run.text = t;
    Ok(run)
}

// ---------------------------------------------------------------- series

/// Generating-function identities for `R(t)` and truncated-series
/// round trips on it.
pub fn series_check(d: usize, q: &str, xi: &str, n_max: usize) -> RunResult<Run> {
    let p = qparams(q)?;
    let xi = rational("xi", xi)?;
    check_xi(d, &p, &xi)?;
    let mut run = Run::new("series", json!({"d": d, "q": format_rational(p.q()), "xi": format_rational(&xi), "N": n_max}));
    let seq = rn_by_recursion(d, &p, &xi, n_max);
    run.reports.push(verify_generating_functions(&seq, n_max)?);
    let r = TruncatedSeries::new(seq.r.clone(), n_max);
    let mut rep = Report::new("series");
    let diff = |a: &TruncatedSeries, b: &TruncatedSeries| a.first_difference(b).map(|o| format!("differs at order {o}"));
    rep.record("exp(log R) = R", diff(&r.log()?.exp()?, &r));
    rep.record("R * R^-1 = 1", diff(&r.mul(&r.inv()?)?, &TruncatedSeries::one(n_max)));
    let dl = r.log()?.derivative();
    let cut = |s: TruncatedSeries| TruncatedSeries::new(s.coeffs()[..n_max].to_vec(), n_max.saturating_sub(1));
    rep.record("(log R)' R = R'", diff(&cut(dl.mul(&r)?), &cut(r.derivative())));
    run.reports.push(rep);
    run.payload.insert("r".into(), json!(strs(&seq.r)));
    run.payload.insert("log_r".into(), json!(strs(r.log()?.coeffs())));
    Ok(run)
}

// ---------------------------------------------------------------- td

/// Block tables, sandwiches, flag actions, the tetrahedron report and both
/// basis transfers on the Leonard system of `(d, q, xi)`.
pub fn td_blocks(d: usize, q: &str, xi: &str, k_max: usize) -> RunResult<Run> {
    let p = qparams(q)?;
    let xi = rational("xi", xi)?;
    check_xi(d, &p, &xi)?;
    let mut run = Run::new("td", json!({"d": d, "q": format_rational(p.q()), "xi": format_rational(&xi), "K": k_max}));
    let quad = solve_quad(d, &p, &xi)?;
    let sys = leonard_system_from_quad(&quad)?;
    let fam = generate_alternating(&sys.a, &sys.astar, k_max, p.bparams(), &MatrixCarrier::new(d + 1))?;
    run.reports.push(verify_block_tables(&sys, &fam, k_max)?);
    let rows = tetrahedron_report(&sys, &fam, k_max)?;
    let mut tet = Report::new("tetrahedron");
    for r in &rows {
        tet.check(format!("{} {} {}", r.decomposition, r.element, r.expected), r.ok, || r.observed.join(" "));
    }
    run.reports.push(tet);
    let mut tr = Report::new("transfer");
    let mut tables = Vec::new();
    for source in [Kind::Wminus, Kind::Wplus] {
        match transfer_basis(&sys, &fam, source) {
            Ok(out) => {
                for t in &out.tables {
                    tr.check(format!("{source:?} -> {} on {}", t.target, t.decomposition), t.rows.len() == d + 1, || {
                        format!("{} rows", t.rows.len())
                    });
                }
                tables.push(serde_json::to_value(&out).expect("serializable"));
            }
            Err(e) => tr.fail(format!("{source:?} transfer"), e.to_string()),
        }
    }
    run.reports.push(tr);
    run.payload.insert("tetrahedron".into(), serde_json::to_value(&rows).expect("serializable"));
    run.payload.insert("transfer".into(), Value::Array(tables));
    run.text = render_tetrahedron(&rows);
    Ok(run)
}

// ---------------------------------------------------------------- drg

pub fn drg_build(family: &str, rows: usize, cols: usize, p: u64) -> RunResult<(Graph, Run)> {
    if family != "bilinear" {
        return Err(RunError::Config(format!("unknown family {family:?}; only \"bilinear\" is built in")));
    }
    let g = drg::build_bilinear_forms_graph(rows, cols, p)?;
    let mut run = Run::new("drg build", json!({"family": family, "rows": rows, "cols": cols, "p": p}));
    let mut rep = Report::new("distance-regularity");
    match drg::check_distance_regular(&g) {
        Ok(ia) => {
            rep.pass(format!("distance-regular with intersection array {ia}"));
            run.payload.insert("intersection_array".into(), serde_json::to_value(&ia).expect("serializable"));
        }
        Err(e) => rep.fail("distance-regular", e.to_string()),
    }
    run.reports.push(rep);
    run.payload.insert("vertices".into(), json!(g.n()));
    run.payload.insert("edges".into(), json!(g.edge_count()));
    Ok((g, run))
}

/// Graph file with the schema tag.
pub fn graph_json(g: &Graph) -> Value {
    let mut v = g.to_json();
    v["schema"] = SCHEMA.into();
    v
}

pub fn read_graph(path: &Path) -> RunResult<Graph> {
    let text = std::fs::read_to_string(path).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    let v: Value = serde_json::from_str(&text).map_err(|e| RunError::Config(format!("{}: {e}", path.display())))?;
    Ok(Graph::from_json(&v)?)
}

pub fn drg_analyze(g: &Graph, cfg: &DrgConfig) -> RunResult<(DrgAnalysis, Run)> {
    if cfg.base >= g.n() {
        return Err(RunError::Config(format!("--base {} out of range for {} vertices", cfg.base, g.n())));
    }
    let an = drg::analyze_graph(g, cfg)?;
    let mut run = Run::new(
        "drg analyze",
        json!({"base": cfg.base, "K": cfg.k_max, "exact": cfg.exact, "seed": cfg.seed}),
    );
    run.reports = vec![an.pair.clone(), an.invariants.clone(), an.decomposition.clone()];
    run.nested = an.modules.iter().map(|m| m.checks.clone()).collect();
    run.payload.insert("summary".into(), serde_json::to_value(&an.summary).expect("serializable"));
    run.payload.insert("modules".into(), serde_json::to_value(&an.modules).expect("serializable"));
    let s = &an.summary;
    let mut t = format!(
        "|X| = {}, k = {}, d = {}, {}\neigenvalues {} with multiplicities {}\nb = {}, r = {}, s = {}\n{} modules, dimensions sum to {}, {} thin\n",
        s.vertices,
        s.valency,
        s.diameter,
        s.intersection_array,
        s.eigenvalues.join(", "),
        s.multiplicities.join(", "),
        s.b,
        s.affine.r,
        s.affine.s,
        s.module_count,
        s.module_dimension_sum,
        s.thin_modules
    );
    let _ = writeln!(t, "endpoint diameter dim thin count  all eigenspaces 1-dim");
    for m in &s.module_types {
        let _ = writeln!(t, "{:>8} {:>8} {:>3} {:>4} {:>5}  {}", m.endpoint, m.diameter, m.dim, m.thin, m.count, m.conjecture_holds);
    }
    run.text = t;
    Ok((an, run))
}
