//! One line per acceptance criterion. Exits nonzero when a criterion fails,
//! unless it is listed in `KNOWN_UNATTAINABLE`.

use qserre_cli::{identity_report, rn_report, rvee_example_report, td_blocks};
use qserre_core::carrier::{MatrixCarrier, ShuffleCarrier};
use qserre_core::drg::{analyze_graph, build_bilinear_forms_graph, prepare, verify_invariants, DrgConfig};
use qserre_core::leonard::{build_qtet_quad, forbidden_xi, leonard_system_from_quad, rn_by_recursion, verify_generating_functions};
use qserre_core::relations::{verify_automorphisms, verify_relations, verify_word_images, Suite};
use qserre_core::scalar::{frac, int};
use qserre_core::td::transfer_basis;
use qserre_core::{generate_alternating, AlternatingFamily, Kind, NCPoly, QParams, Rational, Report, Word};
use std::time::{Duration, Instant};

/// d = 4, q = 2, xi = 2 has xi = q^(d-3), an excluded value; the pair is reducible.
const KNOWN_UNATTAINABLE: &[usize] = &[7];

struct Outcome {
    ok: bool,
    detail: String,
    info: Vec<String>,
}

impl Outcome {
    fn new(ok: bool, detail: impl Into<String>) -> Self {
        Outcome { ok, detail: detail.into(), info: Vec::new() }
    }
}

fn qs() -> [Rational; 2] {
    [int(2), frac(3, 5)]
}

fn shuffle_family(q: &Rational, depth: usize) -> (AlternatingFamily<NCPoly>, ShuffleCarrier) {
    let p = QParams::new(q.clone()).unwrap();
    let c = ShuffleCarrier::new(p.bparams().clone());
    let f = generate_alternating(&NCPoly::word(Word::X), &NCPoly::word(Word::Y), depth, p.bparams(), &c).unwrap();
    (f, c)
}

/// `(d, q, xi)` over the grid with forbidden values removed.
fn grid() -> Vec<(usize, QParams, Rational)> {
    let mut out = Vec::new();
    for d in [1usize, 3, 4, 5] {
        for q in qs() {
            let p = QParams::new(q).unwrap();
            for xi in [int(2), int(-3)] {
                if !forbidden_xi(d, &p).contains(&xi) {
                    out.push((d, p.clone(), xi));
                }
            }
        }
    }
    out
}

fn first_failure(reps: &[Report]) -> String {
    reps.iter()
        .find_map(|r| r.first_failure().map(|f| format!("{}: {} {}", r.suite, f.id, f.residual.as_deref().unwrap_or(""))))
        .unwrap_or_default()
}

fn summarize(reps: &[Report]) -> Outcome {
    let total: usize = reps.iter().map(|r| r.summary().total).sum();
    let ok = reps.iter().all(Report::all_pass) && total > 0;
    Outcome::new(ok, if ok { format!("{total} instances exact") } else { first_failure(reps) })
}

fn timed(limit: Duration, out: Outcome, t: Instant) -> Outcome {
    let el = t.elapsed();
    let mut o = out;
    if el > limit {
        o.ok = false;
        o.detail = format!("{} (took {el:.1?}, limit {limit:?})", o.detail);
    }
    o
}

fn c1() -> Outcome {
    let t = Instant::now();
    let reps: Vec<Report> = qs().iter().map(|q| verify_word_images(&shuffle_family(q, 5).0, 5).unwrap()).collect();
    timed(Duration::from_secs(5), summarize(&reps), t)
}

fn c2() -> Outcome {
    let t = Instant::now();
    let mut reps = Vec::new();
    for q in qs() {
        let (f, c) = shuffle_family(&q, 5);
        for (s, m) in [(Suite::Nrel1, 4), (Suite::Nrel2, 4), (Suite::Ggww, 6), (Suite::FourP, 4)] {
            reps.push(verify_relations(&f, &c, s, m).unwrap());
        }
    }
    timed(Duration::from_secs(120), summarize(&reps), t)
}

fn c3() -> Outcome {
    let reps: Vec<Report> = qs()
        .iter()
        .map(|q| verify_automorphisms(&shuffle_family(q, 5).0, 5, &int(2), &frac(-3, 7)).unwrap())
        .collect();
    summarize(&reps)
}

fn c4() -> Outcome {
    let t = Instant::now();
    let mut reps = Vec::new();
    let mut bad = Vec::new();
    for (d, p, xi) in grid() {
        match build_qtet_quad(d, &p, &xi) {
            Ok(quad) => reps.push(identity_report(&quad).unwrap()),
            Err(e) => bad.push(format!("({d},{},{xi}): {e}", p.q())),
        }
    }
    let quad = build_qtet_quad(1, &QParams::new(int(2)).unwrap(), &int(2)).unwrap();
    let f0 = quad.f[0] == frac(9, 4);
    let mut o = summarize(&reps);
    o.ok &= bad.is_empty() && f0;
    o.detail = format!("{} systems, {}; f0 = {}{}", reps.len(), o.detail, quad.f[0], bad.join("; "));
    timed(Duration::from_secs(30), o, t)
}

fn c5() -> Outcome {
    let mut reps = Vec::new();
    for (d, p, xi) in grid() {
        let quad = build_qtet_quad(d, &p, &xi).unwrap();
        let (rep, seq) = rn_report(&quad, 8).unwrap();
        reps.push(rep);
        reps.push(rvee_example_report(&seq).unwrap());
    }
    summarize(&reps)
}

fn c6() -> Outcome {
    let t = Instant::now();
    let reps: Vec<Report> = grid()
        .into_iter()
        .map(|(d, p, xi)| verify_generating_functions(&rn_by_recursion(d, &p, &xi, 12), 12).unwrap())
        .collect();
    timed(Duration::from_secs(10), summarize(&reps), t)
}

fn c7() -> Outcome {
    let t = Instant::now();
    let mut o = match td_blocks(4, "2", "2", 3) {
        Ok(run) => summarize(&run.reports),
        Err(e) => Outcome::new(false, e.message()),
    };
    o = timed(Duration::from_secs(20), o, t);
    for (q, xi) in [("2", "-3"), ("3/5", "2")] {
        let line = match td_blocks(4, q, xi, 3) {
            Ok(run) => {
                let (total, failed) = run.totals();
                format!("d=4 q={q} xi={xi}: {}/{total} block-table, flag and transfer checks pass", total - failed)
            }
            Err(e) => format!("d=4 q={q} xi={xi}: {}", e.message()),
        };
        o.info.push(line);
    }
    o
}

fn c8() -> Outcome {
    let mut rows = 0;
    let mut errs = Vec::new();
    for d in [1usize, 3] {
        for q in qs() {
            let p = QParams::new(q).unwrap();
            for xi in [int(2), int(-3)] {
                if forbidden_xi(d, &p).contains(&xi) {
                    continue;
                }
                let sys = leonard_system_from_quad(&build_qtet_quad(d, &p, &xi).unwrap()).unwrap();
                let fam = generate_alternating(&sys.a, &sys.astar, 3, p.bparams(), &MatrixCarrier::new(d + 1)).unwrap();
                for source in [Kind::Wminus, Kind::Wplus] {
                    match transfer_basis(&sys, &fam, source) {
                        Ok(out) => rows += out.tables.iter().map(|t| t.rows.len()).sum::<usize>(),
                        Err(e) => errs.push(format!("d={d} q={} xi={xi} {source:?}: {e}", p.q())),
                    }
                }
            }
        }
    }
    let ok = errs.is_empty() && rows > 0;
    Outcome::new(ok, if ok { format!("{rows} transferred vectors obey omega_k/omega_0") } else { errs.join("; ") })
}

fn c9() -> Outcome {
    let t = Instant::now();
    let g = build_bilinear_forms_graph(3, 3, 2).unwrap();
    let shape = g.n() == 512 && (0..g.n()).all(|v| g.degree(v) == 49);
    let an = match analyze_graph(&g, &DrgConfig::default()) {
        Ok(a) => a,
        Err(e) => return Outcome::new(false, e.to_string()),
    };
    let s = &an.summary;
    let ok = shape
        && s.diameter == 3
        && s.affine.r == int(64)
        && s.affine.s == int(-15)
        && s.module_dimension_sum == 512
        && !s.module_types.is_empty()
        && an.all_pass();
    let reports: Vec<Report> = an.reports().cloned().collect();
    let mut o = Outcome::new(
        ok,
        if ok {
            format!(
                "{} modules ({} thin), {} checks; every common eigenspace 1-dim: {}",
                s.module_count,
                s.thin_modules,
                reports.iter().map(|r| r.summary().total).sum::<usize>(),
                s.conjecture_all_one
            )
        } else {
            first_failure(&reports)
        },
    );
    o = timed(Duration::from_secs(600), o, t);
    for m in &s.module_types {
        o.info.push(format!(
            "endpoint {} diameter {} dim {}: {} module(s), thin {}, eigenspaces 1-dim {}",
            m.endpoint, m.diameter, m.dim, m.count, m.thin, m.conjecture_holds
        ));
    }
    o
}

fn c10() -> Outcome {
    let mut problems = Vec::new();

    // one shuffle coefficient of G3, on a word outside its support
    let (f, c) = shuffle_family(&int(2), 4);
    let target: *const NCPoly = f.g(3);
    let w = Word::parse("xxyyxy").unwrap();
    let bad = perturb(&f, target, w);
    let img = verify_word_images(&bad, 4).unwrap();
    let fails: Vec<String> = img.failures().map(|i| i.id.clone()).collect();
    if fails.len() != 1 || !fails[0].starts_with("G3 ") {
        problems.push(format!("word images: {fails:?}"));
    }
    let n2 = verify_relations(&bad, &c, Suite::Nrel2, 4).unwrap();
    if n2.all_pass() || n2.failures().any(|i| !i.id.contains("G3")) {
        problems.push(format!("nrel2: {:?}", n2.failures().map(|i| &i.id).collect::<Vec<_>>()));
    }

    // one r_n value
    let p = QParams::new(int(2)).unwrap();
    let mut seq = rn_by_recursion(3, &p, &int(2), 12);
    seq.r[5] += int(1);
    let g = verify_generating_functions(&seq, 12).unwrap();
    if g.all_pass() || g.failures().any(|i| !i.residual.as_deref().unwrap_or("").ends_with("order 5")) {
        problems.push("genfun did not localize r_5".into());
    }

    // one matrix entry of x30
    let mut quad = build_qtet_quad(3, &p, &int(2)).unwrap();
    let e = quad.x30.get(0, 1).clone();
    quad.x30.set(0, 1, e + int(1));
    let ids = identity_report(&quad).unwrap();
    let untouched = ["qw x01 x12", "qw x12 x23"];
    if ids.all_pass() || ids.failures().any(|i| untouched.contains(&i.id.as_str())) {
        problems.push(format!("identities: {:?}", ids.failures().map(|i| &i.id).collect::<Vec<_>>()));
    }

    // one entry of the graph's A
    let gph = build_bilinear_forms_graph(2, 3, 2).unwrap();
    let (mut ctx, _) = prepare(&gph, &DrgConfig { k_max: 1, ..DrgConfig::default() }).unwrap();
    ctx.a.bump(0, 5);
    let fam = generate_alternating(&ctx.a, &ctx.astar, 1, &ctx.b, &ctx.carrier()).unwrap();
    let inv = verify_invariants(&ctx, &fam, 1, 0).unwrap();
    if !inv.failures().any(|i| i.id == "W-0^t = W-0") {
        problems.push("graph perturbation not localized at W-0".into());
    }

    let ok = problems.is_empty();
    Outcome::new(
        ok,
        if ok { "shuffle term, r_n value, x30 entry and adjacency entry each caught with a localized id".to_string() } else { problems.join("; ") },
    )
}

fn perturb(f: &AlternatingFamily<NCPoly>, target: *const NCPoly, w: Word) -> AlternatingFamily<NCPoly> {
    f.map(|e| {
        let mut out = e.clone();
        if std::ptr::eq(e, target) {
            out.add_term(w, int(1));
        }
        Ok(out)
    })
    .unwrap()
}

fn main() {
    let criteria: [(usize, &str, fn() -> Outcome); 10] = [
        (1, "shuffle-embedding fidelity", c1),
        (2, "relation suites", c2),
        (3, "sigma / dagger / scaling", c3),
        (4, "Leonard construction", c4),
        (5, "r_n cross-route", c5),
        (6, "generating functions", c6),
        (7, "block-action theorems at d=4, q=2, xi=2", c7),
        (8, "basis transfer", c8),
        (9, "DRG pipeline on Bil(3x3, GF(2))", c9),
        (10, "fault injection", c10),
    ];
    let mut unexpected = 0;
    for (n, name, f) in criteria {
        let t = Instant::now();
        let o = f();
        let verdict = match (o.ok, KNOWN_UNATTAINABLE.contains(&n)) {
            (true, _) => "PASS",
            (false, true) => "FAIL (known unattainable)",
            (false, false) => {
                unexpected += 1;
                "FAIL"
            }
        };
        println!("criterion {n:>2} {verdict:<26} {name} [{:.1?}]: {}", t.elapsed(), o.detail);
        for i in o.info {
            println!("    info: {i}");
        }
    }
    if unexpected > 0 {
        std::process::exit(1);
    }
}
