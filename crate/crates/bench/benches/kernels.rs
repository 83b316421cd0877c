use criterion::{criterion_group, criterion_main, BenchmarkId, Criterion};
use qserre_core::drg::{build_bilinear_forms_graph, prepare, DrgConfig};
use qserre_core::leonard::{build_qtet_quad, rn_by_recursion, verify_generating_functions};
use qserre_core::scalar::{frac, int};
use qserre_core::{generate_alternating, BParams, NCPoly, QParams, ShuffleCarrier, Word};
use std::hint::black_box;

fn shuffle(c: &mut Criterion) {
    let p = BParams::new(int(4)).unwrap();
    let u = NCPoly::parse_word("xyxyx").unwrap();
    let v = NCPoly::parse_word("yxyxy").unwrap();
    c.bench_function("shuffle product, two 5-letter words", |b| b.iter(|| black_box(&u).shuffle(black_box(&v), &p).unwrap()));

    let mut g = c.benchmark_group("alternating family in the shuffle carrier");
    for depth in [3usize, 5] {
        let qp = QParams::new(frac(3, 5)).unwrap();
        let carrier = ShuffleCarrier::new(qp.bparams().clone());
        g.bench_with_input(BenchmarkId::from_parameter(depth), &depth, |b, &d| {
            b.iter(|| {
                generate_alternating(&NCPoly::word(Word::X), &NCPoly::word(Word::Y), d, qp.bparams(), &carrier).unwrap()
            })
        });
    }
    g.finish();
}

fn leonard(c: &mut Criterion) {
    let p = QParams::new(int(2)).unwrap();
    let mut g = c.benchmark_group("q-tetrahedron quadruple");
    for d in [3usize, 5] {
        g.bench_with_input(BenchmarkId::from_parameter(d), &d, |b, &d| b.iter(|| build_qtet_quad(d, &p, &int(-3)).unwrap()));
    }
    g.finish();
    c.bench_function("generating functions through order 12", |b| {
        b.iter(|| verify_generating_functions(&rn_by_recursion(5, &p, &int(-3), 12), 12).unwrap())
    });
}

fn integer_matrices(c: &mut Criterion) {
    let g = build_bilinear_forms_graph(2, 3, 2).unwrap();
    let (ctx, _) = prepare(&g, &DrgConfig { k_max: 1, ..DrgConfig::default() }).unwrap();
    c.bench_function("64x64 integer matrix product", |b| b.iter(|| black_box(&ctx.a).mul(black_box(&ctx.astar)).unwrap()));
}

criterion_group! {
    name = benches;
    config = Criterion::default().sample_size(20);
    targets = shuffle, leonard, integer_matrices
}
criterion_main!(benches);
