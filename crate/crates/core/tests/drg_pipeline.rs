use qserre_core::drg::{
    analyze_graph, build_bilinear_forms_graph, prepare, verify_invariants, DrgConfig, ModuleType,
};
use qserre_core::generate_alternating;

fn types(t: &[ModuleType]) -> Vec<(usize, usize, usize, usize)> {
    t.iter().map(|m| (m.endpoint, m.diameter, m.dim, m.count)).collect()
}

#[test]
fn bil_2x3_over_gf2_exact_everywhere() {
    let g = build_bilinear_forms_graph(2, 3, 2).unwrap();
    let an = analyze_graph(&g, &DrgConfig { exact: true, ..DrgConfig::default() }).unwrap();
    assert!(an.all_pass(), "{} failures", an.failed());
    assert_eq!(an.summary.module_dimension_sum, 64);
    assert_eq!(an.modules[0].endpoint, 0);
    assert_eq!(an.modules[0].dim, 3);
    assert!(an.modules.iter().filter(|m| m.thin).all(|m| m.mode == "exact"));
    assert!(an.to_json()["schema"] == "qserre-lab/1");
}

#[test]
fn bil_3x3_over_gf2() {
    let g = build_bilinear_forms_graph(3, 3, 2).unwrap();
    let an = analyze_graph(&g, &DrgConfig::default()).unwrap();
    assert!(an.all_pass(), "{} failures", an.failed());
    let s = &an.summary;
    assert_eq!((s.vertices, s.valency, s.diameter), (512, 49, 3));
    assert_eq!(s.intersection_array, "{49,36,16; 1,6,28}");
    assert_eq!(s.eigenvalues, ["49", "17", "1", "-7"]);
    assert_eq!(s.multiplicities, ["1", "49", "294", "168"]);
    assert_eq!((s.affine.r.to_string(), s.affine.s.to_string()), ("64".into(), "-15".into()));
    assert_eq!(s.module_dimension_sum, 512);
    assert_eq!(
        types(&s.module_types),
        [(0, 3, 4, 1), (1, 1, 2, 12), (1, 2, 4, 36), (2, 0, 1, 96), (2, 1, 2, 113), (3, 0, 1, 18)]
    );
    assert!(s.conjecture_all_one);
    assert_eq!(an.modules[0].mode, "exact");
    for m in &an.modules {
        m.ensure().unwrap();
    }
}

#[test]
fn perturbed_adjacency_is_caught() {
    let g = build_bilinear_forms_graph(2, 3, 2).unwrap();
    let cfg = DrgConfig { k_max: 1, ..DrgConfig::default() };
    let (mut ctx, _) = prepare(&g, &cfg).unwrap();
    ctx.a.bump(0, 5);
    let fam = generate_alternating(&ctx.a, &ctx.astar, 1, &ctx.b, &ctx.carrier()).unwrap();
    let rep = verify_invariants(&ctx, &fam, 1, 0).unwrap();
    assert!(!rep.all_pass());
    let ids: Vec<&str> = rep.failures().map(|f| f.id.as_str()).collect();
    assert!(ids.contains(&"W-0^t = W-0"), "{ids:?}");
}
