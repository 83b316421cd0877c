use qserre_core::carrier::MatrixCarrier;
use qserre_core::leonard::{build_qtet_quad, leonard_system_from_quad, solve_quad};
use qserre_core::td::*;
use qserre_core::scalar::{frac, int};
use qserre_core::{generate_alternating, Kind, QParams, Rational};

fn system(d: usize, q: Rational, xi: Rational) -> (TDSystem, qserre_core::AlternatingFamily<qserre_core::Matrix>) {
    let p = QParams::new(q).unwrap();
    let quad = build_qtet_quad(d, &p, &xi).unwrap();
    let sys = leonard_system_from_quad(&quad).unwrap();
    let fam = generate_alternating(&sys.a, &sys.astar, 3, p.bparams(), &MatrixCarrier::new(d + 1)).unwrap();
    (sys, fam)
}

#[test]
fn d4_block_tables() {
    for (q, xi) in [(int(2), int(-3)), (frac(3, 5), int(2))] {
        let (sys, fam) = system(4, q, xi);
        let rep = verify_block_tables(&sys, &fam, 3).unwrap();
        assert!(rep.all_pass(), "{:?}", rep.first_failure());
        let rows = tetrahedron_report(&sys, &fam, 3).unwrap();
        assert!(rows.iter().all(|r| r.ok), "{}", render_tetrahedron(&rows));
        for r in &rows {
            assert!(r.observed.iter().all(|o| *o == r.expected), "{}", render_tetrahedron(&rows));
        }
    }
}

#[test]
fn d4_flag_actions_are_strict() {
    let (sys, fam) = system(4, int(2), int(-3));
    let cat = decomposition_catalog(&sys).unwrap();
    let w = fam.w_minus(2);
    assert_eq!(flag_action(w, cat.flag(Flag::Zero)), FlagAction::Stabilizes);
    assert_eq!(flag_action(w, cat.flag(Flag::D)), FlagAction::Stabilizes);
    assert_eq!(flag_action(w, cat.flag(Flag::ZeroStar)), FlagAction::Raises);
    assert_eq!(flag_action(w, cat.flag(Flag::DStar)), FlagAction::Raises);
}

#[test]
fn catalog_and_transition_d3() {
    let (sys, _) = system(3, int(2), int(2));
    let u = split_decomposition(&sys).unwrap();
    let cat = decomposition_catalog(&sys).unwrap();
    assert_eq!(cat.decomp(Decomp::ZeroStarZero), &u[..]);
    assert_eq!(u[0], sys.dual_eigenspace(0));
    assert_eq!(u[3], sys.eigenspace(0));
    let t = split_transition(&sys, &u).unwrap();
    let n = sys.n();
    assert_eq!(t.psistar.mul(&t.psistar_inv).unwrap(), qserre_core::Matrix::identity(n));
    let p = tridiagonal_params(&sys.theta, &sys.thetastar).unwrap();
    assert_eq!(p.beta, frac(17, 4));
    let (r1, r2) = tridiagonal_relation_residuals(&sys, &p).unwrap();
    assert!(r1.is_zero() && r2.is_zero());
}

#[test]
fn transfer_d3() {
    for (q, xi) in [(int(2), int(2)), (frac(3, 5), int(-3))] {
        let (sys, fam) = system(3, q, xi);
        for source in [Kind::Wminus, Kind::Wplus] {
            let out = transfer_basis(&sys, &fam, source).unwrap();
            assert_eq!(out.tables.len(), 2);
            for t in &out.tables {
                assert_eq!(t.rows.len(), 4);
            }
        }
    }
}

#[test]
fn transfer_maps_are_psi_and_psistar() {
    let (sys, fam) = system(3, int(2), int(2));
    let u = split_decomposition(&sys).unwrap();
    let t = split_transition(&sys, &u).unwrap();
    let minus = transfer_basis(&sys, &fam, Kind::Wminus).unwrap();
    assert_eq!(minus.tables[0].decomposition, "[0*,0]");
    for row in &minus.tables[0].rows {
        assert_eq!(t.psi.mul_vec(&row.v), row.u);
    }
    let plus = transfer_basis(&sys, &fam, Kind::Wplus).unwrap();
    for row in &plus.tables[0].rows {
        assert_eq!(t.psistar.mul_vec(&row.v), row.u);
    }
}

#[test]
fn d4_at_xi_2_is_reducible() {
    let p = QParams::new(int(2)).unwrap();
    let quad = solve_quad(4, &p, &int(2)).unwrap();
    assert_eq!(quad.f[1], int(0));
    assert!(build_qtet_quad(4, &p, &int(2)).is_err());
}
