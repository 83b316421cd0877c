use super::*;
use crate::alternating::generate_alternating;
use crate::carrier::MatrixCarrier;
use crate::error::Error;
use crate::linalg::Matrix;
use crate::scalar::{frac, int, BParams, Rational};
use crate::word::Kind;

fn m(rows: Vec<Vec<Rational>>) -> Matrix {
    Matrix::from_rows(rows).unwrap()
}

/// The `d = 1` pair at `q = 2`, `xi = 2`.
fn d1() -> (Matrix, Matrix) {
    let a = m(vec![vec![int(2), int(0)], vec![int(1), frac(1, 2)]]);
    let astar = m(vec![vec![int(2), frac(9, 4)], vec![int(0), frac(1, 2)]]);
    (a, astar)
}

fn d1_system() -> TDSystem {
    let (a, astar) = d1();
    validate_td_system(
        &a,
        &astar,
        Ordering::Given { theta: vec![frac(1, 2), int(2)], thetastar: vec![int(2), frac(1, 2)] },
    )
    .unwrap()
}

#[test]
fn d1_validates() {
    let sys = d1_system();
    assert_eq!(sys.shape, vec![1, 1]);
    assert!(sys.is_leonard());
    assert!(sys.is_qserre(&int(4)));
    let disc = validate_td_system(&sys.a, &sys.astar, Ordering::QSerre(int(4))).unwrap();
    assert_eq!(disc.theta, sys.theta);
    assert_eq!(disc.thetastar, sys.thetastar);
}

#[test]
fn lower_triangular_variant_is_reducible() {
    // (-3, 2) is an eigenvector of both matrices for 1/2
    let a = m(vec![vec![frac(1, 2), int(0)], vec![int(1), int(2)]]);
    let (_, astar) = d1();
    let v = vec![int(-3), int(2)];
    assert_eq!(a.mul_vec(&v), vec![frac(-3, 2), int(1)]);
    assert_eq!(astar.mul_vec(&v), vec![frac(-3, 2), int(1)]);
    let err = validate_td_system(&a, &astar, Ordering::Discover).unwrap_err();
    assert!(matches!(err, Error::NotIrreducible(_)), "{err:?}");
}

#[test]
fn scalar_pair_is_reducible() {
    let i = Matrix::identity(2);
    let err = validate_td_system(&i, &i, Ordering::Discover).unwrap_err();
    assert!(matches!(err, Error::NotIrreducible(_)), "{err:?}");
}

#[test]
fn swapped_ordering_is_not_tridiagonal() {
    // A diagonal, A* the path adjacency: the standard order is 0,1,2
    let a = Matrix::diag(&[int(1), int(2), int(3)]);
    let astar = Matrix::from_i64(&[&[0, 1, 0], &[2, 0, 2], &[0, 1, 0]]);
    let ev = eigen_order(&astar);
    let bad = validate_td_system(
        &a,
        &astar,
        Ordering::Given { theta: vec![int(2), int(1), int(3)], thetastar: ev },
    );
    assert!(matches!(bad, Err(Error::NotTridiagonal(_, _))), "{bad:?}");
}

fn eigen_order(m: &Matrix) -> Vec<Rational> {
    crate::linalg::eigen_decompose(m).unwrap().eigenvalues()
}

#[test]
fn split_on_d1() {
    let sys = d1_system();
    let u = split_decomposition(&sys).unwrap();
    assert_eq!(u.len(), 2);
    assert_eq!(u[0], sys.dual_eigenspace(0));
    assert_eq!(u[1], sys.eigenspace(0));
    let cat = decomposition_catalog(&sys).unwrap();
    assert_eq!(cat.decomp(Decomp::ZeroStarZero), &u[..]);
    let inv = cat.inverted(Decomp::ZeroD);
    assert_eq!(inv[0], sys.eigenspace(1));
}

#[test]
fn transition_on_d1() {
    let sys = d1_system();
    let u = split_decomposition(&sys).unwrap();
    let t = split_transition(&sys, &u).unwrap();
    assert_eq!(sys.eigenspace(0).image(&t.psi), u[1]);
    assert_eq!(t.psi.mul(&t.psi_inv).unwrap(), Matrix::identity(2));
}

fn d1_family(k: usize) -> crate::alternating::AlternatingFamily<Matrix> {
    let sys = d1_system();
    generate_alternating(&sys.a, &sys.astar, k, &BParams::new(int(4)).unwrap(), &MatrixCarrier::new(2)).unwrap()
}

#[test]
fn blocks_on_d1() {
    let sys = d1_system();
    let fam = d1_family(3);
    let rep = verify_block_tables(&sys, &fam, 3).unwrap();
    assert!(rep.all_pass(), "{:?}", rep.first_failure());
    let rows = tetrahedron_report(&sys, &fam, 3).unwrap();
    assert_eq!(rows.len(), 24);
    assert!(rows.iter().all(|r| r.ok));
}

#[test]
fn transfer_on_d1() {
    let sys = d1_system();
    let fam = d1_family(3);
    for source in [Kind::Wminus, Kind::Wplus] {
        let out = transfer_basis(&sys, &fam, source).unwrap();
        for t in &out.tables {
            assert_eq!(t.rows.len(), 2);
            for r in &t.rows {
                assert_eq!(r.target_eigenvalues[0], int(1));
                assert_eq!(r.target_eigenvalues[1], &r.omega[1] / &r.omega[0]);
            }
        }
    }
}

#[test]
fn params_on_d1() {
    let sys = d1_system();
    let p = tridiagonal_params(&sys.theta, &sys.thetastar).unwrap();
    assert_eq!(p.beta, frac(17, 4));
    let (r1, r2) = tridiagonal_relation_residuals(&sys, &p).unwrap();
    assert!(r1.is_zero() && r2.is_zero());
}
