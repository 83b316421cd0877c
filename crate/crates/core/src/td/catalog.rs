use super::TDSystem;
use crate::error::{Error, Result};
use crate::linalg::SubspaceBasis;
use serde::Serialize;
use std::fmt;

/// `V_(i,j) = (E*_0 V + ... + E*_i V) ∩ (E_0 V + ... + E_j V)`.
pub fn v_ij(sys: &TDSystem, i: usize, j: usize) -> SubspaceBasis {
    sys.dual_eigen_sum(0..=i).intersect(&sys.eigen_sum(0..=j)).expect("same ambient")
}

/// The split decomposition `U_i = V_(i, d-i)`, with its defining lemmas checked.
pub fn split_decomposition(sys: &TDSystem) -> Result<Vec<SubspaceBasis>> {
    let d = sys.d();
    let n = sys.n();
    let fail = |m: String| Err(Error::SplitCheckFailed(m));
    let big_n = (0..=2 * d)
        .find(|&s| (0..=s.min(d)).any(|i| s - i <= d && !v_ij(sys, i, s - i).is_zero()))
        .unwrap_or(usize::MAX);
    if big_n != d {
        return fail(format!("N = min{{i+j : V_ij != 0}} is {big_n}, expected d = {d}"));
    }
    let u: Vec<SubspaceBasis> = (0..=d).map(|i| v_ij(sys, i, d - i)).collect();
    let zero = SubspaceBasis::zero(n);
    for i in 0..=d {
        let down = if i == 0 { &zero } else { &u[i - 1] };
        let up = if i == d { &zero } else { &u[i + 1] };
        let rs = u[i].image(&sys.astar.shift(&sys.thetastar[i]));
        if !down.contains(&rs)? {
            return fail(format!("RL: (A* - theta*_{i}) U_{i} not in U_{}", i as i64 - 1));
        }
        let r = u[i].image(&sys.a.shift(&sys.theta[d - i]));
        if !up.contains(&r)? {
            return fail(format!("RL: (A - theta_{}) U_{i} not in U_{}", d - i, i + 1));
        }
    }
    let total: usize = u.iter().map(SubspaceBasis::dim).sum();
    if total != n || !SubspaceBasis::sum_all(n, &u)?.is_full() {
        return fail(format!("sum of U_i is not direct and full (dims total {total}, n = {n})"));
    }
    for i in 0..=d {
        if SubspaceBasis::sum_all(n, &u[..=i])? != sys.dual_eigen_sum(0..=i) {
            return fail(format!("split: U_0 + ... + U_{i} != E*_0 V + ... + E*_{i} V"));
        }
        if SubspaceBasis::sum_all(n, &u[i..])? != sys.eigen_sum(0..=d - i) {
            return fail(format!("split: U_{i} + ... + U_d != E_0 V + ... + E_{} V", d - i));
        }
    }
    Ok(u)
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Flag {
    Zero,
    D,
    ZeroStar,
    DStar,
}

impl Flag {
    pub const ALL: [Flag; 4] = [Flag::Zero, Flag::D, Flag::ZeroStar, Flag::DStar];

    pub fn name(&self) -> &'static str {
        match self {
            Flag::Zero => "[0]",
            Flag::D => "[D]",
            Flag::ZeroStar => "[0*]",
            Flag::DStar => "[D*]",
        }
    }
}

impl fmt::Display for Flag {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

/// The six decompositions `[u, v]` with `V_i = F^u_i ∩ F^v_(d-i)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub enum Decomp {
    ZeroD,
    ZeroStarDStar,
    ZeroStarZero,
    ZeroStarD,
    DStarZero,
    DStarD,
}

impl Decomp {
    pub const ALL: [Decomp; 6] = [
        Decomp::ZeroD,
        Decomp::ZeroStarDStar,
        Decomp::ZeroStarZero,
        Decomp::ZeroStarD,
        Decomp::DStarZero,
        Decomp::DStarD,
    ];

    pub fn flags(&self) -> (Flag, Flag) {
        match self {
            Decomp::ZeroD => (Flag::Zero, Flag::D),
            Decomp::ZeroStarDStar => (Flag::ZeroStar, Flag::DStar),
            Decomp::ZeroStarZero => (Flag::ZeroStar, Flag::Zero),
            Decomp::ZeroStarD => (Flag::ZeroStar, Flag::D),
            Decomp::DStarZero => (Flag::DStar, Flag::Zero),
            Decomp::DStarD => (Flag::DStar, Flag::D),
        }
    }

    pub fn name(&self) -> String {
        let (u, v) = self.flags();
        format!("[{},{}]", u.name().trim_matches(['[', ']']), v.name().trim_matches(['[', ']']))
    }
}

impl fmt::Display for Decomp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.name())
    }
}

/// Four flags and six decompositions of a TD system.
#[derive(Debug, Clone)]
pub struct DecompositionCatalog {
    pub d: usize,
    pub flags: Vec<(Flag, Vec<SubspaceBasis>)>,
    pub decomps: Vec<(Decomp, Vec<SubspaceBasis>)>,
}

impl DecompositionCatalog {
    pub fn flag(&self, f: Flag) -> &[SubspaceBasis] {
        &self.flags.iter().find(|(g, _)| *g == f).expect("all flags built").1
    }

    pub fn decomp(&self, x: Decomp) -> &[SubspaceBasis] {
        &self.decomps.iter().find(|(y, _)| *y == x).expect("all decompositions built").1
    }

    /// Components of the inverted decomposition `[v, u]`.
    pub fn inverted(&self, x: Decomp) -> Vec<SubspaceBasis> {
        self.decomp(x).iter().rev().cloned().collect()
    }
}

pub fn flag_components(sys: &TDSystem, f: Flag) -> Vec<SubspaceBasis> {
    let d = sys.d();
    (0..=d)
        .map(|i| match f {
            Flag::Zero => sys.eigen_sum(0..=i),
            Flag::D => sys.eigen_sum(d - i..=d),
            Flag::ZeroStar => sys.dual_eigen_sum(0..=i),
            Flag::DStar => sys.dual_eigen_sum(d - i..=d),
        })
        .collect()
}

pub fn decomposition_catalog(sys: &TDSystem) -> Result<DecompositionCatalog> {
    let d = sys.d();
    let n = sys.n();
    let fail = |m: String| Err(Error::CatalogCheckFailed(m));
    let flags: Vec<(Flag, Vec<SubspaceBasis>)> =
        Flag::ALL.iter().map(|&f| (f, flag_components(sys, f))).collect();
    for (f, comps) in &flags {
        for i in 0..=d {
            let strict = i == 0 || (comps[i].contains(&comps[i - 1])? && comps[i].dim() > comps[i - 1].dim());
            if !strict || comps[i].is_zero() {
                return fail(format!("flag {f} is not strictly increasing at {i}"));
            }
        }
        if !comps[d].is_full() {
            return fail(format!("flag {f}: F_d != V"));
        }
    }
    let get = |f: Flag| &flags.iter().find(|(g, _)| *g == f).unwrap().1;
    let mut decomps = Vec::new();
    for x in Decomp::ALL {
        let (u, v) = x.flags();
        let (fu, fv) = (get(u), get(v));
        let comps: Vec<SubspaceBasis> =
            (0..=d).map(|i| fu[i].intersect(&fv[d - i])).collect::<Result<_>>()?;
        for (i, c) in comps.iter().enumerate() {
            if c.dim() != sys.shape[i] {
                return fail(format!("{x}_{i} has dimension {} but rho_{i} = {}", c.dim(), sys.shape[i]));
            }
        }
        if !SubspaceBasis::sum_all(n, &comps)?.is_full() {
            return fail(format!("{x} does not sum to V"));
        }
        for i in 0..=d {
            if SubspaceBasis::sum_all(n, &comps[..=i])? != fu[i] {
                return fail(format!("{x}: V_0 + ... + V_{i} != {u}_{i}"));
            }
            if SubspaceBasis::sum_all(n, &comps[i..])? != fv[d - i] {
                return fail(format!("{x}: V_{i} + ... + V_d != {v}_{}", d - i));
            }
        }
        decomps.push((x, comps));
    }
    let cat = DecompositionCatalog { d, flags, decomps };
    for i in 0..=d {
        if cat.decomp(Decomp::ZeroD)[i] != sys.eigenspace(i) {
            return fail(format!("[0,D]_{i} != E_{i} V"));
        }
        if cat.decomp(Decomp::ZeroStarDStar)[i] != sys.dual_eigenspace(i) {
            return fail(format!("[0*,D*]_{i} != E*_{i} V"));
        }
    }
    Ok(cat)
}
