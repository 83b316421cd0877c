use super::catalog::{decomposition_catalog, Decomp, DecompositionCatalog, Flag};
use super::flags::{flag_action, FlagAction};
use super::TDSystem;
use crate::alternating::AlternatingFamily;
use crate::error::Result;
use crate::linalg::Matrix;
use crate::report::Report;
use crate::word::Kind;
use rayon::prelude::*;
use num_traits::Zero;
use serde::Serialize;

/// Allowed offsets `j - i` of nonzero blocks `V_j <- V_i`, inclusive.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
pub struct Band {
    pub lo: i64,
    pub hi: i64,
}

impl Band {
    pub const DIAG: Band = Band { lo: 0, hi: 0 };
    pub const LOWER: Band = Band { lo: 0, hi: 1 };
    pub const UPPER: Band = Band { lo: -1, hi: 0 };
    pub const TRI: Band = Band { lo: -1, hi: 1 };

    pub fn name(&self) -> String {
        match (self.lo, self.hi) {
            (0, 0) => "diag".into(),
            (0, 1) => "lower-bidiag".into(),
            (-1, 0) => "upper-bidiag".into(),
            (-1, 1) => "tridiag".into(),
            (lo, hi) => format!("band[{lo},{hi}]"),
        }
    }

    pub fn allows(&self, off: i64) -> bool {
        self.lo <= off && off <= self.hi
    }

    pub fn within(&self, o: &Band) -> bool {
        o.lo <= self.lo && self.hi <= o.hi
    }
}

fn kind_label(kind: Kind) -> &'static str {
    match kind {
        Kind::Wminus => "W-k",
        Kind::Wplus => "Wk+1",
        Kind::G => "Gk+1",
        Kind::Gtilde => "G~k+1",
    }
}

/// The block pattern each alternating element must have on each decomposition.
pub fn expected_band(x: Decomp, kind: Kind) -> Band {
    use Decomp::*;
    use Kind::*;
    match (kind, x) {
        (Wminus, ZeroD) => Band::DIAG,
        (Wminus, ZeroStarDStar) => Band::TRI,
        (Wminus, _) => Band::LOWER,
        (Wplus, ZeroD) => Band::TRI,
        (Wplus, ZeroStarDStar) => Band::DIAG,
        (Wplus, _) => Band::UPPER,
        (G, ZeroStarZero) => Band::DIAG,
        (G, DStarZero) => Band::LOWER,
        (G, DStarD) => Band::TRI,
        (G, _) => Band::UPPER,
        (Gtilde, ZeroStarZero) => Band::TRI,
        (Gtilde, DStarZero) => Band::UPPER,
        (Gtilde, DStarD) => Band::DIAG,
        (Gtilde, _) => Band::LOWER,
    }
}

/// How each alternating element must act on each flag.
pub fn expected_flag_action(f: Flag, kind: Kind) -> FlagAction {
    use FlagAction::*;
    use Kind::*;
    let row = match f {
        Flag::Zero => [Stabilizes, Raises, Stabilizes, Raises],
        Flag::D => [Stabilizes, Raises, Raises, Stabilizes],
        Flag::ZeroStar => [Raises, Stabilizes, Stabilizes, Raises],
        Flag::DStar => [Raises, Stabilizes, Raises, Stabilizes],
    };
    row[match kind {
        Wminus => 0,
        Wplus => 1,
        G => 2,
        Gtilde => 3,
    }]
}

/// A decomposition as a change of basis: `m` in the adapted basis has its
/// `(j, i)` block equal to the `V_j` part of `m` on `V_i`.
pub struct Adapted {
    basis: Matrix,
    basis_inv: Matrix,
    ranges: Vec<std::ops::Range<usize>>,
}

impl Adapted {
    pub fn new(n: usize, parts: &[crate::linalg::SubspaceBasis]) -> Result<Self> {
        let cols: Vec<Vec<_>> = parts.iter().flat_map(|p| p.basis().iter().cloned()).collect();
        let basis = Matrix::from_cols(n, &cols);
        let basis_inv = basis.inverse()?;
        let mut ranges = Vec::new();
        let mut start = 0;
        for p in parts {
            ranges.push(start..start + p.dim());
            start += p.dim();
        }
        Ok(Adapted { basis, basis_inv, ranges })
    }

    /// Pairs `(i, j)` with a nonzero block `V_j <- V_i` of `m`.
    pub fn offsets(&self, m: &Matrix) -> Result<Vec<(usize, usize)>> {
        let t = self.basis_inv.mul(m)?.mul(&self.basis)?;
        let mut out = Vec::new();
        for (i, ci) in self.ranges.iter().enumerate() {
            for (j, rj) in self.ranges.iter().enumerate() {
                if rj.clone().any(|r| ci.clone().any(|c| !t.get(r, c).is_zero())) {
                    out.push((i, j));
                }
            }
        }
        Ok(out)
    }
}

/// First block `(i, j)` of `m` outside the band, as `V_j <- V_i`.
fn blocks_outside(ad: &Adapted, m: &Matrix, band: Band) -> Result<Option<(usize, usize)>> {
    Ok(ad.offsets(m)?.into_iter().find(|&(i, j)| !band.allows(j as i64 - i as i64)))
}

/// Tightest band containing every nonzero block, or `None` when `m = 0`.
pub fn observed_band(ad: &Adapted, m: &Matrix) -> Result<Option<Band>> {
    Ok(ad.offsets(m)?.into_iter().fold(None, |band, (i, j)| {
        let off = j as i64 - i as i64;
        Some(match band {
            None => Band { lo: off, hi: off },
            Some(b) => Band { lo: b.lo.min(off), hi: b.hi.max(off) },
        })
    }))
}

/// Offending `(i, j)` with `idem_j m idem_i != 0` outside the band.
fn sandwich_outside(idem: &[Matrix], m: &Matrix, band: Band) -> Result<Option<(usize, usize)>> {
    for (i, pi) in idem.iter().enumerate() {
        let col = m.mul(pi)?;
        for (j, pj) in idem.iter().enumerate() {
            if !band.allows(j as i64 - i as i64) && !pj.mul(&col)?.is_zero() {
                return Ok(Some((i, j)));
            }
        }
    }
    Ok(None)
}

struct Prepared {
    catalog: DecompositionCatalog,
    proj: Vec<(Decomp, Adapted)>,
}

fn prepare(sys: &TDSystem) -> Result<Prepared> {
    let catalog = decomposition_catalog(sys)?;
    let proj = Decomp::ALL
        .iter()
        .map(|&x| Ok((x, Adapted::new(sys.n(), catalog.decomp(x))?)))
        .collect::<Result<Vec<_>>>()?;
    Ok(Prepared { catalog, proj })
}

fn element(fam: &AlternatingFamily<Matrix>, kind: Kind, k: usize) -> &Matrix {
    match kind {
        Kind::Wminus => fam.w_minus(k),
        Kind::Wplus => fam.w_pos(k + 1),
        Kind::G => fam.g(k + 1),
        Kind::Gtilde => fam.gt(k + 1),
    }
}

/// Checks the block-action tables, the idempotent sandwiches and the flag
/// actions for all `k <= k_max` on every decomposition of `sys`.
pub fn verify_block_tables(sys: &TDSystem, fam: &AlternatingFamily<Matrix>, k_max: usize) -> Result<Report> {
    fam.require(k_max)?;
    let prep = prepare(sys)?;
    let mut jobs = Vec::new();
    for k in 0..=k_max {
        for kind in Kind::ALL {
            for (x, _) in &prep.proj {
                jobs.push((k, kind, Some(*x), None));
            }
            for f in Flag::ALL {
                jobs.push((k, kind, None, Some(f)));
            }
        }
    }
    let results: Vec<(String, Option<String>)> = jobs
        .par_iter()
        .map(|&(k, kind, x, f)| -> Result<(String, Option<String>)> {
            let m = element(fam, kind, k);
            if let Some(x) = x {
                let band = expected_band(x, kind);
                let proj = &prep.proj.iter().find(|(y, _)| *y == x).unwrap().1;
                let id = format!("k={k} {x} {} {}", kind_label(kind), band.name());
                let bad = blocks_outside(proj, m, band)?;
                Ok((id, bad.map(|(i, j)| format!("nonzero block V_{j} <- V_{i}"))))
            } else {
                let f = f.unwrap();
                let want = expected_flag_action(f, kind);
                let got = flag_action(m, prep.catalog.flag(f));
                let ok = got == want || (want == FlagAction::Raises && got == FlagAction::Stabilizes);
                let id = format!("k={k} flag {f} {} {want}", kind_label(kind));
                Ok((id, (!ok).then(|| format!("observed {got}"))))
            }
        })
        .collect::<Result<_>>()?;
    let mut rep = Report::new("blocks");
    for (id, res) in results {
        rep.record(id, res);
    }
    rep.absorb(verify_sandwiches(sys, fam, k_max)?);
    Ok(rep)
}

/// `E_i X E_j = 0` and `E*_i X E*_j = 0` outside the permitted offsets.
pub fn verify_sandwiches(sys: &TDSystem, fam: &AlternatingFamily<Matrix>, k_max: usize) -> Result<Report> {
    fam.require(k_max)?;
    let mut rep = Report::new("sandwich");
    for k in 0..=k_max {
        for kind in Kind::ALL {
            let m = element(fam, kind, k);
            for (star, idem, x) in [("", &sys.e, Decomp::ZeroD), ("*", &sys.estar, Decomp::ZeroStarDStar)] {
                let band = expected_band(x, kind);
                let bad = sandwich_outside(idem, m, band)?;
                rep.record(
                    format!("k={k} E{star}_i {} E{star}_j {}", kind_label(kind), band.name()),
                    bad.map(|(j, i)| format!("E{star}_{i} X E{star}_{j} != 0")),
                );
            }
        }
    }
    Ok(rep)
}

/// One row of the tetrahedron block-shape report.
#[derive(Debug, Clone, Serialize)]
pub struct BandRow {
    pub decomposition: String,
    pub element: String,
    pub expected: String,
    /// Per `k`: the observed band name, or `"zero"`.
    pub observed: Vec<String>,
    pub ok: bool,
}

/// Observed block shapes of every element family on every decomposition.
pub fn tetrahedron_report(sys: &TDSystem, fam: &AlternatingFamily<Matrix>, k_max: usize) -> Result<Vec<BandRow>> {
    fam.require(k_max)?;
    let prep = prepare(sys)?;
    let mut rows = Vec::new();
    for (x, proj) in &prep.proj {
        for kind in Kind::ALL {
            let want = expected_band(*x, kind);
            let mut observed = Vec::new();
            let mut ok = true;
            for k in 0..=k_max {
                match observed_band(proj, element(fam, kind, k))? {
                    None => observed.push("zero".to_string()),
                    Some(b) => {
                        ok &= b.within(&want);
                        observed.push(b.name());
                    }
                }
            }
            rows.push(BandRow {
                decomposition: x.name(),
                element: kind_label(kind).to_string(),
                expected: want.name(),
                observed,
                ok,
            });
        }
    }
    Ok(rows)
}

/// Plain-text table of [`tetrahedron_report`] rows.
pub fn render_tetrahedron(rows: &[BandRow]) -> String {
    let mut out = format!("{:<8} {:<6} {:<13} observed (k = 0, 1, ...)\n", "decomp", "elem", "expected");
    for r in rows {
        out.push_str(&format!(
            "{:<8} {:<6} {:<13} {}{}\n",
            r.decomposition,
            r.element,
            r.expected,
            r.observed.join(" "),
            if r.ok { "" } else { "  VIOLATION" }
        ));
    }
    out
}
