//! Bilinear forms graphs and the realization of the alternating elements in
//! their subconstituent algebra.

mod analyze;
mod context;
mod graph;
mod intersection;
mod intmat;
mod modules;

pub use analyze::{
    analyze_module, primary_model, reconstruct_model, restrict_family, ConjectureDims, EigenRow, FamilyTables,
    ModuleRecord, ThinModel,
};
pub use context::{build_pair, verify_invariants, DRGContext};
pub use graph::{build_bilinear_forms_graph, rank_mod_p, Graph, GraphFile};
pub use intersection::{
    check_distance_regular, drg_eigenvalues, fit_affine_form, fit_classical, infer_b, multiplicity, AffineForm,
    ClassicalParams, IntersectionArray,
};
pub use intmat::{IntMatrix, IntMatrixCarrier};
pub use modules::{
    commutant, decompose_t_modules, invariance_defect, orthogonality_defect, symmetric_eigenspaces, FloatPair, TModule,
    TOL,
};

use crate::alternating::{generate_alternating, AlternatingFamily};
use crate::error::Result;
use crate::report::{Report, SCHEMA};
use crate::scalar::{format_rational, BParams};
use serde::Serialize;
use std::collections::BTreeMap;

#[derive(Debug, Clone)]
pub struct DrgConfig {
    pub base: usize,
    pub k_max: usize,
    /// Check every thin module through a rational model, not only the primary one.
    pub exact: bool,
    pub seed: u64,
}

impl Default for DrgConfig {
    fn default() -> Self {
        DrgConfig { base: 0, k_max: 3, exact: false, seed: 0 }
    }
}

/// Modules grouped by `(endpoint, diameter, dim)`.
#[derive(Debug, Clone, Serialize)]
pub struct ModuleType {
    pub endpoint: usize,
    pub diameter: usize,
    pub dim: usize,
    pub thin: bool,
    pub count: usize,
    pub conjecture_holds: bool,
}

#[derive(Debug, Clone, Serialize)]
pub struct DrgSummary {
    pub vertices: usize,
    pub edges: usize,
    pub valency: i64,
    pub diameter: usize,
    pub intersection_array: String,
    pub subconstituent_sizes: Vec<i64>,
    pub eigenvalues: Vec<String>,
    pub multiplicities: Vec<String>,
    pub b: String,
    pub affine: AffineForm,
    pub classical: ClassicalParams,
    pub module_count: usize,
    pub module_dimension_sum: usize,
    pub thin_modules: usize,
    pub orthogonality_defect: f64,
    pub max_invariance_defect: f64,
    /// Every common eigenspace on every module is one-dimensional.
    pub conjecture_all_one: bool,
    pub module_types: Vec<ModuleType>,
}

#[derive(Debug, Clone, Serialize)]
pub struct DrgAnalysis {
    pub summary: DrgSummary,
    pub pair: Report,
    pub invariants: Report,
    pub decomposition: Report,
    pub modules: Vec<ModuleRecord>,
}

impl DrgAnalysis {
    pub fn reports(&self) -> impl Iterator<Item = &Report> {
        [&self.pair, &self.invariants, &self.decomposition].into_iter().chain(self.modules.iter().map(|m| &m.checks))
    }

    pub fn all_pass(&self) -> bool {
        self.reports().all(Report::all_pass)
    }

    pub fn failed(&self) -> usize {
        self.reports().map(|r| r.summary().failed).sum()
    }

    pub fn to_json(&self) -> serde_json::Value {
        let mut v = serde_json::to_value(self).expect("plain data");
        v["schema"] = SCHEMA.into();
        v
    }
}

/// Distance-regularity, spectrum and parameter fits, the shifted pair and its
/// alternating elements.
pub fn prepare(g: &Graph, cfg: &DrgConfig) -> Result<(DRGContext, AlternatingFamily<IntMatrix>)> {
    let ia = check_distance_regular(g)?;
    let theta = drg_eigenvalues(&ia)?;
    let b: BParams = infer_b(&theta)?;
    let fit = fit_affine_form(&theta, &b)?;
    let ctx = build_pair(g, cfg.base, &ia, &fit, &b)?;
    let fam = generate_alternating(&ctx.a, &ctx.astar, cfg.k_max, &ctx.b, &ctx.carrier())?;
    Ok((ctx, fam))
}

/// The whole pipeline on one graph.
pub fn analyze_graph(g: &Graph, cfg: &DrgConfig) -> Result<DrgAnalysis> {
    let (ctx, fam) = prepare(g, cfg)?;
    let invariants = verify_invariants(&ctx, &fam, cfg.k_max, cfg.seed)?;
    let modules = decompose_t_modules(&ctx, cfg.seed)?;

    let mut decomposition = Report::new("t-modules");
    let total: usize = modules.iter().map(TModule::dim).sum();
    decomposition.check("module dimensions sum to |X|", total == ctx.n(), || format!("{total} of {}", ctx.n()));
    let (cross, within) = orthogonality_defect(&modules);
    let orth = cross.max(within);
    decomposition.check("modules are orthonormal and mutually orthogonal", orth <= TOL, || format!("{orth:.3e}"));
    let mut worst = 0.0f64;
    for (i, m) in modules.iter().enumerate() {
        let inv = invariance_defect(&ctx, m);
        worst = worst.max(inv);
        decomposition.check(format!("module {i} is invariant"), inv <= TOL, || format!("{inv:.3e}"));
        let c = commutant(&m.a, &m.astar).len();
        decomposition.check(format!("module {i} is irreducible"), c == 1, || format!("commutant has dimension {c}"));
    }

    let fam_f = fam.map(|x| Ok(x.to_f64()))?;
    let records = modules
        .iter()
        .enumerate()
        .map(|(i, m)| analyze_module(&ctx, &fam, &fam_f, m, i, cfg.k_max, cfg.exact))
        .collect::<Result<Vec<_>>>()?;

    let mut types: BTreeMap<(usize, usize, usize), ModuleType> = BTreeMap::new();
    for r in &records {
        let t = types.entry((r.endpoint, r.diameter, r.dim)).or_insert(ModuleType {
            endpoint: r.endpoint,
            diameter: r.diameter,
            dim: r.dim,
            thin: r.thin,
            count: 0,
            conjecture_holds: true,
        });
        t.count += 1;
        t.conjecture_holds &= r.conjecture_dims.all_one;
    }
    let theta = drg_eigenvalues(&ctx.ia)?;
    let summary = DrgSummary {
        vertices: ctx.n(),
        edges: g.edge_count(),
        valency: ctx.ia.k(),
        diameter: ctx.d(),
        intersection_array: ctx.ia.to_string(),
        subconstituent_sizes: ctx.ia.subconstituent_sizes(),
        eigenvalues: theta.iter().map(format_rational).collect(),
        multiplicities: theta.iter().map(|t| format_rational(&multiplicity(&ctx.ia, t))).collect(),
        b: format_rational(ctx.b.b()),
        affine: ctx.fit.clone(),
        classical: ctx.classical.clone(),
        module_count: records.len(),
        module_dimension_sum: total,
        thin_modules: records.iter().filter(|r| r.thin).count(),
        orthogonality_defect: orth,
        max_invariance_defect: worst,
        conjecture_all_one: records.iter().all(|r| r.conjecture_dims.all_one),
        module_types: types.into_values().collect(),
    };
    Ok(DrgAnalysis { summary, pair: ctx.checks.clone(), invariants, decomposition, modules: records })
}
