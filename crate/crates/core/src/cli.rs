//! Command-line front end.
//!
//! Exit codes: 0 when everything checks out, 1 when a mathematical check
//! fails, 2 when the input cannot be used at all.

use std::collections::BTreeMap;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::algebra_core::{format_rational, RatMatrix};
use crate::cech::{
    are_cohomologous, cohomology, induced_cocycle, is_coboundary, lifting_obstruction, lifting_obstruction_twisted,
    nonabelian_2cocycle_check, trivial_band, AbelianCoefficients, Cochain, Nerve,
};
use crate::error::{Error, Result};
use crate::group::{FiniteGroup, GroupHom, DEFAULT_MAX_GROUP_ORDER};
use crate::holonomy::{
    connective_consistency, curvature_defect, holonomy_cocycle, surface_holonomy, two_sequence_3cocycle,
    two_sequence_4cocycle, OrientedSurfaceTriangulation,
};
use crate::io::{self, require, Document};
use crate::lie::{
    betti_numbers, ce_differential, curvature, double_extension, invariant_symmetric_forms, naturality_holds,
    nu_form, transformation_law_holds, BilinearForm, LieAlgebra,
};
use crate::orbifold::{atlas_check, SectorSymmetry, DEFAULT_EIGENVALUE_TOLERANCE};

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, ValueEnum)]
pub enum Format {
    #[default]
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum LieOp {
    Validate,
    Betti,
    Invforms,
    Nu,
    Doubleext,
    Curvature,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum OrbifoldOp {
    Classes,
    Atlas,
    Shift,
    Fixed,
    Sectors,
    Cr,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum CechOp {
    H,
    Check2,
    Equiv,
    Induce,
    Obstruct,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum GerbeOp {
    Holonomy,
    Surface,
    Defect,
    Seq3,
    Seq4,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Operation {
    Lie(LieOp),
    Orbifold(OrbifoldOp),
    Cech(CechOp),
    Gerbe(GerbeOp),
}

impl Operation {
    pub fn parse(s: &str) -> Result<Self> {
        let parts: Vec<&str> = s.split([' ', '/']).filter(|p| !p.is_empty()).collect();
        let bad = || Error::Parse(format!("unknown command {s:?}"));
        let [family, op] = parts.as_slice() else {
            return Err(bad());
        };
        let op = *op;
        Ok(match *family {
            "lie" => Operation::Lie(LieOp::from_str(op, true).map_err(|_| bad())?),
            "orbifold" => Operation::Orbifold(OrbifoldOp::from_str(op, true).map_err(|_| bad())?),
            "cech" => Operation::Cech(CechOp::from_str(op, true).map_err(|_| bad())?),
            "gerbe" => Operation::Gerbe(GerbeOp::from_str(op, true).map_err(|_| bad())?),
            _ => return Err(bad()),
        })
    }

    pub fn name(&self) -> String {
        let (family, op) = match self {
            Operation::Lie(o) => ("lie", o.to_possible_value()),
            Operation::Orbifold(o) => ("orbifold", o.to_possible_value()),
            Operation::Cech(o) => ("cech", o.to_possible_value()),
            Operation::Gerbe(o) => ("gerbe", o.to_possible_value()),
        };
        format!("{family} {}", op.expect("no skipped variants").get_name())
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InputSource {
    Path(PathBuf),
    Fixture(String),
    Inline(String),
}

#[derive(Clone, Debug, PartialEq)]
pub struct CommandRequest {
    pub operation: Operation,
    pub input: InputSource,
    pub tolerance: f64,
    pub max_group_order: usize,
}

impl CommandRequest {
    pub fn new(operation: Operation, input: InputSource) -> Self {
        Self {
            operation,
            input,
            tolerance: DEFAULT_EIGENVALUE_TOLERANCE,
            max_group_order: DEFAULT_MAX_GROUP_ORDER,
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Status {
    Ok,
    CheckFailed,
    InvalidInput,
}

impl Status {
    pub fn exit_code(self) -> i32 {
        match self {
            Status::Ok => 0,
            Status::CheckFailed => 1,
            Status::InvalidInput => 2,
        }
    }

    fn parse(s: &str) -> Result<Self> {
        match s {
            "ok" => Ok(Status::Ok),
            "check-failed" => Ok(Status::CheckFailed),
            "invalid-input" => Ok(Status::InvalidInput),
            _ => Err(Error::Parse(format!("unknown status {s:?}"))),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub payload: Value,
    pub diagnostics: Vec<String>,
}

impl RunReport {
    fn ok(payload: Value) -> Self {
        Self {
            command: String::new(),
            status: Status::Ok,
            payload,
            diagnostics: Vec::new(),
        }
    }

    /// Fails the report when `diagnostics` is non-empty.
    fn checked(payload: Value, diagnostics: Vec<String>) -> Self {
        Self {
            command: String::new(),
            status: if diagnostics.is_empty() { Status::Ok } else { Status::CheckFailed },
            payload,
            diagnostics,
        }
    }

    pub fn exit_code(&self) -> i32 {
        self.status.exit_code()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("reports serialize") + "\n"
    }

    pub fn to_text(&self) -> String {
        let mut out = String::new();
        let status = serde_json::to_value(self.status).expect("status serializes");
        let _ = writeln!(out, "{}: {}", self.command, status.as_str().unwrap_or_default());
        render_text(&mut out, &self.payload, 0);
        for d in &self.diagnostics {
            let _ = writeln!(out, "! {d}");
        }
        out
    }

    pub fn render(&self, format: Format) -> String {
        match format {
            Format::Text => self.to_text(),
            Format::Json => self.to_json(),
        }
    }
}

fn scalar_text(v: &Value) -> Option<String> {
    match v {
        Value::Null => Some("none".into()),
        Value::Bool(b) => Some(b.to_string()),
        Value::Number(n) => Some(n.to_string()),
        Value::String(s) => Some(s.clone()),
        _ => None,
    }
}

fn inline_text(v: &Value) -> Option<String> {
    if let Some(s) = scalar_text(v) {
        return Some(s);
    }
    match v {
        Value::Array(items) => {
            let parts = items.iter().map(inline_text).collect::<Option<Vec<_>>>()?;
            let joined = parts.join(", ");
            (joined.len() <= 100 && items.iter().all(|i| !i.is_object())).then(|| format!("[{joined}]"))
        }
        Value::Object(map) if map.values().all(|x| scalar_text(x).is_some()) => Some(
            map.iter()
                .map(|(k, x)| format!("{k}={}", scalar_text(x).expect("scalar")))
                .collect::<Vec<_>>()
                .join("  "),
        ),
        _ => None,
    }
}

fn render_text(out: &mut String, v: &Value, indent: usize) {
    let pad = "  ".repeat(indent);
    match v {
        Value::Object(map) => {
            for (k, x) in map {
                match x {
                    Value::Object(_) | Value::Array(_) if inline_text(x).is_none() || x.is_object() => {
                        let _ = writeln!(out, "{pad}{k}:");
                        render_text(out, x, indent + 1);
                    }
                    _ => {
                        let _ = writeln!(out, "{pad}{k}: {}", inline_text(x).expect("inline"));
                    }
                }
            }
        }
        Value::Array(items) => {
            for x in items {
                match inline_text(x) {
                    Some(s) => {
                        let _ = writeln!(out, "{pad}- {s}");
                    }
                    None => {
                        let _ = writeln!(out, "{pad}-");
                        render_text(out, x, indent + 1);
                    }
                }
            }
        }
        other => {
            let _ = writeln!(out, "{pad}{}", scalar_text(other).unwrap_or_default());
        }
    }
}

/// Mathematical failures, as opposed to unusable input.
pub fn is_check_failure(e: &Error) -> bool {
    matches!(
        e,
        Error::InvalidAlgebra { .. }
            | Error::NotSkew { .. }
            | Error::NotAntisymmetric(..)
            | Error::NotLieMorphism(..)
            | Error::NotCocycle(_)
            | Error::NotCentral
            | Error::NotClosedSurface(_)
            | Error::EigenvalueNotRootOfUnity { .. }
            | Error::NonIntegralAverage(_)
    )
}

pub fn run(req: &CommandRequest) -> RunReport {
    let command = req.operation.name();
    let mut report = load(&req.input)
        .and_then(|doc| dispatch(req, &doc))
        .unwrap_or_else(|e| RunReport {
            command: String::new(),
            status: if is_check_failure(&e) { Status::CheckFailed } else { Status::InvalidInput },
            payload: json!({ "error": e.to_string() }),
            diagnostics: vec![e.to_string()],
        });
    report.command = command;
    report
}

fn load(input: &InputSource) -> Result<Document> {
    let text = match input {
        InputSource::Path(p) => {
            std::fs::read_to_string(p).map_err(|e| Error::InvalidInput(format!("{}: {e}", p.display())))?
        }
        InputSource::Fixture(name) => fixture(name)
            .ok_or_else(|| Error::InvalidInput(format!("unknown fixture {name:?}")))?
            .text
            .to_string(),
        InputSource::Inline(t) => t.clone(),
    };
    io::parse_document(&text)
}

fn dispatch(req: &CommandRequest, doc: &Document) -> Result<RunReport> {
    match req.operation {
        Operation::Lie(op) => run_lie(op, doc),
        Operation::Orbifold(op) => run_orbifold(op, doc, req),
        Operation::Cech(op) => run_cech(op, doc, req),
        Operation::Gerbe(op) => run_gerbe(op, doc),
    }
}

// Lie algebras.

fn algebra_of(doc: &Document) -> Result<LieAlgebra> {
    io::algebra(require(&doc.algebra, "algebra")?)
}

fn form_of(doc: &Document) -> Result<BilinearForm> {
    BilinearForm::new(io::rat_matrix(require(&doc.form, "form")?)?)
}

fn gram_json(b: &BilinearForm) -> Value {
    json!(io::matrix_json(b.gram()))
}

fn run_lie(op: LieOp, doc: &Document) -> Result<RunReport> {
    match op {
        LieOp::Validate => {
            let l = algebra_of(doc)?;
            let r = l.validate();
            let diagnostics = r
                .violations
                .iter()
                .map(|v| {
                    let names = l.basis_names();
                    let (i, j, k) = v.triple;
                    format!(
                        "Jacobi fails on ({}, {}, {}): defect [{}]",
                        names[i],
                        names[j],
                        names[k],
                        io::vector_json(&v.defect).join(", ")
                    )
                })
                .collect();
            Ok(RunReport::checked(
                json!({
                    "dim": l.dim(),
                    "jacobi_holds": r.jacobi_holds,
                    "nilpotency_class": r.nilpotency_class,
                    "lower_central_series": l.lower_central_series(),
                    "integral_structure_constants": r.integral_structure_constants,
                    "unimodular": l.is_unimodular(),
                }),
                diagnostics,
            ))
        }
        LieOp::Betti => {
            let l = algebra_of(doc)?;
            let betti = betti_numbers(&l)?;
            let mut diagnostics = Vec::new();
            for k in 1..l.dim() {
                if !ce_differential(&l, k)?.mul(&ce_differential(&l, k - 1)?)?.is_zero() {
                    diagnostics.push(format!("d∘d != 0 in degree {k}"));
                }
            }
            let euler: i64 = betti
                .iter()
                .enumerate()
                .map(|(k, &b)| if k % 2 == 0 { b as i64 } else { -(b as i64) })
                .sum();
            Ok(RunReport::checked(json!({ "betti": betti, "euler_characteristic": euler }), diagnostics))
        }
        LieOp::Invforms => {
            let l = algebra_of(doc)?;
            let space = invariant_symmetric_forms(&l)?;
            let basis: Vec<Value> = space
                .basis
                .iter()
                .map(|f| json!({ "gram": gram_json(&f.form), "rank": f.rank, "nondegenerate": f.nondegenerate }))
                .collect();
            let mut payload = json!({
                "dimension": space.dimension(),
                "maximal_rank": space.maximal_rank(),
                "basis": basis,
            });
            if let Some(m) = &space.maximal_rank_element {
                payload["maximal_rank_element"] = gram_json(&m.form);
            }
            if doc.form.is_some() {
                payload["contains_given_form"] = json!(space.contains(&form_of(doc)?));
            }
            Ok(RunReport::ok(payload))
        }
        LieOp::Nu => {
            let l = algebra_of(doc)?;
            let r = nu_form(&l, &form_of(doc)?)?;
            let mut diagnostics = Vec::new();
            if !r.closed {
                diagnostics.push("nu is not closed".to_string());
            }
            Ok(RunReport::checked(
                json!({
                    "components": io::form_json(&l, &r.form),
                    "closed": r.closed,
                    "nonzero": !r.form.is_zero(),
                    "integrality_multiplier": r.integrality_multiplier.to_string(),
                }),
                diagnostics,
            ))
        }
        LieOp::Doubleext => {
            let u = form_of(doc)?;
            let h = io::rat_matrix(require(&doc.derivation, "derivation")?)?;
            let (l, b) = double_extension(&u, &h)?;
            let r = l.validate();
            let mut diagnostics = Vec::new();
            if !r.jacobi_holds {
                diagnostics.push(format!("Jacobi fails on {} triple(s)", r.violations.len()));
            }
            if let Some((x, y, z)) = b.invariance_failure(&l) {
                diagnostics.push(format!("product is not ad-invariant on ({x}, {y}, {z})"));
            }
            Ok(RunReport::checked(
                json!({
                    "algebra": io::algebra_json(&l),
                    "gram": gram_json(&b),
                    "nondegenerate": b.is_nondegenerate(),
                    "ad_invariant": b.is_ad_invariant(&l),
                }),
                diagnostics,
            ))
        }
        LieOp::Curvature => {
            let base = algebra_of(doc)?;
            let values = io::algebra(require(&doc.values, "values")?)?;
            let theta = io::one_form(require(&doc.theta, "theta")?, values.dim())?;
            let f = curvature(&base, &values, &theta)?;
            let mut payload = json!({ "curvature": io::form_json(&base, &f) });
            let mut diagnostics = Vec::new();
            if let Some(a) = &doc.alpha {
                let alpha = io::one_form(a, values.dim())?;
                let holds = transformation_law_holds(&base, &values, &theta, &alpha)?;
                payload["transformation_law"] = json!(holds);
                if !holds {
                    diagnostics.push("transformation law fails".into());
                }
            }
            if let Some(m) = &doc.morphism {
                let target = io::algebra(require(&doc.target, "target")?)?;
                let f = io::rat_matrix(m)?;
                let holds = naturality_holds(&base, &values, &target, &f, &theta)?;
                payload["naturality"] = json!(holds);
                if !holds {
                    diagnostics.push("pushforward does not commute with curvature".into());
                }
            }
            Ok(RunReport::checked(payload, diagnostics))
        }
    }
}

// Orbifolds.

fn symmetry_of(doc: &Document) -> Result<SectorSymmetry> {
    match doc.symmetry.as_deref() {
        None | Some("normalizer") => Ok(SectorSymmetry::Normalizer),
        Some("centralizer") => Ok(SectorSymmetry::Centralizer),
        Some(other) => Err(Error::Parse(format!("unknown symmetry {other:?}"))),
    }
}

/// The requested element, or one representative per conjugacy class.
fn elements_of(doc: &Document, g: &FiniteGroup) -> Result<Vec<usize>> {
    match &doc.element {
        Some(e) => Ok(vec![e.to_element(g)?]),
        None => Ok(g.conjugacy_classes().iter().map(|c| c[0]).collect()),
    }
}

fn labels(g: &FiniteGroup, xs: &[usize]) -> Vec<String> {
    xs.iter().map(|&x| g.label(x).to_string()).collect()
}

fn run_orbifold(op: OrbifoldOp, doc: &Document, req: &CommandRequest) -> Result<RunReport> {
    let tol = req.tolerance;
    match op {
        OrbifoldOp::Classes => {
            let g = match (&doc.group, doc.n) {
                (Some(gd), Some(_)) if gd.matrices.is_some() => {
                    io::toral_action(doc, req.max_group_order)?.group().clone()
                }
                _ => io::group(require(&doc.group, "group")?)?,
            };
            if g.order() > req.max_group_order {
                return Err(Error::GroupTooLarge { order: g.order(), bound: req.max_group_order });
            }
            let classes: Vec<Value> = g
                .conjugacy_classes()
                .iter()
                .map(|c| {
                    json!({
                        "elements": labels(&g, c),
                        "size": c.len(),
                        "order": g.element_order(c[0]),
                        "centralizer_order": g.centralizer(c[0]).len(),
                    })
                })
                .collect();
            let subgroups: Vec<Value> = g
                .subgroup_classes(req.max_group_order)?
                .iter()
                .map(|cls| json!({ "order": cls[0].len(), "conjugates": cls.len(), "representative": labels(&g, &cls[0]) }))
                .collect();
            Ok(RunReport::ok(json!({
                "order": g.order(),
                "abelian": g.is_abelian(),
                "center": labels(&g, &g.center()),
                "classes": classes,
                "subgroup_classes": subgroups,
            })))
        }
        OrbifoldOp::Atlas => {
            let atlas = io::atlas(doc)?;
            let r = atlas_check(&atlas)?;
            let diagnostics = r
                .violations
                .iter()
                .map(|v| {
                    format!(
                        "triple {:?}, gamma {}: {} != {}",
                        v.triple, v.gamma, v.lhs, v.rhs
                    )
                })
                .collect();
            Ok(RunReport::checked(
                json!({ "charts": atlas.charts().len(), "triples_checked": r.triples_checked }),
                diagnostics,
            ))
        }
        OrbifoldOp::Shift => {
            let action = io::toral_action(doc, req.max_group_order)?;
            let g = action.group();
            let mut rows = Vec::new();
            let mut diagnostics = Vec::new();
            for e in elements_of(doc, g)? {
                let s = action.degree_shift(e, tol)?;
                let inv = action.degree_shift(g.inv(e), tol)?;
                let paired = (&s.shift + &inv.shift) == crate::algebra_core::rat(s.non_unit_eigenvalues() as i64);
                if !paired {
                    diagnostics.push(format!("shift pairing fails for {}", g.label(e)));
                }
                rows.push(json!({
                    "element": g.label(e),
                    "shift": format_rational(&s.shift),
                    "angles": io::vector_json(&s.angles),
                    "det_value": s.det_value,
                    "non_unit_eigenvalues": s.non_unit_eigenvalues(),
                }));
            }
            Ok(RunReport::checked(json!({ "shifts": rows }), diagnostics))
        }
        OrbifoldOp::Fixed => {
            let action = io::toral_action(doc, req.max_group_order)?;
            let g = action.group();
            let mut rows = Vec::new();
            for e in elements_of(doc, g)? {
                let f = action.fixed_locus(e)?;
                rows.push(json!({
                    "element": g.label(e),
                    "fixed_dim": f.fixed_dim,
                    "components": f.components,
                    "torsion": f.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                    "component_reps": f.component_reps.iter().map(|v| io::vector_json(v)).collect::<Vec<_>>(),
                }));
            }
            Ok(RunReport::ok(json!({ "fixed_loci": rows })))
        }
        OrbifoldOp::Sectors => {
            let action = io::toral_action(doc, req.max_group_order)?;
            let sym = symmetry_of(doc)?;
            let mut rows = Vec::new();
            for e in elements_of(doc, action.group())? {
                let s = action.sector(e, tol, sym)?;
                // Half the complex codimension of the fixed locus, the
                // shift attached to the subgroup type; it is not identified
                // with the eigenvalue shift.
                let codim = (action.n() - s.fixed_dim) as i64;
                rows.push(json!({
                    "class": s.class_label,
                    "fixed_dim": s.fixed_dim,
                    "components": s.components,
                    "shift": format_rational(&s.shift),
                    "subgroup_type_shift": format_rational(&crate::algebra_core::frac(codim, 4)),
                    "betti": s.betti,
                }));
            }
            Ok(RunReport::ok(json!({ "sectors": rows })))
        }
        OrbifoldOp::Cr => {
            let action = io::toral_action(doc, req.max_group_order)?;
            let cr = action.cr_cohomology(tol, symmetry_of(doc)?)?;
            let table: Vec<Value> = cr
                .table()
                .into_iter()
                .map(|(d, n)| json!({ "degree": d, "dim": n }))
                .collect();
            Ok(RunReport::ok(json!({ "degrees": table, "total_dimension": cr.total_dimension() })))
        }
    }
}

// Čech cochains.

fn group_doc(field: &Option<io::GroupDoc>, name: &str) -> Result<FiniteGroup> {
    let g = io::group(require(field, name)?)?;
    Ok(g)
}

fn bounded(g: FiniteGroup, bound: usize) -> Result<FiniteGroup> {
    if g.order() > bound {
        return Err(Error::GroupTooLarge { order: g.order(), bound });
    }
    Ok(g)
}

fn lambda_of(doc: &Document, nerve: &Nerve, h: &FiniteGroup) -> Result<Vec<GroupHom>> {
    let Some(map) = &doc.lambda else {
        return Ok(trivial_band(nerve, h));
    };
    let mut out: Vec<Option<GroupHom>> = vec![None; nerve.count(1)];
    for (key, images) in map {
        let t = io::parse_tuple(key)?;
        let idx = nerve
            .index_of(&t)
            .filter(|_| t.len() == 2)
            .ok_or_else(|| Error::InvalidInput(format!("lambda: {key:?} is not an increasing edge")))?;
        let images = images.iter().map(|s| s.to_element(h)).collect::<Result<Vec<_>>>()?;
        let hom = GroupHom::new(h, h, images)?;
        if !hom.is_bijective_onto(h) {
            return Err(Error::InvalidInput(format!("lambda on {key:?} is not an automorphism")));
        }
        out[idx] = Some(hom);
    }
    out.into_iter()
        .enumerate()
        .map(|(i, m)| m.ok_or_else(|| Error::MissingData(format!("lambda on {:?}", nerve.simplices(1)[i]))))
        .collect()
}

fn cochain_of(doc: &Document, nerve: &Nerve, field: &Option<io::CochainDoc>, name: &str) -> Result<Cochain> {
    io::abelian_cochain(nerve, &io::coefficients(doc)?, require(field, name)?)
}

fn run_cech(op: CechOp, doc: &Document, req: &CommandRequest) -> Result<RunReport> {
    let nerve = io::nerve(doc)?;
    match op {
        CechOp::H => {
            let k = io::coefficients(doc)?;
            let degrees: Vec<usize> = match doc.degree {
                Some(d) => vec![d],
                None => (0..=nerve.dim().unwrap_or(0)).collect(),
            };
            let mut rows = Vec::new();
            for d in degrees {
                let h = cohomology(&nerve, d, &k)?;
                rows.push(json!({
                    "degree": d,
                    "group": h.to_string(),
                    "free_rank": h.free_rank,
                    "torsion": h.torsion.iter().map(ToString::to_string).collect::<Vec<_>>(),
                }));
            }
            Ok(RunReport::ok(json!({
                "coefficients": k.to_string(),
                "euler_characteristic": nerve.euler_characteristic(),
                "cohomology": rows,
            })))
        }
        CechOp::Check2 => {
            let h = bounded(group_doc(&doc.group, "group")?, req.max_group_order)?;
            let c = io::group_cochain(&nerve, &h, require(&doc.c, "c")?)?;
            if c.degree != 2 {
                return Err(Error::DimensionMismatch("c must be a 2-cochain".into()));
            }
            let lambda = lambda_of(doc, &nerve, &h)?;
            let r = nonabelian_2cocycle_check(&nerve, &h, &lambda, &c)?;
            let diagnostics = r
                .triangle_violations
                .iter()
                .map(|t| format!("triangle law fails on {t:?}"))
                .chain(r.tetrahedron_violations.iter().map(|t| format!("cocycle law fails on tetrahedron {t:?}")))
                .collect();
            Ok(RunReport::checked(
                json!({
                    "triangles_checked": nerve.count(2),
                    "tetrahedra_checked": nerve.count(3),
                    "triangle_violations": r.triangle_violations,
                    "tetrahedron_violations": r.tetrahedron_violations,
                }),
                diagnostics,
            ))
        }
        CechOp::Equiv => {
            let c = cochain_of(doc, &nerve, &doc.cochain, "cochain")?;
            let cp = cochain_of(doc, &nerve, &doc.cochain_prime, "cochain_prime")?;
            let witness = are_cohomologous(&nerve, &c, &cp)?;
            let mut payload = json!({ "cohomologous": witness.is_some() });
            if let Some(b) = &witness {
                payload["witness"] = json!(io::cochain_json(&nerve, b));
            }
            Ok(RunReport::ok(payload))
        }
        CechOp::Induce => {
            let source = bounded(group_doc(&doc.source, "source")?, req.max_group_order)?;
            let target = bounded(group_doc(&doc.group, "group")?, req.max_group_order)?;
            let map = require(&doc.map, "map")?
                .iter()
                .map(|s| s.to_element(&target))
                .collect::<Result<Vec<_>>>()?;
            let f = GroupHom::new(&source, &target, map)?;
            let c = io::group_cochain(&nerve, &source, require(&doc.c, "c")?)?;
            let fc = induced_cocycle(&f, &c);
            let mut payload = json!({ "induced": io::group_cochain_json(&nerve, &target, &fc) });
            let mut diagnostics = Vec::new();
            if c.degree == 2 && source.is_abelian() && target.is_abelian() {
                let before = nonabelian_2cocycle_check(&nerve, &source, &trivial_band(&nerve, &source), &c)?;
                let after = nonabelian_2cocycle_check(&nerve, &target, &trivial_band(&nerve, &target), &fc)?;
                payload["source_cocycle"] = json!(before.passed());
                payload["induced_cocycle"] = json!(after.passed());
                if before.passed() && !after.passed() {
                    diagnostics.push("image of a cocycle is not a cocycle".into());
                }
            }
            Ok(RunReport::checked(payload, diagnostics))
        }
        CechOp::Obstruct => {
            let ext = io::extension(require(&doc.extension, "extension")?)?;
            let u = io::group_cochain(&nerve, &ext.l, require(&doc.u, "u")?)?;
            if u.degree != 1 {
                return Err(Error::DimensionMismatch("u must be a 1-cochain".into()));
            }
            let central = ext.is_central();
            let (lambda, c) = if central {
                (trivial_band(&nerve, &ext.h), lifting_obstruction(&nerve, &ext, &u)?)
            } else {
                lifting_obstruction_twisted(&nerve, &ext, &u)?
            };
            let r = nonabelian_2cocycle_check(&nerve, &ext.h, &lambda, &c)?;
            let mut payload = json!({
                "central": central,
                "obstruction": io::group_cochain_json(&nerve, &ext.h, &c),
                "cocycle": r.passed(),
            });
            let m = ext.h.order();
            if central && ext.h == FiniteGroup::cyclic(m) && m >= 2 {
                let a = c.to_cyclic(&nerve, m as u64)?;
                let trivial = is_coboundary(&nerve, &a)?;
                payload["class_trivial"] = json!(trivial);
                payload["lifts"] = json!(trivial);
            }
            let diagnostics = if r.passed() { Vec::new() } else { vec!["obstruction is not a cocycle".into()] };
            Ok(RunReport::checked(payload, diagnostics))
        }
    }
}

// Gerbe data.

fn mod_one_cochain(nerve: &Nerve, field: &Option<io::CochainDoc>, degree: usize) -> Result<Cochain> {
    let k = AbelianCoefficients::RationalsModOne;
    match field {
        Some(m) => {
            let c = io::abelian_cochain(nerve, &k, m)?;
            if c.degree() != degree {
                return Err(Error::DimensionMismatch(format!("expected a {degree}-cochain")));
            }
            Ok(c)
        }
        None => Ok(Cochain::zero(nerve, degree, k)),
    }
}

fn run_gerbe(op: GerbeOp, doc: &Document) -> Result<RunReport> {
    let nerve = io::nerve(doc)?;
    match op {
        GerbeOp::Holonomy => {
            require(&doc.c, "c")?;
            let c = mod_one_cochain(&nerve, &doc.c, 2)?;
            let a = mod_one_cochain(&nerve, &doc.a, 1)?;
            let h = holonomy_cocycle(&nerve, &c, &a)?;
            Ok(RunReport::ok(json!({
                "d": io::cochain_json(&nerve, &h.d),
                "input_closed": h.input_closed,
                "closed": h.closed,
            })))
        }
        GerbeOp::Surface => {
            let surface = match &doc.orientation {
                Some(o) => OrientedSurfaceTriangulation::new(nerve.clone(), o.clone())?,
                None => OrientedSurfaceTriangulation::orient(nerve.clone())?,
            };
            let c = mod_one_cochain(&nerve, &doc.c, 2)?;
            let a = mod_one_cochain(&nerve, &doc.a, 1)?;
            let h = holonomy_cocycle(&nerve, &c, &a)?;
            let value = surface_holonomy(&surface, &h.d)?;
            let mut diagnostics = Vec::new();
            if !h.input_closed {
                diagnostics.push("c is not closed; holonomy depends on the triangulation".into());
            }
            Ok(RunReport::checked(
                json!({
                    "holonomy": format!("{} mod 1", format_rational(&value)),
                    "orientation": surface.orientation(),
                }),
                diagnostics,
            ))
        }
        GerbeOp::Defect => {
            let omega = io::matrices_on(&nerve, 0, require(&doc.omega, "omega")?, "omega")?;
            let u = io::matrices_on(&nerve, 1, require(&doc.transition, "transition")?, "transition")?;
            let r = curvature_defect(&nerve, &omega, &u)?;
            let edges: BTreeMap<String, Vec<Vec<String>>> = nerve
                .simplices(1)
                .iter()
                .zip(&r.delta)
                .map(|(e, m)| (io::tuple_key(e), io::matrix_json(m)))
                .collect();
            let mut payload = json!({
                "delta": edges,
                "strict_triangles": r.strict_triangles,
            });
            let mut diagnostics: Vec<String> =
                r.violations.iter().map(|t| format!("defect is not closed on {t:?}")).collect();
            if let Some(alpha) = &doc.connection {
                let alpha = io::matrices_on(&nerve, 0, alpha, "connection")?;
                let c = match &doc.twist {
                    Some(t) => io::matrices_on(&nerve, 2, t, "twist")?,
                    None => {
                        let n = u.first().map_or(0, RatMatrix::rows);
                        vec![RatMatrix::identity(n); nerve.count(2)]
                    }
                };
                let cr = connective_consistency(&nerve, &alpha, &u, &c)?;
                diagnostics.extend(
                    cr.triangles
                        .iter()
                        .filter(|t| !t.residual_zero)
                        .map(|t| format!("connective relation fails on {:?}", t.triangle)),
                );
                let alpha_edges: BTreeMap<String, Vec<Vec<String>>> = nerve
                    .simplices(1)
                    .iter()
                    .zip(&cr.alpha_edges)
                    .map(|(e, m)| (io::tuple_key(e), io::matrix_json(m)))
                    .collect();
                payload["alpha_edges"] = json!(alpha_edges);
                payload["triangles"] = json!(cr.triangles);
            }
            Ok(RunReport::checked(payload, diagnostics))
        }
        GerbeOp::Seq3 => {
            let ustar = cochain_of(doc, &nerve, &doc.ustar, "ustar")?;
            let r = two_sequence_3cocycle(&nerve, &ustar)?;
            let diagnostics = if r.closed { Vec::new() } else { vec!["c* is not closed".into()] };
            Ok(RunReport::checked(
                json!({ "cstar": io::cochain_json(&nerve, &r.cstar), "closed": r.closed }),
                diagnostics,
            ))
        }
        GerbeOp::Seq4 => {
            let cstar = cochain_of(doc, &nerve, &doc.cstar, "cstar")?;
            let r = two_sequence_4cocycle(&nerve, &cstar)?;
            let mut payload = json!({
                "c": io::cochain_json(&nerve, &r.c),
                "closed": r.closed,
                "class_trivial": r.class_trivial,
            });
            if let Some(h3) = &r.h3 {
                payload["h3"] = json!(h3.to_string());
            }
            let diagnostics = if r.closed { Vec::new() } else { vec!["c is not closed".into()] };
            Ok(RunReport::checked(payload, diagnostics))
        }
    }
}

// Bundled fixtures.

#[derive(Clone, Copy, Debug)]
pub struct Fixture {
    pub name: &'static str,
    pub text: &'static str,
}

macro_rules! fixtures {
    ($($name:literal),* $(,)?) => {
        &[$(Fixture { name: $name, text: include_str!(concat!("../fixtures/", $name, ".json")) }),*]
    };
}

pub static FIXTURES: &[Fixture] = fixtures![
    "heisenberg",
    "heisenberg_perturbed",
    "gl2_curvature",
    "oscillator",
    "oscillator_nu",
    "raw_nonskew",
    "tetrahedron",
    "full_simplex",
    "rp2",
    "rp2_obstruction",
    "rp2_split",
    "s3_twisted_obstruction",
    "abelian_noncocycle",
    "torus_surface",
    "sphere_holonomy",
    "kummer",
    "pillowcase",
    "hexagonal",
    "dihedral_hexagonal",
    "s3_classes",
    "s3_atlas",
    "sphere3_seq4",
    "matrix_defect",
];

pub fn fixture(name: &str) -> Option<&'static Fixture> {
    FIXTURES.iter().find(|f| f.name == name)
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct FixtureEntry {
    pub name: String,
    pub command: String,
    pub expect: String,
    pub description: String,
}

fn fixture_entry(f: &Fixture) -> Result<(FixtureEntry, Operation, Status)> {
    let doc = io::parse_document(f.text)?;
    let command = require(&doc.command, "command")?.clone();
    let op = Operation::parse(&command)?;
    let expect = doc.expect.clone().unwrap_or_else(|| "ok".into());
    let status = Status::parse(&expect)?;
    let entry = FixtureEntry {
        name: f.name.to_string(),
        command: op.name(),
        expect,
        description: doc.description.clone().unwrap_or_default(),
    };
    Ok((entry, op, status))
}

pub fn list_fixtures() -> Vec<FixtureEntry> {
    FIXTURES
        .iter()
        .map(|f| fixture_entry(f).expect("bundled fixtures are well-formed").0)
        .collect()
}

/// Runs every fixture through its own command and compares the status
/// with the one it declares.
pub fn check_fixtures(tolerance: f64, max_group_order: usize) -> RunReport {
    let mut rows = Vec::new();
    let mut diagnostics = Vec::new();
    for f in FIXTURES {
        let (entry, op, expected) = fixture_entry(f).expect("bundled fixtures are well-formed");
        let req = CommandRequest {
            operation: op,
            input: InputSource::Fixture(f.name.into()),
            tolerance,
            max_group_order,
        };
        let got = run(&req).status;
        if got != expected {
            diagnostics.push(format!("{}: expected {:?}, got {:?}", f.name, expected, got));
        }
        rows.push(json!({ "name": entry.name, "command": entry.command, "status": got, "as_expected": got == expected }));
    }
    let mut r = RunReport::checked(json!({ "fixtures": rows }), diagnostics);
    r.command = "fixtures".into();
    r
}

// Argument parsing.

#[derive(Debug, Parser)]
#[command(name = "gerbelab", version, about = "Exact computations for Lie algebras, orbifolds and gerbes")]
pub struct Cli {
    #[arg(long, value_enum, default_value_t = Format::Text, global = true)]
    pub format: Format,
    /// Eigenvalue snapping tolerance.
    #[arg(long, default_value_t = DEFAULT_EIGENVALUE_TOLERANCE, global = true)]
    pub tolerance: f64,
    /// Largest group order accepted for enumeration.
    #[arg(long, default_value_t = DEFAULT_MAX_GROUP_ORDER, global = true)]
    pub max_group_order: usize,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
#[group(required = true, multiple = false)]
pub struct InputArgs {
    /// JSON input document.
    #[arg(long)]
    pub input: Option<PathBuf>,
    /// Name of a bundled fixture.
    #[arg(long)]
    pub fixture: Option<String>,
}

impl InputArgs {
    fn source(&self) -> InputSource {
        match (&self.input, &self.fixture) {
            (Some(p), _) => InputSource::Path(p.clone()),
            (None, Some(f)) => InputSource::Fixture(f.clone()),
            (None, None) => unreachable!("clap requires one input"),
        }
    }
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Lie algebra cohomology, invariant forms, double extensions, curvature.
    Lie {
        #[arg(value_enum)]
        op: LieOp,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Toral orbifolds: classes, atlases, degree shifts, sectors, Chen–Ruan table.
    Orbifold {
        #[arg(value_enum)]
        op: OrbifoldOp,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Čech cochains on a nerve.
    Cech {
        #[arg(value_enum)]
        op: CechOp,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Gerbe holonomy, curvature defects and 2-sequence cocycles.
    Gerbe {
        #[arg(value_enum)]
        op: GerbeOp,
        #[command(flatten)]
        input: InputArgs,
    },
    /// List the bundled fixtures.
    Fixtures {
        /// Run every fixture and compare with its expected status.
        #[arg(long)]
        check: bool,
    },
}

/// Parses `args`, runs the command and returns the rendered output with
/// the exit code.
pub fn execute(cli: &Cli) -> (String, i32) {
    let (op, input) = match &cli.command {
        Command::Lie { op, input } => (Operation::Lie(*op), input),
        Command::Orbifold { op, input } => (Operation::Orbifold(*op), input),
        Command::Cech { op, input } => (Operation::Cech(*op), input),
        Command::Gerbe { op, input } => (Operation::Gerbe(*op), input),
        Command::Fixtures { check: true } => {
            let r = check_fixtures(cli.tolerance, cli.max_group_order);
            return (r.render(cli.format), r.exit_code());
        }
        Command::Fixtures { check: false } => {
            let list = list_fixtures();
            let out = match cli.format {
                Format::Json => serde_json::to_string_pretty(&list).expect("serializable") + "\n",
                Format::Text => list
                    .iter()
                    .map(|f| format!("{:<24} {:<18} {}\n", f.name, f.command, f.description))
                    .collect(),
            };
            return (out, 0);
        }
    };
    let req = CommandRequest {
        operation: op,
        input: input.source(),
        tolerance: cli.tolerance,
        max_group_order: cli.max_group_order,
    };
    let r = run(&req);
    (r.render(cli.format), r.exit_code())
}

pub fn main_with_args<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { 2 } else { 0 };
        }
    };
    let (out, code) = execute(&cli);
    print!("{out}");
    code
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn operation_names_round_trip() {
        for name in ["lie betti", "orbifold cr", "cech check2", "gerbe seq4", "cech/h"] {
            let op = Operation::parse(name).unwrap();
            assert_eq!(Operation::parse(&op.name()).unwrap(), op);
        }
        assert!(Operation::parse("lie").is_err());
        assert!(Operation::parse("lie frobnicate").is_err());
    }

    #[test]
    fn error_triage() {
        let bad = CommandRequest::new(Operation::Lie(LieOp::Betti), InputSource::Inline("{".into()));
        assert_eq!(run(&bad).exit_code(), 2);
        let missing = CommandRequest::new(Operation::Lie(LieOp::Betti), InputSource::Path("/nonexistent.json".into()));
        assert_eq!(run(&missing).exit_code(), 2);
        let doc = r#"{"algebra": {"basis": ["x","y","z"], "brackets": {"x,y": {"z": 1}, "x,z": {"x": 1}}}}"#;
        let jacobi = CommandRequest::new(Operation::Lie(LieOp::Betti), InputSource::Inline(doc.into()));
        assert_eq!(run(&jacobi).exit_code(), 1);
    }

    #[test]
    fn text_rendering() {
        let mut out = String::new();
        render_text(&mut out, &json!({"a": [1, 2], "b": {"c": "1/2"}, "d": []}), 0);
        assert_eq!(out, "a: [1, 2]\nb:\n  c: 1/2\nd: []\n");
    }
}
