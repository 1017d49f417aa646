//! Report types shared by the JSON and plain-text outputs.

use std::fmt::Write;

use serde::{Deserialize, Serialize};

use orbicoh::gradedring::{Applicability, RingPresentation};
use orbicoh::retraction::DimensionProfile;
use orbicoh::serde_big::Big;

pub const SCHEMA_VERSION: u32 = 1;

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Output {
    pub schema_version: u32,
    #[serde(flatten)]
    pub report: Report,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "command", rename_all = "kebab-case")]
pub enum Report {
    Validate(ValidateReport),
    LocalGroups(LocalGroupsReport),
    Retract(RetractReport),
    RVector(RVectorReport),
    Evenness(EvennessReport),
    Integrality(IntegralityReport),
    Cohomology(CohomologyReport),
    Tower(TowerReport),
    Hirzebruch(HirzebruchReport),
}

/// Naive cross-checks run with `--oracle`.
#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Oracle {
    pub checks: usize,
    pub discrepancies: Vec<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ValidateReport {
    pub input_kind: String,
    pub dim: usize,
    pub facets: usize,
    pub vertices: usize,
    pub f_vector: Vec<usize>,
    pub vertex_orders: Option<Vec<Big>>,
    pub smooth: Option<bool>,
    pub caveat: String,
}

/// Facet labels are 1-based; a vertex is named by the facets meeting there.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct VertexGroup {
    pub vertex: Vec<usize>,
    pub order: Big,
    pub invariant_factors: Vec<Big>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FaceGroups {
    pub dim: usize,
    pub facets: Vec<usize>,
    /// Invariant factors of the face group.
    pub face_group: Vec<Big>,
    pub local_groups: Vec<VertexGroup>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct LocalGroupsReport {
    pub input_kind: String,
    pub dim: usize,
    pub vertices: Vec<VertexGroup>,
    pub faces: Vec<FaceGroups>,
    pub oracle: Option<Oracle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Step {
    pub dim: usize,
    pub complex: Vec<Vec<usize>>,
    pub top_face: Vec<usize>,
    pub vertex: Vec<usize>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RetractReport {
    pub input_kind: String,
    pub status: String,
    pub reason: Option<String>,
    pub dim: usize,
    pub vertices: usize,
    pub profile: Option<DimensionProfile>,
    pub r_vector: Vec<(usize, usize)>,
    pub complexes: usize,
    pub dead_ends: usize,
    pub sequences: Vec<Vec<Step>>,
    pub oracle: Option<Oracle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct RVectorReport {
    pub input_kind: String,
    pub status: String,
    pub reason: Option<String>,
    pub dim: usize,
    pub vertices: usize,
    pub r_vector: Vec<(usize, usize)>,
    pub text: Option<String>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CollectionReport {
    pub dim: usize,
    pub complex: Vec<Vec<usize>>,
    pub vertices: Vec<Vec<usize>>,
    pub orders: Vec<Big>,
    pub reduced_orders: Vec<Big>,
    pub k: usize,
    pub relatively_prime: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Witness {
    /// 1-based index into `collections`.
    pub collection: usize,
    pub vertices: Vec<Vec<usize>>,
    pub common_factor: Big,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct EvennessReport {
    pub input_kind: String,
    pub status: String,
    pub reason: Option<String>,
    pub witness: Option<Witness>,
    pub r_vector: Vec<(usize, usize)>,
    pub collections: Vec<CollectionReport>,
    pub complexes: usize,
    pub dead_ends: usize,
    pub oracle: Option<Oracle>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct IntegralityReport {
    pub input_kind: String,
    pub dim: usize,
    pub rays: Vec<Vec<Big>>,
    pub cones: Vec<Vec<usize>>,
    pub rows: Vec<Vec<Big>>,
    pub caveat: String,
}

/// One cohomological degree (twice the polynomial degree).
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct DegreeReport {
    pub degree: usize,
    pub rank: usize,
    pub torsion: Vec<Big>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CohomologyReport {
    pub input_kind: String,
    pub dim: usize,
    pub max_degree: usize,
    pub degrees: Vec<DegreeReport>,
    pub evenness: String,
    pub presentation: Option<RingPresentation>,
    pub caveat: String,
    pub oracle: Option<Oracle>,
}

/// Entry `entry` (1-based) of the twist vector from stage `from_stage`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TwistEntry {
    pub from_stage: usize,
    pub entry: usize,
    pub value: Big,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct FibrationReport {
    pub stage: usize,
    pub ell: Big,
    pub verdict: String,
    pub offending: Vec<TwistEntry>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct TowerReport {
    pub input_kind: String,
    pub stages: usize,
    pub stage_dims: Vec<usize>,
    pub raw: Vec<Vec<Big>>,
    pub primitive: Vec<Vec<Big>>,
    pub multipliers: Vec<Big>,
    pub fibrations: Vec<FibrationReport>,
    pub raw_vertex_orders: Vec<Big>,
    pub evenness: String,
    pub degrees: Vec<DegreeReport>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct NamedSummary {
    pub holds: bool,
    pub basis: bool,
    pub x_squared: bool,
    pub xy_alpha_z: bool,
    pub y_squared_alpha_beta_z: bool,
    pub text: String,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct HirzebruchReport {
    pub alpha: Big,
    pub beta: Big,
    pub packed_lambda: Option<Vec<Vec<Big>>>,
    pub tower_matrix: Option<Vec<Vec<Big>>>,
    pub fibration: Option<FibrationReport>,
    pub lambda: Vec<Vec<Big>>,
    pub rays: Vec<Vec<Big>>,
    pub cones: Vec<Vec<usize>>,
    pub integrality: Vec<Vec<Big>>,
    pub evenness: String,
    pub degrees: Vec<DegreeReport>,
    pub presentation: RingPresentation,
    pub named: NamedSummary,
}

fn join<T: ToString>(v: &[T], sep: &str) -> String {
    v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(sep)
}

fn set(v: &[usize]) -> String {
    format!("{{{}}}", join(v, ","))
}

/// A face by its facets; the polytope itself is written P.
fn face(v: &[usize]) -> String {
    if v.is_empty() {
        "P".into()
    } else {
        set(v)
    }
}

fn vector(v: &[Big]) -> String {
    format!("[{}]", join(v, ", "))
}

fn group(inv: &[Big]) -> String {
    if inv.is_empty() {
        "trivial".into()
    } else {
        inv.iter().map(|d| format!("Z/{d}")).collect::<Vec<_>>().join(" + ")
    }
}

fn r_text(r: &[(usize, usize)]) -> String {
    format!("({})", join(&r.iter().map(|x| x.1).collect::<Vec<_>>(), ", "))
}

fn matrix(out: &mut String, title: &str, rows: &[Vec<Big>]) {
    let _ = writeln!(out, "{title}:");
    for r in rows {
        let _ = writeln!(out, "  {}", vector(r));
    }
}

fn oracle(out: &mut String, o: &Option<Oracle>) {
    if let Some(o) = o {
        let _ = writeln!(out, "oracle: {} checks, {} discrepancies", o.checks, o.discrepancies.len());
        for d in &o.discrepancies {
            let _ = writeln!(out, "  {d}");
        }
    }
}

fn degrees(out: &mut String, ds: &[DegreeReport]) {
    let _ = writeln!(out, "modules:");
    for d in ds {
        let mut line = format!("  H^{}: Z^{}", d.degree, d.rank);
        if !d.torsion.is_empty() {
            line += &format!(" + {}", group(&d.torsion));
        }
        let _ = writeln!(out, "{line}");
    }
}

fn presentation(out: &mut String, p: &RingPresentation) {
    let status = match &p.applicability {
        Applicability::Unconditional => "integral cohomology ring".to_string(),
        Applicability::Conditional { reason } => format!("conditional ({reason})"),
        Applicability::ModuleOnly { reason } => format!("module only ({reason})"),
    };
    let _ = writeln!(out, "presentation: {status}");
    for g in &p.generators {
        let _ = writeln!(out, "  generator {} in H^{} = {}", g.name, 2 * g.degree, g.representative);
    }
    for r in &p.relations {
        let _ = writeln!(out, "  relation {}", r.text);
    }
    for s in &p.products {
        let _ = writeln!(out, "  product {}", s.text);
    }
}

fn fibration(out: &mut String, f: &FibrationReport) {
    let _ = writeln!(out, "stage {}: ell = {}, {}", f.stage, f.ell, f.verdict);
    for t in &f.offending {
        let _ = writeln!(
            out,
            "  twist from stage {}, entry {}: {} is not divisible by {}",
            t.from_stage, t.entry, t.value, f.ell
        );
    }
}

/// The plain-text report: `key: value` lines with indented detail lines.
pub fn render_text(o: &Output) -> String {
    let mut out = String::new();
    let name = match &o.report {
        Report::Validate(_) => "validate",
        Report::LocalGroups(_) => "local-groups",
        Report::Retract(_) => "retract",
        Report::RVector(_) => "r-vector",
        Report::Evenness(_) => "evenness",
        Report::Integrality(_) => "integrality",
        Report::Cohomology(_) => "cohomology",
        Report::Tower(_) => "tower",
        Report::Hirzebruch(_) => "hirzebruch",
    };
    let _ = writeln!(out, "orbicoh {name} (schema {})", o.schema_version);
    match &o.report {
        Report::Validate(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "dimension: {}", r.dim);
            let _ = writeln!(out, "facets: {}", r.facets);
            let _ = writeln!(out, "vertices: {}", r.vertices);
            let _ = writeln!(out, "f-vector: ({})", join(&r.f_vector, ", "));
            if let Some(v) = &r.vertex_orders {
                let _ = writeln!(out, "vertex orders: {}", vector(v));
            }
            if let Some(s) = r.smooth {
                let _ = writeln!(out, "smooth: {}", if s { "yes" } else { "no" });
            }
            let _ = writeln!(out, "status: valid");
            let _ = writeln!(out, "note: {}", r.caveat);
        }
        Report::LocalGroups(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "vertex groups:");
            for v in &r.vertices {
                let _ = writeln!(out, "  {}: order {}, {}", set(&v.vertex), v.order, group(&v.invariant_factors));
            }
            let _ = writeln!(out, "faces:");
            for f in &r.faces {
                let _ = writeln!(out, "  face {} (dim {}): face group {}", set(&f.facets), f.dim, group(&f.face_group));
                for v in &f.local_groups {
                    let _ = writeln!(out, "    at {}: order {}, {}", set(&v.vertex), v.order, group(&v.invariant_factors));
                }
            }
            oracle(&mut out, &r.oracle);
        }
        Report::Retract(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "status: {}", r.status);
            if let Some(reason) = &r.reason {
                let _ = writeln!(out, "reason: {reason}");
            }
            if let Some(p) = &r.profile {
                let _ = writeln!(out, "dimension profile: ({})", join(&p.dims, ", "));
            }
            if !r.r_vector.is_empty() {
                let _ = writeln!(out, "r-vector: {}", r_text(&r.r_vector));
            }
            let _ = writeln!(out, "complexes: {}", r.complexes);
            let _ = writeln!(out, "dead ends: {}", r.dead_ends);
            for (i, s) in r.sequences.iter().enumerate() {
                let _ = writeln!(out, "sequence {}:", i + 1);
                for (l, step) in s.iter().enumerate() {
                    let complex = step.complex.iter().map(|f| face(f)).collect::<Vec<_>>().join(" ");
                    let _ = writeln!(
                        out,
                        "  {}. remove {} from top face {} (dim {}) of {}",
                        l + 1,
                        set(&step.vertex),
                        face(&step.top_face),
                        step.dim,
                        complex
                    );
                }
            }
            oracle(&mut out, &r.oracle);
        }
        Report::RVector(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "status: {}", r.status);
            if let Some(reason) = &r.reason {
                let _ = writeln!(out, "reason: {reason}");
            }
            let _ = writeln!(out, "dimension: {}", r.dim);
            let _ = writeln!(out, "vertices: {}", r.vertices);
            if let Some(t) = &r.text {
                let _ = writeln!(out, "r-vector: {t}");
            }
        }
        Report::Evenness(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "status: {}", r.status);
            if let Some(reason) = &r.reason {
                let _ = writeln!(out, "reason: {reason}");
            }
            if !r.r_vector.is_empty() {
                let _ = writeln!(out, "r-vector: {}", r_text(&r.r_vector));
            }
            let _ = writeln!(out, "complexes: {}", r.complexes);
            let _ = writeln!(out, "collections:");
            for (i, c) in r.collections.iter().enumerate() {
                let _ = writeln!(
                    out,
                    "  {}. dim {}, k = {}: orders {} ({})",
                    i + 1,
                    c.dim,
                    c.k,
                    vector(&c.orders),
                    if c.relatively_prime { "relatively prime" } else { "shared factor" }
                );
            }
            if let Some(w) = &r.witness {
                let vs = w.vertices.iter().map(|v| set(v)).collect::<Vec<_>>().join(" ");
                let _ = writeln!(out, "witness: collection {}, vertices {}, common factor {}", w.collection, vs, w.common_factor);
            }
            oracle(&mut out, &r.oracle);
        }
        Report::Integrality(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "rays:");
            for (i, ray) in r.rays.iter().enumerate() {
                let _ = writeln!(out, "  {}: {}", i + 1, vector(ray));
            }
            let _ = writeln!(out, "rows:");
            for (c, row) in r.cones.iter().zip(&r.rows) {
                let _ = writeln!(out, "  {}: {}", set(c), vector(row));
            }
            let _ = writeln!(out, "note: {}", r.caveat);
        }
        Report::Cohomology(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "dimension: {}", r.dim);
            let _ = writeln!(out, "evenness: {}", r.evenness);
            degrees(&mut out, &r.degrees);
            if let Some(p) = &r.presentation {
                presentation(&mut out, p);
            }
            let _ = writeln!(out, "note: {}", r.caveat);
            oracle(&mut out, &r.oracle);
        }
        Report::Tower(r) => {
            let _ = writeln!(out, "input: {}", r.input_kind);
            let _ = writeln!(out, "stages: {}", r.stages);
            let _ = writeln!(out, "stage dimensions: ({})", join(&r.stage_dims, ", "));
            matrix(&mut out, "matrix", &r.raw);
            let _ = writeln!(out, "column contents: {}", vector(&r.multipliers));
            matrix(&mut out, "primitive matrix", &r.primitive);
            let _ = writeln!(out, "raw vertex orders: {}", vector(&r.raw_vertex_orders));
            for f in &r.fibrations {
                fibration(&mut out, f);
            }
            let _ = writeln!(out, "evenness: {}", r.evenness);
            degrees(&mut out, &r.degrees);
        }
        Report::Hirzebruch(r) => {
            let _ = writeln!(out, "alpha: {}", r.alpha);
            let _ = writeln!(out, "beta: {}", r.beta);
            if let Some(m) = &r.packed_lambda {
                matrix(&mut out, "packed matrix", m);
            }
            if let Some(m) = &r.tower_matrix {
                matrix(&mut out, "tower matrix", m);
            }
            if let Some(f) = &r.fibration {
                fibration(&mut out, f);
            }
            matrix(&mut out, "reduced matrix", &r.lambda);
            let _ = writeln!(out, "integrality rows:");
            for (c, row) in r.cones.iter().zip(&r.integrality) {
                let _ = writeln!(out, "  {}: {}", set(c), vector(row));
            }
            let _ = writeln!(out, "evenness: {}", r.evenness);
            degrees(&mut out, &r.degrees);
            presentation(&mut out, &r.presentation);
            let _ = writeln!(
                out,
                "named presentation: {} ({})",
                r.named.text,
                if r.named.holds { "holds" } else { "does not hold" }
            );
        }
    }
    out
}
