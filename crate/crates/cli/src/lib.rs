//! Command-line front end for `orbicoh`.
//!
//! Exit status 0 on success (including violated or inconclusive verdicts),
//! 2 for unreadable or malformed input, 3 when the input fails a mathematical
//! precondition.

pub mod input;
mod oracle;
pub mod report;

use std::ops::ControlFlow;
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use num_bigint::BigInt;
use num_traits::{One, Signed};

use orbicoh::charpair::CharacteristicPair;
use orbicoh::evenness::{evenness_certificate, EvennessCertificate, Verdict};
use orbicoh::fan::{fan_to_pair, integrality_matrix, pair_to_fan, Fan};
use orbicoh::gradedring::{ring_presentation, IntegralCohomology};
use orbicoh::polytope::SimplePolytope;
use orbicoh::retraction::{dimension_profile, RetractionAnalysis, RetractionError, DEFAULT_MAX_VERTICES};
use orbicoh::serde_big::Big;
use orbicoh::towers::{self, FibrationCheck, HirzebruchParams, Tower};

use input::Input;
use report::*;

const POLYTOPE_CAVEAT: &str =
    "face data is checked combinatorially; realizability as a convex polytope is not verified";
const FAN_CAVEAT: &str = "the fan is assumed to be polytopal; this is not verified";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Io(String),
    #[error("{origin}:{line}:{column}: {message}")]
    Parse {
        origin: String,
        line: usize,
        column: usize,
        message: String,
    },
    #[error("{0}")]
    Precondition(String),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Io(_) | CliError::Parse { .. } => 2,
            CliError::Precondition(_) => 3,
        }
    }
}

fn pre(e: impl std::fmt::Display) -> CliError {
    CliError::Precondition(e.to_string())
}

#[derive(Debug, Parser)]
#[command(name = "orbicoh", version, about = "Exact invariants and integral cohomology of toric orbifolds")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    /// Print the report as JSON.
    #[arg(long, global = true)]
    pub json: bool,
    /// Indent JSON output.
    #[arg(long, global = true)]
    pub pretty: bool,
    /// Largest polytope for which retractions are enumerated.
    #[arg(long, global = true, default_value_t = DEFAULT_MAX_VERTICES)]
    pub max_vertices: usize,
    /// Cross-check results with naive independent computations.
    #[arg(long, global = true)]
    pub oracle: bool,
    /// Highest polynomial degree of the cohomology computation (default: the dimension).
    #[arg(long, global = true)]
    pub max_degree: Option<usize>,
}

#[derive(Debug, Args)]
pub struct InputArg {
    /// JSON file, inline JSON object, or - for standard input.
    pub input: String,
}

#[derive(Debug, Args)]
pub struct RetractArgs {
    pub input: String,
    /// Number of retraction sequences to list.
    #[arg(long, default_value_t = 1)]
    pub limit: usize,
}

#[derive(Debug, Args)]
pub struct HirzebruchArgs {
    /// JSON with "alpha"/"beta" or "a1","b1","a2","b2","c","d".
    pub input: Option<String>,
    #[arg(long, allow_hyphen_values = true)]
    pub alpha: Option<i64>,
    #[arg(long, allow_hyphen_values = true)]
    pub beta: Option<i64>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Check a polytope, pair, fan or tower and print its basic data.
    Validate(InputArg),
    /// Local groups at vertices and along faces.
    LocalGroups(InputArg),
    /// Dimension profile and admissible retraction sequences.
    Retract(RetractArgs),
    /// The r-vector of a polytope.
    RVector(InputArg),
    /// The evenness certificate built from admissible retractions.
    Evenness(InputArg),
    /// The integrality matrix of a fan.
    Integrality(InputArg),
    /// Integral cohomology modules and ring presentation.
    Cohomology(InputArg),
    /// Characteristic matrix and fibration checks of a tower.
    Tower(InputArg),
    /// Full pipeline for a two-stage tower with reduced parameters.
    Hirzebruch(HirzebruchArgs),
}

fn load(arg: &str) -> Result<Input, CliError> {
    let (source, text) = input::read_source(arg)?;
    input::parse_input(&source, &text)
}

fn one_based(v: &[usize]) -> Vec<usize> {
    v.iter().map(|x| x + 1).collect()
}

fn bigs(v: &[BigInt]) -> Vec<Big> {
    v.iter().map(Big::from).collect()
}

fn rows(m: &[Vec<BigInt>]) -> Vec<Vec<Big>> {
    m.iter().map(|r| bigs(r)).collect()
}

fn vertex_name(p: &SimplePolytope, v: usize) -> Vec<usize> {
    one_based(&p.vertex_facet_list(v))
}

fn tower_pair(t: &Tower) -> Result<CharacteristicPair, CliError> {
    let m = towers::tower_char_matrix(t).map_err(pre)?;
    m.pair(t).map_err(pre)
}

fn to_pair(input: &Input) -> Result<CharacteristicPair, CliError> {
    let pair = match input {
        Input::Pair(spec) => CharacteristicPair::from_spec(spec).map_err(pre)?,
        Input::Fan(spec) => fan_to_pair(&Fan::from_spec(spec).map_err(pre)?).map_err(pre)?,
        Input::Tower(spec) => tower_pair(&Tower::from_spec(spec).map_err(pre)?)?,
        Input::Hirzebruch(h) => {
            let (a, b) = h.alpha_beta().map_err(pre)?;
            towers::reduced_hirzebruch_pair(&a, &b).map_err(pre)?
        }
        Input::Polytope(_) => {
            return Err(CliError::Precondition(
                "this command needs a characteristic pair, fan or tower, not a bare polytope".into(),
            ))
        }
    };
    pair.validate().map_err(pre)?;
    Ok(pair)
}

fn to_polytope(input: &Input) -> Result<Arc<SimplePolytope>, CliError> {
    match input {
        Input::Polytope(spec) => Ok(Arc::new(SimplePolytope::from_spec(spec).map_err(pre)?)),
        _ => Ok(to_pair(input)?.polytope().clone()),
    }
}

fn to_fan(input: &Input) -> Result<Fan, CliError> {
    match input {
        Input::Fan(spec) => {
            let fan = Fan::from_spec(spec).map_err(pre)?;
            fan.check_complete().map_err(pre)?;
            Ok(fan)
        }
        _ => pair_to_fan(&to_pair(input)?).map_err(pre),
    }
}

fn verdict_text(c: &EvennessCertificate) -> String {
    match &c.verdict {
        Verdict::Satisfied => "satisfied".into(),
        Verdict::Violated { .. } => "violated".into(),
        Verdict::Inconclusive { .. } => "inconclusive".into(),
    }
}

fn degree_reports(coh: &IntegralCohomology) -> Vec<DegreeReport> {
    coh.pieces()
        .iter()
        .map(|p| DegreeReport {
            degree: 2 * p.degree,
            rank: p.rank(),
            torsion: bigs(&p.module.torsion),
        })
        .collect()
}

fn fibration_report(f: &FibrationCheck) -> FibrationReport {
    FibrationReport {
        stage: f.stage,
        ell: Big::from(&f.ell),
        verdict: f.verdict().to_string(),
        offending: f
            .offending
            .iter()
            .map(|(e, j, x)| TwistEntry {
                from_stage: *j,
                entry: e + 1,
                value: x.clone(),
            })
            .collect(),
    }
}

fn validate(input: &Input) -> Result<Report, CliError> {
    let (p, orders) = match input {
        Input::Polytope(_) => (to_polytope(input)?, None),
        _ => {
            let pair = to_pair(input)?;
            let orders = pair.vertex_orders();
            (pair.polytope().clone(), Some(orders))
        }
    };
    Ok(Report::Validate(ValidateReport {
        input_kind: input.kind().into(),
        dim: p.dim(),
        facets: p.num_facets(),
        vertices: p.num_vertices(),
        f_vector: p.f_vector(),
        smooth: orders.as_ref().map(|o| o.iter().all(|x| x.abs().is_one())),
        vertex_orders: orders.as_deref().map(bigs),
        caveat: POLYTOPE_CAVEAT.into(),
    }))
}

fn local_groups(input: &Input, with_oracle: bool) -> Result<Report, CliError> {
    let pair = to_pair(input)?;
    let p = pair.polytope().clone();
    let vertices: Vec<VertexGroup> = (0..p.num_vertices())
        .map(|v| {
            let g = pair.local_group_at_vertex(v);
            VertexGroup {
                vertex: vertex_name(&p, v),
                order: Big(g.torsion_order()),
                invariant_factors: bigs(&g.torsion),
            }
        })
        .collect();
    let mut faces = Vec::new();
    for e in p.all_faces() {
        if e.dim == 0 || e.dim == p.dim() {
            continue;
        }
        let mut local = Vec::new();
        for v in e.vertex_list() {
            let g = pair.local_group_on_face(&e, v).map_err(pre)?;
            local.push(VertexGroup {
                vertex: vertex_name(&p, v),
                order: Big(g.torsion_order()),
                invariant_factors: bigs(&g.torsion),
            });
        }
        faces.push(FaceGroups {
            dim: e.dim,
            facets: one_based(&e.facet_list()),
            face_group: bigs(&pair.face_group(&e).torsion),
            local_groups: local,
        });
    }
    let oracle = with_oracle.then(|| oracle::vertex_orders(&pair));
    Ok(Report::LocalGroups(LocalGroupsReport {
        input_kind: input.kind().into(),
        dim: p.dim(),
        vertices,
        faces,
        oracle,
    }))
}

fn explore(p: &Arc<SimplePolytope>, cap: usize) -> Result<Option<RetractionAnalysis>, CliError> {
    match RetractionAnalysis::explore(p.clone(), cap) {
        Ok(a) => Ok(Some(a)),
        Err(RetractionError::TooManyVertices { .. }) => Ok(None),
        Err(e) => Err(pre(e)),
    }
}

fn cap_reason(p: &SimplePolytope, cap: usize) -> String {
    format!("{} vertices exceed the enumeration cap of {cap}", p.num_vertices())
}

fn retract(input: &Input, limit: usize, cli: &Cli) -> Result<Report, CliError> {
    let p = to_polytope(input)?;
    let profile = dimension_profile(&p.f_vector()).ok();
    let Some(a) = explore(&p, cli.max_vertices)? else {
        return Ok(Report::Retract(RetractReport {
            input_kind: input.kind().into(),
            status: "inconclusive".into(),
            reason: Some(cap_reason(&p, cli.max_vertices)),
            dim: p.dim(),
            vertices: p.num_vertices(),
            profile,
            r_vector: Vec::new(),
            complexes: 0,
            dead_ends: 0,
            sequences: Vec::new(),
            oracle: None,
        }));
    };
    let mut found = Vec::new();
    a.for_each_sequence(|s| {
        found.push(s.clone());
        if found.len() >= limit {
            ControlFlow::Break(())
        } else {
            ControlFlow::Continue(())
        }
    });
    let sequences = found
        .iter()
        .map(|s| {
            s.steps
                .iter()
                .map(|step| Step {
                    dim: step.complex.dim(),
                    complex: step.complex.maximal_faces().iter().map(|f| one_based(&f.facet_list())).collect(),
                    top_face: one_based(&step.top_face.facet_list()),
                    vertex: vertex_name(&p, step.vertex),
                })
                .collect()
        })
        .collect();
    let oracle = cli.oracle.then(|| oracle::sequences(&p, &found, profile.as_ref()));
    let status = if found.is_empty() { "no admissible retraction" } else { "complete" };
    Ok(Report::Retract(RetractReport {
        input_kind: input.kind().into(),
        status: status.into(),
        reason: None,
        dim: p.dim(),
        vertices: p.num_vertices(),
        profile,
        r_vector: a.r_vector(),
        complexes: a.nodes().len(),
        dead_ends: a.nodes().iter().map(|n| n.dead_ends.len()).sum(),
        sequences,
        oracle,
    }))
}

fn r_vector(input: &Input, cli: &Cli) -> Result<Report, CliError> {
    let p = to_polytope(input)?;
    let analysis = explore(&p, cli.max_vertices)?;
    let (status, reason, r) = match &analysis {
        Some(a) => ("complete", None, a.r_vector()),
        None => ("inconclusive", Some(cap_reason(&p, cli.max_vertices)), Vec::new()),
    };
    let text = analysis.as_ref().map(|_| {
        let parts: Vec<String> = r.iter().map(|x| x.1.to_string()).collect();
        format!("({})", parts.join(", "))
    });
    Ok(Report::RVector(RVectorReport {
        input_kind: input.kind().into(),
        status: status.into(),
        reason,
        dim: p.dim(),
        vertices: p.num_vertices(),
        r_vector: r,
        text,
    }))
}

fn evenness(input: &Input, cli: &Cli) -> Result<Report, CliError> {
    let pair = to_pair(input)?;
    let p = pair.polytope().clone();
    let cert = evenness_certificate(&pair, cli.max_vertices).map_err(pre)?;
    let collections: Vec<CollectionReport> = cert
        .collections
        .iter()
        .map(|c| CollectionReport {
            dim: c.dim,
            complex: c.complex.iter().map(|f| one_based(f)).collect(),
            vertices: c.vertices.iter().map(|&v| vertex_name(&p, v)).collect(),
            orders: bigs(&c.orders),
            reduced_orders: bigs(&c.reduced_orders),
            k: c.k,
            relatively_prime: c.relatively_prime,
        })
        .collect();
    let (reason, witness) = match &cert.verdict {
        Verdict::Satisfied => (None, None),
        Verdict::Violated {
            collection,
            witness,
            common_factor,
        } => (
            None,
            Some(Witness {
                collection: collection + 1,
                vertices: witness.iter().map(|&v| vertex_name(&p, v)).collect(),
                common_factor: Big::from(common_factor),
            }),
        ),
        Verdict::Inconclusive { reason } => (Some(reason.clone()), None),
    };
    let oracle = cli.oracle.then(|| oracle::collections(&cert));
    Ok(Report::Evenness(EvennessReport {
        input_kind: input.kind().into(),
        status: verdict_text(&cert),
        reason,
        witness,
        r_vector: cert.r_vector.clone(),
        collections,
        complexes: cert.complexes,
        dead_ends: cert.dead_ends,
        oracle,
    }))
}

fn integrality(input: &Input) -> Result<Report, CliError> {
    let fan = to_fan(input)?;
    let g = integrality_matrix(&fan).map_err(pre)?;
    Ok(Report::Integrality(IntegralityReport {
        input_kind: input.kind().into(),
        dim: fan.dim(),
        rays: rows(fan.rays()),
        cones: g.cones.iter().map(|c| one_based(c)).collect(),
        rows: rows(&g.rows),
        caveat: FAN_CAVEAT.into(),
    }))
}

fn cohomology(input: &Input, cli: &Cli) -> Result<Report, CliError> {
    let fan = to_fan(input)?;
    let n = fan.dim();
    let max_degree = cli.max_degree.unwrap_or(n);
    let pair = fan_to_pair(&fan).map_err(pre)?;
    let cert = evenness_certificate(&pair, cli.max_vertices).map_err(pre)?;
    let coh = IntegralCohomology::compute(&fan, max_degree).map_err(pre)?;
    let presentation = if max_degree >= n {
        Some(ring_presentation(&coh, Some(&cert)).map_err(pre)?)
    } else {
        None
    };
    let oracle = cli.oracle.then(|| oracle::ranks(&coh));
    Ok(Report::Cohomology(CohomologyReport {
        input_kind: input.kind().into(),
        dim: n,
        max_degree,
        degrees: degree_reports(&coh),
        evenness: verdict_text(&cert),
        presentation,
        caveat: FAN_CAVEAT.into(),
        oracle,
    }))
}

fn tower(input: &Input, cli: &Cli) -> Result<Report, CliError> {
    let t = match input {
        Input::Tower(spec) => Tower::from_spec(spec).map_err(pre)?,
        Input::Hirzebruch(h) => h.tower().map_err(pre)?.ok_or_else(|| {
            CliError::Precondition("reduced parameters do not determine a tower; give a1, b1, a2, b2, c, d".into())
        })?,
        _ => return Err(CliError::Precondition("the tower command needs a tower specification".into())),
    };
    let m = towers::tower_char_matrix(&t).map_err(pre)?;
    let pair = m.pair(&t).map_err(pre)?;
    pair.validate().map_err(pre)?;
    let fibrations = (2..=t.stages())
        .map(|i| towers::fibration_check(&t, i).map(|f| fibration_report(&f)))
        .collect::<Result<Vec<_>, _>>()
        .map_err(pre)?;
    let cert = evenness_certificate(&pair, cli.max_vertices).map_err(pre)?;
    let fan = pair_to_fan(&pair).map_err(pre)?;
    let coh = IntegralCohomology::compute(&fan, cli.max_degree.unwrap_or(fan.dim())).map_err(pre)?;
    Ok(Report::Tower(TowerReport {
        input_kind: input.kind().into(),
        stages: t.stages(),
        stage_dims: (1..=t.stages()).map(|i| t.stage_dim(i)).collect(),
        raw: rows(&m.raw.to_rows()),
        primitive: rows(&m.primitive.to_rows()),
        multipliers: bigs(&m.multipliers),
        fibrations,
        raw_vertex_orders: bigs(&m.raw_vertex_orders(&t).map_err(pre)?),
        evenness: verdict_text(&cert),
        degrees: degree_reports(&coh),
    }))
}

fn hirzebruch(args: &HirzebruchArgs, cli: &Cli) -> Result<Report, CliError> {
    let params = match (&args.input, args.alpha, args.beta) {
        (Some(arg), None, None) => match load(arg)? {
            Input::Hirzebruch(h) => h,
            other => {
                return Err(CliError::Precondition(format!(
                    "expected Hirzebruch parameters, found a {}",
                    other.kind()
                )))
            }
        },
        (None, Some(a), Some(b)) => HirzebruchParams::reduced(a, b),
        _ => {
            return Err(CliError::Io(
                "give either an input with the parameters or both --alpha and --beta".into(),
            ))
        }
    };
    let r = towers::hirzebruch(&params, cli.max_vertices).map_err(pre)?;
    let named = NamedSummary {
        holds: r.named.holds(),
        basis: r.named.basis,
        x_squared: r.named.x_squared,
        xy_alpha_z: r.named.xy_alpha_z,
        y_squared_alpha_beta_z: r.named.y_squared_alpha_beta_z,
        text: format!("x^2 = 0, xy = {}z, y^2 = {}z", r.alpha, &r.alpha * &r.beta),
    };
    Ok(Report::Hirzebruch(HirzebruchReport {
        alpha: Big::from(&r.alpha),
        beta: Big::from(&r.beta),
        packed_lambda: r.packed_lambda.as_ref().map(|m| rows(&m.to_rows())),
        tower_matrix: r.tower_matrix.as_ref().map(|m| rows(&m.raw.to_rows())),
        fibration: r.fibration.as_ref().map(fibration_report),
        lambda: rows(&r.pair.lambda().to_rows()),
        rays: rows(r.fan.rays()),
        cones: r.integrality.cones.iter().map(|c| one_based(c)).collect(),
        integrality: rows(&r.integrality.rows),
        evenness: verdict_text(&r.certificate),
        degrees: degree_reports(&r.cohomology),
        presentation: r.presentation,
        named,
    }))
}

pub fn run(cli: &Cli) -> Result<Output, CliError> {
    let report = match &cli.command {
        Command::Validate(a) => validate(&load(&a.input)?)?,
        Command::LocalGroups(a) => local_groups(&load(&a.input)?, cli.oracle)?,
        Command::Retract(a) => retract(&load(&a.input)?, a.limit, cli)?,
        Command::RVector(a) => r_vector(&load(&a.input)?, cli)?,
        Command::Evenness(a) => evenness(&load(&a.input)?, cli)?,
        Command::Integrality(a) => integrality(&load(&a.input)?)?,
        Command::Cohomology(a) => cohomology(&load(&a.input)?, cli)?,
        Command::Tower(a) => tower(&load(&a.input)?, cli)?,
        Command::Hirzebruch(a) => hirzebruch(a, cli)?,
    };
    Ok(Output {
        schema_version: SCHEMA_VERSION,
        report,
    })
}

/// The text written to standard output.
pub fn render(cli: &Cli, out: &Output) -> String {
    if cli.json {
        let mut s = if cli.pretty {
            serde_json::to_string_pretty(out)
        } else {
            serde_json::to_string(out)
        }
        .expect("reports serialize");
        s.push('\n');
        s
    } else {
        render_text(out)
    }
}
