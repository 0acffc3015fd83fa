//! Command-line front end: validates and classifies fan files, lists
//! primitive relations, checks contraction certificates, applies the
//! deformation rule, and runs catalog verification.
//!
//! Exit codes: 0 on success, 1 when a checked property fails to hold,
//! 2 on unusable input.

use std::path::{Path, PathBuf};

use clap::error::ErrorKind;
use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;

use crate::corpus::Corpus;
use crate::deform::{deform, deformability, degree_matrix, Deformability};
use crate::error::{Error, Result};
use crate::fan::{fan_from_json, isomorphism, Fan};
use crate::lattice::{hnf, pair, Int, IntMatrix};
use crate::mori::{
    crepant_relations, extremal_relations, positivity_class, PositivityClass, PrimitiveRelation,
};
use crate::special::{
    bundle_split, interior_ray_property, is_special_contraction, is_special_weak_fano,
    s1_s2_split, ContractionCertificate, SpecialDecision,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_PROPERTY: i32 = 1;
pub const EXIT_INPUT: i32 = 2;

/// Result of one invocation: exit code, machine report, human summary.
pub struct CommandOutcome {
    pub exit_code: i32,
    pub report: Value,
    pub text: String,
    pub emit_json: bool,
}

#[derive(Parser)]
#[command(
    name = "torifan",
    version,
    about = "Exact computations on smooth complete toric fans"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a fan and report its classification
    Verify(FanArgs),
    /// List every primitive relation with degree and extremality
    Relations(FanArgs),
    /// Check every crepant contraction for a certificate
    Special(FanArgs),
    /// Interior rays, side dichotomy, and bundle splitting at one crepant relation
    Structure(RelationArgs),
    /// Apply the one-parameter deformation rule at one crepant relation
    Deform(RelationArgs),
    /// Print the degree matrix and its Hermite row basis
    DegreeMatrix(FanArgs),
    /// Test two fans (files or catalog names) for lattice isomorphism
    Isomorphic(IsoArgs),
    /// Catalog operations
    Corpus(CorpusCmd),
}

#[derive(Args)]
struct SourceArgs {
    /// Fan JSON file
    #[arg(long, value_name = "FILE", conflicts_with = "name")]
    fan: Option<PathBuf>,
    /// Catalog entry name
    #[arg(long, value_name = "NAME")]
    name: Option<String>,
}

#[derive(Args)]
struct OutputArgs {
    /// Emit the JSON report
    #[arg(long, conflicts_with = "text")]
    json: bool,
    /// Emit the human-readable summary (default)
    #[arg(long)]
    text: bool,
}

#[derive(Args)]
struct FanArgs {
    #[command(flatten)]
    source: SourceArgs,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct RelationArgs {
    #[command(flatten)]
    source: SourceArgs,
    /// Index into the list of crepant relations
    #[arg(long, default_value_t = 0)]
    relation: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct IsoArgs {
    /// First fan: file path or catalog name
    a: String,
    /// Second fan: file path or catalog name
    b: String,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct CorpusCmd {
    #[command(subcommand)]
    action: CorpusAction,
}

#[derive(Subcommand)]
enum CorpusAction {
    /// List the catalog entries
    List(OutputArgs),
    /// Recompute and check every catalog entry
    VerifyAll(OutputArgs),
}

pub fn run() -> i32 {
    let argv: Vec<String> = std::env::args().collect();
    let outcome = execute(&argv);
    if outcome.emit_json {
        println!(
            "{}",
            serde_json::to_string_pretty(&outcome.report).unwrap_or_else(|_| "{}".into())
        );
    } else if outcome.exit_code == EXIT_INPUT {
        eprintln!("{}", outcome.text);
    } else if !outcome.text.is_empty() {
        println!("{}", outcome.text);
    }
    outcome.exit_code
}

/// Parses and dispatches one invocation. Never panics on malformed input.
pub fn execute(argv: &[String]) -> CommandOutcome {
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_INPUT,
            };
            return CommandOutcome {
                exit_code: code,
                report: serde_json::json!({ "error": e.to_string() }),
                text: e.to_string(),
                emit_json: false,
            };
        }
    };
    let emit_json = wants_json(&cli.command);
    match dispatch(cli) {
        Ok(mut outcome) => {
            outcome.emit_json = emit_json;
            outcome
        }
        Err(e) => CommandOutcome {
            exit_code: classify_error(&e),
            report: serde_json::json!({ "error": e.to_string() }),
            text: format!("error: {e}"),
            emit_json,
        },
    }
}

fn wants_json(command: &Command) -> bool {
    match command {
        Command::Verify(a) | Command::Relations(a) | Command::Special(a) | Command::DegreeMatrix(a) => a.output.json,
        Command::Structure(a) | Command::Deform(a) => a.output.json,
        Command::Isomorphic(a) => a.output.json,
        Command::Corpus(c) => match &c.action {
            CorpusAction::List(o) | CorpusAction::VerifyAll(o) => o.json,
        },
    }
}

/// Unusable input exits 2; a fan that loads but fails a check exits 1.
fn classify_error(e: &Error) -> i32 {
    match e {
        Error::Io(_)
        | Error::Json(_)
        | Error::UnknownName(_)
        | Error::InvalidInput(_)
        | Error::RelationIndex(_) => EXIT_INPUT,
        _ => EXIT_PROPERTY,
    }
}

fn dispatch(cli: Cli) -> Result<CommandOutcome> {
    match cli.command {
        Command::Verify(args) => cmd_verify(&args.source),
        Command::Relations(args) => cmd_relations(&args.source),
        Command::Special(args) => cmd_special(&args.source),
        Command::Structure(args) => cmd_structure(&args.source, args.relation),
        Command::Deform(args) => cmd_deform(&args.source, args.relation),
        Command::DegreeMatrix(args) => cmd_degree_matrix(&args.source),
        Command::Isomorphic(args) => cmd_isomorphic(&args.a, &args.b),
        Command::Corpus(c) => match c.action {
            CorpusAction::List(_) => cmd_corpus_list(),
            CorpusAction::VerifyAll(_) => cmd_corpus_verify_all(),
        },
    }
}

struct Source {
    fan: Fan,
    ray_names: Vec<String>,
    corpus: Corpus,
}

fn load_source(source: &SourceArgs) -> Result<Source> {
    let corpus = Corpus::builtin()?;
    match (&source.fan, &source.name) {
        (Some(path), None) => {
            let fan = fan_from_json(&std::fs::read_to_string(path)?)?;
            let ray_names = (0..fan.rays.len()).map(|i| format!("r{i}")).collect();
            Ok(Source { fan, ray_names, corpus })
        }
        (None, Some(name)) => {
            let fan = corpus.load(name)?;
            let entry = corpus.entry(name)?;
            let ray_names = if entry.ray_names.len() == fan.rays.len() {
                entry.ray_names.clone()
            } else {
                (0..fan.rays.len()).map(|i| format!("r{i}")).collect()
            };
            Ok(Source { fan, ray_names, corpus })
        }
        _ => Err(Error::InvalidInput("exactly one of --fan or --name is required".into())),
    }
}

fn load_either(spec: &str, corpus: &Corpus) -> Result<Fan> {
    if Path::new(spec).exists() {
        fan_from_json(&std::fs::read_to_string(spec)?)
    } else {
        corpus.load(spec)
    }
}

fn to_i64(v: &Int) -> Result<i64> {
    i64::try_from(v).map_err(|_| Error::InvalidInput("value exceeds the i64 range".into()))
}

fn vec_to_i64(v: &[Int]) -> Result<Vec<i64>> {
    v.iter().map(to_i64).collect()
}

fn matrix_to_i64(m: &IntMatrix) -> Result<Vec<Vec<i64>>> {
    (0..m.rows)
        .map(|r| (0..m.cols).map(|c| to_i64(m.at(r, c))).collect())
        .collect()
}

#[derive(Serialize)]
struct RelationJson {
    collection: Vec<String>,
    sigma: Vec<(String, i64)>,
    degree: i64,
    extremal: bool,
    crepant: bool,
}

fn relation_json(
    rel: &PrimitiveRelation,
    extremal: bool,
    names: &[String],
) -> Result<RelationJson> {
    let collection = rel.collection.rays.iter().map(|&r| names[r].clone()).collect();
    let sigma = rel
        .sigma_rays
        .iter()
        .zip(&rel.coefficients)
        .map(|(&r, c)| Ok((names[r].clone(), to_i64(c)?)))
        .collect::<Result<_>>()?;
    let degree = to_i64(&rel.degree)?;
    Ok(RelationJson {
        collection,
        sigma,
        degree,
        extremal,
        crepant: extremal && degree == 0,
    })
}

fn relation_text(rel: &RelationJson) -> String {
    let lhs = rel.collection.join(" + ");
    let rhs = if rel.sigma.is_empty() {
        "0".to_string()
    } else {
        rel.sigma
            .iter()
            .map(|(n, c)| if *c == 1 { n.clone() } else { format!("{c}{n}") })
            .collect::<Vec<_>>()
            .join(" + ")
    };
    format!("{lhs} = {rhs}")
}

fn outcome<T: Serialize>(exit_code: i32, report: &T, text: String) -> Result<CommandOutcome> {
    Ok(CommandOutcome {
        exit_code,
        report: serde_json::to_value(report)?,
        text,
        emit_json: false,
    })
}

#[derive(Serialize)]
struct VerifyJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    dim: usize,
    num_rays: usize,
    num_max_cones: usize,
    smooth: bool,
    complete: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    positivity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    special_weak_fano: Option<bool>,
    #[serde(skip_serializing_if = "Option::is_none")]
    num_crepant: Option<usize>,
}

fn cmd_verify(source: &SourceArgs) -> Result<CommandOutcome> {
    let src = load_source(source)?;
    let f = &src.fan;
    let smooth = f.is_smooth();
    let complete = f.is_complete();
    let mut report = VerifyJson {
        name: f.name.clone(),
        dim: f.dim,
        num_rays: f.rays.len(),
        num_max_cones: f.max_cones.len(),
        smooth,
        complete,
        positivity: None,
        special_weak_fano: None,
        num_crepant: None,
    };
    let mut exit = EXIT_OK;
    if smooth && complete {
        let positivity = positivity_class(f)?;
        report.positivity = Some(positivity.to_string());
        if positivity == PositivityClass::Neither {
            exit = EXIT_PROPERTY;
        } else {
            let special = is_special_weak_fano(f)?;
            report.special_weak_fano = Some(special.special_weak_fano);
            report.num_crepant = Some(crepant_relations(f)?.len());
        }
    } else {
        exit = EXIT_PROPERTY;
    }
    let label = report.name.clone().unwrap_or_else(|| "fan".into());
    let mut text = format!(
        "{label}: dim {}, {} rays, {} maximal cones\nsmooth: {smooth}\ncomplete: {complete}",
        report.dim, report.num_rays, report.num_max_cones
    );
    if let Some(p) = &report.positivity {
        text.push_str(&format!("\npositivity: {p}"));
    }
    if let Some(s) = report.special_weak_fano {
        text.push_str(&format!("\nspecial weak Fano: {s}"));
    }
    if let Some(c) = report.num_crepant {
        text.push_str(&format!("\ncrepant relations: {c}"));
    }
    outcome(exit, &report, text)
}

#[derive(Serialize)]
struct RelationsJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    positivity: String,
    relations: Vec<RelationJson>,
}

fn cmd_relations(source: &SourceArgs) -> Result<CommandOutcome> {
    let src = load_source(source)?;
    let f = &src.fan;
    let positivity = positivity_class(f)?;
    let relations = extremal_relations(f)?
        .iter()
        .map(|(rel, ext)| relation_json(rel, *ext, &src.ray_names))
        .collect::<Result<Vec<_>>>()?;
    let report =
        RelationsJson { name: f.name.clone(), positivity: positivity.to_string(), relations };
    let mut text = format!("positivity: {}", report.positivity);
    for rel in &report.relations {
        let mut flags = format!("  deg {}", rel.degree);
        if rel.extremal {
            flags.push_str("  extremal");
        }
        if rel.crepant {
            flags.push_str("  crepant");
        }
        text.push_str(&format!("\n{}{flags}", relation_text(rel)));
    }
    outcome(EXIT_OK, &report, text)
}

#[derive(Serialize)]
struct ContractionJson {
    relation: RelationJson,
    special: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    m: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    image_positivity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    failure: Option<String>,
}

#[derive(Serialize)]
struct SpecialJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    positivity: String,
    special_weak_fano: bool,
    contractions: Vec<ContractionJson>,
}

fn cmd_special(source: &SourceArgs) -> Result<CommandOutcome> {
    let src = load_source(source)?;
    let f = &src.fan;
    let report_data = is_special_weak_fano(f)?;
    let mut contractions = Vec::new();
    for (rel, decision) in &report_data.decisions {
        let relation = relation_json(rel, true, &src.ray_names)?;
        let entry = match decision {
            SpecialDecision::Special(cert) => ContractionJson {
                relation,
                special: true,
                m: Some(vec_to_i64(&cert.m)?),
                image_positivity: Some(positivity_class(&cert.image_fan)?.to_string()),
                failure: None,
            },
            SpecialDecision::NotSpecial(why) => ContractionJson {
                relation,
                special: false,
                m: None,
                image_positivity: None,
                failure: Some(why.to_string()),
            },
        };
        contractions.push(entry);
    }
    let report = SpecialJson {
        name: f.name.clone(),
        positivity: report_data.positivity.to_string(),
        special_weak_fano: report_data.special_weak_fano,
        contractions,
    };
    let mut text = format!(
        "positivity: {}\nspecial weak Fano: {}",
        report.positivity, report.special_weak_fano
    );
    for c in &report.contractions {
        if c.special {
            text.push_str(&format!(
                "\n{}  special, m = {:?}, image {}",
                relation_text(&c.relation),
                c.m.as_deref().unwrap_or(&[]),
                c.image_positivity.as_deref().unwrap_or("-")
            ));
        } else {
            text.push_str(&format!(
                "\n{}  not special: {}",
                relation_text(&c.relation),
                c.failure.as_deref().unwrap_or("-")
            ));
        }
    }
    let exit = if report.special_weak_fano || report_data.decisions.is_empty() {
        EXIT_OK
    } else {
        EXIT_PROPERTY
    };
    outcome(exit, &report, text)
}

fn crepant_certificate(f: &Fan, index: usize) -> Result<(PrimitiveRelation, SpecialDecision)> {
    let crepant = crepant_relations(f)?;
    let rel = crepant.get(index).cloned().ok_or(Error::RelationIndex(index))?;
    let decision = is_special_contraction(f, &rel)?;
    Ok((rel, decision))
}

#[derive(Serialize)]
struct BundleJson {
    fiber_rays: Vec<String>,
    base_rays: Vec<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    fiber_identified: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    base_identified: Option<String>,
}

#[derive(Serialize)]
struct StructureJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    relation: RelationJson,
    interior_ray_holds: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    interior_ray_violation: Option<(String, String)>,
    interior_rays: Vec<String>,
    side: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    bundle: Option<BundleJson>,
}

fn cmd_structure(source: &SourceArgs, index: usize) -> Result<CommandOutcome> {
    let src = load_source(source)?;
    let f = &src.fan;
    let (rel, decision) = crepant_certificate(f, index)?;
    let relation = relation_json(&rel, true, &src.ray_names)?;
    let cert = match decision {
        SpecialDecision::Special(cert) => cert,
        SpecialDecision::NotSpecial(why) => {
            let report = serde_json::json!({
                "relation": relation_text(&relation),
                "special": false,
                "failure": why.to_string(),
            });
            return Ok(CommandOutcome {
                exit_code: EXIT_PROPERTY,
                text: format!(
                    "{}  not special: {why}; no structure to report",
                    relation_text(&relation)
                ),
                report,
                emit_json: false,
            });
        }
    };
    let violation = interior_ray_property(f)?;
    let split = s1_s2_split(f, &cert)?;
    let bundle = bundle_split(f)?;
    let bundle_json = match &bundle {
        None => None,
        Some(b) => Some(BundleJson {
            fiber_rays: b.g1.iter().map(|&r| src.ray_names[r].clone()).collect(),
            base_rays: b.g2.iter().map(|&r| src.ray_names[r].clone()).collect(),
            fiber_identified: src.corpus.identify(&b.fiber)?,
            base_identified: src.corpus.identify(&b.base)?,
        }),
    };
    let report = StructureJson {
        name: f.name.clone(),
        relation,
        interior_ray_holds: violation.is_none(),
        interior_ray_violation: violation
            .map(|(a, b)| (src.ray_names[a].clone(), src.ray_names[b].clone())),
        interior_rays: split.interior_rays.iter().map(|&r| src.ray_names[r].clone()).collect(),
        side: split.side.to_string(),
        bundle: bundle_json,
    };
    let mut text = format!(
        "{}\ninterior-ray property: {}\ninterior rays: [{}]\nside: {}",
        relation_text(&report.relation),
        if report.interior_ray_holds { "holds" } else { "fails" },
        report.interior_rays.join(", "),
        report.side
    );
    match &report.bundle {
        Some(b) => text.push_str(&format!(
            "\nbundle: fiber [{}]{} over base [{}]{}",
            b.fiber_rays.join(", "),
            b.fiber_identified.as_deref().map(|n| format!(" = {n}")).unwrap_or_default(),
            b.base_rays.join(", "),
            b.base_identified.as_deref().map(|n| format!(" = {n}")).unwrap_or_default(),
        )),
        None => text.push_str("\nbundle: none"),
    }
    let exit = if report.interior_ray_holds { EXIT_OK } else { EXIT_PROPERTY };
    outcome(exit, &report, text)
}

#[derive(Serialize)]
struct DeformJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    relation: RelationJson,
    status: String,
    #[serde(skip_serializing_if = "Option::is_none")]
    positive_rays: Option<Vec<String>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    w: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    replaced_ray: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    new_ray: Option<Vec<i64>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    positivity: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    identified_as: Option<String>,
    #[serde(skip_serializing_if = "Option::is_none")]
    relations: Option<Vec<RelationJson>>,
}

fn deform_status(d: &Deformability) -> &'static str {
    match d {
        Deformability::Applicable { .. } => "applicable",
        Deformability::TooManyPositive { .. } => "too_many_positive",
        Deformability::NoPositive => "no_positive",
        Deformability::UnsupportedWeight { .. } => "unsupported_weight",
    }
}

fn cmd_deform(source: &SourceArgs, index: usize) -> Result<CommandOutcome> {
    let src = load_source(source)?;
    let f = &src.fan;
    let (rel, decision) = crepant_certificate(f, index)?;
    let relation = relation_json(&rel, true, &src.ray_names)?;
    let cert: Box<ContractionCertificate> = match decision {
        SpecialDecision::Special(cert) => cert,
        SpecialDecision::NotSpecial(why) => {
            let report = serde_json::json!({
                "relation": relation_text(&relation),
                "status": "not_special",
                "failure": why.to_string(),
            });
            return Ok(CommandOutcome {
                exit_code: EXIT_PROPERTY,
                text: format!("{}  not special: {why}", relation_text(&relation)),
                report,
                emit_json: false,
            });
        }
    };
    let status = deformability(f, &cert);
    let mut report = DeformJson {
        name: f.name.clone(),
        relation,
        status: deform_status(&status).to_string(),
        positive_rays: None,
        w: None,
        replaced_ray: None,
        new_ray: None,
        positivity: None,
        identified_as: None,
        relations: None,
    };
    match &status {
        Deformability::Applicable { .. } => {}
        Deformability::TooManyPositive { positive } => {
            report.positive_rays =
                Some(positive.iter().map(|&r| src.ray_names[r].clone()).collect());
        }
        Deformability::UnsupportedWeight { w } => {
            report.w = Some(src.ray_names[*w].clone());
        }
        Deformability::NoPositive => {}
    }
    if !matches!(status, Deformability::Applicable { .. }) {
        let text = format!(
            "{}\nstatus: {}{}",
            relation_text(&report.relation),
            report.status,
            report
                .positive_rays
                .as_ref()
                .map(|p| format!(" [{}]", p.join(", ")))
                .unwrap_or_default()
        );
        return outcome(EXIT_PROPERTY, &report, text);
    }
    let result = deform(f, &cert)?;
    let mut deformed_names = src.ray_names.clone();
    deformed_names[result.replaced_ray_index] =
        format!("{}'", src.ray_names[result.replaced_ray_index]);
    report.w = Some(src.ray_names[result.w_index].clone());
    report.replaced_ray = Some(src.ray_names[result.replaced_ray_index].clone());
    report.new_ray = Some(vec_to_i64(&result.new_ray)?);
    report.positivity = Some(result.positivity.to_string());
    report.identified_as = src.corpus.identify(&result.deformed)?;
    report.relations = Some(
        extremal_relations(&result.deformed)?
            .iter()
            .map(|(r, e)| relation_json(r, *e, &deformed_names))
            .collect::<Result<Vec<_>>>()?,
    );
    let mut text = format!(
        "{}\nstatus: applicable, w = {}\nreplaces {} by {:?}\npositivity: {}",
        relation_text(&report.relation),
        report.w.as_deref().unwrap_or("-"),
        report.replaced_ray.as_deref().unwrap_or("-"),
        report.new_ray.as_deref().unwrap_or(&[]),
        report.positivity.as_deref().unwrap_or("-")
    );
    if let Some(id) = &report.identified_as {
        text.push_str(&format!("\nidentified as: {id}"));
    }
    if let Some(rels) = &report.relations {
        text.push_str("\ndeformed relations:");
        for r in rels {
            text.push_str(&format!("\n  {}  deg {}", relation_text(r), r.degree));
        }
    }
    outcome(EXIT_OK, &report, text)
}

#[derive(Serialize)]
struct DegreeMatrixJson {
    #[serde(skip_serializing_if = "Option::is_none")]
    name: Option<String>,
    rows: usize,
    cols: usize,
    matrix: Vec<Vec<i64>>,
    hermite: Vec<Vec<i64>>,
}

fn cmd_degree_matrix(source: &SourceArgs) -> Result<CommandOutcome> {
    let src = load_source(source)?;
    let k = degree_matrix(&src.fan);
    let (h, _) = hnf(&k);
    let report = DegreeMatrixJson {
        name: src.fan.name.clone(),
        rows: k.rows,
        cols: k.cols,
        matrix: matrix_to_i64(&k)?,
        hermite: matrix_to_i64(&h)?,
    };
    let mut text = format!("degree matrix ({} x {}):", report.rows, report.cols);
    for row in &report.matrix {
        text.push_str(&format!("\n  {row:?}"));
    }
    text.push_str("\nhermite row basis:");
    for row in &report.hermite {
        text.push_str(&format!("\n  {row:?}"));
    }
    outcome(EXIT_OK, &report, text)
}

#[derive(Serialize)]
struct IsomorphicJson {
    a: String,
    b: String,
    isomorphic: bool,
    #[serde(skip_serializing_if = "Option::is_none")]
    matrix: Option<Vec<Vec<i64>>>,
    #[serde(skip_serializing_if = "Option::is_none")]
    ray_bijection: Option<Vec<usize>>,
}

fn cmd_isomorphic(a: &str, b: &str) -> Result<CommandOutcome> {
    let corpus = Corpus::builtin()?;
    let fa = load_either(a, &corpus)?;
    let fb = load_either(b, &corpus)?;
    let found = isomorphism(&fa, &fb);
    let report = IsomorphicJson {
        a: a.to_string(),
        b: b.to_string(),
        isomorphic: found.is_some(),
        matrix: match &found {
            Some(iso) => Some(matrix_to_i64(&iso.matrix)?),
            None => None,
        },
        ray_bijection: found.as_ref().map(|iso| iso.ray_bijection.clone()),
    };
    let text = if report.isomorphic {
        format!("{a} and {b} are isomorphic")
    } else {
        format!("{a} and {b} are not isomorphic")
    };
    let exit = if report.isomorphic { EXIT_OK } else { EXIT_PROPERTY };
    outcome(exit, &report, text)
}

#[derive(Serialize)]
struct CorpusListEntry {
    name: String,
    section: String,
    construction: String,
    dim: usize,
    num_rays: usize,
    positivity: String,
    special: bool,
    num_crepant: usize,
    deformable: bool,
}

#[derive(Serialize)]
struct CorpusListJson {
    entries: Vec<CorpusListEntry>,
}

fn cmd_corpus_list() -> Result<CommandOutcome> {
    let corpus = Corpus::builtin()?;
    let mut entries = Vec::new();
    for entry in corpus.entries() {
        let fan = corpus.load(&entry.name)?;
        let construction = match &entry.construction {
            crate::corpus::Construction::Explicit { .. } => "explicit",
            crate::corpus::Construction::Surface2d { .. } => "surface2d",
            crate::corpus::Construction::Product { .. } => "product",
            crate::corpus::Construction::Bundle { .. } => "bundle",
            crate::corpus::Construction::StarSubdivide { .. } => "star_subdivide",
        };
        entries.push(CorpusListEntry {
            name: entry.name.clone(),
            section: entry.section.as_str().to_string(),
            construction: construction.to_string(),
            dim: fan.dim,
            num_rays: fan.rays.len(),
            positivity: entry.expected.positivity.clone(),
            special: entry.expected.special,
            num_crepant: entry.expected.num_crepant,
            deformable: entry.expected.deformable,
        });
    }
    let report = CorpusListJson { entries };
    let mut text = String::new();
    for e in &report.entries {
        text.push_str(&format!(
            "{:10} {:9} d{} {:2} rays  {:16} special={:5} crepant={} deformable={}\n",
            e.name, e.section, e.dim, e.num_rays, e.positivity, e.special, e.num_crepant,
            e.deformable
        ));
    }
    text.pop();
    outcome(EXIT_OK, &report, text)
}

fn cmd_corpus_verify_all() -> Result<CommandOutcome> {
    let corpus = Corpus::builtin()?;
    let report = corpus.verify_all()?;
    let mut text = String::new();
    for e in &report.entries {
        text.push_str(&format!(
            "{:10} {:9} d{} {:16} special={:5} crepant={} deformable={:5} relations_ok={} expected_ok={}\n",
            e.name,
            e.section,
            e.dim,
            e.positivity,
            e.special,
            e.num_crepant,
            e.deformable,
            e.relations_ok,
            e.expected_ok
        ));
    }
    text.push_str(&format!("fano surfaces: [{}]\n", report.fano_surfaces.join(", ")));
    text.push_str(&format!(
        "counts: surfaces={} fourfolds={} nondeformable={}\n",
        report.counts.surfaces, report.counts.fourfolds, report.counts.nondeformable
    ));
    if report.failures.is_empty() {
        text.push_str("all checks passed");
    } else {
        text.push_str(&format!("failures ({}):", report.failures.len()));
        for f in &report.failures {
            text.push_str(&format!("\n  {f}"));
        }
    }
    let exit = if report.clean() { EXIT_OK } else { EXIT_PROPERTY };
    outcome(exit, &report, text)
}

/// Certifies that the chosen certificate really pairs to -1 on the pair.
/// Kept for diagnostics from callers that hold a certificate.
pub fn certificate_values(f: &Fan, cert: &ContractionCertificate) -> Vec<Int> {
    f.rays.iter().map(|r| pair(&cert.m, r)).collect()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn args(list: &[&str]) -> Vec<String> {
        std::iter::once("torifan".to_string())
            .chain(list.iter().map(|s| s.to_string()))
            .collect()
    }

    #[test]
    fn verify_reports_special_weak_fano() {
        let out = execute(&args(&["verify", "--name", "Z1", "--json"]));
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.report["special_weak_fano"], serde_json::json!(true));
        assert!(out.emit_json);
    }

    #[test]
    fn unknown_corpus_name_is_an_input_error() {
        let out = execute(&args(&["verify", "--name", "no-such-fan"]));
        assert_eq!(out.exit_code, EXIT_INPUT);
    }

    #[test]
    fn missing_source_is_an_input_error() {
        let out = execute(&args(&["verify"]));
        assert_eq!(out.exit_code, EXIT_INPUT);
    }

    #[test]
    fn malformed_file_is_an_input_error() {
        let dir = std::env::temp_dir().join("torifan-cli-test");
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("broken.json");
        std::fs::write(&path, "{ not json").unwrap();
        let out = execute(&args(&["verify", "--fan", path.to_str().unwrap()]));
        assert_eq!(out.exit_code, EXIT_INPUT);
    }

    #[test]
    fn deform_z1_matches_the_expected_picture() {
        let out = execute(&args(&["deform", "--name", "Z1", "--json"]));
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.report["status"], serde_json::json!("applicable"));
        assert_eq!(out.report["new_ray"], serde_json::json!([1, -1, 0, 0]));
        assert_eq!(out.report["positivity"], serde_json::json!("Fano"));
        assert!(out.report.get("identified_as").is_none());
    }

    #[test]
    fn deform_z12_identifies_z19() {
        let out = execute(&args(&["deform", "--name", "Z12", "--json"]));
        assert_eq!(out.exit_code, EXIT_OK);
        assert_eq!(out.report["identified_as"], serde_json::json!("Z19"));
    }

    #[test]
    fn nondeformable_entry_reports_too_many_positive() {
        let out = execute(&args(&["deform", "--name", "Z18", "--json"]));
        assert_eq!(out.exit_code, EXIT_PROPERTY);
        assert_eq!(out.report["status"], serde_json::json!("too_many_positive"));
    }

    #[test]
    fn isomorphic_distinguishes_catalog_names() {
        let yes = execute(&args(&["isomorphic", "Z8", "Z8"]));
        assert_eq!(yes.exit_code, EXIT_OK);
        let no = execute(&args(&["isomorphic", "Z8", "Z9"]));
        assert_eq!(no.exit_code, EXIT_PROPERTY);
    }

    #[test]
    fn verify_all_json_is_byte_identical_across_runs() {
        let a = execute(&args(&["corpus", "verify-all", "--json"]));
        let b = execute(&args(&["corpus", "verify-all", "--json"]));
        assert_eq!(a.exit_code, EXIT_OK);
        let ja = serde_json::to_string_pretty(&a.report).unwrap();
        let jb = serde_json::to_string_pretty(&b.report).unwrap();
        assert_eq!(ja, jb);
    }
}
