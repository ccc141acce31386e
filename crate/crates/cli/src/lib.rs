//! Command-line front end: reads `.alg.json` presentations, runs the analyses
//! from `basisdiv`, and reports verdicts with stable exit codes.
//!
//! Exit codes: 0 completed, 1 refuted / not semisimple / not simple,
//! 2 inconclusive or unknown, 3 usage or input error.

pub mod dot;
pub mod expr;
pub mod format;
pub mod report;

use std::path::{Path, PathBuf};
use std::time::Instant;

use basisdiv::decomposition::{BlockCheck, Reason, SimplicityReport};
use basisdiv::division::{Clause, Missing, ProductOrder, Witness};
use basisdiv::oracle::fuzz::{self, check_algebra, minimize, CampaignSummary, FuzzConfig, Property};
use basisdiv::oracle::{self, Ceilings};
use basisdiv::*;
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};
use thiserror::Error;

pub use report::{emit, CommandEcho, OutputFormat, Report};

pub const EXIT_OK: i32 = 0;
pub const EXIT_REFUTED: i32 = 1;
pub const EXIT_INCONCLUSIVE: i32 = 2;
pub const EXIT_USAGE: i32 = 3;

#[derive(Debug, Parser)]
#[command(
    name = "basisdiv",
    version,
    about = "Division-basis tests for semisimplicity and simplicity"
)]
pub struct Cli {
    /// Report format.
    #[arg(long, global = true, value_enum, default_value_t = OutputFormat::Text)]
    pub format: OutputFormat,
    /// Reduce a rational presentation modulo the prime P before analysis.
    #[arg(long, global = true, value_name = "P")]
    pub reduce_mod: Option<u64>,
    /// Include wall-clock time in the report.
    #[arg(long, global = true)]
    pub timings: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args)]
pub struct Input {
    /// Presentation file (.alg.json).
    pub file: PathBuf,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum ModeArg {
    Exhaustive,
    Refute,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Field, dimension, labels and the nonzero product table.
    Info(Input),
    /// Basis of the annihilator.
    Ann(Input),
    /// Ideal generated by an element such as `b1 + 2*b2`.
    Ideal {
        #[command(flatten)]
        input: Input,
        element: String,
    },
    /// Weak-, semi- and i-division verdicts for the presentation basis.
    ClassifyBasis {
        #[command(flatten)]
        input: Input,
        /// Default: exhaustive over prime fields, refute over Q.
        #[arg(long, value_enum)]
        mode: Option<ModeArg>,
        /// Coordinate bound for refute mode.
        #[arg(long)]
        bound: Option<u32>,
    },
    /// Three-level connection decomposition into ideal blocks.
    Decompose {
        #[command(flatten)]
        input: Input,
        /// Write the connection graph in DOT format.
        #[arg(long, value_name = "PATH")]
        dot: Option<PathBuf>,
    },
    /// Semisimplicity from the annihilator and a semi-division basis.
    CheckSemisimple {
        #[command(flatten)]
        input: Input,
        /// Search every basis (prime fields only).
        #[arg(long)]
        all_bases: bool,
    },
    /// Simplicity from the annihilator and an i-division basis.
    CheckSimple {
        #[command(flatten)]
        input: Input,
        /// Search every basis (prime fields only).
        #[arg(long)]
        all_bases: bool,
    },
    /// Brute-force ideal enumeration; all three answers when no flag is given.
    ///
    /// Exit 1 when a requested --semisimple or --simple answer is false.
    Oracle {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        ideals: bool,
        #[arg(long)]
        semisimple: bool,
        #[arg(long)]
        simple: bool,
    },
    /// Differential test of the basis criteria against the oracle.
    Fuzz {
        /// Prime field, e.g. F_2, F3 or 5.
        #[arg(long)]
        field: String,
        #[arg(long)]
        dim: usize,
        #[arg(long)]
        trials: usize,
        #[arg(long)]
        seed: u64,
        /// Probability that a structure constant is nonzero.
        #[arg(long, default_value_t = 0.3)]
        sparsity: f64,
        /// Run trials on one thread.
        #[arg(long)]
        sequential: bool,
        /// Directory for minimized counterexample files.
        #[arg(long, value_name = "DIR")]
        counterexamples: Option<PathBuf>,
    },
}

#[derive(Debug, Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Format(#[from] format::FormatError),
    #[error(transparent)]
    Expr(#[from] expr::ExprError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Division(#[from] basisdiv::division::DivisionError),
    #[error(transparent)]
    Decomposition(#[from] basisdiv::decomposition::DecompositionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Fuzz(#[from] fuzz::FuzzError),
    #[error("cannot write {path}: {source}")]
    Write { path: String, source: std::io::Error },
}

impl Command {
    pub fn name(&self) -> &'static str {
        match self {
            Command::Info(_) => "info",
            Command::Ann(_) => "ann",
            Command::Ideal { .. } => "ideal",
            Command::ClassifyBasis { .. } => "classify-basis",
            Command::Decompose { .. } => "decompose",
            Command::CheckSemisimple { .. } => "check-semisimple",
            Command::CheckSimple { .. } => "check-simple",
            Command::Oracle { .. } => "oracle",
            Command::Fuzz { .. } => "fuzz",
        }
    }
}

fn write_file(path: &Path, contents: &str) -> Result<(), CliError> {
    std::fs::write(path, contents).map_err(|source| CliError::Write {
        path: path.display().to_string(),
        source,
    })
}

fn load(cli: &Cli, input: &Input) -> Result<AlgebraPresentation, CliError> {
    let a = format::parse_algebra_file(&input.file)?;
    Ok(match cli.reduce_mod {
        Some(p) => a.reduce_mod(p)?,
        None => a,
    })
}

fn ceilings() -> Result<Ceilings, CliError> {
    Ok(Ceilings::from_env()?)
}

fn vector(a: &AlgebraPresentation, v: &Vector) -> Value {
    json!({
        "coords": v.coords().iter().map(|c| c.to_string()).collect::<Vec<_>>(),
        "expr": expr::render(a, v),
    })
}

fn span_text(a: &AlgebraPresentation, s: &Subspace) -> String {
    if s.is_zero() {
        return "0".to_string();
    }
    let rows: Vec<String> = s.rows().iter().map(|r| expr::render(a, r)).collect();
    format!("span{{{}}}", rows.join(", "))
}

fn subspace(a: &AlgebraPresentation, s: &Subspace) -> Value {
    json!({
        "rank": s.rank(),
        "basis": s.rows().iter().map(|r| vector(a, r)).collect::<Vec<_>>(),
    })
}

fn labels_of(a: &AlgebraPresentation, indices: impl IntoIterator<Item = usize>) -> Vec<String> {
    indices.into_iter().map(|i| a.labels()[i].clone()).collect()
}

fn status_name(s: Status) -> &'static str {
    match s {
        Status::Holds => "holds",
        Status::Fails => "fails",
        Status::Unknown => "unknown",
    }
}

fn mode_json(m: CheckMode) -> Value {
    match m {
        CheckMode::Exhaustive => json!({"type": "exhaustive"}),
        CheckMode::RefuteOnly { bound } => json!({"type": "refute", "bound": bound}),
    }
}

fn witness_json(a: &AlgebraPresentation, w: &Witness) -> Value {
    json!({
        "clause": match w.clause { Clause::Division => "division", Clause::PairProduct => "pair-product" },
        "index": a.labels()[w.index],
        "partner_label": a.labels()[w.partner_index],
        "partner": vector(a, &w.partner),
        "element": vector(a, &w.element),
        "order": match w.order {
            ProductOrder::PartnerFirst => "partner-first",
            ProductOrder::ElementFirst => "element-first",
        },
        "product": vector(a, &w.product),
        "missing": match w.missing { Missing::Partner => "partner", Missing::Element => "element" },
        "generated_ideal": subspace(a, &a.principal_ideal(&w.product)),
        "replays": w.replay(a),
    })
}

fn witness_text(a: &AlgebraPresentation, w: &Witness) -> String {
    let (p, e) = (expr::render(a, &w.partner), expr::render(a, &w.element));
    let product = match w.order {
        ProductOrder::PartnerFirst => format!("({p})({e})"),
        ProductOrder::ElementFirst => format!("({e})({p})"),
    };
    let missing = match w.missing {
        Missing::Partner => &p,
        Missing::Element => &e,
    };
    let clause = match w.clause {
        Clause::Division => "division",
        Clause::PairProduct => "pair-product",
    };
    format!(
        "{clause} clause at {}: c = {product} = {}, but {missing} is not in I(c) = {}",
        a.labels()[w.index],
        expr::render(a, &w.product),
        span_text(a, &a.principal_ideal(&w.product))
    )
}

fn division_json(a: &AlgebraPresentation, v: &DivisionVerdict) -> Value {
    json!({
        "status": status_name(v.status),
        "mode": mode_json(v.mode),
        "witness": v.witness.as_ref().map(|w| witness_json(a, w)),
    })
}

fn division_text(a: &AlgebraPresentation, name: &str, v: &DivisionVerdict, text: &mut Vec<String>) {
    text.push(format!("{name}: {}", status_name(v.status)));
    if let Some(w) = &v.witness {
        text.push(format!("  witness: {}", witness_text(a, w)));
    }
}

fn matrix_json(a: &AlgebraPresentation, m: &Matrix) -> Value {
    Value::Array(m.rows().iter().map(|r| vector(a, r)).collect())
}

fn reason_code(r: &Reason) -> &'static str {
    match r {
        Reason::DecompositionOnly => "decomposition-only",
        Reason::ZeroProduct => "zero-product",
        Reason::NonzeroAnnihilator { .. } => "nonzero-annihilator",
        Reason::GivenBasisSatisfies => "given-basis-satisfies",
        Reason::GivenBasisFails => "given-basis-fails",
        Reason::GivenBasisUndecided => "given-basis-undecided",
        Reason::FoundBasis => "found-basis",
        Reason::NoBasis => "no-basis",
    }
}

fn block_json(a: &AlgebraPresentation, b: &BlockCheck, analysed: &[String]) -> Value {
    json!({
        "indices": b.indices.iter().map(|&i| analysed[i].clone()).collect::<Vec<_>>(),
        "subspace": subspace(a, &b.subspace),
        "is_ideal": b.is_ideal,
        "annihilates_others": b.annihilates_others,
        "simple": b.simple,
    })
}

fn block_text(a: &AlgebraPresentation, b: &BlockCheck, analysed: &[String]) -> String {
    let names: Vec<&str> = b.indices.iter().map(|&i| analysed[i].as_str()).collect();
    let simple = match b.simple {
        Some(true) => ", simple",
        Some(false) => ", not simple",
        None => "",
    };
    format!(
        "  block {{{}}} = {}: ideal {}, zero products with other blocks {}{simple}",
        names.join(", "),
        span_text(a, &b.subspace),
        b.is_ideal,
        b.annihilates_others
    )
}

/// Labels for the basis the analysis ran in: the file's labels, or `u1..un`
/// when a different basis was found.
fn analysed_labels(a: &AlgebraPresentation, basis: Option<&Matrix>) -> Vec<String> {
    match basis {
        None => a.labels().to_vec(),
        Some(_) => (1..=a.dim()).map(|i| format!("u{i}")).collect(),
    }
}

fn levels_json(levels: &ConnectionLevels, labels: &[String]) -> Value {
    let level1: Vec<Vec<String>> = levels
        .level1
        .iter()
        .map(|c| c.iter().map(|&i| labels[i].clone()).collect())
        .collect();
    let flatten = |k: usize, f: &dyn Fn(usize) -> Vec<usize>| -> Vec<String> {
        f(k).iter().map(|&i| labels[i].clone()).collect()
    };
    let level2: Vec<Vec<String>> = (0..levels.level2.len())
        .map(|k| flatten(k, &|k| levels.level2_indices(k)))
        .collect();
    let level3: Vec<Vec<String>> = (0..levels.level3.len())
        .map(|k| flatten(k, &|k| levels.level3_indices(k)))
        .collect();
    json!({
        "level1": level1,
        "level2": level2,
        "level3": level3,
        "edges1": levels.edges1.iter().map(|&(i, j)| [labels[i].clone(), labels[j].clone()]).collect::<Vec<_>>(),
        "edges2": levels.edges2,
        "edges3": levels.edges3,
    })
}

fn classes_text(classes: &[Vec<String>]) -> String {
    classes
        .iter()
        .map(|c| format!("{{{}}}", c.join(", ")))
        .collect::<Vec<_>>()
        .join(" ")
}

fn decomposition_json(a: &AlgebraPresentation, r: &DecompositionReport) -> Value {
    let labels = analysed_labels(a, r.basis.as_ref());
    json!({
        "verdict": r.verdict.to_string(),
        "reason": reason_code(&r.reason),
        "reason_text": r.reason.describe("semi-division"),
        "annihilator_rank": r.annihilator_rank,
        "basis": r.basis.as_ref().map(|m| matrix_json(a, m)),
        "division": r.division.as_ref().map(|d| match &r.basis {
            Some(m) => division_json(&a.change_of_basis(m).expect("basis is invertible").with_labels(labels.clone()).expect("distinct labels"), d),
            None => division_json(a, d),
        }),
        "levels": levels_json(&r.levels, &labels),
        "blocks": r.blocks.iter().map(|b| block_json(a, b, &labels)).collect::<Vec<_>>(),
        "direct_sum": r.direct_sum,
    })
}

fn decomposition_text(a: &AlgebraPresentation, r: &DecompositionReport, text: &mut Vec<String>) {
    let labels = analysed_labels(a, r.basis.as_ref());
    if let Some(m) = &r.basis {
        for (k, row) in m.rows().iter().enumerate() {
            text.push(format!("  {} = {}", labels[k], expr::render(a, row)));
        }
    }
    let lv = levels_json(&r.levels, &labels);
    for level in ["level1", "level2", "level3"] {
        let classes: Vec<Vec<String>> = serde_json::from_value(lv[level].clone()).expect("label lists");
        text.push(format!("{level}: {}", classes_text(&classes)));
    }
    for b in &r.blocks {
        text.push(block_text(a, b, &labels));
    }
    text.push(format!("direct sum: {}", r.direct_sum));
}

fn verdict_exit(v: Verdict) -> i32 {
    match v {
        Verdict::Semisimple => EXIT_OK,
        Verdict::NotSemisimple => EXIT_REFUTED,
        Verdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn simple_exit(v: SimpleVerdict) -> i32 {
    match v {
        SimpleVerdict::Simple => EXIT_OK,
        SimpleVerdict::NotSimple => EXIT_REFUTED,
        SimpleVerdict::Inconclusive => EXIT_INCONCLUSIVE,
    }
}

fn basis_mode(all_bases: bool, a: &AlgebraPresentation) -> Result<BasisMode, CliError> {
    if !all_bases {
        return Ok(BasisMode::GivenBasis);
    }
    if !a.field().is_finite() {
        return Err(CliError::Usage(
            "--all-bases needs a prime field; pass --reduce-mod P for a rational presentation".into(),
        ));
    }
    Ok(BasisMode::AllBases)
}

/// Accepts `F_5`, `F5`, `GF(5)` or `5`.
pub fn parse_prime_field(text: &str) -> Result<Field, CliError> {
    let t = text.trim();
    let digits = t
        .strip_prefix("F_")
        .or_else(|| t.strip_prefix('F'))
        .or_else(|| t.strip_prefix("GF(").and_then(|x| x.strip_suffix(')')))
        .unwrap_or(t);
    let p: u64 = digits
        .parse()
        .map_err(|_| CliError::Usage(format!("cannot read a prime field from '{text}'")))?;
    Field::prime(p).map_err(|e| CliError::Usage(e.to_string()))
}

fn info(a: &AlgebraPresentation) -> (i32, Value, Vec<String>) {
    let table: Vec<Value> = a
        .nonzero_products()
        .map(|(i, j, _)| {
            json!({
                "left": a.labels()[i],
                "right": a.labels()[j],
                "result": expr::render(a, a.basis_product(i, j)),
            })
        })
        .collect();
    let ann = a.annihilator().rank();
    let mut text = vec![
        format!("field: {}", a.field()),
        format!("dim: {}", a.dim()),
        format!("basis: {}", a.labels().join(", ")),
        format!("nonzero products: {}", table.len()),
    ];
    for (i, j, _) in a.nonzero_products() {
        text.push(format!(
            "  {} {} = {}",
            a.labels()[i],
            a.labels()[j],
            expr::render(a, a.basis_product(i, j))
        ));
    }
    text.push(format!("annihilator rank: {ann}"));
    let result = json!({
        "field": a.field().to_string(),
        "dim": a.dim(),
        "basis": a.labels(),
        "products": table,
        "zero_product": a.has_zero_product(),
        "annihilator_rank": ann,
    });
    (EXIT_OK, result, text)
}

fn classify(
    a: &AlgebraPresentation,
    mode: Option<ModeArg>,
    bound: Option<u32>,
) -> Result<(i32, Value, Vec<String>), CliError> {
    let mode = match (mode, bound) {
        (Some(ModeArg::Exhaustive), Some(_)) => return Err(CliError::Usage("--bound applies to --mode refute".into())),
        (Some(ModeArg::Exhaustive), None) => CheckMode::Exhaustive,
        (Some(ModeArg::Refute), b) | (None, b @ Some(_)) => CheckMode::RefuteOnly {
            bound: b.unwrap_or(basisdiv::division::DEFAULT_REFUTE_BOUND),
        },
        (None, None) => CheckMode::strongest(a.field()),
    };
    let c = classify_basis(a, mode)?;
    let verdicts = [&c.weak, &c.semi, &c.i_division];
    let code = if verdicts.iter().any(|v| v.status == Status::Unknown) {
        EXIT_INCONCLUSIVE
    } else if verdicts.iter().any(|v| v.fails()) {
        EXIT_REFUTED
    } else {
        EXIT_OK
    };
    let profile = basis_profile(a);
    let profile_json: Vec<Value> = (0..a.dim())
        .map(|i| {
            let p = profile.get(i);
            json!({
                "index": a.labels()[i],
                "S": labels_of(a, p.s_set.iter().copied()),
                "M_rank": p.m_space.rank(),
                "P": labels_of(a, p.p_set.iter().copied()),
                "PP": p.pp_products.iter().map(|v| expr::render(a, v)).collect::<Vec<_>>(),
            })
        })
        .collect();
    let mut text = vec![format!(
        "mode: {}",
        match mode {
            CheckMode::Exhaustive => "exhaustive".to_string(),
            CheckMode::RefuteOnly { bound } => format!("refute (bound {bound})"),
        }
    )];
    for (kind, v) in [DivisionKind::Weak, DivisionKind::Semi, DivisionKind::I]
        .into_iter()
        .zip(verdicts)
    {
        division_text(a, kind.name(), v, &mut text);
    }
    let result = json!({
        "mode": mode_json(mode),
        "weak_division": division_json(a, &c.weak),
        "semi_division": division_json(a, &c.semi),
        "i_division": division_json(a, &c.i_division),
        "profile": profile_json,
    });
    Ok((code, result, text))
}

fn simplicity_json(a: &AlgebraPresentation, r: &SimplicityReport) -> Value {
    let labels = analysed_labels(a, r.basis.as_ref());
    json!({
        "verdict": r.verdict.to_string(),
        "reason": reason_code(&r.reason),
        "reason_text": r.reason.describe("i-division"),
        "annihilator_rank": r.annihilator_rank,
        "basis": r.basis.as_ref().map(|m| matrix_json(a, m)),
        "division": r.division.as_ref().map(|d| match &r.basis {
            Some(m) => division_json(&a.change_of_basis(m).expect("basis is invertible").with_labels(labels.clone()).expect("distinct labels"), d),
            None => division_json(a, d),
        }),
    })
}

/// Whether the trial still violates `property` after shrinking.
fn still_violates(property: Property, ceilings: &Ceilings) -> impl Fn(&AlgebraPresentation) -> bool + '_ {
    move |b| {
        check_algebra(b, ceilings)
            .map(|r| r.violations.iter().any(|v| v.property == property))
            .unwrap_or(false)
    }
}

fn fuzz_report(
    summary: &CampaignSummary,
    ceilings: &Ceilings,
    dir: Option<&Path>,
) -> Result<(i32, Value, Vec<String>), CliError> {
    let cfg = &summary.config;
    let mut text = vec![format!(
        "fuzz: {} trials over {}, dim {}, sparsity {}, seed {}",
        cfg.trials, cfg.field, cfg.dim, cfg.sparsity, cfg.seed
    )];
    let counts = json!({
        "trials": summary.trials.len(),
        "annihilator_zero": summary.count(|t| t.annihilator_rank == 0),
        "semisimple": summary.count(|t| t.oracle_semisimple),
        "simple": summary.count(|t| t.oracle_simple),
        "semi_division_basis": summary.count(|t| t.semi_division_basis_exists),
        "i_division_basis": summary.count(|t| t.i_division_basis_exists),
    });
    text.push(format!(
        "semisimple {}, simple {}, zero annihilator {}",
        counts["semisimple"], counts["simple"], counts["annihilator_zero"]
    ));
    let mut properties = Vec::new();
    for p in Property::ALL {
        let (exercised, violated) = summary.tally(p);
        properties.push(json!({"name": p.name(), "exercised": exercised, "violated": violated}));
        text.push(format!(
            "  {:<32} exercised {exercised:>5}  violated {violated}",
            p.name()
        ));
    }
    let mut counterexamples = Vec::new();
    for (t, v) in summary.violations() {
        let small = minimize(&t.algebra, still_violates(v.property, ceilings));
        let file = format::AlgebraFile::from_presentation(&small);
        let path = match dir {
            Some(d) => {
                let p = d.join(format!("seed{}-{}.alg.json", t.seed, v.property.name()));
                write_file(&p, &file.to_json())?;
                Some(p.display().to_string())
            }
            None => None,
        };
        text.push(format!("violation at seed {} ({}): {}", t.seed, v.property, v.detail));
        counterexamples.push(json!({
            "seed": t.seed,
            "property": v.property.name(),
            "detail": v.detail,
            "minimized": serde_json::to_value(&file).expect("plain data"),
            "file": path,
        }));
    }
    let trials: Vec<Value> = summary
        .trials
        .iter()
        .map(|t| {
            json!({
                "index": t.index,
                "seed": t.seed,
                "annihilator_rank": t.annihilator_rank,
                "semisimple": t.oracle_semisimple,
                "simple": t.oracle_simple,
                "semi_division_basis": t.semi_division_basis_exists,
                "i_division_basis": t.i_division_basis_exists,
                "given_basis": {"weak": t.given_weak, "semi": t.given_semi, "i": t.given_i},
                "blocks": t.blocks,
                "violations": t.violations.iter().map(|v| json!({"property": v.property.name(), "detail": v.detail})).collect::<Vec<_>>(),
            })
        })
        .collect();
    let code = if counterexamples.is_empty() {
        EXIT_OK
    } else {
        EXIT_REFUTED
    };
    let result = json!({
        "config": {
            "field": cfg.field.to_string(),
            "dim": cfg.dim,
            "sparsity": cfg.sparsity,
            "seed": cfg.seed,
            "trials": cfg.trials,
        },
        "counts": counts,
        "properties": properties,
        "counterexamples": counterexamples,
        "trials": trials,
    });
    Ok((code, result, text))
}

fn execute(cli: &Cli) -> Result<(i32, Value, Vec<String>), CliError> {
    match &cli.command {
        Command::Info(input) => Ok(info(&load(cli, input)?)),
        Command::Ann(input) => {
            let a = load(cli, input)?;
            let ann = a.annihilator();
            let text = vec![format!("annihilator rank {}: {}", ann.rank(), span_text(&a, &ann))];
            Ok((EXIT_OK, subspace(&a, &ann), text))
        }
        Command::Ideal { input, element } => {
            let a = load(cli, input)?;
            let v = expr::parse_element(&a, element)?;
            let ideal = a.principal_ideal(&v);
            let text = vec![format!(
                "I({}) has rank {}: {}",
                expr::render(&a, &v),
                ideal.rank(),
                span_text(&a, &ideal)
            )];
            let result =
                json!({"generator": vector(&a, &v), "ideal": subspace(&a, &ideal), "is_full": ideal.is_full()});
            Ok((EXIT_OK, result, text))
        }
        Command::ClassifyBasis { input, mode, bound } => classify(&load(cli, input)?, *mode, *bound),
        Command::Decompose { input, dot } => {
            let a = load(cli, input)?;
            let r = decompose(&a)?;
            if let Some(path) = dot {
                write_file(path, &dot::to_dot(&a, &r.levels))?;
            }
            let mut text = Vec::new();
            decomposition_text(&a, &r, &mut text);
            let sound = r.direct_sum && r.blocks.iter().all(|b| b.is_ideal && b.annihilates_others);
            Ok((
                if sound { EXIT_OK } else { EXIT_REFUTED },
                decomposition_json(&a, &r),
                text,
            ))
        }
        Command::CheckSemisimple { input, all_bases } => {
            let a = load(cli, input)?;
            let mode = basis_mode(*all_bases, &a)?;
            let opts = Options {
                ceilings: ceilings()?,
                execution: Execution::Parallel,
            };
            let r = check_semisimple_via_theorem(&a, mode, &opts)?;
            let mut text = vec![format!(
                "verdict: {} ({})",
                r.verdict,
                r.reason.describe("semi-division")
            )];
            if let Some(d) = &r.division {
                if r.basis.is_none() {
                    division_text(&a, "semi-division", d, &mut text);
                }
            }
            if !matches!(r.reason, Reason::NonzeroAnnihilator { .. } | Reason::NoBasis) {
                decomposition_text(&a, &r, &mut text);
            }
            Ok((verdict_exit(r.verdict), decomposition_json(&a, &r), text))
        }
        Command::CheckSimple { input, all_bases } => {
            let a = load(cli, input)?;
            let mode = basis_mode(*all_bases, &a)?;
            let opts = Options {
                ceilings: ceilings()?,
                execution: Execution::Parallel,
            };
            let r = check_simple_via_corollary(&a, mode, &opts)?;
            let mut text = vec![format!("verdict: {} ({})", r.verdict, r.reason.describe("i-division"))];
            if let Some(d) = &r.division {
                division_text(&a, "i-division", d, &mut text);
            }
            if let Some(m) = &r.basis {
                for (k, row) in m.rows().iter().enumerate() {
                    text.push(format!("  u{} = {}", k + 1, expr::render(&a, row)));
                }
            }
            Ok((simple_exit(r.verdict), simplicity_json(&a, &r), text))
        }
        Command::Oracle {
            input,
            ideals,
            semisimple,
            simple,
        } => {
            let a = load(cli, input)?;
            let c = ceilings()?;
            let all = !(*ideals || *semisimple || *simple);
            let mut result = serde_json::Map::new();
            let mut text = Vec::new();
            let mut code = EXIT_OK;
            if all || *ideals {
                let list = oracle::all_ideals(&a, &c)?;
                text.push(format!("ideals: {}", list.len()));
                for s in &list {
                    text.push(format!("  {}", span_text(&a, s)));
                }
                result.insert(
                    "ideals".into(),
                    Value::Array(list.iter().map(|s| subspace(&a, s)).collect()),
                );
            }
            if all || *semisimple {
                let family = oracle::semisimple_family(&a, &c)?;
                text.push(format!("semisimple: {}", family.is_some()));
                if let Some(f) = &family {
                    for s in f {
                        text.push(format!("  simple summand {}", span_text(&a, s)));
                    }
                }
                if *semisimple && family.is_none() {
                    code = EXIT_REFUTED;
                }
                result.insert("semisimple".into(), json!(family.is_some()));
                result.insert(
                    "simple_summands".into(),
                    json!(family.map(|f| f.iter().map(|s| subspace(&a, s)).collect::<Vec<_>>())),
                );
            }
            if all || *simple {
                let s = oracle::oracle_is_simple(&a, &c)?;
                text.push(format!("simple: {s}"));
                if *simple && !s {
                    code = EXIT_REFUTED;
                }
                result.insert("simple".into(), json!(s));
            }
            Ok((code, Value::Object(result), text))
        }
        Command::Fuzz {
            field,
            dim,
            trials,
            seed,
            sparsity,
            sequential,
            counterexamples,
        } => {
            let cfg = FuzzConfig {
                field: parse_prime_field(field)?,
                dim: *dim,
                sparsity: *sparsity,
                seed: *seed,
                trials: *trials,
            };
            let c = ceilings()?;
            let exec = if *sequential {
                Execution::Sequential
            } else {
                Execution::Parallel
            };
            let summary = fuzz::run_campaign(&cfg, exec, &c)?;
            if let Some(d) = counterexamples {
                std::fs::create_dir_all(d).map_err(|source| CliError::Write {
                    path: d.display().to_string(),
                    source,
                })?;
            }
            fuzz_report(&summary, &c, counterexamples.as_deref())
        }
    }
}

/// Runs one parsed invocation. Errors become a report with exit code 3.
pub fn run(cli: &Cli, args: Vec<String>) -> Report {
    let echo = CommandEcho {
        name: cli.command.name().to_string(),
        args,
    };
    let start = Instant::now();
    let mut report = match execute(cli) {
        Ok((code, result, text)) => Report::new(echo, code, result, text),
        Err(e) => Report::new(
            echo,
            EXIT_USAGE,
            json!({"error": e.to_string()}),
            vec![format!("error: {e}")],
        ),
    };
    if cli.timings {
        report.elapsed_ms = Some(start.elapsed().as_secs_f64() * 1e3);
    }
    report
}

/// Parses `args` (program name first), runs, and returns the process exit
/// code with the bytes for stdout and stderr.
pub fn main_with_args(args: &[String]) -> (i32, Vec<u8>, Vec<u8>) {
    match Cli::try_parse_from(args) {
        Ok(cli) => {
            let report = run(&cli, args[1..].to_vec());
            let out = emit(&report, cli.format);
            if report.exit_code == EXIT_USAGE && cli.format == OutputFormat::Text {
                (report.exit_code, Vec::new(), out)
            } else {
                (report.exit_code, out, Vec::new())
            }
        }
        Err(e) => {
            let code = match e.kind() {
                clap::error::ErrorKind::DisplayHelp | clap::error::ErrorKind::DisplayVersion => EXIT_OK,
                _ => EXIT_USAGE,
            };
            let rendered = e.render().to_string().into_bytes();
            if code == EXIT_OK {
                (code, rendered, Vec::new())
            } else {
                (code, Vec::new(), rendered)
            }
        }
    }
}
