//! Acceptance suite: one PASS/FAIL line per criterion, non-zero exit on any FAIL.

use std::path::PathBuf;
use std::time::{Duration, Instant};

use basisdiv::decomposition::Reason;
use basisdiv::oracle::fuzz::{check_algebra, minimize, run_campaign, CampaignSummary, FuzzConfig, Property};
use basisdiv::oracle::{self, Ceilings};
use basisdiv::*;
use basisdiv_cli::format::{parse_algebra_file, to_json};

fn corpus(name: &str) -> AlgebraPresentation {
    let p: PathBuf = [
        env!("CARGO_MANIFEST_DIR"),
        "..",
        "..",
        "corpus",
        &format!("{name}.alg.json"),
    ]
    .iter()
    .collect();
    parse_algebra_file(&p).unwrap_or_else(|e| panic!("{name}: {e}"))
}

struct Outcome {
    pass: bool,
    detail: String,
}

impl Outcome {
    fn new(pass: bool, detail: impl Into<String>) -> Self {
        Outcome {
            pass,
            detail: detail.into(),
        }
    }
}

fn within(elapsed: Duration, limit: Duration) -> (bool, String) {
    (
        elapsed < limit,
        format!("{:.2}s of {}s", elapsed.as_secs_f64(), limit.as_secs()),
    )
}

fn criterion1() -> Outcome {
    let start = Instant::now();
    let a = corpus("ex1").reduce_mod(2).unwrap();
    let ceilings = Ceilings::default();
    let profile = basis_profile(&a);
    let weak = check_weak_division(&a, &profile, CheckMode::Exhaustive).unwrap();
    let semi = check_semi_division(&a, &profile, CheckMode::Exhaustive).unwrap();
    let semisimple = oracle::oracle_is_semisimple(&a, &ceilings).unwrap();
    let theorem = check_semisimple_via_theorem(&a, BasisMode::AllBases, &Options::default()).unwrap();
    let replays = semi.witness.as_ref().is_some_and(|w| w.replay(&a));
    let (fast, time) = within(start.elapsed(), Duration::from_secs(1));
    let pass = weak.holds()
        && !semisimple
        && semi.fails()
        && replays
        && theorem.verdict == Verdict::NotSemisimple
        && theorem.reason == Reason::NoBasis
        && fast;
    Outcome::new(
        pass,
        format!(
            "weak {:?}, oracle semisimple {semisimple}, semi {:?} (witness replays {replays}), theorem {}; {time}",
            weak.status, semi.status, theorem.verdict
        ),
    )
}

/// The fuzz instances shared by criteria 2 to 7.
fn campaigns(ceilings: &Ceilings) -> (Vec<CampaignSummary>, Duration) {
    let f2 = Field::prime(2).unwrap();
    let f3 = Field::prime(3).unwrap();
    let configs = [(f2, 2, 1000), (f2, 3, 2000), (f3, 2, 3000)].map(|(field, dim, seed)| FuzzConfig {
        field,
        dim,
        sparsity: 0.3,
        seed,
        trials: 100,
    });
    let start = Instant::now();
    let out = configs
        .iter()
        .map(|c| run_campaign(c, Execution::Parallel, ceilings).unwrap())
        .collect();
    (out, start.elapsed())
}

fn tally(runs: &[CampaignSummary], p: Property) -> (usize, usize) {
    runs.iter()
        .map(|s| s.tally(p))
        .fold((0, 0), |(a, b), (c, d)| (a + c, b + d))
}

/// Writes minimized counterexamples for `p` and returns their paths.
fn emit_counterexamples(runs: &[CampaignSummary], p: Property, ceilings: &Ceilings) -> Vec<String> {
    let dir = PathBuf::from(env!("CARGO_TARGET_TMPDIR")).join("counterexamples");
    let mut paths = Vec::new();
    for s in runs {
        for t in s.trials.iter().filter(|t| t.violations.iter().any(|v| v.property == p)) {
            let small = minimize(&t.algebra, |b| {
                check_algebra(b, ceilings).is_ok_and(|r| r.violations.iter().any(|v| v.property == p))
            });
            std::fs::create_dir_all(&dir).unwrap();
            let path = dir.join(format!(
                "{}-dim{}-seed{}-{}.alg.json",
                s.config.field,
                s.config.dim,
                t.seed,
                p.name()
            ));
            std::fs::write(&path, to_json(&small)).unwrap();
            paths.push(path.display().to_string());
        }
    }
    paths
}

fn property_outcome(runs: &[CampaignSummary], p: Property, ceilings: &Ceilings, extra: &str) -> Outcome {
    let (exercised, violated) = tally(runs, p);
    let mut detail = format!("{exercised} instances exercised, {violated} violations{extra}");
    if violated > 0 {
        let files = emit_counterexamples(runs, p, ceilings);
        detail.push_str(&format!("; minimized counterexamples: {}", files.join(", ")));
    }
    Outcome::new(violated == 0 && exercised > 0, detail)
}

fn criterion4(runs: &[CampaignSummary], ceilings: &Ceilings) -> Outcome {
    let start = Instant::now();
    let mut checked = 0;
    let mut bad = 0;
    for t in runs.iter().flat_map(|s| &s.trials) {
        let r = decompose(&t.algebra).unwrap();
        let ranks: usize = r.blocks.iter().map(|b| b.subspace.rank()).sum();
        let ok = r.blocks.iter().all(|b| b.is_ideal && b.annihilates_others)
            && ranks == t.algebra.dim()
            && r.direct_sum
            && r.levels.is_well_nested(t.algebra.dim());
        checked += 1;
        bad += usize::from(!ok);
    }
    let (fast, time) = within(start.elapsed(), Duration::from_secs(30));
    let (_, recorded) = tally(runs, Property::DecompositionInvariants);
    let mut out = Outcome::new(
        bad == 0 && recorded == 0 && fast,
        format!("{checked} instances, {bad} failures; {time}"),
    );
    if recorded > 0 {
        let files = emit_counterexamples(runs, Property::DecompositionInvariants, ceilings);
        out.detail.push_str(&format!("; counterexamples: {}", files.join(", ")));
    }
    out
}

fn criterion8(runs: &[CampaignSummary]) -> Outcome {
    let (fuzzed, violated) = tally(runs, Property::Hierarchy);
    let mut corpus_ok = true;
    let mut seen = Vec::new();
    let exhaustive = [
        ("d2", corpus("d2")),
        ("w", corpus("w")),
        ("zero", corpus("zero")),
        ("sl2-F5", corpus("sl2-F5")),
        ("m2-F2", corpus("m2-F2")),
        ("ex1 mod 2", corpus("ex1").reduce_mod(2).unwrap()),
        ("sl2-Q mod 5", corpus("sl2-Q").reduce_mod(5).unwrap()),
    ];
    for (name, a) in &exhaustive {
        let c = classify_basis(a, CheckMode::Exhaustive).unwrap();
        let (w, s, i) = (c.weak.holds(), c.semi.holds(), c.i_division.holds());
        corpus_ok &= !(i && !s) && !(s && !w);
        seen.push((*name, w, s, i));
    }
    let lookup = |n: &str| seen.iter().find(|x| x.0 == n).map(|x| (x.1, x.2, x.3)).unwrap();
    let d2_strict = lookup("d2") == (true, true, false);
    let ex1_strict = lookup("ex1 mod 2") == (true, false, false);
    Outcome::new(
        violated == 0 && corpus_ok && d2_strict && ex1_strict,
        format!(
            "{fuzzed} fuzz instances with {violated} violations; {} corpus instances consistent: {corpus_ok}; \
             d2 semi not i: {d2_strict}; ex1 weak not semi: {ex1_strict}",
            exhaustive.len()
        ),
    )
}

fn main() {
    // Runner arguments such as filters are ignored; every criterion runs.
    let ceilings = Ceilings::default();
    let mut results: Vec<(&str, Outcome)> = Vec::new();
    results.push(("ex1 reproduction", criterion1()));

    let (runs, campaign_time) = campaigns(&ceilings);
    let instances: usize = runs.iter().map(|s| s.trials.len()).sum();
    let semisimple: usize = runs.iter().map(|s| s.count(|t| t.oracle_semisimple)).sum();
    let simple: usize = runs.iter().map(|s| s.count(|t| t.oracle_simple)).sum();

    let (fast60, time60) = within(campaign_time, Duration::from_secs(60));
    let mut c2 = property_outcome(
        &runs,
        Property::SemisimpleCharacterization,
        &ceilings,
        &format!(" ({semisimple} semisimple of {instances}); campaign {time60}"),
    );
    c2.pass &= fast60 && instances == 300;
    results.push(("semisimplicity characterization (differential)", c2));

    let every = property_outcome(&runs, Property::SimpleEveryBasisIDivision, &ceilings, "");
    let mut c3 = property_outcome(
        &runs,
        Property::SimpleCharacterization,
        &ceilings,
        &format!(
            " ({simple} simple); every-basis check: {}; campaign {time60}",
            every.detail
        ),
    );
    c3.pass &= every.pass && fast60;
    results.push(("simplicity characterization and every basis i-division", c3));

    results.push(("decomposition invariants", criterion4(&runs, &ceilings)));
    results.push((
        "blocks simple under semi-division basis",
        property_outcome(&runs, Property::BlocksSimple, &ceilings, ""),
    ));
    results.push((
        "level-1 class contained in ideal under weak-division basis",
        property_outcome(&runs, Property::Level1ClassInIdeal, &ceilings, ""),
    ));
    results.push((
        "constructed basis from simple ideals is semi-division",
        property_outcome(&runs, Property::ConstructedBasisSemiDivision, &ceilings, ""),
    ));
    results.push(("hierarchy i => semi => weak", criterion8(&runs)));

    let mut failed = 0;
    for (k, (name, o)) in results.iter().enumerate() {
        let mark = if o.pass { "PASS" } else { "FAIL" };
        println!("{mark} criterion {}: {name}: {}", k + 1, o.detail);
        failed += usize::from(!o.pass);
    }
    println!("acceptance: {} passed, {failed} failed", results.len() - failed);
    if failed > 0 {
        std::process::exit(1);
    }
}
