use std::fmt::Write as _;
use std::path::{Path, PathBuf};

use serde_json::{json, Value};

use pivotlab::gadgets::Side;
use pivotlab::model::{move_key, verify_steps};
use pivotlab::reductions::{
    reduce_maxcut_to_wis, reduce_mis_to_wis_pivot, reduce_swop_to_maxcircuit, DistanceMetric, MaxCutToWis,
    ReductionBundle, SwopToCircuit, Tightness,
};
use pivotlab::solvers::{
    circuit_output_bounded_solve, fpt_distinct_weights_solve, pivot_search_bounded, standard_local_search, Outcome,
    SolveReport, DEFAULT_STEP_BUDGET,
};
use pivotlab::verify::{check_l_tight, check_tight_reduction, ConditionOutcome};
use pivotlab::{build_transition_graph, LocalSearchProblem, PivotRule, Solution, DEFAULT_SOLUTION_BUDGET};

use crate::doc::{
    canonical, hash, parse_solution, rational_to_string, read, BundleManifest, InstanceDocument, Problem, SeedDoc,
    TightnessDoc, TraceDocument, TraceStep, VERSION,
};
use crate::{
    budget, CheckName, CliError, ExportArgs, MetricName, ReduceArgs, ReductionName, ReplayArgs, RuleName, SolveArgs,
    SolverName, VerifyArgs,
};

pub fn write_output(path: Option<&Path>, text: &str) -> Result<(), CliError> {
    match path {
        Some(p) => std::fs::write(p, text).map_err(|e| CliError::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            println!("{text}");
            Ok(())
        }
    }
}

fn with_suffix(prefix: &Path, suffix: &str) -> PathBuf {
    let mut name = prefix.file_name().map(|n| n.to_os_string()).unwrap_or_default();
    name.push(suffix);
    prefix.with_file_name(name)
}

fn tightness_doc(t: Tightness) -> TightnessDoc {
    match t {
        Tightness::Tight => TightnessDoc::Tight,
        Tightness::Bounded { ell, metric } => TightnessDoc::Bounded { ell, metric: metric_name(metric).into() },
    }
}

fn metric_name(m: DistanceMetric) -> &'static str {
    match m {
        DistanceMetric::Improving => "improving",
        DistanceMetric::Neighborhood => "neighborhood",
    }
}

enum Built {
    Maxcut(MaxCutToWis),
    Circuit(SwopToCircuit),
}

impl Built {
    fn bundle(&self) -> &dyn ReductionBundle {
        match self {
            Built::Maxcut(b) => b,
            Built::Circuit(b) => b,
        }
    }

    fn target_doc(&self) -> InstanceDocument {
        match self {
            Built::Maxcut(b) => InstanceDocument::from_swop(b.wis()),
            Built::Circuit(b) => InstanceDocument::from_circuit(b.circuit()),
        }
    }
}

fn build(reduction: ReductionName, source: &Problem) -> Result<Built, CliError> {
    match (reduction, source) {
        (ReductionName::MaxcutToWis, Problem::Maxcut(mc)) => Ok(Built::Maxcut(reduce_maxcut_to_wis(mc)?)),
        (ReductionName::SwopToCircuit, Problem::Swop(s)) => Ok(Built::Circuit(reduce_swop_to_maxcircuit(s)?)),
        (r, p) => Err(CliError::Usage(format!("{} does not accept {} documents", r.name(), p.kind()))),
    }
}

pub fn reduce(args: &ReduceArgs) -> Result<i32, CliError> {
    let source_doc: InstanceDocument = read(&args.input, "instance")?;
    let source = source_doc.to_problem()?;
    let target_path = with_suffix(&args.output, ".target.json");
    let manifest_path = with_suffix(&args.output, ".bundle.json");
    let target_file = target_path.file_name().expect("file name").to_string_lossy().into_owned();

    let (target_doc, manifest) = if args.reduction == ReductionName::MisToWisPivot {
        let Problem::Mis(mis) = &source else {
            return Err(CliError::Usage(format!("mis-to-wis-pivot does not accept {} documents", source.kind())));
        };
        let (Some(seed_path), Some(seed_bits)) = (&args.seed_instance, &args.seed_start) else {
            return Err(CliError::Usage("mis-to-wis-pivot needs --seed-instance and --seed-start".into()));
        };
        let seed_doc: InstanceDocument = read(seed_path, "seed instance")?;
        let Problem::Swop(seed) = seed_doc.to_problem()? else {
            return Err(CliError::Usage("the seed must be a swop document".into()));
        };
        let seed_start = parse_solution(seed_bits, seed.ground_size())?;
        let red = reduce_mis_to_wis_pivot(mis, seed.graph(), seed.vertex_weights(), &seed_start)?;
        let target_doc = InstanceDocument::from_swop(&red.target);
        let manifest = BundleManifest {
            version: VERSION,
            reduction: args.reduction.name().into(),
            source_hash: hash(&source_doc),
            source: source_doc,
            seed: Some(SeedDoc { instance: seed_doc, start: seed_start.to_bit_string() }),
            target_file,
            target_hash: hash(&target_doc),
            tightness: TightnessDoc::None,
            psi: json!({ "kind": "mis-vertices", "v_ids": red.v_ids }),
            r: json!({ "kind": "none" }),
            roles: Some(red.builder.roles().iter().map(ToString::to_string).collect()),
            start: Some(red.start.to_bit_string()),
        };
        (target_doc, manifest)
    } else {
        let built = build(args.reduction, &source)?;
        let target_doc = built.target_doc();
        let (psi, r, roles) = match &built {
            Built::Maxcut(b) => {
                let n = b.max_cut().vertex_count();
                let triples: Vec<[usize; 3]> = (0..n).map(|v| b.core().triple(v, Side::A)).collect();
                (
                    json!({ "kind": "a-triple-membership", "a_triples": triples, "selected_means": "side A" }),
                    json!({ "kind": "g-images", "count": 1u64 << n.min(63) }),
                    Some(b.roles().iter().map(ToString::to_string).collect()),
                )
            }
            Built::Circuit(b) => (
                json!({
                    "kind": "structured-decode",
                    "ground": b.swop().ground_size(),
                    "forms": ["uu00", "uv00", "uu10", "uw10", "vu11"],
                    "unstructured": "empty solution",
                }),
                json!({ "kind": "structured-strings" }),
                None,
            ),
        };
        let manifest = BundleManifest {
            version: VERSION,
            reduction: args.reduction.name().into(),
            source_hash: hash(&source_doc),
            source: source_doc,
            seed: None,
            target_file,
            target_hash: hash(&target_doc),
            tightness: tightness_doc(built.bundle().tightness()),
            psi,
            r,
            roles,
            start: None,
        };
        (target_doc, manifest)
    };
    write_output(Some(&target_path), &canonical(&target_doc))?;
    write_output(Some(&manifest_path), &canonical(&manifest))?;
    let size = target_doc.to_problem()?.local_search()?.ground_size();
    println!("{}: target {} ({size} ground elements)", args.reduction.name(), target_path.display());
    println!("manifest {}", manifest_path.display());
    Ok(0)
}

fn rule_of(args: &SolveArgs) -> PivotRule {
    match args.rule {
        RuleName::First => PivotRule::FirstImprovement,
        RuleName::Best => PivotRule::BestImprovement,
        RuleName::Random => PivotRule::Random { seed: args.seed },
    }
}

fn rule_label(rule: PivotRule) -> String {
    match rule {
        PivotRule::FirstImprovement => "first".into(),
        PivotRule::BestImprovement => "best".into(),
        PivotRule::Random { seed } => format!("random:{}:{seed}", PivotRule::RANDOM_ALGORITHM),
    }
}

fn solver_label(s: SolverName) -> &'static str {
    match s {
        SolverName::Standard => "standard",
        SolverName::PivotBounded => "pivot-bounded",
        SolverName::FptDistinctWeights => "fpt-distinct-weights",
        SolverName::OutputBounded => "output-bounded",
    }
}

fn trace_document(
    inst: &dyn LocalSearchProblem,
    instance_hash: String,
    solver: &str,
    rule: &str,
    report: &SolveReport,
) -> TraceDocument {
    let steps = report.sequence.steps();
    TraceDocument {
        version: VERSION,
        instance_hash,
        solver: solver.into(),
        rule: rule.into(),
        start: steps[0].to_bit_string(),
        start_objective: rational_to_string(&inst.objective(&steps[0])),
        steps: steps
            .windows(2)
            .map(|w| TraceStep {
                toggled: move_key(&w[0], &w[1]),
                solution: w[1].to_bit_string(),
                objective: rational_to_string(&inst.objective(&w[1])),
            })
            .collect(),
        outcome: report.outcome.name().into(),
    }
}

fn table(inst: &dyn LocalSearchProblem, report: &SolveReport) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "{:>6}  {:<16}  objective", "step", "move");
    let steps = report.sequence.steps();
    for (i, s) in steps.iter().enumerate() {
        let mv = if i == 0 {
            "-".to_string()
        } else {
            move_key(&steps[i - 1], s)
                .iter()
                .map(|&k| format!("{}{k}", if s.get(k) { '+' } else { '-' }))
                .collect::<Vec<_>>()
                .join(" ")
        };
        let _ = writeln!(out, "{i:>6}  {mv:<16}  {}", inst.objective(s));
    }
    let _ = write!(out, "outcome: {} after {} moves", report.outcome.name(), report.steps());
    out
}

pub fn solve(args: &SolveArgs) -> Result<i32, CliError> {
    let doc: InstanceDocument = read(&args.instance, "instance")?;
    let problem = doc.to_problem()?;
    let inst = problem.local_search()?;
    let start = parse_solution(&args.start, inst.ground_size())?;
    inst.certify(&start)?;
    let rule = rule_of(args);
    let report = match args.solver {
        SolverName::Standard => standard_local_search(inst, &start, rule, budget(args.budget, DEFAULT_STEP_BUDGET)?)?,
        SolverName::PivotBounded => {
            let depth = args.depth.ok_or_else(|| CliError::Usage("pivot-bounded needs --depth".into()))?;
            pivot_search_bounded(inst, &start, depth)?
        }
        SolverName::FptDistinctWeights => match &problem {
            Problem::Swop(s) => fpt_distinct_weights_solve(s, &start, rule)?.report,
            _ => return Err(CliError::Usage("fpt-distinct-weights needs a swop document".into())),
        },
        SolverName::OutputBounded => match &problem {
            Problem::Circuit(c) => circuit_output_bounded_solve(c, &start, rule)?,
            _ => return Err(CliError::Usage("output-bounded needs a circuit document".into())),
        },
    };
    println!("{}", table(inst, &report));
    if let Some(path) = &args.trace {
        let trace = trace_document(inst, hash(&doc), solver_label(args.solver), &rule_label(rule), &report);
        write_output(Some(path), &canonical(&trace))?;
    }
    Ok(match report.outcome {
        Outcome::LocalOptimumFound => 0,
        Outcome::BudgetExhausted => 2,
        Outcome::PromiseViolated => 3,
    })
}

pub fn replay(args: &ReplayArgs) -> Result<i32, CliError> {
    let doc: InstanceDocument = read(&args.instance, "instance")?;
    let trace: TraceDocument = read(&args.trace, "trace")?;
    if trace.instance_hash != hash(&doc) {
        return Err(CliError::Verification("trace was recorded on a different instance".into()));
    }
    let problem = doc.to_problem()?;
    let inst = problem.local_search()?;
    let mut steps = vec![parse_solution(&trace.start, inst.ground_size())?];
    for (i, step) in trace.steps.iter().enumerate() {
        let s = parse_solution(&step.solution, inst.ground_size())?;
        if move_key(&steps[i], &s) != step.toggled {
            return Err(CliError::Verification(format!("step {} records the wrong move", i + 1)));
        }
        if inst.certify(&s).is_ok() && rational_to_string(&inst.objective(&s)) != step.objective {
            return Err(CliError::Verification(format!("step {} records the wrong objective", i + 1)));
        }
        steps.push(s);
    }
    let maximal = trace.outcome == Outcome::LocalOptimumFound.name();
    verify_steps(inst, &steps, maximal).map_err(|v| CliError::Verification(format!("trace rejected: {v}")))?;
    println!("trace ok: {} moves", trace.steps.len());
    Ok(0)
}

fn load_bundle(path: &Path) -> Result<(BundleManifest, Built, InstanceDocument), CliError> {
    let manifest: BundleManifest = read(path, "bundle manifest")?;
    let reduction = match manifest.reduction.as_str() {
        "maxcut-to-wis" => ReductionName::MaxcutToWis,
        "swop-to-circuit" => ReductionName::SwopToCircuit,
        other => return Err(CliError::Usage(format!("bundle kind {other} has no tightness checks"))),
    };
    let target_path = path.parent().unwrap_or(Path::new(".")).join(&manifest.target_file);
    let target_doc: InstanceDocument = read(&target_path, "target instance")?;
    let built = build(reduction, &manifest.source.to_problem()?)?;
    let rebuilt = hash(&built.target_doc());
    if hash(&target_doc) != manifest.target_hash || rebuilt != manifest.target_hash {
        return Err(CliError::Verification("target file does not match the recorded reduction".into()));
    }
    Ok((manifest, built, target_doc))
}

fn outcome_json(o: &ConditionOutcome) -> Value {
    match o {
        ConditionOutcome::Pass => json!({ "status": "pass" }),
        ConditionOutcome::Fail { witness, detail } => json!({
            "status": "fail",
            "detail": detail,
            "witness": witness.iter().map(Solution::to_bit_string).collect::<Vec<_>>(),
        }),
    }
}

pub fn verify(args: &VerifyArgs) -> Result<i32, CliError> {
    let (manifest, built, _) = load_bundle(&args.bundle)?;
    let bundle = built.bundle();
    let limit = budget(args.budget, DEFAULT_SOLUTION_BUDGET)?;
    let mut report = serde_json::Map::new();
    report.insert("version".into(), json!(VERSION));
    report.insert("bundle_hash".into(), json!(hash(&manifest)));
    report.insert("budget".into(), json!(limit));
    let mut passed = true;
    for check in &args.checks {
        match check {
            CheckName::Tight => {
                let r = check_tight_reduction(bundle, limit)?;
                passed &= r.passed();
                report.insert(
                    "tight".into(),
                    json!({
                        "passed": r.passed(),
                        "condition1": outcome_json(&r.condition1),
                        "condition2": outcome_json(&r.condition2),
                        "condition3": outcome_json(&r.condition3),
                        "source_solutions": r.source_solutions,
                        "optimum_candidates": r.optimum_candidates,
                        "r_size": r.r_size,
                        "nodes_explored": r.nodes_explored,
                    }),
                );
            }
            CheckName::LTight => {
                let (declared_ell, declared_metric) = match bundle.tightness() {
                    Tightness::Bounded { ell, metric } => (Some(ell), metric),
                    Tightness::Tight => (None, DistanceMetric::Improving),
                };
                let ell = args
                    .ell
                    .or(declared_ell)
                    .ok_or_else(|| CliError::Usage("the bundle declares no distance bound; pass --ell".into()))?;
                let metric = match args.metric {
                    Some(MetricName::Improving) => DistanceMetric::Improving,
                    Some(MetricName::Neighborhood) => DistanceMetric::Neighborhood,
                    None => declared_metric,
                };
                let r = check_l_tight(bundle, ell, metric, limit)?;
                passed &= r.passed();
                report.insert(
                    "l_tight".into(),
                    json!({
                        "passed": r.passed(),
                        "ell": r.ell,
                        "metric": metric_name(r.metric),
                        "outcome": outcome_json(&r.outcome),
                        "pairs_checked": r.pairs_checked,
                        "worst": r.worst,
                    }),
                );
            }
        }
    }
    report.insert("passed".into(), json!(passed));
    let text = serde_json::to_string(&Value::Object(report)).expect("report serializes");
    write_output(args.output.as_deref(), &text)?;
    Ok(if passed { 0 } else { 4 })
}

fn dot_escape(s: &str) -> String {
    s.replace('\\', "\\\\").replace('"', "\\\"")
}

pub fn export_dot(args: &ExportArgs) -> Result<i32, CliError> {
    let limit = budget(args.budget, DEFAULT_SOLUTION_BUDGET)?;
    let (problem, built) = match (&args.instance, &args.bundle) {
        (Some(path), _) => {
            let doc: InstanceDocument = read(path, "instance")?;
            (Some(doc.to_problem()?), None)
        }
        (None, Some(path)) => (None, Some(load_bundle(path)?.1)),
        (None, None) => return Err(CliError::Usage("pass --instance or --bundle".into())),
    };
    let inst: &dyn LocalSearchProblem = match (&problem, &built) {
        (Some(p), _) => p.local_search()?,
        (None, Some(b)) => b.bundle().target(),
        (None, None) => unreachable!("one source is always set"),
    };
    let tg = build_transition_graph(inst, limit)?;
    let mut out = String::from("digraph transitions {\n  node [shape=circle];\n");
    for (i, s) in tg.nodes().iter().enumerate() {
        let mut attrs = vec![format!("label=\"{}\\n{}\"", s, dot_escape(&tg.objective(i).to_string()))];
        if tg.is_sink(i) {
            attrs.push("shape=doublecircle".into());
        }
        if built.as_ref().is_some_and(|b| b.bundle().r_member(s)) {
            attrs.push("style=filled".into());
            attrs.push("fillcolor=lightgray".into());
        }
        let _ = writeln!(out, "  n{i} [{}];", attrs.join(", "));
    }
    for (a, b) in tg.edges() {
        let _ = writeln!(out, "  n{a} -> n{b};");
    }
    out.push('}');
    write_output(args.output.as_deref(), &out)?;
    Ok(0)
}
