use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{bail, Context, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde_json::{json, Value};

use aop_core::io::{
    export_dot, read_formula, read_instance, read_witness, write_artifact, write_formula,
    write_instance, write_witness, InstanceExtras, LoadedInstance, ReadOptions,
};
use aop_core::p3sat::{generate, search_unsatisfiable, PlanarFormula, DEFAULT_SAT_BUDGET};
use aop_core::pdgraph::{is_acyclic, is_t_odd_on, Orientation, OrientationProblem};
use aop_core::reduction::{
    assemble, base_gadget_instance, clause_completions, clause_gadget_instance, structural_check,
    variable_gadget_instance, verify_equivalence, EquivalenceError, GadgetInstance, GadgetRegistry,
};
use aop_core::solver::{
    apex_candidates, decide_with, enumerate_with_limit, normalize_empty_t, ApexReading, SearchBudget, SolveStatus,
    DEFAULT_ENUMERATION_LIMIT, DEFAULT_SEARCH_NODES,
};

const FEASIBLE: u8 = 0;
const INFEASIBLE: u8 = 1;
const ABORTED: u8 = 2;

#[derive(Parser)]
#[command(name = "aop", version, about = "Acyclic parity-constrained orientations and planar 3-SAT reductions")]
struct Cli {
    /// Machine-readable report on stdout.
    #[arg(long, global = true)]
    json: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Clone, Copy)]
struct Budgets {
    /// Maximum branching decisions for the search solver.
    #[arg(long, default_value_t = DEFAULT_SEARCH_NODES, value_parser = clap::value_parser!(u64).range(1..))]
    budget: u64,
}

impl Budgets {
    fn search(&self) -> SearchBudget {
        SearchBudget { max_decisions: self.budget }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether an instance has an acyclic T-odd orientation.
    Solve {
        instance: PathBuf,
        /// Write the witness here when feasible.
        #[arg(long)]
        witness: Option<PathBuf>,
        /// Validate this witness instead of solving.
        #[arg(long, conflicts_with = "witness")]
        check_witness: Option<PathBuf>,
        /// Merge repeated undirected edges by parity.
        #[arg(long)]
        normalize_multi: bool,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Build the orientation instance of a planar formula.
    Reduce {
        formula: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Check that a formula is satisfiable exactly when its instance is feasible.
    Verify {
        /// Formula file; omit with --batch.
        #[arg(required_unless_present = "batch")]
        formula: Option<PathBuf>,
        /// Generate formulas instead of reading one.
        #[arg(long, requires = "seed")]
        batch: bool,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long, default_value_t = 100)]
        count: usize,
        #[arg(long, default_value_t = 4)]
        vars: usize,
        #[arg(long, default_value_t = 4)]
        clauses: usize,
        /// Largest variable count the brute-force SAT check accepts.
        #[arg(long, default_value_t = DEFAULT_SAT_BUDGET)]
        sat_budget: usize,
        #[command(flatten)]
        budgets: Budgets,
    },
    /// Enumerate the orientations of a single gadget.
    Gadget {
        #[command(subcommand)]
        kind: GadgetKind,
        /// Write the gadget instance here.
        #[arg(short, long, global = true)]
        output: Option<PathBuf>,
        /// Largest number of free edges to enumerate over.
        #[arg(long, global = true, default_value_t = DEFAULT_ENUMERATION_LIMIT)]
        enum_limit: u32,
    },
    /// Generate a random planar formula.
    Gen {
        #[arg(long)]
        seed: u64,
        #[arg(long)]
        vars: usize,
        #[arg(long)]
        clauses: usize,
        /// Search clause polarities for an unsatisfiable formula.
        #[arg(long)]
        unsatisfiable: bool,
        /// Spine layouts to try with --unsatisfiable.
        #[arg(long, default_value_t = 40)]
        layouts: usize,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Render an instance as Graphviz.
    ExportDot {
        instance: PathBuf,
        #[arg(long)]
        witness: Option<PathBuf>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Rewrite an instance into an equivalent one with an empty odd set.
    Normalize {
        instance: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        /// A witness of the normalized instance to map back.
        #[arg(long, requires = "witness_out")]
        map_witness: Option<PathBuf>,
        /// Where to write the mapped-back witness.
        #[arg(long)]
        witness_out: Option<PathBuf>,
    },
    /// Apply the apex transform to an undirected instance and solve it.
    Apex {
        instance: PathBuf,
        #[arg(long, value_enum, default_value_t = ApexVariant::NewApex)]
        variant: ApexVariant,
        /// Write the transformed instance (first candidate) here.
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[command(flatten)]
        budgets: Budgets,
    },
}

#[derive(Subcommand)]
enum GadgetKind {
    Base,
    Variable {
        #[arg(long, default_value_t = 2, value_parser = clap::value_parser!(u64).range(1..))]
        degree: u64,
    },
    Clause {
        /// Literal signs at the three ports, e.g. "+-+".
        #[arg(long, default_value = "+++")]
        polarities: String,
        /// Number of ports pointing into the hexagon (0 to 3); all classes when omitted.
        #[arg(long, value_parser = clap::value_parser!(u8).range(0..=3))]
        class: Option<u8>,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ApexVariant {
    NewApex,
    EachVertex,
}

impl From<ApexVariant> for ApexReading {
    fn from(v: ApexVariant) -> Self {
        match v {
            ApexVariant::NewApex => ApexReading::NewApex,
            ApexVariant::EachVertex => ApexReading::EachOriginalVertex,
        }
    }
}

fn read_text(path: &Path) -> Result<String> {
    fs::read_to_string(path).with_context(|| format!("cannot read {}", path.display()))
}

fn write_text(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).with_context(|| format!("cannot write {}", path.display()))
}

fn emit(path: Option<&Path>, text: &str) -> Result<()> {
    match path {
        Some(p) => write_text(p, text),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn load_instance(path: &Path, normalize_multi: bool) -> Result<LoadedInstance> {
    let text = read_text(path)?;
    read_instance(&text, ReadOptions { normalize_multi }).with_context(|| format!("invalid instance {}", path.display()))
}

fn load_planar(path: &Path) -> Result<PlanarFormula> {
    let text = read_text(path)?;
    let file = read_formula(&text).with_context(|| format!("invalid formula {}", path.display()))?;
    Ok(file.planar()?)
}

fn witness_valid(problem: &OrientationProblem, o: &Orientation) -> bool {
    is_acyclic(o.arcs()).is_acyclic() && is_t_odd_on(problem, o, problem.graph().vertices())
}

fn report(json_mode: bool, value: Value, text: impl FnOnce() -> String) {
    if json_mode {
        println!("{value}");
    } else {
        println!("{}", text());
    }
}

fn status_code(status: &SolveStatus) -> u8 {
    match status {
        SolveStatus::Feasible(_) => FEASIBLE,
        SolveStatus::Infeasible(_) => INFEASIBLE,
        SolveStatus::Aborted { .. } => ABORTED,
    }
}

fn status_text(status: &SolveStatus) -> String {
    match status {
        SolveStatus::Feasible(_) => "feasible".into(),
        SolveStatus::Infeasible(why) => format!("infeasible ({why})"),
        SolveStatus::Aborted { budget } => format!("aborted after {budget} decisions"),
    }
}

fn cmd_solve(
    json_mode: bool,
    path: &Path,
    witness: Option<&Path>,
    check: Option<&Path>,
    normalize_multi: bool,
    budgets: Budgets,
) -> Result<u8> {
    let loaded = load_instance(path, normalize_multi)?;
    let problem = &loaded.problem;
    if let Some(check) = check {
        let o = read_witness(&read_text(check)?, problem.graph())
            .with_context(|| format!("invalid witness {}", check.display()))?;
        let acyclic = is_acyclic(o.arcs()).is_acyclic();
        let parity = is_t_odd_on(problem, &o, problem.graph().vertices());
        report(json_mode, json!({"valid": acyclic && parity, "acyclic": acyclic, "parity": parity}), || {
            match (acyclic, parity) {
                (true, true) => "valid witness".into(),
                (false, _) => "invalid witness: cyclic".into(),
                (true, false) => "invalid witness: parity".into(),
            }
        });
        return Ok(if acyclic && parity { FEASIBLE } else { INFEASIBLE });
    }
    let result = decide_with(problem, &budgets.search());
    if let (Some(path), Some(o)) = (witness, result.status.witness()) {
        write_text(path, &write_witness(o))?;
    }
    let stats = &result.stats;
    report(
        json_mode,
        json!({
            "status": match &result.status {
                SolveStatus::Feasible(_) => "feasible",
                SolveStatus::Infeasible(_) => "infeasible",
                SolveStatus::Aborted { .. } => "aborted",
            },
            "reason": match &result.status {
                SolveStatus::Infeasible(why) => Value::from(why.to_string()),
                _ => Value::Null,
            },
            "method": result.method.to_string(),
            "vertices": problem.graph().vertex_count(),
            "links": problem.graph().link_count(),
            "decisions": stats.decisions,
            "propagations": stats.propagations,
            "enumerated": stats.enumerated,
        }),
        || {
            format!(
                "{}\nmethod {}, {} vertices, {} links, {} decisions, {} propagations",
                status_text(&result.status),
                result.method,
                problem.graph().vertex_count(),
                problem.graph().link_count(),
                stats.decisions,
                stats.propagations,
            )
        },
    );
    Ok(status_code(&result.status))
}

fn cmd_reduce(json_mode: bool, formula: &Path, output: &Path) -> Result<u8> {
    let source = load_planar(formula)?;
    let artifact = assemble(&source);
    write_text(output, &write_artifact(&artifact))?;
    let check = structural_check(&artifact);
    let g = artifact.problem.graph();
    report(
        json_mode,
        json!({
            "vertices": g.vertex_count(),
            "edges": g.edges().len(),
            "arcs": g.arcs().len(),
            "odd": artifact.problem.odd_set().len(),
            "passed": check.passed(),
            "failures": check.failures(),
        }),
        || {
            format!(
                "{} vertices, {} edges, {} arcs, {} odd\n{check}",
                g.vertex_count(),
                g.edges().len(),
                g.arcs().len(),
                artifact.problem.odd_set().len()
            )
        },
    );
    Ok(if check.passed() { 0 } else { 1 })
}

fn verify_one(source: &PlanarFormula, sat_budget: usize, budgets: Budgets) -> Result<Value, EquivalenceError> {
    let r = verify_equivalence(source, sat_budget, &budgets.search())?;
    Ok(json!({
        "satisfiable": r.sat,
        "feasible": r.orientation_feasible,
        "agree": r.agree,
        "constructive_ok": r.constructive_ok,
        "extracted_ok": r.extracted_ok,
        "ok": r.all_ok(),
    }))
}

#[allow(clippy::too_many_arguments)]
fn cmd_verify(
    json_mode: bool,
    formula: Option<&Path>,
    seed: Option<u64>,
    count: usize,
    vars: usize,
    clauses: usize,
    sat_budget: usize,
    budgets: Budgets,
) -> Result<u8> {
    if let Some(path) = formula {
        let source = load_planar(path)?;
        let r = match verify_one(&source, sat_budget, budgets) {
            Ok(r) => r,
            Err(e @ (EquivalenceError::Sat(_) | EquivalenceError::SolverAborted { .. })) => {
                eprintln!("aborted: {e}");
                return Ok(ABORTED);
            }
            Err(e) => return Err(e.into()),
        };
        let ok = r["ok"] == true;
        report(json_mode, r.clone(), || {
            let side = |b: &Value| if *b == true { "yes" } else { "no" };
            format!(
                "{}: satisfiable {}, feasible {}",
                if ok { "agree" } else { "DISAGREE" },
                side(&r["satisfiable"]),
                side(&r["feasible"])
            )
        });
        return Ok(if ok { 0 } else { 1 });
    }
    let seed = seed.expect("clap requires --seed with --batch");
    let mut formulas = Vec::with_capacity(count);
    let mut next = seed;
    let mut misses = 0;
    while formulas.len() < count {
        match generate(next, vars, clauses) {
            Ok(f) => formulas.push(f),
            Err(e) => {
                misses += 1;
                if misses > 10 * count.max(10) {
                    bail!("generator keeps failing: {e}");
                }
            }
        }
        next = next.wrapping_add(1);
    }
    let results: Vec<Result<Value, EquivalenceError>> =
        formulas.par_iter().map(|f| verify_one(f, sat_budget, budgets)).collect();
    let mut agree = 0;
    let mut aborted = 0;
    let mut satisfiable = 0;
    for r in &results {
        match r {
            Ok(v) => {
                agree += usize::from(v["ok"] == true);
                satisfiable += usize::from(v["satisfiable"] == true);
            }
            Err(EquivalenceError::Reduction(e)) => bail!("reduction failed: {e}"),
            Err(_) => aborted += 1,
        }
    }
    report(
        json_mode,
        json!({"count": count, "agree": agree, "aborted": aborted, "satisfiable": satisfiable}),
        || {
            let mut line = format!("{agree}/{count} agree ({satisfiable} satisfiable)");
            if aborted > 0 {
                line.push_str(&format!(", {aborted} aborted"));
            }
            line
        },
    );
    Ok(if aborted > 0 {
        ABORTED
    } else if agree == count {
        0
    } else {
        1
    })
}

fn gadget_extras(g: &GadgetInstance) -> InstanceExtras {
    InstanceExtras {
        rotation: Some(g.rotation.clone()),
        labels: g.registry.iter().map(|(v, l)| (v, l.to_string())).collect(),
        source: None,
    }
}

fn parse_polarities(text: &str) -> Result<[bool; 3]> {
    let signs: Vec<bool> = text
        .chars()
        .map(|c| match c {
            '+' => Ok(true),
            '-' => Ok(false),
            _ => bail!("polarities use '+' and '-', got {c:?}"),
        })
        .collect::<Result<_>>()?;
    match signs[..] {
        [a, b, c] => Ok([a, b, c]),
        _ => bail!("need exactly three polarities, got {}", signs.len()),
    }
}

fn cmd_gadget(json_mode: bool, kind: &GadgetKind, output: Option<&Path>, enum_limit: u32) -> Result<u8> {
    let (gadget, value, text) = match kind {
        GadgetKind::Base | GadgetKind::Variable { .. } => {
            let (g, name) = match kind {
                GadgetKind::Base => (base_gadget_instance(), "base gadget".to_string()),
                GadgetKind::Variable { degree } => {
                    (variable_gadget_instance(*degree as usize), format!("variable gadget of degree {degree}"))
                }
                GadgetKind::Clause { .. } => unreachable!(),
            };
            let r = enumerate_with_limit(&g.problem, &g.scope, 2, enum_limit)?;
            let uniform = r
                .witnesses
                .iter()
                .map(|o| aop_core::pdgraph::boundary(g.problem.graph(), &g.scope, Some(o)).map(|b| b.is_uniform()))
                .collect::<Result<Vec<_>, _>>()?;
            let all_uniform = !uniform.is_empty() && uniform.iter().all(|&u| u);
            let value = json!({
                "gadget": name,
                "orientations": r.total_valid,
                "explored": r.explored,
                "boundaries_uniform": all_uniform,
            });
            let text = if matches!(kind, GadgetKind::Base) {
                format!("{name}: {} acyclic T-odd orientations ({} explored)", r.total_valid, r.explored)
            } else {
                format!(
                    "{name}: {}, boundaries {} ({} explored)",
                    r.total_valid,
                    if all_uniform { "uniform" } else { "not uniform" },
                    r.explored
                )
            };
            (g, value, text)
        }
        GadgetKind::Clause { polarities, class } => {
            let g = clause_gadget_instance(parse_polarities(polarities)?);
            let classes: Vec<usize> = match class {
                Some(c) => vec![*c as usize],
                None => (0..=3).collect(),
            };
            let mut rows = Vec::new();
            let mut lines = Vec::new();
            for c in classes {
                let completions = clause_completions(c);
                let cyclic = completions.iter().filter(|x| x.cyclic).count();
                let verdict = match cyclic {
                    0 => "both acyclic".to_string(),
                    n if n == completions.len() => "both cyclic".to_string(),
                    n => format!("{n} cyclic"),
                };
                lines.push(format!("class a{c}: {} completions, {verdict}", completions.len()));
                rows.push(json!({"class": c, "completions": completions.len(), "cyclic": cyclic}));
            }
            (g, json!({"gadget": "clause", "polarities": polarities, "classes": rows}), lines.join("\n"))
        }
    };
    if let Some(path) = output {
        write_text(path, &write_instance(&gadget.problem, &gadget_extras(&gadget)))?;
    }
    report(json_mode, value, || text);
    Ok(0)
}

fn cmd_gen(
    json_mode: bool,
    seed: u64,
    (vars, clauses): (usize, usize),
    unsatisfiable: Option<usize>,
    output: Option<&Path>,
) -> Result<u8> {
    let f = match unsatisfiable {
        None => generate(seed, vars, clauses)?,
        Some(layouts) => match search_unsatisfiable(seed, vars, clauses, layouts)? {
            Some(f) => f,
            None => bail!("no unsatisfiable formula found in {layouts} layouts"),
        },
    };
    let text = write_formula(f.formula(), Some(f.rotation()));
    match output {
        Some(path) => {
            write_text(path, &text)?;
            report(json_mode, json!({"variables": vars, "clauses": clauses, "path": path}), || {
                format!("wrote {vars} variables, {clauses} clauses to {}", path.display())
            });
        }
        None => print!("{text}"),
    }
    Ok(0)
}

/// Labels from an artifact or gadget file, if they all parse.
fn registry_of(loaded: &LoadedInstance) -> Option<GadgetRegistry> {
    if loaded.extras.labels.is_empty() {
        return None;
    }
    let pairs: Option<Vec<_>> = loaded.extras.labels.iter().map(|(&v, l)| Some((v, l.parse().ok()?))).collect();
    GadgetRegistry::from_pairs(pairs?).ok()
}

fn cmd_export_dot(instance: &Path, witness: Option<&Path>, output: Option<&Path>) -> Result<u8> {
    let loaded = load_instance(instance, false)?;
    let orientation = match witness {
        Some(w) => Some(read_witness(&read_text(w)?, loaded.problem.graph())?),
        None => None,
    };
    let registry = registry_of(&loaded);
    emit(output, &export_dot(&loaded.problem, orientation.as_ref(), registry.as_ref()))?;
    Ok(0)
}

fn cmd_normalize(
    json_mode: bool,
    instance: &Path,
    output: Option<&Path>,
    map_witness: Option<&Path>,
    witness_out: Option<&Path>,
) -> Result<u8> {
    let loaded = load_instance(instance, false)?;
    let (normalized, map) = normalize_empty_t(&loaded.problem)?;
    let text = write_instance(&normalized, &InstanceExtras::default());
    match output {
        Some(path) => write_text(path, &text)?,
        None if map_witness.is_none() => {
            print!("{text}");
            return Ok(0);
        }
        None => {}
    }
    let mut mapped = None;
    if let (Some(w), Some(out)) = (map_witness, witness_out) {
        let o = read_witness(&read_text(w)?, normalized.graph())?;
        let back = map.back_map(&o)?;
        let valid = witness_valid(&loaded.problem, &back);
        write_text(out, &write_witness(&back))?;
        mapped = Some(valid);
    }
    report(
        json_mode,
        json!({
            "contracted": map.steps().len(),
            "vertices": normalized.graph().vertex_count(),
            "links": normalized.graph().link_count(),
            "witness_valid": mapped,
        }),
        || {
            let mut s = format!(
                "contracted {} vertices; {} vertices and {} links remain, odd set empty",
                map.steps().len(),
                normalized.graph().vertex_count(),
                normalized.graph().link_count()
            );
            if let Some(valid) = mapped {
                s.push_str(if valid { "\nmapped witness valid" } else { "\nmapped witness INVALID" });
            }
            s
        },
    );
    Ok(match mapped {
        Some(false) => 1,
        _ => 0,
    })
}

fn cmd_apex(
    json_mode: bool,
    instance: &Path,
    variant: ApexVariant,
    output: Option<&Path>,
    budgets: Budgets,
) -> Result<u8> {
    let loaded = load_instance(instance, false)?;
    let candidates = apex_candidates(&loaded.problem, variant.into())?;
    if let (Some(path), Some(first)) = (output, candidates.first()) {
        write_text(path, &write_instance(first, &InstanceExtras::default()))?;
    }
    let mut feasible = false;
    let mut aborted = false;
    for c in &candidates {
        match decide_with(c, &budgets.search()).status {
            SolveStatus::Feasible(_) => {
                feasible = true;
                break;
            }
            SolveStatus::Aborted { .. } => aborted = true,
            SolveStatus::Infeasible(_) => {}
        }
    }
    let code = if feasible {
        FEASIBLE
    } else if aborted {
        ABORTED
    } else {
        INFEASIBLE
    };
    report(json_mode, json!({"candidates": candidates.len(), "feasible": feasible, "aborted": !feasible && aborted}), || {
        let verdict = match code {
            FEASIBLE => "feasible",
            INFEASIBLE => "infeasible",
            _ => "aborted",
        };
        format!("{verdict} ({} candidate instances)", candidates.len())
    });
    Ok(code)
}

fn run(cli: Cli) -> Result<u8> {
    let j = cli.json;
    match &cli.command {
        Command::Solve { instance, witness, check_witness, normalize_multi, budgets } => {
            cmd_solve(j, instance, witness.as_deref(), check_witness.as_deref(), *normalize_multi, *budgets)
        }
        Command::Reduce { formula, output } => cmd_reduce(j, formula, output),
        Command::Verify { formula, batch: _, seed, count, vars, clauses, sat_budget, budgets } => {
            cmd_verify(j, formula.as_deref(), *seed, *count, *vars, *clauses, *sat_budget, *budgets)
        }
        Command::Gadget { kind, output, enum_limit } => cmd_gadget(j, kind, output.as_deref(), *enum_limit),
        Command::Gen { seed, vars, clauses, unsatisfiable, layouts, output } => {
            let unsat = unsatisfiable.then_some(*layouts);
            cmd_gen(j, *seed, (*vars, *clauses), unsat, output.as_deref())
        }
        Command::ExportDot { instance, witness, output } => {
            cmd_export_dot(instance, witness.as_deref(), output.as_deref())
        }
        Command::Normalize { instance, output, map_witness, witness_out } => {
            cmd_normalize(j, instance, output.as_deref(), map_witness.as_deref(), witness_out.as_deref())
        }
        Command::Apex { instance, variant, output, budgets } => {
            cmd_apex(j, instance, *variant, output.as_deref(), *budgets)
        }
    }
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(ABORTED)
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polarities_parse() {
        assert_eq!(parse_polarities("+-+").unwrap(), [true, false, true]);
        assert!(parse_polarities("++").is_err());
        assert!(parse_polarities("+x+").is_err());
    }

    #[test]
    fn cli_definition_is_consistent() {
        use clap::CommandFactory;
        Cli::command().debug_assert();
    }
}
