//! Acceptance checks. Prints one PASS/FAIL line per criterion and exits
//! non-zero if any fails. Every count below is compared exactly.

mod common;

use std::collections::BTreeSet;
use std::process::ExitCode;
use std::time::Instant;

use aop_core::fixtures::five_variable_instance;
use aop_core::io::{export_dot, write_artifact, write_formula, write_instance, write_witness, InstanceExtras};
use aop_core::p3sat::{generate, search_unsatisfiable, DEFAULT_SAT_BUDGET};
use aop_core::pdgraph::{boundary, is_acyclic, is_t_odd_on, Arc, Orientation};
use aop_core::reduction::{
    assemble, base_gadget_instance, clause_completions, clause_gadget_instance, structural_check, variable_gadget_instance,
    verify_equivalence, GadgetInstance,
};
use aop_core::solver::{
    apex_candidates, decide, enumerate, normalize_empty_t, solve_degree_two, solve_exact, solve_tree, ApexReading,
    SearchBudget,
};
use common::{all_vertices, oracle_count, random_degree_two, random_forest, random_problem};
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

type Outcome = Result<String, String>;
/// Name, check and time limit in seconds.
type Criterion = (&'static str, fn() -> Outcome, f64);

fn ensure(cond: bool, msg: impl FnOnce() -> String) -> Result<(), String> {
    if cond {
        Ok(())
    } else {
        Err(msg())
    }
}

/// Enumerates a gadget with leaves and checks there are exactly two valid
/// orientations whose boundary arcs are reverses of each other.
fn two_opposite(g: &GadgetInstance, free_edges: u32, uniform: bool) -> Result<(), String> {
    let k = g.problem.graph().edges().len() as u32;
    ensure(k == free_edges, || format!("expected {free_edges} free edges, found {k}"))?;
    let r = enumerate(&g.problem, &g.scope, 4).map_err(|e| e.to_string())?;
    ensure(r.explored == 1 << free_edges, || format!("explored {}", r.explored))?;
    ensure(r.total_valid == 2, || format!("{} valid orientations", r.total_valid))?;
    let views: Vec<_> = r
        .witnesses
        .iter()
        .map(|o| boundary(g.problem.graph(), &g.scope, Some(o)).map_err(|e| e.to_string()))
        .collect::<Result<_, _>>()?;
    let reversed: BTreeSet<Arc> = views[1].out_arcs.iter().chain(&views[1].in_arcs).map(Arc::reversed).collect();
    let first: BTreeSet<Arc> = views[0].out_arcs.iter().chain(&views[0].in_arcs).copied().collect();
    ensure(first == reversed, || "boundaries are not opposite".into())?;
    ensure(first.len() == g.boundary.len(), || "boundary size mismatch".into())?;
    if uniform {
        ensure(views.iter().all(|v| v.is_uniform()), || "boundary not uniform".into())?;
    }
    Ok(())
}

fn base_gadget() -> Outcome {
    let g = base_gadget_instance();
    two_opposite(&g, 12, false)?;
    Ok("2 of 2^12 orientations, boundaries opposite".into())
}

fn variable_gadget() -> Outcome {
    two_opposite(&variable_gadget_instance(1), 11, true)?;
    two_opposite(&variable_gadget_instance(2), 22, true)?;
    Ok("d=1: 2 of 2^11, d=2: 2 of 2^22, uniform and opposite".into())
}

/// Sweeps the 2^12 directions of the hexagon and port edges of a clause
/// gadget. Each leaf edge then takes the direction its port's parity
/// demands. Orientations are grouped by which ports point inward.
fn clause_gadget() -> Outcome {
    let mut checked = 0;
    for polarity in 0..8u32 {
        let g = clause_gadget_instance([polarity & 1 == 1, polarity & 2 == 2, polarity & 4 == 4]);
        let graph = g.problem.graph();
        let ports = g.registry.clause_ports(0).unwrap();
        let inner: Vec<_> = graph.edges().iter().copied().filter(|e| g.scope.contains(&e.lo()) && g.scope.contains(&e.hi())).collect();
        ensure(inner.len() == 12, || format!("{} inner edges", inner.len()))?;
        let mut by_pattern: std::collections::BTreeMap<[bool; 3], (u32, u32)> = Default::default();
        for mask in 0..1u32 << 12 {
            let mut arcs: BTreeSet<Arc> = graph.arcs().clone();
            for (i, e) in inner.iter().enumerate() {
                arcs.insert(if mask >> i & 1 == 1 { Arc::new(e.lo(), e.hi()) } else { Arc::new(e.hi(), e.lo()) });
            }
            for &(port, leaf) in &g.boundary {
                let from_inside = arcs.iter().filter(|a| a.head == port).count();
                let into_port = (from_inside % 2 == 1) != g.problem.is_odd(port);
                arcs.insert(if into_port { Arc::new(leaf, port) } else { Arc::new(port, leaf) });
            }
            let o = Orientation::new(graph, arcs).map_err(|e| e.to_string())?;
            if !is_t_odd_on(&g.problem, &o, &g.scope) {
                continue;
            }
            let inward = |k: usize| {
                let a = o.direction_of(ports.v[k], ports.w[k]).unwrap().head == ports.w[k];
                let b = o.direction_of(ports.v_hat[k], ports.w_hat[k]).unwrap().head == ports.w_hat[k];
                (a == b).then_some(a)
            };
            let Some(pattern) = (0..3).map(inward).collect::<Option<Vec<bool>>>() else { continue };
            let entry = by_pattern.entry([pattern[0], pattern[1], pattern[2]]).or_default();
            entry.0 += 1;
            entry.1 += u32::from(!is_acyclic(o.arcs()).is_acyclic());
        }
        ensure(by_pattern.len() == 8, || format!("{} port patterns", by_pattern.len()))?;
        for (pattern, (total, cyclic)) in by_pattern {
            let class = pattern.iter().filter(|&&b| b).count();
            ensure(total == 2, || format!("pattern {pattern:?}: {total} completions"))?;
            let expect = if class == 0 { 2 } else { 0 };
            ensure(cyclic == expect, || format!("pattern {pattern:?}: {cyclic} cyclic"))?;
            let lib = clause_completions(class);
            ensure(lib.len() == 2 && lib.iter().all(|c| c.cyclic == (class == 0)), || {
                format!("library disagrees on class a{class}")
            })?;
            checked += 1;
        }
    }
    Ok(format!("{checked} polarity and port patterns: 2 completions each, cyclic iff a0"))
}

fn structure() -> Outcome {
    let mut done = 0;
    let mut seed = 0;
    while done < 100 {
        let n = 3 + (seed % 10) as usize;
        let m = 1 + (seed / 10 % (2 * (n - 2)) as u64) as usize;
        seed += 1;
        let Ok(f) = generate(seed, n, m) else { continue };
        let r = structural_check(&assemble(&f));
        ensure(r.passed(), || format!("seed {seed} n={n} m={m}: {:?}", r.failures()))?;
        done += 1;
    }
    Ok(format!("{done} formulas pass, {} seeds tried", seed))
}

fn equivalence() -> Outcome {
    let budget = SearchBudget::default();
    let mut formulas = Vec::new();
    let mut seed = 0;
    while formulas.len() < 100 {
        let n = 3 + (seed % 2) as usize;
        let m = 1 + (seed / 2 % (2 * (n - 2)) as u64) as usize;
        if let Ok(f) = generate(seed, n, m) {
            formulas.push(f);
        }
        seed += 1;
    }
    let fixture = verify_equivalence(&five_variable_instance(), DEFAULT_SAT_BUDGET, &budget).map_err(|e| e.to_string())?;
    ensure(fixture.sat && fixture.orientation_feasible && fixture.all_ok(), || format!("five-variable instance: {fixture:?}"))?;
    let mut unsat = 0;
    for s in 0.. {
        if unsat == 3 {
            break;
        }
        if let Some(f) = search_unsatisfiable(s, 7, 10, 40).map_err(|e| e.to_string())? {
            formulas.push(f);
            unsat += 1;
        }
    }
    let mut satisfiable = 0;
    for (i, f) in formulas.iter().enumerate() {
        let r = verify_equivalence(f, DEFAULT_SAT_BUDGET, &budget).map_err(|e| format!("formula {i}: {e}"))?;
        ensure(r.all_ok(), || format!("formula {i}: {r:?}"))?;
        satisfiable += usize::from(r.sat);
    }
    let total = formulas.len() + 1;
    satisfiable += 1;
    Ok(format!("{total}/{total} agree ({satisfiable} satisfiable, {} unsatisfiable with 7 variables)", total - satisfiable))
}

fn random_agreement() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(6);
    let mut feasible = 0;
    for i in 0..500 {
        let n = 2 + i % 8;
        let p = random_problem(&mut rng, n, 14, 0.3);
        let truth = oracle_count(&p);
        let listed = enumerate(&p, &all_vertices(&p), 0).map_err(|e| e.to_string())?.total_valid;
        let exact = solve_exact(&p, &SearchBudget::default()).status.is_feasible();
        let dispatched = decide(&p).status.is_feasible();
        ensure(listed == truth && exact == (truth > 0) && dispatched == (truth > 0), || {
            format!("instance {i}: oracle {truth}, enumerate {listed}, exact {exact}, decide {dispatched}")
        })?;
        feasible += usize::from(truth > 0);
    }
    Ok(format!("500/500 agree ({feasible} feasible)"))
}

fn special_cases() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(7);
    for i in 0..200u32 {
        let n = 1 + i % 10;
        let p = random_forest(&mut rng, n, if i % 2 == 0 { 0.0 } else { 0.3 });
        let count = enumerate(&p, &all_vertices(&p), 0).map_err(|e| e.to_string())?.total_valid;
        let r = solve_tree(&p).map_err(|e| e.to_string())?;
        ensure(r.status.is_feasible() == (count > 0), || format!("forest {i}: count {count}"))?;
        ensure(count <= 1, || format!("forest {i}: {count} solutions"))?;
    }
    for i in 0..200u32 {
        let n = 1 + i % 16;
        let p = random_degree_two(&mut rng, n, if i % 2 == 0 { 0.0 } else { 0.3 });
        let count = enumerate(&p, &all_vertices(&p), 0).map_err(|e| e.to_string())?.total_valid;
        let r = solve_degree_two(&p).map_err(|e| e.to_string())?;
        ensure(r.status.is_feasible() == (count > 0), || format!("degree-2 graph {i}: count {count}"))?;
        let single_cycle = p.graph().arcs().is_empty()
            && p.graph().components().len() == 1
            && p.graph().vertices().iter().all(|&v| p.graph().degree(v) == 2);
        if single_cycle {
            ensure(count == 0 || count == 2, || format!("cycle {i}: {count} solutions"))?;
        }
    }
    Ok("200 forests and 200 degree-2 graphs agree".into())
}

fn apex() -> Outcome {
    let mut rng = ChaCha8Rng::seed_from_u64(8);
    for i in 0..100u32 {
        let p = random_problem(&mut rng, 1 + i % 7, 12, 0.0);
        let truth = oracle_count(&p) > 0;
        for reading in [ApexReading::NewApex, ApexReading::EachOriginalVertex] {
            let got = apex_candidates(&p, reading)
                .map_err(|e| e.to_string())?
                .iter()
                .any(|q| decide(q).status.is_feasible());
            ensure(got == truth, || format!("graph {i}, {reading:?}: expected {truth}"))?;
        }
    }
    Ok("100/100 preserved under both readings".into())
}

fn normalization() -> Outcome {
    let mut done = 0;
    let mut seed = 0;
    while done < 20 {
        seed += 1;
        let Ok(f) = generate(seed, 3 + (seed % 3) as usize, 2) else { continue };
        let a = assemble(&f);
        let (q, map) = normalize_empty_t(&a.problem).map_err(|e| format!("seed {seed}: {e}"))?;
        let before = decide(&a.problem);
        let after = decide(&q);
        ensure(q.odd_set().is_empty(), || "odd set not empty".into())?;
        ensure(before.status.is_feasible() == after.status.is_feasible(), || format!("seed {seed}: status differs"))?;
        if let Some(w) = after.status.witness() {
            let back = map.back_map(w).map_err(|e| e.to_string())?;
            ensure(is_acyclic(back.arcs()).is_acyclic() && is_t_odd_on(&a.problem, &back, &all_vertices(&a.problem)), || {
                format!("seed {seed}: back-mapped witness invalid")
            })?;
        }
        done += 1;
    }
    Ok("20/20 artifacts normalize with matching status".into())
}

fn pipeline_bytes() -> Result<Vec<u8>, String> {
    let mut out = Vec::new();
    for seed in 0..10 {
        let f = generate(seed, 5, 4).map_err(|e| e.to_string())?;
        let a = assemble(&f);
        out.extend(write_formula(f.formula(), Some(f.rotation())).bytes());
        out.extend(write_instance(&a.problem, &InstanceExtras::default()).bytes());
        out.extend(write_artifact(&a).bytes());
        let r = decide(&a.problem);
        if let Some(w) = r.status.witness() {
            out.extend(write_witness(w).bytes());
        }
        out.extend(export_dot(&a.problem, r.status.witness(), Some(&a.registry)).bytes());
    }
    Ok(out)
}

fn determinism() -> Outcome {
    let first = pipeline_bytes()?;
    let second = pipeline_bytes()?;
    ensure(first == second, || "outputs differ".into())?;
    Ok(format!("{} bytes identical across two runs", first.len()))
}

fn main() -> ExitCode {
    let criteria: [Criterion; 10] = [
        ("base gadget has exactly two orientations", base_gadget, 1.0),
        ("variable gadget has exactly two orientations", variable_gadget, 30.0),
        ("clause gadget completions", clause_gadget, 5.0),
        ("reductions pass structural checks", structure, 60.0),
        ("satisfiable iff orientable", equivalence, 600.0),
        ("solvers agree on random instances", random_agreement, 60.0),
        ("special-case solvers", special_cases, 60.0),
        ("apex transform preserves feasibility", apex, 120.0),
        ("empty odd set normalization", normalization, 120.0),
        ("deterministic output", determinism, 60.0),
    ];
    let mut failed = 0;
    for (i, (name, check, limit)) in criteria.iter().enumerate() {
        let start = Instant::now();
        let result = check();
        let secs = start.elapsed().as_secs_f64();
        let result = match result {
            Ok(_) if secs > *limit => Err(format!("took longer than {limit}s")),
            r => r,
        };
        match result {
            Ok(detail) => println!("PASS {:>2} {name}: {detail} ({secs:.2}s)", i + 1),
            Err(why) => {
                failed += 1;
                println!("FAIL {:>2} {name}: {why} ({secs:.2}s)", i + 1);
            }
        }
    }
    if failed == 0 {
        ExitCode::SUCCESS
    } else {
        ExitCode::FAILURE
    }
}
