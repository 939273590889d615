//! DIMACS CNF with extra rotation lines of the form `r x2 c1 c4 c3`, giving
//! the clockwise order of neighbors around one incidence vertex. Standard
//! DIMACS readers skip the `r` lines as unknown.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use super::IoError;
use crate::p3sat::{Clause, Formula, IncidenceNode, Literal, PlanarFormula, RotationSystem};

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FormulaFile {
    pub formula: Formula,
    pub rotation: Option<RotationSystem<IncidenceNode>>,
}

impl FormulaFile {
    /// Validates the rotation; fails with "embedding required" when absent.
    pub fn planar(self) -> Result<PlanarFormula, IoError> {
        let rotation = self.rotation.ok_or(IoError::MissingEmbedding)?;
        Ok(PlanarFormula::new(self.formula, rotation)?)
    }
}

pub fn read_formula(text: &str) -> Result<FormulaFile, IoError> {
    let err = |line: usize, message: String| IoError::Formula { line, message };
    let mut header: Option<(usize, usize, usize)> = None;
    let mut clauses: Vec<Clause> = Vec::new();
    let mut pending: Vec<Literal> = Vec::new();
    let mut pending_line = 0;
    let mut orders: BTreeMap<IncidenceNode, Vec<IncidenceNode>> = BTreeMap::new();
    for (i, raw) in text.lines().enumerate() {
        let line = i + 1;
        let trimmed = raw.trim();
        let mut tokens = trimmed.split_whitespace();
        match tokens.next() {
            None | Some("c") | Some("%") => continue,
            Some("p") => {
                let fields: Vec<&str> = tokens.collect();
                let [kind, vars, count] = fields[..] else {
                    return Err(err(line, "expected 'p cnf <variables> <clauses>'".into()));
                };
                let parse = |s: &str| s.parse::<usize>().map_err(|_| err(line, format!("bad number {s:?}")));
                if kind != "cnf" {
                    return Err(err(line, format!("expected 'cnf', got {kind:?}")));
                }
                if header.is_some() {
                    return Err(err(line, "second header line".into()));
                }
                header = Some((parse(vars)?, parse(count)?, line));
            }
            Some("r") => {
                let mut nodes = tokens.map(|t| t.parse::<IncidenceNode>().map_err(|m| err(line, m)));
                let v = nodes.next().ok_or_else(|| err(line, "rotation line names no vertex".into()))??;
                let order = nodes.collect::<Result<Vec<_>, _>>()?;
                if orders.insert(v, order).is_some() {
                    return Err(err(line, format!("second rotation line for {v}")));
                }
            }
            Some(first) => {
                if header.is_none() {
                    return Err(err(line, "clause before the 'p cnf' header".into()));
                }
                for tok in std::iter::once(first).chain(tokens) {
                    let value: i64 = tok.parse().map_err(|_| err(line, format!("malformed literal {tok:?}")))?;
                    if pending.is_empty() {
                        pending_line = line;
                    }
                    match Literal::from_dimacs(value) {
                        Some(l) => pending.push(l),
                        None => {
                            let [a, b, c] = pending[..] else {
                                return Err(err(
                                    pending_line,
                                    format!("clause has {} literals, expected 3", pending.len()),
                                ));
                            };
                            clauses.push([a, b, c]);
                            pending.clear();
                        }
                    }
                }
            }
        }
    }
    let Some((variables, declared, header_line)) = header else {
        return Err(err(1, "missing 'p cnf' header".into()));
    };
    if !pending.is_empty() {
        return Err(err(pending_line, "clause not terminated by 0".into()));
    }
    if declared != clauses.len() {
        return Err(err(header_line, format!("header declares {declared} clauses, found {}", clauses.len())));
    }
    let formula = Formula::new(variables, clauses)?;
    let rotation = (!orders.is_empty()).then(|| RotationSystem::new(orders));
    Ok(FormulaFile { formula, rotation })
}

pub fn write_formula(formula: &Formula, rotation: Option<&RotationSystem<IncidenceNode>>) -> String {
    let mut out = String::new();
    let _ = writeln!(out, "p cnf {} {}", formula.variable_count(), formula.clause_count());
    for c in formula.clauses() {
        let _ = writeln!(out, "{} {} {} 0", c[0].to_dimacs(), c[1].to_dimacs(), c[2].to_dimacs());
    }
    if let Some(r) = rotation {
        for (v, order) in r.orders() {
            let _ = write!(out, "r {v}");
            for u in order {
                let _ = write!(out, " {u}");
            }
            out.push('\n');
        }
    }
    out
}
