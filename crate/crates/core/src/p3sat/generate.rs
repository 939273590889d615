//! Random planar formulas. Variables sit on a horizontal spine in index
//! order and every clause is drawn as a tent above or below it. Clauses on
//! the same side must be laminar: disjoint, or nested inside one of the two
//! gaps between another clause's legs. Such a drawing is planar, and the
//! rotation system is read off from it directly.

use std::collections::BTreeMap;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use super::{clause_masks, satisfies_masks, Clause, Formula, IncidenceNode, Literal, PlanarFormula, RotationSystem};

const ATTEMPTS_PER_CLAUSE: usize = 256;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum GenerateError {
    #[error("need at least 3 variables and 1 clause, got n={n}, m={m}")]
    TooSmall { n: usize, m: usize },
    #[error("no room for clause {placed} of {requested} on the spine of {n} variables")]
    NoRoom { n: usize, requested: usize, placed: usize },
    #[error("model counting over {n} variables is too expensive")]
    TooManyVariables { n: usize },
}

#[derive(Debug, Clone, Copy)]
struct Tent {
    legs: [usize; 3],
    above: bool,
}

impl Tent {
    fn within_gap_of(&self, other: &Tent) -> bool {
        let [a, b, c] = other.legs;
        let (lo, hi) = (self.legs[0], self.legs[2]);
        (a <= lo && hi <= b) || (b <= lo && hi <= c)
    }

    fn compatible(&self, other: &Tent) -> bool {
        self.above != other.above
            || self.legs[2] <= other.legs[0]
            || other.legs[2] <= self.legs[0]
            || self.within_gap_of(other)
            || other.within_gap_of(self)
    }
}

/// Deterministic in `seed`. Fails when `m` tents do not fit on `n`
/// variables after a bounded number of random attempts per clause.
pub fn generate(seed: u64, n: usize, m: usize) -> Result<PlanarFormula, GenerateError> {
    if n < 3 || m < 1 {
        return Err(GenerateError::TooSmall { n, m });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let vars: Vec<usize> = (0..n).collect();
    let mut tents: Vec<Tent> = Vec::with_capacity(m);
    for placed in 0..m {
        let tent = (0..ATTEMPTS_PER_CLAUSE).find_map(|_| {
            let mut legs: Vec<usize> = vars.choose_multiple(&mut rng, 3).copied().collect();
            legs.sort_unstable();
            let tent = Tent { legs: [legs[0], legs[1], legs[2]], above: rng.gen() };
            tents.iter().all(|t| t.compatible(&tent)).then_some(tent)
        });
        match tent {
            Some(t) => tents.push(t),
            None => return Err(GenerateError::NoRoom { n, requested: m, placed }),
        }
    }

    let clauses: Vec<Clause> = tents
        .iter()
        .map(|t| {
            let mut clause = t.legs.map(|var| Literal { var, positive: rng.gen() });
            clause.shuffle(&mut rng);
            clause
        })
        .collect();
    let formula = Formula::new(n, clauses).expect("tents use three distinct variables");
    let rotation = spine_rotation(n, &tents);
    Ok(PlanarFormula::new(formula, rotation).expect("spine drawings are planar"))
}

/// Searches for an unsatisfiable planar formula: for layouts drawn from
/// successive seeds, flips literal polarities one at a time, keeping flips
/// that do not increase the number of satisfying assignments. Random
/// polarities almost never give an unsatisfiable formula at the clause
/// densities a spine layout allows, so plain filtering is not enough.
/// Returns `None` if no layout out of `layouts` reaches zero models.
pub fn search_unsatisfiable(seed: u64, n: usize, m: usize, layouts: usize) -> Result<Option<PlanarFormula>, GenerateError> {
    if n > MAX_COUNTED_VARIABLES {
        return Err(GenerateError::TooManyVariables { n });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..layouts {
        let layout = generate(rng.gen(), n, m)?;
        let mut clauses = layout.formula().clauses().to_vec();
        let mut models = count_models(n, &clauses);
        for _ in 0..FLIPS_PER_LAYOUT {
            if models == 0 {
                break;
            }
            let (j, k) = (rng.gen_range(0..m), rng.gen_range(0..3));
            clauses[j][k].positive ^= true;
            let after = count_models(n, &clauses);
            if after <= models {
                models = after;
            } else {
                clauses[j][k].positive ^= true;
            }
        }
        if models == 0 {
            let formula = Formula::new(n, clauses).expect("flips keep variables distinct");
            let planar = PlanarFormula::new(formula, layout.rotation().clone()).expect("same incidence graph");
            return Ok(Some(planar));
        }
    }
    Ok(None)
}

const FLIPS_PER_LAYOUT: usize = 4000;
const MAX_COUNTED_VARIABLES: usize = 20;

fn count_models(n: usize, clauses: &[Clause]) -> u64 {
    let masks = clause_masks(clauses);
    (0..1u64 << n).filter(|&a| satisfies_masks(&masks, a)).count() as u64
}

/// Clockwise orders. Around a clause above the spine the legs run right to
/// left, below the spine left to right. Around a variable, starting just
/// above the spine on its left: tents it ends (as the right leg) from the
/// innermost outward, the tent it supports in the middle, tents it starts
/// (as the left leg) from the outermost inward, then the lower side
/// mirrored.
fn spine_rotation(n: usize, tents: &[Tent]) -> RotationSystem<IncidenceNode> {
    let mut orders: BTreeMap<IncidenceNode, Vec<IncidenceNode>> = BTreeMap::new();
    for (j, t) in tents.iter().enumerate() {
        let mut legs: Vec<IncidenceNode> = t.legs.iter().map(|&x| IncidenceNode::Variable(x)).collect();
        if t.above {
            legs.reverse();
        }
        orders.insert(IncidenceNode::Clause(j), legs);
    }
    for x in 0..n {
        // Key by span: wider tents are further out.
        let mut starts = [Vec::new(), Vec::new()];
        let mut middle = [Vec::new(), Vec::new()];
        let mut ends = [Vec::new(), Vec::new()];
        for (j, t) in tents.iter().enumerate() {
            let side = usize::from(!t.above);
            let span = t.legs[2] - t.legs[0];
            let c = IncidenceNode::Clause(j);
            if t.legs[0] == x {
                starts[side].push((span, c));
            } else if t.legs[1] == x {
                middle[side].push((span, c));
            } else if t.legs[2] == x {
                ends[side].push((span, c));
            }
        }
        for list in starts.iter_mut().chain(middle.iter_mut()).chain(ends.iter_mut()) {
            list.sort();
        }
        let inner_out = |l: &Vec<(usize, IncidenceNode)>| l.iter().map(|p| p.1).collect::<Vec<_>>();
        let outer_in = |l: &Vec<(usize, IncidenceNode)>| l.iter().rev().map(|p| p.1).collect::<Vec<_>>();
        let mut order = Vec::new();
        // Upper half, clockwise from the left.
        order.extend(inner_out(&ends[0]));
        order.extend(inner_out(&middle[0]));
        order.extend(outer_in(&starts[0]));
        // Lower half, clockwise from the right.
        order.extend(inner_out(&starts[1]));
        order.extend(inner_out(&middle[1]));
        order.extend(outer_in(&ends[1]));
        if !order.is_empty() {
            orders.insert(IncidenceNode::Variable(x), order);
        }
    }
    RotationSystem::new(orders)
}
