//! Exhaustive reference planner. Shares no search code with the solver.

use std::collections::BTreeMap;

use super::{objective_value, PlanError, PlanProblem, PlanSolution};
use crate::net::Edge;
use crate::rational::Rational;

pub const DEFAULT_ORACLE_BOUND: u128 = 10_000_000;

pub fn brute_force_solve(problem: &PlanProblem) -> Result<PlanSolution, PlanError> {
    brute_force_solve_with(problem, DEFAULT_ORACLE_BOUND)
}

pub fn brute_force_solve_with(problem: &PlanProblem, bound: u128) -> Result<PlanSolution, PlanError> {
    let size = problem
        .path_sets
        .iter()
        .map(|ps| ps.len() as u128)
        .chain(problem.contracts.iter().map(|c| u128::from(c.bandwidth) + 1))
        .fold(1u128, |acc, x| acc.saturating_mul(x));
    if size > bound {
        return Err(PlanError::OracleBoundExceeded { size, bound });
    }

    let mut state = Search {
        problem,
        best: None,
        paths: Vec::new(),
    };
    state.assign_paths();
    let (_, paths, grants) = state.best.expect("zero grants are always feasible");
    problem.solution_from_choice(&paths, &grants)
}

struct Search<'a> {
    problem: &'a PlanProblem,
    best: Option<(Rational, Vec<usize>, Vec<u64>)>,
    paths: Vec<usize>,
}

impl Search<'_> {
    fn assign_paths(&mut self) {
        let i = self.paths.len();
        if i == self.problem.contracts.len() {
            let mut grants = Vec::new();
            self.assign_grants(&mut grants);
            return;
        }
        for m in 0..self.problem.path_sets[i].len() {
            self.paths.push(m);
            self.assign_paths();
            self.paths.pop();
        }
    }

    fn assign_grants(&mut self, grants: &mut Vec<u64>) {
        let i = grants.len();
        if i == self.problem.contracts.len() {
            self.consider(grants);
            return;
        }
        for g in 0..=self.problem.contracts[i].bandwidth {
            grants.push(g);
            self.assign_grants(grants);
            grants.pop();
        }
    }

    fn consider(&mut self, grants: &[u64]) {
        let mut load: BTreeMap<&Edge, u64> = BTreeMap::new();
        for (i, &g) in grants.iter().enumerate() {
            let path = &self.problem.path_sets[i].paths[self.paths[i]];
            for e in path.edges() {
                *load.entry(e).or_default() += g;
            }
        }
        let feasible = load
            .iter()
            .all(|(e, &l)| l <= self.problem.net.capacity(e).unwrap_or(0));
        if !feasible {
            return;
        }
        let value = objective_value(self.problem, self.problem.objective, grants)
            .expect("grants enumerated within demand");
        // Enumeration is lexicographic in (paths, grants): keep the first minimum.
        if self.best.as_ref().is_none_or(|(b, _, _)| value < *b) {
            self.best = Some((value, self.paths.clone(), grants.to_vec()));
        }
    }
}
