use std::fmt;

use super::{objective_value, PlanProblem, PlanSolution};
use crate::paths::edge_indicator;
use crate::rational::Rational;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum ConstraintFamily {
    /// Exactly one selected path per contract.
    SinglePath,
    /// Per-path grant bounded by demand on the selected path, zero elsewhere.
    PathGrantBound,
    /// Per-edge grant equals the grant of the paths crossing the edge.
    EdgeGrantDefinition,
    /// Per-edge grant sums within capacity.
    Capacity,
    /// Contract grant equals the sum of its per-path grants.
    GrantDefinition,
    /// `0 <= grant <= demand`.
    GrantRange,
}

impl fmt::Display for ConstraintFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            ConstraintFamily::SinglePath => "i (single path)",
            ConstraintFamily::PathGrantBound => "ii (path grant bound)",
            ConstraintFamily::EdgeGrantDefinition => "iii (edge grant definition)",
            ConstraintFamily::Capacity => "iv (capacity)",
            ConstraintFamily::GrantDefinition => "v (grant definition)",
            ConstraintFamily::GrantRange => "grant range",
        })
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintCheck {
    pub family: ConstraintFamily,
    pub passed: bool,
    /// Contract index, or edge index in network order for the capacity family.
    pub first_violation: Option<usize>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConstraintReport {
    pub checks: Vec<ConstraintCheck>,
    /// Recomputed from the grants; `None` when the grants are out of range.
    pub objective_value: Option<Rational>,
    pub objective_matches: bool,
}

impl ConstraintReport {
    pub fn all_passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed) && self.objective_matches
    }

    pub fn get(&self, family: ConstraintFamily) -> &ConstraintCheck {
        self.checks
            .iter()
            .find(|c| c.family == family)
            .expect("every family is checked")
    }
}

fn first_failure(family: ConstraintFamily, mut it: impl Iterator<Item = bool>) -> ConstraintCheck {
    let first_violation = it.position(|ok| !ok);
    ConstraintCheck {
        family,
        passed: first_violation.is_none(),
        first_violation,
    }
}

/// Evaluates each constraint family independently.
pub fn check_solution(problem: &PlanProblem, sol: &PlanSolution) -> ConstraintReport {
    let n = problem.contracts.len();
    let shaped = |i: usize, len: Option<usize>| len == Some(problem.path_sets[i].len());

    let single = first_failure(
        ConstraintFamily::SinglePath,
        (0..n).map(|i| shaped(i, sol.selection.get(i).map(Vec::len)) && sol.selection[i].iter().filter(|&&s| s).count() == 1),
    );

    let path_bound = first_failure(
        ConstraintFamily::PathGrantBound,
        (0..n).map(|i| {
            shaped(i, sol.per_path_grant.get(i).map(Vec::len))
                && shaped(i, sol.selection.get(i).map(Vec::len))
                && sol.per_path_grant[i]
                    .iter()
                    .zip(&sol.selection[i])
                    .all(|(&g, &s)| g <= if s { problem.contracts[i].bandwidth } else { 0 })
        }),
    );

    let edge_def = first_failure(
        ConstraintFamily::EdgeGrantDefinition,
        (0..n).map(|i| {
            let ps = &problem.path_sets[i];
            shaped(i, sol.per_path_grant.get(i).map(Vec::len))
                && sol.edge_grant.get(i).is_some()
                && problem.net.edges().all(|e| {
                    let expected: u128 = (0..ps.len())
                        .map(|m| {
                            u128::from(edge_indicator(ps, m, e).unwrap_or(0))
                                * u128::from(sol.per_path_grant[i][m])
                        })
                        .sum();
                    let actual = sol.edge_grant[i].get(e).copied().unwrap_or(0);
                    u128::from(actual) == expected
                })
                && sol.edge_grant[i].keys().all(|e| problem.net.has_edge(e))
        }),
    );

    let capacity = first_failure(
        ConstraintFamily::Capacity,
        problem.net.capacities().iter().map(|(e, &k)| {
            let load: u128 = sol
                .edge_grant
                .iter()
                .map(|row| u128::from(row.get(e).copied().unwrap_or(0)))
                .sum();
            load <= u128::from(k)
        }),
    );

    let grant_def = first_failure(
        ConstraintFamily::GrantDefinition,
        (0..n).map(|i| {
            sol.grant.get(i).is_some()
                && sol.per_path_grant.get(i).is_some_and(|row| {
                    row.iter().map(|&g| u128::from(g)).sum::<u128>() == u128::from(sol.grant[i])
                })
        }),
    );

    let range = first_failure(
        ConstraintFamily::GrantRange,
        (0..n).map(|i| sol.grant.get(i).is_some_and(|&g| g <= problem.contracts[i].bandwidth)),
    );

    let recomputed = objective_value(problem, problem.objective, &sol.grant).ok();
    let objective_matches = recomputed.as_ref() == Some(&sol.objective_value);

    ConstraintReport {
        checks: vec![single, path_bound, edge_def, capacity, grant_def, range],
        objective_value: recomputed,
        objective_matches,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::example_topology;
    use crate::plan::{build_problem, example_contracts, solve, ObjectiveKind};

    fn problem() -> PlanProblem {
        build_problem(&example_topology(), &example_contracts(), 3, ObjectiveKind::Pescf).unwrap()
    }

    #[test]
    fn solver_output_passes() {
        let pb = problem();
        let sol = solve(&pb).unwrap();
        let report = check_solution(&pb, &sol);
        assert!(report.all_passed(), "{report:?}");
    }

    #[test]
    fn two_selected_paths_fail_family_i() {
        let pb = problem();
        let mut sol = pb.solution_from_choice(&[0, 0, 0], &[2, 1, 2]).unwrap();
        sol.selection[1] = vec![true, true];
        let report = check_solution(&pb, &sol);
        let c = report.get(ConstraintFamily::SinglePath);
        assert!(!c.passed);
        assert_eq!(c.first_violation, Some(1));
        assert!(report.get(ConstraintFamily::Capacity).passed);
    }

    #[test]
    fn over_capacity_fails_family_iv() {
        let pb = problem();
        // Q2->Q1 direct carries 3 units on a capacity-1 edge.
        let sol = pb.solution_from_choice(&[0, 0, 0], &[2, 3, 2]).unwrap();
        let report = check_solution(&pb, &sol);
        let c = report.get(ConstraintFamily::Capacity);
        assert!(!c.passed);
        // (Q2,Q1) is the third edge in network order.
        assert_eq!(c.first_violation, Some(2));
        assert!(report.get(ConstraintFamily::SinglePath).passed);
        assert!(report.get(ConstraintFamily::GrantDefinition).passed);
    }

    #[test]
    fn inconsistent_grants_fail_ii_iii_v() {
        let pb = problem();
        let mut sol = pb.solution_from_choice(&[0, 0, 0], &[2, 1, 2]).unwrap();
        sol.per_path_grant[0][1] = 1;
        sol.grant[2] = 1;
        let report = check_solution(&pb, &sol);
        assert_eq!(report.get(ConstraintFamily::PathGrantBound).first_violation, Some(0));
        assert_eq!(report.get(ConstraintFamily::EdgeGrantDefinition).first_violation, Some(0));
        assert_eq!(report.get(ConstraintFamily::GrantDefinition).first_violation, Some(0));
        assert!(!report.objective_matches);
    }
}
