use num_bigint::BigInt;
use num_traits::Zero;

use super::{ObjectiveKind, PlanError, PlanProblem};
use crate::rational::{from_int, ratio, Rational};

fn check_grants(problem: &PlanProblem, grants: &[u64]) -> Result<(), PlanError> {
    if grants.len() != problem.contracts.len() {
        return Err(PlanError::GrantCount {
            expected: problem.contracts.len(),
            got: grants.len(),
        });
    }
    for (i, (&g, c)) in grants.iter().zip(&problem.contracts).enumerate() {
        if g > c.bandwidth {
            return Err(PlanError::GrantOutOfRange {
                index: i,
                grant: g,
                demand: c.bandwidth,
            });
        }
    }
    Ok(())
}

fn weighted_shortfall(problem: &PlanProblem, grants: &[u64], weighted: bool) -> Rational {
    let total = grants
        .iter()
        .zip(&problem.contracts)
        .fold(BigInt::zero(), |acc, (&g, c)| {
            let short = BigInt::from(c.bandwidth - g);
            let w = if weighted { BigInt::from(c.priority) } else { BigInt::from(1) };
            acc + w * &short * &short
        });
    from_int(total)
}

/// `sum_i p_i * (b_i - g_i)^2`
pub fn objective_pescf(problem: &PlanProblem, grants: &[u64]) -> Result<Rational, PlanError> {
    check_grants(problem, grants)?;
    Ok(weighted_shortfall(problem, grants, true))
}

/// `sum_i (b_i - g_i)^2`
pub fn objective_escf(problem: &PlanProblem, grants: &[u64]) -> Result<Rational, PlanError> {
    check_grants(problem, grants)?;
    Ok(weighted_shortfall(problem, grants, false))
}

/// `sum_{i<j} (g_i/b_i - g_j/b_j)^2 - sum_i g_i`
pub fn objective_edgr(problem: &PlanProblem, grants: &[u64]) -> Result<Rational, PlanError> {
    check_grants(problem, grants)?;
    let ratios: Vec<Rational> = grants
        .iter()
        .zip(&problem.contracts)
        .map(|(&g, c)| ratio(g, c.bandwidth))
        .collect();
    let mut total = from_int(0);
    for i in 0..ratios.len() {
        for j in i + 1..ratios.len() {
            let d = &ratios[i] - &ratios[j];
            total += &d * &d;
        }
    }
    let granted: BigInt = grants.iter().map(|&g| BigInt::from(g)).sum();
    Ok(total - from_int(granted))
}

pub fn objective_value(
    problem: &PlanProblem,
    kind: ObjectiveKind,
    grants: &[u64],
) -> Result<Rational, PlanError> {
    match kind {
        ObjectiveKind::Pescf => objective_pescf(problem, grants),
        ObjectiveKind::Escf => objective_escf(problem, grants),
        ObjectiveKind::Edgr => objective_edgr(problem, grants),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::net::{example_topology, validate_network, RawEdge};
    use crate::plan::{build_problem, example_contracts, Contract};

    fn example() -> PlanProblem {
        build_problem(&example_topology(), &example_contracts(), 3, ObjectiveKind::Pescf).unwrap()
    }

    fn two_contract_edgr() -> PlanProblem {
        let net = validate_network(
            &["A", "B"],
            &[RawEdge {
                src: "A".into(),
                dst: "B".into(),
                capacity: 38,
            }],
        )
        .unwrap();
        build_problem(
            &net,
            &[Contract::new("A", "B", 11, 1), Contract::new("A", "B", 31, 1)],
            1,
            ObjectiveKind::Edgr,
        )
        .unwrap()
    }

    #[test]
    fn pescf_values() {
        let pb = example();
        assert_eq!(objective_pescf(&pb, &[2, 1, 2]).unwrap(), from_int(40));
        assert_eq!(objective_pescf(&pb, &[2, 3, 2]).unwrap(), from_int(0));
        assert_eq!(objective_pescf(&pb, &[2, 2, 1]).unwrap(), from_int(110));
    }

    #[test]
    fn escf_values() {
        let pb = example();
        assert_eq!(objective_escf(&pb, &[2, 2, 1]).unwrap(), from_int(2));
        assert_eq!(objective_escf(&pb, &[2, 1, 2]).unwrap(), from_int(4));
        assert_eq!(objective_escf(&pb, &[2, 3, 2]).unwrap(), from_int(0));
    }

    #[test]
    fn edgr_values() {
        let pb = two_contract_edgr();
        let a = objective_edgr(&pb, &[9, 29]).unwrap();
        let b = objective_edgr(&pb, &[10, 28]).unwrap();
        assert_eq!(a, ratio(1600, 116281) - from_int(38));
        assert_eq!(b, ratio(4, 116281) - from_int(38));
        assert!(b < a);
        assert_eq!(objective_edgr(&pb, &[11, 31]).unwrap(), from_int(-42));
    }

    #[test]
    fn out_of_range_grants() {
        let pb = example();
        assert_eq!(
            objective_pescf(&pb, &[3, 0, 0]),
            Err(PlanError::GrantOutOfRange {
                index: 0,
                grant: 3,
                demand: 2
            })
        );
        assert!(matches!(
            objective_edgr(&pb, &[1, 1]),
            Err(PlanError::GrantCount { .. })
        ));
    }
}
