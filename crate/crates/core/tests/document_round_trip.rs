use proptest::prelude::*;
use qkdroute_core::io::{
    to_json, ContractsDoc, NetworkDoc, RatioDoc, SimulationReport, SolutionReport, TraceDoc,
};
use qkdroute_core::online::{simulate, Strategy};
use qkdroute_core::oracle::competitive_ratio;
use qkdroute_core::plan::{build_problem, solve, ObjectiveKind};
use qkdroute_core::random::{random_contracts, random_network, random_trace, rng, NetworkShape};
use serde::de::DeserializeOwned;

const SHAPE: NetworkShape = NetworkShape {
    max_nodes: 5,
    max_edges: 8,
    max_capacity: 6,
};

fn reparse<T: DeserializeOwned>(text: &str) -> T {
    serde_json::from_str(text).unwrap()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn network_contracts_and_trace(seed in any::<u64>()) {
        let mut r = rng(seed);
        let net = random_network(&mut r, SHAPE);
        let doc = NetworkDoc::from_network(&net);
        let text = to_json(&doc);
        let back = reparse::<NetworkDoc>(&text).to_network().unwrap();
        prop_assert_eq!(&back, &net);
        prop_assert_eq!(to_json(&NetworkDoc::from_network(&back)), text);

        let cs = random_contracts(&mut r, &net, 3, 4, 5, 3);
        let text = to_json(&ContractsDoc::from_contracts(&cs));
        prop_assert_eq!(reparse::<ContractsDoc>(&text).to_contracts(), cs);

        let trace = random_trace(&mut r, &net, 10, 2);
        let text = to_json(&TraceDoc::from_trace(&trace));
        prop_assert_eq!(reparse::<TraceDoc>(&text).to_trace(), trace);
    }

    #[test]
    fn solution_reports(seed in any::<u64>(), k in 0usize..3) {
        let mut r = rng(seed);
        let net = random_network(&mut r, SHAPE);
        let cs = random_contracts(&mut r, &net, 3, 4, 5, 3);
        prop_assume!(!cs.is_empty());
        let pb = build_problem(&net, &cs, 3, ObjectiveKind::ALL[k]).unwrap();
        let sol = solve(&pb).unwrap();
        let report = SolutionReport::new(&pb, &sol);
        prop_assert!(report.constraints_ok);
        let text = to_json(&report);
        let back: SolutionReport = reparse(&text);
        prop_assert_eq!(back.to_solution(&pb).unwrap(), sol);
        prop_assert_eq!(to_json(&back), text);
    }

    #[test]
    fn simulation_and_ratio_reports(seed in any::<u64>(), wsp in any::<bool>()) {
        let strategy = if wsp { Strategy::Wsp } else { Strategy::Sap };
        let mut r = rng(seed);
        let net = random_network(&mut r, SHAPE);
        let trace = random_trace(&mut r, &net, 8, 2);
        let res = simulate(&net, &trace, strategy, None).unwrap();
        let text = to_json(&SimulationReport::new(&trace, &res));
        prop_assert_eq!(reparse::<SimulationReport>(&text).to_result(), res);

        let rep = competitive_ratio(&net, &trace, strategy).unwrap();
        let text = to_json(&RatioDoc::from_report(&rep));
        prop_assert_eq!(reparse::<RatioDoc>(&text).to_report().unwrap(), rep);
    }
}
