use std::fmt;
use std::fs;
use std::path::{Path, PathBuf};

use qkdroute_core::adversary::{generate, AdversaryParams, Construction};
use qkdroute_core::io::{
    path_to_doc, read_json, to_json, ContractsDoc, DocError, ManifestDoc, NetworkDoc, RatioDoc,
    RunConfig, SimulationReport, SolutionReport, TraceDoc, MANIFEST_FILE, NETWORK_FILE,
    TRACE_FILE,
};
use qkdroute_core::net::Network;
use qkdroute_core::online::{simulate as run_simulation, Strategy};
use qkdroute_core::oracle::{optimal_served_with, ratio_report, OracleError};
use qkdroute_core::paths::enumerate_paths;
use qkdroute_core::plan::{build_problem, solve_with, ObjectiveKind, PlanError, SolveOptions};
use qkdroute_core::rational::{to_decimal_string, to_fraction_string};

pub const EXIT_OK: u8 = 0;
pub const EXIT_INPUT: u8 = 1;
pub const EXIT_SUGGESTIONS: u8 = 2;
pub const EXIT_MISMATCH: u8 = 3;
pub const EXIT_BUDGET: u8 = 4;

#[derive(Debug)]
pub enum CliError {
    Input(String),
    Budget(String),
    Output(String),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Input(_) | CliError::Output(_) => EXIT_INPUT,
            CliError::Budget(_) => EXIT_BUDGET,
        }
    }
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Input(m) | CliError::Budget(m) | CliError::Output(m) => f.write_str(m),
        }
    }
}

impl From<DocError> for CliError {
    fn from(e: DocError) -> Self {
        CliError::Input(e.to_string())
    }
}

impl From<PlanError> for CliError {
    fn from(e: PlanError) -> Self {
        match e {
            PlanError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

impl From<OracleError> for CliError {
    fn from(e: OracleError) -> Self {
        match e {
            OracleError::BudgetExceeded { .. } => CliError::Budget(e.to_string()),
            _ => CliError::Input(e.to_string()),
        }
    }
}

/// Options shared by the report-producing commands.
pub struct Shared {
    pub config: Option<PathBuf>,
    pub budget: Option<u64>,
    pub out: Option<PathBuf>,
}

impl Shared {
    fn config(&self) -> Result<RunConfig, CliError> {
        let mut cfg = match &self.config {
            Some(p) => read_json::<RunConfig>(p)?,
            None => RunConfig::default(),
        };
        if let Some(b) = self.budget {
            cfg.search_budget = b;
        }
        Ok(cfg)
    }

    fn emit(&self, text: &str) -> Result<(), CliError> {
        match &self.out {
            Some(p) => fs::write(p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display()))),
            None => {
                print!("{text}");
                Ok(())
            }
        }
    }
}

fn load_network(p: &Path) -> Result<Network, CliError> {
    let doc: NetworkDoc = read_json(p)?;
    doc.to_network()
        .map_err(|e| CliError::Input(format!("{}: {e}", p.display())))
}

pub fn plan(
    network: &Path,
    contracts: &Path,
    max_hops: Option<usize>,
    objective: Option<ObjectiveKind>,
    shared: &Shared,
) -> Result<u8, CliError> {
    let mut cfg = shared.config()?;
    if let Some(h) = max_hops {
        cfg.max_hops = h;
    }
    if let Some(o) = objective {
        cfg.objective = o;
    }
    cfg.validate()?;

    let net = load_network(network)?;
    let doc: ContractsDoc = read_json(contracts)?;
    let problem = build_problem(&net, &doc.to_contracts(), cfg.max_hops, cfg.objective)?;
    let sol = solve_with(
        &problem,
        SolveOptions {
            node_budget: cfg.search_budget,
        },
    )?;
    let report = SolutionReport::new(&problem, &sol);
    if !report.constraints_ok {
        return Err(CliError::Output("internal error: solution violates constraints".into()));
    }
    shared.emit(&to_json(&report))?;
    Ok(if report.all_granted { EXIT_OK } else { EXIT_SUGGESTIONS })
}

pub fn simulate(
    network: &Path,
    trace: &Path,
    strategy: Option<Strategy>,
    with_opt: bool,
    shared: &Shared,
) -> Result<u8, CliError> {
    let mut cfg = shared.config()?;
    if let Some(s) = strategy {
        cfg.strategy = s;
    }
    cfg.validate()?;
    if with_opt && cfg.refresh.is_some() {
        return Err(CliError::Input(
            "the offline optimum is only defined without key refresh".into(),
        ));
    }

    let net = load_network(network)?;
    let tr = read_json::<TraceDoc>(trace)?.to_trace();
    let refresh = cfg.refresh.as_ref().map(|r| r.to_config());
    let res = run_simulation(&net, &tr, cfg.strategy, refresh.as_ref())
        .map_err(|e| CliError::Input(e.to_string()))?;
    let mut report = SimulationReport::new(&tr, &res);
    if with_opt {
        let opt = optimal_served_with(&net, &tr, cfg.search_budget)?;
        report.competitive = Some(RatioDoc::from_report(&ratio_report(&net, &tr, cfg.strategy, opt)?));
    }
    shared.emit(&to_json(&report))?;
    Ok(EXIT_OK)
}

pub fn adversary(construction: Construction, edges: u64, beta: u64, mu: u64, out: &Path) -> Result<u8, CliError> {
    let inst = generate(
        construction,
        AdversaryParams {
            edge_count: edges,
            beta,
            mu,
        },
    )
    .map_err(|e| CliError::Input(e.to_string()))?;
    fs::create_dir_all(out).map_err(|e| CliError::Output(format!("{}: {e}", out.display())))?;
    let manifest = to_json(&ManifestDoc::new(&inst));
    for (name, text) in [
        (NETWORK_FILE, to_json(&NetworkDoc::from_network(&inst.net))),
        (TRACE_FILE, to_json(&TraceDoc::from_trace(&inst.trace))),
        (MANIFEST_FILE, manifest.clone()),
    ] {
        let p = out.join(name);
        fs::write(&p, text).map_err(|e| CliError::Output(format!("{}: {e}", p.display())))?;
    }
    print!("{manifest}");
    Ok(EXIT_OK)
}

fn parse_grid(grid: &str) -> Result<Vec<AdversaryParams>, CliError> {
    grid.split(';')
        .map(str::trim)
        .filter(|t| !t.is_empty())
        .map(|t| {
            let nums: Vec<u64> = t
                .split(',')
                .map(|x| x.trim().parse::<u64>())
                .collect::<Result<_, _>>()
                .map_err(|e| CliError::Input(format!("grid entry {t:?}: {e}")))?;
            match nums[..] {
                [edge_count, beta, mu] => Ok(AdversaryParams { edge_count, beta, mu }),
                _ => Err(CliError::Input(format!("grid entry {t:?}: expected edges,beta,mu"))),
            }
        })
        .collect()
}

pub const VERIFY_HEADER: &str =
    "construction,edge_count,beta,mu,strategy,served,opt,trace_length,ratio,predicted,match,status";

pub fn verify(construction: Construction, grid: &str, budget: Option<u64>) -> Result<u8, CliError> {
    let params = parse_grid(grid)?;
    let budget = budget.unwrap_or(RunConfig::default().search_budget);
    let strategy = match construction {
        Construction::SapWorst => Strategy::Sap,
        Construction::WspWorst => Strategy::Wsp,
    };
    let mut mismatches = 0usize;
    let mut skipped = 0usize;
    println!("{VERIFY_HEADER}");
    for p in params {
        let prefix = format!("{construction},{},{},{},{strategy}", p.edge_count, p.beta, p.mu);
        let inst = match generate(construction, p) {
            Ok(i) => i,
            Err(e) => {
                mismatches += 1;
                println!("{prefix},,,,,,false,error: {}", csv_text(&e.to_string()));
                continue;
            }
        };
        let predicted = to_fraction_string(&inst.predicted_ratio);
        let len = inst.trace.requests.len();
        let opt = match optimal_served_with(&inst.net, &inst.trace, budget) {
            Ok(o) => o,
            Err(OracleError::BudgetExceeded { .. }) => {
                skipped += 1;
                println!("{prefix},,,{len},,{predicted},,skipped");
                continue;
            }
            Err(e) => return Err(e.into()),
        };
        let fast = inst.constructive_opt()?;
        let rep = ratio_report(&inst.net, &inst.trace, strategy, opt)?;
        let ok = rep.ratio == inst.predicted_ratio && fast.count == rep.opt_served;
        if !ok {
            mismatches += 1;
        }
        println!(
            "{prefix},{},{},{len},{},{predicted},{ok},{}",
            rep.algorithm_served,
            rep.opt_served,
            to_fraction_string(&rep.ratio),
            if ok {
                "ok".to_string()
            } else {
                format!("ratio {} vs predicted {}", to_decimal_string(&rep.ratio, 6), to_decimal_string(&inst.predicted_ratio, 6))
            }
        );
    }
    Ok(if mismatches > 0 {
        EXIT_MISMATCH
    } else if skipped > 0 {
        EXIT_BUDGET
    } else {
        EXIT_OK
    })
}

fn csv_text(s: &str) -> String {
    s.replace([',', '\n'], " ")
}

pub fn paths(network: &Path, src: &str, dst: &str, max_hops: Option<usize>) -> Result<u8, CliError> {
    let net = load_network(network)?;
    let hops = max_hops.unwrap_or(RunConfig::default().max_hops);
    let ps = enumerate_paths(&net, &src.into(), &dst.into(), hops)
        .map_err(|e| CliError::Input(e.to_string()))?;
    let docs: Vec<_> = ps.paths.iter().map(path_to_doc).collect();
    print!("{}", to_json(&docs));
    Ok(EXIT_OK)
}
