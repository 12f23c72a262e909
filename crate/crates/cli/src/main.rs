//! Command-line front end: validation, integrality certificates, target
//! analysis, canonical linearization construction, exact solving and LP
//! export, wired into reproducible pipelines.
//!
//! Machine-readable JSON goes to stdout, human summaries to stderr. Exit
//! codes: 0 success / property holds, 1 property fails (non-integral or
//! intersection property violated), 2 usage or input error, 3 enumeration
//! guard exceeded.

use clap::{Parser, Subcommand, ValueEnum};
use polylin::files::{
    linearization_to_json, read_linearization, read_polynomial, PolynomialInstance,
};
use polylin::integrality::{
    decide_integral, find_min_upper_cycle, fractional_certificate, tdi_single_and,
    IntegralityError, IntegralityVerdict,
};
use polylin::lp::{optimize_relaxation, LpStatus};
use polylin::mip::{check_a_prime, check_b_prime, has_intersection_property, ConditionWitness};
use polylin::monomial::Monomial;
use polylin::oracle::{brute_force_min_over, OracleError};
use polylin::rational::format_rational;
use polylin::star::build_star;
use polylin::{build_system, Assignment, Linearization, Objective};
use serde_json::json;
use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "polylin",
    about = "Linearize, analyze and exactly solve binary polynomial optimization problems",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the structural invariants of a linearization file.
    Validate { lin: PathBuf },
    /// Decide integrality of the relaxation's projection and emit a
    /// fractional certificate when it fails.
    CheckIntegral {
        lin: PathBuf,
        /// Target monomials: inline like "1_2,2_3" or a JSON file of index
        /// arrays. Defaults to all proper monomials.
        #[arg(long)]
        targets: Option<String>,
    },
    /// Test the monomial intersection property of a polynomial's targets.
    CheckMip {
        poly: PathBuf,
        /// Also run the index-based conditions and assert the equivalence.
        #[arg(long)]
        cross_check: bool,
    },
    /// Build the canonical linearization from the intersection closure.
    BuildStar {
        poly: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Minimize a polynomial exactly.
    Solve {
        poly: PathBuf,
        /// Solve over this linearization instead of the canonical one.
        #[arg(long)]
        lin: Option<PathBuf>,
        /// dp (default; needs an acyclic linearization), lp (relaxation
        /// bound), or brute (exhaustive enumeration).
        #[arg(long, value_enum)]
        engine: Option<Engine>,
        /// Lift the enumeration guard for the brute engine.
        #[arg(long)]
        force: bool,
    },
    /// Write the relaxation of a polynomial or linearization in LP format.
    ExportLp {
        input: PathBuf,
        #[arg(short, long)]
        output: PathBuf,
    },
    /// Print the primal/dual certificate pair for a single AND-constraint.
    TdiDemo {
        #[arg(short = 'k')]
        operand_count: usize,
        /// Comma-separated integer weights, e.g. "-1,2,2".
        #[arg(short = 'w', allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        wbar: i64,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Engine {
    Dp,
    Lp,
    Brute,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {}", e.message);
            ExitCode::from(e.code)
        }
    }
}

struct Failure {
    code: u8,
    message: String,
}

fn fail(code: u8, message: impl Into<String>) -> Failure {
    Failure {
        code,
        message: message.into(),
    }
}

impl From<polylin::files::FileError> for Failure {
    fn from(e: polylin::files::FileError) -> Self {
        fail(2, e.to_string())
    }
}

impl From<OracleError> for Failure {
    fn from(e: OracleError) -> Self {
        let code = match e {
            OracleError::GuardExceeded { .. } => 3,
            _ => 2,
        };
        fail(code, e.to_string())
    }
}

impl From<IntegralityError> for Failure {
    fn from(e: IntegralityError) -> Self {
        let code = match e {
            IntegralityError::CycleBudgetExceeded { .. } => 3,
            _ => 2,
        };
        fail(code, e.to_string())
    }
}

/// Enumeration guard override from the environment.
fn guard_override() -> Option<u32> {
    std::env::var("POLYLIN_GUARD_N")
        .ok()
        .and_then(|v| v.parse().ok())
}

fn run(command: Command) -> Result<ExitCode, Failure> {
    match command {
        Command::Validate { lin } => cmd_validate(&lin),
        Command::CheckIntegral { lin, targets } => cmd_check_integral(&lin, targets.as_deref()),
        Command::CheckMip { poly, cross_check } => cmd_check_mip(&poly, cross_check),
        Command::BuildStar { poly, output } => cmd_build_star(&poly, &output),
        Command::Solve {
            poly,
            lin,
            engine,
            force,
        } => cmd_solve(&poly, lin.as_deref(), engine, force),
        Command::ExportLp { input, output } => cmd_export_lp(&input, &output),
        Command::TdiDemo {
            operand_count,
            weights,
            wbar,
        } => cmd_tdi_demo(operand_count, &weights, wbar),
    }
}

fn cmd_validate(path: &Path) -> Result<ExitCode, Failure> {
    let lin = read_linearization(path)?;
    let diagnostics = lin.validate();
    let simple = diagnostics.is_empty() && lin.is_simple();
    println!(
        "{}",
        serde_json::to_string_pretty(&json!({
            "valid": diagnostics.is_empty(),
            "simple": simple,
            "diagnostics": diagnostics.iter().map(|d| d.to_string()).collect::<Vec<_>>(),
        }))
        .expect("serializable")
    );
    if diagnostics.is_empty() {
        eprintln!(
            "valid linearization ({} monomials, {} constraints{})",
            lin.monomials().len(),
            lin.constraints().len(),
            if simple { ", simple" } else { ", not simple" }
        );
        Ok(ExitCode::SUCCESS)
    } else {
        for d in &diagnostics {
            eprintln!("invalid: {d}");
        }
        Ok(ExitCode::from(1))
    }
}

fn parse_targets(
    lin: &Linearization,
    selector: Option<&str>,
) -> Result<BTreeSet<Monomial>, Failure> {
    match selector {
        None => Ok(lin.proper_monomials().cloned().collect()),
        Some(text) => {
            let path = Path::new(text);
            if path.exists() {
                let raw = std::fs::read_to_string(path)
                    .map_err(|e| fail(2, format!("cannot read {}: {e}", path.display())))?;
                let arrays: Vec<Vec<u32>> = serde_json::from_str(&raw)
                    .map_err(|e| fail(2, format!("malformed target file: {e}")))?;
                arrays
                    .into_iter()
                    .map(|a| Monomial::new(a).map_err(|e| fail(2, e.to_string())))
                    .collect()
            } else {
                text.split(',')
                    .map(|part| Monomial::from_key(part.trim()).map_err(|e| fail(2, e.to_string())))
                    .collect()
            }
        }
    }
}

fn cmd_check_integral(path: &Path, targets: Option<&str>) -> Result<ExitCode, Failure> {
    let lin = read_linearization(path)?;
    let targets = parse_targets(&lin, targets)?;
    let verdict = decide_integral(&lin, &targets)?;
    match verdict {
        IntegralityVerdict::Integral => {
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({ "integral": true })).expect("serializable")
            );
            eprintln!("integral: the projection onto singleton and target coordinates is integral");
            Ok(ExitCode::SUCCESS)
        }
        IntegralityVerdict::NonIntegral(_) => {
            let cycle = find_min_upper_cycle(&lin, &targets, None)?;
            let certificate = fractional_certificate(&lin, &targets, &cycle)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "integral": false,
                    "certificate": certificate.to_json(),
                }))
                .expect("serializable")
            );
            eprintln!(
                "non-integral: witness cycle with {} upper node(s); fractional point attached",
                cycle.upper_nodes().len()
            );
            Ok(ExitCode::from(1))
        }
    }
}

fn witness_json(witness: &Option<ConditionWitness>) -> serde_json::Value {
    match witness {
        None => serde_json::Value::Null,
        Some(ConditionWitness::Triple { m1, m2, m3 }) => {
            json!([m1.vars(), m2.vars(), m3.vars()])
        }
        Some(ConditionWitness::MonomialCycle { monomials }) => {
            json!(monomials.iter().map(|m| m.vars()).collect::<Vec<_>>())
        }
        Some(ConditionWitness::IndexTriple { i1, i2, i3 }) => json!([i1, i2, i3]),
        Some(ConditionWitness::IndexCycle { monomials, indices }) => json!({
            "monomials": monomials.iter().map(|m| m.vars()).collect::<Vec<_>>(),
            "indices": indices,
        }),
    }
}

fn cmd_check_mip(path: &Path, cross_check: bool) -> Result<ExitCode, Failure> {
    let instance = read_polynomial(path)?;
    let targets = instance.targets();
    let verdict = has_intersection_property(&targets);
    let mut payload = json!({
        "mip": verdict.holds,
        "violated": verdict.violated.map(|c| format!("{c:?}")),
        "witness": witness_json(&verdict.witness),
    });
    if cross_check {
        let primed = check_a_prime(&targets, instance.n).satisfied
            || check_b_prime(&targets, instance.n).satisfied;
        let agrees = primed == !verdict.holds;
        payload["delpia_agrees"] = json!(agrees);
        if !agrees {
            return Err(fail(
                2,
                "cross-check failed: index-based conditions disagree with the set-based ones",
            ));
        }
    }
    println!(
        "{}",
        serde_json::to_string_pretty(&payload).expect("serializable")
    );
    if verdict.holds {
        eprintln!("monomial intersection property holds");
        Ok(ExitCode::SUCCESS)
    } else {
        eprintln!(
            "intersection property violated ({})",
            verdict
                .violated
                .map(|c| format!("{c:?}"))
                .unwrap_or_default()
        );
        Ok(ExitCode::from(1))
    }
}

fn cmd_build_star(poly: &Path, output: &Path) -> Result<ExitCode, Failure> {
    let instance = read_polynomial(poly)?;
    let star = build_star(&instance.targets(), instance.n);
    std::fs::write(output, linearization_to_json(&star))
        .map_err(|e| fail(2, format!("cannot write {}: {e}", output.display())))?;
    eprintln!(
        "wrote {} ({} monomials, {} constraints)",
        output.display(),
        star.monomials().len(),
        star.constraints().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn assignment_json(assignment: &Assignment) -> serde_json::Value {
    let map: serde_json::Map<String, serde_json::Value> = assignment
        .iter()
        .map(|(m, &v)| (m.key(), json!(v as u8)))
        .collect();
    serde_json::Value::Object(map)
}

fn cmd_solve(
    poly: &Path,
    lin_path: Option<&Path>,
    engine: Option<Engine>,
    force: bool,
) -> Result<ExitCode, Failure> {
    let instance = read_polynomial(poly)?;
    let targets = instance.targets();
    let linearization = match lin_path {
        Some(p) => Some(read_linearization(p)?),
        None => None,
    };

    match engine {
        None | Some(Engine::Dp) => {
            let lin = match &linearization {
                Some(l) => l.clone(),
                None => {
                    let verdict = has_intersection_property(&targets);
                    if !verdict.holds {
                        let which = verdict
                            .violated
                            .map(|c| format!("{c:?}"))
                            .unwrap_or_default();
                        println!(
                            "{}",
                            serde_json::to_string_pretty(&json!({
                                "mip": false,
                                "violated": which,
                                "witness": witness_json(&verdict.witness),
                            }))
                            .expect("serializable")
                        );
                        eprintln!(
                            "intersection property violated ({which}); \
                             no acyclic linearization exists — rerun with --engine brute \
                             for the exact optimum or --engine lp for the relaxation bound"
                        );
                        return Ok(ExitCode::from(1));
                    }
                    build_star(&targets, instance.n)
                }
            };
            match polylin::dp::solve_acyclic(&lin, &instance.objective) {
                Ok((value, assignment)) => {
                    println!(
                        "{}",
                        serde_json::to_string_pretty(&json!({
                            "value": format_rational(&value),
                            "assignment": assignment_json(&assignment),
                            "engine": "dp",
                        }))
                        .expect("serializable")
                    );
                    eprintln!("optimum {}", format_rational(&value));
                    Ok(ExitCode::SUCCESS)
                }
                Err(polylin::dp::DpError::CyclicInput) => Err(fail(
                    2,
                    "dp engine needs an acyclic linearization; \
                     use --engine brute or --engine lp for this input",
                )),
                Err(e) => Err(fail(2, e.to_string())),
            }
        }
        Some(Engine::Brute) => {
            let lin = match linearization {
                Some(l) => l,
                None => Linearization::new(instance.n, targets.iter().cloned(), std::iter::empty()),
            };
            let guard = if force { Some(62) } else { guard_override() };
            let (value, assignment) = brute_force_min_over(&lin, &instance.objective, guard)?;
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "value": format_rational(&value),
                    "assignment": assignment_json(&assignment),
                    "engine": "brute",
                }))
                .expect("serializable")
            );
            eprintln!("optimum {}", format_rational(&value));
            Ok(ExitCode::SUCCESS)
        }
        Some(Engine::Lp) => {
            let lin = match linearization {
                Some(l) => l,
                None => build_star(&targets, instance.n),
            };
            let integral = decide_integral(&lin, &targets)
                .map(|v| v.is_integral())
                .unwrap_or(false);
            let res = optimize_relaxation(&lin, &instance.objective)
                .map_err(|e| fail(2, e.to_string()))?;
            if res.status != LpStatus::Optimal {
                return Err(fail(2, "relaxation LP did not reach an optimum"));
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&json!({
                    "value": format_rational(&res.value),
                    "engine": "lp",
                    "integral": integral,
                    "exact": integral,
                }))
                .expect("serializable")
            );
            if integral {
                eprintln!(
                    "optimum {} (relaxation is integral)",
                    format_rational(&res.value)
                );
            } else {
                eprintln!(
                    "lower bound {} (relaxation is not integral)",
                    format_rational(&res.value)
                );
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn cmd_export_lp(input: &Path, output: &Path) -> Result<ExitCode, Failure> {
    let raw = std::fs::read_to_string(input)
        .map_err(|e| fail(2, format!("cannot read {}: {e}", input.display())))?;
    let sniffed: serde_json::Value = serde_json::from_str(&raw)
        .map_err(|e| fail(2, format!("malformed JSON in {}: {e}", input.display())))?;
    let (lin, objective) = if sniffed.get("constraints").is_some() {
        let lin = polylin::files::linearization_from_json(&raw)?;
        (lin, Objective::default())
    } else {
        let instance: PolynomialInstance = polylin::files::polynomial_from_json(&raw)?;
        let lin = Linearization::standard(instance.n, instance.targets())
            .map_err(|e| fail(2, e.to_string()))?;
        (lin, instance.objective)
    };
    let sys = build_system(&lin);
    let mut buffer = Vec::new();
    sys.export_lp(&objective, &mut buffer)
        .map_err(|e| fail(2, e.to_string()))?;
    std::fs::write(output, &buffer)
        .map_err(|e| fail(2, format!("cannot write {}: {e}", output.display())))?;
    eprintln!(
        "wrote {} ({} variables, {} rows)",
        output.display(),
        sys.variables().len(),
        sys.rows().len()
    );
    Ok(ExitCode::SUCCESS)
}

fn cmd_tdi_demo(k: usize, weights: &str, wbar: i64) -> Result<ExitCode, Failure> {
    let w: Result<Vec<i64>, _> = weights
        .split(',')
        .map(|p| p.trim().parse::<i64>())
        .collect();
    let w = w.map_err(|e| fail(2, format!("bad weight list: {e}")))?;
    let certificate = tdi_single_and(k, &w, wbar)?;
    println!(
        "{}",
        serde_json::to_string_pretty(&certificate.to_json()).expect("serializable")
    );
    eprintln!(
        "case {} with common objective value {}",
        certificate.case, certificate.objective
    );
    Ok(ExitCode::SUCCESS)
}
