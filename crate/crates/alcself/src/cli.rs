//! Batch entry point. Exit codes: 0 for success (accepting / all axioms hold
//! / a match exists), 1 for the negative outcome, 2 for usage and parse
//! errors, 3 for exceeded resource budgets. Diagnostics go to stderr only;
//! stdout is machine-readable and byte-stable for fixed inputs.

use std::ffi::OsString;
use std::fs;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use crate::atm::{self, Atm, AtmError};
use crate::cq::{self, Budget, SolveError};
use crate::dl::check_kb;
use crate::lemmas;
use crate::reduction::{self, ReductionBundle};
use crate::serial;
use crate::witness::{self, Origin};

#[derive(Parser)]
#[command(
    name = "alcself",
    version,
    about = "Compile alternating Turing machines into ALC+Self knowledge bases and spoiling queries, build their intended models, and check the correctness lemmas"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum KbFormat {
    Dltext,
    Owlfs,
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum WitnessKind {
    /// The bare configuration unit of depth n+1.
    Unit,
    /// The configuration tree of the initial configuration.
    Conf,
    /// The enriched configuration tree of the initial configuration.
    Enr,
    /// The quasi-computation tree of an accepting run.
    Qct,
}

#[derive(Subcommand)]
enum Command {
    /// Decide whether the machine accepts (exit 0) or rejects (exit 1).
    Oracle {
        #[arg(long)]
        atm: PathBuf,
    },
    /// Emit the knowledge base and spoiling query for a machine.
    Compile {
        #[arg(long)]
        atm: PathBuf,
        #[arg(long)]
        out_kb: PathBuf,
        #[arg(long)]
        out_query: PathBuf,
        /// Replace the ABox assertion by the aux-role GCI.
        #[arg(long)]
        tbox_only: bool,
        #[arg(long, value_enum, default_value = "dltext")]
        format: KbFormat,
    },
    /// Build one of the intended models and write it as an interpretation.
    Witness {
        #[arg(long)]
        atm: PathBuf,
        #[arg(long, value_enum)]
        kind: WitnessKind,
        #[arg(long)]
        out: PathBuf,
        /// For qct: flip one untouched tape cell, as `node,cell` with the
        /// node addressed by its run-tree path over {0,1}.
        #[arg(long)]
        fault: Option<String>,
    },
    /// Check an interpretation against a knowledge base, one verdict per
    /// axiom; exit 0 iff every axiom holds.
    Check {
        #[arg(long)]
        interp: PathBuf,
        #[arg(long)]
        kb: PathBuf,
    },
    /// Evaluate a query over an interpretation: sorted answer tuples, or a
    /// boolean with --exists; exit 0 iff a match exists.
    Eval {
        #[arg(long)]
        interp: PathBuf,
        #[arg(long)]
        query: PathBuf,
        #[arg(long)]
        exists: bool,
    },
    /// Run the lemma verification suites and print the traceability table.
    VerifyLemmas {
        /// Largest unit depth for the unit suite.
        #[arg(long, default_value_t = 3)]
        n: u32,
        /// Machine for the machine-dependent suites (default: the built-in
        /// reference acceptor; the oracle check always uses the built-in
        /// reference rejector as well).
        #[arg(long)]
        atm: Option<PathBuf>,
    },
}

enum Failure {
    Data(String),
    Resource(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Data(_) => 2,
            Failure::Resource(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Data(m) | Failure::Resource(m) => m,
        }
    }
}

impl From<serial::SerialError> for Failure {
    fn from(e: serial::SerialError) -> Failure {
        Failure::Data(e.to_string())
    }
}

impl From<AtmError> for Failure {
    fn from(e: AtmError) -> Failure {
        match e {
            AtmError::HaltingBudget(_)
            | AtmError::ConfigBudget(_)
            | AtmError::QuasiEnumerationTooLarge(_) => Failure::Resource(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<SolveError> for Failure {
    fn from(e: SolveError) -> Failure {
        match e {
            SolveError::BudgetExceeded(_) => Failure::Resource(e.to_string()),
            other => Failure::Data(other.to_string()),
        }
    }
}

impl From<witness::WitnessError> for Failure {
    fn from(e: witness::WitnessError) -> Failure {
        Failure::Data(e.to_string())
    }
}

impl From<reduction::ReductionError> for Failure {
    fn from(e: reduction::ReductionError) -> Failure {
        Failure::Data(e.to_string())
    }
}

impl From<atm::FaultError> for Failure {
    fn from(e: atm::FaultError) -> Failure {
        Failure::Data(e.to_string())
    }
}

fn read_file(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn write_file(path: &Path, contents: &str) -> Result<(), Failure> {
    fs::write(path, contents).map_err(|e| Failure::Data(format!("{}: {e}", path.display())))
}

fn load_atm(path: &Path) -> Result<Atm, Failure> {
    let (machine, warnings) = serial::parse_atm(&read_file(path)?)?;
    for w in warnings {
        eprintln!("warning: {w}");
    }
    Ok(machine)
}

/// Runs the CLI on the given arguments and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = e.exit_code();
            let _ = e.print();
            return code;
        }
    };
    match execute(cli.command) {
        Ok(code) => code,
        Err(failure) => {
            eprintln!("error: {}", failure.message());
            failure.exit_code()
        }
    }
}

fn print_stats(bundle: &ReductionBundle) {
    let stats = &bundle.stats;
    println!("abox_assertions={}", stats.abox_assertions);
    println!("atm_fingerprint={}", stats.atm_fingerprint);
    println!("kb_axioms={}", stats.tbox_gcis + stats.abox_assertions);
    println!("query_atoms={}", stats.query_atoms);
    println!("query_variables={}", stats.query_variables);
    println!("tbox_gcis={}", stats.tbox_gcis);
    for (schema, count) in &stats.schema_counts {
        println!("schema.{schema}={count}");
    }
}

fn execute(command: Command) -> Result<i32, Failure> {
    match command {
        Command::Oracle { atm } => {
            let machine = load_atm(&atm)?;
            if atm::is_accepting(&machine)? {
                println!("accepting");
                Ok(0)
            } else {
                println!("rejecting");
                Ok(1)
            }
        }
        Command::Compile {
            atm,
            out_kb,
            out_query,
            tbox_only,
            format,
        } => {
            let machine = load_atm(&atm)?;
            let bundle = reduction::reduce(&machine, tbox_only)?;
            let kb_text = match format {
                KbFormat::Dltext => serial::emit_kb_dltext(&bundle.kb),
                KbFormat::Owlfs => serial::emit_kb_owlfs(&bundle.kb),
            };
            write_file(&out_kb, &kb_text)?;
            write_file(&out_query, &serial::emit_cq(&bundle.query)?)?;
            print_stats(&bundle);
            Ok(0)
        }
        Command::Witness {
            atm,
            kind,
            out,
            fault,
        } => {
            let machine = load_atm(&atm)?;
            if fault.is_some() && kind != WitnessKind::Qct {
                return Err(Failure::Data(
                    "--fault applies only to --kind qct".to_string(),
                ));
            }
            let interp = match kind {
                WitnessKind::Unit => witness::build_unit(machine.n() + 1)?,
                WitnessKind::Conf => {
                    witness::build_config_tree(&machine, &machine.initial_configuration())?
                }
                WitnessKind::Enr => witness::build_enriched_tree(
                    &machine,
                    &machine.initial_configuration(),
                    &Origin::Init,
                )?,
                WitnessKind::Qct => {
                    let run = atm::find_accepting_run(&machine)?.ok_or_else(|| {
                        Failure::Data(
                            "the machine rejects; a quasi-computation tree needs an accepting run"
                                .to_string(),
                        )
                    })?;
                    let run = match &fault {
                        None => run,
                        Some(spec) => {
                            let (node, cell) = spec.rsplit_once(',').ok_or_else(|| {
                                Failure::Data("--fault expects node,cell".to_string())
                            })?;
                            let cell: usize = cell.parse().map_err(|_| {
                                Failure::Data(format!("invalid cell index {cell:?}"))
                            })?;
                            atm::inject_tape_fault(&machine, &run, node, cell)?
                        }
                    };
                    witness::build_quasi_computation_tree(&machine, &run)?
                }
            };
            write_file(&out, &serial::emit_interp(&interp))?;
            println!("domain_size={}", interp.domain().len());
            Ok(0)
        }
        Command::Check { interp, kb } => {
            let interp = serial::parse_interp(&read_file(&interp)?)?;
            let kb = serial::parse_kb(&read_file(&kb)?)?;
            let report = check_kb(&interp, &kb);
            for entry in &report.entries {
                println!("{entry}");
            }
            Ok(if report.all_hold() { 0 } else { 1 })
        }
        Command::Eval {
            interp,
            query,
            exists,
        } => {
            let interp = serial::parse_interp(&read_file(&interp)?)?;
            let query = serial::parse_cq(&read_file(&query)?)?;
            let budget = Budget::default();
            if exists {
                let found = cq::exists_match(&interp, &query, &budget)?;
                println!("{found}");
                Ok(if found { 0 } else { 1 })
            } else {
                let matches = cq::find_matches(&interp, &query, &budget)?;
                for tuple in &matches {
                    println!("{}", tuple.join(" "));
                }
                Ok(if matches.is_empty() { 1 } else { 0 })
            }
        }
        Command::VerifyLemmas { n, atm } => {
            let accepting = match atm {
                Some(path) => load_atm(&path)?,
                None => crate::atm::tiny_acceptor(),
            };
            let lines = lemmas::run_all(&accepting, &crate::atm::tiny_rejector(), n);
            let mut all = true;
            for line in &lines {
                all &= line.pass;
                println!("{line}");
            }
            Ok(if all { 0 } else { 1 })
        }
    }
}
