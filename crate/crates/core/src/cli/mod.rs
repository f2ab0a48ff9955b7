//! The `lenslab` command line.
//!
//! Exit codes: 0 when every requested check passes, 1 when one fails, 2 on
//! an input error. `--json` prints the machine-readable report instead of
//! the text one.

use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::Value;
use thiserror::Error;

use crate::lens::Counterexample;

mod commands;
pub mod files;

#[derive(Debug, Error)]
pub enum CliError {
    /// Unreadable or malformed input; exit 2.
    #[error("input error: {0}")]
    Input(String),
    /// A structural validator rejected the input; exit 1.
    #[error("{0}")]
    Check(String),
}

#[derive(Debug, Parser)]
#[command(
    name = "lenslab",
    version,
    about = "Build, compose and check learning delta lenses"
)]
pub struct Cli {
    /// Print the JSON report only.
    #[arg(long, global = true)]
    pub json: bool,
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Run the structural validators of any artifact file.
    Validate { path: PathBuf },
    /// Check lens laws.
    Check {
        path: PathBuf,
        /// Comma-separated: stability, putget, hippocratic, putput.
        #[arg(long, default_value = "stability,putget")]
        laws: String,
        /// Policy for a scenario file that names none.
        #[arg(long)]
        policy: Option<String>,
    },
    /// Compose two or more lenses.
    Compose(ComposeArgs),
    /// Compare (k;l);m with k;(l;m).
    Assoc { k: PathBuf, l: PathBuf, m: PathBuf },
    /// Check two lenses for equivalence.
    Equiv {
        a: PathBuf,
        b: PathBuf,
        /// Functor file `{"obj_map", "arr_map"}` between the parameter
        /// categories; searched for when absent.
        #[arg(long)]
        iota: Option<PathBuf>,
    },
    /// Propagate a scenario's view update back to its source.
    Propagate {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        policy: Option<String>,
    },
    /// Compare the long lens with the composite on a scenario.
    Compare {
        #[arg(long)]
        scenario: PathBuf,
        #[arg(long)]
        policy: Option<String>,
    },
    /// Run a learner spec.
    Learner(LearnerArgs),
    /// Compare policy(g1;g2) with policy(g1);policy(g2).
    PolicyFunctoriality {
        /// quit, trans, param or least-change.
        #[arg(long)]
        policy: String,
        /// Two p-functor files for least-change, otherwise scenario files
        /// (default: scenario w and a generated suite).
        files: Vec<PathBuf>,
    },
}

#[derive(Debug, Args)]
pub struct ComposeArgs {
    #[arg(long, conflicts_with = "par", required_unless_present = "par")]
    pub seq: bool,
    #[arg(long)]
    pub par: bool,
    #[arg(required = true, num_args = 2..)]
    pub inputs: Vec<PathBuf>,
    #[arg(short, long)]
    pub out: Option<PathBuf>,
}

#[derive(Debug, Args)]
pub struct LearnerArgs {
    #[arg(long)]
    pub spec: PathBuf,
    /// Put at the parameter, input and target files that follow.
    #[arg(long)]
    pub put: bool,
    /// Compare analytic and numeric gradients.
    #[arg(long)]
    pub gradcheck: bool,
    /// `p.json a.json b.json`, each a JSON array of numbers.
    pub files: Vec<PathBuf>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Debug, Clone, Serialize)]
pub struct CheckLine {
    pub name: String,
    pub passed: bool,
    pub summary: String,
}

/// What a command found. The text form is for people, the rest is the
/// JSON body.
#[derive(Debug, Clone, Serialize)]
pub struct RunReport {
    pub command: String,
    pub status: Status,
    pub checks: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub diagnostics: Vec<CheckLine>,
    #[serde(skip_serializing_if = "Vec::is_empty")]
    pub counterexamples: Vec<Counterexample>,
    #[serde(skip_serializing_if = "Option::is_none")]
    pub error: Option<String>,
    pub data: serde_json::Map<String, Value>,
    #[serde(skip)]
    notes: Vec<String>,
}

impl RunReport {
    pub fn new(command: impl Into<String>) -> RunReport {
        RunReport {
            command: command.into(),
            status: Status::Pass,
            checks: Vec::new(),
            diagnostics: Vec::new(),
            counterexamples: Vec::new(),
            error: None,
            data: serde_json::Map::new(),
            notes: Vec::new(),
        }
    }

    pub fn failed(command: impl Into<String>, e: &CliError) -> RunReport {
        let mut r = RunReport::new(command);
        match e {
            CliError::Input(m) => {
                r.status = Status::Error;
                r.error = Some(m.clone());
            }
            CliError::Check(m) => r.check("validate", false, m.clone()),
        }
        r
    }

    pub fn check(&mut self, name: &str, passed: bool, summary: impl Into<String>) {
        if !passed && self.status == Status::Pass {
            self.status = Status::Fail;
        }
        self.checks.push(CheckLine {
            name: name.into(),
            passed,
            summary: summary.into(),
        });
    }

    /// A result that is reported but does not decide the exit code.
    pub fn diagnostic(&mut self, name: &str, passed: bool, summary: impl Into<String>) {
        self.diagnostics.push(CheckLine {
            name: name.into(),
            passed,
            summary: summary.into(),
        });
    }

    pub fn note(&mut self, line: impl Into<String>) {
        self.notes.push(line.into());
    }

    pub fn data(&mut self, key: &str, value: impl Serialize) {
        self.data.insert(
            key.into(),
            serde_json::to_value(value).expect("report data serializes"),
        );
    }

    pub fn exit_code(&self) -> i32 {
        match self.status {
            Status::Pass => 0,
            Status::Fail => 1,
            Status::Error => 2,
        }
    }

    pub fn text(&self) -> String {
        let mut out = String::new();
        let _ = writeln!(out, "lenslab {}", self.command);
        if let Some(e) = &self.error {
            let _ = writeln!(out, "error: {e}");
        }
        for c in &self.checks {
            let _ = writeln!(
                out,
                "{} {}: {}",
                if c.passed { "PASS" } else { "FAIL" },
                c.name,
                c.summary
            );
        }
        if !self.diagnostics.is_empty() {
            let _ = writeln!(out, "diagnostics:");
            for c in &self.diagnostics {
                let status = if c.passed { "holds" } else { "fails" };
                let _ = writeln!(out, "  {} {status}: {}", c.name, c.summary);
            }
        }
        for c in &self.counterexamples {
            let _ = writeln!(out, "  {c}");
        }
        for n in &self.notes {
            let _ = writeln!(out, "{n}");
        }
        out
    }

    pub fn json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serializes")
    }
}

/// Runs one command and returns its report.
pub fn run(cli: &Cli) -> RunReport {
    commands::dispatch(&cli.command)
        .unwrap_or_else(|e| RunReport::failed(command_echo(&cli.command), &e))
}

fn command_echo(c: &Command) -> String {
    let show = |p: &PathBuf| p.display().to_string();
    match c {
        Command::Validate { path } => format!("validate {}", show(path)),
        Command::Check { path, .. } => format!("check {}", show(path)),
        Command::Compose(a) => {
            let files: Vec<String> = a.inputs.iter().map(show).collect();
            format!(
                "compose {} {}",
                if a.par { "--par" } else { "--seq" },
                files.join(" ")
            )
        }
        Command::Assoc { k, l, m } => format!("assoc {} {} {}", show(k), show(l), show(m)),
        Command::Equiv { a, b, .. } => format!("equiv {} {}", show(a), show(b)),
        Command::Propagate { scenario, .. } => format!("propagate --scenario {}", show(scenario)),
        Command::Compare { scenario, .. } => format!("compare --scenario {}", show(scenario)),
        Command::Learner(a) => format!("learner --spec {}", show(&a.spec)),
        Command::PolicyFunctoriality { policy, .. } => {
            format!("policy-functoriality --policy {policy}")
        }
    }
}

/// Parses `args`, runs, prints and returns the exit code.
pub fn main_with<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            let code = if e.use_stderr() { 2 } else { 0 };
            let _ = e.print();
            return code;
        }
    };
    let report = run(&cli);
    if cli.json {
        println!("{}", report.json());
    } else {
        print!("{}", report.text());
    }
    report.exit_code()
}
