//! `argonto`: compile a legal ontology into arguments and query it.

mod render;

use std::path::{Path, PathBuf};
use std::process::ExitCode;

use argonto_core::engine::Limits;
use argonto_core::ontology::{
    parse_concept_expr, parse_ground_literal, parse_ontology, parse_priority,
};
use argonto_core::preferences::{to_apx, AfDump};
use argonto_core::semantics::{AcceptanceMode, Semantics};
use argonto_core::tasks::{consistency_check, Compiled, Reasoner, Settings, TaskError};
use argonto_core::translation::{check_well_defined, translate_ontology, TranslateOptions};
use argonto_core::{Formula, Ontology};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

const EXIT_NEGATIVE: u8 = 1;
const EXIT_USAGE: u8 = 2;
const EXIT_BUDGET: u8 = 3;

#[derive(Parser, Debug)]
#[command(
    name = "argonto",
    version,
    about = "Argumentation-based reasoning over legal ontologies"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Report whether any argument attacks another (exit 1 when inconsistent).
    Check(Common),
    /// Is a ground assertion accepted?
    Accept {
        #[command(flatten)]
        common: Common,
        #[arg(long = "assert", value_name = "LITERAL")]
        assertion: String,
    },
    /// Is an individual an instance of a class expression?
    Instance {
        #[command(flatten)]
        common: Common,
        individual: String,
        #[arg(long, value_name = "CLASS")]
        class: String,
        /// Require every conjunct witness to come from one extension.
        #[arg(long)]
        same_extension: bool,
    },
    /// Conclusions of each extension.
    Conclusions(Common),
    /// Individuals that are accepted instances of a concept.
    InstancesOf {
        #[command(flatten)]
        common: Common,
        concept: String,
    },
    /// Concepts an individual is accepted to belong to.
    ConceptsOf {
        #[command(flatten)]
        common: Common,
        individual: String,
    },
    /// Explain why an accepted assertion holds (exit 1 when it is not accepted).
    Explain {
        #[command(flatten)]
        common: Common,
        #[arg(long = "assert", value_name = "LITERAL")]
        assertion: String,
        /// List only defeasible norms in the rule parts.
        #[arg(long)]
        norms_only: bool,
    },
    /// List every constructed argument.
    Arguments(Common),
    /// Print the attack and defeat relations.
    Af(Common),
    /// Enumerate extensions.
    Extensions(Common),
    /// Check transposition closure and classicality (exit 1 on failure).
    WellDefined(Common),
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Text,
    Apx,
}

#[derive(Args, Debug)]
struct Common {
    /// Ontology file.
    input: PathBuf,
    /// co, gr or pr.
    #[arg(long, default_value = "gr")]
    semantics: Semantics,
    /// sceptical or credulous.
    #[arg(long, default_value = "sceptical")]
    mode: AcceptanceMode,
    #[arg(long, default_value_t = 1)]
    max_skolem_depth: u32,
    #[arg(long, env = "ARGONTO_BUDGET", default_value_t = 100_000)]
    max_arguments: usize,
    /// Largest premise subset examined for classicality.
    #[arg(long, default_value_t = 3)]
    max_subset: usize,
    /// Do not close strict rules under transposition.
    #[arg(long)]
    no_transpose: bool,
    /// Omit the extra existential-style rule for universal restrictions.
    #[arg(long)]
    no_table_verbatim: bool,
    /// Replace the file's priorities, e.g. `p2<p1`. Repeatable.
    #[arg(long = "priority", value_name = "PAIR")]
    priorities: Vec<String>,
    #[arg(long, value_enum, default_value = "json")]
    format: Format,
    #[arg(long, value_name = "PATH")]
    emit_theory: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    emit_arguments: Option<PathBuf>,
    #[arg(long, value_name = "PATH")]
    emit_af: Option<PathBuf>,
}

/// Failure with its exit status.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn usage(message: impl Into<String>) -> Self {
        Failure {
            code: EXIT_USAGE,
            message: message.into(),
        }
    }
}

impl From<TaskError> for Failure {
    fn from(e: TaskError) -> Self {
        let code = if e.is_budget() {
            EXIT_BUDGET
        } else if matches!(e, TaskError::NotAccepted(_) | TaskError::Unknown(_)) {
            EXIT_NEGATIVE
        } else {
            EXIT_USAGE
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

impl Common {
    fn settings(&self) -> Settings {
        Settings {
            translate: TranslateOptions {
                transpose: !self.no_transpose,
                table_verbatim: !self.no_table_verbatim,
            },
            limits: Limits {
                max_skolem_depth: self.max_skolem_depth,
                max_arguments: self.max_arguments,
            },
            ..Settings::default()
        }
    }

    fn ontology(&self) -> Result<Ontology, Failure> {
        let src = std::fs::read_to_string(&self.input)
            .map_err(|e| Failure::usage(format!("{}: {e}", self.input.display())))?;
        let o = parse_ontology(&src)
            .map_err(|e| Failure::usage(format!("{}: {e}", self.input.display())))?;
        if self.priorities.is_empty() {
            return Ok(o);
        }
        let decls = self
            .priorities
            .iter()
            .map(|p| parse_priority(p).map_err(|e| Failure::usage(format!("--priority {p}: {e}"))))
            .collect::<Result<Vec<_>, _>>()?;
        o.with_priorities(decls).map_err(Failure::usage)
    }

    fn compile(&self) -> Result<Compiled, Failure> {
        let o = self.ontology()?;
        let c = Compiled::new(&o, &self.settings())?;
        self.emit(&c)?;
        Ok(c)
    }

    fn emit(&self, c: &Compiled) -> Result<(), Failure> {
        if let Some(p) = &self.emit_theory {
            write_json(p, &render::theory_json(&c.theory))?;
        }
        if let Some(p) = &self.emit_arguments {
            write_json(p, &render::arguments_json(c))?;
        }
        if let Some(p) = &self.emit_af {
            write_json(p, &af_json(c))?;
        }
        Ok(())
    }

    fn reasoner<'a>(&self, c: &'a Compiled) -> Result<Reasoner<'a>, Failure> {
        Ok(Reasoner::new(c, self.semantics, self.mode)?)
    }
}

fn write_json(path: &Path, v: &impl serde::Serialize) -> Result<(), Failure> {
    std::fs::write(path, pretty(v)).map_err(|e| Failure::usage(format!("{}: {e}", path.display())))
}

fn pretty(v: &impl serde::Serialize) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("outputs serialize");
    s.push('\n');
    s
}

fn af_json(c: &Compiled) -> AfDump {
    AfDump {
        arguments: c.store.ids().collect(),
        attacks: c.attacks.clone(),
        defeats: c.defeats.clone(),
    }
}

fn literal(s: &str) -> Result<Formula, Failure> {
    parse_ground_literal(s)
        .map(Formula::Lit)
        .map_err(|e| Failure::usage(format!("`{s}`: {e}")))
}

/// Output text and exit status.
struct Outcome {
    stdout: String,
    code: u8,
}

fn ok(stdout: String) -> Outcome {
    Outcome { stdout, code: 0 }
}

fn result_output(common: &Common, r: &argonto_core::tasks::QueryResult) -> String {
    match common.format {
        Format::Text => render::result_text(r),
        _ => pretty(r),
    }
}

fn run(cli: Cli) -> Result<Outcome, Failure> {
    match cli.command {
        Command::Check(common) => {
            let c = common.compile()?;
            let r = consistency_check(&c);
            let code = if r.answer_bool() == Some(true) {
                0
            } else {
                EXIT_NEGATIVE
            };
            Ok(Outcome {
                stdout: result_output(&common, &r),
                code,
            })
        }
        Command::Accept { common, assertion } => {
            let x = literal(&assertion)?;
            let c = common.compile()?;
            let r = common.reasoner(&c)?.assertion_acceptance(&x);
            Ok(ok(result_output(&common, &r)))
        }
        Command::Instance {
            common,
            individual,
            class,
            same_extension,
        } => {
            let class = parse_concept_expr(&class)
                .map_err(|e| Failure::usage(format!("--class {class}: {e}")))?;
            let c = common.compile()?;
            let r = common
                .reasoner(&c)?
                .instance_check(&individual, &class, same_extension)?;
            Ok(ok(result_output(&common, &r)))
        }
        Command::Conclusions(common) => {
            let c = common.compile()?;
            let r = common.reasoner(&c)?.collective_result();
            Ok(ok(result_output(&common, &r)))
        }
        Command::InstancesOf { common, concept } => {
            let c = common.compile()?;
            let r = common.reasoner(&c)?.instances_of_concept(&concept);
            Ok(ok(result_output(&common, &r)))
        }
        Command::ConceptsOf { common, individual } => {
            let c = common.compile()?;
            let r = common.reasoner(&c)?.concepts_of_individual(&individual);
            Ok(ok(result_output(&common, &r)))
        }
        Command::Explain {
            common,
            assertion,
            norms_only,
        } => {
            let x = literal(&assertion)?;
            let c = common.compile()?;
            let r = common.reasoner(&c)?.explain(&x, norms_only)?;
            let stdout = match common.format {
                Format::Text => render::explain_text(&r, &c),
                _ => result_output(&common, &r),
            };
            Ok(ok(stdout))
        }
        Command::Arguments(common) => {
            let c = common.compile()?;
            let stdout = match common.format {
                Format::Text => render::arguments_text(&c),
                _ => pretty(&render::arguments_json(&c)),
            };
            Ok(ok(stdout))
        }
        Command::Af(common) => {
            let c = common.compile()?;
            let stdout = match common.format {
                Format::Apx => to_apx(c.store.len(), &c.defeats),
                Format::Text => render::af_text(&c),
                Format::Json => pretty(&af_json(&c)),
            };
            Ok(ok(stdout))
        }
        Command::Extensions(common) => {
            let c = common.compile()?;
            let exts = c.extensions(common.semantics)?;
            let stdout = match common.format {
                Format::Text => render::extensions_text(&exts),
                _ => pretty(&json!({
                    "semantics": common.semantics,
                    "extensions": exts,
                })),
            };
            Ok(ok(stdout))
        }
        Command::WellDefined(common) => {
            let o = common.ontology()?;
            let settings = common.settings();
            let t = translate_ontology(&o, &settings.translate).map_err(TaskError::from)?;
            if let Some(p) = &common.emit_theory {
                write_json(p, &render::theory_json(&t))?;
            }
            let report = check_well_defined(&t, common.max_subset, &settings.limits);
            let code = if report.passed { 0 } else { EXIT_NEGATIVE };
            let stdout = match common.format {
                Format::Text => render::well_defined_text(&report),
                _ => pretty(&report),
            };
            Ok(Outcome { stdout, code })
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(out) => {
            print!("{}", out.stdout);
            ExitCode::from(out.code)
        }
        Err(f) => {
            eprintln!("argonto: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
