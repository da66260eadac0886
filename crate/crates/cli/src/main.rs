use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use hopftwist::cli::commands::{input_error, run_command, CheckKind, Command, RunOptions};
use hopftwist::cli::document::{builtin_document, load, Format, DOCUMENT_NAMES};
use hopftwist::par::Exec;

/// Exact computations with Hopf 2-cocycles on O(G) and the twisted algebras O(G)_J.
#[derive(Parser, Debug)]
#[command(name = "hopftwist", version)]
struct Cli {
    /// Input document (JSON).
    #[arg(short, long, global = true, conflicts_with = "example_doc")]
    input: Option<PathBuf>,
    /// Use a shipped document instead of --input.
    #[arg(short = 'e', long = "example", global = true)]
    example_doc: Option<String>,
    #[arg(short, long, global = true, value_enum)]
    format: Option<FormatArg>,
    /// Torus exponent box [-b, b].
    #[arg(long = "box", global = true)]
    torus_box: Option<i32>,
    /// Run batch work on one thread.
    #[arg(long, global = true)]
    sequential: bool,
    #[command(subcommand)]
    command: Cmd,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum FormatArg {
    Text,
    Machine,
}

#[derive(Subcommand, Debug)]
enum Cmd {
    /// Check the document: Hopf axioms, cocycle data, derivations.
    Validate,
    /// Relations of the twisted algebra.
    Present,
    /// Product of two normal-form expressions.
    Multiply { left: String, right: String },
    /// Normal form of a word in the generators.
    NormalForm { word: String },
    /// Center up to a filtered degree inside the torus box.
    Center {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Torus lattice and unipotent support.
    Support,
    /// Simplicity verdict.
    Simple {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Structure of the twisted algebra.
    Structure {
        #[arg(long)]
        degree: Option<u32>,
    },
    /// Axiom checks.
    Check {
        #[command(subcommand)]
        what: CheckCmd,
    },
    /// Print a shipped document.
    Example { name: String },
}

#[derive(Subcommand, Debug)]
enum CheckCmd {
    Hopf,
    Cybe,
    Cocycle {
        #[arg(long)]
        degree: Option<u32>,
    },
    Invariance,
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let (command, degree) = match cli.command {
        Cmd::Example { name } => {
            return match builtin_document(&name) {
                Some(text) => {
                    print!("{text}");
                    ExitCode::SUCCESS
                }
                None => {
                    eprintln!("error: unknown example `{name}`; known: {}", DOCUMENT_NAMES.join(", "));
                    ExitCode::from(2)
                }
            };
        }
        Cmd::Validate => (Command::Validate, None),
        Cmd::Present => (Command::Present, None),
        Cmd::Multiply { left, right } => (Command::Multiply(left, right), None),
        Cmd::NormalForm { word } => (Command::NormalForm(word), None),
        Cmd::Center { degree } => (Command::Center, degree),
        Cmd::Support => (Command::Support, None),
        Cmd::Simple { degree } => (Command::Simple, degree),
        Cmd::Structure { degree } => (Command::Structure, degree),
        Cmd::Check { what } => match what {
            CheckCmd::Hopf => (Command::Check(CheckKind::Hopf), None),
            CheckCmd::Cybe => (Command::Check(CheckKind::Cybe), None),
            CheckCmd::Cocycle { degree } => (Command::Check(CheckKind::Cocycle), degree),
            CheckCmd::Invariance => (Command::Check(CheckKind::Invariance), None),
        },
    };
    let flag_format = cli.format.map(|f| match f {
        FormatArg::Text => Format::Text,
        FormatArg::Machine => Format::Machine,
    });
    let text = match (&cli.input, &cli.example_doc) {
        (Some(path), _) => match std::fs::read_to_string(path) {
            Ok(t) => t,
            Err(e) => return fail(&command.name(), &format!("{}: {e}", path.display()), flag_format),
        },
        (None, Some(name)) => match builtin_document(name) {
            Some(t) => t.to_string(),
            None => return fail(&command.name(), &format!("unknown example `{name}`"), flag_format),
        },
        (None, None) => return fail(&command.name(), "no input: pass --input FILE or --example NAME", flag_format),
    };
    let loaded = match load(&text) {
        Ok(l) => l,
        Err(e) => return fail(&command.name(), &e.to_string(), flag_format),
    };
    let format = flag_format.or(loaded.document.options.format).unwrap_or_default();
    let opts = RunOptions {
        degree,
        torus_box: cli.torus_box,
        exec: if cli.sequential { Exec::Sequential } else { Exec::Parallel },
    };
    let report = run_command(&command, &loaded, &opts);
    print!("{}", report.emit(format));
    ExitCode::from(report.status.exit_code() as u8)
}

fn fail(cmd: &str, message: &str, format: Option<Format>) -> ExitCode {
    let r = input_error(cmd, message);
    match format.unwrap_or_default() {
        Format::Machine => print!("{}", r.emit(Format::Machine)),
        Format::Text => eprintln!("{}", r.text),
    }
    ExitCode::from(2)
}
