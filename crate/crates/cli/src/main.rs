//! Command-line front end: builds spaces, runs the checkers and writes a
//! markdown and a JSON report for every run.
//!
//! Exit status is 0 when every requested check passes, 1 when a check fails
//! (the report names a witness) and 2 on malformed input.

mod commands;
mod report;
mod space;

use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use commands::{CharacterKind, IdentityKind, Mode};
use report::{is_input_error, Report};
use space::SpaceArgs;

#[derive(Debug, Parser)]
#[command(name = "incidence", version, about = "Incidence bialgebras, weak antipodes and Möbius inversion")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Common {
    #[command(flatten)]
    space: SpaceArgs,
    /// Directory for `<command>.md` and `<command>.json`.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// Do not echo the markdown report on stdout.
    #[arg(long)]
    quiet: bool,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Simplicial identities, decomposition axiom, CULF monoidal structure.
    Validate(Common),
    /// Writes the space as weighted class data to `space.json`.
    Build(Common),
    /// Comultiplication, counit and product tables.
    Bialgebra(Common),
    /// The weak antipode with per-column exactness certificates.
    Antipode {
        #[command(flatten)]
        common: Common,
        /// Restrict the table to these elements (repeatable).
        #[arg(long)]
        basis: Vec<String>,
    },
    /// The Möbius function, cross-checked against the classical recursion.
    Mobius(Common),
    /// The connected quotient, its antipode and the lift check.
    Quotient(Common),
    /// Verifies a named identity at a given level.
    Verify {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        identity: IdentityKind,
        #[arg(long, default_value_t = 1)]
        level: usize,
        #[arg(long, value_enum, default_value = "objective")]
        mode: Mode,
    },
    /// Checks the hypotheses on a multiplicative character and inverts it.
    Invert {
        #[command(flatten)]
        common: Common,
        #[arg(long, value_enum)]
        character: CharacterKind,
        /// Face map used by `--character face`.
        #[arg(long, default_value_t = 1)]
        face: usize,
        #[arg(long, default_value_t = 2)]
        level: usize,
        #[arg(long, value_enum, default_value = "objective")]
        mode: Mode,
    },
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::Validate(_) => "validate",
            Command::Build(_) => "build",
            Command::Bialgebra(_) => "bialgebra",
            Command::Antipode { .. } => "antipode",
            Command::Mobius(_) => "mobius",
            Command::Quotient(_) => "quotient",
            Command::Verify { .. } => "verify",
            Command::Invert { .. } => "invert",
        }
    }

    fn common(&self) -> &Common {
        match self {
            Command::Validate(c) | Command::Build(c) | Command::Bialgebra(c) | Command::Mobius(c) | Command::Quotient(c) => c,
            Command::Antipode { common, .. } | Command::Verify { common, .. } | Command::Invert { common, .. } => common,
        }
    }
}

fn run(cmd: &Command) -> anyhow::Result<u8> {
    let common = cmd.common();
    let (space_name, loaded) = match common.space.load() {
        Ok(s) => (s.name.clone(), Ok(s)),
        Err(e) => ("unloaded".to_string(), Err(e)),
    };
    let mut report = Report::new(cmd.name(), &space_name);
    let outcome = loaded.and_then(|space| match cmd {
        Command::Validate(_) => commands::validate(&space, &mut report),
        Command::Build(c) => commands::build(&space, &c.out, &mut report),
        Command::Bialgebra(_) => commands::bialgebra(&space, &mut report),
        Command::Antipode { basis, .. } => {
            report.param("basis", basis.join(" "));
            commands::antipode(&space, basis, &mut report)
        }
        Command::Mobius(_) => commands::mobius(&space, &mut report),
        Command::Quotient(_) => commands::quotient(&space, &mut report),
        Command::Verify { identity, level, mode, .. } => {
            report.param("identity", format!("{identity:?}").to_lowercase());
            report.param("level", level);
            report.param("mode", format!("{mode:?}").to_lowercase());
            commands::verify(&space, *identity, *level, *mode, &mut report)
        }
        Command::Invert { character, face, level, mode, .. } => {
            report.param("character", format!("{character:?}").to_lowercase());
            report.param("level", level);
            report.param("mode", format!("{mode:?}").to_lowercase());
            if *character == CharacterKind::Face {
                report.param("face", face);
            }
            commands::invert(&space, *character, *face, *level, *mode, &mut report)
        }
    });
    let code = match &outcome {
        Ok(()) if report.passed => 0,
        Ok(()) => 1,
        Err(e) => {
            report.fail(e);
            eprintln!("error: {e}");
            if is_input_error(e) {
                2
            } else {
                1
            }
        }
    };
    let (md, json) = report.write(&common.out)?;
    if !common.quiet {
        print!("{}", report.to_markdown());
    }
    eprintln!("wrote {} and {}", md.display(), json.display());
    Ok(code)
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli.command) {
        Ok(code) => ExitCode::from(code),
        Err(e) => {
            eprintln!("error: {e:#}");
            ExitCode::from(2)
        }
    }
}
