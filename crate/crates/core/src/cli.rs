//! The `sheaflab` command line.
//!
//! Exit codes: 0 on success (or a true verdict), 1 for input and validation
//! errors or a false verdict, 2 for internal invariant violations.

use std::io::{Read, Write};
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::error::{Error, Result};
use crate::finspace::CoverMode;
use crate::fixtures;
use crate::json;
use crate::plus::plus;
use crate::presheaf::{check_sheaf_axioms, check_sheaf_equalizer, Presheaf, PresheafJson};
use crate::reflect::{compare_reflections, reflect_presheaf, sheaf_reflect_303, sheaf_reflect_3031, ReflectionTarget};
use crate::stalks::{stalk, stalk_structured};
use crate::{verify, Caps};

#[derive(Parser, Debug)]
#[command(name = "sheaflab", version, about = "Presheaves, stalks and sheafification over finite spaces")]
struct Cli {
    /// Indent JSON output.
    #[arg(long, global = true)]
    pretty: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Check a presheaf file; reports the first violation.
    Validate { file: PathBuf },
    /// Germs of a presheaf at a point.
    Stalk {
        file: PathBuf,
        #[arg(long)]
        point: String,
        /// Include the induced operation (or order) on germs.
        #[arg(long)]
        with_operation: bool,
    },
    /// The plus construction F⁺ with its unit p : F → F⁺.
    Sheafify {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Run both sheaf checkers; exit 0 iff the presheaf is a sheaf.
    CheckSheaf {
        file: PathBuf,
        /// Check every cover instead of the canonical ones.
        #[arg(long)]
        exhaustive: bool,
    },
    /// Reflect into a subcategory, optionally combined with sheafification.
    Reflect {
        file: PathBuf,
        #[arg(long)]
        target: ReflectionTarget,
        #[arg(long, value_enum, default_value_t = Route::Presheaf)]
        route: Route,
    },
    /// Run the built-in property suites.
    Verify {
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Print a built-in fixture as presheaf JSON (or list them).
    Fixture { name: Option<String> },
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Route {
    /// Objectwise reflection only.
    Presheaf,
    /// Reflect, then sheafify.
    #[value(name = "303")]
    ReflectFirst,
    /// Sheafify, then reflect.
    #[value(name = "3031")]
    SheafifyFirst,
    /// Both routes and a comparison between them.
    Compare,
}

enum Outcome {
    Ok,
    Verdict(bool),
    Internal(String),
}

/// Runs the CLI on `args` (including the program name) and returns the exit code.
pub fn run(args: &[String], out: &mut dyn Write, err: &mut dyn Write) -> u8 {
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 1 } else { 0 };
            let text = e.render().to_string();
            let _ = if code == 0 { write!(out, "{text}") } else { write!(err, "{text}") };
            return code;
        }
    };
    match execute(&cli, out) {
        Ok(Outcome::Ok) => 0,
        Ok(Outcome::Verdict(true)) => 0,
        Ok(Outcome::Verdict(false)) => 1,
        Ok(Outcome::Internal(msg)) => {
            let _ = writeln!(err, "internal error: {msg}");
            2
        }
        Err(e) => {
            let _ = writeln!(err, "error: {e}");
            exit_code(&e)
        }
    }
}

fn exit_code(e: &Error) -> u8 {
    match e.root() {
        Error::Internal(_) | Error::WellDefinednessFailure(_) => 2,
        _ => 1,
    }
}

fn read_input(path: &Path) -> Result<String> {
    let mut text = String::new();
    if path == Path::new("-") {
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|e| Error::Parse(format!("stdin: {e}")))?;
    } else {
        text = std::fs::read_to_string(path).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
    }
    Ok(text)
}

/// Parses and validates a presheaf file (`-` reads standard input).
pub fn load_presheaf(path: &Path) -> Result<Presheaf> {
    parse_presheaf(&read_input(path)?)
}

pub fn parse_presheaf(text: &str) -> Result<Presheaf> {
    let raw: PresheafJson = serde_json::from_str(text).map_err(|e| Error::Parse(e.to_string()))?;
    Presheaf::from_json(&raw)
}

fn emit<T: Serialize>(out: &mut dyn Write, value: &T, pretty: bool) -> Result<()> {
    writeln!(out, "{}", json::to_string(value, pretty)).map_err(|e| Error::Internal(format!("write failed: {e}")))
}

#[derive(Serialize)]
struct ValidateJson {
    valid: bool,
    tag: String,
    points: usize,
    opens: usize,
}

#[derive(Serialize)]
struct ReflectedJson {
    presheaf: PresheafJson,
    unit: crate::presheaf::NatTransJson,
}

#[derive(Serialize)]
struct CheckSheafJson {
    is_sheaf: bool,
    axioms: crate::presheaf::SheafReport,
    equalizer: crate::presheaf::SheafReport,
}

fn execute(cli: &Cli, out: &mut dyn Write) -> Result<Outcome> {
    let pretty = cli.pretty;
    match &cli.command {
        Command::Validate { file } => {
            let f = load_presheaf(file)?;
            let summary = ValidateJson {
                valid: true,
                tag: f.tag().to_string(),
                points: f.space().points().len(),
                opens: f.space().opens().len(),
            };
            emit(out, &summary, pretty)?;
            Ok(Outcome::Ok)
        }
        Command::Stalk {
            file,
            point,
            with_operation,
        } => {
            let f = load_presheaf(file)?;
            let st = if *with_operation {
                stalk_structured(&f, point)?
            } else {
                stalk(&f, point)?
            };
            emit(out, &st.to_json(&f), pretty)?;
            Ok(Outcome::Ok)
        }
        Command::Sheafify { file, output } => {
            let caps = Caps::from_env()?;
            let f = Arc::new(load_presheaf(file)?);
            let pf = plus(&f, &caps)?;
            let a = check_sheaf_axioms(&pf.plus, CoverMode::Exhaustive, &caps)?;
            // canonical covers keep the overlap products small
            let b = check_sheaf_equalizer(&pf.plus, CoverMode::Canonical, &caps)?;
            if !(a.is_sheaf && b.is_sheaf) {
                return Ok(Outcome::Internal("F⁺ failed the sheaf self-check".into()));
            }
            match output {
                Some(path) => {
                    let text = json::to_string(&pf.to_json(), pretty) + "\n";
                    std::fs::write(path, text).map_err(|e| Error::Parse(format!("{}: {e}", path.display())))?;
                }
                None => emit(out, &pf.to_json(), pretty)?,
            }
            Ok(Outcome::Ok)
        }
        Command::CheckSheaf { file, exhaustive } => {
            let caps = Caps::from_env()?;
            let f = load_presheaf(file)?;
            let mode = if *exhaustive {
                CoverMode::Exhaustive
            } else {
                CoverMode::Canonical
            };
            let axioms = check_sheaf_axioms(&f, mode, &caps)?;
            let equalizer = check_sheaf_equalizer(&f, mode, &caps)?;
            if axioms.is_sheaf != equalizer.is_sheaf || axioms.failure_sites() != equalizer.failure_sites() {
                return Ok(Outcome::Internal("the axiom and equalizer checkers disagree".into()));
            }
            let is_sheaf = axioms.is_sheaf;
            emit(
                out,
                &CheckSheafJson {
                    is_sheaf,
                    axioms,
                    equalizer,
                },
                pretty,
            )?;
            Ok(Outcome::Verdict(is_sheaf))
        }
        Command::Reflect { file, target, route } => {
            let caps = Caps::from_env()?;
            let f = Arc::new(load_presheaf(file)?);
            match route {
                Route::Presheaf => {
                    let rf = reflect_presheaf(&f, *target)?;
                    emit(
                        out,
                        &ReflectedJson {
                            presheaf: rf.presheaf.to_json(),
                            unit: rf.unit.to_json(),
                        },
                        pretty,
                    )?;
                }
                Route::ReflectFirst => emit(out, &sheaf_reflect_303(&f, *target, &caps)?.route.to_json(), pretty)?,
                Route::SheafifyFirst => emit(out, &sheaf_reflect_3031(&f, *target, &caps)?.to_json(), pretty)?,
                Route::Compare => emit(out, &compare_reflections(&f, *target, &caps)?.to_json(), pretty)?,
            }
            Ok(Outcome::Ok)
        }
        Command::Verify { suite } => {
            let caps = Caps::from_env()?;
            let results = verify::run(suite, &caps)?;
            out.write_all(verify::render(&results).as_bytes())
                .map_err(|e| Error::Internal(format!("write failed: {e}")))?;
            Ok(Outcome::Verdict(results.iter().all(|r| r.passed)))
        }
        Command::Fixture { name: None } => {
            for name in fixtures::NAMES {
                writeln!(out, "{name}").map_err(|e| Error::Internal(format!("write failed: {e}")))?;
            }
            Ok(Outcome::Ok)
        }
        Command::Fixture { name: Some(name) } => {
            let f = fixtures::by_name(name).ok_or_else(|| Error::Parse(format!("unknown fixture `{name}`")))?;
            emit(out, &f.to_json(), pretty)?;
            Ok(Outcome::Ok)
        }
    }
}
