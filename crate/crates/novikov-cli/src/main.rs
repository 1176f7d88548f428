//! `nvk`: exact computations with Novikov algebras and quadratic Novikov
//! algebras defined in `.nvk` files.
//!
//! Exit codes: 0 = all checks pass, 1 = a mathematical check failed,
//! 2 = input error.

mod commands;
mod dsl;
mod report;

use clap::{Parser, Subcommand};
use commands::InputError;
use novikov::forms::DerivationMode;
use report::{Report, Status};
use std::path::PathBuf;
use std::process::ExitCode;

#[derive(Parser)]
#[command(
    name = "nvk",
    about = "Exact computer algebra for Novikov algebras given by structure constants",
    version
)]
struct Cli {
    /// Emit the structured JSON report instead of text.
    #[arg(long, global = true)]
    json: bool,
    /// Instantiate parameters before computing, e.g. `--set k=1,t=0`.
    #[arg(long, global = true, value_name = "P=V,...")]
    set: Option<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check the Novikov axioms and validate declared forms.
    Check { file: PathBuf },
    /// Solve for all invariant symmetric bilinear forms.
    Forms {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
    },
    /// Orthogonal complement of a subspace.
    Perp {
        file: PathBuf,
        /// Spanning vectors, e.g. "e1; e2 + 2*e3".
        #[arg(long)]
        span: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
    },
    /// Decompose into orthogonal nondegenerate ideals.
    Decompose {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
    },
    /// One-dimensional isotropic ideals (rational eigenline search).
    Ideals {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
    },
    /// Check the adjoint/dual representations and the metric intertwiner.
    RepCheck {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
    },
    /// Build a skew form from a derivation and test the quasi-Frobenius
    /// equation.
    Qf {
        file: PathBuf,
        /// Images of the basis, e.g. "e1=e2;e2=-e1".
        #[arg(long)]
        map: String,
        /// `derivation` or `half` (half-twisted, requires invertibility).
        #[arg(long, default_value = "derivation")]
        mode: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
    },
    /// Double extensions: validate, build, specialize, extract.
    Dext {
        #[command(subcommand)]
        sub: DextCommand,
    },
    /// Check a supplied map for being an isomorphism of quadratic algebras.
    Iso {
        file_a: PathBuf,
        file_b: PathBuf,
        /// Images of the source basis in the target, e.g. "e1=2*e1;e2=e2".
        #[arg(long)]
        map: String,
        #[arg(long)]
        algebra_a: Option<String>,
        #[arg(long)]
        algebra_b: Option<String>,
        #[arg(long)]
        form_a: Option<String>,
        #[arg(long)]
        form_b: Option<String>,
    },
    /// Re-verify the built-in dimension-2 and dimension-3 tables.
    VerifyTables,
    /// Presented-basis degeneracy diagnostic.
    Audit {
        file: PathBuf,
        #[arg(long)]
        algebra: Option<String>,
    },
}

#[derive(Subcommand)]
enum DextCommand {
    /// Validate the 18 compatibility conditions and build the extension.
    Build {
        file: PathBuf,
        /// Write the built algebra as a `.nvk` document.
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// One-dimensional specialization (12 conditions).
    Build1 {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// T*-extension (no base; 3 conditions).
    Tstar {
        file: PathBuf,
        #[arg(long, short)]
        output: Option<PathBuf>,
    },
    /// Extract extension data from an isotropic ideal.
    Extract {
        file: PathBuf,
        /// Spanning vectors of the ideal, e.g. "e4" or "e1 + e2".
        #[arg(long)]
        ideal: String,
        #[arg(long)]
        algebra: Option<String>,
        #[arg(long)]
        form: Option<String>,
    },
}

fn run(cli: &Cli) -> Result<Report, InputError> {
    let set = commands::assignments(&cli.set)?;
    let path_str = |p: &PathBuf| p.display().to_string();
    match &cli.command {
        Command::Check { file } => {
            let doc = commands::load(file)?;
            commands::cmd_check(&doc, vec![path_str(file)], &set)
        }
        Command::Forms { file, algebra } => {
            let doc = commands::load(file)?;
            commands::cmd_forms(&doc, vec![path_str(file)], algebra.as_deref(), &set)
        }
        Command::Perp {
            file,
            span,
            algebra,
            form,
        } => {
            let doc = commands::load(file)?;
            commands::cmd_perp(
                &doc,
                vec![path_str(file), span.clone()],
                algebra.as_deref(),
                form.as_deref(),
                span,
                &set,
            )
        }
        Command::Decompose {
            file,
            algebra,
            form,
        } => {
            let doc = commands::load(file)?;
            commands::cmd_decompose(
                &doc,
                vec![path_str(file)],
                algebra.as_deref(),
                form.as_deref(),
                &set,
            )
        }
        Command::Ideals {
            file,
            algebra,
            form,
        } => {
            let doc = commands::load(file)?;
            commands::cmd_ideals(
                &doc,
                vec![path_str(file)],
                algebra.as_deref(),
                form.as_deref(),
                &set,
            )
        }
        Command::RepCheck {
            file,
            algebra,
            form,
        } => {
            let doc = commands::load(file)?;
            commands::cmd_rep_check(
                &doc,
                vec![path_str(file)],
                algebra.as_deref(),
                form.as_deref(),
                &set,
            )
        }
        Command::Qf {
            file,
            map,
            mode,
            algebra,
            form,
        } => {
            let doc = commands::load(file)?;
            let mode = match mode.as_str() {
                "derivation" => DerivationMode::Derivation,
                "half" => DerivationMode::HalfTwisted,
                other => {
                    return Err(InputError(format!(
                        "--mode must be `derivation` or `half`, got `{other}`"
                    )))
                }
            };
            commands::cmd_qf(
                &doc,
                vec![path_str(file)],
                algebra.as_deref(),
                form.as_deref(),
                map,
                mode,
                &set,
            )
        }
        Command::Dext { sub } => match sub {
            DextCommand::Build { file, output } => {
                let doc = commands::load(file)?;
                commands::cmd_dext_build(&doc, vec![path_str(file)], &set, output.as_deref())
            }
            DextCommand::Build1 { file, output } => {
                let doc = commands::load(file)?;
                commands::cmd_dext_build1(&doc, vec![path_str(file)], &set, output.as_deref())
            }
            DextCommand::Tstar { file, output } => {
                let doc = commands::load(file)?;
                commands::cmd_dext_tstar(&doc, vec![path_str(file)], &set, output.as_deref())
            }
            DextCommand::Extract {
                file,
                ideal,
                algebra,
                form,
            } => {
                let doc = commands::load(file)?;
                commands::cmd_dext_extract(
                    &doc,
                    vec![path_str(file), ideal.clone()],
                    algebra.as_deref(),
                    form.as_deref(),
                    ideal,
                    &set,
                )
            }
        },
        Command::Iso {
            file_a,
            file_b,
            map,
            algebra_a,
            algebra_b,
            form_a,
            form_b,
        } => {
            let doc_a = commands::load(file_a)?;
            let doc_b = commands::load(file_b)?;
            commands::cmd_iso(
                &doc_a,
                &doc_b,
                vec![path_str(file_a), path_str(file_b)],
                algebra_a.as_deref(),
                algebra_b.as_deref(),
                form_a.as_deref(),
                form_b.as_deref(),
                map,
                &set,
            )
        }
        Command::VerifyTables => commands::cmd_verify_tables(vec![]),
        Command::Audit { file, algebra } => {
            let doc = commands::load(file)?;
            commands::cmd_audit(&doc, vec![path_str(file)], algebra.as_deref(), &set)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(&cli) {
        Ok(report) => {
            if cli.json {
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                print!("{}", report.render_text());
            }
            ExitCode::from(report.exit as u8)
        }
        Err(InputError(msg)) => {
            if cli.json {
                let report = Report {
                    command: "error".into(),
                    inputs: vec![],
                    checks: vec![report::CheckItem {
                        id: "input".into(),
                        status: Status::Fail,
                        witness: Some(msg),
                    }],
                    exit: 2,
                };
                println!("{}", serde_json::to_string_pretty(&report).expect("serializable"));
            } else {
                eprintln!("error: {msg}");
            }
            ExitCode::from(2)
        }
    }
}
