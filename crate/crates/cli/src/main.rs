//! `modspec`: module decomposition of software system designs.
//!
//! Reads a design (class-style text, high-level circuit text, or a JSON
//! mirror of either), derives its Laplacian and density matrix, and reports
//! the module decomposition computed three independent ways.
//!
//! Exit codes:
//! - 0 analysis complete, all methods agree
//! - 1 unreadable input, parse error, unknown format or unknown selector
//! - 2 invalid design: no edges, so the density matrix is undefined
//! - 3 numerical failure, or the three methods disagree
//! - 4 the requested split is invalid

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};

use modspec_core::export::{dot_graph, matrix_csv, MatrixKind};
use modspec_core::ingest::{design_from_json, parse_circuit_design, parse_design, ParseError};
use modspec_core::modularity::ModularityError;
use modspec_core::report::{
    analyze, render_split_text, render_text, split_by_selector, AnalyzeError, AnalyzeOptions,
    SplitRequestError,
};
use modspec_core::spectral::{build_matrices, SpectralError};
use modspec_core::SystemDesign;

#[derive(Parser)]
#[command(
    name = "modspec",
    version,
    about = "Module decomposition of software system designs"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Analyse a design: spectrum, modules by three methods, projectors.
    Analyze {
        /// Input file (.sfd design text, .qhc circuit text, .json).
        path: PathBuf,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Input format when the file extension is not decisive.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
        /// Include the degree, adjacency, Laplacian and density matrices.
        #[arg(long)]
        matrices: bool,
        /// Prefix each projector term with its coefficient.
        #[arg(long)]
        verbose_projectors: bool,
        /// Density below which a bridged module is flagged reducible.
        #[arg(long, default_value_t = 0.5)]
        split_threshold: f64,
        /// Override the zero-eigenvalue cutoff.
        #[arg(long)]
        tolerance: Option<f64>,
    },
    /// Write one of the design matrices as CSV.
    Matrices {
        /// Input file (.sfd design text, .qhc circuit text, .json).
        path: PathBuf,
        /// Which matrix to export.
        #[arg(value_enum)]
        which: CliMatrix,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Input format when the file extension is not decisive.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
    /// Split the module containing the named vertex along its Fiedler vector.
    Split {
        /// Input file (.sfd design text, .qhc circuit text, .json).
        path: PathBuf,
        /// Id of any structor or functional in the module to split.
        selector: String,
        /// Emit the report as JSON instead of text.
        #[arg(long)]
        json: bool,
        /// Input format when the file extension is not decisive.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
        /// Density below which the split counts as recommended.
        #[arg(long, default_value_t = 0.5)]
        split_threshold: f64,
    },
    /// Write the design as a DOT graph with one cluster per module.
    Dot {
        /// Input file (.sfd design text, .qhc circuit text, .json).
        path: PathBuf,
        /// Output file; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
        /// Input format when the file extension is not decisive.
        #[arg(long, value_enum)]
        format: Option<InputFormat>,
    },
}

#[derive(Copy, Clone, PartialEq, Eq, ValueEnum)]
enum InputFormat {
    /// Design statement text, the .sfd format.
    Design,
    /// High-level circuit text, the .qhc format.
    Circuit,
    /// JSON mirror of a design.
    Json,
}

#[derive(Copy, Clone, ValueEnum)]
enum CliMatrix {
    Degree,
    Adjacency,
    Laplacian,
    Density,
}

impl From<CliMatrix> for MatrixKind {
    fn from(m: CliMatrix) -> MatrixKind {
        match m {
            CliMatrix::Degree => MatrixKind::Degree,
            CliMatrix::Adjacency => MatrixKind::Adjacency,
            CliMatrix::Laplacian => MatrixKind::Laplacian,
            CliMatrix::Density => MatrixKind::Density,
        }
    }
}

/// A terminal outcome: the message goes to stderr, the code to the shell.
struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Self {
        Failure {
            code,
            message: message.into(),
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) if e.use_stderr() => {
            let _ = e.print();
            return ExitCode::from(1);
        }
        Err(e) => {
            // --help and --version land here.
            let _ = e.print();
            return ExitCode::SUCCESS;
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: Cli) -> Result<(), Failure> {
    match cli.command {
        Command::Analyze {
            path,
            json,
            format,
            matrices,
            verbose_projectors,
            split_threshold,
            tolerance,
        } => {
            let design = load_design(&path, format)?;
            let opts = AnalyzeOptions {
                tolerance,
                include_matrices: matrices,
                verbose_projectors,
                split_threshold,
            };
            let report = analyze(&design, &opts).map_err(analyze_failure)?;
            print!(
                "{}",
                if json {
                    report.to_json()
                } else {
                    render_text(&report)
                }
            );
            if !report.methods.agreement {
                return Err(Failure::new(
                    3,
                    "partition methods disagree; see the methods section of the report",
                ));
            }
            Ok(())
        }
        Command::Matrices {
            path,
            which,
            out,
            format,
        } => {
            let design = load_design(&path, format)?;
            let m = build_matrices(&design).map_err(spectral_failure)?;
            write_out(out.as_deref(), &matrix_csv(&m, which.into()))
        }
        Command::Split {
            path,
            selector,
            json,
            format,
            split_threshold,
        } => {
            let design = load_design(&path, format)?;
            let report =
                split_by_selector(&design, &selector, split_threshold).map_err(split_failure)?;
            print!(
                "{}",
                if json {
                    report.to_json()
                } else {
                    render_split_text(&report)
                }
            );
            if !report.valid {
                return Err(Failure::new(
                    4,
                    "split is invalid: one side lacks a structor or a functional",
                ));
            }
            Ok(())
        }
        Command::Dot { path, out, format } => {
            let design = load_design(&path, format)?;
            let report = analyze(&design, &AnalyzeOptions::default()).map_err(analyze_failure)?;
            if !report.methods.agreement {
                return Err(Failure::new(
                    3,
                    "partition methods disagree; refusing to draw modules",
                ));
            }
            let partition = design.connected_components();
            write_out(out.as_deref(), &dot_graph(&design, &partition))
        }
    }
}

fn detect_format(path: &Path) -> Option<InputFormat> {
    match path.extension()?.to_str()?.to_ascii_lowercase().as_str() {
        "sfd" => Some(InputFormat::Design),
        "qhc" => Some(InputFormat::Circuit),
        "json" => Some(InputFormat::Json),
        _ => None,
    }
}

fn load_design(path: &Path, format: Option<InputFormat>) -> Result<SystemDesign, Failure> {
    let format = format.or_else(|| detect_format(path)).ok_or_else(|| {
        Failure::new(
            1,
            format!(
                "cannot infer the input format of {} from its extension; pass --format",
                path.display()
            ),
        )
    })?;
    let text = fs::read_to_string(path)
        .map_err(|e| Failure::new(1, format!("cannot read {}: {e}", path.display())))?;
    let parse_failure = |e: ParseError| Failure::new(1, format!("{}: {e}", path.display()));
    match format {
        // A JSON design names itself; the text formats take the file stem.
        InputFormat::Json => design_from_json(&text).map_err(parse_failure),
        InputFormat::Design => {
            let design = parse_design(&text).map_err(parse_failure)?;
            Ok(design.with_name(stem_of(path)))
        }
        InputFormat::Circuit => {
            let design = parse_circuit_design(&text).map_err(parse_failure)?;
            Ok(design.with_name(stem_of(path)))
        }
    }
}

fn stem_of(path: &Path) -> String {
    path.file_stem()
        .and_then(|s| s.to_str())
        .unwrap_or("design")
        .to_string()
}

fn analyze_failure(e: AnalyzeError) -> Failure {
    let code = match &e {
        AnalyzeError::Spectral(SpectralError::ZeroDegreeSum) => 2,
        _ => 3,
    };
    Failure::new(code, e.to_string())
}

fn spectral_failure(e: SpectralError) -> Failure {
    let code = match &e {
        SpectralError::ZeroDegreeSum => 2,
        _ => 3,
    };
    Failure::new(code, e.to_string())
}

fn split_failure(e: SplitRequestError) -> Failure {
    let code = match &e {
        SplitRequestError::UnknownVertex(_) => 1,
        SplitRequestError::Modularity(ModularityError::TooSmall(_)) => 4,
        SplitRequestError::Modularity(ModularityError::Spectral(SpectralError::ZeroDegreeSum)) => 2,
        SplitRequestError::Modularity(_) => 3,
    };
    Failure::new(code, e.to_string())
}

fn write_out(out: Option<&Path>, content: &str) -> Result<(), Failure> {
    match out {
        Some(path) => fs::write(path, content)
            .map_err(|e| Failure::new(1, format!("cannot write {}: {e}", path.display()))),
        None => {
            print!("{content}");
            Ok(())
        }
    }
}
