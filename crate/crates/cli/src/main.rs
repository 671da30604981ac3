use std::fmt;
use std::io::Read;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use momang_core::{
    emit_facet_list, gen_cyclic_boundary, gen_polygon, parse_auto, render_text, run_betti,
    run_check, run_oracle, run_pipeline, Error, Report, SimplicialComplex,
};

#[derive(Parser)]
#[command(
    name = "momang",
    version,
    about = "Connected-sum classification of moment-angle manifolds over sphere triangulations"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Subcommand)]
enum Command {
    /// Screen the classification hypotheses of an input complex
    Check {
        /// Facet-list or JSON input; '-' reads stdin
        file: PathBuf,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Run the full pipeline: screening, pairing, certification, cross-checks
    Decompose {
        /// Facet-list or JSON input; '-' reads stdin
        file: PathBuf,
        /// Disc dimension k of the (disc, sphere) pair the manifold is built from
        #[arg(long, default_value_t = 2)]
        disc: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
        /// Skip the two-route cohomology comparison stage
        #[arg(long)]
        skip_oracle: bool,
    },
    /// Print the betti numbers of the manifold
    Betti {
        /// Facet-list or JSON input; '-' reads stdin
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        disc: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Compare the subset-homology and ring-cohomology routes
    Oracle {
        /// Facet-list or JSON input; '-' reads stdin
        file: PathBuf,
        #[arg(long, default_value_t = 2)]
        disc: usize,
        #[arg(long, value_enum, default_value_t = Format::Text)]
        format: Format,
    },
    /// Generate standard input families as facet lists
    Gen {
        #[command(subcommand)]
        family: GenCommand,
    },
}

#[derive(Subcommand)]
enum GenCommand {
    /// Boundary of the m-gon (the circle family)
    Polygon {
        #[arg(long)]
        vertices: usize,
        /// Write to a file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Boundary of the cyclic polytope C(m, d) for even d (sphere S^(d-1))
    Cyclic {
        #[arg(long)]
        vertices: usize,
        #[arg(long)]
        dim: usize,
        /// Write to a file instead of stdout
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
}

enum CliError {
    Io(PathBuf, std::io::Error),
    Lib(Error),
}

impl fmt::Display for CliError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            CliError::Io(path, err) => write!(f, "{}: {err}", path.display()),
            CliError::Lib(err) => write!(f, "{err}"),
        }
    }
}

impl From<Error> for CliError {
    fn from(err: Error) -> Self {
        CliError::Lib(err)
    }
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Io(..) => 2,
            CliError::Lib(err) => match err {
                Error::Parse { .. }
                | Error::Schema { .. }
                | Error::VertexOutOfRange { .. }
                | Error::EmptyFacetList
                | Error::EmptyFacet { .. }
                | Error::GhostVertex { .. }
                | Error::TooFewVertices { .. }
                | Error::BadParameters { .. } => 2,
                _ => 1,
            },
        }
    }
}

fn main() -> ExitCode {
    init_thread_pool();
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            ExitCode::from(err.exit_code())
        }
    }
}

/// Honors MOMANG_THREADS; otherwise rayon picks the core count.
fn init_thread_pool() {
    if let Some(n) = std::env::var("MOMANG_THREADS")
        .ok()
        .and_then(|v| v.parse::<usize>().ok())
        .filter(|&n| n > 0)
    {
        let _ = rayon::ThreadPoolBuilder::new().num_threads(n).build_global();
    }
}

fn run(cli: Cli) -> Result<ExitCode, CliError> {
    match cli.command {
        Command::Check { file, format } => {
            let (complex, name) = load(&file)?;
            finish(run_check(&complex, &name), format)
        }
        Command::Decompose {
            file,
            disc,
            format,
            skip_oracle,
        } => {
            validate_disc(disc)?;
            let (complex, name) = load(&file)?;
            finish(run_pipeline(&complex, &name, disc, !skip_oracle), format)
        }
        Command::Betti { file, disc, format } => {
            validate_disc(disc)?;
            let (complex, name) = load(&file)?;
            let report = run_betti(&complex, &name, disc);
            match format {
                Format::Text => println!("betti: {:?}", report.betti.as_deref().unwrap_or(&[])),
                Format::Json => println!("{}", report.to_json()),
            }
            Ok(ExitCode::SUCCESS)
        }
        Command::Oracle { file, disc, format } => {
            validate_disc(disc)?;
            let (complex, name) = load(&file)?;
            finish(run_oracle(&complex, &name, disc), format)
        }
        Command::Gen { family } => {
            let (complex, out) = match family {
                GenCommand::Polygon { vertices, out } => (gen_polygon(vertices)?, out),
                GenCommand::Cyclic { vertices, dim, out } => {
                    (gen_cyclic_boundary(vertices, dim)?, out)
                }
            };
            let text = emit_facet_list(&complex);
            match out {
                Some(path) => {
                    std::fs::write(&path, text).map_err(|e| CliError::Io(path, e))?;
                }
                None => print!("{text}"),
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn validate_disc(disc: usize) -> Result<(), CliError> {
    if disc < 2 {
        return Err(CliError::Lib(Error::BadParameters {
            message: format!("the disc dimension must be at least 2, got {disc}"),
        }));
    }
    Ok(())
}

fn load(path: &Path) -> Result<(SimplicialComplex, String), CliError> {
    let (text, name) = if path.as_os_str() == "-" {
        let mut buf = String::new();
        std::io::stdin()
            .read_to_string(&mut buf)
            .map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        (buf, "stdin".to_string())
    } else {
        let text = std::fs::read_to_string(path)
            .map_err(|e| CliError::Io(path.to_path_buf(), e))?;
        let name = path
            .file_stem()
            .map_or_else(|| path.display().to_string(), |s| s.to_string_lossy().into_owned());
        (text, name)
    };
    Ok((parse_auto(&text)?, name))
}

/// Prints the report and turns its status into the process exit code,
/// mirroring the failure reason on stderr.
fn finish(report: Report, format: Format) -> Result<ExitCode, CliError> {
    match format {
        Format::Text => print!("{}", render_text(&report)),
        Format::Json => println!("{}", report.to_json()),
    }
    if report.passed() {
        Ok(ExitCode::SUCCESS)
    } else {
        if let Some(err) = &report.error {
            eprintln!("error: {err}");
        }
        Ok(ExitCode::FAILURE)
    }
}
