//! Command-line surface over the skewmatch toolkit.
//!
//! Every verb reads an input file (or stdin via `-`), prints exactly one
//! JSON document to stdout, and keeps human diagnostics on stderr. Exit
//! codes: 0 success, 1 domain or validation error, 2 convergence failure,
//! 3 I/O or parse error. All randomness is controlled by `--seed`
//! (default 0, overridable through `SKEWMATCH_SEED`).

use std::ffi::OsString;
use std::io::Read;

use clap::error::ErrorKind;
use clap::{Parser, Subcommand};
use serde::Serialize;

use skewmatch::graph::{
    maximum_matching, spanning_tree_containing, tutte_has_perfect_matching,
};
use skewmatch::neb::{minimal_non_neb_subtree, neb_report};
use skewmatch::solver::{solve, verify_solution, SolverConfig, SpectralTarget};
use skewmatch::spectral::{max_skew_rank, skew_eigen};
use skewmatch::{Graph, GraphError, NebError, SkewMatrix64, SolverError, SpectralError};

pub const EXIT_OK: i32 = 0;
pub const EXIT_DOMAIN: i32 = 1;
pub const EXIT_CONVERGENCE: i32 = 2;
pub const EXIT_IO: i32 = 3;

#[derive(Parser)]
#[command(
    name = "skewmatch",
    version,
    about = "Matching numbers, NEB trees, and skew-symmetric inverse eigenvalue problems"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Canonical maximum matching and the matching number
    Match {
        /// Edge-list file, or `-` for stdin
        input: String,
    },
    /// Exhaustive perfect-matching certificate (n <= 20)
    Tutte {
        input: String,
    },
    /// NEB roots of a tree, with a witness when there are none
    Neb {
        input: String,
    },
    /// Minimal non-NEB subtree descending from a vertex
    MinNonNeb {
        input: String,
        /// Starting vertex; the tree must not be NEB there
        #[arg(long)]
        root: usize,
    },
    /// Certified and sampled maximum skew rank
    Maxrank {
        input: String,
        #[arg(long, default_value_t = 20)]
        samples: usize,
        /// Relative singular-value cutoff
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        #[arg(long, env = "SKEWMATCH_SEED")]
        seed: Option<u64>,
    },
    /// Positive parts of a skew matrix (JSON input)
    Eigen {
        input: String,
    },
    /// Build a skew matrix with the prescribed graph and spectrum
    Solve {
        input: String,
        /// Comma-separated positive targets, strictly decreasing
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<f64>,
        /// Initial free-entry magnitude (default 0.05 times the smallest target)
        #[arg(long)]
        epsilon0: Option<f64>,
        /// Residual tolerance
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
        /// Newton updates per perturbation level
        #[arg(long, default_value_t = 50)]
        max_iter: usize,
        #[arg(long, env = "SKEWMATCH_SEED")]
        seed: Option<u64>,
    },
    /// Check a claimed solution matrix against a graph and targets
    Verify {
        input: String,
        /// Matrix JSON file, or `-` for stdin
        #[arg(long)]
        matrix: String,
        #[arg(long, value_delimiter = ',', required = true)]
        targets: Vec<f64>,
        /// Spectrum tolerance
        #[arg(long, default_value_t = 1e-8)]
        tol: f64,
    },
    /// Spanning tree containing the canonical maximum matching
    SpanningTree {
        input: String,
    },
}

struct Failure {
    code: i32,
    message: String,
}

impl Failure {
    fn new(code: i32, message: impl Into<String>) -> Self {
        Self {
            code,
            message: message.into(),
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

impl From<GraphError> for Failure {
    fn from(e: GraphError) -> Self {
        let code = match e {
            GraphError::Parse { .. } | GraphError::SelfLoop { .. } | GraphError::NoVertices => {
                EXIT_IO
            }
            _ => EXIT_DOMAIN,
        };
        Failure::new(code, e.to_string())
    }
}

impl From<NebError> for Failure {
    fn from(e: NebError) -> Self {
        Failure::new(EXIT_DOMAIN, e.to_string())
    }
}

impl From<SpectralError> for Failure {
    fn from(e: SpectralError) -> Self {
        match e {
            SpectralError::Graph(g) => g.into(),
            other => Failure::new(EXIT_DOMAIN, other.to_string()),
        }
    }
}

impl From<SolverError> for Failure {
    fn from(e: SolverError) -> Self {
        match e {
            SolverError::EpsilonUnderflow { .. } => Failure::new(EXIT_CONVERGENCE, e.to_string()),
            SolverError::Graph(g) => g.into(),
            SolverError::Spectral(s) => s.into(),
            other => Failure::new(EXIT_DOMAIN, other.to_string()),
        }
    }
}

impl From<serde_json::Error> for Failure {
    fn from(e: serde_json::Error) -> Self {
        Failure::new(EXIT_IO, e.to_string())
    }
}

#[derive(Serialize)]
struct MatchResponse {
    matching_number: usize,
    matching: Vec<(usize, usize)>,
}

#[derive(Serialize)]
struct MaxrankResponse {
    certified: usize,
    sampled: usize,
}

#[derive(Serialize)]
struct SpanningTreeResponse {
    n: usize,
    edges: Vec<(usize, usize)>,
    matching: Vec<(usize, usize)>,
}

/// Runs the CLI on the given argument list. Returns the exit code and the
/// stdout payload; diagnostics go straight to stderr.
pub fn run<I, A>(argv: I) -> (i32, String)
where
    I: IntoIterator<Item = A>,
    A: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => (EXIT_OK, e.to_string()),
                _ => {
                    eprintln!("{e}");
                    (EXIT_IO, error_json(&e.to_string()))
                }
            };
        }
    };
    match dispatch(cli.cmd) {
        Ok(payload) => (EXIT_OK, payload),
        Err(failure) => {
            eprintln!("error: {}", failure.message);
            (failure.code, error_json(&failure.message))
        }
    }
}

fn error_json(message: &str) -> String {
    serde_json::to_string(&serde_json::json!({ "error": message }))
        .expect("error payload serializes")
}

fn read_input(path: &str) -> Result<String, Failure> {
    if path == "-" {
        let mut buf = String::new();
        std::io::stdin().read_to_string(&mut buf)?;
        Ok(buf)
    } else {
        Ok(std::fs::read_to_string(path)?)
    }
}

fn load_graph(path: &str) -> Result<Graph, Failure> {
    Ok(Graph::parse(&read_input(path)?)?)
}

fn load_matrix(path: &str) -> Result<SkewMatrix64, Failure> {
    Ok(serde_json::from_str(&read_input(path)?)?)
}

fn to_json<T: Serialize>(value: &T) -> Result<String, Failure> {
    Ok(serde_json::to_string(value)?)
}

fn dispatch(cmd: Cmd) -> Result<String, Failure> {
    match cmd {
        Cmd::Match { input } => {
            let g = load_graph(&input)?;
            let m = maximum_matching(&g);
            to_json(&MatchResponse {
                matching_number: m.len(),
                matching: m.edges().to_vec(),
            })
        }
        Cmd::Tutte { input } => {
            let g = load_graph(&input)?;
            to_json(&tutte_has_perfect_matching(&g)?)
        }
        Cmd::Neb { input } => {
            let g = load_graph(&input)?;
            to_json(&neb_report(&g)?)
        }
        Cmd::MinNonNeb { input, root } => {
            let g = load_graph(&input)?;
            to_json(&minimal_non_neb_subtree(&g, root)?)
        }
        Cmd::Maxrank {
            input,
            samples,
            tol,
            seed,
        } => {
            let g = load_graph(&input)?;
            if tol <= 0.0 {
                return Err(Failure::new(EXIT_DOMAIN, "tolerance must be positive"));
            }
            let r = max_skew_rank::<f64>(&g, samples, seed.unwrap_or(0), tol);
            to_json(&MaxrankResponse {
                certified: r.certified,
                sampled: r.sampled,
            })
        }
        Cmd::Eigen { input } => {
            let a = load_matrix(&input)?;
            to_json(&skew_eigen(&a).spectrum)
        }
        Cmd::Solve {
            input,
            targets,
            epsilon0,
            tol,
            max_iter,
            seed,
        } => {
            let g = load_graph(&input)?;
            let target = SpectralTarget::new(targets, g.vertex_count())?;
            let mut cfg = SolverConfig::for_target(&target);
            if let Some(e0) = epsilon0 {
                cfg.epsilon0 = e0;
            }
            cfg.newton_tol = tol;
            cfg.newton_max_iter = max_iter;
            cfg.seed = seed.unwrap_or(0);
            let matching = maximum_matching(&g);
            eprintln!(
                "matching ({} edges): {:?}",
                matching.len(),
                matching.edges()
            );
            let result = solve(&g, &target, &cfg)?;
            eprintln!(
                "converged: residual {:.3e}, epsilon {:.3e}, {} Newton updates",
                result.residual, result.epsilon_used, result.iterations
            );
            to_json(&result)
        }
        Cmd::Verify {
            input,
            matrix,
            targets,
            tol,
        } => {
            let g = load_graph(&input)?;
            let a = load_matrix(&matrix)?;
            let target = SpectralTarget::new(targets, g.vertex_count())?;
            to_json(&verify_solution(&g, &target, &a, tol))
        }
        Cmd::SpanningTree { input } => {
            let g = load_graph(&input)?;
            let m = maximum_matching(&g);
            let t = spanning_tree_containing(&g, &m)?;
            to_json(&SpanningTreeResponse {
                n: t.vertex_count(),
                edges: t.edges().collect(),
                matching: m.edges().to_vec(),
            })
        }
    }
}
