//! Command-line front end. Every subcommand reads and writes the text
//! formats from [`crate::io`]; `-` stands for standard input or output.
//! Exit codes: 0 success, 1 domain or validation error, 2 usage error.

use std::ffi::OsString;
use std::io::Read;

use clap::{Args, Parser, Subcommand, ValueEnum};
use thiserror::Error;

use crate::complexity::{self, TableSpec};
use crate::convert::{self, VertexOrdering};
use crate::io;
use crate::rangebound::{self, BoundConfig};
use crate::setops;
use crate::zpoly::ZPolytope;

#[derive(Debug, Error)]
enum CliError {
    #[error("{path}: {source}")]
    File { path: String, source: std::io::Error },
    #[error(transparent)]
    Parse(#[from] io::IoError),
    #[error(transparent)]
    SetOp(#[from] setops::SetOpError),
    #[error(transparent)]
    Convert(#[from] convert::ConvertError),
    #[error(transparent)]
    Bound(#[from] rangebound::BoundError),
    #[error(transparent)]
    Complexity(#[from] complexity::ComplexityError),
    #[error("{0}")]
    Usage(String),
}

#[derive(Parser)]
#[command(
    name = "zonoset",
    about = "Polytopes as polynomial zonotopes with 0/1 exponents: set operations, conversions, size tables, range bounding",
    version
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Check a set file against the structural invariants.
    Validate { file: String },
    /// Convert between vertex and Z-representation.
    Convert {
        /// Target representation.
        #[arg(long = "to", value_enum)]
        to: TargetRep,
        input: String,
        #[arg(short, long)]
        output: Option<String>,
        /// Vertex order for the pairwise-hull tree.
        #[arg(long, value_enum, default_value = "input")]
        order: OrderKind,
        /// Deduplication tolerance for the vertex enumeration.
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Closed-form set operations; prints the result and its size stats.
    #[command(subcommand)]
    Op(OpCommand),
    /// Enumerate the vertices of a set in Z-representation.
    Vertices {
        file: String,
        #[arg(long, default_value_t = 1e-9)]
        tol: f64,
    },
    /// Bound a nonlinear expression over a set.
    Bound {
        /// Expression file in prefix notation.
        #[arg(short = 'f', long = "function")]
        function: String,
        /// Set file in Z-representation.
        #[arg(short = 's', long = "set")]
        set: String,
        #[arg(long, value_enum, default_value = "pz")]
        method: MethodKind,
        /// Taylor expansion order for sin, cos, exp.
        #[arg(long, default_value_t = 6)]
        order: u32,
        /// Total-degree cap of the polynomial part.
        #[arg(long, default_value_t = 8)]
        cap: u32,
        /// Domain bisection depth.
        #[arg(long, default_value_t = 4)]
        splits: u32,
    },
    /// Representation-complexity tables as CSV.
    Complexity(ComplexityArgs),
    /// Merge duplicate variable parts and drop unused factors.
    Regularize {
        file: String,
        #[arg(short, long)]
        output: Option<String>,
    },
}

#[derive(Subcommand)]
enum OpCommand {
    /// Linear transformation of a set by a matrix.
    Map {
        #[arg(short, long)]
        matrix: String,
        set: String,
    },
    /// Minkowski sum of two sets.
    Sum { a: String, b: String },
    /// Convex hull of two sets.
    Hull { a: String, b: String },
}

#[derive(Args)]
struct ComplexityArgs {
    #[arg(long = "case", value_enum)]
    case: CaseKind,
    #[arg(short = 'n')]
    n: usize,
    /// Zonotope generator count (zono-point case).
    #[arg(short = 'm')]
    m: Option<usize>,
    /// First generator count (zono-zono case).
    #[arg(long)]
    m1: Option<usize>,
    /// Second generator count (zono-zono case).
    #[arg(long)]
    m2: Option<usize>,
    /// Sweep the generator count(s) over an inclusive range `a:b`.
    #[arg(long)]
    sweep: Option<String>,
    /// Emit CSV (the only output format).
    #[arg(long)]
    csv: bool,
}

#[derive(Clone, Copy, ValueEnum)]
enum TargetRep {
    Z,
    V,
}

#[derive(Clone, Copy, ValueEnum)]
enum OrderKind {
    Input,
    Greedy,
}

#[derive(Clone, Copy, ValueEnum)]
enum MethodKind {
    Pz,
    #[value(name = "tm-box")]
    TmBox,
    #[value(name = "ia-box")]
    IaBox,
}

#[derive(Clone, Copy, PartialEq, ValueEnum)]
enum CaseKind {
    #[value(name = "zono-point")]
    ZonoPoint,
    #[value(name = "zono-zono")]
    ZonoZono,
}

/// Runs the CLI on explicit arguments and returns the process exit code.
pub fn run<I, T>(args: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(err) => {
            use clap::error::ErrorKind;
            let code = match err.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => 0,
                _ => 2,
            };
            let _ = err.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(CliError::Usage(msg)) => {
            eprintln!("error: {msg}");
            2
        }
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn read_input(path: &str) -> Result<String, CliError> {
    if path == "-" {
        let mut text = String::new();
        std::io::stdin()
            .read_to_string(&mut text)
            .map_err(|source| CliError::File { path: "<stdin>".into(), source })?;
        Ok(text)
    } else {
        std::fs::read_to_string(path)
            .map_err(|source| CliError::File { path: path.into(), source })
    }
}

fn write_output(path: Option<&str>, text: &str) -> Result<(), CliError> {
    match path {
        None | Some("-") => {
            print!("{text}");
            Ok(())
        }
        Some(p) => std::fs::write(p, text)
            .map_err(|source| CliError::File { path: p.into(), source }),
    }
}

fn read_zpoly(path: &str) -> Result<ZPolytope, CliError> {
    Ok(io::parse_zpoly(&read_input(path)?)?)
}

fn dispatch(command: Command) -> Result<i32, CliError> {
    match command {
        Command::Validate { file } => {
            let text = read_input(&file)?;
            let keyword = text
                .lines()
                .map(|l| l.split('#').next().unwrap_or("").trim())
                .find(|l| !l.is_empty())
                .unwrap_or("");
            match keyword.split_whitespace().next() {
                Some("zpoly") => match io::parse_zpoly(&text) {
                    Ok(_) => {
                        println!("OK");
                        Ok(0)
                    }
                    Err(io::IoError::Invalid(violations)) => {
                        for v in violations {
                            println!("{v}");
                        }
                        Ok(1)
                    }
                    Err(err) => Err(err.into()),
                },
                Some("vpoly") => {
                    io::parse_vpoly(&text)?;
                    println!("OK");
                    Ok(0)
                }
                _ => Err(CliError::Usage(format!(
                    "{file}: expected a 'zpoly' or 'vpoly' file"
                ))),
            }
        }
        Command::Convert { to, input, output, order, tol } => {
            let text = read_input(&input)?;
            let rendered = match to {
                TargetRep::Z => {
                    let v = io::parse_vpoly(&text)?;
                    let ordering = match order {
                        OrderKind::Input => VertexOrdering::InputOrder,
                        OrderKind::Greedy => VertexOrdering::GreedyNearest,
                    };
                    io::serialize_zpoly(&convert::v_to_z(&v, ordering))
                }
                TargetRep::V => {
                    let z = io::parse_zpoly(&text)?;
                    io::serialize_vpoly(&convert::z_to_v(&z, tol)?)
                }
            };
            write_output(output.as_deref(), &rendered)?;
            Ok(0)
        }
        Command::Op(op) => {
            let result = match op {
                OpCommand::Map { matrix, set } => {
                    let m = io::parse_matrix(&read_input(&matrix)?)?;
                    setops::linear_map(&m, &read_zpoly(&set)?)?
                }
                OpCommand::Sum { a, b } => {
                    setops::minkowski_sum(&read_zpoly(&a)?, &read_zpoly(&b)?)?
                }
                OpCommand::Hull { a, b } => {
                    setops::convex_hull(&read_zpoly(&a)?, &read_zpoly(&b)?)?
                }
            };
            print!("{}", io::serialize_zpoly(&result));
            println!("# {}", result.size_stats());
            Ok(0)
        }
        Command::Vertices { file, tol } => {
            let z = read_zpoly(&file)?;
            print!("{}", io::serialize_vpoly(&convert::z_to_v(&z, tol)?));
            Ok(0)
        }
        Command::Bound { function, set, method, order, cap, splits } => {
            let f = io::parse_expr(&read_input(&function)?)?;
            let s = read_zpoly(&set)?;
            let cfg = BoundConfig {
                taylor_order: order,
                degree_cap: cap,
                split_depth: splits,
                method: match method {
                    MethodKind::Pz => rangebound::Method::Pz,
                    MethodKind::TmBox => rangebound::Method::TmBox,
                    MethodKind::IaBox => rangebound::Method::IaBox,
                },
                inflate: false,
            };
            println!("{}", rangebound::bound(&f, &s, &cfg)?);
            Ok(0)
        }
        Command::Complexity(args) => {
            let rows = complexity_rows(&args)?;
            print!("{}", complexity::rows_to_csv(&rows));
            Ok(0)
        }
        Command::Regularize { file, output } => {
            let (regular, _) = read_zpoly(&file)?.regularize();
            write_output(output.as_deref(), &io::serialize_zpoly(&regular))?;
            Ok(0)
        }
    }
}

fn parse_sweep(sweep: &str) -> Result<Vec<usize>, CliError> {
    let parts: Vec<&str> = sweep.split(':').collect();
    let invalid = || CliError::Usage(format!("--sweep takes an inclusive range 'a:b', got '{sweep}'"));
    if parts.len() != 2 {
        return Err(invalid());
    }
    let a: usize = parts[0].parse().map_err(|_| invalid())?;
    let b: usize = parts[1].parse().map_err(|_| invalid())?;
    if a > b {
        return Err(invalid());
    }
    Ok((a..=b).collect())
}

fn complexity_rows(args: &ComplexityArgs) -> Result<Vec<complexity::ComplexityRow>, CliError> {
    let sweep = args.sweep.as_deref().map(parse_sweep).transpose()?;
    let spec = match args.case {
        CaseKind::ZonoPoint => {
            if args.m1.is_some() || args.m2.is_some() {
                return Err(CliError::Usage(
                    "case zono-point takes -m, not --m1/--m2".into(),
                ));
            }
            let m = match (sweep, args.m) {
                (Some(range), _) => range,
                (None, Some(m)) => vec![m],
                (None, None) => {
                    return Err(CliError::Usage("case zono-point needs -m or --sweep".into()))
                }
            };
            TableSpec::ZonoPoint { n: vec![args.n], m }
        }
        CaseKind::ZonoZono => {
            if args.m.is_some() {
                return Err(CliError::Usage(
                    "case zono-zono takes --m1/--m2, not -m".into(),
                ));
            }
            let (m1, m2) = match (sweep, args.m1, args.m2) {
                (Some(range), None, None) => (range.clone(), range),
                (None, Some(m1), Some(m2)) => (vec![m1], vec![m2]),
                _ => {
                    return Err(CliError::Usage(
                        "case zono-zono needs --m1 and --m2, or --sweep alone".into(),
                    ))
                }
            };
            TableSpec::ZonoZono { n: vec![args.n], m1, m2 }
        }
    };
    Ok(complexity::emit_table(&spec)?)
}
