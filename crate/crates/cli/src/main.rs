use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use dualbvp::Projection;
use dualbvp_cli::commands::{self, CurveTarget, RunArgs};
use dualbvp_cli::output::sci;
use dualbvp_cli::spec::ProblemSpec;
use dualbvp_cli::{CliError, Result};

/// Polynomial solver for two-point boundary value problems
/// `y^(m) = f(x, y, ..., y^(m-1))` on [0, 1].
#[derive(Debug, Parser)]
#[command(name = "dualbvp", version)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, Default, ValueEnum)]
enum ProjectionArg {
    #[default]
    Compensated,
    Plain,
}

impl From<ProjectionArg> for Projection {
    fn from(p: ProjectionArg) -> Self {
        match p {
            ProjectionArg::Compensated => Projection::Compensated,
            ProjectionArg::Plain => Projection::Plain,
        }
    }
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Solve the problem in a JSON file and write the Bernstein coefficients.
    Solve {
        spec: PathBuf,
        #[arg(long)]
        degree: usize,
        /// Gauss-Legendre points per panel (default max(n + 2, 20)).
        #[arg(long)]
        quad_order: Option<usize>,
        #[arg(long)]
        quad_panels: Option<usize>,
        #[arg(long, value_enum, default_value_t)]
        projection: ProjectionArg,
        #[arg(long)]
        out: PathBuf,
    },
    /// Maximum errors E_n of the built-in examples as CSV.
    Table {
        #[arg(long, value_delimiter = ',', default_value = "1,2,3,4,5")]
        examples: Vec<usize>,
        #[arg(long, default_value_t = 2)]
        min_degree: usize,
        #[arg(long, default_value_t = 20)]
        max_degree: usize,
        #[arg(long, value_enum, default_value_t)]
        projection: ProjectionArg,
        /// Defaults to standard output.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Pointwise error |y(x) - w_n(x)| on a uniform grid as CSV.
    ErrorCurve {
        #[arg(long, required_unless_present = "spec", conflicts_with = "spec")]
        example: Option<usize>,
        /// Problem file with an "exact" solution.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        degree: usize,
        #[arg(long, default_value_t = 200)]
        grid: usize,
        #[arg(long, value_enum, default_value_t)]
        projection: ProjectionArg,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Evaluate a coefficient file at a point of [0, 1].
    Eval {
        #[arg(long)]
        coeffs: PathBuf,
        #[arg(long, allow_negative_numbers = true)]
        at: f64,
    },
}

fn write_or_print(out: Option<&PathBuf>, text: &str) -> Result<()> {
    match out {
        Some(path) => std::fs::write(path, text).map_err(CliError::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<()> {
    match cli.command {
        Command::Solve {
            spec,
            degree,
            quad_order,
            quad_panels,
            projection,
            out,
        } => {
            let spec = ProblemSpec::load(&spec)?;
            let args = RunArgs {
                degree,
                quad_order,
                quad_panels,
                projection: projection.into(),
            };
            let outcome = commands::solve(&spec, &args)?;
            std::fs::write(&out, outcome.file.to_json()?)?;
            print!("{}", outcome.summary());
        }
        Command::Table {
            examples,
            min_degree,
            max_degree,
            projection,
            out,
        } => {
            let text = commands::table_csv(&examples, min_degree, max_degree, projection.into())?;
            write_or_print(out.as_ref(), &text)?;
        }
        Command::ErrorCurve {
            example,
            spec,
            degree,
            grid,
            projection,
            out,
        } => {
            let target = match (example, spec) {
                (Some(id), _) => CurveTarget::Example(id),
                (None, Some(path)) => CurveTarget::Spec(ProblemSpec::load(&path)?),
                (None, None) => unreachable!("clap requires one of --example and --spec"),
            };
            let mut args = RunArgs::new(degree);
            args.projection = projection.into();
            let text = commands::error_curve_csv(&target, &args, grid)?;
            write_or_print(out.as_ref(), &text)?;
        }
        Command::Eval { coeffs, at } => {
            let text = std::fs::read_to_string(&coeffs)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", coeffs.display())))?;
            println!("{}", sci(commands::eval(&text, at)?));
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    match run(Cli::parse()) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
