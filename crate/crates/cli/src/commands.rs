use dualbvp::{
    error_curve as curve, example, max_error, solve as run_solver, BVProblem64, BernsteinPoly64, Projection,
    QuadratureSettings, ReferenceSolution, SolveOptions, SolveReport64,
};

use crate::output::{csv_text, sci, sci3, CoefficientFile, RunOptions, Sci};
use crate::spec::ProblemSpec;
use crate::{CliError, Result, MAX_DEGREE};

/// Flags shared by `solve` and `error-curve`.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct RunArgs {
    pub degree: usize,
    pub quad_order: Option<usize>,
    pub quad_panels: Option<usize>,
    pub projection: Projection,
}

impl RunArgs {
    pub fn new(degree: usize) -> Self {
        Self {
            degree,
            quad_order: None,
            quad_panels: None,
            projection: Projection::default(),
        }
    }

    fn options(&self, base: QuadratureSettings) -> Result<SolveOptions> {
        check_degree(self.degree)?;
        let quadrature = QuadratureSettings {
            order: self.quad_order.or(base.order),
            panels: self.quad_panels.unwrap_or(base.panels),
        };
        if quadrature.order == Some(0) || quadrature.panels == 0 {
            return Err(CliError::Usage("quadrature order and panel count must be positive".into()));
        }
        let mut options = SolveOptions::new(self.degree).with_projection(self.projection);
        options.quadrature = quadrature;
        Ok(options.with_diagnostics())
    }
}

fn check_degree(n: usize) -> Result<()> {
    if n > MAX_DEGREE {
        return Err(CliError::Usage(format!("degree {n} exceeds the supported maximum {MAX_DEGREE}")));
    }
    Ok(())
}

pub fn projection_name(p: Projection) -> &'static str {
    match p {
        Projection::Compensated => "compensated",
        Projection::Plain => "plain",
    }
}

#[derive(Debug, Clone)]
pub struct SolveOutcome {
    pub report: SolveReport64,
    pub file: CoefficientFile,
    /// `E_N` on the 201-point grid when the problem has a reference.
    pub max_error: Option<f64>,
}

impl SolveOutcome {
    pub fn summary(&self) -> String {
        let n = self.file.degree;
        let mut s = format!("degree {n}: {} coefficients\n", self.file.coefficients.len());
        if let Some(r) = self.report.residuals.last() {
            s.push_str(&format!("final residual {}\n", sci(*r)));
        }
        if let Some(e) = self.max_error {
            s.push_str(&format!("E_{n} {}\n", sci(e)));
        }
        s
    }
}

pub fn solve(spec: &ProblemSpec, args: &RunArgs) -> Result<SolveOutcome> {
    let problem = spec.problem()?;
    let reference = spec.reference()?;
    solve_problem(&problem, reference.as_ref(), args, spec.quadrature())
}

pub fn solve_problem(
    problem: &BVProblem64,
    reference: Option<&ReferenceSolution>,
    args: &RunArgs,
    base: QuadratureSettings,
) -> Result<SolveOutcome> {
    let options = args.options(base)?;
    let report = run_solver(problem, &options)?;
    let max_error = reference
        .map(|r| max_error(&curve(&report.solution, r, 200)?))
        .transpose()?;
    let file = CoefficientFile {
        degree: report.solution.degree(),
        coefficients: report.solution.coeffs().iter().map(|&c| Sci(c)).collect(),
        residuals: report.residuals.iter().map(|&r| Sci(r)).collect(),
        options: RunOptions {
            quad_order: options.quadrature.order,
            quad_panels: options.quadrature.panels,
            projection: projection_name(options.projection).into(),
        },
    };
    Ok(SolveOutcome {
        report,
        file,
        max_error,
    })
}

/// `E_n` for every requested example and degree; `None` where `n < m`.
pub fn error_table(
    examples: &[usize],
    min_degree: usize,
    max_degree: usize,
    projection: Projection,
) -> Result<Vec<(usize, Vec<Option<f64>>)>> {
    if min_degree > max_degree {
        return Err(CliError::Usage(format!(
            "min degree {min_degree} exceeds max degree {max_degree}"
        )));
    }
    check_degree(max_degree)?;
    if examples.is_empty() {
        return Err(CliError::Usage("no examples requested".into()));
    }
    for (i, id) in examples.iter().enumerate() {
        if examples[..i].contains(id) {
            return Err(CliError::Usage(format!("example {id} listed twice")));
        }
    }
    let problems = examples
        .iter()
        .map(|&id| example(id).map_err(CliError::from))
        .collect::<Result<Vec<_>>>()?;

    // w_n does not depend on the target degree, so one run per example
    // yields the whole column
    let columns: Vec<Result<Vec<Option<f64>>>> = std::thread::scope(|scope| {
        let handles: Vec<_> = problems
            .iter()
            .map(|ex| {
                scope.spawn(move || -> Result<Vec<Option<f64>>> {
                    let m = ex.problem.order();
                    if max_degree < m {
                        return Ok(vec![None; max_degree - min_degree + 1]);
                    }
                    let options = SolveOptions::new(max_degree)
                        .with_projection(projection)
                        .with_diagnostics();
                    let report = run_solver(&ex.problem, &options)?;
                    (min_degree..=max_degree)
                        .map(|n| {
                            if n < m {
                                return Ok(None);
                            }
                            let w = report.iterate(n).expect("diagnostics keep every iterate");
                            Ok(Some(max_error(&curve(w, &ex.reference, 200)?)?))
                        })
                        .collect()
                })
            })
            .collect();
        handles
            .into_iter()
            .map(|h| h.join().expect("solver thread panicked"))
            .collect()
    });
    let columns = columns.into_iter().collect::<Result<Vec<_>>>()?;

    Ok((min_degree..=max_degree)
        .enumerate()
        .map(|(row, n)| (n, columns.iter().map(|c| c[row]).collect()))
        .collect())
}

pub fn table_csv(examples: &[usize], min_degree: usize, max_degree: usize, projection: Projection) -> Result<String> {
    let rows = error_table(examples, min_degree, max_degree, projection)?;
    let header: Vec<String> = std::iter::once("n".to_string())
        .chain(examples.iter().map(|id| format!("example{id}")))
        .collect();
    let header: Vec<&str> = header.iter().map(String::as_str).collect();
    csv_text(
        &header,
        rows.into_iter().map(|(n, cells)| {
            std::iter::once(n.to_string())
                .chain(cells.into_iter().map(|c| c.map(sci3).unwrap_or_default()))
                .collect::<Vec<_>>()
        }),
    )
}

pub enum CurveTarget {
    Example(usize),
    Spec(ProblemSpec),
}

/// Rows `(x_i, ε_n(x_i))` on `{0, 1/M, ..., 1}`.
pub fn error_curve(target: &CurveTarget, args: &RunArgs, grid: usize) -> Result<Vec<(f64, f64)>> {
    if grid == 0 {
        return Err(CliError::Usage("grid size must be at least 1".into()));
    }
    let (problem, reference, base) = match target {
        CurveTarget::Example(id) => {
            let ex = example(*id)?;
            (ex.problem, ex.reference, QuadratureSettings::default())
        }
        CurveTarget::Spec(spec) => {
            let problem = spec.problem()?;
            let reference = spec
                .reference()?
                .ok_or_else(|| CliError::Usage("problem file has no exact solution".into()))?;
            (problem, reference, spec.quadrature())
        }
    };
    // reject unusable grids before solving
    reference.on_grid(grid)?;
    let outcome = solve_problem(&problem, None, args, base)?;
    Ok(curve(&outcome.report.solution, &reference, grid)?)
}

pub fn error_curve_csv(target: &CurveTarget, args: &RunArgs, grid: usize) -> Result<String> {
    let rows = error_curve(target, args, grid)?;
    csv_text(&["x", "epsilon"], rows.into_iter().map(|(x, e)| [sci(x), sci(e)]))
}

/// `w(x)` for a coefficient file.
pub fn eval(coeffs_json: &str, x: f64) -> Result<f64> {
    if !(0.0..=1.0).contains(&x) {
        return Err(CliError::Usage(format!("x = {x} lies outside [0, 1]")));
    }
    let coeffs = CoefficientFile::coefficients_from_json(coeffs_json)?;
    let w = BernsteinPoly64::new(coeffs)?;
    Ok(w.eval(x)?)
}
