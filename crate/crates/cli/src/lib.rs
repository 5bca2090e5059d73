//! Command-line front end: `solve`, `converge`, `coeffs` and `problems`.
//!
//! [`run`] returns the process exit code: 0 on success, 1 for usage and
//! configuration errors, 2 when a solver fails, 3 for an unknown problem.

use std::fmt::Write as _;
use std::io::Write;
use std::sync::Arc;

use clap::error::ErrorKind;
use clap::Parser;
use serde_json::json;
use urysohn::galerkin::GalerkinSetup;
use urysohn::poly_basis::AsymptoticCoefficients;
use urysohn::{
    convergence_study, problem_by_name, registry, solve_discrete_galerkin, solve_nystrom, Error, NewtonConfig,
    StudyConfig,
};

pub mod args;
pub mod render;

use args::{Cli, Command, ConvergeArgs, Discretisation, Format, Method, SolveArgs};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_SOLVER: i32 = 2;
pub const EXIT_UNKNOWN_PROBLEM: i32 = 3;

#[derive(Debug)]
enum Failure {
    Usage(String),
    Io(std::io::Error),
    Core(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Core(e)
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Io(e)
    }
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) | Failure::Io(_) => EXIT_USAGE,
            Failure::Core(e) => match e.root() {
                Error::UnknownProblem(_) => EXIT_UNKNOWN_PROBLEM,
                Error::Convergence { .. } | Error::Singular { .. } | Error::Evaluation { .. } => EXIT_SOLVER,
                _ => EXIT_USAGE,
            },
        }
    }

    fn message(&self) -> String {
        match self {
            Failure::Usage(m) => m.clone(),
            Failure::Io(e) => format!("i/o error: {e}"),
            Failure::Core(e) => e.to_string(),
        }
    }
}

/// Runs the CLI on `argv` (including the program name).
pub fn run<I, T>(argv: I, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = stdout.write_all(text.as_bytes());
                    EXIT_OK
                }
                _ => {
                    let _ = stderr.write_all(text.as_bytes());
                    EXIT_USAGE
                }
            };
        }
    };
    match dispatch(cli.command, stdout) {
        Ok(()) => EXIT_OK,
        Err(f) => {
            let _ = writeln!(stderr, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn dispatch(command: Command, stdout: &mut dyn Write) -> Result<(), Failure> {
    match command {
        Command::Problems => {
            let mut out = String::new();
            for e in registry() {
                let _ = writeln!(out, "{:<18} {}", e.name, e.description);
            }
            stdout.write_all(out.as_bytes())?;
        }
        Command::Coeffs(a) => {
            let c = AsymptoticCoefficients::new(a.r as usize)?;
            stdout.write_all(render::coefficients(&c).as_bytes())?;
        }
        Command::Solve(a) => {
            let text = solve(&a)?;
            emit(&a.disc, &text, stdout)?;
        }
        Command::Converge(a) => {
            let text = converge(&a)?;
            emit(&a.disc, &text, stdout)?;
        }
    }
    Ok(())
}

fn emit(disc: &Discretisation, text: &str, stdout: &mut dyn Write) -> Result<(), Failure> {
    match &disc.output {
        Some(path) => std::fs::write(path, text)?,
        None => stdout.write_all(text.as_bytes())?,
    }
    Ok(())
}

fn newton_config(disc: &Discretisation) -> Result<NewtonConfig, Failure> {
    if !(disc.tol > 0.0 && disc.tol.is_finite()) {
        return Err(Failure::Usage(format!("--tol must be positive, got {}", disc.tol)));
    }
    Ok(NewtonConfig {
        tol: disc.tol,
        max_iter: disc.max_iter as usize,
        execution: disc.execution.into(),
        ..NewtonConfig::default()
    })
}

fn execution_name(disc: &Discretisation) -> &'static str {
    match disc.execution {
        args::ExecArg::Sequential => "sequential",
        args::ExecArg::Parallel => "parallel",
    }
}

fn converge(a: &ConvergeArgs) -> Result<String, Failure> {
    let disc = &a.disc;
    let problem = problem_by_name(&disc.problem)?;
    let n_list: Vec<usize> = a.n.iter().map(|&n| n as usize).collect();
    let level_n = a.level.map(|l| l as usize).unwrap_or(n_list[0]);
    if !n_list.contains(&level_n) {
        return Err(Failure::Usage(format!(
            "--level {level_n} is not in the ladder {n_list:?}"
        )));
    }
    let config = StudyConfig {
        r: disc.r as usize,
        n_list,
        refinement: disc.p_rule.0,
        rho: disc.rho.map(|r| r as usize),
        newton: newton_config(disc)?,
        execution: disc.execution.into(),
    };
    // reject bad ladders before any solve
    config.setups()?;
    let report = convergence_study(&problem, &config)?;
    let level = report.level(level_n).expect("level is in the ladder");
    Ok(match disc.format {
        Format::Csv => render::level_csv(level),
        Format::Md => render::level_markdown(&report, level),
        Format::Json => render::report_json(&report, execution_name(disc)),
    })
}

fn solve(a: &SolveArgs) -> Result<String, Failure> {
    let disc = &a.disc;
    let problem = problem_by_name(&disc.problem)?;
    let setup = GalerkinSetup::with_rule(
        a.n as usize,
        disc.r as usize,
        disc.p_rule.0,
        disc.rho.map(|r| r as usize),
    )?;
    let newton = newton_config(disc)?;
    let grid = setup.grid()?;
    let t = grid.partition_points();

    let (values, iterations, residual) = match a.method {
        Method::Galerkin => {
            let sol = solve_discrete_galerkin(&problem, &setup, &newton)?;
            let z = sol.iterated().eval_many(&t)?;
            (z, sol.newton_iterations(), sol.final_residual_norm())
        }
        Method::Nystrom => {
            let sol = solve_nystrom(&problem, Arc::new(grid), &newton)?;
            let z = t.iter().map(|&s| sol.eval(s)).collect::<urysohn::Result<Vec<_>>>()?;
            (z, sol.newton_iterations(), sol.final_residual_norm())
        }
    };
    let errors: Vec<Option<f64>> = t
        .iter()
        .zip(&values)
        .map(|(&s, z)| problem.exact(s).map(|e| (e - z).abs()))
        .collect();
    let method = match a.method {
        Method::Galerkin => "galerkin",
        Method::Nystrom => "nystrom",
    };

    let mut out = String::new();
    match disc.format {
        Format::Csv => {
            out.push_str("t,z,eps\n");
            for ((s, z), e) in t.iter().zip(&values).zip(&errors) {
                let _ = writeln!(
                    out,
                    "{},{},{}",
                    render::sci(*s),
                    render::sci(*z),
                    e.map(render::sci).unwrap_or_default()
                );
            }
        }
        Format::Md => {
            let _ = writeln!(
                out,
                "problem `{}`, method {method}, r = {}, n = {}, p = {}, m = {}, rho = {}",
                problem.name(),
                setup.r,
                setup.n,
                setup.p,
                setup.m(),
                setup.rho
            );
            let _ = writeln!(
                out,
                "newton iterations = {iterations}, final residual = {residual:.3e}\n"
            );
            out.push_str("| t_i | z(t_i) | eps |\n|---|---|---|\n");
            for ((s, z), e) in t.iter().zip(&values).zip(&errors) {
                let e = e.map(|e| format!("{e:.2e}")).unwrap_or_else(|| "-".into());
                let _ = writeln!(out, "| {s} | {z:.10} | {e} |");
            }
        }
        Format::Json => {
            let doc = json!({
                "problem": problem.name(),
                "method": method,
                "setup": setup,
                "newton_iterations": iterations,
                "final_residual": residual,
                "t": t,
                "z": values,
                "eps": errors,
            });
            out = serde_json::to_string_pretty(&doc).expect("json serialises");
            out.push('\n');
        }
    }
    Ok(out)
}
