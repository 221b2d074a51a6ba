//! Command-line interface for circle-pattern feasibility checks, solves,
//! and geometric export.
//!
//! Exit codes: 0 on success (including a "feasible" verdict), 1 when a
//! check or solve finds the prescription infeasible, 2 for input problems
//! (unreadable files, malformed documents, invalid options), 3 for
//! numerical failures.

use std::ffi::OsString;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};

use circle_pattern::format::{self, Instance};
use circle_pattern::solver::{self, SolveOptions};
use circle_pattern::{
    feasibility, layout, Error, EuclideanGauge, FeasibilityReport, FeasibilityStatus, Result,
    Severity, SolveMethod,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INFEASIBLE: i32 = 1;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_NUMERICAL: i32 = 3;

#[derive(Parser)]
#[command(
    name = "circle-pattern",
    version,
    about = "Decide and compute circle patterns with prescribed intersection and cone angles"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Parse an instance file and report validation diagnostics.
    Validate {
        /// Instance JSON file.
        file: PathBuf,
    },
    /// Decide feasibility of the prescribed angles.
    Check {
        /// Instance JSON file.
        file: PathBuf,
        /// Margin below which the verdict is reported as "boundary".
        #[arg(long, default_value_t = solver::PRECHECK_TOL)]
        tol: f64,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Compute the pattern radii and certify the result.
    Solve {
        /// Instance JSON file.
        file: PathBuf,
        /// Numerical route to the solution.
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Residual target on cone angles (infinity norm, radians).
        #[arg(long, default_value_t = solver::DEFAULT_TOL)]
        tol: f64,
        /// Euclidean scale fix: `sum-to-one` or `fix:<face-id>`.
        #[arg(long, default_value = "sum-to-one")]
        gauge: String,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
        /// Also write the JSON report to this path.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Render a solved pattern as per-face fans.
    Export {
        /// Instance JSON file.
        file: PathBuf,
        /// Report written by `solve --out` (its radii are used).
        #[arg(long)]
        solution: PathBuf,
        /// Write the SVG drawing to this path.
        #[arg(long)]
        svg: PathBuf,
        /// Also write the layout document (fans + gluing table) as JSON.
        #[arg(long)]
        layout: Option<PathBuf>,
    },
    /// Decide feasibility by exhaustive subset enumeration (small instances).
    Oracle {
        /// Instance JSON file.
        file: PathBuf,
        /// Margin below which the verdict is reported as "boundary".
        #[arg(long, default_value_t = solver::PRECHECK_TOL)]
        tol: f64,
        /// Print the full report as JSON.
        #[arg(long)]
        json: bool,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum MethodArg {
    Iterative,
    Newton,
    Auto,
}

impl MethodArg {
    fn to_method(self) -> SolveMethod {
        match self {
            MethodArg::Iterative => SolveMethod::Iterative,
            MethodArg::Newton => SolveMethod::Newton,
            MethodArg::Auto => SolveMethod::Auto,
        }
    }

    fn name(self) -> &'static str {
        match self {
            MethodArg::Iterative => "iterative",
            MethodArg::Newton => "newton",
            MethodArg::Auto => "auto",
        }
    }
}

/// Run the CLI on an argument vector (including the program name) and
/// return the process exit code.
pub fn run<I, T>(argv: I) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(argv) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_INPUT } else { EXIT_OK };
            let _ = e.print();
            return code;
        }
    };
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}

/// Exit code for an error per the interface contract.
fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Infeasible(_) => EXIT_INFEASIBLE,
        Error::InvalidInput(_)
        | Error::Unsupported(_)
        | Error::SizeGuard(_)
        | Error::Io(_)
        | Error::Parse(_) => EXIT_INPUT,
        Error::Degenerate(_) | Error::Numerical(_) | Error::NoConvergence { .. } => EXIT_NUMERICAL,
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Validate { file } => cmd_validate(&file),
        Command::Check { file, tol, json } => cmd_check(&file, tol, json, false),
        Command::Oracle { file, tol, json } => cmd_check(&file, tol, json, true),
        Command::Solve {
            file,
            method,
            tol,
            gauge,
            json,
            out,
        } => cmd_solve(&file, method, tol, &gauge, json, out.as_deref()),
        Command::Export {
            file,
            solution,
            svg,
            layout,
        } => cmd_export(&file, &solution, &svg, layout.as_deref()),
    }
}

fn load(file: &Path) -> Result<Instance> {
    format::load_instance(file).map_err(|e| match e {
        // Name the file for bare IO failures; everything else already
        // carries a position or an id.
        Error::Io(io) => Error::Io(std::io::Error::new(
            io.kind(),
            format!("{}: {io}", file.display()),
        )),
        other => other,
    })
}

fn cmd_validate(file: &Path) -> Result<i32> {
    let instance = load(file)?;
    let complex = instance.problem.complex();
    for diagnostic in complex.validate() {
        // A parsed instance can only carry warnings; errors fail the load.
        debug_assert_eq!(diagnostic.severity, Severity::Warning);
        eprintln!("{diagnostic}");
    }
    let name = instance
        .metadata
        .name
        .clone()
        .unwrap_or_else(|| file.display().to_string());
    println!(
        "ok: {name} — {}, {} faces, {} edges, {} vertices",
        instance.problem.geometry().name(),
        complex.faces.len(),
        complex.edges.len(),
        complex.vertices.len(),
    );
    Ok(EXIT_OK)
}

fn print_feasibility(report: &FeasibilityReport) {
    println!("status: {}", report.status.as_str());
    if report.margin.is_finite() {
        println!("margin: {}", report.margin);
    } else {
        println!("margin: unconstrained (no nonempty proper subset exists)");
    }
    if let Some(cert) = &report.certificate {
        let faces: Vec<&str> = cert.faces.iter().map(String::as_str).collect();
        println!(
            "certificate: {} face(s) {{{}}} with slack {}",
            faces.len(),
            faces.join(", "),
            cert.slack,
        );
    }
    if let Some(dual) = &report.dual_certificate {
        println!("dual certificate: objective {}", dual.objective);
    }
}

fn feasibility_exit(status: FeasibilityStatus) -> i32 {
    match status {
        FeasibilityStatus::Feasible | FeasibilityStatus::BoundaryFeasible => EXIT_OK,
        FeasibilityStatus::Infeasible => EXIT_INFEASIBLE,
    }
}

fn cmd_check(file: &Path, tol: f64, json: bool, brute_force: bool) -> Result<i32> {
    let instance = load(file)?;
    let report = if brute_force {
        feasibility::check_brute_force(&instance.problem, tol)?
    } else {
        feasibility::check(&instance.problem, tol)?
    };
    if json {
        println!("{}", format::feasibility_json(&report));
    } else {
        print_feasibility(&report);
    }
    Ok(feasibility_exit(report.status))
}

fn parse_gauge(s: &str) -> Result<EuclideanGauge> {
    if s == "sum-to-one" {
        Ok(EuclideanGauge::SumToOne)
    } else if let Some(face) = s.strip_prefix("fix:") {
        if face.is_empty() {
            return Err(Error::InvalidInput("gauge `fix:` names no face".into()));
        }
        Ok(EuclideanGauge::FixFace(face.to_string()))
    } else {
        Err(Error::InvalidInput(format!(
            "gauge `{s}` is not `sum-to-one` or `fix:<face-id>`"
        )))
    }
}

fn cmd_solve(
    file: &Path,
    method: MethodArg,
    tol: f64,
    gauge: &str,
    json: bool,
    out: Option<&Path>,
) -> Result<i32> {
    let instance = load(file)?;
    let options = SolveOptions {
        method: method.to_method(),
        tol,
        euclidean_gauge: parse_gauge(gauge)?,
        ..SolveOptions::default()
    };
    let report = solver::solve(&instance.problem, &options)?;
    if let Some(warning) = &report.warning {
        eprintln!("warning: {warning}");
    }
    let feas = feasibility::check(&instance.problem, solver::PRECHECK_TOL)?;
    let document =
        format::solve_report_json(&report, &feas, instance.problem.geometry(), method.name());
    if let Some(path) = out {
        std::fs::write(path, &document)?;
    }
    if json {
        println!("{document}");
    } else {
        println!(
            "solved: residual {:e} after {} iteration(s) ({})",
            report.residual,
            report.iterations,
            method.name(),
        );
        println!("energy: {}", report.energy);
        match report.kkt_ok {
            Some(true) => println!("stationarity: verified"),
            Some(false) => println!("stationarity: FAILED"),
            None => {}
        }
        println!("radii:");
        for (id, r) in report.radii.map() {
            println!("  {id} = {r}");
        }
        if let Some(path) = out {
            println!("report written to {}", path.display());
        }
    }
    Ok(EXIT_OK)
}

fn cmd_export(file: &Path, solution: &Path, svg: &Path, layout_out: Option<&Path>) -> Result<i32> {
    let instance = load(file)?;
    let radii = format::load_solution_radii(solution)?;
    let document = layout::export_layout(&instance.problem, &radii)?;
    std::fs::write(svg, layout::render_svg(&document)?)?;
    if let Some(path) = layout_out {
        std::fs::write(path, format::layout_json(&document))?;
    }
    println!(
        "wrote {} ({} fan(s), {} gluing row(s))",
        svg.display(),
        document.faces.len(),
        document.gluing.len(),
    );
    Ok(EXIT_OK)
}
