//! `tnv`: command-line front end for the verification suites and the
//! individual computations behind them.

use std::fs;
use std::io::Write as _;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};
use tnv_core::diagrams::{all_levels, maya_to_young, MayaDiagram};
use tnv_core::expcurve::{
    collinear_sharpness, minkowski_identity_check, peculiar_middle, perimeters, perimeters_i, slope_check, Check,
    FrequencySet, DEFAULT_SAMPLES,
};
use tnv_core::poly::parse_rational;
use tnv_core::profile::profile_geometric;
use tnv_core::report::{emit_table, exit_code_for_error, run_suite, SuiteParams, TableFormat};
use tnv_core::sums::{verify_identity, Identity};
use tnv_core::tableaux::{edge_sum_sweep, tableau_profile_sum, EdgeSum, Side};
use tnv_core::wedge::{
    default_truncation, derivative_syt, pluecker, pluecker_json, stationary_indices, PolyCurve,
};
use tnv_core::CoreError;

#[derive(Parser)]
#[command(name = "tnv", version, about = "Checks identities of associated curves and exponential curves")]
struct Cli {
    /// Write the JSON output here; companion tables go beside it.
    #[arg(long, global = true)]
    out: Option<PathBuf>,

    #[arg(long, global = true, value_enum, default_value_t = Format::Json)]
    format: Format,

    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Csv,
    Markdown,
}

impl Format {
    fn table(self) -> Option<TableFormat> {
        match self {
            Format::Json => None,
            Format::Csv => Some(TableFormat::Csv),
            Format::Markdown => Some(TableFormat::Markdown),
        }
    }
}

#[derive(Subcommand)]
enum Command {
    /// Run a verification suite: diagrams, tableaux, sums, wedge, expcurve or all.
    Suite(SuiteArgs),
    /// Edge sums and tableau profile sums for one rectangle.
    Tableaux {
        #[arg(long, default_value_t = 4)]
        n: usize,
        #[arg(long, default_value_t = 2)]
        p: usize,
    },
    /// Balanced sum identities on seeded random sequences.
    Sums {
        #[command(subcommand)]
        command: SumsCommand,
    },
    /// Perimeter checks on a planar frequency set.
    Expcurve {
        #[command(subcommand)]
        command: ExpcurveCommand,
    },
    /// Plücker coordinates, stationary indices and formal derivatives.
    Wedge {
        #[command(subcommand)]
        command: WedgeCommand,
    },
    /// Index tuples by level with their diagrams and profiles.
    Diagrams {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
    },
}

#[derive(Args)]
struct SuiteArgs {
    name: String,
    #[arg(long)]
    n: Option<usize>,
    #[arg(long)]
    p: Option<usize>,
    #[arg(long)]
    i: Option<usize>,
    #[arg(long)]
    trials: Option<usize>,
    #[arg(long)]
    seed: Option<u64>,
    /// Named point set for the expcurve suite (six-point, paper-n5).
    #[arg(long)]
    preset: Option<String>,
    /// CSV file of points `a,b`.
    #[arg(long)]
    points: Option<PathBuf>,
    /// JSON file (or inline JSON) of coefficient arrays.
    #[arg(long)]
    curve: Option<String>,
}

#[derive(Subcommand)]
enum SumsCommand {
    /// Max residual of an identity over random sequences.
    Verify {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 200)]
        trials: usize,
        #[arg(long, default_value_t = 7)]
        seed: u64,
        /// One of balanced, balanced-float, ak-identity, weighted, chain,
        /// second-difference, box-form, brill-segre, or all.
        #[arg(long, default_value = "balanced")]
        identity: String,
    },
}

#[derive(Args, Clone)]
struct PointsArg {
    /// CSV file of points `a,b`; defaults to the six-point example set.
    #[arg(long)]
    points: Option<PathBuf>,
}

impl PointsArg {
    fn load(&self) -> Result<FrequencySet, Failure> {
        match &self.points {
            Some(path) => Ok(FrequencySet::from_csv(&read(path)?)?),
            None => Ok(FrequencySet::six_point()),
        }
    }
}

#[derive(Subcommand)]
enum ExpcurveCommand {
    /// `L_1..L_n`, their mirror symmetry, and `L_i^(p)` when `--p` is given.
    Perimeters {
        #[command(flatten)]
        points: PointsArg,
        #[arg(long)]
        p: Option<usize>,
    },
    /// `L_{p−1} + L_{p+1} = L_2^(p)` and the vertex-set identity behind it.
    Minkowski {
        #[command(flatten)]
        points: PointsArg,
        #[arg(long)]
        p: Option<usize>,
    },
    /// `L_p ≤ middle ≤ L_i^(p)`.
    Peculiar {
        #[command(flatten)]
        points: PointsArg,
        #[arg(long)]
        p: usize,
        #[arg(long)]
        i: usize,
    },
    /// Equality case on the collinear points `0..n`.
    Sharpness {
        #[arg(long, default_value_t = 5)]
        n: usize,
        #[arg(long)]
        p: Option<usize>,
        #[arg(long)]
        i: Option<usize>,
    },
    /// Numerical slope of the order function against `L_p / 2π`.
    Slope {
        #[command(flatten)]
        points: PointsArg,
        #[arg(long)]
        p: usize,
        #[arg(long, default_value_t = 50.0)]
        r1: f64,
        #[arg(long, default_value_t = 100.0)]
        r2: f64,
        #[arg(long, default_value_t = DEFAULT_SAMPLES)]
        samples: usize,
    },
}

#[derive(Subcommand)]
enum WedgeCommand {
    /// Plücker coordinates of the p-th associated curve.
    Pluecker {
        /// JSON file (or inline JSON) of coefficient arrays.
        #[arg(long)]
        curve: String,
        #[arg(long)]
        p: usize,
    },
    /// Stationary indices at a point.
    Stationary {
        #[arg(long)]
        curve: String,
        #[arg(long, default_value = "0")]
        z0: String,
    },
    /// i-th derivative of the identity p-tuple, with hook-count coefficients.
    Derivative {
        #[arg(long)]
        p: usize,
        #[arg(long)]
        i: usize,
    },
}

/// Why the command stopped, and with which exit code.
#[derive(Debug)]
enum Failure {
    Core(CoreError),
    Io(String),
}

impl From<CoreError> for Failure {
    fn from(e: CoreError) -> Self {
        Failure::Core(e)
    }
}

impl Failure {
    fn code(&self) -> u8 {
        match self {
            Failure::Core(e) => exit_code_for_error(e) as u8,
            Failure::Io(_) => 2,
        }
    }
}

impl std::fmt::Display for Failure {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        match self {
            Failure::Core(e) => write!(f, "{e}"),
            Failure::Io(msg) => f.write_str(msg),
        }
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::Io(format!("cannot read {}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<(), Failure> {
    fs::write(path, text).map_err(|e| Failure::Io(format!("cannot write {}: {e}", path.display())))
}

/// Inline JSON when the argument starts with `[`, otherwise a file path.
fn load_curve(arg: &str) -> Result<PolyCurve, Failure> {
    let text = if arg.trim_start().starts_with('[') {
        arg.to_string()
    } else {
        read(Path::new(arg))?
    };
    Ok(PolyCurve::from_json(&text)?)
}

fn pretty(value: &impl Serialize) -> String {
    let mut text = serde_json::to_string_pretty(value).expect("output serializes");
    text.push('\n');
    text
}

/// What a command produced. `--out` receives the JSON; a table, when the
/// format asks for one, goes to stdout.
struct Output {
    json: String,
    table: Option<String>,
    /// Companion files written next to `--out`, by extension.
    extra: Vec<(&'static str, String)>,
    code: u8,
}

impl Output {
    fn json(json: String, code: u8) -> Self {
        Output {
            json,
            table: None,
            extra: Vec::new(),
            code,
        }
    }
}

fn checks_output(checks: &[Check], format: Format) -> Output {
    let code = if checks.iter().all(|c| c.pass) { 0 } else { 1 };
    let table = match format {
        Format::Json => None,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["quantity", "value", "bound", "pass"]).expect("in-memory write");
            for c in checks {
                let bound = c.bound.map(|b| b.to_string()).unwrap_or_default();
                w.write_record([c.quantity.clone(), c.value.to_string(), bound, c.pass.to_string()])
                    .expect("in-memory write");
            }
            Some(String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8"))
        }
        Format::Markdown => {
            let mut out = String::from("| quantity | value | bound | pass |\n|---|---|---|---|\n");
            for c in checks {
                let bound = c.bound.map(|b| b.to_string()).unwrap_or_default();
                out.push_str(&format!("| {} | {} | {} | {} |\n", c.quantity, c.value, bound, c.pass));
            }
            Some(out)
        }
    };
    Output {
        json: pretty(&checks),
        table,
        extra: Vec::new(),
        code,
    }
}

fn suite(args: SuiteArgs, format: Format) -> Result<Output, Failure> {
    let params = SuiteParams {
        n: args.n,
        p: args.p,
        i: args.i,
        trials: args.trials,
        seed: args.seed,
        preset: args.preset,
        points: match &args.points {
            Some(path) => Some(FrequencySet::from_csv(&read(path)?)?),
            None => None,
        },
        curve: args.curve.as_deref().map(load_curve).transpose()?,
    };
    let report = run_suite(&args.name, &params)?;
    eprintln!(
        "{}: {}/{} passed, max residual {}{}",
        report.suite,
        report.summary.passed,
        report.summary.total,
        report.summary.max_residual,
        report.resource_cap.as_deref().map(|c| format!(" (partial: {c})")).unwrap_or_default()
    );
    Ok(Output {
        json: report.to_json(),
        table: format.table().map(|t| emit_table(&report, t)),
        extra: Vec::new(),
        code: report.exit_code() as u8,
    })
}

fn edge_rows(sums: &[EdgeSum]) -> Vec<Value> {
    sums.iter()
        .map(|e| {
            json!({
                "side": e.side.name(),
                "j": e.j,
                "value": e.value.to_string(),
                "closedForm": e.closed_form.to_string(),
                "extendedShapeCount": e.extended_shape_count.to_string(),
                "holds": e.holds(),
            })
        })
        .collect()
}

fn edge_table(sums: &[EdgeSum], table: TableFormat) -> String {
    let header = ["side", "j", "value", "closed_form", "extended_shape_count", "holds"];
    let rows: Vec<[String; 6]> = sums
        .iter()
        .map(|e| {
            [
                e.side.name().to_string(),
                e.j.to_string(),
                e.value.to_string(),
                e.closed_form.to_string(),
                e.extended_shape_count.to_string(),
                e.holds().to_string(),
            ]
        })
        .collect();
    match table {
        TableFormat::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(header).expect("in-memory write");
            for r in &rows {
                w.write_record(r).expect("in-memory write");
            }
            String::from_utf8(w.into_inner().expect("in-memory flush")).expect("utf-8")
        }
        TableFormat::Markdown => {
            let mut out = format!("| {} |\n|{}\n", header.join(" | "), "---|".repeat(header.len()));
            for r in &rows {
                out.push_str(&format!("| {} |\n", r.join(" | ")));
            }
            out
        }
    }
}

fn tableaux(n: usize, p: usize, format: Format) -> Result<Output, Failure> {
    let mut sums = edge_sum_sweep(Side::EmptyBox, p, n)?;
    sums.extend(edge_sum_sweep(Side::Ball, p, n)?);
    let profiles = (1..=n)
        .map(|k| tableau_profile_sum(k, p, n))
        .collect::<Result<Vec<_>, _>>()?;
    let capped = profiles.iter().any(|t| t.enumerated.is_none());
    let ok = sums.iter().all(EdgeSum::holds) && profiles.iter().all(|t| t.enumerated.is_none() || t.verified());
    let report = json!({
        "n": n,
        "p": p,
        "edgeSums": edge_rows(&sums),
        "tableauProfile": profiles.iter().map(|t| json!({
            "k": t.k,
            "enumerated": t.enumerated.as_ref().map(|v| v.to_string()),
            "closedForm": t.closed_form.to_string(),
            "verified": t.verified(),
        })).collect::<Vec<_>>(),
    });
    let code = match (ok, capped) {
        (false, _) => 1,
        (true, true) => 3,
        (true, false) => 0,
    };
    Ok(Output {
        json: pretty(&report),
        table: format.table().map(|t| edge_table(&sums, t)),
        extra: vec![("edge_sums.csv", edge_table(&sums, TableFormat::Csv))],
        code,
    })
}

fn sums(command: SumsCommand) -> Result<Output, Failure> {
    let SumsCommand::Verify {
        n,
        p,
        trials,
        seed,
        identity,
    } = command;
    let run = |id: Identity| -> Result<Value, Failure> {
        let v = verify_identity(id, n, p, trials, seed)?;
        let pass = v.pass();
        Ok(json!({
            "identity": id.name(),
            "max_abs_residual": v.max_abs_residual,
            "trials": v.trials,
            "n": n,
            "p": p,
            "seed": seed,
            "failures": v.failures,
            "pass": pass,
        }))
    };
    let value = if identity == "all" {
        Value::Array(Identity::ALL.into_iter().map(run).collect::<Result<_, _>>()?)
    } else {
        run(Identity::parse(&identity)?)?
    };
    let all_pass = match &value {
        Value::Array(items) => items.iter().all(|v| v["pass"] == true),
        single => single["pass"] == true,
    };
    Ok(Output::json(pretty(&value), if all_pass { 0 } else { 1 }))
}

fn expcurve(command: ExpcurveCommand, format: Format) -> Result<Output, Failure> {
    let checks = match command {
        ExpcurveCommand::Perimeters { points, p } => {
            let set = points.load()?;
            let n = set.n();
            let l = perimeters(&set)?;
            let mut checks: Vec<Check> = (1..=n).map(|k| Check::value(format!("L_{k}"), l.get(k))).collect();
            for k in 1..=n {
                checks.push(Check::equal(format!("L_{}", n + 1 - k), l.get(n + 1 - k), l.get(k)));
            }
            if let Some(p) = p {
                for (i, v) in perimeters_i(&set, p)?.into_iter().enumerate() {
                    checks.push(Check::value(format!("L_{}^({p})", i + 1), v));
                }
            }
            checks
        }
        ExpcurveCommand::Minkowski { points, p } => {
            let set = points.load()?;
            let ps: Vec<usize> = p.map_or_else(|| (1..=set.n()).collect(), |p| vec![p]);
            let mut checks = Vec::new();
            for p in ps {
                checks.extend(minkowski_identity_check(&set, p)?.checks());
            }
            checks
        }
        ExpcurveCommand::Peculiar { points, p, i } => peculiar_middle(&points.load()?, p, i)?.checks(),
        ExpcurveCommand::Sharpness { n, p, i } => {
            let ps: Vec<usize> = p.map_or_else(|| (1..=n).collect(), |p| vec![p]);
            let mut checks = Vec::new();
            for p in ps {
                for s in collinear_sharpness(n, p)? {
                    if i.is_none_or(|i| i == s.i) {
                        checks.extend(s.checks());
                    }
                }
            }
            checks
        }
        ExpcurveCommand::Slope {
            points,
            p,
            r1,
            r2,
            samples,
        } => vec![slope_check(&points.load()?, p, r1, r2, samples)?.check()],
    };
    Ok(checks_output(&checks, format))
}

fn wedge(command: WedgeCommand) -> Result<Output, Failure> {
    let value = match command {
        WedgeCommand::Pluecker { curve, p } => pluecker_json(&pluecker(&load_curve(&curve)?, p)?),
        WedgeCommand::Stationary { curve, z0 } => {
            let curve = load_curve(&curve)?;
            let z0 = parse_rational(&z0)?;
            serde_json::to_value(stationary_indices(&curve, &z0, default_truncation(&curve))?).expect("serializes")
        }
        WedgeCommand::Derivative { p, i } => serde_json::to_value(derivative_syt(p, i)?).expect("serializes"),
    };
    Ok(Output::json(pretty(&value), 0))
}

fn diagrams(n: usize, p: usize) -> Result<Output, Failure> {
    let mut levels = Vec::new();
    for (s, level) in all_levels(n, p)?.into_iter().enumerate() {
        let mut rows = Vec::new();
        for sigma in level {
            let lambda = maya_to_young(&sigma, p, n)?;
            rows.push(json!({
                "sigma": sigma,
                "maya": MayaDiagram::from_tuple(&sigma, n)?.to_string(),
                "young": lambda,
                "profile": profile_geometric(&lambda, p, n)?,
            }));
        }
        levels.push(json!({"level": s, "tuples": rows}));
    }
    Ok(Output::json(pretty(&json!({"n": n, "p": p, "levels": levels})), 0))
}

fn run(cli: Cli) -> Result<Output, Failure> {
    match cli.command {
        Command::Suite(args) => suite(args, cli.format),
        Command::Tableaux { n, p } => tableaux(n, p, cli.format),
        Command::Sums { command } => sums(command),
        Command::Expcurve { command } => expcurve(command, cli.format),
        Command::Wedge { command } => wedge(command),
        Command::Diagrams { n, p } => diagrams(n, p),
    }
}

fn emit(output: &Output, out: Option<&Path>) -> Result<(), Failure> {
    let stdout = match out {
        Some(path) => {
            write(path, &output.json)?;
            for (extension, text) in &output.extra {
                write(&path.with_extension(extension), text)?;
            }
            output.table.as_deref()
        }
        None => Some(output.table.as_deref().unwrap_or(&output.json)),
    };
    if let Some(text) = stdout {
        std::io::stdout()
            .write_all(text.as_bytes())
            .map_err(|e| Failure::Io(e.to_string()))?;
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let out = cli.out.clone();
    match run(cli) {
        Ok(output) => {
            let written = emit(&output, out.as_deref());
            match written {
                Ok(()) => ExitCode::from(output.code),
                Err(e) => {
                    eprintln!("error: {e}");
                    ExitCode::from(e.code())
                }
            }
        }
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.code())
        }
    }
}
