/*
Copyright 2026 The epssub Authors.

Licensed under the Apache License, Version 2.0 (the "License");
you may not use this file except in compliance with the License.
You may obtain a copy of the License at

    http://www.apache.org/licenses/LICENSE-2.0

Unless required by applicable law or agreed to in writing, software
distributed under the License is distributed on an "AS IS" BASIS,
WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
See the License for the specific language governing permissions and
limitations under the License.
*/

//! `epssub`: PLQ transforms and ε-subdifferentials from the command line.
//!
//! Exit status: 0 success, 1 usage or I/O error, 2 invalid input, 3 internal
//! consistency failure.

use clap::{Args, Parser, Subcommand, ValueEnum};
use epssub::oracle::oracle_eps_interval;
use epssub::sweep::{br_witness, parse_grid, sweep_eps, sweep_x, SweepAxis};
use epssub::viz::{animate, export_bundle, render_views, write_frames, AnimationSpec, ExportFormat, Window};
use epssub::{
    parse_plq, plq_min, serialize_plq, serialize_plq_json, subdifferential, EpsError, EpsQuery, EpsSolver,
    PlqError, PlqFunction, Tolerance,
};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

const NOT_PLQ: &str = "the input function is not plq.";

#[derive(Parser)]
#[command(name = "epssub", version, about = "Epsilon-subdifferentials of convex PLQ functions")]
struct Cli {
    /// Absolute and relative comparison tolerance (default 1e-9, or $EPSSUB_TOL).
    #[arg(long, global = true)]
    tol: Option<f64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Validate a PLQ file and report convexity.
    Check(Input),
    /// Evaluate f at points.
    Eval {
        #[command(flatten)]
        input: Input,
        /// Evaluation point; repeatable.
        #[arg(long = "x", allow_negative_numbers = true)]
        xs: Vec<f64>,
        #[arg(long, allow_hyphen_values = true)]
        grid: Option<String>,
    },
    /// Legendre-Fenchel conjugate.
    Conjugate {
        #[command(flatten)]
        input: Input,
        #[command(flatten)]
        output: PlqOutput,
    },
    /// Pointwise minimum of two functions.
    Min {
        /// Two input files.
        #[arg(long = "plq", num_args = 1, required = true)]
        plq: Vec<PathBuf>,
        #[command(flatten)]
        output: PlqOutput,
    },
    /// Exact subdifferential at a point.
    Subdiff {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true)]
        xbar: f64,
    },
    /// ε-subdifferential at a point.
    Epssub {
        #[command(flatten)]
        query: Query,
        #[arg(long, value_enum, default_value = "text")]
        format: TextOrJson,
    },
    /// ε-subdifferential over a grid of x values.
    SweepX {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true)]
        eps: f64,
        #[command(flatten)]
        sweep: SweepOut,
    },
    /// ε-subdifferential over a grid of ε values.
    SweepEps {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true)]
        xbar: f64,
        #[command(flatten)]
        sweep: SweepOut,
    },
    /// Brøndsted-Rockafellar witnesses for a range of λ.
    BrCheck {
        #[command(flatten)]
        query: Query,
        /// Slope in ∂_ε f(x̄); defaults to the finite lower endpoint, else the upper one.
        #[arg(long, allow_negative_numbers = true)]
        s: Option<f64>,
        /// λ grid `lo:hi:n`.
        #[arg(long, default_value = "0.2:2:50")]
        grid: String,
    },
    /// Definition-level interval by search, compared with the algorithm.
    Oracle {
        #[command(flatten)]
        query: Query,
    },
    /// Primal, dual and subdifferential views.
    Render {
        #[command(flatten)]
        query: Query,
        #[command(flatten)]
        window: WindowArgs,
        #[arg(long, value_enum, default_value = "svg")]
        format: ViewFormat,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Numbered SVG frames over an x grid (with --eps) or an ε grid (with --xbar).
    Animate {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_negative_numbers = true, conflicts_with = "eps", required_unless_present = "eps")]
        xbar: Option<f64>,
        #[arg(long, allow_negative_numbers = true)]
        eps: Option<f64>,
        #[arg(long, allow_hyphen_values = true)]
        grid: String,
        #[command(flatten)]
        window: WindowArgs,
        /// Output directory.
        #[arg(long)]
        out: PathBuf,
    },
}

#[derive(Args)]
struct Input {
    /// PLQ file, text or JSON.
    #[arg(long)]
    plq: PathBuf,
}

#[derive(Args)]
struct Query {
    #[command(flatten)]
    input: Input,
    #[arg(long, allow_negative_numbers = true)]
    xbar: f64,
    #[arg(long, allow_negative_numbers = true)]
    eps: f64,
}

#[derive(Args)]
struct PlqOutput {
    #[arg(long, value_enum, default_value = "text")]
    format: TextOrJson,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct SweepOut {
    /// `lo:hi:n`.
    #[arg(long, allow_hyphen_values = true)]
    grid: String,
    #[arg(long, value_enum, default_value = "csv")]
    format: CsvOrJson,
    #[arg(long)]
    out: Option<PathBuf>,
}

#[derive(Args)]
struct WindowArgs {
    /// Primal range `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    x_window: Option<String>,
    /// Slope range `lo:hi`.
    #[arg(long, allow_hyphen_values = true)]
    s_window: Option<String>,
}

#[derive(Clone, Copy, ValueEnum)]
enum TextOrJson {
    Text,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum CsvOrJson {
    Csv,
    Json,
}

#[derive(Clone, Copy, ValueEnum)]
enum ViewFormat {
    Svg,
    Csv,
    Json,
}

enum Failure {
    Usage(String),
    Invalid(String),
    Consistency(String),
}

impl From<EpsError> for Failure {
    fn from(e: EpsError) -> Self {
        match e {
            EpsError::NotPlq { details } => Failure::Invalid(format!("{NOT_PLQ}\n{details}")),
            EpsError::Internal(_) => Failure::Consistency(e.to_string()),
            other => Failure::Invalid(other.to_string()),
        }
    }
}

impl From<PlqError> for Failure {
    fn from(e: PlqError) -> Self {
        Failure::from(EpsError::from(e))
    }
}

type Outcome = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Usage(m)) => {
            eprintln!("error: {m}");
            ExitCode::from(1)
        }
        Err(Failure::Invalid(m)) => {
            eprintln!("{m}");
            ExitCode::from(2)
        }
        Err(Failure::Consistency(m)) => {
            eprintln!("{m}");
            ExitCode::from(3)
        }
    }
}

fn tolerance(flag: Option<f64>) -> Result<Tolerance, Failure> {
    let t = match flag {
        Some(t) => Some(t),
        None => match std::env::var("EPSSUB_TOL") {
            Ok(v) => Some(
                v.trim()
                    .parse::<f64>()
                    .map_err(|_| Failure::Usage(format!("EPSSUB_TOL `{v}` is not a number")))?,
            ),
            Err(_) => None,
        },
    };
    match t {
        None => Ok(Tolerance::default()),
        Some(t) if t >= 0.0 && t.is_finite() => Ok(Tolerance::uniform(t)),
        Some(t) => Err(Failure::Usage(format!("tolerance must be non-negative, got {t}"))),
    }
}

fn load(path: &Path) -> Result<PlqFunction, Failure> {
    let text = std::fs::read_to_string(path)
        .map_err(|e| Failure::Usage(format!("cannot read {}: {e}", path.display())))?;
    Ok(parse_plq(&text)?)
}

fn solver(path: &Path, tol: Tolerance) -> Result<EpsSolver, Failure> {
    Ok(EpsSolver::new(load(path)?, tol)?)
}

fn emit(out: Option<&Path>, text: &str) -> Outcome {
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure::Usage(format!("cannot write {}: {e}", p.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn grid(spec: &str) -> Result<Vec<f64>, Failure> {
    parse_grid(spec).map_err(Failure::Usage)
}

fn range(spec: &str) -> Result<[f64; 2], Failure> {
    let (a, b) = spec
        .split_once(':')
        .ok_or_else(|| Failure::Usage(format!("range `{spec}` is not of the form lo:hi")))?;
    let parse = |t: &str| {
        t.trim()
            .parse::<f64>()
            .map_err(|_| Failure::Usage(format!("bad range bound `{t}`")))
    };
    Ok([parse(a)?, parse(b)?])
}

fn window(solver: &EpsSolver, queries: &[EpsQuery], args: &WindowArgs) -> Result<Window, Failure> {
    let mut w = Window::auto(solver, queries)?;
    if let Some(x) = &args.x_window {
        w.x = range(x)?;
    }
    if let Some(s) = &args.s_window {
        w.s = range(s)?;
    }
    Ok(w)
}

fn query(q: &Query, tol: Tolerance) -> Result<(EpsSolver, EpsQuery), Failure> {
    let s = solver(&q.input.plq, tol)?;
    let eq = EpsQuery::with_tol(q.xbar, q.eps, tol)?;
    Ok((s, eq))
}

fn run(cli: Cli) -> Outcome {
    let tol = tolerance(cli.tol)?;
    match cli.command {
        Command::Check(input) => {
            let f = load(&input.plq)?;
            if !f.is_convex(tol) {
                return Err(EpsError::NotConvex.into());
            }
            println!("ok: {} rows, convex, domain {}", f.len(), f.domain());
            Ok(())
        }
        Command::Eval { input, mut xs, grid: g } => {
            let f = load(&input.plq)?;
            if let Some(g) = g {
                xs.extend(grid(&g)?);
            }
            if xs.is_empty() {
                return Err(Failure::Usage("no evaluation points; pass --x or --grid".into()));
            }
            for x in xs {
                println!("{x} {}", f.value_at(x));
            }
            Ok(())
        }
        Command::Conjugate { input, output } => {
            let f = load(&input.plq)?;
            let c = epssub::transforms::conjugate_tol(&f, tol)?;
            emit(output.out.as_deref(), &plq_text(&c, output.format))
        }
        Command::Min { plq, output } => {
            if plq.len() != 2 {
                return Err(Failure::Usage(format!("min takes exactly two --plq files, got {}", plq.len())));
            }
            let f = load(&plq[0])?;
            let g = load(&plq[1])?;
            let m = plq_min(&f, &g)?;
            emit(output.out.as_deref(), &plq_text(&m, output.format))
        }
        Command::Subdiff { input, xbar } => {
            let f = load(&input.plq)?;
            if !f.is_convex(tol) {
                return Err(EpsError::NotConvex.into());
            }
            let d = subdifferential(&f, xbar).ok_or(EpsError::OutsideDomain)?;
            println!("{d}");
            Ok(())
        }
        Command::Epssub { query: q, format } => {
            let (s, eq) = query(&q, tol)?;
            let r = s.solve(&eq)?;
            match format {
                TextOrJson::Text => println!("{}", r.interval),
                TextOrJson::Json => {
                    let v = serde_json::json!({ "query": eq, "result": r });
                    println!("{v}");
                }
            }
            Ok(())
        }
        Command::SweepX { input, eps, sweep } => {
            let s = solver(&input.plq, tol)?;
            let report = sweep_x(&s, eps, &grid(&sweep.grid)?)?;
            for x in &report.skipped {
                eprintln!("skipped x = {x}: outside the domain");
            }
            emit(sweep.out.as_deref(), &graph_text(&report.graph, sweep.format))
        }
        Command::SweepEps { input, xbar, sweep } => {
            let s = solver(&input.plq, tol)?;
            let report = sweep_eps(&s, xbar, &grid(&sweep.grid)?)?;
            emit(sweep.out.as_deref(), &graph_text(&report.graph, sweep.format))
        }
        Command::BrCheck { query: q, s: slope, grid: g } => {
            let (s, eq) = query(&q, tol)?;
            let interval = s.interval(&eq)?;
            let slope = match slope {
                Some(v) => v,
                None => interval
                    .lo()
                    .finite_value()
                    .or(interval.hi().finite_value())
                    .ok_or_else(|| Failure::Usage("∂_ε f(x̄) has no finite endpoint; pass --s".into()))?,
            };
            println!("lambda,x_lambda,s_lambda");
            for lambda in grid(&g)? {
                let w = br_witness(&s, &eq, slope, lambda)?;
                println!("{},{},{}", w.lambda, w.x_lambda, w.s_lambda);
            }
            Ok(())
        }
        Command::Oracle { query: q } => {
            let (s, eq) = query(&q, tol)?;
            let algo = s.interval(&eq)?;
            let oracle = oracle_eps_interval(s.function(), &eq);
            println!("oracle    {oracle}");
            println!("algorithm {algo}");
            let agree = Tolerance::uniform(1e-6);
            if agree.close_ext(algo.lo(), oracle.lo()) && agree.close_ext(algo.hi(), oracle.hi()) {
                Ok(())
            } else {
                Err(Failure::Consistency(format!("oracle {oracle} disagrees with algorithm {algo}")))
            }
        }
        Command::Render {
            query: q,
            window: wa,
            format,
            out,
        } => {
            let (s, eq) = query(&q, tol)?;
            let w = window(&s, &[eq], &wa)?;
            let b = render_views(&s, &eq, &w)?;
            let fmt = match format {
                ViewFormat::Svg => ExportFormat::Svg,
                ViewFormat::Csv => ExportFormat::Csv,
                ViewFormat::Json => ExportFormat::Json,
            };
            emit(out.as_deref(), &export_bundle(&b, fmt))
        }
        Command::Animate {
            input,
            xbar,
            eps,
            grid: g,
            window: wa,
            out,
        } => {
            let s = solver(&input.plq, tol)?;
            let points = grid(&g)?;
            let spec = match (xbar, eps) {
                (None, Some(e)) => AnimationSpec { axis: SweepAxis::X, fixed: e, grid: points },
                (Some(x), None) => AnimationSpec { axis: SweepAxis::Eps, fixed: x, grid: points },
                _ => return Err(Failure::Usage("pass exactly one of --xbar and --eps".into())),
            };
            let queries = spec
                .grid
                .iter()
                .map(|&p| match spec.axis {
                    SweepAxis::X => EpsQuery::with_tol(p, spec.fixed, tol),
                    SweepAxis::Eps => EpsQuery::with_tol(spec.fixed, p, tol),
                })
                .collect::<Result<Vec<_>, _>>()?;
            let w = window(&s, &queries, &wa)?;
            let frames = animate(&s, &spec, Some(w))?;
            let paths = write_frames(&out, &frames)
                .map_err(|e| Failure::Usage(format!("cannot write frames to {}: {e}", out.display())))?;
            println!("wrote {} frames to {}", paths.len(), out.display());
            Ok(())
        }
    }
}

fn plq_text(f: &PlqFunction, format: TextOrJson) -> String {
    match format {
        TextOrJson::Text => serialize_plq(f),
        TextOrJson::Json => serialize_plq_json(f) + "\n",
    }
}

fn graph_text(g: &epssub::sweep::SubdiffGraph, format: CsvOrJson) -> String {
    match format {
        CsvOrJson::Csv => g.to_csv(),
        CsvOrJson::Json => g.to_json() + "\n",
    }
}
