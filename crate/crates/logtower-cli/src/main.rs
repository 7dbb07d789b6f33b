//! Command-line front end for the exact oscillation classifier and the
//! numeric cross-validation lab.

use std::fs::File;
use std::io::{BufWriter, Write as _};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser as ClapParser, Subcommand};
use logtower::diffpoly;
use logtower::numeric::{self, Evaluator, ProbeConfig, ProbeOutcome};
use logtower::oscillation::{self, SelfAdjointOutcome, Verdict, Witness};
use logtower::seq;
use logtower::tower::TowerElem;
use logtower::NumericError;

use logtower_cli::ast::Spanned;
use logtower_cli::output::*;
use logtower_cli::{lower, parser};

#[derive(ClapParser)]
#[command(
    name = "logtower",
    version,
    about = "Exact oscillation analysis for y'' + q y = 0 over the iterated-logarithm field"
)]
struct Cli {
    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Decide whether y'' + q y = 0 oscillates and print the witness
    Classify {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
        /// Append the heuristic numeric probe (never changes the verdict)
        #[arg(long)]
        verify_numeric: bool,
    },
    /// Print the ell/gamma/lambda/omega/sigma_gamma table up to level n
    Sequences {
        #[arg(long)]
        n: usize,
        #[arg(long)]
        json: bool,
    },
    /// Rewrite a differential polynomial in iterated logarithmic derivatives
    Decompose {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        json: bool,
    },
    /// Check the Riccati relation z' + z^2 + f = 0 exactly
    Riccati {
        #[arg(long, allow_hyphen_values = true)]
        z: String,
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long)]
        json: bool,
    },
    /// Apply the depth-lowering transform k times
    Phi {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long, default_value_t = 1)]
        times: usize,
        #[arg(long)]
        json: bool,
    },
    /// Self-adjoint oscillation test for (f y')' + g y = 0
    Flw {
        #[arg(long, allow_hyphen_values = true)]
        f: String,
        #[arg(long, allow_hyphen_values = true)]
        g: String,
        #[arg(long)]
        json: bool,
    },
    /// Integrate y'' + q y = 0 and export the trajectory as CSV
    Simulate {
        #[arg(allow_hyphen_values = true)]
        expr: String,
        #[arg(long)]
        t0: Option<f64>,
        #[arg(long, default_value_t = 1e6)]
        t1: f64,
        #[arg(long, default_value_t = 1e-9)]
        rtol: f64,
        #[arg(long, default_value_t = 1e-12)]
        atol: f64,
        #[arg(long, default_value_t = 1.0)]
        y0: f64,
        #[arg(long, default_value_t = 0.0, allow_hyphen_values = true)]
        y0p: f64,
        #[arg(long)]
        csv: PathBuf,
        /// Zero-location CSV; defaults to the trajectory path with a
        /// `.zeros.csv` suffix
        #[arg(long)]
        zeros_csv: Option<PathBuf>,
        #[arg(long)]
        json: bool,
    },
}

enum AppError {
    /// Bad input: parse errors, lowering errors, violated preconditions.
    Input(String),
    /// Numeric-domain failures: depth cap, window, step-size collapse.
    Numeric(String),
}

impl From<NumericError> for AppError {
    fn from(e: NumericError) -> Self {
        AppError::Numeric(e.to_string())
    }
}

fn parse_germ(input: &str) -> Result<TowerElem, AppError> {
    let ast = parser::parse(input).map_err(|e| AppError::Input(e.render(input)))?;
    lower::lower(&ast).map_err(|e| AppError::Input(e.render(input)))
}

fn parse_poly_expr(input: &str) -> Result<Spanned, AppError> {
    parser::parse_diffpoly(input).map_err(|e| AppError::Input(e.render(input)))
}

fn witness_json(w: &Witness) -> WitnessJson {
    match w {
        Witness::UpperBound { n } => WitnessJson {
            kind: "upper",
            n: *n,
            c: None,
        },
        Witness::LowerBound { n, c } => WitnessJson {
            kind: "lower",
            n: *n,
            c: Some(c.to_string()),
        },
    }
}

fn witness_text(w: &Witness) -> String {
    match w {
        Witness::UpperBound { n } => format!("4q <= omega({}) eventually", n),
        Witness::LowerBound { n, c } => {
            format!("4q >= omega({}) + {}*gamma({})^2 eventually", n, c, n)
        }
    }
}

fn verdict_str(v: &Verdict) -> &'static str {
    if v.oscillating {
        "oscillating"
    } else {
        "nonoscillating"
    }
}

fn probe_str(outcome: ProbeOutcome) -> &'static str {
    match outcome {
        ProbeOutcome::OscillatingTrend => "oscillating_trend",
        ProbeOutcome::QuiescentTrend => "quiescent_trend",
        ProbeOutcome::Ambiguous => "ambiguous",
    }
}

fn run_probe(q: &TowerElem) -> Option<&'static str> {
    let (reduced, _) = numeric::reduce_for_numerics(q).ok()?;
    let outcome = numeric::numeric_oscillation_probe(&reduced, &ProbeConfig::default()).ok()?;
    Some(probe_str(outcome))
}

fn emit<T: serde::Serialize>(doc: &T) {
    println!("{}", serde_json::to_string(doc).expect("serializable"));
}

fn cmd_classify(expr: &str, json: bool, verify_numeric: bool) -> Result<(), AppError> {
    let q = parse_germ(expr)?;
    let verdict = oscillation::classify(&q);
    let probe = if verify_numeric {
        Some(run_probe(&q))
    } else {
        None
    };
    if json {
        emit(&VerdictJson {
            input: expr.to_string(),
            normalized: verdict.normalized_input.to_string(),
            depth: verdict.depth_used,
            verdict: verdict_str(&verdict),
            witness: witness_json(&verdict.witness),
            flw: None,
            probe,
        });
    } else {
        println!(
            "{} (witness: {})",
            verdict_str(&verdict),
            witness_text(&verdict.witness)
        );
        if let Some(p) = probe {
            println!("probe: {}", p.unwrap_or("unavailable"));
        }
    }
    Ok(())
}

fn cmd_sequences(n: usize, json: bool) -> Result<(), AppError> {
    if n > parser::MAX_LEVEL {
        return Err(AppError::Input(format!(
            "level capped at {}",
            parser::MAX_LEVEL
        )));
    }
    let rows: Vec<SequenceRowJson> = (0..=n)
        .map(|k| {
            let row = seq::table(k);
            SequenceRowJson {
                n: k,
                ell: row.ell.to_string(),
                gamma: row.gamma.to_string(),
                lambda: row.lambda.to_string(),
                omega: row.omega.to_string(),
                sigma_gamma: row.sigma_gamma.to_string(),
            }
        })
        .collect();
    if json {
        emit(&SequencesJson { n, rows });
    } else {
        println!("n | ell | gamma | lambda | omega | sigma_gamma");
        for r in rows {
            println!(
                "{} | {} | {} | {} | {} | {}",
                r.n, r.ell, r.gamma, r.lambda, r.omega, r.sigma_gamma
            );
        }
    }
    Ok(())
}

fn cmd_decompose(expr: &str, json: bool) -> Result<(), AppError> {
    let ast = parse_poly_expr(expr)?;
    let p = lower::lower_diffpoly(&ast).map_err(|e| AppError::Input(e.render(expr)))?;
    let d = diffpoly::to_log_decomposition(&p);
    let dominant = diffpoly::dominant_sign_at_large_argument(&d)
        .ok()
        .map(|dom| DominantJson {
            index: dom.index.exponents().to_vec(),
            coefficient: dom.coefficient.to_string(),
            sign: dom.sign,
            sign_negative_argument: dom.sign_negative_arg,
        });
    if json {
        emit(&DecomposeJson {
            input: expr.to_string(),
            order: p.order(),
            standard: p.to_string(),
            logarithmic: d.to_string(),
            dominant,
        });
    } else {
        println!("standard:    {}", p);
        println!("logarithmic: {}", d);
        if let Some(dom) = dominant {
            println!(
                "dominant:    index {:?}, coefficient {}, sign {:+}, sign at -y {:+}",
                dom.index, dom.coefficient, dom.sign, dom.sign_negative_argument
            );
        }
    }
    Ok(())
}

fn cmd_riccati(z_expr: &str, f_expr: &str, json: bool) -> Result<(), AppError> {
    let z = parse_germ(z_expr)?;
    let f = parse_germ(f_expr)?;
    let satisfied = seq::riccati_check(&z, &f);
    if json {
        emit(&RiccatiJson {
            z: z.to_string(),
            f: f.to_string(),
            satisfied,
        });
    } else {
        println!(
            "z' + z^2 + f {} 0 for z = {}, f = {}",
            if satisfied { "=" } else { "!=" },
            z,
            f
        );
    }
    Ok(())
}

fn cmd_phi(expr: &str, times: usize, json: bool) -> Result<(), AppError> {
    let mut f = parse_germ(expr)?;
    for _ in 0..times {
        f = oscillation::phi_down(&f).map_err(|e| AppError::Input(e.to_string()))?;
    }
    if json {
        emit(&PhiJson {
            input: expr.to_string(),
            times,
            result: f.to_string(),
        });
    } else {
        println!("{}", f);
    }
    Ok(())
}

fn cmd_flw(f_expr: &str, g_expr: &str, json: bool) -> Result<(), AppError> {
    let f = parse_germ(f_expr)?;
    let g = parse_germ(g_expr)?;
    let outcome =
        oscillation::classify_selfadjoint(&f, &g).map_err(|e| AppError::Input(e.to_string()))?;
    let flw = match outcome {
        SelfAdjointOutcome::OscillatingByFLW => "oscillating_by_flw",
        SelfAdjointOutcome::Inconclusive => "inconclusive",
    };
    // Full exact verdict of the reduced standard form y'' + (f'/f)y' + (g/f)y.
    let gg = f
        .log_derivative()
        .map_err(|e| AppError::Input(e.to_string()))?;
    let hh = g.div(&f).map_err(|e| AppError::Input(e.to_string()))?;
    let verdict = oscillation::classify_general(&gg, &hh);
    if json {
        emit(&VerdictJson {
            input: format!("f = {}; g = {}", f_expr, g_expr),
            normalized: verdict.normalized_input.to_string(),
            depth: verdict.depth_used,
            verdict: verdict_str(&verdict),
            witness: witness_json(&verdict.witness),
            flw: Some(flw),
            probe: None,
        });
    } else {
        println!(
            "{} ({}; witness: {})",
            verdict_str(&verdict),
            flw,
            witness_text(&verdict.witness)
        );
    }
    Ok(())
}

fn write_trajectory_csv(path: &Path, traj: &numeric::Trajectory) -> Result<(), AppError> {
    let file = File::create(path)
        .map_err(|e| AppError::Input(format!("cannot write {}: {}", path.display(), e)))?;
    let mut w = BufWriter::new(file);
    let io_err = |e: std::io::Error| AppError::Input(format!("write failed: {}", e));
    writeln!(w, "t,y,yp").map_err(io_err)?;
    for s in &traj.samples {
        writeln!(w, "{:.16e},{:.16e},{:.16e}", s.t, s.y, s.yp).map_err(io_err)?;
    }
    Ok(())
}

fn write_zeros_csv(path: &Path, traj: &numeric::Trajectory) -> Result<(), AppError> {
    let file = File::create(path)
        .map_err(|e| AppError::Input(format!("cannot write {}: {}", path.display(), e)))?;
    let mut w = BufWriter::new(file);
    let io_err = |e: std::io::Error| AppError::Input(format!("write failed: {}", e));
    writeln!(w, "index,t_zero").map_err(io_err)?;
    for (i, z) in traj.zeros.iter().enumerate() {
        writeln!(w, "{},{:.16e}", i, z).map_err(io_err)?;
    }
    Ok(())
}

#[allow(clippy::too_many_arguments)]
fn cmd_simulate(
    expr: &str,
    t0: Option<f64>,
    t1: f64,
    rtol: f64,
    atol: f64,
    y0: f64,
    y0p: f64,
    csv: &Path,
    zeros_csv: Option<PathBuf>,
    json: bool,
) -> Result<(), AppError> {
    let q = parse_germ(expr)?;
    let ev = Evaluator::compile(&q)?;
    let t0 = t0.unwrap_or_else(|| ev.t_min().max(10.0));
    let traj = numeric::integrate(&ev, t0, t1, y0, y0p, rtol, atol)?;
    let zeros_path = zeros_csv.unwrap_or_else(|| {
        let mut p = csv.to_path_buf();
        p.set_extension("zeros.csv");
        p
    });
    write_trajectory_csv(csv, &traj)?;
    write_zeros_csv(&zeros_path, &traj)?;
    if json {
        emit(&SimulateJson {
            input: expr.to_string(),
            t0,
            t1,
            rtol,
            atol,
            steps: traj.samples.len() - 1,
            zeros: traj.zeros.len(),
            wronskian_drift: None,
            csv: csv.display().to_string(),
            zeros_csv: zeros_path.display().to_string(),
        });
    } else {
        println!(
            "integrated [{}, {}] in {} steps, {} zeros; trajectory in {}, zeros in {}",
            t0,
            t1,
            traj.samples.len() - 1,
            traj.zeros.len(),
            csv.display(),
            zeros_path.display()
        );
    }
    Ok(())
}

fn dispatch(cli: Cli) -> Result<(), AppError> {
    match cli.cmd {
        Cmd::Classify {
            expr,
            json,
            verify_numeric,
        } => cmd_classify(&expr, json, verify_numeric),
        Cmd::Sequences { n, json } => cmd_sequences(n, json),
        Cmd::Decompose { expr, json } => cmd_decompose(&expr, json),
        Cmd::Riccati { z, f, json } => cmd_riccati(&z, &f, json),
        Cmd::Phi { expr, times, json } => cmd_phi(&expr, times, json),
        Cmd::Flw { f, g, json } => cmd_flw(&f, &g, json),
        Cmd::Simulate {
            expr,
            t0,
            t1,
            rtol,
            atol,
            y0,
            y0p,
            csv,
            zeros_csv,
            json,
        } => cmd_simulate(&expr, t0, t1, rtol, atol, y0, y0p, &csv, zeros_csv, json),
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match dispatch(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(AppError::Input(msg)) => {
            eprintln!("{}", msg);
            ExitCode::from(2)
        }
        Err(AppError::Numeric(msg)) => {
            eprintln!("error: {}", msg);
            ExitCode::from(3)
        }
    }
}
