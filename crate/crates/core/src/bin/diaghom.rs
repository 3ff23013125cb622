use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::json;

use diagonal_homotopy::config::{PathOptions, ToleranceConfig};
use diagonal_homotopy::diagonal::expectation;
use diagonal_homotopy::error::{Error, Result};
use diagonal_homotopy::frames::{connect_frames, frame_from_projection, gram_projection, verify_funtf};
use diagonal_homotopy::idempotent::{construct_idempotent_with_diagonal, diagonal_feasible, gamma_bound};
use diagonal_homotopy::idempotent_paths::connect_idempotents_traced;
use diagonal_homotopy::linalg::{Field, Matrix, C64};
use diagonal_homotopy::path::OperatorPath;
use diagonal_homotopy::pathio::{
    format_complex, frame_from_json, frame_to_json, matrix_from_json, matrix_to_json, parse_complex, parse_diagonal,
    path_from_json, path_to_json, validate_path, write_residual_csv,
};
use diagonal_homotopy::projection_paths::{connect_half_projections, m4_family, m4_real_extreme_path, M4Family};

/// Homotopies of projections, idempotents and frames with fixed diagonal.
#[derive(Parser)]
#[command(name = "diaghom", version)]
struct Cli {
    /// Residual tolerance.
    #[arg(long, global = true, default_value_t = 1e-8)]
    tol: f64,
    /// Entries below this modulus count as zero.
    #[arg(long, global = true, default_value_t = 1e-10)]
    zero_tol: f64,
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,
    /// Write the main output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Write the per-sample residual table here.
    #[arg(long, global = true)]
    csv: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Idempotent with a prescribed diagonal.
    ConstructIdempotent {
        /// Diagonal as CSV or JSON, inline or in a file.
        #[arg(long)]
        diag: String,
    },
    /// Path between two projections with diagonal 1/2.
    ConnectProjections {
        #[command(flatten)]
        ends: Ends,
        #[arg(long, default_value = "C")]
        field: FieldArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Path between two idempotents with the same diagonal.
    ConnectIdempotents {
        #[command(flatten)]
        ends: Ends,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Unit-norm tight frames.
    Frame {
        #[command(subcommand)]
        op: FrameOp,
    },
    /// Members of the M4 projection families.
    M4 {
        #[arg(long)]
        family: FamilyArg,
        /// Comma separated. full: t1,t2,t3,phi1,phi2,phi3[,sign];
        /// four-null: t1,t2,phi1,phi2,phi3; eight-null: phi1,phi2;
        /// extreme: e1,e2,e5,e6. Phases are in radians.
        #[arg(long, allow_hyphen_values = true)]
        params: String,
        #[arg(long, default_value_t = 0)]
        variant: usize,
        #[arg(long, default_value = "C")]
        field: FieldArg,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
    /// Check a path file.
    Validate {
        #[arg(long)]
        path: PathBuf,
        #[arg(long, default_value_t = 0.2)]
        step_bound: f64,
    },
    /// Subset-sum gap of a real diagonal.
    Gamma {
        #[arg(long)]
        diag: String,
    },
}

#[derive(Args)]
struct Ends {
    #[arg(long)]
    a: PathBuf,
    #[arg(long)]
    b: PathBuf,
}

#[derive(Subcommand)]
enum FrameOp {
    Verify {
        #[arg(long)]
        frame: PathBuf,
    },
    Gram {
        #[arg(long)]
        frame: PathBuf,
    },
    FromProjection {
        #[arg(long)]
        projection: PathBuf,
    },
    Connect {
        #[command(flatten)]
        ends: Ends,
        #[arg(long, default_value_t = 200)]
        samples: usize,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum FieldArg {
    #[value(name = "R", alias = "r")]
    R,
    #[value(name = "C", alias = "c")]
    C,
}

impl From<FieldArg> for Field {
    fn from(f: FieldArg) -> Field {
        match f {
            FieldArg::R => Field::Real,
            FieldArg::C => Field::Complex,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum FamilyArg {
    Full,
    FourNull,
    EightNull,
    Extreme,
}

fn read_text(p: &Path) -> Result<String> {
    fs::read_to_string(p).map_err(|e| Error::Io(format!("{}: {e}", p.display())))
}

/// The argument itself, or the contents of the file it names.
fn inline_or_file(s: &str) -> Result<String> {
    let p = Path::new(s);
    if p.is_file() {
        read_text(p)
    } else {
        Ok(s.to_string())
    }
}

fn read_matrix(p: &Path) -> Result<Matrix> {
    matrix_from_json(&read_text(p)?)
}

struct Ctx {
    tol: ToleranceConfig,
    seed: u64,
    out: Option<PathBuf>,
    csv: Option<PathBuf>,
}

impl Ctx {
    fn emit(&self, text: &str) -> Result<()> {
        match &self.out {
            Some(p) => fs::write(p, format!("{text}\n"))?,
            None => println!("{text}"),
        }
        Ok(())
    }

    fn opts(&self, samples: usize) -> PathOptions {
        PathOptions::default().with_samples(samples).with_tol(self.tol)
    }

    /// Validate, write the residual table if asked, then emit the path.
    fn emit_path(&self, path: &OperatorPath, step_bound: f64, seed: Option<u64>) -> Result<()> {
        let report = validate_path(path, &self.tol, step_bound);
        eprintln!(
            "pieces {} samples {} algebraic {:.3e} diagonal {:.3e} step {:.3e} {}",
            path.pieces.len(),
            report.samples_checked,
            report.max_algebraic_residual,
            report.max_diagonal_residual,
            report.max_step,
            if report.passed { "PASS" } else { "FAIL" }
        );
        if let Some(p) = &self.csv {
            write_residual_csv(&report.rows, fs::File::create(p)?)?;
        }
        self.emit(&path_to_json(path, self.tol, seed)?)
    }
}

fn params(s: &str) -> Result<Vec<f64>> {
    s.split(',')
        .map(|x| {
            let z = parse_complex(x)?;
            if z.im != 0.0 {
                return Err(Error::BadParameters(format!("parameter {x:?} must be real")));
            }
            Ok(z.re)
        })
        .collect()
}

fn phases<const N: usize>(phi: &[f64]) -> [C64; N] {
    std::array::from_fn(|i| C64::from_polar(1.0, phi[i]))
}

fn need(p: &[f64], counts: &[usize], what: &str) -> Result<()> {
    if counts.contains(&p.len()) {
        Ok(())
    } else {
        Err(Error::BadParameters(format!("{what} takes {counts:?} parameters, got {}", p.len())))
    }
}

fn run(cli: Cli) -> Result<()> {
    let tol = ToleranceConfig::default().with_residual_tol(cli.tol).with_zero_tol(cli.zero_tol);
    tol.validate()?;
    let ctx = Ctx {
        tol,
        seed: cli.seed,
        out: cli.out,
        csv: cli.csv,
    };
    match cli.command {
        Command::ConstructIdempotent { diag } => {
            let d = parse_diagonal(&inline_or_file(&diag)?)?;
            let report = diagonal_feasible(&d, &ctx.tol);
            eprintln!("feasible {} ({:?})", report.feasible, report.reason);
            let q = construct_idempotent_with_diagonal(&d, &ctx.tol)?;
            let e = expectation(&q);
            let diag: Vec<String> = e.entries().iter().map(|z| format_complex(*z)).collect();
            eprintln!("diagonal {}", diag.join(","));
            ctx.emit(&matrix_to_json(&q)?)
        }
        Command::ConnectProjections { ends, field, samples } => {
            let (p, q) = (read_matrix(&ends.a)?, read_matrix(&ends.b)?);
            let path = connect_half_projections(&p, &q, field.into(), &ctx.opts(samples))?;
            ctx.emit_path(&path, 0.15, None)
        }
        Command::ConnectIdempotents { ends, samples } => {
            let (q, r) = (read_matrix(&ends.a)?, read_matrix(&ends.b)?);
            let conn = connect_idempotents_traced(&q, &r, ctx.seed, &ctx.opts(samples))?;
            for (side, trace) in [("forward", &conn.forward), ("backward", &conn.backward)] {
                let counts: Vec<usize> = trace.steps.iter().map(|s| s.commutant_dim_before).collect();
                eprintln!("{side} reduction: {} steps, block counts {counts:?}", trace.steps.len());
            }
            ctx.emit_path(&conn.path, 0.2, Some(ctx.seed))
        }
        Command::Frame { op } => run_frame(&ctx, op),
        Command::M4 {
            family,
            params: raw,
            variant,
            field,
            samples,
        } => {
            let p = params(&raw)?;
            let fam = match family {
                FamilyArg::Extreme => {
                    need(&p, &[4], "extreme")?;
                    let path = m4_real_extreme_path([p[0], p[1], p[2], p[3]], samples)?;
                    return ctx.emit_path(&path, 0.15, None);
                }
                FamilyArg::Full => {
                    need(&p, &[6, 7], "full")?;
                    M4Family::Full {
                        t: [p[0], p[1], p[2]],
                        xi: phases(&p[3..6]),
                        upper_sign: p.get(6).copied().unwrap_or(1.0),
                    }
                }
                FamilyArg::FourNull => {
                    need(&p, &[5], "four-null")?;
                    M4Family::FourNull {
                        variant,
                        t: [p[0], p[1]],
                        xi: phases(&p[2..5]),
                    }
                }
                FamilyArg::EightNull => {
                    need(&p, &[2], "eight-null")?;
                    M4Family::EightNull { variant, xi: phases(&p) }
                }
            };
            let m = m4_family(&fam, field.into())?;
            eprintln!("projection residual {:.3e}", m.projection_residual());
            ctx.emit(&matrix_to_json(&m)?)
        }
        Command::Validate { path, step_bound } => {
            let (_, path) = path_from_json(&read_text(&path)?)?;
            let r = validate_path(&path, &ctx.tol, step_bound);
            if let Some(p) = &ctx.csv {
                write_residual_csv(&r.rows, fs::File::create(p)?)?;
            }
            let summary = json!({
                "kind": r.kind.name(),
                "samples_checked": r.samples_checked,
                "max_algebraic_residual": r.max_algebraic_residual,
                "max_diagonal_residual": r.max_diagonal_residual,
                "max_step": r.max_step,
                "passed": r.passed,
            });
            ctx.emit(&summary.to_string())?;
            if r.passed {
                Ok(())
            } else {
                Err(Error::ValidationFailed)
            }
        }
        Command::Gamma { diag } => {
            let d = parse_diagonal(&inline_or_file(&diag)?)?;
            let g = gamma_bound(&d, &ctx.tol)?;
            let summary = json!({"gamma": g.gamma, "s_has_nonintegers": g.s_has_nonintegers, "bound": g.bound});
            ctx.emit(&summary.to_string())
        }
    }
}

fn run_frame(ctx: &Ctx, op: FrameOp) -> Result<()> {
    match op {
        FrameOp::Verify { frame } => {
            let f = frame_from_json(&read_text(&frame)?)?;
            let r = verify_funtf(&f, ctx.tol.residual_tol);
            let summary = json!({
                "is_funtf": r.is_funtf,
                "tightness_residual": r.tightness_residual,
                "norm_residual": r.norm_residual,
            });
            ctx.emit(&summary.to_string())?;
            if r.is_funtf {
                Ok(())
            } else {
                Err(Error::NotTight { residual: r.max_residual() })
            }
        }
        FrameOp::Gram { frame } => {
            let f = frame_from_json(&read_text(&frame)?)?;
            ctx.emit(&matrix_to_json(&gram_projection(&f, &ctx.tol)?)?)
        }
        FrameOp::FromProjection { projection } => {
            let p = read_matrix(&projection)?;
            ctx.emit(&frame_to_json(&frame_from_projection(&p, &ctx.tol)?)?)
        }
        FrameOp::Connect { ends, samples } => {
            let f = frame_from_json(&read_text(&ends.a)?)?;
            let g = frame_from_json(&read_text(&ends.b)?)?;
            let path = connect_frames(&f, &g, &ctx.opts(samples))?;
            eprintln!(
                "samples {} tightness {:.3e} norms {:.3e}",
                path.samples.len(),
                path.max_tightness_residual,
                path.max_norm_residual
            );
            let samples: Vec<serde_json::Value> = path
                .samples
                .iter()
                .map(|(t, f)| {
                    let frame: serde_json::Value = serde_json::from_str(&frame_to_json(f)?)?;
                    Ok(json!({"t": t, "frame": frame}))
                })
                .collect::<Result<_>>()?;
            ctx.emit(&json!({ "samples": samples }).to_string())
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { 4 } else { 0 };
            let _ = e.print();
            return ExitCode::from(code);
        }
    };
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
