use std::path::Path;
use std::time::Instant;

use geninv::decompose::{core_ep_decompose, full_rank_chain, full_rank_decompose, index};
use geninv::inverses::{compute, ComputeOptions, InverseKind, MethodKind};
use geninv::limits::{
    convergence_slope, limit_exact, sweep, LimitFormula, Operand, Target, Theorem,
};
use geninv::matcore::rank;
use geninv::verify::{Verifier, DEFAULT_BASE_TOL};
use geninv::{DynMatrix, Matrix, Scalar};
use serde::Serialize;
use serde_json::{json, Value};
use sha2::{Digest, Sha256};

use crate::error::{CliError, CliResult, EXIT_FAILED_CHECK};
use crate::matrix_file::{CommonDenominator, MatrixFile};
use crate::{
    Cli, Command, ComputeArgs, DecomposeArgs, DecomposeKind, IoArgs, SweepArgs, VerifyArgs, TOL_ENV,
};

/// A finished command: its JSON document and exit code.
#[derive(Debug, Clone, PartialEq)]
pub struct Outcome {
    pub document: Value,
    pub exit: u8,
}

impl Outcome {
    fn graded(document: Value, passed: bool) -> Outcome {
        Outcome {
            document,
            exit: if passed { 0 } else { EXIT_FAILED_CHECK },
        }
    }
}

struct Loaded {
    matrix: DynMatrix,
    echo: Value,
}

fn load(path: &Path) -> CliResult<Loaded> {
    let bytes = std::fs::read(path)
        .map_err(|e| CliError::new("IoError", format!("{}: {e}", path.display())))?;
    let text =
        std::str::from_utf8(&bytes).map_err(|e| CliError::new("ParseError", e.to_string()))?;
    let matrix = MatrixFile::parse(text)?.to_matrix()?;
    let (rows, cols) = matrix.shape();
    let echo = json!({
        "sha256": hex::encode(Sha256::digest(&bytes)),
        "rows": rows,
        "cols": cols,
        "mode": matrix.mode(),
    });
    Ok(Loaded { matrix, echo })
}

/// Verifier whose float tolerance base comes from `GENINV_DEFAULT_TOL` when set.
pub fn verifier() -> CliResult<Verifier> {
    match std::env::var(TOL_ENV) {
        Ok(s) => match s.trim().parse::<f64>() {
            Ok(t) if t.is_finite() && t > 0.0 => Ok(Verifier::new(t)),
            _ => Err(CliError::new(
                "InvalidTolerance",
                format!("{TOL_ENV}={s:?} is not a positive number"),
            )),
        },
        Err(_) => Ok(Verifier::new(DEFAULT_BASE_TOL)),
    }
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("report types serialize")
}

fn matrix_value<S: Scalar>(m: &Matrix<S>) -> Value
where
    Matrix<S>: Into<DynMatrix>,
{
    to_value(&MatrixFile::from_matrix(&m.clone().into()))
}

fn millis(start: Instant) -> f64 {
    start.elapsed().as_secs_f64() * 1e3
}

/// Runs a parsed command line.
pub fn run(cli: &Cli) -> CliResult<Outcome> {
    match &cli.command {
        Command::Compute(args) => cmd_compute(args),
        Command::Decompose(args) => cmd_decompose(args),
        Command::Index(io) => cmd_decompose(&DecomposeArgs {
            io: IoArgs {
                input: io.input.clone(),
                output: io.output.clone(),
            },
            kind: DecomposeKind::Index,
        }),
        Command::Verify(args) => cmd_verify(args),
        Command::Sweep(args) => cmd_sweep(args),
    }
}

/// Output destination of a command, if any.
pub fn output_path(cli: &Cli) -> Option<&Path> {
    let io = match &cli.command {
        Command::Compute(a) => &a.io,
        Command::Decompose(a) => &a.io,
        Command::Index(io) => io,
        Command::Verify(a) => &a.io,
        Command::Sweep(a) => &a.io,
    };
    io.output.as_deref()
}

/// Limit methods run in their own mode; the input is converted if needed.
fn input_for_method(a: &DynMatrix, method: MethodKind) -> CliResult<DynMatrix> {
    Ok(match (method, a) {
        (MethodKind::LimitExact, DynMatrix::Float(m)) => DynMatrix::Exact(m.to_exact()?),
        (MethodKind::LimitNumeric, DynMatrix::Exact(m)) => DynMatrix::Float(m.to_float()),
        _ => a.clone(),
    })
}

pub fn cmd_compute(args: &ComputeArgs) -> CliResult<Outcome> {
    let input = load(&args.io.input)?;
    let verifier = verifier()?;
    let a = input_for_method(&input.matrix, args.method)?;
    let opts = ComputeOptions {
        formula: args.formula,
        side: args.side,
        schedule: args.schedule.schedule(),
        power: args.m,
    };
    let start = Instant::now();
    let computed = compute(args.inverse, args.method, &a, &opts)?;
    let wall = millis(start);
    let report = verifier.check_dyn(args.inverse, &a, &computed.matrix)?;

    let mut doc = json!({
        "input": input.echo,
        "inverse": args.inverse,
        "method": args.method,
        "mode": a.mode(),
        "result": MatrixFile::from_matrix(&computed.matrix),
    });
    if let Some(f) = computed.formula {
        doc["formula"] = to_value(&f);
    }
    if let Some(m) = args.m {
        doc["power"] = json!(m);
    }
    if let DynMatrix::Exact(x) = &computed.matrix {
        doc["common_denominator"] = to_value(&CommonDenominator::of(x));
    }
    doc["verification"] = to_value(&report);
    if !computed.trace.is_empty() {
        doc["trace"] = to_value(&computed.trace);
    }
    doc["wall_time_ms"] = json!(wall);
    Ok(Outcome::graded(doc, report.passed))
}

/// Named boolean invariants attached to decomposition dumps.
struct Checks {
    tol: f64,
    items: Vec<(String, bool)>,
}

impl Checks {
    fn equal<S: Scalar>(&mut self, name: &str, lhs: &Matrix<S>, rhs: &Matrix<S>) {
        let ok = if S::is_exact() {
            lhs == rhs
        } else {
            lhs.approx_eq(rhs, self.tol)
        };
        self.items.push((name.into(), ok));
    }

    fn zero<S: Scalar>(&mut self, name: &str, m: &Matrix<S>) {
        self.equal(name, m, &Matrix::zeros(m.rows(), m.cols()));
    }

    fn flag(&mut self, name: &str, ok: bool) {
        self.items.push((name.into(), ok));
    }

    fn passed(&self) -> bool {
        self.items.iter().all(|(_, ok)| *ok)
    }

    fn value(&self) -> Value {
        Value::Array(
            self.items
                .iter()
                .map(|(id, ok)| json!({ "id": id, "passed": ok }))
                .collect(),
        )
    }
}

fn decompose_typed<S: Scalar>(
    a: &Matrix<S>,
    kind: DecomposeKind,
    tol: f64,
) -> CliResult<(Value, bool)>
where
    Matrix<S>: Into<DynMatrix>,
{
    let mut c = Checks {
        tol,
        items: Vec::new(),
    };
    let mut doc = match kind {
        DecomposeKind::Index => json!({ "index": index(a)?, "rank": rank(a) }),
        DecomposeKind::FullRank => {
            let p = full_rank_decompose(a);
            c.equal("BG = A", &p.product(), a);
            c.flag("rank B = rank A", rank(&p.b) == p.rank());
            c.flag("rank G = rank A", rank(&p.g) == p.rank());
            json!({ "rank": p.rank(), "b": matrix_value(&p.b), "g": matrix_value(&p.g) })
        }
        DecomposeKind::Chain => {
            let chain = full_rank_chain(a)?;
            let links: Vec<Value> = chain
                .pairs()
                .iter()
                .map(|p| json!({ "rank": p.rank(), "b": matrix_value(&p.b), "g": matrix_value(&p.g) }))
                .collect();
            c.equal("B1 G1 = A", &chain.pairs()[0].product(), a);
            for (i, w) in chain.pairs().windows(2).enumerate() {
                let name = format!("G{0} B{0} = B{1} G{1}", i + 1, i + 2);
                c.equal(&name, &w[0].swapped_product(), &w[1].product());
            }
            let core = chain.core_block();
            c.flag("core block invertible", rank(&core) == core.rows());
            let k = chain.index().max(1);
            c.equal(
                "head * tail = A^k",
                &(&chain.head_product() * &chain.tail_product()),
                &a.power(k)?,
            );
            json!({ "index": chain.index(), "links": links, "core_block": matrix_value(&core) })
        }
        DecomposeKind::CoreEpDecomp => {
            let d = core_ep_decompose(a)?;
            c.equal("A1 + A2 = A", &(&d.a1 + &d.a2), a);
            c.flag("ind(A1) <= 1", index(&d.a1)? <= 1);
            c.zero("A2^k = 0", &d.a2.power(d.index.max(1))?);
            c.zero("A1* A2 = 0", &(&d.a1.conj_transpose() * &d.a2));
            c.zero("A2 A1 = 0", &(&d.a2 * &d.a1));
            json!({ "index": d.index, "a1": matrix_value(&d.a1), "a2": matrix_value(&d.a2) })
        }
    };
    if kind != DecomposeKind::Index {
        doc["checks"] = c.value();
    }
    Ok((doc, c.passed()))
}

pub fn cmd_decompose(args: &DecomposeArgs) -> CliResult<Outcome> {
    let input = load(&args.io.input)?;
    let verifier = verifier()?;
    let start = Instant::now();
    let (mut doc, passed) = match &input.matrix {
        DynMatrix::Exact(a) => decompose_typed(a, args.kind, 0.0)?,
        DynMatrix::Float(a) => decompose_typed(a, args.kind, verifier.tolerance(a))?,
    };
    doc["input"] = input.echo;
    doc["mode"] = to_value(&input.matrix.mode());
    doc["wall_time_ms"] = json!(millis(start));
    Ok(Outcome::graded(doc, passed))
}

pub fn cmd_verify(args: &VerifyArgs) -> CliResult<Outcome> {
    let a = load(&args.io.input)?.matrix;
    let x = load(&args.candidate)?.matrix;
    let (a, x) = if a.mode() == x.mode() {
        (a, x)
    } else {
        (
            DynMatrix::Float(a.to_float()),
            DynMatrix::Float(x.to_float()),
        )
    };
    let report = verifier()?.check_dyn(args.inverse, &a, &x)?;
    Ok(Outcome::graded(to_value(&report), report.passed))
}

fn sweep_formula(args: &SweepArgs) -> CliResult<LimitFormula> {
    let target = match (args.formula, args.inverse) {
        (Theorem::MoorePenrose, None | Some(InverseKind::MoorePenrose)) => Target::MoorePenrose,
        (Theorem::Chain | Theorem::PowerMixed | Theorem::PowerGram, kind) => {
            match kind.unwrap_or(InverseKind::CoreEP) {
                InverseKind::CoreEP => Target::CoreEP,
                InverseKind::DualCoreEP => Target::DualCoreEP,
                InverseKind::Core => Target::Core,
                InverseKind::DualCore => Target::DualCore,
                other => {
                    return Err(CliError::new(
                        "UnsupportedCombination",
                        format!("formula {} has no {other} form", args.formula),
                    ))
                }
            }
        }
        (theorem, kind) => {
            return Err(CliError::new(
                "UnsupportedCombination",
                format!("sweep supports t31, t41, t43 and mp, got {theorem} for {kind:?}"),
            ))
        }
    };
    Ok(match args.side {
        Some(side) => LimitFormula::new(args.formula, side, target)?,
        None => LimitFormula::with_default_side(args.formula, target)?,
    })
}

pub fn cmd_sweep(args: &SweepArgs) -> CliResult<Outcome> {
    let input = load(&args.io.input)?;
    let formula = sweep_formula(args)?;
    let af = input.matrix.to_float();
    let start = Instant::now();
    let s = sweep(&formula, Operand::Single(&af), &args.schedule.schedule())?;
    let wall = millis(start);
    let reference = match &input.matrix {
        DynMatrix::Exact(a) => Some(limit_exact(&formula, Operand::Single(a))?),
        DynMatrix::Float(_) => None,
    };
    let reference_f = reference.as_ref().map(|r| r.to_float());

    let trace: Vec<Value> = s
        .trace
        .iter()
        .zip(&s.iterates)
        .map(|(step, (_, x))| {
            let mut v = to_value(step);
            if let Some(r) = &reference_f {
                v["error"] = json!(x.max_diff(r).ok());
            }
            v
        })
        .collect();
    let mut doc = json!({
        "input": input.echo,
        "formula": formula,
        "mode": "float",
        "schedule": args.schedule.schedule(),
        "converged": s.converged,
        "skipped": s.skipped,
        "trace": trace,
    });
    if let Some(x) = s.last_iterate() {
        doc["last_iterate"] = matrix_value(x);
    }
    if let Some(x) = &s.extrapolated {
        doc["extrapolated"] = matrix_value(x);
    }
    if let (Some(r), Some(rf)) = (&reference, &reference_f) {
        doc["reference"] = matrix_value(r);
        doc["slope"] = json!(convergence_slope(&s, rf));
        doc["final_error"] = json!(s.last_iterate().and_then(|x| x.max_diff(rf).ok()));
        doc["extrapolated_error"] =
            json!(s.extrapolated.as_ref().and_then(|x| x.max_diff(rf).ok()));
    }
    doc["wall_time_ms"] = json!(wall);
    Ok(Outcome::graded(doc, s.converged))
}
