//! Numeric limits along a geometric `λ` schedule.
//!
//! Each resolvent solve runs in double-double arithmetic: near `λ = 10⁻⁹` the
//! shifted matrix has condition number close to `1/ε` in plain doubles, which
//! would swamp the `O(λ)` truncation error being extrapolated away.

use num_complex::Complex64;

use super::{
    build, fit_log_slope, plan, richardson, Assembled, LambdaSchedule, LimitFormula, Operand,
    Theorem, TraceStep,
};
use crate::error::{Error, Result};
use crate::matcore::{complex64_to_dd, ComplexDD, Matrix};

/// Extrapolated iterates compared before convergence can be declared.
pub const MIN_ITERATES: usize = 4;

const PERTURBATION: f64 = 1.0 + 1.0 / (1u64 << 20) as f64;

/// Full record of a sweep, converged or not.
#[derive(Debug, Clone)]
pub struct Sweep {
    /// `(λ_j, X_j)` for every step that was evaluated.
    pub iterates: Vec<(f64, Matrix<Complex64>)>,
    pub trace: Vec<TraceStep>,
    /// Richardson value from the last two iterates.
    pub extrapolated: Option<Matrix<Complex64>>,
    pub converged: bool,
    /// Nominal `λ` values dropped because the shift stayed singular.
    pub skipped: Vec<f64>,
}

impl Sweep {
    pub fn last_iterate(&self) -> Option<&Matrix<Complex64>> {
        self.iterates.last().map(|(_, x)| x)
    }
}

#[derive(Debug, Clone)]
pub struct NumericLimit {
    pub value: Matrix<Complex64>,
    pub last_iterate: Matrix<Complex64>,
    pub trace: Vec<TraceStep>,
}

fn to_dd(m: &Matrix<Complex64>) -> Matrix<ComplexDD> {
    m.map(complex64_to_dd)
}

fn dd(v: f64) -> ComplexDD {
    complex64_to_dd(&Complex64::new(v, 0.0))
}

fn assemble_dd(
    formula: &LimitFormula,
    operand: Operand<'_, Complex64>,
) -> Result<Option<Assembled<ComplexDD>>> {
    let plan = plan(formula, operand)?;
    if formula.theorem == Theorem::Chain && plan.chain.is_none() {
        return Ok(None);
    }
    let chain = plan.chain.map(|c| c.map(to_dd));
    let asm = match operand {
        Operand::Single(a) => build(formula, Operand::Single(&to_dd(a)), chain.as_ref(), plan.k)?,
        Operand::Pair { m, n } => build(
            formula,
            Operand::Pair {
                m: &to_dd(m),
                n: &to_dd(n),
            },
            None,
            plan.k,
        )?,
    };
    Ok(Some(asm))
}

fn evaluate(asm: &Assembled<ComplexDD>, lambda: f64) -> Result<Matrix<Complex64>> {
    match asm.evaluate(&dd(lambda)) {
        Ok(x) => Ok(x.to_float()),
        Err(Error::SingularMatrix) => Err(Error::ShiftSingular { lambda }),
        Err(e) => Err(e),
    }
}

fn outer_residual(x: &Matrix<Complex64>, n: &Matrix<Complex64>) -> f64 {
    (&(&(x * n) * x) - x).max_abs()
}

/// Evaluates every schedule point until the extrapolated values settle.
///
/// Convergence means `max|X*_j - X*_{j-1}| <= tol·(1 + max|X*_{j-1}|)` for
/// successive Richardson values, with at least [`MIN_ITERATES`] iterates.
pub fn sweep(
    formula: &LimitFormula,
    operand: Operand<'_, Complex64>,
    schedule: &LambdaSchedule,
) -> Result<Sweep> {
    schedule.validate()?;
    let base = operand.base();
    let Some(asm) = assemble_dd(formula, operand)? else {
        let (r, c) = operand.result_shape();
        let zero = Matrix::zeros(r, c);
        return Ok(Sweep {
            iterates: vec![(schedule.lambda0, zero.clone())],
            trace: vec![TraceStep {
                lambda: schedule.lambda0,
                delta: None,
                residual: 0.0,
                extrapolated_delta: None,
            }],
            extrapolated: Some(zero),
            converged: true,
            skipped: Vec::new(),
        });
    };

    let mut out = Sweep {
        iterates: Vec::new(),
        trace: Vec::new(),
        extrapolated: None,
        converged: false,
        skipped: Vec::new(),
    };
    for j in 0..schedule.max_steps {
        let nominal = schedule.lambda(j);
        let (lambda, x) = match evaluate(&asm, nominal) {
            Ok(x) => (nominal, x),
            Err(Error::ShiftSingular { .. }) => {
                let moved = nominal * PERTURBATION;
                match evaluate(&asm, moved) {
                    Ok(x) => (moved, x),
                    Err(Error::ShiftSingular { .. }) => {
                        out.skipped.push(nominal);
                        continue;
                    }
                    Err(e) => return Err(e),
                }
            }
            Err(e) => return Err(e),
        };
        let mut step = TraceStep {
            lambda,
            delta: None,
            residual: outer_residual(&x, base),
            extrapolated_delta: None,
        };
        if let Some((prev_lambda, prev)) = out.iterates.last() {
            step.delta = Some(x.max_diff(prev)?);
            let next = richardson(
                prev,
                &Complex64::new(*prev_lambda, 0.0),
                &x,
                &Complex64::new(lambda, 0.0),
            );
            if let Some(prev_ext) = &out.extrapolated {
                let d = next.max_diff(prev_ext)?;
                step.extrapolated_delta = Some(d);
                if out.iterates.len() + 1 >= MIN_ITERATES
                    && d <= schedule.tol * (1.0 + prev_ext.max_abs())
                {
                    out.converged = true;
                }
            }
            out.extrapolated = Some(next);
        }
        out.trace.push(step);
        out.iterates.push((lambda, x));
        if out.converged {
            break;
        }
    }
    if out.iterates.is_empty() {
        return Err(Error::ShiftSingular {
            lambda: schedule.lambda0,
        });
    }
    Ok(out)
}

/// Richardson-extrapolated limit; `NoConvergence` if the schedule runs out.
pub fn limit_numeric(
    formula: &LimitFormula,
    operand: Operand<'_, Complex64>,
    schedule: &LambdaSchedule,
) -> Result<NumericLimit> {
    let s = sweep(formula, operand, schedule)?;
    if !s.converged {
        let last_delta = s
            .trace
            .last()
            .and_then(|t| t.extrapolated_delta.or(t.delta))
            .unwrap_or(f64::NAN);
        return Err(Error::NoConvergence {
            steps: s.iterates.len(),
            last_delta,
        });
    }
    Ok(NumericLimit {
        value: s
            .extrapolated
            .clone()
            .expect("converged sweeps are extrapolated"),
        last_iterate: s
            .last_iterate()
            .cloned()
            .expect("converged sweeps have iterates"),
        trace: s.trace,
    })
}

/// Fitted log-log slope of the plain-iterate error against `λ` over the last
/// four iterates.
pub fn convergence_slope(sweep: &Sweep, reference: &Matrix<Complex64>) -> Option<f64> {
    let points: Vec<(f64, f64)> = sweep
        .iterates
        .iter()
        .filter_map(|(l, x)| x.max_diff(reference).ok().map(|e| (*l, e)))
        .collect();
    fit_log_slope(&points[points.len().saturating_sub(4)..])
}
