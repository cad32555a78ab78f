//! Subcommand definitions and dispatch.

use std::io::Read;

use clap::{Args, Parser, Subcommand};
use serde_json::{json, Value};

use qball::algebra::{normal_form, parse_word, Element, GenIndex, Shape};
use qball::fock::{gram, theta_gen_block, FockBlock};
use qball::integral::{trace_y_closed, trace_y_series, IntegralParams, Integrator};
use qball::kernels::{bergman_apply, chi, commutator_check, default_trunc, k_poly, NumericElement};
use qball::scalar::real::unit_roundoff;
use qball::scalar::{QRational, Real};

use crate::acceptance;

#[derive(Debug, Parser)]
#[command(name = "qball", version, about = "Exact computations in the quantum matrix ball Pol(Mat_mn)_q")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Args, Clone, Copy)]
pub struct ShapeArgs {
    /// Number of rows.
    #[arg(long, default_value_t = 1)]
    pub m: usize,
    /// Number of columns.
    #[arg(long, default_value_t = 1)]
    pub n: usize,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Normal form of a word such as "zs[1,1] z[1,1]".
    Nf {
        #[command(flatten)]
        shape: ShapeArgs,
        word: String,
    },
    /// Matrix of a generator on the degree-k Fock component.
    Theta {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        gen: String,
        #[arg(long)]
        deg: usize,
        /// Print decimals at this value of q instead of exact entries.
        #[arg(long)]
        numeric: Option<String>,
    },
    /// Gram matrix of the scalar product on the degree-k Fock component.
    Gram {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        deg: usize,
        #[arg(long)]
        numeric: Option<String>,
    },
    /// Weighted trace of the powers of y, as a series or in closed form.
    Trace {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        q: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, conflicts_with = "closed")]
        series: bool,
        #[arg(long)]
        closed: bool,
        #[arg(long, default_value = "1e-16")]
        eps: String,
    },
    /// Invariant integral of an element read as JSON from stdin.
    Integrate {
        #[arg(long)]
        q: String,
        #[arg(long)]
        lambda: String,
        #[arg(long, default_value = "1e-16")]
        eps: String,
    },
    /// Kernel algebra computations.
    Kernel {
        #[command(subcommand)]
        op: KernelOp,
    },
    /// Bergman projection of an element read as JSON from stdin.
    Bergman {
        #[arg(long)]
        q: String,
        #[arg(long)]
        lambda: String,
        /// Kernel truncation; defaults to the z-degree of the input plus one.
        #[arg(long)]
        trunc: Option<usize>,
        #[arg(long, default_value = "1e-16")]
        eps: String,
    },
    /// Runs the acceptance suite.
    Selftest {
        /// Only the acceptance parameters, without the wider sweeps.
        #[arg(long)]
        quick: bool,
    },
}

#[derive(Debug, Subcommand)]
pub enum KernelOp {
    /// The invariant kernel chi_k.
    Chi {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trunc: Option<usize>,
    },
    /// The polynomial kernel K(u), or K_lambda for an integral lambda.
    #[command(name = "K")]
    K {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long, allow_hyphen_values = true)]
        lambda: Option<i64>,
        #[arg(long, default_value_t = 3)]
        trunc: usize,
    },
    /// Commutator of chi_j and chi_k.
    Commute {
        #[command(flatten)]
        shape: ShapeArgs,
        #[arg(long)]
        j: usize,
        #[arg(long)]
        k: usize,
        #[arg(long)]
        trunc: Option<usize>,
    },
}

/// Failure of a command, mapped to an exit status.
#[derive(Debug)]
pub enum CliError {
    Usage(String),
    Computation(qball::Error),
    AcceptanceFailed(Value),
}

impl CliError {
    pub fn exit_code(&self) -> i32 {
        match self {
            CliError::Usage(_) => 1,
            CliError::Computation(_) => 2,
            CliError::AcceptanceFailed(_) => 3,
        }
    }

    pub fn to_json(&self) -> Value {
        match self {
            CliError::Usage(msg) => json!({"error": {"kind": "usage", "message": msg}}),
            CliError::Computation(e) => json!({"error": {"kind": "computation", "message": e.to_string()}}),
            CliError::AcceptanceFailed(report) => report.clone(),
        }
    }
}

impl From<qball::Error> for CliError {
    fn from(e: qball::Error) -> Self {
        match e {
            qball::Error::Parse(_)
            | qball::Error::IndexOutOfRange(_)
            | qball::Error::InvalidParameter(_)
            | qball::Error::DimensionMismatch(..) => CliError::Usage(e.to_string()),
            other => CliError::Computation(other),
        }
    }
}

type CliResult = std::result::Result<Value, CliError>;

fn shape_of(s: ShapeArgs) -> std::result::Result<Shape, CliError> {
    if s.m > s.n {
        return Err(CliError::Usage(format!("expected m <= n, got m={} n={}", s.m, s.n)));
    }
    Ok(Shape::new(s.m, s.n)?)
}

fn real_arg(name: &str, s: &str) -> std::result::Result<Real, CliError> {
    Real::parse(s).map_err(|_| CliError::Usage(format!("--{name}: not a number: {s}")))
}

fn params(q: &str, lambda: &str, eps: &str) -> std::result::Result<IntegralParams, CliError> {
    let q0 = real_arg("q", q)?;
    if !(q0 > Real::zero() && q0 < Real::one()) {
        return Err(CliError::Usage(format!("--q must lie in (0,1), got {q}")));
    }
    Ok(IntegralParams::new(q0, real_arg("lambda", lambda)?).with_eps(real_arg("eps", eps)?))
}

fn read_element() -> std::result::Result<Element, CliError> {
    let mut buf = String::new();
    std::io::stdin().read_to_string(&mut buf).map_err(|e| CliError::Usage(format!("cannot read stdin: {e}")))?;
    let f = Element::from_json_str(&buf)?;
    shape_of(ShapeArgs { m: f.shape().m, n: f.shape().n })?;
    Ok(f)
}

fn block_json(b: &FockBlock<QRational>, numeric: Option<&str>) -> CliResult {
    let rows: Vec<Vec<String>> = match numeric {
        None => (0..b.rows).map(|i| b.row(i).iter().map(ToString::to_string).collect()).collect(),
        Some(q) => {
            let nb = b.eval(&real_arg("numeric", q)?)?;
            (0..nb.rows).map(|i| nb.row(i).iter().map(Real::to_decimal).collect()).collect()
        }
    };
    Ok(json!({"src": b.src, "tgt": b.tgt, "rows": b.rows, "cols": b.cols, "entries": rows}))
}

/// JSON for a numeric element, in the same layout as exact elements.
pub fn numeric_element_json(shape: Shape, e: &NumericElement) -> Value {
    let terms: Vec<Value> = e
        .iter()
        .map(|(mono, v)| {
            let (z, zstar) = mono.index_lists(shape);
            json!({"z": z, "zstar": zstar, "value": v.to_decimal()})
        })
        .collect();
    json!({"m": shape.m, "n": shape.n, "terms": terms})
}

/// Runs one command and returns its JSON output.
pub fn run(cli: Cli) -> CliResult {
    match cli.command {
        Command::Nf { shape, word } => {
            let s = shape_of(shape)?;
            let e = normal_form(s, &parse_word(s, &word)?)?;
            Ok(serde_json::to_value(e.to_json()).expect("plain data"))
        }
        Command::Theta { shape, gen, deg, numeric } => {
            let s = shape_of(shape)?;
            let g: GenIndex = gen.parse()?;
            block_json(&theta_gen_block(s, g, deg)?, numeric.as_deref())
        }
        Command::Gram { shape, deg, numeric } => {
            let s = shape_of(shape)?;
            block_json(&gram(s, deg), numeric.as_deref())
        }
        Command::Trace { shape, q, lambda, series, closed: _, eps } => {
            let s = shape_of(shape)?;
            let p = params(&q, &lambda, &eps)?;
            if series {
                let est = trace_y_series(s, &p.q0, &p.lambda, &p.eps, p.max_degree)?;
                Ok(json!({"value": est.value.to_decimal(), "error_bound": est.tail_bound.to_decimal(), "degree": est.degree}))
            } else {
                let v = trace_y_closed(s, &p.q0, &p.lambda)?;
                let bound = &v.abs() * &(&unit_roundoff() * &Real::from_i64(10 * s.gens() as i64));
                Ok(json!({"value": v.to_decimal(), "error_bound": bound.to_decimal()}))
            }
        }
        Command::Integrate { q, lambda, eps } => {
            let f = read_element()?;
            let p = params(&q, &lambda, &eps)?;
            let est = Integrator::new(f.shape(), p)?.integrate(&f)?;
            Ok(json!({"value": est.value.to_decimal(), "error_bound": est.tail_bound.to_decimal(), "degree": est.degree}))
        }
        Command::Kernel { op } => run_kernel(op),
        Command::Bergman { q, lambda, trunc, eps } => {
            let f = read_element()?;
            let p = params(&q, &lambda, &eps)?;
            let trunc = trunc.unwrap_or_else(|| default_trunc(&f));
            let proj = bergman_apply(&f, &p, trunc)?;
            let mut out = numeric_element_json(f.shape(), &proj.value);
            out["error_bound"] = json!(proj.error_bound.to_decimal());
            Ok(out)
        }
        Command::Selftest { quick } => {
            let reports = acceptance::run_all(!quick);
            let value = acceptance::reports_json(&reports);
            if reports.iter().all(|r| r.passed) {
                Ok(value)
            } else {
                Err(CliError::AcceptanceFailed(value))
            }
        }
    }
}

fn run_kernel(op: KernelOp) -> CliResult {
    let kernel_json = |k: &qball::kernels::KernelElement| serde_json::to_value(k.to_json()).expect("plain data");
    match op {
        KernelOp::Chi { shape, k, trunc } => {
            let s = shape_of(shape)?;
            Ok(kernel_json(&chi(s, k, trunc.unwrap_or(k))?))
        }
        KernelOp::K { shape, lambda, trunc } => {
            let s = shape_of(shape)?;
            let kp = k_poly(s, trunc)?;
            Ok(match lambda {
                None => kernel_json(&kp),
                Some(l) => kernel_json(&kp.substitute(&QRational::q_pow(2 * l))),
            })
        }
        KernelOp::Commute { shape, j, k, trunc } => {
            let s = shape_of(shape)?;
            let (zero, residual) = commutator_check(s, j, k, trunc.unwrap_or(j + k + 1))?;
            Ok(json!({"commute": zero, "residual": kernel_json(&residual)}))
        }
    }
}
