//! Command-line front end for `cmvkit`.
//!
//! Every subcommand reads its input from exactly one source (a schedule file
//! or a builtin measure), calls the corresponding library operation and
//! renders the result as JSON or CSV. Identity checks compare their residual
//! with a tolerance (`--tol` or `CMVKIT_TOL`) and report a breach with the
//! identity named.

use std::f64::consts::PI;
use std::path::PathBuf;

use anyhow::{bail, Context};
use clap::{Args, Parser, Subcommand, ValueEnum};
use nalgebra::DMatrix;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use serde_json::{json, Value};

use cmvkit::cmv::{self, BandedUnitary, Boundary, CmvVariant};
use cmvkit::coefficients::{self, Builtin, CoefficientSchedule, MeasureSpec, Moments};
use cmvkit::gz::{self, Direction, GZState, SeedFamily};
use cmvkit::io;
use cmvkit::opuc::{self, Variant};
use cmvkit::weyl::{self, WeylThresholds};
use cmvkit::{Error, C64};

/// Default tolerance of the factorization and split identities.
pub const TOL_FACTOR: f64 = 1e-13;
/// Default tolerance of the conjugation identities.
pub const TOL_CONJUGATE: f64 = 1e-12;
/// Default tolerance of the transfer-matrix equivalence check.
pub const TOL_TRANSFER: f64 = 1e-11;

/// Exit status for rejected input.
pub const EXIT_VALIDATION: i32 = 1;
/// Exit status for numerical failures and tolerance breaches.
pub const EXIT_NUMERICAL: i32 = 2;

#[derive(Debug, Parser)]
#[command(name = "cmvkit", version, about = "CMV operators, OPUC and transfer matrices")]
pub struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true, value_name = "FILE")]
    pub out: Option<PathBuf>,

    /// Tolerance for identity checks (overrides the per-command default).
    #[arg(long, global = true, env = "CMVKIT_TOL")]
    pub tol: Option<f64>,

    /// Seed for every random choice a command makes.
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Orthonormal polynomials (or their values) up to degree N.
    Opuc(OpucArgs),
    /// CMV operators.
    #[command(subcommand)]
    Cmv(CmvCommand),
    /// Transfer matrices and half-lattice seeds.
    #[command(subcommand)]
    Gz(GzCommand),
    /// Weyl solutions and the Caratheodory function.
    #[command(subcommand)]
    Weyl(WeylCommand),
    /// Moments and Verblunsky coefficients of a measure.
    #[command(subcommand)]
    Measure(MeasureCommand),
}

/// Where the coefficients come from.
#[derive(Debug, Clone, Args)]
#[group(required = true, multiple = false, id = "source")]
pub struct Source {
    /// Schedule file.
    #[arg(long, value_name = "FILE")]
    pub schedule: Option<PathBuf>,
    /// Builtin measure: lebesgue, geronimus_mu or geronimus_nu.
    #[arg(long, value_name = "NAME")]
    pub measure: Option<String>,
}

#[derive(Debug, Clone, Args)]
pub struct Input {
    #[command(flatten)]
    pub source: Source,
    /// Constant phase zeta_n = exp(i theta), e.g. `0.25pi`.
    #[arg(long, value_name = "ANGLE", allow_hyphen_values = true)]
    pub zeta_const: Option<String>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Json,
    Csv,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum VariantArg {
    Standard,
    Alternate,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
#[value(rename_all = "snake_case")]
pub enum BoundaryArg {
    HalfLatticeClosed,
    PrincipalTruncation,
    PeriodicClosed,
}

impl From<BoundaryArg> for Boundary {
    fn from(b: BoundaryArg) -> Self {
        match b {
            BoundaryArg::HalfLatticeClosed => Boundary::HalfLatticeClosed,
            BoundaryArg::PrincipalTruncation => Boundary::PrincipalTruncation,
            BoundaryArg::PeriodicClosed => Boundary::PeriodicClosed,
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum DirectionArg {
    Right,
    Left,
}

#[derive(Debug, Clone, Args)]
pub struct OpucArgs {
    #[command(flatten)]
    pub input: Input,
    /// Highest degree.
    #[arg(long)]
    pub n: usize,
    /// Rotated family.
    #[arg(long)]
    pub rotated: bool,
    /// Second-kind family.
    #[arg(long)]
    pub second_kind: bool,
    /// Evaluate at this point instead of listing coefficients.
    #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
    pub z: Option<String>,
    #[arg(long, value_enum, default_value_t = Format::Json)]
    pub format: Format,
}

/// Operator selection shared by the `cmv` subcommands.
#[derive(Debug, Clone, Args)]
pub struct OperatorArgs {
    #[command(flatten)]
    pub input: Input,
    /// Half-lattice size N (window [0, N-1]).
    #[arg(long, conflicts_with = "window")]
    pub n: Option<usize>,
    /// Extended-lattice window `LO,HI`.
    #[arg(long, value_name = "LO,HI", allow_hyphen_values = true)]
    pub window: Option<String>,
    /// Use complex rho_n.
    #[arg(long)]
    pub rotated: bool,
    #[arg(long, value_enum, default_value_t = VariantArg::Standard)]
    pub variant: VariantArg,
    #[arg(long, value_enum)]
    pub boundary: Option<BoundaryArg>,
}

#[derive(Debug, Subcommand)]
pub enum CmvCommand {
    /// Build an operator and print it as a matrix file.
    Build(OperatorArgs),
    /// Print the factors L and M and the factorization residual.
    Factorize(OperatorArgs),
    /// Check that the diagonal conjugators remove the phases.
    Conjugate(OperatorArgs),
    /// Split an extended operator at a unimodular coefficient.
    Split {
        #[command(flatten)]
        op: OperatorArgs,
        /// Split index K.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
    },
    /// Site probabilities of a walk, as CSV rows (step, index, probability).
    Evolve {
        #[command(flatten)]
        op: OperatorArgs,
        /// Number of steps.
        #[arg(long)]
        steps: usize,
        /// Start localised at this site; a random unit vector when absent.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<i64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum GzCommand {
    /// Propagate a seed and print CSV rows (n, Re f, Im f, Re g, Im g).
    Propagate {
        #[command(flatten)]
        input: Input,
        /// Seed index K.
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        /// Seed family: f+, p+, f- or p-.
        #[arg(long, default_value = "f+")]
        family: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value_t = DirectionArg::Right)]
        direction: DirectionArg,
    },
    /// Seeds at K and their neighbours at K-1 and K+1 for all four families.
    Table {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_enum, default_value_t = Format::Csv)]
        format: Format,
    },
    /// Propagate a seed and check the block equations on the interior.
    Verify {
        #[command(flatten)]
        input: Input,
        #[arg(long, allow_hyphen_values = true)]
        k: i64,
        #[arg(long, default_value = "f+")]
        family: String,
        #[arg(long)]
        steps: usize,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        z: String,
        /// Add a random perturbation of this size to one value of f.
        #[arg(long)]
        perturb: Option<f64>,
    },
}

#[derive(Debug, Subcommand)]
pub enum WeylCommand {
    /// Partial sums of |u_n|^2 for the candidate Weyl solution and a verdict.
    Classify {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        z: String,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        r: String,
        #[arg(long, default_value_t = weyl::DEFAULT_TERMS)]
        n: usize,
        #[arg(long, default_value_t = WeylThresholds::default().tail)]
        tail: f64,
        #[arg(long, default_value_t = WeylThresholds::default().ratio)]
        ratio: f64,
    },
    /// The Caratheodory function at z.
    Caratheodory {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_name = "RE,IM", allow_hyphen_values = true)]
        z: String,
    },
}

#[derive(Debug, Subcommand)]
pub enum MeasureCommand {
    /// Moments c_{-K} ..= c_K as `[re, im]` pairs.
    Moments {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        max_order: usize,
        /// Quadrature nodes (default: enough for the requested order).
        #[arg(long)]
        nodes: Option<usize>,
    },
    /// Verblunsky coefficients recovered from quadrature moments, as a schedule file.
    Verblunsky {
        #[command(flatten)]
        input: Input,
        #[arg(long)]
        count: usize,
        #[arg(long)]
        nodes: Option<usize>,
    },
}

/// Text produced by a command plus an optional breach to report after it.
#[derive(Debug)]
pub struct Outcome {
    pub text: String,
    pub breach: Option<Error>,
}

impl Outcome {
    fn ok(text: String) -> Self {
        Self { text, breach: None }
    }

    fn checked(text: String, identity: &str, residual: f64, tolerance: f64) -> Self {
        let breach = (residual.is_nan() || residual > tolerance).then(|| Error::ToleranceBreach {
            identity: identity.to_string(),
            residual,
            tolerance,
        });
        Self { text, breach }
    }
}

/// Exit status for an error returned by [`run`].
pub fn exit_code(err: &anyhow::Error) -> i32 {
    match err.downcast_ref::<Error>() {
        Some(e) if e.is_numerical() => EXIT_NUMERICAL,
        _ => EXIT_VALIDATION,
    }
}

/// Runs one command.
pub fn run(cli: &Cli) -> anyhow::Result<Outcome> {
    let tol = |default: f64| cli.tol.unwrap_or(default);
    match &cli.command {
        Command::Opuc(a) => opuc_cmd(a),
        Command::Cmv(c) => match c {
            CmvCommand::Build(op) => Ok(Outcome::ok(io::matrix_to_json(&build_operator(op)?)? + "\n")),
            CmvCommand::Factorize(op) => factorize_cmd(op, tol(TOL_FACTOR)),
            CmvCommand::Conjugate(op) => conjugate_cmd(op, tol(TOL_CONJUGATE)),
            CmvCommand::Split { op, k } => split_cmd(op, *k, tol(TOL_FACTOR)),
            CmvCommand::Evolve { op, steps, start } => evolve_cmd(op, *steps, *start, cli.seed),
        },
        Command::Gz(c) => match c {
            GzCommand::Propagate { input, k, family, steps, z, direction } => {
                let dir = match direction {
                    DirectionArg::Right => Direction::Right,
                    DirectionArg::Left => Direction::Left,
                };
                let reach = if dir == Direction::Right { k + *steps as i64 } else { *k };
                let s = load_schedule(input, reach_count(reach)?)?;
                let seed = gz::half_lattice_seeds(*k, SeedFamily::from_name(family)?, io::parse_complex_arg(z)?);
                let states = gz::propagate(&s, seed, *steps, io::parse_complex_arg(z)?, dir)?;
                Ok(Outcome::ok(states_csv(&states)?))
            }
            GzCommand::Table { input, k, z, format } => table_cmd(input, *k, z, *format),
            GzCommand::Verify { input, k, family, steps, z, perturb } => {
                verify_cmd(input, *k, family, *steps, z, *perturb, cli.seed, tol(TOL_TRANSFER))
            }
        },
        Command::Weyl(c) => match c {
            WeylCommand::Classify { input, z, r, n, tail, ratio } => {
                let s = load_schedule(input, *n)?;
                let sample = weyl::weyl_residual(
                    &s,
                    io::parse_complex_arg(z)?,
                    io::parse_complex_arg(r)?,
                    *n,
                    WeylThresholds { tail: *tail, ratio: *ratio },
                )?;
                Ok(Outcome::ok(pretty(&sample)?))
            }
            WeylCommand::Caratheodory { input, z } => {
                let z = io::parse_complex_arg(z)?;
                let f = match &input.source.measure {
                    Some(name) => weyl::caratheodory(&MeasureSpec::Builtin(Builtin::from_name(name)?), z)?,
                    None => weyl::caratheodory_from_coefficients(&load_schedule(input, 0)?, z)?,
                };
                Ok(Outcome::ok(pretty(&json!({ "z": pair(z), "f": pair(f) }))?))
            }
        },
        Command::Measure(c) => match c {
            MeasureCommand::Moments { input, max_order, nodes } => {
                let measure = load_measure(input)?;
                let nodes = nodes.unwrap_or_else(|| coefficients::default_nodes(*max_order));
                let m = coefficients::moments(&measure, *max_order, nodes)?;
                Ok(Outcome::ok(pretty(&moments_json(&m))?))
            }
            MeasureCommand::Verblunsky { input, count, nodes } => {
                let measure = load_measure(input)?;
                let alpha = match nodes {
                    Some(nodes) => {
                        let m = coefficients::moments(&measure, *count, *nodes)?;
                        coefficients::verblunsky_from_moments(&m, *count)?
                    }
                    None => coefficients::verblunsky_from_measure(&measure, *count)?,
                };
                let s = CoefficientSchedule::with_constant_phase(0, alpha, zeta_const(input)?.unwrap_or(C64::new(1.0, 0.0)))?;
                Ok(Outcome::ok(io::schedule_to_json(&s)? + "\n"))
            }
        },
    }
}

fn pair(c: C64) -> [f64; 2] {
    [c.re, c.im]
}

fn pretty<T: Serialize>(v: &T) -> anyhow::Result<String> {
    Ok(serde_json::to_string_pretty(v)? + "\n")
}

fn moments_json(m: &Moments) -> Value {
    json!(m.as_slice().iter().map(|&c| pair(c)).collect::<Vec<_>>())
}

fn zeta_const(input: &Input) -> anyhow::Result<Option<C64>> {
    input
        .zeta_const
        .as_deref()
        .map(|s| Ok(C64::from_polar(1.0, io::parse_pi_multiple(s)?)))
        .transpose()
}

fn reach_count(max_index: i64) -> anyhow::Result<usize> {
    usize::try_from(max_index + 1).map_err(|_| Error::Unsupported("builtin measures live on the half-lattice").into())
}

/// The schedule of the run; builtins provide `count` coefficients.
pub fn load_schedule(input: &Input, count: usize) -> anyhow::Result<CoefficientSchedule> {
    let zeta = zeta_const(input)?;
    match (&input.source.schedule, &input.source.measure) {
        (Some(path), None) => {
            let text = std::fs::read_to_string(path).with_context(|| format!("reading {}", path.display()))?;
            let s = io::parse_schedule_json(&text)?;
            Ok(match zeta {
                Some(z) => CoefficientSchedule::with_constant_phase(s.lo(), s.alphas().to_vec(), z)?,
                None => s,
            })
        }
        (None, Some(name)) => Ok(Builtin::from_name(name)?.schedule(count.max(1), zeta.unwrap_or(C64::new(1.0, 0.0)))?),
        _ => bail!("exactly one of --schedule and --measure is required"),
    }
}

fn load_measure(input: &Input) -> anyhow::Result<MeasureSpec> {
    match &input.source.measure {
        Some(name) => Ok(MeasureSpec::Builtin(Builtin::from_name(name)?)),
        None => Ok(MeasureSpec::CoefficientDefined(load_schedule(input, 0)?)),
    }
}

fn opuc_cmd(a: &OpucArgs) -> anyhow::Result<Outcome> {
    let s = load_schedule(&a.input, a.n)?;
    let variant = Variant::new(a.rotated, a.second_kind);
    if let Some(z) = &a.z {
        let values = opuc::values_at(&s, io::parse_complex_arg(z)?, a.n, variant)?;
        return Ok(Outcome::ok(match a.format {
            Format::Json => pretty(&values.iter().map(|&(p, q)| [pair(p), pair(q)]).collect::<Vec<_>>())?,
            Format::Csv => {
                let mut w = csv::Writer::from_writer(Vec::new());
                w.write_record(["n", "re_p", "im_p", "re_p_star", "im_p_star"])?;
                for (n, (p, q)) in values.iter().enumerate() {
                    w.serialize((n, p.re, p.im, q.re, q.im))?;
                }
                String::from_utf8(w.into_inner()?)?
            }
        }));
    }
    let seq = opuc::opuc_sequence(&s, a.n, variant)?;
    Ok(Outcome::ok(match a.format {
        Format::Json => {
            let rows: Vec<Value> = seq
                .iter()
                .enumerate()
                .map(|(n, p)| json!({ "n": n, "p": p.p, "p_star": p.p_star }))
                .collect();
            pretty(&rows)?
        }
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["n", "which", "degree", "coeffs"])?;
            for (n, p) in seq.iter().enumerate() {
                for (which, poly) in [("p", &p.p), ("p_star", &p.p_star)] {
                    let coeffs = serde_json::to_string(&poly.coeffs().iter().map(|&c| pair(c)).collect::<Vec<_>>())?;
                    w.serialize((n, which, poly.degree(), coeffs))?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
    }))
}

fn cmv_variant(op: &OperatorArgs) -> CmvVariant {
    CmvVariant { alternate: op.variant == VariantArg::Alternate, rotated: op.rotated }
}

enum Window {
    Half(usize),
    Extended(i64, i64),
}

fn window(op: &OperatorArgs) -> anyhow::Result<Window> {
    match (&op.window, op.n) {
        (Some(w), None) => {
            let (lo, hi) = w.split_once(',').context("window must be LO,HI")?;
            let (lo, hi): (i64, i64) = (lo.trim().parse()?, hi.trim().parse()?);
            if hi < lo || hi - lo >= io::MAX_WINDOW {
                bail!(Error::WindowTooSmall { lo, hi, reason: "window must be nonempty and shorter than 65536 sites" });
            }
            Ok(Window::Extended(lo, hi))
        }
        (None, Some(n)) => Ok(Window::Half(n)),
        _ => bail!("exactly one of --n and --window is required"),
    }
}

fn operator_schedule(op: &OperatorArgs) -> anyhow::Result<(CoefficientSchedule, Window)> {
    let w = window(op)?;
    let count = match w {
        Window::Half(n) => n + 1,
        Window::Extended(_, hi) => reach_count(hi + 1)?,
    };
    Ok((load_schedule(&op.input, count)?, w))
}

fn boundary(op: &OperatorArgs, default: Boundary) -> Boundary {
    op.boundary.map(Boundary::from).unwrap_or(default)
}

fn bounds(w: &Window) -> (i64, i64) {
    match *w {
        Window::Half(n) => (0, n as i64 - 1),
        Window::Extended(lo, hi) => (lo, hi),
    }
}

/// The operator selected by `op`: `build_cmv` for `--n`, `build_extended`
/// for `--window`.
pub fn build_operator(op: &OperatorArgs) -> anyhow::Result<BandedUnitary> {
    let (s, w) = operator_schedule(op)?;
    let v = cmv_variant(op);
    Ok(match w {
        Window::Half(n) => cmv::build_cmv(&s, n, v, boundary(op, Boundary::PrincipalTruncation))?,
        Window::Extended(lo, hi) => cmv::build_extended(&s, lo, hi, v, boundary(op, Boundary::HalfLatticeClosed))?,
    })
}

fn frob(a: &DMatrix<C64>, b: &DMatrix<C64>) -> f64 {
    (a - b).norm()
}

fn matrix_value(m: &BandedUnitary) -> anyhow::Result<Value> {
    Ok(serde_json::from_str(&io::matrix_to_json(m)?)?)
}

fn factorize_cmd(op: &OperatorArgs, tol: f64) -> anyhow::Result<Outcome> {
    let (s, w) = operator_schedule(op)?;
    let default = if matches!(w, Window::Half(_)) { Boundary::PrincipalTruncation } else { Boundary::HalfLatticeClosed };
    let b = boundary(op, default);
    let (lo, hi) = bounds(&w);
    let v = cmv_variant(op);
    let direct = match w {
        Window::Half(n) => cmv::build_cmv(&s, n, v, b)?,
        Window::Extended(lo, hi) => cmv::build_extended(&s, lo, hi, v, b)?,
    };
    let (l, m) = cmv::build_lm(&s, lo, hi, v.rotated, b)?;
    let product = if v.alternate { m.matrix() * l.matrix() } else { l.matrix() * m.matrix() };
    let residual = frob(direct.matrix(), &product);
    let report = json!({
        "operator": direct.kind().name(),
        "l": matrix_value(&l)?,
        "m": matrix_value(&m)?,
        "residual": residual,
        "tolerance": tol,
    });
    Ok(Outcome::checked(pretty(&report)?, "lm_factorization", residual, tol))
}

fn conjugate_cmd(op: &OperatorArgs, tol: f64) -> anyhow::Result<Outcome> {
    let (s, w) = operator_schedule(op)?;
    let (lo, hi) = bounds(&w);
    let plain = s.plain();
    let build = |sched: &CoefficientSchedule, v: CmvVariant| -> anyhow::Result<BandedUnitary> {
        Ok(match w {
            Window::Half(n) => cmv::build_cmv(sched, n, v, boundary(op, Boundary::HalfLatticeClosed))?,
            Window::Extended(lo, hi) => cmv::build_extended(sched, lo, hi, v, boundary(op, Boundary::HalfLatticeClosed))?,
        })
    };
    let d = cmv::conjugators(&s, lo, hi)?;
    let r = if matches!(w, Window::Half(_)) { d.r() } else { &d.r_tilde[..] };
    let alt = op.variant == VariantArg::Alternate;
    let rot = CmvVariant { alternate: alt, rotated: true };
    let std = CmvVariant { alternate: alt, rotated: false };
    let r_residual = frob(&cmv::conjugate(r, build(&s, rot)?.matrix())?, build(&plain, std)?.matrix());
    let c_rot = build(&s, CmvVariant::ROTATED)?;
    let c_alt_rot = build(&s, CmvVariant::ALTERNATE_ROTATED)?;
    let q_residual = frob(&cmv::conjugate(&d.q, c_alt_rot.matrix())?, &c_rot.matrix().transpose());
    let report = json!({
        "window": [lo, hi],
        "r": r.iter().map(|&c| pair(c)).collect::<Vec<_>>(),
        "q": d.q.iter().map(|&c| pair(c)).collect::<Vec<_>>(),
        "r_residual": r_residual,
        "q_transpose_residual": q_residual,
        "tolerance": tol,
    });
    let text = pretty(&report)?;
    let out = Outcome::checked(text, "phase_conjugation", r_residual, tol);
    if out.breach.is_some() {
        return Ok(out);
    }
    Ok(Outcome::checked(out.text, "q_transpose", q_residual, tol))
}

fn split_cmd(op: &OperatorArgs, k: i64, tol: f64) -> anyhow::Result<Outcome> {
    let (s, w) = operator_schedule(op)?;
    let (lo, hi) = bounds(&w);
    let v = cmv_variant(op);
    let b = boundary(op, Boundary::HalfLatticeClosed);
    let split = cmv::split_at(&s, k, lo, hi, v, b)?;
    let whole = cmv::build_extended(&s, lo, hi, v, b)?;
    let n = whole.dim();
    let cut = split.left.dim();
    let mut sum = DMatrix::<C64>::zeros(n, n);
    sum.view_mut((0, 0), (cut, cut)).copy_from(split.left.matrix());
    sum.view_mut((cut, cut), (n - cut, n - cut)).copy_from(split.right.matrix());
    let residual = frob(whole.matrix(), &sum);
    let report = json!({
        "k": k,
        "left": matrix_value(&split.left)?,
        "right": matrix_value(&split.right)?,
        "residual": residual,
        "tolerance": tol,
    });
    Ok(Outcome::checked(pretty(&report)?, "split_decoupling", residual, tol))
}

fn evolve_cmd(op: &OperatorArgs, steps: usize, start: Option<i64>, seed: u64) -> anyhow::Result<Outcome> {
    let m = build_operator(op)?;
    let (lo, hi) = m.window();
    let v0: Vec<C64> = match start {
        Some(site) => {
            if !(lo..=hi).contains(&site) {
                bail!(Error::OutOfWindow { index: site, lo, hi });
            }
            (lo..=hi).map(|j| C64::new(if j == site { 1.0 } else { 0.0 }, 0.0)).collect()
        }
        None => {
            let mut rng = ChaCha8Rng::seed_from_u64(seed);
            let raw: Vec<C64> = (0..m.dim())
                .map(|_| C64::from_polar(rng.gen_range(0.0..1.0), rng.gen_range(-PI..PI)))
                .collect();
            let norm = raw.iter().map(|c| c.norm_sqr()).sum::<f64>().sqrt();
            raw.into_iter().map(|c| c / norm).collect()
        }
    };
    let probs = cmv::evolve(&m, &v0, steps)?;
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["step", "index", "probability"])?;
    for (t, row) in probs.iter().enumerate() {
        for (j, p) in row.iter().enumerate() {
            w.serialize((t, lo + j as i64, p))?;
        }
    }
    Ok(Outcome::ok(String::from_utf8(w.into_inner()?)?))
}

fn states_csv(states: &[GZState]) -> anyhow::Result<String> {
    let mut w = csv::Writer::from_writer(Vec::new());
    w.write_record(["n", "re_f", "im_f", "re_g", "im_g"])?;
    for s in states {
        w.serialize((s.n, s.f.re, s.f.im, s.g.re, s.g.im))?;
    }
    Ok(String::from_utf8(w.into_inner()?)?)
}

fn table_cmd(input: &Input, k: i64, z: &str, format: Format) -> anyhow::Result<Outcome> {
    let s = load_schedule(input, reach_count(k + 1)?)?;
    let rows = gz::neighbor_table(&s, k, io::parse_complex_arg(z)?)?;
    Ok(Outcome::ok(match format {
        Format::Json => pretty(&rows)?,
        Format::Csv => {
            let mut w = csv::Writer::from_writer(Vec::new());
            w.write_record(["family", "n", "re_f", "im_f", "re_g", "im_g"])?;
            for row in &rows {
                for st in [row.left, row.seed, row.right] {
                    w.serialize((row.family.name(), st.n, st.f.re, st.f.im, st.g.re, st.g.im))?;
                }
            }
            String::from_utf8(w.into_inner()?)?
        }
    }))
}

#[allow(clippy::too_many_arguments)]
fn verify_cmd(
    input: &Input,
    k: i64,
    family: &str,
    steps: usize,
    z: &str,
    perturb: Option<f64>,
    seed: u64,
    tol: f64,
) -> anyhow::Result<Outcome> {
    if steps < 4 {
        bail!(Error::WindowTooSmall { lo: k, hi: k + steps as i64, reason: "at least 4 steps are needed" });
    }
    let s = load_schedule(input, reach_count(k + steps as i64)?)?;
    let z = io::parse_complex_arg(z)?;
    let states = gz::propagate(&s, gz::half_lattice_seeds(k, SeedFamily::from_name(family)?, z), steps, z, Direction::Right)?;
    let mut f: Vec<C64> = states.iter().map(|st| st.f).collect();
    let g: Vec<C64> = states.iter().map(|st| st.g).collect();
    if let Some(eps) = perturb {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let i = rng.gen_range(1..f.len() - 1);
        f[i] += C64::from_polar(eps, rng.gen_range(-PI..PI));
    }
    let (lo, hi) = (k + 1, k + steps as i64 - 2);
    let report = gz::verify_equivalence(&s, &f, &g, k, z, lo, hi)?;
    let residual = report.block().max(report.recursion) / report.scale.max(1.0);
    let text = pretty(&json!({
        "window": [lo, hi],
        "block_f": report.block_f,
        "block_g": report.block_g,
        "recursion": report.recursion,
        "scale": report.scale,
        "relative_residual": residual,
        "tolerance": tol,
        "passed": report.blocks_hold(tol) && report.recursion_holds(tol),
    }))?;
    Ok(Outcome::checked(text, "transfer_block_equivalence", residual, tol))
}
