use std::fs;
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Map, Value};
use symword::calculus::jacobian_reduced;
use symword::eval::{bmv_coefficients, decode, evaluate, hmk_sum, trace_word, Assignment};
use symword::json::{
    any_matrix_to_json, det_certificate_json, family_scan_json, float_value, jacobian_report_json,
    matrix_from_json, matrix_to_json, parse_rational, rational_matrix, rational_string,
    solve_report_json,
};
use symword::solve::{multi_start_newton, sign_sum_report, solve, Equation, Method, SolveOptions};
use symword::witness::{
    a1, b1, degenerate_example_residuals, nonuniqueness_word, scan_family, sasaas_pipeline,
    two_by_two_positivity_sample, verify_nonuniqueness_witness, FamilyTemplate,
};
use symword::word::decompose_totally_symmetric;
use symword::{AnyMatrix, Error, Matrix, Rational, Tolerances, Word};

#[derive(Parser, Debug)]
#[command(name = "symword", version, about = "Symmetric word equations in positive definite matrices")]
struct Cli {
    /// Seed for every randomized step.
    #[arg(long, env = "SYMWORD_SEED", default_value_t = 0, global = true)]
    seed: u64,
    /// Worker threads for sampling and scans (default: all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Write the JSON report here instead of standard output.
    #[arg(long, short = 'o', global = true)]
    output: Option<PathBuf>,
    #[command(flatten)]
    tol: TolArgs,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct TolArgs {
    /// Solver residual target (spectral norm).
    #[arg(long, default_value_t = 1e-8, global = true)]
    tol: f64,
    #[arg(long, default_value_t = 50, global = true)]
    max_iter: usize,
    #[arg(long, default_value_t = 1e-12, global = true)]
    sym_tol: f64,
    #[arg(long, default_value_t = 1e-10, global = true)]
    psd_tol: f64,
    #[arg(long, default_value_t = 1e-10, global = true)]
    rank_tol: f64,
    /// Distance under which two solutions count as one.
    #[arg(long, default_value_t = 1e-6, global = true)]
    dedup_tol: f64,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Structural properties of a word.
    Check {
        #[arg(long)]
        word: String,
    },
    /// Evaluate a word (and its trace) at given matrices.
    Eval {
        #[arg(long)]
        word: String,
        #[arg(long)]
        x: Option<String>,
        /// Coefficient matrices B1, B2, ... in order.
        #[arg(long = "b")]
        b: Vec<String>,
        /// Use floating point even for rational inputs.
        #[arg(long)]
        float: bool,
    },
    /// Reduced Jacobian determinant and its sign.
    Jacobian {
        #[arg(long)]
        word: String,
        #[arg(long)]
        x: String,
        #[arg(long = "b")]
        b: Vec<String>,
        #[arg(long)]
        float: bool,
        /// Include the full and reduced Jacobian matrices.
        #[arg(long)]
        matrices: bool,
    },
    /// Solve S(X, B1..Bk) = P.
    Solve {
        #[arg(long)]
        word: String,
        #[arg(long = "b")]
        b: Vec<String>,
        #[arg(long)]
        p: String,
        #[arg(long, value_enum, default_value_t = MethodArg::Auto)]
        method: MethodArg,
        /// Emit homotopy path samples.
        #[arg(long)]
        path: bool,
        /// Additionally run Newton from this many random starts and sum the
        /// Jacobian signs of the distinct solutions found.
        #[arg(long)]
        starts: Option<usize>,
    },
    /// Reproduce the fixed witnesses.
    Witness {
        #[command(subcommand)]
        which: WitnessCommand,
    },
    /// Exact Jacobian signs along word families.
    Scan {
        /// Family name (e.g. "XBX^kBX") or "all".
        #[arg(long, default_value = "all")]
        family: String,
        #[arg(long)]
        from: Option<u32>,
        #[arg(long)]
        to: Option<u32>,
        #[arg(long, default_value = "B1")]
        x: String,
        #[arg(long, default_value = "A1")]
        b: String,
    },
    /// Coefficients of Tr((A + tB)^m) and optionally the sum S_{m,k}(A, B).
    Bmv {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
        #[arg(long)]
        m: usize,
        #[arg(long)]
        k: Option<usize>,
        #[arg(long)]
        float: bool,
    },
    /// Recover a word over {A, B} from its image under the injective pair.
    Decode {
        #[arg(long)]
        m: String,
        #[arg(long, default_value_t = 64)]
        max_len: usize,
    },
}

#[derive(Subcommand, Debug)]
enum WitnessCommand {
    /// Exact reduced Jacobian determinant at the non-uniqueness witness.
    Nonuniqueness,
    /// Tr(B1 A1 B1 A1 A1 B1), exactly.
    Trace,
    /// Solve S(A1, B2) = B1 and evaluate Tr(S A S A A S).
    Sasaas {
        /// S spelled with X for A and B for B.
        #[arg(long, default_value = "B")]
        s: String,
    },
    /// Exact 2x2 Jacobian determinants at random rational points.
    Positivity {
        #[arg(long, default_value = "X B X^2 B^3 X^2 B X")]
        word: String,
        #[arg(long, default_value_t = 10_000)]
        samples: usize,
        /// Fix a/b in B = diag(a, b).
        #[arg(long)]
        ratio: Option<String>,
    },
    /// Both solution families of the degenerate example, evaluated exactly.
    Degenerate {
        #[arg(long, value_delimiter = ',', default_values_t = vec!["1".to_string(), "2".to_string(), "7".to_string()])]
        x: Vec<String>,
    },
}

#[derive(ValueEnum, Clone, Copy, Debug)]
enum MethodArg {
    Auto,
    ClosedForm,
    Newton,
    Homotopy,
}

impl From<MethodArg> for Method {
    fn from(m: MethodArg) -> Self {
        match m {
            MethodArg::Auto => Method::Auto,
            MethodArg::ClosedForm => Method::ClosedForm,
            MethodArg::Newton => Method::Newton,
            MethodArg::Homotopy => Method::Homotopy,
        }
    }
}

enum Failure {
    Usage(String, String),
    Domain(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::Syntax { .. } | Error::Json(_) | Error::MissingLetter(_) | Error::IndexOutOfRange { .. } => {
                Failure::Usage(error_kind(&e).into(), e.to_string())
            }
            e => Failure::Domain(e),
        }
    }
}

fn usage(kind: &str, msg: impl Into<String>) -> Failure {
    Failure::Usage(kind.into(), msg.into())
}

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::Syntax { .. } => "syntax",
        Error::IndexOutOfRange { .. } => "index_out_of_range",
        Error::OccurrenceOutOfRange { .. } => "occurrence_out_of_range",
        Error::Dimension(_) => "dimension",
        Error::KindMismatch { .. } => "kind_mismatch",
        Error::MissingLetter(_) => "missing_letter",
        Error::NotSymmetric => "not_symmetric",
        Error::NotPd => "not_pd",
        Error::NotPsd { .. } => "not_psd",
        Error::NotInterlaced(_) => "not_interlaced",
        Error::NotSymmetricWord(_) => "not_symmetric_word",
        Error::MissingX(_) => "missing_x",
        Error::NoConvergence(_) => "no_convergence",
        Error::NotInImage => "not_in_image",
        Error::Singular => "singular",
        Error::MaxIterations { .. } => "max_iterations",
        Error::SingularJacobian(_) => "singular_jacobian",
        Error::StepUnderflow { .. } => "step_underflow",
        Error::Divergence { .. } => "divergence",
        Error::ZeroJacobian { .. } => "zero_jacobian",
        Error::NotASolution { .. } => "not_a_solution",
        Error::Json(_) => "json",
    }
}

struct Context {
    seed: u64,
    workers: Option<usize>,
    opts: SolveOptions,
}

impl Context {
    fn config(&self) -> Value {
        let t = &self.opts.tolerances;
        json!({
            "seed": self.seed,
            "workers": self.workers,
            "tolerances": {
                "tol": float_value(self.opts.tol),
                "max_iter": self.opts.max_iter,
                "sym_tol": float_value(t.sym_tol),
                "psd_tol": float_value(t.psd_tol),
                "rank_tol": float_value(t.rank_tol),
                "dedup_tol": float_value(self.opts.dedup_tol),
            },
        })
    }
}

fn parse_word(text: &str) -> Result<Word, Failure> {
    Word::parse(text).map_err(Failure::from)
}

/// Named fixture, inline JSON, or a path to a JSON file.
fn parse_matrix_arg(arg: &str) -> Result<AnyMatrix, Failure> {
    let trimmed = arg.trim();
    let lower = trimmed.to_ascii_lowercase();
    if lower == "a1" {
        return Ok(AnyMatrix::Rational(a1()));
    }
    if lower == "b1" {
        return Ok(AnyMatrix::Rational(b1()));
    }
    if let Some(n) = lower.strip_prefix("identity") {
        let n: usize = n.parse().map_err(|_| usage("matrix", format!("bad fixture `{arg}`")))?;
        return Ok(AnyMatrix::Rational(Matrix::identity(n)));
    }
    let text = if trimmed.starts_with('[') || trimmed.starts_with('{') {
        trimmed.to_string()
    } else {
        fs::read_to_string(trimmed).map_err(|e| usage("io", format!("{arg}: {e}")))?
    };
    let v: Value = serde_json::from_str(&text).map_err(|e| usage("json", format!("{arg}: {e}")))?;
    matrix_from_json(&v).map_err(|e| match e {
        Error::Json(m) => usage("json", format!("{arg}: {m}")),
        e => Failure::Domain(e),
    })
}

fn parse_matrices(args: &[String]) -> Result<Vec<AnyMatrix>, Failure> {
    args.iter().map(|a| parse_matrix_arg(a)).collect()
}

fn all_rational(ms: &[&AnyMatrix]) -> bool {
    ms.iter().all(|m| matches!(m, AnyMatrix::Rational(_)))
}

fn rationals(ms: &[AnyMatrix]) -> Result<Vec<Matrix<Rational>>, Failure> {
    ms.iter().map(|m| rational_matrix(m).map_err(Failure::from)).collect()
}

fn floats(ms: &[AnyMatrix]) -> Vec<Matrix<f64>> {
    ms.iter().map(AnyMatrix::to_f64).collect()
}

fn with_config(mut v: Value, ctx: &Context) -> Value {
    if let Value::Object(m) = &mut v {
        m.insert("config".into(), ctx.config());
    }
    v
}

fn check(word: &str) -> Result<Value, Failure> {
    let w = parse_word(word)?;
    let plan = decompose_totally_symmetric(&w);
    let mut m = Map::new();
    m.insert("word".into(), json!(w.to_string()));
    m.insert("symmetric".into(), json!(w.is_symmetric()));
    m.insert("interlaced".into(), json!(w.is_interlaced()));
    m.insert("degree".into(), json!(w.degree()));
    m.insert("totally_symmetric".into(), json!(plan.is_some()));
    if let Some(p) = plan {
        m.insert("plan".into(), json!(p.to_string()));
    }
    Ok(Value::Object(m))
}

fn eval_cmd(word: &str, x: Option<&str>, b: &[String], float: bool) -> Result<Value, Failure> {
    let w = parse_word(word)?;
    let x = x.map(parse_matrix_arg).transpose()?;
    let b = parse_matrices(b)?;
    let mut inputs: Vec<&AnyMatrix> = b.iter().collect();
    inputs.extend(x.as_ref());
    if !float && all_rational(&inputs) {
        let mut a = Assignment::coefficients_only(rationals(&b)?);
        if let Some(x) = &x {
            a = a.with_x(rational_matrix(x)?);
        }
        let value = evaluate(&w, &a)?;
        Ok(json!({
            "word": w.to_string(),
            "value": matrix_to_json(&value),
            "trace": rational_string(&value.trace()),
        }))
    } else {
        let mut a = Assignment::coefficients_only(floats(&b));
        if let Some(x) = &x {
            a = a.with_x(x.to_f64());
        }
        let value = evaluate(&w, &a)?;
        let trace = trace_word(&w, &a)?;
        Ok(json!({
            "word": w.to_string(),
            "value": matrix_to_json(&value),
            "trace": float_value(trace),
        }))
    }
}

fn jacobian_cmd(word: &str, x: &str, b: &[String], float: bool, matrices: bool, ctx: &Context) -> Result<Value, Failure> {
    let w = parse_word(word)?;
    let x = parse_matrix_arg(x)?;
    let b = parse_matrices(b)?;
    let mut inputs: Vec<&AnyMatrix> = b.iter().collect();
    inputs.push(&x);
    let tol = &ctx.opts.tolerances;
    if !float && all_rational(&inputs) {
        let a = Assignment::new(rational_matrix(&x)?, rationals(&b)?);
        Ok(jacobian_report_json(&jacobian_reduced(&w, &a, tol)?, matrices))
    } else {
        let a = Assignment::new(x.to_f64(), floats(&b));
        Ok(jacobian_report_json(&jacobian_reduced(&w, &a, tol)?, matrices))
    }
}

struct SolveArgs<'a> {
    word: &'a str,
    b: &'a [String],
    p: &'a str,
    method: Method,
    path: bool,
    starts: Option<usize>,
}

fn solve_cmd(args: SolveArgs<'_>, ctx: &Context) -> Result<Value, Failure> {
    let w = parse_word(args.word)?;
    let b = floats(&parse_matrices(args.b)?);
    let p = parse_matrix_arg(args.p)?.to_f64();
    let eq = Equation::new(w, b, p, &ctx.opts.tolerances)?;
    let mut report = solve(&eq, args.method, &ctx.opts)?;
    if !args.path {
        report.path = None;
    }
    let mut out = solve_report_json(&report);
    if let Some(starts) = args.starts {
        let runs = multi_start_newton(&eq, starts, ctx.seed, &ctx.opts);
        let xs: Vec<Matrix<f64>> = runs.iter().map(|r| r.x.clone()).collect();
        let sum = sign_sum_report(&eq, &xs, &ctx.opts)?;
        let solutions: Vec<Value> = sum.kept.iter().map(|&i| matrix_to_json(&xs[i])).collect();
        out["multi_start"] = json!({
            "starts": starts,
            "converged": runs.len(),
            "solutions": solutions,
            "signs": sum.signs,
            "sign_sum": sum.sum,
            "incomplete": sum.incomplete,
        });
    }
    Ok(out)
}

fn witness_cmd(which: &WitnessCommand, ctx: &Context) -> Result<Value, Failure> {
    match which {
        WitnessCommand::Nonuniqueness => {
            let c = verify_nonuniqueness_witness();
            let mut v = det_certificate_json(&c);
            v["word"] = json!(nonuniqueness_word().to_string());
            v["x"] = matrix_to_json(&b1());
            v["b"] = matrix_to_json(&a1());
            Ok(v)
        }
        WitnessCommand::Trace => {
            let w = Word::parse("X B1 X B1 B1 X")?;
            let t = trace_word(&w, &Assignment::new(b1(), vec![a1()]))?;
            Ok(json!({ "expression": "Tr(B1 A1 B1 A1 A1 B1)", "trace": rational_string(&t) }))
        }
        WitnessCommand::Sasaas { s } => {
            let w = parse_word(s)?;
            let r = sasaas_pipeline(&w, &ctx.opts)?;
            Ok(json!({
                "s": w.to_string(),
                "equation": r.equation_word.to_string(),
                "solution": matrix_to_json(&r.solution),
                "solution_exact": r.solution_exact,
                "residual": float_value(r.residual),
                "trace": rational_string(&r.trace),
                "trace_float": float_value(r.trace_float),
            }))
        }
        WitnessCommand::Positivity { word, samples, ratio } => {
            let w = parse_word(word)?;
            let ratio = ratio
                .as_deref()
                .map(parse_rational)
                .transpose()
                .map_err(|e| usage("ratio", e.to_string()))?;
            let r = two_by_two_positivity_sample(&w, *samples, ctx.seed, ratio.as_ref())?;
            Ok(json!({
                "word": w.to_string(),
                "samples": r.samples,
                "all_positive": r.all_positive,
                "min_det": rational_string(&r.min_det),
                "argmin": r.argmin,
            }))
        }
        WitnessCommand::Degenerate { x } => {
            let mut rows = Vec::new();
            for xs in x {
                let xv = parse_rational(xs).map_err(|e| usage("x", e.to_string()))?;
                let [r1, r2] = degenerate_example_residuals(&xv)?;
                rows.push(json!({
                    "x": rational_string(&xv),
                    "first": matrix_to_json(&r1),
                    "second": matrix_to_json(&r2),
                    "both_zero": r1.is_zero() && r2.is_zero(),
                }));
            }
            Ok(json!({ "word": "X B1 B2 X B2 B1 X", "evaluations": rows }))
        }
    }
}

fn scan_cmd(family: &str, from: Option<u32>, to: Option<u32>, x: &str, b: &str) -> Result<Value, Failure> {
    let templates: Vec<FamilyTemplate> = if family.eq_ignore_ascii_case("all") {
        FamilyTemplate::ALL.to_vec()
    } else {
        vec![FamilyTemplate::from_name(family).ok_or_else(|| usage("family", format!("unknown family `{family}`")))?]
    };
    let x = rational_matrix(&parse_matrix_arg(x)?)?;
    let b = rational_matrix(&parse_matrix_arg(b)?)?;
    let mut out = Vec::new();
    for t in templates {
        let range = t.default_range();
        let lo = from.unwrap_or(*range.start());
        let hi = to.unwrap_or(*range.end());
        let rows = scan_family(t, lo..=hi, &x, &b)?;
        out.push(json!({ "family": t.name(), "scan": family_scan_json(&rows) }));
    }
    Ok(json!({ "x": matrix_to_json(&x), "b": matrix_to_json(&b), "families": out }))
}

fn bmv_cmd(a: &str, b: &str, m: usize, k: Option<usize>, float: bool) -> Result<Value, Failure> {
    let a = parse_matrix_arg(a)?;
    let b = parse_matrix_arg(b)?;
    if !float && all_rational(&[&a, &b]) {
        let (a, b) = (rational_matrix(&a)?, rational_matrix(&b)?);
        let coeffs: Vec<String> = bmv_coefficients(&a, &b, m)?.iter().map(rational_string).collect();
        let mut v = json!({ "m": m, "coefficients": coeffs });
        if let Some(k) = k {
            let s = hmk_sum(&a, &b, m, k)?;
            v["k"] = json!(k);
            v["sum"] = matrix_to_json(&s);
            v["trace"] = json!(rational_string(&s.trace()));
        }
        Ok(v)
    } else {
        let (a, b) = (a.to_f64(), b.to_f64());
        let coeffs: Vec<Value> = bmv_coefficients(&a, &b, m)?.into_iter().map(float_value).collect();
        let mut v = json!({ "m": m, "coefficients": coeffs });
        if let Some(k) = k {
            let s = hmk_sum(&a, &b, m, k)?;
            v["k"] = json!(k);
            v["sum"] = matrix_to_json(&s);
            v["trace"] = float_value(s.trace());
        }
        Ok(v)
    }
}

fn decode_cmd(m: &str, max_len: usize) -> Result<Value, Failure> {
    let m = parse_matrix_arg(m)?;
    let m = rational_matrix(&m)?;
    let w = decode(&m, max_len)?;
    Ok(json!({
        "word": w.to_ab_string().unwrap_or_default(),
        "length": w.len(),
        "matrix": any_matrix_to_json(&AnyMatrix::Rational(m)),
    }))
}

fn run(cli: &Cli, ctx: &Context) -> Result<Value, Failure> {
    let v = match &cli.command {
        Command::Check { word } => check(word)?,
        Command::Eval { word, x, b, float } => eval_cmd(word, x.as_deref(), b, *float)?,
        Command::Jacobian { word, x, b, float, matrices } => jacobian_cmd(word, x, b, *float, *matrices, ctx)?,
        Command::Solve { word, b, p, method, path, starts } => solve_cmd(
            SolveArgs {
                word,
                b,
                p,
                method: (*method).into(),
                path: *path,
                starts: *starts,
            },
            ctx,
        )?,
        Command::Witness { which } => witness_cmd(which, ctx)?,
        Command::Scan { family, from, to, x, b } => scan_cmd(family, *from, *to, x, b)?,
        Command::Bmv { a, b, m, k, float } => bmv_cmd(a, b, *m, *k, *float)?,
        Command::Decode { m, max_len } => decode_cmd(m, *max_len)?,
    };
    Ok(with_config(v, ctx))
}

fn emit(v: &Value, output: Option<&PathBuf>) -> bool {
    let text = serde_json::to_string_pretty(v).expect("serializable") + "\n";
    match output {
        Some(path) => match fs::write(path, &text) {
            Ok(()) => true,
            Err(e) => {
                eprintln!("cannot write {}: {e}", path.display());
                false
            }
        },
        None => {
            print!("{text}");
            true
        }
    }
}

fn error_json(kind: &str, message: &str, code: u8) -> Value {
    json!({ "error": { "kind": kind, "message": message, "exit_code": code } })
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                let _ = e.print();
                return ExitCode::SUCCESS;
            }
            let _ = e.print();
            emit(&error_json("usage", &e.render().to_string(), 2), None);
            return ExitCode::from(2);
        }
    };
    if let Some(w) = cli.workers {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(w).build_global() {
            emit(&error_json("usage", &e.to_string(), 2), None);
            return ExitCode::from(2);
        }
    }
    let tolerances = Tolerances {
        sym_tol: cli.tol.sym_tol,
        psd_tol: cli.tol.psd_tol,
        rank_tol: cli.tol.rank_tol,
        ..Tolerances::default()
    };
    let ctx = Context {
        seed: cli.seed,
        workers: cli.workers,
        opts: SolveOptions {
            tol: cli.tol.tol,
            max_iter: cli.tol.max_iter,
            dedup_tol: cli.tol.dedup_tol,
            tolerances,
            ..SolveOptions::default()
        },
    };
    let (value, code) = match run(&cli, &ctx) {
        Ok(v) => (v, 0),
        Err(Failure::Usage(kind, msg)) => (error_json(&kind, &msg, 2), 2),
        Err(Failure::Domain(e)) => (error_json(error_kind(&e), &e.to_string(), 1), 1),
    };
    let target = if code == 0 { cli.output.as_ref() } else { None };
    if !emit(&value, target) {
        return ExitCode::from(1);
    }
    ExitCode::from(code)
}
