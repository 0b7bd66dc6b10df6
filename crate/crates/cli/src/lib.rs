//! Command-line front end. [`run`] does all the work and returns the exit
//! status and output, so it can be driven from tests without a subprocess.
//!
//! Exit status: 0 on success, 1 when a checked identity fails, 2 on usage or
//! parse errors.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use gvc_core::diffop::DiffOp;
use gvc_core::expr::{
    format_diffop, format_polynomial, format_power_sum, format_weyl, parse_ast, parse_diffop,
    parse_exponents, parse_linear_factors, parse_polynomial, parse_weyl, ParseContext, VarLayout,
};
use gvc_core::lab::suite::run_all;
use gvc_core::lab::{run_experiment, ExperimentConfig, ExperimentMode, GvcReport, DEFAULT_BOUND};
use gvc_core::reduction::{
    build_extended_operator, build_extended_product, decompose_power_sums, diagonal_target,
    extension_preserves_power_action, polarize_monomial, product_target,
};
use gvc_core::{FieldSpec, Polynomial, Scalar};
use serde_json::{json, Value as Json};

pub const EXIT_OK: i32 = 0;
pub const EXIT_UNSOUND: i32 = 1;
pub const EXIT_USAGE: i32 = 2;

/// Largest power accepted by `power-apply`.
const MAX_POWER: u32 = 10_000;

#[derive(Debug, Parser)]
#[command(
    name = "gvc",
    version,
    about = "Exact differential-operator and Weyl-algebra computations"
)]
struct Cli {
    #[command(flatten)]
    global: Global,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Args)]
struct Global {
    /// q, qi or fp:<p>
    #[arg(long, global = true, default_value = "q")]
    field: FieldSpec,
    /// Number of x variables; inferred from the expressions when omitted.
    #[arg(long, global = true)]
    n: Option<usize>,
    /// Largest m tested.
    #[arg(long, global = true)]
    bound: Option<u32>,
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Also write the output (for `gvc`, the JSON report) to this file.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Λ f
    Apply {
        #[arg(long)]
        op: String,
        #[arg(long)]
        poly: String,
    },
    /// Λ^m f
    PowerApply {
        #[arg(long)]
        op: String,
        #[arg(long)]
        poly: String,
        #[arg(long, value_parser = clap::value_parser!(u32).range(0..=MAX_POWER as i64))]
        m: u32,
    },
    /// [Λ, g] f = Λ(g f) − g Λ f
    Commutator {
        #[arg(long)]
        op: String,
        #[arg(long)]
        g: String,
        #[arg(long)]
        f: String,
    },
    /// [Λ, g] as a sum of ∂^β ∘ (g_β ·) with deg g_β < deg g
    Decompose {
        #[arg(long)]
        op: String,
        #[arg(long)]
        g: String,
        /// Polynomials on which to check the decomposition.
        #[arg(long)]
        probe: Vec<String>,
    },
    /// Product a·b in the Weyl algebra
    WeylMul {
        #[arg(long)]
        a: String,
        #[arg(long)]
        b: String,
    },
    /// Normal form, x-factors left of ∂-factors
    WeylNf {
        #[arg(long)]
        expr: String,
    },
    /// Membership in the left ideal generated by ∂1, ..., ∂n
    IdealMember {
        #[arg(long)]
        expr: String,
    },
    /// x ↦ ∂, ∂ ↦ −x
    Fourier {
        #[arg(long)]
        expr: String,
    },
    /// ∂^α as a combination of powers of linear forms
    Polarize {
        /// Comma-separated exponents, e.g. 1,1
        #[arg(long)]
        monomial: String,
    },
    /// Λ* = Σ c_t (∂_{y_t} + l_t)^{d_t} and its coordinate change
    Reduce {
        #[arg(long)]
        op: String,
        /// Checks (Λ*)^m h = Λ^m h for m up to the bound.
        #[arg(long)]
        poly: Option<String>,
    },
    /// Λ* = (∂_{y_1} + l_1)⋯(∂_{y_N} + l_N) for a product of linear forms
    ReduceProduct {
        #[arg(long)]
        op: String,
        #[arg(long)]
        poly: Option<String>,
    },
    /// Runs an experiment from --config or from inline flags
    Gvc {
        #[arg(long, conflicts_with_all = ["mode", "op", "f", "g", "d"])]
        config: Option<PathBuf>,
        #[arg(long, value_parser = parse_mode)]
        mode: Option<ExperimentMode>,
        #[arg(long)]
        op: Option<String>,
        #[arg(long)]
        f: Option<String>,
        #[arg(long)]
        g: Option<String>,
        #[arg(long)]
        d: Option<u32>,
    },
    /// Runs every randomised verification battery
    VerifySuite,
}

fn parse_mode(text: &str) -> Result<ExperimentMode, String> {
    serde_json::from_value(Json::String(text.to_string())).map_err(|_| {
        "expected one of hypothesis, stabilize, corollary1, theorem1, theorem3-family, charp, weyl-compare"
            .to_string()
    })
}

/// Exit status and captured output of one invocation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Outcome {
    pub code: i32,
    pub stdout: String,
    pub stderr: String,
}

struct Response {
    text: String,
    json: Json,
    sound: bool,
}

impl Response {
    fn ok(text: String, json: Json) -> Self {
        Response {
            text,
            json,
            sound: true,
        }
    }
}

/// Runs the command line `args` (including the program name).
pub fn run<I, T>(args: I) -> Outcome
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() { EXIT_USAGE } else { EXIT_OK };
            let rendered = e.render().to_string();
            let (stdout, stderr) = if code == EXIT_OK {
                (rendered, String::new())
            } else {
                (String::new(), rendered)
            };
            return Outcome {
                code,
                stdout,
                stderr,
            };
        }
    };
    let format = cli.global.format;
    let out = cli.global.out.clone();
    let writes_report = matches!(cli.command, Command::Gvc { .. });
    match dispatch(&cli) {
        Ok(response) => {
            let stdout = match format {
                Format::Text => response.text,
                Format::Json => serde_json::to_string_pretty(&response.json).expect("json") + "\n",
            };
            if let (Some(path), false) = (&out, writes_report) {
                if let Err(e) = std::fs::write(path, &stdout) {
                    return usage(format!("cannot write {}: {e}", path.display()));
                }
            }
            Outcome {
                code: if response.sound {
                    EXIT_OK
                } else {
                    EXIT_UNSOUND
                },
                stdout,
                stderr: String::new(),
            }
        }
        Err(message) => usage(message),
    }
}

fn usage(message: String) -> Outcome {
    Outcome {
        code: EXIT_USAGE,
        stdout: String::new(),
        stderr: format!("error: {message}\n"),
    }
}

type CliResult<T> = Result<T, String>;

struct Env<'a> {
    global: &'a Global,
    ctx: ParseContext,
}

impl Env<'_> {
    fn layout(&self) -> VarLayout {
        VarLayout::plain()
    }

    fn poly(&self, flag: &str, text: &str) -> CliResult<Polynomial> {
        parse_polynomial(text, &self.ctx).map_err(|e| format!("--{flag}: {e}"))
    }

    fn op(&self, flag: &str, text: &str) -> CliResult<DiffOp> {
        parse_diffop(text, &self.ctx).map_err(|e| format!("--{flag}: {e}"))
    }

    fn weyl(&self, flag: &str, text: &str) -> CliResult<gvc_core::WeylElement> {
        parse_weyl(text, &self.ctx).map_err(|e| format!("--{flag}: {e}"))
    }

    fn bound(&self) -> u32 {
        self.global.bound.unwrap_or(DEFAULT_BOUND)
    }
}

/// `--n` if given, else the largest variable index in `texts` (at least 1).
fn infer_n(global: &Global, texts: &[(&str, &str)]) -> CliResult<usize> {
    if let Some(n) = global.n {
        if n == 0 {
            return Err("--n must be at least 1".into());
        }
        return Ok(n);
    }
    let mut n = 1;
    for (flag, text) in texts {
        let ast = parse_ast(text).map_err(|e| format!("--{flag}: {e}"))?;
        n = n.max(ast.max_indices().0);
    }
    Ok(n)
}

fn dispatch(cli: &Cli) -> CliResult<Response> {
    let g = &cli.global;
    let texts: Vec<(&str, &str)> = match &cli.command {
        Command::Apply { op, poly } | Command::PowerApply { op, poly, .. } => {
            vec![("op", op), ("poly", poly)]
        }
        Command::Commutator { op, g, f } => vec![("op", op), ("g", g), ("f", f)],
        Command::Decompose { op, g, probe } => {
            let mut t = vec![("op", op.as_str()), ("g", g.as_str())];
            t.extend(probe.iter().map(|p| ("probe", p.as_str())));
            t
        }
        Command::WeylMul { a, b } => vec![("a", a), ("b", b)],
        Command::WeylNf { expr } | Command::IdealMember { expr } | Command::Fourier { expr } => {
            vec![("expr", expr)]
        }
        Command::Reduce { op, poly } | Command::ReduceProduct { op, poly } => {
            let mut t = vec![("op", op.as_str())];
            t.extend(poly.iter().map(|p| ("poly", p.as_str())));
            t
        }
        Command::Polarize { .. } | Command::Gvc { .. } | Command::VerifySuite => Vec::new(),
    };
    let n = infer_n(g, &texts)?;
    let env = Env {
        global: g,
        ctx: ParseContext::new(g.field, n),
    };
    let layout = env.layout();
    let value = |text: String| Response::ok(format!("{text}\n"), json!({ "result": text }));

    match &cli.command {
        Command::Apply { op, poly } => {
            let r = env
                .op("op", op)?
                .apply(&env.poly("poly", poly)?)
                .map_err(|e| e.to_string())?;
            Ok(value(format_polynomial(&r, &layout)))
        }
        Command::PowerApply { op, poly, m } => {
            let r = env
                .op("op", op)?
                .apply_power(*m, &env.poly("poly", poly)?)
                .map_err(|e| e.to_string())?;
            Ok(value(format_polynomial(&r, &layout)))
        }
        Command::Commutator { op, g, f } => {
            let r = env
                .op("op", op)?
                .commutator_action(&env.poly("g", g)?, &env.poly("f", f)?)
                .map_err(|e| e.to_string())?;
            Ok(value(format_polynomial(&r, &layout)))
        }
        Command::Decompose { op, g, probe } => decompose(&env, op, g, probe),
        Command::WeylMul { a, b } => {
            let r = &env.weyl("a", a)? * &env.weyl("b", b)?;
            Ok(value(format_weyl(&r, &layout)))
        }
        Command::WeylNf { expr } => Ok(value(format_weyl(&env.weyl("expr", expr)?, &layout))),
        Command::Fourier { expr } => {
            let r = env.weyl("expr", expr)?.fourier_automorphism();
            Ok(value(format_weyl(&r, &layout)))
        }
        Command::IdealMember { expr } => {
            let e = env.weyl("expr", expr)?;
            let member = e.in_left_ideal_partials();
            let on_one = e
                .act(&Polynomial::one(n, g.field))
                .map_err(|e| e.to_string())?;
            let mut r = Response::ok(
                format!("{member}\n"),
                json!({ "member": member, "action_on_1": format_polynomial(&on_one, &layout) }),
            );
            r.sound = member == on_one.is_zero();
            Ok(r)
        }
        Command::Polarize { monomial } => polarize(g, monomial),
        Command::Reduce { op, poly } => reduce(&env, op, poly.as_deref()),
        Command::ReduceProduct { op, poly } => reduce_product(&env, op, poly.as_deref()),
        Command::Gvc {
            config,
            mode,
            op,
            f,
            g: gg,
            d,
        } => gvc(g, config.as_ref(), *mode, op, f, gg, *d),
        Command::VerifySuite => {
            let results = run_all(g.seed.unwrap_or(0));
            let mut text = String::new();
            for r in &results {
                let status = if r.passed() { "PASS" } else { "FAIL" };
                let _ = writeln!(text, "{status} {} ({} checked)", r.name, r.checked);
                for f in r.failures.iter().take(5) {
                    let _ = writeln!(text, "  {f}");
                }
            }
            Ok(Response {
                text,
                json: serde_json::to_value(&results).expect("json"),
                sound: results.iter().all(|r| r.passed()),
            })
        }
    }
}

fn decompose(env: &Env, op: &str, g: &str, probes: &[String]) -> CliResult<Response> {
    let layout = env.layout();
    let op = env.op("op", op)?;
    let g = env.poly("g", g)?;
    let dec = op.commutator_decompose(&g).map_err(|e| e.to_string())?;
    let mut text = format!("degree bound: {}\n", dec.degree_bound);
    let mut pairs = Vec::new();
    for (d, h) in &dec.pairs {
        let (d, h) = (format_diffop(d, &layout), format_polynomial(h, &layout));
        let _ = writeln!(text, "{d} ∘ ({h})");
        pairs.push(json!({ "operator": d, "coefficient": h }));
    }
    let mut sound = dec.respects_degree_bound();
    let mut checks = Vec::new();
    for p in probes {
        let f = env.poly("probe", p)?;
        let agrees = dec.apply_to(&f).map_err(|e| e.to_string())?
            == op.commutator_action(&g, &f).map_err(|e| e.to_string())?;
        sound &= agrees;
        let _ = writeln!(
            text,
            "probe {}: {}",
            format_polynomial(&f, &layout),
            if agrees { "agrees" } else { "DISAGREES" }
        );
        checks.push(json!({ "f": format_polynomial(&f, &layout), "agrees": agrees }));
    }
    Ok(Response {
        text,
        json: json!({ "degree_bound": dec.degree_bound, "pairs": pairs, "probes": checks }),
        sound,
    })
}

fn polarize(g: &Global, monomial: &str) -> CliResult<Response> {
    let alpha = parse_exponents(monomial).map_err(|e| format!("--monomial: {e}"))?;
    let alpha = match g.n {
        Some(n) if n < alpha.len() => {
            return Err(format!(
                "--monomial has {} entries but --n is {n}",
                alpha.len()
            ))
        }
        Some(n) => alpha.padded(n),
        None => alpha,
    };
    let psd = polarize_monomial(&alpha, g.field).map_err(|e| e.to_string())?;
    let layout = VarLayout::plain();
    let target = DiffOp::monomial(alpha.clone(), Scalar::one(g.field));
    let lhs = format_diffop(&target, &layout);
    let rhs = format_power_sum(&psd, &layout);
    Ok(Response {
        text: format!("{lhs} = {rhs}\n"),
        json: json!({
            "monomial": alpha.as_slice(),
            "operator": lhs,
            "power_sum": rhs,
            "summands": psd.len(),
        }),
        sound: psd.reconstruct() == target,
    })
}

fn reduce(env: &Env, op: &str, poly: Option<&str>) -> CliResult<Response> {
    let op = env.op("op", op)?;
    let psd = decompose_power_sums(&op).map_err(|e| e.to_string())?;
    if psd.is_empty() {
        return Err("the zero operator has no reduction".into());
    }
    let (extended, ring) = build_extended_operator(&psd).map_err(|e| e.to_string())?;
    let transformed = ring.diffop_to_new(&extended).map_err(|e| e.to_string())?;
    let target = diagonal_target(&psd, &ring).map_err(|e| e.to_string())?;
    let mut sound = psd.reconstruct() == op && transformed == target;
    let ext = VarLayout::extended(ring.n);
    let mut text = String::new();
    let _ = writeln!(text, "N = {}", ring.big_n);
    let _ = writeln!(text, "power sum: {}", format_power_sum(&psd, &env.layout()));
    let _ = writeln!(text, "extended: {}", format_diffop(&extended, &ext));
    let _ = writeln!(
        text,
        "new coordinates: {}",
        format_diffop(&transformed, &ext)
    );
    let _ = writeln!(
        text,
        "coordinate change {}",
        if transformed == target {
            "agrees"
        } else {
            "DISAGREES"
        }
    );
    let mut json = json!({
        "N": ring.big_n,
        "power_sum": format_power_sum(&psd, &env.layout()),
        "extended": format_diffop(&extended, &ext),
        "new_coordinates": format_diffop(&transformed, &ext),
        "target": format_diffop(&target, &ext),
    });
    if let Some(p) = poly {
        let ok = transport(env, &op, &extended, p, &mut text)?;
        json["transport_holds"] = json!(ok);
        sound &= ok;
    }
    Ok(Response { text, json, sound })
}

fn reduce_product(env: &Env, op: &str, poly: Option<&str>) -> CliResult<Response> {
    let forms = parse_linear_factors(op, &env.ctx).map_err(|e| format!("--op: {e}"))?;
    let (extended, ring) = build_extended_product(&forms).map_err(|e| e.to_string())?;
    let transformed = ring.diffop_to_new(&extended).map_err(|e| e.to_string())?;
    let target = product_target(&ring).map_err(|e| e.to_string())?;
    let mut sound = transformed == target;
    let ext = VarLayout::extended(ring.n);
    let mut text = String::new();
    let _ = writeln!(text, "N = {}", ring.big_n);
    let _ = writeln!(text, "extended: {}", format_diffop(&extended, &ext));
    let _ = writeln!(
        text,
        "new coordinates: {}",
        format_diffop(&transformed, &ext)
    );
    let _ = writeln!(
        text,
        "coordinate change {}",
        if sound { "agrees" } else { "DISAGREES" }
    );
    let mut json = json!({
        "N": ring.big_n,
        "extended": format_diffop(&extended, &ext),
        "new_coordinates": format_diffop(&transformed, &ext),
        "target": format_diffop(&target, &ext),
    });
    if let Some(p) = poly {
        let product = forms
            .iter()
            .fold(DiffOp::identity(ring.n, ring.field()), |acc, l| {
                &acc * &l.to_diffop()
            });
        let ok = transport(env, &product, &extended, p, &mut text)?;
        json["transport_holds"] = json!(ok);
        sound &= ok;
    }
    Ok(Response { text, json, sound })
}

fn transport(
    env: &Env,
    op: &DiffOp,
    extended: &DiffOp,
    poly: &str,
    text: &mut String,
) -> CliResult<bool> {
    let h = env.poly("poly", poly)?;
    let mut all = true;
    for m in 1..=env.bound() {
        let ok =
            extension_preserves_power_action(op, extended, m, &h).map_err(|e| e.to_string())?;
        all &= ok;
        if !ok {
            let _ = writeln!(text, "transport fails at m = {m}");
        }
    }
    let _ = writeln!(
        text,
        "transport for m ≤ {}: {}",
        env.bound(),
        if all { "holds" } else { "FAILS" }
    );
    Ok(all)
}

fn gvc(
    g: &Global,
    config: Option<&PathBuf>,
    mode: Option<ExperimentMode>,
    op: &Option<String>,
    f: &Option<String>,
    gg: &Option<String>,
    d: Option<u32>,
) -> CliResult<Response> {
    let mut cfg = match config {
        Some(path) => {
            let text = std::fs::read_to_string(path)
                .map_err(|e| format!("cannot read {}: {e}", path.display()))?;
            ExperimentConfig::from_json(&text).map_err(|e| e.to_string())?
        }
        None => {
            let operator = op.clone().ok_or("gvc needs --config or --op")?;
            let mut texts = vec![("op", operator.as_str())];
            texts.extend(f.iter().map(|t| ("f", t.as_str())));
            texts.extend(gg.iter().map(|t| ("g", t.as_str())));
            ExperimentConfig {
                field: g.field,
                n: infer_n(g, &texts)?,
                operator,
                f: f.clone(),
                g: gg.clone(),
                d,
                bound: DEFAULT_BOUND,
                seed: 0,
                mode: mode.unwrap_or(ExperimentMode::Stabilize),
            }
        }
    };
    if let Some(bound) = g.bound {
        cfg.bound = bound;
    }
    if let Some(seed) = g.seed {
        cfg.seed = seed;
    }
    let report = run_experiment(&cfg, g.out.as_deref()).map_err(|e| e.to_string())?;
    Ok(Response {
        text: report_text(&report),
        json: serde_json::to_value(&report).expect("json"),
        sound: report.violations.is_empty(),
    })
}

fn report_text(r: &GvcReport) -> String {
    let show = |b: Option<bool>| b.map_or("-".to_string(), |b| b.to_string());
    let mut text = String::new();
    if let Some(c) = &r.config {
        let _ = writeln!(
            text,
            "mode {}, field {}, n = {}, M = {}",
            serde_json::to_value(c.mode)
                .expect("json")
                .as_str()
                .unwrap_or("?"),
            r.field,
            c.n,
            c.bound
        );
    }
    let _ = writeln!(text, "{:>4}  {:<10}  conclusion", "m", "hypothesis");
    for e in &r.per_m {
        let _ = writeln!(
            text,
            "{:>4}  {:<10}  {}",
            e.m,
            show(e.hypothesis),
            show(e.conclusion)
        );
    }
    let index = r
        .stabilization_index
        .map_or("none".to_string(), |m| m.to_string());
    let _ = writeln!(text, "stabilization_index: {index}");
    for note in &r.notes {
        let _ = writeln!(text, "note: {note}");
    }
    text
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_args(args: &[&str]) -> Outcome {
        run(std::iter::once("gvc").chain(args.iter().copied()))
    }

    #[test]
    fn apply_example() {
        let o = run_args(&["apply", "--n", "1", "--op", "dx1", "--poly", "x1^2"]);
        assert_eq!((o.code, o.stdout.as_str()), (0, "2*x1\n"));
    }

    #[test]
    fn polarize_example() {
        let o = run_args(&["polarize", "--n", "2", "--monomial", "1,1"]);
        assert_eq!(o.code, 0);
        assert_eq!(
            o.stdout,
            "dx1*dx2 = -1/2*dx1^2 - 1/2*dx2^2 + 1/2*(dx1 + dx2)^2\n"
        );
    }

    #[test]
    fn gvc_example() {
        let o = run_args(&[
            "gvc", "--field", "q", "--n", "2", "--op", "dx1*dx2", "--f", "x1", "--g", "x2^3",
            "--bound", "8", "--format", "json",
        ]);
        assert_eq!(o.code, 0, "{}", o.stderr);
        let v: Json = serde_json::from_str(&o.stdout).unwrap();
        assert_eq!(v["stabilization_index"], 4);
        assert_eq!(v["per_m"][2]["conclusion"], false);
    }

    #[test]
    fn usage_errors_exit_2() {
        assert_eq!(run_args(&["apply", "--op", "dx1"]).code, 2);
        assert_eq!(
            run_args(&["apply", "--op", "dx1 +", "--poly", "x1"]).code,
            2
        );
        assert_eq!(
            run_args(&["apply", "--field", "fp:4", "--op", "dx1", "--poly", "x1"]).code,
            2
        );
        assert_eq!(run_args(&["nope"]).code, 2);
        assert_eq!(
            run_args(&["apply", "--n", "1", "--op", "dx2", "--poly", "x1"]).code,
            2
        );
        assert_eq!(run_args(&["--help"]).code, 0);
    }

    #[test]
    fn weyl_commands() {
        let o = run_args(&["weyl-nf", "--expr", "dx1*x1"]);
        assert_eq!(o.stdout, "x1*dx1 + 1\n");
        let o = run_args(&["weyl-mul", "--a", "dx1", "--b", "x1"]);
        assert_eq!(o.stdout, "x1*dx1 + 1\n");
        let o = run_args(&["fourier", "--expr", "x1*dx1"]);
        assert_eq!(o.stdout, "-x1*dx1 - 1\n");
        assert_eq!(
            run_args(&["ideal-member", "--expr", "dx1*x1"]).stdout,
            "false\n"
        );
        assert_eq!(
            run_args(&["ideal-member", "--expr", "x1*dx1"]).stdout,
            "true\n"
        );
    }

    #[test]
    fn reduce_commands() {
        let o = run_args(&[
            "reduce",
            "--op",
            "dx1*dx2",
            "--poly",
            "x1^2*x2^2",
            "--bound",
            "3",
        ]);
        assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
        assert!(o.stdout.contains("N = 3"));
        let o = run_args(&[
            "reduce-product",
            "--op",
            "(dx1 - dx2)*(dx1 + dx2)",
            "--poly",
            "x1^3",
        ]);
        assert_eq!(o.code, 0, "{}{}", o.stdout, o.stderr);
        assert!(o.stdout.contains("new coordinates: dy1*dy2"));
    }

    #[test]
    fn verify_suite_passes() {
        let o = run_args(&["verify-suite", "--seed", "5"]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert_eq!(o.stdout.lines().count(), 10);
    }

    #[test]
    fn decompose_with_probes() {
        let o = run_args(&[
            "decompose",
            "--op",
            "dx1^2",
            "--g",
            "x1^2",
            "--probe",
            "x1^3",
            "--probe",
            "1",
        ]);
        assert_eq!(o.code, 0, "{}", o.stdout);
        assert!(o.stdout.starts_with("degree bound: 1\n"));
    }
}
