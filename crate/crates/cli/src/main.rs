//! `lemkit` command-line front end.

mod plot;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use lemkit::constructions::{circle_pair, cc_counterexample, flower_pair, verify_counterexample_with};
use lemkit::curvekit::{hermitian_numerator, lemniscate_poly, separated_numerator, BivarPoly};
use lemkit::factorcount::{absolute_factor_count, certify_irreducible_tp};
use lemkit::solvekit::{lemniscate_intersections, real_bezout_check, SolveOptions, Status};
use lemkit::{Error, RatFunc};
use serde_json::{json, Value};

#[derive(Parser, Debug)]
#[command(name = "lemkit", version, about = "Lemniscates of rational functions: intersections, factor counts, constructions")]
struct Cli {
    #[command(flatten)]
    global: Global,

    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct Global {
    /// Working precision in bits.
    #[arg(long, global = true, default_value_t = 256)]
    precision: u32,

    /// Numerical tolerance [default: 2^(-precision/2)].
    #[arg(long, global = true)]
    tol: Option<f64>,

    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Output format [default: svg for plot, json otherwise].
    #[arg(long, global = true, value_enum)]
    format: Option<Format>,

    /// Escalation cap in bits.
    #[arg(long, global = true, default_value_t = 4096)]
    max_precision: u32,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Json,
    Svg,
    Text,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Build the curve polynomial of a lemniscate or a separated pair.
    Build {
        #[arg(value_enum)]
        kind: BuildKind,
        #[arg(required = true)]
        exprs: Vec<String>,
    },
    /// Count the common points of two lemniscates |P1| = 1, |P2| = 1.
    Intersect { p1: String, p2: String },
    /// Count common points of two Hermitian curves on w = conj(z).
    Bezout { f: PathBuf, g: PathBuf },
    /// Number of absolutely irreducible factors.
    FactorCount {
        /// BivarPoly JSON file, or - for stdin.
        #[arg(required_unless_present = "from", conflicts_with = "from")]
        file: Option<PathBuf>,
        /// Use the Hermitian numerator of this rational function.
        #[arg(long)]
        from: Option<String>,
    },
    /// Irreducibility of P(z) - Q(w) from the pole pattern of P and Q.
    CertifyTp { p: String, q: String },
    /// Pairs of lemniscates with many intersections.
    Construct {
        #[arg(value_enum)]
        kind: ConstructKind,
        n1: usize,
        n2: usize,
    },
    /// Check the prime-degree counterexample pipeline.
    Counterexample {
        /// Polynomial S to test instead of the built-in one.
        #[arg(long)]
        s: Option<String>,
    },
    /// Plot the lemniscate |P| = 1.
    Plot {
        p: String,
        #[arg(long = "box", num_args = 4, value_names = ["X0", "Y0", "X1", "Y1"], allow_negative_numbers = true)]
        bounds: Option<Vec<f64>>,
        #[arg(long, default_value_t = 512)]
        samples: usize,
    },
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum BuildKind {
    Lemniscate,
    Hermitian,
    Separated,
}

#[derive(Clone, Copy, Debug, ValueEnum)]
enum ConstructKind {
    Flower,
    Circles,
}

/// Result of a subcommand before rendering.
struct Output {
    value: Value,
    text: String,
    code: u8,
}

impl Output {
    fn ok(value: Value, text: String) -> Self {
        Output { value, text, code: 0 }
    }
}

enum Failure {
    Usage(String),
    Lib(Error),
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Lib(e)
    }
}

type Run<T> = std::result::Result<T, Failure>;

fn error_kind(e: &Error) -> &'static str {
    match e {
        Error::DivisionByZero => "division_by_zero",
        Error::Syntax { .. } => "syntax",
        Error::Precondition(_) => "precondition",
        Error::DegenerateMobius => "degenerate_mobius",
        Error::Indeterminate { .. } => "indeterminate",
        Error::Internal(_) => "internal",
        Error::SearchExhausted(_) => "search_exhausted",
        Error::InvalidInput(_) => "invalid_input",
    }
}

fn fail(f: Failure, seed: u64) -> ExitCode {
    let (kind, message, code, extra) = match f {
        Failure::Usage(m) => ("usage", m, 1, Value::Null),
        Failure::Lib(e) => {
            let code = match e {
                Error::Indeterminate { .. } | Error::SearchExhausted(_) => 2,
                _ => 1,
            };
            let extra = match &e {
                Error::Syntax { position, .. } => json!({ "position": position }),
                Error::Indeterminate { precision_bits, .. } => json!({ "precision_bits": precision_bits }),
                _ => Value::Null,
            };
            (error_kind(&e), e.to_string(), code, extra)
        }
    };
    let mut v = json!({ "error": { "kind": kind, "message": message, "exit_code": code }, "seed": seed });
    if let Value::Object(m) = extra {
        v["error"].as_object_mut().unwrap().extend(m);
    }
    eprintln!("{v}");
    ExitCode::from(code)
}

fn rf(s: &str) -> Run<RatFunc> {
    Ok(s.parse()?)
}

fn read_bivar(path: &Path) -> Run<BivarPoly> {
    let text = if path == Path::new("-") {
        std::io::read_to_string(std::io::stdin())
    } else {
        std::fs::read_to_string(path)
    }
    .map_err(|e| Failure::Usage(format!("{}: {e}", path.display())))?;
    serde_json::from_str(&text).map_err(|e| Failure::Lib(Error::InvalidInput(format!("{}: {e}", path.display()))))
}

fn to_value<T: serde::Serialize>(t: &T) -> Value {
    serde_json::to_value(t).expect("reports serialize")
}

fn status_code(s: Status) -> u8 {
    match s {
        Status::Finite | Status::Infinite => 0,
        Status::Indeterminate => 2,
        Status::Falsification => 3,
    }
}

fn status_text(v: &Value) -> String {
    let mut t = format!("status: {}\n", v["status"].as_str().unwrap_or("?"));
    t += &format!("count: {} (bound {})\n", v["count"], v["bound"]);
    if let Some(points) = v["points"].as_array() {
        for p in points {
            t += &format!("  {} + {} i\n", p[0].as_str().unwrap_or(""), p[1].as_str().unwrap_or(""));
        }
    }
    if let Some(c) = v.get("common_component").filter(|c| !c.is_null()) {
        t += &format!("common component bidegree: {}\n", c["bidegree"]);
    }
    if let Some(f) = v["falsification"].as_str() {
        t += &format!("falsification: {f}\n");
    }
    t
}

fn certificate_text(v: &Value) -> String {
    format!(
        "count: {}\nmethod: {}\norbits: {}\nbranch points: {}\nprecision: {} bits\n",
        v["count"],
        v["method"].as_str().unwrap_or("?"),
        v["orbit_sizes"],
        v["branch_points"].as_array().map_or(0, |b| b.len()),
        v["precision_bits_used"],
    )
}

fn run(cmd: Command, g: &Global, opts: &SolveOptions, format: Format) -> Run<Output> {
    match cmd {
        Command::Build { kind, exprs } => {
            let b = match (kind, exprs.as_slice()) {
                (BuildKind::Lemniscate, [p]) => lemniscate_poly(&rf(p)?)?,
                (BuildKind::Hermitian, [p]) => hermitian_numerator(&rf(p)?)?,
                (BuildKind::Separated, [p, q]) => separated_numerator(&rf(p)?, &rf(q)?)?,
                (BuildKind::Separated, _) => return Err(Failure::Usage("separated takes two expressions".into())),
                _ => return Err(Failure::Usage("lemniscate and hermitian take one expression".into())),
            };
            let text = match kind {
                BuildKind::Lemniscate => b.to_expr("x", "y"),
                BuildKind::Hermitian => b.to_string(),
                BuildKind::Separated => b.to_expr("z", "w"),
            };
            Ok(Output::ok(to_value(&b), text + "\n"))
        }
        Command::Intersect { p1, p2 } => {
            let r = lemniscate_intersections(&rf(&p1)?, &rf(&p2)?, opts)?;
            let v = to_value(&r);
            Ok(Output { text: status_text(&v), value: v, code: status_code(r.status) })
        }
        Command::Bezout { f, g } => {
            let r = real_bezout_check(&read_bivar(&f)?, &read_bivar(&g)?, opts)?;
            let v = to_value(&r);
            Ok(Output { text: status_text(&v), value: v, code: status_code(r.status) })
        }
        Command::FactorCount { file, from } => {
            let f = match (file, from) {
                (_, Some(p)) => hermitian_numerator(&rf(&p)?)?,
                (Some(path), None) => read_bivar(&path)?,
                (None, None) => unreachable!("clap requires one source"),
            };
            let c = absolute_factor_count(&f, opts)?;
            let v = to_value(&c);
            Ok(Output::ok(v.clone(), certificate_text(&v)))
        }
        Command::CertifyTp { p, q } => match certify_irreducible_tp(&rf(&p)?, &rf(&q)?)? {
            Some(c) => {
                let v = to_value(&c);
                Ok(Output::ok(v.clone(), certificate_text(&v)))
            }
            None => Ok(Output::ok(json!({ "status": "inapplicable" }), "inapplicable\n".into())),
        },
        Command::Construct { kind, n1, n2 } => {
            let r = match kind {
                ConstructKind::Flower => flower_pair(n1, n2, g.seed, opts)?,
                ConstructKind::Circles => circle_pair(n1, n2, g.seed, opts)?,
            };
            let code = r.verification.as_ref().map_or(0, |v| status_code(v.status));
            let text = format!(
                "P1 = {}\nP2 = {}\nexpected: {}\nverified: {}\nseed: {} ({} attempts)\n",
                r.p1,
                r.p2,
                r.expected_count,
                r.verified_count.map_or("-".to_string(), |c| c.to_string()),
                r.seed,
                r.attempts
            );
            Ok(Output { value: to_value(&r), text, code })
        }
        Command::Counterexample { s } => {
            let s = match s {
                Some(text) => rf(&text)?
                    .as_poly()
                    .cloned()
                    .ok_or_else(|| Failure::Lib(Error::InvalidInput("S must be a polynomial".into())))?,
                None => cc_counterexample().0,
            };
            let r = verify_counterexample_with(&s, opts)?;
            let code = if r.conclusion.starts_with("indeterminate") { 2 } else { 0 };
            let mut text = format!("S = {}\n", r.s.to_expr("z"));
            for st in &r.stages {
                text += &format!("[{}] {}: {}\n", st.status, st.name, st.detail);
            }
            text += &format!("conclusion: {}\n", r.conclusion);
            Ok(Output { value: to_value(&r), text, code })
        }
        Command::Plot { p, bounds, samples } => {
            if samples < 2 {
                return Err(Failure::Usage("samples must be at least 2".into()));
            }
            let b = bounds.unwrap_or_else(|| vec![-2.0, -2.0, 2.0, 2.0]);
            if !(b[0] < b[2] && b[1] < b[3]) || b.iter().any(|x| !x.is_finite()) {
                return Err(Failure::Usage("box must satisfy x0 < x1 and y0 < y1".into()));
            }
            let frame = plot::Frame { x0: b[0], y0: b[1], x1: b[2], y1: b[3], samples };
            let l = lemniscate_poly(&rf(&p)?)?;
            let segs = plot::contour(&l, &frame);
            let text = match format {
                Format::Svg => plot::svg(&segs, &frame, &format!("|{p}| = 1")),
                _ => format!("{} segments\n", segs.len()),
            };
            let value = json!({
                "p": p,
                "box": [frame.x0, frame.y0, frame.x1, frame.y1],
                "samples": samples,
                "segments": plot::to_plane(&segs, &frame),
            });
            Ok(Output::ok(value, text))
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            if matches!(e.kind(), ErrorKind::DisplayHelp | ErrorKind::DisplayVersion) {
                print!("{e}");
                return ExitCode::SUCCESS;
            }
            return fail(Failure::Usage(e.render().to_string().trim().to_string()), 0);
        }
    };
    let g = cli.global;
    let opts = SolveOptions {
        precision_bits: g.precision,
        max_precision_bits: g.max_precision,
        tol: g.tol,
        seed: g.seed,
    };
    if let Err(e) = opts.validate() {
        return fail(Failure::Lib(e), g.seed);
    }
    let is_plot = matches!(cli.command, Command::Plot { .. });
    let format = g.format.unwrap_or(if is_plot { Format::Svg } else { Format::Json });
    if format == Format::Svg && !is_plot {
        return fail(Failure::Usage("svg output is only available for plot".into()), g.seed);
    }
    match run(cli.command, &g, &opts, format) {
        Ok(out) => {
            let body = match format {
                Format::Json => serde_json::to_string_pretty(&out.value).expect("json") + "\n",
                Format::Svg | Format::Text => out.text,
            };
            // a closed pipe downstream is not an error of ours
            let _ = std::io::stdout().lock().write_all(body.as_bytes());
            ExitCode::from(out.code)
        }
        Err(f) => fail(f, g.seed),
    }
}
