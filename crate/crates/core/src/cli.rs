//! The `mipaug` command line.
//!
//! Every verb reads an instance file (or standard input for `-`), prints a
//! human-readable listing by default, and with `--format json` prints one
//! object `{verb, instance, result, provenance}` where every number is a
//! string. Exit codes: 0 ok or optimal, 1 failed check, 2 infeasible,
//! 3 unbounded, 64 usage, 65 malformed input.

use std::fmt::Write as _;
use std::io::{Read, Write};

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;
use serde_json::{json, Value};

use crate::cone::{self, Cone, HilbertCache};
use crate::error::Error;
use crate::exact::{parse_rational, Rational};
use crate::instance::{parse_instance, MipInstance, MixedVec};
use crate::linalg;
use crate::oracle;
use crate::solver;
use crate::testset::{self, DEFAULT_GSTAR_LIMIT};

pub const EXIT_OK: i32 = 0;
pub const EXIT_CHECK_FAILED: i32 = 1;
pub const EXIT_INFEASIBLE: i32 = 2;
pub const EXIT_UNBOUNDED: i32 = 3;
pub const EXIT_USAGE: i32 = 64;
pub const EXIT_DATA: i32 = 65;


const VERSION: &str = concat!(env!("CARGO_PKG_VERSION"), " (format 1)");

#[derive(Parser, Debug)]
#[command(name = "mipaug", version = VERSION, about = "Test sets and augmentation for mixed-integer programs")]
struct Cli {
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Largest m·r accepted by the G* sign-list enumeration.
    #[arg(long, global = true, default_value_t = DEFAULT_GSTAR_LIMIT)]
    limit: usize,
    /// Box radius for Hilbert basis verification.
    #[arg(long, global = true, default_value_t = 4, value_parser = clap::value_parser!(i64).range(1..))]
    radius: i64,
    #[command(subcommand)]
    verb: Verb,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TestSetKind {
    Tstar,
    Gab,
    Finite,
}

#[derive(Args, Debug)]
struct Input {
    /// Instance file, or `-` for standard input.
    #[arg(default_value = "-")]
    file: String,
}

#[derive(Subcommand, Debug)]
enum Verb {
    /// Circuits of the real block, one per sign pair.
    Circuits(Input),
    /// Bases of the real block in lexicographic order.
    Bases(Input),
    /// Hilbert basis of a pointed cone given as `ge|le` rows.
    Hilbert {
        #[command(flatten)]
        input: Input,
        /// Print the conic Graver base instead (any cone).
        #[arg(long)]
        graver: bool,
        /// Verify the conic Graver base by bounded enumeration (needs --graver).
        #[arg(long)]
        check: bool,
    },
    /// Integer generators G* over all sign lists.
    Gstar(Input),
    /// Integer generators G^{A,b} from pairs of solutions in the box.
    Gab(Input),
    /// Lifted directions T*.
    Tstar(Input),
    /// Augment to an optimum.
    Solve {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = TestSetKind::Tstar)]
        testset: TestSetKind,
        /// Starting point, e.g. "(3, 0, 0)"; defaults to the first feasible
        /// integer part in the box.
        #[arg(long, allow_hyphen_values = true)]
        start: Option<String>,
        #[arg(long)]
        trace: bool,
    },
    /// Brute-force solutions and optimum over the box.
    Oracle(Input),
    /// Verify the double test set property against the oracle.
    CheckDts {
        #[command(flatten)]
        input: Input,
        #[arg(long, value_enum, default_value_t = TestSetKind::Tstar)]
        testset: TestSetKind,
    },
    /// Completion-procedure test set.
    FiniteTestset(Input),
    /// Check the infinity-norm bound on T*.
    CheckBound(Input),
}

impl Verb {
    fn name(&self) -> &'static str {
        match self {
            Verb::Circuits(_) => "circuits",
            Verb::Bases(_) => "bases",
            Verb::Hilbert { .. } => "hilbert",
            Verb::Gstar(_) => "gstar",
            Verb::Gab(_) => "gab",
            Verb::Tstar(_) => "tstar",
            Verb::Solve { .. } => "solve",
            Verb::Oracle(_) => "oracle",
            Verb::CheckDts { .. } => "check-dts",
            Verb::FiniteTestset(_) => "finite-testset",
            Verb::CheckBound(_) => "check-bound",
        }
    }

    fn input(&self) -> &Input {
        match self {
            Verb::Circuits(i)
            | Verb::Bases(i)
            | Verb::Gstar(i)
            | Verb::Gab(i)
            | Verb::Tstar(i)
            | Verb::Oracle(i)
            | Verb::FiniteTestset(i)
            | Verb::CheckBound(i) => i,
            Verb::Hilbert { input, .. } | Verb::Solve { input, .. } | Verb::CheckDts { input, .. } => {
                input
            }
        }
    }
}

/// What a verb produced: a text listing, the JSON pieces, a warning for the
/// diagnostic stream, and the exit code.
struct Outcome {
    text: String,
    result: Value,
    provenance: Value,
    warning: Option<String>,
    code: i32,
}

impl Outcome {
    fn ok(text: String, result: Value) -> Self {
        Outcome {
            text,
            result,
            provenance: Value::Null,
            warning: None,
            code: EXIT_OK,
        }
    }

    fn with_provenance(mut self, p: Value) -> Self {
        self.provenance = p;
        self
    }
}

struct Failure {
    code: i32,
    msg: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse { .. } | Error::Invalid(_) | Error::NotPointed | Error::MissingBox(_) => EXIT_DATA,
            Error::TooLarge { .. } => EXIT_USAGE,
            Error::Infeasible(_) => EXIT_INFEASIBLE,
            Error::Unbounded => EXIT_UNBOUNDED,
            _ => EXIT_CHECK_FAILED,
        };
        Failure {
            code,
            msg: e.to_string(),
        }
    }
}

fn usage(msg: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_USAGE,
        msg: msg.into(),
    }
}

fn to_json<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("serializable")
}

fn lines<T: std::fmt::Display>(items: impl IntoIterator<Item = T>) -> String {
    items.into_iter().fold(String::new(), |mut s, x| {
        let _ = writeln!(s, "{x}");
        s
    })
}

fn read_input(file: &str, stdin: &mut dyn Read) -> Result<String, Failure> {
    let mut text = String::new();
    if file == "-" {
        stdin
            .read_to_string(&mut text)
            .map_err(|e| usage(format!("cannot read standard input: {e}")))?;
    } else {
        text = std::fs::read_to_string(file).map_err(|e| usage(format!("cannot read {file}: {e}")))?;
    }
    Ok(text)
}

/// Parses `"(3, 0, 1/2)"`, `"3 0 1/2"` or `"3,0,1/2"` into a point of the
/// instance's shape.
pub fn parse_point(s: &str, inst: &MipInstance) -> Option<MixedVec> {
    let vals: Vec<Rational> = s
        .trim()
        .trim_start_matches('(')
        .trim_end_matches(')')
        .split(|c: char| c == ',' || c.is_whitespace())
        .filter(|t| !t.is_empty())
        .map(parse_rational)
        .collect::<Option<_>>()?;
    if vals.len() != inst.n() {
        return None;
    }
    MixedVec::from_full(&vals, inst.n_real)
}

fn directions(inst: &MipInstance, kind: TestSetKind, limit: usize) -> Result<Vec<MixedVec>, Failure> {
    Ok(match kind {
        TestSetKind::Tstar => testset::build_t_star(inst, limit)?.into_iter().map(|t| t.vec).collect(),
        TestSetKind::Gab => testset::build_t_ab(inst)?.into_iter().map(|t| t.vec).collect(),
        TestSetKind::Finite => solver::build_finite_test_set(inst, limit)?,
    })
}

fn cone_rows(c: &Cone) -> Value {
    to_json(&c.rows)
}

fn generator_outcome(gens: Vec<(crate::exact::IntVec, Cone)>) -> Outcome {
    let text = lines(gens.iter().map(|(g, _)| g));
    let result = to_json(&gens.iter().map(|(g, _)| g).collect::<Vec<_>>());
    let prov = Value::Array(
        gens.iter()
            .map(|(g, c)| json!({"generator": g, "cone": cone_rows(c)}))
            .collect(),
    );
    Outcome::ok(text, result).with_provenance(prov)
}

fn run_hilbert(text: &str, graver: bool, check: bool, radius: i64) -> Result<(Value, Outcome), Failure> {
    if check && !graver {
        return Err(usage("--check verifies orthant-wise decompositions; add --graver"));
    }
    let c = cone::parse_cone(text)?;
    let gens = if graver {
        HilbertCache::new().conic_graver(&c)
    } else {
        cone::hilbert_basis(&c)
            .map_err(|e| Failure {
                code: EXIT_DATA,
                msg: format!("{e}; use --graver for the conic Graver base"),
            })?
            .gens
    };
    let mut out = Outcome::ok(lines(&gens), to_json(&gens));
    if check {
        let rep = oracle::verify_hilbert(&c, &gens, radius);
        for f in rep.failures() {
            let _ = writeln!(out.text, "check failed: {} {}", f.name, f.witness.as_deref().unwrap_or(""));
        }
        if !rep.passed() {
            out.code = EXIT_CHECK_FAILED;
        }
        out.provenance = json!({"checks": to_json(&rep.checks), "radius": radius.to_string()});
    }
    Ok((json!({"cone": to_json(&c)}), out))
}

fn run_verb(cli: &Cli, inst: &MipInstance) -> Result<Outcome, Failure> {
    let limit = cli.limit;
    match &cli.verb {
        Verb::Circuits(_) => {
            let cs = linalg::circuits(inst);
            let vecs: Vec<_> = cs.iter().map(|c| &c.vec).collect();
            let prov = Value::Array(cs.iter().map(|c| json!({"support": c.support})).collect());
            Ok(Outcome::ok(lines(&vecs), to_json(&vecs)).with_provenance(prov))
        }
        Verb::Bases(_) => {
            let bs = linalg::enumerate_bases(inst);
            Ok(Outcome::ok(lines(&bs), to_json(&bs)))
        }
        Verb::Gstar(_) => Ok(generator_outcome(testset::build_g_star_with_cones(inst, limit)?)),
        Verb::Gab(_) => {
            let sols = oracle::enumerate_basic_integer_solutions(inst)
                .map_err(|_| Error::MissingBox("gab"))?;
            let mut out = generator_outcome(testset::build_g_ab_with_cones(inst)?);
            if sols.is_empty() {
                out.warning = Some("no feasible basic-integer solution in the box; G^{A,b} is empty".into());
            }
            Ok(out)
        }
        Verb::Tstar(_) => {
            let gens = testset::build_g_star_with_cones(inst, limit)?;
            let only: Vec<_> = gens.iter().map(|(g, _)| g.clone()).collect();
            let dirs = testset::lift_all(inst, &only);
            let prov = Value::Array(
                dirs.iter()
                    .map(|t| {
                        let cone = gens.iter().find(|(g, _)| *g == t.gen).map(|(_, c)| cone_rows(c));
                        json!({"basis": t.basis.cols, "generator": t.gen, "cone": cone})
                    })
                    .collect(),
            );
            let vecs: Vec<_> = dirs.iter().map(|t| &t.vec).collect();
            Ok(Outcome::ok(lines(&vecs), to_json(&vecs)).with_provenance(prov))
        }
        Verb::FiniteTestset(_) => {
            let dirs = solver::build_finite_test_set(inst, limit)?;
            Ok(Outcome::ok(lines(&dirs), to_json(&dirs)))
        }
        Verb::Oracle(_) => {
            let rep = oracle::report(inst)?;
            let mut text = String::new();
            for x in &rep.solutions {
                let _ = writeln!(text, "solution {x} obj {}", inst.objective(x));
            }
            let mut out = Outcome::ok(String::new(), to_json(&rep));
            match &rep.optimum {
                Some(o) => {
                    let _ = writeln!(text, "optimum {}", o.value);
                    for x in &o.argmins {
                        let _ = writeln!(text, "argmin {x}");
                    }
                }
                None => {
                    let _ = writeln!(text, "infeasible");
                    out.code = EXIT_INFEASIBLE;
                }
            }
            if !rep.passed() {
                out.code = EXIT_CHECK_FAILED;
            }
            out.text = text;
            Ok(out)
        }
        Verb::CheckDts { testset: kind, .. } => {
            let dirs = directions(inst, *kind, limit)?;
            let rep = oracle::verify_double_test_set(inst, &dirs)?;
            let mut text = String::new();
            if rep.passed() {
                let _ = writeln!(
                    text,
                    "pass: {} solutions, {} directions",
                    rep.solutions.len(),
                    dirs.len()
                );
            }
            for f in rep.failures() {
                let _ = writeln!(text, "fail: no improving direction from {}", f.witness.as_deref().unwrap_or(""));
            }
            let code = if rep.passed() { EXIT_OK } else { EXIT_CHECK_FAILED };
            let mut out = Outcome::ok(text, to_json(&rep));
            out.code = code;
            Ok(out)
        }
        Verb::CheckBound(_) => {
            let dirs = testset::build_t_star(inst, limit)?;
            let rep = testset::check_norm_bound(inst, &dirs);
            let mut text = String::new();
            for v in rep.violations() {
                let _ = writeln!(
                    text,
                    "violation {} norm {} bound {}",
                    v.direction, v.norm, v.bound
                );
            }
            let bad = rep.violations().len();
            let _ = writeln!(
                text,
                "violations {bad} of {} (max subdeterminant {})",
                rep.checks.len(),
                rep.max_subdeterminant
            );
            let mut out = Outcome::ok(text, to_json(&rep));
            if bad > 0 {
                out.code = EXIT_CHECK_FAILED;
            }
            Ok(out)
        }
        Verb::Solve {
            testset: kind,
            start,
            trace,
            ..
        } => {
            let x0 = match start {
                Some(s) => parse_point(s, inst).ok_or_else(|| {
                    usage(format!("--start needs {} numbers with integral trailing {}", inst.n(), inst.n_int))
                })?,
                None => {
                    if inst.bounds.is_none() {
                        return Err(usage("solve without a box needs --start"));
                    }
                    match solver::find_initial_solution(inst)? {
                        Some(x) => x,
                        None => return Err(Error::Infeasible("no feasible integer part in the box".into()).into()),
                    }
                }
            };
            let dirs = directions(inst, *kind, limit)?;
            let (x, tr) = solver::augment(inst, &x0, &dirs)?;
            let value = inst.objective(&x);
            let mut text = String::new();
            if *trace {
                text.push_str(&tr.to_string());
            }
            let _ = writeln!(text, "status optimal\nvalue {value}\npoint {x}");
            let result = json!({
                "status": "optimal",
                "value": value.to_string(),
                "point": x,
                "start": x0,
                "steps": to_json(&tr.steps),
            });
            Ok(Outcome::ok(text, result))
        }
        Verb::Hilbert { .. } => unreachable!("handled before instance parsing"),
    }
}

fn emit(
    cli: &Cli,
    instance: Value,
    out: Outcome,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> i32 {
    if let Some(w) = &out.warning {
        let _ = writeln!(stderr, "warning: {w}");
    }
    match cli.format {
        Format::Text => {
            let _ = stdout.write_all(out.text.as_bytes());
        }
        Format::Json => {
            let doc = json!({
                "verb": cli.verb.name(),
                "instance": instance,
                "result": out.result,
                "provenance": out.provenance,
            });
            let _ = writeln!(stdout, "{}", serde_json::to_string_pretty(&doc).expect("json"));
        }
    }
    out.code
}

/// Runs one invocation; `args` includes the program name.
pub fn run<I, S>(args: I, stdin: &mut dyn Read, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = S>,
    S: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(c) => c,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(stdout, "{}", e.render());
                    EXIT_OK
                }
                _ => {
                    let _ = write!(stderr, "{}", e.render());
                    EXIT_USAGE
                }
            };
        }
    };
    let attempt = (|| -> Result<(Value, Outcome), Failure> {
        let text = read_input(&cli.verb.input().file, stdin)?;
        if let Verb::Hilbert { graver, check, .. } = cli.verb {
            return run_hilbert(&text, graver, check, cli.radius);
        }
        let inst = parse_instance(&text)?;
        let out = run_verb(&cli, &inst)?;
        Ok((to_json(&inst), out))
    })();
    match attempt {
        Ok((instance, out)) => emit(&cli, instance, out, stdout, stderr),
        Err(f) => {
            let label = match f.code {
                EXIT_DATA => "input error",
                EXIT_USAGE => "usage error",
                EXIT_INFEASIBLE => "infeasible",
                EXIT_UNBOUNDED => "unbounded",
                _ => "error",
            };
            let _ = writeln!(stderr, "{label}: {}", f.msg);
            f.code
        }
    }
}
