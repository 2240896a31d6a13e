//! `tenseg`: analyze tensegrity files, generate named families, cross-check
//! the theorems of the alternative on random instances, and draw SVGs.
//!
//! `analyze` exits 0 for bar-equivalent, 1 for partially bar-equivalent,
//! 2 for neither. Failures exit with 10 or more.

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use tenseg::classify::{classify, Certificate};
use tenseg::families::{self, FamilySpec};
use tenseg::rigidity::{build_operator, variation_space};
use tenseg::svg::{self, Annotation};
use tenseg::{corpus, model, report, stress, Error, Mode, Tol};

const MALFORMED: u8 = 10;
const IO: u8 = 11;
const USAGE: u8 = 12;
const SOLVER: u8 = 13;
const VIOLATIONS: u8 = 14;

#[derive(Parser)]
#[command(name = "tenseg", version, about = "Rigidity analysis of tensegrity frameworks")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify a tensegrity file.
    Analyze {
        file: PathBuf,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
        #[arg(long)]
        json: bool,
        /// Include elapsed milliseconds in the report.
        #[arg(long)]
        timing: bool,
    },
    /// Write a named family in the text format.
    Generate {
        /// Family name; `list` prints the available families.
        family: String,
        #[arg(long)]
        n: Option<usize>,
        /// Cable skip as a fraction of the vertex count.
        #[arg(long = "skip-frac")]
        skip_frac: Option<f64>,
        /// Cable skip as an index offset.
        #[arg(long)]
        skip: Option<usize>,
        /// Further parameters as key=value.
        #[arg(short = 'p', long = "param", value_parser = key_value)]
        params: Vec<(String, f64)>,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Check the stress/motion alternatives on seeded random instances.
    Corpus {
        #[arg(long, default_value_t = 200)]
        count: usize,
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long)]
        json: bool,
        /// Directory receiving one model file per failing instance.
        #[arg(long)]
        dump: Option<PathBuf>,
    },
    /// Draw a tensegrity file as SVG.
    Svg {
        file: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
        #[arg(long, value_enum)]
        annotate: Option<AnnotateArg>,
        #[arg(long, value_enum, default_value = "full")]
        mode: ModeArg,
    },
}

#[derive(Clone, Copy, ValueEnum)]
enum ModeArg {
    Full,
    Isometry,
}

impl From<ModeArg> for Mode {
    fn from(m: ModeArg) -> Mode {
        match m {
            ModeArg::Full => Mode::Full,
            ModeArg::Isometry => Mode::CurveIsometry,
        }
    }
}

#[derive(Clone, Copy, ValueEnum)]
enum AnnotateArg {
    Stress,
    Motion,
}

fn key_value(s: &str) -> Result<(String, f64), String> {
    let (k, v) = s.split_once('=').ok_or_else(|| format!("expected key=value, got `{s}`"))?;
    let v: f64 = v.trim().parse().map_err(|_| format!("`{v}` is not a number"))?;
    Ok((k.trim().to_string(), v))
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn new(code: u8, message: impl Into<String>) -> Failure {
        Failure { code, message: message.into() }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Failure {
        let code = match e.root() {
            Error::IterationLimit { .. } | Error::Inaccurate { .. } | Error::AlternativeViolation { .. } => SOLVER,
            Error::InvalidParameter(_) | Error::UnknownFamily(_) | Error::NoChains | Error::TooManyUnits { .. } => {
                USAGE
            }
            _ => MALFORMED,
        };
        Failure::new(code, e.to_string())
    }
}

fn read(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))
}

fn emit(output: Option<&Path>, text: &str) -> Result<(), Failure> {
    match output {
        Some(path) => fs::write(path, text).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display()))),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn print_report(v: &Value, as_json: bool) {
    if as_json {
        println!("{}", serde_json::to_string_pretty(v).expect("report serializes"));
    } else {
        print!("{}", report::to_text(v));
    }
}

fn analyze(file: &Path, mode: Mode, as_json: bool, timing: bool, tol: &Tol) -> Result<u8, Failure> {
    let t = model::parse(&read(file)?)?;
    let start = Instant::now();
    let c = classify(&t, mode, tol)?;
    let mut v = report::classification_json(&t, mode, &c);
    if timing {
        v["timing_ms"] = json!(start.elapsed().as_secs_f64() * 1e3);
    }
    print_report(&v, as_json);
    Ok(if c.bar_equivalent {
        0
    } else if c.partially_bar_equivalent {
        1
    } else {
        2
    })
}

fn generate(
    family: &str,
    n: Option<usize>,
    skip_frac: Option<f64>,
    skip: Option<usize>,
    params: &[(String, f64)],
    output: Option<&Path>,
) -> Result<u8, Failure> {
    if family == "list" {
        let mut text = String::new();
        for (name, defaults) in families::FAMILIES {
            text.push_str(&format!("{name:20} {defaults}\n"));
        }
        emit(output, &text)?;
        return Ok(0);
    }
    let mut spec = FamilySpec::new(family);
    if let Some(n) = n {
        spec = spec.with("n", n as f64);
    }
    if let Some(f) = skip_frac {
        spec = spec.with("skip-frac", f);
    }
    if let Some(s) = skip {
        spec = spec.with("skip", s as f64);
    }
    for (k, v) in params {
        spec = spec.with(k, *v);
    }
    let t = families::generate(&spec)?;
    emit(output, &model::render(&t))?;
    Ok(0)
}

fn run_corpus(count: usize, seed: u64, as_json: bool, dump: Option<&Path>, tol: &Tol) -> Result<u8, Failure> {
    let summary = corpus::run(count, seed, tol);
    if let Some(dir) = dump {
        if !summary.violations.is_empty() {
            fs::create_dir_all(dir).map_err(|e| Failure::new(IO, format!("{}: {e}", dir.display())))?;
        }
        for v in &summary.violations {
            let path = dir.join(format!("violation-{}-{}.tg", v.index, report::mode_name(v.mode)));
            let text = format!("# {}\n{}", v.detail, v.model);
            fs::write(&path, text).map_err(|e| Failure::new(IO, format!("{}: {e}", path.display())))?;
        }
    }
    print_report(&report::corpus_json(count, seed, &summary), as_json);
    if !as_json {
        println!("{} violations", summary.violations.len());
    }
    Ok(if summary.violations.is_empty() { 0 } else { VIOLATIONS })
}

fn draw(file: &Path, output: Option<&Path>, annotate: Option<AnnotateArg>, mode: Mode, tol: &Tol) -> Result<u8, Failure> {
    let t = model::parse(&read(file)?)?;
    let field;
    let weights;
    let annotation = match annotate {
        None => Annotation::None,
        Some(kind) => {
            let y = build_operator(&t);
            let x = variation_space(&t, mode, tol.rank)?;
            match kind {
                AnnotateArg::Stress => match stress::find_semipositive_stress(&y, &x, tol)? {
                    Some(s) => {
                        weights = s.weights;
                        Annotation::Stress(&weights)
                    }
                    None => {
                        eprintln!("no nonzero stress to annotate");
                        Annotation::None
                    }
                },
                AnnotateArg::Motion => {
                    let found = match classify(&t, mode, tol)?.certificate {
                        Certificate::Motion(m) => Some(m),
                        Certificate::Stress(_) => None,
                    };
                    match found {
                        Some(m) => {
                            field = m.field;
                            Annotation::Motion(&field)
                        }
                        None => {
                            eprintln!("bar-equivalent: no semipositive motion to annotate");
                            Annotation::None
                        }
                    }
                }
            }
        }
    };
    emit(output, &svg::render(&t, &annotation))?;
    Ok(0)
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return ExitCode::from(if e.use_stderr() { USAGE } else { 0 });
        }
    };
    let result = Tol::from_env().map_err(Failure::from).and_then(|tol| match cli.command {
        Command::Analyze { file, mode, json, timing } => analyze(&file, mode.into(), json, timing, &tol),
        Command::Generate {
            family,
            n,
            skip_frac,
            skip,
            params,
            output,
        } => generate(&family, n, skip_frac, skip, &params, output.as_deref()),
        Command::Corpus { count, seed, json, dump } => run_corpus(count, seed, json, dump.as_deref(), &tol),
        Command::Svg {
            file,
            output,
            annotate,
            mode,
        } => draw(&file, output.as_deref(), annotate, mode.into(), &tol),
    });
    match result {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
