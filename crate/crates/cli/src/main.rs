use std::fs;
use std::io::{self, Write};
use std::path::PathBuf;
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use nowhere_core::cells::{cells_at_level, Cell};
use nowhere_core::rat::parse_rat;
use nowhere_core::{
    antiderivative, antiderivative_term, enclose_integral, eval_f, eval_g, f1, fk, run_suite, signed_antiderivative,
    Certified, Error, Rat, Suite, SuiteConfig, DEFAULT_DEPTH, DEFAULT_INDEX_BUDGET, DEFAULT_SEED, DEFAULT_TERMS,
};

#[derive(Parser)]
#[command(name = "nowhere", version, about = "Exact evaluation and verification of a nowhere monotone derivative")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Evaluate one function at one point
    Eval(Opts),
    /// Tabulate a function at equally spaced points of [a, b]
    Sample(Opts),
    /// List the linearity cells of f_k
    Intervals(Opts),
    /// Enclose the integral of f_k over [-1, x] by cell enumeration
    Integrate(Opts),
    /// Run a verification suite and print its report
    Verify {
        /// structure, oscillation, no-extrema, nowhere-monotone, local-min,
        /// quotient-bound, integral-crosscheck, darboux or all
        suite: String,
        #[command(flatten)]
        opts: Opts,
    },
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Func {
    #[value(name = "f1")]
    F1,
    #[value(name = "fk")]
    Fk,
    #[value(name = "f")]
    F,
    #[value(name = "g")]
    G,
    #[value(name = "Fk")]
    BigFk,
    #[value(name = "F")]
    BigF,
    #[value(name = "G")]
    BigG,
}

#[derive(Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Csv,
    Json,
}

fn rational(s: &str) -> Result<Rat, String> {
    parse_rat(s).map_err(|e| e.to_string())
}

#[derive(Args, Clone)]
struct Opts {
    #[arg(long = "fn", value_enum, default_value = "f")]
    func: Func,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    x: Option<Rat>,
    /// Iterate index for fk, Fk, intervals and integrate; level for suites
    #[arg(long)]
    k: Option<usize>,
    /// Number of series terms
    #[arg(long = "K", default_value_t = DEFAULT_TERMS)]
    terms: usize,
    #[arg(long, default_value_t = DEFAULT_DEPTH)]
    depth: usize,
    /// Largest |j| of enumerated level-1 indices
    #[arg(long, default_value_t = DEFAULT_INDEX_BUDGET)]
    budget: u64,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    a: Option<Rat>,
    #[arg(long, value_parser = rational, allow_hyphen_values = true)]
    b: Option<Rat>,
    #[arg(long)]
    count: Option<usize>,
    #[arg(long, default_value_t = DEFAULT_SEED)]
    seed: u64,
    #[arg(long, value_enum)]
    format: Option<Format>,
    /// Write data here instead of standard output
    #[arg(long)]
    out: Option<PathBuf>,
    #[arg(long = "n-max", default_value_t = 50)]
    n_max: u64,
}

enum Failure {
    Usage(String),
    Verification,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl From<io::Error> for Failure {
    fn from(e: io::Error) -> Self {
        Failure::Usage(e.to_string())
    }
}

impl Opts {
    fn k(&self) -> usize {
        self.k.unwrap_or(1)
    }

    fn require<'a>(&self, v: &'a Option<Rat>, flag: &str) -> Result<&'a Rat, Failure> {
        v.as_ref().ok_or_else(|| Failure::Usage(format!("--{flag} is required")))
    }

    fn evaluate(&self, x: &Rat) -> Result<Certified, Failure> {
        let k = self.k();
        let v = match self.func {
            Func::F1 => Certified::exact(f1(x)?),
            Func::Fk => Certified::exact(fk(x, k)?),
            Func::F => eval_f(x, self.terms)?,
            Func::G => eval_g(x, self.terms)?,
            Func::BigFk => Certified::exact(antiderivative_term(x, k)?),
            Func::BigF => antiderivative(x, self.terms)?,
            Func::BigG => signed_antiderivative(x, self.terms)?,
        };
        Ok(v)
    }

    fn emit(&self, text: &str) -> Result<(), Failure> {
        match &self.out {
            Some(path) => fs::write(path, text)?,
            None => io::stdout().lock().write_all(text.as_bytes())?,
        }
        Ok(())
    }
}

fn json_text(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json serializes");
    s.push('\n');
    s
}

fn value_record(x: &Rat, v: &Certified) -> Value {
    json!({
        "x": x.to_string(),
        "center": v.center.to_string(),
        "radius": v.radius.to_string(),
        "exact": v.is_exact(),
    })
}

fn eval(o: &Opts) -> Result<(), Failure> {
    let x = o.require(&o.x, "x")?;
    let v = o.evaluate(x)?;
    match o.format.unwrap_or(Format::Json) {
        Format::Json => o.emit(&json_text(&json!({ "center": v.center.to_string(), "radius": v.radius.to_string() }))),
        Format::Csv => o.emit(&format!("x,center,radius,exact\n{x},{},{},{}\n", v.center, v.radius, v.is_exact())),
    }
}

fn sample(o: &Opts) -> Result<(), Failure> {
    let a = o.require(&o.a, "a")?;
    let b = o.require(&o.b, "b")?;
    let count = o.count.unwrap_or(101);
    if a >= b || count < 2 {
        return Err(Failure::Usage(format!("need a < b and count >= 2, got [{a}, {b}] and {count}")));
    }
    let step = (b - a) / Rat::from_integer((count - 1).into());
    let mut rows = Vec::with_capacity(count);
    for i in 0..count {
        let x = a + &step * Rat::from_integer(i.into());
        let v = o.evaluate(&x)?;
        rows.push((x, v));
    }
    match o.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("x,center,radius,exact\n");
            for (x, v) in &rows {
                s += &format!("{x},{},{},{}\n", v.center, v.radius, v.is_exact());
            }
            o.emit(&s)
        }
        Format::Json => o.emit(&json_text(&Value::Array(rows.iter().map(|(x, v)| value_record(x, v)).collect()))),
    }
}

fn intervals(o: &Opts) -> Result<(), Failure> {
    let k = o.k();
    if k == 0 {
        return Err(Failure::Usage("--k must be at least 1".into()));
    }
    let inside = |c: &Cell| o.a.as_ref().is_none_or(|a| c.hi >= *a) && o.b.as_ref().is_none_or(|b| c.lo <= *b);
    let cells: Vec<Cell> = cells_at_level(k, o.budget).into_iter().filter(inside).collect();
    match o.format.unwrap_or(Format::Csv) {
        Format::Csv => {
            let mut s = String::from("address,lo,hi,slope,intercept\n");
            for c in &cells {
                s += &format!("\"{}\",{},{},{},{}\n", c.address, c.lo, c.hi, c.slope, c.intercept);
            }
            o.emit(&s)
        }
        Format::Json => o.emit(&json_text(&serde_json::to_value(&cells).expect("cells serialize"))),
    }
}

fn integrate(o: &Opts) -> Result<(), Failure> {
    let x = o.require(&o.x, "x")?;
    let k = o.k();
    let e = enclose_integral(k, x, o.budget)?;
    let exact = antiderivative_term(x, k)?;
    let v = json!({
        "k": k,
        "x": x.to_string(),
        "index_budget": o.budget,
        "lower": e.lower.to_string(),
        "upper": e.upper.to_string(),
        "width": e.width().to_string(),
        "Fk": exact.to_string(),
        "contains_Fk": e.contains(&exact),
    });
    o.emit(&json_text(&v))
}

fn verify(name: &str, o: &Opts) -> Result<(), Failure> {
    let suite: Suite = name.parse()?;
    let cfg = SuiteConfig {
        seed: o.seed,
        terms: o.terms,
        depth: o.depth,
        index_budget: o.budget,
        level: o.k,
        count: o.count,
        n_max: o.n_max,
    };
    let report = run_suite(suite, &cfg);
    o.emit(&(report.to_json() + "\n"))?;
    eprintln!("{suite}: {} pass, {} fail", report.summary.pass, report.summary.fail);
    if report.all_passed() {
        Ok(())
    } else {
        Err(Failure::Verification)
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Eval(o) => eval(o),
        Command::Sample(o) => sample(o),
        Command::Intervals(o) => intervals(o),
        Command::Integrate(o) => integrate(o),
        Command::Verify { suite, opts } => verify(suite, opts),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(Failure::Verification) => ExitCode::from(1),
        Err(Failure::Usage(msg)) => {
            eprintln!("error: {msg}");
            ExitCode::from(2)
        }
    }
}
