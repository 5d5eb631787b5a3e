//! Argument parsing and command implementations for the `ramweil` binary.

use std::fmt::Write as _;
use std::path::{Path, PathBuf};
use std::sync::Arc;

use clap::{Args, Parser, Subcommand};
use ramweil::grp::orbits::{orbits, OrbitDomain};
use ramweil::grp::table::DEFAULT_CAP;
use ramweil::report::{run_on_table, Report, SuiteOptions};
use ramweil::weil::DEFAULT_TOL;
use ramweil::{DiagSpec, Error, FieldSpec, Form, FormSpec, FormType, GroupTable};

pub const EXIT_OK: i32 = 0;
pub const EXIT_USAGE: i32 = 1;
pub const EXIT_CHECK: i32 = 2;
pub const EXIT_RESOURCE: i32 = 3;
pub const EXIT_NUMERICAL: i32 = 4;

#[derive(Parser, Debug)]
#[command(name = "ramweil", version, about = "Weil representations of unitary groups over F_q[y]/(y^2l)")]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
}

#[derive(Subcommand, Debug)]
pub enum Command {
    /// Run every check for one parameter point and write the JSON report.
    Verify(RunArgs),
    /// Decompose the Weil module and print one row per constituent.
    Decompose(RunArgs),
    /// Count the orbits of U on V.
    Orbits(RunArgs),
    /// Run the built-in matrix against the golden reports.
    Selftest(SelftestArgs),
}

#[derive(Args, Debug, Clone)]
pub struct RunArgs {
    #[arg(long)]
    pub p: u32,
    #[arg(long, default_value_t = 1)]
    pub k: u32,
    /// Monic modulus for k > 1, constant term first, e.g. 1,0,1.
    #[arg(long, value_delimiter = ',')]
    pub modulus: Option<Vec<u32>>,
    #[arg(long)]
    pub ell: usize,
    #[arg(long)]
    pub m: usize,
    /// type1, typedelta, or comma-separated diagonal entries; an entry is an
    /// integer or colon-separated coefficients of 1, x, x², ...
    #[arg(long)]
    pub form: String,
    #[arg(long, default_value_t = DEFAULT_TOL)]
    pub tol: f64,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub threads: Option<usize>,
    #[arg(long)]
    pub out: Option<PathBuf>,
}

#[derive(Args, Debug, Clone)]
pub struct SelftestArgs {
    /// Compare against the reports in this directory instead of the built-in ones.
    #[arg(long)]
    pub golden: Option<PathBuf>,
    /// Write fresh reports into this directory.
    #[arg(long)]
    pub bless: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_CAP)]
    pub cap: usize,
    #[arg(long)]
    pub threads: Option<usize>,
}

/// Parses the `--form` argument.
pub fn parse_form(s: &str) -> Result<DiagSpec, Error> {
    match s {
        "type1" => return Ok(DiagSpec::Standard(FormType::Type1)),
        "typedelta" => return Ok(DiagSpec::Standard(FormType::TypeDelta)),
        _ => {}
    }
    s.split(',')
        .map(|entry| {
            entry
                .split(':')
                .map(|c| c.trim().parse::<i64>().map_err(|_| Error::Format(format!("bad diagonal entry {entry:?}"))))
                .collect()
        })
        .collect::<Result<Vec<Vec<i64>>, Error>>()
        .map(DiagSpec::Entries)
}

pub fn form_spec(a: &RunArgs) -> Result<FormSpec, Error> {
    let field = match (&a.modulus, a.k) {
        (None, 1) => FieldSpec::prime(a.p),
        (Some(m), k) => FieldSpec::new(a.p, k, m.clone()),
        (None, _) => return Err(Error::Domain("--modulus is required when k > 1".into())),
    };
    Ok(FormSpec::new(field, a.ell, a.m, parse_form(&a.form)?))
}

pub fn exit_code(e: &Error) -> i32 {
    match e {
        Error::Domain(_) | Error::Format(_) | Error::Io(_) => EXIT_USAGE,
        Error::Resource(_) => EXIT_RESOURCE,
        Error::Numerical(_) | Error::Consistency(_) => EXIT_NUMERICAL,
    }
}

fn with_threads<T: Send>(threads: Option<usize>, f: impl FnOnce() -> T + Send) -> Result<T, Error> {
    match threads {
        None => Ok(f()),
        Some(n) => rayon::ThreadPoolBuilder::new()
            .num_threads(n)
            .build()
            .map(|pool| pool.install(f))
            .map_err(|e| Error::Domain(format!("thread pool: {e}"))),
    }
}

fn suite_options(tol: f64, cap: usize, full: bool) -> SuiteOptions {
    let mut o = SuiteOptions { full, ..SuiteOptions::default() };
    o.decompose.tol = tol;
    o.decompose.cap = cap;
    o
}

/// Enumerates U for the spec and runs the suite.
pub fn report_for(spec: &FormSpec, opts: &SuiteOptions) -> Result<Report, Error> {
    let form = Arc::new(Form::build(spec)?);
    let table = GroupTable::enumerate(form, opts.decompose.cap)?;
    run_on_table(&table, opts)
}

/// One row per constituent.
pub fn constituent_table(r: &Report) -> String {
    let mut s = String::from("layer  s_length  phi  degree\n");
    let dash = |x: Option<usize>| x.map_or("-".to_string(), |v| v.to_string());
    for c in &r.constituents {
        let _ = writeln!(s, "{:>5}  {:>8}  {:>3}  {:>6}", c.layer, dash(c.s_length), dash(c.phi_index), c.degree);
    }
    let total: u64 = r.constituents.iter().map(|c| c.degree).sum();
    let _ = writeln!(s, "{} constituents, degree sum {}", r.constituents.len(), total);
    s
}

fn emit(text: &str, out: Option<&Path>) -> Result<(), Error> {
    match out {
        Some(p) => std::fs::write(p, text).map_err(Error::from),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn report_failures(r: &Report) -> i32 {
    let mut code = EXIT_OK;
    for c in r.failures() {
        eprintln!("FAIL {}: lhs {} rhs {}", c.name, c.lhs, c.rhs);
        code = EXIT_CHECK;
    }
    code
}

/// The parameter points of the self-test, with their golden file names.
pub fn selftest_matrix() -> Vec<(&'static str, FormSpec)> {
    vec![
        ("p1", FormSpec::diagonal(3, 1, &[1])),
        ("p2", FormSpec::diagonal(3, 1, &[1, -1])),
        ("p3", FormSpec::diagonal(3, 1, &[1, 1])),
        ("p4", FormSpec::diagonal(3, 2, &[1])),
        ("q3_m3_type1", FormSpec::standard(3, 1, 3, FormType::Type1)),
        ("q5_m2_type1", FormSpec::standard(5, 1, 2, FormType::Type1)),
    ]
}

pub fn embedded_golden(name: &str) -> Option<&'static str> {
    Some(match name {
        "p1" => include_str!("../golden/p1.json"),
        "p2" => include_str!("../golden/p2.json"),
        "p3" => include_str!("../golden/p3.json"),
        "p4" => include_str!("../golden/p4.json"),
        "q3_m3_type1" => include_str!("../golden/q3_m3_type1.json"),
        "q5_m2_type1" => include_str!("../golden/q5_m2_type1.json"),
        _ => return None,
    })
}

fn selftest(a: &SelftestArgs) -> Result<i32, Error> {
    let mut code = EXIT_OK;
    for (name, spec) in selftest_matrix() {
        let r = report_for(&spec, &suite_options(DEFAULT_TOL, a.cap, true))?;
        let json = r.to_json();
        let file = format!("{name}.json");
        if let Some(dir) = &a.bless {
            std::fs::create_dir_all(dir)?;
            std::fs::write(dir.join(&file), &json)?;
        }
        let golden = match &a.golden {
            Some(dir) => Some(std::fs::read_to_string(dir.join(&file))?),
            None => embedded_golden(name).map(str::to_string),
        };
        let same = golden.as_deref() == Some(json.as_str());
        let ok = r.passed() && (same || a.bless.is_some());
        println!("{} {name}", if ok { "ok  " } else { "FAIL" });
        if !r.passed() {
            report_failures(&r);
        }
        if !same && a.bless.is_none() {
            eprintln!("{name}: report differs from the golden file");
        }
        if !ok {
            code = EXIT_CHECK;
        }
    }
    Ok(code)
}

fn run_inner(cli: &Cli) -> Result<i32, Error> {
    match &cli.command {
        Command::Verify(a) => {
            let spec = form_spec(a)?;
            let r = with_threads(a.threads, || report_for(&spec, &suite_options(a.tol, a.cap, true)))??;
            emit(&r.to_json(), a.out.as_deref())?;
            Ok(report_failures(&r))
        }
        Command::Decompose(a) => {
            let spec = form_spec(a)?;
            let r = with_threads(a.threads, || report_for(&spec, &suite_options(a.tol, a.cap, false)))??;
            print!("{}", constituent_table(&r));
            if let Some(p) = &a.out {
                emit(&r.to_json(), Some(p))?;
            }
            Ok(report_failures(&r))
        }
        Command::Orbits(a) => {
            let spec = form_spec(a)?;
            let text = with_threads(a.threads, || -> Result<String, Error> {
                let table = GroupTable::enumerate(Arc::new(Form::build(&spec)?), a.cap)?;
                let o = orbits(&table);
                let v = serde_json::json!({
                    "group_order": table.order(),
                    "orbit_counts": {
                        "V": o.count(OrbitDomain::AllV),
                        "V_minus_yV": o.count(OrbitDomain::VMinusYV),
                        "V_minus_y2V": o.count(OrbitDomain::VMinusY2V),
                        "y2V": o.count(OrbitDomain::Y2V),
                    },
                });
                Ok(ramweil::report::canonical_json(&v))
            })??;
            emit(&text, a.out.as_deref())?;
            Ok(EXIT_OK)
        }
        Command::Selftest(a) => with_threads(a.threads, || selftest(a))?,
    }
}

/// Runs a parsed command line and returns the process exit code.
pub fn run(cli: &Cli) -> i32 {
    match run_inner(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            exit_code(&e)
        }
    }
}
