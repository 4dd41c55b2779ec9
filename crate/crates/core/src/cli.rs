//! Command-line front end. `run` parses arguments, dispatches and returns the exit code:
//! 0 on success, 1 on invalid input, 2 when a computation fails.

use std::ffi::OsString;
use std::fmt::Write as _;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde_json::json;

use crate::counting::{census, census_bound_from_env, CensusOptions, CensusReport, Locus};
use crate::error::{Error, Result};
use crate::field::Field;
use crate::grassmann::{gamma, locus_membership, psi, schubert_cell_of};
use crate::io::{
    grassmann_to_json, infinite_point_to_json, matrix_to_json, parse_markov, parse_system, system_to_json,
};
use crate::kalman::{canonical_form, kalman_code};
use crate::matrix::Matrix;
use crate::quiver::{QuiverRep, StabilityWeight, SubrepMode};
use crate::realization::{realize, verify_realization};
use crate::system::LinearSystem;

#[derive(Debug, Parser)]
#[command(name = "moduli-sys", version, about = "Exact analysis of linear control systems (A, B, C)")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Classify a system and print its Kalman code and Schubert cell.
    Analyze(SystemArgs),
    /// Print the base change g and the Kalman canonical form g·Σ.
    Canon(SystemArgs),
    /// Print the Grassmannian points ψ(Σ) and γ(Σ) with locus membership.
    Embed(SystemArgs),
    /// Count systems over F_q by enumeration and compare with the closed formula (CSV).
    Census(CensusArgs),
    /// Realize a system from Markov parameters.
    Realize(RealizeArgs),
    /// Emit a random system as JSON.
    Random(RandomArgs),
}

#[derive(Debug, Args)]
struct SystemArgs {
    /// System JSON file.
    #[arg(long)]
    system: PathBuf,
    /// Print JSON instead of text.
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct CensusArgs {
    #[arg(long, value_delimiter = ',', required = true)]
    m: Vec<usize>,
    #[arg(long, value_delimiter = ',', required = true)]
    p: Vec<usize>,
    #[arg(long)]
    n_max: usize,
    #[arg(long, default_value_t = 0)]
    n_min: usize,
    #[arg(long, value_delimiter = ',', required = true)]
    q: Vec<u64>,
    /// Count the completely observable locus instead.
    #[arg(long)]
    dual: bool,
    /// Enumerate on one thread.
    #[arg(long)]
    serial: bool,
}

#[derive(Debug, Args)]
struct RealizeArgs {
    /// Markov sequence JSON file.
    #[arg(long)]
    markov: PathBuf,
    #[arg(long)]
    json: bool,
}

#[derive(Debug, Args)]
struct RandomArgs {
    /// `Q` or a prime q (also written `F5`, `F_5`).
    #[arg(long, value_parser = parse_field)]
    field: Field,
    #[arg(long)]
    m: usize,
    #[arg(long)]
    n: usize,
    #[arg(long)]
    p: usize,
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Redraw until the system is canonical.
    #[arg(long)]
    canonical: bool,
    /// Entries over Q are drawn from -range..=range.
    #[arg(long, default_value_t = 3)]
    range: i64,
}

fn parse_field(s: &str) -> std::result::Result<Field, String> {
    if s == "Q" || s == "q" {
        return Ok(Field::Rationals);
    }
    let digits = s.trim_start_matches(['F', 'f']).trim_start_matches('_');
    let q: u64 = digits.parse().map_err(|_| format!("expected Q or a prime, got {s:?}"))?;
    Field::prime(q).map_err(|e| e.to_string())
}

/// Runs one command. Output goes to `out`, diagnostics to `err`.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            let text = e.render().to_string();
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{text}");
                    0
                }
                _ => {
                    let _ = write!(err, "{text}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command) {
        Ok(text) => {
            let _ = out.write_all(text.as_bytes());
            0
        }
        Err(e) => {
            let _ = writeln!(err, "error[{}]: {e}", e.code());
            if e.is_validation() {
                1
            } else {
                2
            }
        }
    }
}

fn dispatch(cmd: Command) -> Result<String> {
    match cmd {
        Command::Analyze(a) => analyze(&load_system(&a.system)?, a.json),
        Command::Canon(a) => canon(&load_system(&a.system)?, a.json),
        Command::Embed(a) => embed(&load_system(&a.system)?, a.json),
        Command::Census(a) => census_grid(&a),
        Command::Realize(a) => realize_cmd(&a),
        Command::Random(a) => random_system(&a),
    }
}

fn load_system(path: &Path) -> Result<LinearSystem> {
    parse_system(&std::fs::read_to_string(path)?)
}

fn pretty(v: &serde_json::Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("serializable");
    s.push('\n');
    s
}

fn indent(m: &Matrix) -> String {
    m.to_string().lines().map(|l| format!("  {l}\n")).collect()
}

fn analyze(sys: &LinearSystem, as_json: bool) -> Result<String> {
    let (m, n, p) = sys.dims();
    let class = sys.classify();
    let rep = QuiverRep::new(sys);
    let simple = rep.is_simple_with(SubrepMode::RankCriterion)?;
    let plus = rep.is_theta_stable_with(StabilityWeight::plus(n), SubrepMode::RankCriterion)?;
    let minus = rep.is_theta_stable_with(StabilityWeight::minus(n), SubrepMode::RankCriterion)?;
    let code = match kalman_code(sys) {
        Ok(code) => Some(code),
        Err(Error::NotControllable { .. }) => None,
        Err(e) => return Err(e),
    };
    let cell = match &code {
        Some(_) if n > 0 => Some(schubert_cell_of(&psi(sys)?)),
        _ => None,
    };
    if as_json {
        return Ok(pretty(&json!({
            "field": sys.field().to_string(),
            "m": m, "n": n, "p": p,
            "class": class,
            "quiver": {
                "dimension_vector": [1, n],
                "simple": simple,
                "theta_plus_stable": plus,
                "theta_minus_stable": minus,
            },
            "kalman_code": code.as_ref().map(|c| c.to_json()),
            "schubert_cell": cell.as_ref().map(|c| c.one_based()),
        })));
    }
    let mut s = String::new();
    writeln!(s, "system over {} with m={m} n={n} p={p}", sys.field()).unwrap();
    writeln!(s, "cc={} co={} canonical={}", class.cc, class.co, class.canonical).unwrap();
    writeln!(s, "rank c={} rank o={}", class.rank_c, class.rank_o).unwrap();
    writeln!(s, "quiver dim=(1,{n}) simple={simple} theta+_stable={plus} theta-_stable={minus}").unwrap();
    match &code {
        Some(code) => {
            writeln!(s, "kalman code {code}").unwrap();
            s.push_str(&code.ascii_art());
        }
        None => writeln!(s, "kalman code: none (not controllable)").unwrap(),
    }
    match &cell {
        Some(cell) => writeln!(s, "schubert cell {cell}").unwrap(),
        None => writeln!(s, "schubert cell: none").unwrap(),
    }
    Ok(s)
}

fn canon(sys: &LinearSystem, as_json: bool) -> Result<String> {
    let cf = canonical_form(sys)?;
    if as_json {
        return Ok(pretty(&json!({
            "g": matrix_to_json(&cf.g),
            "system": system_to_json(&cf.system),
            "kalman_code": cf.code.to_json(),
        })));
    }
    let mut s = String::new();
    writeln!(s, "kalman code {}", cf.code).unwrap();
    writeln!(s, "g =").unwrap();
    s.push_str(&indent(&cf.g));
    writeln!(s, "canonical form").unwrap();
    write_system(&mut s, &cf.system);
    Ok(s)
}

fn write_system(s: &mut String, sys: &LinearSystem) {
    let (m, n, p) = sys.dims();
    writeln!(s, "system over {} with m={m} n={n} p={p}", sys.field()).unwrap();
    for (name, mat) in [("A", sys.a()), ("B", sys.b()), ("C", sys.c())] {
        writeln!(s, "{name} =").unwrap();
        s.push_str(&indent(mat));
    }
}

fn embed(sys: &LinearSystem, as_json: bool) -> Result<String> {
    let (m, _, p) = sys.dims();
    let psi_point = if sys.is_cc() && sys.n() > 0 { Some(psi(sys)?) } else { None };
    let gamma_point = gamma(sys)?;
    let locus = locus_membership(&gamma_point, m, p)?;
    let stratum = locus.in_cc.then(|| gamma_point.stratum());
    if as_json {
        return Ok(pretty(&json!({
            "psi": psi_point.as_ref().map(grassmann_to_json),
            "gamma": infinite_point_to_json(&gamma_point),
            "locus": locus,
            "stratum": stratum,
        })));
    }
    let mut s = String::new();
    match &psi_point {
        Some(pt) => {
            writeln!(s, "psi: {pt}").unwrap();
            writeln!(s, "psi cell {}", schubert_cell_of(pt)).unwrap();
        }
        None => writeln!(s, "psi: none").unwrap(),
    }
    writeln!(s, "gamma: {}", gamma_point.point()).unwrap();
    writeln!(s, "in_cc={} in_co={} in_canonical={}", locus.in_cc, locus.in_co, locus.in_canonical).unwrap();
    match stratum {
        Some(n) => writeln!(s, "stratum n={n}").unwrap(),
        None => writeln!(s, "stratum: none").unwrap(),
    }
    Ok(s)
}

fn census_grid(a: &CensusArgs) -> Result<String> {
    if a.n_min > a.n_max {
        return Err(Error::DimensionMismatch(format!("--n-min {} exceeds --n-max {}", a.n_min, a.n_max)));
    }
    for &q in &a.q {
        Field::prime(q)?;
    }
    let opts = CensusOptions { bound: census_bound_from_env()?, parallel: !a.serial };
    let locus = if a.dual { Locus::Observable } else { Locus::Controllable };
    let mut s = String::new();
    writeln!(s, "{}", CensusReport::CSV_HEADER).unwrap();
    for &m in &a.m {
        for &p in &a.p {
            for n in a.n_min..=a.n_max {
                for &q in &a.q {
                    writeln!(s, "{}", census(locus, m, n, p, q, opts)?.csv_row()).unwrap();
                }
            }
        }
    }
    Ok(s)
}

fn realize_cmd(a: &RealizeArgs) -> Result<String> {
    let seq = parse_markov(&std::fs::read_to_string(&a.markov)?)?;
    let sys = realize(&seq)?;
    let verified = verify_realization(&sys, &seq)?;
    if a.json {
        return Ok(pretty(&json!({ "system": system_to_json(&sys), "verify": verified })));
    }
    let mut s = String::new();
    write_system(&mut s, &sys);
    writeln!(s, "verify={verified}").unwrap();
    Ok(s)
}

const MAX_CANONICAL_DRAWS: usize = 10_000;

fn random_system(a: &RandomArgs) -> Result<String> {
    let mut rng = ChaCha8Rng::seed_from_u64(a.seed);
    if a.range < 0 {
        return Err(Error::DimensionMismatch("--range must be nonnegative".into()));
    }
    for _ in 0..MAX_CANONICAL_DRAWS {
        let sys = draw_system(&mut rng, a.field, a.m, a.n, a.p, a.range)?;
        if !a.canonical || sys.classify().canonical {
            return Ok(pretty(&serde_json::to_value(system_to_json(&sys))?));
        }
    }
    Err(Error::InconsistentData(format!("no canonical system found in {MAX_CANONICAL_DRAWS} draws")))
}

/// Entries uniform in `F_q`, or integers in `-range..=range` over `Q`.
pub fn draw_system<R: Rng>(
    rng: &mut R,
    field: Field,
    m: usize,
    n: usize,
    p: usize,
    range: i64,
) -> Result<LinearSystem> {
    let mut draw = |rows: usize, cols: usize| {
        let data: Vec<i64> = (0..rows * cols)
            .map(|_| match field.order() {
                Some(q) => rng.gen_range(0..q) as i64,
                None => rng.gen_range(-range..=range),
            })
            .collect();
        Matrix::from_i64(field, rows, cols, &data)
    };
    let a = draw(n, n)?;
    let b = draw(n, m)?;
    let c = draw(p, n)?;
    LinearSystem::new(a, b, c)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let code = run(std::iter::once("moduli-sys").chain(args.iter().copied()), &mut out, &mut err);
        (code, String::from_utf8(out).unwrap(), String::from_utf8(err).unwrap())
    }

    #[test]
    fn field_flag() {
        assert_eq!(parse_field("Q").unwrap(), Field::Rationals);
        assert_eq!(parse_field("5").unwrap(), Field::Prime(5));
        assert_eq!(parse_field("F_7").unwrap(), Field::Prime(7));
        assert!(parse_field("6").is_err());
    }

    #[test]
    fn random_is_seeded() {
        let args = ["random", "--field", "F5", "--m", "2", "--n", "3", "--p", "1", "--seed", "9"];
        let (c1, a, _) = run_str(&args);
        let (c2, b, _) = run_str(&args);
        assert_eq!((c1, c2), (0, 0));
        assert_eq!(a, b);
        assert!(parse_system(&a).is_ok());
    }

    #[test]
    fn random_canonical() {
        let (code, out, _) = run_str(&["random", "--field", "Q", "--m", "1", "--n", "2", "--p", "1", "--canonical"]);
        assert_eq!(code, 0);
        assert!(parse_system(&out).unwrap().classify().canonical);
    }

    #[test]
    fn bad_flags_exit_one() {
        assert_eq!(run_str(&["analyze", "--bogus"]).0, 1);
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        assert_eq!(run_str(&["--help"]).0, 0);
        let (code, _, err) = run_str(&["census", "--m", "1", "--p", "1", "--n-max", "1", "--q", "4"]);
        assert_eq!(code, 1);
        assert!(err.starts_with("error[not_prime]"));
    }

    #[test]
    fn census_small_grid() {
        let (code, out, _) = run_str(&["census", "--m", "1", "--p", "1", "--n-max", "2", "--q", "2,3"]);
        assert_eq!(code, 0);
        let lines: Vec<&str> = out.lines().collect();
        assert_eq!(lines[0], CensusReport::CSV_HEADER);
        assert_eq!(lines.len(), 1 + 3 * 2);
        assert!(lines[1..].iter().all(|l| l.ends_with(",true")));
    }
}
