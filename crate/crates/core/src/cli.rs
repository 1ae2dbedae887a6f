//! Command-line front end.
//!
//! Exit codes: 0 success, 1 usage error, 2 precondition violation,
//! 3 verification failure or internal inconsistency.

use std::ffi::OsString;
use std::io::Write;
use std::time::Instant;

use clap::{Parser, Subcommand, ValueEnum};
use num_bigint::BigUint;
use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::fdsum::{decomposition_check_all, fd_sum, FdSumSpec};
use crate::poly::IntPoly;
use crate::quasi::poly_part_closed_r2;
use crate::weights::{dp_count, dp_table, WeightSystem, WeightSystemJson, DEFAULT_BOX_GUARD};

/// Environment variable overriding the `|J|` warning threshold.
pub const BOX_GUARD_ENV: &str = "PARTIKIT_BOX_GUARD";

#[derive(Debug, Parser)]
#[command(
    name = "partikit",
    version,
    about = "Exact restricted partition functions"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Method {
    Dp,
    Box,
    Quasi,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Format {
    Text,
    Json,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum BenchFormat {
    Text,
    Csv,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Count solutions of a·x = n in nonnegative integers.
    Count {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value = "dp")]
        method: Method,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print the polynomial part.
    Poly {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Print every constituent polynomial q_0, ..., q_{D-1}.
    Constituents {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Evaluate a Fourier-Dedekind sum s_n(args; b).
    Fdsum {
        #[arg(long, allow_hyphen_values = true)]
        args: String,
        #[arg(long, allow_hyphen_values = true)]
        b: i64,
        #[arg(long, allow_hyphen_values = true)]
        n: i64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Cross-check every evaluator and identity for one weight vector.
    Verify {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        nmax: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: Format,
    },
    /// Time the three evaluators over a geometric grid of n.
    Bench {
        #[arg(long, allow_hyphen_values = true)]
        weights: String,
        #[arg(long)]
        nmax: u64,
        #[arg(long, value_enum, default_value = "text")]
        format: BenchFormat,
    },
}

#[derive(Debug)]
enum Failure {
    Usage(String),
    Precondition(String),
    Verification(String),
}

impl Failure {
    fn exit_code(&self) -> i32 {
        match self {
            Failure::Usage(_) => 1,
            Failure::Precondition(_) => 2,
            Failure::Verification(_) => 3,
        }
    }

    fn message(&self) -> &str {
        match self {
            Failure::Usage(m) | Failure::Precondition(m) | Failure::Verification(m) => m,
        }
    }
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        match e {
            Error::InvalidWeights(_)
            | Error::ResidueOutOfRange { .. }
            | Error::NotCoprime { .. }
            | Error::ModulusNotDivisor { .. }
            | Error::Domain(_) => Failure::Precondition(e.to_string()),
            Error::FieldMismatch { .. }
            | Error::DivisionByZero
            | Error::NotRational { .. }
            | Error::NonIntegerEvaluation { .. }
            | Error::NonConstantDifference { .. } => {
                Failure::Verification(format!("internal inconsistency: {e}"))
            }
        }
    }
}

impl From<std::io::Error> for Failure {
    fn from(e: std::io::Error) -> Self {
        Failure::Usage(format!("output error: {e}"))
    }
}

type CmdResult = std::result::Result<(), Failure>;

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CountJson {
    pub weights: Vec<i64>,
    pub n: i64,
    pub method: Method,
    pub count: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct FdSumJson {
    pub n: i64,
    pub args: Vec<i64>,
    pub b: i64,
    pub value: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct CheckJson {
    pub name: String,
    pub status: String,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct VerifyJson {
    pub weights: WeightSystemJson,
    pub nmax: u64,
    pub checks: Vec<CheckJson>,
    pub passed: bool,
}

/// Runs the CLI on `args` (including the program name), writing to the given
/// streams, and returns the process exit code.
pub fn run<I, T>(args: I, out: &mut dyn Write, err: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            use clap::error::ErrorKind;
            return match e.kind() {
                ErrorKind::DisplayHelp | ErrorKind::DisplayVersion => {
                    let _ = write!(out, "{e}");
                    0
                }
                _ => {
                    let _ = write!(err, "{e}");
                    1
                }
            };
        }
    };
    match dispatch(cli.command, out, err) {
        Ok(()) => 0,
        Err(f) => {
            let _ = writeln!(err, "error: {}", f.message());
            f.exit_code()
        }
    }
}

fn dispatch(command: Command, out: &mut dyn Write, err: &mut dyn Write) -> CmdResult {
    match command {
        Command::Count {
            weights,
            n,
            method,
            format,
        } => cmd_count(&weights, n, method, format, out),
        Command::Poly { weights, format } => cmd_poly(&weights, format, out),
        Command::Constituents { weights, format } => cmd_constituents(&weights, format, out),
        Command::Fdsum { args, b, n, format } => cmd_fdsum(&args, b, n, format, out),
        Command::Verify {
            weights,
            nmax,
            format,
        } => cmd_verify(&weights, nmax, format, out),
        Command::Bench {
            weights,
            nmax,
            format,
        } => cmd_bench(&weights, nmax, format, out, err),
    }
}

/// Parses a comma-separated integer list; an empty string is the empty list.
fn parse_list(flag: &str, s: &str) -> std::result::Result<Vec<i64>, Failure> {
    if s.is_empty() {
        return Ok(Vec::new());
    }
    s.split(',')
        .map(|t| {
            t.parse::<i64>()
                .map_err(|_| Failure::Usage(format!("--{flag}: {t:?} is not an integer")))
        })
        .collect()
}

fn box_guard() -> std::result::Result<u64, Failure> {
    match std::env::var(BOX_GUARD_ENV) {
        Ok(v) => v.parse().map_err(|_| {
            Failure::Usage(format!("{BOX_GUARD_ENV}={v:?} is not a positive integer"))
        }),
        Err(_) => Ok(DEFAULT_BOX_GUARD),
    }
}

fn weight_system(weights: &str) -> std::result::Result<(Vec<i64>, WeightSystem), Failure> {
    let list = parse_list("weights", weights)?;
    let ws = WeightSystem::with_guard(&list, box_guard()?)?;
    Ok((list, ws))
}

fn json_line<T: Serialize>(out: &mut dyn Write, value: &T) -> CmdResult {
    let s = serde_json::to_string(value).expect("plain data serializes");
    writeln!(out, "{s}")?;
    Ok(())
}

fn cmd_count(
    weights: &str,
    n: i64,
    method: Method,
    format: Format,
    out: &mut dyn Write,
) -> CmdResult {
    let (list, ws) = weight_system(weights)?;
    let count = match method {
        Method::Dp => {
            if n > 0 && usize::try_from(n).is_err() {
                return Err(Failure::Precondition(format!(
                    "n = {n} is too large for the dp table"
                )));
            }
            dp_count(ws.weights(), n)
        }
        Method::Box => ws.box_count(n),
        Method::Quasi => ws.quasi_build().eval(n)?,
    };
    match format {
        Format::Text => writeln!(out, "{count}")?,
        Format::Json => json_line(
            out,
            &CountJson {
                weights: list,
                n,
                method,
                count: count.to_string(),
            },
        )?,
    }
    Ok(())
}

fn cmd_poly(weights: &str, format: Format, out: &mut dyn Write) -> CmdResult {
    let (_, ws) = weight_system(weights)?;
    let p = ws.polynomial_part();
    match format {
        Format::Text => writeln!(out, "{p}")?,
        Format::Json => json_line(out, &p)?,
    }
    Ok(())
}

fn cmd_constituents(weights: &str, format: Format, out: &mut dyn Write) -> CmdResult {
    let (_, ws) = weight_system(weights)?;
    let qp = ws.quasi_build();
    match format {
        Format::Text => {
            for (k, q) in qp.constituents().iter().enumerate() {
                writeln!(out, "k={k}: {q}")?;
            }
        }
        Format::Json => json_line(out, &qp)?,
    }
    Ok(())
}

fn cmd_fdsum(args: &str, b: i64, n: i64, format: Format, out: &mut dyn Write) -> CmdResult {
    let list = parse_list("args", args)?;
    if let Some(a) = list.iter().find(|&&a| a <= 0) {
        return Err(Failure::Precondition(format!(
            "argument {a} is not positive"
        )));
    }
    if b <= 0 {
        return Err(Failure::Precondition(format!(
            "modulus b = {b} is not positive"
        )));
    }
    let spec = FdSumSpec::new(list.iter().map(|&a| a as u64).collect(), b as u64, n)?;
    let value = fd_sum(&spec)?;
    match format {
        Format::Text => writeln!(out, "{value}")?,
        Format::Json => json_line(
            out,
            &FdSumJson {
                n,
                args: list,
                b,
                value: value.to_string(),
            },
        )?,
    }
    Ok(())
}

enum Status {
    Pass,
    Fail,
    Skipped,
}

struct Check {
    name: &'static str,
    status: Status,
    detail: String,
}

impl Check {
    fn pass(name: &'static str, detail: String) -> Self {
        Check {
            name,
            status: Status::Pass,
            detail,
        }
    }

    fn fail(name: &'static str, detail: String) -> Self {
        Check {
            name,
            status: Status::Fail,
            detail,
        }
    }
}

fn check_oracles(ws: &WeightSystem, nmax: u64) -> std::result::Result<Check, Failure> {
    const NAME: &str = "oracle equivalence";
    let nmax = usize::try_from(nmax)
        .map_err(|_| Failure::Precondition(format!("nmax = {nmax} is too large")))?;
    let table = dp_table(ws.weights(), nmax);
    let qp = ws.quasi_build();
    for (n, dp) in table.iter().enumerate() {
        let n = n as i64;
        let bx = ws.box_count(n);
        let quasi = qp.eval(n);
        if quasi.as_ref().ok() != Some(dp) || bx != *dp {
            let quasi = match quasi {
                Ok(v) => v.to_string(),
                Err(e) => e.to_string(),
            };
            return Ok(Check::fail(
                NAME,
                format!(
                    "weights={:?} n={n}: dp={dp} box={bx} quasi={quasi}",
                    ws.weights()
                ),
            ));
        }
    }
    Ok(Check::pass(
        NAME,
        format!("dp = box = quasi for 0 <= n <= {nmax}"),
    ))
}

fn check_numerator(ws: &WeightSystem) -> Check {
    const NAME: &str = "generating-function numerator";
    let lhs = ws.weights().iter().fold(ws.numerator_poly(), |acc, &a| {
        let mut factor = vec![0i64; a as usize + 1];
        factor[0] = 1;
        factor[a as usize] -= 1;
        &acc * &IntPoly::from_i64(&factor)
    });
    let mut base = vec![0i64; ws.period() as usize + 1];
    base[0] = 1;
    base[ws.period() as usize] -= 1;
    let rhs = IntPoly::from_i64(&base).pow(ws.r() as u32);
    if lhs == rhs {
        Check::pass(
            NAME,
            format!("N(z)·prod(1 - z^a_i) = (1 - z^{})^{}", ws.period(), ws.r()),
        )
    } else {
        let k = (0..)
            .find(|&i| lhs.coeffs().get(i) != rhs.coeffs().get(i))
            .expect("unequal polynomials differ somewhere");
        let show = |p: &IntPoly| {
            p.coeffs()
                .get(k)
                .map_or("0".to_string(), ToString::to_string)
        };
        Check::fail(
            NAME,
            format!(
                "weights={:?} coefficient of z^{k}: {} vs {}",
                ws.weights(),
                show(&lhs),
                show(&rhs)
            ),
        )
    }
}

fn check_average(ws: &WeightSystem) -> Check {
    const NAME: &str = "polynomial part = constituent average";
    let direct = ws.polynomial_part();
    let averaged = ws.polynomial_part_via_average();
    if direct == averaged {
        Check::pass(NAME, format!("Poly(n) = {direct}"))
    } else {
        Check::fail(
            NAME,
            format!("weights={:?}: {direct} vs {averaged}", ws.weights()),
        )
    }
}

fn check_leading(ws: &WeightSystem) -> Check {
    const NAME: &str = "leading coefficient";
    let p = ws.polynomial_part();
    let expected = ws.expected_leading_coefficient();
    match (p.degree(), p.leading()) {
        (Some(d), Some(c)) if d + 1 == ws.r() && *c == expected => {
            Check::pass(NAME, format!("degree {d}, leading {c}"))
        }
        (d, c) => Check::fail(
            NAME,
            format!(
                "weights={:?}: degree {d:?} leading {} (expected degree {} leading {expected})",
                ws.weights(),
                c.map_or("none".into(), ToString::to_string),
                ws.r() - 1
            ),
        ),
    }
}

fn check_closed_form(ws: &WeightSystem) -> Option<Check> {
    const NAME: &str = "two-weight closed form";
    let &[a, b] = ws.weights() else { return None };
    let closed = poly_part_closed_r2(a, b).ok()?;
    let p = ws.polynomial_part();
    Some(if closed == p {
        Check::pass(NAME, format!("n/({a}·{b}) + 1/(2·{a}) + 1/(2·{b})"))
    } else {
        Check::fail(NAME, format!("weights={:?}: {p} vs {closed}", ws.weights()))
    })
}

fn check_decomposition(ws: &WeightSystem) -> std::result::Result<Check, Failure> {
    const NAME: &str = "constituent decomposition";
    if !ws.pairwise_coprime() {
        return Ok(Check {
            name: NAME,
            status: Status::Skipped,
            detail: "decomposition skipped: weights not pairwise coprime".into(),
        });
    }
    let all = match decomposition_check_all(ws) {
        Ok(all) => all,
        Err(e) => {
            return Ok(Check::fail(
                NAME,
                format!("weights={:?}: {e}", ws.weights()),
            ))
        }
    };
    Ok(match all.iter().find(|d| !d.equal) {
        None => Check::pass(
            NAME,
            format!("q_k - Poly = sum of FD sums for all {} residues", all.len()),
        ),
        Some(d) => Check::fail(
            NAME,
            format!(
                "weights={:?} k={}: lhs={} rhs={}",
                ws.weights(),
                d.k,
                d.lhs,
                d.rhs
            ),
        ),
    })
}

fn cmd_verify(weights: &str, nmax: u64, format: Format, out: &mut dyn Write) -> CmdResult {
    let (_, ws) = weight_system(weights)?;
    let mut checks = vec![
        check_oracles(&ws, nmax)?,
        check_numerator(&ws),
        check_average(&ws),
        check_leading(&ws),
    ];
    checks.extend(check_closed_form(&ws));
    checks.push(check_decomposition(&ws)?);
    let passed = !checks.iter().any(|c| matches!(c.status, Status::Fail));

    match format {
        Format::Text => {
            for c in &checks {
                match c.status {
                    Status::Pass => writeln!(out, "PASS {}: {}", c.name, c.detail)?,
                    Status::Fail => writeln!(out, "FAIL {}: {}", c.name, c.detail)?,
                    Status::Skipped => writeln!(out, "SKIP {}", c.detail)?,
                }
            }
            if passed {
                writeln!(out, "all checks passed")?;
            }
        }
        Format::Json => json_line(
            out,
            &VerifyJson {
                weights: ws.to_json(),
                nmax,
                checks: checks
                    .iter()
                    .map(|c| CheckJson {
                        name: c.name.to_string(),
                        status: match c.status {
                            Status::Pass => "pass",
                            Status::Fail => "fail",
                            Status::Skipped => "skipped",
                        }
                        .to_string(),
                        detail: c.detail.clone(),
                    })
                    .collect(),
                passed,
            },
        )?,
    }

    if passed {
        Ok(())
    } else {
        let first = checks
            .iter()
            .find(|c| matches!(c.status, Status::Fail))
            .expect("a failing check exists");
        Err(Failure::Verification(format!(
            "{} failed: {}",
            first.name, first.detail
        )))
    }
}

/// `1, 2, 5, 10, 20, 50, ...` up to `nmax`, always ending at `nmax`.
pub fn bench_grid(nmax: u64) -> Vec<u64> {
    let mut grid = Vec::new();
    let mut decade = 1u64;
    'outer: loop {
        for step in [1, 2, 5] {
            match decade.checked_mul(step) {
                Some(n) if n < nmax => grid.push(n),
                _ => break 'outer,
            }
        }
        decade = match decade.checked_mul(10) {
            Some(d) => d,
            None => break,
        };
    }
    grid.push(nmax);
    grid
}

/// Mean wall time of `f` in nanoseconds, repeating fast calls for about a
/// millisecond.
fn time_ns<T>(mut f: impl FnMut() -> T) -> u128 {
    let start = Instant::now();
    std::hint::black_box(f());
    let first = start.elapsed();
    if first.as_micros() >= 1000 {
        return first.as_nanos();
    }
    let reps = (1_000_000 / first.as_nanos().max(1)).clamp(1, 10_000) as u32;
    let start = Instant::now();
    for _ in 0..reps {
        std::hint::black_box(f());
    }
    start.elapsed().as_nanos() / reps as u128
}

fn cmd_bench(
    weights: &str,
    nmax: u64,
    format: BenchFormat,
    out: &mut dyn Write,
    err: &mut dyn Write,
) -> CmdResult {
    let (_, ws) = weight_system(weights)?;
    let grid = bench_grid(nmax);
    if i64::try_from(nmax).is_err() {
        return Err(Failure::Precondition(format!("nmax = {nmax} is too large")));
    }

    let build_start = Instant::now();
    let qp = ws.quasi_build();
    let build_ns = build_start.elapsed().as_nanos();

    struct Row {
        n: u64,
        count: BigUint,
        dp_ns: u128,
        box_ns: u128,
        quasi_ns: u128,
    }

    let mut rows = Vec::with_capacity(grid.len());
    for &n in &grid {
        let n_signed = n as i64;
        let dp = dp_count(ws.weights(), n_signed);
        let bx = ws.box_count(n_signed);
        let quasi = qp.eval(n_signed)?;
        if dp != bx || dp != quasi {
            return Err(Failure::Verification(format!(
                "weights={:?} n={n}: dp={dp} box={bx} quasi={quasi}",
                ws.weights()
            )));
        }
        rows.push(Row {
            n,
            dp_ns: time_ns(|| dp_count(ws.weights(), n_signed)),
            box_ns: time_ns(|| ws.box_count(n_signed)),
            quasi_ns: time_ns(|| qp.eval(n_signed)),
            count: dp,
        });
    }

    match format {
        BenchFormat::Csv => {
            writeln!(err, "quasi build: {build_ns} ns (D = {})", ws.period())?;
            writeln!(out, "n,dp_ns,box_ns,quasi_ns")?;
            for r in &rows {
                writeln!(out, "{},{},{},{}", r.n, r.dp_ns, r.box_ns, r.quasi_ns)?;
            }
        }
        BenchFormat::Text => {
            writeln!(
                out,
                "weights {:?}, D = {}, |J| = {}, quasi build {build_ns} ns",
                ws.weights(),
                ws.period(),
                ws.box_size()
            )?;
            let count_width = rows
                .iter()
                .map(|r| r.count.to_string().len())
                .max()
                .unwrap_or(1)
                .max(5);
            writeln!(
                out,
                "{:>12}  {:>cw$}  {:>12}  {:>12}  {:>12}",
                "n",
                "count",
                "dp_ns",
                "box_ns",
                "quasi_ns",
                cw = count_width
            )?;
            for r in &rows {
                writeln!(
                    out,
                    "{:>12}  {:>cw$}  {:>12}  {:>12}  {:>12}",
                    r.n,
                    r.count.to_string(),
                    r.dp_ns,
                    r.box_ns,
                    r.quasi_ns,
                    cw = count_width
                )?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    fn run_str(args: &[&str]) -> (i32, String, String) {
        let mut out = Vec::new();
        let mut err = Vec::new();
        let argv = std::iter::once("partikit").chain(args.iter().copied());
        let code = run(argv, &mut out, &mut err);
        (
            code,
            String::from_utf8(out).unwrap(),
            String::from_utf8(err).unwrap(),
        )
    }

    #[test]
    fn list_parsing() {
        assert_eq!(parse_list("w", "2,3").unwrap(), vec![2, 3]);
        assert_eq!(parse_list("w", "").unwrap(), Vec::<i64>::new());
        assert!(matches!(parse_list("w", "2, 3"), Err(Failure::Usage(_))));
        assert!(matches!(parse_list("w", "2,,3"), Err(Failure::Usage(_))));
    }

    #[test]
    fn grid_shape() {
        assert_eq!(bench_grid(100), vec![1, 2, 5, 10, 20, 50, 100]);
        assert_eq!(bench_grid(10), vec![1, 2, 5, 10]);
        assert_eq!(bench_grid(1), vec![1]);
        assert_eq!(bench_grid(0), vec![0]);
        assert_eq!(bench_grid(7), vec![1, 2, 5, 7]);
    }

    #[test]
    fn count_methods_agree() {
        for method in ["dp", "box", "quasi"] {
            let (code, out, _) =
                run_str(&["count", "--weights", "2,3", "--n", "12", "--method", method]);
            assert_eq!((code, out.as_str()), (0, "3\n"), "method {method}");
        }
    }

    #[test]
    fn negative_n() {
        assert_eq!(
            run_str(&["count", "--weights", "2,3", "--n", "-4"]).1,
            "0\n"
        );
        assert_eq!(
            run_str(&["count", "--weights", "2,3", "--n", "-4", "--method", "box"]).1,
            "0\n"
        );
        assert_eq!(
            run_str(&[
                "count",
                "--weights",
                "2,3",
                "--n",
                "-4",
                "--method",
                "quasi"
            ])
            .0,
            2
        );
    }

    #[test]
    fn exit_codes() {
        assert_eq!(run_str(&["count", "--weights", "2,3"]).0, 1);
        assert_eq!(run_str(&["count", "--weights", "2,x", "--n", "3"]).0, 1);
        assert_eq!(run_str(&["frobnicate"]).0, 1);
        assert_eq!(run_str(&["count", "--weights", "2,0", "--n", "3"]).0, 2);
        assert_eq!(run_str(&["count", "--weights", "", "--n", "3"]).0, 2);
        assert_eq!(run_str(&["--help"]).0, 0);
    }

    #[test]
    fn fdsum_precondition_names_pair() {
        let (code, _, err) = run_str(&["fdsum", "--args", "4", "--b", "6", "--n", "0"]);
        assert_eq!(code, 2);
        assert!(err.contains("gcd(4, 6)"), "{err}");
        assert_eq!(
            run_str(&["fdsum", "--args", "1", "--b", "0", "--n", "0"]).0,
            2
        );
    }
}
