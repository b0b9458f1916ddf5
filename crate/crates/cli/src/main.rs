use std::collections::BTreeMap;
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde::Deserialize;

use freespin::algebra::checks::battery;
use freespin::chart::pair_pos;
use freespin::cohomology::harmonic_scan;
use freespin::parse::parse_expression;
use freespin::report::analyze_text;
use freespin::spinor::{list_inclusions, null_cone_member, pfaffian, tangent_to_skew, TangentVector};
use freespin::{Chart, Error, Scalar};

/// Largest rank accepted by `algebra-check`.
const ALGEBRA_CHECK_MAX_L: usize = 6;
/// Largest rank accepted by `cohomology`.
const COHOMOLOGY_MAX_L: usize = 5;

#[derive(Parser)]
#[command(name = "freespin", version, about = "Cartan-connection invariants of free rank-l distributions")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Text,
}

#[derive(Subcommand)]
enum Command {
    /// Normalize the connection of a frame file and report its curvature.
    Analyze {
        file: String,
        #[arg(long, value_enum, default_value = "json")]
        format: Format,
    },
    /// Run the graded Lie algebra self-check battery.
    AlgebraCheck {
        #[arg(long)]
        l: usize,
    },
    /// Dimensions of harmonic k-cochains by homogeneity.
    Cohomology {
        #[arg(long)]
        l: usize,
        #[arg(long)]
        k: usize,
        /// Homogeneity range `a..b`, inclusive.
        #[arg(long, allow_hyphen_values = true)]
        h: String,
    },
    /// Skew matrix, Pfaffian and null-cone verdict of a tangent vector.
    Spinor {
        #[arg(long)]
        l: usize,
        /// JSON such as {"v": {"1": "1", "[2,3]": "1/2"}}
        #[arg(long)]
        vector: String,
    },
    /// The table of exceptional inclusions of parabolic geometries.
    Inclusions,
}

fn exit_code(e: &Error) -> u8 {
    match e {
        Error::NotFreeDistribution(_) | Error::Degenerate(_) => 2,
        _ => 1,
    }
}

fn fail(context: &str, e: Error) -> ExitCode {
    eprintln!("error: {context}: {e}");
    ExitCode::from(exit_code(&e))
}

fn analyze(file: &str, format: Format) -> ExitCode {
    let text = match std::fs::read_to_string(file) {
        Ok(t) => t,
        Err(e) => {
            eprintln!("error: cannot read {file}: {e}");
            return ExitCode::from(1);
        }
    };
    match analyze_text(&text) {
        Ok(r) => {
            match format {
                Format::Json => println!("{}", serde_json::to_string_pretty(&r).expect("report serializes")),
                Format::Text => print!("{}", r.to_text()),
            }
            ExitCode::SUCCESS
        }
        Err(e) => fail(file, e),
    }
}

fn algebra_check(l: usize) -> ExitCode {
    if !(3..=ALGEBRA_CHECK_MAX_L).contains(&l) {
        eprintln!("error: algebra-check runs for 3 ≤ l ≤ {ALGEBRA_CHECK_MAX_L}, got {l}");
        return ExitCode::from(1);
    }
    match battery(l) {
        Ok(checks) => {
            let mut ok = true;
            for c in &checks {
                ok &= c.passed;
                let mark = if c.passed { "PASS" } else { "FAIL" };
                if c.detail.is_empty() {
                    println!("{mark}  {}", c.name);
                } else {
                    println!("{mark}  {}  ({})", c.name, c.detail);
                }
            }
            println!("{} of {} checks passed", checks.iter().filter(|c| c.passed).count(), checks.len());
            if ok {
                ExitCode::SUCCESS
            } else {
                ExitCode::from(1)
            }
        }
        Err(e) => fail("algebra-check", e),
    }
}

fn parse_range(s: &str) -> Result<(i32, i32), String> {
    let (a, b) = s.split_once("..").ok_or_else(|| format!("expected a range a..b, got {s:?}"))?;
    let a: i32 = a.trim().parse().map_err(|_| format!("bad range start {a:?}"))?;
    let b: i32 = b.trim().parse().map_err(|_| format!("bad range end {b:?}"))?;
    if a > b {
        return Err(format!("empty range {s:?}"));
    }
    Ok((a, b))
}

fn cohomology(l: usize, k: usize, h: &str) -> ExitCode {
    if !(3..=COHOMOLOGY_MAX_L).contains(&l) {
        eprintln!("error: cohomology runs for 3 ≤ l ≤ {COHOMOLOGY_MAX_L}, got {l}");
        return ExitCode::from(1);
    }
    if !(1..=2).contains(&k) {
        eprintln!("error: --k must be 1 or 2, got {k}");
        return ExitCode::from(1);
    }
    let (a, b) = match parse_range(h) {
        Ok(r) => r,
        Err(m) => {
            eprintln!("error: {m}");
            return ExitCode::from(1);
        }
    };
    match harmonic_scan(l, k, a..=b) {
        Ok(rows) => {
            println!("{}", serde_json::json!({ "l": l, "k": k, "dimensions": rows }));
            ExitCode::SUCCESS
        }
        Err(e) => fail("cohomology", e),
    }
}

#[derive(Deserialize)]
struct VectorInput {
    v: BTreeMap<String, String>,
}

/// Reads `{"v": {"1": "…", "[2,3]": "…"}}` into frame coordinates.
fn parse_vector(l: usize, json: &str) -> Result<TangentVector, Error> {
    let input: VectorInput =
        serde_json::from_str(json).map_err(|e| Error::Parse { line: e.line(), col: e.column(), msg: e.to_string() })?;
    let chart = Chart::new(l)?;
    let mut v = TangentVector::zero(l);
    for (key, value) in &input.v {
        let p = parse_expression(value, chart)?;
        let x: Scalar = p
            .as_constant()
            .ok_or_else(|| Error::InvalidArgument(format!("component {key} is not a constant: {value}")))?;
        let key = key.trim();
        let bad = || Error::InvalidArgument(format!("bad component name {key:?}; use \"i\" or \"[j,k]\""));
        if let Some(inner) = key.strip_prefix('[').and_then(|k| k.strip_suffix(']')) {
            let (j, k) = inner.split_once(',').ok_or_else(bad)?;
            let j: usize = j.trim().parse().map_err(|_| bad())?;
            let k: usize = k.trim().parse().map_err(|_| bad())?;
            if j == 0 || k == 0 || j > l || k > l || j == k {
                return Err(bad());
            }
            let (lo, hi, s) = if j < k { (j, k, 1) } else { (k, j, -1) };
            v.pairs[pair_pos(l, lo - 1, hi - 1)] = &x * &Scalar::from_int(s);
        } else {
            let i: usize = key.parse().map_err(|_| bad())?;
            if i == 0 || i > l {
                return Err(bad());
            }
            v.singles[i - 1] = x;
        }
    }
    Ok(v)
}

fn spinor(l: usize, json: &str) -> ExitCode {
    if l < 2 {
        eprintln!("error: --l must be at least 2");
        return ExitCode::from(1);
    }
    let v = match parse_vector(l, json) {
        Ok(v) => v,
        Err(e) => return fail("vector", e),
    };
    let m = tangent_to_skew(&v);
    println!("skew matrix (indices 0..{l}):");
    for row in &m {
        let cells: Vec<String> = row.iter().map(|x| x.to_string()).collect();
        println!("  [{}]", cells.join(", "));
    }
    match (pfaffian(&m), null_cone_member(&v)) {
        (Ok(pf), Ok(null)) => {
            println!("pfaffian: {pf}");
            println!("null cone: {null}");
            ExitCode::SUCCESS
        }
        (Err(e), _) | (_, Err(e)) => fail("spinor", e),
    }
}

fn inclusions() -> ExitCode {
    for (n, row) in list_inclusions().iter().enumerate() {
        println!("({}) {}", n + 1, row.algebras);
        println!("    groups:   {}", row.groups);
        println!("    model:    {}", row.model);
        println!("    geometry: {}", row.geometry);
    }
    ExitCode::SUCCESS
}

fn main() -> ExitCode {
    // usage errors exit with 1; code 2 is reserved for geometric verdicts
    let cli = match Cli::try_parse() {
        Ok(c) => c,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match cli.command {
        Command::Analyze { file, format } => analyze(&file, format),
        Command::AlgebraCheck { l } => algebra_check(l),
        Command::Cohomology { l, k, h } => cohomology(l, k, &h),
        Command::Spinor { l, vector } => spinor(l, &vector),
        Command::Inclusions => inclusions(),
    }
}
