//! Command line front end: generate the named families, count incidences,
//! report rich-line / Beck / sum-product statistics, run specialization
//! trials, and verify the generators against their exact expected counts.
//!
//! Exit codes: 0 success, 1 a verification found a mismatch (verify,
//! specialize, dof), 2 bad input or usage.

use std::error::Error;
use std::path::PathBuf;
use std::process::ExitCode;
use std::sync::Arc;

use clap::{Parser, Subcommand};
use serde::Serialize;

use incidence_core::config::{parse_config, read_config, render_config, ParsedConfig};
use incidence_core::curves::{count_curve_incidences, curve_bound_ratio, dof_check, Curve};
use incidence_core::extremal::{expected_incidences, generate, FamilyId, Generated};
use incidence_core::incidence::{beck_report, count_incidences, count_incidences_with_threads, rich_lines};
use incidence_core::specialize::invariance_check;
use incidence_core::sumproduct::es_report;
use incidence_core::{parse_element, Tower};

#[derive(Parser)]
#[command(name = "incidence", version, about = "Exact incidence geometry over field towers")]
struct Cli {
    /// Seed for every random choice the command makes.
    #[arg(long, global = true, default_value_t = 0)]
    seed: u64,

    /// Also write the report as JSON to this path ("-" for stdout).
    #[arg(long, global = true, value_name = "PATH")]
    json: Option<PathBuf>,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Generate a family and write it as a configuration file.
    Gen {
        /// st_grid, point_heavy, line_heavy, square_grid,
        /// arithmetic_progression, or geometric_progression.
        #[arg(long)]
        family: String,
        /// Family size N >= 1.
        #[arg(long)]
        n: u32,
        /// Ratio for geometric_progression, e.g. "2" or "-3/2".
        #[arg(long, allow_hyphen_values = true)]
        ratio: Option<String>,
        /// Output path; stdout when omitted.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Count incidences of a configuration exactly.
    Count {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Worker threads; INCIDENCE_THREADS, then the machine, decides
        /// when omitted.
        #[arg(long)]
        threads: Option<usize>,
    },
    /// List the lines carrying at least K configuration points.
    Rich {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        /// Richness threshold, at least 2.
        #[arg(long)]
        k: u64,
    },
    /// Connecting-line extremes of the configuration's point set.
    Beck {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
    /// Sum-set / product-set report for each set in the file.
    Sumprod {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
    },
    /// Check that generic specialization preserves the incidence matrix.
    /// Exits 1 if any trial mismatches.
    Specialize {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long, default_value_t = 100)]
        trials: u32,
    },
    /// Verify the degrees-of-freedom hypothesis (k, s) for the file's
    /// curves (its lines when no curves are given) against its points.
    /// Exits 1 if violations are found.
    Dof {
        #[arg(long = "in", value_name = "PATH")]
        input: PathBuf,
        #[arg(long)]
        k: u32,
        #[arg(long)]
        s: u32,
        /// Epsilon in the reported bound exponent.
        #[arg(long, default_value_t = 0.0)]
        eps: f64,
    },
    /// Generate, count, and compare with the exact expected incidences
    /// for N = 1..=NMAX. Exits 1 on any mismatch.
    Verify {
        /// st_grid, point_heavy, or line_heavy.
        #[arg(long)]
        family: String,
        #[arg(long)]
        nmax: u32,
    },
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}

fn run(cli: Cli) -> Result<ExitCode, Box<dyn Error>> {
    let json_to = cli.json.clone();
    match cli.cmd {
        Cmd::Gen {
            family,
            n,
            ratio,
            out,
        } => {
            let family: FamilyId = family.parse()?;
            let ratio = match ratio {
                Some(text) => Some(
                    parse_element(&text, &Tower::rationals())?
                        .to_rational()
                        .expect("rationals tower element"),
                ),
                None => None,
            };
            let file = match generate(family, n, &Tower::rationals(), ratio.as_ref())? {
                Generated::Configuration(cfg) => render_config(&cfg, &[], &[]),
                Generated::Set(set) => {
                    let empty =
                        incidence_core::geometry::Configuration::new(
                            Arc::clone(set.tower()),
                            vec![],
                            vec![],
                        )?;
                    render_config(&empty, &[], std::slice::from_ref(&set))
                }
            };
            match &out {
                Some(path) => {
                    incidence_core::config::write_config(path, &file)?;
                    println!(
                        "wrote {family} N={n}: {} points, {} lines, {} sets -> {}",
                        file.points.len(),
                        file.lines.len(),
                        file.sets.len(),
                        path.display()
                    );
                }
                None => print!("{}", serde_json::to_string_pretty(&file)? + "\n"),
            }
            emit_json(&json_to, &file)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Count { input, threads } => {
            let parsed = load(&input)?;
            let report = match resolve_threads(threads)? {
                Some(t) => count_incidences_with_threads(&parsed.configuration, t),
                None => count_incidences(&parsed.configuration),
            };
            println!("points: {}", report.m);
            println!("lines: {}", report.n);
            println!("incidences: {}", report.incidences);
            println!("st_bound: {}", sig10(report.st_bound));
            println!("st_ratio: {}", sig10(report.st_ratio));
            match report.main_term_ratio {
                Some(r) => println!("main_term_ratio: {}", sig10(r)),
                None => println!("main_term_ratio: undefined"),
            }
            emit_json(&json_to, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Rich { input, k } => {
            let parsed = load(&input)?;
            let report = rich_lines(&parsed.configuration, k)?;
            println!("threshold: {}", report.threshold);
            println!("rich_lines: {}", report.records.len());
            println!("ratio: {}", sig10(report.ratio));
            for r in &report.records {
                println!("  {}  richness {}", r.line, r.richness);
            }
            emit_json(&json_to, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Beck { input } => {
            let parsed = load(&input)?;
            let report = beck_report(parsed.configuration.points());
            println!("points: {}", report.m);
            println!("max_richness: {}", report.max_richness);
            println!("connecting_lines: {}", report.connecting_lines);
            emit_json(&json_to, &report)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Sumprod { input } => {
            let parsed = load(&input)?;
            if parsed.sets.is_empty() {
                return Err("config file has no sets".into());
            }
            let mut reports = Vec::with_capacity(parsed.sets.len());
            for (i, set) in parsed.sets.iter().enumerate() {
                let report = es_report(set)?;
                println!(
                    "set {i}: |A| = {}, |A+A| = {}, |A*A| = {}, exponent_ratio = {}",
                    report.size,
                    report.sum_size,
                    report.prod_size,
                    sig10(report.exponent_ratio)
                );
                reports.push(report);
            }
            emit_json(&json_to, &reports)?;
            Ok(ExitCode::SUCCESS)
        }
        Cmd::Specialize { input, trials } => {
            let parsed = load(&input)?;
            let report = invariance_check(&parsed.configuration, trials, cli.seed)?;
            println!("trials: {}", report.trials);
            println!("passes: {}", report.passes);
            for m in &report.mismatches {
                println!(
                    "  trial {} disagreed on {} point-line pairs",
                    m.trial,
                    m.pairs.len()
                );
            }
            emit_json(&json_to, &report)?;
            Ok(if report.all_passed() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Dof { input, k, s, eps } => {
            let parsed = load(&input)?;
            let curves: Vec<Curve> = if parsed.curves.is_empty() {
                parsed
                    .configuration
                    .lines()
                    .iter()
                    .map(Curve::from_line)
                    .collect()
            } else {
                parsed.curves.clone()
            };
            let points = parsed.configuration.points();
            let count = count_curve_incidences(points, &curves);
            let ratio = curve_bound_ratio(count, points.len(), curves.len(), k, eps)?;
            let violations = dof_check(points, &curves, k, s)?;
            println!("points: {}", points.len());
            println!("curves: {}", curves.len());
            println!("incidences: {count}");
            println!("bound_ratio: {}", sig10(ratio));
            println!("violations: {}", violations.len());
            for v in &violations {
                println!("  {v:?}");
            }
            #[derive(Serialize)]
            struct DofReport<'a> {
                points: usize,
                curves: usize,
                incidences: u64,
                bound_ratio: f64,
                violations: &'a [incidence_core::curves::DofViolation],
            }
            emit_json(
                &json_to,
                &DofReport {
                    points: points.len(),
                    curves: curves.len(),
                    incidences: count,
                    bound_ratio: ratio,
                    violations: &violations,
                },
            )?;
            Ok(if violations.is_empty() {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
        Cmd::Verify { family, nmax } => {
            let family: FamilyId = family.parse()?;
            if !family.is_incidence_family() {
                return Err(format!("{family} has no expected incidence count").into());
            }
            #[derive(Serialize)]
            struct VerifyRow {
                n: u32,
                points: usize,
                lines: usize,
                incidences: u64,
                expected: u64,
                matched: bool,
                st_ratio: f64,
                main_term_ratio: Option<f64>,
            }
            let mut rows = Vec::new();
            let mut all_match = true;
            println!("family: {family}");
            println!("{:>4} {:>8} {:>8} {:>12} {:>12}  match  {:>14} {:>16}", "N", "points", "lines", "incidences", "expected", "st_ratio", "main_term_ratio");
            for n in 1..=nmax.max(1) {
                let cfg = generate(family, n, &Tower::rationals(), None)?
                    .into_configuration()
                    .expect("incidence families are configurations");
                let report = count_incidences(&cfg);
                let expected = expected_incidences(family, n)?;
                let matched = report.incidences == expected;
                all_match &= matched;
                println!(
                    "{:>4} {:>8} {:>8} {:>12} {:>12}  {}  {:>14} {:>16}",
                    n,
                    report.m,
                    report.n,
                    report.incidences,
                    expected,
                    if matched { "ok   " } else { "FAIL " },
                    sig10(report.st_ratio),
                    report
                        .main_term_ratio
                        .map(sig10)
                        .unwrap_or_else(|| "undefined".into()),
                );
                rows.push(VerifyRow {
                    n,
                    points: report.m,
                    lines: report.n,
                    incidences: report.incidences,
                    expected,
                    matched,
                    st_ratio: report.st_ratio,
                    main_term_ratio: report.main_term_ratio,
                });
            }
            emit_json(&json_to, &rows)?;
            Ok(if all_match {
                ExitCode::SUCCESS
            } else {
                ExitCode::FAILURE
            })
        }
    }
}

fn load(path: &PathBuf) -> Result<ParsedConfig, Box<dyn Error>> {
    let file = read_config(path).map_err(|e| format!("{}: {e}", path.display()))?;
    Ok(parse_config(&file)?)
}

/// Explicit flag, then the INCIDENCE_THREADS variable, then free choice.
fn resolve_threads(flag: Option<usize>) -> Result<Option<usize>, Box<dyn Error>> {
    let t = match flag {
        Some(t) => Some(t),
        None => match std::env::var("INCIDENCE_THREADS") {
            Ok(v) => Some(v.parse::<usize>().map_err(|_| {
                format!("INCIDENCE_THREADS must be a positive integer, got {v:?}")
            })?),
            Err(_) => None,
        },
    };
    if t == Some(0) {
        return Err("thread count must be at least 1".into());
    }
    Ok(t)
}

fn emit_json<T: Serialize>(dest: &Option<PathBuf>, value: &T) -> Result<(), Box<dyn Error>> {
    let Some(path) = dest else { return Ok(()) };
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    if path.as_os_str() == "-" {
        print!("{text}");
    } else {
        std::fs::write(path, text)?;
    }
    Ok(())
}

/// Ten significant digits, plain notation.
fn sig10(x: f64) -> String {
    if x == 0.0 || !x.is_finite() {
        return format!("{x}");
    }
    let mag = x.abs().log10().floor() as i32;
    let decimals = (9 - mag).max(0) as usize;
    format!("{x:.decimals$}")
}
