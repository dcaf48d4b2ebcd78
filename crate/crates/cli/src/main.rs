use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use nilper::exactmath::quad::{common_field, rational_vector, QuadExt};
use nilper::exactmath::rational::{parse_rational, Rational};
use nilper::fixture::{load_fixture, parse_fixture, Fixture, SHIPPED};
use nilper::infra::classify_infra;
use nilper::nil::classify_nil;
use nilper::orbit::{Classification, OrbitResult};
use nilper::sweep::{density, format_point, scan, ScanOptions};
use nilper::torus::{classify, cover_transfer, TorusPoint};
use nilper::Error;
use serde_json::json;

const EXIT_ASSERTION: u8 = 1;
const EXIT_BAD_FIXTURE: u8 = 2;
const EXIT_UNSUPPORTED: u8 = 3;

#[derive(Parser)]
#[command(name = "nilper", version, about = "Periodic points of affine maps on tori, flat infra-nilmanifolds and class-2 nilmanifolds")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Classify one point and print its orbit.
    Classify {
        /// Fixture file, or the name of a shipped fixture.
        #[arg(long)]
        fixture: String,
        /// Comma-separated coordinates: "p/q" or "a+b*sqrt(d)".
        #[arg(long, allow_hyphen_values = true)]
        point: String,
        /// Endomorphism of a nil fixture (default: first by name).
        #[arg(long)]
        endo: Option<String>,
        /// Print the result as JSON.
        #[arg(long)]
        json: bool,
    },
    /// Classify every point with denominator up to --max-den.
    Scan {
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 9)]
        max_den: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        endo: Option<String>,
        /// Write the JSON report here instead of stdout.
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Check that periodic points meet every 1/m-cell for admissible m ≤ --max-den.
    Density {
        #[arg(long)]
        fixture: String,
        #[arg(long, default_value_t = 7)]
        max_den: u64,
        #[arg(long, default_value_t = 1)]
        workers: usize,
        #[arg(long)]
        endo: Option<String>,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// List shipped fixtures, optionally writing them to a directory.
    Fixtures {
        #[arg(long)]
        out: Option<PathBuf>,
    },
}

struct Failure {
    code: u8,
    message: String,
}

impl Failure {
    fn bad_fixture(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_BAD_FIXTURE, message: format!("invalid fixture: {e}") }
    }

    fn unsupported(e: impl std::fmt::Display) -> Self {
        Self { code: EXIT_UNSUPPORTED, message: format!("unsupported input: {e}") }
    }
}

type CliResult<T> = Result<T, Failure>;

fn open_fixture(name: &str) -> CliResult<Fixture> {
    let path = Path::new(name);
    if !path.exists() {
        if let Some((_, json)) = SHIPPED.iter().find(|(n, _)| *n == name) {
            return parse_fixture(json).map_err(Failure::bad_fixture);
        }
    }
    load_fixture(path).map_err(Failure::bad_fixture)
}

/// `"p/q"`, `"sqrt(d)"`, `"b*sqrt(d)"` or `"a+b*sqrt(d)"` (also with `-`).
fn parse_entry(s: &str) -> Result<QuadExt, Error> {
    let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
    let Some(at) = t.find("sqrt(") else {
        return Ok(QuadExt::rational(parse_rational(&t)?));
    };
    let bad = || Error::Parse { what: "quadratic number", input: s.to_string() };
    let d: i64 = t[at + 5..].strip_suffix(')').ok_or_else(bad)?.parse().map_err(|_| bad())?;
    let head = t[..at].strip_suffix('*').unwrap_or(&t[..at]);
    let split = head.char_indices().skip(1).filter(|&(_, c)| c == '+' || c == '-').map(|(i, _)| i).last();
    let (a, b) = match split {
        Some(i) => (&head[..i], &head[i..]),
        None => ("0", head),
    };
    let b = match b.trim_start_matches('+') {
        "" => "1",
        "-" => "-1",
        other => other,
    };
    QuadExt::new(parse_rational(a)?, parse_rational(b)?, d)
}

fn parse_point(s: &str, dim: usize) -> CliResult<Vec<QuadExt>> {
    let v = s.split(',').map(parse_entry).collect::<Result<Vec<_>, _>>().map_err(Failure::unsupported)?;
    if v.len() != dim {
        return Err(Failure::unsupported(format!("point has {} coordinates, fixture dimension is {dim}", v.len())));
    }
    common_field(&v).map_err(Failure::unsupported)?;
    Ok(v)
}

fn rational_point(v: &[QuadExt]) -> CliResult<Vec<Rational>> {
    rational_vector(v).ok_or_else(|| Failure::unsupported("orbits are classified exactly only at rational points"))
}

fn orbit_json<P>(orbit: &OrbitResult<P>, c: &Classification, coords: impl Fn(&P) -> Vec<String>) -> serde_json::Value {
    let orders: Vec<String> = c.relative_order_trace.iter().map(|o| o.to_string()).collect();
    let (tail_orders, cycle_orders) = orders.split_at(orbit.tail.len());
    json!({
        "verdict": c.verdict,
        "tail": orbit.tail.iter().zip(tail_orders).map(|(p, o)| json!({"point": coords(p), "relative_order": o})).collect::<Vec<_>>(),
        "cycle": orbit.cycle.iter().zip(cycle_orders).map(|(p, o)| json!({"point": coords(p), "relative_order": o})).collect::<Vec<_>>(),
    })
}

fn print_transcript(out: &serde_json::Value) {
    for part in ["tail", "cycle"] {
        for step in out[part].as_array().into_iter().flatten() {
            let pts: Vec<&str> = step["point"].as_array().into_iter().flatten().filter_map(|x| x.as_str()).collect();
            println!("  {part:<5} ({})  ord={}", pts.join(", "), step["relative_order"].as_str().unwrap_or("?"));
        }
    }
}

fn torus_coords(p: &TorusPoint) -> Vec<String> {
    format_point(p.coords())
}

fn cmd_classify(fixture: &str, point: &str, endo: Option<&str>, as_json: bool) -> CliResult<()> {
    let f = open_fixture(fixture)?;
    let x = parse_point(point, f.dim())?;
    let q = rational_point(&x)?;
    let mut out = match &f {
        Fixture::Torus(t) => {
            let (c, orbit) = classify(&t.map, &q).map_err(Failure::unsupported)?;
            orbit_json(&orbit, &c, torus_coords)
        }
        Fixture::Cover(t) => {
            let r = cover_transfer(&t.lattice, &t.map, &t.map, &q).map_err(Failure::unsupported)?;
            let (c, orbit) = classify(&t.map, &q).map_err(Failure::unsupported)?;
            let mut v = orbit_json(&orbit, &c, torus_coords);
            v["fiber"] = json!(r
                .fiber
                .iter()
                .map(|e| json!({"point": format_point(&e.ambient), "verdict": e.classification.verdict}))
                .collect::<Vec<_>>());
            v["transfer_holds"] = json!(r.holds());
            v
        }
        Fixture::Nil(n) => {
            let e = n.endo(endo).map_err(Failure::unsupported)?;
            let g = n.group.element(q.clone()).map_err(Failure::unsupported)?;
            let (c, orbit) = classify_nil(e, &n.lattice, &g).map_err(Failure::unsupported)?;
            orbit_json(&orbit, &c, |p| format_point(p.coords()))
        }
        Fixture::Infra(i) => {
            let r = classify_infra(&i.group, &i.endo, &q).map_err(Failure::unsupported)?;
            let mut v = orbit_json(&r.orbit, &r.classification, |p| format_point(p.coords()));
            v["covers"] = json!(r
                .covers
                .iter()
                .map(|c| json!({
                    "kind": c.kind,
                    "degree": c.degree.to_string(),
                    "holds": c.holds(),
                    "fiber": c.fiber.iter().map(|(w, v)| json!({"point": format_point(w.coords()), "verdict": v})).collect::<Vec<_>>(),
                }))
                .collect::<Vec<_>>());
            v
        }
    };
    out["fixture"] = json!(f.id());
    out["point"] = json!(format_point(&q));
    if as_json {
        println!("{}", serde_json::to_string_pretty(&out).expect("serializable"));
    } else {
        let v = &out["verdict"];
        let verdict = match v["verdict"].as_str() {
            Some("Periodic") => format!("Periodic period={}", v["period"]),
            _ => format!("EventuallyPeriodic preperiod={} period={}", v["preperiod"], v["period"]),
        };
        println!("{verdict}");
        print_transcript(&out);
    }
    Ok(())
}

fn write_output(out: Option<&Path>, text: &str) -> CliResult<()> {
    match out {
        Some(p) => std::fs::write(p, text)
            .map_err(|e| Failure { code: EXIT_UNSUPPORTED, message: format!("cannot write {}: {e}", p.display()) }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn cmd_scan(fixture: &str, max_den: u64, workers: usize, endo: Option<&str>, out: Option<&Path>) -> CliResult<()> {
    let f = open_fixture(fixture)?;
    let report = scan(&f, ScanOptions { max_den, workers }, endo).map_err(Failure::unsupported)?;
    write_output(out, &report.to_json())?;
    for a in &report.assertions {
        eprintln!("{:<32} {} ({} checked, {} failed)", a.name, if a.passed { "PASS" } else { "FAIL" }, a.checked, a.failures);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_ASSERTION, message: "assertion failures, see report".into() })
    }
}

fn cmd_density(fixture: &str, m_max: u64, workers: usize, endo: Option<&str>, out: Option<&Path>) -> CliResult<()> {
    let f = open_fixture(fixture)?;
    let report = density(&f, m_max, workers, endo).map_err(Failure::unsupported)?;
    write_output(out, &report.to_json())?;
    if report.per_empty {
        eprintln!("no periodic points: Per is empty");
    }
    for l in &report.levels {
        eprintln!("m={:<3} {}/{} cells hit", l.m, l.hit, l.cells);
    }
    if report.passed() {
        Ok(())
    } else {
        Err(Failure { code: EXIT_ASSERTION, message: "some cells contain no periodic point found".into() })
    }
}

fn cmd_fixtures(out: Option<&Path>) -> CliResult<()> {
    if let Some(dir) = out {
        std::fs::create_dir_all(dir)
            .map_err(|e| Failure { code: EXIT_UNSUPPORTED, message: format!("cannot create {}: {e}", dir.display()) })?;
    }
    for (name, json) in SHIPPED {
        let f = parse_fixture(json).map_err(Failure::bad_fixture)?;
        println!("{name:<18} {:<6} dim={} id={}", f.kind(), f.dim(), f.id());
        if let Some(dir) = out {
            let path = dir.join(format!("{name}.json"));
            std::fs::write(&path, json)
                .map_err(|e| Failure { code: EXIT_UNSUPPORTED, message: format!("cannot write {}: {e}", path.display()) })?;
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let result = match &cli.command {
        Command::Classify { fixture, point, endo, json } => cmd_classify(fixture, point, endo.as_deref(), *json),
        Command::Scan { fixture, max_den, workers, endo, out } => {
            cmd_scan(fixture, *max_den, *workers, endo.as_deref(), out.as_deref())
        }
        Command::Density { fixture, max_den, workers, endo, out } => {
            cmd_density(fixture, *max_den, *workers, endo.as_deref(), out.as_deref())
        }
        Command::Fixtures { out } => cmd_fixtures(out.as_deref()),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
