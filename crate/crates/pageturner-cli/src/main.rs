mod chart;

use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand, ValueEnum};
use serde_json::{json, Value};

use pageturner::complex::{
    self, beilinson_truncate, check_pages_against_oracle, is_levelwise_injective, levelwise_cofiber, page,
    spiral_sequence, weight_at_least, ChainMap, FilteredComplex, FilteredMap, Page,
};
use pageturner::cubical::{cubical_set_to_json, Budget, CubicalMap};
use pageturner::filtered_cubical::{self, pullback_comparison, successor, FilteredCubicalMap, FilteredCubicalSet};
use pageturner::hom::{cells_from_json, cofiber_preservation_check, default_probes, successor_hom};
use pageturner::linalg::Group;
use pageturner::rees::{
    gr_module, gr_rees, graded_module_hom, nu, rees_tower, semisynthetic_hom, Base, Module, ModuleSpec,
};
use pageturner::verify::{self, Size};
use pageturner::{Error, Result};

#[derive(Parser)]
#[command(name = "pageturner", version, about = "Successors of filtered objects and their spectral sequences")]
struct Cli {
    /// Candidate-assignment budget for enumerations (overrides PAGETURNER_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Clone, Copy, ValueEnum)]
enum Format {
    Json,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum ChartFormat {
    Svg,
    Ascii,
}

#[derive(Clone, Copy, ValueEnum)]
enum SuiteSize {
    Small,
    Full,
}

#[derive(Clone, Copy, ValueEnum)]
enum Show {
    Gr,
    Tower,
    Hom,
}

#[derive(Subcommand)]
enum Command {
    /// The successor of a filtered cubical set, through a dimension.
    Successor {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Compares the successor of a homotopy pullback with the pullback of successors.
    PullbackCheck {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long)]
        z: PathBuf,
        /// Map X → Z; defaults to the identity when X = Z, or the map to a one-point Z.
        #[arg(long)]
        f: Option<PathBuf>,
        #[arg(long)]
        g: Option<PathBuf>,
        #[arg(long, default_value_t = 2)]
        dim: usize,
    },
    /// Pages of the spectral sequence of a filtered complex.
    Pages {
        #[arg(long = "in")]
        input: PathBuf,
        /// Page range `a..b`, inclusive.
        #[arg(long, default_value = "1..3")]
        r: String,
        /// Also write an SVG chart of the pages.
        #[arg(long)]
        chart: Option<PathBuf>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
        /// Work with coefficients in Z/p.
        #[arg(long)]
        coeff: Option<i64>,
    },
    /// The long exact sequence linking π, π mod τ and the derived couple.
    Spiral {
        #[arg(long = "in")]
        input: PathBuf,
        /// `t0..t1,w0..w1`
        #[arg(long, default_value = "0..2,0..2")]
        range: String,
        #[arg(long)]
        coeff: Option<i64>,
    },
    /// Weight truncation τ_{≥w}.
    Truncate {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, allow_hyphen_values = true)]
        w: i32,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// The successor hom-set [X, sh^n Y]† from a cell-presented X.
    Hom {
        #[arg(long)]
        x: PathBuf,
        #[arg(long)]
        y: PathBuf,
        #[arg(long, default_value_t = 0, allow_hyphen_values = true)]
        shift: i32,
    },
    /// Lifts the connecting map of a cofiber sequence along τ and checks exactness on probes.
    CofiberCheck {
        /// `{"p": cells, "q": cells, "f": map}`
        #[arg(long)]
        seq: PathBuf,
        /// A list of cell presentations; defaults to spheres and their τ-cofibers near the origin.
        #[arg(long)]
        probes: Option<PathBuf>,
    },
    /// Rees towers of principal ideals and their associated graded.
    Rees {
        /// `Z` or `Z[x]/x^d`.
        #[arg(long, default_value = "Z")]
        ring: String,
        /// Generator of the ideal in Z; the ideal is (x) for truncated polynomials.
        #[arg(long, default_value_t = 2)]
        ideal: i64,
        #[arg(long, default_value_t = 4)]
        depth: usize,
        #[arg(long, value_enum, default_value_t = Show::Gr)]
        show: Show,
        /// Cyclic summands of the module for `--show hom`, 0 meaning a free summand.
        #[arg(long, value_delimiter = ',', default_value = "0")]
        module: Vec<i64>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Runs the seeded property suites.
    Verify {
        #[arg(long, default_value_t = 0)]
        seed: u64,
        #[arg(long, value_enum, default_value_t = SuiteSize::Small)]
        size: SuiteSize,
        /// Run one criterion only.
        #[arg(long)]
        criterion: Option<u8>,
        #[arg(long, value_enum, default_value_t = Format::Ascii)]
        format: Format,
    },
    /// Renders pages as a chart.
    Chart {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long, default_value = "1..3")]
        r: String,
        #[arg(long, value_enum, default_value_t = ChartFormat::Ascii)]
        format: ChartFormat,
        #[arg(long)]
        out: Option<PathBuf>,
        #[arg(long)]
        coeff: Option<i64>,
    },
}

/// What a command produced: text for stdout and the exit status.
struct Output {
    text: String,
    code: i32,
}

impl Output {
    fn ok(text: String) -> Output {
        Output { text, code: 0 }
    }

    fn json(v: &Value) -> Output {
        Output::ok(pretty(v))
    }
}

fn pretty(v: &Value) -> String {
    serde_json::to_string_pretty(v).expect("values serialize") + "\n"
}

fn read(path: &Path) -> Result<String> {
    fs::read_to_string(path).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn write(path: &Path, text: &str) -> Result<()> {
    fs::write(path, text).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn read_json(path: &Path) -> Result<Value> {
    serde_json::from_str(&read(path)?).map_err(|e| Error::input(format!("{}: {e}", path.display())))
}

fn parse_range(s: &str) -> Result<(i32, i32)> {
    let bad = || Error::input(format!("range '{s}' must look like a..b with a ≤ b"));
    let (a, b) = s.split_once("..").ok_or_else(bad)?;
    let a: i32 = a.trim().parse().map_err(|_| bad())?;
    let b: i32 = b.trim().parse().map_err(|_| bad())?;
    if a > b {
        return Err(bad());
    }
    Ok((a, b))
}

fn page_range(s: &str) -> Result<(usize, usize)> {
    let (a, b) = parse_range(s)?;
    if a < 1 || b > 20 {
        return Err(Error::input("pages are numbered from 1 and at most 20 are computed"));
    }
    Ok((a as usize, b as usize))
}

fn filtered_complex(path: &Path, coeff: Option<i64>) -> Result<FilteredComplex> {
    let x = complex::filtered_from_json(&read(path)?)?;
    match coeff {
        None => Ok(x),
        Some(p) if p >= 2 => {
            // X ⊗ Z/p as the levelwise cone of p: X → X
            let times_p = FilteredMap::from_fn(&x, &x, |m| ChainMap::identity(x.level(m)).scale(p));
            levelwise_cofiber(&times_p, &x, &x)
        }
        Some(p) => Err(Error::input(format!("coefficient modulus {p} must be at least 2"))),
    }
}

fn filtered_cubical(path: &Path) -> Result<FilteredCubicalSet> {
    filtered_cubical::filtered_from_json(&read_json(path)?)
}

fn group_json(g: &Group) -> Value {
    json!({ "group": g.to_string(), "orders": g.orders() })
}

fn pages_of(x: &FilteredComplex, (r0, r1): (usize, usize)) -> Result<Vec<Page>> {
    (r0..=r1).map(|r| page(x, r)).collect()
}

fn page_json(p: &Page) -> Value {
    let entries: Vec<Value> =
        p.e.iter()
            .filter(|(_, g)| !g.is_trivial())
            .map(|(&(s, t), g)| json!({ "s": s, "t": t, "group": g.to_string(), "orders": g.orders() }))
            .collect();
    let r = p.r as i32;
    let differentials: Vec<Value> =
        p.d.iter()
            .filter(|(_, d)| !d.is_zero())
            .map(|(&(s, t), _)| json!({ "from": [s, t], "to": [s - r, t - 1] }))
            .collect();
    json!({ "r": p.r, "provenance": p.provenance, "entries": entries, "nonzero_differentials": differentials })
}

fn to_terminal(x: &FilteredCubicalSet, z: &FilteredCubicalSet) -> Result<FilteredCubicalMap> {
    let lo = x.lo();
    let hi = x.hi().max(z.hi()).max(lo);
    let maps = (lo..=hi).map(|m| CubicalMap::to_point(x.level(m))).collect();
    FilteredCubicalMap::new(x, z, lo, maps)
}

fn default_leg(x: &FilteredCubicalSet, z: &FilteredCubicalSet, which: &str) -> Result<FilteredCubicalMap> {
    if x == z {
        return Ok(FilteredCubicalMap::identity(z));
    }
    let point_like = (z.lo()..=z.hi()).all(|m| z.level(m).counts() == [1]);
    if point_like && !z.is_empty() && z.lo() <= x.lo() {
        return to_terminal(x, z);
    }
    Err(Error::input(format!("--{which} is required unless its source equals Z or Z is a point")))
}

fn leg(
    path: &Option<PathBuf>,
    x: &FilteredCubicalSet,
    z: &FilteredCubicalSet,
    which: &str,
) -> Result<FilteredCubicalMap> {
    match path {
        Some(p) => filtered_cubical::filtered_map_from_json(x, z, &read_json(p)?),
        None => default_leg(x, z, which),
    }
}

fn parse_ring(ring: &str, ideal: i64) -> Result<Base> {
    let r = ring.replace(' ', "");
    if r.eq_ignore_ascii_case("z") {
        let base = Base::integers(ideal);
        base.validate()?;
        return Ok(base);
    }
    let d = r
        .strip_prefix("Z[x]/x^")
        .or_else(|| r.strip_prefix("Z[x]/(x^").and_then(|s| s.strip_suffix(')')))
        .and_then(|d| d.parse().ok())
        .ok_or_else(|| Error::input(format!("ring '{ring}' must be Z or Z[x]/x^d")))?;
    Base::truncated(d)
}

fn table(header: &[&str], rows: &[Vec<String>]) -> String {
    let widths: Vec<usize> = (0..header.len())
        .map(|i| rows.iter().map(|r| r[i].chars().count()).chain([header[i].chars().count()]).max().unwrap_or(0))
        .collect();
    let line = |cells: Vec<String>| {
        let padded: Vec<String> = cells.iter().zip(&widths).map(|(c, &w)| format!("{c:<w$}")).collect();
        padded.join("  ").trim_end().to_string() + "\n"
    };
    let mut out = line(header.iter().map(|s| s.to_string()).collect());
    out += &line(widths.iter().map(|&w| "-".repeat(w)).collect());
    for r in rows {
        out += &line(r.clone());
    }
    out
}

fn rees(base: &Base, depth: usize, show: Show, summands: Vec<i64>, format: Format) -> Result<Output> {
    let tower = rees_tower(base, depth)?;
    tower.check_multiplicative()?;
    let (header, rows, value): (Vec<&str>, Vec<Vec<String>>, Value) = match show {
        Show::Tower => {
            let rows: Vec<Vec<String>> = tower
                .lattices
                .iter()
                .take(depth + 1)
                .enumerate()
                .map(|(k, l)| {
                    let idx = Group::subquotient(base.rank(), &pageturner::linalg::Mat::identity(base.rank()), l);
                    vec![k.to_string(), format!("{:?}", l.to_nested()), idx.to_string()]
                })
                .collect();
            let v =
                json!(rows.iter().map(|r| json!({ "k": r[0], "basis": r[1], "quotient": r[2] })).collect::<Vec<_>>());
            (vec!["k", "basis of I^k", "R / I^k"], rows, v)
        }
        Show::Gr => {
            let gr = gr_rees(&tower);
            let rows: Vec<Vec<String>> = gr
                .grades
                .iter()
                .enumerate()
                .map(|(k, g)| {
                    let t =
                        gr.t.get(k)
                            .map_or("-".to_string(), |h| if h.is_iso() { "iso".into() } else { "not iso".into() });
                    vec![k.to_string(), g.to_string(), t]
                })
                .collect();
            let v = json!(rows.iter().map(|r| json!({ "grade": r[0], "group": r[1], "t": r[2] })).collect::<Vec<_>>());
            (vec!["grade", "I^k / I^(k+1)", "t"], rows, v)
        }
        Show::Hom => {
            let m = Module::new(base, &ModuleSpec { summands })?;
            let n = nu(&m, depth);
            let h = semisynthetic_hom(&n, &n)?.group;
            let g = gr_module(&n);
            let gh = graded_module_hom(&g, &g)?;
            let rows = vec![
                vec!["[ν M, ν M]†".to_string(), h.to_string()],
                vec!["Hom_gr(gr ν M, gr ν M)".to_string(), gh.to_string()],
                vec!["M".to_string(), m.as_group().to_string()],
            ];
            let v = json!({ "semisynthetic": group_json(&h), "graded": group_json(&gh) });
            (vec!["hom", "group"], rows, v)
        }
    };
    Ok(match format {
        Format::Json => Output::json(&json!({ "base": base.describe(), "depth": depth, "rows": value })),
        Format::Ascii => Output::ok(format!("{}, depth {depth}\n{}", base.describe(), table(&header, &rows))),
    })
}

fn run(cli: Cli) -> Result<Output> {
    let limit = cli.budget.unwrap_or_else(|| Budget::from_env().limit());
    if limit == 0 {
        return Err(Error::input("budget must be positive"));
    }
    let budget = || Budget::new(limit);
    match cli.command {
        Command::Successor { input, dim } => {
            let x = filtered_cubical(&input)?;
            let s = successor(&x, dim, &mut budget())?;
            Ok(Output::json(&json!({ "dim_limit": dim, "counts": s.set.counts(), "set": cubical_set_to_json(&s.set) })))
        }
        Command::PullbackCheck { x, y, z, f, g, dim } => {
            let (x, y, z) = (filtered_cubical(&x)?, filtered_cubical(&y)?, filtered_cubical(&z)?);
            let f = leg(&f, &x, &z, "f")?;
            let g = leg(&g, &y, &z, "g")?;
            let w = pullback_comparison(&x, &y, &z, &f, &g, dim, &mut budget())?;
            Ok(Output::json(&json!({ "isomorphism": true, "witness": w })))
        }
        Command::Pages { input, r, chart, format, coeff } => {
            let x = filtered_complex(&input, coeff)?;
            let range = page_range(&r)?;
            let pages = pages_of(&x, range)?;
            let oracle = is_levelwise_injective(&x);
            if oracle {
                check_pages_against_oracle(&x, range.1)?;
            }
            if let Some(path) = chart {
                write(&path, &chart::svg(&pages))?;
            }
            Ok(match format {
                Format::Json => Output::json(
                    &json!({ "oracle_checked": oracle, "pages": pages.iter().map(page_json).collect::<Vec<_>>() }),
                ),
                Format::Ascii => Output::ok(chart::ascii(&pages)),
            })
        }
        Command::Spiral { input, range, coeff } => {
            let x = filtered_complex(&input, coeff)?;
            let (t, w) = range.split_once(',').ok_or_else(|| Error::input("--range must be t0..t1,w0..w1"))?;
            let report = spiral_sequence(&x, parse_range(t)?, parse_range(w)?)?;
            let code = if report.failures.is_empty() { 0 } else { 2 };
            Ok(Output { text: pretty(&serde_json::to_value(&report).expect("report serializes")), code })
        }
        Command::Truncate { input, w, out } => {
            let x = filtered_complex(&input, None)?;
            let t = beilinson_truncate(&x, w)?;
            let text = complex::filtered_to_json(&t.y) + "\n";
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    Ok(Output::json(&json!({
                        "w": w,
                        "cells_attached": t.cells_attached,
                        "weight_certified": weight_at_least(&t.y, w).holds,
                        "out": path.display().to_string(),
                    })))
                }
                None => Ok(Output::ok(text)),
            }
        }
        Command::Hom { x, y, shift } => {
            let xc = cells_from_json(&read(&x)?)?;
            let y = complex::filtered_from_json(&read(&y)?)?.shift(shift);
            let h = successor_hom(xc.complex(), &y)?;
            Ok(Output::json(&json!({ "shift": shift, "hom": group_json(&h.group) })))
        }
        Command::CofiberCheck { seq, probes } => {
            let v = read_json(&seq)?;
            let part = |k: &str| v.get(k).ok_or_else(|| Error::input(format!("sequence file needs '{k}'")));
            let p = cells_from_json(&part("p")?.to_string())?.complex().clone();
            let q = cells_from_json(&part("q")?.to_string())?.complex().clone();
            let f = complex::filtered_map_from_json(&p, &q, &part("f")?.to_string())?;
            let probes = match probes {
                Some(path) => match read_json(&path)? {
                    Value::Array(items) => items
                        .iter()
                        .map(|c| Ok(cells_from_json(&c.to_string())?.complex().clone()))
                        .collect::<Result<Vec<_>>>()?,
                    _ => return Err(Error::input("probes file must be a list of cell presentations")),
                },
                None => default_probes((-1, 2), (-1, 1)),
            };
            let report = cofiber_preservation_check(&f, &p, &q, &probes)?;
            Ok(Output::json(&json!({ "lifts": report.passed(), "report": report })))
        }
        Command::Rees { ring, ideal, depth, show, module, format } => {
            if depth == 0 || depth > 64 {
                return Err(Error::input("depth must lie in 1..=64"));
            }
            rees(&parse_ring(&ring, ideal)?, depth, show, module, format)
        }
        Command::Verify { seed, size, criterion, format } => {
            std::env::set_var("PAGETURNER_BUDGET", limit.to_string());
            let size = match size {
                SuiteSize::Small => Size::Small,
                SuiteSize::Full => Size::Full,
            };
            let outcomes = match criterion {
                Some(id) => {
                    let s =
                        verify::suite(id).ok_or_else(|| Error::input(format!("no criterion {id}; they are 1..=12")))?;
                    vec![verify::run_suite(s, seed, size)]
                }
                None => verify::run_all(seed, size),
            };
            let code = outcomes.iter().map(|o| o.exit_code).find(|&c| c != 0).unwrap_or(0);
            let passed = outcomes.iter().filter(|o| o.passed).count();
            let text = match format {
                Format::Json => {
                    // timings vary between runs and are left out of the JSON
                    let rows: Vec<Value> = outcomes
                        .iter()
                        .map(|o| json!({ "id": o.id, "name": o.name, "passed": o.passed, "instances": o.instances, "detail": o.detail }))
                        .collect();
                    pretty(&json!({ "seed": seed, "passed": passed, "total": outcomes.len(), "criteria": rows }))
                }
                Format::Ascii => {
                    let mut t: String = outcomes.iter().map(|o| o.line() + "\n").collect();
                    t += &format!("{passed}/{} criteria passed (seed {seed})\n", outcomes.len());
                    t
                }
            };
            Ok(Output { text, code })
        }
        Command::Chart { input, r, format, out, coeff } => {
            let x = filtered_complex(&input, coeff)?;
            let pages = pages_of(&x, page_range(&r)?)?;
            let text = match format {
                ChartFormat::Svg => chart::svg(&pages),
                ChartFormat::Ascii => chart::ascii(&pages),
            };
            match out {
                Some(path) => {
                    write(&path, &text)?;
                    Ok(Output::ok(String::new()))
                }
                None => Ok(Output::ok(text)),
            }
        }
    }
}

fn main() -> ExitCode {
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            // usage errors are input errors; 2 is reserved for violations
            return ExitCode::from(if e.use_stderr() { 1 } else { 0 });
        }
    };
    match run(cli) {
        Ok(out) => {
            print!("{}", out.text);
            ExitCode::from(out.code as u8)
        }
        Err(e) => {
            eprintln!("pageturner: {e}");
            ExitCode::from(e.exit_code() as u8)
        }
    }
}
