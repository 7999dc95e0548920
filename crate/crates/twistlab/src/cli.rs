//! Command-line front end. Text output is for reading, JSON is the stable
//! machine contract, CSV is for plotting.

use std::path::PathBuf;

use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

use crate::alexander::alexander_from_braid;
use crate::braids::{catalog_find, insert_twists, BraidWord, KnotSpec, TwistRegion, CATALOG};
use crate::cache::CacheHandle;
use crate::complex::{hfk_table_of_grid, Budgets, HfkOptions, TableMode};
use crate::error::{Error, Result};
use crate::grid::braid_to_grid;
use crate::stabilize::{
    build_sweep_report, records_csv, sweep_family, DetectorSet, StabilizationReportDump,
    SweepOptions, SweepReport, FULL_SIZE_THRESHOLD,
};

/// Grids at most this large default to complete tables in the `hfk` command.
const HFK_FULL_DEFAULT_LIMIT: usize = 9;
const HFK_DEFAULT_K: u32 = 3;

#[derive(Parser)]
#[command(
    name = "twistlab",
    version,
    about = "Knot Floer homology tables and Alexander polynomials for braid \
             closures, with stabilization detectors for twist families"
)]
#[derive(Debug)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
#[derive(Debug)]
enum Command {
    /// List the built-in knots
    Catalog {
        /// Machine-readable listing
        #[arg(long)]
        json: bool,
    },
    /// Compute one knot's homology table
    Hfk(HfkArgs),
    /// Sweep a twist family and test whether its invariants stabilize
    Stabilize(StabilizeArgs),
}

#[derive(Args)]
#[group(required = true, multiple = false)]
#[derive(Debug)]
struct KnotSource {
    /// Built-in knot name
    #[arg(long)]
    knot: Option<String>,
    /// JSON file with {name, strands, letters, region}
    #[arg(long)]
    file: Option<PathBuf>,
}

impl KnotSource {
    fn resolve(&self) -> Result<(String, BraidWord, TwistRegion)> {
        if let Some(name) = &self.knot {
            let k = catalog_find(name).ok_or_else(|| Error::UnknownKnot(name.clone()))?;
            Ok((k.name.to_string(), k.word(), k.region))
        } else {
            let path = self.file.as_ref().expect("clap requires one source");
            let spec = KnotSpec::load(path)?;
            let word = spec.word()?;
            Ok((spec.name.clone(), word, spec.region))
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Format {
    Text,
    Json,
    Csv,
}

#[derive(Args)]
#[derive(Debug)]
struct HfkArgs {
    #[command(flatten)]
    source: KnotSource,
    /// Full twists to insert before computing
    #[arg(long, default_value_t = 0)]
    twists: u32,
    /// Twist region as FIRST,WIDTH (default: the knot's own region)
    #[arg(long, value_parser = parse_region)]
    region: Option<TwistRegion>,
    /// Compute only the top K Alexander levels
    #[arg(long, value_parser = clap::value_parser!(u32).range(1..), conflicts_with = "full")]
    k: Option<u32>,
    /// Force the complete table regardless of grid size
    #[arg(long)]
    full: bool,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
    /// Print the grid diagram first
    #[arg(long)]
    show_grid: bool,
    /// Cap on retained grid states
    #[arg(long)]
    max_states: Option<u64>,
    /// Cap on nonzero boundary entries
    #[arg(long)]
    max_entries: Option<u64>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
enum Mode {
    /// Homology profiles and both polynomial ends
    All,
    /// Homology profiles only
    Hfk,
    /// Top polynomial coefficients only (no homology computed)
    DeltaTop,
    /// Bottom polynomial coefficients only (no homology computed)
    DeltaBottom,
}

#[derive(Args)]
#[derive(Debug)]
struct StabilizeArgs {
    #[command(flatten)]
    source: KnotSource,
    /// Twist region as FIRST,WIDTH (default: the knot's own region)
    #[arg(long, value_parser = parse_region, conflicts_with = "strands")]
    region: Option<TwistRegion>,
    /// Shorthand for --region 1,N
    #[arg(long)]
    strands: Option<usize>,
    /// Twist range FROM..TO, inclusive
    #[arg(long, value_parser = parse_m_range)]
    m: (u32, u32),
    /// Detector window size; also the truncation depth of large tables
    #[arg(long, default_value_t = 3, value_parser = clap::value_parser!(u32).range(1..))]
    k: u32,
    #[arg(long, value_enum, default_value_t = Mode::All)]
    mode: Mode,
    /// Compute complete tables for grids up to this size
    #[arg(long, default_value_t = FULL_SIZE_THRESHOLD)]
    full_threshold: usize,
    #[arg(long)]
    max_states: Option<u64>,
    #[arg(long)]
    max_entries: Option<u64>,
    /// Do not read or write the record cache
    #[arg(long)]
    no_cache: bool,
    /// Cache directory (default: $TWISTLAB_CACHE, else the platform cache home)
    #[arg(long)]
    cache_dir: Option<PathBuf>,
    #[arg(long, value_enum, default_value_t = Format::Text)]
    format: Format,
}

fn parse_region(s: &str) -> std::result::Result<TwistRegion, String> {
    let (first, width) = s
        .split_once(',')
        .ok_or_else(|| format!("expected FIRST,WIDTH, got {s:?}"))?;
    let first = first
        .trim()
        .parse()
        .map_err(|_| format!("bad strand index {first:?}"))?;
    let width = width
        .trim()
        .parse()
        .map_err(|_| format!("bad width {width:?}"))?;
    Ok(TwistRegion::new(first, width))
}

fn parse_m_range(s: &str) -> std::result::Result<(u32, u32), String> {
    let (from, to) = s
        .split_once("..")
        .ok_or_else(|| format!("expected FROM..TO (inclusive), got {s:?}"))?;
    let from: u32 = from
        .trim()
        .parse()
        .map_err(|_| format!("bad twist count {from:?}"))?;
    let to: u32 = to
        .trim()
        .parse()
        .map_err(|_| format!("bad twist count {to:?}"))?;
    if from > to {
        return Err(format!("empty twist range {s:?}"));
    }
    Ok((from, to))
}

fn budgets_from(max_states: Option<u64>, max_entries: Option<u64>) -> Budgets {
    let defaults = Budgets::default();
    Budgets {
        max_states: max_states.unwrap_or(defaults.max_states),
        max_entries: max_entries.unwrap_or(defaults.max_entries),
    }
}

/// Parse arguments from the process environment and run. Returns the exit
/// code: 0 success (and, for stabilize, pattern found), 1 computational
/// failure, 3 sweep ran but no stable pattern. Usage errors exit 2 inside
/// clap.
pub fn run() -> i32 {
    let cli = Cli::parse();
    match dispatch(cli.command) {
        Ok(code) => code,
        Err(err) => {
            eprintln!("error: {err}");
            1
        }
    }
}

fn dispatch(command: Command) -> Result<i32> {
    match command {
        Command::Catalog { json } => cmd_catalog(json),
        Command::Hfk(args) => cmd_hfk(args),
        Command::Stabilize(args) => cmd_stabilize(args),
    }
}

// ---------------------------------------------------------------------------
// catalog
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct CatalogEntryDump {
    name: &'static str,
    strands: usize,
    letters: Vec<i32>,
    region: TwistRegion,
    summary: &'static str,
}

#[derive(Serialize)]
struct CatalogDump {
    schema: u32,
    knots: Vec<CatalogEntryDump>,
}

fn cmd_catalog(json: bool) -> Result<i32> {
    if json {
        let dump = CatalogDump {
            schema: 1,
            knots: CATALOG
                .iter()
                .map(|k| CatalogEntryDump {
                    name: k.name,
                    strands: k.strands,
                    letters: k.letters.to_vec(),
                    region: k.region,
                    summary: k.summary,
                })
                .collect(),
        };
        println!("{}", serde_json::to_string_pretty(&dump)?);
    } else {
        for k in CATALOG {
            let letters: Vec<String> = k.letters.iter().map(|l| l.to_string()).collect();
            println!(
                "{:<10} {} strands  region {},{}  [{}]  {}",
                k.name,
                k.strands,
                k.region.first_strand,
                k.region.width,
                letters.join(" "),
                k.summary
            );
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// hfk
// ---------------------------------------------------------------------------

#[derive(Serialize)]
struct HfkDimDump {
    a: i64,
    m_grading: i64,
    dim: u64,
}

#[derive(Serialize)]
struct HfkDump {
    schema: u32,
    knot: String,
    m: u32,
    #[serde(rename = "N")]
    grid_size: usize,
    truncated: bool,
    k_levels: Option<u32>,
    dims: Vec<HfkDimDump>,
    /// Homological extremes: top and bottom nonzero Alexander levels and the
    /// top nonzero Maslov grading.
    #[serde(rename = "R")]
    top: Option<i64>,
    #[serde(rename = "L")]
    bottom: Option<i64>,
    #[serde(rename = "B")]
    max_maslov: Option<i64>,
    genus: Option<i64>,
    /// Generator-level counterparts, exact even for truncated tables.
    #[serde(rename = "R_chain")]
    chain_top: i64,
    #[serde(rename = "L_chain")]
    chain_bottom: i64,
    #[serde(rename = "B_chain")]
    chain_max_maslov: i64,
    reported_floor: Option<i64>,
    state_count: u64,
}

fn cmd_hfk(args: HfkArgs) -> Result<i32> {
    let (name, base, default_region) = args.source.resolve()?;
    let region = args.region.unwrap_or(default_region);
    let word = insert_twists(&base, &region, args.twists)?;
    let grid = braid_to_grid(&word)?;
    let mode = match (args.k, args.full) {
        (Some(k), _) => TableMode::Extremal { k_levels: k },
        (None, true) => TableMode::Full,
        (None, false) => {
            if grid.size() <= HFK_FULL_DEFAULT_LIMIT {
                TableMode::Full
            } else {
                TableMode::Extremal {
                    k_levels: HFK_DEFAULT_K,
                }
            }
        }
    };
    let options = HfkOptions {
        mode,
        budgets: budgets_from(args.max_states, args.max_entries),
    };
    if args.show_grid && args.format == Format::Text {
        print!("{}", grid.render());
        println!();
    }
    let table = hfk_table_of_grid(&grid, &options)?;
    match args.format {
        Format::Json => {
            let dims = table
                .levels_descending()
                .into_iter()
                .flat_map(|a| {
                    table
                        .level_entries(a)
                        .into_iter()
                        .map(move |(m, d)| HfkDimDump {
                            a,
                            m_grading: m,
                            dim: d,
                        })
                })
                .collect();
            let dump = HfkDump {
                schema: 1,
                knot: name,
                m: args.twists,
                grid_size: table.grid_size,
                truncated: table.truncated,
                k_levels: table.k_levels,
                dims,
                top: table.top_level(),
                bottom: table.bottom_level(),
                max_maslov: table.max_maslov(),
                genus: table.genus(),
                chain_top: table.chain_top,
                chain_bottom: table.chain_bottom,
                chain_max_maslov: table.chain_max_maslov,
                reported_floor: table.reported_floor,
                state_count: table.state_count,
            };
            println!("{}", serde_json::to_string_pretty(&dump)?);
        }
        Format::Csv => {
            println!("a,m,dim");
            for a in table.levels_descending() {
                for (m, d) in table.level_entries(a) {
                    println!("{a},{m},{d}");
                }
            }
        }
        Format::Text => {
            let delta = alexander_from_braid(&word)?;
            println!(
                "{} (m = {}): grid size {}, {}",
                name,
                args.twists,
                table.grid_size,
                if table.truncated {
                    format!(
                        "top {} levels (floor A = {})",
                        table.k_levels.unwrap_or(0),
                        table.reported_floor.unwrap_or(0)
                    )
                } else {
                    "full table".to_string()
                }
            );
            println!("Delta = {delta}");
            println!();
            println!("{:>5}  {:>5}  {:>6}", "A", "M", "dim");
            for a in table.levels_descending() {
                for (m, d) in table.level_entries(a) {
                    println!("{a:>5}  {m:>5}  {d:>6}");
                }
            }
            println!();
            let cell = |v: Option<i64>| v.map_or("?".to_string(), |x| x.to_string());
            println!(
                "R = {}  L = {}  B = {}  genus = {}  total dim = {}",
                cell(table.top_level()),
                cell(table.bottom_level()),
                cell(table.max_maslov()),
                cell(table.genus()),
                table.total_dim()
            );
            println!(
                "chain extremes: A in [{}, {}], max M = {}",
                table.chain_bottom, table.chain_top, table.chain_max_maslov
            );
            println!("states: {}", table.state_count);
        }
    }
    Ok(0)
}

// ---------------------------------------------------------------------------
// stabilize
// ---------------------------------------------------------------------------

fn cmd_stabilize(args: StabilizeArgs) -> Result<i32> {
    let (name, base, default_region) = args.source.resolve()?;
    let region = match (args.region, args.strands) {
        (Some(r), _) => r,
        (None, Some(n)) => TwistRegion::new(1, n),
        (None, None) => default_region,
    };
    let detectors = match args.mode {
        Mode::All => DetectorSet::all(),
        Mode::Hfk => DetectorSet {
            hfk: true,
            delta_top: false,
            delta_bottom: false,
        },
        Mode::DeltaTop => DetectorSet {
            hfk: false,
            delta_top: true,
            delta_bottom: false,
        },
        Mode::DeltaBottom => DetectorSet {
            hfk: false,
            delta_top: false,
            delta_bottom: true,
        },
    };
    let compute_hfk = detectors.hfk;
    let cache = if args.no_cache || !compute_hfk {
        None
    } else {
        Some(match args.cache_dir {
            Some(dir) => CacheHandle::new(dir),
            None => CacheHandle::default_location(),
        })
    };
    let options = SweepOptions {
        k_levels: args.k,
        budgets: budgets_from(args.max_states, args.max_entries),
        full_size_threshold: args.full_threshold,
        compute_hfk,
        cache,
    };
    let (m_from, m_to) = args.m;
    let sweep = sweep_family(&base, &region, m_from, m_to, &options)?;
    let report = build_sweep_report(&name, &sweep, detectors)?;
    match args.format {
        Format::Json => println!("{}", serde_json::to_string_pretty(&report)?),
        Format::Csv => print!("{}", records_csv(&report)),
        Format::Text => print_sweep_text(&report),
    }
    Ok(if report.stable { 0 } else { 3 })
}

fn print_sweep_text(report: &SweepReport) {
    println!(
        "family: {}  region {},{}  m = {}..{}  k = {}",
        report.knot,
        report.region.first_strand,
        report.region.width,
        report.ms.first().copied().unwrap_or(0),
        report.ms.last().copied().unwrap_or(0),
        report.k_levels
    );
    println!();
    println!(
        "{:>4}  {:>4}  {:>10}  {:>4}  {:>4}  {:>5}  {:>7}  notes",
        "m", "N", "deg", "R", "L", "genus", "dim"
    );
    for r in &report.records {
        let deg = match (r.min_deg, r.max_deg) {
            (Some(lo), Some(hi)) => format!("{lo}..{hi}"),
            _ => "-".to_string(),
        };
        let cell = |v: Option<i64>| v.map_or("-".to_string(), |x| x.to_string());
        let dim = r.total_dim.map_or("-".to_string(), |d| d.to_string());
        let note = if let Some(err) = &r.hfk_error {
            err.clone()
        } else if r.truncated == Some(true) {
            "truncated".to_string()
        } else {
            String::new()
        };
        println!(
            "{:>4}  {:>4}  {:>10}  {:>4}  {:>4}  {:>5}  {:>7}  {}",
            r.m,
            r.grid_size,
            deg,
            cell(r.top),
            cell(r.bottom),
            cell(r.genus),
            dim,
            note
        );
    }
    println!();
    for d in &report.reports {
        print_detector_text(d);
    }
    let s = &report.slopes;
    let cell = |v: &Option<String>| v.clone().unwrap_or_else(|| "-".to_string());
    println!(
        "slopes: genus {}  R {}  delta top {}  delta bottom {}",
        cell(&s.slope_genus),
        cell(&s.slope_r),
        cell(&s.delta_top_slope),
        cell(&s.delta_bottom_slope)
    );
    if let Some(r) = &s.r {
        println!(
            "r = {}{}",
            r,
            if s.r_is_integer == Some(true) {
                " (integer)"
            } else {
                ""
            }
        );
    }
    println!();
    if report.stable {
        println!("verdict: stabilization observed");
    } else {
        println!("verdict: no stabilization observed in this range");
    }
}

fn print_detector_text(d: &StabilizationReportDump) {
    let kind = match d.kind {
        crate::stabilize::DetectorKind::DeltaTop => "delta-top",
        crate::stabilize::DetectorKind::DeltaBottom => "delta-bottom",
        crate::stabilize::DetectorKind::HfkTop => "hfk-top",
    };
    if !d.stable {
        let mut line = format!("{kind}: not stable in range (run of {})", d.confirming);
        if !d.skipped_ms.is_empty() {
            let _ = write_skips(&mut line, &d.skipped_ms);
        }
        println!("{line}");
        return;
    }
    let mut line = format!(
        "{kind}: stable from m = {} ({} confirming), step {:+}",
        d.onset.unwrap_or(0),
        d.confirming,
        d.shift_per_step.unwrap_or(0)
    );
    if !d.window.is_empty() {
        line.push_str(&format!(", window [{}]", d.window.join(", ")));
    }
    if let Some(profile) = &d.stable_profile {
        let levels: Vec<String> = profile
            .iter()
            .enumerate()
            .map(|(i, level)| {
                let entries: Vec<String> = level
                    .iter()
                    .map(|e| format!("M{:+}:{}", e.maslov_offset, e.dim))
                    .collect();
                format!("top-{i} [{}]", entries.join(" "))
            })
            .collect();
        line.push_str(&format!(", profile {}", levels.join("; ")));
    }
    if !d.maslov_offsets.is_empty() {
        let offs: Vec<String> = d.maslov_offsets.iter().map(|o| format!("{o:+}")).collect();
        line.push_str(&format!(", maslov offsets [{}]", offs.join(", ")));
    }
    if let Some(r) = &d.r {
        line.push_str(&format!(
            ", r = {}{}",
            r,
            if d.r_is_integer == Some(true) {
                " (integer)"
            } else {
                ""
            }
        ));
    }
    if !d.skipped_ms.is_empty() {
        let _ = write_skips(&mut line, &d.skipped_ms);
    }
    println!("{line}");
}

fn write_skips(line: &mut String, skipped: &[u32]) -> std::fmt::Result {
    use std::fmt::Write;
    let ms: Vec<String> = skipped.iter().map(|m| m.to_string()).collect();
    write!(line, ", skipped narrow m = [{}]", ms.join(", "))
}
