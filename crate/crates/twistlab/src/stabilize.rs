//! Twist-family sweeps and detectors for their eventual regular behavior.
//!
//! A sweep computes, for each twist count m, the Alexander polynomial of the
//! twisted closure, the exact generator-level Alexander extremes, and (when
//! budgets allow) a homology table. The detectors then look for the pattern
//! such families settle into: coefficient windows at either end of the
//! polynomial that stop changing while their anchor degree advances linearly,
//! and top homology profiles that repeat verbatim up to a Maslov shift.

use std::fmt::Write as _;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::Ratio;
use serde::{Deserialize, Serialize};

use crate::alexander::{alexander_from_braid, alexander_from_hfk, LaurentPoly};
use crate::braids::{insert_twists, BraidWord, TwistRegion};
use crate::cache::{cache_key, CacheHandle, CACHE_FORMAT};
use crate::complex::{hfk_table_of_grid, Budgets, HfkOptions, HFKTable, TableMode};
use crate::error::{Error, Result};
use crate::grid::{alexander_weights, braid_to_grid};

/// Grids up to this size are computed in full even when a level cutoff was
/// requested; truncation buys nothing there.
pub const FULL_SIZE_THRESHOLD: usize = 8;

/// Fewest consecutive agreeing records before a pattern counts as stable.
/// The detectors report evidence of stabilization, never proof, and demand
/// at least this much of it.
pub const MIN_CONFIRMING: usize = 3;

// ---------------------------------------------------------------------------
// Sweep
// ---------------------------------------------------------------------------

#[derive(Debug, Clone)]
pub struct SweepOptions {
    /// Alexander levels kept in truncated homology runs; also the detector
    /// window size downstream.
    pub k_levels: u32,
    pub budgets: Budgets,
    pub full_size_threshold: usize,
    /// When false, only polynomials and chain extremes are computed. Large-m
    /// coefficient sweeps stay cheap this way.
    pub compute_hfk: bool,
    pub cache: Option<CacheHandle>,
}

impl Default for SweepOptions {
    fn default() -> Self {
        SweepOptions {
            k_levels: 3,
            budgets: Budgets::default(),
            full_size_threshold: FULL_SIZE_THRESHOLD,
            compute_hfk: true,
            cache: None,
        }
    }
}

/// One twist count's worth of computed data.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct FamilyRecord {
    pub m: u32,
    pub grid_size: usize,
    pub delta: LaurentPoly,
    /// Highest Alexander grading over all chain generators. Exact for every
    /// record, including ones whose homology was skipped or truncated.
    pub chain_top: i64,
    /// Lowest Alexander grading over all chain generators. Exact.
    pub chain_bottom: i64,
    /// Present iff the homology computation ran within budget.
    pub hfk: Option<HFKTable>,
    /// Why hfk is absent, when a budget stopped it.
    pub hfk_error: Option<String>,
    pub wall_time_ms: u64,
    pub state_count: u64,
}

#[derive(Debug, Clone)]
pub struct FamilySweep {
    pub strands: usize,
    pub region: TwistRegion,
    pub k_levels: u32,
    /// Ascending in m.
    pub records: Vec<FamilyRecord>,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DimEntry {
    pub alexander: i64,
    pub maslov: i64,
    pub dim: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct HFKTableDump {
    pub grid_size: usize,
    pub dims: Vec<DimEntry>,
    pub truncated: bool,
    pub k_levels: Option<u32>,
    pub reported_floor: Option<i64>,
    pub chain_top: i64,
    pub chain_bottom: i64,
    pub chain_max_maslov: i64,
    pub state_count: u64,
}

impl HFKTableDump {
    pub fn from_table(table: &HFKTable) -> Self {
        HFKTableDump {
            grid_size: table.grid_size,
            dims: table
                .dims
                .iter()
                .map(|(&(a, m), &d)| DimEntry {
                    alexander: a,
                    maslov: m,
                    dim: d,
                })
                .collect(),
            truncated: table.truncated,
            k_levels: table.k_levels,
            reported_floor: table.reported_floor,
            chain_top: table.chain_top,
            chain_bottom: table.chain_bottom,
            chain_max_maslov: table.chain_max_maslov,
            state_count: table.state_count,
        }
    }

    pub fn into_table(self) -> HFKTable {
        HFKTable {
            grid_size: self.grid_size,
            dims: self
                .dims
                .into_iter()
                .map(|e| ((e.alexander, e.maslov), e.dim))
                .collect(),
            truncated: self.truncated,
            k_levels: self.k_levels,
            reported_floor: self.reported_floor,
            chain_top: self.chain_top,
            chain_bottom: self.chain_bottom,
            chain_max_maslov: self.chain_max_maslov,
            state_count: self.state_count,
        }
    }
}

#[derive(Serialize, Deserialize)]
struct RecordDump {
    schema: u32,
    m: u32,
    table: HFKTableDump,
    delta: LaurentPoly,
}

fn record_cache_key(
    base: &BraidWord,
    region: &TwistRegion,
    m: u32,
    mode: TableMode,
) -> String {
    let letters: Vec<String> = base.letters().iter().map(|l| l.to_string()).collect();
    let mode_tag = match mode {
        TableMode::Full => "full".to_string(),
        TableMode::Extremal { k_levels } => format!("k{k_levels}"),
    };
    cache_key(&[
        &CACHE_FORMAT.to_string(),
        "record",
        &base.strands().to_string(),
        &letters.join(","),
        &region.first_strand.to_string(),
        &region.width.to_string(),
        &m.to_string(),
        &mode_tag,
    ])
}

/// Compute (or fetch from cache) the record for one twist count.
///
/// Budget errors in the homology stage are recorded on the result instead of
/// failing it; the polynomial and chain extremes are always present.
pub fn family_record(
    base: &BraidWord,
    region: &TwistRegion,
    m: u32,
    options: &SweepOptions,
) -> Result<FamilyRecord> {
    let word = insert_twists(base, region, m)?;
    let grid_size = word.grid_size();
    let mode = if grid_size <= options.full_size_threshold {
        TableMode::Full
    } else {
        TableMode::Extremal {
            k_levels: options.k_levels,
        }
    };
    let key = record_cache_key(base, region, m, mode);
    if options.compute_hfk {
        if let Some(cache) = &options.cache {
            if let Some(bytes) = cache.get(&key) {
                if let Ok(dump) = serde_json::from_slice::<RecordDump>(&bytes) {
                    if dump.schema == CACHE_FORMAT
                        && dump.m == m
                        && dump.table.grid_size == grid_size
                    {
                        let table = dump.table.into_table();
                        return Ok(FamilyRecord {
                            m,
                            grid_size,
                            delta: dump.delta,
                            chain_top: table.chain_top,
                            chain_bottom: table.chain_bottom,
                            state_count: table.state_count,
                            hfk: Some(table),
                            hfk_error: None,
                            wall_time_ms: 0,
                        });
                    }
                }
            }
        }
    }
    let delta = alexander_from_braid(&word)?;
    let grid = braid_to_grid(&word)?;
    let weights = alexander_weights(&grid);
    let chain_top = weights.maximize().value;
    let chain_bottom = weights.minimize();
    let mut record = FamilyRecord {
        m,
        grid_size,
        delta,
        chain_top,
        chain_bottom,
        hfk: None,
        hfk_error: None,
        wall_time_ms: 0,
        state_count: 0,
    };
    if !options.compute_hfk {
        return Ok(record);
    }
    let started = Instant::now();
    match hfk_table_of_grid(
        &grid,
        &HfkOptions {
            mode,
            budgets: options.budgets,
        },
    ) {
        Ok(table) => {
            record.wall_time_ms = started.elapsed().as_millis() as u64;
            if !table.truncated {
                // strongest end-to-end self check: two unrelated pipelines
                // must produce the same polynomial
                let from_hfk = alexander_from_hfk(&table)?;
                if from_hfk != record.delta {
                    return Err(Error::ModelViolation(format!(
                        "determinant and homology disagree on the Alexander \
                         polynomial at m = {m}: {} vs {}",
                        record.delta, from_hfk
                    )));
                }
            }
            debug_assert_eq!(table.chain_top, chain_top);
            if let Some(cache) = &options.cache {
                let dump = RecordDump {
                    schema: CACHE_FORMAT,
                    m,
                    table: HFKTableDump::from_table(&table),
                    delta: record.delta.clone(),
                };
                // an unwritable cache slows reruns down but is not an error
                let _ = cache.put(&key, &serde_json::to_vec(&dump)?);
            }
            record.state_count = table.state_count;
            record.hfk = Some(table);
            Ok(record)
        }
        Err(err @ (Error::StateBudget { .. } | Error::EntryBudget { .. })) => {
            record.wall_time_ms = started.elapsed().as_millis() as u64;
            record.hfk_error = Some(err.to_string());
            Ok(record)
        }
        Err(err) => Err(err),
    }
}

/// Sweep the family over m in [m_from, m_to].
pub fn sweep_family(
    base: &BraidWord,
    region: &TwistRegion,
    m_from: u32,
    m_to: u32,
    options: &SweepOptions,
) -> Result<FamilySweep> {
    region.fits(base)?;
    if m_from > m_to {
        return Err(Error::TooFewRecords { needed: 1, got: 0 });
    }
    let mut records = Vec::with_capacity((m_to - m_from + 1) as usize);
    for m in m_from..=m_to {
        records.push(family_record(base, region, m, options)?);
    }
    Ok(FamilySweep {
        strands: base.strands(),
        region: *region,
        k_levels: options.k_levels,
        records,
    })
}

// ---------------------------------------------------------------------------
// Detectors
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum End {
    Top,
    Bottom,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum DetectorKind {
    DeltaTop,
    DeltaBottom,
    HfkTop,
}

impl std::fmt::Display for DetectorKind {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str(match self {
            DetectorKind::DeltaTop => "delta-top",
            DetectorKind::DeltaBottom => "delta-bottom",
            DetectorKind::HfkTop => "hfk-top",
        })
    }
}

/// Index 0 is the top nonzero level; each entry lists (maslov offset, dim)
/// pairs, offsets measured from the largest maslov at the top level.
pub type LevelProfile = Vec<Vec<(i64, u64)>>;

/// Outcome of one detector run. Which fields are populated depends on the
/// kind: coefficient windows for the polynomial detectors, level profiles
/// and Maslov offsets for the homology one. Slopes are filled for all kinds.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct StabilizationReport {
    pub kind: DetectorKind,
    pub k: u32,
    pub stable: bool,
    /// First m of the agreeing run, when stable.
    pub onset: Option<u32>,
    /// Anchor-degree (or top-level) advance per record inside the run.
    pub shift_per_step: Option<i64>,
    /// Length of the agreeing run ending at the last usable record.
    pub confirming: usize,
    /// Polynomial kinds: the common coefficient window, outermost first.
    pub window: Vec<BigInt>,
    /// Polynomial kinds: records whose span was below k, exempted from the
    /// match rather than breaking it.
    pub skipped_ms: Vec<u32>,
    /// Homology kind: the repeating per-level profile.
    pub stable_profile: Option<LevelProfile>,
    /// Homology kind: observed top-generator Maslov steps between
    /// consecutive records of the run.
    pub maslov_offsets: Vec<i64>,
    /// Growth rate of the homological genus over the sweep tail.
    pub slope_genus: Option<Ratio<i64>>,
    /// Growth rate of the chain-level top Alexander grading over the tail.
    pub slope_r: Option<Ratio<i64>>,
    /// Bottom kind only: renormalized rate (w(w-1) - 2s) / (2w) from the
    /// bottom-degree slope s; an integer for torus-like families.
    pub r: Option<Ratio<i64>>,
    pub r_is_integer: Option<bool>,
}

impl StabilizationReport {
    fn unstable(kind: DetectorKind, k: u32, skipped_ms: Vec<u32>, slopes: &SlopeReport) -> Self {
        StabilizationReport {
            kind,
            k,
            stable: false,
            onset: None,
            shift_per_step: None,
            confirming: 0,
            window: Vec::new(),
            skipped_ms,
            stable_profile: None,
            maslov_offsets: Vec::new(),
            slope_genus: slopes.slope_genus,
            slope_r: slopes.slope_r,
            r: None,
            r_is_integer: None,
        }
    }
}

/// The k coefficients of `delta` read from one end inward, with the degree
/// of the outermost one.
pub fn delta_window(delta: &LaurentPoly, end: End, k: u32) -> Option<(i64, Vec<BigInt>)> {
    let min = delta.min_deg()?;
    let max = delta.max_deg()?;
    Some(match end {
        End::Top => (max, (0..i64::from(k)).map(|i| delta.coeff(max - i)).collect()),
        End::Bottom => (min, (0..i64::from(k)).map(|i| delta.coeff(min + i)).collect()),
    })
}

/// Longest run of records ending at the last usable one whose k-coefficient
/// window is identical and whose anchor degree advances by a constant step.
/// Records with polynomial span below k are skipped and noted.
pub fn detect_delta_stabilization(
    sweep: &FamilySweep,
    end: End,
    k: u32,
) -> Result<StabilizationReport> {
    assert!(k >= 1);
    let kind = match end {
        End::Top => DetectorKind::DeltaTop,
        End::Bottom => DetectorKind::DeltaBottom,
    };
    let records = &sweep.records;
    if records.len() < MIN_CONFIRMING {
        return Err(Error::TooFewRecords {
            needed: MIN_CONFIRMING,
            got: records.len(),
        });
    }
    let slopes = fit_slopes(sweep);
    let mut skipped_ms = Vec::new();
    let mut eligible: Vec<(u32, i64, Vec<BigInt>)> = Vec::new();
    for r in records {
        if r.delta.span() < k as usize {
            skipped_ms.push(r.m);
            continue;
        }
        let (anchor, coeffs) = delta_window(&r.delta, end, k).expect("span checked");
        eligible.push((r.m, anchor, coeffs));
    }
    if eligible.len() < MIN_CONFIRMING {
        return Ok(StabilizationReport::unstable(kind, k, skipped_ms, &slopes));
    }
    let last_coeffs = eligible.last().unwrap().2.clone();
    let mut start = eligible.len() - 1;
    let mut step: Option<i64> = None;
    while start > 0 {
        if eligible[start - 1].2 != last_coeffs {
            break;
        }
        let s = eligible[start].1 - eligible[start - 1].1;
        match step {
            None => step = Some(s),
            Some(s0) if s0 == s => {}
            Some(_) => break,
        }
        start -= 1;
    }
    let confirming = eligible.len() - start;
    let stable = confirming >= MIN_CONFIRMING;
    let (r, r_is_integer) = if matches!(end, End::Bottom) {
        (slopes.r, slopes.r_is_integer)
    } else {
        (None, None)
    };
    Ok(StabilizationReport {
        kind,
        k,
        stable,
        onset: if stable { Some(eligible[start].0) } else { None },
        shift_per_step: if stable { step } else { None },
        confirming,
        window: if stable { last_coeffs } else { Vec::new() },
        skipped_ms,
        stable_profile: None,
        maslov_offsets: Vec::new(),
        slope_genus: slopes.slope_genus,
        slope_r: slopes.slope_r,
        r,
        r_is_integer,
    })
}

/// The profile of the top `k` consecutive Alexander levels, with the top
/// level's value and the reference Maslov grading. None when the table does
/// not trustworthily reach that deep.
pub fn hfk_profile(table: &HFKTable, k: u32) -> Option<(i64, i64, LevelProfile)> {
    let top = table.top_level()?;
    if table.truncated && table.reported_floor? > top - i64::from(k) + 1 {
        return None;
    }
    let m_ref = table.level_entries(top).iter().map(|&(m, _)| m).max()?;
    let mut profile = Vec::with_capacity(k as usize);
    for i in 0..i64::from(k) {
        let entries: Vec<(i64, u64)> = table
            .level_entries(top - i)
            .into_iter()
            .map(|(m, d)| (m - m_ref, d))
            .collect();
        profile.push(entries);
    }
    Some((top, m_ref, profile))
}

/// Longest run of records ending at the last one whose top-k level profile
/// repeats verbatim while the top level advances by a constant step. Every
/// record must carry a table deep enough for a k-level profile.
pub fn detect_hfk_stabilization(sweep: &FamilySweep, k: u32) -> Result<StabilizationReport> {
    assert!(k >= 1);
    let records = &sweep.records;
    if records.len() < MIN_CONFIRMING {
        return Err(Error::TooFewRecords {
            needed: MIN_CONFIRMING,
            got: records.len(),
        });
    }
    let mut missing = Vec::new();
    let mut profiles = Vec::with_capacity(records.len());
    for r in records {
        match r.hfk.as_ref().and_then(|t| hfk_profile(t, k)) {
            Some(p) => profiles.push(p),
            None => missing.push(r.m),
        }
    }
    if !missing.is_empty() {
        return Err(Error::MissingTables { ms: missing });
    }
    let slopes = fit_slopes(sweep);
    let last_profile = profiles.last().unwrap().2.clone();
    let mut start = records.len() - 1;
    let mut step: Option<i64> = None;
    while start > 0 {
        if profiles[start - 1].2 != last_profile {
            break;
        }
        let s = profiles[start].0 - profiles[start - 1].0;
        match step {
            None => step = Some(s),
            Some(s0) if s0 == s => {}
            Some(_) => break,
        }
        start -= 1;
    }
    let confirming = records.len() - start;
    let stable = confirming >= MIN_CONFIRMING;
    let maslov_offsets: Vec<i64> = if stable {
        (start..records.len() - 1)
            .map(|i| profiles[i + 1].1 - profiles[i].1)
            .collect()
    } else {
        Vec::new()
    };
    Ok(StabilizationReport {
        kind: DetectorKind::HfkTop,
        k,
        stable,
        onset: if stable { Some(records[start].m) } else { None },
        shift_per_step: if stable { step } else { None },
        confirming,
        window: Vec::new(),
        skipped_ms: Vec::new(),
        stable_profile: if stable { Some(last_profile) } else { None },
        maslov_offsets,
        slope_genus: slopes.slope_genus,
        slope_r: slopes.slope_r,
        r: None,
        r_is_integer: None,
    })
}

// ---------------------------------------------------------------------------
// Growth rates
// ---------------------------------------------------------------------------

/// Least-squares slope through the points, as an exact rational. None with
/// fewer than two distinct x values.
pub fn exact_slope(points: &[(i64, i64)]) -> Option<Ratio<i64>> {
    if points.len() < 2 {
        return None;
    }
    let n = points.len() as i64;
    let sx: i64 = points.iter().map(|&(x, _)| x).sum();
    let sy: i64 = points.iter().map(|&(_, y)| y).sum();
    let sxy: i64 = points.iter().map(|&(x, y)| x * y).sum();
    let sxx: i64 = points.iter().map(|&(x, _)| x * x).sum();
    let denom = n * sxx - sx * sx;
    if denom == 0 {
        return None;
    }
    Some(Ratio::new(n * sxy - sx * sy, denom))
}

/// The trailing half of a series (at least two entries), where transient
/// small-m behavior has died out.
fn tail<T>(items: &[T]) -> &[T] {
    let keep = (items.len() / 2).max(2).min(items.len());
    &items[items.len() - keep..]
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct SlopeReport {
    /// Homological genus growth; needs records with tables.
    pub slope_genus: Option<Ratio<i64>>,
    /// Top nonzero homology level growth. Equal to slope_genus whenever both
    /// exist, since the genus is read off as that top level; reported under
    /// its own name because the two series are requested separately.
    pub slope_r: Option<Ratio<i64>>,
    /// Chain-level top Alexander grading growth; available for every record,
    /// tables or not. Outruns slope_r on families whose extremal generators
    /// all cancel (the gap grows linearly for twist regions wider than two).
    pub slope_r_chain: Option<Ratio<i64>>,
    pub delta_top_slope: Option<Ratio<i64>>,
    pub delta_bottom_slope: Option<Ratio<i64>>,
    /// Renormalized bottom-degree rate: (w(w-1) - 2s) / (2w) for bottom
    /// slope s over a width-w region.
    pub r: Option<Ratio<i64>>,
    pub r_is_integer: Option<bool>,
}

pub fn fit_slopes(sweep: &FamilySweep) -> SlopeReport {
    let series = |f: &dyn Fn(&FamilyRecord) -> Option<i64>| -> Vec<(i64, i64)> {
        sweep
            .records
            .iter()
            .filter_map(|r| f(r).map(|y| (i64::from(r.m), y)))
            .collect()
    };
    let fit = |points: Vec<(i64, i64)>| -> Option<Ratio<i64>> {
        if points.len() < 2 {
            return None;
        }
        exact_slope(tail(&points))
    };
    let slope_genus = fit(series(&|r| r.hfk.as_ref().and_then(|t| t.genus())));
    let slope_r = fit(series(&|r| r.hfk.as_ref().and_then(|t| t.top_level())));
    let slope_r_chain = fit(series(&|r| Some(r.chain_top)));
    let delta_top_slope = fit(series(&|r| r.delta.max_deg()));
    let delta_bottom_slope = fit(series(&|r| r.delta.min_deg()));
    let w = sweep.region.width as i64;
    let r = delta_bottom_slope
        .map(|s| (Ratio::from_integer(w * (w - 1)) - s * 2) / Ratio::from_integer(2 * w));
    SlopeReport {
        slope_genus,
        slope_r,
        slope_r_chain,
        delta_top_slope,
        delta_bottom_slope,
        r_is_integer: r.map(|x| x.is_integer()),
        r,
    }
}

/// (genus growth, top-level growth) over the sweep tail. Both come from the
/// homology tables; records whose table computation failed contribute
/// nothing, and fewer than two surviving records is an error.
pub fn slopes(sweep: &FamilySweep) -> Result<(Ratio<i64>, Ratio<i64>)> {
    let report = fit_slopes(sweep);
    let usable = sweep.records.iter().filter(|r| r.hfk.is_some()).count();
    match (report.slope_genus, report.slope_r) {
        (Some(g), Some(r)) => Ok((g, r)),
        _ => Err(Error::TooFewRecords {
            needed: 2,
            got: usable.min(sweep.records.len()),
        }),
    }
}

// ---------------------------------------------------------------------------
// Reports
// ---------------------------------------------------------------------------

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct RecordSummary {
    pub m: u32,
    pub grid_size: usize,
    pub min_deg: Option<i64>,
    pub max_deg: Option<i64>,
    /// Extremes of the homology table: top and bottom nonzero Alexander
    /// levels and the top nonzero Maslov grading. L is absent for truncated
    /// tables, which never see the real bottom.
    #[serde(rename = "R")]
    pub top: Option<i64>,
    #[serde(rename = "L")]
    pub bottom: Option<i64>,
    #[serde(rename = "B")]
    pub max_maslov: Option<i64>,
    /// Same value as R; the top level is how the genus is read off.
    pub genus: Option<i64>,
    /// Chain-level counterparts: generator statistics, not homology.
    #[serde(rename = "R_chain")]
    pub chain_top: i64,
    #[serde(rename = "L_chain")]
    pub chain_bottom: i64,
    #[serde(rename = "B_chain")]
    pub chain_max_maslov: Option<i64>,
    pub truncated: Option<bool>,
    pub total_dim: Option<u64>,
    pub state_count: u64,
    pub hfk_error: Option<String>,
    /// Homology entries in the top k reported levels.
    pub top_dims: Vec<DimEntry>,
}

fn summarize_record(record: &FamilyRecord, k: u32) -> RecordSummary {
    let table = record.hfk.as_ref();
    let cutoff = table
        .and_then(|t| t.top_level())
        .map(|top| top - i64::from(k) + 1);
    let top_dims = table
        .map(|t| {
            t.levels_descending()
                .into_iter()
                .filter(|&a| cutoff.is_some_and(|c| a >= c))
                .flat_map(|a| {
                    t.level_entries(a).into_iter().map(move |(m, d)| DimEntry {
                        alexander: a,
                        maslov: m,
                        dim: d,
                    })
                })
                .collect()
        })
        .unwrap_or_default();
    RecordSummary {
        m: record.m,
        grid_size: record.grid_size,
        min_deg: record.delta.min_deg(),
        max_deg: record.delta.max_deg(),
        top: table.and_then(|t| t.top_level()),
        bottom: table.and_then(|t| t.bottom_level()),
        max_maslov: table.and_then(|t| t.max_maslov()),
        genus: table.and_then(|t| t.genus()),
        chain_top: record.chain_top,
        chain_bottom: record.chain_bottom,
        chain_max_maslov: table.map(|t| t.chain_max_maslov),
        truncated: table.map(|t| t.truncated),
        total_dim: table.map(|t| t.total_dim()),
        state_count: record.state_count,
        hfk_error: record.hfk_error.clone(),
        top_dims,
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct ProfileEntryDump {
    pub maslov_offset: i64,
    pub dim: u64,
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct StabilizationReportDump {
    pub kind: DetectorKind,
    pub k: u32,
    pub stable: bool,
    pub onset: Option<u32>,
    pub shift_per_step: Option<i64>,
    pub confirming: usize,
    /// Decimal strings; coefficients can outgrow fixed-width integers.
    pub window: Vec<String>,
    pub skipped_ms: Vec<u32>,
    /// Outer index 0 is the top level.
    pub stable_profile: Option<Vec<Vec<ProfileEntryDump>>>,
    pub maslov_offsets: Vec<i64>,
    pub slope_genus: Option<String>,
    #[serde(rename = "slope_R")]
    pub slope_r: Option<String>,
    pub r: Option<String>,
    pub r_is_integer: Option<bool>,
}

fn ratio_string(r: Ratio<i64>) -> String {
    if r.is_integer() {
        r.to_integer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

impl From<&StabilizationReport> for StabilizationReportDump {
    fn from(r: &StabilizationReport) -> Self {
        StabilizationReportDump {
            kind: r.kind,
            k: r.k,
            stable: r.stable,
            onset: r.onset,
            shift_per_step: r.shift_per_step,
            confirming: r.confirming,
            window: r.window.iter().map(|c| c.to_string()).collect(),
            skipped_ms: r.skipped_ms.clone(),
            stable_profile: r.stable_profile.as_ref().map(|p| {
                p.iter()
                    .map(|level| {
                        level
                            .iter()
                            .map(|&(maslov_offset, dim)| ProfileEntryDump { maslov_offset, dim })
                            .collect()
                    })
                    .collect()
            }),
            maslov_offsets: r.maslov_offsets.clone(),
            slope_genus: r.slope_genus.map(ratio_string),
            slope_r: r.slope_r.map(ratio_string),
            r: r.r.map(ratio_string),
            r_is_integer: r.r_is_integer,
        }
    }
}

#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SlopeStrings {
    pub slope_genus: Option<String>,
    #[serde(rename = "slope_R")]
    pub slope_r: Option<String>,
    #[serde(rename = "slope_R_chain")]
    pub slope_r_chain: Option<String>,
    pub delta_top_slope: Option<String>,
    pub delta_bottom_slope: Option<String>,
    pub r: Option<String>,
    pub r_is_integer: Option<bool>,
}

impl From<&SlopeReport> for SlopeStrings {
    fn from(s: &SlopeReport) -> Self {
        SlopeStrings {
            slope_genus: s.slope_genus.map(ratio_string),
            slope_r: s.slope_r.map(ratio_string),
            slope_r_chain: s.slope_r_chain.map(ratio_string),
            delta_top_slope: s.delta_top_slope.map(ratio_string),
            delta_bottom_slope: s.delta_bottom_slope.map(ratio_string),
            r: s.r.map(ratio_string),
            r_is_integer: s.r_is_integer,
        }
    }
}

/// Which detectors a report should run.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct DetectorSet {
    pub hfk: bool,
    pub delta_top: bool,
    pub delta_bottom: bool,
}

impl DetectorSet {
    pub fn all() -> Self {
        DetectorSet {
            hfk: true,
            delta_top: true,
            delta_bottom: true,
        }
    }
}

/// The machine contract for a whole sweep: per-m summaries, every requested
/// detector's report, and the fitted growth rates.
#[derive(Debug, Clone, Serialize, Deserialize)]
pub struct SweepReport {
    pub schema: u32,
    pub knot: String,
    pub strands: usize,
    pub region: TwistRegion,
    pub k_levels: u32,
    pub ms: Vec<u32>,
    pub records: Vec<RecordSummary>,
    pub reports: Vec<StabilizationReportDump>,
    pub slopes: SlopeStrings,
    /// Every requested detector found a stable pattern.
    pub stable: bool,
}

pub fn build_sweep_report(
    knot: &str,
    sweep: &FamilySweep,
    detectors: DetectorSet,
) -> Result<SweepReport> {
    let k = sweep.k_levels;
    let mut reports = Vec::new();
    if detectors.hfk {
        reports.push(detect_hfk_stabilization(sweep, k)?);
    }
    if detectors.delta_top {
        reports.push(detect_delta_stabilization(sweep, End::Top, k)?);
    }
    if detectors.delta_bottom {
        reports.push(detect_delta_stabilization(sweep, End::Bottom, k)?);
    }
    let stable = !reports.is_empty() && reports.iter().all(|r| r.stable);
    Ok(SweepReport {
        schema: 1,
        knot: knot.to_string(),
        strands: sweep.strands,
        region: sweep.region,
        k_levels: k,
        ms: sweep.records.iter().map(|r| r.m).collect(),
        records: sweep.records.iter().map(|r| summarize_record(r, k)).collect(),
        reports: reports.iter().map(StabilizationReportDump::from).collect(),
        slopes: SlopeStrings::from(&fit_slopes(sweep)),
        stable,
    })
}

fn opt_cell<T: std::fmt::Display>(v: Option<T>) -> String {
    v.map(|x| x.to_string()).unwrap_or_default()
}

/// One CSV row per twist count, for external plotting.
pub fn records_csv(report: &SweepReport) -> String {
    let mut out = String::new();
    out.push_str("m,min_deg,max_deg,R,L,B,genus,top_dims\n");
    for r in &report.records {
        let dims: Vec<String> = r
            .top_dims
            .iter()
            .map(|e| format!("{}:{}:{}", e.alexander, e.maslov, e.dim))
            .collect();
        let _ = writeln!(
            out,
            "{},{},{},{},{},{},{},{}",
            r.m,
            opt_cell(r.min_deg),
            opt_cell(r.max_deg),
            opt_cell(r.top),
            opt_cell(r.bottom),
            opt_cell(r.max_maslov),
            opt_cell(r.genus),
            dims.join(";"),
        );
    }
    out
}
