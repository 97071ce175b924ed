//! Exhaustive generation of connected covers of a rigid base up to
//! isomorphism, plus verification and export of the resulting datasets.

use std::fs;
use std::path::Path;

use itertools::Itertools;
use num_bigint::BigUint;
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::counting::{factorial, lower_bound, rank_from_graph};
use crate::cover::{
    build_cover, covering_degree, distinguished_edges, lift_check, permutations_transitive,
    validate_covering, CoveringMap, VoltageAssignment,
};
use crate::cover_iso::covers_isomorphic_unchecked;
use crate::error::{Error, Result};
use crate::graph::Graph;
use crate::io::{parse_edge_list, to_dot, write_edge_list};
use crate::iso::{graphs_isomorphic, DEFAULT_ISO_LIMIT};
use crate::refine::{is_discrete, stable_coloring, wl_test};

/// Environment variable read when [`GenerateConfig::workers`] is 0.
pub const WORKERS_ENV: &str = "WLCOVERS_WORKERS";

pub const DEFAULT_BUDGET: u64 = 10_000_000;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GenerateConfig {
    /// Largest number of voltage tuples `(d!)^r` to scan.
    pub budget: u64,
    /// Stop after this many classes. Truncated datasets are marked
    /// incomplete.
    pub max_classes: Option<usize>,
    /// Worker threads; 0 reads [`WORKERS_ENV`] and falls back to the rayon
    /// default.
    pub workers: usize,
    /// Refuse bases whose stable coloring is not discrete. When disabled the
    /// classes are cover-isomorphism classes, which may be coarser than graph
    /// isomorphism classes.
    pub require_discrete: bool,
}

impl Default for GenerateConfig {
    fn default() -> Self {
        GenerateConfig {
            budget: DEFAULT_BUDGET,
            max_classes: None,
            workers: 0,
            require_discrete: true,
        }
    }
}

impl GenerateConfig {
    fn worker_count(&self) -> usize {
        if self.workers > 0 {
            return self.workers;
        }
        std::env::var(WORKERS_ENV)
            .ok()
            .and_then(|s| s.parse().ok())
            .filter(|&w| w > 0)
            .unwrap_or_else(rayon::current_num_threads)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Representative {
    pub label: usize,
    pub voltage: VoltageAssignment,
    pub cover: CoveringMap,
}

impl Representative {
    pub fn graph(&self) -> &Graph {
        &self.cover.total
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetStats {
    pub scanned: u64,
    pub connected: u64,
    pub classes: usize,
    /// False when generation stopped early at `max_classes`.
    pub complete: bool,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CoverDataset {
    pub base: Graph,
    pub degree: usize,
    pub representatives: Vec<Representative>,
    pub stats: DatasetStats,
}

/// Every voltage assignment on the distinguished edges of a base, in
/// lexicographic order of permutation tuples (first edge most significant,
/// permutations of `0..d` in lexicographic order).
#[derive(Debug, Clone)]
pub struct VoltageEnumerator {
    degree: usize,
    edges: Vec<(usize, usize)>,
    perms: Vec<Vec<usize>>,
    next: u64,
    total: u64,
}

impl VoltageEnumerator {
    pub fn len(&self) -> u64 {
        self.total
    }

    pub fn is_empty(&self) -> bool {
        self.total == 0
    }

    /// The assignment at position `index` of the enumeration order.
    pub fn at(&self, index: u64) -> VoltageAssignment {
        VoltageAssignment {
            degree: self.degree,
            edges: self.edges.clone(),
            perms: self
                .perm_indices(index)
                .into_iter()
                .map(|i| self.perms[i].clone())
                .collect(),
        }
    }

    fn perm_indices(&self, mut index: u64) -> Vec<usize> {
        let radix = self.perms.len() as u64;
        let mut digits = vec![0; self.edges.len()];
        for slot in digits.iter_mut().rev() {
            *slot = (index % radix) as usize;
            index /= radix;
        }
        digits
    }

    fn is_transitive_at(&self, index: u64) -> bool {
        let chosen: Vec<Vec<usize>> = self
            .perm_indices(index)
            .into_iter()
            .map(|i| self.perms[i].clone())
            .collect();
        permutations_transitive(&chosen, self.degree)
    }
}

impl Iterator for VoltageEnumerator {
    type Item = VoltageAssignment;

    fn next(&mut self) -> Option<VoltageAssignment> {
        (self.next < self.total).then(|| {
            self.next += 1;
            self.at(self.next - 1)
        })
    }
}

/// Number of voltage tuples `(d!)^r` for `base` at degree `d`.
pub fn voltage_count(base: &Graph, d: usize) -> Result<BigUint> {
    let r = rank_from_graph(base)?;
    Ok(factorial(d).pow(r as u32))
}

/// All `(d!)^r` voltage assignments of `base`, where `r = 1 − χ(base)`.
pub fn enumerate_voltages(base: &Graph, d: usize) -> Result<VoltageEnumerator> {
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let required = voltage_count(base, d)?;
    let total = u64::try_from(&required).map_err(|_| Error::BudgetExceeded {
        required: required.clone(),
        budget: u64::MAX,
    })?;
    Ok(VoltageEnumerator {
        degree: d,
        edges: distinguished_edges(base),
        perms: (0..d).permutations(d).collect(),
        next: 0,
        total,
    })
}

struct Found {
    voltage: VoltageAssignment,
    cover: CoveringMap,
}

/// Scans `range`, keeping the first cover of each isomorphism class seen.
fn scan_range(
    base: &Graph,
    voltages: &VoltageEnumerator,
    range: std::ops::Range<u64>,
    max_classes: Option<usize>,
) -> Result<(Vec<Found>, u64, u64)> {
    let mut found: Vec<Found> = Vec::new();
    let (mut scanned, mut connected) = (0, 0);
    for index in range {
        if max_classes.is_some_and(|m| found.len() >= m) {
            break;
        }
        scanned += 1;
        if !voltages.is_transitive_at(index) {
            continue;
        }
        connected += 1;
        let voltage = voltages.at(index);
        let cover = build_cover(base, &voltage)?;
        if !found
            .iter()
            .any(|f| covers_isomorphic_unchecked(&f.cover, &cover).is_isomorphic())
        {
            found.push(Found { voltage, cover });
        }
    }
    Ok((found, scanned, connected))
}

/// Representatives of the isomorphism classes of connected degree-`d`
/// covers of `base`, each the first voltage of its class in enumeration
/// order. Output does not depend on the worker count.
pub fn generate_graphcovers(
    base: &Graph,
    d: usize,
    config: &GenerateConfig,
) -> Result<CoverDataset> {
    if !base.is_connected() {
        return Err(Error::Disconnected);
    }
    if config.require_discrete && !is_discrete(base) {
        return Err(Error::NonDiscreteBase);
    }
    if d == 0 {
        return Err(Error::InvalidArgument("degree must be at least 1".into()));
    }
    let required = voltage_count(base, d)?;
    if required > BigUint::from(config.budget) {
        return Err(Error::BudgetExceeded {
            required,
            budget: config.budget,
        });
    }
    let voltages = enumerate_voltages(base, d)?;
    let total = voltages.len();

    let workers = config.worker_count();
    let (found, scanned, connected) = if config.max_classes.is_some() || workers <= 1 || total < 64
    {
        scan_range(base, &voltages, 0..total, config.max_classes)?
    } else {
        let chunks = (workers as u64 * 4).min(total);
        let bounds: Vec<_> = (0..chunks)
            .map(|c| (total * c / chunks)..(total * (c + 1) / chunks))
            .collect();
        let pool = rayon::ThreadPoolBuilder::new()
            .num_threads(workers)
            .build()
            .map_err(|e| Error::Io(e.to_string()))?;
        let partial: Vec<_> = pool.install(|| {
            bounds
                .into_par_iter()
                .map(|range| scan_range(base, &voltages, range, None))
                .collect::<Result<Vec<_>>>()
        })?;
        // Chunks are merged in order, so each class keeps its globally first
        // voltage.
        let mut merged: Vec<Found> = Vec::new();
        let (mut scanned, mut connected) = (0, 0);
        for (local, s, c) in partial {
            scanned += s;
            connected += c;
            for f in local {
                if !merged
                    .iter()
                    .any(|m| covers_isomorphic_unchecked(&m.cover, &f.cover).is_isomorphic())
                {
                    merged.push(f);
                }
            }
        }
        (merged, scanned, connected)
    };

    let complete = scanned == total;
    let representatives: Vec<Representative> = found
        .into_iter()
        .enumerate()
        .map(|(label, f)| Representative {
            label,
            voltage: f.voltage,
            cover: f.cover,
        })
        .collect();
    Ok(CoverDataset {
        base: base.clone(),
        degree: d,
        stats: DatasetStats {
            scanned,
            connected,
            classes: representatives.len(),
            complete,
        },
        representatives,
    })
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Check {
    pub name: String,
    pub passed: bool,
    pub detail: String,
}

#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct DatasetReport {
    pub checks: Vec<Check>,
}

impl DatasetReport {
    pub fn passed(&self) -> bool {
        self.checks.iter().all(|c| c.passed)
    }

    pub fn failures(&self) -> impl Iterator<Item = &Check> {
        self.checks.iter().filter(|c| !c.passed)
    }

    fn push(&mut self, name: &str, failures: Vec<String>, ok_detail: String) {
        let passed = failures.is_empty();
        self.checks.push(Check {
            name: name.to_string(),
            passed,
            detail: if passed {
                ok_detail
            } else {
                failures.join("; ")
            },
        });
    }
}

/// Re-checks every dataset invariant from scratch.
pub fn verify_dataset(ds: &CoverDataset) -> DatasetReport {
    let mut report = DatasetReport::default();
    let reps = &ds.representatives;
    let d = ds.degree;
    let (nv, ne) = (d * ds.base.vertex_count(), d * ds.base.edge_count());

    let mut fails = Vec::new();
    for r in reps {
        match build_cover(&ds.base, &r.voltage) {
            Ok(cm) if cm == r.cover => {}
            Ok(_) => fails.push(format!(
                "class {}: graph differs from its voltage cover",
                r.label
            )),
            Err(e) => fails.push(format!("class {}: {e}", r.label)),
        }
    }
    report.push(
        "voltage provenance",
        fails,
        format!("{} covers rebuilt", reps.len()),
    );

    let fails = reps
        .iter()
        .filter(|r| r.graph().vertex_count() != nv || r.graph().edge_count() != ne)
        .map(|r| {
            format!(
                "class {}: {} vertices, {} edges (expected {nv}, {ne})",
                r.label,
                r.graph().vertex_count(),
                r.graph().edge_count()
            )
        })
        .collect();
    report.push("order", fails, format!("{nv} vertices, {ne} edges each"));

    let fails = reps
        .iter()
        .filter(|r| !r.graph().is_connected())
        .map(|r| format!("class {} disconnected", r.label))
        .collect();
    report.push("connected", fails, "all connected".into());

    let mut fails = Vec::new();
    for r in reps {
        match validate_covering(&r.cover) {
            Ok(v) if v.is_valid() => {}
            Ok(v) => fails.push(format!("class {}: {v:?}", r.label)),
            Err(e) => fails.push(format!("class {}: {e}", r.label)),
        }
        match covering_degree(&r.cover) {
            Ok(k) if k == d => {}
            Ok(k) => fails.push(format!("class {}: degree {k}", r.label)),
            Err(e) => fails.push(format!("class {}: {e}", r.label)),
        }
    }
    report.push("valid cover", fails, format!("all degree {d}"));

    let fails = reps
        .iter()
        .filter_map(|r| match lift_check(&r.cover) {
            crate::cover::LiftVerdict::Pass => None,
            v => Some(format!("class {}: {v:?}", r.label)),
        })
        .collect();
    report.push("color lift", fails, "colors lift in every round".into());

    let pairs: Vec<(usize, usize)> = (0..reps.len()).tuple_combinations().collect();

    let fails = pairs
        .iter()
        .filter_map(|&(i, j)| {
            let v = wl_test(reps[i].graph(), reps[j].graph());
            (!v.is_equivalent()).then(|| format!("classes {i}, {j}: {v:?}"))
        })
        .collect();
    report.push(
        "pairwise WL equivalent",
        fails,
        format!("{} pairs", pairs.len()),
    );

    let fails = pairs
        .iter()
        .filter_map(|&(i, j)| {
            // disconnected totals are already reported above
            let comparable = reps[i].graph().is_connected() && reps[j].graph().is_connected();
            (comparable
                && covers_isomorphic_unchecked(&reps[i].cover, &reps[j].cover).is_isomorphic())
            .then(|| format!("classes {i}, {j} are isomorphic covers"))
        })
        .collect();
    report.push(
        "pairwise cover non-isomorphic",
        fails,
        format!("{} pairs", pairs.len()),
    );

    if nv <= DEFAULT_ISO_LIMIT {
        let fails = pairs
            .iter()
            .filter_map(
                |&(i, j)| match graphs_isomorphic(reps[i].graph(), reps[j].graph()) {
                    Ok(None) => None,
                    Ok(Some(_)) => Some(format!("classes {i}, {j} are isomorphic graphs")),
                    Err(e) => Some(format!("classes {i}, {j}: {e}")),
                },
            )
            .collect();
        report.push(
            "pairwise graph non-isomorphic",
            fails,
            format!("{} pairs", pairs.len()),
        );
    }

    let fails = if ds.stats.classes == reps.len() {
        vec![]
    } else {
        vec![format!(
            "stats list {} classes, dataset holds {}",
            ds.stats.classes,
            reps.len()
        )]
    };
    report.push("stats", fails, format!("{} classes", reps.len()));

    if let Ok(r) = rank_from_graph(&ds.base) {
        if r >= 2 && ds.stats.complete {
            let bound = lower_bound(d, r).expect("d >= 1, r >= 2");
            let fails = if BigUint::from(reps.len()) >= bound {
                vec![]
            } else {
                vec![format!("{} classes below bound {bound}", reps.len())]
            };
            report.push("lower bound", fails, format!("{} >= {bound}", reps.len()));
        }
    }
    report
}

/// One class entry of a dataset manifest.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct ManifestEntry {
    pub label: usize,
    pub file: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub dot: Option<String>,
    pub vertices: usize,
    pub edges: usize,
    pub voltage: VoltageAssignment,
}

/// `manifest.json` of an exported dataset.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct DatasetManifest {
    pub format: String,
    pub base_file: String,
    pub base_vertices: usize,
    pub base_edges: usize,
    pub euler_characteristic: i64,
    pub degree: usize,
    pub classes: Vec<ManifestEntry>,
    pub stats: DatasetStats,
}

pub const MANIFEST_FORMAT: &str = "wlcovers-dataset/1";

/// Writes `base.el`, one `cover_<label>.el` per class (plus `.dot` files with
/// stable colors when `with_dot`), and `manifest.json` into `dir`.
pub fn export_dataset(ds: &CoverDataset, dir: &Path, with_dot: bool) -> Result<DatasetManifest> {
    fs::create_dir_all(dir)?;
    fs::write(dir.join("base.el"), write_edge_list(&ds.base))?;
    let mut classes = Vec::with_capacity(ds.representatives.len());
    for r in &ds.representatives {
        let file = format!("cover_{}.el", r.label);
        fs::write(dir.join(&file), write_edge_list(r.graph()))?;
        let dot = if with_dot {
            let name = format!("cover_{}.dot", r.label);
            let colors = stable_coloring(r.graph());
            fs::write(dir.join(&name), to_dot(r.graph(), Some(&colors)))?;
            Some(name)
        } else {
            None
        };
        classes.push(ManifestEntry {
            label: r.label,
            file,
            dot,
            vertices: r.graph().vertex_count(),
            edges: r.graph().edge_count(),
            voltage: r.voltage.clone(),
        });
    }
    let manifest = DatasetManifest {
        format: MANIFEST_FORMAT.to_string(),
        base_file: "base.el".into(),
        base_vertices: ds.base.vertex_count(),
        base_edges: ds.base.edge_count(),
        euler_characteristic: ds.base.euler_characteristic(),
        degree: ds.degree,
        classes,
        stats: ds.stats,
    };
    let mut json = serde_json::to_string_pretty(&manifest)?;
    json.push('\n');
    fs::write(dir.join("manifest.json"), json)?;
    Ok(manifest)
}

/// Reads a manifest written by [`export_dataset`] and rebuilds the dataset.
/// Each cover file must match the cover its voltage defines.
pub fn load_dataset(manifest_path: &Path) -> Result<(DatasetManifest, CoverDataset)> {
    let dir = manifest_path.parent().unwrap_or(Path::new("."));
    let manifest: DatasetManifest = serde_json::from_str(&fs::read_to_string(manifest_path)?)?;
    if manifest.format != MANIFEST_FORMAT {
        return Err(Error::Io(format!(
            "unsupported manifest format {:?}",
            manifest.format
        )));
    }
    let base = parse_edge_list(&fs::read_to_string(dir.join(&manifest.base_file))?)?;
    let mut representatives = Vec::with_capacity(manifest.classes.len());
    for entry in &manifest.classes {
        let cover = build_cover(&base, &entry.voltage)?;
        let on_disk = parse_edge_list(&fs::read_to_string(dir.join(&entry.file))?)?;
        if on_disk != cover.total {
            return Err(Error::InvalidCover(format!(
                "{} does not match the cover built from its voltage",
                entry.file
            )));
        }
        representatives.push(Representative {
            label: entry.label,
            voltage: entry.voltage.clone(),
            cover,
        });
    }
    let ds = CoverDataset {
        base,
        degree: manifest.degree,
        representatives,
        stats: manifest.stats,
    };
    Ok((manifest, ds))
}
