//! `wlcovers` command-line front end.
//!
//! Exit codes: 0 for success or an affirmative verdict, 1 for a negative
//! verdict, 2 for usage, input or output errors.

pub mod manifest;

use std::ffi::OsString;
use std::fmt::Write as _;
use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use wlcovers_core::counting::{
    check_counting_consistency, hall_count, lower_bound, predicted_transitive_tuples,
    rank_from_graph,
};
use wlcovers_core::cover::{covering_degree, RootedTreeBall};
use wlcovers_core::dataset::{
    export_dataset, generate_graphcovers, load_dataset, verify_dataset, CoverDataset,
    GenerateConfig, DEFAULT_BUDGET,
};
use wlcovers_core::io::{read_graph, read_voltage, to_dot, write_edge_list};
use wlcovers_core::mp::{
    indistinguishability_report, Aggregation, FeatureSpec, MPModel, DEFAULT_HIDDEN, DEFAULT_LAYERS,
    DEFAULT_SEED, DEFAULT_TOLERANCE,
};
use wlcovers_core::{
    build_cover, color_refine, covers_isomorphic, rooted_tree_canonical, universal_cover_ball,
    wl_test, Error, Graph, WlVerdict,
};

use manifest::RunRecorder;

pub const EXIT_OK: i32 = 0;
pub const EXIT_NEGATIVE: i32 = 1;
pub const EXIT_ERROR: i32 = 2;

#[derive(Debug, Parser)]
#[command(
    name = "wlcovers",
    version,
    about = "Weisfeiler-Leman equivalence via graph covers"
)]
pub struct Cli {
    /// Write the run manifest to this path (default: next to the outputs).
    #[arg(long, global = true, value_name = "PATH")]
    pub run_manifest: Option<PathBuf>,

    #[command(subcommand)]
    pub command: Command,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Color-refinement test on two graphs; exit 0 if equivalent.
    WlTest { a: PathBuf, b: PathBuf },
    /// Stable coloring of a graph.
    Refine {
        graph: PathBuf,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Builds the cover defined by a voltage assignment.
    BuildCover {
        base: PathBuf,
        voltage: PathBuf,
        #[arg(short, long)]
        output: Option<PathBuf>,
    },
    /// Ball of the universal cover around a vertex.
    Ucball {
        graph: PathBuf,
        #[arg(long)]
        root: usize,
        #[arg(long)]
        radius: usize,
        #[arg(long)]
        dot: Option<PathBuf>,
    },
    /// Tests whether two voltage covers of a base are isomorphic as covers.
    CoverIso {
        base: PathBuf,
        a: PathBuf,
        b: PathBuf,
        /// Print the vertex bijection.
        #[arg(long)]
        witness: bool,
    },
    /// Generates one representative per isomorphism class of connected covers.
    GenCovers {
        base: PathBuf,
        #[arg(long)]
        degree: usize,
        #[arg(short, long)]
        output: PathBuf,
        /// Largest number of voltage tuples to scan.
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
        /// Also write DOT files with stable colors.
        #[arg(long)]
        dot: bool,
        #[arg(long)]
        max_classes: Option<usize>,
        /// Worker threads (default: $WLCOVERS_WORKERS, then all cores).
        #[arg(long)]
        workers: Option<usize>,
        /// Accept bases with a non-discrete stable coloring.
        #[arg(long)]
        allow_nonrigid: bool,
    },
    /// Re-checks an exported dataset; exit 0 if every check passes.
    Verify { manifest: PathBuf },
    /// Subgroup counts and cover-count bounds.
    Count {
        #[arg(long)]
        degree: usize,
        #[arg(long, required_unless_present = "base", conflicts_with = "base")]
        rank: Option<usize>,
        /// Take the rank from this base graph.
        #[arg(long)]
        base: Option<PathBuf>,
        /// Generate the covers of the base and check the counts.
        #[arg(long, requires = "base")]
        verify: bool,
        #[arg(long, default_value_t = DEFAULT_BUDGET)]
        budget: u64,
    },
    /// Embeds every cover of a dataset with a random message-passing network.
    MpCheck {
        manifest: PathBuf,
        #[arg(long, value_enum)]
        features: Features,
        #[arg(long, default_value_t = DEFAULT_SEED)]
        seed: u64,
        #[arg(long, default_value_t = DEFAULT_LAYERS)]
        layers: usize,
        #[arg(long, default_value_t = DEFAULT_HIDDEN)]
        hidden: usize,
        #[arg(long, value_enum, default_value_t = Agg::Sum)]
        aggregation: Agg,
        #[arg(long, default_value_t = DEFAULT_TOLERANCE)]
        tolerance: f64,
    },
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Features {
    Constant,
    Degree,
    Random,
    Onehot,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, ValueEnum)]
pub enum Agg {
    Sum,
    Mean,
}

impl Command {
    fn name(&self) -> &'static str {
        match self {
            Command::WlTest { .. } => "wl-test",
            Command::Refine { .. } => "refine",
            Command::BuildCover { .. } => "build-cover",
            Command::Ucball { .. } => "ucball",
            Command::CoverIso { .. } => "cover-iso",
            Command::GenCovers { .. } => "gen-covers",
            Command::Verify { .. } => "verify",
            Command::Count { .. } => "count",
            Command::MpCheck { .. } => "mp-check",
        }
    }
}

/// Parses `argv` (including the program name), runs the command and returns
/// the exit code. Verdicts go to `out`, diagnostics to stderr.
pub fn dispatch<I, T>(argv: I, out: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<OsString> + Clone,
{
    let argv: Vec<OsString> = argv.into_iter().map(Into::into).collect();
    let cli = match Cli::try_parse_from(&argv) {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { EXIT_ERROR } else { EXIT_OK };
        }
    };
    let arguments = argv
        .iter()
        .skip(1)
        .map(|a| a.to_string_lossy().into_owned())
        .collect();
    let mut rec = Recorder {
        run: RunRecorder::new(cli.command.name(), arguments),
        location: None,
    };
    let mut text = String::new();
    let code = match run(&cli.command, &mut rec, &mut text) {
        Ok(code) => code,
        Err(e) => {
            eprintln!("error: {e}");
            EXIT_ERROR
        }
    };
    if out.write_all(text.as_bytes()).is_err() {
        return EXIT_ERROR;
    }
    let location = cli
        .run_manifest
        .clone()
        .or(rec.location.clone())
        .or_else(|| {
            rec.run
                .outputs()
                .first()
                .map(|p| manifest::default_location(p))
        });
    if let Some(path) = location {
        if let Err(e) = manifest::write(&rec.run.finish(code), &path) {
            eprintln!("error: writing run manifest {}: {e}", path.display());
            return EXIT_ERROR;
        }
    }
    code
}

struct Recorder {
    run: RunRecorder,
    location: Option<PathBuf>,
}

impl Recorder {
    fn graph(&mut self, path: &Path) -> Result<Graph, Error> {
        self.run.input(path);
        read_graph(path)
    }

    fn write(&mut self, path: &Path, contents: &str) -> Result<(), Error> {
        fs::write(path, contents).map_err(|e| Error::Io(format!("{}: {e}", path.display())))?;
        self.run.output(path);
        Ok(())
    }
}

fn run(command: &Command, rec: &mut Recorder, out: &mut String) -> Result<i32, Error> {
    match command {
        Command::WlTest { a, b } => {
            let (g, h) = (rec.graph(a)?, rec.graph(b)?);
            Ok(match wl_test(&g, &h) {
                WlVerdict::Equivalent => {
                    let _ = writeln!(out, "equivalent");
                    EXIT_OK
                }
                WlVerdict::Distinguished { round } => {
                    let _ = writeln!(out, "distinguished at round {round}");
                    EXIT_NEGATIVE
                }
            })
        }
        Command::Refine { graph, dot } => {
            let g = rec.graph(graph)?;
            let trace = color_refine(&g, None)?;
            let stable = trace.stable();
            let _ = writeln!(
                out,
                "stable after {} rounds, {} classes",
                trace.stable_round(),
                stable.class_count()
            );
            for v in 0..g.vertex_count() {
                let _ = writeln!(out, "{v} {}", stable.get(v));
            }
            if let Some(path) = dot {
                rec.write(path, &to_dot(&g, Some(stable)))?;
            }
            Ok(EXIT_OK)
        }
        Command::BuildCover {
            base,
            voltage,
            output,
        } => {
            let g = rec.graph(base)?;
            rec.run.input(voltage);
            let va = read_voltage(voltage)?;
            let cm = build_cover(&g, &va)?;
            match output {
                Some(path) => {
                    rec.write(path, &write_edge_list(&cm.total))?;
                    let _ = writeln!(
                        out,
                        "degree {} cover: {} vertices, {} edges, {}",
                        covering_degree(&cm)?,
                        cm.total.vertex_count(),
                        cm.total.edge_count(),
                        if cm.total.is_connected() {
                            "connected"
                        } else {
                            "disconnected"
                        }
                    );
                }
                None => out.push_str(&write_edge_list(&cm.total)),
            }
            Ok(EXIT_OK)
        }
        Command::Ucball {
            graph,
            root,
            radius,
            dot,
        } => {
            let g = rec.graph(graph)?;
            if *root >= g.vertex_count() {
                return Err(Error::VertexOutOfRange {
                    vertex: *root,
                    vertex_count: g.vertex_count(),
                });
            }
            let ball = universal_cover_ball(&g, *root, *radius);
            let _ = writeln!(out, "nodes {}", ball.node_count());
            let _ = writeln!(out, "code {}", rooted_tree_canonical(&ball));
            if let Some(path) = dot {
                rec.write(path, &ball_dot(&ball))?;
            }
            Ok(EXIT_OK)
        }
        Command::CoverIso {
            base,
            a,
            b,
            witness,
        } => {
            let g = rec.graph(base)?;
            rec.run.input(a);
            rec.run.input(b);
            let src = build_cover(&g, &read_voltage(a)?)?;
            let dst = build_cover(&g, &read_voltage(b)?)?;
            let verdict = covers_isomorphic(&src, &dst)?;
            match verdict.witness() {
                Some(map) => {
                    let _ = writeln!(out, "isomorphic");
                    if *witness {
                        for (u, v) in map.iter().enumerate() {
                            let _ = writeln!(out, "{u} {v}");
                        }
                    }
                    Ok(EXIT_OK)
                }
                None => {
                    let _ = writeln!(out, "not isomorphic");
                    Ok(EXIT_NEGATIVE)
                }
            }
        }
        Command::GenCovers {
            base,
            degree,
            output,
            budget,
            dot,
            max_classes,
            workers,
            allow_nonrigid,
        } => {
            let g = rec.graph(base)?;
            let config = GenerateConfig {
                budget: *budget,
                max_classes: *max_classes,
                workers: workers.unwrap_or(0),
                require_discrete: !allow_nonrigid,
            };
            let ds = match generate_graphcovers(&g, *degree, &config) {
                Err(e @ Error::BudgetExceeded { .. }) => {
                    eprintln!("{}", predictions(&g, *degree)?);
                    return Err(e);
                }
                other => other?,
            };
            let manifest = export_dataset(&ds, output, *dot)?;
            rec.location = Some(output.join("run.json"));
            rec.run.output(&output.join("base.el"));
            for entry in &manifest.classes {
                rec.run.output(&output.join(&entry.file));
                if let Some(d) = &entry.dot {
                    rec.run.output(&output.join(d));
                }
            }
            rec.run.output(&output.join("manifest.json"));
            let _ = writeln!(
                out,
                "degree {}: {} classes ({} tuples scanned, {} connected{})",
                ds.degree,
                ds.stats.classes,
                ds.stats.scanned,
                ds.stats.connected,
                if ds.stats.complete {
                    ""
                } else {
                    ", stopped early"
                }
            );
            for entry in &manifest.classes {
                let _ = writeln!(out, "{} {}", entry.label, entry.file);
            }
            Ok(EXIT_OK)
        }
        Command::Verify { manifest } => {
            let ds = match load(rec, manifest)? {
                Ok(ds) => ds,
                Err(e) => {
                    let _ = writeln!(out, "FAIL load: {e}");
                    return Ok(EXIT_NEGATIVE);
                }
            };
            let report = verify_dataset(&ds);
            for check in &report.checks {
                let status = if check.passed { "PASS" } else { "FAIL" };
                let _ = writeln!(out, "{status} {}: {}", check.name, check.detail);
            }
            Ok(if report.passed() {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
        Command::Count {
            degree,
            rank,
            base,
            verify,
            budget,
        } => {
            let rank = match (rank, base) {
                (Some(r), _) => *r,
                (None, Some(path)) => {
                    let g = rec.graph(path)?;
                    if *verify {
                        let config = GenerateConfig {
                            budget: *budget,
                            ..Default::default()
                        };
                        let report = check_counting_consistency(&g, *degree, &config)?;
                        let _ = writeln!(out, "degree {} rank {}", report.degree, report.rank);
                        let _ = writeln!(out, "classes {}", report.classes);
                        let _ = writeln!(out, "subgroups {}", report.subgroup_count);
                        if let Some(b) = &report.lower_bound {
                            let _ = writeln!(out, "lower bound {b}");
                        }
                        let _ = writeln!(
                            out,
                            "connected voltages {} of {}",
                            report.connected_voltages, report.scanned
                        );
                        for c in &report.checks {
                            let status = if c.passed { "PASS" } else { "FAIL" };
                            let _ = writeln!(out, "{status} {}: {}", c.name, c.detail);
                        }
                        return Ok(if report.passed() {
                            EXIT_OK
                        } else {
                            EXIT_NEGATIVE
                        });
                    }
                    rank_from_graph(&g)?
                }
                (None, None) => unreachable!("clap requires --rank or --base"),
            };
            out.push_str(&count_lines(*degree, rank)?);
            Ok(EXIT_OK)
        }
        Command::MpCheck {
            manifest,
            features,
            seed,
            layers,
            hidden,
            aggregation,
            tolerance,
        } => {
            let ds = load(rec, manifest)??;
            let graphs: Vec<Graph> = ds
                .representatives
                .iter()
                .map(|r| r.graph().clone())
                .collect();
            let fs = match features {
                Features::Constant => FeatureSpec::Constant,
                Features::Degree => FeatureSpec::Degree,
                Features::Random => FeatureSpec::Random { seed: *seed },
                Features::Onehot => FeatureSpec::OneHotId,
            };
            let agg = match aggregation {
                Agg::Sum => Aggregation::Sum,
                Agg::Mean => Aggregation::Mean,
            };
            let first = graphs
                .first()
                .ok_or(Error::InvalidArgument("empty dataset".into()))?;
            let model = MPModel::new(fs.dimension(first), *hidden, *layers, *seed, agg);
            let report = indistinguishability_report(&graphs, fs, &model, *tolerance)?;
            let _ = writeln!(out, "L-infinity distances ({} graphs)", graphs.len());
            for row in &report.distances {
                let cells: Vec<String> = row.iter().map(|d| format!("{d:.3e}")).collect();
                let _ = writeln!(out, "{}", cells.join(" "));
            }
            let verdict = if report.indistinguishable {
                "indistinguishable"
            } else {
                "distinguishable"
            };
            let expected = fs.is_structural();
            let _ = writeln!(out, "verdict {verdict}");
            let _ = writeln!(
                out,
                "predicted {}",
                if expected {
                    "indistinguishable"
                } else {
                    "distinguishable"
                }
            );
            let _ = writeln!(out, "best accuracy {:.4}", report.predicted_accuracy);
            Ok(if report.indistinguishable == expected {
                EXIT_OK
            } else {
                EXIT_NEGATIVE
            })
        }
    }
}

/// Loads a dataset. The outer error is an I/O or format problem, the inner
/// one a dataset whose files disagree with its voltages.
fn load(rec: &mut Recorder, manifest: &Path) -> Result<Result<CoverDataset, Error>, Error> {
    rec.run.input(manifest);
    match load_dataset(manifest) {
        Ok((m, ds)) => {
            let dir = manifest.parent().unwrap_or(Path::new("."));
            rec.run.input(&dir.join(&m.base_file));
            for entry in &m.classes {
                rec.run.input(&dir.join(&entry.file));
            }
            Ok(Ok(ds))
        }
        Err(
            e @ (Error::InvalidCover(_) | Error::InvalidVoltage(_) | Error::UnequalFibers { .. }),
        ) => Ok(Err(e)),
        Err(e) => Err(e),
    }
}

fn count_lines(d: usize, r: usize) -> Result<String, Error> {
    let mut s = String::new();
    let n = hall_count(d, r)?.value;
    let _ = writeln!(s, "N({d},{r}) = {n}");
    if r >= 2 {
        let _ = writeln!(s, "lower bound on classes = {}", lower_bound(d, r)?);
    }
    let _ = writeln!(
        s,
        "connected voltages = {}",
        predicted_transitive_tuples(d, r)?
    );
    Ok(s)
}

fn predictions(base: &Graph, d: usize) -> Result<String, Error> {
    let r = rank_from_graph(base)?;
    if r == 0 {
        return Ok(format!(
            "base is a tree: one cover class iff d = 1 (d = {d})"
        ));
    }
    Ok(format!(
        "predictions for the refused scan:\n{}",
        count_lines(d, r)?.trim_end()
    ))
}

fn ball_dot(ball: &RootedTreeBall) -> String {
    let mut s = String::from("graph ball {\n");
    for (node, &v) in ball.label.iter().enumerate() {
        let _ = writeln!(s, "  {node} [label=\"{v}\"];");
    }
    for (p, children) in ball.children.iter().enumerate() {
        for c in children {
            let _ = writeln!(s, "  {p} -- {c};");
        }
    }
    s.push_str("}\n");
    s
}
