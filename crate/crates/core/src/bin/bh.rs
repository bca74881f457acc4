use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Parser, Subcommand};
use serde::Serialize;

use bh_core::coloring::{gamma_graph, is_forest, GammaGraph};
use bh_core::cover::FORMAT_VERSION;
use bh_core::graphcover::build_cover;
use bh_core::io::{read_cover, read_gens, read_graph, to_pretty_json};
use bh_core::lifting::{essential_flags, region_graph, CutPresentation, LiftComponent, RegionGraph, WclOutcome, DEFAULT_ORBIT_LIMIT};
use bh_core::orbit::{mcg_orbit, OrbitEntry};
use bh_core::report::Report;
use bh_core::verdict::{bh_verdict, SearchData};
use bh_core::{Error, MonodromyCover};

#[derive(Parser)]
#[command(name = "bh", version, about = "Birman-Hilden analysis of finite branched covers given by monodromy")]
struct Cli {
    /// Write the JSON result to this file instead of stdout.
    #[arg(long, short = 'o', global = true, value_name = "PATH")]
    out: Option<PathBuf>,
    /// Maximum number of orbit classes to visit.
    #[arg(long, global = true, default_value_t = DEFAULT_ORBIT_LIMIT)]
    limit: usize,
    /// Automorphisms and cut presentations for the base surface.
    #[arg(long, global = true, value_name = "FILE")]
    gens: Option<PathBuf>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Properties, total space, fibers and verdict.
    Analyze {
        /// Cover file (JSON).
        cover: PathBuf,
    },
    /// Lift a curve and classify its components.
    Lift {
        /// Cover file (JSON).
        cover: PathBuf,
        /// Standard curve around the first M branch points (genus-0 bases).
        #[arg(long, conflicts_with = "cut")]
        m: Option<usize>,
        /// Index of a cut presentation in the gens file.
        #[arg(long)]
        cut: Option<usize>,
    },
    /// Decide the weak curve lifting property.
    Wcl {
        /// Cover file (JSON).
        cover: PathBuf,
    },
    /// Birman-Hilden verdict with rule and certificate.
    Verdict {
        /// Cover file (JSON).
        cover: PathBuf,
    },
    /// Mapping class group orbit of the cover up to relabeling.
    Orbit {
        /// Cover file (JSON).
        cover: PathBuf,
    },
    /// The bipartite graph on the fibers over two branch points.
    Gamma {
        /// Cover file (JSON).
        cover: PathBuf,
        /// First branch point index (1-based).
        #[arg(long)]
        i: usize,
        /// Second branch point index (1-based).
        #[arg(long)]
        j: usize,
    },
    /// Build the cover of the twice-branched torus attached to a graph.
    FromGraph {
        /// Graph file (JSON).
        graph: PathBuf,
    },
}

#[derive(Serialize)]
struct LiftOutput {
    format: u32,
    cut: CutPresentation,
    components: Vec<LiftComponent>,
    region_graph: RegionGraph,
}

#[derive(Serialize)]
struct WclOutput {
    format: u32,
    #[serde(flatten)]
    outcome: WclOutcome,
}

#[derive(Serialize)]
struct OrbitOutput<'a> {
    format: u32,
    size: usize,
    classes: &'a [OrbitEntry],
}

#[derive(Serialize)]
struct GammaOutput {
    format: u32,
    #[serde(flatten)]
    gamma: GammaGraph,
    forest: bool,
}

struct Failure {
    code: u8,
    message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match e {
            Error::OrbitLimitExceeded(_) => 3,
            _ => 2,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn read_input(path: &Path) -> Result<(Vec<u8>, String), Failure> {
    let bytes = std::fs::read(path).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    let text = String::from_utf8(bytes.clone()).map_err(|_| Failure {
        code: 2,
        message: format!("{}: not valid UTF-8", path.display()),
    })?;
    Ok((bytes, text))
}

fn load_cover(path: &Path) -> Result<(Vec<u8>, MonodromyCover), Failure> {
    let (bytes, text) = read_input(path)?;
    let cover = read_cover(&text).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })?;
    Ok((bytes, cover))
}

fn load_gens(path: Option<&Path>, cover: &MonodromyCover) -> Result<SearchData, Failure> {
    let Some(path) = path else {
        return Ok(SearchData::default());
    };
    let (_, text) = read_input(path)?;
    read_gens(&text, cover.signature()).map_err(|e| Failure {
        code: 2,
        message: format!("{}: {e}", path.display()),
    })
}

fn emit<T: Serialize>(value: &T, out: Option<&Path>) -> Result<(), Failure> {
    let text = to_pretty_json(value)?;
    match out {
        Some(p) => std::fs::write(p, text).map_err(|e| Failure {
            code: 3,
            message: format!("{}: {e}", p.display()),
        }),
        None => {
            print!("{text}");
            Ok(())
        }
    }
}

fn run(cli: Cli) -> Result<u8, Failure> {
    let out = cli.out.as_deref();
    let gens = cli.gens.as_deref();
    match cli.command {
        Command::Analyze { cover } => {
            let (bytes, cover) = load_cover(&cover)?;
            let data = load_gens(gens, &cover)?;
            emit(&Report::new(&bytes, &cover, &data, cli.limit)?, out)?;
            Ok(0)
        }
        Command::Lift { cover, m, cut } => {
            let (_, cover) = load_cover(&cover)?;
            let data = load_gens(gens, &cover)?;
            let cut = match (m, cut) {
                (Some(m), None) => CutPresentation::disk(cover.signature(), m)?,
                (None, Some(idx)) => data
                    .cuts
                    .as_ref()
                    .and_then(|c| c.get(idx))
                    .cloned()
                    .ok_or_else(|| Failure {
                        code: 2,
                        message: format!("cut {idx} is not defined; pass a gens file with cuts"),
                    })?,
                _ => {
                    return Err(Failure {
                        code: 2,
                        message: "lift needs exactly one of --m or --cut".into(),
                    })
                }
            };
            let lifted = essential_flags(&cover, &cut)?;
            let graph = region_graph(&cover, &cut)?;
            emit(
                &LiftOutput {
                    format: FORMAT_VERSION,
                    cut,
                    components: lifted.components,
                    region_graph: graph,
                },
                out,
            )?;
            Ok(0)
        }
        Command::Wcl { cover } => {
            let (_, cover) = load_cover(&cover)?;
            let data = load_gens(gens, &cover)?;
            let (Some(g), Some(catalog)) = (data.generators(&cover)?, data.catalog(&cover)?) else {
                return Err(match cover.signature() {
                    s if s.genus == 0 => Error::TooFewBranchPoints(s.branch_count),
                    s => Error::UnsupportedSignature(format!(
                        "{s}: positive-genus bases need --gens with automorphisms and cuts"
                    )),
                }
                .into());
            };
            let outcome = bh_core::lifting::wcl_decision_with(&cover, &g, &catalog, cli.limit)?;
            let code = if outcome.holds() { 0 } else { 10 };
            emit(
                &WclOutput {
                    format: FORMAT_VERSION,
                    outcome,
                },
                out,
            )?;
            Ok(code)
        }
        Command::Verdict { cover } => {
            let (_, cover) = load_cover(&cover)?;
            let data = load_gens(gens, &cover)?;
            let v = bh_verdict(&cover, &data, cli.limit)?;
            emit(&v, out)?;
            Ok(v.status.exit_code() as u8)
        }
        Command::Orbit { cover } => {
            let (_, cover) = load_cover(&cover)?;
            let data = load_gens(gens, &cover)?;
            let g = data.generators(&cover)?.ok_or_else(|| Failure {
                code: 2,
                message: format!("{}: pass --gens with automorphisms", cover.signature()),
            })?;
            let table = mcg_orbit(&cover, &g, cli.limit)?;
            emit(
                &OrbitOutput {
                    format: FORMAT_VERSION,
                    size: table.len(),
                    classes: &table.classes,
                },
                out,
            )?;
            Ok(0)
        }
        Command::Gamma { cover, i, j } => {
            let (_, cover) = load_cover(&cover)?;
            let gamma = gamma_graph(&cover, i, j)?;
            let forest = is_forest(&gamma);
            emit(
                &GammaOutput {
                    format: FORMAT_VERSION,
                    gamma,
                    forest,
                },
                out,
            )?;
            Ok(0)
        }
        Command::FromGraph { graph } => {
            let (_, text) = read_input(&graph)?;
            let g = read_graph(&text).map_err(|e| Failure {
                code: 2,
                message: format!("{}: {e}", graph.display()),
            })?;
            emit(&build_cover(&g)?, out)?;
            Ok(0)
        }
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(code) => ExitCode::from(code),
        Err(f) => {
            eprintln!("bh: error: {}", f.message);
            ExitCode::from(f.code)
        }
    }
}
