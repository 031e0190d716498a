//! Command line surface for the slimrect toolkit.
//!
//! Exit codes: 0 on success / all checks pass, 1 when a check fails,
//! 2 on input or recipe errors.

use std::collections::BTreeSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};

use slimrect::congruence::{con_lattice, con_generated, phi_iso, Partition};
use slimrect::constructions::{enumerate_sr, replay, BuildState, Budget, Recipe};
use slimrect::diagram::LatticeDiagram;
use slimrect::error::Error;
use slimrect::io;
use slimrect::lamps;
use slimrect::poset::Poset;
use slimrect::quotient;
use slimrect::realize;
use slimrect::render::render_svg;
use slimrect::suites;

#[derive(Parser)]
#[command(name = "slimrect", about = "Slim rectangular lattice toolkit")]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Replay a recipe and write the lattice JSON plus snapshots.
    Build {
        recipe: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Render a lattice JSON file as SVG.
    Render {
        lattice: PathBuf,
        #[arg(short, long)]
        out: PathBuf,
    },
    /// Report the lamps and the lamp poset of a lattice.
    Lamps { lattice: PathBuf },
    /// Report the congruence lattice: size and the poset of join-irreducible
    /// congruences, by the brute-force oracle, the lamp machinery, or both.
    Conlat {
        lattice: PathBuf,
        #[arg(long, conflicts_with_all = ["lamps", "both"])]
        oracle: bool,
        #[arg(long, conflicts_with = "both")]
        lamps: bool,
        #[arg(long)]
        both: bool,
    },
    /// Quotient diagram by a congruence, given as a generating edge or an
    /// explicit partition file (JSON list of blocks of vertex ids).
    Quotient {
        lattice: PathBuf,
        #[arg(long, value_name = "A,B")]
        edge: Option<String>,
        #[arg(long)]
        partition: Option<PathBuf>,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Thrust a k-fold lamp atop the addressed lamp of a lattice or recipe.
    Thrust {
        lattice: PathBuf,
        #[arg(long)]
        lamp: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Realize the ordinal sum at an internal lamp of the recipe-built
    /// lattice: widen, pick unused tubes, pile, and replay the second recipe.
    Jsum {
        lattice_k: PathBuf,
        #[arg(long)]
        at: String,
        #[arg(long, value_name = "RECIPE")]
        m: PathBuf,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Thrust with the brother-extension postcondition checked by the oracle.
    Brosum {
        lattice: PathBuf,
        #[arg(long)]
        lamp: String,
        #[arg(long, default_value_t = 1)]
        k: usize,
        #[arg(short, long)]
        out: Option<PathBuf>,
    },
    /// Run an invariant suite on a lattice or recipe file.
    Check {
        path: PathBuf,
        #[arg(long, default_value = "all")]
        suite: String,
    },
    /// Enumerate the recipe corpus within a budget and check everything.
    Corpus(CorpusArgs),
}

#[derive(Args)]
struct CorpusArgs {
    #[arg(long, default_value_t = 1)]
    max_steps: usize,
    #[arg(long, default_value_t = 1)]
    max_k: usize,
    #[arg(long, default_value_t = 2)]
    max_grid: usize,
    /// Suite to run on every enumerated lattice.
    #[arg(long, default_value = "structure")]
    suite: String,
}

enum Input {
    Lattice(LatticeDiagram),
    Recipe(BuildState),
}

impl Input {
    fn diagram(&self) -> &LatticeDiagram {
        match self {
            Input::Lattice(d) => d,
            Input::Recipe(s) => s.current(),
        }
    }

    fn state(&self) -> Option<&BuildState> {
        match self {
            Input::Recipe(s) => Some(s),
            Input::Lattice(_) => None,
        }
    }
}

/// Lattice and recipe files are both JSON; recipes carry a "base" key.
fn load_input(path: &Path) -> Result<Input, Error> {
    let text = std::fs::read_to_string(path)?;
    let looks_like_recipe = serde_json::from_str::<serde_json::Value>(&text)
        .map(|v| v.get("base").is_some())
        .unwrap_or(false);
    if looks_like_recipe {
        let recipe = io::recipe_from_json(&text)?;
        Ok(Input::Recipe(replay(&recipe)?))
    } else {
        Ok(Input::Lattice(io::lattice_from_json(&text)?))
    }
}

fn load_recipe_state(path: &Path) -> Result<BuildState, Error> {
    let text = std::fs::read_to_string(path)?;
    let recipe = io::recipe_from_json(&text)?;
    replay(&recipe)
}

fn write_out(path: &Path, content: &str) -> Result<(), Error> {
    std::fs::write(path, content)?;
    Ok(())
}

fn emit_lattice(d: &LatticeDiagram, out: Option<&PathBuf>) -> Result<(), Error> {
    let json = io::lattice_to_json(d);
    match out {
        Some(p) => write_out(p, &json),
        None => {
            println!("{json}");
            Ok(())
        }
    }
}

fn lamp_report_json(d: &LatticeDiagram) -> String {
    let all = lamps::lamps(d);
    let poset = lamps::lamp_poset(d, &all);
    let lamp_objs: Vec<serde_json::Value> = all
        .iter()
        .map(|l| {
            serde_json::json!({
                "foot": d.label(l.foot),
                "peak": d.label(l.peak),
                "kind": match l.kind {
                    lamps::LampKind::LeftBoundary => "left-boundary",
                    lamps::LampKind::RightBoundary => "right-boundary",
                    lamps::LampKind::Internal => "internal",
                },
                "tubes": l
                    .tubes
                    .iter()
                    .map(|&(u, v)| vec![d.label(u).to_string(), d.label(v).to_string()])
                    .collect::<Vec<_>>(),
            })
        })
        .collect();
    let covers: Vec<Vec<String>> = poset
        .covers()
        .iter()
        .map(|&(a, b)| vec![poset.label(a).to_string(), poset.label(b).to_string()])
        .collect();
    serde_json::to_string_pretty(&serde_json::json!({
        "lamps": lamp_objs,
        "poset": { "elements": poset.labels(), "covers": covers },
    }))
    .expect("serializable")
}

fn run() -> Result<bool, Error> {
    let cli = Cli::parse();
    match cli.command {
        Command::Build { recipe, out } => {
            let state = load_recipe_state(&recipe)?;
            write_out(&out, &io::lattice_to_json(state.current()))?;
            for (i, snap) in state.snapshots.iter().enumerate() {
                let p = out.with_extension(format!("snap{i}.json"));
                write_out(&p, &io::lattice_to_json(snap))?;
            }
            Ok(true)
        }
        Command::Render { lattice, out } => {
            let input = load_input(&lattice)?;
            write_out(&out, &render_svg(input.diagram()))?;
            Ok(true)
        }
        Command::Lamps { lattice } => {
            let input = load_input(&lattice)?;
            println!("{}", lamp_report_json(input.diagram()));
            Ok(true)
        }
        Command::Conlat {
            lattice,
            oracle,
            lamps: by_lamps,
            both,
        } => {
            let input = load_input(&lattice)?;
            let d = input.diagram();
            let mode = if both {
                "both"
            } else if by_lamps {
                "lamps"
            } else if oracle {
                "oracle"
            } else {
                "both"
            };
            let mut out = serde_json::Map::new();
            let mut agree = true;
            if mode != "lamps" {
                let con = con_lattice(d);
                let jp = con.jir_poset();
                out.insert("con_size".into(), con.elements.len().into());
                out.insert(
                    "jir_con".into(),
                    serde_json::json!({
                        "elements": jp.labels(),
                        "covers": jp.covers().iter()
                            .map(|&(a, b)| vec![jp.label(a).to_string(), jp.label(b).to_string()])
                            .collect::<Vec<_>>(),
                    }),
                );
                if mode == "both" {
                    let all = lamps::lamps(d);
                    let lp = lamps::lamp_poset(d, &all);
                    agree = phi_iso(d, &all, &lp, &con).is_ok();
                    out.insert("lamp_jir_agree".into(), agree.into());
                }
            }
            if mode != "oracle" {
                let all = lamps::lamps(d);
                let lp = lamps::lamp_poset(d, &all);
                out.insert(
                    "lamp_poset".into(),
                    serde_json::json!({
                        "elements": lp.labels(),
                        "covers": lp.covers().iter()
                            .map(|&(a, b)| vec![lp.label(a).to_string(), lp.label(b).to_string()])
                            .collect::<Vec<_>>(),
                    }),
                );
            }
            println!(
                "{}",
                serde_json::to_string_pretty(&serde_json::Value::Object(out)).unwrap()
            );
            Ok(agree)
        }
        Command::Quotient {
            lattice,
            edge,
            partition,
            out,
        } => {
            let input = load_input(&lattice)?;
            let d = input.diagram();
            let alpha = match (edge, partition) {
                (Some(e), None) => {
                    let (a, b) = e
                        .split_once(',')
                        .ok_or_else(|| Error::UnknownLabel(e.clone()))?;
                    con_generated(d, &[(d.idx(a.trim())?, d.idx(b.trim())?)])
                }
                (None, Some(p)) => {
                    let text = std::fs::read_to_string(&p)?;
                    let blocks: Vec<Vec<String>> = serde_json::from_str(&text)?;
                    let mut idx_blocks = Vec::new();
                    for block in blocks {
                        let mut ib = Vec::new();
                        for l in block {
                            ib.push(d.idx(&l)?);
                        }
                        idx_blocks.push(ib);
                    }
                    Partition::from_blocks(d.n(), &idx_blocks)
                }
                _ => {
                    return Err(Error::UnknownLabel(
                        "exactly one of --edge and --partition is required".into(),
                    ))
                }
            };
            let r = quotient::quotient_diagram(d, &alpha)?;
            eprintln!("verdict: {}", r.verdict);
            if let Some(sub) = &r.diagram {
                emit_lattice(sub, out.as_ref())?;
            }
            Ok(r.verdict.is_pass())
        }
        Command::Thrust { lattice, lamp, k, out } => {
            let input = load_input(&lattice)?;
            let (nd, _) = slimrect::constructions::thrust_lamp(input.diagram(), &lamp, k, 1000)?;
            emit_lattice(&nd, out.as_ref())?;
            Ok(true)
        }
        Command::Jsum {
            lattice_k,
            at,
            m,
            out,
        } => {
            let state = load_recipe_state(&lattice_k)?;
            let m_text = std::fs::read_to_string(&m)?;
            let m_recipe: Recipe = io::recipe_from_json(&m_text)?;
            let res = realize::realize_jsum(&state, &at, &m_recipe)?;
            emit_lattice(res.state.current(), out.as_ref())?;
            Ok(true)
        }
        Command::Brosum { lattice, lamp, k, out } => {
            let state = load_recipe_state(&lattice)?;
            let next = realize::realize_brosum(&state, &lamp, k)?;
            emit_lattice(next.current(), out.as_ref())?;
            Ok(true)
        }
        Command::Check { path, suite } => {
            let input = load_input(&path)?;
            let report = suites::run_suite(input.diagram(), input.state(), &suite)?;
            print!("{report}");
            Ok(report.pass())
        }
        Command::Corpus(args) => {
            let budget = Budget {
                max_steps: args.max_steps,
                max_k: args.max_k,
                max_grid: args.max_grid,
            };
            let mut total = 0usize;
            let mut failed = 0usize;
            let mut posets: Vec<Poset> = Vec::new();
            for state in enumerate_sr(budget) {
                total += 1;
                let d = state.current();
                let report = suites::run_suite(d, Some(&state), &args.suite)?;
                if !report.pass() {
                    failed += 1;
                    eprintln!("FAIL {:?}\n{report}", state.recipe);
                }
                let all = lamps::lamps(d);
                let lp = lamps::lamp_poset(d, &all);
                if !posets.iter().any(|p| p.is_isomorphic(&lp)) {
                    posets.push(lp);
                }
            }
            println!("checked {total} lattices, {failed} failures");
            println!("distinct lamp posets observed: {}", posets.len());
            let mut shapes: BTreeSet<String> = BTreeSet::new();
            for p in &posets {
                shapes.insert(format!(
                    "{} elements, {} covers",
                    p.n(),
                    p.covers().len()
                ));
            }
            for s in shapes {
                println!("  {s}");
            }
            Ok(failed == 0)
        }
    }
}

fn main() -> ExitCode {
    match run() {
        Ok(true) => ExitCode::from(0),
        Ok(false) => ExitCode::from(1),
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(2)
        }
    }
}
