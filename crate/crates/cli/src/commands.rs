use std::fs;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use rayon::prelude::*;
use serde_json::json;

use steiner::design::{admissible_table, design_from_orbits};
use steiner::exact_cover::{self, SearchLimits};
use steiner::extension::{extend_steiner, extension_instance, ExtensionProblem};
use steiner::isomorphism::{automorphism_group, representative_indices};
use steiner::kramer_mesner::km_search;
use steiner::orbits::orbit_transversal;
use steiner::{fixtures, io, Design, Params, PermGroup, Verification};

use crate::manifest::RunManifest;
use crate::{Cli, Command, Format, XcAction};

/// Stdout writes that end the process quietly once the reader has gone.
macro_rules! out {
    ($($arg:tt)*) => {
        crate::commands::write_stdout(format_args!($($arg)*), false)
    };
}

macro_rules! outln {
    ($($arg:tt)*) => {
        crate::commands::write_stdout(format_args!($($arg)*), true)
    };
}

pub fn write_stdout(args: std::fmt::Arguments, newline: bool) {
    use std::io::Write;
    let mut h = std::io::stdout().lock();
    let r = h.write_fmt(args).and_then(|_| if newline { h.write_all(b"\n") } else { Ok(()) });
    if let Err(e) = r {
        if e.kind() == std::io::ErrorKind::BrokenPipe {
            std::process::exit(0);
        }
        eprintln!("error: {e}");
        std::process::exit(2);
    }
}

pub const NODE_LIMIT_VAR: &str = "STEINER_NODE_LIMIT";

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{}: {source}", path.display())]
    Io { path: PathBuf, source: std::io::Error },
    #[error("{}: {source}", path.display())]
    Input { path: PathBuf, source: steiner::Error },
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Domain(#[from] steiner::Error),
}

impl CliError {
    pub fn exit_code(&self) -> u8 {
        match self {
            CliError::Domain(_) => 1,
            _ => 2,
        }
    }
}

type Result<T> = std::result::Result<T, CliError>;

/// A file read once, kept for digesting.
struct Input {
    path: PathBuf,
    text: String,
    one_based: bool,
}

impl Input {
    /// A `# one-based` comment line marks a file as 1-based on its own.
    fn read(path: &Path, one_based: bool) -> Result<Self> {
        let text = fs::read_to_string(path).map_err(|source| CliError::Io {
            path: path.into(),
            source,
        })?;
        let marked = text.lines().any(|l| l.trim() == "# one-based");
        Ok(Input {
            path: path.into(),
            one_based: one_based || marked,
            text,
        })
    }

    fn fail(&self, source: steiner::Error) -> CliError {
        CliError::Input {
            path: self.path.clone(),
            source,
        }
    }

    fn design(&self) -> Result<Design> {
        io::parse_design(&self.text, self.one_based).map_err(|e| self.fail(e))
    }

    fn group(&self) -> Result<PermGroup> {
        io::parse_group(&self.text, self.one_based).map_err(|e| self.fail(e))
    }

    fn block_list(&self) -> Result<(usize, Vec<Vec<usize>>)> {
        io::parse_block_list(&self.text, self.one_based).map_err(|e| self.fail(e))
    }

    fn record(&self, m: &mut RunManifest) {
        m.input(&self.path, self.text.as_bytes());
    }
}

fn write_file(path: &Path, contents: &str) -> Result<()> {
    fs::write(path, contents).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn create_dir(path: &Path) -> Result<()> {
    fs::create_dir_all(path).map_err(|source| CliError::Io {
        path: path.into(),
        source,
    })
}

fn params(t: usize, k: usize, v: usize) -> Result<Params> {
    Params::new(t, k, v).map_err(|e| CliError::Usage(e.to_string()))
}

fn node_limit(flag: Option<u64>) -> Result<Option<u64>> {
    if flag.is_some() {
        return Ok(flag);
    }
    match std::env::var(NODE_LIMIT_VAR) {
        Ok(s) => s
            .trim()
            .parse()
            .map(Some)
            .map_err(|_| CliError::Usage(format!("{NODE_LIMIT_VAR}={s:?} is not a node count"))),
        Err(_) => Ok(None),
    }
}

fn render(d: &Design, format: Format) -> String {
    match format {
        Format::Blocks => io::write_design(d),
        Format::Json => io::design_to_json(d) + "\n",
        Format::Gap => io::write_gap(d),
    }
}

fn emit(text: &str, out: Option<&Path>) -> Result<()> {
    match out {
        Some(p) => write_file(p, text),
        None => {
            out!("{text}");
            Ok(())
        }
    }
}

fn stats_json(s: &exact_cover::SearchStats) -> serde_json::Value {
    json!({"nodes": s.nodes, "solutions": s.solutions, "completed": s.completed})
}

pub fn run(cli: &Cli) -> Result<ExitCode> {
    let ob = cli.one_based;
    match &cli.command {
        Command::Verify { t, k, file } => {
            let d = Input::read(file, ob)?.design()?;
            let shift = usize::from(ob);
            match d.verify(params(*t, *k, d.v())?)? {
                Verification::Valid { blocks } => {
                    outln!("valid, b={blocks}");
                    Ok(ExitCode::SUCCESS)
                }
                Verification::Invalid { subset, coverage } => {
                    let pts: Vec<String> = subset.iter().map(|p| (p + shift).to_string()).collect();
                    outln!("invalid: {t}-subset {{{}}} lies in {coverage} blocks", pts.join(","));
                    Ok(ExitCode::from(1))
                }
            }
        }

        Command::Derive {
            file,
            point,
            format,
            out,
        } => {
            let d = Input::read(file, ob)?.design()?;
            let p = if point == "inf" || point == "∞" {
                d.v().checked_sub(1)
            } else {
                point
                    .parse::<usize>()
                    .ok()
                    .and_then(|p| p.checked_sub(usize::from(ob)))
            }
            .ok_or_else(|| CliError::Usage(format!("invalid point {point:?}")))?;
            emit(&render(&d.derived(p)?, *format), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::OrbitDesign {
            group,
            base,
            format,
            out,
        } => {
            let g = Input::read(group, ob)?.group()?;
            let (v, blocks) = Input::read(base, ob)?.block_list()?;
            let d = design_from_orbits(&g, &blocks, v)?;
            emit(&render(&d, *format), out.as_deref())?;
            Ok(ExitCode::SUCCESS)
        }

        Command::Orbits { group, s } => {
            let g = Input::read(group, ob)?.group()?;
            let tr = orbit_transversal(&g, *s)?;
            outln!("# n={} s={s} orbits={}", tr.n, tr.len());
            for o in &tr.orbits {
                let pts: Vec<String> = o.representative.iter().map(|p| p.to_string()).collect();
                outln!("{}\t{}", pts.join(" "), o.size);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Km {
            group,
            v,
            t,
            k,
            max_solutions,
            budget,
            out,
        } => {
            let start = Instant::now();
            let gi = Input::read(group, ob)?;
            let g = gi.group()?;
            let limits = SearchLimits {
                max_solutions: *max_solutions,
                node_limit: node_limit(budget.nodes)?,
            };
            let mut m = RunManifest::new(
                "km",
                json!({"v": v, "t": t, "k": k, "max_solutions": limits.max_solutions, "node_limit": limits.node_limit}),
            );
            gi.record(&mut m);
            let outcome = km_search(&g, params(*t, *k, *v)?, limits)?;
            create_dir(out)?;
            for (i, d) in outcome.designs.iter().enumerate() {
                write_file(&out.join(format!("solution-{i:04}.blocks")), &io::write_design(d))?;
            }
            m.shape = json!({"rows": outcome.rows, "cols": outcome.cols, "options": outcome.options, "discarded": outcome.discarded});
            m.stats = stats_json(&outcome.stats);
            m.finish(start.elapsed());
            m.append_to(out).map_err(|source| CliError::Io {
                path: out.clone(),
                source,
            })?;
            outln!(
                "{} designs, matrix {}x{}, {} options ({} discarded), {} nodes{}",
                outcome.designs.len(),
                outcome.rows,
                outcome.cols,
                outcome.options,
                outcome.discarded,
                outcome.stats.nodes,
                if outcome.stats.completed { "" } else { ", search stopped early" }
            );
            Ok(ExitCode::SUCCESS)
        }

        Command::Extend {
            design,
            group,
            t,
            k,
            max_solutions,
            budget,
            emit_instance,
            out,
        } => {
            let di = Input::read(design, ob)?;
            let base = di.design()?;
            let p = params(*t, *k, base.v())?;
            let limits = SearchLimits {
                max_solutions: *max_solutions,
                node_limit: node_limit(budget.nodes)?,
            };
            let groups = group
                .iter()
                .map(|g| Input::read(g, ob))
                .collect::<Result<Vec<_>>>()?;
            let single = groups.len() == 1;
            create_dir(out)?;
            let lines = groups
                .par_iter()
                .enumerate()
                .map(|(i, gi)| {
                    let dir = if single {
                        out.clone()
                    } else {
                        let stem = gi.path.file_stem().map(|s| s.to_string_lossy().into_owned()).unwrap_or_default();
                        out.join(format!("task-{i:03}-{stem}"))
                    };
                    let xc = emit_instance.as_ref().map(|f| {
                        if single {
                            f.clone()
                        } else {
                            dir.join(f.file_name().unwrap_or(f.as_os_str()))
                        }
                    });
                    extend_task(&di, &base, gi, p, limits, xc.as_deref(), &dir)
                })
                .collect::<Result<Vec<_>>>()?;
            for l in lines {
                outln!("{l}");
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Xc {
            action:
                XcAction::Solve {
                    file,
                    max_solutions,
                    budget,
                    count_only,
                    out,
                },
        } => {
            let start = Instant::now();
            let xi = Input::read(file, false)?;
            let inst = io::parse_xc(&xi.text).map_err(|e| xi.fail(e))?;
            let limits = SearchLimits {
                max_solutions: *max_solutions,
                node_limit: node_limit(budget.nodes)?,
            };
            let mut m = RunManifest::new(
                "xc solve",
                json!({"max_solutions": limits.max_solutions, "node_limit": limits.node_limit, "count_only": count_only}),
            );
            xi.record(&mut m);
            let stats = if *count_only {
                exact_cover::count_solutions(&inst, limits.node_limit)?
            } else {
                let parallel = cli.jobs.is_some_and(|j| j > 1) && limits.node_limit.is_none();
                let (sols, stats) = if parallel {
                    exact_cover::solve_parallel(&inst, limits)?
                } else {
                    exact_cover::solve(&inst, limits)?
                };
                for s in &sols {
                    let line: Vec<String> = s.option_indices.iter().map(|o| o.to_string()).collect();
                    outln!("{}", line.join(" "));
                }
                stats
            };
            outln!(
                "solutions={} nodes={} completed={}",
                stats.solutions, stats.nodes, stats.completed
            );
            m.shape = json!({"items": inst.item_count(), "options": inst.option_count()});
            m.stats = stats_json(&stats);
            m.finish(start.elapsed());
            match out {
                Some(dir) => {
                    create_dir(dir)?;
                    m.append_to(dir).map_err(|source| CliError::Io {
                        path: dir.clone(),
                        source,
                    })?;
                }
                None => eprintln!("manifest: {}", m.to_line()),
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::IsoFilter { files, out } => {
            let designs = files
                .iter()
                .map(|f| Input::read(f, ob)?.design())
                .collect::<Result<Vec<_>>>()?;
            let reps = representative_indices(&designs);
            create_dir(out)?;
            for &i in &reps {
                let name = files[i]
                    .file_name()
                    .map(|s| s.to_string_lossy().into_owned())
                    .unwrap_or_else(|| format!("design-{i}.blocks"));
                let name = format!("{i:04}-{name}");
                write_file(&out.join(&name), &io::write_design(&designs[i]))?;
                outln!("{}", files[i].display());
            }
            eprintln!("kept {} of {} designs", reps.len(), designs.len());
            Ok(ExitCode::SUCCESS)
        }

        Command::Aut { file, nodes } => {
            let d = Input::read(file, ob)?.design()?;
            let aut = automorphism_group(&d, *nodes)?;
            outln!("# order={}", aut.order);
            out!("{}", io::write_group(&aut.group));
            Ok(ExitCode::SUCCESS)
        }

        Command::Admissible { t, vmax, kmin, kmax } => {
            if *t < 2 {
                return Err(CliError::Usage("--t must be at least 2".into()));
            }
            let lo = kmin.unwrap_or(t + 1);
            let hi = kmax.unwrap_or(vmax.saturating_sub(1));
            outln!("# v k b");
            for r in admissible_table(*t, *vmax, lo..=hi) {
                let b = r.block_count.map(|b| b.to_string()).unwrap_or_default();
                outln!("{} {} {b}", r.params.v, r.params.k);
            }
            Ok(ExitCode::SUCCESS)
        }

        Command::Fixtures { name, out } => {
            let names: Vec<&str> = if name == "all" {
                fixtures::FIXTURE_NAMES.to_vec()
            } else {
                vec![name.as_str()]
            };
            create_dir(out)?;
            for n in names {
                let f = fixtures::fixture(n).map_err(|e| match e {
                    steiner::Error::UnknownFixture(_) => CliError::Usage(format!(
                        "unknown fixture {n:?}; known: {}",
                        fixtures::FIXTURE_NAMES.join(", ")
                    )),
                    other => other.into(),
                })?;
                for (file, contents) in &f.files {
                    let path = out.join(file);
                    write_file(&path, contents)?;
                    outln!("{}", path.display());
                }
            }
            Ok(ExitCode::SUCCESS)
        }
    }
}

fn extend_task(
    di: &Input,
    base: &Design,
    gi: &Input,
    p: Params,
    limits: SearchLimits,
    emit_instance: Option<&Path>,
    dir: &Path,
) -> Result<String> {
    let start = Instant::now();
    let g = gi.group()?;
    let mut m = RunManifest::new(
        "extend",
        json!({"t": p.t, "k": p.k, "v": p.v, "max_solutions": limits.max_solutions, "node_limit": limits.node_limit}),
    );
    di.record(&mut m);
    gi.record(&mut m);
    create_dir(dir)?;
    let problem = ExtensionProblem::new(base.clone(), g, p)?;
    if let Some(f) = emit_instance {
        let inst = extension_instance(&problem)?;
        write_file(f, &io::write_xc(&inst.instance))?;
    }
    let outcome = extend_steiner(&problem, limits)?;
    for (i, e) in outcome.designs.iter().enumerate() {
        write_file(&dir.join(format!("extension-{i:04}.blocks")), &io::write_design(e))?;
    }
    m.shape = json!({"items": outcome.items, "options": outcome.options, "discarded": outcome.discarded});
    m.stats = stats_json(&outcome.stats);
    m.finish(start.elapsed());
    m.append_to(dir).map_err(|source| CliError::Io {
        path: dir.into(),
        source,
    })?;
    Ok(format!(
        "{}: {} extensions, {} items, {} options ({} discarded), {} nodes{}",
        gi.path.display(),
        outcome.designs.len(),
        outcome.items,
        outcome.options,
        outcome.discarded,
        outcome.stats.nodes,
        if outcome.stats.completed { "" } else { ", search stopped early" }
    ))
}
