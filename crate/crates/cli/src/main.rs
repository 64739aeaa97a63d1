//! `modcycle`: command-line front end for the modcycle library.
//!
//! Exit codes: 0 pass, 1 violation or refutation found, 2 usage or input
//! error, 3 search budget exhausted.

mod config;
mod input;

use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use clap::{Args, Parser, Subcommand};
use serde::Serialize;
use serde_json::{json, Value};

use modcycle::campaign::{self, CampaignOptions, Fault, VerificationReport};
use modcycle::connectivity::{block_decomposition, is_2_connected, is_essentially_3_connected};
use modcycle::cycles::{cycle_length_residues, cycle_residues_through, find_cycle_mod, path_residues, Budget};
use modcycle::enumerate::{count_class, for_each_in_class, ClassConstraints};
use modcycle::families::{
    check_lemma_residues, check_observation_special, derive_special_catalog, generate_exceptional,
    recognize_exceptional, CatalogRecord, Recognition, SpecialCatalog,
};
use modcycle::planarity::{is_planar, PLANARITY_MAX_ORDER};
use modcycle::{Error, Graph, Suppressed};

use config::FileConfig;
use input::Format;

#[derive(Debug, thiserror::Error)]
pub enum CliError {
    #[error("{0}")]
    Usage(String),
    #[error(transparent)]
    Lib(#[from] Error),
}

impl CliError {
    fn exit_code(&self) -> u8 {
        match self {
            CliError::Usage(_) => 2,
            CliError::Lib(Error::Indeterminate { .. }) => 3,
            CliError::Lib(Error::Consistency(_)) => 1,
            CliError::Lib(_) => 2,
        }
    }
}

/// Whether a command found something wrong with its input.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum Outcome {
    Pass,
    Violation,
}

impl Outcome {
    fn from_ok(ok: bool) -> Outcome {
        if ok {
            Outcome::Pass
        } else {
            Outcome::Violation
        }
    }
}

#[derive(Parser, Debug)]
#[command(name = "modcycle", version, about = "Cycles modulo k: search, recognition and exhaustive verification")]
struct Cli {
    /// Write output here instead of stdout.
    #[arg(long, global = true)]
    out: Option<PathBuf>,
    /// Node-expansion budget per cycle query (overrides MODCYCLE_BUDGET).
    #[arg(long, global = true)]
    budget: Option<u64>,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    /// key=value settings file (budget, threads, timing).
    #[arg(long, global = true)]
    config: Option<PathBuf>,
    /// Report elapsed_ms as 0 so reports are byte-identical across runs.
    #[arg(long, global = true)]
    no_timing: bool,
    #[command(subcommand)]
    command: Command,
}

#[derive(Args, Debug)]
struct InputArgs {
    /// Input file; stdin if omitted.
    input: Option<PathBuf>,
    #[arg(long, value_enum, default_value = "graph6")]
    format: Format,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// List every exceptional graph up to an order, with its build trace.
    GenExceptional {
        #[arg(long)]
        max_n: usize,
        /// Also check the 2-vertex path residues of each graph.
        #[arg(long)]
        check_lemma: bool,
        /// Print graph6 lines instead of JSON.
        #[arg(long)]
        graph6: bool,
    },
    /// Decide membership in the exceptional family; one JSON line per graph.
    Recognize(InputArgs),
    /// Find a cycle of length r mod k; one JSON line per graph.
    Cycle {
        #[arg(long)]
        k: u32,
        #[arg(long)]
        r: u32,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Cycle lengths mod k, or path lengths between --x and --y.
    Residues {
        #[arg(long)]
        k: u32,
        #[arg(long, requires = "y", conflicts_with = "through")]
        x: Option<usize>,
        #[arg(long, requires = "x")]
        y: Option<usize>,
        /// Only cycles through this vertex.
        #[arg(long)]
        through: Option<usize>,
        #[command(flatten)]
        input: InputArgs,
    },
    /// Derive the catalog of graphs without a cycle of length 0 mod 4.
    DeriveSpecial {
        /// Also check the path-residue properties of each entry.
        #[arg(long)]
        observations: bool,
    },
    /// Degree, block, connectivity and planarity summary per graph.
    CheckStructure(InputArgs),
    /// Print every graph of a class as graph6, up to isomorphism.
    Enumerate {
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 0)]
        min_degree: usize,
        /// Maximum number of 2-vertices.
        #[arg(long)]
        max_two: Option<usize>,
        #[arg(long)]
        connected: bool,
        /// Print only the number of graphs.
        #[arg(long)]
        count: bool,
    },
    /// Run an exhaustive verification campaign and print its report.
    Verify {
        #[command(subcommand)]
        campaign: Campaign,
    },
}

#[derive(Args, Debug)]
struct CampaignArgs {
    #[arg(long)]
    max_n: usize,
    /// Corrupt the check on purpose: reject-k23 or drop-special:<label>.
    #[arg(long)]
    inject_fault: Option<Fault>,
}

#[derive(Subcommand, Debug)]
enum Campaign {
    /// No cycle of length 0 mod 3 iff exceptional.
    Mod3(CampaignArgs),
    /// No cycle of length 0 mod 4 iff in the special catalog.
    Mod4 {
        #[command(flatten)]
        args: CampaignArgs,
        /// Catalog JSON from derive-special; derived afresh if omitted.
        #[arg(long)]
        catalog: Option<PathBuf>,
    },
    /// At most two 2-vertices forces cycles of length 0 mod 3 and 0 mod 4.
    Corollaries(CampaignArgs),
    /// 2-connected graphs without a cycle of length 0 mod 3 have 2-twins or adjacent 2-vertices.
    Gauthier(CampaignArgs),
    /// Graphs without a cycle of length 0 mod 4 are planar.
    Planar(CampaignArgs),
    /// Minimum degree k forces a cycle of length 0 mod k.
    Dean {
        #[arg(long)]
        k: u32,
        #[command(flatten)]
        args: CampaignArgs,
    },
}

/// Settings after combining flags, environment and config file.
struct Settings {
    budget: Budget,
    threads: Option<usize>,
    timing: bool,
}

impl Settings {
    fn resolve(cli: &Cli) -> Result<Settings, CliError> {
        let file = match &cli.config {
            Some(path) => FileConfig::load(path)?,
            None => FileConfig::default(),
        };
        let env = Budget::from_env()
            .transpose()
            .map_err(|e| CliError::Usage(e.to_string()))?;
        let budget = cli
            .budget
            .map(Budget)
            .or(env)
            .or(file.budget.map(Budget))
            .unwrap_or_default();
        let threads = cli.threads.or(file.threads);
        if threads == Some(0) {
            return Err(CliError::Usage("--threads must be positive".into()));
        }
        Ok(Settings {
            budget,
            threads,
            timing: !cli.no_timing && file.timing.unwrap_or(true),
        })
    }
}

struct Output {
    sink: Box<dyn Write>,
}

impl Output {
    fn open(path: Option<&Path>) -> Result<Output, CliError> {
        let sink: Box<dyn Write> = match path {
            Some(p) => Box::new(std::io::BufWriter::new(
                std::fs::File::create(p).map_err(|e| CliError::Usage(format!("cannot create {}: {e}", p.display())))?,
            )),
            None => Box::new(std::io::BufWriter::new(std::io::stdout().lock())),
        };
        Ok(Output { sink })
    }

    fn line(&mut self, s: &str) -> Result<(), CliError> {
        writeln!(self.sink, "{s}").map_err(|e| CliError::Usage(format!("write failed: {e}")))
    }

    fn json_line(&mut self, v: &impl Serialize) -> Result<(), CliError> {
        self.line(&serde_json::to_string(v).expect("values serialize"))
    }

    fn json_pretty(&mut self, v: &impl Serialize) -> Result<(), CliError> {
        self.line(&serde_json::to_string_pretty(v).expect("values serialize"))
    }

    fn finish(mut self) -> Result<(), CliError> {
        self.sink
            .flush()
            .map_err(|e| CliError::Usage(format!("write failed: {e}")))
    }
}

fn read_graphs(args: &InputArgs) -> Result<Vec<Graph>, CliError> {
    let text = input::read_source(args.input.as_deref())?;
    input::parse_graphs(&text, args.format)
}

fn with_graph(g: &Graph, e: Error) -> CliError {
    CliError::Lib(e.with_graph(g.to_graph6()))
}

fn run(cli: Cli) -> Result<Outcome, CliError> {
    let settings = Settings::resolve(&cli)?;
    if let Some(t) = settings.threads {
        rayon::ThreadPoolBuilder::new()
            .num_threads(t)
            .build_global()
            .map_err(|e| CliError::Usage(format!("cannot start {t} threads: {e}")))?;
    }
    let budget = settings.budget;
    let mut out = Output::open(cli.out.as_deref())?;
    let outcome = match cli.command {
        Command::GenExceptional {
            max_n,
            check_lemma,
            graph6,
        } => {
            let family = generate_exceptional(max_n)?;
            let mut ok = true;
            let mut records = Vec::new();
            for e in &family {
                let lemma = if check_lemma {
                    let report = check_lemma_residues(&e.graph, &e.trace, budget).map_err(|err| with_graph(&e.graph, err))?;
                    ok &= report.is_ok();
                    Some(report)
                } else {
                    None
                };
                if graph6 {
                    out.line(&e.graph.to_graph6())?;
                } else {
                    let mut rec = json!({
                        "graph6": e.graph.to_graph6(),
                        "n": e.graph.order(),
                        "edges": e.graph.edge_count(),
                        "trace": e.trace,
                    });
                    if let Some(l) = lemma {
                        rec["lemma"] = serde_json::to_value(l).expect("values serialize");
                    }
                    records.push(rec);
                }
            }
            if !graph6 {
                out.json_pretty(&records)?;
            }
            Outcome::from_ok(ok)
        }
        Command::Recognize(args) => {
            let mut ok = true;
            for g in read_graphs(&args)? {
                let recognition = recognize_exceptional(&g);
                let mut rec = json!({ "graph6": g.to_graph6() });
                merge(&mut rec, serde_json::to_value(&recognition).expect("values serialize"));
                if let Recognition::Exceptional(r) = &recognition {
                    r.verify(&g)?;
                } else {
                    ok = false;
                    let witness = find_cycle_mod(&g, 3, 0, budget).map_err(|e| with_graph(&g, e))?;
                    rec["witness"] = serde_json::to_value(witness).expect("values serialize");
                }
                out.json_line(&rec)?;
            }
            Outcome::from_ok(ok)
        }
        Command::Cycle { k, r, input } => {
            for g in read_graphs(&input)? {
                let cert = find_cycle_mod(&g, k, r, budget).map_err(|e| with_graph(&g, e))?;
                if let Some(c) = &cert {
                    c.validate(&g)?;
                }
                out.json_line(&json!({ "graph6": g.to_graph6(), "certificate": cert }))?;
            }
            Outcome::Pass
        }
        Command::Residues {
            k,
            x,
            y,
            through,
            input,
        } => {
            for g in read_graphs(&input)? {
                let res = match (x, y, through) {
                    (Some(x), Some(y), _) => path_residues(&g, x, y, k, budget),
                    (_, _, Some(v)) => cycle_residues_through(&g, v, k, budget),
                    _ => cycle_length_residues(&g, k, budget),
                }
                .map_err(|e| with_graph(&g, e))?;
                out.json_line(&json!({ "graph6": g.to_graph6(), "k": k, "residues": res.members() }))?;
            }
            Outcome::Pass
        }
        Command::DeriveSpecial { observations } => {
            let cat = derive_special_catalog(budget)?;
            if observations {
                let report = check_observation_special(&cat, budget)?;
                let ok = report.is_ok();
                out.json_pretty(&json!({ "catalog": cat.records(), "observations": report }))?;
                Outcome::from_ok(ok)
            } else {
                out.json_pretty(&cat.records())?;
                Outcome::Pass
            }
        }
        Command::CheckStructure(args) => {
            for g in read_graphs(&args)? {
                out.json_line(&structure(&g)?)?;
            }
            Outcome::Pass
        }
        Command::Enumerate {
            n,
            min_degree,
            max_two,
            connected,
            count,
        } => {
            let c = ClassConstraints {
                n,
                min_degree,
                max_two_vertices: max_two,
                connected,
                min_degree_global: None,
            };
            if count {
                out.line(&count_class(&c)?.to_string())?;
            } else {
                let mut failed = None;
                for_each_in_class(&c, |g| {
                    if failed.is_none() {
                        failed = out.line(&g.to_graph6()).err();
                    }
                })?;
                if let Some(e) = failed {
                    return Err(e);
                }
            }
            Outcome::Pass
        }
        Command::Verify { campaign } => {
            let report = verify(campaign, &settings)?;
            out.json_pretty(&report)?;
            Outcome::from_ok(report.passed())
        }
    };
    out.finish()?;
    Ok(outcome)
}

fn verify(which: Campaign, settings: &Settings) -> Result<VerificationReport, CliError> {
    let opts = |args: &CampaignArgs| CampaignOptions {
        budget: settings.budget,
        threads: settings.threads,
        timing: settings.timing,
        fault: args.inject_fault.clone(),
    };
    let report = match which {
        Campaign::Mod3(a) => campaign::verify_mod3_characterization(a.max_n, &opts(&a))?,
        Campaign::Mod4 { args, catalog: None } => campaign::verify_mod4_characterization(args.max_n, &opts(&args))?,
        Campaign::Mod4 {
            args,
            catalog: Some(path),
        } => {
            let text = std::fs::read_to_string(&path)
                .map_err(|e| CliError::Usage(format!("cannot read {}: {e}", path.display())))?;
            let records: Vec<CatalogRecord> = serde_json::from_str(&text)
                .map_err(|e| CliError::Usage(format!("{}: invalid catalog: {e}", path.display())))?;
            let mut cat = SpecialCatalog::from_records(&records)?;
            if let Some(Fault::DropSpecial(label)) = &args.inject_fault {
                cat.entries.retain(|e| &e.label != label);
            }
            campaign::verify_mod4_with_catalog(args.max_n, &cat, &opts(&args))?
        }
        Campaign::Corollaries(a) => campaign::verify_corollaries(a.max_n, &opts(&a))?,
        Campaign::Gauthier(a) => campaign::verify_gauthier(a.max_n, &opts(&a))?,
        Campaign::Planar(a) => campaign::verify_nonplanar_mod4(a.max_n, &opts(&a))?,
        Campaign::Dean { k, args } => campaign::dean_scan(k, args.max_n, &opts(&args))?,
    };
    Ok(report)
}

fn structure(g: &Graph) -> Result<Value, CliError> {
    let connected = g.is_connected();
    let mut rec = json!({
        "graph6": g.to_graph6(),
        "n": g.order(),
        "edges": g.edge_count(),
        "degrees": g.degrees(),
        "two_vertices": g.two_vertex_set().to_vec(),
        "two_twins": g.two_twins(),
        "adjacent_two_vertices": g.adjacent_two_vertices(),
        "connected": connected,
        "two_connected": is_2_connected(g),
        "planar": if g.order() <= PLANARITY_MAX_ORDER { Some(is_planar(g)?) } else { None },
    });
    if connected {
        let blocks = block_decomposition(g)?;
        rec["blocks"] = json!(blocks.blocks.iter().map(|b| b.to_vec()).collect::<Vec<_>>());
        rec["cut_vertices"] = json!(blocks.cut_vertices.to_vec());
        rec["essentially_3_connected"] = json!(is_essentially_3_connected(g)?);
    }
    rec["suppressed"] = match g.suppress_two_vertices() {
        Ok(Suppressed::Simple { graph, .. }) => json!(graph.to_graph6()),
        Ok(Suppressed::NonSimple { u, v }) => json!({ "non_simple": [u, v] }),
        Err(_) => Value::Null,
    };
    Ok(rec)
}

fn merge(into: &mut Value, from: Value) {
    if let (Value::Object(a), Value::Object(b)) = (into, from) {
        a.extend(b);
    }
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    match run(cli) {
        Ok(Outcome::Pass) => ExitCode::SUCCESS,
        Ok(Outcome::Violation) => ExitCode::from(1),
        Err(e) => {
            eprintln!("modcycle: {e}");
            ExitCode::from(e.exit_code())
        }
    }
}
