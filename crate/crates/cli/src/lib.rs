//! `orbitree` command-line interface.
//!
//! Exit codes: 0 success, 2 unparsable automaton, 3 budget exhausted,
//! 4 bad argument, 1 internal error.

use std::fs;
use std::io::Write;
use std::path::{Path, PathBuf};

use clap::{Parser, Subcommand, ValueEnum};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use orbitree::{
    classify_group, component_growth, connection_degree, element_order, find_infinite_order_element, parse_automaton,
    verify_certificate, Budgets, Census, CensusConfig, CensusSummary, ConnectionDegree, Error, HeavyBranch,
    InfiniteSearch, MealyAutomaton, OrbitTree, OrderVerdict, WindowGraph,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INTERNAL: i32 = 1;
pub const EXIT_PARSE: i32 = 2;
pub const EXIT_BUDGET: i32 = 3;
pub const EXIT_ARGUMENT: i32 = 4;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");

const DEFAULT_TREE_DEPTH: usize = 7;

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Format {
    Text,
    Json,
    Dot,
}

#[derive(Debug, Parser)]
#[command(
    name = "orbitree",
    version,
    about = "Orbit trees, element orders and finiteness certificates for Mealy automata"
)]
pub struct Cli {
    #[command(subcommand)]
    pub command: Command,
    #[command(flatten)]
    pub opts: Options,
}

/// Budgets default to the library defaults multiplied by
/// `ORBITREE_BUDGET_SCALE`; explicit flags win.
#[derive(Debug, Clone, clap::Args)]
pub struct Options {
    /// Orbit-tree depth for `orbit-tree` (default 7); exploration depth for
    /// `classify` and `find-infinite` (default 12)
    #[arg(long, global = true)]
    pub depth: Option<usize>,
    /// Largest power tested by the order semidecision (default 50)
    #[arg(long, global = true)]
    pub k_budget: Option<usize>,
    /// Largest component materialized (default 1000000)
    #[arg(long, global = true)]
    pub member_budget: Option<usize>,
    /// Deepest level scanned for the connection degree (default 12)
    #[arg(long, global = true)]
    pub max_level: Option<usize>,
    /// Powers measured for component growth (default 8)
    #[arg(long, global = true)]
    pub growth_levels: Option<usize>,
    /// Distinct actions allowed in a semigroup closure (default 4000)
    #[arg(long, global = true)]
    pub closure_elements: Option<usize>,
    /// Longest cyclic word tried by `find-infinite` (default 8)
    #[arg(long, global = true)]
    pub cycle_length: Option<usize>,
    /// Seed recorded for reproducibility of any sampling
    #[arg(long, global = true, default_value_t = 0)]
    pub seed: u64,
    #[arg(long, global = true, value_enum, default_value_t = Format::Text)]
    pub format: Format,
    /// Write the report here instead of standard output
    #[arg(long, global = true)]
    pub out: Option<PathBuf>,
    /// Census checkpoint file (read to resume, rewritten after each batch)
    #[arg(long, global = true)]
    pub checkpoint: Option<PathBuf>,
}

#[derive(Debug, Subcommand)]
pub enum Command {
    /// Structural flags, minimized size and connection degree
    Info { file: PathBuf },
    /// Labelled orbit tree of the dual action, heavy branch highlighted
    OrbitTree { file: PathBuf },
    /// Order semidecision and component growth of one state word
    Order {
        file: PathBuf,
        #[arg(long)]
        word: String,
    },
    /// Finite / infinite / unknown verdict with certificate
    Classify { file: PathBuf },
    /// Search for a cyclically orbital element of infinite order
    FindInfinite { file: PathBuf },
    /// Window graph of orbital words
    Windows { file: PathBuf },
    /// Census of all small automata up to relabeling, as JSON lines
    Enumerate {
        #[arg(long)]
        states: usize,
        #[arg(long)]
        letters: usize,
        /// Keep only connected (true) or disconnected (false) automata
        #[arg(long)]
        connected: Option<bool>,
        /// Drop the invertible and reversible filters
        #[arg(long)]
        all: bool,
        /// Stop after this many raw indices (resume with --checkpoint)
        #[arg(long)]
        limit: Option<u64>,
        /// Allow up to 4 states or letters instead of 3
        #[arg(long)]
        uncapped: bool,
    },
}

/// Everything that determines a run; echoed into every JSON report.
#[derive(Clone, Debug, Serialize)]
pub struct RunConfig {
    pub subcommand: &'static str,
    pub input: Option<String>,
    pub word: Option<String>,
    pub depth: usize,
    pub format: Format,
    pub seed: u64,
    pub budget_scale: f64,
    pub budgets: Budgets,
    pub census: Option<CensusConfig>,
}

#[derive(Debug)]
pub struct Failure {
    pub code: i32,
    pub message: String,
}

impl From<Error> for Failure {
    fn from(e: Error) -> Self {
        let code = match &e {
            Error::Parse(_) => EXIT_PARSE,
            Error::BudgetExceeded { .. } => EXIT_BUDGET,
            Error::Inconsistency(_) => EXIT_INTERNAL,
            _ => EXIT_ARGUMENT,
        };
        Failure {
            code,
            message: e.to_string(),
        }
    }
}

fn arg_failure(message: impl Into<String>) -> Failure {
    Failure {
        code: EXIT_ARGUMENT,
        message: message.into(),
    }
}

fn budget_scale() -> Result<f64, Failure> {
    match std::env::var("ORBITREE_BUDGET_SCALE") {
        Err(_) => Ok(1.0),
        Ok(s) => s
            .trim()
            .parse::<f64>()
            .ok()
            .filter(|f| f.is_finite() && *f > 0.0)
            .ok_or_else(|| arg_failure(format!("ORBITREE_BUDGET_SCALE must be a positive number, got `{s}`"))),
    }
}

fn positive(name: &str, v: Option<usize>) -> Result<Option<usize>, Failure> {
    match v {
        Some(0) => Err(arg_failure(format!("--{name} must be positive"))),
        v => Ok(v),
    }
}

impl RunConfig {
    fn new(cmd: &Command, opts: &Options) -> Result<Self, Failure> {
        let scale = budget_scale()?;
        let mut b = Budgets::default().scaled(scale);
        if let Some(v) = positive("k-budget", opts.k_budget)? {
            b.k_budget = v;
        }
        if let Some(v) = positive("member-budget", opts.member_budget)? {
            b.member_budget = v;
        }
        if let Some(v) = positive("max-level", opts.max_level)? {
            b.max_level = v;
        }
        if let Some(v) = positive("growth-levels", opts.growth_levels)? {
            b.growth_levels = v;
        }
        if let Some(v) = positive("closure-elements", opts.closure_elements)? {
            b.closure_elements = v;
        }
        if let Some(v) = positive("cycle-length", opts.cycle_length)? {
            b.cycle_length = v;
        }
        let (subcommand, input, word) = match cmd {
            Command::Info { file } => ("info", Some(file), None),
            Command::OrbitTree { file } => ("orbit-tree", Some(file), None),
            Command::Order { file, word } => ("order", Some(file), Some(word.clone())),
            Command::Classify { file } => ("classify", Some(file), None),
            Command::FindInfinite { file } => ("find-infinite", Some(file), None),
            Command::Windows { file } => ("windows", Some(file), None),
            Command::Enumerate { .. } => ("enumerate", None, None),
        };
        let depth = match (subcommand, opts.depth) {
            ("orbit-tree", d) => d.unwrap_or(DEFAULT_TREE_DEPTH),
            (_, Some(d)) => {
                b.depth = d;
                d
            }
            (_, None) => b.depth,
        };
        let census = match cmd {
            Command::Enumerate {
                states,
                letters,
                connected,
                all,
                uncapped,
                ..
            } => {
                let cap = if *uncapped { 4 } else { 3 };
                if *states > cap || *letters > cap {
                    return Err(arg_failure(format!(
                        "census sizes are capped at {cap} (pass --uncapped to allow 4)"
                    )));
                }
                let mut c = CensusConfig::new(*states, *letters);
                c.connected = *connected;
                c.invertible = !all;
                c.reversible = !all;
                if let Some(d) = opts.depth {
                    c.depth = d;
                }
                Some(c)
            }
            _ => None,
        };
        Ok(RunConfig {
            subcommand,
            input: input.map(|p| p.display().to_string()),
            word,
            depth,
            format: opts.format,
            seed: opts.seed,
            budget_scale: scale,
            budgets: b,
            census,
        })
    }

    fn header(&self) -> Value {
        json!({"version": VERSION, "config": self})
    }
}

fn load(path: &Path) -> Result<MealyAutomaton, Failure> {
    let text = fs::read_to_string(path).map_err(|e| arg_failure(format!("{}: {e}", path.display())))?;
    parse_automaton(&text).map_err(|e| Failure {
        code: EXIT_PARSE,
        message: format!("{}: {e}", path.display()),
    })
}

fn with_header(cfg: &RunConfig, body: Value) -> Value {
    let mut v = cfg.header();
    if let (Some(h), Value::Object(b)) = (v.as_object_mut(), body) {
        h.extend(b);
    }
    v
}

fn render_json(v: &Value) -> String {
    let mut s = serde_json::to_string_pretty(v).expect("json values serialize");
    s.push('\n');
    s
}

fn write_output(out: Option<&Path>, text: &str) -> Result<(), Failure> {
    match out {
        Some(p) => fs::write(p, text).map_err(|e| arg_failure(format!("{}: {e}", p.display()))),
        None => {
            let mut so = std::io::stdout().lock();
            so.write_all(text.as_bytes()).map_err(|e| arg_failure(e.to_string()))
        }
    }
}

fn no_dot(cfg: &RunConfig) -> Result<(), Failure> {
    if cfg.format == Format::Dot {
        return Err(arg_failure(format!("`{}` has no dot output", cfg.subcommand)));
    }
    Ok(())
}

/// Output of one subcommand: the rendered document and its exit code.
pub struct Outcome {
    pub text: String,
    pub code: i32,
}

fn done(text: String) -> Result<Outcome, Failure> {
    Ok(Outcome { text, code: EXIT_OK })
}

pub fn run(cli: Cli) -> i32 {
    let result = RunConfig::new(&cli.command, &cli.opts).and_then(|cfg| {
        if let Command::Enumerate { limit, .. } = &cli.command {
            return cmd_enumerate(&cfg, *limit, cli.opts.out.as_deref(), cli.opts.checkpoint.as_deref());
        }
        let out = dispatch(&cli.command, &cfg)?;
        write_output(cli.opts.out.as_deref(), &out.text)?;
        Ok(out.code)
    });
    match result {
        Ok(code) => code,
        Err(f) => {
            eprintln!("orbitree: {}", f.message);
            f.code
        }
    }
}

fn dispatch(cmd: &Command, cfg: &RunConfig) -> Result<Outcome, Failure> {
    match cmd {
        Command::Info { file } => cmd_info(cfg, &load(file)?),
        Command::OrbitTree { file } => cmd_orbit_tree(cfg, &load(file)?),
        Command::Order { file, word } => cmd_order(cfg, &load(file)?, word),
        Command::Classify { file } => cmd_classify(cfg, &load(file)?),
        Command::FindInfinite { file } => cmd_find_infinite(cfg, &load(file)?),
        Command::Windows { file } => cmd_windows(cfg, &load(file)?),
        Command::Enumerate { .. } => unreachable!("handled by run"),
    }
}

pub fn cmd_info(cfg: &RunConfig, a: &MealyAutomaton) -> Result<Outcome, Failure> {
    no_dot(cfg)?;
    let b = &cfg.budgets;
    let reversible = a.is_reversible();
    let (cd, note) = if reversible {
        match connection_degree(a, b.max_level, b.member_budget) {
            Ok(ConnectionDegree::AtLeast(k)) if k < b.max_level => (
                Some(ConnectionDegree::AtLeast(k)),
                Some(format!("level {} exceeds the member budget {}", k + 1, b.member_budget)),
            ),
            Ok(cd) => (Some(cd), None),
            Err(e) if e.is_budget() => (None, Some(e.to_string())),
            Err(e) => return Err(e.into()),
        }
    } else {
        (None, None)
    };
    let connected = cd.map(|c| !matches!(c, ConnectionDegree::Exact(0)));
    let body = json!({
        "automaton": a.name(),
        "states": a.num_states(),
        "letters": a.num_letters(),
        "invertible": a.is_invertible(),
        "reversible": reversible,
        "bireversible": a.is_bireversible(),
        "connected": connected,
        "minimized_states": a.minimize().num_states(),
        "connection_degree": cd,
        "note": note,
    });
    let code = if note.is_some() { EXIT_BUDGET } else { EXIT_OK };
    let text = match cfg.format {
        Format::Json => render_json(&with_header(cfg, body)),
        _ => {
            let flag = |v: Option<bool>| v.map_or("unknown".to_string(), |b| b.to_string());
            let mut s = format!(
                "automaton: {}\nstates: {}\nletters: {}\ninvertible: {}\nreversible: {}\nbireversible: {}\nconnected: {}\nminimized states: {}\nconnection degree: {}\n",
                a.name(),
                a.num_states(),
                a.num_letters(),
                a.is_invertible(),
                reversible,
                a.is_bireversible(),
                flag(connected),
                a.minimize().num_states(),
                cd.map_or("unknown".to_string(), |c| c.to_string()),
            );
            if let Some(n) = note {
                s.push_str(&format!("note: {n}\n"));
            }
            s
        }
    };
    Ok(Outcome { text, code })
}

pub fn cmd_orbit_tree(cfg: &RunConfig, a: &MealyAutomaton) -> Result<Outcome, Failure> {
    if !a.is_reversible() {
        return Err(Error::NotReversible.into());
    }
    let mut tree = OrbitTree::new(a, cfg.budgets.member_budget)?;
    tree.expand_to_depth(cfg.depth)?;
    let heavy = if cfg.depth == 0 {
        HeavyBranch::Absent
    } else {
        tree.find_heavy_branch(cfg.depth)?
    };
    let text = match cfg.format {
        Format::Dot => tree.to_dot(&heavy),
        Format::Json => render_json(&with_header(cfg, tree.to_json(&heavy))),
        Format::Text => {
            let mut s = format!("orbit tree of {} to depth {}\n", a.name(), cfg.depth);
            for level in 0..=cfg.depth {
                let nodes = tree.nodes_at_level(level);
                let sizes: Vec<String> = nodes.iter().map(|&n| tree.node(n).size().to_string()).collect();
                s.push_str(&format!(
                    "level {level}: {} components, sizes [{}]\n",
                    nodes.len(),
                    sizes.join(" ")
                ));
            }
            let labels: Vec<String> = heavy.labels().iter().map(u64::to_string).collect();
            s.push_str(&format!("heavy branch: [{}]\n", labels.join(" ")));
            s
        }
    };
    done(text)
}

pub fn cmd_order(cfg: &RunConfig, a: &MealyAutomaton, word: &str) -> Result<Outcome, Failure> {
    no_dot(cfg)?;
    let u = a.parse_state_word(word)?;
    if u.is_empty() {
        return Err(arg_failure("the word must be nonempty"));
    }
    let b = &cfg.budgets;
    let verdict = element_order(a, &u, b.k_budget, b.member_budget)?;
    let growth = if a.is_reversible() {
        Some(component_growth(a, &u, b.growth_levels, b.member_budget)?)
    } else {
        None
    };
    let verdict_json = match &verdict {
        OrderVerdict::Finite { order, closure } => json!({"verdict": "Finite", "order": order, "closure": closure}),
        OrderVerdict::AtLeast { k, witnesses } => json!({
            "verdict": "AtLeast",
            "k": k,
            "witnesses": witnesses.iter().map(|s| a.format_letters(s)).collect::<Vec<_>>(),
        }),
    };
    let text = match cfg.format {
        Format::Json => render_json(&with_header(
            cfg,
            json!({"automaton": a.name(), "word": a.format_word(&u), "order": verdict_json, "growth": growth}),
        )),
        _ => {
            let mut s = match &verdict {
                OrderVerdict::Finite { order, .. } => format!("order of {}: {order}\n", a.format_word(&u)),
                OrderVerdict::AtLeast { k, .. } => format!("order of {}: at least {}\n", a.format_word(&u), k + 1),
            };
            if let Some(g) = &growth {
                s.push_str("n\tcomponent size of u^n\n");
                for (n, size) in g.sizes.iter().enumerate() {
                    s.push_str(&format!("{}\t{size}\n", n + 1));
                }
                if !g.complete {
                    s.push_str("(growth table stopped at the member budget)\n");
                }
            }
            s
        }
    };
    done(text)
}

pub fn cmd_classify(cfg: &RunConfig, a: &MealyAutomaton) -> Result<Outcome, Failure> {
    no_dot(cfg)?;
    let c = classify_group(a, &cfg.budgets)?;
    let verified = verify_certificate(a, c.certificate(), &cfg.budgets);
    let text = match cfg.format {
        Format::Json => render_json(&with_header(
            cfg,
            json!({"automaton": a.name(), "classification": c, "verified": verified}),
        )),
        _ => format!(
            "verdict: {}\ncertificate: {:?}\nverified: {verified}\n{}\n",
            c.verdict(),
            c.certificate().kind,
            c.certificate().statement
        ),
    };
    done(text)
}

pub fn cmd_find_infinite(cfg: &RunConfig, a: &MealyAutomaton) -> Result<Outcome, Failure> {
    no_dot(cfg)?;
    let r = find_infinite_order_element(a, &cfg.budgets)?;
    let body = match &r {
        InfiniteSearch::Candidate(c) => json!({
            "status": "candidate",
            "certificate": c,
            "verified": verify_certificate(a, c, &cfg.budgets),
        }),
        InfiniteSearch::NotApplicable(reason) => json!({"status": "not_applicable", "reason": reason}),
        InfiniteSearch::NotFound(reason) => json!({"status": "not_found", "reason": reason}),
    };
    let text = match cfg.format {
        Format::Json => render_json(&with_header(cfg, json!({"automaton": a.name(), "search": body}))),
        _ => match &r {
            InfiniteSearch::Candidate(c) => format!(
                "candidate: {}\ngrade: {}\nverified: {}\n",
                c.data["word"].as_str().unwrap_or_default(),
                c.data["grade"].as_str().unwrap_or_default(),
                body["verified"]
            ),
            InfiniteSearch::NotApplicable(reason) => format!("not applicable: {reason}\n"),
            InfiniteSearch::NotFound(reason) => format!("not found: {reason}\n"),
        },
    };
    done(text)
}

pub fn cmd_windows(cfg: &RunConfig, a: &MealyAutomaton) -> Result<Outcome, Failure> {
    if !a.is_reversible() {
        return Err(Error::NotReversible.into());
    }
    let mut tree = OrbitTree::new(a, cfg.budgets.member_budget)?;
    let g = WindowGraph::build(&mut tree, cfg.budgets.max_level)?;
    let text = match cfg.format {
        Format::Dot => g.to_dot(),
        Format::Json => render_json(&with_header(cfg, g.to_json())),
        Format::Text => {
            let ws: Vec<String> = g.windows().iter().map(|w| g.format(w)).collect();
            format!(
                "window length: {}\nwindows ({}): {}\n",
                g.window_length(),
                ws.len(),
                ws.join(" ")
            )
        }
    };
    done(text)
}

#[derive(Debug, Serialize, Deserialize)]
struct Checkpoint {
    census: CensusConfig,
    summary: CensusSummary,
}

fn cmd_enumerate(
    cfg: &RunConfig,
    limit: Option<u64>,
    out: Option<&Path>,
    checkpoint: Option<&Path>,
) -> Result<i32, Failure> {
    if cfg.format == Format::Dot {
        return Err(arg_failure("`enumerate` has no dot output"));
    }
    let ccfg = cfg.census.clone().expect("enumerate has a census config");
    let census = Census::new(ccfg.clone())?;
    let resume = match checkpoint {
        Some(p) if p.exists() => {
            let text = fs::read_to_string(p).map_err(|e| arg_failure(format!("{}: {e}", p.display())))?;
            let ck: Checkpoint =
                serde_json::from_str(&text).map_err(|e| arg_failure(format!("{}: {e}", p.display())))?;
            if ck.census != ccfg {
                return Err(arg_failure("checkpoint was written for a different census"));
            }
            ck.summary
        }
        _ => CensusSummary::default(),
    };
    let start = resume.next_index;
    let mut sink: Box<dyn Write> = match out {
        Some(p) => {
            let f = fs::OpenOptions::new()
                .create(true)
                .append(start > 0)
                .write(true)
                .truncate(start == 0)
                .open(p)
                .map_err(|e| arg_failure(format!("{}: {e}", p.display())))?;
            Box::new(std::io::BufWriter::new(f))
        }
        None => Box::new(std::io::stdout().lock()),
    };
    let io = |e: std::io::Error| Error::InvalidArgument(e.to_string());
    let json = cfg.format == Format::Json;
    if start == 0 && json {
        writeln!(sink, "{}", serde_json::to_string(&cfg.header()).expect("serializable"))
            .map_err(|e| arg_failure(e.to_string()))?;
    }
    let result = census.run(
        resume,
        limit,
        &cfg.budgets,
        |r| {
            if json {
                writeln!(sink, "{}", serde_json::to_string(r).expect("serializable")).map_err(io)
            } else {
                writeln!(
                    sink,
                    "#{} verdict {} dual {} degree {} violations {}",
                    r.index,
                    r.verdict,
                    r.dual_verdict,
                    r.connection_degree.map_or("-".to_string(), |c| c.to_string()),
                    r.violations.len()
                )
                .map_err(io)
            }
        },
        |summary| {
            if let Some(p) = checkpoint {
                let ck = Checkpoint {
                    census: ccfg.clone(),
                    summary: summary.clone(),
                };
                fs::write(p, serde_json::to_string(&ck).expect("serializable")).map_err(io)?;
            }
            Ok(())
        },
    );
    let summary = match result {
        Ok(s) => s,
        Err(e) => {
            sink.flush().ok();
            return Err(e.into());
        }
    };
    if summary.complete {
        let line = if json {
            serde_json::to_string(&json!({"summary": summary})).expect("serializable")
        } else {
            format!(
                "items {} finite {} infinite {} unknown {} unclassified {} violations {}",
                summary.items,
                summary.finite,
                summary.infinite,
                summary.unknown,
                summary.unclassified,
                summary.violations
            )
        };
        writeln!(sink, "{line}").map_err(|e| arg_failure(e.to_string()))?;
    }
    sink.flush().map_err(|e| arg_failure(e.to_string()))?;
    if summary.violations > 0 {
        eprintln!("orbitree: {} invariant violations", summary.violations);
        return Ok(EXIT_INTERNAL);
    }
    Ok(EXIT_OK)
}
