//! Command-line front end.
//!
//! Exit codes: 0 success, 2 input or parse error, 3 unknown class,
//! 4 specification needed (no model can be transferred).

use std::collections::{BTreeMap, BTreeSet};
use std::fs;
use std::io::{BufRead, Write};
use std::path::{Path, PathBuf};

use clap::{Args, Parser, Subcommand, ValueEnum};

use crate::ontology::{owl, ClassHierarchy, ClassId, OntologyError, OntologyFormat};
use crate::simulation::{
    campaign_rngs, run_campaign_with_store, summarize, CampaignConfig, GroundTruthMatrix, SimulationError, Strategy,
};
use crate::store::{ontology_checksum, KbMeta, KnowledgeBase, StoreError};
use crate::suitability::{
    generalisation_check, generalise_execution_model, specification_check, DecisionContext, ExecutionError,
    ExperienceRecord, Generalisation, ModelRegistry, SampledMean, SuitabilityConfig, SuitabilityError,
};

pub const EXIT_OK: i32 = 0;
pub const EXIT_INPUT: i32 = 2;
pub const EXIT_UNKNOWN_CLASS: i32 = 3;
pub const EXIT_SPECIFICATION: i32 = 4;

#[derive(Debug, Parser)]
#[command(
    name = "suitgraph",
    version,
    about = "Select which known execution model to reuse for an object class"
)]
struct Cli {
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// List the object cluster of a class: related classes that have a model.
    Cluster {
        #[command(flatten)]
        ontology: OntologyArgs,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        models: ModelArgs,
    },
    /// Wu-Palmer similarity of two classes.
    Similarity {
        #[command(flatten)]
        ontology: OntologyArgs,
        a: String,
        b: String,
    },
    /// Show which model would be selected next, without executing it.
    Select {
        #[command(flatten)]
        ontology: OntologyArgs,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        models: ModelArgs,
        /// Knowledge base to read; a missing file means no experience.
        #[arg(long)]
        kb: Option<PathBuf>,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Run a seeded campaign against a ground-truth success matrix.
    Simulate {
        #[command(flatten)]
        ontology: OntologyArgs,
        #[command(flatten)]
        models: ModelArgs,
        /// Ground-truth matrix (JSON).
        #[arg(long)]
        gt: PathBuf,
        /// Target classes, comma separated, or `@file` with one per line.
        #[arg(long)]
        targets: String,
        #[arg(long, default_value_t = 10)]
        trials: usize,
        #[arg(long, default_value = "suitability")]
        strategy: Strategy,
        /// Directory for report.csv, report.json and trials.json.
        #[arg(long)]
        out: PathBuf,
        /// Knowledge base to continue from and write back.
        #[arg(long)]
        kb: Option<PathBuf>,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Interactive session: a teacher labels each execution as y or n.
    Teach {
        #[command(flatten)]
        ontology: OntologyArgs,
        #[arg(long)]
        target: String,
        #[command(flatten)]
        models: ModelArgs,
        /// Knowledge base, saved after every labelled execution.
        #[arg(long)]
        kb: PathBuf,
        #[command(flatten)]
        decision: DecisionArgs,
    },
    /// Knowledge-base maintenance.
    Kb {
        #[command(subcommand)]
        command: KbCommand,
    },
}

#[derive(Debug, Subcommand)]
enum KbCommand {
    /// Print the canonical JSON document.
    Export {
        #[arg(long)]
        kb: PathBuf,
        /// Write to this file instead of stdout.
        #[arg(long)]
        output: Option<PathBuf>,
    },
    /// Validate a JSON document and store it canonically at `--kb`.
    Import {
        #[arg(long)]
        kb: PathBuf,
        input: PathBuf,
    },
    /// Print the experiences as a table.
    Show {
        #[arg(long)]
        kb: PathBuf,
    },
}

#[derive(Debug, Clone, Copy, ValueEnum)]
enum FormatArg {
    Json,
    Owl,
}

#[derive(Debug, Args)]
struct OntologyArgs {
    /// Class hierarchy as a JSON tree (.json) or OWL RDF/XML (.owl, .rdf, .xml).
    #[arg(long)]
    ontology: PathBuf,
    /// Override the format inferred from the file extension.
    #[arg(long, value_enum)]
    format: Option<FormatArg>,
}

#[derive(Debug, Args)]
struct ModelArgs {
    /// Classes with a known execution model, comma separated, or `@file`
    /// with one per line.
    #[arg(long)]
    models: String,
}

#[derive(Debug, Args)]
struct DecisionArgs {
    #[arg(long, default_value = "grasp")]
    action: String,
    #[arg(long, default_value = "default")]
    mode: String,
    #[arg(long, default_value_t = 3.0)]
    alpha0: f64,
    #[arg(long, default_value_t = 3.0)]
    beta0: f64,
    #[arg(long, default_value_t = 0.6)]
    tau: f64,
    /// Beta draws averaged per success estimate.
    #[arg(long, default_value_t = 10)]
    beta_samples: usize,
    #[arg(long, env = "SUITGRAPH_SEED", default_value_t = 0)]
    seed: u64,
    /// Start from the uniform prior instead of stored posteriors.
    #[arg(long)]
    reset_posteriors: bool,
    /// Treat a model without siblings as generalising to its parent.
    #[arg(long)]
    lax_generalisation: bool,
}

impl DecisionArgs {
    fn config(&self) -> Result<SuitabilityConfig, CliError> {
        Ok(SuitabilityConfig::new(self.alpha0, self.beta0, self.tau)?
            .with_beta_samples(self.beta_samples)?
            .with_seed(self.seed)
            .with_strict_generalisation(!self.lax_generalisation))
    }
}

#[derive(Debug)]
enum CliError {
    Input(String),
    UnknownClass(String),
    SpecificationNeeded(String),
}

impl CliError {
    fn code(&self) -> i32 {
        match self {
            CliError::Input(_) => EXIT_INPUT,
            CliError::UnknownClass(_) => EXIT_UNKNOWN_CLASS,
            CliError::SpecificationNeeded(_) => EXIT_SPECIFICATION,
        }
    }

    fn message(&self) -> &str {
        match self {
            CliError::Input(m) | CliError::UnknownClass(m) | CliError::SpecificationNeeded(m) => m,
        }
    }
}

impl From<OntologyError> for CliError {
    fn from(e: OntologyError) -> Self {
        match e {
            OntologyError::UnknownClass(_) => CliError::UnknownClass(e.to_string()),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SuitabilityError> for CliError {
    fn from(e: SuitabilityError) -> Self {
        match e {
            SuitabilityError::Ontology(o) => o.into(),
            SuitabilityError::EmptyCluster(t) => specification_needed(&t),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<SimulationError> for CliError {
    fn from(e: SimulationError) -> Self {
        match e {
            SimulationError::Ontology(o) => o.into(),
            SimulationError::Trial {
                source: SuitabilityError::Ontology(o @ OntologyError::UnknownClass(_)),
                ..
            } => o.into(),
            other => CliError::Input(other.to_string()),
        }
    }
}

impl From<StoreError> for CliError {
    fn from(e: StoreError) -> Self {
        CliError::Input(e.to_string())
    }
}

fn specification_needed(target: &ClassId) -> CliError {
    CliError::SpecificationNeeded(format!(
        "specification needed: no related class of `{target}` has a model; a new model has to be learned"
    ))
}

fn io_error(path: &Path, e: std::io::Error) -> CliError {
    CliError::Input(format!("{}: {e}", path.display()))
}

fn read(path: &Path) -> Result<String, CliError> {
    fs::read_to_string(path).map_err(|e| io_error(path, e))
}

fn write(path: &Path, contents: &str) -> Result<(), CliError> {
    fs::write(path, contents).map_err(|e| io_error(path, e))
}

struct Loaded {
    hierarchy: ClassHierarchy,
    checksum: String,
}

fn load_ontology(args: &OntologyArgs, stderr: &mut dyn Write) -> Result<Loaded, CliError> {
    let source = read(&args.ontology)?;
    let format = match args.format {
        Some(FormatArg::Json) => OntologyFormat::JsonTree,
        Some(FormatArg::Owl) => OntologyFormat::OwlSubset,
        None => OntologyFormat::from_extension(&args.ontology).ok_or_else(|| {
            CliError::Input(format!(
                "{}: cannot infer ontology format from extension; pass --format",
                args.ontology.display()
            ))
        })?,
    };
    let hierarchy = match format {
        OntologyFormat::JsonTree => crate::ontology::json_tree::parse(&source)?,
        OntologyFormat::OwlSubset => {
            let parsed = owl::parse(&source)?;
            for w in &parsed.warnings {
                let _ = writeln!(stderr, "warning: {w}");
            }
            parsed.hierarchy
        }
    };
    Ok(Loaded {
        hierarchy,
        checksum: ontology_checksum(&source),
    })
}

/// Comma-separated names, or `@path` with one name per line. Blank entries
/// and `#` comments are ignored.
fn name_list(list: &str) -> Result<Vec<String>, CliError> {
    let text;
    let (items, sep): (&str, char) = match list.strip_prefix('@') {
        Some(path) => {
            text = read(Path::new(path))?;
            (&text, '\n')
        }
        None => (list, ','),
    };
    Ok(items
        .split(sep)
        .map(|s| s.split('#').next().unwrap_or("").trim())
        .filter(|s| !s.is_empty())
        .map(str::to_string)
        .collect())
}

fn registry(h: &ClassHierarchy, args: &ModelArgs) -> Result<ModelRegistry, CliError> {
    Ok(ModelRegistry::from_names(h, &name_list(&args.models)?)?)
}

fn open_kb(path: &Path, checksum: &str, cfg: &SuitabilityConfig, stderr: &mut dyn Write) -> Result<KnowledgeBase, CliError> {
    let kb = KnowledgeBase::load_or_new(path, KbMeta::new(checksum, cfg))?;
    if !kb.check_ontology(checksum) {
        let _ = writeln!(
            stderr,
            "warning: {} was recorded under a different ontology",
            path.display()
        );
    }
    Ok(kb)
}

/// Runs the CLI on `args` (including the program name) and returns the exit
/// code. All output goes through the given streams.
pub fn run<I, T>(args: I, stdin: &mut dyn BufRead, stdout: &mut dyn Write, stderr: &mut dyn Write) -> i32
where
    I: IntoIterator<Item = T>,
    T: Into<std::ffi::OsString> + Clone,
{
    let cli = match Cli::try_parse_from(args) {
        Ok(cli) => cli,
        Err(e) => {
            let code = if e.use_stderr() {
                let _ = write!(stderr, "{}", e.render());
                EXIT_INPUT
            } else {
                let _ = write!(stdout, "{}", e.render());
                EXIT_OK
            };
            return code;
        }
    };
    match dispatch(cli.command, stdin, stdout, stderr) {
        Ok(()) => EXIT_OK,
        Err(e) => {
            let _ = writeln!(stderr, "error: {}", e.message());
            e.code()
        }
    }
}

fn dispatch(
    command: Command,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    match command {
        Command::Cluster {
            ontology,
            target,
            models,
        } => cmd_cluster(&ontology, &target, &models, stdout, stderr),
        Command::Similarity { ontology, a, b } => {
            let h = load_ontology(&ontology, stderr)?.hierarchy;
            out(stdout, format_args!("{:.6}\n", h.wup_similarity(&a, &b)?))
        }
        Command::Select {
            ontology,
            target,
            models,
            kb,
            decision,
        } => cmd_select(&ontology, &target, &models, kb.as_deref(), &decision, stdout, stderr),
        Command::Simulate {
            ontology,
            models,
            gt,
            targets,
            trials,
            strategy,
            out,
            kb,
            decision,
        } => {
            let args = SimulateArgs {
                gt,
                targets,
                trials,
                strategy,
                out,
                kb,
            };
            cmd_simulate(&ontology, &models, &args, &decision, stdout, stderr)
        }
        Command::Teach {
            ontology,
            target,
            models,
            kb,
            decision,
        } => cmd_teach(&ontology, &target, &models, &kb, &decision, stdin, stdout, stderr),
        Command::Kb { command } => cmd_kb(command, stdout),
    }
}

fn out(stdout: &mut dyn Write, args: std::fmt::Arguments<'_>) -> Result<(), CliError> {
    stdout
        .write_fmt(args)
        .map_err(|e| CliError::Input(format!("writing output: {e}")))
}

fn cmd_cluster(
    ontology: &OntologyArgs,
    target: &str,
    models: &ModelArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let h = load_ontology(ontology, stderr)?.hierarchy;
    let registry = registry(&h, models)?;
    let cluster = h.object_cluster(target, |c| registry.has_model(c.as_str()))?;
    for member in &cluster.members {
        out(stdout, format_args!("{member}\n"))?;
    }
    out(stdout, format_args!("cluster size: {}\n", cluster.len()))
}

fn cmd_select(
    ontology: &OntologyArgs,
    target: &str,
    models: &ModelArgs,
    kb: Option<&Path>,
    decision: &DecisionArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load_ontology(ontology, stderr)?;
    let h = &loaded.hierarchy;
    let registry = registry(h, models)?;
    let cfg = decision.config()?;
    let store = match kb {
        Some(path) => open_kb(path, &loaded.checksum, &cfg, stderr)?,
        None => KnowledgeBase::new(KbMeta::new(&loaded.checksum, &cfg)),
    };
    let target_id = h.class(target)?.clone();
    if registry.has_model(target) {
        return out(stdout, format_args!("selected: {target_id} (own model)\n"));
    }
    let mut ctx = DecisionContext::new(h, &registry, &cfg, &decision.action, &decision.mode);
    ctx.reset_posteriors = decision.reset_posteriors;
    let Some(mut graph) = ctx.load_graph(target, &store)? else {
        return Err(specification_needed(&target_id));
    };
    let (mut rng, _) = campaign_rngs(decision.seed);
    graph.update_posteriors(&mut SampledMean::new(&cfg, &mut rng))?;
    let selected = graph.select_model(&mut rng)?;
    out(stdout, format_args!("selected: {selected}\n"))?;
    out(
        stdout,
        format_args!(
            "{:<24} {:>10} {:>9} {:>9} {:>10}\n",
            "candidate", "similarity", "n_success", "n_failure", "posterior"
        ),
    )?;
    for (id, c) in graph.candidates() {
        out(
            stdout,
            format_args!(
                "{:<24} {:>10.6} {:>9} {:>9} {:>10.6}\n",
                id.as_str(),
                c.similarity,
                c.record.n_success,
                c.record.n_failure,
                c.record.posterior
            ),
        )?;
    }
    Ok(())
}

struct SimulateArgs {
    gt: PathBuf,
    targets: String,
    trials: usize,
    strategy: Strategy,
    out: PathBuf,
    kb: Option<PathBuf>,
}

fn cmd_simulate(
    ontology: &OntologyArgs,
    models: &ModelArgs,
    args: &SimulateArgs,
    decision: &DecisionArgs,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load_ontology(ontology, stderr)?;
    let h = &loaded.hierarchy;
    let registry = registry(h, models)?;
    let gt = GroundTruthMatrix::from_json(&read(&args.gt)?)?;
    let cfg = decision.config()?;
    let targets = name_list(&args.targets)?;
    let mut config = CampaignConfig::new(&targets, decision.seed);
    config.trials_per_object = args.trials;
    config.suitability = cfg.clone();
    config.strategy = args.strategy;
    config.action = decision.action.clone();
    config.mode = decision.mode.clone();
    if decision.reset_posteriors {
        let _ = writeln!(stderr, "warning: --reset-posteriors has no effect on simulate");
    }

    let mut store = match &args.kb {
        Some(path) => open_kb(path, &loaded.checksum, &cfg, stderr)?,
        None => KnowledgeBase::new(KbMeta::new(&loaded.checksum, &cfg)),
    };
    let log = run_campaign_with_store(&config, h, &registry, &gt, &mut store)?;
    let report = summarize(&log);

    fs::create_dir_all(&args.out).map_err(|e| io_error(&args.out, e))?;
    write(&args.out.join("report.csv"), &report.to_csv())?;
    write(&args.out.join("report.json"), &report.to_json())?;
    write(&args.out.join("trials.json"), &log.to_json())?;
    if let Some(path) = &args.kb {
        store.save(path)?;
    }
    out(stdout, format_args!("{}", report.to_csv()))
}

#[allow(clippy::too_many_arguments)]
fn cmd_teach(
    ontology: &OntologyArgs,
    target: &str,
    models: &ModelArgs,
    kb: &Path,
    decision: &DecisionArgs,
    stdin: &mut dyn BufRead,
    stdout: &mut dyn Write,
    stderr: &mut dyn Write,
) -> Result<(), CliError> {
    let loaded = load_ontology(ontology, stderr)?;
    let h = &loaded.hierarchy;
    let registry = registry(h, models)?;
    let cfg = decision.config()?;
    let mut store = open_kb(kb, &loaded.checksum, &cfg, stderr)?;
    let target_id = h.class(target)?.clone();
    let mut ctx = DecisionContext::new(h, &registry, &cfg, &decision.action, &decision.mode);
    ctx.reset_posteriors = decision.reset_posteriors;
    let (mut rng, _) = campaign_rngs(decision.seed);
    let mut used: BTreeSet<ClassId> = BTreeSet::new();

    loop {
        let mut quit = false;
        let mut teacher = |t: &ClassId, model: &ClassId| -> Result<bool, ExecutionError> {
            let _ = writeln!(stdout, "apply model of {model} to {t}");
            loop {
                let _ = write!(stdout, "success? [y/n/q] ");
                let _ = stdout.flush();
                let mut line = String::new();
                match stdin.read_line(&mut line) {
                    Ok(0) | Err(_) => break,
                    Ok(_) => match line.trim().to_ascii_lowercase().as_str() {
                        "y" | "yes" => return Ok(true),
                        "n" | "no" => return Ok(false),
                        "q" | "quit" => break,
                        other => {
                            let _ = writeln!(stdout, "please answer y, n or q (got `{other}`)");
                        }
                    },
                }
            }
            quit = true;
            Err(ExecutionError("session ended by teacher".into()))
        };
        let result = generalise_execution_model(&ctx, target, &mut store, &mut teacher, &mut rng);
        match result {
            Err(SuitabilityError::Execution(_)) if quit => break,
            Err(e) => return Err(e.into()),
            Ok(Generalisation::SpecificationNeeded) => return Err(specification_needed(&target_id)),
            Ok(Generalisation::OwnModel { outcome }) => {
                out(stdout, format_args!("recorded {} for own model\n", label(outcome)))?;
            }
            Ok(Generalisation::Transferred(step)) => {
                store.save(kb)?;
                let record = store.query(&ctx.key(&target_id, &step.model)?).copied().unwrap_or_default();
                out(
                    stdout,
                    format_args!(
                        "recorded {} for {}: n_success={} n_failure={}\n",
                        label(step.outcome),
                        step.model,
                        record.n_success,
                        record.n_failure
                    ),
                )?;
                used.insert(step.model);
            }
        }
    }

    heuristic_status(&ctx, &target_id, &used, &store, stdout)
}

fn label(outcome: bool) -> &'static str {
    if outcome {
        "success"
    } else {
        "failure"
    }
}

fn filled(
    records: BTreeMap<ClassId, ExperienceRecord>,
    classes: impl IntoIterator<Item = ClassId>,
) -> BTreeMap<ClassId, ExperienceRecord> {
    let mut all: BTreeMap<ClassId, ExperienceRecord> = classes.into_iter().map(|c| (c, Default::default())).collect();
    all.extend(records);
    all
}

fn heuristic_status(
    ctx: &DecisionContext<'_>,
    target: &ClassId,
    used: &BTreeSet<ClassId>,
    store: &KnowledgeBase,
    stdout: &mut dyn Write,
) -> Result<(), CliError> {
    let yes_no = |b: bool| if b { "yes" } else { "no" };
    if !ctx.registry.has_model(target.as_str()) {
        let cluster = ctx.cluster(target.as_str())?;
        let records = filled(
            store.records_for(&ctx.action, &ctx.mode, target.as_str()),
            cluster.members.iter().cloned(),
        );
        let needed = specification_check(&cluster, &records, ctx.cfg)?;
        out(stdout, format_args!("specification needed for {target}: {}\n", yes_no(needed)))?;
    }
    for model in used {
        let Some(parent) = ctx.hierarchy.parent(model.as_str())? else {
            continue;
        };
        let siblings = ctx.hierarchy.siblings(model.as_str())?;
        let records = filled(
            store.records_of_model(&ctx.action, &ctx.mode, model.as_str()),
            siblings.iter().map(|s| (*s).clone()),
        );
        let general = generalisation_check(model, siblings, &records, ctx.cfg)?;
        out(
            stdout,
            format_args!("model of {model} generalises to {parent}: {}\n", yes_no(general)),
        )?;
    }
    Ok(())
}

fn cmd_kb(command: KbCommand, stdout: &mut dyn Write) -> Result<(), CliError> {
    match command {
        KbCommand::Export { kb, output } => {
            let store = if kb.exists() {
                KnowledgeBase::load(&kb)?
            } else {
                KnowledgeBase::default()
            };
            match output {
                Some(path) => write(&path, &store.export_json()),
                None => out(stdout, format_args!("{}", store.export_json())),
            }
        }
        KbCommand::Import { kb, input } => {
            let store = KnowledgeBase::import_json(&read(&input)?)?;
            store.save(&kb)?;
            out(stdout, format_args!("imported {} entries into {}\n", store.len(), kb.display()))
        }
        KbCommand::Show { kb } => {
            let store = KnowledgeBase::load(&kb)?;
            out(
                stdout,
                format_args!(
                    "{:<12} {:<10} {:<20} {:<20} {:>9} {:>9} {:>10}\n",
                    "action", "mode", "target", "candidate", "n_success", "n_failure", "posterior"
                ),
            )?;
            for (k, r) in store.iter() {
                out(
                    stdout,
                    format_args!(
                        "{:<12} {:<10} {:<20} {:<20} {:>9} {:>9} {:>10.6}\n",
                        k.action,
                        k.mode,
                        k.target.as_str(),
                        k.candidate.as_str(),
                        r.n_success,
                        r.n_failure,
                        r.posterior
                    ),
                )?;
            }
            out(stdout, format_args!("{} entries\n", store.len()))
        }
    }
}
