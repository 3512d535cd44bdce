//! `metaverify` command line: one subcommand per pipeline stage, each reading
//! the stores written by earlier stages in the working directory.

use std::collections::HashSet;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Duration;

use clap::{Parser, Subcommand, ValueEnum};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use metaverify::analysis::{
    compare_groups, covered_pairs, evaluate_claims_abc, evaluate_claims_de, group_flags, group_ids,
    group_usage_rates, pooled_summary, verb_candidates, verb_summary, ClaimResult, ClassifiedPair, Comparison,
    GroupKey, GroupMember, PairClass, VerbStats, VerbSummary,
};
use metaverify::annotate::{
    annotate_metaphor, annotate_sentiment, append_annotations, eval_annotator, load_annotations, AnnotationIndex,
    AnnotatorSpec, StoredAnnotation, Task,
};
use metaverify::config::PipelineConfig;
use metaverify::corpus::{
    classify_subject_person, extract_verb_object, read_corpus, ErrorPolicy, InputFormat, LengthBins, Sentence,
    VerbObjectOccurrence,
};
use metaverify::error::ErrorKind;
use metaverify::io::{read_json, read_jsonl, write_json, write_jsonl};
use metaverify::norms::{coverage, load_norm_table, type_coverage, Norm, NormKind, NormSet};
use metaverify::report::{self, read_manifest, write_manifest, Format, RunManifest};
use metaverify::{Error, Result};

const SENTENCES: &str = "sentences.jsonl";
const OCCURRENCES: &str = "occurrences.jsonl";
const VERB_STATS: &str = "verb_stats.jsonl";
const ANNOTATIONS: &str = "annotations.jsonl";
const PAIRS: &str = "pairs.jsonl";
const VERBS: &str = "verbs.jsonl";
const SUMMARIES: &str = "summaries.json";
const CLAIMS_ABC: &str = "claims_abc.json";
const GROUPS: &str = "groups.jsonl";
const GROUP_INFO: &str = "groups.json";
const COMPARISONS: &str = "comparisons.json";
const CLAIMS_DE: &str = "claims_de.json";
const REPORT_DIR: &str = "report";
const MANIFEST: &str = "manifest.json";

#[derive(Parser, Debug)]
#[command(name = "metaverify", version, about = "Verify corpus claims about verb metaphors")]
struct Cli {
    /// Configuration file (`key = value` lines, `#` comments).
    #[arg(long, global = true, value_name = "FILE")]
    config: Option<PathBuf>,
    /// Replay the configuration recorded in a run manifest.
    #[arg(long, global = true, value_name = "FILE", conflicts_with = "config")]
    manifest: Option<PathBuf>,
    /// Directory holding the stage stores.
    #[arg(long, global = true, value_name = "DIR")]
    workdir: Option<PathBuf>,
    /// Master seed; overrides the file and METAVERIFY_SEED.
    #[arg(long, global = true)]
    seed: Option<u64>,
    /// Worker threads (0 = all cores).
    #[arg(long, global = true)]
    workers: Option<usize>,
    /// Override any configuration key.
    #[arg(long = "set", global = true, value_name = "KEY=VALUE")]
    set: Vec<String>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand, Debug)]
enum Command {
    /// Read the corpus and store sentences, verb-object occurrences and verb counts.
    Extract {
        /// Input files; replaces `inputs` from the configuration.
        #[arg(long = "input", value_name = "FILE")]
        inputs: Vec<PathBuf>,
        #[arg(long, value_name = "conllu|text")]
        input_format: Option<String>,
        #[arg(long, value_name = "skip|abort")]
        error_policy: Option<String>,
    },
    /// Label sentences with metaphor and sentiment annotations.
    Annotate {
        #[arg(long, value_enum, default_value_t = TaskArg::All)]
        task: TaskArg,
        #[arg(long, value_name = "SPEC")]
        metaphor_annotator: Option<String>,
        #[arg(long, value_name = "SPEC")]
        sentiment_annotator: Option<String>,
        /// Re-annotate sentences that already have a stored label.
        #[arg(long)]
        force: bool,
    },
    /// Aggregate verb-object pairs and classify them by metaphor rate.
    Pairs {
        #[arg(long)]
        hi: Option<f64>,
        #[arg(long)]
        lo: Option<f64>,
    },
    /// List verbs with their selection counts.
    Verbs {
        #[arg(long)]
        transitive_frac: Option<f64>,
        #[arg(long)]
        min_pairs: Option<u64>,
    },
    /// Per-verb norm summaries and the norm claims.
    ClaimsAbc {
        #[arg(long, default_value = "tsv")]
        format: Format,
    },
    /// Draw the six length-matched sentiment and person groups.
    Groups {
        #[arg(long)]
        per_group_n: Option<usize>,
        #[arg(long)]
        bin_width: Option<usize>,
    },
    /// Metaphor usage rates, group comparisons and the usage claims.
    ClaimsDe {
        #[arg(long)]
        replicates: Option<u64>,
        #[arg(long)]
        alpha: Option<f64>,
        #[arg(long, default_value = "tsv")]
        format: Format,
    },
    /// Render every available result table.
    Report {
        #[arg(long, default_value = "tsv")]
        format: Format,
    },
    /// Accuracy of an annotator against gold annotations.
    EvalAnnotator {
        /// Gold annotations (annotation store format).
        #[arg(long, value_name = "FILE")]
        gold: PathBuf,
        #[arg(long, value_enum)]
        task: TaskChoice,
        /// Stored predictions to score.
        #[arg(long, value_name = "FILE", conflicts_with = "annotator")]
        predictions: Option<PathBuf>,
        /// Annotator to run over `--sentences`.
        #[arg(long, value_name = "SPEC", requires = "sentences")]
        annotator: Option<String>,
        /// Sentence store the annotator reads.
        #[arg(long, value_name = "FILE")]
        sentences: Option<PathBuf>,
    },
    /// Norm table diagnostics.
    Norms {
        #[command(subcommand)]
        command: NormsCommand,
    },
}

#[derive(Subcommand, Debug)]
enum NormsCommand {
    /// Rows, duplicates, score ranges and object coverage per table.
    Stats,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TaskArg {
    Metaphor,
    Sentiment,
    All,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, ValueEnum)]
enum TaskChoice {
    Metaphor,
    Sentiment,
}

impl From<TaskChoice> for Task {
    fn from(t: TaskChoice) -> Self {
        match t {
            TaskChoice::Metaphor => Task::Metaphor,
            TaskChoice::Sentiment => Task::Sentiment,
        }
    }
}

#[derive(Debug, Serialize, Deserialize)]
struct SummaryStore {
    verbs: Vec<VerbSummary>,
    pooled: Option<VerbSummary>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupInfo {
    bins: LengthBins,
    group_size: usize,
    histogram: Vec<usize>,
    available: Vec<(GroupKey, usize)>,
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupRate {
    group: GroupKey,
    samples: usize,
    mur: f64,
}

#[derive(Debug, Serialize, Deserialize)]
struct GroupResults {
    rates: Vec<GroupRate>,
    comparisons: Vec<Comparison>,
}

/// Resolved configuration plus the manifest of the working directory.
struct Run {
    config: PipelineConfig,
    manifest: RunManifest,
}

impl Run {
    fn path(&self, name: &str) -> PathBuf {
        self.config.workdir.join(name)
    }

    fn require(&self, name: &str, stage: &'static str) -> Result<PathBuf> {
        let path = self.path(name);
        if path.exists() {
            Ok(path)
        } else {
            Err(Error::MissingStore { path, stage })
        }
    }

    fn annotations(&self) -> Result<AnnotationIndex> {
        let path = self.require(ANNOTATIONS, "annotate")?;
        Ok(AnnotationIndex::new(&load_annotations(&path, self.config.error_policy)?))
    }

    fn norms(&self) -> Result<NormSet> {
        let mut set = NormSet::default();
        for (path, kind) in norm_paths(&self.config) {
            let (table, report) = load_norm_table(path, kind)?;
            if !report.row_errors.is_empty() {
                log::warn!("{}: {} rows skipped", path.display(), report.row_errors.len());
            }
            set.insert(table);
        }
        Ok(set)
    }

    fn finish(mut self, stage: &str) -> Result<()> {
        self.manifest.record_stage(stage);
        write_manifest(&self.manifest, &self.path(MANIFEST))
    }
}

fn norm_paths(config: &PipelineConfig) -> Vec<(&Path, NormKind)> {
    [
        (&config.concreteness, NormKind::Concreteness),
        (&config.imageability, NormKind::Imageability),
        (&config.complexity, NormKind::Complexity),
    ]
    .into_iter()
    .filter_map(|(p, k)| p.as_deref().map(|p| (p, k)))
    .collect()
}

fn set_opt<T: ToString>(config: &mut PipelineConfig, key: &str, value: &Option<T>) -> Result<()> {
    match value {
        Some(v) => config.set(key, &v.to_string()),
        None => Ok(()),
    }
}

/// Defaults, then file or manifest, then `METAVERIFY_SEED`, then flags.
fn resolve_config(cli: &Cli) -> Result<PipelineConfig> {
    let mut config = match (&cli.manifest, &cli.config) {
        (Some(path), _) => {
            let manifest = read_manifest(path)?;
            manifest.verify_inputs()?;
            manifest.config
        }
        (None, Some(path)) => PipelineConfig::load(path)?,
        (None, None) => PipelineConfig::default(),
    };
    config.apply_env()?;
    for item in &cli.set {
        let (key, value) = item
            .split_once('=')
            .ok_or_else(|| Error::Config(format!("--set expects KEY=VALUE, got {item:?}")))?;
        config.set(key.trim(), value.trim())?;
    }
    match &cli.command {
        Command::Extract {
            inputs,
            input_format,
            error_policy,
        } => {
            if !inputs.is_empty() {
                config.inputs = inputs.clone();
            }
            set_opt(&mut config, "input_format", input_format)?;
            set_opt(&mut config, "error_policy", error_policy)?;
        }
        Command::Annotate {
            metaphor_annotator,
            sentiment_annotator,
            ..
        } => {
            set_opt(&mut config, "metaphor_annotator", metaphor_annotator)?;
            set_opt(&mut config, "sentiment_annotator", sentiment_annotator)?;
        }
        Command::Pairs { hi, lo } => {
            set_opt(&mut config, "hi", hi)?;
            set_opt(&mut config, "lo", lo)?;
        }
        Command::Verbs {
            transitive_frac,
            min_pairs,
        } => {
            set_opt(&mut config, "transitive_frac", transitive_frac)?;
            set_opt(&mut config, "min_pairs", min_pairs)?;
        }
        Command::Groups { per_group_n, bin_width } => {
            set_opt(&mut config, "per_group_n", per_group_n)?;
            set_opt(&mut config, "bin_width", bin_width)?;
        }
        Command::ClaimsDe { replicates, alpha, .. } => {
            set_opt(&mut config, "replicates", replicates)?;
            set_opt(&mut config, "alpha", alpha)?;
        }
        _ => {}
    }
    if let Some(seed) = cli.seed {
        config.seed = seed;
    }
    if let Some(workers) = cli.workers {
        config.workers = workers;
    }
    if let Some(dir) = &cli.workdir {
        config.workdir = dir.clone();
    }
    config.validate()?;
    Ok(config)
}

/// Starts from the current configuration, keeping the input digests and
/// stage history of an existing manifest in the working directory.
fn open_run(config: PipelineConfig) -> Result<Run> {
    std::fs::create_dir_all(&config.workdir).map_err(|e| Error::io(&config.workdir, e))?;
    let mut manifest = RunManifest::new(&config);
    let path = config.workdir.join(MANIFEST);
    if path.exists() {
        match read_json::<RunManifest>(&path) {
            Ok(old) => {
                manifest.inputs = old.inputs;
                manifest.stages = old.stages;
                manifest.started_unix = old.started_unix;
            }
            Err(e) => log::warn!("ignoring unreadable manifest: {e}"),
        }
    }
    Ok(Run { config, manifest })
}

fn annotator_spec(config: &PipelineConfig, text: &str, task: Task) -> Result<AnnotatorSpec> {
    let mut spec = AnnotatorSpec::parse(text, task)?;
    spec.timeout = Duration::from_secs_f64(config.annotator_timeout);
    spec.batch_size = config.batch_size;
    spec.workers = config.annotator_workers;
    spec.validate()?;
    Ok(spec)
}

fn run_annotator(sentences: &[Sentence], spec: &AnnotatorSpec, task: Task) -> Result<Vec<StoredAnnotation>> {
    Ok(match task {
        Task::Metaphor => annotate_metaphor(sentences, spec)?.iter().map(Into::into).collect(),
        Task::Sentiment => annotate_sentiment(sentences, spec)?.iter().map(Into::into).collect(),
    })
}

fn cmd_extract(run: &mut Run) -> Result<()> {
    let config = &run.config;
    if config.inputs.is_empty() {
        return Err(Error::Config("no inputs configured".into()));
    }
    let mut sentences: Vec<Sentence> = Vec::new();
    let mut seen: HashSet<String> = HashSet::new();
    for path in &config.inputs {
        let format = config.input_format.unwrap_or_else(|| InputFormat::detect(path));
        for s in read_corpus(path, format, config.error_policy)? {
            if !seen.insert(s.id.clone()) {
                let message = format!("{}: duplicate sentence id {}", path.display(), s.id);
                match config.error_policy {
                    ErrorPolicy::Abort => return Err(Error::Data(message)),
                    ErrorPolicy::Skip => {
                        log::warn!("{message}; skipped");
                        continue;
                    }
                }
            }
            sentences.push(s);
        }
    }
    let occurrences: Vec<VerbObjectOccurrence> = sentences
        .par_iter()
        .map(extract_verb_object)
        .collect::<Vec<_>>()
        .into_iter()
        .flatten()
        .collect();
    let stats = metaverify::analysis::verb_occurrence_stats(&sentences, &occurrences);
    write_jsonl(&run.path(SENTENCES), &sentences)?;
    write_jsonl(&run.path(OCCURRENCES), &occurrences)?;
    write_jsonl(&run.path(VERB_STATS), &stats)?;
    for path in run.config.inputs.clone() {
        run.manifest.add_input(&path)?;
    }
    println!(
        "extracted {} sentences, {} verb-object occurrences, {} verbs",
        sentences.len(),
        occurrences.len(),
        stats.len()
    );
    Ok(())
}

fn cmd_annotate(run: &Run, task: TaskArg, force: bool) -> Result<()> {
    let sentences: Vec<Sentence> = read_jsonl(&run.require(SENTENCES, "extract")?)?;
    let store = run.path(ANNOTATIONS);
    let existing = AnnotationIndex::new(&load_annotations(&store, run.config.error_policy)?);
    let wanted: Vec<(Task, &Option<String>)> = [
        (Task::Metaphor, &run.config.metaphor_annotator),
        (Task::Sentiment, &run.config.sentiment_annotator),
    ]
    .into_iter()
    .filter(|(t, _)| match task {
        TaskArg::All => true,
        TaskArg::Metaphor => *t == Task::Metaphor,
        TaskArg::Sentiment => *t == Task::Sentiment,
    })
    .collect();
    let mut ran = 0;
    for (t, spec_text) in wanted {
        let Some(spec_text) = spec_text else {
            if task == TaskArg::All {
                log::warn!("no {} annotator configured; skipped", t.as_str());
                continue;
            }
            return Err(Error::Config(format!("no {}_annotator configured", t.as_str())));
        };
        let spec = annotator_spec(&run.config, spec_text, t)?;
        let pending: Vec<Sentence> = sentences
            .iter()
            .filter(|s| {
                force
                    || match t {
                        Task::Metaphor => !existing.metaphor.contains_key(&s.id),
                        Task::Sentiment => !existing.sentiment.contains_key(&s.id),
                    }
            })
            .cloned()
            .collect();
        let records = run_annotator(&pending, &spec, t)?;
        for (s, r) in pending.iter().zip(&records) {
            if let StoredAnnotation::Metaphor { labels, .. } = r {
                if labels.len() != s.tokens.len() {
                    return Err(Error::Alignment {
                        id: s.id.clone(),
                        message: format!("{} labels for {} tokens", labels.len(), s.tokens.len()),
                    });
                }
            }
        }
        append_annotations(&store, &records)?;
        println!(
            "{}: annotated {} sentences ({} already stored)",
            t.as_str(),
            records.len(),
            sentences.len() - pending.len()
        );
        ran += 1;
    }
    if ran == 0 {
        return Err(Error::Config("no annotator configured".into()));
    }
    Ok(())
}

fn cmd_pairs(run: &Run) -> Result<()> {
    let occurrences: Vec<VerbObjectOccurrence> = read_jsonl(&run.require(OCCURRENCES, "extract")?)?;
    let index = run.annotations()?;
    let records = metaverify::analysis::aggregate_pairs(&occurrences, &index)?;
    let pairs = metaverify::analysis::classify_pairs(&records, run.config.thresholds())?;
    write_jsonl(&run.path(PAIRS), &pairs)?;
    let count = |c: PairClass| pairs.iter().filter(|p| p.class == c).count();
    println!(
        "{} pairs: {} metaphorical, {} literal, {} ambiguous",
        pairs.len(),
        count(PairClass::Metaphorical),
        count(PairClass::Literal),
        count(PairClass::Ambiguous)
    );
    Ok(())
}

fn load_pairs_and_stats(run: &Run) -> Result<(Vec<ClassifiedPair>, Vec<VerbStats>)> {
    let pairs = read_jsonl(&run.require(PAIRS, "pairs")?)?;
    let stats = read_jsonl(&run.require(VERB_STATS, "extract")?)?;
    Ok((pairs, stats))
}

fn cmd_verbs(run: &Run) -> Result<()> {
    let (pairs, stats) = load_pairs_and_stats(run)?;
    let norms = run.norms()?;
    let covered = covered_pairs(&pairs, &norms);
    let candidates = verb_candidates(&covered, &stats, &run.config.selection());
    write_jsonl(&run.path(VERBS), &candidates)?;
    let selected = candidates.iter().filter(|c| c.selected).count();
    println!("{selected} of {} verbs selected", candidates.len());
    Ok(())
}

fn cmd_claims_abc(run: &Run, format: Format) -> Result<()> {
    let (pairs, stats) = load_pairs_and_stats(run)?;
    let norms = run.norms()?;
    if norms.loaded().is_empty() {
        return Err(Error::Config("no norm tables configured".into()));
    }
    let covered = covered_pairs(&pairs, &norms);
    let candidates = verb_candidates(&covered, &stats, &run.config.selection());
    write_jsonl(&run.path(VERBS), &candidates)?;
    let verbs: Vec<String> = candidates.iter().filter(|c| c.selected).map(|c| c.verb.clone()).collect();
    if verbs.is_empty() {
        return Err(Error::Data("no verb meets the selection criteria".into()));
    }
    let config = run.config.summary();
    let summaries = verbs
        .iter()
        .map(|v| verb_summary(v, &covered, &norms, &config))
        .collect::<Result<Vec<_>>>()?;
    let pooled = pooled_summary(&verbs, &covered, &norms, &config)?;
    let claims = evaluate_claims_abc(&summaries, run.config.alpha)?;
    write_json(
        &run.path(SUMMARIES),
        &SummaryStore {
            verbs: summaries,
            pooled: Some(pooled),
        },
    )?;
    write_json(&run.path(CLAIMS_ABC), &claims)?;
    write_report_files(&run.config.workdir, format)?;
    print!("{}", report::render_claims_table(&claims, format));
    Ok(())
}

fn cmd_groups(run: &Run) -> Result<()> {
    let sentences: Vec<Sentence> = read_jsonl(&run.require(SENTENCES, "extract")?)?;
    let index = run.annotations()?;
    let persons: Vec<_> = sentences.par_iter().map(classify_subject_person).collect();
    let samples = metaverify::analysis::build_groups(
        &sentences,
        &index,
        &persons,
        run.config.per_group_n,
        run.config.bins(),
        run.config.seeds().sampling,
    )?;
    let size = samples.group_size();
    if size < run.config.per_group_n {
        log::warn!("groups hold {size} sentences each, below the requested {}", run.config.per_group_n);
    }
    write_jsonl(&run.path(GROUPS), &samples.members())?;
    write_json(
        &run.path(GROUP_INFO),
        &GroupInfo {
            bins: samples.bins,
            group_size: size,
            histogram: samples.histogram.clone(),
            available: samples.available.iter().map(|(k, v)| (*k, *v)).collect(),
        },
    )?;
    println!("6 groups of {size} sentences");
    Ok(())
}

fn cmd_claims_de(run: &Run, format: Format) -> Result<()> {
    let members: Vec<GroupMember> = read_jsonl(&run.require(GROUPS, "groups")?)?;
    let index = run.annotations()?;
    let flags = group_flags(&group_ids(&members), &index)?;
    let rates = group_usage_rates(&flags);
    let comparisons = compare_groups(&flags, &run.config.comparison())?;
    let claims = evaluate_claims_de(&comparisons)?;
    let results = GroupResults {
        rates: rates
            .iter()
            .map(|(k, mur)| GroupRate {
                group: *k,
                samples: flags.get(k).map_or(0, Vec::len),
                mur: *mur,
            })
            .collect(),
        comparisons,
    };
    write_json(&run.path(COMPARISONS), &results)?;
    write_json(&run.path(CLAIMS_DE), &claims)?;
    write_report_files(&run.config.workdir, format)?;
    print!("{}", report::render_group_tables(&rates, &results.comparisons, format));
    println!();
    print!("{}", report::render_claims_table(&claims, format));
    Ok(())
}

/// Renders every table whose results exist. Returns the files written.
fn write_report_files(workdir: &Path, format: Format) -> Result<Vec<PathBuf>> {
    let dir = workdir.join(REPORT_DIR);
    let ext = format.extension();
    let mut documents: Vec<(String, String)> = Vec::new();
    let summaries = workdir.join(SUMMARIES);
    if summaries.exists() {
        let store: SummaryStore = read_json(&summaries)?;
        for norm in Norm::ALL {
            if store.verbs.iter().any(|s| s.norm(norm).is_some()) {
                documents.push((
                    format!("verbs_{norm}.{ext}"),
                    report::render_verb_table(&store.verbs, store.pooled.as_ref(), norm, format),
                ));
            }
        }
        documents.push((
            format!("verb_summary.{ext}"),
            report::render_summary_table(&store.verbs, store.pooled.as_ref(), format),
        ));
    }
    let comparisons = workdir.join(COMPARISONS);
    if comparisons.exists() {
        let results: GroupResults = read_json(&comparisons)?;
        let rates = results.rates.iter().map(|r| (r.group, r.mur)).collect();
        documents.push((
            format!("groups.{ext}"),
            report::render_group_tables(&rates, &results.comparisons, format),
        ));
    }
    let mut claims: Vec<ClaimResult> = Vec::new();
    for name in [CLAIMS_ABC, CLAIMS_DE] {
        let path = workdir.join(name);
        if path.exists() {
            claims.extend(read_json::<Vec<ClaimResult>>(&path)?);
        }
    }
    if !claims.is_empty() {
        documents.push((format!("claims.{ext}"), report::render_claims_table(&claims, format)));
    }
    if documents.is_empty() {
        return Err(Error::MissingStore {
            path: summaries,
            stage: "claims-abc",
        });
    }
    std::fs::create_dir_all(&dir).map_err(|e| Error::io(&dir, e))?;
    let mut written = Vec::new();
    for (name, text) in documents {
        let path = dir.join(name);
        std::fs::write(&path, text).map_err(|e| Error::io(&path, e))?;
        written.push(path);
    }
    Ok(written)
}

fn cmd_report(run: &Run, format: Format) -> Result<()> {
    for path in write_report_files(&run.config.workdir, format)? {
        println!("{}", path.display());
    }
    Ok(())
}

fn cmd_eval(
    config: &PipelineConfig,
    gold: &Path,
    task: Task,
    predictions: Option<&Path>,
    annotator: Option<&str>,
    sentences: Option<&Path>,
) -> Result<()> {
    let gold = load_annotations(gold, ErrorPolicy::Abort)?;
    let predicted = match (predictions, annotator, sentences) {
        (Some(path), _, _) => load_annotations(path, ErrorPolicy::Abort)?,
        (None, Some(spec), Some(sentences)) => {
            let ids: HashSet<&str> = gold.iter().filter(|g| g.task() == task).map(|g| g.id()).collect();
            let sentences: Vec<Sentence> = read_jsonl::<Sentence>(sentences)?
                .into_iter()
                .filter(|s| ids.contains(s.id.as_str()))
                .collect();
            run_annotator(&sentences, &annotator_spec(config, spec, task)?, task)?
        }
        _ => {
            return Err(Error::InvalidArgument(
                "give --predictions, or --annotator with --sentences".into(),
            ))
        }
    };
    let accuracy = eval_annotator(&gold, &predicted, task)?;
    println!("{} accuracy: {}", task.as_str(), report::round_half_away(accuracy, 4));
    Ok(())
}

fn cmd_norms_stats(config: &PipelineConfig) -> Result<()> {
    let paths = norm_paths(config);
    if paths.is_empty() {
        return Err(Error::Config("no norm tables configured".into()));
    }
    let occurrences = config.workdir.join(OCCURRENCES);
    let objects: Option<Vec<String>> = if occurrences.exists() {
        let occ: Vec<VerbObjectOccurrence> = read_jsonl(&occurrences)?;
        Some(occ.into_iter().map(|o| o.object_lemma).collect())
    } else {
        None
    };
    println!("norm\tfile\trows\tentries\tduplicates\trow_errors\tmin\tmax\ttoken_coverage\ttype_coverage");
    for (path, kind) in paths {
        let (table, load) = load_norm_table(path, kind)?;
        let (lo, hi) = table.observed_range().unwrap_or((f64::NAN, f64::NAN));
        let (token, types) = match objects.as_deref() {
            Some(objects) if !objects.is_empty() => (
                report::round_half_away(coverage(&table, objects.iter().map(String::as_str))?, 4),
                report::round_half_away(type_coverage(&table, objects.iter().map(String::as_str))?, 4),
            ),
            _ => ("NA".into(), "NA".into()),
        };
        println!(
            "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{}\t{token}\t{types}",
            table.norm(),
            path.display(),
            load.rows,
            table.len(),
            load.duplicates,
            load.row_errors.len(),
            report::format_norm(lo),
            report::format_norm(hi),
        );
    }
    Ok(())
}

fn execute(cli: Cli) -> Result<()> {
    let config = resolve_config(&cli)?;
    if config.workers > 0 {
        // Only fails when a pool already exists, which cannot happen here.
        let _ = rayon::ThreadPoolBuilder::new().num_threads(config.workers).build_global();
    }
    match cli.command {
        Command::EvalAnnotator {
            gold,
            task,
            predictions,
            annotator,
            sentences,
        } => {
            return cmd_eval(
                &config,
                &gold,
                task.into(),
                predictions.as_deref(),
                annotator.as_deref(),
                sentences.as_deref(),
            )
        }
        Command::Norms {
            command: NormsCommand::Stats,
        } => return cmd_norms_stats(&config),
        _ => {}
    }
    let mut run = open_run(config)?;
    let stage = match cli.command {
        Command::Extract { .. } => {
            cmd_extract(&mut run)?;
            "extract"
        }
        Command::Annotate { task, force, .. } => {
            cmd_annotate(&run, task, force)?;
            "annotate"
        }
        Command::Pairs { .. } => {
            cmd_pairs(&run)?;
            "pairs"
        }
        Command::Verbs { .. } => {
            cmd_verbs(&run)?;
            "verbs"
        }
        Command::ClaimsAbc { format } => {
            cmd_claims_abc(&run, format)?;
            "claims-abc"
        }
        Command::Groups { .. } => {
            cmd_groups(&run)?;
            "groups"
        }
        Command::ClaimsDe { format, .. } => {
            cmd_claims_de(&run, format)?;
            "claims-de"
        }
        Command::Report { format } => {
            cmd_report(&run, format)?;
            "report"
        }
        Command::EvalAnnotator { .. } | Command::Norms { .. } => unreachable!("handled above"),
    };
    run.finish(stage)
}

fn main() -> ExitCode {
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or("warn")).init();
    let cli = match Cli::try_parse() {
        Ok(cli) => cli,
        Err(e) => {
            let _ = e.print();
            return if e.use_stderr() { ExitCode::from(1) } else { ExitCode::SUCCESS };
        }
    };
    match execute(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            match e.kind() {
                ErrorKind::Validation => ExitCode::from(1),
                ErrorKind::Data => ExitCode::from(2),
            }
        }
    }
}
