use std::collections::BTreeSet;
use std::fs;
use std::io::{self, BufReader, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;

use anyhow::{anyhow, Context};
use clap::{Args, Parser, Subcommand};
use devrank::centrality::{
    histogram, histogram_csv, join_activity, rate_network, ratings_from_csv, CentralityOptions,
    DistanceMode, RatingTable,
};
use devrank::fixture::{generate_fixture_corpus, to_jsonl, FixtureConfig};
use devrank::graph::{build_network_with_roster, stats, DevNetwork};
use devrank::ingest::{
    collect_roster, commit_involvement, developer_activity, extract_all_instances, read_instances,
    write_instances, EventRecord, DEFAULT_WINDOW_DAYS,
};
use devrank::pipeline::{
    communities_json, load_events, pretty, read_roster, run_pipeline, PipelineConfig,
    PipelineError, DEFAULT_BINS,
};
use devrank::survey::{eligible_respondents, sample_survey_targets, SurveyError, SurveySample};
use serde_json::json;

/// Developer centrality ratings from commit and pull-request history.
#[derive(Debug, Parser)]
#[command(name = "devrank", version, propagate_version = true)]
struct Cli {
    /// Seed for every randomised step.
    #[arg(long, global = true, default_value_t = devrank::DEFAULT_SEED)]
    seed: u64,
    /// Only print errors.
    #[arg(long, global = true)]
    quiet: bool,
    /// Print summaries as JSON.
    #[arg(long, global = true)]
    json: bool,
    /// Worker threads (default: all cores).
    #[arg(long, global = true)]
    threads: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Debug, Subcommand)]
enum Command {
    /// Parse event files and extract collaboration instances.
    Ingest(IngestArgs),
    /// Build the collaboration network from instances.
    Build(BuildArgs),
    /// Structural statistics of a network.
    Stats(StatsArgs),
    /// Louvain community detection.
    Communities(CommunitiesArgs),
    /// Centrality measures and ratings for every developer.
    Rate(RateArgs),
    /// Bin counts of the rating distribution.
    Histogram(HistogramArgs),
    /// Draw survey targets for respondents.
    Sample(SampleArgs),
    /// Generate a synthetic event corpus.
    Fixture(FixtureArgs),
    /// Run ingest through histogram in one go.
    Pipeline(PipelineArgs),
}

#[derive(Debug, Args)]
struct IngestArgs {
    /// Event files (line-delimited JSON).
    #[arg(long, required = true, num_args = 1..)]
    events: Vec<PathBuf>,
    /// Collaboration instances output.
    #[arg(long)]
    out: PathBuf,
    /// Rejected input lines, one JSON object per line.
    #[arg(long)]
    diagnostics: Option<PathBuf>,
    /// Every non-bot developer seen, one per line.
    #[arg(long)]
    roster: Option<PathBuf>,
    /// Co-edition window in days.
    #[arg(long, default_value_t = DEFAULT_WINDOW_DAYS, value_parser = clap::value_parser!(u32).range(1..))]
    window_days: u32,
}

#[derive(Debug, Args)]
struct BuildArgs {
    /// Collaboration instances from `ingest`.
    #[arg(long)]
    collab: PathBuf,
    /// Roster file; its developers are added as nodes even without edges.
    #[arg(long, value_name = "ROSTER_PATH")]
    include_isolates: Option<PathBuf>,
    /// Graph output.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct StatsArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Print a two-column table (default unless --json).
    #[arg(long, conflicts_with = "json")]
    table: bool,
    /// Write the JSON statistics here as well.
    #[arg(long)]
    out: Option<PathBuf>,
    /// Event files; adds commit involvement of the top 10% rated developers.
    #[arg(long, num_args = 1..)]
    events: Vec<PathBuf>,
}

#[derive(Debug, Args)]
struct CommunitiesArgs {
    #[arg(long)]
    graph: PathBuf,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct RatingOptions {
    /// Edge length for closeness and betweenness.
    #[arg(long, default_value = "inverse", value_parser = ["inverse", "raw-weight"])]
    distance: String,
    /// Use collaboration strength instead of neighbour count for degree.
    #[arg(long)]
    weighted_degree: bool,
}

impl RatingOptions {
    fn to_options(&self) -> CentralityOptions {
        CentralityOptions {
            distance: self.distance.parse().expect("validated by clap"),
            weighted_degree: self.weighted_degree,
        }
    }
}

#[derive(Debug, Args)]
struct RateArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Keep only the N best-rated developers.
    #[arg(long)]
    top: Option<usize>,
    #[command(flatten)]
    rating: RatingOptions,
    /// Event files used for commit and repository counts.
    #[arg(long, num_args = 1..)]
    events: Vec<PathBuf>,
    /// Output; `.json` writes the full table, anything else CSV.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct HistogramArgs {
    /// Ratings from `rate` (CSV or JSON).
    #[arg(long)]
    ratings: PathBuf,
    #[arg(long, default_value_t = DEFAULT_BINS, value_parser = positive)]
    bins: usize,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct SampleArgs {
    #[arg(long)]
    graph: PathBuf,
    /// Respondent to draw for; repeatable.
    #[arg(long, required_unless_present = "all_eligible")]
    respondent: Vec<String>,
    /// Draw for every developer with at least five collaborators.
    #[arg(long, conflicts_with = "respondent")]
    all_eligible: bool,
    /// Rating table (JSON) defining the top 50; computed from the graph if absent.
    #[arg(long)]
    ratings: Option<PathBuf>,
    #[command(flatten)]
    rating: RatingOptions,
    /// Samples as JSON lines.
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct FixtureArgs {
    #[arg(long, default_value_t = 3, value_parser = positive)]
    repos: usize,
    #[arg(long, default_value_t = 12, value_parser = positive)]
    devs: usize,
    #[arg(long, default_value_t = 90, value_parser = positive)]
    days: usize,
    /// Probability that a commit is reviewed.
    #[arg(long, default_value_t = 0.5)]
    reviewed_fraction: f64,
    /// Probability that a commit is authored by the bot.
    #[arg(long, default_value_t = 0.05)]
    bot_fraction: f64,
    #[arg(long)]
    out: PathBuf,
}

#[derive(Debug, Args)]
struct PipelineArgs {
    #[arg(long, required = true, num_args = 1..)]
    events: Vec<PathBuf>,
    #[arg(long)]
    out_dir: PathBuf,
    #[arg(long, default_value_t = DEFAULT_WINDOW_DAYS, value_parser = clap::value_parser!(u32).range(1..))]
    window_days: u32,
    #[command(flatten)]
    rating: RatingOptions,
    #[arg(long, value_name = "ROSTER_PATH")]
    include_isolates: Option<PathBuf>,
    #[arg(long, default_value_t = DEFAULT_BINS, value_parser = positive)]
    bins: usize,
}

fn positive(s: &str) -> Result<usize, String> {
    match s.parse::<usize>() {
        Ok(0) => Err("must be at least 1".to_string()),
        Ok(v) => Ok(v),
        Err(e) => Err(e.to_string()),
    }
}

/// An error plus the exit code it maps to.
struct Failure {
    code: u8,
    err: anyhow::Error,
}

impl Failure {
    fn usage(err: impl Into<anyhow::Error>) -> Self {
        Failure { code: 2, err: err.into() }
    }

    fn analysis(err: impl Into<anyhow::Error>) -> Self {
        Failure { code: 1, err: err.into() }
    }
}

impl From<PipelineError> for Failure {
    fn from(e: PipelineError) -> Self {
        Failure {
            code: e.exit_code() as u8,
            err: e.into(),
        }
    }
}

type CmdResult = Result<(), Failure>;

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = if cli.quiet { "error" } else { "warn" };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level))
        .format_timestamp(None)
        .init();
    if let Some(n) = cli.threads {
        if let Err(e) = rayon::ThreadPoolBuilder::new().num_threads(n).build_global() {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    match run(&cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(f) => {
            eprintln!("error: {:#}", f.err);
            ExitCode::from(f.code)
        }
    }
}

fn run(cli: &Cli) -> CmdResult {
    match &cli.command {
        Command::Ingest(a) => ingest(cli, a),
        Command::Build(a) => build(cli, a),
        Command::Stats(a) => stats_cmd(cli, a),
        Command::Communities(a) => communities(cli, a),
        Command::Rate(a) => rate(cli, a),
        Command::Histogram(a) => histogram_cmd(cli, a),
        Command::Sample(a) => sample(cli, a),
        Command::Fixture(a) => fixture(cli, a),
        Command::Pipeline(a) => pipeline(cli, a),
    }
}

fn read_text(path: &Path) -> Result<String, Failure> {
    fs::read_to_string(path).map_err(|e| PipelineError::io(path, e).into())
}

fn write_file(path: &Path, contents: impl AsRef<[u8]>) -> CmdResult {
    fs::write(path, contents).map_err(|e| Failure::usage(anyhow!("{}: {e}", path.display())))
}

fn read_graph(path: &Path) -> Result<DevNetwork, Failure> {
    DevNetwork::from_json(&read_text(path)?)
        .with_context(|| format!("invalid graph file {}", path.display()))
        .map_err(Failure::usage)
}

/// Prints a summary: JSON with `--json`, otherwise `key: value` lines.
fn report(cli: &Cli, summary: serde_json::Value) {
    if cli.quiet {
        return;
    }
    if cli.json {
        println!("{summary}");
    } else if let Some(map) = summary.as_object() {
        for (k, v) in map {
            match v {
                serde_json::Value::String(s) => println!("{k}: {s}"),
                other => println!("{k}: {other}"),
            }
        }
    }
}

fn ingest(cli: &Cli, a: &IngestArgs) -> CmdResult {
    let (events, diagnostics) = load_events(&a.events)?;
    let instances = extract_all_instances(&events, a.window_days);
    let mut buf = Vec::new();
    write_instances(&mut buf, &instances).map_err(Failure::usage)?;
    write_file(&a.out, buf)?;
    if let Some(path) = &a.diagnostics {
        let mut text = String::new();
        for d in &diagnostics {
            text.push_str(&serde_json::to_string(d).expect("diagnostics serialize"));
            text.push('\n');
        }
        write_file(path, text)?;
    } else {
        for d in &diagnostics {
            log::warn!("{d}");
        }
    }
    if let Some(path) = &a.roster {
        let text: String = collect_roster(&events)
            .into_iter()
            .map(|d| d + "\n")
            .collect();
        write_file(path, text)?;
    }
    report(
        cli,
        json!({
            "events": events.len(),
            "rejected_lines": diagnostics.len(),
            "instances": instances.len(),
        }),
    );
    Ok(())
}

fn build(cli: &Cli, a: &BuildArgs) -> CmdResult {
    let file = fs::File::open(&a.collab).map_err(|e| PipelineError::io(&a.collab, e))?;
    let instances = read_instances(BufReader::new(file)).map_err(Failure::usage)?;
    let roster = match &a.include_isolates {
        Some(p) => read_roster(p)?,
        None => Vec::new(),
    };
    let net = build_network_with_roster(&instances, roster).map_err(Failure::analysis)?;
    write_file(&a.out, net.to_json())?;
    report(
        cli,
        json!({"nodes": net.node_count(), "edges": net.edge_count()}),
    );
    Ok(())
}

fn stats_cmd(cli: &Cli, a: &StatsArgs) -> CmdResult {
    let net = read_graph(&a.graph)?;
    let s = stats(&net, cli.seed);
    let mut value = serde_json::to_value(&s).expect("stats serialize");
    let mut extra = None;
    if !a.events.is_empty() {
        let (events, _) = load_events(&a.events)?;
        let activity = join_activity(&net, &developer_activity(&events));
        let table = rate_network(&net, &CentralityOptions::default(), &activity)
            .map_err(Failure::analysis)?;
        let top: BTreeSet<String> = table
            .top(table.len().div_ceil(10))
            .into_iter()
            .map(str::to_string)
            .collect();
        let inv = commit_involvement(&events, &top);
        let v = json!({
            "developers": top.len(),
            "total_commits": inv.total_commits,
            "overall_share": inv.overall_share(),
            "unreviewed_share": inv.unreviewed_share(),
            "reviewed_share": inv.reviewed_share(),
        });
        value["top_decile_involvement"] = v.clone();
        extra = Some(v);
    }
    let text = pretty(&value);
    if let Some(out) = &a.out {
        write_file(out, &text)?;
    }
    if cli.quiet {
        return Ok(());
    }
    if cli.json {
        print!("{text}");
    } else {
        print!("{}", s.to_table());
        if let Some(v) = extra {
            println!(
                "Top 10% commit involvement      {:.1}% (unreviewed {:.1}%, reviewed {:.1}%)",
                100.0 * v["overall_share"].as_f64().unwrap_or(0.0),
                100.0 * v["unreviewed_share"].as_f64().unwrap_or(0.0),
                100.0 * v["reviewed_share"].as_f64().unwrap_or(0.0),
            );
        }
    }
    Ok(())
}

fn communities(cli: &Cli, a: &CommunitiesArgs) -> CmdResult {
    let net = read_graph(&a.graph)?;
    let text = communities_json(&net, cli.seed);
    write_file(&a.out, &text)?;
    let parsed: serde_json::Value = serde_json::from_str(&text).expect("own output parses");
    report(
        cli,
        json!({
            "communities": parsed["communities"].as_array().map_or(0, Vec::len),
            "modularity": parsed["modularity"],
        }),
    );
    Ok(())
}

fn rate(cli: &Cli, a: &RateArgs) -> CmdResult {
    let net = read_graph(&a.graph)?;
    let events: Vec<EventRecord> = if a.events.is_empty() {
        Vec::new()
    } else {
        load_events(&a.events)?.0
    };
    let activity = join_activity(&net, &developer_activity(&events));
    let mut table =
        rate_network(&net, &a.rating.to_options(), &activity).map_err(Failure::analysis)?;
    if let Some(n) = a.top {
        table = table.truncated(n);
    }
    let is_json = a.out.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    write_file(
        &a.out,
        if is_json { table.to_json() } else { table.to_csv() },
    )?;
    let (high, average, low) = table.band_counts();
    report(
        cli,
        json!({"developers": table.len(), "high": high, "average": average, "low": low}),
    );
    Ok(())
}

fn histogram_cmd(cli: &Cli, a: &HistogramArgs) -> CmdResult {
    let text = read_text(&a.ratings)?;
    let is_json = a.ratings.extension().is_some_and(|e| e.eq_ignore_ascii_case("json"));
    let ratings = if is_json {
        RatingTable::from_json(&text).map(|t| t.ratings())
    } else {
        ratings_from_csv(&text)
    }
    .map_err(Failure::usage)?;
    let bins = histogram(&ratings, a.bins);
    write_file(&a.out, histogram_csv(&bins))?;
    report(cli, json!({"ratings": ratings.len(), "bins": bins.len()}));
    Ok(())
}

fn sample(cli: &Cli, a: &SampleArgs) -> CmdResult {
    let net = read_graph(&a.graph)?;
    let table = match &a.ratings {
        Some(p) => RatingTable::from_json(&read_text(p)?).map_err(Failure::usage)?,
        None => rate_network(&net, &a.rating.to_options(), &join_activity(&net, &Default::default()))
            .map_err(Failure::analysis)?,
    };
    let respondents = if a.all_eligible {
        eligible_respondents(&net)
    } else {
        a.respondent.clone()
    };
    let mut out = String::new();
    for r in &respondents {
        let s: SurveySample = sample_survey_targets(&net, &table, r, cli.seed).map_err(|e| match e {
            SurveyError::UnknownRespondent(_) => Failure::usage(e),
            SurveyError::InsufficientPopulation { .. } => Failure::analysis(e),
        })?;
        out.push_str(&serde_json::to_string(&s).expect("samples serialize"));
        out.push('\n');
    }
    write_file(&a.out, out)?;
    report(cli, json!({"respondents": respondents.len()}));
    Ok(())
}

fn fixture(cli: &Cli, a: &FixtureArgs) -> CmdResult {
    let mut cfg = FixtureConfig::new(cli.seed, a.repos, a.devs, a.days);
    cfg.reviewed_fraction = a.reviewed_fraction;
    cfg.bot_fraction = a.bot_fraction;
    let events = generate_fixture_corpus(&cfg).map_err(Failure::usage)?;
    write_file(&a.out, to_jsonl(&events))?;
    report(cli, json!({"events": events.len()}));
    Ok(())
}

fn pipeline(cli: &Cli, a: &PipelineArgs) -> CmdResult {
    let mut cfg = PipelineConfig::new(a.events.clone(), &a.out_dir);
    cfg.seed = cli.seed;
    cfg.window_days = a.window_days;
    cfg.distance = a.rating.distance.parse::<DistanceMode>().expect("validated by clap");
    cfg.weighted_degree = a.rating.weighted_degree;
    cfg.include_isolates = a.include_isolates.clone();
    cfg.bins = a.bins;
    let rep = run_pipeline(&cfg)?;
    if !cli.quiet && !cli.json {
        for p in &rep.artifacts {
            let _ = writeln!(io::stdout(), "wrote {}", p.display());
        }
    }
    report(
        cli,
        json!({
            "events": rep.event_count,
            "rejected_lines": rep.diagnostics.len(),
            "instances": rep.instance_count,
            "nodes": rep.stats.node_count,
            "edges": rep.stats.edge_count,
        }),
    );
    Ok(())
}
