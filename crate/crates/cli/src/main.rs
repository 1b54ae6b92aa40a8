//! `cayley`: command-line front end for Cayley graphs on finite abelian groups.

use std::fs::{self, File};
use std::io::{BufWriter, Write};
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::time::Instant;

use cayley_core::cayley::{CayleyGraph, GraphJson, GraphStats, SrgParameters};
use cayley_core::constructions::{
    bent_hadamard_set, dij_set, kloosterman_trace_set, kloosterman_trace_set_with_table,
    polar_trace_set, theorem33_assessment, theorem33_set, ConstructionReport, ReportSummary,
    Theorem33Assessment,
};
use cayley_core::gf2m::{Gf2Field, KloostermanTable};
use cayley_core::groupring::{search_gds, verify_gds, GdsCertificate, SearchGdsOptions};
use cayley_core::searcher::{hits_to_csv, search_ramanujan_circulant, SearchHit};
use cayley_core::spectral::{
    crossing_lemma_trials, ramanujan_check, spectral_gap, spectrum_by_characters, spectrum_oracle,
    CrossingTrials, RamanujanVerdict, Spectrum, MAX_ORACLE_ORDER, ORACLE_TOLERANCE,
};
use cayley_core::{Error, Result};
use clap::{Args, Parser, Subcommand, ValueEnum};
use serde::Serialize;

#[derive(Parser)]
#[command(
    name = "cayley",
    version,
    about = "Cayley graphs from difference sets over finite abelian groups"
)]
struct Cli {
    /// Worker threads for parallel searches and spectra (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,
    #[command(subcommand)]
    command: Command,
}

#[derive(Subcommand)]
enum Command {
    /// Build one of the closed-form constructions and certify it.
    Construct(ConstructArgs),
    /// Analyze a graph file.
    Analyze(AnalyzeArgs),
    /// Exhaustive searches over Z_n.
    #[command(subcommand)]
    Search(SearchCommand),
}

#[derive(Clone, Copy, ValueEnum)]
enum Kind {
    Theorem33,
    KloostermanTrace,
    PolarTrace,
    BentHadamard,
    Dij,
}

#[derive(Clone, Copy, Default, PartialEq, Eq, ValueEnum)]
enum Format {
    #[default]
    Json,
    Dot,
    Csv,
}

#[derive(Args)]
struct OutputArgs {
    /// Output directory, created if missing.
    #[arg(long, default_value = ".")]
    out: PathBuf,
    /// `dot` also writes graph.dot; `csv` also writes CSV tables.
    #[arg(long, value_enum, default_value_t)]
    format: Format,
}

#[derive(Args)]
struct ConstructArgs {
    #[arg(value_enum)]
    kind: Kind,
    #[arg(long)]
    s: Option<u64>,
    #[arg(long)]
    r: Option<u64>,
    #[arg(long)]
    m: Option<u32>,
    #[arg(long)]
    u: Option<u32>,
    /// Trace of z for `dij`.
    #[arg(long)]
    i: Option<u8>,
    /// Trace of 1/z for `dij`.
    #[arg(long)]
    j: Option<u8>,
    /// Directory for cached Kloosterman tables.
    #[arg(long)]
    cache: Option<PathBuf>,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Args)]
struct AnalyzeArgs {
    /// Graph JSON: `{"factors": [...], "connection_set": [[...], ...]}`.
    input: PathBuf,
    /// Seed for the random partitions of the crossing test.
    #[arg(long, default_value_t = 0)]
    seed: u64,
    /// Number of random partitions.
    #[arg(long, default_value_t = 100)]
    trials: usize,
    #[command(flatten)]
    output: OutputArgs,
}

#[derive(Subcommand)]
enum SearchCommand {
    /// Two-valued difference multisets in Z_n.
    Gds {
        #[arg(long)]
        n: u32,
        /// Emit every subset instead of one per translate/negation orbit.
        #[arg(long)]
        no_prune: bool,
        #[command(flatten)]
        output: OutputArgs,
    },
    /// Ramanujan circulant graphs on Z_n.
    Ramanujan {
        #[arg(long)]
        n: u32,
        #[arg(long = "min-degree", alias = "minDegree", default_value_t = 2)]
        min_degree: usize,
        #[command(flatten)]
        output: OutputArgs,
    },
}

#[derive(Serialize)]
struct SpectrumEntry {
    value: f64,
    multiplicity: usize,
    exact: bool,
}

fn spectrum_entries(spec: &Spectrum) -> Vec<SpectrumEntry> {
    spec.entries()
        .iter()
        .map(|(v, m)| SpectrumEntry {
            value: v.value(),
            multiplicity: *m,
            exact: v.is_exact(),
        })
        .collect()
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct ConstructOutput {
    report: ReportSummary,
    #[serde(skip_serializing_if = "Option::is_none")]
    assessment: Option<Theorem33Assessment>,
    stats: GraphStats,
    spectrum: Vec<SpectrumEntry>,
}

#[derive(Serialize)]
#[serde(rename_all = "camelCase")]
struct Analysis {
    graph: GraphJson,
    order: usize,
    degree: usize,
    stats: GraphStats,
    spectrum: Vec<SpectrumEntry>,
    oracle_agreement: String,
    verdict: RamanujanVerdict,
    spectral_gap: f64,
    gds: Option<GdsCertificate>,
    srg: Option<SrgParameters>,
    crossing: CrossingTrials,
    seed: u64,
}

fn create_out(dir: &Path) -> Result<()> {
    fs::create_dir_all(dir)?;
    Ok(())
}

fn write_json<T: Serialize>(path: &Path, value: &T) -> Result<()> {
    let mut text = serde_json::to_string_pretty(value)?;
    text.push('\n');
    fs::write(path, text)?;
    Ok(())
}

fn require<T>(value: Option<T>, flag: &str) -> Result<T> {
    value.ok_or_else(|| Error::InvalidParameter(format!("--{flag} is required")))
}

fn build_construction(args: &ConstructArgs) -> Result<ConstructionReport> {
    match args.kind {
        Kind::Theorem33 => theorem33_set(require(args.s, "s")?, require(args.r, "r")?),
        Kind::KloostermanTrace => {
            let m = require(args.m, "m")?;
            match &args.cache {
                Some(dir) => {
                    let field = Gf2Field::new(m)?;
                    create_out(dir)?;
                    let table = KloostermanTable::load_or_compute(&field, dir)?;
                    kloosterman_trace_set_with_table(&field, &table)
                }
                None => kloosterman_trace_set(m),
            }
        }
        Kind::PolarTrace => polar_trace_set(require(args.m, "m")?),
        Kind::BentHadamard => bent_hadamard_set(require(args.u, "u")?),
        Kind::Dij => {
            let m = require(args.m, "m")?;
            let (i, j) = (require(args.i, "i")?, require(args.j, "j")?);
            let set = dij_set(m, i, j).map_err(|e| match e {
                Error::EmptyConnectionSet => {
                    Error::InvalidParameter(format!("D_{{{i},{j}}} is empty for m = {m}"))
                }
                e => e,
            })?;
            let graph = CayleyGraph::from_connection(set);
            let spec = spectrum_by_characters(&graph);
            let values: Vec<i64> = spec
                .entries()
                .iter()
                .filter_map(|(v, _)| v.exact())
                .collect();
            Ok(ConstructionReport {
                name: format!("dij(m={m}, i={i}, j={j})"),
                predicted_degree: graph.degree(),
                graph,
                predicted_eigenvalues: values,
                provenance: vec!["eigenvalues by character sums; no closed form".into()],
                discrepancies: vec![],
            })
        }
    }
}

fn cmd_construct(args: &ConstructArgs) -> Result<()> {
    let mut report = build_construction(args)?;
    let graph = report.graph.clone();
    let spec = spectrum_by_characters(&graph);
    report.check_spectrum(&spec);
    let stats = graph.stats();
    let verdict = ramanujan_check(&spec, graph.degree(), &stats);
    let assessment = match args.kind {
        Kind::Theorem33 => Some(theorem33_assessment(
            args.s.unwrap_or(0),
            args.r.unwrap_or(0),
            verdict.is_ramanujan,
        )),
        _ => None,
    };

    let out = &args.output.out;
    create_out(out)?;
    write_json(&out.join("graph.json"), &graph.to_json())?;
    fs::write(out.join("spectrum.csv"), spec.to_csv()?)?;
    write_json(&out.join("verdict.json"), &verdict)?;
    write_json(
        &out.join("report.json"),
        &ConstructOutput {
            report: report.summary(),
            assessment,
            stats,
            spectrum: spectrum_entries(&spec),
        },
    )?;
    if args.output.format == Format::Dot {
        fs::write(out.join("graph.dot"), graph.to_dot())?;
    }
    println!(
        "{}: n={} k={} distinct eigenvalues={} components={} ramanujan={} discrepancies={} -> {}",
        report.name,
        graph.order(),
        graph.degree(),
        spec.distinct_count(),
        stats.component_count,
        verdict.is_ramanujan,
        report.discrepancies.len(),
        out.display()
    );
    Ok(())
}

fn cmd_analyze(args: &AnalyzeArgs) -> Result<()> {
    let text = fs::read_to_string(&args.input)?;
    let graph = CayleyGraph::from_json_str(&text)?;
    let spec = spectrum_by_characters(&graph);
    let oracle_agreement = if graph.order() <= MAX_ORACLE_ORDER {
        if spec.matches(&spectrum_oracle(&graph)?, ORACLE_TOLERANCE) {
            "character spectrum agrees with the dense eigensolver".to_string()
        } else {
            "character spectrum DISAGREES with the dense eigensolver".to_string()
        }
    } else {
        format!(
            "dense check skipped: n = {} > {MAX_ORACLE_ORDER}",
            graph.order()
        )
    };
    let stats = graph.stats();
    let verdict = ramanujan_check(&spec, graph.degree(), &stats);
    let gds = verify_gds(graph.group(), graph.connection().elements())?;
    let srg = match graph.srg_check() {
        Ok(p) => p,
        Err(Error::Disconnected { .. }) => None,
        Err(e) => return Err(e),
    };
    let crossing = crossing_lemma_trials(&graph, &spec, args.trials, args.seed)?;
    let analysis = Analysis {
        graph: graph.to_json(),
        order: graph.order(),
        degree: graph.degree(),
        stats,
        spectrum: spectrum_entries(&spec),
        oracle_agreement,
        verdict,
        spectral_gap: spectral_gap(&spec, graph.degree()),
        gds,
        srg,
        crossing,
        seed: args.seed,
    };

    let out = &args.output.out;
    create_out(out)?;
    write_json(&out.join("analysis.json"), &analysis)?;
    write_json(&out.join("graph.json"), &analysis.graph)?;
    fs::write(out.join("spectrum.csv"), spec.to_csv()?)?;
    write_json(&out.join("verdict.json"), &analysis.verdict)?;
    if args.output.format == Format::Dot {
        fs::write(out.join("graph.dot"), graph.to_dot())?;
    }
    let gds_text = analysis
        .gds
        .as_ref()
        .map(|c| format!("{:?}", c.parameters()))
        .unwrap_or_else(|| "none".into());
    let srg_text = analysis
        .srg
        .map(|p| format!("{:?}", p.as_tuple()))
        .unwrap_or_else(|| "none".into());
    println!(
        "n={} k={} components={} bipartite={} ramanujan={} gds={} srg={} crossing violations={}/{} -> {}",
        analysis.order,
        analysis.degree,
        stats.component_count,
        stats.bipartite,
        analysis.verdict.is_ramanujan,
        gds_text,
        srg_text,
        crossing.violations,
        crossing.trials,
        out.display()
    );
    Ok(())
}

fn stream_line<T: Serialize>(w: &mut BufWriter<File>, value: &T, error: &mut Option<Error>) {
    if error.is_some() {
        return;
    }
    let res = serde_json::to_writer(&mut *w, value)
        .map_err(Error::from)
        .and_then(|_| w.write_all(b"\n").map_err(Error::from))
        .and_then(|_| w.flush().map_err(Error::from));
    if let Err(e) = res {
        *error = Some(e);
    }
}

fn cmd_search(command: &SearchCommand) -> Result<()> {
    let start = Instant::now();
    match command {
        SearchCommand::Gds {
            n,
            no_prune,
            output,
        } => {
            create_out(&output.out)?;
            let path = output.out.join("hits.jsonl");
            let mut w = BufWriter::new(File::create(&path)?);
            let mut error = None;
            let options = SearchGdsOptions {
                prune_orbits: !no_prune,
            };
            let summary = search_gds(*n, options, |hit| stream_line(&mut w, &hit, &mut error))?;
            if let Some(e) = error {
                return Err(e);
            }
            println!(
                "search gds n={n}: examined={} hits={} time={:.3}s -> {}",
                summary.examined,
                summary.hits,
                start.elapsed().as_secs_f64(),
                path.display()
            );
        }
        SearchCommand::Ramanujan {
            n,
            min_degree,
            output,
        } => {
            create_out(&output.out)?;
            let path = output.out.join("hits.jsonl");
            let mut w = BufWriter::new(File::create(&path)?);
            let mut error = None;
            let mut kept: Vec<SearchHit> = Vec::new();
            let want_csv = output.format == Format::Csv;
            let summary = search_ramanujan_circulant(*n, *min_degree, |hit| {
                stream_line(&mut w, &hit, &mut error);
                if want_csv {
                    kept.push(hit);
                }
            })?;
            if let Some(e) = error {
                return Err(e);
            }
            if want_csv {
                fs::write(output.out.join("hits.csv"), hits_to_csv(&kept)?)?;
            }
            println!(
                "search ramanujan n={n}: examined={} hits={} time={:.3}s -> {}",
                summary.examined,
                summary.hits,
                start.elapsed().as_secs_f64(),
                path.display()
            );
        }
    }
    Ok(())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    if let Some(jobs) = cli.jobs {
        if jobs == 0 {
            eprintln!("error: --jobs must be at least 1");
            return ExitCode::from(2);
        }
        if let Err(e) = rayon::ThreadPoolBuilder::new()
            .num_threads(jobs)
            .build_global()
        {
            eprintln!("error: {e}");
            return ExitCode::from(2);
        }
    }
    let result = match &cli.command {
        Command::Construct(args) => cmd_construct(args),
        Command::Analyze(args) => cmd_analyze(args),
        Command::Search(cmd) => cmd_search(cmd),
    };
    match result {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::from(if e.is_invariant_violation() { 3 } else { 2 })
        }
    }
}
