use std::collections::HashSet;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::process::ExitCode;
use std::sync::{Arc, Mutex};

use clap::{Args, Parser, Subcommand};

use paramine::annotation::{
    export_sets, load_adjudicated, load_sample, save_adjudicated, AnnotatedSet, SplitTarget,
};
use paramine::config::PipelineConfig;
use paramine::eval::{
    evaluate_on_annotated, evaluate_ranked, generate_synthetic, guard_split, save_reports,
    SyntheticSpec,
};
use paramine::io::{self, parse_list};
use paramine::miner::{cutoff_size, quality_curve, sample_uniform, QualityCurve, RankedList};
use paramine::pipeline::{self, Stage};
use paramine::scoring::{SchemeId, Scorer};
use paramine::service::{self, AnnotationService, ServiceConfig};
use paramine::{Error, Lang, Result, BUILD_ID};

#[derive(Parser)]
#[command(name = "paramine", version, about = "Multi-pivot sentential paraphrase mining")]
struct Cli {
    /// Worker threads for parallel stages (default: all cores).
    #[arg(long, global = true)]
    jobs: Option<usize>,

    /// More log output (-v info, -vv debug).
    #[arg(short, long, global = true, action = clap::ArgAction::Count)]
    verbose: u8,

    #[command(subcommand)]
    cmd: Cmd,
}

#[derive(Subcommand)]
enum Cmd {
    /// Partition a bitext into train/dev/test by document year.
    Ingest {
        #[arg(long)]
        target_lang: String,
        #[arg(long)]
        pivot_lang: String,
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Build a co-occurrence table from one partition file.
    Count {
        #[arg(long = "in")]
        input: PathBuf,
        #[arg(long)]
        out: PathBuf,
        /// Defaults to the language recorded by `ingest`.
        #[arg(long)]
        pivot_lang: Option<String>,
    },
    /// Score given pairs under one scheme.
    Score {
        #[arg(long)]
        scheme: SchemeId,
        /// Comma-separated table files.
        #[arg(long)]
        tables: String,
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Enumerate and rank all candidate pairs.
    Mine {
        #[arg(long)]
        tables: String,
        #[arg(long, default_value = "sum_pmi")]
        scheme: SchemeId,
        #[arg(long, default_value_t = 1)]
        min_support: usize,
        #[arg(long)]
        out: PathBuf,
    },
    /// Draw a uniform sample from a ranked list for annotation.
    Sample {
        #[arg(long)]
        ranked: PathBuf,
        #[arg(long)]
        n: usize,
        #[arg(long, default_value_t = 1)]
        seed: u64,
        #[arg(long)]
        out: PathBuf,
    },
    /// Cumulative quality curve of a ranking over an annotated sample.
    Curve {
        #[arg(long)]
        ranked: PathBuf,
        /// Lines `category<TAB>phrase1<TAB>phrase2`.
        #[arg(long)]
        annotations: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Ranked-list sizes meeting accuracy thresholds.
    Cutoff {
        #[arg(long)]
        curve: PathBuf,
        #[arg(long, default_value = "0.95,0.90,0.75")]
        thresholds: String,
        #[arg(long)]
        out: Option<PathBuf>,
    },
    /// Drop pairs that differ too little in characters.
    Filter {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        out: PathBuf,
        #[command(flatten)]
        edit: EditArgs,
    },
    /// Keep pairs disjoint from earlier training/dev pair lists.
    Split {
        #[arg(long)]
        pairs: PathBuf,
        #[arg(long)]
        target: SplitTarget,
        #[arg(long)]
        train_pairs: Option<PathBuf>,
        #[arg(long)]
        dev_pairs: Option<PathBuf>,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run the annotation HTTP service.
    Serve(ServeArgs),
    /// Merge the two judgments of every fully annotated pair.
    Adjudicate {
        #[arg(long)]
        queue: PathBuf,
        #[arg(long)]
        store: PathBuf,
        #[arg(long)]
        out: PathBuf,
    },
    /// Write an annotated dev or test set with its bucket summary.
    Export {
        #[arg(long)]
        adjudicated: PathBuf,
        #[arg(long)]
        split: SplitTarget,
        #[arg(long)]
        out: PathBuf,
    },
    /// Generate a synthetic corpus with planted paraphrase groups.
    Synth {
        /// key=value spec file; defaults are used when omitted.
        #[arg(long)]
        spec: Option<PathBuf>,
        #[arg(long)]
        seed: Option<u64>,
        #[arg(long)]
        out_dir: PathBuf,
    },
    /// Precision@k of rankings against gold pairs or an annotated set.
    Eval {
        /// Comma-separated ranked lists.
        #[arg(long)]
        ranked: String,
        #[arg(long, conflicts_with = "annotated")]
        gold: Option<PathBuf>,
        #[arg(long)]
        annotated: Option<PathBuf>,
        #[arg(long)]
        split: Option<SplitTarget>,
        /// Required to evaluate on a test set.
        #[arg(long = "final")]
        final_run: bool,
        #[arg(long, default_value = "10,50,100")]
        k: String,
        #[arg(long)]
        out: PathBuf,
    },
    /// Run synth, ingest, count, mine and eval inside one work directory.
    Pipeline {
        #[arg(long)]
        config: Option<PathBuf>,
        #[arg(long)]
        work_dir: PathBuf,
        #[arg(long, default_value = "synth")]
        from: Stage,
        #[arg(long, default_value = "eval")]
        to: Stage,
        #[arg(long)]
        scheme: Option<String>,
        #[arg(long)]
        seed: Option<String>,
        /// Extra `key=value` overrides.
        #[arg(long = "set", value_name = "KEY=VALUE")]
        overrides: Vec<String>,
    },
}

#[derive(Args)]
struct EditArgs {
    #[arg(long, default_value_t = 24)]
    short_cutoff: usize,
    #[arg(long, default_value_t = 0.4)]
    base_threshold: f64,
    #[arg(long, default_value_t = 0.6)]
    short_threshold: f64,
}

#[derive(Args)]
struct ServeArgs {
    #[arg(long)]
    queue: PathBuf,
    #[arg(long)]
    store: PathBuf,
    #[arg(long, default_value_t = 8080)]
    port: u16,
    #[arg(long, default_value = "127.0.0.1")]
    host: String,
    /// Shuffle the queue with this seed instead of keeping file order.
    #[arg(long)]
    shuffle: Option<u64>,
    /// Comma-separated annotator ids allowed to work.
    #[arg(long)]
    annotators: Option<String>,
    #[arg(long, default_value_t = 24)]
    lease_hours: i64,
    /// Queue name clients may pass as `queue=`; defaults to the file stem.
    #[arg(long)]
    queue_name: Option<String>,
    /// Directory with the annotation UI build.
    #[arg(long)]
    static_dir: Option<PathBuf>,
}

fn paths(list: &str) -> Vec<PathBuf> {
    list.split(',').map(str::trim).filter(|s| !s.is_empty()).map(PathBuf::from).collect()
}

fn run(cli: Cli) -> Result<()> {
    if let Some(n) = cli.jobs {
        rayon::ThreadPoolBuilder::new()
            .num_threads(n.max(1))
            .build_global()
            .map_err(|e| Error::InvalidArgument(e.to_string()))?;
    }
    match cli.cmd {
        Cmd::Ingest { target_lang, pivot_lang, input, out_dir } => {
            let s = pipeline::ingest_file(&input, &Lang::new(&target_lang)?, &Lang::new(&pivot_lang)?, &out_dir)?;
            let parts: Vec<String> = s.partitions.iter().map(|(p, n)| format!("{p}={n}")).collect();
            eprintln!(
                "{} lines, {} skipped, {} duplicates removed; {}",
                s.total_lines,
                s.skipped,
                s.duplicates_removed,
                parts.join(" ")
            );
        }
        Cmd::Count { input, out, pivot_lang } => {
            let lang = pivot_lang.as_deref().map(Lang::new).transpose()?;
            let t = pipeline::count_file(&input, lang.as_ref())?;
            t.save(&out)?;
            eprintln!("N={} targets={} pivots={} joint={}", t.n_lines(), t.n_targets(), t.n_pivots(), t.n_joint());
        }
        Cmd::Score { scheme, tables, pairs, out } => {
            let tables = pipeline::load_tables(&paths(&tables))?;
            let scorer = Scorer::new(scheme, &tables)?;
            let mut w = io::create(&out)?;
            io::write_header(&mut w, &[("scheme", scheme.to_string())])?;
            let mut undefined = 0usize;
            for p in io::read_pair_list(&pairs)? {
                match scorer.score(p.lo(), p.hi()) {
                    Ok(s) => writeln!(w, "{s}\t{}\t{}", p.lo(), p.hi())?,
                    Err(Error::UnknownPhrase(_) | Error::NoCooccurrence | Error::NoCooccurrenceInAnyPivot) => {
                        undefined += 1
                    }
                    Err(e) => return Err(e),
                }
            }
            w.flush()?;
            if undefined > 0 {
                eprintln!("{undefined} pairs have no score and were left out");
            }
        }
        Cmd::Mine { tables, scheme, min_support, out } => {
            let tables = pipeline::load_tables(&paths(&tables))?;
            let ranked = pipeline::mine(&tables, scheme, min_support)?;
            ranked.save(&out)?;
            eprintln!("{} candidates ranked by {scheme}", ranked.len());
        }
        Cmd::Sample { ranked, n, seed, out } => {
            let ranked = RankedList::load(&ranked)?;
            io::write_pair_list(&out, &sample_uniform(&ranked, n, seed))?;
        }
        Cmd::Curve { ranked, annotations, out } => {
            let ranked = RankedList::load(&ranked)?;
            quality_curve(&ranked, &load_sample(&annotations)?)?.save(&out)?;
        }
        Cmd::Cutoff { curve, thresholds, out } => {
            let curve = QualityCurve::load(&curve)?;
            let thresholds: Vec<f64> = parse_list(&thresholds, |s| {
                s.parse::<f64>()
                    .ok()
                    .filter(|t| *t > 0.0 && *t <= 1.0)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad threshold {s:?}")))
            })?;
            let mut text = format!("#{BUILD_ID}\n");
            for t in thresholds {
                let size = cutoff_size(&curve, t).map_or("none".to_string(), |n| n.to_string());
                text.push_str(&format!("{t}\t{size}\n"));
            }
            match out {
                Some(p) => io::create(&p)?.write_all(text.as_bytes())?,
                None => print!("{text}"),
            }
        }
        Cmd::Filter { pairs, out, edit } => {
            let f = paramine::annotation::EditFilter {
                short_cutoff: edit.short_cutoff,
                base_threshold: edit.base_threshold,
                short_threshold: edit.short_threshold,
            };
            let all = io::read_pair_list(&pairs)?;
            let kept: Vec<_> = all.iter().filter(|p| f.accepts(p.lo(), p.hi())).cloned().collect();
            io::write_pair_list(&out, &kept)?;
            eprintln!("kept {} of {} pairs", kept.len(), all.len());
        }
        Cmd::Split { pairs, target, train_pairs, dev_pairs, out } => {
            let set = |p: Option<PathBuf>| -> Result<HashSet<_>> {
                Ok(match p {
                    Some(p) => io::read_pair_list(&p)?.into_iter().collect(),
                    None => HashSet::new(),
                })
            };
            let kept = paramine::annotation::disjoint_split(
                &io::read_pair_list(&pairs)?,
                &set(train_pairs)?,
                &set(dev_pairs)?,
                target,
            );
            io::write_pair_list(&out, &kept)?;
        }
        Cmd::Serve(args) => serve(args)?,
        Cmd::Adjudicate { queue, store, out } => {
            let queue = service::load_queue(&queue, None)?;
            let items = service::adjudicate_judgments(&queue, service::read_judgments(&store)?);
            save_adjudicated(&out, &items)?;
            eprintln!("{} pairs adjudicated", items.len());
        }
        Cmd::Export { adjudicated, split, out } => {
            export_sets(&load_adjudicated(&adjudicated)?, split).save(&out)?;
        }
        Cmd::Synth { spec, seed, out_dir } => {
            let mut spec = match spec {
                Some(p) => SyntheticSpec::parse(&std::fs::read_to_string(&p)?)?,
                None => SyntheticSpec::default(),
            };
            if let Some(s) = seed {
                spec.seed = s;
            }
            let corpus = generate_synthetic(&spec)?;
            corpus.save(&out_dir, &spec)?;
            eprintln!("{} gold pairs", corpus.gold.len());
        }
        Cmd::Eval { ranked, gold, annotated, split, final_run, k, out } => {
            let ks: Vec<usize> = parse_list(&k, |s| {
                s.parse::<usize>()
                    .ok()
                    .filter(|k| *k > 0)
                    .ok_or_else(|| Error::InvalidArgument(format!("bad k {s:?}")))
            })?;
            if let Some(s) = split {
                guard_split(s, final_run)?;
            }
            let mut reports = Vec::new();
            match (gold, annotated) {
                (Some(g), None) => {
                    let gold: HashSet<_> = io::read_pair_list(&g)?.into_iter().collect();
                    for r in paths(&ranked) {
                        reports.push(evaluate_ranked(&RankedList::load(&r)?, &gold, &ks)?);
                    }
                }
                (None, Some(a)) => {
                    let set = AnnotatedSet::load(&a)?;
                    guard_split(set.split, final_run)?;
                    if split.is_some_and(|s| s != set.split) {
                        return Err(Error::InvalidArgument(format!(
                            "{} is a {} set",
                            a.display(),
                            set.split
                        )));
                    }
                    for r in paths(&ranked) {
                        reports.push(evaluate_on_annotated(&RankedList::load(&r)?, &set, &ks)?);
                    }
                }
                _ => return Err(Error::InvalidArgument("pass exactly one of --gold or --annotated".into())),
            }
            save_reports(&out, &reports)?;
        }
        Cmd::Pipeline { config, work_dir, from, to, scheme, seed, overrides } => {
            let mut c = match config {
                Some(p) => PipelineConfig::load(&p)?,
                None => PipelineConfig::default(),
            };
            for kv in &overrides {
                let (k, v) = kv
                    .split_once('=')
                    .ok_or_else(|| Error::InvalidArgument(format!("--set expects KEY=VALUE, got {kv:?}")))?;
                c.set(k, v)?;
            }
            if let Some(s) = scheme {
                c.set("scheme", &s)?;
            }
            if let Some(s) = seed {
                c.set("seed", &s)?;
            }
            pipeline::run_pipeline(&c, &work_dir, from, to)?;
        }
    }
    Ok(())
}

fn serve(args: ServeArgs) -> Result<()> {
    let queue = service::load_queue(&args.queue, args.shuffle)?;
    let queue_name = args.queue_name.unwrap_or_else(|| stem(&args.queue));
    let annotators = args
        .annotators
        .map(|a| parse_list(&a, |s| Ok(s.to_string())))
        .transpose()?
        .map(|v| v.into_iter().collect());
    let config = ServiceConfig {
        queue_name,
        lease: chrono::Duration::hours(args.lease_hours),
        annotators,
        ..ServiceConfig::default()
    };
    let svc = AnnotationService::open(queue, &args.store, config)?;
    let pairs = svc.len();
    let svc = Arc::new(Mutex::new(svc));
    let rt = tokio::runtime::Runtime::new()?;
    rt.block_on(async move {
        let listener = tokio::net::TcpListener::bind((args.host.as_str(), args.port)).await?;
        eprintln!("listening on http://{} ({pairs} pairs)", listener.local_addr()?);
        let shutdown = async {
            let _ = tokio::signal::ctrl_c().await;
        };
        service::serve(listener, svc, args.static_dir, shutdown).await
    })?;
    Ok(())
}

fn stem(p: &Path) -> String {
    p.file_stem()
        .map(|s| s.to_string_lossy().into_owned())
        .unwrap_or_else(|| "default".into())
}

fn main() -> ExitCode {
    let cli = Cli::parse();
    let level = match cli.verbose {
        0 => "warn",
        1 => "info",
        _ => "debug",
    };
    env_logger::Builder::from_env(env_logger::Env::default().default_filter_or(level)).init();
    match run(cli) {
        Ok(()) => ExitCode::SUCCESS,
        Err(e) => {
            eprintln!("error: {e}");
            ExitCode::FAILURE
        }
    }
}
