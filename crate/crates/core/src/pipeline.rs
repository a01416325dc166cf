//! File-to-file stages shared by the CLI subcommands and `run_pipeline`.
//!
//! Work directory layout:
//!
//! ```text
//! synth/bitext.<lang>.tsv  synth/gold.tsv  synth/synth.spec
//! ingest/<lang>/{train,dev,test}.tsv  ingest/<lang>/ingest.meta
//! counts/<lang>.counts
//! ranked.tsv
//! report.tsv
//! ```

use std::collections::{BTreeMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::{Path, PathBuf};
use std::str::FromStr;

use crate::bitext::{dedupe_lines, parse_bitext, partition_of, write_bitext, Partition};
use crate::config::PipelineConfig;
use crate::error::{Error, Result};
use crate::eval::{evaluate_ranked, generate_synthetic, save_reports};
use crate::io;
use crate::miner::{enumerate_candidates, rank, RankedList};
use crate::phrase::Lang;
use crate::stats::{build_table, CooccurrenceTable};

pub const INGEST_META: &str = "ingest.meta";

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct IngestSummary {
    pub total_lines: usize,
    pub skipped: usize,
    pub duplicates_removed: usize,
    pub partitions: BTreeMap<Partition, usize>,
}

/// Parses one bitext, drops consecutive duplicates and writes
/// `train.tsv`, `dev.tsv`, `test.tsv` plus an `ingest.meta` sidecar.
pub fn ingest_file(input: &Path, target_lang: &Lang, pivot_lang: &Lang, out_dir: &Path) -> Result<IngestSummary> {
    let parsed = parse_bitext(io::open(input)?, pivot_lang)?;
    for s in parsed.skipped.iter().take(5) {
        log::warn!("{}:{}: skipped: {}", input.display(), s.line_no, s.reason);
    }
    let (lines, removed) = dedupe_lines(parsed.lines);

    let mut summary = IngestSummary {
        total_lines: parsed.total_lines,
        skipped: parsed.skipped.len(),
        duplicates_removed: removed,
        partitions: BTreeMap::new(),
    };
    let mut buckets: BTreeMap<Partition, Vec<_>> =
        Partition::ALL.iter().map(|&p| (p, Vec::new())).collect();
    for line in &lines {
        buckets.get_mut(&partition_of(line)).expect("all partitions").push(line);
    }
    for (part, rows) in &buckets {
        let mut w = io::create(&out_dir.join(format!("{part}.tsv")))?;
        write_bitext(&mut w, rows.iter().copied())?;
        w.flush()?;
        summary.partitions.insert(*part, rows.len());
    }

    let mut w = io::create(&out_dir.join(INGEST_META))?;
    io::write_header(
        &mut w,
        &[
            ("target_lang", target_lang.to_string()),
            ("pivot_lang", pivot_lang.to_string()),
            ("total_lines", summary.total_lines.to_string()),
            ("skipped", summary.skipped.to_string()),
            ("duplicates_removed", removed.to_string()),
        ],
    )?;
    for (part, n) in &summary.partitions {
        writeln!(w, "{part}\t{n}")?;
    }
    w.flush()?;
    Ok(summary)
}

/// The pivot language recorded by `ingest` next to a partition file.
pub fn sidecar_pivot_lang(partition_file: &Path) -> Result<Option<Lang>> {
    let meta = partition_file
        .parent()
        .unwrap_or(Path::new("."))
        .join(INGEST_META);
    if !meta.exists() {
        return Ok(None);
    }
    match io::header_meta(&io::read_lines(&meta)?).get("pivot_lang") {
        Some(l) => Ok(Some(Lang::new(l)?)),
        None => Ok(None),
    }
}

/// Builds the co-occurrence table of one partition file.
pub fn count_file(input: &Path, pivot_lang: Option<&Lang>) -> Result<CooccurrenceTable> {
    let reader = io::open(input)?;
    let lang = match pivot_lang {
        Some(l) => l.clone(),
        None => sidecar_pivot_lang(input)?.ok_or_else(|| {
            Error::InvalidArgument(format!(
                "{}: no {INGEST_META} alongside; pass --pivot-lang",
                input.display()
            ))
        })?,
    };
    let parsed = parse_bitext(reader, &lang)?;
    if !parsed.skipped.is_empty() {
        log::warn!("{}: {} malformed lines skipped", input.display(), parsed.skipped.len());
    }
    build_table(&parsed.lines)
}

pub fn load_tables(paths: &[PathBuf]) -> Result<Vec<CooccurrenceTable>> {
    paths.iter().map(|p| CooccurrenceTable::load(p)).collect()
}

/// Enumerates and ranks all candidates of `tables`.
pub fn mine(tables: &[CooccurrenceTable], scheme: crate::scoring::SchemeId, min_support: usize) -> Result<RankedList> {
    if !scheme.is_symmetric() {
        return Err(Error::AsymmetricScheme(scheme));
    }
    let candidates = enumerate_candidates(tables, min_support)?;
    rank(&candidates, tables, scheme)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum Stage {
    Synth,
    Ingest,
    Count,
    Mine,
    Eval,
}

impl Stage {
    pub const ALL: [Stage; 5] = [Stage::Synth, Stage::Ingest, Stage::Count, Stage::Mine, Stage::Eval];

    pub fn as_str(self) -> &'static str {
        match self {
            Stage::Synth => "synth",
            Stage::Ingest => "ingest",
            Stage::Count => "count",
            Stage::Mine => "mine",
            Stage::Eval => "eval",
        }
    }
}

impl fmt::Display for Stage {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Stage {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Stage::ALL
            .into_iter()
            .find(|x| x.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown stage {s:?}")))
    }
}

fn require(path: PathBuf, stage: Stage) -> Result<PathBuf> {
    if path.exists() {
        Ok(path)
    } else {
        Err(Error::MissingArtifact {
            stage: stage.as_str(),
            path,
        })
    }
}

pub struct Layout<'a>(pub &'a Path);

impl Layout<'_> {
    pub fn synth_dir(&self) -> PathBuf {
        self.0.join("synth")
    }
    pub fn synth_bitext(&self, lang: &Lang) -> PathBuf {
        self.synth_dir().join(format!("bitext.{lang}.tsv"))
    }
    pub fn gold(&self) -> PathBuf {
        self.synth_dir().join("gold.tsv")
    }
    pub fn ingest_dir(&self, lang: &Lang) -> PathBuf {
        self.0.join("ingest").join(lang.as_str())
    }
    pub fn counts(&self, lang: &Lang) -> PathBuf {
        self.0.join("counts").join(format!("{lang}.counts"))
    }
    pub fn ranked(&self) -> PathBuf {
        self.0.join("ranked.tsv")
    }
    pub fn report(&self) -> PathBuf {
        self.0.join("report.tsv")
    }
}

/// Runs stages `from..=to` inside `work_dir`.
pub fn run_pipeline(config: &PipelineConfig, work_dir: &Path, from: Stage, to: Stage) -> Result<()> {
    config.validate()?;
    if from > to {
        return Err(Error::InvalidArgument(format!("stage {from} comes after {to}")));
    }
    let lay = Layout(work_dir);
    for stage in Stage::ALL.into_iter().filter(|s| (from..=to).contains(s)) {
        log::info!("stage {stage}");
        match stage {
            Stage::Synth => {
                let mut spec = config.synth.clone();
                spec.n_pivot_langs = config.pivot_langs.len();
                spec.seed = config.seed;
                let mut corpus = generate_synthetic(&spec)?;
                for ((lang, lines), want) in corpus.bitexts.iter_mut().zip(&config.pivot_langs) {
                    *lang = want.clone();
                    for l in lines.iter_mut() {
                        l.pivot_lang = want.clone();
                    }
                }
                corpus.save(&lay.synth_dir(), &spec)?;
            }
            Stage::Ingest => {
                for lang in &config.pivot_langs {
                    let input = require(lay.synth_bitext(lang), Stage::Synth)?;
                    ingest_file(&input, &config.target_lang, lang, &lay.ingest_dir(lang))?;
                }
            }
            Stage::Count => {
                for lang in &config.pivot_langs {
                    let input = require(lay.ingest_dir(lang).join("train.tsv"), Stage::Ingest)?;
                    count_file(&input, Some(lang))?.save(&lay.counts(lang))?;
                }
            }
            Stage::Mine => {
                let paths = config
                    .pivot_langs
                    .iter()
                    .map(|l| require(lay.counts(l), Stage::Count))
                    .collect::<Result<Vec<_>>>()?;
                mine(&load_tables(&paths)?, config.scheme, config.min_support)?.save(&lay.ranked())?;
            }
            Stage::Eval => {
                let ranked = RankedList::load(&require(lay.ranked(), Stage::Mine)?)?;
                let gold: HashSet<_> = io::read_pair_list(&require(lay.gold(), Stage::Synth)?)?
                    .into_iter()
                    .collect();
                let report = evaluate_ranked(&ranked, &gold, &config.ks)?;
                save_reports(&lay.report(), &[report])?;
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::scoring::SchemeId;

    fn small() -> PipelineConfig {
        let mut c = PipelineConfig::default();
        c.set("synth.groups", "60").unwrap();
        c.set("pivot_langs", "de,sv").unwrap();
        c
    }

    #[test]
    fn full_run_is_deterministic() {
        let a = tempfile::tempdir().unwrap();
        let b = tempfile::tempdir().unwrap();
        let c = small();
        run_pipeline(&c, a.path(), Stage::Synth, Stage::Eval).unwrap();
        run_pipeline(&c, b.path(), Stage::Synth, Stage::Eval).unwrap();
        for f in ["ranked.tsv", "report.tsv", "counts/sv.counts", "ingest/de/train.tsv"] {
            let x = std::fs::read(a.path().join(f)).unwrap();
            assert_eq!(x, std::fs::read(b.path().join(f)).unwrap(), "{f}");
            assert!(!x.is_empty());
        }
    }

    #[test]
    fn missing_upstream_names_stage() {
        let d = tempfile::tempdir().unwrap();
        let err = run_pipeline(&small(), d.path(), Stage::Count, Stage::Count).unwrap_err();
        match err {
            Error::MissingArtifact { stage, .. } => assert_eq!(stage, "ingest"),
            e => panic!("{e}"),
        }
        assert!(err_stage(run_pipeline(&small(), d.path(), Stage::Ingest, Stage::Ingest)) == "synth");
        assert!(err_stage(run_pipeline(&small(), d.path(), Stage::Eval, Stage::Eval)) == "mine");
    }

    fn err_stage(r: Result<()>) -> &'static str {
        match r {
            Err(Error::MissingArtifact { stage, .. }) => stage,
            other => panic!("{other:?}"),
        }
    }

    #[test]
    fn cond_prob_refused_at_mine() {
        let d = tempfile::tempdir().unwrap();
        let mut c = small();
        run_pipeline(&c, d.path(), Stage::Synth, Stage::Count).unwrap();
        c.scheme = SchemeId::CondProb;
        let err = run_pipeline(&c, d.path(), Stage::Mine, Stage::Mine).unwrap_err();
        assert!(matches!(err, Error::AsymmetricScheme(SchemeId::CondProb)));
    }

    #[test]
    fn ingest_partitions_and_meta() {
        let d = tempfile::tempdir().unwrap();
        let input = d.path().join("in.tsv");
        std::fs::write(
            &input,
            "Sit down.\tAsseyez-vous.\t1994\nSit down.\tAsseyez-vous.\t1994\nA\tB\t2005\nC\tD\nbroken\n",
        )
        .unwrap();
        let en = Lang::new("en").unwrap();
        let fr = Lang::new("fr").unwrap();
        let out = d.path().join("out");
        let s = ingest_file(&input, &en, &fr, &out).unwrap();
        assert_eq!(s.total_lines, 5);
        assert_eq!(s.skipped, 1);
        assert_eq!(s.duplicates_removed, 1);
        assert_eq!(s.partitions[&Partition::Test], 1);
        assert_eq!(s.partitions[&Partition::Dev], 1);
        assert_eq!(s.partitions[&Partition::Train], 1);
        assert_eq!(std::fs::read_to_string(out.join("dev.tsv")).unwrap(), "A\tB\t2005\n");
        let t = count_file(&out.join("train.tsv"), None).unwrap();
        assert_eq!(t.pivot_langs().iter().next().unwrap(), &fr);
        assert_eq!(t.n_lines(), 1);
    }
}
