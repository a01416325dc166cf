//! Ranking-scheme evaluation: synthetic corpora with planted paraphrase
//! groups, precision@k, and evaluation against annotated dev/test sets.
//!
//! The generator draws sentence occurrences from Zipf-distributed paraphrase
//! groups. An occurrence is aligned in each pivot language with probability
//! `coverage` (and in at least one); with probability `noise_rate` an
//! alignment is wrong and picks up the pivot sentence of some other
//! occurrence instead. Misalignments are independent across pivot languages,
//! so spurious pairs rarely gather support from several corpora.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;

use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::annotation::{AnnotatedSet, AnnotationCategory, SplitTarget};
use crate::bitext::AlignedLine;
use crate::error::{Error, Result};
use crate::io;
use crate::miner::{enumerate_candidates, quality_curve, rank, QualityCurve, RankedList};
use crate::phrase::{Lang, PairKey, Phrase};
use crate::scoring::SchemeId;
use crate::stats::{build_table, CooccurrenceTable};

const LANG_CODES: [&str; 8] = ["de", "fi", "fr", "ru", "sv", "es", "it", "nl"];

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticSpec {
    pub n_planted_paraphrase_groups: usize,
    pub n_pivot_langs: usize,
    /// Fraction of misaligned lines, in `[0, 1)`.
    pub noise_rate: f64,
    /// Mean number of sentence occurrences per group.
    pub lines_per_group: usize,
    pub seed: u64,
    /// Exponent of the group frequency distribution.
    pub zipf_exponent: f64,
    /// Upper bound on target variants per group.
    pub max_variants: usize,
    /// Upper bound on pivot translations per group and language.
    pub max_translations: usize,
    /// Probability that an occurrence is aligned in a given pivot language.
    /// Every occurrence appears in at least one.
    pub coverage: f64,
}

impl Default for SyntheticSpec {
    fn default() -> Self {
        SyntheticSpec {
            n_planted_paraphrase_groups: 2000,
            n_pivot_langs: 3,
            noise_rate: 0.2,
            lines_per_group: 5,
            seed: 1,
            zipf_exponent: 1.0,
            max_variants: 4,
            max_translations: 2,
            coverage: 0.6,
        }
    }
}

impl SyntheticSpec {
    pub fn validate(&self) -> Result<()> {
        let bad = |m: &str| Err(Error::InvalidArgument(format!("synthetic spec: {m}")));
        if self.n_planted_paraphrase_groups == 0
            || self.n_pivot_langs == 0
            || self.lines_per_group == 0
            || self.max_variants == 0
            || self.max_translations == 0
        {
            return bad("all counts must be at least 1");
        }
        if !(0.0..1.0).contains(&self.noise_rate) {
            return bad("noise_rate must be in [0, 1)");
        }
        if !(self.coverage > 0.0 && self.coverage <= 1.0) {
            return bad("coverage must be in (0, 1]");
        }
        if !(self.zipf_exponent >= 0.0 && self.zipf_exponent.is_finite()) {
            return bad("zipf_exponent must be a non-negative number");
        }
        Ok(())
    }

    /// Parses `key=value` lines; unknown keys are an error, missing keys keep defaults.
    pub fn parse(text: &str) -> Result<SyntheticSpec> {
        let mut spec = SyntheticSpec::default();
        for (idx, line) in text.lines().enumerate() {
            let line = line.trim();
            if line.is_empty() || line.starts_with('#') {
                continue;
            }
            let (k, v) = line.split_once('=').ok_or_else(|| {
                Error::InvalidArgument(format!("synthetic spec line {}: expected key=value", idx + 1))
            })?;
            spec.set(k.trim(), v.trim())?;
        }
        spec.validate()?;
        Ok(spec)
    }

    pub fn set(&mut self, key: &str, value: &str) -> Result<()> {
        fn num<T: std::str::FromStr>(k: &str, v: &str) -> Result<T> {
            v.parse()
                .map_err(|_| Error::InvalidArgument(format!("bad value for {k}: {v:?}")))
        }
        match key {
            "groups" => self.n_planted_paraphrase_groups = num(key, value)?,
            "pivots" => self.n_pivot_langs = num(key, value)?,
            "noise_rate" => self.noise_rate = num(key, value)?,
            "lines_per_group" => self.lines_per_group = num(key, value)?,
            "seed" => self.seed = num(key, value)?,
            "zipf_exponent" => self.zipf_exponent = num(key, value)?,
            "max_variants" => self.max_variants = num(key, value)?,
            "max_translations" => self.max_translations = num(key, value)?,
            "coverage" => self.coverage = num(key, value)?,
            _ => return Err(Error::InvalidArgument(format!("unknown synthetic spec key {key:?}"))),
        }
        Ok(())
    }

    pub fn pivot_langs(&self) -> Vec<Lang> {
        (0..self.n_pivot_langs)
            .map(|i| match LANG_CODES.get(i) {
                Some(code) => Lang::new(code),
                None => Lang::new(&format!("p{i}")),
            })
            .collect::<Result<_>>()
            .expect("valid generated codes")
    }
}

impl fmt::Display for SyntheticSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(f, "groups={}", self.n_planted_paraphrase_groups)?;
        writeln!(f, "pivots={}", self.n_pivot_langs)?;
        writeln!(f, "noise_rate={}", self.noise_rate)?;
        writeln!(f, "lines_per_group={}", self.lines_per_group)?;
        writeln!(f, "seed={}", self.seed)?;
        writeln!(f, "zipf_exponent={}", self.zipf_exponent)?;
        writeln!(f, "max_variants={}", self.max_variants)?;
        writeln!(f, "max_translations={}", self.max_translations)?;
        writeln!(f, "coverage={}", self.coverage)
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SyntheticCorpus {
    pub bitexts: Vec<(Lang, Vec<AlignedLine>)>,
    /// Within-group pairs whose two variants both occur.
    pub gold: BTreeSet<PairKey>,
    /// Number of lines generated as misalignments, per language.
    pub misaligned: Vec<usize>,
}

/// Variants of one group are worded differently enough to pass the edit filter.
fn target_text(group: usize, variant: usize) -> String {
    match variant {
        0 => format!("Sentence {group} is here."),
        1 => format!("Look, we got number {group}!"),
        2 => format!("Item {group} arrived today?"),
        3 => format!("Yes, that was thing {group}."),
        v => format!("Wording {v} for idea {group}."),
    }
}

fn pivot_text(lang: &Lang, group: usize, k: usize) -> String {
    format!("{lang} phrase {group}/{k}")
}

/// Deterministic for a given spec.
pub fn generate_synthetic(spec: &SyntheticSpec) -> Result<SyntheticCorpus> {
    spec.validate()?;
    let mut rng = ChaCha8Rng::seed_from_u64(spec.seed);
    let langs = spec.pivot_langs();
    let groups = spec.n_planted_paraphrase_groups;

    let variants: Vec<usize> = (0..groups)
        .map(|_| rng.random_range(1..=spec.max_variants))
        .collect();
    let translations: Vec<Vec<usize>> = langs
        .iter()
        .map(|_| {
            (0..groups)
                .map(|_| rng.random_range(1..=spec.max_translations))
                .collect()
        })
        .collect();

    let weights: Vec<f64> = (0..groups)
        .map(|g| 1.0 / ((g + 1) as f64).powf(spec.zipf_exponent))
        .collect();
    let total_weight: f64 = weights.iter().sum();
    let total = (groups * spec.lines_per_group) as f64;

    // (group, variant, year)
    let mut occurrences: Vec<(usize, usize, u32)> = Vec::new();
    for (g, w) in weights.iter().enumerate() {
        let n = ((total * w / total_weight).round() as usize).max(1);
        for _ in 0..n {
            let v = rng.random_range(0..variants[g]);
            let year = rng.random_range(1990..=2019);
            occurrences.push((g, v, year));
        }
    }
    occurrences.shuffle(&mut rng);

    let n_langs = langs.len();
    let present: Vec<Vec<bool>> = occurrences
        .iter()
        .map(|_| {
            let mut mask: Vec<bool> = (0..n_langs).map(|_| rng.random_bool(spec.coverage)).collect();
            if !mask.contains(&true) {
                mask[rng.random_range(0..n_langs)] = true;
            }
            mask
        })
        .collect();

    let mut seen: Vec<Vec<bool>> = variants.iter().map(|&n| vec![false; n]).collect();
    for &(g, v, _) in &occurrences {
        seen[g][v] = true;
    }

    let mut bitexts = Vec::with_capacity(langs.len());
    let mut misaligned = Vec::with_capacity(langs.len());
    for (li, lang) in langs.iter().enumerate() {
        // correct pivot for every occurrence in this language
        let pivots: Vec<String> = occurrences
            .iter()
            .map(|&(g, _, _)| pivot_text(lang, g, rng.random_range(0..translations[li][g])))
            .collect();
        let mut lines = Vec::with_capacity(occurrences.len());
        let mut wrong = 0;
        for (i, &(g, v, year)) in occurrences.iter().enumerate() {
            if !present[i][li] {
                continue;
            }
            let pivot = if rng.random_bool(spec.noise_rate) {
                wrong += 1;
                let mut j = rng.random_range(0..occurrences.len());
                if occurrences.len() > 1 {
                    while occurrences[j].0 == g {
                        j = rng.random_range(0..occurrences.len());
                    }
                }
                &pivots[j]
            } else {
                &pivots[i]
            };
            lines.push(AlignedLine {
                target: Phrase::new(&target_text(g, v)).expect("non-empty"),
                pivot: Phrase::new(pivot).expect("non-empty"),
                pivot_lang: lang.clone(),
                doc_year: Some(year),
            });
        }
        bitexts.push((lang.clone(), lines));
        misaligned.push(wrong);
    }

    let mut gold = BTreeSet::new();
    for (g, s) in seen.iter().enumerate() {
        for a in 0..s.len() {
            for b in a + 1..s.len() {
                if s[a] && s[b] {
                    gold.insert(
                        PairKey::from_raw(&target_text(g, a), &target_text(g, b)).expect("distinct"),
                    );
                }
            }
        }
    }

    Ok(SyntheticCorpus {
        bitexts,
        gold,
        misaligned,
    })
}

impl SyntheticCorpus {
    /// Writes `bitext.<lang>.tsv` per pivot language, `gold.tsv`, and `synth.spec`.
    pub fn save(&self, dir: &Path, spec: &SyntheticSpec) -> Result<()> {
        std::fs::create_dir_all(dir)?;
        for (lang, lines) in &self.bitexts {
            let w = io::create(&dir.join(format!("bitext.{lang}.tsv")))?;
            crate::bitext::write_bitext(w, lines)?;
        }
        let gold: Vec<PairKey> = self.gold.iter().cloned().collect();
        io::write_pair_list(&dir.join("gold.tsv"), &gold)?;
        std::fs::write(dir.join("synth.spec"), spec.to_string())?;
        Ok(())
    }

    pub fn tables(&self) -> Result<Vec<CooccurrenceTable>> {
        self.bitexts.iter().map(|(_, l)| build_table(l)).collect()
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PrecisionAtK {
    pub k: usize,
    pub precision: f64,
    /// `k` exceeded the list length; precision is over the available prefix.
    pub truncated: bool,
}

/// `|top-k ∩ gold| / k`, over the available prefix when the list is shorter.
pub fn precision_at_k<'a, I, F>(ranking: I, k: usize, mut is_gold: F) -> PrecisionAtK
where
    I: IntoIterator<Item = &'a PairKey>,
    F: FnMut(&PairKey) -> bool,
{
    let mut seen = 0usize;
    let mut hits = 0usize;
    for p in ranking.into_iter().take(k) {
        seen += 1;
        if is_gold(p) {
            hits += 1;
        }
    }
    PrecisionAtK {
        k,
        precision: if seen == 0 { 0.0 } else { hits as f64 / seen as f64 },
        truncated: seen < k,
    }
}

#[derive(Clone, Debug, PartialEq)]
pub struct SchemeReport {
    pub scheme: SchemeId,
    pub precision_at_k: BTreeMap<usize, PrecisionAtK>,
    pub curve: QualityCurve,
}

impl SchemeReport {
    pub fn precision(&self, k: usize) -> Option<f64> {
        self.precision_at_k.get(&k).map(|p| p.precision)
    }
}

/// Scores a full ranking against a binary gold set. The curve labels gold
/// pairs good and everything else bad.
pub fn evaluate_ranked(ranked: &RankedList, gold: &HashSet<PairKey>, ks: &[usize]) -> Result<SchemeReport> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let precision_at_k = ks
        .iter()
        .map(|&k| {
            let p = precision_at_k(ranked.entries.iter().map(|e| &e.pair), k, |p| gold.contains(p));
            (k, p)
        })
        .collect();
    let sample: HashMap<PairKey, AnnotationCategory> = ranked
        .entries
        .iter()
        .map(|e| {
            let cat = if gold.contains(&e.pair) {
                AnnotationCategory::Good
            } else {
                AnnotationCategory::Bad
            };
            (e.pair.clone(), cat)
        })
        .collect();
    Ok(SchemeReport {
        scheme: ranked.scheme,
        precision_at_k,
        curve: quality_curve(ranked, &sample)?,
    })
}

/// Ranks all candidates of the given pivot corpora under each scheme and
/// reports precision@k against `gold`.
pub fn evaluate_schemes(
    tables: &[CooccurrenceTable],
    gold: &HashSet<PairKey>,
    schemes: &[SchemeId],
    ks: &[usize],
) -> Result<Vec<SchemeReport>> {
    if gold.is_empty() {
        return Err(Error::EmptyGold);
    }
    let candidates = enumerate_candidates(tables, 1)?;
    schemes
        .iter()
        .map(|&scheme| evaluate_ranked(&rank(&candidates, tables, scheme)?, gold, ks))
        .collect()
}

/// Test sets are for final evaluations only.
pub fn guard_split(split: SplitTarget, final_run: bool) -> Result<()> {
    if split == SplitTarget::Test && !final_run {
        return Err(Error::InvalidArgument(
            "refusing to evaluate on the test split without --final".into(),
        ));
    }
    Ok(())
}

/// Evaluates a ranking against an annotated set. Positives are pairs labelled
/// good or mostly good; precision@k is computed over the annotated pairs in
/// ranking order, and the curve places them at their global ranks.
pub fn evaluate_on_annotated(ranked: &RankedList, annotated: &AnnotatedSet, ks: &[usize]) -> Result<SchemeReport> {
    let labels: HashMap<&PairKey, AnnotationCategory> = annotated
        .rows
        .iter()
        .filter_map(|r| Some((&r.pair, r.label.category()?)))
        .collect();
    let order: Vec<&PairKey> = ranked
        .entries
        .iter()
        .map(|e| &e.pair)
        .filter(|p| labels.contains_key(p))
        .collect();
    if order.is_empty() {
        return Err(Error::NoOverlap);
    }
    let precision_at_k = ks
        .iter()
        .map(|&k| {
            let p = precision_at_k(order.iter().copied(), k, |p| labels[p].is_acceptable());
            (k, p)
        })
        .collect();
    let sample: HashMap<PairKey, AnnotationCategory> =
        order.iter().map(|p| ((*p).clone(), labels[p])).collect();
    Ok(SchemeReport {
        scheme: ranked.scheme,
        precision_at_k,
        curve: quality_curve(ranked, &sample)?,
    })
}

/// Columns: scheme, k, precision. Truncated prefixes are noted in `#warning=` lines.
pub fn save_reports(path: &Path, reports: &[SchemeReport]) -> Result<()> {
    let mut w = io::create(path)?;
    io::write_header(&mut w, &[])?;
    for r in reports {
        for p in r.precision_at_k.values().filter(|p| p.truncated) {
            writeln!(
                w,
                "#warning={} k={} exceeds the ranked list; precision over the available prefix",
                r.scheme, p.k
            )?;
        }
    }
    for r in reports {
        for p in r.precision_at_k.values() {
            writeln!(w, "{}\t{}\t{}", r.scheme, p.k, p.precision)?;
        }
    }
    w.flush()?;
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::annotation::{AdjudicatedLabel, AnnotatedRow, BucketSummary};
    use crate::miner::RankedEntry;

    fn small() -> SyntheticSpec {
        SyntheticSpec {
            n_planted_paraphrase_groups: 60,
            lines_per_group: 10,
            n_pivot_langs: 2,
            ..SyntheticSpec::default()
        }
    }

    #[test]
    fn generation_is_deterministic() {
        let a = generate_synthetic(&small()).unwrap();
        let b = generate_synthetic(&small()).unwrap();
        assert_eq!(a, b);
        let dir = tempfile::tempdir().unwrap();
        a.save(&dir.path().join("a"), &small()).unwrap();
        b.save(&dir.path().join("b"), &small()).unwrap();
        for name in ["bitext.de.tsv", "bitext.fi.tsv", "gold.tsv", "synth.spec"] {
            let x = std::fs::read(dir.path().join("a").join(name)).unwrap();
            let y = std::fs::read(dir.path().join("b").join(name)).unwrap();
            assert_eq!(x, y, "{name}");
        }
        let other = generate_synthetic(&SyntheticSpec { seed: 2, ..small() }).unwrap();
        assert_ne!(a, other);
    }

    #[test]
    fn no_noise_means_every_candidate_is_gold() {
        let spec = SyntheticSpec {
            noise_rate: 0.0,
            ..small()
        };
        let corpus = generate_synthetic(&spec).unwrap();
        assert!(corpus.misaligned.iter().all(|&m| m == 0));
        let candidates = enumerate_candidates(&corpus.tables().unwrap(), 1).unwrap();
        assert!(!candidates.is_empty());
        assert!(candidates.iter().all(|c| corpus.gold.contains(&c.pair)));
    }

    #[test]
    fn noise_creates_non_gold_candidates() {
        let spec = SyntheticSpec {
            noise_rate: 0.3,
            ..small()
        };
        let corpus = generate_synthetic(&spec).unwrap();
        let candidates = enumerate_candidates(&corpus.tables().unwrap(), 1).unwrap();
        let non_gold = candidates.iter().filter(|c| !corpus.gold.contains(&c.pair)).count();
        assert!(non_gold > 0);
        // gold pairs are always within one planted group
        for p in &corpus.gold {
            let group = |s: &str| {
                s.split(|c: char| !c.is_ascii_digit())
                    .rfind(|x| !x.is_empty())
                    .unwrap()
                    .to_string()
            };
            assert_eq!(group(p.lo()), group(p.hi()));
        }
    }

    #[test]
    fn spec_parse_and_validate() {
        let spec = SyntheticSpec::parse("# comment\ngroups=10\nnoise_rate=0.1\nseed=9\n").unwrap();
        assert_eq!(spec.n_planted_paraphrase_groups, 10);
        assert_eq!(spec.seed, 9);
        assert_eq!(SyntheticSpec::parse(&spec.to_string()).unwrap(), spec);
        assert!(SyntheticSpec::parse("noise_rate=1.0").is_err());
        assert!(SyntheticSpec::parse("groups=0").is_err());
        assert!(SyntheticSpec::parse("colour=blue").is_err());
    }

    fn pk(i: usize) -> PairKey {
        PairKey::from_raw(&format!("p{i:03}a"), &format!("p{i:03}b")).unwrap()
    }

    fn ranked_of(pairs: &[PairKey]) -> RankedList {
        RankedList {
            scheme: SchemeId::SumPmi,
            entries: pairs
                .iter()
                .enumerate()
                .map(|(i, p)| RankedEntry {
                    pair: p.clone(),
                    score: -(i as f64),
                    n_support: 1,
                })
                .collect(),
        }
    }

    #[test]
    fn perfect_ranking_has_full_precision() {
        let pairs: Vec<PairKey> = (0..40).map(pk).collect();
        let gold: HashSet<PairKey> = pairs[..20].iter().cloned().collect();
        let r = evaluate_ranked(&ranked_of(&pairs), &gold, &[5, 10, 20, 40]).unwrap();
        assert_eq!(r.precision(5), Some(1.0));
        assert_eq!(r.precision(20), Some(1.0));
        assert_eq!(r.precision(40), Some(0.5));
        assert!(evaluate_ranked(&ranked_of(&pairs), &HashSet::new(), &[5]).is_err());
    }

    #[test]
    fn k_beyond_list_is_flagged() {
        let pairs: Vec<PairKey> = (0..4).map(pk).collect();
        let p = precision_at_k(&pairs, 10, |p| *p == pairs[0]);
        assert!(p.truncated);
        assert_eq!(p.precision, 0.25);
    }

    #[test]
    fn random_ranking_tracks_gold_fraction() {
        let pairs: Vec<PairKey> = (0..1000).map(pk).collect();
        let gold: HashSet<PairKey> = pairs.iter().step_by(2).cloned().collect();
        let mut rng = ChaCha8Rng::seed_from_u64(5);
        let mut estimates = Vec::new();
        for _ in 0..50 {
            let mut shuffled = pairs.clone();
            shuffled.shuffle(&mut rng);
            estimates.push(precision_at_k(&shuffled, 200, |p| gold.contains(p)).precision);
        }
        let mean = estimates.iter().sum::<f64>() / estimates.len() as f64;
        assert!((mean - 0.5).abs() <= 0.1, "mean {mean}");
        assert!(estimates.iter().all(|e| (e - 0.5).abs() <= 0.1));
    }

    #[test]
    fn prepending_gold_never_lowers_precision() {
        let pairs: Vec<PairKey> = (0..30).map(pk).collect();
        let gold: HashSet<PairKey> = [0, 3, 7, 8, 20, 29].into_iter().map(pk).collect();
        let mut extended = vec![pk(500)];
        extended.extend(pairs.iter().cloned());
        let mut gold_ext = gold.clone();
        gold_ext.insert(pk(500));
        for k in [1, 5, 10, 30] {
            let before = precision_at_k(&pairs, k, |p| gold.contains(p)).precision;
            let after = precision_at_k(&extended, k, |p| gold_ext.contains(p)).precision;
            assert!(after >= before, "k={k}");
        }
    }

    fn annotated(rows: &[(usize, AdjudicatedLabel)]) -> AnnotatedSet {
        AnnotatedSet {
            split: SplitTarget::Dev,
            rows: rows
                .iter()
                .map(|&(i, label)| AnnotatedRow {
                    pair_id: pk(i).pair_id(),
                    label,
                    pair: pk(i),
                })
                .collect(),
            summary: BucketSummary::default(),
        }
    }

    #[test]
    fn annotated_fixture_of_twenty() {
        let pairs: Vec<PairKey> = (0..50).map(pk).collect();
        let ranked = ranked_of(&pairs);
        let rows: Vec<(usize, AdjudicatedLabel)> = (0..20)
            .map(|i| {
                let label = if i < 10 { AdjudicatedLabel::Good } else { AdjudicatedLabel::Bad };
                (i * 2, label)
            })
            .collect();
        let report = evaluate_on_annotated(&ranked, &annotated(&rows), &[10, 20]).unwrap();
        assert_eq!(report.precision(10), Some(1.0));
        assert_eq!(report.precision(20), Some(0.5));
        assert_eq!(report.curve.points.len(), 20);
        assert_eq!(report.curve.points[0].rank, 1);
        assert_eq!(report.curve.points[19].rank, 39);
    }

    #[test]
    fn all_positive_annotated_set() {
        let pairs: Vec<PairKey> = (0..10).map(pk).collect();
        let rows: Vec<_> = (0..10)
            .map(|i| (i, if i % 2 == 0 { AdjudicatedLabel::Good } else { AdjudicatedLabel::MostlyGood }))
            .collect();
        let report = evaluate_on_annotated(&ranked_of(&pairs), &annotated(&rows), &[1, 5, 10]).unwrap();
        assert!(report.precision_at_k.values().all(|p| p.precision == 1.0));
    }

    #[test]
    fn annotated_without_overlap_is_an_error() {
        let ranked = ranked_of(&[pk(1)]);
        assert!(matches!(
            evaluate_on_annotated(&ranked, &annotated(&[(2, AdjudicatedLabel::Good)]), &[1]),
            Err(Error::NoOverlap)
        ));
    }

    #[test]
    fn test_split_needs_final_flag() {
        assert!(guard_split(SplitTarget::Test, false).is_err());
        assert!(guard_split(SplitTarget::Test, true).is_ok());
        assert!(guard_split(SplitTarget::Dev, false).is_ok());
    }
}
