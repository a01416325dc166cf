//! Annotation categories, the edit-distance pre-filter, train/dev/test
//! disjointness, two-annotator adjudication, and annotated-set export.

use std::collections::{HashMap, HashSet};
use std::fmt;
use std::io::Write;
use std::path::Path;
use std::str::FromStr;

use chrono::{DateTime, Utc};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::io;
use crate::phrase::{PairKey, Phrase};

/// One annotator's choice. The four scale categories map to button colours
/// green, light green, yellow and red; `Trash` marks wrong language or
/// broken spelling/grammar and has no position on the scale.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AnnotationCategory {
    Good,
    MostlyGood,
    MostlyBad,
    Bad,
    Trash,
}

impl AnnotationCategory {
    pub const ALL: [AnnotationCategory; 5] = [
        AnnotationCategory::Good,
        AnnotationCategory::MostlyGood,
        AnnotationCategory::MostlyBad,
        AnnotationCategory::Bad,
        AnnotationCategory::Trash,
    ];

    pub const SCALE: [AnnotationCategory; 4] = [
        AnnotationCategory::Good,
        AnnotationCategory::MostlyGood,
        AnnotationCategory::MostlyBad,
        AnnotationCategory::Bad,
    ];

    /// Good 4, mostly good 3, mostly bad 2, bad 1; trash has none.
    pub fn ordinal(self) -> Option<u8> {
        match self {
            AnnotationCategory::Good => Some(4),
            AnnotationCategory::MostlyGood => Some(3),
            AnnotationCategory::MostlyBad => Some(2),
            AnnotationCategory::Bad => Some(1),
            AnnotationCategory::Trash => None,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            AnnotationCategory::Good => "good",
            AnnotationCategory::MostlyGood => "mostly_good",
            AnnotationCategory::MostlyBad => "mostly_bad",
            AnnotationCategory::Bad => "bad",
            AnnotationCategory::Trash => "trash",
        }
    }

    pub fn is_acceptable(self) -> bool {
        matches!(self, AnnotationCategory::Good | AnnotationCategory::MostlyGood)
    }
}

impl fmt::Display for AnnotationCategory {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AnnotationCategory {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AnnotationCategory::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown category {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct CategoryCounts {
    pub good: u64,
    pub mostly_good: u64,
    pub mostly_bad: u64,
    pub bad: u64,
    pub trash: u64,
}

impl CategoryCounts {
    pub fn add(&mut self, c: AnnotationCategory) {
        *self.slot(c) += 1;
    }

    fn slot(&mut self, c: AnnotationCategory) -> &mut u64 {
        match c {
            AnnotationCategory::Good => &mut self.good,
            AnnotationCategory::MostlyGood => &mut self.mostly_good,
            AnnotationCategory::MostlyBad => &mut self.mostly_bad,
            AnnotationCategory::Bad => &mut self.bad,
            AnnotationCategory::Trash => &mut self.trash,
        }
    }

    pub fn get(&self, c: AnnotationCategory) -> u64 {
        match c {
            AnnotationCategory::Good => self.good,
            AnnotationCategory::MostlyGood => self.mostly_good,
            AnnotationCategory::MostlyBad => self.mostly_bad,
            AnnotationCategory::Bad => self.bad,
            AnnotationCategory::Trash => self.trash,
        }
    }

    pub fn total(&self) -> u64 {
        self.good + self.mostly_good + self.mostly_bad + self.bad + self.trash
    }

    pub fn acceptable(&self) -> u64 {
        self.good + self.mostly_good
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Judgment {
    pub pair_id: String,
    pub annotator_id: String,
    pub category: AnnotationCategory,
    pub timestamp: DateTime<Utc>,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum AdjudicatedLabel {
    Good,
    MostlyGood,
    MostlyBad,
    Bad,
    DiscardedTrash,
    DiscardedDisagree,
}

impl AdjudicatedLabel {
    pub const ALL: [AdjudicatedLabel; 6] = [
        AdjudicatedLabel::Good,
        AdjudicatedLabel::MostlyGood,
        AdjudicatedLabel::MostlyBad,
        AdjudicatedLabel::Bad,
        AdjudicatedLabel::DiscardedTrash,
        AdjudicatedLabel::DiscardedDisagree,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            AdjudicatedLabel::Good => "good",
            AdjudicatedLabel::MostlyGood => "mostly_good",
            AdjudicatedLabel::MostlyBad => "mostly_bad",
            AdjudicatedLabel::Bad => "bad",
            AdjudicatedLabel::DiscardedTrash => "discarded_trash",
            AdjudicatedLabel::DiscardedDisagree => "discarded_disagree",
        }
    }

    pub fn is_discarded(self) -> bool {
        matches!(
            self,
            AdjudicatedLabel::DiscardedTrash | AdjudicatedLabel::DiscardedDisagree
        )
    }

    /// The scale category of a kept label.
    pub fn category(self) -> Option<AnnotationCategory> {
        match self {
            AdjudicatedLabel::Good => Some(AnnotationCategory::Good),
            AdjudicatedLabel::MostlyGood => Some(AnnotationCategory::MostlyGood),
            AdjudicatedLabel::MostlyBad => Some(AnnotationCategory::MostlyBad),
            AdjudicatedLabel::Bad => Some(AnnotationCategory::Bad),
            _ => None,
        }
    }

    fn from_category(c: AnnotationCategory) -> AdjudicatedLabel {
        match c {
            AnnotationCategory::Good => AdjudicatedLabel::Good,
            AnnotationCategory::MostlyGood => AdjudicatedLabel::MostlyGood,
            AnnotationCategory::MostlyBad => AdjudicatedLabel::MostlyBad,
            AnnotationCategory::Bad => AdjudicatedLabel::Bad,
            AnnotationCategory::Trash => AdjudicatedLabel::DiscardedTrash,
        }
    }
}

impl fmt::Display for AdjudicatedLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for AdjudicatedLabel {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        AdjudicatedLabel::ALL
            .into_iter()
            .find(|c| c.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown label {s:?}")))
    }
}

/// Merges two categories: trash wins; otherwise agreement or adjacent
/// categories give the lower one, and a gap of two or more steps discards.
pub fn adjudicate_categories(a: AnnotationCategory, b: AnnotationCategory) -> AdjudicatedLabel {
    match (a.ordinal(), b.ordinal()) {
        (Some(x), Some(y)) if x.abs_diff(y) <= 1 => {
            AdjudicatedLabel::from_category(if x <= y { a } else { b })
        }
        (Some(_), Some(_)) => AdjudicatedLabel::DiscardedDisagree,
        _ => AdjudicatedLabel::DiscardedTrash,
    }
}

pub fn adjudicate(j1: &Judgment, j2: &Judgment) -> Result<AdjudicatedLabel> {
    if j1.pair_id != j2.pair_id {
        return Err(Error::PairMismatch(j1.pair_id.clone(), j2.pair_id.clone()));
    }
    if j1.annotator_id == j2.annotator_id {
        return Err(Error::SameAnnotator(j1.annotator_id.clone()));
    }
    Ok(adjudicate_categories(j1.category, j2.category))
}

/// The nine outcome columns of the annotation breakdown: seven agreement /
/// adjacent-disagreement combinations plus the two discard reasons.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Bucket {
    GreenGreen,
    GreenLightGreen,
    LightGreenLightGreen,
    LightGreenYellow,
    YellowYellow,
    YellowRed,
    RedRed,
    Trash,
    Disagree,
}

impl Bucket {
    pub const ALL: [Bucket; 9] = [
        Bucket::GreenGreen,
        Bucket::GreenLightGreen,
        Bucket::LightGreenLightGreen,
        Bucket::LightGreenYellow,
        Bucket::YellowYellow,
        Bucket::YellowRed,
        Bucket::RedRed,
        Bucket::Trash,
        Bucket::Disagree,
    ];

    pub fn of(a: AnnotationCategory, b: AnnotationCategory) -> Bucket {
        let (Some(x), Some(y)) = (a.ordinal(), b.ordinal()) else {
            return Bucket::Trash;
        };
        match (x.max(y), x.min(y)) {
            (4, 4) => Bucket::GreenGreen,
            (4, 3) => Bucket::GreenLightGreen,
            (3, 3) => Bucket::LightGreenLightGreen,
            (3, 2) => Bucket::LightGreenYellow,
            (2, 2) => Bucket::YellowYellow,
            (2, 1) => Bucket::YellowRed,
            (1, 1) => Bucket::RedRed,
            _ => Bucket::Disagree,
        }
    }

    pub fn label(self) -> AdjudicatedLabel {
        match self {
            Bucket::GreenGreen => AdjudicatedLabel::Good,
            Bucket::GreenLightGreen | Bucket::LightGreenLightGreen => AdjudicatedLabel::MostlyGood,
            Bucket::LightGreenYellow | Bucket::YellowYellow => AdjudicatedLabel::MostlyBad,
            Bucket::YellowRed | Bucket::RedRed => AdjudicatedLabel::Bad,
            Bucket::Trash => AdjudicatedLabel::DiscardedTrash,
            Bucket::Disagree => AdjudicatedLabel::DiscardedDisagree,
        }
    }

    pub fn as_str(self) -> &'static str {
        match self {
            Bucket::GreenGreen => "2x_green",
            Bucket::GreenLightGreen => "green+light_green",
            Bucket::LightGreenLightGreen => "2x_light_green",
            Bucket::LightGreenYellow => "light_green+yellow",
            Bucket::YellowYellow => "2x_yellow",
            Bucket::YellowRed => "yellow+red",
            Bucket::RedRed => "2x_red",
            Bucket::Trash => "trash",
            Bucket::Disagree => "disagree",
        }
    }
}

impl fmt::Display for Bucket {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for Bucket {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        Bucket::ALL
            .into_iter()
            .find(|b| b.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown bucket {s:?}")))
    }
}

/// Character-level Levenshtein distance (unit costs).
pub fn levenshtein(a: &str, b: &str) -> usize {
    let a: Vec<char> = a.chars().collect();
    let b: Vec<char> = b.chars().collect();
    let (a, b) = if a.len() < b.len() { (b, a) } else { (a, b) };
    let mut prev: Vec<usize> = (0..=b.len()).collect();
    let mut cur = vec![0; b.len() + 1];
    for (i, ca) in a.iter().enumerate() {
        cur[0] = i + 1;
        for (j, cb) in b.iter().enumerate() {
            let sub = prev[j] + usize::from(ca != cb);
            cur[j + 1] = sub.min(prev[j + 1] + 1).min(cur[j] + 1);
        }
        std::mem::swap(&mut prev, &mut cur);
    }
    prev[b.len()]
}

/// Relative edit-distance filter for dev/test annotation candidates.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct EditFilter {
    /// Sentences shorter than this many characters use `short_threshold`.
    pub short_cutoff: usize,
    pub base_threshold: f64,
    pub short_threshold: f64,
}

impl Default for EditFilter {
    fn default() -> Self {
        EditFilter {
            short_cutoff: 24,
            base_threshold: 0.4,
            short_threshold: 0.6,
        }
    }
}

impl EditFilter {
    /// Accepts when the edit distance is at least the threshold factor times
    /// the length of the shorter sentence. Identical sentences never pass.
    pub fn accepts(&self, e1: &Phrase, e2: &Phrase) -> bool {
        let shorter = e1.char_len().min(e2.char_len());
        let d = levenshtein(e1, e2);
        if d == 0 {
            return false;
        }
        let factor = if shorter < self.short_cutoff {
            self.short_threshold
        } else {
            self.base_threshold
        };
        // slack absorbs the binary representation of decimal factors
        d as f64 + 1e-9 >= factor * shorter as f64
    }
}

pub fn relative_edit_filter(e1: &Phrase, e2: &Phrase) -> bool {
    EditFilter::default().accepts(e1, e2)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum SplitTarget {
    Dev,
    Test,
}

impl SplitTarget {
    pub fn as_str(self) -> &'static str {
        match self {
            SplitTarget::Dev => "dev",
            SplitTarget::Test => "test",
        }
    }
}

impl fmt::Display for SplitTarget {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SplitTarget {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        match s {
            "dev" => Ok(SplitTarget::Dev),
            "test" => Ok(SplitTarget::Test),
            _ => Err(Error::InvalidArgument(format!("split must be dev or test, got {s:?}"))),
        }
    }
}

/// Keeps candidates that do not occur in the training pairs (dev), or in
/// neither the training nor the dev pairs (test). Order is preserved.
pub fn disjoint_split(
    candidates: &[PairKey],
    train_pairs: &HashSet<PairKey>,
    dev_pairs: &HashSet<PairKey>,
    target: SplitTarget,
) -> Vec<PairKey> {
    candidates
        .iter()
        .filter(|p| !train_pairs.contains(*p))
        .filter(|p| target == SplitTarget::Dev || !dev_pairs.contains(*p))
        .cloned()
        .collect()
}

/// A pair with its two-annotator outcome.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AdjudicatedPair {
    pub pair_id: String,
    pub pair: PairKey,
    pub bucket: Bucket,
    pub label: AdjudicatedLabel,
}

impl AdjudicatedPair {
    pub fn new(pair: PairKey, j1: &Judgment, j2: &Judgment) -> Result<Self> {
        let label = adjudicate(j1, j2)?;
        let bucket = Bucket::of(j1.category, j2.category);
        debug_assert_eq!(bucket.label(), label);
        Ok(AdjudicatedPair {
            pair_id: pair.pair_id(),
            pair,
            bucket,
            label,
        })
    }
}

/// Columns: pair_id, label, bucket, phrase1, phrase2.
pub fn save_adjudicated(path: &Path, items: &[AdjudicatedPair]) -> Result<()> {
    let mut w = io::create(path)?;
    io::write_header(&mut w, &[])?;
    for a in items {
        writeln!(
            w,
            "{}\t{}\t{}\t{}\t{}",
            a.pair_id,
            a.label,
            a.bucket,
            a.pair.lo(),
            a.pair.hi()
        )?;
    }
    w.flush()?;
    Ok(())
}

pub fn load_adjudicated(path: &Path) -> Result<Vec<AdjudicatedPair>> {
    let mut out = Vec::new();
    for (idx, line) in io::read_lines(path)?.iter().enumerate() {
        if line.is_empty() || io::is_comment(line) {
            continue;
        }
        let bad = |msg: String| Error::parse(path, idx + 1, msg);
        let f: Vec<&str> = line.split('\t').collect();
        let [id, label, bucket, a, b] = f.as_slice() else {
            return Err(bad("expected 5 fields".into()));
        };
        let pair = PairKey::from_raw(a, b).ok_or_else(|| bad("identity or empty pair".into()))?;
        let label: AdjudicatedLabel = label.parse().map_err(|e: Error| bad(e.to_string()))?;
        let bucket: Bucket = bucket.parse().map_err(|e: Error| bad(e.to_string()))?;
        if bucket.label() != label {
            return Err(bad(format!("bucket {bucket} does not yield label {label}")));
        }
        if pair.pair_id() != *id {
            return Err(bad(format!("pair id {id} does not match the phrases")));
        }
        out.push(AdjudicatedPair {
            pair_id: id.to_string(),
            pair,
            bucket,
            label,
        });
    }
    Ok(out)
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq)]
pub struct BucketSummary([u64; 9]);

impl BucketSummary {
    pub fn add(&mut self, b: Bucket) {
        self.0[b as usize] += 1;
    }

    pub fn get(&self, b: Bucket) -> u64 {
        self.0[b as usize]
    }

    pub fn total(&self) -> u64 {
        self.0.iter().sum()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedRow {
    pub pair_id: String,
    pub label: AdjudicatedLabel,
    pub pair: PairKey,
}

/// A dev or test set: kept pairs plus the outcome tally of everything judged.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AnnotatedSet {
    pub split: SplitTarget,
    pub rows: Vec<AnnotatedRow>,
    pub summary: BucketSummary,
}

/// Drops discarded pairs from the rows and tallies every pair by bucket.
pub fn export_sets(items: &[AdjudicatedPair], split: SplitTarget) -> AnnotatedSet {
    let mut summary = BucketSummary::default();
    let mut rows = Vec::new();
    for a in items {
        summary.add(a.bucket);
        if !a.label.is_discarded() {
            rows.push(AnnotatedRow {
                pair_id: a.pair_id.clone(),
                label: a.label,
                pair: a.pair.clone(),
            });
        }
    }
    AnnotatedSet {
        split,
        rows,
        summary,
    }
}

impl AnnotatedSet {
    /// Rows `pair_id<TAB>label<TAB>phrase1<TAB>phrase2`, then a `#summary` line and one `#bucket=count` line per bucket.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = io::create(path)?;
        io::write_header(&mut w, &[("split", self.split.to_string())])?;
        for r in &self.rows {
            writeln!(w, "{}\t{}\t{}\t{}", r.pair_id, r.label, r.pair.lo(), r.pair.hi())?;
        }
        writeln!(w, "#summary")?;
        for b in Bucket::ALL {
            writeln!(w, "#{}={}", b, self.summary.get(b))?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<AnnotatedSet> {
        let lines = io::read_lines(path)?;
        let meta = io::header_meta(&lines);
        let split: SplitTarget = meta
            .get("split")
            .ok_or_else(|| Error::parse(path, 1, "missing #split= header"))?
            .parse()?;
        let mut summary = BucketSummary::default();
        for b in Bucket::ALL {
            if let Some(v) = meta.get(b.as_str()) {
                summary.0[b as usize] = v
                    .parse()
                    .map_err(|_| Error::parse(path, 0, format!("bad summary count for {b}")))?;
            }
        }
        let mut rows = Vec::new();
        for (idx, line) in lines.iter().enumerate() {
            if line.is_empty() || io::is_comment(line) {
                continue;
            }
            let bad = |msg: String| Error::parse(path, idx + 1, msg);
            let f: Vec<&str> = line.split('\t').collect();
            let [id, label, a, b] = f.as_slice() else {
                return Err(bad("expected 4 fields".into()));
            };
            rows.push(AnnotatedRow {
                pair_id: id.to_string(),
                label: label.parse().map_err(|e: Error| bad(e.to_string()))?,
                pair: PairKey::from_raw(a, b).ok_or_else(|| bad("identity or empty pair".into()))?,
            });
        }
        Ok(AnnotatedSet {
            split,
            rows,
            summary,
        })
    }
}

/// Reads a single-annotator sample: `category<TAB>phrase1<TAB>phrase2`.
pub fn load_sample(path: &Path) -> Result<HashMap<PairKey, AnnotationCategory>> {
    let mut out = HashMap::new();
    for (idx, line) in io::read_lines(path)?.iter().enumerate() {
        if line.is_empty() || io::is_comment(line) {
            continue;
        }
        let bad = |msg: String| Error::parse(path, idx + 1, msg);
        let f: Vec<&str> = line.split('\t').collect();
        let [cat, a, b] = f.as_slice() else {
            return Err(bad("expected 3 fields".into()));
        };
        let cat: AnnotationCategory = cat.parse().map_err(|e: Error| bad(e.to_string()))?;
        let pair = PairKey::from_raw(a, b).ok_or_else(|| bad("identity or empty pair".into()))?;
        if let Some(prev) = out.insert(pair, cat) {
            if prev != cat {
                return Err(bad("pair annotated twice with different categories".into()));
            }
        }
    }
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;
    use AnnotationCategory::*;

    fn judgment(pair: &str, who: &str, c: AnnotationCategory) -> Judgment {
        Judgment {
            pair_id: pair.into(),
            annotator_id: who.into(),
            category: c,
            timestamp: DateTime::UNIX_EPOCH,
        }
    }

    fn p(s: &str) -> Phrase {
        Phrase::new(s).unwrap()
    }

    // full-matrix recurrence, independent of the two-row implementation
    fn levenshtein_oracle(a: &str, b: &str) -> usize {
        let a: Vec<char> = a.chars().collect();
        let b: Vec<char> = b.chars().collect();
        let mut d = vec![vec![0usize; b.len() + 1]; a.len() + 1];
        for (i, row) in d.iter_mut().enumerate() {
            row[0] = i;
        }
        for (j, cell) in d[0].iter_mut().enumerate() {
            *cell = j;
        }
        for i in 1..=a.len() {
            for j in 1..=b.len() {
                let cost = if a[i - 1] == b[j - 1] { 0 } else { 1 };
                d[i][j] = (d[i - 1][j] + 1).min(d[i][j - 1] + 1).min(d[i - 1][j - 1] + cost);
            }
        }
        d[a.len()][b.len()]
    }

    #[test]
    fn adjudication_examples() {
        let cases = [
            (Good, MostlyGood, AdjudicatedLabel::MostlyGood),
            (MostlyGood, MostlyBad, AdjudicatedLabel::MostlyBad),
            (MostlyGood, Bad, AdjudicatedLabel::DiscardedDisagree),
            (Good, Good, AdjudicatedLabel::Good),
            (Bad, Trash, AdjudicatedLabel::DiscardedTrash),
        ];
        for (a, b, want) in cases {
            let got = adjudicate(&judgment("p", "x", a), &judgment("p", "y", b)).unwrap();
            assert_eq!(got, want, "{a} + {b}");
        }
    }

    #[test]
    fn adjudication_errors() {
        assert!(matches!(
            adjudicate(&judgment("p", "x", Good), &judgment("p", "x", Good)),
            Err(Error::SameAnnotator(_))
        ));
        assert!(matches!(
            adjudicate(&judgment("p", "x", Good), &judgment("q", "y", Good)),
            Err(Error::PairMismatch(..))
        ));
    }

    #[test]
    fn buckets_partition_all_combinations() {
        let mut per_bucket: HashMap<Bucket, usize> = HashMap::new();
        for a in AnnotationCategory::ALL {
            for b in AnnotationCategory::ALL {
                let bucket = Bucket::of(a, b);
                assert_eq!(bucket, Bucket::of(b, a));
                assert_eq!(bucket.label(), adjudicate_categories(a, b));
                *per_bucket.entry(bucket).or_default() += 1;
            }
        }
        assert_eq!(per_bucket.len(), 9);
        assert_eq!(per_bucket.values().sum::<usize>(), 25);
        assert_eq!(per_bucket[&Bucket::Trash], 9);
        assert_eq!(per_bucket[&Bucket::Disagree], 6);
        assert_eq!(per_bucket[&Bucket::GreenGreen], 1);
        assert_eq!(per_bucket[&Bucket::GreenLightGreen], 2);
    }

    #[test]
    fn edit_filter_examples() {
        let long_a = p(&"a".repeat(30));
        let mixed = p(&format!("{}{}", "a".repeat(18), "b".repeat(12)));
        assert_eq!(levenshtein_oracle(&long_a, &mixed), 12);
        assert!(relative_edit_filter(&long_a, &mixed));
        let one_less = p(&format!("{}{}", "a".repeat(19), "b".repeat(11)));
        assert!(!relative_edit_filter(&long_a, &one_less));

        let e1 = p("He is not your friend.");
        let e2 = p("He isn't your friend.");
        assert_eq!(e2.char_len(), 21);
        assert_eq!(levenshtein_oracle(&e1, &e2), 2);
        assert!(!relative_edit_filter(&e1, &e2));
        assert!(!relative_edit_filter(&e1, &e1));
    }

    #[test]
    fn short_sentences_use_higher_factor() {
        // L = 10 < 24: needs d >= 6
        let a = p("abcdefghij");
        let five = p("abcdeVWXYZ");
        let six = p("abcdUVWXYZ");
        assert!(!relative_edit_filter(&a, &five));
        assert!(relative_edit_filter(&a, &six));
        let lenient = EditFilter {
            short_threshold: 0.4,
            ..EditFilter::default()
        };
        assert!(lenient.accepts(&a, &five));
    }

    #[test]
    fn split_excludes_training_and_dev() {
        let p1 = PairKey::from_raw("a", "b").unwrap();
        let p2 = PairKey::from_raw("c", "d").unwrap();
        let p3 = PairKey::from_raw("e", "f").unwrap();
        let cands = vec![p1.clone(), p2.clone(), p3.clone()];
        let train: HashSet<_> = [p2.clone()].into();
        let none = HashSet::new();
        assert_eq!(
            disjoint_split(&cands, &train, &none, SplitTarget::Dev),
            vec![p1.clone(), p3.clone()]
        );
        let dev: HashSet<_> = [p1.clone()].into();
        assert!(disjoint_split(std::slice::from_ref(&p1), &none, &dev, SplitTarget::Test).is_empty());
        assert_eq!(disjoint_split(&cands, &none, &none, SplitTarget::Test), cands);
    }

    fn adjudicated(i: usize, a: AnnotationCategory, b: AnnotationCategory) -> AdjudicatedPair {
        let pair = PairKey::from_raw(&format!("s{i} one"), &format!("s{i} two")).unwrap();
        let id = pair.pair_id();
        AdjudicatedPair::new(pair, &judgment(&id, "x", a), &judgment(&id, "y", b)).unwrap()
    }

    #[test]
    fn export_all_green() {
        let items: Vec<_> = (0..10).map(|i| adjudicated(i, Good, Good)).collect();
        let set = export_sets(&items, SplitTarget::Dev);
        assert_eq!(set.rows.len(), 10);
        assert_eq!(set.summary.get(Bucket::GreenGreen), 10);
        assert_eq!(set.summary.total(), 10);
    }

    #[test]
    fn export_all_combinations_matches_hand_tally() {
        let mut items = Vec::new();
        let mut i = 0;
        for a in AnnotationCategory::ALL {
            for b in AnnotationCategory::ALL {
                items.push(adjudicated(i, a, b));
                i += 1;
            }
        }
        let set = export_sets(&items, SplitTarget::Test);
        let expected = [1, 2, 1, 2, 1, 2, 1, 9, 6];
        for (b, want) in Bucket::ALL.into_iter().zip(expected) {
            assert_eq!(set.summary.get(b), want, "{b}");
        }
        assert_eq!(set.rows.len(), 25 - 9 - 6);

        let dir = tempfile::tempdir().unwrap();
        let path = dir.path().join("test.tsv");
        set.save(&path).unwrap();
        assert_eq!(AnnotatedSet::load(&path).unwrap(), set);
        let adj = dir.path().join("adj.tsv");
        save_adjudicated(&adj, &items).unwrap();
        assert_eq!(load_adjudicated(&adj).unwrap(), items);
    }

    #[test]
    fn export_empty() {
        let set = export_sets(&[], SplitTarget::Dev);
        assert!(set.rows.is_empty());
        assert_eq!(set.summary.total(), 0);
    }

    #[test]
    fn category_wire_names() {
        for c in AnnotationCategory::ALL {
            assert_eq!(c.as_str().parse::<AnnotationCategory>().unwrap(), c);
            assert_eq!(serde_json::to_string(&c).unwrap(), format!("\"{}\"", c.as_str()));
        }
    }

    proptest! {
        #[test]
        fn levenshtein_matches_oracle(a in "[abc ]{0,12}", b in "[abc ]{0,12}") {
            prop_assert_eq!(levenshtein(&a, &b), levenshtein_oracle(&a, &b));
        }

        #[test]
        fn edit_filter_is_symmetric(a in "[a-e]{1,40}", b in "[a-e]{1,40}") {
            let (a, b) = (p(&a), p(&b));
            prop_assert_eq!(relative_edit_filter(&a, &b), relative_edit_filter(&b, &a));
        }
    }
}
