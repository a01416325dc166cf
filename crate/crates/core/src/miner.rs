//! Candidate enumeration, ranking, and training-set quality estimation.
//!
//! Candidates are unordered pairs of distinct target phrases that share at
//! least one pivot translation. A ranking orders them by score, highest
//! first, with ties broken by the canonical pair bytes. A sparse annotated
//! sample placed on that ranking gives a cumulative quality curve; the
//! cut-off size for an accuracy level is the rank of the last annotated pair
//! at which the good-or-mostly-good share still meets it.

use std::collections::{BTreeMap, BTreeSet, HashMap, HashSet};
use std::io::Write;
use std::path::Path;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::annotation::{AnnotationCategory, CategoryCounts};
use crate::error::{Error, Result};
use crate::io;
use crate::phrase::{Lang, PairKey, Phrase};
use crate::scoring::{SchemeId, Scorer};
use crate::stats::CooccurrenceTable;

#[derive(Clone, Debug, PartialEq)]
pub struct CandidatePair {
    pub pair: PairKey,
    pub scores: BTreeMap<SchemeId, f64>,
    /// Pivot languages in which the two phrases share a translation.
    pub support_langs: BTreeSet<Lang>,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedEntry {
    pub pair: PairKey,
    pub score: f64,
    pub n_support: usize,
}

#[derive(Clone, Debug, PartialEq)]
pub struct RankedList {
    pub scheme: SchemeId,
    pub entries: Vec<RankedEntry>,
}

/// Every pair of distinct target phrases sharing a pivot phrase in some
/// table, supported by at least `min_support` pivot languages. Output is in
/// canonical pair order.
pub fn enumerate_candidates(
    tables: &[CooccurrenceTable],
    min_support: usize,
) -> Result<Vec<CandidatePair>> {
    if min_support == 0 {
        return Err(Error::InvalidArgument("min_support must be at least 1".into()));
    }
    let langs: Vec<Lang> = tables
        .iter()
        .flat_map(|t| t.pivot_langs().iter().cloned())
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    if langs.len() > 64 {
        return Err(Error::InvalidArgument(format!(
            "at most 64 pivot languages supported, got {}",
            langs.len()
        )));
    }
    let mut targets: Vec<&Phrase> = tables.iter().flat_map(|t| t.targets()).collect();
    targets.sort_unstable();
    targets.dedup();

    let mut support: HashMap<(u32, u32), u64> = HashMap::new();
    for table in tables {
        // both id spaces follow byte order, so the local->global map is monotone
        let global: Vec<u32> = table
            .targets()
            .iter()
            .map(|p| targets.binary_search(&p).expect("target indexed") as u32)
            .collect();
        for (pid, key) in table.pivots().iter().enumerate() {
            let bit = 1u64 << langs.binary_search(&key.lang).expect("lang indexed");
            let row = table.row_by_pivot(pid as u32);
            for (i, &(a, _)) in row.iter().enumerate() {
                for &(b, _) in &row[i + 1..] {
                    *support
                        .entry((global[a as usize], global[b as usize]))
                        .or_insert(0) |= bit;
                }
            }
        }
    }

    let mut keys: Vec<((u32, u32), u64)> = support
        .into_iter()
        .filter(|&(_, mask)| mask.count_ones() as usize >= min_support)
        .collect();
    keys.sort_unstable_by_key(|&(k, _)| k);
    Ok(keys
        .into_iter()
        .map(|((a, b), mask)| CandidatePair {
            pair: PairKey::new(targets[a as usize].clone(), targets[b as usize].clone())
                .expect("distinct targets"),
            scores: BTreeMap::new(),
            support_langs: langs
                .iter()
                .enumerate()
                .filter(|(i, _)| mask & (1 << i) != 0)
                .map(|(_, l)| l.clone())
                .collect(),
        })
        .collect())
}

/// Fills in `scores[scheme]` for every candidate, in parallel.
pub fn score_candidates(
    candidates: &mut [CandidatePair],
    tables: &[CooccurrenceTable],
    scheme: SchemeId,
) -> Result<()> {
    let scorer = Scorer::new(scheme, tables)?;
    candidates.par_iter_mut().try_for_each(|c| {
        let v = scorer.score(c.pair.lo(), c.pair.hi())?;
        c.scores.insert(scheme, v);
        Ok(())
    })
}

/// Orders entries by score descending, then canonical pair ascending.
pub fn sort_entries(entries: &mut [RankedEntry]) {
    entries.par_sort_unstable_by(|a, b| b.score.total_cmp(&a.score).then_with(|| a.pair.cmp(&b.pair)));
}

/// Scores and orders candidates. `cond_prob` is refused because it is asymmetric.
pub fn rank(
    candidates: &[CandidatePair],
    tables: &[CooccurrenceTable],
    scheme: SchemeId,
) -> Result<RankedList> {
    if !scheme.is_symmetric() {
        return Err(Error::AsymmetricScheme(scheme));
    }
    let mut seen = HashSet::with_capacity(candidates.len());
    for c in candidates {
        if !seen.insert(&c.pair) {
            return Err(Error::DuplicatePair(c.pair.lo().to_string(), c.pair.hi().to_string()));
        }
    }
    let scorer = Scorer::new(scheme, tables)?;
    let mut entries = candidates
        .par_iter()
        .map(|c| {
            Ok(RankedEntry {
                pair: c.pair.clone(),
                score: scorer.score(c.pair.lo(), c.pair.hi())?,
                n_support: c.support_langs.len(),
            })
        })
        .collect::<Result<Vec<_>>>()?;
    sort_entries(&mut entries);
    Ok(RankedList { scheme, entries })
}

impl RankedList {
    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    /// Columns: rank, score, n_support_langs, phrase1, phrase2.
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = io::create(path)?;
        io::write_header(&mut w, &[("scheme", self.scheme.to_string())])?;
        for (i, e) in self.entries.iter().enumerate() {
            writeln!(
                w,
                "{}\t{}\t{}\t{}\t{}",
                i + 1,
                e.score,
                e.n_support,
                e.pair.lo(),
                e.pair.hi()
            )?;
        }
        w.flush()?;
        Ok(())
    }

    pub fn load(path: &Path) -> Result<RankedList> {
        let lines = io::read_lines(path)?;
        let scheme: SchemeId = io::header_meta(&lines)
            .get("scheme")
            .ok_or_else(|| Error::parse(path, 1, "missing #scheme= header"))?
            .parse()?;
        let mut entries = Vec::new();
        for (idx, line) in lines.iter().enumerate() {
            if line.is_empty() || io::is_comment(line) {
                continue;
            }
            let bad = |msg: &str| Error::parse(path, idx + 1, msg.to_string());
            let f: Vec<&str> = line.split('\t').collect();
            let [rank, score, n, a, b] = f.as_slice() else {
                return Err(bad("expected 5 fields"));
            };
            if rank.parse::<usize>().ok() != Some(entries.len() + 1) {
                return Err(bad("ranks must run 1, 2, 3, ..."));
            }
            entries.push(RankedEntry {
                pair: PairKey::from_raw(a, b).ok_or_else(|| bad("identity or empty pair"))?,
                score: score.parse().map_err(|_| bad("bad score"))?,
                n_support: n.parse().map_err(|_| bad("bad support count"))?,
            });
        }
        Ok(RankedList { scheme, entries })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CurvePoint {
    /// 1-based position in the full ranking.
    pub rank: usize,
    /// Cumulative category counts among annotated pairs up to `rank`.
    pub counts: CategoryCounts,
}

impl CurvePoint {
    pub fn fraction(&self, category: AnnotationCategory) -> f64 {
        self.counts.get(category) as f64 / self.counts.total() as f64
    }

    /// Share of good plus mostly-good pairs.
    pub fn acceptable_fraction(&self) -> f64 {
        self.counts.acceptable() as f64 / self.counts.total() as f64
    }
}

#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct QualityCurve {
    pub points: Vec<CurvePoint>,
}

/// Walks the ranking and emits one point per annotated pair with the
/// cumulative category counts so far. Trash judgments count towards the
/// denominator only.
pub fn quality_curve(
    ranked: &RankedList,
    sample: &HashMap<PairKey, AnnotationCategory>,
) -> Result<QualityCurve> {
    let mut counts = CategoryCounts::default();
    let mut points = Vec::with_capacity(sample.len());
    for (i, e) in ranked.entries.iter().enumerate() {
        if let Some(&cat) = sample.get(&e.pair) {
            counts.add(cat);
            points.push(CurvePoint {
                rank: i + 1,
                counts,
            });
        }
    }
    if points.len() < sample.len() {
        let present: HashSet<&PairKey> = ranked.entries.iter().map(|e| &e.pair).collect();
        let missing = sample
            .keys()
            .filter(|k| !present.contains(k))
            .min()
            .expect("some pair missing");
        return Err(Error::MissingFromRanking(
            missing.lo().to_string(),
            missing.hi().to_string(),
        ));
    }
    Ok(QualityCurve { points })
}

/// Largest rank whose cumulative good-or-mostly-good share is at least
/// `threshold`, which must lie in (0, 1].
pub fn cutoff_size(curve: &QualityCurve, threshold: f64) -> Option<usize> {
    debug_assert!(threshold > 0.0 && threshold <= 1.0);
    curve
        .points
        .iter()
        .rev()
        .find(|p| p.acceptable_fraction() >= threshold)
        .map(|p| p.rank)
}

const CURVE_COLUMNS: &str =
    "rank\tannotated\tgood\tmostly_good\tmostly_bad\tbad\ttrash\tacceptable_frac\tgood_frac\tmostly_good_frac\tmostly_bad_frac\tbad_frac";

impl QualityCurve {
    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = io::create(path)?;
        io::write_header(&mut w, &[])?;
        writeln!(w, "#{}", CURVE_COLUMNS.replace('\t', " "))?;
        for p in &self.points {
            let c = &p.counts;
            write!(
                w,
                "{}\t{}\t{}\t{}\t{}\t{}\t{}\t{:.6}",
                p.rank,
                c.total(),
                c.good,
                c.mostly_good,
                c.mostly_bad,
                c.bad,
                c.trash,
                p.acceptable_fraction()
            )?;
            for cat in AnnotationCategory::SCALE {
                write!(w, "\t{:.6}", p.fraction(cat))?;
            }
            writeln!(w)?;
        }
        w.flush()?;
        Ok(())
    }

    /// Reads the counts back; the fraction columns are derived and ignored.
    pub fn load(path: &Path) -> Result<QualityCurve> {
        let mut points: Vec<CurvePoint> = Vec::new();
        for (idx, line) in io::read_lines(path)?.iter().enumerate() {
            if line.is_empty() || io::is_comment(line) {
                continue;
            }
            let bad = |msg: &str| Error::parse(path, idx + 1, msg.to_string());
            let f: Vec<u64> = line
                .split('\t')
                .take(7)
                .map(|x| x.parse::<u64>().map_err(|_| bad("bad integer field")))
                .collect::<Result<_>>()?;
            if f.len() != 7 {
                return Err(bad("expected at least 7 fields"));
            }
            let counts = CategoryCounts {
                good: f[2],
                mostly_good: f[3],
                mostly_bad: f[4],
                bad: f[5],
                trash: f[6],
            };
            if counts.total() != f[1] || counts.total() == 0 {
                return Err(bad("annotated count does not match category counts"));
            }
            let rank = f[0] as usize;
            if points.last().is_some_and(|p| p.rank >= rank) {
                return Err(bad("ranks must be strictly increasing"));
            }
            points.push(CurvePoint { rank, counts });
        }
        Ok(QualityCurve { points })
    }
}

/// Uniform sample of `n` ranked pairs without replacement, returned in rank order.
pub fn sample_uniform(ranked: &RankedList, n: usize, seed: u64) -> Vec<PairKey> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut idx = rand::seq::index::sample(&mut rng, ranked.len(), n.min(ranked.len())).into_vec();
    idx.sort_unstable();
    idx.into_iter().map(|i| ranked.entries[i].pair.clone()).collect()
}
