//! Co-occurrence tables over aligned lines.
//!
//! A table holds `c(e)`, `c(f)`, `c(e,f)` and the line total `N` for one
//! pivot corpus, or for several corpora merged into one bitext. Pivot phrases
//! are keyed by `(language, text)` so equal strings from different pivot
//! languages never share counts. Counts are exact integers; probabilities are
//! computed on demand.

use std::collections::{BTreeSet, HashMap};
use std::io::{BufRead, Write};
use std::path::Path;

use crate::bitext::AlignedLine;
use crate::error::{Error, Result};
use crate::io;
use crate::phrase::{Lang, Phrase};

/// A pivot-side phrase namespaced by its language.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct PivotKey {
    pub lang: Lang,
    pub text: Phrase,
}

#[derive(Clone, Debug, PartialEq)]
pub struct CooccurrenceTable {
    pivot_langs: BTreeSet<Lang>,
    n_lines: u64,
    targets: Vec<Phrase>,
    target_index: HashMap<Phrase, u32>,
    target_counts: Vec<u64>,
    pivots: Vec<PivotKey>,
    pivot_index: HashMap<Lang, HashMap<Phrase, u32>>,
    pivot_counts: Vec<u64>,
    // (pivot id, c(e,f)) sorted by pivot id
    by_target: Vec<Vec<(u32, u64)>>,
    // (target id, c(e,f)) sorted by target id
    by_pivot: Vec<Vec<(u32, u64)>>,
}

/// Accumulates joint counts; [`TableBuilder::finish`] freezes them into a
/// table whose ids follow byte order, so the result does not depend on
/// insertion order.
#[derive(Default)]
pub struct TableBuilder {
    n_lines: u64,
    targets: HashMap<Phrase, u32>,
    target_list: Vec<Phrase>,
    pivots: HashMap<Lang, HashMap<Phrase, u32>>,
    pivot_list: Vec<PivotKey>,
    joint: HashMap<(u32, u32), u64>,
}

impl TableBuilder {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn add_line(&mut self, line: &AlignedLine) {
        self.add_joint(&line.target, &line.pivot_lang, &line.pivot, 1);
    }

    /// Adds `count` aligned lines `(target, pivot)`.
    pub fn add_joint(&mut self, target: &Phrase, lang: &Lang, pivot: &Phrase, count: u64) {
        if count == 0 {
            return;
        }
        let t = match self.targets.get(target) {
            Some(&id) => id,
            None => {
                let id = self.target_list.len() as u32;
                self.target_list.push(target.clone());
                self.targets.insert(target.clone(), id);
                id
            }
        };
        let by_lang = match self.pivots.get_mut(lang) {
            Some(m) => m,
            None => self.pivots.entry(lang.clone()).or_default(),
        };
        let p = match by_lang.get(pivot) {
            Some(&id) => id,
            None => {
                let id = self.pivot_list.len() as u32;
                self.pivot_list.push(PivotKey {
                    lang: lang.clone(),
                    text: pivot.clone(),
                });
                by_lang.insert(pivot.clone(), id);
                id
            }
        };
        *self.joint.entry((t, p)).or_insert(0) += count;
        self.n_lines += count;
    }

    pub fn finish(self) -> Result<CooccurrenceTable> {
        if self.n_lines == 0 {
            return Err(Error::EmptyCorpus);
        }
        let (targets, target_remap) = sort_and_remap(self.target_list);
        let (pivots, pivot_remap) = sort_and_remap(self.pivot_list);

        let mut by_target = vec![Vec::new(); targets.len()];
        let mut by_pivot = vec![Vec::new(); pivots.len()];
        let mut target_counts = vec![0u64; targets.len()];
        let mut pivot_counts = vec![0u64; pivots.len()];
        for ((t, p), c) in self.joint {
            let t = target_remap[t as usize];
            let p = pivot_remap[p as usize];
            by_target[t as usize].push((p, c));
            by_pivot[p as usize].push((t, c));
            target_counts[t as usize] += c;
            pivot_counts[p as usize] += c;
        }
        for row in by_target.iter_mut().chain(by_pivot.iter_mut()) {
            row.sort_unstable_by_key(|&(id, _)| id);
        }

        let target_index = targets
            .iter()
            .enumerate()
            .map(|(i, p)| (p.clone(), i as u32))
            .collect();
        let mut pivot_index: HashMap<Lang, HashMap<Phrase, u32>> = HashMap::new();
        for (i, k) in pivots.iter().enumerate() {
            pivot_index
                .entry(k.lang.clone())
                .or_default()
                .insert(k.text.clone(), i as u32);
        }
        let pivot_langs = pivots.iter().map(|k| k.lang.clone()).collect();

        Ok(CooccurrenceTable {
            pivot_langs,
            n_lines: self.n_lines,
            targets,
            target_index,
            target_counts,
            pivots,
            pivot_index,
            pivot_counts,
            by_target,
            by_pivot,
        })
    }
}

fn sort_and_remap<T: Ord>(items: Vec<T>) -> (Vec<T>, Vec<u32>) {
    let mut order: Vec<(T, u32)> = items
        .into_iter()
        .enumerate()
        .map(|(i, x)| (x, i as u32))
        .collect();
    order.sort_unstable_by(|a, b| a.0.cmp(&b.0));
    let mut remap = vec![0u32; order.len()];
    let mut sorted = Vec::with_capacity(order.len());
    for (new_id, (item, old_id)) in order.into_iter().enumerate() {
        remap[old_id as usize] = new_id as u32;
        sorted.push(item);
    }
    (sorted, remap)
}

/// Counts one pivot corpus. All lines must share a pivot language.
pub fn build_table<'a, I>(lines: I) -> Result<CooccurrenceTable>
where
    I: IntoIterator<Item = &'a AlignedLine>,
{
    let mut builder = TableBuilder::new();
    let mut lang: Option<&Lang> = None;
    for line in lines {
        match lang {
            None => lang = Some(&line.pivot_lang),
            Some(l) if *l != line.pivot_lang => {
                return Err(Error::InvalidArgument(format!(
                    "mixed pivot languages in one table: {l} and {}",
                    line.pivot_lang
                )))
            }
            Some(_) => {}
        }
        builder.add_line(line);
    }
    builder.finish()
}

/// Sums tables into the concatenated-bitext table. Pivot keys stay
/// namespaced by language.
pub fn merge_tables<'a, I>(tables: I) -> Result<CooccurrenceTable>
where
    I: IntoIterator<Item = &'a CooccurrenceTable>,
{
    let mut builder = TableBuilder::new();
    for table in tables {
        for (t, row) in table.by_target.iter().enumerate() {
            let target = &table.targets[t];
            for &(p, c) in row {
                let key = &table.pivots[p as usize];
                builder.add_joint(target, &key.lang, &key.text, c);
            }
        }
    }
    builder.finish()
}

impl CooccurrenceTable {
    pub fn n_lines(&self) -> u64 {
        self.n_lines
    }

    pub fn pivot_langs(&self) -> &BTreeSet<Lang> {
        &self.pivot_langs
    }

    pub fn n_targets(&self) -> usize {
        self.targets.len()
    }

    pub fn n_pivots(&self) -> usize {
        self.pivots.len()
    }

    pub fn n_joint(&self) -> usize {
        self.by_target.iter().map(Vec::len).sum()
    }

    /// Target phrases in byte order; the index is the target id.
    pub fn targets(&self) -> &[Phrase] {
        &self.targets
    }

    pub fn pivots(&self) -> &[PivotKey] {
        &self.pivots
    }

    pub fn target_id(&self, e: &str) -> Option<u32> {
        self.target_index.get(e).copied()
    }

    pub fn pivot_id(&self, lang: &Lang, f: &str) -> Option<u32> {
        self.pivot_index.get(lang)?.get(f).copied()
    }

    pub fn target_count_by_id(&self, id: u32) -> u64 {
        self.target_counts[id as usize]
    }

    pub fn pivot_count_by_id(&self, id: u32) -> u64 {
        self.pivot_counts[id as usize]
    }

    /// `(pivot id, c(e,f))` for a target id, sorted by pivot id.
    pub fn row_by_target(&self, id: u32) -> &[(u32, u64)] {
        &self.by_target[id as usize]
    }

    /// `(target id, c(e,f))` for a pivot id, sorted by target id.
    pub fn row_by_pivot(&self, id: u32) -> &[(u32, u64)] {
        &self.by_pivot[id as usize]
    }

    /// `c(e)`; zero if unseen.
    pub fn target_count(&self, e: &str) -> u64 {
        self.target_id(e).map_or(0, |id| self.target_counts[id as usize])
    }

    /// `c(f)`; zero if unseen.
    pub fn pivot_count(&self, lang: &Lang, f: &str) -> u64 {
        self.pivot_id(lang, f)
            .map_or(0, |id| self.pivot_counts[id as usize])
    }

    pub fn joint_count_by_id(&self, target: u32, pivot: u32) -> u64 {
        let row = &self.by_target[target as usize];
        match row.binary_search_by_key(&pivot, |&(p, _)| p) {
            Ok(i) => row[i].1,
            Err(_) => 0,
        }
    }

    /// `c(e,f)`; zero if unseen.
    pub fn joint_count(&self, e: &str, lang: &Lang, f: &str) -> u64 {
        match (self.target_id(e), self.pivot_id(lang, f)) {
            (Some(t), Some(p)) => self.joint_count_by_id(t, p),
            _ => 0,
        }
    }

    /// Every pivot phrase `f` with `c(e,f) >= 1`, with that count. Empty if `e` is unseen.
    pub fn translations_of(&self, e: &str) -> Vec<(&PivotKey, u64)> {
        match self.target_id(e) {
            Some(id) => self.by_target[id as usize]
                .iter()
                .map(|&(p, c)| (&self.pivots[p as usize], c))
                .collect(),
            None => Vec::new(),
        }
    }

    /// `P(e) = c(e)/N`.
    pub fn p_target(&self, e: &str) -> Option<f64> {
        let c = self.target_count(e);
        (c > 0).then(|| c as f64 / self.n_lines as f64)
    }

    /// `P(f|e) = c(e,f)/c(e)`.
    pub fn p_pivot_given_target(&self, lang: &Lang, f: &str, e: &str) -> Option<f64> {
        let ce = self.target_count(e);
        (ce > 0).then(|| self.joint_count(e, lang, f) as f64 / ce as f64)
    }

    /// `P(e|f) = c(e,f)/c(f)`.
    pub fn p_target_given_pivot(&self, e: &str, lang: &Lang, f: &str) -> Option<f64> {
        let cf = self.pivot_count(lang, f);
        (cf > 0).then(|| self.joint_count(e, lang, f) as f64 / cf as f64)
    }

    /// Marginal consistency and positivity checks. Used after loading a file.
    pub fn check_invariants(&self) -> Result<()> {
        let fail = |msg: String| Err(Error::InvalidArgument(format!("inconsistent table: {msg}")));
        let sum_t: u64 = self.target_counts.iter().sum();
        let sum_p: u64 = self.pivot_counts.iter().sum();
        let sum_j: u64 = self.by_target.iter().flatten().map(|&(_, c)| c).sum();
        if sum_t != self.n_lines || sum_p != self.n_lines || sum_j != self.n_lines {
            return fail(format!(
                "N={} but sums are target={sum_t} pivot={sum_p} joint={sum_j}",
                self.n_lines
            ));
        }
        for (t, row) in self.by_target.iter().enumerate() {
            let s: u64 = row.iter().map(|&(_, c)| c).sum();
            if s != self.target_counts[t] || s == 0 {
                return fail(format!("row sum mismatch for {:?}", self.targets[t]));
            }
        }
        for (p, row) in self.by_pivot.iter().enumerate() {
            let s: u64 = row.iter().map(|&(_, c)| c).sum();
            if s != self.pivot_counts[p] || s == 0 {
                return fail(format!("column sum mismatch for {:?}", self.pivots[p].text));
            }
        }
        Ok(())
    }

    /// Writes the `#N` / `#TARGET` / `#PIVOT` / `#JOINT` text format.
    /// Output is sorted by phrase bytes and therefore deterministic.
    pub fn write_to<W: Write>(&self, w: &mut W) -> Result<()> {
        io::write_header(w, &[])?;
        writeln!(w, "#N")?;
        writeln!(w, "{}", self.n_lines)?;
        writeln!(w, "#TARGET")?;
        for (t, c) in self.targets.iter().zip(&self.target_counts) {
            writeln!(w, "{t}\t{c}")?;
        }
        writeln!(w, "#PIVOT")?;
        for (k, c) in self.pivots.iter().zip(&self.pivot_counts) {
            writeln!(w, "{}\t{}\t{c}", k.lang, k.text)?;
        }
        writeln!(w, "#JOINT")?;
        for (t, row) in self.by_target.iter().enumerate() {
            for &(p, c) in row {
                let k = &self.pivots[p as usize];
                writeln!(w, "{}\t{}\t{}\t{c}", self.targets[t], k.lang, k.text)?;
            }
        }
        w.flush()?;
        Ok(())
    }

    pub fn save(&self, path: &Path) -> Result<()> {
        let mut w = io::create(path)?;
        self.write_to(&mut w)
    }

    /// Reads the text format and verifies the marginals against the joint counts.
    pub fn read_from<R: BufRead>(reader: R, path: &Path) -> Result<CooccurrenceTable> {
        #[derive(PartialEq)]
        enum Section {
            None,
            N,
            Target,
            Pivot,
            Joint,
        }
        let mut section = Section::None;
        let mut n: Option<u64> = None;
        let mut target_counts: HashMap<String, u64> = HashMap::new();
        let mut pivot_counts: HashMap<(String, String), u64> = HashMap::new();
        let mut builder = TableBuilder::new();
        let count = |s: &str, line: usize| -> Result<u64> {
            s.parse::<u64>()
                .ok()
                .filter(|&c| c > 0)
                .ok_or_else(|| Error::parse(path, line, format!("bad count {s:?}")))
        };
        for (idx, line) in reader.lines().enumerate() {
            let line_no = idx + 1;
            let line = line?;
            match line.as_str() {
                "#N" => {
                    section = Section::N;
                    continue;
                }
                "#TARGET" => {
                    section = Section::Target;
                    continue;
                }
                "#PIVOT" => {
                    section = Section::Pivot;
                    continue;
                }
                "#JOINT" => {
                    section = Section::Joint;
                    continue;
                }
                l if l.is_empty() || io::is_comment(l) => continue,
                _ => {}
            }
            let fields: Vec<&str> = line.split('\t').collect();
            match (&section, fields.as_slice()) {
                (Section::N, [v]) => n = Some(count(v, line_no)?),
                (Section::Target, [e, c]) => {
                    target_counts.insert(e.to_string(), count(c, line_no)?);
                }
                (Section::Pivot, [lang, f, c]) => {
                    pivot_counts.insert((lang.to_string(), f.to_string()), count(c, line_no)?);
                }
                (Section::Joint, [e, lang, f, c]) => {
                    let c = count(c, line_no)?;
                    let lang = Lang::new(lang).map_err(|e| Error::parse(path, line_no, e.to_string()))?;
                    let e = Phrase::new(e).ok_or_else(|| Error::parse(path, line_no, "empty phrase"))?;
                    let f = Phrase::new(f).ok_or_else(|| Error::parse(path, line_no, "empty phrase"))?;
                    builder.add_joint(&e, &lang, &f, c);
                }
                _ => return Err(Error::parse(path, line_no, "unexpected line for section")),
            }
        }
        let n = n.ok_or_else(|| Error::parse(path, 0, "missing #N section"))?;
        let table = builder.finish()?;
        if table.n_lines != n {
            return Err(Error::parse(path, 0, format!("#N is {n} but joint counts sum to {}", table.n_lines)));
        }
        if target_counts.len() != table.targets.len() || pivot_counts.len() != table.pivots.len() {
            return Err(Error::parse(path, 0, "marginal sections do not match joint section"));
        }
        for (t, c) in table.targets.iter().zip(&table.target_counts) {
            if target_counts.get(t.as_str()) != Some(c) {
                return Err(Error::parse(path, 0, format!("target count mismatch for {t:?}")));
            }
        }
        for (k, c) in table.pivots.iter().zip(&table.pivot_counts) {
            let key = (k.lang.to_string(), k.text.to_string());
            if pivot_counts.get(&key) != Some(c) {
                return Err(Error::parse(path, 0, format!("pivot count mismatch for {:?}", k.text)));
            }
        }
        Ok(table)
    }

    pub fn load(path: &Path) -> Result<CooccurrenceTable> {
        let reader = io::open(path)?;
        Self::read_from(reader, path)
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn lines(lang: &str, pairs: &[(&str, &str)]) -> Vec<AlignedLine> {
        let lang = Lang::new(lang).unwrap();
        pairs
            .iter()
            .map(|(e, f)| AlignedLine {
                target: Phrase::new(e).unwrap(),
                pivot: Phrase::new(f).unwrap(),
                pivot_lang: lang.clone(),
                doc_year: None,
            })
            .collect()
    }

    fn t1() -> Vec<AlignedLine> {
        lines("fr", &[("a", "x"), ("a", "x"), ("b", "x"), ("b", "y"), ("c", "y")])
    }

    fn t2() -> Vec<AlignedLine> {
        lines("sv", &[("a", "u"), ("b", "u"), ("c", "v")])
    }

    // independent count: linear scans over the raw lines
    fn brute(lines: &[AlignedLine], e: Option<&str>, f: Option<&str>) -> u64 {
        lines
            .iter()
            .filter(|l| e.is_none_or(|e| l.target.as_str() == e))
            .filter(|l| f.is_none_or(|f| l.pivot.as_str() == f))
            .count() as u64
    }

    #[test]
    fn t1_counts_match_brute_force() {
        let raw = t1();
        let t = build_table(&raw).unwrap();
        let fr = Lang::new("fr").unwrap();
        assert_eq!(t.n_lines(), 5);
        assert_eq!(t.target_count("a"), brute(&raw, Some("a"), None));
        assert_eq!(t.target_count("a"), 2);
        assert_eq!(t.pivot_count(&fr, "x"), 3);
        assert_eq!(t.joint_count("a", &fr, "x"), 2);
        assert_eq!(t.joint_count("a", &fr, "x"), brute(&raw, Some("a"), Some("x")));
        let sum: u64 = t.targets().iter().map(|e| t.target_count(e)).sum();
        assert_eq!(sum, 5);
        t.check_invariants().unwrap();
    }

    #[test]
    fn single_line_table() {
        let t = build_table(&lines("fr", &[("e", "f")])).unwrap();
        let fr = Lang::new("fr").unwrap();
        assert_eq!(t.n_lines(), 1);
        assert_eq!(t.target_count("e"), 1);
        assert_eq!(t.pivot_count(&fr, "f"), 1);
        assert_eq!(t.joint_count("e", &fr, "f"), 1);
    }

    #[test]
    fn empty_corpus_is_an_error() {
        assert!(matches!(build_table(&[]), Err(Error::EmptyCorpus)));
        assert!(matches!(merge_tables(&[]), Err(Error::EmptyCorpus)));
    }

    #[test]
    fn mixed_languages_rejected() {
        let mut raw = t1();
        raw.extend(t2());
        assert!(matches!(build_table(&raw), Err(Error::InvalidArgument(_))));
    }

    #[test]
    fn translations() {
        let t = build_table(&t1()).unwrap();
        let tr = |e: &str| -> Vec<(String, u64)> {
            t.translations_of(e)
                .into_iter()
                .map(|(k, c)| (k.text.to_string(), c))
                .collect()
        };
        assert_eq!(tr("b"), vec![("x".into(), 1), ("y".into(), 1)]);
        assert_eq!(tr("a"), vec![("x".into(), 2)]);
        assert!(tr("unseen").is_empty());
    }

    #[test]
    fn merge_sums_counts() {
        let a = build_table(&t1()).unwrap();
        let b = build_table(&t2()).unwrap();
        assert_eq!(merge_tables([&a]).unwrap(), a);
        let m = merge_tables([&a, &b]).unwrap();
        let fr = Lang::new("fr").unwrap();
        let sv = Lang::new("sv").unwrap();
        assert_eq!(m.n_lines(), 8);
        assert_eq!(m.target_count("a"), 3);
        assert_eq!(m.joint_count("a", &fr, "x"), 2);
        assert_eq!(m.joint_count("a", &sv, "u"), 1);
        assert_eq!(m.pivot_langs().len(), 2);
    }

    #[test]
    fn same_pivot_string_in_two_languages_stays_distinct() {
        let a = build_table(&lines("fr", &[("a", "ok")])).unwrap();
        let b = build_table(&lines("sv", &[("b", "ok")])).unwrap();
        let m = merge_tables([&a, &b]).unwrap();
        assert_eq!(m.n_pivots(), 2);
        assert_eq!(m.pivot_count(&Lang::new("fr").unwrap(), "ok"), 1);
    }

    #[test]
    fn probability_view() {
        let t = build_table(&t1()).unwrap();
        let fr = Lang::new("fr").unwrap();
        assert_eq!(t.p_target("a"), Some(0.4));
        assert_eq!(t.p_pivot_given_target(&fr, "x", "b"), Some(0.5));
        assert_eq!(t.p_target_given_pivot("a", &fr, "x"), Some(2.0 / 3.0));
        assert_eq!(t.p_target("zzz"), None);
    }

    #[test]
    fn text_format_roundtrip() {
        let a = build_table(&t1()).unwrap();
        let b = build_table(&t2()).unwrap();
        let m = merge_tables([&a, &b]).unwrap();
        let mut buf = Vec::new();
        m.write_to(&mut buf).unwrap();
        let back = CooccurrenceTable::read_from(buf.as_slice(), Path::new("mem")).unwrap();
        assert_eq!(back, m);
        let text = String::from_utf8(buf).unwrap();
        assert!(text.contains("#N\n8\n#TARGET\na\t3\n"));
    }

    #[test]
    fn corrupt_marginals_rejected() {
        let text = "#N\n2\n#TARGET\na\t2\n#PIVOT\nfr\tx\t1\n#JOINT\na\tfr\tx\t2\n";
        assert!(CooccurrenceTable::read_from(text.as_bytes(), Path::new("mem")).is_err());
    }

    fn arb_lines() -> impl Strategy<Value = Vec<(u8, u8)>> {
        prop::collection::vec((0u8..12, 0u8..8), 1..80)
    }

    fn to_lines(raw: &[(u8, u8)]) -> Vec<AlignedLine> {
        let pairs: Vec<(String, String)> = raw
            .iter()
            .map(|(e, f)| (format!("e{e}"), format!("f{f}")))
            .collect();
        let refs: Vec<(&str, &str)> = pairs.iter().map(|(a, b)| (a.as_str(), b.as_str())).collect();
        lines("fr", &refs)
    }

    proptest! {
        #[test]
        fn marginals_are_consistent(raw in arb_lines()) {
            let t = build_table(&to_lines(&raw)).unwrap();
            t.check_invariants().unwrap();
            for id in 0..t.n_targets() as u32 {
                for &(p, c) in t.row_by_target(id) {
                    prop_assert!(c <= t.target_count_by_id(id).min(t.pivot_count_by_id(p)));
                }
            }
        }

        #[test]
        fn permutation_invariant(raw in arb_lines(), seed in any::<u64>()) {
            use rand::{seq::SliceRandom, SeedableRng};
            let lines = to_lines(&raw);
            let mut shuffled = lines.clone();
            shuffled.shuffle(&mut rand_chacha::ChaCha8Rng::seed_from_u64(seed));
            prop_assert_eq!(build_table(&lines).unwrap(), build_table(&shuffled).unwrap());
        }

        #[test]
        fn merge_equals_build_over_concatenation(a in arb_lines(), b in arb_lines()) {
            let la = to_lines(&a);
            let mut lb = to_lines(&b);
            let sv = Lang::new("sv").unwrap();
            for l in &mut lb {
                l.pivot_lang = sv.clone();
            }
            let merged = merge_tables([&build_table(&la).unwrap(), &build_table(&lb).unwrap()]).unwrap();
            let mut builder = TableBuilder::new();
            for l in la.iter().chain(&lb) {
                builder.add_line(l);
            }
            prop_assert_eq!(merged, builder.finish().unwrap());
        }
    }
}
