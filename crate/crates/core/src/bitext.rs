//! Sentence-aligned bitext lines: parsing, normalisation, partitioning.
//!
//! Line format: `target<TAB>pivot[<TAB>year]`. Malformed lines are skipped
//! and reported, never fatal.

use std::fmt;
use std::io::{self, BufRead, Write};

use serde::{Deserialize, Serialize};

use crate::phrase::{Lang, Phrase};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct AlignedLine {
    pub target: Phrase,
    pub pivot: Phrase,
    pub pivot_lang: Lang,
    pub doc_year: Option<u32>,
}

impl AlignedLine {
    /// Serialises in the input line format, without the trailing newline.
    pub fn to_line(&self) -> String {
        match self.doc_year {
            Some(year) => format!("{}\t{}\t{}", self.target, self.pivot, year),
            None => format!("{}\t{}", self.target, self.pivot),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Partition {
    Train,
    Dev,
    Test,
}

impl Partition {
    pub const ALL: [Partition; 3] = [Partition::Train, Partition::Dev, Partition::Test];

    pub fn as_str(self) -> &'static str {
        match self {
            Partition::Train => "train",
            Partition::Dev => "dev",
            Partition::Test => "test",
        }
    }
}

impl fmt::Display for Partition {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

/// Years ending in 4 are test, in 5 dev, the rest train.
pub fn assign_partition(doc_year: u32) -> Partition {
    match doc_year % 10 {
        4 => Partition::Test,
        5 => Partition::Dev,
        _ => Partition::Train,
    }
}

/// Lines without a year go to train.
pub fn partition_of(line: &AlignedLine) -> Partition {
    line.doc_year.map_or(Partition::Train, assign_partition)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum SkipReason {
    /// Not one or two tab separators.
    FieldCount(usize),
    EmptyTarget,
    EmptyPivot,
    BadYear,
}

impl fmt::Display for SkipReason {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SkipReason::FieldCount(n) => write!(f, "expected 2 or 3 fields, found {n}"),
            SkipReason::EmptyTarget => f.write_str("empty target side"),
            SkipReason::EmptyPivot => f.write_str("empty pivot side"),
            SkipReason::BadYear => f.write_str("year is not a non-negative integer"),
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Skip {
    /// 1-based.
    pub line_no: usize,
    pub reason: SkipReason,
}

#[derive(Clone, Debug, Default)]
pub struct ParsedBitext {
    pub lines: Vec<AlignedLine>,
    pub skipped: Vec<Skip>,
    pub total_lines: usize,
}

/// Parses a single line. `Err` carries the reason it was skipped.
pub fn parse_line(raw: &str, pivot_lang: &Lang) -> Result<AlignedLine, SkipReason> {
    let raw = raw.strip_suffix('\r').unwrap_or(raw);
    let mut fields = raw.split('\t');
    let target = fields.next().unwrap_or("");
    let pivot = fields.next();
    let year = fields.next();
    let extra = fields.count();
    let pivot = match (pivot, extra) {
        (Some(p), 0) => p,
        _ => {
            let n = raw.split('\t').count();
            return Err(SkipReason::FieldCount(n));
        }
    };
    let doc_year = match year {
        None => None,
        Some(y) => match y.trim().parse::<u32>() {
            Ok(y) => Some(y),
            Err(_) => return Err(SkipReason::BadYear),
        },
    };
    let target = Phrase::new(target).ok_or(SkipReason::EmptyTarget)?;
    let pivot = Phrase::new(pivot).ok_or(SkipReason::EmptyPivot)?;
    Ok(AlignedLine {
        target,
        pivot,
        pivot_lang: pivot_lang.clone(),
        doc_year,
    })
}

/// Parses every line of `reader`. Accepted plus skipped always equals `total_lines`.
pub fn parse_bitext<R: BufRead>(reader: R, pivot_lang: &Lang) -> io::Result<ParsedBitext> {
    let mut out = ParsedBitext::default();
    for (idx, raw) in reader.lines().enumerate() {
        let raw = raw?;
        out.total_lines += 1;
        match parse_line(&raw, pivot_lang) {
            Ok(line) => out.lines.push(line),
            Err(reason) => out.skipped.push(Skip {
                line_no: idx + 1,
                reason,
            }),
        }
    }
    Ok(out)
}

/// Collapses runs of consecutive identical lines. Returns the kept lines and
/// the number removed. Non-consecutive repeats are genuine count events and stay.
pub fn dedupe_lines(lines: Vec<AlignedLine>) -> (Vec<AlignedLine>, usize) {
    let before = lines.len();
    let mut out: Vec<AlignedLine> = Vec::with_capacity(before);
    for line in lines {
        if out.last() != Some(&line) {
            out.push(line);
        }
    }
    let removed = before - out.len();
    (out, removed)
}

pub fn write_bitext<'a, W, I>(mut writer: W, lines: I) -> io::Result<()>
where
    W: Write,
    I: IntoIterator<Item = &'a AlignedLine>,
{
    for line in lines {
        writeln!(writer, "{}", line.to_line())?;
    }
    writer.flush()
}

#[cfg(test)]
mod tests {
    use super::*;

    fn fr() -> Lang {
        Lang::new("fr").unwrap()
    }

    fn line(t: &str, p: &str) -> AlignedLine {
        AlignedLine {
            target: Phrase::new(t).unwrap(),
            pivot: Phrase::new(p).unwrap(),
            pivot_lang: fr(),
            doc_year: None,
        }
    }

    #[test]
    fn parses_with_year() {
        let l = parse_line("Sit down.\tAsseyez-vous.\t1994", &fr()).unwrap();
        assert_eq!(l.target.as_str(), "Sit down.");
        assert_eq!(l.pivot.as_str(), "Asseyez-vous.");
        assert_eq!(l.doc_year, Some(1994));
        assert_eq!(partition_of(&l), Partition::Test);
    }

    #[test]
    fn normalises_both_sides() {
        let l = parse_line("  a  b \tx", &fr()).unwrap();
        assert_eq!(l.target.as_str(), "a b");
        assert_eq!(l.pivot.as_str(), "x");
        assert_eq!(l.doc_year, None);
    }

    #[test]
    fn malformed_lines_are_skipped_with_line_numbers() {
        let input = "only-one-field\na\tb\n\t x\na\tb\tc\td\na\tb\tnineteen\n";
        let parsed = parse_bitext(input.as_bytes(), &fr()).unwrap();
        assert_eq!(parsed.total_lines, 5);
        assert_eq!(parsed.lines.len(), 1);
        let reasons: Vec<_> = parsed.skipped.iter().map(|s| (s.line_no, s.reason)).collect();
        assert_eq!(
            reasons,
            vec![
                (1, SkipReason::FieldCount(1)),
                (3, SkipReason::EmptyTarget),
                (4, SkipReason::FieldCount(4)),
                (5, SkipReason::BadYear),
            ]
        );
    }

    #[test]
    fn crlf_is_tolerated() {
        let l = parse_line("a\tb\t2001\r", &fr()).unwrap();
        assert_eq!(l.doc_year, Some(2001));
    }

    #[test]
    fn partitions_by_last_digit() {
        assert_eq!(assign_partition(1994), Partition::Test);
        assert_eq!(assign_partition(2005), Partition::Dev);
        assert_eq!(assign_partition(2001), Partition::Train);
        assert_eq!(assign_partition(0), Partition::Train);
        assert_eq!(partition_of(&line("a", "b")), Partition::Train);
    }

    #[test]
    fn dedupe_only_consecutive() {
        let l1 = line("a", "x");
        let l2 = line("b", "y");
        let (out, removed) = dedupe_lines(vec![l1.clone(), l1.clone(), l2.clone()]);
        assert_eq!(out, vec![l1.clone(), l2.clone()]);
        assert_eq!(removed, 1);
        let (out, removed) = dedupe_lines(vec![l1.clone(), l2.clone(), l1.clone()]);
        assert_eq!(out, vec![l1.clone(), l2, l1]);
        assert_eq!(removed, 0);
        assert_eq!(dedupe_lines(vec![]), (vec![], 0));
    }
}
