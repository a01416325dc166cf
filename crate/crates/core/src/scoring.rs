//! Ranking functions for target-language phrase pairs.
//!
//! All estimates are relative frequencies from a [`CooccurrenceTable`]:
//!
//! * `cond_prob`: `P(e2|e1) = Σ_f P(e2|f) P(f|e1)`, marginalised over shared pivots.
//! * `joint_prob`: `P(e1,e2) = P(e2|e1) P(e1)`, symmetric.
//! * `pmi`: `ln P(e1,e2) / (P(e1) P(e2))`.
//! * `joint_times_pmi`: `P(e1,e2) · pmi(e1;e2)`.
//! * `sum_pmi`: PMI computed separately per pivot corpus and summed.
//!
//! Logarithms are natural. `cond_prob` is asymmetric and only exposed for
//! diagnostics; the miner refuses to rank with it.

use std::borrow::Cow;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::stats::{merge_tables, CooccurrenceTable};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum SchemeId {
    CondProb,
    JointProb,
    Pmi,
    JointTimesPmi,
    SumPmi,
}

impl SchemeId {
    pub const ALL: [SchemeId; 5] = [
        SchemeId::CondProb,
        SchemeId::JointProb,
        SchemeId::Pmi,
        SchemeId::JointTimesPmi,
        SchemeId::SumPmi,
    ];

    /// The four symmetric schemes usable for rankings.
    pub const RANKABLE: [SchemeId; 4] = [
        SchemeId::JointProb,
        SchemeId::Pmi,
        SchemeId::JointTimesPmi,
        SchemeId::SumPmi,
    ];

    pub fn as_str(self) -> &'static str {
        match self {
            SchemeId::CondProb => "cond_prob",
            SchemeId::JointProb => "joint_prob",
            SchemeId::Pmi => "pmi",
            SchemeId::JointTimesPmi => "joint_times_pmi",
            SchemeId::SumPmi => "sum_pmi",
        }
    }

    pub fn is_symmetric(self) -> bool {
        self != SchemeId::CondProb
    }
}

impl fmt::Display for SchemeId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.as_str())
    }
}

impl FromStr for SchemeId {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        SchemeId::ALL
            .into_iter()
            .find(|id| id.as_str() == s)
            .ok_or_else(|| Error::InvalidArgument(format!("unknown scheme {s:?}")))
    }
}

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Score {
    pub scheme: SchemeId,
    pub value: f64,
}

fn known(table: &CooccurrenceTable, e: &str) -> Result<u32> {
    table
        .target_id(e)
        .ok_or_else(|| Error::UnknownPhrase(e.to_string()))
}

/// `Σ_f c(e1,f) c(e2,f) / c(f)` over pivots shared by both rows. The sum runs
/// in pivot-id order, so it is bit-identical under swapping the arguments.
fn shared_mass(table: &CooccurrenceTable, e1: u32, e2: u32) -> f64 {
    let (a, b) = (table.row_by_target(e1), table.row_by_target(e2));
    let (mut i, mut j) = (0, 0);
    let mut sum = 0.0;
    while i < a.len() && j < b.len() {
        match a[i].0.cmp(&b[j].0) {
            std::cmp::Ordering::Less => i += 1,
            std::cmp::Ordering::Greater => j += 1,
            std::cmp::Ordering::Equal => {
                let f = a[i].0;
                let num = a[i].1 as u128 * b[j].1 as u128;
                sum += num as f64 / table.pivot_count_by_id(f) as f64;
                i += 1;
                j += 1;
            }
        }
    }
    sum
}

fn joint_by_id(table: &CooccurrenceTable, e1: u32, e2: u32) -> f64 {
    shared_mass(table, e1, e2) / table.n_lines() as f64
}

fn pmi_by_id(table: &CooccurrenceTable, e1: u32, e2: u32) -> Result<f64> {
    let joint = joint_by_id(table, e1, e2);
    if joint <= 0.0 {
        return Err(Error::NoCooccurrence);
    }
    let n = table.n_lines() as f64;
    let p1 = table.target_count_by_id(e1) as f64 / n;
    let p2 = table.target_count_by_id(e2) as f64 / n;
    Ok(joint.ln() - p1.ln() - p2.ln())
}

/// `P(e2|e1)`. Errors if `e1` is unseen; an unseen `e2` scores 0.
pub fn cond_prob(table: &CooccurrenceTable, e1: &str, e2: &str) -> Result<Score> {
    let id1 = known(table, e1)?;
    let c1 = table.target_count_by_id(id1) as f64;
    let value = match table.target_id(e2) {
        None => 0.0,
        Some(id2) => table
            .row_by_target(id1)
            .iter()
            .map(|&(f, c1f)| {
                let c2f = table.joint_count_by_id(id2, f) as f64;
                let cf = table.pivot_count_by_id(f) as f64;
                (c2f / cf) * (c1f as f64 / c1)
            })
            .sum(),
    };
    Ok(Score {
        scheme: SchemeId::CondProb,
        value,
    })
}

/// `P(e1,e2)`. Both phrases must be seen.
pub fn joint_prob(table: &CooccurrenceTable, e1: &str, e2: &str) -> Result<Score> {
    let (id1, id2) = (known(table, e1)?, known(table, e2)?);
    Ok(Score {
        scheme: SchemeId::JointProb,
        value: joint_by_id(table, id1, id2),
    })
}

/// `pmi(e1;e2)`. Errors with [`Error::NoCooccurrence`] when the joint probability is zero.
pub fn pmi(table: &CooccurrenceTable, e1: &str, e2: &str) -> Result<Score> {
    let (id1, id2) = (known(table, e1)?, known(table, e2)?);
    Ok(Score {
        scheme: SchemeId::Pmi,
        value: pmi_by_id(table, id1, id2)?,
    })
}

pub fn joint_times_pmi(table: &CooccurrenceTable, e1: &str, e2: &str) -> Result<Score> {
    let (id1, id2) = (known(table, e1)?, known(table, e2)?);
    let value = joint_by_id(table, id1, id2) * pmi_by_id(table, id1, id2)?;
    Ok(Score {
        scheme: SchemeId::JointTimesPmi,
        value,
    })
}

/// PMI per pivot corpus, summed. Corpora where the pair never shares a pivot
/// (including corpora where either phrase is absent) contribute nothing.
/// With one corpus and a defined PMI the result equals [`pmi`] exactly.
pub fn sum_pmi<'a, I>(tables: I, e1: &str, e2: &str) -> Result<Score>
where
    I: IntoIterator<Item = &'a CooccurrenceTable>,
{
    let mut total: Option<f64> = None;
    for table in tables {
        let (Some(id1), Some(id2)) = (table.target_id(e1), table.target_id(e2)) else {
            continue;
        };
        match pmi_by_id(table, id1, id2) {
            Ok(v) => total = Some(total.map_or(v, |t| t + v)),
            Err(Error::NoCooccurrence) => {}
            Err(e) => return Err(e),
        }
    }
    total
        .map(|value| Score {
            scheme: SchemeId::SumPmi,
            value,
        })
        .ok_or(Error::NoCooccurrenceInAnyPivot)
}

/// Scores pairs under one scheme against a set of pivot corpora.
///
/// `sum_pmi` keeps the corpora separate; every other scheme works on the
/// merged bitext (the single table itself when only one is given).
pub struct Scorer<'a> {
    scheme: SchemeId,
    tables: &'a [CooccurrenceTable],
    merged: Option<Cow<'a, CooccurrenceTable>>,
}

impl<'a> Scorer<'a> {
    pub fn new(scheme: SchemeId, tables: &'a [CooccurrenceTable]) -> Result<Self> {
        if tables.is_empty() {
            return Err(Error::EmptyCorpus);
        }
        let merged = match (scheme, tables) {
            (SchemeId::SumPmi, _) => None,
            (_, [single]) => Some(Cow::Borrowed(single)),
            _ => Some(Cow::Owned(merge_tables(tables)?)),
        };
        Ok(Scorer {
            scheme,
            tables,
            merged,
        })
    }

    pub fn scheme(&self) -> SchemeId {
        self.scheme
    }

    pub fn score(&self, e1: &str, e2: &str) -> Result<f64> {
        let merged = || self.merged.as_deref().expect("merged table present");
        let s = match self.scheme {
            SchemeId::CondProb => cond_prob(merged(), e1, e2)?,
            SchemeId::JointProb => joint_prob(merged(), e1, e2)?,
            SchemeId::Pmi => pmi(merged(), e1, e2)?,
            SchemeId::JointTimesPmi => joint_times_pmi(merged(), e1, e2)?,
            SchemeId::SumPmi => sum_pmi(self.tables, e1, e2)?,
        };
        Ok(s.value)
    }
}
