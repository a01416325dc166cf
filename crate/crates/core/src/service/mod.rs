//! Two-annotator assignment over a fixed pair queue.
//!
//! Judgments are persisted to a [`JudgmentStore`]; assignments are leases held
//! in memory only, so a restart simply hands unjudged pairs out again.

mod http;
mod store;

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::path::Path;
use std::sync::{Arc, Mutex};

use chrono::{DateTime, Duration, Utc};
use rand::seq::SliceRandom;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};

use crate::annotation::{AdjudicatedLabel, AdjudicatedPair, AnnotationCategory, Judgment};
use crate::error::{Error, Result};
use crate::phrase::PairKey;

pub use http::{router, serve};
pub use store::{JudgmentStore, Recovered};

/// Judges per pair.
pub const JUDGES_PER_PAIR: usize = 2;

pub trait Clock: Send + Sync {
    fn now(&self) -> DateTime<Utc>;
}

#[derive(Debug, Default, Clone, Copy)]
pub struct SystemClock;

impl Clock for SystemClock {
    fn now(&self) -> DateTime<Utc> {
        Utc::now()
    }
}

/// A clock that only moves when told to.
#[derive(Debug)]
pub struct ManualClock(Mutex<DateTime<Utc>>);

impl ManualClock {
    pub fn new(start: DateTime<Utc>) -> Self {
        ManualClock(Mutex::new(start))
    }

    pub fn advance(&self, by: Duration) {
        *self.0.lock().unwrap() += by;
    }
}

impl Clock for ManualClock {
    fn now(&self) -> DateTime<Utc> {
        *self.0.lock().unwrap()
    }
}

#[derive(Clone)]
pub struct ServiceConfig {
    pub queue_name: String,
    pub lease: Duration,
    /// When set, only these annotator ids are served.
    pub annotators: Option<BTreeSet<String>>,
    pub clock: Arc<dyn Clock>,
}

impl Default for ServiceConfig {
    fn default() -> Self {
        ServiceConfig {
            queue_name: "default".into(),
            lease: Duration::hours(24),
            annotators: None,
            clock: Arc::new(SystemClock),
        }
    }
}

impl std::fmt::Debug for ServiceConfig {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.debug_struct("ServiceConfig")
            .field("queue_name", &self.queue_name)
            .field("lease", &self.lease)
            .field("annotators", &self.annotators)
            .finish_non_exhaustive()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "snake_case")]
pub enum TaskState {
    Pending,
    Judged,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AnnotationTask {
    pub pair_id: String,
    pub phrase1: String,
    pub phrase2: String,
    pub assigned_to: String,
    pub state: TaskState,
}

#[derive(Clone, Copy, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct Progress {
    pub pairs: usize,
    pub judgments: usize,
    /// No judgment and no live assignment.
    pub unassigned: usize,
    /// Fewer than two judgments, at least one judgment or live assignment.
    pub in_progress: usize,
    pub complete: usize,
    pub active_assignments: usize,
}

#[derive(Debug, Default, Clone)]
struct PairState {
    judgments: Vec<Judgment>,
    leases: Vec<(String, DateTime<Utc>)>,
}

impl PairState {
    fn live_leases(&self, now: DateTime<Utc>) -> impl Iterator<Item = &str> {
        self.leases
            .iter()
            .filter(move |(_, exp)| *exp > now)
            .map(|(a, _)| a.as_str())
    }

    fn has_judged(&self, who: &str) -> bool {
        self.judgments.iter().any(|j| j.annotator_id == who)
    }

    /// Judgments plus live leases held by annotators who have not judged yet.
    fn occupancy(&self, now: DateTime<Utc>) -> usize {
        self.judgments.len()
            + self
                .live_leases(now)
                .filter(|a| !self.has_judged(a))
                .count()
    }

    fn holds_lease(&self, who: &str, now: DateTime<Utc>) -> bool {
        self.live_leases(now).any(|a| a == who)
    }

    fn seen_by(&self, who: &str) -> bool {
        self.has_judged(who) || self.leases.iter().any(|(a, _)| a == who)
    }
}

/// Reads a queue file (`phrase1<TAB>phrase2`, or a ranked list) and
/// optionally shuffles it. Duplicate pairs are dropped.
pub fn load_queue(path: &Path, shuffle: Option<u64>) -> Result<Vec<PairKey>> {
    let mut seen = BTreeSet::new();
    let mut pairs: Vec<PairKey> = crate::io::read_pair_list(path)?
        .into_iter()
        .filter(|p| seen.insert(p.clone()))
        .collect();
    if let Some(seed) = shuffle {
        pairs.shuffle(&mut ChaCha8Rng::seed_from_u64(seed));
    }
    Ok(pairs)
}

#[derive(Debug)]
pub struct AnnotationService {
    queue: Vec<PairKey>,
    ids: Vec<String>,
    index: HashMap<String, usize>,
    state: Vec<PairState>,
    store: Option<JudgmentStore>,
    config: ServiceConfig,
}

impl AnnotationService {
    /// An in-memory service; nothing is persisted.
    pub fn in_memory(queue: Vec<PairKey>, config: ServiceConfig) -> Self {
        let ids: Vec<String> = queue.iter().map(PairKey::pair_id).collect();
        let index = ids.iter().enumerate().map(|(i, id)| (id.clone(), i)).collect();
        AnnotationService {
            state: vec![PairState::default(); queue.len()],
            queue,
            ids,
            index,
            store: None,
            config,
        }
    }

    /// Opens the store and replays it.
    pub fn open(queue: Vec<PairKey>, store_path: &Path, config: ServiceConfig) -> Result<Self> {
        let (store, rec) = JudgmentStore::open(store_path)?;
        let mut svc = AnnotationService::in_memory(queue, config);
        svc.replay(rec.judgments);
        svc.store = Some(store);
        Ok(svc)
    }

    fn replay(&mut self, judgments: Vec<Judgment>) {
        for j in judgments {
            let Some(&i) = self.index.get(&j.pair_id) else {
                log::warn!("judgment for pair {} not in queue; ignored", j.pair_id);
                continue;
            };
            let st = &mut self.state[i];
            if st.has_judged(&j.annotator_id) || st.judgments.len() >= JUDGES_PER_PAIR {
                log::warn!(
                    "extra judgment by {} on {}; ignored",
                    j.annotator_id,
                    j.pair_id
                );
                continue;
            }
            st.judgments.push(j);
        }
    }

    pub fn queue_name(&self) -> &str {
        &self.config.queue_name
    }

    pub fn len(&self) -> usize {
        self.queue.len()
    }

    pub fn is_empty(&self) -> bool {
        self.queue.is_empty()
    }

    fn check_annotator(&self, who: &str) -> Result<()> {
        if who.trim().is_empty() {
            return Err(Error::InvalidArgument("annotator id is empty".into()));
        }
        match &self.config.annotators {
            Some(allowed) if !allowed.contains(who) => Err(Error::UnknownAnnotator(who.into())),
            _ => Ok(()),
        }
    }

    pub fn check_queue(&self, name: &str) -> Result<()> {
        if name == self.queue_name() {
            Ok(())
        } else {
            Err(Error::UnknownQueue(name.into()))
        }
    }

    fn task(&self, i: usize, who: &str) -> AnnotationTask {
        let p = &self.queue[i];
        AnnotationTask {
            pair_id: self.ids[i].clone(),
            phrase1: p.lo().to_string(),
            phrase2: p.hi().to_string(),
            assigned_to: who.into(),
            state: if self.state[i].has_judged(who) {
                TaskState::Judged
            } else {
                TaskState::Pending
            },
        }
    }

    /// Hands out a pair this annotator has never been given, completing
    /// half-done pairs before opening fresh ones.
    pub fn next_task(&mut self, who: &str) -> Result<Option<AnnotationTask>> {
        self.check_annotator(who)?;
        let now = self.config.clock.now();
        let mut fresh = None;
        let mut half = None;
        for (i, st) in self.state.iter().enumerate() {
            if st.seen_by(who) {
                continue;
            }
            match st.occupancy(now) {
                0 if fresh.is_none() => fresh = Some(i),
                1 => {
                    half = Some(i);
                    break;
                }
                _ => {}
            }
        }
        let Some(i) = half.or(fresh) else {
            return Ok(None);
        };
        // Lapsed leases stay on record so the pair is never offered to them again.
        self.state[i].leases.push((who.into(), now + self.config.lease));
        Ok(Some(self.task(i, who)))
    }

    /// Records a judgment. Resubmitting the identical category is a no-op.
    pub fn submit(
        &mut self,
        who: &str,
        pair_id: &str,
        category: AnnotationCategory,
    ) -> Result<Judgment> {
        self.check_annotator(who)?;
        let &i = self
            .index
            .get(pair_id)
            .ok_or_else(|| Error::UnknownPair(pair_id.into()))?;
        let now = self.config.clock.now();
        let st = &self.state[i];
        if let Some(prev) = st.judgments.iter().find(|j| j.annotator_id == who) {
            return if prev.category == category {
                Ok(prev.clone())
            } else {
                Err(Error::Conflict(format!(
                    "{who} already judged {pair_id} as {}",
                    prev.category
                )))
            };
        }
        if st.judgments.len() >= JUDGES_PER_PAIR {
            return Err(Error::Conflict(format!("{pair_id} already has two judgments")));
        }
        let leased = st.holds_lease(who, now);
        // A lapsed lease is still honoured while nobody else took the slot.
        let lapsed_ok = st.leases.iter().any(|(a, _)| a == who) && st.occupancy(now) < JUDGES_PER_PAIR;
        if !leased && !lapsed_ok {
            return Err(Error::Conflict(format!("{pair_id} is not assigned to {who}")));
        }
        let j = Judgment {
            pair_id: pair_id.into(),
            annotator_id: who.into(),
            category,
            timestamp: now,
        };
        if let Some(store) = &mut self.store {
            store.append(&j)?;
        }
        let st = &mut self.state[i];
        st.judgments.push(j.clone());
        st.leases.retain(|(a, _)| a != who);
        Ok(j)
    }

    pub fn progress(&self) -> Progress {
        let now = self.config.clock.now();
        let mut p = Progress {
            pairs: self.queue.len(),
            ..Progress::default()
        };
        for st in &self.state {
            p.judgments += st.judgments.len();
            let live = st
                .live_leases(now)
                .filter(|a| !st.has_judged(a))
                .count();
            if st.judgments.len() >= JUDGES_PER_PAIR {
                p.complete += 1;
            } else {
                p.active_assignments += live;
                if st.judgments.is_empty() && live == 0 {
                    p.unassigned += 1;
                } else {
                    p.in_progress += 1;
                }
            }
        }
        p
    }

    pub fn judgments(&self) -> impl Iterator<Item = &Judgment> {
        self.state.iter().flat_map(|s| s.judgments.iter())
    }

    /// Pair-level state as seen by nobody in particular; used to compare replays.
    pub fn snapshot(&self) -> Vec<(String, Vec<(String, AnnotationCategory)>)> {
        self.ids
            .iter()
            .zip(&self.state)
            .map(|(id, st)| {
                let js = st
                    .judgments
                    .iter()
                    .map(|j| (j.annotator_id.clone(), j.category))
                    .collect();
                (id.clone(), js)
            })
            .collect()
    }

    pub fn adjudicated_pairs(&self) -> Vec<AdjudicatedPair> {
        adjudicate_judgments(&self.queue, self.judgments().cloned())
    }

    pub fn adjudicate_all(&self) -> BTreeMap<String, AdjudicatedLabel> {
        self.adjudicated_pairs()
            .into_iter()
            .map(|a| (a.pair_id, a.label))
            .collect()
    }
}

/// Adjudicates every queue pair that has exactly two judgments from
/// distinct annotators, in queue order. The earlier judgment counts first.
pub fn adjudicate_judgments(
    queue: &[PairKey],
    judgments: impl IntoIterator<Item = Judgment>,
) -> Vec<AdjudicatedPair> {
    let mut by_pair: HashMap<String, Vec<Judgment>> = HashMap::new();
    for j in judgments {
        let v = by_pair.entry(j.pair_id.clone()).or_default();
        if !v.iter().any(|x| x.annotator_id == j.annotator_id) {
            v.push(j);
        }
    }
    queue
        .iter()
        .filter_map(|p| match by_pair.get(&p.pair_id()).map(Vec::as_slice) {
            Some([a, b]) => AdjudicatedPair::new(p.clone(), a, b).ok(),
            _ => None,
        })
        .collect()
}

/// Reads every record of a judgment log without modifying it.
pub fn read_judgments(path: &Path) -> Result<Vec<Judgment>> {
    let mut out = Vec::new();
    for (i, line) in crate::io::read_lines(path)?.iter().enumerate() {
        if line.trim().is_empty() {
            continue;
        }
        match serde_json::from_str(line) {
            Ok(j) => out.push(j),
            Err(e) => return Err(Error::parse(path, i + 1, e.to_string())),
        }
    }
    Ok(out)
}
