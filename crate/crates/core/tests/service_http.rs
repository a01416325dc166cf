use std::collections::{BTreeMap, HashSet};
use std::path::Path;
use std::sync::{Arc, Mutex};

use paramine::annotation::AdjudicatedLabel;
use paramine::service::{self, AnnotationService, Progress, ServiceConfig};
use paramine::PairKey;
use reqwest::StatusCode;
use serde_json::{json, Value};

struct Server {
    base: String,
    stop: Option<tokio::sync::oneshot::Sender<()>>,
    handle: tokio::task::JoinHandle<std::io::Result<()>>,
}

impl Server {
    async fn start(queue: Vec<PairKey>, store: &Path, config: ServiceConfig) -> Server {
        let svc = AnnotationService::open(queue, store, config).unwrap();
        let listener = tokio::net::TcpListener::bind("127.0.0.1:0").await.unwrap();
        let base = format!("http://{}", listener.local_addr().unwrap());
        let (tx, rx) = tokio::sync::oneshot::channel::<()>();
        let handle = tokio::spawn(service::serve(
            listener,
            Arc::new(Mutex::new(svc)),
            None,
            async {
                let _ = rx.await;
            },
        ));
        Server {
            base,
            stop: Some(tx),
            handle,
        }
    }

    async fn stop(mut self) {
        let _ = self.stop.take().unwrap().send(());
        self.handle.await.unwrap().unwrap();
    }
}

fn queue(n: usize) -> Vec<PairKey> {
    (0..n)
        .map(|i| PairKey::from_raw(&format!("Sit down {i}."), &format!("Have a seat {i}.")).unwrap())
        .collect()
}

async fn task(c: &reqwest::Client, base: &str, who: &str) -> (StatusCode, Option<Value>) {
    let r = c
        .get(format!("{base}/api/task"))
        .query(&[("annotator", who)])
        .send()
        .await
        .unwrap();
    let status = r.status();
    let body = if status == StatusCode::OK {
        Some(r.json().await.unwrap())
    } else {
        None
    };
    (status, body)
}

async fn judge(c: &reqwest::Client, base: &str, who: &str, pair: &str, cat: &str) -> StatusCode {
    c.post(format!("{base}/api/judgment"))
        .json(&json!({"annotator": who, "pair_id": pair, "category": cat}))
        .send()
        .await
        .unwrap()
        .status()
}

#[tokio::test(flavor = "multi_thread", worker_threads = 4)]
async fn two_annotators_complete_a_queue() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("judgments.jsonl");
    let srv = Server::start(queue(10), &store, ServiceConfig::default()).await;
    let c = reqwest::Client::new();

    for (who, cat) in [("alice", "good"), ("bob", "mostly_good")] {
        let mut seen = HashSet::new();
        loop {
            let (st, body) = task(&c, &srv.base, who).await;
            if st == StatusCode::NO_CONTENT {
                break;
            }
            let body = body.unwrap();
            let id = body["pair_id"].as_str().unwrap().to_string();
            assert!(body["phrase1"].is_string() && body["phrase2"].is_string());
            assert!(seen.insert(id.clone()), "{who} saw {id} twice");
            assert_eq!(judge(&c, &srv.base, who, &id, cat).await, StatusCode::OK);
        }
        assert_eq!(seen.len(), 10);
    }
    assert_eq!(task(&c, &srv.base, "carol").await.0, StatusCode::NO_CONTENT);

    let p: Progress = c
        .get(format!("{}/api/progress", srv.base))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert_eq!((p.pairs, p.judgments, p.complete), (10, 20, 10));

    let labels: BTreeMap<String, AdjudicatedLabel> = c
        .post(format!("{}/api/adjudicate", srv.base))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert_eq!(labels.len(), 10);
    assert!(labels.values().all(|l| *l == AdjudicatedLabel::MostlyGood));

    let root = c.get(format!("{}/", srv.base)).send().await.unwrap();
    assert_eq!(root.status(), StatusCode::OK);
    srv.stop().await;

    let lines = std::fs::read_to_string(&store).unwrap();
    assert_eq!(lines.lines().count(), 20);
}

#[tokio::test]
async fn submit_errors_map_to_status_codes() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("j.jsonl");
    let config = ServiceConfig {
        queue_name: "batch1".into(),
        annotators: Some(["alice".to_string(), "bob".to_string()].into()),
        ..ServiceConfig::default()
    };
    let srv = Server::start(queue(2), &store, config).await;
    let c = reqwest::Client::new();
    let base = srv.base.clone();

    let (_, body) = task(&c, &base, "alice").await;
    let id = body.unwrap()["pair_id"].as_str().unwrap().to_string();
    let other = queue(2)
        .iter()
        .map(PairKey::pair_id)
        .find(|p| *p != id)
        .unwrap();

    assert_eq!(judge(&c, &base, "alice", &id, "good").await, StatusCode::OK);
    assert_eq!(judge(&c, &base, "alice", &id, "good").await, StatusCode::OK);
    assert_eq!(judge(&c, &base, "alice", &id, "bad").await, StatusCode::CONFLICT);
    assert_eq!(judge(&c, &base, "alice", &other, "good").await, StatusCode::CONFLICT);
    assert_eq!(judge(&c, &base, "bob", &id, "good").await, StatusCode::CONFLICT);
    assert_eq!(judge(&c, &base, "alice", "feedfacefeedfacefeedface", "good").await, StatusCode::NOT_FOUND);
    assert_eq!(judge(&c, &base, "alice", &id, "green").await, StatusCode::BAD_REQUEST);
    assert_eq!(task(&c, &base, "mallory").await.0, StatusCode::FORBIDDEN);
    assert_eq!(task(&c, &base, "").await.0, StatusCode::BAD_REQUEST);

    let r = c
        .get(format!("{base}/api/task"))
        .query(&[("annotator", "bob"), ("queue", "other")])
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), StatusCode::NOT_FOUND);
    let r = c
        .get(format!("{base}/api/task"))
        .query(&[("annotator", "bob"), ("queue", "batch1")])
        .send()
        .await
        .unwrap();
    assert_eq!(r.status(), StatusCode::OK);
    srv.stop().await;

    // The duplicate submission was not appended.
    assert_eq!(std::fs::read_to_string(&store).unwrap().lines().count(), 1);
}

#[tokio::test(flavor = "multi_thread", worker_threads = 8)]
async fn concurrent_annotators_never_exceed_two_judgments() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("j.jsonl");
    let srv = Server::start(queue(15), &store, ServiceConfig::default()).await;
    let c = reqwest::Client::new();

    let mut jobs = Vec::new();
    for w in 0..8 {
        let c = c.clone();
        let base = srv.base.clone();
        jobs.push(tokio::spawn(async move {
            let who = format!("w{w}");
            let mut n = 0;
            while let (StatusCode::OK, Some(b)) = task(&c, &base, &who).await {
                let id = b["pair_id"].as_str().unwrap().to_string();
                assert_eq!(judge(&c, &base, &who, &id, "bad").await, StatusCode::OK);
                n += 1;
            }
            n
        }));
    }
    let mut total = 0;
    for j in jobs {
        total += j.await.unwrap();
    }
    assert_eq!(total, 30);
    srv.stop().await;

    let judgments = service::read_judgments(&store).unwrap();
    let mut per_pair: BTreeMap<&str, HashSet<&str>> = BTreeMap::new();
    for j in &judgments {
        assert!(per_pair.entry(&j.pair_id).or_default().insert(&j.annotator_id));
    }
    assert_eq!(per_pair.len(), 15);
    assert!(per_pair.values().all(|s| s.len() == 2));
}

#[tokio::test]
async fn restart_replays_the_store() {
    let dir = tempfile::tempdir().unwrap();
    let store = dir.path().join("j.jsonl");
    let c = reqwest::Client::new();

    let srv = Server::start(queue(3), &store, ServiceConfig::default()).await;
    let (_, b) = task(&c, &srv.base, "alice").await;
    let id = b.unwrap()["pair_id"].as_str().unwrap().to_string();
    assert_eq!(judge(&c, &srv.base, "alice", &id, "good").await, StatusCode::OK);
    let (_, b) = task(&c, &srv.base, "bob").await;
    assert_eq!(b.unwrap()["pair_id"].as_str().unwrap(), id);
    assert_eq!(judge(&c, &srv.base, "bob", &id, "mostly_bad").await, StatusCode::OK);
    srv.stop().await;

    // Simulate a crash mid-append.
    let mut bytes = std::fs::read(&store).unwrap();
    bytes.extend_from_slice(b"{\"pair_id\":\"abc");
    std::fs::write(&store, bytes).unwrap();

    let srv = Server::start(queue(3), &store, ServiceConfig::default()).await;
    let labels: BTreeMap<String, AdjudicatedLabel> = c
        .post(format!("{}/api/adjudicate", srv.base))
        .send()
        .await
        .unwrap()
        .json()
        .await
        .unwrap();
    assert_eq!(labels.len(), 1);
    assert_eq!(labels[&id], AdjudicatedLabel::DiscardedDisagree);
    // alice already judged that pair; she is sent elsewhere.
    let (_, b) = task(&c, &srv.base, "alice").await;
    assert_ne!(b.unwrap()["pair_id"].as_str().unwrap(), id);
    srv.stop().await;
    assert_eq!(service::read_judgments(&store).unwrap().len(), 2);
}
