use std::collections::BTreeMap;
use std::future::Future;
use std::path::PathBuf;
use std::sync::{Arc, Mutex};

use axum::extract::{Query, State};
use axum::http::StatusCode;
use axum::response::{Html, IntoResponse, Response};
use axum::routing::{get, post};
use axum::{Json, Router};
use serde::{Deserialize, Serialize};
use tokio::net::TcpListener;
use tower_http::services::{ServeDir, ServeFile};

use super::{AnnotationService, Progress};
use crate::annotation::{AdjudicatedLabel, AnnotationCategory};
use crate::error::Error;

type Shared = Arc<Mutex<AnnotationService>>;

const PLACEHOLDER: &str = "<!doctype html><title>paramine</title>\
<p>Annotation API is running. Endpoints: <code>GET /api/task?annotator=ID</code>, \
<code>POST /api/judgment</code>, <code>GET /api/progress</code>, \
<code>POST /api/adjudicate</code>.</p>";

struct ApiError(Error);

impl From<Error> for ApiError {
    fn from(e: Error) -> Self {
        ApiError(e)
    }
}

impl IntoResponse for ApiError {
    fn into_response(self) -> Response {
        let status = match &self.0 {
            Error::Conflict(_) => StatusCode::CONFLICT,
            Error::UnknownAnnotator(_) => StatusCode::FORBIDDEN,
            Error::UnknownQueue(_) | Error::UnknownPair(_) => StatusCode::NOT_FOUND,
            Error::InvalidArgument(_) => StatusCode::BAD_REQUEST,
            _ => StatusCode::INTERNAL_SERVER_ERROR,
        };
        if status.is_server_error() {
            log::error!("{}", self.0);
        }
        let body = serde_json::json!({ "error": self.0.to_string() });
        (status, Json(body)).into_response()
    }
}

#[derive(Deserialize)]
struct TaskQuery {
    annotator: Option<String>,
    queue: Option<String>,
}

#[derive(Serialize)]
struct TaskBody {
    pair_id: String,
    phrase1: String,
    phrase2: String,
}

#[derive(Deserialize)]
struct JudgmentBody {
    annotator: String,
    pair_id: String,
    category: String,
    #[serde(default)]
    queue: Option<String>,
}

fn lock(s: &Shared) -> std::sync::MutexGuard<'_, AnnotationService> {
    // A panic mid-request leaves the in-memory state consistent: every
    // mutation happens after the fallible store append.
    s.lock().unwrap_or_else(|p| p.into_inner())
}

async fn task(State(s): State<Shared>, Query(q): Query<TaskQuery>) -> Result<Response, ApiError> {
    let annotator = q
        .annotator
        .ok_or_else(|| Error::InvalidArgument("missing annotator".into()))?;
    let mut svc = lock(&s);
    if let Some(name) = &q.queue {
        svc.check_queue(name)?;
    }
    Ok(match svc.next_task(&annotator)? {
        Some(t) => Json(TaskBody {
            pair_id: t.pair_id,
            phrase1: t.phrase1,
            phrase2: t.phrase2,
        })
        .into_response(),
        None => StatusCode::NO_CONTENT.into_response(),
    })
}

async fn judgment(
    State(s): State<Shared>,
    Json(b): Json<JudgmentBody>,
) -> Result<Response, ApiError> {
    let category: AnnotationCategory = b.category.parse()?;
    let mut svc = lock(&s);
    if let Some(name) = &b.queue {
        svc.check_queue(name)?;
    }
    let j = svc.submit(&b.annotator, &b.pair_id, category)?;
    Ok(Json(serde_json::json!({ "ok": true, "judgment": j })).into_response())
}

async fn progress(State(s): State<Shared>) -> Json<Progress> {
    Json(lock(&s).progress())
}

async fn adjudicate(State(s): State<Shared>) -> Json<BTreeMap<String, AdjudicatedLabel>> {
    Json(lock(&s).adjudicate_all())
}

/// The API routes plus `/`, which serves `static_dir` when given.
pub fn router(svc: Shared, static_dir: Option<PathBuf>) -> Router {
    let api = Router::new()
        .route("/api/task", get(task))
        .route("/api/judgment", post(judgment))
        .route("/api/progress", get(progress))
        .route("/api/adjudicate", post(adjudicate))
        .with_state(svc);
    match static_dir {
        Some(dir) => {
            let index = dir.join("index.html");
            api.fallback_service(ServeDir::new(dir).fallback(ServeFile::new(index)))
        }
        None => api.route("/", get(|| async { Html(PLACEHOLDER) })),
    }
}

/// Serves until `shutdown` resolves.
pub async fn serve(
    listener: TcpListener,
    svc: Shared,
    static_dir: Option<PathBuf>,
    shutdown: impl Future<Output = ()> + Send + 'static,
) -> std::io::Result<()> {
    axum::serve(listener, router(svc, static_dir))
        .with_graceful_shutdown(shutdown)
        .await
}
