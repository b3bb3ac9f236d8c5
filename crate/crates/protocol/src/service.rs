//! Session registry and the newline-delimited request loop.

use std::collections::BTreeMap;
use std::io::{self, BufRead, Write};
use std::sync::atomic::{AtomicUsize, Ordering};
use std::sync::{Arc, Mutex, RwLock};

use dialectic_core::preference::PreferenceConfig;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::error::{ProtocolError, Result};
use crate::moves::{MoveRequest, Participant};
use crate::session::{Session, SessionConfig};
use crate::transcript;
use crate::view::{Delta, HierarchyView, MoveOutcome, StateView};

/// Opening a session preloaded with a theory file.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct SeedRequest {
    pub participants: Vec<Participant>,
    #[serde(default)]
    pub preference: PreferenceConfig,
    pub theory: String,
}

/// Either an explicit config or a seed theory.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct OpenRequest {
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub config: Option<SessionConfig>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub seed: Option<SeedRequest>,
}

impl OpenRequest {
    pub fn open(self) -> Result<Session> {
        match (self.config, self.seed) {
            (Some(config), None) => Session::open(config),
            (None, Some(seed)) => Session::seeded(seed.participants, seed.preference, &seed.theory),
            _ => Err(ProtocolError::Malformed(
                "give exactly one of `config` and `seed`".into(),
            )),
        }
    }
}

/// Live sessions. Each session sits behind its own lock, so moves on one
/// session are serialized while different sessions proceed independently.
#[derive(Debug, Default)]
pub struct SessionRegistry {
    sessions: RwLock<BTreeMap<String, Arc<Mutex<Session>>>>,
    next: AtomicUsize,
}

impl SessionRegistry {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn insert(&self, session: Session) -> String {
        let id = format!("s{}", self.next.fetch_add(1, Ordering::SeqCst) + 1);
        self.sessions
            .write()
            .expect("registry lock")
            .insert(id.clone(), Arc::new(Mutex::new(session)));
        id
    }

    pub fn get(&self, id: &str) -> Result<Arc<Mutex<Session>>> {
        self.sessions
            .read()
            .expect("registry lock")
            .get(id)
            .cloned()
            .ok_or_else(|| ProtocolError::UnknownSession(id.to_string()))
    }

    pub fn ids(&self) -> Vec<String> {
        self.sessions.read().expect("registry lock").keys().cloned().collect()
    }
}

/// One request of the stdio protocol.
#[derive(Debug, Clone, PartialEq, Deserialize)]
#[serde(tag = "verb", rename_all = "kebab-case")]
pub enum Request {
    Open(OpenRequest),
    Move {
        #[serde(rename = "move")]
        request: MoveRequest,
    },
    State,
    Hierarchy,
    Transcript,
}

fn to_value<T: Serialize>(v: &T) -> Value {
    serde_json::to_value(v).expect("responses serialize")
}

fn respond(session: &mut Option<Session>, request: Request) -> Result<Value> {
    if let Request::Open(open) = request {
        let s = open.open()?;
        let state = to_value(&StateView::of(&s));
        *session = Some(s);
        return Ok(json!({ "ok": true, "state": state }));
    }
    let s = session
        .as_mut()
        .ok_or_else(|| ProtocolError::Malformed("no session is open".into()))?;
    Ok(match request {
        Request::Open(_) => unreachable!("handled above"),
        Request::Move { request } => {
            let (committed, events) = s.submit(request)?;
            let mut out = to_value(&MoveOutcome {
                committed,
                events,
                delta: Delta::of(s),
            });
            out["ok"] = json!(true);
            out
        }
        Request::State => json!({ "ok": true, "state": to_value(&StateView::of(s)) }),
        Request::Hierarchy => json!({ "ok": true, "hierarchy": to_value(&HierarchyView::of(s)?) }),
        Request::Transcript => json!({ "ok": true, "transcript": transcript::save(s) }),
    })
}

/// Handles one request line against the current session.
pub fn handle_line(session: &mut Option<Session>, line: &str) -> Value {
    let result = serde_json::from_str::<Request>(line)
        .map_err(|e| ProtocolError::Malformed(e.to_string()))
        .and_then(|r| respond(session, r));
    result.unwrap_or_else(|e| json!({ "ok": false, "error": e.to_string() }))
}

/// Reads requests line by line and writes one response line for each.
pub fn run_stdio<R: BufRead, W: Write>(
    input: R,
    mut output: W,
    mut session: Option<Session>,
) -> io::Result<Option<Session>> {
    for line in input.lines() {
        let line = line?;
        if line.trim().is_empty() {
            continue;
        }
        let response = handle_line(&mut session, &line);
        writeln!(output, "{response}")?;
        output.flush()?;
    }
    Ok(session)
}
