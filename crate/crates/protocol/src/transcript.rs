//! Transcript files: a versioned header, the session config, then one JSON
//! line per move followed by one line per event it produced.
//!
//! Loading replays every move through a fresh session and checks that the
//! recorded ids and events are reproduced exactly.

use serde::{Deserialize, Serialize};

use crate::error::{ProtocolError, Result};
use crate::moves::{Move, MoveRequest};
use crate::session::{Event, Session, SessionConfig};

pub const HEADER: &str = "#dialectic-transcript";
pub const VERSION: &str = "v1";

#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
enum Line {
    Config(SessionConfig),
    Move(Move),
    Event(Event),
}

fn json<T: Serialize>(value: &T) -> String {
    serde_json::to_string(value).expect("transcript lines serialize")
}

pub fn save(session: &Session) -> String {
    let mut out = format!("{HEADER} {VERSION}\n");
    out.push_str(&json(&Line::Config(session.config.clone())));
    out.push('\n');
    for (mv, events) in session.moves.iter().zip(&session.events) {
        out.push_str(&json(&Line::Move(mv.clone())));
        out.push('\n');
        for e in events {
            out.push_str(&json(&Line::Event(e.clone())));
            out.push('\n');
        }
    }
    out
}

pub fn load(text: &str) -> Result<Session> {
    let mut lines = text
        .lines()
        .enumerate()
        .map(|(i, l)| (i + 1, l))
        .filter(|(_, l)| !l.trim().is_empty());
    let (_, header) = lines
        .next()
        .ok_or_else(|| ProtocolError::transcript(1, "empty transcript"))?;
    let version = header
        .strip_prefix(HEADER)
        .ok_or_else(|| ProtocolError::transcript(1, "missing transcript header"))?
        .trim();
    if version != VERSION {
        return Err(ProtocolError::VersionMismatch(version.to_string()));
    }

    let mut session: Option<Session> = None;
    let mut pending: std::collections::VecDeque<Event> = Default::default();
    let mut last_line = 1;
    for (n, raw) in lines {
        last_line = n;
        let line: Line = serde_json::from_str(raw)
            .map_err(|e| ProtocolError::transcript(n, e.to_string()))?;
        match line {
            Line::Config(config) => {
                if session.is_some() {
                    return Err(ProtocolError::transcript(n, "config given twice"));
                }
                session = Some(Session::open(config).map_err(|e| ProtocolError::transcript(n, e.to_string()))?);
            }
            Line::Move(mv) => {
                let s = session
                    .as_mut()
                    .ok_or_else(|| ProtocolError::transcript(n, "move before config"))?;
                if let Some(e) = pending.front() {
                    return Err(ProtocolError::transcript(
                        n,
                        format!("missing recorded event {}", json(e)),
                    ));
                }
                let request = MoveRequest {
                    author: mv.author.clone(),
                    label: mv.label.clone(),
                    based_on: mv.based_on.clone(),
                    action: mv.action.clone(),
                };
                let (committed, events) = s
                    .submit(request)
                    .map_err(|e| ProtocolError::transcript(n, e.to_string()))?;
                if committed != mv {
                    return Err(ProtocolError::transcript(
                        n,
                        format!("replay committed {} instead of the recorded move", committed.id),
                    ));
                }
                pending = events.into();
            }
            Line::Event(e) => match pending.pop_front() {
                Some(expected) if expected == e => {}
                Some(expected) => {
                    return Err(ProtocolError::transcript(
                        n,
                        format!("recorded event differs from replay {}", json(&expected)),
                    ))
                }
                None => return Err(ProtocolError::transcript(n, "unexpected event")),
            },
        }
    }
    if let Some(e) = pending.front() {
        return Err(ProtocolError::transcript(
            last_line + 1,
            format!("transcript ended before event {}", json(e)),
        ));
    }
    session.ok_or_else(|| ProtocolError::transcript(last_line + 1, "missing config line"))
}
