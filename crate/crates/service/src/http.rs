//! HTTP/JSON front end over [`Session`].
//!
//! [`Service::handle`] maps a request to a status and JSON body without any
//! I/O, so tests can drive it directly; [`serve`] wires it to `tiny_http`.

use std::collections::BTreeMap;
use std::sync::{Arc, Mutex, MutexGuard};

use serde::{Deserialize, Serialize};
use xplain_core::ast::Atom;

use crate::api::{self, ApiError, ExplainRequest, Limits, Mode};
use crate::session::{FactOp, Session};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Response {
    pub status: u16,
    pub body: String,
}

impl Response {
    fn json<T: Serialize>(status: u16, value: &T) -> Response {
        Response {
            status,
            body: api::to_json(value),
        }
    }

    fn error(e: &ApiError) -> Response {
        Response::json(e.kind.http_status(), e)
    }
}

#[derive(Serialize, Deserialize)]
pub struct CreateRequest {
    pub program: String,
    #[serde(default)]
    pub space: Option<String>,
}

#[derive(Serialize, Deserialize)]
pub struct CreateResponse {
    pub id: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExplainBody {
    pub atom: String,
    pub mode: Mode,
    #[serde(default)]
    pub alternatives: Option<usize>,
    #[serde(default)]
    pub model: Option<Vec<String>>,
}

/// Target is one atom, or an atom list for `not-an-answer-set`.
#[derive(Serialize, Deserialize)]
#[serde(untagged)]
pub enum Target {
    One(String),
    Many(Vec<String>),
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ContrastBody {
    pub mode: String,
    pub target: Target,
    /// Fact-space text; defaults to the space the session was created with.
    #[serde(default)]
    pub space: Option<String>,
    #[serde(default)]
    pub all: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct AbduceBody {
    pub observation: String,
    pub abducibles: Vec<String>,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct MusBody {
    #[serde(default)]
    pub soft: Option<Vec<String>>,
    #[serde(default)]
    pub k: Option<usize>,
}

#[derive(Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum FactsOp {
    Assume,
    Retract,
    Undo,
    /// Several edits as one undo step.
    Apply,
}

#[derive(Serialize, Deserialize)]
pub struct Edit {
    pub op: FactOp,
    pub fact: String,
}

#[derive(Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct FactsBody {
    pub op: FactsOp,
    #[serde(default)]
    pub fact: Option<String>,
    #[serde(default)]
    pub edits: Vec<Edit>,
}

#[derive(Default)]
pub struct Service {
    sessions: Mutex<BTreeMap<u64, Arc<Mutex<Session>>>>,
    next_id: Mutex<u64>,
    limits: Limits,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    m.lock().unwrap_or_else(|e| e.into_inner())
}

fn parse_body<'a, T: Deserialize<'a>>(body: &'a str) -> Result<T, ApiError> {
    serde_json::from_str(body).map_err(|e| ApiError::new(crate::api::ErrorKind::Parse, "bad_request", e.to_string()))
}

impl Service {
    pub fn new(limits: Limits) -> Service {
        Service {
            limits,
            ..Default::default()
        }
    }

    /// Create a session directly, e.g. for a program given on the command line.
    pub fn create(&self, session: Session) -> String {
        let mut next = lock(&self.next_id);
        *next += 1;
        let id = *next;
        lock(&self.sessions).insert(id, Arc::new(Mutex::new(session)));
        id.to_string()
    }

    fn session(&self, id: &str) -> Result<Arc<Mutex<Session>>, ApiError> {
        id.parse::<u64>()
            .ok()
            .and_then(|n| lock(&self.sessions).get(&n).cloned())
            .ok_or_else(|| ApiError::not_found(format!("no session `{id}`")))
    }

    pub fn handle(&self, method: &str, url: &str, body: &str) -> Response {
        match self.route(method, url, body) {
            Ok(r) => r,
            Err(e) => Response::error(&e),
        }
    }

    fn route(&self, method: &str, url: &str, body: &str) -> Result<Response, ApiError> {
        let (path, query) = url.split_once('?').unwrap_or((url, ""));
        let segments: Vec<&str> = path.trim_matches('/').split('/').collect();
        match (method, &segments[..]) {
            ("POST", ["sessions"]) => {
                let req = match serde_json::from_str::<CreateRequest>(body) {
                    Ok(r) => r,
                    Err(_) if !body.trim_start().starts_with('{') => CreateRequest {
                        program: body.to_string(),
                        space: None,
                    },
                    Err(e) => return Err(ApiError::new(api::ErrorKind::Parse, "bad_request", e.to_string())),
                };
                let mut session = Session::from_text(&req.program, self.limits)?;
                if let Some(space) = &req.space {
                    session.set_space(api::load_space(space)?);
                }
                Ok(Response::json(201, &CreateResponse { id: self.create(session) }))
            }
            ("GET", ["sessions", id]) => {
                let s = self.session(id)?;
                let state = lock(&s).state();
                Ok(Response::json(200, &state))
            }
            ("DELETE", ["sessions", id]) => {
                self.session(id)?;
                lock(&self.sessions).remove(&id.parse::<u64>().expect("checked"));
                Ok(Response::json(200, &CreateResponse { id: id.to_string() }))
            }
            ("GET", ["sessions", id, "models"]) => {
                let mut limit = None;
                for pair in query.split('&').filter(|p| !p.is_empty()) {
                    match pair.split_once('=') {
                        Some(("limit", n)) => {
                            limit = Some(n.parse().map_err(|_| ApiError::usage(format!("bad limit `{n}`")))?)
                        }
                        _ => return Err(ApiError::usage(format!("unknown query parameter `{pair}`"))),
                    }
                }
                let s = self.session(id)?;
                let r = lock(&s).models(limit)?;
                Ok(Response::json(200, &r))
            }
            ("POST", ["sessions", id, "explain"]) => {
                let b: ExplainBody = parse_body(body)?;
                let model = match &b.model {
                    Some(m) => Some(m.iter().map(|a| api::parse_atom_arg(a)).collect::<Result<Vec<Atom>, _>>()?),
                    None => None,
                };
                let req = ExplainRequest {
                    atom: api::parse_atom_arg(&b.atom)?,
                    mode: b.mode,
                    model,
                    alternatives: b.alternatives.unwrap_or(1),
                    dot: false,
                };
                let s = self.session(id)?;
                let r = lock(&s).explain(&req)?;
                Ok(Response::json(200, &r))
            }
            ("POST", ["sessions", id, "contrast"]) => {
                let b: ContrastBody = parse_body(body)?;
                let target = match &b.target {
                    Target::One(t) => t.clone(),
                    Target::Many(v) => v.join(", "),
                };
                let space = b.space.as_deref().map(api::load_space).transpose()?;
                let s = self.session(id)?;
                let r = lock(&s).contrast(&b.mode, &target, space.as_ref(), b.all.unwrap_or(1))?;
                Ok(Response::json(200, &r))
            }
            ("POST", ["sessions", id, "abduce"]) => {
                let b: AbduceBody = parse_body(body)?;
                let obs = api::parse_atom_arg(&b.observation)?;
                let abducibles = b.abducibles.iter().map(|a| api::parse_atom_arg(a)).collect::<Result<Vec<_>, _>>()?;
                let s = self.session(id)?;
                let r = lock(&s).abduce(&obs, &abducibles)?;
                Ok(Response::json(200, &r))
            }
            ("POST", ["sessions", id, "mus"]) => {
                let b: MusBody = if body.trim().is_empty() { MusBody { soft: None, k: None } } else { parse_body(body)? };
                let s = self.session(id)?;
                let r = lock(&s).inconsistency(b.soft.as_deref(), b.k.unwrap_or(usize::MAX))?;
                Ok(Response::json(200, &r))
            }
            ("POST", ["sessions", id, "facts"]) => {
                let b: FactsBody = parse_body(body)?;
                let s = self.session(id)?;
                let mut s = lock(&s);
                let single = |op: FactOp| -> Result<Vec<(FactOp, Atom)>, ApiError> {
                    let fact = b.fact.as_deref().ok_or_else(|| ApiError::usage("`fact` is required"))?;
                    Ok(vec![(op, api::parse_atom_arg(fact.trim().trim_end_matches('.'))?)])
                };
                match b.op {
                    FactsOp::Undo => s.undo()?,
                    FactsOp::Assume => s.edit(&single(FactOp::Assume)?)?,
                    FactsOp::Retract => s.edit(&single(FactOp::Retract)?)?,
                    FactsOp::Apply => {
                        let edits = b
                            .edits
                            .iter()
                            .map(|e| Ok((e.op, api::parse_atom_arg(e.fact.trim().trim_end_matches('.'))?)))
                            .collect::<Result<Vec<_>, ApiError>>()?;
                        s.edit(&edits)?
                    }
                }
                Ok(Response::json(200, &s.state()))
            }
            _ => Err(ApiError::new(api::ErrorKind::NotFound, "no_route", format!("no route for {method} {path}"))),
        }
    }
}

/// Serve requests on `server` with `threads` workers until the server closes.
pub fn serve(service: Arc<Service>, server: Arc<tiny_http::Server>, threads: usize) {
    let workers: Vec<_> = (0..threads.max(1))
        .map(|_| {
            let service = Arc::clone(&service);
            let server = Arc::clone(&server);
            std::thread::spawn(move || {
                for mut request in server.incoming_requests() {
                    let mut body = String::new();
                    let response = match request.as_reader().read_to_string(&mut body) {
                        Ok(_) => service.handle(request.method().as_str(), request.url(), &body),
                        Err(e) => Response::error(&ApiError::parse(format!("unreadable body: {e}"))),
                    };
                    let header = tiny_http::Header::from_bytes("Content-Type", "application/json")
                        .expect("static header");
                    let reply = tiny_http::Response::from_string(response.body)
                        .with_status_code(response.status)
                        .with_header(header);
                    let _ = request.respond(reply);
                }
            })
        })
        .collect();
    for w in workers {
        let _ = w.join();
    }
}

