//! In-memory session store with idle expiry.
//!
//! The map lock is held only to look a session up; each session has its own
//! lock, so operations on one session are serialized while different
//! sessions proceed independently.

use std::collections::HashMap;
use std::sync::{Arc, Mutex, MutexGuard};
use std::time::{Duration, Instant};

use thiserror::Error;

use crate::engine::{Session, SessionId};
use crate::tree::DecisionTree;

pub const DEFAULT_TTL: Duration = Duration::from_secs(60 * 60);

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum StoreError {
    #[error("unknown session '{0}'")]
    UnknownSession(String),
}

struct Entry {
    session: Session,
    last_access: Instant,
}

pub struct SessionStore {
    tree: Arc<DecisionTree>,
    ttl: Duration,
    sessions: Mutex<HashMap<SessionId, Arc<Mutex<Entry>>>>,
}

fn lock<T>(m: &Mutex<T>) -> MutexGuard<'_, T> {
    // A panic inside a session callback must not wedge the whole store.
    m.lock().unwrap_or_else(|poisoned| poisoned.into_inner())
}

impl SessionStore {
    pub fn new(tree: Arc<DecisionTree>, ttl: Duration) -> Self {
        SessionStore {
            tree,
            ttl,
            sessions: Mutex::new(HashMap::new()),
        }
    }

    pub fn tree(&self) -> &Arc<DecisionTree> {
        &self.tree
    }

    pub fn ttl(&self) -> Duration {
        self.ttl
    }

    pub fn len(&self) -> usize {
        lock(&self.sessions).len()
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    pub fn create(&self) -> SessionId {
        let session = Session::start(Arc::clone(&self.tree));
        let id = session.id();
        let entry = Entry {
            session,
            last_access: Instant::now(),
        };
        lock(&self.sessions).insert(id, Arc::new(Mutex::new(entry)));
        id
    }

    /// Runs `f` on the session with exclusive access and refreshes its idle
    /// timer. Expired sessions are treated as unknown.
    pub fn with_session<R>(&self, id: SessionId, f: impl FnOnce(&mut Session) -> R) -> Result<R, StoreError> {
        self.with_session_at(id, Instant::now(), f)
    }

    pub fn with_session_at<R>(&self, id: SessionId, now: Instant, f: impl FnOnce(&mut Session) -> R) -> Result<R, StoreError> {
        let entry = lock(&self.sessions)
            .get(&id)
            .cloned()
            .ok_or_else(|| StoreError::UnknownSession(id.to_string()))?;
        let mut entry = lock(&entry);
        if now.saturating_duration_since(entry.last_access) > self.ttl {
            drop(entry);
            lock(&self.sessions).remove(&id);
            return Err(StoreError::UnknownSession(id.to_string()));
        }
        entry.last_access = now;
        Ok(f(&mut entry.session))
    }

    pub fn remove(&self, id: SessionId) -> bool {
        lock(&self.sessions).remove(&id).is_some()
    }

    /// Drops sessions idle for longer than the TTL; returns how many.
    pub fn purge_expired(&self) -> usize {
        self.purge_expired_at(Instant::now())
    }

    pub fn purge_expired_at(&self, now: Instant) -> usize {
        let mut sessions = lock(&self.sessions);
        let before = sessions.len();
        sessions.retain(|_, entry| now.saturating_duration_since(lock(entry).last_access) <= self.ttl);
        before - sessions.len()
    }
}
