use std::time::{Duration, Instant};

use serde::Serialize;

use crate::error::{Error, Result};

/// Limits for the exact searches.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct SearchBudget {
    /// Largest state count tried by the minimization searches.
    pub max_states: usize,
    /// Search nodes visited per search.
    pub max_nodes: u64,
    /// Wall-clock limit per search.
    pub time_limit: Option<Duration>,
}

impl Default for SearchBudget {
    fn default() -> Self {
        SearchBudget {
            max_states: 16,
            max_nodes: 10_000_000,
            time_limit: None,
        }
    }
}

impl SearchBudget {
    pub fn with_nodes(max_nodes: u64) -> Self {
        SearchBudget {
            max_nodes,
            ..Self::default()
        }
    }

    pub(crate) fn meter(&self) -> Meter {
        Meter {
            nodes: 0,
            max_nodes: self.max_nodes,
            deadline: self.time_limit.map(|t| (Instant::now() + t, t)),
        }
    }
}

/// Node counter shared by one search.
#[derive(Debug)]
pub(crate) struct Meter {
    pub nodes: u64,
    max_nodes: u64,
    deadline: Option<(Instant, Duration)>,
}

impl Meter {
    pub fn tick(&mut self, n: u64) -> Result<()> {
        self.nodes += n;
        if self.nodes > self.max_nodes {
            return Err(Error::budget("search nodes", self.max_nodes));
        }
        if self.nodes % 4096 < n {
            if let Some((end, limit)) = self.deadline {
                if Instant::now() > end {
                    return Err(Error::budget("search time (ms)", limit.as_millis() as u64));
                }
            }
        }
        Ok(())
    }

    /// Fails if `n` more nodes would exceed the limit, without charging them.
    pub fn ensure(&self, n: u64) -> Result<()> {
        if self.nodes.saturating_add(n) > self.max_nodes {
            return Err(Error::budget("search nodes", self.max_nodes));
        }
        Ok(())
    }
}
