use std::sync::atomic::{AtomicBool, Ordering};
use std::sync::Arc;

use crate::error::{Error, Result};

/// Default cap on visited search states for enumeration and counting.
pub const DEFAULT_NODE_BUDGET: u64 = 10_000_000;

/// Cooperative limit for exhaustive searches: a node cap plus an optional
/// cancellation flag that another thread may raise.
#[derive(Debug, Clone)]
pub struct Budget {
    max_nodes: u64,
    cancel: Option<Arc<AtomicBool>>,
}

impl Default for Budget {
    fn default() -> Self {
        Self::new(DEFAULT_NODE_BUDGET)
    }
}

impl Budget {
    pub fn new(max_nodes: u64) -> Self {
        Budget {
            max_nodes,
            cancel: None,
        }
    }

    pub fn unlimited() -> Self {
        Self::new(u64::MAX)
    }

    pub fn with_cancel(mut self, flag: Arc<AtomicBool>) -> Self {
        self.cancel = Some(flag);
        self
    }

    pub fn max_nodes(&self) -> u64 {
        self.max_nodes
    }

    pub fn meter(&self) -> Meter<'_> {
        Meter {
            budget: self,
            used: 0,
        }
    }
}

/// Running node counter tied to a [`Budget`].
#[derive(Debug)]
pub struct Meter<'a> {
    budget: &'a Budget,
    used: u64,
}

impl Meter<'_> {
    pub fn tick(&mut self) -> Result<()> {
        self.used += 1;
        if self.used > self.budget.max_nodes {
            return Err(Error::BudgetExceeded(self.budget.max_nodes));
        }
        if let Some(flag) = &self.budget.cancel {
            if flag.load(Ordering::Relaxed) {
                return Err(Error::Cancelled);
            }
        }
        Ok(())
    }

    pub fn used(&self) -> u64 {
        self.used
    }
}
