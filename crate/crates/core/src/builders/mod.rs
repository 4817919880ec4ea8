//! Builders for the standard example spaces: nerves of finite categories,
//! monotone surjections under ordinal sum, hereditary interval families and
//! finite sets with surjections.

mod category;
mod faa_di_bruno;
mod intervals;
mod monotone;
mod poset;

pub use category::{additive_chain, nerve_of_category, Arrow, FiniteCategorySpec};
pub use faa_di_bruno::{finite_surjections_weighted, finite_surjections_weighted_with, Forest, Tree};
pub use intervals::{interval_family_space, interval_family_space_with, IntervalFamily, IntervalFamilySpec};
pub use monotone::{monotone_surjection_data, monotone_surjection_space, surjection_category};
pub use poset::{Canonical, Poset};

use crate::error::{Error, Result};

/// Environment variable capping the number of enumerated simplices.
pub const BUDGET_VAR: &str = "INCIDENCE_ENUM_BUDGET";

const DEFAULT_BUDGET: usize = 5_000_000;

/// Running count of enumerated objects against the configured cap.
#[derive(Clone, Debug)]
pub struct Budget {
    limit: usize,
    spent: usize,
}

impl Budget {
    pub fn new(limit: usize) -> Self {
        Budget { limit, spent: 0 }
    }

    /// Reads the cap from [`BUDGET_VAR`], falling back to a default.
    pub fn from_env() -> Self {
        let limit = std::env::var(BUDGET_VAR).ok().and_then(|v| v.trim().parse().ok()).unwrap_or(DEFAULT_BUDGET);
        Budget::new(limit)
    }

    pub fn spend(&mut self, n: usize) -> Result<()> {
        self.spent = self.spent.saturating_add(n);
        if self.spent > self.limit {
            return Err(Error::BudgetExceeded(format!(
                "enumerated {} objects, budget is {} (set {BUDGET_VAR} to raise it)",
                self.spent, self.limit
            )));
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn budget_overflow_is_an_error() {
        let mut b = Budget::new(10);
        assert!(b.spend(6).is_ok());
        assert!(matches!(b.spend(6), Err(Error::BudgetExceeded(_))));
    }
}
