//! Work budgets for exhaustive searches.

/// Environment variable overriding every default budget.
pub const BUDGET_ENV: &str = "PROPS_ENGINE_BUDGET";

/// Default cap on the order of materialized automorphism groups.
pub const DEFAULT_AUT_CAP: usize = 10_000;

/// Default number of congruence-saturation steps in the pushout oracle.
pub const DEFAULT_SATURATION_STEPS: usize = 1_000_000;

/// Default cap on the number of graph classes an enumeration may produce.
pub const DEFAULT_ENUMERATION_CAP: usize = 2_000_000;

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Budget {
    pub aut_cap: usize,
    pub saturation_steps: usize,
    pub enumeration_cap: usize,
}

impl Default for Budget {
    fn default() -> Self {
        Budget {
            aut_cap: DEFAULT_AUT_CAP,
            saturation_steps: DEFAULT_SATURATION_STEPS,
            enumeration_cap: DEFAULT_ENUMERATION_CAP,
        }
    }
}

impl Budget {
    /// Defaults, with the saturation and enumeration caps replaced by
    /// `PROPS_ENGINE_BUDGET` when it parses as an integer.
    pub fn from_env() -> Self {
        let mut b = Budget::default();
        if let Some(n) = std::env::var(BUDGET_ENV)
            .ok()
            .and_then(|v| v.trim().parse::<usize>().ok())
        {
            b.saturation_steps = n;
            b.enumeration_cap = n;
        }
        b
    }
}
