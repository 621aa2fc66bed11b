use serde::{Deserialize, Serialize};

/// Resource caps shared by every search. All are counts, never wall time.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Budgets {
    /// Largest orbit (component) materialized by a breadth-first closure.
    pub member_budget: usize,
    /// Deepest level scanned when looking for the connection degree.
    pub max_level: usize,
    /// Depth of orbit-tree exploration for block profiles and heavy branches.
    pub depth: usize,
    /// Largest power tested by the order semidecision.
    pub k_budget: usize,
    /// Number of powers `u^n` whose components are measured.
    pub growth_levels: usize,
    /// Distinct actions allowed in a semigroup closure.
    pub closure_elements: usize,
    /// Orbit size cap when computing one action key inside a closure.
    pub closure_member_budget: usize,
    /// Longest cyclic word enumerated by the infinite-order search.
    pub cycle_length: usize,
    /// Longest filler walk tried by the cyclic-equivalent construction.
    pub filler_length: usize,
    /// Rounds of the cyclic-equivalent construction before giving up.
    pub rounds: usize,
    /// Largest power automaton materialized for isomorphism checks.
    pub power_states: usize,
}

impl Default for Budgets {
    fn default() -> Self {
        Budgets {
            member_budget: 1_000_000,
            max_level: 12,
            depth: 12,
            k_budget: 50,
            growth_levels: 8,
            closure_elements: 4_000,
            closure_member_budget: 20_000,
            cycle_length: 8,
            filler_length: 10,
            rounds: 64,
            power_states: 10_000,
        }
    }
}

impl Budgets {
    /// Multiplies every size budget by `factor` (levels and lengths are
    /// left untouched; they are exponents, not sizes).
    pub fn scaled(&self, factor: f64) -> Self {
        let s = |v: usize| ((v as f64) * factor).round().max(1.0) as usize;
        Budgets {
            member_budget: s(self.member_budget),
            k_budget: s(self.k_budget),
            closure_elements: s(self.closure_elements),
            closure_member_budget: s(self.closure_member_budget),
            rounds: s(self.rounds),
            power_states: s(self.power_states),
            ..self.clone()
        }
    }
}
