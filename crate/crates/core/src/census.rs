//! Exhaustive enumeration of small automata with per-item consistency
//! checks.
//!
//! An automaton is encoded by its code vector: the columns `δ_i` in letter
//! order followed by the rows `ρ_x` in state order. Indices enumerate code
//! vectors in lexicographic order, and an index is kept iff its code is the
//! least one over all relabelings of states and letters. The stream is
//! therefore sorted and resumable from a single index.

use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::automaton::{are_isomorphic, MealyAutomaton};
use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::orbit_tree::OrbitTree;
use crate::orbits::{connection_degree, ConnectionDegree};
use crate::order::{classify_group, Classification};

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusConfig {
    pub states: usize,
    pub letters: usize,
    pub invertible: bool,
    pub reversible: bool,
    /// Keep only connected (`Some(true)`) or disconnected items.
    pub connected: Option<bool>,
    /// Orbit-tree depth of the structural checks.
    pub depth: usize,
    /// Indices handled per parallel batch (and per checkpoint).
    pub batch: u64,
}

impl CensusConfig {
    pub fn new(states: usize, letters: usize) -> Self {
        CensusConfig {
            states,
            letters,
            invertible: true,
            reversible: true,
            connected: None,
            depth: 5,
            batch: 256,
        }
    }
}

/// Enumerates permutations or arbitrary maps of `{0..n}` in lexicographic
/// order.
fn maps(n: usize, bijective: bool) -> Vec<Vec<usize>> {
    let mut out = Vec::new();
    let mut cur = Vec::with_capacity(n);
    fn rec(n: usize, bijective: bool, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == n {
            out.push(cur.clone());
            return;
        }
        for v in 0..n {
            if bijective && cur.contains(&v) {
                continue;
            }
            cur.push(v);
            rec(n, bijective, cur, out);
            cur.pop();
        }
    }
    rec(n, bijective, &mut cur, &mut out);
    out
}

fn permutations(n: usize) -> Vec<Vec<usize>> {
    maps(n, true)
}

pub struct Census {
    cfg: CensusConfig,
    columns: Vec<Vec<usize>>,
    rows: Vec<Vec<usize>>,
    state_perms: Vec<Vec<usize>>,
    letter_perms: Vec<Vec<usize>>,
}

/// One line of the census stream.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct ItemReport {
    pub index: u64,
    pub code: Vec<usize>,
    pub automaton: String,
    pub invertible: bool,
    pub reversible: bool,
    pub bireversible: bool,
    pub connection_degree: Option<ConnectionDegree>,
    pub verdict: String,
    pub certificate: Option<String>,
    pub dual_verdict: String,
    pub violations: Vec<String>,
}

#[derive(Clone, Debug, Default, PartialEq, Eq, Serialize, Deserialize)]
pub struct CensusSummary {
    pub items: usize,
    pub finite: usize,
    pub infinite: usize,
    pub unknown: usize,
    /// Items that are not invertible and get no verdict.
    pub unclassified: usize,
    pub violations: usize,
    pub next_index: u64,
    pub complete: bool,
}

impl Census {
    pub fn new(cfg: CensusConfig) -> Result<Self> {
        if cfg.states == 0 || cfg.letters == 0 || cfg.states > 4 || cfg.letters > 4 {
            return Err(Error::InvalidArgument("census sizes must lie in 1..=4".into()));
        }
        let columns = maps(cfg.states, cfg.reversible);
        let rows = maps(cfg.letters, cfg.invertible);
        let total = (columns.len() as u128).pow(cfg.letters as u32) * (rows.len() as u128).pow(cfg.states as u32);
        if total > u64::MAX as u128 {
            return Err(Error::InvalidArgument("census too large".into()));
        }
        Ok(Census {
            state_perms: permutations(cfg.states),
            letter_perms: permutations(cfg.letters),
            columns,
            rows,
            cfg,
        })
    }

    pub fn config(&self) -> &CensusConfig {
        &self.cfg
    }

    /// Number of raw indices.
    pub fn len(&self) -> u64 {
        (self.columns.len() as u64).pow(self.cfg.letters as u32) * (self.rows.len() as u64).pow(self.cfg.states as u32)
    }

    pub fn is_empty(&self) -> bool {
        self.len() == 0
    }

    /// Code vector of the automaton with raw index `idx`.
    pub fn code(&self, mut idx: u64) -> Vec<usize> {
        let (nq, nl) = (self.cfg.states, self.cfg.letters);
        let mut digits = vec![0usize; nl + nq];
        for k in (0..nq).rev() {
            digits[nl + k] = (idx % self.rows.len() as u64) as usize;
            idx /= self.rows.len() as u64;
        }
        for k in (0..nl).rev() {
            digits[k] = (idx % self.columns.len() as u64) as usize;
            idx /= self.columns.len() as u64;
        }
        let mut code = Vec::with_capacity(2 * nq * nl);
        for &d in &digits[..nl] {
            code.extend_from_slice(&self.columns[d]);
        }
        for &d in &digits[nl..] {
            code.extend_from_slice(&self.rows[d]);
        }
        code
    }

    pub fn automaton(&self, code: &[usize], name: String) -> MealyAutomaton {
        let (nq, nl) = (self.cfg.states, self.cfg.letters);
        MealyAutomaton::from_fn(
            name,
            (0..nq).map(|q| format!("q{q}")).collect(),
            (0..nl).map(|i| i.to_string()).collect(),
            |q, i| (code[i * nq + q], code[nq * nl + q * nl + i]),
        )
        .expect("census codes are well formed")
    }

    /// Whether no relabeling of states and letters gives a smaller code.
    pub fn is_canonical(&self, code: &[usize]) -> bool {
        let (nq, nl) = (self.cfg.states, self.cfg.letters);
        let mut img = vec![0usize; code.len()];
        for s in &self.state_perms {
            for t in &self.letter_perms {
                for q in 0..nq {
                    for i in 0..nl {
                        img[t[i] * nq + s[q]] = s[code[i * nq + q]];
                        img[nq * nl + s[q] * nl + t[i]] = t[code[nq * nl + q * nl + i]];
                    }
                }
                if img.as_slice() < code {
                    return false;
                }
            }
        }
        true
    }

    /// Continues from `resume` (start with the default summary), handing
    /// reports to `sink` in index order and calling `checkpoint` with the
    /// running totals after each batch.
    /// Stops early (incomplete summary) once `limit` indices were processed.
    pub fn run(
        &self,
        resume: CensusSummary,
        limit: Option<u64>,
        budgets: &Budgets,
        mut sink: impl FnMut(&ItemReport) -> Result<()>,
        mut checkpoint: impl FnMut(&CensusSummary) -> Result<()>,
    ) -> Result<CensusSummary> {
        let total = self.len();
        let start = resume.next_index;
        let end = limit.map_or(total, |l| total.min(start.saturating_add(l)));
        let mut summary = resume;
        let mut idx = start;
        while idx < end {
            let stop = end.min(idx + self.cfg.batch.max(1));
            let reports: Vec<Option<ItemReport>> = (idx..stop)
                .into_par_iter()
                .map(|i| self.item(i, budgets))
                .collect::<Result<_>>()?;
            for r in reports.iter().flatten() {
                summary.items += 1;
                match r.verdict.as_str() {
                    "Finite" => summary.finite += 1,
                    "Infinite" => summary.infinite += 1,
                    "Unknown" => summary.unknown += 1,
                    _ => summary.unclassified += 1,
                }
                summary.violations += r.violations.len();
                sink(r)?;
            }
            idx = stop;
            summary.next_index = idx;
            checkpoint(&summary)?;
        }
        summary.complete = idx >= total;
        Ok(summary)
    }

    /// Report for one raw index, or `None` when it is filtered out or not
    /// canonical.
    pub fn item(&self, index: u64, budgets: &Budgets) -> Result<Option<ItemReport>> {
        let code = self.code(index);
        if !self.is_canonical(&code) {
            return Ok(None);
        }
        let a = self.automaton(&code, format!("C{}x{}_{index}", self.cfg.states, self.cfg.letters));
        let reversible = a.is_reversible();
        let cd = if reversible {
            Some(connection_degree(&a, self.cfg.depth, budgets.member_budget)?)
        } else {
            None
        };
        if let Some(want) = self.cfg.connected {
            let connected = matches!(cd, Some(ConnectionDegree::Exact(d) | ConnectionDegree::AtLeast(d)) if d >= 1);
            if connected != want {
                return Ok(None);
            }
        }
        let mut violations = Vec::new();
        check_identities(&a, &mut violations);
        if reversible {
            check_tree(&a, cd.expect("reversible"), self.cfg.depth, budgets, &mut violations)?;
        }
        let (verdict, certificate, dual_verdict) = if a.is_invertible() {
            let v = classify_group(&a, budgets)?;
            let dual = a.dual();
            let dv = if dual.is_invertible() {
                Some(classify_group(&dual, budgets)?)
            } else {
                None
            };
            if let Some(dv) = &dv {
                if (v.is_finite() && dv.is_infinite()) || (v.is_infinite() && dv.is_finite()) {
                    violations.push(format!("dual verdict {} contradicts {}", dv.verdict(), v.verdict()));
                }
            }
            check_powers(&a, &v, budgets, &mut violations)?;
            let kind = format!("{:?}", v.certificate().kind);
            (
                v.verdict().to_string(),
                Some(kind),
                dv.map_or("n/a", |d| d.verdict()).to_string(),
            )
        } else {
            ("n/a".to_string(), None, "n/a".to_string())
        };
        Ok(Some(ItemReport {
            index,
            code,
            automaton: a.to_string(),
            invertible: a.is_invertible(),
            reversible,
            bireversible: a.is_bireversible(),
            connection_degree: cd,
            verdict,
            certificate,
            dual_verdict,
            violations,
        }))
    }
}

fn check_identities(a: &MealyAutomaton, v: &mut Vec<String>) {
    if a.dual().dual() != *a {
        v.push("dual is not an involution".into());
    }
    if a.is_reversible() != a.dual().is_invertible() {
        v.push("reversibility differs from invertibility of the dual".into());
    }
    if a.is_invertible() {
        match a.inverse().and_then(|i| i.inverse()) {
            Ok(b) if b == *a => {}
            _ => v.push("inverse is not an involution".into()),
        }
    }
}

/// Label sums, no full label below the connection degree, and levels
/// above a single-child node being connected.
fn check_tree(
    a: &MealyAutomaton,
    cd: ConnectionDegree,
    depth: usize,
    budgets: &Budgets,
    v: &mut Vec<String>,
) -> Result<()> {
    let nq = a.num_states() as u64;
    let mut t = OrbitTree::new(a, budgets.member_budget)?;
    t.expand_to_depth(depth)?;
    let d = match cd {
        ConnectionDegree::Exact(d) | ConnectionDegree::AtLeast(d) => d,
    };
    for level in 0..depth {
        for id in t.nodes_at_level(level) {
            let edges = t.edges_from(id).expect("expanded");
            if edges.iter().map(|e| e.label).sum::<u64>() != nq {
                v.push(format!("labels below a level-{level} node do not sum to {nq}"));
            }
            if edges.len() == 1 && (0..=level + 1).any(|l| t.nodes_at_level(l).len() != 1) {
                v.push(format!(
                    "single child at level {level} but some level up to {} is disconnected",
                    level + 1
                ));
            }
            if matches!(cd, ConnectionDegree::Exact(_)) && level >= d && edges.iter().any(|e| e.label == nq) && nq > 1 {
                v.push(format!("label {nq} at level {level}, below connection degree {d}"));
            }
        }
    }
    Ok(())
}

/// Minimized powers `p < q ≤ 4` isomorphic (states relabeled, alphabet
/// fixed) must come with a finite verdict.
fn check_powers(a: &MealyAutomaton, verdict: &Classification, budgets: &Budgets, v: &mut Vec<String>) -> Result<()> {
    let mut mins = Vec::new();
    for p in 1..=4 {
        match a.power(p, budgets.power_states) {
            Ok(ap) => mins.push(ap.minimize()),
            Err(e) if e.is_budget() => break,
            Err(e) => return Err(e),
        }
    }
    for q in 1..mins.len() {
        for p in 0..q {
            if are_isomorphic(&mins[p], &mins[q])? && !verdict.is_finite() {
                v.push(format!(
                    "minimized powers {} and {} are isomorphic but the verdict is {}",
                    p + 1,
                    q + 1,
                    verdict.verdict()
                ));
                return Ok(());
            }
        }
    }
    Ok(())
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn index_order_is_code_order() {
        let c = Census::new(CensusConfig::new(2, 2)).unwrap();
        assert_eq!(c.len(), 16);
        let codes: Vec<_> = (0..c.len()).map(|i| c.code(i)).collect();
        assert!(codes.windows(2).all(|w| w[0] < w[1]));
        let a = c.automaton(&codes[5], "t".into());
        assert!(a.is_invertible() && a.is_reversible());
    }

    #[test]
    fn canonical_codes_pick_one_per_class() {
        let c = Census::new(CensusConfig::new(2, 2)).unwrap();
        let canon: Vec<u64> = (0..c.len()).filter(|&i| c.is_canonical(&c.code(i))).collect();
        // every raw automaton is a relabeling of exactly one canonical one
        for i in 0..c.len() {
            let a = c.automaton(&c.code(i), "a".into());
            let hits = canon
                .iter()
                .filter(|&&j| {
                    let b = c.automaton(&c.code(j), "b".into());
                    c.letter_perms.iter().any(|t| {
                        let relabeled = MealyAutomaton::from_fn(
                            "r",
                            b.state_names().to_vec(),
                            b.letter_names().to_vec(),
                            |q, i| {
                                let ti = t.iter().position(|&x| x == i).unwrap();
                                (b.next(q, ti), t[b.output(q, ti)])
                            },
                        )
                        .unwrap();
                        are_isomorphic(&a, &relabeled).unwrap()
                    })
                })
                .count();
            assert_eq!(hits, 1, "index {i}");
        }
    }

    #[test]
    fn one_state_items_are_finite() {
        let mut cfg = CensusConfig::new(1, 3);
        cfg.reversible = false;
        let c = Census::new(cfg).unwrap();
        let mut reports = Vec::new();
        let s = c
            .run(
                CensusSummary::default(),
                None,
                &Budgets::default(),
                |r| {
                    reports.push(r.clone());
                    Ok(())
                },
                |_| Ok(()),
            )
            .unwrap();
        assert!(s.complete);
        assert_eq!(s.items, 3);
        assert!(reports.iter().all(|r| r.verdict == "Finite" && r.violations.is_empty()));
    }
}
