//! Element orders, semigroup closures and the finiteness classifier.
//!
//! Every verdict that claims something is backed by a [`Certificate`]
//! that [`verify_certificate`] re-checks from scratch.

use std::collections::VecDeque;

use rustc_hash::{FxHashMap, FxHashSet};
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automaton::MealyAutomaton;
use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::orbit_tree::{HeavyBranch, OrbitTree, ReductionEdge};
use crate::orbits::{component_of, dual_step_into};
use crate::word::{Codec, LetterWord, StateWord, WordKey};
use crate::words::WindowGraph;

/// A letter word on which `ρ_u` is not the identity, found breadth-first
/// through the states reachable from `u` in `A^{|u|}`.
pub fn nontrivial_witness(a: &MealyAutomaton, u: &[usize], budget: usize) -> Result<Option<LetterWord>> {
    let codec = Codec::new(a.num_states(), u.len());
    let mut seen: FxHashMap<WordKey, ()> = FxHashMap::default();
    let mut nodes: Vec<(usize, usize)> = vec![(usize::MAX, 0)];
    let mut words: Vec<Vec<usize>> = vec![u.to_vec()];
    seen.insert(codec.encode(u), ());
    let mut head = 0;
    let mut buf = Vec::new();
    while head < words.len() {
        let v = words[head].clone();
        if let Some(i) = (0..a.num_letters()).find(|&i| a.act_letter(&v, i) != i) {
            let mut s = vec![i];
            let mut k = head;
            while nodes[k].0 != usize::MAX {
                s.push(nodes[k].1);
                k = nodes[k].0;
            }
            s.reverse();
            return Ok(Some(LetterWord(s)));
        }
        for i in 0..a.num_letters() {
            dual_step_into(a, i, &v, &mut buf);
            if seen.insert(codec.encode(&buf), ()).is_none() {
                if words.len() >= budget {
                    return Err(Error::budget("triviality closure", budget, words.len()));
                }
                nodes.push((head, i));
                words.push(buf.clone());
            }
        }
        head += 1;
    }
    Ok(None)
}

/// Whether `ρ_u` is the identity on every letter word.
pub fn is_trivial_action(a: &MealyAutomaton, u: &[usize], budget: usize) -> Result<bool> {
    Ok(nontrivial_witness(a, u, budget)?.is_none())
}

/// Size of the set of states reachable from `u` in `A^{|u|}`.
pub fn closure_size(a: &MealyAutomaton, u: &[usize], budget: usize) -> Result<usize> {
    crate::orbits::orbit_find(a, u, budget, |_| false).map(|(_, n)| n)
}

/// Whether `ρ_u = ρ_v`, by a synchronized search over pairs of reachable
/// states. Works for words of different lengths.
pub fn actions_equal(a: &MealyAutomaton, u: &[usize], v: &[usize], budget: usize) -> Result<bool> {
    let codec = Codec::new(a.num_states(), u.len() + v.len());
    let split = u.len();
    let mut start = u.to_vec();
    start.extend_from_slice(v);
    let mut seen: FxHashMap<WordKey, ()> = FxHashMap::default();
    seen.insert(codec.encode(&start), ());
    let mut queue = VecDeque::from([start]);
    let (mut bu, mut bv) = (Vec::new(), Vec::new());
    while let Some(pair) = queue.pop_front() {
        let (p, q) = pair.split_at(split);
        for i in 0..a.num_letters() {
            if a.act_letter(p, i) != a.act_letter(q, i) {
                return Ok(false);
            }
            dual_step_into(a, i, p, &mut bu);
            dual_step_into(a, i, q, &mut bv);
            bu.extend_from_slice(&bv);
            if seen.insert(codec.encode(&bu), ()).is_none() {
                if seen.len() > budget {
                    return Err(Error::budget("equality closure", budget, seen.len()));
                }
                queue.push_back(bu.clone());
            }
        }
    }
    Ok(true)
}

/// Component sizes of `u, u^2, …`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Growth {
    pub sizes: Vec<usize>,
    /// False when a budget stopped the scan before the requested level.
    pub complete: bool,
}

pub fn component_growth(a: &MealyAutomaton, u: &[usize], levels: usize, budget: usize) -> Result<Growth> {
    if !a.is_reversible() {
        return Err(Error::NotReversible);
    }
    let mut sizes = Vec::with_capacity(levels);
    let w = StateWord::from(u);
    for n in 1..=levels {
        match component_of(a, &w.pow(n), budget) {
            Ok(c) => sizes.push(c.size()),
            Err(e) if e.is_budget() => return Ok(Growth { sizes, complete: false }),
            Err(e) => return Err(e),
        }
    }
    Ok(Growth { sizes, complete: true })
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "verdict")]
pub enum OrderVerdict {
    /// `ρ_{u^order}` is trivial; `closure` states were reached to confirm it.
    Finite { order: usize, closure: usize },
    /// `witnesses[j-1]` is moved by `ρ_{u^j}`.
    AtLeast { k: usize, witnesses: Vec<LetterWord> },
}

pub fn element_order(a: &MealyAutomaton, u: &[usize], k_budget: usize, budget: usize) -> Result<OrderVerdict> {
    if u.is_empty() {
        return Err(Error::InvalidArgument("order of the empty word".into()));
    }
    if !a.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let w = StateWord::from(u);
    let mut witnesses = Vec::new();
    for j in 1..=k_budget {
        let p = w.pow(j);
        match nontrivial_witness(a, &p, budget)? {
            Some(s) => witnesses.push(s),
            None => {
                return Ok(OrderVerdict::Finite {
                    order: j,
                    closure: closure_size(a, &p, budget)?,
                })
            }
        }
    }
    Ok(OrderVerdict::AtLeast { k: k_budget, witnesses })
}

/// Canonical description of `ρ_u`: the minimized part of `A^{|u|}`
/// reachable from `u`, numbered breadth-first from `u`'s class.
pub(crate) fn action_key(a: &MealyAutomaton, u: &[usize], budget: usize) -> Result<Vec<u32>> {
    let nl = a.num_letters();
    let codec = Codec::new(a.num_states(), u.len());
    let mut index: FxHashMap<WordKey, usize> = FxHashMap::default();
    index.insert(codec.encode(u), 0);
    let mut words = vec![u.to_vec()];
    let mut trans: Vec<usize> = Vec::new();
    let mut outs: Vec<u32> = Vec::new();
    let mut buf = Vec::new();
    let mut head = 0;
    while head < words.len() {
        for i in 0..nl {
            let v = &words[head];
            outs.push(a.act_letter(v, i) as u32);
            dual_step_into(a, i, v, &mut buf);
            let k = codec.encode(&buf);
            let id = match index.get(&k) {
                Some(&id) => id,
                None => {
                    if words.len() >= budget {
                        return Err(Error::budget("action closure", budget, words.len()));
                    }
                    let id = words.len();
                    index.insert(k, id);
                    words.push(buf.clone());
                    id
                }
            };
            trans.push(id);
        }
        head += 1;
    }
    let n = words.len();
    let class = refine(n, nl, |s| outs[s * nl..(s + 1) * nl].to_vec(), |s, i| trans[s * nl + i]);
    let classes = class.iter().max().map_or(0, |m| m + 1);
    let mut canon = vec![u32::MAX; classes];
    let mut rep = vec![usize::MAX; classes];
    for s in 0..n {
        if rep[class[s]] == usize::MAX {
            rep[class[s]] = s;
        }
    }
    let mut order = vec![class[0]];
    canon[class[0]] = 0;
    let mut key = Vec::with_capacity(classes * nl * 2);
    let mut h = 0;
    while h < order.len() {
        let s = rep[order[h]];
        for i in 0..nl {
            let c = class[trans[s * nl + i]];
            if canon[c] == u32::MAX {
                canon[c] = order.len() as u32;
                order.push(c);
            }
            key.push(outs[s * nl + i]);
            key.push(canon[c]);
        }
        h += 1;
    }
    Ok(key)
}

/// Moore partition refinement on an abstract automaton with `n` states.
fn refine(n: usize, nl: usize, out: impl Fn(usize) -> Vec<u32>, next: impl Fn(usize, usize) -> usize) -> Vec<usize> {
    let mut class = number((0..n).map(&out));
    loop {
        let sig = (0..n).map(|s| {
            let mut v = vec![class[s] as u32];
            v.extend((0..nl).map(|i| class[next(s, i)] as u32));
            v
        });
        let refined = number(sig);
        let before = class.iter().max().copied();
        let after = refined.iter().max().copied();
        class = refined;
        if before == after {
            return class;
        }
    }
}

fn number(sigs: impl Iterator<Item = Vec<u32>>) -> Vec<usize> {
    let mut ids: FxHashMap<Vec<u32>, usize> = FxHashMap::default();
    sigs.map(|s| {
        let next = ids.len();
        *ids.entry(s).or_insert(next)
    })
    .collect()
}

/// The distinct actions of all nonempty products of `generators`, each
/// with a shortest representative.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Closure {
    pub generators: Vec<usize>,
    pub elements: Vec<StateWord>,
}

pub fn semigroup_closure(a: &MealyAutomaton, generators: &[usize], budgets: &Budgets) -> Result<Closure> {
    let mut keys: FxHashSet<Vec<u32>> = FxHashSet::default();
    let mut elements: Vec<StateWord> = Vec::new();
    for &g in generators {
        if keys.insert(action_key(a, &[g], budgets.closure_member_budget)?) {
            elements.push(StateWord(vec![g]));
        }
    }
    let mut head = 0;
    while head < elements.len() {
        for &g in generators {
            let w = elements[head].concat(&[g]);
            let k = action_key(a, &w, budgets.closure_member_budget)?;
            if !keys.contains(&k) {
                if elements.len() >= budgets.closure_elements {
                    return Err(Error::budget(
                        "semigroup elements",
                        budgets.closure_elements,
                        elements.len(),
                    ));
                }
                keys.insert(k);
                elements.push(w);
            }
        }
        head += 1;
    }
    Ok(Closure {
        generators: generators.to_vec(),
        elements,
    })
}

fn closure_is_valid(a: &MealyAutomaton, c: &Closure, budget: usize) -> bool {
    let check = || -> Result<bool> {
        let mut keys = FxHashMap::default();
        for e in &c.elements {
            if e.is_empty() || keys.insert(action_key(a, e, budget)?, ()).is_some() {
                return Ok(false);
            }
        }
        for &g in &c.generators {
            if !keys.contains_key(&action_key(a, &[g], budget)?) {
                return Ok(false);
            }
        }
        for e in &c.elements {
            for &g in &c.generators {
                if !keys.contains_key(&action_key(a, &e.concat(&[g]), budget)?) {
                    return Ok(false);
                }
            }
        }
        Ok(true)
    };
    !c.generators.is_empty() && c.generators.iter().all(|&g| g < a.num_states()) && check().unwrap_or(false)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub enum CertificateKind {
    SemigroupClosure,
    NotBireversible,
    AllSplitAtDegree,
    InfiniteOrderElement,
    HeavyBranchEvidence,
}

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Certificate {
    pub kind: CertificateKind,
    pub statement: String,
    pub data: Value,
}

const CLOSURE_STATEMENT: &str = "The actions of the states generate a finite semigroup, listed in full; \
an automaton group is finite exactly when the semigroup generated by its states is finite.";
const NOT_BIREVERSIBLE_STATEMENT: &str =
    "The automaton is invertible and reversible but its inverse is not reversible; such an automaton generates an infinite group.";
const ALL_SPLIT_STATEMENT: &str = "Every edge leaving the connection-degree vertex of the orbit tree has label 1. \
Each deeper edge lifts to one of them, so its label is 1 as well, components stay bounded and the group is finite.";
const INFINITE_ORDER_STATEMENT: &str =
    "For a connected 3-state invertible reversible automaton generating an infinite \
group, every cyclically orbital word acts with infinite order.";
const INFINITE_ORDER_EVIDENCE: &str = "Evidence only: the group is not certified infinite, so the listed non-trivial \
powers and component growth do not prove that the word has infinite order.";
const HEAVY_BRANCH_STATEMENT: &str = "Inconclusive: no certificate was found within the budgets. \
The data lists the explored label-1-free branch of the orbit tree and any infinite-order candidate.";

#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
#[serde(tag = "verdict", content = "certificate")]
pub enum Classification {
    Finite(Certificate),
    Infinite(Certificate),
    Unknown(Certificate),
}

impl Classification {
    pub fn certificate(&self) -> &Certificate {
        match self {
            Classification::Finite(c) | Classification::Infinite(c) | Classification::Unknown(c) => c,
        }
    }

    pub fn is_finite(&self) -> bool {
        matches!(self, Classification::Finite(_))
    }

    pub fn is_infinite(&self) -> bool {
        matches!(self, Classification::Infinite(_))
    }

    pub fn verdict(&self) -> &'static str {
        match self {
            Classification::Finite(_) => "Finite",
            Classification::Infinite(_) => "Infinite",
            Classification::Unknown(_) => "Unknown",
        }
    }
}

fn words_json(a: &MealyAutomaton, ws: &[StateWord]) -> Value {
    Value::from(ws.iter().map(|w| a.format_word(w)).collect::<Vec<_>>())
}

pub fn closure_certificate(a: &MealyAutomaton, c: &Closure) -> Certificate {
    Certificate {
        kind: CertificateKind::SemigroupClosure,
        statement: CLOSURE_STATEMENT.into(),
        data: json!({
            "generators": c.generators.iter().map(|&g| a.state_names()[g].clone()).collect::<Vec<_>>(),
            "elements": words_json(a, &c.elements),
            "size": c.elements.len(),
        }),
    }
}

fn not_bireversible_certificate() -> Certificate {
    Certificate {
        kind: CertificateKind::NotBireversible,
        statement: NOT_BIREVERSIBLE_STATEMENT.into(),
        data: json!({}),
    }
}

fn all_split_certificate(degree: usize) -> Certificate {
    Certificate {
        kind: CertificateKind::AllSplitAtDegree,
        statement: ALL_SPLIT_STATEMENT.into(),
        data: json!({ "degree": degree }),
    }
}

/// Reduction-edge analysis with budget failures folded into `None`.
fn reduction(a: &MealyAutomaton, budgets: &Budgets) -> Option<ReductionEdge> {
    let mut t = OrbitTree::new(a, budgets.member_budget).ok()?;
    t.reduction_edge(budgets.max_level).ok()
}

/// Cheapest certificate first: non-bireversibility, all-1 split, then the
/// semigroup closure. Whatever is left is reported as `Unknown` with the
/// heavy-branch evidence.
pub fn classify_group(a: &MealyAutomaton, budgets: &Budgets) -> Result<Classification> {
    if !a.is_invertible() {
        return Err(Error::NotInvertible);
    }
    let reversible = a.is_reversible();
    if reversible && !a.is_bireversible() {
        return Ok(Classification::Infinite(not_bireversible_certificate()));
    }
    let red = if reversible { reduction(a, budgets) } else { None };
    if let Some(ReductionEdge::AllSplit { degree }) = red {
        return Ok(Classification::Finite(all_split_certificate(degree)));
    }
    let gens: Vec<usize> = (0..a.num_states()).collect();
    let mut notes = Vec::new();
    match semigroup_closure(a, &gens, budgets) {
        Ok(c) => return Ok(Classification::Finite(closure_certificate(a, &c))),
        Err(e) if e.is_budget() => notes.push(format!("semigroup closure: {e}")),
        Err(e) => return Err(e),
    }
    Ok(Classification::Unknown(heavy_branch_evidence(a, budgets, red, notes)))
}

fn heavy_branch_evidence(
    a: &MealyAutomaton,
    budgets: &Budgets,
    red: Option<ReductionEdge>,
    mut notes: Vec<String>,
) -> Certificate {
    let mut heavy = Value::Null;
    let mut candidate = Value::Null;
    match red {
        Some(ReductionEdge::Edge(_)) => {
            if let Ok(mut t) = OrbitTree::new(a, budgets.member_budget) {
                match t.find_heavy_branch(budgets.depth) {
                    Ok(HeavyBranch::BranchPrefix { labels, rep }) => {
                        heavy = json!({"labels": labels, "rep": a.format_word(&rep)});
                    }
                    Ok(HeavyBranch::Absent) => {
                        notes.push(format!("no label-1-free branch reaches depth {}", budgets.depth))
                    }
                    Err(e) => notes.push(format!("heavy branch: {e}")),
                }
            }
            match find_infinite_order_element(a, budgets) {
                Ok(InfiniteSearch::Candidate(c)) => candidate = c.data["word"].clone(),
                Ok(other) => notes.push(format!("infinite-order search: {other:?}")),
                Err(e) => notes.push(format!("infinite-order search: {e}")),
            }
        }
        Some(ReductionEdge::NotApplicable(r)) => notes.push(format!("heavy-branch analysis not applicable: {r}")),
        Some(ReductionEdge::AllSplit { .. }) => {}
        None => notes.push("orbit tree exceeded its budget".into()),
    }
    Certificate {
        kind: CertificateKind::HeavyBranchEvidence,
        statement: HEAVY_BRANCH_STATEMENT.into(),
        data: json!({"heavy_branch": heavy, "candidate": candidate, "notes": notes}),
    }
}

#[derive(Clone, Debug, PartialEq)]
pub enum InfiniteSearch {
    Candidate(Certificate),
    NotApplicable(String),
    NotFound(String),
}

fn growth_threshold(cd: usize) -> usize {
    3usize.saturating_pow((cd + 4) as u32)
}

/// Enumerates cyclically orbital words and returns the first one whose
/// powers stay non-trivial up to `k_budget` and whose components grow past
/// `3^{cd+4}`.
pub fn find_infinite_order_element(a: &MealyAutomaton, budgets: &Budgets) -> Result<InfiniteSearch> {
    if a.num_states() != 3 {
        return Ok(InfiniteSearch::NotApplicable(
            "the construction needs exactly three states".into(),
        ));
    }
    if !a.is_invertible() || !a.is_reversible() {
        return Ok(InfiniteSearch::NotApplicable(
            "automaton must be invertible and reversible".into(),
        ));
    }
    let mut tree = OrbitTree::new(a, budgets.member_budget)?;
    let g = match tree.reduction_edge(budgets.max_level)? {
        ReductionEdge::Edge(_) => WindowGraph::build(&mut tree, budgets.max_level)?,
        ReductionEdge::AllSplit { degree } => {
            return Ok(InfiniteSearch::NotApplicable(format!(
                "every edge below the connection-degree vertex (level {degree}) has label 1, so the group is finite"
            )))
        }
        ReductionEdge::NotApplicable(r) => return Ok(InfiniteSearch::NotApplicable(r)),
    };
    let cd = g.window_length() - 1;
    let threshold = growth_threshold(cd);
    let proven = !a.is_bireversible();
    let mut rejected = 0;
    for w in g.enumerate_cyclically_orbital(budgets.cycle_length) {
        let witnesses = match element_order(a, &w, budgets.k_budget, budgets.member_budget) {
            Ok(OrderVerdict::AtLeast { witnesses, .. }) => witnesses,
            Ok(OrderVerdict::Finite { .. }) => {
                rejected += 1;
                continue;
            }
            Err(e) if e.is_budget() => {
                rejected += 1;
                continue;
            }
            Err(e) => return Err(e),
        };
        let growth = component_growth(a, &w, budgets.growth_levels, budgets.member_budget)?;
        if growth.sizes.iter().max().is_some_and(|&m| m > threshold) {
            let data = json!({
                "word": a.format_word(&w),
                "grade": if proven { "proven" } else { "evidence" },
                "connection_degree": cd,
                "k_budget": budgets.k_budget,
                "witnesses": witnesses.iter().map(|s| a.format_letters(s)).collect::<Vec<_>>(),
                "growth": growth.sizes,
                "threshold": threshold,
            });
            let statement = if proven {
                INFINITE_ORDER_STATEMENT.to_string()
            } else {
                format!("{INFINITE_ORDER_STATEMENT} {INFINITE_ORDER_EVIDENCE}")
            };
            return Ok(InfiniteSearch::Candidate(Certificate {
                kind: CertificateKind::InfiniteOrderElement,
                statement,
                data,
            }));
        }
        rejected += 1;
    }
    Ok(InfiniteSearch::NotFound(format!(
        "{rejected} cyclically orbital words up to length {} rejected",
        budgets.cycle_length
    )))
}

/// Re-checks a certificate against `a` without re-running the search that
/// produced it. Malformed data is simply invalid.
pub fn verify_certificate(a: &MealyAutomaton, c: &Certificate, budgets: &Budgets) -> bool {
    match c.kind {
        CertificateKind::NotBireversible => a.is_invertible() && a.is_reversible() && !a.is_bireversible(),
        CertificateKind::AllSplitAtDegree => {
            let Some(d) = c.data["degree"].as_u64() else {
                return false;
            };
            matches!(reduction(a, budgets), Some(ReductionEdge::AllSplit { degree }) if degree as u64 == d)
        }
        CertificateKind::SemigroupClosure => verify_closure(a, &c.data, budgets).unwrap_or(false),
        CertificateKind::InfiniteOrderElement => verify_infinite_order(a, &c.data, budgets).unwrap_or(false),
        CertificateKind::HeavyBranchEvidence => verify_heavy_branch(a, &c.data, budgets).unwrap_or(false),
    }
}

fn str_list(v: &Value) -> Option<Vec<&str>> {
    v.as_array()?.iter().map(Value::as_str).collect()
}

fn verify_closure(a: &MealyAutomaton, data: &Value, budgets: &Budgets) -> Option<bool> {
    let generators = str_list(&data["generators"])?
        .into_iter()
        .map(|n| a.state_index(n))
        .collect::<Option<Vec<_>>>()?;
    let elements = str_list(&data["elements"])?
        .into_iter()
        .map(|w| a.parse_state_word(w).ok())
        .collect::<Option<Vec<_>>>()?;
    let all_states = (0..a.num_states()).all(|q| generators.contains(&q));
    let c = Closure { generators, elements };
    Some(
        all_states
            && data["size"].as_u64()? as usize == c.elements.len()
            && closure_is_valid(a, &c, budgets.closure_member_budget),
    )
}

fn verify_infinite_order(a: &MealyAutomaton, data: &Value, budgets: &Budgets) -> Option<bool> {
    let w = a.parse_state_word(data["word"].as_str()?).ok()?;
    let mut tree = OrbitTree::new(a, budgets.member_budget).ok()?;
    let g = WindowGraph::build(&mut tree, budgets.max_level).ok()?;
    if w.is_empty()
        || !g.is_cyclically_orbital(&w)
        || data["connection_degree"].as_u64()? as usize + 1 != g.window_length()
    {
        return Some(false);
    }
    let witnesses = str_list(&data["witnesses"])?;
    if witnesses.len() as u64 != data["k_budget"].as_u64()? {
        return Some(false);
    }
    for (j, s) in witnesses.iter().enumerate() {
        let s = a.parse_letter_word(s).ok()?;
        if a.apply_action(&w.pow(j + 1), &s) == s {
            return Some(false);
        }
    }
    let sizes: Vec<usize> = data["growth"]
        .as_array()?
        .iter()
        .map(|v| v.as_u64().map(|x| x as usize))
        .collect::<Option<_>>()?;
    for (n, &size) in sizes.iter().enumerate() {
        if component_of(a, &w.pow(n + 1), budgets.member_budget).ok()?.size() != size {
            return Some(false);
        }
    }
    let threshold = data["threshold"].as_u64()? as usize;
    let grown = sizes.iter().any(|&s| s > threshold);
    let grade_ok = match data["grade"].as_str()? {
        "proven" => !a.is_bireversible(),
        "evidence" => true,
        _ => false,
    };
    Some(grown && grade_ok)
}

fn verify_heavy_branch(a: &MealyAutomaton, data: &Value, budgets: &Budgets) -> Option<bool> {
    if data["heavy_branch"].is_null() {
        return Some(true);
    }
    let rep = a.parse_state_word(data["heavy_branch"]["rep"].as_str()?).ok()?;
    let labels: Vec<u64> = data["heavy_branch"]["labels"]
        .as_array()?
        .iter()
        .map(Value::as_u64)
        .collect::<Option<_>>()?;
    let mut t = OrbitTree::new(a, budgets.member_budget).ok()?;
    let path = t.path_of_word(&rep).ok()?;
    Some(path == labels && labels.iter().all(|&l| l >= 2))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    const B: usize = 1_000_000;

    #[test]
    fn triviality() {
        let a1 = examples::a1();
        assert!(is_trivial_action(&a1, &[], B).unwrap());
        assert!(!is_trivial_action(&a1, &[0], B).unwrap());
        assert!(is_trivial_action(&examples::i3(), &[0, 1, 2, 2], B).unwrap());
        // (xy)^2 acts trivially
        assert!(is_trivial_action(&a1, &[0, 1, 0, 1], B).unwrap());
        let s = nontrivial_witness(&a1, &[0, 1, 2], B).unwrap().unwrap();
        assert_ne!(a1.apply_action(&[0, 1, 2], &s), s);
    }

    #[test]
    fn equality() {
        let a1 = examples::a1();
        assert!(actions_equal(&a1, &[0, 1], &[0, 1], B).unwrap());
        assert!(!actions_equal(&a1, &[0], &[1], B).unwrap());
        assert!(actions_equal(&a1, &[0, 1, 0, 1], &[], B).unwrap());
        assert!(actions_equal(&a1, &[0, 1, 0, 1, 2], &[2], B).unwrap());
    }

    #[test]
    fn orders() {
        assert_eq!(
            element_order(&examples::i3(), &[1, 2], 10, B).unwrap(),
            OrderVerdict::Finite { order: 1, closure: 1 }
        );
        let a2 = examples::a2();
        assert!(matches!(
            element_order(&a2, &[1], 10, B).unwrap(),
            OrderVerdict::Finite { order: 2, .. }
        ));
        let a1 = examples::a1();
        match element_order(&a1, &[0, 1, 2], 12, B).unwrap() {
            OrderVerdict::AtLeast { k, witnesses } => {
                assert_eq!(k, 12);
                assert_eq!(witnesses.len(), 12);
            }
            v => panic!("{v:?}"),
        }
        assert!(element_order(&a1, &[], 3, B).is_err());
    }

    #[test]
    fn action_keys_detect_equality() {
        let a1 = examples::a1();
        let k = |u: &[usize]| action_key(&a1, u, B).unwrap();
        assert_eq!(k(&[0, 1, 0, 1]), k(&[]));
        assert_eq!(k(&[0, 1, 0, 1, 2]), k(&[2]));
        assert_ne!(k(&[0]), k(&[1]));
    }

    #[test]
    fn closures() {
        let b = Budgets::default();
        let i3 = examples::i3();
        let c = semigroup_closure(&i3, &[0, 1, 2], &b).unwrap();
        assert_eq!(c.elements.len(), 1);
        let a2 = examples::a2();
        let c = semigroup_closure(&a2, &[1, 2], &b).unwrap();
        assert!(closure_is_valid(&a2, &c, b.closure_member_budget));
        let mut broken = c.clone();
        broken.elements.pop();
        assert!(!closure_is_valid(&a2, &broken, b.closure_member_budget));
    }

    #[test]
    fn classification_of_small_examples() {
        let b = Budgets::default();
        let i3 = examples::i3();
        let v = classify_group(&i3, &b).unwrap();
        assert!(v.is_finite());
        assert!(verify_certificate(&i3, v.certificate(), &b));
        let cs = examples::cyclic_shift();
        let v = classify_group(&cs, &b).unwrap();
        assert_eq!(v.certificate().kind, CertificateKind::AllSplitAtDegree);
        assert!(verify_certificate(&cs, v.certificate(), &b));
        assert!(!verify_certificate(
            &examples::a1(),
            &not_bireversible_certificate(),
            &b
        ));
    }
}
