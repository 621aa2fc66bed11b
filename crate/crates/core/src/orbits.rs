//! Connected components of the powers `A^n`, i.e. orbits of the dual group
//! acting on `Q^n`.
//!
//! All searches run on packed word keys and only use the `|Σ|` generators
//! `δ_i`. A component is identified by its level and its lexicographically
//! least member; member sets are carried along when they were materialized.

use std::collections::VecDeque;
use std::fmt;
use std::hash::{Hash, Hasher};
use std::sync::Arc;

use rustc_hash::FxHashSet;
use serde::{Deserialize, Serialize};

use crate::automaton::MealyAutomaton;
use crate::error::{Error, Result};
use crate::word::{Codec, StateWord, WordKey};

/// `δ_i(u)`, with the letter twisted by each state it crosses:
/// `δ_i(x·v) = δ_i(x) · δ_{ρ_x(i)}(v)`.
pub fn dual_step(a: &MealyAutomaton, i: usize, u: &[usize]) -> StateWord {
    let mut out = Vec::with_capacity(u.len());
    dual_step_into(a, i, u, &mut out);
    StateWord(out)
}

#[inline]
pub(crate) fn dual_step_into(a: &MealyAutomaton, mut i: usize, u: &[usize], out: &mut Vec<usize>) {
    out.clear();
    for &x in u {
        out.push(a.next(x, i));
        i = a.output(x, i);
    }
}

/// `δ_s(u)` for a letter word `s`, applying `s_1` first.
pub fn dual_action(a: &MealyAutomaton, s: &[usize], u: &[usize]) -> StateWord {
    let mut cur = u.to_vec();
    let mut buf = Vec::with_capacity(u.len());
    for &i in s {
        dual_step_into(a, i, &cur, &mut buf);
        std::mem::swap(&mut cur, &mut buf);
    }
    StateWord(cur)
}

/// Sorted member keys of one orbit.
#[derive(Clone, Debug)]
pub struct MemberSet {
    codec: Codec,
    keys: Vec<WordKey>,
}

impl MemberSet {
    pub fn len(&self) -> usize {
        self.keys.len()
    }

    pub fn is_empty(&self) -> bool {
        self.keys.is_empty()
    }

    pub fn contains(&self, w: &[usize]) -> bool {
        w.len() == self.codec.len() && self.keys.binary_search(&self.codec.encode(w)).is_ok()
    }

    /// Members in lexicographic order.
    pub fn iter(&self) -> impl Iterator<Item = StateWord> + '_ {
        self.keys.iter().map(|k| self.codec.decode(k))
    }
}

/// One orbit of `⟨d(A)⟩` on `Q^n`.
#[derive(Clone)]
pub struct Component {
    level: usize,
    size: usize,
    rep: StateWord,
    members: Option<Arc<MemberSet>>,
}

impl Component {
    pub fn level(&self) -> usize {
        self.level
    }

    pub fn size(&self) -> usize {
        self.size
    }

    /// Lexicographically least member.
    pub fn canonical_rep(&self) -> &StateWord {
        &self.rep
    }

    pub fn members(&self) -> Option<&MemberSet> {
        self.members.as_deref()
    }

    /// Drops the member set, keeping identity and size.
    pub fn without_members(&self) -> Component {
        Component {
            members: None,
            ..self.clone()
        }
    }
}

impl PartialEq for Component {
    fn eq(&self, other: &Self) -> bool {
        self.level == other.level && self.rep == other.rep
    }
}

impl Eq for Component {}

impl Hash for Component {
    fn hash<H: Hasher>(&self, state: &mut H) {
        self.level.hash(state);
        self.rep.hash(state);
    }
}

impl fmt::Debug for Component {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Component(level {}, size {}, rep {})",
            self.level, self.size, self.rep
        )
    }
}

/// Largest `n` with `A^n` connected, or a lower bound when deeper levels
/// were not reached.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(tag = "kind", content = "value")]
pub enum ConnectionDegree {
    Exact(usize),
    AtLeast(usize),
}

impl ConnectionDegree {
    pub fn exact(self) -> Option<usize> {
        match self {
            ConnectionDegree::Exact(n) => Some(n),
            ConnectionDegree::AtLeast(_) => None,
        }
    }
}

impl fmt::Display for ConnectionDegree {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ConnectionDegree::Exact(n) => write!(f, "{n}"),
            ConnectionDegree::AtLeast(n) => write!(f, ">={n}"),
        }
    }
}

fn require_reversible(a: &MealyAutomaton) -> Result<()> {
    if a.is_reversible() {
        Ok(())
    } else {
        Err(Error::NotReversible)
    }
}

/// Breadth-first closure of `start` under the `δ_i`. Returns the visited
/// keys in discovery order.
pub(crate) fn orbit_keys(
    a: &MealyAutomaton,
    codec: &Codec,
    start: &[usize],
    budget: usize,
    what: &'static str,
) -> Result<Vec<WordKey>> {
    let first = codec.encode(start);
    let mut seen: FxHashSet<WordKey> = FxHashSet::default();
    seen.insert(first.clone());
    let mut order = vec![first];
    let mut head = 0;
    let (mut cur, mut buf) = (Vec::new(), Vec::new());
    while head < order.len() {
        codec.decode_into(&order[head], &mut cur);
        head += 1;
        for i in 0..a.num_letters() {
            dual_step_into(a, i, &cur, &mut buf);
            let k = codec.encode(&buf);
            if !seen.contains(&k) {
                if order.len() >= budget {
                    return Err(Error::budget(what, budget, order.len()));
                }
                seen.insert(k.clone());
                order.push(k);
            }
        }
    }
    Ok(order)
}

fn component_from_keys(codec: Codec, mut keys: Vec<WordKey>) -> Component {
    keys.sort_unstable();
    let rep = codec.decode(&keys[0]);
    Component {
        level: codec.len(),
        size: keys.len(),
        rep,
        members: Some(Arc::new(MemberSet { codec, keys })),
    }
}

/// The component of `A^{|u|}` containing `u`.
pub fn component_of(a: &MealyAutomaton, u: &[usize], budget: usize) -> Result<Component> {
    require_reversible(a)?;
    let codec = Codec::new(a.num_states(), u.len());
    let keys = orbit_keys(a, &codec, u, budget, "component size")?;
    Ok(component_from_keys(codec, keys))
}

/// All components of `A^n`, ordered by canonical representative.
pub fn components_at_level(a: &MealyAutomaton, n: usize, budget: usize) -> Result<Vec<Component>> {
    require_reversible(a)?;
    let nq = a.num_states();
    let total = u32::try_from(n)
        .ok()
        .and_then(|e| nq.checked_pow(e))
        .filter(|&t| t <= budget)
        .ok_or_else(|| Error::budget("level size", budget, 0))?;
    let codec = Codec::new(nq, n);
    let mut covered: FxHashSet<WordKey> = FxHashSet::default();
    let mut out = Vec::new();
    let mut word = vec![0usize; n];
    for idx in 0..total {
        crate::automaton::index_to_word(idx, nq, &mut word);
        if covered.contains(&codec.encode(&word)) {
            continue;
        }
        let keys = orbit_keys(a, &codec, &word, budget, "component size")?;
        covered.extend(keys.iter().cloned());
        out.push(component_from_keys(codec, keys));
    }
    Ok(out)
}

/// Scans levels `1..=max_level` for the first disconnected power.
///
/// A level whose full size exceeds `budget` ends the scan with `AtLeast`.
pub fn connection_degree(a: &MealyAutomaton, max_level: usize, budget: usize) -> Result<ConnectionDegree> {
    require_reversible(a)?;
    let nq = a.num_states();
    for n in 1..=max_level {
        let full = match u32::try_from(n).ok().and_then(|e| nq.checked_pow(e)) {
            Some(t) if t <= budget => t,
            _ => return Ok(ConnectionDegree::AtLeast(n - 1)),
        };
        let c = component_of(a, &vec![0; n], budget)?;
        if c.size() < full {
            return Ok(ConnectionDegree::Exact(n - 1));
        }
    }
    Ok(ConnectionDegree::AtLeast(max_level))
}

/// Components one level below `c`, each with its label `#child / #c`.
///
/// Every child contains some `rep·x`, so only the `|Q|` one-letter
/// extensions of the representative need to be closed.
pub fn child_components(a: &MealyAutomaton, c: &Component, budget: usize) -> Result<Vec<(Component, u64)>> {
    require_reversible(a)?;
    let mut children: Vec<Component> = Vec::new();
    for x in 0..a.num_states() {
        let w = c.rep.concat(&[x]);
        if children.iter().any(|ch| ch.members().is_some_and(|m| m.contains(&w))) {
            continue;
        }
        children.push(component_of(a, &w, budget)?);
    }
    children.sort_by(|p, q| p.rep.cmp(&q.rep));
    let total: usize = children.iter().map(Component::size).sum();
    if total != c.size * a.num_states() {
        return Err(Error::Inconsistency(format!(
            "children of {:?} cover {total} words, expected {}",
            c,
            c.size * a.num_states()
        )));
    }
    children
        .into_iter()
        .map(|ch| {
            if ch.size % c.size != 0 {
                return Err(Error::Inconsistency(format!(
                    "{ch:?} is not a union of copies of {c:?}"
                )));
            }
            let label = (ch.size / c.size) as u64;
            Ok((ch, label))
        })
        .collect()
}

/// Orbit of a single word, for callers that only need the size.
pub fn orbit_size(a: &MealyAutomaton, u: &[usize], budget: usize) -> Result<usize> {
    let codec = Codec::new(a.num_states(), u.len());
    orbit_keys(a, &codec, u, budget, "component size").map(|k| k.len())
}

/// Breadth-first search returning the first word of the orbit of `u`
/// (including `u`) satisfying `pred`, or `None` once the orbit is closed.
pub(crate) fn orbit_find(
    a: &MealyAutomaton,
    u: &[usize],
    budget: usize,
    mut pred: impl FnMut(&[usize]) -> bool,
) -> Result<(Option<StateWord>, usize)> {
    let codec = Codec::new(a.num_states(), u.len());
    let mut seen: FxHashSet<WordKey> = FxHashSet::default();
    let mut queue = VecDeque::new();
    seen.insert(codec.encode(u));
    queue.push_back(u.to_vec());
    let mut buf = Vec::new();
    while let Some(cur) = queue.pop_front() {
        if pred(&cur) {
            return Ok((Some(StateWord(cur)), seen.len()));
        }
        for i in 0..a.num_letters() {
            dual_step_into(a, i, &cur, &mut buf);
            if seen.insert(codec.encode(&buf)) {
                if seen.len() > budget {
                    return Err(Error::budget("orbit closure", budget, seen.len()));
                }
                queue.push_back(buf.clone());
            }
        }
    }
    Ok((None, seen.len()))
}
