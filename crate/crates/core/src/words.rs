//! Orbital words: the language of words whose windows all lie in the
//! reduction orbit, seen as walks in a graph of windows.

use std::collections::BTreeSet;
use std::fmt::Write as _;

use petgraph::algo::tarjan_scc;
use petgraph::graph::{DiGraph, NodeIndex};
use rustc_hash::FxHashMap;
use serde_json::{json, Value};

use crate::automaton::{format_names, MealyAutomaton};
use crate::budget::Budgets;
use crate::error::{Error, Result};
use crate::orbit_tree::{OrbitTree, ReductionEdge};
use crate::order::{actions_equal, is_trivial_action};
use crate::word::{is_lyndon, Codec, StateWord, WordKey};

/// Windows of length `w` joined `a·m → m·b`.
#[derive(Clone, Debug)]
pub struct WindowGraph {
    names: Vec<String>,
    w: usize,
    codec: Codec,
    windows: Vec<StateWord>,
    index: FxHashMap<WordKey, usize>,
    succ: Vec<Vec<usize>>,
    scc: Vec<usize>,
    recurrent: Vec<bool>,
    terminal: Vec<bool>,
}

impl WindowGraph {
    /// Windows are the members of the bottom of the reduction edge.
    pub fn build(tree: &mut OrbitTree<'_>, max_level: usize) -> Result<Self> {
        let a = tree.automaton();
        match tree.reduction_edge(max_level)? {
            ReductionEdge::Edge(e) => {
                let members = tree.node(e.child).members().ok_or_else(|| {
                    Error::budget(
                        "reduction orbit members",
                        tree.node(e.child).size(),
                        tree.node(e.child).size(),
                    )
                })?;
                Self::from_windows(a.state_names().to_vec(), members.iter().collect())
            }
            ReductionEdge::AllSplit { degree } => Err(Error::NotApplicable(format!(
                "every edge below the connection-degree vertex (level {degree}) has label 1"
            ))),
            ReductionEdge::NotApplicable(r) => Err(Error::NotApplicable(r)),
        }
    }

    /// Graph over an explicit window set; all windows must share one
    /// positive length.
    pub fn from_windows(names: Vec<String>, windows: Vec<StateWord>) -> Result<Self> {
        let nq = names.len();
        let w = windows.first().map(|x| x.len()).unwrap_or(0);
        if w == 0 || windows.iter().any(|x| x.len() != w || x.iter().any(|&q| q >= nq)) {
            return Err(Error::InvalidArgument(
                "windows must be nonempty words of one length".into(),
            ));
        }
        let windows: Vec<StateWord> = windows.into_iter().collect::<BTreeSet<_>>().into_iter().collect();
        let codec = Codec::new(nq, w);
        let index: FxHashMap<WordKey, usize> = windows.iter().enumerate().map(|(k, x)| (codec.encode(x), k)).collect();
        let mut succ = Vec::with_capacity(windows.len());
        let mut buf = Vec::with_capacity(w);
        for x in &windows {
            let mut out = Vec::new();
            for b in 0..nq {
                buf.clear();
                buf.extend_from_slice(&x[1..]);
                buf.push(b);
                if let Some(&k) = index.get(&codec.encode(&buf)) {
                    out.push(k);
                }
            }
            succ.push(out);
        }
        let mut g: DiGraph<(), ()> = DiGraph::with_capacity(windows.len(), windows.len() * 2);
        for _ in 0..windows.len() {
            g.add_node(());
        }
        for (p, out) in succ.iter().enumerate() {
            for &q in out {
                g.add_edge(NodeIndex::new(p), NodeIndex::new(q), ());
            }
        }
        let comps = tarjan_scc(&g);
        let mut scc = vec![0; windows.len()];
        for (c, nodes) in comps.iter().enumerate() {
            for n in nodes {
                scc[n.index()] = c;
            }
        }
        let recurrent = (0..windows.len())
            .map(|p| comps[scc[p]].len() > 1 || succ[p].contains(&p))
            .collect();
        let terminal = (0..comps.len())
            .map(|c| comps[c].iter().all(|n| succ[n.index()].iter().all(|&q| scc[q] == c)))
            .collect();
        Ok(WindowGraph {
            names,
            w,
            codec,
            windows,
            index,
            succ,
            scc,
            recurrent,
            terminal,
        })
    }

    pub fn window_length(&self) -> usize {
        self.w
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    /// Allowed windows in lexicographic order.
    pub fn windows(&self) -> &[StateWord] {
        &self.windows
    }

    pub fn successors(&self, k: usize) -> &[usize] {
        &self.succ[k]
    }

    pub fn out_degree(&self, k: usize) -> usize {
        self.succ[k].len()
    }

    pub fn is_recurrent(&self, k: usize) -> bool {
        self.recurrent[k]
    }

    pub fn window_index(&self, x: &[usize]) -> Option<usize> {
        if x.len() != self.w {
            return None;
        }
        self.index.get(&self.codec.encode(x)).copied()
    }

    pub fn is_window(&self, x: &[usize]) -> bool {
        self.window_index(x).is_some()
    }

    pub fn format(&self, u: &[usize]) -> String {
        format_names(&self.names, u)
    }

    /// Every length-`w` factor is allowed; shorter words must occur inside
    /// some allowed window.
    pub fn is_orbital(&self, u: &[usize]) -> bool {
        if u.len() < self.w {
            return u.is_empty() || self.windows.iter().any(|x| x.windows(u.len()).any(|f| f == u));
        }
        u.windows(self.w).all(|f| self.is_window(f))
    }

    /// Every window of the cyclic word `u` is allowed.
    pub fn is_cyclically_orbital(&self, u: &[usize]) -> bool {
        if u.is_empty() {
            return false;
        }
        let ext: Vec<usize> = u.iter().copied().cycle().take(u.len() + self.w - 1).collect();
        ext.windows(self.w).all(|f| self.is_window(f))
    }

    /// Cyclically orbital Lyndon words (one per rotation class of
    /// primitive closed walks), by length then lexicographically.
    pub fn enumerate_cyclically_orbital(&self, max_len: usize) -> Vec<StateWord> {
        let mut out = Vec::new();
        let mut cur = Vec::new();
        for len in 1..=max_len {
            self.enumerate_rec(len, &mut cur, &mut out);
        }
        out
    }

    fn enumerate_rec(&self, len: usize, cur: &mut Vec<usize>, out: &mut Vec<StateWord>) {
        if cur.len() == len {
            if is_lyndon(cur) && self.is_cyclically_orbital(cur) {
                out.push(StateWord(cur.clone()));
            }
            return;
        }
        for q in 0..self.num_states() {
            cur.push(q);
            let ok = cur.len() < self.w || self.is_window(&cur[cur.len() - self.w..]);
            if ok {
                self.enumerate_rec(len, cur, out);
            }
            cur.pop();
        }
    }

    /// A word `r` of length `n` with `u·r` and `v·r` both orbital, built
    /// greedily from the least state and backtracking on dead ends.
    pub fn common_successor(&self, u: &[usize], v: &[usize], n: usize) -> Result<StateWord> {
        let need = self.w - 1;
        if u.len() < need || v.len() < need || !self.is_orbital(u) || !self.is_orbital(v) {
            return Err(Error::InvalidArgument(format!(
                "both words must be orbital and of length at least {need}"
            )));
        }
        let mut su = u[u.len() - need..].to_vec();
        let mut sv = v[v.len() - need..].to_vec();
        let mut r = Vec::with_capacity(n);
        if self.successor_rec(&mut su, &mut sv, &mut r, n) {
            Ok(StateWord(r))
        } else {
            Err(Error::NotFound(format!("no common orbital successor of length {n}")))
        }
    }

    fn successor_rec(&self, su: &mut Vec<usize>, sv: &mut Vec<usize>, r: &mut Vec<usize>, n: usize) -> bool {
        if r.len() == n {
            return true;
        }
        for q in 0..self.num_states() {
            su.push(q);
            sv.push(q);
            let (lu, lv) = (su.len(), sv.len());
            if self.is_window(&su[lu - self.w..]) && self.is_window(&sv[lv - self.w..]) {
                r.push(q);
                if self.successor_rec(su, sv, r, n) {
                    return true;
                }
                r.pop();
            }
            su.pop();
            sv.pop();
        }
        false
    }

    fn reachable(&self, start: usize) -> Vec<bool> {
        let mut seen = vec![false; self.windows.len()];
        let mut stack = vec![start];
        seen[start] = true;
        while let Some(p) = stack.pop() {
            for &q in &self.succ[p] {
                if !std::mem::replace(&mut seen[q], true) {
                    stack.push(q);
                }
            }
        }
        seen
    }

    /// For each state, whether it ends some window of every terminal
    /// strongly connected part reachable from the last window of `u` (all
    /// windows when `u` is `None`). A state missing from one of them is an
    /// inconsistency.
    pub fn state_coverage(&self, u: Option<&[usize]>) -> Result<Vec<bool>> {
        let reach: Vec<bool> = match u {
            Some(u) => {
                if u.len() < self.w || !self.is_orbital(u) {
                    return Err(Error::InvalidArgument(format!(
                        "coverage needs an orbital word of length at least {}",
                        self.w
                    )));
                }
                let last = self.window_index(&u[u.len() - self.w..]).expect("orbital");
                self.reachable(last)
            }
            None => vec![true; self.windows.len()],
        };
        let mut per_part: FxHashMap<usize, Vec<bool>> = FxHashMap::default();
        for k in (0..self.windows.len()).filter(|&k| reach[k] && self.terminal[self.scc[k]]) {
            per_part
                .entry(self.scc[k])
                .or_insert_with(|| vec![false; self.num_states()])[self.windows[k][self.w - 1]] = true;
        }
        let mut cover = vec![!per_part.is_empty(); self.num_states()];
        for seen in per_part.values() {
            for (c, &s) in cover.iter_mut().zip(seen) {
                *c &= s;
            }
        }
        if let Some(q) = cover.iter().position(|&c| !c) {
            return Err(Error::Inconsistency(format!(
                "state `{}` does not occur in a reachable terminal part of the window graph",
                self.names[q]
            )));
        }
        Ok(cover)
    }

    pub fn to_json(&self) -> Value {
        let nodes: Vec<Value> = self
            .windows
            .iter()
            .enumerate()
            .map(|(k, x)| json!({"id": k, "window": self.format(x), "recurrent": self.recurrent[k], "part": self.scc[k]}))
            .collect();
        let edges: Vec<Value> = (0..self.windows.len())
            .flat_map(|p| {
                self.succ[p]
                    .iter()
                    .map(move |&q| json!({"from": p, "to": q, "state": self.names[self.windows[q][self.w - 1]]}))
            })
            .collect();
        json!({"window_length": self.w, "nodes": nodes, "edges": edges})
    }

    pub fn to_dot(&self) -> String {
        let mut s = String::from("digraph windows {\n  node [shape=box];\n");
        for (k, x) in self.windows.iter().enumerate() {
            let style = if self.recurrent[k] {
                ", style=filled, fillcolor=lightblue"
            } else {
                ""
            };
            writeln!(s, "  w{k} [label=\"{}\"{style}];", self.format(x).replace('"', "\\\"")).unwrap();
        }
        for p in 0..self.windows.len() {
            for &q in &self.succ[p] {
                let label = &self.names[self.windows[q][self.w - 1]];
                writeln!(s, "  w{p} -> w{q} [label=\"{}\"];", label.replace('"', "\\\"")).unwrap();
            }
        }
        s.push_str("}\n");
        s
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Equivalent {
    /// `ρ_word = ρ_{a^exponent}` and `word` is cyclically orbital.
    Found {
        word: StateWord,
        exponent: usize,
    },
    Exhausted(String),
}

/// Rewrites powers of `a` as cyclically orbital words.
///
/// The states of `a` are spelled out one at a time. Between consecutive
/// states a filler walk with trivial action steers the current context to
/// one that accepts the next state. One round spells `a` once and ends in a
/// new context; as soon as a context repeats, the rounds in between form a
/// closed walk, i.e. a cyclically orbital word acting as a power of `a`.
/// The result is checked with [`actions_equal`] before it is returned.
pub fn cyclically_orbital_equivalent(
    a: &MealyAutomaton,
    g: &WindowGraph,
    word: &[usize],
    budgets: &Budgets,
) -> Result<Equivalent> {
    if word.is_empty() {
        return Err(Error::InvalidArgument("the word must be nonempty".into()));
    }
    if word.iter().any(|&q| q >= g.num_states()) || g.num_states() != a.num_states() {
        return Err(Error::InvalidArgument(
            "word and window graph do not match the automaton".into(),
        ));
    }
    if g.is_cyclically_orbital(word) {
        return Ok(Equivalent::Found {
            word: StateWord::from(word),
            exponent: 1,
        });
    }
    let ctx = g.window_length() - 1;
    let mut starts: Vec<usize> = (0..g.windows.len()).filter(|&k| g.terminal[g.scc[k]]).collect();
    starts.extend((0..g.windows.len()).filter(|&k| !g.terminal[g.scc[k]]));
    let mut fillers: FxHashMap<(Vec<usize>, usize), Option<Vec<usize>>> = FxHashMap::default();
    let mut last_reason = String::from("no allowed starting context");
    for k in starts {
        let x0 = g.windows[k][g.window_length() - ctx..].to_vec();
        if !g.is_window(&[x0.as_slice(), &word[..1]].concat()) {
            continue;
        }
        match rounds(a, g, word, x0, budgets, &mut fillers)? {
            Equivalent::Exhausted(r) => last_reason = r,
            found => return Ok(found),
        }
    }
    Ok(Equivalent::Exhausted(last_reason))
}

fn rounds(
    a: &MealyAutomaton,
    g: &WindowGraph,
    word: &[usize],
    x0: Vec<usize>,
    budgets: &Budgets,
    fillers: &mut FxHashMap<(Vec<usize>, usize), Option<Vec<usize>>>,
) -> Result<Equivalent> {
    let ctx = x0.len();
    let mut seen: FxHashMap<Vec<usize>, usize> = FxHashMap::default();
    let mut pieces: Vec<Vec<usize>> = Vec::new();
    let mut x = x0;
    for round in 0..budgets.rounds {
        if let Some(&i) = seen.get(&x) {
            let w: Vec<usize> = pieces[i..].concat();
            let k = round - i;
            let target = StateWord::from(word).pow(k);
            if g.is_cyclically_orbital(&w) && actions_equal(a, &w, &target, budgets.member_budget)? {
                return Ok(Equivalent::Found {
                    word: StateWord(w),
                    exponent: k,
                });
            }
            return Ok(Equivalent::Exhausted("assembled word failed verification".into()));
        }
        seen.insert(x.clone(), round);
        let mut tape = x.clone();
        for (j, &q) in word.iter().enumerate() {
            tape.push(q);
            let next = word[(j + 1) % word.len()];
            let here = tape[tape.len() - ctx..].to_vec();
            let filler = match fillers.get(&(here.clone(), next)) {
                Some(f) => f.clone(),
                None => {
                    let f = find_filler(a, g, &here, next, budgets);
                    fillers.insert((here, next), f.clone());
                    f
                }
            };
            let Some(f) = filler else {
                return Ok(Equivalent::Exhausted(format!(
                    "no trivial filler of length at most {} leads to state `{}`",
                    budgets.filler_length, g.names[next]
                )));
            };
            tape.extend_from_slice(&f);
        }
        pieces.push(tape[ctx..].to_vec());
        x = tape[tape.len() - ctx..].to_vec();
    }
    Ok(Equivalent::Exhausted(format!(
        "no repeated context within {} rounds",
        budgets.rounds
    )))
}

/// Shortest, then least, walk `t` from context `here` with trivial action
/// after which `next` may follow.
fn find_filler(
    a: &MealyAutomaton,
    g: &WindowGraph,
    here: &[usize],
    next: usize,
    budgets: &Budgets,
) -> Option<Vec<usize>> {
    let mut tape = here.to_vec();
    (0..=budgets.filler_length).find_map(|len| filler_rec(a, g, &mut tape, here.len(), len, next, budgets))
}

fn filler_rec(
    a: &MealyAutomaton,
    g: &WindowGraph,
    tape: &mut Vec<usize>,
    base: usize,
    len: usize,
    next: usize,
    budgets: &Budgets,
) -> Option<Vec<usize>> {
    let w = g.window_length();
    if tape.len() - base == len {
        tape.push(next);
        let ok = g.is_window(&tape[tape.len() - w..]);
        tape.pop();
        let t = &tape[base..];
        return (ok && is_trivial_action(a, t, budgets.closure_member_budget).unwrap_or(false)).then(|| t.to_vec());
    }
    for q in 0..g.num_states() {
        tape.push(q);
        if g.is_window(&tape[tape.len() - w..]) {
            if let Some(t) = filler_rec(a, g, tape, base, len, next, budgets) {
                tape.pop();
                return Some(t);
            }
        }
        tape.pop();
    }
    None
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    fn a1_graph(a: &MealyAutomaton) -> WindowGraph {
        let mut t = OrbitTree::new(a, 1_000_000).unwrap();
        WindowGraph::build(&mut t, 10).unwrap()
    }

    #[test]
    fn a1_window_graph_shape() {
        let a1 = examples::a1();
        let g = a1_graph(&a1);
        assert_eq!(g.window_length(), 3);
        assert_eq!(g.windows().len(), 18);
        assert!((0..18).all(|k| g.out_degree(k) == 2));
        // the excluded windows are exactly those with equal first and last state
        assert!(g.windows().iter().all(|x| x[0] != x[2]));
    }

    #[test]
    fn not_applicable_graphs() {
        for a in [examples::cyclic_shift(), examples::a2()] {
            let mut t = OrbitTree::new(&a, 1_000_000).unwrap();
            assert!(matches!(WindowGraph::build(&mut t, 10), Err(Error::NotApplicable(_))));
        }
    }

    #[test]
    fn orbital_predicates() {
        let a1 = examples::a1();
        let g = a1_graph(&a1);
        assert!(g.is_cyclically_orbital(&[0, 1, 2]));
        assert!(g.is_orbital(&[0, 1, 2, 0, 1, 2]));
        assert!(!g.is_orbital(&[0, 1, 0]));
        assert!(g.is_orbital(&[0, 1]));
        assert!(!g.is_cyclically_orbital(&[0, 1]));
        assert!(g.is_orbital(&[]));
    }

    #[test]
    fn shortest_cycles_of_a1() {
        let a1 = examples::a1();
        let g = a1_graph(&a1);
        assert!(g.enumerate_cyclically_orbital(2).is_empty());
        let three = g.enumerate_cyclically_orbital(3);
        assert_eq!(three, vec![StateWord(vec![0, 1, 2]), StateWord(vec![0, 2, 1])]);
        for w in g.enumerate_cyclically_orbital(7) {
            assert!(g.is_cyclically_orbital(&w));
        }
    }

    #[test]
    fn successors_and_coverage() {
        let a1 = examples::a1();
        let g = a1_graph(&a1);
        assert_eq!(g.common_successor(&[0, 1, 2], &[0, 1, 2], 0).unwrap().len(), 0);
        let r = g.common_successor(&[0, 1, 2], &[1, 0, 2], 3).unwrap();
        assert!(g.is_orbital(&[&[0, 1, 2][..], &r].concat()));
        assert!(g.is_orbital(&[&[1, 0, 2][..], &r].concat()));
        assert_eq!(g.state_coverage(Some(&[0, 1, 2])).unwrap(), vec![true; 3]);
        assert_eq!(g.state_coverage(None).unwrap(), vec![true; 3]);

        let names: Vec<String> = ["x", "y", "z"].iter().map(|s| s.to_string()).collect();
        let xy: Vec<StateWord> = (0..8)
            .map(|m| StateWord(vec![m & 1, (m >> 1) & 1, (m >> 2) & 1]))
            .collect();
        let g = WindowGraph::from_windows(names.clone(), xy).unwrap();
        assert!(matches!(g.state_coverage(None), Err(Error::Inconsistency(_))));
        let cyc = vec![StateWord(vec![0, 1]), StateWord(vec![1, 2]), StateWord(vec![2, 0])];
        let g = WindowGraph::from_windows(names, cyc).unwrap();
        assert_eq!(g.state_coverage(None).unwrap(), vec![true; 3]);
    }

    #[test]
    fn equivalents_of_cyclic_words_are_themselves() {
        let a1 = examples::a1();
        let g = a1_graph(&a1);
        let r = cyclically_orbital_equivalent(&a1, &g, &[0, 1, 2], &Budgets::default()).unwrap();
        assert_eq!(
            r,
            Equivalent::Found {
                word: StateWord(vec![0, 1, 2]),
                exponent: 1
            }
        );
    }
}
