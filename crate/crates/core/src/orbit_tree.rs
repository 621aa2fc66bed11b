//! The labelled orbit tree: components of all powers, each joined to the
//! component of its one-shorter prefixes, edges labelled by size ratios.
//!
//! Expansion is lazy. Queries walk down from the root and only expand the
//! nodes they pass through, so a single deep branch stays affordable even
//! when whole levels are not.

use std::collections::BTreeMap;
use std::fmt::Write as _;

use rustc_hash::FxHashMap;
use serde::{Deserialize, Serialize};
use serde_json::{json, Value};

use crate::automaton::MealyAutomaton;
use crate::error::{Error, Result};
use crate::orbits::{child_components, component_of, Component};
use crate::word::StateWord;

pub type NodeId = usize;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct TreeEdge {
    pub parent: NodeId,
    pub child: NodeId,
    pub label: u64,
    /// Level of the parent.
    pub level: usize,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ReductionEdge {
    Edge(TreeEdge),
    /// Every edge below the connection-degree vertex has label 1.
    AllSplit {
        degree: usize,
    },
    NotApplicable(String),
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct BlockProfile {
    pub depth: usize,
    /// Label sequence of every explored root-to-depth branch, in order of
    /// the bottom representatives.
    pub branches: Vec<Vec<u64>>,
    /// Longest maximal run of each label over all branches.
    pub max_block: BTreeMap<u64, usize>,
    /// `(a, b)` for the longest prefix `|Q|^a 2^b`, maximizing `b` then `a`.
    pub heavy_prefix: (usize, usize),
}

impl BlockProfile {
    pub fn max_block(&self, label: u64) -> usize {
        self.max_block.get(&label).copied().unwrap_or(0)
    }

    pub fn heavy_prefix_labels(&self, num_states: u64) -> Vec<u64> {
        let (a, b) = self.heavy_prefix;
        std::iter::repeat(num_states)
            .take(a)
            .chain(std::iter::repeat(2).take(b))
            .collect()
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum HeavyBranch {
    /// Labels of the label-1-free initial path reaching the requested depth,
    /// and the representative of its bottom node.
    BranchPrefix {
        labels: Vec<u64>,
        rep: StateWord,
    },
    Absent,
}

impl HeavyBranch {
    pub fn labels(&self) -> &[u64] {
        match self {
            HeavyBranch::BranchPrefix { labels, .. } => labels,
            HeavyBranch::Absent => &[],
        }
    }
}

/// Maximal runs `(label, length)` of a label sequence.
pub fn blocks(labels: &[u64]) -> Vec<(u64, usize)> {
    let mut out: Vec<(u64, usize)> = Vec::new();
    for &l in labels {
        match out.last_mut() {
            Some((last, n)) if *last == l => *n += 1,
            _ => out.push((l, 1)),
        }
    }
    out
}

pub struct OrbitTree<'a> {
    a: &'a MealyAutomaton,
    budget: usize,
    nodes: Vec<Component>,
    parent: Vec<Option<NodeId>>,
    children: Vec<Option<Vec<(NodeId, u64)>>>,
    index: FxHashMap<(usize, StateWord), NodeId>,
}

impl<'a> OrbitTree<'a> {
    /// The tree with only its root expanded-to-be. `budget` caps every
    /// component.
    pub fn new(a: &'a MealyAutomaton, budget: usize) -> Result<Self> {
        let root = component_of(a, &[], budget)?;
        let mut index = FxHashMap::default();
        index.insert((0, StateWord::empty()), 0);
        Ok(OrbitTree {
            a,
            budget,
            nodes: vec![root],
            parent: vec![None],
            children: vec![None],
            index,
        })
    }

    pub fn automaton(&self) -> &'a MealyAutomaton {
        self.a
    }

    pub fn root(&self) -> NodeId {
        0
    }

    pub fn node(&self, id: NodeId) -> &Component {
        &self.nodes[id]
    }

    pub fn len(&self) -> usize {
        self.nodes.len()
    }

    pub fn is_empty(&self) -> bool {
        false
    }

    pub fn parent(&self, id: NodeId) -> Option<NodeId> {
        self.parent[id]
    }

    pub fn find(&self, level: usize, rep: &StateWord) -> Option<NodeId> {
        self.index.get(&(level, rep.clone())).copied()
    }

    /// The edge entering `id`, if any.
    pub fn edge_into(&self, id: NodeId) -> Option<TreeEdge> {
        let p = self.parent[id]?;
        let label = self.children[p].as_ref()?.iter().find(|c| c.0 == id)?.1;
        Some(TreeEdge {
            parent: p,
            child: id,
            label,
            level: self.nodes[p].level(),
        })
    }

    /// Already computed edges below `id`.
    pub fn edges_from(&self, id: NodeId) -> Option<Vec<TreeEdge>> {
        let level = self.nodes[id].level();
        self.children[id].as_ref().map(|ch| {
            ch.iter()
                .map(|&(child, label)| TreeEdge {
                    parent: id,
                    child,
                    label,
                    level,
                })
                .collect()
        })
    }

    /// Computes (once) the children of `id`.
    pub fn expand(&mut self, id: NodeId) -> Result<Vec<TreeEdge>> {
        if self.children[id].is_none() {
            let kids = child_components(self.a, &self.nodes[id], self.budget)?;
            let mut list = Vec::with_capacity(kids.len());
            for (c, label) in kids {
                let key = (c.level(), c.canonical_rep().clone());
                let cid = self.nodes.len();
                self.nodes.push(c);
                self.parent.push(Some(id));
                self.children.push(None);
                self.index.insert(key, cid);
                list.push((cid, label));
            }
            self.children[id] = Some(list);
        }
        Ok(self.edges_from(id).expect("just expanded"))
    }

    /// Expands every node above `depth`.
    pub fn expand_to_depth(&mut self, depth: usize) -> Result<()> {
        let mut frontier = vec![self.root()];
        for _ in 0..depth {
            let mut next = Vec::new();
            for id in frontier {
                next.extend(self.expand(id)?.into_iter().map(|e| e.child));
            }
            frontier = next;
        }
        Ok(())
    }

    /// Nodes of one level that are currently in the tree, by representative.
    pub fn nodes_at_level(&self, level: usize) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = (0..self.nodes.len())
            .filter(|&i| self.nodes[i].level() == level)
            .collect();
        ids.sort_by(|&p, &q| self.nodes[p].canonical_rep().cmp(self.nodes[q].canonical_rep()));
        ids
    }

    /// All computed edges.
    pub fn edges(&self) -> Vec<TreeEdge> {
        (0..self.nodes.len())
            .filter_map(|i| self.edges_from(i))
            .flatten()
            .collect()
    }

    fn child_containing(&mut self, id: NodeId, w: &[usize]) -> Result<TreeEdge> {
        let edges = self.expand(id)?;
        edges
            .into_iter()
            .find(|e| self.nodes[e.child].members().is_some_and(|m| m.contains(w)))
            .ok_or_else(|| Error::Inconsistency(format!("no child of node {id} contains {}", StateWord::from(w))))
    }

    /// Node of the component containing `u`, expanding along the way.
    pub fn locate(&mut self, u: &[usize]) -> Result<NodeId> {
        Ok(self.path_edges(u)?.last().map_or(self.root(), |e| e.child))
    }

    /// Edges of the path of `u`, one per prefix of length `1..=|u|`.
    pub fn path_edges(&mut self, u: &[usize]) -> Result<Vec<TreeEdge>> {
        let mut cur = self.root();
        let mut out = Vec::with_capacity(u.len());
        for k in 1..=u.len() {
            let e = self.child_containing(cur, &u[..k])?;
            cur = e.child;
            out.push(e);
        }
        Ok(out)
    }

    /// Labels along the path of `u`.
    pub fn path_of_word(&mut self, u: &[usize]) -> Result<Vec<u64>> {
        Ok(self.path_edges(u)?.into_iter().map(|e| e.label).collect())
    }

    /// Whether every word of `⊥(e)` has its suffix of length
    /// `level(f) + 1` in `⊥(f)`.
    ///
    /// Decided on the member sets. Without members only a label excess
    /// can refute liftability; anything else is reported as a budget error.
    pub fn is_liftable(&self, e: &TreeEdge, f: &TreeEdge) -> Result<bool> {
        if f.level > e.level {
            return Ok(false);
        }
        let (be, bf) = (&self.nodes[e.child], &self.nodes[f.child]);
        match (be.members(), bf.members()) {
            (Some(me), Some(mf)) => {
                let cut = e.level - f.level;
                Ok(me.iter().all(|w| mf.contains(&w[cut..])))
            }
            _ if e.label > f.label => Ok(false),
            _ => Err(Error::budget(
                "liftability members",
                self.budget,
                be.size().max(bf.size()),
            )),
        }
    }

    /// Lifts a downward chain of edges starting at level `k` to the chain
    /// starting at `target < k` read by the corresponding suffixes.
    pub fn lift_path(&mut self, path: &[TreeEdge], target: usize) -> Result<Vec<TreeEdge>> {
        let Some(first) = path.first() else {
            return Ok(Vec::new());
        };
        let k = first.level;
        if target > k {
            return Err(Error::InvalidArgument(format!(
                "cannot lift from level {k} to deeper level {target}"
            )));
        }
        for w in path.windows(2) {
            if w[0].child != w[1].parent {
                return Err(Error::InvalidArgument("edges do not form a downward path".into()));
            }
        }
        if target == k {
            return Ok(path.to_vec());
        }
        let bottom = self.nodes[path.last().expect("nonempty").child].canonical_rep().clone();
        let v = &bottom[k - target..];
        let edges = self.path_edges(v)?;
        Ok(edges[target..].to_vec())
    }

    /// Locates the connection-degree vertex by descending through
    /// single-child nodes, then reads the split below it.
    pub fn reduction_edge(&mut self, max_level: usize) -> Result<ReductionEdge> {
        let a = self.a;
        if !a.is_invertible() {
            return Ok(ReductionEdge::NotApplicable("automaton is not invertible".into()));
        }
        let nq = a.num_states() as u64;
        let mut cur = self.root();
        let mut level = 0;
        let split = loop {
            let edges = self.expand(cur)?;
            if edges.len() > 1 {
                break edges;
            }
            if level >= max_level {
                return Ok(ReductionEdge::NotApplicable(format!(
                    "connected at every level up to {max_level}"
                )));
            }
            cur = edges[0].child;
            level += 1;
        };
        if split.iter().all(|e| e.label == 1) {
            return Ok(ReductionEdge::AllSplit { degree: level });
        }
        if level == 0 {
            return Ok(ReductionEdge::NotApplicable("automaton is disconnected".into()));
        }
        let mut labels: Vec<u64> = split.iter().map(|e| e.label).collect();
        labels.sort_unstable();
        if nq == 3 && labels == [1, 2] {
            let e2 = *split.iter().find(|e| e.label == 2).expect("label 2 present");
            return Ok(ReductionEdge::Edge(e2));
        }
        Ok(ReductionEdge::NotApplicable(format!(
            "split {labels:?} below level {level} has no reduction edge"
        )))
    }

    /// Full expansion to `depth` followed by the run decomposition of every
    /// branch.
    pub fn block_profile(&mut self, depth: usize) -> Result<BlockProfile> {
        self.expand_to_depth(depth)?;
        let nq = self.a.num_states() as u64;
        let mut branches = Vec::new();
        for leaf in self.nodes_at_level(depth) {
            let mut labels = Vec::with_capacity(depth);
            let mut cur = leaf;
            while let Some(e) = self.edge_into(cur) {
                labels.push(e.label);
                cur = e.parent;
            }
            labels.reverse();
            branches.push(labels);
        }
        let mut max_block = BTreeMap::new();
        let mut heavy = (0, 0);
        for b in &branches {
            let runs = blocks(b);
            for &(l, n) in &runs {
                let m = max_block.entry(l).or_insert(0);
                *m = (*m).max(n);
            }
            let mut it = runs.iter().peekable();
            let a = match it.peek() {
                Some(&&(l, n)) if l == nq => {
                    it.next();
                    n
                }
                _ => 0,
            };
            let bb = match it.peek() {
                Some(&&(2, n)) => n,
                _ => 0,
            };
            if (bb, a) > (heavy.1, heavy.0) {
                heavy = (a, bb);
            }
        }
        Ok(BlockProfile {
            depth,
            branches,
            max_block,
            heavy_prefix: heavy,
        })
    }

    /// Follows edges of label at least 2 from the root. Returns the first
    /// such path reaching `depth`, trying heavier children first.
    pub fn find_heavy_branch(&mut self, depth: usize) -> Result<HeavyBranch> {
        let mut labels = Vec::new();
        match self.heavy_dfs(self.root(), depth, &mut labels)? {
            Some(end) => Ok(HeavyBranch::BranchPrefix {
                labels,
                rep: self.nodes[end].canonical_rep().clone(),
            }),
            None => Ok(HeavyBranch::Absent),
        }
    }

    fn heavy_dfs(&mut self, id: NodeId, remaining: usize, labels: &mut Vec<u64>) -> Result<Option<NodeId>> {
        if remaining == 0 {
            return Ok(Some(id));
        }
        let mut edges: Vec<TreeEdge> = self.expand(id)?.into_iter().filter(|e| e.label >= 2).collect();
        edges.sort_by_key(|e| std::cmp::Reverse(e.label));
        for e in edges {
            labels.push(e.label);
            if let Some(end) = self.heavy_dfs(e.child, remaining - 1, labels)? {
                return Ok(Some(end));
            }
            labels.pop();
        }
        Ok(None)
    }

    fn export_order(&self) -> Vec<NodeId> {
        let mut ids: Vec<NodeId> = (0..self.nodes.len()).collect();
        ids.sort_by(|&p, &q| {
            let (a, b) = (&self.nodes[p], &self.nodes[q]);
            (a.level(), a.canonical_rep()).cmp(&(b.level(), b.canonical_rep()))
        });
        ids
    }

    fn heavy_edges(&self, heavy: &HeavyBranch) -> Vec<(NodeId, NodeId)> {
        let HeavyBranch::BranchPrefix { rep, .. } = heavy else {
            return Vec::new();
        };
        let mut out = Vec::new();
        let mut cur = self.find(rep.len(), rep);
        while let Some(id) = cur {
            if let Some(p) = self.parent[id] {
                out.push((p, id));
            }
            cur = self.parent[id];
        }
        out
    }

    /// `{automaton, nodes, edges, heavy_branch}` over the computed part of
    /// the tree. Edge endpoints index into `nodes`; `heavy` marks the edges
    /// of the heavy branch.
    pub fn to_json(&self, heavy: &HeavyBranch) -> Value {
        let order = self.export_order();
        let mut pos = vec![0; self.nodes.len()];
        for (k, &id) in order.iter().enumerate() {
            pos[id] = k;
        }
        let nodes: Vec<Value> = order
            .iter()
            .enumerate()
            .map(|(k, &id)| {
                let c = &self.nodes[id];
                json!({"id": k, "level": c.level(), "rep": self.a.format_word(c.canonical_rep()), "size": c.size()})
            })
            .collect();
        let bold = self.heavy_edges(heavy);
        let mut edges: Vec<(usize, usize, u64, bool)> = self
            .edges()
            .iter()
            .map(|e| {
                (
                    pos[e.parent],
                    pos[e.child],
                    e.label,
                    bold.contains(&(e.parent, e.child)),
                )
            })
            .collect();
        edges.sort_unstable();
        let edges: Vec<Value> = edges
            .into_iter()
            .map(|(p, c, l, h)| json!({"parent": p, "child": c, "label": l, "heavy": h}))
            .collect();
        json!({
            "automaton": self.a.name(),
            "nodes": nodes,
            "edges": edges,
            "heavy_branch": heavy.labels(),
        })
    }

    pub fn to_dot(&self, heavy: &HeavyBranch) -> String {
        let order = self.export_order();
        let bold = self.heavy_edges(heavy);
        let mut s = String::new();
        writeln!(s, "digraph \"{}\" {{", self.a.name().replace('"', "\\\"")).unwrap();
        s.push_str("  node [shape=box];\n");
        for (k, &id) in order.iter().enumerate() {
            let c = &self.nodes[id];
            let rep = if c.level() == 0 {
                "ε".to_string()
            } else {
                self.a.format_word(c.canonical_rep())
            };
            writeln!(s, "  n{k} [label=\"{} ({})\"];", rep.replace('"', "\\\""), c.size()).unwrap();
        }
        let mut pos = vec![0; self.nodes.len()];
        for (k, &id) in order.iter().enumerate() {
            pos[id] = k;
        }
        let mut edges = self.edges();
        edges.sort_by_key(|e| (pos[e.parent], pos[e.child]));
        for e in edges {
            let style = if bold.contains(&(e.parent, e.child)) {
                ", style=bold, penwidth=3"
            } else {
                ""
            };
            writeln!(
                s,
                "  n{} -> n{} [label=\"{}\"{style}];",
                pos[e.parent], pos[e.child], e.label
            )
            .unwrap();
        }
        s.push_str("}\n");
        s
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::examples;

    const B: usize = 1_000_000;

    #[test]
    fn root_expansions() {
        let i3 = examples::i3();
        let mut t = OrbitTree::new(&i3, B).unwrap();
        let labels: Vec<u64> = t.expand(0).unwrap().iter().map(|e| e.label).collect();
        assert_eq!(labels, vec![1, 1, 1]);

        let a1 = examples::a1();
        let mut t = OrbitTree::new(&a1, B).unwrap();
        assert_eq!(
            t.expand(0).unwrap().iter().map(|e| e.label).collect::<Vec<_>>(),
            vec![3]
        );

        let a2 = examples::a2();
        let mut t = OrbitTree::new(&a2, B).unwrap();
        let mut labels: Vec<u64> = t.expand(0).unwrap().iter().map(|e| e.label).collect();
        labels.sort();
        assert_eq!(labels, vec![1, 2]);
        assert_eq!(t.expand(0).unwrap().len(), 2);
        assert_eq!(t.len(), 3);
    }

    #[test]
    fn paths() {
        let i3 = examples::i3();
        let mut t = OrbitTree::new(&i3, B).unwrap();
        assert_eq!(t.path_of_word(&[0, 1, 2]).unwrap(), vec![1, 1, 1]);
        let a1 = examples::a1();
        let mut t = OrbitTree::new(&a1, B).unwrap();
        for q in 0..3 {
            assert_eq!(t.path_of_word(&[q]).unwrap(), vec![3]);
        }
        assert_eq!(t.path_of_word(&[]).unwrap(), Vec::<u64>::new());
    }

    #[test]
    fn blocks_are_maximal_runs() {
        assert_eq!(blocks(&[3, 3, 2, 2, 2, 1]), vec![(3, 2), (2, 3), (1, 1)]);
        assert!(blocks(&[]).is_empty());
    }

    #[test]
    fn reduction_edges() {
        let a1 = examples::a1();
        let mut t = OrbitTree::new(&a1, B).unwrap();
        match t.reduction_edge(10).unwrap() {
            ReductionEdge::Edge(e) => {
                assert_eq!(e.label, 2);
                assert_eq!(e.level, 2);
            }
            other => panic!("{other:?}"),
        }
        let cs = examples::cyclic_shift();
        let mut t = OrbitTree::new(&cs, B).unwrap();
        assert_eq!(t.reduction_edge(10).unwrap(), ReductionEdge::AllSplit { degree: 1 });
        let a2 = examples::a2();
        let mut t = OrbitTree::new(&a2, B).unwrap();
        assert!(matches!(t.reduction_edge(10).unwrap(), ReductionEdge::NotApplicable(_)));
    }

    #[test]
    fn profiles_and_heavy_branches() {
        let i3 = examples::i3();
        let mut t = OrbitTree::new(&i3, B).unwrap();
        let p = t.block_profile(5).unwrap();
        assert_eq!(p.max_block(2), 0);
        assert_eq!(p.branches.len(), 243);
        assert_eq!(t.find_heavy_branch(5).unwrap(), HeavyBranch::Absent);

        let cs = examples::cyclic_shift();
        let mut t = OrbitTree::new(&cs, B).unwrap();
        let p = t.block_profile(4).unwrap();
        assert_eq!(p.heavy_prefix, (1, 0));
        assert!(p.branches.iter().all(|b| b[1..].iter().all(|&l| l == 1)));
        assert_eq!(t.find_heavy_branch(3).unwrap(), HeavyBranch::Absent);

        let a1 = examples::a1();
        let mut t = OrbitTree::new(&a1, B).unwrap();
        match t.find_heavy_branch(8).unwrap() {
            HeavyBranch::BranchPrefix { labels, rep } => {
                assert_eq!(labels, vec![3, 3, 2, 2, 2, 2, 2, 2]);
                assert_eq!(rep.len(), 8);
            }
            HeavyBranch::Absent => panic!("A1 has a heavy branch"),
        }
    }

    #[test]
    fn lifting_to_level_zero_gives_initial_edge() {
        let a1 = examples::a1();
        let mut t = OrbitTree::new(&a1, B).unwrap();
        let path = t.path_edges(&[0, 1, 2, 0]).unwrap();
        let lifted = t.lift_path(&path[3..], 0).unwrap();
        assert_eq!(lifted.len(), 1);
        assert_eq!(lifted[0].label, 3);
        assert_eq!(lifted[0].parent, t.root());
        assert!(t.is_liftable(&path[3], &lifted[0]).unwrap());
        assert_eq!(t.lift_path(&path[1..], 1).unwrap(), path[1..].to_vec());
    }

    #[test]
    fn label_one_edge_at_degree_is_not_liftable_to_e2() {
        let a1 = examples::a1();
        let mut t = OrbitTree::new(&a1, B).unwrap();
        let ReductionEdge::Edge(e2) = t.reduction_edge(10).unwrap() else {
            panic!()
        };
        let e1 = t
            .edges_from(e2.parent)
            .unwrap()
            .into_iter()
            .find(|e| e.label == 1)
            .unwrap();
        assert!(!t.is_liftable(&e1, &e2).unwrap());
        assert!(t.is_liftable(&e2, &e2).unwrap());
    }

    #[test]
    fn exports_are_deterministic() {
        let i3 = examples::i3();
        let mut t = OrbitTree::new(&i3, B).unwrap();
        t.expand_to_depth(3).unwrap();
        let j = t.to_json(&HeavyBranch::Absent);
        assert_eq!(j["nodes"].as_array().unwrap().len(), 40);
        assert_eq!(j["edges"].as_array().unwrap().len(), 39);
        let mut u = OrbitTree::new(&i3, B).unwrap();
        u.expand_to_depth(3).unwrap();
        assert_eq!(t.to_dot(&HeavyBranch::Absent), u.to_dot(&HeavyBranch::Absent));
        assert_eq!(j, u.to_json(&HeavyBranch::Absent));
    }
}
