//! Mealy automata: the transducer itself, its structural predicates, and the
//! dual / inverse / power / minimization transforms.
//!
//! States and letters are addressed by their declaration index. Names only
//! matter at the text boundary (see [`crate::format`]).

use std::collections::HashSet;
use std::fmt;

use crate::error::{Error, Result};
use crate::word::{LetterWord, StateWord};

/// A complete, deterministic, letter-to-letter transducer `(Q, Σ, δ, ρ)`.
///
/// `next(q, i)` is `δ_i(q)` and `output(q, i)` is `ρ_q(i)`.
#[derive(Clone, Debug)]
pub struct MealyAutomaton {
    name: String,
    states: Vec<String>,
    letters: Vec<String>,
    delta: Vec<usize>,
    rho: Vec<usize>,
}

/// Structural equality: same names in the same order and the same tables.
/// The automaton's own name is not compared.
impl PartialEq for MealyAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.states == other.states
            && self.letters == other.letters
            && self.delta == other.delta
            && self.rho == other.rho
    }
}

impl Eq for MealyAutomaton {}

pub(crate) fn valid_name(s: &str) -> bool {
    !s.is_empty() && !s.contains(char::is_whitespace) && !s.contains([':', '|', '#']) && !s.contains("->")
}

fn check_names(kind: &str, names: &[String]) -> Result<()> {
    if names.is_empty() {
        return Err(Error::InvalidAutomaton(format!("empty {kind} set")));
    }
    let mut seen = HashSet::new();
    for n in names {
        if !valid_name(n) {
            return Err(Error::InvalidAutomaton(format!("invalid {kind} name `{n}`")));
        }
        if !seen.insert(n.as_str()) {
            return Err(Error::InvalidAutomaton(format!("duplicate {kind} name `{n}`")));
        }
    }
    Ok(())
}

impl MealyAutomaton {
    /// Builds an automaton from row-major tables `delta[q][i]` and `rho[q][i]`.
    pub fn new(
        name: impl Into<String>,
        states: Vec<String>,
        letters: Vec<String>,
        delta: Vec<Vec<usize>>,
        rho: Vec<Vec<usize>>,
    ) -> Result<Self> {
        check_names("state", &states)?;
        check_names("letter", &letters)?;
        let (nq, nl) = (states.len(), letters.len());
        if delta.len() != nq || rho.len() != nq {
            return Err(Error::InvalidAutomaton("table height differs from |Q|".into()));
        }
        for (d, r) in delta.iter().zip(&rho) {
            if d.len() != nl || r.len() != nl {
                return Err(Error::InvalidAutomaton("table width differs from |Σ|".into()));
            }
            if d.iter().any(|&q| q >= nq) || r.iter().any(|&i| i >= nl) {
                return Err(Error::InvalidAutomaton("table entry out of range".into()));
            }
        }
        Ok(MealyAutomaton {
            name: name.into(),
            states,
            letters,
            delta: delta.concat(),
            rho: rho.concat(),
        })
    }

    /// Builds an automaton from a closure `(q, i) -> (δ_i(q), ρ_q(i))`.
    pub fn from_fn(
        name: impl Into<String>,
        states: Vec<String>,
        letters: Vec<String>,
        f: impl Fn(usize, usize) -> (usize, usize),
    ) -> Result<Self> {
        let (nq, nl) = (states.len(), letters.len());
        let mut delta = vec![vec![0; nl]; nq];
        let mut rho = vec![vec![0; nl]; nq];
        for q in 0..nq {
            for i in 0..nl {
                let (t, o) = f(q, i);
                delta[q][i] = t;
                rho[q][i] = o;
            }
        }
        Self::new(name, states, letters, delta, rho)
    }

    pub fn name(&self) -> &str {
        &self.name
    }

    pub fn with_name(mut self, name: impl Into<String>) -> Self {
        self.name = name.into();
        self
    }

    pub fn num_states(&self) -> usize {
        self.states.len()
    }

    pub fn num_letters(&self) -> usize {
        self.letters.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.states
    }

    pub fn letter_names(&self) -> &[String] {
        &self.letters
    }

    /// `δ_i(q)`.
    #[inline]
    pub fn next(&self, q: usize, i: usize) -> usize {
        self.delta[q * self.letters.len() + i]
    }

    /// `ρ_q(i)`.
    #[inline]
    pub fn output(&self, q: usize, i: usize) -> usize {
        self.rho[q * self.letters.len() + i]
    }

    fn rho_row(&self, q: usize) -> &[usize] {
        let nl = self.letters.len();
        &self.rho[q * nl..(q + 1) * nl]
    }

    /// Every output row `ρ_x` is a permutation of `Σ`.
    pub fn is_invertible(&self) -> bool {
        (0..self.num_states()).all(|q| is_permutation(self.rho_row(q)))
    }

    /// Every column `δ_i` is a permutation of `Q`.
    pub fn is_reversible(&self) -> bool {
        (0..self.num_letters()).all(|i| {
            let col: Vec<usize> = (0..self.num_states()).map(|q| self.next(q, i)).collect();
            is_permutation(&col)
        })
    }

    /// Invertible, reversible, and with a reversible inverse.
    pub fn is_bireversible(&self) -> bool {
        self.is_invertible() && self.is_reversible() && self.inverse().map(|inv| inv.is_reversible()).unwrap_or(false)
    }

    /// The dual automaton `(Σ, Q, ρ, δ)`: letters become states and vice versa.
    pub fn dual(&self) -> MealyAutomaton {
        let (nq, nl) = (self.num_states(), self.num_letters());
        let mut delta = Vec::with_capacity(nq * nl);
        let mut rho = Vec::with_capacity(nq * nl);
        for i in 0..nl {
            for x in 0..nq {
                delta.push(self.output(x, i));
                rho.push(self.next(x, i));
            }
        }
        MealyAutomaton {
            name: format!("dual({})", self.name),
            states: self.letters.clone(),
            letters: self.states.clone(),
            delta,
            rho,
        }
    }

    /// The inverse transducer, with transitions `x: ρ_x(i)|i->δ_i(x)`.
    pub fn inverse(&self) -> Result<MealyAutomaton> {
        if !self.is_invertible() {
            return Err(Error::NotInvertible);
        }
        let (nq, nl) = (self.num_states(), self.num_letters());
        let mut delta = vec![0; nq * nl];
        let mut rho = vec![0; nq * nl];
        for x in 0..nq {
            for i in 0..nl {
                let j = self.output(x, i);
                rho[x * nl + j] = i;
                delta[x * nl + j] = self.next(x, i);
            }
        }
        Ok(MealyAutomaton {
            name: format!("inverse({})", self.name),
            states: self.states.clone(),
            letters: self.letters.clone(),
            delta,
            rho,
        })
    }

    /// Nerode classes: `classes[q]` is the class index of `q`, classes
    /// numbered in order of their least member.
    pub fn nerode_classes(&self) -> Vec<usize> {
        let (nq, nl) = (self.num_states(), self.num_letters());
        let mut class = renumber((0..nq).map(|q| self.rho_row(q).to_vec()));
        let mut count = class.iter().max().map_or(0, |m| m + 1);
        loop {
            let refined = renumber((0..nq).map(|q| {
                let mut sig = Vec::with_capacity(nl + 1);
                sig.push(class[q]);
                sig.extend((0..nl).map(|i| class[self.next(q, i)]));
                sig
            }));
            let new_count = refined.iter().max().map_or(0, |m| m + 1);
            class = refined;
            if new_count == count {
                return class;
            }
            count = new_count;
        }
    }

    /// Quotient by the Nerode equivalence. Each class keeps the name of its
    /// least member.
    pub fn minimize(&self) -> MealyAutomaton {
        let class = self.nerode_classes();
        let nl = self.num_letters();
        let count = class.iter().max().map_or(0, |m| m + 1);
        let mut reps = vec![usize::MAX; count];
        for (q, &c) in class.iter().enumerate() {
            if reps[c] == usize::MAX {
                reps[c] = q;
            }
        }
        let mut delta = Vec::with_capacity(count * nl);
        let mut rho = Vec::with_capacity(count * nl);
        for &q in &reps {
            for i in 0..nl {
                delta.push(class[self.next(q, i)]);
                rho.push(self.output(q, i));
            }
        }
        MealyAutomaton {
            name: self.name.clone(),
            states: reps.iter().map(|&q| self.states[q].clone()).collect(),
            letters: self.letters.clone(),
            delta,
            rho,
        }
    }

    /// `ρ_u(s)`: runs the transducer from `u_1`, then feeds the output to
    /// `u_2`, and so on (`ρ_u = ρ_{u_n} ∘ ⋯ ∘ ρ_{u_1}`).
    pub fn apply_action(&self, u: &[usize], s: &[usize]) -> LetterWord {
        let mut out = s.to_vec();
        for &x in u {
            let mut q = x;
            for c in out.iter_mut() {
                let i = *c;
                *c = self.output(q, i);
                q = self.next(q, i);
            }
        }
        LetterWord(out)
    }

    /// `ρ_u` on a single letter.
    #[inline]
    pub fn act_letter(&self, u: &[usize], mut i: usize) -> usize {
        for &x in u {
            i = self.output(x, i);
        }
        i
    }

    /// The `n`-th power `A^n` on the stateset `Q^n` in lexicographic order.
    /// `A^0` is the one-state automaton acting as the identity.
    pub fn power(&self, n: usize, state_budget: usize) -> Result<MealyAutomaton> {
        let (nq, nl) = (self.num_states(), self.num_letters());
        let count = u32::try_from(n)
            .ok()
            .and_then(|n| nq.checked_pow(n))
            .filter(|&c| c <= state_budget)
            .ok_or_else(|| Error::budget("power stateset", state_budget, 0))?;
        let mut delta = Vec::with_capacity(count * nl);
        let mut rho = Vec::with_capacity(count * nl);
        let mut names = Vec::with_capacity(count);
        let mut word = vec![0usize; n];
        let mut buf = Vec::with_capacity(n);
        for idx in 0..count {
            index_to_word(idx, nq, &mut word);
            names.push(if n == 0 {
                "ε".to_string()
            } else {
                self.format_word(&word)
            });
            for i in 0..nl {
                crate::orbits::dual_step_into(self, i, &word, &mut buf);
                delta.push(word_to_index(&buf, nq));
                rho.push(self.act_letter(&word, i));
            }
        }
        Ok(MealyAutomaton {
            name: format!("{}^{}", self.name, n),
            states: names,
            letters: self.letters.clone(),
            delta,
            rho,
        })
    }

    pub fn state_index(&self, name: &str) -> Option<usize> {
        self.states.iter().position(|s| s == name)
    }

    pub fn letter_index(&self, name: &str) -> Option<usize> {
        self.letters.iter().position(|s| s == name)
    }

    fn single_char_names(names: &[String]) -> bool {
        names.iter().all(|n| n.chars().count() == 1)
    }

    /// Renders a state word. Single-character names are juxtaposed, longer
    /// names are joined with `.`.
    pub fn format_word(&self, u: &[usize]) -> String {
        format_names(&self.states, u)
    }

    pub fn format_letters(&self, s: &[usize]) -> String {
        format_names(&self.letters, s)
    }

    /// Parses a state word written as by [`Self::format_word`]; whitespace
    /// and `.` are also accepted as separators.
    pub fn parse_state_word(&self, text: &str) -> Result<StateWord> {
        parse_names(&self.states, text)
            .map(StateWord)
            .map_err(Error::UnknownState)
    }

    pub fn parse_letter_word(&self, text: &str) -> Result<LetterWord> {
        parse_names(&self.letters, text)
            .map(LetterWord)
            .map_err(|s| Error::InvalidArgument(format!("unknown letter `{s}`")))
    }
}

pub(crate) fn format_names(names: &[String], w: &[usize]) -> String {
    let sep = if MealyAutomaton::single_char_names(names) {
        ""
    } else {
        "."
    };
    w.iter().map(|&q| names[q].as_str()).collect::<Vec<_>>().join(sep)
}

fn parse_names(names: &[String], text: &str) -> std::result::Result<Vec<usize>, String> {
    let text = text.trim();
    let lookup = |t: &str| names.iter().position(|n| n == t).ok_or_else(|| t.to_string());
    if text.is_empty() {
        return Ok(Vec::new());
    }
    if text.contains(|c: char| c.is_whitespace() || c == '.') {
        return text
            .split(|c: char| c.is_whitespace() || c == '.')
            .filter(|t| !t.is_empty())
            .map(lookup)
            .collect();
    }
    if MealyAutomaton::single_char_names(names) {
        text.chars().map(|c| lookup(c.encode_utf8(&mut [0; 4]))).collect()
    } else {
        lookup(text).map(|q| vec![q])
    }
}

fn is_permutation(row: &[usize]) -> bool {
    let mut seen = vec![false; row.len()];
    row.iter()
        .all(|&v| v < seen.len() && !std::mem::replace(&mut seen[v], true))
}

/// Renumbers signatures by order of first appearance.
fn renumber<I: Iterator<Item = Vec<usize>>>(sigs: I) -> Vec<usize> {
    let mut ids = std::collections::HashMap::new();
    sigs.map(|s| {
        let next = ids.len();
        *ids.entry(s).or_insert(next)
    })
    .collect()
}

pub(crate) fn index_to_word(mut idx: usize, base: usize, out: &mut [usize]) {
    for slot in out.iter_mut().rev() {
        *slot = idx % base;
        idx /= base;
    }
}

pub(crate) fn word_to_index(w: &[usize], base: usize) -> usize {
    w.iter().fold(0, |acc, &s| acc * base + s)
}

/// Whether some bijection of statesets, fixing the alphabet pointwise,
/// commutes with `δ` and `ρ`.
///
/// Backtracking over state assignments; each tentative pair `x ↦ y` forces
/// `δ_i(x) ↦ δ_i(y)` for all letters, so only one choice per weakly
/// reachable region is ever guessed.
pub fn are_isomorphic(a: &MealyAutomaton, b: &MealyAutomaton) -> Result<bool> {
    if a.letters != b.letters {
        return Err(Error::AlphabetMismatch);
    }
    if a.num_states() != b.num_states() {
        return Ok(false);
    }
    let n = a.num_states();
    let mut fwd = vec![usize::MAX; n];
    let mut bwd = vec![usize::MAX; n];
    Ok(iso_search(a, b, &mut fwd, &mut bwd))
}

fn iso_search(a: &MealyAutomaton, b: &MealyAutomaton, fwd: &mut Vec<usize>, bwd: &mut Vec<usize>) -> bool {
    let Some(x) = fwd.iter().position(|&y| y == usize::MAX) else {
        return true;
    };
    for y in 0..b.num_states() {
        if bwd[y] != usize::MAX || a.rho_row(x) != b.rho_row(y) {
            continue;
        }
        let (saved_f, saved_b) = (fwd.clone(), bwd.clone());
        if propagate(a, b, fwd, bwd, x, y) && iso_search(a, b, fwd, bwd) {
            return true;
        }
        *fwd = saved_f;
        *bwd = saved_b;
    }
    false
}

fn propagate(a: &MealyAutomaton, b: &MealyAutomaton, fwd: &mut [usize], bwd: &mut [usize], x: usize, y: usize) -> bool {
    let mut stack = vec![(x, y)];
    while let Some((p, q)) = stack.pop() {
        match (fwd[p], bwd[q]) {
            (fp, bq) if fp == q && bq == p => continue,
            (usize::MAX, usize::MAX) => {}
            _ => return false,
        }
        if a.rho_row(p) != b.rho_row(q) {
            return false;
        }
        fwd[p] = q;
        bwd[q] = p;
        for i in 0..a.num_letters() {
            stack.push((a.next(p, i), b.next(q, i)));
        }
    }
    true
}

impl fmt::Display for MealyAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::format::serialize(self))
    }
}
