#![allow(dead_code)]

use std::collections::{BTreeMap, BTreeSet, HashMap};

use orbitree::MealyAutomaton;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

pub type Word = Vec<usize>;

pub fn names(prefix: &str, n: usize) -> Vec<String> {
    (0..n).map(|k| format!("{prefix}{k}")).collect()
}

/// Random automaton; columns are permutations when `reversible`, rows when
/// `invertible`.
pub fn random_automaton(seed: u64, q: usize, l: usize, invertible: bool, reversible: bool) -> MealyAutomaton {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut delta = vec![vec![0; l]; q];
    let mut rho = vec![vec![0; l]; q];
    for i in 0..l {
        let mut col: Vec<usize> = (0..q).collect();
        col.shuffle(&mut rng);
        for (row, &c) in delta.iter_mut().zip(&col) {
            row[i] = if reversible { c } else { rng.gen_range(0..q) };
        }
    }
    for row in rho.iter_mut() {
        let mut perm: Vec<usize> = (0..l).collect();
        perm.shuffle(&mut rng);
        for (r, &p) in row.iter_mut().zip(&perm) {
            *r = if invertible { p } else { rng.gen_range(0..l) };
        }
    }
    MealyAutomaton::new(format!("R{seed}"), names("q", q), names("", l), delta, rho).unwrap()
}

pub fn pass_letter(a: &MealyAutomaton, u: &[usize], mut i: usize) -> (Word, usize) {
    let mut v = Vec::with_capacity(u.len());
    for &q in u {
        v.push(a.next(q, i));
        i = a.output(q, i);
    }
    (v, i)
}

pub fn act(a: &MealyAutomaton, u: &[usize], s: &[usize]) -> Word {
    let mut u = u.to_vec();
    s.iter()
        .map(|&i| {
            let (v, o) = pass_letter(a, &u, i);
            u = v;
            o
        })
        .collect()
}

pub fn all_words(k: usize, n: usize) -> Vec<Word> {
    let mut out = vec![Vec::new()];
    for _ in 0..n {
        out = out
            .into_iter()
            .flat_map(|w| {
                (0..k).map(move |x| {
                    let mut v = w.clone();
                    v.push(x);
                    v
                })
            })
            .collect();
    }
    out
}

pub fn words_up_to(k: usize, n: usize) -> Vec<Word> {
    (1..=n).flat_map(|m| all_words(k, m)).collect()
}

pub fn acts_equal_on(a: &MealyAutomaton, u: &[usize], v: &[usize], n: usize) -> bool {
    words_up_to(a.num_letters(), n)
        .iter()
        .all(|s| act(a, u, s) == act(a, v, s))
}

fn find(p: &mut [usize], x: usize) -> usize {
    let mut r = x;
    while p[r] != r {
        r = p[r];
    }
    p[x] = r;
    r
}

pub fn union_find_orbits(a: &MealyAutomaton, n: usize) -> BTreeSet<BTreeSet<Word>> {
    let words = all_words(a.num_states(), n);
    let index: HashMap<Word, usize> = words.iter().cloned().enumerate().map(|(k, w)| (w, k)).collect();
    let mut p: Vec<usize> = (0..words.len()).collect();
    for (k, w) in words.iter().enumerate() {
        for i in 0..a.num_letters() {
            let j = index[&pass_letter(a, w, i).0];
            let (r, s) = (find(&mut p, k), find(&mut p, j));
            p[r] = s;
        }
    }
    let mut classes: BTreeMap<usize, BTreeSet<Word>> = BTreeMap::new();
    for (k, w) in words.iter().enumerate() {
        classes.entry(find(&mut p, k)).or_default().insert(w.clone());
    }
    classes.into_values().collect()
}

pub fn permutations(n: usize) -> Vec<Word> {
    all_words(n, n)
        .into_iter()
        .filter(|p| p.iter().collect::<BTreeSet<_>>().len() == n)
        .collect()
}

/// Same alphabet, some bijection of states carrying one table onto the other.
pub fn brute_isomorphic(a: &MealyAutomaton, b: &MealyAutomaton) -> bool {
    if a.num_states() != b.num_states() || a.num_letters() != b.num_letters() {
        return false;
    }
    permutations(a.num_states()).iter().any(|s| {
        (0..a.num_states()).all(|q| {
            (0..a.num_letters()).all(|i| b.next(s[q], i) == s[a.next(q, i)] && b.output(s[q], i) == a.output(q, i))
        })
    })
}
