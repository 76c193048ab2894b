//! Run semantics of ordinal automata on finite α-words.
//!
//! Runs on a constant segment `σ^{ω^k}` are summarised by level-`k`
//! profiles: triples `(q, A, p)` meaning some run on the segment starts in
//! `q`, ends (at the segment's end position) in `p`, and visits exactly the
//! states `A` strictly before the end. Level `k + 1` blocks are ω-sequences
//! of level `k` blocks; a run through them is a finite prefix followed by a
//! cycle repeated ω times whose visited union is the cofinal set.

use std::collections::{BTreeSet, HashMap, HashSet, VecDeque};
use std::sync::{Arc, Mutex};

use serde::Serialize;

use crate::automaton::OrdinalAutomaton;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::relation::{Relation, State, StateSet};
use crate::word::{AlphaWord, Symbol};

/// Level-`k` block summary for one symbol.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Profile {
    pub level: usize,
    /// Sorted, deduplicated triples `(from, visited, to)`.
    pub triples: Vec<(State, StateSet, State)>,
}

impl Profile {
    /// The reachability relation obtained by forgetting visited sets.
    pub fn relation(&self, n: usize) -> Relation {
        Relation::from_pairs(n, self.triples.iter().map(|&(q, _, p)| (q, p)))
    }

    pub fn contains(&self, q: State, visited: StateSet, p: State) -> bool {
        self.triples.binary_search(&(q, visited, p)).is_ok()
    }
}

/// Memo of profiles and reach relations, shared by clones of an automaton.
#[derive(Default)]
pub struct RunCache {
    profiles: Mutex<HashMap<Symbol, Vec<Arc<Profile>>>>,
    levels: Mutex<HashMap<(Symbol, usize), Relation>>,
    reach: Mutex<HashMap<(Symbol, Ordinal), Relation>>,
}

const REACH_CACHE_LIMIT: usize = 1 << 16;

impl std::fmt::Debug for RunCache {
    fn fmt(&self, f: &mut std::fmt::Formatter<'_>) -> std::fmt::Result {
        f.write_str("RunCache")
    }
}

fn level_zero(a: &OrdinalAutomaton, sym: Symbol) -> Profile {
    let mut triples: Vec<_> = (0..a.num_states() as State)
        .flat_map(|q| {
            a.successors(q, sym)
                .iter()
                .map(move |p| (q, StateSet::singleton(q), p))
        })
        .collect();
    triples.sort();
    Profile { level: 0, triples }
}

/// Transitive closure (paths of length ≥ 1) of a graph given by successor
/// masks.
fn closure(adj: &[StateSet]) -> Vec<StateSet> {
    let n = adj.len();
    let mut reach = adj.to_vec();
    for k in 0..n {
        for i in 0..n {
            if reach[i].contains(k as State) {
                reach[i] = reach[i].union(reach[k]);
            }
        }
    }
    reach
}

fn next_level(a: &OrdinalAutomaton, prev: &Profile) -> Profile {
    let n = a.num_states();
    let limits = a.limit_map();
    // Anchors: states lying on a cycle of P_k triples, all visiting ⊆ S,
    // whose visited union is exactly S.
    let mut anchored: Vec<(StateSet, StateSet, StateSet)> = Vec::new();
    for (&s, &targets) in &limits {
        if s.is_empty() {
            continue;
        }
        let edges: Vec<_> = prev
            .triples
            .iter()
            .filter(|(_, v, _)| v.is_subset(s))
            .copied()
            .collect();
        let mut adj = vec![StateSet::EMPTY; n];
        for &(u, _, v) in &edges {
            adj[u as usize].insert(v);
        }
        let reach = closure(&adj);
        let mut anchors = StateSet::EMPTY;
        for u in s.iter() {
            if anchors.contains(u) || !reach[u as usize].contains(u) {
                continue;
            }
            let scc: StateSet = reach[u as usize]
                .iter()
                .filter(|&v| reach[v as usize].contains(u))
                .collect();
            let covered = edges
                .iter()
                .filter(|(x, _, y)| scc.contains(*x) && scc.contains(*y))
                .fold(StateSet::EMPTY, |acc, (_, v, _)| acc.union(*v));
            if covered == s {
                anchors = anchors.union(scc);
            }
        }
        if !anchors.is_empty() {
            anchored.push((s, anchors, targets));
        }
    }
    let mut out = BTreeSet::new();
    if !anchored.is_empty() {
        let mut by_start: Vec<Vec<(StateSet, State)>> = vec![Vec::new(); n];
        for &(q, v, p) in &prev.triples {
            by_start[q as usize].push((v, p));
        }
        for q in 0..n as State {
            let mut seen: HashSet<(State, StateSet)> = HashSet::new();
            let mut queue = VecDeque::new();
            seen.insert((q, StateSet::EMPTY));
            queue.push_back((q, StateSet::EMPTY));
            while let Some((u, acc)) = queue.pop_front() {
                for &(s, anchors, targets) in &anchored {
                    if anchors.contains(u) {
                        for p in targets.iter() {
                            out.insert((q, acc.union(s), p));
                        }
                    }
                }
                for &(v, p) in &by_start[u as usize] {
                    let next = (p, acc.union(v));
                    if seen.insert(next) {
                        queue.push_back(next);
                    }
                }
            }
        }
    }
    Profile {
        level: prev.level + 1,
        triples: out.into_iter().collect(),
    }
}

/// The level-`k` profile of `sym`.
pub fn profiles(a: &OrdinalAutomaton, sym: Symbol, k: usize) -> Arc<Profile> {
    let mut memo = a.cache().profiles.lock().expect("profile cache poisoned");
    let levels = memo
        .entry(sym)
        .or_insert_with(|| vec![Arc::new(level_zero(a, sym))]);
    while levels.len() <= k {
        let next = next_level(a, levels.last().expect("level 0 present"));
        levels.push(Arc::new(next));
    }
    levels[k].clone()
}

/// `q → p` on the segment `σ^{ω^k}`.
pub fn level_relation(a: &OrdinalAutomaton, sym: Symbol, k: usize) -> Relation {
    if let Some(r) = a
        .cache()
        .levels
        .lock()
        .expect("level cache poisoned")
        .get(&(sym, k))
    {
        return r.clone();
    }
    let r = profiles(a, sym, k).relation(a.num_states());
    a.cache()
        .levels
        .lock()
        .expect("level cache poisoned")
        .insert((sym, k), r.clone());
    r
}

/// Runs on the constant segment `σ^g`: blocks composed along the Cantor
/// normal form of `g`, highest exponent first.
pub fn const_reach(a: &OrdinalAutomaton, sym: Symbol, g: &Ordinal) -> Relation {
    let key = (sym, g.clone());
    if let Some(r) = a.cache().reach.lock().expect("reach cache poisoned").get(&key) {
        return r.clone();
    }
    let r = compose_levels(a, sym, g);
    let mut memo = a.cache().reach.lock().expect("reach cache poisoned");
    if memo.len() >= REACH_CACHE_LIMIT {
        memo.clear();
    }
    memo.insert(key, r.clone());
    r
}

fn compose_levels(a: &OrdinalAutomaton, sym: Symbol, g: &Ordinal) -> Relation {
    let n = a.num_states();
    let mut acc = Relation::identity(n);
    for (k, &c) in g.coeffs().iter().enumerate().rev() {
        if c > 0 {
            acc = acc.then(&level_relation(a, sym, k).pow(c));
        }
    }
    acc
}

/// Runs on blank gaps `◇^g`.
pub fn gap_relation(a: &OrdinalAutomaton, g: &Ordinal) -> Relation {
    const_reach(a, a.alphabet().blank(), g)
}

/// `q → p` over the whole word `w`.
pub fn run_relation(a: &OrdinalAutomaton, w: &AlphaWord) -> Result<Relation> {
    check_alphabet(a, w)?;
    let mut acc = Relation::identity(a.num_states());
    let mut cursor = Ordinal::zero();
    for (pos, &sym) in w.entries() {
        let gap = Ordinal::interval_type(&cursor, pos)?;
        acc = acc.then(&gap_relation(a, &gap)).then(&a.step_relation(sym));
        cursor = pos.succ();
    }
    let tail = Ordinal::interval_type(&cursor, w.length())?;
    Ok(acc.then(&gap_relation(a, &tail)))
}

/// Whether `a` has an accepting run on `w`.
pub fn member(a: &OrdinalAutomaton, w: &AlphaWord) -> Result<bool> {
    check_alphabet(a, w)?;
    let blank = a.alphabet().blank();
    let mut cur = a.initial();
    let mut cursor = Ordinal::zero();
    for (pos, &sym) in w.entries() {
        let gap = Ordinal::interval_type(&cursor, pos)?;
        cur = const_reach(a, blank, &gap).image(cur);
        cur = cur
            .iter()
            .fold(StateSet::EMPTY, |acc, q| acc.union(a.successors(q, sym)));
        if cur.is_empty() {
            return Ok(false);
        }
        cursor = pos.succ();
    }
    let tail = Ordinal::interval_type(&cursor, w.length())?;
    Ok(!const_reach(a, blank, &tail).image(cur).intersect(a.finals()).is_empty())
}

fn check_alphabet(a: &OrdinalAutomaton, w: &AlphaWord) -> Result<()> {
    if Arc::ptr_eq(w.alphabet(), a.alphabet()) || **w.alphabet() == **a.alphabet() {
        Ok(())
    } else {
        Err(Error::AlphabetMismatch(
            "word and automaton alphabets differ".into(),
        ))
    }
}

/// `ω^m · c` for an ordinal multiplier `c`.
pub fn omega_pow_times(m: usize, c: &Ordinal) -> Ordinal {
    if c.is_zero() {
        return Ordinal::zero();
    }
    let mut coeffs = vec![0; m];
    coeffs.extend_from_slice(c.coeffs());
    Ordinal::from_coeffs(coeffs)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationEntry {
    pub multiplier: Ordinal,
    pub holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SaturationReport {
    pub symbol: String,
    pub m: usize,
    pub entries: Vec<SaturationEntry>,
}

impl SaturationReport {
    pub fn all_hold(&self) -> bool {
        self.entries.iter().all(|e| e.holds)
    }
}

/// Compares `Reach(σ^{ω^m})` with `Reach(σ^{ω^m·c})` for each multiplier.
pub fn saturation_check(
    a: &OrdinalAutomaton,
    sym: Symbol,
    m: usize,
    multipliers: &[Ordinal],
) -> Result<SaturationReport> {
    let base = const_reach(a, sym, &Ordinal::omega_pow(m));
    let mut entries = Vec::new();
    for c in multipliers {
        if c.is_zero() {
            return Err(Error::Precondition("saturation multipliers must be ≥ 1".into()));
        }
        let r = const_reach(a, sym, &omega_pow_times(m, c));
        entries.push(SaturationEntry {
            multiplier: c.clone(),
            holds: r == base,
        });
    }
    Ok(SaturationReport {
        symbol: a.alphabet().name(sym),
        m,
        entries,
    })
}
