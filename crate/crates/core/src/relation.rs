//! Small state sets and binary relations on automaton states.

use std::fmt;

/// A state index.
pub type State = u8;

/// Maximum number of states of an ordinal automaton.
pub const MAX_STATES: usize = 64;

/// A set of states as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct StateSet(pub u64);

impl StateSet {
    pub const EMPTY: StateSet = StateSet(0);

    pub fn singleton(q: State) -> Self {
        StateSet(1u64 << q)
    }

    pub fn full(n: usize) -> Self {
        if n >= 64 {
            StateSet(u64::MAX)
        } else {
            StateSet((1u64 << n) - 1)
        }
    }

    pub fn contains(self, q: State) -> bool {
        self.0 >> q & 1 == 1
    }

    pub fn insert(&mut self, q: State) {
        self.0 |= 1u64 << q;
    }

    pub fn union(self, other: StateSet) -> StateSet {
        StateSet(self.0 | other.0)
    }

    pub fn intersect(self, other: StateSet) -> StateSet {
        StateSet(self.0 & other.0)
    }

    pub fn is_subset(self, other: StateSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    pub fn iter(self) -> impl Iterator<Item = State> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let q = bits.trailing_zeros() as State;
                bits &= bits - 1;
                Some(q)
            }
        })
    }
}

impl FromIterator<State> for StateSet {
    fn from_iter<I: IntoIterator<Item = State>>(iter: I) -> Self {
        let mut s = StateSet::EMPTY;
        for q in iter {
            s.insert(q);
        }
        s
    }
}

impl fmt::Debug for StateSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A binary relation on `n` states, one successor set per row.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Relation {
    rows: Vec<StateSet>,
}

impl Relation {
    pub fn empty(n: usize) -> Self {
        Relation {
            rows: vec![StateSet::EMPTY; n],
        }
    }

    pub fn identity(n: usize) -> Self {
        Relation {
            rows: (0..n).map(|q| StateSet::singleton(q as State)).collect(),
        }
    }

    pub fn from_rows(rows: Vec<StateSet>) -> Self {
        Relation { rows }
    }

    pub fn from_pairs(n: usize, pairs: impl IntoIterator<Item = (State, State)>) -> Self {
        let mut r = Relation::empty(n);
        for (q, p) in pairs {
            r.rows[q as usize].insert(p);
        }
        r
    }

    pub fn size(&self) -> usize {
        self.rows.len()
    }

    pub fn row(&self, q: State) -> StateSet {
        self.rows[q as usize]
    }

    pub fn rows(&self) -> &[StateSet] {
        &self.rows
    }

    pub fn contains(&self, q: State, p: State) -> bool {
        self.rows[q as usize].contains(p)
    }

    pub fn pairs(&self) -> impl Iterator<Item = (State, State)> + '_ {
        self.rows
            .iter()
            .enumerate()
            .flat_map(|(q, row)| row.iter().map(move |p| (q as State, p)))
    }

    /// Image of a set of states.
    pub fn image(&self, set: StateSet) -> StateSet {
        set.iter()
            .fold(StateSet::EMPTY, |acc, q| acc.union(self.rows[q as usize]))
    }

    /// Relational composition: first `self`, then `other`.
    pub fn then(&self, other: &Relation) -> Relation {
        Relation {
            rows: self.rows.iter().map(|&row| other.image(row)).collect(),
        }
    }

    pub fn union(&self, other: &Relation) -> Relation {
        Relation {
            rows: self
                .rows
                .iter()
                .zip(&other.rows)
                .map(|(a, b)| a.union(*b))
                .collect(),
        }
    }

    pub fn pow(&self, mut e: u64) -> Relation {
        let mut base = self.clone();
        let mut acc = Relation::identity(self.size());
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.then(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.then(&base);
            }
        }
        acc
    }

    pub fn is_empty(&self) -> bool {
        self.rows.iter().all(|r| r.is_empty())
    }

    /// Smallest `(λ, π)` with `R^{λ+π} = R^λ`, together with the powers
    /// `R^0, ..., R^{λ+π-1}`. Returns `None` if no repeat occurs within
    /// `limit` powers.
    pub fn power_cycle(&self, limit: usize) -> Option<PowerCycle> {
        let mut seen = std::collections::HashMap::new();
        let mut powers = Vec::new();
        let mut cur = Relation::identity(self.size());
        for i in 0..=limit {
            if let Some(&j) = seen.get(&cur) {
                return Some(PowerCycle {
                    threshold: j as u64,
                    period: (i - j) as u64,
                    powers,
                });
            }
            seen.insert(cur.clone(), i);
            powers.push(cur.clone());
            cur = cur.then(self);
        }
        None
    }
}

impl fmt::Debug for Relation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.pairs()).finish()
    }
}

/// The eventually periodic sequence of powers of a relation.
#[derive(Clone, Debug)]
pub struct PowerCycle {
    pub threshold: u64,
    pub period: u64,
    powers: Vec<Relation>,
}

impl PowerCycle {
    /// `R^e` by table lookup.
    pub fn power(&self, e: u64) -> &Relation {
        let idx = if e < self.threshold {
            e
        } else {
            self.threshold + (e - self.threshold) % self.period
        };
        &self.powers[idx as usize]
    }
}
