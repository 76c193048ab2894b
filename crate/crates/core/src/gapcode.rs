//! Finite-sequence encodings of finite α-words and classical NFAs over them.
//!
//! A word is written as its gaps and letters. Each gap is spelled by the
//! tokens of its Cantor normal form, highest exponent first: a gap of type
//! `ω·2+1` is `W1 W1 W0`. The resulting token words are in bijection with
//! α-words, and a classical NFA over tokens and letters can follow an
//! ordinal automaton exactly, since token `Wj` acts as the reach relation
//! of `◇^{ω^j}`. Every NFA here carries a *shape* tag per state, tracking
//! the canonical-gap discipline and the running ordinal sum (capped just
//! above the coefficients of α), so its language stays inside the set of
//! well-formed encodings of length-α words.

use std::collections::{BTreeSet, HashMap, VecDeque};
use std::hash::Hash;
use std::sync::Arc;

use serde::Serialize;

use crate::automaton::OrdinalAutomaton;
use crate::error::{Error, Result};
use crate::ordinal::Ordinal;
use crate::semantics::level_relation;
use crate::word::{AlphaWord, Alphabet, Symbol};

/// Default bound on the number of states any single construction may create.
pub const DEFAULT_STATE_LIMIT: usize = 1 << 16;

/// Gaps and letters of a word: `g_0 a_1 g_1 … a_n g_n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct GapWord {
    pub length: Ordinal,
    pub gaps: Vec<Ordinal>,
    pub letters: Vec<Symbol>,
}

impl GapWord {
    pub fn encode(w: &AlphaWord) -> GapWord {
        let mut gaps = Vec::new();
        let mut letters = Vec::new();
        let mut cursor = Ordinal::zero();
        for (pos, &sym) in w.entries() {
            gaps.push(Ordinal::interval_type(&cursor, pos).expect("entries are ordered"));
            letters.push(sym);
            cursor = pos.succ();
        }
        gaps.push(Ordinal::interval_type(&cursor, w.length()).expect("entries lie below length"));
        GapWord {
            length: w.length().clone(),
            gaps,
            letters,
        }
    }

    pub fn decode(&self, alphabet: Arc<Alphabet>) -> Result<AlphaWord> {
        if self.gaps.len() != self.letters.len() + 1 {
            return Err(Error::Word("gap word must alternate gaps and letters".into()));
        }
        let mut cursor = self.gaps[0].clone();
        let mut entries = Vec::new();
        for (sym, gap) in self.letters.iter().zip(&self.gaps[1..]) {
            entries.push((cursor.clone(), *sym));
            cursor = cursor.succ().checked_add(gap)?;
        }
        if cursor != self.length {
            return Err(Error::Word(format!(
                "gaps and letters sum to {cursor}, not {}",
                self.length
            )));
        }
        AlphaWord::new(alphabet, self.length.clone(), entries)
    }
}

/// Per-exponent periodicity of blank reach relations.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct CapPolicy {
    pub thresholds: Vec<u64>,
    pub periods: Vec<u64>,
}

fn gcd(a: u64, b: u64) -> u64 {
    if b == 0 {
        a
    } else {
        gcd(b, a % b)
    }
}

impl CapPolicy {
    /// Smallest thresholds and periods with `R_j^{λ_j+π_j} = R_j^{λ_j}` for
    /// every automaton, where `R_j` is the reach relation of `◇^{ω^j}`;
    /// thresholds are raised to at least `coeff_j(α) + 1`.
    pub fn compute(working: &[&OrdinalAutomaton], alpha: &Ordinal) -> Result<CapPolicy> {
        let top = alpha.degree().map_or(0, |d| d + 1);
        let mut thresholds = vec![0u64; top];
        let mut periods = vec![1u64; top];
        for a in working {
            for j in 0..top {
                let r = level_relation(a, a.alphabet().blank(), j);
                let cyc = r.power_cycle(1 << 20).ok_or_else(|| {
                    Error::Resource("relation powers did not cycle within 2^20 steps".into())
                })?;
                thresholds[j] = thresholds[j].max(cyc.threshold);
                periods[j] = periods[j] / gcd(periods[j], cyc.period) * cyc.period;
            }
        }
        for (j, t) in thresholds.iter_mut().enumerate() {
            *t = (*t).max(alpha.coeff(j) + 1);
        }
        Ok(CapPolicy {
            thresholds,
            periods,
        })
    }

    /// Capped coefficient vector of a gap: exact below the threshold,
    /// `λ + (c − λ) mod π` above it.
    pub fn class(&self, g: &Ordinal) -> Vec<u64> {
        (0..self.thresholds.len())
            .map(|j| {
                let (c, l, p) = (g.coeff(j), self.thresholds[j], self.periods[j]);
                if c < l {
                    c
                } else {
                    l + (c - l) % p
                }
            })
            .collect()
    }

    /// The least ordinal of a class.
    pub fn representative(&self, class: &[u64]) -> Ordinal {
        Ordinal::from_coeffs(class.to_vec())
    }
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
struct ShapeState {
    /// Exponent of the last token of the current gap plus one; 0 if the gap
    /// is still empty.
    last: usize,
    /// CNF coefficients of the prefix sum, each capped at `coeff(α) + 1`.
    sum: Vec<u64>,
}

/// Deterministic automaton for well-formed encodings of length-α words.
#[derive(Debug)]
pub struct Shape {
    alpha: Ordinal,
    tokens: usize,
    /// `step[s][l]` for `l < tokens` a token, `l == tokens` any letter.
    step: Vec<Vec<Option<u32>>>,
    finals: Vec<bool>,
}

impl Shape {
    fn new(alpha: &Ordinal) -> Shape {
        let tokens = alpha.degree().map_or(0, |d| d + 1);
        let caps: Vec<u64> = (0..tokens).map(|j| alpha.coeff(j) + 1).collect();
        let within = |sum: &[u64]| {
            for j in (0..tokens).rev() {
                if sum[j] != alpha.coeff(j) {
                    return sum[j] < alpha.coeff(j);
                }
            }
            true
        };
        let advance = |s: &ShapeState, label: usize| -> Option<ShapeState> {
            let mut sum = s.sum.clone();
            let last = if label == tokens {
                if tokens == 0 {
                    return None;
                }
                sum[0] = (sum[0] + 1).min(caps[0]);
                0
            } else {
                if s.last != 0 && label + 1 > s.last {
                    return None;
                }
                sum[label] = (sum[label] + 1).min(caps[label]);
                sum[..label].iter_mut().for_each(|c| *c = 0);
                label + 1
            };
            within(&sum).then_some(ShapeState { last, sum })
        };
        let init = ShapeState {
            last: 0,
            sum: vec![0; tokens],
        };
        let mut index = HashMap::new();
        let mut states = vec![init.clone()];
        index.insert(init, 0u32);
        let mut step = Vec::new();
        let mut i = 0;
        while i < states.len() {
            let row = (0..=tokens)
                .map(|l| {
                    advance(&states[i], l).map(|next| {
                        *index.entry(next.clone()).or_insert_with(|| {
                            states.push(next);
                            (states.len() - 1) as u32
                        })
                    })
                })
                .collect();
            step.push(row);
            i += 1;
        }
        let finals = states
            .iter()
            .map(|s| (0..tokens).all(|j| s.sum[j] == alpha.coeff(j)))
            .collect();
        Shape {
            alpha: alpha.clone(),
            tokens,
            step,
            finals,
        }
    }

    pub fn num_states(&self) -> usize {
        self.step.len()
    }
}

/// Label of a gap-NFA transition.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Label {
    /// One `ω^j` block of blanks.
    Token(usize),
    Letter(Symbol),
}

/// The encoding space: a tuple alphabet `Σ^r` and the word length α.
#[derive(Debug)]
pub struct GapSpace {
    alphabet: Arc<Alphabet>,
    shape: Arc<Shape>,
}

impl GapSpace {
    pub fn new(alphabet: Arc<Alphabet>, alpha: &Ordinal) -> Arc<GapSpace> {
        Arc::new(GapSpace {
            alphabet,
            shape: Arc::new(Shape::new(alpha)),
        })
    }

    /// Same length, different tuple alphabet.
    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Arc<GapSpace> {
        Arc::new(GapSpace {
            alphabet,
            shape: self.shape.clone(),
        })
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn alpha(&self) -> &Ordinal {
        &self.shape.alpha
    }

    pub fn shape(&self) -> &Shape {
        &self.shape
    }

    pub fn tokens(&self) -> usize {
        self.shape.tokens
    }

    pub fn num_labels(&self) -> usize {
        self.tokens() + self.alphabet.len()
    }

    pub fn label(&self, l: u32) -> Label {
        let t = self.tokens();
        if (l as usize) < t {
            Label::Token(l as usize)
        } else {
            Label::Letter(Symbol(l - t as u32))
        }
    }

    pub fn label_index(&self, l: Label) -> u32 {
        match l {
            Label::Token(j) => j as u32,
            Label::Letter(s) => (self.tokens() as u32) + s.0,
        }
    }

    /// All labels that can occur: tokens and non-blank letters.
    pub fn labels(&self) -> impl Iterator<Item = u32> + '_ {
        let blank = self.label_index(Label::Letter(self.alphabet.blank()));
        (0..self.num_labels() as u32).filter(move |&l| l != blank)
    }

    fn shape_step(&self, tag: u32, l: u32) -> Option<u32> {
        let col = (l as usize).min(self.tokens());
        self.shape.step[tag as usize][col]
    }

    fn same_as(&self, other: &GapSpace) -> bool {
        self.alphabet == other.alphabet && self.shape.alpha == other.shape.alpha
    }

    /// Label sequence of a word.
    pub fn labels_of(&self, w: &AlphaWord) -> Result<Vec<u32>> {
        if **w.alphabet() != *self.alphabet || w.length() != self.alpha() {
            return Err(Error::AlphabetMismatch(
                "word does not belong to this encoding space".into(),
            ));
        }
        let gw = GapWord::encode(w);
        let total: u64 = gw
            .gaps
            .iter()
            .flat_map(|g| g.coeffs().iter().copied())
            .fold(0u64, |a, c| a.saturating_add(c));
        if total > 10_000_000 {
            return Err(Error::Resource(format!(
                "encoding needs {total} gap tokens"
            )));
        }
        let mut out = Vec::new();
        for (i, g) in gw.gaps.iter().enumerate() {
            for j in (0..g.coeffs().len()).rev() {
                out.extend(std::iter::repeat(j as u32).take(g.coeff(j) as usize));
            }
            if let Some(&s) = gw.letters.get(i) {
                out.push(self.label_index(Label::Letter(s)));
            }
        }
        Ok(out)
    }

    /// The word spelled by a label sequence; fails unless it sums to α.
    pub fn word_of(&self, labels: &[u32]) -> Result<AlphaWord> {
        let mut cursor = Ordinal::zero();
        let mut entries = Vec::new();
        for &l in labels {
            match self.label(l) {
                Label::Token(j) => cursor = cursor.checked_add(&Ordinal::omega_pow(j))?,
                Label::Letter(s) => {
                    entries.push((cursor.clone(), s));
                    cursor = cursor.succ();
                }
            }
        }
        if &cursor != self.alpha() {
            return Err(Error::Concretization(format!(
                "label sequence sums to {cursor}, expected {}",
                self.alpha()
            )));
        }
        AlphaWord::new(self.alphabet.clone(), cursor, entries)
            .map_err(|e| Error::Concretization(e.to_string()))
    }
}

/// A classical NFA over the labels of a [`GapSpace`], each state tagged
/// with its shape state.
#[derive(Clone, Debug)]
pub struct GapNfa {
    space: Arc<GapSpace>,
    tags: Vec<u32>,
    initial: Vec<u32>,
    finals: Vec<bool>,
    /// Outgoing transitions per state, sorted by label.
    trans: Vec<Vec<(u32, u32)>>,
}

impl GapNfa {
    /// Breadth-first construction over keyed states; the shape component is
    /// attached automatically.
    fn explore<K, S, F>(
        space: Arc<GapSpace>,
        inits: Vec<K>,
        limit: usize,
        mut succ: S,
        is_final: F,
    ) -> Result<GapNfa>
    where
        K: Clone + Eq + Hash,
        S: FnMut(&K, u32) -> Vec<K>,
        F: Fn(&K) -> bool,
    {
        let mut index: HashMap<(K, u32), u32> = HashMap::new();
        let mut keys: Vec<(K, u32)> = Vec::new();
        let mut trans: Vec<Vec<(u32, u32)>> = Vec::new();
        let mut initial = Vec::new();
        for k in inits {
            let key = (k, 0u32);
            if !index.contains_key(&key) {
                index.insert(key.clone(), keys.len() as u32);
                initial.push(keys.len() as u32);
                keys.push(key);
            }
        }
        let labels: Vec<u32> = space.labels().collect();
        let mut i = 0;
        while i < keys.len() {
            let (k, tag) = keys[i].clone();
            let mut out = Vec::new();
            for &l in &labels {
                let Some(next_tag) = space.shape_step(tag, l) else {
                    continue;
                };
                for nk in succ(&k, l) {
                    let key = (nk, next_tag);
                    let id = match index.get(&key) {
                        Some(&id) => id,
                        None => {
                            if keys.len() >= limit {
                                return Err(Error::Resource(format!(
                                    "gap automaton exceeds {limit} states"
                                )));
                            }
                            let id = keys.len() as u32;
                            index.insert(key.clone(), id);
                            keys.push(key);
                            id
                        }
                    };
                    out.push((l, id));
                }
            }
            out.sort_unstable();
            out.dedup();
            trans.push(out);
            i += 1;
        }
        let finals = keys
            .iter()
            .map(|(k, tag)| space.shape.finals[*tag as usize] && is_final(k))
            .collect();
        let tags = keys.iter().map(|(_, t)| *t).collect();
        Ok(GapNfa {
            space,
            tags,
            initial,
            finals,
            trans,
        }
        .trim())
    }

    pub fn space(&self) -> &Arc<GapSpace> {
        &self.space
    }

    pub fn num_states(&self) -> usize {
        self.tags.len()
    }

    pub fn num_transitions(&self) -> usize {
        self.trans.iter().map(Vec::len).sum()
    }

    fn targets(&self, x: u32, l: u32) -> impl Iterator<Item = u32> + '_ {
        let row = &self.trans[x as usize];
        let start = row.partition_point(|&(m, _)| m < l);
        row[start..]
            .iter()
            .take_while(move |&&(m, _)| m == l)
            .map(|&(_, y)| y)
    }

    /// Removes states that are unreachable or cannot reach a final state.
    fn trim(self) -> GapNfa {
        let n = self.num_states();
        let mut fwd = vec![false; n];
        let mut stack: Vec<u32> = self.initial.clone();
        for &x in &stack {
            fwd[x as usize] = true;
        }
        while let Some(x) = stack.pop() {
            for &(_, y) in &self.trans[x as usize] {
                if !fwd[y as usize] {
                    fwd[y as usize] = true;
                    stack.push(y);
                }
            }
        }
        let mut rev: Vec<Vec<u32>> = vec![Vec::new(); n];
        for (x, row) in self.trans.iter().enumerate() {
            for &(_, y) in row {
                rev[y as usize].push(x as u32);
            }
        }
        let mut bwd = vec![false; n];
        let mut stack: Vec<u32> = (0..n as u32).filter(|&x| self.finals[x as usize]).collect();
        for &x in &stack {
            bwd[x as usize] = true;
        }
        while let Some(y) = stack.pop() {
            for &x in &rev[y as usize] {
                if !bwd[x as usize] {
                    bwd[x as usize] = true;
                    stack.push(x);
                }
            }
        }
        let keep: Vec<bool> = (0..n).map(|x| fwd[x] && bwd[x]).collect();
        let mut remap = vec![u32::MAX; n];
        let mut next = 0u32;
        for x in 0..n {
            if keep[x] {
                remap[x] = next;
                next += 1;
            }
        }
        let mut tags = Vec::new();
        let mut finals = Vec::new();
        let mut trans = Vec::new();
        for x in 0..n {
            if !keep[x] {
                continue;
            }
            tags.push(self.tags[x]);
            finals.push(self.finals[x]);
            trans.push(
                self.trans[x]
                    .iter()
                    .filter(|&&(_, y)| keep[y as usize])
                    .map(|&(l, y)| (l, remap[y as usize]))
                    .collect(),
            );
        }
        let initial = self
            .initial
            .iter()
            .filter(|&&x| keep[x as usize])
            .map(|&x| remap[x as usize])
            .collect();
        GapNfa {
            space: self.space,
            tags,
            initial,
            finals,
            trans,
        }
    }

    /// Quotient by the coarsest forward bisimulation that respects shape
    /// tags and finality; language preserving.
    pub fn reduce(&self) -> GapNfa {
        let n = self.num_states();
        let mut block: Vec<u32> = {
            let mut ids = HashMap::new();
            (0..n)
                .map(|x| {
                    let key = (self.tags[x], self.finals[x]);
                    let len = ids.len() as u32;
                    *ids.entry(key).or_insert(len)
                })
                .collect()
        };
        loop {
            let mut ids: HashMap<(u32, Vec<(u32, u32)>), u32> = HashMap::new();
            let next: Vec<u32> = (0..n)
                .map(|x| {
                    let mut sig: Vec<(u32, u32)> = self.trans[x]
                        .iter()
                        .map(|&(l, y)| (l, block[y as usize]))
                        .collect();
                    sig.sort_unstable();
                    sig.dedup();
                    let len = ids.len() as u32;
                    *ids.entry((block[x], sig)).or_insert(len)
                })
                .collect();
            let stable = ids.len() == block.iter().collect::<BTreeSet<_>>().len();
            block = next;
            if stable {
                break;
            }
        }
        let count = block.iter().map(|&b| b as usize + 1).max().unwrap_or(0);
        let mut tags = vec![0; count];
        let mut finals = vec![false; count];
        let mut trans: Vec<Vec<(u32, u32)>> = vec![Vec::new(); count];
        for x in 0..n {
            let b = block[x] as usize;
            tags[b] = self.tags[x];
            finals[b] = self.finals[x];
            trans[b].extend(self.trans[x].iter().map(|&(l, y)| (l, block[y as usize])));
        }
        for row in &mut trans {
            row.sort_unstable();
            row.dedup();
        }
        let mut initial: Vec<u32> = self.initial.iter().map(|&x| block[x as usize]).collect();
        initial.sort_unstable();
        initial.dedup();
        GapNfa {
            space: self.space.clone(),
            tags,
            initial,
            finals,
            trans,
        }
    }

    /// Every well-formed encoding.
    pub fn universal(space: Arc<GapSpace>) -> Result<GapNfa> {
        Self::explore(
            space,
            vec![()],
            DEFAULT_STATE_LIMIT,
            |_, _| vec![()],
            |_| true,
        )
    }

    /// Follows `a` exactly: token `Wj` steps by the reach relation of
    /// `◇^{ω^j}`, letters by successor transitions.
    pub fn from_automaton(a: &OrdinalAutomaton, space: Arc<GapSpace>) -> Result<GapNfa> {
        if **a.alphabet() != *space.alphabet {
            return Err(Error::AlphabetMismatch(
                "automaton alphabet differs from the encoding space".into(),
            ));
        }
        let levels: Vec<_> = (0..space.tokens())
            .map(|j| level_relation(a, a.alphabet().blank(), j))
            .collect();
        let finals = a.finals();
        let sp = space.clone();
        Self::explore(
            space,
            a.initial().iter().collect(),
            DEFAULT_STATE_LIMIT,
            move |&q, l| {
                let next = match sp.label(l) {
                    Label::Token(j) => levels[j].row(q),
                    Label::Letter(s) => a.successors(q, s),
                };
                next.iter().collect()
            },
            move |&q| finals.contains(q),
        )
    }

    pub fn intersect(&self, other: &GapNfa) -> Result<GapNfa> {
        if !self.space.same_as(&other.space) {
            return Err(Error::AlphabetMismatch("intersection of gap automata".into()));
        }
        let inits = self
            .initial
            .iter()
            .flat_map(|&x| other.initial.iter().map(move |&y| (x, y)))
            .collect();
        Self::explore(
            self.space.clone(),
            inits,
            DEFAULT_STATE_LIMIT,
            |&(x, y), l| {
                let ys: Vec<u32> = other.targets(y, l).collect();
                self.targets(x, l)
                    .flat_map(|x2| ys.iter().map(move |&y2| (x2, y2)))
                    .collect()
            },
            |&(x, y)| self.finals[x as usize] && other.finals[y as usize],
        )
    }

    pub fn union(&self, other: &GapNfa) -> Result<GapNfa> {
        if !self.space.same_as(&other.space) {
            return Err(Error::AlphabetMismatch("union of gap automata".into()));
        }
        let inits = self
            .initial
            .iter()
            .map(|&x| (0u8, x))
            .chain(other.initial.iter().map(|&y| (1u8, y)))
            .collect();
        Self::explore(
            self.space.clone(),
            inits,
            DEFAULT_STATE_LIMIT,
            |&(side, x), l| {
                let part = if side == 0 { self } else { other };
                part.targets(x, l).map(|y| (side, y)).collect()
            },
            |&(side, x)| {
                let part = if side == 0 { self } else { other };
                part.finals[x as usize]
            },
        )
    }

    /// Well-formed encodings not accepted by `self`.
    pub fn complement(&self) -> Result<GapNfa> {
        self.complement_with_limit(DEFAULT_STATE_LIMIT)
    }

    pub fn complement_with_limit(&self, limit: usize) -> Result<GapNfa> {
        let mut init: Vec<u32> = self.initial.clone();
        init.sort_unstable();
        init.dedup();
        let dfa = Self::explore(
            self.space.clone(),
            vec![init],
            limit,
            |set: &Vec<u32>, l| {
                let mut next: Vec<u32> = set.iter().flat_map(|&x| self.targets(x, l)).collect();
                next.sort_unstable();
                next.dedup();
                vec![next]
            },
            |set| set.iter().all(|&x| !self.finals[x as usize]),
        )?;
        Ok(dfa.reduce())
    }

    /// Existential projection of tuple coordinate `coord`.
    ///
    /// A letter whose remaining coordinates are all blank occupies one blank
    /// position of the projected word. Reading a projected block `Wj`, the
    /// original automaton therefore either reads `Wj` itself or, for `j ≥ 1`,
    /// a stretch of lower tokens and such letters ending in a letter,
    /// followed by `Wj`; for `j = 0` it reads `W0` or one such letter.
    pub fn project(&self, coord: usize) -> Result<GapNfa> {
        let alphabet = &self.space.alphabet;
        let r = alphabet.arity();
        if coord >= r {
            return Err(Error::Precondition(format!(
                "cannot project coordinate {coord} of arity {r}"
            )));
        }
        let target = Arc::new(alphabet.power(r - 1)?);
        let space = self.space.with_alphabet(target.clone());
        let blank_target = target.blank();
        let mut hidden: Vec<u32> = Vec::new();
        let mut by_image: HashMap<Symbol, Vec<u32>> = HashMap::new();
        for s in alphabet.letters() {
            let mut tuple = alphabet.decode(s);
            tuple.remove(coord);
            let image = target.encode(&tuple);
            let l = self.space.label_index(Label::Letter(s));
            if image == blank_target {
                hidden.push(l);
            } else {
                by_image.entry(image).or_default().push(l);
            }
        }
        let hidden = &hidden;
        let mut stretch: HashMap<(u32, usize), Vec<u32>> = HashMap::new();
        let mut stretch_end = |x: u32, j: usize| -> Vec<u32> {
            stretch
                .entry((x, j))
                .or_insert_with(|| {
                    let mut seen = vec![false; self.num_states()];
                    let mut stack = vec![x];
                    seen[x as usize] = true;
                    let mut ends = BTreeSet::new();
                    while let Some(y) = stack.pop() {
                        for &h in hidden {
                            for z in self.targets(y, h) {
                                ends.insert(z);
                                if !seen[z as usize] {
                                    seen[z as usize] = true;
                                    stack.push(z);
                                }
                            }
                        }
                        for i in 0..j {
                            for z in self.targets(y, i as u32) {
                                if !seen[z as usize] {
                                    seen[z as usize] = true;
                                    stack.push(z);
                                }
                            }
                        }
                    }
                    ends.into_iter().collect()
                })
                .clone()
        };
        let sp = space.clone();
        Self::explore(
            space,
            self.initial.clone(),
            DEFAULT_STATE_LIMIT,
            move |&x, l| {
                let mut out: Vec<u32> = Vec::new();
                match sp.label(l) {
                    Label::Token(0) => {
                        out.extend(self.targets(x, 0));
                        for &h in hidden {
                            out.extend(self.targets(x, h));
                        }
                    }
                    Label::Token(j) => {
                        out.extend(self.targets(x, j as u32));
                        for y in stretch_end(x, j) {
                            out.extend(self.targets(y, j as u32));
                        }
                    }
                    Label::Letter(s) => {
                        for &orig in by_image.get(&s).map(Vec::as_slice).unwrap_or(&[]) {
                            out.extend(self.targets(x, orig));
                        }
                    }
                }
                out.sort_unstable();
                out.dedup();
                out
            },
            |&x| self.finals[x as usize],
        )
        .map(|n| n.reduce())
    }

    /// Constructions trim their results, so an automaton is empty iff no
    /// initial state survives.
    pub fn is_empty(&self) -> bool {
        self.initial.is_empty()
    }

    /// A shortest accepted label sequence.
    pub fn witness_labels(&self) -> Option<Vec<u32>> {
        let n = self.num_states();
        let mut parent: Vec<Option<(u32, u32)>> = vec![None; n];
        let mut seen = vec![false; n];
        let mut queue = VecDeque::new();
        for &x in &self.initial {
            seen[x as usize] = true;
            queue.push_back(x);
        }
        while let Some(x) = queue.pop_front() {
            if self.finals[x as usize] {
                let mut labels = Vec::new();
                let mut cur = x;
                while let Some((p, l)) = parent[cur as usize] {
                    labels.push(l);
                    cur = p;
                }
                labels.reverse();
                return Some(labels);
            }
            for &(l, y) in &self.trans[x as usize] {
                if !seen[y as usize] {
                    seen[y as usize] = true;
                    parent[y as usize] = Some((x, l));
                    queue.push_back(y);
                }
            }
        }
        None
    }

    /// A shortest accepted word, re-checked against α.
    pub fn witness(&self) -> Result<Option<AlphaWord>> {
        match self.witness_labels() {
            None => Ok(None),
            Some(labels) => self.space.word_of(&labels).map(Some),
        }
    }

    pub fn accepts_labels(&self, labels: &[u32]) -> bool {
        let mut cur: BTreeSet<u32> = self.initial.iter().copied().collect();
        for &l in labels {
            cur = cur.iter().flat_map(|&x| self.targets(x, l)).collect();
            if cur.is_empty() {
                return false;
            }
        }
        cur.iter().any(|&x| self.finals[x as usize])
    }

    pub fn accepts(&self, w: &AlphaWord) -> Result<bool> {
        Ok(self.accepts_labels(&self.space.labels_of(w)?))
    }

    pub fn equivalent(&self, other: &GapNfa) -> Result<bool> {
        Ok(self.intersect(&other.complement()?)?.is_empty()
            && other.intersect(&self.complement()?)?.is_empty())
    }

    /// Reads a word of arity 0: the sentence is true iff the language is
    /// nonempty.
    pub fn holds(&self) -> bool {
        !self.is_empty()
    }

    /// Number of shape states in the encoding space.
    pub fn shape_states(&self) -> usize {
        self.space.shape.num_states()
    }
}
