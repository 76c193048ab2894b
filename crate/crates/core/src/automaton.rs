//! Ordinal automata: states, successor transitions and limit transitions.
//!
//! A run on an α-word assigns a state to every position `β ≤ α`. Successor
//! steps follow `succ`; at a limit position `β` the run moves to `p` only if
//! `(S, p)` is a limit transition where `S` is exactly the set of states
//! occurring cofinally below `β`.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::relation::{Relation, State, StateSet, MAX_STATES};
use crate::semantics::RunCache;
use crate::word::{Alphabet, Symbol};

/// Upper bound on the number of limit transitions a construction may create.
pub const MAX_LIMIT_TRANSITIONS: usize = 1 << 20;

#[derive(Clone)]
pub struct OrdinalAutomaton {
    alphabet: Arc<Alphabet>,
    names: Vec<String>,
    initial: StateSet,
    finals: StateSet,
    /// Successor sets indexed by `q * |Σ| + symbol`.
    succ: Vec<StateSet>,
    limit: Vec<(StateSet, State)>,
    cache: Arc<RunCache>,
}

impl PartialEq for OrdinalAutomaton {
    fn eq(&self, other: &Self) -> bool {
        self.alphabet == other.alphabet
            && self.names == other.names
            && self.initial == other.initial
            && self.finals == other.finals
            && self.succ == other.succ
            && self.limit == other.limit
    }
}

impl Eq for OrdinalAutomaton {}

impl fmt::Debug for OrdinalAutomaton {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_struct("OrdinalAutomaton")
            .field("states", &self.names)
            .field("alphabet", &self.alphabet)
            .field("initial", &self.initial)
            .field("final", &self.finals)
            .field("limit", &self.limit)
            .finish_non_exhaustive()
    }
}

/// Incremental construction of an [`OrdinalAutomaton`].
pub struct AutomatonBuilder {
    alphabet: Arc<Alphabet>,
    names: Vec<String>,
    index: HashMap<String, State>,
    initial: StateSet,
    finals: StateSet,
    succ: BTreeSet<(State, Symbol, State)>,
    limit: BTreeSet<(StateSet, State)>,
    error: Option<Error>,
}

impl AutomatonBuilder {
    pub fn new(alphabet: Arc<Alphabet>) -> Self {
        AutomatonBuilder {
            alphabet,
            names: Vec::new(),
            index: HashMap::new(),
            initial: StateSet::EMPTY,
            finals: StateSet::EMPTY,
            succ: BTreeSet::new(),
            limit: BTreeSet::new(),
            error: None,
        }
    }

    /// Returns the state with this name, creating it on first use.
    pub fn state(&mut self, name: impl Into<String>) -> State {
        let name = name.into();
        if let Some(&q) = self.index.get(&name) {
            return q;
        }
        if self.names.len() >= MAX_STATES {
            self.error.get_or_insert(Error::Resource(format!(
                "ordinal automata are limited to {MAX_STATES} states"
            )));
            return 0;
        }
        let q = self.names.len() as State;
        self.names.push(name.clone());
        self.index.insert(name, q);
        q
    }

    pub fn initial(&mut self, q: State) -> &mut Self {
        self.initial.insert(q);
        self
    }

    pub fn accepting(&mut self, q: State) -> &mut Self {
        self.finals.insert(q);
        self
    }

    pub fn succ(&mut self, q: State, s: Symbol, p: State) -> &mut Self {
        self.succ.insert((q, s, p));
        self
    }

    pub fn limit(&mut self, set: StateSet, p: State) -> &mut Self {
        self.limit.insert((set, p));
        self
    }

    pub fn build(self) -> Result<OrdinalAutomaton> {
        if let Some(e) = self.error {
            return Err(e);
        }
        let n = self.names.len();
        let all = StateSet::full(n);
        let nsym = self.alphabet.len();
        let mut succ = vec![StateSet::EMPTY; n * nsym];
        for &(q, s, p) in &self.succ {
            if q as usize >= n || p as usize >= n || s.0 as usize >= nsym {
                return Err(Error::Automaton(format!(
                    "successor transition ({q}, {}, {p}) out of range",
                    s.0
                )));
            }
            succ[q as usize * nsym + s.0 as usize].insert(p);
        }
        for &(set, p) in &self.limit {
            if !set.is_subset(all) || p as usize >= n {
                return Err(Error::Automaton("limit transition out of range".into()));
            }
        }
        if !self.initial.is_subset(all) || !self.finals.is_subset(all) {
            return Err(Error::Automaton("initial/final state out of range".into()));
        }
        Ok(OrdinalAutomaton {
            alphabet: self.alphabet,
            names: self.names,
            initial: self.initial,
            finals: self.finals,
            succ,
            limit: self.limit.into_iter().collect(),
            cache: Arc::new(RunCache::default()),
        })
    }
}

/// Severity of a validation finding.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Severity {
    Error,
    Warning,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Diagnostic {
    pub severity: Severity,
    pub message: String,
}

impl Diagnostic {
    fn error(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Error,
            message: message.into(),
        }
    }

    fn warning(message: impl Into<String>) -> Self {
        Diagnostic {
            severity: Severity::Warning,
            message: message.into(),
        }
    }
}

/// The JSON file form of an automaton.
#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct AutomatonFile {
    pub states: Vec<String>,
    pub alphabet: Vec<String>,
    pub blank: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub arity: Option<usize>,
    pub initial: Vec<String>,
    #[serde(rename = "final")]
    pub finals: Vec<String>,
    pub succ: Vec<(String, String, String)>,
    pub limit: Vec<(Vec<String>, String)>,
}

impl AutomatonFile {
    fn arity(&self) -> usize {
        self.arity.unwrap_or_else(|| {
            self.succ
                .first()
                .map(|(_, s, _)| s.split('|').count())
                .unwrap_or(1)
        })
    }

    /// Checks every structural invariant, returning all findings.
    pub fn validate(&self) -> Vec<Diagnostic> {
        let mut out = Vec::new();
        let states: BTreeSet<&String> = self.states.iter().collect();
        if states.len() != self.states.len() {
            out.push(Diagnostic::error("duplicate state name"));
        }
        if self.states.len() > MAX_STATES {
            out.push(Diagnostic::error(format!(
                "{} states exceed the limit of {MAX_STATES}",
                self.states.len()
            )));
        }
        let alphabet = match Alphabet::new(&self.alphabet, &self.blank)
            .and_then(|a| a.power(self.arity()))
        {
            Ok(a) => Some(a),
            Err(e) => {
                out.push(Diagnostic::error(format!("alphabet: {e}")));
                None
            }
        };
        let check_state = |q: &String, ctx: &str, out: &mut Vec<Diagnostic>| {
            if !states.contains(q) {
                out.push(Diagnostic::error(format!("{ctx} references unknown state {q:?}")));
            }
        };
        for q in &self.initial {
            check_state(q, "initial", &mut out);
        }
        for q in &self.finals {
            check_state(q, "final", &mut out);
        }
        for (q, s, p) in &self.succ {
            check_state(q, "succ", &mut out);
            check_state(p, "succ", &mut out);
            if let Some(a) = &alphabet {
                if let Err(e) = a.lookup(s) {
                    out.push(Diagnostic::error(format!("succ symbol: {e}")));
                }
            }
        }
        for (set, p) in &self.limit {
            for q in set {
                check_state(q, "limit source", &mut out);
            }
            check_state(p, "limit target", &mut out);
            if set.is_empty() {
                out.push(Diagnostic::warning(format!(
                    "limit transition to {p:?} has an empty source set and can never fire"
                )));
            }
        }
        out
    }

    pub fn to_automaton(&self) -> Result<OrdinalAutomaton> {
        let diags = self.validate();
        if let Some(d) = diags.iter().find(|d| d.severity == Severity::Error) {
            return Err(Error::Automaton(d.message.clone()));
        }
        let alphabet = Arc::new(Alphabet::new(&self.alphabet, &self.blank)?.power(self.arity())?);
        let mut b = AutomatonBuilder::new(alphabet.clone());
        for q in &self.states {
            b.state(q.clone());
        }
        for q in &self.initial {
            let q = b.state(q.clone());
            b.initial(q);
        }
        for q in &self.finals {
            let q = b.state(q.clone());
            b.accepting(q);
        }
        for (q, s, p) in &self.succ {
            let (q, p) = (b.state(q.clone()), b.state(p.clone()));
            b.succ(q, alphabet.lookup(s)?, p);
        }
        for (set, p) in &self.limit {
            let set = set.iter().map(|q| b.state(q.clone())).collect();
            let p = b.state(p.clone());
            b.limit(set, p);
        }
        b.build()
    }
}

impl OrdinalAutomaton {
    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn num_states(&self) -> usize {
        self.names.len()
    }

    pub fn state_names(&self) -> &[String] {
        &self.names
    }

    pub fn state_index(&self, name: &str) -> Option<State> {
        self.names.iter().position(|n| n == name).map(|i| i as State)
    }

    pub fn initial(&self) -> StateSet {
        self.initial
    }

    pub fn finals(&self) -> StateSet {
        self.finals
    }

    pub fn all_states(&self) -> StateSet {
        StateSet::full(self.num_states())
    }

    pub fn limit_transitions(&self) -> &[(StateSet, State)] {
        &self.limit
    }

    pub(crate) fn cache(&self) -> &RunCache {
        &self.cache
    }

    /// Successor states of `q` on `s`.
    pub fn successors(&self, q: State, s: Symbol) -> StateSet {
        self.succ[q as usize * self.alphabet.len() + s.0 as usize]
    }

    /// All successor transitions `(q, s, p)`.
    pub fn succ_transitions(&self) -> impl Iterator<Item = (State, Symbol, State)> + '_ {
        let nsym = self.alphabet.len();
        self.succ.iter().enumerate().flat_map(move |(i, set)| {
            let q = (i / nsym) as State;
            let s = Symbol((i % nsym) as u32);
            set.iter().map(move |p| (q, s, p))
        })
    }

    /// The one-step relation of symbol `s`.
    pub fn step_relation(&self, s: Symbol) -> Relation {
        Relation::from_rows(
            (0..self.num_states())
                .map(|q| self.successors(q as State, s))
                .collect(),
        )
    }

    /// Limit targets keyed by source set.
    pub fn limit_map(&self) -> BTreeMap<StateSet, StateSet> {
        let mut m: BTreeMap<StateSet, StateSet> = BTreeMap::new();
        for &(set, p) in &self.limit {
            m.entry(set).or_default().insert(p);
        }
        m
    }

    pub fn to_file(&self) -> AutomatonFile {
        let names = |set: StateSet| set.iter().map(|q| self.names[q as usize].clone()).collect();
        AutomatonFile {
            states: self.names.clone(),
            alphabet: self.alphabet.base_symbols().to_vec(),
            blank: self.alphabet.base_symbols()[self.alphabet.base_blank() as usize].clone(),
            arity: Some(self.alphabet.arity()),
            initial: names(self.initial),
            finals: names(self.finals),
            succ: self
                .succ_transitions()
                .map(|(q, s, p)| {
                    (
                        self.names[q as usize].clone(),
                        self.alphabet.name(s),
                        self.names[p as usize].clone(),
                    )
                })
                .collect(),
            limit: self
                .limit
                .iter()
                .map(|&(set, p)| (names(set), self.names[p as usize].clone()))
                .collect(),
        }
    }

    pub fn from_json(text: &str) -> Result<Self> {
        serde_json::from_str::<AutomatonFile>(text)?.to_automaton()
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(&self.to_file()).expect("automaton serializes")
    }

    /// Diagnostics for the file form of this automaton.
    pub fn validate(&self) -> Vec<Diagnostic> {
        self.to_file().validate()
    }

    /// Same automaton with a different (structurally equal) alphabet handle
    /// or with an alphabet of equal shape.
    fn with_parts(
        alphabet: Arc<Alphabet>,
        names: Vec<String>,
        initial: StateSet,
        finals: StateSet,
        succ: Vec<StateSet>,
        mut limit: Vec<(StateSet, State)>,
    ) -> Self {
        limit.sort();
        limit.dedup();
        OrdinalAutomaton {
            alphabet,
            names,
            initial,
            finals,
            succ,
            limit,
            cache: Arc::new(RunCache::default()),
        }
    }

    /// Synchronous product; accepts `L(A) ∩ L(B)`.
    ///
    /// A limit `(S, (p, q))` is present iff `(π₁S, p)` and `(π₂S, q)` are
    /// limits of the components. This is exact: the states occurring
    /// cofinally in a pair run project onto the states occurring cofinally
    /// in each component run, since a component state that recurs cofinally
    /// meets some partner state cofinally often by pigeonhole.
    pub fn product(&self, other: &OrdinalAutomaton) -> Result<OrdinalAutomaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("product of automata".into()));
        }
        let (na, nb) = (self.num_states(), other.num_states());
        if na * nb > MAX_STATES {
            return Err(Error::Resource(format!(
                "product has {} states, more than {MAX_STATES}",
                na * nb
            )));
        }
        let pair = |a: State, b: State| (a as usize * nb + b as usize) as State;
        let names = (0..na)
            .flat_map(|a| (0..nb).map(move |b| (a, b)))
            .map(|(a, b)| format!("({},{})", self.names[a], other.names[b]))
            .collect();
        let cross = |x: StateSet, y: StateSet| -> StateSet {
            x.iter()
                .flat_map(|a| y.iter().map(move |b| pair(a, b)))
                .collect()
        };
        let nsym = self.alphabet.len();
        let mut succ = vec![StateSet::EMPTY; na * nb * nsym];
        for a in 0..na as State {
            for b in 0..nb as State {
                for s in 0..nsym {
                    let sym = Symbol(s as u32);
                    succ[pair(a, b) as usize * nsym + s] =
                        cross(self.successors(a, sym), other.successors(b, sym));
                }
            }
        }
        let mut limit = Vec::new();
        for &(sa, p) in &self.limit {
            for &(sb, q) in &other.limit {
                let target = pair(p, q);
                let cells: Vec<(State, State)> = sa
                    .iter()
                    .flat_map(|a| sb.iter().map(move |b| (a, b)))
                    .collect();
                if cells.len() > 20 {
                    return Err(Error::Resource(
                        "product limit enumeration exceeds 2^20 source sets".into(),
                    ));
                }
                for mask in 1u32..(1u32 << cells.len()) {
                    let mut s = StateSet::EMPTY;
                    let (mut pa, mut pb) = (StateSet::EMPTY, StateSet::EMPTY);
                    for (i, &(a, b)) in cells.iter().enumerate() {
                        if mask >> i & 1 == 1 {
                            s.insert(pair(a, b));
                            pa.insert(a);
                            pb.insert(b);
                        }
                    }
                    if pa == sa && pb == sb {
                        limit.push((s, target));
                    }
                }
                if limit.len() > MAX_LIMIT_TRANSITIONS {
                    return Err(Error::Resource("too many product limit transitions".into()));
                }
            }
        }
        Ok(Self::with_parts(
            self.alphabet.clone(),
            names,
            cross(self.initial, other.initial),
            cross(self.finals, other.finals),
            succ,
            limit,
        ))
    }

    /// Disjoint union; accepts `L(A) ∪ L(B)`.
    pub fn union(&self, other: &OrdinalAutomaton) -> Result<OrdinalAutomaton> {
        if self.alphabet != other.alphabet {
            return Err(Error::AlphabetMismatch("union of automata".into()));
        }
        let na = self.num_states();
        if na + other.num_states() > MAX_STATES {
            return Err(Error::Resource("union exceeds the state limit".into()));
        }
        let shift = |s: StateSet| StateSet(s.0 << na);
        let names = self
            .names
            .iter()
            .map(|n| format!("L.{n}"))
            .chain(other.names.iter().map(|n| format!("R.{n}")))
            .collect();
        let mut succ = self.succ.clone();
        succ.extend(other.succ.iter().map(|&s| shift(s)));
        let limit = self
            .limit
            .iter()
            .copied()
            .chain(
                other
                    .limit
                    .iter()
                    .map(|&(s, p)| (shift(s), p + na as State)),
            )
            .collect();
        Ok(Self::with_parts(
            self.alphabet.clone(),
            names,
            self.initial.union(shift(other.initial)),
            self.finals.union(shift(other.finals)),
            succ,
            limit,
        ))
    }

    /// Re-reads an automaton over `Σ^k` as one over `Σ^r`, where
    /// coordinate `i` of the original tuple is coordinate `map[i]` of the
    /// new one. Coordinates may repeat in `map`.
    pub fn reindex(&self, r: usize, map: &[usize]) -> Result<OrdinalAutomaton> {
        if map.len() != self.alphabet.arity() {
            return Err(Error::Precondition(format!(
                "coordinate map of length {} for an automaton of arity {}",
                map.len(),
                self.alphabet.arity()
            )));
        }
        if let Some(&bad) = map.iter().find(|&&c| c >= r) {
            return Err(Error::Precondition(format!(
                "coordinate {bad} out of range for arity {r}"
            )));
        }
        let target = Arc::new(self.alphabet.power(r)?);
        let n = self.num_states();
        let (old_n, new_n) = (self.alphabet.len(), target.len());
        let mut succ = vec![StateSet::EMPTY; n * new_n];
        for t in target.symbols() {
            let tuple = target.decode(t);
            let old: Vec<u32> = map.iter().map(|&c| tuple[c]).collect();
            let s = self.alphabet.encode(&old);
            for q in 0..n {
                succ[q * new_n + t.0 as usize] = self.succ[q * old_n + s.0 as usize];
            }
        }
        Ok(Self::with_parts(
            target,
            self.names.clone(),
            self.initial,
            self.finals,
            succ,
            self.limit.clone(),
        ))
    }

    /// Embeds an automaton over `Σ^k` into `Σ^r` on the `occupied`
    /// coordinates; the remaining coordinates are ignored.
    pub fn cylindrify(&self, r: usize, occupied: &[usize]) -> Result<OrdinalAutomaton> {
        if occupied.windows(2).any(|w| w[0] >= w[1]) {
            return Err(Error::Precondition(
                "occupied coordinates must be strictly increasing".into(),
            ));
        }
        self.reindex(r, occupied)
    }

    /// Accepts exactly the pairs `(u, u)`.
    pub fn equality(alphabet: &Alphabet) -> Result<OrdinalAutomaton> {
        let pair = Arc::new(alphabet.base_alphabet().power(2)?);
        let mut b = AutomatonBuilder::new(pair.clone());
        let q = b.state("q");
        b.initial(q).accepting(q).limit(StateSet::singleton(q), q);
        for s in 0..alphabet.base_len() as u32 {
            b.succ(q, pair.encode(&[s, s]), q);
        }
        b.build()
    }

    /// Accepts every word.
    pub fn universal(alphabet: Arc<Alphabet>) -> Result<OrdinalAutomaton> {
        let mut b = AutomatonBuilder::new(alphabet.clone());
        let q = b.state("q");
        b.initial(q).accepting(q).limit(StateSet::singleton(q), q);
        for s in alphabet.symbols() {
            b.succ(q, s, q);
        }
        b.build()
    }
}
