#![allow(dead_code)]

use std::sync::Arc;

use ordinalia::semantics::member;
use ordinalia::{AlphaWord, Alphabet, AutomatonBuilder, Ordinal, OrdinalAutomaton, StateSet, Symbol};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

pub fn rng(seed: u64) -> ChaCha8Rng {
    rand::SeedableRng::seed_from_u64(seed)
}

pub fn sigma(names: &[&str]) -> Arc<Alphabet> {
    Arc::new(Alphabet::new(names, names[0]).unwrap())
}

/// A random automaton: each successor transition with probability
/// `density`, a few random limit transitions.
pub fn random_automaton(rng: &mut ChaCha8Rng, states: usize, alphabet: Arc<Alphabet>, density: f64) -> OrdinalAutomaton {
    let mut b = AutomatonBuilder::new(alphabet.clone());
    let qs: Vec<_> = (0..states).map(|i| b.state(format!("q{i}"))).collect();
    b.initial(qs[rng.gen_range(0..states)]);
    for &q in &qs {
        if rng.gen_bool(0.4) {
            b.accepting(q);
        }
        for s in alphabet.symbols() {
            for &p in &qs {
                if rng.gen_bool(density) {
                    b.succ(q, s, p);
                }
            }
        }
    }
    let limits = rng.gen_range(0..=2 * states);
    for _ in 0..limits {
        let set = StateSet(rng.gen_range(1..1u64 << states));
        b.limit(set, qs[rng.gen_range(0..states)]);
    }
    b.build().unwrap()
}

/// Classical NFA acceptance of a word of finite length.
pub fn nfa_accepts(a: &OrdinalAutomaton, w: &AlphaWord) -> bool {
    let n = w.length().as_nat().expect("finite length");
    let mut cur = a.initial();
    for i in 0..n {
        let s = w.get(&Ordinal::nat(i));
        cur = cur.iter().fold(StateSet::EMPTY, |acc, q| acc.union(a.successors(q, s)));
    }
    !cur.intersect(a.finals()).is_empty()
}

/// Every word of length `n` over the alphabet.
pub fn all_words(alphabet: &Arc<Alphabet>, n: u64) -> Vec<AlphaWord> {
    let syms: Vec<Symbol> = alphabet.symbols().collect();
    let k = syms.len() as u64;
    (0..k.pow(n as u32))
        .map(|mut code| {
            let entries: Vec<_> = (0..n)
                .map(|i| {
                    let s = syms[(code % k) as usize];
                    code /= k;
                    (Ordinal::nat(i), s)
                })
                .filter(|(_, s)| *s != alphabet.blank())
                .collect();
            AlphaWord::new(alphabet.clone(), Ordinal::nat(n), entries).unwrap()
        })
        .collect()
}

/// A random ordinal below `ω^deg` with coefficients below `bound`.
pub fn random_ordinal(rng: &mut ChaCha8Rng, deg: usize, bound: u64) -> Ordinal {
    Ordinal::from_coeffs((0..deg).map(|_| rng.gen_range(0..bound)).collect())
}

/// A random position below `alpha` whose coefficients under the leading
/// exponent are below `bound`.
pub fn random_position(rng: &mut ChaCha8Rng, alpha: &Ordinal, bound: u64) -> Option<Ordinal> {
    let d = alpha.degree()?;
    for _ in 0..16 {
        let mut coeffs: Vec<u64> = (0..d).map(|_| rng.gen_range(0..bound)).collect();
        coeffs.push(rng.gen_range(0..=alpha.coeff(d)));
        let p = Ordinal::from_coeffs(coeffs);
        if &p < alpha {
            return Some(p);
        }
    }
    None
}

/// A random word of length `alpha` with up to `letters` support positions
/// drawn by [`random_position`].
pub fn random_word(rng: &mut ChaCha8Rng, alphabet: &Arc<Alphabet>, alpha: &Ordinal, letters: usize, bound: u64) -> AlphaWord {
    let letters_list: Vec<Symbol> = alphabet.letters().collect();
    let mut entries = std::collections::BTreeMap::new();
    for _ in 0..rng.gen_range(0..=letters) {
        if let Some(p) = random_position(rng, alpha, bound) {
            entries.insert(p, letters_list[rng.gen_range(0..letters_list.len())]);
        }
    }
    AlphaWord::new(alphabet.clone(), alpha.clone(), entries).unwrap()
}

pub fn accepts(a: &OrdinalAutomaton, w: &AlphaWord) -> bool {
    member(a, w).unwrap()
}

/// Rows of the classical run relation of a finite word.
pub fn nfa_relation(a: &OrdinalAutomaton, w: &AlphaWord) -> Vec<StateSet> {
    let n = w.length().as_nat().expect("finite length");
    (0..a.num_states() as u8)
        .map(|q| {
            let mut cur = StateSet::singleton(q);
            for i in 0..n {
                let s = w.get(&Ordinal::nat(i));
                cur = cur.iter().fold(StateSet::EMPTY, |acc, x| acc.union(a.successors(x, s)));
            }
            cur
        })
        .collect()
}

/// Run relation of `◇^ω` from first principles: the states visited
/// infinitely often along an infinite path form a set `S` that is reachable
/// and strongly connected through at least one edge, and the run continues
/// by a limit transition `(S, p)`.
pub fn omega_blank_relation(a: &OrdinalAutomaton) -> Vec<StateSet> {
    let n = a.num_states();
    let blank = a.alphabet().blank();
    let step = |set: StateSet, within: StateSet| {
        set.iter()
            .fold(StateSet::EMPTY, |acc, x| acc.union(a.successors(x, blank)))
            .intersect(within)
    };
    let closure = |start: StateSet, within: StateSet| {
        let mut seen = start;
        loop {
            let next = seen.union(step(seen, within));
            if next == seen {
                return seen;
            }
            seen = next;
        }
    };
    let all = StateSet::full(n);
    let mut cycles = Vec::new();
    for mask in 1..1u64 << n {
        let s = StateSet(mask);
        let strongly = s
            .iter()
            .all(|x| closure(step(StateSet::singleton(x), s), s) == s);
        if strongly {
            cycles.push(s);
        }
    }
    (0..n as u8)
        .map(|q| {
            let reach = closure(StateSet::singleton(q), all);
            let mut out = StateSet::EMPTY;
            for &s in &cycles {
                if reach.intersect(s).is_empty() {
                    continue;
                }
                for &(set, p) in a.limit_transitions() {
                    if set == s {
                        out.insert(p);
                    }
                }
            }
            out
        })
        .collect()
}

fn compose(r: &[StateSet], s: &[StateSet]) -> Vec<StateSet> {
    r.iter()
        .map(|row| row.iter().fold(StateSet::EMPTY, |acc, x| acc.union(s[x as usize])))
        .collect()
}

/// Run relation of a word of length below `ω²`, block by block: each
/// `ω`-block is a finite prefix read classically followed by a blank tail.
pub fn omega_block_relation(a: &OrdinalAutomaton, w: &AlphaWord) -> Vec<StateSet> {
    let len = w.length();
    assert!(len.coeffs().len() <= 2, "length below ω²");
    let n = a.num_states();
    let tail = omega_blank_relation(a);
    let letter = |s: Symbol| -> Vec<StateSet> { (0..n as u8).map(|q| a.successors(q, s)).collect() };
    let finite = |block: u64, upto: u64| -> Vec<StateSet> {
        let mut acc: Vec<StateSet> = (0..n as u8).map(StateSet::singleton).collect();
        for j in 0..upto {
            let pos = Ordinal::from_coeffs(vec![j, block]);
            acc = compose(&acc, &letter(w.get(&pos)));
        }
        acc
    };
    let mut acc: Vec<StateSet> = (0..n as u8).map(StateSet::singleton).collect();
    for block in 0..len.coeff(1) {
        let last = w
            .entries()
            .keys()
            .filter(|p| p.coeff(1) == block && p.coeffs().len() <= 2)
            .map(|p| p.coeff(0) + 1)
            .max()
            .unwrap_or(0);
        acc = compose(&compose(&acc, &finite(block, last)), &tail);
    }
    compose(&acc, &finite(len.coeff(1), len.coeff(0)))
}

/// Presburger sentences over `(ℕ, +)` with their truth values.
pub const PRESBURGER_SUITE: &[(&str, bool)] = &[
    ("(forall x (forall y (exists z (Plus x y z))))", true),
    ("(exists z (forall x (Plus x z x)))", true),
    ("(forall x (forall y (forall z (forall w (-> (and (Plus x y z) (Plus x y w)) (= z w))))))", true),
    ("(forall x (exists y (Plus y y x)))", false),
    ("(forall x (forall y (forall z (-> (Plus x y z) (Plus y x z)))))", true),
    ("(exists x (exists y (and (not (= x y)) (Plus x x y))))", true),
    ("(exists x (forall y (not (Plus y y x))))", true),
    ("(forall x (forall y (exists z (Plus x z y))))", false),
    ("(forall x (forall y (or (exists z (Plus x z y)) (exists z (Plus y z x)))))", true),
    ("(exists x (exists y (exists z (and (Plus x y z) (not (Plus y x z))))))", false),
    ("(exists x (forall y (Plus x x y)))", false),
    ("(forall x (forall y (-> (Plus x y x) (forall z (Plus z y z)))))", true),
];
