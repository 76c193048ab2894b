//! Concrete automata and presentations: the well-order `⊑` and `⊆_supp`,
//! the ω²-structure built from `D_n`, `T_n`, `f_a`, `f_b`, Presburger
//! arithmetic over ω, and the two-element ring.

use std::cmp::Ordering;
use std::collections::{BTreeMap, BTreeSet};
use std::sync::Arc;

use crate::automaton::{AutomatonBuilder, OrdinalAutomaton};
use crate::error::{Error, Result};
use crate::logic::{Presentation, RelationEntry};
use crate::ordinal::Ordinal;
use crate::relation::StateSet;
use crate::word::{AlphaWord, Alphabet, Symbol};

/// A presentation with a name and a short description of what it encodes.
#[derive(Clone, Debug)]
pub struct StructureFixture {
    pub name: String,
    pub description: String,
    pub presentation: Presentation,
}

/// `{_, a, b}` with blank `_`.
pub fn sigma_ab() -> Arc<Alphabet> {
    Arc::new(Alphabet::new(&["_", "a", "b"], "_").expect("valid alphabet"))
}

fn rank(alphabet: &Alphabet, s: u32) -> u32 {
    let blank = alphabet.base_blank();
    if s == blank {
        0
    } else if s < blank {
        s + 1
    } else {
        s
    }
}

/// The order `⊑` computed directly: compare symbol ranks at the largest
/// position where the words differ.
pub fn wellorder_cmp(u: &AlphaWord, v: &AlphaWord) -> Ordering {
    let positions: BTreeSet<&Ordinal> = u.entries().keys().chain(v.entries().keys()).collect();
    let alphabet = u.alphabet();
    for pos in positions.into_iter().rev() {
        let (x, y) = (u.get(pos), v.get(pos));
        if x != y {
            return rank(alphabet, x.0).cmp(&rank(alphabet, y.0));
        }
    }
    Ordering::Equal
}

/// Binary automaton for `u ⊑ v`: `u = v`, or at the largest position where
/// they differ `u` carries the smaller symbol. The blank is least; the
/// other symbols are ordered as listed in the alphabet.
pub fn wellorder_automaton(alphabet: &Alphabet) -> Result<OrdinalAutomaton> {
    let pair = Arc::new(alphabet.base_alphabet().power(2)?);
    let mut b = AutomatonBuilder::new(pair.clone());
    let eq = b.state("EQ");
    let lt = b.state("LT");
    let gt = b.state("GT");
    b.initial(eq).accepting(eq).accepting(lt);
    for s in pair.symbols() {
        let t = pair.decode(s);
        let (x, y) = (rank(alphabet, t[0]), rank(alphabet, t[1]));
        for q in [eq, lt, gt] {
            let next = if x == y {
                q
            } else if x < y {
                lt
            } else {
                gt
            };
            b.succ(q, s, next);
        }
    }
    for q in [eq, lt, gt] {
        b.limit(StateSet::singleton(q), q);
    }
    b.build()
}

/// Binary automaton for `supp(u) ⊆ supp(v)`.
pub fn subsupp_automaton(alphabet: &Alphabet) -> Result<OrdinalAutomaton> {
    let pair = Arc::new(alphabet.base_alphabet().power(2)?);
    let blank = alphabet.base_blank();
    let mut b = AutomatonBuilder::new(pair.clone());
    let q = b.state("q");
    b.initial(q).accepting(q).limit(StateSet::singleton(q), q);
    for s in pair.symbols() {
        let t = pair.decode(s);
        if !(t[0] != blank && t[1] == blank) {
            b.succ(q, s, q);
        }
    }
    b.build()
}

/// `D_n = {ω·n₁ + n₂ : n₁ + n₂ ≤ n}`.
pub fn dn_set(n: u64) -> BTreeSet<Ordinal> {
    (0..=n)
        .flat_map(|n1| (0..=n - n1).map(move |n2| Ordinal::from_coeffs(vec![n2, n1])))
        .collect()
}

/// Accepts the ω²-words over `{_, a, b}` whose support is exactly `D_n`.
pub fn tn_automaton(n: u64) -> Result<OrdinalAutomaton> {
    let sigma = sigma_ab();
    let blank = sigma.blank();
    let letters: Vec<Symbol> = sigma.letters().collect();
    let mut b = AutomatonBuilder::new(sigma.clone());
    let past = b.state("P");
    // State (block, j): at position j of block `block`; j = n - block + 1
    // means the rest of the block must be blank.
    let mut st = |blk: u64, j: u64| b.state(format!("B{blk}.{j}"));
    let mut trans = Vec::new();
    let mut limits = Vec::new();
    for blk in 0..=n {
        let width = n - blk + 1;
        for j in 0..width {
            let (from, to) = (st(blk, j), st(blk, j + 1));
            for &l in &letters {
                trans.push((from, l, to));
            }
        }
        let rest = st(blk, width);
        trans.push((rest, blank, rest));
        let next = if blk < n { st(blk + 1, 0) } else { past };
        limits.push((StateSet::singleton(rest), next));
    }
    let start = st(0, 0);
    b.initial(start).accepting(past);
    b.succ(past, blank, past).limit(StateSet::singleton(past), past);
    for (q, s, p) in trans {
        b.succ(q, s, p);
    }
    for (set, p) in limits {
        b.limit(set, p);
    }
    b.build()
}

/// All `2^{|D_n|}` words of `T_n`, in a fixed order.
pub fn tn_words(n: u64) -> Vec<AlphaWord> {
    let sigma = sigma_ab();
    let positions: Vec<Ordinal> = dn_set(n).into_iter().collect();
    let letters: Vec<Symbol> = sigma.letters().collect();
    let len = Ordinal::omega_pow(2);
    (0u64..1 << positions.len())
        .map(|mask| {
            let entries = positions
                .iter()
                .enumerate()
                .map(|(i, p)| (p.clone(), letters[(mask >> i & 1) as usize]));
            AlphaWord::new(sigma.clone(), len.clone(), entries).expect("positions below ω²")
        })
        .collect()
}

/// Ternary automaton over coordinates `(w, v, u)` accepting `u = f_tag(w, v)`
/// on ω²-words: `u(0) = tag`, `u(β+1) = w(β)`, `u(ω(k+1)) = v(ωk)`.
///
/// Every position below ω² is 0, a successor, or `ω(k+1)`, so the three
/// clauses define `u` everywhere.
pub fn f_automaton(tag: &str) -> Result<OrdinalAutomaton> {
    let sigma = sigma_ab();
    let tag = sigma.lookup(tag)?;
    if tag == sigma.blank() {
        return Err(Error::Precondition("f tag must be a letter".into()));
    }
    let triple = Arc::new(sigma.power(3)?);
    let k = sigma.len() as u32;
    let name = |s: u32| sigma.base_symbols()[s as usize].clone();
    let mut b = AutomatonBuilder::new(triple.clone());
    let start = b.state("Start");
    let end = b.state("End");
    let block: Vec<_> = (0..k).map(|c| b.state(format!("Block({})", name(c)))).collect();
    let mid: Vec<Vec<_>> = (0..k)
        .map(|p| {
            (0..k)
                .map(|c| b.state(format!("Mid({},{})", name(p), name(c))))
                .collect()
        })
        .collect();
    b.initial(start).accepting(end);
    for s in triple.symbols() {
        let t = triple.decode(s);
        let (w, v, u) = (t[0], t[1], t[2]);
        if u == tag.0 {
            b.succ(start, s, mid[w as usize][v as usize]);
        }
        b.succ(block[u as usize], s, mid[w as usize][v as usize]);
        for c in 0..k as usize {
            b.succ(mid[u as usize][c], s, mid[w as usize][c]);
        }
    }
    let blank = sigma.base_blank() as usize;
    for c in 0..k as usize {
        b.limit(StateSet::singleton(mid[blank][c]), block[c]);
    }
    let tail: StateSet = [block[blank], mid[blank][blank]].into_iter().collect();
    b.limit(tail, end);
    b.build()
}

/// `Φ` of the ω²-structure: the graphs of `f_a` and `f_b` with the value
/// coordinate first, i.e. over `(u, w, v)`.
pub fn section6_phi() -> Result<Vec<OrdinalAutomaton>> {
    ["a", "b"]
        .iter()
        .map(|t| f_automaton(t)?.reindex(3, &[1, 2, 0]))
        .collect()
}

/// The presentation `(words over ω², f_a, f_b)` with `⊑` and `⊆_supp`.
pub fn section6_fixture() -> Result<StructureFixture> {
    let sigma = sigma_ab();
    let mut relations = BTreeMap::new();
    for (name, tag) in [("Fa", "a"), ("Fb", "b")] {
        relations.insert(
            name.to_string(),
            RelationEntry {
                arity: 3,
                automaton: f_automaton(tag)?,
            },
        );
    }
    relations.insert(
        "Leq".into(),
        RelationEntry {
            arity: 2,
            automaton: wellorder_automaton(&sigma)?,
        },
    );
    relations.insert(
        "Sub".into(),
        RelationEntry {
            arity: 2,
            automaton: subsupp_automaton(&sigma)?,
        },
    );
    Ok(StructureFixture {
        name: "section6".into(),
        description: "all ω²-words over {_,a,b}; Fa(w,v,u) and Fb(w,v,u) are the graphs u = f_a(w,v), u = f_b(w,v); Leq is ⊑; Sub is ⊆_supp".into(),
        presentation: Presentation::new(
            Ordinal::omega_pow(2),
            OrdinalAutomaton::universal(sigma)?,
            relations,
            None,
        )?,
    })
}

/// `{_, 0, 1}` with blank `_`.
pub fn sigma_bits() -> Arc<Alphabet> {
    Arc::new(Alphabet::new(&["_", "0", "1"], "_").expect("valid alphabet"))
}

/// The canonical ω-word of a natural number: binary digits, least
/// significant first, ending in `1`; zero is the blank word.
pub fn nat_word(k: u64) -> AlphaWord {
    let sigma = sigma_bits();
    let (zero, one) = (Symbol(1), Symbol(2));
    let bits = 64 - k.leading_zeros() as u64;
    let entries = (0..bits).map(|i| {
        (
            Ordinal::nat(i),
            if k >> i & 1 == 1 { one } else { zero },
        )
    });
    AlphaWord::new(sigma, Ordinal::omega(), entries).expect("finite positions")
}

/// Inverse of [`nat_word`] on canonical words.
pub fn word_nat(w: &AlphaWord) -> Option<u64> {
    if w == &nat_word(0) {
        return Some(0);
    }
    let mut k = 0u64;
    let n = w.support_len() as u64;
    for (i, (pos, s)) in w.entries().iter().enumerate() {
        if pos.as_nat() != Some(i as u64) || i >= 64 {
            return None;
        }
        match s.0 {
            1 => {}
            2 => k |= 1 << i,
            _ => return None,
        }
    }
    let top = w.entries().values().last().copied();
    (top == Some(Symbol(2)) && n > 0).then_some(k)
}

fn presburger_domain() -> Result<OrdinalAutomaton> {
    let sigma = sigma_bits();
    let (blank, zero, one) = (sigma.blank(), Symbol(1), Symbol(2));
    let mut b = AutomatonBuilder::new(sigma);
    // s0: last digit was 1 (or none yet); s1: last digit was 0; s2: tail.
    let s0 = b.state("s0");
    let s1 = b.state("s1");
    let s2 = b.state("s2");
    b.initial(s0).accepting(s2);
    b.succ(s0, one, s0)
        .succ(s0, zero, s1)
        .succ(s1, zero, s1)
        .succ(s1, one, s0)
        .succ(s0, blank, s2)
        .succ(s2, blank, s2);
    b.limit(StateSet::singleton(s2), s2);
    b.build()
}

fn presburger_plus() -> Result<OrdinalAutomaton> {
    let sigma = sigma_bits();
    let triple = Arc::new(sigma.power(3)?);
    let bit = |s: u32| u32::from(s == 2);
    let mut b = AutomatonBuilder::new(triple.clone());
    let c0 = b.state("c0");
    let c1 = b.state("c1");
    b.initial(c0).accepting(c0);
    for s in triple.symbols() {
        let t = triple.decode(s);
        let (x, y, z) = (bit(t[0]), bit(t[1]), bit(t[2]));
        for (carry, q) in [(0, c0), (1, c1)] {
            let total = x + y + carry;
            if total % 2 == z {
                b.succ(q, s, if total >= 2 { c1 } else { c0 });
            }
        }
    }
    b.limit(StateSet::singleton(c0), c0);
    b.build()
}

/// `(ℕ, +)` over ω with least-significant-bit-first binary words.
pub fn presburger_fixture() -> Result<StructureFixture> {
    let mut relations = BTreeMap::new();
    relations.insert(
        "Plus".to_string(),
        RelationEntry {
            arity: 3,
            automaton: presburger_plus()?,
        },
    );
    Ok(StructureFixture {
        name: "presburger".into(),
        description: "(N, +) over ω; Plus(x, y, z) iff x + y = z; naturals are binary, least significant digit first, with no trailing zeros".into(),
        presentation: Presentation::new(Ordinal::omega(), presburger_domain()?, relations, None)?,
    })
}

/// `{_, 1}` with blank `_`.
pub fn sigma_unit() -> Arc<Alphabet> {
    Arc::new(Alphabet::new(&["_", "1"], "_").expect("valid alphabet"))
}

/// Element of ℤ/2 as an ω-word: 0 is blank, 1 is `{0:1}`.
pub fn z2_word(bit: bool) -> AlphaWord {
    let sigma = sigma_unit();
    let entries = bit.then_some((Ordinal::zero(), Symbol(1)));
    AlphaWord::new(sigma, Ordinal::omega(), entries).expect("position 0 below ω")
}

/// An automaton of arity `r` reading one tuple at position 0 (accepted iff
/// `first` holds for it) and blanks afterwards.
fn first_position(r: usize, first: impl Fn(&[bool]) -> bool) -> Result<OrdinalAutomaton> {
    let sigma = sigma_unit();
    let tuples = Arc::new(sigma.power(r)?);
    let mut b = AutomatonBuilder::new(tuples.clone());
    let s = b.state("s");
    let t = b.state("t");
    b.initial(s).accepting(t).limit(StateSet::singleton(t), t);
    b.succ(t, tuples.blank(), t);
    for sym in tuples.symbols() {
        let bits: Vec<bool> = tuples.decode(sym).iter().map(|&c| c == 1).collect();
        if first(&bits) {
            b.succ(s, sym, t);
        }
    }
    b.build()
}

/// The two-element ring `(ℤ/2, +, ·, 0, 1)` over ω with `⊑` and `⊆_supp`.
pub fn z2_fixture() -> Result<StructureFixture> {
    let sigma = sigma_unit();
    let mut relations = BTreeMap::new();
    let mut add = |name: &str, arity: usize, automaton: OrdinalAutomaton| {
        relations.insert(name.to_string(), RelationEntry { arity, automaton });
    };
    add("Add", 3, first_position(3, |b| (b[0] ^ b[1]) == b[2])?);
    add("Mul", 3, first_position(3, |b| (b[0] & b[1]) == b[2])?);
    add("Zero", 1, first_position(1, |b| !b[0])?);
    add("One", 1, first_position(1, |b| b[0])?);
    add("Leq", 2, wellorder_automaton(&sigma)?);
    add("Sub", 2, subsupp_automaton(&sigma)?);
    Ok(StructureFixture {
        name: "z2".into(),
        description: "the ring Z/2 over ω; 0 is the blank word, 1 is {0:1}; Add, Mul are ternary graphs; Leq is ⊑; Sub is ⊆_supp".into(),
        presentation: Presentation::new(
            Ordinal::omega(),
            first_position(1, |_| true)?,
            relations,
            None,
        )?,
    })
}

/// Names accepted by [`fixture`].
pub const FIXTURES: &[&str] = &["presburger", "section6", "z2"];

pub fn fixture(name: &str) -> Result<StructureFixture> {
    match name {
        "presburger" => presburger_fixture(),
        "section6" => section6_fixture(),
        "z2" => z2_fixture(),
        other => Err(Error::Precondition(format!(
            "unknown fixture {other:?}; known: {}",
            FIXTURES.join(", ")
        ))),
    }
}

/// Standalone automata by name: `wellorder`, `subsupp`, `fa`, `fb`, `tN`.
pub fn automaton(name: &str) -> Result<OrdinalAutomaton> {
    match name {
        "wellorder" => wellorder_automaton(&sigma_ab()),
        "subsupp" => subsupp_automaton(&sigma_ab()),
        "fa" => f_automaton("a"),
        "fb" => f_automaton("b"),
        t if t.starts_with('t') && t[1..].parse::<u64>().is_ok() => {
            tn_automaton(t[1..].parse().expect("checked"))
        }
        other => Err(Error::Precondition(format!("unknown automaton {other:?}"))),
    }
}
