mod common;

use std::collections::BTreeMap;
use std::sync::Arc;

use common::*;
use ordinalia::examples::{self, nat_word, presburger_fixture};
use ordinalia::logic::{Formula, Presentation, RelationEntry};
use ordinalia::{AlphaWord, Alphabet, AutomatonBuilder, Ordinal, OrdinalAutomaton, StateSet};
use rand::Rng;
use rand_chacha::ChaCha8Rng;

/// Words of length ω supported in `{0, …, k-1}`.
fn bounded_domain(s: &Arc<Alphabet>, k: usize) -> OrdinalAutomaton {
    let mut b = AutomatonBuilder::new(s.clone());
    let qs: Vec<_> = (0..=k).map(|i| b.state(format!("s{i}"))).collect();
    b.initial(qs[0]).accepting(qs[k]);
    for i in 0..k {
        for sym in s.symbols() {
            b.succ(qs[i], sym, qs[i + 1]);
        }
    }
    b.succ(qs[k], s.blank(), qs[k]);
    b.limit(StateSet::singleton(qs[k]), qs[k]);
    b.build().unwrap()
}

struct Finite {
    p: Presentation,
    elements: Vec<AlphaWord>,
}

/// A presentation over ω whose domain is the words supported in
/// `{0, 1, 2}`, with random relations `P` (unary) and `R` (binary).
fn random_presentation(rng: &mut ChaCha8Rng) -> Finite {
    let s = sigma(&["_", "a"]);
    let domain = bounded_domain(&s, 3);
    let pair = Arc::new(s.power(2).unwrap());
    let q = rng.gen_range(1..=3);
    let unary = random_automaton(rng, q, s.clone(), 0.4);
    let q = rng.gen_range(1..=3);
    let binary = random_automaton(rng, q, pair, 0.35);
    let relations = BTreeMap::from([
        ("P".to_string(), RelationEntry { arity: 1, automaton: unary }),
        ("R".to_string(), RelationEntry { arity: 2, automaton: binary }),
    ]);
    let omega = Ordinal::omega();
    let elements: Vec<AlphaWord> = (0..8u32)
        .map(|mask| {
            let entries: Vec<_> = (0..3)
                .filter(|i| mask >> i & 1 == 1)
                .map(|i| (Ordinal::nat(i as u64), s.lookup("a").unwrap()))
                .collect();
            AlphaWord::new(s.clone(), omega.clone(), entries).unwrap()
        })
        .collect();
    Finite {
        p: Presentation::new(omega, domain, relations, None).unwrap(),
        elements,
    }
}

/// Model checking by enumeration of a finite domain.
fn brute(p: &Presentation, elements: &[AlphaWord], f: &Formula, env: &mut BTreeMap<String, AlphaWord>) -> bool {
    match f {
        Formula::Rel(name, args) => {
            let words: Vec<&AlphaWord> = args.iter().map(|v| &env[v]).collect();
            accepts(&p.relations[name].automaton, &AlphaWord::convolve(&words).unwrap())
        }
        Formula::Eq(x, y) => env[x] == env[y],
        Formula::Not(g) => !brute(p, elements, g, env),
        Formula::And(a, b) => brute(p, elements, a, env) && brute(p, elements, b, env),
        Formula::Or(a, b) => brute(p, elements, a, env) || brute(p, elements, b, env),
        Formula::Implies(a, b) => !brute(p, elements, a, env) || brute(p, elements, b, env),
        Formula::Exists(x, g) | Formula::Forall(x, g) => {
            let saved = env.get(x).cloned();
            let want = matches!(f, Formula::Exists(..));
            let mut result = !want;
            for e in elements {
                env.insert(x.clone(), e.clone());
                if brute(p, elements, g, env) == want {
                    result = want;
                    break;
                }
            }
            match saved {
                Some(w) => env.insert(x.clone(), w),
                None => env.remove(x),
            };
            result
        }
    }
}

const VARS: [&str; 3] = ["x", "y", "z"];

/// A random formula of quantifier depth at most `depth` whose free
/// variables lie in `scope`; no variable is bound twice on a path.
fn random_formula(rng: &mut ChaCha8Rng, scope: &[&'static str], depth: usize, existential: bool) -> Formula {
    let fresh: Vec<&'static str> = VARS.iter().copied().filter(|v| !scope.contains(v)).collect();
    let quantify = depth > 0 && !fresh.is_empty() && (scope.is_empty() || rng.gen_bool(0.4));
    if quantify {
        let x = fresh[rng.gen_range(0..fresh.len())];
        let mut inner = scope.to_vec();
        inner.push(x);
        let body = random_formula(rng, &inner, depth - 1, existential);
        return if existential || rng.gen_bool(0.5) {
            Formula::exists(x, body)
        } else {
            Formula::forall(x, body)
        };
    }
    let pick = |rng: &mut ChaCha8Rng| scope[rng.gen_range(0..scope.len())];
    let atom = |rng: &mut ChaCha8Rng| match rng.gen_range(0..3) {
        0 => Formula::rel("P", &[pick(rng)]),
        1 => {
            let (a, b) = (pick(rng), pick(rng));
            Formula::rel("R", &[a, b])
        }
        _ => {
            let (a, b) = (pick(rng), pick(rng));
            Formula::eq(a, b)
        }
    };
    match rng.gen_range(0..if existential { 3 } else { 5 }) {
        0 => atom(rng),
        1 => Formula::and(random_formula(rng, scope, depth, existential), atom(rng)),
        2 => Formula::or(atom(rng), random_formula(rng, scope, depth, existential)),
        3 => Formula::not(random_formula(rng, scope, depth, existential)),
        _ => Formula::implies(atom(rng), random_formula(rng, scope, depth, existential)),
    }
}

#[test]
fn decide_agrees_with_brute_force_on_finite_domains() {
    let mut rng = rng(41);
    let mut truths = [0usize; 2];
    for _ in 0..12 {
        let fin = random_presentation(&mut rng);
        for _ in 0..10 {
            let f = random_formula(&mut rng, &[], 3, false);
            let expected = brute(&fin.p, &fin.elements, &f, &mut BTreeMap::new());
            assert_eq!(fin.p.decide(&f).unwrap(), expected, "{f}");
            truths[expected as usize] += 1;
        }
    }
    assert!(truths[0] > 0 && truths[1] > 0, "{truths:?}");
}

#[test]
fn negation_flips_truth() {
    let mut rng = rng(42);
    for i in 0..100 {
        let fin = random_presentation(&mut rng);
        let f = random_formula(&mut rng, &[], 3, false);
        let (t, n) = (fin.p.decide(&f).unwrap(), fin.p.decide(&Formula::not(f.clone())).unwrap());
        assert!(t ^ n, "case {i}: {f}");
    }
}

#[test]
fn witnesses_satisfy_their_matrix() {
    let mut rng = rng(43);
    let mut found = 0;
    for _ in 0..60 {
        let fin = random_presentation(&mut rng);
        let f = random_formula(&mut rng, &[], 3, true);
        let truth = fin.p.decide(&f).unwrap();
        let witness = fin.p.find_witness(&f).unwrap();
        assert_eq!(witness.is_some(), truth, "{f}");
        if let Some(tuple) = witness {
            let mut matrix = &f;
            while let Formula::Exists(_, body) = matrix {
                matrix = body;
            }
            let mut env: BTreeMap<String, AlphaWord> = tuple.into_iter().collect();
            for w in env.values() {
                assert!(fin.elements.contains(w), "witness {w} outside the domain");
            }
            assert!(brute(&fin.p, &fin.elements, matrix, &mut env), "{f}");
            found += 1;
        }
    }
    assert!(found > 0);
}

/// The ring `ℤ/2` has a two-element domain, so brute force is exact.
#[test]
fn z2_agrees_with_brute_force() {
    let p = examples::fixture("z2").unwrap().presentation;
    let elements = vec![examples::z2_word(false), examples::z2_word(true)];
    for text in [
        "(forall x (forall y (exists z (Add x y z))))",
        "(forall x (Add x x x))",
        "(exists x (Add x x x))",
        "(forall x (forall y (-> (Mul x y x) (Mul y x x))))",
        "(forall x (exists y (and (Zero y) (Add x y x))))",
        "(exists x (and (One x) (Mul x x x)))",
        "(forall x (or (Zero x) (One x)))",
        "(forall x (forall y (or (Leq x y) (Leq y x))))",
        "(exists x (exists y (and (Sub x y) (not (= x y)))))",
    ] {
        let f = ordinalia::logic::parse_formula(text).unwrap();
        let expected = brute(&p, &elements, &f, &mut BTreeMap::new());
        assert_eq!(p.decide(&f).unwrap(), expected, "{text}");
    }
}

/// Existential Presburger sentences true on small numbers are decided
/// true; witnesses decode to solutions.
#[test]
fn presburger_existential_soundness() {
    let p = presburger_fixture().unwrap().presentation;
    let numbers: Vec<AlphaWord> = (0..8).map(nat_word).collect();
    let mut rng = rng(44);
    let mut checked = 0;
    for _ in 0..40 {
        let mut f = Formula::rel("Plus", &[VARS[rng.gen_range(0..3)], VARS[rng.gen_range(0..3)], VARS[rng.gen_range(0..3)]]);
        if rng.gen_bool(0.5) {
            f = Formula::and(f, Formula::not(Formula::eq(VARS[rng.gen_range(0..3)], VARS[rng.gen_range(0..3)])));
        }
        for v in f.free_vars() {
            f = Formula::exists(&v, f);
        }
        if brute(&p, &numbers, &f, &mut BTreeMap::new()) {
            assert!(p.decide(&f).unwrap(), "{f}");
            checked += 1;
        }
    }
    assert!(checked > 0);
}
