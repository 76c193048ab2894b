mod common;

use std::sync::Arc;

use common::*;
use ordinalia::examples;
use ordinalia::gapcode::{CapPolicy, GapNfa, GapSpace, GapWord};
use ordinalia::semantics::const_reach;
use ordinalia::{AlphaWord, Alphabet, AutomatonBuilder, Ordinal, OrdinalAutomaton, StateSet, Symbol};
use rand::Rng;

fn contains_a(s: &Arc<Alphabet>) -> OrdinalAutomaton {
    let mut b = AutomatonBuilder::new(s.clone());
    let (q, p) = (b.state("q"), b.state("p"));
    b.initial(q).accepting(p);
    for sym in s.symbols() {
        b.succ(q, sym, q).succ(p, sym, p);
    }
    b.succ(q, s.lookup("a").unwrap(), p);
    b.limit(StateSet::singleton(q), q).limit(StateSet::singleton(p), p);
    b.build().unwrap()
}

#[test]
fn encode_example() {
    let s = sigma(&["_", "a", "b"]);
    let w = AlphaWord::parse_literal("len=w^2; {0:a, w:b}", s.clone()).unwrap();
    let gw = GapWord::encode(&w);
    assert_eq!(gw.gaps, vec![Ordinal::zero(), Ordinal::omega(), Ordinal::omega_pow(2)]);
    assert_eq!(gw.decode(s).unwrap(), w);
}

#[test]
fn encode_decode_round_trip() {
    let mut rng = rng(31);
    let s = sigma(&["_", "a", "b"]);
    for _ in 0..500 {
        let len = random_ordinal(&mut rng, 4, 4);
        let w = random_word(&mut rng, &s, &len, 6, 4);
        let gw = GapWord::encode(&w);
        assert_eq!(gw.letters.len(), w.support_len());
        assert_eq!(gw.decode(s.clone()).unwrap(), w);
        let space = GapSpace::new(s.clone(), &len);
        assert_eq!(space.word_of(&space.labels_of(&w).unwrap()).unwrap(), w);
    }
}

#[test]
fn cap_policy_examples() {
    let s = sigma(&["_", "a"]);
    let alpha = Ordinal::from_coeffs(vec![1, 0, 2]);
    let u = OrdinalAutomaton::universal(s.clone()).unwrap();
    let pol = CapPolicy::compute(&[&u], &alpha).unwrap();
    assert_eq!(pol.periods, vec![1, 1, 1]);
    assert_eq!(pol.thresholds, vec![2, 1, 3]);
    let pol = CapPolicy::compute(&[&contains_a(&s)], &alpha).unwrap();
    assert_eq!(pol.periods, vec![1, 1, 1]);
}

/// A second gap in the class of `g`: one coefficient moved by a multiple
/// of its period, staying at or above the threshold.
fn class_mate(rng: &mut rand_chacha::ChaCha8Rng, pol: &CapPolicy, g: &Ordinal) -> Ordinal {
    let mut c: Vec<u64> = (0..pol.thresholds.len()).map(|j| g.coeff(j)).collect();
    let j = rng.gen_range(0..c.len());
    if c[j] >= pol.thresholds[j] {
        let k = rng.gen_range(0..3) * pol.periods[j];
        c[j] = (pol.thresholds[j] + (c[j] - pol.thresholds[j]) % pol.periods[j]) + k;
    }
    Ordinal::from_coeffs(c)
}

#[test]
fn gaps_of_one_class_act_alike() {
    let mut rng = rng(32);
    let s = sigma(&["_", "a"]);
    let alpha = Ordinal::omega_pow(3);
    for _ in 0..200 {
        let q = rng.gen_range(1..=4);
        let a = random_automaton(&mut rng, q, s.clone(), 0.35);
        let pol = CapPolicy::compute(&[&a], &alpha).unwrap();
        let g = random_ordinal(&mut rng, 3, 12);
        let h = class_mate(&mut rng, &pol, &g);
        assert_eq!(pol.class(&g), pol.class(&h));
        assert_eq!(const_reach(&a, s.blank(), &g), const_reach(&a, s.blank(), &h), "{g} vs {h}");

        let w = random_word(&mut rng, &s, &alpha, 4, 12);
        let mut gw = GapWord::encode(&w);
        let i = rng.gen_range(0..gw.gaps.len());
        gw.gaps[i] = class_mate(&mut rng, &pol, &gw.gaps[i]);
        let mut len = gw.gaps[0].clone();
        for gap in &gw.gaps[1..] {
            len = len.succ().add(gap);
        }
        gw.length = len;
        let moved = gw.decode(s.clone()).unwrap();
        assert_eq!(accepts(&a, &moved), accepts(&a, &w), "{w} vs {moved}");
    }
}

fn fixture_automata() -> Vec<(String, OrdinalAutomaton)> {
    let mut out: Vec<(String, OrdinalAutomaton)> = ["wellorder", "subsupp", "fa", "fb", "t0", "t1", "t2"]
        .iter()
        .map(|n| (n.to_string(), examples::automaton(n).unwrap()))
        .collect();
    for name in examples::FIXTURES {
        let p = examples::fixture(name).unwrap().presentation;
        out.push((format!("{name}/domain"), p.domain.clone()));
        for (r, e) in p.relations {
            out.push((format!("{name}/{r}"), e.automaton));
        }
    }
    out
}

#[test]
fn gap_automata_factor_membership() {
    let mut rng = rng(33);
    let lengths = [Ordinal::nat(6), Ordinal::omega(), Ordinal::from_coeffs(vec![2, 1, 1])];
    for (name, a) in fixture_automata() {
        let s = a.alphabet().clone();
        for alpha in &lengths {
            let n = GapNfa::from_automaton(&a, GapSpace::new(s.clone(), alpha)).unwrap();
            for _ in 0..500 / lengths.len() {
                let w = random_word(&mut rng, &s, alpha, 5, 3);
                assert_eq!(n.accepts(&w).unwrap(), accepts(&a, &w), "{name} on {w}");
            }
        }
    }
    for _ in 0..100 {
        let s = sigma(&["_", "a", "b"]);
        let q = rng.gen_range(1..=4);
        let a = random_automaton(&mut rng, q, s.clone(), 0.3);
        let alpha = random_ordinal(&mut rng, 3, 3);
        let n = GapNfa::from_automaton(&a, GapSpace::new(s.clone(), &alpha)).unwrap();
        for _ in 0..5 {
            let w = random_word(&mut rng, &s, &alpha, 5, 3);
            assert_eq!(n.accepts(&w).unwrap(), accepts(&a, &w), "{a:?} on {w}");
        }
    }
}

#[test]
fn complement_is_exact() {
    let mut rng = rng(34);
    let s = sigma(&["_", "a"]);
    let alpha = Ordinal::omega_pow_mul(2, 2);
    let space = GapSpace::new(s.clone(), &alpha);
    let u = GapNfa::universal(space.clone()).unwrap();
    assert!(u.complement().unwrap().is_empty());
    for _ in 0..20 {
        let q = rng.gen_range(1..=3);
        let a = random_automaton(&mut rng, q, s.clone(), 0.35);
        let n = GapNfa::from_automaton(&a, space.clone()).unwrap();
        let c = n.complement().unwrap();
        for _ in 0..10 {
            let w = random_word(&mut rng, &s, &alpha, 5, 3);
            assert!(n.accepts(&w).unwrap() ^ c.accepts(&w).unwrap(), "{w}");
        }
        assert!(c.complement().unwrap().equivalent(&n).unwrap());
        assert!(n.intersect(&c).unwrap().is_empty());
        assert!(n.union(&c).unwrap().equivalent(&u).unwrap());
    }
}

/// Every word over `{_, a}` of length `alpha` supported in `positions`.
fn words_on(s: &Arc<Alphabet>, alpha: &Ordinal, positions: &[Ordinal]) -> Vec<AlphaWord> {
    let a = s.lookup("a").unwrap();
    (0..1u32 << positions.len())
        .map(|mask| {
            let entries: Vec<(Ordinal, Symbol)> = positions
                .iter()
                .enumerate()
                .filter(|(i, _)| mask >> i & 1 == 1)
                .map(|(_, p)| (p.clone(), a))
                .collect();
            AlphaWord::new(s.clone(), alpha.clone(), entries).unwrap()
        })
        .collect()
}

fn small_positions(alpha: &Ordinal) -> Vec<Ordinal> {
    let deg = alpha.degree().map_or(0, |d| d + 1);
    (0..3u64.pow(deg as u32))
        .map(|mut k| {
            Ordinal::from_coeffs(
                (0..deg)
                    .map(|_| {
                        let c = k % 3;
                        k /= 3;
                        c
                    })
                    .collect(),
            )
        })
        .filter(|p| p < alpha)
        .collect()
}

#[test]
fn projection_of_equality_is_universal() {
    let s = sigma(&["_", "a", "b"]);
    for alpha in [Ordinal::nat(3), Ordinal::omega(), Ordinal::omega_pow(2)] {
        let eq = OrdinalAutomaton::equality(&s).unwrap();
        let pair = eq.alphabet().clone();
        let n = GapNfa::from_automaton(&eq, GapSpace::new(pair, &alpha)).unwrap();
        let proj = n.project(1).unwrap();
        let u = GapNfa::universal(proj.space().clone()).unwrap();
        assert!(proj.equivalent(&u).unwrap(), "{alpha}");
    }
}

/// Completeness on accepted pairs, soundness by searching for a witness
/// among words supported on small positions; at finite length the search
/// is exhaustive, so rejection is checked too.
#[test]
fn projection_is_sound_and_complete() {
    let mut rng = rng(35);
    let base = sigma(&["_", "a"]);
    let pair = Arc::new(base.power(2).unwrap());
    for alpha in [Ordinal::nat(3), Ordinal::omega(), Ordinal::omega_pow(2), Ordinal::from_coeffs(vec![1, 2])] {
        let positions = small_positions(&alpha);
        let candidates = words_on(&base, &alpha, &positions);
        let exhaustive = alpha.as_nat().is_some();
        for _ in 0..15 {
            let q = rng.gen_range(1..=3);
            let a = random_automaton(&mut rng, q, pair.clone(), 0.35);
            let n = GapNfa::from_automaton(&a, GapSpace::new(pair.clone(), &alpha)).unwrap();
            for coord in 0..2 {
                let proj = n.project(coord).unwrap();
                for u in &candidates {
                    let has_witness = candidates.iter().any(|v| {
                        let (x, y) = if coord == 1 { (u, v) } else { (v, u) };
                        accepts(&a, &AlphaWord::convolve(&[x, y]).unwrap())
                    });
                    let projected = proj.accepts(u).unwrap();
                    if has_witness {
                        assert!(projected, "completeness at {alpha}: {u}");
                    } else if exhaustive {
                        assert!(!projected, "soundness at {alpha}: {u}");
                    }
                    if projected && !has_witness {
                        let full = candidates_wide(&base, &alpha);
                        assert!(
                            full.iter().any(|v| {
                                let (x, y) = if coord == 1 { (u, v) } else { (v, u) };
                                accepts(&a, &AlphaWord::convolve(&[x, y]).unwrap())
                            }),
                            "no witness for {u} at {alpha}"
                        );
                    }
                }
            }
        }
    }
}

/// A wider witness pool: positions with coefficients below 5.
fn candidates_wide(s: &Arc<Alphabet>, alpha: &Ordinal) -> Vec<AlphaWord> {
    let deg = alpha.degree().map_or(0, |d| d + 1);
    let positions: Vec<Ordinal> = (0..5u64.pow(deg as u32))
        .map(|mut k| {
            Ordinal::from_coeffs(
                (0..deg)
                    .map(|_| {
                        let c = k % 5;
                        k /= 5;
                        c
                    })
                    .collect(),
            )
        })
        .filter(|p| p < alpha)
        .take(14)
        .collect();
    words_on(s, alpha, &positions)
}

#[test]
fn shape_language_is_the_set_of_encodings() {
    let s = sigma(&["_", "a"]);
    for alpha in [Ordinal::omega(), Ordinal::from_coeffs(vec![1, 0, 1]), Ordinal::omega_pow_mul(1, 2), Ordinal::nat(2)] {
        let space = GapSpace::new(s.clone(), &alpha);
        let u = GapNfa::universal(space.clone()).unwrap();
        let labels: Vec<u32> = space.labels().collect();
        let mut seqs: Vec<Vec<u32>> = vec![Vec::new()];
        let mut accepted = 0;
        for _ in 0..=6 {
            for seq in &seqs {
                let concrete = space
                    .word_of(seq)
                    .ok()
                    .filter(|w| space.labels_of(w).unwrap() == *seq);
                assert_eq!(u.accepts_labels(seq), concrete.is_some(), "{alpha}: {seq:?}");
                accepted += concrete.is_some() as usize;
            }
            seqs = seqs
                .iter()
                .flat_map(|seq| {
                    labels.iter().map(move |&l| {
                        let mut next = seq.clone();
                        next.push(l);
                        next
                    })
                })
                .collect();
        }
        assert!(accepted > 0);
    }
}

#[test]
fn emptiness_and_witnesses() {
    let s = sigma(&["_", "a"]);
    let omega = Ordinal::omega();
    let space = GapSpace::new(s.clone(), &omega);
    let mut b = AutomatonBuilder::new(s.clone());
    let q = b.state("q");
    b.initial(q);
    b.succ(q, s.blank(), q);
    let dead = b.build().unwrap();
    assert!(GapNfa::from_automaton(&dead, space.clone()).unwrap().witness().unwrap().is_none());
    let u = GapNfa::universal(space.clone()).unwrap();
    assert_eq!(u.witness().unwrap().unwrap(), AlphaWord::blank(s.clone(), omega.clone()));
    let alpha = Ordinal::from_coeffs(vec![0, 1, 1]);
    let ca = contains_a(&s);
    let w = GapNfa::from_automaton(&ca, GapSpace::new(s.clone(), &alpha))
        .unwrap()
        .witness()
        .unwrap()
        .unwrap();
    assert!(w.support_len() >= 1 && accepts(&ca, &w));
}
