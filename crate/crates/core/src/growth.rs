//! Relative growth: the neighbourhoods `U_m`, indistinguishability `∼^Φ_E`,
//! free sets and `ν`, gap shrinking and the normalization of witnesses into
//! `U_K(supp(E), α)`, and the harnesses built on them.
//!
//! Below `ω^ω` the clause of `U_m(β)` involving `ω₁` never applies, so
//! membership reduces to coefficient comparisons.

use std::collections::{BTreeMap, BTreeSet, HashMap};
use std::hash::Hash;
use std::sync::Arc;

use num_bigint::BigUint;
use rayon::prelude::*;
use serde::Serialize;

use crate::automaton::OrdinalAutomaton;
use crate::error::{Error, Result};
use crate::examples::{section6_phi, tn_words, wellorder_cmp};
use crate::logic::{parse_formula, Presentation};
use crate::ordinal::Ordinal;
use crate::relation::Relation;
use crate::semantics::{member, run_relation};
use crate::word::{AlphaWord, Alphabet};

/// The finite family `Φ`: automata over `Σ^{1+p}`, the element in
/// coordinate 0 and `p` parameters after it.
#[derive(Clone, Debug)]
pub struct RelationFamily {
    automata: Vec<OrdinalAutomaton>,
    params: usize,
}

impl RelationFamily {
    pub fn new(automata: Vec<OrdinalAutomaton>) -> Result<RelationFamily> {
        let first = automata
            .first()
            .ok_or_else(|| Error::Precondition("Φ must contain an automaton".into()))?;
        let arity = first.alphabet().arity();
        for a in &automata {
            if a.alphabet().arity() != arity || !a.alphabet().same_base(first.alphabet()) {
                return Err(Error::AlphabetMismatch(
                    "automata of Φ must share Σ and arity".into(),
                ));
            }
        }
        Ok(RelationFamily {
            automata,
            params: arity - 1,
        })
    }

    pub fn automata(&self) -> &[OrdinalAutomaton] {
        &self.automata
    }

    /// Number of parameters `p`.
    pub fn params(&self) -> usize {
        self.params
    }

    /// `|Q|`, taken as the largest state count in `Φ`.
    pub fn states(&self) -> usize {
        self.automata.iter().map(|a| a.num_states()).max().unwrap_or(0)
    }

    fn base(&self) -> Alphabet {
        self.automata[0].alphabet().base_alphabet()
    }
}

/// `K = 2^{|Q|²·n} + 1` exactly.
pub fn k_const_big(phi: &RelationFamily) -> BigUint {
    let q = phi.states() as u64;
    (BigUint::from(1u8) << (q * q * phi.automata.len() as u64)) + 1u8
}

/// `K` as a machine integer; overflow when `|Q|²·n > 62`.
pub fn k_const(phi: &RelationFamily) -> Result<u64> {
    let q = phi.states() as u64;
    let e = q * q * phi.automata.len() as u64;
    if e > 62 {
        return Err(Error::Overflow(format!("K = 2^{e} + 1 = {}", k_const_big(phi))));
    }
    Ok((1u64 << e) + 1)
}

/// `K`, saturating at `u64::MAX`. Comparisons against coefficients are
/// unaffected because no coefficient reaches that size.
pub fn k_saturating(phi: &RelationFamily) -> u64 {
    k_const(phi).unwrap_or(u64::MAX)
}

/// `γ ∈ U_m(β)`.
pub fn u_contains(g: &Ordinal, b: &Ordinal, m: u64) -> bool {
    if g == b {
        return true;
    }
    let top = g.coeffs().len().max(b.coeffs().len());
    let low = usize::try_from(m).map_or(top, |m| m.min(top));
    if (low + 1..top).any(|i| g.coeff(i) != b.coeff(i)) {
        return false;
    }
    let k = (0..=low)
        .rev()
        .find(|&i| g.coeff(i) != b.coeff(i))
        .expect("distinct ordinals with equal heads differ below");
    g.coeff(k) <= b.coeff(k).saturating_add(m) && (0..k).all(|i| g.coeff(i) <= m)
}

/// `γ ∈ U_m(X, δ)`.
pub fn u_set_contains(g: &Ordinal, xs: &BTreeSet<Ordinal>, delta: &Ordinal, m: u64) -> bool {
    g < delta
        && (u_contains(g, &Ordinal::zero(), m)
            || u_contains(g, delta, m)
            || xs.iter().any(|x| u_contains(g, x, m)))
}

/// All of `U_m(β)`.
pub fn u_of(b: &Ordinal, m: usize) -> BTreeSet<Ordinal> {
    let mut out = BTreeSet::from([b.clone()]);
    let mut base: Vec<u64> = b.coeffs().to_vec();
    base.resize(base.len().max(m + 1), 0);
    for k in 0..=m {
        for lk in 0..=base[k] + m as u64 {
            if lk == base[k] {
                continue;
            }
            let mut lower = vec![0u64; k];
            loop {
                let mut c = base.clone();
                c[k] = lk;
                c[..k].copy_from_slice(&lower);
                out.insert(Ordinal::from_coeffs(c));
                // Odometer over the lower coefficients in 0..=m.
                let Some(i) = lower.iter().position(|&x| x < m as u64) else {
                    break;
                };
                lower[i] += 1;
                lower[..i].iter_mut().for_each(|x| *x = 0);
            }
        }
    }
    out
}

/// `U_m(X, δ)`.
pub fn u_set(xs: &BTreeSet<Ordinal>, delta: &Ordinal, m: usize) -> BTreeSet<Ordinal> {
    xs.iter()
        .chain([Ordinal::zero(), delta.clone()].iter())
        .flat_map(|g| u_of(g, m))
        .filter(|g| g < delta)
        .collect()
}

/// `U_m^i(X, δ)`; `i = 0` returns `X`.
pub fn u_iter_set(xs: &BTreeSet<Ordinal>, delta: &Ordinal, m: usize, i: usize) -> BTreeSet<Ordinal> {
    (0..i).fold(xs.clone(), |acc, _| u_set(&acc, delta, m))
}

/// Largest `U_m^i` the enumerating functions will build.
pub const U_ENUMERATION_LIMIT: u128 = 10_000_000;

/// `U_m^i(X, δ)`, refusing when the size estimate
/// `(c + im + 1)^{m+1} · (im + 1) · d` exceeds [`U_ENUMERATION_LIMIT`].
pub fn u_iter_set_checked(
    xs: &BTreeSet<Ordinal>,
    delta: &Ordinal,
    m: usize,
    i: usize,
) -> Result<BTreeSet<Ordinal>> {
    let (c, d) = c_and_d(xs, delta, m);
    let im = (i * m) as u128;
    let estimate = u32::try_from(m + 1)
        .ok()
        .and_then(|e| (c as u128 + im + 1).checked_pow(e))
        .and_then(|x| x.checked_mul(im + 1))
        .and_then(|x| x.checked_mul(d as u128));
    match estimate {
        Some(n) if n <= U_ENUMERATION_LIMIT => Ok(u_iter_set(xs, delta, m, i)),
        _ => Err(Error::Resource(format!(
            "U_{m}^{i} may exceed {U_ENUMERATION_LIMIT} ordinals"
        ))),
    }
}

fn c_and_d(xs: &BTreeSet<Ordinal>, alpha: &Ordinal, m: usize) -> (u64, usize) {
    let with_alpha = || xs.iter().chain(std::iter::once(alpha));
    let c = with_alpha().map(|g| g.max_low_coeff(m)).max().unwrap_or(0);
    let d = with_alpha()
        .chain(std::iter::once(&Ordinal::zero()))
        .map(|g| g.truncation(m))
        .collect::<BTreeSet<_>>()
        .len();
    (c, d)
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    pub m: usize,
    pub i: usize,
    /// `c_m(X ∪ {α})`.
    pub c: u64,
    /// `d_m(X ∪ {α})`.
    pub d: usize,
    pub bound: u128,
    pub size: usize,
    pub holds: bool,
}

/// Compares `|U_m^i(X, α)|` with `(c + im)^{m+1} · (im + 1) · d`.
pub fn bound_u(xs: &BTreeSet<Ordinal>, alpha: &Ordinal, m: usize, i: usize) -> Result<BoundReport> {
    if i == 0 {
        return Err(Error::Precondition("the bound needs i ≥ 1".into()));
    }
    let (c, d) = c_and_d(xs, alpha, m);
    let im = (i * m) as u128;
    let bound = (c as u128 + im)
        .checked_pow(m as u32 + 1)
        .and_then(|x| x.checked_mul(im + 1))
        .and_then(|x| x.checked_mul(d as u128))
        .ok_or_else(|| Error::Overflow("U_m bound exceeds 128 bits".into()))?;
    let size = u_iter_set_checked(xs, alpha, m, i)?.len();
    Ok(BoundReport {
        m,
        i,
        c,
        d,
        bound,
        size,
        holds: size as u128 <= bound,
    })
}

fn check_compatible(v: &AlphaWord, params: &[AlphaWord], phi: &RelationFamily) -> Result<()> {
    let base = phi.base();
    for w in params.iter().chain(std::iter::once(v)) {
        if !w.alphabet().same_base(&base) || w.alphabet().arity() != 1 {
            return Err(Error::AlphabetMismatch(format!("{w} is not over the base of Φ")));
        }
        if w.length() != v.length() {
            return Err(Error::Word(format!("{w} and {v} have different lengths")));
        }
    }
    Ok(())
}

/// All index tuples of `E^p`.
fn param_tuples(e: usize, p: usize) -> Vec<Vec<usize>> {
    (0..p).fold(vec![Vec::new()], |acc, _| {
        acc.into_iter()
            .flat_map(|t| {
                (0..e).map(move |i| {
                    let mut t = t.clone();
                    t.push(i);
                    t
                })
            })
            .collect()
    })
}

/// Membership of `v ⊗ ē` in every automaton of `Φ`, for every `ē ∈ E^p`.
pub fn signature(v: &AlphaWord, params: &[AlphaWord], phi: &RelationFamily) -> Result<Vec<bool>> {
    check_compatible(v, params, phi)?;
    let mut out = Vec::new();
    for t in param_tuples(params.len(), phi.params) {
        let mut words = vec![v];
        words.extend(t.iter().map(|&i| &params[i]));
        let w = AlphaWord::convolve(&words)?;
        for a in &phi.automata {
            out.push(member(a, &w.with_alphabet(a.alphabet().clone())?)?);
        }
    }
    Ok(out)
}

/// `v ∼^Φ_E w`.
pub fn equiv(v: &AlphaWord, w: &AlphaWord, params: &[AlphaWord], phi: &RelationFamily) -> Result<bool> {
    Ok(signature(v, params, phi)? == signature(w, params, phi)?)
}

/// Groups `items` by key, classes ordered by first member. Keys are
/// computed in parallel.
pub fn classes_by_key<T, K, F>(items: &[T], key: F) -> Result<Vec<Vec<usize>>>
where
    T: Sync,
    K: Eq + Hash + Send,
    F: Fn(&T) -> Result<K> + Sync,
{
    let keys: Vec<K> = items.par_iter().map(&key).collect::<Result<_>>()?;
    let mut index: HashMap<K, usize> = HashMap::new();
    let mut classes: Vec<Vec<usize>> = Vec::new();
    for (i, k) in keys.into_iter().enumerate() {
        let c = *index.entry(k).or_insert_with(|| {
            classes.push(Vec::new());
            classes.len() - 1
        });
        classes[c].push(i);
    }
    Ok(classes)
}

/// The family `F` through which free sets are measured.
#[derive(Clone)]
pub enum Family {
    /// Every subset; `|G↾F| = |G|`.
    AllSubsets,
    /// An explicit list of sets.
    Explicit { name: String, sets: Vec<Vec<AlphaWord>> },
    /// The subsets satisfying a predicate, e.g. antichains of an order.
    Predicate {
        name: String,
        pred: Arc<dyn Fn(&[AlphaWord]) -> bool + Send + Sync>,
    },
}

impl Family {
    pub fn name(&self) -> &str {
        match self {
            Family::AllSubsets => "all subsets",
            Family::Explicit { name, .. } | Family::Predicate { name, .. } => name,
        }
    }
}

const CHOICE_BUDGET: u64 = 1 << 20;
const SUBSET_LIMIT: usize = 20;

/// `min` over representative choices of `max{|F| : F ∈ family, F ⊆ G}`,
/// where `G` picks one member of each class.
fn nu_from_classes(words: &[AlphaWord], classes: &[Vec<usize>], family: &Family) -> Result<usize> {
    let mut class_of = vec![0; words.len()];
    for (c, members) in classes.iter().enumerate() {
        for &i in members {
            class_of[i] = c;
        }
    }
    match family {
        Family::AllSubsets => Ok(classes.len()),
        Family::Explicit { sets, .. } => {
            let pos: HashMap<&AlphaWord, usize> =
                words.iter().enumerate().map(|(i, w)| (w, i)).collect();
            // Sets that can lie inside some G: members in the universe,
            // pairwise in distinct classes.
            let mut cands: Vec<Vec<usize>> = Vec::new();
            for s in sets {
                let idx: Option<BTreeSet<usize>> = s.iter().map(|w| pos.get(w).copied()).collect();
                let Some(idx) = idx else { continue };
                let cls: BTreeSet<usize> = idx.iter().map(|&i| class_of[i]).collect();
                if cls.len() == idx.len() {
                    cands.push(idx.into_iter().collect());
                }
            }
            let mut sizes: Vec<usize> = cands.iter().map(Vec::len).collect();
            sizes.push(0);
            sizes.sort_unstable();
            sizes.dedup();
            for t in sizes {
                let over: Vec<&Vec<usize>> = cands.iter().filter(|f| f.len() > t).collect();
                if avoidable(&over, classes, &class_of)? {
                    return Ok(t);
                }
            }
            unreachable!("the largest size is always feasible")
        }
        Family::Predicate { pred, .. } => {
            let choices: u64 = classes
                .iter()
                .try_fold(1u64, |acc, c| acc.checked_mul(c.len() as u64))
                .filter(|&n| n <= CHOICE_BUDGET)
                .ok_or_else(|| Error::Resource("too many representative choices".into()))?;
            if classes.len() > SUBSET_LIMIT {
                return Err(Error::Resource(format!(
                    "predicate families need at most {SUBSET_LIMIT} classes"
                )));
            }
            let mut best = usize::MAX;
            for mut code in 0..choices {
                let g: Vec<AlphaWord> = classes
                    .iter()
                    .map(|c| {
                        let pick = c[(code % c.len() as u64) as usize];
                        code /= c.len() as u64;
                        words[pick].clone()
                    })
                    .collect();
                let mut top = 0;
                for mask in 0u32..1 << g.len() {
                    let size = mask.count_ones() as usize;
                    if size <= top {
                        continue;
                    }
                    let f: Vec<AlphaWord> = (0..g.len())
                        .filter(|i| mask >> i & 1 == 1)
                        .map(|i| g[i].clone())
                        .collect();
                    if pred(&f) {
                        top = size;
                    }
                }
                best = best.min(top);
            }
            Ok(best)
        }
    }
}

/// Whether representatives can be chosen so that no set in `over` is
/// entirely chosen.
fn avoidable(over: &[&Vec<usize>], classes: &[Vec<usize>], class_of: &[usize]) -> Result<bool> {
    // Only classes touched by some set matter.
    let touched: Vec<usize> = over
        .iter()
        .flat_map(|f| f.iter().map(|&i| class_of[i]))
        .collect::<BTreeSet<_>>()
        .into_iter()
        .collect();
    let mut chosen: HashMap<usize, usize> = HashMap::new();
    let mut budget = CHOICE_BUDGET * 16;
    fn violated(over: &[&Vec<usize>], class_of: &[usize], chosen: &HashMap<usize, usize>) -> bool {
        over.iter()
            .any(|f| f.iter().all(|&i| chosen.get(&class_of[i]) == Some(&i)))
    }
    fn go(
        k: usize,
        touched: &[usize],
        over: &[&Vec<usize>],
        classes: &[Vec<usize>],
        class_of: &[usize],
        chosen: &mut HashMap<usize, usize>,
        budget: &mut u64,
    ) -> Result<bool> {
        if *budget == 0 {
            return Err(Error::Resource("representative search budget exhausted".into()));
        }
        *budget -= 1;
        if violated(over, class_of, chosen) {
            return Ok(false);
        }
        let Some(&c) = touched.get(k) else {
            return Ok(true);
        };
        for &i in &classes[c] {
            chosen.insert(c, i);
            if go(k + 1, touched, over, classes, class_of, chosen, budget)? {
                return Ok(true);
            }
        }
        chosen.remove(&c);
        Ok(false)
    }
    go(0, &touched, over, classes, class_of, &mut chosen, &mut budget)
}

/// A maximal `E`-`Φ`-free subset of a finite universe and the resulting `ν`.
#[derive(Clone, Debug, Serialize)]
pub struct FreeSetReport {
    pub params: Vec<AlphaWord>,
    /// Greedy representatives, in `⊑` order.
    pub free_set: Vec<AlphaWord>,
    pub classes: usize,
    pub family: String,
    pub nu: usize,
}

/// Scans the universe in `⊑` order keeping the first word of each
/// `∼^Φ_E` class. Maximality is relative to the universe.
pub fn maximal_free_set(
    universe: &[AlphaWord],
    params: &[AlphaWord],
    phi: &RelationFamily,
    family: &Family,
) -> Result<FreeSetReport> {
    let mut words: Vec<AlphaWord> = universe.to_vec();
    words.sort_by(wellorder_cmp);
    words.dedup();
    let classes = classes_by_key(&words, |w| signature(w, params, phi))?;
    let nu = nu_from_classes(&words, &classes, family)?;
    Ok(FreeSetReport {
        params: params.to_vec(),
        free_set: classes.iter().map(|c| words[c[0]].clone()).collect(),
        classes: classes.len(),
        family: family.name().to_string(),
        nu,
    })
}

/// `ν^Φ_F(E)` relative to the universe.
pub fn nu_of_e(
    universe: &[AlphaWord],
    params: &[AlphaWord],
    phi: &RelationFamily,
    family: &Family,
) -> Result<usize> {
    Ok(maximal_free_set(universe, params, phi, family)?.nu)
}

fn segment_relations(phi: &RelationFamily, seg: &AlphaWord) -> Result<Vec<Relation>> {
    let base = Arc::new(phi.base());
    let blank = AlphaWord::blank(base, seg.length().clone());
    let mut words = vec![seg];
    words.extend(std::iter::repeat(&blank).take(phi.params));
    let w = AlphaWord::convolve(&words)?;
    phi.automata
        .iter()
        .map(|a| run_relation(a, &w.with_alphabet(a.alphabet().clone())?))
        .collect()
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShrinkOutcome {
    pub word: AlphaWord,
    pub n1: u64,
    pub n2: u64,
}

/// Cuts `[γ + ω^n·n₁, γ + ω^n·n₂)` out of `v`, where `n₁ < n₂ ≤ k` is the
/// first pair whose run summaries on `v↾[γ, γ + ω^n·j) ⊗ ◇` agree.
pub fn shrink_gap(
    v: &AlphaWord,
    params: &[AlphaWord],
    phi: &RelationFamily,
    n: usize,
    gamma: &Ordinal,
    k: u64,
) -> Result<ShrinkOutcome> {
    check_compatible(v, params, phi)?;
    let alpha = v.length();
    let unit = Ordinal::omega_pow(n);
    let end = gamma.checked_add(&Ordinal::omega_pow(n + 1))?;
    if &end > alpha {
        return Err(Error::Precondition(format!("{gamma} + ω^{} exceeds {alpha}", n + 1)));
    }
    for e in params {
        if let Some(p) = e.entries().range(gamma.clone()..end.clone()).next() {
            return Err(Error::Precondition(format!(
                "parameter {e} has support at {} inside the window",
                p.0
            )));
        }
    }
    let at = |j: u64| -> Result<Ordinal> { gamma.checked_add(&unit.mul_nat(j)?) };
    let states: Vec<usize> = phi.automata.iter().map(|a| a.num_states()).collect();
    let mut f: Vec<Relation> = states.iter().map(|&q| Relation::identity(q)).collect();
    let mut seen: HashMap<Vec<Relation>, u64> = HashMap::new();
    for j in 0..=k {
        if let Some(&n1) = seen.get(&f) {
            let word = v.restrict(&Ordinal::zero(), &at(n1)?)?
                .concat(&v.restrict(&at(j)?, alpha)?)?;
            return Ok(ShrinkOutcome { word, n1, n2: j });
        }
        seen.insert(f.clone(), j);
        let seg = v.restrict(&at(j)?, &at(j + 1)?)?;
        f = f
            .iter()
            .zip(segment_relations(phi, &seg)?)
            .map(|(r, s)| r.then(&s))
            .collect();
    }
    Err(Error::Precondition(format!(
        "no repeated run summary among the first {} blocks",
        k.saturating_add(1)
    )))
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum StepKind {
    Shrink { n: usize, gamma: Ordinal, n1: u64, n2: u64 },
    Surgery {
        gamma: Ordinal,
        delta: Ordinal,
        delta_prime: Ordinal,
        eta: Ordinal,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizeStep {
    pub beta: Ordinal,
    pub outside_before: usize,
    pub outside_after: usize,
    pub beta_after: Option<Ordinal>,
    #[serde(flatten)]
    pub kind: StepKind,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NormalizeReport {
    /// The neighbourhood radius used: `K`, or the caller's `m`.
    pub radius: u64,
    /// Whether the radius is at least `K`, so equivalence is guaranteed.
    pub guaranteed: bool,
    pub word: AlphaWord,
    pub steps: Vec<NormalizeStep>,
}

const MAX_NORMALIZE_STEPS: usize = 100_000;

/// Moves the support of `v` into `U_K(supp(E), α)` without leaving its
/// `∼^Φ_E` class. With `radius = Some(m)` the neighbourhood `U_m` is used
/// instead; below `K` the result is not guaranteed equivalent.
pub fn normalize(
    v: &AlphaWord,
    params: &[AlphaWord],
    phi: &RelationFamily,
    radius: Option<u64>,
) -> Result<NormalizeReport> {
    check_compatible(v, params, phi)?;
    let k_full = k_saturating(phi);
    let k = radius.unwrap_or(k_full);
    let alpha = v.length().clone();
    let xs: BTreeSet<Ordinal> = params.iter().flat_map(|e| e.support()).collect();
    let outside = |w: &AlphaWord| -> Vec<Ordinal> {
        w.support()
            .into_iter()
            .filter(|g| !u_set_contains(g, &xs, &alpha, k))
            .collect()
    };
    let mut w = v.clone();
    let mut steps = Vec::new();
    let mut out = outside(&w);
    while let Some(beta) = out.first().cloned() {
        if steps.len() >= MAX_NORMALIZE_STEPS {
            return Err(Error::Resource("normalization step limit reached".into()));
        }
        let (next, kind) = match shrink_window(&beta, &xs, &alpha, k) {
            Some((n, gamma)) => {
                let s = shrink_gap(&w, params, phi, n, &gamma, k)?;
                (s.word, StepKind::Shrink { n, gamma, n1: s.n1, n2: s.n2 })
            }
            None => surgery(&w, params, &beta, &alpha, k)?,
        };
        let after = outside(&next);
        let progress = after.len() < out.len() || (after.len() == out.len() && after[0] < beta);
        if !progress {
            return Err(Error::Precondition(format!(
                "normalization made no progress at β = {beta}"
            )));
        }
        steps.push(NormalizeStep {
            beta,
            outside_before: out.len(),
            outside_after: after.len(),
            beta_after: after.first().cloned(),
            kind,
        });
        w = next;
        out = after;
    }
    Ok(NormalizeReport {
        radius: k,
        guaranteed: k >= k_full,
        word: w,
        steps,
    })
}

/// The first `n` for which `β`'s block window is free of parameters and
/// of `α`, with the window start `ε₁`.
fn shrink_window(
    beta: &Ordinal,
    xs: &BTreeSet<Ordinal>,
    alpha: &Ordinal,
    k: u64,
) -> Option<(usize, Ordinal)> {
    let deg = beta.degree()?;
    let top = usize::try_from(k).map_or(deg, |k| k.min(deg));
    (0..=top).find_map(|n| {
        let bn = beta.coeff(n);
        if bn.checked_add(1)? < k {
            return None;
        }
        let mut c1: Vec<u64> = beta.coeffs().to_vec();
        c1[..n].iter_mut().for_each(|x| *x = 0);
        c1[n] = bn + 1 - k;
        let mut c2 = c1.clone();
        c2.resize(c2.len().max(n + 2), 0);
        c2[n] = 0;
        c2[n + 1] += 1;
        let (e1, e2) = (Ordinal::from_coeffs(c1), Ordinal::from_coeffs(c2));
        let blocked = xs.iter().chain(std::iter::once(alpha)).any(|x| &e1 <= x && x < &e2);
        (!blocked).then_some((n, e1))
    })
}

/// The countable-cofinality splice, moving the letters of
/// `[β_{~K}, δ')` down next to the last earlier support position.
fn surgery(
    v: &AlphaWord,
    params: &[AlphaWord],
    beta: &Ordinal,
    alpha: &Ordinal,
    k: u64,
) -> Result<(AlphaWord, StepKind)> {
    let kk = usize::try_from(k).map_err(|_| Error::Overflow("K exceeds the address space".into()))?;
    if (0..=kk.min(beta.coeffs().len())).any(|i| beta.coeff(i) >= k) {
        return Err(Error::Precondition(format!(
            "β = {beta} fits neither normalization case"
        )));
    }
    let beta_k = beta.truncation(kk);
    if beta_k.is_zero() {
        return Err(Error::Precondition(format!(
            "β = {beta} lies in U_K(0); the minimal outside position is wrong"
        )));
    }
    let below = |w: &AlphaWord, bound: &Ordinal| w.entries().range(..bound.clone()).next_back().map(|(p, _)| p.clone());
    let gamma = params
        .iter()
        .chain(std::iter::once(v))
        .filter_map(|w| below(w, &beta_k))
        .max()
        .map_or(Ordinal::zero(), |p| p.succ());
    let delta = params
        .iter()
        .filter_map(|e| e.entries().range(beta.clone()..).next().map(|(p, _)| p.clone()))
        .filter(|p| p < alpha)
        .min()
        .unwrap_or_else(|| alpha.clone());
    let delta_k = delta.truncation(kk);
    let delta_prime = below(v, &delta_k)
        .map(|p| p.succ())
        .ok_or_else(|| Error::Precondition("no support below δ_{~K}".into()))?;
    if !(gamma <= beta_k && beta_k <= delta_prime && delta_prime <= delta_k) {
        return Err(Error::Precondition(format!(
            "surgery bounds out of order: γ = {gamma}, β_~K = {beta_k}, δ' = {delta_prime}, δ_~K = {delta_k}"
        )));
    }
    let block = Ordinal::omega_pow(kk);
    let moved = Ordinal::interval_type(&beta_k, &delta_prime)?;
    let target = Ordinal::interval_type(&gamma, &delta_k)?;
    let eta = Ordinal::interval_type(&block.checked_add(&moved)?, &target)?;
    let base = v.alphabet().clone();
    let word = AlphaWord::concat_all([
        &v.restrict(&Ordinal::zero(), &gamma)?,
        &AlphaWord::blank(base.clone(), block),
        &v.restrict(&beta_k, &delta_prime)?,
        &AlphaWord::blank(base, eta.clone()),
        &v.restrict(&delta_k, alpha)?,
    ])?;
    Ok((
        word,
        StepKind::Surgery {
            gamma,
            delta,
            delta_prime,
            eta,
        },
    ))
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthRow {
    pub n: u64,
    /// `m = |T_n|`, the parameter count.
    pub m: usize,
    pub nu: usize,
    pub universe: usize,
    /// `ν(m) / m`.
    pub ratio: f64,
    /// `m^c`.
    pub m_pow_c: f64,
    pub within_power: bool,
    /// For each linear constant `k`: whether `ν(m) > m·k`.
    pub exceeds_linear: BTreeMap<u64, bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct RadoRow {
    pub n: usize,
    pub window: usize,
    pub universe: usize,
    pub parameter_sets: usize,
    pub nu: usize,
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct GrowthReport {
    pub c: f64,
    pub ks: Vec<u64>,
    pub section6: Vec<GrowthRow>,
    pub rado: Vec<RadoRow>,
}

/// `ν(T_n)` in the ω²-structure over the universe `T_n ∪ T_{n+1} ∪ {◇}`,
/// through the family `{T_0, T_1, …}`.
pub fn section6_nu(n: u64) -> Result<FreeSetReport> {
    let phi = RelationFamily::new(section6_phi()?)?;
    let params = tn_words(n);
    let next = tn_words(n + 1);
    let mut universe = params.clone();
    universe.extend(next.iter().cloned());
    universe.push(AlphaWord::blank(
        crate::examples::sigma_ab(),
        Ordinal::omega_pow(2),
    ));
    let family = Family::Explicit {
        name: "T_k".into(),
        sets: (0..=n + 1).map(tn_words).collect(),
    };
    maximal_free_set(&universe, &params, &phi, &family)
}

/// Bit graph on ℕ: `x < y` are adjacent iff bit `x` of `y` is set. It is
/// isomorphic to the random graph.
pub fn bit_edge(x: u64, y: u64) -> bool {
    let (lo, hi) = (x.min(y), x.max(y));
    lo != hi && lo < 64 && hi >> lo & 1 == 1
}

/// `ν(n)` of the bit graph with the edge relation, minimised over all
/// `n`-element parameter sets inside `[0, n+1)` and measured on the nodes
/// below `2^{n+2}`.
pub fn rado_nu(n: usize) -> Result<RadoRow> {
    let window = n + 1;
    let universe: Vec<u64> = (0..1u64 << (window + 1)).collect();
    let subsets: Vec<Vec<u64>> = (0u64..1 << window)
        .filter(|m| m.count_ones() as usize == n)
        .map(|m| (0..window as u64).filter(|i| m >> i & 1 == 1).collect())
        .collect();
    let mut nu = usize::MAX;
    for e in &subsets {
        let classes = classes_by_key(&universe, |&x| Ok(e.iter().map(|&y| bit_edge(x, y)).collect::<Vec<_>>()))?;
        nu = nu.min(classes.len());
    }
    Ok(RadoRow {
        n,
        window,
        universe: universe.len(),
        parameter_sets: subsets.len(),
        nu,
    })
}

/// The ω²-structure's `ν(m)` against `m^c` and against `m·k`, plus the
/// bit-graph rows.
pub fn growth_bound_probe(ns: &[u64], c: f64, ks: &[u64], rado_max: usize) -> Result<GrowthReport> {
    let mut section6 = Vec::new();
    for &n in ns {
        let r = section6_nu(n)?;
        let m = r.params.len();
        let m_pow_c = (m as f64).powf(c);
        section6.push(GrowthRow {
            n,
            m,
            nu: r.nu,
            universe: r.classes,
            ratio: r.nu as f64 / m as f64,
            m_pow_c,
            within_power: r.nu as f64 <= m_pow_c,
            exceeds_linear: ks.iter().map(|&k| (k, r.nu as u64 > m as u64 * k)).collect(),
        });
    }
    let rado = (0..=rado_max).map(rado_nu).collect::<Result<_>>()?;
    Ok(GrowthReport {
        c,
        ks: ks.to_vec(),
        section6,
        rado,
    })
}

/// All words of length `alpha` with support inside `positions`.
pub fn words_supported_in(
    alphabet: &Arc<Alphabet>,
    alpha: &Ordinal,
    positions: &BTreeSet<Ordinal>,
    limit: usize,
) -> Result<Vec<AlphaWord>> {
    let symbols: Vec<_> = alphabet.symbols().collect();
    let total = (symbols.len() as u128).checked_pow(positions.len() as u32);
    if total.is_none_or(|t| t > limit as u128) {
        return Err(Error::Resource(format!(
            "{}^{} words exceed the enumeration limit {limit}",
            symbols.len(),
            positions.len()
        )));
    }
    let pos: Vec<&Ordinal> = positions.iter().filter(|p| *p < alpha).collect();
    let mut out = vec![Vec::new()];
    for p in pos {
        out = out
            .into_iter()
            .flat_map(|e: Vec<(Ordinal, _)>| {
                symbols.iter().map(move |&s| {
                    let mut e = e.clone();
                    if s != alphabet.blank() {
                        e.push((p.clone(), s));
                    }
                    e
                })
            })
            .collect();
    }
    out.into_iter()
        .map(|e| AlphaWord::new(alphabet.clone(), alpha.clone(), e))
        .collect()
}

/// `ψ(x, p)`: `x ↦ (a, b) ↦ ax + b` is injective on elements supported in `p`.
pub const PSI: &str = "(forall a1 (forall a2 (forall b1 (forall b2 \
    (-> (and (Sub a1 p) (Sub a2 p) (Sub b1 p) (Sub b2 p) \
             (exists t1 (exists t2 (exists s (and (Mul a1 x t1) (Mul a2 x t2) (Add t1 b1 s) (Add t2 b2 s)))))) \
        (and (= a1 a2) (= b1 b2)))))))";

fn psi_of(x: &str) -> String {
    PSI.replace(" x ", &format!(" {x} "))
}

/// `ψ_min(x, p)`: the `⊑`-least solution of `ψ`.
pub fn psi_min() -> String {
    format!(
        "(and {} (forall y (-> {} (Leq x y))))",
        psi_of("x"),
        psi_of("y")
    )
}

/// `φ(p, a, b, c)`: `c = ax + b` for the `ψ_min` element `x`.
pub fn phi_formula() -> String {
    format!(
        "(and (Sub a p) (Sub b p) (exists x (and {} (exists t (and (Mul a x t) (Add t b c))))))",
        psi_min()
    )
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquaringStep {
    pub step: usize,
    pub support: BTreeSet<Ordinal>,
    /// `|D_X|`: elements supported in `X`.
    pub d_x: usize,
    /// `|F_X|`: values `c` of `φ(p_X, a, b, c)`, all supported in `U_m(X, α)`.
    pub f_x: usize,
    /// Elements supported in `U_m(X, α)`.
    pub u_count: usize,
    /// `u_count ≥ d_x²`.
    pub squaring_holds: bool,
    /// `f_x ≥ d_x²`.
    pub injective_holds: bool,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SquaringReport {
    pub m: usize,
    pub steps: Vec<SquaringStep>,
    /// `|F_i|` for `F_i` the elements supported in `U_m^i(X, α)`.
    pub growth: Vec<usize>,
    /// `|F_{i+1}| ≥ |F_i|²` for each consecutive pair.
    pub growth_squares: Vec<bool>,
}

const ENUMERATION_LIMIT: usize = 1 << 20;

/// Runs the squaring argument on a ring presentation with relations `Add`,
/// `Mul`, `Leq` (the order `⊑`) and `Sub` (`⊆_supp`).
pub fn squaring_experiment(
    p: &Presentation,
    xs: &BTreeSet<Ordinal>,
    m: usize,
    steps: usize,
) -> Result<SquaringReport> {
    for (name, arity) in [("Add", 3), ("Mul", 3), ("Leq", 2), ("Sub", 2)] {
        if p.signature().get(name) != Some(&arity) {
            return Err(Error::Precondition(format!(
                "ring presentation needs relation {name}/{arity}"
            )));
        }
    }
    let alphabet = p.base_alphabet().clone();
    let alpha = &p.alpha;
    let marker = alphabet
        .letters()
        .next()
        .ok_or_else(|| Error::Precondition("alphabet has no letters".into()))?;
    let chi = parse_formula(&format!("(exists a (exists b {}))", phi_formula()))?;
    let (vars, values) = p.compile_with(&chi, &["p"])?;
    debug_assert_eq!(vars, ["c", "p"]);
    let elements = |support: &BTreeSet<Ordinal>| -> Result<Vec<AlphaWord>> {
        words_supported_in(&alphabet, alpha, support, ENUMERATION_LIMIT)?
            .into_iter()
            .filter_map(|w| match member(&p.domain, &w) {
                Ok(true) => Some(Ok(w)),
                Ok(false) => None,
                Err(e) => Some(Err(e)),
            })
            .collect()
    };
    let mut out = Vec::new();
    let mut growth = Vec::new();
    let mut x = xs.clone();
    for step in 0..=steps {
        let px = AlphaWord::new(alphabet.clone(), alpha.clone(), x.iter().map(|g| (g.clone(), marker)))?;
        let d_x = elements(&x)?.len();
        let u = u_set(&x, alpha, m);
        let in_u = elements(&u)?;
        let mut f_x = 0;
        for c in &in_u {
            if values.accepts(&AlphaWord::convolve(&[c, &px])?)? {
                f_x += 1;
            }
        }
        growth.push(d_x);
        out.push(SquaringStep {
            step,
            support: x.clone(),
            d_x,
            f_x,
            u_count: in_u.len(),
            squaring_holds: in_u.len() >= d_x * d_x,
            injective_holds: f_x >= d_x * d_x,
        });
        x = u;
    }
    let growth_squares = growth.windows(2).map(|w| w[1] >= w[0] * w[0]).collect();
    Ok(SquaringReport {
        m,
        steps: out,
        growth,
        growth_squares,
    })
}
