//! First-order formulas over α-automatic presentations and their
//! compilation to gap automata.
//!
//! A formula with free variables `x_1 < … < x_k` (lexicographic) compiles to
//! a gap automaton over `Σ^k` reading the convolution of the assignment.
//! Intermediate results are exact only on tuples whose components lie in
//! the domain; quantifiers range over the domain and the final result is
//! intersected with it.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use serde::{Deserialize, Serialize};

use crate::automaton::{AutomatonFile, OrdinalAutomaton};
use crate::error::{Error, Result};
use crate::gapcode::{GapNfa, GapSpace};
use crate::ordinal::Ordinal;
use crate::semantics::member;
use crate::word::{AlphaWord, Alphabet};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub enum Formula {
    Rel(String, Vec<String>),
    Eq(String, String),
    Not(Box<Formula>),
    And(Box<Formula>, Box<Formula>),
    Or(Box<Formula>, Box<Formula>),
    Implies(Box<Formula>, Box<Formula>),
    Exists(String, Box<Formula>),
    Forall(String, Box<Formula>),
}

impl Formula {
    pub fn not(f: Formula) -> Formula {
        Formula::Not(Box::new(f))
    }

    pub fn and(a: Formula, b: Formula) -> Formula {
        Formula::And(Box::new(a), Box::new(b))
    }

    pub fn or(a: Formula, b: Formula) -> Formula {
        Formula::Or(Box::new(a), Box::new(b))
    }

    pub fn implies(a: Formula, b: Formula) -> Formula {
        Formula::Implies(Box::new(a), Box::new(b))
    }

    pub fn exists(x: &str, f: Formula) -> Formula {
        Formula::Exists(x.to_string(), Box::new(f))
    }

    pub fn forall(x: &str, f: Formula) -> Formula {
        Formula::Forall(x.to_string(), Box::new(f))
    }

    pub fn rel(name: &str, vars: &[&str]) -> Formula {
        Formula::Rel(name.to_string(), vars.iter().map(|v| v.to_string()).collect())
    }

    pub fn eq(x: &str, y: &str) -> Formula {
        Formula::Eq(x.to_string(), y.to_string())
    }

    pub fn free_vars(&self) -> BTreeSet<String> {
        let mut out = BTreeSet::new();
        self.collect_free(&mut Vec::new(), &mut out);
        out
    }

    fn collect_free(&self, bound: &mut Vec<String>, out: &mut BTreeSet<String>) {
        let mut add = |v: &String, bound: &Vec<String>| {
            if !bound.contains(v) {
                out.insert(v.clone());
            }
        };
        match self {
            Formula::Rel(_, vs) => vs.iter().for_each(|v| add(v, bound)),
            Formula::Eq(x, y) => {
                add(x, bound);
                add(y, bound);
            }
            Formula::Not(f) => f.collect_free(bound, out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.collect_free(bound, out);
                b.collect_free(bound, out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                bound.push(x.clone());
                f.collect_free(bound, out);
                bound.pop();
            }
        }
    }

    fn all_vars(&self, out: &mut BTreeSet<String>) {
        match self {
            Formula::Rel(_, vs) => out.extend(vs.iter().cloned()),
            Formula::Eq(x, y) => {
                out.insert(x.clone());
                out.insert(y.clone());
            }
            Formula::Not(f) => f.all_vars(out),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.all_vars(out);
                b.all_vars(out);
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                out.insert(x.clone());
                f.all_vars(out);
            }
        }
    }

    /// Replaces free occurrences of `from` by `to`.
    fn rename_free(&self, from: &str, to: &str) -> Formula {
        let r = |v: &String| {
            if v == from {
                to.to_string()
            } else {
                v.clone()
            }
        };
        match self {
            Formula::Rel(n, vs) => Formula::Rel(n.clone(), vs.iter().map(r).collect()),
            Formula::Eq(x, y) => Formula::Eq(r(x), r(y)),
            Formula::Not(f) => Formula::not(f.rename_free(from, to)),
            Formula::And(a, b) => Formula::and(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Or(a, b) => Formula::or(a.rename_free(from, to), b.rename_free(from, to)),
            Formula::Implies(a, b) => {
                Formula::implies(a.rename_free(from, to), b.rename_free(from, to))
            }
            Formula::Exists(x, _) | Formula::Forall(x, _) if x == from => self.clone(),
            Formula::Exists(x, f) => Formula::exists(x, f.rename_free(from, to)),
            Formula::Forall(x, f) => Formula::forall(x, f.rename_free(from, to)),
        }
    }

    pub fn is_quantifier_free(&self) -> bool {
        match self {
            Formula::Rel(..) | Formula::Eq(..) => true,
            Formula::Not(f) => f.is_quantifier_free(),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.is_quantifier_free() && b.is_quantifier_free()
            }
            Formula::Exists(..) | Formula::Forall(..) => false,
        }
    }

    /// Checks relation names and arities against a signature and that no
    /// variable is bound twice along a path.
    pub fn check(&self, signature: &BTreeMap<String, usize>) -> Result<()> {
        self.check_in(signature, &mut Vec::new())
    }

    fn check_in(&self, sig: &BTreeMap<String, usize>, bound: &mut Vec<String>) -> Result<()> {
        match self {
            Formula::Rel(name, vs) => match sig.get(name) {
                None => Err(Error::Formula(format!("unknown relation {name}"))),
                Some(&k) if k != vs.len() => Err(Error::Formula(format!(
                    "relation {name} has arity {k}, applied to {} variables",
                    vs.len()
                ))),
                Some(_) => Ok(()),
            },
            Formula::Eq(..) => Ok(()),
            Formula::Not(f) => f.check_in(sig, bound),
            Formula::And(a, b) | Formula::Or(a, b) | Formula::Implies(a, b) => {
                a.check_in(sig, bound)?;
                b.check_in(sig, bound)
            }
            Formula::Exists(x, f) | Formula::Forall(x, f) => {
                if bound.contains(x) {
                    return Err(Error::Formula(format!(
                        "variable {x} is bound twice on one path"
                    )));
                }
                bound.push(x.clone());
                let r = f.check_in(sig, bound);
                bound.pop();
                r
            }
        }
    }
}

impl fmt::Display for Formula {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Formula::Rel(n, vs) => write!(f, "({n} {})", vs.join(" ")),
            Formula::Eq(x, y) => write!(f, "(= {x} {y})"),
            Formula::Not(a) => write!(f, "(not {a})"),
            Formula::And(a, b) => write!(f, "(and {a} {b})"),
            Formula::Or(a, b) => write!(f, "(or {a} {b})"),
            Formula::Implies(a, b) => write!(f, "(-> {a} {b})"),
            Formula::Exists(x, a) => write!(f, "(exists {x} {a})"),
            Formula::Forall(x, a) => write!(f, "(forall {x} {a})"),
        }
    }
}

enum Sexp {
    Atom(String, usize),
    List(Vec<Sexp>, usize),
}

fn read_sexp(text: &str) -> Result<Sexp> {
    let chars: Vec<(usize, char)> = text.char_indices().collect();
    let mut i = 0;
    fn skip_ws(chars: &[(usize, char)], i: &mut usize) {
        while *i < chars.len() && chars[*i].1.is_whitespace() {
            *i += 1;
        }
    }
    fn offset(chars: &[(usize, char)], i: usize, len: usize) -> usize {
        chars.get(i).map_or(len, |c| c.0)
    }
    fn read(chars: &[(usize, char)], i: &mut usize, len: usize) -> Result<Sexp> {
        skip_ws(chars, i);
        let start = offset(chars, *i, len);
        match chars.get(*i).map(|c| c.1) {
            None => Err(Error::syntax(start, "unexpected end of formula")),
            Some('(') => {
                *i += 1;
                let mut items = Vec::new();
                loop {
                    skip_ws(chars, i);
                    match chars.get(*i).map(|c| c.1) {
                        None => return Err(Error::syntax(len, "unclosed parenthesis")),
                        Some(')') => {
                            *i += 1;
                            return Ok(Sexp::List(items, start));
                        }
                        _ => items.push(read(chars, i, len)?),
                    }
                }
            }
            Some(')') => Err(Error::syntax(start, "unexpected ')'")),
            Some(_) => {
                let mut s = String::new();
                while let Some(&(_, c)) = chars.get(*i) {
                    if c.is_whitespace() || c == '(' || c == ')' {
                        break;
                    }
                    s.push(c);
                    *i += 1;
                }
                Ok(Sexp::Atom(s, start))
            }
        }
    }
    let e = read(&chars, &mut i, text.len())?;
    skip_ws(&chars, &mut i);
    if i < chars.len() {
        return Err(Error::syntax(chars[i].0, "trailing input after formula"));
    }
    Ok(e)
}

fn is_keyword(s: &str) -> bool {
    matches!(s, "forall" | "exists" | "and" | "or" | "not" | "->" | "=")
}

fn to_formula(e: &Sexp) -> Result<Formula> {
    let (items, at) = match e {
        Sexp::Atom(s, at) => return Err(Error::syntax(*at, format!("expected '(' before {s:?}"))),
        Sexp::List(items, at) => (items, *at),
    };
    let var = |e: &Sexp| -> Result<String> {
        match e {
            Sexp::Atom(s, at) if is_keyword(s) => {
                Err(Error::syntax(*at, format!("keyword {s:?} used as a variable")))
            }
            Sexp::Atom(s, _) => Ok(s.clone()),
            Sexp::List(_, at) => Err(Error::syntax(*at, "expected a variable")),
        }
    };
    let head = match items.first() {
        Some(Sexp::Atom(h, _)) => h.as_str(),
        Some(Sexp::List(_, at)) => return Err(Error::syntax(*at, "expected an operator")),
        None => return Err(Error::syntax(at, "empty formula")),
    };
    let args = &items[1..];
    let arity = |n: usize| -> Result<()> {
        if args.len() == n {
            Ok(())
        } else {
            Err(Error::syntax(at, format!("{head} takes {n} arguments")))
        }
    };
    match head {
        "forall" | "exists" => {
            arity(2)?;
            let x = var(&args[0])?;
            let body = to_formula(&args[1])?;
            Ok(if head == "forall" {
                Formula::Forall(x, Box::new(body))
            } else {
                Formula::Exists(x, Box::new(body))
            })
        }
        "and" | "or" => {
            if args.len() < 2 {
                return Err(Error::syntax(at, format!("{head} takes at least 2 arguments")));
            }
            let mut parts = args.iter().map(to_formula).collect::<Result<Vec<_>>>()?;
            let mut acc = parts.pop().expect("at least two parts");
            while let Some(p) = parts.pop() {
                acc = if head == "and" {
                    Formula::and(p, acc)
                } else {
                    Formula::or(p, acc)
                };
            }
            Ok(acc)
        }
        "not" => {
            arity(1)?;
            Ok(Formula::not(to_formula(&args[0])?))
        }
        "->" => {
            arity(2)?;
            Ok(Formula::implies(to_formula(&args[0])?, to_formula(&args[1])?))
        }
        "=" => {
            arity(2)?;
            Ok(Formula::Eq(var(&args[0])?, var(&args[1])?))
        }
        name => Ok(Formula::Rel(
            name.to_string(),
            args.iter().map(var).collect::<Result<_>>()?,
        )),
    }
}

/// Parses an s-expression formula (syntax only).
pub fn parse_formula(text: &str) -> Result<Formula> {
    to_formula(&read_sexp(text)?)
}

/// A named relation of a presentation.
#[derive(Clone, Debug)]
pub struct RelationEntry {
    pub arity: usize,
    pub automaton: OrdinalAutomaton,
}

/// An α-automatic presentation: domain, relations and equality.
#[derive(Clone, Debug)]
pub struct Presentation {
    pub alpha: Ordinal,
    pub domain: OrdinalAutomaton,
    pub relations: BTreeMap<String, RelationEntry>,
    /// `None` means letterwise equality (an injective presentation).
    pub equality: Option<OrdinalAutomaton>,
}

#[derive(Serialize, Deserialize)]
struct RelationFile {
    arity: usize,
    automaton: AutomatonFile,
}

#[derive(Serialize, Deserialize)]
#[serde(untagged)]
enum EqualityFile {
    Letterwise(String),
    Automaton(AutomatonFile),
}

#[derive(Serialize, Deserialize)]
struct PresentationFile {
    alpha: Ordinal,
    domain: AutomatonFile,
    relations: BTreeMap<String, RelationFile>,
    #[serde(default)]
    equality: Option<EqualityFile>,
}

impl Presentation {
    pub fn new(
        alpha: Ordinal,
        domain: OrdinalAutomaton,
        relations: BTreeMap<String, RelationEntry>,
        equality: Option<OrdinalAutomaton>,
    ) -> Result<Presentation> {
        let p = Presentation {
            alpha,
            domain,
            relations,
            equality,
        };
        p.validate()?;
        Ok(p)
    }

    fn validate(&self) -> Result<()> {
        let base = self.domain.alphabet();
        if base.arity() != 1 {
            return Err(Error::Automaton("domain automaton must be unary".into()));
        }
        for (name, r) in &self.relations {
            let a = r.automaton.alphabet();
            if !a.same_base(base) || a.arity() != r.arity {
                return Err(Error::AlphabetMismatch(format!(
                    "relation {name} is not over Σ^{}",
                    r.arity
                )));
            }
        }
        if let Some(eq) = &self.equality {
            if !eq.alphabet().same_base(base) || eq.alphabet().arity() != 2 {
                return Err(Error::AlphabetMismatch(
                    "equality automaton must be binary over the domain alphabet".into(),
                ));
            }
        }
        Ok(())
    }

    pub fn base_alphabet(&self) -> &Arc<Alphabet> {
        self.domain.alphabet()
    }

    pub fn signature(&self) -> BTreeMap<String, usize> {
        self.relations
            .iter()
            .map(|(n, r)| (n.clone(), r.arity))
            .collect()
    }

    pub fn from_json(text: &str) -> Result<Presentation> {
        let file: PresentationFile = serde_json::from_str(text)?;
        let relations = file
            .relations
            .into_iter()
            .map(|(name, r)| {
                let automaton = r.automaton.to_automaton()?;
                Ok((
                    name,
                    RelationEntry {
                        arity: r.arity,
                        automaton,
                    },
                ))
            })
            .collect::<Result<_>>()?;
        let equality = match file.equality {
            None => None,
            Some(EqualityFile::Letterwise(s)) if s == "letterwise" => None,
            Some(EqualityFile::Letterwise(s)) => {
                return Err(Error::Automaton(format!("unknown equality mode {s:?}")))
            }
            Some(EqualityFile::Automaton(a)) => Some(a.to_automaton()?),
        };
        Presentation::new(file.alpha, file.domain.to_automaton()?, relations, equality)
    }

    pub fn to_json(&self) -> String {
        let file = PresentationFile {
            alpha: self.alpha.clone(),
            domain: self.domain.to_file(),
            relations: self
                .relations
                .iter()
                .map(|(n, r)| {
                    (
                        n.clone(),
                        RelationFile {
                            arity: r.arity,
                            automaton: r.automaton.to_file(),
                        },
                    )
                })
                .collect(),
            equality: Some(match &self.equality {
                None => EqualityFile::Letterwise("letterwise".into()),
                Some(a) => EqualityFile::Automaton(a.to_file()),
            }),
        };
        serde_json::to_string_pretty(&file).expect("presentation serializes")
    }

    fn equality_automaton(&self) -> Result<OrdinalAutomaton> {
        match &self.equality {
            Some(a) => Ok(a.clone()),
            None => OrdinalAutomaton::equality(self.base_alphabet()),
        }
    }

    fn space(&self, arity: usize) -> Result<Arc<GapSpace>> {
        Ok(GapSpace::new(
            Arc::new(self.base_alphabet().power(arity)?),
            &self.alpha,
        ))
    }

    /// Domain membership of variable `i` of `vars`, as a gap automaton.
    fn domain_on(&self, vars: &[String], i: usize) -> Result<GapNfa> {
        let a = self.domain.cylindrify(vars.len(), &[i])?;
        GapNfa::from_automaton(&a, self.space(vars.len())?)
    }

    fn atom(&self, a: &OrdinalAutomaton, args: &[String], vars: &[String]) -> Result<GapNfa> {
        let map: Vec<usize> = args
            .iter()
            .map(|v| vars.binary_search(v).expect("atom variables are in scope"))
            .collect();
        let a = a.reindex(vars.len(), &map)?;
        GapNfa::from_automaton(&a, self.space(vars.len())?)
    }

    /// Compiles `f` over the sorted variable list `vars`, exact on tuples
    /// whose components all lie in the domain.
    fn compile_in(&self, f: &Formula, vars: &[String]) -> Result<GapNfa> {
        match f {
            Formula::Rel(name, args) => {
                let r = self
                    .relations
                    .get(name)
                    .ok_or_else(|| Error::Formula(format!("unknown relation {name}")))?;
                self.atom(&r.automaton, args, vars)
            }
            Formula::Eq(x, y) => self.atom(&self.equality_automaton()?, &[x.clone(), y.clone()], vars),
            Formula::Not(g) => self.compile_in(g, vars)?.complement(),
            Formula::And(a, b) => self
                .compile_in(a, vars)?
                .intersect(&self.compile_in(b, vars)?),
            Formula::Or(a, b) => self.compile_in(a, vars)?.union(&self.compile_in(b, vars)?),
            Formula::Implies(a, b) => self
                .compile_in(a, vars)?
                .complement()?
                .union(&self.compile_in(b, vars)?),
            Formula::Exists(x, g) => {
                let (x, g) = if vars.contains(x) {
                    let mut used = BTreeSet::new();
                    g.all_vars(&mut used);
                    used.extend(vars.iter().cloned());
                    let fresh = (1..)
                        .map(|k| format!("{x}#{k}"))
                        .find(|c| !used.contains(c))
                        .expect("fresh name exists");
                    (fresh.clone(), g.rename_free(x, &fresh))
                } else {
                    (x.clone(), (**g).clone())
                };
                let mut inner: Vec<String> = vars.to_vec();
                inner.push(x.clone());
                inner.sort();
                let i = inner.binary_search(&x).expect("just inserted");
                let body = self
                    .compile_in(&g, &inner)?
                    .intersect(&self.domain_on(&inner, i)?)?;
                body.project(i)
            }
            Formula::Forall(x, g) => self.compile_in(
                &Formula::not(Formula::exists(x, Formula::not((**g).clone()))),
                vars,
            ),
        }
    }

    /// Compiles `f` over its free variables (sorted), restricted to the
    /// domain except for the variables listed in `unrestricted`.
    pub fn compile_with(&self, f: &Formula, unrestricted: &[&str]) -> Result<(Vec<String>, GapNfa)> {
        f.check(&self.signature())?;
        let vars: Vec<String> = f.free_vars().into_iter().collect();
        let mut n = self.compile_in(f, &vars)?;
        for (i, v) in vars.iter().enumerate() {
            if !unrestricted.contains(&v.as_str()) {
                n = n.intersect(&self.domain_on(&vars, i)?)?;
            }
        }
        Ok((vars, n))
    }

    pub fn compile(&self, f: &Formula) -> Result<(Vec<String>, GapNfa)> {
        self.compile_with(f, &[])
    }

    /// Truth of a sentence.
    pub fn decide(&self, sentence: &Formula) -> Result<bool> {
        if !sentence.free_vars().is_empty() {
            return Err(Error::Formula(format!(
                "decide needs a sentence; free variables {:?}",
                sentence.free_vars()
            )));
        }
        Ok(self.compile(sentence)?.1.holds())
    }

    /// Elements satisfying `f`, one word per free variable.
    pub fn satisfying_tuple(&self, f: &Formula) -> Result<Option<Vec<(String, AlphaWord)>>> {
        let (vars, n) = self.compile(f)?;
        let Some(w) = n.witness()? else {
            return Ok(None);
        };
        let parts = if vars.is_empty() {
            Vec::new()
        } else {
            w.split()?
        };
        Ok(Some(vars.into_iter().zip(parts).collect()))
    }

    /// Witnesses for the outermost existential block of a sentence, each
    /// re-verified against the matrix.
    pub fn find_witness(&self, sentence: &Formula) -> Result<Option<Vec<(String, AlphaWord)>>> {
        if !sentence.free_vars().is_empty() {
            return Err(Error::Formula("find_witness needs a sentence".into()));
        }
        let mut matrix = sentence;
        while let Formula::Exists(_, body) = matrix {
            matrix = body;
        }
        let Some(tuple) = self.satisfying_tuple(matrix)? else {
            return Ok(None);
        };
        let assignment: BTreeMap<String, AlphaWord> = tuple.iter().cloned().collect();
        for w in assignment.values() {
            if !member(&self.domain, w)? {
                return Err(Error::Concretization("witness outside the domain".into()));
            }
        }
        if !self.evaluate(matrix, &assignment)? {
            return Err(Error::Concretization(format!(
                "witness fails re-verification of {matrix}"
            )));
        }
        Ok(Some(tuple))
    }

    /// Truth of `f` under an assignment of domain elements. Quantifier-free
    /// formulas are evaluated atom by atom with direct membership tests;
    /// others through compilation.
    pub fn evaluate(&self, f: &Formula, assignment: &BTreeMap<String, AlphaWord>) -> Result<bool> {
        let get = |v: &String| {
            assignment
                .get(v)
                .ok_or_else(|| Error::Formula(format!("variable {v} is unassigned")))
        };
        if !f.is_quantifier_free() {
            let (vars, n) = self.compile(f)?;
            let words = vars.iter().map(get).collect::<Result<Vec<_>>>()?;
            let w = if words.is_empty() {
                AlphaWord::blank(n.space().alphabet().clone(), self.alpha.clone())
            } else {
                AlphaWord::convolve(&words)?
            };
            return n.accepts(&w);
        }
        match f {
            Formula::Rel(name, args) => {
                let r = &self.relations[name];
                let words = args.iter().map(get).collect::<Result<Vec<_>>>()?;
                member(&r.automaton, &AlphaWord::convolve(&words)?)
            }
            Formula::Eq(x, y) => match &self.equality {
                None => Ok(get(x)? == get(y)?),
                Some(a) => member(a, &AlphaWord::convolve(&[get(x)?, get(y)?])?),
            },
            Formula::Not(g) => Ok(!self.evaluate(g, assignment)?),
            Formula::And(a, b) => Ok(self.evaluate(a, assignment)? && self.evaluate(b, assignment)?),
            Formula::Or(a, b) => Ok(self.evaluate(a, assignment)? || self.evaluate(b, assignment)?),
            Formula::Implies(a, b) => {
                Ok(!self.evaluate(a, assignment)? || self.evaluate(b, assignment)?)
            }
            Formula::Exists(..) | Formula::Forall(..) => unreachable!("quantifier-free"),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parse_and_print_round_trip() {
        for text in [
            "(exists x (= x x))",
            "(forall x (forall y (exists z (Plus x y z))))",
            "(-> (R x) (not (or (S x y) (= x y))))",
        ] {
            let f = parse_formula(text).unwrap();
            assert_eq!(f.to_string(), text);
            assert_eq!(parse_formula(&f.to_string()).unwrap(), f);
        }
    }

    #[test]
    fn n_ary_connectives_fold_right() {
        let f = parse_formula("(and (R x) (R y) (R z))").unwrap();
        assert_eq!(
            f,
            Formula::and(
                Formula::rel("R", &["x"]),
                Formula::and(Formula::rel("R", &["y"]), Formula::rel("R", &["z"]))
            )
        );
    }

    #[test]
    fn syntax_errors_carry_offsets() {
        match parse_formula("(exists x (R x)") {
            Err(Error::Syntax { .. }) => {}
            other => panic!("{other:?}"),
        }
        match parse_formula("(and (R x))") {
            Err(Error::Syntax { offset, .. }) => assert_eq!(offset, 0),
            other => panic!("{other:?}"),
        }
        assert!(parse_formula("(R x) y").is_err());
    }

    #[test]
    fn check_arity_and_binding() {
        let sig: BTreeMap<String, usize> = [("R".to_string(), 2)].into_iter().collect();
        assert!(parse_formula("(R x)").unwrap().check(&sig).is_err());
        assert!(parse_formula("(Q x)").unwrap().check(&sig).is_err());
        assert!(parse_formula("(exists x (exists x (R x x)))")
            .unwrap()
            .check(&sig)
            .is_err());
        assert!(parse_formula("(and (R x x) (exists x (R x x)))")
            .unwrap()
            .check(&sig)
            .is_ok());
    }

    #[test]
    fn free_variables() {
        let f = parse_formula("(and (R x y) (exists y (R y z)))").unwrap();
        let fv: Vec<_> = f.free_vars().into_iter().collect();
        assert_eq!(fv, vec!["x", "y", "z"]);
    }
}
