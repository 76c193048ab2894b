//! Alphabets with a blank symbol and finite-support α-words.

use std::collections::{BTreeMap, BTreeSet};
use std::fmt;
use std::sync::Arc;

use crate::error::{Error, Result};
use crate::ordinal::Ordinal;

/// Index of a symbol in an [`Alphabet`]. For product alphabets `Σ^r` the
/// index is the mixed-radix encoding of the tuple, coordinate 0 least
/// significant.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Symbol(pub u32);

/// A finite alphabet `Σ^r` over base symbols `Σ` with a designated blank.
///
/// Arity 1 is a plain alphabet; arity 0 has exactly one (blank) symbol.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Alphabet {
    base: Vec<String>,
    blank: u32,
    arity: usize,
    size: u32,
}

impl Alphabet {
    /// A plain alphabet; `blank` must be one of `symbols`.
    pub fn new<S: AsRef<str>>(symbols: &[S], blank: &str) -> Result<Self> {
        let base: Vec<String> = symbols.iter().map(|s| s.as_ref().to_string()).collect();
        if base.is_empty() {
            return Err(Error::Word("alphabet must be nonempty".into()));
        }
        let uniq: BTreeSet<&String> = base.iter().collect();
        if uniq.len() != base.len() {
            return Err(Error::Word("duplicate alphabet symbol".into()));
        }
        if let Some(bad) = base.iter().find(|s| s.contains('|') || s.trim().is_empty()) {
            return Err(Error::Word(format!("invalid symbol name {bad:?}")));
        }
        let blank = base
            .iter()
            .position(|s| s == blank)
            .ok_or_else(|| Error::Word(format!("blank {blank:?} is not in the alphabet")))?
            as u32;
        Self::with_arity(base, blank, 1)
    }

    fn with_arity(base: Vec<String>, blank: u32, arity: usize) -> Result<Self> {
        let n = base.len() as u64;
        let size = (0..arity).try_fold(1u64, |acc, _| {
            acc.checked_mul(n).filter(|&v| v <= u32::MAX as u64)
        });
        let size = size.ok_or_else(|| {
            Error::Resource(format!("alphabet of {n}^{arity} symbols is too large"))
        })? as u32;
        Ok(Alphabet {
            base,
            blank,
            arity,
            size,
        })
    }

    /// The `r`-fold product of this alphabet's base, `Σ^r`.
    pub fn power(&self, r: usize) -> Result<Alphabet> {
        Self::with_arity(self.base.clone(), self.blank, r)
    }

    /// Same base alphabet with arity 1.
    pub fn base_alphabet(&self) -> Alphabet {
        Self::with_arity(self.base.clone(), self.blank, 1).expect("base alphabet fits")
    }

    pub fn same_base(&self, other: &Alphabet) -> bool {
        self.base == other.base && self.blank == other.blank
    }

    pub fn arity(&self) -> usize {
        self.arity
    }

    /// Number of symbols, `|Σ|^r`.
    pub fn len(&self) -> usize {
        self.size as usize
    }

    pub fn is_empty(&self) -> bool {
        self.size == 0
    }

    pub fn base_len(&self) -> usize {
        self.base.len()
    }

    pub fn base_symbols(&self) -> &[String] {
        &self.base
    }

    pub fn base_blank(&self) -> u32 {
        self.blank
    }

    pub fn blank(&self) -> Symbol {
        self.encode(&vec![self.blank; self.arity])
    }

    pub fn symbols(&self) -> impl Iterator<Item = Symbol> {
        (0..self.size).map(Symbol)
    }

    /// Non-blank symbols.
    pub fn letters(&self) -> impl Iterator<Item = Symbol> + '_ {
        let blank = self.blank();
        self.symbols().filter(move |&s| s != blank)
    }

    /// Tuple of base-symbol indices, coordinate 0 first.
    pub fn decode(&self, s: Symbol) -> Vec<u32> {
        let n = self.base.len() as u32;
        let mut v = s.0;
        (0..self.arity)
            .map(|_| {
                let c = v % n;
                v /= n;
                c
            })
            .collect()
    }

    pub fn encode(&self, tuple: &[u32]) -> Symbol {
        debug_assert_eq!(tuple.len(), self.arity);
        let n = self.base.len() as u32;
        Symbol(tuple.iter().rev().fold(0, |acc, &c| acc * n + c))
    }

    /// Component `i` of a tuple symbol.
    pub fn component(&self, s: Symbol, i: usize) -> u32 {
        let n = self.base.len() as u32;
        (s.0 / n.pow(i as u32)) % n
    }

    pub fn name(&self, s: Symbol) -> String {
        self.decode(s)
            .iter()
            .map(|&c| self.base[c as usize].as_str())
            .collect::<Vec<_>>()
            .join("|")
    }

    /// Looks up a symbol written as `a` or, for tuples, `a|b|_`.
    pub fn lookup(&self, name: &str) -> Result<Symbol> {
        let parts: Vec<&str> = if self.arity == 0 {
            Vec::new()
        } else {
            name.split('|').map(str::trim).collect()
        };
        if parts.len() != self.arity {
            return Err(Error::Word(format!(
                "symbol {name:?} does not have arity {}",
                self.arity
            )));
        }
        let tuple = parts
            .iter()
            .map(|p| {
                self.base
                    .iter()
                    .position(|b| b == p)
                    .map(|i| i as u32)
                    .ok_or_else(|| Error::Word(format!("unknown symbol {p:?}")))
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(self.encode(&tuple))
    }
}

impl fmt::Debug for Alphabet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "Alphabet({:?}, blank={:?})^{}",
            self.base, self.base[self.blank as usize], self.arity
        )
    }
}

/// A finite-support word `w: α → Σ`; only the non-blank entries are stored.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct AlphaWord {
    alphabet: Arc<Alphabet>,
    length: Ordinal,
    entries: BTreeMap<Ordinal, Symbol>,
}

impl AlphaWord {
    pub fn new(
        alphabet: Arc<Alphabet>,
        length: Ordinal,
        entries: impl IntoIterator<Item = (Ordinal, Symbol)>,
    ) -> Result<Self> {
        let blank = alphabet.blank();
        let mut map = BTreeMap::new();
        for (pos, sym) in entries {
            if pos >= length {
                return Err(Error::Word(format!(
                    "position {pos} is outside the word length {length}"
                )));
            }
            if sym == blank {
                return Err(Error::Word(format!("blank entry at position {pos}")));
            }
            if sym.0 as usize >= alphabet.len() {
                return Err(Error::Word(format!("unknown symbol index {}", sym.0)));
            }
            if map.insert(pos.clone(), sym).is_some() {
                return Err(Error::Word(format!("duplicate position {pos}")));
            }
        }
        Ok(AlphaWord {
            alphabet,
            length,
            entries: map,
        })
    }

    /// Like [`AlphaWord::new`] with symbols given by name.
    pub fn from_named(
        alphabet: Arc<Alphabet>,
        length: Ordinal,
        entries: &[(Ordinal, &str)],
    ) -> Result<Self> {
        let resolved = entries
            .iter()
            .map(|(p, s)| Ok((p.clone(), alphabet.lookup(s)?)))
            .collect::<Result<Vec<_>>>()?;
        Self::new(alphabet, length, resolved)
    }

    /// The all-blank word `◇^α`.
    pub fn blank(alphabet: Arc<Alphabet>, length: Ordinal) -> Self {
        AlphaWord {
            alphabet,
            length,
            entries: BTreeMap::new(),
        }
    }

    pub fn alphabet(&self) -> &Arc<Alphabet> {
        &self.alphabet
    }

    pub fn length(&self) -> &Ordinal {
        &self.length
    }

    /// Non-blank entries in increasing position order.
    pub fn entries(&self) -> &BTreeMap<Ordinal, Symbol> {
        &self.entries
    }

    pub fn get(&self, pos: &Ordinal) -> Symbol {
        self.entries
            .get(pos)
            .copied()
            .unwrap_or_else(|| self.alphabet.blank())
    }

    /// `supp(w)`.
    pub fn support(&self) -> BTreeSet<Ordinal> {
        self.entries.keys().cloned().collect()
    }

    pub fn support_len(&self) -> usize {
        self.entries.len()
    }

    /// `w↾[g, d)`, re-based to start at position 0.
    pub fn restrict(&self, g: &Ordinal, d: &Ordinal) -> Result<AlphaWord> {
        if g > d || d > &self.length {
            return Err(Error::OrdinalRange(format!(
                "restriction [{g}, {d}) of a word of length {}",
                self.length
            )));
        }
        let length = Ordinal::interval_type(g, d)?;
        let entries = self
            .entries
            .range(g.clone()..d.clone())
            .map(|(p, &s)| Ok((Ordinal::interval_type(g, p)?, s)))
            .collect::<Result<BTreeMap<_, _>>>()?;
        Ok(AlphaWord {
            alphabet: self.alphabet.clone(),
            length,
            entries,
        })
    }

    /// Concatenation `u + v`: entries of `v` at `q` move to `len(u) + q`.
    pub fn concat(&self, v: &AlphaWord) -> Result<AlphaWord> {
        if self.alphabet != v.alphabet {
            return Err(Error::AlphabetMismatch(
                "concatenating words over different alphabets".into(),
            ));
        }
        let length = self.length.checked_add(&v.length)?;
        let mut entries = self.entries.clone();
        for (q, &s) in &v.entries {
            entries.insert(self.length.checked_add(q)?, s);
        }
        Ok(AlphaWord {
            alphabet: self.alphabet.clone(),
            length,
            entries,
        })
    }

    /// Concatenates a sequence of words over one alphabet.
    pub fn concat_all<'a>(parts: impl IntoIterator<Item = &'a AlphaWord>) -> Result<AlphaWord> {
        let mut it = parts.into_iter();
        let first = it
            .next()
            .ok_or_else(|| Error::Word("empty concatenation".into()))?
            .clone();
        it.try_fold(first, |acc, w| acc.concat(w))
    }

    /// Convolution of equal-length words over a common base alphabet.
    pub fn convolve(ws: &[&AlphaWord]) -> Result<AlphaWord> {
        let first = ws
            .first()
            .ok_or_else(|| Error::Word("convolution of zero words".into()))?;
        let length = first.length.clone();
        let arity: usize = ws.iter().map(|w| w.alphabet.arity()).sum();
        for w in ws {
            if !w.alphabet.same_base(&first.alphabet) {
                return Err(Error::AlphabetMismatch(
                    "convolving words over different base alphabets".into(),
                ));
            }
            if w.length != length {
                return Err(Error::Word(format!(
                    "convolving words of lengths {} and {}",
                    first.length, w.length
                )));
            }
        }
        let product = Arc::new(first.alphabet.power(arity)?);
        let positions: BTreeSet<&Ordinal> = ws.iter().flat_map(|w| w.entries.keys()).collect();
        let mut entries = BTreeMap::new();
        for pos in positions {
            let mut tuple = Vec::with_capacity(arity);
            for w in ws {
                tuple.extend(w.alphabet.decode(w.get(pos)));
            }
            entries.insert(pos.clone(), product.encode(&tuple));
        }
        Ok(AlphaWord {
            alphabet: product,
            length,
            entries,
        })
    }

    /// Component `i` of a word over a product alphabet, as a word over `Σ^1`.
    pub fn component(&self, i: usize) -> Result<AlphaWord> {
        if i >= self.alphabet.arity() {
            return Err(Error::Word(format!(
                "component {i} of a word of arity {}",
                self.alphabet.arity()
            )));
        }
        let base = Arc::new(self.alphabet.base_alphabet());
        let blank = base.blank();
        let entries = self
            .entries
            .iter()
            .filter_map(|(p, &s)| {
                let c = Symbol(self.alphabet.component(s, i));
                (c != blank).then(|| (p.clone(), c))
            })
            .collect();
        Ok(AlphaWord {
            alphabet: base,
            length: self.length.clone(),
            entries,
        })
    }

    /// All components of a word over a product alphabet.
    pub fn split(&self) -> Result<Vec<AlphaWord>> {
        (0..self.alphabet.arity()).map(|i| self.component(i)).collect()
    }

    /// Same entries over a structurally equal alphabet handle.
    pub fn with_alphabet(&self, alphabet: Arc<Alphabet>) -> Result<AlphaWord> {
        if *alphabet != *self.alphabet {
            return Err(Error::AlphabetMismatch("rebinding to a different alphabet".into()));
        }
        Ok(AlphaWord {
            alphabet,
            length: self.length.clone(),
            entries: self.entries.clone(),
        })
    }

    /// Parses `len=<ordinal>; {<ordinal>:<symbol>, ...}`.
    pub fn parse_literal(text: &str, alphabet: Arc<Alphabet>) -> Result<AlphaWord> {
        let (len_part, body) = text
            .split_once(';')
            .ok_or_else(|| Error::syntax(0, "word literal needs 'len=<ordinal>; {...}'"))?;
        let len_part = len_part.trim();
        let len_text = len_part
            .strip_prefix("len")
            .map(str::trim_start)
            .and_then(|s| s.strip_prefix('='))
            .ok_or_else(|| Error::syntax(0, "word literal must start with 'len='"))?;
        let length: Ordinal = len_text.trim().parse()?;
        let body = body.trim();
        let inner = body
            .strip_prefix('{')
            .and_then(|s| s.strip_suffix('}'))
            .ok_or_else(|| Error::syntax(text.len() - body.len(), "expected '{...}'"))?;
        let mut entries = Vec::new();
        for item in inner.split(',').map(str::trim).filter(|s| !s.is_empty()) {
            let (pos, sym) = item
                .rsplit_once(':')
                .ok_or_else(|| Error::syntax(0, format!("entry {item:?} lacks ':'")))?;
            entries.push((pos.trim().parse::<Ordinal>()?, alphabet.lookup(sym.trim())?));
        }
        AlphaWord::new(alphabet, length, entries)
    }
}

impl fmt::Display for AlphaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "len={}; {{", self.length)?;
        for (i, (p, &s)) in self.entries.iter().enumerate() {
            if i > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{p}:{}", self.alphabet.name(s))?;
        }
        f.write_str("}")
    }
}

impl fmt::Debug for AlphaWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "AlphaWord({self})")
    }
}

/// Serialized as its literal, e.g. `"len=w^2; {0:a, w:b}"`.
impl serde::Serialize for AlphaWord {
    fn serialize<S: serde::Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn sigma() -> Arc<Alphabet> {
        Arc::new(Alphabet::new(&["_", "a", "b"], "_").unwrap())
    }

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    fn word(len: &str, entries: &[(&str, &str)]) -> AlphaWord {
        let e: Vec<(Ordinal, &str)> = entries.iter().map(|(p, s)| (o(p), *s)).collect();
        AlphaWord::from_named(sigma(), o(len), &e).unwrap()
    }

    #[test]
    fn make_checks_entries() {
        let w = word("w^2", &[("w*7", "a")]);
        assert_eq!(w.support(), [o("w*7")].into_iter().collect());
        assert!(word("w", &[]).support().is_empty());
        let a = sigma().lookup("a").unwrap();
        assert!(AlphaWord::new(sigma(), o("5"), [(o("7"), a)]).is_err());
        assert!(AlphaWord::new(sigma(), o("5"), [(o("1"), sigma().blank())]).is_err());
        assert!(AlphaWord::new(sigma(), o("5"), [(o("1"), a), (o("1"), a)]).is_err());
        assert!(AlphaWord::from_named(sigma(), o("5"), &[(o("1"), "c")]).is_err());
    }

    #[test]
    fn restrict_rebases_positions() {
        let w = word("w", &[("3", "a")]);
        assert_eq!(w.restrict(&o("0"), &o("w")).unwrap(), w);
        let v = word("w^2", &[("w*2+1", "a")]);
        assert_eq!(
            v.restrict(&o("w*2"), &o("w*3")).unwrap(),
            word("w", &[("1", "a")])
        );
        assert_eq!(w.restrict(&o("4"), &o("w")).unwrap(), word("w", &[]));
        assert!(w.restrict(&o("4"), &o("3")).is_err());
        assert!(w.restrict(&o("4"), &o("w+1")).is_err());
    }

    #[test]
    fn concat_places_right_entries_after_left_length() {
        let u = word("5", &[("3", "a")]);
        let v = word("w", &[("0", "b")]);
        assert_eq!(u.concat(&v).unwrap(), word("w", &[("3", "a"), ("5", "b")]));
        assert_eq!(
            word("w", &[]).concat(&word("w", &[])).unwrap(),
            word("w*2", &[])
        );
        assert_eq!(
            word("1", &[("0", "a")]).concat(&word("w", &[])).unwrap(),
            word("w", &[("0", "a")])
        );
    }

    #[test]
    fn convolution_is_componentwise() {
        let u = word("w", &[("0", "a")]);
        let v = word("w", &[("1", "b")]);
        let c = AlphaWord::convolve(&[&u, &v]).unwrap();
        let s2 = c.alphabet().clone();
        assert_eq!(s2.arity(), 2);
        assert_eq!(c.get(&o("0")), s2.lookup("a|_").unwrap());
        assert_eq!(c.get(&o("1")), s2.lookup("_|b").unwrap());
        assert_eq!(c.split().unwrap(), vec![u.clone(), v.clone()]);
        let blank = AlphaWord::convolve(&[&word("w", &[]), &word("w", &[])]).unwrap();
        assert!(blank.support().is_empty());
        assert!(AlphaWord::convolve(&[&u, &word("w*2", &[])]).is_err());
    }

    #[test]
    fn literal_round_trip() {
        let w = word("w^2+3", &[("w*2+1", "a"), ("w^2", "b")]);
        let text = w.to_string();
        assert_eq!(text, "len=w^2+3; {w*2+1:a, w^2:b}");
        assert_eq!(AlphaWord::parse_literal(&text, sigma()).unwrap(), w);
        assert_eq!(
            AlphaWord::parse_literal("len=w; {3:a}", sigma()).unwrap(),
            word("w", &[("3", "a")])
        );
        assert!(AlphaWord::parse_literal("w; {3:a}", sigma()).is_err());
    }

    #[test]
    fn tuple_symbols_round_trip() {
        let s3 = sigma().power(3).unwrap();
        assert_eq!(s3.len(), 27);
        let s = s3.lookup("a|_|b").unwrap();
        assert_eq!(s3.decode(s), vec![1, 0, 2]);
        assert_eq!(s3.name(s), "a|_|b");
        assert_eq!(s3.blank(), Symbol(0));
        let s0 = sigma().power(0).unwrap();
        assert_eq!(s0.len(), 1);
        assert_eq!(s0.letters().count(), 0);
    }
}
