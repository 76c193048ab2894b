//! Ordinals below ω^ω in Cantor normal form.
//!
//! An [`Ordinal`] is stored as its coefficient vector `(c_0, c_1, ..., c_d)`
//! denoting `ω^d·c_d + ... + ω·c_1 + c_0`. The highest coefficient is
//! always nonzero, so structural equality is ordinal equality.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Largest exponent accepted by the parser.
pub const MAX_EXPONENT: usize = 4096;

#[derive(Clone, PartialEq, Eq, Hash, Default)]
pub struct Ordinal {
    coeffs: Vec<u64>,
}

impl Ordinal {
    pub fn zero() -> Self {
        Ordinal { coeffs: Vec::new() }
    }

    pub fn nat(n: u64) -> Self {
        Self::from_coeffs(vec![n])
    }

    pub fn omega() -> Self {
        Self::omega_pow(1)
    }

    /// `ω^k`.
    pub fn omega_pow(k: usize) -> Self {
        Self::omega_pow_mul(k, 1)
    }

    /// `ω^k · c`.
    pub fn omega_pow_mul(k: usize, c: u64) -> Self {
        let mut coeffs = vec![0; k + 1];
        coeffs[k] = c;
        Self::from_coeffs(coeffs)
    }

    /// Builds an ordinal from low-to-high coefficients, trimming zeros on top.
    pub fn from_coeffs(mut coeffs: Vec<u64>) -> Self {
        while coeffs.last() == Some(&0) {
            coeffs.pop();
        }
        Ordinal { coeffs }
    }

    /// Coefficients `c_0, c_1, ..., c_d` (empty for zero).
    pub fn coeffs(&self) -> &[u64] {
        &self.coeffs
    }

    /// Coefficient of `ω^i` (zero beyond the degree).
    pub fn coeff(&self, i: usize) -> u64 {
        self.coeffs.get(i).copied().unwrap_or(0)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Highest exponent with a nonzero coefficient; `None` for zero.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    /// Lowest exponent with a nonzero coefficient; `None` for zero.
    pub fn lowest_exponent(&self) -> Option<usize> {
        self.coeffs.iter().position(|&c| c != 0)
    }

    pub fn is_limit(&self) -> bool {
        !self.is_zero() && self.coeff(0) == 0
    }

    pub fn is_successor(&self) -> bool {
        self.coeff(0) != 0
    }

    /// Natural number value, if the ordinal is finite.
    pub fn as_nat(&self) -> Option<u64> {
        match self.coeffs.len() {
            0 => Some(0),
            1 => Some(self.coeffs[0]),
            _ => None,
        }
    }

    pub fn succ(&self) -> Self {
        self.add(&Ordinal::nat(1))
    }

    /// Ordinal sum `self + rhs`, failing on coefficient overflow.
    pub fn checked_add(&self, rhs: &Ordinal) -> Result<Ordinal> {
        let Some(e) = rhs.degree() else {
            return Ok(self.clone());
        };
        let len = self.coeffs.len().max(e + 1);
        let mut out = vec![0; len];
        for (i, slot) in out.iter_mut().enumerate() {
            *slot = match i.cmp(&e) {
                Ordering::Greater => self.coeff(i),
                Ordering::Equal => self
                    .coeff(i)
                    .checked_add(rhs.coeff(i))
                    .ok_or_else(|| Error::Overflow(format!("coefficient of w^{i}")))?,
                Ordering::Less => rhs.coeff(i),
            };
        }
        Ok(Ordinal::from_coeffs(out))
    }

    /// Ordinal sum `self + rhs`.
    ///
    /// Panics if a coefficient overflows `u64`; use [`Ordinal::checked_add`]
    /// where the operands are untrusted.
    pub fn add(&self, rhs: &Ordinal) -> Ordinal {
        self.checked_add(rhs)
            .expect("ordinal coefficient overflow in addition")
    }

    /// `self · c` for a natural number `c`.
    pub fn mul_nat(&self, c: u64) -> Result<Ordinal> {
        if c == 0 || self.is_zero() {
            return Ok(Ordinal::zero());
        }
        let d = self.degree().unwrap();
        let mut coeffs = self.coeffs.clone();
        coeffs[d] = coeffs[d]
            .checked_mul(c)
            .ok_or_else(|| Error::Overflow(format!("coefficient of w^{d}")))?;
        Ok(Ordinal::from_coeffs(coeffs))
    }

    /// The unique `ε` with `g + ε = d`; fails when `g > d`.
    pub fn interval_type(g: &Ordinal, d: &Ordinal) -> Result<Ordinal> {
        match g.cmp(d) {
            Ordering::Greater => Err(Error::OrdinalRange(format!(
                "interval start {g} exceeds end {d}"
            ))),
            Ordering::Equal => Ok(Ordinal::zero()),
            Ordering::Less => {
                let top = d.coeffs.len().max(g.coeffs.len());
                let k = (0..top)
                    .rev()
                    .find(|&i| g.coeff(i) != d.coeff(i))
                    .expect("distinct ordinals differ somewhere");
                let mut coeffs = d.coeffs[..=k].to_vec();
                coeffs[k] -= g.coeff(k);
                Ok(Ordinal::from_coeffs(coeffs))
            }
        }
    }

    /// Splits `self = self_{~n} + ω^n m_n + ... + m_0` and returns
    /// `(self_{~n}, [m_n, ..., m_0])`.
    pub fn trunc_tilde(&self, n: usize) -> (Ordinal, Vec<u64>) {
        let head = if self.coeffs.len() > n + 1 {
            let mut c = self.coeffs.clone();
            for x in c.iter_mut().take(n + 1) {
                *x = 0;
            }
            Ordinal::from_coeffs(c)
        } else {
            Ordinal::zero()
        };
        let tail = (0..=n).rev().map(|i| self.coeff(i)).collect();
        (head, tail)
    }

    /// `self_{~n}` alone.
    pub fn truncation(&self, n: usize) -> Ordinal {
        self.trunc_tilde(n).0
    }

    /// Greatest coefficient among exponents `0..=m`.
    pub fn max_low_coeff(&self, m: usize) -> u64 {
        (0..=m).map(|i| self.coeff(i)).max().unwrap_or(0)
    }
}

impl Ord for Ordinal {
    fn cmp(&self, other: &Self) -> Ordering {
        self.coeffs
            .len()
            .cmp(&other.coeffs.len())
            .then_with(|| self.coeffs.iter().rev().cmp(other.coeffs.iter().rev()))
    }
}

impl PartialOrd for Ordinal {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, &c) in self.coeffs.iter().enumerate().rev() {
            if c == 0 {
                continue;
            }
            if !first {
                f.write_str("+")?;
            }
            first = false;
            match (i, c) {
                (0, c) => write!(f, "{c}")?,
                (1, 1) => f.write_str("w")?,
                (1, c) => write!(f, "w*{c}")?,
                (i, 1) => write!(f, "w^{i}")?,
                (i, c) => write!(f, "w^{i}*{c}")?,
            }
        }
        Ok(())
    }
}

impl fmt::Debug for Ordinal {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Ordinal({self})")
    }
}

impl FromStr for Ordinal {
    type Err = Error;

    fn from_str(s: &str) -> Result<Self> {
        parse(s)
    }
}

impl Serialize for Ordinal {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        s.collect_str(self)
    }
}

impl<'de> Deserialize<'de> for Ordinal {
    fn deserialize<D: Deserializer<'de>>(d: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse(&s).map_err(serde::de::Error::custom)
    }
}

struct Cursor<'a> {
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    /// Accepts `w` or the UTF-8 encoding of `ω`.
    fn eat_omega(&mut self) -> bool {
        self.skip_ws();
        if self.bytes.get(self.pos) == Some(&b'w') {
            self.pos += 1;
            true
        } else if self.bytes[self.pos..].starts_with("ω".as_bytes()) {
            self.pos += "ω".len();
            true
        } else {
            false
        }
    }

    fn number(&mut self) -> Result<u64> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::syntax(start, "expected a natural number"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        text.parse::<u64>()
            .map_err(|_| Error::Overflow(format!("number {text} does not fit in 64 bits")))
    }
}

/// Parses `0 | term ('+' term)*` with `term = w^k*m | w^k | w*m | w | m`.
/// Exponents must strictly decrease from left to right.
pub fn parse(text: &str) -> Result<Ordinal> {
    let mut cur = Cursor {
        bytes: text.as_bytes(),
        pos: 0,
    };
    let mut coeffs: Vec<u64> = Vec::new();
    let mut last_exp: Option<usize> = None;
    let mut seen_zero = false;
    loop {
        let term_start = {
            cur.skip_ws();
            cur.pos
        };
        let (exp, coeff) = if cur.eat_omega() {
            let exp = if cur.eat(b'^') {
                let e = cur.number()?;
                if e as usize > MAX_EXPONENT || e > usize::MAX as u64 {
                    return Err(Error::Overflow(format!(
                        "exponent {e} exceeds limit {MAX_EXPONENT}"
                    )));
                }
                e as usize
            } else {
                1
            };
            let c = if cur.eat(b'*') { cur.number()? } else { 1 };
            (exp, c)
        } else {
            (0, cur.number()?)
        };
        if coeff == 0 {
            if exp == 0 && last_exp.is_none() && !seen_zero {
                seen_zero = true;
            } else {
                return Err(Error::syntax(term_start, "zero coefficient in a sum"));
            }
        }
        if let Some(prev) = last_exp {
            if exp >= prev || seen_zero {
                return Err(Error::syntax(
                    term_start,
                    "exponents must strictly decrease from left to right",
                ));
            }
        }
        if coeff != 0 {
            if coeffs.len() <= exp {
                coeffs.resize(exp + 1, 0);
            }
            coeffs[exp] = coeff;
        }
        last_exp = Some(exp);
        match cur.peek() {
            None => break,
            Some(b'+') => {
                if seen_zero {
                    return Err(Error::syntax(cur.pos, "'0' must stand alone"));
                }
                cur.pos += 1;
            }
            Some(_) => return Err(Error::syntax(cur.pos, "unexpected character")),
        }
    }
    Ok(Ordinal::from_coeffs(coeffs))
}

#[cfg(test)]
mod tests {
    use super::*;

    fn o(s: &str) -> Ordinal {
        s.parse().unwrap()
    }

    #[test]
    fn parse_reads_cnf() {
        assert_eq!(o("w^2*1 + w*2 + 3").coeffs(), &[3, 2, 1]);
        assert_eq!(o("0").coeffs(), &[] as &[u64]);
        assert_eq!(o("w*2+3").to_string(), "w*2+3");
        assert_eq!(o("ω^3*2 + 7"), Ordinal::from_coeffs(vec![7, 0, 0, 2]));
        assert_eq!(o("w^2").to_string(), "w^2");
    }

    #[test]
    fn parse_rejects_bad_input() {
        assert!(matches!(parse("w + w^2"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("w + w"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("3 + w"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("w*0"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("0 + 1"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("w^"), Err(Error::Syntax { .. })));
        assert!(matches!(parse("x"), Err(Error::Syntax { .. })));
        assert!(matches!(parse(""), Err(Error::Syntax { .. })));
        assert!(matches!(
            parse("99999999999999999999999"),
            Err(Error::Overflow(_))
        ));
        assert!(matches!(parse("w^99999999"), Err(Error::Overflow(_))));
    }

    #[test]
    fn addition_absorbs_on_the_left() {
        assert_eq!(o("3").add(&o("w")), o("w"));
        assert_eq!(o("w").add(&o("3")), o("w+3"));
        assert_eq!(o("w^2+w*2").add(&o("w*3+1")), o("w^2+w*5+1"));
        assert_eq!(o("w^2+5").add(&Ordinal::zero()), o("w^2+5"));
        let big = Ordinal::nat(u64::MAX);
        assert!(matches!(big.checked_add(&o("1")), Err(Error::Overflow(_))));
    }

    #[test]
    fn comparison_is_lexicographic_from_the_top() {
        assert_eq!(o("w").cmp(&o("w*2")), Ordering::Less);
        assert_eq!(o("w+5").cmp(&o("w+5")), Ordering::Equal);
        assert_eq!(o("w^2").cmp(&o("w*9+9")), Ordering::Greater);
        assert!(Ordinal::zero() < o("1"));
    }

    #[test]
    fn interval_type_examples() {
        assert_eq!(Ordinal::interval_type(&o("3"), &o("w")).unwrap(), o("w"));
        assert_eq!(
            Ordinal::interval_type(&o("w*5+1"), &o("w^2")).unwrap(),
            o("w^2")
        );
        assert_eq!(
            Ordinal::interval_type(&o("w+1"), &o("w*2+3")).unwrap(),
            o("w+3")
        );
        assert!(Ordinal::interval_type(&o("w"), &o("3")).is_err());
    }

    #[test]
    fn trunc_tilde_examples() {
        assert_eq!(
            o("w^3*2+w*4+7").trunc_tilde(1),
            (o("w^3*2"), vec![4, 7])
        );
        assert_eq!(o("5").trunc_tilde(0), (Ordinal::zero(), vec![5]));
        assert_eq!(
            o("w^2*5+w*3+2").trunc_tilde(0),
            (o("w^2*5+w*3"), vec![2])
        );
        assert_eq!(o("w+1").trunc_tilde(3), (Ordinal::zero(), vec![0, 0, 1, 1]));
    }

    #[test]
    fn limit_classification() {
        assert!(o("w").is_limit());
        assert!(!o("w+1").is_limit());
        assert!(!Ordinal::zero().is_limit());
        assert!(o("w^3*2").is_limit());
    }
}
