use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};

/// A generator or its inverse.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct Letter {
    pub gen: usize,
    pub inverse: bool,
}

impl Letter {
    pub fn new(gen: usize, inverse: bool) -> Self {
        Letter { gen, inverse }
    }

    pub fn pos(gen: usize) -> Self {
        Letter::new(gen, false)
    }

    pub fn neg(gen: usize) -> Self {
        Letter::new(gen, true)
    }

    pub fn inv(self) -> Self {
        Letter::new(self.gen, !self.inverse)
    }

    pub fn exponent(self) -> i32 {
        if self.inverse {
            -1
        } else {
            1
        }
    }
}

/// Word in a free group, read left to right.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn letter(l: Letter) -> Self {
        Word(vec![l])
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn inverse(&self) -> Word {
        Word(self.0.iter().rev().map(|l| l.inv()).collect())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v).reduced()
    }

    pub fn pow(&self, e: i32) -> Word {
        let base = if e < 0 { self.inverse() } else { self.clone() };
        let mut out = Word::empty();
        for _ in 0..e.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// Free reduction.
    pub fn reduced(&self) -> Word {
        let mut out: Vec<Letter> = Vec::with_capacity(self.0.len());
        for &l in &self.0 {
            if out.last() == Some(&l.inv()) {
                out.pop();
            } else {
                out.push(l);
            }
        }
        Word(out)
    }

    /// Free and cyclic reduction.
    pub fn cyclically_reduced(&self) -> Word {
        let mut w = self.reduced().0;
        while w.len() >= 2 && w[0] == w[w.len() - 1].inv() {
            w.pop();
            w.remove(0);
        }
        Word(w)
    }

    pub fn is_reduced(&self) -> bool {
        self.0.windows(2).all(|p| p[0] != p[1].inv())
    }

    /// Replace every occurrence of each generator by a word.
    pub fn substitute(&self, images: &dyn Fn(usize) -> Word) -> Word {
        let mut out = Vec::new();
        for &l in &self.0 {
            let img = images(l.gen);
            if l.inverse {
                out.extend(img.inverse().0);
            } else {
                out.extend(img.0);
            }
        }
        Word(out).reduced()
    }

    /// Number of letters involving `gen`, counting both signs.
    pub fn occurrences(&self, gen: usize) -> usize {
        self.0.iter().filter(|l| l.gen == gen).count()
    }

    /// Exponent sum of each generator (image in the abelianization).
    pub fn abelianization(&self, n_gens: usize) -> Vec<i64> {
        let mut v = vec![0i64; n_gens];
        for l in &self.0 {
            v[l.gen] += l.exponent() as i64;
        }
        v
    }

    pub fn rotate_left(&self, k: usize) -> Word {
        if self.0.is_empty() {
            return self.clone();
        }
        let mut v = self.0.clone();
        v.rotate_left(k % self.0.len());
        Word(v)
    }

    /// Render with the given generator names; inverses as `name^-1`.
    pub fn display<'a>(&'a self, names: &'a [String]) -> WordDisplay<'a> {
        WordDisplay { word: self, names }
    }

    /// Parse whitespace- or `*`-separated tokens `name` / `name^-1`.
    pub fn parse(text: &str, names: &[String]) -> Result<Word> {
        let mut out = Vec::new();
        for tok in text.split(|c: char| c.is_whitespace() || c == '*').filter(|t| !t.is_empty()) {
            let (name, inverse) = match tok.strip_suffix("^-1") {
                Some(n) => (n, true),
                None => (tok, false),
            };
            let gen = names
                .iter()
                .position(|n| n == name)
                .ok_or_else(|| Error::UnknownGenerator(name.to_string()))?;
            out.push(Letter::new(gen, inverse));
        }
        Ok(Word(out))
    }
}

pub struct WordDisplay<'a> {
    word: &'a Word,
    names: &'a [String],
}

impl fmt::Display for WordDisplay<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, l) in self.word.0.iter().enumerate() {
            if k > 0 {
                f.write_str(" ")?;
            }
            let name = self.names.get(l.gen).map(String::as_str).unwrap_or("?");
            f.write_str(name)?;
            if l.inverse {
                f.write_str("^-1")?;
            }
        }
        Ok(())
    }
}

/// Commutator `[a, b] = a b a⁻¹ b⁻¹`.
pub fn commutator(a: usize, b: usize) -> Word {
    Word(vec![Letter::pos(a), Letter::pos(b), Letter::neg(a), Letter::neg(b)])
}

#[cfg(test)]
mod tests {
    use super::*;

    fn names() -> Vec<String> {
        ["a1", "b1", "a2", "b2"].iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn reduction() {
        let w = Word(vec![Letter::pos(0), Letter::pos(1), Letter::neg(1), Letter::pos(2)]);
        assert_eq!(w.reduced(), Word(vec![Letter::pos(0), Letter::pos(2)]));
        let w = Word(vec![Letter::pos(3), Letter::pos(0), Letter::neg(3)]);
        assert_eq!(w.cyclically_reduced(), Word(vec![Letter::pos(0)]));
        assert!(w.concat(&w.inverse()).is_empty());
    }

    #[test]
    fn parse_and_display_round_trip() {
        let n = names();
        let w = Word::parse("a1 b1^-1*a2", &n).unwrap();
        assert_eq!(w.display(&n).to_string(), "a1 b1^-1 a2");
        assert_eq!(Word::parse("", &n).unwrap(), Word::empty());
        assert_eq!(
            Word::parse("a1 c7", &n),
            Err(Error::UnknownGenerator("c7".into()))
        );
    }

    #[test]
    fn substitution() {
        let w = Word(vec![Letter::pos(0), Letter::neg(1)]);
        let s = w.substitute(&|g| {
            if g == 1 {
                Word(vec![Letter::pos(0), Letter::pos(2)])
            } else {
                Word::letter(Letter::pos(g))
            }
        });
        assert_eq!(s, Word(vec![Letter::pos(0), Letter::neg(2), Letter::neg(0)]));
    }
}
