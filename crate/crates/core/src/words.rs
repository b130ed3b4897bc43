//! Free-group word algebra.
//!
//! A [`Word`] is a freely reduced run-length sequence of syllables
//! `(generator, exponent)`: adjacent syllables never share a generator and
//! no exponent is zero. All operations preserve this invariant, so two
//! words are equal in the free group iff they compare equal.
//!
//! Text syntax (used by the CLI and test fixtures):
//!
//! ```text
//! word     := factor (('*')? factor)*        -- '*' optional, whitespace ignored
//! factor   := primary ('^' integer)?
//! primary  := generator | '(' word ')' | '[' word ',' word ']' '\''?
//! generator:= 'r1_3' | 'r2_1' | ... (strand family, puncture index)
//!           | 's'   (the elementary braid that swaps the basepoints)
//!           | 'B'   (the full twist)
//!           | bare identifier (abstract generator, e.g. v, a1, alpha)
//! ```
//!
//! `e` and `1` denote the identity word. `[x,y]` is the commutator
//! `x y x^-1 y^-1`; `[x,y]'` is the twisted commutator `x y x y^-1`.

use std::collections::BTreeMap;
use std::fmt;

use serde::de::Error as _;
use serde::{Deserialize, Deserializer, Serialize, Serializer};
use thiserror::Error;

/// A generator of one of the alphabets used across the crate.
#[derive(Clone, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Generator {
    /// Pure-braid generator: `family` is the strand (1 or 2), `index` the
    /// puncture loop (1-based, bounded by `2g` in a genus-`g` context).
    Rho { family: u8, index: u32 },
    /// The elementary braid swapping the two basepoints.
    Sigma,
    /// The full twist (square of [`Generator::Sigma`]).
    FullTwist,
    /// Named generator of an abstract presentation (`v`, `a1`, `alpha`, ...).
    Abstract(String),
}

impl Generator {
    pub fn rho(family: u8, index: u32) -> Self {
        assert!(family == 1 || family == 2, "strand family must be 1 or 2");
        assert!(index >= 1, "puncture index is 1-based");
        Generator::Rho { family, index }
    }

    pub fn named(name: &str) -> Self {
        Generator::Abstract(name.to_string())
    }

    /// Swap the strand family of a `Rho` generator; other generators are
    /// fixed. This is the letterwise form of conjugation by the elementary
    /// braid, up to full-twist conjugation.
    pub fn tilde(&self) -> Generator {
        match self {
            Generator::Rho { family, index } => Generator::Rho {
                family: 3 - family,
                index: *index,
            },
            other => other.clone(),
        }
    }

    pub fn token(&self) -> String {
        match self {
            Generator::Rho { family, index } => format!("r{family}_{index}"),
            Generator::Sigma => "s".to_string(),
            Generator::FullTwist => "B".to_string(),
            Generator::Abstract(name) => name.clone(),
        }
    }
}

impl fmt::Display for Generator {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.token())
    }
}

impl Serialize for Generator {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.token())
    }
}

impl<'de> Deserialize<'de> for Generator {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        parse_generator_token(&s).map_err(D::Error::custom)
    }
}

#[derive(Debug, Error, PartialEq, Eq)]
pub enum WordError {
    #[error("no image provided for generator {0}")]
    MissingImage(String),
    #[error("parse error at byte {at}: {message}")]
    Parse { at: usize, message: String },
}

/// A freely reduced word.
#[derive(Clone, PartialEq, Eq, Hash, Default, PartialOrd, Ord)]
pub struct Word {
    syllables: Vec<(Generator, i64)>,
}

fn push_syllable(stack: &mut Vec<(Generator, i64)>, gen: Generator, exp: i64) {
    if exp == 0 {
        return;
    }
    if let Some(last) = stack.last_mut() {
        if last.0 == gen {
            last.1 += exp;
            if last.1 == 0 {
                stack.pop();
            }
            return;
        }
    }
    stack.push((gen, exp));
}

impl Word {
    pub fn identity() -> Self {
        Word::default()
    }

    pub fn generator(g: Generator) -> Self {
        Word {
            syllables: vec![(g, 1)],
        }
    }

    pub fn syllable(g: Generator, exp: i64) -> Self {
        let mut w = Word::identity();
        push_syllable(&mut w.syllables, g, exp);
        w
    }

    /// Free reduction of an arbitrary syllable list. Idempotent.
    pub fn from_syllables<I: IntoIterator<Item = (Generator, i64)>>(raw: I) -> Self {
        let mut stack = Vec::new();
        for (g, e) in raw {
            push_syllable(&mut stack, g, e);
        }
        Word { syllables: stack }
    }

    pub fn syllables(&self) -> &[(Generator, i64)] {
        &self.syllables
    }

    pub fn is_identity(&self) -> bool {
        self.syllables.is_empty()
    }

    /// Total letter length (sum of absolute exponents).
    pub fn letter_len(&self) -> usize {
        self.syllables
            .iter()
            .map(|(_, e)| e.unsigned_abs() as usize)
            .sum()
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut stack = self.syllables.clone();
        for (g, e) in &other.syllables {
            push_syllable(&mut stack, g.clone(), *e);
        }
        Word { syllables: stack }
    }

    pub fn concat_all<'a, I: IntoIterator<Item = &'a Word>>(parts: I) -> Word {
        let mut stack = Vec::new();
        for w in parts {
            for (g, e) in &w.syllables {
                push_syllable(&mut stack, g.clone(), *e);
            }
        }
        Word { syllables: stack }
    }

    pub fn inverse(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .rev()
                .map(|(g, e)| (g.clone(), -e))
                .collect(),
        }
    }

    pub fn pow(&self, n: i64) -> Word {
        if n == 0 {
            return Word::identity();
        }
        let base = if n > 0 { self.clone() } else { self.inverse() };
        let mut out = Word::identity();
        for _ in 0..n.unsigned_abs() {
            out = out.concat(&base);
        }
        out
    }

    /// `c w c^-1`.
    pub fn conjugated_by(&self, c: &Word) -> Word {
        Word::concat_all([c, self, &c.inverse()])
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(a: &Word, b: &Word) -> Word {
        Word::concat_all([a, b, &a.inverse(), &b.inverse()])
    }

    /// Twisted commutator `[a, b]' = a b a b^-1`.
    pub fn twisted_commutator(a: &Word, b: &Word) -> Word {
        Word::concat_all([a, b, a, &b.inverse()])
    }

    /// Sum of the exponents of `g`. Additive under concatenation and
    /// negated by inversion.
    pub fn exponent_sum(&self, g: &Generator) -> i64 {
        self.syllables
            .iter()
            .filter(|(h, _)| h == g)
            .map(|(_, e)| e)
            .sum()
    }

    /// Homomorphic extension of a generator assignment. Inverse letters map
    /// to inverse words; the result is freely reduced.
    pub fn substitute(&self, images: &BTreeMap<Generator, Word>) -> Result<Word, WordError> {
        let mut stack = Vec::new();
        for (g, e) in &self.syllables {
            let image = images
                .get(g)
                .ok_or_else(|| WordError::MissingImage(g.token()))?;
            let powered = image.pow(*e);
            for (h, k) in powered.syllables {
                push_syllable(&mut stack, h, k);
            }
        }
        Ok(Word { syllables: stack })
    }

    /// Swap the strand family of every `Rho` letter.
    pub fn tilde(&self) -> Word {
        Word {
            syllables: self
                .syllables
                .iter()
                .map(|(g, e)| (g.tilde(), *e))
                .collect(),
        }
    }

    /// Expanded view: one `(generator, ±1)` item per letter.
    pub fn letters(&self) -> impl Iterator<Item = (Generator, i8)> + '_ {
        self.syllables.iter().flat_map(|(g, e)| {
            let sign: i8 = if *e > 0 { 1 } else { -1 };
            std::iter::repeat_n((g.clone(), sign), e.unsigned_abs() as usize)
        })
    }

    pub fn parse(input: &str) -> Result<Word, WordError> {
        Parser::new(input).parse_word_complete()
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.syllables.is_empty() {
            return f.write_str("e");
        }
        let parts: Vec<String> = self
            .syllables
            .iter()
            .map(|(g, e)| {
                if *e == 1 {
                    g.token()
                } else {
                    format!("{}^{}", g.token(), e)
                }
            })
            .collect();
        f.write_str(&parts.join("*"))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

impl Serialize for Word {
    fn serialize<S: Serializer>(&self, s: S) -> Result<S::Ok, S::Error> {
        s.serialize_str(&self.to_string())
    }
}

impl<'de> Deserialize<'de> for Word {
    fn deserialize<D: Deserializer<'de>>(d: D) -> Result<Self, D::Error> {
        let s = String::deserialize(d)?;
        Word::parse(&s).map_err(D::Error::custom)
    }
}

fn parse_generator_token(tok: &str) -> Result<Generator, String> {
    if tok == "s" {
        return Ok(Generator::Sigma);
    }
    if tok == "B" {
        return Ok(Generator::FullTwist);
    }
    if let Some(rest) = tok.strip_prefix('r') {
        if let Some((fam, idx)) = rest.split_once('_') {
            if let (Ok(f), Ok(i)) = (fam.parse::<u8>(), idx.parse::<u32>()) {
                if (f == 1 || f == 2) && i >= 1 {
                    return Ok(Generator::Rho {
                        family: f,
                        index: i,
                    });
                }
                return Err(format!("bad rho indices in `{tok}`"));
            }
        }
    }
    if tok.chars().all(|c| c.is_ascii_alphanumeric() || c == '_')
        && tok
            .chars()
            .next()
            .is_some_and(|c| c.is_ascii_alphabetic() || c == '_')
    {
        return Ok(Generator::Abstract(tok.to_string()));
    }
    Err(format!("not a generator token: `{tok}`"))
}

struct Parser<'a> {
    input: &'a str,
    bytes: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn new(input: &'a str) -> Self {
        Parser {
            input,
            bytes: input.as_bytes(),
            pos: 0,
        }
    }

    fn err(&self, message: impl Into<String>) -> WordError {
        WordError::Parse {
            at: self.pos,
            message: message.into(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn parse_word_complete(&mut self) -> Result<Word, WordError> {
        let w = self.parse_word()?;
        self.skip_ws();
        if self.pos != self.bytes.len() {
            return Err(self.err("trailing input"));
        }
        Ok(w)
    }

    fn parse_word(&mut self) -> Result<Word, WordError> {
        let mut out = Word::identity();
        loop {
            match self.peek() {
                None | Some(b')') | Some(b',') | Some(b']') => return Ok(out),
                Some(b'*') => {
                    self.pos += 1;
                    continue;
                }
                Some(_) => {
                    let f = self.parse_factor()?;
                    out = out.concat(&f);
                }
            }
        }
    }

    fn parse_factor(&mut self) -> Result<Word, WordError> {
        let base = self.parse_primary()?;
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let n = self.parse_int()?;
            return Ok(base.pow(n));
        }
        Ok(base)
    }

    fn parse_int(&mut self) -> Result<i64, WordError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        while self.bytes.get(self.pos).is_some_and(|b| b.is_ascii_digit()) {
            self.pos += 1;
        }
        self.input[start..self.pos]
            .parse::<i64>()
            .map_err(|_| self.err("expected integer"))
    }

    fn parse_primary(&mut self) -> Result<Word, WordError> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let w = self.parse_word()?;
                if self.peek() != Some(b')') {
                    return Err(self.err("expected `)`"));
                }
                self.pos += 1;
                Ok(w)
            }
            Some(b'[') => {
                self.pos += 1;
                let a = self.parse_word()?;
                if self.peek() != Some(b',') {
                    return Err(self.err("expected `,` in commutator"));
                }
                self.pos += 1;
                let b = self.parse_word()?;
                if self.peek() != Some(b']') {
                    return Err(self.err("expected `]`"));
                }
                self.pos += 1;
                if self.peek() == Some(b'\'') {
                    self.pos += 1;
                    Ok(Word::twisted_commutator(&a, &b))
                } else {
                    Ok(Word::commutator(&a, &b))
                }
            }
            Some(c) if c.is_ascii_alphanumeric() || c == b'_' => {
                let start = self.pos;
                while self
                    .bytes
                    .get(self.pos)
                    .is_some_and(|b| b.is_ascii_alphanumeric() || *b == b'_')
                {
                    self.pos += 1;
                }
                let tok = &self.input[start..self.pos];
                if tok == "e" || tok == "1" {
                    return Ok(Word::identity());
                }
                parse_generator_token(tok)
                    .map(Word::generator)
                    .map_err(|m| WordError::Parse {
                        at: start,
                        message: m,
                    })
            }
            _ => Err(self.err("expected word")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn g(name: &str) -> Generator {
        Generator::named(name)
    }

    fn rho(f: u8, i: u32) -> Generator {
        Generator::rho(f, i)
    }

    #[test]
    fn free_reduce_cancels_adjacent_inverses() {
        let w = Word::from_syllables([(g("a"), 1), (g("a"), -1), (g("b"), 2)]);
        assert_eq!(w, Word::syllable(g("b"), 2));
    }

    #[test]
    fn free_reduce_empty_is_identity() {
        assert!(Word::from_syllables([]).is_identity());
    }

    #[test]
    fn free_reduce_cascades() {
        // a^2 a^-1 a^-1 collapses in two merges
        let w = Word::from_syllables([(g("a"), 2), (g("a"), -1), (g("a"), -1)]);
        assert!(w.is_identity());
    }

    #[test]
    fn substitute_equal_images_cancel() {
        let w = Word::from_syllables([(g("a"), 1), (g("b"), -1)]);
        let mut images = BTreeMap::new();
        images.insert(g("a"), Word::generator(g("x")));
        images.insert(g("b"), Word::generator(g("x")));
        assert!(w.substitute(&images).unwrap().is_identity());
    }

    #[test]
    fn substitute_expands_powers() {
        let w = Word::syllable(g("a"), 2);
        let mut images = BTreeMap::new();
        images.insert(g("a"), Word::from_syllables([(g("x"), 1), (g("y"), 1)]));
        let out = w.substitute(&images).unwrap();
        assert_eq!(out.to_string(), "x*y*x*y");
    }

    #[test]
    fn substitute_commutator_with_identity_image() {
        let w = Word::commutator(&Word::generator(g("a")), &Word::generator(g("b")));
        let mut images = BTreeMap::new();
        images.insert(g("a"), Word::identity());
        images.insert(g("b"), Word::generator(Generator::Sigma));
        assert!(w.substitute(&images).unwrap().is_identity());
    }

    #[test]
    fn substitute_missing_image_errors() {
        let w = Word::generator(g("a"));
        let images = BTreeMap::new();
        assert_eq!(
            w.substitute(&images),
            Err(WordError::MissingImage("a".into()))
        );
    }

    #[test]
    fn exponent_sum_counts_before_reduction_shape() {
        // built from an unreduced list; the reduced word still sums to 2
        let w = Word::from_syllables([(rho(1, 1), 3), (rho(2, 1), -1), (rho(1, 1), -1)]);
        assert_eq!(w.exponent_sum(&rho(1, 1)), 2);
    }

    #[test]
    fn commutator_exponent_sums_vanish() {
        let u = Word::from_syllables([(rho(1, 1), 2), (rho(1, 2), -1)]);
        let v = Word::from_syllables([(rho(2, 1), 1), (rho(1, 1), 3)]);
        let c = Word::commutator(&u, &v);
        for gen in [rho(1, 1), rho(1, 2), rho(2, 1)] {
            assert_eq!(c.exponent_sum(&gen), 0);
        }
    }

    #[test]
    fn commutator_degenerate_cases() {
        let a = Word::generator(g("a"));
        assert!(Word::commutator(&a, &a).is_identity());
        assert!(Word::commutator(&a, &Word::identity()).is_identity());
    }

    #[test]
    fn twisted_commutator_klein_relator() {
        let alpha = Word::generator(g("alpha"));
        let beta = Word::generator(g("beta"));
        let t = Word::twisted_commutator(&alpha, &beta);
        assert_eq!(t.to_string(), "alpha*beta*alpha*beta^-1");
    }

    #[test]
    fn parse_round_trip() {
        for s in [
            "e",
            "r1_3^2*r2_1^-1*B",
            "s^-3",
            "[r1_1,r1_2^-1]*B^-1",
            "[alpha,beta]'",
            "(a*b)^2",
            "v^2*[a1,a2]",
        ] {
            let w = Word::parse(s).unwrap();
            let again = Word::parse(&w.to_string()).unwrap();
            assert_eq!(w, again, "round trip failed for {s}");
        }
    }

    #[test]
    fn parse_rejects_garbage() {
        assert!(Word::parse("[a,b").is_err());
        assert!(Word::parse("a^").is_err());
        assert!(Word::parse("r3_1").is_err());
        assert!(Word::parse("a )").is_err());
    }

    #[test]
    fn tilde_swaps_families_and_fixes_rest() {
        let w = Word::parse("r1_2*r2_3^-2*B*s").unwrap();
        assert_eq!(w.tilde().to_string(), "r2_2*r1_3^-2*B*s");
    }

    fn arb_gen() -> impl Strategy<Value = Generator> {
        prop_oneof![
            (1u8..=2, 1u32..=4).prop_map(|(f, i)| Generator::rho(f, i)),
            Just(Generator::Sigma),
            Just(Generator::FullTwist),
            "[abc]".prop_map(Generator::Abstract),
        ]
    }

    fn arb_raw() -> impl Strategy<Value = Vec<(Generator, i64)>> {
        proptest::collection::vec((arb_gen(), -4i64..=4), 0..24)
    }

    proptest! {
        #[test]
        fn reduction_is_idempotent(raw in arb_raw()) {
            let once = Word::from_syllables(raw.clone());
            let twice = Word::from_syllables(once.syllables().to_vec());
            prop_assert_eq!(once, twice);
        }

        #[test]
        fn concat_matches_syllable_fold(raw1 in arb_raw(), raw2 in arb_raw()) {
            let u = Word::from_syllables(raw1.clone());
            let v = Word::from_syllables(raw2.clone());
            let mut all = raw1;
            all.extend(raw2);
            prop_assert_eq!(u.concat(&v), Word::from_syllables(all));
        }

        #[test]
        fn exponent_sum_additive(raw1 in arb_raw(), raw2 in arb_raw(), gen in arb_gen()) {
            let u = Word::from_syllables(raw1);
            let v = Word::from_syllables(raw2);
            prop_assert_eq!(
                u.concat(&v).exponent_sum(&gen),
                u.exponent_sum(&gen) + v.exponent_sum(&gen)
            );
        }

        #[test]
        fn exponent_sum_negates_under_inverse(raw in arb_raw(), gen in arb_gen()) {
            let u = Word::from_syllables(raw);
            prop_assert_eq!(u.inverse().exponent_sum(&gen), -u.exponent_sum(&gen));
        }

        #[test]
        fn inverse_cancels(raw in arb_raw()) {
            let u = Word::from_syllables(raw);
            prop_assert!(u.concat(&u.inverse()).is_identity());
        }

        #[test]
        fn substitution_is_homomorphic(raw1 in arb_raw(), raw2 in arb_raw()) {
            let mut images = BTreeMap::new();
            images.insert(Generator::named("a"), Word::parse("x*y").unwrap());
            images.insert(Generator::named("b"), Word::parse("y^-1").unwrap());
            images.insert(Generator::named("c"), Word::identity());
            images.insert(Generator::Sigma, Word::parse("x").unwrap());
            images.insert(Generator::FullTwist, Word::parse("x^2").unwrap());
            for f in 1u8..=2 {
                for i in 1u32..=4 {
                    images.insert(Generator::rho(f, i), Word::parse("y").unwrap());
                }
            }
            let u = Word::from_syllables(raw1);
            let v = Word::from_syllables(raw2);
            let lhs = u.concat(&v).substitute(&images).unwrap();
            let rhs = u.substitute(&images).unwrap().concat(&v.substitute(&images).unwrap());
            prop_assert_eq!(lhs, rhs);
        }
    }
}
