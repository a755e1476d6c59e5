//! Letters, words, the `π_X`/`π_Y` encodings and Lyndon words.
//!
//! Two alphabets are used throughout: `X = {x0, x1}` for iterated-integral
//! indexing and `Y0 = {y0, y1, ...}` for nested-sum indexing. A word is a
//! sequence of letters from a single alphabet; the empty word prints as `1`.

use std::fmt;
use std::str::FromStr;

use crate::error::{Error, Result};
use crate::ncpoly::NCPoly;

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Alphabet {
    X,
    Y0,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Letter {
    alphabet: Alphabet,
    index: u32,
}

impl Letter {
    pub const X0: Letter = Letter {
        alphabet: Alphabet::X,
        index: 0,
    };
    pub const X1: Letter = Letter {
        alphabet: Alphabet::X,
        index: 1,
    };

    pub fn x(index: u32) -> Result<Letter> {
        if index > 1 {
            return Err(Error::InvalidLetter(format!("x{index}")));
        }
        Ok(Letter {
            alphabet: Alphabet::X,
            index,
        })
    }

    pub fn y(index: u32) -> Letter {
        Letter {
            alphabet: Alphabet::Y0,
            index,
        }
    }

    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    pub fn index(&self) -> u32 {
        self.index
    }

    /// Exchanges `x0` and `x1`; identity on `Y0`.
    pub fn swapped(self) -> Letter {
        match self.alphabet {
            Alphabet::X => Letter {
                alphabet: Alphabet::X,
                index: 1 - self.index,
            },
            Alphabet::Y0 => self,
        }
    }
}

impl fmt::Display for Letter {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.alphabet {
            Alphabet::X => write!(f, "x{}", self.index),
            Alphabet::Y0 => write!(f, "y{}", self.index),
        }
    }
}

impl FromStr for Letter {
    type Err = Error;

    fn from_str(s: &str) -> Result<Letter> {
        let bad = || Error::InvalidLetter(s.to_string());
        let (head, digits) = s.split_at(s.chars().next().map_or(0, char::len_utf8));
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return Err(bad());
        }
        let index: u32 = digits.parse().map_err(|_| bad())?;
        match head {
            "x" => Letter::x(index),
            "y" => Ok(Letter::y(index)),
            _ => Err(bad()),
        }
    }
}

/// A finite word over one alphabet. Ordering is lexicographic with prefixes first.
#[derive(Debug, Clone, Default, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Word(Vec<Letter>);

impl Word {
    pub fn empty() -> Word {
        Word(Vec::new())
    }

    pub fn new(letters: Vec<Letter>) -> Result<Word> {
        if let Some(first) = letters.first() {
            if let Some(other) = letters.iter().find(|l| l.alphabet != first.alphabet) {
                return Err(Error::AlphabetMismatch(format!(
                    "{first} and {other} in one word"
                )));
            }
        }
        Ok(Word(letters))
    }

    pub fn letter(l: Letter) -> Word {
        Word(vec![l])
    }

    /// Word over `X` from a slice of indices, e.g. `[0, 1, 1]` for `x0 x1 x1`.
    pub fn x(indices: &[u32]) -> Word {
        Word(
            indices
                .iter()
                .map(|&i| Letter::x(i).expect("x index must be 0 or 1"))
                .collect(),
        )
    }

    /// Word over `Y0` from a slice of subscripts.
    pub fn y(indices: &[u32]) -> Word {
        Word(indices.iter().map(|&i| Letter::y(i)).collect())
    }

    pub fn x0_pow(n: usize) -> Word {
        Word(vec![Letter::X0; n])
    }

    pub fn letters(&self) -> &[Letter] {
        &self.0
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn alphabet(&self) -> Option<Alphabet> {
        self.0.first().map(|l| l.alphabet)
    }

    pub fn first(&self) -> Option<Letter> {
        self.0.first().copied()
    }

    pub fn last(&self) -> Option<Letter> {
        self.0.last().copied()
    }

    /// The word without its first letter.
    pub fn tail(&self) -> Word {
        Word(self.0.get(1..).unwrap_or_default().to_vec())
    }

    pub fn concat(&self, other: &Word) -> Word {
        let mut letters = Vec::with_capacity(self.len() + other.len());
        letters.extend_from_slice(&self.0);
        letters.extend_from_slice(&other.0);
        Word(letters)
    }

    pub fn push(&self, l: Letter) -> Word {
        let mut letters = self.0.clone();
        letters.push(l);
        Word(letters)
    }

    pub fn prepend(&self, l: Letter) -> Word {
        let mut letters = Vec::with_capacity(self.len() + 1);
        letters.push(l);
        letters.extend_from_slice(&self.0);
        Word(letters)
    }

    pub fn reversed(&self) -> Word {
        Word(self.0.iter().rev().copied().collect())
    }

    pub fn swapped(&self) -> Word {
        Word(self.0.iter().map(|l| l.swapped()).collect())
    }

    /// Sum of subscripts, `(w)` for a word over `Y0`.
    pub fn weight(&self) -> u64 {
        self.0.iter().map(|l| u64::from(l.index)).sum()
    }

    pub fn count(&self, l: Letter) -> usize {
        self.0.iter().filter(|&&m| m == l).count()
    }

    pub fn is_x0_power(&self) -> bool {
        self.0.iter().all(|&l| l == Letter::X0)
    }

    /// True for the empty word and for words ending in `x1`.
    pub fn is_x1_terminal(&self) -> bool {
        self.0.last().is_none_or(|&l| l == Letter::X1)
    }

    pub fn suffixes(&self) -> impl Iterator<Item = Word> + '_ {
        (1..self.len()).map(move |i| Word(self.0[i..].to_vec()))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.0.is_empty() {
            return write!(f, "1");
        }
        for (i, l) in self.0.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{l}")?;
        }
        Ok(())
    }
}

impl FromStr for Word {
    type Err = Error;

    /// Accepts whitespace-separated letters (`x0 x1`, `y2 y0`), run-together
    /// letters (`x0x1`), or `1` for the empty word.
    fn from_str(s: &str) -> Result<Word> {
        let s = s.trim();
        if s.is_empty() || s == "1" {
            return Ok(Word::empty());
        }
        let mut letters = Vec::new();
        let bytes = s.as_bytes();
        let mut i = 0;
        while i < bytes.len() {
            if bytes[i].is_ascii_whitespace() {
                i += 1;
                continue;
            }
            let start = i;
            i += 1;
            while i < bytes.len() && bytes[i].is_ascii_digit() {
                i += 1;
            }
            letters.push(s[start..i].parse::<Letter>()?);
        }
        Word::new(letters)
    }
}

/// `y_{s1}...y_{sr} -> x0^{s1-1} x1 ... x0^{sr-1} x1`.
pub fn pi_x(w: &Word) -> Result<Word> {
    let mut letters = Vec::new();
    for l in w.letters() {
        match l.alphabet {
            Alphabet::Y0 if l.index == 0 => return Err(Error::PiXOnY0),
            Alphabet::Y0 => {
                letters.extend(std::iter::repeat_n(Letter::X0, l.index as usize - 1));
                letters.push(Letter::X1);
            }
            Alphabet::X => {
                return Err(Error::AlphabetMismatch(format!(
                    "pi_X expects a Y-word, got {w}"
                )));
            }
        }
    }
    Ok(Word(letters))
}

/// Inverse of [`pi_x`] on `{1} ∪ X*x1`; `None` when `w` ends in `x0`.
pub fn pi_y_word(w: &Word) -> Result<Option<Word>> {
    if w.alphabet() == Some(Alphabet::Y0) {
        return Err(Error::AlphabetMismatch(format!(
            "pi_Y expects an X-word, got {w}"
        )));
    }
    if !w.is_x1_terminal() {
        return Ok(None);
    }
    let mut letters = Vec::new();
    let mut zeros = 0;
    for l in w.letters() {
        if *l == Letter::X0 {
            zeros += 1;
        } else {
            letters.push(Letter::y(zeros + 1));
            zeros = 0;
        }
    }
    Ok(Some(Word(letters)))
}

/// `π_Y` as a linear map into polynomials: the Y-word, or zero on `X*x0`.
pub fn pi_y(w: &Word) -> Result<NCPoly> {
    Ok(match pi_y_word(w)? {
        Some(y) => NCPoly::from_word(y),
        None => NCPoly::zero(),
    })
}

/// Strictly smaller than each of its proper right factors.
pub fn is_lyndon(w: &Word) -> bool {
    !w.is_empty() && w.suffixes().all(|s| *w < s)
}

/// All Lyndon words of length `1..=max_len` over `letters` (sorted ascending),
/// in lexicographic order.
pub fn lyndon_words(letters: &[Letter], max_len: usize) -> Vec<Word> {
    let mut alphabet = letters.to_vec();
    alphabet.sort();
    alphabet.dedup();
    let k = alphabet.len();
    let mut out = Vec::new();
    if k == 0 || max_len == 0 {
        return out;
    }
    // Duval's successor: periodic extension, strip maximal letters, bump the last one.
    let mut w: Vec<usize> = vec![0];
    loop {
        out.push(Word(w.iter().map(|&i| alphabet[i]).collect()));
        let m = w.len();
        while w.len() < max_len {
            w.push(w[w.len() - m]);
        }
        while w.last() == Some(&(k - 1)) {
            w.pop();
        }
        match w.last_mut() {
            Some(last) => *last += 1,
            None => break,
        }
    }
    out
}

pub fn lyndon_words_x(max_len: usize) -> Vec<Word> {
    lyndon_words(&[Letter::X0, Letter::X1], max_len)
}

/// Duval factorization into a non-increasing sequence of Lyndon words.
pub fn lyndon_factorization(w: &Word) -> Vec<Word> {
    let s = w.letters();
    let n = s.len();
    let mut factors = Vec::new();
    let mut i = 0;
    while i < n {
        let mut j = i + 1;
        let mut k = i;
        while j < n && s[k] <= s[j] {
            if s[k] < s[j] {
                k = i;
            } else {
                k += 1;
            }
            j += 1;
        }
        while i <= k {
            factors.push(Word(s[i..i + j - k].to_vec()));
            i += j - k;
        }
    }
    factors
}

#[cfg(test)]
mod tests {
    use super::*;

    fn w(s: &str) -> Word {
        s.parse().unwrap()
    }

    #[test]
    fn pi_x_examples() {
        assert_eq!(pi_x(&w("y1")).unwrap(), w("x1"));
        assert_eq!(pi_x(&w("y2 y1")).unwrap(), w("x0 x1 x1"));
        assert_eq!(pi_x(&Word::empty()).unwrap(), Word::empty());
        assert_eq!(pi_x(&w("y2 y0")), Err(Error::PiXOnY0));
        assert_eq!(pi_x(&w("y3 y2")).unwrap().len(), 5);
    }

    #[test]
    fn pi_y_examples() {
        assert_eq!(pi_y(&w("x0 x1")).unwrap(), NCPoly::from_word(w("y2")));
        assert!(pi_y(&w("x1 x0")).unwrap().is_zero());
        assert_eq!(pi_y(&Word::empty()).unwrap(), NCPoly::one());
    }

    #[test]
    fn word_parsing() {
        assert_eq!(w("x0x1x1"), w("x0 x1 x1"));
        assert_eq!(w("y12").letters(), &[Letter::y(12)]);
        assert!("x2".parse::<Word>().is_err());
        assert!("x0 y1".parse::<Word>().is_err());
        assert!("z1".parse::<Word>().is_err());
        assert_eq!(w("1"), Word::empty());
        assert_eq!(w("y2 y0").to_string(), "y2 y0");
        assert_eq!(Word::empty().to_string(), "1");
    }

    #[test]
    fn lyndon_small() {
        assert_eq!(lyndon_words_x(1), vec![w("x0"), w("x1")]);
        assert_eq!(
            lyndon_words_x(3),
            vec![w("x0"), w("x0 x0 x1"), w("x0 x1"), w("x0 x1 x1"), w("x1")]
        );
        assert!(!is_lyndon(&w("x1 x0")));
        assert!(is_lyndon(&w("x0 x1 x1")));
        assert!(!is_lyndon(&w("x0 x0")));
    }

    #[test]
    fn lyndon_matches_brute_force() {
        for n in 1..=8 {
            let brute: Vec<Word> = all_words(n).into_iter().filter(is_lyndon).collect();
            let mut generated = lyndon_words_x(n);
            generated.sort();
            let mut brute_sorted = brute;
            brute_sorted.sort();
            assert_eq!(generated, brute_sorted, "n = {n}");
        }
    }

    #[test]
    fn unique_lyndon_factorization() {
        let lyndon = lyndon_words_x(8);
        for n in 0..=8 {
            for word in all_words_of_len(n) {
                let f = lyndon_factorization(&word);
                assert_eq!(f.iter().fold(Word::empty(), |acc, x| acc.concat(x)), word);
                assert!(f.iter().all(|x| lyndon.contains(x)));
                assert!(f.windows(2).all(|p| p[0] >= p[1]));
                // Uniqueness: no other non-increasing Lyndon factorization exists.
                assert_eq!(count_factorizations(&word, &lyndon, None), 1, "{word}");
            }
        }
    }

    fn count_factorizations(w: &Word, lyndon: &[Word], bound: Option<&Word>) -> usize {
        if w.is_empty() {
            return 1;
        }
        (1..=w.len())
            .filter_map(|i| {
                let head = Word(w.letters()[..i].to_vec());
                let ok = lyndon.contains(&head) && bound.is_none_or(|b| head <= *b);
                ok.then(|| {
                    count_factorizations(&Word(w.letters()[i..].to_vec()), lyndon, Some(&head))
                })
            })
            .sum()
    }

    fn all_words_of_len(n: usize) -> Vec<Word> {
        (0..1u32 << n)
            .map(|bits| {
                Word::x(
                    &(0..n)
                        .map(|i| (bits >> (n - 1 - i)) & 1)
                        .collect::<Vec<_>>(),
                )
            })
            .collect()
    }

    fn all_words(max: usize) -> Vec<Word> {
        (1..=max).flat_map(all_words_of_len).collect()
    }

    #[test]
    fn pi_roundtrips() {
        for word in all_words(7) {
            match pi_y_word(&word).unwrap() {
                Some(y) => assert_eq!(pi_x(&y).unwrap(), word),
                None => assert_eq!(word.last(), Some(Letter::X0)),
            }
        }
        for s in ["y1", "y3 y1 y2", "y1 y1 y1", "y5"] {
            let y = w(s);
            assert_eq!(pi_y_word(&pi_x(&y).unwrap()).unwrap(), Some(y));
        }
    }
}
