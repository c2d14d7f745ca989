//! Alphabets with involution, words over them, and the shortlex order.

use std::cmp::Ordering;
use std::fmt;

use crate::error::WordError;

/// A letter is its rank in the alphabet's total order.
pub type Letter = u8;

/// A finite symmetric alphabet.
///
/// Letters are stored by rank, so comparing two letters numerically is
/// the same as comparing them in the declared order.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    names: Vec<String>,
    inverse: Vec<Letter>,
}

impl Alphabet {
    /// Builds an alphabet from letter names listed in shortlex order and a
    /// list of inverse pairs. A pair `(s, s)` declares `s` self-inverse.
    pub fn new<S: AsRef<str>>(order: &[S], pairs: &[(S, S)]) -> Result<Self, WordError> {
        if order.is_empty() {
            return Err(WordError::EmptyAlphabet);
        }
        if order.len() > Letter::MAX as usize {
            return Err(WordError::AlphabetTooLarge(order.len()));
        }
        let names: Vec<String> = order.iter().map(|s| s.as_ref().to_string()).collect();
        for (i, n) in names.iter().enumerate() {
            if n.is_empty() || n.chars().any(char::is_whitespace) {
                return Err(WordError::BadLetterName(n.clone()));
            }
            if names[..i].contains(n) {
                return Err(WordError::DuplicateLetter(n.clone()));
            }
        }
        let find = |s: &str| {
            names
                .iter()
                .position(|n| n == s)
                .map(|p| p as Letter)
                .ok_or_else(|| WordError::UnknownLetter(s.to_string()))
        };
        let mut inverse: Vec<Option<Letter>> = vec![None; names.len()];
        for (a, b) in pairs {
            let (a, b) = (find(a.as_ref())?, find(b.as_ref())?);
            for (x, y) in [(a, b), (b, a)] {
                match inverse[x as usize] {
                    Some(prev) if prev != y => {
                        return Err(WordError::InconsistentInverse(names[x as usize].clone()))
                    }
                    _ => inverse[x as usize] = Some(y),
                }
            }
        }
        let inverse = inverse
            .into_iter()
            .enumerate()
            .map(|(i, v)| v.ok_or_else(|| WordError::MissingInverse(names[i].clone())))
            .collect::<Result<Vec<_>, _>>()?;
        Ok(Alphabet { names, inverse })
    }

    pub fn len(&self) -> usize {
        self.names.len()
    }

    pub fn is_empty(&self) -> bool {
        self.names.is_empty()
    }

    pub fn letters(&self) -> impl Iterator<Item = Letter> + '_ {
        (0..self.names.len()).map(|i| i as Letter)
    }

    pub fn name(&self, x: Letter) -> &str {
        &self.names[x as usize]
    }

    pub fn names(&self) -> &[String] {
        &self.names
    }

    pub fn inverse(&self, x: Letter) -> Letter {
        self.inverse[x as usize]
    }

    pub fn letter(&self, name: &str) -> Result<Letter, WordError> {
        self.names
            .iter()
            .position(|n| n == name)
            .map(|p| p as Letter)
            .ok_or_else(|| WordError::UnknownLetter(name.to_string()))
    }

    fn single_char(&self) -> bool {
        self.names.iter().all(|n| n.chars().count() == 1)
    }

    /// Parses a word. Whitespace separates letters; a token that is not a
    /// letter name is split greedily into the longest matching names.
    /// `""` and `"ε"` denote the empty word.
    pub fn parse_word(&self, text: &str) -> Result<Word, WordError> {
        let mut letters = Vec::new();
        for token in text.split_whitespace() {
            if token == "ε" {
                continue;
            }
            if let Ok(x) = self.letter(token) {
                letters.push(x);
                continue;
            }
            let mut rest = token;
            while !rest.is_empty() {
                let best = self
                    .names
                    .iter()
                    .enumerate()
                    .filter(|(_, n)| rest.starts_with(n.as_str()))
                    .max_by_key(|(_, n)| n.len())
                    .ok_or_else(|| WordError::UnknownLetter(rest.to_string()))?;
                letters.push(best.0 as Letter);
                rest = &rest[best.1.len()..];
            }
        }
        Ok(Word(letters))
    }

    /// Renders a word; letters are concatenated when every name is a
    /// single character and space separated otherwise.
    pub fn format_word(&self, w: &Word) -> String {
        let sep = if self.single_char() { "" } else { " " };
        w.0.iter()
            .map(|&x| self.name(x))
            .collect::<Vec<_>>()
            .join(sep)
    }

    pub fn check_word(&self, w: &Word) -> Result<(), WordError> {
        match w.0.iter().find(|&&x| x as usize >= self.len()) {
            Some(&x) => Err(WordError::LetterOutOfRange(x)),
            None => Ok(()),
        }
    }

    /// Formal inverse `x1…xn ↦ xn⁻¹…x1⁻¹`.
    pub fn invert_word(&self, w: &Word) -> Word {
        Word(w.0.iter().rev().map(|&x| self.inverse(x)).collect())
    }

    /// Shortlex comparison: shorter words first, ties broken by the
    /// alphabet order.
    pub fn shortlex_compare(&self, a: &Word, b: &Word) -> Result<Ordering, WordError> {
        self.check_word(a)?;
        self.check_word(b)?;
        Ok(shortlex(a.letters(), b.letters()))
    }
}

/// Shortlex order on raw letter slices.
pub fn shortlex(a: &[Letter], b: &[Letter]) -> Ordering {
    a.len().cmp(&b.len()).then_with(|| a.cmp(b))
}

/// A word over an [`Alphabet`], stored as letter ranks.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Word(pub Vec<Letter>);

impl Word {
    pub fn empty() -> Self {
        Word(Vec::new())
    }

    pub fn from_letters(letters: &[Letter]) -> Self {
        Word(letters.to_vec())
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

    pub fn concat(&self, other: &Word) -> Word {
        let mut v = self.0.clone();
        v.extend_from_slice(&other.0);
        Word(v)
    }

    pub fn push(&mut self, x: Letter) {
        self.0.push(x);
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{:?}", self.0)
    }
}

/// Every word of length exactly `n`, in lexicographic order.
pub fn all_words(alphabet_len: usize, n: usize) -> impl Iterator<Item = Word> {
    let total = (alphabet_len as u64).checked_pow(n as u32).unwrap_or(u64::MAX);
    (0..total).map(move |mut code| {
        let mut v = vec![0 as Letter; n];
        for slot in v.iter_mut().rev() {
            *slot = (code % alphabet_len as u64) as Letter;
            code /= alphabet_len as u64;
        }
        Word(v)
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn xy() -> Alphabet {
        Alphabet::new(&["x", "X", "y", "Y"], &[("x", "X"), ("y", "Y")]).unwrap()
    }

    #[test]
    fn shortlex_examples() {
        let a = xy();
        let w = |s| a.parse_word(s).unwrap();
        assert_eq!(a.shortlex_compare(&w("x"), &w("xy")).unwrap(), Ordering::Less);
        assert_eq!(a.shortlex_compare(&w("xy"), &w("yx")).unwrap(), Ordering::Less);
        assert_eq!(a.shortlex_compare(&w(""), &w("")).unwrap(), Ordering::Equal);
    }

    #[test]
    fn foreign_letters_rejected() {
        let a = xy();
        let bad = Word(vec![7]);
        assert!(a.shortlex_compare(&bad, &Word::empty()).is_err());
    }

    #[test]
    fn inversion() {
        let a = xy();
        assert_eq!(a.format_word(&a.invert_word(&a.parse_word("xy").unwrap())), "YX");
        assert!(a.invert_word(&Word::empty()).is_empty());
        let s = Alphabet::new(&["s", "t"], &[("s", "s"), ("t", "t")]).unwrap();
        let ss = s.parse_word("ss").unwrap();
        assert_eq!(s.invert_word(&ss), ss);
    }

    #[test]
    fn alphabet_validation() {
        assert!(Alphabet::new(&["a", "A"], &[("a", "A"), ("a", "a")]).is_err());
        assert!(Alphabet::new(&["a", "A"], &[]).is_err());
        assert!(Alphabet::new(&["a", "a"], &[("a", "a")]).is_err());
    }

    #[test]
    fn multi_char_names() {
        let a = Alphabet::new(&["a1", "A1", "a"], &[("a1", "A1"), ("a", "a")]).unwrap();
        let w = a.parse_word("a1a A1").unwrap();
        assert_eq!(w.letters(), &[0, 2, 1]);
        assert_eq!(a.format_word(&w), "a1 a A1");
    }

    #[test]
    fn word_enumeration() {
        let words: Vec<_> = all_words(2, 2).collect();
        assert_eq!(words.len(), 4);
        assert_eq!(words[1].letters(), &[0, 1]);
        assert_eq!(all_words(3, 0).count(), 1);
    }
}
