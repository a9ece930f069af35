//! Alphabets, words, letterwise XOR and the definition-level vigemin.
//!
//! Letters are small integers `0..|Σ|`; the XOR of two letters is the integer
//! XOR of their codes, so the DNA Cayley table (`A=00, C=01, G=10, T=11`) falls
//! out of the encoding rather than being stored.

use std::cmp::Ordering;
use std::fmt;
use std::str::FromStr;

use rand::Rng;

use crate::error::{Error, Result};

pub type Letter = u8;

const DNA_SYMBOLS: &[u8] = b"ACGT";
const DIGIT_SYMBOLS: &[u8] = b"0123456789ABCDEFGHIJKLMNOPQRSTUV";

/// Largest supported `b` in `|Σ| = 2^b`. Letter sets are 32-bit masks.
pub const MAX_BITS_PER_LETTER: u8 = 5;

/// An alphabet of size `2^b`.
///
/// `b = 2` is the DNA alphabet rendered as `ACGT`; other sizes render letters
/// with the digits `0-9` followed by `A-V`.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub struct Alphabet {
    bits: u8,
}

impl Alphabet {
    pub const DNA: Alphabet = Alphabet { bits: 2 };

    pub fn new(bits_per_letter: u8) -> Result<Self> {
        if bits_per_letter == 0 || bits_per_letter > MAX_BITS_PER_LETTER {
            return Err(Error::invalid(format!(
                "bits per letter must be in 1..={MAX_BITS_PER_LETTER}, got {bits_per_letter}"
            )));
        }
        Ok(Alphabet {
            bits: bits_per_letter,
        })
    }

    /// Build an alphabet from its size, rejecting sizes that are not powers of two.
    pub fn with_size(size: usize) -> Result<Self> {
        if !size.is_power_of_two() || size < 2 {
            return Err(Error::invalid(format!(
                "alphabet size must be a power of two >= 2, got {size}"
            )));
        }
        Alphabet::new(size.trailing_zeros() as u8)
    }

    #[inline]
    pub fn bits(self) -> u8 {
        self.bits
    }

    #[inline]
    pub fn size(self) -> usize {
        1usize << self.bits
    }

    pub fn symbols(self) -> &'static [u8] {
        if self.bits == 2 {
            DNA_SYMBOLS
        } else {
            &DIGIT_SYMBOLS[..self.size()]
        }
    }

    pub fn symbol(self, letter: Letter) -> char {
        self.symbols()[letter as usize] as char
    }

    /// Decode one symbol; lowercase input is accepted.
    pub fn letter(self, symbol: char) -> Option<Letter> {
        let upper = symbol.to_ascii_uppercase();
        self.symbols()
            .iter()
            .position(|&s| s as char == upper)
            .map(|p| p as Letter)
    }

    #[inline]
    pub fn letters(self) -> impl Iterator<Item = Letter> {
        0..self.size() as Letter
    }

    #[inline]
    pub fn full_set(self) -> LetterSet {
        LetterSet(((1u64 << self.size()) - 1) as u32)
    }

    /// `|Σ|^n`, if it fits in 128 bits.
    pub fn power(self, n: usize) -> Option<u128> {
        let shift = n.checked_mul(self.bits as usize)?;
        (shift < 128).then(|| 1u128 << shift)
    }
}

impl Default for Alphabet {
    fn default() -> Self {
        Alphabet::DNA
    }
}

impl FromStr for Alphabet {
    type Err = Error;

    /// Accepts `dna` or `b:<bits>`.
    fn from_str(s: &str) -> Result<Self> {
        if s.eq_ignore_ascii_case("dna") {
            return Ok(Alphabet::DNA);
        }
        let bits = s
            .strip_prefix("b:")
            .and_then(|b| b.parse::<u8>().ok())
            .ok_or_else(|| Error::invalid(format!("unknown alphabet {s:?}, expected dna or b:INT")))?;
        Alphabet::new(bits)
    }
}

#[inline]
pub fn letter_xor(a: Letter, b: Letter) -> Letter {
    a ^ b
}

/// A set of letters as a bitmask.
#[derive(Clone, Copy, Default, PartialEq, Eq, Hash)]
pub struct LetterSet(u32);

impl LetterSet {
    pub const EMPTY: LetterSet = LetterSet(0);

    #[inline]
    pub fn singleton(a: Letter) -> Self {
        LetterSet(1 << a)
    }

    #[inline]
    pub fn contains(self, a: Letter) -> bool {
        self.0 >> a & 1 == 1
    }

    #[inline]
    pub fn insert(&mut self, a: Letter) {
        self.0 |= 1 << a;
    }

    #[inline]
    pub fn union(self, other: LetterSet) -> Self {
        LetterSet(self.0 | other.0)
    }

    #[inline]
    pub fn intersection(self, other: LetterSet) -> Self {
        LetterSet(self.0 & other.0)
    }

    #[inline]
    pub fn difference(self, other: LetterSet) -> Self {
        LetterSet(self.0 & !other.0)
    }

    #[inline]
    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn iter(self) -> impl Iterator<Item = Letter> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let a = bits.trailing_zeros() as Letter;
                bits &= bits - 1;
                Some(a)
            }
        })
    }

    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> Self {
        let mut set = LetterSet::EMPTY;
        for a in letters {
            set.insert(a);
        }
        set
    }
}

impl fmt::Debug for LetterSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.debug_set().entries(self.iter()).finish()
    }
}

/// A finite sequence of letters over an [`Alphabet`].
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Word {
    alphabet: Alphabet,
    letters: Vec<Letter>,
}

impl Word {
    pub fn new(alphabet: Alphabet, letters: Vec<Letter>) -> Result<Self> {
        if let Some(&bad) = letters.iter().find(|&&a| a as usize >= alphabet.size()) {
            return Err(Error::invalid(format!(
                "letter value {bad} outside alphabet of size {}",
                alphabet.size()
            )));
        }
        Ok(Word { alphabet, letters })
    }

    pub fn empty(alphabet: Alphabet) -> Self {
        Word {
            alphabet,
            letters: Vec::new(),
        }
    }

    pub fn parse(alphabet: Alphabet, text: &str) -> Result<Self> {
        let letters = text
            .chars()
            .enumerate()
            .map(|(position, symbol)| {
                alphabet
                    .letter(symbol)
                    .ok_or(Error::UnknownSymbol { symbol, position })
            })
            .collect::<Result<Vec<_>>>()?;
        Ok(Word { alphabet, letters })
    }

    pub fn dna(text: &str) -> Result<Self> {
        Word::parse(Alphabet::DNA, text)
    }

    /// `prefix` followed by uniformly random letters, up to length `len`.
    pub fn random_with_prefix<R: Rng>(alphabet: Alphabet, prefix: &[Letter], len: usize, rng: &mut R) -> Self {
        assert!(prefix.iter().all(|&a| (a as usize) < alphabet.size()));
        let mut letters = prefix[..prefix.len().min(len)].to_vec();
        while letters.len() < len {
            letters.push(rng.gen_range(0..alphabet.size()) as Letter);
        }
        Word { alphabet, letters }
    }

    /// The constant word `a^len`.
    pub fn repeat(alphabet: Alphabet, letter: Letter, len: usize) -> Self {
        assert!((letter as usize) < alphabet.size());
        Word {
            alphabet,
            letters: vec![letter; len],
        }
    }

    /// The word of length `len` whose lexicographic rank (0-based) is `rank`.
    pub fn from_rank(alphabet: Alphabet, rank: u64, len: usize) -> Self {
        let mask = (alphabet.size() - 1) as u64;
        let bits = alphabet.bits() as usize;
        let letters = (0..len)
            .rev()
            .map(|p| {
                let shift = p * bits;
                if shift >= 64 {
                    0
                } else {
                    (rank >> shift & mask) as Letter
                }
            })
            .collect();
        Word { alphabet, letters }
    }

    /// 0-based lexicographic rank among words of the same length.
    pub fn rank(&self) -> Result<u64> {
        if self.len() * self.alphabet.bits() as usize > 64 {
            return Err(Error::invalid(format!(
                "word of length {} does not fit a 64-bit rank",
                self.len()
            )));
        }
        Ok(self.rank_unchecked())
    }

    pub(crate) fn rank_unchecked(&self) -> u64 {
        let bits = self.alphabet.bits() as u32;
        self.letters
            .iter()
            .fold(0u64, |acc, &a| acc.wrapping_shl(bits) | a as u64)
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    #[inline]
    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.letters.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    fn check_compatible(&self, other: &Word) -> Result<()> {
        if self.alphabet != other.alphabet {
            return Err(Error::invalid("words over different alphabets"));
        }
        if self.len() != other.len() {
            return Err(Error::invalid(format!(
                "length mismatch: {} vs {}",
                self.len(),
                other.len()
            )));
        }
        Ok(())
    }

    /// Letterwise XOR.
    pub fn xor(&self, other: &Word) -> Result<Word> {
        self.check_compatible(other)?;
        Ok(Word {
            alphabet: self.alphabet,
            letters: self
                .letters
                .iter()
                .zip(&other.letters)
                .map(|(&a, &b)| letter_xor(a, b))
                .collect(),
        })
    }

    /// Lexicographic comparison of two words of equal length.
    pub fn lex_cmp(&self, other: &Word) -> Result<Ordering> {
        self.check_compatible(other)?;
        Ok(self.letters.cmp(&other.letters))
    }
}

impl fmt::Display for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let symbols = self.alphabet.symbols();
        for &a in &self.letters {
            write!(f, "{}", symbols[a as usize] as char)?;
        }
        Ok(())
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "Word({self})")
    }
}

/// Compare `x ⊕ key` against `y ⊕ key` lexicographically, for slices of equal length.
#[inline]
pub(crate) fn cmp_xored(x: &[Letter], y: &[Letter], key: &[Letter]) -> Ordering {
    debug_assert!(x.len() == y.len() && y.len() == key.len());
    for ((&a, &b), &c) in x.iter().zip(y).zip(key) {
        match (a ^ c).cmp(&(b ^ c)) {
            Ordering::Equal => continue,
            other => return other,
        }
    }
    Ordering::Equal
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VigeminResult {
    /// 0-based start of the chosen window.
    pub position: usize,
    pub minimizer: Word,
}

/// Position of the leftmost window of `letters` minimizing `window ⊕ key`.
pub(crate) fn vigemin_position(letters: &[Letter], key: &[Letter]) -> usize {
    let m = key.len();
    let mut best = 0;
    for p in 1..=letters.len() - m {
        if cmp_xored(&letters[p..p + m], &letters[best..best + m], key) == Ordering::Less {
            best = p;
        }
    }
    best
}

/// The vigemin of `x`: its leftmost m-mer `w` such that `w ⊕ gamma` is minimal.
pub fn vigemin(x: &Word, m: usize, gamma: &Word) -> Result<VigeminResult> {
    if gamma.len() != m {
        return Err(Error::invalid(format!(
            "key length {} does not match m = {m}",
            gamma.len()
        )));
    }
    if m == 0 || x.len() < m {
        return Err(Error::invalid(format!(
            "need 1 <= m <= |x|, got m = {m}, |x| = {}",
            x.len()
        )));
    }
    if x.alphabet() != gamma.alphabet() {
        return Err(Error::invalid("words over different alphabets"));
    }
    let position = vigemin_position(x.letters(), gamma.letters());
    Ok(VigeminResult {
        position,
        minimizer: Word {
            alphabet: x.alphabet(),
            letters: x.letters()[position..position + m].to_vec(),
        },
    })
}
