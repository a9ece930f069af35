//! Everything derived from the pair `(w, γ)` before any table is filled.
//!
//! Indices follow the 1-based `(i, j)` convention of the recurrences: row `i`
//! of the autocorrelation matrix compares `a_j⋯a_i` against `a_1⋯a_{i-j+1}`
//! (both XORed with `c_1⋯c_{i-j+1}`), for `1 <= j <= i <= m`.

use std::cmp::Ordering;
use std::fmt::{self, Write as _};

use crate::error::{Error, Result};
use crate::words::{cmp_xored, Alphabet, Letter, LetterSet, Word};

/// A cell of the autocorrelation matrix.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Sign {
    Less,
    Equal,
    Greater,
}

impl From<Ordering> for Sign {
    fn from(o: Ordering) -> Self {
        match o {
            Ordering::Less => Sign::Less,
            Ordering::Equal => Sign::Equal,
            Ordering::Greater => Sign::Greater,
        }
    }
}

impl Sign {
    fn symbol(self) -> char {
        match self {
            Sign::Less => '<',
            Sign::Equal => '=',
            Sign::Greater => '>',
        }
    }
}

/// Lower-triangular `m × m` matrix of signs.
#[derive(Clone, PartialEq, Eq)]
pub struct AutocorrelationMatrix {
    m: usize,
    cells: Vec<Sign>,
}

impl AutocorrelationMatrix {
    /// Builds `R` in `O(m²)`: along a fixed `j` the sign only changes at the
    /// first differing letter, so each cell extends its upper neighbour.
    pub fn build(w: &Word, gamma: &Word) -> Result<Self> {
        check_pair(w, gamma)?;
        Ok(Self::build_unchecked(w.letters(), gamma.letters()))
    }

    pub(crate) fn build_unchecked(a: &[Letter], c: &[Letter]) -> Self {
        let m = a.len();
        let mut cells = vec![Sign::Equal; m * m];
        for j in 1..=m {
            let mut sign = Sign::Equal;
            for i in j..=m {
                if sign == Sign::Equal {
                    // New letter: a_i against a_{i-j+1}, both XORed with c_{i-j+1}.
                    let t = i - j;
                    sign = (a[j - 1 + t] ^ c[t]).cmp(&(a[t] ^ c[t])).into();
                }
                cells[(i - 1) * m + (j - 1)] = sign;
            }
        }
        AutocorrelationMatrix { m, cells }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.m
    }

    /// `R_{i,j}`, 1-based, `1 <= j <= i <= m`.
    #[inline]
    pub fn get(&self, i: usize, j: usize) -> Sign {
        debug_assert!(1 <= j && j <= i && i <= self.m);
        self.cells[(i - 1) * self.m + (j - 1)]
    }

    #[inline]
    pub fn is_eq(&self, i: usize, j: usize) -> bool {
        self.get(i, j) == Sign::Equal
    }

    /// Smallest `j >= 2` with `R_{i,j} = <` in row `i`.
    pub fn first_less_in_row(&self, i: usize) -> Option<usize> {
        (2..=i).find(|&j| self.get(i, j) == Sign::Less)
    }

    /// `i_max = min({m} ∪ {2 <= i <= m-1 : ∃ 2 <= j <= i, R_{i,j} = <}) - 1`.
    pub fn i_max(&self) -> usize {
        let m = self.m;
        let first = (2..m)
            .find(|&i| self.first_less_in_row(i).is_some())
            .unwrap_or(m);
        first - 1
    }

    /// `β_max = min({k-m+2} ∪ {2 <= j <= m : R_{m,j} = <}) - 2`.
    pub fn beta_max(&self, k: usize) -> usize {
        let m = self.m;
        debug_assert!(k >= m);
        let bound = k - m + 2;
        self.first_less_in_row(m)
            .map_or(bound, |j| j.min(bound))
            - 2
    }
}

impl fmt::Debug for AutocorrelationMatrix {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for i in 1..=self.m {
            let row: String = (1..=i).map(|j| self.get(i, j).symbol()).collect();
            writeln!(f, "{row}")?;
        }
        Ok(())
    }
}

fn check_pair(w: &Word, gamma: &Word) -> Result<()> {
    if w.is_empty() {
        return Err(Error::invalid("m must be at least 1"));
    }
    if w.len() != gamma.len() {
        return Err(Error::invalid(format!(
            "length mismatch: |w| = {}, |γ| = {}",
            w.len(),
            gamma.len()
        )));
    }
    if w.alphabet() != gamma.alphabet() {
        return Err(Error::invalid("w and γ use different alphabets"));
    }
    Ok(())
}

/// `Σ_i = {a : a ⊕ c_i > a_i ⊕ c_i}` for `1 <= i <= m`, plus `Σ_{m+1} = Σ`.
///
/// The returned vector is indexed 1-based; slot 0 is unused and empty.
pub fn specialized_alphabets(w: &Word, gamma: &Word) -> Result<Vec<LetterSet>> {
    check_pair(w, gamma)?;
    Ok(specialized_unchecked(w.alphabet(), w.letters(), gamma.letters()))
}

fn specialized_unchecked(alphabet: Alphabet, a: &[Letter], c: &[Letter]) -> Vec<LetterSet> {
    let m = a.len();
    let mut sigma = Vec::with_capacity(m + 2);
    sigma.push(LetterSet::EMPTY);
    for i in 0..m {
        let pivot = a[i] ^ c[i];
        sigma.push(LetterSet::from_letters(
            alphabet.letters().filter(|&x| x ^ c[i] > pivot),
        ));
    }
    sigma.push(alphabet.full_set());
    sigma
}

/// `S_l` for `0 <= l < i_max`:
/// `(a_1⋯a_{m-l-1}) ⊕ (c_{l+2}⋯c_m) > (a_{l+2}⋯a_m) ⊕ (c_{l+2}⋯c_m)`.
pub(crate) fn compute_s(a: &[Letter], c: &[Letter], i_max: usize) -> Vec<bool> {
    let m = a.len();
    (0..i_max)
        .map(|l| {
            let len = m - l - 1;
            cmp_xored(&a[..len], &a[l + 1..], &c[l + 1..]) == Ordering::Greater
        })
        .collect()
}

/// Prefix-letter vectors `T_1..T_m`, flattened: `t[i * |Σ| + a]`, row 0 unused.
pub(crate) fn prefix_letter_vectors(r: &AutocorrelationMatrix, a: &[Letter], sigma: usize) -> Vec<u16> {
    let m = a.len();
    let mut t = vec![0u16; (m + 1) * sigma];
    if m == 0 {
        return t;
    }
    t[sigma + a[0] as usize] = 2;
    for i in 2..=m {
        let row = &mut t[i * sigma..(i + 1) * sigma];
        for j in 2..=i {
            if r.is_eq(i, j) {
                let letter = a[i - j + 1] as usize; // a_{i-j+2}
                if row[letter] == 0 {
                    row[letter] = j as u16;
                }
            }
        }
        let first = a[0] as usize;
        if row[first] == 0 {
            row[first] = (i + 1) as u16;
        }
    }
    t
}

/// All `(w, γ)`-derived quantities used by the antemer and postmer tables.
///
/// Everything here is independent of `k`; `β_max` is evaluated per `k`.
#[derive(Clone)]
pub struct PrecomputeContext {
    alphabet: Alphabet,
    a: Vec<Letter>,
    c: Vec<Letter>,
    r: AutocorrelationMatrix,
    i_max: usize,
    sigma: Vec<LetterSet>,
    s: Vec<bool>,
    t: Vec<u16>,
    /// Smallest `j >= 2` with `R_{i,j} = <`, per row (1-based, slot 0 unused).
    first_less: Vec<Option<usize>>,
    sigma_a: Vec<(LetterSet, LetterSet)>,
    sigma_d: Vec<(LetterSet, LetterSet)>,
    ops: u64,
}

impl PrecomputeContext {
    pub fn new(w: &Word, gamma: &Word) -> Result<Self> {
        check_pair(w, gamma)?;
        Ok(Self::from_letters(w.alphabet(), w.letters(), gamma.letters()))
    }

    pub(crate) fn from_letters(alphabet: Alphabet, a: &[Letter], c: &[Letter]) -> Self {
        let m = a.len();
        let size = alphabet.size();
        let r = AutocorrelationMatrix::build_unchecked(a, c);
        let i_max = r.i_max();
        let sigma = specialized_unchecked(alphabet, a, c);
        let s = compute_s(a, c, i_max);
        let t = prefix_letter_vectors(&r, a, size);
        let first_less = std::iter::once(None)
            .chain((1..=m).map(|i| r.first_less_in_row(i)))
            .collect();

        let mut ops = (m * m) as u64 + (m * size) as u64;
        ops += (i_max * m) as u64;

        let t_row = |i: usize| &t[i * size..(i + 1) * size];
        let split = |set: LetterSet, row: &[u16]| {
            let nonzero = LetterSet::from_letters(set.iter().filter(|&x| row[x as usize] != 0));
            (set.difference(nonzero), nonzero)
        };

        // Σ_A(i), 1 <= i <= i_max.
        let mut sigma_a = vec![(LetterSet::EMPTY, LetterSet::EMPTY); i_max + 1];
        for i in 1..=i_max {
            let mut set = sigma[i + 1].intersection(sigma[1].union(LetterSet::singleton(a[0])));
            for j in 2..=i {
                ops += 1;
                if r.is_eq(i, j) {
                    let l = i - j + 2;
                    set = set.intersection(sigma[l].union(LetterSet::singleton(a[l - 1])));
                }
            }
            ops += size as u64;
            sigma_a[i] = split(set, t_row(i));
        }

        // Σ_D(i), 1 <= i < m.
        let mut sigma_d = vec![(LetterSet::EMPTY, LetterSet::EMPTY); m.max(1)];
        for i in 1..m {
            let set = alphabet.full_set().difference(LetterSet::singleton(a[i]));
            ops += size as u64;
            sigma_d[i] = split(set, t_row(i));
        }

        PrecomputeContext {
            alphabet,
            a: a.to_vec(),
            c: c.to_vec(),
            r,
            i_max,
            sigma,
            s,
            t,
            first_less,
            sigma_a,
            sigma_d,
            ops,
        }
    }

    #[inline]
    pub fn m(&self) -> usize {
        self.a.len()
    }

    #[inline]
    pub fn alphabet(&self) -> Alphabet {
        self.alphabet
    }

    /// `a_i`, 1-based.
    #[inline]
    pub fn letter(&self, i: usize) -> Letter {
        self.a[i - 1]
    }

    pub fn w(&self) -> Word {
        Word::new(self.alphabet, self.a.clone()).expect("letters validated at construction")
    }

    pub fn gamma(&self) -> Word {
        Word::new(self.alphabet, self.c.clone()).expect("letters validated at construction")
    }

    #[inline]
    pub fn r(&self) -> &AutocorrelationMatrix {
        &self.r
    }

    #[inline]
    pub fn i_max(&self) -> usize {
        self.i_max
    }

    pub fn beta_max(&self, k: usize) -> usize {
        self.r.beta_max(k)
    }

    /// `Σ_i` for `1 <= i <= m + 1`.
    #[inline]
    pub fn sigma(&self, i: usize) -> LetterSet {
        self.sigma[i]
    }

    /// `S_l`, defined for `0 <= l < i_max` only.
    pub fn s(&self, l: usize) -> bool {
        assert!(
            l < self.i_max,
            "S_{l} consulted outside 0..{} (i_max = {})",
            self.i_max,
            self.i_max
        );
        self.s[l]
    }

    /// `T_i(a)` for `1 <= i <= m`.
    #[inline]
    pub fn t(&self, i: usize, a: Letter) -> usize {
        self.t[i * self.alphabet.size() + a as usize] as usize
    }

    /// Postmer rows with a `<` cell in column `j` vanish from `β >= m + j - 1` on.
    #[inline]
    pub(crate) fn first_less(&self, i: usize) -> Option<usize> {
        self.first_less[i]
    }

    /// `(Σ_A^{=0}(i), Σ_A^{≠0}(i))` for `0 < i <= i_max`.
    pub fn antemer_alphabets(&self, i: usize) -> (LetterSet, LetterSet) {
        assert!(0 < i && i <= self.i_max, "antemer alphabet index {i} out of range");
        self.sigma_a[i]
    }

    /// `(Σ_D^{=0}(i), Σ_D^{≠0}(i))` for `0 < i < m`.
    pub fn d_alphabets(&self, i: usize) -> (LetterSet, LetterSet) {
        assert!(0 < i && i < self.m(), "short-postmer alphabet index {i} out of range");
        self.sigma_d[i]
    }

    /// `T̃_i(a, β) = T_i(a) · [β >= m + T_i(a) - 1]`.
    #[inline]
    pub fn t_tilde(&self, i: usize, a: Letter, beta: usize) -> usize {
        let t = self.t(i, a);
        if t != 0 && beta + 1 >= self.m() + t {
            t
        } else {
            0
        }
    }

    /// `(Σ_P^{=0}(i, β), Σ_P^{≠0}(i, β))` for `β > m`, `1 <= i <= m`.
    ///
    /// `Σ_P(i, β)` starts from `Σ_{i+1}` and intersects `Σ_l ∪ {a_l}` for every
    /// window that fits in a postmer of size `β`: the window starting at
    /// `i + 1` (`l = 1`) when `β >= m + i`, and the window starting at `j`
    /// (`l = i - j + 2`, `R_{i,j} = '='`) when `β >= m - 1 + j`. The split uses
    /// `T̃_i(a, β)`.
    pub fn sigma_p(&self, i: usize, beta: usize) -> (LetterSet, LetterSet) {
        let mut ops = 0;
        self.sigma_p_counted(i, beta, &mut ops)
    }

    pub(crate) fn sigma_p_counted(&self, i: usize, beta: usize, ops: &mut u64) -> (LetterSet, LetterSet) {
        let m = self.m();
        let mut set = self.sigma[i + 1];
        let mut constrain = |l: usize| {
            set = set.intersection(self.sigma[l].union(LetterSet::singleton(self.letter(l))));
        };
        if beta >= m + i {
            constrain(1);
        }
        // Windows starting at j fit iff j <= β - m + 1.
        let last_j = (beta + 1 - m).min(i);
        for j in 2..=last_j {
            *ops += 1;
            if self.r.is_eq(i, j) {
                constrain(i - j + 2);
            }
        }
        let mut nonzero = LetterSet::EMPTY;
        for x in set.iter() {
            *ops += 1;
            if self.t_tilde(i, x, beta) != 0 {
                nonzero.insert(x);
            }
        }
        (set.difference(nonzero), nonzero)
    }

    /// Operation count of the preprocessing step.
    pub fn ops(&self) -> u64 {
        self.ops
    }

    /// Human-readable dump of `R`, `i_max`, `β_max`, `Σ_i` and `T_i`.
    pub fn dump(&self, k: Option<usize>) -> String {
        let mut out = String::new();
        let m = self.m();
        let set_str = |s: LetterSet| -> String {
            let body: Vec<String> = s.iter().map(|x| self.alphabet.symbol(x).to_string()).collect();
            format!("{{{}}}", body.join(","))
        };
        let _ = writeln!(out, "w = {}  gamma = {}  m = {m}", self.w(), self.gamma());
        let _ = writeln!(out, "R:");
        for line in format!("{:?}", self.r).lines() {
            let _ = writeln!(out, "  {line}");
        }
        let _ = writeln!(out, "i_max = {}", self.i_max);
        if let Some(k) = k {
            let _ = writeln!(out, "beta_max(k={k}) = {}", self.beta_max(k));
        }
        for i in 1..=m + 1 {
            let _ = writeln!(out, "Sigma_{i} = {}", set_str(self.sigma[i]));
        }
        let _ = writeln!(out, "S = {:?}", self.s);
        for i in 1..=m {
            let row: Vec<String> = self
                .alphabet
                .letters()
                .map(|x| format!("{}:{}", self.alphabet.symbol(x), self.t(i, x)))
                .collect();
            let _ = writeln!(out, "T_{i} = [{}]", row.join(" "));
        }
        out
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn dna(s: &str) -> Word {
        Word::dna(s).unwrap()
    }

    fn set(s: &str) -> LetterSet {
        LetterSet::from_letters(s.chars().map(|ch| Alphabet::DNA.letter(ch).unwrap()))
    }

    fn ctx(w: &str, g: &str) -> PrecomputeContext {
        PrecomputeContext::new(&dna(w), &dna(g)).unwrap()
    }

    /// `R` straight from its definition, one full comparison per cell.
    fn r_by_definition(a: &[u8], c: &[u8]) -> Vec<Vec<Sign>> {
        let m = a.len();
        (1..=m)
            .map(|i| {
                (1..=i)
                    .map(|j| {
                        let len = i - j + 1;
                        cmp_xored(&a[j - 1..i], &a[..len], &c[..len]).into()
                    })
                    .collect()
            })
            .collect()
    }

    #[test]
    fn build_r_examples() {
        let r = AutocorrelationMatrix::build(&dna("AA"), &dna("AA")).unwrap();
        assert!((1..=2).all(|i| (1..=i).all(|j| r.get(i, j) == Sign::Equal)));

        let r = AutocorrelationMatrix::build(&dna("ACA"), &dna("AAA")).unwrap();
        assert_eq!(r.get(2, 2), Sign::Greater);
        assert_eq!(r.get(3, 2), Sign::Greater);
        assert_eq!(r.get(3, 3), Sign::Equal);
        assert!((1..=3).all(|i| r.get(i, 1) == Sign::Equal));

        let r = AutocorrelationMatrix::build(&dna("AC"), &dna("CC")).unwrap();
        assert_eq!(r.get(2, 2), Sign::Less);

        assert!(AutocorrelationMatrix::build(&dna("AC"), &dna("C")).is_err());
    }

    #[test]
    fn i_max_and_beta_max() {
        // No '<' anywhere.
        let r = AutocorrelationMatrix::build(&dna("AAAAAAAAAA"), &dna("AAAAAAAAAA")).unwrap();
        assert_eq!(r.i_max(), 9);
        assert_eq!(r.beta_max(31), 21);

        // m = 5, only R_{3,2} is '<': w = G C A T T under the identity key gives
        // R_{2,2}: C vs G '<' already, so craft a word instead: a_2 = a_1, a_3 < a_1.
        let r = AutocorrelationMatrix::build(&dna("CCATT"), &dna("AAAAA")).unwrap();
        assert_eq!(r.get(2, 2), Sign::Equal);
        assert_eq!(r.get(3, 2), Sign::Less);
        assert_eq!(r.i_max(), 2);

        // m = 4, R_{4,2} is '<' → β_max = 0.
        let r = AutocorrelationMatrix::build(&dna("CCCA"), &dna("AAAA")).unwrap();
        assert_eq!(r.get(4, 2), Sign::Less);
        assert_eq!(r.beta_max(10), 0);

        // m = 1: only R_{1,1}.
        let r = AutocorrelationMatrix::build(&dna("G"), &dna("T")).unwrap();
        assert_eq!(r.get(1, 1), Sign::Equal);
        assert_eq!(r.i_max(), 0);
        assert_eq!(r.beta_max(5), 4);
    }

    #[test]
    fn specialized_alphabet_examples() {
        let sig = specialized_alphabets(&dna("C"), &dna("A")).unwrap();
        assert_eq!(sig[1], set("GT"));
        assert_eq!(sig[2], set("ACGT"));
        let sig = specialized_alphabets(&dna("A"), &dna("T")).unwrap();
        assert_eq!(sig[1], LetterSet::EMPTY);
        // T ⊕ T = A, so every letter but T itself lands above it.
        let sig = specialized_alphabets(&dna("T"), &dna("T")).unwrap();
        assert_eq!(sig[1], set("ACG"));
    }

    #[test]
    fn s_examples() {
        // m = 2 gives i_max = 1, so only S_0 exists.
        assert!(!ctx("AA", "AA").s(0));
        assert!(ctx("CA", "AA").s(0));
        assert!(!ctx("AC", "AA").s(0));
    }

    #[test]
    #[should_panic]
    fn s_outside_range_panics() {
        ctx("AA", "AA").s(1);
    }

    #[test]
    fn prefix_letter_vector_examples() {
        let l = |ch| Alphabet::DNA.letter(ch).unwrap();
        let c = ctx("GATC", "CTTA");
        assert_eq!(c.t(1, l('G')), 2);
        for x in "ACT".chars() {
            assert_eq!(c.t(1, l(x)), 0);
        }
        let c = ctx("AA", "AA");
        assert_eq!(c.t(2, l('A')), 2);
        for x in "CGT".chars() {
            assert_eq!(c.t(2, l(x)), 0);
        }
        let c = ctx("AC", "AA");
        assert_eq!(c.t(2, l('A')), 3);
        for x in "CGT".chars() {
            assert_eq!(c.t(2, l(x)), 0);
        }
    }

    #[test]
    fn antemer_alphabet_examples() {
        assert_eq!(ctx("AA", "AA").antemer_alphabets(1), (set("CGT"), LetterSet::EMPTY));
        assert_eq!(ctx("CA", "AA").antemer_alphabets(1), (set("GT"), set("C")));
        // Σ_2 = ∅ when a_2 ⊕ c_2 = T.
        let c = ctx("AT", "AA");
        assert!(c.sigma(2).is_empty());
        assert_eq!(c.antemer_alphabets(1), (LetterSet::EMPTY, LetterSet::EMPTY));
    }

    #[test]
    fn d_alphabet_examples() {
        for g in ["AA", "CG", "TT"] {
            assert_eq!(ctx("AA", g).d_alphabets(1), (set("CGT"), LetterSet::EMPTY));
            let (eq0, ne0) = ctx("AC", g).d_alphabets(1);
            assert_eq!((eq0, ne0), (set("GT"), set("A")));
            assert_eq!(eq0.len() + ne0.len(), 3);
        }
    }

    #[test]
    fn t_tilde_examples() {
        let l = |ch| Alphabet::DNA.letter(ch).unwrap();
        // m = 10 and T_1(a_1) = 2: boundary β = 11.
        let c = ctx("CAAAAAAAAA", "AAAAAAAAAA");
        assert_eq!(c.t(1, l('C')), 2);
        assert_eq!(c.t_tilde(1, l('C'), 11), 2);
        assert_eq!(c.t_tilde(1, l('C'), 10), 0);
        assert_eq!(c.t_tilde(1, l('G'), 50), 0);
        // T_4(C) = 5 for w = C A A A ...: only the fallback (i + 1)·[a = a_1] applies.
        assert_eq!(c.t(4, l('C')), 5);
        assert_eq!(c.t_tilde(4, l('C'), 12), 0);
        assert_eq!(c.t_tilde(4, l('C'), 14), 5);
    }

    #[test]
    fn sigma_p_examples() {
        // m = 1, w = A, γ = A, i = 1, β = 2.
        let c = ctx("A", "A");
        assert_eq!(c.sigma(2), set("ACGT"));
        assert_eq!(c.sigma_p(1, 2), (set("CGT"), set("A")));
        // i = m: start from Σ_3 = Σ, then Σ_1 ∪ {T} = {T} applies once β >= m + T_2(T) - 1.
        let c = ctx("TT", "AA");
        assert_eq!(c.sigma(3), set("ACGT"));
        assert_eq!(c.sigma_p(2, 3), (LetterSet::EMPTY, set("T")));
    }

    #[test]
    fn dump_mentions_everything() {
        let text = ctx("ACA", "TGA").dump(Some(7));
        for needle in ["R:", "i_max", "beta_max(k=7)", "Sigma_4", "T_3"] {
            assert!(text.contains(needle), "{needle} missing from dump:\n{text}");
        }
    }

    fn pair(max_m: usize) -> impl Strategy<Value = (Vec<u8>, Vec<u8>)> {
        (1..=max_m).prop_flat_map(|m| {
            (
                prop::collection::vec(0u8..4, m),
                prop::collection::vec(0u8..4, m),
            )
        })
    }

    proptest! {
        #[test]
        fn incremental_r_matches_definition((a, c) in pair(12)) {
            let r = AutocorrelationMatrix::build_unchecked(&a, &c);
            let direct = r_by_definition(&a, &c);
            for i in 1..=a.len() {
                for j in 1..=i {
                    prop_assert_eq!(r.get(i, j), direct[i - 1][j - 1]);
                }
                prop_assert_eq!(r.get(i, 1), Sign::Equal);
            }
        }

        #[test]
        fn identity_key_matches_plain_comparisons(a in prop::collection::vec(0u8..4, 1..12)) {
            let c = vec![0u8; a.len()];
            let r = AutocorrelationMatrix::build_unchecked(&a, &c);
            for i in 1..=a.len() {
                for j in 1..=i {
                    let plain: Sign = a[j - 1..i].cmp(&a[..i - j + 1]).into();
                    prop_assert_eq!(r.get(i, j), plain);
                }
            }
        }

        #[test]
        fn context_invariants((a, c) in pair(12), k_extra in 0usize..40) {
            let ctx = PrecomputeContext::from_letters(Alphabet::DNA, &a, &c);
            let m = a.len();
            let k = m + k_extra;
            if m >= 2 {
                prop_assert!(1 <= ctx.i_max() && ctx.i_max() < m);
            }
            prop_assert!(ctx.beta_max(k) <= k - m);
            for i in 1..=m {
                for x in 0..4u8 {
                    let t = ctx.t(i, x);
                    prop_assert!(t <= i + 1);
                    if t != 0 {
                        // The letter extends the prefix of size i - t + 2.
                        prop_assert_eq!(x, ctx.letter(i + 2 - t));
                    }
                }
            }
            for i in 1..=ctx.i_max() {
                let (eq0, ne0) = ctx.antemer_alphabets(i);
                prop_assert!(eq0.intersection(ne0).is_empty());
                for x in eq0.union(ne0).iter() {
                    prop_assert!(ctx.sigma(i + 1).contains(x));
                }
            }
            for i in 1..m {
                let (eq0, ne0) = ctx.d_alphabets(i);
                prop_assert!(eq0.intersection(ne0).is_empty());
                prop_assert_eq!(eq0.len() + ne0.len(), 3);
                prop_assert!(!eq0.union(ne0).contains(ctx.letter(i + 1)));
            }
        }

        #[test]
        fn preprocessing_cost_is_quadratic((a, c) in pair(24)) {
            let ctx = PrecomputeContext::from_letters(Alphabet::DNA, &a, &c);
            let m = a.len() as u64;
            prop_assert!(ctx.ops() <= 4 * m * m * 4 + 16);
        }
    }
}
