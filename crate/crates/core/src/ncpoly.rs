//! Truncated polynomials in noncommuting variables over F_p.
//!
//! This is the associative envelope the rest of the crate computes in:
//! the free associative algebra F_p<X_1..X_r> with every monomial of
//! degree greater than the truncation bound discarded.  Monomials are
//! words over the generator alphabet, packed four bits per letter into a
//! single machine word, so the coefficient maps are keyed by `u64`s.

use crate::fp::Fp;
use std::collections::BTreeMap;
use std::fmt;

/// Hard ceiling on word degree imposed by the packed representation
/// (4 bits of length, 15 letters of 4 bits each).
pub const MAX_DEGREE: usize = 15;

/// Hard ceiling on the alphabet size imposed by 4-bit letters.
pub const MAX_RANK: usize = 16;

/// A monomial: a word over generator indices `0..r`, packed into a `u64`.
/// The top nibble holds the length; letter `i` of the word sits directly
/// below, most significant first, so words of equal degree compare
/// lexicographically as integers.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Word(u64);

const LETTER_BITS: u64 = 4;
const LEN_SHIFT: u64 = 60;

impl Word {
    pub fn empty() -> Word {
        Word(0)
    }

    pub fn letter(g: usize) -> Word {
        Word::from_letters(&[g])
    }

    pub fn from_letters(letters: &[usize]) -> Word {
        assert!(letters.len() <= MAX_DEGREE, "word longer than {MAX_DEGREE}");
        let mut bits = (letters.len() as u64) << LEN_SHIFT;
        for (i, &g) in letters.iter().enumerate() {
            assert!(g < MAX_RANK, "letter {g} out of range");
            bits |= (g as u64) << (LEN_SHIFT - LETTER_BITS * (i as u64 + 1));
        }
        Word(bits)
    }

    pub fn degree(self) -> usize {
        (self.0 >> LEN_SHIFT) as usize
    }

    pub fn get(self, i: usize) -> usize {
        debug_assert!(i < self.degree());
        ((self.0 >> (LEN_SHIFT - LETTER_BITS * (i as u64 + 1))) & 0xf) as usize
    }

    pub fn letters(self) -> Vec<usize> {
        (0..self.degree()).map(|i| self.get(i)).collect()
    }

    pub fn concat(self, other: Word) -> Word {
        let d = self.degree() + other.degree();
        assert!(d <= MAX_DEGREE, "concatenation longer than {MAX_DEGREE}");
        let body = (self.0 & !(0xf << LEN_SHIFT))
            | ((other.0 & !(0xf << LEN_SHIFT)) >> (LETTER_BITS * self.degree() as u64));
        Word(((d as u64) << LEN_SHIFT) | body)
    }

    /// Index of this word among all `r^d` words of its degree, in
    /// lexicographic order (the word read as a base-r numeral).
    pub fn index_in_degree(self, r: usize) -> usize {
        let mut idx = 0usize;
        for i in 0..self.degree() {
            let g = self.get(i);
            debug_assert!(g < r);
            idx = idx * r + g;
        }
        idx
    }
}

impl Ord for Word {
    /// Graded lexicographic: by degree, then letter by letter.
    fn cmp(&self, other: &Word) -> std::cmp::Ordering {
        let body = |w: &Word| w.0 & !(0xf << LEN_SHIFT);
        self.degree()
            .cmp(&other.degree())
            .then_with(|| body(self).cmp(&body(other)))
    }
}

impl PartialOrd for Word {
    fn partial_cmp(&self, other: &Word) -> Option<std::cmp::Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Debug for Word {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.degree() == 0 {
            return write!(out, "1");
        }
        for i in 0..self.degree() {
            let g = self.get(i);
            match g {
                0 => write!(out, "X")?,
                1 => write!(out, "Y")?,
                2 => write!(out, "Z")?,
                3 => write!(out, "W")?,
                _ => write!(out, "X{}", g + 1)?,
            }
        }
        Ok(())
    }
}

/// Ambient ring parameters: rank, characteristic, truncation degree.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Trunc {
    r: usize,
    field: Fp,
    deg: usize,
}

impl Trunc {
    pub fn new(r: usize, p: u64, deg: usize) -> Trunc {
        assert!((1..=MAX_RANK).contains(&r), "rank {r} out of range");
        assert!(deg <= MAX_DEGREE, "truncation degree {deg} out of range");
        Trunc {
            r,
            field: Fp::new(p),
            deg,
        }
    }

    pub fn rank(&self) -> usize {
        self.r
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn p(&self) -> u64 {
        self.field.modulus()
    }

    pub fn degree_cap(&self) -> usize {
        self.deg
    }
}

/// Augmentation valuation: minimum degree of a nonconstant term, with
/// `Infinite` for constants.  `Finite(k) < Infinite` under the derived
/// order, so comparisons against bounds read naturally.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord)]
pub enum Valuation {
    Finite(usize),
    Infinite,
}

impl Valuation {
    pub fn at_least(self, bound: usize) -> bool {
        match self {
            Valuation::Finite(k) => k >= bound,
            Valuation::Infinite => true,
        }
    }
}

impl fmt::Display for Valuation {
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Valuation::Finite(k) => write!(out, "{k}"),
            Valuation::Infinite => write!(out, "inf"),
        }
    }
}

/// Truncated noncommutative polynomial.  Invariants: every stored
/// coefficient is nonzero mod p, every word has degree within the cap
/// and letters within the rank.
#[derive(Clone, PartialEq, Eq)]
pub struct NcPoly {
    params: Trunc,
    terms: BTreeMap<Word, u64>,
}

impl NcPoly {
    pub fn zero(params: Trunc) -> NcPoly {
        NcPoly {
            params,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(params: Trunc) -> NcPoly {
        NcPoly::monomial(params, Word::empty(), 1)
    }

    /// The generator `X_i`.
    pub fn gen(params: Trunc, i: usize) -> NcPoly {
        assert!(i < params.r, "generator {i} out of range");
        NcPoly::monomial(params, Word::letter(i), 1)
    }

    pub fn monomial(params: Trunc, word: Word, coeff: i64) -> NcPoly {
        assert!(word.degree() <= params.deg, "monomial beyond truncation");
        assert!(
            word.letters().iter().all(|&g| g < params.r),
            "letter out of rank"
        );
        let c = params.field.reduce(coeff);
        let mut terms = BTreeMap::new();
        if c != 0 {
            terms.insert(word, c);
        }
        NcPoly { params, terms }
    }

    pub fn params(&self) -> Trunc {
        self.params
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    pub fn coeff(&self, word: Word) -> u64 {
        self.terms.get(&word).copied().unwrap_or(0)
    }

    pub fn constant_term(&self) -> u64 {
        self.coeff(Word::empty())
    }

    pub fn terms(&self) -> impl Iterator<Item = (Word, u64)> + '_ {
        self.terms.iter().map(|(&w, &c)| (w, c))
    }

    fn assert_same_ring(&self, other: &NcPoly) {
        assert_eq!(self.params, other.params, "mismatched ring parameters");
    }

    fn insert(&mut self, word: Word, c: u64) {
        if c == 0 {
            return;
        }
        let f = self.params.field;
        match self.terms.entry(word) {
            std::collections::btree_map::Entry::Vacant(e) => {
                e.insert(c);
            }
            std::collections::btree_map::Entry::Occupied(mut e) => {
                let v = f.add(*e.get(), c);
                if v == 0 {
                    e.remove();
                } else {
                    *e.get_mut() = v;
                }
            }
        }
    }

    pub fn add(&self, other: &NcPoly) -> NcPoly {
        self.assert_same_ring(other);
        let mut out = self.clone();
        for (w, c) in other.terms() {
            out.insert(w, c);
        }
        out
    }

    pub fn neg(&self) -> NcPoly {
        let f = self.params.field;
        NcPoly {
            params: self.params,
            terms: self.terms.iter().map(|(&w, &c)| (w, f.neg(c))).collect(),
        }
    }

    pub fn sub(&self, other: &NcPoly) -> NcPoly {
        self.add(&other.neg())
    }

    pub fn scalar_mul(&self, s: i64) -> NcPoly {
        let f = self.params.field;
        let s = f.reduce(s);
        let mut out = NcPoly::zero(self.params);
        for (w, c) in self.terms() {
            out.insert(w, f.mul(c, s));
        }
        out
    }

    pub fn mul(&self, other: &NcPoly) -> NcPoly {
        self.assert_same_ring(other);
        let f = self.params.field;
        let cap = self.params.deg;
        let mut out = NcPoly::zero(self.params);
        for (wa, ca) in self.terms() {
            for (wb, cb) in other.terms() {
                if wa.degree() + wb.degree() <= cap {
                    out.insert(wa.concat(wb), f.mul(ca, cb));
                }
            }
        }
        out
    }

    /// Lie bracket in the associative envelope: `ab - ba`.
    pub fn bracket(&self, other: &NcPoly) -> NcPoly {
        self.mul(other).sub(&other.mul(self))
    }

    pub fn pow(&self, e: u64) -> NcPoly {
        let mut acc = NcPoly::one(self.params);
        let mut base = self.clone();
        let mut e = e;
        while e > 0 {
            if e & 1 == 1 {
                acc = acc.mul(&base);
            }
            e >>= 1;
            if e > 0 {
                base = base.mul(&base);
            }
        }
        acc
    }

    /// Two-sided inverse of a unit with constant term 1, by the geometric
    /// series in the nilpotent part.  Panics if the constant term is not 1.
    pub fn invert_unit(&self) -> NcPoly {
        assert_eq!(
            self.constant_term(),
            1,
            "invert_unit requires constant term 1"
        );
        let s = NcPoly::one(self.params).sub(self); // valuation >= 1
        let mut acc = NcPoly::one(self.params);
        let mut power = NcPoly::one(self.params);
        for _ in 0..self.params.deg {
            power = power.mul(&s);
            if power.is_zero() {
                break;
            }
            acc = acc.add(&power);
        }
        debug_assert_eq!(self.mul(&acc), NcPoly::one(self.params));
        debug_assert_eq!(acc.mul(self), NcPoly::one(self.params));
        acc
    }

    /// Minimum degree of a nonzero nonconstant term; `Infinite` when the
    /// polynomial is a constant.
    pub fn aug_valuation(&self) -> Valuation {
        self.terms
            .keys()
            .map(|w| w.degree())
            .filter(|&d| d >= 1)
            .min()
            .map_or(Valuation::Infinite, Valuation::Finite)
    }

    /// Dense coefficient vector of the degree-d homogeneous component,
    /// indexed by the `r^d` degree-d words in lexicographic order.
    pub fn homogeneous_component(&self, d: usize) -> Vec<u64> {
        assert!(d <= self.params.deg, "component degree beyond truncation");
        let size = self
            .params
            .r
            .checked_pow(d as u32)
            .filter(|&s| s <= 1 << 26)
            .expect("degree-d word space too large");
        let mut out = vec![0u64; size];
        for (w, c) in self.terms() {
            if w.degree() == d {
                out[w.index_in_degree(self.params.r)] = c;
            }
        }
        out
    }
}

impl fmt::Debug for NcPoly {
    /// Renders like "1 + 2XY + YX", terms in graded lex order.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(out, "0");
        }
        let mut first = true;
        for (w, c) in self.terms() {
            if !first {
                write!(out, " + ")?;
            }
            first = false;
            if w.degree() == 0 {
                write!(out, "{c}")?;
            } else if c == 1 {
                write!(out, "{w:?}")?;
            } else {
                write!(out, "{c}{w:?}")?;
            }
        }
        Ok(())
    }
}
