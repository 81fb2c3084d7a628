//! Graded layers of the mod-p filtration, realized inside the
//! associative envelope.
//!
//! The degree-n layer has an explicit basis indexed by pairs `(u, j)`
//! where `u` is a Lyndon word and `|u| * p^j = n`.  The pair is realized
//! as `sigma(u)^(p^j)`, the associative p^j-th power of the standard
//! bracketing of `u`.  The basis realizations are linearly independent;
//! [`graded_basis`] verifies that by row reduction every time it builds
//! a layer and keeps the reduction around as a coordinate solver.
//!
//! A matrix `g` over F_p with nonzero determinant acts on a layer by the
//! linear substitution `X_i -> sum_k g[k][i] X_k`; [`GradedLayer::action_matrix`]
//! returns the induced matrix in layer coordinates.

use crate::arith::zassenhaus_dim;
use crate::fp::{Fp, FpMatrix};
use crate::ncpoly::{NcPoly, Trunc, Word};
use num_bigint::BigInt;

/// All Lyndon words of length exactly `d` over `r` letters, in
/// lexicographic order.  Duval's generation scheme.
pub fn lyndon_words(r: usize, d: usize) -> Vec<Word> {
    assert!(r >= 1, "alphabet must be nonempty");
    assert!(d >= 1, "length must be positive");
    let mut out = Vec::new();
    let mut w: Vec<usize> = vec![0];
    loop {
        if w.len() == d {
            out.push(Word::from_letters(&w));
        }
        // Extend periodically to the target length, then increment the
        // last incrementable letter.
        let period = w.len();
        while w.len() < d {
            let next = w[w.len() - period];
            w.push(next);
        }
        while w.last() == Some(&(r - 1)) {
            w.pop();
        }
        match w.last_mut() {
            None => break,
            Some(last) => *last += 1,
        }
    }
    out
}

/// A word is Lyndon when it is strictly smaller than every proper suffix.
pub fn is_lyndon(word: Word) -> bool {
    let letters = word.letters();
    if letters.is_empty() {
        return false;
    }
    (1..letters.len()).all(|i| letters[..] < letters[i..])
}

/// Standard factorization `u = v w` of a Lyndon word of length >= 2,
/// where `w` is the longest proper Lyndon suffix.  Both factors are
/// Lyndon and `v < w`.
pub fn standard_factorization(word: Word) -> (Word, Word) {
    assert!(is_lyndon(word), "standard factorization needs a Lyndon word");
    let letters = word.letters();
    assert!(letters.len() >= 2, "single letters do not factor");
    for i in 1..letters.len() {
        if is_lyndon(Word::from_letters(&letters[i..])) {
            let v = Word::from_letters(&letters[..i]);
            let w = Word::from_letters(&letters[i..]);
            debug_assert!(is_lyndon(v));
            return (v, w);
        }
    }
    unreachable!("every Lyndon word of length >= 2 has a Lyndon proper suffix");
}

/// Standard (right-normed) bracketing of a Lyndon word, expanded in the
/// associative envelope: a single letter maps to its generator and
/// `sigma(u) = [sigma(v), sigma(w)]` over the standard factorization.
///
/// Panics when the input is not Lyndon.
pub fn standard_bracketing(params: Trunc, word: Word) -> NcPoly {
    assert!(is_lyndon(word), "standard bracketing needs a Lyndon word");
    assert!(
        word.degree() <= params.degree_cap(),
        "word beyond truncation"
    );
    if word.degree() == 1 {
        return NcPoly::gen(params, word.get(0));
    }
    let (v, w) = standard_factorization(word);
    standard_bracketing(params, v).bracket(&standard_bracketing(params, w))
}

/// One basis element of a graded layer: the pair `(u, j)` together with
/// its realization `sigma(u)^(p^j)`.
#[derive(Debug, Clone)]
pub struct GradedBasisElement {
    word: Word,
    p_exp: u32,
    realization: NcPoly,
}

impl GradedBasisElement {
    pub fn word(&self) -> Word {
        self.word
    }

    /// The decoration exponent `j` in `(u, j)`.
    pub fn p_exp(&self) -> u32 {
        self.p_exp
    }

    /// `sigma(u)^(p^j)`, homogeneous of the layer degree.
    pub fn realization(&self) -> &NcPoly {
        &self.realization
    }

    /// Group-word style label, e.g. `x1*x1*x2` or `(x1*x2)^2`.
    pub fn label(&self) -> String {
        let word = self
            .word
            .letters()
            .iter()
            .map(|&g| format!("x{}", g + 1))
            .collect::<Vec<_>>()
            .join("*");
        if self.p_exp == 0 {
            word
        } else {
            format!("({word})^{}", self.power())
        }
    }

    /// `p^j` as an integer exponent.
    pub fn power(&self) -> u64 {
        self.realization.params().p().pow(self.p_exp)
    }
}

/// A graded layer with its basis and a precomputed coordinate solver.
#[derive(Debug, Clone)]
pub struct GradedLayer {
    params: Trunc,
    n: usize,
    basis: Vec<GradedBasisElement>,
    rref: FpMatrix,
    pivots: Vec<usize>,
    transform: FpMatrix,
}

/// Build the degree-n layer for the rank-r free group at the prime p.
///
/// The basis is ordered by word length, then lexicographically; its size
/// always matches the layer dimension formula, and a built-in row
/// reduction asserts the realizations are linearly independent (a rank
/// defect here is an implementation bug, not a user error).
pub fn graded_basis(r: usize, n: usize, p: u64) -> GradedLayer {
    assert!(n >= 1, "layer index must be positive");
    let params = Trunc::new(r, p, n);
    let field = params.field();

    let mut basis = Vec::new();
    let mut power = 1u64; // p^j
    let mut j = 0u32;
    let mut lengths = Vec::new();
    while power <= n as u64 {
        if (n as u64).is_multiple_of(power) {
            lengths.push((n / power as usize, j));
        }
        power *= p;
        j += 1;
    }
    lengths.sort_by_key(|&(d, _)| d);
    for (d, j) in lengths {
        for word in lyndon_words(r, d) {
            let sigma = standard_bracketing(params, word);
            let realization = sigma.pow(p.pow(j));
            debug_assert!(realization
                .terms()
                .all(|(w, _)| w.degree() == n));
            basis.push(GradedBasisElement {
                word,
                p_exp: j,
                realization,
            });
        }
    }
    assert_eq!(
        BigInt::from(basis.len()),
        zassenhaus_dim(r as u64, n as u64, p),
        "basis size disagrees with the layer dimension formula"
    );

    // Row-reduce the realization matrix augmented with the identity; the
    // augmentation records the change of basis used by the solver.
    let dim = basis.len();
    let cols = r.pow(n as u32);
    let mut aug = FpMatrix::zeros(field, 0, cols + dim);
    for (i, b) in basis.iter().enumerate() {
        let mut row = b.realization.homogeneous_component(n);
        row.resize(cols + dim, 0);
        row[cols + i] = 1;
        aug.push_row(&row);
    }
    let pivots = aug.rref();
    assert!(
        pivots.len() == dim && pivots.iter().all(|&c| c < cols),
        "graded basis realizations are linearly dependent at r={r}, n={n}, p={p}"
    );

    let mut rref = FpMatrix::zeros(field, dim, cols);
    let mut transform = FpMatrix::zeros(field, dim, dim);
    for i in 0..dim {
        for c in 0..cols {
            rref.set(i, c, aug.get(i, c));
        }
        for c in 0..dim {
            transform.set(i, c, aug.get(i, cols + c));
        }
    }
    GradedLayer {
        params,
        n,
        basis,
        rref,
        pivots,
        transform,
    }
}

impl GradedLayer {
    pub fn params(&self) -> Trunc {
        self.params
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[GradedBasisElement] {
        &self.basis
    }

    /// Coordinates of a dense degree-n vector in the layer basis, or
    /// `None` when the vector lies outside the realization span.
    pub fn express(&self, v: &[u64]) -> Option<Vec<u64>> {
        let f = self.params.field();
        assert_eq!(v.len(), self.rref.ncols(), "wrong ambient dimension");
        let mut residual = v.to_vec();
        let mut y = vec![0u64; self.dim()];
        for (row, &pc) in self.pivots.iter().enumerate() {
            let c = residual[pc];
            if c != 0 {
                y[row] = c;
                for (k, r) in residual.iter_mut().enumerate() {
                    *r = f.sub(*r, f.mul(c, self.rref.get(row, k)));
                }
            }
        }
        if residual.iter().any(|&x| x != 0) {
            return None;
        }
        // x * M = y * rref with rref = transform * M, so x = y * transform.
        let mut coords = vec![0u64; self.dim()];
        for (i, &yi) in y.iter().enumerate() {
            if yi != 0 {
                for (jx, c) in coords.iter_mut().enumerate() {
                    *c = f.add(*c, f.mul(yi, self.transform.get(i, jx)));
                }
            }
        }
        Some(coords)
    }

    /// Apply the substitution `X_i -> sum_k g[k][i] X_k` to a polynomial.
    pub fn substitute(&self, poly: &NcPoly, g: &FpMatrix) -> NcPoly {
        substitute(poly, g)
    }

    /// Matrix of the layer action of `g` in layer coordinates: column `j`
    /// holds the coordinates of the image of basis element `j`, so the
    /// map `g -> action_matrix(g)` is a homomorphism.
    ///
    /// Panics when `g` is singular or of the wrong shape.
    pub fn action_matrix(&self, g: &FpMatrix) -> FpMatrix {
        let r = self.params.rank();
        assert_eq!(g.field(), self.params.field(), "mismatched characteristic");
        assert!(
            g.nrows() == r && g.ncols() == r,
            "action matrix must be {r}x{r}"
        );
        assert_ne!(g.det(), 0, "layer actions require invertible matrices");
        let dim = self.dim();
        let mut out = FpMatrix::zeros(self.params.field(), dim, dim);
        for (j, b) in self.basis.iter().enumerate() {
            let image = substitute(&b.realization, g);
            let coords = self
                .express(&image.homogeneous_component(self.n))
                .expect("layer image escaped the realization span");
            for (i, &c) in coords.iter().enumerate() {
                out.set(i, j, c);
            }
        }
        out
    }
}

/// Substitution `X_i -> sum_k g[k][i] X_k` extended multiplicatively.
pub fn substitute(poly: &NcPoly, g: &FpMatrix) -> NcPoly {
    let params = poly.params();
    let r = params.rank();
    assert!(g.nrows() == r && g.ncols() == r, "substitution shape");
    assert_eq!(g.field(), params.field(), "mismatched characteristic");
    let images: Vec<NcPoly> = (0..r)
        .map(|i| {
            let mut lin = NcPoly::zero(params);
            for k in 0..r {
                let c = g.get(k, i);
                if c != 0 {
                    lin = lin.add(&NcPoly::gen(params, k).scalar_mul(c as i64));
                }
            }
            lin
        })
        .collect();
    let mut out = NcPoly::zero(params);
    for (word, coeff) in poly.terms() {
        let mut acc = NcPoly::one(params).scalar_mul(coeff as i64);
        for letter in word.letters() {
            acc = acc.mul(&images[letter]);
        }
        out = out.add(&acc);
    }
    out
}

/// Generators of the group of r x r matrices over F_p with determinant
/// +-1: every elementary transvection `E_ij(1)` together with
/// `diag(-1, 1, ..., 1)`.
pub fn sl_pm_generators(r: usize, p: u64) -> Vec<FpMatrix> {
    assert!(r >= 1);
    let field = Fp::new(p);
    let mut gens = Vec::new();
    for i in 0..r {
        for j in 0..r {
            if i != j {
                let mut m = FpMatrix::identity(field, r);
                m.set(i, j, 1);
                gens.push(m);
            }
        }
    }
    let mut neg = FpMatrix::identity(field, r);
    neg.set(0, 0, field.reduce(-1));
    gens.push(neg);
    gens
}
