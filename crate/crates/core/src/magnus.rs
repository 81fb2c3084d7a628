//! Free group words and their embedding into the truncated envelope.
//!
//! The embedding sends `x_i -> 1 + X_i`; inverses go to geometric
//! series.  The augmentation valuation of the image filters the free
//! group: a word lies in the n-th filtration subgroup exactly when its
//! image is `1 + (terms of degree >= n)`.  On top of the embedding this
//! module provides:
//!
//! * group realizations of graded basis elements (commutator words whose
//!   images lead with the basis realization),
//! * a rigidity checker: an endomorphism that fixes every generator
//!   modulo the second filtration subgroup moves no graded layer,
//! * a seeded sampling audit of the recursive description of the
//!   filtration (p-th powers and commutators land where they must).

use crate::liegraded::{graded_basis, standard_factorization, GradedBasisElement, GradedLayer};
use crate::ncpoly::{NcPoly, Trunc, Valuation, Word};
use rand::rngs::StdRng;
use rand::{Rng, SeedableRng};
use std::fmt;
use thiserror::Error;

/// One letter of a free group word: a generator or its inverse.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub struct Letter {
    pub gen: usize,
    pub inv: bool,
}

impl Letter {
    fn inverse(self) -> Letter {
        Letter {
            gen: self.gen,
            inv: !self.inv,
        }
    }
}

/// A freely reduced word in the free group on generators `x1, x2, ...`.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Default)]
pub struct FreeWord {
    letters: Vec<Letter>,
}

impl FreeWord {
    pub fn identity() -> FreeWord {
        FreeWord::default()
    }

    pub fn gen(i: usize) -> FreeWord {
        FreeWord {
            letters: vec![Letter { gen: i, inv: false }],
        }
    }

    /// Build from raw letters, freely reducing adjacent inverse pairs.
    pub fn from_letters(letters: impl IntoIterator<Item = Letter>) -> FreeWord {
        let mut stack: Vec<Letter> = Vec::new();
        for l in letters {
            if stack.last() == Some(&l.inverse()) {
                stack.pop();
            } else {
                stack.push(l);
            }
        }
        FreeWord { letters: stack }
    }

    pub fn letters(&self) -> &[Letter] {
        &self.letters
    }

    pub fn len(&self) -> usize {
        self.letters.len()
    }

    pub fn is_empty(&self) -> bool {
        self.letters.is_empty()
    }

    /// The empty word; same as [`FreeWord::is_empty`], under the group name.
    pub fn is_identity(&self) -> bool {
        self.letters.is_empty()
    }

    pub fn mul(&self, other: &FreeWord) -> FreeWord {
        FreeWord::from_letters(self.letters.iter().chain(other.letters.iter()).copied())
    }

    pub fn inverse(&self) -> FreeWord {
        FreeWord {
            letters: self.letters.iter().rev().map(|l| l.inverse()).collect(),
        }
    }

    pub fn pow(&self, e: u64) -> FreeWord {
        let mut out = FreeWord::identity();
        for _ in 0..e {
            out = out.mul(self);
        }
        out
    }

    /// `[a, b] = a b a^-1 b^-1`.
    pub fn commutator(&self, other: &FreeWord) -> FreeWord {
        self.mul(other).mul(&self.inverse()).mul(&other.inverse())
    }

    /// Conjugate `w -> g w g^-1`.
    pub fn conjugate_by(&self, g: &FreeWord) -> FreeWord {
        g.mul(self).mul(&g.inverse())
    }

    /// Largest generator index used, if any.
    pub fn max_gen(&self) -> Option<usize> {
        self.letters.iter().map(|l| l.gen).max()
    }
}

impl fmt::Display for FreeWord {
    /// Canonical syntax: `x1*x2^-1*x1^2`, with runs collapsed into
    /// exponents; the identity renders as `1`.
    fn fmt(&self, out: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.letters.is_empty() {
            return write!(out, "1");
        }
        let mut first = true;
        let mut i = 0;
        while i < self.letters.len() {
            let l = self.letters[i];
            let mut run = 1usize;
            while i + run < self.letters.len() && self.letters[i + run] == l {
                run += 1;
            }
            if !first {
                write!(out, "*")?;
            }
            first = false;
            let e = if l.inv { -(run as i64) } else { run as i64 };
            if e == 1 {
                write!(out, "x{}", l.gen + 1)?;
            } else {
                write!(out, "x{}^{}", l.gen + 1, e)?;
            }
            i += run;
        }
        Ok(())
    }
}

/// Parse failure for the `x1*x2^-1` word syntax, with a byte position.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("{msg} at byte {pos}")]
pub struct WordParseError {
    pub pos: usize,
    pub msg: String,
}

/// Parse the CLI word syntax: `*`-separated factors, each `xK` or
/// `xK^E` with `K` a 1-based generator index at most `rank` and `E` a
/// signed integer; `1` denotes the identity.  Whitespace is allowed
/// around factors.
pub fn parse_free_word(input: &str, rank: usize) -> Result<FreeWord, WordParseError> {
    let err = |pos: usize, msg: String| WordParseError { pos, msg };
    let mut letters: Vec<Letter> = Vec::new();
    let mut offset = 0usize;
    for chunk in input.split('*') {
        let trimmed = chunk.trim();
        let pos = offset + (chunk.len() - chunk.trim_start().len());
        offset += chunk.len() + 1;
        if trimmed.is_empty() {
            if input.trim().is_empty() && letters.is_empty() {
                break;
            }
            return Err(err(pos, "empty factor".into()));
        }
        if trimmed == "1" {
            continue;
        }
        let rest = trimmed
            .strip_prefix('x')
            .ok_or_else(|| err(pos, format!("expected generator, found {trimmed:?}")))?;
        let (idx_str, exp_str) = match rest.find('^') {
            Some(c) => (&rest[..c], Some(&rest[c + 1..])),
            None => (rest, None),
        };
        let idx: usize = idx_str
            .parse()
            .map_err(|_| err(pos + 1, format!("bad generator index {idx_str:?}")))?;
        if idx == 0 || idx > rank {
            return Err(err(
                pos + 1,
                format!("generator x{idx} outside x1..x{rank}"),
            ));
        }
        let exp: i64 = match exp_str {
            None => 1,
            Some(e) => e
                .parse()
                .map_err(|_| err(pos + 1 + idx_str.len() + 1, format!("bad exponent {e:?}")))?,
        };
        let letter = Letter {
            gen: idx - 1,
            inv: exp < 0,
        };
        for _ in 0..exp.unsigned_abs() {
            letters.push(letter);
        }
    }
    Ok(FreeWord::from_letters(letters))
}

/// Image of a free group word in the truncated envelope.  The constant
/// term of the underlying polynomial is always 1.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct MagnusElement {
    poly: NcPoly,
}

impl MagnusElement {
    pub fn one(params: Trunc) -> MagnusElement {
        MagnusElement {
            poly: NcPoly::one(params),
        }
    }

    pub fn poly(&self) -> &NcPoly {
        &self.poly
    }

    pub fn mul(&self, other: &MagnusElement) -> MagnusElement {
        MagnusElement {
            poly: self.poly.mul(&other.poly),
        }
    }

    pub fn inverse(&self) -> MagnusElement {
        MagnusElement {
            poly: self.poly.invert_unit(),
        }
    }

    /// Augmentation valuation of `self - 1`; `Infinite` for the identity.
    pub fn valuation(&self) -> Valuation {
        self.poly.aug_valuation()
    }
}

/// Embed a free word through `x_i -> 1 + X_i`, truncating at the degree
/// cap of `params`.  Panics if the word uses a generator outside the
/// rank of `params`.
pub fn embed(params: Trunc, word: &FreeWord) -> MagnusElement {
    if let Some(m) = word.max_gen() {
        assert!(m < params.rank(), "word uses generator beyond the rank");
    }
    let one = NcPoly::one(params);
    let pos: Vec<NcPoly> = (0..params.rank())
        .map(|i| one.add(&NcPoly::gen(params, i)))
        .collect();
    let mut neg: Vec<Option<NcPoly>> = vec![None; params.rank()];
    let mut acc = one;
    for l in word.letters() {
        if l.inv {
            let img = neg[l.gen].get_or_insert_with(|| pos[l.gen].invert_unit());
            acc = acc.mul(img);
        } else {
            acc = acc.mul(&pos[l.gen]);
        }
    }
    MagnusElement { poly: acc }
}

/// Valuation of a word's image: the filtration level it certifiably
/// belongs to within the truncation.
pub fn zassenhaus_valuation(params: Trunc, word: &FreeWord) -> Valuation {
    embed(params, word).valuation()
}

/// Group-commutator bracketing of a Lyndon word along its standard
/// factorization: letters map to generators, `gamma(u) = [gamma(v), gamma(w)]`.
pub fn group_bracketing(word: Word) -> FreeWord {
    if word.degree() == 1 {
        return FreeWord::gen(word.get(0));
    }
    let (v, w) = standard_factorization(word);
    group_bracketing(v).commutator(&group_bracketing(w))
}

/// The group word `gamma(u)^(p^j)` realizing a graded basis element, as
/// an element of the free group.
///
/// Every call verifies the contract tying group and envelope sides
/// together: the image has valuation exactly the layer degree and its
/// leading homogeneous component equals the basis realization.  A
/// failure is a bug, so it panics.
pub fn group_realization(b: &GradedBasisElement) -> FreeWord {
    let params = b.realization().params();
    let n = params.degree_cap();
    let word = group_bracketing(b.word()).pow(b.power());
    let image = embed(params, &word);
    assert_eq!(
        image.valuation(),
        Valuation::Finite(n),
        "realization of {} has wrong valuation",
        b.label()
    );
    assert_eq!(
        image.poly().homogeneous_component(n),
        b.realization().homogeneous_component(n),
        "realization of {} has wrong leading component",
        b.label()
    );
    word
}

/// An endomorphism of the free group, given by generator images.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Endomorphism {
    images: Vec<FreeWord>,
}

impl Endomorphism {
    pub fn new(images: Vec<FreeWord>) -> Endomorphism {
        let r = images.len();
        assert!(
            images
                .iter()
                .all(|w| w.max_gen().is_none_or(|m| m < r)),
            "image uses a generator beyond the rank"
        );
        Endomorphism { images }
    }

    pub fn identity(r: usize) -> Endomorphism {
        Endomorphism::new((0..r).map(FreeWord::gen).collect())
    }

    /// Conjugation `w -> g w g^-1`.
    pub fn inner(r: usize, g: &FreeWord) -> Endomorphism {
        Endomorphism::new((0..r).map(|i| FreeWord::gen(i).conjugate_by(g)).collect())
    }

    pub fn rank(&self) -> usize {
        self.images.len()
    }

    pub fn images(&self) -> &[FreeWord] {
        &self.images
    }

    pub fn apply(&self, word: &FreeWord) -> FreeWord {
        let mut out = FreeWord::identity();
        for l in word.letters() {
            let img = &self.images[l.gen];
            out = if l.inv {
                out.mul(&img.inverse())
            } else {
                out.mul(img)
            };
        }
        out
    }
}

/// Does `phi` fix every generator modulo the second filtration
/// subgroup?  Checked as: each `phi(x_i) x_i^-1` embeds with valuation
/// at least 2.
pub fn is_trivial_mod_d2(phi: &Endomorphism, p: u64) -> bool {
    let params = Trunc::new(phi.rank(), p, 2);
    (0..phi.rank()).all(|i| {
        let shift = phi.apply(&FreeWord::gen(i)).mul(&FreeWord::gen(i).inverse());
        zassenhaus_valuation(params, &shift).at_least(2)
    })
}

/// One graded layer element checked by [`check_rigidity`].
#[derive(Debug, Clone)]
pub struct RigidityRecord {
    pub n: usize,
    pub basis_element: String,
    /// Valuation of `phi(g) g^-1` for the realization word `g`.
    pub valuation: Valuation,
    /// Whether the valuation reached `n + 1`.
    pub verdict: bool,
}

/// Outcome of [`check_rigidity`].
#[derive(Debug, Clone)]
pub enum RigidityOutcome {
    /// `phi` moves some generator already in the first graded layer, so
    /// the rigidity statement does not apply.
    PreconditionFailed { generator: usize, valuation: Valuation },
    Checked {
        records: Vec<RigidityRecord>,
        violations: usize,
    },
}

/// Report of a rigidity check.
#[derive(Debug, Clone)]
pub struct RigidityCheck {
    pub phi: Vec<String>,
    pub r: usize,
    pub p: u64,
    pub n_max: usize,
    pub truncation: usize,
    pub outcome: RigidityOutcome,
}

impl RigidityCheck {
    pub fn passed(&self) -> bool {
        matches!(&self.outcome, RigidityOutcome::Checked { violations: 0, .. })
    }

    pub fn to_json(&self) -> serde_json::Value {
        let val_json = |v: Valuation| match v {
            Valuation::Finite(k) => serde_json::json!(k),
            Valuation::Infinite => serde_json::json!("inf"),
        };
        let mut doc = serde_json::json!({
            "phi": self.phi,
            "r": self.r,
            "p": self.p,
            "n_max": self.n_max,
            "truncation": self.truncation,
        });
        match &self.outcome {
            RigidityOutcome::PreconditionFailed { generator, valuation } => {
                doc["outcome"] = serde_json::json!("precondition_failed");
                doc["precondition"] = serde_json::json!({
                    "generator": format!("x{}", generator + 1),
                    "valuation": val_json(*valuation),
                });
            }
            RigidityOutcome::Checked { records, violations } => {
                doc["outcome"] = serde_json::json!("checked");
                doc["violations"] = serde_json::json!(violations);
                doc["records"] = serde_json::Value::Array(
                    records
                        .iter()
                        .map(|rec| {
                            serde_json::json!({
                                "n": rec.n,
                                "basis_element": rec.basis_element,
                                "valuation": val_json(rec.valuation),
                                "verdict": rec.verdict,
                            })
                        })
                        .collect(),
                );
            }
        }
        doc
    }
}

/// Check that an endomorphism trivial mod the second filtration subgroup
/// acts trivially on every graded layer up to `n_max`: for each layer-n
/// basis realization `g`, the word `phi(g) g^-1` must embed with
/// valuation at least `n + 1`.
///
/// `truncation` defaults to `n_max + 1`, the smallest cap that can
/// certify the required bounds; larger caps are allowed.
pub fn check_rigidity(
    phi: &Endomorphism,
    p: u64,
    n_max: usize,
    truncation: Option<usize>,
) -> RigidityCheck {
    let r = phi.rank();
    let t = truncation.unwrap_or(n_max + 1);
    assert!(t > n_max, "truncation too small to certify bounds");
    let report = |outcome| RigidityCheck {
        phi: phi.images().iter().map(|w| w.to_string()).collect(),
        r,
        p,
        n_max,
        truncation: t,
        outcome,
    };

    let pre_params = Trunc::new(r, p, 2);
    for i in 0..r {
        let shift = phi.apply(&FreeWord::gen(i)).mul(&FreeWord::gen(i).inverse());
        let v = zassenhaus_valuation(pre_params, &shift);
        if !v.at_least(2) {
            return report(RigidityOutcome::PreconditionFailed {
                generator: i,
                valuation: v,
            });
        }
    }

    let params = Trunc::new(r, p, t);
    let mut records = Vec::new();
    let mut violations = 0usize;
    for n in 1..=n_max {
        let layer = graded_basis(r, n, p);
        for b in layer.basis() {
            let g = group_realization(b);
            let moved = phi.apply(&g);
            let shift = embed(params, &moved).mul(&embed(params, &g).inverse());
            let valuation = shift.valuation();
            let verdict = valuation.at_least(n + 1);
            if !verdict {
                violations += 1;
            }
            records.push(RigidityRecord {
                n,
                basis_element: b.label(),
                valuation,
                verdict,
            });
        }
    }
    report(RigidityOutcome::Checked {
        records,
        violations,
    })
}

/// Default sample count per split used by [`verify_recursive_filtration`].
pub const DEFAULT_SAMPLE_BUDGET: usize = 200;

/// Report of the sampling audit of the recursive filtration shape.
#[derive(Debug, Clone)]
pub struct FiltrationAudit {
    pub r: usize,
    pub p: u64,
    pub n_max: usize,
    pub truncation: usize,
    pub seed: u64,
    pub budget: usize,
    pub power_checks: usize,
    pub commutator_checks: usize,
    pub violations: Vec<String>,
}

impl FiltrationAudit {
    pub fn passed(&self) -> bool {
        self.violations.is_empty()
    }

    pub fn to_json(&self) -> serde_json::Value {
        serde_json::json!({
            "r": self.r,
            "p": self.p,
            "n_max": self.n_max,
            "truncation": self.truncation,
            "seed": self.seed,
            "budget": self.budget,
            "power_checks": self.power_checks,
            "commutator_checks": self.commutator_checks,
            "violations": self.violations,
        })
    }
}

/// Sampler of words guaranteed to sit deep in the filtration: products
/// of (possibly conjugated, possibly inverted) realization words of
/// layers at least `min_level`.
struct DeepSampler {
    r: usize,
    /// realization words per layer index (1-based layers).
    layer_words: Vec<Vec<FreeWord>>,
}

impl DeepSampler {
    fn new(r: usize, p: u64, max_level: usize) -> DeepSampler {
        let layer_words = (0..=max_level)
            .map(|n| {
                if n == 0 {
                    Vec::new()
                } else {
                    graded_basis(r, n, p)
                        .basis()
                        .iter()
                        .map(group_realization)
                        .collect()
                }
            })
            .collect();
        DeepSampler { r, layer_words }
    }

    fn max_level(&self) -> usize {
        self.layer_words.len() - 1
    }

    fn sample(&self, rng: &mut StdRng, min_level: usize) -> FreeWord {
        let mut out = FreeWord::identity();
        for _ in 0..rng.gen_range(1..=2usize) {
            let level = rng.gen_range(min_level..=self.max_level());
            let pool = &self.layer_words[level];
            let mut factor = pool[rng.gen_range(0..pool.len())].clone();
            if rng.gen_bool(0.5) {
                factor = factor.inverse();
            }
            if rng.gen_bool(0.5) {
                let conj = FreeWord::from_letters((0..rng.gen_range(1..=2usize)).map(|_| Letter {
                    gen: rng.gen_range(0..self.r),
                    inv: rng.gen_bool(0.5),
                }));
                factor = factor.conjugate_by(&conj);
            }
            out = out.mul(&factor);
        }
        out
    }
}

/// Sample-check the recursive shape of the filtration: for each level
/// `n <= n_max`, p-th powers of words of valuation at least `ceil(n/p)`
/// must reach valuation `n`, and commutators of words of valuations `j`
/// and `k` with `j + k = n` must reach valuation `n`.  Words are drawn
/// from a deterministic seeded sampler, `budget` many per split.
pub fn verify_recursive_filtration(
    r: usize,
    p: u64,
    n_max: usize,
    budget: usize,
    truncation: Option<usize>,
    seed: u64,
) -> FiltrationAudit {
    assert!(n_max >= 1);
    let t = truncation.unwrap_or(n_max + 1);
    assert!(t >= n_max, "truncation below the deepest level checked");
    let params = Trunc::new(r, p, t);
    let mut rng = StdRng::seed_from_u64(seed);
    let sampler = DeepSampler::new(r, p, n_max.max(1));
    let mut violations = Vec::new();
    let mut power_checks = 0usize;
    let mut commutator_checks = 0usize;

    for n in 1..=n_max {
        let need = (n as u64).div_ceil(p) as usize;
        for _ in 0..budget {
            let a = sampler.sample(&mut rng, need);
            debug_assert!(zassenhaus_valuation(params, &a).at_least(need));
            let v = zassenhaus_valuation(params, &a.pow(p));
            power_checks += 1;
            if !v.at_least(n) {
                violations.push(format!(
                    "p-th power of {a} has valuation {v}, expected at least {n}"
                ));
            }
        }
        for j in 1..=n / 2 {
            let k = n - j;
            for _ in 0..budget {
                let a = sampler.sample(&mut rng, j);
                let b = sampler.sample(&mut rng, k);
                let v = zassenhaus_valuation(params, &a.commutator(&b));
                commutator_checks += 1;
                if !v.at_least(n) {
                    violations.push(format!(
                        "[{a}, {b}] has valuation {v}, expected at least {n}"
                    ));
                }
            }
        }
    }
    FiltrationAudit {
        r,
        p,
        n_max,
        truncation: t,
        seed,
        budget,
        power_checks,
        commutator_checks,
        violations,
    }
}

/// Convenience handle used by downstream membership tests: lift data of
/// a graded layer.
pub fn layer_words(layer: &GradedLayer) -> Vec<FreeWord> {
    layer.basis().iter().map(group_realization).collect()
}
