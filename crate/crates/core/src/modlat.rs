//! Invariant subspace lattices of finite F_p-modules, and the census of
//! characteristic subgroups they cut out of the filtration.
//!
//! A module is a vector space F_p^d together with a finite list of
//! invertible matrices (the acting generators).  Submodules are
//! enumerated exactly: spin every cyclic submodule, then close under
//! joins.  Exhaustion of the configured budget degrades the result to an
//! explicitly flagged lower bound instead of failing.
//!
//! The census walks the graded layers: each invariant subspace `U` of
//! the degree-n layer lifts to a characteristic subgroup pinched between
//! consecutive filtration subgroups, of index `p^e` where `e` is the
//! cumulative layer dimension minus `dim U`.  The full subspace is
//! skipped because its lift already appears as the zero subspace of the
//! previous layer.

use crate::arith::cumulative_log_index;
use crate::fp::{Fp, FpMatrix};
use crate::liegraded::{graded_basis, sl_pm_generators, GradedLayer};
use crate::magnus::{embed, FreeWord};
use crate::ncpoly::Trunc;
use crate::stats::{linear_fit, LinearFit};
use rayon::prelude::*;
use std::cmp::Ordering;
use std::collections::BTreeSet;
use thiserror::Error;

/// A subspace of F_p^d in canonical form: the reduced row echelon basis
/// with zero rows dropped.  Equality of subspaces is equality of the
/// canonical matrices.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct Subspace {
    ambient: usize,
    mat: FpMatrix,
}

impl Subspace {
    pub fn zero(field: Fp, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            mat: FpMatrix::zeros(field, 0, ambient),
        }
    }

    pub fn full(field: Fp, ambient: usize) -> Subspace {
        Subspace {
            ambient,
            mat: FpMatrix::identity(field, ambient),
        }
    }

    /// Span of the given vectors.
    pub fn from_rows(field: Fp, ambient: usize, rows: &[Vec<u64>]) -> Subspace {
        let mut m = FpMatrix::zeros(field, 0, ambient);
        for row in rows {
            assert_eq!(row.len(), ambient, "wrong ambient dimension");
            m.push_row(row);
        }
        let rank = m.rref().len();
        let mut canon = FpMatrix::zeros(field, 0, ambient);
        for i in 0..rank {
            canon.push_row(m.row(i));
        }
        Subspace {
            ambient,
            mat: canon,
        }
    }

    pub fn field(&self) -> Fp {
        self.mat.field()
    }

    pub fn ambient(&self) -> usize {
        self.ambient
    }

    pub fn dim(&self) -> usize {
        self.mat.nrows()
    }

    pub fn basis_rows(&self) -> impl Iterator<Item = &[u64]> {
        (0..self.dim()).map(|i| self.mat.row(i))
    }

    pub fn contains(&self, v: &[u64]) -> bool {
        assert_eq!(v.len(), self.ambient, "wrong ambient dimension");
        let f = self.field();
        let mut rem = v.to_vec();
        for i in 0..self.dim() {
            let pivot = self.mat.row(i).iter().position(|&x| x != 0).unwrap();
            let c = rem[pivot];
            if c != 0 {
                for (k, r) in rem.iter_mut().enumerate() {
                    *r = f.sub(*r, f.mul(c, self.mat.get(i, k)));
                }
            }
        }
        rem.iter().all(|&x| x == 0)
    }

    pub fn is_subspace_of(&self, other: &Subspace) -> bool {
        self.basis_rows().all(|row| other.contains(row))
    }

    /// Join: span of the union.
    pub fn sum(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "mismatched ambient spaces");
        let rows: Vec<Vec<u64>> = self
            .basis_rows()
            .chain(other.basis_rows())
            .map(|r| r.to_vec())
            .collect();
        Subspace::from_rows(self.field(), self.ambient, &rows)
    }

    /// Intersection, via row reduction of the doubled matrix: rows
    /// `(u, u)` for u in self and `(v, 0)` for v in other; reduced rows
    /// with zero left half carry an intersection basis on the right.
    pub fn intersect(&self, other: &Subspace) -> Subspace {
        assert_eq!(self.ambient, other.ambient, "mismatched ambient spaces");
        let f = self.field();
        let d = self.ambient;
        let mut m = FpMatrix::zeros(f, 0, 2 * d);
        for row in self.basis_rows() {
            let mut wide = row.to_vec();
            wide.extend_from_slice(row);
            m.push_row(&wide);
        }
        for row in other.basis_rows() {
            let mut wide = row.to_vec();
            wide.resize(2 * d, 0);
            m.push_row(&wide);
        }
        m.rref();
        let mut rows = Vec::new();
        for i in 0..m.nrows() {
            let (left, right) = m.row(i).split_at(d);
            if left.iter().all(|&x| x == 0) && right.iter().any(|&x| x != 0) {
                rows.push(right.to_vec());
            }
        }
        Subspace::from_rows(f, d, &rows)
    }
}

impl Ord for Subspace {
    fn cmp(&self, other: &Subspace) -> Ordering {
        self.ambient
            .cmp(&other.ambient)
            .then_with(|| self.dim().cmp(&other.dim()))
            .then_with(|| self.mat.entries().cmp(other.mat.entries()))
    }
}

impl PartialOrd for Subspace {
    fn partial_cmp(&self, other: &Subspace) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// A finite F_p-module: the ambient dimension and the invertible
/// generator actions.
#[derive(Debug, Clone)]
pub struct ModuleSpec {
    field: Fp,
    dim: usize,
    gens: Vec<FpMatrix>,
}

impl ModuleSpec {
    pub fn new(field: Fp, dim: usize, gens: Vec<FpMatrix>) -> ModuleSpec {
        for g in &gens {
            assert_eq!(g.field(), field, "mismatched characteristic");
            assert!(
                g.nrows() == dim && g.ncols() == dim,
                "generator of wrong shape"
            );
            assert_ne!(g.det(), 0, "module generators must be invertible");
        }
        ModuleSpec { field, dim, gens }
    }

    /// The module with trivial action (no generators beyond identity).
    pub fn trivial(field: Fp, dim: usize) -> ModuleSpec {
        ModuleSpec::new(field, dim, vec![FpMatrix::identity(field, dim)])
    }

    pub fn field(&self) -> Fp {
        self.field
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn gens(&self) -> &[FpMatrix] {
        &self.gens
    }

    /// The k-fold direct power with diagonal action.
    pub fn power(&self, k: usize) -> ModuleSpec {
        assert!(k >= 1);
        ModuleSpec::new(
            self.field,
            self.dim * k,
            self.gens.iter().map(|g| g.block_power(k)).collect(),
        )
    }

    pub fn is_invariant(&self, u: &Subspace) -> bool {
        assert_eq!(u.ambient(), self.dim, "wrong ambient dimension");
        self.gens
            .iter()
            .all(|g| u.basis_rows().all(|row| u.contains(&g.mul_vec(row))))
    }
}

/// Smallest submodule containing `v`: close the span of `v` under the
/// generator actions.
pub fn spin(spec: &ModuleSpec, v: &[u64]) -> Subspace {
    assert_eq!(v.len(), spec.dim, "wrong ambient dimension");
    let mut space = Subspace::from_rows(spec.field, spec.dim, &[v.to_vec()]);
    loop {
        let mut grew = false;
        let images: Vec<Vec<u64>> = space
            .basis_rows()
            .flat_map(|row| spec.gens.iter().map(move |g| g.mul_vec(row)))
            .collect();
        for img in images {
            if !space.contains(&img) {
                space = space.sum(&Subspace::from_rows(spec.field, spec.dim, &[img]));
                grew = true;
            }
        }
        if !grew {
            return space;
        }
    }
}

/// Budget for submodule enumeration.
#[derive(Debug, Clone, Copy)]
pub struct LatticeBudget {
    /// Hard ceiling on the ambient dimension of any enumerated module.
    pub max_dim: usize,
    /// Lattice size past which enumeration stops with a partial result.
    pub max_size: usize,
}

impl Default for LatticeBudget {
    fn default() -> LatticeBudget {
        LatticeBudget {
            max_dim: 14,
            max_size: 1_000_000,
        }
    }
}

impl LatticeBudget {
    pub fn with_max_size(max_size: usize) -> LatticeBudget {
        LatticeBudget {
            max_size,
            ..LatticeBudget::default()
        }
    }
}

/// Enumeration refused: the ambient dimension exceeds the budget cap.
#[derive(Debug, Clone, Error, PartialEq, Eq)]
#[error("module dimension {dim} exceeds the enumeration cap {max_dim}")]
pub struct DimensionTooLarge {
    pub dim: usize,
    pub max_dim: usize,
}

/// The set of submodules found, sorted canonically.  When `exact` is
/// false the budget ran out and the set is a lower bound.
#[derive(Debug, Clone)]
pub struct SubmoduleLattice {
    pub subspaces: Vec<Subspace>,
    pub exact: bool,
}

impl SubmoduleLattice {
    pub fn count(&self) -> usize {
        self.subspaces.len()
    }
}

/// Enumerate every submodule: spin all cyclic submodules, then close the
/// collection under pairwise joins.  Every returned subspace is verified
/// invariant.  A lattice larger than the budget comes back flagged as
/// partial (a genuine lower bound) rather than as an error.
pub fn enumerate_submodules(
    spec: &ModuleSpec,
    budget: &LatticeBudget,
) -> Result<SubmoduleLattice, DimensionTooLarge> {
    if spec.dim > budget.max_dim {
        return Err(DimensionTooLarge {
            dim: spec.dim,
            max_dim: budget.max_dim,
        });
    }
    let p = spec.field.modulus();
    let d = spec.dim;
    let seeds = (p as usize).checked_pow(d as u32).expect("seed overflow");

    let cyclic: Vec<Subspace> = (1..seeds)
        .into_par_iter()
        .map(|idx| {
            let mut v = vec![0u64; d];
            let mut n = idx;
            for slot in v.iter_mut() {
                *slot = (n % p as usize) as u64;
                n /= p as usize;
            }
            spin(spec, &v)
        })
        .collect();

    let mut lattice: BTreeSet<Subspace> = cyclic.into_iter().collect();
    lattice.insert(Subspace::zero(spec.field, d));

    let mut exact = true;
    if lattice.len() > budget.max_size {
        exact = false;
    } else {
        // Join-close: keep a worklist of elements not yet paired with
        // the whole set.
        let mut work: Vec<Subspace> = lattice.iter().cloned().collect();
        'closing: while let Some(u) = work.pop() {
            let partners: Vec<Subspace> = lattice.iter().cloned().collect();
            for v in partners {
                let join = u.sum(&v);
                if lattice.insert(join.clone()) {
                    if lattice.len() > budget.max_size {
                        exact = false;
                        break 'closing;
                    }
                    work.push(join);
                }
            }
        }
    }

    let subspaces: Vec<Subspace> = lattice.into_iter().collect();
    for u in &subspaces {
        assert!(spec.is_invariant(u), "enumerated subspace is not invariant");
    }
    Ok(SubmoduleLattice { subspaces, exact })
}

/// Number of submodules of the k-fold direct power, with exactness flag.
pub fn count_submodules_power(
    spec: &ModuleSpec,
    k: usize,
    budget: &LatticeBudget,
) -> Result<(usize, bool), DimensionTooLarge> {
    let lattice = enumerate_submodules(&spec.power(k), budget)?;
    Ok((lattice.count(), lattice.exact))
}

/// The graded layer as a module over the determinant-+-1 matrix group,
/// through the layer action.
pub fn layer_module(layer: &GradedLayer) -> ModuleSpec {
    let gens = sl_pm_generators(layer.params().rank(), layer.params().p())
        .iter()
        .map(|g| layer.action_matrix(g))
        .collect();
    ModuleSpec::new(layer.params().field(), layer.dim(), gens)
}

/// One census line: all characteristic subgroups obtained from invariant
/// subspaces of dimension `dim_u` in layer `n`, each of index
/// `p^index_exponent`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct CensusRow {
    pub n: usize,
    pub dim_u: usize,
    pub index_exponent: u64,
    pub count: usize,
    pub exact: bool,
}

/// Census of characteristic subgroups pinched between consecutive
/// filtration subgroups of the rank-r free group, layers `1..=n_max`.
#[derive(Debug, Clone)]
pub struct Census {
    pub r: usize,
    pub p: u64,
    pub n_max: usize,
    pub rows: Vec<CensusRow>,
}

impl Census {
    /// Cumulative subgroup counts by index exponent: pairs
    /// `(e, number of census subgroups of index at most p^e)`.
    pub fn cumulative_by_exponent(&self) -> Vec<(u64, usize)> {
        let mut by_e: Vec<(u64, usize)> = Vec::new();
        let mut rows: Vec<&CensusRow> = self.rows.iter().collect();
        rows.sort_by_key(|row| row.index_exponent);
        for row in rows {
            match by_e.last_mut() {
                Some((e, c)) if *e == row.index_exponent => *c += row.count,
                _ => {
                    let prev = by_e.last().map_or(0, |&(_, c)| c);
                    by_e.push((row.index_exponent, prev + row.count));
                }
            }
        }
        by_e
    }

    /// Least-squares fit of `log2(cumulative count)` against
    /// `(log2 index)^2`; `None` when there are too few distinct points.
    pub fn growth_fit(&self) -> Option<LinearFit> {
        let log2p = (self.p as f64).log2();
        let pts: Vec<(f64, f64)> = self
            .cumulative_by_exponent()
            .into_iter()
            .map(|(e, c)| {
                let logindex = e as f64 * log2p;
                (logindex * logindex, (c as f64).log2())
            })
            .collect();
        linear_fit(&pts)
    }

    pub fn all_exact(&self) -> bool {
        self.rows.iter().all(|row| row.exact)
    }

    pub fn to_json(&self) -> serde_json::Value {
        let fit = match self.growth_fit() {
            None => serde_json::json!("insufficient data"),
            Some(f) => serde_json::json!({
                "slope": f.slope,
                "intercept": f.intercept,
                "residuals": f.residuals,
            }),
        };
        serde_json::json!({
            "r": self.r,
            "p": self.p,
            "n_max": self.n_max,
            "rows": self.rows.iter().map(|row| serde_json::json!({
                "n": row.n,
                "dim_u": row.dim_u,
                "index_exponent": row.index_exponent,
                "count": row.count,
                "exact": row.exact,
            })).collect::<Vec<_>>(),
            "summary": {
                "cumulative": self.cumulative_by_exponent().iter().map(|&(e, c)| {
                    serde_json::json!({"index_exponent": e, "cumulative_count": c})
                }).collect::<Vec<_>>(),
                "fit": fit,
                "exact": self.all_exact(),
            },
        })
    }
}

/// Run the census over layers `1..=n_max`: enumerate the invariant
/// subspaces of each layer, keep the proper ones (the full subspace
/// duplicates the zero subspace of the next layer), and bin them by
/// dimension.  Partial enumerations mark their rows as inexact.
pub fn characteristic_census(
    r: usize,
    p: u64,
    n_max: usize,
    budget: &LatticeBudget,
) -> Result<Census, DimensionTooLarge> {
    assert!(n_max >= 1);
    let mut rows = Vec::new();
    for n in 1..=n_max {
        let layer = graded_basis(r, n, p);
        let spec = layer_module(&layer);
        let lattice = enumerate_submodules(&spec, budget)?;
        let cumulative: u64 = cumulative_log_index(r as u64, n as u64, p)
            .try_into()
            .expect("cumulative exponent too large");
        let mut by_dim: Vec<usize> = vec![0; layer.dim() + 1];
        for u in &lattice.subspaces {
            if u.dim() < layer.dim() {
                by_dim[u.dim()] += 1;
            }
        }
        for (dim_u, &count) in by_dim.iter().enumerate() {
            if count > 0 {
                rows.push(CensusRow {
                    n,
                    dim_u,
                    index_exponent: cumulative - dim_u as u64,
                    count,
                    exact: lattice.exact,
                });
            }
        }
    }
    Ok(Census { r, p, n_max, rows })
}

/// Membership test for the characteristic subgroup lifted from an
/// invariant subspace `u` of the degree-n layer: a word belongs when its
/// image has valuation at least n and the degree-n component falls in
/// `u` (in layer coordinates).
pub fn lift_contains(layer: &GradedLayer, u: &Subspace, word: &FreeWord) -> bool {
    assert_eq!(u.ambient(), layer.dim(), "subspace not in layer coordinates");
    let n = layer.n();
    let params = Trunc::new(layer.params().rank(), layer.params().p(), n);
    let image = embed(params, word);
    if !image.valuation().at_least(n) {
        return false;
    }
    let coords = layer
        .express(&image.poly().homogeneous_component(n))
        .expect("deep word component escaped the layer span");
    u.contains(&coords)
}
