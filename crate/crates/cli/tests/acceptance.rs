//! Acceptance gate for the workbench: seven end-to-end checks, each
//! reported as a single pass/fail line on stdout.  Run
//!
//! ```text
//! cargo test --test acceptance -- --test-threads=1 --nocapture
//! ```
//!
//! to watch the lines appear in order.  Every numeric expectation here is
//! exact; the only tolerances are wall-clock budgets.

mod common;

use std::time::Instant;

use zassenhaus::arith::{scan_growth_inequalities, zassenhaus_dim};
use zassenhaus::fp::{Fp, FpMatrix};
use zassenhaus::liegraded::graded_basis;
use zassenhaus::magnus::{
    check_rigidity, embed, group_realization, parse_free_word, Endomorphism, FreeWord, Letter,
    RigidityOutcome,
};
use zassenhaus::modlat::{
    characteristic_census, count_submodules_power, enumerate_submodules, layer_module,
    lift_contains, LatticeBudget, ModuleSpec, Subspace,
};
use zassenhaus::permw::{
    alternating_gens, cyclic_gens, enumerate_elements, normal_subgroups, tower_normal_count,
    tower_normal_count_by_recursion, verify_wreath_dichotomy, wreath_product, TowerSpec,
};

/// Run one acceptance criterion and print exactly one pass/fail line.
fn criterion(number: usize, title: &str, budget_secs: u64, body: impl FnOnce()) {
    let start = Instant::now();
    let outcome = std::panic::catch_unwind(std::panic::AssertUnwindSafe(body));
    let elapsed = start.elapsed();
    let stamp = format!("({:.1}s, budget {budget_secs}s)", elapsed.as_secs_f64());
    match outcome {
        Ok(()) if elapsed.as_secs() < budget_secs => {
            println!("criterion {number}: PASS — {title} {stamp}");
        }
        Ok(()) => {
            println!("criterion {number}: FAIL — {title}: over time budget {stamp}");
            panic!("criterion {number} exceeded its {budget_secs}s budget: {elapsed:?}");
        }
        Err(cause) => {
            println!("criterion {number}: FAIL — {title} {stamp}");
            std::panic::resume_unwind(cause);
        }
    }
}

/// Rank of the matrix of leading homogeneous components of the group
/// realizations of a layer basis, computed on the group side only.
fn realization_rank(r: usize, n: usize, p: u64) -> usize {
    let layer = graded_basis(r, n, p);
    let params = layer.params();
    let rows: Vec<Vec<i64>> = layer
        .basis()
        .iter()
        .map(|b| {
            embed(params, &group_realization(b))
                .poly()
                .homogeneous_component(n)
                .iter()
                .map(|&c| c as i64)
                .collect()
        })
        .collect();
    let mut m = FpMatrix::from_rows(Fp::new(p), &rows);
    m.rref();
    m.rank()
}

#[test]
fn criterion_1_layer_dimension_formula() {
    criterion(
        1,
        "layer dimensions match the Witt-sum formula on both the Lie and group sides",
        120,
        || {
            for (r, p, n_top) in [(2usize, 2u64, 8usize), (2, 3, 6), (3, 2, 5)] {
                for n in 1..=n_top {
                    let expected = zassenhaus_dim(r as u64, n as u64, p).to_string();
                    let lie_dim = graded_basis(r, n, p).dim().to_string();
                    assert_eq!(lie_dim, expected, "Lie-side dim at r={r} p={p} n={n}");
                    let group_rank = realization_rank(r, n, p).to_string();
                    assert_eq!(group_rank, expected, "group-side rank at r={r} p={p} n={n}");
                }
            }
        },
    );
}

#[test]
fn criterion_2_growth_inequalities_stabilize() {
    criterion(
        2,
        "both growth inequalities hold from the reported thresholds through n = 40",
        120,
        || {
            for r in 2u64..=5 {
                for p in [2u64, 3] {
                    let scan = scan_growth_inequalities(r, p, 40);
                    assert_eq!(scan.rows.len(), 40);
                    let dim_threshold = scan
                        .dim_bound
                        .threshold
                        .unwrap_or_else(|| panic!("no dim-bound threshold at r={r} p={p}"));
                    let share_threshold = scan
                        .share_bound
                        .threshold
                        .unwrap_or_else(|| panic!("no share-bound threshold at r={r} p={p}"));
                    for row in &scan.rows {
                        if row.n >= dim_threshold {
                            assert!(row.dim_bound_holds, "dim bound at r={r} p={p} n={}", row.n);
                        }
                        if row.n >= share_threshold {
                            assert!(
                                row.share_bound_holds,
                                "share bound at r={r} p={p} n={}",
                                row.n
                            );
                        }
                    }
                    assert!(scan.dim_bound.exceptions.iter().all(|&n| n < dim_threshold));
                    assert!(scan
                        .share_bound
                        .exceptions
                        .iter()
                        .all(|&n| n < share_threshold));
                }
            }
        },
    );
}

#[test]
fn criterion_3_rigidity_of_endomorphisms() {
    criterion(
        3,
        "endomorphisms fixing generators modulo the second layer act trivially on all subquotients",
        300,
        || {
            let x1 = FreeWord::gen(0);
            let x2 = FreeWord::gen(1);
            let comm = x1.commutator(&x2);
            for p in [2u64, 3] {
                // (description, endomorphism, is an inner automorphism)
                let suite: Vec<(&str, Endomorphism, bool)> = vec![
                    ("inner by x1", Endomorphism::inner(2, &x1), true),
                    ("inner by x1*x2", Endomorphism::inner(2, &x1.mul(&x2)), true),
                    (
                        "x1 -> x1*[x1,x2]",
                        Endomorphism::new(vec![x1.mul(&comm), x2.clone()]),
                        false,
                    ),
                    (
                        "x2 -> x2*[x2,x1]",
                        Endomorphism::new(vec![x1.clone(), x2.mul(&comm.inverse())]),
                        false,
                    ),
                    (
                        "x1 -> x1*x2^p",
                        Endomorphism::new(vec![x1.mul(&x2.pow(p)), x2.clone()]),
                        false,
                    ),
                    ("identity", Endomorphism::identity(2), false),
                ];
                assert!(suite.len() >= 5);
                assert!(suite.iter().filter(|(_, _, inner)| *inner).count() >= 2);
                assert!(suite.iter().filter(|(_, _, inner)| !*inner).count() >= 2);
                for (name, phi, _) in &suite {
                    let report = check_rigidity(phi, p, 6, None);
                    match report.outcome {
                        RigidityOutcome::Checked { violations, .. } => {
                            assert_eq!(violations, 0, "{name} at p={p}");
                        }
                        _ => panic!("{name} at p={p} failed the precondition"),
                    }
                }
                let swap = Endomorphism::new(vec![x2.clone(), x1.clone()]);
                assert!(
                    matches!(
                        check_rigidity(&swap, p, 6, None).outcome,
                        RigidityOutcome::PreconditionFailed { .. }
                    ),
                    "the generator swap is not trivial modulo the second layer"
                );
            }
        },
    );
}

/// Every subspace of `F_p^d`, generated once each through its unique
/// reduced-row-echelon basis: choose pivot columns, then sweep the free
/// entries (row `i`, non-pivot columns right of pivot `i`).
fn all_subspaces(p: u64, d: usize) -> Vec<Subspace> {
    let field = Fp::new(p);
    let mut out = Vec::new();
    for mask in 0u32..(1 << d) {
        let pivots: Vec<usize> = (0..d).filter(|i| mask >> i & 1 == 1).collect();
        let mut free = Vec::new();
        for (i, &pc) in pivots.iter().enumerate() {
            for j in pc + 1..d {
                if !pivots.contains(&j) {
                    free.push((i, j));
                }
            }
        }
        let combos = (p as usize).pow(free.len() as u32);
        for code in 0..combos {
            let mut rows = vec![vec![0u64; d]; pivots.len()];
            for (i, &pc) in pivots.iter().enumerate() {
                rows[i][pc] = 1;
            }
            let mut c = code;
            for &(i, j) in &free {
                rows[i][j] = (c % p as usize) as u64;
                c /= p as usize;
            }
            out.push(Subspace::from_rows(field, d, &rows));
        }
    }
    out.sort();
    out.windows(2).for_each(|w| {
        assert!(w[0] != w[1], "echelon enumeration repeated a subspace");
    });
    out
}

/// Number of k-dimensional subspaces of `F_p^d`.
fn gaussian_binomial(d: usize, k: usize, p: u64) -> u128 {
    let mut value: u128 = 1;
    let q = p as u128;
    for i in 0..k {
        value *= q.pow((d - i) as u32) - 1;
        value /= q.pow((i + 1) as u32) - 1;
    }
    value
}

fn total_subspaces(d: usize, p: u64) -> u128 {
    (0..=d).map(|k| gaussian_binomial(d, k, p)).sum()
}

#[test]
fn criterion_4_submodule_enumeration_matches_brute_force() {
    criterion(
        4,
        "lattice-closure enumeration agrees with all-subspace filtering and Gaussian counts",
        120,
        || {
            let budget = LatticeBudget::default();
            let mut modules: Vec<(String, ModuleSpec)> = Vec::new();
            for n in 1..=3usize {
                let name = format!("layer {n} of rank 2 mod 2");
                modules.push((name, layer_module(&graded_basis(2, n, 2))));
            }
            for n in 1..=4usize {
                let name = format!("layer {n} of rank 2 mod 3");
                modules.push((name, layer_module(&graded_basis(2, n, 3))));
            }
            modules.push((
                "layer 1 of rank 3 mod 2".to_string(),
                layer_module(&graded_basis(3, 1, 2)),
            ));
            modules.push((
                "layer 1 of rank 5 mod 2".to_string(),
                layer_module(&graded_basis(5, 1, 2)),
            ));
            for p in [2u64, 3] {
                let field = Fp::new(p);
                for d in 1..=4usize {
                    modules.push((
                        format!("trivial action on {d} dims mod {p}"),
                        ModuleSpec::trivial(field, d),
                    ));
                }
                let jordan = |d: usize| {
                    let mut m = FpMatrix::identity(field, d);
                    for i in 0..d - 1 {
                        m.set(i, i + 1, 1);
                    }
                    m
                };
                for d in [3usize, 5] {
                    modules.push((
                        format!("unipotent Jordan block on {d} dims mod {p}"),
                        ModuleSpec::new(field, d, vec![jordan(d)]),
                    ));
                }
            }
            let f3 = Fp::new(3);
            modules.push((
                "split diagonal action mod 3".to_string(),
                ModuleSpec::new(
                    f3,
                    2,
                    vec![FpMatrix::from_rows(f3, &[vec![1, 0], vec![0, 2]])],
                ),
            ));

            for (name, spec) in &modules {
                assert!(spec.dim() <= 5, "{name} exceeds the brute-force range");
                let lattice = enumerate_submodules(spec, &budget).unwrap();
                assert!(lattice.exact, "{name} hit the budget");
                let brute: Vec<Subspace> = all_subspaces(spec.field().modulus(), spec.dim())
                    .into_iter()
                    .filter(|u| spec.is_invariant(u))
                    .collect();
                assert_eq!(lattice.subspaces, brute, "submodule mismatch for {name}");
            }

            // The degree-2 layer for two generators mod 2, checked against
            // all 16 subspaces of the ambient 3-dimensional space.
            assert_eq!(all_subspaces(2, 3).len(), 16);
            let l2 = enumerate_submodules(&layer_module(&graded_basis(2, 2, 2)), &budget).unwrap();
            assert_eq!(l2.count(), 4);

            // Trivial-action counts and k-fold powers follow the
            // Gaussian-binomial closed forms.
            for p in [2u64, 3] {
                let field = Fp::new(p);
                for d in 1..=4usize {
                    let spec = ModuleSpec::trivial(field, d);
                    let lattice = enumerate_submodules(&spec, &budget).unwrap();
                    assert_eq!(lattice.count() as u128, total_subspaces(d, p));
                }
                let point = ModuleSpec::trivial(field, 1);
                for k in 1..=4usize {
                    let (count, exact) = count_submodules_power(&point, k, &budget).unwrap();
                    assert!(exact);
                    assert_eq!(count as u128, total_subspaces(k, p));
                }
            }
        },
    );
}

/// The quaternion group of order 8 as pairs (negated, axis) with axes
/// 1, i, j, k; an independent oracle for the index-8 lifted subgroup.
fn q8_mul(a: (bool, u8), b: (bool, u8)) -> (bool, u8) {
    let (sign, axis) = match (a.1, b.1) {
        (0, v) => (false, v),
        (v, 0) => (false, v),
        (v, w) if v == w => (true, 0),
        (1, 2) => (false, 3),
        (2, 3) => (false, 1),
        (3, 1) => (false, 2),
        (2, 1) => (true, 3),
        (3, 2) => (true, 1),
        (1, 3) => (true, 2),
        _ => unreachable!(),
    };
    (a.0 ^ b.0 ^ sign, axis)
}

fn q8_eval(word: &FreeWord) -> (bool, u8) {
    let images = [(false, 1u8), (false, 2u8)];
    let mut acc = (false, 0u8);
    for letter in word.letters() {
        let mut g = images[letter.gen];
        if letter.inv && g.1 != 0 {
            g.0 = !g.0;
        }
        acc = q8_mul(acc, g);
    }
    acc
}

#[test]
fn criterion_5_characteristic_census() {
    criterion(
        5,
        "census rows are exact at depth 2, the index-8 subgroup is the quaternion kernel, \
         and cumulative growth bends upward",
        120,
        || {
            let budget = LatticeBudget::default();
            let census = characteristic_census(2, 2, 5, &budget).unwrap();
            let flat: Vec<(usize, usize, u64, usize, bool)> = census
                .rows
                .iter()
                .map(|r| (r.n, r.dim_u, r.index_exponent, r.count, r.exact))
                .collect();
            assert_eq!(&flat[..4], &[
                (1, 0, 2, 1, true),
                (2, 0, 5, 1, true),
                (2, 1, 4, 1, true),
                (2, 2, 3, 1, true),
            ]);

            // The unique invariant plane in the degree-2 layer lifts to the
            // kernel of the surjection onto the quaternion group sending
            // x1 to i and x2 to j: membership must agree with evaluating
            // words in the 8-element group itself.
            let layer = graded_basis(2, 2, 2);
            let lattice = enumerate_submodules(&layer_module(&layer), &budget).unwrap();
            let planes: Vec<&Subspace> =
                lattice.subspaces.iter().filter(|u| u.dim() == 2).collect();
            assert_eq!(planes.len(), 1);
            let plane = planes[0];

            let alphabet = [
                Letter { gen: 0, inv: false },
                Letter { gen: 0, inv: true },
                Letter { gen: 1, inv: false },
                Letter { gen: 1, inv: true },
            ];
            let mut words = vec![FreeWord::identity()];
            let mut frontier = vec![Vec::<Letter>::new()];
            for _ in 0..4 {
                let mut next = Vec::new();
                for prefix in &frontier {
                    for &l in &alphabet {
                        let mut seq = prefix.clone();
                        seq.push(l);
                        words.push(FreeWord::from_letters(seq.iter().copied()));
                        next.push(seq);
                    }
                }
                frontier = next;
            }
            for extra in [
                "x1^2*x1*x2*x1^-1*x2^-1",
                "x2^2*x1*x2*x1^-1*x2^-1",
                "x1^6",
                "x1*x2*x1*x2*x1*x2",
                "x1^2*x2^-2",
            ] {
                words.push(parse_free_word(extra, 2).unwrap());
            }
            let mut in_kernel = 0usize;
            for word in &words {
                let lifted = lift_contains(&layer, plane, word);
                let collapses = q8_eval(word) == (false, 0);
                assert_eq!(
                    lifted, collapses,
                    "membership mismatch for {word} against the quaternion kernel"
                );
                in_kernel += usize::from(lifted);
            }
            assert!(in_kernel > 5, "the word battery never touched the kernel");

            // Depth 5: cumulative counts are nondecreasing in the index
            // exponent and the quadratic fit of log-count against
            // log-index curves upward.
            let cumulative = census.cumulative_by_exponent();
            assert!(cumulative.windows(2).all(|w| w[0].1 <= w[1].1));
            assert!(cumulative.windows(2).all(|w| w[0].0 < w[1].0));
            let fit = census.growth_fit().expect("enough points to fit");
            assert!(
                fit.slope > 0.0,
                "expected positive curvature, got slope {}",
                fit.slope
            );
            assert!(census.all_exact());
        },
    );
}

#[test]
fn criterion_6_wreath_product_dichotomy_and_towers() {
    criterion(
        6,
        "normal subgroup counts, the exhaustive wreath dichotomy, its negative control, \
         and tower counts by two routes",
        120,
        || {
            let cap = 1_000_000;
            let a5 = enumerate_elements(&alternating_gens(5), cap).unwrap();
            assert_eq!(a5.order(), 60);
            assert_eq!(normal_subgroups(&a5).len(), 2);

            let a4 = enumerate_elements(&alternating_gens(4), cap).unwrap();
            assert_eq!(normal_subgroups(&a4).len(), 3);

            let c2 = enumerate_elements(&cyclic_gens(2), cap).unwrap();
            let w = enumerate_elements(&wreath_product(&a5, &c2), cap).unwrap();
            assert_eq!(w.order(), 7200);
            let normals = normal_subgroups(&w);
            assert_eq!(normals.len(), 3);

            let report = verify_wreath_dichotomy(&a5, &c2, cap).unwrap();
            assert!(report.hypothesis_failures.is_empty());
            // Exhaustive: one record per normal subgroup of the product.
            assert_eq!(report.normal_count(), normals.len());
            assert_eq!(report.violations(), 0);
            assert!(report.dichotomy_holds());

            let control = verify_wreath_dichotomy(&c2, &c2, cap).unwrap();
            assert_eq!(control.normal_count(), 6);
            assert!(control.violations() >= 1, "the control should misbehave");
            assert!(
                !control.hypothesis_failures.is_empty(),
                "the control should fail the hypotheses"
            );

            for powers in [
                vec![],
                vec![1u32],
                vec![2],
                vec![1, 1],
                vec![2, 1],
                vec![1, 2],
                vec![2, 2],
                vec![1, 1, 1],
                vec![1, 2, 3],
            ] {
                let spec = TowerSpec::alternating5(&powers);
                let formula = tower_normal_count(&spec);
                let structural = tower_normal_count_by_recursion(&spec, cap).unwrap();
                assert_eq!(formula, structural, "tower {powers:?}");
            }
        },
    );
}

#[test]
fn criterion_7_cli_outputs_are_deterministic() {
    criterion(
        7,
        "two runs of the full command suite with the same seed are byte-identical",
        120,
        || {
            let suite: Vec<Vec<&str>> = vec![
                vec!["witt", "--r", "3", "--p", "2", "--nmax", "9", "--seed", "123"],
                vec!["witt", "--nmax", "6", "--format", "json", "--seed", "123"],
                vec!["scan", "--r", "5", "--p", "3", "--nmax", "40", "--seed", "123"],
                vec!["scan", "--nmax", "15", "--format", "json", "--seed", "123"],
                vec![
                    "rigidity", "--image", "x2*x1*x2^-1", "--image", "x2", "--nmax", "5",
                    "--seed", "123",
                ],
                vec![
                    "rigidity", "--image", "x1*x1*x2*x1^-1*x2^-1", "--image", "x2", "--nmax",
                    "4", "--format", "json", "--seed", "123",
                ],
                vec!["census", "--nmax", "5", "--seed", "123"],
                vec!["census", "--p", "3", "--nmax", "3", "--format", "json", "--seed", "123"],
                vec!["wreath", "--instance", "a5", "--format", "json", "--seed", "123"],
                vec!["wreath", "--instance", "a4", "--seed", "123"],
                vec!["wreath", "--instance", "a5wrc2", "--seed", "123"],
                vec![
                    "wreath", "--instance", "d8-negative-control", "--format", "json",
                    "--seed", "123",
                ],
                vec!["wreath", "--instance", "tower:2,2", "--seed", "123"],
            ];
            for args in &suite {
                let first = common::zgrow(args);
                let second = common::zgrow(args);
                assert_eq!(first.code, second.code, "exit code drift for {args:?}");
                assert_eq!(first.stdout, second.stdout, "stdout drift for {args:?}");
                assert_eq!(first.stderr, second.stderr, "stderr drift for {args:?}");
                assert_eq!(first.code, 0, "suite command failed: {args:?}");
            }
        },
    );
}
