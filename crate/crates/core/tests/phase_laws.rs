//! Exhaustive law checks for the fact algebra: every enumerated structure
//! of size up to 3, plus the two worked models, over all subsets or all
//! fact tuples as each law demands. Everything here is an exact bitset
//! identity.

use qphase::model::{classical_model, enumerate_qstructures, ray_model};
use qphase::parse_vector;
use qphase::set::ElemSet;
use qphase::QStructure;

fn worked_models() -> Vec<QStructure> {
    let c1 = classical_model(&["p".to_string()]).unwrap();
    let rays: Vec<_> = ["1,0", "0,1", "1,1", "1,-1"]
        .iter()
        .map(|s| parse_vector(s).unwrap())
        .collect();
    let b1 = ray_model(&rays, 2).unwrap();
    vec![c1, b1]
}

fn test_pool() -> Vec<QStructure> {
    let mut pool = worked_models();
    for n in 1..=3 {
        pool.extend(enumerate_qstructures(n).unwrap());
    }
    pool
}

#[test]
fn closure_operator_laws_on_all_subsets() {
    for q in test_pool() {
        let n = q.size();
        for a in ElemSet::all_subsets(n) {
            // extensivity and triple-orth collapse
            assert!(a.is_subset_of(q.biorth(a)));
            assert_eq!(q.orth(a), q.orth(q.biorth(a)));
            // every orthogonal is a fact
            assert!(q.is_fact_set(q.orth(a)));
            for b in ElemSet::all_subsets(n) {
                if b.is_subset_of(a) {
                    assert!(q.orth(a).is_subset_of(q.orth(b)));
                }
                assert_eq!(q.orth(a.union(b)), q.orth(a).inter(q.orth(b)));
                // intersections of facts are facts
                if q.is_fact_set(a) && q.is_fact_set(b) {
                    assert!(q.is_fact_set(a.inter(b)));
                }
            }
        }
    }
}

#[test]
fn product_lemma_on_all_subset_pairs() {
    for q in test_pool() {
        for a in ElemSet::all_subsets(q.size()) {
            for b in ElemSet::all_subsets(q.size()) {
                assert!(q
                    .orth(q.dot_set(a, b))
                    .is_subset_of(q.orth(q.dot_set(q.biorth(a), b))));
            }
        }
    }
}

#[test]
fn unit_fact_laws() {
    for q in test_pool() {
        let one = q.one_fact().set();
        assert!(one.contains(q.unit()));
        for x in one.iter() {
            for y in one.iter() {
                assert!(one.contains(q.dot(x, y)));
            }
        }
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            assert_eq!(q.tensor_set(one, f), f);
            assert!(f.is_subset_of(q.tensor_set(f, one)));
            assert_eq!(q.with_set(q.zero_fact().set(), f), q.zero_fact().set());
            assert!(q.zero_fact().set().is_subset_of(f));
        }
    }
}

#[test]
fn associativity_normal_form_of_tensor() {
    for q in test_pool() {
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            for &g in &facts {
                for &h in &facts {
                    assert_eq!(
                        q.tensor_set(q.tensor_set(f, g), h),
                        q.biorth(q.dot_set(q.dot_set(f, g), h))
                    );
                }
            }
        }
    }
}

#[test]
fn dualities() {
    for q in test_pool() {
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            assert_eq!(q.biorth(q.neg_set(q.neg_set(f))), f);
            assert_eq!(q.neg_set(q.neg_set(f)), f);
            for &g in &facts {
                let (nf, ng) = (q.neg_set(f), q.neg_set(g));
                assert_eq!(q.par_set(f, g), q.neg_set(q.tensor_set(nf, ng)));
                assert_eq!(q.tensor_set(f, g), q.neg_set(q.par_set(nf, ng)));
                assert_eq!(q.limp_set(f, g), q.par_set(nf, g));
                assert_eq!(q.limp_set(f, g), q.neg_set(q.tensor_set(f, ng)));
                assert_eq!(q.plus_set(f, g), q.neg_set(q.with_set(nf, ng)));
                assert_eq!(q.with_set(f, g), q.neg_set(q.plus_set(nf, ng)));
            }
        }
    }
}

#[test]
fn implication_validity_and_pointwise_form() {
    for q in test_pool() {
        let u = q.unit();
        let one = q.one_fact().set();
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            for &g in &facts {
                let li = q.limp_set(f, g);
                // valid exactly when the antecedent is included in the consequent
                assert_eq!(li.contains(u), f.is_subset_of(g));
                // pointwise membership
                for x in 0..q.size() {
                    let pointwise = q.orth(g).iter().all(|h| q.orth(f).contains(q.dot(x, h)));
                    assert_eq!(li.contains(x), pointwise);
                }
                // the unit-in-par equivalence chain
                let a = q.par_set(f, g).contains(u);
                assert_eq!(a, q.orth(g).is_subset_of(f));
                assert_eq!(a, q.orth(f).is_subset_of(g));
                assert_eq!(a, q.par_set(g, f).contains(u));
                assert_eq!(a, one.is_subset_of(q.par_set(f, g)));
            }
        }
    }
}

#[test]
fn passing_the_turnstile() {
    for q in test_pool() {
        let u = q.unit();
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            for &g in &facts {
                for &h in &facts {
                    let lhs = q.limp_set(q.tensor_set(f, g), h).contains(u);
                    let rhs = q.limp_set(f, q.par_set(h, q.neg_set(g))).contains(u);
                    assert_eq!(lhs, rhs);
                }
            }
        }
    }
}

#[test]
fn additive_structure() {
    for q in test_pool() {
        let top = q.carrier();
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            assert_eq!(q.with_set(top, f), f);
            assert_eq!(q.plus_set(top, f), top);
            for &g in &facts {
                assert_eq!(q.with_set(f, g), q.with_set(g, f));
                assert_eq!(q.plus_set(f, g), q.plus_set(g, f));
                for &h in &facts {
                    assert_eq!(
                        q.with_set(q.with_set(f, g), h),
                        q.with_set(f, q.with_set(g, h))
                    );
                    assert_eq!(
                        q.plus_set(q.plus_set(f, g), h),
                        q.plus_set(f, q.plus_set(g, h))
                    );
                }
            }
        }
    }
}

/// Par distributes over with in its left argument, and times over plus in
/// its left argument; in the right argument only one inclusion survives
/// (see `right_argument_distribution_fails` for the counterexamples).
#[test]
fn left_argument_distribution_and_semi_distribution() {
    for q in test_pool() {
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            for &g in &facts {
                for &h in &facts {
                    let with_gh = q.with_set(g, h);
                    let plus_gh = q.plus_set(g, h);
                    assert_eq!(
                        q.par_set(with_gh, f),
                        q.with_set(q.par_set(g, f), q.par_set(h, f))
                    );
                    assert_eq!(
                        q.tensor_set(plus_gh, f),
                        q.plus_set(q.tensor_set(g, f), q.tensor_set(h, f))
                    );
                    // right-argument halves
                    assert!(q
                        .par_set(f, with_gh)
                        .is_subset_of(q.with_set(q.par_set(f, g), q.par_set(f, h))));
                    assert!(q
                        .plus_set(q.tensor_set(f, g), q.tensor_set(f, h))
                        .is_subset_of(q.tensor_set(f, plus_gh)));
                    // times semi-distributes over with, both arguments
                    assert!(q
                        .tensor_set(f, with_gh)
                        .is_subset_of(q.with_set(q.tensor_set(f, g), q.tensor_set(f, h))));
                    assert!(q
                        .tensor_set(with_gh, f)
                        .is_subset_of(q.with_set(q.tensor_set(g, f), q.tensor_set(h, f))));
                    // par semi-distributes over plus in the right argument
                    assert!(q
                        .plus_set(q.par_set(f, g), q.par_set(f, h))
                        .is_subset_of(q.par_set(f, plus_gh)));
                }
            }
        }
    }
}

/// The full right-argument distribution equalities are not laws of this
/// algebra; two pinned counterexamples mark the boundary.
#[test]
fn right_argument_distribution_fails() {
    // minimal countermodel on three elements
    let q = QStructure::new(
        vec![vec![0, 1, 2], vec![1, 0, 0], vec![2, 2, 1]],
        0,
        [1],
        None,
    )
    .unwrap();
    assert!(q.validate().is_valid());
    let f = ElemSet::singleton(0);
    let g = ElemSet::singleton(0);
    let h = ElemSet::singleton(2);
    for s in [f, g, h] {
        assert!(q.is_fact_set(s));
    }
    let lhs = q.par_set(f, q.with_set(g, h));
    let rhs = q.with_set(q.par_set(f, g), q.par_set(f, h));
    assert_eq!(lhs, ElemSet::EMPTY);
    assert_eq!(rhs, ElemSet::singleton(1));
    assert_ne!(lhs, rhs);

    // and inside the ray model itself
    let rays: Vec<_> = ["1,0", "0,1", "1,1", "1,-1"]
        .iter()
        .map(|s| parse_vector(s).unwrap())
        .collect();
    let b1 = ray_model(&rays, 2).unwrap();
    let (r0, r1, zero) = (1, 2, 5);
    let f = ElemSet::from_indices([zero, r0]);
    let g = f;
    let h = ElemSet::from_indices([zero, r1]);
    let lhs = b1.par_set(f, b1.with_set(g, h));
    let rhs = b1.with_set(b1.par_set(f, g), b1.par_set(f, h));
    assert_eq!(lhs, ElemSet::singleton(zero));
    assert_eq!(rhs, f);
    assert_ne!(lhs, rhs);
}

/// Laws that follow from garbage absorption alone, exhaustively over every
/// projective structure in the pool. The stronger equalities the idempotent
/// reading suggests need more than absorption; see
/// `idempotence_laws_fail_on_degenerate_projective_structures`.
#[test]
fn projective_structure_laws() {
    let mut pool: Vec<QStructure> = worked_models();
    for n in 1..=3 {
        pool.extend(enumerate_qstructures(n).unwrap().filter(|q| q.is_projective()));
    }
    for q in pool {
        assert!(q.is_projective());
        let n = q.size();
        for x in 0..n {
            for y in 0..n {
                // self-composition preserves orthogonality
                if q.orthogonal(x, y) {
                    assert!(q.orthogonal(q.dot(x, x), y));
                }
                for z in 0..n {
                    if q.orthogonal(x, z) && q.orthogonal(y, z) {
                        assert!(q.orthogonal(q.dot(x, y), z));
                    }
                }
            }
        }
        for a in ElemSet::all_subsets(n) {
            let oa = q.orth(a);
            assert!(q.dot_set(oa, oa).is_subset_of(oa));
            for b in ElemSet::all_subsets(n) {
                assert!(q.orth(a).is_subset_of(q.orth(q.dot_set(b, a))));
                assert!(a.is_subset_of(q.orth(q.dot_set(b, q.orth(a)))));
            }
        }
        assert_eq!(q.one_fact().set(), q.carrier());
        assert_eq!(q.z_fact().set(), q.zero_fact().set());
        let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
        for &f in &facts {
            assert!(q.dot_set(f, f).is_subset_of(f));
            assert!(q.tensor_set(f, f).is_subset_of(f));
            assert!(f.is_subset_of(q.par_set(f, f)));
            assert!(q.z_fact().set().is_subset_of(f));
            for a in ElemSet::all_subsets(n) {
                assert!(q.dot_set(a, f).is_subset_of(f));
            }
            for &g in &facts {
                assert!(q.tensor_set(g, f).is_subset_of(f));
                assert!(f.is_subset_of(q.par_set(g, f)));
                // right weakening
                if f.contains(q.unit()) {
                    assert!(q.par_set(f, g).contains(q.unit()));
                }
            }
        }
    }
}

/// Absorption does not force composition to be idempotent: a projective
/// structure may contain an element that is orthogonal to itself without
/// being garbage, and on such structures the idempotence-flavored laws
/// (orthogonality transfer back from `x.x`, `A` inside the closure of
/// `A.A`, `F⊗F = F`, `F⅋F = F`, contraction) all break. Pinned witness.
#[test]
fn idempotence_laws_fail_on_degenerate_projective_structures() {
    let q = QStructure::new(
        vec![vec![0, 1, 2], vec![1, 1, 1], vec![2, 1, 1]],
        0,
        [1],
        None,
    )
    .unwrap();
    assert!(q.validate().is_valid());
    assert!(q.is_projective());
    // element 2 is self-orthogonal but not garbage
    assert!(!q.in_garbage(2));
    assert!(q.in_garbage(q.dot(2, 2)));

    // orthogonality does not transfer back from the self-composite
    assert!(q.orthogonal(q.dot(2, 2), 0));
    assert!(!q.orthogonal(2, 0));

    // {2} escapes the closure of its own composite
    let a = ElemSet::singleton(2);
    assert!(!a.is_subset_of(q.biorth(q.dot_set(a, a))));

    // the fact {1,2} is not tensor- or par-idempotent
    let f = ElemSet::from_indices([1, 2]);
    assert!(q.is_fact_set(f));
    assert_eq!(q.tensor_set(f, f), ElemSet::singleton(1));
    assert_ne!(q.tensor_set(f, f), f);
    assert_eq!(q.par_set(f, f), q.carrier());
    assert_ne!(q.par_set(f, f), f);

    // contraction fails: ({1} par {1,2}) par {1,2} = carrier, not {1,2}
    let g = ElemSet::singleton(1);
    assert!(q.is_fact_set(g));
    let gf = q.par_set(g, f);
    assert_eq!(gf, f);
    assert_eq!(q.par_set(gf, f), q.carrier());
    assert!(!q.par_set(gf, f).is_subset_of(gf));
}

/// Right weakening genuinely needs projectivity: a two-element
/// counterexample where a valid fact pars with the least fact into an
/// invalid one.
#[test]
fn right_weakening_fails_without_projectivity() {
    // unit composes as the two-element group; garbage is the unit itself
    let q = QStructure::new(vec![vec![0, 1], vec![1, 0]], 0, [0], None).unwrap();
    assert!(q.validate().is_valid());
    assert!(!q.is_projective());
    let f = ElemSet::singleton(0);
    assert!(q.is_fact_set(f));
    assert!(f.contains(q.unit()));
    let g = q.zero_fact().set();
    assert!(!q.par_set(f, g).contains(q.unit()));
}
