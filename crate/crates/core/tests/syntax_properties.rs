//! Property tests over random formulas, sequents, models and assignments.

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use qphase::model::{classical_model, enumerate_qstructures, ray_model};
use qphase::parse_vector;
use qphase::syntax::{fold_pars, parse_formula, right_normalize, Assignment, Formula, Sequent};
use qphase::QStructure;

fn arb_formula() -> impl Strategy<Value = Formula> {
    let leaf = prop_oneof![
        4 => prop::sample::select(vec!["a", "b", "c", "d"]).prop_map(Formula::atom),
        1 => Just(Formula::One),
        1 => Just(Formula::Top),
    ];
    leaf.prop_recursive(6, 48, 2, |inner| {
        prop_oneof![
            inner.clone().prop_map(Formula::neg),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::tensor(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::par(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::with(l, r)),
            (inner.clone(), inner.clone()).prop_map(|(l, r)| Formula::plus(l, r)),
        ]
    })
}

fn model_pool() -> Vec<QStructure> {
    let mut pool = vec![classical_model(&["p".to_string()]).unwrap()];
    let rays: Vec<_> = ["1,0", "0,1", "1,1", "1,-1"]
        .iter()
        .map(|s| parse_vector(s).unwrap())
        .collect();
    pool.push(ray_model(&rays, 2).unwrap());
    pool.extend(enumerate_qstructures(3).unwrap().step_by(19));
    pool
}

fn assignment_for<'q>(q: &'q QStructure, seed: u64) -> Assignment<'q> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let facts: Vec<_> = q.all_facts().iter().map(|f| f.set()).collect();
    let mut asg = Assignment::new(q);
    for atom in ["a", "b", "c", "d"] {
        asg.bind(atom, facts[rng.gen_range(0..facts.len())])
            .expect("all_facts yields facts");
    }
    asg
}

proptest! {
    #[test]
    fn printing_then_parsing_is_the_identity(f in arb_formula()) {
        let printed = f.to_string();
        prop_assert_eq!(parse_formula(&printed).unwrap(), f);
    }

    #[test]
    fn nnf_does_not_change_the_denotation(
        f in arb_formula(),
        model_idx in 0usize..16,
        seed in 0u64..1_000_000,
    ) {
        let pool = model_pool();
        let q = &pool[model_idx % pool.len()];
        let asg = assignment_for(q, seed);
        let direct = asg.eval_set(&f).unwrap();
        let via_nnf = asg.eval_set(&f.nnf()).unwrap();
        prop_assert_eq!(direct, via_nnf);
        // and the normal form really is normal: negations only on leaves
        fn nnf_shaped(f: &Formula) -> bool {
            match f {
                Formula::Atom(_) | Formula::One | Formula::Top => true,
                Formula::Neg(inner) => {
                    matches!(**inner, Formula::Atom(_) | Formula::One | Formula::Top)
                }
                Formula::Tensor(l, r)
                | Formula::Par(l, r)
                | Formula::With(l, r)
                | Formula::Plus(l, r) => nnf_shaped(l) && nnf_shaped(r),
            }
        }
        prop_assert!(nnf_shaped(&f.nnf()));
    }

    #[test]
    fn right_normalization_preserves_validity(
        ants in prop::collection::vec(arb_formula(), 0..3),
        succs in prop::collection::vec(arb_formula(), 0..3),
        model_idx in 0usize..16,
        seed in 0u64..1_000_000,
    ) {
        prop_assume!(!(ants.is_empty() && succs.is_empty()));
        let s = Sequent::new(ants, succs).unwrap();
        let normalized = right_normalize(&s);
        prop_assert!(normalized.is_right_sided());
        let pool = model_pool();
        let q = &pool[model_idx % pool.len()];
        let asg = assignment_for(q, seed);
        prop_assert_eq!(
            qphase::syntax::sequent_valid(&asg, &s).unwrap(),
            qphase::syntax::sequent_valid(&asg, &normalized).unwrap()
        );
    }

    #[test]
    fn folding_the_first_two_formulas_is_semantically_free(
        a in arb_formula(),
        b in arb_formula(),
        trailing in prop::collection::vec(arb_formula(), 0..3),
        model_idx in 0usize..16,
        seed in 0u64..1_000_000,
    ) {
        // the par rule rewrites ⊢ A, B, σ into ⊢ A|B, σ; under the comma
        // reading both denote the same fact
        let mut premise = vec![a.clone(), b.clone()];
        premise.extend(trailing.iter().cloned());
        let mut conclusion = vec![Formula::par(a, b)];
        conclusion.extend(trailing);
        let pool = model_pool();
        let q = &pool[model_idx % pool.len()];
        let asg = assignment_for(q, seed);
        let p = asg.eval_set(&fold_pars(&premise).unwrap()).unwrap();
        let c = asg.eval_set(&fold_pars(&conclusion).unwrap()).unwrap();
        prop_assert_eq!(p, c);
    }
}
