use std::sync::Arc;

use proptest::prelude::*;
use rand::rngs::StdRng;
use rand::SeedableRng;

use vcat::coalgebra::{base_c, base_d, beh_metric_words};
use vcat::extension::{lan_extend, Discrete};
use vcat::generate::{labels, random_machine, random_space};
use vcat::{Preorder, Quantale, Relation};

fn quantales() -> Vec<Arc<Quantale>> {
    vec![
        Arc::new(Quantale::boolean()),
        Arc::new(Quantale::chain(3, 1).unwrap()),
        Arc::new(Quantale::chain(4, 2).unwrap()),
        Arc::new(Quantale::lawvere()),
        Arc::new(Quantale::ultrametric()),
    ]
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_spaces_satisfy_the_laws(seed in any::<u64>(), which in 0usize..5, n in 0usize..6) {
        let q = &quantales()[which];
        let x = random_space(q, n, &mut StdRng::seed_from_u64(seed));
        prop_assert!(x.validate().all_pass());
    }

    #[test]
    fn discrete_extension_is_identity(seed in any::<u64>(), which in 0usize..5, n in 0usize..5) {
        let q = quantales()[which].clone();
        let x = random_space(&q, n, &mut StdRng::seed_from_u64(seed));
        let ext = lan_extend(&Discrete::identity(q), &x).unwrap();
        prop_assert!(ext.same_as(&x));
    }

    #[test]
    fn word_metric_descends_with_depth(seed in any::<u64>(), states in 1usize..6, inputs in 1usize..3) {
        let q = Arc::new(Quantale::lawvere());
        let mut rng = StdRng::seed_from_u64(seed);
        let output = random_space(&q, 3, &mut rng);
        let m = random_machine(states, inputs, output, &mut rng);
        let mut previous = beh_metric_words(&m, 0);
        for depth in 1..6 {
            let next = beh_metric_words(&m, depth);
            for (row_next, row_prev) in next.iter().zip(&previous) {
                for (&a, &b) in row_next.iter().zip(row_prev) {
                    prop_assert!(q.le(a, b));
                }
            }
            previous = next;
        }
    }

    #[test]
    fn preorders_survive_a_trip_through_spaces(n in 0usize..6, pairs in proptest::collection::vec((0usize..6, 0usize..6), 0..12)) {
        let pairs: Vec<(usize, usize)> = pairs.into_iter().filter(|&(a, b)| a < n && b < n).collect();
        let p = Preorder::new(labels(n), Relation::from_pairs(n, n, pairs).preorder_closure()).unwrap();
        for q in [Quantale::boolean(), Quantale::lawvere(), Quantale::chain(3, 2).unwrap()] {
            let back = base_c(&base_d(Arc::new(q), &p)).unwrap();
            prop_assert_eq!(&back, &p);
        }
    }

    #[test]
    fn multiplication_respects_the_unit(which in 0usize..5, seed in any::<u64>()) {
        let q = &quantales()[which];
        let mut rng = StdRng::seed_from_u64(seed);
        let r = vcat::generate::random_elem(q, &mut rng);
        prop_assert!(q.equal(q.mul(r, q.unit()), r));
        prop_assert!(q.equal(q.mul(q.unit(), r), r));
    }
}
