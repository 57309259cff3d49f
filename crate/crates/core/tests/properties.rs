use num_traits::{One, Signed, Zero};
use proptest::prelude::*;

use nowhere_core::cells::{cell, locate};
use nowhere_core::rat::{int, pow2, ratio};
use nowhere_core::{
    antiderivative, antiderivative_term, enclose_integral, eval_f, eval_g, f1, fk, orbit, partial_sum,
    Address, Rat,
};

/// Rationals in `[-1, 1]` with modest denominators.
fn unit_rat() -> impl Strategy<Value = Rat> {
    (1i64..5000).prop_flat_map(|q| (-q..=q).prop_map(move |p| ratio(p, q)))
}

fn address(max_level: usize, budget: i64) -> impl Strategy<Value = Address> {
    prop::collection::vec(-budget..=budget, 1..=max_level).prop_map(|ids| Address::from_indices(&ids).unwrap())
}

proptest! {
    #[test]
    fn f1_maps_into_unit_interval_and_is_odd(x in unit_rat()) {
        let y = f1(&x).unwrap();
        prop_assert!(y.abs() <= Rat::one());
        prop_assert_eq!(f1(&-x.clone()).unwrap(), -y);
    }

    #[test]
    fn iterates_compose(x in unit_rat(), a in 0usize..5, b in 0usize..5) {
        prop_assert_eq!(fk(&fk(&x, a).unwrap(), b).unwrap(), fk(&x, a + b).unwrap());
    }

    #[test]
    fn absorbed_orbits_stay_at_zero(x in unit_rat()) {
        let o = orbit(&x, 60).unwrap();
        if let Some(m) = o.absorbed_step {
            for extra in 1..4 {
                prop_assert!(fk(&x, m + extra).unwrap().is_zero());
            }
        }
    }

    #[test]
    fn enclosures_nest_and_contain_partial_sums(x in unit_rat(), terms in 2usize..25) {
        let wide = eval_f(&x, terms).unwrap();
        let narrow = eval_f(&x, terms + 5).unwrap();
        prop_assert!(wide.contains(&narrow.center));
        prop_assert!(wide.contains(&partial_sum(&x, terms).unwrap()));
        prop_assert!(narrow.radius <= wide.radius);
    }

    #[test]
    fn g_is_even(x in unit_rat()) {
        prop_assert_eq!(eval_g(&x, 20).unwrap(), eval_g(&-x.clone(), 20).unwrap());
    }

    #[test]
    fn cells_are_affine_pieces(addr in address(4, 30), t in 1i64..100) {
        let c = cell(&addr);
        let x = &c.lo + c.len() * ratio(t, 101);
        prop_assert_eq!(fk(&x, c.level()).unwrap(), c.map().apply(&x));
        prop_assert_eq!(locate(&x, c.level()).unwrap(), vec![addr.clone()]);
        prop_assert!(c.len() <= pow2(1 - c.level() as i64));
    }

    #[test]
    fn antiderivative_matches_enclosure(x in unit_rat(), k in 1usize..5) {
        let e = enclose_integral(k, &x, 4000).unwrap();
        prop_assert!(e.contains(&antiderivative_term(&x, k).unwrap()));
    }

    #[test]
    fn antiderivative_is_even_and_vanishes_at_ends(x in unit_rat(), k in 1usize..8) {
        // f_k odd makes F_k even
        prop_assert_eq!(antiderivative_term(&x, k).unwrap(), antiderivative_term(&-x.clone(), k).unwrap());
        prop_assert!(antiderivative_term(&int(1), k).unwrap().is_zero());
        prop_assert!(antiderivative(&x, 12).unwrap().radius == pow2(-11));
    }
}
