use proptest::prelude::*;
use rand::SeedableRng;

use cryptarith::hints::HintCatalog;
use cryptarith::landscape::{assignment_at, permutation_index};
use cryptarith::puzzle::{Assignment, Letter, DONALD, GERALD, PAIRS, ROBERT, SENTINEL_COST};
use cryptarith::search::imitate;
use cryptarith::SimRng;

fn assignment() -> impl Strategy<Value = Assignment> {
    Just((0u8..10).collect::<Vec<_>>())
        .prop_shuffle()
        .prop_map(|d| Assignment::from_digits(&d).unwrap())
}

fn letter() -> impl Strategy<Value = Letter> {
    (0usize..10).prop_map(|i| Letter::from_index(i).unwrap())
}

/// Cost from the three word values, independent of the linear form.
fn word_cost(a: &Assignment) -> u64 {
    if [Letter::D, Letter::G, Letter::R]
        .iter()
        .any(|&l| a.digit(l) == 0)
    {
        return u64::from(SENTINEL_COST);
    }
    let sum = a.word_value(&DONALD) + a.word_value(&GERALD);
    sum.abs_diff(a.word_value(&ROBERT))
}

proptest! {
    #[test]
    fn swap_is_an_involution(a in assignment(), x in letter(), y in letter()) {
        prop_assume!(x != y);
        let b = a.apply_swap(x, y).unwrap();
        prop_assert_ne!(b, a);
        prop_assert_eq!(b.apply_swap(x, y).unwrap(), a);
        prop_assert_eq!(b.apply_swap(y, x).unwrap(), a);
        prop_assert_eq!(b.agreement(&a), 8);
    }

    #[test]
    fn moves_keep_a_bijection(a in assignment(), seed in any::<u64>()) {
        let mut rng = SimRng::seed_from_u64(seed);
        let mut b = a;
        for _ in 0..50 {
            b = b.random_elementary_move(&mut rng);
            prop_assert!(b.is_consistent());
            let mut digits = b.digits();
            digits.sort();
            prop_assert_eq!(digits, [0, 1, 2, 3, 4, 5, 6, 7, 8, 9]);
            for l in Letter::ALL {
                prop_assert_eq!(b.holder(b.digit(l)), l);
            }
        }
    }

    #[test]
    fn cost_matches_word_values(a in assignment()) {
        prop_assert_eq!(u64::from(a.cost()), word_cost(&a));
        prop_assert_eq!(a.cost() == 0, a == Assignment::solution());
    }

    #[test]
    fn neighbors_are_single_swaps(a in assignment()) {
        let ns = a.neighbors();
        prop_assert_eq!(ns.len(), 45);
        for (n, &(x, y)) in ns.iter().zip(PAIRS.iter()) {
            prop_assert_eq!(n.agreement(&a), 8);
            prop_assert_eq!(n.digit(x), a.digit(y));
        }
    }

    #[test]
    fn assimilation_exhibits_the_hint(a in assignment(), id in 0u16..351) {
        let cat = HintCatalog::shared();
        let h = cat.hint(cryptarith::HintId(id));
        let b = h.assimilate(&a);
        prop_assert!(b.is_consistent());
        prop_assert!(h.is_exhibited_by(&b));
        prop_assert!(cat.extract(&b).contains(cryptarith::HintId(id)));
        // letters outside the hint keep their digits unless displaced
        prop_assert!(b.agreement(&a) >= 10 - 2 * h.pairs().count());
    }

    #[test]
    fn imitation_gains_agreement(t in assignment(), m in assignment(), seed in any::<u64>()) {
        prop_assume!(t != m);
        let mut rng = SimRng::seed_from_u64(seed);
        let out = imitate(&t, &m, &mut rng).unwrap();
        prop_assert!(out.agreement(&m) > t.agreement(&m));
        prop_assert_eq!(out.agreement(&t), 8);
    }

    #[test]
    fn index_round_trips(a in assignment()) {
        prop_assert_eq!(assignment_at(permutation_index(&a)).unwrap(), a);
    }

    #[test]
    fn text_forms_round_trip(a in assignment()) {
        let shown = a.to_string();
        prop_assert_eq!(shown.parse::<Assignment>().unwrap(), a);
        let json = serde_json::to_string(&a).unwrap();
        prop_assert_eq!(serde_json::from_str::<Assignment>(&json).unwrap(), a);
    }
}
