mod common;

use std::collections::HashSet;

use proptest::prelude::*;

use common::{idx, morphism_from_picks, naive_hom_count};
use fimreg::fim::{canonical_factorization, compose, enumerate_injections, hom_size, Morphism};

fn pair(m: usize, max: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>)> {
    (prop::collection::vec(0..=max, m), prop::collection::vec(0..=2usize, m))
        .prop_map(|(a, extra)| {
            let b = a.iter().zip(&extra).map(|(x, e)| x + e).collect();
            (a, b)
        })
}

fn picks(m: usize) -> impl Strategy<Value = Vec<Vec<usize>>> {
    prop::collection::vec(prop::collection::vec(0..64usize, 8), m)
}

fn chain(m: usize) -> impl Strategy<Value = (Vec<usize>, Vec<usize>, Vec<usize>, Vec<usize>)> {
    (prop::collection::vec(0..=2usize, m), prop::collection::vec((0..=1usize, 0..=1usize, 0..=1usize), m)).prop_map(
        |(a, steps)| {
            let b: Vec<usize> = a.iter().zip(&steps).map(|(x, s)| x + s.0).collect();
            let c: Vec<usize> = b.iter().zip(&steps).map(|(x, s)| x + s.1).collect();
            let d: Vec<usize> = c.iter().zip(&steps).map(|(x, s)| x + s.2).collect();
            (a, b, c, d)
        },
    )
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn enumeration_matches_hom_size((a, b) in (1..=3usize).prop_flat_map(|m| pair(m, 3))) {
        let (a, b) = (idx(&a), idx(&b));
        let all = enumerate_injections(&a, &b).unwrap();
        let size = hom_size(&a, &b).unwrap();
        prop_assert_eq!(all.len() as u128, size);
        prop_assert_eq!(size, naive_hom_count(a.coords(), b.coords()));
        let distinct: HashSet<&Morphism> = all.iter().collect();
        prop_assert_eq!(distinct.len(), all.len());
        prop_assert!(all.windows(2).all(|w| w[0].lex_rank() < w[1].lex_rank()));
    }

    #[test]
    fn factorization_replays_exactly(
        (a, b) in (1..=3usize).prop_flat_map(|m| pair(m, 3)),
        p in picks(3),
    ) {
        let f = morphism_from_picks(&a, &b, &p);
        prop_assert_eq!(canonical_factorization(&f).replay(), f);
    }

    #[test]
    fn composition_is_associative_with_units(
        (a, b, c, d) in (1..=3usize).prop_flat_map(chain),
        p1 in picks(3),
        p2 in picks(3),
        p3 in picks(3),
    ) {
        let f = morphism_from_picks(&a, &b, &p1);
        let g = morphism_from_picks(&b, &c, &p2);
        let h = morphism_from_picks(&c, &d, &p3);
        let left = compose(&h, &compose(&g, &f).unwrap()).unwrap();
        let right = compose(&compose(&h, &g).unwrap(), &f).unwrap();
        prop_assert_eq!(&left, &right);
        prop_assert_eq!(compose(&f, &Morphism::identity(&idx(&a))).unwrap(), f.clone());
        prop_assert_eq!(compose(&Morphism::identity(&idx(&b)), &f).unwrap(), f.clone());
        prop_assert!(compose(&f, &h).is_err() || idx(&d) == idx(&a));
    }

    #[test]
    fn order_is_a_partial_order(
        a in prop::collection::vec(0..=3usize, 2),
        b in prop::collection::vec(0..=3usize, 2),
        c in prop::collection::vec(0..=3usize, 2),
    ) {
        let (a, b, c) = (idx(&a), idx(&b), idx(&c));
        let le = |x: &_, y: &_| hom_size(x, y).unwrap() > 0;
        for (x, y) in [(&a, &b), (&b, &c), (&a, &c)] {
            prop_assert_eq!(le(x, y), x.le(y));
            prop_assert_eq!(x.le(y), x.coords().iter().zip(y.coords()).all(|(p, q)| p <= q));
        }
        prop_assert!(le(&a, &a));
        if le(&a, &b) && le(&b, &a) {
            prop_assert_eq!(&a, &b);
        }
        if le(&a, &b) && le(&b, &c) {
            prop_assert!(le(&a, &c));
        }
    }
}

#[test]
fn every_small_hom_set_replays() {
    for a in fimreg::fim::degrees_up_to(2, 3) {
        for b in fimreg::fim::degrees_up_to(2, 5) {
            if naive_hom_count(a.coords(), b.coords()) > 10_000 {
                continue;
            }
            let all = enumerate_injections(&a, &b).unwrap();
            assert_eq!(all.len() as u128, naive_hom_count(a.coords(), b.coords()), "{a} -> {b}");
            for f in &all {
                assert_eq!(&canonical_factorization(f).replay(), f);
            }
        }
    }
}
