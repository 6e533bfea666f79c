mod common;

use proptest::prelude::*;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use common::{idx, instance, morphism_from_picks, window};
use fimreg::fim::{compose, degrees_up_to, MultiIndex};
use fimreg::homology::h0;
use fimreg::linalg::{Field, PrimeField, Rationals};
use fimreg::module::{
    free_module, from_presentation, validate, InputFile, ModuleFile, Presentation, PresentationFile,
};

fn random_chain(rng: &mut ChaCha8Rng, m: usize, top: usize) -> (MultiIndex, MultiIndex, MultiIndex) {
    loop {
        let a: Vec<usize> = (0..m).map(|_| rng.gen_range(0..=2)).collect();
        let b: Vec<usize> = a.iter().map(|x| x + rng.gen_range(0..=1)).collect();
        let c: Vec<usize> = b.iter().map(|x| x + rng.gen_range(0..=1)).collect();
        if c.iter().sum::<usize>() <= top {
            return (idx(&a), idx(&b), idx(&c));
        }
    }
}

fn check_act_composition<F: Field>(f: &F, seed: u64) {
    let (v, _) = instance(f, 2, 1, 2, 4, seed);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for _ in 0..100 {
        let (a, b, c) = random_chain(&mut rng, 2, 4);
        let picks = |rng: &mut ChaCha8Rng| (0..2).map(|_| (0..4).map(|_| rng.gen_range(0..8)).collect()).collect::<Vec<Vec<usize>>>();
        let g1 = morphism_from_picks(a.coords(), b.coords(), &picks(&mut rng));
        let g2 = morphism_from_picks(b.coords(), c.coords(), &picks(&mut rng));
        let whole = v.act(&compose(&g2, &g1).unwrap()).unwrap();
        let steps = v.act(&g2).unwrap().mul(&v.act(&g1).unwrap()).unwrap();
        assert_eq!(whole, steps, "seed {seed}: {a} -> {b} -> {c}");
    }
}

#[test]
fn act_respects_composition() {
    for seed in 0..4 {
        check_act_composition(&PrimeField::new(101).unwrap(), seed);
    }
    check_act_composition(&PrimeField::new(2).unwrap(), 9);
    check_act_composition(&Rationals, 5);
}

#[test]
fn h0_of_principal_projectives() {
    let f = PrimeField::new(101).unwrap();
    for m in 1..=2 {
        for w in degrees_up_to(m, 3) {
            let v = free_module(&f, &w, window(m, 5)).unwrap();
            assert!(validate(&v).is_empty());
            let h = h0(&v).unwrap();
            let fact: usize = w.coords().iter().map(|&x| (1..=x).product::<usize>()).product();
            for n in v.window().degrees() {
                let expected = if *n == w { fact } else { 0 };
                assert_eq!(h.dim(n), expected, "H0(M({w}))_{n}");
                assert!(h.dim(n) <= v.dim(n));
            }
        }
    }
}

fn reordered<F: Field>(p: &Presentation<F>, order: &[usize]) -> Presentation<F> {
    let mut q = p.clone();
    q.relations = order.iter().map(|&k| p.relations[k].clone()).collect();
    q
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(40))]

    #[test]
    fn relation_order_does_not_change_dims(seed in 0..1000u64, m in 1..=2usize, rot in 0..4usize) {
        let f = PrimeField::new(101).unwrap();
        let pres = fimreg::module::random_presentation(&f, m, 1, 2, 3, 4, seed).unwrap();
        let mut order: Vec<usize> = (0..pres.relations.len()).collect();
        let k = rot % order.len().max(1);
        order.rotate_left(k);
        order.reverse();
        let (a, _) = from_presentation(&pres, window(m, 4), &f).unwrap();
        let (b, _) = from_presentation(&reordered(&pres, &order), window(m, 4), &f).unwrap();
        prop_assert_eq!(a.dims(), b.dims());
    }

    #[test]
    fn h0_is_a_quotient_of_v(seed in 0..1000u64, m in 1..=2usize) {
        let f = PrimeField::new(3).unwrap();
        let (v, _) = instance(&f, m, 1, 2, 4, seed);
        prop_assert!(validate(&v).is_empty());
        let h = h0(&v).unwrap();
        for (n, d) in v.dims() {
            prop_assert!(h.dim(&n) <= d);
        }
    }

    #[test]
    fn files_round_trip_byte_stably(seed in 0..1000u64, m in 1..=2usize) {
        let f = Rationals;
        let (v, pres) = instance(&f, m, 1, 1, 3, seed);
        let text = PresentationFile::new(&pres, 3, &f).to_json();
        let back = PresentationFile::from_json(&text).unwrap();
        prop_assert_eq!(back.to_json(), text.clone());
        prop_assert_eq!(back.presentation(&f).unwrap(), pres);
        let mtext = ModuleFile::new(&v).to_json();
        match InputFile::from_json(&mtext).unwrap() {
            InputFile::Module(file) => {
                let w = file.module(&f).unwrap();
                prop_assert_eq!(ModuleFile::new(&w).to_json(), mtext);
            }
            InputFile::Presentation(_) => prop_assert!(false, "module file read as presentation"),
        }
        prop_assert!(matches!(InputFile::from_json(&text).unwrap(), InputFile::Presentation(_)));
    }
}
