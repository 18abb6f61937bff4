use num_bigint::BigUint;
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

use quosyn::goedel;
use quosyn::harness::gen;
use quosyn::lambda;
use quosyn::minilisp;
use quosyn::prop;
use quosyn::quasi::{positions, subexpr_at, Position};
use quosyn::ring;

fn rng(seed: u64) -> ChaCha8Rng {
    ChaCha8Rng::seed_from_u64(seed)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(256))]

    #[test]
    fn prop_print_parse(seed: u64, n in 1usize..30) {
        let f = gen::formula(&mut rng(seed), n);
        prop_assert_eq!(prop::parse(&prop::print(&f)).unwrap(), f);
    }

    #[test]
    fn goedel_code_and_text(seed: u64, n in 1usize..30, quotes: bool) {
        let e = gen::arith(&mut rng(seed), n, quotes);
        prop_assert_eq!(goedel::decode(&goedel::encode(&e)), Some(e.clone()));
        prop_assert_eq!(goedel::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn bijective_digits(n: u128) {
        let n = BigUint::from(n);
        prop_assert_eq!(goedel::from_digits(&goedel::to_digits(&n)), n);
    }

    #[test]
    fn lisp_print_read(seed: u64, n in 1usize..30) {
        let e = gen::lisp(&mut rng(seed), n);
        prop_assert_eq!(minilisp::read(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn lambda_print_parse(seed: u64, n in 1usize..30) {
        let t = gen::lambda_any(&mut rng(seed), n);
        let back = lambda::parse_term(&t.to_string()).unwrap();
        prop_assert!(lambda::alpha_eq(&back, &t), "{} reparsed as {}", t, back);
    }

    #[test]
    fn lambda_rep_decodes(seed: u64, n in 1usize..30) {
        let t = gen::lambda_any(&mut rng(seed), n);
        let r = lambda::rep(&t);
        prop_assert!(r.is_normal());
        let back = lambda::unrep(&r).unwrap();
        prop_assert!(lambda::alpha_eq(&back, &t));
    }

    #[test]
    fn ring_print_parse(seed: u64, n in 1usize..30) {
        let e = gen::ring(&mut rng(seed), n, 4, 5);
        prop_assert_eq!(ring::parse(&e.to_string()).unwrap(), e);
    }

    #[test]
    fn ring_normal_form_text(seed: u64, n in 1usize..30) {
        let e = gen::ring(&mut rng(seed), n, 4, 5);
        let nf = ring::normalize(&ring::pquote(&e));
        let reparsed = ring::parse(&nf.to_string()).unwrap();
        prop_assert_eq!(ring::normalize(&ring::pquote(&reparsed)), nf);
    }

    #[test]
    fn positions_print_parse(seed: u64, n in 1usize..30) {
        let f = gen::formula(&mut rng(seed), n);
        for p in positions(&f) {
            let back: Position = p.to_string().parse().unwrap();
            prop_assert_eq!(&back, &p);
            prop_assert!(subexpr_at(&f, &back).is_some());
        }
    }
}
