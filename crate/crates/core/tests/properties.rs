mod common;

use std::sync::Arc;

use common::*;
use gshift::gfun::{certify_property_g, verify_sum_one};
use gshift::{canonicalize, metric, Alphabet, Certification, Dyadic, GFunction, Point, Subshift, SubshiftSpec, Symbol, WeightSeq, WitnessTable, Word};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn point(size: u32) -> impl Strategy<Value = Point> {
    (
        prop::collection::vec(0..size, 1..4),
        prop::collection::vec(0..size, 0..7),
    )
        .prop_map(|(p, t)| Point::from_indices(&p, &t).unwrap())
}

fn sft() -> impl Strategy<Value = (SubshiftSpec, Subshift)> {
    (2u32..=3)
        .prop_flat_map(|size| {
            (
                Just(size),
                prop::collection::vec(prop::collection::vec(0..size, 1..=3), 1..=4),
            )
        })
        .prop_filter_map("empty shift", |(size, words)| {
            let forbidden: Vec<Word> = words.iter().map(|w| Word::from_indices(w).unwrap()).collect();
            let spec = SubshiftSpec::FiniteForbidden {
                size: size as usize,
                forbidden,
            };
            Subshift::new(spec.clone()).ok().map(|k| (spec, k))
        })
}

proptest! {
    #![proptest_config(ProptestConfig {
        cases: 128,
        failure_persistence: None,
        ..ProptestConfig::default()
    })]

    #[test]
    fn metric_is_a_symmetric_ultrametric(x in point(3), y in point(3), z in point(3)) {
        prop_assert_eq!(metric(&x, &y), metric(&y, &x));
        prop_assert_eq!(metric(&x, &x), Dyadic::ZERO);
        let far = metric(&x, &y).max(metric(&y, &z));
        prop_assert!(metric(&x, &z) <= far);
    }

    #[test]
    fn metric_ball_is_a_suffix_cylinder(x in point(2), y in point(2), n in 1usize..10) {
        let close = metric(&x, &y) <= Dyadic::pow2_neg(n as u32);
        prop_assert_eq!(close, x.suffix(n) == y.suffix(n));
    }

    #[test]
    fn append_shift_and_replace(x in point(3), a in 0u32..3, b in 0u32..3) {
        let xa = x.append(Symbol(a));
        prop_assert_eq!(xa.shift(), x.clone());
        prop_assert_eq!(xa.last(), Symbol(a));
        prop_assert_eq!(xa.replace_last(Symbol(b)), x.append(Symbol(b)));
    }

    #[test]
    fn canonicalize_is_idempotent_and_keeps_symbols(x in point(3)) {
        let c = canonicalize(&x);
        prop_assert_eq!(canonicalize(&c), c.clone());
        for j in 0..20 {
            prop_assert_eq!(c.at(j), x.at(j));
        }
        let shown: Point = x.to_string().parse().unwrap();
        prop_assert_eq!(shown, x);
    }

    #[test]
    fn suffix_language_is_factorial_and_extendable((_, k) in sft(), n in 1usize..6) {
        let short = k.suffix_language(n);
        let long = k.suffix_language(n + 1);
        for w in &long {
            prop_assert!(short.contains(&w.suffix(n).unwrap()));
        }
        for w in &short {
            prop_assert!(long.iter().any(|v| v.suffix(n).as_ref() == Some(w)));
        }
    }

    #[test]
    fn points_of_k_have_suffixes_in_the_language((_, k) in sft(), seed in any::<u64>()) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let x = k.random_point_in(&mut rng, 5);
        prop_assert!(k.contains(&x));
        prop_assert!(k.contains(&x.shift()));
        for n in 1..8 {
            prop_assert!(k.in_suffix_language(x.suffix(n).symbols()));
        }
    }

    #[test]
    fn normalize_preserves_membership((spec, k) in sft(), x in point(3)) {
        let norm = Subshift::new(spec.normalize().unwrap()).unwrap();
        prop_assert_eq!(norm.contains(&x), k.contains(&x));
        prop_assert_eq!(norm.suffix_language(4), k.suffix_language(4));
    }

    #[test]
    fn witness_levels_are_suffix_closed((_, k) in sft()) {
        let t = WitnessTable::build(&k, 8);
        for m in 1..8 {
            for w in t.witnesses(m + 1) {
                prop_assert!(t.witnesses(m).contains(&w.suffix(m).unwrap()));
            }
        }
    }

    #[test]
    fn exit_points_are_at_distance_zero((_, k) in sft(), x in point(3)) {
        let t = WitnessTable::build(&k, 10);
        if t.is_exit_point(&x) {
            prop_assert!(!k.contains(&x));
            prop_assert_eq!(t.distance_to_exit(&x).exact(), Some(Dyadic::ZERO));
        }
    }

    #[test]
    fn weighted_g_is_a_g_function((_, k) in sft(), seed in any::<u64>()) {
        let t = Arc::new(WitnessTable::build(&k, 10));
        let Certification::Certificate(cert) = certify_property_g(&t, 6, 32) else {
            return Ok(());
        };
        let Alphabet::Finite(size) = k.alphabet() else { unreachable!() };
        let eps = rat(1, 1 << 20);
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let weighted = GFunction::weighted(t.clone(), cert, WeightSeq::Uniform(size)).unwrap();
        let krieger = GFunction::krieger(t.clone()).unwrap();
        for g in [weighted, krieger] {
            for _ in 0..8 {
                let x = random_point(&mut rng, size as u32, 3, 5);
                for a in 0..size as u32 {
                    let v = g.eval(&x.append(Symbol(a))).unwrap();
                    prop_assert!(v.is_exact() && v.lo >= rat(0, 1) && v.hi <= rat(1, 1));
                }
                let line = verify_sum_one(&g, &x, &eps, 32);
                prop_assert!(line.pass, "{} at {}", g.name(), x);
            }
        }
    }
}
