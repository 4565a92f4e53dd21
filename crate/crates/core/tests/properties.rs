//! Property suite: algebraic laws of the tower arithmetic, canonical-form
//! uniqueness, parse/format stability, and the geometric invariances the
//! counting relies on.

mod common;

use std::sync::Arc;

use proptest::prelude::*;
use rand::Rng;

use incidence_core::geometry::{incident, line_through, AffineMap, Configuration, Line, Point};
use incidence_core::incidence::{
    beck_report, connecting_lines, count_incidences, count_incidences_naive,
    count_incidences_with_threads,
};
use incidence_core::specialize::{specialize_element, Assignment};
use incidence_core::sumproduct::{productset, sumset, ElementSet};
use incidence_core::{parse_element, FieldElement, Rational, Tower};

fn zero_diff(a: &FieldElement, b: &FieldElement) -> bool {
    a.checked_sub(b).expect("same tower").is_zero()
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn field_axioms_hold_on_every_shape(seed in any::<u64>()) {
        for (name, tw) in common::tower_shapes() {
            let mut rng = common::rng(seed);
            let a = common::random_element(&tw, &mut rng);
            let b = common::random_element(&tw, &mut rng);
            let c = common::random_element(&tw, &mut rng);

            let add_assoc = a.checked_add(&b).unwrap().checked_add(&c).unwrap();
            let add_assoc2 = a.checked_add(&b.checked_add(&c).unwrap()).unwrap();
            prop_assert!(zero_diff(&add_assoc, &add_assoc2), "+ assoc over {name}");

            let mul_assoc = a.checked_mul(&b).unwrap().checked_mul(&c).unwrap();
            let mul_assoc2 = a.checked_mul(&b.checked_mul(&c).unwrap()).unwrap();
            prop_assert!(zero_diff(&mul_assoc, &mul_assoc2), "* assoc over {name}");

            let dist = a.checked_mul(&b.checked_add(&c).unwrap()).unwrap();
            let dist2 = a
                .checked_mul(&b)
                .unwrap()
                .checked_add(&a.checked_mul(&c).unwrap())
                .unwrap();
            prop_assert!(zero_diff(&dist, &dist2), "distributivity over {name}");

            if !a.is_zero() {
                let inv = a.inverse().unwrap();
                prop_assert!(a.checked_mul(&inv).unwrap().is_one(), "inverse over {name}");
            }
        }
    }

    #[test]
    fn canonical_form_is_unique(seed in any::<u64>()) {
        for (name, tw) in common::tower_shapes() {
            let mut rng = common::rng(seed);
            let a = common::random_element(&tw, &mut rng);
            let r = common::random_nonzero_poly_elem(&tw, &mut rng, 2);
            // The same value reached along a different route must land on
            // the identical encoding.
            let b = a.checked_mul(&r).unwrap().checked_div(&r).unwrap();
            prop_assert_eq!(&a, &b, "encodings differ over {}", name);
            prop_assert_eq!(a.to_string(), b.to_string());
        }
    }

    #[test]
    fn format_then_parse_is_identity(seed in any::<u64>()) {
        for (name, tw) in common::tower_shapes() {
            let mut rng = common::rng(seed);
            let a = common::random_element(&tw, &mut rng);
            let back = parse_element(&a.to_string(), &tw).unwrap();
            prop_assert_eq!(&a, &back, "parse(format) changed the element over {}", name);
        }
    }

    #[test]
    fn rational_embedding_round_trips(num in -1_000_000_000i64..1_000_000_000, den in 1i64..1_000_000) {
        let q = Tower::rationals();
        let r = Rational::new(num.into(), den.into());
        let e = q.from_rational(&r);
        prop_assert_eq!(e.to_rational(), Some(r));
    }

    #[test]
    fn line_canonicalization_absorbs_scaling(seed in any::<u64>()) {
        for (_, tw) in common::tower_shapes() {
            let mut rng = common::rng(seed);
            let l = common::random_line(&tw, &mut rng);
            let s = common::random_nonzero_poly_elem(&tw, &mut rng, 1);
            let scaled = Line::new(
                l.a().checked_mul(&s).unwrap(),
                l.b().checked_mul(&s).unwrap(),
                l.c().checked_mul(&s).unwrap(),
            )
            .unwrap();
            prop_assert_eq!(&l, &scaled);
        }
    }

    #[test]
    fn line_through_hits_both_endpoints(seed in any::<u64>()) {
        for (_, tw) in common::tower_shapes() {
            let mut rng = common::rng(seed);
            // Polynomial coordinates: quotients of quotients make the
            // check arbitrarily slow without testing anything new.
            let p = Point::new(
                common::random_poly_elem(&tw, &mut rng, 1),
                common::random_poly_elem(&tw, &mut rng, 1),
            );
            let q = Point::new(
                common::random_poly_elem(&tw, &mut rng, 1),
                common::random_poly_elem(&tw, &mut rng, 1),
            );
            if p == q {
                prop_assert!(line_through(&p, &q).is_err());
            } else {
                let l = line_through(&p, &q).unwrap();
                prop_assert!(incident(&p, &l));
                prop_assert!(incident(&q, &l));
                let l2 = line_through(&q, &p).unwrap();
                prop_assert_eq!(l, l2);
            }
        }
    }

    #[test]
    fn affine_maps_preserve_incidence(seed in any::<u64>()) {
        let tw = common::q_t();
        let mut rng = common::rng(seed);
        let cfg = common::random_config(&tw, &mut rng, 8, 4);
        let map = loop {
            let m = [
                [
                    common::random_poly_elem(&tw, &mut rng, 1),
                    common::random_poly_elem(&tw, &mut rng, 1),
                ],
                [
                    common::random_poly_elem(&tw, &mut rng, 1),
                    common::random_poly_elem(&tw, &mut rng, 1),
                ],
            ];
            let v = [
                common::random_poly_elem(&tw, &mut rng, 1),
                common::random_poly_elem(&tw, &mut rng, 1),
            ];
            if let Ok(map) = AffineMap::new(m, v) {
                break map;
            }
        };
        for p in cfg.points() {
            for l in cfg.lines() {
                let tp = map.apply_point(p);
                let tl = map.apply_line(l).unwrap();
                prop_assert_eq!(incident(p, l), incident(&tp, &tl));
            }
        }
    }

    #[test]
    fn connecting_line_pairs_partition_all_pairs(seed in any::<u64>(), m in 3usize..=25) {
        let q = common::q();
        let mut rng = common::rng(seed);
        let points = common::random_point_set(&q, &mut rng, m);
        let n = points.len() as u64;
        let records = connecting_lines(&points);
        let total: u64 = records
            .iter()
            .map(|r| r.richness * (r.richness - 1) / 2)
            .sum();
        prop_assert_eq!(total, n * (n - 1) / 2);

        let beck = beck_report(&points);
        prop_assert_eq!(beck.connecting_lines, records.len() as u64);
        prop_assert!(beck.max_richness <= n);
    }

    #[test]
    fn engine_and_thread_counts_agree(seed in any::<u64>()) {
        for tw in [common::q(), common::q_t()] {
            let mut rng = common::rng(seed);
            let cfg = common::random_config(&tw, &mut rng, 12, 6);
            let oracle = count_incidences_naive(&cfg);
            prop_assert_eq!(count_incidences(&cfg).incidences, oracle);
            for threads in [1, 2, 5] {
                prop_assert_eq!(
                    count_incidences_with_threads(&cfg, threads).incidences,
                    oracle
                );
            }
        }
    }

    #[test]
    fn sumset_respects_translation_and_productset_dilation(seed in any::<u64>()) {
        for tw in [common::q(), common::q_t()] {
            let mut rng = common::rng(seed);
            let size = rng.gen_range(2..=8);
            let elems: Vec<FieldElement> =
                (0..size).map(|_| common::random_element(&tw, &mut rng)).collect();
            let a = ElementSet::new(Arc::clone(&tw), elems.clone()).unwrap();

            let shift = common::random_element(&tw, &mut rng);
            let translated = ElementSet::new(
                Arc::clone(&tw),
                elems
                    .iter()
                    .map(|e| e.checked_add(&shift).unwrap())
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            prop_assert_eq!(sumset(&a).len(), sumset(&translated).len());
            prop_assert!(sumset(&a).len() >= a.len());

            let scale = common::random_nonzero_poly_elem(&tw, &mut rng, 1);
            let dilated = ElementSet::new(
                Arc::clone(&tw),
                elems
                    .iter()
                    .map(|e| e.checked_mul(&scale).unwrap())
                    .collect::<Vec<_>>(),
            )
            .unwrap();
            prop_assert_eq!(productset(&a).len(), productset(&dilated).len());
        }
    }

    #[test]
    fn specialization_is_a_homomorphism(seed in any::<u64>(), num in -500i64..=500, den in 1i64..=40) {
        for tw in [common::q_t(), common::q_t1_t2()] {
            let mut rng = common::rng(seed);
            let a = common::random_element(&tw, &mut rng);
            let b = common::random_element(&tw, &mut rng);
            let values: Vec<Rational> = (0..tw.generator_count())
                .map(|i| Rational::new((num + i as i64).into(), den.into()))
                .collect();
            let asg = Assignment::from_values(&tw, values).unwrap();

            let pa = specialize_element(&a, &asg);
            let pb = specialize_element(&b, &asg);
            let (Ok(pa), Ok(pb)) = (pa, pb) else { continue };

            let sum = a.checked_add(&b).unwrap();
            if let Ok(ps) = specialize_element(&sum, &asg) {
                prop_assert_eq!(ps, pa.checked_add(&pb).unwrap());
            }
            let prod = a.checked_mul(&b).unwrap();
            if let Ok(pp) = specialize_element(&prod, &asg) {
                prop_assert_eq!(pp, pa.checked_mul(&pb).unwrap());
            }
        }
    }

    #[test]
    fn specialized_incidence_counts_survive(seed in any::<u64>()) {
        let tw = common::q_t();
        let mut rng = common::rng(seed);
        let cfg = common::random_config(&tw, &mut rng, 10, 5);
        let before = count_incidences_naive(&cfg);
        let (spec, _) = incidence_core::specialize::generic_specialize(&cfg, seed, 32).unwrap();
        prop_assert_eq!(count_incidences_naive(&spec), before);
    }
}

#[test]
fn duplicate_inputs_are_dropped_once() {
    let q = common::q();
    let p = Point::new(q.from_int(1), q.from_int(2));
    let l = Line::new(q.one(), q.zero(), q.from_int(-1)).unwrap();
    let cfg = Configuration::new(
        Arc::clone(&q),
        vec![p.clone(), p.clone(), p],
        vec![l.clone(), l],
    )
    .unwrap();
    assert_eq!(cfg.points().len(), 1);
    assert_eq!(cfg.lines().len(), 1);
    assert_eq!(cfg.duplicate_points(), 2);
    assert_eq!(cfg.duplicate_lines(), 1);
    assert_eq!(count_incidences_naive(&cfg), 1);
}
