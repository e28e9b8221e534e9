use proptest::prelude::*;

use chainsemi::text::{parse_chain_map, parse_class_spec, parse_family_spec, parse_map_list};
use chainsemi::{closure, factorize_pord, ChainMap, Class, Limits, PointSet};

/// Any partial map on a chain of size `n` (not necessarily order-decreasing).
fn partial_map(n: usize) -> impl Strategy<Value = ChainMap> {
    prop::collection::vec(0..=n, n).prop_map(move |img| ChainMap::new(n, &img).unwrap())
}

/// Order-decreasing partial maps: `x ↦ 0` or `x ↦ y ≤ x`.
fn decreasing_map(n: usize) -> impl Strategy<Value = ChainMap> {
    (1..=n)
        .map(|x| prop_oneof![Just(0usize), 1..=x])
        .collect::<Vec<_>>()
        .prop_map(move |img| ChainMap::new(n, &img).unwrap())
}

fn sized<S: Strategy, F: Fn(usize) -> S>(
    lo: usize,
    hi: usize,
    f: F,
) -> impl Strategy<Value = S::Value>
where
    S::Value: std::fmt::Debug,
{
    (lo..=hi).prop_flat_map(f)
}

fn pord_star(n: usize) -> impl Strategy<Value = ChainMap> {
    decreasing_map(n).prop_filter("PORD* with an image of three or more", |a| {
        let c = a.classify();
        Class::PordStar.contains(&c) && c.image_size >= 3
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(512))]

    #[test]
    fn composition_is_associative(
        (a, b, c) in sized(1, 5, |n| (partial_map(n), partial_map(n), partial_map(n)))
    ) {
        prop_assert_eq!(a.then(b).then(c), a.then(b.then(c)));
    }

    #[test]
    fn fix_of_a_product_of_decreasing_maps((a, b) in sized(1, 9, |n| (decreasing_map(n), decreasing_map(n)))) {
        prop_assert_eq!(a.then(b).fix(), a.fix().intersection(b.fix()));
    }

    #[test]
    fn canonical_text_roundtrips(a in sized(1, 15, partial_map)) {
        let text = a.to_string();
        prop_assert_eq!(parse_chain_map(&text).unwrap(), a);
        prop_assert_eq!(a.classify(), text.parse::<ChainMap>().unwrap().classify());
    }

    #[test]
    fn parsers_never_panic(s in "\\PC{0,40}") {
        let _ = parse_chain_map(&s);
        let _ = parse_map_list(&s);
        let _ = parse_class_spec(&s);
        let _ = parse_family_spec(&s);
    }

    #[test]
    fn near_miss_inputs_never_panic(s in "[nN=:\\[\\],0-9 (PORDI*_kcE)#\n-]{0,40}") {
        let _ = parse_chain_map(&s);
        let _ = parse_map_list(&s);
        let _ = parse_class_spec(&s);
        let _ = parse_family_spec(&s);
    }

    #[test]
    fn restriction_matches_partial_identity((a, bits) in sized(1, 8, |n| (partial_map(n), 0..1u16 << n))) {
        let y = PointSet::from_bits(bits << 1).unwrap();
        let id = ChainMap::partial_identity(a.n(), y).unwrap();
        prop_assert_eq!(a.restrict(y).unwrap(), id.then(a));
    }

    #[test]
    fn pord_star_factorizes((a, extra) in sized(4, 9, |n| (pord_star(n), 0..=n))) {
        let r = (a.image_size() + extra).min(a.n() - 1).max(3);
        prop_assume!(a.image_size() <= r);
        let f = factorize_pord(a, r).unwrap();
        prop_assert!(f.verified(), "{} r={}: {:?}", a, r, f.postconditions());
        prop_assert_eq!(f.beta.then(f.gamma.then(f.delta)), a);
    }
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(48))]

    #[test]
    fn closure_is_idempotent_and_monotone(
        (gens, extra) in sized(2, 5, |n| (prop::collection::vec(decreasing_map(n), 1..5), decreasing_map(n)))
    ) {
        let lim = Limits::default();
        let s = closure(&gens, &lim).unwrap();
        prop_assert!(s.is_closed());
        prop_assert_eq!(&closure(&s.elements, &lim).unwrap().elements, &s.elements);
        let mut bigger = gens.clone();
        bigger.push(extra);
        let t = closure(&bigger, &lim).unwrap();
        prop_assert!(s.elements.iter().all(|x| t.contains(x)));
    }

    #[test]
    fn provenance_replays_every_element(gens in sized(2, 5, |n| prop::collection::vec(decreasing_map(n), 1..5))) {
        let s = closure(&gens, &Limits::default()).unwrap();
        for (i, x) in s.elements.iter().enumerate() {
            prop_assert_eq!(s.replay(i), *x);
        }
    }

    #[test]
    fn closure_ignores_generator_order_and_workers(
        (gens, seed) in sized(2, 5, |n| (prop::collection::vec(decreasing_map(n), 1..6), any::<u64>()))
    ) {
        let lim = Limits::default();
        let a = closure(&gens, &lim).unwrap();
        let mut shuffled = gens.clone();
        let len = shuffled.len();
        for i in 0..len {
            shuffled.swap(i, (seed.rotate_left(i as u32 * 7) as usize) % len);
        }
        let pool = rayon::ThreadPoolBuilder::new().num_threads(1).build().unwrap();
        let b = pool.install(|| closure(&shuffled, &lim)).unwrap();
        prop_assert_eq!(&a.elements, &b.elements);
        prop_assert_eq!(&a.provenance, &b.provenance);
    }
}
