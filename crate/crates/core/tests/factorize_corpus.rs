use chainsemi::families::{family, FamilyLabel, Regime};
use chainsemi::{
    enumerate_class, factorize_iord, factorize_pord, ChainMap, Class, Limits, PointSet,
};

fn failures(n: usize, r: usize, class: Class) -> Vec<ChainMap> {
    let lim = Limits::default();
    enumerate_class(n, class, Some(r), &lim)
        .unwrap()
        .into_iter()
        .filter(|&a| {
            let f = match class {
                Class::PordStar => factorize_pord(a, r),
                _ => factorize_iord(a, r),
            };
            !f.unwrap().verified()
        })
        .collect()
}

/// No staircase of `t+1` points fits on the chain within the image bound.
fn no_room(a: ChainMap, r: usize) -> bool {
    let (n, t) = (a.n(), a.image_size());
    let top = a.image().last().unwrap();
    t + 1 > r || (top + t > n && (top <= t || n - top + 1 < t))
}

#[test]
fn pord_corpora_factorize() {
    for n in 4..=7 {
        for r in 3..n {
            let bad = failures(n, r, Class::PordStar);
            assert!(bad.is_empty(), "PORD({n},{r}): {bad:?}");
        }
    }
}

#[test]
fn iord_gaps_are_cramped_order_reversing_maps() {
    let mut gaps = 0;
    for n in 4..=7 {
        for r in 3..n {
            for a in failures(n, r, Class::IordStar) {
                assert!(
                    a.classify().order_reversing && no_room(a, r),
                    "IORD({n},{r}): {a}"
                );
                gaps += 1;
            }
        }
    }
    assert_eq!(gaps, 2 + 7 + 28 + 3);
    assert!(failures(6, 4, Class::IordStar).is_empty());
    assert!(failures(6, 5, Class::IordStar).is_empty());
}

#[test]
fn smallest_gap_has_no_injective_three_factor_form() {
    let (n, r) = (5, 4);
    let lim = Limits::default();
    let alpha: ChainMap = "n=5:[0,0,3,2,1]".parse().unwrap();
    assert_eq!(Regime::of(n, r).unwrap(), Regime::Large);
    let ic = enumerate_class(n, Class::Ic, Some(r), &lim).unwrap();
    let mut middles = Vec::new();
    for g in family(n, r, FamilyLabel::G, &lim).unwrap().elements {
        for bits in 0..1u16 << n {
            let y = ChainMap::partial_identity(n, PointSet::from_bits(bits << 1).unwrap()).unwrap();
            middles.push(y.then(g));
        }
    }
    let found = middles.iter().any(|&g| {
        ic.iter()
            .any(|&b| ic.iter().any(|&d| b.then(g).then(d) == alpha))
    });
    assert!(!found);
    let iopd = enumerate_class(n, Class::Iopd, Some(r), &lim).unwrap();
    let found = middles.iter().any(|&g| {
        iopd.iter()
            .any(|&b| iopd.iter().any(|&d| b.then(g).then(d) == alpha))
    });
    assert!(found);
}
