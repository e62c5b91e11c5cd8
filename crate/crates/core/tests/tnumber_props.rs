use fkalg::hilbert::{expand_t_product, factor_t_numbers, prefix_consistency, PrefixVerdict};
use fkalg::HilbertSeries;
use proptest::prelude::*;

/// All multisets of integers `>= 2`, descending, with product `<= limit`.
fn multisets(limit: u64) -> Vec<Vec<u32>> {
    fn go(max_k: u64, budget: u64, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        out.push(cur.clone());
        for k in 2..=max_k.min(budget) {
            cur.push(k as u32);
            go(k, budget / k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(limit, limit, &mut Vec::new(), &mut out);
    out
}

#[test]
fn round_trip_all_small_products() {
    let all = multisets(10_000);
    assert!(all.len() > 10_000);
    for m in &all {
        let p = expand_t_product(m);
        let degree: usize = m.iter().map(|&k| k as usize - 1).sum();
        let value: u128 = m.iter().map(|&k| k as u128).product();
        assert_eq!(p.top_degree(), Some(degree));
        assert_eq!(p.total(), value);
        assert_eq!(factor_t_numbers(&p).factors(), Some(&m[..]), "{m:?}");
    }
}

#[test]
fn fk_products_factor_back() {
    let cases: [&[u32]; 3] = [
        &[3, 2, 2],
        &[4, 4, 3, 3, 2, 2],
        &[6, 6, 6, 6, 5, 5, 4, 4, 4, 4],
    ];
    for m in cases {
        assert_eq!(factor_t_numbers(&expand_t_product(m)).factors(), Some(m));
    }
    let e5 = expand_t_product(&[4, 4, 4, 4, 5, 5, 6, 6, 6, 6]);
    assert_eq!(e5.top_degree(), Some(40));
    assert_eq!(e5.total(), 8_294_400);
    assert_eq!(
        e5.coefficients[..8],
        [1, 10, 55, 220, 711, 1960, 4761, 10410]
    );
}

/// Truncated series of a size profile; sizes above `depth` are all
/// represented by `depth + 1`.
fn truncated(profile: &[u32], depth: usize) -> Vec<u64> {
    let p = expand_t_product(profile).coefficients;
    (0..=depth)
        .map(|d| p.get(d).copied().unwrap_or(0))
        .collect()
}

/// Exhaustive search over factor-size profiles with the given number of factors.
fn profile_search(prefix: &[u64], depth: usize) -> bool {
    let m = prefix[1] as usize;
    fn go(slots: usize, max_k: u32, cur: &mut Vec<u32>, prefix: &[u64], depth: usize) -> bool {
        if slots == 0 {
            return truncated(cur, depth) == prefix[..=depth];
        }
        (2..=max_k).any(|k| {
            cur.push(k);
            let hit = go(slots - 1, k, cur, prefix, depth);
            cur.pop();
            hit
        })
    }
    go(m, depth as u32 + 1, &mut Vec::new(), prefix, depth)
}

#[test]
fn e6_prefix_refuted_by_profile_search() {
    let prefix = [1, 15, 125];
    assert!(!profile_search(&prefix, 2));
    match prefix_consistency(&prefix, 2) {
        PrefixVerdict::Refuted { degree, reason } => {
            assert_eq!(degree, 2);
            assert!(reason.contains("20"), "{reason}");
        }
        other => panic!("{other:?}"),
    }
    // Deeper prefixes are refuted too.
    assert!(matches!(
        prefix_consistency(&[1, 15, 125, 765, 3831], 4),
        PrefixVerdict::Refuted { .. }
    ));
}

#[test]
fn prefix_verdicts_match_exhaustive_search() {
    for depth in 1..=4usize {
        for m in 0..=5u64 {
            // Every coefficient vector near a genuine profile.
            let mut seen = std::collections::HashSet::new();
            for profile in profiles(m as usize, depth as u32 + 1) {
                let base = truncated(&profile, depth);
                for d in 2..=depth {
                    for delta in [-2i64, -1, 0, 1, 2] {
                        let mut v = base.clone();
                        let x = v[d] as i64 + delta;
                        if x < 0 {
                            continue;
                        }
                        v[d] = x as u64;
                        if seen.insert(v.clone()) {
                            let oracle = profile_search(&v, depth);
                            let verdict = prefix_consistency(&v, depth);
                            assert_eq!(
                                matches!(verdict, PrefixVerdict::Consistent { .. }),
                                oracle,
                                "{v:?}"
                            );
                            if let PrefixVerdict::Consistent { witness } = verdict {
                                assert_eq!(truncated(&witness, depth), v);
                            }
                        }
                    }
                }
            }
        }
    }
}

fn profiles(slots: usize, max_k: u32) -> Vec<Vec<u32>> {
    if slots == 0 {
        return vec![vec![]];
    }
    (2..=max_k)
        .flat_map(|k| {
            profiles(slots - 1, k).into_iter().map(move |mut p| {
                p.insert(0, k);
                p
            })
        })
        .collect()
}

#[test]
fn complete_inputs_that_are_not_products() {
    for v in [
        vec![1u64, 2, 2],
        vec![1, 1, 2, 1, 1],
        vec![1, 2, 3, 3, 2, 1, 1],
    ] {
        assert!(
            factor_t_numbers(&HilbertSeries::complete(v.clone()))
                .factors()
                .is_none(),
            "{v:?}"
        );
    }
}

proptest! {
    #[test]
    fn genuine_prefixes_are_never_refuted(m in proptest::collection::vec(2u32..9, 0..8), depth in 1usize..10) {
        let p = expand_t_product(&m).coefficients;
        let prefix: Vec<u64> = (0..=depth).map(|d| p.get(d).copied().unwrap_or(0)).collect();
        let is_consistent = matches!(prefix_consistency(&prefix, depth), PrefixVerdict::Consistent { .. });
        prop_assert!(is_consistent);
    }

    #[test]
    fn factorization_certifies_degree_and_value(m in proptest::collection::vec(2u32..12, 0..7)) {
        let p = expand_t_product(&m);
        let f = factor_t_numbers(&p);
        let factors = f.factors().unwrap();
        prop_assert_eq!(factors.iter().map(|&k| k as usize - 1).sum::<usize>(), p.top_degree().unwrap());
        prop_assert_eq!(factors.iter().map(|&k| k as u128).product::<u128>(), p.total());
    }
}
