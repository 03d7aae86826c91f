use num_bigint::BigUint;
use num_rational::BigRational;
use num_traits::{One, Zero};
use proptest::prelude::*;

use chainlattice::chains::{
    chains_through, count_k_chains, count_k_chains_by_submasks, enumerate_phi, enumerate_phi_star,
    ratio_same_steps, upward_denominator, weight, weight_of_sizes, weighted_sum, Chain, Direction, StepVector,
};
use chainlattice::degrees::{max_degree, max_degree_sandwich};
use chainlattice::grid::{count_point_chains, count_point_chains_brute, m_centered_family, Convention};
use chainlattice::io::{
    family_to_json, family_to_text, format_chain, parse_chain, parse_family_json, parse_family_text,
};
use chainlattice::lattice::{
    binomial, centered_family, permute_code, sigma, upper_shadow, Family,
};
use chainlattice::scd::{dbtk_scd, sample_scd};
use chainlattice::search::{local_search, SearchConfig, SearchMode};
use chainlattice::supersat::{
    compress, is_compressed, step_classes, ChainHypergraph, ChainOrder, MeasuredSubhypergraph,
};

fn family(max_n: usize) -> impl Strategy<Value = Family> {
    (1..=max_n).prop_flat_map(|n| {
        proptest::collection::vec(any::<bool>(), 1 << n).prop_map(move |bits| {
            Family::from_codes(n, (0..1u32 << n).filter(|&c| bits[c as usize])).unwrap()
        })
    })
}

fn permutation(n: usize) -> impl Strategy<Value = Vec<usize>> {
    Just((0..n).collect::<Vec<_>>()).prop_shuffle()
}

/// A chain with the given sizes, built from prefixes of a permutation.
fn chain_from(n: usize, perm: &[usize], sizes: &[usize]) -> Chain {
    let sets = sizes.iter().map(|&s| perm[..s].iter().fold(0u32, |acc, &e| acc | 1 << e)).collect();
    Chain::new(n, sets).unwrap()
}

fn chain(max_n: usize) -> impl Strategy<Value = Chain> {
    (1..=max_n).prop_flat_map(|n| {
        (permutation(n), proptest::sample::subsequence((0..=n).collect::<Vec<_>>(), 1..=n + 1))
            .prop_map(move |(perm, sizes)| chain_from(n, &perm, &sizes))
    })
}

proptest! {
    #![proptest_config(ProptestConfig { cases: 200, failure_persistence: None, ..ProptestConfig::default() })]

    #[test]
    fn family_size_matches_members(f in family(8)) {
        prop_assert_eq!(f.len(), f.iter().count());
        prop_assert!(f.iter().all(|c| u64::from(c) < 1u64 << f.n()));
        prop_assert_eq!(f.level_profile().iter().sum::<usize>(), f.len());
    }

    #[test]
    fn centered_families_are_nested(p in family(7)) {
        let mut prev = Family::empty(p.n()).unwrap();
        for q in 0..=p.len() {
            let g = centered_family(&p, q).unwrap();
            prop_assert_eq!(g.len(), q);
            prop_assert!(prev.is_subset_of(&g));
            prop_assert!(g.is_subset_of(&p));
            prev = g;
        }
        prop_assert!(centered_family(&p, p.len() + 1).is_err());
    }

    #[test]
    fn normalized_matching(n in 2usize..=12, seed in any::<u64>(), density in 0.01f64..1.0) {
        use rand::{Rng, SeedableRng};
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let level = rng.gen_range(0..n);
        let layer = Family::layer(n, level).unwrap();
        let f = Family::from_codes(n, layer.iter().filter(|_| rng.gen_bool(density))).unwrap();
        let up = upper_shadow(&f, level + 1).unwrap();
        // |F| / C(n,p) <= |∂F| / C(n,p+1)
        let lhs = f.len() as u128 * u128::from(binomial(n as u64, level as u64 + 1));
        let rhs = up.len() as u128 * u128::from(binomial(n as u64, level as u64));
        prop_assert!(lhs <= rhs);
    }

    #[test]
    fn weights_are_probabilities(c in chain(12)) {
        let w = weight(&c).into_inner();
        prop_assert!(w > BigRational::zero() && w <= BigRational::one());
        if c.len() >= 3 {
            // dropping an interior set can only raise the weight
            for i in 1..c.len() - 1 {
                let mut sets = c.sets().to_vec();
                sets.remove(i);
                let sub = Chain::new(c.n(), sets).unwrap();
                prop_assert!(weight(&sub).into_inner() >= w.clone());
            }
        }
    }

    #[test]
    fn balanced_chains_agree_in_both_orientations(n in 2usize..=14, perm_seed in any::<u64>(), low in 0usize..=7) {
        use rand::{seq::SliceRandom, SeedableRng};
        prop_assume!(2 * low < n);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(perm_seed);
        let mut perm: Vec<usize> = (0..n).collect();
        perm.shuffle(&mut rng);
        let c = chain_from(n, &perm, &[low, n - low]);
        prop_assume!(c.len() == 2);
        prop_assert_eq!(c.direction(), Direction::Down);
        let up = BigRational::new(1.into(), upward_denominator(n, &c.sizes()).into());
        prop_assert_eq!(weight(&c).into_inner(), up);
    }

    #[test]
    fn farther_chains_weigh_less(n in 2usize..=8, steps in proptest::collection::vec(1usize..=3, 1..=3),
                                 lo_a in 0usize..=8, lo_b in 0usize..=8, perm in permutation(8)) {
        let h: usize = steps.iter().sum();
        prop_assume!(h <= n);
        let (lo_a, lo_b) = (lo_a % (n - h + 1), lo_b % (n - h + 1));
        let sizes = |lo: usize| {
            let mut v = vec![lo];
            for s in &steps { v.push(v.last().unwrap() + s); }
            v
        };
        let perm: Vec<usize> = perm.into_iter().filter(|&e| e < n).collect();
        let a = chain_from(n, &perm, &sizes(lo_a));
        let b = chain_from(n, &perm, &sizes(lo_b));
        if a.twice_distance() > b.twice_distance() {
            let r = ratio_same_steps(&a, &b).unwrap();
            let bound = BigRational::one() + BigRational::new((h as i64).into(), (n as i64).into());
            prop_assert!(r > BigRational::one());
            prop_assert!(r >= bound, "ratio {} below 1 + h/n", r);
        } else {
            prop_assert!(ratio_same_steps(&a, &b).is_err());
        }
    }

    #[test]
    fn chain_counts_agree(f in family(5), k in 1usize..=5) {
        let dp = count_k_chains(&f, k).unwrap();
        prop_assert_eq!(&dp, &count_k_chains_by_submasks(&f, k));
        let listed = enumerate_phi(&f, &StepVector::ones(k)).count();
        prop_assert_eq!(dp, BigUint::from(listed));
    }

    #[test]
    fn phi_is_union_of_exact_classes(f in family(5), k in 2usize..=4) {
        let n = f.n() as u32;
        for a in StepVector::all_bounded(k - 1, n) {
            let total = enumerate_phi(&f, &a).count();
            let parts: usize = StepVector::all_bounded(k - 1, n)
                .iter()
                .filter(|b| b.dominates(&a))
                .map(|b| enumerate_phi_star(&f, b).count())
                .sum();
            prop_assert_eq!(total, parts);
            let direct: BigRational = enumerate_phi(&f, &a).map(|c| weight(&c).into_inner()).sum();
            prop_assert_eq!(weighted_sum(&f, &a), direct);
        }
    }

    #[test]
    fn chain_count_is_relabeling_invariant(f in family(6), perm in permutation(6), k in 2usize..=4) {
        let perm: Vec<usize> = perm.into_iter().filter(|&e| e < f.n()).collect();
        let g = f.permuted(&perm);
        prop_assert_eq!(g.len(), f.len());
        prop_assert!(f.iter().all(|c| g.contains(permute_code(c, &perm))));
        prop_assert_eq!(count_k_chains(&f, k).unwrap(), count_k_chains(&g, k).unwrap());
    }

    #[test]
    fn swap_updates_match_recount(f in family(7), k in 1usize..=4, pick in any::<proptest::sample::Index>(),
                                  add in any::<proptest::sample::Index>()) {
        prop_assume!(!f.is_empty() && f.len() < 1 << f.n());
        let members = f.codes();
        let outside: Vec<u32> = (0..1u32 << f.n()).filter(|&c| !f.contains(c)).collect();
        let (x, y) = (*pick.get(&members), *add.get(&outside));
        let before: u128 = count_k_chains(&f, k).unwrap().try_into().unwrap();
        let mut g = f.clone();
        let lose = chains_through(&g, x, k);
        g.remove(x);
        let gain = chains_through(&g, y, k);
        g.insert(y);
        let after: u128 = count_k_chains(&g, k).unwrap().try_into().unwrap();
        prop_assert_eq!(before - lose + gain, after);
    }

    #[test]
    fn sampled_decompositions_are_valid(n in 1usize..=12, seed in any::<u64>()) {
        let s = sample_scd(n, seed).unwrap();
        s.validate().unwrap();
        prop_assert_eq!(s.chains().len() as u64, binomial(n as u64, n as u64 / 2));
        for c in s.chains() {
            prop_assert_eq!(c.bottom().count_ones() as usize + c.top().count_ones() as usize, n);
            prop_assert!(c.steps().entries().iter().all(|&a| a == 1));
        }
    }

    #[test]
    fn compression_keeps_size(f in family(5), k in 2usize..=3, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let n = f.n();
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let host = ChainHypergraph::new(n, n + 1, k).unwrap();
        let mut m = MeasuredSubhypergraph::indicator(host, &f).unwrap();
        let full = Family::full(n).unwrap();
        let classes = step_classes(&full, k);
        prop_assume!(!classes.is_empty());
        let a = &classes[rng.gen_range(0..classes.len())];
        for c in enumerate_phi_star(&full, a).take(6) {
            let q: i64 = rng.gen_range(1..=5);
            m.set(c, BigRational::new(rng.gen_range(0..=q).into(), q.into())).unwrap();
        }
        let g = compress(&m, &full, a).unwrap();
        prop_assert_eq!(g.size(), m.size());
        prop_assert!(is_compressed(&g, &full, a).unwrap());
        prop_assert!(g.explicit().values().all(|v| *v >= BigRational::zero() && *v <= BigRational::one()));
    }

    #[test]
    fn centered_family_has_fewest_chains(n in 5usize..=6, d in 1usize..=7, k in 2usize..=4, seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        prop_assume!(d <= n + 1);
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p: f64 = rng.gen();
        let verts = chainlattice::lattice::middle_layers(n, d).unwrap();
        let f = Family::from_codes(n, verts.iter().filter(|_| rng.gen_bool(p))).unwrap();
        let g = chainlattice::lattice::centered(n, f.len()).unwrap();
        prop_assert!(count_k_chains(&f, k).unwrap() >= count_k_chains(&g, k).unwrap());
    }

    #[test]
    fn compression_keeps_goodness(seed in any::<u64>()) {
        use rand::{Rng, SeedableRng};
        let n = 6;
        let mut rng = rand_chacha::ChaCha8Rng::seed_from_u64(seed);
        let p: f64 = rng.gen();
        let f = Family::from_codes(n, (0..1u32 << n).filter(|_| rng.gen_bool(p))).unwrap();
        let full = Family::full(n).unwrap();
        let host = ChainHypergraph::new(n, n + 1, 2).unwrap();
        let m = MeasuredSubhypergraph::indicator(host, &f).unwrap();
        let good = chainlattice::supersat::is_q_good(&m, f.len(), &full).unwrap().good;
        prop_assert!(good);
        for a in step_classes(&full, 2) {
            let g = compress(&m, &full, &a).unwrap();
            prop_assert!(chainlattice::supersat::is_q_good(&g, f.len(), &full).unwrap().good);
        }
    }

    #[test]
    fn chain_order_puts_nearer_chains_first(n in 2usize..=6, k in 2usize..=3) {
        let p = Family::full(n).unwrap();
        for a in step_classes(&p, k) {
            let order = ChainOrder::new(&p, &a);
            let class = order.sorted_class();
            for (i, x) in class.iter().enumerate().step_by(7) {
                for y in class.iter().skip(i + 1).step_by(5) {
                    prop_assert!(x.twice_distance() <= y.twice_distance());
                }
            }
        }
    }

    #[test]
    fn degree_sandwich(n in 2usize..=12, j in 2usize..=13, k in 2usize..=4) {
        prop_assume!(j <= n + 1 && j >= k);
        let (delta, _) = max_degree(j, k, n).unwrap();
        let (lower, upper) = max_degree_sandwich(j, k, n).unwrap();
        let delta = BigRational::from_integer(delta.into());
        prop_assert!(lower <= delta, "lower {} > {}", lower, delta);
        // the n^k factor only covers spans well inside the lattice
        if 2 * j <= n {
            prop_assert!(delta <= upper);
        }
    }

    #[test]
    fn grid_counts_agree(m in 2usize..=4, d in 1usize..=3, q in 0usize..=40, k in 1usize..=3) {
        let total = m.pow(d as u32);
        let q = q.min(total);
        for conv in [Convention::ZeroBased, Convention::OneBased] {
            let g = m_centered_family(m, d, q, conv).unwrap();
            prop_assert_eq!(g.len(), q);
            let pts = g.points();
            prop_assert_eq!(count_point_chains(&pts, k).unwrap(), count_point_chains_brute(&pts, k));
        }
    }

    #[test]
    fn family_formats_round_trip(f in family(6)) {
        prop_assert_eq!(parse_family_json(&family_to_json(&f)).unwrap(), f.clone());
        prop_assert_eq!(parse_family_text(f.n(), &family_to_text(&f)).unwrap(), f);
    }

    #[test]
    fn chain_format_round_trips(c in chain(10)) {
        prop_assert_eq!(parse_chain(c.n(), &format_chain(&c)).unwrap(), c);
    }
}

#[test]
fn farther_chains_weigh_less_exhaustive() {
    // weights depend only on the sizes, so size sequences cover every pair
    let mut pairs = 0;
    for n in 1..=8u32 {
        for k in 2..=4usize {
            for a in StepVector::all_bounded(k - 1, n) {
                let h = a.total();
                let sizes = |lo: u32| {
                    let mut v = vec![lo];
                    for s in a.entries() {
                        v.push(v.last().unwrap() + s);
                    }
                    v
                };
                for lo_a in 0..=n - h {
                    for lo_b in 0..=n - h {
                        let (sa, sb) = (sizes(lo_a), sizes(lo_b));
                        let twice = |v: &[u32]| {
                            let far = |s: u32| (2 * i64::from(s) - i64::from(n)).abs();
                            far(v[0]).max(far(*v.last().unwrap()))
                        };
                        if twice(&sa) <= twice(&sb) {
                            continue;
                        }
                        pairs += 1;
                        let r = weight_of_sizes(n as usize, &sb) / weight_of_sizes(n as usize, &sa);
                        let bound = BigRational::one()
                            + BigRational::new(i64::from(h).into(), i64::from(n).into());
                        assert!(r >= bound, "n={n} {sa:?} vs {sb:?}: {r}");
                    }
                }
            }
        }
    }
    assert_eq!(pairs, 456);
}

#[test]
fn sigma_increases_until_full() {
    for n in 0..=20usize {
        let values: Vec<u64> = (0..=n + 1).map(|r| sigma(n, r).unwrap()).collect();
        assert_eq!(values[0], 0);
        assert_eq!(values[n + 1], 1 << n);
        assert!(values.windows(2).all(|w| w[0] < w[1]));
    }
}

#[test]
fn degree_upper_bound_fails_on_full_span() {
    // all six layers of P(5): the empty set lies below 31 sets, above n^k = 25
    let (delta, w) = max_degree(6, 2, 5).unwrap();
    assert_eq!((delta, w), (BigUint::from(31u32), 0));
    let (_, upper) = max_degree_sandwich(6, 2, 5).unwrap();
    assert_eq!(upper, BigRational::from_integer(25.into()));
}

#[test]
fn normalized_matching_exhaustive() {
    for n in 1..=5usize {
        for level in 0..n {
            let layer = Family::layer(n, level).unwrap().codes();
            for pick in 0u64..1 << layer.len() {
                let f = Family::from_codes(n, layer.iter().enumerate().filter(|(i, _)| pick >> i & 1 == 1).map(|(_, &c)| c)).unwrap();
                let up = upper_shadow(&f, level + 1).unwrap();
                assert!(
                    f.len() as u64 * binomial(n as u64, level as u64 + 1)
                        <= up.len() as u64 * binomial(n as u64, level as u64)
                );
            }
        }
    }
}

#[test]
fn dbtk_start_levels() {
    for n in 1..=12usize {
        let s = dbtk_scd(n).unwrap();
        for lvl in 0..=n / 2 {
            let starts = s.chains().iter().filter(|c| c.bottom().count_ones() as usize == lvl).count();
            let expected = binomial(n as u64, lvl as u64) - if lvl == 0 { 0 } else { binomial(n as u64, lvl as u64 - 1) };
            assert_eq!(starts as u64, expected);
        }
    }
}

#[test]
fn local_search_is_reproducible_and_bounded() {
    for (n, k, m) in [(5usize, 2usize, 14usize), (6, 3, 50), (5, 3, 27)] {
        let mut cfg = SearchConfig::new(n, k, m, SearchMode::LocalSearch);
        cfg.restarts = 20;
        cfg.seed = 7;
        let a = local_search(&cfg).unwrap();
        cfg.workers = 1;
        let b = local_search(&cfg).unwrap();
        assert_eq!(a.min_value, b.min_value);
        assert_eq!(a.witnesses, b.witnesses);
        assert!(a.min_value <= a.centered_value);
        let f = Family::from_codes(n, a.witnesses[0].iter().copied()).unwrap();
        assert_eq!(f.len(), m);
        assert_eq!(u128::try_from(count_k_chains(&f, k).unwrap()).unwrap(), a.min_value);
    }
}
