mod common;

use common::random_cover_instance;
use csea_core::description::{
    branch_choice, description_cost, description_length, dl_optimise, exceptions, gain,
    lower_bound, prune_lower_bounded, prune_useless, DlOptions,
};
use csea_core::oracle::{brute_force_dl, greedy_dl};
use csea_core::VertexSet;
use proptest::prelude::*;
use rand::seq::SliceRandom;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

fn refs(sets: &[VertexSet]) -> Vec<&VertexSet> {
    sets.iter().collect()
}

fn indexed(sets: &[VertexSet]) -> Vec<(usize, &VertexSet)> {
    sets.iter().enumerate().collect()
}

fn all_options() -> [DlOptions; 4] {
    let mut out = [DlOptions::default(); 4];
    for (i, o) in out.iter_mut().enumerate() {
        o.prune_useless = i & 1 == 1;
        o.prune_lower_bounded = i & 2 == 2;
    }
    out
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn branch_and_bound_is_exact(seed in any::<u64>(), n in 2usize..14, m in 0usize..11) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, covering) = random_cover_instance(&mut rng, n, m);
        let vocab = n * rng.random_range(1..4);
        let want = brute_force_dl(&u, &refs(&covering), vocab).unwrap();
        for opts in all_options() {
            let out = dl_optimise(&u, &indexed(&covering), vocab, opts).unwrap();
            prop_assert_eq!(out.dl(), want);
            let chosen: Vec<&VertexSet> = out.best.entities.iter().map(|&e| &covering[e]).collect();
            prop_assert_eq!(description_length(&chosen, &u, vocab).unwrap(), want);
            prop_assert_eq!(&exceptions(&chosen, &u).unwrap(), &out.best.exceptions);
        }
        prop_assert!(greedy_dl(&u, &refs(&covering), vocab) >= want);
    }

    #[test]
    fn bound_and_gain_properties(seed in any::<u64>(), n in 2usize..16, m in 1usize..10) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, covering) = random_cover_instance(&mut rng, n, m);
        let vocab = 3 * n;
        let mut order: Vec<usize> = (0..m).collect();
        order.shuffle(&mut rng);
        let split = rng.random_range(0..=m);
        let x: Vec<&VertexSet> = order[..split].iter().map(|&i| &covering[i]).collect();
        let cand: Vec<&VertexSet> = order[split..].iter().map(|&i| &covering[i]).collect();
        let exc = exceptions(&x, &u).unwrap();
        let mut gains: Vec<usize> = cand.iter().map(|c| gain(&[c], &exc)).collect();
        let lb = lower_bound(x.len(), exc.len(), &gains, vocab, n);
        gains.sort_unstable_by(|a, b| b.cmp(a));
        for _ in 0..20 {
            let y: Vec<&VertexSet> = cand.iter().copied().filter(|_| rng.random_bool(0.5)).collect();
            let mut xy = x.clone();
            xy.extend(&y);
            prop_assert!(description_length(&xy, &u, vocab).unwrap() >= lb);
            let g = gain(&y, &exc);
            prop_assert!(g <= gains[..y.len()].iter().sum::<usize>());
            // the gain is the number of current exceptions outside some member of Y
            let union = exc.iter().filter(|&v| y.iter().any(|s| !s.contains(v))).count();
            prop_assert_eq!(g, union);
            prop_assert_eq!(g, exc.len() - exceptions(&xy, &u).unwrap().len());
        }
    }

    #[test]
    fn pruned_candidates_and_branch_choice(seed in any::<u64>(), n in 2usize..14, m in 0usize..9) {
        let mut rng = ChaCha8Rng::seed_from_u64(seed);
        let (u, covering) = random_cover_instance(&mut rng, n, m);
        let cand = refs(&covering);
        let exc = exceptions(&[], &u).unwrap();
        let useful = prune_useless(&cand, &exc);
        for i in 0..m {
            prop_assert_eq!(useful.contains(&i), gain(&[cand[i]], &exc) > 0);
        }
        let kept = prune_lower_bounded(&cand, &exc);
        let after: Vec<VertexSet> = cand.iter().map(|c| exc.intersection(c)).collect();
        for i in 0..m {
            let dominated = (0..m).any(|j| {
                j != i && after[j].is_subset(&after[i]) && (after[j] != after[i] || j < i)
            });
            prop_assert_eq!(kept.contains(&i), !dominated);
        }
        let vocab = 2 * n;
        let scan = (0..m)
            .map(|i| (description_length(&[cand[i]], &u, vocab).unwrap(), i))
            .min_by(|a, b| a.0.total_cmp(&b.0).then(a.1.cmp(&b.1)))
            .map(|(_, i)| i);
        prop_assert_eq!(branch_choice(&cand, &exc), scan);
    }
}

#[test]
fn pruning_never_costs_nodes() {
    let mut rng = ChaCha8Rng::seed_from_u64(11);
    let mut strictly_fewer = 0;
    for _ in 0..300 {
        let n = rng.random_range(4..16);
        let m = rng.random_range(0..12);
        let (u, covering) = random_cover_instance(&mut rng, n, m);
        let none = DlOptions {
            prune_useless: false,
            prune_lower_bounded: false,
            ..DlOptions::default()
        };
        let slow = dl_optimise(&u, &indexed(&covering), 3 * n, none).unwrap();
        let fast = dl_optimise(&u, &indexed(&covering), 3 * n, DlOptions::default()).unwrap();
        assert_eq!(slow.dl(), fast.dl());
        assert!(fast.nodes <= slow.nodes);
        if fast.nodes < slow.nodes {
            strictly_fewer += 1;
        }
    }
    assert!(strictly_fewer > 0);
}

#[test]
fn cost_shift_per_exception() {
    let base = description_cost(2, 0, 48, 16);
    for e in 1..10 {
        assert_eq!(
            description_cost(2, e, 48, 16) - description_cost(2, e - 1, 48, 16),
            4.0
        );
    }
    assert_eq!(base, 3.0 * 48f64.log2() + 4.0);
}

#[test]
fn time_budget_keeps_a_valid_description() {
    let mut rng = ChaCha8Rng::seed_from_u64(5);
    let (u, covering) = random_cover_instance(&mut rng, 60, 40);
    let opts = DlOptions {
        time_budget: Some(std::time::Duration::ZERO),
        ..DlOptions::default()
    };
    let out = dl_optimise(&u, &indexed(&covering), 180, opts).unwrap();
    assert!(!out.exact);
    let chosen: Vec<&VertexSet> = out.best.entities.iter().map(|&e| &covering[e]).collect();
    assert_eq!(description_length(&chosen, &u, 180).unwrap(), out.dl());
}
