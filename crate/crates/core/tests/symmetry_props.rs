mod common;

use std::collections::BTreeSet;

use common::{h_value, random_dist};
use hycone::exactla::rat;
use hycone::hypfamilies::{
    cuts, eval_h, eval_on_cut, full_mask, switch_dist, switch_ineq, BInequality, CutVec,
};
use hycone::symmetry::{
    canonical, canonical_b, factorial, orbit, orbit_size_sym, stabilizer_order, switch_cut, Group,
    PairAction,
};
use proptest::prelude::*;
use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;

fn odd_b(n: usize) -> impl Strategy<Value = Vec<i64>> {
    prop::collection::vec(-3i64..=3, n).prop_map(|mut b| {
        if b.iter().sum::<i64>().rem_euclid(2) == 0 {
            b[0] += if b[0] < 3 { 1 } else { -1 };
        }
        b
    })
}

fn sized_b() -> impl Strategy<Value = Vec<i64>> {
    (3usize..=6).prop_flat_map(odd_b)
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(200))]

    #[test]
    fn switching_is_an_involution(seed in any::<u64>(), n in 3usize..=6, set in any::<u64>()) {
        let d = random_dist(&mut ChaCha8Rng::seed_from_u64(seed), n).to_dist();
        let set = set & full_mask(n);
        prop_assert_eq!(switch_dist(&switch_dist(&d, set), set), d);
    }

    #[test]
    fn switching_pulls_back_slack(seed in any::<u64>(), b in sized_b(), set in any::<u64>()) {
        let n = b.len();
        let d = random_dist(&mut ChaCha8Rng::seed_from_u64(seed), n).to_dist();
        let set = set & full_mask(n);
        let b = BInequality::new(b).unwrap();
        let sb = switch_ineq(&b, set);
        let before = rat(b.rhs) - eval_h(&b, &d).unwrap();
        let after = rat(sb.rhs) - eval_h(&sb, &switch_dist(&d, set)).unwrap();
        prop_assert_eq!(before, after);
        prop_assert_eq!(eval_h(&b, &d).unwrap(), h_value(&b.b, &d));
    }

    #[test]
    fn switching_maps_cuts_to_cuts(n in 2usize..=6, set in any::<u64>()) {
        let set = set & full_mask(n);
        let all: BTreeSet<u64> = cuts(n, true).iter().map(|c| c.set).collect();
        let image: BTreeSet<u64> = cuts(n, true).iter().map(|c| switch_cut(c, set).set).collect();
        prop_assert_eq!(&image, &all);
        for c in cuts(n, true) {
            prop_assert_eq!(switch_dist(&c.to_dist(), set), switch_cut(&c, set).to_dist());
        }
    }

    #[test]
    fn orbit_stabiliser(b in (3usize..=5).prop_flat_map(odd_b)) {
        let n = b.len();
        let x = BInequality::new(b.clone()).unwrap();
        for g in [Group::Sym(n), Group::ARes(n)] {
            let o = orbit(&x, &g, true);
            prop_assert_eq!(o.size * o.stabilizer, g.order());
            prop_assert_eq!(stabilizer_order(&x, &g), o.stabilizer);
            prop_assert_eq!(&canonical(&x, &g).b, &canonical_b(&b, &g));
            prop_assert_eq!(&o.representative.b, &canonical_b(&b, &g));
            prop_assert_eq!(o.members.unwrap().len() as u128, o.size);
        }
        prop_assert_eq!(orbit(&x, &Group::Sym(n), false).size, orbit_size_sym(&b));
    }

    #[test]
    fn cut_values(b in sized_b()) {
        let n = b.len();
        let x = BInequality::new(b.clone()).unwrap();
        for c in cuts(n, true) {
            prop_assert_eq!(rat(eval_on_cut(&x, &c).unwrap()), h_value(&b, &c.to_dist()));
        }
    }
}

#[test]
fn cut_values_exhaustive() {
    // every b with |b_i| ≤ 2 on up to five points, every cut
    for n in 2..=5usize {
        let total = 5usize.pow(n as u32);
        for code in 0..total {
            let b: Vec<i64> = (0..n).map(|k| (code / 5usize.pow(k as u32) % 5) as i64 - 2).collect();
            let Ok(x) = BInequality::new(b.clone()) else { continue };
            for set in 0..1u64 << n {
                let c = CutVec::new(n, set);
                let v = eval_on_cut(&x, &c).unwrap();
                assert_eq!(rat(v), h_value(&b, &c.to_dist()));
                assert!(v <= x.rhs, "{b:?} {set}");
            }
        }
    }
    for n in [6usize] {
        for b in [vec![1, 1, 1, -1, -1, 0], vec![2, 1, 1, -1, -1, -1], vec![1, 1, 1, 1, -1, -2]] {
            let x = BInequality::new(b.clone()).unwrap();
            for c in cuts(n, true) {
                assert_eq!(rat(eval_on_cut(&x, &c).unwrap()), h_value(&b, &c.to_dist()));
            }
        }
    }
}

#[test]
fn group_orders() {
    for n in 2..=6 {
        assert_eq!(Group::Sym(n).order(), factorial(n));
        assert_eq!(Group::ARes(n).order(), factorial(n) << (n - 1));
        assert_eq!(Group::Sym(n).elements().len() as u128, factorial(n));
    }
    let g = PairAction::new(vec![1, 2, 0], 0);
    assert_eq!(g.compose(&g.inverse()), PairAction::identity(3));
}

#[test]
fn known_orbit_sizes() {
    // pentagonal facets of the cut cone on five points
    let b = BInequality::new(vec![1, 1, 1, -1, -1]).unwrap();
    assert_eq!(orbit(&b, &Group::Sym(5), false).size, 10);
    // triangle inequalities on four points
    let b = BInequality::new(vec![1, 1, -1, 0]).unwrap();
    assert_eq!(orbit(&b, &Group::Sym(4), false).size, 12);
}
