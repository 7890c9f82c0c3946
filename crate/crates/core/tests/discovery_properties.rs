use edisco::discovery::{build_dm_fast, build_dm_reference, sort_evalues, DiscoveryMatrix};
use edisco::merge::{EValueVec, UStatOrder};
use edisco::sim::{gen_study, SimConfig, SplitMix64};
use proptest::prelude::*;

fn order(n: usize) -> UStatOrder {
    UStatOrder::new(n).unwrap()
}

fn fast(v: &[f64], n: usize) -> DiscoveryMatrix {
    build_dm_fast(&sort_evalues(&EValueVec::new(v.to_vec()).unwrap()), order(n))
}

fn reference(v: &[f64], n: usize) -> DiscoveryMatrix {
    build_dm_reference(&sort_evalues(&EValueVec::new(v.to_vec()).unwrap()), order(n))
}

fn rel_close(a: f64, b: f64) -> bool {
    a == b || (a - b).abs() <= 1e-9 * a.abs().max(b.abs())
}

fn study(k: usize, seed: u64) -> Vec<f64> {
    gen_study(&SimConfig::new(k, k / 2, -3.0, seed).unwrap()).e.into_inner()
}

#[test]
fn engines_agree_on_study_draws() {
    for seed in 0..100u64 {
        let k = 1 + (seed as usize * 7) % 25;
        let v = study(k, seed);
        for n in 1..=3 {
            let (a, b) = (fast(&v, n), reference(&v, n));
            for ((r, j, x), y) in a.entries().iter().zip(b.entries().values()) {
                assert!(rel_close(x, *y), "seed {seed} n={n} ({r},{j}): {x} vs {y}");
            }
        }
    }
}

#[test]
fn engines_agree_with_zeros_and_infinities() {
    let v = [0.0, 3.0, f64::INFINITY, 0.5, 0.0, 12.0, f64::INFINITY];
    for n in 1..=3 {
        assert_eq!(fast(&v, n).entries(), reference(&v, n).entries(), "n={n}");
    }
}

proptest! {
    #[test]
    fn engines_agree(v in prop::collection::vec(0.0f64..30.0, 1..14), n in 1usize..4) {
        let (a, b) = (fast(&v, n), reference(&v, n));
        for (x, y) in a.entries().values().iter().zip(b.entries().values()) {
            prop_assert!(rel_close(*x, *y));
        }
    }

    #[test]
    fn mean_rows_nonincreasing(v in prop::collection::vec(0.0f64..30.0, 1..30)) {
        let dm = fast(&v, 1);
        for r in 1..=dm.k() {
            for w in dm.entries().row(r).windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
    }

    // Removing the largest element of a multiset lowers U_n when the
    // removed value is at least one; with all e-values >= 1 that covers
    // every candidate.
    #[test]
    fn rows_nonincreasing_above_one(v in prop::collection::vec(1.0f64..30.0, 1..30), n in 2usize..4) {
        let dm = fast(&v, n);
        for r in 1..=dm.k() {
            for w in dm.entries().row(r).windows(2) {
                prop_assert!(w[1] <= w[0] * (1.0 + 1e-12));
            }
        }
    }

    #[test]
    fn squaring_bound_off_the_corner(v in prop::collection::vec(0.0f64..30.0, 1..30)) {
        let (u1, u2) = (fast(&v, 1), fast(&v, 2));
        let k = u1.k();
        for ((r, j, a), b) in u1.entries().iter().zip(u2.entries().values()) {
            if (r, j) != (k, k) {
                prop_assert!(*b <= a * a * (1.0 + 1e-12) + 1e-300, "({},{}): {} > {}^2", r, j, b, a);
            }
        }
    }

    #[test]
    fn mean_scale_equivariance(v in prop::collection::vec(0.0f64..30.0, 1..20), c in 0.01f64..100.0) {
        let scaled: Vec<f64> = v.iter().map(|x| x * c).collect();
        let (a, b) = (fast(&v, 1), fast(&scaled, 1));
        for (x, y) in a.entries().values().iter().zip(b.entries().values()) {
            prop_assert!(rel_close(x * c, *y) || (x * c - y).abs() < 1e-12);
        }
    }

    #[test]
    fn input_order_irrelevant(v in prop::collection::vec(0.0f64..30.0, 1..20), n in 1usize..4, seed in any::<u64>()) {
        let mut w = v.clone();
        let mut rng = SplitMix64::new(seed);
        for i in (1..w.len()).rev() {
            w.swap(i, (rng.next_u64() % (i as u64 + 1)) as usize);
        }
        let (a, b) = (fast(&v, n), fast(&w, n));
        prop_assert_eq!(a.entries(), b.entries());
    }

    #[test]
    fn entries_nonnegative(v in prop::collection::vec(0.0f64..30.0, 1..20), n in 1usize..4) {
        prop_assert!(fast(&v, n).entries().values().iter().all(|&x| x >= 0.0));
    }
}

// The corner cell (K, K) is the smallest e-value on its own under every
// U_n, so squaring cannot bound it when that value is below one. Likewise
// the last row holds U_n of the j smallest values with no padding, and
// for n >= 2 a product of values below one shrinks as values are added.
#[test]
fn corner_and_last_row_exceptions() {
    let v = [0.5, 0.6, 4.0];
    let (u1, u2) = (fast(&v, 1), fast(&v, 2));
    assert_eq!(u1.query(3, 3).unwrap(), 0.5);
    assert_eq!(u2.query(3, 3).unwrap(), 0.5);
    assert!(u2.query(3, 3).unwrap() > u1.query(3, 3).unwrap().powi(2));

    // U_2(0.5, 0.6) = 0.3 < U_2(0.5) = 0.5
    assert!((u2.query(3, 2).unwrap() - 0.3).abs() < 1e-15);
    assert!(u2.query(3, 2).unwrap() < u2.query(3, 3).unwrap());
}

#[test]
fn constant_input_under_higher_orders() {
    for n in 2..=3 {
        let dm = fast(&[2.0; 6], n);
        for (r, j, v) in dm.entries().iter() {
            let arity = r - j + 1;
            // Padding only raises the arity, so the unpadded block wins.
            let want = 2f64.powi(arity.min(n) as i32);
            assert_eq!(v, want, "n={n} ({r},{j})");
        }
    }
}

#[test]
fn tie_order_cannot_matter() {
    let a = [3.0, 1.0, 3.0, 0.2, 3.0];
    let b = [0.2, 3.0, 3.0, 3.0, 1.0];
    for n in 1..=3 {
        assert_eq!(fast(&a, n).entries(), fast(&b, n).entries());
    }
}

#[test]
fn thread_count_does_not_change_bits() {
    let v = study(120, 9);
    let run = |threads: usize, n: usize| {
        rayon::ThreadPoolBuilder::new()
            .num_threads(threads)
            .build()
            .unwrap()
            .install(|| fast(&v, n))
    };
    for n in 1..=3 {
        let one = run(1, n);
        let four = run(4, n);
        let bits = |m: &DiscoveryMatrix| m.entries().values().iter().map(|x| x.to_bits()).collect::<Vec<_>>();
        assert_eq!(bits(&one), bits(&four));
    }
}
