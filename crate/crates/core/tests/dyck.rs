use std::collections::{BTreeSet, HashMap};

use num_bigint::BigUint;
use spikelab::dyck::{glue, preimage_bound, reconstruct_preimages, EdgePath, Glued};

fn preimage_classes(n: u32, p: u32, s_n: usize) -> HashMap<Glued, BTreeSet<EdgePath>> {
    let mut classes: HashMap<Glued, BTreeSet<EdgePath>> = HashMap::new();
    for path in EdgePath::all(n, p, s_n) {
        if path.is_even() && path.bottom.contains(&1) {
            classes.entry(glue(&path).unwrap()).or_default().insert(path);
        }
    }
    classes
}

#[test]
fn preimage_counts_within_bound() {
    for (n, p) in [(2, 2), (3, 2), (2, 3)] {
        for s_n in 1..=3 {
            for (g, pre) in preimage_classes(n, p, s_n) {
                let bound = preimage_bound(g.s, g.l, g.first_return(), s_n).unwrap();
                assert!(BigUint::from(pre.len()) <= bound, "{:?}: {} preimages, bound {}", g, pre.len(), bound);
            }
        }
    }
}

#[test]
fn reconstruction_recovers_every_preimage() {
    for s_n in 1..=3 {
        for (g, pre) in preimage_classes(2, 2, s_n) {
            let rebuilt: BTreeSet<EdgePath> = reconstruct_preimages(&g).into_iter().collect();
            assert_eq!(rebuilt, pre, "target {:?}", g);
        }
    }
}

#[test]
fn glued_trajectory_is_dyck_with_expected_returns() {
    for (g, _) in preimage_classes(3, 3, 3) {
        let x = g.glued.trajectory().unwrap();
        assert_eq!(x.semilength(), g.glued.len());
        assert!(g.m >= 1 && g.m <= g.glued.len());
        assert!(g.l <= g.s);
    }
}
