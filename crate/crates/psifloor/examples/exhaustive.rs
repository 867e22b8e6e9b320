//! Exhaustive cross-validation beyond the acceptance scale. Not part of the
//! test suite; run with --release.

use psifloor::arith::IntSeq;
use psifloor::engine::crosscheck;
use psifloor::recursion::{admissible_keys, Evaluator};

fn main() {
    let mut ev = Evaluator::new();
    let start = std::time::Instant::now();
    let mut checked = 0usize;
    for d in 1u32..=4 {
        for key in admissible_keys(d) {
            let r = crosscheck(d, &key.psi, &key.alpha, &key.beta, &mut ev).unwrap();
            assert!(r.pass(), "{}: {} vs {}", key, r.floor, r.recursion);
            checked += 1;
        }
    }
    println!("all {} keys with d <= 4 agree ({:?})", checked, start.elapsed());

    // degree-5 spot checks, including keys with degree-0 vertices and
    // higher-weight tangencies
    let spots = [
        (5u32, vec![14u64], vec![], vec![5u64]),
        (5, vec![5, 0, 1, 1], vec![1], vec![2, 1]),
        (5, vec![10, 1], vec![0, 1], vec![3]),
        (5, vec![8, 0, 0, 1], vec![], vec![1, 2]),
    ];
    for (d, k, a, b) in spots {
        let key_k = IntSeq::base0(&k);
        let alpha = IntSeq::base1(&a);
        let beta = IntSeq::base1(&b);
        let t = std::time::Instant::now();
        let r = crosscheck(d, &key_k, &alpha, &beta, &mut ev).unwrap();
        assert!(r.pass(), "d={d} k={key_k}: {} vs {}", r.floor, r.recursion);
        println!("d={d} k=({key_k}) alpha=({alpha}) beta=({beta}): {} ({:?})", r.floor, t.elapsed());
    }
}
