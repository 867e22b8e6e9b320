//! The two computation paths agree key by key.

use psifloor::arith::IntSeq;
use psifloor::engine::{absolute_beta, crosscheck, empty_alpha, n_floor_absolute, n_floor_relative};
use psifloor::recursion::{admissible_keys, Evaluator};

#[test]
fn floor_equals_recursion_up_to_degree_two() {
    let mut ev = Evaluator::new();
    let mut checked = 0usize;
    for d in 1u32..=2 {
        for key in admissible_keys(d) {
            let r = crosscheck(d, &key.psi, &key.alpha, &key.beta, &mut ev).unwrap();
            assert!(r.pass(), "{}: floor {} vs recursion {}", key, r.floor, r.recursion);
            checked += 1;
        }
    }
    assert!(checked > 20, "expected a spread of keys, got {checked}");
}

#[test]
fn absolute_equals_relative_specialization_degree_three() {
    for d in 1u32..=3 {
        for key in admissible_keys(d) {
            if !key.alpha.is_zero() || key.beta != absolute_beta(d) {
                continue;
            }
            let abs = n_floor_absolute(d, &key.psi).unwrap();
            let rel = n_floor_relative(d, &key.psi, &empty_alpha(), &key.beta).unwrap();
            assert_eq!(abs, rel, "{key}");
        }
    }
}

#[test]
fn repeated_runs_serialize_identically() {
    let k = IntSeq::base0(&[1, 0, 0, 0, 2]);
    let a = n_floor_absolute(4, &k).unwrap().to_string();
    let b = n_floor_absolute(4, &k).unwrap().to_string();
    assert_eq!(a, b);
    assert_eq!(a, "3/4");
}
