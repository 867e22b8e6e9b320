//! Acceptance suite: one test per criterion, each printing a pass/fail line.
//!
//! Every expected value is pinned exactly (all arithmetic is rational);
//! runtime ceilings are asserted where the criterion carries one.

use std::time::{Duration, Instant};

use psifloor::arith::{factorial, rat_big, rat_int, stirling2, IntSeq, Rational};
use psifloor::engine::{absolute_beta, crosscheck, empty_alpha, n_floor_absolute, n_floor_relative};
use psifloor::marking::{count_linear_extensions, AddedKind, AddedVertex, MarkingPoset};
use psifloor::recursion::{admissible_keys, n_to_tilde, Evaluator, InvariantKey};

fn report(criterion: &str, ok: bool, detail: String) {
    println!("criterion {criterion}: {} ({detail})", if ok { "pass" } else { "FAIL" });
    assert!(ok, "criterion {criterion} failed: {detail}");
}

#[test]
fn criterion_1_worked_example_fixtures() {
    let start = Instant::now();
    let (results, all_pass) = psifloor_cli::verify::run("");
    let elapsed = start.elapsed();
    for f in &results {
        match &f.outcome {
            Ok(d) => println!("  fixture PASS {}: {d}", f.name),
            Err(d) => println!("  fixture FAIL {}: {d}", f.name),
        }
    }
    let in_time = elapsed < Duration::from_secs(5);
    let failing: Vec<String> = results
        .iter()
        .filter_map(|f| f.outcome.as_ref().err().map(|e| format!("{}: {e}", f.name)))
        .collect();
    report(
        "1 (worked-example fixtures, < 5 s)",
        all_pass && in_time,
        format!(
            "{}/{} fixtures pass in {elapsed:?}{}{}",
            results.len() - failing.len(),
            results.len(),
            if failing.is_empty() { "" } else { "; failing: " },
            failing.join("; ")
        ),
    );
}

#[test]
fn criterion_2_path_equality() {
    let start = Instant::now();
    let mut ev = Evaluator::new();
    let mut checked = 0usize;
    for d in 1u32..=3 {
        for key in admissible_keys(d) {
            let r = crosscheck(d, &key.psi, &key.alpha, &key.beta, &mut ev).unwrap();
            assert!(r.pass(), "{}: enumeration {} vs recursion {}", key, r.floor, r.recursion);
            checked += 1;
        }
    }
    // degree-4 sample: every 16th admissible key
    for key in admissible_keys(4).iter().step_by(16) {
        let r = crosscheck(4, &key.psi, &key.alpha, &key.beta, &mut ev).unwrap();
        assert!(r.pass(), "{}: enumeration {} vs recursion {}", key, r.floor, r.recursion);
        checked += 1;
    }
    let elapsed = start.elapsed();
    report(
        "2 (enumeration = recursion, <= 10 min)",
        elapsed <= Duration::from_secs(600),
        format!("{checked} keys agree exactly in {elapsed:?}"),
    );
}

#[test]
fn criterion_3_classical_counts() {
    let start = Instant::now();
    let mut ev = Evaluator::new();
    let want: [i64; 5] = [1, 1, 12, 620, 87304];
    for (i, &w) in want.iter().enumerate() {
        let d = (i + 1) as u32;
        let key = InvariantKey::absolute(d, IntSeq::base0(&[3 * d as u64 - 1])).unwrap();
        let got = ev.invariant_n(&key);
        assert_eq!(got, Rational::from_integer(w.into()), "d={d}");
    }
    let elapsed = start.elapsed();
    report(
        "3 (N_d = 1, 1, 12, 620, 87304, < 10 s)",
        elapsed < Duration::from_secs(10),
        format!("all five counts exact in {elapsed:?}"),
    );
}

#[test]
fn criterion_4_stirling_identity() {
    for e in 0u64..=12 {
        for f in 0u64..=12 {
            let mut lhs = Rational::from_integer(0.into());
            for g in 0..=f {
                lhs += rat_big(stirling2(e, g)) / rat_big(factorial(f - g));
            }
            // 0^0 = 1; within u64 range since f, e <= 12
            let pow = if e == 0 { 1 } else { (0..e).fold(1i64, |acc, _| acc * f as i64) };
            let rhs = rat_int(pow) / rat_big(factorial(f));
            assert_eq!(lhs, rhs, "e={e} f={f}");
        }
    }
    report("4 (partition identity, e,f <= 12)", true, "169 exact identities".into());
}

#[test]
fn criterion_5_pivot_independence() {
    let mut ev = Evaluator::new();
    let mut keys_checked = 0usize;
    for d in 1u32..=3 {
        for key in admissible_keys(d) {
            let pivots: Vec<u64> =
                key.psi.indexed().filter(|&(_, c)| c > 0).map(|(a, _)| a).collect();
            if pivots.len() < 2 {
                continue;
            }
            let values: Vec<Rational> =
                pivots.iter().map(|&a| ev.invariant_tilde(&key, a).unwrap()).collect();
            for v in &values[1..] {
                assert_eq!(*v, values[0], "{key}");
            }
            keys_checked += 1;
        }
    }
    report(
        "5 (pivot independence, d <= 3)",
        keys_checked > 0,
        format!("{keys_checked} multi-pivot keys agree across all pivots"),
    );
}

#[test]
fn criterion_6_specialization() {
    let mut types = 0usize;
    for d in 1u32..=4 {
        for key in admissible_keys(d) {
            if !key.alpha.is_zero() || key.beta != absolute_beta(d) {
                continue;
            }
            let abs = n_floor_absolute(d, &key.psi).unwrap();
            let rel = n_floor_relative(d, &key.psi, &empty_alpha(), &key.beta).unwrap();
            assert_eq!(abs, rel, "{key}");
            types += 1;
        }
    }
    report(
        "6 (absolute = relative specialization, d <= 4)",
        types > 0,
        format!("{types} types agree exactly"),
    );
}

/// Deterministic xorshift generator so the 500 posets are reproducible.
struct Rng(u64);

impl Rng {
    fn next(&mut self, bound: u64) -> u64 {
        let mut x = self.0;
        x ^= x << 13;
        x ^= x >> 7;
        x ^= x << 17;
        self.0 = x;
        x % bound
    }
}

fn brute_force_extensions(poset: &MarkingPoset) -> u128 {
    fn rec(poset: &MarkingPoset, base_done: usize, placed: &mut Vec<bool>) -> u128 {
        if base_done == poset.base_len && placed.iter().all(|&p| p) {
            return 1;
        }
        let mut total = 0u128;
        if base_done < poset.base_len {
            total += rec(poset, base_done + 1, placed);
        }
        for i in 0..poset.added.len() {
            if placed[i] {
                continue;
            }
            let a = &poset.added[i];
            if a.attach < base_done && a.before.is_none_or(|b| b >= base_done) {
                placed[i] = true;
                total += rec(poset, base_done, placed);
                placed[i] = false;
            }
        }
        total
    }
    rec(poset, 0, &mut vec![false; poset.added.len()])
}

#[test]
fn criterion_7_extension_oracle() {
    let mut rng = Rng(0x5eed_cafe_f00d_1234);
    for case in 0..500u32 {
        let base_len = 1 + rng.next(5) as usize;
        let added_max = 9 - base_len;
        let added_count = rng.next(added_max as u64 + 1) as usize;
        let added: Vec<AddedVertex> = (0..added_count)
            .map(|_| {
                let attach = rng.next(base_len as u64) as usize;
                let weight = 1 + rng.next(3) as u32;
                let before = if attach + 1 < base_len && rng.next(2) == 1 {
                    Some(attach + 1 + rng.next((base_len - attach - 1) as u64) as usize)
                } else {
                    None
                };
                let kind = if before.is_some() {
                    AddedKind::Subdivision
                } else if rng.next(2) == 0 {
                    AddedKind::End
                } else {
                    AddedKind::Beta
                };
                AddedVertex { kind, weight, attach, before }
            })
            .collect();
        let poset = MarkingPoset { base_len, added };
        let dp = count_linear_extensions(&poset).unwrap();
        let brute = brute_force_extensions(&poset);
        assert_eq!(dp, brute, "case {case}: {poset:?}");
        // the sibling quotient divides the labeled count exactly
        let quotient: u128 = poset
            .sibling_groups()
            .iter()
            .map(|g| (1..=g.len() as u128).product::<u128>())
            .product();
        assert_eq!(dp % quotient, 0, "case {case}: {poset:?}");
    }
    report("7 (extension oracle, 500 random posets)", true, "DP = brute force, quotient integral".into());
}

#[test]
fn criterion_8_conversion_identity() {
    let mut ev = Evaluator::new();
    let mut checked = 0usize;
    for d in 1u32..=3 {
        for key in admissible_keys(d) {
            let n = ev.invariant_n(&key);
            let pivot = key.psi.indexed().find(|&(_, c)| c > 0).unwrap().0;
            let tilde = ev.invariant_tilde(&key, pivot).unwrap();
            assert_eq!(tilde, n_to_tilde(&n, &key.psi, &key.beta), "{key}");
            checked += 1;
        }
    }
    // and on every key the evaluator memoized along the way
    let memoized: Vec<(InvariantKey, Rational)> =
        ev.n_cache().map(|(k, v)| (k.clone(), v.clone())).collect();
    for (key, n) in &memoized {
        let pivot = key.psi.indexed().find(|&(_, c)| c > 0).unwrap().0;
        let tilde = ev.invariant_tilde(key, pivot).unwrap();
        assert_eq!(&tilde, &n_to_tilde(n, &key.psi, &key.beta), "{key}");
        checked += 1;
    }
    report(
        "8 (tilde = beta! k!/|k|! N on every computed key)",
        checked > 0,
        format!("{checked} keys verified"),
    );
}
