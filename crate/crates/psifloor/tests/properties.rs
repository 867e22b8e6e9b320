//! Property tests: sequence arithmetic, the linear-extension oracle, choice
//! constraints, and the absolute/relative specialization checked diagram by
//! diagram.

use proptest::prelude::*;

use psifloor::arith::{multinomial, IntSeq, SeqBase};
use psifloor::choices::{choice_is_valid, enumerate_choices};
use psifloor::diagram::enumerate_diagrams;
use psifloor::engine::{absolute_beta, empty_alpha};
use psifloor::marking::{count_linear_extensions, AddedKind, AddedVertex, MarkingPoset};
use psifloor::recursion::admissible_keys;
use psifloor::relative::{
    count_relative_markings, enumerate_compatible_pairs, enumerate_relative_choices,
    relative_choice_multiplicity, relative_diagram_multiplicity,
};

fn small_seq(base: SeqBase) -> impl Strategy<Value = IntSeq> {
    proptest::collection::vec(0u64..4, 0..5).prop_map(move |v| IntSeq::new(base, &v))
}

proptest! {
    #[test]
    fn add_sub_round_trip(a in small_seq(SeqBase::One), b in small_seq(SeqBase::One)) {
        let sum = &a + &b;
        prop_assert_eq!(sum.try_sub(&b), Some(a.clone()));
        prop_assert!(a.le(&sum));
        prop_assert!(b.le(&sum));
    }

    #[test]
    fn le_is_a_partial_order(a in small_seq(SeqBase::Zero), b in small_seq(SeqBase::Zero), c in small_seq(SeqBase::Zero)) {
        prop_assert!(a.le(&a));
        if a.le(&b) && b.le(&a) {
            prop_assert_eq!(&a, &b);
        }
        if a.le(&b) && b.le(&c) {
            prop_assert!(a.le(&c));
        }
    }

    #[test]
    fn multinomial_times_part_factorials_is_whole_factorial(
        whole in small_seq(SeqBase::One),
        splits in proptest::collection::vec(0u64..3, 0..4),
    ) {
        // carve parts out of `whole` by repeated halving of what remains
        let mut parts = Vec::new();
        let mut rem = whole.clone();
        for s in splits {
            let entries: Vec<u64> = rem.entries().iter().map(|&e| e.min(s)).collect();
            let part = IntSeq::new(SeqBase::One, &entries);
            rem = rem.try_sub(&part).unwrap();
            parts.push(part);
        }
        let m = multinomial(&whole, &parts).unwrap();
        let mut prod = m;
        for p in &parts {
            prod *= p.factorial_product();
        }
        prod *= rem.factorial_product();
        prop_assert_eq!(prod, whole.factorial_product());
    }
}

/// Independent oracle: count admissible sequences element by element.
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

fn random_poset() -> impl Strategy<Value = MarkingPoset> {
    (2usize..=5).prop_flat_map(|base_len| {
        let added = proptest::collection::vec(
            (0usize..base_len, proptest::option::of(0usize..base_len), 1u32..3),
            0..=4,
        )
        .prop_map(move |raw| {
            raw.into_iter()
                .map(|(attach, before, weight)| {
                    let before = before.filter(|&b| b > attach);
                    let kind = if before.is_some() { AddedKind::Subdivision } else { AddedKind::End };
                    AddedVertex { kind, weight, attach, before }
                })
                .collect::<Vec<_>>()
        });
        added.prop_map(move |added| MarkingPoset { base_len, added })
    })
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(128))]
    #[test]
    fn extension_dp_matches_brute_force(poset in random_poset()) {
        prop_assert_eq!(count_linear_extensions(&poset).unwrap(), brute_force_extensions(&poset));
    }
}

#[test]
fn enumerated_choices_satisfy_constraints() {
    for (d, k) in [
        (2u32, IntSeq::base0(&[5])),
        (3, IntSeq::base0(&[4, 2])),
        (4, IntSeq::base0(&[1, 0, 0, 0, 2])),
    ] {
        for diagram in enumerate_diagrams(d, &k).unwrap() {
            for choice in enumerate_choices(&diagram) {
                assert!(choice_is_valid(&diagram, &choice), "{diagram}");
            }
        }
    }
}

/// The relative pipeline at `alpha = ()`, `beta = (d)` reproduces the
/// absolute pipeline piece by piece: same diagrams, same multiplicities,
/// matching choice sets with equal weights and marking counts.
#[test]
fn specialization_matches_diagram_by_diagram() {
    for d in 1u32..=3 {
        for key in admissible_keys(d) {
            if !key.alpha.is_zero() || key.beta != absolute_beta(d) {
                continue;
            }
            let diagrams = enumerate_diagrams(d, &key.psi).unwrap();
            let rel_diagrams =
                psifloor::diagram::enumerate_diagrams_relative(d, &key.psi, key.beta.size()).unwrap();
            // the relative enumeration may carry extra diagrams whose
            // degree-0 vertices need ends of weight > 1; with beta = (d)
            // those admit no compatible pair
            for extra in rel_diagrams.iter().filter(|r| !diagrams.contains(r)) {
                let pairs = enumerate_compatible_pairs(extra, &empty_alpha(), &key.beta).unwrap();
                assert!(pairs.is_empty(), "extra diagram with pairs: {extra}");
            }
            for d in &diagrams {
                assert!(rel_diagrams.contains(d), "missing diagram {d}");
            }
            for diagram in &diagrams {
                let pairs =
                    enumerate_compatible_pairs(diagram, &empty_alpha(), &key.beta).unwrap();
							                assert_eq!(pairs.len(), 1, "{diagram}");
                let pair = &pairs[0];
                assert_eq!(
                    relative_diagram_multiplicity(diagram, pair),
                    diagram.multiplicity(),
                    "{diagram}"
                );
                let abs: Vec<_> = enumerate_choices(diagram)
                    .into_iter()
                    .map(|c| {
                        let m = psifloor::choices::choice_multiplicity(diagram, &c);
                        let nu = psifloor::marking::count_markings(diagram, &c);
                        (m, nu)
                    })
                    .collect();
                let rel: Vec<_> = enumerate_relative_choices(diagram, pair)
                    .into_iter()
                    .map(|c| {
                        let m = relative_choice_multiplicity(diagram, pair, &c);
                        let nu = count_relative_markings(diagram, pair, &c);
                        (m, nu)
                    })
                    .collect();
                let mut abs_sorted = abs.clone();
                let mut rel_sorted = rel.clone();
                abs_sorted.sort();
                rel_sorted.sort();
                assert_eq!(abs_sorted, rel_sorted, "{diagram}");
            }
        }
    }
}
