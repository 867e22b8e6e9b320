//! Relative Psi-floor diagrams: tangency data distributed over vertices.
//!
//! Fixed tangencies `alpha` and free tangencies `beta` with a line are
//! distributed over the diagram vertices as a compatible pair of sequence
//! collections. Free tangency ends of weight `i` replace the weight-1 end
//! edges of the absolute theory; fixed ends are never choosable and join the
//! marking as alpha-vertices that come last, with weakly increasing weights.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{rat_big, rat_int, IntSeq, Rational, SeqBase};
use crate::diagram::PsiFloorDiagram;
use crate::marking::{AddedKind, AddedVertex, MarkingPoset};

/// Per-vertex tangency sequences `alpha(v)`, `beta(v)`, compatible with a
/// diagram: sums reproduce `(alpha, beta)`, `I(alpha(v) + beta(v)) =
/// d_v - div(v)` everywhere, and degree-0 vertices carry no fixed ends.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CompatiblePair {
    pub alpha: Vec<IntSeq>,
    pub beta: Vec<IntSeq>,
}

impl CompatiblePair {
    pub fn alpha_total(&self) -> IntSeq {
        self.alpha.iter().fold(IntSeq::zero(SeqBase::One), |acc, a| &acc + a)
    }

    pub fn beta_total(&self) -> IntSeq {
        self.beta.iter().fold(IntSeq::zero(SeqBase::One), |acc, b| &acc + b)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum RelativeError {
    /// `I(alpha + beta)` must equal the diagram degree.
    TangencyWeight { expected: u64, got: u64 },
}

impl fmt::Display for RelativeError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            RelativeError::TangencyWeight { expected, got } => {
                write!(f, "tangency condition I(alpha+beta) = d violated: expected {expected}, got {got}")
            }
        }
    }
}

impl core::error::Error for RelativeError {}

/// All pairs compatible with the diagram and `(alpha, beta)`, exactly once,
/// vertices processed in diagram order.
pub fn enumerate_compatible_pairs(
    diagram: &PsiFloorDiagram,
    alpha: &IntSeq,
    beta: &IntSeq,
) -> Result<Vec<CompatiblePair>, RelativeError> {
    let d = diagram.degree() as u64;
    let got = alpha.weight() + beta.weight();
    if got != d {
        return Err(RelativeError::TangencyWeight { expected: d, got });
    }
    let n = diagram.vertex_count();
    let mut out = Vec::new();
    let mut acc_alpha: Vec<IntSeq> = alloc::vec![IntSeq::zero(SeqBase::One); n];
    let mut acc_beta: Vec<IntSeq> = alloc::vec![IntSeq::zero(SeqBase::One); n];
    fn rec(
        diagram: &PsiFloorDiagram,
        v: usize,
        alpha_left: &IntSeq,
        beta_left: &IntSeq,
        acc_alpha: &mut Vec<IntSeq>,
        acc_beta: &mut Vec<IntSeq>,
        out: &mut Vec<CompatiblePair>,
    ) {
        if v == diagram.vertex_count() {
            if alpha_left.is_zero() && beta_left.is_zero() {
                out.push(CompatiblePair { alpha: acc_alpha.clone(), beta: acc_beta.clone() });
            }
            return;
        }
        let vx = diagram.vertices()[v];
        let target = vx.degree as i64 - diagram.divergence(v);
        debug_assert!(target >= 0);
        let target = target as u64;
        if !vx.is_floor() {
            // all adjacent ends sit at the Psi-point: no fixed ends, and
            // exactly a_v + 2 - val(v) free ends of total weight -div(v)
            let dropped = vx.psi as i64 + 2 - diagram.valence(v) as i64;
            if dropped < 0 {
                return;
            }
            for b in beta_left.subsequences() {
                if b.size() != dropped as u64 || b.weight() != target {
                    continue;
                }
                let rest = beta_left.try_sub(&b).unwrap();
                acc_beta[v] = b;
                rec(diagram, v + 1, alpha_left, &rest, acc_alpha, acc_beta, out);
                acc_beta[v] = IntSeq::zero(SeqBase::One);
            }
            return;
        }
        for a in alpha_left.subsequences() {
            if a.weight() > target {
                continue;
            }
            let alpha_rest = alpha_left.try_sub(&a).unwrap();
            for b in beta_left.subsequences() {
                if a.weight() + b.weight() != target {
                    continue;
                }
                let beta_rest = beta_left.try_sub(&b).unwrap();
                acc_alpha[v] = a.clone();
                acc_beta[v] = b;
                rec(diagram, v + 1, &alpha_rest, &beta_rest, acc_alpha, acc_beta, out);
                acc_alpha[v] = IntSeq::zero(SeqBase::One);
                acc_beta[v] = IntSeq::zero(SeqBase::One);
            }
        }
    }
    rec(diagram, 0, alpha, beta, &mut acc_alpha, &mut acc_beta, &mut out);
    Ok(out)
}

/// Relative diagram multiplicity
/// `mu_rel(D, {beta(v)}) = I^beta * prod w(e)^2
///   * prod_{e at a degree-0 vertex} 1/w(e) * prod_{d_v = 0} 1/beta(v)!`.
///
/// The degree-0 weight correction runs over all adjacent edges of the
/// augmented diagram: the vertex's own free ends sit at the Psi-point as
/// well, so their `I^beta` contribution is divided back out.
pub fn relative_diagram_multiplicity(diagram: &PsiFloorDiagram, pair: &CompatiblePair) -> Rational {
    let beta = pair.beta_total();
    let mut m = rat_big(beta.power_product());
    for e in diagram.edges() {
        m *= rat_int(e.weight as i64) * rat_int(e.weight as i64);
        if diagram.vertices()[e.src].degree == 0 || diagram.vertices()[e.tgt].degree == 0 {
            m /= rat_int(e.weight as i64);
        }
    }
    for (v, vx) in diagram.vertices().iter().enumerate() {
        if vx.degree == 0 {
            m /= rat_big(pair.beta[v].power_product());
            m /= rat_big(pair.beta[v].factorial_product());
        }
    }
    m
}

/// Per-vertex part of a relative edge choice: chosen internal edges plus the
/// chosen free-end counts `c(v)` per weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeVertexChoice {
    pub internal: Vec<usize>,
    pub beta_counts: IntSeq,
}

impl Default for RelativeVertexChoice {
    fn default() -> Self {
        RelativeVertexChoice { internal: Vec::new(), beta_counts: IntSeq::zero(SeqBase::One) }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct RelativeChoice {
    pub per_vertex: Vec<RelativeVertexChoice>,
}

impl RelativeChoice {
    pub fn chosen_at(&self, v: usize) -> &RelativeVertexChoice {
        &self.per_vertex[v]
    }

    pub fn size_at(&self, v: usize) -> u64 {
        self.per_vertex[v].internal.len() as u64 + self.per_vertex[v].beta_counts.size()
    }
}

/// All relative edge choices: `|C(v)| = a_v + 2 - 2 d_v` objects per floor,
/// drawn from internal edges between floors and the floor's own free ends;
/// fixed (alpha) ends are never choosable.
pub fn enumerate_relative_choices(diagram: &PsiFloorDiagram, pair: &CompatiblePair) -> Vec<RelativeChoice> {
    let n = diagram.vertex_count();
    let mut out = Vec::new();
    let mut acc: Vec<RelativeVertexChoice> = alloc::vec![RelativeVertexChoice::default(); n];
    let mut claimed = alloc::vec![false; diagram.edges().len()];
    fn fill(
        diagram: &PsiFloorDiagram,
        pair: &CompatiblePair,
        v: usize,
        acc: &mut Vec<RelativeVertexChoice>,
        claimed: &mut Vec<bool>,
        out: &mut Vec<RelativeChoice>,
    ) {
        if v == diagram.vertex_count() {
            out.push(RelativeChoice { per_vertex: acc.clone() });
            return;
        }
        let vx = diagram.vertices()[v];
        if !vx.is_floor() {
            fill(diagram, pair, v + 1, acc, claimed, out);
            return;
        }
        let need = vx.choice_size();
        debug_assert!(need >= 0);
        let need = need as u64;
        let mut candidates: Vec<usize> = Vec::new();
        for (i, e) in diagram.edges().iter().enumerate() {
            if claimed[i] || (e.src != v && e.tgt != v) {
                continue;
            }
            let other = if e.src == v { e.tgt } else { e.src };
            if diagram.vertices()[other].degree > 0 {
                candidates.push(i);
            }
        }
        for mask in 0u32..(1 << candidates.len()) {
            let picked = mask.count_ones() as u64;
            if picked > need {
                continue;
            }
            let internal: Vec<usize> = candidates
                .iter()
                .enumerate()
                .filter(|&(i, _)| mask & (1 << i) != 0)
                .map(|(_, &e)| e)
                .collect();
            for counts in bounded_compositions(&pair.beta[v], need - picked) {
                for &e in &internal {
                    claimed[e] = true;
                }
                acc[v] = RelativeVertexChoice { internal: internal.clone(), beta_counts: counts };
                fill(diagram, pair, v + 1, acc, claimed, out);
                acc[v] = RelativeVertexChoice::default();
                for &e in &internal {
                    claimed[e] = false;
                }
            }
        }
    }
    fill(diagram, pair, 0, &mut acc, &mut claimed, &mut out);
    out
}

/// Sequences `c <= bound` with `|c| = total`, lexicographic.
fn bounded_compositions(bound: &IntSeq, total: u64) -> Vec<IntSeq> {
    bound.subsequences().into_iter().filter(|c| c.size() == total).collect()
}

/// Relative choice multiplicity
/// `mu_rel(C) = prod_v mu_rel_{v,C(v)} * prod_{e in C(v)} 1/w(e)
///              * prod_v 1/c(v)!`
/// with local factors `(d^i/d!)(d^o/d!)` where `o` also counts the fixed
/// ends `|alpha(v)|`. Every chosen edge contributes its weight factor,
/// chosen free ends included; `I^{c(v)}` is exactly what cancels against the
/// `I^beta` of the diagram multiplicity when a free end is chosen.
pub fn relative_choice_multiplicity(
    diagram: &PsiFloorDiagram,
    pair: &CompatiblePair,
    choice: &RelativeChoice,
) -> Rational {
    let mut m = rat_int(1);
    for (v, vx) in diagram.vertices().iter().enumerate() {
        if !vx.is_floor() {
            continue;
        }
        let ch = choice.chosen_at(v);
        let chosen_in = ch.internal.iter().filter(|&&e| diagram.edges()[e].tgt == v).count() as u64;
        let chosen_out = ch.internal.len() as u64 - chosen_in;
        let i = diagram.in_degree(v) as u64 - chosen_in;
        let free_ends = pair.beta[v].size() - ch.beta_counts.size();
        let o = diagram.out_degree(v) as u64 - chosen_out + free_ends + pair.alpha[v].size();
        m *= crate::choices::local_multiplicity(vx.degree, i, o);
        let mut w = BigInt::one();
        for &e in &ch.internal {
            w *= BigInt::from(diagram.edges()[e].weight);
        }
        m /= rat_big(w);
        m /= rat_big(ch.beta_counts.power_product());
        m /= rat_big(ch.beta_counts.factorial_product());
    }
    m
}

/// Poset of the non-alpha part of a relative marking: one beta-vertex per
/// non-chosen free end of a floor, one subdivision vertex per non-chosen
/// edge between floors.
pub fn build_relative_marking_poset(
    diagram: &PsiFloorDiagram,
    pair: &CompatiblePair,
    choice: &RelativeChoice,
) -> MarkingPoset {
    let mut added = Vec::new();
    for (v, vx) in diagram.vertices().iter().enumerate() {
        if !vx.is_floor() {
            continue;
        }
        let ch = choice.chosen_at(v);
        for (i, count) in pair.beta[v].indexed() {
            let free = count - ch.beta_counts.at(i);
            for _ in 0..free {
                added.push(AddedVertex {
                    kind: AddedKind::Beta,
                    weight: i as u32,
                    attach: v,
                    before: None,
                });
            }
        }
    }
    for (i, e) in diagram.edges().iter().enumerate() {
        if diagram.vertices()[e.src].degree == 0 || diagram.vertices()[e.tgt].degree == 0 {
            continue;
        }
        let chosen = choice.per_vertex.iter().any(|ch| ch.internal.contains(&i));
        if !chosen {
            added.push(AddedVertex {
                kind: AddedKind::Subdivision,
                weight: e.weight,
                attach: e.src,
                before: Some(e.tgt),
            });
        }
    }
    MarkingPoset { base_len: diagram.vertex_count(), added }
}

fn fact_u128(n: u64) -> u128 {
    (1..=n as u128).product()
}

/// Orderings of the alpha-vertex suffix up to equivalence: weights must be
/// weakly increasing, so each weight class contributes the interleavings of
/// its attachment multiset.
pub fn alpha_suffix_orderings(pair: &CompatiblePair) -> u128 {
    let total = pair.alpha_total();
    let mut count = 1u128;
    for (i, c) in total.indexed() {
        if c == 0 {
            continue;
        }
        let mut class = fact_u128(c);
        for a in &pair.alpha {
            class /= fact_u128(a.at(i));
        }
        count *= class;
    }
    count
}

/// Number of `(alpha, beta)`-markings `nu_rel(D, C)`: linear extensions of
/// the non-alpha poset (quotiented by sibling groups) times the admissible
/// alpha-suffix orderings.
pub fn count_relative_markings(
    diagram: &PsiFloorDiagram,
    pair: &CompatiblePair,
    choice: &RelativeChoice,
) -> u128 {
    let poset = build_relative_marking_poset(diagram, pair, choice);
    crate::marking::count_markings_of_poset(&poset) * alpha_suffix_orderings(pair)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;
    use crate::diagram::{Edge, Vertex};
    use alloc::vec;

    fn degree5_example() -> PsiFloorDiagram {
        PsiFloorDiagram::new(
            vec![Vertex::new(1, 0), Vertex::new(2, 3), Vertex::new(1, 2), Vertex::new(1, 0)],
            vec![Edge::new(0, 1, 1), Edge::new(1, 2, 2), Edge::new(2, 3, 1)],
        )
        .unwrap()
    }

    /// The pictured relative data: alpha = (1), beta = (2,1) with
    /// alpha(v4) = (1), beta(v2) = (1), beta(v3) = (0,1), beta(v4) = (1).
    fn degree5_pair() -> CompatiblePair {
        CompatiblePair {
            alpha: vec![
                IntSeq::zero(SeqBase::One),
                IntSeq::zero(SeqBase::One),
                IntSeq::zero(SeqBase::One),
                IntSeq::base1(&[1]),
            ],
            beta: vec![
                IntSeq::zero(SeqBase::One),
                IntSeq::base1(&[1]),
                IntSeq::base1(&[0, 1]),
                IntSeq::base1(&[1]),
            ],
        }
    }

    /// The pictured relative choice: the incoming weight-1 edge at the
    /// second vertex; the incoming weight-2 edge and the weight-2 free end
    /// at the third.
    fn degree5_relative_choice() -> RelativeChoice {
        RelativeChoice {
            per_vertex: vec![
                RelativeVertexChoice::default(),
                RelativeVertexChoice { internal: vec![0], beta_counts: IntSeq::zero(SeqBase::One) },
                RelativeVertexChoice { internal: vec![1], beta_counts: IntSeq::base1(&[0, 1]) },
                RelativeVertexChoice::default(),
            ],
        }
    }

    #[test]
    fn compatible_pairs_contain_pictured_assignment() {
        let d = degree5_example();
        let pairs =
            enumerate_compatible_pairs(&d, &IntSeq::base1(&[1]), &IntSeq::base1(&[2, 1])).unwrap();
        assert!(pairs.contains(&degree5_pair()));
        for p in &pairs {
            assert_eq!(p.alpha_total(), IntSeq::base1(&[1]));
            assert_eq!(p.beta_total(), IntSeq::base1(&[2, 1]));
            for v in 0..d.vertex_count() {
                let t = (&p.alpha[v] + &p.beta[v]).weight() as i64;
                assert_eq!(t, d.vertices()[v].degree as i64 - d.divergence(v));
            }
        }
    }

    #[test]
    fn absolute_specialization_pair_is_unique() {
        let d = degree5_example();
        let pairs =
            enumerate_compatible_pairs(&d, &IntSeq::zero(SeqBase::One), &IntSeq::base1(&[5])).unwrap();
        assert_eq!(pairs.len(), 1);
        for v in 0..d.vertex_count() {
            let expect = d.vertices()[v].degree as i64 - d.divergence(v);
            assert_eq!(pairs[0].beta[v].size() as i64, expect);
            assert_eq!(pairs[0].beta[v].weight() as i64, expect);
        }
    }

    #[test]
    fn single_vertex_forced_pair() {
        let d = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let pairs =
            enumerate_compatible_pairs(&d, &IntSeq::base1(&[1]), &IntSeq::zero(SeqBase::One)).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(pairs[0].alpha[0], IntSeq::base1(&[1]));
        assert!(pairs[0].beta[0].is_zero());
    }

    #[test]
    fn dimension_mismatch_is_error() {
        let d = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        assert!(enumerate_compatible_pairs(&d, &IntSeq::base1(&[2]), &IntSeq::zero(SeqBase::One)).is_err());
    }

    #[test]
    fn relative_multiplicity_examples() {
        let d = degree5_example();
        assert_eq!(relative_diagram_multiplicity(&d, &degree5_pair()), rat_int(8));

        let single = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let pairs =
            enumerate_compatible_pairs(&single, &IntSeq::base1(&[1]), &IntSeq::zero(SeqBase::One))
                .unwrap();
        assert_eq!(relative_diagram_multiplicity(&single, &pairs[0]), rat_int(1));
        let pairs =
            enumerate_compatible_pairs(&single, &IntSeq::zero(SeqBase::One), &IntSeq::base1(&[1]))
                .unwrap();
        assert_eq!(relative_diagram_multiplicity(&single, &pairs[0]), rat_int(1));
    }

    #[test]
    fn relative_choices_contain_pictured_choice() {
        let d = degree5_example();
        let pair = degree5_pair();
        let cs = enumerate_relative_choices(&d, &pair);
        assert!(cs.contains(&degree5_relative_choice()));
        for c in &cs {
            for v in 0..d.vertex_count() {
                let vx = d.vertices()[v];
                if vx.is_floor() {
                    assert_eq!(c.size_at(v) as i64, vx.psi as i64 + 2 - 2 * vx.degree as i64);
                } else {
                    assert_eq!(c.size_at(v), 0);
                }
            }
        }
    }

    #[test]
    fn degree_zero_vertex_has_empty_choice() {
        let d = PsiFloorDiagram::new(
            vec![Vertex::new(1, 0), Vertex::new(3, 4), Vertex::new(0, 4)],
            vec![Edge::new(0, 2, 1), Edge::new(1, 2, 3)],
        )
        .unwrap();
        let pairs =
            enumerate_compatible_pairs(&d, &IntSeq::zero(SeqBase::One), &IntSeq::base1(&[4])).unwrap();
        assert!(!pairs.is_empty());
        for p in &pairs {
            for c in enumerate_relative_choices(&d, p) {
                assert!(c.chosen_at(2).internal.is_empty());
                assert!(c.chosen_at(2).beta_counts.is_zero());
            }
        }
    }

    #[test]
    fn relative_choice_multiplicity_examples() {
        // unit local factors; the chosen weight-2 internal edge and the
        // chosen weight-2 free end contribute 1/2 each
        let d = degree5_example();
        assert_eq!(
            relative_choice_multiplicity(&d, &degree5_pair(), &degree5_relative_choice()),
            rat(1, 4)
        );

        // single vertex with a fixed tangency end: o(v) = |alpha(v)| = 1
        let single = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let pairs =
            enumerate_compatible_pairs(&single, &IntSeq::base1(&[1]), &IntSeq::zero(SeqBase::One))
                .unwrap();
        let cs = enumerate_relative_choices(&single, &pairs[0]);
        assert_eq!(cs.len(), 1);
        assert_eq!(relative_choice_multiplicity(&single, &pairs[0], &cs[0]), rat_int(1));
    }

    #[test]
    fn relative_marking_count_example() {
        let d = degree5_example();
        let nu = count_relative_markings(&d, &degree5_pair(), &degree5_relative_choice());
        assert_eq!(nu, 5);
    }

    #[test]
    fn single_vertex_alpha_marking() {
        let single = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let pairs =
            enumerate_compatible_pairs(&single, &IntSeq::base1(&[1]), &IntSeq::zero(SeqBase::One))
                .unwrap();
        let cs = enumerate_relative_choices(&single, &pairs[0]);
        assert_eq!(count_relative_markings(&single, &pairs[0], &cs[0]), 1);
    }

    #[test]
    fn equal_weight_alpha_vertices_at_one_floor_count_once() {
        // a degree-2 floor with alpha(v) = (2): both fixed ends have weight 1
        // and the same attachment, so the suffix admits a single ordering
        let d = PsiFloorDiagram::new(vec![Vertex::new(2, 2)], vec![]).unwrap();
        assert!(d.validate().is_empty());
        let pairs =
            enumerate_compatible_pairs(&d, &IntSeq::base1(&[2]), &IntSeq::zero(SeqBase::One)).unwrap();
        assert_eq!(pairs.len(), 1);
        assert_eq!(alpha_suffix_orderings(&pairs[0]), 1);
        let cs = enumerate_relative_choices(&d, &pairs[0]);
        assert_eq!(cs.len(), 1);
        assert_eq!(count_relative_markings(&d, &pairs[0], &cs[0]), 1);
    }

    #[test]
    fn equal_weight_alpha_vertices_at_two_floors_interleave() {
        // weight-1 fixed ends at two different floors are distinguishable
        // and give two admissible suffix orderings
        let two_floor_pair = CompatiblePair {
            alpha: vec![IntSeq::base1(&[1]), IntSeq::base1(&[1])],
            beta: vec![IntSeq::zero(SeqBase::One), IntSeq::zero(SeqBase::One)],
        };
        assert_eq!(alpha_suffix_orderings(&two_floor_pair), 2);
    }

    #[test]
    fn mixed_weight_alpha_suffix() {
        // weights must increase along the suffix, so weight classes do not
        // interleave: (1) and (0,1) at different floors give 1 * 1 orderings
        let pair = CompatiblePair {
            alpha: vec![IntSeq::base1(&[1]), IntSeq::base1(&[0, 1])],
            beta: vec![IntSeq::zero(SeqBase::One), IntSeq::zero(SeqBase::One)],
        };
        assert_eq!(alpha_suffix_orderings(&pair), 1);
    }
}
