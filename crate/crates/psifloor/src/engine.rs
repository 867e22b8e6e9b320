//! Invariants from diagram enumeration, and the cross-check of the two
//! computation paths.
//!
//! The absolute path is a genuinely independent implementation, not an alias
//! of the relative one at `alpha = ()`, `beta = (d)`; their agreement is one
//! of the validation properties.

use alloc::vec::Vec;
use core::fmt;

use num_traits::Zero;

use crate::arith::{rat_int, IntSeq, Rational, SeqBase};
use crate::choices::{choice_multiplicity, enumerate_choices, EdgeChoice};
use crate::diagram::{enumerate_diagrams, enumerate_diagrams_relative, DimensionError, PsiFloorDiagram};
use crate::marking::count_markings;
use crate::recursion::{Evaluator, InvariantKey, KeyError};
use crate::relative::{
    count_relative_markings, enumerate_compatible_pairs, enumerate_relative_choices,
    relative_choice_multiplicity, relative_diagram_multiplicity, CompatiblePair, RelativeChoice,
};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum EngineError {
    Dimension(DimensionError),
    Key(KeyError),
}

impl fmt::Display for EngineError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            EngineError::Dimension(e) => e.fmt(f),
            EngineError::Key(e) => e.fmt(f),
        }
    }
}

impl core::error::Error for EngineError {}

impl From<DimensionError> for EngineError {
    fn from(e: DimensionError) -> Self {
        EngineError::Dimension(e)
    }
}

impl From<KeyError> for EngineError {
    fn from(e: KeyError) -> Self {
        EngineError::Key(e)
    }
}

/// Per-choice record of one diagram's contribution.
#[derive(Clone, Debug)]
pub struct ChoiceRecord {
    pub choice: EdgeChoice,
    pub choice_multiplicity: Rational,
    pub markings: u128,
}

/// Full evaluation trace of one diagram on the absolute path.
#[derive(Clone, Debug)]
pub struct AbsoluteTrace {
    pub diagram: PsiFloorDiagram,
    pub diagram_multiplicity: Rational,
    pub choices: Vec<ChoiceRecord>,
}

impl AbsoluteTrace {
    pub fn contribution(&self) -> Rational {
        let mut inner = Rational::zero();
        for c in &self.choices {
            inner += &c.choice_multiplicity * rat_int(c.markings as i64);
        }
        &self.diagram_multiplicity * inner
    }
}

/// Evaluates one diagram: multiplicity, every edge choice with its
/// multiplicity and marking count.
pub fn absolute_diagram_trace(diagram: &PsiFloorDiagram) -> AbsoluteTrace {
    debug_assert!(diagram.validate().is_empty());
    let choices = enumerate_choices(diagram)
        .into_iter()
        .map(|choice| {
            let m = choice_multiplicity(diagram, &choice);
            let nu = count_markings(diagram, &choice);
            ChoiceRecord { choice, choice_multiplicity: m, markings: nu }
        })
        .collect();
    AbsoluteTrace {
        diagram: diagram.clone(),
        diagram_multiplicity: diagram.multiplicity(),
        choices,
    }
}

/// `mu(D) * sum_C mu(C) nu(D, C)` for one diagram.
pub fn absolute_diagram_contribution(diagram: &PsiFloorDiagram) -> Rational {
    absolute_diagram_trace(diagram).contribution()
}

/// The absolute invariant by diagram enumeration:
/// `N = sum_D mu(D) sum_C mu(C) nu(D, C)`.
pub fn n_floor_absolute(d: u32, k: &IntSeq) -> Result<Rational, EngineError> {
    let mut total = Rational::zero();
    for diagram in enumerate_diagrams(d, k)? {
        total += absolute_diagram_contribution(&diagram);
    }
    Ok(total)
}

/// Per-choice record on the relative path.
#[derive(Clone, Debug)]
pub struct RelativeChoiceRecord {
    pub choice: RelativeChoice,
    pub choice_multiplicity: Rational,
    pub markings: u128,
}

/// Trace of one diagram with one compatible pair.
#[derive(Clone, Debug)]
pub struct RelativeTrace {
    pub diagram: PsiFloorDiagram,
    pub pair: CompatiblePair,
    pub diagram_multiplicity: Rational,
    pub choices: Vec<RelativeChoiceRecord>,
}

impl RelativeTrace {
    pub fn contribution(&self) -> Rational {
        let mut inner = Rational::zero();
        for c in &self.choices {
            inner += &c.choice_multiplicity * rat_int(c.markings as i64);
        }
        &self.diagram_multiplicity * inner
    }
}

pub fn relative_diagram_traces(
    diagram: &PsiFloorDiagram,
    alpha: &IntSeq,
    beta: &IntSeq,
) -> Vec<RelativeTrace> {
    let pairs = enumerate_compatible_pairs(diagram, alpha, beta)
        .expect("tangency condition checked by the caller");
    pairs
        .into_iter()
        .map(|pair| {
            let choices = enumerate_relative_choices(diagram, &pair)
                .into_iter()
                .map(|choice| {
                    let m = relative_choice_multiplicity(diagram, &pair, &choice);
                    let nu = count_relative_markings(diagram, &pair, &choice);
                    RelativeChoiceRecord { choice, choice_multiplicity: m, markings: nu }
                })
                .collect();
            let dm = relative_diagram_multiplicity(diagram, &pair);
            RelativeTrace { diagram: diagram.clone(), pair, diagram_multiplicity: dm, choices }
        })
        .collect()
}

/// `sum_pairs mu_rel(D) sum_C mu_rel(C) nu_rel(D, C)` for one diagram.
pub fn relative_diagram_contribution(
    diagram: &PsiFloorDiagram,
    alpha: &IntSeq,
    beta: &IntSeq,
) -> Rational {
    relative_diagram_traces(diagram, alpha, beta)
        .iter()
        .fold(Rational::zero(), |acc, t| acc + t.contribution())
}

/// The relative invariant by enumeration over diagrams, compatible pairs and
/// edge choices.
pub fn n_floor_relative(
    d: u32,
    k: &IntSeq,
    alpha: &IntSeq,
    beta: &IntSeq,
) -> Result<Rational, EngineError> {
    // both dimension conditions are named errors before any enumeration
    InvariantKey::new(d, k.clone(), alpha.clone(), beta.clone())?;
    let mut total = Rational::zero();
    for diagram in enumerate_diagrams_relative(d, k, beta.size())? {
        total += relative_diagram_contribution(&diagram, alpha, beta);
    }
    Ok(total)
}

/// Outcome of computing one key along both paths.
#[derive(Clone, Debug)]
pub struct CrosscheckReport {
    pub key: InvariantKey,
    pub floor: Rational,
    pub recursion: Rational,
}

impl CrosscheckReport {
    pub fn pass(&self) -> bool {
        self.floor == self.recursion
    }
}

/// Computes the invariant by enumeration and by recursion and compares.
pub fn crosscheck(
    d: u32,
    k: &IntSeq,
    alpha: &IntSeq,
    beta: &IntSeq,
    evaluator: &mut Evaluator,
) -> Result<CrosscheckReport, EngineError> {
    let key = InvariantKey::new(d, k.clone(), alpha.clone(), beta.clone())?;
    let floor = n_floor_relative(d, k, alpha, beta)?;
    let recursion = evaluator.invariant_n(&key);
    Ok(CrosscheckReport { key, floor, recursion })
}

/// Convenience wrapper for the absolute invariant key `(d, k, (), (d))`.
pub fn absolute_beta(d: u32) -> IntSeq {
    IntSeq::new(SeqBase::One, &[d as u64])
}

pub fn empty_alpha() -> IntSeq {
    IntSeq::zero(SeqBase::One)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::arith::rat;

    #[test]
    fn absolute_values() {
        assert_eq!(n_floor_absolute(1, &IntSeq::base0(&[2])).unwrap(), rat_int(1));
        assert_eq!(
            n_floor_absolute(4, &IntSeq::base0(&[1, 0, 0, 0, 2])).unwrap(),
            rat(3, 4)
        );
    }

    #[test]
    fn absolute_cubics() {
        assert_eq!(n_floor_absolute(3, &IntSeq::base0(&[8])).unwrap(), rat_int(12));
    }

    #[test]
    fn relative_values() {
        assert_eq!(
            n_floor_relative(1, &IntSeq::base0(&[1]), &IntSeq::base1(&[1]), &empty_alpha()).unwrap(),
            rat_int(1)
        );
        assert_eq!(
            n_floor_relative(1, &IntSeq::base0(&[2]), &empty_alpha(), &IntSeq::base1(&[1])).unwrap(),
            rat_int(1)
        );
    }

    #[test]
    fn dimension_violations_are_errors() {
        assert!(n_floor_absolute(1, &IntSeq::base0(&[3])).is_err());
        assert!(n_floor_relative(1, &IntSeq::base0(&[2]), &empty_alpha(), &IntSeq::base1(&[2]))
            .is_err());
    }

    #[test]
    fn crosscheck_examples() {
        let mut ev = Evaluator::new();
        let r = crosscheck(1, &IntSeq::base0(&[2]), &empty_alpha(), &absolute_beta(1), &mut ev)
            .unwrap();
        assert!(r.pass());
        assert_eq!(r.floor, rat_int(1));

        let r = crosscheck(
            4,
            &IntSeq::base0(&[1, 0, 0, 0, 2]),
            &empty_alpha(),
            &absolute_beta(4),
            &mut ev,
        )
        .unwrap();
        assert!(r.pass());
        assert_eq!(r.floor, rat(3, 4));

        let r = crosscheck(3, &IntSeq::base0(&[8]), &empty_alpha(), &absolute_beta(3), &mut ev)
            .unwrap();
        assert!(r.pass());
        assert_eq!(r.floor, rat_int(12));
    }

    #[test]
    fn worked_example_trace_contributions() {
        // the three markings drawn for the degree-4 computation contribute
        // 1/8, 1/24 and 1/12 as diagram-choice products
        let diagrams = enumerate_diagrams(4, &IntSeq::base0(&[1, 0, 0, 0, 2])).unwrap();
        let mut products = Vec::new();
        for d in &diagrams {
            let t = absolute_diagram_trace(d);
            for c in &t.choices {
                products.push(&t.diagram_multiplicity * &c.choice_multiplicity);
            }
        }
        for want in [rat(1, 8), rat(1, 24), rat(1, 12)] {
            assert!(products.contains(&want), "missing contribution {want}");
        }
    }

    #[test]
    fn specialization_small_degrees() {
        for d in 1u32..=2 {
            for key in crate::recursion::admissible_keys(d) {
                if !key.alpha.is_zero() || key.beta != absolute_beta(d) {
                    continue;
                }
                let abs = n_floor_absolute(d, &key.psi).unwrap();
                let rel = n_floor_relative(d, &key.psi, &key.alpha, &key.beta).unwrap();
                assert_eq!(abs, rel, "{key}");
            }
        }
    }
}
