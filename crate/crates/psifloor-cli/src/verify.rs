//! Worked-example fixtures: exact values from the hand-checkable examples,
//! re-evaluated against the implementation.

use psifloor::arith::{rat, rat_big, rat_int, stirling2, IntSeq, Rational};
use psifloor::choices::{choice_multiplicity, enumerate_choices, EdgeChoice, VertexChoice};
use psifloor::diagram::{enumerate_diagrams, Edge, Vertex};
use psifloor::engine::absolute_diagram_trace;
use psifloor::marking::count_markings;
use psifloor::recursion::{n_to_tilde, p1_invariant, Evaluator, InvariantKey};
use psifloor::relative::{
    count_relative_markings, enumerate_relative_choices,
    relative_choice_multiplicity, relative_diagram_multiplicity, CompatiblePair,
    RelativeChoice, RelativeVertexChoice,
};
use psifloor::{PsiFloorDiagram, SeqBase};

pub struct FixtureResult {
    pub name: &'static str,
    pub outcome: Result<String, String>,
}

/// The degree-5, type (7,0,1,1) example diagram.
fn degree5_diagram() -> PsiFloorDiagram {
    PsiFloorDiagram::new(
        vec![Vertex::new(1, 0), Vertex::new(2, 3), Vertex::new(1, 2), Vertex::new(1, 0)],
        vec![Edge::new(0, 1, 1), Edge::new(1, 2, 2), Edge::new(2, 3, 1)],
    )
    .expect("example diagram is structurally sound")
}

fn degree5_choice() -> EdgeChoice {
    EdgeChoice {
        per_vertex: vec![
            VertexChoice::default(),
            VertexChoice { internal: vec![0], end_count: 0 },
            VertexChoice { internal: vec![], end_count: 2 },
            VertexChoice::default(),
        ],
    }
}

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

fn expect_rational(name: &str, got: Rational, want: Rational) -> Result<String, String> {
    if got == want {
        Ok(format!("{name} = {got}"))
    } else {
        Err(format!("{name}: expected {want}, computed {got}"))
    }
}

fn expect_int(name: &str, got: u128, want: u128) -> Result<String, String> {
    if got == want {
        Ok(format!("{name} = {got}"))
    } else {
        Err(format!("{name}: expected {want}, computed {got}"))
    }
}

pub fn fixtures() -> Vec<FixtureResult> {
    let mut out = Vec::new();
    let mut push = |name: &'static str, outcome: Result<String, String>| {
        out.push(FixtureResult { name, outcome });
    };

    let d5 = degree5_diagram();
    push(
        "degree-5 diagram multiplicity",
        expect_rational("mu(D)", d5.multiplicity(), rat_int(4)),
    );
    push("degree-5 edge-choice multiplicity", {
        let c = degree5_choice();
        if enumerate_choices(&d5).contains(&c) {
            expect_rational("mu(C)", choice_multiplicity(&d5, &c), rat(1, 2))
        } else {
            Err("pictured choice not enumerated".into())
        }
    });
    push(
        "degree-5 marking count",
        expect_int("nu(D,C)", count_markings(&d5, &degree5_choice()), 7),
    );

    let pair = degree5_pair();
    push(
        "relative diagram multiplicity",
        expect_rational("mu_rel(D)", relative_diagram_multiplicity(&d5, &pair), rat_int(8)),
    );
    // NOTE: stated value 1/2; the formula value consistent with the
    // recursion cross-validation is 1/4 (the chosen weight-2 free end
    // contributes 1/2 exactly like the chosen weight-2 internal edge).
    // Kept as stated; this fixture documents the discrepancy by failing.
    push("relative edge-choice multiplicity", {
        let c = degree5_relative_choice();
        if enumerate_relative_choices(&d5, &pair).contains(&c) {
            expect_rational("mu_rel(C)", relative_choice_multiplicity(&d5, &pair, &c), rat(1, 2))
        } else {
            Err("pictured relative choice not enumerated".into())
        }
    });
    push(
        "relative marking count",
        expect_int(
            "nu_rel(D,C)",
            count_relative_markings(&d5, &pair, &degree5_relative_choice()),
            5,
        ),
    );

    push("degree-4 psi-power invariant", {
        let k = IntSeq::base0(&[1, 0, 0, 0, 2]);
        match psifloor::engine::n_floor_absolute(4, &k) {
            Ok(n) => expect_rational(
                "tilde N_floor",
                n_to_tilde(&n, &k, &IntSeq::zero(SeqBase::One)),
                rat(1, 4),
            ),
            Err(e) => Err(e.to_string()),
        }
    });
    push("degree-4 per-marking contributions", {
        let k = IntSeq::base0(&[1, 0, 0, 0, 2]);
        match enumerate_diagrams(4, &k) {
            Ok(diagrams) => {
                let mut products = Vec::new();
                for d in &diagrams {
                    let t = absolute_diagram_trace(d);
                    for c in &t.choices {
                        products.push(&t.diagram_multiplicity * &c.choice_multiplicity);
                    }
                }
                let missing: Vec<Rational> = [rat(1, 8), rat(1, 24), rat(1, 12)]
                    .into_iter()
                    .filter(|w| !products.contains(w))
                    .collect();
                if missing.is_empty() {
                    Ok("contributions 1/8, 1/24, 1/12 present".into())
                } else {
                    Err(format!("missing contributions {missing:?}"))
                }
            }
            Err(e) => Err(e.to_string()),
        }
    });

    push("stirling numbers", {
        if stirling2(3, 2) == 3.into() && stirling2(3, 1) == 1.into() {
            Ok("S(3,2) = 3, S(3,1) = 1".into())
        } else {
            Err(format!("S(3,2) = {}, S(3,1) = {}", stirling2(3, 2), stirling2(3, 1)))
        }
    });
    push("line invariants", {
        let bad: Vec<u32> = (1..=4)
            .filter(|&d| {
                let f = psifloor::arith::factorial(d as u64);
                p1_invariant(d, 0) != rat_int(1) / rat_big(&f * &f)
            })
            .collect();
        if bad.is_empty() {
            Ok("tau^(2d-2) one-point values equal 1/d!^2 for d = 1..4".into())
        } else {
            Err(format!("wrong line invariant for d in {bad:?}"))
        }
    });

    push("classical curve counts", {
        let mut ev = Evaluator::new();
        let want = [1i64, 1, 12, 620, 87304];
        let mut bad = Vec::new();
        for (i, &w) in want.iter().enumerate() {
            let d = (i + 1) as u32;
            let key = InvariantKey::absolute(d, IntSeq::base0(&[3 * d as u64 - 1]))
                .expect("point-condition keys are admissible");
            if ev.invariant_n(&key) != rat_int(w) {
                bad.push(d);
            }
        }
        if bad.is_empty() {
            Ok("N_d = 1, 1, 12, 620, 87304 for d = 1..5".into())
        } else {
            Err(format!("wrong count for d in {bad:?}"))
        }
    });

    out
}

/// Runs the fixtures whose names contain `filter` (all when empty).
pub fn run(filter: &str) -> (Vec<FixtureResult>, bool) {
    let selected: Vec<FixtureResult> =
        fixtures().into_iter().filter(|f| f.name.contains(filter)).collect();
    let all_pass = selected.iter().all(|f| f.outcome.is_ok());
    (selected, all_pass)
}
