//! Trace JSON for the enumeration path.
//!
//! Diagrams serialize as `{"vertices":[[d,a],..],"edges":[[src,tgt,w],..]}`;
//! per-vertex choice records as `{"vertex":v,"chosen_edges":[ids],
//! "chosen_ends":n}` (for the relative path `chosen_ends` is the per-weight
//! count sequence).

use serde::Serialize;
use serde_json::{json, Value};

use psifloor::arith::{IntSeq, Rational};
use psifloor::engine::{absolute_diagram_trace, relative_diagram_traces};
use psifloor::PsiFloorDiagram;

pub fn diagram_json(d: &PsiFloorDiagram) -> Value {
    json!({
        "vertices": d.vertices().iter().map(|v| vec![v.degree, v.psi]).collect::<Vec<_>>(),
        "edges": d.edges().iter().map(|e| vec![e.src as u64, e.tgt as u64, e.weight as u64]).collect::<Vec<_>>(),
    })
}

#[derive(Serialize)]
struct ChoiceVertex {
    vertex: usize,
    chosen_edges: Vec<usize>,
    chosen_ends: Value,
}

fn rational(r: &Rational) -> Value {
    Value::String(r.to_string())
}

/// One JSON object per diagram with its full evaluation.
pub fn absolute_trace_json(diagram: &PsiFloorDiagram) -> Value {
    let t = absolute_diagram_trace(diagram);
    let choices: Vec<Value> = t
        .choices
        .iter()
        .map(|c| {
            let per_vertex: Vec<ChoiceVertex> = c
                .choice
                .per_vertex
                .iter()
                .enumerate()
                .map(|(v, ch)| ChoiceVertex {
                    vertex: v,
                    chosen_edges: ch.internal.clone(),
                    chosen_ends: json!(ch.end_count),
                })
                .collect();
            json!({
                "choice": per_vertex,
                "choice_multiplicity": rational(&c.choice_multiplicity),
                "markings": c.markings as u64,
                "contribution": rational(&(&t.diagram_multiplicity * &c.choice_multiplicity)),
            })
        })
        .collect();
    json!({
        "diagram": diagram_json(diagram),
        "diagram_multiplicity": rational(&t.diagram_multiplicity),
        "choices": choices,
        "total": rational(&t.contribution()),
    })
}

pub fn relative_trace_json(diagram: &PsiFloorDiagram, alpha: &IntSeq, beta: &IntSeq) -> Vec<Value> {
    relative_diagram_traces(diagram, alpha, beta)
        .iter()
        .map(|t| {
            let choices: Vec<Value> = t
                .choices
                .iter()
                .map(|c| {
                    let per_vertex: Vec<ChoiceVertex> = c
                        .choice
                        .per_vertex
                        .iter()
                        .enumerate()
                        .map(|(v, ch)| ChoiceVertex {
                            vertex: v,
                            chosen_edges: ch.internal.clone(),
                            chosen_ends: json!(ch.beta_counts.entries()),
                        })
                        .collect();
                    json!({
                        "choice": per_vertex,
                        "choice_multiplicity": rational(&c.choice_multiplicity),
                        "markings": c.markings as u64,
                        "contribution": rational(&(&t.diagram_multiplicity * &c.choice_multiplicity)),
                    })
                })
                .collect();
            json!({
                "diagram": diagram_json(diagram),
                "tangencies": {
                    "alpha": t.pair.alpha.iter().map(|s| s.entries().to_vec()).collect::<Vec<_>>(),
                    "beta": t.pair.beta.iter().map(|s| s.entries().to_vec()).collect::<Vec<_>>(),
                },
                "diagram_multiplicity": rational(&t.diagram_multiplicity),
                "choices": choices,
                "total": rational(&t.contribution()),
            })
        })
        .collect()
}
