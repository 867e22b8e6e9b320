//! Edge choices for absolute Psi-floor diagrams.
//!
//! A choice selects, per floor `v`, exactly `a_v - 2(d_v - 1)` adjacent
//! edges: internal edges whose other endpoint is again a floor, or weight-1
//! end edges, of which the floor carries `d_v - div(v)` indistinguishable
//! ones. End-edge selections are stored as counts. Edges adjacent to a
//! degree-0 vertex are never choosable (their height is pinned by that
//! Psi-point), but they still count as non-chosen edges of the floor in the
//! local multiplicity below.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::One;

use crate::arith::{factorial, rat_big, rat_int, Rational};
use crate::diagram::PsiFloorDiagram;

/// Choosable adjacent objects of a floor.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VertexPorts {
    /// Incoming edges from floors (edge indices).
    pub incoming: Vec<usize>,
    /// Outgoing edges to floors (edge indices).
    pub outgoing: Vec<usize>,
    /// Count `d_v - div(v)` of indistinguishable weight-1 end edges.
    pub end_edges: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PortsError {
    /// Ports are only defined at floors.
    ZeroDegreeVertex { vertex: usize },
}

impl fmt::Display for PortsError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PortsError::ZeroDegreeVertex { vertex } => {
                write!(f, "vertex {vertex} has degree 0; ports are undefined")
            }
        }
    }
}

impl core::error::Error for PortsError {}

pub fn ports(diagram: &PsiFloorDiagram, v: usize) -> Result<VertexPorts, PortsError> {
    if diagram.vertices()[v].degree == 0 {
        return Err(PortsError::ZeroDegreeVertex { vertex: v });
    }
    let mut incoming = Vec::new();
    let mut outgoing = Vec::new();
    for (i, e) in diagram.edges().iter().enumerate() {
        if e.tgt == v && diagram.vertices()[e.src].degree > 0 {
            incoming.push(i);
        }
        if e.src == v && diagram.vertices()[e.tgt].degree > 0 {
            outgoing.push(i);
        }
    }
    let ends = diagram.end_edges(v);
    debug_assert!(ends >= 0, "divergence condition violated");
    Ok(VertexPorts { incoming, outgoing, end_edges: ends.max(0) as u64 })
}

/// Per-vertex part of an edge choice. Degree-0 vertices always carry the
/// empty choice.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct VertexChoice {
    /// Chosen internal edges (sorted edge indices).
    pub internal: Vec<usize>,
    /// Number of chosen weight-1 end edges.
    pub end_count: u64,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct EdgeChoice {
    pub per_vertex: Vec<VertexChoice>,
}

impl EdgeChoice {
    pub fn chosen_at(&self, v: usize) -> &VertexChoice {
        &self.per_vertex[v]
    }

    /// Total selected objects at `v`.
    pub fn size_at(&self, v: usize) -> u64 {
        self.per_vertex[v].internal.len() as u64 + self.per_vertex[v].end_count
    }
}

/// All edge choices of a valid diagram, exactly once. Floors are processed in
/// vertex order; per floor, internal subsets run in lexicographic bitmask
/// order with the end count forced by the required size.
pub fn enumerate_choices(diagram: &PsiFloorDiagram) -> Vec<EdgeChoice> {
    let n = diagram.vertex_count();
    let mut out = Vec::new();
    let mut acc: Vec<VertexChoice> = alloc::vec![VertexChoice::default(); n];
    let mut claimed = alloc::vec![false; diagram.edges().len()];
    fill_choices(diagram, 0, &mut acc, &mut claimed, &mut out);
    out
}

fn fill_choices(
    diagram: &PsiFloorDiagram,
    v: usize,
    acc: &mut Vec<VertexChoice>,
    claimed: &mut Vec<bool>,
    out: &mut Vec<EdgeChoice>,
) {
    if v == diagram.vertex_count() {
        out.push(EdgeChoice { per_vertex: acc.clone() });
        return;
    }
    let vx = diagram.vertices()[v];
    if !vx.is_floor() {
        fill_choices(diagram, v + 1, acc, claimed, out);
        return;
    }
    let need = vx.choice_size();
    debug_assert!(need >= 0, "string inequality violated");
    let need = need as u64;
    let p = ports(diagram, v).expect("floor has ports");
    let mut candidates = p.incoming.clone();
    candidates.extend_from_slice(&p.outgoing);
    candidates.sort_unstable();
    candidates.retain(|&e| !claimed[e]);
    let max_internal = (candidates.len() as u64).min(need);
    for mask in 0u32..(1 << candidates.len()) {
        let picked = mask.count_ones() as u64;
        if picked > max_internal {
            continue;
        }
        let end_count = need - picked;
        if end_count > p.end_edges {
            continue;
        }
        let internal: Vec<usize> = candidates
            .iter()
            .enumerate()
            .filter(|&(i, _)| mask & (1 << i) != 0)
            .map(|(_, &e)| e)
            .collect();
        for &e in &internal {
            claimed[e] = true;
        }
        acc[v] = VertexChoice { internal: internal.clone(), end_count };
        fill_choices(diagram, v + 1, acc, claimed, out);
        acc[v] = VertexChoice::default();
        for &e in &internal {
            claimed[e] = false;
        }
    }
}

/// Local multiplicity `(d^i / d!) (d^o / d!)` of a floor with `i` non-chosen
/// incoming and `o` non-chosen outgoing edges.
pub fn local_multiplicity(degree: u32, incoming_unchosen: u64, outgoing_unchosen: u64) -> Rational {
    if degree == 0 {
        return rat_int(1);
    }
    let d = BigInt::from(degree);
    let df = factorial(degree as u64);
    let num = d.pow(incoming_unchosen as u32) * d.pow(outgoing_unchosen as u32);
    rat_big(num) / rat_big(&df * &df)
}

/// Choice multiplicity
/// `mu(C) = prod_v mu_{v,C(v)} * 1/(chosen end edges at v)! *
///          prod_{chosen internal e at v} 1/w(e)`.
///
/// Non-chosen counts include edges adjacent to degree-0 vertices even though
/// those cannot be chosen.
pub fn choice_multiplicity(diagram: &PsiFloorDiagram, choice: &EdgeChoice) -> Rational {
    let mut m = rat_int(1);
    for (v, vx) in diagram.vertices().iter().enumerate() {
        if !vx.is_floor() {
            continue;
        }
        let ch = choice.chosen_at(v);
        let chosen_in = ch.internal.iter().filter(|&&e| diagram.edges()[e].tgt == v).count() as u64;
        let chosen_out = ch.internal.len() as u64 - chosen_in;
        let i = diagram.in_degree(v) as u64 - chosen_in;
        let ends = diagram.end_edges(v).max(0) as u64;
        let o = diagram.out_degree(v) as u64 + ends - chosen_out - ch.end_count;
        m *= local_multiplicity(vx.degree, i, o);
        m /= rat_big(factorial(ch.end_count));
        let mut w = BigInt::one();
        for &e in &ch.internal {
            w *= BigInt::from(diagram.edges()[e].weight);
        }
        m /= rat_big(w);
    }
    m
}

/// Re-checks the size and disjointness constraints of a choice.
pub fn choice_is_valid(diagram: &PsiFloorDiagram, choice: &EdgeChoice) -> bool {
    if choice.per_vertex.len() != diagram.vertex_count() {
        return false;
    }
    let mut claimed = alloc::vec![false; diagram.edges().len()];
    for (v, vx) in diagram.vertices().iter().enumerate() {
        let ch = choice.chosen_at(v);
        if !vx.is_floor() {
            if !ch.internal.is_empty() || ch.end_count != 0 {
                return false;
            }
            continue;
        }
        if choice.size_at(v) as i64 != vx.choice_size() {
            return false;
        }
        let Ok(p) = ports(diagram, v) else { return false };
        if ch.end_count > p.end_edges {
            return false;
        }
        for &e in &ch.internal {
            if claimed[e] || (!p.incoming.contains(&e) && !p.outgoing.contains(&e)) {
                return false;
            }
            claimed[e] = true;
        }
    }
    true
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

    /// The pictured choice: the weight-1 edge chosen at the second vertex,
    /// both end edges chosen at the third.
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

    #[test]
    fn ports_examples() {
        let d = degree5_example();
        let p = ports(&d, 2).unwrap();
        assert_eq!(p.incoming, vec![1]);
        assert_eq!(p.outgoing, vec![2]);
        assert_eq!(p.end_edges, 2);

        let p = ports(&d, 1).unwrap();
        assert_eq!(p.end_edges, 1);

        let single = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let p = ports(&single, 0).unwrap();
        assert!(p.incoming.is_empty() && p.outgoing.is_empty());
        assert_eq!(p.end_edges, 1);
    }

    #[test]
    fn ports_zero_degree_is_error() {
        let d = PsiFloorDiagram::new(
            vec![Vertex::new(2, 2), Vertex::new(0, 1)],
            vec![Edge::new(0, 1, 2)],
        )
        .unwrap();
        assert_eq!(ports(&d, 1), Err(PortsError::ZeroDegreeVertex { vertex: 1 }));
    }

    #[test]
    fn enumerate_single_vertex() {
        let single = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let cs = enumerate_choices(&single);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].size_at(0), 0);
    }

    #[test]
    fn enumerate_contains_pictured_choice() {
        let d = degree5_example();
        let cs = enumerate_choices(&d);
        assert!(cs.contains(&degree5_choice()));
        for c in &cs {
            assert!(choice_is_valid(&d, c));
            assert_eq!(c.size_at(1), 1);
            assert_eq!(c.size_at(2), 2);
        }
    }

    #[test]
    fn infeasible_floor_yields_empty_stream() {
        // first floor needs 2 choosable objects but has only the one edge
        let d = PsiFloorDiagram::new(
            vec![Vertex::new(1, 2), Vertex::new(1, 1)],
            vec![Edge::new(0, 1, 1)],
        )
        .unwrap();
        assert!(d.validate().is_empty());
        assert!(enumerate_choices(&d).is_empty());
    }

    #[test]
    fn pictured_choice_multiplicity() {
        let d = degree5_example();
        assert_eq!(choice_multiplicity(&d, &degree5_choice()), rat(1, 2));
    }

    #[test]
    fn single_vertex_choice_multiplicity() {
        let single = PsiFloorDiagram::new(vec![Vertex::new(1, 0)], vec![]).unwrap();
        let cs = enumerate_choices(&single);
        assert_eq!(choice_multiplicity(&single, &cs[0]), rat_int(1));
    }

    #[test]
    fn local_factor_example() {
        // degree-2 floor with no non-chosen incoming and three non-chosen
        // outgoing objects: (2^0/2!)(2^3/2!) = 2
        assert_eq!(local_multiplicity(2, 0, 3), rat_int(2));
        assert_eq!(local_multiplicity(0, 5, 5), rat_int(1));
    }

    #[test]
    fn stirling_decomposition_matches_local_factor() {
        // sum_g S(o, g)/(d-g)! telescopes to d^o/d!, the outgoing half of the
        // local multiplicity
        use crate::arith::{rat_big, stirling2};
        for d in 1u32..=4 {
            for o in 0u64..=6 {
                let mut sum = Rational::from_integer(0.into());
                for g in 0..=d as u64 {
                    sum += rat_big(stirling2(o, g)) / rat_big(factorial(d as u64 - g));
                }
                let direct = rat_big(BigInt::from(d).pow(o as u32)) / rat_big(factorial(d as u64));
                assert_eq!(sum, direct, "d={d} o={o}");
            }
        }
    }

    #[test]
    fn end_edges_never_distinguished() {
        // counts, not subsets: a floor with two ends and one required pick
        // yields exactly one choice with end_count 1
        let d = PsiFloorDiagram::new(vec![Vertex::new(1, 1)], vec![]).unwrap();
        assert!(d.validate().is_empty());
        let cs = enumerate_choices(&d);
        assert_eq!(cs.len(), 1);
        assert_eq!(cs[0].chosen_at(0).end_count, 1);
    }
}
