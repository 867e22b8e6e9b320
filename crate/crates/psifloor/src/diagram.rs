//! Psi-floor diagrams: validity, degree/type, multiplicity, enumeration.
//!
//! A diagram is a weighted directed tree on a linearly ordered vertex set,
//! each vertex decorated with a degree `d_v` and a Psi-power `a_v`. A vertex
//! of positive degree is a *floor*; degree-0 vertices stand for Psi-points
//! sitting on horizontal edges. The six validity conditions below are exactly
//! the defining conditions of the structure; `validate` reports every
//! violation rather than failing fast.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;

use num_traits::One;

use crate::arith::{rat_big, IntSeq, Rational};
use num_bigint::BigInt;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Vertex {
    /// Floor degree `d_v`.
    pub degree: u32,
    /// Psi-power `a_v`.
    pub psi: u32,
}

impl Vertex {
    pub fn new(degree: u32, psi: u32) -> Self {
        Vertex { degree, psi }
    }

    pub fn is_floor(&self) -> bool {
        self.degree > 0
    }

    /// Required edge-choice size `a_v - 2(d_v - 1)`; may be negative on
    /// invalid input.
    pub fn choice_size(&self) -> i64 {
        self.psi as i64 - 2 * (self.degree as i64 - 1)
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct Edge {
    pub src: usize,
    pub tgt: usize,
    pub weight: u32,
}

impl Edge {
    pub fn new(src: usize, tgt: usize, weight: u32) -> Self {
        Edge { src, tgt, weight }
    }
}

/// Structurally malformed input, as opposed to a validity violation.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum StructuralError {
    NoVertices,
    IndexOutOfRange { edge: usize },
    SelfLoop { edge: usize },
    ZeroWeight { edge: usize },
    ParallelEdges { edge: usize },
}

impl fmt::Display for StructuralError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            StructuralError::NoVertices => write!(f, "diagram has no vertices"),
            StructuralError::IndexOutOfRange { edge } => write!(f, "edge {edge} references a missing vertex"),
            StructuralError::SelfLoop { edge } => write!(f, "edge {edge} is a self-loop"),
            StructuralError::ZeroWeight { edge } => write!(f, "edge {edge} has weight 0"),
            StructuralError::ParallelEdges { edge } => write!(f, "edge {edge} duplicates another edge"),
        }
    }
}

impl core::error::Error for StructuralError {}

/// Violation of one of the defining conditions of a Psi-floor diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Violation {
    /// (1) an edge runs against the vertex order.
    EdgeAgainstOrder { edge: usize },
    /// (2) an edge joins two degree-0 vertices.
    EdgeBetweenZeroDegrees { edge: usize },
    /// (3) a vertex has `d_v = a_v = 0`.
    EmptyVertex { vertex: usize },
    /// (4) string inequality `a_v - 2(d_v - 1) >= 0` fails.
    StringInequality { vertex: usize },
    /// (5) divergence exceeds the degree.
    DivergenceTooLarge { vertex: usize },
    /// (6) a degree-0 vertex has valence different from `a_v + 2 + div(v)`.
    ZeroDegreeValence { vertex: usize },
    /// The underlying graph is not a tree on the whole vertex set.
    NotATree,
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Violation::EdgeAgainstOrder { edge } => write!(f, "edge {edge} violates the vertex order"),
            Violation::EdgeBetweenZeroDegrees { edge } => {
                write!(f, "edge {edge} joins two degree-0 vertices")
            }
            Violation::EmptyVertex { vertex } => {
                write!(f, "vertex {vertex} has degree 0 and Psi-power 0")
            }
            Violation::StringInequality { vertex } => {
                write!(f, "vertex {vertex} violates the string inequality")
            }
            Violation::DivergenceTooLarge { vertex } => {
                write!(f, "vertex {vertex} has divergence above its degree")
            }
            Violation::ZeroDegreeValence { vertex } => {
                write!(f, "degree-0 vertex {vertex} has the wrong valence")
            }
            Violation::NotATree => write!(f, "diagram is not a tree"),
        }
    }
}

/// Degree and type of a diagram.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DiagramSignature {
    pub degree: u32,
    /// Base-0 Psi-power multiplicity sequence, including the added-vertex
    /// contribution to the index-0 entry.
    pub psi_type: IntSeq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum SignatureError {
    /// `3d - 1 - Ik - #V < 0`: the diagram admits no marking.
    CannotBeMarked,
}

impl fmt::Display for SignatureError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            SignatureError::CannotBeMarked => write!(f, "diagram cannot be marked"),
        }
    }
}

impl core::error::Error for SignatureError {}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PsiFloorDiagram {
    vertices: Vec<Vertex>,
    edges: Vec<Edge>,
}

impl PsiFloorDiagram {
    /// Builds a diagram after structural checks only; validity is a separate
    /// concern (`validate`). Edges are sorted into `(src, tgt)` order.
    pub fn new(vertices: Vec<Vertex>, mut edges: Vec<Edge>) -> Result<Self, StructuralError> {
        if vertices.is_empty() {
            return Err(StructuralError::NoVertices);
        }
        for (i, e) in edges.iter().enumerate() {
            if e.src >= vertices.len() || e.tgt >= vertices.len() {
                return Err(StructuralError::IndexOutOfRange { edge: i });
            }
            if e.src == e.tgt {
                return Err(StructuralError::SelfLoop { edge: i });
            }
            if e.weight == 0 {
                return Err(StructuralError::ZeroWeight { edge: i });
            }
        }
        edges.sort_by_key(|e| (e.src, e.tgt, e.weight));
        for i in 1..edges.len() {
            let (a, b) = (&edges[i - 1], &edges[i]);
            let same = (a.src.min(a.tgt), a.src.max(a.tgt)) == (b.src.min(b.tgt), b.src.max(b.tgt));
            if same {
                return Err(StructuralError::ParallelEdges { edge: i });
            }
        }
        Ok(PsiFloorDiagram { vertices, edges })
    }

    pub fn vertices(&self) -> &[Vertex] {
        &self.vertices
    }

    pub fn edges(&self) -> &[Edge] {
        &self.edges
    }

    pub fn vertex_count(&self) -> usize {
        self.vertices.len()
    }

    /// Total degree `d = sum d_v`.
    pub fn degree(&self) -> u32 {
        self.vertices.iter().map(|v| v.degree).sum()
    }

    /// `div(v)`: outgoing minus incoming edge weight.
    pub fn divergence(&self, v: usize) -> i64 {
        let mut div = 0i64;
        for e in &self.edges {
            if e.src == v {
                div += e.weight as i64;
            }
            if e.tgt == v {
                div -= e.weight as i64;
            }
        }
        div
    }

    pub fn valence(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.src == v || e.tgt == v).count()
    }

    pub fn in_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.tgt == v).count()
    }

    pub fn out_degree(&self, v: usize) -> usize {
        self.edges.iter().filter(|e| e.src == v).count()
    }

    /// Number of weight-1 end edges `d_v - div(v)` hanging off a floor.
    pub fn end_edges(&self, v: usize) -> i64 {
        self.vertices[v].degree as i64 - self.divergence(v)
    }

    /// Checks every defining condition and returns all violations.
    pub fn validate(&self) -> Vec<Violation> {
        self.validate_in(EndWeights::UnitOnly)
    }

    /// Validity for the relative theory, where ends carry arbitrary positive
    /// weights: a degree-0 vertex only needs `0 <= a_v + 2 - val(v)` many
    /// dropped ends of total weight `-div(v)` to exist.
    pub fn validate_relative(&self) -> Vec<Violation> {
        self.validate_in(EndWeights::Arbitrary)
    }

    fn validate_in(&self, ends: EndWeights) -> Vec<Violation> {
        let mut out = Vec::new();
        let n = self.vertices.len();
        for (i, e) in self.edges.iter().enumerate() {
            if e.src >= e.tgt {
                out.push(Violation::EdgeAgainstOrder { edge: i });
            }
            if self.vertices[e.src].degree == 0 && self.vertices[e.tgt].degree == 0 {
                out.push(Violation::EdgeBetweenZeroDegrees { edge: i });
            }
        }
        for (v, vx) in self.vertices.iter().enumerate() {
            if vx.degree == 0 && vx.psi == 0 {
                out.push(Violation::EmptyVertex { vertex: v });
            }
            if vx.choice_size() < 0 {
                out.push(Violation::StringInequality { vertex: v });
            }
            let div = self.divergence(v);
            if div > vx.degree as i64 {
                out.push(Violation::DivergenceTooLarge { vertex: v });
            }
            if vx.degree == 0 && !zero_degree_feasible(vx.psi, self.valence(v), div, ends) {
                out.push(Violation::ZeroDegreeValence { vertex: v });
            }
        }
        if self.edges.len() + 1 != n || !self.is_connected() {
            out.push(Violation::NotATree);
        } else {
            // telescoping sanity: divergences of a tree sum to zero
            debug_assert_eq!((0..n).map(|v| self.divergence(v)).sum::<i64>(), 0);
        }
        out
    }

    fn is_connected(&self) -> bool {
        let n = self.vertices.len();
        let mut seen = alloc::vec![false; n];
        let mut stack = alloc::vec![0usize];
        seen[0] = true;
        while let Some(v) = stack.pop() {
            for e in &self.edges {
                let other = if e.src == v {
                    e.tgt
                } else if e.tgt == v {
                    e.src
                } else {
                    continue;
                };
                if !seen[other] {
                    seen[other] = true;
                    stack.push(other);
                }
            }
        }
        seen.into_iter().all(|s| s)
    }

    /// Degree and type with the absolute white-vertex offset `3d - 1`.
    pub fn signature(&self) -> Result<DiagramSignature, SignatureError> {
        self.signature_with_offset(3 * self.degree() as i64 - 1)
    }

    /// Degree and relative type with offset `2d + |beta| - 1`.
    pub fn relative_signature(&self, beta_size: u64) -> Result<DiagramSignature, SignatureError> {
        self.signature_with_offset(2 * self.degree() as i64 - 1 + beta_size as i64)
    }

    fn signature_with_offset(&self, offset: i64) -> Result<DiagramSignature, SignatureError> {
        let psi_sum: i64 = self.vertices.iter().map(|v| v.psi as i64).sum();
        let white = offset - psi_sum - self.vertices.len() as i64;
        if white < 0 {
            return Err(SignatureError::CannotBeMarked);
        }
        let max_psi = self.vertices.iter().map(|v| v.psi).max().unwrap_or(0);
        let mut entries = alloc::vec![0u64; max_psi as usize + 1];
        for v in &self.vertices {
            entries[v.psi as usize] += 1;
        }
        entries[0] += white as u64;
        Ok(DiagramSignature {
            degree: self.degree(),
            psi_type: IntSeq::base0(&entries),
        })
    }

    /// Number of white vertices a marking adds (with the absolute offset).
    pub fn white_count(&self) -> Result<u64, SignatureError> {
        self.white_count_with_offset(3 * self.degree() as i64 - 1)
    }

    pub fn relative_white_count(&self, beta_size: u64) -> Result<u64, SignatureError> {
        self.white_count_with_offset(2 * self.degree() as i64 - 1 + beta_size as i64)
    }

    fn white_count_with_offset(&self, offset: i64) -> Result<u64, SignatureError> {
        let psi_sum: i64 = self.vertices.iter().map(|v| v.psi as i64).sum();
        let white = offset - psi_sum - self.vertices.len() as i64;
        if white < 0 {
            return Err(SignatureError::CannotBeMarked);
        }
        Ok(white as u64)
    }

    /// Diagram multiplicity
    /// `mu(D) = prod w(e)^2 * prod_{e at a degree-0 vertex} 1/w(e)
    ///          * prod_{d_v = 0} 1/|div(v)|!`.
    ///
    /// Pure formula evaluation; the caller is responsible for validity.
    pub fn multiplicity(&self) -> Rational {
        let mut num = BigInt::one();
        let mut den = BigInt::one();
        for e in &self.edges {
            num *= BigInt::from(e.weight) * BigInt::from(e.weight);
            if self.vertices[e.src].degree == 0 || self.vertices[e.tgt].degree == 0 {
                den *= BigInt::from(e.weight);
            }
        }
        let mut m = rat_big(num) / rat_big(den);
        for (v, vx) in self.vertices.iter().enumerate() {
            if vx.degree == 0 {
                let d = self.divergence(v).unsigned_abs();
                m /= rat_big(crate::arith::factorial(d));
            }
        }
        m
    }
}

impl fmt::Display for PsiFloorDiagram {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "vertices [")?;
        for (i, v) in self.vertices.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "({},{})", v.degree, v.psi)?;
        }
        write!(f, "] edges [")?;
        for (i, e) in self.edges.iter().enumerate() {
            if i > 0 {
                write!(f, " ")?;
            }
            write!(f, "{}-{}:{}", e.src, e.tgt, e.weight)?;
        }
        write!(f, "]")
    }
}

/// Weight range of the end edges hanging off the diagram: weight 1 only in
/// the absolute theory, arbitrary positive in the relative one.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
enum EndWeights {
    UnitOnly,
    Arbitrary,
}

/// A degree-0 vertex drops `s = a + 2 - val` ends of total weight
/// `w = -div`. With unit weights this forces `s = w` (the classic valence
/// condition `val = a + 2 + div`); with arbitrary weights any
/// `1 <= s <= w` (or `s = w = 0`) is realizable.
fn zero_degree_feasible(psi: u32, valence: usize, div: i64, ends: EndWeights) -> bool {
    let s = psi as i64 + 2 - valence as i64;
    let w = -div;
    if w < 0 {
        return false;
    }
    match ends {
        EndWeights::UnitOnly => s == w,
        EndWeights::Arbitrary => (s == 0 && w == 0) || (1 <= s && s <= w),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum DimensionError {
    /// Absolute dimension condition `Ik = 3d - 1 - |k|` fails.
    AbsoluteType { expected: i64, got: i64 },
    /// Relative dimension condition `Ik = 2d - 1 + |beta| - |k|` fails.
    RelativeType { expected: i64, got: i64 },
    /// Tangency weight `I(alpha + beta) = d` fails.
    TangencyWeight { expected: u64, got: u64 },
    DegreeOutOfRange,
    Other(String),
}

impl fmt::Display for DimensionError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            DimensionError::AbsoluteType { expected, got } => {
                write!(f, "dimension condition Ik = 3d-1-|k| violated: expected {expected}, got {got}")
            }
            DimensionError::RelativeType { expected, got } => {
                write!(f, "dimension condition Ik = 2d-1+|beta|-|k| violated: expected {expected}, got {got}")
            }
            DimensionError::TangencyWeight { expected, got } => {
                write!(f, "tangency condition I(alpha+beta) = d violated: expected {expected}, got {got}")
            }
            DimensionError::DegreeOutOfRange => write!(f, "degree must be at least 1"),
            DimensionError::Other(s) => write!(f, "{s}"),
        }
    }
}

impl core::error::Error for DimensionError {}

/// All Psi-floor diagrams of degree `d` and absolute type `k`, exactly once,
/// in a deterministic order.
pub fn enumerate_diagrams(d: u32, k: &IntSeq) -> Result<Vec<PsiFloorDiagram>, DimensionError> {
    if d == 0 {
        return Err(DimensionError::DegreeOutOfRange);
    }
    let expected = 3 * d as i64 - 1 - k.size() as i64;
    if k.weight() as i64 != expected {
        return Err(DimensionError::AbsoluteType { expected, got: k.weight() as i64 });
    }
    Ok(enumerate_with_offset(d, k, 3 * d as i64 - 1, EndWeights::UnitOnly))
}

/// All diagrams of degree `d` whose relative type (for tangency data of total
/// size `beta_size`) is `k`.
pub fn enumerate_diagrams_relative(
    d: u32,
    k: &IntSeq,
    beta_size: u64,
) -> Result<Vec<PsiFloorDiagram>, DimensionError> {
    if d == 0 {
        return Err(DimensionError::DegreeOutOfRange);
    }
    let expected = 2 * d as i64 - 1 + beta_size as i64 - k.size() as i64;
    if k.weight() as i64 != expected {
        return Err(DimensionError::RelativeType { expected, got: k.weight() as i64 });
    }
    Ok(enumerate_with_offset(d, k, 2 * d as i64 - 1 + beta_size as i64, EndWeights::Arbitrary))
}

/// Search order: vertex count, decorated vertex list (lexicographic), tree
/// code (lexicographic Pruefer sequence), edge weights (lexicographic).
fn enumerate_with_offset(d: u32, k: &IntSeq, offset: i64, ends: EndWeights) -> Vec<PsiFloorDiagram> {
    let mut out = Vec::new();
    let k0 = k.at(0);
    // Psi-powers >= 1 give one diagram vertex each; a_v = 0 vertices are
    // forced to degree 1 by conditions (3) and (4).
    let positive_psi: Vec<u64> = k
        .indexed()
        .filter(|&(i, _)| i >= 1)
        .flat_map(|(i, c)| core::iter::repeat_n(i, c as usize))
        .collect();
    let n1 = positive_psi.len();
    let max_zeros = k0.min(d as u64);
    for zeros in 0..=max_zeros {
        let n = zeros as usize + n1;
        if n == 0 {
            continue;
        }
        // k_0 = #{a_v = 0} + W with white count W = offset - Ik - #V >= 0
        let white = offset - k.weight() as i64 - n as i64;
        if white < 0 || (k0 as i64 - zeros as i64) != white {
            continue;
        }
        let mut decorations: Vec<Vertex> = Vec::with_capacity(n);
        enumerate_decorations(d, zeros as usize, &positive_psi, &mut decorations, &mut |verts| {
            enumerate_trees_and_weights(verts, d, ends, &mut out);
        });
    }
    out
}

/// Ordered decoration lists: choose for each position a Psi-power from the
/// remaining multiset (ascending) and a compatible degree (ascending).
fn enumerate_decorations(
    remaining_degree: u32,
    zeros_left: usize,
    psi_left: &[u64],
    acc: &mut Vec<Vertex>,
    f: &mut dyn FnMut(&[Vertex]),
) {
    if zeros_left == 0 && psi_left.is_empty() {
        if remaining_degree == 0 {
            f(acc);
        }
        return;
    }
    // every remaining a_v = 0 vertex consumes one unit of degree
    if (remaining_degree as usize) < zeros_left {
        return;
    }
    if zeros_left > 0 {
        acc.push(Vertex::new(1, 0));
        enumerate_decorations(remaining_degree - 1, zeros_left - 1, psi_left, acc, f);
        acc.pop();
    }
    let mut prev = None;
    for (i, &a) in psi_left.iter().enumerate() {
        if prev == Some(a) {
            continue; // identical Psi-power: avoid duplicate orderings
        }
        prev = Some(a);
        let mut rest = psi_left.to_vec();
        rest.remove(i);
        // string inequality bounds the degree: d_v <= a/2 + 1
        let dmax = (a / 2 + 1).min(remaining_degree as u64) as u32;
        for dv in 0..=dmax {
            acc.push(Vertex::new(dv, a as u32));
            enumerate_decorations(remaining_degree - dv, zeros_left, &rest, acc, f);
            acc.pop();
        }
    }
}

fn enumerate_trees_and_weights(verts: &[Vertex], d: u32, ends: EndWeights, out: &mut Vec<PsiFloorDiagram>) {
    let n = verts.len();
    if n == 1 {
        let diagram = PsiFloorDiagram { vertices: verts.to_vec(), edges: Vec::new() };
        if diagram.validate_in(ends).is_empty() {
            out.push(diagram);
        }
        return;
    }
    let mut pruefer = alloc::vec![0usize; n - 2];
    loop {
        let pairs = decode_pruefer(&pruefer, n);
        // condition (2) is weight-independent: check it per tree
        let ok = pairs
            .iter()
            .all(|&(a, b)| verts[a].degree > 0 || verts[b].degree > 0);
        if ok {
            enumerate_weights(verts, &pairs, d, ends, out);
        }
        // next Pruefer code in lexicographic order
        let mut pos = pruefer.len();
        loop {
            if pos == 0 {
                return;
            }
            pos -= 1;
            if pruefer[pos] + 1 < n {
                pruefer[pos] += 1;
                for e in pruefer[pos + 1..].iter_mut() {
                    *e = 0;
                }
                break;
            }
        }
    }
}

/// Standard Pruefer decoding; edges come out with `src < tgt`.
fn decode_pruefer(code: &[usize], n: usize) -> Vec<(usize, usize)> {
    let mut deg = alloc::vec![1usize; n];
    for &c in code {
        deg[c] += 1;
    }
    let mut edges = Vec::with_capacity(n - 1);
    let mut used = alloc::vec![false; n];
    for &c in code {
        let leaf = (0..n).find(|&v| deg[v] == 1 && !used[v]).unwrap();
        used[leaf] = true;
        deg[c] -= 1;
        edges.push((leaf.min(c), leaf.max(c)));
    }
    let rest: Vec<usize> = (0..n).filter(|&v| !used[v] && deg[v] == 1).collect();
    edges.push((rest[0].min(rest[1]), rest[0].max(rest[1])));
    edges.sort_unstable();
    edges
}

fn enumerate_weights(verts: &[Vertex], pairs: &[(usize, usize)], d: u32, ends: EndWeights, out: &mut Vec<PsiFloorDiagram>) {
    let n = verts.len();
    // flow bound: the weight of an edge equals the divergence of its source
    // side, so it is capped by the degree sum on that side
    let mut caps = Vec::with_capacity(pairs.len());
    for (idx, _) in pairs.iter().enumerate() {
        let side = source_side(pairs, idx, n);
        let cap: u32 = side.iter().map(|&v| verts[v].degree).sum();
        if cap == 0 {
            return; // weights are positive; no assignment can balance
        }
        caps.push(cap.min(d));
    }
    // after which edge index is div(v) final (pairs are sorted by (src, tgt))
    let mut last_adjacent = alloc::vec![0usize; n];
    for (i, &(s, t)) in pairs.iter().enumerate() {
        last_adjacent[s] = last_adjacent[s].max(i);
        last_adjacent[t] = last_adjacent[t].max(i);
    }
    let mut div = alloc::vec![0i64; n];
    let mut valence = alloc::vec![0usize; n];
    for &(s, t) in pairs {
        valence[s] += 1;
        valence[t] += 1;
    }
    let mut weights = alloc::vec![0u32; pairs.len()];
    assign_weights(verts, pairs, &caps, &last_adjacent, &valence, ends, 0, &mut weights, &mut div, out);
}

/// Recursive weight assignment with early divergence pruning: once every
/// edge at a vertex carries a weight its divergence is final and conditions
/// (5) and (6) can be checked.
#[allow(clippy::too_many_arguments)]
fn assign_weights(
    verts: &[Vertex],
    pairs: &[(usize, usize)],
    caps: &[u32],
    last_adjacent: &[usize],
    valence: &[usize],
    ends: EndWeights,
    idx: usize,
    weights: &mut [u32],
    div: &mut [i64],
    out: &mut Vec<PsiFloorDiagram>,
) {
    if idx == pairs.len() {
        let edges: Vec<Edge> = pairs
            .iter()
            .zip(weights.iter())
            .map(|(&(s, t), &w)| Edge::new(s, t, w))
            .collect();
        let diagram = PsiFloorDiagram { vertices: verts.to_vec(), edges };
        debug_assert!(diagram.validate_in(ends).is_empty(), "pruning must imply validity: {diagram}");
        out.push(diagram);
        return;
    }
    let (s, t) = pairs[idx];
    for w in 1..=caps[idx] {
        div[s] += w as i64;
        div[t] -= w as i64;
        let mut ok = true;
        for &v in &[s, t] {
            if last_adjacent[v] == idx {
                let vx = verts[v];
                if div[v] > vx.degree as i64 {
                    ok = false;
                    break;
                }
                if vx.degree == 0 && !zero_degree_feasible(vx.psi, valence[v], div[v], ends) {
                    ok = false;
                    break;
                }
            }
        }
        if ok {
            weights[idx] = w;
            assign_weights(verts, pairs, caps, last_adjacent, valence, ends, idx + 1, weights, div, out);
        }
        div[s] -= w as i64;
        div[t] += w as i64;
    }
}

/// Vertices on the source side of edge `idx` once that edge is removed.
fn source_side(pairs: &[(usize, usize)], idx: usize, n: usize) -> Vec<usize> {
    let (src, tgt) = pairs[idx];
    let mut seen = alloc::vec![false; n];
    seen[src] = true;
    seen[tgt] = true; // block crossing the removed edge
    let mut stack = alloc::vec![src];
    let mut side = alloc::vec![src];
    while let Some(v) = stack.pop() {
        for (j, &(a, b)) in pairs.iter().enumerate() {
            if j == idx {
                continue;
            }
            let other = if a == v {
                b
            } else if b == v {
                a
            } else {
                continue;
            };
            if !seen[other] {
                seen[other] = true;
                stack.push(other);
                side.push(other);
            }
        }
    }
    side
}
