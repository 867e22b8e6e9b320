//! Markings of a diagram with an edge choice, counted as linear extensions.
//!
//! The marking process adds, per floor, one white vertex for each non-chosen
//! end edge, and subdivides each non-chosen edge between two floors. Edges at
//! degree-0 vertices add nothing: all their adjacent objects sit directly at
//! that Psi-point, whose symmetry factor already lives in the diagram
//! multiplicity. Every added vertex is constrained to an interval of the
//! base order (after its attachment; before the head of a subdivided edge),
//! so extensions are counted by a gap-placement DP over subsets of the added
//! vertices. The marking count `nu` divides the labeled extension count by
//! the factorials of the sibling groups of indistinguishable added vertices.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use crate::choices::EdgeChoice;
use crate::diagram::PsiFloorDiagram;

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub enum AddedKind {
    /// Weight-1 end at a floor (absolute marking).
    End,
    /// Non-fixed tangency end at a floor (relative marking).
    Beta,
    /// Midpoint of a subdivided internal edge.
    Subdivision,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct AddedVertex {
    pub kind: AddedKind,
    pub weight: u32,
    /// Base vertex it must follow.
    pub attach: usize,
    /// Base vertex it must precede (subdivision vertices only).
    pub before: Option<usize>,
}

/// Base chain of diagram vertices plus interval-constrained added vertices.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct MarkingPoset {
    pub base_len: usize,
    pub added: Vec<AddedVertex>,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum PosetError {
    /// An added vertex has contradictory bounds (no admissible position).
    InconsistentBounds { added: usize },
    AttachOutOfRange { added: usize },
}

impl fmt::Display for PosetError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            PosetError::InconsistentBounds { added } => {
                write!(f, "added vertex {added} has an empty position interval")
            }
            PosetError::AttachOutOfRange { added } => {
                write!(f, "added vertex {added} attaches outside the base chain")
            }
        }
    }
}

impl core::error::Error for PosetError {}

impl MarkingPoset {
    /// Groups of mutually indistinguishable added vertices: same kind, same
    /// weight, same attachment (and same head for subdivisions, which makes
    /// those groups singletons in a tree).
    pub fn sibling_groups(&self) -> Vec<Vec<usize>> {
        let mut groups: BTreeMap<(AddedKind, u32, usize, Option<usize>), Vec<usize>> = BTreeMap::new();
        for (i, a) in self.added.iter().enumerate() {
            groups.entry((a.kind, a.weight, a.attach, a.before)).or_default().push(i);
        }
        groups.into_values().collect()
    }

    fn check(&self) -> Result<(), PosetError> {
        for (i, a) in self.added.iter().enumerate() {
            if a.attach >= self.base_len || a.before.is_some_and(|b| b >= self.base_len) {
                return Err(PosetError::AttachOutOfRange { added: i });
            }
            if a.before.is_some_and(|b| b <= a.attach) {
                return Err(PosetError::InconsistentBounds { added: i });
            }
        }
        Ok(())
    }
}

/// Builds the marking poset of a diagram with an edge choice.
///
/// With `D` valid and `C` a valid choice the number of added vertices always
/// equals the white-vertex count of the diagram type.
pub fn build_marking_poset(diagram: &PsiFloorDiagram, choice: &EdgeChoice) -> MarkingPoset {
    let mut added = Vec::new();
    for (v, vx) in diagram.vertices().iter().enumerate() {
        if !vx.is_floor() {
            continue;
        }
        let free_ends = diagram.end_edges(v).max(0) as u64 - choice.chosen_at(v).end_count;
        for _ in 0..free_ends {
            added.push(AddedVertex { kind: AddedKind::End, weight: 1, attach: v, before: None });
        }
    }
    for (i, e) in diagram.edges().iter().enumerate() {
        if diagram.vertices()[e.src].degree == 0 || diagram.vertices()[e.tgt].degree == 0 {
            continue;
        }
        let chosen = choice
            .per_vertex
            .iter()
            .any(|ch| ch.internal.contains(&i));
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

/// Number of linear orders on base plus added vertices extending the base
/// chain and all interval constraints, with added vertices treated as
/// distinguishable.
pub fn count_linear_extensions(poset: &MarkingPoset) -> Result<u128, PosetError> {
    poset.check()?;
    let n = poset.base_len;
    let m = poset.added.len();
    assert!(m < 32, "marking poset too large");
    // allowed gap range per added vertex; gap j = position right after base j
    let lo: Vec<usize> = poset.added.iter().map(|a| a.attach).collect();
    let hi: Vec<usize> = poset
        .added
        .iter()
        .map(|a| a.before.map(|b| b - 1).unwrap_or(n - 1))
        .collect();
    let full: u32 = if m == 0 { 0 } else { (1u32 << m) - 1 };
    let mut memo: BTreeMap<(usize, u32), u128> = BTreeMap::new();
    fn rec(
        gap: usize,
        placed: u32,
        n: usize,
        full: u32,
        lo: &[usize],
        hi: &[usize],
        memo: &mut BTreeMap<(usize, u32), u128>,
    ) -> u128 {
        if gap == n {
            return if placed == full { 1 } else { 0 };
        }
        if let Some(&v) = memo.get(&(gap, placed)) {
            return v;
        }
        let mut must: u32 = 0;
        let mut can: u32 = 0;
        for i in 0..lo.len() {
            let bit = 1u32 << i;
            if placed & bit != 0 {
                continue;
            }
            if hi[i] < gap {
                // past its window without being placed
                memo.insert((gap, placed), 0);
                return 0;
            }
            if lo[i] <= gap {
                can |= bit;
                if hi[i] == gap {
                    must |= bit;
                }
            }
        }
        let opt = can & !must;
        // iterate subsets of the optional items, always including `must`
        let mut total = 0u128;
        let mut sub = opt;
        loop {
            let pick = sub | must;
            let size = pick.count_ones() as u128;
            let mut ways = 1u128;
            for f in 1..=size {
                ways *= f;
            }
            total += ways * rec(gap + 1, placed | pick, n, full, lo, hi, memo);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & opt;
        }
        memo.insert((gap, placed), total);
        total
    }
    Ok(rec(0, 0, n, full, &lo, &hi, &mut memo))
}

/// Number of markings `nu(D, C)`: labeled linear extensions divided by the
/// sibling-group factorials. The division is always exact; a remainder
/// indicates a sibling-group bug and aborts.
pub fn count_markings(diagram: &PsiFloorDiagram, choice: &EdgeChoice) -> u128 {
    let poset = build_marking_poset(diagram, choice);
    count_markings_of_poset(&poset)
}

pub fn count_markings_of_poset(poset: &MarkingPoset) -> u128 {
    let labeled = count_linear_extensions(poset).expect("marking poset is well-formed");
    let mut quotient = 1u128;
    for g in poset.sibling_groups() {
        for f in 1..=g.len() as u128 {
            quotient *= f;
        }
    }
    assert!(labeled.is_multiple_of(quotient), "sibling quotient must divide the labeled count");
    labeled / quotient
}
