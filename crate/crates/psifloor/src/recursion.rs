//! Caporaso-Harris recursion for relative descendant invariants.
//!
//! A key `(d, k, alpha, beta)` fixes the curve degree, the Psi-power
//! multiplicities at point conditions, and the fixed/free tangency data with
//! a line. The recursion removes a point condition of Psi-power `a` (the
//! pivot) and splits the curve into a central piece on the line (an
//! invariant of the line itself, `d'^c / d'!^2`) plus components that
//! re-enter as smaller keys. Every recursive key has strictly smaller `|k|`,
//! which gives termination.
//!
//! Two variants are computed from the same term enumeration and
//! cross-checked: the marked-point count (`invariant_tilde`, one relation
//! per pivot) and the unmarked count (`invariant_n`, summed over pivots).

use alloc::collections::BTreeMap;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use crate::arith::{
    factorial, linear_ext_multinomial, multinomial, rat_big, rat_int, IntSeq, Rational, SeqBase,
};

/// Key of a relative descendant invariant.
#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord)]
pub struct InvariantKey {
    pub degree: u32,
    /// Psi-power multiplicities, base 0.
    pub psi: IntSeq,
    /// Fixed tangencies, base 1.
    pub alpha: IntSeq,
    /// Free tangencies, base 1.
    pub beta: IntSeq,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum KeyError {
    DegreeOutOfRange,
    WrongBase,
    /// `I(alpha + beta) = d` fails.
    TangencyWeight { expected: u64, got: u64 },
    /// `I(alpha + beta + k) = 3d - 1 + |beta| - |k|` fails.
    Dimension { expected: i64, got: i64 },
    /// Pivot index has no point condition to remove.
    EmptyPivot { pivot: u64 },
}

impl fmt::Display for KeyError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            KeyError::DegreeOutOfRange => write!(f, "degree must be at least 1"),
            KeyError::WrongBase => write!(f, "psi sequence must be base 0; tangency sequences base 1"),
            KeyError::TangencyWeight { expected, got } => {
                write!(f, "tangency condition I(alpha+beta) = d violated: expected {expected}, got {got}")
            }
            KeyError::Dimension { expected, got } => {
                write!(f, "dimension condition Ik = 2d-1+|beta|-|k| violated: expected {expected}, got {got}")
            }
            KeyError::EmptyPivot { pivot } => write!(f, "no point condition of Psi-power {pivot}"),
        }
    }
}

impl core::error::Error for KeyError {}

impl InvariantKey {
    pub fn new(degree: u32, psi: IntSeq, alpha: IntSeq, beta: IntSeq) -> Result<Self, KeyError> {
        if degree == 0 {
            return Err(KeyError::DegreeOutOfRange);
        }
        if psi.base() != SeqBase::Zero || alpha.base() != SeqBase::One || beta.base() != SeqBase::One {
            return Err(KeyError::WrongBase);
        }
        let tangency = alpha.weight() + beta.weight();
        if tangency != degree as u64 {
            return Err(KeyError::TangencyWeight { expected: degree as u64, got: tangency });
        }
        let expected = 2 * degree as i64 - 1 + beta.size() as i64 - psi.size() as i64;
        if psi.weight() as i64 != expected {
            return Err(KeyError::Dimension { expected, got: psi.weight() as i64 });
        }
        debug_assert!(psi.size() >= 1, "|k| = 0 is inconsistent with d >= 1");
        Ok(InvariantKey { degree, psi, alpha, beta })
    }

    /// Key of the absolute invariant `N_{d,k}` seen as the relative
    /// invariant with `alpha = ()`, `beta = (d)`.
    pub fn absolute(degree: u32, psi: IntSeq) -> Result<Self, KeyError> {
        let beta = IntSeq::new(SeqBase::One, &[degree as u64]);
        Self::new(degree, psi, IntSeq::zero(SeqBase::One), beta)
    }
}

impl fmt::Display for InvariantKey {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "d={} k=({}) alpha=({}) beta=({})",
            self.degree, self.psi, self.alpha, self.beta
        )
    }
}

/// Invariant of the line: `<1..1 h..h tau^a(h)> = d^c / d!^2` with `0^0 = 1`.
pub fn p1_invariant(degree: u32, point_count: u64) -> Rational {
    if degree == 0 {
        return if point_count == 0 { rat_int(1) } else { rat_int(0) };
    }
    let num = BigInt::from(degree).pow(point_count as u32);
    let df = factorial(degree as u64);
    rat_big(num) / rat_big(&df * &df)
}

/// One component split off by the recursion.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChComponent {
    pub psi: IntSeq,
    pub alpha: IntSeq,
    pub beta: IntSeq,
    pub degree: u32,
    /// Contact order `m = degree - I(alpha + beta)` of the connecting edge.
    pub contact: u32,
}

/// One summand of the recursion for a fixed pivot: `chosen` components feed
/// back with the contact added to their fixed tangencies, `free` components
/// with the contact added to their free tangencies.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChTerm {
    pub pivot: u64,
    pub chosen: Vec<ChComponent>,
    pub free: Vec<ChComponent>,
    pub rest_alpha: IntSeq,
    pub rest_beta: IntSeq,
    pub rest_degree: u32,
}

impl ChTerm {
    pub fn component_count(&self) -> usize {
        self.chosen.len() + self.free.len()
    }
}

/// All recursion terms for the given key and pivot `a` with `k_a > 0`.
///
/// Ordered tuples are enumerated literally; the `1/(t'! (t-t')!)` factor in
/// the term value compensates for permutations within the two groups.
pub fn enumerate_ch_terms(key: &InvariantKey, pivot: u64) -> Result<Vec<ChTerm>, KeyError> {
    if key.psi.at(pivot) == 0 {
        return Err(KeyError::EmptyPivot { pivot });
    }
    let k_rest = key.psi.try_sub(&IntSeq::unit(SeqBase::Zero, pivot)).unwrap();
    let mut out = Vec::new();
    let mut chosen: Vec<ChComponent> = Vec::new();
    let mut free: Vec<ChComponent> = Vec::new();
    split(
        key,
        pivot,
        &k_rest,
        &key.alpha,
        &key.beta,
        key.degree,
        true,
        &mut chosen,
        &mut free,
        &mut out,
    );
    Ok(out)
}

/// Candidate components for the remaining budget. The chosen phase uses the
/// closed form `2d = Ik + |k| + 1 - |beta|`, the free phase
/// `2d = Ik + |k| - |beta|`; both require `d >= 1` and contact `m >= 1`.
fn components(
    k_left: &IntSeq,
    alpha_left: &IntSeq,
    beta_left: &IntSeq,
    degree_left: u32,
    chosen_phase: bool,
) -> Vec<ChComponent> {
    let mut out = Vec::new();
    for kc in k_left.subsequences() {
        if kc.is_zero() {
            continue;
        }
        let base = kc.weight() as i64 + kc.size() as i64 + i64::from(chosen_phase);
        for bc in beta_left.subsequences() {
            let two_d = base - bc.size() as i64;
            if two_d <= 0 || two_d % 2 != 0 {
                continue;
            }
            let d = (two_d / 2) as u32;
            if d > degree_left {
                continue;
            }
            for ac in alpha_left.subsequences() {
                let tangency = ac.weight() + bc.weight();
                if tangency >= d as u64 {
                    continue; // contact must stay positive
                }
                let contact = d - tangency as u32;
                out.push(ChComponent {
                    psi: kc.clone(),
                    alpha: ac,
                    beta: bc.clone(),
                    degree: d,
                    contact,
                });
            }
        }
    }
    out
}

#[allow(clippy::too_many_arguments)]
fn split(
    key: &InvariantKey,
    pivot: u64,
    k_left: &IntSeq,
    alpha_left: &IntSeq,
    beta_left: &IntSeq,
    degree_left: u32,
    chosen_phase: bool,
    chosen: &mut Vec<ChComponent>,
    free: &mut Vec<ChComponent>,
    out: &mut Vec<ChTerm>,
) {
    if chosen_phase {
        // stop adding chosen components and move on
        split(key, pivot, k_left, alpha_left, beta_left, degree_left, false, chosen, free, out);
    } else if k_left.is_zero() {
        let term = ChTerm {
            pivot,
            chosen: chosen.clone(),
            free: free.clone(),
            rest_alpha: alpha_left.clone(),
            rest_beta: beta_left.clone(),
            rest_degree: degree_left,
        };
        // the line invariant's dimension condition is implied by the
        // bookkeeping; a violation here would mean a broken derivation
        let b = term.rest_beta.size() + term.chosen.len() as u64;
        assert_eq!(
            pivot as i64,
            2 * term.rest_degree as i64 - 2 + b as i64,
            "line-invariant dimension condition failed for {key} pivot {pivot}"
        );
        out.push(term);
    }
    for comp in components(k_left, alpha_left, beta_left, degree_left, chosen_phase) {
        let k_next = k_left.try_sub(&comp.psi).unwrap();
        let a_next = alpha_left.try_sub(&comp.alpha).unwrap();
        let b_next = beta_left.try_sub(&comp.beta).unwrap();
        let d_next = degree_left - comp.degree;
        debug_assert!(comp.psi.size() < key.psi.size(), "recursion must shrink |k|");
        if chosen_phase {
            chosen.push(comp);
            split(key, pivot, &k_next, &a_next, &b_next, d_next, true, chosen, free, out);
            chosen.pop();
        } else {
            free.push(comp);
            split(key, pivot, &k_next, &a_next, &b_next, d_next, false, chosen, free, out);
            free.pop();
        }
    }
}

/// Memoizing evaluator for both invariant families.
#[derive(Default)]
pub struct Evaluator {
    n_memo: BTreeMap<InvariantKey, Rational>,
    tilde_memo: BTreeMap<InvariantKey, Rational>,
}

impl Evaluator {
    pub fn new() -> Self {
        Self::default()
    }

    /// Number of memoized unmarked-invariant keys.
    pub fn n_cache_len(&self) -> usize {
        self.n_memo.len()
    }

    /// Iterates over the memoized unmarked invariants.
    pub fn n_cache(&self) -> impl Iterator<Item = (&InvariantKey, &Rational)> {
        self.n_memo.iter()
    }

    /// Pre-seeds the memo table; a conflicting value is reported as an error
    /// carrying the existing entry.
    pub fn seed_n(&mut self, key: InvariantKey, value: Rational) -> Result<(), Rational> {
        if let Some(old) = self.n_memo.get(&key) {
            if *old != value {
                return Err(old.clone());
            }
            return Ok(());
        }
        self.n_memo.insert(key, value);
        Ok(())
    }

    /// The invariant `N_{d,k}(alpha, beta)`: recursion summed over every
    /// pivot `a` with `k_a > 0`.
    pub fn invariant_n(&mut self, key: &InvariantKey) -> Rational {
        if let Some(v) = self.n_memo.get(key) {
            return v.clone();
        }
        let mut total = Rational::zero();
        for (a, c) in key.psi.indexed() {
            if c == 0 {
                continue;
            }
            for term in enumerate_ch_terms(key, a).expect("pivot has a point condition") {
                total += self.n_term_value(key, &term);
            }
        }
        self.n_memo.insert(key.clone(), total.clone());
        total
    }

    fn n_term_value(&mut self, key: &InvariantKey, term: &ChTerm) -> Rational {
        let t = term.component_count() as u64;
        let t_chosen = term.chosen.len() as u64;
        let mut v = self.common_term_factor(term, t, t_chosen);
        if v.is_zero() {
            return v;
        }
        // interleaving of the point conditions below the pivot
        let sizes: Vec<u64> = term.chosen.iter().chain(&term.free).map(|c| c.psi.size()).collect();
        v *= rat_big(
            linear_ext_multinomial(key.psi.size() - 1, &sizes).expect("component sizes partition |k|-1"),
        );
        v /= rat_big(term.rest_beta.factorial_product());
        for comp in &term.chosen {
            let sub = self.component_key(comp, true);
            v *= self.invariant_n(&sub);
        }
        for comp in &term.free {
            let boost = comp.beta.at(comp.contact as u64) + 1;
            let sub = self.component_key(comp, false);
            v *= rat_int(boost as i64) * self.invariant_n(&sub);
        }
        v
    }

    /// The invariant `tilde N_{d,k}(alpha, beta)` computed from the single
    /// relation at the given pivot. The value is independent of the pivot;
    /// recursive calls use the smallest valid pivot.
    pub fn invariant_tilde(&mut self, key: &InvariantKey, pivot: u64) -> Result<Rational, KeyError> {
        if key.psi.at(pivot) == 0 {
            return Err(KeyError::EmptyPivot { pivot });
        }
        let mut total = Rational::zero();
        for term in enumerate_ch_terms(key, pivot)? {
            total += self.tilde_term_value(&term);
        }
        Ok(total)
    }

    fn tilde_canonical(&mut self, key: &InvariantKey) -> Rational {
        if let Some(v) = self.tilde_memo.get(key) {
            return v.clone();
        }
        let pivot = key
            .psi
            .indexed()
            .find(|&(_, c)| c > 0)
            .map(|(a, _)| a)
            .expect("|k| >= 1");
        let mut total = Rational::zero();
        for term in enumerate_ch_terms(key, pivot).expect("canonical pivot is valid") {
            total += self.tilde_term_value(&term);
        }
        self.tilde_memo.insert(key.clone(), total.clone());
        total
    }

    fn tilde_term_value(&mut self, term: &ChTerm) -> Rational {
        let t = term.component_count() as u64;
        let t_chosen = term.chosen.len() as u64;
        let mut v = self.common_term_factor(term, t, t_chosen);
        if v.is_zero() {
            return v;
        }
        let beta_parts: Vec<IntSeq> =
            term.chosen.iter().chain(&term.free).map(|c| c.beta.clone()).collect();
        let beta_whole = beta_parts.iter().fold(term.rest_beta.clone(), |acc, b| &acc + b);
        v *= rat_big(multinomial(&beta_whole, &beta_parts).expect("beta parts fit"));
        let psi_parts: Vec<IntSeq> =
            term.chosen.iter().chain(&term.free).map(|c| c.psi.clone()).collect();
        let psi_whole = psi_parts.iter().fold(IntSeq::zero(SeqBase::Zero), |acc, k| &acc + k);
        v *= rat_big(multinomial(&psi_whole, &psi_parts).expect("psi parts partition k - e_a"));
        for comp in &term.chosen {
            let sub = self.component_key(comp, true);
            v *= self.tilde_canonical(&sub);
        }
        for comp in &term.free {
            let sub = self.component_key(comp, false);
            v *= self.tilde_canonical(&sub);
        }
        v
    }

    /// Factors shared by both variants: contact weights over the symmetry
    /// factorials, the line invariant, and the fixed-tangency multinomial.
    fn common_term_factor(&self, term: &ChTerm, t: u64, t_chosen: u64) -> Rational {
        let exponent = term.rest_alpha.size() + (t - t_chosen);
        let line = p1_invariant(term.rest_degree, exponent);
        if line.is_zero() {
            return line;
        }
        let mut contacts = BigInt::one();
        for c in term.chosen.iter().chain(&term.free) {
            contacts *= BigInt::from(c.contact);
        }
        let mut v = rat_big(contacts) * line;
        v /= rat_big(factorial(t_chosen) * factorial(t - t_chosen));
        let alpha_parts: Vec<IntSeq> =
            term.chosen.iter().chain(&term.free).map(|c| c.alpha.clone()).collect();
        let alpha_whole = alpha_parts.iter().fold(term.rest_alpha.clone(), |acc, a| &acc + a);
        v *= rat_big(multinomial(&alpha_whole, &alpha_parts).expect("alpha parts fit"));
        v
    }

    fn component_key(&self, comp: &ChComponent, chosen: bool) -> InvariantKey {
        let contact = IntSeq::unit(SeqBase::One, comp.contact as u64);
        let (alpha, beta) = if chosen {
            (&comp.alpha + &contact, comp.beta.clone())
        } else {
            (comp.alpha.clone(), &comp.beta + &contact)
        };
        InvariantKey::new(comp.degree, comp.psi.clone(), alpha, beta)
            .expect("component keys satisfy the dimension conditions")
    }
}

/// `tilde N = beta! k!/|k|! N`; for the absolute invariant pass `beta = ()`.
pub fn n_to_tilde(n: &Rational, psi: &IntSeq, beta: &IntSeq) -> Rational {
    n * rat_big(beta.factorial_product() * psi.factorial_product())
        / rat_big(factorial(psi.size()))
}

/// Inverse of [`n_to_tilde`].
pub fn tilde_to_n(tilde: &Rational, psi: &IntSeq, beta: &IntSeq) -> Rational {
    tilde * rat_big(factorial(psi.size()))
        / rat_big(beta.factorial_product() * psi.factorial_product())
}

/// Every valid key of the given degree (all `(alpha, beta)` splittings of
/// the tangency budget and all Psi-power sequences meeting the dimension
/// condition). Intended for exhaustive cross-validation at desk scale.
pub fn admissible_keys(degree: u32) -> Vec<InvariantKey> {
    let mut out = Vec::new();
    let d = degree as u64;
    for alpha_weight in 0..=d {
        for alpha in sequences_of_weight(alpha_weight) {
            for beta in sequences_of_weight(d - alpha_weight) {
                let total = 2 * d + beta.size();
                if total == 0 {
                    continue;
                }
                for psi in sequences_of_total(total - 1) {
                    if let Ok(key) = InvariantKey::new(degree, psi, alpha.clone(), beta.clone()) {
                        out.push(key);
                    }
                }
            }
        }
    }
    out
}

/// Base-1 sequences with `I(s) = weight`.
fn sequences_of_weight(weight: u64) -> Vec<IntSeq> {
    fn rec(left: u64, index: u64, entries: &mut Vec<u64>, out: &mut Vec<IntSeq>) {
        if left == 0 {
            out.push(IntSeq::new(SeqBase::One, entries));
            return;
        }
        if index > left {
            return;
        }
        for count in 0..=(left / index) {
            entries.push(count);
            rec(left - count * index, index + 1, entries, out);
            entries.pop();
        }
    }
    let mut out = Vec::new();
    rec(weight, 1, &mut Vec::new(), &mut out);
    out
}

/// Base-0 sequences with `Ik + |k| = total` (an index-i entry costs i + 1).
fn sequences_of_total(total: u64) -> Vec<IntSeq> {
    fn rec(left: u64, index: u64, entries: &mut Vec<u64>, out: &mut Vec<IntSeq>) {
        if left == 0 {
            out.push(IntSeq::new(SeqBase::Zero, entries));
            return;
        }
        let unit = index + 1;
        if unit > left {
            return;
        }
        for count in 0..=(left / unit) {
            entries.push(count);
            rec(left - count * unit, index + 1, entries, out);
            entries.pop();
        }
    }
    let mut out = Vec::new();
    rec(total, 0, &mut Vec::new(), &mut out);
    out
}
