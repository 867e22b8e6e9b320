//! Sequence calculus and exact combinatorial primitives.
//!
//! An [`IntSeq`] is a finitely supported sequence of non-negative integers.
//! Psi-power sequences `k` are indexed from 0, tangency sequences `alpha` and
//! `beta` from 1; the indexing base is part of the value and mixing bases in
//! arithmetic is a programming error, not a coercion. For a sequence `k` the
//! derived quantities are
//!
//! ```text
//! |k| = k_0 + k_1 + ...      Ik  = 0 k_0 + 1 k_1 + 2 k_2 + ...
//! I^k = 0^{k_0} 1^{k_1} ...  k!  = k_0! k_1! ...
//! ```
//!
//! with the convention `0^0 = 1`.

use alloc::string::String;
use alloc::vec::Vec;
use core::fmt;
use core::ops::Add;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

/// Exact rational number, always in lowest terms with positive denominator.
///
/// Serializes as `p/q`, or plain `n` when the denominator is 1.
pub type Rational = num_rational::BigRational;

/// Rational from an integer.
pub fn rat_int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

/// Rational from a big integer.
pub fn rat_big(n: BigInt) -> Rational {
    Rational::from_integer(n)
}

/// Rational `p/q`.
pub fn rat(p: i64, q: i64) -> Rational {
    Rational::new(BigInt::from(p), BigInt::from(q))
}

/// Starting index of a sequence: 0 for Psi-power types, 1 for tangency data.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum SeqBase {
    Zero,
    One,
}

impl SeqBase {
    fn start(self) -> u64 {
        match self {
            SeqBase::Zero => 0,
            SeqBase::One => 1,
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct IntSeq {
    base: SeqBase,
    entries: Vec<u64>,
}

impl IntSeq {
    /// Canonical sequence: trailing zeros are trimmed.
    pub fn new(base: SeqBase, entries: &[u64]) -> Self {
        let mut entries = entries.to_vec();
        while entries.last() == Some(&0) {
            entries.pop();
        }
        IntSeq { base, entries }
    }

    pub fn base0(entries: &[u64]) -> Self {
        Self::new(SeqBase::Zero, entries)
    }

    pub fn base1(entries: &[u64]) -> Self {
        Self::new(SeqBase::One, entries)
    }

    pub fn zero(base: SeqBase) -> Self {
        IntSeq { base, entries: Vec::new() }
    }

    /// The unit sequence `e_index` with a single 1 at `index`.
    pub fn unit(base: SeqBase, index: u64) -> Self {
        assert!(index >= base.start(), "unit index below sequence base");
        let mut entries = alloc::vec![0; (index - base.start()) as usize + 1];
        *entries.last_mut().unwrap() = 1;
        IntSeq { base, entries }
    }

    pub fn base(&self) -> SeqBase {
        self.base
    }

    /// Raw entries in canonical form, starting at the base index.
    pub fn entries(&self) -> &[u64] {
        &self.entries
    }

    pub fn is_zero(&self) -> bool {
        self.entries.is_empty()
    }

    /// Entry at the given index (base-aware; 0 outside the support).
    pub fn at(&self, index: u64) -> u64 {
        if index < self.base.start() {
            return 0;
        }
        let pos = (index - self.base.start()) as usize;
        self.entries.get(pos).copied().unwrap_or(0)
    }

    /// Iterator over `(index, entry)` pairs of the support range.
    pub fn indexed(&self) -> impl Iterator<Item = (u64, u64)> + '_ {
        let start = self.base.start();
        self.entries.iter().enumerate().map(move |(i, &c)| (start + i as u64, c))
    }

    /// `|k|`: the sum of the entries.
    pub fn size(&self) -> u64 {
        self.entries.iter().sum()
    }

    /// `Ik`: the index-weighted sum of the entries.
    pub fn weight(&self) -> u64 {
        self.indexed().map(|(i, c)| i * c).sum()
    }

    /// `I^k`: the product of `index^entry` with `0^0 = 1`.
    pub fn power_product(&self) -> BigInt {
        let mut acc = BigInt::one();
        for (i, c) in self.indexed() {
            if c == 0 {
                continue;
            }
            if i == 0 {
                return BigInt::zero();
            }
            acc *= BigInt::from(i).pow(c as u32);
        }
        acc
    }

    /// `k!`: the product of the factorials of the entries.
    pub fn factorial_product(&self) -> BigInt {
        self.entries.iter().map(|&c| factorial(c)).product()
    }

    /// Entrywise difference, defined only when the result stays non-negative.
    pub fn try_sub(&self, rhs: &IntSeq) -> Option<IntSeq> {
        assert_eq!(self.base, rhs.base, "sequence base mismatch");
        if rhs.entries.len() > self.entries.len() {
            return None;
        }
        let mut entries = self.entries.clone();
        for (i, &c) in rhs.entries.iter().enumerate() {
            entries[i] = entries[i].checked_sub(c)?;
        }
        Some(IntSeq::new(self.base, &entries))
    }

    /// Entrywise partial order.
    pub fn le(&self, rhs: &IntSeq) -> bool {
        assert_eq!(self.base, rhs.base, "sequence base mismatch");
        self.indexed().all(|(i, c)| c <= rhs.at(i))
    }

    /// All sequences `s <= self` entrywise, in lexicographic entry order.
    pub fn subsequences(&self) -> Vec<IntSeq> {
        let mut out = Vec::new();
        let mut cur = alloc::vec![0u64; self.entries.len()];
        loop {
            out.push(IntSeq::new(self.base, &cur));
            let mut pos = self.entries.len();
            loop {
                if pos == 0 {
                    return out;
                }
                pos -= 1;
                if cur[pos] < self.entries[pos] {
                    cur[pos] += 1;
                    for e in cur[pos + 1..].iter_mut() {
                        *e = 0;
                    }
                    break;
                }
            }
        }
    }

    /// Parses a comma-separated entry list; the empty string is the zero
    /// sequence.
    pub fn parse(text: &str, base: SeqBase) -> Result<IntSeq, ArithError> {
        let text = text.trim();
        if text.is_empty() {
            return Ok(IntSeq::zero(base));
        }
        let mut entries = Vec::new();
        for part in text.split(',') {
            let n = part
                .trim()
                .parse::<u64>()
                .map_err(|_| ArithError::BadSequence(String::from(text)))?;
            entries.push(n);
        }
        Ok(IntSeq::new(base, &entries))
    }
}

impl Add<&IntSeq> for &IntSeq {
    type Output = IntSeq;

    fn add(self, rhs: &IntSeq) -> IntSeq {
        assert_eq!(self.base, rhs.base, "sequence base mismatch");
        let len = self.entries.len().max(rhs.entries.len());
        let mut entries = alloc::vec![0u64; len];
        for (i, e) in entries.iter_mut().enumerate() {
            *e = self.entries.get(i).copied().unwrap_or(0) + rhs.entries.get(i).copied().unwrap_or(0);
        }
        IntSeq::new(self.base, &entries)
    }
}

impl fmt::Display for IntSeq {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (i, c) in self.entries.iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// Summary of the derived quantities of a sequence.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SeqNorm {
    pub size: u64,
    pub weight: u64,
    pub power_product: BigInt,
    pub factorial_product: BigInt,
}

/// `(|k|, Ik, I^k, k!)` in one pass.
pub fn seq_norm(k: &IntSeq) -> SeqNorm {
    SeqNorm {
        size: k.size(),
        weight: k.weight(),
        power_product: k.power_product(),
        factorial_product: k.factorial_product(),
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum ArithError {
    /// Parts of a multinomial exceed the whole entrywise.
    PartsExceedWhole,
    /// Block sizes of an interleaving multinomial do not sum to the total.
    BlockSumMismatch { total: u64, sum: u64 },
    /// Unparseable sequence text.
    BadSequence(String),
}

impl fmt::Display for ArithError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ArithError::PartsExceedWhole => write!(f, "multinomial parts exceed the whole sequence"),
            ArithError::BlockSumMismatch { total, sum } => {
                write!(f, "block sizes sum to {sum}, expected {total}")
            }
            ArithError::BadSequence(s) => write!(f, "cannot parse sequence {s:?}"),
        }
    }
}

impl core::error::Error for ArithError {}

pub fn factorial(n: u64) -> BigInt {
    let mut acc = BigInt::one();
    for i in 2..=n {
        acc *= BigInt::from(i);
    }
    acc
}

/// Multinomial of sequences with remainder:
/// `prod_i whole_i! / (parts[0]_i! ... parts[t-1]_i! rem_i!)` where
/// `rem = whole - sum(parts)`.
pub fn multinomial(whole: &IntSeq, parts: &[IntSeq]) -> Result<BigInt, ArithError> {
    let mut rem = whole.clone();
    let mut denom = BigInt::one();
    for p in parts {
        rem = rem.try_sub(p).ok_or(ArithError::PartsExceedWhole)?;
        denom *= p.factorial_product();
    }
    denom *= rem.factorial_product();
    let num = whole.factorial_product();
    debug_assert!((&num % &denom).is_zero());
    Ok(num / denom)
}

/// Stirling number of the second kind `S(e, g)`: partitions of an e-element
/// set into g non-empty parts.
pub fn stirling2(e: u64, g: u64) -> BigInt {
    if g > e {
        return BigInt::zero();
    }
    if e == 0 {
        return BigInt::one();
    }
    if g == 0 {
        return BigInt::zero();
    }
    // S(e, g) = g S(e-1, g) + S(e-1, g-1)
    let mut row = alloc::vec![BigInt::zero(); g as usize + 1];
    row[0] = BigInt::one();
    for _ in 1..=e {
        for j in (1..row.len()).rev() {
            row[j] = BigInt::from(j as u64) * &row[j] + &row[j - 1];
        }
        row[0] = BigInt::zero();
    }
    row[g as usize].clone()
}

/// Interleaving count `total! / prod(blocks[j]!)` for blocks that partition
/// a `total`-element linearly ordered set.
pub fn linear_ext_multinomial(total: u64, blocks: &[u64]) -> Result<BigInt, ArithError> {
    let sum: u64 = blocks.iter().sum();
    if sum != total {
        return Err(ArithError::BlockSumMismatch { total, sum });
    }
    let mut denom = BigInt::one();
    for &b in blocks {
        denom *= factorial(b);
    }
    Ok(factorial(total) / denom)
}

/// Parses a rational in the `p/q` or `n` wire format.
pub fn parse_rational(text: &str) -> Option<Rational> {
    text.trim().parse::<Rational>().ok().filter(|r| r.denom().is_positive())
}
