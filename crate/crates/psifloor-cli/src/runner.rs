//! Computation orchestration: request resolution, the two methods, optional
//! parallel summation over diagrams, and result bookkeeping for the cache.

use std::collections::BTreeMap;
use std::fmt;
use std::time::{Duration, Instant};

use psifloor::arith::{IntSeq, Rational, SeqBase};
use psifloor::diagram::{enumerate_diagrams, enumerate_diagrams_relative};
use psifloor::engine::{
    absolute_diagram_contribution, relative_diagram_contribution, EngineError,
};
use psifloor::recursion::{n_to_tilde, Evaluator, InvariantKey};

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum Method {
    Floor,
    Recursion,
    Both,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Method::Floor => write!(f, "enumeration"),
            Method::Recursion => write!(f, "recursion"),
            Method::Both => write!(f, "both"),
        }
    }
}

/// A resolved request: the invariant key plus whether the request meant the
/// absolute invariant (no explicit tangency data given).
#[derive(Clone, Debug)]
pub struct Request {
    pub key: InvariantKey,
    pub absolute: bool,
}

impl Request {
    /// An omitted `beta` selects the absolute invariant `N_{d,k}`, whose
    /// recursion key is the specialization `alpha = ()`, `beta = (d)`.
    pub fn resolve(
        d: u32,
        k: IntSeq,
        alpha: Option<IntSeq>,
        beta: Option<IntSeq>,
    ) -> Result<Request, EngineError> {
        let absolute = beta.is_none();
        let alpha = alpha.unwrap_or_else(|| IntSeq::zero(SeqBase::One));
        let beta = beta.unwrap_or_else(|| IntSeq::new(SeqBase::One, &[d as u64]));
        let key = InvariantKey::new(d, k, alpha, beta)?;
        Ok(Request { key, absolute })
    }

    /// Conversion factor target: the absolute variant drops `beta!`.
    pub fn tilde(&self, n: &Rational) -> Rational {
        if self.absolute {
            n_to_tilde(n, &self.key.psi, &IntSeq::zero(SeqBase::One))
        } else {
            n_to_tilde(n, &self.key.psi, &self.key.beta)
        }
    }
}

/// One computed invariant with provenance.
#[derive(Clone, Debug)]
pub struct Computation {
    pub key: InvariantKey,
    pub value_n: Rational,
    /// Cache-level conversion `beta! k!/|k|! N` of the stored key.
    pub value_tilde: Rational,
    pub method: Method,
    /// Number of enumerated diagrams (enumeration only).
    pub diagram_count: Option<usize>,
    pub elapsed: Duration,
}

/// The invariant by diagram enumeration, with the work split over `workers`
/// threads diagram by diagram. Rational addition is exact and commutative,
/// so the result does not depend on the split.
pub fn floor_value(
    request: &Request,
    workers: usize,
) -> Result<(Rational, usize), EngineError> {
    let key = &request.key;
    let diagrams = if request.absolute {
        enumerate_diagrams(key.degree, &key.psi)?
    } else {
        enumerate_diagrams_relative(key.degree, &key.psi, key.beta.size())?
    };
    let count = diagrams.len();
    let contribution = |d: &psifloor::PsiFloorDiagram| {
        if request.absolute {
            absolute_diagram_contribution(d)
        } else {
            relative_diagram_contribution(d, &key.alpha, &key.beta)
        }
    };
    let zero = || Rational::from_integer(0.into());
    if workers <= 1 || count < 2 {
        return Ok((diagrams.iter().map(contribution).fold(zero(), |a, b| a + b), count));
    }
    let workers = workers.min(count);
    let total = std::thread::scope(|scope| {
        let handles: Vec<_> = (0..workers)
            .map(|w| {
                let diagrams = &diagrams;
                let contribution = &contribution;
                scope.spawn(move || {
                    diagrams
                        .iter()
                        .skip(w)
                        .step_by(workers)
                        .map(contribution)
                        .fold(zero(), |a, b| a + b)
                })
            })
            .collect();
        handles.into_iter().map(|h| h.join().expect("worker panicked")).fold(zero(), |a, b| a + b)
    });
    Ok((total, count))
}

/// Evaluator plus the provenance of every computed key, for persistence.
#[derive(Default)]
pub struct Engine {
    pub evaluator: Evaluator,
    methods: BTreeMap<InvariantKey, Method>,
}

impl Engine {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn compute(
        &mut self,
        request: &Request,
        method: Method,
        workers: usize,
    ) -> Result<Computation, EngineError> {
        let start = Instant::now();
        let key = request.key.clone();
        let (value, diagram_count) = match method {
            Method::Recursion => (self.evaluator.invariant_n(&key), None),
            Method::Floor | Method::Both => {
                let (v, n) = floor_value(request, workers)?;
                (v, Some(n))
            }
        };
        self.note_method(&key, method);
        Ok(Computation {
            value_tilde: n_to_tilde(&value, &key.psi, &key.beta),
            key,
            value_n: value,
            method,
            diagram_count,
            elapsed: start.elapsed(),
        })
    }

    /// Both paths on one request; a mismatch is a reportable failure
    /// rather than an error.
    pub fn crosscheck(
        &mut self,
        request: &Request,
        workers: usize,
    ) -> Result<(Rational, Rational), EngineError> {
        let (floor, _) = floor_value(request, workers)?;
        let recursion = self.evaluator.invariant_n(&request.key);
        self.note_method(&request.key, Method::Both);
        Ok((floor, recursion))
    }

    fn note_method(&mut self, key: &InvariantKey, method: Method) {
        let entry = self.methods.entry(key.clone()).or_insert(method);
        if *entry != method {
            *entry = Method::Both;
        }
    }

    /// Provenance of a key; plain recursion cache entries default to
    /// `recursion`.
    pub fn method_of(&self, key: &InvariantKey) -> Method {
        self.methods.get(key).copied().unwrap_or(Method::Recursion)
    }

    pub fn set_method(&mut self, key: InvariantKey, method: Method) {
        self.methods.insert(key, method);
    }
}
