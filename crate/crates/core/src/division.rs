//! Per-basis data `S_e`, `M_e`, `P_e`, `P_e P_e` and the three division-basis
//! predicates (i-division, weak-division, semi-division).
//!
//! Each predicate quantifies over elements `x` of a subspace and asks that
//! whenever `0 ≠ e_i x = c` or `0 ≠ x e_i = c`, both factors lie in the ideal
//! generated by `c`. Since that ideal is unchanged by rescaling `c`, and
//! rescaling `x` rescales `c`, only one representative per line is checked.

use std::collections::{BTreeSet, HashMap};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed};
use thiserror::Error;

use crate::algebra::AlgebraPresentation;
use crate::field::Field;
use crate::linalg::{Subspace, Vector};

pub const DEFAULT_REFUTE_BOUND: u32 = 2;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DivisionError {
    #[error("exhaustive checking needs a prime field, algebra is over {0}")]
    ExhaustiveOverInfiniteField(Field),
}

/// Combinatorial data attached to one basis element `e_i`.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct IndexProfile {
    /// `S_{e_i}`: indices `j` with `e_i e_j ≠ 0` or `e_j e_i ≠ 0`.
    pub s_set: BTreeSet<usize>,
    /// `M_{e_i}`, the span of `S_{e_i}`.
    pub m_space: Subspace,
    /// `P_{e_i}`: indices of factors of basis products with nonzero `e_i`-coordinate.
    pub p_set: BTreeSet<usize>,
    /// Nonzero products `e_j e_k` with `j, k ∈ P_{e_i}`, deduplicated, in ascending order.
    pub pp_products: Vec<Vector>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisProfile {
    pub indices: Vec<IndexProfile>,
}

impl BasisProfile {
    pub fn of(a: &AlgebraPresentation) -> Self {
        basis_profile(a)
    }

    pub fn get(&self, i: usize) -> &IndexProfile {
        &self.indices[i]
    }
}

pub fn basis_profile(a: &AlgebraPresentation) -> BasisProfile {
    let n = a.dim();
    let field = a.field();
    let mut s_sets = vec![BTreeSet::new(); n];
    let mut p_sets = vec![BTreeSet::new(); n];
    for (i, j, coeffs) in a.nonzero_products() {
        s_sets[i].insert(j);
        s_sets[j].insert(i);
        for &k in coeffs.keys() {
            p_sets[k].insert(i);
            p_sets[k].insert(j);
        }
    }
    let indices = (0..n)
        .map(|i| {
            let s_set = std::mem::take(&mut s_sets[i]);
            let p_set = std::mem::take(&mut p_sets[i]);
            let members: Vec<usize> = s_set.iter().copied().collect();
            let m_space = Subspace::coordinate(field, n, &members).expect("indices in range");
            let mut pp = BTreeSet::new();
            for &j in &p_set {
                for &k in &p_set {
                    let b = a.basis_product(j, k);
                    if !b.is_zero() {
                        pp.insert(b.clone());
                    }
                }
            }
            IndexProfile {
                s_set,
                m_space,
                p_set,
                pp_products: pp.into_iter().collect(),
            }
        })
        .collect();
    BasisProfile { indices }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum CheckMode {
    /// Every line of the quantified subspace; prime fields only.
    Exhaustive,
    /// Primitive integer vectors with coordinates in `-bound..=bound`.
    RefuteOnly { bound: u32 },
}

impl CheckMode {
    pub fn refute() -> Self {
        CheckMode::RefuteOnly {
            bound: DEFAULT_REFUTE_BOUND,
        }
    }

    /// Exhaustive over prime fields, bounded refutation over the rationals.
    pub fn strongest(field: Field) -> Self {
        if field.is_finite() {
            CheckMode::Exhaustive
        } else {
            CheckMode::refute()
        }
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Status {
    Holds,
    Fails,
    Unknown,
}

/// Which of the two product orders produced the offending `c`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum ProductOrder {
    /// `c = partner · element`.
    PartnerFirst,
    /// `c = element · partner`.
    ElementFirst,
}

/// Which factor was missing from `I(c)`.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Missing {
    Partner,
    Element,
}

/// Which clause of a definition was violated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum Clause {
    /// `e_i` against an element `x` (of `A` or of `M_{e_i}`).
    Division,
    /// The extra semi-division clause: `b ∈ P_{e_i}P_{e_i}` against `e_j ∈ S_{e_i}`.
    PairProduct,
}

/// A replayable violation.
///
/// `partner` is the basis element (`e_i`, or `e_j` for the pair clause) and
/// `element` the quantified vector (`x`, or `b`).
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Witness {
    pub clause: Clause,
    /// The index `i` whose condition failed.
    pub index: usize,
    /// Basis index of `partner`.
    pub partner_index: usize,
    pub partner: Vector,
    pub element: Vector,
    pub order: ProductOrder,
    pub product: Vector,
    pub missing: Missing,
}

impl Witness {
    /// Recomputes the product and the ideal it generates from scratch and
    /// confirms the recorded factor is not in it.
    pub fn replay(&self, a: &AlgebraPresentation) -> bool {
        let c = match self.order {
            ProductOrder::PartnerFirst => a.product(&self.partner, &self.element),
            ProductOrder::ElementFirst => a.product(&self.element, &self.partner),
        };
        let Ok(c) = c else { return false };
        if c.is_zero() || c != self.product {
            return false;
        }
        let Ok(ideal) = a.ideal_closure(std::slice::from_ref(&c)) else {
            return false;
        };
        let probe = match self.missing {
            Missing::Partner => &self.partner,
            Missing::Element => &self.element,
        };
        !ideal.contains(probe).unwrap_or(true)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DivisionVerdict {
    pub status: Status,
    pub witness: Option<Witness>,
    pub mode: CheckMode,
}

impl DivisionVerdict {
    pub fn holds(&self) -> bool {
        self.status == Status::Holds
    }

    pub fn fails(&self) -> bool {
        self.status == Status::Fails
    }

    fn failed(mode: CheckMode, witness: Witness) -> Self {
        DivisionVerdict {
            status: Status::Fails,
            witness: Some(witness),
            mode,
        }
    }

    fn passed(mode: CheckMode) -> Self {
        DivisionVerdict {
            status: match mode {
                CheckMode::Exhaustive => Status::Holds,
                CheckMode::RefuteOnly { .. } => Status::Unknown,
            },
            witness: None,
            mode,
        }
    }
}

/// The three predicates, for callers that pick one at run time.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum DivisionKind {
    Weak,
    Semi,
    I,
}

impl DivisionKind {
    pub fn check(self, a: &AlgebraPresentation, mode: CheckMode) -> Result<DivisionVerdict, DivisionError> {
        match self {
            DivisionKind::Weak => check_weak_division(a, &basis_profile(a), mode),
            DivisionKind::Semi => check_semi_division(a, &basis_profile(a), mode),
            DivisionKind::I => check_i_division(a, mode),
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            DivisionKind::Weak => "weak-division",
            DivisionKind::Semi => "semi-division",
            DivisionKind::I => "i-division",
        }
    }
}

/// Memoizes `I(c)` by the normalized generator.
struct IdealCache<'a> {
    algebra: &'a AlgebraPresentation,
    ideals: HashMap<Vector, Subspace>,
}

impl<'a> IdealCache<'a> {
    fn new(algebra: &'a AlgebraPresentation) -> Self {
        IdealCache {
            algebra,
            ideals: HashMap::new(),
        }
    }

    fn generated_by(&mut self, c: &Vector) -> &Subspace {
        let key = c.normalized();
        let algebra = self.algebra;
        self.ideals
            .entry(key)
            .or_insert_with_key(|k| algebra.principal_ideal(k))
    }

    /// For each nonzero `c` among `partner·element` and `element·partner`,
    /// tests `partner, element ∈ I(c)`. The division clause tries `e_i x`
    /// first, the pair clause `b e_j` first.
    fn check_pair(&mut self, clause: Clause, index: usize, partner_index: usize, element: &Vector) -> Option<Witness> {
        let a = self.algebra;
        let partner = a.basis_vector(partner_index);
        let orders = match clause {
            Clause::Division => [ProductOrder::PartnerFirst, ProductOrder::ElementFirst],
            Clause::PairProduct => [ProductOrder::ElementFirst, ProductOrder::PartnerFirst],
        };
        for order in orders {
            let c = match order {
                ProductOrder::PartnerFirst => a.mul_basis_left(partner_index, element),
                ProductOrder::ElementFirst => a.mul_basis_right(element, partner_index),
            };
            if c.is_zero() {
                continue;
            }
            let ideal = self.generated_by(&c);
            let missing = if !ideal.contains_unchecked(&partner) {
                Missing::Partner
            } else if !ideal.contains_unchecked(element) {
                Missing::Element
            } else {
                continue;
            };
            return Some(Witness {
                clause,
                index,
                partner_index,
                partner,
                element: element.clone(),
                order,
                product: c,
                missing,
            });
        }
        None
    }
}

/// Candidate elements supported on `support`, in lexicographic order of coordinates.
///
/// Exhaustive: every vector whose leading coordinate is one. RefuteOnly:
/// primitive integer vectors with entries in `-bound..=bound` and positive
/// leading entry.
pub(crate) fn candidates(
    field: Field,
    dim: usize,
    support: &[usize],
    mode: CheckMode,
) -> Result<Vec<Vector>, DivisionError> {
    let values: Vec<i64> = match mode {
        CheckMode::Exhaustive => {
            let p = field
                .modulus()
                .ok_or(DivisionError::ExhaustiveOverInfiniteField(field))?;
            (0..p as i64).collect()
        }
        CheckMode::RefuteOnly { bound } => (-(bound as i64)..=bound as i64).collect(),
    };
    let mut out = Vec::new();
    let mut digits = vec![0usize; support.len()];
    if support.is_empty() {
        return Ok(out);
    }
    loop {
        let ints: Vec<i64> = digits.iter().map(|&d| values[d]).collect();
        if let Some(lead) = ints.iter().position(|&c| c != 0) {
            let keep = match mode {
                CheckMode::Exhaustive => ints[lead] == 1,
                CheckMode::RefuteOnly { .. } => {
                    ints[lead] > 0
                        && ints
                            .iter()
                            .fold(BigInt::from(0), |g, &c| g.gcd(&BigInt::from(c)))
                            .abs()
                            .is_one()
                }
            };
            if keep {
                let mut v = Vector::zero(field, dim);
                for (&pos, &c) in support.iter().zip(&ints) {
                    v.set(pos, field.from_i64(c));
                }
                out.push(v);
            }
        }
        // Odometer, last position fastest.
        let mut pos = digits.len();
        loop {
            if pos == 0 {
                return Ok(out);
            }
            pos -= 1;
            digits[pos] += 1;
            if digits[pos] < values.len() {
                break;
            }
            digits[pos] = 0;
        }
    }
}

fn division_clause(
    a: &AlgebraPresentation,
    cache: &mut IdealCache<'_>,
    index: usize,
    support: &[usize],
    mode: CheckMode,
) -> Result<Option<Witness>, DivisionError> {
    for x in candidates(a.field(), a.dim(), support, mode)? {
        if let Some(w) = cache.check_pair(Clause::Division, index, index, &x) {
            return Ok(Some(w));
        }
    }
    Ok(None)
}

fn check_mode(a: &AlgebraPresentation, mode: CheckMode) -> Result<(), DivisionError> {
    if mode == CheckMode::Exhaustive && !a.field().is_finite() {
        return Err(DivisionError::ExhaustiveOverInfiniteField(a.field()));
    }
    Ok(())
}

/// Weak-division: `x` ranges over `M_{e_i}`.
pub fn check_weak_division(
    a: &AlgebraPresentation,
    profile: &BasisProfile,
    mode: CheckMode,
) -> Result<DivisionVerdict, DivisionError> {
    check_mode(a, mode)?;
    let mut cache = IdealCache::new(a);
    weak_with_cache(a, profile, mode, &mut cache)
}

fn weak_with_cache(
    a: &AlgebraPresentation,
    profile: &BasisProfile,
    mode: CheckMode,
    cache: &mut IdealCache<'_>,
) -> Result<DivisionVerdict, DivisionError> {
    for i in 0..a.dim() {
        let support: Vec<usize> = profile.get(i).s_set.iter().copied().collect();
        if let Some(w) = division_clause(a, cache, i, &support, mode)? {
            return Ok(DivisionVerdict::failed(mode, w));
        }
    }
    Ok(DivisionVerdict::passed(mode))
}

/// i-division: `x` ranges over all of `A`.
pub fn check_i_division(a: &AlgebraPresentation, mode: CheckMode) -> Result<DivisionVerdict, DivisionError> {
    check_mode(a, mode)?;
    let mut cache = IdealCache::new(a);
    let all: Vec<usize> = (0..a.dim()).collect();
    for i in 0..a.dim() {
        if let Some(w) = division_clause(a, &mut cache, i, &all, mode)? {
            return Ok(DivisionVerdict::failed(mode, w));
        }
    }
    Ok(DivisionVerdict::passed(mode))
}

/// Semi-division: weak-division plus, for every `b ∈ P_{e_i}P_{e_i}` and
/// `j ∈ S_{e_i}`, the same condition on `b e_j` and `e_j b`.
///
/// The pair clause is finite and always checked exactly, so a RefuteOnly
/// run can still fail through it.
pub fn check_semi_division(
    a: &AlgebraPresentation,
    profile: &BasisProfile,
    mode: CheckMode,
) -> Result<DivisionVerdict, DivisionError> {
    check_mode(a, mode)?;
    let mut cache = IdealCache::new(a);
    let weak = weak_with_cache(a, profile, mode, &mut cache)?;
    if weak.fails() {
        return Ok(weak);
    }
    for i in 0..a.dim() {
        let entry = profile.get(i);
        for b in &entry.pp_products {
            for &j in &entry.s_set {
                if let Some(w) = cache.check_pair(Clause::PairProduct, i, j, b) {
                    return Ok(DivisionVerdict::failed(mode, w));
                }
            }
        }
    }
    Ok(weak)
}

/// All three verdicts at once; on prime fields the results are exact.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Classification {
    pub weak: DivisionVerdict,
    pub semi: DivisionVerdict,
    pub i_division: DivisionVerdict,
}

pub fn classify_basis(a: &AlgebraPresentation, mode: CheckMode) -> Result<Classification, DivisionError> {
    let profile = basis_profile(a);
    Ok(Classification {
        weak: check_weak_division(a, &profile, mode)?,
        semi: check_semi_division(a, &profile, mode)?,
        i_division: check_i_division(a, mode)?,
    })
}
