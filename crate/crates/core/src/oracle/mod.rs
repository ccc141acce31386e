//! Brute-force ground truth over small prime fields.
//!
//! Everything here follows the definitions directly: ideals are found by
//! listing every subspace and testing closure, simplicity and semisimplicity
//! by searching those lists, and basis existence by listing every basis.

pub mod fuzz;

use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraPresentation};
use crate::division::{CheckMode, DivisionError, DivisionKind};
use crate::exec::Execution;
use crate::field::Field;
use crate::linalg::{Matrix, Subspace, Vector};

/// Default bound on `q^dim` for subspace enumeration.
pub const DEFAULT_SUBSPACE_CEILING: u64 = 256;
/// Default bound on the number of ordered bases.
pub const DEFAULT_BASIS_CEILING: u64 = 1_000_000;
pub const CEILING_ENV: &str = "BASISDIV_CEILING";

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum OracleError {
    #[error("enumeration needs a prime field, algebra is over {0}")]
    RequiresPrimeField(Field),
    #[error("{q}^{dim} vectors exceeds the subspace ceiling {ceiling}")]
    TooManyVectors { q: u64, dim: usize, ceiling: u64 },
    #[error("{count} ordered bases exceeds the basis ceiling {ceiling}")]
    TooManyBases { count: u128, ceiling: u64 },
    #[error("invalid {CEILING_ENV} value {0:?}: expected N or N,M")]
    BadCeiling(String),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Division(#[from] DivisionError),
}

/// Size limits for exhaustive enumeration.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Ceilings {
    /// Maximum `q^dim` for subspace enumeration.
    pub subspaces: u64,
    /// Maximum number of ordered bases.
    pub bases: u64,
}

impl Default for Ceilings {
    fn default() -> Self {
        Ceilings {
            subspaces: DEFAULT_SUBSPACE_CEILING,
            bases: DEFAULT_BASIS_CEILING,
        }
    }
}

impl Ceilings {
    /// Parses `N` (subspace ceiling) or `N,M` (subspace and basis ceilings).
    pub fn parse(text: &str) -> Result<Self, OracleError> {
        let bad = || OracleError::BadCeiling(text.to_string());
        let mut c = Ceilings::default();
        let mut parts = text.split(',').map(str::trim);
        c.subspaces = parts.next().ok_or_else(bad)?.parse().map_err(|_| bad())?;
        if let Some(b) = parts.next() {
            c.bases = b.parse().map_err(|_| bad())?;
        }
        if parts.next().is_some() {
            return Err(bad());
        }
        Ok(c)
    }

    /// Defaults overridden by `BASISDIV_CEILING` when set.
    pub fn from_env() -> Result<Self, OracleError> {
        match std::env::var(CEILING_ENV) {
            Ok(v) => Ceilings::parse(&v),
            Err(_) => Ok(Ceilings::default()),
        }
    }

    fn check_vectors(&self, field: Field, dim: usize) -> Result<u64, OracleError> {
        let q = field.modulus().ok_or(OracleError::RequiresPrimeField(field))?;
        let total = (q as u128).checked_pow(dim as u32);
        match total {
            Some(t) if t <= self.subspaces as u128 => Ok(q),
            _ => Err(OracleError::TooManyVectors {
                q,
                dim,
                ceiling: self.subspaces,
            }),
        }
    }

    fn check_bases(&self, field: Field, dim: usize) -> Result<u64, OracleError> {
        let q = field.modulus().ok_or(OracleError::RequiresPrimeField(field))?;
        let count = ordered_basis_count(q, dim).unwrap_or(u128::MAX);
        if count > self.bases as u128 {
            return Err(OracleError::TooManyBases {
                count,
                ceiling: self.bases,
            });
        }
        Ok(q)
    }
}

/// `∏_{k<n} (q^n - q^k)`, or `None` on overflow.
pub fn ordered_basis_count(q: u64, n: usize) -> Option<u128> {
    let qn = (q as u128).checked_pow(n as u32)?;
    let mut count: u128 = 1;
    for k in 0..n {
        let qk = (q as u128).checked_pow(k as u32)?;
        count = count.checked_mul(qn - qk)?;
    }
    Some(count)
}

/// Every vector of `F_q^dim`, in lexicographic order.
fn all_vectors(field: Field, q: u64, dim: usize) -> Vec<Vector> {
    let total = q.pow(dim as u32);
    (0..total)
        .map(|code| {
            let mut v = Vector::zero(field, dim);
            let mut c = code;
            for k in (0..dim).rev() {
                v.set(k, field.residue(c % q).expect("prime field"));
                c /= q;
            }
            v
        })
        .collect()
}

/// Every subspace of `F_q^dim`, one reduced echelon matrix each.
///
/// For each pivot set, row `r` has a one at its pivot, zeros at the other
/// pivots and before its pivot, and free entries elsewhere.
pub fn all_subspaces(field: Field, dim: usize, ceilings: &Ceilings) -> Result<Vec<Subspace>, OracleError> {
    let q = ceilings.check_vectors(field, dim)?;
    let mut out = Vec::new();
    for mask in 0u32..(1 << dim) {
        let pivots: Vec<usize> = (0..dim).filter(|&c| mask & (1 << c) != 0).collect();
        let free: Vec<(usize, usize)> = pivots
            .iter()
            .enumerate()
            .flat_map(|(r, &p)| ((p + 1)..dim).filter(|c| !pivots.contains(c)).map(move |c| (r, c)))
            .collect();
        let combos = q.pow(free.len() as u32);
        for code in 0..combos {
            let mut rows: Vec<Vector> = pivots.iter().map(|&p| Vector::unit(field, dim, p)).collect();
            let mut c = code;
            for &(r, col) in &free {
                rows[r].set(col, field.residue(c % q).expect("prime field"));
                c /= q;
            }
            out.push(Subspace::span_unchecked(field, dim, rows));
        }
    }
    out.sort_by_key(|s| s.rank());
    Ok(out)
}

/// Every two-sided ideal of `A`, ordered by rank.
pub fn all_ideals(a: &AlgebraPresentation, ceilings: &Ceilings) -> Result<Vec<Subspace>, OracleError> {
    Ok(all_subspaces(a.field(), a.dim(), ceilings)?
        .into_iter()
        .filter(|s| a.is_ideal(s))
        .collect())
}

/// Nonzero product and exactly two ideals.
pub fn oracle_is_simple(a: &AlgebraPresentation, ceilings: &Ceilings) -> Result<bool, OracleError> {
    if a.has_zero_product() {
        ceilings.check_vectors(a.field(), a.dim())?;
        return Ok(false);
    }
    Ok(all_ideals(a, ceilings)?.len() == 2)
}

/// Whether the ideal `ideal` is simple as an algebra in its own right.
pub fn ideal_is_simple(a: &AlgebraPresentation, ideal: &Subspace, ceilings: &Ceilings) -> Result<bool, OracleError> {
    if ideal.is_zero() {
        return Ok(false);
    }
    let sub = a.restrict_to_subspace(ideal)?;
    oracle_is_simple(&sub, ceilings)
}

/// The weaker reading: `I·I ≠ 0` and the only ideals of `A` inside `I` are
/// `0` and `I`. Implied by [`ideal_is_simple`]; the two agree on the summands
/// of a semisimple decomposition.
pub fn ideal_is_minimal_in_ambient(
    a: &AlgebraPresentation,
    ideal: &Subspace,
    ceilings: &Ceilings,
) -> Result<bool, OracleError> {
    if ideal.is_zero() || a.product_of_subspaces(ideal, ideal).is_zero() {
        ceilings.check_vectors(a.field(), a.dim())?;
        return Ok(false);
    }
    let inside = all_ideals(a, ceilings)?
        .into_iter()
        .filter(|s| s.is_subspace_of(ideal))
        .count();
    Ok(inside == 2)
}

/// Nonzero ideals that are simple algebras, in rank order.
pub fn simple_ideals(a: &AlgebraPresentation, ceilings: &Ceilings) -> Result<Vec<Subspace>, OracleError> {
    let mut out = Vec::new();
    for ideal in all_ideals(a, ceilings)? {
        if ideal_is_simple(a, &ideal, ceilings)? {
            out.push(ideal);
        }
    }
    for (i, s) in out.iter().enumerate() {
        for t in &out[i + 1..] {
            assert!(
                s.intersection(t).is_zero(),
                "distinct simple ideals {s} and {t} intersect"
            );
        }
    }
    Ok(out)
}

/// A family of simple ideals whose sum is direct and equal to `A`, if any.
pub fn semisimple_family(a: &AlgebraPresentation, ceilings: &Ceilings) -> Result<Option<Vec<Subspace>>, OracleError> {
    let simple = simple_ideals(a, ceilings)?;
    let n = a.dim();
    let mut chosen = Vec::new();
    let found = search_family(&simple, 0, &Subspace::zero(a.field(), n), &mut chosen);
    Ok(found.then(|| chosen.into_iter().map(|i| simple[i].clone()).collect()))
}

fn search_family(ideals: &[Subspace], start: usize, sum: &Subspace, chosen: &mut Vec<usize>) -> bool {
    if sum.is_full() {
        return true;
    }
    for k in start..ideals.len() {
        let next = sum.sum(&ideals[k]);
        // Direct: ranks add.
        if next.rank() != sum.rank() + ideals[k].rank() {
            continue;
        }
        chosen.push(k);
        if search_family(ideals, k + 1, &next, chosen) {
            return true;
        }
        chosen.pop();
    }
    false
}

pub fn oracle_is_semisimple(a: &AlgebraPresentation, ceilings: &Ceilings) -> Result<bool, OracleError> {
    Ok(semisimple_family(a, ceilings)?.is_some())
}

/// Every ordered basis of `F_q^n`, as the rows of an invertible matrix.
pub struct OrderedBases {
    field: Field,
    vectors: Vec<Vector>,
    /// Row choices as indices into `vectors`, plus the span of each prefix.
    stack: Vec<(usize, Subspace)>,
    n: usize,
    started: bool,
}

impl OrderedBases {
    fn new(field: Field, q: u64, n: usize) -> Self {
        OrderedBases {
            field,
            vectors: all_vectors(field, q, n),
            stack: Vec::with_capacity(n),
            n,
            started: false,
        }
    }

    fn prefix_span(&self) -> Subspace {
        self.stack
            .last()
            .map(|(_, s)| s.clone())
            .unwrap_or_else(|| Subspace::zero(self.field, self.n))
    }

    /// Extends the stack to length `n` trying candidates from `from` at the
    /// current depth; backtracks as needed.
    fn advance(&mut self, mut from: usize) -> bool {
        loop {
            let span = self.prefix_span();
            match (from..self.vectors.len()).find(|&k| !span.contains_unchecked(&self.vectors[k])) {
                Some(k) => {
                    let mut s = span;
                    s.insert(self.vectors[k].clone());
                    self.stack.push((k, s));
                    if self.stack.len() == self.n {
                        return true;
                    }
                    from = 0;
                }
                None => match self.stack.pop() {
                    Some((k, _)) => from = k + 1,
                    None => return false,
                },
            }
        }
    }
}

impl Iterator for OrderedBases {
    type Item = Matrix;

    fn next(&mut self) -> Option<Matrix> {
        let ok = if !self.started {
            self.started = true;
            self.advance(0)
        } else {
            match self.stack.pop() {
                Some((k, _)) => self.advance(k + 1),
                None => false,
            }
        };
        if !ok {
            self.stack.clear();
            return None;
        }
        let rows = self.stack.iter().map(|(k, _)| self.vectors[*k].clone()).collect();
        Some(Matrix::from_rows(self.field, rows).expect("square"))
    }
}

pub fn enumerate_bases(field: Field, n: usize, ceilings: &Ceilings) -> Result<OrderedBases, OracleError> {
    let q = ceilings.check_bases(field, n)?;
    Ok(OrderedBases::new(field, q, n))
}

/// One basis per unordered set of lines, starting with the standard basis.
///
/// Division predicates depend neither on the order of the basis nor on
/// rescaling its members, so this covers every basis up to equivalence.
pub fn unordered_bases(field: Field, n: usize, ceilings: &Ceilings) -> Result<Vec<Matrix>, OracleError> {
    let q = ceilings.check_bases(field, n)?;
    let mut lines: Vec<Vector> = all_vectors(field, q, n)
        .into_iter()
        .filter(|v| v.leading_index().is_some_and(|i| v.coord(i).is_one()))
        .collect();
    // Light vectors first; unit vectors in index order.
    lines.sort_by(|a, b| a.support().count().cmp(&b.support().count()).then_with(|| b.cmp(a)));
    let mut out = Vec::new();
    let mut chosen: Vec<usize> = Vec::with_capacity(n);
    collect_line_sets(&lines, 0, &Subspace::zero(field, n), n, &mut chosen, &mut out);
    Ok(out
        .into_iter()
        .map(|idx| Matrix::from_rows(field, idx.iter().map(|&k| lines[k].clone()).collect()).expect("square"))
        .collect())
}

fn collect_line_sets(
    lines: &[Vector],
    start: usize,
    span: &Subspace,
    n: usize,
    chosen: &mut Vec<usize>,
    out: &mut Vec<Vec<usize>>,
) {
    if chosen.len() == n {
        out.push(chosen.clone());
        return;
    }
    let remaining = n - chosen.len();
    for k in start..lines.len() {
        if lines.len() - k < remaining {
            break;
        }
        if span.contains_unchecked(&lines[k]) {
            continue;
        }
        let mut next = span.clone();
        next.insert(lines[k].clone());
        chosen.push(k);
        collect_line_sets(lines, k + 1, &next, n, chosen, out);
        chosen.pop();
    }
}

/// First basis (in [`unordered_bases`] order) satisfying `kind`, checked exhaustively.
pub fn exists_division_basis(
    a: &AlgebraPresentation,
    kind: DivisionKind,
    exec: Execution,
    ceilings: &Ceilings,
) -> Result<Option<Matrix>, OracleError> {
    let bases = unordered_bases(a.field(), a.dim(), ceilings)?;
    let hit = exec.find_map_first(&bases, |m| {
        let b = match a.change_of_basis(m) {
            Ok(b) => b,
            Err(e) => return Some(Err(OracleError::from(e))),
        };
        match kind.check(&b, CheckMode::Exhaustive) {
            Ok(v) if v.holds() => Some(Ok(m.clone())),
            Ok(_) => None,
            Err(e) => Some(Err(e.into())),
        }
    });
    hit.transpose()
}

pub fn exists_semi_division_basis(
    a: &AlgebraPresentation,
    exec: Execution,
    ceilings: &Ceilings,
) -> Result<Option<Matrix>, OracleError> {
    exists_division_basis(a, DivisionKind::Semi, exec, ceilings)
}

pub fn exists_i_division_basis(
    a: &AlgebraPresentation,
    exec: Execution,
    ceilings: &Ceilings,
) -> Result<Option<Matrix>, OracleError> {
    exists_division_basis(a, DivisionKind::I, exec, ceilings)
}
