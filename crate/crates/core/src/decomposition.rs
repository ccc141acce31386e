//! Three-level connection of basis elements and the resulting decomposition
//! of `A` into ideals, plus the semisimplicity and simplicity pipelines built
//! on it.
//!
//! Level 1 groups basis indices by a pluggable relation (by default the
//! connected components of "`e_i e_j ≠ 0` or `e_j e_i ≠ 0`"). Level 2 joins
//! level-1 classes `C, D` when `A_C A_D + A_D A_C ≠ 0`. Level 3 joins level-2
//! classes `B, B'` when the `B'`-part of `A_B A_B` or the `B`-part of
//! `A_{B'} A_{B'}` is nonzero. Chains of such links are exactly paths in a
//! graph, so every level is a set of connected components.
//!
//! The final blocks are coordinate subspaces; they are ideals with pairwise
//! zero products for any level-1 partition.

use std::fmt;

use thiserror::Error;

use crate::algebra::{AlgebraError, AlgebraPresentation};
use crate::division::{
    basis_profile, check_i_division, check_semi_division, CheckMode, DivisionError, DivisionVerdict, Status,
};
use crate::exec::Execution;
use crate::linalg::{LinalgError, Matrix, Subspace, Vector};
use crate::oracle::{self, Ceilings, OracleError};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum DecompositionError {
    #[error("block {0:?} is not an ideal")]
    BlockNotIdeal(Vec<usize>),
    #[error("subspace {0} is not an ideal")]
    NotAnIdeal(usize),
    #[error("the sum of the given ideals is not direct")]
    NotDirect,
    #[error("the given ideals span a subspace of rank {rank}, not the whole algebra of dimension {dim}")]
    NotSpanning { rank: usize, dim: usize },
    #[error("enumerating all bases needs a prime field")]
    AllBasesOverInfiniteField,
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Division(#[from] DivisionError),
    #[error(transparent)]
    Oracle(#[from] OracleError),
    #[error(transparent)]
    Linalg(#[from] LinalgError),
}

/// Minimal disjoint-set forest over `0..n`.
struct DisjointSet {
    parent: Vec<usize>,
}

impl DisjointSet {
    fn new(n: usize) -> Self {
        DisjointSet {
            parent: (0..n).collect(),
        }
    }

    fn find(&mut self, x: usize) -> usize {
        let mut root = x;
        while self.parent[root] != root {
            root = self.parent[root];
        }
        let mut cur = x;
        while self.parent[cur] != root {
            let next = self.parent[cur];
            self.parent[cur] = root;
            cur = next;
        }
        root
    }

    fn union(&mut self, a: usize, b: usize) {
        let (ra, rb) = (self.find(a), self.find(b));
        if ra != rb {
            // Smaller root wins so representatives are least members.
            let (lo, hi) = if ra < rb { (ra, rb) } else { (rb, ra) };
            self.parent[hi] = lo;
        }
    }

    /// Classes sorted internally and by least member.
    fn classes(mut self) -> Vec<Vec<usize>> {
        let n = self.parent.len();
        let mut by_root: Vec<Vec<usize>> = vec![Vec::new(); n];
        for x in 0..n {
            let r = self.find(x);
            by_root[r].push(x);
        }
        by_root.into_iter().filter(|c| !c.is_empty()).collect()
    }
}

fn components(n: usize, edges: &[(usize, usize)]) -> Vec<Vec<usize>> {
    let mut ds = DisjointSet::new(n);
    for &(a, b) in edges {
        ds.union(a, b);
    }
    ds.classes()
}

/// The level-1 relation on basis indices, given by its generating edges.
pub trait BasisRelation {
    fn edges(&self, a: &AlgebraPresentation) -> Vec<(usize, usize)>;
}

/// `i ~ j` when `e_i e_j ≠ 0` or `e_j e_i ≠ 0`, closed transitively.
#[derive(Debug, Clone, Copy, Default)]
pub struct ProductGraph;

impl BasisRelation for ProductGraph {
    fn edges(&self, a: &AlgebraPresentation) -> Vec<(usize, usize)> {
        let mut edges: Vec<(usize, usize)> = a
            .nonzero_products()
            .filter(|(i, j, _)| i != j)
            .map(|(i, j, _)| (i.min(j), i.max(j)))
            .collect();
        edges.sort_unstable();
        edges.dedup();
        edges
    }
}

/// Every basis index in its own class.
#[derive(Debug, Clone, Copy, Default)]
pub struct Discrete;

impl BasisRelation for Discrete {
    fn edges(&self, _: &AlgebraPresentation) -> Vec<(usize, usize)> {
        Vec::new()
    }
}

/// Three nested partitions with the edges that produced them.
///
/// `level1` partitions basis indices; `level2` partitions positions in
/// `level1`; `level3` partitions positions in `level2`. Classes are sorted by
/// least member at every level.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ConnectionLevels {
    pub level1: Vec<Vec<usize>>,
    pub level2: Vec<Vec<usize>>,
    pub level3: Vec<Vec<usize>>,
    pub edges1: Vec<(usize, usize)>,
    pub edges2: Vec<(usize, usize)>,
    pub edges3: Vec<(usize, usize)>,
}

impl ConnectionLevels {
    /// Basis indices of level-2 class `k`.
    pub fn level2_indices(&self, k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.level2[k]
            .iter()
            .flat_map(|&c| self.level1[c].iter().copied())
            .collect();
        out.sort_unstable();
        out
    }

    /// Basis indices of level-3 class `k`.
    pub fn level3_indices(&self, k: usize) -> Vec<usize> {
        let mut out: Vec<usize> = self.level3[k].iter().flat_map(|&b| self.level2_indices(b)).collect();
        out.sort_unstable();
        out
    }

    /// Basis index sets of the final blocks.
    pub fn blocks(&self) -> Vec<Vec<usize>> {
        (0..self.level3.len()).map(|k| self.level3_indices(k)).collect()
    }

    /// Each level refines the next and the last covers `0..n` disjointly.
    pub fn is_well_nested(&self, n: usize) -> bool {
        fn partitions(classes: &[Vec<usize>], n: usize) -> bool {
            let mut seen = vec![false; n];
            for c in classes {
                for &x in c {
                    if x >= n || seen[x] {
                        return false;
                    }
                    seen[x] = true;
                }
            }
            seen.into_iter().all(|s| s)
        }
        partitions(&self.level1, n)
            && partitions(&self.level2, self.level1.len())
            && partitions(&self.level3, self.level2.len())
    }
}

fn coordinate_span(a: &AlgebraPresentation, indices: &[usize]) -> Subspace {
    Subspace::coordinate(a.field(), a.dim(), indices).expect("indices in range")
}

pub fn connection_levels(a: &AlgebraPresentation) -> ConnectionLevels {
    connection_levels_with(a, &ProductGraph)
}

pub fn connection_levels_with(a: &AlgebraPresentation, relation: &dyn BasisRelation) -> ConnectionLevels {
    let n = a.dim();
    let edges1 = relation.edges(a);
    let level1 = components(n, &edges1);

    let spans1: Vec<Subspace> = level1.iter().map(|c| coordinate_span(a, c)).collect();
    let mut edges2 = Vec::new();
    for c in 0..level1.len() {
        for d in (c + 1)..level1.len() {
            let cross = a
                .product_of_subspaces(&spans1[c], &spans1[d])
                .sum(&a.product_of_subspaces(&spans1[d], &spans1[c]));
            if !cross.is_zero() {
                edges2.push((c, d));
            }
        }
    }
    let level2 = components(level1.len(), &edges2);

    let partial = ConnectionLevels {
        level1,
        level2,
        level3: Vec::new(),
        edges1,
        edges2,
        edges3: Vec::new(),
    };
    let idx2: Vec<Vec<usize>> = (0..partial.level2.len()).map(|k| partial.level2_indices(k)).collect();
    let squares: Vec<Subspace> = idx2
        .iter()
        .map(|ix| {
            let s = coordinate_span(a, ix);
            a.product_of_subspaces(&s, &s)
        })
        .collect();
    let projects_onto = |sq: &Subspace, target: &[usize]| -> bool {
        sq.rows()
            .iter()
            .any(|r| !r.project(target).expect("in range").is_zero())
    };
    let mut edges3 = Vec::new();
    for b in 0..idx2.len() {
        for c in (b + 1)..idx2.len() {
            if projects_onto(&squares[c], &idx2[b]) || projects_onto(&squares[b], &idx2[c]) {
                edges3.push((b, c));
            }
        }
    }
    let level3 = components(idx2.len(), &edges3);
    ConnectionLevels {
        level3,
        edges3,
        ..partial
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Verdict {
    Semisimple,
    NotSemisimple,
    Inconclusive,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum SimpleVerdict {
    Simple,
    NotSimple,
    Inconclusive,
}

/// Why a pipeline reached its verdict.
#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Reason {
    /// Decomposition only; no hypotheses checked.
    DecompositionOnly,
    ZeroProduct,
    NonzeroAnnihilator {
        rank: usize,
    },
    /// The presentation basis satisfies the predicate.
    GivenBasisSatisfies,
    /// The presentation basis violates the predicate; other bases were not tried.
    GivenBasisFails,
    /// Bounded search on an infinite field found no violation.
    GivenBasisUndecided,
    /// Some enumerated basis satisfies the predicate.
    FoundBasis,
    /// No enumerated basis satisfies the predicate.
    NoBasis,
}

impl Reason {
    pub fn describe(&self, predicate: &str) -> String {
        match self {
            Reason::DecompositionOnly => "decomposition only".to_string(),
            Reason::ZeroProduct => "product is identically zero".to_string(),
            Reason::NonzeroAnnihilator { rank } => format!("nonzero annihilator (rank {rank})"),
            Reason::GivenBasisSatisfies => format!("zero annihilator and the given basis is {predicate}"),
            Reason::GivenBasisFails => {
                format!("the given basis is not {predicate}; other bases not examined")
            }
            Reason::GivenBasisUndecided => {
                format!("bounded search found no violation of {predicate} on the given basis")
            }
            Reason::FoundBasis => {
                let article = if predicate.starts_with(['a', 'e', 'i', 'o', 'u']) { "an" } else { "a" };
                format!("zero annihilator and {article} {predicate} basis exists")
            }
            Reason::NoBasis => format!("no {predicate} basis"),
        }
    }
}

/// One final block.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BlockCheck {
    /// Basis indices of the analysed basis.
    pub indices: Vec<usize>,
    /// The block in the coordinates of the original presentation.
    pub subspace: Subspace,
    pub is_ideal: bool,
    /// Products with every other block vanish in both orders.
    pub annihilates_others: bool,
    /// Oracle simplicity, when a finite-field oracle was run.
    pub simple: Option<bool>,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct DecompositionReport {
    pub levels: ConnectionLevels,
    pub blocks: Vec<BlockCheck>,
    /// Block ranks add up to the dimension and the blocks span `A`.
    pub direct_sum: bool,
    pub verdict: Verdict,
    pub reason: Reason,
    pub annihilator_rank: usize,
    /// Present when the analysis ran in a basis other than the presentation's.
    pub basis: Option<Matrix>,
    pub division: Option<DivisionVerdict>,
}

pub fn decompose(a: &AlgebraPresentation) -> Result<DecompositionReport, DecompositionError> {
    decompose_with(a, &ProductGraph)
}

pub fn decompose_with(
    a: &AlgebraPresentation,
    relation: &dyn BasisRelation,
) -> Result<DecompositionReport, DecompositionError> {
    let levels = connection_levels_with(a, relation);
    let index_sets = levels.blocks();
    let spans: Vec<Subspace> = index_sets.iter().map(|ix| coordinate_span(a, ix)).collect();
    let mut blocks = Vec::with_capacity(spans.len());
    for (k, (ix, s)) in index_sets.iter().zip(&spans).enumerate() {
        let is_ideal = a.is_ideal(s);
        if !is_ideal {
            return Err(DecompositionError::BlockNotIdeal(ix.clone()));
        }
        let annihilates_others = spans
            .iter()
            .enumerate()
            .filter(|(j, _)| *j != k)
            .all(|(_, t)| a.product_of_subspaces(s, t).is_zero() && a.product_of_subspaces(t, s).is_zero());
        blocks.push(BlockCheck {
            indices: ix.clone(),
            subspace: s.clone(),
            is_ideal,
            annihilates_others,
            simple: None,
        });
    }
    let total = spans
        .iter()
        .fold(Subspace::zero(a.field(), a.dim()), |acc, s| acc.sum(s));
    let rank_sum: usize = spans.iter().map(Subspace::rank).sum();
    let direct_sum = total.is_full() && rank_sum == a.dim();
    Ok(DecompositionReport {
        levels,
        blocks,
        direct_sum,
        verdict: Verdict::Inconclusive,
        reason: Reason::DecompositionOnly,
        annihilator_rank: a.annihilator().rank(),
        basis: None,
        division: None,
    })
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum BasisMode {
    /// Only the presentation basis.
    GivenBasis,
    /// Every basis, by enumeration over a prime field.
    AllBases,
}

/// Settings shared by the pipelines.
#[derive(Debug, Clone, Copy, Default)]
pub struct Options {
    pub ceilings: Ceilings,
    pub execution: Execution,
}

/// Fills `simple` on every block when exhaustive enumeration fits.
fn check_block_simplicity(a: &AlgebraPresentation, report: &mut DecompositionReport, ceilings: &Ceilings) {
    if !a.field().is_finite() {
        return;
    }
    for block in &mut report.blocks {
        let Ok(sub) = a.restrict(&block.indices) else { continue };
        block.simple = oracle::oracle_is_simple(&sub, ceilings).ok();
    }
}

/// Re-expresses block subspaces in original coordinates after a change of basis.
fn map_blocks_back(report: &mut DecompositionReport, basis: &Matrix) -> Result<(), DecompositionError> {
    for block in &mut report.blocks {
        let rows: Vec<Vector> = block.indices.iter().map(|&i| basis.rows()[i].clone()).collect();
        block.subspace = Subspace::span(basis.field(), basis.size(), &rows)?;
    }
    Ok(())
}

/// Semisimplicity via "zero annihilator and a semi-division basis".
pub fn check_semisimple_via_theorem(
    a: &AlgebraPresentation,
    mode: BasisMode,
    opts: &Options,
) -> Result<DecompositionReport, DecompositionError> {
    if mode == BasisMode::AllBases && !a.field().is_finite() {
        return Err(DecompositionError::AllBasesOverInfiniteField);
    }
    let ann = a.annihilator().rank();
    match mode {
        BasisMode::GivenBasis => {
            let mut report = decompose(a)?;
            let check_mode = CheckMode::strongest(a.field());
            let division = check_semi_division(a, &basis_profile(a), check_mode)?;
            (report.verdict, report.reason) = if ann != 0 {
                (Verdict::NotSemisimple, Reason::NonzeroAnnihilator { rank: ann })
            } else {
                match division.status {
                    Status::Holds => (Verdict::Semisimple, Reason::GivenBasisSatisfies),
                    Status::Fails => (Verdict::Inconclusive, Reason::GivenBasisFails),
                    Status::Unknown => (Verdict::Inconclusive, Reason::GivenBasisUndecided),
                }
            };
            if report.verdict == Verdict::Semisimple {
                check_block_simplicity(a, &mut report, &opts.ceilings);
            }
            report.division = Some(division);
            Ok(report)
        }
        BasisMode::AllBases => {
            if ann != 0 {
                let mut report = decompose(a)?;
                report.verdict = Verdict::NotSemisimple;
                report.reason = Reason::NonzeroAnnihilator { rank: ann };
                return Ok(report);
            }
            match oracle::exists_semi_division_basis(a, opts.execution, &opts.ceilings)? {
                None => {
                    let mut report = decompose(a)?;
                    report.verdict = Verdict::NotSemisimple;
                    report.reason = Reason::NoBasis;
                    Ok(report)
                }
                Some(basis) => {
                    let b = a.change_of_basis(&basis)?;
                    let mut report = decompose(&b)?;
                    report.verdict = Verdict::Semisimple;
                    report.reason = Reason::FoundBasis;
                    check_block_simplicity(&b, &mut report, &opts.ceilings);
                    map_blocks_back(&mut report, &basis)?;
                    report.division = Some(check_semi_division(&b, &basis_profile(&b), CheckMode::Exhaustive)?);
                    report.basis = Some(basis);
                    Ok(report)
                }
            }
        }
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct SimplicityReport {
    pub verdict: SimpleVerdict,
    pub reason: Reason,
    pub annihilator_rank: usize,
    pub basis: Option<Matrix>,
    pub division: Option<DivisionVerdict>,
}

/// Simplicity via "zero annihilator and an i-division basis".
pub fn check_simple_via_corollary(
    a: &AlgebraPresentation,
    mode: BasisMode,
    opts: &Options,
) -> Result<SimplicityReport, DecompositionError> {
    if mode == BasisMode::AllBases && !a.field().is_finite() {
        return Err(DecompositionError::AllBasesOverInfiniteField);
    }
    let ann = a.annihilator().rank();
    let mut report = SimplicityReport {
        verdict: SimpleVerdict::NotSimple,
        reason: Reason::ZeroProduct,
        annihilator_rank: ann,
        basis: None,
        division: None,
    };
    if a.has_zero_product() {
        return Ok(report);
    }
    if ann != 0 {
        report.reason = Reason::NonzeroAnnihilator { rank: ann };
        return Ok(report);
    }
    match mode {
        BasisMode::GivenBasis => {
            let division = check_i_division(a, CheckMode::strongest(a.field()))?;
            (report.verdict, report.reason) = match division.status {
                Status::Holds => (SimpleVerdict::Simple, Reason::GivenBasisSatisfies),
                Status::Fails => (SimpleVerdict::Inconclusive, Reason::GivenBasisFails),
                Status::Unknown => (SimpleVerdict::Inconclusive, Reason::GivenBasisUndecided),
            };
            report.division = Some(division);
        }
        BasisMode::AllBases => match oracle::exists_i_division_basis(a, opts.execution, &opts.ceilings)? {
            None => report.reason = Reason::NoBasis,
            Some(basis) => {
                report.verdict = SimpleVerdict::Simple;
                report.reason = Reason::FoundBasis;
                report.basis = Some(basis);
            }
        },
    }
    Ok(report)
}

/// Concatenates echelon bases of ideals `I_1 ⊕ … ⊕ I_m = A` into a basis of `A`
/// and returns it with the re-expressed presentation.
pub fn semi_division_basis_from_ideals(
    a: &AlgebraPresentation,
    ideals: &[Subspace],
) -> Result<(Matrix, AlgebraPresentation), DecompositionError> {
    let n = a.dim();
    let mut sum = Subspace::zero(a.field(), n);
    let mut rows = Vec::with_capacity(n);
    for (k, ideal) in ideals.iter().enumerate() {
        if ideal.field() != a.field() || ideal.ambient_dim() != n || !a.is_ideal(ideal) {
            return Err(DecompositionError::NotAnIdeal(k));
        }
        let next = sum.sum(ideal);
        if next.rank() != sum.rank() + ideal.rank() {
            return Err(DecompositionError::NotDirect);
        }
        sum = next;
        rows.extend(ideal.rows().iter().cloned());
    }
    if !sum.is_full() {
        return Err(DecompositionError::NotSpanning {
            rank: sum.rank(),
            dim: n,
        });
    }
    let m = Matrix::from_rows(a.field(), rows)?;
    let b = a.change_of_basis(&m)?;
    Ok((m, b))
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Verdict::Semisimple => "semisimple",
            Verdict::NotSemisimple => "not semisimple",
            Verdict::Inconclusive => "inconclusive",
        })
    }
}

impl fmt::Display for SimpleVerdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            SimpleVerdict::Simple => "simple",
            SimpleVerdict::NotSimple => "not simple",
            SimpleVerdict::Inconclusive => "inconclusive",
        })
    }
}
