//! Seeded random algebras and the differential checks run on each of them.

use std::fmt;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::algebra::AlgebraPresentation;
use crate::decomposition::{connection_levels, decompose, semi_division_basis_from_ideals};
use crate::division::{basis_profile, check_i_division, check_semi_division, check_weak_division, CheckMode};
use crate::exec::Execution;
use crate::field::Field;
use crate::oracle::{self, Ceilings, OracleError};

#[derive(Debug, Clone, PartialEq, Error)]
pub enum FuzzError {
    #[error("fuzzing needs a prime field, got {0}")]
    NotPrimeField(Field),
    #[error("dimension {0} outside 1..=4")]
    Dimension(usize),
    #[error("sparsity {0} outside [0, 1]")]
    Sparsity(f64),
    #[error(transparent)]
    Oracle(#[from] OracleError),
}

#[derive(Debug, Clone, Copy, PartialEq)]
pub struct FuzzConfig {
    pub field: Field,
    pub dim: usize,
    /// Probability that a given `c_{ij}^k` is nonzero.
    pub sparsity: f64,
    pub seed: u64,
    pub trials: usize,
}

impl FuzzConfig {
    pub fn validate(&self, ceilings: &Ceilings) -> Result<(), FuzzError> {
        if !self.field.is_finite() {
            return Err(FuzzError::NotPrimeField(self.field));
        }
        if !(1..=4).contains(&self.dim) {
            return Err(FuzzError::Dimension(self.dim));
        }
        if !(0.0..=1.0).contains(&self.sparsity) {
            return Err(FuzzError::Sparsity(self.sparsity));
        }
        let q = self.field.modulus().expect("prime field");
        if (q as u128).pow(self.dim as u32) > ceilings.subspaces as u128 {
            return Err(OracleError::TooManyVectors {
                q,
                dim: self.dim,
                ceiling: ceilings.subspaces,
            }
            .into());
        }
        Ok(())
    }

    /// Seed of trial `index`.
    pub fn trial_seed(&self, index: usize) -> u64 {
        self.seed.wrapping_add(index as u64)
    }
}

/// Each `(i, j, k)` entry is nonzero with probability `sparsity`, uniform over
/// the nonzero residues. Deterministic in `cfg.seed`.
pub fn random_algebra(cfg: &FuzzConfig) -> Result<AlgebraPresentation, FuzzError> {
    cfg.validate(&Ceilings {
        subspaces: u64::MAX,
        bases: u64::MAX,
    })?;
    let p = cfg.field.modulus().expect("prime field");
    let n = cfg.dim;
    let mut rng = ChaCha8Rng::seed_from_u64(cfg.seed);
    let mut entries = Vec::new();
    for i in 0..n {
        for j in 0..n {
            for k in 0..n {
                if rng.gen_bool(cfg.sparsity) {
                    let v = rng.gen_range(1..p);
                    entries.push((i, j, k, cfg.field.residue(v).expect("prime field")));
                }
            }
        }
    }
    Ok(AlgebraPresentation::from_entries(cfg.field, n, entries).expect("valid entries"))
}

/// The properties checked on every trial.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Property {
    /// `(Ann = 0 ∧ ∃ semi-division basis) ⇔ semisimple`.
    SemisimpleCharacterization,
    /// `(Ann = 0 ∧ ∃ i-division basis) ⇔ simple`.
    SimpleCharacterization,
    /// A simple algebra has every basis i-division.
    SimpleEveryBasisIDivision,
    /// Blocks are ideals, annihilate each other, sum directly to `A`; levels nest.
    DecompositionInvariants,
    /// `Ann = 0` and semi-division presentation basis ⇒ every block simple.
    BlocksSimple,
    /// Weak-division basis, `e_i ∈ I` ⇒ the level-1 class of `i` spans a subspace of `I`.
    Level1ClassInIdeal,
    /// The basis assembled from a simple-ideal family is semi-division.
    ConstructedBasisSemiDivision,
    /// i-division ⇒ semi-division ⇒ weak-division on the presentation basis.
    Hierarchy,
    /// Semisimple ⇒ `Ann = 0`; simple ⇒ semisimple.
    OracleConsistency,
    /// Ideals are closed under sum and intersection.
    IdealLattice,
}

impl Property {
    pub const ALL: [Property; 10] = [
        Property::SemisimpleCharacterization,
        Property::SimpleCharacterization,
        Property::SimpleEveryBasisIDivision,
        Property::DecompositionInvariants,
        Property::BlocksSimple,
        Property::Level1ClassInIdeal,
        Property::ConstructedBasisSemiDivision,
        Property::Hierarchy,
        Property::OracleConsistency,
        Property::IdealLattice,
    ];

    pub fn name(self) -> &'static str {
        match self {
            Property::SemisimpleCharacterization => "semisimple-characterization",
            Property::SimpleCharacterization => "simple-characterization",
            Property::SimpleEveryBasisIDivision => "simple-every-basis-i-division",
            Property::DecompositionInvariants => "decomposition-invariants",
            Property::BlocksSimple => "blocks-simple",
            Property::Level1ClassInIdeal => "level1-class-in-ideal",
            Property::ConstructedBasisSemiDivision => "constructed-basis-semi-division",
            Property::Hierarchy => "hierarchy",
            Property::OracleConsistency => "oracle-consistency",
            Property::IdealLattice => "ideal-lattice",
        }
    }
}

impl fmt::Display for Property {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Violation {
    pub property: Property,
    pub detail: String,
}

/// Everything computed for one random algebra.
#[derive(Debug, Clone)]
pub struct TrialRecord {
    pub index: usize,
    pub seed: u64,
    pub algebra: AlgebraPresentation,
    pub annihilator_rank: usize,
    pub oracle_semisimple: bool,
    pub oracle_simple: bool,
    pub semi_division_basis_exists: bool,
    pub i_division_basis_exists: bool,
    pub given_weak: bool,
    pub given_semi: bool,
    pub given_i: bool,
    pub blocks: usize,
    /// Properties whose hypotheses held on this instance.
    pub exercised: Vec<Property>,
    pub violations: Vec<Violation>,
}

/// Runs every [`Property`] on one algebra. Basis searches stay sequential;
/// campaigns parallelize across trials instead.
pub fn check_algebra(a: &AlgebraPresentation, ceilings: &Ceilings) -> Result<TrialRecord, FuzzError> {
    let seq = Execution::Sequential;
    let mut violations = Vec::new();
    let mut exercised = Vec::new();
    let mut fail = |property: Property, detail: String| violations.push(Violation { property, detail });

    let ann = a.annihilator().rank();
    let ideals = oracle::all_ideals(a, ceilings)?;
    let family = oracle::semisimple_family(a, ceilings)?;
    let semisimple = family.is_some();
    let simple = oracle::oracle_is_simple(a, ceilings)?;
    let semi_exists = oracle::exists_semi_division_basis(a, seq, ceilings)?.is_some();
    let i_exists = oracle::exists_i_division_basis(a, seq, ceilings)?.is_some();
    let profile = basis_profile(a);
    let given_weak = check_weak_division(a, &profile, CheckMode::Exhaustive)
        .map_err(OracleError::from)?
        .holds();
    let given_semi = check_semi_division(a, &profile, CheckMode::Exhaustive)
        .map_err(OracleError::from)?
        .holds();
    let given_i = check_i_division(a, CheckMode::Exhaustive)
        .map_err(OracleError::from)?
        .holds();

    exercised.push(Property::SemisimpleCharacterization);
    if (ann == 0 && semi_exists) != semisimple {
        fail(
            Property::SemisimpleCharacterization,
            format!("ann rank {ann}, semi-division basis exists: {semi_exists}, oracle semisimple: {semisimple}"),
        );
    }
    exercised.push(Property::SimpleCharacterization);
    if (ann == 0 && i_exists) != simple {
        fail(
            Property::SimpleCharacterization,
            format!("ann rank {ann}, i-division basis exists: {i_exists}, oracle simple: {simple}"),
        );
    }
    if simple {
        exercised.push(Property::SimpleEveryBasisIDivision);
        for m in oracle::enumerate_bases(a.field(), a.dim(), ceilings)? {
            let b = a.change_of_basis(&m).map_err(OracleError::from)?;
            if !check_i_division(&b, CheckMode::Exhaustive)
                .map_err(OracleError::from)?
                .holds()
            {
                fail(
                    Property::SimpleEveryBasisIDivision,
                    format!("basis {:?} is not i-division", m.rows()),
                );
                break;
            }
        }
    }

    exercised.push(Property::DecompositionInvariants);
    let report = match decompose(a) {
        Ok(r) => Some(r),
        Err(e) => {
            fail(Property::DecompositionInvariants, e.to_string());
            None
        }
    };
    if let Some(r) = &report {
        if !r.direct_sum {
            fail(
                Property::DecompositionInvariants,
                "blocks do not sum directly to A".into(),
            );
        }
        if !r.levels.is_well_nested(a.dim()) {
            fail(
                Property::DecompositionInvariants,
                "levels are not nested partitions".into(),
            );
        }
        for b in &r.blocks {
            if !b.is_ideal || !b.annihilates_others {
                fail(
                    Property::DecompositionInvariants,
                    format!("block {:?} fails ideal or zero-product check", b.indices),
                );
            }
        }
    }

    if ann == 0 && given_semi {
        exercised.push(Property::BlocksSimple);
        if let Some(r) = &report {
            for b in &r.blocks {
                let sub = a.restrict(&b.indices).map_err(OracleError::from)?;
                if !oracle::oracle_is_simple(&sub, ceilings)? {
                    fail(Property::BlocksSimple, format!("block {:?} is not simple", b.indices));
                }
            }
        }
    }

    if given_weak {
        exercised.push(Property::Level1ClassInIdeal);
        let levels = connection_levels(a);
        for ideal in &ideals {
            for class in &levels.level1 {
                let touches = class.iter().any(|&i| ideal.contains_unchecked(&a.basis_vector(i)));
                if touches && !class.iter().all(|&i| ideal.contains_unchecked(&a.basis_vector(i))) {
                    fail(
                        Property::Level1ClassInIdeal,
                        format!("class {class:?} meets but is not inside ideal {ideal}"),
                    );
                }
            }
        }
    }

    if let Some(fam) = &family {
        exercised.push(Property::ConstructedBasisSemiDivision);
        match semi_division_basis_from_ideals(a, fam) {
            Ok((_, b)) => {
                if !check_semi_division(&b, &basis_profile(&b), CheckMode::Exhaustive)
                    .map_err(OracleError::from)?
                    .holds()
                {
                    fail(
                        Property::ConstructedBasisSemiDivision,
                        "assembled basis is not semi-division".into(),
                    );
                }
            }
            Err(e) => fail(Property::ConstructedBasisSemiDivision, e.to_string()),
        }
    }

    exercised.push(Property::Hierarchy);
    if (given_i && !given_semi) || (given_semi && !given_weak) {
        fail(
            Property::Hierarchy,
            format!("i-division {given_i}, semi-division {given_semi}, weak-division {given_weak}"),
        );
    }

    exercised.push(Property::OracleConsistency);
    if semisimple && ann != 0 {
        fail(
            Property::OracleConsistency,
            format!("semisimple with annihilator rank {ann}"),
        );
    }
    if simple && !semisimple {
        fail(Property::OracleConsistency, "simple but not semisimple".into());
    }

    exercised.push(Property::IdealLattice);
    'lattice: for (i, s) in ideals.iter().enumerate() {
        for t in &ideals[i + 1..] {
            let (sum, meet) = (s.sum(t), s.intersection(t));
            if !ideals.contains(&sum) || !ideals.contains(&meet) {
                fail(Property::IdealLattice, format!("{s} and {t}"));
                break 'lattice;
            }
        }
    }

    Ok(TrialRecord {
        index: 0,
        seed: 0,
        algebra: a.clone(),
        annihilator_rank: ann,
        oracle_semisimple: semisimple,
        oracle_simple: simple,
        semi_division_basis_exists: semi_exists,
        i_division_basis_exists: i_exists,
        given_weak,
        given_semi,
        given_i,
        blocks: report.map_or(0, |r| r.blocks.len()),
        exercised,
        violations,
    })
}

pub fn run_trial(cfg: &FuzzConfig, index: usize, ceilings: &Ceilings) -> Result<TrialRecord, FuzzError> {
    let seed = cfg.trial_seed(index);
    let a = random_algebra(&FuzzConfig { seed, ..*cfg })?;
    let mut record = check_algebra(&a, ceilings)?;
    record.index = index;
    record.seed = seed;
    Ok(record)
}

#[derive(Debug, Clone)]
pub struct CampaignSummary {
    pub config: FuzzConfig,
    /// In trial order.
    pub trials: Vec<TrialRecord>,
}

impl CampaignSummary {
    pub fn violations(&self) -> impl Iterator<Item = (&TrialRecord, &Violation)> {
        self.trials
            .iter()
            .flat_map(|t| t.violations.iter().map(move |v| (t, v)))
    }

    pub fn is_clean(&self) -> bool {
        self.violations().next().is_none()
    }

    /// `(exercised, violated)` for a property.
    pub fn tally(&self, property: Property) -> (usize, usize) {
        let exercised = self.trials.iter().filter(|t| t.exercised.contains(&property)).count();
        let violated = self
            .trials
            .iter()
            .filter(|t| t.violations.iter().any(|v| v.property == property))
            .count();
        (exercised, violated)
    }

    pub fn count(&self, pred: impl Fn(&TrialRecord) -> bool) -> usize {
        self.trials.iter().filter(|t| pred(t)).count()
    }
}

pub fn run_campaign(cfg: &FuzzConfig, exec: Execution, ceilings: &Ceilings) -> Result<CampaignSummary, FuzzError> {
    cfg.validate(ceilings)?;
    let indices: Vec<usize> = (0..cfg.trials).collect();
    let trials = exec
        .map(&indices, |&i| run_trial(cfg, i, ceilings))
        .into_iter()
        .collect::<Result<Vec<_>, _>>()?;
    Ok(CampaignSummary { config: *cfg, trials })
}

/// Greedily drops structure constants while `still_fails` keeps holding.
pub fn minimize(a: &AlgebraPresentation, still_fails: impl Fn(&AlgebraPresentation) -> bool) -> AlgebraPresentation {
    let mut current = a.clone();
    loop {
        let entries: Vec<_> = current.entries().map(|(i, j, k, c)| (i, j, k, c.clone())).collect();
        let mut shrunk = false;
        for skip in 0..entries.len() {
            let rest = entries
                .iter()
                .enumerate()
                .filter(|(idx, _)| *idx != skip)
                .map(|(_, e)| e.clone());
            let candidate = AlgebraPresentation::from_entries(current.field(), current.dim(), rest)
                .expect("subset of valid entries")
                .with_labels(current.labels().to_vec())
                .expect("labels unchanged");
            if still_fails(&candidate) {
                current = candidate;
                shrunk = true;
                break;
            }
        }
        if !shrunk {
            return current;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn cfg(p: u64, dim: usize, sparsity: f64, seed: u64) -> FuzzConfig {
        FuzzConfig {
            field: Field::prime(p).unwrap(),
            dim,
            sparsity,
            seed,
            trials: 1,
        }
    }

    #[test]
    fn random_algebra_examples() {
        let c = cfg(3, 3, 0.3, 99);
        assert_eq!(random_algebra(&c).unwrap(), random_algebra(&c).unwrap());
        assert!(random_algebra(&cfg(3, 3, 0.0, 1)).unwrap().has_zero_product());
        let one = random_algebra(&cfg(2, 1, 1.0, 5)).unwrap();
        assert_eq!(one.entries().count(), 1);
        assert!(one.coefficient(0, 0, 0).is_one());
        assert!(matches!(
            random_algebra(&cfg(2, 5, 0.1, 0)),
            Err(FuzzError::Dimension(5))
        ));
        assert!(matches!(
            random_algebra(&cfg(2, 2, 1.5, 0)),
            Err(FuzzError::Sparsity(_))
        ));
        let q = FuzzConfig {
            field: Field::Rationals,
            ..cfg(2, 2, 0.5, 0)
        };
        assert!(matches!(random_algebra(&q), Err(FuzzError::NotPrimeField(_))));
    }

    #[test]
    fn small_campaign_is_clean_and_mode_independent() {
        let c = FuzzConfig {
            trials: 24,
            ..cfg(2, 2, 0.35, 11)
        };
        let ceil = Ceilings::default();
        let seq = run_campaign(&c, Execution::Sequential, &ceil).unwrap();
        let par = run_campaign(&c, Execution::Parallel, &ceil).unwrap();
        assert!(seq.is_clean(), "{:?}", seq.violations().collect::<Vec<_>>());
        let key = |s: &CampaignSummary| {
            s.trials
                .iter()
                .map(|t| (t.seed, t.oracle_semisimple, t.oracle_simple, t.annihilator_rank))
                .collect::<Vec<_>>()
        };
        assert_eq!(key(&seq), key(&par));
    }

    #[test]
    fn minimize_keeps_the_failure() {
        let a = random_algebra(&cfg(2, 3, 0.6, 3)).unwrap();
        let has_nonzero_square = |b: &AlgebraPresentation| !b.basis_product(0, 0).is_zero();
        if has_nonzero_square(&a) {
            let m = minimize(&a, has_nonzero_square);
            assert!(has_nonzero_square(&m));
            assert_eq!(m.entries().count(), 1);
        }
    }
}
