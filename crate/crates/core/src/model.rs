//! Constructors, enumeration and seeded random generation of Q-structures.
//!
//! Two worked structures anchor everything: the classical model over a set
//! of propositional variables and the ray model over one-dimensional
//! subspaces of `Q^d`. Exhaustive enumeration of tiny structures and a
//! seeded rejection sampler provide the model supply for the soundness
//! harnesses and for countermodel search.

use num_rational::BigRational;
use num_traits::Zero;
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use thiserror::Error;

use crate::linalg::{Subspace, Vector};
use crate::phase::{Fact, QStructure};
use crate::set::ElemSet;

/// Enumeration is capped here; the candidate count grows as
/// `n^((n-1)^2) * 2^n`, which at 4 is about 4.2 million and at 5 is
/// astronomically past feasible.
pub const MAX_ENUMERATION_SIZE: usize = 4;

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum ModelError {
    #[error("{0} variables would build a carrier of {1} elements; at most 4 variables are supported")]
    TooManyVariables(usize, usize),
    #[error("ray {index} is the zero vector")]
    ZeroRay { index: usize },
    #[error("ray {index} has dimension {got}, expected {expected}")]
    RayDimension {
        index: usize,
        expected: usize,
        got: usize,
    },
    #[error("rays {a} and {b} are collinear")]
    CollinearRays { a: usize, b: usize },
    #[error(
        "enumeration supports size <= {MAX_ENUMERATION_SIZE}, got {0}; use random_qstructure for larger carriers"
    )]
    EnumerationTooLarge(usize),
}

/// The phase-style presentation of classical propositional logic over a
/// variable set: carrier = truth assignments plus a unit and a zero,
/// assignments compose idempotently and clash to zero, the zero absorbs
/// and is the only garbage element.
///
/// Element layout: index 0 is the unit, indices `1..=2^k` are the
/// assignments in mask order, the last index is the zero element.
pub fn classical_model(variables: &[String]) -> Result<QStructure, ModelError> {
    let k = variables.len();
    if k > 4 {
        return Err(ModelError::TooManyVariables(k, (1usize << k) + 2));
    }
    let assignments = 1usize << k;
    let size = assignments + 2;
    let unit = 0usize;
    let zero = size - 1;
    let element = |mask: usize| 1 + mask;

    let mut rows = vec![vec![0usize; size]; size];
    for x in 0..size {
        for y in 0..size {
            rows[x][y] = if x == unit {
                y
            } else if y == unit {
                x
            } else if x == zero || y == zero {
                zero
            } else if x == y {
                x
            } else {
                zero
            };
        }
    }

    let mut labels = Vec::with_capacity(size);
    labels.push("1".to_string());
    for mask in 0..assignments {
        let trues: Vec<&str> = variables
            .iter()
            .enumerate()
            .filter(|(i, _)| mask & (1 << i) != 0)
            .map(|(_, v)| v.as_str())
            .collect();
        labels.push(format!("{{{}}}", trues.join(",")));
    }
    labels.push("0".to_string());
    debug_assert_eq!(labels.len(), size);
    debug_assert_eq!(element(assignments - 1) + 1, zero);

    let q = QStructure::new(rows, unit, [zero], Some(labels))
        .expect("classical table is well formed");
    assert!(q.validate().is_valid(), "classical model must satisfy the axioms");
    assert!(q.is_projective(), "classical model must be projective");
    Ok(q)
}

/// The ray model: the given one-dimensional subspaces plus a zero element
/// and the full space as the unit. Composition projects the left ray onto
/// the right one, which for rays means "keep the right ray unless the two
/// are orthogonal". Garbage is the zero element alone.
///
/// Element layout: index 0 is the unit (the full space `H`), indices
/// `1..=rays.len()` are the rays in input order, the last index is zero.
///
/// Ray sets that are not closed under orthocomplement within the list give
/// structures whose principal orthogonals miss rays, which makes some
/// expected sets non-facts; callers that care should close the list.
pub fn ray_model(rays: &[Vector<BigRational>], ambient_dim: usize) -> Result<QStructure, ModelError> {
    for (i, r) in rays.iter().enumerate() {
        if r.dim() != ambient_dim {
            return Err(ModelError::RayDimension {
                index: i,
                expected: ambient_dim,
                got: r.dim(),
            });
        }
        if r.is_zero() {
            return Err(ModelError::ZeroRay { index: i });
        }
    }
    for i in 0..rays.len() {
        for j in (i + 1)..rays.len() {
            let pair = [rays[i].clone(), rays[j].clone()];
            let rank = Subspace::span(ambient_dim, &pair)
                .expect("dimensions checked above")
                .rank();
            if rank < 2 {
                return Err(ModelError::CollinearRays { a: i, b: j });
            }
        }
    }

    let size = rays.len() + 2;
    let unit = 0usize;
    let zero = size - 1;
    let ray_index = |i: usize| 1 + i;

    let mut rows = vec![vec![0usize; size]; size];
    for x in 0..size {
        for y in 0..size {
            rows[x][y] = if x == unit {
                y
            } else if y == unit {
                x
            } else if x == zero || y == zero {
                zero
            } else {
                let rx = &rays[x - 1];
                let ry = &rays[y - 1];
                if rx.dot(ry).is_zero() {
                    zero
                } else {
                    y
                }
            };
        }
    }

    let mut labels = Vec::with_capacity(size);
    labels.push("H".to_string());
    for r in rays {
        labels.push(format!("({r})"));
    }
    labels.push("0".to_string());
    debug_assert_eq!(ray_index(rays.len() - 1) + 1, zero);

    let q = QStructure::new(rows, unit, [zero], Some(labels)).expect("ray table is well formed");
    assert!(q.validate().is_valid(), "ray model must satisfy the axioms");
    assert!(q.is_projective(), "ray model must be projective");
    Ok(q)
}

/// Indices of rays whose orthogonal companions within the list fail to
/// span the ray's orthocomplement. For such rays the principal orthogonal
/// inside the finite model sees too few elements, which turns sets one
/// would expect to be facts into non-facts (dropping one diagonal from a
/// plane model is the classic surprise). Empty means the list is closed
/// enough for principal orthogonals to be faithful.
pub fn ray_orthocomplement_gaps(
    rays: &[Vector<BigRational>],
    ambient_dim: usize,
) -> Vec<usize> {
    let mut gaps = Vec::new();
    for (i, r) in rays.iter().enumerate() {
        let companions: Vec<Vector<BigRational>> = rays
            .iter()
            .filter(|s| r.dot(s).is_zero())
            .cloned()
            .collect();
        let spanned = Subspace::span(ambient_dim, &companions)
            .expect("rays share the ambient dimension");
        let complement = Subspace::span(ambient_dim, std::slice::from_ref(r))
            .expect("rays share the ambient dimension")
            .ortho_complement();
        if spanned != complement {
            gaps.push(i);
        }
    }
    gaps
}

/// Lazily yields every Q-structure on carrier `{0..size-1}` with unit 0,
/// each exactly once, in a fixed order: composition tables advance as an
/// odometer over the non-unit cells, and for each table the garbage subset
/// runs through all masks. No isomorphism reduction is performed.
pub fn enumerate_qstructures(size: usize) -> Result<StructureEnumeration, ModelError> {
    if size == 0 || size > MAX_ENUMERATION_SIZE {
        return Err(ModelError::EnumerationTooLarge(size));
    }
    Ok(StructureEnumeration::new(size))
}

pub struct StructureEnumeration {
    size: usize,
    /// Values of the free cells `(x, y)` with `x, y >= 1`, row-major.
    digits: Vec<usize>,
    garbage_mask: u64,
    table: Vec<usize>,
    exhausted: bool,
}

impl StructureEnumeration {
    fn new(size: usize) -> StructureEnumeration {
        let free = (size - 1) * (size - 1);
        let mut table = vec![0usize; size * size];
        for x in 0..size {
            for y in 0..size {
                table[x * size + y] = if x == 0 {
                    y
                } else if y == 0 {
                    x
                } else {
                    0
                };
            }
        }
        StructureEnumeration {
            size,
            digits: vec![0; free],
            garbage_mask: 0,
            table,
            exhausted: false,
        }
    }

    fn write_digits(&mut self) {
        let n = self.size;
        let mut k = 0;
        for x in 1..n {
            for y in 1..n {
                self.table[x * n + y] = self.digits[k];
                k += 1;
            }
        }
    }

    /// Advances to the next candidate; false when the space is exhausted.
    fn advance(&mut self) -> bool {
        self.garbage_mask += 1;
        if self.garbage_mask < (1u64 << self.size) {
            return true;
        }
        self.garbage_mask = 0;
        for d in self.digits.iter_mut().rev() {
            *d += 1;
            if *d < self.size {
                self.write_digits();
                return true;
            }
            *d = 0;
        }
        false
    }
}

impl Iterator for StructureEnumeration {
    type Item = QStructure;

    fn next(&mut self) -> Option<QStructure> {
        if self.exhausted {
            return None;
        }
        loop {
            let garbage = garbage_from_mask(self.garbage_mask);
            let found = crate::phase::table_axioms_hold(self.size, &self.table, 0, garbage);
            let item = if found {
                Some(
                    QStructure::from_flat(self.size, self.table.clone(), 0, garbage.iter(), None)
                        .expect("enumerated tables are well formed"),
                )
            } else {
                None
            };
            if !self.advance() {
                self.exhausted = true;
                return item;
            }
            if item.is_some() {
                return item;
            }
        }
    }
}

fn garbage_from_mask(mask: u64) -> ElemSet {
    ElemSet::from_indices((0..64).filter(|i| mask & (1u64 << i) != 0))
}

/// Configuration for the rejection sampler.
#[derive(Debug, Clone)]
pub struct RandomModelConfig {
    pub size: usize,
    /// Keep sampling until the structure is projective as well.
    pub projective: bool,
    /// Permit the unit in the garbage draw. Off by default: a garbage unit
    /// collapses the orthogonal of the garbage set, which is rarely what a
    /// harness wants, but adversarial tests may switch it on.
    pub allow_unit_garbage: bool,
    pub max_attempts: u64,
}

impl RandomModelConfig {
    pub fn new(size: usize) -> RandomModelConfig {
        RandomModelConfig {
            size,
            projective: false,
            allow_unit_garbage: false,
            max_attempts: 1_000_000,
        }
    }

    pub fn projective(mut self, flag: bool) -> RandomModelConfig {
        self.projective = flag;
        self
    }

    pub fn allow_unit_garbage(mut self, flag: bool) -> RandomModelConfig {
        self.allow_unit_garbage = flag;
        self
    }
}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum SamplingError {
    #[error(
        "no {kind} structure of size {size} found within {attempts} attempts (seed {seed})"
    )]
    BudgetExhausted {
        size: usize,
        attempts: u64,
        seed: u64,
        kind: &'static str,
    },
}

/// A sampled structure together with how many candidates were rejected
/// before it was found.
#[derive(Debug, Clone)]
pub struct SampledModel {
    pub structure: QStructure,
    pub attempts: u64,
}

/// Rejection-samples a valid Q-structure with unit 0: non-unit table cells
/// drawn uniformly, each non-unit element put in the garbage set with
/// probability one half. The same seed always reproduces the same
/// structure.
pub fn random_qstructure(
    config: &RandomModelConfig,
    seed: u64,
) -> Result<SampledModel, SamplingError> {
    let n = config.size;
    assert!(n >= 1, "size must be positive");
    assert!(n <= crate::set::MAX_CARRIER);
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut table = vec![0usize; n * n];
    for x in 0..n {
        table[x * n] = x;
    }
    for y in 0..n {
        table[y] = y;
    }
    for attempt in 1..=config.max_attempts {
        for x in 1..n {
            for y in 1..n {
                table[x * n + y] = rng.gen_range(0..n);
            }
        }
        let mut garbage = ElemSet::EMPTY;
        for e in 0..n {
            if e == 0 && !config.allow_unit_garbage {
                continue;
            }
            if rng.gen_bool(0.5) {
                garbage.insert(e);
            }
        }
        if !crate::phase::table_axioms_hold(n, &table, 0, garbage) {
            continue;
        }
        if config.projective && !crate::phase::table_is_projective(n, &table, garbage) {
            continue;
        }
        let structure = QStructure::from_flat(n, table.clone(), 0, garbage.iter(), None)
            .expect("sampled tables are well formed");
        return Ok(SampledModel {
            structure,
            attempts: attempt,
        });
    }
    Err(SamplingError::BudgetExhausted {
        size: n,
        attempts: config.max_attempts,
        seed,
        kind: if config.projective { "projective" } else { "valid" },
    })
}

/// Uniform choice from the structure's facts, deterministic per seed.
/// The fact list is never empty: the least fact always exists.
pub fn random_fact(q: &QStructure, seed: u64) -> Fact<'_> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let facts = q.all_facts();
    facts[rng.gen_range(0..facts.len())]
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::parse_vector;

    fn b1() -> QStructure {
        let rays: Vec<_> = ["1,0", "0,1", "1,1", "1,-1"]
            .iter()
            .map(|s| parse_vector(s).unwrap())
            .collect();
        ray_model(&rays, 2).unwrap()
    }

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn classical_model_shapes() {
        assert_eq!(classical_model(&vars(&[])).unwrap().size(), 3);
        let c1 = classical_model(&vars(&["p"])).unwrap();
        assert_eq!(c1.size(), 4);
        assert_eq!(c1.all_facts().len(), 4);
        let cpq = classical_model(&vars(&["p", "q"])).unwrap();
        assert_eq!(cpq.size(), 6);
        assert_eq!(cpq.all_facts().len(), 16);
        assert!(matches!(
            classical_model(&vars(&["a", "b", "c", "d", "e"])),
            Err(ModelError::TooManyVariables(5, 34))
        ));
    }

    #[test]
    fn classical_facts_are_zero_padded_assignment_sets() {
        let cpq = classical_model(&vars(&["p", "q"])).unwrap();
        let zero = cpq.size() - 1;
        for f in cpq.all_facts() {
            if f.set() == cpq.carrier() {
                continue;
            }
            assert!(f.contains(zero));
            assert!(!f.contains(cpq.unit()));
        }
    }

    #[test]
    fn ray_model_shapes_and_errors() {
        let q = b1();
        assert_eq!(q.size(), 6);
        assert_eq!(q.all_facts().len(), 6);

        // a lone ray has no orthocomplement partner in the list, so the
        // only facts are the least one and the carrier
        let single = ray_model(&[parse_vector("1,0").unwrap()], 2).unwrap();
        assert_eq!(single.size(), 3);
        let facts: Vec<_> = single.all_facts().iter().map(|f| f.set()).collect();
        assert_eq!(facts, vec![ElemSet::singleton(2), single.carrier()]);

        let two = ray_model(
            &[parse_vector("1,0").unwrap(), parse_vector("0,1").unwrap()],
            2,
        )
        .unwrap();
        assert_eq!(two.all_facts().len(), 4);

        assert!(matches!(
            ray_model(&[parse_vector("0,0").unwrap()], 2),
            Err(ModelError::ZeroRay { index: 0 })
        ));
        assert!(matches!(
            ray_model(
                &[parse_vector("1,1").unwrap(), parse_vector("2,2").unwrap()],
                2
            ),
            Err(ModelError::CollinearRays { a: 0, b: 1 })
        ));
        assert!(matches!(
            ray_model(&[parse_vector("1,0,0").unwrap()], 2),
            Err(ModelError::RayDimension { index: 0, .. })
        ));
    }

    #[test]
    fn orthocomplement_gap_detection() {
        let full: Vec<_> = ["1,0", "0,1", "1,1", "1,-1"]
            .iter()
            .map(|s| parse_vector(s).unwrap())
            .collect();
        assert!(ray_orthocomplement_gaps(&full, 2).is_empty());
        // without the second diagonal, the first diagonal has no
        // orthogonal companion
        assert_eq!(ray_orthocomplement_gaps(&full[..3], 2), vec![2]);
        assert_eq!(ray_orthocomplement_gaps(&full[..1], 2), vec![0]);
    }

    #[test]
    fn only_the_carrier_contains_the_unit_in_worked_models() {
        for q in [classical_model(&vars(&["p"])).unwrap(), b1()] {
            let zero = q.size() - 1;
            for f in q.all_facts() {
                if f.contains(q.unit()) {
                    assert_eq!(f.set(), q.carrier());
                } else {
                    assert!(f.contains(zero));
                }
            }
        }
    }

    #[test]
    fn enumeration_of_singletons() {
        let all: Vec<_> = enumerate_qstructures(1).unwrap().collect();
        // the forced table passes with either garbage choice
        assert_eq!(all.len(), 2);
        for q in &all {
            assert!(q.validate().is_valid());
        }
    }

    #[test]
    fn enumeration_counts_are_stable() {
        let n2: Vec<_> = enumerate_qstructures(2).unwrap().collect();
        for q in &n2 {
            assert!(q.validate().is_valid());
            assert_eq!(q.unit(), 0);
        }
        assert_eq!(n2.len(), 8);

        let n3 = enumerate_qstructures(3).unwrap().count();
        assert_eq!(n3, 272);
    }

    #[test]
    fn enumeration_rejects_large_sizes() {
        assert!(matches!(
            enumerate_qstructures(5),
            Err(ModelError::EnumerationTooLarge(5))
        ));
    }

    #[test]
    fn random_structures_are_deterministic_and_valid() {
        let cfg = RandomModelConfig::new(3);
        let a = random_qstructure(&cfg, 1).unwrap();
        let b = random_qstructure(&cfg, 1).unwrap();
        assert_eq!(a.structure, b.structure);
        assert_eq!(a.attempts, b.attempts);

        let cfg4 = RandomModelConfig::new(4);
        for seed in 0..100 {
            let s = random_qstructure(&cfg4, seed).unwrap();
            assert!(s.structure.validate().is_valid());
        }
    }

    #[test]
    fn projective_sampling() {
        let cfg = RandomModelConfig::new(4).projective(true);
        for seed in 0..20 {
            let s = random_qstructure(&cfg, seed).unwrap().structure;
            assert!(s.is_projective());
            assert_eq!(s.one_fact().set(), s.carrier());
        }
    }

    #[test]
    fn random_fact_is_uniformish_on_c1() {
        let q = classical_model(&vars(&["p"])).unwrap();
        let facts = q.all_facts();
        let mut counts = vec![0u32; facts.len()];
        for seed in 0..10_000u64 {
            let f = random_fact(&q, seed);
            let idx = facts.iter().position(|g| g.set() == f.set()).unwrap();
            counts[idx] += 1;
        }
        for c in counts {
            assert!(
                (2250..=2750).contains(&c),
                "draws per fact out of the ±10% band: {c}"
            );
        }
    }

    #[test]
    fn random_fact_on_a_one_element_structure() {
        let q = QStructure::new(vec![vec![0]], 0, [0], None).unwrap();
        assert_eq!(q.all_facts().len(), 1);
        assert_eq!(random_fact(&q, 9).set(), q.carrier());
    }
}
