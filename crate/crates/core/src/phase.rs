//! Finite Q-structures and their fact algebra.
//!
//! A Q-structure is a finite carrier with a binary composition table, a
//! distinguished *garbage* subset of impossible composites, and a two-sided
//! unit. Composition is neither commutative nor associative; instead the
//! garbage set must satisfy two membership conditions (symmetry and
//! reversal) that are exactly what the connective algebra needs.
//!
//! Subsets that equal their double orthogonal are *facts*; they are the
//! denotations of formulas. All connectives are computed here as exact
//! bitset operations, so every algebraic law is testable with zero
//! tolerance.

use std::fmt;

use thiserror::Error;

use crate::set::{ElemSet, MAX_CARRIER};

/// Structural (shape) problems, distinct from axiom violations: a table
/// that is not `size x size`, indices out of range, and so on.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum StructureError {
    #[error("carrier must have at least one element")]
    EmptyCarrier,
    #[error("carrier size {0} exceeds the supported maximum {MAX_CARRIER}")]
    CarrierTooLarge(usize),
    #[error("dot table has {got} rows, expected {expected}")]
    BadRowCount { expected: usize, got: usize },
    #[error("dot table row {row} has length {got}, expected {expected}")]
    BadRowLength { row: usize, expected: usize, got: usize },
    #[error("dot[{x}][{y}] = {value} is out of range")]
    EntryOutOfRange { x: usize, y: usize, value: usize },
    #[error("unit index {0} is out of range")]
    UnitOutOfRange(usize),
    #[error("garbage element {0} is out of range")]
    GarbageOutOfRange(usize),
    #[error("expected {expected} labels, got {got}")]
    BadLabelCount { expected: usize, got: usize },
}

/// A single axiom violation, naming the condition and the witnessing tuple.
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Violation {
    /// `dot[unit][x] != x` (left) or `dot[x][unit] != x` (right).
    UnitNotNeutral { x: usize, left: bool },
    /// `dot[x][y]` and `dot[y][x]` disagree on garbage membership.
    SymmetryBroken { x: usize, y: usize },
    /// `dot[dot[x][y]][z]` and `dot[x][dot[z][y]]` disagree on garbage membership.
    ReversalBroken { x: usize, y: usize, z: usize },
}

impl Violation {
    /// Condition name as used in reports.
    pub fn condition(&self) -> &'static str {
        match self {
            Violation::UnitNotNeutral { .. } => "unit-neutrality",
            Violation::SymmetryBroken { .. } => "symmetry",
            Violation::ReversalBroken { .. } => "reversal",
        }
    }
}

impl fmt::Display for Violation {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match *self {
            Violation::UnitNotNeutral { x, left } => {
                let side = if left { "unit.x" } else { "x.unit" };
                write!(f, "unit-neutrality broken at x={x} ({side} != x)")
            }
            Violation::SymmetryBroken { x, y } => {
                write!(f, "symmetry broken at (x,y)=({x},{y})")
            }
            Violation::ReversalBroken { x, y, z } => {
                write!(f, "reversal broken at (x,y,z)=({x},{y},{z})")
            }
        }
    }
}

/// Result of checking the three structure axioms. Lists every violation,
/// not just the first, so mutation diagnostics stay informative.
#[derive(Debug, Clone, PartialEq, Eq, Default)]
pub struct ValidationReport {
    pub violations: Vec<Violation>,
}

impl ValidationReport {
    pub fn is_valid(&self) -> bool {
        self.violations.is_empty()
    }
}

impl fmt::Display for ValidationReport {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.violations.is_empty() {
            write!(f, "valid")
        } else {
            writeln!(f, "{} violation(s):", self.violations.len())?;
            for v in &self.violations {
                writeln!(f, "  {v}")?;
            }
            Ok(())
        }
    }
}

/// Errors from the fact-level API.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum FactError {
    #[error("set is not biorthogonally closed")]
    NotClosed,
    #[error("facts belong to different structures")]
    MixedStructures,
}

/// Axiom check on a raw row-major table. Enumeration and rejection
/// sampling call this on candidate tables before materializing a
/// structure; it exits on the first failure.
pub(crate) fn table_axioms_hold(size: usize, dot: &[usize], unit: usize, garbage: ElemSet) -> bool {
    let at = |x: usize, y: usize| dot[x * size + y];
    for x in 0..size {
        if at(unit, x) != x || at(x, unit) != x {
            return false;
        }
    }
    for x in 0..size {
        for y in (x + 1)..size {
            if garbage.contains(at(x, y)) != garbage.contains(at(y, x)) {
                return false;
            }
        }
    }
    for x in 0..size {
        for y in 0..size {
            for z in 0..size {
                if garbage.contains(at(at(x, y), z)) != garbage.contains(at(x, at(z, y))) {
                    return false;
                }
            }
        }
    }
    true
}

pub(crate) fn table_is_projective(size: usize, dot: &[usize], garbage: ElemSet) -> bool {
    garbage
        .iter()
        .all(|z| (0..size).all(|y| garbage.contains(dot[z * size + y])))
}

/// A finite Q-structure: carrier `{0, …, size-1}`, composition table,
/// garbage subset and unit element. Immutable once built; all operations
/// are pure functions of the structure and their set arguments.
#[derive(Debug, Clone)]
pub struct QStructure {
    size: usize,
    unit: usize,
    /// Row-major `size * size` composition table.
    dot: Vec<usize>,
    garbage: ElemSet,
    labels: Vec<String>,
}

impl PartialEq for QStructure {
    fn eq(&self, other: &Self) -> bool {
        // labels are presentation only
        self.size == other.size
            && self.unit == other.unit
            && self.dot == other.dot
            && self.garbage == other.garbage
    }
}

impl Eq for QStructure {}

impl QStructure {
    /// Builds a structure from a row-major table given as rows. Checks
    /// shape and ranges only; axiom checking is [`QStructure::validate`].
    pub fn new(
        rows: Vec<Vec<usize>>,
        unit: usize,
        garbage: impl IntoIterator<Item = usize>,
        labels: Option<Vec<String>>,
    ) -> Result<QStructure, StructureError> {
        let size = rows.len();
        if size == 0 {
            return Err(StructureError::EmptyCarrier);
        }
        if size > MAX_CARRIER {
            return Err(StructureError::CarrierTooLarge(size));
        }
        let mut dot = Vec::with_capacity(size * size);
        for (x, row) in rows.iter().enumerate() {
            if row.len() != size {
                return Err(StructureError::BadRowLength {
                    row: x,
                    expected: size,
                    got: row.len(),
                });
            }
            for (y, &value) in row.iter().enumerate() {
                if value >= size {
                    return Err(StructureError::EntryOutOfRange { x, y, value });
                }
                dot.push(value);
            }
        }
        if unit >= size {
            return Err(StructureError::UnitOutOfRange(unit));
        }
        let mut gset = ElemSet::EMPTY;
        for g in garbage {
            if g >= size {
                return Err(StructureError::GarbageOutOfRange(g));
            }
            gset.insert(g);
        }
        let labels = match labels {
            Some(ls) => {
                if ls.len() != size {
                    return Err(StructureError::BadLabelCount {
                        expected: size,
                        got: ls.len(),
                    });
                }
                ls
            }
            None => (0..size).map(|i| format!("x{i}")).collect(),
        };
        Ok(QStructure {
            size,
            unit,
            dot,
            garbage: gset,
            labels,
        })
    }

    /// Same shape checks as [`QStructure::new`] but from a flat row-major table.
    pub fn from_flat(
        size: usize,
        dot: Vec<usize>,
        unit: usize,
        garbage: impl IntoIterator<Item = usize>,
        labels: Option<Vec<String>>,
    ) -> Result<QStructure, StructureError> {
        if size == 0 {
            return Err(StructureError::EmptyCarrier);
        }
        if dot.len() != size * size {
            return Err(StructureError::BadRowCount {
                expected: size,
                got: dot.len() / size.max(1),
            });
        }
        let rows = dot.chunks(size).map(|c| c.to_vec()).collect();
        QStructure::new(rows, unit, garbage, labels)
    }

    pub fn size(&self) -> usize {
        self.size
    }

    pub fn unit(&self) -> usize {
        self.unit
    }

    pub fn garbage(&self) -> ElemSet {
        self.garbage
    }

    pub fn carrier(&self) -> ElemSet {
        ElemSet::full(self.size)
    }

    pub fn label(&self, i: usize) -> &str {
        &self.labels[i]
    }

    pub fn labels(&self) -> &[String] {
        &self.labels
    }

    /// Replaces the display labels (presentation only).
    pub fn set_labels(&mut self, labels: Vec<String>) -> Result<(), StructureError> {
        if labels.len() != self.size {
            return Err(StructureError::BadLabelCount {
                expected: self.size,
                got: labels.len(),
            });
        }
        self.labels = labels;
        Ok(())
    }

    #[inline]
    pub fn dot(&self, x: usize, y: usize) -> usize {
        self.dot[x * self.size + y]
    }

    /// Row-major table, one row per left factor.
    pub fn rows(&self) -> Vec<Vec<usize>> {
        self.dot.chunks(self.size).map(|c| c.to_vec()).collect()
    }

    #[inline]
    pub fn in_garbage(&self, i: usize) -> bool {
        self.garbage.contains(i)
    }

    /// `x` is orthogonal to `y` when their composite is garbage.
    #[inline]
    pub fn orthogonal(&self, x: usize, y: usize) -> bool {
        self.in_garbage(self.dot(x, y))
    }

    /// Checks the three axioms and reports every violation. Symmetry
    /// witnesses are canonicalized to `x < y`; reversal witnesses list
    /// each offending triple.
    pub fn validate(&self) -> ValidationReport {
        let mut violations = Vec::new();
        for x in 0..self.size {
            if self.dot(self.unit, x) != x {
                violations.push(Violation::UnitNotNeutral { x, left: true });
            }
            if self.dot(x, self.unit) != x {
                violations.push(Violation::UnitNotNeutral { x, left: false });
            }
        }
        for x in 0..self.size {
            for y in (x + 1)..self.size {
                if self.in_garbage(self.dot(x, y)) != self.in_garbage(self.dot(y, x)) {
                    violations.push(Violation::SymmetryBroken { x, y });
                }
            }
        }
        for x in 0..self.size {
            for y in 0..self.size {
                for z in 0..self.size {
                    let lhs = self.in_garbage(self.dot(self.dot(x, y), z));
                    let rhs = self.in_garbage(self.dot(x, self.dot(z, y)));
                    if lhs != rhs {
                        violations.push(Violation::ReversalBroken { x, y, z });
                    }
                }
            }
        }
        ValidationReport { violations }
    }

    /// Early-exit axiom check for rejection samplers and enumeration.
    pub fn axioms_hold(&self) -> bool {
        table_axioms_hold(self.size, &self.dot, self.unit, self.garbage)
    }

    /// Garbage absorbs under composition: `z` in garbage forces `z.y` into
    /// garbage for every `y`.
    pub fn is_projective(&self) -> bool {
        table_is_projective(self.size, &self.dot, self.garbage)
    }

    /// Garbage elements that are not a composite of two orthogonal
    /// elements. Informational: with a neutral unit the gap is empty, since
    /// `z = unit.z` and `unit` is orthogonal to any garbage element.
    pub fn garbage_not_generated(&self) -> ElemSet {
        let mut generated = ElemSet::EMPTY;
        for x in 0..self.size {
            for y in 0..self.size {
                let xy = self.dot(x, y);
                if self.in_garbage(xy) {
                    generated.insert(xy);
                }
            }
        }
        self.garbage.diff(generated)
    }

    /// The orthogonal `{ b | b.a in garbage for all a in the set }`.
    /// The orthogonal of the empty set is the whole carrier.
    pub fn orth(&self, a: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        'outer: for b in 0..self.size {
            for x in a.iter() {
                if !self.orthogonal(b, x) {
                    continue 'outer;
                }
            }
            out.insert(b);
        }
        out
    }

    pub fn biorth(&self, a: ElemSet) -> ElemSet {
        self.orth(self.orth(a))
    }

    pub fn is_fact_set(&self, a: ElemSet) -> bool {
        self.biorth(a) == a
    }

    /// Pointwise composite `{ a.b | a in lhs, b in rhs }`; empty when
    /// either argument is empty.
    pub fn dot_set(&self, lhs: ElemSet, rhs: ElemSet) -> ElemSet {
        let mut out = ElemSet::EMPTY;
        for a in lhs.iter() {
            for b in rhs.iter() {
                out.insert(self.dot(a, b));
            }
        }
        out
    }

    // Set-level connectives. On fact inputs these agree with the `Fact`
    // methods; they are total on arbitrary subsets, which the law suites
    // quantify over.

    pub fn neg_set(&self, a: ElemSet) -> ElemSet {
        self.orth(a)
    }

    pub fn tensor_set(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        self.biorth(self.dot_set(a, b))
    }

    pub fn par_set(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        self.orth(self.dot_set(self.orth(a), self.orth(b)))
    }

    pub fn limp_set(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        self.orth(self.dot_set(a, self.orth(b)))
    }

    pub fn with_set(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        a.inter(b)
    }

    pub fn plus_set(&self, a: ElemSet, b: ElemSet) -> ElemSet {
        self.biorth(a.union(b))
    }

    /// Every fact of the structure: the closure of the principal
    /// orthogonals `{x}^orth` under pairwise intersection, together with
    /// the full carrier, sorted by member bit-pattern. Avoids the
    /// power-set scan, so carriers around 20 elements stay cheap.
    pub fn all_facts(&self) -> Vec<Fact<'_>> {
        let mut sets: Vec<ElemSet> = vec![self.carrier()];
        for x in 0..self.size {
            let px = self.orth(ElemSet::singleton(x));
            if !sets.contains(&px) {
                sets.push(px);
            }
        }
        // close under pairwise intersection
        let mut i = 0;
        while i < sets.len() {
            let mut j = 0;
            while j < i {
                let meet = sets[i].inter(sets[j]);
                if !sets.contains(&meet) {
                    sets.push(meet);
                }
                j += 1;
            }
            i += 1;
        }
        sets.sort();
        sets.into_iter()
            .map(|set| Fact { q: self, set })
            .collect()
    }

    /// Wraps a set as a fact, requiring it to be biorthogonally closed.
    pub fn fact(&self, set: ElemSet) -> Result<Fact<'_>, FactError> {
        if self.is_fact_set(set) {
            Ok(Fact { q: self, set })
        } else {
            Err(FactError::NotClosed)
        }
    }

    /// The least fact containing a set (its biorthogonal closure).
    pub fn close(&self, set: ElemSet) -> Fact<'_> {
        Fact {
            q: self,
            set: self.biorth(set),
        }
    }

    fn fact_unchecked(&self, set: ElemSet) -> Fact<'_> {
        debug_assert!(self.is_fact_set(set));
        Fact { q: self, set }
    }

    /// The fact `1` = orthogonal of the garbage set.
    pub fn one_fact(&self) -> Fact<'_> {
        self.fact_unchecked(self.orth(self.garbage))
    }

    /// The least fact `0` = orthogonal of the carrier.
    pub fn zero_fact(&self) -> Fact<'_> {
        self.fact_unchecked(self.orth(self.carrier()))
    }

    /// The greatest fact = the full carrier.
    pub fn top_fact(&self) -> Fact<'_> {
        self.fact_unchecked(self.carrier())
    }

    /// The orthogonal of the unit singleton; always equals the garbage set
    /// in a structure with a neutral unit.
    pub fn z_fact(&self) -> Fact<'_> {
        self.fact_unchecked(self.orth(ElemSet::singleton(self.unit)))
    }

    /// Renders a set with element labels, e.g. `{e0, ep}`.
    pub fn format_set(&self, set: ElemSet) -> String {
        let mut out = String::from("{");
        for (k, i) in set.iter().enumerate() {
            if k > 0 {
                out.push_str(", ");
            }
            out.push_str(self.label(i));
        }
        out.push('}');
        out
    }
}

impl fmt::Display for QStructure {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        writeln!(
            f,
            "Q-structure, {} element(s), unit {}, garbage {}",
            self.size,
            self.label(self.unit),
            self.format_set(self.garbage)
        )?;
        let width = self
            .labels
            .iter()
            .map(|l| l.len())
            .max()
            .unwrap_or(1)
            .max(1);
        write!(f, "{:width$} |", ".")?;
        for y in 0..self.size {
            write!(f, " {:width$}", self.label(y))?;
        }
        writeln!(f)?;
        for x in 0..self.size {
            write!(f, "{:width$} |", self.label(x))?;
            for y in 0..self.size {
                write!(f, " {:width$}", self.label(self.dot(x, y)))?;
            }
            writeln!(f)?;
        }
        Ok(())
    }
}

/// A biorthogonally closed subset of a structure's carrier.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub struct Fact<'q> {
    q: &'q QStructure,
    set: ElemSet,
}

impl<'q> Fact<'q> {
    pub fn set(&self) -> ElemSet {
        self.set
    }

    pub fn structure(&self) -> &'q QStructure {
        self.q
    }

    pub fn contains(&self, i: usize) -> bool {
        self.set.contains(i)
    }

    /// A fact is valid when the unit belongs to it. The two equivalent
    /// characterizations (the fact `1` is included, the orthogonal sits
    /// inside garbage) are recomputed and must agree.
    pub fn is_valid(&self) -> bool {
        let by_unit = self.set.contains(self.q.unit());
        let by_one = self.q.one_fact().set().is_subset_of(self.set);
        let by_orth = self.q.orth(self.set).is_subset_of(self.q.garbage());
        assert!(
            by_unit == by_one && by_one == by_orth,
            "validity characterizations disagree on {:?}",
            self.set
        );
        by_unit
    }

    pub fn neg(&self) -> Fact<'q> {
        self.q.fact_unchecked(self.q.neg_set(self.set))
    }

    fn binary(
        &self,
        other: &Fact<'q>,
        op: impl Fn(&QStructure, ElemSet, ElemSet) -> ElemSet,
    ) -> Result<Fact<'q>, FactError> {
        if self.q != other.q {
            return Err(FactError::MixedStructures);
        }
        Ok(self.q.fact_unchecked(op(self.q, self.set, other.set)))
    }

    pub fn tensor(&self, other: &Fact<'q>) -> Result<Fact<'q>, FactError> {
        self.binary(other, QStructure::tensor_set)
    }

    pub fn par(&self, other: &Fact<'q>) -> Result<Fact<'q>, FactError> {
        self.binary(other, QStructure::par_set)
    }

    pub fn limp(&self, other: &Fact<'q>) -> Result<Fact<'q>, FactError> {
        self.binary(other, QStructure::limp_set)
    }

    pub fn with(&self, other: &Fact<'q>) -> Result<Fact<'q>, FactError> {
        self.binary(other, QStructure::with_set)
    }

    pub fn plus(&self, other: &Fact<'q>) -> Result<Fact<'q>, FactError> {
        self.binary(other, QStructure::plus_set)
    }
}

impl fmt::Display for Fact<'_> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.q.format_set(self.set))
    }
}
