//! Exact linear algebra for subspaces of `Q^d`.
//!
//! The machinery is generic over any ordered field scalar (see [`Scalar`]);
//! the crate root fixes [`crate::Rational`] as the concrete instantiation,
//! which keeps every computation exact and every test a strict equality.
//! Subspaces are kept in reduced row-echelon form with unit pivots, so two
//! equal subspaces have identical field contents and equality is plain
//! structural comparison.
//!
//! Projection of one subspace onto another is computed basis-wise:
//! projection is linear, so the span of the projected basis vectors is the
//! projection of the whole span.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{Num, Signed};
use rand::Rng;
use thiserror::Error;

/// Scalars the subspace engine can work over: an ordered field. The order
/// requirement is what makes Gram matrices of independent vectors
/// invertible (no nonzero self-orthogonal vectors), so projections are
/// total.
pub trait Scalar: Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display {}

impl<T> Scalar for T where T: Num + Signed + Clone + PartialOrd + fmt::Debug + fmt::Display {}

#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum LinalgError {
    #[error("vector has dimension {got}, expected {expected}")]
    DimensionMismatch { expected: usize, got: usize },
}

/// A dense vector with exact scalar entries.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Vector<S: Scalar> {
    coords: Vec<S>,
}

impl<S: Scalar> Vector<S> {
    pub fn new(coords: Vec<S>) -> Vector<S> {
        Vector { coords }
    }

    pub fn zero(dim: usize) -> Vector<S> {
        Vector {
            coords: vec![S::zero(); dim],
        }
    }

    pub fn dim(&self) -> usize {
        self.coords.len()
    }

    pub fn coords(&self) -> &[S] {
        &self.coords
    }

    pub fn is_zero(&self) -> bool {
        self.coords.iter().all(|c| c.is_zero())
    }

    pub fn dot(&self, other: &Vector<S>) -> S {
        assert_eq!(self.dim(), other.dim(), "dot of mismatched dimensions");
        self.coords
            .iter()
            .zip(&other.coords)
            .fold(S::zero(), |acc, (a, b)| acc + a.clone() * b.clone())
    }

    pub fn scaled(&self, k: &S) -> Vector<S> {
        Vector {
            coords: self.coords.iter().map(|c| c.clone() * k.clone()).collect(),
        }
    }

    pub fn add(&self, other: &Vector<S>) -> Vector<S> {
        assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() + b.clone())
                .collect(),
        }
    }

    pub fn sub(&self, other: &Vector<S>) -> Vector<S> {
        assert_eq!(self.dim(), other.dim());
        Vector {
            coords: self
                .coords
                .iter()
                .zip(&other.coords)
                .map(|(a, b)| a.clone() - b.clone())
                .collect(),
        }
    }

    /// Projection of this vector onto a subspace, exactly. The residual
    /// `self - result` is orthogonal to the subspace.
    pub fn project_onto(&self, b: &Subspace<S>) -> Vector<S> {
        assert_eq!(self.dim(), b.ambient_dim(), "projection dimension mismatch");
        let r = b.rank();
        if r == 0 {
            return Vector::zero(self.dim());
        }
        // solve the Gram system G c = <b_i, v>
        let gram: Vec<Vec<S>> = (0..r)
            .map(|i| (0..r).map(|j| b.basis[i].dot(&b.basis[j])).collect())
            .collect();
        let rhs: Vec<S> = (0..r).map(|i| b.basis[i].dot(self)).collect();
        let coeffs = solve(gram, rhs)
            .expect("Gram matrix of an independent basis over an ordered field is invertible");
        let mut out = Vector::zero(self.dim());
        for (c, row) in coeffs.iter().zip(&b.basis) {
            out = out.add(&row.scaled(c));
        }
        out
    }
}

impl<S: Scalar> fmt::Display for Vector<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        for (k, c) in self.coords.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{c}")?;
        }
        Ok(())
    }
}

/// A linear subspace of the ambient space, held as a reduced row-echelon
/// basis (possibly empty for the zero subspace). The representation is
/// canonical: equal subspaces compare equal field by field.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Subspace<S: Scalar> {
    ambient: usize,
    basis: Vec<Vector<S>>,
}

impl<S: Scalar> Subspace<S> {
    /// The zero subspace `{0}`.
    pub fn zero(ambient: usize) -> Subspace<S> {
        Subspace {
            ambient,
            basis: Vec::new(),
        }
    }

    /// The whole ambient space.
    pub fn full(ambient: usize) -> Subspace<S> {
        let basis = (0..ambient)
            .map(|i| {
                let mut coords = vec![S::zero(); ambient];
                coords[i] = S::one();
                Vector::new(coords)
            })
            .collect();
        Subspace { ambient, basis }
    }

    /// Canonical subspace spanned by the given vectors; zero vectors and
    /// dependent rows are eliminated by the row reduction.
    pub fn span(ambient: usize, vectors: &[Vector<S>]) -> Result<Subspace<S>, LinalgError> {
        for v in vectors {
            if v.dim() != ambient {
                return Err(LinalgError::DimensionMismatch {
                    expected: ambient,
                    got: v.dim(),
                });
            }
        }
        let rows: Vec<Vec<S>> = vectors.iter().map(|v| v.coords.clone()).collect();
        let reduced = rref(rows, ambient);
        Ok(Subspace {
            ambient,
            basis: reduced.into_iter().map(Vector::new).collect(),
        })
    }

    pub fn ambient_dim(&self) -> usize {
        self.ambient
    }

    pub fn rank(&self) -> usize {
        self.basis.len()
    }

    pub fn basis(&self) -> &[Vector<S>] {
        &self.basis
    }

    pub fn is_zero(&self) -> bool {
        self.basis.is_empty()
    }

    pub fn is_full(&self) -> bool {
        self.rank() == self.ambient
    }

    pub fn contains(&self, v: &Vector<S>) -> bool {
        assert_eq!(v.dim(), self.ambient, "containment dimension mismatch");
        // reduce v against the echelon basis and check for a zero residual
        let mut rest = v.clone();
        for row in &self.basis {
            let lead = row
                .coords
                .iter()
                .position(|c| !c.is_zero())
                .expect("basis rows are nonzero");
            if !rest.coords[lead].is_zero() {
                let k = rest.coords[lead].clone();
                rest = rest.sub(&row.scaled(&k));
            }
        }
        rest.is_zero()
    }

    /// The projection of this subspace onto `b`: the span of the
    /// projections of the basis vectors. This is the composition
    /// operation of the ground model; it is neither commutative nor
    /// associative. The result always lies inside `b`.
    pub fn project_onto(&self, b: &Subspace<S>) -> Subspace<S> {
        assert_eq!(self.ambient, b.ambient, "projection dimension mismatch");
        let projected: Vec<Vector<S>> = self
            .basis
            .iter()
            .map(|v| v.project_onto(b))
            .collect();
        Subspace::span(self.ambient, &projected).expect("projections share the ambient dimension")
    }

    /// The orthogonal complement: the null space of the basis matrix.
    /// `rank(self) + rank(result) = ambient`, and taking the complement
    /// twice returns the original subspace.
    pub fn ortho_complement(&self) -> Subspace<S> {
        if self.basis.is_empty() {
            return Subspace::full(self.ambient);
        }
        // the basis is already in reduced row-echelon form
        let pivots: Vec<usize> = self
            .basis
            .iter()
            .map(|row| {
                row.coords
                    .iter()
                    .position(|c| !c.is_zero())
                    .expect("basis rows are nonzero")
            })
            .collect();
        let mut nullers = Vec::new();
        for free in 0..self.ambient {
            if pivots.contains(&free) {
                continue;
            }
            let mut coords = vec![S::zero(); self.ambient];
            coords[free] = S::one();
            for (row, &p) in self.basis.iter().zip(&pivots) {
                coords[p] = S::zero() - row.coords[free].clone();
            }
            nullers.push(Vector::new(coords));
        }
        Subspace::span(self.ambient, &nullers).expect("null vectors share the ambient dimension")
    }

    /// Smallest subspace containing both arguments.
    pub fn sum(&self, other: &Subspace<S>) -> Subspace<S> {
        assert_eq!(self.ambient, other.ambient, "sum dimension mismatch");
        let mut rows = self.basis.clone();
        rows.extend(other.basis.iter().cloned());
        Subspace::span(self.ambient, &rows).expect("summands share the ambient dimension")
    }

    /// Intersection, via complements of the sum of complements.
    pub fn meet(&self, other: &Subspace<S>) -> Subspace<S> {
        self.ortho_complement()
            .sum(&other.ortho_complement())
            .ortho_complement()
    }

    /// Every basis pair has zero inner product; equivalently the
    /// projection of one argument onto the other is the zero subspace.
    pub fn is_orthogonal_to(&self, other: &Subspace<S>) -> bool {
        assert_eq!(self.ambient, other.ambient, "orthogonality dimension mismatch");
        self.basis
            .iter()
            .all(|u| other.basis.iter().all(|v| u.dot(v).is_zero()))
    }
}

impl<S: Scalar> fmt::Display for Subspace<S> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.basis.is_empty() {
            return write!(f, "span[] (zero subspace of dim {})", self.ambient);
        }
        write!(f, "span[")?;
        for (k, row) in self.basis.iter().enumerate() {
            if k > 0 {
                write!(f, "; ")?;
            }
            write!(f, "{row}")?;
        }
        write!(f, "]")
    }
}

/// Reduced row-echelon form with unit pivots; zero rows dropped.
fn rref<S: Scalar>(mut rows: Vec<Vec<S>>, width: usize) -> Vec<Vec<S>> {
    let mut pivot_row = 0;
    for col in 0..width {
        let Some(sel) = (pivot_row..rows.len()).find(|&r| !rows[r][col].is_zero()) else {
            continue;
        };
        rows.swap(pivot_row, sel);
        let inv = rows[pivot_row][col].clone();
        for c in col..width {
            rows[pivot_row][c] = rows[pivot_row][c].clone() / inv.clone();
        }
        for r in 0..rows.len() {
            if r != pivot_row && !rows[r][col].is_zero() {
                let factor = rows[r][col].clone();
                for c in col..width {
                    let delta = factor.clone() * rows[pivot_row][c].clone();
                    rows[r][c] = rows[r][c].clone() - delta;
                }
            }
        }
        pivot_row += 1;
        if pivot_row == rows.len() {
            break;
        }
    }
    rows.truncate(pivot_row);
    rows
}

/// Exact Gaussian elimination for a square system; `None` when singular.
fn solve<S: Scalar>(mut a: Vec<Vec<S>>, mut b: Vec<S>) -> Option<Vec<S>> {
    let n = b.len();
    for col in 0..n {
        let sel = (col..n).find(|&r| !a[r][col].is_zero())?;
        a.swap(col, sel);
        b.swap(col, sel);
        let inv = a[col][col].clone();
        for c in col..n {
            a[col][c] = a[col][c].clone() / inv.clone();
        }
        b[col] = b[col].clone() / inv;
        for r in 0..n {
            if r != col && !a[r][col].is_zero() {
                let factor = a[r][col].clone();
                for c in col..n {
                    let delta = factor.clone() * a[col][c].clone();
                    a[r][c] = a[r][c].clone() - delta;
                }
                let delta = factor * b[col].clone();
                b[r] = b[r].clone() - delta;
            }
        }
    }
    Some(b)
}

/// Parse errors for the text form of rational vectors.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum VectorParseError {
    #[error("empty vector text")]
    Empty,
    #[error("bad rational '{0}'")]
    BadRational(String),
}

/// Parses a comma-separated rational vector such as `1/2,-3,0`.
pub fn parse_vector(text: &str) -> Result<Vector<BigRational>, VectorParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Err(VectorParseError::Empty);
    }
    let mut coords = Vec::new();
    for part in text.split(',') {
        let part = part.trim();
        let r: BigRational = part
            .parse()
            .map_err(|_| VectorParseError::BadRational(part.to_string()))?;
        coords.push(r);
    }
    Ok(Vector::new(coords))
}

/// Parses a semicolon-separated list of vectors such as `1,0;0,1`.
pub fn parse_vector_list(text: &str) -> Result<Vec<Vector<BigRational>>, VectorParseError> {
    let text = text.trim();
    if text.is_empty() {
        return Ok(Vec::new());
    }
    text.split(';').map(parse_vector).collect()
}

/// Convenience constructor for small rational values.
pub fn ratio(num: i64, den: i64) -> BigRational {
    BigRational::new(BigInt::from(num), BigInt::from(den))
}

/// Seeded random subspace of `Q^dim`: rank uniform in `0..=dim`, entries
/// with numerators in `-9..=9` and denominators in `1..=9`, redrawn until
/// the drawn rows are independent. Small entries keep the Gram solves
/// cheap.
pub fn random_subspace<R: Rng>(dim: usize, rng: &mut R) -> Subspace<BigRational> {
    let rank = rng.gen_range(0..=dim);
    if rank == 0 {
        return Subspace::zero(dim);
    }
    loop {
        let rows: Vec<Vector<BigRational>> = (0..rank)
            .map(|_| {
                Vector::new(
                    (0..dim)
                        .map(|_| ratio(rng.gen_range(-9..=9), rng.gen_range(1..=9)))
                        .collect(),
                )
            })
            .collect();
        let candidate = Subspace::span(dim, &rows).expect("rows drawn at the ambient dimension");
        if candidate.rank() == rank {
            return candidate;
        }
    }
}
