//! Subsets of a finite carrier, packed into a 64-bit mask.
//!
//! Everything downstream (orthogonals, facts, connectives) is set algebra
//! over carriers of at most [`MAX_CARRIER`] elements, so a plain bitmask is
//! the canonical representation: equality is structural and the natural
//! `Ord` on the mask is exactly "sorted by member bit-pattern".

use std::fmt;

/// Largest carrier size an [`ElemSet`] can index.
pub const MAX_CARRIER: usize = 64;

/// A subset of `{0, …, n-1}` for some carrier size `n <= 64`.
///
/// The set does not remember its carrier; operations that need the full
/// carrier (complement, "all elements") take the size as an argument or
/// live on the owning structure.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash, Default)]
pub struct ElemSet(u64);

impl ElemSet {
    pub const EMPTY: ElemSet = ElemSet(0);

    /// The full carrier `{0, …, n-1}`.
    pub fn full(n: usize) -> ElemSet {
        assert!(n <= MAX_CARRIER, "carrier too large for ElemSet");
        if n == MAX_CARRIER {
            ElemSet(u64::MAX)
        } else {
            ElemSet((1u64 << n) - 1)
        }
    }

    pub fn singleton(i: usize) -> ElemSet {
        assert!(i < MAX_CARRIER);
        ElemSet(1u64 << i)
    }

    pub fn from_indices<I: IntoIterator<Item = usize>>(iter: I) -> ElemSet {
        let mut s = ElemSet::EMPTY;
        for i in iter {
            s.insert(i);
        }
        s
    }

    pub fn contains(self, i: usize) -> bool {
        i < MAX_CARRIER && self.0 & (1u64 << i) != 0
    }

    pub fn insert(&mut self, i: usize) {
        assert!(i < MAX_CARRIER);
        self.0 |= 1u64 << i;
    }

    pub fn remove(&mut self, i: usize) {
        if i < MAX_CARRIER {
            self.0 &= !(1u64 << i);
        }
    }

    pub fn union(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 | other.0)
    }

    pub fn inter(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & other.0)
    }

    pub fn diff(self, other: ElemSet) -> ElemSet {
        ElemSet(self.0 & !other.0)
    }

    /// Complement within the carrier `{0, …, n-1}`.
    pub fn complement_in(self, n: usize) -> ElemSet {
        ElemSet::full(n).diff(self)
    }

    pub fn is_subset_of(self, other: ElemSet) -> bool {
        self.0 & !other.0 == 0
    }

    pub fn is_empty(self) -> bool {
        self.0 == 0
    }

    pub fn len(self) -> usize {
        self.0.count_ones() as usize
    }

    /// Member indices in increasing order.
    pub fn iter(self) -> impl Iterator<Item = usize> {
        let mut bits = self.0;
        std::iter::from_fn(move || {
            if bits == 0 {
                None
            } else {
                let i = bits.trailing_zeros() as usize;
                bits &= bits - 1;
                Some(i)
            }
        })
    }

    /// The raw mask; used only for deterministic ordering and hashing.
    pub fn mask(self) -> u64 {
        self.0
    }

    /// All subsets of the carrier `{0, …, n-1}` in mask order.
    pub fn all_subsets(n: usize) -> impl Iterator<Item = ElemSet> {
        assert!(n < MAX_CARRIER, "subset enumeration needs n < 64");
        (0..(1u64 << n)).map(ElemSet)
    }
}

impl fmt::Debug for ElemSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (k, i) in self.iter().enumerate() {
            if k > 0 {
                write!(f, ",")?;
            }
            write!(f, "{i}")?;
        }
        write!(f, "}}")
    }
}

impl FromIterator<usize> for ElemSet {
    fn from_iter<I: IntoIterator<Item = usize>>(iter: I) -> Self {
        ElemSet::from_indices(iter)
    }
}
