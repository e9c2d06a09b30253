use std::fmt;

use serde::Serialize;

use crate::FamilyError;

/// Largest ground size a [`SetWord`] can carry.
pub const MAX_GROUND: u32 = 63;

/// A subset of `[n] = {1, .., n}` stored as its characteristic vector.
///
/// Element `i` lives in bit `i - 1`. Bits at positions `>= n` are always clear.
#[derive(Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct SetWord {
    bits: u64,
    ground_n: u32,
}

impl SetWord {
    pub fn new(bits: u64, ground_n: u32) -> Result<Self, FamilyError> {
        check_ground(ground_n)?;
        if bits & !full_mask(ground_n) != 0 {
            let elem = 64 - bits.leading_zeros();
            return Err(FamilyError::ElementOutOfRange {
                element: elem,
                ground_n,
            });
        }
        Ok(SetWord { bits, ground_n })
    }

    pub fn empty(ground_n: u32) -> Result<Self, FamilyError> {
        Self::new(0, ground_n)
    }

    /// The whole ground set `[n]`.
    pub fn full(ground_n: u32) -> Result<Self, FamilyError> {
        check_ground(ground_n)?;
        Ok(SetWord {
            bits: full_mask(ground_n),
            ground_n,
        })
    }

    pub fn from_elements<I>(elements: I, ground_n: u32) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = u32>,
    {
        check_ground(ground_n)?;
        let mut bits = 0u64;
        for e in elements {
            if e == 0 || e > ground_n {
                return Err(FamilyError::ElementOutOfRange {
                    element: e,
                    ground_n,
                });
            }
            bits |= 1 << (e - 1);
        }
        Ok(SetWord { bits, ground_n })
    }

    /// Internal constructor for words already known to fit the ground.
    pub(crate) fn from_raw(bits: u64, ground_n: u32) -> Self {
        debug_assert!(bits & !full_mask(ground_n) == 0);
        SetWord { bits, ground_n }
    }

    #[inline]
    pub fn bits(self) -> u64 {
        self.bits
    }

    #[inline]
    pub fn ground_n(self) -> u32 {
        self.ground_n
    }

    #[inline]
    pub fn len(self) -> u32 {
        self.bits.count_ones()
    }

    #[inline]
    pub fn is_empty(self) -> bool {
        self.bits == 0
    }

    #[inline]
    pub fn contains(self, element: u32) -> bool {
        (1..=64).contains(&element) && self.bits & (1 << (element - 1)) != 0
    }

    #[inline]
    pub fn intersects(self, other: SetWord) -> bool {
        self.bits & other.bits != 0
    }

    pub fn is_subset_of(self, other: SetWord) -> bool {
        self.bits & !other.bits == 0
    }

    /// Elements in increasing order, 1-based.
    pub fn elements(self) -> impl Iterator<Item = u32> {
        let mut rest = self.bits;
        std::iter::from_fn(move || {
            if rest == 0 {
                None
            } else {
                let tz = rest.trailing_zeros();
                rest &= rest - 1;
                Some(tz + 1)
            }
        })
    }

    /// Sum of the elements; the per-set term of the compression potential.
    pub fn element_sum(self) -> u64 {
        self.elements().map(u64::from).sum()
    }

    /// Reinterpret on another ground. Fails if an element would fall outside it.
    pub fn with_ground(self, ground_n: u32) -> Result<Self, FamilyError> {
        Self::new(self.bits, ground_n)
    }

    pub fn insert(self, element: u32) -> Result<Self, FamilyError> {
        if element == 0 || element > self.ground_n {
            return Err(FamilyError::ElementOutOfRange {
                element,
                ground_n: self.ground_n,
            });
        }
        Ok(SetWord {
            bits: self.bits | 1 << (element - 1),
            ground_n: self.ground_n,
        })
    }

    pub fn remove(self, element: u32) -> Self {
        if element == 0 || element > 64 {
            return self;
        }
        SetWord {
            bits: self.bits & !(1 << (element - 1)),
            ground_n: self.ground_n,
        }
    }

    /// `[n] \ self`.
    pub fn complement(self) -> Self {
        SetWord {
            bits: !self.bits & full_mask(self.ground_n),
            ground_n: self.ground_n,
        }
    }
}

#[inline]
pub(crate) fn full_mask(ground_n: u32) -> u64 {
    if ground_n >= 64 {
        u64::MAX
    } else {
        (1u64 << ground_n) - 1
    }
}

pub(crate) fn check_ground(ground_n: u32) -> Result<(), FamilyError> {
    if ground_n > MAX_GROUND {
        Err(FamilyError::GroundTooLarge {
            ground_n,
            cap: MAX_GROUND,
        })
    } else {
        Ok(())
    }
}

impl fmt::Debug for SetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SetWord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.bits == 0 {
            return f.write_str("∅");
        }
        f.write_str("{")?;
        for (idx, e) in self.elements().enumerate() {
            if idx > 0 {
                f.write_str(",")?;
            }
            write!(f, "{e}")?;
        }
        f.write_str("}")
    }
}

/// Serialized as the sorted element list; the ground travels with the family.
impl Serialize for SetWord {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_seq(self.elements())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn elements_round_trip() {
        let w = SetWord::from_elements([3, 1, 5], 5).unwrap();
        assert_eq!(w.bits(), 0b10101);
        assert_eq!(w.elements().collect::<Vec<_>>(), vec![1, 3, 5]);
        assert_eq!(w.element_sum(), 9);
        assert_eq!(w.to_string(), "{1,3,5}");
        assert_eq!(SetWord::empty(3).unwrap().to_string(), "∅");
    }

    #[test]
    fn ground_cap_enforced() {
        assert!(SetWord::empty(63).is_ok());
        assert!(matches!(
            SetWord::empty(64),
            Err(FamilyError::GroundTooLarge { .. })
        ));
        assert!(SetWord::full(63).unwrap().len() == 63);
    }

    #[test]
    fn bits_beyond_ground_rejected() {
        assert!(SetWord::new(0b100, 2).is_err());
        assert!(SetWord::from_elements([0], 2).is_err());
        assert!(SetWord::from_elements([3], 2).is_err());
    }

    #[test]
    fn complement_stays_in_ground() {
        let w = SetWord::from_elements([2], 4).unwrap();
        assert_eq!(w.complement().elements().collect::<Vec<_>>(), vec![1, 3, 4]);
    }
}
