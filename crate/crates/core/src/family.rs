//! Set families over `[n]` and the basic predicates on them.
//!
//! A [`SetFamily`] is a sorted, deduplicated list of characteristic words that
//! share one ground size. Sorting by numeric value gives every family a single
//! canonical form, so structural equality is family equality.

use std::collections::HashSet;
use std::fmt;

use serde::de::{self, Deserializer, MapAccess, Visitor};
use serde::ser::{SerializeStruct, Serializer};
use serde::{Deserialize, Serialize};

use crate::word::{check_ground, full_mask};
use crate::{FamilyError, SetWord};

/// Ground-size cap for operations that enumerate subsets of `[n]`.
pub const ENUMERATION_CAP: u32 = 20;

#[derive(Clone, PartialEq, Eq, Hash)]
pub struct SetFamily {
    ground_n: u32,
    members: Vec<u64>,
}

impl SetFamily {
    pub fn empty(ground_n: u32) -> Result<Self, FamilyError> {
        check_ground(ground_n)?;
        Ok(SetFamily {
            ground_n,
            members: Vec::new(),
        })
    }

    /// Builds a family from raw words, sorting and dropping duplicates.
    pub fn from_words<I>(ground_n: u32, words: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = u64>,
    {
        check_ground(ground_n)?;
        let mask = full_mask(ground_n);
        let mut members = Vec::new();
        for w in words {
            if w & !mask != 0 {
                return Err(FamilyError::ElementOutOfRange {
                    element: 64 - w.leading_zeros(),
                    ground_n,
                });
            }
            members.push(w);
        }
        members.sort_unstable();
        members.dedup();
        Ok(SetFamily { ground_n, members })
    }

    pub fn from_sets<I>(ground_n: u32, sets: I) -> Result<Self, FamilyError>
    where
        I: IntoIterator<Item = SetWord>,
    {
        Self::from_words(ground_n, sets.into_iter().map(SetWord::bits))
    }

    /// Convenience constructor from element lists, e.g. `&[&[1, 2], &[3]]`.
    pub fn from_lists(ground_n: u32, lists: &[&[u32]]) -> Result<Self, FamilyError> {
        let sets = lists
            .iter()
            .map(|l| SetWord::from_elements(l.iter().copied(), ground_n))
            .collect::<Result<Vec<_>, _>>()?;
        Self::from_sets(ground_n, sets)
    }

    /// Caller guarantees sorted, deduplicated words inside the ground.
    pub(crate) fn from_sorted_unchecked(ground_n: u32, members: Vec<u64>) -> Self {
        debug_assert!(members.windows(2).all(|w| w[0] < w[1]));
        debug_assert!(members.iter().all(|&w| w & !full_mask(ground_n) == 0));
        SetFamily { ground_n, members }
    }

    pub(crate) fn from_unsorted_unchecked(ground_n: u32, mut members: Vec<u64>) -> Self {
        members.sort_unstable();
        members.dedup();
        SetFamily::from_sorted_unchecked(ground_n, members)
    }

    /// `2^[n]`.
    pub fn power_set(n: u32) -> Result<Self, FamilyError> {
        bounded_family(n, n)
    }

    #[inline]
    pub fn ground_n(&self) -> u32 {
        self.ground_n
    }

    #[inline]
    pub fn len(&self) -> usize {
        self.members.len()
    }

    #[inline]
    pub fn is_empty(&self) -> bool {
        self.members.is_empty()
    }

    /// Raw member words in canonical order.
    #[inline]
    pub fn words(&self) -> &[u64] {
        &self.members
    }

    pub fn iter(&self) -> impl ExactSizeIterator<Item = SetWord> + '_ {
        let n = self.ground_n;
        self.members.iter().map(move |&w| SetWord::from_raw(w, n))
    }

    pub fn contains_word(&self, bits: u64) -> bool {
        self.members.binary_search(&bits).is_ok()
    }

    pub fn contains(&self, set: SetWord) -> bool {
        self.contains_word(set.bits())
    }

    pub fn is_subfamily_of(&self, other: &SetFamily) -> bool {
        self.members.iter().all(|&w| other.contains_word(w))
    }

    /// Same members on a different ground. Fails if a member does not fit.
    pub fn with_ground(&self, ground_n: u32) -> Result<Self, FamilyError> {
        SetFamily::from_words(ground_n, self.members.iter().copied())
    }

    pub fn filter<P>(&self, mut keep: P) -> SetFamily
    where
        P: FnMut(SetWord) -> bool,
    {
        let n = self.ground_n;
        let members = self
            .members
            .iter()
            .copied()
            .filter(|&w| keep(SetWord::from_raw(w, n)))
            .collect();
        SetFamily::from_sorted_unchecked(n, members)
    }

    pub fn union(&self, other: &SetFamily) -> Result<SetFamily, FamilyError> {
        let n = self.ground_n.max(other.ground_n);
        SetFamily::from_words(n, self.members.iter().chain(&other.members).copied())
    }

    pub fn difference(&self, other: &SetFamily) -> SetFamily {
        self.filter(|s| !other.contains_word(s.bits()))
    }

    /// Members containing `x`, without validating `x` against the ground.
    pub(crate) fn star_unchecked(&self, x: u32) -> SetFamily {
        let bit = 1u64 << (x - 1);
        let members = self.members.iter().copied().filter(|w| w & bit != 0).collect();
        SetFamily::from_sorted_unchecked(self.ground_n, members)
    }
}

/// `([n] choose <= r)`: all subsets of `[n]` with at most `r` elements.
pub fn bounded_family(n: u32, r: u32) -> Result<SetFamily, FamilyError> {
    if r > n || n > ENUMERATION_CAP {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "bounded family needs 0 <= r <= n <= {ENUMERATION_CAP}, got n={n}, r={r}"
        )));
    }
    let members = (0..1u64 << n).filter(|w| w.count_ones() <= r).collect();
    Ok(SetFamily::from_sorted_unchecked(n, members))
}

/// `U(F)`, the union of all members.
pub fn union_support(f: &SetFamily) -> SetWord {
    let bits = f.members.iter().fold(0, |acc, w| acc | w);
    SetWord::from_raw(bits, f.ground_n)
}

/// The star `F(x)`: members of `f` containing `x`.
pub fn star(f: &SetFamily, x: u32) -> Result<SetFamily, FamilyError> {
    if x == 0 || x > f.ground_n {
        return Err(FamilyError::ElementOutOfRange {
            element: x,
            ground_n: f.ground_n,
        });
    }
    Ok(f.star_unchecked(x))
}

/// `|F(1)|`, taken as zero over the empty ground.
pub fn star_size_of(f: &SetFamily) -> u64 {
    if f.ground_n() == 0 {
        0
    } else {
        f.words().iter().filter(|&&w| w & 1 == 1).count() as u64
    }
}

/// `sum_{j=0}^{r} C(n-1, j-1)`, the size of the star at 1 of `([n] choose <= r)`.
///
/// The `j = 0` term is `C(n-1, -1) = 0`. For `n = 0` the sum is empty.
pub fn star_size_bound(n: u32, r: u32) -> u64 {
    if n == 0 {
        return 0;
    }
    (1..=r.min(n)).map(|j| binomial(n - 1, j - 1)).sum()
}

pub fn binomial(n: u32, k: u32) -> u64 {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * u128::from(n - i) / u128::from(i + 1);
    }
    acc as u64
}

/// Every two members intersect, a member with itself included.
///
/// So a nonempty family holding `∅` is never intersecting.
pub fn is_intersecting(f: &SetFamily) -> bool {
    let ws = &f.members;
    for (idx, &a) in ws.iter().enumerate() {
        if a == 0 {
            return false;
        }
        if ws[idx + 1..].iter().any(|&b| a & b == 0) {
            return false;
        }
    }
    true
}

/// Compares raw characteristic vectors, so element `i` means the same integer
/// on both sides even when the ground sizes differ.
pub fn are_cross_intersecting(a: &SetFamily, b: &SetFamily) -> bool {
    words_cross_intersect(&a.members, &b.members)
}

pub(crate) fn words_cross_intersect(a: &[u64], b: &[u64]) -> bool {
    a.iter().all(|&x| b.iter().all(|&y| x & y != 0))
}

pub fn are_cross_intersecting_k(fams: &[SetFamily]) -> Result<bool, FamilyError> {
    if fams.len() < 2 {
        return Err(FamilyError::FewerThanTwoFamilies(fams.len()));
    }
    for i in 0..fams.len() {
        for j in i + 1..fams.len() {
            if !are_cross_intersecting(&fams[i], &fams[j]) {
                return Ok(false);
            }
        }
    }
    Ok(true)
}

/// Closed under taking subsets. Checking one-element deletions suffices.
pub fn is_hereditary(f: &SetFamily) -> bool {
    f.members.iter().all(|&h| {
        let mut rest = h;
        while rest != 0 {
            let bit = rest & rest.wrapping_neg();
            rest ^= bit;
            if !f.contains_word(h ^ bit) {
                return false;
            }
        }
        true
    })
}

/// The smallest hereditary family containing `f`.
///
/// Enumerates subsets of each member, so members are capped at
/// [`ENUMERATION_CAP`] elements.
pub fn downward_closure(f: &SetFamily) -> Result<SetFamily, FamilyError> {
    if let Some(big) = f.members.iter().find(|w| w.count_ones() > ENUMERATION_CAP) {
        return Err(FamilyError::ParameterOutOfRange(format!(
            "member with {} elements exceeds enumeration cap {ENUMERATION_CAP}",
            big.count_ones()
        )));
    }
    let mut seen: HashSet<u64> = HashSet::new();
    // Bases first: a subset of a covered word is already covered.
    for w in bases(f).members {
        if seen.contains(&w) {
            continue;
        }
        let mut sub = w;
        loop {
            seen.insert(sub);
            if sub == 0 {
                break;
            }
            sub = (sub - 1) & w;
        }
    }
    Ok(SetFamily::from_unsorted_unchecked(
        f.ground_n,
        seen.into_iter().collect(),
    ))
}

/// Inclusion-maximal members.
pub fn bases(f: &SetFamily) -> SetFamily {
    let ws = &f.members;
    let n = f.ground_n;
    let mask = full_mask(n);
    let members = ws
        .iter()
        .copied()
        .filter(|&w| {
            // cheap rejection through one-element extensions
            let mut free = !w & mask;
            while free != 0 {
                let bit = free & free.wrapping_neg();
                free ^= bit;
                if f.contains_word(w | bit) {
                    return false;
                }
            }
            // proper supersets are numerically larger
            let start = ws.partition_point(|&x| x <= w);
            !ws[start..].iter().any(|&x| x & w == w)
        })
        .collect();
    SetFamily::from_sorted_unchecked(n, members)
}

/// No member is a proper subset of another.
pub fn is_antichain(f: &SetFamily) -> bool {
    bases(f).len() == f.len()
}

impl fmt::Debug for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[n={}]", self.ground_n)?;
        fmt::Display::fmt(self, f)
    }
}

impl fmt::Display for SetFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str("{")?;
        for (idx, s) in self.iter().enumerate() {
            if idx > 0 {
                f.write_str(", ")?;
            }
            write!(f, "{s}")?;
        }
        f.write_str("}")
    }
}

impl Serialize for SetFamily {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        struct Members<'a>(&'a SetFamily);
        impl Serialize for Members<'_> {
            fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
                serializer.collect_seq(self.0.iter())
            }
        }
        let mut st = serializer.serialize_struct("SetFamily", 2)?;
        st.serialize_field("n", &self.ground_n)?;
        st.serialize_field("members", &Members(self))?;
        st.end()
    }
}

impl<'de> Deserialize<'de> for SetFamily {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        struct FamilyVisitor;

        impl<'de> Visitor<'de> for FamilyVisitor {
            type Value = SetFamily;

            fn expecting(&self, f: &mut fmt::Formatter) -> fmt::Result {
                f.write_str("a set family object with `n` and `members`")
            }

            fn visit_map<M: MapAccess<'de>>(self, mut map: M) -> Result<SetFamily, M::Error> {
                let mut n: Option<u32> = None;
                let mut lists: Option<Vec<Vec<u32>>> = None;
                while let Some(key) = map.next_key::<String>()? {
                    match key.as_str() {
                        "n" => n = Some(map.next_value()?),
                        "members" => lists = Some(map.next_value()?),
                        _ => {
                            map.next_value::<de::IgnoredAny>()?;
                        }
                    }
                }
                let n = n.ok_or_else(|| de::Error::missing_field("n"))?;
                let lists = lists.ok_or_else(|| de::Error::missing_field("members"))?;
                let sets = lists
                    .into_iter()
                    .map(|l| SetWord::from_elements(l, n))
                    .collect::<Result<Vec<_>, _>>()
                    .map_err(de::Error::custom)?;
                let count = sets.len();
                let fam = SetFamily::from_sets(n, sets).map_err(de::Error::custom)?;
                if fam.len() != count {
                    return Err(de::Error::custom("duplicate member in family"));
                }
                Ok(fam)
            }
        }

        deserializer.deserialize_struct("SetFamily", &["n", "members"], FamilyVisitor)
    }
}
