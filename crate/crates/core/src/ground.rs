use std::fmt;

use serde::{Serialize, Serializer};

use crate::compression::is_compressed;
use crate::family::{bounded_family, is_hereditary, star_size_of};
use crate::{FamilyError, SetFamily};

/// A verification universe: `([n] choose <= r)` or an explicit hereditary,
/// compressed family. Both variants carry the materialised family.
#[derive(Clone, PartialEq, Eq)]
pub struct GroundSpec {
    kind: GroundKind,
    family: SetFamily,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum GroundKind {
    Bounded { n: u32, r: u32 },
    Explicit,
}

impl GroundSpec {
    pub fn bounded(n: u32, r: u32) -> Result<Self, FamilyError> {
        let family = bounded_family(n, r)?;
        Ok(GroundSpec {
            kind: GroundKind::Bounded { n, r },
            family,
        })
    }

    /// Validates that `family` is hereditary and compressed.
    pub fn explicit(family: SetFamily) -> Result<Self, FamilyError> {
        if !is_hereditary(&family) {
            return Err(FamilyError::NotHereditary);
        }
        if !is_compressed(&family) {
            return Err(FamilyError::NotCompressed);
        }
        Ok(GroundSpec {
            kind: GroundKind::Explicit,
            family,
        })
    }

    pub fn kind(&self) -> GroundKind {
        self.kind
    }

    pub fn family(&self) -> &SetFamily {
        &self.family
    }

    pub fn ground_n(&self) -> u32 {
        self.family.ground_n()
    }

    /// `|G(1)|`, zero when the ground is `[0]`.
    pub fn star_size(&self) -> u64 {
        star_size_of(&self.family)
    }
}

impl fmt::Debug for GroundSpec {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.kind {
            GroundKind::Bounded { n, r } => write!(f, "Bounded(n={n}, r={r})"),
            GroundKind::Explicit => write!(f, "Explicit({:?})", self.family),
        }
    }
}

impl Serialize for GroundSpec {
    fn serialize<S: Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        #[derive(Serialize)]
        #[serde(tag = "kind", rename_all = "snake_case")]
        enum Repr<'a> {
            Bounded { n: u32, r: u32 },
            Explicit { family: &'a SetFamily },
        }
        match self.kind {
            GroundKind::Bounded { n, r } => Repr::Bounded { n, r }.serialize(serializer),
            GroundKind::Explicit => Repr::Explicit {
                family: &self.family,
            }
            .serialize(serializer),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn bounded_requires_r_le_n() {
        assert!(GroundSpec::bounded(3, 4).is_err());
        let g = GroundSpec::bounded(4, 2).unwrap();
        assert_eq!(g.family().len(), 11);
        assert_eq!(g.star_size(), 4);
    }

    #[test]
    fn explicit_validates() {
        let not_her = SetFamily::from_lists(2, &[&[1, 2]]).unwrap();
        assert_eq!(GroundSpec::explicit(not_her), Err(FamilyError::NotHereditary));
        let not_comp = SetFamily::from_lists(2, &[&[], &[2]]).unwrap();
        assert_eq!(GroundSpec::explicit(not_comp), Err(FamilyError::NotCompressed));
        let ok = SetFamily::from_lists(2, &[&[], &[1]]).unwrap();
        assert_eq!(GroundSpec::explicit(ok).unwrap().star_size(), 1);
    }
}
