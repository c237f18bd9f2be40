use std::cmp::Ordering;
use std::collections::BTreeSet;
use std::fmt;

use serde::{Deserialize, Serialize};

/// Dense identifier of a ground atom within one [`crate::ground::GroundProgram`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct AtomId(pub u32);

impl AtomId {
    pub fn index(self) -> usize {
        self.0 as usize
    }
}

impl fmt::Display for AtomId {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "#{}", self.0)
    }
}

/// A finite set of ground atoms.
///
/// Interpretations are ordered canonically: the first atom id (smallest)
/// on which two sets differ decides, and the set containing it sorts first.
/// Enumeration that branches on the smallest undecided atom, trying `true`
/// before `false`, visits answer sets in exactly this order.
#[derive(Clone, Debug, Default, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct Interpretation {
    atoms: BTreeSet<AtomId>,
}

impl Interpretation {
    pub fn new() -> Self {
        Self::default()
    }

    pub fn contains(&self, a: AtomId) -> bool {
        self.atoms.contains(&a)
    }

    pub fn insert(&mut self, a: AtomId) -> bool {
        self.atoms.insert(a)
    }

    pub fn remove(&mut self, a: AtomId) -> bool {
        self.atoms.remove(&a)
    }

    pub fn len(&self) -> usize {
        self.atoms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.atoms.is_empty()
    }

    pub fn iter(&self) -> impl Iterator<Item = AtomId> + '_ {
        self.atoms.iter().copied()
    }

    pub fn is_subset(&self, other: &Interpretation) -> bool {
        self.atoms.is_subset(&other.atoms)
    }

    pub fn max_atom(&self) -> Option<AtomId> {
        self.atoms.last().copied()
    }

    /// Membership vector of length `n`.
    pub fn to_bits(&self, n: usize) -> Vec<bool> {
        let mut bits = vec![false; n];
        for a in &self.atoms {
            if a.index() < n {
                bits[a.index()] = true;
            }
        }
        bits
    }

    pub fn from_bits(bits: &[bool]) -> Self {
        bits.iter()
            .enumerate()
            .filter(|(_, &b)| b)
            .map(|(i, _)| AtomId(i as u32))
            .collect()
    }
}

impl FromIterator<AtomId> for Interpretation {
    fn from_iter<T: IntoIterator<Item = AtomId>>(iter: T) -> Self {
        Interpretation {
            atoms: iter.into_iter().collect(),
        }
    }
}

impl Ord for Interpretation {
    fn cmp(&self, other: &Self) -> Ordering {
        let mut a = self.atoms.iter();
        let mut b = other.atoms.iter();
        loop {
            match (a.next(), b.next()) {
                (None, None) => return Ordering::Equal,
                (None, Some(_)) => return Ordering::Greater,
                (Some(_), None) => return Ordering::Less,
                (Some(x), Some(y)) if x == y => continue,
                (Some(x), Some(y)) => return if x < y { Ordering::Less } else { Ordering::Greater },
            }
        }
    }
}

impl PartialOrd for Interpretation {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn set(ids: &[u32]) -> Interpretation {
        ids.iter().map(|&i| AtomId(i)).collect()
    }

    #[test]
    fn canonical_order_prefers_members() {
        assert!(set(&[0]) < set(&[1]));
        assert!(set(&[0, 1]) < set(&[0]));
        assert!(set(&[0, 1, 2]) < set(&[0, 1]));
        assert!(set(&[0, 2]) < set(&[1]));
        assert!(set(&[5]) < set(&[]));
        assert_eq!(set(&[1, 3]).cmp(&set(&[1, 3])), Ordering::Equal);
    }

    #[test]
    fn canonical_order_matches_true_first_bit_order() {
        // Compare against lexicographic order over bit strings with 1 < 0.
        for x in 0u32..32 {
            for y in 0u32..32 {
                let bits = |m: u32| (0..5).map(|i| m & (1 << i) == 0).collect::<Vec<bool>>();
                let a = set(&(0..5).filter(|i| x & (1 << i) != 0).collect::<Vec<_>>());
                let b = set(&(0..5).filter(|i| y & (1 << i) != 0).collect::<Vec<_>>());
                assert_eq!(a.cmp(&b), bits(x).cmp(&bits(y)), "{x} vs {y}");
            }
        }
    }

    #[test]
    fn bits_round_trip() {
        let i = set(&[0, 3, 4]);
        assert_eq!(Interpretation::from_bits(&i.to_bits(6)), i);
    }
}
