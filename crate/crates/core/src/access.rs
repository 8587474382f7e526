//! Monotone access structures over parties 1..=n.
//!
//! A structure is a disjoint pair of collections: an increasing family of
//! authorized sets and a decreasing family of forbidden sets. Both are
//! stored as their antichain generators (minimal authorized sets, maximal
//! forbidden sets); classification of an arbitrary subset walks those
//! antichains. Subsets in between belong to neither family, which is what
//! makes the sharing schemes built on top non-perfect.
//!
//! Party sets are u64 bitmasks, so at most 64 parties. External
//! representations are 1-based sorted lists; bit i-1 stands for party i.

use std::fmt;

use serde::{Deserialize, Serialize};

use crate::error::Error;
use crate::subsets;
use crate::Rational;

/// Subset of parties 1..=n as a bitmask (bit i-1 = party i).
#[derive(Debug, Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct PartySet {
    mask: u64,
}

impl PartySet {
    /// The empty set.
    pub const EMPTY: PartySet = PartySet { mask: 0 };

    /// Builds from a strictly increasing 1-based list, checked against n.
    pub fn from_indices(indices: &[usize], n: usize) -> Result<Self, Error> {
        check_party_count(n)?;
        let mut mask = 0u64;
        let mut prev = 0usize;
        for &p in indices {
            if p == 0 || p > n {
                return Err(Error::PartyOutOfRange { party: p, n });
            }
            if p <= prev {
                return Err(Error::MalformedPartySet { set: format!("{indices:?}") });
            }
            prev = p;
            mask |= 1 << (p - 1);
        }
        Ok(PartySet { mask })
    }

    /// Builds from a raw bitmask; caller guarantees bits above n are clear.
    pub fn from_mask(mask: u64) -> Self {
        PartySet { mask }
    }

    /// Every party in 1..=n.
    pub fn full(n: usize) -> Result<Self, Error> {
        check_party_count(n)?;
        Ok(PartySet { mask: if n == 64 { u64::MAX } else { (1 << n) - 1 } })
    }

    pub fn mask(&self) -> u64 {
        self.mask
    }

    pub fn len(&self) -> usize {
        self.mask.count_ones() as usize
    }

    pub fn is_empty(&self) -> bool {
        self.mask == 0
    }

    pub fn contains(&self, party: usize) -> bool {
        (1..=64).contains(&party) && self.mask >> (party - 1) & 1 == 1
    }

    pub fn is_subset_of(&self, other: &PartySet) -> bool {
        self.mask & !other.mask == 0
    }

    /// Size of the set difference self minus other.
    pub fn difference_len(&self, other: &PartySet) -> usize {
        (self.mask & !other.mask).count_ones() as usize
    }

    /// 1-based member list, ascending.
    pub fn to_indices(&self) -> Vec<usize> {
        subsets::mask_indices(self.mask).into_iter().map(|i| i + 1).collect()
    }

    /// True when every member is within 1..=n.
    pub fn fits(&self, n: usize) -> bool {
        n <= 64 && (n == 64 || self.mask >> n == 0)
    }
}

impl fmt::Display for PartySet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (i, p) in self.to_indices().iter().enumerate() {
            if i > 0 {
                write!(f, ",")?;
            }
            write!(f, "{p}")?;
        }
        write!(f, "}}")
    }
}

impl Serialize for PartySet {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        self.to_indices().serialize(serializer)
    }
}

fn check_party_count(n: usize) -> Result<(), Error> {
    if n > 64 {
        return Err(Error::TooManyParties { n });
    }
    Ok(())
}

/// Where a subset falls relative to the two collections.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Serialize)]
#[serde(rename_all = "snake_case")]
pub enum Classification {
    Authorized,
    Forbidden,
    Neither,
}

/// Disjoint monotone collections, stored by their antichain generators.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
#[serde(try_from = "AccessJson", into = "AccessJson")]
pub struct AccessStructure {
    n: usize,
    min_authorized: Vec<PartySet>,
    max_forbidden: Vec<PartySet>,
}

/// Wire form: 1-based sorted party lists.
/// `{"n":3,"min_authorized":[[2,3]],"max_forbidden":[[1,2],[3]]}`
#[derive(Serialize, Deserialize)]
struct AccessJson {
    n: usize,
    min_authorized: Vec<Vec<usize>>,
    max_forbidden: Vec<Vec<usize>>,
}

impl TryFrom<AccessJson> for AccessStructure {
    type Error = Error;

    fn try_from(json: AccessJson) -> Result<Self, Error> {
        let parse = |lists: &[Vec<usize>]| -> Result<Vec<PartySet>, Error> {
            lists.iter().map(|l| PartySet::from_indices(l, json.n)).collect()
        };
        AccessStructure::new(json.n, parse(&json.min_authorized)?, parse(&json.max_forbidden)?)
    }
}

impl From<AccessStructure> for AccessJson {
    fn from(a: AccessStructure) -> AccessJson {
        AccessJson {
            n: a.n,
            min_authorized: a.min_authorized.iter().map(PartySet::to_indices).collect(),
            max_forbidden: a.max_forbidden.iter().map(PartySet::to_indices).collect(),
        }
    }
}

impl AccessStructure {
    /// Builds a structure from generator sets. Inputs are pruned to
    /// antichains (redundant dominated generators are dropped), then the
    /// disjointness invariant is checked: no authorized generator may sit
    /// inside a forbidden generator, otherwise the two monotone families
    /// would share a set.
    pub fn new(
        n: usize,
        min_authorized: Vec<PartySet>,
        max_forbidden: Vec<PartySet>,
    ) -> Result<Self, Error> {
        check_party_count(n)?;
        for s in min_authorized.iter().chain(&max_forbidden) {
            if !s.fits(n) {
                let party = *s.to_indices().last().unwrap_or(&0);
                return Err(Error::PartyOutOfRange { party, n });
            }
        }
        let min_authorized = prune_to_minimal(min_authorized);
        let max_forbidden = prune_to_maximal(max_forbidden);
        for a in &min_authorized {
            for b in &max_forbidden {
                if a.is_subset_of(b) {
                    return Err(Error::CollectionsIntersect {
                        authorized: a.to_string(),
                        forbidden: b.to_string(),
                    });
                }
            }
        }
        Ok(AccessStructure { n, min_authorized, max_forbidden })
    }

    /// Threshold structure: authorized = sets of size >= r, forbidden =
    /// sets of size <= t. Requires t < r <= n so the families stay disjoint.
    pub fn threshold(n: usize, r: usize, t: usize) -> Result<Self, Error> {
        check_party_count(n)?;
        if r > n || t >= r {
            return Err(Error::BadThreshold { r, t, n });
        }
        let min_authorized =
            subsets::k_subset_masks(n, r).into_iter().map(PartySet::from_mask).collect();
        let max_forbidden =
            subsets::k_subset_masks(n, t).into_iter().map(PartySet::from_mask).collect();
        Ok(AccessStructure { n, min_authorized, max_forbidden })
    }

    pub fn parties(&self) -> usize {
        self.n
    }

    pub fn min_authorized(&self) -> &[PartySet] {
        &self.min_authorized
    }

    pub fn max_forbidden(&self) -> &[PartySet] {
        &self.max_forbidden
    }

    /// Classifies a subset against the two families.
    pub fn classify(&self, s: &PartySet) -> Result<Classification, Error> {
        if !s.fits(self.n) {
            let party = *s.to_indices().last().unwrap_or(&0);
            return Err(Error::PartyOutOfRange { party, n: self.n });
        }
        let authorized = self.min_authorized.iter().any(|a| a.is_subset_of(s));
        let forbidden = self.max_forbidden.iter().any(|b| s.is_subset_of(b));
        debug_assert!(
            !(authorized && forbidden),
            "disjointness invariant violated for {s}"
        );
        Ok(if authorized {
            Classification::Authorized
        } else if forbidden {
            Classification::Forbidden
        } else {
            Classification::Neither
        })
    }

    /// Minimum of |A minus B| over generator pairs. Monotonicity puts the
    /// minimum on the antichains, so this equals the minimum over the full
    /// families.
    pub fn delta(&self) -> Result<usize, Error> {
        if self.min_authorized.is_empty() {
            return Err(Error::EmptyCollection { which: "authorized" });
        }
        if self.max_forbidden.is_empty() {
            return Err(Error::EmptyCollection { which: "forbidden" });
        }
        Ok(self
            .min_authorized
            .iter()
            .flat_map(|a| self.max_forbidden.iter().map(move |b| a.difference_len(b)))
            .min()
            .expect("both collections nonempty"))
    }

    /// Sharing-rate ceiling delta / n.
    pub fn rate_bound(&self) -> Result<Rational, Error> {
        Ok(Rational::new(self.delta()? as u64, self.n as u64))
    }

    /// Full expansions of both families, ascending by bitmask. Capped at
    /// 20 parties to keep the 2^n walk desk-scale.
    pub fn enumerate_all(&self) -> Result<(Vec<PartySet>, Vec<PartySet>), Error> {
        const CAP: usize = 20;
        if self.n > CAP {
            return Err(Error::EnumerationTooLarge { n: self.n, cap: CAP });
        }
        let mut authorized = Vec::new();
        let mut forbidden = Vec::new();
        for mask in subsets::all_masks(self.n) {
            let s = PartySet::from_mask(mask);
            match self.classify(&s)? {
                Classification::Authorized => authorized.push(s),
                Classification::Forbidden => forbidden.push(s),
                Classification::Neither => {}
            }
        }
        Ok((authorized, forbidden))
    }
}

fn prune_to_minimal(mut sets: Vec<PartySet>) -> Vec<PartySet> {
    sets.sort_unstable();
    sets.dedup();
    let keep: Vec<PartySet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|other| *other != **s && other.is_subset_of(s)))
        .copied()
        .collect();
    keep
}

fn prune_to_maximal(mut sets: Vec<PartySet>) -> Vec<PartySet> {
    sets.sort_unstable();
    sets.dedup();
    let keep: Vec<PartySet> = sets
        .iter()
        .filter(|s| !sets.iter().any(|other| *other != **s && s.is_subset_of(other)))
        .copied()
        .collect();
    keep
}
