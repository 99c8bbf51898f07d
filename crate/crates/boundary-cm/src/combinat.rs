//! Cyclic combinatorics of k-subsets of {1, ..., n}.
//!
//! A subset I of edge labels determines where the rank-1 module L_I puts
//! its t-weights, and everything the classification needs about a pair
//! (I, J) is cyclic-order data: where the two sets differ, how often the
//! differences interleave around the circle, and which labels are shared
//! or missed by both. Labels live on a circle, so "i + 1" always means
//! the cyclic successor (n wraps to 1).

use serde::{Deserialize, Serialize};
use std::collections::BTreeSet;
use std::fmt;
use thiserror::Error;

/// Errors from subset construction and pair analysis.
#[derive(Debug, Clone, PartialEq, Eq, Error)]
pub enum CombinatError {
    #[error("the cycle length n must be positive")]
    BadCycleLength,
    #[error("member {member} is outside 1..={n}")]
    MemberOutOfRange { member: usize, n: usize },
    #[error("subsets live on different cycles ({0} vs {1})")]
    CycleMismatch(usize, usize),
    #[error("subsets have different sizes ({0} vs {1})")]
    SizeMismatch(usize, usize),
    #[error("pair is not tight: |I ∩ J| = {meet} but k - r = {expected}")]
    NotTight { meet: usize, expected: usize },
}

/// A subset of the edge labels {1, ..., n} of the n-cycle.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(try_from = "RawRim", into = "RawRim")]
pub struct Rim {
    n: usize,
    members: BTreeSet<usize>,
}

#[derive(Serialize, Deserialize)]
struct RawRim {
    n: usize,
    members: Vec<usize>,
}

impl TryFrom<RawRim> for Rim {
    type Error = CombinatError;
    fn try_from(raw: RawRim) -> Result<Self, Self::Error> {
        Rim::new(raw.n, raw.members)
    }
}

impl From<Rim> for RawRim {
    fn from(rim: Rim) -> Self {
        RawRim {
            n: rim.n,
            members: rim.members.into_iter().collect(),
        }
    }
}

impl Rim {
    /// Validated subset of {1, ..., n}. Duplicates collapse.
    pub fn new(n: usize, members: impl IntoIterator<Item = usize>) -> Result<Self, CombinatError> {
        if n == 0 {
            return Err(CombinatError::BadCycleLength);
        }
        let members: BTreeSet<usize> = members.into_iter().collect();
        for &m in &members {
            if m < 1 || m > n {
                return Err(CombinatError::MemberOutOfRange { member: m, n });
            }
        }
        Ok(Rim { n, members })
    }

    pub fn n(&self) -> usize {
        self.n
    }

    /// Subset size, written k throughout.
    pub fn k(&self) -> usize {
        self.members.len()
    }

    pub fn contains(&self, label: usize) -> bool {
        self.members.contains(&label)
    }

    pub fn members(&self) -> impl Iterator<Item = usize> + '_ {
        self.members.iter().copied()
    }

    pub fn member_set(&self) -> &BTreeSet<usize> {
        &self.members
    }

    /// Cyclic successor of an edge label (n wraps to 1).
    pub fn next_label(&self, label: usize) -> usize {
        if label == self.n {
            1
        } else {
            label + 1
        }
    }

    /// Complement within {1, ..., n}.
    pub fn complement(&self) -> Rim {
        Rim {
            n: self.n,
            members: (1..=self.n).filter(|m| !self.members.contains(m)).collect(),
        }
    }

    /// Labels i with i not in I but i+1 in I (cyclically).
    pub fn peaks(&self) -> BTreeSet<usize> {
        (1..=self.n)
            .filter(|&i| !self.contains(i) && self.contains(self.next_label(i)))
            .collect()
    }

    /// Labels i with i in I but i+1 not in I (cyclically).
    pub fn valleys(&self) -> BTreeSet<usize> {
        (1..=self.n)
            .filter(|&i| self.contains(i) && !self.contains(self.next_label(i)))
            .collect()
    }

    /// Walk heights: h[0] = 0 and step i goes down by 1 for i in I,
    /// up by 1 otherwise, so h[n] = n - 2k.
    pub fn height_profile(&self) -> Vec<i64> {
        let mut h = Vec::with_capacity(self.n + 1);
        h.push(0i64);
        for i in 1..=self.n {
            let step = if self.contains(i) { -1 } else { 1 };
            h.push(h[i - 1] + step);
        }
        h
    }
}

impl fmt::Display for Rim {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{{")?;
        for (idx, m) in self.members.iter().enumerate() {
            if idx > 0 {
                write!(f, ",")?;
            }
            write!(f, "{m}")?;
        }
        write!(f, "}}")
    }
}

fn check_comparable(a: &Rim, b: &Rim) -> Result<(), CombinatError> {
    if a.n() != b.n() {
        return Err(CombinatError::CycleMismatch(a.n(), b.n()));
    }
    if a.k() != b.k() {
        return Err(CombinatError::SizeMismatch(a.k(), b.k()));
    }
    Ok(())
}

/// Which of the two subsets a symmetric-difference label came from.
#[derive(Debug, Clone, Copy, PartialEq, Eq)]
enum Origin {
    FromI,
    FromJ,
}

/// Labels of I \ J and J \ I merged in cyclic order, each with its origin.
fn merged_difference(i: &Rim, j: &Rim) -> Vec<(usize, Origin)> {
    let mut word: Vec<(usize, Origin)> = Vec::new();
    for label in 1..=i.n() {
        match (i.contains(label), j.contains(label)) {
            (true, false) => word.push((label, Origin::FromI)),
            (false, true) => word.push((label, Origin::FromJ)),
            _ => {}
        }
    }
    word
}

/// The interlacing number r of a pair of equal-size subsets: half the
/// number of maximal same-origin blocks when I \ J and J \ I are merged
/// around the circle.
pub fn interlacing_number(i: &Rim, j: &Rim) -> Result<usize, CombinatError> {
    check_comparable(i, j)?;
    let word = merged_difference(i, j);
    if word.is_empty() {
        return Ok(0);
    }
    let blocks = (0..word.len())
        .filter(|&idx| {
            let prev = (idx + word.len() - 1) % word.len();
            word[idx].1 != word[prev].1
        })
        .count();
    // A word containing both origins has an even, positive block count;
    // a word in one origin only has no transitions.
    Ok(blocks / 2)
}

/// A pair interlaces tightly when the shared part is as large as the
/// interlacing allows: |I ∩ J| = k - r.
pub fn is_tight(i: &Rim, j: &Rim) -> Result<bool, CombinatError> {
    let r = interlacing_number(i, j)?;
    let meet = i.members().filter(|&m| j.contains(m)).count();
    Ok(meet == i.k() - r)
}

/// Cyclic positions of a tight pair, flattened to the data the rank-2
/// construction consumes.
///
/// For a tight pair the merged difference word alternates perfectly
/// between the two origins, so anchoring at the smallest label of I \ J
/// and walking the circle lists the differences as
/// i_1, j_1, i_2, j_2, ..., i_r, j_r. `position_map[l]` is the edge label
/// at 1-based model position l+1... see accessors.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct ModelReduction {
    r: usize,
    /// Edge label at model position m, for m in 0..2r. Even positions
    /// carry labels from I \ J, odd positions labels from J \ I.
    position_map: Vec<usize>,
    common: BTreeSet<usize>,
    empty: BTreeSet<usize>,
}

impl ModelReduction {
    /// Interlacing number r.
    pub fn r(&self) -> usize {
        self.r
    }

    /// Edge label at 0-based model position m in 0..2r. Even m lands in
    /// I \ J, odd m in J \ I, in cyclic order from min(I \ J).
    pub fn label_at(&self, m: usize) -> usize {
        self.position_map[m]
    }

    pub fn position_map(&self) -> &[usize] {
        &self.position_map
    }

    /// Model position of an edge label, if the label is a difference label.
    pub fn position_of(&self, label: usize) -> Option<usize> {
        self.position_map.iter().position(|&l| l == label)
    }

    /// Labels in I ∩ J.
    pub fn common(&self) -> &BTreeSet<usize> {
        &self.common
    }

    /// Labels in neither subset.
    pub fn empty(&self) -> &BTreeSet<usize> {
        &self.empty
    }
}

/// Reduce a tight pair to its model data. Errors when the pair is not
/// tight (the construction downstream is only defined for tight pairs).
pub fn model_reduction(i: &Rim, j: &Rim) -> Result<ModelReduction, CombinatError> {
    let r = interlacing_number(i, j)?;
    let meet: BTreeSet<usize> = i.members().filter(|&m| j.contains(m)).collect();
    if meet.len() != i.k() - r {
        return Err(CombinatError::NotTight {
            meet: meet.len(),
            expected: i.k() - r,
        });
    }
    let word = merged_difference(i, j);
    // Rotate so the walk starts at the smallest label of I \ J. Tightness
    // makes the origins alternate around the whole circle, so starting on
    // an I-origin label yields the alternating listing directly.
    let start = word
        .iter()
        .position(|&(_, o)| o == Origin::FromI)
        .unwrap_or(0);
    let mut position_map = Vec::with_capacity(word.len());
    for m in 0..word.len() {
        let (label, origin) = word[(start + m) % word.len()];
        debug_assert_eq!(
            origin,
            if m % 2 == 0 { Origin::FromI } else { Origin::FromJ },
            "tight pair's difference word must alternate"
        );
        position_map.push(label);
    }
    let empty = (1..=i.n())
        .filter(|&m| !i.contains(m) && !j.contains(m))
        .collect();
    Ok(ModelReduction {
        r,
        position_map,
        common: meet,
        empty,
    })
}

/// All k-subsets of {1, ..., n} in lexicographic order.
pub fn k_subsets(n: usize, k: usize) -> Vec<Rim> {
    fn go(n: usize, k: usize, from: usize, acc: &mut Vec<usize>, out: &mut Vec<Rim>) {
        if acc.len() == k {
            out.push(Rim::new(n, acc.iter().copied()).unwrap());
            return;
        }
        let needed = k - acc.len();
        for next in from..=(n + 1 - needed) {
            acc.push(next);
            go(n, k, next + 1, acc, out);
            acc.pop();
        }
    }
    let mut out = Vec::new();
    if k <= n {
        go(n, k, 1, &mut Vec::new(), &mut out);
    }
    out
}

/// Binomial coefficient, saturating at usize::MAX.
pub fn binomial(n: usize, k: usize) -> usize {
    if k > n {
        return 0;
    }
    let k = k.min(n - k);
    let mut acc: u128 = 1;
    for i in 0..k {
        acc = acc * (n - i) as u128 / (i + 1) as u128;
        if acc > usize::MAX as u128 {
            return usize::MAX;
        }
    }
    acc as usize
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn rim(n: usize, members: &[usize]) -> Rim {
        Rim::new(n, members.iter().copied()).unwrap()
    }

    #[test]
    fn construction_validates_ranges() {
        assert!(Rim::new(0, []).is_err());
        assert_eq!(
            Rim::new(5, [6]),
            Err(CombinatError::MemberOutOfRange { member: 6, n: 5 })
        );
        assert_eq!(
            Rim::new(5, [0]),
            Err(CombinatError::MemberOutOfRange { member: 0, n: 5 })
        );
        assert_eq!(rim(5, &[2, 2, 4]).k(), 2);
    }

    #[test]
    fn peaks_and_valleys_wrap_the_circle() {
        let i = rim(8, &[1, 4, 5]);
        assert_eq!(i.peaks(), BTreeSet::from([3, 8]));
        assert_eq!(i.valleys(), BTreeSet::from([1, 5]));
    }

    #[test]
    fn height_profile_walks_down_on_members() {
        let i = rim(8, &[1, 4, 5]);
        assert_eq!(i.height_profile(), vec![0, -1, 0, 1, 0, -1, 0, 1, 2]);
    }

    #[test]
    fn interlacing_counts_alternations() {
        let i = rim(6, &[1, 3, 5]);
        let j = rim(6, &[2, 4, 6]);
        assert_eq!(interlacing_number(&i, &j), Ok(3));
        assert_eq!(is_tight(&i, &j), Ok(true));

        let i = rim(6, &[1, 2, 5]);
        let j = rim(6, &[2, 4, 6]);
        assert_eq!(interlacing_number(&i, &j), Ok(2));
        assert_eq!(is_tight(&i, &j), Ok(true));
    }

    #[test]
    fn equal_subsets_have_interlacing_zero() {
        let i = rim(6, &[1, 2, 3]);
        assert_eq!(interlacing_number(&i, &i.clone()), Ok(0));
        assert_eq!(is_tight(&i, &i.clone()), Ok(true));
    }

    #[test]
    fn model_reduction_lists_differences_alternately() {
        let i = rim(8, &[1, 4, 6]);
        let j = rim(8, &[2, 5, 7]);
        let m = model_reduction(&i, &j).unwrap();
        assert_eq!(m.r(), 3);
        assert_eq!(m.position_map(), &[1, 2, 4, 5, 6, 7]);
        assert!(m.common().is_empty());
        assert_eq!(m.empty(), &BTreeSet::from([3, 8]));

        let i = rim(6, &[1, 2, 4]);
        let j = rim(6, &[2, 3, 5]);
        let m = model_reduction(&i, &j).unwrap();
        assert_eq!(m.r(), 2);
        assert_eq!(m.position_map(), &[1, 3, 4, 5]);
        assert_eq!(m.common(), &BTreeSet::from([2]));
        assert_eq!(m.empty(), &BTreeSet::from([6]));
    }

    #[test]
    fn loose_pairs_are_rejected() {
        // I \ J and J \ I sit in separate arcs: r = 1, but the pair shares
        // too little for tightness when the meet is smaller than k - 1.
        let i = rim(6, &[1, 2, 3]);
        let j = rim(6, &[4, 5, 6]);
        assert_eq!(interlacing_number(&i, &j), Ok(1));
        assert_eq!(is_tight(&i, &j), Ok(false));
        assert!(matches!(
            model_reduction(&i, &j),
            Err(CombinatError::NotTight { .. })
        ));
    }

    #[test]
    fn mismatched_pairs_error() {
        let a = rim(6, &[1]);
        let b = rim(7, &[1]);
        assert_eq!(
            interlacing_number(&a, &b),
            Err(CombinatError::CycleMismatch(6, 7))
        );
        let c = rim(6, &[1, 2]);
        assert_eq!(
            interlacing_number(&a, &c),
            Err(CombinatError::SizeMismatch(1, 2))
        );
    }

    #[test]
    fn k_subsets_enumerates_lexicographically() {
        let subs = k_subsets(4, 2);
        let flat: Vec<Vec<usize>> = subs.iter().map(|s| s.members().collect()).collect();
        assert_eq!(
            flat,
            vec![
                vec![1, 2],
                vec![1, 3],
                vec![1, 4],
                vec![2, 3],
                vec![2, 4],
                vec![3, 4]
            ]
        );
        assert_eq!(k_subsets(8, 4).len(), binomial(8, 4));
    }

    #[test]
    fn binomials() {
        assert_eq!(binomial(8, 4), 70);
        assert_eq!(binomial(5, 0), 1);
        assert_eq!(binomial(3, 5), 0);
        assert_eq!(binomial(40, 20), 137_846_528_820);
    }

    #[test]
    fn serde_round_trip() {
        let i = rim(8, &[1, 4, 5]);
        let json = serde_json::to_string(&i).unwrap();
        assert_eq!(json, r#"{"n":8,"members":[1,4,5]}"#);
        let back: Rim = serde_json::from_str(&json).unwrap();
        assert_eq!(back, i);
        let bad: Result<Rim, _> = serde_json::from_str(r#"{"n":4,"members":[9]}"#);
        assert!(bad.is_err());
    }

    fn arb_rim(n: usize) -> impl Strategy<Value = Rim> {
        proptest::collection::btree_set(1..=n, 0..=n)
            .prop_map(move |members| Rim::new(n, members).unwrap())
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(128))]

        #[test]
        fn peaks_and_valleys_balance(i in arb_rim(9)) {
            prop_assert_eq!(i.peaks().len(), i.valleys().len());
        }

        #[test]
        fn height_profile_ends_at_n_minus_2k(i in arb_rim(9)) {
            let h = i.height_profile();
            prop_assert_eq!(h[0], 0);
            prop_assert_eq!(h[i.n()], i.n() as i64 - 2 * i.k() as i64);
        }

        #[test]
        fn interlacing_is_symmetric(
            pair in arb_rim(8).prop_flat_map(|i| {
                let n = i.n();
                let k = i.k();
                (
                    Just(i),
                    proptest::sample::subsequence((1..=n).collect::<Vec<_>>(), k),
                )
            })
        ) {
            let (i, j_members) = pair;
            let j = Rim::new(i.n(), j_members).unwrap();
            prop_assert_eq!(
                interlacing_number(&i, &j).unwrap(),
                interlacing_number(&j, &i).unwrap()
            );
            prop_assert_eq!(is_tight(&i, &j).unwrap(), is_tight(&j, &i).unwrap());
        }

        #[test]
        fn complement_is_involutive(i in arb_rim(7)) {
            prop_assert_eq!(i.complement().complement(), i);
        }
    }
}
