//! Finite sets of integers with explicit truncation ranges, and the
//! Chacón translation sets `H_m` with their direct sums.
//!
//! `H_m` collects the translations carrying one copy of `B_m` inside
//! `B_{m+1} = B_m B_m 1 B_m` onto another: the copies start at `0`, `l_m`
//! and `2 l_m + 1 = 3^{m+1}`. The infinite direct sum
//! `H_k ⊕ H_{k+1} ⊕ ⋯` is read with finite support. Every truncation
//! records the sub-range on which it provably agrees with the infinite sum.

use std::collections::HashMap;
use std::fmt;
use std::ops::{Add, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{block_length, block_length_i64, pow3, pow3_i64};

/// Closed integer interval `[lo, hi]`; empty when `lo > hi`.
#[derive(Clone, Copy, PartialEq, Eq, Hash)]
pub struct Interval {
    pub lo: i64,
    pub hi: i64,
}

impl Interval {
    pub const EMPTY: Interval = Interval { lo: 1, hi: 0 };

    pub fn new(lo: i64, hi: i64) -> Result<Self> {
        if lo > hi {
            return Err(Error::EmptyInterval { lo, hi });
        }
        Ok(Self { lo, hi })
    }

    /// `[-r, r]`.
    pub fn symmetric(r: i64) -> Self {
        if r < 0 {
            Self::EMPTY
        } else {
            Self { lo: -r, hi: r }
        }
    }

    pub fn is_empty(&self) -> bool {
        self.lo > self.hi
    }

    pub fn contains(&self, x: i64) -> bool {
        self.lo <= x && x <= self.hi
    }

    pub fn len(&self) -> u64 {
        if self.is_empty() {
            0
        } else {
            (self.hi - self.lo) as u64 + 1
        }
    }

    pub fn intersect(&self, other: &Interval) -> Interval {
        let iv = Interval {
            lo: self.lo.max(other.lo),
            hi: self.hi.min(other.hi),
        };
        if iv.is_empty() {
            Self::EMPTY
        } else {
            iv
        }
    }

    pub fn contains_interval(&self, other: &Interval) -> bool {
        other.is_empty() || (self.lo <= other.lo && other.hi <= self.hi)
    }

    pub fn shift(&self, d: i64) -> Result<Interval> {
        if self.is_empty() {
            return Ok(Self::EMPTY);
        }
        let lo = self
            .lo
            .checked_add(d)
            .ok_or(Error::Overflow("interval shift"))?;
        let hi = self
            .hi
            .checked_add(d)
            .ok_or(Error::Overflow("interval shift"))?;
        Ok(Interval { lo, hi })
    }

    /// Shrinks both ends by `r` (grows for negative `r`).
    pub fn shrink(&self, r: i64) -> Interval {
        if self.is_empty() {
            return Self::EMPTY;
        }
        let iv = Interval {
            lo: self.lo.saturating_add(r),
            hi: self.hi.saturating_sub(r),
        };
        if iv.is_empty() {
            Self::EMPTY
        } else {
            iv
        }
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> {
        self.lo..=self.hi
    }
}

impl fmt::Debug for Interval {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_empty() {
            f.write_str("[]")
        } else {
            write!(f, "[{}, {}]", self.lo, self.hi)
        }
    }
}

impl Serialize for Interval {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        if self.is_empty() {
            serializer.serialize_none()
        } else {
            [self.lo, self.hi].serialize(serializer)
        }
    }
}

/// A finite set of integers, complete within `range`.
///
/// `certified` is the sub-range on which the set is known to equal the
/// (possibly infinite) set it stands for; outside it, membership answers
/// are only as good as the truncation that produced them.
#[derive(Clone, PartialEq, Eq)]
pub struct ZSet {
    elements: Vec<i64>,
    range: Interval,
    certified: Interval,
    possibly_incomplete: bool,
}

impl ZSet {
    /// Builds a set from arbitrary values, dropping those outside `range`.
    /// The whole range is certified.
    pub fn clipped(range: Interval, values: impl IntoIterator<Item = i64>) -> Self {
        let mut elements: Vec<i64> = values.into_iter().filter(|x| range.contains(*x)).collect();
        elements.sort_unstable();
        elements.dedup();
        Self {
            elements,
            range,
            certified: range,
            possibly_incomplete: false,
        }
    }

    pub fn empty(range: Interval) -> Self {
        Self::clipped(range, std::iter::empty())
    }

    pub fn elements(&self) -> &[i64] {
        &self.elements
    }

    pub fn range(&self) -> Interval {
        self.range
    }

    pub fn certified_range(&self) -> Interval {
        self.certified
    }

    pub fn possibly_incomplete(&self) -> bool {
        self.possibly_incomplete
    }

    /// Narrows the certified range (never widens it).
    pub fn with_certified(mut self, certified: Interval) -> Self {
        self.certified = self.certified.intersect(&certified);
        self
    }

    pub fn len(&self) -> usize {
        self.elements.len()
    }

    pub fn is_empty(&self) -> bool {
        self.elements.is_empty()
    }

    pub fn contains(&self, x: i64) -> bool {
        self.elements.binary_search(&x).is_ok()
    }

    pub fn iter(&self) -> impl Iterator<Item = i64> + '_ {
        self.elements.iter().copied()
    }

    /// `d + self`, with every range translated.
    pub fn translate(&self, d: i64) -> Result<ZSet> {
        let elements = self
            .elements
            .iter()
            .map(|x| x.checked_add(d).ok_or(Error::Overflow("translate")))
            .collect::<Result<Vec<_>>>()?;
        Ok(ZSet {
            elements,
            range: self.range.shift(d)?,
            certified: self.certified.shift(d)?,
            possibly_incomplete: self.possibly_incomplete,
        })
    }

    /// Restriction to `iv`; ranges shrink accordingly.
    pub fn restrict(&self, iv: Interval) -> ZSet {
        let range = self.range.intersect(&iv);
        ZSet {
            elements: self.iter().filter(|x| range.contains(*x)).collect(),
            range,
            certified: self.certified.intersect(&range),
            possibly_incomplete: self.possibly_incomplete,
        }
    }

    /// Restriction to the certified range.
    pub fn certified_part(&self) -> ZSet {
        self.restrict(self.certified)
    }

    /// Intersection; ranges and certified ranges intersect too.
    pub fn intersection(&self, other: &ZSet) -> ZSet {
        let range = self.range.intersect(&other.range);
        ZSet {
            elements: self
                .iter()
                .filter(|x| range.contains(*x) && other.contains(*x))
                .collect(),
            range,
            certified: self.certified.intersect(&other.certified),
            possibly_incomplete: self.possibly_incomplete || other.possibly_incomplete,
        }
    }

    /// Whether `x ∈ self ⇔ -x ∈ self` for every `x` with both `x` and `-x`
    /// in range.
    pub fn is_symmetric(&self) -> bool {
        self.iter()
            .filter(|x| self.range.contains(-x))
            .all(|x| self.contains(-x))
    }

    /// Elements of `self` missing from `other` and elements of `other`
    /// missing from `self`, both restricted to `iv`.
    pub fn difference_on(&self, other: &ZSet, iv: Interval) -> (Vec<i64>, Vec<i64>) {
        let only_self = self
            .iter()
            .filter(|x| iv.contains(*x) && !other.contains(*x))
            .collect();
        let only_other = other
            .iter()
            .filter(|x| iv.contains(*x) && !self.contains(*x))
            .collect();
        (only_self, only_other)
    }

    /// Whether every element of `self` inside `iv` belongs to `other`.
    pub fn is_subset_on(&self, other: &ZSet, iv: Interval) -> bool {
        self.iter()
            .filter(|x| iv.contains(*x))
            .all(|x| other.contains(x))
    }
}

impl fmt::Debug for ZSet {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "ZSet{:?} on {:?} (certified {:?})",
            self.elements, self.range, self.certified
        )
    }
}

impl Serialize for ZSet {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("ZSet", 4)?;
        st.serialize_field("range", &self.range)?;
        st.serialize_field("certified_range", &self.certified)?;
        st.serialize_field("possibly_incomplete", &self.possibly_incomplete)?;
        st.serialize_field("elements", &self.elements)?;
        st.end()
    }
}

/// `H_m = {0, ±l_m, ±(l_m + 1), ±3^{m+1}}` on the range `[-3^{m+1}, 3^{m+1}]`.
pub fn h_set(m: u32) -> Result<ZSet> {
    if m == 0 {
        return Err(Error::InvalidDepth(0));
    }
    let digits = h_digits(m)?;
    let top = pow3_i64(m + 1)?;
    Ok(ZSet::clipped(Interval { lo: -top, hi: top }, digits))
}

fn h_digits(m: u32) -> Result<[i64; 7]> {
    let l = block_length_i64(m)?;
    let t = pow3_i64(m + 1)?;
    Ok([-t, -(l + 1), -l, 0, l, l + 1, t])
}

fn h_digits_big(m: u32) -> [BigInt; 7] {
    let l = block_length(m);
    let t = pow3(m + 1);
    let l1: BigInt = &l + 1;
    [
        -t.clone(),
        -l1.clone(),
        -l.clone(),
        BigInt::zero(),
        l,
        l1,
        t,
    ]
}

/// `{x + y : x ∈ a, y ∈ b} ∩ range`.
///
/// The result is flagged as possibly incomplete unless
/// `a.hi + b.hi ≥ range.hi` and `a.lo + b.lo ≤ range.lo`.
pub fn minkowski_sum(a: &ZSet, b: &ZSet, range: Interval) -> ZSet {
    let mut out = Vec::new();
    for x in a.iter() {
        for y in b.iter() {
            if let Some(s) = x.checked_add(y) {
                if range.contains(s) {
                    out.push(s);
                }
            }
        }
    }
    let mut z = ZSet::clipped(range, out);
    let reach_hi = a.range.hi.saturating_add(b.range.hi);
    let reach_lo = a.range.lo.saturating_add(b.range.lo);
    let complete = !range.is_empty() && reach_hi >= range.hi && reach_lo <= range.lo;
    z.possibly_incomplete = !complete || a.possibly_incomplete || b.possibly_incomplete;
    let inherited = Interval {
        lo: a.certified.lo.saturating_add(b.certified.lo),
        hi: a.certified.hi.saturating_add(b.certified.hi),
    };
    z.certified = if complete {
        range
    } else {
        range.intersect(&inherited)
    };
    z
}

/// Half-width `c` of the range `[-c, c]` on which `H_k ⊕ ⋯ ⊕ H_{K-1}`
/// equals the infinite sum `H_k ⊕ H_{k+1} ⊕ ⋯`.
///
/// With `K = k` the truncation is `{0}` and the first nonzero element of the
/// infinite sum has magnitude `l_k`. For `K > k`, a value whose top nonzero
/// digit sits at a level `j ≥ K` and whose magnitude is below
/// `l_{K-1} + l_k` is forced to use the digit `∓3^j` at level `j - 1`, and
/// `l_j - 3^j = l_{j-1}`, so the two top digits collapse to one digit of
/// `H_{j-1}`; repeating this brings the top level below `K`. The bound is
/// attained (for example `8 = 13 - 5` for `k = 1`, `K = 2`).
pub fn certified_half_width(k: u32, trunc: u32) -> BigInt {
    let lk = block_length(k);
    if trunc <= k {
        lk - 1
    } else {
        block_length(trunc - 1) + lk - 1
    }
}

fn certified_half_width_i64(k: u32, trunc: u32) -> Result<i64> {
    let lk = block_length_i64(k)?;
    if trunc <= k {
        Ok(lk - 1)
    } else {
        Ok(block_length_i64(trunc - 1)? + lk - 1)
    }
}

/// `(H_k ⊕ ⋯ ⊕ H_{K-1}) ∩ range`, certified on `range ∩ [-c, c]` with `c`
/// from [`certified_half_width`].
pub fn truncated_h_sum(k: u32, trunc: u32, range: Interval) -> Result<ZSet> {
    if k == 0 {
        return Err(Error::InvalidDepth(0));
    }
    if k > trunc {
        return Err(Error::TruncationBelowLevel { level: k, trunc });
    }
    // Levels are added from the top so pruning bites early: a partial sum is
    // kept only if the remaining lower levels can still bring it into range.
    let mut below = vec![0i64; (trunc - k + 1) as usize];
    for level in k..trunc {
        let idx = (level - k + 1) as usize;
        below[idx] = below[idx - 1]
            .checked_add(pow3_i64(level + 1)?)
            .ok_or(Error::Overflow("truncated_h_sum"))?;
    }
    let mut partial = vec![0i64];
    for level in (k..trunc).rev() {
        let slack = below[(level - k) as usize];
        let lo = range.lo.saturating_sub(slack);
        let hi = range.hi.saturating_add(slack);
        let digits = h_digits(level)?;
        let mut next = Vec::with_capacity(partial.len() * 7);
        for &x in &partial {
            for &d in &digits {
                let s = x.checked_add(d).ok_or(Error::Overflow("truncated_h_sum"))?;
                if lo <= s && s <= hi {
                    next.push(s);
                }
            }
        }
        next.sort_unstable();
        next.dedup();
        partial = next;
    }
    let c = certified_half_width_i64(k, trunc)?;
    Ok(ZSet::clipped(range, partial).with_certified(Interval::symmetric(c)))
}

/// Maximal runs of consecutive integers, as `(start, length)`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct IntervalStats {
    pub max_run_length: u64,
    pub runs: Vec<(i64, u64)>,
}

pub fn interval_stats(s: &ZSet) -> IntervalStats {
    let runs = maximal_runs(s.elements());
    IntervalStats {
        max_run_length: runs.iter().map(|r| r.1).max().unwrap_or(0),
        runs,
    }
}

/// Maximal runs of a strictly increasing slice.
pub fn maximal_runs<T>(sorted: &[T]) -> Vec<(T, u64)>
where
    T: Clone + PartialEq + One,
    for<'a> &'a T: Add<&'a T, Output = T>,
{
    let mut runs: Vec<(T, u64)> = Vec::new();
    let one = T::one();
    let mut prev: Option<&T> = None;
    for x in sorted {
        match (prev, runs.last_mut()) {
            (Some(p), Some(run)) if &(p + &one) == x => run.1 += 1,
            _ => runs.push((x.clone(), 1)),
        }
        prev = Some(x);
    }
    runs
}

/// Smallest `x ∈ n` with `x - f_i ∈ n` for every shift, i.e. a point of
/// `n ∩ ⋂ (f_i + n)`.
pub fn thick_witness(n: &ZSet, f: &[i64]) -> Option<i64> {
    thick_witness_sorted(n.elements(), f)
}

/// Whether every shifted copy `f_i + n` keeps a nonempty overlap with the
/// range of `n`; a `None` from [`thick_witness`] is only meaningful then.
pub fn shifts_within_range(n: &ZSet, f: &[i64]) -> bool {
    let r = n.range();
    f.iter()
        .all(|&g| g.checked_abs().is_some_and(|a| (a as u64) < r.len()))
}

/// [`thick_witness`] over any strictly increasing slice.
pub fn thick_witness_sorted<T>(sorted: &[T], shifts: &[T]) -> Option<T>
where
    T: Ord + Clone,
    for<'a> &'a T: Sub<&'a T, Output = T>,
{
    sorted
        .iter()
        .find(|x| {
            shifts
                .iter()
                .all(|g| sorted.binary_search(&(*x - g)).is_ok())
        })
        .cloned()
}

/// `(3^{m+1} - 3)/2`, the `m`-th element of the gap set `G`.
pub fn gap_element(m: u32) -> Result<i64> {
    if m == 0 {
        return Err(Error::InvalidDepth(0));
    }
    Ok((pow3_i64(m + 1)? - 3) / 2)
}

/// A run of consecutive integers `start, start + 1, …, start + len - 1`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Run {
    pub start: BigInt,
    pub len: u64,
}

impl Run {
    pub fn last(&self) -> BigInt {
        &self.start + BigInt::from(self.len) - 1
    }

    pub fn elements(&self) -> Vec<BigInt> {
        (0..self.len)
            .map(|i| &self.start + BigInt::from(i))
            .collect()
    }

    pub fn contains(&self, x: &BigInt) -> bool {
        x >= &self.start && x <= &self.last()
    }
}

/// `⊕_{i=k}^{k+m-2} {l_i, l_i + 1}` computed by explicit enumeration, with
/// the claim that it is a run of `m` consecutive integers checked.
pub fn interval_run_big(k: u32, m: u32) -> Result<Run> {
    if k == 0 {
        return Err(Error::InvalidDepth(0));
    }
    if m < 2 {
        return Err(Error::InvalidParameter {
            name: "m",
            reason: format!("interval runs need m >= 2, got {m}"),
        });
    }
    let mut sums = vec![BigInt::zero()];
    for level in k..=k + m - 2 {
        let l = block_length(level);
        let mut next = Vec::with_capacity(2 * sums.len());
        for s in &sums {
            next.push(s + &l);
            next.push(s + &l + 1);
        }
        next.sort();
        next.dedup();
        sums = next;
    }
    let runs = maximal_runs(&sums);
    if runs.len() != 1 || runs[0].1 != m as u64 {
        return Err(Error::ClaimFalsified(format!(
            "interval_run({k}, {m}) has runs {:?}",
            runs.iter()
                .map(|(s, l)| format!("{s}+{l}"))
                .collect::<Vec<_>>()
        )));
    }
    Ok(Run {
        start: runs[0].0.clone(),
        len: m as u64,
    })
}

/// [`interval_run_big`] as a [`ZSet`] on the range it spans.
pub fn interval_run(k: u32, m: u32) -> Result<ZSet> {
    let run = interval_run_big(k, m)?;
    let lo = i64::try_from(&run.start).map_err(|_| Error::Overflow("interval_run"))?;
    let hi = i64::try_from(&run.last()).map_err(|_| Error::Overflow("interval_run"))?;
    Ok(ZSet::clipped(Interval { lo, hi }, lo..=hi))
}

/// Exact membership in the infinite sum `H_k ⊕ H_{k+1} ⊕ ⋯` for integers of
/// any size.
///
/// A value `n` is decided by truncating at the first level `K` whose
/// certified half-width exceeds `|n|`, then searching digit assignments from
/// the top level down with magnitude pruning and memoisation.
#[derive(Debug, Clone)]
pub struct HSum {
    start_level: u32,
}

impl HSum {
    pub fn new(start_level: u32) -> Result<Self> {
        if start_level == 0 {
            return Err(Error::InvalidDepth(0));
        }
        Ok(Self { start_level })
    }

    pub fn start_level(&self) -> u32 {
        self.start_level
    }

    /// Smallest truncation level whose certified range contains `n`.
    pub fn truncation_for(&self, n: &BigInt) -> u32 {
        let mag = n.abs();
        let mut trunc = self.start_level;
        while certified_half_width(self.start_level, trunc) < mag {
            trunc += 1;
        }
        trunc
    }

    pub fn contains(&self, n: &BigInt) -> bool {
        let k = self.start_level;
        let trunc = self.truncation_for(n);
        if trunc == k {
            return n.is_zero();
        }
        // below[j - k] = Σ_{i=k}^{j-1} 3^{i+1}, the largest magnitude levels
        // k..j-1 can contribute.
        let mut below = vec![BigInt::zero()];
        for level in k..trunc {
            let next = below.last().unwrap() + pow3(level + 1);
            below.push(next);
        }
        let digits: Vec<[BigInt; 7]> = (k..trunc).map(h_digits_big).collect();
        let mut memo = HashMap::new();
        self.search(trunc - 1, n.clone(), &below, &digits, &mut memo)
    }

    fn search(
        &self,
        level: u32,
        n: BigInt,
        below: &[BigInt],
        digits: &[[BigInt; 7]],
        memo: &mut HashMap<(u32, BigInt), bool>,
    ) -> bool {
        let k = self.start_level;
        if let Some(&hit) = memo.get(&(level, n.clone())) {
            return hit;
        }
        let slack = &below[(level - k) as usize];
        let mut found = false;
        for d in &digits[(level - k) as usize] {
            let rest = &n - d;
            if &rest.abs() > slack {
                continue;
            }
            let ok = if level == k {
                rest.is_zero()
            } else {
                self.search(level - 1, rest, below, digits, memo)
            };
            if ok {
                found = true;
                break;
            }
        }
        memo.insert((level, n), found);
        found
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::collections::BTreeSet;

    /// Every digit assignment over levels `k..trunc`, no pruning.
    fn brute_h_sum(k: u32, trunc: u32) -> BTreeSet<i64> {
        let mut acc = BTreeSet::from([0i64]);
        for level in k..trunc {
            let h = h_set(level).unwrap();
            acc = acc
                .iter()
                .flat_map(|x| h.iter().map(move |y| x + y))
                .collect();
        }
        acc
    }

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    #[test]
    fn h_set_values() {
        assert_eq!(h_set(1).unwrap().elements(), &[-9, -5, -4, 0, 4, 5, 9]);
        assert_eq!(
            h_set(2).unwrap().elements(),
            &[-27, -14, -13, 0, 13, 14, 27]
        );
        assert_eq!(
            h_set(3).unwrap().elements(),
            &[-81, -41, -40, 0, 40, 41, 81]
        );
        assert_eq!(h_set(1).unwrap().range(), iv(-9, 9));
        for m in 1..=10 {
            let h = h_set(m).unwrap();
            assert!(h.contains(0));
            assert!(h.is_symmetric());
        }
    }

    #[test]
    fn minkowski_examples() {
        let zero = ZSet::clipped(iv(0, 0), [0]);
        let s = h_set(2).unwrap();
        let r = iv(-20, 20);
        assert_eq!(
            minkowski_sum(&zero, &s, r).elements(),
            s.restrict(r).elements()
        );

        let a = ZSet::clipped(iv(4, 5), [4, 5]);
        let b = ZSet::clipped(iv(13, 14), [13, 14]);
        let sum = minkowski_sum(&a, &b, iv(-100, 100));
        assert_eq!(sum.elements(), &[17, 18, 19]);
        assert!(sum.possibly_incomplete());

        let h12 = minkowski_sum(&h_set(1).unwrap(), &h_set(2).unwrap(), iv(-36, 36));
        for x in [0, 4, 13, 17, 36] {
            assert!(h12.contains(x), "{x}");
        }
        assert!(!h12.possibly_incomplete());
    }

    #[test]
    fn truncated_sum_examples() {
        assert_eq!(
            truncated_h_sum(1, 2, iv(-9, 9)).unwrap().elements(),
            &[-9, -5, -4, 0, 4, 5, 9]
        );
        let t = truncated_h_sum(1, 3, iv(-12, 12)).unwrap();
        let oracle: Vec<i64> = brute_h_sum(1, 3)
            .into_iter()
            .filter(|x| x.abs() <= 12)
            .collect();
        assert_eq!(t.elements(), oracle.as_slice());
        assert_eq!(t.elements(), &[-10, -9, -8, -5, -4, 0, 4, 5, 8, 9, 10]);
        let t = truncated_h_sum(2, 4, iv(-30, 30)).unwrap();
        for x in [0, 13, 14, 27] {
            assert!(t.contains(x));
        }
        assert_eq!(
            truncated_h_sum(3, 2, iv(0, 1)),
            Err(Error::TruncationBelowLevel { level: 3, trunc: 2 })
        );
    }

    #[test]
    fn truncated_sum_matches_unpruned_enumeration() {
        for k in 1..=3 {
            for trunc in k..=k + 4 {
                let oracle = brute_h_sum(k, trunc);
                let r = iv(-400, 400);
                let got = truncated_h_sum(k, trunc, r).unwrap();
                let want: Vec<i64> = oracle.into_iter().filter(|x| r.contains(*x)).collect();
                assert_eq!(got.elements(), want.as_slice(), "k={k} K={trunc}");
            }
        }
    }

    #[test]
    fn certified_width_is_exact_and_tight() {
        // Frozen from an unpruned enumeration four levels deeper: the first
        // value missing from the truncation sits just past the certified edge.
        let first_missing = [
            ((1, 1), 4),
            ((1, 2), 8),
            ((1, 3), 21),
            ((1, 4), 61),
            ((2, 2), 13),
            ((2, 3), 26),
            ((2, 4), 66),
            ((3, 3), 40),
            ((3, 4), 80),
        ];
        for ((k, trunc), miss) in first_missing {
            let c = certified_half_width_i64(k, trunc).unwrap();
            assert!(c < miss, "k={k} K={trunc}: c={c} miss={miss}");
            let deep = brute_h_sum(k, trunc + 4);
            let shallow = brute_h_sum(k, trunc);
            let computed = deep.difference(&shallow).map(|x| x.abs()).min().unwrap();
            assert_eq!(computed, miss);
        }
        assert_eq!(certified_half_width_i64(1, 2).unwrap(), 7);
        assert_eq!(certified_half_width_i64(2, 3).unwrap(), 25);
        assert_eq!(certified_half_width_i64(3, 4).unwrap(), 79);
    }

    #[test]
    fn interval_stats_examples() {
        let s = ZSet::clipped(iv(0, 100), [17, 18, 19]);
        assert_eq!(interval_stats(&s).max_run_length, 3);
        let h = interval_stats(&h_set(1).unwrap());
        assert_eq!(h.max_run_length, 2);
        assert!(h.runs.contains(&(-5, 2)) && h.runs.contains(&(4, 2)));
        assert_eq!(interval_stats(&ZSet::empty(iv(0, 3))).max_run_length, 0);
    }

    #[test]
    fn thick_witness_examples() {
        let s = ZSet::clipped(iv(-5, 5), [-2, 0, 3]);
        assert_eq!(thick_witness(&s, &[]), Some(-2));
        let run = ZSet::clipped(iv(0, 100), [17, 18, 19]);
        assert_eq!(thick_witness(&run, &[1, 2]), Some(19));
        assert_eq!(thick_witness(&h_set(1).unwrap(), &[1, 2, 3]), None);
        assert!(shifts_within_range(&run, &[1, 2]));
        assert!(!shifts_within_range(&ZSet::clipped(iv(0, 2), [0]), &[5]));
    }

    #[test]
    fn gap_elements() {
        assert_eq!(gap_element(1).unwrap(), 3);
        assert_eq!(gap_element(2).unwrap(), 12);
        assert_eq!(gap_element(3).unwrap(), 39);
    }

    #[test]
    fn interval_run_examples() {
        assert_eq!(interval_run(1, 2).unwrap().elements(), &[4, 5]);
        assert_eq!(interval_run(1, 3).unwrap().elements(), &[17, 18, 19]);
        assert_eq!(interval_run(2, 3).unwrap().elements(), &[53, 54, 55]);
        assert!(interval_run(1, 1).is_err());
    }

    #[test]
    fn hsum_membership_matches_enumeration() {
        for k in 1..=3 {
            let dec = HSum::new(k).unwrap();
            let c = certified_half_width_i64(k, k + 5).unwrap();
            let t = truncated_h_sum(k, k + 5, Interval::symmetric(c)).unwrap();
            for x in -c..=c {
                assert_eq!(dec.contains(&BigInt::from(x)), t.contains(x), "k={k} x={x}");
            }
        }
    }

    #[test]
    fn hsum_handles_huge_runs() {
        let run = interval_run_big(3, 60).unwrap();
        let dec = HSum::new(3).unwrap();
        for x in [run.start.clone(), run.last()] {
            assert!(dec.contains(&x));
        }
    }
}
