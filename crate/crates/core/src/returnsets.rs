//! Return sets `N(A, B) = {n : n·A ∩ B ≠ ∅}` of Chacón cylinder sets.
//!
//! Shift convention: `n·[A]_k = [A]_{k-n}`, coming from the left shift
//! `(Sx)_i = x_{i+1}`. So `n ∈ N([A]_a, [B]_b)` exactly when some point of
//! the subshift shows `A` at `a - n` and `B` at `b`, i.e. when both words
//! occur in `ω` with starts differing by `b - a + n`.
//!
//! Brute force over a window of `ω` is the ground truth. The structured sum
//! `m + (H_k ⊕ H_{k+1} ⊕ ⋯)` is treated as a hypothesis checked against it.

use num_bigint::BigInt;
use num_traits::{Signed, ToPrimitive};
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::words::{
    block_length, block_length_i64, chacon_block, occurrences, window, Block, Window,
};
use crate::zsets::{
    certified_half_width, interval_run_big, maximal_runs, truncated_h_sum, HSum, Interval, ZSet,
};

/// The cylinder set `[word]_offset`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Serialize)]
pub struct CylinderSet {
    pub word: Block,
    pub offset: i64,
}

impl CylinderSet {
    pub fn new(word: Block, offset: i64) -> Self {
        Self { word, offset }
    }

    /// `[B_k]_0`.
    pub fn block(k: u32) -> Result<Self> {
        Ok(Self::new(chacon_block(k)?, 0))
    }

    /// `g·[A]_k = [A]_{k-g}`.
    pub fn shifted(&self, g: i64) -> Result<Self> {
        let offset = self
            .offset
            .checked_sub(g)
            .ok_or(Error::Overflow("cylinder shift"))?;
        Ok(Self::new(self.word.clone(), offset))
    }

    /// Nonempty as a subset of the subshift iff the word occurs in `ω`;
    /// a hit in the window certifies it.
    pub fn occurs_in(&self, w: &Window) -> bool {
        !occurrences(&self.word, w).is_empty()
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    BruteForce,
    Structured,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum ReturnSetParams {
    Cylinders {
        a: CylinderSet,
        b: CylinderSet,
        depth: u32,
    },
    Structured {
        level: u32,
        shift: i64,
        trunc: u32,
    },
    Intersection {
        level: u32,
        trunc: u32,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ReturnSetReport {
    pub set: ZSet,
    pub method: Method,
    pub params: ReturnSetParams,
}

/// Shifts `n` for which the merged pattern of `a` (at `a.offset - n`) and
/// `b` (at `b.offset`) is short enough that its occurrence in `ω` is decided
/// inside the depth-`depth` window.
pub fn reachable_range(a: &CylinderSet, b: &CylinderSet, depth: u32) -> Result<Interval> {
    let reach = block_length_i64(depth.saturating_sub(1))? + 1;
    let la = a.word.len() as i64;
    let lb = b.word.len() as i64;
    let base = a.offset - b.offset;
    Ok(Interval {
        lo: base - reach + la,
        hi: base + reach - lb,
    })
}

fn span(a: &CylinderSet, b: &CylinderSet, n: i64) -> i64 {
    let a_start = a.offset - n;
    let a_end = a_start + a.word.len() as i64;
    let b_end = b.offset + b.word.len() as i64;
    a_end.max(b_end) - a_start.min(b.offset)
}

/// `N(a, b) ∩ range` by exhaustive placement search in the depth-`depth`
/// window.
pub fn return_set_bruteforce(
    a: &CylinderSet,
    b: &CylinderSet,
    depth: u32,
    range: Interval,
) -> Result<ReturnSetReport> {
    let w = window(depth)?;
    let occ_a = occurrences(&a.word, &w);
    let occ_b = occurrences(&b.word, &w);
    for (c, occ) in [(a, &occ_a), (b, &occ_b)] {
        if occ.is_empty() {
            return Err(Error::EmptyCylinder {
                word: c.word.to_string(),
                depth,
            });
        }
    }
    let reachable = reachable_range(a, b, depth)?;
    if !range.is_empty() && !reachable.contains_interval(&range) {
        let shift = if reachable.contains(range.lo) {
            range.hi
        } else {
            range.lo
        };
        return Err(Error::UnreachableRange {
            shift,
            span: span(a, b, shift),
            depth,
            reach: w.certified_word_len(),
        });
    }
    // n works iff some occurrence r of b pairs with an occurrence of a at
    // r - b.offset + a.offset - n.
    let elements = range.iter().filter(|&n| {
        occ_b
            .iter()
            .any(|&r| occ_a.binary_search(&(r - b.offset + a.offset - n)).is_ok())
    });
    Ok(ReturnSetReport {
        set: ZSet::clipped(range, elements),
        method: Method::BruteForce,
        params: ReturnSetParams::Cylinders {
            a: a.clone(),
            b: b.clone(),
            depth,
        },
    })
}

/// `N([B_k], m[B_k]) ∩ range` from the structured sum
/// `m + (H_k ⊕ ⋯ ⊕ H_{trunc-1})`.
pub fn return_set_structured(
    k: u32,
    m: i64,
    trunc: u32,
    range: Interval,
) -> Result<ReturnSetReport> {
    let base = truncated_h_sum(k, trunc, range.shift(-m)?)?;
    Ok(ReturnSetReport {
        set: base.translate(m)?,
        method: Method::Structured,
        params: ReturnSetParams::Structured {
            level: k,
            shift: m,
            trunc,
        },
    })
}

/// `𝓜_k = ⋂_{|j| ≤ l_k} N([B_k], j[B_k])` on `range`, from the structured
/// return sets.
pub fn script_m(k: u32, trunc: u32, range: Interval) -> Result<ReturnSetReport> {
    let lk = block_length_i64(k)?;
    let mut acc: Option<ZSet> = None;
    for j in -lk..=lk {
        let next = return_set_structured(k, j, trunc, range)?.set;
        acc = Some(match acc {
            None => next,
            Some(prev) => prev.intersection(&next),
        });
    }
    let set = acc.expect("at least one shift");
    if set.certified_range().is_empty() {
        return Err(Error::NotCertified(format!(
            "script_m({k}, {trunc}) on {range:?}: certified half-width {} minus l_{k} = {lk}",
            certified_half_width(k, trunc)
        )));
    }
    Ok(ReturnSetReport {
        set,
        method: Method::Structured,
        params: ReturnSetParams::Intersection { level: k, trunc },
    })
}

/// `m + a = b + n`, a common element of `m + N_k` and `n + N_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct WeakMixingWitness {
    pub level: u32,
    pub m: i64,
    pub n: i64,
    pub a: i64,
    pub b: i64,
    pub value: i64,
}

/// For `m > n` (swapped otherwise), `a = Σ_{i=k}^{k+(m-n)-1} l_i` and
/// `b = a + (m - n)` both lie in `N_k = H_k ⊕ H_{k+1} ⊕ ⋯`, hence
/// `m + a = b + n ∈ (m + N_k) ∩ (n + N_k)`.
pub fn weak_mixing_witness(k: u32, m: i64, n: i64) -> Result<WeakMixingWitness> {
    if m == n {
        return Err(Error::EqualShifts(m));
    }
    let (m, n) = if m > n { (m, n) } else { (n, m) };
    let gap = u32::try_from(m - n).map_err(|_| Error::Overflow("weak_mixing_witness"))?;
    let mut a = 0i64;
    for i in k..k + gap {
        a = a
            .checked_add(block_length_i64(i)?)
            .ok_or(Error::Overflow("weak_mixing_witness"))?;
    }
    let b = a + (m - n);
    let value = m
        .checked_add(a)
        .ok_or(Error::Overflow("weak_mixing_witness"))?;
    let dec = HSum::new(k)?;
    if !dec.contains(&BigInt::from(a)) || !dec.contains(&BigInt::from(b)) {
        return Err(Error::ClaimFalsified(format!(
            "a = {a} or b = {b} is not in H_{k} ⊕ H_{} ⊕ ⋯",
            k + 1
        )));
    }
    debug_assert_eq!(value, b + n);
    Ok(WeakMixingWitness {
        level: k,
        m,
        n,
        a,
        b,
        value,
    })
}

/// `[A]_offset ⊆ shift·[B_level]`: every occurrence of `A` sits inside a copy
/// of `B_level` starting `relative` letters from it (`relative ≤ 0`).
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BlockCover {
    pub level: u32,
    pub relative: i64,
    pub shift: i64,
    pub occurrences_checked: usize,
}

/// Searches levels `1..=depth` for a block cover of `a`, auditing every
/// occurrence of the word far enough from the window edge that all candidate
/// placements of `B_level` fit.
///
/// Words that also occur as boundary-crossing or spacer patterns (a lone
/// `1`, for instance) admit no fixed-offset cover; that is reported as
/// [`Error::NoCoverFound`].
pub fn cylinder_to_block_cover(a: &CylinderSet, depth: u32) -> Result<BlockCover> {
    let w = window(depth)?;
    let occ = occurrences(&a.word, &w);
    if occ.is_empty() {
        return Err(Error::EmptyCylinder {
            word: a.word.to_string(),
            depth,
        });
    }
    let la = a.word.len() as i64;
    for level in 1..=depth {
        let lb = block_length_i64(level)?;
        if lb < la {
            continue;
        }
        let block = chacon_block(level)?;
        let interior: Vec<i64> = occ
            .iter()
            .copied()
            .filter(|&q| q - (lb - la) >= w.start() && q + lb <= w.end())
            .collect();
        if interior.is_empty() {
            break;
        }
        let mut candidates: Vec<i64> = ((la - lb)..=0).collect();
        for &q in &interior {
            candidates.retain(|&t| w.slice(q + t, q + t + lb) == Some(block.letters()));
            if candidates.is_empty() {
                break;
            }
        }
        if let Some(&relative) = candidates.last() {
            return Ok(BlockCover {
                level,
                relative,
                shift: -(a.offset + relative),
                occurrences_checked: interior.len(),
            });
        }
    }
    Err(Error::NoCoverFound {
        word: a.word.to_string(),
        depth,
    })
}

/// A block cylinder inside `[A]_offset`: the smallest `B_level` containing
/// the word, placed so that the word lands on `offset`.
pub fn block_inside_cylinder(a: &CylinderSet, depth: u32) -> Result<CylinderSet> {
    for level in 1..=depth {
        let block = chacon_block(level)?;
        if let Some(pos) = block
            .letters()
            .windows(a.word.len())
            .position(|s| s == a.word.letters())
        {
            return Ok(CylinderSet::new(block, a.offset - pos as i64));
        }
    }
    Err(Error::NoCoverFound {
        word: a.word.to_string(),
        depth,
    })
}

/// Checks `g + N(a, b) = N(a, g·b)` on `range`, both sides by brute force.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ShiftIdentity {
    pub holds: bool,
    pub compared: Interval,
    pub only_translated: Vec<i64>,
    pub only_shifted: Vec<i64>,
}

pub fn shift_identity_check(
    a: &CylinderSet,
    b: &CylinderSet,
    g: i64,
    depth: u32,
    range: Interval,
) -> Result<ShiftIdentity> {
    let lhs = return_set_bruteforce(a, b, depth, range.shift(-g)?)?
        .set
        .translate(g)?;
    let rhs = return_set_bruteforce(a, &b.shifted(g)?, depth, range)?.set;
    let compared = lhs.certified_range().intersect(&rhs.certified_range());
    let (only_translated, only_shifted) = lhs.difference_on(&rhs, compared);
    Ok(ShiftIdentity {
        holds: only_translated.is_empty() && only_shifted.is_empty(),
        compared,
        only_translated,
        only_shifted,
    })
}

/// A shift `γ` with `γ·u ∩ v_i ≠ ∅` for every `i`, smallest `|γ|` first.
pub fn elasticity_witness(
    u: &CylinderSet,
    vs: &[CylinderSet],
    depth: u32,
    range: Interval,
) -> Result<Option<i64>> {
    let mut acc: Option<ZSet> = None;
    for v in vs {
        let next = return_set_bruteforce(u, v, depth, range)?.set;
        acc = Some(match acc {
            None => next,
            Some(prev) => prev.intersection(&next),
        });
    }
    Ok(acc.and_then(|s| closest_to_zero(s.elements())))
}

/// Smallest absolute value, positive before negative.
fn closest_to_zero(xs: &[i64]) -> Option<i64> {
    xs.iter()
        .copied()
        .min_by_key(|&x| (x.unsigned_abs(), x < 0))
}

fn serialize_bigints<S: Serializer>(xs: &[BigInt], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(xs.iter().map(|x| x.to_string()))
}

fn serialize_bigint<S: Serializer>(x: &BigInt, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(x)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ConstructionMethod {
    ChaconIntervals,
    GenericBasis,
}

/// How one piece of a thick-set construction was obtained.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
#[serde(tag = "kind", rename_all = "snake_case")]
pub enum PieceProvenance {
    /// A run found by enumerating `𝓜_level` at a truncation level.
    EnumeratedRun { trunc: u32, certified: Interval },
    /// The middle of the run `⊕_{i=level}^{last_level} {l_i, l_i + 1}` of
    /// length `2 l_level + len`, whose every element sits at the centre of a
    /// window of width `2 l_level + 1` inside `N_level`.
    IntervalRun {
        last_level: u32,
        #[serde(serialize_with = "serialize_bigint")]
        run_start: BigInt,
        run_len: u64,
    },
    /// `N_m = {δ_m - γ_i}` from the enumerated basis.
    Basis {
        delta: i64,
        gammas: Vec<i64>,
        basis: Vec<CylinderSet>,
        certified: Interval,
    },
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickPiece {
    pub level: u32,
    #[serde(serialize_with = "serialize_bigints")]
    pub elements: Vec<BigInt>,
    pub provenance: PieceProvenance,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ThickSetConstruction {
    pub method: ConstructionMethod,
    pub pieces: Vec<ThickPiece>,
    #[serde(serialize_with = "serialize_bigints")]
    pub union: Vec<BigInt>,
    /// Pairs of piece indices sharing an element.
    pub overlaps: Vec<(usize, usize)>,
}

impl ThickSetConstruction {
    fn assemble(method: ConstructionMethod, pieces: Vec<ThickPiece>) -> Self {
        let mut union: Vec<BigInt> = pieces.iter().flat_map(|p| p.elements.clone()).collect();
        union.sort();
        union.dedup();
        let mut overlaps = Vec::new();
        for i in 0..pieces.len() {
            for j in i + 1..pieces.len() {
                if pieces[i]
                    .elements
                    .iter()
                    .any(|x| pieces[j].elements.contains(x))
                {
                    overlaps.push((i, j));
                }
            }
        }
        Self {
            method,
            pieces,
            union,
            overlaps,
        }
    }

    /// Maximal runs of the union, as `(start, length)`.
    pub fn union_runs(&self) -> Vec<(BigInt, u64)> {
        maximal_runs(&self.union)
    }

    /// The union as `i64` values, when every element fits.
    pub fn union_i64(&self) -> Option<Vec<i64>> {
        self.union.iter().map(|x| x.to_i64()).collect()
    }
}

/// Exact membership in `𝓜_k` for integers of any size: `x - j ∈ N_k` for
/// every `|j| ≤ l_k`.
pub fn in_script_m(k: u32, x: &BigInt) -> Result<bool> {
    let dec = HSum::new(k)?;
    let lk = block_length(k);
    let mut j = -lk.clone();
    while j <= lk {
        if !dec.contains(&(x - &j)) {
            return Ok(false);
        }
        j += 1;
    }
    Ok(true)
}

fn run_near_zero(set: &ZSet, len: u64) -> Option<i64> {
    let mut best: Option<i64> = None;
    for (start, run_len) in maximal_runs(set.elements()) {
        if run_len < len {
            continue;
        }
        let last_start = start + (run_len - len) as i64;
        let s = (-((len as i64 - 1) / 2)).clamp(start, last_start);
        let key = |s: i64| {
            (
                s.unsigned_abs().max((s + len as i64 - 1).unsigned_abs()),
                s < 0,
            )
        };
        if best.is_none_or(|b| key(s) < key(b)) {
            best = Some(s);
        }
    }
    best
}

/// Picks a run of length `i` inside `𝓜_i` for `i = 1..=m_max`.
///
/// Each level is first searched in the enumerated `𝓜_i` on the certified
/// range of the truncation `trunc`. When that territory holds no such run,
/// the piece is taken from the middle of an interval run of length
/// `2 l_i + i`, which lies in `N_i` and therefore puts each chosen element
/// in `𝓜_i`. Every element is re-verified with the exact membership test
/// before it is accepted.
pub fn build_thick_n_chacon(m_max: u32, trunc: u32) -> Result<ThickSetConstruction> {
    if m_max == 0 {
        return Err(Error::InvalidParameter {
            name: "m_max",
            reason: "need at least one level".into(),
        });
    }
    if m_max + 2 > trunc {
        return Err(Error::InvalidParameter {
            name: "trunc",
            reason: format!("need m_max <= trunc - 2, got m_max = {m_max}, trunc = {trunc}"),
        });
    }
    let mut pieces = Vec::new();
    for level in 1..=m_max {
        let len = level as u64;
        let c = certified_half_width(level, trunc)
            .to_i64()
            .ok_or(Error::Overflow("certified range"))?;
        let enumerated = script_m(level, trunc, Interval::symmetric(c))
            .ok()
            .map(|r| r.set.certified_part())
            .and_then(|m| run_near_zero(&m, len).map(|s| (s, m.certified_range())));
        let piece = match enumerated {
            Some((s, certified)) => ThickPiece {
                level,
                elements: (s..s + len as i64).map(BigInt::from).collect(),
                provenance: PieceProvenance::EnumeratedRun { trunc, certified },
            },
            None => {
                let lk = block_length(level);
                let run_len = lk.to_u32().ok_or(Error::Overflow("run length"))? * 2 + level;
                let run = interval_run_big(level, run_len)?;
                let first = &run.start + &lk;
                ThickPiece {
                    level,
                    elements: (0..len).map(|i| &first + BigInt::from(i)).collect(),
                    provenance: PieceProvenance::IntervalRun {
                        last_level: level + run_len - 2,
                        run_start: run.start,
                        run_len: run.len,
                    },
                }
            }
        };
        for x in &piece.elements {
            if !in_script_m(level, x)? {
                return Err(Error::ClaimFalsified(format!(
                    "{x} was chosen for level {level} but is not in the intersection set"
                )));
            }
        }
        pieces.push(piece);
    }
    Ok(ThickSetConstruction::assemble(
        ConstructionMethod::ChaconIntervals,
        pieces,
    ))
}

/// Elements of a construction outside `N([B_k], shift·[B_k]) = shift + N_k`.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct MixingDefect {
    pub level: u32,
    pub shift: i64,
    pub ell: u32,
    #[serde(serialize_with = "serialize_bigints")]
    pub outside: Vec<BigInt>,
    /// `ℓ(ℓ - 1)/2`.
    pub bound: u64,
}

/// Counts the elements of `n` missing from `N([B_k], shift·[B_k])`.
///
/// When `ℓ ≥ k` and `|shift| ≤ l_ℓ` that return set contains `𝓜_ℓ`, so only
/// pieces below level `ℓ` can contribute and at most `ℓ(ℓ - 1)/2` elements
/// are missing.
pub fn mixing_defect(
    n: &ThickSetConstruction,
    k: u32,
    shift: i64,
    ell: u32,
) -> Result<MixingDefect> {
    if ell < k || BigInt::from(shift).abs() > block_length(ell) {
        return Err(Error::InvalidParameter {
            name: "ell",
            reason: format!(
                "need ell >= {k} and |shift| <= l_ell, got ell = {ell}, shift = {shift}"
            ),
        });
    }
    let dec = HSum::new(k)?;
    let outside = n
        .union
        .iter()
        .filter(|x| !dec.contains(&(*x - shift)))
        .cloned()
        .collect();
    let ell64 = ell as u64;
    Ok(MixingDefect {
        level: k,
        shift,
        ell,
        outside,
        bound: ell64 * (ell64.saturating_sub(1)) / 2,
    })
}

/// The integers in the order `0, 1, -1, 2, -2, …`.
pub fn gamma(i: u32) -> i64 {
    let i = i as i64;
    if i % 2 == 1 {
        (i + 1) / 2
    } else {
        -(i / 2)
    }
}

/// Nonempty cylinders `[w]_0` with `|w| ≤ max_len`, ordered by word length
/// then lexicographically.
pub fn cylinder_basis(max_len: usize, depth: u32) -> Result<Vec<CylinderSet>> {
    let w = window(depth)?;
    let mut out = Vec::new();
    for len in 1..=max_len {
        for bits in 0u64..(1u64 << len) {
            let letters: Vec<u8> = (0..len).rev().map(|i| ((bits >> i) & 1) as u8).collect();
            let c = CylinderSet::new(Block::new(letters)?, 0);
            if c.occurs_in(&w) {
                out.push(c);
            }
        }
    }
    Ok(out)
}

/// Builds `N = ⋃ N_m`, `N_m = {δ_m - γ_i : 0 ≤ i ≤ m}` with `δ_m` in
/// `𝓜_m ∩ ⋂_{i ≤ m} (γ_i + 𝓜_m)` and
/// `𝓜_m = ⋂_{i, j ≤ m} N(U_i, U_j)` over the cylinder basis, all by brute
/// force in the depth-`depth` window.
pub fn build_thick_n_generic(
    basis_depth: usize,
    m_max: u32,
    depth: u32,
) -> Result<ThickSetConstruction> {
    let basis = cylinder_basis(basis_depth, depth)?;
    if basis.len() < m_max as usize {
        return Err(Error::InvalidParameter {
            name: "basis_depth",
            reason: format!("only {} basis cylinders for m_max = {m_max}", basis.len()),
        });
    }
    let reach = block_length_i64(depth.saturating_sub(1))? + 1;
    let max_len = basis
        .iter()
        .take(m_max as usize)
        .map(|c| c.word.len() as i64)
        .max()
        .unwrap_or(1);
    let range = Interval::symmetric(reach - max_len);
    let mut script: Option<ZSet> = None;
    let mut pieces = Vec::new();
    for m in 1..=m_max {
        let new = &basis[m as usize - 1];
        for other in &basis[..m as usize] {
            for (u, v) in [(new, other), (other, new)] {
                let n_uv = return_set_bruteforce(u, v, depth, range)?.set;
                script = Some(match script {
                    None => n_uv,
                    Some(prev) => prev.intersection(&n_uv),
                });
            }
        }
        let current = script.as_ref().expect("m >= 1");
        let gammas: Vec<i64> = (0..=m).map(gamma).collect();
        let candidates: Vec<i64> = current
            .iter()
            .filter(|&x| gammas.iter().all(|g| current.contains(x - g)))
            .collect();
        let delta = closest_to_zero(&candidates).ok_or(Error::EmptyIntersection { level: m })?;
        let mut elements: Vec<BigInt> = gammas.iter().map(|g| BigInt::from(delta - g)).collect();
        elements.sort();
        elements.dedup();
        pieces.push(ThickPiece {
            level: m,
            elements,
            provenance: PieceProvenance::Basis {
                delta,
                gammas: gammas[1..].to_vec(),
                basis: basis[..m as usize].to_vec(),
                certified: current.certified_range(),
            },
        });
    }
    Ok(ThickSetConstruction::assemble(
        ConstructionMethod::GenericBasis,
        pieces,
    ))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::zsets::{gap_element, h_set, interval_run};

    fn iv(lo: i64, hi: i64) -> Interval {
        Interval::new(lo, hi).unwrap()
    }

    fn cyl(w: &str, off: i64) -> CylinderSet {
        CylinderSet::new(w.parse().unwrap(), off)
    }

    #[test]
    fn h1_shifts_are_returns_but_not_all_of_them() {
        let b1 = CylinderSet::block(1).unwrap();
        let got = return_set_bruteforce(&b1, &b1, 4, iv(-9, 9)).unwrap().set;
        assert!(h_set(1).unwrap().is_subset_on(&got, iv(-9, 9)));
        // 17 - 9 = 8: the last B_1 of one B_2 against the second B_1 of the
        // next B_2.
        assert_eq!(got.elements(), &[-9, -8, -5, -4, 0, 4, 5, 8, 9]);
    }

    #[test]
    fn zero_is_always_a_return() {
        for c in [cyl("0", 0), cyl("1", 3), cyl("0100", -2)] {
            let r = return_set_bruteforce(&c, &c, 4, iv(-5, 5)).unwrap().set;
            assert!(r.contains(0));
        }
    }

    #[test]
    fn gap_three_is_not_a_return() {
        let b1 = CylinderSet::block(1).unwrap();
        let r = return_set_bruteforce(&b1, &b1, 5, iv(-10, 10)).unwrap().set;
        assert!(!r.contains(3));
    }

    #[test]
    fn unreachable_range_is_an_error() {
        let b1 = CylinderSet::block(1).unwrap();
        let err = return_set_bruteforce(&b1, &b1, 2, iv(-100, 100)).unwrap_err();
        assert!(
            matches!(err, Error::UnreachableRange { depth: 2, .. }),
            "{err:?}"
        );
    }

    #[test]
    fn empty_cylinder_is_an_error() {
        let c = cyl("11", 0);
        assert!(matches!(
            return_set_bruteforce(&c, &c, 3, iv(0, 0)),
            Err(Error::EmptyCylinder { .. })
        ));
    }

    #[test]
    fn structured_examples() {
        let s = return_set_structured(1, 0, 3, iv(-9, 9)).unwrap().set;
        let b1 = CylinderSet::block(1).unwrap();
        let brute = return_set_bruteforce(&b1, &b1, 5, iv(-9, 9)).unwrap().set;
        assert_eq!(s.elements(), brute.elements());

        let shifted = return_set_structured(1, 4, 3, iv(-5, 13)).unwrap().set;
        let base = return_set_structured(1, 0, 3, iv(-9, 9)).unwrap().set;
        assert_eq!(shifted.elements(), base.translate(4).unwrap().elements());

        let s2 = return_set_structured(2, 0, 4, iv(-30, 30)).unwrap().set;
        assert!(h_set(2).unwrap().is_subset_on(&s2, iv(-30, 30)));
    }

    #[test]
    fn script_m_needs_certified_room() {
        assert!(matches!(
            script_m(3, 3, iv(-10, 10)),
            Err(Error::NotCertified(_))
        ));
    }

    #[test]
    fn script_m_level_one_is_nonempty_and_excludes_zero() {
        let c = certified_half_width(1, 6).to_i64().unwrap();
        let m1 = script_m(1, 6, Interval::symmetric(c))
            .unwrap()
            .set
            .certified_part();
        assert!(!m1.is_empty());
        assert!(!m1.contains(0));
        // Frozen: the run 17..=19 is the length-3 interval run at level 1,
        // but 𝓜_1 needs 9 consecutive returns around each member.
        assert!(interval_run(1, 3).unwrap().iter().all(|x| !m1.contains(x)));
    }

    #[test]
    fn weak_mixing_examples() {
        let w = weak_mixing_witness(1, 1, 0).unwrap();
        assert_eq!((w.a, w.b, w.value), (4, 5, 5));
        let w = weak_mixing_witness(1, 2, 0).unwrap();
        assert_eq!((w.a, w.b, w.value), (17, 19, 19));
        let w = weak_mixing_witness(2, 1, 0).unwrap();
        assert_eq!(w.value, 14);
        let swapped = weak_mixing_witness(1, 0, 2).unwrap();
        assert_eq!((swapped.m, swapped.n, swapped.value), (2, 0, 19));
        assert_eq!(weak_mixing_witness(1, 3, 3), Err(Error::EqualShifts(3)));
    }

    #[test]
    fn weak_mixing_witness_is_a_common_return() {
        let b1 = CylinderSet::block(1).unwrap();
        for (m, n) in [(1, 0), (2, 0)] {
            let w = weak_mixing_witness(1, m, n).unwrap();
            let r = iv(w.value, w.value);
            for shift in [m, n] {
                let set = return_set_bruteforce(&b1, &b1.shifted(shift).unwrap(), 4, r)
                    .unwrap()
                    .set;
                assert!(set.contains(w.value), "m={m} n={n} shift={shift}");
            }
        }
    }

    #[test]
    fn block_cover_examples() {
        let b1 = CylinderSet::block(1).unwrap();
        let cover = cylinder_to_block_cover(&b1, 3).unwrap();
        assert_eq!((cover.level, cover.shift), (1, 0));

        // A lone 1 is either inside a B_1 or a spacer; no single offset works.
        assert!(matches!(
            cylinder_to_block_cover(&cyl("1", 0), 3),
            Err(Error::NoCoverFound { .. })
        ));

        // "1010" shows up both inside B_2 and across a B_2-spacer junction.
        assert!(matches!(
            cylinder_to_block_cover(&cyl("1010", 0), 4),
            Err(Error::NoCoverFound { .. })
        ));

        let b2 = CylinderSet::new(chacon_block(2).unwrap(), 3);
        let c = cylinder_to_block_cover(&b2, 4).unwrap();
        assert_eq!((c.level, c.relative, c.shift), (2, 0, -3));
    }

    #[test]
    fn block_inside_cylinder_examples() {
        let inner = block_inside_cylinder(&cyl("1", 0), 3).unwrap();
        assert_eq!(inner, cyl("0010", -2));
        let inner = block_inside_cylinder(&cyl("1010", 5), 3).unwrap();
        assert_eq!(inner.word, chacon_block(2).unwrap());
        assert_eq!(inner.offset, 5 - 6);
    }

    #[test]
    fn shift_identity_examples() {
        let b1 = CylinderSet::block(1).unwrap();
        for g in [0, 4] {
            assert!(
                shift_identity_check(&b1, &b1, g, 4, iv(-20, 20))
                    .unwrap()
                    .holds
            );
        }
        assert!(
            shift_identity_check(&cyl("0", 0), &cyl("1", 0), -2, 3, iv(-10, 10))
                .unwrap()
                .holds
        );
    }

    #[test]
    fn gap_elements_are_not_returns() {
        let b1 = CylinderSet::block(1).unwrap();
        for m in 1..=3 {
            let g = gap_element(m).unwrap();
            let r = return_set_bruteforce(&b1, &b1, m + 3, iv(-g, g))
                .unwrap()
                .set;
            assert!(!r.contains(g) && !r.contains(-g), "m={m}");
        }
    }

    #[test]
    fn gamma_order() {
        let g: Vec<i64> = (0..7).map(gamma).collect();
        assert_eq!(g, vec![0, 1, -1, 2, -2, 3, -3]);
    }

    #[test]
    fn basis_order_skips_empty_cylinders() {
        let b: Vec<String> = cylinder_basis(2, 4)
            .unwrap()
            .iter()
            .map(|c| c.word.to_string())
            .collect();
        assert_eq!(b, vec!["0", "1", "00", "01", "10"]);
    }

    #[test]
    fn generic_level_one() {
        let n = build_thick_n_generic(1, 1, 4).unwrap();
        let piece = &n.pieces[0];
        let PieceProvenance::Basis { delta, .. } = piece.provenance else {
            panic!("wrong provenance");
        };
        assert_eq!(
            piece.elements,
            vec![BigInt::from(delta - 1), BigInt::from(delta)]
        );
    }

    #[test]
    fn chacon_construction_small() {
        let n = build_thick_n_chacon(1, 4).unwrap();
        assert_eq!(n.pieces.len(), 1);
        assert_eq!(n.pieces[0].elements.len(), 1);
        assert!(build_thick_n_chacon(3, 4).is_err());
    }

    #[test]
    fn elasticity_on_cylinders() {
        let u = cyl("0", 0);
        let vs = [cyl("1", 0), cyl("00", 2), cyl("010", -1)];
        let g = elasticity_witness(&u, &vs, 5, iv(-60, 60))
            .unwrap()
            .unwrap();
        for v in &vs {
            let r = return_set_bruteforce(&u, v, 5, iv(g, g)).unwrap().set;
            assert!(r.contains(g));
        }
    }
}
