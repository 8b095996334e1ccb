//! `SL(2,Z)` acting on the torus `R²/Z²`, over exact rationals.
//!
//! Rectangles are open boxes inside the fundamental domain `[0,1)²`.
//! Feasibility questions ("is there `p ∈ V` with `M p ∈ W` mod 1?") are
//! answered by enumerating integer wraparound residues and clipping convex
//! polygons exactly, so a negative answer is a proof of emptiness.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};
use rand::Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};

pub type Rat = BigRational;

pub fn rat(n: i64, d: i64) -> Rat {
    Rat::new(BigInt::from(n), BigInt::from(d))
}

/// `p/q`, or `p` when `q = 1`.
pub fn format_rat(r: &Rat) -> String {
    r.to_string()
}

/// Parses `p/q` or an integer.
pub fn parse_rat(s: &str) -> Result<Rat> {
    let bad = || Error::InvalidParameter {
        name: "rational",
        reason: format!("cannot parse {s:?}"),
    };
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rat::new(n, d))
        }
        None => Ok(Rat::from_integer(s.trim().parse().map_err(|_| bad())?)),
    }
}

pub(crate) fn ser_rat<S: Serializer>(r: &Rat, s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_str(r)
}

fn frac(r: &Rat) -> Rat {
    r - r.floor()
}

/// A point of the torus with both coordinates in `[0, 1)`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct TorusPoint {
    x: Rat,
    y: Rat,
}

impl TorusPoint {
    /// Reduces both coordinates mod 1.
    pub fn new(x: Rat, y: Rat) -> Self {
        Self {
            x: frac(&x),
            y: frac(&y),
        }
    }

    pub fn x(&self) -> &Rat {
        &self.x
    }

    pub fn y(&self) -> &Rat {
        &self.y
    }
}

impl fmt::Debug for TorusPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({}, {})", self.x, self.y)
    }
}

impl Serialize for TorusPoint {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("TorusPoint", 2)?;
        st.serialize_field("x", &self.x.to_string())?;
        st.serialize_field("y", &self.y.to_string())?;
        st.end()
    }
}

/// The open box `(x_lo, x_hi) × (y_lo, y_hi)` with `0 ≤ lo < hi ≤ 1`.
#[derive(Clone, PartialEq, Eq, Hash)]
pub struct Rect {
    pub x_lo: Rat,
    pub x_hi: Rat,
    pub y_lo: Rat,
    pub y_hi: Rat,
}

impl Rect {
    pub fn new(x_lo: Rat, x_hi: Rat, y_lo: Rat, y_hi: Rat) -> Result<Self> {
        for (lo, hi, axis) in [(&x_lo, &x_hi, "x"), (&y_lo, &y_hi, "y")] {
            if lo.is_negative() || hi > &Rat::one() || lo >= hi {
                return Err(Error::InvalidRect(format!(
                    "{axis} interval ({lo}, {hi}) is not inside [0, 1] with positive length"
                )));
            }
        }
        Ok(Self {
            x_lo,
            x_hi,
            y_lo,
            y_hi,
        })
    }

    /// `(lo, hi)²`.
    pub fn square(lo: Rat, hi: Rat) -> Result<Self> {
        Self::new(lo.clone(), hi.clone(), lo, hi)
    }

    pub fn width(&self) -> Rat {
        &self.x_hi - &self.x_lo
    }

    pub fn height(&self) -> Rat {
        &self.y_hi - &self.y_lo
    }

    /// Strict membership of a torus point.
    pub fn contains(&self, p: &TorusPoint) -> bool {
        &self.x_lo < p.x() && p.x() < &self.x_hi && &self.y_lo < p.y() && p.y() < &self.y_hi
    }

    pub fn midpoint(&self) -> TorusPoint {
        let two = rat(2, 1);
        TorusPoint::new(
            (&self.x_lo + &self.x_hi) / &two,
            (&self.y_lo + &self.y_hi) / &two,
        )
    }

    fn corners(&self) -> Vec<Pt> {
        vec![
            (self.x_lo.clone(), self.y_lo.clone()),
            (self.x_hi.clone(), self.y_lo.clone()),
            (self.x_hi.clone(), self.y_hi.clone()),
            (self.x_lo.clone(), self.y_hi.clone()),
        ]
    }
}

impl fmt::Debug for Rect {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "({}, {}) × ({}, {})",
            self.x_lo, self.x_hi, self.y_lo, self.y_hi
        )
    }
}

impl Serialize for Rect {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Rect", 4)?;
        st.serialize_field("x_lo", &self.x_lo.to_string())?;
        st.serialize_field("x_hi", &self.x_hi.to_string())?;
        st.serialize_field("y_lo", &self.y_lo.to_string())?;
        st.serialize_field("y_hi", &self.y_hi.to_string())?;
        st.end()
    }
}

/// A rectangle with sides `(i/q, j/q)`, `q ≤ max_den`, drawn independently
/// per axis.
pub fn random_rect<R: Rng>(rng: &mut R, max_den: i64) -> Rect {
    let mut side = || {
        let q = rng.gen_range(2..=max_den.max(2));
        let i = rng.gen_range(0..q);
        let j = rng.gen_range(i + 1..=q);
        (rat(i, q), rat(j, q))
    };
    let (x_lo, x_hi) = side();
    let (y_lo, y_hi) = side();
    Rect::new(x_lo, x_hi, y_lo, y_hi).expect("valid by construction")
}

/// `[[a, b], [c, d]]` with `ad - bc = 1`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct Mat2Int {
    a: i64,
    b: i64,
    c: i64,
    d: i64,
}

impl Mat2Int {
    pub fn new(a: i64, b: i64, c: i64, d: i64) -> Result<Self> {
        let det = (a as i128) * (d as i128) - (b as i128) * (c as i128);
        if det != 1 {
            return Err(Error::NotUnimodular(
                i64::try_from(det).unwrap_or(if det > 0 { i64::MAX } else { i64::MIN }),
            ));
        }
        Ok(Self { a, b, c, d })
    }

    pub fn identity() -> Self {
        Self {
            a: 1,
            b: 0,
            c: 0,
            d: 1,
        }
    }

    /// `[[1, d], [0, 1]]`, which is also the matrix `g_d`.
    pub fn horizontal_shear(d: i64) -> Self {
        Self {
            a: 1,
            b: d,
            c: 0,
            d: 1,
        }
    }

    /// `[[1, 0], [c, 1]]`.
    pub fn vertical_shear(c: i64) -> Self {
        Self {
            a: 1,
            b: 0,
            c,
            d: 1,
        }
    }

    /// `[[0, 1], [-1, 0]]`.
    pub fn rotation() -> Self {
        Self {
            a: 0,
            b: 1,
            c: -1,
            d: 0,
        }
    }

    pub fn entries(&self) -> [i64; 4] {
        [self.a, self.b, self.c, self.d]
    }

    pub fn det(&self) -> i128 {
        self.a as i128 * self.d as i128 - self.b as i128 * self.c as i128
    }

    pub fn mul(&self, o: &Mat2Int) -> Result<Mat2Int> {
        let e = |x: i64, y: i64, z: i64, w: i64| {
            x.checked_mul(y)
                .zip(z.checked_mul(w))
                .and_then(|(p, q)| p.checked_add(q))
                .ok_or(Error::Overflow("matrix product"))
        };
        Ok(Mat2Int {
            a: e(self.a, o.a, self.b, o.c)?,
            b: e(self.a, o.b, self.b, o.d)?,
            c: e(self.c, o.a, self.d, o.c)?,
            d: e(self.c, o.b, self.d, o.d)?,
        })
    }
}

impl fmt::Debug for Mat2Int {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "[[{}, {}], [{}, {}]]", self.a, self.b, self.c, self.d)
    }
}

/// Matrix-vector product reduced mod 1.
pub fn act(m: &Mat2Int, p: &TorusPoint) -> TorusPoint {
    let [a, b, c, d] = m.entries().map(|e| Rat::from_integer(BigInt::from(e)));
    TorusPoint::new(&a * p.x() + &b * p.y(), &c * p.x() + &d * p.y())
}

type Pt = (Rat, Rat);

/// Linear form `alpha·x + beta·y`.
fn eval(alpha: &Rat, beta: &Rat, p: &Pt) -> Rat {
    alpha * &p.0 + beta * &p.1
}

/// Sutherland–Hodgman step: keeps `alpha·x + beta·y ≤ bound`.
fn clip(poly: &[Pt], alpha: &Rat, beta: &Rat, bound: &Rat) -> Vec<Pt> {
    let n = poly.len();
    let mut out: Vec<Pt> = Vec::with_capacity(n + 1);
    for i in 0..n {
        let p = &poly[i];
        let q = &poly[(i + 1) % n];
        let fp = eval(alpha, beta, p) - bound;
        let fq = eval(alpha, beta, q) - bound;
        let p_in = !fp.is_positive();
        if p_in {
            out.push(p.clone());
        }
        if p_in != !fq.is_positive() {
            let t = &fp / (&fp - &fq);
            let cut = (&p.0 + (&q.0 - &p.0) * &t, &p.1 + (&q.1 - &p.1) * &t);
            if out.last() != Some(&cut) {
                out.push(cut);
            }
        }
    }
    while out.len() > 1 && out.first() == out.last() {
        out.pop();
    }
    out
}

/// Keeps `lo ≤ alpha·x + beta·y ≤ hi`.
fn clip_band(poly: &[Pt], alpha: &Rat, beta: &Rat, lo: &Rat, hi: &Rat) -> Vec<Pt> {
    let upper = clip(poly, alpha, beta, hi);
    clip(&upper, &-alpha, &-beta, &-lo)
}

fn twice_area(poly: &[Pt]) -> Rat {
    let n = poly.len();
    let mut acc = Rat::zero();
    for i in 0..n {
        let (p, q) = (&poly[i], &poly[(i + 1) % n]);
        acc += &p.0 * &q.1 - &q.0 * &p.1;
    }
    acc
}

/// Vertex average; interior for a convex polygon of positive area.
fn vertex_average(poly: &[Pt]) -> Pt {
    let n = Rat::from_integer(BigInt::from(poly.len()));
    let sx: Rat = poly.iter().map(|p| p.0.clone()).sum();
    let sy: Rat = poly.iter().map(|p| p.1.clone()).sum();
    (sx / &n, sy / n)
}

fn extremes(alpha: &Rat, beta: &Rat, poly: &[Pt]) -> (Rat, Rat) {
    let vals: Vec<Rat> = poly.iter().map(|p| eval(alpha, beta, p)).collect();
    let lo = vals.iter().min().expect("nonempty polygon").clone();
    let hi = vals.iter().max().expect("nonempty polygon").clone();
    (lo, hi)
}

/// Integers `j` for which `(lo - j, hi - j)` can meet `(w_lo, w_hi)`.
fn residues(lo: &Rat, hi: &Rat, w_lo: &Rat, w_hi: &Rat) -> std::ops::RangeInclusive<BigInt> {
    let first = (lo - w_hi).floor().to_integer();
    let last = (hi - w_lo).ceil().to_integer();
    first..=last
}

fn big_range(r: std::ops::RangeInclusive<BigInt>) -> impl Iterator<Item = BigInt> {
    let (mut cur, end) = r.into_inner();
    std::iter::from_fn(move || {
        if cur > end {
            return None;
        }
        let out = cur.clone();
        cur += 1;
        Some(out)
    })
}

/// A point `p ∈ v` with `act(m, p) ∈ w`, or `None` when none exists.
///
/// `M p ∈ w + (i, j)` is a parallelogram; for each residue pair that can
/// matter, `v` is clipped against it and the first piece of positive area
/// yields its vertex average. Residues are visited in increasing `(j, i)`,
/// so the answer is deterministic.
pub fn intersection_witness(m: &Mat2Int, v: &Rect, w: &Rect) -> Option<TorusPoint> {
    let [a, b, c, d] = m.entries().map(|e| Rat::from_integer(BigInt::from(e)));
    let base = v.corners();
    let (ylo, yhi) = extremes(&c, &d, &base);
    for j in big_range(residues(&ylo, &yhi, &w.y_lo, &w.y_hi)) {
        let j = Rat::from_integer(j);
        let band = clip_band(&base, &c, &d, &(&w.y_lo + &j), &(&w.y_hi + &j));
        if band.len() < 3 || twice_area(&band).is_zero() {
            continue;
        }
        let (xlo, xhi) = extremes(&a, &b, &band);
        for i in big_range(residues(&xlo, &xhi, &w.x_lo, &w.x_hi)) {
            let i = Rat::from_integer(i);
            let piece = clip_band(&band, &a, &b, &(&w.x_lo + &i), &(&w.x_hi + &i));
            if piece.len() < 3 || twice_area(&piece).is_zero() {
                continue;
            }
            let (x, y) = vertex_average(&piece);
            let p = TorusPoint::new(x, y);
            assert!(
                v.contains(&p) && w.contains(&act(m, &p)),
                "clipping produced a non-witness {p:?}"
            );
            return Some(p);
        }
    }
    None
}

/// Thresholds and the matrix found for a family of rectangle pairs.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct TransitivityWitness {
    pub matrix: Mat2Int,
    pub c: i64,
    pub d: i64,
    /// `⌊1/min source width⌋ + 1`, the least integer `c > 1/min width`.
    pub c_threshold: i64,
    /// `⌊1/min target height⌋ + 1`.
    pub d_threshold: i64,
    pub witnesses: Vec<TorusPoint>,
    /// `(c, d)` pairs examined, including the successful one.
    pub tried: u64,
}

fn least_integer_above_inverse(r: &Rat) -> Result<i64> {
    let inv = r.recip();
    let t = inv.floor().to_integer() + 1;
    i64::try_from(&t).map_err(|_| Error::Overflow("threshold"))
}

/// Searches `M = [[1, d], [0, 1]] · [[1, 0], [c, 1]]` with `M V_i ∩ W_i ≠ ∅`
/// for every pair, starting at the shear thresholds and walking outward
/// along anti-diagonals of `(c, d)`.
pub fn transitivity_witness(pairs: &[(Rect, Rect)], budget: u64) -> Result<TransitivityWitness> {
    if pairs.is_empty() {
        return Err(Error::InvalidParameter {
            name: "pairs",
            reason: "need at least one pair".into(),
        });
    }
    let min_width = pairs
        .iter()
        .map(|(v, _)| v.width())
        .min()
        .expect("nonempty");
    let min_height = pairs
        .iter()
        .map(|(_, w)| w.height())
        .min()
        .expect("nonempty");
    let c0 = least_integer_above_inverse(&min_width)?;
    let d0 = least_integer_above_inverse(&min_height)?;
    let mut tried = 0u64;
    for diag in 0i64.. {
        for dc in 0..=diag {
            if tried >= budget {
                return Err(Error::BudgetExhausted(budget));
            }
            tried += 1;
            let (c, d) = (c0 + dc, d0 + (diag - dc));
            let matrix = Mat2Int::horizontal_shear(d).mul(&Mat2Int::vertical_shear(c))?;
            let witnesses: Option<Vec<TorusPoint>> = pairs
                .iter()
                .map(|(v, w)| intersection_witness(&matrix, v, w))
                .collect();
            if let Some(witnesses) = witnesses {
                return Ok(TransitivityWitness {
                    matrix,
                    c,
                    d,
                    c_threshold: c0,
                    d_threshold: d0,
                    witnesses,
                    tried,
                });
            }
        }
    }
    unreachable!("the diagonal walk only ends through the budget")
}

/// `g_a U ∩ V = ∅` for every `a`, because `g_a(x, y) = (x + a y, y)` keeps
/// the `y` coordinate and the `y` intervals of `U` and `V` are disjoint.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct NonMixingCertificate {
    pub u: Rect,
    pub v: Rect,
    pub family: &'static str,
    /// The `y` band every `g_a U` lies in: the `y` interval of `U`.
    #[serde(serialize_with = "ser_pair")]
    pub image_band: (Rat, Rat),
    #[serde(serialize_with = "ser_pair")]
    pub target_band: (Rat, Rat),
    pub conclusion: &'static str,
}

fn ser_pair<S: Serializer>(p: &(Rat, Rat), s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq([p.0.to_string(), p.1.to_string()])
}

pub fn non_mixing_certificate(u: &Rect, v: &Rect) -> Result<NonMixingCertificate> {
    if !(u.y_hi <= v.y_lo || v.y_hi <= u.y_lo) {
        return Err(Error::PreconditionViolated(format!(
            "y intervals ({}, {}) and ({}, {}) overlap",
            u.y_lo, u.y_hi, v.y_lo, v.y_hi
        )));
    }
    Ok(NonMixingCertificate {
        u: u.clone(),
        v: v.clone(),
        family: "g_a = [[1, a], [0, 1]], a in Z",
        image_band: (u.y_lo.clone(), u.y_hi.clone()),
        target_band: (v.y_lo.clone(), v.y_hi.clone()),
        conclusion: "g_a U misses V for infinitely many a, so no finite exceptional set exists",
    })
}

/// The values `a` in `range` for which `g_a U ∩ V ≠ ∅`.
pub fn shear_hits(u: &Rect, v: &Rect, range: std::ops::RangeInclusive<i64>) -> Vec<i64> {
    range
        .filter(|&a| intersection_witness(&Mat2Int::horizontal_shear(a), u, v).is_some())
        .collect()
}

/// The two squares `U = (3/5, 4/5)²` and `V = (1/5, 2/5)²`.
pub fn standard_non_mixing_pair() -> (Rect, Rect) {
    (
        Rect::square(rat(3, 5), rat(4, 5)).expect("valid"),
        Rect::square(rat(1, 5), rat(2, 5)).expect("valid"),
    )
}

#[cfg(test)]
mod tests {
    use super::*;
    use rand::SeedableRng;
    use rand_chacha::ChaCha8Rng;

    fn pt(x: (i64, i64), y: (i64, i64)) -> TorusPoint {
        TorusPoint::new(rat(x.0, x.1), rat(y.0, y.1))
    }

    #[test]
    fn act_examples() {
        let p = pt((1, 3), (1, 4));
        assert_eq!(act(&Mat2Int::identity(), &p), p);
        assert_eq!(
            act(&Mat2Int::horizontal_shear(1), &pt((1, 2), (3, 4))),
            pt((1, 4), (3, 4))
        );
        assert_eq!(
            act(&Mat2Int::vertical_shear(6), &pt((1, 5), (0, 1))),
            pt((1, 5), (1, 5))
        );
    }

    #[test]
    fn negative_coordinates_reduce_into_unit_interval() {
        let p = TorusPoint::new(rat(-1, 3), rat(-7, 2));
        assert_eq!(p, pt((2, 3), (1, 2)));
    }

    #[test]
    fn determinant_is_enforced() {
        assert_eq!(Mat2Int::new(2, 0, 0, 1), Err(Error::NotUnimodular(2)));
        assert!(Mat2Int::new(2, 1, 1, 1).is_ok());
    }

    #[test]
    fn rect_validation() {
        assert!(Rect::square(rat(1, 2), rat(1, 2)).is_err());
        assert!(Rect::square(rat(-1, 2), rat(1, 2)).is_err());
        assert!(Rect::square(rat(0, 1), rat(1, 1)).is_ok());
    }

    #[test]
    fn identity_witness_is_the_midpoint() {
        let r = Rect::new(rat(1, 7), rat(3, 7), rat(1, 2), rat(2, 3)).unwrap();
        assert_eq!(
            intersection_witness(&Mat2Int::identity(), &r, &r),
            Some(r.midpoint())
        );
    }

    #[test]
    fn shear_cannot_reach_a_disjoint_band() {
        let (u, v) = standard_non_mixing_pair();
        assert_eq!(
            intersection_witness(&Mat2Int::horizontal_shear(1), &u, &v),
            None
        );
    }

    #[test]
    fn touching_rectangles_do_not_intersect() {
        let v = Rect::new(rat(0, 1), rat(1, 2), rat(0, 1), rat(1, 1)).unwrap();
        let w = Rect::new(rat(1, 2), rat(1, 1), rat(0, 1), rat(1, 1)).unwrap();
        assert_eq!(intersection_witness(&Mat2Int::identity(), &v, &w), None);
    }

    #[test]
    fn wraparound_is_found() {
        let v = Rect::square(rat(0, 1), rat(1, 10)).unwrap();
        let w = Rect::new(rat(9, 10), rat(1, 1), rat(0, 1), rat(1, 10)).unwrap();
        // (x, y) ↦ (x - y, y): a point near the left edge wraps to the right.
        let m = Mat2Int::horizontal_shear(-1);
        let p = intersection_witness(&m, &v, &w).unwrap();
        assert!(v.contains(&p) && w.contains(&act(&m, &p)));
    }

    #[test]
    fn transitivity_single_pair() {
        let r = Rect::square(rat(1, 3), rat(1, 2)).unwrap();
        let t = transitivity_witness(&[(r.clone(), r.clone())], 100).unwrap();
        assert_eq!((t.c_threshold, t.d_threshold), (7, 7));
        assert!(t.c >= 7);
        assert!(r.contains(&t.witnesses[0]));
        assert!(r.contains(&act(&t.matrix, &t.witnesses[0])));
        assert_eq!(t.matrix.det(), 1);
    }

    #[test]
    fn transitivity_budget() {
        let r = Rect::square(rat(1, 3), rat(1, 2)).unwrap();
        assert_eq!(
            transitivity_witness(&[(r.clone(), r)], 0),
            Err(Error::BudgetExhausted(0))
        );
    }

    #[test]
    fn certificate_and_spot_check() {
        let (u, v) = standard_non_mixing_pair();
        let cert = non_mixing_certificate(&u, &v).unwrap();
        assert_eq!(cert.image_band, (rat(3, 5), rat(4, 5)));
        assert!(matches!(
            non_mixing_certificate(&u, &u),
            Err(Error::PreconditionViolated(_))
        ));
        assert!(shear_hits(&u, &v, -50..=50).is_empty());
    }

    #[test]
    fn random_rects_are_valid() {
        let mut rng = ChaCha8Rng::seed_from_u64(7);
        for _ in 0..100 {
            let r = random_rect(&mut rng, 12);
            assert!(r.width().is_positive() && r.height().is_positive());
        }
    }

    #[test]
    fn rat_round_trip() {
        assert_eq!(parse_rat("6/10").unwrap(), rat(3, 5));
        assert_eq!(format_rat(&rat(3, 5)), "3/5");
        assert_eq!(parse_rat("-2").unwrap(), rat(-2, 1));
        assert!(parse_rat("1/0").is_err());
    }
}
