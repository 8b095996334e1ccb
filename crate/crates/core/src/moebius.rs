//! Möbius transformations of the projective line over the Gaussian
//! rationals `Q(i)`.
//!
//! Points are homogeneous pairs `(z : w)`; `∞ = (1 : 0)`. Matrices act by
//! `(z : w) ↦ (a z + b w : c z + d w)` and are compared up to a nonzero
//! scalar. Inverses are adjugates. Every modulus comparison is done on
//! squared moduli, so nothing leaves the field.

use std::fmt;

use num_bigint::BigInt;
use num_complex::Complex;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::ser::SerializeStruct;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::torus::{rat, ser_rat, Rat};

/// A Gaussian rational `re + i·im`.
pub type GQ = Complex<Rat>;

pub fn gq(re: Rat, im: Rat) -> GQ {
    Complex::new(re, im)
}

pub fn gq_int(re: i64, im: i64) -> GQ {
    gq(rat(re, 1), rat(im, 1))
}

/// `|z|²`.
pub fn norm_sq(z: &GQ) -> Rat {
    z.norm_sqr()
}

/// Serializes as `{"re": "p/q", "im": "r/s"}`.
#[derive(Clone, Copy)]
pub struct GqJson<'a>(pub &'a GQ);

impl Serialize for GqJson<'_> {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("GQ", 2)?;
        st.serialize_field("re", &self.0.re.to_string())?;
        st.serialize_field("im", &self.0.im.to_string())?;
        st.end()
    }
}

fn ser_gq<S: Serializer>(z: &GQ, s: S) -> std::result::Result<S::Ok, S::Error> {
    GqJson(z).serialize(s)
}

fn ser_gqs<S: Serializer>(zs: &[GQ], s: S) -> std::result::Result<S::Ok, S::Error> {
    s.collect_seq(zs.iter().map(GqJson))
}

fn ser_opt_rat<S: Serializer>(r: &Option<Rat>, s: S) -> std::result::Result<S::Ok, S::Error> {
    match r {
        Some(r) => s.collect_str(r),
        None => s.serialize_none(),
    }
}

fn fmt_gq(z: &GQ) -> String {
    if z.im.is_zero() {
        z.re.to_string()
    } else {
        format!(
            "{}{}{}i",
            z.re,
            if z.im.is_negative() { "-" } else { "+" },
            z.im.abs()
        )
    }
}

/// A point `(z : w)` of `CP¹`.
#[derive(Clone)]
pub struct CP1Point {
    z: GQ,
    w: GQ,
}

impl CP1Point {
    pub fn new(z: GQ, w: GQ) -> Result<Self> {
        if z.is_zero() && w.is_zero() {
            return Err(Error::ZeroPoint);
        }
        Ok(Self { z, w })
    }

    /// `(z : 1)`.
    pub fn finite(z: GQ) -> Self {
        Self { z, w: GQ::one() }
    }

    pub fn infinity() -> Self {
        Self {
            z: GQ::one(),
            w: GQ::zero(),
        }
    }

    pub fn is_infinite(&self) -> bool {
        self.w.is_zero()
    }

    /// `z / w`, or `None` at infinity.
    pub fn affine(&self) -> Option<GQ> {
        (!self.w.is_zero()).then(|| &self.z / &self.w)
    }

    pub fn coords(&self) -> (&GQ, &GQ) {
        (&self.z, &self.w)
    }
}

/// `z₁ w₂ - w₁ z₂`; zero exactly when the points coincide.
fn cross(p: &CP1Point, q: &CP1Point) -> GQ {
    &p.z * &q.w - &p.w * &q.z
}

impl PartialEq for CP1Point {
    fn eq(&self, other: &Self) -> bool {
        cross(self, other).is_zero()
    }
}

impl Eq for CP1Point {}

impl fmt::Debug for CP1Point {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self.affine() {
            Some(z) => write!(f, "{}", fmt_gq(&z)),
            None => write!(f, "∞"),
        }
    }
}

/// Normalised to `(z : 1)` or `(1 : 0)`.
impl Serialize for CP1Point {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let (z, w) = match self.affine() {
            Some(z) => (z, GQ::one()),
            None => (GQ::one(), GQ::zero()),
        };
        let mut st = s.serialize_struct("CP1Point", 2)?;
        st.serialize_field("z", &GqJson(&z))?;
        st.serialize_field("w", &GqJson(&w))?;
        st.end()
    }
}

/// `[[a, b], [c, d]]` with nonzero determinant.
#[derive(Clone, PartialEq, Eq)]
pub struct Mat2GQ {
    pub a: GQ,
    pub b: GQ,
    pub c: GQ,
    pub d: GQ,
}

impl Mat2GQ {
    pub fn new(a: GQ, b: GQ, c: GQ, d: GQ) -> Result<Self> {
        let m = Self { a, b, c, d };
        if m.det().is_zero() {
            return Err(Error::SingularMatrix);
        }
        Ok(m)
    }

    pub fn identity() -> Self {
        Self {
            a: GQ::one(),
            b: GQ::zero(),
            c: GQ::zero(),
            d: GQ::one(),
        }
    }

    pub fn det(&self) -> GQ {
        &self.a * &self.d - &self.b * &self.c
    }

    /// `[[d, -b], [-c, a]]`, the inverse up to the factor `det`.
    pub fn adjugate(&self) -> Self {
        Self {
            a: self.d.clone(),
            b: -self.b.clone(),
            c: -self.c.clone(),
            d: self.a.clone(),
        }
    }

    pub fn mul(&self, o: &Mat2GQ) -> Mat2GQ {
        Mat2GQ {
            a: &self.a * &o.a + &self.b * &o.c,
            b: &self.a * &o.b + &self.b * &o.d,
            c: &self.c * &o.a + &self.d * &o.c,
            d: &self.c * &o.b + &self.d * &o.d,
        }
    }

    pub fn entries(&self) -> [&GQ; 4] {
        [&self.a, &self.b, &self.c, &self.d]
    }

    /// `self = λ·other` for some nonzero `λ`.
    pub fn is_proportional(&self, other: &Mat2GQ) -> bool {
        let mine = self.entries();
        let theirs = other.entries();
        let Some(pivot) = theirs.iter().position(|e| !e.is_zero()) else {
            return false;
        };
        let lambda = mine[pivot] / theirs[pivot];
        !lambda.is_zero() && mine.iter().zip(theirs).all(|(m, t)| *m == &(&lambda * t))
    }
}

impl fmt::Debug for Mat2GQ {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "[[{}, {}], [{}, {}]]",
            fmt_gq(&self.a),
            fmt_gq(&self.b),
            fmt_gq(&self.c),
            fmt_gq(&self.d)
        )
    }
}

impl Serialize for Mat2GQ {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Mat2GQ", 4)?;
        st.serialize_field("a", &GqJson(&self.a))?;
        st.serialize_field("b", &GqJson(&self.b))?;
        st.serialize_field("c", &GqJson(&self.c))?;
        st.serialize_field("d", &GqJson(&self.d))?;
        st.end()
    }
}

pub fn moebius_apply(m: &Mat2GQ, p: &CP1Point) -> Result<CP1Point> {
    if m.det().is_zero() {
        return Err(Error::SingularMatrix);
    }
    Ok(CP1Point {
        z: &m.a * &p.z + &m.b * &p.w,
        w: &m.c * &p.z + &m.d * &p.w,
    })
}

fn distinct(ps: &[CP1Point; 3]) -> Result<()> {
    for i in 0..3 {
        for j in i + 1..3 {
            if ps[i] == ps[j] {
                return Err(Error::PointsNotDistinct);
            }
        }
    }
    Ok(())
}

fn check_maps(m: &Mat2GQ, from: &[CP1Point; 3], to: &[CP1Point; 3]) -> Result<()> {
    for (p, q) in from.iter().zip(to) {
        let image = moebius_apply(m, p)?;
        if image != *q {
            return Err(Error::ClaimFalsified(format!(
                "{m:?} sends {p:?} to {image:?}, expected {q:?}"
            )));
        }
    }
    Ok(())
}

/// The matrix sending `z1, z2, z3` to `0, 1, ∞`.
///
/// In homogeneous coordinates the rows are `[z2, z3]·(w1, -z1)` and
/// `[z2, z1]·(w3, -z3)` with `[p, q] = p_z q_w - p_w q_z`. For finite points
/// this is `[[z2 - z3, -z1(z2 - z3)], [z2 - z1, -z3(z2 - z1)]]`; points at
/// infinity need no special case.
pub fn canonical_matrix(z1: &CP1Point, z2: &CP1Point, z3: &CP1Point) -> Result<Mat2GQ> {
    let zs = [z1.clone(), z2.clone(), z3.clone()];
    distinct(&zs)?;
    let k1 = cross(z2, z3);
    let k2 = cross(z2, z1);
    let m = Mat2GQ::new(&z1.w * &k1, -(&z1.z * &k1), &z3.w * &k2, -(&z3.z * &k2))?;
    let targets = [
        CP1Point::finite(GQ::zero()),
        CP1Point::finite(GQ::one()),
        CP1Point::infinity(),
    ];
    check_maps(&m, &zs, &targets)?;
    Ok(m)
}

/// `adj(M_ws) · M_zs`, the transformation sending each `z_i` to `w_i`.
pub fn solve_three_transitive(zs: &[CP1Point; 3], ws: &[CP1Point; 3]) -> Result<Mat2GQ> {
    let mz = canonical_matrix(&zs[0], &zs[1], &zs[2])?;
    let mw = canonical_matrix(&ws[0], &ws[1], &ws[2])?;
    let m = mw.adjugate().mul(&mz);
    check_maps(&m, zs, ws)?;
    Ok(m)
}

/// The expanded entries of `adj(M_ws) · M_zs` for finite points:
///
/// ```text
/// a =  w3(w2-w1)(z3-z2)    - w1(w3-w2)(z2-z1)
/// b = -w3 z1(w2-w1)(z3-z2) + w1 z3(w3-w2)(z2-z1)
/// c =  (w2-w1)(z3-z2)      - (w3-w2)(z2-z1)
/// d = -z1(w2-w1)(z3-z2)    + z3(w3-w2)(z2-z1)
/// ```
pub fn product_entries_affine(zs: &[GQ; 3], ws: &[GQ; 3]) -> Mat2GQ {
    let [z1, z2, z3] = zs;
    let [w1, w2, w3] = ws;
    let p = (w2 - w1) * (z3 - z2);
    let q = (w3 - w2) * (z2 - z1);
    Mat2GQ {
        a: w3 * &p - w1 * &q,
        b: -(w3 * z1 * &p) + w1 * z3 * &q,
        c: &p - &q,
        d: -(z1 * &p) + z3 * &q,
    }
}

/// [`product_entries_affine`] on projective inputs, checked to be
/// proportional to [`solve_three_transitive`].
pub fn product_entries(zs: &[CP1Point; 3], ws: &[CP1Point; 3]) -> Result<Mat2GQ> {
    let affine = |ps: &[CP1Point; 3]| -> Result<[GQ; 3]> {
        let v: Vec<GQ> = ps
            .iter()
            .map(|p| p.affine().ok_or(Error::InfinitePoint))
            .collect::<Result<_>>()?;
        Ok([v[0].clone(), v[1].clone(), v[2].clone()])
    };
    let m = product_entries_affine(&affine(zs)?, &affine(ws)?);
    let solved = solve_three_transitive(zs, ws)?;
    if !m.is_proportional(&solved) {
        return Err(Error::ClaimFalsified(format!(
            "expanded entries {m:?} are not proportional to {solved:?}"
        )));
    }
    Ok(m)
}

/// The open disk `|z - center| < radius`.
#[derive(Clone, PartialEq, Eq)]
pub struct Ball {
    center: GQ,
    radius: Rat,
}

impl Ball {
    pub fn new(center: GQ, radius: Rat) -> Result<Self> {
        if !radius.is_positive() {
            return Err(Error::InvalidParameter {
                name: "radius",
                reason: format!("must be positive, got {radius}"),
            });
        }
        Ok(Self { center, radius })
    }

    pub fn center(&self) -> &GQ {
        &self.center
    }

    pub fn radius(&self) -> &Rat {
        &self.radius
    }

    pub fn contains(&self, z: &GQ) -> bool {
        norm_sq(&(z - &self.center)) < &self.radius * &self.radius
    }

    /// A uniform point of the grid `center + (k + i l)·radius/q`,
    /// `k² + l² < q²`.
    pub fn sample<R: Rng>(&self, rng: &mut R, q: i64) -> GQ {
        self.grid_point(grid_offset(rng, q), q)
    }

    fn step(&self, q: i64) -> Rat {
        &self.radius / Rat::from_integer(BigInt::from(q))
    }

    fn grid_point(&self, (k, l): (i64, i64), q: i64) -> GQ {
        let step = self.step(q);
        &self.center + gq(&step * rat(k, 1), &step * rat(l, 1))
    }
}

impl fmt::Debug for Ball {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "B({}, {})", fmt_gq(&self.center), self.radius)
    }
}

impl Serialize for Ball {
    fn serialize<S: Serializer>(&self, s: S) -> std::result::Result<S::Ok, S::Error> {
        let mut st = s.serialize_struct("Ball", 2)?;
        st.serialize_field("center", &GqJson(&self.center))?;
        st.serialize_field("radius", &self.radius.to_string())?;
        st.end()
    }
}

fn grid_offset<R: Rng>(rng: &mut R, q: i64) -> (i64, i64) {
    loop {
        let k = rng.gen_range(-q..=q);
        let l = rng.gen_range(-q..=q);
        if k * k + l * l < q * q {
            return (k, l);
        }
    }
}

/// Grid resolution for ball sampling.
pub const SAMPLE_GRID: i64 = 64;

/// Largest admissible `ε` and `ε′` in [`bound_check`].
pub fn default_eps_threshold() -> Rat {
    rat(1, 100)
}

/// `U_i = V_i = B(i, ε)` for `i = 1, 2, 3`, `U_4 = B(0, ε′)`,
/// `V_4 = B(4, 1/2)`.
pub fn obstruction_configuration(eps: &Rat, eps_prime: &Rat) -> Result<[(Ball, Ball); 4]> {
    let b = |c: i64, r: &Rat| Ball::new(gq_int(c, 0), r.clone());
    Ok([
        (b(1, eps)?, b(1, eps)?),
        (b(2, eps)?, b(2, eps)?),
        (b(3, eps)?, b(3, eps)?),
        (b(0, eps_prime)?, b(4, &rat(1, 2))?),
    ])
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundViolation {
    #[serde(serialize_with = "ser_gqs")]
    pub zs: Vec<GQ>,
    #[serde(serialize_with = "ser_gqs")]
    pub ws: Vec<GQ>,
    #[serde(serialize_with = "ser_gq")]
    pub z: GQ,
    /// `|γ(z)|²`; `None` when `γ(z) = ∞`.
    #[serde(serialize_with = "ser_opt_rat")]
    pub ratio_sq: Option<Rat>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct BoundReport {
    #[serde(serialize_with = "ser_rat")]
    pub eps: Rat,
    #[serde(serialize_with = "ser_rat")]
    pub eps_prime: Rat,
    pub seed: u64,
    pub grid: i64,
    pub samples: u64,
    pub passed: u64,
    /// Largest `|γ(z)|²` seen.
    #[serde(serialize_with = "ser_opt_rat")]
    pub max_ratio_sq: Option<Rat>,
    pub violations: Vec<BoundViolation>,
}

/// Samples the obstruction configuration and checks
/// `|a z + b|² ≤ 9 |c z + d|²` exactly for each draw.
pub fn bound_check(eps: &Rat, eps_prime: &Rat, n_samples: u64, seed: u64) -> Result<BoundReport> {
    bound_check_with_threshold(eps, eps_prime, n_samples, seed, &default_eps_threshold())
}

pub fn bound_check_with_threshold(
    eps: &Rat,
    eps_prime: &Rat,
    n_samples: u64,
    seed: u64,
    threshold: &Rat,
) -> Result<BoundReport> {
    for (name, e) in [("eps", eps), ("eps_prime", eps_prime)] {
        if !e.is_positive() || e > threshold {
            return Err(Error::PreconditionViolated(format!(
                "{name} = {e} must lie in (0, {threshold}]"
            )));
        }
    }
    let config = obstruction_configuration(eps, eps_prime)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut report = BoundReport {
        eps: eps.clone(),
        eps_prime: eps_prime.clone(),
        seed,
        grid: SAMPLE_GRID,
        samples: n_samples,
        passed: 0,
        max_ratio_sq: None,
        violations: Vec::new(),
    };
    let grid = ScaledGrid::new(&config);
    let mut best: Option<(BigInt, BigInt)> = None;
    for _ in 0..n_samples {
        let draw = Draw::sample(&mut rng);
        let (num, den, _) = draw.image(&grid);
        let (num, den) = (norm_gi(&num), norm_gi(&den));
        if !den.is_zero()
            && best
                .as_ref()
                .is_none_or(|(n, d)| frac_gt(&num, &den, n, d))
        {
            best = Some((num.clone(), den.clone()));
        }
        if !den.is_zero() && num <= &den * 9 {
            report.passed += 1;
        } else {
            let (zs, ws, z) = draw.points(&config);
            report.violations.push(BoundViolation {
                zs: zs.to_vec(),
                ws: ws.to_vec(),
                z,
                ratio_sq: (!den.is_zero()).then(|| Rat::new(num, den)),
            });
        }
    }
    report.max_ratio_sq = best.map(|(n, d)| Rat::new(n, d));
    Ok(report)
}

type GI = Complex<BigInt>;

/// The sampling grids of a configuration with a common denominator: every
/// grid point of ball `j` is `(center_j + step_j·(k + i l)) / scale`.
struct ScaledGrid {
    scale: BigInt,
    balls: Vec<(GI, BigInt)>,
}

impl ScaledGrid {
    /// Balls in draw order `U_1, V_1, U_2, V_2, U_3, V_3, U_4`.
    fn new(config: &[(Ball, Ball); 4]) -> Self {
        let balls: Vec<&Ball> = config[..3]
            .iter()
            .flat_map(|(u, v)| [u, v])
            .chain([&config[3].0])
            .collect();
        let mut scale = BigInt::one();
        for b in &balls {
            for r in [&b.center.re, &b.center.im, &b.step(SAMPLE_GRID)] {
                scale = scale.lcm(r.denom());
            }
        }
        let int = |r: &Rat| (r * Rat::from_integer(scale.clone())).to_integer();
        let balls = balls
            .iter()
            .map(|b| {
                (
                    Complex::new(int(&b.center.re), int(&b.center.im)),
                    int(&b.step(SAMPLE_GRID)),
                )
            })
            .collect();
        Self { scale, balls }
    }

    fn point(&self, j: usize, (k, l): (i64, i64)) -> GI {
        let (c, step) = &self.balls[j];
        Complex::new(&c.re + step * k, &c.im + step * l)
    }
}

/// The grid offsets of one draw, in [`ScaledGrid`] order.
struct Draw([(i64, i64); 7]);

impl Draw {
    fn sample<R: Rng>(rng: &mut R) -> Self {
        Self(std::array::from_fn(|_| grid_offset(rng, SAMPLE_GRID)))
    }

    /// `(zs, ws, z)` as Gaussian rationals.
    fn points(&self, config: &[(Ball, Ball); 4]) -> ([GQ; 3], [GQ; 3], GQ) {
        let o = &self.0;
        let zs = std::array::from_fn(|i| config[i].0.grid_point(o[2 * i], SAMPLE_GRID));
        let ws = std::array::from_fn(|i| config[i].1.grid_point(o[2 * i + 1], SAMPLE_GRID));
        (zs, ws, config[3].0.grid_point(o[6], SAMPLE_GRID))
    }

    /// `γ(z) = N / M` in integer arithmetic, with `γ` given by the expanded
    /// entries on the scaled points. Also reports whether `γ` is singular.
    fn image(&self, grid: &ScaledGrid) -> (GI, GI, bool) {
        let p: Vec<GI> = (0..7).map(|j| grid.point(j, self.0[j])).collect();
        let (z1, w1, z2, w2, z3, w3, z) = (&p[0], &p[1], &p[2], &p[3], &p[4], &p[5], &p[6]);
        let pp = (w2 - w1) * (z3 - z2);
        let qq = (w3 - w2) * (z2 - z1);
        let a = w3 * &pp - w1 * &qq;
        let b = w1 * z3 * &qq - w3 * z1 * &pp;
        let c = &pp - &qq;
        let d = z3 * &qq - z1 * &pp;
        let singular = (&a * &d - &b * &c).is_zero();
        // a, b, c, d carry scale^3, ^4, ^2, ^3 and z carries scale.
        let num = &a * z + &b;
        let den = (&c * z + &d).scale(grid.scale.clone());
        (num, den, singular)
    }
}

fn norm_gi(z: &GI) -> BigInt {
    z.norm_sqr()
}

/// `n / m` as a Gaussian rational.
fn rat_quotient(n: &GI, m: &GI) -> GQ {
    let to = |z: &GI| {
        gq(
            Rat::from_integer(z.re.clone()),
            Rat::from_integer(z.im.clone()),
        )
    };
    to(n) / to(m)
}

/// `n1/d1 > n2/d2` for positive denominators.
fn frac_gt(n1: &BigInt, d1: &BigInt, n2: &BigInt, d2: &BigInt) -> bool {
    n1 * d2 > n2 * d1
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourWitness {
    #[serde(serialize_with = "ser_gqs")]
    pub zs: Vec<GQ>,
    #[serde(serialize_with = "ser_gqs")]
    pub ws: Vec<GQ>,
    #[serde(serialize_with = "ser_gq")]
    pub z: GQ,
    #[serde(serialize_with = "ser_gq")]
    pub image: GQ,
    pub matrix: Mat2GQ,
}

/// The sampled image nearest the centre of the fourth target.
#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct ClosestApproach {
    #[serde(serialize_with = "ser_gq")]
    pub image: GQ,
    /// Squared distance from the image to the target centre.
    #[serde(serialize_with = "ser_rat")]
    pub dist_sq: Rat,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct FourTransitivityReport {
    pub targets: Vec<(Ball, Ball)>,
    pub budget: u64,
    pub seed: u64,
    pub samples: u64,
    pub witness: Option<FourWitness>,
    pub closest: Option<ClosestApproach>,
    /// Largest `|γ(z)|²` over all samples with a finite image.
    #[serde(serialize_with = "ser_opt_rat")]
    pub max_image_norm_sq: Option<Rat>,
}

/// Draws `z_i ∈ U_i`, `w_i ∈ V_i` (`i ≤ 3`) and `z ∈ U_4`, forms the unique
/// `γ` with `γ z_i = w_i` and asks whether `γ z ∈ V_4`. Stops at the first
/// hit, which is re-verified from scratch before it is returned.
pub fn four_transitivity_search(
    targets: &[(Ball, Ball); 4],
    budget: u64,
    seed: u64,
) -> Result<FourTransitivityReport> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let (u4, v4) = &targets[3];
    let mut report = FourTransitivityReport {
        targets: targets.to_vec(),
        budget,
        seed,
        samples: 0,
        witness: None,
        closest: None,
        max_image_norm_sq: None,
    };
    let grid = ScaledGrid::new(targets);
    // V_4 = B(c, r): |N/M - c|² < r² becomes |L N - C M|² rd² < rn² L² |M|²
    // with C = L c, r = rn/rd.
    let big_l = Rat::from_integer(grid.scale.clone());
    let center = v4.center();
    let c_int: GI = Complex::new(
        (&center.re * &big_l).to_integer(),
        (&center.im * &big_l).to_integer(),
    );
    let (rn, rd) = (v4.radius().numer().clone(), v4.radius().denom().clone());
    let l2 = &grid.scale * &grid.scale;
    let mut closest: Option<(BigInt, BigInt)> = None;
    let mut largest: Option<(BigInt, BigInt)> = None;
    while report.samples < budget {
        report.samples += 1;
        let draw = Draw::sample(&mut rng);
        let (num, den, singular) = draw.image(&grid);
        if den.is_zero() || singular {
            continue;
        }
        let den_sq = norm_gi(&den);
        let img_sq = norm_gi(&num);
        if largest
            .as_ref()
            .is_none_or(|(n, d)| frac_gt(&img_sq, &den_sq, n, d))
        {
            largest = Some((img_sq, den_sq.clone()));
        }
        let offset = norm_gi(&(num.scale(grid.scale.clone()) - &c_int * &den));
        let dist_den = &l2 * &den_sq;
        if closest
            .as_ref()
            .is_none_or(|(n, d)| frac_gt(n, d, &offset, &dist_den))
        {
            closest = Some((offset.clone(), dist_den.clone()));
            report.closest = Some(ClosestApproach {
                image: rat_quotient(&num, &den),
                dist_sq: Rat::new(offset.clone(), dist_den.clone()),
            });
        }
        if &offset * &rd * &rd < &rn * &rn * &dist_den {
            let (zs, ws, z) = draw.points(targets);
            let matrix = product_entries_affine(&zs, &ws);
            let image = (&matrix.a * &z + &matrix.b) / (&matrix.c * &z + &matrix.d);
            let witness = FourWitness {
                zs: zs.to_vec(),
                ws: ws.to_vec(),
                z,
                image,
                matrix,
            };
            verify_four_witness(targets, &witness)?;
            debug_assert!(u4.contains(&witness.z));
            report.witness = Some(witness);
            break;
        }
    }
    report.max_image_norm_sq = largest.map(|(n, d)| Rat::new(n, d));
    Ok(report)
}

/// Independent re-check of a search hit: memberships, the three-point
/// mapping through the solver, and the image of the fourth point.
pub fn verify_four_witness(targets: &[(Ball, Ball); 4], w: &FourWitness) -> Result<()> {
    let fail = |what: String| Err(Error::ClaimFalsified(format!("invalid witness: {what}")));
    for (i, (u, v)) in targets[..3].iter().enumerate() {
        if !u.contains(&w.zs[i]) || !v.contains(&w.ws[i]) {
            return fail(format!("pair {i} membership"));
        }
    }
    if !targets[3].0.contains(&w.z) {
        return fail("fourth source membership".into());
    }
    let pts = |v: &[GQ]| -> [CP1Point; 3] { [0, 1, 2].map(|i| CP1Point::finite(v[i].clone())) };
    let solved = solve_three_transitive(&pts(&w.zs), &pts(&w.ws))?;
    if !solved.is_proportional(&w.matrix) {
        return fail("matrix does not match the solver".into());
    }
    let image = moebius_apply(&solved, &CP1Point::finite(w.z.clone()))?;
    match image.affine() {
        Some(z) if z == w.image && targets[3].1.contains(&z) => Ok(()),
        _ => fail(format!("image {image:?}")),
    }
}

/// A Gaussian rational with parts `p/q`, `|p| ≤ 20`, `1 ≤ q ≤ 12`.
pub fn random_gq<R: Rng>(rng: &mut R) -> GQ {
    let mut part = || rat(rng.gen_range(-20..=20), rng.gen_range(1..=12));
    gq(part(), part())
}

/// Infinity with probability `1/6`, otherwise [`random_gq`].
pub fn random_cp1<R: Rng>(rng: &mut R) -> CP1Point {
    if rng.gen_range(0..6) == 0 {
        CP1Point::infinity()
    } else {
        CP1Point::finite(random_gq(rng))
    }
}

/// Three pairwise distinct points drawn with `draw`.
pub fn random_distinct_triple<R: Rng>(
    rng: &mut R,
    mut draw: impl FnMut(&mut R) -> CP1Point,
) -> [CP1Point; 3] {
    loop {
        let t = [draw(rng), draw(rng), draw(rng)];
        if distinct(&t).is_ok() {
            return t;
        }
    }
}
