//! Gaussian rationals in the closed unit square, their Ford spheres,
//! complex mediants, adjacency and consecutivity. A small real Farey
//! implementation serves as the one-dimensional reference.

use std::cmp::Ordering;
use std::collections::HashSet;
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::{BigRational, Ratio};
use rayon::prelude::*;
use serde::{Serialize, Serializer};

use crate::error::{Error, Result};
use crate::gint::canonical_in_disc;
use crate::{CanonicalGInt, GInt};

/// A reduced fraction `r/s` with canonical denominator.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct GFraction {
    r: GInt,
    s: CanonicalGInt,
}

impl GFraction {
    /// Reduces `r/s` and moves the unit of `s` into the numerator.
    pub fn new(r: GInt, s: GInt) -> Result<Self> {
        if s.is_zero() {
            return Err(Error::Domain(format!("zero denominator in {r}/0")));
        }
        let g = r.gcd(&s)?.get();
        let (r, s) = (
            r.div_exact(&g).expect("gcd divides"),
            s.div_exact(&g).expect("gcd divides"),
        );
        let (unit, s) = s.canonicalize()?;
        Ok(Self { r: r * unit.conj(), s })
    }

    /// Builds `r/s` from parts already known to be reduced and canonical.
    fn from_parts(r: GInt, s: CanonicalGInt) -> Self {
        debug_assert!(r.is_coprime(&s.get()).unwrap_or(false));
        Self { r, s }
    }

    pub fn num(&self) -> GInt {
        self.r
    }

    pub fn den(&self) -> CanonicalGInt {
        self.s
    }

    /// `r * conj(s)`; the value is this divided by `norm(s)`.
    fn scaled(&self) -> (GInt, i64) {
        (self.r * self.s.get().conj(), self.s.norm())
    }

    /// Membership in the closed unit square `[0,1] x [0,1]`.
    pub fn in_unit_square(&self) -> bool {
        let (w, n) = self.scaled();
        (0..=n).contains(&w.re) && (0..=n).contains(&w.im)
    }

    pub fn on_boundary(&self) -> bool {
        let (w, n) = self.scaled();
        self.in_unit_square() && (w.re == 0 || w.re == n || w.im == 0 || w.im == n)
    }

    pub fn sphere(&self) -> Sphere {
        let (w, n) = self.scaled();
        let n = i128::from(n);
        Sphere {
            base_re: Ratio::new(i128::from(w.re), n),
            base_im: Ratio::new(i128::from(w.im), n),
            radius: Ratio::new(1, 2 * n),
        }
    }
}

/// Orders by `(norm(s), re(s), im(s), re(r), im(r))`.
impl Ord for GFraction {
    fn cmp(&self, other: &Self) -> Ordering {
        self.s
            .cmp(&other.s)
            .then(self.r.re.cmp(&other.r.re))
            .then(self.r.im.cmp(&other.r.im))
    }
}

impl PartialOrd for GFraction {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for GFraction {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.r, self.s)
    }
}

impl FromStr for GFraction {
    type Err = Error;
    fn from_str(text: &str) -> Result<Self> {
        let (r, s) = text
            .split_once('/')
            .ok_or_else(|| Error::Input(format!("expected r/s, got {text:?}")))?;
        Self::new(r.parse()?, s.parse()?)
    }
}

impl Serialize for GFraction {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// Ford sphere of a fraction: tangent to the complex plane at `r/s`,
/// radius `1 / (2 |s|^2)`.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub struct Sphere {
    pub base_re: Ratio<i128>,
    pub base_im: Ratio<i128>,
    pub radius: Ratio<i128>,
}

impl Serialize for Sphere {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        use serde::ser::SerializeStruct;
        let mut st = serializer.serialize_struct("Sphere", 3)?;
        st.serialize_field("base_re", &self.base_re.to_string())?;
        st.serialize_field("base_im", &self.base_im.to_string())?;
        st.serialize_field("radius", &self.radius.to_string())?;
        st.end()
    }
}

fn big(x: Ratio<i128>) -> BigRational {
    BigRational::new(BigInt::from(*x.numer()), BigInt::from(*x.denom()))
}

/// A reduced real fraction `p/q` in `[0, 1]`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Serialize)]
pub struct RealFrac {
    pub p: u64,
    pub q: u64,
}

impl fmt::Display for RealFrac {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}/{}", self.p, self.q)
    }
}

fn unit_square_seeds() -> [GFraction; 4] {
    let one = CanonicalGInt::one();
    [
        GFraction::from_parts(GInt::zero(), one),
        GFraction::from_parts(GInt::one(), one),
        GFraction::from_parts(GInt::i(), one),
        GFraction::from_parts(GInt::new(1, 1), one),
    ]
}

fn fractions_with_denominator(s: CanonicalGInt) -> Vec<GFraction> {
    // r/s in the square means r lies in the parallelogram spanned by s and is
    let sg = s.get();
    let n = s.norm();
    let corners = [GInt::zero(), sg, sg * GInt::i(), sg * GInt::new(1, 1)];
    let (lo_re, hi_re) = (
        corners.iter().map(|c| c.re).min().unwrap_or(0),
        corners.iter().map(|c| c.re).max().unwrap_or(0),
    );
    let (lo_im, hi_im) = (
        corners.iter().map(|c| c.im).min().unwrap_or(0),
        corners.iter().map(|c| c.im).max().unwrap_or(0),
    );
    let mut out = Vec::new();
    for re in lo_re..=hi_re {
        for im in lo_im..=hi_im {
            let r = GInt::new(re, im);
            let w = r * sg.conj();
            if (0..=n).contains(&w.re)
                && (0..=n).contains(&w.im)
                && r.is_coprime(&sg).expect("s is nonzero")
            {
                out.push(GFraction::from_parts(r, s));
            }
        }
    }
    out.sort();
    out
}

/// Every reduced fraction in the closed unit square with `|s| <= S`,
/// sorted by denominator then numerator.
pub fn enumerate_gs(s_max: u64) -> Vec<GFraction> {
    let max_norm = (s_max * s_max) as i64;
    let mut dens: Vec<CanonicalGInt> = canonical_in_disc(max_norm)
        .map(|s| CanonicalGInt::new(s).expect("disc enumeration is canonical"))
        .collect();
    dens.sort();
    dens.par_iter()
        .flat_map_iter(|&s| fractions_with_denominator(s))
        .collect()
}

/// `|r' s - r s'| = 1`.
pub fn is_adjacent(f1: &GFraction, f2: &GFraction) -> bool {
    let det = f2.r * f1.s.get() - f1.r * f2.s.get();
    det.norm() == 1
}

/// Exact sphere geometry: squared distance between centres against the
/// squared sum of radii.
pub fn spheres_tangent(f1: &GFraction, f2: &GFraction) -> Result<bool> {
    if f1 == f2 {
        return Err(Error::Domain(format!("{f1} compared with itself")));
    }
    let (a, b) = (f1.sphere(), f2.sphere());
    let dx = big(a.base_re) - big(b.base_re);
    let dy = big(a.base_im) - big(b.base_im);
    let dz = big(a.radius) - big(b.radius);
    let sum = big(a.radius) + big(b.radius);
    Ok(&dx * &dx + &dy * &dy + &dz * &dz == &sum * &sum)
}

/// The four complex mediants `(r + u r') / (s + u s')` that are nonzero,
/// reduced and canonicalized, before any restriction to the square.
pub fn mediant_candidates(f1: &GFraction, f2: &GFraction) -> Result<Vec<GFraction>> {
    if !is_adjacent(f1, f2) {
        return Err(Error::Domain(format!("{f1} and {f2} are not adjacent")));
    }
    let mut out = Vec::with_capacity(4);
    for u in GInt::units() {
        let den = f1.s.get() + u * f2.s.get();
        if den.is_zero() {
            continue;
        }
        out.push(GFraction::new(f1.r + u * f2.r, den)?);
    }
    Ok(out)
}

/// Reflects a value across whichever edges of the square it violates.
fn mirror_into_square(f: &GFraction) -> Result<GFraction> {
    let (w, n) = f.scaled();
    let (mut num, mut den) = (f.r, f.s.get());
    if w.re < 0 {
        // z -> -conj(z)
        (num, den) = (-num.conj(), den.conj());
    } else if w.re > n {
        // z -> 2 - conj(z)
        (num, den) = (den.conj() * GInt::from_int(2) - num.conj(), den.conj());
    }
    if w.im < 0 {
        (num, den) = (num.conj(), den.conj());
    } else if w.im > n {
        // z -> conj(z) + 2i
        (num, den) = (num.conj() + GInt::new(0, 2) * den.conj(), den.conj());
    }
    GFraction::new(num, den)
}

/// Mediant children of two adjacent fractions that lie in the square.
/// When both parents sit on the boundary, a child outside the square is
/// replaced by its mirror image (kept only if still adjacent to both).
pub fn mediant_children(f1: &GFraction, f2: &GFraction) -> Result<Vec<GFraction>> {
    let both_on_boundary = f1.on_boundary() && f2.on_boundary();
    let mut out: Vec<GFraction> = Vec::with_capacity(4);
    for child in mediant_candidates(f1, f2)? {
        let child = if child.in_unit_square() {
            child
        } else if both_on_boundary {
            let m = mirror_into_square(&child)?;
            if !(m.in_unit_square() && is_adjacent(&m, f1) && is_adjacent(&m, f2)) {
                continue;
            }
            m
        } else {
            continue;
        };
        if !out.contains(&child) {
            out.push(child);
        }
    }
    Ok(out)
}

/// Closure of `{0, 1, i, 1+i}` under [`mediant_children`], keeping
/// denominators with `|s| <= S`. Sorted like [`enumerate_gs`].
pub fn generate_gs_by_mediants(s_max: u64) -> Vec<GFraction> {
    let max_norm = (s_max * s_max) as i64;
    let mut seen: HashSet<GFraction> = HashSet::new();
    let mut all: Vec<GFraction> = Vec::new();
    let mut pending: Vec<GFraction> = Vec::new();
    for f in unit_square_seeds() {
        seen.insert(f);
        all.push(f);
        pending.push(f);
    }
    while let Some(f) = pending.pop() {
        let partners: Vec<GFraction> = all
            .par_iter()
            .filter(|g| is_adjacent(&f, g))
            .copied()
            .collect();
        for g in partners {
            for child in mediant_children(&f, &g).expect("partners are adjacent") {
                if child.den().norm() <= max_norm && seen.insert(child) {
                    all.push(child);
                    pending.push(child);
                }
            }
        }
    }
    all.sort();
    all
}

fn exceeds_after_some_unit(s1: GInt, s2: GInt, max_norm: i64) -> bool {
    GInt::units().iter().any(|&u| (s1 + u * s2).norm() > max_norm)
}

/// Adjacent, and some sphere smaller than `1/(2S^2)` touches both: one
/// of the mediant denominators `s + u s'` has modulus above `S`.
pub fn is_consecutive(f1: &GFraction, f2: &GFraction, s_max: u64) -> bool {
    is_adjacent(f1, f2) && exceeds_after_some_unit(f1.s.get(), f2.s.get(), (s_max * s_max) as i64)
}

/// Arithmetic test for `s, s'` to be consecutive denominators: both within
/// the disc, coprime, and `|s' + u s| > S` for some unit (strictly).
pub fn consecutive_denominator_conditions(s: &CanonicalGInt, s2: &CanonicalGInt, s_max: u64) -> bool {
    let max_norm = (s_max * s_max) as i64;
    s.norm() <= max_norm
        && s2.norm() <= max_norm
        && s.get().is_coprime(&s2.get()).expect("canonical values are nonzero")
        && exceeds_after_some_unit(s2.get(), s.get(), max_norm)
}

/// All consecutive pairs `(r/s, r'/s')` in the square for one denominator
/// pair, grouped by the unit `u = r s' - r' s`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct DenominatorPairs {
    /// Distinct pairs, sorted. For `s = s'` each unordered pair appears once.
    pub pairs: Vec<(GFraction, GFraction)>,
    /// For each unit `1, i, -1, -i`: how many simultaneous translates
    /// `(r + k s, r' + k s')` keep both fractions in the square.
    pub orbit_sizes: [usize; 4],
}

impl DenominatorPairs {
    /// Some unit class has other than exactly one representative in the
    /// square (fractions on the boundary, or pushed across it).
    pub fn is_degenerate(&self) -> bool {
        self.orbit_sizes.iter().any(|&n| n != 1)
    }
}

fn floor_div(a: i64, b: i64) -> i64 {
    Integer::div_floor(&a, &b)
}

fn ceil_div(a: i64, b: i64) -> i64 {
    -Integer::div_floor(&-a, &b)
}

/// Solves `r s' - r' s = u` for each unit and collects every translate with
/// both fractions in the square.
pub fn consecutive_pairs_for_denoms(
    s: &CanonicalGInt,
    s2: &CanonicalGInt,
    s_max: u64,
) -> Result<DenominatorPairs> {
    if !consecutive_denominator_conditions(s, s2, s_max) {
        return Err(Error::Domain(format!(
            "{s} and {s2} are not consecutive denominators for S = {s_max}"
        )));
    }
    let (sg, s2g) = (s.get(), s2.get());
    let n = s.norm();
    // x s' + y s = g with g a unit, so s'^{-1} = x g^{-1} mod s
    let (g, x, _) = s2g.gcd_ext(&sg)?;
    let inv = x * g.conj();
    let mut pairs = Vec::new();
    let mut orbit_sizes = [0usize; 4];
    for (slot, u) in GInt::units().into_iter().enumerate() {
        let (_, r0) = (u * inv).div_rem(&sg)?;
        let r0_prime = (r0 * s2g - u)
            .div_exact(&sg)
            .ok_or_else(|| Error::Numerical("numerator solve produced a non-integer".into()))?;
        let w = r0 * sg.conj();
        for k_re in ceil_div(-w.re, n)..=floor_div(n - w.re, n) {
            for k_im in ceil_div(-w.im, n)..=floor_div(n - w.im, n) {
                let k = GInt::new(k_re, k_im);
                let a = GFraction::from_parts(r0 + k * sg, *s);
                let b = GFraction::from_parts(r0_prime + k * s2g, *s2);
                if a.in_unit_square() && b.in_unit_square() {
                    orbit_sizes[slot] += 1;
                    let pair = if s == s2 && b < a { (b, a) } else { (a, b) };
                    if !pairs.contains(&pair) {
                        pairs.push(pair);
                    }
                }
            }
        }
    }
    pairs.sort();
    Ok(DenominatorPairs { pairs, orbit_sizes })
}

/// Every unordered consecutive pair in the enumerated set, found by
/// testing all pairs of fractions. Each pair is `(smaller, larger)` in the
/// fraction order.
pub fn consecutive_pairs(s_max: u64) -> Vec<(GFraction, GFraction)> {
    let all = enumerate_gs(s_max);
    let mut out: Vec<(GFraction, GFraction)> = all
        .par_iter()
        .enumerate()
        .flat_map_iter(|(i, f)| {
            all[i + 1..]
                .iter()
                .filter(move |g| is_consecutive(f, g, s_max))
                .map(move |g| (*f, *g))
        })
        .collect();
    out.sort();
    out
}

/// Farey fractions of order `Q` in increasing order.
pub fn enumerate_fq(q_max: u64) -> Result<Vec<RealFrac>> {
    if q_max == 0 {
        return Err(Error::Domain("Q must be >= 1".into()));
    }
    let (mut a, mut b, mut c, mut d) = (0u64, 1u64, 1u64, q_max);
    let mut out = vec![RealFrac { p: a, q: b }];
    while c <= d {
        let k = (q_max + b) / d;
        (a, b, c, d) = (c, d, k * c - a, k * d - b);
        out.push(RealFrac { p: a, q: b });
    }
    Ok(out)
}

/// `b c - a d = 1` and `b + d > Q` for `a/b < c/d` (arguments in either order).
pub fn is_consecutive_fq(x: &RealFrac, y: &RealFrac, q_max: u64) -> bool {
    let (lo, hi) = if x.p * y.q <= y.p * x.q { (x, y) } else { (y, x) };
    lo.q <= q_max
        && hi.q <= q_max
        && (lo.q * hi.p) as i128 - (lo.p * hi.q) as i128 == 1
        && lo.q + hi.q > q_max
}
