//! Exact Gaussian-integer arithmetic.
//!
//! [`GaussianInt`] is generic over a signed primitive integer. Every
//! operator checks for overflow: the `checked_*` methods return `None`,
//! the `std::ops` impls panic. Nothing ever wraps.

use std::cmp::Ordering;
use std::fmt;
use std::hash::Hash;
use std::ops::{Add, Mul, Neg, Sub};
use std::str::FromStr;

use num_integer::Roots;
use num_traits::{PrimInt, Signed};
use serde::{Deserialize, Deserializer, Serialize, Serializer};

use crate::error::{Error, Result};

/// Signed integer type usable as the component type of a Gaussian integer.
pub trait GaussScalar:
    PrimInt + Signed + Hash + fmt::Debug + fmt::Display + FromStr + Send + Sync + 'static
{
}

impl GaussScalar for i32 {}
impl GaussScalar for i64 {}
impl GaussScalar for i128 {}

#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug, Default)]
pub struct GaussianInt<T> {
    pub re: T,
    pub im: T,
}

impl<T: GaussScalar> GaussianInt<T> {
    pub const fn new(re: T, im: T) -> Self {
        Self { re, im }
    }

    pub fn zero() -> Self {
        Self::new(T::zero(), T::zero())
    }

    pub fn one() -> Self {
        Self::new(T::one(), T::zero())
    }

    pub fn i() -> Self {
        Self::new(T::zero(), T::one())
    }

    pub fn from_int(re: T) -> Self {
        Self::new(re, T::zero())
    }

    /// The four units `1, i, -1, -i`, in that order.
    pub fn units() -> [Self; 4] {
        let (o, z) = (T::one(), T::zero());
        [
            Self::new(o, z),
            Self::new(z, o),
            Self::new(-o, z),
            Self::new(z, -o),
        ]
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn is_unit(&self) -> bool {
        (self.re.abs().is_one() && self.im.is_zero())
            || (self.re.is_zero() && self.im.abs().is_one())
    }

    pub fn conj(&self) -> Self {
        Self::new(self.re, -self.im)
    }

    pub fn checked_add(&self, rhs: &Self) -> Option<Self> {
        Some(Self::new(
            self.re.checked_add(&rhs.re)?,
            self.im.checked_add(&rhs.im)?,
        ))
    }

    pub fn checked_sub(&self, rhs: &Self) -> Option<Self> {
        Some(Self::new(
            self.re.checked_sub(&rhs.re)?,
            self.im.checked_sub(&rhs.im)?,
        ))
    }

    pub fn checked_mul(&self, rhs: &Self) -> Option<Self> {
        let rr = self.re.checked_mul(&rhs.re)?;
        let ii = self.im.checked_mul(&rhs.im)?;
        let ri = self.re.checked_mul(&rhs.im)?;
        let ir = self.im.checked_mul(&rhs.re)?;
        Some(Self::new(rr.checked_sub(&ii)?, ri.checked_add(&ir)?))
    }

    pub fn checked_scale(&self, k: T) -> Option<Self> {
        Some(Self::new(self.re.checked_mul(&k)?, self.im.checked_mul(&k)?))
    }

    pub fn checked_norm(&self) -> Option<T> {
        self.re
            .checked_mul(&self.re)?
            .checked_add(&self.im.checked_mul(&self.im)?)
    }

    /// `re² + im²`.
    pub fn try_norm(&self) -> Result<T> {
        self.checked_norm().ok_or(Error::Overflow("norm"))
    }

    /// `re² + im²`; panics on overflow.
    pub fn norm(&self) -> T {
        self.checked_norm()
            .unwrap_or_else(|| panic!("overflow computing the norm of {self}"))
    }

    /// Nearest-integer Euclidean division. The remainder satisfies
    /// `norm(rem) <= norm(b) / 2`; exact halves round to the even integer.
    pub fn div_rem(&self, b: &Self) -> Result<(Self, Self)> {
        if b.is_zero() {
            return Err(Error::Domain("division by zero".into()));
        }
        let n = b.try_norm()?;
        let w = self
            .checked_mul(&b.conj())
            .ok_or(Error::Overflow("div_rem"))?;
        let q = Self::new(round_half_even(w.re, n), round_half_even(w.im, n));
        let qb = q.checked_mul(b).ok_or(Error::Overflow("div_rem"))?;
        let r = self.checked_sub(&qb).ok_or(Error::Overflow("div_rem"))?;
        Ok((q, r))
    }

    /// `self / d` when the division is exact, `None` otherwise.
    pub fn div_exact(&self, d: &Self) -> Option<Self> {
        if d.is_zero() {
            return None;
        }
        let n = d.checked_norm()?;
        let w = self.checked_mul(&d.conj())?;
        if (w.re % n).is_zero() && (w.im % n).is_zero() {
            Some(Self::new(w.re / n, w.im / n))
        } else {
            None
        }
    }

    pub fn divides(&self, other: &Self) -> bool {
        other.div_exact(self).is_some()
    }

    /// Splits a nonzero value into `unit * canonical` with the canonical
    /// factor in the first quadrant (`re >= 1`, `im >= 0`).
    pub fn canonicalize(&self) -> Result<(Self, CanonicalGaussianInt<T>)> {
        if self.is_zero() {
            return Err(Error::Domain("zero has no canonical associate".into()));
        }
        for v in Self::units() {
            let c = *self * v;
            if c.re > T::zero() && c.im >= T::zero() {
                return Ok((v.conj(), CanonicalGaussianInt(c)));
            }
        }
        unreachable!("every nonzero Gaussian integer has a first-quadrant associate")
    }

    /// Canonical associate of a greatest common divisor.
    pub fn gcd(&self, other: &Self) -> Result<CanonicalGaussianInt<T>> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::Domain("gcd(0, 0) is undefined".into()));
        }
        let (mut a, mut b) = (*self, *other);
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b)?;
            a = b;
            b = r;
        }
        Ok(a.canonicalize()?.1)
    }

    /// Extended Euclid: returns `(g, x, y)` with `x*self + y*other = g`,
    /// `g` a (not canonicalized) greatest common divisor.
    pub fn gcd_ext(&self, other: &Self) -> Result<(Self, Self, Self)> {
        if self.is_zero() && other.is_zero() {
            return Err(Error::Domain("gcd(0, 0) is undefined".into()));
        }
        let ovf = || Error::Overflow("gcd_ext");
        let (mut r0, mut r1) = (*self, *other);
        let (mut x0, mut x1) = (Self::one(), Self::zero());
        let (mut y0, mut y1) = (Self::zero(), Self::one());
        while !r1.is_zero() {
            let (q, r) = r0.div_rem(&r1)?;
            let x2 = x0.checked_sub(&q.checked_mul(&x1).ok_or_else(ovf)?).ok_or_else(ovf)?;
            let y2 = y0.checked_sub(&q.checked_mul(&y1).ok_or_else(ovf)?).ok_or_else(ovf)?;
            (r0, r1) = (r1, r);
            (x0, x1) = (x1, x2);
            (y0, y1) = (y1, y2);
        }
        Ok((r0, x0, y0))
    }

    pub fn is_coprime(&self, other: &Self) -> Result<bool> {
        Ok(self.gcd(other)?.get().is_one_value())
    }

    fn is_one_value(&self) -> bool {
        self.re.is_one() && self.im.is_zero()
    }

    /// Factorization into a unit and canonical Gaussian prime powers.
    pub fn factor(&self) -> Result<PrimeFactorization<T>> {
        if self.is_zero() {
            return Err(Error::Domain("cannot factor zero".into()));
        }
        let n = self
            .try_norm()?
            .to_u128()
            .expect("norm of a nonzero value is positive");
        let mut rest = *self;
        let mut factors = Vec::new();
        let mut strip = |p: CanonicalGaussianInt<T>, rest: &mut Self| {
            let mut k = 0u32;
            while let Some(q) = rest.div_exact(&p.0) {
                *rest = q;
                k += 1;
            }
            if k > 0 {
                factors.push((p, k));
            }
        };
        for (p, _) in factor_u128(n) {
            let cast = |x: u128| T::from(x).ok_or(Error::Overflow("factor"));
            if p == 2 {
                strip(CanonicalGaussianInt(Self::new(T::one(), T::one())), &mut rest);
            } else if p % 4 == 3 {
                strip(CanonicalGaussianInt(Self::from_int(cast(p)?)), &mut rest);
            } else {
                let (a, b) = two_squares(p).ok_or_else(|| {
                    Error::Numerical(format!("{p} is a prime 1 mod 4 with no two-square split"))
                })?;
                strip(CanonicalGaussianInt(Self::new(cast(a)?, cast(b)?)), &mut rest);
                strip(CanonicalGaussianInt(Self::new(cast(b)?, cast(a)?)), &mut rest);
            }
        }
        debug_assert!(rest.is_unit());
        factors.sort_by(|a, b| a.0.cmp(&b.0));
        Ok(PrimeFactorization {
            unit: rest,
            factors,
        })
    }
}

fn round_half_even<T: GaussScalar>(x: T, n: T) -> T {
    // n > 0
    let two = T::one() + T::one();
    let mut q = x / n;
    let mut r = x % n;
    if r < T::zero() {
        q = q - T::one();
        r = r + n;
    }
    let twice = r * two;
    match twice.cmp(&n) {
        Ordering::Greater => q + T::one(),
        Ordering::Equal if !(q % two).is_zero() => q + T::one(),
        _ => q,
    }
}

impl<T: GaussScalar> Add for GaussianInt<T> {
    type Output = Self;
    fn add(self, rhs: Self) -> Self {
        self.checked_add(&rhs)
            .unwrap_or_else(|| panic!("overflow in {self} + {rhs}"))
    }
}

impl<T: GaussScalar> Sub for GaussianInt<T> {
    type Output = Self;
    fn sub(self, rhs: Self) -> Self {
        self.checked_sub(&rhs)
            .unwrap_or_else(|| panic!("overflow in {self} - {rhs}"))
    }
}

impl<T: GaussScalar> Mul for GaussianInt<T> {
    type Output = Self;
    fn mul(self, rhs: Self) -> Self {
        self.checked_mul(&rhs)
            .unwrap_or_else(|| panic!("overflow in ({self}) * ({rhs})"))
    }
}

impl<T: GaussScalar> Neg for GaussianInt<T> {
    type Output = Self;
    fn neg(self) -> Self {
        Self::new(-self.re, -self.im)
    }
}

impl<T: GaussScalar> PartialOrd for GaussianInt<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

/// Orders by norm, then real part, then imaginary part.
impl<T: GaussScalar> Ord for GaussianInt<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.norm()
            .cmp(&other.norm())
            .then(self.re.cmp(&other.re))
            .then(self.im.cmp(&other.im))
    }
}

impl<T: GaussScalar> fmt::Display for GaussianInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let imag = |f: &mut fmt::Formatter<'_>, b: T, lead: bool| {
            let sign = if b < T::zero() {
                "-"
            } else if lead {
                ""
            } else {
                "+"
            };
            if b.abs().is_one() {
                write!(f, "{sign}i")
            } else {
                write!(f, "{sign}{}i", b.abs())
            }
        };
        if self.im.is_zero() {
            write!(f, "{}", self.re)
        } else if self.re.is_zero() {
            imag(f, self.im, true)
        } else {
            write!(f, "{}", self.re)?;
            imag(f, self.im, false)
        }
    }
}

impl<T: GaussScalar> FromStr for GaussianInt<T> {
    type Err = Error;

    /// Accepts `a`, `bi`, `i`, `-i`, `a+bi`, `a-bi`, `a+i`, `a-i`
    /// (whitespace ignored, an explicit `+` sign allowed).
    fn from_str(s: &str) -> Result<Self> {
        let bad = || Error::Input(format!("invalid Gaussian integer literal {s:?}"));
        let t: String = s.chars().filter(|c| !c.is_whitespace()).collect();
        if t.is_empty() {
            return Err(bad());
        }
        let parse_int = |x: &str| -> Result<T> {
            let digits = x.strip_prefix(['+', '-']).unwrap_or(x);
            if digits.is_empty() || !digits.chars().all(|c| c.is_ascii_digit()) {
                return Err(bad());
            }
            x.strip_prefix('+').unwrap_or(x).parse::<T>().map_err(|_| bad())
        };
        let parse_imag = |x: &str| -> Result<T> {
            let coeff = x.strip_suffix('i').ok_or_else(bad)?;
            match coeff {
                "" | "+" => Ok(T::one()),
                "-" => Ok(-T::one()),
                c => parse_int(c),
            }
        };
        if !t.ends_with('i') {
            return Ok(Self::from_int(parse_int(&t)?));
        }
        // split at the last sign that is not the leading character
        let split = t
            .char_indices()
            .skip(1)
            .filter(|&(_, c)| c == '+' || c == '-')
            .map(|(k, _)| k)
            .last();
        match split {
            Some(k) => Ok(Self::new(parse_int(&t[..k])?, parse_imag(&t[k..])?)),
            None => Ok(Self::new(T::zero(), parse_imag(&t)?)),
        }
    }
}

impl<T: GaussScalar> Serialize for GaussianInt<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

impl<'de, T: GaussScalar> Deserialize<'de> for GaussianInt<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// A member of the first-quadrant representative set: `re >= 1`, `im >= 0`.
#[derive(Clone, Copy, PartialEq, Eq, Hash, Debug)]
pub struct CanonicalGaussianInt<T>(GaussianInt<T>);

impl<T: GaussScalar> PartialOrd for CanonicalGaussianInt<T> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl<T: GaussScalar> Ord for CanonicalGaussianInt<T> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.0.cmp(&other.0)
    }
}

impl<T: GaussScalar> Serialize for CanonicalGaussianInt<T> {
    fn serialize<S: Serializer>(&self, serializer: S) -> std::result::Result<S::Ok, S::Error> {
        self.0.serialize(serializer)
    }
}

impl<T: GaussScalar> CanonicalGaussianInt<T> {
    pub fn new(q: GaussianInt<T>) -> Option<Self> {
        (q.re > T::zero() && q.im >= T::zero()).then_some(Self(q))
    }

    /// Canonical associate of a nonzero value.
    pub fn associate(q: GaussianInt<T>) -> Result<Self> {
        Ok(q.canonicalize()?.1)
    }

    pub fn one() -> Self {
        Self(GaussianInt::one())
    }

    pub fn get(&self) -> GaussianInt<T> {
        self.0
    }

    pub fn norm(&self) -> T {
        self.0.norm()
    }

    pub fn is_one(&self) -> bool {
        self.0.is_one_value()
    }
}

impl<T: GaussScalar> From<CanonicalGaussianInt<T>> for GaussianInt<T> {
    fn from(c: CanonicalGaussianInt<T>) -> Self {
        c.0
    }
}

impl<T: GaussScalar> fmt::Display for CanonicalGaussianInt<T> {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        self.0.fmt(f)
    }
}

impl<T: GaussScalar> FromStr for CanonicalGaussianInt<T> {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        let q: GaussianInt<T> = s.parse()?;
        Self::new(q).ok_or_else(|| {
            Error::Input(format!("{q} is not canonical (need re >= 1, im >= 0)"))
        })
    }
}

impl<'de, T: GaussScalar> Deserialize<'de> for CanonicalGaussianInt<T> {
    fn deserialize<D: Deserializer<'de>>(deserializer: D) -> std::result::Result<Self, D::Error> {
        let s = String::deserialize(deserializer)?;
        s.parse().map_err(serde::de::Error::custom)
    }
}

/// `unit * prod(p_k ^ e_k)` with distinct canonical primes sorted by norm.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct PrimeFactorization<T> {
    pub unit: GaussianInt<T>,
    pub factors: Vec<(CanonicalGaussianInt<T>, u32)>,
}

impl<T: GaussScalar> PrimeFactorization<T> {
    pub fn reconstruct(&self) -> GaussianInt<T> {
        let mut acc = self.unit;
        for (p, e) in &self.factors {
            for _ in 0..*e {
                acc = acc * p.get();
            }
        }
        acc
    }

    pub fn is_squarefree(&self) -> bool {
        self.factors.iter().all(|&(_, e)| e == 1)
    }

    pub fn divisor_count(&self) -> u64 {
        self.factors.iter().map(|&(_, e)| u64::from(e) + 1).product()
    }
}

/// Trial-division factorization of a rational integer.
pub fn factor_u128(mut n: u128) -> Vec<(u128, u32)> {
    let mut out = Vec::new();
    let mut take = |p: u128, n: &mut u128| {
        let mut k = 0;
        while *n % p == 0 {
            *n /= p;
            k += 1;
        }
        if k > 0 {
            out.push((p, k));
        }
    };
    take(2, &mut n);
    take(3, &mut n);
    let mut p = 5u128;
    while p * p <= n {
        take(p, &mut n);
        take(p + 2, &mut n);
        p += 6;
    }
    if n > 1 {
        out.push((n, 1));
    }
    out
}

const BRUTE_FORCE_SPLIT_LIMIT: u128 = 1_000_000;

/// `(a, b)` with `a > b > 0` and `a² + b² = p` for a prime `p ≡ 1 (mod 4)`.
pub fn two_squares(p: u128) -> Option<(u128, u128)> {
    if p % 4 != 1 {
        return None;
    }
    let (a, b) = if p < BRUTE_FORCE_SPLIT_LIMIT {
        (1..)
            .take_while(|&b: &u128| 2 * b * b < p)
            .find_map(|b| {
                let a = (p - b * b).sqrt();
                (a * a + b * b == p).then_some((a, b))
            })?
    } else {
        cornacchia(p)?
    };
    Some((a.max(b), a.min(b)))
}

fn mul_mod(a: u128, b: u128, m: u128) -> u128 {
    // operands stay below 2^64 for the primes this is called with
    a * b % m
}

fn pow_mod(mut base: u128, mut exp: u128, m: u128) -> u128 {
    let mut acc = 1 % m;
    base %= m;
    while exp > 0 {
        if exp & 1 == 1 {
            acc = mul_mod(acc, base, m);
        }
        base = mul_mod(base, base, m);
        exp >>= 1;
    }
    acc
}

fn cornacchia(p: u128) -> Option<(u128, u128)> {
    if p >= 1 << 64 {
        return None;
    }
    let root = (2..p).find_map(|c| {
        let t = pow_mod(c, (p - 1) / 4, p);
        (mul_mod(t, t, p) == p - 1).then_some(t)
    })?;
    let (mut a, mut b) = (p, root);
    let bound = p.sqrt();
    while b > bound {
        (a, b) = (b, a % b);
    }
    let rest = p - b * b;
    let c = rest.sqrt();
    (c * c == rest).then_some((b, c))
}

/// Canonical Gaussian integers with norm at most `max_norm`, in row-major
/// order: `re` ascending, then `im` ascending.
pub fn canonical_in_disc(max_norm: i64) -> impl Iterator<Item = GaussianInt<i64>> {
    let top = if max_norm >= 1 { max_norm.sqrt() } else { 0 };
    (1..=top).flat_map(move |re| {
        let im_max = (max_norm - re * re).sqrt();
        (0..=im_max).map(move |im| GaussianInt::new(re, im))
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    type G = GaussianInt<i64>;

    fn g(s: &str) -> G {
        s.parse().unwrap()
    }

    #[test]
    fn canonicalize_examples() {
        let (u, c) = g("1").canonicalize().unwrap();
        assert_eq!((u, c.get()), (g("1"), g("1")));
        let (u, c) = g("-3i").canonicalize().unwrap();
        assert_eq!((u, c.get()), (g("-i"), g("3")));
        let (u, c) = g("-1+i").canonicalize().unwrap();
        assert_eq!((u, c.get()), (g("i"), g("1+i")));
        assert!(matches!(G::zero().canonicalize(), Err(Error::Domain(_))));
    }

    #[test]
    fn norm_examples() {
        assert_eq!(g("0").norm(), 0);
        assert_eq!(g("1+i").norm(), 2);
        assert_eq!(g("3+2i").norm(), 13);
        let big = GaussianInt::<i64>::new(i64::MAX, 1);
        assert_eq!(big.try_norm(), Err(Error::Overflow("norm")));
    }

    #[test]
    fn div_rem_examples() {
        assert_eq!(g("2").div_rem(&g("1+i")).unwrap(), (g("1-i"), g("0")));
        // 5/2 = 2.5 rounds to the even quotient 2
        assert_eq!(g("5").div_rem(&g("2")).unwrap(), (g("2"), g("1")));
        assert_eq!(g("7").div_rem(&g("2")).unwrap(), (g("4"), g("-1")));
        assert_eq!(g("3-7i").div_rem(&g("1")).unwrap(), (g("3-7i"), g("0")));
        assert!(g("3").div_rem(&G::zero()).is_err());
    }

    #[test]
    fn gcd_examples() {
        assert_eq!(g("1+i").gcd(&g("2")).unwrap().get(), g("1+i"));
        assert_eq!(g("3").gcd(&g("5")).unwrap().get(), g("1"));
        assert_eq!(g("-4+2i").gcd(&G::zero()).unwrap().get(), g("2+4i"));
        assert!(G::zero().gcd(&G::zero()).is_err());
    }

    #[test]
    fn gcd_ext_bezout() {
        let (a, b) = (g("7+3i"), g("2-5i"));
        let (d, x, y) = a.gcd_ext(&b).unwrap();
        assert_eq!(x * a + y * b, d);
        assert_eq!(d.canonicalize().unwrap().1, a.gcd(&b).unwrap());
    }

    #[test]
    fn coprime_examples() {
        assert!(g("1").is_coprime(&g("1+i")).unwrap());
        assert!(!g("2").is_coprime(&g("1+i")).unwrap());
        assert!(g("2+i").is_coprime(&g("2-i")).unwrap());
    }

    #[test]
    fn factor_examples() {
        let f = g("2").factor().unwrap();
        assert_eq!(f.unit, g("-i"));
        assert_eq!(f.factors, vec![(CanonicalGaussianInt(g("1+i")), 2)]);

        let f = g("5").factor().unwrap();
        let primes: Vec<_> = f.factors.iter().map(|(p, e)| (p.get(), *e)).collect();
        assert_eq!(primes, vec![(g("1+2i"), 1), (g("2+i"), 1)]);
        assert_eq!(f.reconstruct(), g("5"));

        for p in ["1+i", "3", "2+i", "1+2i", "7", "3+2i"] {
            let f = g(p).factor().unwrap();
            assert_eq!(f.unit, g("1"));
            assert_eq!(f.factors, vec![(CanonicalGaussianInt(g(p)), 1)]);
        }
        assert!(G::zero().factor().is_err());
    }

    #[test]
    fn two_squares_both_paths() {
        assert_eq!(two_squares(5), Some((2, 1)));
        assert_eq!(two_squares(13), Some((3, 2)));
        assert_eq!(two_squares(7), None);
        // above the brute-force limit
        let p = 1_000_033u128;
        assert_eq!(p % 4, 1);
        let (a, b) = two_squares(p).unwrap();
        assert_eq!(a * a + b * b, p);
        assert_eq!(cornacchia(13), Some((3, 2)));
    }

    #[test]
    fn text_grammar() {
        assert_eq!(g("3+2i"), G::new(3, 2));
        assert_eq!(g("3 - 2i"), G::new(3, -2));
        assert_eq!(g("i"), G::new(0, 1));
        assert_eq!(g("-i"), G::new(0, -1));
        assert_eq!(g("+4"), G::new(4, 0));
        assert_eq!(g("-7i"), G::new(0, -7));
        assert_eq!(g("-1+0i"), G::new(-1, 0));
        assert_eq!(g("-1+0i").to_string(), "-1");
        assert_eq!(G::new(3, 2).to_string(), "3+2i");
        assert_eq!(G::new(3, -1).to_string(), "3-i");
        assert_eq!(G::new(0, -1).to_string(), "-i");
        for bad in ["", "i+", "2+", "1+2", "a+bi", "2ii", "--1", "1+-2i"] {
            assert!(bad.parse::<G>().is_err(), "{bad:?} parsed");
        }
    }

    #[test]
    fn disc_enumeration_order() {
        let v: Vec<_> = canonical_in_disc(4).collect();
        assert_eq!(v, vec![g("1"), g("1+i"), g("2")]);
        assert_eq!(canonical_in_disc(0).count(), 0);
    }

    #[test]
    fn wider_component_types() {
        let a = GaussianInt::<i128>::new(1 << 40, 3);
        assert_eq!(a.norm(), (1i128 << 80) + 9);
        let b = GaussianInt::<i32>::new(3, 4);
        assert_eq!(b.factor().unwrap().reconstruct(), b);
    }
}
