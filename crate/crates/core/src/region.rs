//! The region of partner denominators: points of the disc `|z| <= S` lying
//! outside at least one of the four circles `|z + u s| = S`.

use num_traits::{Float, FloatConst};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use crate::arith::phi_i;
use crate::error::{Error, Result};
use crate::quad::gauss_kronrod;
use crate::{CanonicalGInt, GInt};

pub const DEFAULT_SEED: u64 = 0x5eed_f0d5;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
pub struct OmegaSpec {
    s: CanonicalGInt,
    s_max: u64,
}

impl OmegaSpec {
    pub fn new(s: CanonicalGInt, s_max: u64) -> Result<Self> {
        if s_max == 0 {
            return Err(Error::Domain("S must be >= 1".into()));
        }
        let spec = Self { s, s_max };
        if s.norm() > spec.max_norm() {
            return Err(Error::Domain(format!("|{s}| exceeds S = {s_max}")));
        }
        Ok(spec)
    }

    pub fn s(&self) -> CanonicalGInt {
        self.s
    }

    pub fn s_max(&self) -> u64 {
        self.s_max
    }

    pub fn max_norm(&self) -> i64 {
        (self.s_max * self.s_max) as i64
    }
}

/// `norm(z) <= S^2` and `norm(z + u s) > S^2` for some unit.
pub fn omega_contains(z: GInt, spec: &OmegaSpec) -> bool {
    let limit = spec.max_norm();
    let s = spec.s.get();
    // max over units of norm(z + u s) = norm(z) + norm(s) + 2 max(|Re w|, |Im w|), w = z conj(s)
    let w = z * s.conj();
    let nz = z.norm();
    nz <= limit && nz + s.norm() + 2 * w.re.abs().max(w.im.abs()) > limit
}

/// Closed form of the area for `|s| = abs_s <= S = big_s`.
pub fn omega_area_generic<F: Float + FloatConst>(abs_s: F, big_s: F) -> Result<F> {
    if !(abs_s >= F::zero() && abs_s <= big_s) {
        return Err(Error::Domain("area requires 0 <= |s| <= S".into()));
    }
    let two = F::one() + F::one();
    let sqrt2 = two.sqrt();
    let ratio = (abs_s / (sqrt2 * big_s)).min(F::FRAC_1_SQRT_2());
    let theta = ratio.asin();
    let cos_theta = (F::one() - ratio * ratio).max(F::zero()).sqrt();
    Ok(two * two * big_s * big_s * theta + two * sqrt2 * abs_s * big_s * cos_theta
        - two * abs_s * abs_s)
}

pub fn omega_area(spec: &OmegaSpec) -> f64 {
    let abs_s = (spec.s.norm() as f64).sqrt();
    omega_area_generic(abs_s, spec.s_max as f64).expect("spec enforces |s| <= S")
}

/// Area as `-2|s|^2 + 8 S^2 * int_0^theta cos^2`, integrated numerically.
pub fn omega_area_by_angle_integral(abs_s: f64, big_s: f64) -> Result<f64> {
    if !(0.0..=big_s).contains(&abs_s) {
        return Err(Error::Domain("area requires 0 <= |s| <= S".into()));
    }
    let theta = (abs_s / (std::f64::consts::SQRT_2 * big_s)).min(std::f64::consts::FRAC_1_SQRT_2).asin();
    let q = gauss_kronrod(|u: f64| u.cos().powi(2), 0.0, theta, 1e-15, 200)?;
    Ok(8.0 * big_s * big_s * q.value - 2.0 * abs_s * abs_s)
}

/// Area as the polar integral `8 int_0^{pi/4} int_{rho(t)}^S r dr dt`, with
/// `rho` the distance from 0 to the circle `|z - |s|| = S` along angle `t`.
pub fn omega_area_by_polar_integral(abs_s: f64, big_s: f64) -> Result<f64> {
    if !(0.0..=big_s).contains(&abs_s) {
        return Err(Error::Domain("area requires 0 <= |s| <= S".into()));
    }
    let inner = |t: f64| {
        let rho = (big_s * big_s - (abs_s * t.sin()).powi(2)).max(0.0).sqrt() - abs_s * t.cos();
        big_s * big_s - rho * rho
    };
    let scale = big_s * big_s;
    let q = gauss_kronrod(inner, 0.0, std::f64::consts::FRAC_PI_4, 1e-13 * scale, 200)?;
    Ok(4.0 * q.value)
}

/// Monte Carlo area over the bounding square, using real membership.
pub fn omega_area_monte_carlo(abs_s: f64, big_s: f64, samples: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let hits = (0..samples)
        .filter(|_| {
            let x = rng.gen_range(-big_s..=big_s);
            let y = rng.gen_range(-big_s..=big_s);
            real_contains(x, y, abs_s, big_s)
        })
        .count();
    4.0 * big_s * big_s * hits as f64 / samples as f64
}

fn real_contains(x: f64, y: f64, abs_s: f64, big_s: f64) -> bool {
    let r2 = x * x + y * y;
    r2 <= big_s * big_s && r2 + abs_s * abs_s + 2.0 * abs_s * x.abs().max(y.abs()) > big_s * big_s
}

/// Perimeter estimate from short random needles: a needle of length `d`
/// with uniform direction crosses a curve of length `L` in a box of area `A`
/// with probability about `2 d L / (pi A)`.
pub fn omega_perimeter_monte_carlo(abs_s: f64, big_s: f64, samples: u64, seed: u64) -> f64 {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let needle = big_s * 1e-3;
    let lo = -big_s - needle;
    let hi = big_s + needle;
    let crossings = (0..samples)
        .filter(|_| {
            let x = rng.gen_range(lo..=hi);
            let y = rng.gen_range(lo..=hi);
            let t = rng.gen_range(0.0..std::f64::consts::TAU);
            let (x2, y2) = (x + needle * t.cos(), y + needle * t.sin());
            real_contains(x, y, abs_s, big_s) != real_contains(x2, y2, abs_s, big_s)
        })
        .count();
    let box_area = (hi - lo) * (hi - lo);
    std::f64::consts::PI * box_area * crossings as f64 / (2.0 * needle * samples as f64)
}

/// Divisibility test by the distinct Gaussian primes of a fixed modulus.
#[derive(Clone, Debug)]
pub struct CoprimeTest {
    primes: Vec<(GInt, i64)>,
}

impl CoprimeTest {
    pub fn new(s: &CanonicalGInt) -> Self {
        let primes = s
            .get()
            .factor()
            .expect("canonical values are nonzero")
            .factors
            .iter()
            .map(|(p, _)| (p.get().conj(), p.norm()))
            .collect();
        Self { primes }
    }

    pub fn is_coprime(&self, z: GInt) -> bool {
        self.primes.iter().all(|&(pc, n)| {
            let w = z * pc;
            w.re % n != 0 || w.im % n != 0
        })
    }
}

fn row_count(spec: &OmegaSpec, test: Option<&CoprimeTest>, re: i64, im_lo: i64, im_hi: i64) -> u64 {
    (im_lo..=im_hi)
        .map(|im| GInt::new(re, im))
        .filter(|&z| omega_contains(z, spec) && test.map_or(true, |t| t.is_coprime(z)))
        .count() as u64
}

fn row_half_width(spec: &OmegaSpec, re: i64) -> i64 {
    num_integer::Roots::sqrt(&(spec.max_norm() - re * re))
}

/// Lattice points of the region over the whole plane, optionally only
/// those coprime to `s`. Rows of `re(z)` are scanned in parallel.
pub fn omega_lattice_count(spec: &OmegaSpec, coprime_filter: bool) -> u64 {
    let test = coprime_filter.then(|| CoprimeTest::new(&spec.s));
    let s_max = spec.s_max as i64;
    (-s_max..=s_max)
        .into_par_iter()
        .map(|re| {
            let w = row_half_width(spec, re);
            row_count(spec, test.as_ref(), re, -w, w)
        })
        .sum()
}

/// The same count restricted to `re > 0, im >= 0`, one point per unit
/// orbit. The origin never belongs to the region, so the full count is
/// exactly four times this one.
pub fn omega_lattice_count_canonical(spec: &OmegaSpec, coprime_filter: bool) -> u64 {
    let test = coprime_filter.then(|| CoprimeTest::new(&spec.s));
    (1..=spec.s_max as i64)
        .map(|re| row_count(spec, test.as_ref(), re, 0, row_half_width(spec, re)))
        .sum()
}

/// `phi_i(s) / |s|^2 * area`.
pub fn coprime_count_prediction(spec: &OmegaSpec) -> f64 {
    phi_i(&spec.s) as f64 / spec.s.norm() as f64 * omega_area(spec)
}

/// Two lower bounds on the area: `2|s|^2` when `S <= 2|s|`, otherwise
/// `2 (sqrt 7 - 1) S |s|`.
pub fn omega_area_bounds_check(spec: &OmegaSpec) -> bool {
    let abs_s = (spec.s.norm() as f64).sqrt();
    let big_s = spec.s_max as f64;
    let area = omega_area(spec);
    if big_s <= 2.0 * abs_s {
        area >= 2.0 * abs_s * abs_s
    } else {
        area >= 2.0 * (7f64.sqrt() - 1.0) * big_s * abs_s
    }
}

pub const BOUNDARY_SURROGATE_FACTOR: f64 = 8.0 * std::f64::consts::PI;

/// Upper bound `8 pi S` used in place of the boundary length.
pub fn boundary_length_surrogate(spec: &OmegaSpec) -> f64 {
    BOUNDARY_SURROGATE_FACTOR * spec.s_max as f64
}

/// One line of a count-versus-area sweep.
#[derive(Clone, Copy, Debug, Serialize)]
pub struct CountRow {
    pub s: CanonicalGInt,
    pub s_max: u64,
    pub area: f64,
    pub count: u64,
    pub count_coprime: u64,
    pub prediction: f64,
}

impl CountRow {
    pub fn of(spec: &OmegaSpec) -> Self {
        Self {
            s: spec.s,
            s_max: spec.s_max,
            area: omega_area(spec),
            count: 4 * omega_lattice_count_canonical(spec, false),
            count_coprime: 4 * omega_lattice_count_canonical(spec, true),
            prediction: coprime_count_prediction(spec),
        }
    }
}

/// A row for every canonical `s` with `|s| <= S`, in canonical order.
pub fn count_sweep(s_max: u64) -> Vec<CountRow> {
    let mut dens: Vec<CanonicalGInt> = crate::gint::canonical_in_disc((s_max * s_max) as i64)
        .map(|s| CanonicalGInt::new(s).expect("disc enumeration is canonical"))
        .collect();
    dens.sort();
    dens.par_iter()
        .map(|&s| CountRow::of(&OmegaSpec::new(s, s_max).expect("s lies in the disc")))
        .collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::f64::consts::PI;

    fn spec(s: &str, big_s: u64) -> OmegaSpec {
        OmegaSpec::new(s.parse().unwrap(), big_s).unwrap()
    }

    #[test]
    fn membership_examples() {
        let sp = spec("1", 1);
        assert!(!omega_contains(GInt::zero(), &sp));
        assert!(omega_contains(GInt::one(), &sp));
        let sp = spec("2+i", 5);
        for re in -6..=6 {
            for im in -6..=6 {
                let z = GInt::new(re, im);
                assert_eq!(omega_contains(z, &sp), omega_contains(z * GInt::i(), &sp));
                let literal = z.norm() <= 25
                    && GInt::units().iter().any(|&u| (z + u * sp.s().get()).norm() > 25);
                assert_eq!(omega_contains(z, &sp), literal);
            }
        }
        assert!(OmegaSpec::new("2+i".parse().unwrap(), 2).is_err());
    }

    #[test]
    fn area_examples() {
        let a = omega_area(&spec("1", 1));
        assert!((a - PI).abs() < 1e-12);
        let a = omega_area(&spec("3+4i", 5));
        assert!((a - 25.0 * PI).abs() < 1e-10);
        let a = omega_area(&spec("1", 2));
        assert!((a - 9.0735).abs() < 1e-3, "{a}");
        let thin = omega_area_generic(1e-3, 10.0).unwrap();
        assert!((thin / (4.0 * 2f64.sqrt() * 10.0 * 1e-3) - 1.0).abs() < 1e-3);
        assert!(omega_area_generic(2.0f32, 1.0).is_err());
        let a32 = omega_area_generic(1.0f32, 2.0).unwrap();
        assert!((a32 - 9.0735).abs() < 1e-3);
    }

    #[test]
    fn area_matches_both_integrals() {
        for &(abs_s, big_s) in &[(1.0, 2.0), (0.3, 7.0), (5.0, 5.0), (2.5, 3.0)] {
            let closed = omega_area_generic(abs_s, big_s).unwrap();
            let angle = omega_area_by_angle_integral(abs_s, big_s).unwrap();
            let polar = omega_area_by_polar_integral(abs_s, big_s).unwrap();
            assert!((closed - angle).abs() <= 1e-10 * closed, "{closed} {angle}");
            assert!((closed - polar).abs() <= 1e-10 * closed, "{closed} {polar}");
        }
    }

    #[test]
    fn monte_carlo_area_and_perimeter() {
        let mc = omega_area_monte_carlo(1.0, 2.0, 400_000, DEFAULT_SEED);
        assert!((mc - 9.0735).abs() < 0.1, "{mc}");
        let sp = spec("1+i", 4);
        let per = omega_perimeter_monte_carlo(2f64.sqrt(), 4.0, 400_000, DEFAULT_SEED);
        // outer circle alone has length 8 pi
        assert!(per > 2.0 * PI * 4.0 && per <= boundary_length_surrogate(&sp), "{per}");
    }

    #[test]
    fn lattice_examples() {
        assert_eq!(omega_lattice_count(&spec("1", 1), true), 4);
        let sp = spec("1+i", 3);
        let full = omega_lattice_count(&sp, true);
        assert_eq!(full, 4 * omega_lattice_count_canonical(&sp, true));
        assert!(full <= omega_lattice_count(&sp, false));
        let brute = (-3..=3)
            .flat_map(|re| (-3..=3).map(move |im| GInt::new(re, im)))
            .filter(|&z| omega_contains(z, &sp) && z.is_coprime(&sp.s().get()).unwrap())
            .count() as u64;
        assert_eq!(full, brute);
    }

    #[test]
    fn prediction_examples() {
        let sp = spec("1", 6);
        assert_eq!(coprime_count_prediction(&sp), omega_area(&sp));
        let sp = spec("1+i", 4);
        assert!((coprime_count_prediction(&sp) - 0.5 * omega_area(&sp)).abs() < 1e-12);
    }

    #[test]
    fn bounds_and_surrogate() {
        assert!(omega_area_bounds_check(&spec("3+4i", 5)));
        let sp = spec("1", 10);
        assert!(omega_area(&sp) >= 2.0 * (7f64.sqrt() - 1.0) * 10.0);
        assert!(omega_area_bounds_check(&sp));
        assert!((boundary_length_surrogate(&spec("1", 1)) - 8.0 * PI).abs() < 1e-12);
    }

    #[test]
    fn coprime_test_agrees_with_gcd() {
        for s in ["1", "1+i", "3", "2+i", "6+3i", "5"] {
            let s: CanonicalGInt = s.parse().unwrap();
            let t = CoprimeTest::new(&s);
            for re in -8..=8 {
                for im in -8..=8 {
                    let z = GInt::new(re, im);
                    if !z.is_zero() {
                        assert_eq!(t.is_coprime(z), z.is_coprime(&s.get()).unwrap());
                    }
                }
            }
        }
    }
}
