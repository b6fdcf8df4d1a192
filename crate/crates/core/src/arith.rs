//! Multiplicative arithmetic functions on canonical Gaussian integers,
//! their partial sums, and truncated values of the Gaussian zeta function.

use std::collections::HashMap;
use std::ops::{Add, Mul, Neg};
use std::sync::OnceLock;

use num_integer::Roots;
use num_traits::{One, Zero};
use serde::{Deserialize, Serialize};

use crate::error::{Error, Result};
use crate::gint::{canonical_in_disc, CanonicalGaussianInt, GaussScalar, GaussianInt};
use crate::sieve::NormSieve;
use crate::numeric::NeumaierSum;
use crate::{CanonicalGInt, GInt};

/// Truncation radius used for the zeta constants unless overridden.
pub const DEFAULT_ZETA_RADIUS: f64 = 2000.0;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct ArithValue {
    pub q: CanonicalGInt,
    pub mu: i64,
    pub phi: u64,
}

impl ArithValue {
    pub fn of(q: CanonicalGInt) -> Self {
        Self {
            q,
            mu: mu_i(&q),
            phi: phi_i(&q) as u64,
        }
    }
}

/// `sum |q|^(-2s)` and `sum mu_i(q) |q|^(-2s)` over canonical `q` with
/// `|q| <= radius`.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ZetaTruncation {
    pub s: f64,
    pub radius: f64,
    pub value: f64,
    pub inverse_value: f64,
}

impl ZetaTruncation {
    /// Leading-order size of the omitted tail `sum_{|q| > radius} |q|^(-2s)`,
    /// doubled. Both `value` and `inverse_value` are within this of their
    /// limits.
    pub fn tail_bound(&self) -> f64 {
        tail_bound(self.s, self.radius)
    }
}

pub fn tail_bound(s: f64, radius: f64) -> f64 {
    2.0 * std::f64::consts::PI / (4.0 * (s - 1.0)) * radius.powf(2.0 - 2.0 * s)
}

pub fn mu_i<T: GaussScalar>(q: &CanonicalGaussianInt<T>) -> i64 {
    let f = q.get().factor().expect("canonical values are nonzero");
    if !f.is_squarefree() {
        0
    } else if f.factors.len() % 2 == 0 {
        1
    } else {
        -1
    }
}

/// Number of units of `Z[i]/qZ[i]`, from the factorization:
/// `prod (N(p)^a - N(p)^(a-1))`.
pub fn phi_i<T: GaussScalar>(q: &CanonicalGaussianInt<T>) -> T {
    let f = q.get().factor().expect("canonical values are nonzero");
    f.factors.iter().fold(T::one(), |acc, (p, a)| {
        let np = p.norm();
        let lower = np.pow(a - 1);
        acc * (lower * np - lower)
    })
}

/// All canonical divisors, sorted by norm then components.
pub fn divisors<T: GaussScalar>(q: &CanonicalGaussianInt<T>) -> Vec<CanonicalGaussianInt<T>> {
    let f = q.get().factor().expect("canonical values are nonzero");
    let mut out = vec![GaussianInt::<T>::one()];
    for (p, a) in &f.factors {
        let mut next = Vec::with_capacity(out.len() * (*a as usize + 1));
        for d in &out {
            let mut x = *d;
            next.push(x);
            for _ in 0..*a {
                x = x * p.get();
                next.push(x);
            }
        }
        out = next;
    }
    let mut out: Vec<_> = out
        .into_iter()
        .map(|d| CanonicalGaussianInt::associate(d).expect("divisors are nonzero"))
        .collect();
    out.sort();
    out
}

pub fn mobius_divisor_sum<T: GaussScalar>(q: &CanonicalGaussianInt<T>) -> i64 {
    divisors(q).iter().map(mu_i).sum()
}

/// Quotient `q / d` of a canonical divisor, canonicalized.
fn cofactor<T: GaussScalar>(
    q: &CanonicalGaussianInt<T>,
    d: &CanonicalGaussianInt<T>,
) -> CanonicalGaussianInt<T> {
    let c = q.get().div_exact(&d.get()).expect("d divides q");
    CanonicalGaussianInt::associate(c).expect("cofactor of a nonzero value")
}

/// `g(q) = sum_{d | q} mu_i(q/d) f(d)`.
pub fn mobius_transform<V>(f_table: &HashMap<CanonicalGInt, V>, q: &CanonicalGInt) -> Result<V>
where
    V: Copy + Zero + Neg<Output = V>,
{
    let mut g = V::zero();
    for d in divisors(q) {
        let fd = *f_table
            .get(&d)
            .ok_or_else(|| Error::Input(format!("table has no entry for divisor {d} of {q}")))?;
        match mu_i(&cofactor(q, &d)) {
            1 => g = g + fd,
            -1 => g = g + (-fd),
            _ => {}
        }
    }
    Ok(g)
}

/// Builds `g = mu * f` on every divisor of `q` and checks that summing `g`
/// over the divisors of `q` gives back `f(q)`.
pub fn mobius_inversion_check<V>(f_table: &HashMap<CanonicalGInt, V>, q: &CanonicalGInt) -> Result<bool>
where
    V: Copy + Zero + Neg<Output = V> + PartialEq,
{
    let fq = *f_table
        .get(q)
        .ok_or_else(|| Error::Input(format!("table has no entry for {q}")))?;
    let mut total = V::zero();
    for d in divisors(q) {
        total = total + mobius_transform(f_table, &d)?;
    }
    Ok(total == fq)
}

/// `sum_{d | q} f(d)` for multiplicative `f` given on prime powers as
/// `f(p, k)`, evaluated as `prod_p (1 + f(p) + ... + f(p^a))`.
pub fn divisor_sum_multiplicative<T, V, F>(f: F, q: &CanonicalGaussianInt<T>) -> V
where
    T: GaussScalar,
    V: Copy + One + Add<Output = V> + Mul<Output = V>,
    F: Fn(&CanonicalGaussianInt<T>, u32) -> V,
{
    let fact = q.get().factor().expect("canonical values are nonzero");
    fact.factors.iter().fold(V::one(), |acc, (p, a)| {
        let local = (1..=*a).fold(V::one(), |s, k| s + f(p, k));
        acc * local
    })
}

/// Number of ordered pairs `(a, b)` of integers with `a² + b² = n`.
pub fn r2(n: u64) -> u64 {
    if n == 0 {
        return 1;
    }
    let mut count = 4u64;
    for (p, e) in crate::gint::factor_u128(u128::from(n)) {
        match p % 4 {
            1 => count *= u64::from(e) + 1,
            3 if e % 2 == 1 => return 0,
            _ => {}
        }
    }
    count
}

/// Weighted lattice sum against its main term.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct R2Sum {
    pub sum: f64,
    pub main_term: f64,
}

/// `sum_{1 <= n <= N} n^a r2(n)`, accumulated point by point over the
/// lattice disc, next to `pi N^(a+1) / (a+1)`.
pub fn sum_r2_weighted(n_max: u64, a: f64) -> R2Sum {
    let n = n_max as i64;
    let root = n.sqrt();
    let mut acc = NeumaierSum::default();
    for x in -root..=root {
        let rest = n - x * x;
        let y_max = rest.sqrt();
        for y in -y_max..=y_max {
            let m = x * x + y * y;
            if m > 0 {
                acc.add((m as f64).powf(a));
            }
        }
    }
    R2Sum {
        sum: acc.total(),
        main_term: std::f64::consts::PI * (n_max as f64).powf(a + 1.0) / (a + 1.0),
    }
}

/// Truncated `zeta_i(s)` and `zeta_i^{-1}(s)` summed in row-major order.
pub fn zeta_i_truncated(s: f64, radius: f64) -> Result<ZetaTruncation> {
    if !(s > 1.0) {
        return Err(Error::Domain(format!("zeta_i needs s > 1, got {s}")));
    }
    if !(radius >= 1.0) {
        return Err(Error::Domain(format!("truncation radius must be >= 1, got {radius}")));
    }
    let max_norm = (radius * radius).floor() as i64;
    let sieve = NormSieve::new(max_norm as u64);
    let mut value = NeumaierSum::default();
    let mut inverse = NeumaierSum::default();
    for q in canonical_in_disc(max_norm) {
        let w = (q.norm() as f64).powf(-s);
        value.add(w);
        let mu = sieve.mu_phi(q).mu;
        if mu != 0 {
            inverse.add(f64::from(mu) * w);
        }
    }
    Ok(ZetaTruncation {
        s,
        radius,
        value: value.total(),
        inverse_value: inverse.total(),
    })
}

/// `zeta_i(2)` and `zeta_i^{-1}(2)` at [`DEFAULT_ZETA_RADIUS`], computed once.
pub fn zeta_i_2() -> &'static ZetaTruncation {
    static CELL: OnceLock<ZetaTruncation> = OnceLock::new();
    CELL.get_or_init(|| zeta_i_truncated(2.0, DEFAULT_ZETA_RADIUS).expect("valid arguments"))
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct PhiSum {
    pub exact: u128,
    pub main_term: f64,
}

/// `sum_{|q| <= Q} phi_i(q)` over canonical `q`, next to
/// `(pi/8) zeta_i^{-1}(2) Q^4`.
pub fn sum_phi_upto(q_max: u64) -> Result<PhiSum> {
    if q_max == 0 {
        return Err(Error::Domain("Q must be >= 1".into()));
    }
    let max_norm = (q_max * q_max) as i64;
    let sieve = NormSieve::new(max_norm as u64);
    let exact = canonical_in_disc(max_norm)
        .map(|q| u128::from(sieve.mu_phi(q).phi))
        .sum();
    let main_term =
        std::f64::consts::PI / 8.0 * zeta_i_2().inverse_value * (q_max as f64).powi(4);
    Ok(PhiSum { exact, main_term })
}

/// `mu_i` and `phi_i` of every canonical `s` with `|s| <= s_max`, in
/// row-major order.
pub fn arith_table(s_max: u64) -> Vec<(GInt, i8, u64)> {
    let max_norm = (s_max * s_max) as i64;
    let sieve = NormSieve::new(max_norm as u64);
    canonical_in_disc(max_norm)
        .map(|q| {
            let v = sieve.mu_phi(q);
            (q, v.mu, v.phi)
        })
        .collect()
}

/// Brute-force reference values, independent of any factorization.
pub mod oracle {
    use crate::gint::GaussianInt;
    use crate::GInt;

    /// Residues of `Z[i]/qZ[i]`: the lattice points of the half-open
    /// parallelogram `q * [0,1)^2`.
    pub fn residues(q: GInt) -> Vec<GInt> {
        let n = q.norm();
        let corners = [GInt::zero(), q, q * GInt::i(), q + q * GInt::i()];
        let lo_re = corners.iter().map(|c| c.re).min().unwrap_or(0);
        let hi_re = corners.iter().map(|c| c.re).max().unwrap_or(0);
        let lo_im = corners.iter().map(|c| c.im).min().unwrap_or(0);
        let hi_im = corners.iter().map(|c| c.im).max().unwrap_or(0);
        let mut out = Vec::with_capacity(n as usize);
        for re in lo_re..=hi_re {
            for im in lo_im..=hi_im {
                let z = GaussianInt::new(re, im);
                let w = z * q.conj();
                if (0..n).contains(&w.re) && (0..n).contains(&w.im) {
                    out.push(z);
                }
            }
        }
        out
    }

    /// `|(Z[i]/qZ[i])*|` by counting residues coprime to `q`.
    pub fn phi_by_residues(q: GInt) -> u64 {
        residues(q)
            .into_iter()
            .filter(|z| z.is_coprime(&q).expect("q is nonzero"))
            .count() as u64
    }

    /// `r2(n)` by scanning `|a|, |b| <= sqrt(n)`.
    pub fn r2_scan(n: u64) -> u64 {
        let n = n as i64;
        let mut root = 0i64;
        while (root + 1) * (root + 1) <= n {
            root += 1;
        }
        let mut count = 0;
        for a in -root..=root {
            for b in -root..=root {
                if a * a + b * b == n {
                    count += 1;
                }
            }
        }
        count
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn c(s: &str) -> CanonicalGInt {
        s.parse().unwrap()
    }

    #[test]
    fn mu_examples() {
        assert_eq!(mu_i(&c("1")), 1);
        assert_eq!(mu_i(&c("1+i")), -1);
        assert_eq!(mu_i(&c("2")), 0);
        assert_eq!(mu_i(&c("5")), 1);
    }

    #[test]
    fn phi_examples() {
        assert_eq!(phi_i(&c("1+i")), 1);
        assert_eq!(phi_i(&c("2")), 2);
        assert_eq!(phi_i(&c("3")), 8);
        assert_eq!(phi_i(&c("1")), 1);
    }

    #[test]
    fn divisor_examples() {
        assert_eq!(divisors(&c("1")), vec![c("1")]);
        assert_eq!(divisors(&c("2")), vec![c("1"), c("1+i"), c("2")]);
        assert_eq!(divisors(&c("5")), vec![c("1"), c("1+2i"), c("2+i"), c("5")]);
        assert_eq!(divisors(&c("10")).len(), 12);
    }

    #[test]
    fn mobius_sum_examples() {
        assert_eq!(mobius_divisor_sum(&c("1")), 1);
        assert_eq!(mobius_divisor_sum(&c("1+i")), 0);
        assert_eq!(mobius_divisor_sum(&c("10")), 0);
    }

    fn table(q: &CanonicalGInt, f: impl Fn(&CanonicalGInt) -> i64) -> HashMap<CanonicalGInt, i64> {
        divisors(q).into_iter().map(|d| (d, f(&d))).collect()
    }

    #[test]
    fn mobius_inversion_examples() {
        // f = |q|^2 inverts to phi_i
        let q = c("2");
        let norms = table(&q, |d| d.norm());
        assert!(mobius_inversion_check(&norms, &q).unwrap());
        assert_eq!(mobius_transform(&norms, &q).unwrap(), 2);

        let q = c("6+2i");
        assert!(mobius_inversion_check(&table(&q, |_| 1), &q).unwrap());
        assert_eq!(mobius_transform(&table(&q, |_| 1), &q).unwrap(), 0);

        let q = c("5");
        let phis = table(&q, |d| phi_i(d));
        assert!(mobius_inversion_check(&phis, &q).unwrap());

        let mut partial = norms.clone();
        partial.remove(&c("1+i"));
        assert!(matches!(mobius_inversion_check(&partial, &c("2")), Err(Error::Input(_))));
    }

    #[test]
    fn multiplicative_divisor_sums() {
        let q = c("10");
        let mu = divisor_sum_multiplicative(|_, k| if k == 1 { -1i64 } else { 0 }, &q);
        assert_eq!(mu, 0);
        let phi = divisor_sum_multiplicative(
            |p, k| {
                let n = p.norm();
                n.pow(k) - n.pow(k - 1)
            },
            &c("5"),
        );
        assert_eq!(phi, 25);
        assert_eq!(divisor_sum_multiplicative(|_, _| 1i64, &c("2")), 3);
    }

    #[test]
    fn r2_examples() {
        assert_eq!(r2(1), 4);
        assert_eq!(r2(3), 0);
        assert_eq!(r2(25), 12);
        assert_eq!(r2(0), 1);
        for n in 0..500 {
            assert_eq!(r2(n), oracle::r2_scan(n), "n = {n}");
        }
    }

    #[test]
    fn r2_weighted_small() {
        let s = sum_r2_weighted(1, 0.0);
        assert_eq!(s.sum, 4.0);
        assert!((s.main_term - std::f64::consts::PI).abs() < 1e-15);
        let s = sum_r2_weighted(10_000, 1.0);
        let exact: u64 = (1..=10_000u64).map(|n| n * r2(n)).sum();
        assert_eq!(s.sum, exact as f64);
        assert!((s.sum / s.main_term - 1.0).abs() < 0.02);
    }

    #[test]
    fn zeta_small_radius() {
        let z = zeta_i_truncated(2.0, 1.0).unwrap();
        assert_eq!(z.value, 1.0);
        assert_eq!(z.inverse_value, 1.0);
        assert!(zeta_i_truncated(1.0, 10.0).is_err());
        assert!(zeta_i_truncated(2.0, 0.5).is_err());
    }

    #[test]
    fn sum_phi_small() {
        assert_eq!(sum_phi_upto(1).unwrap().exact, 1);
        // |2+i| = sqrt(5) > 2, so only 1, 1+i and 2 qualify
        assert_eq!(sum_phi_upto(2).unwrap().exact, 4);
        let brute: u64 = canonical_in_disc(5).map(oracle::phi_by_residues).sum();
        assert_eq!(brute, 12);
        let brute: u64 = canonical_in_disc(100).map(oracle::phi_by_residues).sum();
        assert_eq!(sum_phi_upto(10).unwrap().exact, u128::from(brute));
        assert!(sum_phi_upto(0).is_err());
    }

    #[test]
    fn residue_oracle() {
        assert_eq!(oracle::residues(GInt::new(2, 1)).len(), 5);
        assert_eq!(oracle::phi_by_residues(GInt::new(2, 0)), 2);
        assert_eq!(oracle::phi_by_residues(GInt::new(3, 0)), 8);
        assert_eq!(oracle::phi_by_residues(GInt::new(1, 1)), 1);
    }
}
