//! The first moment of consecutive Ford-sphere radii: direct enumeration,
//! the lattice-counting pipeline, the asymptotic main term, and the
//! auxiliary sums that feed the asymptotic.

use std::collections::BTreeMap;
use std::fmt;
use std::str::FromStr;
use std::sync::OnceLock;
use std::time::Instant;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{ToPrimitive, Zero};
use rayon::prelude::*;
use serde::{Deserialize, Serialize};

use crate::arith::zeta_i_2;
use crate::error::{Error, Result};
use crate::farey::consecutive_pairs;
use crate::gint::canonical_in_disc;
use crate::numeric::{compensated_sum, fit_line, NeumaierSum};
use crate::quad::{gauss_kronrod, tanh_sinh};
use crate::region::{
    boundary_length_surrogate, omega_area, omega_lattice_count_canonical, OmegaSpec,
};
use crate::sieve::NormSieve;
use crate::{CanonicalGInt, GInt};

pub const DEFAULT_DIRECT_CAP: u64 = 12;
pub const DEFAULT_COUNTING_CAP: u64 = 256;
pub const C_TOLERANCE: f64 = 1e-10;

/// Ladder used to fit `sum phi_i(s)/|s|^4` against `ln S`.
pub const PHI4_LADDER: [u64; 6] = [64, 128, 256, 512, 1024, 2048];

/// Constants of the asymptotic formula.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct ConstantsBundle {
    #[serde(rename = "C")]
    pub c: f64,
    pub zeta_i_2: f64,
    pub zeta_i_inv_2: f64,
    pub main_coeff: f64,
    pub z1: f64,
    pub z2_estimate: Option<f64>,
}

fn log_integrand(u: f64) -> f64 {
    -(std::f64::consts::SQRT_2 * u).ln() * (1.0 - u * u).sqrt()
}

/// `-int_0^{1/sqrt 2} ln(sqrt(2) u) sqrt(1 - u^2) du` by adaptive
/// Gauss-Kronrod; bisection concentrates near the log singularity at 0.
pub fn constant_c() -> Result<f64> {
    Ok(gauss_kronrod(log_integrand, 0.0, std::f64::consts::FRAC_1_SQRT_2, C_TOLERANCE, 2000)?.value)
}

/// The same integral by tanh-sinh, as an independent check.
pub fn constant_c_tanh_sinh() -> Result<f64> {
    Ok(tanh_sinh(log_integrand, 0.0, std::f64::consts::FRAC_1_SQRT_2, C_TOLERANCE, 14)?.value)
}

fn compute_constants() -> Result<ConstantsBundle> {
    let c = constant_c()?;
    let zeta = zeta_i_2();
    let gap = (zeta.inverse_value - 1.0 / zeta.value).abs();
    if gap > 2.0 * zeta.tail_bound() {
        return Err(Error::Numerical(format!(
            "truncated inverse zeta {} disagrees with 1/zeta {} by {gap:e}",
            zeta.inverse_value,
            1.0 / zeta.value
        )));
    }
    let inv = zeta.inverse_value;
    Ok(ConstantsBundle {
        c,
        zeta_i_2: zeta.value,
        zeta_i_inv_2: inv,
        main_coeff: std::f64::consts::PI * inv * (8.0 * c - 1.0),
        z1: std::f64::consts::PI / 8.0 * inv,
        z2_estimate: None,
    })
}

/// Constants without the fitted `z2` estimate, computed once.
pub fn constants() -> Result<ConstantsBundle> {
    static CELL: OnceLock<std::result::Result<ConstantsBundle, String>> = OnceLock::new();
    CELL.get_or_init(|| compute_constants().map_err(|e| e.to_string()))
        .clone()
        .map_err(Error::Numerical)
}

/// Constants with `z2` estimated from the log fit of `sum phi_i/|s|^4`.
pub fn constants_with_z2() -> Result<ConstantsBundle> {
    let mut bundle = constants()?;
    let fit = fit_phi_over_norm4(&PHI4_LADDER)?;
    bundle.z2_estimate = Some(fit.intercept - bundle.z1);
    Ok(bundle)
}

/// `pi zeta_i^{-1}(2) (8C - 1) S^2`.
pub fn main_term(s_max: u64) -> Result<f64> {
    Ok(constants()?.main_coeff * (s_max as f64).powi(2))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Method {
    Direct,
    Counting,
    MainTerm,
}

/// How many partner denominators each `s` contributes in the counting
/// method: every coprime lattice point of the region in the plane, or one
/// per unit orbit.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum Normalization {
    OmegaFull,
    OmegaQuarter,
}

impl fmt::Display for Method {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Method::Direct => "direct",
            Method::Counting => "counting",
            Method::MainTerm => "main-term",
        })
    }
}

impl FromStr for Method {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "direct" => Ok(Method::Direct),
            "counting" => Ok(Method::Counting),
            "main-term" => Ok(Method::MainTerm),
            other => Err(Error::Input(format!("unknown method {other:?}"))),
        }
    }
}

impl fmt::Display for Normalization {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Normalization::OmegaFull => "omega-full",
            Normalization::OmegaQuarter => "omega-quarter",
        })
    }
}

impl FromStr for Normalization {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "omega-full" => Ok(Normalization::OmegaFull),
            "omega-quarter" => Ok(Normalization::OmegaQuarter),
            other => Err(Error::Input(format!("unknown normalization {other:?}"))),
        }
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct MomentReport {
    #[serde(rename = "S")]
    pub s_max: u64,
    pub method: Method,
    pub normalization: Option<Normalization>,
    pub value: f64,
    pub main_term: f64,
    pub residual: f64,
    #[serde(rename = "elapsed_s")]
    pub elapsed: Option<f64>,
}

impl MomentReport {
    fn new(s_max: u64, method: Method, normalization: Option<Normalization>, value: f64) -> Result<Self> {
        let main = main_term(s_max)?;
        Ok(Self {
            s_max,
            method,
            normalization,
            value,
            main_term: main,
            residual: value - main,
            elapsed: None,
        })
    }
}

fn check_cap(method: &'static str, s_max: u64, cap: u64) -> Result<()> {
    if s_max == 0 {
        return Err(Error::Domain("S must be >= 1".into()));
    }
    if s_max > cap {
        return Err(Error::CapExceeded {
            method,
            requested: s_max,
            cap,
        });
    }
    Ok(())
}

/// Exact first moment: the sum of `1/(2|s|^2) + 1/(2|s'|^2)` over
/// unordered consecutive pairs.
pub fn moment_first_direct_exact(s_max: u64, cap: u64) -> Result<BigRational> {
    check_cap("direct", s_max, cap)?;
    let mut by_norm: BTreeMap<i64, u64> = BTreeMap::new();
    for (a, b) in consecutive_pairs(s_max) {
        *by_norm.entry(a.den().norm()).or_default() += 1;
        *by_norm.entry(b.den().norm()).or_default() += 1;
    }
    Ok(by_norm
        .into_iter()
        .fold(BigRational::zero(), |acc, (norm, count)| {
            acc + BigRational::new(BigInt::from(count), BigInt::from(2 * norm))
        }))
}

pub fn moment_first_direct(s_max: u64, cap: u64) -> Result<MomentReport> {
    let exact = moment_first_direct_exact(s_max, cap)?;
    let value = exact
        .to_f64()
        .ok_or_else(|| Error::Numerical("moment does not fit in f64".into()))?;
    MomentReport::new(s_max, Method::Direct, None, value)
}

fn canonical_denominators(s_max: u64) -> Vec<CanonicalGInt> {
    let mut dens: Vec<CanonicalGInt> = canonical_in_disc((s_max * s_max) as i64)
        .map(|s| CanonicalGInt::new(s).expect("disc enumeration is canonical"))
        .collect();
    dens.sort();
    dens
}

/// Number of partner denominators for `s` under a normalization.
pub fn partner_count(spec: &OmegaSpec, normalization: Normalization) -> u64 {
    let quarter = omega_lattice_count_canonical(spec, true);
    match normalization {
        Normalization::OmegaFull => 4 * quarter,
        Normalization::OmegaQuarter => quarter,
    }
}

/// `2 sum_s partner_count(s) / |s|^2` over canonical `|s| <= S`.
pub fn moment_first_counting_value(s_max: u64, normalization: Normalization, cap: u64) -> Result<f64> {
    check_cap("counting", s_max, cap)?;
    let terms: Vec<f64> = canonical_denominators(s_max)
        .par_iter()
        .map(|&s| {
            let spec = OmegaSpec::new(s, s_max).expect("s lies in the disc");
            partner_count(&spec, normalization) as f64 / s.norm() as f64
        })
        .collect();
    Ok(2.0 * compensated_sum(terms))
}

pub fn moment_first_counting(s_max: u64, normalization: Normalization, cap: u64) -> Result<MomentReport> {
    let value = moment_first_counting_value(s_max, normalization, cap)?;
    MomentReport::new(s_max, Method::Counting, Some(normalization), value)
}

pub fn moment_main_term(s_max: u64) -> Result<MomentReport> {
    let value = main_term(s_max)?;
    MomentReport::new(s_max, Method::MainTerm, None, value)
}

/// Ratio `direct / counting(omega-full)` at each `S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct Calibration {
    pub ratios: Vec<(u64, f64)>,
    /// Midpoint of the smallest and largest ratio; multiplies counting
    /// values to estimate the geometric moment.
    pub constant: f64,
    /// Largest `|ratio / constant - 1|`.
    pub max_deviation: f64,
}

pub fn calibrate(s_values: &[u64], direct_cap: u64, counting_cap: u64) -> Result<Calibration> {
    if s_values.is_empty() {
        return Err(Error::Input("calibration needs at least one S".into()));
    }
    let mut ratios = Vec::with_capacity(s_values.len());
    for &s in s_values {
        let direct = moment_first_direct(s, direct_cap)?.value;
        let counting = moment_first_counting_value(s, Normalization::OmegaFull, counting_cap)?;
        ratios.push((s, direct / counting));
    }
    let values: Vec<f64> = ratios.iter().map(|r| r.1).collect();
    let max = values.iter().cloned().fold(f64::MIN, f64::max);
    let min = values.iter().cloned().fold(f64::MAX, f64::min);
    let constant = 0.5 * (max + min);
    Ok(Calibration {
        constant,
        max_deviation: (max - min) / (max + min),
        ratios,
    })
}

/// An exact sum next to its asymptotic prediction.
#[derive(Clone, Copy, Debug, PartialEq, Serialize, Deserialize)]
pub struct SumVsPrediction {
    #[serde(rename = "S")]
    pub s_max: u64,
    pub exact: f64,
    pub prediction: f64,
}

impl SumVsPrediction {
    pub fn ratio(&self) -> f64 {
        self.exact / self.prediction
    }
}

fn phi_weighted_sum<F>(s_max: u64, sieve: &NormSieve, term: F) -> f64
where
    F: Fn(GInt, f64) -> f64 + Sync,
{
    let max_norm = (s_max * s_max) as i64;
    let rows: Vec<f64> = (1..=s_max as i64)
        .into_par_iter()
        .map(|re| {
            let mut acc = NeumaierSum::default();
            let mut im = 0;
            while re * re + im * im <= max_norm {
                let q = GInt::new(re, im);
                acc.add(term(q, sieve.mu_phi(q).phi as f64));
                im += 1;
            }
            acc.total()
        })
        .collect();
    compensated_sum(rows)
}

/// `sum phi_i(s)/|s|^4 * area(s, S)` against `(pi/2) zeta_i^{-1}(2) (8C-1) S^2`.
pub fn sum_a(s_max: u64) -> Result<SumVsPrediction> {
    if s_max == 0 {
        return Err(Error::Domain("S must be >= 1".into()));
    }
    let sieve = NormSieve::new(s_max * s_max);
    let exact = phi_weighted_sum(s_max, &sieve, |q, phi| {
        let spec = OmegaSpec::new(CanonicalGInt::new(q).expect("canonical"), s_max).expect("in disc");
        phi / (q.norm() as f64).powi(2) * omega_area(&spec)
    });
    Ok(SumVsPrediction {
        s_max,
        exact,
        prediction: 0.5 * main_term(s_max)?,
    })
}

/// `sum_a` with each area replaced by the unfiltered lattice count.
pub fn sum_a_with_lattice_counts(s_max: u64) -> Result<f64> {
    if s_max == 0 {
        return Err(Error::Domain("S must be >= 1".into()));
    }
    let sieve = NormSieve::new(s_max * s_max);
    Ok(phi_weighted_sum(s_max, &sieve, |q, phi| {
        let spec = OmegaSpec::new(CanonicalGInt::new(q).expect("canonical"), s_max).expect("in disc");
        let count = 4 * omega_lattice_count_canonical(&spec, false);
        phi / (q.norm() as f64).powi(2) * count as f64
    }))
}

/// `sum boundary_length_surrogate / |s|^(2 - eps)`.
pub fn sum_b(s_max: u64, epsilon: f64) -> Result<f64> {
    if !(epsilon > 0.0 && epsilon < 1.0) {
        return Err(Error::Domain(format!("epsilon must lie in (0, 1), got {epsilon}")));
    }
    if s_max == 0 {
        return Err(Error::Domain("S must be >= 1".into()));
    }
    let boundary = boundary_length_surrogate(&OmegaSpec::new(CanonicalGInt::one(), s_max)?);
    let terms = canonical_in_disc((s_max * s_max) as i64)
        .map(|q| (q.norm() as f64).powf(-(2.0 - epsilon) / 2.0));
    Ok(boundary * compensated_sum(terms))
}

/// `B(S) / S^(1 + eps)` along a ladder.
pub fn sum_b_growth(ladder: &[u64], epsilon: f64) -> Result<Vec<(u64, f64)>> {
    ladder
        .iter()
        .map(|&s| Ok((s, sum_b(s, epsilon)? / (s as f64).powf(1.0 + epsilon))))
        .collect()
}

/// `sum phi_i(s)/|s|^2` against `(pi/4) zeta_i^{-1}(2) S^2`.
pub fn sum_phi_over_norm2(s_max: u64) -> Result<SumVsPrediction> {
    if s_max == 0 {
        return Err(Error::Domain("S must be >= 1".into()));
    }
    let sieve = NormSieve::new(s_max * s_max);
    let exact = phi_weighted_sum(s_max, &sieve, |q, phi| phi / q.norm() as f64);
    Ok(SumVsPrediction {
        s_max,
        exact,
        prediction: std::f64::consts::FRAC_PI_4 * constants()?.zeta_i_inv_2 * (s_max as f64).powi(2),
    })
}

pub fn sum_phi_over_norm4(s_max: u64) -> Result<f64> {
    if s_max == 0 {
        return Err(Error::Domain("S must be >= 1".into()));
    }
    let sieve = NormSieve::new(s_max * s_max);
    Ok(phi_weighted_sum(s_max, &sieve, |q, phi| phi / (q.norm() as f64).powi(2)))
}

/// Least-squares fit of `sum phi_i/|s|^4` against `ln S`.
#[derive(Clone, Debug, PartialEq, Serialize, Deserialize)]
pub struct LogFit {
    pub points: Vec<(u64, f64)>,
    pub slope: f64,
    pub intercept: f64,
    /// `(pi/2) zeta_i^{-1}(2)`, the expected slope.
    pub target_slope: f64,
}

pub fn fit_phi_over_norm4(ladder: &[u64]) -> Result<LogFit> {
    let max = ladder.iter().copied().max().ok_or_else(|| Error::Input("empty ladder".into()))?;
    let sieve = NormSieve::new(max * max);
    let points: Vec<(u64, f64)> = ladder
        .iter()
        .map(|&s| (s, phi_weighted_sum(s, &sieve, |q, phi| phi / (q.norm() as f64).powi(2))))
        .collect();
    let xy: Vec<(f64, f64)> = points.iter().map(|&(s, v)| ((s as f64).ln(), v)).collect();
    let line = fit_line(&xy).ok_or_else(|| Error::Input("ladder needs two distinct S".into()))?;
    Ok(LogFit {
        points,
        slope: line.slope,
        intercept: line.intercept,
        target_slope: std::f64::consts::FRAC_PI_2 * constants()?.zeta_i_inv_2,
    })
}

/// Caps applied by [`report_sweep`].
#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct Caps {
    pub direct: u64,
    pub counting: u64,
}

impl Default for Caps {
    fn default() -> Self {
        Self {
            direct: DEFAULT_DIRECT_CAP,
            counting: DEFAULT_COUNTING_CAP,
        }
    }
}

/// One row of a sweep: a report, or the error that prevented it.
#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct SweepRow {
    #[serde(rename = "S")]
    pub s_max: u64,
    pub method: Method,
    pub report: Option<MomentReport>,
    pub error: Option<String>,
}

pub fn run_method(
    s_max: u64,
    method: Method,
    normalization: Normalization,
    caps: Caps,
    timing: bool,
) -> Result<MomentReport> {
    let start = Instant::now();
    let mut report = match method {
        Method::Direct => moment_first_direct(s_max, caps.direct),
        Method::Counting => moment_first_counting(s_max, normalization, caps.counting),
        Method::MainTerm => moment_main_term(s_max),
    }?;
    if timing {
        report.elapsed = Some(start.elapsed().as_secs_f64());
    }
    Ok(report)
}

/// Every `(S, method)` combination, S-major. Failures are recorded in the
/// row and the sweep continues.
pub fn report_sweep(
    s_values: &[u64],
    methods: &[Method],
    normalization: Normalization,
    caps: Caps,
    timing: bool,
) -> Vec<SweepRow> {
    let mut rows = Vec::with_capacity(s_values.len() * methods.len());
    for &s_max in s_values {
        for &method in methods {
            let (report, error) = match run_method(s_max, method, normalization, caps, timing) {
                Ok(r) => (Some(r), None),
                Err(e) => (None, Some(e.to_string())),
            };
            rows.push(SweepRow {
                s_max,
                method,
                report,
                error,
            });
        }
    }
    rows
}

#[cfg(test)]
mod tests {
    use super::*;
    use num_traits::One;

    #[test]
    fn constant_c_value() {
        let c = constant_c().unwrap();
        assert!((c - 0.68644).abs() < 1e-4);
        assert!((c - 0.686_440_070_037_641_964).abs() < 1e-10, "{c}");
        assert!((c - constant_c_tanh_sinh().unwrap()).abs() < 1e-8);
    }

    #[test]
    fn constants_bundle() {
        let k = constants().unwrap();
        assert!(k.c > 0.5);
        assert!((k.main_coeff - 9.365_168_784_265).abs() < 1e-6, "{}", k.main_coeff);
        assert!((k.z1 - std::f64::consts::PI / 8.0 * k.zeta_i_inv_2).abs() < 1e-15);
        assert!((k.zeta_i_inv_2 - 0.663_700_804_613_853).abs() < 1e-6);
        assert_eq!(main_term(0).unwrap(), 0.0);
        assert_eq!(main_term(14).unwrap() * 4.0, main_term(28).unwrap());
    }

    #[test]
    fn direct_small() {
        assert_eq!(moment_first_direct_exact(1, 12).unwrap(), BigRational::from_integer(4.into()));
        assert_eq!(moment_first_direct_exact(2, 12).unwrap(), BigRational::from_integer(8.into()));
        let r = moment_first_direct(3, 12).unwrap();
        assert!((r.value - 22.578).abs() < 1e-3, "{}", r.value);
        assert!(matches!(
            moment_first_direct(13, 12),
            Err(Error::CapExceeded { requested: 13, cap: 12, .. })
        ));
        assert!(moment_first_direct_exact(1, 12).unwrap() > BigRational::zero());
        assert!(!moment_first_direct_exact(2, 12).unwrap().is_one());
    }

    #[test]
    fn counting_small() {
        assert_eq!(moment_first_counting_value(1, Normalization::OmegaFull, 256).unwrap(), 8.0);
        assert_eq!(moment_first_counting_value(1, Normalization::OmegaQuarter, 256).unwrap(), 2.0);
        let full = moment_first_counting_value(8, Normalization::OmegaFull, 256).unwrap();
        assert!((full - 553.645).abs() < 1e-2, "{full}");
        let r = moment_first_counting(4, Normalization::OmegaFull, 256).unwrap();
        assert_eq!(r.residual, r.value - r.main_term);
    }

    #[test]
    fn sums_at_one() {
        assert!((sum_a(1).unwrap().exact - std::f64::consts::PI).abs() < 1e-12);
        assert_eq!(sum_phi_over_norm2(1).unwrap().exact, 1.0);
        assert_eq!(sum_phi_over_norm4(1).unwrap(), 1.0);
        assert!((sum_b(1, 0.1).unwrap() - 8.0 * std::f64::consts::PI).abs() < 1e-12);
        assert!(sum_b(4, 1.0).is_err());
    }

    #[test]
    fn sweep_shape() {
        let rows = report_sweep(&[1, 2, 4, 8], &[Method::Direct, Method::Counting], Normalization::OmegaFull, Caps::default(), false);
        assert_eq!(rows.len(), 8);
        assert!(rows.iter().all(|r| r.report.is_some()));
        let rows = report_sweep(&[13], &[Method::Direct, Method::MainTerm], Normalization::OmegaFull, Caps::default(), false);
        assert!(rows[0].error.is_some() && rows[1].report.is_some());
    }

    #[test]
    fn method_names_round_trip() {
        for m in [Method::Direct, Method::Counting, Method::MainTerm] {
            assert_eq!(m.to_string().parse::<Method>().unwrap(), m);
        }
        for n in [Normalization::OmegaFull, Normalization::OmegaQuarter] {
            assert_eq!(n.to_string().parse::<Normalization>().unwrap(), n);
        }
    }
}
