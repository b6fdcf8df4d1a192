//! Invariant suites at desk scale, one list of named checks per module.

use std::collections::{BTreeSet, HashMap};
use std::fmt;
use std::str::FromStr;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;

use crate::arith::{self, oracle};
use crate::error::{Error, Result};
use crate::farey::{self, GFraction};
use crate::gint::canonical_in_disc;
use crate::moment::{self, Normalization};
use crate::region::{self, OmegaSpec};
use crate::sieve::NormSieve;
use crate::{CanonicalGInt, GInt};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize)]
#[serde(rename_all = "lowercase")]
pub enum Suite {
    Arith,
    Farey,
    Region,
    Moment,
    All,
}

impl FromStr for Suite {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "arith" => Ok(Suite::Arith),
            "farey" => Ok(Suite::Farey),
            "region" => Ok(Suite::Region),
            "moment" => Ok(Suite::Moment),
            "all" => Ok(Suite::All),
            other => Err(Error::Input(format!("unknown suite {other:?}"))),
        }
    }
}

impl fmt::Display for Suite {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Suite::Arith => "arith",
            Suite::Farey => "farey",
            Suite::Region => "region",
            Suite::Moment => "moment",
            Suite::All => "all",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Serialize)]
pub struct Check {
    pub suite: Suite,
    pub name: &'static str,
    pub passed: bool,
    pub detail: String,
}

struct Recorder {
    suite: Suite,
    checks: Vec<Check>,
}

impl Recorder {
    fn new(suite: Suite) -> Self {
        Self {
            suite,
            checks: Vec::new(),
        }
    }

    fn record<F: FnOnce() -> Result<(bool, String)>>(&mut self, name: &'static str, check: F) {
        let (passed, detail) = check().unwrap_or_else(|e| (false, format!("error: {e}")));
        self.checks.push(Check {
            suite: self.suite,
            name,
            passed,
            detail,
        });
    }
}

fn canonical_upto_norm(max_norm: i64) -> Vec<CanonicalGInt> {
    canonical_in_disc(max_norm)
        .map(|q| CanonicalGInt::new(q).expect("disc enumeration is canonical"))
        .collect()
}

fn arith_suite() -> Vec<Check> {
    let mut r = Recorder::new(Suite::Arith);
    let qs = canonical_upto_norm(2000);

    r.record("divisor sum of phi equals norm", || {
        let bad = qs
            .iter()
            .filter(|q| arith::divisors(*q).iter().map(arith::phi_i).sum::<i64>() != q.norm())
            .count();
        Ok((bad == 0, format!("{} values, {bad} mismatches", qs.len())))
    });
    r.record("divisor sum of mu is the indicator of 1", || {
        let bad = qs
            .iter()
            .filter(|q| arith::mobius_divisor_sum(*q) != i64::from(q.is_one()))
            .count();
        Ok((bad == 0, format!("{} values, {bad} mismatches", qs.len())))
    });
    r.record("phi from factorization equals residue count", || {
        let small = canonical_upto_norm(200);
        let bad = small
            .iter()
            .filter(|q| arith::phi_i(*q) as u64 != oracle::phi_by_residues(q.get()))
            .count();
        Ok((bad == 0, format!("{} values, {bad} mismatches", small.len())))
    });
    r.record("sieve agrees with factorization", || {
        let sieve = NormSieve::new(5000);
        let all = canonical_upto_norm(5000);
        let bad = all
            .iter()
            .filter(|q| {
                let v = sieve.mu_phi(q.get());
                i64::from(v.mu) != arith::mu_i(*q) || v.phi as i64 != arith::phi_i(*q)
            })
            .count();
        Ok((bad == 0, format!("{} values, {bad} mismatches", all.len())))
    });
    r.record("mobius inversion recovers phi from the norm", || {
        let table: HashMap<CanonicalGInt, i64> = qs.iter().map(|q| (*q, q.norm())).collect();
        let mut bad = 0;
        for q in qs.iter().take(300) {
            if arith::mobius_transform(&table, q)? != arith::phi_i(q) {
                bad += 1;
            }
        }
        Ok((bad == 0, format!("300 values, {bad} mismatches")))
    });
    r.record("two-squares count formula equals lattice scan", || {
        let bad = (0..=500u64).filter(|&n| arith::r2(n) != oracle::r2_scan(n)).count();
        Ok((bad == 0, format!("n <= 500, {bad} mismatches")))
    });
    r.record("inverse zeta agrees with reciprocal within tail bound", || {
        let z = arith::zeta_i_2();
        let gap = (z.inverse_value - 1.0 / z.value).abs();
        Ok((gap <= 2.0 * z.tail_bound(), format!("gap {gap:.3e}, bound {:.3e}", 2.0 * z.tail_bound())))
    });
    r.record("phi summatory function approaches its main term", || {
        let s = arith::sum_phi_upto(128)?;
        let ratio = s.exact as f64 / s.main_term;
        Ok(((ratio - 1.0).abs() < 0.01, format!("ratio at Q = 128: {ratio:.5}")))
    });
    r.checks
}

fn sorted_pair(a: GFraction, b: GFraction) -> (GFraction, GFraction) {
    if a <= b {
        (a, b)
    } else {
        (b, a)
    }
}

/// Compares the denominator-condition route with the geometric scan at one
/// `S`. Returns (denominator pairs, degenerate count, mismatches, non-degenerate
/// pairs without exactly four fraction pairs).
pub fn denominator_route_vs_geometry(s_max: u64) -> Result<(usize, usize, usize, usize)> {
    let geometric: BTreeSet<(GFraction, GFraction)> = farey::consecutive_pairs(s_max).into_iter().collect();
    let dens = canonical_upto_norm((s_max * s_max) as i64);
    let mut from_conditions: BTreeSet<(GFraction, GFraction)> = BTreeSet::new();
    let (mut den_pairs, mut degenerate, mut not_four) = (0, 0, 0);
    for (i, s) in dens.iter().enumerate() {
        for s2 in &dens[i..] {
            if !farey::consecutive_denominator_conditions(s, s2, s_max) {
                continue;
            }
            den_pairs += 1;
            let found = farey::consecutive_pairs_for_denoms(s, s2, s_max)?;
            if found.is_degenerate() {
                degenerate += 1;
            } else if found.pairs.len() != 4 {
                not_four += 1;
            }
            from_conditions.extend(found.pairs.into_iter().map(|(a, b)| sorted_pair(a, b)));
        }
    }
    let mismatches = geometric.symmetric_difference(&from_conditions).count();
    Ok((den_pairs, degenerate, mismatches, not_four))
}

fn farey_suite() -> Vec<Check> {
    let mut r = Recorder::new(Suite::Farey);
    r.record("mediant closure equals enumeration for S <= 10", || {
        let bad: Vec<u64> = (1..=10)
            .filter(|&s| farey::generate_gs_by_mediants(s) != farey::enumerate_gs(s))
            .collect();
        Ok((bad.is_empty(), format!("failing S: {bad:?}")))
    });
    r.record("adjacency equals sphere tangency", || {
        let g = farey::enumerate_gs(4);
        let mut bad = 0;
        for (i, a) in g.iter().enumerate() {
            for b in &g[i + 1..] {
                if farey::is_adjacent(a, b) != farey::spheres_tangent(a, b)? {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0, format!("{} fractions at S = 4, {bad} mismatches", g.len())))
    });
    r.record("denominator conditions reproduce consecutive pairs for S <= 6", || {
        let mut lines = Vec::new();
        let mut ok = true;
        for s in 1..=6 {
            let (pairs, degenerate, mismatches, not_four) = denominator_route_vs_geometry(s)?;
            ok &= mismatches == 0 && not_four == 0;
            lines.push(format!("S={s}: {pairs} pairs, {degenerate} degenerate, {mismatches} mismatches, {not_four} off-four"));
        }
        Ok((ok, lines.join("; ")))
    });
    r.record("real Farey neighbours are consecutive", || {
        let mut bad = 0;
        for q in 1..=30 {
            let f = farey::enumerate_fq(q)?;
            bad += f.windows(2).filter(|w| !farey::is_consecutive_fq(&w[0], &w[1], q)).count();
        }
        Ok((bad == 0, format!("Q <= 30, {bad} failures")))
    });
    r.checks
}

fn region_suite() -> Vec<Check> {
    let mut r = Recorder::new(Suite::Region);
    r.record("membership is invariant under multiplication by i", || {
        let spec = OmegaSpec::new("3+2i".parse()?, 9)?;
        let mut bad = 0;
        for re in -10..=10 {
            for im in -10..=10 {
                let z = GInt::new(re, im);
                if region::omega_contains(z, &spec) != region::omega_contains(z * GInt::i(), &spec) {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0, format!("{bad} violations")))
    });
    r.record("closed-form area equals the polar integral", || {
        let mut rng = ChaCha8Rng::seed_from_u64(region::DEFAULT_SEED);
        let mut worst: f64 = 0.0;
        for _ in 0..100 {
            let big_s = rng.gen_range(1.0..200.0);
            let abs_s = rng.gen_range(0.01..=1.0) * big_s;
            let closed = region::omega_area_generic(abs_s, big_s)?;
            let polar = region::omega_area_by_polar_integral(abs_s, big_s)?;
            worst = worst.max((closed - polar).abs() / closed);
        }
        Ok((worst <= 1e-9, format!("worst relative gap {worst:.2e} over 100 seeded draws")))
    });
    r.record("area lower bounds hold", || {
        let mut bad = 0;
        for s_max in [4u64, 8, 16] {
            for s in canonical_upto_norm((s_max * s_max) as i64) {
                if !region::omega_area_bounds_check(&OmegaSpec::new(s, s_max)?) {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0, format!("S in {{4, 8, 16}}, {bad} violations")))
    });
    r.record("full count is four times the canonical count", || {
        let mut bad = 0;
        for s in canonical_upto_norm(64) {
            let spec = OmegaSpec::new(s, 8)?;
            for filter in [false, true] {
                if region::omega_lattice_count(&spec, filter)
                    != 4 * region::omega_lattice_count_canonical(&spec, filter)
                {
                    bad += 1;
                }
            }
        }
        Ok((bad == 0, format!("S = 8, {bad} mismatches")))
    });
    r.record("coprime counts track the prediction", || {
        let rows = region::count_sweep(32);
        let mean = rows
            .iter()
            .map(|row| (row.count_coprime as f64 - row.prediction).abs() / row.prediction)
            .sum::<f64>()
            / rows.len() as f64;
        Ok((mean <= 0.10, format!("mean relative deviation {mean:.4} at S = 32")))
    });
    r.record("unfiltered count within S of the area", || {
        let mut worst: f64 = 0.0;
        for s_max in [4u64, 8, 16, 32] {
            for row in region::count_sweep(s_max) {
                worst = worst.max((row.count as f64 - row.area).abs() / s_max as f64);
            }
        }
        Ok((worst <= 1.0, format!("max |count - area| / S = {worst:.3}")))
    });
    r.record("boundary surrogate exceeds the perimeter estimate", || {
        let spec = OmegaSpec::new("1+i".parse()?, 4)?;
        let estimate =
            region::omega_perimeter_monte_carlo(2f64.sqrt(), 4.0, 400_000, region::DEFAULT_SEED);
        let bound = region::boundary_length_surrogate(&spec);
        Ok((estimate <= bound, format!("estimate {estimate:.3}, surrogate {bound:.3}")))
    });
    r.checks
}

fn moment_suite() -> Vec<Check> {
    let mut r = Recorder::new(Suite::Moment);
    r.record("two quadratures of C agree", || {
        let a = moment::constant_c()?;
        let b = moment::constant_c_tanh_sinh()?;
        Ok(((a - b).abs() <= 1e-8 && (a - 0.68644).abs() <= 1e-4, format!("{a:.12} vs {b:.12}")))
    });
    r.record("constants are positive where required", || {
        let k = moment::constants()?;
        Ok((k.c > 0.5 && k.main_coeff > 0.0, format!("C = {:.8}, main coefficient = {:.8}", k.c, k.main_coeff)))
    });
    r.record("direct moment at S = 1 is 4", || {
        let v = moment::moment_first_direct(1, moment::DEFAULT_DIRECT_CAP)?.value;
        Ok((v == 4.0, format!("{v}")))
    });
    r.record("direct and counting agree up to a stable constant for S <= 12", || {
        let cal = moment::calibrate(&(4..=12).collect::<Vec<_>>(), moment::DEFAULT_DIRECT_CAP, moment::DEFAULT_COUNTING_CAP)?;
        Ok((
            cal.max_deviation <= 0.05,
            format!("constant {:.5}, max deviation {:.4}", cal.constant, cal.max_deviation),
        ))
    });
    r.record("counting moment over S^2 converges along a doubling ladder", || {
        let values: Vec<f64> = [16u64, 32, 64, 128]
            .iter()
            .map(|&s| moment::moment_first_counting_value(s, Normalization::OmegaFull, moment::DEFAULT_COUNTING_CAP))
            .collect::<Result<_>>()?;
        let gaps: Vec<f64> = values.windows(2).map(|w| (w[1] / (4.0 * w[0]) - 1.0).abs()).collect();
        let decreasing = gaps.windows(2).all(|g| g[1] < g[0]);
        Ok((decreasing, format!("gaps {gaps:.5?}")))
    });
    r.record("A-sum approaches half the main term", || {
        let a = moment::sum_a(128)?;
        Ok(((a.ratio() - 1.0).abs() <= 0.05, format!("ratio at S = 128: {:.5}", a.ratio())))
    });
    r.record("A-sum with lattice counts stays close to the area version", || {
        let exact = moment::sum_a(64)?.exact;
        let counts = moment::sum_a_with_lattice_counts(64)?;
        let gap = (counts - exact).abs();
        Ok((gap <= 64.0, format!("|difference| = {gap:.3} at S = 64")))
    });
    r.record("phi over norm sum approaches its prediction", || {
        let p = moment::sum_phi_over_norm2(256)?;
        Ok(((p.ratio() - 1.0).abs() <= 0.02, format!("ratio at S = 256: {:.5}", p.ratio())))
    });
    r.record("B-sum over S^(1+eps) stays below its limit", || {
        let eps = 0.1;
        let limit = 4.0 * std::f64::consts::PI.powi(2) / eps;
        let growth = moment::sum_b_growth(&[16, 32, 64, 128], eps)?;
        Ok((growth.iter().all(|g| g.1 <= limit), format!("{growth:.2?}, limit {limit:.2}")))
    });
    r.checks
}

pub fn run(suite: Suite) -> Vec<Check> {
    match suite {
        Suite::Arith => arith_suite(),
        Suite::Farey => farey_suite(),
        Suite::Region => region_suite(),
        Suite::Moment => moment_suite(),
        Suite::All => [arith_suite(), farey_suite(), region_suite(), moment_suite()].concat(),
    }
}
