//! One-dimensional quadrature: globally adaptive Gauss-Kronrod (7/15) and
//! tanh-sinh. Both tolerate integrable endpoint singularities such as
//! `ln x` at 0; Gauss-Kronrod by bisecting toward the singular end,
//! tanh-sinh by never evaluating the endpoint itself.

use std::cmp::Ordering;
use std::collections::BinaryHeap;

use num_traits::{Float, FloatConst};

use crate::error::{Error, Result};
use crate::numeric::compensated_sum;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<F> {
    pub value: F,
    pub abs_error: F,
    pub evaluations: usize,
}

const XGK: [f64; 8] = [
    0.991_455_371_120_812_639_206_854_697_526_329,
    0.949_107_912_342_758_524_526_189_684_047_851,
    0.864_864_423_359_769_072_789_712_788_640_926,
    0.741_531_185_599_394_439_863_864_773_280_788,
    0.586_087_235_467_691_130_294_144_845_693_013,
    0.405_845_151_377_397_166_906_606_412_076_961,
    0.207_784_955_007_898_467_600_689_403_773_245,
    0.0,
];

const WGK: [f64; 8] = [
    0.022_935_322_010_529_224_963_732_008_058_970,
    0.063_092_092_629_978_553_290_700_663_189_204,
    0.104_790_010_322_250_183_839_876_322_541_518,
    0.140_653_259_715_525_918_745_189_590_510_238,
    0.169_004_726_639_267_902_826_583_426_598_550,
    0.190_350_578_064_785_409_913_256_402_421_014,
    0.204_432_940_075_298_892_414_161_999_234_649,
    0.209_482_141_084_727_828_012_999_174_891_714,
];

// weights of the embedded 7-point Gauss rule at XGK[1], XGK[3], XGK[5], XGK[7]
const WG: [f64; 4] = [
    0.129_484_966_168_869_693_270_611_432_679_082,
    0.279_705_391_489_276_667_901_467_771_423_780,
    0.381_830_050_505_118_944_950_369_775_488_975,
    0.417_959_183_673_469_387_755_102_040_816_327,
];

fn c<F: Float>(x: f64) -> F {
    F::from(x).expect("constant representable in F")
}

/// 15-point Kronrod estimate on `[a, b]` with `|K15 - G7|` as its error.
fn kronrod15<F: Float, G: Fn(F) -> F>(f: &G, a: F, b: F) -> (F, F) {
    let half = c::<F>(0.5);
    let center = half * (a + b);
    let half_len = half * (b - a);
    let f_center = f(center);
    let mut kronrod = f_center * c(WGK[7]);
    let mut gauss = f_center * c(WG[3]);
    for j in 0..7 {
        let dx = half_len * c(XGK[j]);
        let pair = f(center - dx) + f(center + dx);
        kronrod = kronrod + c::<F>(WGK[j]) * pair;
        if j % 2 == 1 {
            gauss = gauss + c::<F>(WG[j / 2]) * pair;
        }
    }
    (kronrod * half_len, ((kronrod - gauss) * half_len).abs())
}

struct Piece<F> {
    a: F,
    b: F,
    value: F,
    error: F,
}

impl<F: Float> PartialEq for Piece<F> {
    fn eq(&self, other: &Self) -> bool {
        self.error == other.error
    }
}
impl<F: Float> Eq for Piece<F> {}
impl<F: Float> PartialOrd for Piece<F> {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}
impl<F: Float> Ord for Piece<F> {
    fn cmp(&self, other: &Self) -> Ordering {
        self.error.partial_cmp(&other.error).unwrap_or(Ordering::Equal)
    }
}

/// Globally adaptive Gauss-Kronrod: repeatedly bisects the subinterval with
/// the largest error estimate until the summed estimate is below `abs_tol`.
pub fn gauss_kronrod<F, G>(f: G, a: F, b: F, abs_tol: F, max_intervals: usize) -> Result<Quadrature<F>>
where
    F: Float,
    G: Fn(F) -> F,
{
    let mut heap = BinaryHeap::new();
    let (value, error) = kronrod15(&f, a, b);
    heap.push(Piece { a, b, value, error });
    let mut evaluations = 15;
    loop {
        let total_error = compensated_sum(heap.iter().map(|p| p.error));
        if total_error <= abs_tol {
            let value = compensated_sum(heap.iter().map(|p| p.value));
            if !value.is_finite() {
                return Err(Error::Numerical("integrand produced a non-finite value".into()));
            }
            return Ok(Quadrature {
                value,
                abs_error: total_error,
                evaluations,
            });
        }
        if heap.len() >= max_intervals {
            return Err(Error::Numerical(format!(
                "Gauss-Kronrod did not reach {:e} within {max_intervals} subintervals (estimate {:e})",
                abs_tol.to_f64().unwrap_or(f64::NAN),
                total_error.to_f64().unwrap_or(f64::NAN)
            )));
        }
        let worst = heap.pop().expect("heap is never empty");
        let mid = (worst.a + worst.b) * c(0.5);
        if !(mid > worst.a && mid < worst.b) {
            return Err(Error::Numerical("subinterval collapsed below machine precision".into()));
        }
        for (lo, hi) in [(worst.a, mid), (mid, worst.b)] {
            let (value, error) = kronrod15(&f, lo, hi);
            heap.push(Piece { a: lo, b: hi, value, error });
        }
        evaluations += 30;
    }
}

/// Tanh-sinh (double exponential) quadrature with step halving until two
/// successive levels agree to `abs_tol`.
pub fn tanh_sinh<F, G>(f: G, a: F, b: F, abs_tol: F, max_levels: u32) -> Result<Quadrature<F>>
where
    F: Float + FloatConst,
    G: Fn(F) -> F,
{
    let half_width = (b - a) * c(0.5);
    let half_pi = F::FRAC_PI_2();
    let one = F::one();
    let two = c::<F>(2.0);
    let t_max = c::<F>(6.5);
    // Contribution of the abscissae t = k*h for odd k (or all k at level 0).
    let level_sum = |h: F, step: usize| -> (F, usize) {
        let mut terms = Vec::new();
        let mut evaluations = 0;
        let mut k = if step == 1 { 0usize } else { 1 };
        loop {
            let t = h * F::from(k).expect("index fits");
            if t > t_max {
                break;
            }
            let y = half_pi * t.sinh();
            let weight = half_pi * t.cosh() / (y.cosh() * y.cosh());
            // 1 - tanh(y), computed without cancellation
            let gap = two / ((two * y).exp() + one);
            let offset = half_width * gap;
            if weight < F::min_positive_value() || offset <= F::zero() {
                break;
            }
            let left = a + offset;
            let right = b - offset;
            let mut pair = F::zero();
            if left > a && left < b {
                pair = pair + f(left);
                evaluations += 1;
            }
            if k != 0 && right < b && right > a {
                pair = pair + f(right);
                evaluations += 1;
            }
            terms.push(weight * pair);
            k += step;
        }
        (compensated_sum(terms), evaluations)
    };

    let mut h = one;
    let (mut raw, mut evaluations) = level_sum(h, 1);
    let mut estimate = raw * h * half_width;
    for _ in 0..max_levels {
        h = h * c(0.5);
        let (part, count) = level_sum(h, 2);
        raw = raw + part;
        evaluations += count;
        let refined = raw * h * half_width;
        let diff = (refined - estimate).abs();
        estimate = refined;
        if diff <= abs_tol {
            if !estimate.is_finite() {
                return Err(Error::Numerical("integrand produced a non-finite value".into()));
            }
            return Ok(Quadrature {
                value: estimate,
                abs_error: diff,
                evaluations,
            });
        }
    }
    Err(Error::Numerical(format!(
        "tanh-sinh did not converge within {max_levels} levels"
    )))
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn polynomials_are_exact() {
        let q = gauss_kronrod(|x: f64| x * x * x - 2.0 * x, 0.0, 2.0, 1e-14, 10).unwrap();
        assert!((q.value - 0.0).abs() < 1e-14);
        let q = gauss_kronrod(|x: f64| x.powi(6), -1.0, 1.0, 1e-13, 10).unwrap();
        assert!((q.value - 2.0 / 7.0).abs() < 1e-14);
    }

    #[test]
    fn log_endpoint_both_schemes() {
        // int_0^1 ln x dx = -1
        let g = gauss_kronrod(|x: f64| x.ln(), 0.0, 1.0, 1e-12, 500).unwrap();
        assert!((g.value + 1.0).abs() < 1e-11, "{}", g.value);
        let t = tanh_sinh(|x: f64| x.ln(), 0.0, 1.0, 1e-12, 12).unwrap();
        assert!((t.value + 1.0).abs() < 1e-11, "{}", t.value);
    }

    #[test]
    fn inverse_sqrt_singularity() {
        // int_0^1 x^(-1/2) dx = 2
        let t = tanh_sinh(|x: f64| x.powf(-0.5), 0.0, 1.0, 1e-12, 12).unwrap();
        assert!((t.value - 2.0).abs() < 1e-10);
    }

    #[test]
    fn single_precision() {
        let q = gauss_kronrod(|x: f32| x.cos(), 0.0, 1.0, 1e-5, 50).unwrap();
        assert!((q.value - 1f32.sin()).abs() < 1e-5);
    }

    #[test]
    fn non_convergence_is_reported() {
        let r = gauss_kronrod(|x: f64| 1.0 / x, 0.0, 1.0, 1e-10, 20);
        assert!(matches!(r, Err(Error::Numerical(_))));
    }
}
