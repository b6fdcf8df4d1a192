//! Small floating-point helpers shared across modules.

use num_traits::Float;

/// Neumaier-compensated running sum. The result depends only on the order
/// of the `add` calls, so a fixed iteration order gives reproducible bits.
#[derive(Clone, Copy, Debug)]
pub struct NeumaierSum<F = f64> {
    sum: F,
    compensation: F,
}

impl<F: Float> Default for NeumaierSum<F> {
    fn default() -> Self {
        Self {
            sum: F::zero(),
            compensation: F::zero(),
        }
    }
}

impl<F: Float> NeumaierSum<F> {
    pub fn add(&mut self, x: F) {
        let t = self.sum + x;
        if self.sum.abs() >= x.abs() {
            self.compensation = self.compensation + ((self.sum - t) + x);
        } else {
            self.compensation = self.compensation + ((x - t) + self.sum);
        }
        self.sum = t;
    }

    pub fn total(&self) -> F {
        self.sum + self.compensation
    }
}

impl<F: Float> FromIterator<F> for NeumaierSum<F> {
    fn from_iter<I: IntoIterator<Item = F>>(iter: I) -> Self {
        let mut acc = Self::default();
        for x in iter {
            acc.add(x);
        }
        acc
    }
}

/// Compensated sum of an iterator in iteration order.
pub fn compensated_sum<F: Float, I: IntoIterator<Item = F>>(iter: I) -> F {
    iter.into_iter().collect::<NeumaierSum<F>>().total()
}

/// Ordinary least-squares line `y = slope * x + intercept`.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct LineFit<F = f64> {
    pub slope: F,
    pub intercept: F,
}

pub fn fit_line<F: Float>(points: &[(F, F)]) -> Option<LineFit<F>> {
    if points.len() < 2 {
        return None;
    }
    let n = F::from(points.len())?;
    let mean_x = compensated_sum(points.iter().map(|p| p.0)) / n;
    let mean_y = compensated_sum(points.iter().map(|p| p.1)) / n;
    let sxx = compensated_sum(points.iter().map(|p| (p.0 - mean_x).powi(2)));
    let sxy = compensated_sum(points.iter().map(|p| (p.0 - mean_x) * (p.1 - mean_y)));
    if sxx == F::zero() {
        return None;
    }
    let slope = sxy / sxx;
    Some(LineFit {
        slope,
        intercept: mean_y - slope * mean_x,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn compensation_recovers_lost_bits() {
        let xs = [1.0, 1e100, 1.0, -1e100];
        assert_eq!(xs.iter().sum::<f64>(), 0.0);
        assert_eq!(compensated_sum(xs), 2.0);
    }

    #[test]
    fn exact_line() {
        let pts: Vec<(f64, f64)> = (0..5).map(|i| (i as f64, 3.0 * i as f64 - 2.0)).collect();
        let fit = fit_line(&pts).unwrap();
        assert!((fit.slope - 3.0).abs() < 1e-12);
        assert!((fit.intercept + 2.0).abs() < 1e-12);
        assert!(fit_line(&pts[..1]).is_none());
        let f32_pts = [(0.0f32, 1.0f32), (1.0, 2.0)];
        assert_eq!(fit_line(&f32_pts).unwrap().slope, 1.0);
    }
}
