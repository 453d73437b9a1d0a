//! Lévy distance between empirical distributions.

use serde::{Deserialize, Serialize};

/// Equal-weight distribution on a sorted list of support points.
#[derive(Debug, Clone, PartialEq, Serialize, Deserialize)]
pub struct EmpiricalDistribution {
    points: Vec<f64>,
}

impl EmpiricalDistribution {
    pub fn new(mut points: Vec<f64>) -> Self {
        points.sort_by(f64::total_cmp);
        EmpiricalDistribution { points }
    }

    pub fn from_sorted(points: Vec<f64>) -> Self {
        debug_assert!(points.windows(2).all(|w| w[0] <= w[1]));
        EmpiricalDistribution { points }
    }

    pub fn points(&self) -> &[f64] {
        &self.points
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    /// `F(x) = #{p <= x} / n`.
    pub fn cdf(&self, x: f64) -> f64 {
        self.points.partition_point(|&p| p <= x) as f64 / self.points.len() as f64
    }
}

/// `F_a(x) <= F_b(x + eps) + eps` for every `x`. `F_a` is piecewise constant
/// and `F_b(· + eps)` non-decreasing, so checking at the jumps of `F_a`
/// suffices; one merged sweep.
fn dominated(a: &[f64], b: &[f64], eps: f64) -> bool {
    let (na, nb) = (a.len() as f64, b.len() as f64);
    let mut j = 0;
    let mut i = 0;
    while i < a.len() {
        let x = a[i];
        while i + 1 < a.len() && a[i + 1] == x {
            i += 1;
        }
        let fa = (i + 1) as f64 / na;
        let shifted = x + eps;
        while j < b.len() && b[j] <= shifted {
            j += 1;
        }
        if fa > j as f64 / nb + eps {
            return false;
        }
        i += 1;
    }
    true
}

/// Whether `eps` satisfies the two-sided Lévy band condition.
pub fn levy_feasible(f: &EmpiricalDistribution, g: &EmpiricalDistribution, eps: f64) -> bool {
    dominated(&g.points, &f.points, eps) && dominated(&f.points, &g.points, eps)
}

const BISECTION_STEPS: usize = 40;

/// Smallest `eps` with `F(x - eps) - eps <= G(x) <= F(x + eps) + eps` for all
/// `x`, by bisection on `[0, 1]`.
pub fn levy_distance(f: &EmpiricalDistribution, g: &EmpiricalDistribution) -> f64 {
    assert!(!f.is_empty() && !g.is_empty(), "Lévy distance needs non-empty distributions");
    if levy_feasible(f, g, 0.0) {
        return 0.0;
    }
    let (mut lo, mut hi) = (0.0, 1.0);
    for _ in 0..BISECTION_STEPS {
        let mid = 0.5 * (lo + hi);
        if levy_feasible(f, g, mid) {
            hi = mid;
        } else {
            lo = mid;
        }
    }
    hi
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn ed(v: &[f64]) -> EmpiricalDistribution {
        EmpiricalDistribution::new(v.to_vec())
    }

    /// Direct check of the band condition on a fine grid of `x`.
    fn grid_feasible(f: &EmpiricalDistribution, g: &EmpiricalDistribution, eps: f64) -> bool {
        let lo = f.points()[0].min(g.points()[0]) - 2.0;
        let hi = f.points()[f.len() - 1].max(g.points()[g.len() - 1]) + 2.0;
        let steps = 20_000;
        (0..=steps).all(|s| {
            let x = lo + (hi - lo) * s as f64 / steps as f64;
            f.cdf(x - eps) - eps <= g.cdf(x) + 1e-12 && g.cdf(x) <= f.cdf(x + eps) + eps + 1e-12
        })
    }

    #[test]
    fn identical_is_zero() {
        let f = ed(&[0.3, -1.0, 2.0, 2.0]);
        assert_eq!(levy_distance(&f, &f.clone()), 0.0);
    }

    #[test]
    fn point_masses() {
        let zero = ed(&[0.0]);
        assert!((levy_distance(&zero, &ed(&[0.3])) - 0.3).abs() < 1e-9);
        assert!((levy_distance(&zero, &ed(&[2.0])) - 1.0).abs() < 1e-9);
        assert!((levy_distance(&ed(&[0.7]), &zero) - 0.7).abs() < 1e-9);
    }

    #[test]
    fn cdf_is_right_continuous() {
        let f = ed(&[0.0, 1.0]);
        assert_eq!(f.cdf(-1e-12), 0.0);
        assert_eq!(f.cdf(0.0), 0.5);
        assert_eq!(f.cdf(1.0), 1.0);
    }

    #[test]
    fn agrees_with_grid_search_on_small_cases() {
        let f = ed(&[-1.0, 0.0, 0.5, 2.0]);
        let g = ed(&[-0.4, 0.1, 0.9]);
        let d = levy_distance(&f, &g);
        assert!(grid_feasible(&f, &g, d + 1e-6));
        assert!(!grid_feasible(&f, &g, d - 1e-3));
    }

    proptest! {
        #[test]
        fn metric_axioms(
            a in prop::collection::vec(-3.0f64..3.0, 1..30),
            b in prop::collection::vec(-3.0f64..3.0, 1..30),
            c in prop::collection::vec(-3.0f64..3.0, 1..30),
        ) {
            let (fa, fb, fc) = (ed(&a), ed(&b), ed(&c));
            let ab = levy_distance(&fa, &fb);
            prop_assert!((ab - levy_distance(&fb, &fa)).abs() < 1e-9);
            prop_assert!((0.0..=1.0).contains(&ab));
            prop_assert!(ab <= levy_distance(&fa, &fc) + levy_distance(&fc, &fb) + 1e-9);
            prop_assert_eq!(levy_distance(&fa, &fa), 0.0);
        }

        #[test]
        fn bisection_result_is_tight(
            a in prop::collection::vec(-2.0f64..2.0, 1..12),
            b in prop::collection::vec(-2.0f64..2.0, 1..12),
        ) {
            let (fa, fb) = (ed(&a), ed(&b));
            let d = levy_distance(&fa, &fb);
            prop_assert!(levy_feasible(&fa, &fb, d));
            if d > 1e-6 {
                prop_assert!(!levy_feasible(&fa, &fb, d - 1e-6));
            }
        }
    }
}
