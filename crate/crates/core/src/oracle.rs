//! Literal reference implementations.
//!
//! These follow the definitions directly (double loops, point scans,
//! midpoint quadrature) and share nothing with the fast kernels beyond
//! [`circle_distance`]. They are quadratic or worse and meant for audits and
//! tests on small inputs.

use crate::error::{Error, Result};
use crate::metric::{check_radius, circle_distance, PairAggregate};
use crate::scalar::{Compensated, Scalar};
use crate::sequences::PointSet;
use crate::statistics::max_admissible_s;

/// Ordered pairs within `r`, by enumerating every `i != j`.
pub fn brute_pair_aggregate<T: Scalar>(ps: &PointSet<T>, r: T) -> Result<PairAggregate<T>> {
    check_radius(r)?;
    let x = ps.points();
    let mut count = 0u64;
    let mut sum = Compensated::zero();
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            if i == j {
                continue;
            }
            let d = circle_distance(xi, xj);
            if d <= r {
                count += 1;
                sum += d;
            }
        }
    }
    Ok(PairAggregate {
        count,
        dist_sum: sum.value(),
    })
}

/// All ordered-pair circle distances, sorted.
pub fn sorted_pair_distances<T: Scalar>(ps: &PointSet<T>) -> Vec<T> {
    let x = ps.points();
    let mut out = Vec::with_capacity(x.len() * x.len().saturating_sub(1));
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            if i != j {
                out.push(circle_distance(xi, xj));
            }
        }
    }
    out.sort_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    out
}

fn n_beta<T: Scalar>(n: usize, beta: T) -> T {
    T::of_count(n as u64).powf(beta)
}

/// `F_{N,beta}(s)` by counting over all ordered pairs.
pub fn brute_pcf<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<T> {
    let nb = n_beta(ps.len(), beta);
    let agg = brute_pair_aggregate(ps, s / nb)?;
    let n = T::of_count(ps.len() as u64);
    Ok(T::of_count(agg.count) / (n * n / nb))
}

/// `int_0^s F_{N,beta}(t) dt` by walking the step function `F`.
///
/// Between consecutive scaled pair distances `u_k = N^beta d_k` the statistic
/// is constant at `k / N^(2-beta)`; the integral is the sum of those
/// rectangles up to `s`.
pub fn stepwise_pcf_integral<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<T> {
    if !(s >= T::zero()) || s > max_admissible_s(ps.len(), beta)? {
        return Err(Error::invalid(format!(
            "s = {s} outside the admissible range"
        )));
    }
    let nb = n_beta(ps.len(), beta);
    let n = T::of_count(ps.len() as u64);
    let x = ps.points();
    let mut steps = Vec::new();
    for (i, &xi) in x.iter().enumerate() {
        for (j, &xj) in x.iter().enumerate() {
            let u = circle_distance(xi, xj) * nb;
            if i != j && u <= s {
                steps.push(u);
            }
        }
    }
    steps.sort_unstable_by(|a, b| a.partial_cmp(b).expect("finite distances"));
    let mut area = Compensated::zero();
    let mut below = 0u64;
    let mut prev = T::zero();
    for u in steps {
        area += T::of_count(below) * (u - prev);
        below += 1;
        prev = u;
    }
    area += T::of_count(below) * (s - prev);
    Ok(area.value() / (n * n / nb))
}

/// Number of points with `||x_n - t|| <= s / (2 N^beta)`.
pub fn brute_membership_count<T: Scalar>(ps: &PointSet<T>, t: T, beta: T, s: T) -> usize {
    let h = s / (T::of(2.0) * n_beta(ps.len(), beta));
    let t = crate::scalar::wrap_unit(t);
    ps.points()
        .iter()
        .filter(|&&x| circle_distance(x, t) <= h)
        .count()
}

/// Midpoint-rule value of `I_{N,beta}(s)` with its error bound.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct Quadrature<T = f64> {
    pub value: T,
    /// The integrand is a step function with at most `2N` jumps, each
    /// misattributing at most one cell of width `1/resolution`:
    /// `|value - I| <= 2N * max_level^2 / resolution`.
    pub error_bound: T,
}

/// `int_0^1 F(t, s)^2 dt` by the midpoint rule on `resolution` cells.
pub fn brute_i2<T: Scalar>(
    ps: &PointSet<T>,
    beta: T,
    s: T,
    resolution: usize,
) -> Result<Quadrature<T>> {
    let n = ps.len();
    if resolution < 10 * n {
        return Err(Error::invalid(format!(
            "resolution {resolution} must be at least 10 N = {}",
            10 * n
        )));
    }
    let norm = T::of_count(n as u64) / n_beta(n, beta);
    let res = T::of_count(resolution as u64);
    let mut acc = Compensated::zero();
    let mut max_count = 0usize;
    for k in 0..resolution {
        let t = (T::of_count(k as u64) + T::half()) / res;
        let c = brute_membership_count(ps, t, beta, s);
        max_count = max_count.max(c);
        let level = T::of_count(c as u64) / norm;
        acc += level * level;
    }
    let max_level = T::of_count(max_count as u64) / norm;
    Ok(Quadrature {
        value: acc.value() / res,
        error_bound: T::of(2.0) * T::of_count(n as u64) * max_level * max_level / res,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid4() -> PointSet<f64> {
        PointSet::from_values(vec![0.0, 0.25, 0.5, 0.75]).unwrap()
    }

    #[test]
    fn brute_aggregate_examples() {
        let g = grid4();
        assert_eq!(
            brute_pair_aggregate(&g, 0.25).unwrap(),
            PairAggregate {
                count: 8,
                dist_sum: 2.0
            }
        );
        assert_eq!(
            brute_pair_aggregate(&g, 0.2).unwrap(),
            PairAggregate::zero()
        );
        let one = PointSet::from_values(vec![0.4]).unwrap();
        assert_eq!(
            brute_pair_aggregate(&one, 0.5).unwrap(),
            PairAggregate::zero()
        );
    }

    #[test]
    fn brute_i2_examples() {
        let q = brute_i2(&grid4(), 0.0, 0.25, 100_000).unwrap();
        assert!((q.value - 0.0625).abs() < 1e-3);
        assert!((q.value - 0.0625).abs() <= q.error_bound);

        let single = PointSet::from_values(vec![0.5_f64]).unwrap();
        let q = brute_i2(&single, 0.0, 0.2, 100_000).unwrap();
        assert!((q.value - 0.2).abs() < 1e-4);

        assert!(brute_i2(&grid4(), 0.0, 0.25, 39).is_err());
    }

    #[test]
    fn membership_examples() {
        let g = grid4();
        assert_eq!(brute_membership_count(&g, 0.1, 0.0, 0.25), 1);
        assert_eq!(brute_membership_count(&g, 0.125, 0.0, 0.25), 2);
        assert_eq!(brute_membership_count(&g, 0.3, 0.0, 0.0), 0);
    }

    #[test]
    fn stepwise_examples() {
        assert_eq!(stepwise_pcf_integral(&grid4(), 0.0, 0.25).unwrap(), 0.0);
        assert_eq!(stepwise_pcf_integral(&grid4(), 0.0, 0.5).unwrap(), 0.125);
    }
}
