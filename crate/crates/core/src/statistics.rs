//! Pair correlation statistics of a point set.
//!
//! With `w = s / N^beta`:
//!
//! * `F_{N,beta}(s)` counts ordered pairs at circle distance `<= w`, divided
//!   by `N^(2-beta)` ([`pcf`]).
//! * The triangle kernel sum `T = sum_{i!=j} max(1 - ||x_i - x_j|| / w, 0)`
//!   ([`triangle_kernel`]) gives `int_0^s F(t) dt = s T / N^(2-beta)`
//!   exactly ([`pcf_integral`]).
//! * The covering function counts points within half-width `w / 2` of a
//!   moving centre `t`, divided by `N^(1-beta)` ([`covering_profile`]). It
//!   is piecewise constant and integrates to `s`.
//! * `I_{N,beta}(s)` is the integral of the squared covering function. It is
//!   computed by an exact event sweep ([`i2_sweep`]) and by the closed form
//!   `s T / N^(2-beta) + s / N^(1-beta)` ([`i2_closed`]), which holds because
//!   two arcs of length `w` with centres at distance `d` overlap in
//!   `max(w - d, 0)` as long as `w <= 1/2`.

use crate::error::{Error, Result};
use crate::metric::pair_aggregate;
use crate::scalar::{Compensated, Scalar};
use crate::sequences::PointSet;

/// `F_{N,beta}(s)` together with its parameters.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairStatistic<T = f64> {
    pub n: usize,
    pub beta: T,
    pub s: T,
    pub value: T,
}

/// `I_{N,beta}(s)` by the closed form and by the sweep.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SecondMoment<T = f64> {
    pub n: usize,
    pub beta: T,
    pub s: T,
    pub closed: T,
    pub sweep: T,
}

impl<T: Scalar> SecondMoment<T> {
    pub fn discrepancy(&self) -> T {
        (self.closed - self.sweep).abs()
    }
}

/// Normalisation powers for a given `(N, beta)`.
#[derive(Clone, Copy, Debug)]
pub(crate) struct Scale<T> {
    pub n: usize,
    pub beta: T,
    /// `N^beta`
    pub n_beta: T,
}

impl<T: Scalar> Scale<T> {
    pub fn new(n: usize, beta: T) -> Result<Self> {
        if !(beta >= T::zero() && beta <= T::one()) {
            return Err(Error::invalid(format!("beta = {beta} is outside [0, 1]")));
        }
        let n_beta = T::of_count(n as u64).powf(beta);
        Ok(Self { n, beta, n_beta })
    }

    fn nf(&self) -> T {
        T::of_count(self.n as u64)
    }

    /// `N^(2-beta)`
    pub fn pair_norm(&self) -> T {
        self.nf() * self.nf() / self.n_beta
    }

    /// `N^(1-beta)`
    pub fn point_norm(&self) -> T {
        self.nf() / self.n_beta
    }

    /// Pair window `s / N^beta`, refusing windows wider than half the circle.
    pub fn window(&self, s: T) -> Result<T> {
        check_s(s)?;
        let w = s / self.n_beta;
        if w > T::half() {
            return Err(self.overflow(s, w, T::half()));
        }
        Ok(w)
    }

    /// Covering half-width `s / (2 N^beta)`, at most `1/4`.
    pub fn half_width(&self, s: T) -> Result<T> {
        check_s(s)?;
        let h = s / (T::of(2.0) * self.n_beta);
        let limit = T::of(0.25);
        if h > limit {
            return Err(self.overflow(s, h, limit));
        }
        Ok(h)
    }

    fn overflow(&self, s: T, window: T, limit: T) -> Error {
        Error::ScaleOverflow {
            s: s.as_f64(),
            n: self.n,
            beta: self.beta.as_f64(),
            window: window.as_f64(),
            limit: limit.as_f64(),
            max_s: 0.5 * self.n_beta.as_f64(),
        }
    }
}

fn check_s<T: Scalar>(s: T) -> Result<()> {
    if s >= T::zero() && s.is_finite() {
        Ok(())
    } else {
        Err(Error::invalid(format!(
            "s = {s} must be finite and nonnegative"
        )))
    }
}

/// Largest `s` accepted by every statistic for `N` points at `beta`.
pub fn max_admissible_s<T: Scalar>(n: usize, beta: T) -> Result<T> {
    Ok(T::half() * Scale::new(n, beta)?.n_beta)
}

/// Weak pair correlation function `F_{N,beta}(s)`.
pub fn pcf<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<PairStatistic<T>> {
    let scale = Scale::new(ps.len(), beta)?;
    let w = scale.window(s)?;
    let agg = pair_aggregate(ps, w)?;
    Ok(PairStatistic {
        n: ps.len(),
        beta,
        s,
        value: T::of_count(agg.count) / scale.pair_norm(),
    })
}

/// `sum_{i != j} max(1 - ||x_i - x_j|| / (s / N^beta), 0)`.
pub fn triangle_kernel<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<T> {
    let scale = Scale::new(ps.len(), beta)?;
    kernel_with(ps, &scale, s)
}

fn kernel_with<T: Scalar>(ps: &PointSet<T>, scale: &Scale<T>, s: T) -> Result<T> {
    let w = scale.window(s)?;
    if w <= T::zero() {
        return Err(Error::invalid("the triangle kernel needs s > 0"));
    }
    let agg = pair_aggregate(ps, w)?;
    Ok(T::of_count(agg.count) - agg.dist_sum / w)
}

/// `int_0^s F_{N,beta}(t) dt`, exact through the triangle kernel.
pub fn pcf_integral<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<T> {
    let scale = Scale::new(ps.len(), beta)?;
    Ok(s / scale.pair_norm() * kernel_with(ps, &scale, s)?)
}

/// Piecewise constant covering function `t -> F_{N,beta}(t, s)` on the circle.
///
/// `levels[i]` (and `counts[i]`, before normalisation) hold on
/// `[breakpoints[i], breakpoints[i + 1])`; the last segment wraps around to
/// `breakpoints[0] + 1`.
#[derive(Clone, Debug, PartialEq)]
pub struct CoveringProfile<T = f64> {
    pub n: usize,
    pub beta: T,
    pub s: T,
    pub breakpoints: Vec<T>,
    pub counts: Vec<u64>,
    pub levels: Vec<T>,
}

impl<T: Scalar> CoveringProfile<T> {
    pub fn segment_lengths(&self) -> Vec<T> {
        let m = self.breakpoints.len();
        (0..m)
            .map(|i| {
                if i + 1 < m {
                    self.breakpoints[i + 1] - self.breakpoints[i]
                } else {
                    T::one() - self.breakpoints[i] + self.breakpoints[0]
                }
            })
            .collect()
    }

    pub fn total_measure(&self) -> T {
        let mut acc = Compensated::zero();
        for len in self.segment_lengths() {
            acc += len;
        }
        acc.value()
    }

    /// `int_0^1 F(t, s) dt`; equals `s`.
    pub fn integral(&self) -> T {
        let mut acc = Compensated::zero();
        for (len, &level) in self.segment_lengths().into_iter().zip(&self.levels) {
            acc += level * len;
        }
        acc.value()
    }

    /// `int_0^1 F(t, s)^2 dt`.
    pub fn integral_of_square(&self) -> T {
        let mut acc = Compensated::zero();
        for (len, &c) in self.segment_lengths().into_iter().zip(&self.counts) {
            let c = T::of_count(c);
            acc += c * c * len;
        }
        let norm = T::of_count(self.n as u64) / T::of_count(self.n as u64).powf(self.beta);
        acc.value() / (norm * norm)
    }

    /// Level of the segment containing `t` (reduced mod 1).
    pub fn level_at(&self, t: T) -> T {
        let t = crate::scalar::wrap_unit(t);
        let idx = self.breakpoints.partition_point(|&b| b <= t);
        if idx == 0 {
            *self
                .levels
                .last()
                .expect("profile has at least one segment")
        } else {
            self.levels[idx - 1]
        }
    }
}

/// Exact arrangement of the arcs `[x_n - h, x_n + h]` with `h = s / (2 N^beta)`.
pub fn covering_profile<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<CoveringProfile<T>> {
    let scale = Scale::new(ps.len(), beta)?;
    let h = scale.half_width(s)?;
    let one = T::one();

    let mut events: Vec<(T, i64)> = Vec::with_capacity(2 * ps.len());
    let mut wrapping: i64 = 0;
    for &x in ps.sorted() {
        let start = crate::scalar::wrap_unit(x - h);
        let end = if x + h >= one { x + h - one } else { x + h };
        if start > end {
            wrapping += 1;
        }
        events.push((start, 1));
        events.push((end, -1));
    }
    events.sort_by(|a, b| a.0.partial_cmp(&b.0).expect("finite event positions"));

    let norm = scale.point_norm();
    let mut breakpoints = Vec::new();
    let mut counts = Vec::new();
    let mut level = wrapping;
    let mut i = 0;
    while i < events.len() {
        let pos = events[i].0;
        while i < events.len() && events[i].0 == pos {
            level += events[i].1;
            i += 1;
        }
        debug_assert!(level >= 0);
        breakpoints.push(pos);
        counts.push(level as u64);
    }
    debug_assert_eq!(level, wrapping);
    let levels = counts.iter().map(|&c| T::of_count(c) / norm).collect();
    Ok(CoveringProfile {
        n: ps.len(),
        beta,
        s,
        breakpoints,
        counts,
        levels,
    })
}

/// `I_{N,beta}(s)` by sweeping the covering profile.
pub fn i2_sweep<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<T> {
    Ok(covering_profile(ps, beta, s)?.integral_of_square())
}

/// `I_{N,beta}(s)` by the closed form, stored next to the sweep value.
pub fn i2_closed<T: Scalar>(ps: &PointSet<T>, beta: T, s: T) -> Result<SecondMoment<T>> {
    let scale = Scale::new(ps.len(), beta)?;
    scale.half_width(s)?;
    let closed = if s == T::zero() {
        T::zero()
    } else {
        s / scale.pair_norm() * kernel_with(ps, &scale, s)? + s / scale.point_norm()
    };
    Ok(SecondMoment {
        n: ps.len(),
        beta,
        s,
        closed,
        sweep: i2_sweep(ps, beta, s)?,
    })
}

#[cfg(test)]
mod tests {
    use super::*;

    fn grid4() -> PointSet<f64> {
        PointSet::from_values(vec![0.0, 0.25, 0.5, 0.75]).unwrap()
    }

    fn single() -> PointSet<f64> {
        PointSet::from_values(vec![0.5]).unwrap()
    }

    #[test]
    fn pcf_examples() {
        assert_eq!(pcf(&grid4(), 0.0, 0.25).unwrap().value, 0.5);
        assert_eq!(pcf(&grid4(), 1.0, 1.0).unwrap().value, 2.0);
        let dup = PointSet::from_values(vec![0.3, 0.3, 0.7]).unwrap();
        assert_eq!(pcf(&dup, 0.0, 0.0).unwrap().value, 2.0 / 9.0);
    }

    #[test]
    fn pcf_scale_overflow() {
        let err = pcf(&grid4(), 1.0, 2.5).unwrap_err();
        match err {
            Error::ScaleOverflow { max_s, window, .. } => {
                assert_eq!(max_s, 2.0);
                assert_eq!(window, 0.625);
            }
            other => panic!("unexpected {other:?}"),
        }
        assert!(pcf(&grid4(), 1.0, 2.0).is_ok());
        assert!(matches!(
            pcf(&grid4(), 1.5, 0.1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(matches!(
            pcf(&grid4(), 0.5, -0.1),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn kernel_examples() {
        assert_eq!(triangle_kernel(&grid4(), 0.0, 0.25).unwrap(), 0.0);
        assert_eq!(triangle_kernel(&grid4(), 0.0, 0.5).unwrap(), 4.0);
        let sparse = PointSet::from_values(vec![0.1, 0.4, 0.8]).unwrap();
        assert_eq!(triangle_kernel(&sparse, 0.0, 0.2).unwrap(), 0.0);
        assert!(matches!(
            triangle_kernel(&grid4(), 0.0, 0.0),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn integral_examples() {
        assert_eq!(pcf_integral(&grid4(), 0.0, 0.25).unwrap(), 0.0);
        assert_eq!(pcf_integral(&grid4(), 0.0, 0.5).unwrap(), 0.125);
    }

    #[test]
    fn covering_examples() {
        let p = covering_profile(&grid4(), 0.0, 0.25).unwrap();
        assert!(p.levels.iter().all(|&l| l == 0.25));
        assert_eq!(p.total_measure(), 1.0);

        let p = covering_profile(&single(), 0.0, 0.2).unwrap();
        let lens = p.segment_lengths();
        let covered: f64 = lens
            .iter()
            .zip(&p.levels)
            .filter(|(_, &l)| l == 1.0)
            .map(|(len, _)| *len)
            .sum();
        assert!((covered - 0.2).abs() < 1e-15);
        assert!(p.levels.iter().all(|&l| l == 0.0 || l == 1.0));
        assert_eq!(p.level_at(0.5), 1.0);
        assert_eq!(p.level_at(0.0), 0.0);
        assert!((p.integral() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn covering_wraps_across_zero() {
        let ps = PointSet::from_values(vec![0.02_f64, 0.97]).unwrap();
        let p = covering_profile(&ps, 0.0, 0.2).unwrap();
        // arcs [0.92, 0.12] and [0.87, 1.07] overlap on [0.92, 0.07]
        assert_eq!(p.level_at(0.0), 1.0);
        assert_eq!(p.level_at(0.1), 0.5);
        assert_eq!(p.level_at(0.5), 0.0);
        assert!((p.integral() - 0.2).abs() < 1e-15);
        assert!((p.total_measure() - 1.0).abs() < 1e-15);
    }

    #[test]
    fn covering_overflow() {
        assert!(matches!(
            covering_profile(&grid4(), 0.0, 0.6),
            Err(Error::ScaleOverflow { .. })
        ));
    }

    #[test]
    fn sweep_examples() {
        assert_eq!(i2_sweep(&grid4(), 0.0, 0.25).unwrap(), 0.0625);
        assert_eq!(i2_sweep(&grid4(), 0.0, 0.5).unwrap(), 0.25);
        assert!((i2_sweep(&single(), 0.0, 0.2).unwrap() - 0.2).abs() < 1e-15);
    }

    #[test]
    fn closed_form_examples() {
        let m = i2_closed(&grid4(), 0.0, 0.25).unwrap();
        assert_eq!(m.closed, 0.0625);
        assert_eq!(m.sweep, 0.0625);
        assert_eq!(m.closed, 0.25 * 0.25);
        let m = i2_closed(&grid4(), 0.0, 0.5).unwrap();
        assert_eq!(m.closed, 0.25);
        assert_eq!(m.sweep, 0.25);
    }

    #[test]
    fn zero_scale_second_moment() {
        let m = i2_closed(&grid4(), 0.5, 0.0).unwrap();
        assert_eq!(m.closed, 0.0);
        assert_eq!(m.sweep, 0.0);
    }

    #[test]
    fn beta_one_extra_term() {
        // No pairs overlap, so only the diagonal term s / N^0 = s remains.
        let m = i2_closed(&grid4(), 1.0, 0.5).unwrap();
        assert!((m.closed - 0.5).abs() < 1e-15);
        assert!((m.sweep - 0.5).abs() < 1e-15);
    }

    #[test]
    fn works_in_f32() {
        let ps = PointSet::from_values(vec![0.0_f32, 0.25, 0.5, 0.75]).unwrap();
        assert_eq!(pcf(&ps, 0.0, 0.25).unwrap().value, 0.5);
        let m = i2_closed(&ps, 0.0, 0.5).unwrap();
        assert!((m.closed - 0.25).abs() < 1e-6);
        assert!((m.sweep - 0.25).abs() < 1e-6);
    }
}
