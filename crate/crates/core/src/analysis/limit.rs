//! Empirical limits of `F_{N,beta}(s)` along a ladder of sample sizes.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{Compensated, Scalar};
use crate::sequences::GenSpec;
use crate::statistics::pcf;

/// Default tolerance between the last two ladder rows for a grid point to
/// count as converged.
pub const DEFAULT_CONV_TOL: f64 = 0.05;

/// Relative gap between the secant and the least-squares slope above which
/// the slope estimate is flagged.
pub const SLOPE_WARNING_GAP: f64 = 0.1;

#[derive(Clone, Copy, Debug, PartialEq)]
pub struct SlopeEstimate<T = f64> {
    /// `f_hat(h) / h` at the smallest grid value `h`; the reported slope.
    pub secant: T,
    /// Through-origin least-squares slope over the lowest quarter of the grid.
    pub least_squares: T,
    pub h: T,
    pub warning: bool,
}

/// Table of `F_{N,beta}(s)` over `ladder x s_grid`, with the value at the
/// largest `N` taken as the limit estimate.
#[derive(Clone, Debug, PartialEq)]
pub struct LimitEstimate<T = f64> {
    pub beta: T,
    pub s_grid: Vec<T>,
    /// Sample sizes, increasing. Empty for tables built with [`LimitEstimate::from_exact`].
    pub ladder: Vec<usize>,
    /// `table[k][i]` is the statistic at `ladder[k]`, `s_grid[i]`.
    pub table: Vec<Vec<T>>,
    pub f_hat: Vec<T>,
    pub converged: Vec<bool>,
    pub conv_tol: T,
    pub slope: Option<SlopeEstimate<T>>,
}

impl<T: Scalar> LimitEstimate<T> {
    /// Wraps known limit values; every grid point counts as converged.
    pub fn from_exact(beta: T, s_grid: Vec<T>, f_values: Vec<T>) -> Result<Self> {
        check_grid(&s_grid)?;
        if f_values.len() != s_grid.len() {
            return Err(Error::GridMismatch(format!(
                "{} values for {} grid points",
                f_values.len(),
                s_grid.len()
            )));
        }
        let mut le = Self {
            beta,
            converged: vec![true; s_grid.len()],
            s_grid,
            ladder: Vec::new(),
            table: vec![f_values.clone()],
            f_hat: f_values,
            conv_tol: T::zero(),
            slope: None,
        };
        le.slope = estimate_slope_at_zero(&le).ok();
        Ok(le)
    }

    pub fn slope0(&self) -> Option<T> {
        self.slope.map(|s| s.secant)
    }

    pub fn s_max(&self) -> T {
        *self.s_grid.last().expect("grid is nonempty")
    }
}

fn check_grid<T: Scalar>(s_grid: &[T]) -> Result<()> {
    if s_grid.is_empty() {
        return Err(Error::invalid("empty s grid"));
    }
    if !(s_grid[0] > T::zero()) {
        return Err(Error::invalid("the s grid must start above 0"));
    }
    if s_grid.windows(2).any(|w| !(w[0] < w[1])) {
        return Err(Error::invalid("the s grid must be strictly increasing"));
    }
    Ok(())
}

/// Fills the ladder table with `F_{N,beta}(s)` for the first `N` points of `gen`.
pub fn estimate_limit<T: Scalar>(
    gen: &GenSpec<T>,
    beta: T,
    s_grid: &[T],
    ladder: &[usize],
    conv_tol: T,
) -> Result<LimitEstimate<T>> {
    check_grid(s_grid)?;
    if ladder.is_empty() {
        return Err(Error::invalid("empty ladder"));
    }
    if ladder[0] == 0 || ladder.windows(2).any(|w| w[0] >= w[1]) {
        return Err(Error::invalid(
            "the ladder must be positive and strictly increasing",
        ));
    }
    let table = ladder
        .par_iter()
        .map(|&n| {
            let ps = gen.generate(n)?;
            s_grid
                .iter()
                .map(|&s| pcf(&ps, beta, s).map(|p| p.value))
                .collect::<Result<Vec<T>>>()
        })
        .collect::<Result<Vec<_>>>()?;

    let last = table.len() - 1;
    let f_hat = table[last].clone();
    let converged = if last == 0 {
        vec![false; s_grid.len()]
    } else {
        table[last]
            .iter()
            .zip(&table[last - 1])
            .map(|(a, b)| (*a - *b).abs() <= conv_tol)
            .collect()
    };
    let mut le = LimitEstimate {
        beta,
        s_grid: s_grid.to_vec(),
        ladder: ladder.to_vec(),
        table,
        f_hat,
        converged,
        conv_tol,
        slope: None,
    };
    le.slope = estimate_slope_at_zero(&le).ok();
    Ok(le)
}

/// Slope of the limit at the origin from the smallest grid values.
///
/// Needs at least three grid values in `[0, s_max / 4]`.
pub fn estimate_slope_at_zero<T: Scalar>(le: &LimitEstimate<T>) -> Result<SlopeEstimate<T>> {
    let cutoff = le.s_max() / T::of(4.0) * T::of(1.0 + 1e-9);
    let low = le.s_grid.iter().take_while(|&&s| s <= cutoff).count();
    if low < 3 {
        return Err(Error::TooFewPoints {
            needed: 3,
            found: low,
        });
    }
    let h = le.s_grid[0];
    let secant = le.f_hat[0] / h;
    let mut sf = Compensated::zero();
    let mut ss = Compensated::zero();
    for (&s, &f) in le.s_grid[..low].iter().zip(&le.f_hat[..low]) {
        sf += s * f;
        ss += s * s;
    }
    let least_squares = sf.value() / ss.value();
    let warning = (secant - least_squares).abs() > T::of(SLOPE_WARNING_GAP) * secant.abs();
    Ok(SlopeEstimate {
        secant,
        least_squares,
        h,
        warning,
    })
}
