//! Circle distance and the sorted two-pointer pair kernel.
//!
//! For a sorted sample `x_0 <= .. <= x_{N-1}` and `a < b`, the circle distance
//! of the pair is `min(d, 1 - d)` with `d = x_b - x_a`. For a fixed anchor `a`
//! the partners with `d <= r` form a prefix `(a, hi]` and the partners with
//! `1 - d <= r` form a suffix `[lo, N)`. Both ends only move forward as the
//! anchor advances, so all pairs within `r` are enumerated by counting in
//! `O(N)` after sorting. Distance sums over the two ranges come from
//! double-word prefix sums of the sorted coordinates.
//!
//! The two predicates are evaluated with exactly the floating point
//! expressions used by [`circle_distance`], so counts agree bit-for-bit with a
//! literal double loop.

use rayon::prelude::*;

use crate::error::{Error, Result};
use crate::scalar::{pairwise_reduce, Compensated, Scalar};
use crate::sequences::PointSet;

/// Anchors per reduction chunk. Partial results are combined pairwise in a
/// tree whose shape depends only on `N`.
pub const CHUNK: usize = 4096;

/// Distance to the nearest integer of `x - y`, for `x, y` in `[0, 1)`.
#[inline]
pub fn circle_distance<T: Scalar>(x: T, y: T) -> T {
    let d = (x - y).abs();
    d.min(T::one() - d)
}

/// Ordered pairs `i != j` within a distance threshold.
#[derive(Clone, Copy, Debug, PartialEq)]
pub struct PairAggregate<T = f64> {
    /// Number of ordered pairs; always even.
    pub count: u64,
    /// Sum of their circle distances.
    pub dist_sum: T,
}

impl<T: Scalar> PairAggregate<T> {
    pub fn zero() -> Self {
        Self {
            count: 0,
            dist_sum: T::zero(),
        }
    }
}

pub(crate) fn check_radius<T: Scalar>(r: T) -> Result<()> {
    if r >= T::zero() && r <= T::half() {
        Ok(())
    } else {
        Err(Error::invalid(format!("radius {r} is outside [0, 1/2]")))
    }
}

/// Exact count and distance sum of ordered pairs with `circle_distance <= r`.
///
/// The comparison is closed, so pairs at distance exactly `r` are included.
pub fn pair_aggregate<T: Scalar>(ps: &PointSet<T>, r: T) -> Result<PairAggregate<T>> {
    check_radius(r)?;
    Ok(aggregate_sorted(ps.sorted(), r))
}

#[derive(Clone, Copy)]
struct Partial<T> {
    count: u64,
    sum: Compensated<T>,
}

fn aggregate_sorted<T: Scalar>(x: &[T], r: T) -> PairAggregate<T> {
    let n = x.len();
    if n < 2 {
        return PairAggregate::zero();
    }
    let mut prefix = Vec::with_capacity(n + 1);
    let mut acc = Compensated::zero();
    prefix.push(acc);
    for &v in x {
        acc += v;
        prefix.push(acc);
    }

    let chunks = n.div_ceil(CHUNK);
    let parts: Vec<Partial<T>> = (0..chunks)
        .into_par_iter()
        .map(|c| anchor_chunk(x, &prefix, r, c * CHUNK, ((c + 1) * CHUNK).min(n)))
        .collect();
    let total = pairwise_reduce(
        &parts,
        Partial {
            count: 0,
            sum: Compensated::zero(),
        },
        |a, b| Partial {
            count: a.count + b.count,
            sum: a.sum + b.sum,
        },
    );
    // Each unordered pair was seen once; ordered pairs come in mirrored twos.
    PairAggregate {
        count: 2 * total.count,
        dist_sum: total.sum.value() * T::of(2.0),
    }
}

fn anchor_chunk<T: Scalar>(
    x: &[T],
    prefix: &[Compensated<T>],
    r: T,
    first: usize,
    end: usize,
) -> Partial<T> {
    let n = x.len();
    let one = T::one();
    let near = |a: usize, b: usize| x[b] - x[a] <= r;
    let far = |a: usize, b: usize| one - (x[b] - x[a]) <= r;

    let tail = &x[(first + 1).min(n)..];
    let mut hi = first + tail.partition_point(|&v| v - x[first] <= r);
    let mut lo = first + 1 + tail.partition_point(|&v| one - (v - x[first]) > r);

    let mut count = 0u64;
    let mut sum = Compensated::zero();
    for a in first..end {
        hi = hi.max(a);
        while hi + 1 < n && near(a, hi + 1) {
            hi += 1;
        }
        lo = lo.max(a + 1);
        while lo < n && !far(a, lo) {
            lo += 1;
        }
        // A pair can satisfy both predicates only at distance exactly 1/2;
        // it is counted once, in the near range.
        let start = lo.max(hi + 1);
        let k_near = hi - a;
        let k_far = n - start;
        count += (k_near + k_far) as u64;

        if k_near > 0 {
            let k = T::of_count(k_near as u64);
            sum += (prefix[hi + 1] - prefix[a + 1]) - Compensated::product(k, x[a]);
        }
        if k_far > 0 {
            let k = T::of_count(k_far as u64);
            let lead = Compensated::new(k) + Compensated::product(k, x[a]);
            sum += lead - (prefix[n] - prefix[start]);
        }
    }
    Partial { count, sum }
}
