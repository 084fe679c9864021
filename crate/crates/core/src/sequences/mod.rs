//! Test sequences on the circle `[0, 1)` and multiplicity diagnostics.
//!
//! All generators are pure functions of their arguments. Random sequences use
//! ChaCha8 seeded through `SeedableRng::seed_from_u64`, and the algorithm name
//! is written into the point set metadata so recorded values stay reproducible.

mod pointfile;

use std::collections::HashSet;
use std::fmt;

use rand_chacha::ChaCha8Rng;
use rand_core::{RngCore, SeedableRng};

use crate::error::{Error, Result};
use crate::scalar::{wrap_unit, Scalar};

pub use pointfile::{read_points, write_points};

/// Identifier of the random generator behind [`gen_uniform`] and [`gen_multiset`].
pub const RNG_NAME: &str = "chacha8/seed_from_u64/u64>>11*2^-53";

/// Provenance of a point set.
#[derive(Clone, Debug, Default, PartialEq, Eq)]
pub struct PointMeta {
    pub generator: String,
    pub params: Vec<(String, String)>,
    pub seed: Option<u64>,
}

impl PointMeta {
    pub fn new(generator: impl Into<String>) -> Self {
        Self {
            generator: generator.into(),
            params: Vec::new(),
            seed: None,
        }
    }

    pub fn param(mut self, key: &str, value: impl fmt::Display) -> Self {
        self.params.push((key.to_string(), value.to_string()));
        self
    }

    pub fn seed(mut self, seed: u64) -> Self {
        self.seed = Some(seed);
        self
    }

    pub fn params_text(&self) -> String {
        self.params
            .iter()
            .map(|(k, v)| format!("{k}={v}"))
            .collect::<Vec<_>>()
            .join(",")
    }
}

/// A finite multiset `x_1, .., x_N` of points in `[0, 1)`, together with a
/// nondecreasing copy used by every pair statistic.
#[derive(Clone, Debug, PartialEq)]
pub struct PointSet<T = f64> {
    points: Vec<T>,
    sorted: Vec<T>,
    meta: PointMeta,
}

impl<T: Scalar> PointSet<T> {
    /// Builds a point set, rejecting empty input and values outside `[0, 1)`.
    /// A negative zero is stored as `+0`.
    pub fn new(points: Vec<T>, meta: PointMeta) -> Result<Self> {
        if points.is_empty() {
            return Err(Error::invalid("a point set needs at least one point"));
        }
        let mut points = points;
        for (i, v) in points.iter_mut().enumerate() {
            if !(*v >= T::zero() && *v < T::one()) {
                return Err(Error::invalid(format!("point {i} = {v} is outside [0, 1)")));
            }
            *v = *v + T::zero();
        }
        let mut sorted = points.clone();
        sorted.sort_by(|a, b| a.partial_cmp(b).expect("points are finite"));
        Ok(Self {
            points,
            sorted,
            meta,
        })
    }

    pub fn from_values(points: Vec<T>) -> Result<Self> {
        Self::new(points, PointMeta::new("explicit"))
    }

    pub fn len(&self) -> usize {
        self.points.len()
    }

    pub fn is_empty(&self) -> bool {
        self.points.is_empty()
    }

    pub fn points(&self) -> &[T] {
        &self.points
    }

    pub fn sorted(&self) -> &[T] {
        &self.sorted
    }

    pub fn meta(&self) -> &PointMeta {
        &self.meta
    }
}

fn require_count(n: usize) -> Result<()> {
    if n == 0 {
        Err(Error::invalid("n must be at least 1"))
    } else {
        Ok(())
    }
}

/// Uniform value in `[0, 1)` from the top 53 bits of one generator output.
fn next_unit<T: Scalar>(rng: &mut ChaCha8Rng) -> T {
    let u = (rng.next_u64() >> 11) as f64 * (1.0 / (1u64 << 53) as f64);
    wrap_unit(T::of(u))
}

/// `n` independent uniform points. Equal `(n, seed)` give bit-identical output,
/// and a shorter run is a prefix of a longer one with the same seed.
pub fn gen_uniform<T: Scalar>(n: usize, seed: u64) -> Result<PointSet<T>> {
    require_count(n)?;
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let points = (0..n).map(|_| next_unit(&mut rng)).collect();
    PointSet::new(
        points,
        PointMeta::new("uniform").param("rng", RNG_NAME).seed(seed),
    )
}

/// Kronecker sequence `x_k = {k * alpha}` for `k = 1..=n`.
pub fn gen_kronecker<T: Scalar>(alpha: T, n: usize) -> Result<PointSet<T>> {
    require_count(n)?;
    if !alpha.is_finite() {
        return Err(Error::invalid("alpha must be finite"));
    }
    let points = (1..=n as u64)
        .map(|k| wrap_unit(T::of_count(k) * alpha))
        .collect();
    PointSet::new(
        points,
        PointMeta::new("kronecker").param("alpha", format!("{alpha:?}")),
    )
}

/// Radical inverse of `k` in `base`, computed on integers and rounded once.
pub fn radical_inverse(k: u64, base: u64) -> f64 {
    let mut k = k as u128;
    let b = base as u128;
    let mut num: u128 = 0;
    let mut den: u128 = 1;
    while k > 0 {
        num = num * b + k % b;
        den *= b;
        k /= b;
    }
    num as f64 / den as f64
}

/// Van der Corput sequence: radical inverses of `k = 1..=n` in `base`.
pub fn gen_vdc<T: Scalar>(base: u64, n: usize) -> Result<PointSet<T>> {
    if base < 2 {
        return Err(Error::invalid(format!(
            "base must be at least 2, got {base}"
        )));
    }
    require_count(n)?;
    let points = (1..=n as u64)
        .map(|k| wrap_unit(T::of(radical_inverse(k, base))))
        .collect();
    PointSet::new(points, PointMeta::new("vdc").param("base", base))
}

/// `m_distinct` seeded-uniform distinct values, cycled so that `x_k` is value
/// `k mod m_distinct`. Every value appears `floor(n/m)` or `ceil(n/m)` times.
pub fn gen_multiset<T: Scalar>(m_distinct: usize, n: usize, seed: u64) -> Result<PointSet<T>> {
    require_count(n)?;
    if m_distinct == 0 || m_distinct > n {
        return Err(Error::invalid(format!(
            "need 1 <= m_distinct <= n, got m_distinct = {m_distinct}, n = {n}"
        )));
    }
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut seen = HashSet::with_capacity(m_distinct);
    let mut values = Vec::with_capacity(m_distinct);
    while values.len() < m_distinct {
        let v: T = next_unit(&mut rng);
        if seen.insert(v.integer_decode()) {
            values.push(v);
        }
    }
    let points = (0..n).map(|k| values[k % m_distinct]).collect();
    PointSet::new(
        points,
        PointMeta::new("multiset")
            .param("m_distinct", m_distinct)
            .param("rng", RNG_NAME)
            .seed(seed),
    )
}

/// Generator description used wherever a sequence is needed at several `N`.
#[derive(Clone, Debug, PartialEq)]
pub enum GenSpec<T = f64> {
    Uniform { seed: u64 },
    Kronecker { alpha: T },
    VanDerCorput { base: u64 },
    Multiset { m_distinct: usize, seed: u64 },
}

impl<T: Scalar> GenSpec<T> {
    /// The first `n` points of the sequence.
    pub fn generate(&self, n: usize) -> Result<PointSet<T>> {
        match *self {
            GenSpec::Uniform { seed } => gen_uniform(n, seed),
            GenSpec::Kronecker { alpha } => gen_kronecker(alpha, n),
            GenSpec::VanDerCorput { base } => gen_vdc(base, n),
            GenSpec::Multiset { m_distinct, seed } => gen_multiset(m_distinct, n, seed),
        }
    }

    pub fn name(&self) -> &'static str {
        match self {
            GenSpec::Uniform { .. } => "uniform",
            GenSpec::Kronecker { .. } => "kronecker",
            GenSpec::VanDerCorput { .. } => "vdc",
            GenSpec::Multiset { .. } => "multiset",
        }
    }
}

/// Occurrence counts of each distinct value (bit equality).
#[derive(Clone, Debug, PartialEq)]
pub struct MultiplicityProfile<T = f64> {
    /// Distinct values in increasing order with their counts.
    pub counts: Vec<(T, usize)>,
    /// Number of points whose value occurs more than once, with multiplicity.
    pub n_multi: usize,
}

impl<T: Scalar> MultiplicityProfile<T> {
    pub fn count_of(&self, v: T) -> usize {
        self.counts
            .binary_search_by(|(x, _)| x.partial_cmp(&v).expect("finite"))
            .map(|i| self.counts[i].1)
            .unwrap_or(0)
    }

    pub fn total(&self) -> usize {
        self.counts.iter().map(|&(_, c)| c).sum()
    }
}

pub fn multiplicity_profile<T: Scalar>(ps: &PointSet<T>) -> MultiplicityProfile<T> {
    let mut counts: Vec<(T, usize)> = Vec::new();
    for &v in ps.sorted() {
        match counts.last_mut() {
            Some((last, c)) if *last == v => *c += 1,
            _ => counts.push((v, 1)),
        }
    }
    let n_multi = counts
        .iter()
        .filter(|&&(_, c)| c >= 2)
        .map(|&(_, c)| c)
        .sum();
    MultiplicityProfile { counts, n_multi }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn uniform_is_reproducible() {
        let a = gen_uniform::<f64>(3, 42).unwrap();
        let b = gen_uniform::<f64>(3, 42).unwrap();
        assert_eq!(a.points(), b.points());
        assert!(a.meta().params_text().contains("chacha8"));
    }

    #[test]
    fn uniform_golden_triple() {
        // Frozen from the first build; changes here mean the stream changed.
        let a = gen_uniform::<f64>(3, 42).unwrap();
        let bits: Vec<u64> = a.points().iter().map(|v| v.to_bits()).collect();
        assert_eq!(bits, GOLDEN_SEED42);
    }

    const GOLDEN_SEED42: [u64; 3] = [
        4604317194420431787,
        4606734539489062706,
        4601373070768303508,
    ];

    #[test]
    fn uniform_large_in_range() {
        let a = gen_uniform::<f64>(100_000, 7).unwrap();
        assert_eq!(a.len(), 100_000);
        assert!(a.points().iter().all(|&v| (0.0..1.0).contains(&v)));
    }

    #[test]
    fn uniform_prefix_property() {
        let short = gen_uniform::<f64>(10, 5).unwrap();
        let long = gen_uniform::<f64>(50, 5).unwrap();
        assert_eq!(short.points(), &long.points()[..10]);
    }

    #[test]
    fn zero_count_rejected() {
        assert!(matches!(
            gen_uniform::<f64>(0, 1),
            Err(Error::InvalidArgument(_))
        ));
        assert!(gen_kronecker(0.5_f64, 0).is_err());
        assert!(gen_vdc::<f64>(2, 0).is_err());
    }

    #[test]
    fn kronecker_examples() {
        let a = gen_kronecker(0.5_f64, 4).unwrap();
        assert_eq!(a.points(), &[0.5, 0.0, 0.5, 0.0]);
        let z = gen_kronecker(0.0_f64, 3).unwrap();
        assert_eq!(z.points(), &[0.0, 0.0, 0.0]);
        let g = gen_kronecker(1.6180339887_f64, 2).unwrap();
        assert!((g.points()[0] - 0.6180339887).abs() < 1e-12);
        assert!((g.points()[1] - 0.2360679774).abs() < 1e-12);
        let neg = gen_kronecker(-0.25_f64, 2).unwrap();
        assert_eq!(neg.points(), &[0.75, 0.5]);
    }

    #[test]
    fn vdc_examples() {
        assert_eq!(
            gen_vdc::<f64>(2, 4).unwrap().points(),
            &[0.5, 0.25, 0.75, 0.125]
        );
        assert_eq!(
            gen_vdc::<f64>(3, 3).unwrap().points(),
            &[1.0 / 3.0, 2.0 / 3.0, 1.0 / 9.0]
        );
        assert_eq!(gen_vdc::<f64>(2, 1).unwrap().points(), &[0.5]);
        assert!(matches!(
            gen_vdc::<f64>(1, 3),
            Err(Error::InvalidArgument(_))
        ));
    }

    #[test]
    fn multiset_examples() {
        let p = multiplicity_profile(&gen_multiset::<f64>(2, 4, 1).unwrap());
        assert_eq!(p.counts.iter().map(|c| c.1).collect::<Vec<_>>(), vec![2, 2]);
        assert_eq!(p.n_multi, 4);

        let p = multiplicity_profile(&gen_multiset::<f64>(5, 5, 1).unwrap());
        assert!(p.counts.iter().all(|c| c.1 == 1));
        assert_eq!(p.n_multi, 0);

        let p = multiplicity_profile(&gen_multiset::<f64>(1, 3, 1).unwrap());
        assert_eq!(p.counts.len(), 1);
        assert_eq!(p.counts[0].1, 3);

        assert!(gen_multiset::<f64>(4, 3, 1).is_err());
    }

    #[test]
    fn multiset_uneven_split() {
        let p = multiplicity_profile(&gen_multiset::<f64>(3, 8, 9).unwrap());
        let mut c: Vec<usize> = p.counts.iter().map(|c| c.1).collect();
        c.sort();
        assert_eq!(c, vec![2, 3, 3]);
    }

    #[test]
    fn profile_examples() {
        let p = multiplicity_profile(&PointSet::from_values(vec![0.3, 0.3, 0.7]).unwrap());
        assert_eq!(p.counts, vec![(0.3, 2), (0.7, 1)]);
        assert_eq!(p.n_multi, 2);
        assert_eq!(p.count_of(0.3), 2);
        assert_eq!(p.count_of(0.5), 0);

        let p = multiplicity_profile(&PointSet::from_values(vec![0.0, 0.25, 0.5, 0.75]).unwrap());
        assert!(p.counts.iter().all(|c| c.1 == 1));
        assert_eq!(p.n_multi, 0);
    }

    #[test]
    fn point_set_validation() {
        assert!(PointSet::<f64>::from_values(vec![]).is_err());
        assert!(PointSet::from_values(vec![1.0_f64]).is_err());
        assert!(PointSet::from_values(vec![-0.1_f64]).is_err());
        assert!(PointSet::from_values(vec![f64::NAN]).is_err());
        let ps = PointSet::from_values(vec![-0.0_f64, 0.5]).unwrap();
        assert!(ps.points()[0].is_sign_positive());
        let ps = PointSet::from_values(vec![0.7, 0.1, 0.4]).unwrap();
        assert_eq!(ps.sorted(), &[0.1, 0.4, 0.7]);
    }

    #[test]
    fn f32_generators_stay_in_range() {
        let a = gen_uniform::<f32>(10_000, 3).unwrap();
        assert!(a.points().iter().all(|&v| (0.0..1.0).contains(&v)));
        let v = gen_vdc::<f32>(3, 1000).unwrap();
        assert!(v.points().iter().all(|&x| (0.0..1.0).contains(&x)));
    }
}
