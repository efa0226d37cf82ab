//! Deterministic test points and random group elements.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;

use crate::grassmann::{GrassmannElement, Parity};
use crate::parabolic::FlagType;
use crate::supermatrix::{Partition, SuperMatrix};
use crate::Rational;

use super::{odd_coordinate_count, transition, AtlasError, ChartIndex, ChartPoint, GroupElement};

/// Retry cap for overlap rejection sampling.
pub const MAX_ATTEMPTS: usize = 1000;

fn small_rational(rng: &mut ChaCha8Rng) -> Rational {
    Rational::new(rng.gen_range(-5i64..=5).into(), rng.gen_range(1i64..=4).into())
}

fn draw(ft: &FlagType, chart: &ChartIndex, rng: &mut ChaCha8Rng, generators: usize) -> ChartPoint {
    let mut p = ChartPoint::origin(ft, chart, generators).expect("chart fits the flag type");
    let mut next_gen = 1;
    for (s, z) in p.matrices.iter_mut().enumerate() {
        let id_rows = chart.identity_rows(ft, s);
        for i in 0..z.nrows() {
            if id_rows.contains(&i) {
                continue;
            }
            for j in 0..z.ncols() {
                let value = if z.block_parity(i, j) == Parity::Even {
                    GrassmannElement::scalar(generators, small_rational(rng))
                } else {
                    let g = GrassmannElement::generator(generators, next_gen).expect("enough generators");
                    next_gen += 1;
                    g
                };
                *z = z.clone().with_entry(i, j, value).expect("parity respected");
            }
        }
    }
    p
}

/// `sample_point`: rational even coordinates with numerators in [−5, 5] and
/// denominators in [1, 4]; odd coordinates are ξ_1, ξ_2, … in order.
///
/// Panics if `generators` is below the chart's odd coordinate count.
pub fn sample_point(ft: &FlagType, chart: &ChartIndex, seed: u64, generators: usize) -> ChartPoint {
    assert!(
        generators >= odd_coordinate_count(ft),
        "need at least {} generators",
        odd_coordinate_count(ft)
    );
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    draw(ft, chart, &mut rng, generators)
}

/// A sample at `chart` lying in the overlap with every chart in `targets`,
/// together with the number of rejected draws.
pub fn sample_in_overlap(
    ft: &FlagType,
    chart: &ChartIndex,
    targets: &[ChartIndex],
    seed: u64,
    generators: usize,
) -> Result<(ChartPoint, usize), AtlasError> {
    assert!(generators >= odd_coordinate_count(ft));
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    for attempt in 0..MAX_ATTEMPTS {
        let p = draw(ft, chart, &mut rng, generators);
        if targets.iter().all(|t| transition(ft, &p, t).is_ok()) {
            return Ok((p, attempt));
        }
    }
    Err(AtlasError::UnreachableOverlap { attempts: MAX_ATTEMPTS })
}

/// L = L₀ + ξ R with L₀ an invertible block-diagonal rational matrix, R a
/// rational matrix supported on the odd blocks and ξ the generator with the
/// given 1-based index.
pub fn random_group_element(part: Partition, generators: usize, generator: usize, seed: u64) -> GroupElement {
    let mut rng = ChaCha8Rng::seed_from_u64(seed ^ 0x9e37_79b9_7f4a_7c15);
    let size = part.total();
    let xi = GrassmannElement::generator(generators, generator).expect("generator in range");
    loop {
        let mut entries = Vec::with_capacity(size * size);
        for i in 0..size {
            for j in 0..size {
                let c = small_rational(&mut rng);
                entries.push(if part.parity_of(i) == part.parity_of(j) {
                    GrassmannElement::scalar(generators, c)
                } else {
                    xi.scale(&c)
                });
            }
        }
        let m = SuperMatrix::new(part, part, Parity::Even, entries, generators).expect("parity respected");
        if let Ok(l) = GroupElement::new(m) {
            return l;
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::enumerate_charts;
    use crate::superalgebra::Series;

    #[test]
    fn deterministic() {
        let ft = FlagType::new(Series::Gl, 2, 2, vec![1], vec![1]).unwrap();
        let c = &enumerate_charts(&ft)[0];
        assert_eq!(sample_point(&ft, c, 7, 2), sample_point(&ft, c, 7, 2));
        assert_ne!(sample_point(&ft, c, 7, 2), sample_point(&ft, c, 8, 2));
    }

    #[test]
    fn odd_coordinates_are_distinct_generators() {
        let ft = FlagType::new(Series::Gl, 2, 2, vec![1], vec![1]).unwrap();
        let c = &enumerate_charts(&ft)[0];
        let p = sample_point(&ft, c, 3, 2);
        let mut odd: Vec<GrassmannElement> = Vec::new();
        let z = &p.matrices[0];
        for i in 0..z.nrows() {
            for j in 0..z.ncols() {
                if z.block_parity(i, j) == Parity::Odd && !z.entry(i, j).is_zero() {
                    odd.push(z.entry(i, j).clone());
                }
            }
        }
        assert_eq!(odd.len(), 2);
        for (a, i) in odd.iter().zip(1..) {
            assert_eq!(*a, GrassmannElement::generator(2, i).unwrap());
        }
    }

    #[test]
    fn seeds_reach_every_overlap() {
        let ft = FlagType::new(Series::Gl, 2, 2, vec![1], vec![1]).unwrap();
        let charts = enumerate_charts(&ft);
        for seed in 1..=50 {
            let (p, _) = sample_in_overlap(&ft, &charts[0], &charts, seed, 2).unwrap();
            for c in &charts {
                assert!(transition(&ft, &p, c).is_ok());
            }
        }
    }

    #[test]
    fn group_elements_invertible() {
        let part = Partition::new(2, 1);
        for seed in 0..20 {
            let l = random_group_element(part, 3, 3, seed);
            assert!(l.matrix.inverse_even().is_ok());
        }
    }
}
