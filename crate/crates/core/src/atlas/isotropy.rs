//! Isotropy constraints inside the gl atlas, and group elements of the
//! orthosymplectic, periplectic and queer subgroups.

use num_traits::{ToPrimitive, Zero};
use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::Serialize;
use thiserror::Error;

use crate::grassmann::{GrassmannElement, Parity};
use crate::linalg::QMatrix;
use crate::parabolic::FlagType;
use crate::superalgebra::{AlgebraError, LieSuperAlgebra, Series};
use crate::supermatrix::{Partition, SuperMatrix, SuperMatrixError};
use crate::Rational;

use super::{enumerate_charts, group_action, transition, AtlasError, ChartIndex, ChartPoint, GroupElement};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum IsotropyError {
    #[error("gl flags carry no isotropy constraint")]
    NoConstraint,
    #[error("first-stage matrix has the wrong shape: {0}")]
    Shape(String),
    #[error(transparent)]
    Matrix(#[from] SuperMatrixError),
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error(transparent)]
    Atlas(#[from] AtlasError),
}

fn form_matrix(series: Series, m: usize, n: usize) -> Result<SuperMatrix, IsotropyError> {
    let g = LieSuperAlgebra::build(series, m, n)?;
    let form = g.form().ok_or(IsotropyError::NoConstraint)?;
    let part = Partition::new(m, n);
    let parity = if series == Series::Pisp { Parity::Odd } else { Parity::Even };
    Ok(SuperMatrix::from_rational(&form, part, part, parity, 0)?)
}

/// `isotropy_residual`: Z^{ST} Γ Z for osp, Z^{ST} Υ Z for πsp, and the
/// (n|0)×(k|k) matrix (X − Y | Ξ − H) for q. Zero iff the point lies on
/// the isotropic flag subvariety.
pub fn isotropy_residual(series: Series, z1: &SuperMatrix) -> Result<SuperMatrix, IsotropyError> {
    let rows = z1.row_partition();
    let cols = z1.col_partition();
    let gens = z1.generators();
    match series {
        Series::Gl => Err(IsotropyError::NoConstraint),
        Series::Osp | Series::Pisp => {
            if series == Series::Pisp && rows.even != rows.odd {
                return Err(IsotropyError::Shape(format!("πsp needs (n|n) rows, got {rows}")));
            }
            let form = form_matrix(series, rows.even, rows.odd)?.embed(gens)?;
            Ok(z1.supertranspose().mul(&form)?.mul(z1)?)
        }
        Series::Q => {
            let (n, k) = (rows.even, cols.even);
            if rows.odd != n || cols.odd != k {
                return Err(IsotropyError::Shape(format!("q needs (n|n)×(k|k), got {rows}×{cols}")));
            }
            let mut entries = Vec::with_capacity(n * 2 * k);
            for i in 0..n {
                for j in 0..k {
                    entries.push(z1.entry(i, j) - z1.entry(n + i, k + j));
                }
                for j in 0..k {
                    entries.push(z1.entry(i, k + j) - z1.entry(n + i, j));
                }
            }
            Ok(SuperMatrix::new(
                Partition::new(n, 0),
                Partition::new(k, k),
                Parity::Even,
                entries,
                gens,
            )?)
        }
    }
}

/// Zero residual at the first stage, and for q at every stage.
pub fn on_subvariety(ft: &FlagType, p: &ChartPoint) -> Result<bool, IsotropyError> {
    let stages = if ft.series() == Series::Q { p.matrices.len() } else { 1 };
    for z in &p.matrices[..stages] {
        if !isotropy_residual(ft.series(), z)?.is_zero() {
            return Ok(false);
        }
    }
    Ok(true)
}

/// The chart whose origin is the base point of the flag type.
pub fn base_chart(ft: &FlagType) -> ChartIndex {
    let m = ft.m();
    let mut prev: Vec<usize> = (0..m + ft.n()).collect();
    let mut stages = Vec::new();
    for v in ft.base_point() {
        let positions: Vec<usize> = v
            .iter()
            .map(|x| prev.iter().position(|y| y == x).expect("base point is nested"))
            .collect();
        let k_prev = prev.iter().filter(|&&x| x < m).count();
        let even = positions.iter().copied().filter(|&i| i < k_prev).collect();
        let odd = positions.iter().filter(|&&i| i >= k_prev).map(|i| i - k_prev).collect();
        stages.push((even, odd));
        prev = v;
    }
    ChartIndex { stages }
}

fn lift(part: Partition, x: &QMatrix, coefficient: &GrassmannElement, generators: usize) -> Result<GroupElement, AtlasError> {
    let size = part.total();
    let mut entries = Vec::with_capacity(size * size);
    for i in 0..size {
        for j in 0..size {
            let mut e = coefficient.scale(x.get(i, j));
            if i == j {
                e = &e + &GrassmannElement::one(generators);
            }
            entries.push(e);
        }
    }
    GroupElement::new(SuperMatrix::new(part, part, Parity::Even, entries, generators)?)
}

/// exp(cX) for nilpotent rational X, as a finite sum.
fn exp_nilpotent(x: &QMatrix, c: &Rational) -> Option<QMatrix> {
    let n = x.rows();
    let mut out = QMatrix::identity(n);
    let mut term = QMatrix::identity(n);
    for k in 1..=n {
        term = term.mul(x).scale(&(c / Rational::from_integer(k.into())));
        if term.is_zero() {
            return Some(out);
        }
        out = out.add(&term);
    }
    term.mul(x).is_zero().then_some(out)
}

/// Matrix realizing an odd basis element as a group direction: for osp the
/// lower-left block changes sign, matching the even form convention of the
/// group.
fn odd_direction(series: Series, part: Partition, x: &QMatrix) -> QMatrix {
    let mut y = x.clone();
    if series == Series::Osp {
        for i in part.even..part.total() {
            for j in 0..part.even {
                let v = -x.get(i, j).clone();
                y.set(i, j, v);
            }
        }
    }
    y
}

fn pick(rng: &mut ChaCha8Rng) -> Rational {
    loop {
        let v = Rational::new(rng.gen_range(-3i64..=3).into(), rng.gen_range(1i64..=3).into());
        if !v.is_zero() {
            return v;
        }
    }
}

fn partition(g: &LieSuperAlgebra) -> Partition {
    Partition::new(g.size() - g.n(), g.n())
}

/// exp(cX) for each nilpotent even basis element, then one rational torus
/// element diag(Π r_c^{h_i}).
pub fn even_elements(g: &LieSuperAlgebra, generators: usize, seed: u64) -> Result<Vec<GroupElement>, AtlasError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let part = partition(g);
    let mut out = Vec::new();
    for i in g.even_indices() {
        if g.cartan().contains(&i) {
            continue;
        }
        let c = pick(&mut rng);
        if let Some(e) = exp_nilpotent(&g.basis()[i].matrix, &c) {
            out.push(GroupElement::new(SuperMatrix::from_rational(&e, part, part, Parity::Even, generators)?)?);
        }
    }
    let mut torus = QMatrix::identity(g.size());
    for &h in g.cartan() {
        let r = pick(&mut rng);
        let hm = &g.basis()[h].matrix;
        for i in 0..g.size() {
            let e = hm.get(i, i);
            if e.is_zero() {
                continue;
            }
            let exponent = e.to_integer().to_i32().expect("small Cartan entries");
            let value = torus.get(i, i) * r.pow(exponent);
            torus.set(i, i, value);
        }
    }
    out.push(GroupElement::new(SuperMatrix::from_rational(&torus, part, part, Parity::Even, generators)?)?);
    Ok(out)
}

/// 1 + cξY for each odd basis element Y, where the a-th odd element gets
/// the generator with 1-based index `generator(a)`.
pub fn odd_elements(
    g: &LieSuperAlgebra,
    generators: usize,
    generator: impl Fn(usize) -> usize,
    seed: u64,
) -> Result<Vec<GroupElement>, AtlasError> {
    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let part = partition(g);
    g.odd_indices()
        .enumerate()
        .map(|(a, i)| {
            let xi = GrassmannElement::generator(generators, generator(a)).map_err(SuperMatrixError::from)?;
            let y = odd_direction(g.series(), part, &g.basis()[i].matrix);
            lift(part, &y, &xi.scale(&pick(&mut rng)), generators)
        })
        .collect()
}

/// Even and odd subgroup elements, all odd ones using the same generator.
pub fn subgroup_elements(
    g: &LieSuperAlgebra,
    generators: usize,
    odd_generator: usize,
    seed: u64,
) -> Result<Vec<GroupElement>, AtlasError> {
    let mut out = even_elements(g, generators, seed)?;
    out.extend(odd_elements(g, generators, |_| odd_generator, seed.wrapping_add(1))?);
    Ok(out)
}

/// L^{ST} F L − F for the invariant form F; zero for group elements of
/// osp and πsp.
pub fn form_defect(series: Series, l: &GroupElement) -> Result<SuperMatrix, IsotropyError> {
    let part = l.matrix.row_partition();
    let form = form_matrix(series, part.even, part.odd)?.embed(l.matrix.generators())?;
    Ok(l.matrix.supertranspose().mul(&form)?.mul(&l.matrix)?.sub(&form)?)
}

/// Outcome of an isotropy-preservation run.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct IsotropyReport {
    pub flag: String,
    pub group_elements: usize,
    pub points: usize,
    pub checks: usize,
    pub failures: usize,
    pub overlap_rejections: usize,
}

/// Charts in which the series constraint is expressed: all of them, except
/// for q where even and odd rows must be chosen alike.
pub fn admissible_charts(ft: &FlagType) -> Vec<ChartIndex> {
    enumerate_charts(ft)
        .into_iter()
        .filter(|c| ft.series() != Series::Q || c.is_symmetric())
        .collect()
}

/// Move the base point by group elements of the subgroup, check the
/// residual at every reachable chart, then check that transitions and
/// further subgroup elements keep it zero.
pub fn verify_isotropy(ft: &FlagType, seeds: std::ops::Range<u64>) -> Result<IsotropyReport, IsotropyError> {
    let g = LieSuperAlgebra::build(ft.series(), ft.m(), ft.n())?;
    let odd = g.odd_dim();
    let generators = odd + 1;
    let charts = admissible_charts(ft);
    let base = base_chart(ft);
    let mut rep = IsotropyReport {
        flag: ft.to_string(),
        ..IsotropyReport::default()
    };
    let origin = ChartPoint::origin(ft, &base, generators)?;
    rep.checks += 1;
    if !on_subvariety(ft, &origin)? {
        rep.failures += 1;
    }
    for seed in seeds {
        // Move by every even exponential, the torus, and every odd
        // direction with its own generator.
        let mut mover = GroupElement::identity(Partition::new(ft.m(), ft.n()), generators);
        for el in even_elements(&g, generators, seed)?
            .iter()
            .chain(&odd_elements(&g, generators, |a| a + 1, seed.wrapping_add(7))?)
        {
            mover = el.compose(&mover)?;
        }
        let tests = subgroup_elements(&g, generators, generators, seed.wrapping_add(1_000_003))?;
        rep.group_elements += tests.len();
        for target in &charts {
            let p = match group_action(ft, &mover, &origin, target) {
                Ok(p) => p,
                Err(AtlasError::NoOverlap { .. }) => {
                    rep.overlap_rejections += 1;
                    continue;
                }
                Err(e) => return Err(e.into()),
            };
            rep.points += 1;
            rep.checks += 1;
            if !on_subvariety(ft, &p)? {
                rep.failures += 1;
            }
            for to in &charts {
                match transition(ft, &p, to) {
                    Ok(q) => {
                        rep.checks += 1;
                        if !on_subvariety(ft, &q)? {
                            rep.failures += 1;
                        }
                    }
                    Err(AtlasError::NoOverlap { .. }) => rep.overlap_rejections += 1,
                    Err(e) => return Err(e.into()),
                }
                for l in &tests {
                    match group_action(ft, l, &p, to) {
                        Ok(q) => {
                            rep.checks += 1;
                            if !on_subvariety(ft, &q)? {
                                rep.failures += 1;
                            }
                        }
                        Err(AtlasError::NoOverlap { .. }) => rep.overlap_rejections += 1,
                        Err(e) => return Err(e.into()),
                    }
                }
            }
        }
    }
    Ok(rep)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::atlas::sample_point;

    fn flag(series: Series, m: usize, n: usize, k: usize, l: usize) -> FlagType {
        FlagType::new(series, m, n, vec![k], vec![l]).unwrap()
    }

    #[test]
    fn base_charts() {
        assert_eq!(base_chart(&flag(Series::Gl, 2, 2, 1, 1)).to_string(), "(1|1)");
        assert_eq!(base_chart(&flag(Series::Pisp, 2, 2, 1, 1)).to_string(), "(1|2)");
        assert_eq!(base_chart(&flag(Series::Q, 2, 2, 1, 1)).to_string(), "(1|1)");
    }

    #[test]
    fn origin_is_isotropic() {
        for ft in [
            flag(Series::Osp, 2, 2, 1, 1),
            flag(Series::Pisp, 2, 2, 1, 1),
            flag(Series::Q, 2, 2, 1, 1),
        ] {
            let p = ChartPoint::origin(&ft, &base_chart(&ft), 0).unwrap();
            assert!(on_subvariety(&ft, &p).unwrap(), "{ft}");
        }
    }

    #[test]
    fn generic_point_is_not_isotropic() {
        for ft in [
            flag(Series::Osp, 2, 2, 1, 1),
            flag(Series::Pisp, 2, 2, 1, 1),
            flag(Series::Q, 2, 2, 1, 1),
        ] {
            let p = sample_point(&ft, &base_chart(&ft), 5, 2);
            assert!(!on_subvariety(&ft, &p).unwrap(), "{ft}");
        }
    }

    #[test]
    fn q_equal_blocks_vanish() {
        let n = 2;
        let xi = GrassmannElement::generator(n, 1).unwrap();
        let one = GrassmannElement::one(n);
        let two = GrassmannElement::from_integer(n, 2);
        let z = SuperMatrix::new(
            Partition::new(2, 2),
            Partition::new(1, 1),
            Parity::Even,
            vec![one.clone(), GrassmannElement::zero(n), two.clone(), xi.clone(), GrassmannElement::zero(n), one, xi, two],
            n,
        )
        .unwrap();
        assert!(isotropy_residual(Series::Q, &z).unwrap().is_zero());
        assert_eq!(isotropy_residual(Series::Gl, &z), Err(IsotropyError::NoConstraint));
    }

    #[test]
    fn subgroup_elements_preserve_form() {
        for series in [Series::Osp, Series::Pisp] {
            for (m, n) in [(2, 2), (3, 2), (1, 2)] {
                if series == Series::Pisp && m != n {
                    continue;
                }
                let g = LieSuperAlgebra::build(series, m, n).unwrap();
                for l in subgroup_elements(&g, 1, 1, 4).unwrap() {
                    assert!(form_defect(series, &l).unwrap().is_zero(), "{series}({m}|{n})");
                }
            }
        }
    }

    #[test]
    fn grassmannian_isotropy_preserved() {
        for ft in [
            flag(Series::Osp, 2, 2, 1, 1),
            flag(Series::Pisp, 2, 2, 2, 0),
            flag(Series::Q, 2, 2, 1, 1),
        ] {
            let rep = verify_isotropy(&ft, 0..2).unwrap();
            assert_eq!(rep.failures, 0, "{ft}");
            assert!(rep.points > 0);
        }
    }
}
