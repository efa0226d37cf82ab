//! Chart atlases of flag supermanifolds over Λ_N.
//!
//! A point of the chart indexed by I is a tuple of supermatrices
//! Z_1..Z_r, Z_s of size (k_{s−1}|l_{s−1}) × (k_s|l_s), carrying an identity
//! block in the rows named by I_s. Even coordinates are rationals and odd
//! coordinates are Grassmann-odd, so every identity is checked exactly.

mod isotropy;
mod sample;

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::exec::Execution;
use crate::grassmann::{GrassmannElement, Parity};
use crate::parabolic::FlagType;
use crate::supermatrix::{Partition, SuperMatrix, SuperMatrixError};

pub use isotropy::{
    admissible_charts, base_chart, even_elements, form_defect, isotropy_residual, odd_elements, on_subvariety,
    subgroup_elements, verify_isotropy, IsotropyError, IsotropyReport,
};
pub use sample::{random_group_element, sample_in_overlap, sample_point};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AtlasError {
    #[error("charts do not overlap at this point (stage {stage})")]
    NoOverlap { stage: usize },
    #[error("no overlap point found after {attempts} attempts")]
    UnreachableOverlap { attempts: usize },
    #[error("chart index does not fit the flag type: {0}")]
    BadChart(String),
    #[error(transparent)]
    Matrix(#[from] SuperMatrixError),
}

/// I = (I_1..I_r), I_s = (I_{s0̄} ⊂ {1..k_{s−1}}, I_{s1̄} ⊂ {1..l_{s−1}}).
/// Indices are stored 0-based and shown 1-based.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct ChartIndex {
    pub stages: Vec<(Vec<usize>, Vec<usize>)>,
}

impl ChartIndex {
    /// Row indices of Z_s holding the identity: I_{s0̄}, then k_{s−1} + I_{s1̄}.
    pub fn identity_rows(&self, ft: &FlagType, s: usize) -> Vec<usize> {
        let (even, odd) = &self.stages[s];
        let k_prev = ft.k_at(s);
        even.iter().copied().chain(odd.iter().map(|j| k_prev + j)).collect()
    }

    pub fn validate(&self, ft: &FlagType) -> Result<(), AtlasError> {
        if self.stages.len() != ft.r() {
            return Err(AtlasError::BadChart(format!("{} stages for r = {}", self.stages.len(), ft.r())));
        }
        for (s, (even, odd)) in self.stages.iter().enumerate() {
            let ok = |set: &[usize], size: usize, bound: usize| {
                set.len() == size && set.windows(2).all(|w| w[0] < w[1]) && set.iter().all(|&i| i < bound)
            };
            if !ok(even, ft.k_at(s + 1), ft.k_at(s)) || !ok(odd, ft.l_at(s + 1), ft.l_at(s)) {
                return Err(AtlasError::BadChart(format!("stage {}", s + 1)));
            }
        }
        Ok(())
    }

    /// True when even and odd index sets agree at every stage.
    pub fn is_symmetric(&self) -> bool {
        self.stages.iter().all(|(a, b)| a == b)
    }
}

impl fmt::Display for ChartIndex {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let show = |v: &[usize]| v.iter().map(|i| (i + 1).to_string()).collect::<Vec<_>>().join(",");
        let parts: Vec<String> = self
            .stages
            .iter()
            .map(|(a, b)| format!("({}|{})", show(a), show(b)))
            .collect();
        f.write_str(&parts.join(" "))
    }
}

/// `enumerate_charts`: every legal index tuple, lexicographic.
pub fn enumerate_charts(ft: &FlagType) -> Vec<ChartIndex> {
    let mut out = vec![ChartIndex { stages: Vec::new() }];
    for s in 1..=ft.r() {
        let evens = subsets(ft.k_at(s - 1), ft.k_at(s));
        let odds = subsets(ft.l_at(s - 1), ft.l_at(s));
        let mut next = Vec::with_capacity(out.len() * evens.len() * odds.len());
        for prefix in &out {
            for e in &evens {
                for o in &odds {
                    let mut c = prefix.clone();
                    c.stages.push((e.clone(), o.clone()));
                    next.push(c);
                }
            }
        }
        out = next;
    }
    out
}

/// k-subsets of {0..n}, lexicographic.
fn subsets(n: usize, k: usize) -> Vec<Vec<usize>> {
    fn go(start: usize, n: usize, k: usize, cur: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if cur.len() == k {
            out.push(cur.clone());
            return;
        }
        for i in start..n {
            if n - i < k - cur.len() {
                break;
            }
            cur.push(i);
            go(i + 1, n, k, cur, out);
            cur.pop();
        }
    }
    let mut out = Vec::new();
    go(0, n, k, &mut Vec::new(), &mut out);
    out
}

/// Number of odd coordinates of any chart.
pub fn odd_coordinate_count(ft: &FlagType) -> usize {
    (1..=ft.r())
        .map(|s| (ft.k_at(s - 1) - ft.k_at(s)) * ft.l_at(s) + (ft.l_at(s - 1) - ft.l_at(s)) * ft.k_at(s))
        .sum()
}

pub fn even_coordinate_count(ft: &FlagType) -> usize {
    (1..=ft.r())
        .map(|s| (ft.k_at(s - 1) - ft.k_at(s)) * ft.k_at(s) + (ft.l_at(s - 1) - ft.l_at(s)) * ft.l_at(s))
        .sum()
}

#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct ChartPoint {
    pub chart: ChartIndex,
    pub matrices: Vec<SuperMatrix>,
}

impl ChartPoint {
    /// The origin of the chart: identity rows, all coordinates zero.
    pub fn origin(ft: &FlagType, chart: &ChartIndex, generators: usize) -> Result<Self, AtlasError> {
        chart.validate(ft)?;
        let mut matrices = Vec::with_capacity(ft.r());
        for s in 1..=ft.r() {
            let rows = Partition::new(ft.k_at(s - 1), ft.l_at(s - 1));
            let cols = Partition::new(ft.k_at(s), ft.l_at(s));
            let mut z = SuperMatrix::zeros(rows, cols, Parity::Even, generators);
            for (col, row) in chart.identity_rows(ft, s - 1).into_iter().enumerate() {
                z = z.with_entry(row, col, GrassmannElement::one(generators))?;
            }
            matrices.push(z);
        }
        Ok(ChartPoint {
            chart: chart.clone(),
            matrices,
        })
    }

    pub fn generators(&self) -> usize {
        self.matrices.first().map_or(0, SuperMatrix::generators)
    }

    /// The identity block sits exactly in the rows named by the chart.
    pub fn has_identity_rows(&self, ft: &FlagType) -> bool {
        self.matrices.iter().enumerate().all(|(s, z)| {
            let rows = self.chart.identity_rows(ft, s);
            rows.iter().enumerate().all(|(col, &row)| {
                (0..z.ncols()).all(|j| {
                    let e = z.entry(row, j);
                    if j == col {
                        *e == GrassmannElement::one(e.generators())
                    } else {
                        e.is_zero()
                    }
                })
            })
        })
    }
}

/// An element of GL(m|n) over Λ_N with invertible body.
#[derive(Debug, Clone, PartialEq, Eq)]
pub struct GroupElement {
    pub matrix: SuperMatrix,
}

impl GroupElement {
    pub fn new(matrix: SuperMatrix) -> Result<Self, AtlasError> {
        if matrix.parity() != Parity::Even || matrix.row_partition() != matrix.col_partition() {
            return Err(SuperMatrixError::NotEvenSquare.into());
        }
        if matrix.body().inverse().is_none() {
            return Err(SuperMatrixError::Singular.into());
        }
        Ok(GroupElement { matrix })
    }

    pub fn identity(part: Partition, generators: usize) -> Self {
        GroupElement {
            matrix: SuperMatrix::identity(part, generators),
        }
    }

    /// L₂ · L₁ (act by L₁ first).
    pub fn compose(&self, first: &GroupElement) -> Result<GroupElement, AtlasError> {
        Ok(GroupElement {
            matrix: self.matrix.mul(&first.matrix)?,
        })
    }
}

fn apply(ft: &FlagType, left: Option<&SuperMatrix>, p: &ChartPoint, to: &ChartIndex) -> Result<ChartPoint, AtlasError> {
    to.validate(ft)?;
    let mut prev: Option<SuperMatrix> = None;
    let mut out = Vec::with_capacity(ft.r());
    for (s, z) in p.matrices.iter().enumerate() {
        let product = match (&prev, s) {
            (Some(c), _) => c.mul(z)?,
            (None, 0) => match left {
                Some(l) => l.mul(z)?,
                None => z.clone(),
            },
            (None, _) => unreachable!("stage order"),
        };
        let c = product.select_rows(&to.identity_rows(ft, s))?;
        let c_inv = match c.inverse_even() {
            Ok(inv) => inv,
            Err(SuperMatrixError::Singular) => return Err(AtlasError::NoOverlap { stage: s + 1 }),
            Err(e) => return Err(e.into()),
        };
        out.push(product.mul(&c_inv)?);
        prev = Some(c);
    }
    Ok(ChartPoint {
        chart: to.clone(),
        matrices: out,
    })
}

/// `transition`: Z_{J_1} = Z_{I_1} C_1⁻¹, Z_{J_s} = C_{s−1} Z_{I_s} C_s⁻¹.
pub fn transition(ft: &FlagType, p: &ChartPoint, to: &ChartIndex) -> Result<ChartPoint, AtlasError> {
    apply(ft, None, p, to)
}

/// `group_action`: Z̃_{J_1} = L Z_{I_1} C_1⁻¹, Z̃_{J_s} = C_{s−1} Z_{I_s} C_s⁻¹.
pub fn group_action(ft: &FlagType, l: &GroupElement, p: &ChartPoint, to: &ChartIndex) -> Result<ChartPoint, AtlasError> {
    apply(ft, Some(&l.matrix), p, to)
}

/// `verify_cocycle`: T_{JK}(T_{IJ}(p)) = T_{IK}(p), compared exactly.
pub fn verify_cocycle(ft: &FlagType, j: &ChartIndex, k: &ChartIndex, p: &ChartPoint) -> Result<bool, AtlasError> {
    let via = transition(ft, &transition(ft, p, j)?, k)?;
    let direct = transition(ft, p, k)?;
    Ok(via == direct)
}

/// Outcome of the randomized atlas verification for one flag type.
#[derive(Debug, Clone, Default, PartialEq, Eq, Serialize)]
pub struct AtlasReport {
    pub flag: String,
    pub charts: usize,
    pub seeds: usize,
    pub generators: usize,
    pub triples_checked: usize,
    pub round_trips_checked: usize,
    pub action_checks: usize,
    pub failures: usize,
    pub overlap_rejections: usize,
    pub unreachable: usize,
}

impl AtlasReport {
    fn absorb(&mut self, other: &AtlasReport) {
        self.triples_checked += other.triples_checked;
        self.round_trips_checked += other.round_trips_checked;
        self.action_checks += other.action_checks;
        self.failures += other.failures;
        self.overlap_rejections += other.overlap_rejections;
        self.unreachable += other.unreachable;
    }
}

/// Extra odd generators reserved for the random group elements.
pub const GROUP_GENERATORS: usize = 2;

/// Randomized verification of the cocycle, round-trip and action identities.
///
/// Each seed gives one point lying in every chart. Its coordinates in all
/// charts are computed from the first chart; then for every triple
/// (I, J, K) the composite T_{JK} ∘ T_{IJ} is compared exactly with T_{IK}.
/// Transitions are memoized on exact equality of their inputs, so a triple
/// costs a lookup once its pairs are known.
pub fn verify_atlas(ft: &FlagType, seeds: std::ops::Range<u64>, exec: Execution) -> AtlasReport {
    let charts = enumerate_charts(ft);
    let generators = odd_coordinate_count(ft) + GROUP_GENERATORS;
    let seed_list: Vec<u64> = seeds.collect();
    let partial = exec.map(&seed_list, |&seed| verify_seed(ft, &charts, generators, seed));
    let mut report = AtlasReport {
        flag: ft.to_string(),
        charts: charts.len(),
        seeds: seed_list.len(),
        generators,
        ..AtlasReport::default()
    };
    for p in &partial {
        report.absorb(p);
    }
    report
}

fn verify_seed(ft: &FlagType, charts: &[ChartIndex], generators: usize, seed: u64) -> AtlasReport {
    let mut rep = AtlasReport::default();
    let base = &charts[0];
    let (p, rejections) = match sample_in_overlap(ft, base, charts, seed, generators) {
        Ok(x) => x,
        Err(_) => {
            rep.unreachable += 1;
            return rep;
        }
    };
    rep.overlap_rejections += rejections;
    let n = charts.len();
    let mut at: Vec<ChartPoint> = Vec::with_capacity(n);
    for c in charts {
        match transition(ft, &p, c) {
            Ok(q) => at.push(q),
            Err(_) => {
                rep.unreachable += 1;
                return rep;
            }
        }
    }
    // Pairwise table T[i][j] = T_{ij}(p_i).
    let mut table: Vec<Vec<Option<ChartPoint>>> = vec![vec![None; n]; n];
    for i in 0..n {
        if !at[i].has_identity_rows(ft) {
            rep.failures += 1;
        }
        for j in 0..n {
            match transition(ft, &at[i], &charts[j]) {
                Ok(q) => {
                    if !q.has_identity_rows(ft) {
                        rep.failures += 1;
                    }
                    table[i][j] = Some(q);
                }
                Err(_) => rep.failures += 1,
            }
        }
    }
    // Round trips: T_{ji}(T_{ij}(p_i)) = p_i.
    for i in 0..n {
        for j in 0..n {
            let Some(q) = &table[i][j] else { continue };
            let back = if *q == at[j] {
                table[j][i].clone()
            } else {
                transition(ft, q, &charts[i]).ok()
            };
            rep.round_trips_checked += 1;
            if back.as_ref() != Some(&at[i]) {
                rep.failures += 1;
            }
        }
    }
    // Cocycle on every triple.
    for i in 0..n {
        for j in 0..n {
            let Some(q) = &table[i][j] else { continue };
            for k in 0..n {
                let direct = &table[i][k];
                let via = if *q == at[j] {
                    table[j][k].clone()
                } else {
                    transition(ft, q, &charts[k]).ok()
                };
                rep.triples_checked += 1;
                if via.is_none() || via != *direct {
                    rep.failures += 1;
                }
            }
        }
    }
    verify_action(ft, charts, &at, generators, seed, &mut rep);
    rep
}

/// Seeds divisible by this also get the composition check, the most
/// expensive part of a seed.
pub const COMPOSITION_STRIDE: u64 = 5;

/// Identity acts as the transition; acting by L₁ then L₂ equals acting by
/// L₂L₁. L₁ and L₂ each carry one fresh odd generator.
fn verify_action(
    ft: &FlagType,
    charts: &[ChartIndex],
    at: &[ChartPoint],
    generators: usize,
    seed: u64,
    rep: &mut AtlasReport,
) {
    let part = Partition::new(ft.m(), ft.n());
    let free = odd_coordinate_count(ft);
    let n = charts.len();
    let i = (seed as usize) % n;
    let id = GroupElement::identity(part, generators);
    for j in 0..n {
        rep.action_checks += 1;
        match (group_action(ft, &id, &at[i], &charts[j]), transition(ft, &at[i], &charts[j])) {
            (Ok(a), Ok(b)) if a == b => {}
            _ => rep.failures += 1,
        }
    }
    if seed % COMPOSITION_STRIDE != 0 {
        return;
    }
    let l1 = random_group_element(part, generators, free + 1, seed.wrapping_mul(2).wrapping_add(1));
    let l2 = random_group_element(part, generators, free + 2, seed.wrapping_mul(2).wrapping_add(2));
    let Ok(l21) = l2.compose(&l1) else {
        rep.failures += 1;
        return;
    };
    let other = (i + 1 + (seed as usize / n)) % n;
    for (j, k) in [(i, i), (other, (other + i) % n)] {
        let mid = match group_action(ft, &l1, &at[i], &charts[j]) {
            Ok(mid) => mid,
            Err(_) => {
                rep.overlap_rejections += 1;
                continue;
            }
        };
        match (group_action(ft, &l2, &mid, &charts[k]), group_action(ft, &l21, &at[i], &charts[k])) {
            (Ok(a), Ok(b)) => {
                rep.action_checks += 1;
                if a != b {
                    rep.failures += 1;
                }
            }
            (Err(AtlasError::NoOverlap { .. }), Err(AtlasError::NoOverlap { .. })) => rep.overlap_rejections += 1,
            _ => {
                rep.action_checks += 1;
                rep.failures += 1;
            }
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::rational::{int, q};
    use crate::superalgebra::Series;

    fn gl(m: usize, n: usize, k: &[usize], l: &[usize]) -> FlagType {
        FlagType::new(Series::Gl, m, n, k.to_vec(), l.to_vec()).unwrap()
    }

    #[test]
    fn chart_counts() {
        assert_eq!(enumerate_charts(&gl(2, 1, &[1], &[0])).len(), 2);
        assert_eq!(enumerate_charts(&gl(2, 2, &[1], &[1])).len(), 4);
        assert_eq!(enumerate_charts(&gl(3, 0, &[2, 1], &[0, 0])).len(), 6);
    }

    #[test]
    fn explicit_grassmannian_transition() {
        // Gr^{2|1}_{(1|0)}, I = row 1, Z = (1, 2, ξ)ᵀ → J = row 2.
        let ft = gl(2, 1, &[1], &[0]);
        let charts = enumerate_charts(&ft);
        let (i, j) = (&charts[0], &charts[1]);
        let n = 1;
        let z = SuperMatrix::new(
            Partition::new(2, 1),
            Partition::new(1, 0),
            Parity::Even,
            vec![
                GrassmannElement::one(n),
                GrassmannElement::from_integer(n, 2),
                GrassmannElement::generator(n, 1).unwrap(),
            ],
            n,
        )
        .unwrap();
        let p = ChartPoint {
            chart: i.clone(),
            matrices: vec![z],
        };
        let out = transition(&ft, &p, j).unwrap();
        let zz = &out.matrices[0];
        assert_eq!(zz.entry(0, 0).body(), q(1, 2));
        assert_eq!(zz.entry(1, 0).body(), int(1));
        assert_eq!(*zz.entry(2, 0), GrassmannElement::generator(n, 1).unwrap().scale(&q(1, 2)));
        assert_eq!(transition(&ft, &p, i).unwrap(), p);
    }

    #[test]
    fn diagonal_action_rescales() {
        let ft = gl(2, 1, &[1], &[0]);
        let charts = enumerate_charts(&ft);
        let p = sample_point(&ft, &charts[0], 3, 1);
        let part = Partition::new(2, 1);
        let mut d = crate::linalg::QMatrix::zeros(3, 3);
        d.set(0, 0, int(2));
        d.set(1, 1, int(3));
        d.set(2, 2, int(5));
        let l = GroupElement::new(SuperMatrix::from_rational(&d, part, part, Parity::Even, 1).unwrap()).unwrap();
        let out = group_action(&ft, &l, &p, &charts[0]).unwrap();
        let (x, xi) = (p.matrices[0].entry(1, 0), p.matrices[0].entry(2, 0));
        assert_eq!(*out.matrices[0].entry(1, 0), x.scale(&q(3, 2)));
        assert_eq!(*out.matrices[0].entry(2, 0), xi.scale(&q(5, 2)));
    }

    #[test]
    fn identity_action_and_same_chart() {
        let ft = gl(2, 2, &[1], &[1]);
        let charts = enumerate_charts(&ft);
        let p = sample_point(&ft, &charts[0], 11, odd_coordinate_count(&ft));
        let id = GroupElement::identity(Partition::new(2, 2), p.generators());
        assert_eq!(group_action(&ft, &id, &p, &charts[0]).unwrap(), p);
    }

    #[test]
    fn cocycle_literal_small() {
        for ft in [gl(3, 1, &[1], &[0]), gl(3, 2, &[2, 1], &[1, 0])] {
            let charts = enumerate_charts(&ft);
            let n = odd_coordinate_count(&ft);
            for seed in 0..3 {
                let (p, _) = sample_in_overlap(&ft, &charts[0], &charts, seed, n).unwrap();
                for j in &charts {
                    for k in &charts {
                        assert!(verify_cocycle(&ft, j, k, &p).unwrap());
                    }
                }
            }
        }
    }

    #[test]
    fn small_atlas_report() {
        let ft = gl(2, 1, &[1], &[0]);
        let rep = verify_atlas(&ft, 0..5, Execution::Sequential);
        assert_eq!(rep.failures, 0);
        assert_eq!(rep.triples_checked, 5 * 8);
        assert_eq!(rep, verify_atlas(&ft, 0..5, Execution::Parallel));
    }
}
