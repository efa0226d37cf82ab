//! H⁰ of flag supermanifolds, computed two ways.
//!
//! The generic route: h_1̄ = odd part of the stabilizer, S = Ann(h_1̄) in
//! g_1̄*, W = the largest g_0̄-submodule of S; then H⁰ ≅ ⋀W. The closed-form
//! route reads the answer off the weight tuple.

use std::fmt;

use serde::Serialize;
use thiserror::Error;

use crate::linalg::{EchelonBuilder, QMatrix, Subspace, Vector};
use crate::parabolic::{stabilizer_direct, FlagType};
use crate::superalgebra::{AlgebraError, LieSuperAlgebra, Series};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum ClassifierError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("no closed form for {0}: {1}")]
    OutsideHypotheses(String, &'static str),
    #[error("algebra is {0} but the flag type is for {1}")]
    Mismatch(String, String),
}

/// H⁰ ≅ ⋀(d); d = 0 means ℂ.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
pub struct H0Result {
    pub generator_dim: usize,
}

impl H0Result {
    /// Dimension of ⋀(d) as a vector space, 2^d.
    pub fn vector_space_dim(&self) -> u128 {
        1u128 << self.generator_dim
    }
}

impl fmt::Display for H0Result {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.generator_dim == 0 {
            f.write_str("C")
        } else {
            write!(f, "Λ({})", self.generator_dim)
        }
    }
}

/// Which case of the closed-form analysis produced the answer.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, Serialize)]
#[serde(rename_all = "kebab-case")]
pub enum ClosedFormCase {
    /// gl: a_m > b_1, i.e. a stage equal to (m|0).
    GlEvenDominant,
    /// gl: b_n > a_1, i.e. a stage equal to (0|n).
    GlOddDominant,
    GlGeneric,
    /// osp(2|n): a_1 > b_1.
    OspTwoSplit,
    OspTwoGeneric,
    /// osp(m|n) with m ≠ 2.
    OspIrreducible,
    /// πsp: a_i + a_j > 0 for all i ≤ j.
    PispPositive,
    /// πsp: a_i + a_j < 0 for all i < j.
    PispNegative,
    PispGeneric,
    /// πsp(1|1), (1|0).
    PispOnePoint,
    /// πsp(1|1), (0|1).
    PispOneWhole,
    Q,
}

impl ClosedFormCase {
    pub fn name(self) -> &'static str {
        match self {
            ClosedFormCase::GlEvenDominant => "gl-even-dominant",
            ClosedFormCase::GlOddDominant => "gl-odd-dominant",
            ClosedFormCase::GlGeneric => "gl-generic",
            ClosedFormCase::OspTwoSplit => "osp-two-split",
            ClosedFormCase::OspTwoGeneric => "osp-two-generic",
            ClosedFormCase::OspIrreducible => "osp-irreducible",
            ClosedFormCase::PispPositive => "pisp-positive",
            ClosedFormCase::PispNegative => "pisp-negative",
            ClosedFormCase::PispGeneric => "pisp-generic",
            ClosedFormCase::PispOnePoint => "pisp-one-point",
            ClosedFormCase::PispOneWhole => "pisp-one-whole",
            ClosedFormCase::Q => "q",
        }
    }
}

/// `odd_part`: h_1̄ = s ∩ g_1̄, in odd-basis coordinates.
pub fn odd_part(g: &LieSuperAlgebra, s: &crate::parabolic::Subalgebra) -> Subspace {
    s.odd_part(g)
}

/// `annihilator`: Im γ* = {w ∈ g_1̄* : w(h_1̄) = 0}, in the dual basis.
pub fn annihilator(h1: &Subspace) -> Subspace {
    h1.annihilator()
}

/// The coadjoint action of an even basis element on g_1̄*: X·w = −M_Xᵀ w,
/// where M_X is ad X on g_1̄.
pub fn coadjoint(g: &LieSuperAlgebra, x: usize) -> QMatrix {
    g.ad_on_odd(x).transpose().scale(&crate::rational::int(-1))
}

/// `max_invariant_submodule`: the largest g_0̄-invariant subspace of S.
///
/// This is the descending fixpoint W_{i+1} = {w ∈ W_i : X·w ∈ W_i}, run on
/// the defining equations of W_i. If E_i = W_i^⊥ ⊂ g_1̄, then
/// E_{i+1} = E_i + Σ_X M_X E_i, so the iteration grows E until it is
/// ad(g_0̄)-stable and returns W = E^⊥.
pub fn max_invariant_submodule(g: &LieSuperAlgebra, s: &Subspace) -> Subspace {
    let d1 = g.odd_dim();
    assert_eq!(s.ambient(), d1, "S must live in g_1̄*");
    let ads: Vec<QMatrix> = g.even_indices().map(|x| g.ad_on_odd(x)).collect();
    let mut eq = EchelonBuilder::new(d1);
    let mut frontier: Vec<Vector> = Vec::new();
    for v in s.annihilator().basis() {
        if eq.insert(v) {
            frontier.push(v.clone());
        }
    }
    while let Some(e) = frontier.pop() {
        for m in &ads {
            let img = m.mul_vec(&e);
            if eq.insert(&img) {
                frontier.push(img);
            }
        }
    }
    eq.to_subspace().annihilator()
}

/// Per-summand injectivity report: is h_1̄ ∩ V_k = 0?
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct SummandReport {
    pub name: String,
    pub dim: usize,
    pub injective: bool,
}

#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Lemma8Report {
    pub summands: Vec<SummandReport>,
}

impl Lemma8Report {
    pub fn any_injective(&self) -> bool {
        self.summands.iter().any(|s| s.injective)
    }
}

/// Everything the generic route computes for one flag type.
#[derive(Debug, Clone)]
pub struct Classification {
    pub flag: FlagType,
    pub stabilizer_dims: (usize, usize),
    pub h1: Subspace,
    pub image: Subspace,
    pub w: Subspace,
    pub result: H0Result,
    pub lemma8: Lemma8Report,
    /// W(h_1̄) = 0, i.e. W ⊆ Ann(h_1̄). Expected always.
    pub w_kills_h1: bool,
}

pub fn lemma8_check(g: &LieSuperAlgebra, h1: &Subspace) -> Lemma8Report {
    Lemma8Report {
        summands: g
            .odd_summands()
            .into_iter()
            .map(|s| SummandReport {
                dim: s.space.dim(),
                injective: s.space.intersect(h1).is_zero(),
                name: s.name,
            })
            .collect(),
    }
}

fn check_algebra(g: &LieSuperAlgebra, ft: &FlagType) -> Result<(), ClassifierError> {
    if g.series() != ft.series() || g.m() != ft.m() || g.n() != ft.n() {
        return Err(ClassifierError::Mismatch(
            format!("{}({}|{})", g.series(), g.m(), g.n()),
            ft.to_string(),
        ));
    }
    Ok(())
}

/// The generic route with all intermediate data.
pub fn classify_detailed(g: &LieSuperAlgebra, ft: &FlagType) -> Result<Classification, ClassifierError> {
    check_algebra(g, ft)?;
    let stab = stabilizer_direct(g, &ft.base_point());
    let h1 = odd_part(g, &stab);
    let image = annihilator(&h1);
    let w = max_invariant_submodule(g, &image);
    let w_kills_h1 = w.basis().iter().all(|f| {
        h1.basis()
            .iter()
            .all(|v| crate::linalg::dot(f, v) == crate::Rational::from_integer(0.into()))
    });
    Ok(Classification {
        flag: ft.clone(),
        stabilizer_dims: stab.dims(),
        lemma8: lemma8_check(g, &h1),
        result: H0Result { generator_dim: w.dim() },
        h1,
        image,
        w,
        w_kills_h1,
    })
}

/// `classify_h0`.
pub fn classify_h0(g: &LieSuperAlgebra, ft: &FlagType) -> Result<H0Result, ClassifierError> {
    Ok(classify_detailed(g, ft)?.result)
}

/// `closed_form_h0`: the case analysis on the weight tuple.
pub fn closed_form_h0(ft: &FlagType) -> Result<(H0Result, ClosedFormCase), ClassifierError> {
    let w = ft.weight_tuple();
    let (m, n) = (ft.m(), ft.n());
    let res = |d| H0Result { generator_dim: d };
    match ft.series() {
        Series::Gl => {
            let (a, b) = (&w.a, &w.b);
            let (amin, amax) = (a.iter().min(), a.iter().max());
            let (bmin, bmax) = (b.iter().min(), b.iter().max());
            match (amin, amax, bmin, bmax) {
                (Some(amin), _, _, Some(bmax)) if amin > bmax => Ok((res(m * n), ClosedFormCase::GlEvenDominant)),
                (_, Some(amax), Some(bmin), _) if bmin > amax => Ok((res(m * n), ClosedFormCase::GlOddDominant)),
                _ => Ok((res(0), ClosedFormCase::GlGeneric)),
            }
        }
        Series::Osp => {
            if m < 1 || n < 2 {
                return Err(ClassifierError::OutsideHypotheses(ft.to_string(), "osp needs m ≥ 1 and n ≥ 2"));
            }
            if m != 2 {
                return Ok((res(0), ClosedFormCase::OspIrreducible));
            }
            let a1 = w.a[0];
            let b1 = w.b.first().copied().unwrap_or(0);
            if a1 > b1 {
                Ok((res(n), ClosedFormCase::OspTwoSplit))
            } else {
                Ok((res(0), ClosedFormCase::OspTwoGeneric))
            }
        }
        Series::Pisp => {
            if n == 1 {
                return if ft.k()[0] == 1 {
                    Ok((res(1), ClosedFormCase::PispOnePoint))
                } else {
                    Ok((res(0), ClosedFormCase::PispOneWhole))
                };
            }
            let a = &w.a;
            let all_pos = (0..n).all(|i| (i..n).all(|j| a[i] + a[j] > 0));
            let all_neg = (0..n).all(|i| (i + 1..n).all(|j| a[i] + a[j] < 0));
            if all_pos {
                Ok((res(n * (n + 1) / 2), ClosedFormCase::PispPositive))
            } else if all_neg {
                Ok((res(n * (n - 1) / 2), ClosedFormCase::PispNegative))
            } else {
                Ok((res(0), ClosedFormCase::PispGeneric))
            }
        }
        Series::Q => Ok((res(0), ClosedFormCase::Q)),
    }
}

/// One row of a classification table.
#[derive(Debug, Clone, PartialEq, Eq, Serialize)]
pub struct Record {
    pub series: Series,
    pub m: usize,
    pub n: usize,
    pub k: Vec<usize>,
    pub l: Vec<usize>,
    pub generator_dim: usize,
    pub vector_space_dim: String,
    pub closed_form_dim: Option<usize>,
    pub closed_form_case: Option<&'static str>,
    pub agree: bool,
    pub lemma8: Vec<SummandReport>,
}

pub fn record(g: &LieSuperAlgebra, ft: &FlagType) -> Result<Record, ClassifierError> {
    let c = classify_detailed(g, ft)?;
    let closed = closed_form_h0(ft).ok();
    Ok(Record {
        series: ft.series(),
        m: ft.m(),
        n: ft.n(),
        k: ft.k().to_vec(),
        l: ft.l().to_vec(),
        generator_dim: c.result.generator_dim,
        vector_space_dim: c.result.vector_space_dim().to_string(),
        closed_form_dim: closed.map(|(r, _)| r.generator_dim),
        closed_form_case: closed.map(|(_, case)| case.name()),
        agree: closed.is_none_or(|(r, _)| r == c.result),
        lemma8: c.lemma8.summands,
    })
}
