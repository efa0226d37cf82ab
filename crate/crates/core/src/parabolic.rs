//! Flag types, weight tuples, and the two descriptions of a point
//! stabilizer: by roots and by direct solving.

use std::fmt;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grassmann::Parity;
use crate::linalg::{QMatrix, Subspace, Vector};
use crate::superalgebra::{AlgebraError, LieSuperAlgebra, RootSystem, Series};
use crate::Rational;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum FlagTypeError {
    #[error(transparent)]
    Algebra(#[from] AlgebraError),
    #[error("invalid flag type: {0}")]
    Invalid(String),
}

/// A flag type (k|l) = (k_1..k_r | l_1..l_r) for one of the series.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub struct FlagType {
    series: Series,
    m: usize,
    n: usize,
    k: Vec<usize>,
    l: Vec<usize>,
}

impl FlagType {
    pub fn new(series: Series, m: usize, n: usize, k: Vec<usize>, l: Vec<usize>) -> Result<Self, FlagTypeError> {
        series.validate(m, n)?;
        let bad = |msg: String| Err(FlagTypeError::Invalid(msg));
        if k.is_empty() {
            return bad("at least one stage is required".into());
        }
        if k.len() != l.len() {
            return bad(format!("k has {} entries but l has {}", k.len(), l.len()));
        }
        let r = k.len();
        if k[0] > m || l[0] > n {
            return bad(format!("k_1 ≤ {m} and l_1 ≤ {n} are required"));
        }
        for s in 1..r {
            if k[s] > k[s - 1] || l[s] > l[s - 1] {
                return bad("k and l must be nonincreasing".into());
            }
            if k[s] + l[s] >= k[s - 1] + l[s - 1] {
                return bad("k_s + l_s must be strictly decreasing".into());
            }
        }
        if k[r - 1] + l[r - 1] == 0 {
            return bad("k_r + l_r must be positive".into());
        }
        if k[0] + l[0] >= m + n {
            return bad(format!("k_1 + l_1 must be below {}", m + n));
        }
        match series {
            Series::Gl => {}
            Series::Osp => {
                if k[0] > m / 2 || l[0] > n / 2 {
                    return bad(format!("isotropic flags need k_1 ≤ {} and l_1 ≤ {}", m / 2, n / 2));
                }
            }
            Series::Pisp => {
                if k[0] + l[0] > n {
                    return bad(format!("isotropic flags need k_1 + l_1 ≤ {n}"));
                }
            }
            Series::Q => {
                if k != l {
                    return bad("q flags need l = k".into());
                }
            }
        }
        Ok(FlagType { series, m, n, k, l })
    }

    pub fn series(&self) -> Series {
        self.series
    }

    pub fn m(&self) -> usize {
        self.m
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn k(&self) -> &[usize] {
        &self.k
    }

    pub fn l(&self) -> &[usize] {
        &self.l
    }

    pub fn r(&self) -> usize {
        self.k.len()
    }

    /// k_s with k_0 = m and k_{r+1} = 0 (1-based s).
    pub fn k_at(&self, s: usize) -> usize {
        match s {
            0 => self.m,
            s if s > self.r() => 0,
            s => self.k[s - 1],
        }
    }

    pub fn l_at(&self, s: usize) -> usize {
        match s {
            0 => self.n,
            s if s > self.r() => 0,
            s => self.l[s - 1],
        }
    }

    /// All valid flag types of the series in (m|n) with at most `max_r`
    /// stages, in a fixed order.
    pub fn enumerate(series: Series, m: usize, n: usize, max_r: usize) -> Vec<FlagType> {
        if series.validate(m, n).is_err() {
            return Vec::new();
        }
        let mut out = Vec::new();
        for r in 1..=max_r {
            for k in nonincreasing(r, m) {
                for l in nonincreasing(r, n) {
                    if let Ok(ft) = FlagType::new(series, m, n, k.clone(), l) {
                        out.push(ft);
                    }
                }
            }
        }
        out
    }

    /// `base_point`: 0-based vector indices spanning each V_s.
    pub fn base_point(&self) -> Vec<Vec<usize>> {
        let (m, n) = (self.m, self.n);
        (0..self.r())
            .map(|s| {
                let (ks, ls) = (self.k[s], self.l[s]);
                let mut v: Vec<usize> = match self.series {
                    Series::Gl => (0..ks).chain(m..m + ls).collect(),
                    Series::Osp => {
                        let off = m % 2;
                        (off..off + ks).chain(m..m + ls).collect()
                    }
                    Series::Pisp => (0..ks).chain(n + (n - ls)..2 * n).collect(),
                    Series::Q => (0..ks).chain(n..n + ks).collect(),
                };
                v.sort_unstable();
                v
            })
            .collect()
    }

    /// `weight_tuple`: stage-s block gets s, the tail gets 0; for πsp the
    /// l-blocks at the end of a get −s.
    pub fn weight_tuple(&self) -> WeightTuple {
        let r = self.r();
        let stage_values = |len: usize, sizes: &dyn Fn(usize) -> usize| {
            let mut v = vec![0i64; len];
            for s in 1..=r {
                for slot in v.iter_mut().take(sizes(s)).skip(sizes(s + 1)) {
                    *slot = s as i64;
                }
            }
            v
        };
        let ks = |s: usize| if s > r { 0 } else { self.k[s - 1] };
        let ls = |s: usize| if s > r { 0 } else { self.l[s - 1] };
        match self.series {
            Series::Gl => WeightTuple {
                a: stage_values(self.m, &ks),
                b: stage_values(self.n, &ls),
            },
            Series::Osp => WeightTuple {
                a: stage_values(self.m / 2, &ks),
                b: stage_values(self.n / 2, &ls),
            },
            Series::Pisp => {
                let n = self.n;
                let mut a = stage_values(n, &ks);
                for s in 1..=r {
                    for slot in a.iter_mut().take(n - ls(s + 1)).skip(n - ls(s)) {
                        *slot = -(s as i64);
                    }
                }
                WeightTuple { a, b: Vec::new() }
            }
            Series::Q => WeightTuple {
                a: stage_values(self.n, &ks),
                b: Vec::new(),
            },
        }
    }

    /// Whether the parabolic-equals-stabilizer identification is asserted
    /// for this flag type (osp needs m ≥ 1, n ≥ 2; πsp needs n ≥ 2).
    pub fn in_parabolic_window(&self) -> bool {
        match self.series {
            Series::Gl | Series::Q => true,
            Series::Osp => self.m >= 1 && self.n >= 2,
            Series::Pisp => self.n >= 2,
        }
    }

    /// Append a stage, returning the refined flag type if it is valid.
    pub fn refine(&self, k: usize, l: usize) -> Option<FlagType> {
        let mut kk = self.k.clone();
        let mut ll = self.l.clone();
        kk.push(k);
        ll.push(l);
        FlagType::new(self.series, self.m, self.n, kk, ll).ok()
    }
}

impl fmt::Display for FlagType {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let join = |v: &[usize]| v.iter().map(|x| x.to_string()).collect::<Vec<_>>().join(",");
        write!(
            f,
            "{}({}|{}) ({}|{})",
            self.series,
            self.m,
            self.n,
            join(&self.k),
            join(&self.l)
        )
    }
}

fn nonincreasing(len: usize, max: usize) -> Vec<Vec<usize>> {
    fn go(len: usize, bound: usize, prefix: &mut Vec<usize>, out: &mut Vec<Vec<usize>>) {
        if prefix.len() == len {
            out.push(prefix.clone());
            return;
        }
        for v in (0..=bound).rev() {
            prefix.push(v);
            go(len, v, prefix, out);
            prefix.pop();
        }
    }
    let mut out = Vec::new();
    go(len, max, &mut Vec::new(), &mut out);
    out
}

/// Integer weights (a | b). For πsp and q only `a` is used.
#[derive(Debug, Clone, PartialEq, Eq, Hash, Serialize, Deserialize)]
pub struct WeightTuple {
    pub a: Vec<i64>,
    pub b: Vec<i64>,
}

impl WeightTuple {
    /// The Cartan point in Cartan coordinates: a followed by b.
    pub fn cartan_point(&self) -> Vec<i64> {
        self.a.iter().chain(&self.b).copied().collect()
    }

    /// Check the ordering chain demanded for this flag type.
    pub fn satisfies_chain(&self, ft: &FlagType) -> bool {
        let r = ft.r();
        // Depth of an index: how many of the V_s contain it.
        let depth_k = |i: usize| (1..=r).filter(|&s| i <= ft.k_at(s)).count() as i64;
        let depth_l = |j: usize| (1..=r).filter(|&s| j <= ft.l_at(s)).count() as i64;
        match ft.series() {
            Series::Gl | Series::Osp => {
                let (alen, blen) = match ft.series() {
                    Series::Gl => (ft.m(), ft.n()),
                    _ => (ft.m() / 2, ft.n() / 2),
                };
                if self.a.len() != alen || self.b.len() != blen {
                    return false;
                }
                let entries: Vec<(i64, i64)> = (1..=alen)
                    .map(|i| (depth_k(i), self.a[i - 1]))
                    .chain((1..=blen).map(|j| (depth_l(j), self.b[j - 1])))
                    .collect();
                let ordered = same_order(&entries);
                if ft.series() == Series::Osp {
                    ordered && entries.iter().all(|(d, v)| *d != 0 || *v == 0)
                } else {
                    ordered
                }
            }
            Series::Pisp => {
                let n = ft.n();
                if self.a.len() != n || !self.b.is_empty() {
                    return false;
                }
                let mut entries = Vec::new();
                for i in 1..=n {
                    let v = self.a[i - 1];
                    let dk = depth_k(i);
                    let dl = depth_l(n + 1 - i);
                    let sign_ok = if i <= ft.k_at(1) {
                        v > 0
                    } else if i > n - ft.l_at(1) {
                        v < 0
                    } else {
                        v == 0
                    };
                    if !sign_ok {
                        return false;
                    }
                    entries.push((dk.max(dl), v.abs()));
                }
                same_order(&entries)
            }
            Series::Q => {
                if self.a.len() != ft.n() || !self.b.is_empty() {
                    return false;
                }
                let entries: Vec<(i64, i64)> = (1..=ft.n()).map(|i| (depth_k(i), self.a[i - 1])).collect();
                same_order(&entries)
            }
        }
    }
}

/// Values are ordered exactly as their depths: strictly, with ties only
/// at equal depth.
fn same_order(entries: &[(i64, i64)]) -> bool {
    entries.iter().all(|(d1, v1)| {
        entries
            .iter()
            .all(|(d2, v2)| d1.cmp(d2) == v1.cmp(v2))
    })
}

/// A graded subspace of g, in basis coordinates (ambient dimension dim g).
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct Subalgebra {
    pub even: Subspace,
    pub odd: Subspace,
}

impl Subalgebra {
    pub fn whole(g: &LieSuperAlgebra) -> Self {
        Subalgebra {
            even: Subspace::coordinate(g.dim(), &g.even_indices().collect::<Vec<_>>()),
            odd: Subspace::coordinate(g.dim(), &g.odd_indices().collect::<Vec<_>>()),
        }
    }

    pub fn dims(&self) -> (usize, usize) {
        (self.even.dim(), self.odd.dim())
    }

    pub fn contains_cartan(&self, g: &LieSuperAlgebra) -> bool {
        g.cartan().iter().all(|&c| self.even.contains(&crate::superalgebra::unit(g.dim(), c)))
    }

    pub fn is_closed(&self, g: &LieSuperAlgebra) -> bool {
        let all = self.even.sum(&self.odd);
        let basis: Vec<&Vector> = self.even.basis().iter().chain(self.odd.basis()).collect();
        for x in &basis {
            for y in &basis {
                if !all.contains(&g.bracket(x, y)) {
                    return false;
                }
            }
        }
        true
    }

    pub fn is_subalgebra_of(&self, other: &Subalgebra) -> bool {
        self.even.is_subspace_of(&other.even) && self.odd.is_subspace_of(&other.odd)
    }

    /// Odd part as a subspace of g_1̄ in odd-basis coordinates.
    pub fn odd_part(&self, g: &LieSuperAlgebra) -> Subspace {
        let off = g.even_dim();
        let vs: Vec<Vector> = self.odd.basis().iter().map(|v| v[off..].to_vec()).collect();
        Subspace::span(g.odd_dim(), &vs)
    }
}

/// `parabolic_from_weights`: t ⊕ (odd zero-weight space) ⊕ all root spaces
/// with α(w) ≥ 0.
pub fn parabolic_from_weights(g: &LieSuperAlgebra, roots: &RootSystem, w: &WeightTuple) -> Subalgebra {
    let t = w.cartan_point();
    let mut even = roots.cartan.clone();
    let mut odd = roots.odd_zero.clone();
    for rs in &roots.roots {
        if rs.root.evaluate(&t) >= 0 {
            match rs.root.parity {
                Parity::Even => even = even.sum(&rs.space),
                Parity::Odd => odd = odd.sum(&rs.space),
            }
        }
    }
    debug_assert_eq!(even.ambient(), g.dim());
    Subalgebra { even, odd }
}

/// `stabilizer_direct`: all X in g with X(V_s) ⊆ V_s for every stage.
pub fn stabilizer_direct(g: &LieSuperAlgebra, flag: &[Vec<usize>]) -> Subalgebra {
    let size = g.size();
    let solve = |range: std::ops::Range<usize>| -> Subspace {
        let idx: Vec<usize> = range.collect();
        let mut rows: Vec<Vector> = Vec::new();
        for v in flag {
            let inside: Vec<bool> = (0..size).map(|i| v.contains(&i)).collect();
            for &j in v {
                for r in (0..size).filter(|&r| !inside[r]) {
                    let row: Vector = idx.iter().map(|&b| g.basis()[b].matrix.get(r, j).clone()).collect();
                    if row.iter().any(|x| !x.is_zero()) {
                        rows.push(row);
                    }
                }
            }
        }
        let local: Vec<Vector> = if rows.is_empty() {
            (0..idx.len()).map(|i| crate::superalgebra::unit(idx.len(), i)).collect()
        } else {
            QMatrix::from_rows(&rows).nullspace()
        };
        let vs: Vec<Vector> = local
            .iter()
            .map(|c| {
                let mut v = vec![Rational::zero(); g.dim()];
                for (k, &b) in idx.iter().enumerate() {
                    v[b] = c[k].clone();
                }
                v
            })
            .collect();
        Subspace::span(g.dim(), &vs)
    };
    Subalgebra {
        even: solve(g.even_indices()),
        odd: solve(g.odd_indices()),
    }
}
