//! The classical matrix Lie superalgebras gl(m|n), osp(m|n), πsp(n|n) and
//! q(n|n), realized over ℚ with explicit bases.
//!
//! q(n|n) is taken to be the matrices `(A B; B A)`. This block shape is
//! inferred from its Cartan `diag(x_1..x_n, x_1..x_n)` and its root list
//! rather than read from an explicit display.

mod build;
mod roots;

use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_traits::Zero;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::grassmann::Parity;
use crate::linalg::{QMatrix, Subspace, Vector};
use crate::Rational;

pub use roots::{Root, RootSpace, RootSystem};

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum AlgebraError {
    #[error("invalid dimensions for {series}: m = {m}, n = {n} ({reason})")]
    InvalidDimensions {
        series: Series,
        m: usize,
        n: usize,
        reason: &'static str,
    },
    #[error("matrix is outside the span of the basis")]
    OutsideSpan,
    #[error("adjoint action of the Cartan subalgebra is not diagonalizable")]
    NotDiagonalizable,
}

#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
#[serde(rename_all = "lowercase")]
pub enum Series {
    Gl,
    Osp,
    Pisp,
    Q,
}

impl Series {
    pub const ALL: [Series; 4] = [Series::Gl, Series::Osp, Series::Pisp, Series::Q];

    pub fn name(self) -> &'static str {
        match self {
            Series::Gl => "gl",
            Series::Osp => "osp",
            Series::Pisp => "pisp",
            Series::Q => "q",
        }
    }

    pub fn validate(self, m: usize, n: usize) -> Result<(), AlgebraError> {
        let bad = |reason| Err(AlgebraError::InvalidDimensions { series: self, m, n, reason });
        match self {
            Series::Gl if m + n == 0 => bad("empty superspace"),
            Series::Osp if n % 2 == 1 => bad("n must be even"),
            Series::Osp if m + n == 0 => bad("empty superspace"),
            Series::Pisp | Series::Q if m != n => bad("m must equal n"),
            Series::Pisp | Series::Q if n == 0 => bad("n must be positive"),
            _ => Ok(()),
        }
    }

    /// Predicted (even, odd) dimensions.
    pub fn dimensions(self, m: usize, n: usize) -> (usize, usize) {
        match self {
            Series::Gl => (m * m + n * n, 2 * m * n),
            Series::Osp => (m * m.saturating_sub(1) / 2 + n * (n + 1) / 2, m * n),
            Series::Pisp | Series::Q => (n * n, n * n),
        }
    }
}

impl fmt::Display for Series {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.name())
    }
}

impl FromStr for Series {
    type Err = String;

    fn from_str(s: &str) -> Result<Self, Self::Err> {
        match s.to_ascii_lowercase().as_str() {
            "gl" => Ok(Series::Gl),
            "osp" => Ok(Series::Osp),
            "pisp" | "πsp" => Ok(Series::Pisp),
            "q" => Ok(Series::Q),
            other => Err(format!("unknown series `{other}` (expected gl, osp, pisp or q)")),
        }
    }
}

/// How brackets are evaluated.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash)]
pub enum BracketMode {
    /// Matrix supercommutator.
    Supercommutator,
    /// The retract gr(g): odd×odd brackets are zero, everything else as in g.
    Retract,
}

pub type SparseVec = Vec<(usize, Rational)>;
type Entries = BTreeMap<(usize, usize), Rational>;

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct BasisElement {
    pub parity: Parity,
    pub block: &'static str,
    pub label: String,
    pub matrix: QMatrix,
}

#[derive(Debug, Clone)]
pub struct LieSuperAlgebra {
    series: Series,
    m: usize,
    n: usize,
    basis: Vec<BasisElement>,
    sparse: Vec<Entries>,
    pivots: HashMap<(usize, usize), usize>,
    even_dim: usize,
    cartan: Vec<usize>,
    cartan_names: Vec<String>,
    mode: BracketMode,
    table: Vec<Vec<SparseVec>>,
}

impl LieSuperAlgebra {
    /// `build_superalgebra`.
    pub fn build(series: Series, m: usize, n: usize) -> Result<Self, AlgebraError> {
        series.validate(m, n)?;
        let raw = build::raw(series, m, n);
        let size = raw.size;
        let mut basis = Vec::with_capacity(raw.elements.len());
        let mut sparse = Vec::with_capacity(raw.elements.len());
        let mut pivots = HashMap::new();
        for (idx, e) in raw.elements.iter().enumerate() {
            let mut mat = QMatrix::zeros(size, size);
            let mut entries = Entries::new();
            for (r, c, v) in &e.entries {
                mat.set(*r, *c, v.clone());
                entries.insert((*r, *c), v.clone());
            }
            let (pr, pc, _) = &e.entries[0];
            let clash = pivots.insert((*pr, *pc), idx);
            debug_assert!(clash.is_none(), "pivot positions are unique");
            basis.push(BasisElement {
                parity: e.parity,
                block: e.block,
                label: e.label.clone(),
                matrix: mat,
            });
            sparse.push(entries);
        }
        let even_dim = basis.iter().filter(|b| b.parity == Parity::Even).count();
        let mut g = LieSuperAlgebra {
            series,
            m,
            n,
            basis,
            sparse,
            pivots,
            even_dim,
            cartan: raw.cartan,
            cartan_names: raw.cartan_names,
            mode: BracketMode::Supercommutator,
            table: Vec::new(),
        };
        g.table = g.structure_constants()?;
        Ok(g)
    }

    fn structure_constants(&self) -> Result<Vec<Vec<SparseVec>>, AlgebraError> {
        let d = self.dim();
        let mut table = Vec::with_capacity(d);
        for i in 0..d {
            let mut row = Vec::with_capacity(d);
            for j in 0..d {
                let br = self.supercommutator_entries(i, j);
                row.push(self.coordinates_of_entries(&br)?);
            }
            table.push(row);
        }
        Ok(table)
    }

    fn supercommutator_entries(&self, i: usize, j: usize) -> Entries {
        let sign = self.basis[i].parity.koszul_sign(self.basis[j].parity);
        let mut out = Entries::new();
        let (a, b) = (&self.sparse[i], &self.sparse[j]);
        for (&(r, k), x) in a {
            for (&(k2, c), y) in b {
                if k == k2 {
                    *out.entry((r, c)).or_insert_with(Rational::zero) += x * y;
                }
            }
        }
        for (&(r, k), y) in b {
            for (&(k2, c), x) in a {
                if k == k2 {
                    let prod = y * x;
                    let slot = out.entry((r, c)).or_insert_with(Rational::zero);
                    if sign < 0 {
                        *slot += prod;
                    } else {
                        *slot -= prod;
                    }
                }
            }
        }
        out.retain(|_, v| !v.is_zero());
        out
    }

    fn coordinates_of_entries(&self, entries: &Entries) -> Result<SparseVec, AlgebraError> {
        let mut coords: BTreeMap<usize, Rational> = BTreeMap::new();
        for (pos, v) in entries {
            if let Some(&b) = self.pivots.get(pos) {
                let pivot_value = &self.sparse[b][pos];
                coords.insert(b, v / pivot_value);
            }
        }
        let mut residual = entries.clone();
        for (b, c) in &coords {
            for (pos, v) in &self.sparse[*b] {
                *residual.entry(*pos).or_insert_with(Rational::zero) -= c * v;
            }
        }
        if residual.values().any(|v| !v.is_zero()) {
            return Err(AlgebraError::OutsideSpan);
        }
        Ok(coords.into_iter().collect())
    }

    /// The retract gr(g): same space, odd×odd brackets replaced by zero.
    pub fn gr(&self) -> LieSuperAlgebra {
        let mut out = self.clone();
        out.mode = BracketMode::Retract;
        for (i, row) in out.table.iter_mut().enumerate() {
            for (j, entry) in row.iter_mut().enumerate() {
                if self.basis[i].parity.is_odd() && self.basis[j].parity.is_odd() {
                    entry.clear();
                }
            }
        }
        out
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

    /// Size of the matrices, m + n.
    pub fn size(&self) -> usize {
        self.m + self.n
    }

    pub fn mode(&self) -> BracketMode {
        self.mode
    }

    pub fn dim(&self) -> usize {
        self.basis.len()
    }

    pub fn even_dim(&self) -> usize {
        self.even_dim
    }

    pub fn odd_dim(&self) -> usize {
        self.basis.len() - self.even_dim
    }

    pub fn basis(&self) -> &[BasisElement] {
        &self.basis
    }

    pub fn parity(&self, i: usize) -> Parity {
        self.basis[i].parity
    }

    pub fn even_indices(&self) -> std::ops::Range<usize> {
        0..self.even_dim
    }

    pub fn odd_indices(&self) -> std::ops::Range<usize> {
        self.even_dim..self.dim()
    }

    /// Basis indices of the distinguished Cartan subalgebra.
    pub fn cartan(&self) -> &[usize] {
        &self.cartan
    }

    /// Names of the Cartan coordinates (x_i, y_j), one per Cartan element.
    pub fn cartan_names(&self) -> &[String] {
        &self.cartan_names
    }

    /// Matrix of the invariant form (Γ for osp, Υ for πsp).
    pub fn form(&self) -> Option<QMatrix> {
        build::form(self.series, self.m, self.n).map(|entries| {
            let mut g = QMatrix::zeros(self.size(), self.size());
            for (r, c, v) in entries {
                g.set(r, c, v);
            }
            g
        })
    }

    /// Coordinates of a matrix in the basis.
    pub fn coordinates(&self, x: &QMatrix) -> Result<Vector, AlgebraError> {
        let entries: Entries = x.nonzeros().map(|(r, c, v)| ((r, c), v.clone())).collect();
        let sparse = self.coordinates_of_entries(&entries)?;
        Ok(densify(self.dim(), &sparse))
    }

    /// Σ c_b B_b.
    pub fn element(&self, coords: &[Rational]) -> QMatrix {
        let mut out = QMatrix::zeros(self.size(), self.size());
        for (b, c) in coords.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            for (&(r, k), v) in &self.sparse[b] {
                let cur = out.get(r, k).clone();
                out.set(r, k, cur + c * v);
            }
        }
        out
    }

    /// Bracket of two basis elements, from the stored table.
    pub fn bracket_basis(&self, i: usize, j: usize) -> &SparseVec {
        &self.table[i][j]
    }

    /// Bracket of two elements given by coordinates (bilinear extension of
    /// the table; meaningful for homogeneous arguments).
    pub fn bracket(&self, x: &[Rational], y: &[Rational]) -> Vector {
        let mut out = vec![Rational::zero(); self.dim()];
        for (i, a) in x.iter().enumerate() {
            if a.is_zero() {
                continue;
            }
            for (j, b) in y.iter().enumerate() {
                if b.is_zero() {
                    continue;
                }
                let ab = a * b;
                for (k, c) in &self.table[i][j] {
                    out[*k] += &ab * c;
                }
            }
        }
        out
    }

    /// Supercommutator of two homogeneous matrices, computed directly.
    pub fn matrix_supercommutator(x: &QMatrix, px: Parity, y: &QMatrix, py: Parity) -> QMatrix {
        let xy = x.mul(y);
        let yx = y.mul(x);
        if px.koszul_sign(py) < 0 {
            xy.add(&yx)
        } else {
            xy.sub(&yx)
        }
    }

    /// Super-Jacobi residual on a basis triple:
    /// [x,[y,z]] − [[x,y],z] − (−1)^{|x||y|} [y,[x,z]].
    pub fn jacobi_residual(&self, x: usize, y: usize, z: usize) -> Vector {
        let d = self.dim();
        let ex = unit(d, x);
        let ey = unit(d, y);
        let ez = unit(d, z);
        let yz = densify(d, &self.table[y][z]);
        let xy = densify(d, &self.table[x][y]);
        let xz = densify(d, &self.table[x][z]);
        let a = self.bracket(&ex, &yz);
        let b = self.bracket(&xy, &ez);
        let c = self.bracket(&ey, &xz);
        let sign = self.parity(x).koszul_sign(self.parity(y));
        a.iter()
            .zip(&b)
            .zip(&c)
            .map(|((a, b), c)| if sign < 0 { a - b + c } else { a - b - c })
            .collect()
    }

    /// Matrix of ad(X) on g_1̄ for an even basis element X, in odd-basis
    /// coordinates: column j holds [X, v_j].
    pub fn ad_on_odd(&self, x: usize) -> QMatrix {
        let off = self.even_dim;
        let d1 = self.odd_dim();
        let mut out = QMatrix::zeros(d1, d1);
        for j in 0..d1 {
            for (k, c) in &self.table[x][off + j] {
                if *k >= off {
                    out.set(k - off, j, c.clone());
                }
            }
        }
        out
    }

    /// Matrix of ad(X) on all of g.
    pub fn ad(&self, x: usize) -> QMatrix {
        let d = self.dim();
        let mut out = QMatrix::zeros(d, d);
        for j in 0..d {
            for (k, c) in &self.table[x][j] {
                out.set(*k, j, c.clone());
            }
        }
        out
    }

    /// The g_0̄-invariant summands of g_1̄ used by the injectivity check,
    /// each as a subspace of g_1̄ in odd-basis coordinates.
    pub fn odd_summands(&self) -> Vec<OddSummand> {
        let groups: Vec<(&str, Vec<&str>)> = match self.series {
            Series::Gl => vec![("V1", vec!["B"]), ("V2", vec!["C"])],
            Series::Osp if self.m == 2 => vec![("V1", vec!["W", "W1"]), ("V2", vec!["U", "U1"])],
            Series::Osp => vec![("g1", vec!["U", "U1", "W", "W1", "w", "w1"])],
            Series::Pisp => vec![("V1", vec!["Z"]), ("V2", vec!["Y"])],
            Series::Q => vec![("g1", vec!["B"])],
        };
        let off = self.even_dim;
        groups
            .into_iter()
            .filter_map(|(name, blocks)| {
                let idx: Vec<usize> = self
                    .odd_indices()
                    .filter(|&i| blocks.contains(&self.basis[i].block))
                    .map(|i| i - off)
                    .collect();
                (!idx.is_empty()).then(|| OddSummand {
                    name: name.to_string(),
                    space: Subspace::coordinate(self.odd_dim(), &idx),
                })
            })
            .collect()
    }

    pub fn root_decomposition(&self) -> Result<RootSystem, AlgebraError> {
        roots::decompose(self)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct OddSummand {
    pub name: String,
    pub space: Subspace,
}

pub fn densify(d: usize, v: &SparseVec) -> Vector {
    let mut out = vec![Rational::zero(); d];
    for (k, c) in v {
        out[*k] = c.clone();
    }
    out
}

pub(crate) fn unit(d: usize, i: usize) -> Vector {
    let mut out = vec![Rational::zero(); d];
    out[i] = Rational::from_integer(1.into());
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::linalg::is_zero_vector;
    use crate::rational::int;

    fn alg(s: Series, m: usize, n: usize) -> LieSuperAlgebra {
        LieSuperAlgebra::build(s, m, n).unwrap()
    }

    #[test]
    fn dimension_examples() {
        let g = alg(Series::Gl, 2, 2);
        assert_eq!((g.even_dim(), g.odd_dim()), (8, 8));
        let o = alg(Series::Osp, 2, 2);
        assert_eq!((o.even_dim(), o.odd_dim()), (4, 4));
        let p = alg(Series::Pisp, 2, 2);
        assert_eq!((p.even_dim(), p.odd_dim()), (4, 4));
    }

    #[test]
    fn invalid_dimensions() {
        assert!(LieSuperAlgebra::build(Series::Osp, 2, 3).is_err());
        assert!(LieSuperAlgebra::build(Series::Pisp, 2, 3).is_err());
        assert!(LieSuperAlgebra::build(Series::Q, 1, 2).is_err());
    }

    #[test]
    fn odd_anticommutator_in_gl11() {
        let g = alg(Series::Gl, 1, 1);
        let e12 = g.basis().iter().position(|b| b.label == "E1,2").unwrap();
        let e21 = g.basis().iter().position(|b| b.label == "E2,1").unwrap();
        let br = densify(g.dim(), g.bracket_basis(e12, e21));
        let mut id = QMatrix::zeros(2, 2);
        id.set(0, 0, int(1));
        id.set(1, 1, int(1));
        assert_eq!(g.element(&br), id);
        let gr = g.gr();
        assert!(gr.bracket_basis(e12, e21).is_empty());
    }

    #[test]
    fn cartan_commutes() {
        for s in Series::ALL {
            let g = alg(s, 2, 2);
            for &a in g.cartan() {
                for &b in g.cartan() {
                    assert!(g.bracket_basis(a, b).is_empty());
                }
            }
        }
    }

    #[test]
    fn bracket_table_matches_matrices() {
        let g = alg(Series::Osp, 3, 2);
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                let direct = LieSuperAlgebra::matrix_supercommutator(
                    &g.basis()[i].matrix,
                    g.parity(i),
                    &g.basis()[j].matrix,
                    g.parity(j),
                );
                let via_table = g.element(&densify(g.dim(), g.bracket_basis(i, j)));
                assert_eq!(direct, via_table);
            }
        }
    }

    #[test]
    fn coordinates_reject_outside_span() {
        let g = alg(Series::Q, 2, 2);
        let mut x = QMatrix::zeros(4, 4);
        x.set(0, 0, int(1));
        assert_eq!(g.coordinates(&x), Err(AlgebraError::OutsideSpan));
    }

    #[test]
    fn gr_keeps_even_brackets_and_is_idempotent() {
        let g = alg(Series::Gl, 2, 1);
        let gr = g.gr();
        for i in g.even_indices() {
            for j in 0..g.dim() {
                assert_eq!(g.bracket_basis(i, j), gr.bracket_basis(i, j));
            }
        }
        let grgr = gr.gr();
        for i in 0..g.dim() {
            for j in 0..g.dim() {
                assert_eq!(gr.bracket_basis(i, j), grgr.bracket_basis(i, j));
            }
        }
    }

    #[test]
    fn jacobi_small() {
        for (s, m, n) in [(Series::Gl, 1, 2), (Series::Osp, 1, 2), (Series::Pisp, 2, 2), (Series::Q, 2, 2)] {
            let g = alg(s, m, n);
            for x in 0..g.dim() {
                for y in 0..g.dim() {
                    for z in 0..g.dim() {
                        assert!(is_zero_vector(&g.jacobi_residual(x, y, z)));
                    }
                }
            }
        }
    }

    #[test]
    fn summand_dimensions() {
        let dims = |g: &LieSuperAlgebra| g.odd_summands().iter().map(|s| s.space.dim()).collect::<Vec<_>>();
        assert_eq!(dims(&alg(Series::Gl, 2, 2)), vec![4, 4]);
        assert_eq!(dims(&alg(Series::Osp, 3, 2)), vec![6]);
        assert_eq!(dims(&alg(Series::Pisp, 2, 2)), vec![3, 1]);
        assert_eq!(dims(&alg(Series::Pisp, 1, 1)), vec![1]);
        assert_eq!(dims(&alg(Series::Q, 3, 3)), vec![9]);
    }

    #[test]
    fn osp_even_part_preserves_the_form() {
        for (m, n) in [(2, 2), (3, 2), (4, 4), (5, 2)] {
            let g = alg(Series::Osp, m, n);
            let gamma = g.form().unwrap();
            for i in g.even_indices() {
                let x = &g.basis()[i].matrix;
                assert!(x.transpose().mul(&gamma).add(&gamma.mul(x)).is_zero());
            }
        }
    }
}
