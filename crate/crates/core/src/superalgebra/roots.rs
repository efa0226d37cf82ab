//! Simultaneous eigenspace decomposition of ad(t).

use std::collections::BTreeSet;
use std::fmt::Write as _;

use num_traits::{ToPrimitive, Zero};
use serde::Serialize;

use crate::grassmann::Parity;
use crate::linalg::{QMatrix, Subspace, Vector};
use crate::Rational;

use super::{AlgebraError, LieSuperAlgebra};

/// A weight of the Cartan subalgebra: its values on the Cartan basis, i.e.
/// the integer coefficients of the linear form in the Cartan coordinates.
#[derive(Debug, Clone, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize)]
pub struct Root {
    pub parity: Parity,
    pub coeffs: Vec<i64>,
}

impl Root {
    /// α evaluated at a Cartan point given in Cartan coordinates.
    pub fn evaluate(&self, t: &[i64]) -> i64 {
        assert_eq!(t.len(), self.coeffs.len(), "Cartan point length");
        self.coeffs.iter().zip(t).map(|(a, b)| a * b).sum()
    }

    /// Linear form in the given coordinate names, e.g. `x1-y2` or `-2y1`.
    pub fn display(&self, names: &[String]) -> String {
        let mut out = String::new();
        for (c, name) in self.coeffs.iter().zip(names) {
            if *c == 0 {
                continue;
            }
            let sign = if *c < 0 { "-" } else if out.is_empty() { "" } else { "+" };
            let mag = c.unsigned_abs();
            if mag == 1 {
                let _ = write!(out, "{sign}{name}");
            } else {
                let _ = write!(out, "{sign}{mag}{name}");
            }
        }
        if out.is_empty() {
            out.push('0');
        }
        out
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSpace {
    pub root: Root,
    /// Subspace of g in basis coordinates.
    pub space: Subspace,
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct RootSystem {
    /// Even zero-weight space; equals the Cartan span.
    pub cartan: Subspace,
    /// Odd zero-weight space. Nonzero only for q, where it is the odd diagonal.
    pub odd_zero: Subspace,
    pub roots: Vec<RootSpace>,
}

impl RootSystem {
    pub fn of_parity(&self, p: Parity) -> impl Iterator<Item = &RootSpace> {
        self.roots.iter().filter(move |r| r.root.parity == p)
    }

    /// Sum of the dimensions of all pieces.
    pub fn total_dim(&self) -> usize {
        self.cartan.dim() + self.odd_zero.dim() + self.roots.iter().map(|r| r.space.dim()).sum::<usize>()
    }
}

pub(super) fn decompose(g: &LieSuperAlgebra) -> Result<RootSystem, AlgebraError> {
    let d = g.dim();
    let ads: Vec<QMatrix> = g.cartan().iter().map(|&c| g.ad(c)).collect();
    let diagonals: Vec<BTreeSet<Rational>> = g
        .cartan()
        .iter()
        .map(|&c| {
            let h = &g.basis()[c].matrix;
            let diag: Vec<&Rational> = (0..g.size()).map(|i| h.get(i, i)).collect();
            let mut set = BTreeSet::new();
            for a in &diag {
                for b in &diag {
                    set.insert(*a - *b);
                }
            }
            set
        })
        .collect();

    let mut cartan = Subspace::zero(d);
    let mut odd_zero = Subspace::zero(d);
    let mut roots = Vec::new();
    for (parity, range) in [(Parity::Even, g.even_indices()), (Parity::Odd, g.odd_indices())] {
        let idx: Vec<usize> = range.collect();
        let mut pieces: Vec<(Vec<Rational>, Subspace)> = vec![(Vec::new(), Subspace::coordinate(d, &idx))];
        if idx.is_empty() {
            pieces.clear();
        }
        for (ad, candidates) in ads.iter().zip(&diagonals) {
            let mut next = Vec::new();
            for (w, space) in pieces {
                let mut total = 0;
                for lambda in candidates {
                    let eig = eigen_part(ad, lambda, &space);
                    if eig.dim() > 0 {
                        total += eig.dim();
                        let mut w2 = w.clone();
                        w2.push(lambda.clone());
                        next.push((w2, eig));
                    }
                }
                if total != space.dim() {
                    return Err(AlgebraError::NotDiagonalizable);
                }
            }
            pieces = next;
        }
        for (w, space) in pieces {
            let coeffs = w
                .iter()
                .map(|x| {
                    if x.is_integer() {
                        x.to_integer().to_i64().ok_or(AlgebraError::NotDiagonalizable)
                    } else {
                        Err(AlgebraError::NotDiagonalizable)
                    }
                })
                .collect::<Result<Vec<i64>, _>>()?;
            if coeffs.iter().all(|c| *c == 0) {
                match parity {
                    Parity::Even => cartan = space,
                    Parity::Odd => odd_zero = space,
                }
            } else {
                roots.push(RootSpace {
                    root: Root { parity, coeffs },
                    space,
                });
            }
        }
    }
    roots.sort_by(|a, b| {
        a.root
            .parity
            .cmp(&b.root.parity)
            .then_with(|| b.root.coeffs.cmp(&a.root.coeffs))
    });
    Ok(RootSystem {
        cartan,
        odd_zero,
        roots,
    })
}

/// `space ∩ ker(ad − λ)`.
fn eigen_part(ad: &QMatrix, lambda: &Rational, space: &Subspace) -> Subspace {
    let basis = space.basis();
    let cols: Vec<Vector> = basis
        .iter()
        .map(|s| {
            let mut v = ad.mul_vec(s);
            if !lambda.is_zero() {
                for (x, y) in v.iter_mut().zip(s) {
                    if !y.is_zero() {
                        *x -= lambda * y;
                    }
                }
            }
            v
        })
        .collect();
    let m = QMatrix::from_columns(ad.rows(), &cols);
    let combos = m.nullspace();
    let vectors: Vec<Vector> = combos
        .iter()
        .map(|c| {
            let mut v = vec![Rational::zero(); ad.rows()];
            for (k, ck) in c.iter().enumerate() {
                if ck.is_zero() {
                    continue;
                }
                for (x, y) in v.iter_mut().zip(&basis[k]) {
                    if !y.is_zero() {
                        *x += ck * y;
                    }
                }
            }
            v
        })
        .collect();
    Subspace::span(ad.rows(), &vectors)
}
