//! Explicit bases for the four series.
//!
//! Every basis element is a rational matrix with at most two nonzero
//! entries, and no two elements share a position. The first entry of each
//! element is its pivot; coordinates are read off pivots.

use crate::grassmann::Parity;
use crate::rational::int;
use crate::Rational;

use super::Series;

/// A basis element before structure constants are computed.
#[derive(Debug, Clone)]
pub(crate) struct RawElement {
    pub parity: Parity,
    /// Name of the parameter block in the displayed matrix shape.
    pub block: &'static str,
    pub label: String,
    /// Nonzero entries; the first is the pivot.
    pub entries: Vec<(usize, usize, Rational)>,
}

pub(crate) struct RawAlgebra {
    pub size: usize,
    pub elements: Vec<RawElement>,
    /// Indices into `elements` of the Cartan basis.
    pub cartan: Vec<usize>,
    pub cartan_names: Vec<String>,
}

fn elem(parity: Parity, block: &'static str, label: String, entries: &[(usize, usize, i64)]) -> RawElement {
    let mut merged: Vec<(usize, usize, Rational)> = Vec::new();
    for &(r, c, v) in entries {
        match merged.iter_mut().find(|(rr, cc, _)| *rr == r && *cc == c) {
            Some(e) => e.2 += int(v),
            None => merged.push((r, c, int(v))),
        }
    }
    RawElement {
        parity,
        block,
        label,
        entries: merged,
    }
}

fn finish(size: usize, mut elements: Vec<RawElement>, cartan_labels: &[String], cartan_names: Vec<String>) -> RawAlgebra {
    // Stable: evens first, each parity in construction order.
    elements.sort_by_key(|e| e.parity);
    let cartan = cartan_labels
        .iter()
        .map(|l| {
            elements
                .iter()
                .position(|e| &e.label == l)
                .expect("cartan label present")
        })
        .collect();
    RawAlgebra {
        size,
        elements,
        cartan,
        cartan_names,
    }
}

pub(crate) fn raw(series: Series, m: usize, n: usize) -> RawAlgebra {
    match series {
        Series::Gl => gl(m, n),
        Series::Osp => osp(m, n),
        Series::Pisp => pisp(n),
        Series::Q => q(n),
    }
}

/// E_ij over the whole (m+n)×(m+n) matrix, row-major.
fn gl(m: usize, n: usize) -> RawAlgebra {
    let size = m + n;
    let mut elements = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let (row_even, col_even) = (i < m, j < m);
            let block = match (row_even, col_even) {
                (true, true) => "A",
                (true, false) => "B",
                (false, true) => "C",
                (false, false) => "D",
            };
            let parity = if row_even == col_even { Parity::Even } else { Parity::Odd };
            elements.push(elem(parity, block, format!("E{},{}", i + 1, j + 1), &[(i, j, 1)]));
        }
    }
    let cartan_labels: Vec<String> = (0..size).map(|i| format!("E{},{}", i + 1, i + 1)).collect();
    let names = (1..=m)
        .map(|i| format!("x{i}"))
        .chain((1..=n).map(|j| format!("y{j}")))
        .collect();
    finish(size, elements, &cartan_labels, names)
}

/// Vector order: [e_0], e_1..e_p, e_{p+1}..e_{2p}, f_1..f_q, f_{q+1}..f_{2q}.
fn osp(m: usize, n: usize) -> RawAlgebra {
    let p = m / 2;
    let qq = n / 2;
    let odd_m = m % 2 == 1;
    let off = usize::from(odd_m);
    let e0 = 0;
    let e = |i: usize| off + i - 1; // e_i, 1 ≤ i ≤ 2p
    let f = |j: usize| m + j - 1; // f_j, 1 ≤ j ≤ 2q
    let size = m + n;
    let ev = Parity::Even;
    let od = Parity::Odd;
    let mut el = Vec::new();

    for i in 1..=p {
        for j in 1..=p {
            el.push(elem(ev, "A", format!("A{i},{j}"), &[(e(i), e(j), 1), (e(p + j), e(p + i), -1)]));
        }
    }
    for i in 1..=p {
        for j in i + 1..=p {
            el.push(elem(ev, "B", format!("B{i},{j}"), &[(e(i), e(p + j), 1), (e(j), e(p + i), -1)]));
        }
    }
    for i in 1..=p {
        for j in i + 1..=p {
            el.push(elem(ev, "C", format!("C{i},{j}"), &[(e(p + i), e(j), 1), (e(p + j), e(i), -1)]));
        }
    }
    if odd_m {
        for i in 1..=p {
            el.push(elem(ev, "u", format!("u{i}"), &[(e(i), e0, 1), (e0, e(p + i), -1)]));
        }
        for i in 1..=p {
            el.push(elem(ev, "v", format!("v{i}"), &[(e(p + i), e0, 1), (e0, e(i), -1)]));
        }
    }
    for i in 1..=qq {
        for j in 1..=qq {
            el.push(elem(ev, "Y", format!("Y{i},{j}"), &[(f(i), f(j), 1), (f(qq + j), f(qq + i), -1)]));
        }
    }
    for i in 1..=qq {
        for j in i..=qq {
            el.push(elem(ev, "Z", format!("Z{i},{j}"), &[(f(i), f(qq + j), 1), (f(j), f(qq + i), 1)]));
        }
    }
    for i in 1..=qq {
        for j in i..=qq {
            el.push(elem(ev, "T", format!("T{i},{j}"), &[(f(qq + i), f(j), 1), (f(qq + j), f(i), 1)]));
        }
    }
    for i in 1..=p {
        for j in 1..=qq {
            el.push(elem(od, "U", format!("U{i},{j}"), &[(e(i), f(j), 1), (f(qq + j), e(p + i), -1)]));
        }
    }
    for i in 1..=p {
        for j in 1..=qq {
            el.push(elem(od, "U1", format!("U1_{i},{j}"), &[(e(i), f(qq + j), 1), (f(j), e(p + i), 1)]));
        }
    }
    for i in 1..=p {
        for j in 1..=qq {
            el.push(elem(od, "W", format!("W{i},{j}"), &[(e(p + i), f(j), 1), (f(qq + j), e(i), -1)]));
        }
    }
    for i in 1..=p {
        for j in 1..=qq {
            el.push(elem(od, "W1", format!("W1_{i},{j}"), &[(e(p + i), f(qq + j), 1), (f(j), e(i), 1)]));
        }
    }
    if odd_m {
        for j in 1..=qq {
            el.push(elem(od, "w", format!("w{j}"), &[(e0, f(j), 1), (f(qq + j), e0, -1)]));
        }
        for j in 1..=qq {
            el.push(elem(od, "w1", format!("w1_{j}"), &[(e0, f(qq + j), 1), (f(j), e0, 1)]));
        }
    }

    let cartan_labels: Vec<String> = (1..=p)
        .map(|i| format!("A{i},{i}"))
        .chain((1..=qq).map(|j| format!("Y{j},{j}")))
        .collect();
    let names = (1..=p)
        .map(|i| format!("x{i}"))
        .chain((1..=qq).map(|j| format!("y{j}")))
        .collect();
    finish(size, el, &cartan_labels, names)
}

/// (X Y; Z −Xᵗ) with Y skew and Z symmetric; vectors e_1..e_n, f_1..f_n.
fn pisp(n: usize) -> RawAlgebra {
    let e = |i: usize| i - 1;
    let f = |i: usize| n + i - 1;
    let mut el = Vec::new();
    for i in 1..=n {
        for j in 1..=n {
            el.push(elem(Parity::Even, "X", format!("X{i},{j}"), &[(e(i), e(j), 1), (f(j), f(i), -1)]));
        }
    }
    for i in 1..=n {
        for j in i + 1..=n {
            el.push(elem(Parity::Odd, "Y", format!("Y{i},{j}"), &[(e(i), f(j), 1), (e(j), f(i), -1)]));
        }
    }
    for i in 1..=n {
        for j in i..=n {
            el.push(elem(Parity::Odd, "Z", format!("Z{i},{j}"), &[(f(i), e(j), 1), (f(j), e(i), 1)]));
        }
    }
    let cartan_labels: Vec<String> = (1..=n).map(|i| format!("X{i},{i}")).collect();
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    finish(2 * n, el, &cartan_labels, names)
}

/// (A B; B A); vectors e_1..e_n, π(e_1)..π(e_n).
fn q(n: usize) -> RawAlgebra {
    let mut el = Vec::new();
    for i in 0..n {
        for j in 0..n {
            el.push(elem(
                Parity::Even,
                "A",
                format!("A{},{}", i + 1, j + 1),
                &[(i, j, 1), (n + i, n + j, 1)],
            ));
        }
    }
    for i in 0..n {
        for j in 0..n {
            el.push(elem(
                Parity::Odd,
                "B",
                format!("B{},{}", i + 1, j + 1),
                &[(i, n + j, 1), (n + i, j, 1)],
            ));
        }
    }
    let cartan_labels: Vec<String> = (1..=n).map(|i| format!("A{i},{i}")).collect();
    let names = (1..=n).map(|i| format!("x{i}")).collect();
    finish(2 * n, el, &cartan_labels, names)
}

/// Matrix of the invariant bilinear form: Γ for osp, Υ for πsp.
pub(crate) fn form(series: Series, m: usize, n: usize) -> Option<Vec<(usize, usize, Rational)>> {
    match series {
        Series::Osp => {
            let p = m / 2;
            let qq = n / 2;
            let off = m % 2;
            let mut out = Vec::new();
            if off == 1 {
                out.push((0, 0, int(1)));
            }
            for i in 0..p {
                out.push((off + i, off + p + i, int(1)));
                out.push((off + p + i, off + i, int(1)));
            }
            for j in 0..qq {
                out.push((m + j, m + qq + j, int(1)));
                out.push((m + qq + j, m + j, int(-1)));
            }
            Some(out)
        }
        Series::Pisp => {
            let mut out = Vec::new();
            for i in 0..n {
                out.push((i, n + i, int(1)));
                out.push((n + i, i, int(-1)));
            }
            Some(out)
        }
        Series::Gl | Series::Q => None,
    }
}
