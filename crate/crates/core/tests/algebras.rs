use superflag::grassmann::Parity;
use superflag::linalg::QMatrix;
use superflag::rational::int;
use superflag::superalgebra::densify;
use superflag::{LieSuperAlgebra, Series};

fn index(g: &LieSuperAlgebra, label: &str) -> usize {
    g.basis().iter().position(|b| b.label == label).unwrap_or_else(|| panic!("no {label}"))
}

#[test]
fn dimension_examples() {
    let dims = |s, m, n| {
        let g = LieSuperAlgebra::build(s, m, n).unwrap();
        (g.even_dim(), g.odd_dim())
    };
    assert_eq!(dims(Series::Gl, 2, 2), (8, 8));
    assert_eq!(dims(Series::Osp, 2, 2), (4, 4));
    assert_eq!(dims(Series::Pisp, 2, 2), (4, 4));
    assert_eq!(dims(Series::Q, 3, 3), (9, 9));
}

#[test]
fn gl11_odd_bracket() {
    let g = LieSuperAlgebra::build(Series::Gl, 1, 1).unwrap();
    let (e12, e21) = (index(&g, "E1,2"), index(&g, "E2,1"));
    let got = densify(g.dim(), g.bracket_basis(e12, e21));
    let mut expected = vec![int(0); g.dim()];
    expected[index(&g, "E1,1")] = int(1);
    expected[index(&g, "E2,2")] = int(1);
    assert_eq!(got, expected);
}

#[test]
fn retract_kills_odd_brackets_and_is_idempotent() {
    let g = LieSuperAlgebra::build(Series::Gl, 2, 1).unwrap();
    let gr = g.gr();
    for a in gr.odd_indices() {
        for b in gr.odd_indices() {
            assert!(gr.bracket_basis(a, b).is_empty());
        }
    }
    let grgr = gr.gr();
    for a in 0..g.dim() {
        for b in 0..g.dim() {
            assert_eq!(gr.bracket_basis(a, b), grgr.bracket_basis(a, b));
        }
    }
}

#[test]
fn odd_summand_dimensions() {
    let dims = |s, m, n| -> Vec<usize> {
        LieSuperAlgebra::build(s, m, n)
            .unwrap()
            .odd_summands()
            .iter()
            .map(|s| s.space.dim())
            .collect()
    };
    assert_eq!(dims(Series::Gl, 2, 2), vec![4, 4]);
    assert_eq!(dims(Series::Osp, 3, 2), vec![6]);
    assert_eq!(dims(Series::Pisp, 2, 2), vec![3, 1]);
}

#[test]
fn osp_even_part_preserves_gamma() {
    let g = LieSuperAlgebra::build(Series::Osp, 3, 4).unwrap();
    let gamma = g.form().unwrap();
    for i in g.even_indices() {
        let x = &g.basis()[i].matrix;
        // Even elements have no odd blocks, so X^{ST} = Xᵀ.
        let lhs = x.transpose().mul(&gamma).add(&gamma.mul(x));
        assert!(lhs.is_zero(), "{}", g.basis()[i].label);
    }
}

#[test]
fn pisp_preserves_upsilon() {
    let g = LieSuperAlgebra::build(Series::Pisp, 3, 3).unwrap();
    let ups = g.form().unwrap();
    let n = 3;
    for b in g.basis() {
        // Supertranspose of a rational matrix in the (n|n) grading.
        let mut st = b.matrix.transpose();
        for i in 0..n {
            for j in n..2 * n {
                let v = -st.get(j, i).clone();
                st.set(j, i, v);
            }
        }
        let lhs = st.mul(&ups).add(&ups.mul(&b.matrix));
        assert!(lhs.is_zero(), "{}", b.label);
    }
}

#[test]
fn supercommutator_matches_table() {
    for (s, m, n) in [(Series::Osp, 3, 2), (Series::Q, 2, 2), (Series::Pisp, 2, 2)] {
        let g = LieSuperAlgebra::build(s, m, n).unwrap();
        for (i, a) in g.basis().iter().enumerate() {
            for (j, b) in g.basis().iter().enumerate() {
                let c: QMatrix = LieSuperAlgebra::matrix_supercommutator(&a.matrix, a.parity, &b.matrix, b.parity);
                assert_eq!(g.element(&densify(g.dim(), g.bracket_basis(i, j))), c);
            }
        }
    }
}

#[test]
fn odd_roots_of_gl21() {
    let g = LieSuperAlgebra::build(Series::Gl, 2, 1).unwrap();
    let rs = g.root_decomposition().unwrap();
    let mut odd: Vec<String> = rs.of_parity(Parity::Odd).map(|r| r.root.display(g.cartan_names())).collect();
    odd.sort();
    assert_eq!(odd, ["-x1+y1", "-x2+y1", "x1-y1", "x2-y1"]);
}
