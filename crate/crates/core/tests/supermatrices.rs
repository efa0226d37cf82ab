use proptest::prelude::*;

use superflag::rational::{int, q};
use superflag::supermatrix::{Partition, SuperMatrixError};
use superflag::{GrassmannElement, Parity, Rational, SuperMatrix};

fn xi(n: usize, i: usize) -> GrassmannElement {
    GrassmannElement::generator(n, i).unwrap()
}

fn one_by_one(part: Partition, parity: Parity, e: GrassmannElement, n: usize) -> SuperMatrix {
    SuperMatrix::new(part, part, parity, vec![e], n).unwrap()
}

/// Even (rows|cols) matrix with small rational even blocks and odd blocks
/// built from the generators.
fn matrix(part: Partition, n: usize, coeffs: &[i64]) -> SuperMatrix {
    let size = part.total();
    let mut entries = Vec::new();
    for i in 0..size {
        for j in 0..size {
            let c = coeffs[(i * size + j) % coeffs.len()];
            let e = if part.parity_of(i) == part.parity_of(j) {
                let mut e = GrassmannElement::from_integer(n, c);
                if n >= 2 {
                    e = &e + &(&xi(n, 1) * &xi(n, 2)).scale(&int(c + 1));
                }
                e
            } else {
                xi(n, 1 + (i + j) % n).scale(&int(c))
            };
            entries.push(e);
        }
    }
    SuperMatrix::new(part, part, Parity::Even, entries, n).unwrap()
}

#[test]
fn identity_is_neutral() {
    let part = Partition::new(2, 1);
    let a = matrix(part, 3, &[1, -2, 3, 0, 5]);
    assert_eq!(a.mul(&SuperMatrix::identity(part, 3)).unwrap(), a);
    assert_eq!(SuperMatrix::identity(part, 3).mul(&a).unwrap(), a);
}

#[test]
fn odd_one_by_one_product() {
    let part = Partition::new(1, 0);
    let a = one_by_one(part, Parity::Odd, xi(2, 1), 2);
    let b = one_by_one(part, Parity::Odd, xi(2, 2), 2);
    let ab = a.mul(&b).unwrap();
    assert_eq!(*ab.entry(0, 0), &xi(2, 1) * &xi(2, 2));
    assert_eq!(ab.parity(), Parity::Even);
}

#[test]
fn supertranspose_moves_and_negates_the_odd_block() {
    let n = 1;
    let z = GrassmannElement::zero(n);
    let m = SuperMatrix::new(
        Partition::new(1, 1),
        Partition::new(1, 1),
        Parity::Even,
        vec![z.clone(), xi(n, 1), z.clone(), z.clone()],
        n,
    )
    .unwrap();
    let st = m.supertranspose();
    assert_eq!(*st.entry(1, 0), -&xi(n, 1));
    assert!(st.entry(0, 1).is_zero());
}

#[test]
fn scalar_inverse_example() {
    let n = 2;
    let a = &GrassmannElement::from_integer(n, 2) + &(&xi(n, 1) * &xi(n, 2));
    let inv = one_by_one(Partition::new(1, 0), Parity::Even, a, n).inverse_even().unwrap();
    let expected = &GrassmannElement::scalar(n, q(1, 2)) + &(&xi(n, 1) * &xi(n, 2)).scale(&q(-1, 4));
    assert_eq!(*inv.entry(0, 0), expected);
}

#[test]
fn singular_body_is_an_error() {
    let n = 1;
    let m = one_by_one(Partition::new(1, 0), Parity::Even, GrassmannElement::zero(n), n);
    assert_eq!(m.inverse_even(), Err(SuperMatrixError::Singular));
}

#[test]
fn odd_entries_in_even_blocks_are_rejected() {
    let n = 1;
    let bad = SuperMatrix::new(Partition::new(1, 0), Partition::new(1, 0), Parity::Even, vec![xi(n, 1)], n);
    assert!(bad.is_err());
}

proptest! {
    #![proptest_config(ProptestConfig::with_cases(64))]

    #[test]
    fn random_products_associate(a in prop::collection::vec(-4i64..=4, 9), b in prop::collection::vec(-4i64..=4, 9), c in prop::collection::vec(-4i64..=4, 9)) {
        let part = Partition::new(2, 1);
        let (x, y, z) = (matrix(part, 3, &a), matrix(part, 3, &b), matrix(part, 3, &c));
        prop_assert_eq!(x.mul(&y).unwrap().mul(&z).unwrap(), x.mul(&y.mul(&z).unwrap()).unwrap());
    }

    #[test]
    fn inverse_multiplies_back(a in prop::collection::vec(-4i64..=4, 4)) {
        let part = Partition::new(1, 1);
        let m = matrix(part, 2, &a);
        prop_assume!(m.body().inverse().is_some());
        let inv = m.inverse_even().unwrap();
        prop_assert_eq!(m.mul(&inv).unwrap(), SuperMatrix::identity(part, 2));
        prop_assert_eq!(inv.mul(&m).unwrap(), SuperMatrix::identity(part, 2));
    }

    #[test]
    fn supertranspose_reverses_products(a in prop::collection::vec(-4i64..=4, 9), b in prop::collection::vec(-4i64..=4, 9)) {
        let part = Partition::new(2, 1);
        let (x, y) = (matrix(part, 3, &a), matrix(part, 3, &b));
        prop_assert_eq!(
            x.mul(&y).unwrap().supertranspose(),
            y.supertranspose().mul(&x.supertranspose()).unwrap()
        );
    }
}

#[test]
fn rational_lift_keeps_entries() {
    let mut body = superflag::linalg::QMatrix::zeros(2, 2);
    body.set(0, 0, int(3));
    body.set(1, 1, Rational::from_integer((-1).into()));
    let part = Partition::new(1, 1);
    let m = SuperMatrix::from_rational(&body, part, part, Parity::Even, 0).unwrap();
    assert_eq!(m.body(), body);
}
