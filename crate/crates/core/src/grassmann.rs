//! The exterior algebra Λ_N over the rationals.
//!
//! Elements are stored as a map from generator subsets to nonzero rational
//! coefficients. A subset is encoded as a bitmask (bit `i - 1` set means
//! ξ_i is present), which is the same data as a strictly increasing index
//! sequence; `indices` recovers that form.

use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use serde::{Deserialize, Serialize};
use thiserror::Error;

use crate::Rational;

/// Upper bound on the generator count of a single computation context.
pub const MAX_GENERATORS: usize = 64;

#[derive(Debug, Error, Clone, PartialEq, Eq)]
pub enum GrassmannError {
    #[error("generator counts differ: {left} vs {right}")]
    GeneratorMismatch { left: usize, right: usize },
    #[error("generator index {index} is outside 1..={generators}")]
    IndexOutOfRange { index: usize, generators: usize },
    #[error("at most {MAX_GENERATORS} odd generators are supported, got {0}")]
    TooManyGenerators(usize),
    #[error("malformed coefficient `{0}`")]
    BadCoefficient(String),
}

/// Z/2 grading.
#[derive(Debug, Clone, Copy, PartialEq, Eq, Hash, PartialOrd, Ord, Serialize, Deserialize)]
pub enum Parity {
    Even,
    Odd,
}

impl Parity {
    pub fn of_degree(degree: usize) -> Self {
        if degree % 2 == 0 {
            Parity::Even
        } else {
            Parity::Odd
        }
    }

    pub fn is_odd(self) -> bool {
        self == Parity::Odd
    }

    /// Sign `(-1)^{|a||b|}`.
    pub fn koszul_sign(self, other: Parity) -> i32 {
        if self.is_odd() && other.is_odd() {
            -1
        } else {
            1
        }
    }
}

impl Add for Parity {
    type Output = Parity;

    fn add(self, rhs: Parity) -> Parity {
        if self == rhs {
            Parity::Even
        } else {
            Parity::Odd
        }
    }
}

impl fmt::Display for Parity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Parity::Even => f.write_str("even"),
            Parity::Odd => f.write_str("odd"),
        }
    }
}

/// Number of transpositions needed to sort the concatenation `a ++ b`
/// of two increasing index sets into increasing order, modulo 2.
fn shuffle_is_odd(a: u64, b: u64) -> bool {
    let mut count = 0u32;
    let mut rest = b;
    while rest != 0 {
        let j = rest.trailing_zeros();
        rest &= rest - 1;
        if j < 63 {
            count += (a >> (j + 1)).count_ones();
        }
    }
    count % 2 == 1
}

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct GrassmannElement {
    generators: usize,
    terms: BTreeMap<u64, Rational>,
}

impl GrassmannElement {
    pub fn zero(generators: usize) -> Self {
        assert!(generators <= MAX_GENERATORS, "too many generators");
        GrassmannElement {
            generators,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(generators: usize) -> Self {
        Self::scalar(generators, Rational::one())
    }

    pub fn scalar(generators: usize, value: Rational) -> Self {
        let mut out = Self::zero(generators);
        if !value.is_zero() {
            out.terms.insert(0, value);
        }
        out
    }

    pub fn from_integer(generators: usize, value: i64) -> Self {
        Self::scalar(generators, Rational::from_integer(BigInt::from(value)))
    }

    /// The generator ξ_i, `1 ≤ i ≤ generators`.
    pub fn generator(generators: usize, i: usize) -> Result<Self, GrassmannError> {
        check_index(generators, i)?;
        let mut out = Self::zero(generators);
        out.terms.insert(1u64 << (i - 1), Rational::one());
        Ok(out)
    }

    /// Build from (index list, coefficient) pairs. Index lists need not be
    /// sorted; each is sorted with the sign of the sorting permutation and
    /// lists with a repeated index vanish.
    pub fn from_terms<I>(generators: usize, terms: I) -> Result<Self, GrassmannError>
    where
        I: IntoIterator<Item = (Vec<usize>, Rational)>,
    {
        if generators > MAX_GENERATORS {
            return Err(GrassmannError::TooManyGenerators(generators));
        }
        let mut out = Self::zero(generators);
        for (indices, coeff) in terms {
            let mut mask = 0u64;
            let mut odd = false;
            let mut repeated = false;
            for &i in &indices {
                check_index(generators, i)?;
                let bit = 1u64 << (i - 1);
                if mask & bit != 0 {
                    repeated = true;
                }
                odd ^= shuffle_is_odd(mask, bit);
                mask |= bit;
            }
            if repeated {
                continue;
            }
            let coeff = if odd { -coeff } else { coeff };
            out.accumulate(mask, coeff);
        }
        out.prune();
        Ok(out)
    }

    pub fn generators(&self) -> usize {
        self.generators
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn term_count(&self) -> usize {
        self.terms.len()
    }

    /// Terms as (increasing 1-based index list, coefficient).
    pub fn terms(&self) -> impl Iterator<Item = (Vec<usize>, &Rational)> + '_ {
        self.terms.iter().map(|(&mask, c)| (mask_indices(mask), c))
    }

    /// Coefficient of the monomial with the given (increasing) index list.
    pub fn coefficient(&self, indices: &[usize]) -> Rational {
        let mask = indices.iter().fold(0u64, |m, &i| m | (1u64 << (i - 1)));
        self.terms.get(&mask).cloned().unwrap_or_else(Rational::zero)
    }

    /// Grade-0 coefficient (the reduction f ↦ f_red).
    pub fn body(&self) -> Rational {
        self.terms.get(&0).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn max_degree(&self) -> Option<usize> {
        self.terms.keys().map(|m| m.count_ones() as usize).max()
    }

    /// `Some(parity)` if homogeneous; zero counts as even.
    pub fn parity(&self) -> Option<Parity> {
        let mut seen: Option<Parity> = None;
        for mask in self.terms.keys() {
            let p = Parity::of_degree(mask.count_ones() as usize);
            match seen {
                None => seen = Some(p),
                Some(q) if q != p => return None,
                _ => {}
            }
        }
        Some(seen.unwrap_or(Parity::Even))
    }

    /// True if the element is zero or homogeneous of parity `p`.
    pub fn has_parity(&self, p: Parity) -> bool {
        self.terms
            .keys()
            .all(|m| Parity::of_degree(m.count_ones() as usize) == p)
    }

    pub fn grade_project(&self, degree: usize) -> Self {
        GrassmannElement {
            generators: self.generators,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.count_ones() as usize == degree)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    pub fn checked_add(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.same_generators(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, c.clone());
        }
        out.prune();
        Ok(out)
    }

    pub fn checked_sub(&self, other: &Self) -> Result<Self, GrassmannError> {
        self.same_generators(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.accumulate(*m, -c.clone());
        }
        out.prune();
        Ok(out)
    }

    /// Wedge product.
    pub fn checked_mul(&self, other: &Self) -> Result<Self, GrassmannError> {
        let mut out = Self::zero(self.generators);
        out.add_product(self, other)?;
        Ok(out)
    }

    /// `self += a·b` without materializing the product.
    pub fn add_product(&mut self, a: &Self, b: &Self) -> Result<(), GrassmannError> {
        self.same_generators(a)?;
        a.same_generators(b)?;
        for (ma, ca) in &a.terms {
            for (mb, cb) in &b.terms {
                if ma & mb != 0 {
                    continue;
                }
                let prod = ca * cb;
                let prod = if shuffle_is_odd(*ma, *mb) { -prod } else { prod };
                self.accumulate(ma | mb, prod);
            }
        }
        self.prune();
        Ok(())
    }

    pub fn scale(&self, factor: &Rational) -> Self {
        if factor.is_zero() {
            return Self::zero(self.generators);
        }
        GrassmannElement {
            generators: self.generators,
            terms: self
                .terms
                .iter()
                .map(|(m, c)| (*m, c * factor))
                .collect(),
        }
    }

    /// Left derivative ∂/∂ξ_i.
    pub fn odd_derivative(&self, i: usize) -> Result<Self, GrassmannError> {
        check_index(self.generators, i)?;
        let bit = 1u64 << (i - 1);
        let below = bit - 1;
        let mut out = Self::zero(self.generators);
        for (m, c) in &self.terms {
            if m & bit == 0 {
                continue;
            }
            let sign_odd = (m & below).count_ones() % 2 == 1;
            let c = if sign_odd { -c.clone() } else { c.clone() };
            out.terms.insert(m & !bit, c);
        }
        Ok(out)
    }

    pub fn pow(&self, exponent: u32) -> Self {
        let mut acc = Self::one(self.generators);
        for _ in 0..exponent {
            acc = &acc * self;
        }
        acc
    }

    /// Reinterpret in a context with more generators.
    pub fn embed(&self, generators: usize) -> Result<Self, GrassmannError> {
        if generators > MAX_GENERATORS {
            return Err(GrassmannError::TooManyGenerators(generators));
        }
        if let Some(top) = self.terms.keys().map(|m| 64 - m.leading_zeros() as usize).max() {
            if top > generators {
                return Err(GrassmannError::IndexOutOfRange {
                    index: top,
                    generators,
                });
            }
        }
        Ok(GrassmannElement {
            generators,
            terms: self.terms.clone(),
        })
    }

    fn same_generators(&self, other: &Self) -> Result<(), GrassmannError> {
        if self.generators != other.generators {
            Err(GrassmannError::GeneratorMismatch {
                left: self.generators,
                right: other.generators,
            })
        } else {
            Ok(())
        }
    }

    fn accumulate(&mut self, mask: u64, coeff: Rational) {
        if coeff.is_zero() {
            return;
        }
        let entry = self.terms.entry(mask).or_insert_with(Rational::zero);
        *entry += coeff;
    }

    fn prune(&mut self) {
        self.terms.retain(|_, c| !c.is_zero());
    }
}

fn check_index(generators: usize, i: usize) -> Result<(), GrassmannError> {
    if generators > MAX_GENERATORS {
        return Err(GrassmannError::TooManyGenerators(generators));
    }
    if i == 0 || i > generators {
        return Err(GrassmannError::IndexOutOfRange {
            index: i,
            generators,
        });
    }
    Ok(())
}

fn mask_indices(mut mask: u64) -> Vec<usize> {
    let mut out = Vec::with_capacity(mask.count_ones() as usize);
    while mask != 0 {
        out.push(mask.trailing_zeros() as usize + 1);
        mask &= mask - 1;
    }
    out
}

impl<'a> Add<&'a GrassmannElement> for &'a GrassmannElement {
    type Output = GrassmannElement;

    fn add(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_add(rhs).expect("Grassmann addition")
    }
}

impl<'a> Sub<&'a GrassmannElement> for &'a GrassmannElement {
    type Output = GrassmannElement;

    fn sub(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_sub(rhs).expect("Grassmann subtraction")
    }
}

impl<'a> Mul<&'a GrassmannElement> for &'a GrassmannElement {
    type Output = GrassmannElement;

    fn mul(self, rhs: &GrassmannElement) -> GrassmannElement {
        self.checked_mul(rhs).expect("Grassmann multiplication")
    }
}

impl Neg for &GrassmannElement {
    type Output = GrassmannElement;

    fn neg(self) -> GrassmannElement {
        GrassmannElement {
            generators: self.generators,
            terms: self.terms.iter().map(|(m, c)| (*m, -c.clone())).collect(),
        }
    }
}

impl fmt::Display for GrassmannElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (pos, (mask, coeff)) in self.terms.iter().enumerate() {
            let negative = coeff.is_negative();
            let magnitude = coeff.abs();
            match (pos, negative) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let monomial: String = mask_indices(*mask)
                .iter()
                .map(|i| format!("ξ{i}"))
                .collect();
            if monomial.is_empty() {
                write!(f, "{magnitude}")?;
            } else if magnitude.is_one() {
                f.write_str(&monomial)?;
            } else {
                write!(f, "({magnitude}){monomial}")?;
            }
        }
        Ok(())
    }
}

/// Wire form: generator count plus (index list, numerator, denominator)
/// triples. Integers are decimal strings so that arbitrary precision survives.
#[derive(Debug, Clone, PartialEq, Eq, Serialize, Deserialize)]
pub struct GrassmannRecord {
    pub generators: usize,
    pub terms: Vec<(Vec<usize>, String, String)>,
}

impl From<&GrassmannElement> for GrassmannRecord {
    fn from(value: &GrassmannElement) -> Self {
        GrassmannRecord {
            generators: value.generators,
            terms: value
                .terms()
                .map(|(idx, c)| (idx, c.numer().to_string(), c.denom().to_string()))
                .collect(),
        }
    }
}

impl TryFrom<GrassmannRecord> for GrassmannElement {
    type Error = GrassmannError;

    fn try_from(record: GrassmannRecord) -> Result<Self, Self::Error> {
        let mut terms = Vec::with_capacity(record.terms.len());
        for (idx, num, den) in record.terms {
            let n: BigInt = num
                .parse()
                .map_err(|_| GrassmannError::BadCoefficient(num.clone()))?;
            let d: BigInt = den
                .parse()
                .map_err(|_| GrassmannError::BadCoefficient(den.clone()))?;
            if d.is_zero() {
                return Err(GrassmannError::BadCoefficient(den));
            }
            terms.push((idx, Rational::new(n, d)));
        }
        GrassmannElement::from_terms(record.generators, terms)
    }
}

impl Serialize for GrassmannElement {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        GrassmannRecord::from(self).serialize(serializer)
    }
}

impl<'de> Deserialize<'de> for GrassmannElement {
    fn deserialize<D: serde::Deserializer<'de>>(deserializer: D) -> Result<Self, D::Error> {
        let record = GrassmannRecord::deserialize(deserializer)?;
        GrassmannElement::try_from(record).map_err(serde::de::Error::custom)
    }
}
