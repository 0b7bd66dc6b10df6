//! Sparse multivariate polynomials over an exact field.
//!
//! Variables are indexed from 0. Terms are kept in a `BTreeMap` keyed by
//! [`ExponentVector`], whose ordering is graded lexicographic with
//! `x1 > x2 > ...`, so equal polynomials always have identical term maps.

use std::cmp::Ordering;
use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};

/// Multi-index `α` of a monomial `x^α` (or `∂^α`).
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct ExponentVector(Vec<u32>);

impl ExponentVector {
    pub fn new(exponents: Vec<u32>) -> Self {
        ExponentVector(exponents)
    }

    pub fn zeros(dim: usize) -> Self {
        ExponentVector(vec![0; dim])
    }

    pub fn unit(dim: usize, var: usize) -> Self {
        let mut e = vec![0; dim];
        e[var] = 1;
        ExponentVector(e)
    }

    pub fn len(&self) -> usize {
        self.0.len()
    }

    pub fn is_empty(&self) -> bool {
        self.0.is_empty()
    }

    pub fn as_slice(&self) -> &[u32] {
        &self.0
    }

    pub fn total(&self) -> u64 {
        self.0.iter().map(|&e| u64::from(e)).sum()
    }

    pub fn is_zero(&self) -> bool {
        self.0.iter().all(|&e| e == 0)
    }

    /// Componentwise sum.
    pub fn add(&self, other: &ExponentVector) -> ExponentVector {
        ExponentVector(self.0.iter().zip(&other.0).map(|(a, b)| a + b).collect())
    }

    /// Componentwise difference, `None` unless `other <= self` everywhere.
    pub fn checked_sub(&self, other: &ExponentVector) -> Option<ExponentVector> {
        self.0
            .iter()
            .zip(&other.0)
            .map(|(a, b)| a.checked_sub(*b))
            .collect::<Option<Vec<_>>>()
            .map(ExponentVector)
    }

    /// Pads with zeros up to `dim`.
    pub fn padded(&self, dim: usize) -> ExponentVector {
        let mut e = self.0.clone();
        e.resize(dim, 0);
        ExponentVector(e)
    }
}

impl std::ops::Index<usize> for ExponentVector {
    type Output = u32;

    fn index(&self, i: usize) -> &u32 {
        &self.0[i]
    }
}

impl Ord for ExponentVector {
    fn cmp(&self, other: &Self) -> Ordering {
        self.total()
            .cmp(&other.total())
            .then_with(|| self.0.cmp(&other.0))
    }
}

impl PartialOrd for ExponentVector {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

pub(crate) fn check_compatible(left: (usize, FieldSpec), right: (usize, FieldSpec)) -> Result<()> {
    if left.0 != right.0 {
        return Err(Error::DimensionMismatch {
            left: left.0,
            right: right.0,
        });
    }
    if left.1 != right.1 {
        return Err(Error::FieldMismatch {
            left: left.1,
            right: right.1,
        });
    }
    Ok(())
}

/// An element of `k[x1, ..., xn]`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Polynomial {
    ring_dim: usize,
    field: FieldSpec,
    terms: BTreeMap<ExponentVector, Scalar>,
}

impl Polynomial {
    pub fn zero(ring_dim: usize, field: FieldSpec) -> Self {
        Polynomial {
            ring_dim,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring_dim: usize, field: FieldSpec) -> Self {
        Self::constant(ring_dim, Scalar::one(field))
    }

    pub fn constant(ring_dim: usize, value: Scalar) -> Self {
        let mut p = Self::zero(ring_dim, value.field());
        if !value.is_zero() {
            p.terms.insert(ExponentVector::zeros(ring_dim), value);
        }
        p
    }

    /// The coordinate function `x_{var+1}`.
    pub fn variable(ring_dim: usize, field: FieldSpec, var: usize) -> Result<Self> {
        if var >= ring_dim {
            return Err(Error::IndexOutOfRange {
                index: var,
                dim: ring_dim,
            });
        }
        Ok(Self::monomial(
            ExponentVector::unit(ring_dim, var),
            Scalar::one(field),
        ))
    }

    pub fn monomial(exponents: ExponentVector, coeff: Scalar) -> Self {
        let mut p = Self::zero(exponents.len(), coeff.field());
        if !coeff.is_zero() {
            p.terms.insert(exponents, coeff);
        }
        p
    }

    /// Builds a polynomial from possibly repeated, possibly zero terms.
    pub fn from_terms<I>(ring_dim: usize, field: FieldSpec, terms: I) -> Result<Self>
    where
        I: IntoIterator<Item = (ExponentVector, Scalar)>,
    {
        let mut p = Self::zero(ring_dim, field);
        for (e, c) in terms {
            check_compatible((ring_dim, field), (e.len(), c.field()))?;
            p.add_term(e, c);
        }
        Ok(p)
    }

    pub(crate) fn add_term(&mut self, e: ExponentVector, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += &c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    pub fn ring_dim(&self) -> usize {
        self.ring_dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn num_terms(&self) -> usize {
        self.terms.len()
    }

    /// Terms from the leading one down, in graded lexicographic order.
    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Scalar)> + '_ {
        self.terms.iter().rev()
    }

    pub fn coefficient(&self, e: &ExponentVector) -> Scalar {
        self.terms
            .get(e)
            .cloned()
            .unwrap_or_else(|| Scalar::zero(self.field))
    }

    pub fn constant_term(&self) -> Scalar {
        self.coefficient(&ExponentVector::zeros(self.ring_dim))
    }

    /// Total degree; `-1` for the zero polynomial.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .next_back()
            .map_or(-1, |e| e.total() as i64)
    }

    /// Degree in a single variable; `-1` for the zero polynomial.
    pub fn degree_in(&self, var: usize) -> i64 {
        self.terms
            .keys()
            .map(|e| i64::from(e[var]))
            .max()
            .unwrap_or(-1)
    }

    pub fn is_homogeneous(&self) -> bool {
        let mut degrees = self.terms.keys().map(ExponentVector::total);
        match degrees.next() {
            None => true,
            Some(d) => degrees.all(|e| e == d),
        }
    }

    pub fn try_add(&self, rhs: &Polynomial) -> Result<Polynomial> {
        check_compatible(self.signature(), rhs.signature())?;
        let mut out = self.clone();
        for (e, c) in &rhs.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &Polynomial) -> Result<Polynomial> {
        self.try_add(&-rhs)
    }

    pub fn try_mul(&self, rhs: &Polynomial) -> Result<Polynomial> {
        check_compatible(self.signature(), rhs.signature())?;
        let mut out = Polynomial::zero(self.ring_dim, self.field);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &rhs.terms {
                out.add_term(e1.add(e2), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, c: &Scalar) -> Polynomial {
        let mut out = Polynomial::zero(self.ring_dim, self.field);
        if c.is_zero() {
            return out;
        }
        for (e, v) in &self.terms {
            out.add_term(e.clone(), v * c);
        }
        out
    }

    pub fn pow(&self, exp: u32) -> Polynomial {
        let mut acc = Polynomial::one(self.ring_dim, self.field);
        let mut base = self.clone();
        let mut exp = exp;
        while exp > 0 {
            if exp & 1 == 1 {
                acc = &acc * &base;
            }
            exp >>= 1;
            if exp > 0 {
                base = &base * &base;
            }
        }
        acc
    }

    /// Formal partial derivative with respect to `x_{var+1}`.
    pub fn partial_derivative(&self, var: usize) -> Result<Polynomial> {
        if var >= self.ring_dim {
            return Err(Error::IndexOutOfRange {
                index: var,
                dim: self.ring_dim,
            });
        }
        let mut out = Polynomial::zero(self.ring_dim, self.field);
        for (e, c) in &self.terms {
            if e[var] == 0 {
                continue;
            }
            let mut reduced = e.clone();
            reduced.0[var] -= 1;
            out.add_term(
                reduced,
                c * &Scalar::from_i64(self.field, i64::from(e[var])),
            );
        }
        Ok(out)
    }

    /// Views the polynomial in a ring with `dim >= ring_dim` variables.
    pub fn embed(&self, dim: usize) -> Result<Polynomial> {
        if dim < self.ring_dim {
            return Err(Error::DimensionMismatch {
                left: self.ring_dim,
                right: dim,
            });
        }
        Ok(Polynomial {
            ring_dim: dim,
            field: self.field,
            terms: self
                .terms
                .iter()
                .map(|(e, c)| (e.padded(dim), c.clone()))
                .collect(),
        })
    }

    /// Drops trailing variables, failing if any of them actually occurs.
    pub fn restrict(&self, dim: usize) -> Result<Polynomial> {
        let mut out = Polynomial::zero(dim, self.field);
        for (e, c) in &self.terms {
            if e.as_slice()[dim.min(e.len())..].iter().any(|&x| x != 0) {
                return Err(Error::Precondition(format!(
                    "polynomial involves variables beyond index {dim}"
                )));
            }
            out.terms
                .insert(ExponentVector(e.as_slice()[..dim].to_vec()), c.clone());
        }
        Ok(out)
    }

    /// Replaces every variable `x_j` by the linear form `Σ_i M[i][j] x_i`
    /// (column `j` of `M`) in a ring of `target_dim` variables.
    pub fn substitute_linear(&self, m: &Matrix, target_dim: usize) -> Result<Polynomial> {
        if m.dim() != target_dim {
            return Err(Error::DimensionMismatch {
                left: m.dim(),
                right: target_dim,
            });
        }
        if m.field() != self.field {
            return Err(Error::FieldMismatch {
                left: self.field,
                right: m.field(),
            });
        }
        let f = self.embed(target_dim)?;
        if !m.is_invertible() {
            return Err(Error::SingularMatrix(m.field()));
        }
        let images: Vec<Polynomial> = (0..target_dim)
            .map(|j| {
                let terms = (0..target_dim)
                    .map(|i| (ExponentVector::unit(target_dim, i), m.get(i, j).clone()));
                Polynomial::from_terms(target_dim, self.field, terms)
            })
            .collect::<Result<_>>()?;
        // powers[j][k] = images[j]^k, grown on demand
        let mut powers: Vec<Vec<Polynomial>> = images
            .iter()
            .map(|_| vec![Polynomial::one(target_dim, self.field)])
            .collect();
        let mut out = Polynomial::zero(target_dim, self.field);
        for (e, c) in &f.terms {
            let mut term = Polynomial::constant(target_dim, c.clone());
            for (j, &k) in e.as_slice().iter().enumerate() {
                if k == 0 {
                    continue;
                }
                while powers[j].len() <= k as usize {
                    let next = powers[j].last().unwrap() * &images[j];
                    powers[j].push(next);
                }
                term = &term * &powers[j][k as usize];
            }
            out = &out + &term;
        }
        Ok(out)
    }

    pub(crate) fn signature(&self) -> (usize, FieldSpec) {
        (self.ring_dim, self.field)
    }

    pub(crate) fn term_map(&self) -> &BTreeMap<ExponentVector, Scalar> {
        &self.terms
    }
}

impl<'a> Add<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    /// Panics on dimension or field mismatch; see [`Polynomial::try_add`].
    fn add(self, rhs: &Polynomial) -> Polynomial {
        self.try_add(rhs).expect("polynomial addition")
    }
}

impl<'a> Sub<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn sub(self, rhs: &Polynomial) -> Polynomial {
        self.try_sub(rhs).expect("polynomial subtraction")
    }
}

impl<'a> Mul<&'a Polynomial> for &'a Polynomial {
    type Output = Polynomial;

    fn mul(self, rhs: &Polynomial) -> Polynomial {
        self.try_mul(rhs).expect("polynomial multiplication")
    }
}

impl Neg for &Polynomial {
    type Output = Polynomial;

    fn neg(self) -> Polynomial {
        Polynomial {
            ring_dim: self.ring_dim,
            field: self.field,
            terms: self.terms.iter().map(|(e, c)| (e.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for Polynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_polynomial(
            self,
            &crate::expr::VarLayout::plain(),
        ))
    }
}

/// A square matrix over an exact field.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Matrix {
    dim: usize,
    field: FieldSpec,
    entries: Vec<Scalar>,
}

impl Matrix {
    pub fn from_rows(field: FieldSpec, rows: Vec<Vec<Scalar>>) -> Result<Self> {
        let dim = rows.len();
        let mut entries = Vec::with_capacity(dim * dim);
        for row in rows {
            if row.len() != dim {
                return Err(Error::DimensionMismatch {
                    left: dim,
                    right: row.len(),
                });
            }
            for c in row {
                if c.field() != field {
                    return Err(Error::FieldMismatch {
                        left: field,
                        right: c.field(),
                    });
                }
                entries.push(c);
            }
        }
        Ok(Matrix {
            dim,
            field,
            entries,
        })
    }

    pub fn identity(dim: usize, field: FieldSpec) -> Self {
        let mut m = Matrix {
            dim,
            field,
            entries: vec![Scalar::zero(field); dim * dim],
        };
        for i in 0..dim {
            m.entries[i * dim + i] = Scalar::one(field);
        }
        m
    }

    pub fn dim(&self) -> usize {
        self.dim
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn get(&self, row: usize, col: usize) -> &Scalar {
        &self.entries[row * self.dim + col]
    }

    pub fn set(&mut self, row: usize, col: usize, value: Scalar) {
        assert_eq!(value.field(), self.field);
        self.entries[row * self.dim + col] = value;
    }

    pub fn transpose(&self) -> Matrix {
        let mut t = self.clone();
        for i in 0..self.dim {
            for j in 0..self.dim {
                t.entries[j * self.dim + i] = self.get(i, j).clone();
            }
        }
        t
    }

    pub fn try_mul(&self, rhs: &Matrix) -> Result<Matrix> {
        if self.dim != rhs.dim {
            return Err(Error::DimensionMismatch {
                left: self.dim,
                right: rhs.dim,
            });
        }
        let n = self.dim;
        let mut out = Matrix::identity(n, self.field);
        for i in 0..n {
            for j in 0..n {
                let mut acc = Scalar::zero(self.field);
                for k in 0..n {
                    acc += &(self.get(i, k) * rhs.get(k, j));
                }
                out.entries[i * n + j] = acc;
            }
        }
        Ok(out)
    }

    pub fn is_invertible(&self) -> bool {
        self.inverse().is_ok()
    }

    /// Gauss-Jordan elimination.
    pub fn inverse(&self) -> Result<Matrix> {
        let n = self.dim;
        let mut a = self.clone();
        let mut inv = Matrix::identity(n, self.field);
        for col in 0..n {
            let pivot = (col..n)
                .find(|&r| !a.get(r, col).is_zero())
                .ok_or(Error::SingularMatrix(self.field))?;
            if pivot != col {
                for j in 0..n {
                    a.entries.swap(pivot * n + j, col * n + j);
                    inv.entries.swap(pivot * n + j, col * n + j);
                }
            }
            let scale = a.get(col, col).inv()?;
            for j in 0..n {
                a.entries[col * n + j] = a.get(col, j) * &scale;
                inv.entries[col * n + j] = inv.get(col, j) * &scale;
            }
            for r in 0..n {
                if r == col || a.get(r, col).is_zero() {
                    continue;
                }
                let factor = a.get(r, col).clone();
                for j in 0..n {
                    let av = a.get(r, j) - &(&factor * a.get(col, j));
                    let iv = inv.get(r, j) - &(&factor * inv.get(col, j));
                    a.entries[r * n + j] = av;
                    inv.entries[r * n + j] = iv;
                }
            }
        }
        Ok(inv)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn x(dim: usize, i: usize) -> Polynomial {
        Polynomial::variable(dim, Q, i).unwrap()
    }

    fn c(v: i64) -> Scalar {
        Scalar::from_i64(Q, v)
    }

    #[test]
    fn add_cancels_and_combines() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        assert_eq!(&(&x1 + &x2) + &(-&x1), x2);
        assert_eq!(&x1 + &Polynomial::zero(2, Q), x1);
        let a = x1.pow(2).scale(&c(2));
        let b = x1.pow(2).scale(&c(3));
        assert_eq!(&a + &b, x1.pow(2).scale(&c(5)));
    }

    #[test]
    fn difference_of_squares() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        assert_eq!(&(&x1 + &x2) * &(&x1 - &x2), &x1.pow(2) - &x2.pow(2));
        assert_eq!(&x1 * &Polynomial::one(2, Q), x1);
    }

    #[test]
    fn gaussian_product() {
        let qi = FieldSpec::GaussianRationals;
        let i = Polynomial::constant(2, Scalar::imaginary_unit(qi).unwrap());
        let x1 = Polynomial::variable(2, qi, 0).unwrap();
        let x2 = Polynomial::variable(2, qi, 1).unwrap();
        let lhs = &(&x1 + &(&i * &x2)) * &(&x1 - &(&i * &x2));
        assert_eq!(lhs, &x1.pow(2) + &x2.pow(2));
    }

    #[test]
    fn derivatives() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        let f = &x1.pow(2) * &x2;
        assert_eq!(f.partial_derivative(0).unwrap(), (&x1 * &x2).scale(&c(2)));
        assert!(x2.pow(3).partial_derivative(0).unwrap().is_zero());
        assert_eq!(
            f.partial_derivative(2),
            Err(Error::IndexOutOfRange { index: 2, dim: 2 })
        );
        let f3 = FieldSpec::prime_field(3).unwrap();
        let cube = Polynomial::variable(1, f3, 0).unwrap().pow(3);
        assert!(cube.partial_derivative(0).unwrap().is_zero());
    }

    #[test]
    fn degrees() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        assert_eq!((&(&x1.pow(2) * &x2) + &x2).total_degree(), 3);
        assert_eq!(Polynomial::constant(2, c(5)).total_degree(), 0);
        assert_eq!(Polynomial::zero(2, Q).total_degree(), -1);
    }

    #[test]
    fn mismatches_are_errors() {
        let a = x(2, 0);
        let b = x(3, 0);
        assert_eq!(
            a.try_add(&b),
            Err(Error::DimensionMismatch { left: 2, right: 3 })
        );
        let g = Polynomial::variable(2, FieldSpec::GaussianRationals, 0).unwrap();
        assert!(matches!(a.try_mul(&g), Err(Error::FieldMismatch { .. })));
    }

    #[test]
    fn linear_substitutions() {
        let x1 = x(1, 0);
        assert_eq!(
            x1.substitute_linear(&Matrix::identity(1, Q), 1).unwrap(),
            x1
        );

        // x1 -> x1 - y1 in the ring (x1, y1)
        let m = Matrix::from_rows(Q, vec![vec![c(1), c(0)], vec![c(-1), c(1)]]).unwrap();
        assert_eq!(x1.substitute_linear(&m, 2).unwrap(), &x(2, 0) - &x(2, 1));

        // x1^2 with x1 -> x1 + x2
        let m = Matrix::from_rows(Q, vec![vec![c(1), c(0)], vec![c(1), c(1)]]).unwrap();
        let expected = &(&x(2, 0).pow(2) + &(&x(2, 0) * &x(2, 1)).scale(&c(2))) + &x(2, 1).pow(2);
        assert_eq!(x(2, 0).pow(2).substitute_linear(&m, 2).unwrap(), expected);

        let singular = Matrix::from_rows(Q, vec![vec![c(1), c(1)], vec![c(1), c(1)]]).unwrap();
        assert_eq!(
            x(2, 0).substitute_linear(&singular, 2),
            Err(Error::SingularMatrix(Q))
        );
        assert!(x(2, 0)
            .substitute_linear(&Matrix::identity(2, Q), 1)
            .is_err());
    }

    #[test]
    fn matrix_inverse() {
        let m = Matrix::from_rows(Q, vec![vec![c(0), c(2)], vec![c(1), c(3)]]).unwrap();
        let inv = m.inverse().unwrap();
        assert_eq!(m.try_mul(&inv).unwrap(), Matrix::identity(2, Q));
    }

    #[test]
    fn grlex_order() {
        let e = |v: &[u32]| ExponentVector::new(v.to_vec());
        assert!(e(&[1, 0]) > e(&[0, 1]));
        assert!(e(&[0, 2]) > e(&[1, 0]));
        assert!(e(&[2, 0]) > e(&[1, 1]));
    }
}
