//! Seeded generators for random instances.
//!
//! Coefficients are drawn from `{−3, ..., 3}` over `Q` (both parts over
//! `Q(i)`) and uniformly over `F_p`.

use num_rational::BigRational;
use rand::Rng;

use crate::diffop::DiffOp;
use crate::field::{FieldSpec, Scalar};
use crate::poly::{ExponentVector, Matrix, Polynomial};
use crate::reduction::LinearForm;
use crate::weyl::WeylElement;

pub fn scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> Scalar {
    match field {
        FieldSpec::Rationals => Scalar::from_i64(field, rng.gen_range(-3..=3)),
        FieldSpec::GaussianRationals => Scalar::gaussian(
            BigRational::from_integer(rng.gen_range(-3..=3).into()),
            BigRational::from_integer(rng.gen_range(-3..=3).into()),
        ),
        FieldSpec::PrimeField(p) => Scalar::from_i64(field, rng.gen_range(0..p.get()) as i64),
    }
}

pub fn nonzero_scalar<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> Scalar {
    loop {
        let c = scalar(rng, field);
        if !c.is_zero() {
            return c;
        }
    }
}

/// A scalar with a small numerator and denominator, for field-axiom checks.
pub fn fraction<R: Rng + ?Sized>(rng: &mut R, field: FieldSpec) -> Scalar {
    let num = scalar(rng, field);
    let den = Scalar::from_i64(field, rng.gen_range(1..=5));
    match den.inv() {
        Ok(inv) => &num * &inv,
        Err(_) => num,
    }
}

pub fn exponents<R: Rng + ?Sized>(rng: &mut R, dim: usize, max_degree: usize) -> ExponentVector {
    let total = rng.gen_range(0..=max_degree);
    let mut e = vec![0u32; dim];
    if dim > 0 {
        for _ in 0..total {
            e[rng.gen_range(0..dim)] += 1;
        }
    }
    ExponentVector::new(e)
}

/// Up to `max_terms` random terms of total degree at most `max_degree`.
pub fn polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
    max_degree: usize,
    max_terms: usize,
) -> Polynomial {
    let count = rng.gen_range(0..=max_terms);
    let terms: Vec<_> = (0..count)
        .map(|_| (exponents(rng, dim, max_degree), scalar(rng, field)))
        .collect();
    Polynomial::from_terms(dim, field, terms).unwrap()
}

pub fn nonzero_polynomial<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
    max_degree: usize,
    max_terms: usize,
) -> Polynomial {
    loop {
        let p = polynomial(rng, dim, field, max_degree, max_terms.max(1));
        if !p.is_zero() {
            return p;
        }
    }
}

/// A polynomial whose degree in `var` is at most `var_degree`.
pub fn polynomial_bounded_in<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
    max_degree: usize,
    max_terms: usize,
    var: usize,
    var_degree: u32,
) -> Polynomial {
    let count = rng.gen_range(1..=max_terms.max(1));
    let terms: Vec<_> = (0..count)
        .map(|_| {
            let mut e = exponents(rng, dim, max_degree).as_slice().to_vec();
            e[var] = e[var].min(var_degree);
            (ExponentVector::new(e), scalar(rng, field))
        })
        .collect();
    Polynomial::from_terms(dim, field, terms).unwrap()
}

pub fn diffop<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
    max_degree: usize,
    max_terms: usize,
) -> DiffOp {
    DiffOp::from_symbol(polynomial(rng, dim, field, max_degree, max_terms))
}

pub fn weyl<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
    max_degree: usize,
    max_terms: usize,
) -> WeylElement {
    let count = rng.gen_range(0..=max_terms);
    (0..count).fold(WeylElement::zero(dim, field), |acc, _| {
        let both = exponents(rng, 2 * dim, max_degree);
        let (x, d) = both.as_slice().split_at(dim);
        let term = WeylElement::monomial(
            &ExponentVector::new(x.to_vec()),
            &ExponentVector::new(d.to_vec()),
            scalar(rng, field),
        );
        &acc + &term
    })
}

pub fn nonzero_linear_form<R: Rng + ?Sized>(
    rng: &mut R,
    dim: usize,
    field: FieldSpec,
) -> LinearForm {
    loop {
        let coeffs = (0..dim).map(|_| scalar(rng, field)).collect();
        let form = LinearForm::new(field, coeffs).unwrap();
        if !form.is_zero() {
            return form;
        }
    }
}

pub fn invertible_matrix<R: Rng + ?Sized>(rng: &mut R, dim: usize, field: FieldSpec) -> Matrix {
    loop {
        let rows = (0..dim)
            .map(|_| (0..dim).map(|_| scalar(rng, field)).collect())
            .collect();
        let m = Matrix::from_rows(field, rows).unwrap();
        if m.is_invertible() {
            return m;
        }
    }
}

/// An instance `(Λ, f̃, g, m, d)` for the `Λ^{m−d} f̃ = 0 ⟹ Λ^m (g f̃) = 0`
/// check. `Λ = ∂_i · R` for a designated `i`, `deg g = d` and `f̃` has degree
/// at most `e` in `x_i`, with `e ≤ m − d`; the hypothesis is then guaranteed
/// whenever `e < m − d`.
#[derive(Clone, Debug)]
pub struct Theorem1Instance {
    pub op: DiffOp,
    pub f_tilde: Polynomial,
    pub g: Polynomial,
    pub m: u32,
    pub d: u32,
    pub designated: usize,
}

pub fn theorem1_instance<R: Rng + ?Sized>(
    rng: &mut R,
    field: FieldSpec,
    max_dim: usize,
) -> Theorem1Instance {
    let dim = rng.gen_range(1..=max_dim);
    let designated = rng.gen_range(0..dim);
    let partial = DiffOp::partial(dim, field, designated).unwrap();
    let rest = DiffOp::from_symbol(nonzero_polynomial(rng, dim, field, 2, 3));
    let op = &partial * &rest;
    let g = polynomial(rng, dim, field, 3, 4);
    let d = g.total_degree().max(0) as u32;
    let m = d + rng.gen_range(0..=4);
    let f_tilde = if m == d {
        Polynomial::zero(dim, field)
    } else {
        // mostly forced, occasionally one degree too many so the hypothesis can fail
        let slack = m - d;
        let e = if rng.gen_bool(0.85) { slack - 1 } else { slack };
        polynomial_bounded_in(rng, dim, field, 4, 4, designated, e)
    };
    Theorem1Instance {
        op,
        f_tilde,
        g,
        m,
        d,
        designated,
    }
}
