//! The Weyl algebra `A_n(k)`: skew polynomials in `x` and `∂` with
//! `∂_i x_j − x_j ∂_i = δ_ij`.
//!
//! Elements are stored in normal order, every term being `c · x^α ∂^β`.
//! Internally a term key is the concatenation `(α, β)` of length `2n`,
//! ordered graded-lexicographically.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigUint;
use num_traits::One;

use crate::diffop::DiffOp;
use crate::error::Result;
use crate::field::{FieldSpec, Scalar};
use crate::poly::{check_compatible, ExponentVector, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct WeylElement {
    ring_dim: usize,
    field: FieldSpec,
    terms: BTreeMap<ExponentVector, Scalar>,
}

fn join(x: &ExponentVector, d: &ExponentVector) -> ExponentVector {
    let mut e = x.as_slice().to_vec();
    e.extend_from_slice(d.as_slice());
    ExponentVector::new(e)
}

fn split(key: &ExponentVector, n: usize) -> (ExponentVector, ExponentVector) {
    let s = key.as_slice();
    (
        ExponentVector::new(s[..n].to_vec()),
        ExponentVector::new(s[n..].to_vec()),
    )
}

impl WeylElement {
    pub fn zero(ring_dim: usize, field: FieldSpec) -> Self {
        WeylElement {
            ring_dim,
            field,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(ring_dim: usize, field: FieldSpec) -> Self {
        Self::constant(ring_dim, Scalar::one(field))
    }

    pub fn constant(ring_dim: usize, value: Scalar) -> Self {
        let zeros = ExponentVector::zeros(ring_dim);
        Self::monomial(&zeros, &zeros, value)
    }

    /// `c · x^xexp ∂^dexp`.
    pub fn monomial(xexp: &ExponentVector, dexp: &ExponentVector, c: Scalar) -> Self {
        assert_eq!(xexp.len(), dexp.len());
        let mut e = Self::zero(xexp.len(), c.field());
        e.add_term(join(xexp, dexp), c);
        e
    }

    pub fn x(ring_dim: usize, field: FieldSpec, var: usize) -> Result<Self> {
        Polynomial::variable(ring_dim, field, var).map(|p| Self::from_polynomial(&p))
    }

    pub fn d(ring_dim: usize, field: FieldSpec, var: usize) -> Result<Self> {
        DiffOp::partial(ring_dim, field, var).map(|op| Self::from_diffop(&op))
    }

    /// Multiplication by a polynomial, as an element of `A_n(k)`.
    pub fn from_polynomial(p: &Polynomial) -> Self {
        let zeros = ExponentVector::zeros(p.ring_dim());
        let mut e = Self::zero(p.ring_dim(), p.field());
        for (x, c) in p.terms() {
            e.add_term(join(x, &zeros), c.clone());
        }
        e
    }

    pub fn from_diffop(op: &DiffOp) -> Self {
        let zeros = ExponentVector::zeros(op.ring_dim());
        let mut e = Self::zero(op.ring_dim(), op.field());
        for (d, c) in op.terms() {
            e.add_term(join(&zeros, d), c.clone());
        }
        e
    }

    fn add_term(&mut self, key: ExponentVector, c: Scalar) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(key) {
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

    /// Normal-order terms `(α, β, c)` for `c · x^α ∂^β`, leading term first.
    pub fn terms(&self) -> impl Iterator<Item = (ExponentVector, ExponentVector, &Scalar)> + '_ {
        self.terms.iter().rev().map(move |(k, c)| {
            let (x, d) = split(k, self.ring_dim);
            (x, d, c)
        })
    }

    /// Total degree in `x` and `∂` together; `-1` for zero.
    pub fn total_degree(&self) -> i64 {
        self.terms
            .keys()
            .next_back()
            .map_or(-1, |k| k.total() as i64)
    }

    /// The polynomial this element equals, if it involves no `∂`.
    pub fn to_polynomial(&self) -> Option<Polynomial> {
        let mut p = Polynomial::zero(self.ring_dim, self.field);
        for (x, d, c) in self.terms() {
            if !d.is_zero() {
                return None;
            }
            p.add_term(x, c.clone());
        }
        Some(p)
    }

    /// The constant-coefficient operator this element equals, if it involves no `x`.
    pub fn to_diffop(&self) -> Option<DiffOp> {
        let mut p = Polynomial::zero(self.ring_dim, self.field);
        for (x, d, c) in self.terms() {
            if !x.is_zero() {
                return None;
            }
            p.add_term(d, c.clone());
        }
        Some(DiffOp::from_symbol(p))
    }

    pub fn scale(&self, c: &Scalar) -> WeylElement {
        let mut out = Self::zero(self.ring_dim, self.field);
        for (k, v) in &self.terms {
            out.add_term(k.clone(), v * c);
        }
        out
    }

    pub fn try_add(&self, rhs: &WeylElement) -> Result<WeylElement> {
        check_compatible(self.signature(), rhs.signature())?;
        let mut out = self.clone();
        for (k, c) in &rhs.terms {
            out.add_term(k.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn try_sub(&self, rhs: &WeylElement) -> Result<WeylElement> {
        self.try_add(&-rhs)
    }

    /// Product in `A_n(k)`, renormalised with
    /// `∂_i^a x_i^b = Σ_k C(a,k) C(b,k) k! x_i^{b−k} ∂_i^{a−k}` per variable.
    pub fn try_mul(&self, rhs: &WeylElement) -> Result<WeylElement> {
        check_compatible(self.signature(), rhs.signature())?;
        let n = self.ring_dim;
        let mut out = Self::zero(n, self.field);
        for (k1, c1) in &self.terms {
            let (alpha, beta) = split(k1, n);
            for (k2, c2) in &rhs.terms {
                let (gamma, delta) = split(k2, n);
                for (mid_x, mid_d, c) in reorder(&beta, &gamma, &(c1 * c2)) {
                    out.add_term(join(&alpha.add(&mid_x), &mid_d.add(&delta)), c);
                }
            }
        }
        Ok(out)
    }

    pub fn pow(&self, exp: u32) -> WeylElement {
        let mut acc = Self::one(self.ring_dim, self.field);
        for _ in 0..exp {
            acc = &acc * self;
        }
        acc
    }

    /// Module action on `k[x]`: `x^α ∂^β` sends `f` to `x^α (∂^β f)`.
    pub fn act(&self, f: &Polynomial) -> Result<Polynomial> {
        check_compatible(self.signature(), f.signature())?;
        let mut out = Polynomial::zero(self.ring_dim, self.field);
        for (x, d, c) in self.terms() {
            let derived = DiffOp::monomial(d, c.clone()).apply(f)?;
            let shift = Polynomial::monomial(x, Scalar::one(self.field));
            out = &out + &(&shift * &derived);
        }
        Ok(out)
    }

    /// Membership in the left ideal generated by `∂1, ..., ∂n`: no normal-order
    /// term is free of `∂`.
    pub fn in_left_ideal_partials(&self) -> bool {
        self.terms().all(|(_, d, _)| !d.is_zero())
    }

    /// The automorphism `x_i ↦ ∂_i`, `∂_i ↦ −x_i`.
    pub fn fourier_automorphism(&self) -> WeylElement {
        let n = self.ring_dim;
        let zeros = ExponentVector::zeros(n);
        let mut out = Self::zero(n, self.field);
        for (x, d, c) in self.terms() {
            let sign = if d.total() % 2 == 1 { -c } else { c.clone() };
            let left = Self::monomial(&zeros, &x, sign);
            let right = Self::monomial(&d, &zeros, Scalar::one(self.field));
            out = &out + &(&left * &right);
        }
        out
    }

    /// Rewrites the element as `Σ_β ∂^β · g_β(x)`, operators on the left.
    ///
    /// Pairs are returned by descending `β`; each polynomial is non-zero.
    pub fn reorder_partials_left(&self) -> Vec<(DiffOp, Polynomial)> {
        let n = self.ring_dim;
        let zeros = ExponentVector::zeros(n);
        let mut rest = self.clone();
        let mut collected: BTreeMap<ExponentVector, Polynomial> = BTreeMap::new();
        // Each step removes the leading term and only introduces terms of
        // strictly lower total degree.
        while let Some((key, c)) = rest.terms.iter().next_back() {
            let (x, d) = split(key, n);
            let c = c.clone();
            let left = Self::monomial(&zeros, &d, Scalar::one(self.field));
            let right = Self::monomial(&x, &zeros, c.clone());
            rest = &rest - &(&left * &right);
            collected
                .entry(d)
                .or_insert_with(|| Polynomial::zero(n, self.field))
                .add_term(x, c);
        }
        collected
            .into_iter()
            .rev()
            .filter(|(_, p)| !p.is_zero())
            .map(|(d, p)| (DiffOp::monomial(d, Scalar::one(self.field)), p))
            .collect()
    }

    /// Inverse of [`reorder_partials_left`](Self::reorder_partials_left):
    /// multiplies the pairs back and renormalises.
    pub fn from_partials_left(
        ring_dim: usize,
        field: FieldSpec,
        pairs: &[(DiffOp, Polynomial)],
    ) -> Result<WeylElement> {
        let mut out = Self::zero(ring_dim, field);
        for (op, p) in pairs {
            let product = Self::from_diffop(op).try_mul(&Self::from_polynomial(p))?;
            out = out.try_add(&product)?;
        }
        Ok(out)
    }

    fn signature(&self) -> (usize, FieldSpec) {
        (self.ring_dim, self.field)
    }
}

/// Normal form of `c · ∂^beta x^gamma` as a list of `(x-exp, ∂-exp, coeff)`.
fn reorder(
    beta: &ExponentVector,
    gamma: &ExponentVector,
    c: &Scalar,
) -> Vec<(ExponentVector, ExponentVector, Scalar)> {
    let n = beta.len();
    let field = c.field();
    let mut acc = vec![(vec![0u32; n], vec![0u32; n], c.clone())];
    for i in 0..n {
        let (a, b) = (beta[i], gamma[i]);
        if a == 0 || b == 0 {
            for (x, d, _) in acc.iter_mut() {
                x[i] = b;
                d[i] = a;
            }
            continue;
        }
        let mut next = Vec::with_capacity(acc.len() * (a.min(b) as usize + 1));
        for (x, d, v) in &acc {
            for k in 0..=a.min(b) {
                let coeff = v * &Scalar::from_biguint(field, &reorder_coefficient(a, b, k));
                if coeff.is_zero() {
                    continue;
                }
                let mut x = x.clone();
                let mut d = d.clone();
                x[i] = b - k;
                d[i] = a - k;
                next.push((x, d, coeff));
            }
        }
        acc = next;
    }
    acc.into_iter()
        .map(|(x, d, c)| (ExponentVector::new(x), ExponentVector::new(d), c))
        .collect()
}

/// `C(a,k) C(b,k) k!`, as an exact integer.
fn reorder_coefficient(a: u32, b: u32, k: u32) -> BigUint {
    let mut num = BigUint::one();
    // C(a,k) k! = a (a−1) ⋯ (a−k+1)
    for j in 0..k {
        num *= a - j;
    }
    // C(b,k) = b (b−1) ⋯ (b−k+1) / k!
    let mut binom = BigUint::one();
    for j in 0..k {
        binom = binom * (b - j) / (j + 1);
    }
    num * binom
}

/// `Λ^m · g · f^m` as an element of `A_n(k)`.
pub fn gvc_expression_as_weyl(
    op: &DiffOp,
    m: u32,
    g: &Polynomial,
    f: &Polynomial,
) -> Result<WeylElement> {
    check_compatible((op.ring_dim(), op.field()), (g.ring_dim(), g.field()))?;
    check_compatible((g.ring_dim(), g.field()), (f.ring_dim(), f.field()))?;
    let multiplier = WeylElement::from_polynomial(&g.try_mul(&f.pow(m))?);
    WeylElement::from_diffop(&op.pow(m)).try_mul(&multiplier)
}

impl<'a> Add<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;

    fn add(self, rhs: &WeylElement) -> WeylElement {
        self.try_add(rhs).expect("weyl addition")
    }
}

impl<'a> Sub<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;

    fn sub(self, rhs: &WeylElement) -> WeylElement {
        self.try_sub(rhs).expect("weyl subtraction")
    }
}

impl<'a> Mul<&'a WeylElement> for &'a WeylElement {
    type Output = WeylElement;

    fn mul(self, rhs: &WeylElement) -> WeylElement {
        self.try_mul(rhs).expect("weyl multiplication")
    }
}

impl Neg for &WeylElement {
    type Output = WeylElement;

    fn neg(self) -> WeylElement {
        WeylElement {
            ring_dim: self.ring_dim,
            field: self.field,
            terms: self.terms.iter().map(|(k, c)| (k.clone(), -c)).collect(),
        }
    }
}

impl fmt::Display for WeylElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_weyl(
            self,
            &crate::expr::VarLayout::plain(),
        ))
    }
}
