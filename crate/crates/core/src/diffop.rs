//! Differential operators with constant coefficients, `D = k[∂1, ..., ∂n]`.
//!
//! A [`DiffOp`] is stored as its symbol: a polynomial in which variable `i`
//! stands for `∂_{i+1}`. Composition in `D` is therefore ordinary polynomial
//! multiplication of symbols.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{check_compatible, ExponentVector, Polynomial};

#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DiffOp(Polynomial);

impl DiffOp {
    pub fn from_symbol(symbol: Polynomial) -> Self {
        DiffOp(symbol)
    }

    pub fn symbol(&self) -> &Polynomial {
        &self.0
    }

    pub fn into_symbol(self) -> Polynomial {
        self.0
    }

    pub fn zero(ring_dim: usize, field: FieldSpec) -> Self {
        DiffOp(Polynomial::zero(ring_dim, field))
    }

    pub fn identity(ring_dim: usize, field: FieldSpec) -> Self {
        DiffOp(Polynomial::one(ring_dim, field))
    }

    pub fn constant(ring_dim: usize, value: Scalar) -> Self {
        DiffOp(Polynomial::constant(ring_dim, value))
    }

    /// `∂_{var+1}`.
    pub fn partial(ring_dim: usize, field: FieldSpec, var: usize) -> Result<Self> {
        Polynomial::variable(ring_dim, field, var).map(DiffOp)
    }

    /// `coeff · ∂^alpha`.
    pub fn monomial(alpha: ExponentVector, coeff: Scalar) -> Self {
        DiffOp(Polynomial::monomial(alpha, coeff))
    }

    pub fn ring_dim(&self) -> usize {
        self.0.ring_dim()
    }

    pub fn field(&self) -> FieldSpec {
        self.0.field()
    }

    pub fn is_zero(&self) -> bool {
        self.0.is_zero()
    }

    pub fn total_degree(&self) -> i64 {
        self.0.total_degree()
    }

    pub fn constant_term(&self) -> Scalar {
        self.0.constant_term()
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&ExponentVector, &Scalar)> + '_ {
        self.0.terms()
    }

    pub fn scale(&self, c: &Scalar) -> DiffOp {
        DiffOp(self.0.scale(c))
    }

    pub fn pow(&self, exp: u32) -> DiffOp {
        DiffOp(self.0.pow(exp))
    }

    pub fn try_add(&self, rhs: &DiffOp) -> Result<DiffOp> {
        self.0.try_add(&rhs.0).map(DiffOp)
    }

    /// Composition `self ∘ rhs`.
    pub fn try_compose(&self, rhs: &DiffOp) -> Result<DiffOp> {
        self.0.try_mul(&rhs.0).map(DiffOp)
    }

    pub fn embed(&self, dim: usize) -> Result<DiffOp> {
        self.0.embed(dim).map(DiffOp)
    }

    /// `Λ f`.
    pub fn apply(&self, f: &Polynomial) -> Result<Polynomial> {
        check_compatible(self.0.signature(), f.signature())?;
        let field = f.field();
        let mut out = Polynomial::zero(f.ring_dim(), field);
        for (alpha, c) in self.0.term_map() {
            for (beta, c2) in f.term_map() {
                let Some(rest) = beta.checked_sub(alpha) else {
                    continue;
                };
                let mut coeff = c * c2;
                for (&b, &a) in beta.as_slice().iter().zip(alpha.as_slice()) {
                    coeff *= &falling_factorial(field, b, a);
                    if coeff.is_zero() {
                        break;
                    }
                }
                out.add_term(rest, coeff);
            }
        }
        Ok(out)
    }

    /// `Λ^m f`, by iterated application.
    pub fn apply_power(&self, m: u32, f: &Polynomial) -> Result<Polynomial> {
        self.apply_power_with(m, f, PowerStrategy::Iterate)
    }

    pub fn apply_power_with(
        &self,
        m: u32,
        f: &Polynomial,
        strategy: PowerStrategy,
    ) -> Result<Polynomial> {
        check_compatible(self.0.signature(), f.signature())?;
        match strategy {
            PowerStrategy::Iterate => {
                let mut acc = f.clone();
                for _ in 0..m {
                    if acc.is_zero() {
                        break;
                    }
                    acc = self.apply(&acc)?;
                }
                Ok(acc)
            }
            PowerStrategy::Expand => self.pow(m).apply(f),
        }
    }

    /// `[Λ, g] f = Λ(g f) − g (Λ f)`.
    pub fn commutator_action(&self, g: &Polynomial, f: &Polynomial) -> Result<Polynomial> {
        check_compatible(self.0.signature(), g.signature())?;
        let gf = g.try_mul(f)?;
        Ok(&self.apply(&gf)? - &(g * &self.apply(f)?))
    }

    /// Writes `[Λ, g]` as `Σ_t Λ*_t ∘ (g*_t ·)` with `deg g*_t ≤ deg g − 1`.
    ///
    /// Each monomial `∂^α` is handled by the recursion
    /// `[∂^α, g] = ∂_i ∘ [∂^α̂, g] + ∂^α̂ ∘ (g_{x_i} ·) − [∂^α̂, g_{x_i}]`
    /// with `i` the first index where `α_i ≠ 0` and `∂^α = ∂^α̂ ∂_i`.
    /// The result is collected by operator monomial, so every pair has the
    /// shape `(∂^β, h_β)`.
    pub fn commutator_decompose(&self, g: &Polynomial) -> Result<Decomposition> {
        check_compatible(self.0.signature(), g.signature())?;
        let field = g.field();
        let mut acc: Vec<(ExponentVector, Polynomial)> = Vec::new();
        // Iterate monomials in graded-lex order, leading first.
        for (alpha, c) in self.0.terms() {
            for (beta, h) in decompose_monomial(alpha, g)? {
                push_pair(&mut acc, beta, h.scale(c));
            }
        }
        acc.retain(|(_, h)| !h.is_zero());
        acc.sort_by(|a, b| b.0.cmp(&a.0));
        let pairs = acc
            .into_iter()
            .map(|(beta, h)| (DiffOp::monomial(beta, Scalar::one(field)), h))
            .collect();
        Ok(Decomposition {
            pairs,
            degree_bound: g.total_degree() - 1,
        })
    }
}

fn push_pair(acc: &mut Vec<(ExponentVector, Polynomial)>, beta: ExponentVector, h: Polynomial) {
    match acc.iter_mut().find(|(b, _)| *b == beta) {
        Some((_, existing)) => *existing = &*existing + &h,
        None => acc.push((beta, h)),
    }
}

fn decompose_monomial(
    alpha: &ExponentVector,
    g: &Polynomial,
) -> Result<Vec<(ExponentVector, Polynomial)>> {
    let mut out = Vec::new();
    if alpha.is_zero() || g.total_degree() <= 0 {
        return Ok(out);
    }
    let i = alpha.as_slice().iter().position(|&a| a != 0).unwrap();
    let mut hat = alpha.as_slice().to_vec();
    hat[i] -= 1;
    let hat = ExponentVector::new(hat);
    let g_i = g.partial_derivative(i)?;
    let unit_i = ExponentVector::unit(alpha.len(), i);

    for (beta, h) in decompose_monomial(&hat, g)? {
        push_pair(&mut out, beta.add(&unit_i), h);
    }
    if !g_i.is_zero() {
        push_pair(&mut out, hat.clone(), g_i.clone());
        for (beta, h) in decompose_monomial(&hat, &g_i)? {
            push_pair(&mut out, beta, -&h);
        }
    }
    Ok(out)
}

/// `n (n−1) ⋯ (n−k+1)` computed in the field; zero when `k > n`.
pub(crate) fn falling_factorial(field: FieldSpec, n: u32, k: u32) -> Scalar {
    let mut acc = Scalar::one(field);
    if k > n {
        return Scalar::zero(field);
    }
    for j in 0..k {
        acc *= &Scalar::from_i64(field, i64::from(n - j));
        if acc.is_zero() {
            break;
        }
    }
    acc
}

/// How [`DiffOp::apply_power_with`] evaluates `Λ^m f`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub enum PowerStrategy {
    /// Apply `Λ` `m` times.
    Iterate,
    /// Expand the symbol of `Λ^m` first, then apply once.
    Expand,
}

/// A witness that `[Λ, g] f̃` lies in `D_[x]^(r) f̃`: the element
/// `Σ_t op_t ∘ (poly_t ·)`, valid for every `f̃`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Decomposition {
    pub pairs: Vec<(DiffOp, Polynomial)>,
    pub degree_bound: i64,
}

impl Decomposition {
    pub fn is_empty(&self) -> bool {
        self.pairs.is_empty()
    }

    pub fn len(&self) -> usize {
        self.pairs.len()
    }

    /// `Σ_t Λ*_t (g*_t f̃)`.
    pub fn apply_to(&self, f_tilde: &Polynomial) -> Result<Polynomial> {
        let mut out = Polynomial::zero(f_tilde.ring_dim(), f_tilde.field());
        for (op, poly) in &self.pairs {
            out = out.try_add(&op.apply(&poly.try_mul(f_tilde)?)?)?;
        }
        Ok(out)
    }

    /// Every `g*_t` respects `degree_bound`.
    pub fn respects_degree_bound(&self) -> bool {
        self.pairs
            .iter()
            .all(|(_, p)| p.total_degree() <= self.degree_bound)
    }
}

/// Outcome of checking one instance of: `Λ^{m−d} f̃ = 0` and `deg g ≤ d`
/// imply `Λ^m (g f̃) = 0`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Theorem1Report {
    pub hypothesis_holds: bool,
    /// `Λ^m (g f̃) = 0`; computed only when the hypothesis holds.
    pub conclusion_holds: Option<bool>,
    /// `Λ^m(g f̃) = Λ^{m−1}(g (Λ f̃)) + Λ^{m−1}([Λ, g] f̃)`.
    pub split_identity_holds: bool,
    /// `Λ^{m−1}([Λ, g] f̃) = Σ_t Λ*_t (Λ^{m−1}(g*_t f̃))` over the commutator decomposition.
    pub commuted_sum_holds: bool,
}

impl Theorem1Report {
    /// False only when the conclusion failed under a true hypothesis, or one
    /// of the intermediate identities failed.
    pub fn is_sound(&self) -> bool {
        self.conclusion_holds != Some(false) && self.split_identity_holds && self.commuted_sum_holds
    }
}

pub fn verify_theorem1(
    op: &DiffOp,
    f_tilde: &Polynomial,
    g: &Polynomial,
    m: u32,
    d: u32,
) -> Result<Theorem1Report> {
    check_compatible(op.0.signature(), f_tilde.signature())?;
    check_compatible(op.0.signature(), g.signature())?;
    if m < d {
        return Err(Error::Precondition(format!("m = {m} < d = {d}")));
    }
    if g.total_degree() > i64::from(d) {
        return Err(Error::Precondition(format!(
            "deg g = {} exceeds d = {d}",
            g.total_degree()
        )));
    }
    let hypothesis_holds = op.apply_power(m - d, f_tilde)?.is_zero();
    let lhs = op.apply_power(m, &g.try_mul(f_tilde)?)?;
    let conclusion_holds = hypothesis_holds.then(|| lhs.is_zero());

    let (split_identity_holds, commuted_sum_holds) = if m == 0 {
        (true, true)
    } else {
        let first = op.apply_power(m - 1, &(g * &op.apply(f_tilde)?))?;
        let second = op.apply_power(m - 1, &op.commutator_action(g, f_tilde)?)?;
        let split = lhs == &first + &second;
        let decomposition = op.commutator_decompose(g)?;
        let mut commuted = Polynomial::zero(f_tilde.ring_dim(), f_tilde.field());
        for (star, g_star) in &decomposition.pairs {
            let inner = op.apply_power(m - 1, &(g_star * f_tilde))?;
            commuted = &commuted + &star.apply(&inner)?;
        }
        (split, commuted == second)
    };

    Ok(Theorem1Report {
        hypothesis_holds,
        conclusion_holds,
        split_identity_holds,
        commuted_sum_holds,
    })
}

impl<'a> Add<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;

    fn add(self, rhs: &DiffOp) -> DiffOp {
        DiffOp(&self.0 + &rhs.0)
    }
}

impl<'a> Sub<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;

    fn sub(self, rhs: &DiffOp) -> DiffOp {
        DiffOp(&self.0 - &rhs.0)
    }
}

impl<'a> Mul<&'a DiffOp> for &'a DiffOp {
    type Output = DiffOp;

    fn mul(self, rhs: &DiffOp) -> DiffOp {
        DiffOp(&self.0 * &rhs.0)
    }
}

impl Neg for &DiffOp {
    type Output = DiffOp;

    fn neg(self) -> DiffOp {
        DiffOp(-&self.0)
    }
}

impl fmt::Display for DiffOp {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&crate::expr::format_diffop(
            self,
            &crate::expr::VarLayout::plain(),
        ))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn x(dim: usize, i: usize) -> Polynomial {
        Polynomial::variable(dim, Q, i).unwrap()
    }

    fn d(dim: usize, i: usize) -> DiffOp {
        DiffOp::partial(dim, Q, i).unwrap()
    }

    fn c(v: i64) -> Scalar {
        Scalar::from_i64(Q, v)
    }

    #[test]
    fn apply_examples() {
        assert_eq!(
            d(1, 0).apply(&x(1, 0).pow(2)).unwrap(),
            x(1, 0).scale(&c(2))
        );
        let d12 = &d(2, 0) * &d(2, 1);
        assert_eq!(
            d12.apply(&(&x(2, 0) * &x(2, 1))).unwrap(),
            Polynomial::one(2, Q)
        );

        let qi = FieldSpec::GaussianRationals;
        let i = Polynomial::constant(2, Scalar::imaginary_unit(qi).unwrap());
        let z = &Polynomial::variable(2, qi, 0).unwrap()
            + &(&i * &Polynomial::variable(2, qi, 1).unwrap());
        let lap =
            &DiffOp::partial(2, qi, 0).unwrap().pow(2) + &DiffOp::partial(2, qi, 1).unwrap().pow(2);
        assert!(lap.apply(&z.pow(2)).unwrap().is_zero());
    }

    #[test]
    fn power_examples() {
        assert!(d(1, 0).apply_power(3, &x(1, 0).pow(2)).unwrap().is_zero());
        assert_eq!(
            d(1, 0).apply_power(2, &x(1, 0).pow(3)).unwrap(),
            x(1, 0).scale(&c(6))
        );
        let d12 = &d(2, 0) * &d(2, 1);
        for m in 1..=3 {
            assert!(d12.apply_power(m, &x(2, 0).pow(m)).unwrap().is_zero());
        }
        let f = x(1, 0).pow(4);
        assert_eq!(d(1, 0).apply_power(0, &f).unwrap(), f);
        assert!(DiffOp::zero(1, Q).apply(&f).unwrap().is_zero());
    }

    #[test]
    fn strategies_agree() {
        let op = &(&d(2, 0) * &d(2, 1)) + &d(2, 0).scale(&c(3));
        let f = &(&x(2, 0).pow(3) * &x(2, 1)) + &x(2, 1).pow(2);
        for m in 0..5 {
            assert_eq!(
                op.apply_power_with(m, &f, PowerStrategy::Iterate).unwrap(),
                op.apply_power_with(m, &f, PowerStrategy::Expand).unwrap()
            );
        }
    }

    #[test]
    fn commutator_examples() {
        let one = Polynomial::one(1, Q);
        assert_eq!(d(1, 0).commutator_action(&x(1, 0), &one).unwrap(), one);
        let f = &x(2, 0).pow(2) + &x(2, 1);
        assert!(d(2, 0).commutator_action(&x(2, 1), &f).unwrap().is_zero());
        // ∂1²(x1·x1) − x1·∂1²(x1) = 2
        assert_eq!(
            d(1, 0)
                .pow(2)
                .commutator_action(&x(1, 0), &x(1, 0))
                .unwrap(),
            Polynomial::constant(1, c(2))
        );
    }

    #[test]
    fn decompose_examples() {
        let dec = d(1, 0).commutator_decompose(&x(1, 0)).unwrap();
        assert_eq!(
            dec.pairs,
            vec![(DiffOp::identity(1, Q), Polynomial::one(1, Q))]
        );
        assert_eq!(dec.degree_bound, 0);

        let dec = DiffOp::identity(2, Q)
            .commutator_decompose(&x(2, 0))
            .unwrap();
        assert!(dec.is_empty());

        let op = d(1, 0).pow(2);
        let g = x(1, 0).pow(2);
        let dec = op.commutator_decompose(&g).unwrap();
        assert!(dec.respects_degree_bound());
        for k in 0..3 {
            let ft = x(1, 0).pow(k);
            assert_eq!(
                dec.apply_to(&ft).unwrap(),
                op.commutator_action(&g, &ft).unwrap()
            );
        }
    }

    #[test]
    fn theorem1_examples() {
        let x1 = x(2, 0);
        let x2 = x(2, 1);
        let r = verify_theorem1(&d(2, 0), &x1.pow(2), &(&x1 * &x2), 5, 2).unwrap();
        assert!(r.hypothesis_holds);
        assert_eq!(r.conclusion_holds, Some(true));
        assert!(r.is_sound());

        let one = Polynomial::one(2, Q);
        let r = verify_theorem1(&d(2, 1), &x1.pow(3), &one, 1, 0).unwrap();
        assert_eq!((r.hypothesis_holds, r.conclusion_holds), (true, Some(true)));

        let zero = Polynomial::zero(2, Q);
        let r = verify_theorem1(&d(2, 0), &zero, &x1.pow(2), 2, 2).unwrap();
        assert_eq!((r.hypothesis_holds, r.conclusion_holds), (true, Some(true)));

        assert!(verify_theorem1(&d(2, 0), &zero, &x1, 1, 2).is_err());
        assert!(verify_theorem1(&d(2, 0), &zero, &x1.pow(3), 4, 2).is_err());
    }
}
