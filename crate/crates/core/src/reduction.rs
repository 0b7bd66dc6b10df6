//! Reducing an operator to sums of powers of linear forms, and the extended
//! operators in `N` auxiliary variables `y1, ..., yN` that a linear change of
//! coordinates turns into `Σ c_t ∂_{y'_t}^{d_t}` or `∂_{y'_1} ⋯ ∂_{y'_N}`.
//!
//! Extended rings put the `x`-variables at indices `0..n` and the
//! `y`-variables at `n..n+N`.

use num_bigint::BigUint;
use num_integer::Integer;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::{FieldSpec, Scalar};
use crate::poly::{ExponentVector, Matrix, Polynomial};

/// `a_1 ∂1 + ... + a_n ∂n`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct LinearForm {
    field: FieldSpec,
    coeffs: Vec<Scalar>,
}

impl LinearForm {
    pub fn new(field: FieldSpec, coeffs: Vec<Scalar>) -> Result<Self> {
        if let Some(c) = coeffs.iter().find(|c| c.field() != field) {
            return Err(Error::FieldMismatch {
                left: field,
                right: c.field(),
            });
        }
        Ok(LinearForm { field, coeffs })
    }

    pub fn zero(ring_dim: usize, field: FieldSpec) -> Self {
        LinearForm {
            field,
            coeffs: vec![Scalar::zero(field); ring_dim],
        }
    }

    /// Reads a homogeneous operator of degree one (or zero) back as a form.
    pub fn from_diffop(op: &DiffOp) -> Result<Self> {
        let mut form = Self::zero(op.ring_dim(), op.field());
        for (e, c) in op.terms() {
            if e.total() != 1 {
                return Err(Error::Precondition(format!(
                    "operator {op} is not a linear form"
                )));
            }
            let i = e.as_slice().iter().position(|&k| k == 1).unwrap();
            form.coeffs[i] = c.clone();
        }
        Ok(form)
    }

    pub fn ring_dim(&self) -> usize {
        self.coeffs.len()
    }

    pub fn field(&self) -> FieldSpec {
        self.field
    }

    pub fn coeffs(&self) -> &[Scalar] {
        &self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(Scalar::is_zero)
    }

    pub fn to_diffop(&self) -> DiffOp {
        let n = self.ring_dim();
        let terms = self
            .coeffs
            .iter()
            .enumerate()
            .map(|(i, c)| (ExponentVector::unit(n, i), c.clone()));
        DiffOp::from_symbol(Polynomial::from_terms(n, self.field, terms).unwrap())
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSummand {
    pub coeff: Scalar,
    pub form: LinearForm,
    pub degree: u32,
}

/// `Σ_t c_t l_t^{d_t}`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct PowerSumDecomposition {
    pub ring_dim: usize,
    pub field: FieldSpec,
    pub summands: Vec<PowerSummand>,
}

impl PowerSumDecomposition {
    pub fn len(&self) -> usize {
        self.summands.len()
    }

    pub fn is_empty(&self) -> bool {
        self.summands.is_empty()
    }

    pub fn reconstruct(&self) -> DiffOp {
        self.summands
            .iter()
            .fold(DiffOp::zero(self.ring_dim, self.field), |acc, s| {
                &acc + &s.form.to_diffop().pow(s.degree).scale(&s.coeff)
            })
    }
}

/// Writes `∂^alpha` as a combination of `d`-th powers of linear forms, `d = |alpha|`:
///
/// `∂^α = (1/d!) Σ_{∅≠S⊆slots} (−1)^{d−|S|} (Σ_{s∈S} ∂_{var(s)})^d`
///
/// where the slots list variable `i` with multiplicity `α_i`. Subsets giving
/// the same form up to a positive integer multiple are merged. The zero multi-index gives an empty result.
pub fn polarize_monomial(
    alpha: &ExponentVector,
    field: FieldSpec,
) -> Result<PowerSumDecomposition> {
    let n = alpha.len();
    let degree = alpha.total();
    let mut psd = PowerSumDecomposition {
        ring_dim: n,
        field,
        summands: Vec::new(),
    };
    if degree == 0 {
        return Ok(psd);
    }
    if degree > 24 {
        return Err(Error::Precondition(format!(
            "polarizing degree {degree} would need 2^{degree} subsets"
        )));
    }
    let d = degree as usize;
    if !field.inverts_factorials_up_to(d) {
        return Err(Error::CharacteristicTooSmall {
            characteristic: field.characteristic(),
            degree: d,
        });
    }
    let slots: Vec<usize> = (0..n)
        .flat_map(|i| std::iter::repeat_n(i, alpha[i] as usize))
        .collect();
    let factorial: BigUint = (1..=d as u64).product();
    let inv_factorial = Scalar::from_biguint(field, &factorial).inv()?;

    // Merge equal subset-forms: a form is determined by how many slots of each
    // variable the subset picks.
    let mut merged: Vec<(Vec<u32>, Scalar)> = Vec::new();
    for mask in 1u32..(1 << d) {
        let mut counts = vec![0u32; n];
        for (s, &var) in slots.iter().enumerate() {
            if mask & (1 << s) != 0 {
                counts[var] += 1;
            }
        }
        let size = mask.count_ones() as usize;
        let sign = if (d - size).is_multiple_of(2) { 1 } else { -1 };
        // (k·l)^d = k^d·l^d: keep only the primitive form
        let k = counts.iter().fold(0u32, |acc, &c| acc.gcd(&c));
        counts.iter_mut().for_each(|c| *c /= k);
        let c = Scalar::from_i64(field, sign)
            * Scalar::from_biguint(field, &BigUint::from(k).pow(d as u32));
        match merged.iter_mut().find(|(k, _)| *k == counts) {
            Some((_, acc)) => *acc += &c,
            None => merged.push((counts, c)),
        }
    }
    for (counts, c) in merged {
        let coeff = &c * &inv_factorial;
        if coeff.is_zero() {
            continue;
        }
        let coeffs = counts
            .iter()
            .map(|&k| Scalar::from_i64(field, i64::from(k)))
            .collect();
        psd.summands.push(PowerSummand {
            coeff,
            form: LinearForm { field, coeffs },
            degree: degree as u32,
        });
    }
    Ok(psd)
}

/// Concatenates the polarizations of the monomials of `op`, scaled by their
/// coefficients. A constant term becomes a single degree-0 summand.
pub fn decompose_power_sums(op: &DiffOp) -> Result<PowerSumDecomposition> {
    let (n, field) = (op.ring_dim(), op.field());
    let degree = op.total_degree().max(0) as usize;
    if !field.inverts_factorials_up_to(degree) {
        return Err(Error::CharacteristicTooSmall {
            characteristic: field.characteristic(),
            degree,
        });
    }
    let mut out = PowerSumDecomposition {
        ring_dim: n,
        field,
        summands: Vec::new(),
    };
    for (alpha, c) in op.terms() {
        if alpha.is_zero() {
            out.summands.push(PowerSummand {
                coeff: c.clone(),
                form: LinearForm::zero(n, field),
                degree: 0,
            });
            continue;
        }
        for s in polarize_monomial(alpha, field)?.summands {
            out.summands.push(PowerSummand {
                coeff: &s.coeff * c,
                ..s
            });
        }
    }
    Ok(out)
}

/// `k[x1..xn, y1..yN]` together with the change of coordinates
/// `x'_i = x_i − Σ_j a_{ji} y_j`, `y'_j = y_j`.
///
/// `substitution` has the linear form of the new coordinate `j` (in the old
/// variables) as its column `j`, so `substitute_linear(h, substitution)`
/// rewrites a polynomial given in primed coordinates in terms of the old ones.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ExtendedRing {
    pub n: usize,
    pub big_n: usize,
    pub substitution: Matrix,
}

impl ExtendedRing {
    fn from_forms<'a>(
        n: usize,
        field: FieldSpec,
        forms: impl ExactSizeIterator<Item = &'a LinearForm>,
    ) -> Self {
        let big_n = forms.len();
        let dim = n + big_n;
        let mut m = Matrix::identity(dim, field);
        for (j, form) in forms.enumerate() {
            for (i, a) in form.coeffs().iter().enumerate() {
                m.set(n + j, i, -a);
            }
        }
        ExtendedRing {
            n,
            big_n,
            substitution: m,
        }
    }

    pub fn dim(&self) -> usize {
        self.n + self.big_n
    }

    pub fn field(&self) -> FieldSpec {
        self.substitution.field()
    }

    /// Index of `y_{j+1}` in the extended ring.
    pub fn y_index(&self, j: usize) -> usize {
        self.n + j
    }

    /// The new coordinate `z'_j` as a polynomial in the old variables.
    pub fn new_coordinate(&self, j: usize) -> Result<Polynomial> {
        Polynomial::variable(self.dim(), self.field(), j)?
            .substitute_linear(&self.substitution, self.dim())
    }

    /// Rewrites an old-coordinate polynomial in the primed coordinates.
    pub fn polynomial_to_new(&self, f: &Polynomial) -> Result<Polynomial> {
        f.substitute_linear(&self.substitution.inverse()?, self.dim())
    }

    /// Rewrites a primed-coordinate polynomial in the old coordinates.
    pub fn polynomial_to_old(&self, h: &Polynomial) -> Result<Polynomial> {
        h.substitute_linear(&self.substitution, self.dim())
    }

    /// The operator acting on primed coordinates that agrees with `op`.
    pub fn diffop_to_new(&self, op: &DiffOp) -> Result<DiffOp> {
        transform_diffop(op, &self.substitution.inverse()?)
    }

    /// `∂_{y'_{j+1}}` in the extended ring.
    pub fn partial_y(&self, j: usize) -> Result<DiffOp> {
        DiffOp::partial(self.dim(), self.field(), self.y_index(j))
    }
}

fn y_shifted_form(form: &LinearForm, ring: &ExtendedRing, j: usize) -> Result<DiffOp> {
    let l = form.to_diffop().embed(ring.dim())?;
    Ok(&l + &ring.partial_y(j)?)
}

/// `Λ* = Σ_t c_t (∂_{y_t} + l_t)^{d_t}` and its coordinate change.
pub fn build_extended_operator(psd: &PowerSumDecomposition) -> Result<(DiffOp, ExtendedRing)> {
    if psd.is_empty() {
        return Err(Error::Precondition("empty power-sum decomposition".into()));
    }
    let ring = ExtendedRing::from_forms(
        psd.ring_dim,
        psd.field,
        psd.summands.iter().map(|s| &s.form),
    );
    let mut op = DiffOp::zero(ring.dim(), psd.field);
    for (j, s) in psd.summands.iter().enumerate() {
        let shifted = y_shifted_form(&s.form, &ring, j)?;
        op = &op + &shifted.pow(s.degree).scale(&s.coeff);
    }
    Ok((op, ring))
}

/// `Σ_t c_t ∂_{y'_t}^{d_t}`, the shape `Λ*` takes after the coordinate change.
pub fn diagonal_target(psd: &PowerSumDecomposition, ring: &ExtendedRing) -> Result<DiffOp> {
    let mut op = DiffOp::zero(ring.dim(), ring.field());
    for (j, s) in psd.summands.iter().enumerate() {
        op = &op + &ring.partial_y(j)?.pow(s.degree).scale(&s.coeff);
    }
    Ok(op)
}

/// `Λ* = (∂_{y_1} + l_1) ⋯ (∂_{y_N} + l_N)` and its coordinate change.
pub fn build_extended_product(forms: &[LinearForm]) -> Result<(DiffOp, ExtendedRing)> {
    let first = forms
        .first()
        .ok_or_else(|| Error::Precondition("empty list of linear forms".into()))?;
    let (n, field) = (first.ring_dim(), first.field());
    for form in forms {
        if form.is_zero() {
            return Err(Error::ZeroLinearForm);
        }
        if form.ring_dim() != n {
            return Err(Error::DimensionMismatch {
                left: n,
                right: form.ring_dim(),
            });
        }
        if form.field() != field {
            return Err(Error::FieldMismatch {
                left: field,
                right: form.field(),
            });
        }
    }
    let ring = ExtendedRing::from_forms(n, field, forms.iter());
    let mut op = DiffOp::identity(ring.dim(), field);
    for (j, form) in forms.iter().enumerate() {
        op = &op * &y_shifted_form(form, &ring, j)?;
    }
    Ok((op, ring))
}

/// `∂_{y'_1} ⋯ ∂_{y'_N}`.
pub fn product_target(ring: &ExtendedRing) -> Result<DiffOp> {
    (0..ring.big_n).try_fold(DiffOp::identity(ring.dim(), ring.field()), |acc, j| {
        Ok(&acc * &ring.partial_y(j)?)
    })
}

/// The operator `L'` with `L'(f ∘ M) = (L f) ∘ M`, where `f ∘ M` denotes
/// `substitute_linear(f, M)`. Each `∂_j` becomes `Σ_k (M⁻¹)_{jk} ∂_k`.
pub fn transform_diffop(op: &DiffOp, m: &Matrix) -> Result<DiffOp> {
    let inv = m.inverse()?;
    op.symbol()
        .substitute_linear(&inv.transpose(), m.dim())
        .map(DiffOp::from_symbol)
}

/// Checks `Λ* f = Λ f` for an `x`-only `f`, both sides in the extended ring.
///
/// `f` may be given in the base ring or in the extended ring; in the latter
/// case it must not involve any `y`.
pub fn extension_preserves_x_action(
    op: &DiffOp,
    extended: &DiffOp,
    f: &Polynomial,
) -> Result<bool> {
    extension_preserves_power_action(op, extended, 1, f)
}

/// Checks `(Λ*)^m h = Λ^m h` for an `x`-only `h`.
pub fn extension_preserves_power_action(
    op: &DiffOp,
    extended: &DiffOp,
    m: u32,
    h: &Polynomial,
) -> Result<bool> {
    let n = op.ring_dim();
    let dim = extended.ring_dim();
    if dim < n {
        return Err(Error::DimensionMismatch {
            left: n,
            right: dim,
        });
    }
    let base = if h.ring_dim() == n {
        h.clone()
    } else {
        h.restrict(n)?
    };
    let lhs = extended.apply_power(m, &base.embed(dim)?)?;
    let rhs = op.apply_power(m, &base)?.embed(dim)?;
    Ok(lhs == rhs)
}

#[cfg(test)]
mod tests {
    use super::*;

    const Q: FieldSpec = FieldSpec::Rationals;

    fn q(n: i64, d: i64) -> Scalar {
        Scalar::from_ratio(Q, &n.into(), &d.into()).unwrap()
    }

    fn d(n: usize, i: usize) -> DiffOp {
        DiffOp::partial(n, Q, i).unwrap()
    }

    fn form(coeffs: &[i64]) -> LinearForm {
        LinearForm::new(Q, coeffs.iter().map(|&c| q(c, 1)).collect()).unwrap()
    }

    #[test]
    fn polarize_mixed_pair() {
        let psd = polarize_monomial(&ExponentVector::new(vec![1, 1]), Q).unwrap();
        assert_eq!(psd.len(), 3);
        assert_eq!(psd.reconstruct(), &d(2, 0) * &d(2, 1));
        let coeffs: Vec<_> = psd
            .summands
            .iter()
            .map(|s| (s.form.clone(), s.coeff.clone()))
            .collect();
        assert!(coeffs.contains(&(form(&[1, 1]), q(1, 2))));
        assert!(coeffs.contains(&(form(&[1, 0]), q(-1, 2))));
        assert!(coeffs.contains(&(form(&[0, 1]), q(-1, 2))));
    }

    #[test]
    fn polarize_pure_power_merges() {
        let psd = polarize_monomial(&ExponentVector::new(vec![2, 0]), Q).unwrap();
        assert_eq!(psd.summands.len(), 1);
        assert_eq!(psd.summands[0].form, form(&[1, 0]));
        assert_eq!(psd.summands[0].coeff, q(1, 1));
    }

    #[test]
    fn polarize_triple() {
        let psd = polarize_monomial(&ExponentVector::new(vec![1, 1, 1]), Q).unwrap();
        assert_eq!(psd.len(), 7);
        for s in &psd.summands {
            let size = s.form.coeffs().iter().filter(|c| !c.is_zero()).count() as i64;
            let sign = if (3 - size) % 2 == 0 { 1 } else { -1 };
            assert_eq!(s.coeff, q(sign, 6));
        }
        assert_eq!(psd.reconstruct(), &(&d(3, 0) * &d(3, 1)) * &d(3, 2));
    }

    #[test]
    fn polarize_errors() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        assert!(matches!(
            polarize_monomial(&ExponentVector::new(vec![2, 1]), f3),
            Err(Error::CharacteristicTooSmall { .. })
        ));
        assert!(polarize_monomial(&ExponentVector::new(vec![0, 0]), Q)
            .unwrap()
            .is_empty());
    }

    #[test]
    fn power_sum_examples() {
        let lap = &d(2, 0).pow(2) + &d(2, 1).pow(2);
        let psd = decompose_power_sums(&lap).unwrap();
        assert_eq!(psd.len(), 2);
        assert_eq!(
            psd.summands[0],
            PowerSummand {
                coeff: q(1, 1),
                form: form(&[1, 0]),
                degree: 2
            }
        );
        assert_eq!(
            psd.summands[1],
            PowerSummand {
                coeff: q(1, 1),
                form: form(&[0, 1]),
                degree: 2
            }
        );

        let psd = decompose_power_sums(&d(1, 0).pow(3).scale(&q(2, 1))).unwrap();
        assert_eq!(
            psd.summands,
            vec![PowerSummand {
                coeff: q(2, 1),
                form: form(&[1]),
                degree: 3
            }]
        );

        let c = DiffOp::constant(2, q(5, 1));
        let psd = decompose_power_sums(&c).unwrap();
        assert_eq!(psd.summands.len(), 1);
        assert_eq!(psd.summands[0].degree, 0);
        assert_eq!(psd.reconstruct(), c);
    }

    #[test]
    fn extended_operator_two_summands() {
        let psd = PowerSumDecomposition {
            ring_dim: 2,
            field: Q,
            summands: vec![
                PowerSummand {
                    coeff: q(1, 1),
                    form: form(&[1, 0]),
                    degree: 1,
                },
                PowerSummand {
                    coeff: q(1, 1),
                    form: form(&[0, 1]),
                    degree: 1,
                },
            ],
        };
        let (op, ring) = build_extended_operator(&psd).unwrap();
        let expected = &(&d(4, 2) + &d(4, 0)) + &(&d(4, 3) + &d(4, 1));
        assert_eq!(op, expected);
        let x = |i| Polynomial::variable(4, Q, i).unwrap();
        assert_eq!(ring.new_coordinate(0).unwrap(), &x(0) - &x(2));
        assert_eq!(ring.new_coordinate(1).unwrap(), &x(1) - &x(3));
        assert_eq!(ring.new_coordinate(2).unwrap(), x(2));
        assert_eq!(
            ring.diffop_to_new(&op).unwrap(),
            diagonal_target(&psd, &ring).unwrap()
        );
    }

    #[test]
    fn shifted_forms_kill_new_x_coordinates() {
        let psd = decompose_power_sums(&(&d(2, 0) * &d(2, 1))).unwrap();
        let (_, ring) = build_extended_operator(&psd).unwrap();
        for (j, s) in psd.summands.iter().enumerate() {
            let shifted = y_shifted_form(&s.form, &ring, j).unwrap();
            for i in 0..ring.n {
                assert!(shifted
                    .apply(&ring.new_coordinate(i).unwrap())
                    .unwrap()
                    .is_zero());
            }
            for t in 0..ring.big_n {
                let value = shifted
                    .apply(&ring.new_coordinate(ring.y_index(t)).unwrap())
                    .unwrap();
                let expected = if t == j { 1 } else { 0 };
                assert_eq!(value, Polynomial::constant(ring.dim(), q(expected, 1)));
            }
        }
    }

    #[test]
    fn single_square_summand() {
        let psd = PowerSumDecomposition {
            ring_dim: 1,
            field: Q,
            summands: vec![PowerSummand {
                coeff: q(1, 1),
                form: form(&[1]),
                degree: 2,
            }],
        };
        let (op, ring) = build_extended_operator(&psd).unwrap();
        assert_eq!(op, (&d(2, 1) + &d(2, 0)).pow(2));
        let x = |i| Polynomial::variable(2, Q, i).unwrap();
        assert_eq!(ring.new_coordinate(0).unwrap(), &x(0) - &x(1));
    }

    #[test]
    fn extended_products() {
        let (op, ring) = build_extended_product(&[form(&[1, 0]), form(&[0, 1])]).unwrap();
        assert_eq!(op, &(&d(4, 2) + &d(4, 0)) * &(&d(4, 3) + &d(4, 1)));
        assert_eq!(ring.diffop_to_new(&op).unwrap(), &d(4, 2) * &d(4, 3));
        assert_eq!(
            ring.diffop_to_new(&op).unwrap(),
            product_target(&ring).unwrap()
        );

        let (op, _) = build_extended_product(&[form(&[1])]).unwrap();
        assert_eq!(op, &d(2, 1) + &d(2, 0));

        assert_eq!(
            build_extended_product(&[form(&[1, 0]), form(&[0, 0])]),
            Err(Error::ZeroLinearForm)
        );
    }

    #[test]
    fn transform_examples() {
        assert_eq!(
            transform_diffop(&d(1, 0), &Matrix::identity(1, Q)).unwrap(),
            d(1, 0)
        );
        // n = N = 1, a = 1: ∂_y + ∂_x becomes ∂_{y'}
        let (op, ring) = build_extended_product(&[form(&[1])]).unwrap();
        assert_eq!(ring.diffop_to_new(&op).unwrap(), d(2, 1));
        let singular = Matrix::from_rows(Q, vec![vec![q(0, 1)]]).unwrap();
        assert_eq!(
            transform_diffop(&d(1, 0), &singular),
            Err(Error::SingularMatrix(Q))
        );
    }

    #[test]
    fn transport_examples() {
        let x = |i| Polynomial::variable(2, Q, i).unwrap();
        let op = &d(2, 0) * &d(2, 1);
        let (star, _) = build_extended_product(&[form(&[1, 0]), form(&[0, 1])]).unwrap();
        assert!(extension_preserves_x_action(&op, &star, &x(0).pow(3)).unwrap());
        assert!(extension_preserves_x_action(&op, &star, &Polynomial::one(2, Q)).unwrap());

        let lap = &d(2, 0).pow(2) + &d(2, 1).pow(2);
        let (star, _) = build_extended_operator(&decompose_power_sums(&lap).unwrap()).unwrap();
        assert!(extension_preserves_x_action(&lap, &star, &(&x(0) * &x(1))).unwrap());

        let with_y = Polynomial::variable(4, Q, 3).unwrap();
        assert!(extension_preserves_x_action(&lap, &star, &with_y).is_err());
    }
}
