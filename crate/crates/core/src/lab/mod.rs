//! Experiments on instances of the Generalized Vanishing Conjecture: if
//! `Λ^m f^m = 0` for all `m ≥ 1`, then `Λ^m (g f^m) = 0` for all large `m`.
//!
//! Everything here works up to an explicit bound `M`; nothing certifies
//! vanishing beyond it.

pub mod random;
mod report;
pub mod suite;

use rand::SeedableRng;
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;

use crate::diffop::DiffOp;
use crate::error::{Error, Result};
use crate::field::FieldSpec;
use crate::poly::{check_compatible, Polynomial};
use crate::reduction::{build_extended_product, product_target, LinearForm};
use crate::weyl::gvc_expression_as_weyl;

pub use report::{
    run_experiment, ExperimentConfig, ExperimentError, ExperimentMode, GvcReport, PerM,
    DEFAULT_BOUND, VERSION,
};

/// Entry `m − 1` is whether `Λ^m f^m = 0`, for `m = 1..=bound`.
pub fn check_hypothesis(op: &DiffOp, f: &Polynomial, bound: u32) -> Result<Vec<bool>> {
    check_compatible((op.ring_dim(), op.field()), (f.ring_dim(), f.field()))?;
    if bound == 0 {
        return Err(Error::Precondition("bound M must be at least 1".into()));
    }
    (1..=bound)
        .into_par_iter()
        .map(|m| Ok(op.apply_power(m, &f.pow(m))?.is_zero()))
        .collect()
}

/// Smallest `m0 ≤ M` with every entry from `m0` through `M` true.
pub fn stabilization_index(per_m: &[PerM]) -> Option<u32> {
    let mut index = None;
    for entry in per_m.iter().rev() {
        match entry.conclusion {
            Some(true) => index = Some(entry.m),
            _ => break,
        }
    }
    index
}

fn conclusion_notes(per_m: &[PerM], notes: &mut Vec<String>) {
    if let Some(first) = per_m.iter().find(|e| e.hypothesis == Some(false)) {
        notes.push(format!(
            "hypothesis fails at m = {}; conclusion entries are vacuous",
            first.m
        ));
    }
    let conclusions: Vec<bool> = per_m.iter().filter_map(|e| e.conclusion).collect();
    if conclusions.windows(2).any(|w| w[0] && !w[1]) {
        notes.push("conclusion is not monotone in m on this instance".into());
    }
}

/// Per-`m` hypothesis and conclusion `Λ^m (g f^m) = 0` for `m = 1..=bound`.
pub fn find_stabilization(
    op: &DiffOp,
    f: &Polynomial,
    g: &Polynomial,
    bound: u32,
) -> Result<GvcReport> {
    check_compatible((f.ring_dim(), f.field()), (g.ring_dim(), g.field()))?;
    let hypothesis = check_hypothesis(op, f, bound)?;
    let conclusion: Vec<bool> = (1..=bound)
        .into_par_iter()
        .map(|m| Ok(op.apply_power(m, &(g * &f.pow(m)))?.is_zero()))
        .collect::<Result<_>>()?;
    let per_m: Vec<PerM> = (1..=bound)
        .zip(hypothesis.iter().zip(&conclusion))
        .map(|(m, (&h, &c))| PerM {
            m,
            hypothesis: Some(h),
            conclusion: Some(c),
        })
        .collect();
    let mut report = GvcReport::new(f.field(), per_m);
    conclusion_notes(&report.per_m, &mut report.notes);
    report
        .notes
        .push(format!("vanishing is only checked for m ≤ {bound}"));
    Ok(report)
}

/// Conclusion entries are `Λ^m f^{m+d} = 0`; cross-checked against
/// [`find_stabilization`] with `g = f^d`.
pub fn corollary1_instance(op: &DiffOp, f: &Polynomial, d: u32, bound: u32) -> Result<GvcReport> {
    if d == 0 {
        return Err(Error::Precondition("d must be at least 1".into()));
    }
    let hypothesis = check_hypothesis(op, f, bound)?;
    let conclusion: Vec<bool> = (1..=bound)
        .into_par_iter()
        .map(|m| Ok(op.apply_power(m, &f.pow(m + d))?.is_zero()))
        .collect::<Result<_>>()?;
    let per_m: Vec<PerM> = (1..=bound)
        .zip(hypothesis.iter().zip(&conclusion))
        .map(|(m, (&h, &c))| PerM {
            m,
            hypothesis: Some(h),
            conclusion: Some(c),
        })
        .collect();
    let mut report = GvcReport::new(f.field(), per_m);
    conclusion_notes(&report.per_m, &mut report.notes);

    let cross = find_stabilization(op, f, &f.pow(d), bound)?;
    let same = cross
        .per_m
        .iter()
        .zip(&report.per_m)
        .all(|(a, b)| a.conclusion == b.conclusion);
    if same {
        report
            .notes
            .push(format!("agrees with g = f^{d} for every m"));
    } else {
        report.violation(format!("Λ^m f^(m+{d}) disagrees with Λ^m (f^{d} f^m)"));
    }
    Ok(report)
}

/// Runs [`find_stabilization`] for `Λ = l_1 ⋯ l_N` and repeats every
/// conclusion through `(∂_{y1} + l_1) ⋯ (∂_{yN} + l_N)` in the primed
/// coordinates, where it becomes `∂_{y'_1} ⋯ ∂_{y'_N}`. Both routes must give
/// the same polynomial for every `m`.
pub fn theorem3_family_check(
    forms: &[LinearForm],
    f: &Polynomial,
    g: &Polynomial,
    bound: u32,
) -> Result<GvcReport> {
    let (extended, ring) = build_extended_product(forms)?;
    let op = forms
        .iter()
        .fold(DiffOp::identity(f.ring_dim(), f.field()), |acc, l| {
            &acc * &l.to_diffop()
        });
    let mut report = find_stabilization(&op, f, g, bound)?;

    let transformed = ring.diffop_to_new(&extended)?;
    if transformed != product_target(&ring)? {
        report.violation("coordinate change does not produce ∂y'1⋯∂y'N".into());
    }
    let mismatches: Vec<u32> = (1..=bound)
        .into_par_iter()
        .map(|m| -> Result<Option<u32>> {
            let h = g * &f.pow(m);
            let direct = op.apply_power(m, &h)?.embed(ring.dim())?;
            let primed = ring.polynomial_to_new(&h.embed(ring.dim())?)?;
            let routed = ring.polynomial_to_old(&transformed.apply_power(m, &primed)?)?;
            Ok((direct != routed).then_some(m))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    if mismatches.is_empty() {
        report.notes.push(format!(
            "extended-coordinate route agrees for m = 1..={bound}"
        ));
    } else {
        report.violation(format!(
            "extended-coordinate route disagrees at m = {mismatches:?}"
        ));
    }
    Ok(report)
}

/// Outcome of [`frobenius_vanishing_check`].
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FrobeniusOutcome {
    pub checked: usize,
    pub failures: Vec<String>,
}

impl FrobeniusOutcome {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

/// Over `F_p`, `Λ^p g = 0` whenever `Λ` has no constant term. Checks the given
/// pair and `samples` random pairs drawn from `seed`.
pub fn frobenius_vanishing_check(
    op: &DiffOp,
    g: &Polynomial,
    samples: usize,
    seed: u64,
) -> Result<FrobeniusOutcome> {
    let field = op.field();
    let p = match field {
        FieldSpec::PrimeField(p) => p.get(),
        other => {
            return Err(Error::Precondition(format!(
                "characteristic-p check needs a prime field, got {other}"
            )))
        }
    };
    if !op.constant_term().is_zero() {
        return Err(Error::Precondition("operator has a constant term".into()));
    }
    check_compatible((op.ring_dim(), field), (g.ring_dim(), g.field()))?;
    let p =
        u32::try_from(p).map_err(|_| Error::Precondition("prime too large to iterate".into()))?;

    let mut rng = ChaCha8Rng::seed_from_u64(seed);
    let mut pairs = vec![(op.clone(), g.clone())];
    for _ in 0..samples {
        let dim = op.ring_dim();
        let mut l = random::diffop(&mut rng, dim, field, 3, 4);
        l = &l - &DiffOp::constant(dim, l.constant_term());
        let h = random::polynomial(&mut rng, dim, field, 2 * p as usize + 2, 5);
        pairs.push((l, h));
    }
    let failures = pairs
        .par_iter()
        .map(|(l, h)| -> Result<Option<String>> {
            let out = l.apply_power(p, h)?;
            Ok((!out.is_zero()).then(|| format!("Λ = {l}, g = {h}: Λ^{p} g = {out}")))
        })
        .collect::<Result<Vec<_>>>()?
        .into_iter()
        .flatten()
        .collect();
    Ok(FrobeniusOutcome {
        checked: pairs.len(),
        failures,
    })
}

/// `Λ^m (g f^m) = 0` read as a polynomial identity and as membership of
/// `Λ^m g f^m` in the left ideal `A_n(k)·(∂1, ..., ∂n)`.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct SemanticsComparison {
    pub action_zero: bool,
    pub ideal_member: bool,
}

impl SemanticsComparison {
    pub fn agree(&self) -> bool {
        self.action_zero == self.ideal_member
    }
}

pub fn weyl_semantics_compare(
    op: &DiffOp,
    m: u32,
    g: &Polynomial,
    f: &Polynomial,
) -> Result<SemanticsComparison> {
    check_compatible((op.ring_dim(), op.field()), (f.ring_dim(), f.field()))?;
    let action_zero = op.apply_power(m, &(g.try_mul(&f.pow(m))?))?.is_zero();
    let ideal_member = gvc_expression_as_weyl(op, m, g, f)?.in_left_ideal_partials();
    Ok(SemanticsComparison {
        action_zero,
        ideal_member,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::expr::{parse_diffop, parse_polynomial, ParseContext};

    fn ctx(field: FieldSpec) -> ParseContext {
        ParseContext::new(field, 2)
    }

    fn op(text: &str, field: FieldSpec) -> DiffOp {
        parse_diffop(text, &ctx(field)).unwrap()
    }

    fn poly(text: &str, field: FieldSpec) -> Polynomial {
        parse_polynomial(text, &ctx(field)).unwrap()
    }

    const Q: FieldSpec = FieldSpec::Rationals;
    const QI: FieldSpec = FieldSpec::GaussianRationals;

    #[test]
    fn hypothesis_examples() {
        assert!(check_hypothesis(&op("dx1*dx2", Q), &poly("x1", Q), 5)
            .unwrap()
            .iter()
            .all(|&b| b));
        assert!(!check_hypothesis(&op("dx1", Q), &poly("x1", Q), 3).unwrap()[0]);
        assert!(
            check_hypothesis(&op("dx1^2 + dx2^2", QI), &poly("x1 + i*x2", QI), 5)
                .unwrap()
                .iter()
                .all(|&b| b)
        );
        assert!(check_hypothesis(&op("dx1", Q), &poly("x1", Q), 0).is_err());
    }

    #[test]
    fn stabilization_examples() {
        let r = find_stabilization(&op("dx1*dx2", Q), &poly("x1", Q), &poly("x2^3", Q), 8).unwrap();
        let conclusions: Vec<bool> = r.per_m.iter().map(|e| e.conclusion.unwrap()).collect();
        assert_eq!(
            conclusions,
            [false, false, false, true, true, true, true, true]
        );
        assert_eq!(r.stabilization_index, Some(4));

        let r = find_stabilization(&op("dx1*dx2", Q), &poly("x1", Q), &poly("1", Q), 5).unwrap();
        assert_eq!(r.stabilization_index, Some(1));

        let r = find_stabilization(
            &op("dx1^2 + dx2^2", QI),
            &poly("x1 + i*x2", QI),
            &poly("x1", QI),
            6,
        )
        .unwrap();
        assert_eq!(r.stabilization_index, Some(2));
        assert!(r.violations.is_empty());
    }

    #[test]
    fn vacuous_conclusions_are_labelled() {
        let r = find_stabilization(&op("dx1", Q), &poly("x1", Q), &poly("1", Q), 3).unwrap();
        assert!(r.notes.iter().any(|n| n.contains("vacuous")));
        assert_eq!(r.per_m[0].hypothesis, Some(false));
    }

    #[test]
    fn corollary1_examples() {
        let r = corollary1_instance(&op("dx1*dx2", Q), &poly("x1", Q), 3, 6).unwrap();
        assert!(r.per_m.iter().all(|e| e.conclusion == Some(true)));
        assert!(r.violations.is_empty());
        let r =
            corollary1_instance(&op("dx1^2 + dx2^2", QI), &poly("x1 + i*x2", QI), 1, 6).unwrap();
        assert!(r.per_m.iter().all(|e| e.conclusion == Some(true)));
        assert!(corollary1_instance(&op("dx1", Q), &poly("x1", Q), 0, 3).is_err());
    }

    #[test]
    fn theorem3_examples() {
        let forms = crate::expr::parse_linear_factors("dx1*dx2", &ctx(Q)).unwrap();
        let r = theorem3_family_check(&forms, &poly("x1", Q), &poly("x2^3", Q), 8).unwrap();
        assert_eq!(r.stabilization_index, Some(4));
        assert!(r.violations.is_empty(), "{:?}", r.violations);

        // Λ = ∂1 and f = x2: stabilises once m exceeds deg_{x1} g = 2.
        let forms = crate::expr::parse_linear_factors("dx1", &ctx(Q)).unwrap();
        let r = theorem3_family_check(&forms, &poly("x2", Q), &poly("x1^2*x2 + x1", Q), 6).unwrap();
        assert_eq!(r.stabilization_index, Some(3));
        assert!(r.violations.is_empty());

        let forms = crate::expr::parse_linear_factors("(dx1 - dx2)*(dx1 + dx2)", &ctx(Q)).unwrap();
        let r = theorem3_family_check(&forms, &poly("x1 + x2", Q), &poly("x1", Q), 6).unwrap();
        assert!(r.per_m.iter().all(|e| e.hypothesis == Some(true)));
        assert!(r.stabilization_index.is_some());
        assert!(r.violations.is_empty());
    }

    #[test]
    fn frobenius_examples() {
        let f3 = FieldSpec::prime_field(3).unwrap();
        let c1 = ParseContext::new(f3, 1);
        let l = parse_diffop("dx1", &c1).unwrap();
        let g = parse_polynomial("x1^5", &c1).unwrap();
        assert!(l.apply_power(3, &g).unwrap().is_zero());
        assert!(frobenius_vanishing_check(&l, &g, 10, 1).unwrap().passed());

        let f2 = FieldSpec::prime_field(2).unwrap();
        let r = frobenius_vanishing_check(&op("dx1 + dx2", f2), &poly("x1*x2", f2), 10, 2).unwrap();
        assert!(r.passed());
        assert_eq!(r.checked, 11);

        let f5 = FieldSpec::prime_field(5).unwrap();
        assert!(
            frobenius_vanishing_check(&op("dx1^2", f5), &poly("x1^3", f5), 0, 3)
                .unwrap()
                .passed()
        );

        assert!(frobenius_vanishing_check(&op("dx1 + 1", f5), &poly("x1", f5), 0, 0).is_err());
        assert!(frobenius_vanishing_check(&op("dx1", Q), &poly("x1", Q), 0, 0).is_err());
    }

    #[test]
    fn semantics_examples() {
        let one = poly("1", Q);
        let r = weyl_semantics_compare(&op("dx1", Q), 1, &one, &poly("x1", Q)).unwrap();
        assert_eq!((r.action_zero, r.ideal_member), (false, false));
        let r = weyl_semantics_compare(&op("dx2", Q), 1, &one, &poly("x1", Q)).unwrap();
        assert_eq!((r.action_zero, r.ideal_member), (true, true));

        let f2 = FieldSpec::prime_field(2).unwrap();
        let r = weyl_semantics_compare(&op("dx1", f2), 2, &poly("x1", f2), &poly("1", f2)).unwrap();
        assert!(r.action_zero);
        // ∂1² x1 = x1 ∂1² + 2 ∂1, and 2 = 0 here
        assert!(r.ideal_member);
    }
}
