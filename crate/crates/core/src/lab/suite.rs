//! Randomised verification batteries behind `gvc verify-suite`.

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use rayon::prelude::*;
use serde::Serialize;

use super::{frobenius_vanishing_check, random, weyl_semantics_compare};
use crate::diffop::{verify_theorem1, DiffOp};
use crate::error::Result;
use crate::field::{FieldSpec, Prime};
use crate::poly::{ExponentVector, Polynomial};
use crate::reduction::{
    build_extended_operator, build_extended_product, decompose_power_sums,
    extension_preserves_x_action, polarize_monomial, product_target, transform_diffop,
};
use crate::weyl::WeylElement;

#[derive(Clone, Debug, PartialEq, Eq, Serialize)]
pub struct SuiteResult {
    pub name: &'static str,
    pub checked: usize,
    pub failures: Vec<String>,
}

impl SuiteResult {
    pub fn passed(&self) -> bool {
        self.failures.is_empty()
    }
}

const Q: FieldSpec = FieldSpec::Rationals;
const QI: FieldSpec = FieldSpec::GaussianRationals;

fn fp(p: u64) -> FieldSpec {
    FieldSpec::PrimeField(Prime::new(p).expect("small prime"))
}

fn all_fields() -> [FieldSpec; 3] {
    [Q, QI, fp(5)]
}

/// Runs `count` independent cases, each seeded from `(seed, index)`, and
/// collects failures in index order.
fn battery<F>(name: &'static str, seed: u64, count: usize, case: F) -> SuiteResult
where
    F: Fn(usize, &mut ChaCha8Rng) -> Result<Option<String>> + Sync,
{
    let failures = (0..count)
        .into_par_iter()
        .filter_map(|i| {
            let mut rng =
                ChaCha8Rng::seed_from_u64(seed ^ (i as u64).wrapping_mul(0x9e37_79b9_7f4a_7c15));
            match case(i, &mut rng) {
                Ok(None) => None,
                Ok(Some(msg)) => Some(format!("#{i}: {msg}")),
                Err(e) => Some(format!("#{i}: error: {e}")),
            }
        })
        .collect();
    SuiteResult {
        name,
        checked: count,
        failures,
    }
}

pub fn theorem1(seed: u64, count: usize) -> SuiteResult {
    battery("theorem1", seed, count, |i, rng| {
        let field = if i % 2 == 0 { Q } else { fp(5) };
        let inst = random::theorem1_instance(rng, field, 3);
        let r = verify_theorem1(&inst.op, &inst.f_tilde, &inst.g, inst.m, inst.d)?;
        Ok((!r.is_sound()).then(|| {
            format!(
                "{r:?} for Λ = {}, f̃ = {}, g = {}",
                inst.op, inst.f_tilde, inst.g
            )
        }))
    })
}

pub fn commutator(seed: u64, count: usize) -> SuiteResult {
    battery("commutator", seed, count, |i, rng| {
        let field = all_fields()[i % 3];
        let dim = rng.gen_range(1..=3);
        let op = random::diffop(rng, dim, field, 3, 4);
        let g = random::polynomial(rng, dim, field, 3, 4);
        let dec = op.commutator_decompose(&g)?;
        if !dec.respects_degree_bound() {
            return Ok(Some("degree bound violated".into()));
        }
        for _ in 0..5 {
            let f = random::polynomial(rng, dim, field, 4, 4);
            if dec.apply_to(&f)? != op.commutator_action(&g, &f)? {
                return Ok(Some(format!("Λ = {op}, g = {g}, f̃ = {f}")));
            }
        }
        Ok(None)
    })
}

pub fn weyl(seed: u64, count: usize) -> SuiteResult {
    battery("weyl", seed, count, |i, rng| {
        let field = all_fields()[i % 3];
        let dim = rng.gen_range(1..=3);
        let [a, b, c] = [0; 3].map(|_| random::weyl(rng, dim, field, 3, 3));
        if &(&a * &b) * &c != &a * &(&b * &c) {
            return Ok(Some(format!("associativity: {a} | {b} | {c}")));
        }
        if (a.act(&Polynomial::one(dim, field))?.is_zero()) != a.in_left_ideal_partials() {
            return Ok(Some(format!("ideal membership: {a}")));
        }
        if (&a * &b).fourier_automorphism() != &a.fourier_automorphism() * &b.fourier_automorphism()
        {
            return Ok(Some(format!("fourier multiplicativity: {a} | {b}")));
        }
        let mut w = a.clone();
        for _ in 0..4 {
            w = w.fourier_automorphism();
        }
        if w != a {
            return Ok(Some(format!("fourier order: {a}")));
        }
        if WeylElement::from_partials_left(dim, field, &a.reorder_partials_left())? != a {
            return Ok(Some(format!("reorder round trip: {a}")));
        }
        Ok(None)
    })
}

/// Exhaustive over `1 ≤ |α| ≤ 5`, `n ≤ 4`.
pub fn polarization() -> SuiteResult {
    let mut alphas = Vec::new();
    for n in 1..=4usize {
        let mut stack = vec![Vec::new()];
        while let Some(prefix) = stack.pop() {
            if prefix.len() == n {
                if prefix.iter().any(|&e| e > 0) {
                    alphas.push(ExponentVector::new(prefix));
                }
                continue;
            }
            let used: u32 = prefix.iter().sum();
            for e in 0..=(5 - used) {
                let mut next = prefix.clone();
                next.push(e);
                stack.push(next);
            }
        }
    }
    let failures = alphas
        .par_iter()
        .filter_map(|alpha| {
            let psd = match polarize_monomial(alpha, Q) {
                Ok(psd) => psd,
                Err(e) => return Some(format!("α = {:?}: {e}", alpha.as_slice())),
            };
            let expected = DiffOp::monomial(alpha.clone(), crate::field::Scalar::one(Q));
            (psd.reconstruct() != expected).then(|| format!("α = {:?}", alpha.as_slice()))
        })
        .collect();
    SuiteResult {
        name: "polarization",
        checked: alphas.len(),
        failures,
    }
}

pub fn transport(seed: u64, count: usize) -> SuiteResult {
    battery("transport", seed, count, |i, rng| {
        let field = if i % 2 == 0 { Q } else { QI };
        let dim = rng.gen_range(1..=2);
        let op = DiffOp::from_symbol(random::nonzero_polynomial(rng, dim, field, 3, 3));
        let op = &op - &DiffOp::constant(dim, op.constant_term());
        if op.is_zero() {
            return Ok(None);
        }
        let psd = decompose_power_sums(&op)?;
        let (extended, _) = build_extended_operator(&psd)?;
        let f = random::polynomial(rng, dim, field, 4, 4);
        Ok((!extension_preserves_x_action(&op, &extended, &f)?)
            .then(|| format!("Λ = {op}, f = {f}")))
    })
}

pub fn transform(seed: u64, count: usize) -> SuiteResult {
    battery("transform", seed, count, |_, rng| {
        let dim = rng.gen_range(1..=3);
        let op = random::diffop(rng, dim, Q, 3, 4);
        let m = random::invertible_matrix(rng, dim, Q);
        let f = random::polynomial(rng, dim, Q, 3, 4);
        let lhs = transform_diffop(&op, &m)?.apply(&f.substitute_linear(&m, dim)?)?;
        let rhs = op.apply(&f)?.substitute_linear(&m, dim)?;
        if lhs != rhs {
            return Ok(Some(format!("defining property: Λ = {op}, f = {f}")));
        }
        let forms: Vec<_> = (0..rng.gen_range(1..=3))
            .map(|_| random::nonzero_linear_form(rng, dim, Q))
            .collect();
        let (extended, ring) = build_extended_product(&forms)?;
        Ok((ring.diffop_to_new(&extended)? != product_target(&ring)?)
            .then(|| "product target".into()))
    })
}

pub fn frobenius(seed: u64, count: usize) -> Vec<SuiteResult> {
    [(2, "frobenius-2"), (3, "frobenius-3"), (5, "frobenius-5")]
        .into_iter()
        .map(|(p, name)| {
            let field = fp(p);
            let mut rng = ChaCha8Rng::seed_from_u64(seed.wrapping_add(p));
            let dim = rng.gen_range(1..=3);
            let op = DiffOp::partial(dim, field, 0).expect("dim ≥ 1");
            let g = random::polynomial(&mut rng, dim, field, 4, 4);
            match frobenius_vanishing_check(&op, &g, count.saturating_sub(1), seed ^ p) {
                Ok(outcome) => SuiteResult {
                    name,
                    checked: outcome.checked,
                    failures: outcome.failures,
                },
                Err(e) => SuiteResult {
                    name,
                    checked: 0,
                    failures: vec![e.to_string()],
                },
            }
        })
        .collect()
}

pub fn semantics(seed: u64, count: usize) -> SuiteResult {
    battery("semantics", seed, count, |_, rng| {
        let dim = rng.gen_range(1..=3);
        let op = random::diffop(rng, dim, Q, 2, 3);
        let m = rng.gen_range(0..=3);
        let g = random::polynomial(rng, dim, Q, 2, 3);
        let f = random::polynomial(rng, dim, Q, 2, 3);
        let cmp = weyl_semantics_compare(&op, m, &g, &f)?;
        Ok((!cmp.agree()).then(|| format!("{cmp:?} for Λ = {op}, m = {m}, g = {g}, f = {f}")))
    })
}

/// Every battery at its default size.
pub fn run_all(seed: u64) -> Vec<SuiteResult> {
    let mut out = vec![
        theorem1(seed, 200),
        commutator(seed, 200),
        weyl(seed, 200),
        polarization(),
        transport(seed, 100),
        transform(seed, 20),
    ];
    out.extend(frobenius(seed, 100));
    out.push(semantics(seed, 100));
    out
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn small_batteries_pass() {
        for r in [
            theorem1(1, 20),
            commutator(1, 10),
            weyl(1, 10),
            transport(1, 5),
            transform(1, 5),
            semantics(1, 10),
        ] {
            assert!(r.passed(), "{}: {:?}", r.name, r.failures);
            assert!(r.checked > 0);
        }
        assert!(frobenius(1, 5).iter().all(SuiteResult::passed));
        let p = polarization();
        assert!(p.passed(), "{:?}", p.failures);
        assert_eq!(p.checked, 205);
    }

    #[test]
    fn batteries_are_deterministic() {
        assert_eq!(commutator(9, 8), commutator(9, 8));
    }
}
