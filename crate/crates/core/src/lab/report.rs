use std::path::Path;
use std::time::Instant;

use rand::{Rng, SeedableRng};
use rand_chacha::ChaCha8Rng;
use serde::{Deserialize, Serialize};
use thiserror::Error;

use super::{
    corollary1_instance, find_stabilization, frobenius_vanishing_check, random,
    stabilization_index, theorem3_family_check, weyl_semantics_compare,
};
use crate::diffop::{verify_theorem1, DiffOp};
use crate::error::Error;
use crate::expr::{parse_diffop, parse_linear_factors, parse_polynomial, ParseContext, ParseError};
use crate::field::FieldSpec;
use crate::poly::Polynomial;

pub const VERSION: &str = env!("CARGO_PKG_VERSION");
pub const DEFAULT_BOUND: u32 = 8;

/// Random instances drawn by the `charp` and `weyl-compare` modes.
const RANDOM_SAMPLES: usize = 32;

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(rename_all = "kebab-case")]
pub enum ExperimentMode {
    Hypothesis,
    Stabilize,
    Corollary1,
    Theorem1,
    Theorem3Family,
    Charp,
    WeylCompare,
}

fn default_bound() -> u32 {
    DEFAULT_BOUND
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
#[serde(deny_unknown_fields)]
pub struct ExperimentConfig {
    pub field: FieldSpec,
    pub n: usize,
    pub operator: String,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub f: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub g: Option<String>,
    #[serde(default, skip_serializing_if = "Option::is_none")]
    pub d: Option<u32>,
    #[serde(rename = "M", alias = "bound", default = "default_bound")]
    pub bound: u32,
    #[serde(default)]
    pub seed: u64,
    pub mode: ExperimentMode,
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct PerM {
    pub m: u32,
    pub hypothesis: Option<bool>,
    pub conclusion: Option<bool>,
}

#[derive(Clone, Debug, PartialEq, Eq, Serialize, Deserialize)]
pub struct GvcReport {
    pub version: String,
    pub config: Option<ExperimentConfig>,
    pub field: FieldSpec,
    pub per_m: Vec<PerM>,
    pub stabilization_index: Option<u32>,
    pub seed: u64,
    pub wall_time_ms: u64,
    #[serde(default)]
    pub notes: Vec<String>,
    /// Failed soundness checks. Also listed in `notes`.
    #[serde(skip)]
    pub violations: Vec<String>,
}

impl GvcReport {
    pub(crate) fn new(field: FieldSpec, per_m: Vec<PerM>) -> Self {
        GvcReport {
            version: VERSION.to_string(),
            config: None,
            field,
            stabilization_index: stabilization_index(&per_m),
            per_m,
            seed: 0,
            wall_time_ms: 0,
            notes: Vec::new(),
            violations: Vec::new(),
        }
    }

    pub(crate) fn violation(&mut self, message: String) {
        self.notes.push(format!("violation: {message}"));
        self.violations.push(message);
    }

    pub fn hypothesis_holds(&self) -> bool {
        self.per_m.iter().all(|e| e.hypothesis != Some(false))
    }

    pub fn first_hypothesis_failure(&self) -> Option<u32> {
        self.per_m
            .iter()
            .find(|e| e.hypothesis == Some(false))
            .map(|e| e.m)
    }

    pub fn to_json(&self) -> String {
        serde_json::to_string_pretty(self).expect("report serialises")
    }

    pub fn write_json(&self, path: &Path) -> std::io::Result<()> {
        std::fs::write(path, self.to_json() + "\n")
    }
}

#[derive(Debug, Error)]
pub enum ExperimentError {
    #[error("cannot parse `{what}`: {source}")]
    Parse {
        what: &'static str,
        #[source]
        source: ParseError,
    },
    #[error("invalid experiment: {0}")]
    Invalid(String),
    #[error(transparent)]
    Algebra(#[from] Error),
    #[error("cannot write report: {0}")]
    Io(#[from] std::io::Error),
    #[error("malformed config: {0}")]
    Config(#[from] serde_json::Error),
}

impl ExperimentConfig {
    pub fn from_json(text: &str) -> Result<Self, ExperimentError> {
        let config: ExperimentConfig = serde_json::from_str(text)?;
        config.validate()?;
        Ok(config)
    }

    pub fn validate(&self) -> Result<(), ExperimentError> {
        if self.bound == 0 {
            return Err(ExperimentError::Invalid("M must be at least 1".into()));
        }
        if self.n == 0 {
            return Err(ExperimentError::Invalid("n must be at least 1".into()));
        }
        let ctx = self.context();
        match self.mode {
            ExperimentMode::Theorem3Family => {
                parse_linear_factors(&self.operator, &ctx).map_err(parse_err("operator"))?;
            }
            _ => {
                parse_diffop(&self.operator, &ctx).map_err(parse_err("operator"))?;
            }
        }
        for (what, text) in [("f", &self.f), ("g", &self.g)] {
            if let Some(text) = text {
                parse_polynomial(text, &ctx).map_err(parse_err(what))?;
            }
        }
        Ok(())
    }

    fn context(&self) -> ParseContext {
        ParseContext::new(self.field, self.n)
    }

    fn operator(&self) -> Result<DiffOp, ExperimentError> {
        parse_diffop(&self.operator, &self.context()).map_err(parse_err("operator"))
    }

    fn poly(
        &self,
        what: &'static str,
        text: Option<&String>,
    ) -> Result<Polynomial, ExperimentError> {
        let text = text.ok_or_else(|| {
            ExperimentError::Invalid(format!("mode {:?} needs `{what}`", self.mode))
        })?;
        parse_polynomial(text, &self.context()).map_err(parse_err(what))
    }

    fn g_or_one(&self) -> Result<Polynomial, ExperimentError> {
        match &self.g {
            Some(_) => self.poly("g", self.g.as_ref()),
            None => Ok(Polynomial::one(self.n, self.field)),
        }
    }
}

fn parse_err(what: &'static str) -> impl Fn(ParseError) -> ExperimentError {
    move |source| ExperimentError::Parse { what, source }
}

/// Runs the experiment described by `config` and, if `out` is given, writes
/// the JSON report there. Deterministic apart from `wall_time_ms`.
pub fn run_experiment(
    config: &ExperimentConfig,
    out: Option<&Path>,
) -> Result<GvcReport, ExperimentError> {
    config.validate()?;
    let started = Instant::now();
    let bound = config.bound;
    let mut report = match config.mode {
        ExperimentMode::Hypothesis => {
            let (op, f) = (config.operator()?, config.poly("f", config.f.as_ref())?);
            let per_m = super::check_hypothesis(&op, &f, bound)?
                .into_iter()
                .zip(1..)
                .map(|(h, m)| PerM {
                    m,
                    hypothesis: Some(h),
                    conclusion: None,
                })
                .collect();
            let mut report = GvcReport::new(config.field, per_m);
            match report.first_hypothesis_failure() {
                Some(m) => report
                    .notes
                    .push(format!("hypothesis first fails at m = {m}")),
                None => report
                    .notes
                    .push(format!("hypothesis holds for m = 1..={bound}")),
            }
            report
        }
        ExperimentMode::Stabilize => {
            let (op, f) = (config.operator()?, config.poly("f", config.f.as_ref())?);
            find_stabilization(&op, &f, &config.g_or_one()?, bound)?
        }
        ExperimentMode::Corollary1 => {
            let (op, f) = (config.operator()?, config.poly("f", config.f.as_ref())?);
            let d = config
                .d
                .ok_or_else(|| ExperimentError::Invalid("corollary1 needs `d`".into()))?;
            corollary1_instance(&op, &f, d, bound)?
        }
        ExperimentMode::Theorem1 => run_theorem1(config)?,
        ExperimentMode::Theorem3Family => {
            let forms = parse_linear_factors(&config.operator, &config.context())
                .map_err(parse_err("operator"))?;
            let f = config.poly("f", config.f.as_ref())?;
            theorem3_family_check(&forms, &f, &config.g_or_one()?, bound)?
        }
        ExperimentMode::Charp => run_charp(config)?,
        ExperimentMode::WeylCompare => run_weyl_compare(config)?,
    };
    report.config = Some(config.clone());
    report.seed = config.seed;
    report.wall_time_ms = started.elapsed().as_millis() as u64;
    if let Some(path) = out {
        report.write_json(path)?;
    }
    Ok(report)
}

fn run_theorem1(config: &ExperimentConfig) -> Result<GvcReport, ExperimentError> {
    let op = config.operator()?;
    let f_tilde = config.poly("f", config.f.as_ref())?;
    let g = config.g_or_one()?;
    let d = config.d.unwrap_or(g.total_degree().max(0) as u32);
    if g.total_degree() > i64::from(d) {
        return Err(ExperimentError::Invalid(format!(
            "deg g = {} exceeds d = {d}",
            g.total_degree()
        )));
    }
    let mut per_m = Vec::new();
    let mut failures = Vec::new();
    for m in d..=config.bound.max(d) {
        let r = verify_theorem1(&op, &f_tilde, &g, m, d)?;
        if !r.is_sound() {
            failures.push(format!("m = {m}: {r:?}"));
        }
        per_m.push(PerM {
            m,
            hypothesis: Some(r.hypothesis_holds),
            conclusion: r.conclusion_holds,
        });
    }
    let mut report = GvcReport::new(config.field, per_m);
    report.notes.push(format!(
        "hypothesis is Λ^(m−{d}) f̃ = 0, conclusion is Λ^m (g f̃) = 0"
    ));
    for failure in failures {
        report.violation(failure);
    }
    Ok(report)
}

fn run_charp(config: &ExperimentConfig) -> Result<GvcReport, ExperimentError> {
    let p = match config.field {
        FieldSpec::PrimeField(p) => p.get() as u32,
        other => {
            return Err(ExperimentError::Invalid(format!(
                "charp needs a prime field, got {other}"
            )))
        }
    };
    let op = config.operator()?;
    let g = match (&config.g, &config.f) {
        (Some(_), _) => config.poly("g", config.g.as_ref())?,
        (None, Some(_)) => config.poly("f", config.f.as_ref())?,
        (None, None) => return Err(ExperimentError::Invalid("charp needs `g`".into())),
    };
    let outcome = frobenius_vanishing_check(&op, &g, RANDOM_SAMPLES, config.seed)?;
    let per_m = (1..=p)
        .map(|m| {
            Ok(PerM {
                m,
                hypothesis: None,
                conclusion: Some(op.apply_power(m, &g)?.is_zero()),
            })
        })
        .collect::<Result<Vec<_>, Error>>()?;
    let mut report = GvcReport::new(config.field, per_m);
    report.notes.push(format!(
        "conclusion is Λ^m g = 0; checked Λ^{p} g = 0 on {} pairs",
        outcome.checked
    ));
    for failure in outcome.failures {
        report.violation(failure);
    }
    Ok(report)
}

fn run_weyl_compare(config: &ExperimentConfig) -> Result<GvcReport, ExperimentError> {
    let op = config.operator()?;
    let f = config.poly("f", config.f.as_ref())?;
    let g = config.g_or_one()?;
    let char_zero = config.field.characteristic() == 0;
    let mut per_m = Vec::new();
    let mut disagreements = Vec::new();
    for m in 1..=config.bound {
        let cmp = weyl_semantics_compare(&op, m, &g, &f)?;
        if !cmp.agree() {
            disagreements.push(format!("m = {m}"));
        }
        per_m.push(PerM {
            m,
            hypothesis: Some(cmp.action_zero),
            conclusion: Some(cmp.ideal_member),
        });
    }
    let mut rng = ChaCha8Rng::seed_from_u64(config.seed);
    let (n, field) = (config.n, config.field);
    for _ in 0..RANDOM_SAMPLES {
        let l = random::diffop(&mut rng, n, field, 2, 3);
        let m = rng.gen_range(0..=3);
        let rg = random::polynomial(&mut rng, n, field, 2, 3);
        let rf = random::polynomial(&mut rng, n, field, 2, 3);
        let cmp = weyl_semantics_compare(&l, m, &rg, &rf)?;
        if !cmp.agree() {
            disagreements.push(format!("Λ = {l}, m = {m}, g = {rg}, f = {rf}"));
        }
    }
    let mut report = GvcReport::new(config.field, per_m);
    report.notes.push(
        "per_m.hypothesis is Λ^m (g f^m) = 0, per_m.conclusion is left-ideal membership".into(),
    );
    report.notes.push(format!(
        "{} disagreements over {} random instances and the given one",
        disagreements.len(),
        RANDOM_SAMPLES
    ));
    for d in disagreements {
        if char_zero {
            report.violation(format!("semantics disagree in characteristic 0: {d}"));
        } else {
            report.notes.push(format!("disagreement: {d}"));
        }
    }
    Ok(report)
}

#[cfg(test)]
mod tests {
    use super::*;

    fn config(mode: ExperimentMode) -> ExperimentConfig {
        ExperimentConfig {
            field: FieldSpec::Rationals,
            n: 2,
            operator: "dx1*dx2".into(),
            f: Some("x1".into()),
            g: Some("x2^3".into()),
            d: None,
            bound: 8,
            seed: 7,
            mode,
        }
    }

    #[test]
    fn stabilize_mode() {
        let r = run_experiment(&config(ExperimentMode::Stabilize), None).unwrap();
        assert_eq!(r.stabilization_index, Some(4));
    }

    #[test]
    fn hypothesis_mode_flags_first_failure() {
        let mut c = config(ExperimentMode::Hypothesis);
        c.operator = "dx1".into();
        let r = run_experiment(&c, None).unwrap();
        assert_eq!(r.first_hypothesis_failure(), Some(1));
        assert!(r.notes.iter().any(|n| n.contains("first fails at m = 1")));
    }

    #[test]
    fn reports_are_deterministic() {
        for mode in [
            ExperimentMode::Stabilize,
            ExperimentMode::WeylCompare,
            ExperimentMode::Theorem1,
            ExperimentMode::Theorem3Family,
        ] {
            let c = config(mode);
            let mut a = run_experiment(&c, None).unwrap();
            let mut b = run_experiment(&c, None).unwrap();
            a.wall_time_ms = 0;
            b.wall_time_ms = 0;
            assert_eq!(a.to_json(), b.to_json(), "{mode:?}");
        }
    }

    #[test]
    fn report_keys() {
        let r = run_experiment(&config(ExperimentMode::Stabilize), None).unwrap();
        let v: serde_json::Value = serde_json::from_str(&r.to_json()).unwrap();
        for key in [
            "version",
            "config",
            "field",
            "per_m",
            "stabilization_index",
            "seed",
            "wall_time_ms",
        ] {
            assert!(v.get(key).is_some(), "missing {key}");
        }
        let entry = &v["per_m"][0];
        assert_eq!(entry["m"], 1);
        assert_eq!(entry["hypothesis"], true);
        assert_eq!(entry["conclusion"], false);
        assert_eq!(v["field"], "q");
        assert_eq!(v["config"]["M"], 8);
    }

    #[test]
    fn config_round_trip_and_validation() {
        let c = config(ExperimentMode::Corollary1);
        let text = serde_json::to_string(&c).unwrap();
        assert_eq!(ExperimentConfig::from_json(&text).unwrap(), c);
        let text = r#"{"field":"q","n":1,"operator":"dx1","f":"x2","mode":"stabilize"}"#;
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(ExperimentError::Parse { what: "f", .. })
        ));
        let text = r#"{"field":"q","n":1,"operator":"dx1","f":"x1","mode":"stabilize","M":0}"#;
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(ExperimentError::Invalid(_))
        ));
        let text = r#"{"field":"q","n":1,"operator":"dx1","f":"x1","mode":"nope"}"#;
        assert!(matches!(
            ExperimentConfig::from_json(text),
            Err(ExperimentError::Config(_))
        ));
        let text = r#"{"field":"q","n":1,"operator":"dx1","f":"x1","mode":"stabilize"}"#;
        assert_eq!(
            ExperimentConfig::from_json(text).unwrap().bound,
            DEFAULT_BOUND
        );
    }

    #[test]
    fn charp_mode() {
        let c = ExperimentConfig {
            field: FieldSpec::prime_field(3).unwrap(),
            n: 1,
            operator: "dx1".into(),
            f: None,
            g: Some("x1^5".into()),
            d: None,
            bound: 8,
            seed: 1,
            mode: ExperimentMode::Charp,
        };
        let r = run_experiment(&c, None).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.per_m.len(), 3);
        assert_eq!(r.stabilization_index, Some(3));
        let mut wrong = c.clone();
        wrong.field = FieldSpec::Rationals;
        assert!(run_experiment(&wrong, None).is_err());
    }

    #[test]
    fn theorem1_mode() {
        let mut c = config(ExperimentMode::Theorem1);
        c.operator = "dx1".into();
        c.f = Some("x1^2".into());
        c.g = Some("x1*x2".into());
        let r = run_experiment(&c, None).unwrap();
        assert!(r.violations.is_empty());
        assert_eq!(r.per_m.first().unwrap().m, 2);
        let m5 = r.per_m.iter().find(|e| e.m == 5).unwrap();
        assert_eq!((m5.hypothesis, m5.conclusion), (Some(true), Some(true)));
    }

    #[test]
    fn writes_report_file() {
        let dir = std::env::temp_dir().join(format!("gvc-report-{}", std::process::id()));
        std::fs::create_dir_all(&dir).unwrap();
        let path = dir.join("report.json");
        let r = run_experiment(&config(ExperimentMode::Stabilize), Some(&path)).unwrap();
        let back: GvcReport =
            serde_json::from_str(&std::fs::read_to_string(&path).unwrap()).unwrap();
        assert_eq!(back.per_m, r.per_m);
        std::fs::remove_dir_all(dir).unwrap();
    }
}
