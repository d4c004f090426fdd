//! The three projections: specializing the interpreter yields a target
//! program, specializing the specializer yields a compiler, and self-applying
//! the specializer yields a compiler generator.
//!
//! Because eval is a primitive of this numbering, interpretive overhead is
//! inherently a small constant per layer; the classical win from removing an
//! interpretation layer shows up through the optimizing specializer's
//! constant folding. The report states both step counts honestly.

use crate::evaluator::{check_equiv, run, universal_index, EquivReport, Fuel, Outcome};
use crate::nat::{pair_nat, Nat};
use crate::objlang::{Index, Program, Stmt, VarId};
use crate::specializer::smn_opt;

/// s with φ_s(pair(p, x)) = S(p, x): the s-m-n function as an index.
pub fn smn_as_index() -> Index {
    Program::new(vec![
        Stmt::First(VarId::new(1), VarId::new(0)),
        Stmt::Second(VarId::new(2), VarId::new(0)),
        Stmt::Smn(VarId::new(0), VarId::new(1), VarId::new(2)),
    ])
    .encode()
}

#[derive(Clone, Debug)]
pub struct StepComparison {
    pub input: u64,
    pub target_steps: u64,
    pub interpreted_steps: u64,
    pub opt_target_steps: Option<u64>,
}

#[derive(Clone, Debug)]
pub struct ProjectionReport {
    pub source: Index,
    pub target: Index,
    pub compiler: Index,
    pub cogen: Index,
    pub opt_target: Index,
    /// target ≃ source on the sample inputs.
    pub first_law: EquivReport,
    /// φ_compiler(src') ≃ src' behaviorally, per extra corpus source.
    pub second_law: Vec<(String, EquivReport)>,
    /// The cogen emits a compiler that passes the same checks.
    pub third_law: Vec<(String, EquivReport)>,
    pub comparisons: Vec<StepComparison>,
}

impl ProjectionReport {
    pub fn laws_pass(&self) -> bool {
        self.first_law.pass()
            && self.second_law.iter().all(|(_, r)| r.pass())
            && self.third_law.iter().all(|(_, r)| r.pass())
    }

    /// Aggregate interpretive-overhead ratio across all halting inputs.
    pub fn aggregate_ratio(&self) -> f64 {
        let t: u64 = self.comparisons.iter().map(|c| c.target_steps).sum();
        let i: u64 = self.comparisons.iter().map(|c| c.interpreted_steps).sum();
        if i == 0 {
            f64::INFINITY
        } else {
            t as f64 / i as f64
        }
    }
}

#[derive(Debug, thiserror::Error)]
pub enum ProjectionError {
    #[error("projection construction exhausted its budget: outcome indeterminate")]
    Indeterminate,
}

fn apply(f: &Index, x: &Nat, fuel: Fuel) -> Result<Index, ProjectionError> {
    match run(f, x, fuel) {
        Outcome::Halted { value, .. } => Ok(Index(value)),
        Outcome::Exhausted { .. } => Err(ProjectionError::Indeterminate),
    }
}

/// Run all three projections on a source index, verifying behavior on the
/// sample inputs and measuring interpretive overhead.
pub fn project(
    src: &Index,
    extra_sources: &[(String, Index)],
    inputs: &[Nat],
    fuel: Fuel,
    deep_fuel: Fuel,
) -> Result<ProjectionReport, ProjectionError> {
    let u = universal_index();
    let s = smn_as_index();

    // target = φ_s(pair(U, source))
    let target = apply(&s, &pair_nat(u.nat(), src.nat()), fuel)?;
    // compiler = φ_s(pair(s, U))
    let compiler = apply(&s, &pair_nat(s.nat(), u.nat()), fuel)?;
    // compiler generator = φ_s(pair(s, s))
    let cogen = apply(&s, &pair_nat(s.nat(), s.nat()), fuel)?;
    let opt_target = smn_opt(&u, src.nat());

    let first_law = check_equiv(&target, src, inputs, fuel);

    let mut second_law = Vec::new();
    for (name, other) in extra_sources {
        let compiled = apply(&compiler, other.nat(), deep_fuel)?;
        second_law.push((name.clone(), check_equiv(&compiled, other, inputs, fuel)));
    }

    // The cogen applied to the interpreter yields a compiler.
    let compiler2 = apply(&cogen, u.nat(), deep_fuel)?;
    let mut third_law = Vec::new();
    for (name, other) in extra_sources {
        let compiled = apply(&compiler2, other.nat(), deep_fuel)?;
        third_law.push((name.clone(), check_equiv(&compiled, other, inputs, fuel)));
    }

    let mut comparisons = Vec::new();
    for d in inputs {
        let tgt = run(&target, d, fuel);
        let interp = run(&u, &pair_nat(src.nat(), d), fuel);
        let opt = run(&opt_target, d, fuel);
        if let (Some(ts), Some(is)) = (tgt.steps(), interp.steps()) {
            comparisons.push(StepComparison {
                input: d.to_u64().unwrap_or(u64::MAX),
                target_steps: ts,
                interpreted_steps: is,
                opt_target_steps: opt.steps(),
            });
        }
    }

    Ok(ProjectionReport {
        source: src.clone(),
        target,
        compiler,
        cogen,
        opt_target,
        first_law,
        second_law,
        third_law,
        comparisons,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;
    use crate::evaluator::inputs_upto;
    use crate::specializer::smn;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    #[test]
    fn smn_as_index_agrees_with_host() {
        let s = smn_as_index();
        let u = universal_index();
        // 50 samples: φ_s(pair(p, x)) = smn(p, x)
        let mut count = 0;
        for p in [0u64, 5, 100, 266_790] {
            for x in [0u64, 1, 2, 9, 40] {
                let out = run(&s, &pair_nat(&n(p), &n(x)), Fuel(10_000));
                let host = smn(&Index::from_u64(p), &n(x));
                assert_eq!(out.value(), Some(host.nat()), "at p={p} x={x}");
                count += 1;
            }
        }
        for x in 0..30u64 {
            let out = run(&s, &pair_nat(u.nat(), &n(x)), Fuel(10_000));
            let host = smn(&u, &n(x));
            assert_eq!(out.value(), Some(host.nat()));
            count += 1;
        }
        assert!(count >= 50);
    }

    #[test]
    fn factorial_target_computes_factorials() {
        let fact = corpus::factorial_program().encode();
        let report = project(
            &fact,
            &[("identity".into(), Index::from_u64(0))],
            &inputs_upto(7),
            Fuel(1_000_000),
            Fuel(10_000_000),
        )
        .unwrap();
        assert!(report.laws_pass());
        let expected = [1u64, 1, 2, 6, 24, 120, 720];
        for (i, want) in expected.iter().enumerate() {
            let out = run(&report.target, &n(i as u64), Fuel(1_000_000));
            assert_eq!(out.value().and_then(|v| v.to_u64()), Some(*want));
        }
        assert!(report.aggregate_ratio() < 2.0);
    }

    #[test]
    fn compiler_on_identity_source() {
        let fact = corpus::factorial_program().encode();
        let report = project(
            &fact,
            &[("identity".into(), Index::from_u64(0))],
            &inputs_upto(10),
            Fuel(1_000_000),
            Fuel(10_000_000),
        )
        .unwrap();
        let (_, second) = &report.second_law[0];
        assert!(second.pass());
    }

    #[test]
    fn optimized_target_beats_interpretation() {
        let fact = corpus::factorial_program().encode();
        let u = universal_index();
        let opt = smn_opt(&u, fact.nat());
        let direct = run(&u, &pair_nat(fact.nat(), &n(5)), Fuel(1_000_000));
        let optimized = run(&opt, &n(5), Fuel(1_000_000));
        assert_eq!(optimized.value(), direct.value());
        assert!(optimized.steps().unwrap() < direct.steps().unwrap());
    }
}
