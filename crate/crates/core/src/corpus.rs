//! The named program corpus: the standard library of sample indices used by
//! the test suites and the CLI.
//!
//! Multi-argument programs take right-nested pairs: `add` expects
//! `pair(x, y)`, a transformer expects a single code, and a blueprint expects
//! `pair(self, y)`.

use crate::builder::ProgramBuilder;
use crate::objlang::{div_program, Program};

/// The empty program: the identity function, index 0.
pub fn identity_program() -> Program {
    Program::empty()
}

pub fn succ_program() -> Program {
    let mut b = ProgramBuilder::new();
    b.succ(0, 0);
    b.build()
}

/// pair(x, y) ↦ x + y
pub fn add_program() -> Program {
    let mut b = ProgramBuilder::new();
    b.first(1, 0);
    b.second(2, 0);
    b.copy(0, 1);
    b.add_into(0, 2, 3);
    b.build()
}

/// pair(x, y) ↦ x · y
pub fn mul_program() -> Program {
    let mut b = ProgramBuilder::new();
    b.first(1, 0);
    b.second(2, 0);
    b.mul(0, 1, 2, 3, 4);
    b.build()
}

/// n ↦ n!
pub fn factorial_program() -> Program {
    let mut b = ProgramBuilder::new();
    b.copy(1, 0); // counter
    b.assign(0, 1u64); // accumulator
    b.while_nonzero(1, |w| {
        w.mul(2, 0, 1, 3, 4);
        w.copy(0, 2);
        w.pred(1, 1);
    });
    b.build()
}

/// The canonical diverging program.
pub fn div_corpus_program() -> Program {
    div_program()
}

/// x ↦ 0
pub fn constant_zero_program() -> Program {
    let mut b = ProgramBuilder::new();
    b.assign(0, 0u64);
    b.build()
}

/// x ↦ x+1 if x is even, x−1 if x is odd. Total but not extensional: the
/// image behavior depends on the numeral, not on what it computes.
pub fn parity_transformer() -> Program {
    let mut b = ProgramBuilder::new();
    b.copy(1, 0); // countdown
    b.assign(2, 0u64); // parity flag
    b.while_nonzero(1, |w| {
        w.if_zero(
            2,
            |t| {
                t.assign(2, 1u64);
            },
            |e| {
                e.assign(2, 0u64);
            },
        );
        w.pred(1, 1);
    });
    b.if_zero(
        2,
        |t| {
            t.succ(0, 0);
        },
        |e| {
            e.pred(0, 0);
        },
    );
    b.build()
}

/// The step worker behind the factorial-step transformer: on pair(c, y),
/// return 1 if y = 0 and otherwise y · φ_c(y − 1). The same program serves as
/// the factorial blueprint for the second recursion theorem, where c is the
/// program's own code.
///
/// The straight-line prefix of the multiplication sits inside a branch on a
/// never-written register: under the cons encoding every statement in front
/// of the big loop doubles the code, so grouping them keeps the worker's
/// numeral (and with it the corpus file) about 8× smaller.
pub fn factorial_step_worker() -> Program {
    let mut b = ProgramBuilder::new();
    b.first(1, 0); // c
    b.second(2, 0); // y
    b.if_zero(
        2,
        |t| {
            t.assign(0, 1u64);
        },
        |e| {
            e.if_zero(
                63,
                |pre| {
                    pre.pred(3, 2); // y − 1
                    pre.eval(3, 1, 3); // r = φ_c(y − 1)
                    pre.assign(0, 0u64); // accumulator
                    pre.copy(4, 2); // outer counter
                },
                |_| {},
            );
            // X0 := y · r
            e.while_nonzero(4, |outer| {
                outer.copy(5, 3);
                outer.while_nonzero(5, |inner| {
                    inner.succ(0, 0);
                    inner.pred(5, 5);
                });
                outer.pred(4, 4);
            });
        },
    );
    b.build()
}

/// The factorial-step transformer: c ↦ a code for "1 if y = 0 else
/// y · φ_c(y−1)". Total and extensional: the output is the worker above
/// specialized to c, and its behavior depends only on φ_c.
pub fn factorial_step_transformer() -> Program {
    let worker = factorial_step_worker().encode();
    let mut b = ProgramBuilder::new();
    b.assign_nat(1, worker.0);
    b.smn_stmt(0, 1, 0);
    b.build()
}

/// The identity transformer c ↦ c: the empty program. Its induced functional
/// is the identity on partial functions, whose least fixed point is the
/// nowhere-defined function.
pub fn identity_transformer() -> Program {
    Program::empty()
}

/// x ↦ y! blueprint, i.e. `factorial_step_worker` read with c = self.
pub fn factorial_blueprint() -> Program {
    factorial_step_worker()
}

/// All named corpus programs, in a fixed order.
pub fn all_named() -> Vec<(&'static str, Program)> {
    vec![
        ("identity", identity_program()),
        ("succ", succ_program()),
        ("add", add_program()),
        ("mul", mul_program()),
        ("factorial", factorial_program()),
        ("div", div_corpus_program()),
        ("constant-zero", constant_zero_program()),
        ("parity-transformer", parity_transformer()),
        ("factorial-step-transformer", factorial_step_transformer()),
        ("identity-transformer", identity_transformer()),
    ]
}

pub fn by_name(name: &str) -> Option<Program> {
    all_named()
        .into_iter()
        .find(|(n, _)| *n == name)
        .map(|(_, p)| p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{run_program, Fuel, Outcome};
    use crate::nat::{pair_nat, Nat};

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    fn val(p: &Program, input: Nat, fuel: u64) -> Option<u64> {
        match run_program(p, &input, Fuel(fuel)) {
            Outcome::Halted { value, .. } => value.to_u64(),
            _ => None,
        }
    }

    #[test]
    fn corpus_behaviors() {
        assert_eq!(val(&identity_program(), n(9), 100), Some(9));
        assert_eq!(val(&succ_program(), n(9), 100), Some(10));
        assert_eq!(val(&add_program(), pair_nat(&n(3), &n(4)), 10_000), Some(7));
        assert_eq!(val(&mul_program(), pair_nat(&n(6), &n(7)), 10_000), Some(42));
        assert_eq!(val(&factorial_program(), n(5), 100_000), Some(120));
        assert_eq!(val(&div_corpus_program(), n(0), 1_000), None);
        assert_eq!(val(&constant_zero_program(), n(7), 100), Some(0));
        assert_eq!(val(&parity_transformer(), n(4), 1_000), Some(5));
        assert_eq!(val(&parity_transformer(), n(7), 1_000), Some(6));
    }

    #[test]
    fn factorial_program_steps_frozen() {
        // Derived once by running, then pinned: the step count of 5! under
        // this exact cost model.
        match run_program(&factorial_program(), &n(5), Fuel(1_000_000)) {
            Outcome::Halted { value, steps } => {
                assert_eq!(value.to_u64(), Some(120));
                assert_eq!(steps, 1_832);
            }
            other => panic!("factorial exhausted: {other:?}"),
        }
    }

    #[test]
    fn round_trip_all_named() {
        for (name, p) in all_named() {
            let i = p.encode();
            assert_eq!(crate::objlang::decode(&i), p, "round trip failed for {name}");
        }
    }
}
