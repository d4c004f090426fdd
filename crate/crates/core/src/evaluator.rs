//! Deterministic fuel-bounded evaluation and the universal index U.
//!
//! Cost model: every statement execution costs one unit of fuel, and so does
//! every loop guard check. `eval` costs 1 plus the inner computation's steps,
//! drawn from the same global budget. `beval(dst, c, a, b)` costs 1 plus
//! min(inner steps, b) and stores pair(1, v) when φ_c(a) halts with v within
//! b steps and pair(0, 0) otherwise — the stored value depends only on
//! (c, a, b); if the surrounding budget cannot pay for the inner run, the
//! whole computation exhausts instead of producing a wrong answer. `smn`
//! costs 1 (a syntactic host operation). `query` against a finite-function
//! oracle answers in 1 step or diverges on unbound arguments; against an
//! index oracle it runs that index inside the same budget. A query with no
//! oracle at all waits forever (divergence).

use std::collections::HashMap;
use std::rc::Rc;

use crate::functionals::FiniteFn;
use crate::nat::{nat_eq, pair_nat, pred_nat, succ_nat, unpair_nat, Nat, NatKey};
use crate::objlang::{decode, Index, OracleProgram, Program, Stmt, VarId};
use crate::specializer::smn_code;

/// Statement execution budget.
#[derive(Clone, Copy, Debug, PartialEq, Eq)]
pub struct Fuel(pub u64);

/// Result of a budgeted run: either a value with the exact number of steps it
/// took, or exhaustion of the supplied budget. Exhaustion is the desk-scale
/// stand-in for divergence; it is evidence, not proof.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Outcome {
    Halted { value: Nat, steps: u64 },
    Exhausted { budget: u64 },
}

impl Outcome {
    pub fn value(&self) -> Option<&Nat> {
        match self {
            Outcome::Halted { value, .. } => Some(value),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn steps(&self) -> Option<u64> {
        match self {
            Outcome::Halted { steps, .. } => Some(*steps),
            Outcome::Exhausted { .. } => None,
        }
    }

    pub fn is_halted(&self) -> bool {
        matches!(self, Outcome::Halted { .. })
    }
}

/// Oracle supplied to an oracle-program run.
#[derive(Clone, Debug)]
pub enum Oracle {
    Fn(FiniteFn),
    Index(Index),
}

#[derive(Clone, Debug, Default)]
struct RegFile {
    low: Vec<Option<Nat>>,
    high: Vec<(Nat, Nat)>,
}

const LOW_REGS: usize = 128;

impl RegFile {
    fn new(input: Nat) -> RegFile {
        let mut low = vec![None; LOW_REGS];
        low[0] = Some(input);
        RegFile { low, high: Vec::new() }
    }

    fn get(&self, id: &VarId) -> Nat {
        match id.0.to_u64() {
            Some(i) if (i as usize) < LOW_REGS => self.low[i as usize]
                .clone()
                .unwrap_or_else(Nat::zero),
            _ => self
                .high
                .iter()
                .find(|(k, _)| nat_eq(k, &id.0))
                .map(|(_, v)| v.clone())
                .unwrap_or_else(Nat::zero),
        }
    }

    fn set(&mut self, id: &VarId, v: Nat) {
        match id.0.to_u64() {
            Some(i) if (i as usize) < LOW_REGS => self.low[i as usize] = Some(v),
            _ => {
                if let Some(slot) = self.high.iter_mut().find(|(k, _)| nat_eq(k, &id.0)) {
                    slot.1 = v;
                } else {
                    self.high.push((id.0.clone(), v));
                }
            }
        }
    }
}

/// One entry of the control stack.
enum Frame {
    Seq { stmts: Rc<Vec<Stmt>>, ip: usize },
    LoopCheck { guard: VarId, body: Rc<Vec<Stmt>> },
    /// Return point of an eval/query-by-index: restore registers, write X0 of
    /// the inner frame into dst.
    CallRet { dst: VarId, saved: RegFile },
    /// Return point of a beval: also pops the fuel scope.
    BevalRet { dst: VarId, saved: RegFile },
    /// A computation that will never finish (oracle that never answers).
    Diverged,
}

/// A beval fuel scope: the run may not use more than `limit` total steps
/// (measured on the global counter) before this scope resolves.
struct Scope {
    limit: u64,
    /// Step count at scope entry, to detect whether the inner run halted
    /// within its own budget.
    entry: u64,
    budget: u64,
    frame_depth: usize,
}

pub type TraceFn<'a> = dyn FnMut(u64, &Stmt) + 'a;

/// Shared per-call machinery: the decode cache lives for a single top-level
/// run and is dropped afterwards (no caching of evaluations across calls).
struct Engine<'a> {
    used: u64,
    budget: u64,
    decode_cache: HashMap<NatKey, (Nat, Rc<Vec<Stmt>>)>,
    oracle: Option<&'a Oracle>,
    trace: Option<&'a mut TraceFn<'a>>,
}

enum StepResult {
    Continue,
    GlobalExhausted,
    /// The current sub-computation will never produce a value: burn the
    /// innermost allowance and let scope resolution decide what that means.
    DivergeHere,
}

impl<'a> Engine<'a> {
    fn decode_body(&mut self, code: &Nat) -> Rc<Vec<Stmt>> {
        let key = code.cache_key();
        if let Some((_, body)) = self.decode_cache.get(&key) {
            return body.clone();
        }
        let body = decode(&Index(code.clone())).body;
        self.decode_cache.insert(key, (code.clone(), body.clone()));
        body
    }

    /// Charge one step. Returns false if the global budget is exhausted.
    fn charge(&mut self) -> bool {
        if self.used >= self.budget {
            return false;
        }
        self.used += 1;
        true
    }

    fn run(&mut self, body: Rc<Vec<Stmt>>, input: Nat) -> Outcome {
        let total_budget = self.budget;
        let mut regs = RegFile::new(input);
        let mut frames: Vec<Frame> = vec![Frame::Seq { stmts: body, ip: 0 }];
        let mut scopes: Vec<Scope> = Vec::new();

        loop {
            // Phase 1: unwind completed sequences. This is fuel-free and runs
            // before scope checks so that an inner run halting exactly at its
            // budget still counts as a hit.
            loop {
                match frames.last() {
                    None => {
                        return Outcome::Halted {
                            value: regs.get(&VarId::new(0)),
                            steps: self.used,
                        }
                    }
                    Some(Frame::Seq { stmts, ip }) if *ip >= stmts.len() => {
                        frames.pop();
                        match frames.pop() {
                            None => {
                                return Outcome::Halted {
                                    value: regs.get(&VarId::new(0)),
                                    steps: self.used,
                                }
                            }
                            Some(Frame::CallRet { dst, saved }) => {
                                let result = regs.get(&VarId::new(0));
                                regs = saved;
                                regs.set(&dst, result);
                            }
                            Some(Frame::BevalRet { dst, saved }) => {
                                scopes.pop().expect("beval scope");
                                let result = regs.get(&VarId::new(0));
                                regs = saved;
                                regs.set(&dst, pair_nat(&Nat::one(), &result));
                            }
                            Some(other) => {
                                frames.push(other);
                            }
                        }
                    }
                    _ => break,
                }
            }

            // Phase 2: resolve exhausted beval scopes, innermost outwards.
            let mut resolved_scope = false;
            while let Some(top) = scopes.last() {
                if self.used < top.limit {
                    break;
                }
                let top = scopes.pop().unwrap();
                while frames.len() > top.frame_depth {
                    frames.pop();
                }
                match frames.pop() {
                    Some(Frame::BevalRet { dst, saved }) => {
                        regs = saved;
                        if self.used - top.entry >= top.budget {
                            // The inner run spent its own budget: a miss.
                            regs.set(&dst, pair_nat(&Nat::zero(), &Nat::zero()));
                        } else if scopes.is_empty() {
                            // The global budget was binding: the whole
                            // computation exhausts rather than continuing
                            // with an unpaid-for result.
                            return Outcome::Exhausted { budget: total_budget };
                        }
                        // With an enclosing scope the cascade continues: its
                        // limit equals the current step count.
                    }
                    _ => unreachable!("scope frame mismatch"),
                }
                resolved_scope = true;
            }
            if resolved_scope {
                continue;
            }

            // Phase 3: execute.
            let frame = match frames.last_mut() {
                Some(f) => f,
                None => {
                    return Outcome::Halted { value: regs.get(&VarId::new(0)), steps: self.used }
                }
            };

            let stmt = match frame {
                Frame::Seq { stmts, ip } => {
                    let s = stmts[*ip].clone();
                    *ip += 1;
                    s
                }
                Frame::LoopCheck { guard, body } => {
                    let guard = guard.clone();
                    let body = body.clone();
                    // Every guard check costs a step.
                    if !self.charge() {
                        return Outcome::Exhausted { budget: total_budget };
                    }
                    if regs.get(&guard).is_zero() {
                        frames.pop();
                    } else {
                        frames.push(Frame::Seq { stmts: body, ip: 0 });
                    }
                    continue;
                }
                Frame::Diverged => {
                    if !self.charge() {
                        return Outcome::Exhausted { budget: total_budget };
                    }
                    continue;
                }
                _ => unreachable!("return frames are popped by sequence unwinding"),
            };

            match self.exec_stmt(stmt, &mut regs, &mut frames, &mut scopes) {
                StepResult::Continue => {}
                StepResult::GlobalExhausted => {
                    return Outcome::Exhausted { budget: total_budget }
                }
                StepResult::DivergeHere => {
                    self.used = scopes.last().map(|s| s.limit).unwrap_or(self.budget);
                    frames.push(Frame::Diverged);
                }
            }
        }
    }

    fn exec_stmt(
        &mut self,
        stmt: Stmt,
        regs: &mut RegFile,
        frames: &mut Vec<Frame>,
        scopes: &mut Vec<Scope>,
    ) -> StepResult {
        if !self.charge() {
            return StepResult::GlobalExhausted;
        }
        if let Some(trace) = self.trace.as_mut() {
            trace(self.used, &stmt);
        }
        match stmt {
            Stmt::AssignConst(d, c) => regs.set(&d, c),
            Stmt::Copy(d, s) => {
                let v = regs.get(&s);
                regs.set(&d, v);
            }
            Stmt::Succ(d, s) => {
                let v = succ_nat(&regs.get(&s));
                regs.set(&d, v);
            }
            Stmt::Pred(d, s) => {
                let v = pred_nat(&regs.get(&s));
                regs.set(&d, v);
            }
            Stmt::MkPair(d, a, b) => {
                let v = pair_nat(&regs.get(&a), &regs.get(&b));
                regs.set(&d, v);
            }
            Stmt::First(d, s) => {
                let (x, _) = unpair_nat(&regs.get(&s));
                regs.set(&d, x);
            }
            Stmt::Second(d, s) => {
                let (_, y) = unpair_nat(&regs.get(&s));
                regs.set(&d, y);
            }
            Stmt::Loop(guard, body) => {
                // The charge above paid for this first guard check.
                if !regs.get(&guard).is_zero() {
                    frames.push(Frame::LoopCheck { guard: guard.clone(), body: body.clone() });
                    frames.push(Frame::Seq { stmts: body, ip: 0 });
                }
            }
            Stmt::Branch(guard, then_arm, else_arm) => {
                let arm = if regs.get(&guard).is_zero() { then_arm } else { else_arm };
                frames.push(Frame::Seq { stmts: arm, ip: 0 });
            }
            Stmt::Eval(d, c, a) => {
                let code = regs.get(&c);
                let arg = regs.get(&a);
                let body = self.decode_body(&code);
                let saved = std::mem::replace(regs, RegFile::new(arg));
                frames.push(Frame::CallRet { dst: d, saved });
                frames.push(Frame::Seq { stmts: body, ip: 0 });
            }
            Stmt::Smn(d, c, a) => {
                let code = regs.get(&c);
                let arg = regs.get(&a);
                regs.set(&d, smn_code(&code, &arg));
            }
            Stmt::Beval(d, c, a, b) => {
                let code = regs.get(&c);
                let arg = regs.get(&a);
                let budget = regs.get(&b).to_u64_saturating();
                let outer_limit = scopes
                    .last()
                    .map(|s| s.limit)
                    .unwrap_or(self.budget);
                let limit = outer_limit.min(self.used.saturating_add(budget));
                let body = self.decode_body(&code);
                let saved = std::mem::replace(regs, RegFile::new(arg));
                frames.push(Frame::BevalRet { dst: d, saved });
                scopes.push(Scope {
                    limit,
                    entry: self.used,
                    budget,
                    frame_depth: frames.len(),
                });
                frames.push(Frame::Seq { stmts: body, ip: 0 });
            }
            Stmt::Query(d, a) => {
                let arg = regs.get(&a);
                match self.oracle {
                    Some(Oracle::Fn(f)) => match f.lookup(&arg) {
                        Some(v) => regs.set(&d, v.clone()),
                        // Unbound point: the oracle never answers.
                        None => return StepResult::DivergeHere,
                    },
                    Some(Oracle::Index(g)) => {
                        let body = self.decode_body(g.nat());
                        let saved = std::mem::replace(regs, RegFile::new(arg));
                        frames.push(Frame::CallRet { dst: d, saved });
                        frames.push(Frame::Seq { stmts: body, ip: 0 });
                    }
                    // No oracle to answer: wait forever.
                    None => return StepResult::DivergeHere,
                }
            }
            Stmt::Noop => {}
        }
        StepResult::Continue
    }
}

fn run_engine(
    body: Rc<Vec<Stmt>>,
    input: &Nat,
    fuel: Fuel,
    oracle: Option<&Oracle>,
    trace: Option<&mut TraceFn<'_>>,
) -> Outcome {
    let mut engine = Engine {
        used: 0,
        budget: fuel.0,
        decode_cache: HashMap::new(),
        oracle,
        trace: trace.map(|t| t as _),
    };
    engine.run(body, input.clone())
}

/// φ_p(input) within the budget: the host realization of the universal
/// function.
pub fn run(p: &Index, input: &Nat, fuel: Fuel) -> Outcome {
    run_engine(decode(p).body, input, fuel, None, None)
}

pub fn run_program(p: &Program, input: &Nat, fuel: Fuel) -> Outcome {
    run_engine(p.body.clone(), input, fuel, None, None)
}

pub fn run_traced(p: &Index, input: &Nat, fuel: Fuel, trace: &mut TraceFn<'_>) -> Outcome {
    run_engine(decode(p).body, input, fuel, None, Some(trace))
}

/// Run an oracle program against its oracle: the strict, sequential semantics
/// of partial recursive functionals (no dovetailing of oracle calls).
pub fn run_oracle(f: &OracleProgram, oracle: &Oracle, input: &Nat, fuel: Fuel) -> Outcome {
    run_engine(f.body.clone(), input, fuel, Some(oracle), None)
}

/// The universal index U with φ_U(pair(x, y)) ≃ φ_x(y).
pub fn universal_index() -> Index {
    Program::new(vec![
        Stmt::First(VarId::new(1), VarId::new(0)),
        Stmt::Second(VarId::new(2), VarId::new(0)),
        Stmt::Eval(VarId::new(0), VarId::new(1), VarId::new(2)),
    ])
    .encode()
}

/// Per-input verdict of a sampled equivalence check.
#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Agree(Nat),
    BothExhausted,
    Disagree { left: Outcome, right: Outcome },
}

/// Sampled three-valued Kleene equality between two indices.
///
/// `BothExhausted` is evidence of equality at this budget, never proof: two
/// programs that both outlive the budget may still differ farther out.
#[derive(Clone, Debug)]
pub struct EquivReport {
    pub verdicts: Vec<(Nat, Verdict)>,
}

impl EquivReport {
    pub fn pass(&self) -> bool {
        !self
            .verdicts
            .iter()
            .any(|(_, v)| matches!(v, Verdict::Disagree { .. }))
    }
}

pub fn check_equiv(a: &Index, b: &Index, inputs: &[Nat], fuel: Fuel) -> EquivReport {
    let mut verdicts = Vec::with_capacity(inputs.len());
    for x in inputs {
        let ra = run(a, x, fuel);
        let rb = run(b, x, fuel);
        let v = match (&ra, &rb) {
            (Outcome::Halted { value: va, .. }, Outcome::Halted { value: vb, .. }) => {
                if nat_eq(va, vb) {
                    Verdict::Agree(va.clone())
                } else {
                    Verdict::Disagree { left: ra.clone(), right: rb.clone() }
                }
            }
            (Outcome::Exhausted { .. }, Outcome::Exhausted { .. }) => Verdict::BothExhausted,
            _ => Verdict::Disagree { left: ra.clone(), right: rb.clone() },
        };
        verdicts.push((x.clone(), v));
    }
    EquivReport { verdicts }
}

/// Inputs 0..n as Nats, the default sample set everywhere.
pub fn inputs_upto(n: u64) -> Vec<Nat> {
    (0..n).map(Nat::from_u64).collect()
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::objlang::{compose_codes, div_index};

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    #[test]
    fn index_zero_is_identity() {
        let out = run(&Index::from_u64(0), &n(5), Fuel(10));
        assert_eq!(out, Outcome::Halted { value: n(5), steps: 0 });
    }

    #[test]
    fn div_exhausts_and_carries_budget() {
        for x in 0..10u64 {
            let out = run(&div_index(), &n(x), Fuel(1000));
            assert_eq!(out, Outcome::Exhausted { budget: 1000 });
        }
    }

    #[test]
    fn universal_index_examples() {
        let u = universal_index();
        let out = run(&u, &pair_nat(&n(0), &n(7)), Fuel(100));
        assert_eq!(out.value(), Some(&n(7)));
        let out = run(&u, &pair_nat(div_index().nat(), &n(0)), Fuel(10_000));
        assert!(!out.is_halted());
    }

    #[test]
    fn determinism_including_steps() {
        let u = universal_index();
        let input = pair_nat(&n(0), &n(3));
        let a = run(&u, &input, Fuel(500));
        let b = run(&u, &input, Fuel(500));
        assert_eq!(a, b);
    }

    #[test]
    fn fuel_monotonicity_on_universal() {
        let u = universal_index();
        let input = pair_nat(&n(0), &n(3));
        let a = run(&u, &input, Fuel(50));
        if let Outcome::Halted { value, steps } = &a {
            for extra in [1u64, 10, 1000] {
                let b = run(&u, &input, Fuel(50 + extra));
                assert_eq!(
                    b,
                    Outcome::Halted { value: value.clone(), steps: *steps }
                );
            }
        } else {
            panic!("expected halt");
        }
    }

    #[test]
    fn compose_examples() {
        let id2 = compose_codes(&Index::from_u64(0), &Index::from_u64(0));
        for x in 0..10u64 {
            assert_eq!(run(&id2, &n(x), Fuel(10_000)).value(), Some(&n(x)));
        }
        let succ = Program::new(vec![Stmt::Succ(VarId::new(0), VarId::new(0))]).encode();
        let plus2 = compose_codes(&succ, &succ);
        assert_eq!(run(&plus2, &n(5), Fuel(10_000)).value(), Some(&n(7)));
        let still_div = compose_codes(&Index::from_u64(0), &div_index());
        for x in 0..5u64 {
            assert!(!run(&still_div, &n(x), Fuel(5_000)).is_halted());
        }
    }

    #[test]
    fn check_equiv_three_verdicts() {
        let id2 = compose_codes(&Index::from_u64(0), &Index::from_u64(0));
        let r = check_equiv(&Index::from_u64(0), &id2, &inputs_upto(10), Fuel(10_000));
        assert!(r.pass());
        assert!(r.verdicts.iter().all(|(_, v)| matches!(v, Verdict::Agree(_))));

        // a differently-coded diverger
        let div2 = Program::new(vec![
            Stmt::Succ(VarId::new(2), VarId::new(2)),
            Stmt::Loop(VarId::new(2), Rc::new(vec![Stmt::Noop])),
        ])
        .encode();
        let r = check_equiv(&div_index(), &div2, &inputs_upto(10), Fuel(10_000));
        assert!(r.pass());
        assert!(r
            .verdicts
            .iter()
            .all(|(_, v)| matches!(v, Verdict::BothExhausted)));

        let succ = Program::new(vec![Stmt::Succ(VarId::new(0), VarId::new(0))]).encode();
        let r = check_equiv(&Index::from_u64(0), &succ, &inputs_upto(10), Fuel(10_000));
        assert!(!r.pass());
        assert_eq!(
            r.verdicts
                .iter()
                .filter(|(_, v)| matches!(v, Verdict::Disagree { .. }))
                .count(),
            10
        );
    }

    #[test]
    fn beval_hit_and_miss() {
        // X0 := beval(code=X1, arg=X2, budget=X3) with code loaded from consts
        let succ = Program::new(vec![Stmt::Succ(VarId::new(0), VarId::new(0))]).encode();
        let prog = Program::new(vec![
            Stmt::AssignConst(VarId::new(1), succ.nat().clone()),
            Stmt::AssignConst(VarId::new(2), n(41)),
            Stmt::AssignConst(VarId::new(3), n(10)),
            Stmt::Beval(VarId::new(0), VarId::new(1), VarId::new(2), VarId::new(3)),
        ]);
        let out = run_program(&prog, &n(0), Fuel(100));
        assert_eq!(out.value(), Some(&pair_nat(&n(1), &n(42))));

        let prog = Program::new(vec![
            Stmt::AssignConst(VarId::new(1), div_index().nat().clone()),
            Stmt::AssignConst(VarId::new(3), n(10)),
            Stmt::Beval(VarId::new(0), VarId::new(1), VarId::new(2), VarId::new(3)),
        ]);
        let out = run_program(&prog, &n(0), Fuel(100));
        assert_eq!(out.value(), Some(&pair_nat(&n(0), &n(0))));
        // cost: 3 assigns/consts + 1 beval + 10 inner = 14
        assert_eq!(out.steps(), Some(13));
    }

    #[test]
    fn beval_purity_under_tight_global_fuel() {
        // The same beval either yields its (c, a, b)-determined value or the
        // whole run exhausts; the stored value never varies with global fuel.
        let prog = Program::new(vec![
            Stmt::AssignConst(VarId::new(1), div_index().nat().clone()),
            Stmt::AssignConst(VarId::new(3), n(50)),
            Stmt::Beval(VarId::new(0), VarId::new(1), VarId::new(2), VarId::new(3)),
        ]);
        let full = run_program(&prog, &n(0), Fuel(1000));
        assert_eq!(full.value(), Some(&pair_nat(&n(0), &n(0))));
        for tight in [3u64, 10, 30, 52] {
            let out = run_program(&prog, &n(0), Fuel(tight));
            assert!(
                !out.is_halted(),
                "insufficient global fuel must exhaust, got {out:?} at {tight}"
            );
        }
        // exactly enough: 2 consts + 1 beval + 50 inner
        let out = run_program(&prog, &n(0), Fuel(53));
        assert_eq!(out.value(), Some(&pair_nat(&n(0), &n(0))));
    }

    #[test]
    fn query_without_oracle_diverges() {
        let q = OracleProgram::new(vec![Stmt::Query(VarId::new(0), VarId::new(0))]);
        let p = Program { body: q.body.clone() };
        let out = run_program(&p, &n(3), Fuel(100));
        assert_eq!(out, Outcome::Exhausted { budget: 100 });
    }
}
