//! Structured construction of object programs.
//!
//! The builder emits core statements only; the `*_macro` helpers expand to
//! unary arithmetic over the register machine. Macros take explicit scratch
//! registers so that templates stay auditable: nothing here allocates
//! registers behind the caller's back.

use std::rc::Rc;

use crate::nat::Nat;
use crate::objlang::{OracleProgram, Program, Stmt, VarId};

#[derive(Clone, Debug)]
pub struct ProgramBuilder {
    stmts: Vec<Stmt>,
    allow_query: bool,
}

impl Default for ProgramBuilder {
    fn default() -> Self {
        ProgramBuilder::new()
    }
}

impl ProgramBuilder {
    pub fn new() -> ProgramBuilder {
        ProgramBuilder { stmts: Vec::new(), allow_query: false }
    }

    /// Builder for oracle programs, where `query` is legal.
    pub fn new_oracle() -> ProgramBuilder {
        ProgramBuilder { stmts: Vec::new(), allow_query: true }
    }

    pub fn build(self) -> Program {
        assert!(!self.allow_query);
        Program::new(self.stmts)
    }

    pub fn build_oracle(self) -> OracleProgram {
        OracleProgram::new(self.stmts)
    }

    // -- core statements ----------------------------------------------------

    pub fn assign(&mut self, dst: u64, c: impl Into<Nat>) -> &mut Self {
        self.stmts.push(Stmt::AssignConst(VarId::new(dst), c.into()));
        self
    }

    pub fn assign_nat(&mut self, dst: u64, c: Nat) -> &mut Self {
        self.stmts.push(Stmt::AssignConst(VarId::new(dst), c));
        self
    }

    pub fn copy(&mut self, dst: u64, src: u64) -> &mut Self {
        self.stmts.push(Stmt::Copy(VarId::new(dst), VarId::new(src)));
        self
    }

    pub fn succ(&mut self, dst: u64, src: u64) -> &mut Self {
        self.stmts.push(Stmt::Succ(VarId::new(dst), VarId::new(src)));
        self
    }

    pub fn pred(&mut self, dst: u64, src: u64) -> &mut Self {
        self.stmts.push(Stmt::Pred(VarId::new(dst), VarId::new(src)));
        self
    }

    pub fn mkpair(&mut self, dst: u64, a: u64, b: u64) -> &mut Self {
        self.stmts
            .push(Stmt::MkPair(VarId::new(dst), VarId::new(a), VarId::new(b)));
        self
    }

    pub fn first(&mut self, dst: u64, src: u64) -> &mut Self {
        self.stmts.push(Stmt::First(VarId::new(dst), VarId::new(src)));
        self
    }

    pub fn second(&mut self, dst: u64, src: u64) -> &mut Self {
        self.stmts.push(Stmt::Second(VarId::new(dst), VarId::new(src)));
        self
    }

    pub fn while_nonzero(&mut self, guard: u64, f: impl FnOnce(&mut ProgramBuilder)) -> &mut Self {
        let mut inner = ProgramBuilder { stmts: Vec::new(), allow_query: self.allow_query };
        f(&mut inner);
        self.stmts
            .push(Stmt::Loop(VarId::new(guard), Rc::new(inner.stmts)));
        self
    }

    pub fn if_zero(
        &mut self,
        guard: u64,
        then_f: impl FnOnce(&mut ProgramBuilder),
        else_f: impl FnOnce(&mut ProgramBuilder),
    ) -> &mut Self {
        let mut t = ProgramBuilder { stmts: Vec::new(), allow_query: self.allow_query };
        then_f(&mut t);
        let mut e = ProgramBuilder { stmts: Vec::new(), allow_query: self.allow_query };
        else_f(&mut e);
        self.stmts.push(Stmt::Branch(
            VarId::new(guard),
            Rc::new(t.stmts),
            Rc::new(e.stmts),
        ));
        self
    }

    pub fn eval(&mut self, dst: u64, code: u64, arg: u64) -> &mut Self {
        self.stmts.push(Stmt::Eval(
            VarId::new(dst),
            VarId::new(code),
            VarId::new(arg),
        ));
        self
    }

    pub fn smn_stmt(&mut self, dst: u64, code: u64, arg: u64) -> &mut Self {
        self.stmts.push(Stmt::Smn(
            VarId::new(dst),
            VarId::new(code),
            VarId::new(arg),
        ));
        self
    }

    pub fn beval(&mut self, dst: u64, code: u64, arg: u64, budget: u64) -> &mut Self {
        self.stmts.push(Stmt::Beval(
            VarId::new(dst),
            VarId::new(code),
            VarId::new(arg),
            VarId::new(budget),
        ));
        self
    }

    pub fn query(&mut self, dst: u64, arg: u64) -> &mut Self {
        assert!(self.allow_query, "query is only legal in oracle programs");
        self.stmts.push(Stmt::Query(VarId::new(dst), VarId::new(arg)));
        self
    }

    // -- derived macros (unary arithmetic) ----------------------------------

    /// dst += src. Clobbers `t`. Cost ~3·src.
    pub fn add_into(&mut self, dst: u64, src: u64, t: u64) -> &mut Self {
        self.copy(t, src);
        self.while_nonzero(t, |b| {
            b.succ(dst, dst);
            b.pred(t, t);
        });
        self
    }

    /// dst := a · b by repeated addition. Clobbers t1, t2. Cost ~3·a·b.
    pub fn mul(&mut self, dst: u64, a: u64, b: u64, t1: u64, t2: u64) -> &mut Self {
        assert!(dst != a && dst != b, "mul destination must not alias inputs");
        self.assign(dst, 0u64);
        self.copy(t1, a);
        self.while_nonzero(t1, |bb| {
            bb.copy(t2, b);
            bb.while_nonzero(t2, |bbb| {
                bbb.succ(dst, dst);
                bbb.pred(t2, t2);
            });
            bb.pred(t1, t1);
        });
        self
    }

    /// dst := a ∸ b. Clobbers `t`. Cost ~3·b.
    pub fn monus(&mut self, dst: u64, a: u64, b: u64, t: u64) -> &mut Self {
        self.copy(dst, a);
        self.copy(t, b);
        self.while_nonzero(t, |bb| {
            bb.pred(dst, dst);
            bb.pred(t, t);
        });
        self
    }

    /// dst := 1 if a == b else 0, by double monus. `b` should be the side
    /// known to be small: the cost is O(b + min(a, b)) regardless of a.
    /// Clobbers t1.
    pub fn eq_by_monus(&mut self, dst: u64, a: u64, b: u64, t1: u64) -> &mut Self {
        // dst := a ∸ b
        self.monus(dst, a, b, t1);
        self.if_zero(
            dst,
            |bb| {
                // a ≤ b: equality iff b ∸ a = 0; a ≤ b keeps this cheap.
                bb.monus(dst, b, a, t1);
                bb.if_zero(dst, |t| {
                    t.assign(dst, 1u64);
                }, |e| {
                    e.assign(dst, 0u64);
                });
            },
            |bb| {
                bb.assign(dst, 0u64);
            },
        );
        self
    }

    /// dst := 2·src. Clobbers `t`.
    pub fn double(&mut self, dst: u64, src: u64, t: u64) -> &mut Self {
        assert!(dst != src);
        self.assign(dst, 0u64);
        self.copy(t, src);
        self.while_nonzero(t, |b| {
            b.succ(dst, dst);
            b.succ(dst, dst);
            b.pred(t, t);
        });
        self
    }

    /// Enter an infinite loop. Clobbers `t`.
    pub fn diverge(&mut self, t: u64) -> &mut Self {
        self.succ(t, t);
        self.while_nonzero(t, |_| {});
        self
    }

    /// dst := 1 if the (arbitrarily large) values in `a` and `b` are equal,
    /// else 0. Walks the pair trees of both numbers with an explicit stack,
    /// so the cost is proportional to the smaller tree, never to the value.
    /// Uses nine scratch registers starting at `scratch`.
    pub fn structural_eq(&mut self, dst: u64, a: u64, b: u64, scratch: u64) -> &mut Self {
        let s = scratch; // stack
        let task = scratch + 1;
        let xa = scratch + 2;
        let xb = scratch + 3;
        let ta = scratch + 4;
        let tb = scratch + 5;
        let u = scratch + 6;
        let v = scratch + 7;
        let z = scratch + 8; // known zero

        self.assign(dst, 1u64);
        self.assign(z, 0u64);
        self.mkpair(task, a, b);
        self.mkpair(s, task, z);
        self.succ(s, s); // stack = cons((a,b), nil)
        self.while_nonzero(s, |bb| {
            bb.pred(s, s);
            bb.first(task, s);
            bb.second(s, s);
            bb.first(xa, task);
            bb.second(xb, task);
            // ta := xa ∸ 2, tb := xb ∸ 2 (values ≤ 2 are leaves)
            bb.copy(ta, xa);
            bb.pred(ta, ta);
            bb.pred(ta, ta);
            bb.copy(tb, xb);
            bb.pred(tb, tb);
            bb.pred(tb, tb);
            bb.if_zero(
                ta,
                |leaf| {
                    leaf.if_zero(
                        tb,
                        |both| {
                            // both ≤ 2: exact compare via double monus
                            both.copy(u, xa);
                            both.copy(v, xb);
                            both.while_nonzero(v, |m| {
                                m.pred(u, u);
                                m.pred(v, v);
                            });
                            // u = xa ∸ xb; now v := xb ∸ xa
                            both.copy(v, xb);
                            both.copy(ta, xa);
                            both.while_nonzero(ta, |m| {
                                m.pred(v, v);
                                m.pred(ta, ta);
                            });
                            both.while_nonzero(v, |m| {
                                m.succ(u, u);
                                m.pred(v, v);
                            });
                            both.if_zero(u, |_| {}, |ne| {
                                ne.assign(dst, 0u64);
                                ne.assign(s, 0u64);
                            });
                        },
                        |ne| {
                            ne.assign(dst, 0u64);
                            ne.assign(s, 0u64);
                        },
                    );
                },
                |big| {
                    big.if_zero(
                        tb,
                        |ne| {
                            ne.assign(dst, 0u64);
                            ne.assign(s, 0u64);
                        },
                        |push| {
                            // both ≥ 3: compare components; unpairing any
                            // value ≥ 3 strictly decreases it.
                            push.first(u, xa);
                            push.first(v, xb);
                            push.mkpair(task, u, v);
                            push.mkpair(s, task, s);
                            push.succ(s, s);
                            push.second(u, xa);
                            push.second(v, xb);
                            push.mkpair(task, u, v);
                            push.mkpair(s, task, s);
                            push.succ(s, s);
                        },
                    );
                },
            );
        });
        self
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{run_program, Fuel, Outcome};
    use crate::nat::{pair_nat, Nat};

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    fn run_val(p: &Program, input: Nat, fuel: u64) -> Option<u64> {
        match run_program(p, &input, Fuel(fuel)) {
            Outcome::Halted { value, .. } => value.to_u64(),
            Outcome::Exhausted { .. } => None,
        }
    }

    #[test]
    fn eq_macro() {
        // input pair(a, b) -> a == b
        let mut b = ProgramBuilder::new();
        b.first(1, 0);
        b.second(2, 0);
        b.eq_by_monus(0, 1, 2, 3);
        let p = b.build();
        assert_eq!(run_val(&p, pair_nat(&n(5), &n(5)), 10_000), Some(1));
        assert_eq!(run_val(&p, pair_nat(&n(5), &n(6)), 10_000), Some(0));
        assert_eq!(run_val(&p, pair_nat(&n(0), &n(0)), 10_000), Some(1));
    }

    #[test]
    fn mul_macro() {
        let mut b = ProgramBuilder::new();
        b.first(1, 0);
        b.second(2, 0);
        b.mul(0, 1, 2, 3, 4);
        let p = b.build();
        assert_eq!(run_val(&p, pair_nat(&n(6), &n(7)), 10_000), Some(42));
        assert_eq!(run_val(&p, pair_nat(&n(0), &n(9)), 10_000), Some(0));
    }

    #[test]
    fn structural_eq_on_big_trees() {
        use crate::specializer::smn_code;
        // Two equal giant codes and two different ones.
        let base = crate::objlang::div_index().0;
        let big1 = smn_code(&base, &smn_code(&base, &base));
        let big2 = smn_code(&base, &smn_code(&base, &base));
        let big3 = smn_code(&base, &smn_code(&base, &n(7)));

        let mut b = ProgramBuilder::new();
        b.first(1, 0);
        b.second(2, 0);
        b.structural_eq(0, 1, 2, 40);
        let p = b.build();

        assert_eq!(run_val(&p, pair_nat(&big1, &big2), 2_000_000), Some(1));
        assert_eq!(run_val(&p, pair_nat(&big1, &big3), 2_000_000), Some(0));
        assert_eq!(run_val(&p, pair_nat(&n(2), &n(2)), 10_000), Some(1));
        assert_eq!(run_val(&p, pair_nat(&n(0), &big1), 10_000), Some(0));
        assert_eq!(run_val(&p, pair_nat(&n(17), &n(17)), 10_000), Some(1));
        assert_eq!(run_val(&p, pair_nat(&n(17), &n(18)), 10_000), Some(0));
    }

    #[test]
    fn diverge_macro() {
        let mut b = ProgramBuilder::new();
        b.diverge(1);
        let p = b.build();
        assert_eq!(run_val(&p, n(0), 10_000), None);
    }
}
