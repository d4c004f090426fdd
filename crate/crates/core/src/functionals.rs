//! Effective operations and their fixed points: the dovetailing least
//! fixed point, the standard-form transformer, the non-minimal
//! counterexample, oracle-machine functionals, and the separation example.
//!
//! All "parallel processes" live inside single deterministic evaluations:
//! dovetailing is a scheduled loop over budgeted `beval` probes, never host
//! parallelism.

use std::rc::Rc;

use crate::builder::ProgramBuilder;
use crate::evaluator::{run, run_oracle, Fuel, Oracle, Outcome};
use crate::nat::{nat_cmp, nat_eq, succ_nat, pair_nat, pred_nat, unpair_nat, Nat};
use crate::objlang::{div_index, Index, OracleProgram, Program, Stmt, VarId};
use crate::recursion::{kleene_fix, rogers_n, Blueprint};
use crate::specializer::{subst_const, Template};

// ---------------------------------------------------------------------------
// Finite functions and their graph codes
// ---------------------------------------------------------------------------

/// A finite partial function on naturals. The canonical graph code θ̂ encodes
/// the entry list sorted by argument ascending.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct FiniteFn {
    entries: Vec<(Nat, Nat)>,
}

impl FiniteFn {
    pub fn empty() -> FiniteFn {
        FiniteFn::default()
    }

    /// Build from pairs; a repeated argument keeps its first binding.
    pub fn from_pairs<I: IntoIterator<Item = (Nat, Nat)>>(pairs: I) -> FiniteFn {
        let mut entries: Vec<(Nat, Nat)> = Vec::new();
        for (a, v) in pairs {
            if !entries.iter().any(|(x, _)| nat_eq(x, &a)) {
                entries.push((a, v));
            }
        }
        entries.sort_by(|(a, _), (b, _)| nat_cmp(a, b));
        FiniteFn { entries }
    }

    pub fn entries(&self) -> &[(Nat, Nat)] {
        &self.entries
    }

    pub fn len(&self) -> usize {
        self.entries.len()
    }

    pub fn is_empty(&self) -> bool {
        self.entries.is_empty()
    }

    pub fn lookup(&self, a: &Nat) -> Option<&Nat> {
        self.entries
            .iter()
            .find(|(x, _)| nat_eq(x, a))
            .map(|(_, v)| v)
    }

    pub fn is_subset_of(&self, other: &FiniteFn) -> bool {
        self.entries
            .iter()
            .all(|(a, v)| other.lookup(a).map(|w| nat_eq(v, w)).unwrap_or(false))
    }

    /// The canonical graph code: cons-list of pair(arg, val), args ascending.
    pub fn graph_code(&self) -> Nat {
        let mut code = Nat::zero();
        for (a, v) in self.entries.iter().rev() {
            code = succ_nat(&pair_nat(&pair_nat(a, v), &code));
        }
        code
    }

    /// Total decoding of any natural as a graph.
    pub fn graph_decode(n: &Nat) -> FiniteFn {
        let mut pairs = Vec::new();
        let mut cur = n.clone();
        while !cur.is_zero() {
            let cell = pred_nat(&cur);
            let (entry, rest) = unpair_nat(&cell);
            let (a, v) = unpair_nat(&entry);
            pairs.push((a, v));
            cur = rest;
        }
        FiniteFn::from_pairs(pairs)
    }
}

pub fn graph_code(t: &FiniteFn) -> Nat {
    t.graph_code()
}

pub fn graph_decode(n: &Nat) -> FiniteFn {
    FiniteFn::graph_decode(n)
}

// ---------------------------------------------------------------------------
// d: graph code -> index (the lookup-or-diverge program)
// ---------------------------------------------------------------------------

/// Template behind `finite_fn_index`: on pair(g, x), walk the entry list of
/// g; output the bound value, diverge when x is unbound. The argument
/// comparison is ordered so its cost is bounded by the entry's argument, not
/// by x.
pub fn lookup_template() -> Template {
    let mut b = ProgramBuilder::new();
    b.first(1, 0); // entry list
    b.second(9, 0); // x
    b.assign(8, 0u64); // found flag
    b.while_nonzero(1, |w| {
        w.pred(1, 1);
        w.first(2, 1); // entry
        w.second(1, 1); // rest
        w.first(3, 2); // a
        w.second(4, 2); // v
        // x ∸ a, cost O(a)
        w.monus(5, 9, 3, 6);
        w.if_zero(
            5,
            |le| {
                // x ≤ a: equal iff a ∸ x = 0, cost O(x) ≤ O(a)
                le.monus(5, 3, 9, 6);
                le.if_zero(
                    5,
                    |eq| {
                        eq.copy(0, 4);
                        eq.assign(8, 1u64);
                        eq.assign(1, 0u64);
                    },
                    |_| {},
                );
            },
            |_| {},
        );
    });
    b.if_zero(
        8,
        |miss| {
            miss.diverge(7);
        },
        |_| {},
    );
    Template::new(b.build())
}

/// The paper's d: an index for the finite function with graph code g,
/// diverging off the graph.
pub fn finite_fn_index(g: &Nat) -> Index {
    subst_const(&lookup_template(), g)
}

// ---------------------------------------------------------------------------
// Graph enumeration (square dovetailing)
// ---------------------------------------------------------------------------

/// {(i, v) : i ≤ rounds, run(p, i, rounds) = Halted(v, _)} — deterministic
/// square dovetailing, monotone in `rounds`.
pub fn enumerate_graph(p: &Index, rounds: u64) -> FiniteFn {
    let mut pairs = Vec::new();
    for i in 0..=rounds {
        let x = Nat::from_u64(i);
        if let Outcome::Halted { value, .. } = run(p, &x, Fuel(rounds)) {
            pairs.push((x, value));
        }
    }
    FiniteFn::from_pairs(pairs)
}

// ---------------------------------------------------------------------------
// Effective operations
// ---------------------------------------------------------------------------

/// A total extensional code transformer f, inducing F(φ_x) = φ_{f(x)}.
/// Totality and extensionality are assumptions: probed, never proved.
#[derive(Clone, Debug)]
pub struct EffectiveOp {
    pub transformer: Index,
}

impl EffectiveOp {
    pub fn new(transformer: Index) -> EffectiveOp {
        EffectiveOp { transformer }
    }

    /// Apply the transformer to an index, host-side.
    pub fn apply(&self, g: &Index, fuel: Fuel) -> Option<Index> {
        match run(&self.transformer, g.nat(), fuel) {
            Outcome::Halted { value, .. } => Some(Index(value)),
            Outcome::Exhausted { .. } => None,
        }
    }

    /// F(θ) for a finite θ, via the index d(θ̂).
    pub fn apply_to_finite(&self, theta: &FiniteFn, fuel: Fuel) -> Option<Index> {
        self.apply(&finite_fn_index(&theta.graph_code()), fuel)
    }
}

pub fn factorial_step_op() -> EffectiveOp {
    EffectiveOp::new(crate::corpus::factorial_step_transformer().encode())
}

pub fn identity_op() -> EffectiveOp {
    EffectiveOp::new(crate::corpus::identity_transformer().encode())
}

// ---------------------------------------------------------------------------
// FRT: the dovetailing least fixed point
// ---------------------------------------------------------------------------

/// The dovetailer template behind `frt_lfp`: on pair(q, x), run rounds
/// r = 1, 2, …; each round extends the cached chain with p_r = φ_q(p_{r−1})
/// (p_0 = DIV) and probes beval(p_i, x, r³) for i ≤ r ascending, halting at
/// the first hit. The cubic round budget is the deterministic schedule that
/// lets unary arithmetic inside chain members finish while the scan stays
/// polynomial in the round number.
pub fn frt_template() -> Template {
    let div = div_index();
    let mut b = ProgramBuilder::new();
    b.first(1, 0); // q
    b.second(9, 0); // x
    b.assign_nat(2, div.0.clone()); // last chain element p_0
    b.assign(4, 0u64);
    b.mkpair(3, 2, 4);
    b.succ(3, 3); // chain = [p_0], newest first
    b.assign(5, 1u64); // r
    b.assign(6, 1u64); // r²
    b.assign(7, 1u64); // r³ (round budget)
    b.assign(8, 1u64); // running flag
    b.while_nonzero(8, |round| {
        // extend the chain
        round.eval(2, 1, 2);
        round.mkpair(3, 2, 3);
        round.succ(3, 3);
        // reverse for an ascending scan
        round.assign(10, 0u64);
        round.copy(11, 3);
        round.while_nonzero(11, |rev| {
            rev.pred(11, 11);
            rev.first(12, 11);
            rev.second(11, 11);
            rev.mkpair(10, 12, 10);
            rev.succ(10, 10);
        });
        round.while_nonzero(10, |scan| {
            scan.pred(10, 10);
            scan.first(12, 10);
            scan.second(10, 10);
            scan.beval(13, 12, 9, 7);
            scan.first(14, 13);
            scan.if_zero(
                14,
                |_| {},
                |hit| {
                    hit.second(0, 13);
                    hit.assign(8, 0u64);
                    hit.assign(10, 0u64);
                },
            );
        });
        round.if_zero(
            8,
            |_| {},
            |bump| {
                // (r+1)³ = r³ + 3r² + 3r + 1, (r+1)² = r² + 2r + 1
                bump.add_into(7, 6, 15);
                bump.add_into(7, 6, 15);
                bump.add_into(7, 6, 15);
                bump.add_into(7, 5, 15);
                bump.add_into(7, 5, 15);
                bump.add_into(7, 5, 15);
                bump.succ(7, 7);
                bump.add_into(6, 5, 15);
                bump.add_into(6, 5, 15);
                bump.succ(6, 6);
                bump.succ(5, 5);
            },
        );
    });
    Template::new(b.build())
}

/// A code for the least fixed point of the effective operation realized by
/// q, computed by the in-language dovetailer.
pub fn frt_lfp(q: &EffectiveOp) -> Index {
    subst_const(&frt_template(), q.transformer.nat())
}

/// Host-side brute force for cross-checking: the chain ∅, F(∅), F(F(∅)), …
/// by direct evaluation, graphs restricted to arguments 0..=max_arg.
pub fn brute_force_chain(
    op: &EffectiveOp,
    depth: usize,
    max_arg: u64,
    fuel: Fuel,
) -> Option<Vec<FiniteFn>> {
    let mut chain = vec![FiniteFn::empty()];
    for _ in 0..depth {
        let prev = chain.last().unwrap();
        let image = op.apply_to_finite(prev, fuel)?;
        let mut pairs = Vec::new();
        for a in 0..=max_arg {
            let x = Nat::from_u64(a);
            if let Outcome::Halted { value, .. } = run(&image, &x, fuel) {
                pairs.push((x, value));
            }
        }
        chain.push(FiniteFn::from_pairs(pairs));
    }
    Some(chain)
}

/// Graph of an index restricted to arguments 0..=max_arg, by direct runs.
/// Equals enumerate_graph(p, fuel) ∩ {args ≤ max_arg} by definition, without
/// running the dovetailer on every argument up to the fuel bound.
pub fn restricted_graph(p: &Index, max_arg: u64, fuel: Fuel) -> FiniteFn {
    let mut pairs = Vec::new();
    for a in 0..=max_arg {
        let x = Nat::from_u64(a);
        if let Outcome::Halted { value, .. } = run(p, &x, fuel) {
            pairs.push((x, value));
        }
    }
    FiniteFn::from_pairs(pairs)
}

// ---------------------------------------------------------------------------
// The standard form
// ---------------------------------------------------------------------------

/// The worker behind the standard form: on pair(pair(f, y), x), search for a
/// finite θ with F(θ)(x) defined and θ ⊆ φ_y, and output that value.
///
/// Deterministic schedule: epochs double the graph range G and the
/// verification budget V while the candidate-probe budget P1 grows linearly,
/// so every (θ, budget) combination is eventually reached (completeness) and
/// nothing is emitted unverified (soundness). Graph codes are scanned
/// ascending from 0 — the enumeration starts at the empty function.
fn standard_form_worker() -> Program {
    let td = lookup_template().index();
    let mut b = ProgramBuilder::new();
    b.first(1, 0); // K = pair(f, y)
    b.second(9, 0); // x
    b.first(2, 1); // f
    b.second(3, 1); // y
    b.assign(4, 1u64); // G: graph-code range
    b.assign(5, 512u64); // V: verification budget
    b.assign(6, 512u64); // P1: candidate probe budget
    b.assign(8, 1u64); // running flag
    b.assign_nat(7, td.0.clone()); // lookup template
    b.while_nonzero(8, |epoch| {
        epoch.assign(10, 0u64); // g
        epoch.copy(11, 4); // countdown
        epoch.while_nonzero(11, |scan| {
            scan.smn_stmt(12, 7, 10); // d(g)
            scan.eval(12, 2, 12); // i_g = φ_f(d(g))
            scan.beval(13, 12, 9, 6); // probe F(θ_g)(x) within P1
            scan.first(14, 13);
            scan.if_zero(
                14,
                |_| {},
                |hit| {
                    hit.second(15, 13); // candidate value t
                    // verify θ_g ⊆ φ_y entry by entry
                    hit.copy(16, 10);
                    hit.assign(17, 1u64); // ok flag
                    hit.while_nonzero(16, |ver| {
                        ver.pred(16, 16);
                        ver.first(18, 16); // entry pair(a, b)
                        ver.second(16, 16);
                        ver.first(19, 18); // a
                        ver.second(20, 18); // b
                        ver.beval(21, 3, 19, 5); // φ_y(a) within V
                        ver.first(22, 21);
                        ver.if_zero(
                            22,
                            |miss| {
                                miss.assign(17, 0u64);
                                miss.assign(16, 0u64);
                            },
                            |got| {
                                got.second(23, 21);
                                // observed == expected? expected entries are
                                // the cheap side of the monus pair.
                                got.monus(24, 23, 20, 25);
                                got.if_zero(
                                    24,
                                    |le| {
                                        le.monus(24, 20, 23, 25);
                                        le.if_zero(24, |_| {}, |ne| {
                                            ne.assign(17, 0u64);
                                            ne.assign(16, 0u64);
                                        });
                                    },
                                    |gt| {
                                        gt.assign(17, 0u64);
                                        gt.assign(16, 0u64);
                                    },
                                );
                            },
                        );
                    });
                    hit.if_zero(17, |_| {}, |ok| {
                        ok.copy(0, 15);
                        ok.assign(8, 0u64);
                        ok.assign(11, 1u64); // drained below
                    });
                },
            );
            scan.succ(10, 10);
            scan.pred(11, 11);
        });
        epoch.if_zero(
            8,
            |_| {},
            |bump| {
                bump.add_into(4, 4, 26); // G *= 2
                bump.add_into(5, 5, 26); // V *= 2
                bump.assign(26, 256u64);
                bump.while_nonzero(26, |w| {
                    w.succ(6, 6);
                    w.pred(26, 26);
                }); // P1 += 256
            },
        );
    });
    b.build()
}

/// Template for h_f itself: on pair(f, y), output the worker specialized to
/// pair(f, y). h_f is trivially total — it only builds code.
pub fn standard_form_template() -> Template {
    let worker = standard_form_worker().encode();
    let mut b = ProgramBuilder::new();
    b.first(1, 0); // f
    b.second(2, 0); // y
    b.mkpair(3, 1, 2);
    b.assign_nat(4, worker.0);
    b.smn_stmt(0, 4, 3);
    Template::new(b.build())
}

/// An index v with φ_v = h_f: the standard form of the transformer f.
pub fn standard_form(f: &Index) -> Index {
    subst_const(&standard_form_template(), f.nat())
}

/// Theorem-4.4 route to the least fixed point: n(standard_form(f)).
pub fn lfp_via_stdform(f: &Index) -> Index {
    rogers_n(&standard_form(f))
}

// ---------------------------------------------------------------------------
// The non-minimal counterexample
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub struct NonminimalReport {
    pub m: Index,
    pub n_m: Index,
    pub t: Index,
    /// φ_m echoes every sampled x ≠ n(m).
    pub echo_ok: bool,
    /// φ_m(n(m)) = t.
    pub singularity_ok: bool,
    /// φ_{n(m)} is the constant zero function on the samples — the SRT fixed
    /// point of the identity functional, which is *not* its least fixed point.
    pub constant_zero_ok: bool,
}

impl NonminimalReport {
    pub fn pass(&self) -> bool {
        self.echo_ok && self.singularity_ok && self.constant_zero_ok
    }
}

/// The blueprint behind m: on pair(self, x), rebuild ν = n(self) with the
/// frozen templates of rogers_n, then output t if x = ν and x otherwise.
/// The comparison walks pair trees, so it costs time proportional to the
/// syntax of m, not to the value of ν.
fn counterexample_blueprint() -> Program {
    let tr = crate::recursion::rogers_template().index();
    let tk = crate::recursion::kleene_template().index();
    let t = crate::corpus::constant_zero_program().encode();
    let mut b = ProgramBuilder::new();
    b.first(30, 0); // self
    b.second(31, 0); // x
    b.assign_nat(1, tr.0);
    b.smn_stmt(2, 1, 30); // blueprint = smn(T_R, self)
    b.assign_nat(1, tk.0);
    b.smn_stmt(3, 1, 2); // q = smn(T_K, blueprint)
    b.smn_stmt(4, 3, 3); // ν = smn(q, q) = n(self)
    b.structural_eq(5, 31, 4, 40);
    b.if_zero(
        5,
        |echo| {
            echo.copy(0, 31);
        },
        |sing| {
            sing.assign_nat(0, t.0.clone());
        },
    );
    b.build()
}

/// Rogers' construction: an extensional m realizing the identity functional
/// whose SRT fixed point n(m) is the constant zero function rather than the
/// least fixed point (the empty function).
pub fn nonminimal_counterexample(fuel: Fuel) -> NonminimalReport {
    let m = kleene_fix(&Blueprint(counterexample_blueprint().encode()));
    let n_m = rogers_n(&m);
    let t = crate::corpus::constant_zero_program().encode();

    let mut echo_ok = true;
    for x in 0..10u64 {
        let x = Nat::from_u64(x);
        match run(&m, &x, fuel) {
            Outcome::Halted { value, .. } if nat_eq(&value, &x) => {}
            _ => {
                echo_ok = false;
                break;
            }
        }
    }

    let singularity_ok = match run(&m, n_m.nat(), fuel) {
        Outcome::Halted { value, .. } => nat_eq(&value, t.nat()),
        _ => false,
    };

    let mut constant_zero_ok = true;
    for x in 0..10u64 {
        match run(&n_m, &Nat::from_u64(x), fuel) {
            Outcome::Halted { value, .. } if value.is_zero() => {}
            _ => {
                constant_zero_ok = false;
                break;
            }
        }
    }

    NonminimalReport { m, n_m, t, echo_ok, singularity_ok, constant_zero_ok }
}

// ---------------------------------------------------------------------------
// Odifreddi: oracle programs and their least fixed points via the SRT
// ---------------------------------------------------------------------------

fn max_register(stmts: &[Stmt]) -> u64 {
    fn reg(v: &VarId) -> u64 {
        v.0.to_u64().expect("oracle programs use small registers")
    }
    let mut m = 0;
    for s in stmts {
        let regs: Vec<u64> = match s {
            Stmt::AssignConst(d, _) => vec![reg(d)],
            Stmt::Copy(d, s)
            | Stmt::Succ(d, s)
            | Stmt::Pred(d, s)
            | Stmt::First(d, s)
            | Stmt::Second(d, s)
            | Stmt::Query(d, s) => vec![reg(d), reg(s)],
            Stmt::MkPair(d, a, b) => vec![reg(d), reg(a), reg(b)],
            Stmt::Loop(g, body) => {
                m = m.max(max_register(body));
                vec![reg(g)]
            }
            Stmt::Branch(g, t, e) => {
                m = m.max(max_register(t)).max(max_register(e));
                vec![reg(g)]
            }
            Stmt::Eval(d, c, a) | Stmt::Smn(d, c, a) => vec![reg(d), reg(c), reg(a)],
            Stmt::Beval(d, c, a, b) => vec![reg(d), reg(c), reg(a), reg(b)],
            Stmt::Noop => vec![],
        };
        for r in regs {
            m = m.max(r);
        }
    }
    m
}

fn replace_queries(stmts: &[Stmt], code_reg: u64) -> Vec<Stmt> {
    stmts
        .iter()
        .map(|s| match s {
            Stmt::Query(d, a) => Stmt::Eval(d.clone(), VarId::new(code_reg), a.clone()),
            Stmt::Loop(g, body) => {
                Stmt::Loop(g.clone(), Rc::new(replace_queries(body, code_reg)))
            }
            Stmt::Branch(g, t, e) => Stmt::Branch(
                g.clone(),
                Rc::new(replace_queries(t, code_reg)),
                Rc::new(replace_queries(e, code_reg)),
            ),
            other => other.clone(),
        })
        .collect()
}

/// The blueprint q with φ_q(pair(e, x)) ≃ F(φ_e)(x): the body of F with every
/// oracle call replaced by a recursive call to the code e.
pub fn odifreddi_blueprint(f: &OracleProgram) -> Program {
    let code_reg = max_register(&f.body) + 1;
    let mut stmts = vec![
        Stmt::First(VarId::new(code_reg), VarId::new(0)),
        Stmt::Second(VarId::new(0), VarId::new(0)),
    ];
    stmts.extend(replace_queries(&f.body, code_reg));
    Program::new(stmts)
}

/// Odifreddi's route: the least fixed point of a partial recursive
/// functional, obtained by replacing oracle calls with recursive calls to
/// another copy of the program itself and applying the SRT.
pub fn odifreddi_lfp(f: &OracleProgram) -> Index {
    kleene_fix(&Blueprint(odifreddi_blueprint(f).encode()))
}

/// The factorial oracle program: 1 if y = 0, else y · oracle(y − 1).
pub fn factorial_oracle_program() -> OracleProgram {
    let mut b = ProgramBuilder::new_oracle();
    b.copy(2, 0); // y
    b.if_zero(
        2,
        |t| {
            t.assign(0, 1u64);
        },
        |e| {
            e.pred(3, 2);
            e.query(3, 3);
            e.mul(0, 2, 3, 4, 5);
        },
    );
    b.build_oracle()
}

/// The identity functional as an oracle program: one query on the input.
pub fn identity_oracle_program() -> OracleProgram {
    let mut b = ProgramBuilder::new_oracle();
    b.query(0, 0);
    b.build_oracle()
}

// ---------------------------------------------------------------------------
// Sasso's separation
// ---------------------------------------------------------------------------

/// The Sasso worker: on pair(g, x), dovetail beval probes of φ_g(2x) and
/// φ_g(2x+1) under growing budgets, halting with 0 as soon as either is 0.
pub fn sasso_template() -> Template {
    let mut b = ProgramBuilder::new();
    b.first(1, 0); // g
    b.second(2, 0); // x
    b.double(3, 2, 4); // 2x
    b.succ(5, 3); // 2x + 1
    b.assign(6, 1u64); // budget
    b.assign(7, 1u64); // running flag
    b.while_nonzero(7, |l| {
        l.beval(8, 1, 3, 6);
        l.first(9, 8);
        l.if_zero(9, |_| {}, |hit| {
            hit.second(10, 8);
            hit.if_zero(
                10,
                |z| {
                    z.assign(0, 0u64);
                    z.assign(7, 0u64);
                },
                |_| {},
            );
        });
        l.if_zero(
            7,
            |_| {},
            |go| {
                go.beval(8, 1, 5, 6);
                go.first(9, 8);
                go.if_zero(9, |_| {}, |hit| {
                    hit.second(10, 8);
                    hit.if_zero(
                        10,
                        |z| {
                            z.assign(0, 0u64);
                            z.assign(7, 0u64);
                        },
                        |_| {},
                    );
                });
            },
        );
        l.succ(6, 6);
    });
    Template::new(b.build())
}

/// The extensional transformer realizing Sasso's functional: effectively
/// continuous because the worker dovetails its two probes in-language.
pub fn sasso_op() -> EffectiveOp {
    let ts = sasso_template().index();
    let mut b = ProgramBuilder::new();
    b.assign_nat(1, ts.0);
    b.smn_stmt(0, 1, 0);
    EffectiveOp::new(b.build().encode())
}

/// Deterministic oracle program that queries f(2x) first, then f(2x+1).
pub fn sasso_query_left() -> OracleProgram {
    let mut b = ProgramBuilder::new_oracle();
    b.double(1, 0, 2);
    b.query(3, 1);
    b.if_zero(
        3,
        |z| {
            z.assign(0, 0u64);
        },
        |nz| {
            nz.succ(1, 1);
            nz.query(3, 1);
            nz.if_zero(
                3,
                |z| {
                    z.assign(0, 0u64);
                },
                |d| {
                    d.diverge(4);
                },
            );
        },
    );
    b.build_oracle()
}

/// Deterministic oracle program that queries f(2x+1) first, then f(2x).
pub fn sasso_query_right() -> OracleProgram {
    let mut b = ProgramBuilder::new_oracle();
    b.double(1, 0, 2);
    b.succ(1, 1);
    b.query(3, 1);
    b.if_zero(
        3,
        |z| {
            z.assign(0, 0u64);
        },
        |nz| {
            nz.pred(1, 1);
            nz.query(3, 1);
            nz.if_zero(
                3,
                |z| {
                    z.assign(0, 0u64);
                },
                |d| {
                    d.diverge(4);
                },
            );
        },
    );
    b.build_oracle()
}

#[derive(Clone, Debug)]
pub struct SassoCase {
    pub oracle: String,
    pub worker: Outcome,
    pub query_left: Outcome,
    pub query_right: Outcome,
}

#[derive(Clone, Debug)]
pub struct SassoReport {
    pub x: u64,
    pub cases: Vec<SassoCase>,
}

impl SassoReport {
    /// The separation: the dovetailed worker answers on both one-sided
    /// oracles and stays silent on the empty one, while each deterministic
    /// query order diverges on the oracle bound only on its second-choice
    /// point.
    pub fn pass(&self) -> bool {
        if self.cases.len() != 3 {
            return false;
        }
        let zero = |o: &Outcome| matches!(o.value(), Some(v) if v.is_zero());
        let exhausted = |o: &Outcome| !o.is_halted();
        let left_bound = &self.cases[0]; // {2x ↦ 0}
        let right_bound = &self.cases[1]; // {2x+1 ↦ 0}
        let empty = &self.cases[2];
        zero(&left_bound.worker)
            && zero(&right_bound.worker)
            && exhausted(&empty.worker)
            && zero(&left_bound.query_left)
            && exhausted(&left_bound.query_right)
            && zero(&right_bound.query_right)
            && exhausted(&right_bound.query_left)
    }
}

/// Run the three oracle cases of the separation at x = 3.
pub fn sasso_demo(fuel: Fuel) -> SassoReport {
    let x = 3u64;
    let op = sasso_op();
    let n = Nat::from_u64;
    let cases = [
        ("{6 ↦ 0}", FiniteFn::from_pairs([(n(6), n(0))])),
        ("{7 ↦ 0}", FiniteFn::from_pairs([(n(7), n(0))])),
        ("empty", FiniteFn::empty()),
    ];
    let mut out = Vec::new();
    for (desc, theta) in cases {
        let d_idx = finite_fn_index(&theta.graph_code());
        let worker = match op.apply(&d_idx, fuel) {
            Some(w) => run(&w, &n(x), fuel),
            None => Outcome::Exhausted { budget: fuel.0 },
        };
        let oracle = Oracle::Index(d_idx);
        let query_left = run_oracle(&sasso_query_left(), &oracle, &n(x), fuel);
        let query_right = run_oracle(&sasso_query_right(), &oracle, &n(x), fuel);
        out.push(SassoCase {
            oracle: desc.to_string(),
            worker,
            query_left,
            query_right,
        });
    }
    SassoReport { x, cases: out }
}

// ---------------------------------------------------------------------------
// Compactness probe
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum CompactnessResult {
    Witness {
        theta: FiniteFn,
        theta_code: Nat,
        value: Nat,
        candidates_tried: usize,
        codes_examined: u64,
    },
    /// No witness within the candidate bound: reported, never treated as a
    /// refutation of compactness.
    FailureWithinBound {
        candidates_tried: usize,
        codes_examined: u64,
    },
    /// F(φ_g)(x) itself did not halt within the budget.
    BaseValueUnavailable,
}

/// Search canonical graph codes ascending for a finite θ ⊆ φ_g (as sampled by
/// enumerate_graph) with F(θ)(x) = F(φ_g)(x).
pub fn compactness_probe(
    q: &EffectiveOp,
    g: &Index,
    x: u64,
    fuel: Fuel,
    rounds: u64,
    max_candidates: usize,
) -> CompactnessResult {
    let xn = Nat::from_u64(x);
    let base = match q.apply(g, fuel) {
        Some(i) => match run(&i, &xn, fuel) {
            Outcome::Halted { value, .. } => value,
            _ => return CompactnessResult::BaseValueUnavailable,
        },
        None => return CompactnessResult::BaseValueUnavailable,
    };
    let approx = enumerate_graph(g, rounds);

    let mut candidates = 0usize;
    let mut code = Nat::zero();
    let mut examined = 0u64;
    loop {
        let theta = FiniteFn::graph_decode(&code);
        examined += 1;
        // canonical codes only: skip reorderings and junk paddings
        if nat_eq(&theta.graph_code(), &code) && theta.is_subset_of(&approx) {
            candidates += 1;
            if let Some(i) = q.apply_to_finite(&theta, fuel) {
                if let Outcome::Halted { value, .. } = run(&i, &xn, fuel) {
                    if nat_eq(&value, &base) {
                        return CompactnessResult::Witness {
                            theta,
                            theta_code: code,
                            value,
                            candidates_tried: candidates,
                            codes_examined: examined,
                        };
                    }
                }
            }
            if candidates >= max_candidates {
                return CompactnessResult::FailureWithinBound {
                    candidates_tried: candidates,
                    codes_examined: examined,
                };
            }
        }
        code = succ_nat(&code);
    }
}
