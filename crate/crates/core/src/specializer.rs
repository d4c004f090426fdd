//! The s-m-n function S, template substitution, an optimizing specializer,
//! and a sampled extensionality checker.
//!
//! `smn(p, x)` returns a code for λy. φ_p(pair(x, y)) by freezing x into a
//! four-statement wrapper. `smn_opt` produces a co-extensional index by
//! inlining the body of p behind the same argument-pairing prelude and then
//! running constant propagation and dead-assignment elimination over the
//! result; it never unrolls loops, so it is total like S must be.

use std::collections::BTreeMap;
use std::rc::Rc;

use crate::evaluator::{check_equiv, run, EquivReport, Fuel, Outcome};
use crate::nat::{nat_eq, pair_nat, pred_nat, succ_nat, unpair_nat, Nat};
use crate::objlang::{decode, Index, Program, Stmt, VarId};

/// Core of the s-m-n construction on raw naturals: the code of
/// `[X1 := x; X2 := mkpair(X1, X0); X3 := p; X0 := eval(X3, X2)]`.
pub fn smn_code(p: &Nat, x: &Nat) -> Nat {
    Program::new(vec![
        Stmt::AssignConst(VarId::new(1), x.clone()),
        Stmt::MkPair(VarId::new(2), VarId::new(1), VarId::new(0)),
        Stmt::AssignConst(VarId::new(3), p.clone()),
        Stmt::Eval(VarId::new(0), VarId::new(3), VarId::new(2)),
    ])
    .encode()
    .0
}

/// The total recursive S with φ_{S(p,x)}(y) ≃ φ_p(pair(x, y)).
pub fn smn(p: &Index, x: &Nat) -> Index {
    Index(smn_code(&p.0, x))
}

/// A template: a program expecting input pair(k, y) whose first component
/// the specializer freezes.
#[derive(Clone, Debug)]
pub struct Template {
    pub program: Program,
}

impl Template {
    pub fn new(program: Program) -> Template {
        assert!(
            !program.contains_query(),
            "templates are plain programs; query is not allowed"
        );
        Template { program }
    }

    pub fn index(&self) -> Index {
        self.program.encode()
    }
}

/// Freeze `k` into a template: definitionally `smn(encode(t.program), k)`.
pub fn subst_const(t: &Template, k: &Nat) -> Index {
    smn(&t.index(), k)
}

// ---------------------------------------------------------------------------
// Optimizing specializer
// ---------------------------------------------------------------------------

type Vid = u64;

/// What the propagator knows about a value.
#[derive(Clone, Debug, PartialEq, Eq)]
enum VInfo {
    Known(Nat),
    /// pair of two tracked values (so first/second of a built pair can be
    /// redirected to a live holder of the component).
    PairOf(Vid, Vid),
    Opaque,
}

/// Value-numbering state over the registers: constant propagation through
/// copy/succ/pred/mkpair/first/second plus copy redirection, which lets the
/// dead-code pass strip argument-shuffling that specialization made
/// unnecessary.
#[derive(Clone)]
struct VnState {
    next: Vid,
    regs: BTreeMap<u64, Vid>,
    info: BTreeMap<Vid, VInfo>,
    /// Preferred holder per value: the register it first appeared in.
    canonical: BTreeMap<Vid, u64>,
}

const ZERO_VID: Vid = 0;

impl VnState {
    fn new_with_dynamic_input() -> VnState {
        let mut s = VnState {
            next: 1,
            regs: BTreeMap::new(),
            info: BTreeMap::new(),
            canonical: BTreeMap::new(),
        };
        s.info.insert(ZERO_VID, VInfo::Known(Nat::zero()));
        let input = s.fresh(VInfo::Opaque);
        s.regs.insert(0, input);
        s.canonical.insert(input, 0);
        s
    }

    fn fresh(&mut self, info: VInfo) -> Vid {
        let v = self.next;
        self.next += 1;
        self.info.insert(v, info);
        v
    }

    fn vid_of(&self, r: &VarId) -> Option<Vid> {
        let id = r.0.to_u64()?;
        Some(self.regs.get(&id).copied().unwrap_or(ZERO_VID))
    }

    fn info_of(&self, v: Vid) -> &VInfo {
        self.info.get(&v).unwrap_or(&VInfo::Opaque)
    }

    fn known_of(&self, r: &VarId) -> Option<Nat> {
        match self.info_of(self.vid_of(r)?) {
            VInfo::Known(n) => Some(n.clone()),
            _ => None,
        }
    }

    fn write(&mut self, r: &VarId, v: Vid) {
        if let Some(id) = r.0.to_u64() {
            self.regs.insert(id, v);
            self.canonical.entry(v).or_insert(id);
        }
    }

    fn write_opaque(&mut self, r: &VarId) {
        let v = self.fresh(VInfo::Opaque);
        self.write(r, v);
    }

    /// A register currently holding this value: the canonical holder when
    /// still valid, else the smallest current holder (repairing canonical).
    fn live_holder(&mut self, v: Vid) -> Option<u64> {
        if v == ZERO_VID {
            return None;
        }
        if let Some(&c) = self.canonical.get(&v) {
            if self.regs.get(&c) == Some(&v) {
                return Some(c);
            }
        }
        let found = self.regs.iter().find(|(_, &w)| w == v).map(|(&r, _)| r);
        if let Some(r) = found {
            self.canonical.insert(v, r);
        }
        found
    }

    /// Resolve a read: the value id plus the register to actually read.
    fn read(&mut self, r: &VarId) -> (Option<Vid>, VarId) {
        let Some(v) = self.vid_of(r) else {
            return (None, r.clone());
        };
        match self.live_holder(v) {
            Some(h) => (Some(v), VarId::new(h)),
            None => (Some(v), r.clone()),
        }
    }

    /// Clobber every register the statements can write (fresh opaque values),
    /// for the sound entry state of a loop.
    fn clobber_writes(&mut self, stmts: &[Stmt]) {
        let mut targets: Vec<u64> = Vec::new();
        collect_written(stmts, &mut targets);
        targets.sort_unstable();
        targets.dedup();
        for t in targets {
            let v = self.fresh(VInfo::Opaque);
            self.regs.insert(t, v);
            self.canonical.insert(v, t);
        }
    }

    /// Join with the state after another arm: registers holding different
    /// values become fresh opaques.
    fn merge(&mut self, other: &VnState) {
        self.next = self.next.max(other.next);
        let keys: Vec<u64> = self
            .regs
            .keys()
            .chain(other.regs.keys())
            .copied()
            .collect();
        for k in keys {
            let a = self.regs.get(&k).copied().unwrap_or(ZERO_VID);
            let b = other.regs.get(&k).copied().unwrap_or(ZERO_VID);
            if a != b {
                let v = self.fresh(VInfo::Opaque);
                self.regs.insert(k, v);
                self.canonical.insert(v, k);
            }
        }
    }
}

fn collect_written(stmts: &[Stmt], out: &mut Vec<u64>) {
    for s in stmts {
        match s {
            Stmt::AssignConst(d, _)
            | Stmt::Copy(d, _)
            | Stmt::Succ(d, _)
            | Stmt::Pred(d, _)
            | Stmt::MkPair(d, _, _)
            | Stmt::First(d, _)
            | Stmt::Second(d, _)
            | Stmt::Eval(d, _, _)
            | Stmt::Smn(d, _, _)
            | Stmt::Beval(d, _, _, _)
            | Stmt::Query(d, _) => {
                if let Some(id) = d.0.to_u64() {
                    out.push(id);
                }
            }
            Stmt::Loop(_, body) => collect_written(body, out),
            Stmt::Branch(_, t, e) => {
                collect_written(t, out);
                collect_written(e, out);
            }
            Stmt::Noop => {}
        }
    }
}

fn emit_const(state: &mut VnState, d: &VarId, value: Nat, out: &mut Vec<Stmt>) {
    if let Some(cur) = state.known_of(d) {
        if nat_eq(&cur, &value) {
            return; // the register provably already holds this value
        }
    }
    let v = state.fresh(VInfo::Known(value.clone()));
    out.push(Stmt::AssignConst(d.clone(), value));
    state.write(d, v);
}

fn prop_stmts(stmts: &[Stmt], state: &mut VnState, out: &mut Vec<Stmt>) {
    for s in stmts {
        match s {
            Stmt::AssignConst(d, c) => emit_const(state, d, c.clone(), out),
            Stmt::Copy(d, src) => {
                let (v, read) = state.read(src);
                match v {
                    Some(v) => {
                        if state.vid_of(d) == Some(v) {
                            continue; // already holds the same value
                        }
                        if let VInfo::Known(n) = state.info_of(v).clone() {
                            emit_const(state, d, n, out);
                        } else {
                            out.push(Stmt::Copy(d.clone(), read));
                            state.write(d, v);
                        }
                    }
                    None => {
                        out.push(s.clone());
                        state.write_opaque(d);
                    }
                }
            }
            Stmt::Succ(d, src) => {
                let (v, read) = state.read(src);
                match v.map(|v| state.info_of(v).clone()) {
                    Some(VInfo::Known(n)) => emit_const(state, d, succ_nat(&n), out),
                    _ => {
                        out.push(Stmt::Succ(d.clone(), read));
                        state.write_opaque(d);
                    }
                }
            }
            Stmt::Pred(d, src) => {
                let (v, read) = state.read(src);
                match v.map(|v| state.info_of(v).clone()) {
                    Some(VInfo::Known(n)) => emit_const(state, d, pred_nat(&n), out),
                    _ => {
                        out.push(Stmt::Pred(d.clone(), read));
                        state.write_opaque(d);
                    }
                }
            }
            Stmt::MkPair(d, a, b) => {
                let (va, ra) = state.read(a);
                let (vb, rb) = state.read(b);
                let ka = va.and_then(|v| match state.info_of(v) {
                    VInfo::Known(n) => Some(n.clone()),
                    _ => None,
                });
                let kb = vb.and_then(|v| match state.info_of(v) {
                    VInfo::Known(n) => Some(n.clone()),
                    _ => None,
                });
                match (ka, kb, va, vb) {
                    (Some(x), Some(y), _, _) => emit_const(state, d, pair_nat(&x, &y), out),
                    (_, _, Some(va), Some(vb)) => {
                        if state.info_of(state.vid_of(d).unwrap_or(ZERO_VID))
                            == &VInfo::PairOf(va, vb)
                        {
                            continue;
                        }
                        out.push(Stmt::MkPair(d.clone(), ra, rb));
                        let v = state.fresh(VInfo::PairOf(va, vb));
                        state.write(d, v);
                    }
                    _ => {
                        out.push(Stmt::MkPair(d.clone(), ra, rb));
                        state.write_opaque(d);
                    }
                }
            }
            Stmt::First(d, src) | Stmt::Second(d, src) => {
                let is_first = matches!(s, Stmt::First(..));
                let (v, read) = state.read(src);
                match v.map(|v| state.info_of(v).clone()) {
                    Some(VInfo::Known(n)) => {
                        let (x, y) = unpair_nat(&n);
                        emit_const(state, d, if is_first { x } else { y }, out);
                    }
                    Some(VInfo::PairOf(va, vb)) => {
                        let comp = if is_first { va } else { vb };
                        if let VInfo::Known(n) = state.info_of(comp).clone() {
                            emit_const(state, d, n, out);
                        } else if state.vid_of(d) == Some(comp) {
                            continue;
                        } else if let Some(h) = state.live_holder(comp) {
                            out.push(Stmt::Copy(d.clone(), VarId::new(h)));
                            state.write(d, comp);
                        } else {
                            out.push(if is_first {
                                Stmt::First(d.clone(), read)
                            } else {
                                Stmt::Second(d.clone(), read)
                            });
                            state.write(d, comp);
                        }
                    }
                    _ => {
                        out.push(if is_first {
                            Stmt::First(d.clone(), read)
                        } else {
                            Stmt::Second(d.clone(), read)
                        });
                        state.write_opaque(d);
                    }
                }
            }
            Stmt::Branch(g, t, e) => match state.known_of(g) {
                Some(v) => {
                    // Fold the branch: only the taken arm survives.
                    let arm = if v.is_zero() { t } else { e };
                    prop_stmts(arm, state, out);
                }
                None => {
                    let (_, gr) = state.read(g);
                    let mut ts = state.clone();
                    let mut es = state.clone();
                    let mut tb = Vec::new();
                    let mut eb = Vec::new();
                    prop_stmts(t, &mut ts, &mut tb);
                    prop_stmts(e, &mut es, &mut eb);
                    ts.merge(&es);
                    *state = ts;
                    out.push(Stmt::Branch(gr, Rc::new(tb), Rc::new(eb)));
                }
            },
            Stmt::Loop(g, body) => {
                // A loop whose guard is provably zero at entry never runs.
                if let Some(v) = state.known_of(g) {
                    if v.is_zero() {
                        continue;
                    }
                }
                // No unrolling: everything the body writes is opaque at
                // entry, which makes the per-iteration facts sound for all
                // iterations.
                state.clobber_writes(body);
                let mut bstate = state.clone();
                let mut bb = Vec::new();
                prop_stmts(body, &mut bstate, &mut bb);
                out.push(Stmt::Loop(g.clone(), Rc::new(bb)));
            }
            Stmt::Eval(d, c, a) => {
                let (_, rc) = state.read(c);
                let (_, ra) = state.read(a);
                out.push(Stmt::Eval(d.clone(), rc, ra));
                state.write_opaque(d);
            }
            Stmt::Smn(d, c, a) => {
                let kc = state.known_of(c);
                let ka = state.known_of(a);
                match (kc, ka) {
                    (Some(cv), Some(av)) => emit_const(state, d, smn_code(&cv, &av), out),
                    _ => {
                        let (_, rc) = state.read(c);
                        let (_, ra) = state.read(a);
                        out.push(Stmt::Smn(d.clone(), rc, ra));
                        state.write_opaque(d);
                    }
                }
            }
            Stmt::Beval(d, c, a, b) => {
                let (_, rc) = state.read(c);
                let (_, ra) = state.read(a);
                let (_, rb) = state.read(b);
                out.push(Stmt::Beval(d.clone(), rc, ra, rb));
                state.write_opaque(d);
            }
            Stmt::Query(d, a) => {
                let (_, ra) = state.read(a);
                out.push(Stmt::Query(d.clone(), ra));
                state.write_opaque(d);
            }
            Stmt::Noop => {}
        }
    }
}

/// Dead-assignment elimination over a straight-line suffix view: a pure write
/// whose register is overwritten before any read (and which is not live at
/// exit) is dropped. Conservative inside control flow.
fn eliminate_dead(stmts: &[Stmt]) -> Vec<Stmt> {
    // liveness: X0 is live at exit
    fn reads(s: &Stmt) -> Vec<VarId> {
        match s {
            Stmt::AssignConst(..) => vec![],
            Stmt::Copy(_, s) | Stmt::Succ(_, s) | Stmt::Pred(_, s) | Stmt::First(_, s)
            | Stmt::Second(_, s) => vec![s.clone()],
            Stmt::MkPair(_, a, b) => vec![a.clone(), b.clone()],
            Stmt::Loop(g, _) => vec![g.clone()],
            Stmt::Branch(g, _, _) => vec![g.clone()],
            Stmt::Eval(_, c, a) | Stmt::Smn(_, c, a) => vec![c.clone(), a.clone()],
            Stmt::Beval(_, c, a, b) => vec![c.clone(), a.clone(), b.clone()],
            Stmt::Query(_, a) => vec![a.clone()],
            Stmt::Noop => vec![],
        }
    }
    fn write(s: &Stmt) -> Option<VarId> {
        match s {
            Stmt::AssignConst(d, _)
            | Stmt::Copy(d, _)
            | Stmt::Succ(d, _)
            | Stmt::Pred(d, _)
            | Stmt::MkPair(d, _, _)
            | Stmt::First(d, _)
            | Stmt::Second(d, _)
            | Stmt::Eval(d, _, _)
            | Stmt::Smn(d, _, _)
            | Stmt::Beval(d, _, _, _)
            | Stmt::Query(d, _) => Some(d.clone()),
            _ => None,
        }
    }
    fn is_pure(s: &Stmt) -> bool {
        // eval/beval/query may spend fuel or diverge; loops and branches have
        // inner effects. Everything register-to-register is pure.
        matches!(
            s,
            Stmt::AssignConst(..)
                | Stmt::Copy(..)
                | Stmt::Succ(..)
                | Stmt::Pred(..)
                | Stmt::MkPair(..)
                | Stmt::First(..)
                | Stmt::Second(..)
                | Stmt::Smn(..)
                | Stmt::Noop
        )
    }

    let mut live: Vec<VarId> = vec![VarId::new(0)];
    let mut keep = vec![true; stmts.len()];
    for (i, s) in stmts.iter().enumerate().rev() {
        match s {
            Stmt::Loop(..) | Stmt::Branch(..) => {
                // Control flow: everything read inside might matter; be
                // conservative and mark all registers live.
                live.clear();
                live.push(VarId::new(0));
                let mut all = collect_regs(s);
                live.append(&mut all);
            }
            _ => {
                let w = write(s);
                let is_live_write = match &w {
                    Some(d) => live.iter().any(|r| r == d),
                    None => false,
                };
                if is_pure(s) && w.is_some() && !is_live_write {
                    keep[i] = false;
                    continue;
                }
                if let Some(d) = w {
                    live.retain(|r| *r != d);
                }
                for r in reads(s) {
                    if !live.contains(&r) {
                        live.push(r);
                    }
                }
            }
        }
    }
    stmts
        .iter()
        .zip(keep)
        .filter_map(|(s, k)| if k { Some(s.clone()) } else { None })
        .collect()
}

fn collect_regs(s: &Stmt) -> Vec<VarId> {
    let mut out = Vec::new();
    fn go(s: &Stmt, out: &mut Vec<VarId>) {
        let push = |v: &VarId, out: &mut Vec<VarId>| {
            if !out.contains(v) {
                out.push(v.clone());
            }
        };
        match s {
            Stmt::AssignConst(d, _) => push(d, out),
            Stmt::Copy(d, s) | Stmt::Succ(d, s) | Stmt::Pred(d, s) | Stmt::First(d, s)
            | Stmt::Second(d, s) | Stmt::Query(d, s) => {
                push(d, out);
                push(s, out);
            }
            Stmt::MkPair(d, a, b) => {
                push(d, out);
                push(a, out);
                push(b, out);
            }
            Stmt::Loop(g, body) => {
                push(g, out);
                for b in body.iter() {
                    go(b, out);
                }
            }
            Stmt::Branch(g, t, e) => {
                push(g, out);
                for b in t.iter().chain(e.iter()) {
                    go(b, out);
                }
            }
            Stmt::Eval(d, c, a) | Stmt::Smn(d, c, a) => {
                push(d, out);
                push(c, out);
                push(a, out);
            }
            Stmt::Beval(d, c, a, b) => {
                push(d, out);
                push(c, out);
                push(a, out);
                push(b, out);
            }
            Stmt::Noop => {}
        }
    }
    go(s, &mut out);
    out
}

const OPT_PASS_CAP: usize = 10;

fn max_small_register(stmts: &[Stmt]) -> u64 {
    let mut regs = Vec::new();
    collect_written(stmts, &mut regs);
    fn reads(stmts: &[Stmt], out: &mut Vec<u64>) {
        for s in stmts {
            let mut push = |v: &VarId| {
                if let Some(id) = v.0.to_u64() {
                    out.push(id);
                }
            };
            match s {
                Stmt::AssignConst(..) | Stmt::Noop => {}
                Stmt::Copy(_, s)
                | Stmt::Succ(_, s)
                | Stmt::Pred(_, s)
                | Stmt::First(_, s)
                | Stmt::Second(_, s)
                | Stmt::Query(_, s) => push(s),
                Stmt::MkPair(_, a, b) => {
                    push(a);
                    push(b);
                }
                Stmt::Loop(g, body) => {
                    push(g);
                    reads(body, out);
                }
                Stmt::Branch(g, t, e) => {
                    push(g);
                    reads(t, out);
                    reads(e, out);
                }
                Stmt::Eval(_, c, a) | Stmt::Smn(_, c, a) => {
                    push(c);
                    push(a);
                }
                Stmt::Beval(_, c, a, b) => {
                    push(c);
                    push(a);
                    push(b);
                }
            }
        }
    }
    reads(stmts, &mut regs);
    regs.into_iter().max().unwrap_or(0)
}

/// Optimizing s-m-n: co-extensional with `smn(p, x)`, built by inlining the
/// body of p behind the argument-pairing prelude and simplifying. The input
/// is stashed in a register p never touches, which lets later passes dissolve
/// the pairing detour when p only destructures its argument.
pub fn smn_opt(p: &Index, x: &Nat) -> Index {
    let body = decode(p).body;
    let save = max_small_register(&body).saturating_add(1).max(4);
    // The stash register is above everything p mentions, so the body cannot
    // observe that it is nonzero.
    let mut stmts = vec![
        Stmt::Copy(VarId::new(save), VarId::new(0)),
        Stmt::AssignConst(VarId::new(1), x.clone()),
        Stmt::MkPair(VarId::new(0), VarId::new(1), VarId::new(0)),
        Stmt::AssignConst(VarId::new(1), Nat::zero()),
    ];
    stmts.extend(body.iter().cloned());

    let mut current = stmts;
    for _ in 0..OPT_PASS_CAP {
        let mut state = VnState::new_with_dynamic_input();
        let mut folded = Vec::new();
        prop_stmts(&current, &mut state, &mut folded);
        let cleaned = eliminate_dead(&folded);
        if cleaned == current {
            break;
        }
        current = cleaned;
    }
    Program::new(current).encode()
}

// ---------------------------------------------------------------------------
// Extensionality probe
// ---------------------------------------------------------------------------

#[derive(Clone, Debug)]
pub enum ProbeVerdict {
    /// No violation observed on the sample.
    NoViolation,
    /// A pair of sampled-equivalent indices whose images disagree.
    Witness {
        a: Index,
        b: Index,
        fa: Index,
        fb: Index,
        image_report: EquivReport,
    },
}

#[derive(Clone, Debug)]
pub struct ProbeReport {
    pub verdict: ProbeVerdict,
    /// Indices on which f itself exhausted the budget.
    pub f_exhausted_on: Vec<Index>,
    pub pairs_checked: usize,
}

impl ProbeReport {
    pub fn passed(&self) -> bool {
        matches!(self.verdict, ProbeVerdict::NoViolation)
    }
}

/// Semi-decides non-extensionality: find (a, b) that agree on the inputs but
/// whose f-images disagree. Can only ever produce counterexamples, never a
/// proof of extensionality.
pub fn extensionality_probe(
    f: &Index,
    pairs: &[(Index, Index)],
    inputs: &[Nat],
    fuel: Fuel,
) -> ProbeReport {
    let mut f_exhausted_on = Vec::new();
    let mut checked = 0;
    for (a, b) in pairs {
        let base = check_equiv(a, b, inputs, fuel);
        if !base.pass() {
            continue; // not observably equal; says nothing about f
        }
        checked += 1;
        let fa = match run(f, a.nat(), fuel) {
            Outcome::Halted { value, .. } => Index(value),
            Outcome::Exhausted { .. } => {
                f_exhausted_on.push(a.clone());
                continue;
            }
        };
        let fb = match run(f, b.nat(), fuel) {
            Outcome::Halted { value, .. } => Index(value),
            Outcome::Exhausted { .. } => {
                f_exhausted_on.push(b.clone());
                continue;
            }
        };
        let image = check_equiv(&fa, &fb, inputs, fuel);
        if !image.pass() {
            return ProbeReport {
                verdict: ProbeVerdict::Witness {
                    a: a.clone(),
                    b: b.clone(),
                    fa,
                    fb,
                    image_report: image,
                },
                f_exhausted_on,
                pairs_checked: checked,
            };
        }
    }
    ProbeReport {
        verdict: ProbeVerdict::NoViolation,
        f_exhausted_on,
        pairs_checked: checked,
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::evaluator::{inputs_upto, universal_index};
    use crate::objlang::div_index;

    fn n(v: u64) -> Nat {
        Nat::from_u64(v)
    }

    #[test]
    fn smn_law_on_universal() {
        // specializing U to the identity behaves as the identity
        let u = universal_index();
        let s = smn(&u, &n(0));
        for y in 0..10u64 {
            let lhs = run(&s, &n(y), Fuel(10_000));
            let rhs = run(&Index::from_u64(0), &n(y), Fuel(10_000));
            assert_eq!(lhs.value(), rhs.value());
        }
    }

    #[test]
    fn smn_total_on_junk() {
        for p in 0..100u64 {
            for x in (0..100u64).step_by(17) {
                let _ = smn(&Index::from_u64(p), &n(x));
            }
        }
    }

    #[test]
    fn smn_opt_coextensional_with_smn() {
        let u = universal_index();
        let candidates = vec![
            Index::from_u64(0),
            u.clone(),
            div_index(),
            compose_id(),
        ];
        for p in &candidates {
            for x in [0u64, 1, 7] {
                let a = smn(p, &n(x));
                let b = smn_opt(p, &n(x));
                let r = check_equiv(&a, &b, &inputs_upto(10), Fuel(100_000));
                assert!(r.pass(), "smn_opt diverged from smn on {p:?} at {x}");
            }
        }
    }

    fn compose_id() -> Index {
        crate::objlang::compose_codes(&Index::from_u64(0), &Index::from_u64(0))
    }

    #[test]
    fn smn_opt_strictly_faster_on_universal() {
        // the headline example: specializing the universal program to a source
        let fact = crate::corpus::factorial_program().encode();
        let u = universal_index();
        let trivial = smn(&u, fact.nat());
        let optimized = smn_opt(&u, fact.nat());
        let st = run(&trivial, &n(5), Fuel(1_000_000));
        let so = run(&optimized, &n(5), Fuel(1_000_000));
        assert_eq!(st.value(), so.value());
        assert_eq!(st.value().and_then(|v| v.to_u64()), Some(120));
        assert!(
            so.steps().unwrap() < st.steps().unwrap(),
            "optimizer made no progress: {:?} vs {:?}",
            so.steps(),
            st.steps()
        );
    }

    #[test]
    fn subst_const_is_definitional() {
        let t = Template::new(crate::objlang::decode(&universal_index()));
        for k in [0u64, 3, 50] {
            assert_eq!(subst_const(&t, &n(k)), smn(&t.index(), &n(k)));
        }
    }

    #[test]
    fn probe_finds_parity_witness() {
        // Two codes of the identity with opposite parity: the empty program
        // (index 0) and [X1 := X1] (index 191).
        let id_odd = Program::new(vec![Stmt::Copy(VarId::new(1), VarId::new(1))]).encode();
        assert_eq!(id_odd.nat().to_u64(), Some(191));
        let parity = crate::corpus::parity_transformer().encode();
        let pairs = vec![(Index::from_u64(0), id_odd)];
        let report = extensionality_probe(&parity, &pairs, &inputs_upto(10), Fuel(100_000));
        assert!(!report.passed(), "parity must be seen as non-extensional");
    }

    #[test]
    fn probe_passes_identity_on_codes() {
        // f = identity on codes is extensional; the probe finds nothing.
        let id_odd = Program::new(vec![Stmt::Copy(VarId::new(1), VarId::new(1))]).encode();
        let pairs = vec![(Index::from_u64(0), id_odd)];
        let report =
            extensionality_probe(&Index::from_u64(0), &pairs, &inputs_upto(10), Fuel(100_000));
        assert!(report.passed());
        assert_eq!(report.pairs_checked, 1);
    }
}
