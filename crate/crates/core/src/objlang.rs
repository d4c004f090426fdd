//! The object language and its Gödel numbering.
//!
//! A program is a sequence of register statements over the naturals. Every
//! natural number decodes to a program (unknown tags become no-ops), so the
//! numbering φ is total: index n denotes whatever `decode(n)` runs as.
//!
//! Statement tag table (bit-exact, payload on the right of `pair(tag, _)`):
//!
//! | tag | statement      | payload                          |
//! |-----|----------------|----------------------------------|
//! | 0   | assign-const   | pair(dst, c)                     |
//! | 1   | copy           | pair(dst, src)                   |
//! | 2   | succ           | pair(dst, src)                   |
//! | 3   | pred           | pair(dst, src)  (monus 1)        |
//! | 4   | mkpair         | pair(dst, pair(a, b))            |
//! | 5   | first          | pair(dst, src)                   |
//! | 6   | second         | pair(dst, src)                   |
//! | 7   | loop           | pair(guard, bodyCode)            |
//! | 8   | branch-if-zero | pair(guard, pair(then, else))    |
//! | 9   | eval           | pair(dst, pair(code, arg))       |
//! | 10  | smn            | pair(dst, pair(code, arg))       |
//! | 11  | beval          | pair(dst, pair(code, pair(arg, budget))) |
//! | 12  | query          | pair(dst, arg)                   |
//! | >12 | no-op          | ignored                          |
//!
//! Sequences encode as nil = 0, cons(h, t) = pair(h, t) + 1. The empty
//! program is index 0 and computes the identity (input and output live in X0).

use std::rc::Rc;

use crate::nat::{pair_nat, pred_nat, succ_nat, unpair_nat, Nat};

/// A register number. X0 is both input and output; all other registers start
/// at zero on entry to a program.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct VarId(pub Nat);

impl VarId {
    pub fn new(v: u64) -> VarId {
        VarId(Nat::from_u64(v))
    }
}

impl From<u64> for VarId {
    fn from(v: u64) -> VarId {
        VarId::new(v)
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Stmt {
    AssignConst(VarId, Nat),
    Copy(VarId, VarId),
    Succ(VarId, VarId),
    Pred(VarId, VarId),
    MkPair(VarId, VarId, VarId),
    First(VarId, VarId),
    Second(VarId, VarId),
    Loop(VarId, Rc<Vec<Stmt>>),
    Branch(VarId, Rc<Vec<Stmt>>, Rc<Vec<Stmt>>),
    Eval(VarId, VarId, VarId),
    Smn(VarId, VarId, VarId),
    Beval(VarId, VarId, VarId, VarId),
    Query(VarId, VarId),
    Noop,
}

/// A plain program: no `query` statements (the builder enforces this; decoded
/// junk may still contain them, and the evaluator treats a query without an
/// oracle as divergence).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Program {
    pub body: Rc<Vec<Stmt>>,
}

impl Program {
    pub fn new(body: Vec<Stmt>) -> Program {
        Program { body: Rc::new(body) }
    }

    pub fn empty() -> Program {
        Program::new(Vec::new())
    }

    pub fn contains_query(&self) -> bool {
        fn scan(stmts: &[Stmt]) -> bool {
            stmts.iter().any(|s| match s {
                Stmt::Query(..) => true,
                Stmt::Loop(_, b) => scan(b),
                Stmt::Branch(_, t, e) => scan(t) || scan(e),
                _ => false,
            })
        }
        scan(&self.body)
    }

    pub fn encode(&self) -> Index {
        Index(encode_seq(&self.body))
    }
}

/// A program that may also query its oracle (a partial recursive functional).
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct OracleProgram {
    pub body: Rc<Vec<Stmt>>,
}

impl OracleProgram {
    pub fn new(body: Vec<Stmt>) -> OracleProgram {
        OracleProgram { body: Rc::new(body) }
    }

    pub fn encode(&self) -> Index {
        Index(encode_seq(&self.body))
    }

    pub fn decode(i: &Index) -> OracleProgram {
        OracleProgram { body: decode_seq(&i.0) }
    }
}

/// An index: any natural number, naming the program it decodes to.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Index(pub Nat);

impl Index {
    pub fn from_u64(v: u64) -> Index {
        Index(Nat::from_u64(v))
    }

    pub fn nat(&self) -> &Nat {
        &self.0
    }
}

impl From<u64> for Index {
    fn from(v: u64) -> Index {
        Index::from_u64(v)
    }
}

fn n(v: u64) -> Nat {
    Nat::from_u64(v)
}

fn tagged(tag: u64, payload: Nat) -> Nat {
    pair_nat(&n(tag), &payload)
}

fn encode_stmt(s: &Stmt) -> Nat {
    match s {
        Stmt::AssignConst(d, c) => tagged(0, pair_nat(&d.0, c)),
        Stmt::Copy(d, s) => tagged(1, pair_nat(&d.0, &s.0)),
        Stmt::Succ(d, s) => tagged(2, pair_nat(&d.0, &s.0)),
        Stmt::Pred(d, s) => tagged(3, pair_nat(&d.0, &s.0)),
        Stmt::MkPair(d, a, b) => tagged(4, pair_nat(&d.0, &pair_nat(&a.0, &b.0))),
        Stmt::First(d, s) => tagged(5, pair_nat(&d.0, &s.0)),
        Stmt::Second(d, s) => tagged(6, pair_nat(&d.0, &s.0)),
        Stmt::Loop(g, body) => tagged(7, pair_nat(&g.0, &encode_seq(body))),
        Stmt::Branch(g, t, e) => tagged(
            8,
            pair_nat(&g.0, &pair_nat(&encode_seq(t), &encode_seq(e))),
        ),
        Stmt::Eval(d, c, a) => tagged(9, pair_nat(&d.0, &pair_nat(&c.0, &a.0))),
        Stmt::Smn(d, c, a) => tagged(10, pair_nat(&d.0, &pair_nat(&c.0, &a.0))),
        Stmt::Beval(d, c, a, b) => tagged(
            11,
            pair_nat(&d.0, &pair_nat(&c.0, &pair_nat(&a.0, &b.0))),
        ),
        Stmt::Query(d, a) => tagged(12, pair_nat(&d.0, &a.0)),
        Stmt::Noop => tagged(13, n(0)),
    }
}

fn encode_seq(stmts: &[Stmt]) -> Nat {
    let mut code = n(0);
    for s in stmts.iter().rev() {
        code = succ_nat(&pair_nat(&encode_stmt(s), &code));
    }
    code
}

fn decode_stmt(v: &Nat) -> Stmt {
    let (tag, payload) = unpair_nat(v);
    let tag = match tag.to_u64() {
        Some(t) if t <= 12 => t,
        _ => return Stmt::Noop,
    };
    let (a, b) = unpair_nat(&payload);
    match tag {
        0 => Stmt::AssignConst(VarId(a), b),
        1 => Stmt::Copy(VarId(a), VarId(b)),
        2 => Stmt::Succ(VarId(a), VarId(b)),
        3 => Stmt::Pred(VarId(a), VarId(b)),
        4 => {
            let (x, y) = unpair_nat(&b);
            Stmt::MkPair(VarId(a), VarId(x), VarId(y))
        }
        5 => Stmt::First(VarId(a), VarId(b)),
        6 => Stmt::Second(VarId(a), VarId(b)),
        7 => Stmt::Loop(VarId(a), decode_seq(&b)),
        8 => {
            let (t, e) = unpair_nat(&b);
            Stmt::Branch(VarId(a), decode_seq(&t), decode_seq(&e))
        }
        9 => {
            let (c, x) = unpair_nat(&b);
            Stmt::Eval(VarId(a), VarId(c), VarId(x))
        }
        10 => {
            let (c, x) = unpair_nat(&b);
            Stmt::Smn(VarId(a), VarId(c), VarId(x))
        }
        11 => {
            let (c, rest) = unpair_nat(&b);
            let (x, budget) = unpair_nat(&rest);
            Stmt::Beval(VarId(a), VarId(c), VarId(x), VarId(budget))
        }
        12 => Stmt::Query(VarId(a), VarId(b)),
        _ => unreachable!(),
    }
}

fn decode_seq(code: &Nat) -> Rc<Vec<Stmt>> {
    let mut out = Vec::new();
    let mut cur = code.clone();
    while !cur.is_zero() {
        let cell = pred_nat(&cur);
        let (h, t) = unpair_nat(&cell);
        out.push(decode_stmt(&h));
        cur = t;
    }
    Rc::new(out)
}

/// Total decoding: every natural is an index of some program.
pub fn decode(i: &Index) -> Program {
    Program { body: decode_seq(&i.0) }
}

/// `encode(decode(n))` normalizes junk (tags > 12 become the canonical no-op)
/// but is semantics-preserving; `decode(encode(p)) = p` for built programs.
pub fn encode(p: &Program) -> Index {
    p.encode()
}

/// The canonical diverging program: bump X1, then spin on it forever.
pub fn div_program() -> Program {
    Program::new(vec![
        Stmt::Succ(VarId::new(1), VarId::new(1)),
        Stmt::Loop(VarId::new(1), Rc::new(Vec::new())),
    ])
}

pub fn div_index() -> Index {
    div_program().encode()
}

/// An index k with φ_k(x) ≃ φ_i(φ_j(x)): run j on the input, then i on the
/// result, each via the eval primitive with the constants inlined.
pub fn compose_codes(i: &Index, j: &Index) -> Index {
    Program::new(vec![
        Stmt::AssignConst(VarId::new(2), j.0.clone()),
        Stmt::Eval(VarId::new(1), VarId::new(2), VarId::new(0)),
        Stmt::AssignConst(VarId::new(2), i.0.clone()),
        Stmt::Eval(VarId::new(0), VarId::new(2), VarId::new(1)),
    ])
    .encode()
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn empty_program_is_index_zero() {
        assert_eq!(Program::empty().encode().0.to_u64(), Some(0));
        assert!(decode(&Index::from_u64(0)).body.is_empty());
    }

    #[test]
    fn decode_is_total_below_ten_thousand() {
        for v in 0..10_000u64 {
            let p = decode(&Index::from_u64(v));
            // re-encoding must also succeed
            let _ = p.encode();
        }
    }

    #[test]
    fn round_trip_for_built_programs() {
        let progs = vec![
            Program::empty(),
            div_program(),
            Program::new(vec![
                Stmt::AssignConst(VarId::new(0), Nat::from_u64(42)),
                Stmt::MkPair(VarId::new(3), VarId::new(0), VarId::new(1)),
                Stmt::Branch(
                    VarId::new(3),
                    Rc::new(vec![Stmt::Succ(VarId::new(0), VarId::new(0))]),
                    Rc::new(vec![Stmt::Loop(
                        VarId::new(1),
                        Rc::new(vec![Stmt::Pred(VarId::new(1), VarId::new(1))]),
                    )]),
                ),
                Stmt::Beval(VarId::new(0), VarId::new(1), VarId::new(2), VarId::new(3)),
                Stmt::Smn(VarId::new(5), VarId::new(6), VarId::new(7)),
            ]),
        ];
        for p in progs {
            assert_eq!(decode(&p.encode()), p);
        }
    }

    #[test]
    fn div_code_is_frozen() {
        // Derived once from the encoder and pinned: the numbering is bit-exact,
        // so this value may never drift.
        // succ(X1,X1) = pair(2, pair(1,1)) = pair(2,4) = 25
        // loop(X1,[]) = pair(7, pair(1,0)) = pair(7,1) = 37
        // cons(37, 0) = pair(37,0)+1 = 704
        // cons(25, 704) = pair(25,704)+1 = 266_790
        assert_eq!(div_index().0.to_u64(), Some(266_790));
    }

    #[test]
    fn junk_tags_decode_to_noop() {
        let weird = pair_nat(&Nat::from_u64(77), &Nat::from_u64(123));
        let code = succ_nat(&pair_nat(&weird, &Nat::from_u64(0)));
        let p = decode(&Index(code));
        assert_eq!(p.body.as_slice(), &[Stmt::Noop]);
    }
}
