//! Textual program syntax: one statement per line, keyword form.
//!
//! ```text
//! X1 := 42            assign-const
//! X1 := X2            copy
//! X1 := succ X2
//! X1 := pred X2
//! X1 := pair X2 X3
//! X1 := first X2
//! X1 := second X2
//! while X1 { ... }
//! ifz X1 { ... } else { ... }
//! X1 := eval X2 X3
//! X1 := smn X2 X3
//! X1 := beval X2 X3 X4
//! X1 := query X2
//! noop
//! ```
//!
//! `#` starts a comment. The printer and parser round-trip exactly.

use std::rc::Rc;

use num_bigint::BigUint;

use crate::nat::{nat_to_decimal, Nat};
use crate::objlang::{OracleProgram, Program, Stmt, VarId};

#[derive(Debug, thiserror::Error)]
pub enum ParseError {
    #[error("line {line}: {msg}")]
    Syntax { line: usize, msg: String },
    #[error("unbalanced braces at end of input")]
    Unbalanced,
    #[error("query statement in a plain program (line {line}); use an oracle program")]
    QueryInPlain { line: usize },
}

struct Parser<'a> {
    lines: Vec<(usize, &'a str)>,
    pos: usize,
}

fn err(line: usize, msg: impl Into<String>) -> ParseError {
    ParseError::Syntax { line, msg: msg.into() }
}

fn parse_reg(tok: &str, line: usize) -> Result<VarId, ParseError> {
    let rest = tok
        .strip_prefix('X')
        .ok_or_else(|| err(line, format!("expected register, got `{tok}`")))?;
    let v: BigUint = rest
        .parse()
        .map_err(|_| err(line, format!("bad register number `{tok}`")))?;
    Ok(VarId(Nat::from_biguint(v)))
}

fn parse_nat(tok: &str, line: usize) -> Result<Nat, ParseError> {
    let v: BigUint = tok
        .parse()
        .map_err(|_| err(line, format!("bad numeral `{tok}`")))?;
    Ok(Nat::from_biguint(v))
}

impl<'a> Parser<'a> {
    fn new(src: &'a str) -> Parser<'a> {
        let lines = src
            .lines()
            .enumerate()
            .map(|(i, l)| {
                let l = match l.find('#') {
                    Some(p) => &l[..p],
                    None => l,
                };
                (i + 1, l.trim())
            })
            .filter(|(_, l)| !l.is_empty())
            .collect();
        Parser { lines, pos: 0 }
    }

    fn peek(&self) -> Option<(usize, &'a str)> {
        self.lines.get(self.pos).copied()
    }

    fn next(&mut self) -> Option<(usize, &'a str)> {
        let r = self.peek();
        if r.is_some() {
            self.pos += 1;
        }
        r
    }

    /// Parse statements until a lone `}` (consumed) or end of input.
    fn parse_block(&mut self, until_brace: bool) -> Result<Vec<Stmt>, ParseError> {
        let mut out = Vec::new();
        loop {
            let Some((line, text)) = self.peek() else {
                if until_brace {
                    return Err(ParseError::Unbalanced);
                }
                return Ok(out);
            };
            if text == "}" || text.starts_with("} else") {
                if until_brace {
                    return Ok(out);
                }
                return Err(err(line, "unexpected `}`"));
            }
            self.next();
            out.push(self.parse_stmt(line, text)?);
        }
    }

    fn expect_close(&mut self) -> Result<bool, ParseError> {
        // Returns true when the close is `} else {`.
        match self.next() {
            Some((_, "}")) => Ok(false),
            Some((_, "} else {")) => Ok(true),
            Some((line, other)) => Err(err(line, format!("expected `}}`, got `{other}`"))),
            None => Err(ParseError::Unbalanced),
        }
    }

    fn parse_stmt(&mut self, line: usize, text: &str) -> Result<Stmt, ParseError> {
        if text == "noop" {
            return Ok(Stmt::Noop);
        }
        if let Some(rest) = text.strip_prefix("while ") {
            let guard = rest
                .strip_suffix('{')
                .ok_or_else(|| err(line, "expected `{` after while guard"))?
                .trim();
            let body = self.parse_block(true)?;
            if self.expect_close()? {
                return Err(err(line, "`while` takes no else"));
            }
            return Ok(Stmt::Loop(parse_reg(guard, line)?, Rc::new(body)));
        }
        if let Some(rest) = text.strip_prefix("ifz ") {
            let guard = rest
                .strip_suffix('{')
                .ok_or_else(|| err(line, "expected `{` after ifz guard"))?
                .trim();
            let then_body = self.parse_block(true)?;
            let (else_body, had_else) = if self.expect_close()? {
                let e = self.parse_block(true)?;
                if self.expect_close()? {
                    return Err(err(line, "double else"));
                }
                (e, true)
            } else {
                (Vec::new(), false)
            };
            let _ = had_else;
            return Ok(Stmt::Branch(
                parse_reg(guard, line)?,
                Rc::new(then_body),
                Rc::new(else_body),
            ));
        }

        let (dst, rhs) = text
            .split_once(":=")
            .ok_or_else(|| err(line, format!("unrecognized statement `{text}`")))?;
        let dst = parse_reg(dst.trim(), line)?;
        let toks: Vec<&str> = rhs.split_whitespace().collect();
        match toks.as_slice() {
            [v] if v.starts_with('X') => Ok(Stmt::Copy(dst, parse_reg(v, line)?)),
            [v] => Ok(Stmt::AssignConst(dst, parse_nat(v, line)?)),
            ["succ", s] => Ok(Stmt::Succ(dst, parse_reg(s, line)?)),
            ["pred", s] => Ok(Stmt::Pred(dst, parse_reg(s, line)?)),
            ["pair", a, b] => Ok(Stmt::MkPair(dst, parse_reg(a, line)?, parse_reg(b, line)?)),
            ["first", s] => Ok(Stmt::First(dst, parse_reg(s, line)?)),
            ["second", s] => Ok(Stmt::Second(dst, parse_reg(s, line)?)),
            ["eval", c, a] => Ok(Stmt::Eval(dst, parse_reg(c, line)?, parse_reg(a, line)?)),
            ["smn", c, a] => Ok(Stmt::Smn(dst, parse_reg(c, line)?, parse_reg(a, line)?)),
            ["beval", c, a, b] => Ok(Stmt::Beval(
                dst,
                parse_reg(c, line)?,
                parse_reg(a, line)?,
                parse_reg(b, line)?,
            )),
            ["query", a] => Ok(Stmt::Query(dst, parse_reg(a, line)?)),
            _ => Err(err(line, format!("unrecognized statement `{text}`"))),
        }
    }
}

/// Parse a plain program; query statements are rejected.
pub fn parse_program(src: &str) -> Result<Program, ParseError> {
    let p = parse_oracle_program(src)?;
    let prog = Program { body: p.body };
    if prog.contains_query() {
        return Err(ParseError::QueryInPlain { line: 0 });
    }
    Ok(prog)
}

/// Parse allowing query statements.
pub fn parse_oracle_program(src: &str) -> Result<OracleProgram, ParseError> {
    let mut p = Parser::new(src);
    let body = p.parse_block(false)?;
    Ok(OracleProgram::new(body))
}

const PRINT_NUMERAL_LIMIT: u64 = 2_000_000;

fn print_reg(v: &VarId) -> String {
    format!("X{}", nat_to_decimal(&v.0, 64))
}

fn print_stmt(s: &Stmt, indent: usize, out: &mut String) {
    let pad = "    ".repeat(indent);
    match s {
        Stmt::AssignConst(d, c) => {
            out.push_str(&format!(
                "{pad}{} := {}\n",
                print_reg(d),
                nat_to_decimal(c, PRINT_NUMERAL_LIMIT)
            ));
        }
        Stmt::Copy(d, s) => out.push_str(&format!("{pad}{} := {}\n", print_reg(d), print_reg(s))),
        Stmt::Succ(d, s) => {
            out.push_str(&format!("{pad}{} := succ {}\n", print_reg(d), print_reg(s)))
        }
        Stmt::Pred(d, s) => {
            out.push_str(&format!("{pad}{} := pred {}\n", print_reg(d), print_reg(s)))
        }
        Stmt::MkPair(d, a, b) => out.push_str(&format!(
            "{pad}{} := pair {} {}\n",
            print_reg(d),
            print_reg(a),
            print_reg(b)
        )),
        Stmt::First(d, s) => {
            out.push_str(&format!("{pad}{} := first {}\n", print_reg(d), print_reg(s)))
        }
        Stmt::Second(d, s) => {
            out.push_str(&format!("{pad}{} := second {}\n", print_reg(d), print_reg(s)))
        }
        Stmt::Loop(g, body) => {
            out.push_str(&format!("{pad}while {} {{\n", print_reg(g)));
            for b in body.iter() {
                print_stmt(b, indent + 1, out);
            }
            out.push_str(&format!("{pad}}}\n"));
        }
        Stmt::Branch(g, t, e) => {
            out.push_str(&format!("{pad}ifz {} {{\n", print_reg(g)));
            for b in t.iter() {
                print_stmt(b, indent + 1, out);
            }
            if e.is_empty() {
                out.push_str(&format!("{pad}}}\n"));
            } else {
                out.push_str(&format!("{pad}}} else {{\n"));
                for b in e.iter() {
                    print_stmt(b, indent + 1, out);
                }
                out.push_str(&format!("{pad}}}\n"));
            }
        }
        Stmt::Eval(d, c, a) => out.push_str(&format!(
            "{pad}{} := eval {} {}\n",
            print_reg(d),
            print_reg(c),
            print_reg(a)
        )),
        Stmt::Smn(d, c, a) => out.push_str(&format!(
            "{pad}{} := smn {} {}\n",
            print_reg(d),
            print_reg(c),
            print_reg(a)
        )),
        Stmt::Beval(d, c, a, b) => out.push_str(&format!(
            "{pad}{} := beval {} {} {}\n",
            print_reg(d),
            print_reg(c),
            print_reg(a),
            print_reg(b)
        )),
        Stmt::Query(d, a) => out.push_str(&format!(
            "{pad}{} := query {}\n",
            print_reg(d),
            print_reg(a)
        )),
        Stmt::Noop => out.push_str(&format!("{pad}noop\n")),
    }
}

pub fn print_stmts(body: &[Stmt]) -> String {
    let mut out = String::new();
    for s in body {
        print_stmt(s, 0, &mut out);
    }
    out
}

pub fn print_program(p: &Program) -> String {
    print_stmts(&p.body)
}

pub fn print_oracle_program(p: &OracleProgram) -> String {
    print_stmts(&p.body)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::corpus;

    #[test]
    fn round_trip_corpus() {
        for (name, p) in corpus::all_named() {
            let text = print_program(&p);
            let back = parse_program(&text).unwrap_or_else(|e| panic!("{name}: {e}"));
            assert_eq!(back, p, "parse/print round trip failed for {name}");
        }
    }

    #[test]
    fn round_trip_oracle() {
        let p = crate::functionals::factorial_oracle_program();
        let text = print_oracle_program(&p);
        let back = parse_oracle_program(&text).unwrap();
        assert_eq!(back, p);
    }

    #[test]
    fn parse_example_syntax() {
        let src = "
            X2 := pair X0 X1
            while X1 {
                X1 := pred X1   # drain
            }
            ifz X2 {
                X0 := 7
            } else {
                X0 := succ X0
            }
        ";
        let p = parse_program(src).unwrap();
        assert_eq!(p.body.len(), 3);
    }

    #[test]
    fn query_rejected_in_plain_context() {
        let src = "X0 := query X0";
        assert!(parse_program(src).is_err());
        assert!(parse_oracle_program(src).is_ok());
    }
}
