//! Recursive-descent parser for component expressions.
//!
//! ```text
//! tuple   = "(" expr { "," expr } ")" | expr
//! expr    = term { ("+" | "-") term }
//! term    = unary { ("*" | "/") unary }
//! unary   = "-" unary | power
//! power   = atom [ "^" INTEGER ]
//! atom    = INTEGER | "i" | VARIABLE | BUILTIN "(" expr ")" | "(" expr ")"
//! ```
//!
//! Division is only allowed by constants. Constant subtrees are folded.

use num_traits::{One, Zero};

use super::expr::{Builtin, Expr};
use crate::error::{Error, Result};
use crate::scalar::Field;
use crate::Scalar;

#[derive(Clone, Debug, PartialEq)]
enum Tok {
    Int(num_bigint::BigInt),
    Ident(String),
    Sym(char),
    End,
}

#[derive(Clone, Debug)]
struct Token {
    tok: Tok,
    line: usize,
    col: usize,
}

fn lex(text: &str) -> Result<Vec<Token>> {
    let mut out = Vec::new();
    let chars: Vec<char> = text.chars().collect();
    let (mut i, mut line, mut col) = (0, 1, 1);
    while i < chars.len() {
        let c = chars[i];
        let (l0, c0) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            i += 1;
            col += 1;
            continue;
        }
        if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Int(s.parse().unwrap()), line: l0, col: c0 });
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let start = i;
            while i < chars.len() && (chars[i].is_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            let s: String = chars[start..i].iter().collect();
            col += i - start;
            out.push(Token { tok: Tok::Ident(s), line: l0, col: c0 });
            continue;
        }
        if "+-*/^(),".contains(c) {
            out.push(Token { tok: Tok::Sym(c), line: l0, col: c0 });
            i += 1;
            col += 1;
            continue;
        }
        return Err(Error::Syntax { line: l0, col: c0, message: format!("unexpected character `{c}`") });
    }
    out.push(Token { tok: Tok::End, line, col });
    Ok(out)
}

struct Parser<'a> {
    toks: Vec<Token>,
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn peek(&self) -> &Token {
        &self.toks[self.pos]
    }

    fn next(&mut self) -> Token {
        let t = self.toks[self.pos].clone();
        if self.pos + 1 < self.toks.len() {
            self.pos += 1;
        }
        t
    }

    fn err<T>(&self, t: &Token, message: impl Into<String>) -> Result<T> {
        Err(Error::Syntax { line: t.line, col: t.col, message: message.into() })
    }

    fn is_sym(&self, c: char) -> bool {
        self.peek().tok == Tok::Sym(c)
    }

    fn expect(&mut self, c: char) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::Sym(c) {
            Ok(())
        } else {
            self.err(&t, format!("expected `{c}`"))
        }
    }

    fn expr(&mut self) -> Result<Expr> {
        let mut acc = self.term()?;
        loop {
            if self.is_sym('+') {
                self.next();
                acc = Expr::add(acc, self.term()?);
            } else if self.is_sym('-') {
                self.next();
                acc = Expr::sub(acc, self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<Expr> {
        let mut acc = self.unary()?;
        loop {
            if self.is_sym('*') {
                self.next();
                acc = Expr::mul(acc, self.unary()?);
            } else if self.is_sym('/') {
                let slash = self.next();
                match self.unary()? {
                    Expr::Const(c) if c.is_zero() => return self.err(&slash, "division by zero"),
                    Expr::Const(c) => acc = Expr::mul(acc, Expr::Const(Scalar::one() / c)),
                    _ => return self.err(&slash, "division is only allowed by constants"),
                }
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<Expr> {
        if self.is_sym('-') {
            self.next();
            return Ok(Expr::neg(self.unary()?));
        }
        self.power()
    }

    fn power(&mut self) -> Result<Expr> {
        let base = self.atom()?;
        if !self.is_sym('^') {
            return Ok(base);
        }
        self.next();
        let t = self.next();
        match t.tok {
            Tok::Int(ref e) => match u32::try_from(e) {
                Ok(e) => Ok(Expr::pow(base, e)),
                Err(_) => self.err(&t, "exponent too large"),
            },
            _ => self.err(&t, "exponent must be a non-negative integer"),
        }
    }

    fn atom(&mut self) -> Result<Expr> {
        let t = self.next();
        match &t.tok {
            Tok::Int(v) => Ok(Expr::Const(Scalar::from_bigint(v.clone()))),
            Tok::Sym('(') => {
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Tok::Ident(name) if name == "i" => Ok(Expr::Const(Scalar::i())),
            Tok::Ident(name) => {
                if let Some(b) = Builtin::from_name(name) {
                    self.expect('(')?;
                    let arg = self.expr()?;
                    self.expect(')')?;
                    return Ok(Expr::call(b, arg));
                }
                match self.vars.iter().position(|v| v == name) {
                    Some(k) => Ok(Expr::Var(k)),
                    None => self.err(&t, format!("unknown identifier `{name}`")),
                }
            }
            Tok::End => self.err(&t, "unexpected end of input"),
            Tok::Sym(c) => self.err(&t, format!("unexpected `{c}`")),
        }
    }

    fn finish(&mut self) -> Result<()> {
        let t = self.next();
        if t.tok == Tok::End {
            Ok(())
        } else {
            self.err(&t, "unexpected trailing input")
        }
    }
}

fn check_names(vars: &[String]) -> Result<()> {
    for v in vars {
        let ok = v.chars().next().is_some_and(|c| c.is_alphabetic() || c == '_')
            && v.chars().all(|c| c.is_alphanumeric() || c == '_');
        if !ok || v == "i" || Builtin::from_name(v).is_some() {
            return Err(Error::Config(format!("`{v}` cannot be used as a variable name")));
        }
    }
    Ok(())
}

/// Parse one expression in the given variables.
pub fn parse_expr(text: &str, vars: &[String]) -> Result<Expr> {
    check_names(vars)?;
    let mut p = Parser { toks: lex(text)?, pos: 0, vars };
    let e = p.expr()?;
    p.finish()?;
    Ok(e)
}

/// Parse `(e1, …, em)`; a lone expression is a 1-tuple.
pub fn parse_tuple(text: &str, vars: &[String]) -> Result<Vec<Expr>> {
    check_names(vars)?;
    let toks = lex(text)?;
    let mut p = Parser { toks: toks.clone(), pos: 0, vars };
    if p.is_sym('(') {
        p.next();
        let mut items = vec![p.expr()?];
        while p.is_sym(',') {
            p.next();
            items.push(p.expr()?);
        }
        if items.len() > 1 {
            p.expect(')')?;
            p.finish()?;
            return Ok(items);
        }
    }
    Ok(vec![parse_expr(text, vars)?])
}

/// Parse a constant expression such as `1/2 - 3*i`.
pub fn parse_scalar(text: &str) -> Result<Scalar> {
    match parse_expr(text, &[])? {
        Expr::Const(c) => Ok(c),
        _ => Err(Error::ScalarParse(text.to_string())),
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use proptest::prelude::*;

    fn names() -> Vec<String> {
        vec!["s".into(), "t".into()]
    }

    #[test]
    fn parses_tuples() {
        let v = vec!["t".to_string()];
        let c = parse_tuple("(t, t^2 + t^6)", &v).unwrap();
        assert_eq!(c.len(), 2);
        assert_eq!(c[1], Expr::add(Expr::pow(Expr::Var(0), 2), Expr::pow(Expr::Var(0), 6)));
        assert_eq!(parse_tuple("(t)", &v).unwrap(), vec![Expr::Var(0)]);
        assert_eq!(parse_tuple("(t + 1)^2", &v).unwrap().len(), 1);
        let e = parse_tuple("(t, exp1m(t))", &v).unwrap();
        assert_eq!(e[1], Expr::call(Builtin::Exp1m, Expr::Var(0)));
    }

    #[test]
    fn folds_constants() {
        assert_eq!(parse_scalar("1/2 - 3*i").unwrap(), "1/2-3*i".parse().unwrap());
        assert_eq!(parse_scalar("-(2^3)/4").unwrap(), Scalar::from_i64(-2));
        assert_eq!(parse_expr("s/2", &names()).unwrap(), Expr::mul(Expr::Var(0), Expr::Const(Scalar::from_ratio(1, 2))));
    }

    #[test]
    fn reports_positions() {
        let err = parse_expr("s +\n  * t", &names()).unwrap_err();
        assert_eq!(err, Error::Syntax { line: 2, col: 3, message: "unexpected `*`".into() });
        assert!(matches!(parse_expr("s / t", &names()), Err(Error::Syntax { col: 3, .. })));
        assert!(matches!(parse_expr("u", &names()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("s^t", &names()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("s)", &names()), Err(Error::Syntax { .. })));
        assert!(matches!(parse_expr("1/0", &names()), Err(Error::Syntax { .. })));
        assert!(parse_expr("s", &["i".to_string()]).is_err());
    }

    fn arb_const() -> impl Strategy<Value = Scalar> {
        (-9i64..10, 1i64..5, -3i64..4).prop_map(|(n, d, im)| {
            Scalar::from_ratio(n, d) + Scalar::i() * Scalar::from_i64(im)
        })
    }

    fn arb_expr() -> impl Strategy<Value = Expr> {
        let leaf = prop_oneof![arb_const().prop_map(Expr::Const), (0usize..2).prop_map(Expr::Var)];
        leaf.prop_recursive(5, 40, 2, |inner| {
            prop_oneof![
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::add(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::sub(a, b)),
                (inner.clone(), inner.clone()).prop_map(|(a, b)| Expr::mul(a, b)),
                inner.clone().prop_map(Expr::neg),
                (inner.clone(), 0u32..4).prop_map(|(a, e)| Expr::pow(a, e)),
                (inner, 0usize..4).prop_map(|(a, k)| {
                    let b = [Builtin::Exp1m, Builtin::Log1p, Builtin::SinS, Builtin::CosM1][k];
                    Expr::call(b, a)
                }),
            ]
        })
    }

    proptest! {
        #[test]
        fn print_parse_round_trip(e in arb_expr()) {
            let text = e.display_with(&names());
            let back = parse_expr(&text, &names()).unwrap();
            prop_assert_eq!(back, e, "text: {}", text);
        }
    }
}
