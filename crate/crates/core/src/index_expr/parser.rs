//! Recursive-descent parser.
//!
//! ```text
//! expr    := term (('+' | '-') term)*
//! term    := unary ('*' unary | '/' NUMBER)*
//! unary   := '-' unary | primary
//! primary := NUMBER | ref | call | '(' expr ')'
//! ref     := NAME ('{' LETTERS? ';' LETTERS? '}')?
//! call    := ('alt' | 'sym') '(' expr ';' LETTER ',' LETTER ')'
//!          | ('cd' | 'pd') '(' expr ';' LETTER ')'
//! ```

use super::ast::{Expr, Func};
use super::lexer::{tokenize, Token, TokenKind};
use crate::error::{Error, Result};

pub fn parse(src: &str) -> Result<Expr> {
    let tokens = tokenize(src)?;
    let mut p = Parser { tokens, pos: 0 };
    let (e, _) = p.expr()?;
    if p.peek().kind != TokenKind::Eof {
        return Err(p.error(
            "unexpected trailing input",
            &["`+`", "`-`", "`*`", "`/`", "end of input"],
        ));
    }
    Ok(e)
}

/// Index structure of a subexpression: free uppers, free lowers and the
/// letters already consumed by a contraction.
#[derive(Clone, Debug, Default)]
struct Sig {
    upper: Vec<char>,
    lower: Vec<char>,
    dummy: Vec<char>,
}

impl Sig {
    fn same_free(&self, other: &Sig) -> bool {
        let sorted = |v: &[char]| {
            let mut v = v.to_vec();
            v.sort_unstable();
            v
        };
        sorted(&self.upper) == sorted(&other.upper) && sorted(&self.lower) == sorted(&other.lower)
    }

    /// Signature of a product: a letter free up in one factor and free down
    /// in the other contracts; any other repetition is an error.
    fn product(mut self, other: Sig) -> std::result::Result<Sig, String> {
        for c in &other.dummy {
            if self.upper.contains(c) || self.lower.contains(c) || self.dummy.contains(c) {
                return Err(format!("index `{c}` appears more than twice"));
            }
        }
        for c in &self.dummy {
            if other.upper.contains(c) || other.lower.contains(c) {
                return Err(format!("index `{c}` appears more than twice"));
            }
        }
        self.dummy.extend(other.dummy);
        for c in other.upper {
            if self.upper.contains(&c) {
                return Err(format!("index `{c}` repeated as an upper index"));
            }
            if let Some(pos) = self.lower.iter().position(|x| *x == c) {
                self.lower.remove(pos);
                self.dummy.push(c);
            } else {
                self.upper.push(c);
            }
        }
        for c in other.lower {
            if self.lower.contains(&c) {
                return Err(format!("index `{c}` repeated as a lower index"));
            }
            if let Some(pos) = self.upper.iter().position(|x| *x == c) {
                self.upper.remove(pos);
                self.dummy.push(c);
            } else {
                self.lower.push(c);
            }
        }
        Ok(self)
    }
}

struct Parser {
    tokens: Vec<Token>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.pos]
    }

    fn bump(&mut self) -> Token {
        let t = self.tokens[self.pos].clone();
        if t.kind != TokenKind::Eof {
            self.pos += 1;
        }
        t
    }

    fn error(&self, message: &str, expected: &[&str]) -> Error {
        let t = self.peek();
        Error::Parse {
            line: t.line,
            column: t.column,
            message: format!("{message}, found {}", t.kind.describe()),
            expected: expected.iter().map(|s| s.to_string()).collect(),
        }
    }

    fn error_at(at: &Token, message: String) -> Error {
        Error::Parse {
            line: at.line,
            column: at.column,
            message,
            expected: Vec::new(),
        }
    }

    fn expect(&mut self, kind: TokenKind) -> Result<Token> {
        if self.peek().kind == kind {
            Ok(self.bump())
        } else {
            let want = format!("`{}`", kind.symbol());
            Err(self.error(&format!("expected {want}"), &[want.as_str()]))
        }
    }

    fn expr(&mut self) -> Result<(Expr, Sig)> {
        let (mut lhs, sig) = self.term()?;
        loop {
            let op = self.peek().clone();
            let add = match op.kind {
                TokenKind::Plus => true,
                TokenKind::Minus => false,
                _ => return Ok((lhs, sig)),
            };
            self.bump();
            let (rhs, rsig) = self.term()?;
            if !sig.same_free(&rsig) {
                return Err(Self::error_at(
                    &op,
                    format!(
                        "unbalanced indices: {{{};{}}} vs {{{};{}}}",
                        String::from_iter(&sig.upper),
                        String::from_iter(&sig.lower),
                        String::from_iter(&rsig.upper),
                        String::from_iter(&rsig.lower)
                    ),
                ));
            }
            lhs = if add {
                Expr::Add(Box::new(lhs), Box::new(rhs))
            } else {
                Expr::Sub(Box::new(lhs), Box::new(rhs))
            };
        }
    }

    fn term(&mut self) -> Result<(Expr, Sig)> {
        let (mut lhs, mut sig) = self.unary()?;
        loop {
            let op = self.peek().clone();
            match op.kind {
                TokenKind::Star => {
                    self.bump();
                    let (rhs, rsig) = self.unary()?;
                    sig = sig.product(rsig).map_err(|m| Self::error_at(&op, m))?;
                    lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
                }
                TokenKind::Slash => {
                    self.bump();
                    match self.peek().kind.clone() {
                        TokenKind::Number(n) => {
                            self.bump();
                            lhs = Expr::Div(Box::new(lhs), n);
                        }
                        _ => {
                            return Err(
                                self.error("division is only by a number literal", &["number"])
                            )
                        }
                    }
                }
                _ => return Ok((lhs, sig)),
            }
        }
    }

    fn unary(&mut self) -> Result<(Expr, Sig)> {
        if self.peek().kind == TokenKind::Minus {
            self.bump();
            let (e, sig) = self.unary()?;
            return Ok((Expr::Neg(Box::new(e)), sig));
        }
        self.primary()
    }

    fn primary(&mut self) -> Result<(Expr, Sig)> {
        let start = self.peek().clone();
        match start.kind.clone() {
            TokenKind::Number(n) => {
                self.bump();
                Ok((Expr::Number(n), Sig::default()))
            }
            TokenKind::LParen => {
                self.bump();
                let e = self.expr()?;
                self.expect(TokenKind::RParen)?;
                Ok(e)
            }
            TokenKind::Ident(name) => {
                self.bump();
                if self.peek().kind == TokenKind::LParen {
                    match Func::from_name(&name) {
                        Some(func) => self.call(func, &start),
                        None => Err(Self::error_at(&start, format!("unknown function `{name}`"))),
                    }
                } else {
                    self.reference(name, &start)
                }
            }
            _ => Err(self.error(
                "expected an operand",
                &["number", "identifier", "`(`", "`-`"],
            )),
        }
    }

    fn call(&mut self, func: Func, start: &Token) -> Result<(Expr, Sig)> {
        self.expect(TokenKind::LParen)?;
        let (arg, sig) = self.expr()?;
        self.expect(TokenKind::Semi)?;
        let mut indices = vec![self.letter()?];
        for _ in 1..func.arity() {
            self.expect(TokenKind::Comma)?;
            indices.push(self.letter()?);
        }
        self.expect(TokenKind::RParen)?;
        let sig = match func {
            Func::Alt | Func::Sym => {
                let (a, b) = (indices[0], indices[1]);
                let both = |v: &[char]| v.contains(&a) && v.contains(&b);
                if a == b || !(both(&sig.upper) || both(&sig.lower)) {
                    return Err(Self::error_at(
                        start,
                        format!(
                            "`{}` needs two distinct free indices on one side, got `{a}`, `{b}`",
                            func.name()
                        ),
                    ));
                }
                sig
            }
            Func::Cd | Func::Pd => {
                let k = Sig {
                    lower: vec![indices[0]],
                    ..Sig::default()
                };
                sig.product(k).map_err(|m| Self::error_at(start, m))?
            }
        };
        Ok((
            Expr::Call {
                func,
                arg: Box::new(arg),
                indices,
            },
            sig,
        ))
    }

    fn letter(&mut self) -> Result<char> {
        if let TokenKind::Ident(s) = &self.peek().kind {
            let mut chars = s.chars();
            if let (Some(c), None) = (chars.next(), chars.next()) {
                if c.is_ascii_alphabetic() {
                    self.bump();
                    return Ok(c);
                }
            }
        }
        Err(self.error("expected a single index letter", &["index letter"]))
    }

    /// Letters up to the next `;` or `}`; spaces between letters are allowed.
    fn letters(&mut self, stop: TokenKind) -> Result<Vec<char>> {
        let mut out = Vec::new();
        loop {
            match &self.peek().kind {
                TokenKind::Ident(s) if s.chars().all(|c| c.is_ascii_alphabetic()) => {
                    out.extend(s.chars());
                    self.bump();
                }
                k if *k == stop => return Ok(out),
                _ => {
                    let want = format!("`{}`", stop.symbol());
                    return Err(
                        self.error("expected index letters", &["index letters", want.as_str()])
                    );
                }
            }
        }
    }

    fn reference(&mut self, name: String, start: &Token) -> Result<(Expr, Sig)> {
        if self.peek().kind != TokenKind::LBrace {
            let e = Expr::Ref {
                name,
                upper: Vec::new(),
                lower: Vec::new(),
            };
            return Ok((e, Sig::default()));
        }
        self.bump();
        let upper = self.letters(TokenKind::Semi)?;
        self.expect(TokenKind::Semi)?;
        let lower = self.letters(TokenKind::RBrace)?;
        self.expect(TokenKind::RBrace)?;
        let mut sig = Sig::default();
        for &c in &upper {
            let one = Sig {
                upper: vec![c],
                ..Sig::default()
            };
            sig = sig.product(one).map_err(|m| Self::error_at(start, m))?;
        }
        for &c in &lower {
            let one = Sig {
                lower: vec![c],
                ..Sig::default()
            };
            sig = sig.product(one).map_err(|m| Self::error_at(start, m))?;
        }
        Ok((Expr::Ref { name, upper, lower }, sig))
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    fn r(name: &str, u: &str, l: &str) -> Expr {
        Expr::Ref {
            name: name.into(),
            upper: u.chars().collect(),
            lower: l.chars().collect(),
        }
    }

    #[test]
    fn precedence_and_associativity() {
        let e = parse("a - b - c * d / 2").unwrap();
        let want = Expr::Sub(
            Box::new(Expr::Sub(
                Box::new(r("a", "", "")),
                Box::new(r("b", "", "")),
            )),
            Box::new(Expr::Div(
                Box::new(Expr::Mul(
                    Box::new(r("c", "", "")),
                    Box::new(r("d", "", "")),
                )),
                "2".into(),
            )),
        );
        assert_eq!(e, want);
    }

    #[test]
    fn refs_and_calls() {
        let e = parse("alt(R{;ij}; i, j)").unwrap();
        assert_eq!(
            e,
            Expr::Call {
                func: Func::Alt,
                arg: Box::new(r("R", "", "ij")),
                indices: vec!['i', 'j'],
            }
        );
        assert_eq!(parse("R{a; i j a}").unwrap(), r("R", "a", "ija"));
        assert_eq!(parse("mu{;}").unwrap(), r("mu", "", ""));
    }

    #[test]
    fn errors_carry_position_and_expectations() {
        match parse("R{a;ij") {
            Err(Error::Parse {
                line,
                column,
                expected,
                ..
            }) => {
                assert_eq!((line, column), (1, 7));
                assert!(expected.iter().any(|e| e.contains('}')));
            }
            other => panic!("{other:?}"),
        }
        match parse("a +\n  * b") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (2, 3)),
            other => panic!("{other:?}"),
        }
        assert!(matches!(parse("a / b"), Err(Error::Parse { .. })));
        assert!(matches!(parse("alt(a; ij, k)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("(a"), Err(Error::Parse { .. })));
        assert!(matches!(parse("foo(a; i)"), Err(Error::Parse { .. })));
        assert!(matches!(parse("a b"), Err(Error::Parse { .. })));
    }

    #[test]
    fn index_structure_is_checked() {
        assert!(parse("R{a;jma}").is_ok());
        assert!(parse("X{;ij} + Y{;ji}").is_ok());
        assert!(parse("cd(u{;j}; k) * v{k;}").is_ok());
        for bad in [
            "X{;ij} + Y{;ik}",
            "X{;ii}",
            "R{a;aab}",
            "X{a;} * Y{a;}",
            "R{a;bca} * v{a;}",
            "alt(X{;ij}; i, k)",
            "alt(X{i;j}; i, j)",
            "cd(u{;k}; k)",
        ] {
            match parse(bad) {
                Err(Error::Parse { line, column, .. }) => assert!(line >= 1 && column >= 1),
                other => panic!("{bad}: {other:?}"),
            }
        }
    }

    #[test]
    fn print_parse_round_trip() {
        for src in [
            "a - (b - c)",
            "a * (b * c)",
            "-(a + b) * c",
            "--a",
            "a - -2",
            "(a + b) / 3",
            "cd(theta{;j}; n) - alt(R{;jn}; j, n) / 2",
            "d{i;m} * Y{;jn} - d{i;n} * Y{;jm}",
            "-a * b",
            "-(a * b)",
        ] {
            let e = parse(src).unwrap();
            let printed = e.to_string();
            assert_eq!(parse(&printed).unwrap(), e, "{src} -> {printed}");
        }
    }
}
