//! Tokenizer for index expressions. Every token records its line and column
//! (both 1-based) for diagnostics.

use crate::error::{Error, Result};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum TokenKind {
    Ident(String),
    Number(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Comma,
    Plus,
    Minus,
    Star,
    Slash,
    Eof,
}

impl TokenKind {
    pub fn describe(&self) -> String {
        match self {
            TokenKind::Ident(s) => format!("identifier `{s}`"),
            TokenKind::Number(s) => format!("number `{s}`"),
            TokenKind::Eof => "end of input".to_string(),
            other => format!("`{}`", other.symbol()),
        }
    }

    pub fn symbol(&self) -> &'static str {
        match self {
            TokenKind::LBrace => "{",
            TokenKind::RBrace => "}",
            TokenKind::LParen => "(",
            TokenKind::RParen => ")",
            TokenKind::Semi => ";",
            TokenKind::Comma => ",",
            TokenKind::Plus => "+",
            TokenKind::Minus => "-",
            TokenKind::Star => "*",
            TokenKind::Slash => "/",
            TokenKind::Ident(_) => "identifier",
            TokenKind::Number(_) => "number",
            TokenKind::Eof => "end of input",
        }
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Token {
    pub kind: TokenKind,
    pub line: usize,
    pub column: usize,
}

pub fn tokenize(src: &str) -> Result<Vec<Token>> {
    let chars: Vec<char> = src.chars().collect();
    let mut out = Vec::new();
    let (mut line, mut col) = (1usize, 1usize);
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        let (tl, tc) = (line, col);
        if c == '\n' {
            line += 1;
            col = 1;
            i += 1;
            continue;
        }
        if c.is_whitespace() {
            col += 1;
            i += 1;
            continue;
        }
        let single = match c {
            '{' => Some(TokenKind::LBrace),
            '}' => Some(TokenKind::RBrace),
            '(' => Some(TokenKind::LParen),
            ')' => Some(TokenKind::RParen),
            ';' => Some(TokenKind::Semi),
            ',' => Some(TokenKind::Comma),
            '+' => Some(TokenKind::Plus),
            '-' => Some(TokenKind::Minus),
            '*' => Some(TokenKind::Star),
            '/' => Some(TokenKind::Slash),
            _ => None,
        };
        if let Some(kind) = single {
            out.push(Token {
                kind,
                line: tl,
                column: tc,
            });
            i += 1;
            col += 1;
            continue;
        }
        let start = i;
        let kind = if c.is_ascii_alphabetic() || c == '_' {
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            TokenKind::Ident(chars[start..i].iter().collect())
        } else if c.is_ascii_digit() {
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            if i + 1 < chars.len() && chars[i] == '.' && chars[i + 1].is_ascii_digit() {
                i += 1;
                while i < chars.len() && chars[i].is_ascii_digit() {
                    i += 1;
                }
            }
            TokenKind::Number(chars[start..i].iter().collect())
        } else {
            return Err(Error::Parse {
                line: tl,
                column: tc,
                message: format!("unexpected character `{c}`"),
                expected: Vec::new(),
            });
        };
        col += i - start;
        out.push(Token {
            kind,
            line: tl,
            column: tc,
        });
    }
    out.push(Token {
        kind: TokenKind::Eof,
        line,
        column: col,
    });
    Ok(out)
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn positions_track_lines() {
        let toks = tokenize("R{a;ija}\n + 2.5").unwrap();
        assert_eq!(toks[0].kind, TokenKind::Ident("R".into()));
        let plus = toks.iter().find(|t| t.kind == TokenKind::Plus).unwrap();
        assert_eq!((plus.line, plus.column), (2, 2));
        let num = toks
            .iter()
            .find(|t| matches!(t.kind, TokenKind::Number(_)))
            .unwrap();
        assert_eq!(num.kind, TokenKind::Number("2.5".into()));
        assert_eq!((num.line, num.column), (2, 4));
    }

    #[test]
    fn rejects_stray_characters() {
        match tokenize("a # b") {
            Err(Error::Parse { line, column, .. }) => assert_eq!((line, column), (1, 3)),
            other => panic!("{other:?}"),
        }
    }
}
