use num_bigint::BigInt;

use crate::diagnostic::{Diagnostic, Span};

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Int(BigInt),
    /// A literal with a decimal point, kept verbatim.
    Decimal(String),
    LBrace,
    RBrace,
    LParen,
    RParen,
    Semi,
    Eq,
    Arrow,
    Slash,
    Plus,
    Minus,
    Star,
    Caret,
    Comma,
    Eof,
}

impl Tok {
    pub fn describe(&self) -> String {
        match self {
            Tok::Ident(s) => format!("`{s}`"),
            Tok::Int(n) => format!("`{n}`"),
            Tok::Decimal(s) => format!("`{s}`"),
            Tok::LBrace => "`{`".into(),
            Tok::RBrace => "`}`".into(),
            Tok::LParen => "`(`".into(),
            Tok::RParen => "`)`".into(),
            Tok::Semi => "`;`".into(),
            Tok::Eq => "`=`".into(),
            Tok::Arrow => "`->`".into(),
            Tok::Slash => "`/`".into(),
            Tok::Plus => "`+`".into(),
            Tok::Minus => "`-`".into(),
            Tok::Star => "`*`".into(),
            Tok::Caret => "`^`".into(),
            Tok::Comma => "`,`".into(),
            Tok::Eof => "end of input".into(),
        }
    }
}

/// Splits source text into tokens. `#` starts a comment running to the end of the line.
pub fn lex(src: &str) -> Result<Vec<(Tok, Span)>, Diagnostic> {
    let mut out = Vec::new();
    let mut chars = src.chars().peekable();
    let (mut line, mut column) = (1u32, 1u32);
    let bump = |c: char, line: &mut u32, column: &mut u32| {
        if c == '\n' {
            *line += 1;
            *column = 1;
        } else {
            *column += 1;
        }
    };
    while let Some(&c) = chars.peek() {
        let span = Span { line, column };
        if c.is_whitespace() {
            chars.next();
            bump(c, &mut line, &mut column);
            continue;
        }
        if c == '#' {
            while let Some(&c) = chars.peek() {
                if c == '\n' {
                    break;
                }
                chars.next();
                bump(c, &mut line, &mut column);
            }
            continue;
        }
        if c.is_ascii_alphabetic() || c == '_' {
            let mut s = String::new();
            while let Some(&c) = chars.peek() {
                if c.is_ascii_alphanumeric() || c == '_' || c == '\'' {
                    s.push(c);
                    chars.next();
                    bump(c, &mut line, &mut column);
                } else {
                    break;
                }
            }
            out.push((Tok::Ident(s), span));
            continue;
        }
        if c.is_ascii_digit() {
            let mut s = String::new();
            let mut dot = false;
            while let Some(&c) = chars.peek() {
                if c.is_ascii_digit() || (c == '.' && !dot) {
                    dot |= c == '.';
                    s.push(c);
                    chars.next();
                    bump(c, &mut line, &mut column);
                } else {
                    break;
                }
            }
            if dot {
                if s.ends_with('.') {
                    return Err(Diagnostic::error(span, format!("malformed number `{s}`")));
                }
                out.push((Tok::Decimal(s), span));
            } else {
                out.push((Tok::Int(s.parse().expect("digits")), span));
            }
            continue;
        }
        chars.next();
        bump(c, &mut line, &mut column);
        let tok = match c {
            '{' => Tok::LBrace,
            '}' => Tok::RBrace,
            '(' => Tok::LParen,
            ')' => Tok::RParen,
            ';' => Tok::Semi,
            '=' => Tok::Eq,
            '/' => Tok::Slash,
            '+' => Tok::Plus,
            '*' => Tok::Star,
            '^' => Tok::Caret,
            ',' => Tok::Comma,
            '-' => {
                if chars.peek() == Some(&'>') {
                    chars.next();
                    bump('>', &mut line, &mut column);
                    Tok::Arrow
                } else {
                    Tok::Minus
                }
            }
            other => return Err(Diagnostic::error(span, format!("unexpected character `{other}`"))),
        };
        out.push((tok, span));
    }
    out.push((Tok::Eof, Span { line, column }));
    Ok(out)
}
