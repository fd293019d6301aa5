use std::fmt;

use super::source::{ParseDiagnostic, Span};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Tok {
    Ident(String),
    Dot,
    Comma,
    Colon,
    LBrace,
    RBrace,
    LParen,
    RParen,
    Bang,
    Amp,
    Pipe,
    /// `|=`
    Turnstile,
    /// `->`
    Arrow,
    /// `~>`
    Tilde,
    /// `=>`
    FatArrow,
    Eof,
}

impl fmt::Display for Tok {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let s = match self {
            Tok::Ident(name) => return write!(f, "`{name}`"),
            Tok::Dot => "`.`",
            Tok::Comma => "`,`",
            Tok::Colon => "`:`",
            Tok::LBrace => "`{`",
            Tok::RBrace => "`}`",
            Tok::LParen => "`(`",
            Tok::RParen => "`)`",
            Tok::Bang => "`!`",
            Tok::Amp => "`&`",
            Tok::Pipe => "`|`",
            Tok::Turnstile => "`|=`",
            Tok::Arrow => "`->`",
            Tok::Tilde => "`~>`",
            Tok::FatArrow => "`=>`",
            Tok::Eof => "end of input",
        };
        f.write_str(s)
    }
}

#[derive(Debug, Clone, PartialEq, Eq)]
pub struct Token {
    pub tok: Tok,
    pub span: Span,
}

struct Cursor<'a> {
    text: &'a str,
    offset: usize,
    line: usize,
    column: usize,
}

impl<'a> Cursor<'a> {
    fn peek(&self) -> Option<char> {
        self.text[self.offset..].chars().next()
    }

    fn peek2(&self) -> Option<char> {
        let mut it = self.text[self.offset..].chars();
        it.next();
        it.next()
    }

    fn bump(&mut self) -> Option<char> {
        let c = self.peek()?;
        self.offset += c.len_utf8();
        if c == '\n' {
            self.line += 1;
            self.column = 1;
        } else {
            self.column += 1;
        }
        Some(c)
    }

    fn here(&self) -> Span {
        Span {
            offset: self.offset,
            line: self.line,
            column: self.column,
            length: 0,
        }
    }

    fn span_from(&self, start: Span) -> Span {
        let length = self.text[start.offset..self.offset].chars().count();
        Span { length, ..start }
    }
}

/// Splits source text into tokens. Lexing continues past errors so that
/// every bad character is reported; the token stream always ends in `Eof`.
pub fn tokenize(text: &str) -> (Vec<Token>, Vec<ParseDiagnostic>) {
    let mut cur = Cursor {
        text,
        offset: 0,
        line: 1,
        column: 1,
    };
    let mut tokens = Vec::new();
    let mut diags = Vec::new();

    while let Some(c) = cur.peek() {
        let start = cur.here();
        if c.is_whitespace() {
            cur.bump();
            continue;
        }
        if c == '(' && cur.peek2() == Some('*') {
            cur.bump();
            cur.bump();
            let mut closed = false;
            while let Some(c) = cur.bump() {
                if c == '*' && cur.peek() == Some(')') {
                    cur.bump();
                    closed = true;
                    break;
                }
            }
            if !closed {
                diags.push(ParseDiagnostic::error(
                    "unterminated comment",
                    Span { length: 2, ..start },
                ));
            }
            continue;
        }
        if c.is_alphabetic() || c == '_' {
            let mut name = String::new();
            while let Some(c) = cur.peek() {
                if c.is_alphanumeric() || c == '_' {
                    name.push(c);
                    cur.bump();
                } else {
                    break;
                }
            }
            let span = cur.span_from(start);
            let valid_start = name.starts_with(|c: char| c.is_ascii_lowercase());
            let valid_rest = name
                .chars()
                .all(|c| c.is_ascii_lowercase() || c.is_ascii_digit() || c == '_');
            if !(valid_start && valid_rest) {
                diags.push(ParseDiagnostic::error(
                    format!("invalid identifier `{name}`: use lowercase letters, digits and underscores, starting with a letter"),
                    span,
                ));
            }
            tokens.push(Token {
                tok: Tok::Ident(name),
                span,
            });
            continue;
        }
        cur.bump();
        let next = cur.peek();
        let tok = match (c, next) {
            ('-', Some('>')) => {
                cur.bump();
                Tok::Arrow
            }
            ('~', Some('>')) => {
                cur.bump();
                Tok::Tilde
            }
            ('=', Some('>')) => {
                cur.bump();
                Tok::FatArrow
            }
            ('|', Some('=')) => {
                cur.bump();
                Tok::Turnstile
            }
            ('|', _) => Tok::Pipe,
            ('.', _) => Tok::Dot,
            (',', _) => Tok::Comma,
            (':', _) => Tok::Colon,
            ('{', _) => Tok::LBrace,
            ('}', _) => Tok::RBrace,
            ('(', _) => Tok::LParen,
            (')', _) => Tok::RParen,
            ('!', _) => Tok::Bang,
            ('&', _) => Tok::Amp,
            _ => {
                diags.push(ParseDiagnostic::error(
                    format!("unexpected character `{c}`"),
                    cur.span_from(start),
                ));
                continue;
            }
        };
        tokens.push(Token {
            tok,
            span: cur.span_from(start),
        });
    }
    tokens.push(Token {
        tok: Tok::Eof,
        span: cur.here(),
    });
    (tokens, diags)
}
