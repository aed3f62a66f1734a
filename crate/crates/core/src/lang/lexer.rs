use num_bigint::BigInt;

use super::ParseError;
use crate::algebra::Rational;

#[derive(Debug, Clone, PartialEq)]
pub(crate) enum TokenKind {
    /// Unsigned integer or `p/q` literal.
    Number(Rational),
    Ident(String),
    Plus,
    Minus,
    Star,
    Caret,
    LParen,
    RParen,
    Equals,
    Semicolon,
    End,
}

#[derive(Debug, Clone, PartialEq)]
pub(crate) struct Token {
    pub kind: TokenKind,
    pub pos: usize,
}

pub(crate) fn tokenize(text: &str) -> Result<Vec<Token>, ParseError> {
    let bytes = text.as_bytes();
    let mut tokens = Vec::new();
    let mut i = 0;
    while i < bytes.len() {
        let c = bytes[i];
        let start = i;
        let kind = match c {
            b' ' | b'\t' | b'\n' | b'\r' => {
                i += 1;
                continue;
            }
            b'+' => TokenKind::Plus,
            b'-' => TokenKind::Minus,
            b'*' => TokenKind::Star,
            b'^' => TokenKind::Caret,
            b'(' => TokenKind::LParen,
            b')' => TokenKind::RParen,
            b'=' => TokenKind::Equals,
            b';' => TokenKind::Semicolon,
            b'0'..=b'9' => {
                let num_end = scan_digits(bytes, i);
                let numerator: BigInt = text[i..num_end].parse().expect("digits");
                i = num_end;
                let mut value = Rational::from_integer(numerator.clone());
                if i < bytes.len() && bytes[i] == b'/' {
                    let den_start = i + 1;
                    let den_end = scan_digits(bytes, den_start);
                    if den_end == den_start {
                        return Err(ParseError::syntax(i, "expected denominator after `/`"));
                    }
                    let denominator: BigInt = text[den_start..den_end].parse().expect("digits");
                    if denominator == BigInt::from(0) {
                        return Err(ParseError::syntax(den_start, "zero denominator"));
                    }
                    value = Rational::new(numerator, denominator);
                    i = den_end;
                }
                tokens.push(Token {
                    kind: TokenKind::Number(value),
                    pos: start,
                });
                continue;
            }
            c if c.is_ascii_alphabetic() || c == b'_' => {
                while i < bytes.len() && (bytes[i].is_ascii_alphanumeric() || bytes[i] == b'_') {
                    i += 1;
                }
                tokens.push(Token {
                    kind: TokenKind::Ident(text[start..i].to_string()),
                    pos: start,
                });
                continue;
            }
            _ => {
                let ch = text[i..].chars().next().expect("in bounds");
                return Err(ParseError::syntax(i, format!("unexpected character `{ch}`")));
            }
        };
        tokens.push(Token { kind, pos: start });
        i += 1;
    }
    tokens.push(Token {
        kind: TokenKind::End,
        pos: text.len(),
    });
    Ok(tokens)
}

fn scan_digits(bytes: &[u8], mut i: usize) -> usize {
    while i < bytes.len() && bytes[i].is_ascii_digit() {
        i += 1;
    }
    i
}
