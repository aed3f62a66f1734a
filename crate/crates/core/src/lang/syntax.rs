use std::fmt;

use super::lexer::{tokenize, Token, TokenKind};
use super::ParseError;
use crate::algebra::Rational;

/// Byte offset into the source text. Ignored by equality so that trees
/// parsed from differently spaced text compare equal.
#[derive(Debug, Clone, Copy, Default)]
pub struct Pos(pub usize);

impl PartialEq for Pos {
    fn eq(&self, _: &Self) -> bool {
        true
    }
}

/// Expression syntax tree.
#[derive(Debug, Clone, PartialEq)]
pub enum Expr {
    Number(Rational),
    Var(String, Pos),
    /// `d<index>^<power>(arg)`
    Derive {
        index: usize,
        power: u32,
        arg: Box<Expr>,
        at: Pos,
    },
    Neg(Box<Expr>),
    Add(Box<Expr>, Box<Expr>),
    Sub(Box<Expr>, Box<Expr>),
    Mul(Box<Expr>, Box<Expr>),
    /// Exponents are signed in the tree; only Laurent contexts accept negatives.
    Pow(Box<Expr>, i64, Pos),
}

impl Expr {
    /// Names of plain identifiers in order of first appearance.
    pub fn identifiers(&self) -> Vec<String> {
        let mut out = Vec::new();
        self.collect_identifiers(&mut out);
        out
    }

    fn collect_identifiers(&self, out: &mut Vec<String>) {
        match self {
            Expr::Number(_) => {}
            Expr::Var(name, _) => {
                if !out.contains(name) {
                    out.push(name.clone());
                }
            }
            Expr::Derive { arg, .. } | Expr::Neg(arg) | Expr::Pow(arg, _, _) => {
                arg.collect_identifiers(out)
            }
            Expr::Add(a, b) | Expr::Sub(a, b) | Expr::Mul(a, b) => {
                a.collect_identifiers(out);
                b.collect_identifiers(out);
            }
        }
    }

    fn precedence(&self) -> u8 {
        match self {
            Expr::Add(..) | Expr::Sub(..) => 1,
            Expr::Neg(_) => 2,
            Expr::Mul(..) => 3,
            Expr::Pow(..) => 4,
            Expr::Number(r) if !r.is_integer() => 3,
            _ => 5,
        }
    }
}

fn write_operand(f: &mut fmt::Formatter<'_>, e: &Expr, min: u8) -> fmt::Result {
    if e.precedence() < min {
        write!(f, "({e})")
    } else {
        write!(f, "{e}")
    }
}

impl fmt::Display for Expr {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Expr::Number(r) => write!(f, "{r}"),
            Expr::Var(name, _) => f.write_str(name),
            Expr::Derive {
                index, power, arg, ..
            } => {
                write!(f, "d{index}")?;
                if *power != 1 {
                    write!(f, "^{power}")?;
                }
                write!(f, "({arg})")
            }
            Expr::Neg(a) => {
                f.write_str("-")?;
                write_operand(f, a, 3)
            }
            Expr::Add(a, b) => {
                write!(f, "{a} + ")?;
                write_operand(f, b, 2)
            }
            Expr::Sub(a, b) => {
                write!(f, "{a} - ")?;
                write_operand(f, b, 2)
            }
            Expr::Mul(a, b) => {
                write_operand(f, a, 3)?;
                f.write_str("*")?;
                write_operand(f, b, 4)
            }
            Expr::Pow(a, e, _) => {
                write_operand(f, a, 5)?;
                write!(f, "^{e}")
            }
        }
    }
}

/// Parses one expression; the whole input must be consumed.
pub fn parse_expr(text: &str) -> Result<Expr, ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, next: 0 };
    let e = p.expr()?;
    p.expect_end()?;
    Ok(e)
}

/// Parses `lhs = rhs`.
pub fn parse_equation(text: &str) -> Result<(Expr, Expr), ParseError> {
    let tokens = tokenize(text)?;
    let mut p = Parser { tokens, next: 0 };
    let lhs = p.expr()?;
    match p.peek().kind {
        TokenKind::Equals => p.advance(),
        _ => return Err(p.unexpected("expected `=`")),
    };
    let rhs = p.expr()?;
    p.expect_end()?;
    Ok((lhs, rhs))
}

struct Parser {
    tokens: Vec<Token>,
    next: usize,
}

impl Parser {
    fn peek(&self) -> &Token {
        &self.tokens[self.next]
    }

    fn peek_at(&self, k: usize) -> &TokenKind {
        let idx = (self.next + k).min(self.tokens.len() - 1);
        &self.tokens[idx].kind
    }

    fn advance(&mut self) -> Token {
        let t = self.tokens[self.next].clone();
        if self.next < self.tokens.len() - 1 {
            self.next += 1;
        }
        t
    }

    fn unexpected(&self, what: &str) -> ParseError {
        let t = self.peek();
        let found = match &t.kind {
            TokenKind::End => "end of input".to_string(),
            TokenKind::Number(r) => format!("`{r}`"),
            TokenKind::Ident(s) => format!("`{s}`"),
            TokenKind::Plus => "`+`".into(),
            TokenKind::Minus => "`-`".into(),
            TokenKind::Star => "`*`".into(),
            TokenKind::Caret => "`^`".into(),
            TokenKind::LParen => "`(`".into(),
            TokenKind::RParen => "`)`".into(),
            TokenKind::Equals => "`=`".into(),
            TokenKind::Semicolon => "`;`".into(),
        };
        ParseError::syntax(t.pos, format!("{what}, found {found}"))
    }

    fn expect_end(&self) -> Result<(), ParseError> {
        match self.peek().kind {
            TokenKind::End => Ok(()),
            _ => Err(self.unexpected("expected end of input")),
        }
    }

    fn expr(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.term()?;
        loop {
            match self.peek().kind {
                TokenKind::Plus => {
                    self.advance();
                    let rhs = self.term()?;
                    lhs = Expr::Add(Box::new(lhs), Box::new(rhs));
                }
                TokenKind::Minus => {
                    self.advance();
                    let rhs = self.term()?;
                    lhs = Expr::Sub(Box::new(lhs), Box::new(rhs));
                }
                _ => return Ok(lhs),
            }
        }
    }

    fn term(&mut self) -> Result<Expr, ParseError> {
        if self.peek().kind == TokenKind::Minus {
            self.advance();
            let inner = self.product()?;
            return Ok(Expr::Neg(Box::new(inner)));
        }
        self.product()
    }

    fn product(&mut self) -> Result<Expr, ParseError> {
        let mut lhs = self.factor()?;
        while self.peek().kind == TokenKind::Star {
            self.advance();
            let rhs = self.factor()?;
            lhs = Expr::Mul(Box::new(lhs), Box::new(rhs));
        }
        Ok(lhs)
    }

    fn factor(&mut self) -> Result<Expr, ParseError> {
        let base = self.base()?;
        if self.peek().kind != TokenKind::Caret {
            return Ok(base);
        }
        self.advance();
        let at = self.peek().pos;
        let negative = if self.peek().kind == TokenKind::Minus {
            self.advance();
            true
        } else {
            false
        };
        let e = self.small_uint("expected an integer exponent")?;
        let e = i64::from(e);
        Ok(Expr::Pow(Box::new(base), if negative { -e } else { e }, Pos(at)))
    }

    fn small_uint(&mut self, what: &str) -> Result<u32, ParseError> {
        match &self.peek().kind {
            TokenKind::Number(r) if r.is_integer() => {
                let pos = self.peek().pos;
                let value = u32::try_from(r.to_integer())
                    .map_err(|_| ParseError::syntax(pos, "integer too large"))?;
                self.advance();
                Ok(value)
            }
            _ => Err(self.unexpected(what)),
        }
    }

    fn is_derivation_head(&self) -> Option<usize> {
        let TokenKind::Ident(name) = &self.peek().kind else {
            return None;
        };
        let digits = name.strip_prefix('d')?;
        if digits.is_empty() || !digits.bytes().all(|b| b.is_ascii_digit()) {
            return None;
        }
        let follows = match self.peek_at(1) {
            TokenKind::LParen => true,
            TokenKind::Caret => {
                matches!(self.peek_at(2), TokenKind::Number(_))
                    && *self.peek_at(3) == TokenKind::LParen
            }
            _ => false,
        };
        if follows {
            digits.parse().ok().or(Some(usize::MAX))
        } else {
            None
        }
    }

    fn base(&mut self) -> Result<Expr, ParseError> {
        if let Some(index) = self.is_derivation_head() {
            let at = self.advance().pos;
            let mut power = 1;
            if self.peek().kind == TokenKind::Caret {
                self.advance();
                power = self.small_uint("expected an integer derivative power")?;
            }
            self.advance(); // `(`
            let arg = self.expr()?;
            if self.peek().kind != TokenKind::RParen {
                return Err(self.unexpected("expected `)`"));
            }
            self.advance();
            return Ok(Expr::Derive {
                index,
                power,
                arg: Box::new(arg),
                at: Pos(at),
            });
        }
        let tok = self.peek().clone();
        match tok.kind {
            TokenKind::Number(r) => {
                self.advance();
                Ok(Expr::Number(r))
            }
            TokenKind::Ident(name) => {
                self.advance();
                Ok(Expr::Var(name, Pos(tok.pos)))
            }
            TokenKind::LParen => {
                self.advance();
                let inner = self.expr()?;
                if self.peek().kind != TokenKind::RParen {
                    return Err(self.unexpected("expected `)`"));
                }
                self.advance();
                Ok(inner)
            }
            _ => Err(self.unexpected("expected a number, variable, derivative or `(`")),
        }
    }
}
