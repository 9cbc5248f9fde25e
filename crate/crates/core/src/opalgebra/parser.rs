//! Recursive-descent parser for operator expressions.
//!
//! ```text
//! expr    := '-'? term (('+' | '-') term)* ;
//! term    := factor (('*' factor) | ('/' INT))* ;
//! factor  := base ('^' INT)? ;
//! base    := 'a' | 'ad' | 'a†' | 'n' | INT | '(' expr ')' ;
//! ```
//!
//! The leading minus and the division by an integer literal exist so that
//! every printed [`OperatorExpr`](super::OperatorExpr) parses back.

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Zero};
use thiserror::Error;

use super::{Letter, RawWord};

#[derive(Debug, Clone, PartialEq, Eq, Error)]
#[error("syntax error at byte {offset}: expected {}, found {found}", expected.join(" or "))]
pub struct ParseError {
    pub offset: usize,
    pub expected: Vec<&'static str>,
    pub found: String,
}

#[derive(Debug, Clone, PartialEq, Eq)]
enum Tok {
    A,
    Adag,
    N,
    Int(BigInt),
    Plus,
    Minus,
    Star,
    Slash,
    Caret,
    LParen,
    RParen,
    End,
}

impl Tok {
    fn describe(&self) -> String {
        match self {
            Tok::A => "'a'".into(),
            Tok::Adag => "'ad'".into(),
            Tok::N => "'n'".into(),
            Tok::Int(i) => format!("integer {i}"),
            Tok::Plus => "'+'".into(),
            Tok::Minus => "'-'".into(),
            Tok::Star => "'*'".into(),
            Tok::Slash => "'/'".into(),
            Tok::Caret => "'^'".into(),
            Tok::LParen => "'('".into(),
            Tok::RParen => "')'".into(),
            Tok::End => "end of input".into(),
        }
    }
}

const BASE_START: &[&str] = &["'a'", "'ad'", "'a†'", "'n'", "integer", "'('"];

fn lex(src: &str) -> Result<Vec<(usize, Tok)>, ParseError> {
    let mut out = Vec::new();
    let mut chars = src.char_indices().peekable();
    while let Some(&(start, c)) = chars.peek() {
        if c.is_whitespace() {
            chars.next();
            continue;
        }
        let single = match c {
            '+' => Some(Tok::Plus),
            '-' => Some(Tok::Minus),
            '*' => Some(Tok::Star),
            '/' => Some(Tok::Slash),
            '^' => Some(Tok::Caret),
            '(' => Some(Tok::LParen),
            ')' => Some(Tok::RParen),
            _ => None,
        };
        if let Some(tok) = single {
            chars.next();
            out.push((start, tok));
            continue;
        }
        if c.is_ascii_digit() {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if !d.is_ascii_digit() {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            let value = src[start..end].parse::<BigInt>().expect("digits only");
            out.push((start, Tok::Int(value)));
            continue;
        }
        if c.is_alphabetic() || c == '†' {
            let mut end = start;
            while let Some(&(i, d)) = chars.peek() {
                if !(d.is_alphanumeric() || d == '_' || d == '†') {
                    break;
                }
                end = i + d.len_utf8();
                chars.next();
            }
            let tok = match &src[start..end] {
                "a" => Tok::A,
                "ad" | "a†" => Tok::Adag,
                "n" => Tok::N,
                other => {
                    return Err(ParseError {
                        offset: start,
                        expected: BASE_START.to_vec(),
                        found: format!("identifier '{other}'"),
                    })
                }
            };
            out.push((start, tok));
            continue;
        }
        return Err(ParseError {
            offset: start,
            expected: BASE_START.to_vec(),
            found: format!("character '{c}'"),
        });
    }
    out.push((src.len(), Tok::End));
    Ok(out)
}

type Sum = Vec<RawWord>;

fn scalar(c: BigRational) -> Sum {
    vec![RawWord::new(c, Vec::new())]
}

fn product(lhs: &Sum, rhs: &Sum) -> Sum {
    let mut out = Vec::with_capacity(lhs.len() * rhs.len());
    for l in lhs {
        for r in rhs {
            let mut letters = l.letters.clone();
            letters.extend_from_slice(&r.letters);
            out.push(RawWord::new(&l.coefficient * &r.coefficient, letters));
        }
    }
    out
}

struct Parser {
    toks: Vec<(usize, Tok)>,
    pos: usize,
}

impl Parser {
    fn peek(&self) -> &Tok {
        &self.toks[self.pos].1
    }

    fn offset(&self) -> usize {
        self.toks[self.pos].0
    }

    fn bump(&mut self) -> Tok {
        let t = self.toks[self.pos].1.clone();
        if t != Tok::End {
            self.pos += 1;
        }
        t
    }

    fn error(&self, expected: &[&'static str]) -> ParseError {
        ParseError {
            offset: self.offset(),
            expected: expected.to_vec(),
            found: self.peek().describe(),
        }
    }

    fn expr(&mut self) -> Result<Sum, ParseError> {
        let negate_first = if *self.peek() == Tok::Minus {
            self.bump();
            true
        } else {
            false
        };
        let mut acc = self.term()?;
        if negate_first {
            for w in &mut acc {
                w.coefficient = -w.coefficient.clone();
            }
        }
        loop {
            let sign = match self.peek() {
                Tok::Plus => BigRational::one(),
                Tok::Minus => -BigRational::one(),
                _ => break,
            };
            self.bump();
            let rhs = self.term()?;
            acc.extend(rhs.into_iter().map(|mut w| {
                w.coefficient *= &sign;
                w
            }));
        }
        Ok(acc)
    }

    fn term(&mut self) -> Result<Sum, ParseError> {
        let mut acc = self.factor()?;
        loop {
            match self.peek() {
                Tok::Star => {
                    self.bump();
                    let rhs = self.factor()?;
                    acc = product(&acc, &rhs);
                }
                Tok::Slash => {
                    self.bump();
                    let offset = self.offset();
                    match self.bump() {
                        Tok::Int(d) if !d.is_zero() => {
                            let inv = BigRational::new(BigInt::one(), d);
                            for w in &mut acc {
                                w.coefficient *= &inv;
                            }
                        }
                        other => {
                            return Err(ParseError {
                                offset,
                                expected: vec!["nonzero integer divisor"],
                                found: other.describe(),
                            })
                        }
                    }
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn factor(&mut self) -> Result<Sum, ParseError> {
        let base = self.base()?;
        if *self.peek() != Tok::Caret {
            return Ok(base);
        }
        self.bump();
        let offset = self.offset();
        let exp = match self.bump() {
            Tok::Int(e) => u32::try_from(&e).map_err(|_| ParseError {
                offset,
                expected: vec!["exponent below 2^32"],
                found: format!("integer {e}"),
            })?,
            other => {
                return Err(ParseError {
                    offset,
                    expected: vec!["nonnegative integer exponent"],
                    found: other.describe(),
                })
            }
        };
        let mut acc = vec![RawWord::identity()];
        for _ in 0..exp {
            acc = product(&acc, &base);
        }
        Ok(acc)
    }

    fn base(&mut self) -> Result<Sum, ParseError> {
        match self.peek().clone() {
            Tok::A => {
                self.bump();
                Ok(vec![RawWord::unit(vec![Letter::A])])
            }
            Tok::Adag => {
                self.bump();
                Ok(vec![RawWord::unit(vec![Letter::Adag])])
            }
            Tok::N => {
                self.bump();
                Ok(vec![RawWord::unit(vec![Letter::Adag, Letter::A])])
            }
            Tok::Int(i) => {
                self.bump();
                Ok(scalar(BigRational::from_integer(i)))
            }
            Tok::LParen => {
                self.bump();
                let inner = self.expr()?;
                if *self.peek() != Tok::RParen {
                    return Err(self.error(&["'+'", "'-'", "'*'", "'/'", "'^'", "')'"]));
                }
                self.bump();
                Ok(inner)
            }
            _ => Err(self.error(BASE_START)),
        }
    }
}

/// Parses `source` into its fully expanded sum of coefficient-weighted words.
/// `n` stands for `ad*a`. Words are not merged or reordered.
pub fn parse(source: &str) -> Result<Vec<RawWord>, ParseError> {
    let mut p = Parser {
        toks: lex(source)?,
        pos: 0,
    };
    let words = p.expr()?;
    if *p.peek() != Tok::End {
        return Err(p.error(&["'+'", "'-'", "'*'", "'/'", "'^'", "end of input"]));
    }
    Ok(words)
}
