//! Reader for the text form of algebra elements.
//!
//! Accepts everything `Display` produces for `ExactScalar` and
//! `AlgebraElement`, e.g. `[h . d(1)(h)] + (1/2)*t*[h^2]` or
//! `(3/4 + 1/2 i) * pi^{3/2} * t^2`. Bare atoms may appear outside brackets.

use num_bigint::BigInt;
use num_traits::Zero;

use crate::algebra::{AlgebraElement, Generator, MAX_DIRECTIONS};
use crate::error::ParseError;
use crate::scalar::{ExactScalar, Rational};

#[derive(Clone, Debug, PartialEq)]
enum Token {
    Int(BigInt),
    Ident(String),
    Sym(char),
}

fn lex(text: &str) -> Result<Vec<(usize, Token)>, ParseError> {
    let chars: Vec<char> = text.chars().collect();
    let mut out = Vec::new();
    let mut i = 0;
    while i < chars.len() {
        let c = chars[i];
        if c.is_whitespace() {
            i += 1;
        } else if c.is_ascii_digit() {
            let start = i;
            while i < chars.len() && chars[i].is_ascii_digit() {
                i += 1;
            }
            let digits: String = chars[start..i].iter().collect();
            out.push((start, Token::Int(digits.parse().expect("digits"))));
        } else if c.is_ascii_alphabetic() {
            let start = i;
            while i < chars.len() && (chars[i].is_ascii_alphanumeric() || chars[i] == '_') {
                i += 1;
            }
            out.push((start, Token::Ident(chars[start..i].iter().collect())));
        } else if "+-*/()[]{}^.,".contains(c) {
            out.push((i, Token::Sym(c)));
            i += 1;
        } else {
            return Err(ParseError::new(i, format!("unexpected character {:?}", c)));
        }
    }
    Ok(out)
}

struct Parser<'a> {
    tokens: Vec<(usize, Token)>,
    pos: usize,
    end: usize,
    generators: &'a [Generator],
}

const RESERVED: [&str; 5] = ["i", "pi", "t", "d", "adj"];

impl<'a> Parser<'a> {
    fn peek(&self) -> Option<&Token> {
        self.tokens.get(self.pos).map(|(_, t)| t)
    }

    fn offset(&self) -> usize {
        self.tokens.get(self.pos).map(|(o, _)| *o).unwrap_or(self.end)
    }

    fn error<T>(&self, msg: impl Into<String>) -> Result<T, ParseError> {
        Err(ParseError::new(self.offset(), msg))
    }

    fn eat(&mut self, c: char) -> bool {
        if self.peek() == Some(&Token::Sym(c)) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: char) -> Result<(), ParseError> {
        if self.eat(c) {
            Ok(())
        } else {
            self.error(format!("expected '{}'", c))
        }
    }

    fn int(&mut self) -> Result<BigInt, ParseError> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(n)
            }
            _ => self.error("expected an integer"),
        }
    }

    fn small_int(&mut self) -> Result<u32, ParseError> {
        let n = self.int()?;
        u32::try_from(&n).or_else(|_| self.error("integer too large"))
    }

    fn expr(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc.add_assign_ref(&self.term()?);
            } else if self.eat('-') {
                acc.sub_assign_ref(&self.term()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn starts_primary(&self) -> bool {
        matches!(self.peek(), Some(Token::Ident(_)) | Some(Token::Sym('(')) | Some(Token::Sym('[')))
    }

    fn term(&mut self) -> Result<AlgebraElement, ParseError> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = acc.multiply(&self.unary()?);
            } else if self.eat('/') {
                let at = self.offset();
                let d = self.unary()?;
                let q = d.as_scalar().and_then(|s| s.as_rational()).filter(|q| !q.is_zero());
                match q {
                    Some(q) => acc = acc.scale_rational(&(Rational::from_integer(1.into()) / q)),
                    None => return Err(ParseError::new(at, "can only divide by a nonzero rational")),
                }
            } else if self.starts_primary() {
                // juxtaposition, as in `1/2 i`
                acc = acc.multiply(&self.primary()?);
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<AlgebraElement, ParseError> {
        if self.eat('-') {
            Ok(self.unary()?.scale(&ExactScalar::from_int(-1)))
        } else {
            self.primary()
        }
    }

    fn exponent(&mut self) -> Result<Rational, ParseError> {
        if self.eat('{') {
            let num = self.int()?;
            let den = if self.eat('/') { self.int()? } else { BigInt::from(1) };
            self.expect('}')?;
            if den.is_zero() {
                return self.error("zero denominator");
            }
            Ok(Rational::new(num, den))
        } else {
            Ok(Rational::from_integer(self.int()?))
        }
    }

    fn primary(&mut self) -> Result<AlgebraElement, ParseError> {
        match self.peek().cloned() {
            Some(Token::Int(n)) => {
                self.pos += 1;
                Ok(AlgebraElement::from_rational(Rational::from_integer(n)))
            }
            Some(Token::Sym('(')) => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(')')?;
                Ok(e)
            }
            Some(Token::Sym('[')) => {
                self.pos += 1;
                let w = self.word()?;
                self.expect(']')?;
                Ok(w)
            }
            Some(Token::Ident(name)) => match name.as_str() {
                "i" => {
                    self.pos += 1;
                    Ok(AlgebraElement::scalar(ExactScalar::i()))
                }
                "pi" => {
                    self.pos += 1;
                    let p = if self.eat('^') { self.exponent()? } else { Rational::from_integer(1.into()) };
                    let half = &p * Rational::from_integer(2.into());
                    if !half.is_integer() || half < Rational::zero() {
                        return self.error("pi exponent must be a nonnegative half-integer");
                    }
                    let p = u32::try_from(half.to_integer()).or_else(|_| self.error("pi exponent too large"))?;
                    Ok(AlgebraElement::scalar(ExactScalar::pi_half_power(p)))
                }
                "t" => {
                    self.pos += 1;
                    let j = if self.eat('^') {
                        let e = self.exponent()?;
                        if !e.is_integer() || e < Rational::zero() {
                            return self.error("t exponent must be a nonnegative integer");
                        }
                        u32::try_from(e.to_integer()).or_else(|_| self.error("t exponent too large"))?
                    } else {
                        1
                    };
                    Ok(AlgebraElement::scalar(ExactScalar::t_power(j)))
                }
                _ => self.atom_power(),
            },
            _ => self.error("expected a number, atom, '(' or '['"),
        }
    }

    fn word(&mut self) -> Result<AlgebraElement, ParseError> {
        if let Some(Token::Int(n)) = self.peek() {
            if *n == BigInt::from(1) {
                self.pos += 1;
                return Ok(AlgebraElement::one());
            }
        }
        let mut acc = self.atom_power()?;
        while self.eat('.') {
            acc = acc.multiply(&self.atom_power()?);
        }
        Ok(acc)
    }

    fn atom_power(&mut self) -> Result<AlgebraElement, ParseError> {
        let a = self.atom()?;
        if self.eat('^') {
            let k = self.small_int()?;
            let mut out = AlgebraElement::one();
            for _ in 0..k {
                out = out.multiply(&a);
            }
            return Ok(out);
        }
        Ok(a)
    }

    fn atom(&mut self) -> Result<AlgebraElement, ParseError> {
        let name = match self.peek().cloned() {
            Some(Token::Ident(n)) => n,
            _ => return self.error("expected an atom"),
        };
        self.pos += 1;
        match name.as_str() {
            "adj" => {
                self.expect('(')?;
                let inner = self.atom()?;
                self.expect(')')?;
                Ok(inner.adjoint())
            }
            "d" => {
                self.expect('(')?;
                let mut alpha = [0u8; MAX_DIRECTIONS];
                loop {
                    let at = self.offset();
                    let axis = self.small_int()? as usize;
                    if axis == 0 || axis > MAX_DIRECTIONS {
                        return Err(ParseError::new(at, format!("direction {} out of range (1..=3)", axis)));
                    }
                    alpha[axis - 1] += 1;
                    if !self.eat(',') {
                        break;
                    }
                }
                self.expect(')')?;
                self.expect('(')?;
                let inner = self.atom()?;
                self.expect(')')?;
                inner.delta_multi(&alpha).map_err(|e| ParseError::new(self.offset(), e.to_string()))
            }
            n if RESERVED.contains(&n) => self.error(format!("{} is reserved", n)),
            n => match self.generators.iter().find(|g| g.name() == n) {
                Some(g) => Ok(AlgebraElement::generator(*g)),
                None => Err(ParseError::new(self.tokens[self.pos - 1].0, format!("undeclared generator {}", n))),
            },
        }
    }
}

/// Parses an element over the declared base generators.
pub fn parse_element(text: &str, generators: &[Generator]) -> Result<AlgebraElement, ParseError> {
    if let Some(g) = generators.iter().find(|g| RESERVED.contains(&g.name())) {
        return Err(ParseError::new(0, format!("generator name {} is reserved", g.name())));
    }
    let tokens = lex(text)?;
    if tokens.is_empty() {
        return Err(ParseError::new(0, "empty expression"));
    }
    let mut p = Parser { tokens, pos: 0, end: text.chars().count(), generators };
    let e = p.expr()?;
    if p.pos != p.tokens.len() {
        return p.error("trailing input");
    }
    Ok(e)
}

/// Parses a scalar: an expression without atoms.
pub fn parse_scalar(text: &str) -> Result<ExactScalar, ParseError> {
    parse_element(text, &[])?.as_scalar().ok_or_else(|| ParseError::new(0, "expression is not a scalar"))
}
