//! Recursive-descent parser for rational-function strings.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' | '/') unary)*
//! unary := ('+' | '-') unary | power
//! power := atom ('^' ['-'] atom)?
//! atom  := integer | 'i' | 't' | '(' expr ')'
//! ```
//!
//! Exponents must evaluate to integer constants. Anything that would need a
//! ramified covering (`t^(1/2)`, `sqrt(t)`, ...) is rejected as unsupported.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{GaussianRational, RatFunc};
use crate::error::{Error, Result};

pub fn parse_ratfunc(input: &str) -> Result<RatFunc> {
    let mut p = Parser { chars: input.chars().collect(), pos: 0 };
    p.skip_ws();
    if p.peek().is_none() {
        return Err(p.error("empty expression"));
    }
    let v = p.expr()?;
    p.skip_ws();
    if let Some(c) = p.peek() {
        return Err(p.error(&format!("unexpected character '{c}'")));
    }
    Ok(v)
}

struct Parser {
    chars: Vec<char>,
    pos: usize,
}

impl Parser {
    fn error(&self, message: &str) -> Error {
        Error::Parse { column: self.pos + 1, message: message.to_string() }
    }

    fn peek(&self) -> Option<char> {
        self.chars.get(self.pos).copied()
    }

    fn skip_ws(&mut self) {
        while self.peek().is_some_and(char::is_whitespace) {
            self.pos += 1;
        }
    }

    fn eat(&mut self, c: char) -> bool {
        self.skip_ws();
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<RatFunc> {
        let mut acc = self.term()?;
        loop {
            if self.eat('+') {
                acc = &acc + &self.term()?;
            } else if self.eat('-') {
                acc = &acc - &self.term()?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<RatFunc> {
        let mut acc = self.unary()?;
        loop {
            if self.eat('*') {
                acc = &acc * &self.unary()?;
            } else if self.eat('/') {
                let col = self.pos;
                let rhs = self.unary()?;
                acc = acc.checked_div(&rhs).map_err(|_| Error::Parse {
                    column: col + 1,
                    message: "division by zero".into(),
                })?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<RatFunc> {
        if self.eat('-') {
            return Ok(-self.unary()?);
        }
        if self.eat('+') {
            return self.unary();
        }
        self.power()
    }

    fn power(&mut self) -> Result<RatFunc> {
        let base = self.atom()?;
        if !self.eat('^') {
            return Ok(base);
        }
        let negative = self.eat('-');
        let start = self.pos;
        let exp = self.atom()?;
        let Some(c) = exp.as_constant() else {
            return Err(Error::UnsupportedFunction(format!(
                "non-constant exponent '{}'",
                self.slice(start)
            )));
        };
        if !c.is_integer() {
            return Err(Error::UnsupportedFunction(format!(
                "non-integer exponent '{}' (ramified coefficients are not supported)",
                self.slice(start)
            )));
        }
        let e = c
            .as_i64()
            .and_then(|v| i32::try_from(v).ok())
            .filter(|v| v.abs() <= 1000)
            .ok_or_else(|| self.error("exponent out of range"))?;
        let e = if negative { -e } else { e };
        base.pow(e).map_err(|_| self.error("negative power of zero"))
    }

    fn slice(&self, start: usize) -> String {
        self.chars[start..self.pos].iter().collect::<String>().trim().to_string()
    }

    fn atom(&mut self) -> Result<RatFunc> {
        self.skip_ws();
        match self.peek() {
            None => Err(self.error("unexpected end of expression")),
            Some('(') => {
                self.pos += 1;
                let v = self.expr()?;
                if !self.eat(')') {
                    return Err(self.error("expected ')'"));
                }
                Ok(v)
            }
            Some(c) if c.is_ascii_digit() => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_ascii_digit()) {
                    self.pos += 1;
                }
                if self.peek() == Some('.') {
                    return Err(self.error("decimal literals are not supported; write a fraction"));
                }
                let digits: String = self.chars[start..self.pos].iter().collect();
                let n: BigInt = digits.parse().map_err(|_| self.error("bad integer"))?;
                Ok(RatFunc::constant(GaussianRational::real(BigRational::from_integer(n))))
            }
            Some(c) if c.is_alphabetic() || c == '_' => {
                let start = self.pos;
                while self.peek().is_some_and(|c| c.is_alphanumeric() || c == '_') {
                    self.pos += 1;
                }
                let ident: String = self.chars[start..self.pos].iter().collect();
                match ident.as_str() {
                    "t" => Ok(RatFunc::t()),
                    "i" => Ok(RatFunc::constant(GaussianRational::i())),
                    _ => {
                        self.skip_ws();
                        if self.peek() == Some('(') {
                            Err(Error::UnsupportedFunction(format!("function '{ident}'")))
                        } else {
                            self.pos = start;
                            Err(self.error(&format!("unknown symbol '{ident}'")))
                        }
                    }
                }
            }
            Some(c) => Err(self.error(&format!("unexpected character '{c}'"))),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn grammar_example() {
        let f = parse_ratfunc("(3/2+1/2*i)*t^2/(t-3)").unwrap();
        let c = GaussianRational::from_parts((3, 2), (1, 2));
        assert_eq!(f.num().coeff(2), c);
        assert_eq!(f.den().coeffs().len(), 2);
    }

    #[test]
    fn precedence() {
        assert_eq!(parse_ratfunc("-t^2").unwrap(), -parse_ratfunc("t*t").unwrap());
        assert_eq!(parse_ratfunc("1/2*t").unwrap(), parse_ratfunc("t/2").unwrap());
        assert_eq!(parse_ratfunc("t^-1").unwrap(), parse_ratfunc("1/t").unwrap());
        assert_eq!(parse_ratfunc("2^3").unwrap(), RatFunc::from_integer(8));
    }

    #[test]
    fn errors() {
        assert!(matches!(parse_ratfunc("t^"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("t^(1/2)"), Err(Error::UnsupportedFunction(_))));
        assert!(matches!(parse_ratfunc("sqrt(t)"), Err(Error::UnsupportedFunction(_))));
        assert!(matches!(parse_ratfunc("t^t"), Err(Error::UnsupportedFunction(_))));
        assert!(matches!(parse_ratfunc("x+1"), Err(Error::Parse { column: 1, .. })));
        assert!(matches!(parse_ratfunc("1/(t-t)"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc("(t"), Err(Error::Parse { .. })));
        assert!(matches!(parse_ratfunc(""), Err(Error::Parse { .. })));
    }

    #[test]
    fn display_round_trips() {
        for s in ["(t^2+1)/t", "-2*i/(t^2-2*i*t-1)", "(3/2+1/2*i)*t^2/(t-3)", "0", "i", "t^3-t/7"] {
            let f = parse_ratfunc(s).unwrap();
            assert_eq!(parse_ratfunc(&f.to_string()).unwrap(), f, "{s} -> {f}");
        }
    }
}
