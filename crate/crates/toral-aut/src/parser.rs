//! Recursive-descent parser for Laurent polynomial expressions.
//!
//! Grammar (whitespace insignificant):
//!
//! ```text
//! expr     := sign? term (sign term)*          sign := '+' | '-'
//! term     := factor ('*' factor)*
//! factor   := coef | var ('^' int)?
//! coef     := rational 'i'? | 'i'
//!           | '(' rational sign rational 'i' ')'
//! rational := int ('/' posint)?
//! ```
//!
//! `int` is an optionally signed decimal integer. Variables are the names
//! declared by the caller; `i` is reserved for the imaginary unit. Division is
//! only the rational-constant separator — dividing by a variable is a syntax
//! error (write `t1^-2` instead). Errors carry the byte offset of the offending
//! character within the expression.

use std::fmt;

use num_bigint::BigInt;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::gaussian::GaussianRational;
use crate::laurent::{LatticeVector, LaurentPoly};

/// A syntax or name error, with the byte offset where it was detected.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct ParseError {
    pub position: usize,
    pub message: String,
}

impl fmt::Display for ParseError {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "at offset {}: {}", self.position, self.message)
    }
}

impl std::error::Error for ParseError {}

/// Parse `text` as a Laurent polynomial in the given variables. The result has
/// rank `vars.len()`, with exponent coordinate `k` belonging to `vars[k]`.
pub fn parse_laurent(text: &str, vars: &[String]) -> Result<LaurentPoly, ParseError> {
    let mut p = Parser {
        bytes: text.as_bytes(),
        pos: 0,
        vars,
    };
    let poly = p.expr()?;
    p.skip_ws();
    if p.pos < p.bytes.len() {
        return Err(p.error("unexpected trailing input"));
    }
    Ok(poly)
}

struct Parser<'a> {
    bytes: &'a [u8],
    pos: usize,
    vars: &'a [String],
}

impl<'a> Parser<'a> {
    fn error(&self, message: &str) -> ParseError {
        ParseError {
            position: self.pos,
            message: message.to_string(),
        }
    }

    fn skip_ws(&mut self) {
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.bytes.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expr(&mut self) -> Result<LaurentPoly, ParseError> {
        let rank = self.vars.len();
        let mut poly = LaurentPoly::zero(rank);
        let mut negative = match self.peek() {
            Some(b'-') => {
                self.pos += 1;
                true
            }
            Some(b'+') => {
                self.pos += 1;
                false
            }
            _ => false,
        };
        loop {
            let (coeff, exponent) = self.term()?;
            let signed = if negative { -&coeff } else { coeff };
            poly.add_term(exponent, signed);
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    negative = false;
                }
                Some(b'-') => {
                    self.pos += 1;
                    negative = true;
                }
                _ => break,
            }
        }
        Ok(poly)
    }

    /// One product of factors, folded into a single coefficient and exponent.
    fn term(&mut self) -> Result<(GaussianRational, LatticeVector), ParseError> {
        let rank = self.vars.len();
        let mut coeff = GaussianRational::one();
        let mut exponent = LatticeVector::zero(rank);
        loop {
            let (c, e) = self.factor()?;
            coeff = &coeff * &c;
            exponent = exponent.add(&e);
            self.skip_ws();
            if self.eat(b'*') {
                continue;
            }
            if self.peek() == Some(b'/') {
                return Err(self.error(
                    "division is only allowed inside rational constants; \
                     use a negative exponent such as t1^-2",
                ));
            }
            break;
        }
        Ok((coeff, exponent))
    }

    fn factor(&mut self) -> Result<(GaussianRational, LatticeVector), ParseError> {
        let rank = self.vars.len();
        match self.peek() {
            None => Err(self.error("expected a coefficient or variable")),
            Some(b'(') => {
                self.pos += 1;
                let re = self.rational()?;
                let sign = match self.peek() {
                    Some(b'+') => {
                        self.pos += 1;
                        BigRational::one()
                    }
                    Some(b'-') => {
                        self.pos += 1;
                        -BigRational::one()
                    }
                    _ => return Err(self.error("expected '+' or '-' inside complex constant")),
                };
                let im_mag = self.rational()?;
                if !self.eat(b'i') {
                    return Err(self.error("expected 'i' before ')' in complex constant"));
                }
                if !self.eat(b')') {
                    return Err(self.error("expected ')' closing complex constant"));
                }
                Ok((
                    GaussianRational::new(re, sign * im_mag),
                    LatticeVector::zero(rank),
                ))
            }
            Some(c) if c == b'-' || c.is_ascii_digit() => {
                let value = self.rational()?;
                if self.eat(b'i') {
                    Ok((
                        GaussianRational::new(BigRational::zero(), value),
                        LatticeVector::zero(rank),
                    ))
                } else {
                    Ok((
                        GaussianRational::new(value, BigRational::zero()),
                        LatticeVector::zero(rank),
                    ))
                }
            }
            Some(c) if c.is_ascii_alphabetic() || c == b'_' => {
                let start = self.pos;
                let name = self.identifier();
                if name == "i" {
                    return Ok((GaussianRational::i(), LatticeVector::zero(rank)));
                }
                let Some(index) = self.vars.iter().position(|v| v == &name) else {
                    self.pos = start;
                    return Err(self.error(&format!("unknown variable '{}'", name)));
                };
                let mut exp = BigInt::one();
                if self.eat(b'^') {
                    exp = self.integer()?;
                }
                let mut coords = vec![BigInt::zero(); rank];
                coords[index] = exp;
                Ok((GaussianRational::one(), LatticeVector::new(coords)))
            }
            Some(c) => Err(self.error(&format!("unexpected character '{}'", c as char))),
        }
    }

    fn identifier(&mut self) -> String {
        let start = self.pos;
        while self.pos < self.bytes.len()
            && (self.bytes[self.pos].is_ascii_alphanumeric() || self.bytes[self.pos] == b'_')
        {
            self.pos += 1;
        }
        String::from_utf8_lossy(&self.bytes[start..self.pos]).into_owned()
    }

    fn rational(&mut self) -> Result<BigRational, ParseError> {
        let numerator = self.integer()?;
        if self.peek() == Some(b'/') {
            // Only consume the slash when a digit follows: a denominator is
            // an unsigned positive integer.
            let save = self.pos;
            self.pos += 1;
            match self.peek() {
                Some(c) if c.is_ascii_digit() => {
                    let denominator = self.integer()?;
                    if !denominator.is_positive() {
                        return Err(self.error("denominator must be positive"));
                    }
                    return Ok(BigRational::new(numerator, denominator));
                }
                _ => {
                    self.pos = save;
                }
            }
        }
        Ok(BigRational::from_integer(numerator))
    }

    fn integer(&mut self) -> Result<BigInt, ParseError> {
        self.skip_ws();
        let start = self.pos;
        if self.bytes.get(self.pos) == Some(&b'-') {
            self.pos += 1;
        }
        let digits_start = self.pos;
        while self.pos < self.bytes.len() && self.bytes[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if self.pos == digits_start {
            self.pos = start;
            return Err(self.error("expected an integer"));
        }
        let text = std::str::from_utf8(&self.bytes[start..self.pos]).unwrap();
        Ok(text.parse::<BigInt>().unwrap())
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::gaussian::GaussianRational;
    use crate::laurent::LatticeVector;

    fn vars(names: &[&str]) -> Vec<String> {
        names.iter().map(|s| s.to_string()).collect()
    }

    #[test]
    fn parses_running_example() {
        let v = vars(&["t1", "t2"]);
        let p = parse_laurent("t1*t2 - t1 - 1", &v).unwrap();
        assert_eq!(p.num_terms(), 3);
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[1, 1])),
            Some(&GaussianRational::one())
        );
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[1, 0])),
            Some(&GaussianRational::from_int(-1))
        );
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[0, 0])),
            Some(&GaussianRational::from_int(-1))
        );
    }

    #[test]
    fn parses_imaginary_monomial() {
        let v = vars(&["t1", "t2"]);
        let p = parse_laurent("i*t1*t2^-1", &v).unwrap();
        assert_eq!(p.num_terms(), 1);
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[1, -1])),
            Some(&GaussianRational::i())
        );
    }

    #[test]
    fn parses_complex_coefficients() {
        let v = vars(&["t1"]);
        let p = parse_laurent("(1/2-3/4i)*t1^2 + 2i - 5/7", &v).unwrap();
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[2])),
            Some(&GaussianRational::from_parts(1, 2, -3, 4))
        );
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[0])),
            Some(&GaussianRational::from_parts(-5, 7, 2, 1))
        );
    }

    #[test]
    fn parses_leading_sign_and_collects_terms() {
        let v = vars(&["t1"]);
        let p = parse_laurent("-t1 + 2*t1 - 1", &v).unwrap();
        assert_eq!(
            p.coeff(&LatticeVector::from_i64(&[1])),
            Some(&GaussianRational::one())
        );
        assert_eq!(p.num_terms(), 2);
        let zero = parse_laurent("t1 - t1", &v).unwrap();
        assert!(zero.is_zero());
        assert!(parse_laurent("0", &v).unwrap().is_zero());
    }

    #[test]
    fn rejects_unknown_variable_with_position() {
        let v = vars(&["t1"]);
        let err = parse_laurent("t1 + t2", &v).unwrap_err();
        assert_eq!(err.position, 5);
        assert!(err.message.contains("t2"));
    }

    #[test]
    fn rejects_division_by_variable() {
        let v = vars(&["t1", "t2"]);
        let err = parse_laurent("t1/t2", &v).unwrap_err();
        assert!(err.message.contains("negative exponent"));
        assert_eq!(err.position, 2);
    }

    #[test]
    fn rejects_malformed_input() {
        let v = vars(&["t1"]);
        assert!(parse_laurent("", &v).is_err());
        assert!(parse_laurent("t1^", &v).is_err());
        assert!(parse_laurent("1/0", &v).is_err());
        assert!(parse_laurent("(1+2)", &v).is_err());
        assert!(parse_laurent("t1 t1", &v).is_err());
        assert!(parse_laurent("2 + ", &v).is_err());
    }

    #[test]
    fn roundtrips_canonical_display() {
        let v = vars(&["t1", "t2", "t3"]);
        let texts = [
            "-1 - t1 + t1*t2",
            "(1/2-3/4i) + i*t1*t2^-1",
            "2/5i*t3^-2 - i*t2",
            "(-1+1i)*t1^3*t3",
        ];
        for text in texts {
            let p = parse_laurent(text, &v).unwrap();
            assert_eq!(p.to_string(), text, "canonical form should be stable");
            let q = parse_laurent(&p.to_string(), &v).unwrap();
            assert_eq!(p, q);
        }
    }
}
