//! Polynomial text grammar.
//!
//! ```text
//! poly     := term (('+' | '-') term)*
//! term     := factor ('*' factor)*
//! factor   := '-' factor | rational | var ('^' nat)?
//! rational := ['-'] int ('/' posint)?
//! var      := 'x' posint
//! ```
//!
//! This accepts everything the JSON payloads emit (`3/2*x1^2*x2 - x3`) plus
//! the obvious relaxations (implicit unit coefficient, unary and binary minus).

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::{Polynomial, Rational};
use crate::error::{Error, Result};

struct Cursor<'a> {
    src: &'a [u8],
    pos: usize,
}

impl<'a> Cursor<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, b: u8) -> bool {
        if self.peek() == Some(b) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn digits(&mut self) -> Result<&'a str> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(Error::parse(start, "expected digits"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).expect("ascii digits"))
    }
}

pub fn parse_rational(s: &str) -> Result<Rational> {
    let mut c = Cursor { src: s.as_bytes(), pos: 0 };
    let r = rational(&mut c)?;
    c.skip_ws();
    if c.pos != c.src.len() {
        return Err(Error::parse(c.pos, format!("trailing input in rational '{s}'")));
    }
    Ok(r)
}

fn rational(c: &mut Cursor<'_>) -> Result<Rational> {
    let neg = c.eat(b'-');
    let start = c.pos;
    let num: BigInt = c.digits()?.parse().map_err(|_| Error::parse(start, "bad integer"))?;
    let mut r = Rational::from_bigint(num);
    if c.eat(b'/') {
        let at = c.pos;
        let den: BigInt = c.digits()?.parse().map_err(|_| Error::parse(at, "bad integer"))?;
        if den.is_zero() {
            return Err(Error::parse(at, "zero denominator"));
        }
        r /= Rational::from_bigint(den);
    }
    Ok(if neg { -r } else { r })
}

pub fn parse_polynomial(s: &str, nvars: usize) -> Result<Polynomial> {
    let mut c = Cursor { src: s.as_bytes(), pos: 0 };
    let mut out = Polynomial::zero(nvars);
    let mut negate = false;
    loop {
        let t = term(&mut c, nvars)?;
        if negate {
            out -= &t;
        } else {
            out += &t;
        }
        if c.eat(b'+') {
            negate = false;
        } else if c.eat(b'-') {
            negate = true;
        } else {
            break;
        }
    }
    if c.peek().is_some() {
        return Err(Error::parse(c.pos, format!("unexpected character '{}'", c.src[c.pos] as char)));
    }
    Ok(out)
}

fn term(c: &mut Cursor<'_>, nvars: usize) -> Result<Polynomial> {
    let mut coeff = Rational::one();
    let mut exps = vec![0u32; nvars];
    loop {
        match c.peek() {
            Some(b'x') => {
                c.pos += 1;
                let at = c.pos;
                let idx: usize = c.digits()?.parse().map_err(|_| Error::parse(at, "bad variable index"))?;
                if idx == 0 || idx > nvars {
                    return Err(Error::parse(at, format!("variable x{idx} outside x1..x{nvars}")));
                }
                let k: u32 = if c.eat(b'^') {
                    let at = c.pos;
                    c.digits()?.parse().map_err(|_| Error::parse(at, "bad exponent"))?
                } else {
                    1
                };
                exps[idx - 1] += k;
            }
            Some(b'-') if !c.src.get(c.pos + 1).is_some_and(u8::is_ascii_digit) => {
                c.pos += 1;
                coeff = -coeff;
                continue;
            }
            Some(b'-') | Some(b'0'..=b'9') => coeff *= rational(c)?,
            Some(ch) => return Err(Error::parse(c.pos, format!("unexpected character '{}'", ch as char))),
            None => return Err(Error::parse(c.pos, "unexpected end of input")),
        }
        if !c.eat(b'*') {
            break;
        }
    }
    Ok(Polynomial::monomial(nvars, exps, coeff))
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ring::{frac, int};

    #[test]
    fn grammar_example() {
        let p = parse_polynomial("3/2*x1^2*x2 + -1*x3", 3).unwrap();
        assert_eq!(p.len(), 2);
        assert_eq!(p.derivative(2), Polynomial::constant(3, int(-1)));
        assert_eq!(p.eval_exact(&[int(1), int(2), int(0)]).unwrap(), int(3));
    }

    #[test]
    fn rationals() {
        assert_eq!(parse_rational("-3/6").unwrap(), frac(-1, 2));
        assert_eq!(parse_rational(" 4 ").unwrap(), int(4));
        assert!(parse_rational("1/0").is_err());
        assert!(parse_rational("1/").is_err());
        assert!(parse_rational("1.5").is_err());
    }

    #[test]
    fn rejects_bad_variables() {
        assert!(parse_polynomial("x0", 2).is_err());
        assert!(parse_polynomial("x3", 2).is_err());
        assert!(parse_polynomial("2*y1", 2).is_err());
        assert!(parse_polynomial("x1 +", 2).is_err());
    }

    #[test]
    fn binary_minus_and_zero() {
        assert_eq!(parse_polynomial("x1 - x1", 1).unwrap(), Polynomial::zero(1));
        assert_eq!(parse_polynomial("0", 2).unwrap(), Polynomial::zero(2));
        assert_eq!(parse_polynomial("-x1 + 2", 2).unwrap(), parse_polynomial("2 - x1", 2).unwrap());
        assert_eq!(parse_polynomial("x1*-x2", 2).unwrap(), parse_polynomial("-1*x1*x2", 2).unwrap());
    }
}
