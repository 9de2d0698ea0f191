//! Text syntax for coordinate-algebra elements.
//!
//! ```text
//! expr  := term (('+' | '-') term)*
//! term  := unary (('*' unary) | ('/' int))*
//! unary := '-' unary | power
//! power := atom ('^' int)?
//! atom  := int | 'i' | 'L' | 'M' | gen | '(' expr ')' | '[' expr ',' expr ']' | 'star' '(' expr ')'
//! gen   := 'tau' | 'a' idx | 'v' idx | 'R' idx idx
//! idx   := digit | '[' digit (',' digit)? ']'
//! ```
//! `L` is the deformation parameter λ and `M` the mass symbol.

use num_bigint::BigInt;
use num_rational::BigRational;

use super::{gen, GroupGen, NCElement, Truncation};
use crate::error::{Error, Result};
use crate::scalars::{ExactComplex as C, GradedScalar as G};

struct Parser<'a> {
    src: &'a [u8],
    pos: usize,
    trunc: Truncation,
}

pub fn parse_element(src: &str, trunc: Truncation) -> Result<NCElement> {
    let mut p = Parser { src: src.as_bytes(), pos: 0, trunc };
    let e = p.expr()?;
    p.skip_ws();
    if p.pos != p.src.len() {
        return Err(p.err("trailing input"));
    }
    Ok(e)
}

impl Parser<'_> {
    fn err(&self, msg: &str) -> Error {
        Error::Parse(format!("{msg} at byte {} of {:?}", self.pos, String::from_utf8_lossy(self.src)))
    }

    fn skip_ws(&mut self) {
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.src.get(self.pos).copied()
    }

    fn eat(&mut self, c: u8) -> bool {
        if self.peek() == Some(c) {
            self.pos += 1;
            true
        } else {
            false
        }
    }

    fn expect(&mut self, c: u8) -> Result<()> {
        if self.eat(c) {
            Ok(())
        } else {
            Err(self.err(&format!("expected '{}'", c as char)))
        }
    }

    fn int(&mut self) -> Result<BigInt> {
        self.skip_ws();
        let start = self.pos;
        while self.pos < self.src.len() && self.src[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        if start == self.pos {
            return Err(self.err("expected an integer"));
        }
        Ok(std::str::from_utf8(&self.src[start..self.pos]).unwrap().parse().unwrap())
    }

    fn small(&mut self) -> Result<u32> {
        let n = self.int()?;
        u32::try_from(n).map_err(|_| self.err("exponent out of range"))
    }

    fn scalar(&self, c: G) -> NCElement {
        NCElement::scalar(1, self.trunc, c)
    }

    fn expr(&mut self) -> Result<NCElement> {
        let mut acc = self.term()?;
        loop {
            if self.eat(b'+') {
                acc = acc.try_add(&self.term()?)?;
            } else if self.eat(b'-') {
                acc = acc.try_sub(&self.term()?)?;
            } else {
                return Ok(acc);
            }
        }
    }

    fn term(&mut self) -> Result<NCElement> {
        let mut acc = self.unary()?;
        loop {
            if self.eat(b'*') {
                acc = acc.try_mul(&self.unary()?)?;
            } else if self.eat(b'/') {
                let d = self.int()?;
                if d == BigInt::from(0) {
                    return Err(self.err("division by zero"));
                }
                acc = acc.scale_q(&BigRational::new(1.into(), d));
            } else {
                return Ok(acc);
            }
        }
    }

    fn unary(&mut self) -> Result<NCElement> {
        if self.eat(b'-') {
            return Ok(self.unary()?.neg());
        }
        let base = self.atom()?;
        if self.eat(b'^') {
            let n = self.small()?;
            let mut out = NCElement::one(1, self.trunc);
            for _ in 0..n {
                out = out.try_mul(&base)?;
            }
            return Ok(out);
        }
        Ok(base)
    }

    fn index(&mut self, count: usize) -> Result<Vec<u8>> {
        let bracket = self.src.get(self.pos) == Some(&b'[');
        if bracket {
            self.pos += 1;
        }
        let mut out = Vec::with_capacity(count);
        for k in 0..count {
            if bracket && k > 0 {
                self.expect(b',')?;
            }
            if bracket {
                self.skip_ws();
            }
            match self.src.get(self.pos) {
                Some(d @ b'1'..=b'3') => {
                    out.push(d - b'0');
                    self.pos += 1;
                }
                _ => return Err(self.err("expected an index 1, 2 or 3")),
            }
        }
        if bracket {
            self.expect(b']')?;
        }
        Ok(out)
    }

    fn atom(&mut self) -> Result<NCElement> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let e = self.expr()?;
                self.expect(b')')?;
                Ok(e)
            }
            Some(b'[') => {
                self.pos += 1;
                let x = self.expr()?;
                self.expect(b',')?;
                let y = self.expr()?;
                self.expect(b']')?;
                x.commutator(&y)
            }
            Some(b'0'..=b'9') => {
                let n = self.int()?;
                Ok(self.scalar(G::constant(C::real(BigRational::from_integer(n)))))
            }
            Some(c) if c.is_ascii_alphabetic() => {
                let rest = &self.src[self.pos..];
                if rest.starts_with(b"tau") {
                    self.pos += 3;
                    return Ok(gen(self.trunc, GroupGen::Tau));
                }
                if rest.starts_with(b"star") {
                    self.pos += 4;
                    self.expect(b'(')?;
                    let e = self.expr()?;
                    self.expect(b')')?;
                    return Ok(e.star());
                }
                self.pos += 1;
                match c {
                    b'i' => Ok(self.scalar(G::constant(C::i()))),
                    b'L' => Ok(self.scalar(G::lambda())),
                    b'M' => Ok(self.scalar(G::mass())),
                    b'a' => Ok(gen(self.trunc, GroupGen::A(self.index(1)?[0]))),
                    b'v' => Ok(gen(self.trunc, GroupGen::V(self.index(1)?[0]))),
                    b'R' => {
                        let ij = self.index(2)?;
                        Ok(gen(self.trunc, GroupGen::R(ij[0], ij[1])))
                    }
                    _ => {
                        self.pos -= 1;
                        Err(self.err("unknown symbol"))
                    }
                }
            }
            _ => Err(self.err("expected an operand")),
        }
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::ncpoly::i_lambda;
    use GroupGen::*;

    const T: Truncation = Truncation { n: 2, d: Some(4) };

    #[test]
    fn generators_and_brackets() {
        assert_eq!(parse_element("tau", T).unwrap(), gen(T, Tau));
        assert_eq!(parse_element("R[1,2]", T).unwrap(), parse_element("R12", T).unwrap());
        let br = parse_element("[tau, a1]", T).unwrap();
        assert_eq!(br, gen(T, A(1)).scale(&i_lambda()));
        let same = parse_element("i*L*a[1]", T).unwrap();
        assert_eq!(br, same);
    }

    #[test]
    fn arithmetic() {
        let e = parse_element("(v1 + v2)^2 - v1^2 - 2*v1*v2 - v2^2", T).unwrap();
        assert!(e.is_zero());
        let h = parse_element("M*v1^2/2", T).unwrap();
        assert_eq!(h.len(), 1);
        assert!(parse_element("star(i) + i", T).unwrap().is_zero());
    }

    #[test]
    fn errors() {
        for bad in ["", "a4", "x", "(a1", "a1 +", "1/0", "[a1 a2]", "a1 a2"] {
            assert!(parse_element(bad, T).is_err(), "{bad}");
        }
    }
}
