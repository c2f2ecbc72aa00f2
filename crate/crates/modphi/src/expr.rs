//! Tiny expression language for custom cumulant generating functions:
//! sums of terms `c * z^a * exp(b z)` with rational `c`, integer `a ≥ 0`
//! and integer `b`.

use crate::error::{Error, Result};
use crate::scalar::Scalar;
use num_bigint::BigInt;
use num_complex::Complex;
use num_rational::BigRational;
use num_traits::{One, ToPrimitive, Zero};

#[derive(Clone, Debug, PartialEq)]
pub struct Monomial {
    pub coef: BigRational,
    pub power: u32,
    pub rate: i64,
}

#[derive(Clone, Debug, PartialEq)]
pub struct EtaExpr {
    pub terms: Vec<Monomial>,
}

struct Lexer<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Lexer<'a> {
    fn skip(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }
    fn peek(&mut self) -> Option<u8> {
        self.skip();
        self.s.get(self.pos).copied()
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
    fn err(&self, what: &str) -> Error {
        Error::Invalid(format!("eta expression, byte {}: {what}", self.pos))
    }
    fn keyword(&mut self, kw: &str) -> bool {
        self.skip();
        if self.s[self.pos..].starts_with(kw.as_bytes()) {
            self.pos += kw.len();
            true
        } else {
            false
        }
    }
    fn number(&mut self) -> Result<BigRational> {
        self.skip();
        let start = self.pos;
        while self.pos < self.s.len() && (self.s[self.pos].is_ascii_digit() || self.s[self.pos] == b'.') {
            self.pos += 1;
        }
        let txt = std::str::from_utf8(&self.s[start..self.pos]).unwrap();
        parse_decimal(txt).ok_or_else(|| self.err("malformed number"))
    }
    fn integer(&mut self) -> Result<i64> {
        let n = self.number()?;
        if !n.is_integer() {
            return Err(self.err("expected an integer"));
        }
        n.to_integer().to_i64().ok_or_else(|| self.err("integer overflow"))
    }
}

fn parse_decimal(txt: &str) -> Option<BigRational> {
    if txt.is_empty() {
        return None;
    }
    let (int, frac) = match txt.split_once('.') {
        Some((a, b)) => (a, b),
        None => (txt, ""),
    };
    if frac.contains('.') || (int.is_empty() && frac.is_empty()) {
        return None;
    }
    let digits = format!("{int}{frac}");
    let num: BigInt = digits.parse().ok()?;
    let den = BigInt::from(10u32).pow(frac.len() as u32);
    Some(BigRational::new(num, den))
}

impl EtaExpr {
    pub fn parse(src: &str) -> Result<Self> {
        let mut lx = Lexer { s: src.as_bytes(), pos: 0 };
        let mut terms: Vec<Monomial> = Vec::new();
        let mut sign = BigRational::one();
        if lx.eat(b'-') {
            sign = -sign;
        } else {
            lx.eat(b'+');
        }
        loop {
            let mut t = parse_term(&mut lx)?;
            t.coef *= &sign;
            push_term(&mut terms, t);
            match lx.peek() {
                None => break,
                Some(b'+') => {
                    lx.pos += 1;
                    sign = BigRational::one();
                }
                Some(b'-') => {
                    lx.pos += 1;
                    sign = -BigRational::one();
                }
                Some(_) => return Err(lx.err("unexpected character")),
            }
        }
        terms.retain(|t| !t.coef.is_zero());
        let e = EtaExpr { terms };
        let at0: BigRational = e.terms.iter().filter(|t| t.power == 0).map(|t| t.coef.clone()).sum();
        if !at0.is_zero() {
            return Err(Error::Invalid(format!("eta(0) must vanish, got {at0}")));
        }
        Ok(e)
    }

    pub fn eval<S: Scalar>(&self, z: Complex<S>) -> Complex<S> {
        let mut acc = Complex::new(S::zero(), S::zero());
        for t in &self.terms {
            let c = S::from_f64(t.coef.to_f64().unwrap()).unwrap();
            let e = (z * S::from_i64(t.rate).unwrap()).exp();
            acc = acc + z.powu(t.power) * e * c;
        }
        acc
    }

    /// The k-th derivative at a real point.
    pub fn derivative<S: Scalar>(&self, h: S, k: u32) -> S {
        let mut acc = S::zero();
        for t in &self.terms {
            let c = S::from_f64(t.coef.to_f64().unwrap()).unwrap();
            let b = S::from_i64(t.rate).unwrap();
            let e = (b * h).exp();
            // d^k (z^a e^{bz}) = Σ_j C(k,j) a↓j z^{a−j} b^{k−j} e^{bz}
            let mut s = S::zero();
            let mut binom = 1f64;
            let mut fall = 1f64;
            for j in 0..=k.min(t.power) {
                if j > 0 {
                    binom = binom * (k - j + 1) as f64 / j as f64;
                    fall *= (t.power - j + 1) as f64;
                }
                s = s + S::from_f64(binom * fall).unwrap() * h.powi((t.power - j) as i32) * b.powi((k - j) as i32);
            }
            acc = acc + c * s * e;
        }
        acc
    }
}

fn push_term(terms: &mut Vec<Monomial>, t: Monomial) {
    if let Some(x) = terms.iter_mut().find(|x| x.power == t.power && x.rate == t.rate) {
        x.coef += t.coef;
    } else {
        terms.push(t);
    }
}

fn parse_term(lx: &mut Lexer) -> Result<Monomial> {
    let mut m = Monomial { coef: BigRational::one(), power: 0, rate: 0 };
    parse_factor(lx, &mut m)?;
    loop {
        if lx.eat(b'*') {
            parse_factor(lx, &mut m)?;
        } else if lx.eat(b'/') {
            let d = lx.number()?;
            if d.is_zero() {
                return Err(lx.err("division by zero"));
            }
            m.coef /= d;
        } else {
            return Ok(m);
        }
    }
}

fn parse_factor(lx: &mut Lexer, m: &mut Monomial) -> Result<()> {
    match lx.peek() {
        Some(c) if c.is_ascii_digit() || c == b'.' => {
            m.coef *= lx.number()?;
            Ok(())
        }
        Some(b'z') => {
            lx.pos += 1;
            let p = if lx.eat(b'^') { lx.integer()? } else { 1 };
            if p < 0 {
                return Err(lx.err("negative power"));
            }
            m.power += p as u32;
            Ok(())
        }
        Some(b'e') => {
            if lx.keyword("exp(") {
                let mut b = 1i64;
                let neg = lx.eat(b'-');
                if matches!(lx.peek(), Some(c) if c.is_ascii_digit()) {
                    b = lx.integer()?;
                    lx.eat(b'*');
                }
                lx.expect(b'z')?;
                lx.expect(b')')?;
                m.rate += if neg { -b } else { b };
                Ok(())
            } else if lx.keyword("e^z") {
                m.rate += 1;
                Ok(())
            } else {
                Err(lx.err("unknown identifier"))
            }
        }
        Some(b'(') => Err(lx.err("parentheses are only allowed in exp(...)")),
        _ => Err(lx.err("expected a factor")),
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn parses_poisson_and_gaussian() {
        let p = EtaExpr::parse("2*exp(z) - 2").unwrap();
        assert_eq!(p.terms.len(), 2);
        assert!((p.derivative(0.0f64, 1) - 2.0).abs() < 1e-15);
        let g = EtaExpr::parse("z^2/2 + 0.5*z").unwrap();
        assert!((g.derivative(1.0f64, 1) - 1.5).abs() < 1e-15);
        assert!((g.derivative(1.0f64, 2) - 1.0).abs() < 1e-15);
        assert_eq!(g.derivative(1.0f64, 3), 0.0);
    }

    #[test]
    fn rejects_nonzero_constant() {
        assert!(EtaExpr::parse("exp(z)").is_err());
        assert!(EtaExpr::parse("z + (2)").is_err());
    }

    #[test]
    fn mixed_term_derivative() {
        // z e^{2z}: third derivative is (8z + 12) e^{2z}
        let e = EtaExpr::parse("z*exp(2z)").unwrap();
        let h = 0.3f64;
        assert!((e.derivative(h, 3) - (8.0 * h + 12.0) * (2.0 * h).exp()).abs() < 1e-12);
    }
}
