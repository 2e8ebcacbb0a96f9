//! Normal-ordered quantum-plane polynomials.
//!
//! Monomials are stored as x^a y^b with a, b >= 0 and coefficients in ℚ(q);
//! reordering uses yx = qxy, so y^b x^a = q^{ab} x^a y^b. Zero coefficients
//! are pruned and equality is termwise.

use super::qrat::QRat;
use crate::error::{CalcError, Result};
use std::collections::BTreeMap;
use std::fmt;

#[derive(Clone, PartialEq, Default)]
pub struct QPoly {
    terms: BTreeMap<(u32, u32), QRat>,
}

impl QPoly {
    pub fn zero() -> Self {
        QPoly { terms: BTreeMap::new() }
    }

    pub fn one() -> Self {
        Self::monomial(0, 0, QRat::one())
    }

    pub fn x() -> Self {
        Self::monomial(1, 0, QRat::one())
    }

    pub fn y() -> Self {
        Self::monomial(0, 1, QRat::one())
    }

    pub fn constant(c: QRat) -> Self {
        Self::monomial(0, 0, c)
    }

    pub fn monomial(a: u32, b: u32, c: QRat) -> Self {
        let mut terms = BTreeMap::new();
        if !c.is_zero() {
            terms.insert((a, b), c);
        }
        QPoly { terms }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn terms(&self) -> impl Iterator<Item = (&(u32, u32), &QRat)> {
        self.terms.iter()
    }

    pub fn coeff(&self, a: u32, b: u32) -> QRat {
        self.terms.get(&(a, b)).cloned().unwrap_or_else(QRat::zero)
    }

    pub fn total_degree(&self) -> u32 {
        self.terms.keys().map(|(a, b)| a + b).max().unwrap_or(0)
    }

    /// True when the polynomial involves only the given generator.
    pub fn depends_only_on_y(&self) -> bool {
        self.terms.keys().all(|(a, _)| *a == 0)
    }

    pub fn depends_only_on_x(&self) -> bool {
        self.terms.keys().all(|(_, b)| *b == 0)
    }

    fn insert(&mut self, key: (u32, u32), c: QRat) {
        if c.is_zero() {
            return;
        }
        let cur = self.terms.remove(&key).unwrap_or_else(QRat::zero);
        let sum = cur.add(&c);
        if !sum.is_zero() {
            self.terms.insert(key, sum);
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (k, c) in &other.terms {
            out.insert(*k, c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        QPoly { terms: self.terms.iter().map(|(k, c)| (*k, c.neg())).collect() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn scale(&self, c: &QRat) -> Self {
        if c.is_zero() {
            return Self::zero();
        }
        QPoly { terms: self.terms.iter().map(|(k, v)| (*k, v.mul(c))).collect() }
    }

    /// Product with normal-ordering: y^{b1} x^{a2} = q^{a2·b1} x^{a2} y^{b1}.
    pub fn qmul(&self, other: &Self) -> Self {
        let mut out = Self::zero();
        for ((a1, b1), c1) in &self.terms {
            for ((a2, b2), c2) in &other.terms {
                let swap_power = (*a2 as i64) * (*b1 as i64);
                let coeff = c1.mul(c2).mul(&QRat::q_pow(swap_power));
                out.insert((a1 + a2, b1 + b2), coeff);
            }
        }
        out
    }

    /// Substitute q -> 1 and multiply out commutatively; used to cross-check
    /// the deformed product against the classical one.
    pub fn eval_q1_coeff(&self, a: u32, b: u32) -> (num_bigint::BigInt, num_bigint::BigInt) {
        self.coeff(a, b).eval_q1()
    }

    /// Parse the ASCII grammar, e.g. `(q^-2 - 1)*x^1*y^2 + 3*x^0*y^0`.
    /// `x`, `y`, `q` powers and integer coefficients multiply within a term;
    /// parenthesized subexpressions recurse; `/` divides by a pure-q factor.
    pub fn parse(input: &str) -> Result<Self> {
        let mut p = Parser { s: input.as_bytes(), pos: 0 };
        let poly = p.parse_sum()?;
        p.skip_ws();
        if p.pos != p.s.len() {
            return Err(CalcError::Parse(format!(
                "trailing input at byte {}: {:?}",
                p.pos,
                &input[p.pos..]
            )));
        }
        Ok(poly)
    }
}

struct Parser<'a> {
    s: &'a [u8],
    pos: usize,
}

impl<'a> Parser<'a> {
    fn skip_ws(&mut self) {
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_whitespace() {
            self.pos += 1;
        }
    }

    fn peek(&mut self) -> Option<u8> {
        self.skip_ws();
        self.s.get(self.pos).copied()
    }

    fn parse_sum(&mut self) -> Result<QPoly> {
        let mut acc = QPoly::zero();
        let mut sign = 1i64;
        if self.peek() == Some(b'-') {
            self.pos += 1;
            sign = -1;
        } else if self.peek() == Some(b'+') {
            self.pos += 1;
        }
        loop {
            let term = self.parse_term()?;
            acc = if sign > 0 { acc.add(&term) } else { acc.sub(&term) };
            match self.peek() {
                Some(b'+') => {
                    self.pos += 1;
                    sign = 1;
                }
                Some(b'-') => {
                    self.pos += 1;
                    sign = -1;
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_term(&mut self) -> Result<QPoly> {
        let mut acc = self.parse_factor()?;
        loop {
            match self.peek() {
                Some(b'*') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    acc = acc.qmul(&f);
                }
                Some(b'/') => {
                    self.pos += 1;
                    let f = self.parse_factor()?;
                    let c = f.coeff(0, 0);
                    if f.total_degree() != 0 || c.is_zero() {
                        return Err(CalcError::Parse(
                            "divisor must be a nonzero pure-q expression".into(),
                        ));
                    }
                    acc = acc.scale(&QRat::one().div(&c));
                }
                // juxtaposition of x/y/( counts as multiplication
                Some(b'x') | Some(b'y') | Some(b'q') | Some(b'(') => {
                    let f = self.parse_factor()?;
                    acc = acc.qmul(&f);
                }
                _ => break,
            }
        }
        Ok(acc)
    }

    fn parse_factor(&mut self) -> Result<QPoly> {
        match self.peek() {
            Some(b'(') => {
                self.pos += 1;
                let inner = self.parse_sum()?;
                if self.peek() != Some(b')') {
                    return Err(CalcError::Parse("expected ')'".into()));
                }
                self.pos += 1;
                Ok(self.apply_power_suffix(inner)?)
            }
            Some(b'x') => {
                self.pos += 1;
                let e = self.parse_power_exponent()?;
                if e < 0 {
                    return Err(CalcError::Parse("negative x power".into()));
                }
                Ok(QPoly::monomial(e as u32, 0, QRat::one()))
            }
            Some(b'y') => {
                self.pos += 1;
                let e = self.parse_power_exponent()?;
                if e < 0 {
                    return Err(CalcError::Parse("negative y power".into()));
                }
                Ok(QPoly::monomial(0, e as u32, QRat::one()))
            }
            Some(b'q') => {
                self.pos += 1;
                let e = self.parse_power_exponent()?;
                Ok(QPoly::constant(QRat::q_pow(e)))
            }
            Some(c) if c.is_ascii_digit() => {
                let n = self.parse_int()?;
                Ok(QPoly::constant(QRat::from_int(n)))
            }
            other => Err(CalcError::Parse(format!("unexpected token {other:?}"))),
        }
    }

    fn apply_power_suffix(&mut self, base: QPoly) -> Result<QPoly> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            let e = self.parse_int()?;
            if e < 0 {
                return Err(CalcError::Parse("negative power of a parenthesized expression".into()));
            }
            let mut acc = QPoly::one();
            for _ in 0..e {
                acc = acc.qmul(&base);
            }
            Ok(acc)
        } else {
            Ok(base)
        }
    }

    /// `^n` suffix or implicit power 1.
    fn parse_power_exponent(&mut self) -> Result<i64> {
        if self.peek() == Some(b'^') {
            self.pos += 1;
            self.parse_int()
        } else {
            Ok(1)
        }
    }

    fn parse_int(&mut self) -> Result<i64> {
        self.skip_ws();
        let start = self.pos;
        if self.s.get(self.pos) == Some(&b'-') || self.s.get(self.pos) == Some(&b'+') {
            self.pos += 1;
        }
        while self.pos < self.s.len() && self.s[self.pos].is_ascii_digit() {
            self.pos += 1;
        }
        std::str::from_utf8(&self.s[start..self.pos])
            .ok()
            .and_then(|t| t.parse::<i64>().ok())
            .ok_or_else(|| CalcError::Parse(format!("expected integer at byte {start}")))
    }
}

impl fmt::Display for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let mut first = true;
        for ((a, b), c) in &self.terms {
            if first {
                first = false;
            } else {
                write!(f, " + ")?;
            }
            write!(f, "{c}")?;
            if *a > 0 {
                write!(f, "*x^{a}")?;
            }
            if *b > 0 {
                write!(f, "*y^{b}")?;
            }
        }
        Ok(())
    }
}

impl fmt::Debug for QPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}
