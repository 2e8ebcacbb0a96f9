//! Exact rational functions in the deformation parameter q.
//!
//! A value is q^low · num(q)/den(q) with integer-coefficient polynomials,
//! kept in canonical form: num has a nonzero constant term (or is zero),
//! den has a nonzero constant term and positive leading coefficient, and
//! gcd(num, den) = 1. Exactness matters: the q-plane identities distinguish
//! q⁻¹ from q⁻² dressings that any floating q would blur.

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};
use std::fmt;

type Poly = Vec<BigInt>;

fn poly_trim(p: &mut Poly) {
    while p.last().map(|c| c.is_zero()).unwrap_or(false) {
        p.pop();
    }
}

fn poly_is_zero(p: &Poly) -> bool {
    p.is_empty()
}

fn poly_add(a: &Poly, b: &Poly) -> Poly {
    let mut out = vec![BigInt::zero(); a.len().max(b.len())];
    for (i, c) in a.iter().enumerate() {
        out[i] += c;
    }
    for (i, c) in b.iter().enumerate() {
        out[i] += c;
    }
    poly_trim(&mut out);
    out
}

fn poly_neg(a: &Poly) -> Poly {
    a.iter().map(|c| -c).collect()
}

fn poly_mul(a: &Poly, b: &Poly) -> Poly {
    if poly_is_zero(a) || poly_is_zero(b) {
        return Vec::new();
    }
    let mut out = vec![BigInt::zero(); a.len() + b.len() - 1];
    for (i, ca) in a.iter().enumerate() {
        if ca.is_zero() {
            continue;
        }
        for (j, cb) in b.iter().enumerate() {
            out[i + j] += ca * cb;
        }
    }
    poly_trim(&mut out);
    out
}

fn big_gcd(a: &BigInt, b: &BigInt) -> BigInt {
    let mut x = a.abs();
    let mut y = b.abs();
    while !y.is_zero() {
        let r = &x % &y;
        x = y;
        y = r;
    }
    x
}

fn poly_content(p: &Poly) -> BigInt {
    let mut g = BigInt::zero();
    for c in p {
        g = big_gcd(&g, c);
        if g.is_one() {
            break;
        }
    }
    g
}

fn poly_scale_div(p: &Poly, d: &BigInt) -> Poly {
    p.iter().map(|c| c / d).collect()
}

/// Pseudo-remainder of a by b (b nonzero, deg a >= deg b).
fn poly_pseudo_rem(a: &Poly, b: &Poly) -> Poly {
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap().clone();
    while !poly_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        // r = lb*r - lr*q^(dr-db)*b
        let mut nr = vec![BigInt::zero(); r.len()];
        for (i, c) in r.iter().enumerate() {
            nr[i] = &lb * c;
        }
        for (j, c) in b.iter().enumerate() {
            nr[dr - db + j] -= &lr * c;
        }
        poly_trim(&mut nr);
        // the leading term cancels exactly, so the degree strictly drops
        debug_assert!(nr.len() < r.len());
        r = nr;
    }
    r
}

fn poly_primitive(p: &Poly) -> Poly {
    if poly_is_zero(p) {
        return Vec::new();
    }
    let c = poly_content(p);
    let mut out = poly_scale_div(p, &c);
    if out.last().unwrap().is_negative() {
        out = poly_neg(&out);
    }
    out
}

fn poly_gcd(a: &Poly, b: &Poly) -> Poly {
    if poly_is_zero(a) {
        return poly_primitive(b);
    }
    if poly_is_zero(b) {
        return poly_primitive(a);
    }
    let ca = poly_content(a);
    let cb = poly_content(b);
    let cg = big_gcd(&ca, &cb);
    let mut x = poly_primitive(a);
    let mut y = poly_primitive(b);
    if x.len() < y.len() {
        std::mem::swap(&mut x, &mut y);
    }
    while !poly_is_zero(&y) {
        let r = poly_pseudo_rem(&x, &y);
        x = y;
        y = poly_primitive(&r);
        if x.len() < y.len() {
            std::mem::swap(&mut x, &mut y);
        }
    }
    let mut g = x;
    if !g.is_empty() {
        g = g.iter().map(|c| c * &cg).collect();
    }
    poly_trim(&mut g);
    g
}

/// Exact division a / b (panics if not divisible; only used after gcd).
fn poly_exact_div(a: &Poly, b: &Poly) -> Poly {
    if poly_is_zero(a) {
        return Vec::new();
    }
    assert!(!poly_is_zero(b), "division by zero polynomial");
    let mut r = a.clone();
    let db = b.len() - 1;
    let lb = b.last().unwrap();
    let mut q = vec![BigInt::zero(); a.len() - b.len() + 1];
    while !poly_is_zero(&r) && r.len() - 1 >= db {
        let dr = r.len() - 1;
        let lr = r.last().unwrap().clone();
        let c = &lr / lb;
        assert_eq!(&c * lb, lr, "non-exact polynomial division");
        q[dr - db] = c.clone();
        for (j, bc) in b.iter().enumerate() {
            let t = &c * bc;
            r[dr - db + j] -= t;
        }
        poly_trim(&mut r);
    }
    assert!(poly_is_zero(&r), "non-exact polynomial division (remainder)");
    q
}

/// q^low · num/den, canonical.
#[derive(Clone, PartialEq, Eq)]
pub struct QRat {
    low: i64,
    num: Poly,
    den: Poly,
}

impl QRat {
    pub fn zero() -> Self {
        QRat { low: 0, num: Vec::new(), den: vec![BigInt::one()] }
    }

    pub fn one() -> Self {
        QRat { low: 0, num: vec![BigInt::one()], den: vec![BigInt::one()] }
    }

    pub fn from_int(n: i64) -> Self {
        if n == 0 {
            return Self::zero();
        }
        QRat { low: 0, num: vec![BigInt::from(n)], den: vec![BigInt::one()] }
    }

    /// q^k
    pub fn q_pow(k: i64) -> Self {
        QRat { low: k, num: vec![BigInt::one()], den: vec![BigInt::one()] }
    }

    pub fn is_zero(&self) -> bool {
        self.num.is_empty()
    }

    pub fn is_one(&self) -> bool {
        self.low == 0 && self.num == vec![BigInt::one()] && self.den == vec![BigInt::one()]
    }

    fn normalize(mut self) -> Self {
        if poly_is_zero(&self.num) {
            return Self::zero();
        }
        // strip low-order zeros of num into the q-power
        let shift = self.num.iter().take_while(|c| c.is_zero()).count();
        if shift > 0 {
            self.num.drain(..shift);
            self.low += shift as i64;
        }
        let dshift = self.den.iter().take_while(|c| c.is_zero()).count();
        if dshift > 0 {
            self.den.drain(..dshift);
            self.low -= dshift as i64;
        }
        let g = poly_gcd(&self.num, &self.den);
        if !(g.len() == 1 && g[0].is_one()) {
            self.num = poly_exact_div(&self.num, &g);
            self.den = poly_exact_div(&self.den, &g);
        }
        if self.den.last().unwrap().is_negative() {
            self.num = poly_neg(&self.num);
            self.den = poly_neg(&self.den);
        }
        self
    }

    pub fn add(&self, other: &Self) -> Self {
        if self.is_zero() {
            return other.clone();
        }
        if other.is_zero() {
            return self.clone();
        }
        let low = self.low.min(other.low);
        let mut a = poly_mul(&self.num, &other.den);
        let mut b = poly_mul(&other.num, &self.den);
        let sa = (self.low - low) as usize;
        let sb = (other.low - low) as usize;
        if sa > 0 {
            let mut shifted = vec![BigInt::zero(); sa];
            shifted.extend(a);
            a = shifted;
        }
        if sb > 0 {
            let mut shifted = vec![BigInt::zero(); sb];
            shifted.extend(b);
            b = shifted;
        }
        QRat { low, num: poly_add(&a, &b), den: poly_mul(&self.den, &other.den) }.normalize()
    }

    pub fn neg(&self) -> Self {
        QRat { low: self.low, num: poly_neg(&self.num), den: self.den.clone() }
    }

    pub fn sub(&self, other: &Self) -> Self {
        self.add(&other.neg())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        QRat {
            low: self.low + other.low,
            num: poly_mul(&self.num, &other.num),
            den: poly_mul(&self.den, &other.den),
        }
        .normalize()
    }

    pub fn div(&self, other: &Self) -> Self {
        assert!(!other.is_zero(), "division by zero QRat");
        if self.is_zero() {
            return Self::zero();
        }
        QRat {
            low: self.low - other.low,
            num: poly_mul(&self.num, &other.den),
            den: poly_mul(&self.den, &other.num),
        }
        .normalize()
    }

    /// Exact value at q = 1 as a reduced integer fraction.
    pub fn eval_q1(&self) -> (BigInt, BigInt) {
        let n: BigInt = self.num.iter().sum();
        let d: BigInt = self.den.iter().sum();
        assert!(!d.is_zero(), "denominator vanishes at q=1");
        let g = big_gcd(&n, &d);
        if g.is_zero() {
            (n, d)
        } else {
            (&n / &g, &d / &g)
        }
    }

    /// Numeric value at a given q (for diagnostics only).
    pub fn eval_f64(&self, q: f64) -> f64 {
        let horner = |p: &Poly| -> f64 {
            let mut acc = 0.0;
            for c in p.iter().rev() {
                let cf = c.to_string().parse::<f64>().unwrap_or(f64::NAN);
                acc = acc * q + cf;
            }
            acc
        };
        q.powi(self.low as i32) * horner(&self.num) / horner(&self.den)
    }
}

impl fmt::Display for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return write!(f, "0");
        }
        let render_num = |f: &mut fmt::Formatter<'_>, low: i64, p: &Poly| -> fmt::Result {
            let mut first = true;
            for (i, c) in p.iter().enumerate() {
                if c.is_zero() {
                    continue;
                }
                let e = low + i as i64;
                let mag = c.abs();
                if first {
                    if c.is_negative() {
                        write!(f, "-")?;
                    }
                    first = false;
                } else if c.is_negative() {
                    write!(f, " - ")?;
                } else {
                    write!(f, " + ")?;
                }
                if e == 0 {
                    write!(f, "{mag}")?;
                } else if mag.is_one() {
                    write!(f, "q^{e}")?;
                } else {
                    write!(f, "{mag}*q^{e}")?;
                }
            }
            Ok(())
        };
        let den_is_one = self.den.len() == 1 && self.den[0].is_one();
        let simple = self.num.iter().filter(|c| !c.is_zero()).count() == 1;
        if den_is_one {
            if simple {
                render_num(f, self.low, &self.num)
            } else {
                write!(f, "(")?;
                render_num(f, self.low, &self.num)?;
                write!(f, ")")
            }
        } else {
            write!(f, "(")?;
            render_num(f, self.low, &self.num)?;
            write!(f, ")/(")?;
            render_num(f, 0, &self.den)?;
            write!(f, ")")
        }
    }
}

impl fmt::Debug for QRat {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        fmt::Display::fmt(self, f)
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    #[test]
    fn arithmetic_and_cancellation() {
        let a = QRat::q_pow(-2).sub(&QRat::one()); // q^-2 - 1
        let b = QRat::q_pow(2);
        let prod = a.mul(&b); // 1 - q^2
        assert_eq!(prod, QRat::one().sub(&QRat::q_pow(2)));
        // (q^2 - 1)/(q - 1) = q + 1
        let n = QRat::q_pow(2).sub(&QRat::one());
        let d = QRat::q_pow(1).sub(&QRat::one());
        let r = n.div(&d);
        assert_eq!(r, QRat::q_pow(1).add(&QRat::one()));
    }

    #[test]
    fn q1_specialization() {
        let a = QRat::q_pow(3).add(&QRat::from_int(2)); // q^3 + 2 -> 3
        let (n, d) = a.eval_q1();
        assert_eq!(n, BigInt::from(3));
        assert_eq!(d, BigInt::from(1));
    }

    #[test]
    fn display_roundtrip_simple() {
        let a = QRat::q_pow(-2).sub(&QRat::one());
        assert_eq!(format!("{a}"), "(q^-2 - 1)");
        assert_eq!(format!("{}", QRat::from_int(-3)), "-3");
        assert_eq!(format!("{}", QRat::q_pow(1)), "q^1");
    }

    #[test]
    fn gcd_reduction_is_canonical() {
        // (q^4 - 1)/(q^2 - 1) == q^2 + 1
        let n = QRat::q_pow(4).sub(&QRat::one());
        let d = QRat::q_pow(2).sub(&QRat::one());
        let r = n.div(&d);
        assert_eq!(r, QRat::q_pow(2).add(&QRat::one()));
    }
}
