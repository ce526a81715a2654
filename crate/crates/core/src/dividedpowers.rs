//! The truncated divided-power algebra O(2;(1,1)) = k[X,Y]/(X^p, Y^p).
//!
//! Basis monomials are `x^(a) y^(b)` with `0 <= a, b < p` and product rule
//! `x^(a) x^(b) = C(a+b, a) x^(a+b)`, which vanishes once `a + b >= p`.

use std::collections::BTreeMap;
use std::fmt;

use crate::cartan::Derivation;
use crate::primefield::Fp;

/// Binomial coefficient `C(n, k) mod p` by Lucas' theorem.
pub fn binom_mod(n: u64, k: u64, p: u32) -> u32 {
    if k > n {
        return 0;
    }
    let p64 = p as u64;
    let (mut n, mut k) = (n, k);
    let mut acc: u64 = 1;
    while n > 0 || k > 0 {
        let (nd, kd) = (n % p64, k % p64);
        if kd > nd {
            return 0;
        }
        acc = acc * small_binom(nd, kd, p64) % p64;
        n /= p64;
        k /= p64;
    }
    acc as u32
}

// Digits are below p, so the multiplicative formula never divides by p.
fn small_binom(n: u64, k: u64, p: u64) -> u64 {
    let mut num = 1u64;
    let mut den = 1u64;
    for i in 0..k {
        num = num * ((n - i) % p) % p;
        den = den * ((i + 1) % p) % p;
    }
    let field = Fp::new(p as u32).expect("prime modulus");
    num * field.inv(den as u32).expect("invertible") as u64 % p
}

/// Exponent pair of a divided-power monomial.
#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub struct DPMonomial {
    pub a: u32,
    pub b: u32,
}

impl DPMonomial {
    pub fn new(a: u32, b: u32) -> Self {
        DPMonomial { a, b }
    }

    /// Grading degree `a + b`.
    pub fn degree(self) -> u32 {
        self.a + self.b
    }
}

impl fmt::Display for DPMonomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.a, self.b) {
            (0, 0) => write!(f, "1"),
            (a, 0) => write!(f, "x^({a})"),
            (0, b) => write!(f, "y^({b})"),
            (a, b) => write!(f, "x^({a})y^({b})"),
        }
    }
}

/// Element of O(2;(1,1)), stored sparsely without zero coefficients.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct DPElement {
    p: u32,
    terms: BTreeMap<DPMonomial, u32>,
}

impl DPElement {
    pub fn zero(p: u32) -> Self {
        DPElement {
            p,
            terms: BTreeMap::new(),
        }
    }

    pub fn one(p: u32) -> Self {
        Self::monomial(p, 0, 0, 1)
    }

    /// `c * x^(a) y^(b)`; exponents at or above p give zero.
    pub fn monomial(p: u32, a: u32, b: u32, c: i64) -> Self {
        let mut e = Self::zero(p);
        if a < p && b < p {
            e.add_term(DPMonomial::new(a, b), Fp::new(p).expect("prime").from_i64(c));
        }
        e
    }

    pub fn p(&self) -> u32 {
        self.p
    }

    fn field(&self) -> Fp {
        Fp::new(self.p).expect("prime modulus")
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, a: u32, b: u32) -> u32 {
        self.terms.get(&DPMonomial::new(a, b)).copied().unwrap_or(0)
    }

    pub fn terms(&self) -> impl Iterator<Item = (DPMonomial, u32)> + '_ {
        self.terms.iter().map(|(m, c)| (*m, *c))
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    /// Adds `c * m` in place, dropping the entry if it cancels.
    pub fn add_term(&mut self, m: DPMonomial, c: u32) {
        if c == 0 {
            return;
        }
        let f = self.field();
        let slot = self.terms.entry(m).or_insert(0);
        *slot = f.add(*slot, c);
        if *slot == 0 {
            self.terms.remove(&m);
        }
    }

    pub fn add(&self, other: &DPElement) -> DPElement {
        let mut out = self.clone();
        for (m, c) in other.terms() {
            out.add_term(m, c);
        }
        out
    }

    pub fn sub(&self, other: &DPElement) -> DPElement {
        self.add(&other.scale(self.p - 1))
    }

    pub fn scale(&self, c: u32) -> DPElement {
        let f = self.field();
        let mut out = Self::zero(self.p);
        for (m, v) in self.terms() {
            out.add_term(m, f.mul(v, c));
        }
        out
    }

    /// Lowest grading degree among the terms, `None` for zero.
    pub fn min_degree(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.degree()).min()
    }

    /// `d/dx`: lowers the x divided power by one.
    pub fn partial_x(&self) -> DPElement {
        let mut out = Self::zero(self.p);
        for (m, c) in self.terms() {
            if m.a > 0 {
                out.add_term(DPMonomial::new(m.a - 1, m.b), c);
            }
        }
        out
    }

    /// `d/dy`: lowers the y divided power by one.
    pub fn partial_y(&self) -> DPElement {
        let mut out = Self::zero(self.p);
        for (m, c) in self.terms() {
            if m.b > 0 {
                out.add_term(DPMonomial::new(m.a, m.b - 1), c);
            }
        }
        out
    }

    /// Coefficient vector in the monomial order `a * p + b`.
    pub fn to_dense(&self) -> Vec<u32> {
        let p = self.p as usize;
        let mut v = vec![0; p * p];
        for (m, c) in self.terms() {
            v[m.a as usize * p + m.b as usize] = c;
        }
        v
    }

    pub fn from_dense(p: u32, v: &[u32]) -> DPElement {
        let pu = p as usize;
        assert_eq!(v.len(), pu * pu);
        let mut out = Self::zero(p);
        for (i, &c) in v.iter().enumerate() {
            out.add_term(DPMonomial::new((i / pu) as u32, (i % pu) as u32), c % p);
        }
        out
    }
}

impl fmt::Display for DPElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return write!(f, "0");
        }
        let field = self.field();
        for (i, (m, c)) in self.terms().enumerate() {
            let s = field.signed(c);
            let sign = if s < 0 { "-" } else { "+" };
            if i == 0 {
                if s < 0 {
                    write!(f, "-")?;
                }
            } else {
                write!(f, " {sign} ")?;
            }
            let mag = s.unsigned_abs();
            match (mag, m.a + m.b) {
                (1, _) => write!(f, "{m}")?,
                (_, 0) => write!(f, "{mag}")?,
                _ => write!(f, "{mag}{m}")?,
            }
        }
        Ok(())
    }
}

/// Product in O(2;(1,1)).
pub fn dp_mul(u: &DPElement, v: &DPElement) -> DPElement {
    assert_eq!(u.p, v.p, "mixed moduli");
    let p = u.p;
    let f = u.field();
    let mut out = DPElement::zero(p);
    for (m1, c1) in u.terms() {
        for (m2, c2) in v.terms() {
            let (a, b) = (m1.a + m2.a, m1.b + m2.b);
            if a >= p || b >= p {
                continue;
            }
            let w = f.mul(
                binom_mod(a as u64, m1.a as u64, p),
                binom_mod(b as u64, m1.b as u64, p),
            );
            out.add_term(DPMonomial::new(a, b), f.mul(w, f.mul(c1, c2)));
        }
    }
    out
}

/// Applies `f d/dx + g d/dy` to an element of O(2;(1,1)).
pub fn apply_derivation(d: &Derivation, u: &DPElement) -> DPElement {
    dp_mul(&d.fx, &u.partial_x()).add(&dp_mul(&d.fy, &u.partial_y()))
}

#[cfg(test)]
mod tests {
    use super::*;

    /// Plain integer binomial, used as an oracle for the Lucas computation.
    fn int_binom(n: u64, k: u64) -> u64 {
        if k > n {
            return 0;
        }
        (0..k).fold(1u64, |acc, i| acc * (n - i) / (i + 1))
    }

    #[test]
    fn lucas_agrees_with_integer_binomials() {
        for p in [5u32, 7, 11] {
            for n in 0..40u64 {
                for k in 0..=n {
                    assert_eq!(
                        binom_mod(n, k, p) as u64,
                        int_binom(n, k) % p as u64,
                        "C({n},{k}) mod {p}"
                    );
                }
            }
        }
    }

    #[test]
    fn products_of_powers_of_x() {
        let x = DPElement::monomial(5, 1, 0, 1);
        assert_eq!(dp_mul(&x, &x), DPElement::monomial(5, 2, 0, 2));
        let x3 = DPElement::monomial(5, 3, 0, 1);
        assert!(dp_mul(&x3, &x3).is_zero());
    }

    #[test]
    fn mixed_product_at_seven() {
        let u = DPElement::monomial(7, 2, 1, 1);
        let v = DPElement::monomial(7, 1, 2, 1);
        let expected = (int_binom(3, 2) * int_binom(3, 1) % 7) as i64;
        assert_eq!(expected, 2);
        assert_eq!(dp_mul(&u, &v), DPElement::monomial(7, 3, 3, expected));
    }

    #[test]
    fn partials_lower_exponents() {
        let p = 7;
        for a in 0..p {
            for b in 0..p {
                let m = DPElement::monomial(p, a, b, 1);
                let dx = Derivation::dx(p);
                let expect = if a == 0 {
                    DPElement::zero(p)
                } else {
                    DPElement::monomial(p, a - 1, b, 1)
                };
                assert_eq!(apply_derivation(&dx, &m), expect);
            }
        }
        assert!(apply_derivation(&Derivation::dy(7), &DPElement::monomial(7, 2, 0, 1)).is_zero());
    }

    #[test]
    fn x_dy_on_y2() {
        // (x d/dy) y^(2) = x * y^(1) = x^(1)y^(1).
        let d = Derivation::term_y(7, 1, 0, 1);
        let y2 = DPElement::monomial(7, 0, 2, 1);
        assert_eq!(apply_derivation(&d, &y2), DPElement::monomial(7, 1, 1, 1));
    }

    #[test]
    fn rendering() {
        let e = DPElement::monomial(5, 1, 2, 1).add(&DPElement::monomial(5, 0, 0, -2));
        assert_eq!(e.to_string(), "-2 + x^(1)y^(2)");
    }
}
