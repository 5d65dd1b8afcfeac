//! Quadratic surds `a + b*sqrt(d)` and finite sums of surds with distinct
//! square-free radicands.
//!
//! `QuadSurd` is the single-radicand form used for closed-form integral
//! constants. `SurdSum` generalizes to several radicands at once; it is
//! closed under ring operations because `sqrt(d1)*sqrt(d2) = g*sqrt(a*b)`
//! where `g = gcd(d1, d2)` and `a*b` is again square-free. Since the set
//! `{sqrt(d) : d square-free}` is linearly independent over the rationals,
//! a `SurdSum` is zero exactly when every stored coefficient is zero, which
//! gives an exact zero test for all algebraic values this crate constructs.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{Signed, ToPrimitive, Zero};

use super::{NumError, Rational};

/// Trial-division budget for square-free reduction. Radicands whose
/// unreduced part exceeds the reachable range are rejected rather than
/// left in a possibly non-square-free state.
const SQUAREFREE_TRIAL_LIMIT: u64 = 1 << 20;

/// Splits `n >= 0` as `s^2 * d` with `d` square-free; returns `(s, d)`.
pub(crate) fn squarefree_decompose(n: &BigInt) -> Result<(BigInt, u64), NumError> {
    if n.is_negative() {
        return Err(NumError::NegativeRadicand);
    }
    if n.is_zero() {
        return Ok((BigInt::from(0), 0));
    }
    let mut m = n.clone();
    let mut square = BigInt::from(1);
    let mut k: u64 = 2;
    while BigInt::from(k) * k <= m {
        if k > SQUAREFREE_TRIAL_LIMIT {
            // Whole remaining part may still be a perfect square.
            let root = m.sqrt();
            if &root * &root == m {
                return Ok((square * root, 1));
            }
            return Err(NumError::RadicandTooLarge);
        }
        let ksq = BigInt::from(k) * k;
        while (&m % &ksq).is_zero() {
            m /= &ksq;
            square *= k;
        }
        k += 1;
    }
    let d = m.to_u64().ok_or(NumError::RadicandTooLarge)?;
    Ok((square, d))
}

/// A real quadratic surd `a + b*sqrt(d)` with rational `a`, `b` and a
/// square-free radicand `d >= 0`. When `b = 0` the radicand is 0.
///
/// Prints as `p/q + r/s*sqrt(d)`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct QuadSurd {
    a: Rational,
    b: Rational,
    d: u64,
}

impl QuadSurd {
    pub fn new(a: Rational, b: Rational, d: u64) -> Result<Self, NumError> {
        let (square, mut d0) = squarefree_decompose(&BigInt::from(d))?;
        let mut a = a;
        let mut b = &b * &Rational::from(square);
        if d0 <= 1 {
            // sqrt(0) = 0 and sqrt(1) = 1 fold into the rational part.
            if d0 == 1 {
                a = &a + &b;
            }
            b = Rational::zero();
            d0 = 0;
        }
        if b.is_zero() {
            d0 = 0;
        }
        Ok(QuadSurd { a, b, d: d0 })
    }

    pub fn from_rational(a: Rational) -> Self {
        QuadSurd {
            a,
            b: Rational::zero(),
            d: 0,
        }
    }

    pub fn zero() -> Self {
        Self::from_rational(Rational::zero())
    }

    /// Exact square root of a non-negative rational, as `(s/q)*sqrt(d)`.
    pub fn sqrt_of(q: &Rational) -> Result<Self, NumError> {
        if q.is_negative() {
            return Err(NumError::NegativeRadicand);
        }
        // sqrt(p/q) = sqrt(p*q) / q
        let radicand = q.numer() * q.denom();
        let (square, d) = squarefree_decompose(&radicand)?;
        let coeff = Rational::new(square, q.denom().clone()).expect("denominator non-zero");
        QuadSurd::new(Rational::zero(), coeff, d)
    }

    pub fn rational_part(&self) -> &Rational {
        &self.a
    }

    pub fn surd_coeff(&self) -> &Rational {
        &self.b
    }

    pub fn radicand(&self) -> u64 {
        self.d
    }

    pub fn is_zero(&self) -> bool {
        self.a.is_zero() && self.b.is_zero()
    }

    pub fn is_rational(&self) -> bool {
        self.b.is_zero()
    }

    fn merged_radicand(&self, rhs: &QuadSurd) -> Result<u64, NumError> {
        match (self.b.is_zero(), rhs.b.is_zero()) {
            (true, _) => Ok(rhs.d),
            (false, true) => Ok(self.d),
            (false, false) if self.d == rhs.d => Ok(self.d),
            (false, false) => Err(NumError::MixedRadicands(self.d, rhs.d)),
        }
    }

    pub fn add(&self, rhs: &QuadSurd) -> Result<QuadSurd, NumError> {
        let d = self.merged_radicand(rhs)?;
        QuadSurd::new(&self.a + &rhs.a, &self.b + &rhs.b, d)
    }

    pub fn sub(&self, rhs: &QuadSurd) -> Result<QuadSurd, NumError> {
        self.add(&rhs.neg())
    }

    pub fn mul(&self, rhs: &QuadSurd) -> Result<QuadSurd, NumError> {
        let d = self.merged_radicand(rhs)?;
        // (a1 + b1*r)(a2 + b2*r) = a1*a2 + b1*b2*d + (a1*b2 + a2*b1)*r
        let rad = Rational::from_int(d as i64);
        let a = &(&self.a * &rhs.a) + &(&(&self.b * &rhs.b) * &rad);
        let b = &(&self.a * &rhs.b) + &(&rhs.a * &self.b);
        QuadSurd::new(a, b, d)
    }

    pub fn neg(&self) -> QuadSurd {
        QuadSurd {
            a: -&self.a,
            b: -&self.b,
            d: if self.b.is_zero() { 0 } else { self.d },
        }
    }

    pub fn scale(&self, q: &Rational) -> QuadSurd {
        if q.is_zero() {
            return QuadSurd::zero();
        }
        QuadSurd {
            a: &self.a * q,
            b: &self.b * q,
            d: self.d,
        }
    }

    pub fn to_f64(&self) -> f64 {
        self.a.to_f64() + self.b.to_f64() * (self.d as f64).sqrt()
    }

    /// Exact sign, using b^2*d vs a^2 comparison for the mixed case.
    pub fn signum(&self) -> i32 {
        let sa = if self.a.is_positive() {
            1
        } else if self.a.is_negative() {
            -1
        } else {
            0
        };
        if self.b.is_zero() {
            return sa;
        }
        let sb = if self.b.is_positive() { 1 } else { -1 };
        if sa == 0 {
            return sb;
        }
        if sa == sb {
            return sa;
        }
        // a and b*sqrt(d) have opposite signs: compare a^2 with b^2*d.
        let a2 = &self.a * &self.a;
        let b2d = &(&self.b * &self.b) * &Rational::from_int(self.d as i64);
        match a2.cmp(&b2d) {
            std::cmp::Ordering::Greater => sa,
            std::cmp::Ordering::Less => sb,
            std::cmp::Ordering::Equal => 0,
        }
    }
}

impl From<Rational> for QuadSurd {
    fn from(a: Rational) -> Self {
        QuadSurd::from_rational(a)
    }
}

impl fmt::Display for QuadSurd {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.b.is_zero() {
            return write!(f, "{}", self.a);
        }
        if self.a.is_zero() {
            return write!(f, "{}*sqrt({})", self.b, self.d);
        }
        if self.b.is_negative() {
            write!(f, "{} - {}*sqrt({})", self.a, self.b.abs(), self.d)
        } else {
            write!(f, "{} + {}*sqrt({})", self.a, self.b, self.d)
        }
    }
}

impl serde::Serialize for QuadSurd {
    fn serialize<S: serde::Serializer>(&self, serializer: S) -> Result<S::Ok, S::Error> {
        serializer.collect_str(self)
    }
}

/// A finite sum `sum_d c_d * sqrt(d)` over square-free radicands `d >= 1`;
/// the key 1 holds the rational part. Closed under +, -, *.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct SurdSum {
    terms: BTreeMap<u64, Rational>,
}

impl SurdSum {
    pub fn zero() -> Self {
        SurdSum::default()
    }

    pub fn from_rational(q: Rational) -> Self {
        let mut s = SurdSum::zero();
        s.push(1, q);
        s
    }

    /// `sqrt(n)` for a non-negative integer n.
    pub fn sqrt_of_int(n: u64) -> Result<Self, NumError> {
        let (square, d) = squarefree_decompose(&BigInt::from(n))?;
        let mut s = SurdSum::zero();
        s.push(d.max(1), Rational::from(square));
        Ok(s)
    }

    fn push(&mut self, d: u64, coeff: Rational) {
        if coeff.is_zero() || d == 0 {
            return;
        }
        let entry = self.terms.entry(d).or_insert_with(Rational::zero);
        *entry = &*entry + &coeff;
        if entry.is_zero() {
            self.terms.remove(&d);
        }
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn add(&self, rhs: &SurdSum) -> SurdSum {
        let mut out = self.clone();
        for (d, c) in &rhs.terms {
            out.push(*d, c.clone());
        }
        out
    }

    pub fn neg(&self) -> SurdSum {
        SurdSum {
            terms: self
                .terms
                .iter()
                .map(|(d, c)| (*d, -c))
                .collect(),
        }
    }

    pub fn scale(&self, q: &Rational) -> SurdSum {
        if q.is_zero() {
            return SurdSum::zero();
        }
        SurdSum {
            terms: self.terms.iter().map(|(d, c)| (*d, c * q)).collect(),
        }
    }

    /// Product; `None` when a combined radicand overflows the reducible range.
    pub fn mul(&self, rhs: &SurdSum) -> Option<SurdSum> {
        let mut out = SurdSum::zero();
        for (d1, c1) in &self.terms {
            for (d2, c2) in &rhs.terms {
                // sqrt(d1)*sqrt(d2) = g*sqrt((d1/g)*(d2/g)) with g = gcd.
                let g = d1.gcd(d2);
                let d = (d1 / g).checked_mul(d2 / g)?;
                let coeff = &(c1 * c2) * &Rational::from_int(g as i64);
                out.push(d, coeff);
            }
        }
        Some(out)
    }

    pub fn to_f64(&self) -> f64 {
        self.terms
            .iter()
            .map(|(d, c)| c.to_f64() * (*d as f64).sqrt())
            .sum()
    }
}

/// Complex value with `SurdSum` real and imaginary parts. This covers every
/// algebraic number expressible in the expression language (rationals,
/// integer square roots, Gaussian-rational scalings, and their ring
/// combinations) with an exact zero test.
#[derive(Clone, Debug, PartialEq, Eq, Default)]
pub struct ComplexSurdSum {
    pub re: SurdSum,
    pub im: SurdSum,
}

impl ComplexSurdSum {
    pub fn zero() -> Self {
        ComplexSurdSum::default()
    }

    pub fn real(re: SurdSum) -> Self {
        ComplexSurdSum {
            re,
            im: SurdSum::zero(),
        }
    }

    pub fn from_rational(q: Rational) -> Self {
        Self::real(SurdSum::from_rational(q))
    }

    pub fn is_zero(&self) -> bool {
        self.re.is_zero() && self.im.is_zero()
    }

    pub fn add(&self, rhs: &ComplexSurdSum) -> ComplexSurdSum {
        ComplexSurdSum {
            re: self.re.add(&rhs.re),
            im: self.im.add(&rhs.im),
        }
    }

    pub fn neg(&self) -> ComplexSurdSum {
        ComplexSurdSum {
            re: self.re.neg(),
            im: self.im.neg(),
        }
    }

    pub fn mul(&self, rhs: &ComplexSurdSum) -> Option<ComplexSurdSum> {
        let rr = self.re.mul(&rhs.re)?;
        let ii = self.im.mul(&rhs.im)?;
        let ri = self.re.mul(&rhs.im)?;
        let ir = self.im.mul(&rhs.re)?;
        Some(ComplexSurdSum {
            re: rr.add(&ii.neg()),
            im: ri.add(&ir),
        })
    }

    /// Scale by the Gaussian rational `re + im*i`.
    pub fn scale(&self, re: &Rational, im: &Rational) -> ComplexSurdSum {
        ComplexSurdSum {
            re: self.re.scale(re).add(&self.im.scale(im).neg()),
            im: self.im.scale(re).add(&self.re.scale(im)),
        }
    }

    pub fn to_f64_pair(&self) -> (f64, f64) {
        (self.re.to_f64(), self.im.to_f64())
    }
}
