//! Truncated power series in `q` with exact coefficients.
//!
//! A [`Series`] of precision `P` stores the coefficients of `q^0..q^(P-1)` and
//! is known only modulo `q^P`. Binary operations truncate to the smaller
//! precision of their operands.

use std::fmt;
use std::ops::{Add, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, QuadExt, Rational};

/// Coefficient domains a series can live over.
pub trait Coeff: Clone + PartialEq + fmt::Debug {
    const DOMAIN: &'static str;

    fn zero() -> Self;
    fn one() -> Self;
    fn is_zero(&self) -> bool;
    fn add(&self, rhs: &Self) -> Self;
    fn sub(&self, rhs: &Self) -> Self;
    fn mul(&self, rhs: &Self) -> Self;
    fn neg(&self) -> Self;
    fn scale(&self, c: &Rational) -> Self;
    /// `Some` only when the domain is the rationals.
    fn as_rational(&self) -> Option<&Rational>;
    fn render(&self) -> String;

    /// Cauchy product truncated to `n` terms.
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let mut out = vec![Self::zero(); n];
        for (i, x) in a.iter().enumerate().take(n) {
            if x.is_zero() {
                continue;
            }
            for (j, y) in b.iter().enumerate().take(n - i) {
                if !y.is_zero() {
                    out[i + j] = out[i + j].add(&x.mul(y));
                }
            }
        }
        out
    }
}

impl Coeff for Rational {
    const DOMAIN: &'static str = "rational";

    fn zero() -> Self {
        Zero::zero()
    }
    fn one() -> Self {
        One::one()
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(self)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self.clone()
    }
    fn scale(&self, c: &Rational) -> Self {
        self * c
    }
    fn as_rational(&self) -> Option<&Rational> {
        Some(self)
    }
    fn render(&self) -> String {
        fmt_rational(self)
    }

    // Clear denominators and convolve over the integers.
    fn convolve(a: &[Self], b: &[Self], n: usize) -> Vec<Self> {
        let (ai, ad) = to_integral(&a[..a.len().min(n)]);
        let (bi, bd) = to_integral(&b[..b.len().min(n)]);
        let prod = convolve_int(&ai, &bi, n);
        let den = ad * bd;
        prod.into_iter()
            .map(|c| Rational::new(c, den.clone()))
            .collect()
    }
}

impl Coeff for QuadExt {
    const DOMAIN: &'static str = "quadratic-extension";

    fn zero() -> Self {
        QuadExt::default()
    }
    fn one() -> Self {
        QuadExt::from_rational(One::one())
    }
    fn is_zero(&self) -> bool {
        Zero::is_zero(&self.re) && Zero::is_zero(&self.im)
    }
    fn add(&self, rhs: &Self) -> Self {
        self + rhs
    }
    fn sub(&self, rhs: &Self) -> Self {
        self - rhs
    }
    fn mul(&self, rhs: &Self) -> Self {
        self * rhs
    }
    fn neg(&self) -> Self {
        -self
    }
    fn scale(&self, c: &Rational) -> Self {
        QuadExt::scale(self, c)
    }
    fn as_rational(&self) -> Option<&Rational> {
        None
    }
    fn render(&self) -> String {
        self.to_string()
    }
}

fn to_integral(xs: &[Rational]) -> (Vec<BigInt>, BigInt) {
    let den = xs
        .iter()
        .fold(BigInt::one(), |acc, x| acc.lcm(x.denom()));
    let ints = xs
        .iter()
        .map(|x| x.numer() * (&den / x.denom()))
        .collect();
    (ints, den)
}

pub(crate) fn convolve_int(a: &[BigInt], b: &[BigInt], n: usize) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); n];
    for (i, x) in a.iter().enumerate().take(n) {
        if x.is_zero() {
            continue;
        }
        for (j, y) in b.iter().enumerate().take(n - i) {
            if !y.is_zero() {
                out[i + j] += x * y;
            }
        }
    }
    out
}

/// A power series known modulo `q^P`, `P = coeffs.len()`.
#[derive(Clone, Debug, PartialEq, Eq, Hash)]
pub struct Series<C> {
    coeffs: Vec<C>,
}

pub type QSeries = Series<Rational>;
pub type QuadSeries = Series<QuadExt>;

impl<C: Coeff> Series<C> {
    pub fn from_coeffs(coeffs: Vec<C>) -> Self {
        Series { coeffs }
    }

    pub fn zero(precision: usize) -> Self {
        Series {
            coeffs: vec![C::zero(); precision],
        }
    }

    pub fn constant(c: C, precision: usize) -> Self {
        let mut s = Self::zero(precision);
        if precision > 0 {
            s.coeffs[0] = c;
        }
        s
    }

    pub fn one(precision: usize) -> Self {
        Self::constant(C::one(), precision)
    }

    pub fn precision(&self) -> usize {
        self.coeffs.len()
    }

    /// Coefficient of `q^j`; `None` beyond the precision.
    pub fn coeff(&self, j: usize) -> Option<&C> {
        self.coeffs.get(j)
    }

    pub fn coeffs(&self) -> &[C] {
        &self.coeffs
    }

    pub fn into_coeffs(self) -> Vec<C> {
        self.coeffs
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.iter().all(C::is_zero)
    }

    pub fn truncate(&self, precision: usize) -> Self {
        Series {
            coeffs: self.coeffs.iter().take(precision).cloned().collect(),
        }
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Series {
            coeffs: self.coeffs.iter().map(|x| x.scale(c)).collect(),
        }
    }

    pub fn map<D: Coeff>(&self, f: impl Fn(&C) -> D) -> Series<D> {
        Series {
            coeffs: self.coeffs.iter().map(f).collect(),
        }
    }

    /// Exact rational linear combination `sum c_i * a_i`, truncated to the
    /// smallest precision present.
    pub fn linear_combine(terms: &[(Rational, Series<C>)]) -> Result<Self> {
        let p = terms
            .iter()
            .map(|(_, s)| s.precision())
            .min()
            .ok_or_else(|| Error::invalid("linear combination of zero terms"))?;
        let mut out = Self::zero(p);
        for (c, s) in terms {
            for (o, x) in out.coeffs.iter_mut().zip(&s.coeffs) {
                *o = o.add(&x.scale(c));
            }
        }
        Ok(out)
    }

    /// Substitutes `q -> q^t`; the precision is preserved.
    pub fn substitute_qpow(&self, t: usize) -> Result<Self> {
        if t == 0 {
            return Err(Error::invalid("q-power substitution requires t >= 1"));
        }
        let p = self.precision();
        let mut out = Self::zero(p);
        for (j, c) in self.coeffs.iter().enumerate() {
            if j * t >= p {
                break;
            }
            out.coeffs[j * t] = c.clone();
        }
        Ok(out)
    }

    /// True iff every coefficient lies in `Z[1/N]`, i.e. its reduced
    /// denominator is a power of `N`. Only defined over the rationals.
    pub fn is_n_integral(&self, n: u32) -> Result<bool> {
        if n < 2 {
            return Err(Error::invalid(format!("integrality level must be >= 2, got {n}")));
        }
        let mut all = true;
        for c in &self.coeffs {
            let r = c.as_rational().ok_or(Error::UnsupportedDomain(C::DOMAIN))?;
            all &= is_power_of(r.denom(), n);
        }
        Ok(all)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::one(self.precision());
        for _ in 0..e {
            acc = &acc * self;
        }
        acc
    }
}

/// True iff `d` is `n^k` for some `k >= 0`.
pub fn is_power_of(d: &BigInt, n: u32) -> bool {
    let n = BigInt::from(n);
    let mut d = d.abs();
    while !d.is_one() {
        let (q, r) = d.div_rem(&n);
        if !r.is_zero() {
            return false;
        }
        d = q;
    }
    true
}

impl<C: Coeff> Add for &Series<C> {
    type Output = Series<C>;
    fn add(self, rhs: &Series<C>) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.add(b)).collect(),
        }
    }
}

impl<C: Coeff> Sub for &Series<C> {
    type Output = Series<C>;
    fn sub(self, rhs: &Series<C>) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().zip(&rhs.coeffs).map(|(a, b)| a.sub(b)).collect(),
        }
    }
}

impl<C: Coeff> Mul for &Series<C> {
    type Output = Series<C>;
    fn mul(self, rhs: &Series<C>) -> Series<C> {
        let n = self.precision().min(rhs.precision());
        Series {
            coeffs: C::convolve(&self.coeffs, &rhs.coeffs, n),
        }
    }
}

impl<C: Coeff> Neg for &Series<C> {
    type Output = Series<C>;
    fn neg(self) -> Series<C> {
        Series {
            coeffs: self.coeffs.iter().map(C::neg).collect(),
        }
    }
}

impl QSeries {
    pub fn from_ints(xs: &[i64]) -> Self {
        Series {
            coeffs: xs.iter().map(|&x| Rational::from_integer(x.into())).collect(),
        }
    }

    pub fn to_quad(&self) -> QuadSeries {
        self.map(|c| QuadExt::from_rational(c.clone()))
    }
}

impl QuadSeries {
    /// Splits into rational and `s`-components.
    pub fn parts(&self) -> (QSeries, QSeries) {
        (self.map(|c| c.re.clone()), self.map(|c| c.im.clone()))
    }
}

impl<C: Coeff> fmt::Display for Series<C> {
    /// `c0 + c1*q + c2*q^2 + ... + O(q^P)` with zero terms omitted.
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        let mut first = true;
        for (j, c) in self.coeffs.iter().enumerate() {
            if c.is_zero() {
                continue;
            }
            let mut text = c.render();
            let negative = text.starts_with('-');
            if negative {
                text.remove(0);
            }
            if !first {
                f.write_str(if negative { " - " } else { " + " })?;
            } else if negative {
                f.write_str("-")?;
            }
            first = false;
            match j {
                0 => f.write_str(&text)?,
                _ => {
                    if text != "1" {
                        write!(f, "{text}*")?;
                    }
                    if j == 1 {
                        f.write_str("q")?;
                    } else {
                        write!(f, "q^{j}")?;
                    }
                }
            }
        }
        if !first {
            f.write_str(" + ")?;
        }
        write!(f, "O(q^{})", self.precision())
    }
}
