//! Exact scalars: arbitrary-precision rationals, the quadratic extension
//! Q(s) with s² = −3, Bernoulli numbers and Bernoulli-polynomial values.

use std::fmt;
use std::ops::{Add, AddAssign, Mul, Neg, Sub};

use num_bigint::BigInt;
use num_integer::Integer;
use num_rational::BigRational;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};

/// Rational numbers in lowest terms with positive denominator.
pub type Rational = BigRational;

pub fn rat(num: i64, den: i64) -> Rational {
    Rational::new(BigInt::from(num), BigInt::from(den))
}

pub fn int(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn factorial(n: u32) -> BigInt {
    (1..=n).fold(BigInt::one(), |acc, k| acc * k)
}

pub fn binomial(n: u32, k: u32) -> BigInt {
    if k > n {
        return BigInt::zero();
    }
    let k = k.min(n - k);
    let mut acc = BigInt::one();
    for i in 0..k {
        acc = acc * (n - i) / (i + 1);
    }
    acc
}

/// Renders a rational as `p/q`, or `p` for integers.
pub fn fmt_rational(r: &Rational) -> String {
    if r.denom().is_one() {
        r.numer().to_string()
    } else {
        format!("{}/{}", r.numer(), r.denom())
    }
}

/// Parses `p`, `-p` or `p/q`.
pub fn parse_rational(s: &str) -> Result<Rational> {
    let s = s.trim();
    let bad = || Error::invalid(format!("not a rational number: {s:?}"));
    match s.split_once('/') {
        Some((n, d)) => {
            let n: BigInt = n.trim().parse().map_err(|_| bad())?;
            let d: BigInt = d.trim().parse().map_err(|_| bad())?;
            if d.is_zero() {
                return Err(bad());
            }
            Ok(Rational::new(n, d))
        }
        None => Ok(Rational::from_integer(s.parse().map_err(|_| bad())?)),
    }
}

/// Bernoulli numbers `B_0..=B_max` with `B_1 = -1/2`, via the Akiyama–Tanigawa transform.
pub fn bernoulli_table(max: usize) -> Vec<Rational> {
    let mut out = Vec::with_capacity(max + 1);
    let mut row: Vec<Rational> = Vec::with_capacity(max + 1);
    for m in 0..=max {
        row.push(Rational::new(BigInt::one(), BigInt::from(m + 1)));
        for j in (1..=m).rev() {
            let diff = &row[j - 1] - &row[j];
            row[j - 1] = diff * BigInt::from(j);
        }
        out.push(row[0].clone());
    }
    // the transform produces B_1 = +1/2
    if max >= 1 {
        out[1] = -out[1].clone();
    }
    out
}

/// `B_{2k}` for an even index `2k >= 2`, normalized so that `B_2 = 1/6`.
pub fn bernoulli(index: u32) -> Result<Rational> {
    if index < 2 || !index.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "Bernoulli index must be even and at least 2, got {index}"
        )));
    }
    Ok(bernoulli_table(index as usize).pop().unwrap())
}

/// Evaluates the Bernoulli polynomial `B_m(x)` at `x = 1/3` for odd `m`.
pub fn bernoulli_poly_third(m: u32) -> Result<Rational> {
    if m.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "Bernoulli polynomial degree must be odd, got {m}"
        )));
    }
    let b = bernoulli_table(m as usize);
    let third = rat(1, 3);
    // Horner in x over B_m(x) = sum_k C(m,k) B_k x^(m-k)
    let mut acc = Rational::zero();
    for k in 0..=m {
        acc = acc * &third + Rational::from_integer(binomial(m, k)) * &b[k as usize];
    }
    Ok(acc)
}

/// Reduces a rational into `[0, 1)`.
pub fn frac_part(r: &Rational) -> Rational {
    let floor = r.numer().div_floor(r.denom());
    r - Rational::from_integer(floor)
}

/// An element `re + im·s` of Q(s), `s² = −3`.
#[derive(Clone, Debug, PartialEq, Eq, Hash, Default)]
pub struct QuadExt {
    pub re: Rational,
    pub im: Rational,
}

impl QuadExt {
    pub fn new(re: Rational, im: Rational) -> Self {
        QuadExt { re, im }
    }

    pub fn from_rational(re: Rational) -> Self {
        QuadExt {
            re,
            im: Rational::zero(),
        }
    }

    /// The generator `s = √−3`.
    pub fn s() -> Self {
        QuadExt {
            re: Rational::zero(),
            im: Rational::one(),
        }
    }

    pub fn conj(&self) -> Self {
        QuadExt {
            re: self.re.clone(),
            im: -self.im.clone(),
        }
    }

    /// `(a + bs)(a − bs) = a² + 3b²`.
    pub fn norm(&self) -> Rational {
        &self.re * &self.re + int(3) * &self.im * &self.im
    }

    pub fn is_rational(&self) -> bool {
        self.im.is_zero()
    }

    pub fn scale(&self, c: &Rational) -> Self {
        QuadExt {
            re: &self.re * c,
            im: &self.im * c,
        }
    }
}

impl From<Rational> for QuadExt {
    fn from(r: Rational) -> Self {
        QuadExt::from_rational(r)
    }
}

impl Add for &QuadExt {
    type Output = QuadExt;
    fn add(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            re: &self.re + &rhs.re,
            im: &self.im + &rhs.im,
        }
    }
}

impl Sub for &QuadExt {
    type Output = QuadExt;
    fn sub(self, rhs: &QuadExt) -> QuadExt {
        QuadExt {
            re: &self.re - &rhs.re,
            im: &self.im - &rhs.im,
        }
    }
}

impl Mul for &QuadExt {
    type Output = QuadExt;
    fn mul(self, rhs: &QuadExt) -> QuadExt {
        // (a+bs)(c+ds) = (ac - 3bd) + (ad + bc)s
        QuadExt {
            re: &self.re * &rhs.re - int(3) * &self.im * &rhs.im,
            im: &self.re * &rhs.im + &self.im * &rhs.re,
        }
    }
}

impl Neg for &QuadExt {
    type Output = QuadExt;
    fn neg(self) -> QuadExt {
        QuadExt {
            re: -self.re.clone(),
            im: -self.im.clone(),
        }
    }
}

impl AddAssign<&QuadExt> for QuadExt {
    fn add_assign(&mut self, rhs: &QuadExt) {
        self.re += &rhs.re;
        self.im += &rhs.im;
    }
}

impl fmt::Display for QuadExt {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match (self.re.is_zero(), self.im.is_zero()) {
            (_, true) => write!(f, "{}", fmt_rational(&self.re)),
            (true, false) => write!(f, "({})*s", fmt_rational(&self.im)),
            (false, false) => {
                let sign = if self.im.is_negative() { '-' } else { '+' };
                write!(
                    f,
                    "({} {} {}*s)",
                    fmt_rational(&self.re),
                    sign,
                    fmt_rational(&self.im.abs())
                )
            }
        }
    }
}
