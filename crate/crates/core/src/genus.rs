//! Elliptic genus and Todd series of a quaternionic line, as formal series in
//! its second Chern class `c2` with q-expansion coefficients.

use crate::error::{Error, Result};
use crate::exactmath::{bernoulli, bernoulli_poly_third, factorial, int, QuadExt, Rational};
use crate::modforms::{eisenstein_g, level_generator, Generator, Level};
use crate::qseries::{Coeff, QSeries, QuadSeries, Series};

use num_bigint::BigInt;
use num_traits::{One, Pow};

/// `Σ_a coeffs[a] · c2^a`, truncated after `c2^deg`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct C2Series {
    pub level: Level,
    pub coeffs: Vec<QSeries>,
}

impl C2Series {
    pub fn degree(&self) -> usize {
        self.coeffs.len().saturating_sub(1)
    }

    pub fn coeff(&self, a: usize) -> Option<&QSeries> {
        self.coeffs.get(a)
    }

    /// The `q⁰` coefficients.
    pub fn constant_terms(&self) -> Vec<Rational> {
        self.coeffs
            .iter()
            .map(|s| s.coeff(0).cloned().unwrap_or_else(|| int(0)))
            .collect()
    }
}

fn check_degree(deg: usize) -> Result<()> {
    if deg == 0 {
        return Err(Error::invalid("c2-degree must be at least 1"));
    }
    Ok(())
}

fn frac(num: Rational, den: BigInt) -> Rational {
    num / Rational::from_integer(den)
}

/// `(−1)^k · 2/(2k−2)!`, the factor in front of `G_{2k}` for `k ≥ 2`.
fn tail_factor(k: u32) -> Rational {
    let sign = if k.is_multiple_of(2) { int(1) } else { int(-1) };
    frac(sign * int(2), factorial(2 * k - 2))
}

/// Closed form: `1 − (E1²/4) c2 + Σ_{k≥2} (−1)^k G_{2k} c2^k / ((2k−2)!/2)` at
/// level 3, with `−2δ/3` in place of `−E1²/4` at level 2.
pub fn ell_closed(level: Level, deg: usize, precision: usize) -> Result<C2Series> {
    check_degree(deg)?;
    let mut coeffs = vec![QSeries::one(precision)];
    let linear = match level {
        Level::Three => {
            let e1 = level_generator(level, Generator::E1, precision)?;
            (&e1 * &e1).scale(&Rational::new((-1).into(), 4.into()))
        }
        // −(2/3)δ = −(4δ)/6
        Level::Two => level_generator(level, Generator::Delta4, precision)?
            .scale(&Rational::new((-1).into(), 6.into())),
    };
    coeffs.push(linear);
    for k in 2..=deg as u32 {
        coeffs.push(eisenstein_g(2 * k, precision)?.scale(&tail_factor(k)));
    }
    Ok(C2Series { level, coeffs })
}

/// Constant terms of [`ell_closed`], computed directly from Bernoulli numbers.
pub fn ell_const(level: Level, deg: usize) -> Result<Vec<Rational>> {
    check_degree(deg)?;
    let mut out = vec![int(1)];
    out.push(match level {
        Level::Three => Rational::new((-1).into(), 4.into()),
        Level::Two => Rational::new((-1).into(), 6.into()),
    });
    for k in 2..=deg as u32 {
        let g_const = -bernoulli(2 * k)? / int(4 * i64::from(k));
        out.push(g_const * tail_factor(k));
    }
    Ok(out)
}

/// `G*_{2n} = G_{2n}(τ) − 3^{2n−1} G_{2n}(3τ)`.
pub fn g_star(weight: u32, precision: usize) -> Result<QSeries> {
    let g = eisenstein_g(weight, precision)?;
    let shifted = g.substitute_qpow(3)?;
    let factor = Rational::from_integer(BigInt::from(3).pow(weight - 1));
    Ok(&g - &shifted.scale(&factor))
}

/// Formal exponential of `Σ_{n≥1} log[n] tⁿ` (with `log[0]` ignored).
fn formal_exp<C: Coeff>(log: &[Series<C>], precision: usize) -> Vec<Series<C>> {
    let deg = log.len() - 1;
    let mut out = vec![Series::<C>::one(precision)];
    // n e_n = Σ_{k=1}^{n} k L_k e_{n−k}
    for n in 1..=deg {
        let mut acc = Series::<C>::zero(precision);
        for k in 1..=n {
            let term = &log[k] * &out[n - k];
            acc = &acc + &term.scale(&int(k as i64));
        }
        out.push(acc.scale(&Rational::new(BigInt::one(), BigInt::from(n))));
    }
    out
}

/// `exp(6 Σ_{n≥1} (−1)ⁿ c2ⁿ G*_{2n} / (2n)!)`, the level-3 genus of a quaternionic line.
pub fn ell_oracle_level3(deg: usize, precision: usize) -> Result<C2Series> {
    check_degree(deg)?;
    let mut log = vec![QSeries::zero(precision)];
    for n in 1..=deg as u32 {
        let sign = if n % 2 == 0 { int(6) } else { int(-6) };
        log.push(g_star(2 * n, precision)?.scale(&frac(sign, factorial(2 * n))));
    }
    Ok(C2Series {
        level: Level::Three,
        coeffs: formal_exp(&log, precision),
    })
}

/// Largest x-degree available: odd Eisenstein data is known through weight 3.
pub const CHAR_SERIES_MAX_DEGREE: usize = 4;

/// `G^{(−ω)}_{2k+1} = (s/2) 3^{2k} B_{2k+1}(1/3)/(2k+1) · E_{2k+1}` for weights 1 and 3.
pub fn odd_eisenstein(weight: u32, precision: usize) -> Result<QuadSeries> {
    let generator = match weight {
        1 => Generator::E1,
        3 => Generator::E3,
        _ => {
            return Err(Error::UnsupportedDegree {
                degree: weight as usize,
                max: 3,
            })
        }
    };
    let e = level_generator(Level::Three, generator, precision)?;
    let k = (weight - 1) / 2;
    let c = Rational::from_integer(BigInt::from(3).pow(2 * k)) * bernoulli_poly_third(weight)?
        / int(i64::from(weight))
        / int(2);
    Ok(e.map(|x| QuadExt::new(int(0), x * &c)))
}

/// Coefficients of `x^0..=x^xdeg` in the level-3 characteristic series
/// `Q(x) = exp(3 Σ x^{2n}/(2n)! G*_{2n} − 2 Σ x^{2k+1}/(2k+1)! G^{(−ω)}_{2k+1})`.
pub fn char_series_level3(xdeg: usize, precision: usize) -> Result<Vec<QuadSeries>> {
    if xdeg > CHAR_SERIES_MAX_DEGREE {
        return Err(Error::UnsupportedDegree {
            degree: xdeg,
            max: CHAR_SERIES_MAX_DEGREE,
        });
    }
    let mut log = vec![QuadSeries::zero(precision)];
    for j in 1..=xdeg as u32 {
        let term = if j % 2 == 0 {
            g_star(j, precision)?.to_quad().scale(&frac(int(3), factorial(j)))
        } else {
            odd_eisenstein(j, precision)?.scale(&frac(int(-2), factorial(j)))
        };
        log.push(term);
    }
    Ok(formal_exp(&log, precision))
}

/// `Q(x) Q(−x)` from the coefficients of `Q(x)`.
pub fn even_product(q: &[QuadSeries]) -> Vec<QuadSeries> {
    let p = q.first().map(Series::precision).unwrap_or(0);
    (0..q.len())
        .map(|n| {
            (0..=n).fold(QuadSeries::zero(p), |acc, i| {
                let term = &q[i] * &q[n - i];
                if (n - i) % 2 == 1 {
                    &acc - &term
                } else {
                    &acc + &term
                }
            })
        })
        .collect()
}

/// `Td = 1 + Σ_{k≥1} (−1)^{k+1} (B_{2k}/2k) c2^k / (2k−2)!`.
pub fn todd_series(deg: usize) -> Result<Vec<Rational>> {
    let mut out = vec![int(1)];
    for k in 1..=deg as u32 {
        let sign = if k % 2 == 1 { int(1) } else { int(-1) };
        let b = bernoulli(2 * k)? / int(2 * i64::from(k));
        out.push(frac(sign * b, factorial(2 * k - 2)));
    }
    Ok(out)
}
