//! Eisenstein series and the graded rings of modular forms for Γ1(2) and Γ1(3).
//!
//! Level 3 is generated by the odd Eisenstein series `E1` (weight 1) and `E3`
//! (weight 3). Level 2 is generated by `δ` (weight 2, stored through the
//! integral series `4δ`) and `ε` (weight 4). A [`ModularForm`] is a polynomial
//! in the two generators of its level; it need not be homogeneous.

use std::cell::Cell;
use std::collections::{BTreeMap, HashMap};
use std::fmt;
use std::str::FromStr;

use num_bigint::BigInt;
use num_traits::{One, Pow, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{bernoulli, fmt_rational, int, Rational};
use crate::linalg::rref;
use crate::qseries::{convolve_int, QSeries};

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub enum Level {
    Two,
    Three,
}

impl Level {
    pub fn new(n: u32) -> Result<Self> {
        match n {
            2 => Ok(Level::Two),
            3 => Ok(Level::Three),
            _ => Err(Error::invalid(format!("level must be 2 or 3, got {n}"))),
        }
    }

    pub fn n(self) -> u32 {
        match self {
            Level::Two => 2,
            Level::Three => 3,
        }
    }

    /// Weights of the two ring generators.
    pub fn generator_weights(self) -> (u32, u32) {
        match self {
            Level::Two => (2, 4),
            Level::Three => (1, 3),
        }
    }

    pub fn generators(self) -> (Generator, Generator) {
        match self {
            Level::Two => (Generator::Delta4, Generator::Epsilon),
            Level::Three => (Generator::E1, Generator::E3),
        }
    }
}

impl fmt::Display for Level {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.n())
    }
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash)]
pub enum Generator {
    E1,
    E3,
    /// `4δ = 1 + 24 Σ σ₁^odd(n) qⁿ`
    Delta4,
    /// `ε = Σ_{d|n, n/d odd} d³ qⁿ = η(2τ)¹⁶/η(τ)⁸`
    Epsilon,
}

impl Generator {
    pub fn level(self) -> Level {
        match self {
            Generator::E1 | Generator::E3 => Level::Three,
            Generator::Delta4 | Generator::Epsilon => Level::Two,
        }
    }

    pub fn weight(self) -> u32 {
        match self {
            Generator::E1 => 1,
            Generator::E3 => 3,
            Generator::Delta4 => 2,
            Generator::Epsilon => 4,
        }
    }

    pub fn name(self) -> &'static str {
        match self {
            Generator::E1 => "E1",
            Generator::E3 => "E3",
            Generator::Delta4 => "delta4",
            Generator::Epsilon => "epsilon",
        }
    }
}

impl FromStr for Generator {
    type Err = Error;
    fn from_str(s: &str) -> Result<Self> {
        match s {
            "E1" => Ok(Generator::E1),
            "E3" => Ok(Generator::E3),
            "delta4" => Ok(Generator::Delta4),
            "epsilon" => Ok(Generator::Epsilon),
            _ => Err(Error::invalid(format!("unknown generator {s:?}"))),
        }
    }
}

/// Fault injection for the verification harness: while active on the current
/// thread, the chosen generator's `q²` coefficient is off by one.
pub mod fault {
    use super::*;

    thread_local! {
        static CORRUPTED: Cell<Option<Generator>> = const { Cell::new(None) };
    }

    pub fn with_corrupted_generator<R>(generator: Generator, f: impl FnOnce() -> R) -> R {
        let previous = CORRUPTED.with(|c| c.replace(Some(generator)));
        let out = f();
        CORRUPTED.with(|c| c.set(previous));
        out
    }

    pub(super) fn is_corrupted(generator: Generator) -> bool {
        CORRUPTED.with(|c| c.get()) == Some(generator)
    }
}

fn legendre3(d: usize) -> i64 {
    match d % 3 {
        0 => 0,
        1 => 1,
        _ => -1,
    }
}

/// `out[n] = sum_{d | n} f(d, n / d)` for `1 <= n < len`.
fn divisor_sum(len: usize, f: impl Fn(usize, usize) -> BigInt) -> Vec<BigInt> {
    let mut out = vec![BigInt::zero(); len];
    for d in 1..len {
        for n in (d..len).step_by(d) {
            out[n] += f(d, n / d);
        }
    }
    out
}

fn generator_ints(generator: Generator, precision: usize) -> Vec<BigInt> {
    let mut out = match generator {
        Generator::E1 => divisor_sum(precision, |d, _| BigInt::from(6 * legendre3(d))),
        Generator::E3 => divisor_sum(precision, |d, _| {
            BigInt::from(-9 * legendre3(d) * (d as i64) * (d as i64))
        }),
        Generator::Delta4 => divisor_sum(precision, |d, _| {
            if d % 2 == 1 {
                BigInt::from(24 * d)
            } else {
                BigInt::zero()
            }
        }),
        Generator::Epsilon => divisor_sum(precision, |d, e| {
            if e % 2 == 1 {
                BigInt::from(d).pow(3u32)
            } else {
                BigInt::zero()
            }
        }),
    };
    if precision > 0 && generator != Generator::Epsilon {
        out[0] = BigInt::one();
    }
    if fault::is_corrupted(generator) && precision > 2 {
        out[2] += 1;
    }
    out
}

/// Expansion of a ring generator at its level.
pub fn level_generator(level: Level, generator: Generator, precision: usize) -> Result<QSeries> {
    if generator.level() != level {
        return Err(Error::invalid(format!(
            "generator {} does not belong to level {}",
            generator.name(),
            level
        )));
    }
    Ok(QSeries::from_coeffs(
        generator_ints(generator, precision)
            .into_iter()
            .map(Rational::from_integer)
            .collect(),
    ))
}

fn check_even_weight(weight: u32) -> Result<()> {
    if weight < 2 || !weight.is_multiple_of(2) {
        return Err(Error::invalid(format!(
            "Eisenstein weight must be even and at least 2, got {weight}"
        )));
    }
    Ok(())
}

/// `G_{2k} = -B_{2k}/(4k) + Σ σ_{2k-1}(n) qⁿ`.
pub fn eisenstein_g(weight: u32, precision: usize) -> Result<QSeries> {
    check_even_weight(weight)?;
    let sums = divisor_sum(precision, |d, _| BigInt::from(d).pow(weight - 1));
    let mut coeffs: Vec<Rational> = sums.into_iter().map(Rational::from_integer).collect();
    if precision > 0 {
        coeffs[0] = -bernoulli(weight)? / int(2 * i64::from(weight));
    }
    Ok(QSeries::from_coeffs(coeffs))
}

/// `E_{2k} = G_{2k} · (−4k / B_{2k})`, constant term 1.
pub fn eisenstein_e(weight: u32, precision: usize) -> Result<QSeries> {
    let g = eisenstein_g(weight, precision)?;
    let factor = -int(2 * i64::from(weight)) / bernoulli(weight)?;
    Ok(g.scale(&factor))
}

/// A generator monomial: `E1^a E3^b` at level 3, `δ^a ε^b` at level 2.
#[derive(Clone, Copy, Debug, PartialEq, Eq, Hash, PartialOrd, Ord)]
pub struct Monomial {
    // field order gives the (b, a) lexicographic ordering
    pub b: u32,
    pub a: u32,
}

impl Monomial {
    pub fn new(a: u32, b: u32) -> Self {
        Monomial { a, b }
    }

    pub fn weight(self, level: Level) -> u32 {
        let (wa, wb) = level.generator_weights();
        wa * self.a + wb * self.b
    }

    /// `E1^a*E3^b` at level 3, `delta^a*epsilon^b` at level 2, `1` for the empty monomial.
    pub fn render(self, level: Level) -> String {
        let (ga, gb) = match level {
            Level::Two => ("delta", "epsilon"),
            Level::Three => ("E1", "E3"),
        };
        let part = |g: &str, e: u32| match e {
            0 => None,
            1 => Some(g.to_string()),
            _ => Some(format!("{g}^{e}")),
        };
        let parts: Vec<String> = [part(ga, self.a), part(gb, self.b)]
            .into_iter()
            .flatten()
            .collect();
        if parts.is_empty() {
            "1".into()
        } else {
            parts.join("*")
        }
    }
}

/// All monomials of the given weight, ordered lexicographically by `(b, a)`.
pub fn monomial_basis(weight: u32, level: Level) -> Vec<Monomial> {
    let (wa, wb) = level.generator_weights();
    (0..=weight / wb)
        .filter_map(|b| {
            let rest = weight - b * wb;
            rest.is_multiple_of(wa).then(|| Monomial::new(rest / wa, b))
        })
        .collect()
}

/// Memoized integral expansions of generator powers at a fixed precision.
///
/// A monomial expands to `ints / 4^a` at level 2 (because `δ = (4δ)/4`) and to
/// `ints` at level 3.
pub struct Expander {
    level: Level,
    precision: usize,
    powers: [Vec<Vec<BigInt>>; 2],
    monomials: HashMap<Monomial, Vec<BigInt>>,
}

impl Expander {
    pub fn new(level: Level, precision: usize) -> Self {
        let (ga, gb) = level.generators();
        let one = {
            let mut v = vec![BigInt::zero(); precision];
            if precision > 0 {
                v[0] = BigInt::one();
            }
            v
        };
        Expander {
            level,
            precision,
            powers: [
                vec![one.clone(), generator_ints(ga, precision)],
                vec![one, generator_ints(gb, precision)],
            ],
            monomials: HashMap::new(),
        }
    }

    pub fn precision(&self) -> usize {
        self.precision
    }

    fn power(&mut self, which: usize, e: u32) -> &[BigInt] {
        let e = e as usize;
        while self.powers[which].len() <= e {
            let last = self.powers[which].last().unwrap();
            let next = convolve_int(last, &self.powers[which][1], self.precision);
            self.powers[which].push(next);
        }
        &self.powers[which][e]
    }

    fn monomial_ints(&mut self, m: Monomial) -> Vec<BigInt> {
        if let Some(v) = self.monomials.get(&m) {
            return v.clone();
        }
        let pa = self.power(0, m.a).to_vec();
        let pb = self.power(1, m.b).to_vec();
        let v = convolve_int(&pa, &pb, self.precision);
        self.monomials.insert(m, v.clone());
        v
    }

    /// Scalar the integral expansion of `m` must be multiplied by.
    fn monomial_scale(&self, m: Monomial) -> Rational {
        match self.level {
            Level::Two => Rational::new(BigInt::one(), BigInt::from(4).pow(m.a)),
            Level::Three => Rational::one(),
        }
    }

    pub fn monomial(&mut self, m: Monomial) -> QSeries {
        let scale = self.monomial_scale(m);
        QSeries::from_coeffs(
            self.monomial_ints(m)
                .into_iter()
                .map(|c| Rational::from_integer(c) * &scale)
                .collect(),
        )
    }

    pub fn expand(&mut self, f: &ModularForm) -> QSeries {
        let mut acc = vec![Rational::zero(); self.precision];
        for (&m, c) in &f.terms {
            let scale = self.monomial_scale(m) * c;
            for (x, y) in acc.iter_mut().zip(self.monomial_ints(m)) {
                if !y.is_zero() {
                    *x += Rational::from_integer(y) * &scale;
                }
            }
        }
        QSeries::from_coeffs(acc)
    }
}

/// A rational polynomial in the generators of a level.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ModularForm {
    level: Level,
    terms: BTreeMap<Monomial, Rational>,
}

impl ModularForm {
    pub fn zero(level: Level) -> Self {
        ModularForm {
            level,
            terms: BTreeMap::new(),
        }
    }

    pub fn constant(level: Level, c: Rational) -> Self {
        Self::monomial(level, Monomial::new(0, 0), c)
    }

    pub fn monomial(level: Level, m: Monomial, c: Rational) -> Self {
        let mut f = Self::zero(level);
        if !c.is_zero() {
            f.terms.insert(m, c);
        }
        f
    }

    /// The generator `E1`, `E3` (level 3) or `δ`, `ε` (level 2) as a form.
    pub fn generator(level: Level, which: usize) -> Self {
        let m = if which == 0 {
            Monomial::new(1, 0)
        } else {
            Monomial::new(0, 1)
        };
        Self::monomial(level, m, Rational::one())
    }

    pub fn from_terms(level: Level, terms: impl IntoIterator<Item = (Monomial, Rational)>) -> Self {
        let mut f = Self::zero(level);
        for (m, c) in terms {
            f.add_term(m, c);
        }
        f
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn terms(&self) -> &BTreeMap<Monomial, Rational> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    fn add_term(&mut self, m: Monomial, c: Rational) {
        let entry = self.terms.entry(m).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&m);
        }
    }

    /// Distinct weights present, ascending.
    pub fn weights(&self) -> Vec<u32> {
        let mut w: Vec<u32> = self.terms.keys().map(|m| m.weight(self.level)).collect();
        w.sort_unstable();
        w.dedup();
        w
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.terms.keys().map(|m| m.weight(self.level)).max()
    }

    /// The homogeneous component of the given weight.
    pub fn component(&self, weight: u32) -> Self {
        ModularForm {
            level: self.level,
            terms: self
                .terms
                .iter()
                .filter(|(m, _)| m.weight(self.level) == weight)
                .map(|(m, c)| (*m, c.clone()))
                .collect(),
        }
    }

    /// Coordinates on `monomial_basis(weight, level)`.
    pub fn coordinates(&self, weight: u32) -> Vec<Rational> {
        monomial_basis(weight, self.level)
            .into_iter()
            .map(|m| self.terms.get(&m).cloned().unwrap_or_else(Rational::zero))
            .collect()
    }

    fn check_level(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level.n(), other.level.n()));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let mut out = self.clone();
        for (m, c) in &other.terms {
            out.add_term(*m, c.clone());
        }
        Ok(out)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.add(&other.scale(&-Rational::one()))
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_level(other)?;
        let mut out = Self::zero(self.level);
        for (m1, c1) in &self.terms {
            for (m2, c2) in &other.terms {
                out.add_term(Monomial::new(m1.a + m2.a, m1.b + m2.b), c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn pow(&self, e: u32) -> Self {
        let mut acc = Self::constant(self.level, Rational::one());
        for _ in 0..e {
            acc = acc.mul(self).expect("same level");
        }
        acc
    }

    pub fn scale(&self, c: &Rational) -> Self {
        if c.is_zero() {
            return Self::zero(self.level);
        }
        ModularForm {
            level: self.level,
            terms: self.terms.iter().map(|(m, x)| (*m, x * c)).collect(),
        }
    }

    pub fn expand(&self, precision: usize) -> QSeries {
        Expander::new(self.level, precision).expand(self)
    }
}

impl fmt::Display for ModularForm {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        for (i, (m, c)) in self.terms.iter().enumerate() {
            let text = fmt_rational(c);
            let (neg, text) = match text.strip_prefix('-') {
                Some(t) => (true, t.to_string()),
                None => (false, text),
            };
            match (i, neg) {
                (0, true) => f.write_str("-")?,
                (0, false) => {}
                (_, true) => f.write_str(" - ")?,
                (_, false) => f.write_str(" + ")?,
            }
            let mono = m.render(self.level);
            match (text.as_str(), mono.as_str()) {
                (t, "1") => f.write_str(t)?,
                ("1", mono) => f.write_str(mono)?,
                (t, mono) => write!(f, "{t}*{mono}")?,
            }
        }
        Ok(())
    }
}

/// Minimum precision for exact basis solves at a weight.
pub fn solve_precision(weight: u32) -> usize {
    2 * weight as usize + 8
}

/// Expresses `target` as the unique rational combination of weight-`weight`
/// generator monomials at `level`, checked on `precision` coefficients.
pub fn embed_level1(
    target: &QSeries,
    weight: u32,
    level: Level,
    precision: usize,
) -> Result<ModularForm> {
    let needed = solve_precision(weight);
    if precision < needed {
        return Err(Error::InsufficientPrecision {
            precision,
            reason: format!("basis solves at weight {weight} need at least {needed} coefficients"),
        });
    }
    if target.precision() < precision {
        return Err(Error::InsufficientPrecision {
            precision: target.precision(),
            reason: format!("target series known only to O(q^{})", target.precision()),
        });
    }
    let basis = monomial_basis(weight, level);
    let mut ex = Expander::new(level, precision);
    let rows: Vec<Vec<Rational>> = basis.iter().map(|&m| ex.monomial(m).into_coeffs()).collect();
    let reduced = rref(&rows);
    if !reduced.full_rank() {
        return Err(Error::InsufficientPrecision {
            precision,
            reason: format!("weight-{weight} monomials are dependent at this precision"),
        });
    }
    let coeffs = reduced
        .express(&target.coeffs()[..precision])
        .ok_or(Error::NotAModularForm {
            weight,
            level: level.n(),
        })?;
    Ok(ModularForm::from_terms(level, basis.into_iter().zip(coeffs)))
}

/// `G_{2k}` as a form in the generators of `level`.
pub fn eisenstein_g_form(weight: u32, level: Level) -> Result<ModularForm> {
    let p = solve_precision(weight);
    embed_level1(&eisenstein_g(weight, p)?, weight, level, p)
}

/// `E_{2k}` as a form in the generators of `level`.
pub fn eisenstein_e_form(weight: u32, level: Level) -> Result<ModularForm> {
    let p = solve_precision(weight);
    embed_level1(&eisenstein_e(weight, p)?, weight, level, p)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::rat;

    fn qs(xs: &[i64]) -> QSeries {
        QSeries::from_ints(xs)
    }

    #[test]
    fn eisenstein_g_examples() {
        let g4 = eisenstein_g(4, 4).unwrap();
        assert_eq!(g4.coeffs()[0], rat(1, 240));
        assert_eq!(&g4.coeffs()[1..], &qs(&[0, 1, 9, 28]).coeffs()[1..]);
        let g2 = eisenstein_g(2, 4).unwrap();
        assert_eq!(g2.coeffs()[0], rat(-1, 24));
        assert_eq!(&g2.coeffs()[1..], &qs(&[0, 1, 3, 4]).coeffs()[1..]);
        let g6 = eisenstein_g(6, 2).unwrap();
        assert_eq!(g6.coeffs(), &[rat(-1, 504), int(1)]);
        assert_eq!(eisenstein_e(4, 3).unwrap(), qs(&[1, 240, 2160]));
        assert!(eisenstein_g(3, 4).is_err());
    }

    #[test]
    fn generator_examples() {
        assert_eq!(level_generator(Level::Three, Generator::E1, 5).unwrap(), qs(&[1, 6, 0, 6, 6]));
        assert_eq!(level_generator(Level::Three, Generator::E3, 3).unwrap(), qs(&[1, -9, 27]));
        assert_eq!(
            level_generator(Level::Two, Generator::Delta4, 4).unwrap(),
            qs(&[1, 24, 24, 96])
        );
        assert_eq!(
            level_generator(Level::Two, Generator::Epsilon, 5).unwrap(),
            qs(&[0, 1, 8, 28, 64])
        );
        assert!(matches!(
            level_generator(Level::Two, Generator::E1, 4),
            Err(Error::InvalidInput(_))
        ));
    }

    /// q ∏ (1 − q^{2n})^16 / (1 − q^n)^8, expanded by repeated multiplication.
    fn eta_quotient_oracle(p: usize) -> QSeries {
        let mut acc = QSeries::zero(p);
        let mut c = acc.clone().into_coeffs();
        c[1] = int(1);
        acc = QSeries::from_coeffs(c);
        for n in 1..p {
            // 1/(1 - q^n) = sum_k q^{kn}
            let mut geo = vec![Rational::zero(); p];
            for k in (0..p).step_by(n) {
                geo[k] = int(1);
            }
            let geo = QSeries::from_coeffs(geo);
            for _ in 0..8 {
                acc = &acc * &geo;
            }
            if 2 * n < p {
                let mut f = vec![Rational::zero(); p];
                f[0] = int(1);
                f[2 * n] = int(-1);
                let f = QSeries::from_coeffs(f);
                for _ in 0..16 {
                    acc = &acc * &f;
                }
            }
        }
        acc
    }

    #[test]
    fn epsilon_is_the_eta_quotient() {
        assert_eq!(
            level_generator(Level::Two, Generator::Epsilon, 30).unwrap(),
            eta_quotient_oracle(30)
        );
    }

    #[test]
    fn basis_examples() {
        assert_eq!(
            monomial_basis(4, Level::Three),
            vec![Monomial::new(4, 0), Monomial::new(1, 1)]
        );
        assert_eq!(monomial_basis(1, Level::Three), vec![Monomial::new(1, 0)]);
        assert_eq!(
            monomial_basis(4, Level::Two),
            vec![Monomial::new(2, 0), Monomial::new(0, 1)]
        );
        assert_eq!(monomial_basis(3, Level::Two), vec![]);
        assert_eq!(monomial_basis(0, Level::Two), vec![Monomial::new(0, 0)]);
    }

    #[test]
    fn expand_examples() {
        let e1 = ModularForm::generator(Level::Three, 0);
        let e3 = ModularForm::generator(Level::Three, 1);
        assert_eq!(e1.mul(&e3).unwrap().expand(3), qs(&[1, -3, -27]));
        assert!(ModularForm::zero(Level::Three).expand(5).is_zero());

        // (1/4)((E1^2 - 1)/4)^3 starts with (27/4) q^3
        let one = ModularForm::constant(Level::Three, int(1));
        let a = e1.pow(2).sub(&one).unwrap().scale(&rat(1, 4));
        let s = a.pow(3).scale(&rat(1, 4)).expand(5);
        assert_eq!(&s.coeffs()[..3], &[int(0), int(0), int(0)]);
        assert_eq!(s.coeffs()[3], rat(27, 4));
    }

    #[test]
    fn level2_delta_is_quarter_of_delta4() {
        let d = ModularForm::generator(Level::Two, 0).expand(4);
        assert_eq!(d, qs(&[1, 24, 24, 96]).scale(&rat(1, 4)));
    }

    #[test]
    fn embed_examples() {
        let p = 64;
        let e4 = embed_level1(&eisenstein_e(4, p).unwrap(), 4, Level::Three, p).unwrap();
        assert_eq!(
            e4,
            ModularForm::from_terms(
                Level::Three,
                [(Monomial::new(4, 0), int(9)), (Monomial::new(1, 1), int(-8))]
            )
        );
        let e1sq = ModularForm::generator(Level::Three, 0).pow(2);
        assert_eq!(embed_level1(&e1sq.expand(p), 2, Level::Three, p).unwrap(), e1sq);
        assert_eq!(
            embed_level1(&eisenstein_g(2, p).unwrap(), 2, Level::Three, p),
            Err(Error::NotAModularForm { weight: 2, level: 3 })
        );
        assert!(matches!(
            embed_level1(&eisenstein_e(4, 10).unwrap(), 4, Level::Three, 10),
            Err(Error::InsufficientPrecision { .. })
        ));
    }

    #[test]
    fn level1_forms_embed_at_both_levels() {
        for level in [Level::Two, Level::Three] {
            for w in [4, 6, 8, 10] {
                let p = solve_precision(w) + 8;
                let target = eisenstein_e(w, p).unwrap();
                let f = embed_level1(&target, w, level, p).unwrap();
                assert_eq!(f.expand(p), target, "E{w} at level {level}");
                assert_eq!(f.weights(), vec![w]);
            }
        }
    }

    #[test]
    fn e1_squared_is_twelve_g2_star() {
        let p = 64;
        let g2 = eisenstein_g(2, p).unwrap();
        let g2star = &g2 - &g2.substitute_qpow(3).unwrap().scale(&int(3));
        let e1 = level_generator(Level::Three, Generator::E1, p).unwrap();
        assert_eq!(&e1 * &e1, g2star.scale(&int(12)));
    }

    #[test]
    fn e4_in_level3_generators() {
        let p = 64;
        let e1 = level_generator(Level::Three, Generator::E1, p).unwrap();
        let e3 = level_generator(Level::Three, Generator::E3, p).unwrap();
        let rhs = &e1.pow(4).scale(&int(9)) - &(&e1 * &e3).scale(&int(8));
        assert_eq!(eisenstein_e(4, p).unwrap(), rhs);
    }

    #[test]
    fn fault_injection_is_scoped() {
        let clean = level_generator(Level::Three, Generator::E3, 5).unwrap();
        let bad = fault::with_corrupted_generator(Generator::E3, || {
            level_generator(Level::Three, Generator::E3, 5).unwrap()
        });
        assert_ne!(clean, bad);
        assert_eq!(level_generator(Level::Three, Generator::E3, 5).unwrap(), clean);
    }

    #[test]
    fn display_form() {
        let f = ModularForm::from_terms(
            Level::Three,
            [(Monomial::new(4, 0), int(9)), (Monomial::new(1, 1), int(-8)), (Monomial::new(0, 0), rat(1, 2))],
        );
        assert_eq!(f.to_string(), "1/2 + 9*E1^4 - 8*E1*E3");
    }
}
