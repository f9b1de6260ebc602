//! Divided congruences modulo the indeterminacy `D_k + M_0 ⊗ Q + M_k ⊗ Q`.
//!
//! A [`FilteredElement`] is an inhomogeneous sum of forms of weight at most
//! `k`. It lies in the indeterminacy iff, for some constant `c` and some
//! weight-`k` form `m`, the expansion `h − c − m` has coefficients in `Z[1/N]`.
//!
//! Membership is decided on `P` coefficients. Let `V ⊂ Q^P` be spanned by the
//! expansions of `1` and of the weight-`k` monomials. Projecting `Q^P → Q^P / V`
//! along the pivot coordinates of a reduced basis of `V`, the question becomes
//! whether the image of `h` lies in `Z[1/N]^m + Σ Z[1/N]·R_j` where `R_j` are the
//! images of the pivot unit vectors. Multiplying through by the `N`-free common
//! denominator `D` turns this into a row-space question over `Z/D`, answered by
//! diagonalizing the `R_j` with unimodular row and column operations. The same
//! diagonal form yields the torsion order and a witness `(c, m)`.
//!
//! Every public verdict is recomputed at `2P`; disagreement is reported as
//! [`Error::PrecisionUnstable`] rather than returned as an answer.

use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::error::{Error, Result};
use crate::exactmath::{fmt_rational, Rational};
use crate::linalg::rref;
use crate::modforms::{monomial_basis, Expander, Level, Monomial, ModularForm};
use crate::qseries::QSeries;

/// Default working precision for filtration `k`: `max(48, 8(k + 1))`.
pub fn default_precision(filtration: u32) -> usize {
    48.max(8 * (filtration as usize + 1))
}

/// A sum `Σ_{i ≤ k} f_i` of forms `f_i ∈ M_i ⊗ Q`, stored per weight.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct FilteredElement {
    level: Level,
    filtration: u32,
    components: BTreeMap<u32, ModularForm>,
}

impl FilteredElement {
    pub fn zero(level: Level, filtration: u32) -> Self {
        FilteredElement {
            level,
            filtration,
            components: BTreeMap::new(),
        }
    }

    /// Splits `form` into weight components; fails if any weight exceeds `k`.
    pub fn from_form(form: &ModularForm, filtration: u32) -> Result<Self> {
        if filtration == 0 {
            return Err(Error::invalid("filtration must be positive"));
        }
        let mut out = Self::zero(form.level(), filtration);
        for w in form.weights() {
            if w > filtration {
                return Err(Error::WeightExceedsFiltration {
                    weight: w,
                    filtration,
                });
            }
            out.components.insert(w, form.component(w));
        }
        Ok(out)
    }

    pub fn constant(level: Level, filtration: u32, c: Rational) -> Result<Self> {
        Self::from_form(&ModularForm::constant(level, c), filtration)
    }

    pub fn level(&self) -> Level {
        self.level
    }

    pub fn filtration(&self) -> u32 {
        self.filtration
    }

    /// Nonzero homogeneous components keyed by weight.
    pub fn components(&self) -> &BTreeMap<u32, ModularForm> {
        &self.components
    }

    pub fn is_zero(&self) -> bool {
        self.components.is_empty()
    }

    pub fn max_weight(&self) -> Option<u32> {
        self.components.keys().next_back().copied()
    }

    /// The element as one (inhomogeneous) polynomial in the generators.
    pub fn to_form(&self) -> ModularForm {
        self.components
            .values()
            .fold(ModularForm::zero(self.level), |acc, f| acc.add(f).expect("same level"))
    }

    pub fn with_filtration(&self, filtration: u32) -> Result<Self> {
        Self::from_form(&self.to_form(), filtration)
    }

    fn check_compatible(&self, other: &Self) -> Result<()> {
        if self.level != other.level {
            return Err(Error::LevelMismatch(self.level.n(), other.level.n()));
        }
        if self.filtration != other.filtration {
            return Err(Error::invalid(format!(
                "filtration mismatch: {} vs {}",
                self.filtration, other.filtration
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Self::from_form(&self.to_form().add(&other.to_form())?, self.filtration)
    }

    pub fn sub(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Self::from_form(&self.to_form().sub(&other.to_form())?, self.filtration)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_compatible(other)?;
        Self::from_form(&self.to_form().mul(&other.to_form())?, self.filtration)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_form(&self.to_form().scale(c), self.filtration).expect("weights unchanged")
    }

    pub fn total_expansion(&self, precision: usize) -> QSeries {
        Expander::new(self.level, precision).expand(&self.to_form())
    }
}

impl fmt::Display for FilteredElement {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}", self.to_form())
    }
}

/// Witness that an element lies in the indeterminacy: `h − c − m` is
/// `N`-integral to the stated precision.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Certificate {
    pub constant: Rational,
    pub top_form: ModularForm,
    /// Leading coefficients of `h − c − m`.
    pub remainder: Vec<Rational>,
    pub precision: usize,
}

/// A diagonalized quotient coordinate in which the element fails to be integral.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Obstruction {
    pub coordinate: usize,
    pub residue: BigInt,
    pub modulus: BigInt,
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub enum Verdict {
    Member(Certificate),
    NonMember(Obstruction),
}

impl Verdict {
    pub fn is_member(&self) -> bool {
        matches!(self, Verdict::Member(_))
    }
}

impl fmt::Display for Verdict {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            Verdict::Member(c) => {
                let rem: Vec<String> = c.remainder.iter().map(fmt_rational).collect();
                write!(
                    f,
                    "member: c = {}, m = {}, remainder = [{}, ...] (P = {})",
                    fmt_rational(&c.constant),
                    c.top_form,
                    rem.join(", "),
                    c.precision
                )
            }
            Verdict::NonMember(o) => write!(
                f,
                "not a member: quotient coordinate {} has residue {} modulo {}",
                o.coordinate, o.residue, o.modulus
            ),
        }
    }
}

/// Full result of one lattice computation at a fixed precision.
#[derive(Clone, Debug)]
pub struct Analysis {
    pub precision: usize,
    pub torsion_order: BigInt,
    pub verdict: Verdict,
}

/// Maps `x ∈ Z[1/N]` (after scaling by `modulus`) into `Z/modulus`.
fn to_residue(x: &Rational, scale: &BigInt, modulus: &BigInt, n: &BigInt) -> BigInt {
    // scale * x = numer * (scale / den') / N^e with den = den' * N^e
    let mut den = x.denom().clone();
    let mut npow = BigInt::one();
    while den.is_multiple_of(n) {
        den /= n;
        npow *= n;
    }
    debug_assert!(scale.is_multiple_of(&den));
    let v = x.numer() * (scale / den);
    let inv = mod_inverse(&npow, modulus);
    (v * inv).mod_floor(modulus)
}

fn mod_inverse(a: &BigInt, m: &BigInt) -> BigInt {
    if m.is_one() {
        return BigInt::zero();
    }
    let e = a.mod_floor(m).extended_gcd(m);
    debug_assert!(e.gcd.is_one());
    e.x.mod_floor(m)
}

/// Strips all factors of `n` from `d`.
fn n_free(mut d: BigInt, n: &BigInt) -> BigInt {
    while d.is_multiple_of(n) {
        d /= n;
    }
    d
}

/// Row space of an `r × m` matrix over `Z/M`, diagonalized as `R A C = diag`.
struct Diagonal {
    modulus: BigInt,
    /// Diagonal entries of the first `rank` positions.
    diag: Vec<BigInt>,
    /// Row transform `R` (r × r).
    rows: Vec<Vec<BigInt>>,
    width: usize,
}

/// Applies `(x, y) ↦ (s x + t y, u x + v y)` to two vectors mod `m`.
fn combine(x: &mut [BigInt], y: &mut [BigInt], coef: [&BigInt; 4], m: &BigInt) {
    let [s, t, u, v] = coef;
    for (xi, yi) in x.iter_mut().zip(y.iter_mut()) {
        if xi.is_zero() && yi.is_zero() {
            continue;
        }
        let nx = (s * &*xi + t * &*yi).mod_floor(m);
        let ny = (u * &*xi + v * &*yi).mod_floor(m);
        *xi = nx;
        *yi = ny;
    }
}

/// Diagonalizes `a` in place; `tag` receives the same column operations.
fn diagonalize(mut a: Vec<Vec<BigInt>>, tag: &mut [BigInt], modulus: &BigInt) -> Diagonal {
    let r = a.len();
    let width = tag.len();
    let mut rows: Vec<Vec<BigInt>> = (0..r)
        .map(|i| {
            let mut e = vec![BigInt::zero(); r];
            e[i] = BigInt::one();
            e
        })
        .collect();
    let mut diag = Vec::new();

    let col_op = |a: &mut Vec<Vec<BigInt>>, tag: &mut [BigInt], p: usize, j: usize, coef: [&BigInt; 4]| {
        let [s, t, u, v] = coef;
        for row in a.iter_mut() {
            let (x, y) = (row[p].clone(), row[j].clone());
            row[p] = (s * &x + t * &y).mod_floor(modulus);
            row[j] = (u * &x + v * &y).mod_floor(modulus);
        }
        let (x, y) = (tag[p].clone(), tag[j].clone());
        tag[p] = (s * &x + t * &y).mod_floor(modulus);
        tag[j] = (u * &x + v * &y).mod_floor(modulus);
    };

    for p in 0..r.min(width) {
        // pivot search in the remaining block
        let Some((pi, pj)) = (p..r)
            .flat_map(|i| (p..width).map(move |j| (i, j)))
            .find(|&(i, j)| !a[i][j].is_zero())
        else {
            break;
        };
        a.swap(p, pi);
        rows.swap(p, pi);
        if pj != p {
            for row in a.iter_mut() {
                row.swap(p, pj);
            }
            tag.swap(p, pj);
        }
        loop {
            // clear column p below the pivot with row operations
            for i in p + 1..r {
                if a[i][p].is_zero() {
                    continue;
                }
                let (x, y) = (a[p][p].clone(), a[i][p].clone());
                let e = x.extended_gcd(&y);
                let (u, v) = (-(&y / &e.gcd), &x / &e.gcd);
                let (head, tail) = a.split_at_mut(i);
                combine(&mut head[p], &mut tail[0], [&e.x, &e.y, &u, &v], modulus);
                let (head, tail) = rows.split_at_mut(i);
                combine(&mut head[p], &mut tail[0], [&e.x, &e.y, &u, &v], modulus);
            }
            // clear row p to the right with column operations
            for j in p + 1..width {
                if a[p][j].is_zero() {
                    continue;
                }
                let (x, y) = (a[p][p].clone(), a[p][j].clone());
                let e = x.extended_gcd(&y);
                let (u, v) = (-(&y / &e.gcd), &x / &e.gcd);
                col_op(&mut a, tag, p, j, [&e.x, &e.y, &u, &v]);
            }
            if (p + 1..r).all(|i| a[i][p].is_zero()) {
                break;
            }
        }
        diag.push(a[p][p].clone());
    }
    Diagonal {
        modulus: modulus.clone(),
        diag,
        rows,
        width,
    }
}

impl Diagonal {
    /// Modulus of the cyclic factor at coordinate `i` of the quotient.
    fn factor(&self, i: usize) -> BigInt {
        match self.diag.get(i) {
            Some(d) => d.gcd(&self.modulus),
            None => self.modulus.clone(),
        }
    }
}

/// Runs the lattice computation for `h` at one precision.
pub fn analyze(h: &FilteredElement, precision: usize) -> Result<Analysis> {
    let level = h.level();
    let k = h.filtration();
    let n = BigInt::from(level.n());

    let mut ex = Expander::new(level, precision);
    let mut gens: Vec<Monomial> = vec![Monomial::new(0, 0)];
    gens.extend(monomial_basis(k, level).into_iter().filter(|m| m.a + m.b > 0));
    let rows: Vec<Vec<Rational>> = gens.iter().map(|&m| ex.monomial(m).into_coeffs()).collect();
    let reduced = rref(&rows);
    if !reduced.full_rank() {
        return Err(Error::InsufficientPrecision {
            precision,
            reason: format!(
                "constants and weight-{k} forms are linearly dependent on {precision} coefficients"
            ),
        });
    }
    let v = ex.expand(&h.to_form()).into_coeffs();

    let pivots = &reduced.pivots;
    let free: Vec<usize> = (0..precision).filter(|c| !pivots.contains(c)).collect();
    // image of v and of the pivot unit vectors in Q^P / V
    let v_bar: Vec<Rational> = free
        .iter()
        .map(|&c| {
            let mut x = v[c].clone();
            for (row, &p) in reduced.rows.iter().zip(pivots) {
                if !row[c].is_zero() {
                    x -= &v[p] * &row[c];
                }
            }
            x
        })
        .collect();
    let images: Vec<Vec<Rational>> = reduced
        .rows
        .iter()
        .map(|row| free.iter().map(|&c| -row[c].clone()).collect())
        .collect();

    let modulus = v_bar
        .iter()
        .chain(images.iter().flatten())
        .fold(BigInt::one(), |acc, x| acc.lcm(&n_free(x.denom().clone(), &n)));

    let mut target: Vec<BigInt> = v_bar
        .iter()
        .map(|x| to_residue(x, &modulus, &modulus, &n))
        .collect();
    let a: Vec<Vec<BigInt>> = images
        .iter()
        .map(|row| row.iter().map(|x| to_residue(x, &modulus, &modulus, &n)).collect())
        .collect();
    let original = a.clone();
    let original_target = target.clone();
    let dg = diagonalize(a, &mut target, &modulus);

    let mut order = BigInt::one();
    let mut obstruction = None;
    let mut u = vec![BigInt::zero(); images.len()];
    for (i, c) in target.iter().enumerate().take(dg.width) {
        let g = dg.factor(i);
        let o = &g / c.gcd(&g);
        if !o.is_one() {
            obstruction.get_or_insert(Obstruction {
                coordinate: i,
                residue: c.clone(),
                modulus: g.clone(),
            });
        }
        order = order.lcm(&o);
        if i < dg.diag.len() && o.is_one() && !c.is_zero() {
            // u_i d_i ≡ c_i (mod M)
            let d = &dg.diag[i];
            let reduced_mod = &modulus / &g;
            u[i] = (c / &g) * mod_inverse(&(d / &g), &reduced_mod);
        }
    }

    let verdict = match obstruction {
        Some(o) => Verdict::NonMember(o),
        None => {
            // y = u R; then v̄ − Σ y_j R_j is N-integral
            let y: Vec<BigInt> = (0..images.len())
                .map(|j| {
                    u.iter()
                        .zip(&dg.rows)
                        .map(|(ui, row)| ui * &row[j])
                        .sum::<BigInt>()
                        .mod_floor(&modulus)
                })
                .collect();
            debug_assert!((0..original_target.len()).all(|c| {
                let s: BigInt = y.iter().zip(&original).map(|(yj, row)| yj * &row[c]).sum();
                (s - &original_target[c]).mod_floor(&modulus).is_zero()
            }));
            let mut lambda = vec![Rational::zero(); gens.len()];
            for ((yj, &p), t) in y.iter().zip(pivots).zip(&reduced.transform) {
                let w = &v[p] - Rational::from_integer(yj.clone());
                for (l, tl) in lambda.iter_mut().zip(t) {
                    *l += &w * tl;
                }
            }
            let constant = lambda[0].clone();
            let top_form =
                ModularForm::from_terms(level, gens[1..].iter().copied().zip(lambda[1..].iter().cloned()));
            let mut fit = top_form.clone();
            fit = fit.add(&ModularForm::constant(level, constant.clone()))?;
            let remainder: Vec<Rational> = v
                .iter()
                .zip(ex.expand(&fit).coeffs())
                .map(|(a, b)| a - b)
                .collect();
            debug_assert!(QSeries::from_coeffs(remainder.clone())
                .is_n_integral(level.n())
                .unwrap());
            Verdict::Member(Certificate {
                constant,
                top_form,
                remainder: remainder.into_iter().take(8).collect(),
                precision,
            })
        }
    };
    Ok(Analysis {
        precision,
        torsion_order: order,
        verdict,
    })
}

fn analyze_stable(h: &FilteredElement, precision: usize) -> Result<(Analysis, Analysis)> {
    let first = analyze(h, precision)?;
    let second = analyze(h, 2 * precision)?;
    if first.torsion_order != second.torsion_order {
        return Err(Error::PrecisionUnstable {
            precision,
            doubled: 2 * precision,
        });
    }
    Ok((first, second))
}

/// Membership verdict with certificate, confirmed at `2P`.
pub fn certify(h: &FilteredElement, precision: usize) -> Result<Verdict> {
    let (first, second) = analyze_stable(h, precision)?;
    if first.verdict.is_member() != second.verdict.is_member() {
        return Err(Error::PrecisionUnstable {
            precision,
            doubled: 2 * precision,
        });
    }
    Ok(first.verdict)
}

/// True iff `h ∈ D_k + M_0 ⊗ Q + M_k ⊗ Q`, confirmed at `2P`.
pub fn in_indeterminacy(h: &FilteredElement, precision: usize) -> Result<bool> {
    Ok(certify(h, precision)?.is_member())
}

/// `f ≡ g` modulo the indeterminacy of their common filtration.
pub fn congruent(f: &FilteredElement, g: &FilteredElement, precision: usize) -> Result<bool> {
    in_indeterminacy(&f.sub(g)?, precision)
}

/// Least `t ≥ 1` with `t·h` in the indeterminacy, confirmed at `2P`.
pub fn torsion_order(h: &FilteredElement, precision: usize) -> Result<BigInt> {
    Ok(analyze_stable(h, precision)?.0.torsion_order)
}
