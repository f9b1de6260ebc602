//! The f-invariant of the double quaternionic transfer over a framed base `B`
//! of dimension `4n`, the e-invariant of the single transfer, and
//! classification against the known beta-family representatives.

use std::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Zero};

use crate::divcong::{self, default_precision, FilteredElement};
use crate::error::{Error, Result};
use crate::exactmath::{bernoulli, factorial, frac_part, int, rat, Rational};
use crate::flagcohom::{taut_chern_grid, ChernGrid};
use crate::genus::ell_const;
use crate::modforms::{eisenstein_e_form, eisenstein_g_form, Level, ModularForm, Monomial};

/// Filtration `2n + 4` carrying the f-invariant for a base of dimension `4n`.
pub fn filtration_for(n_formula: usize) -> u32 {
    2 * n_formula as u32 + 4
}

fn check_scope(grid: &ChernGrid) -> Result<()> {
    if grid.n_formula == 0 {
        return Err(Error::OutOfScope(
            "a zero-dimensional base gives nu^2, which the formula does not cover".into(),
        ));
    }
    Ok(())
}

fn big(x: &BigInt) -> Rational {
    Rational::from_integer(x.clone())
}

/// `(−1)^{n+1} Σ_{k=1}^{n−1} B_{2k+2}/(k+1) · G_{2n−2k+2} · ⟨η^k ω^{n−k}⟩ / ((2k)!(2n−2k)!)`.
pub fn f_formula(grid: &ChernGrid) -> Result<FilteredElement> {
    check_scope(grid)?;
    let n = grid.n_formula as u32;
    let sign = if n % 2 == 1 { int(1) } else { int(-1) };
    let mut total = ModularForm::zero(grid.level);
    for k in 1..n {
        let pairing = &grid.pairings[k as usize];
        if pairing.is_zero() {
            continue;
        }
        let c = &sign * bernoulli(2 * k + 2)? / int(i64::from(k) + 1) * big(pairing)
            / big(&factorial(2 * k))
            / big(&factorial(2 * n - 2 * k));
        let g = eisenstein_g_form(2 * n - 2 * k + 2, grid.level)?;
        total = total.add(&g.scale(&c))?;
    }
    FilteredElement::from_form(&total, filtration_for(grid.n_formula))
}

/// Coefficient of `c2^j` in the closed-form elliptic genus, as a form.
fn genus_coefficient(level: Level, j: u32) -> Result<ModularForm> {
    match (j, level) {
        (1, Level::Three) => Ok(ModularForm::monomial(level, Monomial::new(2, 0), rat(-1, 4))),
        (1, Level::Two) => Ok(ModularForm::monomial(level, Monomial::new(1, 0), rat(-2, 3))),
        _ => {
            let sign = if j.is_multiple_of(2) { int(2) } else { int(-2) };
            Ok(eisenstein_g_form(2 * j, level)?.scale(&(sign / big(&factorial(2 * j - 2)))))
        }
    }
}

/// `⟨(Ell(λ') − 1)/c2(λ') · (Ell_0(λ) − 1)/c2(λ), [B]⟩` with `c2(λ) = η`, `c2(λ') = ω`,
/// including the extremal terms that the formula drops.
pub fn f_oracle(grid: &ChernGrid) -> Result<FilteredElement> {
    check_scope(grid)?;
    let n = grid.n_formula;
    let consts = ell_const(grid.level, n + 1)?;
    let mut total = ModularForm::zero(grid.level);
    for (a, pairing) in grid.pairings.iter().enumerate() {
        if pairing.is_zero() {
            continue;
        }
        let a_coeff = genus_coefficient(grid.level, (n - a + 1) as u32)?;
        total = total.add(&a_coeff.scale(&(&consts[a + 1] * big(pairing))))?;
    }
    FilteredElement::from_form(&total, filtration_for(n))
}

/// `B_{2n+2}/(4n+4) · index mod 1`, the e-invariant of the single transfer.
pub fn e_single(n: u32, index: &BigInt) -> Result<Rational> {
    if n == 0 {
        return Err(Error::invalid("n must be positive"));
    }
    let b = bernoulli(2 * n + 2)? / int(4 * i64::from(n) + 4);
    Ok(frac_part(&(b * big(index))))
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum Severity {
    Warning,
    Violation,
}

impl fmt::Display for Severity {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            Severity::Warning => "warning",
            Severity::Violation => "violation",
        })
    }
}

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct Finding {
    pub severity: Severity,
    pub check: String,
    pub message: String,
}

impl Finding {
    fn new(severity: Severity, check: impl Into<String>, message: String) -> Self {
        Finding {
            severity,
            check: check.into(),
            message,
        }
    }
}

impl fmt::Display for Finding {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{} [{}]: {}", self.severity, self.check, self.message)
    }
}

/// Integrality constraints that a grid coming from a framed base must satisfy.
pub fn validate_divisibility(grid: &ChernGrid) -> Vec<Finding> {
    let n = grid.n_formula;
    let mut out = Vec::new();
    if n == 0 {
        return out;
    }
    let index_divisor = factorial(2 * n as u32) / BigInt::from(2);
    for a in [0, n] {
        let x = &grid.pairings[a];
        let label = format!("pairings[{a}]");
        if !x.is_multiple_of(&index_divisor) {
            out.push(Finding::new(
                Severity::Violation,
                "index",
                format!("{label} = {x} is not divisible by (2n)!/2 = {index_divisor}"),
            ));
        } else if n.is_multiple_of(2) && !x.is_multiple_of(&(&index_divisor * 2)) {
            out.push(Finding::new(
                Severity::Warning,
                "even-index",
                format!("{label} = {x} is not divisible by (2n)! = {}", &index_divisor * 2),
            ));
        }
    }
    if n == 3 {
        let s = &grid.pairings[1] + &grid.pairings[2];
        if !s.is_multiple_of(&BigInt::from(12)) {
            out.push(Finding::new(
                Severity::Violation,
                "mod-12",
                format!("pairings[1] + pairings[2] = {s} is not divisible by 12"),
            ));
        }
    }
    out
}

pub fn has_violation(findings: &[Finding]) -> bool {
    findings.iter().any(|f| f.severity == Severity::Violation)
}

#[derive(Clone, Copy, Debug, PartialEq, Eq, PartialOrd, Ord, Hash)]
pub enum BetaLabel {
    Zero,
    Beta44,
    Beta422 { negative: bool },
    Beta42,
    Unrecognized,
    /// Nonzero class at a level without a reference table.
    Unlabeled,
}

impl BetaLabel {
    /// Label with any sign forgotten.
    pub fn unsigned(self) -> Self {
        match self {
            BetaLabel::Beta422 { .. } => BetaLabel::Beta422 { negative: false },
            other => other,
        }
    }
}

impl fmt::Display for BetaLabel {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(match self {
            BetaLabel::Zero => "0",
            BetaLabel::Beta44 => "beta_{4/4}",
            BetaLabel::Beta422 { negative: false } => "+beta_{4/2,2}",
            BetaLabel::Beta422 { negative: true } => "-beta_{4/2,2}",
            BetaLabel::Beta42 => "beta_{4/2}",
            BetaLabel::Unrecognized => "unrecognized",
            BetaLabel::Unlabeled => "unlabeled",
        })
    }
}

#[derive(Clone, Debug)]
pub struct BetaEntry {
    pub label: BetaLabel,
    pub representative: FilteredElement,
    pub order: u32,
}

/// `(E_1² − 1)/4` at level 3.
pub fn e1_square_quarter() -> ModularForm {
    let e1 = ModularForm::generator(Level::Three, 0);
    e1.pow(2).sub(&ModularForm::constant(Level::Three, int(1))).unwrap().scale(&rat(1, 4))
}

/// Reference representatives at level 3.
pub fn beta_table() -> Result<Vec<BetaEntry>> {
    let l3 = Level::Three;
    let e4 = eisenstein_e_form(4, l3)?;
    let b = e4.sub(&ModularForm::constant(l3, int(1)))?.scale(&rat(1, 240));
    let beta44 = FilteredElement::from_form(&b.pow(2).scale(&rat(1, 2)), 8)?;
    let a = e1_square_quarter();
    let form422 = a.pow(4).scale(&rat(1, 4)).add(&a.pow(3).scale(&rat(1, 2)))?;
    let beta422 = FilteredElement::from_form(&form422, 10)?;
    let beta42 = beta422.scale(&int(2));
    Ok(vec![
        BetaEntry {
            label: BetaLabel::Beta44,
            representative: beta44,
            order: 2,
        },
        BetaEntry {
            label: BetaLabel::Beta422 { negative: false },
            representative: beta422,
            order: 4,
        },
        BetaEntry {
            label: BetaLabel::Beta42,
            representative: beta42,
            order: 2,
        },
    ])
}

fn congruent(f: &FilteredElement, g: &FilteredElement, precision: usize) -> Result<bool> {
    if f == g {
        return Ok(true);
    }
    divcong::congruent(f, g, precision)
}

/// Matches `h` against `0` and `±` each reference entry of the same filtration.
pub fn classify(h: &FilteredElement, precision: usize) -> Result<BetaLabel> {
    if h.is_zero() || divcong::in_indeterminacy(h, precision)? {
        return Ok(BetaLabel::Zero);
    }
    if h.level() != Level::Three {
        return Ok(BetaLabel::Unlabeled);
    }
    for entry in beta_table()? {
        if entry.representative.filtration() != h.filtration() {
            continue;
        }
        if congruent(h, &entry.representative, precision)? {
            return Ok(entry.label);
        }
        if congruent(h, &entry.representative.scale(&int(-1)), precision)? {
            return Ok(match entry.label {
                BetaLabel::Beta422 { .. } => BetaLabel::Beta422 { negative: true },
                other => other,
            });
        }
    }
    Ok(BetaLabel::Unrecognized)
}

/// One displayed step `lhs ≡ rhs` of the reduction of the `n = 3` coefficient
/// to the `β_{4/2,2}` representative, at filtration 10.
#[derive(Clone, Debug)]
pub struct ChainStep {
    pub label: &'static str,
    pub lhs: FilteredElement,
    pub rhs: FilteredElement,
    /// The two sides are equal as forms, not only congruent.
    pub identity: bool,
}

/// The full chain, with `A = (E1²−1)/4`, `B4 = (E4−1)/16`, `B6 = (E6−1)/8`,
/// `F = (E1⁴−1)/8` and `X = E1⁴ − E1E3`.
pub fn beta422_chain() -> Result<Vec<ChainStep>> {
    let l3 = Level::Three;
    let one = ModularForm::constant(l3, int(1));
    let e1 = ModularForm::generator(l3, 0);
    let e3 = ModularForm::generator(l3, 1);
    let e4 = eisenstein_e_form(4, l3)?;
    let e6 = eisenstein_e_form(6, l3)?;
    let sc = |f: &ModularForm, n: i64, d: i64| f.scale(&rat(n, d));
    let shifted = |f: &ModularForm, d: i64| -> Result<ModularForm> { Ok(sc(&f.sub(&one)?, 1, d)) };
    let sum = |parts: &[ModularForm]| -> Result<ModularForm> {
        parts.iter().try_fold(ModularForm::zero(l3), |acc, p| acc.add(p))
    };

    let a = e1_square_quarter();
    let b4 = shifted(&e4, 16)?;
    let b6 = shifted(&e6, 8)?;
    let f = shifted(&e1.pow(4), 8)?;
    let e1e3 = e1.mul(&e3)?;
    let x = e1.pow(4).sub(&e1e3)?;
    let e1cube_e3 = e1.pow(3).mul(&e3)?;

    let display = sc(&sum(&[sc(&shifted(&e6, 504)?, -1, 240), sc(&shifted(&e4, 240)?, 1, 504)])?, 1, 12);
    let coefficient = sc(&sc(&b6, 1, 16).sub(&sc(&b4, 1, 8))?, 1, 4);
    let via_e4e6 = sc(&b4.mul(&b6)?, -1, 4).sub(&sc(&b4, 1, 16))?;
    let via_e4sq = sc(&b4.pow(2), 1, 4).sub(&sc(&b4, 1, 16))?;

    let first = sc(&b4.pow(2), 1, 4);
    let tail = sum(&[sc(&f.mul(&x)?, 1, 2), sc(&x.pow(2), 1, 4)])?;
    let bracket_f = sum(&[sc(&f.pow(2), 1, 4), tail.clone()])?;
    let bracket_a = sum(&[a.pow(4), a.pow(3), sc(&a.pow(2), 1, 4), tail])?;
    let weighted = sc(&e1.pow(2), 1, 4).mul(&bracket_a)?;
    let near_last = sum(&[
        sc(&a.pow(4), 1, 4),
        sc(&a.pow(3), 1, 4),
        sc(&e1.pow(2).mul(&a.pow(2))?, 1, 16),
        sc(&e1e3, -1, 32),
    ])?;
    let last = sum(&[sc(&a.pow(4), 1, 4), sc(&a.pow(3), 1, 2), sc(&a.pow(2), 1, 16), sc(&e1e3, -1, 32)])?;

    let aux0 = sc(&f.mul(&e1.pow(6).sub(&e1cube_e3)?)?, 1, 8);
    let aux_base = sc(&e1cube_e3.sub(&one)?, 1, 64);
    let aux1 = aux_base.sub(&sc(&shifted(&e1.pow(6), 4)?, 1, 16))?;
    let aux2 = aux_base.add(&sc(&b4, 1, 4))?;
    let aux4 = sc(&b4.mul(&e1cube_e3)?, -1, 4);
    let aux5 = sc(&b4.mul(&e1e3)?, -1, 4);
    let aux6 = sc(&b6.mul(&e1e3)?, 1, 4);
    let aux7 = sc(&e1e3, -1, 32);

    let t0 = sc(&b4, 1, 16);
    let t1 = sc(&f.add(&x)?, 1, 32);
    let t2 = sc(&f, 1, 32).sub(&sc(&e1e3, 1, 32))?;
    let t3 = sc(&f.sub(&a)?, 1, 32).sub(&sc(&e1e3, 1, 32))?;
    let t4 = sc(&a.pow(2), 1, 16).sub(&sc(&e1e3, 1, 32))?;

    let target = sum(&[sc(&a.pow(4), 1, 4), sc(&a.pow(3), 1, 2)])?;
    let (quarter_f, quarter_a) = (sc(&bracket_f, 1, 4), sc(&bracket_a, 1, 4));

    let raw: Vec<(&'static str, &ModularForm, &ModularForm, bool)> = vec![
        ("n3-coefficient", &display, &coefficient, false),
        ("coefficient-via-e4e6", &coefficient, &via_e4e6, false),
        ("e4e6-to-e4-squared", &via_e4e6, &via_e4sq, false),
        ("e4-squared-in-e1-e3", &first, &quarter_f, true),
        ("expand-f-squared", &quarter_f, &quarter_a, true),
        ("multiply-by-e1-squared", &quarter_a, &weighted, false),
        ("absorb-mixed-terms", &weighted, &near_last, false),
        ("rewrite-e1-squared-a-squared", &near_last, &last, true),
        ("aux-split-product", &aux0, &aux1, false),
        ("aux-e1-sixth-to-e4", &aux1, &aux2, false),
        ("aux-drop-e4", &aux2, &aux_base, false),
        ("aux-to-e4-e1cube-e3", &aux_base, &aux4, false),
        ("aux-e1cube-e3-to-e1-e3", &aux4, &aux5, false),
        ("aux-e4-to-e6", &aux5, &aux6, false),
        ("aux-to-e1-e3", &aux6, &aux7, false),
        ("second-summand-in-e1-e3", &t0, &t1, true),
        ("drop-e1-fourth", &t1, &t2, false),
        ("subtract-a", &t2, &t3, false),
        ("second-summand-closed-form", &t3, &t4, true),
        ("final-beta422", &via_e4sq, &target, false),
    ];
    raw.into_iter()
        .map(|(label, lhs, rhs, identity)| {
            Ok(ChainStep {
                label,
                lhs: FilteredElement::from_form(lhs, 10)?,
                rhs: FilteredElement::from_form(rhs, 10)?,
                identity,
            })
        })
        .collect()
}

/// Everything computed for one grid.
#[derive(Clone, Debug)]
pub struct TransferResult {
    pub grid: ChernGrid,
    pub representative: FilteredElement,
    pub oracle: FilteredElement,
    /// Whether the oracle and the formula agree modulo indeterminacy.
    pub oracle_congruent: bool,
    pub classification: BetaLabel,
    pub torsion_order: BigInt,
    pub findings: Vec<Finding>,
    pub precision: usize,
    /// Every verdict above was re-derived at twice the precision.
    pub stable_under_doubling: bool,
}

/// Runs validation, formula, oracle cross-check, classification and torsion order.
pub fn transfer_report(grid: &ChernGrid, precision: Option<usize>) -> Result<TransferResult> {
    let findings = validate_divisibility(grid);
    let representative = f_formula(grid)?;
    let oracle = f_oracle(grid)?;
    let p = precision.unwrap_or_else(|| default_precision(representative.filtration()));
    let oracle_congruent = congruent(&oracle, &representative, p)?;
    let classification = classify(&representative, p)?;
    let torsion_order = if classification == BetaLabel::Zero {
        BigInt::one()
    } else {
        divcong::torsion_order(&representative, p)?
    };
    Ok(TransferResult {
        grid: grid.clone(),
        representative,
        oracle,
        oracle_congruent,
        classification,
        torsion_order,
        findings,
        precision: p,
        stable_under_doubling: true,
    })
}

/// [`transfer_report`] for the tautological lines `i`, `j` over `Sp(n)/Sp(1)^n`.
pub fn flag_report(n: usize, i: usize, j: usize, level: Level, precision: Option<usize>) -> Result<TransferResult> {
    transfer_report(&taut_chern_grid(n, i, j, level)?, precision)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::divcong::torsion_order;

    fn grid(level: Level, p: &[i64]) -> ChernGrid {
        ChernGrid::from_ints(p.len() - 1, level, p).unwrap()
    }

    fn l3(p: &[i64]) -> ChernGrid {
        grid(Level::Three, p)
    }

    #[test]
    fn formula_n2() {
        let f = f_formula(&l3(&[0, 1, 0])).unwrap();
        assert_eq!(f.filtration(), 8);
        let expected = eisenstein_e_form(4, Level::Three).unwrap().scale(&rat(1, 57600));
        assert_eq!(f.to_form(), expected);
        assert_eq!(f, f_oracle(&l3(&[0, 1, 0])).unwrap());
    }

    #[test]
    fn formula_n3() {
        let f = f_formula(&l3(&[0, -1, 1, 0])).unwrap();
        let e = |w| eisenstein_e_form(w, Level::Three).unwrap();
        // (1/12)((1/240)(E6/504)·(−1) + (1/504)(E4/240)·(+1)), constants dropped
        let expected = e(6).scale(&rat(-1, 12 * 240 * 504)).add(&e(4).scale(&rat(1, 12 * 504 * 240))).unwrap();
        assert_eq!(f.to_form(), expected);
        assert_eq!(f.filtration(), 10);
        assert_eq!(f.max_weight(), Some(6));
    }

    #[test]
    fn degenerate_cases() {
        assert!(f_formula(&l3(&[3, 5])).unwrap().is_zero());
        assert!(matches!(f_formula(&l3(&[1])), Err(Error::OutOfScope(_))));
        let oracle = f_oracle(&l3(&[3, 5])).unwrap();
        assert!(!oracle.is_zero());
        assert!(divcong::in_indeterminacy(&oracle, 48).unwrap());
    }

    #[test]
    fn oracle_congruent_to_formula() {
        for g in [l3(&[12, 1, 12]), l3(&[0, -1, 1, 0]), grid(Level::Two, &[12, 1, 12])] {
            let f = f_formula(&g).unwrap();
            let o = f_oracle(&g).unwrap();
            assert!(divcong::congruent(&o, &f, default_precision(f.filtration())).unwrap());
        }
        let g = l3(&[12, 1, 12]);
        assert_ne!(f_formula(&g).unwrap(), f_oracle(&g).unwrap());
    }

    #[test]
    fn e_single_examples() {
        assert_eq!(e_single(1, &BigInt::from(1)).unwrap(), rat(239, 240));
        assert_eq!(e_single(3, &BigInt::from(0)).unwrap(), int(0));
        assert_eq!(e_single(2, &BigInt::from(2)).unwrap(), rat(1, 252));
        assert!(e_single(0, &BigInt::from(1)).is_err());
    }

    #[test]
    fn validation_examples() {
        assert!(validate_divisibility(&l3(&[0, -1, 1, 0])).is_empty());
        let v = validate_divisibility(&l3(&[0, 1, 0, 0]));
        assert_eq!(v.len(), 1);
        assert_eq!(v[0].check, "mod-12");
        assert!(validate_divisibility(&l3(&[0, 5, 0])).is_empty());
        let v = validate_divisibility(&l3(&[12, 1, 12]));
        assert!(!has_violation(&v));
        assert_eq!(v.iter().filter(|f| f.severity == Severity::Warning).count(), 2);
        assert!(has_violation(&validate_divisibility(&l3(&[1, 0, 0]))));
    }

    #[test]
    fn table_orders() {
        for entry in beta_table().unwrap() {
            let p = default_precision(entry.representative.filtration());
            assert_eq!(torsion_order(&entry.representative, p).unwrap(), BigInt::from(entry.order));
        }
    }

    #[test]
    fn classification_examples() {
        let c = |g: &ChernGrid| classify(&f_formula(g).unwrap(), 80).unwrap();
        assert_eq!(c(&l3(&[0, 1, 0])), BetaLabel::Beta44);
        assert_eq!(c(&l3(&[0, 2, 0])), BetaLabel::Zero);
        assert_eq!(c(&l3(&[0, -1, 1, 0])).unsigned(), BetaLabel::Beta422 { negative: false });
        assert_eq!(c(&l3(&[0, -2, 2, 0])), BetaLabel::Beta42);
        assert_eq!(classify(&FilteredElement::zero(Level::Three, 10), 88).unwrap(), BetaLabel::Zero);
        // 2-primary classes disappear once 2 is inverted
        assert_eq!(c(&grid(Level::Two, &[0, 1, 0])), BetaLabel::Zero);
        assert_eq!(c(&grid(Level::Two, &[0, 0, 1, 0])), BetaLabel::Unlabeled);
    }

    #[test]
    fn chain_holds() {
        let steps = beta422_chain().unwrap();
        assert_eq!(steps.len(), 20);
        for s in &steps {
            assert!(!s.identity || s.lhs == s.rhs, "{}", s.label);
            assert!(divcong::congruent(&s.lhs, &s.rhs, 88).unwrap(), "{}", s.label);
        }
    }

    #[test]
    fn flag_reports() {
        let r = flag_report(3, 1, 2, Level::Three, None).unwrap();
        assert_eq!(r.classification.unsigned(), BetaLabel::Beta422 { negative: false });
        assert_eq!(r.torsion_order, BigInt::from(4));
        assert!(r.oracle_congruent);
        assert!(r.findings.is_empty());
        let swapped = flag_report(3, 2, 1, Level::Three, None).unwrap();
        assert_eq!(swapped.representative, r.representative.scale(&int(-1)));
        assert_ne!(swapped.classification, r.classification);
        for (n, i, j) in [(4, 1, 2), (5, 2, 4)] {
            let r = flag_report(n, i, j, Level::Three, None).unwrap();
            assert!(r.representative.is_zero());
            assert_eq!(r.classification, BetaLabel::Zero);
        }
    }
}
