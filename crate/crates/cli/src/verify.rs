//! The reproduction suite behind `verify-paper`.

use num_bigint::BigInt;
use quatf_core::divcong::{congruent, default_precision, in_indeterminacy, torsion_order, FilteredElement};
use quatf_core::exactmath::{int, rat};
use quatf_core::flagcohom::{reduce, top_pairing};
use quatf_core::genus::{char_series_level3, ell_closed, ell_oracle_level3, even_product, g_star};
use quatf_core::modforms::{eisenstein_e, eisenstein_e_form, level_generator};
use quatf_core::transfer::{
    beta422_chain, beta_table, classify, e_single, f_formula, f_oracle, flag_report, validate_divisibility, Severity,
};
use quatf_core::{BetaLabel, ChernGrid, CoinvariantPoly, Generator, Level, ModularForm, QSeries, Result};

use crate::output::{Status, VerificationItem};

/// `Ok(None)` is a pass; `Ok(Some(why))` a failure.
type Check = Result<Option<String>>;

fn require(cond: bool, why: impl FnOnce() -> String) -> Check {
    Ok((!cond).then(why))
}

fn all(checks: impl IntoIterator<Item = Check>) -> Check {
    for c in checks {
        if let Some(why) = c? {
            return Ok(Some(why));
        }
    }
    Ok(None)
}

struct Suite {
    prec: Option<usize>,
    items: Vec<VerificationItem>,
}

impl Suite {
    fn congruence_precision(&self, filtration: u32) -> usize {
        self.prec.unwrap_or_else(|| default_precision(filtration))
    }

    fn series_precision(&self, default: usize) -> usize {
        self.prec.unwrap_or(default)
    }

    fn record(&mut self, id: &str, anchor: &str, claim: &str, check: Check) {
        let (status, details) = match check {
            Ok(None) => (Status::Pass, claim.to_string()),
            Ok(Some(why)) => (Status::Fail, format!("{claim}: {why}")),
            Err(e) => (Status::Error, format!("{claim}: {e}")),
        };
        self.items.push(VerificationItem {
            id: id.to_string(),
            anchor: anchor.to_string(),
            status,
            details,
        });
    }
}

fn grid(p: &[i64]) -> ChernGrid {
    ChernGrid::from_ints(p.len() - 1, Level::Three, p).expect("fixed grid")
}

fn l3_form(f: &ModularForm, k: u32) -> Result<FilteredElement> {
    FilteredElement::from_form(f, k)
}

/// `Π_{n≥1} (1 − q^{tn})` to precision `p`.
fn euler_product(t: usize, p: usize) -> QSeries {
    let mut out = QSeries::one(p);
    for n in (1..).map(|n| n * t).take_while(|&m| m < p) {
        let mut coeffs = vec![int(0); p];
        coeffs[0] = int(1);
        coeffs[n] = int(-1);
        out = &out * &QSeries::from_coeffs(coeffs);
    }
    out
}

/// `1/s` for a series with constant term 1.
fn reciprocal(s: &QSeries) -> QSeries {
    let p = s.precision();
    let mut inv = vec![int(0); p];
    inv[0] = int(1);
    for n in 1..p {
        let mut acc = int(0);
        for k in 1..=n {
            acc -= s.coeffs()[k].clone() * &inv[n - k];
        }
        inv[n] = acc;
    }
    QSeries::from_coeffs(inv)
}

/// Theta series `Σ q^{m² + mn + n²}` of the hexagonal lattice.
fn hexagonal_theta(p: usize) -> QSeries {
    let mut coeffs = vec![int(0); p];
    let r = p as i64;
    for m in -r..=r {
        for n in -r..=r {
            let v = m * m + m * n + n * n;
            if v < r {
                coeffs[v as usize] += int(1);
            }
        }
    }
    QSeries::from_coeffs(coeffs)
}

fn beta44_identity(s: &mut Suite) {
    let p = s.congruence_precision(8);
    let check = (|| {
        let e4 = eisenstein_e_form(4, Level::Three)?;
        let b = e4.sub(&ModularForm::constant(Level::Three, int(1)))?.scale(&rat(1, 240));
        let lhs = l3_form(&b.scale(&rat(1, 240)), 8)?;
        let rhs = l3_form(&b.pow(2).scale(&rat(1, 2)), 8)?;
        require(congruent(&lhs, &rhs, p)?, || "not congruent".into())
    })();
    s.record(
        "01-beta44-identity",
        "Proposition (i)",
        "(1/240)(E4-1)/240 == (1/2)((E4-1)/240)^2 mod D_8",
        check,
    );
}

fn chain(s: &mut Suite) {
    let p = s.congruence_precision(10);
    let steps = match beta422_chain() {
        Ok(steps) => steps,
        Err(e) => return s.record("02-chain", "Proposition (ii)", "congruence chain", Err(e)),
    };
    for (i, step) in steps.iter().enumerate() {
        let check = (|| {
            if step.identity && step.lhs != step.rhs {
                return Ok(Some("sides differ as forms".into()));
            }
            require(congruent(&step.lhs, &step.rhs, p)?, || "not congruent".into())
        })();
        let kind = if step.identity { "identity" } else { "congruence" };
        s.record(
            &format!("02-chain-{:02}-{}", i + 1, step.label),
            "Proposition (ii)",
            &format!("{kind} at filtration 10"),
            check,
        );
    }
    let check = (|| {
        let start = &steps[0].lhs;
        require(!in_indeterminacy(start, p)?, || "the chain starts at a trivial class".into())
    })();
    s.record("02-chain-zz-nontrivial", "Proposition (ii)", "chain start is nonzero mod D_10", check);
}

fn orders(s: &mut Suite) {
    let table = match beta_table() {
        Ok(t) => t,
        Err(e) => return s.record("03-orders", "Proposition (ii)", "reference table", Err(e)),
    };
    for entry in table.iter().filter(|e| e.label != BetaLabel::Beta42) {
        let h = &entry.representative;
        let p = s.congruence_precision(h.filtration());
        let check = torsion_order(h, p)
            .map(|o| (o != BigInt::from(entry.order)).then(|| format!("order {o}")));
        let (id, anchor) = match entry.label {
            BetaLabel::Beta44 => ("03-order-beta44", "Proposition (i)"),
            _ => ("03-order-beta422", "Proposition (ii)"),
        };
        s.record(id, anchor, &format!("{} has order {}", entry.label, entry.order), check);
    }
}

fn parity(s: &mut Suite) {
    let p = s.congruence_precision(8);
    for (pairings, expected, id) in [
        ([0, 1, 0], BetaLabel::Beta44, "04-parity-odd"),
        ([0, 2, 0], BetaLabel::Zero, "04-parity-even"),
    ] {
        let check = (|| {
            let label = classify(&f_formula(&grid(&pairings))?, p)?;
            require(label == expected, || format!("classified as {label}"))
        })();
        s.record(id, "Corollary 1 (i)", &format!("grid {pairings:?} is {expected}"), check);
    }
}

fn flags(s: &mut Suite) {
    let check = (|| {
        let r = flag_report(3, 1, 2, Level::Three, s.prec)?;
        all([
            require(r.classification.unsigned() == BetaLabel::Beta422 { negative: false }, || {
                format!("classified as {}", r.classification)
            }),
            require(r.torsion_order == BigInt::from(4), || format!("order {}", r.torsion_order)),
            require(r.oracle_congruent, || "oracle disagrees".into()),
        ])
    })();
    s.record(
        "05-flag-sp3",
        "Corollary 1 (ii)",
        "Sp(3)/Sp(1)^3 with lines (1,2) gives +-beta_{4/2,2} of order 4",
        check,
    );
    for n in [4usize, 5] {
        let check = (|| {
            for i in 1..=n {
                for j in (1..=n).filter(|&j| j != i) {
                    let r = flag_report(n, i, j, Level::Three, s.prec)?;
                    if !r.representative.is_zero() || r.classification != BetaLabel::Zero {
                        return Ok(Some(format!("lines ({i},{j}) give {}", r.classification)));
                    }
                }
            }
            Ok(None)
        })();
        s.record(
            &format!("06-flag-sp{n}"),
            "Corollary 2",
            &format!("Sp({n})/Sp(1)^{n} gives 0 for every pair of lines"),
            check,
        );
    }
    let check = (|| {
        let p = |n, text| CoinvariantPoly::parse(n, text);
        all([
            require(reduce(&p(4, "t1^4")?).is_zero(), || "t1^4 != 0".into()),
            require(reduce(&p(4, "t1^3*t2^3")?).is_zero(), || "t1^3*t2^3 != 0".into()),
            require(reduce(&p(3, "t1*t2^2 + t1^2*t2")?).is_zero(), || "t1*t2^2 != -t1^2*t2".into()),
            require(top_pairing(&p(3, "t1^2*t2")?) == BigInt::from(1), || "orientation".into()),
        ])
    })();
    s.record(
        "06-cohomology-relations",
        "Corollary 2",
        "t1^4 = t1^3*t2^3 = 0 for n = 4 and t1*t2^2 = -t1^2*t2 for n = 3",
        check,
    );
}

fn lemma(s: &mut Suite) {
    let p = s.series_precision(48);
    let check = (|| {
        let oracle = ell_oracle_level3(6, p)?;
        let closed = ell_closed(Level::Three, 6, p)?;
        let e1 = level_generator(Level::Three, Generator::E1, p)?;
        let e3 = level_generator(Level::Three, Generator::E3, p)?;
        // η(τ)⁹/η(3τ)³, without the q-power since 9/24 − 9/24 = 0
        let eta_quotient = &euler_product(1, p).pow(9) * &reciprocal(&euler_product(3, p).pow(3));
        all([
            require(oracle == closed, || "genus oracle differs from closed form".into()),
            require(e1 == hexagonal_theta(p), || "E1 differs from the hexagonal theta series".into()),
            require(e3 == eta_quotient, || "E3 differs from eta(tau)^9/eta(3tau)^3".into()),
        ])
    })();
    s.record(
        "07-lemma-oracle",
        "Lemma",
        &format!("genus series equals its closed form to c2^6 and the weight 1, 3 generators match their oracles, precision {p}"),
        check,
    );
    let check = (|| {
        let q = char_series_level3(4, p)?;
        let closed = ell_closed(Level::Three, 2, p)?;
        for (j, c) in even_product(&q).iter().enumerate() {
            let (re, im) = c.parts();
            if !im.is_zero() {
                return Ok(Some(format!("sqrt(-3) part of x^{j} is nonzero")));
            }
            let expected = if j % 2 == 1 {
                QSeries::zero(p)
            } else if (j / 2) % 2 == 0 {
                closed.coeffs[j / 2].clone()
            } else {
                -&closed.coeffs[j / 2]
            };
            if re != expected {
                return Ok(Some(format!("x^{j} coefficient differs")));
            }
        }
        Ok(None)
    })();
    s.record("07-lemma-char-series", "Lemma", "Q(x)Q(-x) matches the genus to x^4", check);
}

fn eisenstein(s: &mut Suite) {
    let p = s.series_precision(64);
    let check = (|| {
        let e1 = level_generator(Level::Three, Generator::E1, p)?;
        require(&e1 * &e1 == g_star(2, p)?.scale(&int(12)), || "identity fails".into())
    })();
    s.record("08-eisenstein-e1-squared", "Lemma", &format!("E1^2 = 12(G2(tau) - 3G2(3tau)) to precision {p}"), check);
    let check = (|| {
        let e1 = level_generator(Level::Three, Generator::E1, p)?;
        let e3 = level_generator(Level::Three, Generator::E3, p)?;
        let rhs = &e1.pow(4).scale(&int(9)) - &(&e1 * &e3).scale(&int(8));
        require(eisenstein_e(4, p)? == rhs, || "identity fails".into())
    })();
    s.record("08-eisenstein-e4", "Lemma", &format!("E4 = 9E1^4 - 8E1E3 to precision {p}"), check);
}

fn theorem(s: &mut Suite) {
    let check = (|| {
        for p in [[0, 0], [1, 0], [5, -7]] {
            if !f_formula(&grid(&p))?.is_zero() {
                return Ok(Some(format!("grid {p:?} is nonzero")));
            }
        }
        Ok(None)
    })();
    s.record("09-theorem-empty-sum", "Theorem", "n = 1 gives the zero element", check);
    let check = (|| {
        let f = f_formula(&grid(&[0, 1, 0]))?;
        let expected = eisenstein_e_form(4, Level::Three)?.scale(&rat(1, 57600));
        require(f.to_form() == expected, || format!("got {}", f.to_form()))
    })();
    s.record("09-theorem-n2-value", "Theorem", "grid [0,1,0] gives E4/57600", check);
    for (id, pairings) in [("09-theorem-oracle-n2", &[12, 1, 12][..]), ("09-theorem-oracle-n3", &[0, -1, 1, 0][..])] {
        let check = (|| {
            let g = grid(pairings);
            let (f, o) = (f_formula(&g)?, f_oracle(&g)?);
            let p = s.congruence_precision(f.filtration());
            require(congruent(&o, &f, p)?, || "oracle and formula differ".into())
        })();
        s.record(id, "Theorem", &format!("oracle == formula for grid {pairings:?}"), check);
    }
    let check = {
        let bad = validate_divisibility(&grid(&[0, 1, 0, 0]));
        let good = validate_divisibility(&grid(&[0, -1, 1, 0]));
        all([
            require(bad.iter().any(|f| f.severity == Severity::Violation && f.check == "mod-12"), || {
                "[0,1,0,0] not flagged".into()
            }),
            require(good.is_empty(), || "[0,-1,1,0] flagged".into()),
        ])
    };
    s.record("09-theorem-divisibility", "Proposition (ii)", "12 | <eta^2 omega + eta omega^2> is enforced", check);
    let check = (|| {
        all([
            require(e_single(1, &BigInt::from(1))? == rat(239, 240), || "e(1, 1)".into()),
            require(e_single(2, &BigInt::from(2))? == rat(1, 252), || "e(2, 2)".into()),
        ])
    })();
    s.record("09-theorem-e-invariant", "Theorem", "e-invariant of the single transfer", check);
}

/// Runs every item in a fixed order; ids sort in that order.
pub fn run_verify_paper(prec: Option<usize>) -> Vec<VerificationItem> {
    let mut suite = Suite {
        prec,
        items: Vec::new(),
    };
    beta44_identity(&mut suite);
    chain(&mut suite);
    orders(&mut suite);
    parity(&mut suite);
    flags(&mut suite);
    lemma(&mut suite);
    eisenstein(&mut suite);
    theorem(&mut suite);
    suite.items.sort_by(|a, b| a.id.cmp(&b.id));
    suite.items
}
