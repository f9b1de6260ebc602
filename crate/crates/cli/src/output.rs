//! JSON report types. Every exact number is a string: `"p/q"` or `"p"`.

use num_bigint::BigInt;
use quatf_core::divcong::FilteredElement;
use quatf_core::exactmath::fmt_rational;
use quatf_core::transfer::TransferResult;
use quatf_core::{Finding, ModularForm, QSeries, Rational};
use serde::Serialize;

/// Number of q-coefficients printed per representative component.
pub const EXPANSION_TERMS: usize = 12;

pub const ORIENTATION: &str = "<t1^(n-1)*t2^(n-2)*...*t(n-1), [F]> = +1";

pub fn rationals(xs: &[Rational]) -> Vec<String> {
    xs.iter().map(fmt_rational).collect()
}

#[derive(Serialize)]
pub struct SeriesOut {
    pub name: String,
    pub precision: usize,
    pub coefficients: Vec<String>,
}

impl SeriesOut {
    pub fn new(name: impl Into<String>, s: &QSeries) -> Self {
        SeriesOut {
            name: name.into(),
            precision: s.precision(),
            coefficients: rationals(s.coeffs()),
        }
    }
}

#[derive(Serialize)]
pub struct TermOut {
    pub monomial: String,
    pub coefficient: String,
}

#[derive(Serialize)]
pub struct ComponentOut {
    pub weight: u32,
    pub coordinates: Vec<TermOut>,
    pub expansion: Vec<String>,
}

pub fn components(h: &FilteredElement) -> Vec<ComponentOut> {
    h.components()
        .iter()
        .map(|(&w, f)| ComponentOut {
            weight: w,
            coordinates: terms(f),
            expansion: rationals(f.expand(EXPANSION_TERMS).coeffs()),
        })
        .collect()
}

pub fn terms(f: &ModularForm) -> Vec<TermOut> {
    f.terms()
        .iter()
        .map(|(&m, c)| TermOut {
            monomial: m.render(f.level()),
            coefficient: fmt_rational(c),
        })
        .collect()
}

#[derive(Serialize)]
pub struct GridOut {
    pub n: usize,
    pub level: u32,
    pub pairings: Vec<String>,
}

#[derive(Serialize)]
pub struct FindingOut {
    pub severity: String,
    pub check: String,
    pub message: String,
}

impl From<&Finding> for FindingOut {
    fn from(f: &Finding) -> Self {
        FindingOut {
            severity: f.severity.to_string(),
            check: f.check.clone(),
            message: f.message.clone(),
        }
    }
}

#[derive(Serialize)]
pub struct TransferReport {
    pub input: GridOut,
    pub filtration: u32,
    pub representative: Vec<ComponentOut>,
    pub expansion_terms: usize,
    pub oracle_congruent: bool,
    pub classification: String,
    pub torsion_order: String,
    pub validation: Vec<FindingOut>,
    pub precision_used: usize,
    pub stable_under_doubling: bool,
    pub orientation: &'static str,
}

impl From<&TransferResult> for TransferReport {
    fn from(r: &TransferResult) -> Self {
        TransferReport {
            input: GridOut {
                n: r.grid.n_formula,
                level: r.grid.level.n(),
                pairings: r.grid.pairings.iter().map(BigInt::to_string).collect(),
            },
            filtration: r.representative.filtration(),
            representative: components(&r.representative),
            expansion_terms: EXPANSION_TERMS,
            oracle_congruent: r.oracle_congruent,
            classification: r.classification.to_string(),
            torsion_order: r.torsion_order.to_string(),
            validation: r.findings.iter().map(FindingOut::from).collect(),
            precision_used: r.precision,
            stable_under_doubling: r.stable_under_doubling,
            orientation: ORIENTATION,
        }
    }
}

impl TransferReport {
    pub fn render(&self) -> String {
        let mut out = Vec::new();
        out.push(format!(
            "grid: n = {}, level = {}, pairings = [{}]",
            self.input.n,
            self.input.level,
            self.input.pairings.join(", ")
        ));
        out.push(format!("filtration: {}", self.filtration));
        if self.representative.is_empty() {
            out.push("representative: 0".into());
        }
        for c in &self.representative {
            let coords: Vec<String> = c
                .coordinates
                .iter()
                .map(|t| format!("({})*{}", t.coefficient, t.monomial))
                .collect();
            out.push(format!("weight {}: {}", c.weight, coords.join(" + ")));
        }
        out.push(format!("oracle congruent: {}", self.oracle_congruent));
        out.push(format!("classification: {}", self.classification));
        out.push(format!("torsion order: {}", self.torsion_order));
        if self.validation.is_empty() {
            out.push("validation: ok".into());
        }
        for f in &self.validation {
            out.push(format!("validation {} [{}]: {}", f.severity, f.check, f.message));
        }
        out.push(format!(
            "precision: {} (stable under doubling: {})",
            self.precision_used, self.stable_under_doubling
        ));
        out.push(format!("orientation: {}", self.orientation));
        out.join("\n")
    }
}

#[derive(Serialize, Clone, Copy, PartialEq, Eq, Debug)]
#[serde(rename_all = "lowercase")]
pub enum Status {
    Pass,
    Fail,
    Error,
}

#[derive(Serialize, Debug)]
pub struct VerificationItem {
    pub id: String,
    pub anchor: String,
    pub status: Status,
    pub details: String,
}

#[derive(Serialize)]
pub struct VerificationReport {
    pub items: Vec<VerificationItem>,
    pub passed: usize,
    pub failed: usize,
    pub errors: usize,
}
