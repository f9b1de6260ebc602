#![allow(dead_code)]

use std::collections::BTreeMap;

use num_bigint::BigInt;
use num_traits::{One, Zero};
use quatf_core::divcong::FilteredElement;
use quatf_core::exactmath::{int, rat};
use quatf_core::modforms::eisenstein_e_form;
use quatf_core::{CoinvariantPoly, Level, ModularForm, Rational};

pub const L3: Level = Level::Three;

pub fn e1() -> ModularForm {
    ModularForm::generator(L3, 0)
}

pub fn e3() -> ModularForm {
    ModularForm::generator(L3, 1)
}

pub fn one() -> ModularForm {
    ModularForm::constant(L3, int(1))
}

pub fn e(w: u32) -> ModularForm {
    eisenstein_e_form(w, L3).unwrap()
}

pub fn add(a: &ModularForm, b: &ModularForm) -> ModularForm {
    a.add(b).unwrap()
}

pub fn sub(a: &ModularForm, b: &ModularForm) -> ModularForm {
    a.sub(b).unwrap()
}

pub fn mul(a: &ModularForm, b: &ModularForm) -> ModularForm {
    a.mul(b).unwrap()
}

pub fn sc(f: &ModularForm, n: i64, d: i64) -> ModularForm {
    f.scale(&rat(n, d))
}

/// `(f − 1)/d`
pub fn shifted(f: &ModularForm, d: i64) -> ModularForm {
    sc(&sub(f, &one()), 1, d)
}

pub fn elem(f: &ModularForm, k: u32) -> FilteredElement {
    FilteredElement::from_form(f, k).unwrap()
}

fn violation(e: &[u32]) -> bool {
    let n = e.len();
    e.iter().enumerate().any(|(i, &a)| a as usize > n - 1 - i)
}

fn monomials(n: usize, d: u32) -> Vec<Vec<u32>> {
    if n == 1 {
        return vec![vec![d]];
    }
    (0..=d)
        .flat_map(|a| {
            monomials(n - 1, d - a).into_iter().map(move |mut rest| {
                rest.insert(0, a);
                rest
            })
        })
        .collect()
}

fn elementary(n: usize, k: usize) -> Vec<Vec<u32>> {
    (0u32..(1 << n))
        .filter(|m| m.count_ones() as usize == k)
        .map(|m| (0..n).map(|i| (m >> i) & 1).collect())
        .collect()
}

/// Normal forms of the coinvariant algebra computed by exhaustive linear
/// algebra: the degree-`d` part of the ideal is spanned by `e_k · m` for all
/// elementary symmetric `e_k` and monomials `m`, and the monomials with
/// `a_i ≤ n − i` are a complement of it.
#[derive(Default)]
pub struct BruteForce {
    slices: BTreeMap<(usize, u32), Slice>,
}

struct Slice {
    cols: Vec<Vec<u32>>,
    index: BTreeMap<Vec<u32>, usize>,
    first_normal: usize,
    echelon: Vec<(usize, Vec<Rational>)>,
}

impl Slice {
    fn new(n: usize, d: u32) -> Self {
        let (mut cols, normal): (Vec<_>, Vec<_>) = monomials(n, d).into_iter().partition(|e| violation(e));
        let first_normal = cols.len();
        cols.extend(normal);
        let index = cols.iter().cloned().enumerate().map(|(i, e)| (e, i)).collect();
        let mut s = Slice {
            cols,
            index,
            first_normal,
            echelon: Vec::new(),
        };
        'fill: for k in 1..=(d as usize).min(n) {
            for m in monomials(n, d - k as u32) {
                if s.echelon.len() == first_normal {
                    break 'fill;
                }
                let mut v = vec![Rational::zero(); s.cols.len()];
                for sym in elementary(n, k) {
                    let prod: Vec<u32> = sym.iter().zip(&m).map(|(a, b)| a + b).collect();
                    v[s.index[&prod]] += Rational::one();
                }
                s.eliminate(&mut v);
                if let Some(p) = v.iter().position(|x| !x.is_zero()) {
                    let inv = v[p].recip();
                    v.iter_mut().for_each(|x| *x *= &inv);
                    s.echelon.push((p, v));
                }
            }
        }
        assert_eq!(s.echelon.len(), first_normal, "normal monomials do not span the quotient");
        assert!(s.echelon.iter().all(|(p, _)| *p < first_normal));
        s
    }

    fn eliminate(&self, v: &mut [Rational]) {
        for (p, row) in &self.echelon {
            if !v[*p].is_zero() {
                let f = v[*p].clone();
                for (x, y) in v.iter_mut().zip(row) {
                    if !y.is_zero() {
                        *x -= &f * y;
                    }
                }
            }
        }
    }
}

impl BruteForce {
    /// Normal-form coefficients keyed by exponent vector.
    pub fn reduce(&mut self, p: &CoinvariantPoly) -> BTreeMap<Vec<u32>, BigInt> {
        let n = p.n();
        let mut by_degree: BTreeMap<u32, Vec<(&Vec<u32>, &BigInt)>> = BTreeMap::new();
        for (e, c) in p.terms() {
            by_degree.entry(e.iter().sum()).or_default().push((e, c));
        }
        let mut out = BTreeMap::new();
        for (d, terms) in by_degree {
            let slice = self.slices.entry((n, d)).or_insert_with(|| Slice::new(n, d));
            let mut v = vec![Rational::zero(); slice.cols.len()];
            for (e, c) in terms {
                v[slice.index[e]] += Rational::from_integer(c.clone());
            }
            slice.eliminate(&mut v);
            for (e, c) in slice.cols[slice.first_normal..].iter().zip(&v[slice.first_normal..]) {
                assert!(c.is_integer());
                if !c.is_zero() {
                    out.insert(e.clone(), c.to_integer());
                }
            }
        }
        out
    }
}
