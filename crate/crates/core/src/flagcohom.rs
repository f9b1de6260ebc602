//! Cohomology of the quaternionic flag manifold `Sp(n)/Sp(1)^n` as the
//! coinvariant algebra `Z[t_1..t_n]/(symmetric polynomials of positive degree)`.
//!
//! Each `t_i = c_2(λ_i)` has cohomological degree 4; everything here uses the
//! polynomial degree, so a class of polynomial degree `d` lives in `H^{4d}`.

use std::collections::btree_map::Entry;
use std::collections::BTreeMap;
use std::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

use crate::error::{Error, Result};
use crate::modforms::Level;

/// Integer polynomial in `t_1..t_n`, keyed by exponent vectors.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct CoinvariantPoly {
    n: usize,
    terms: BTreeMap<Vec<u32>, BigInt>,
}

impl CoinvariantPoly {
    pub fn zero(n: usize) -> Self {
        CoinvariantPoly {
            n,
            terms: BTreeMap::new(),
        }
    }

    pub fn monomial(n: usize, exponents: &[u32], coeff: impl Into<BigInt>) -> Result<Self> {
        if exponents.len() != n {
            return Err(Error::invalid(format!(
                "exponent vector has length {}, expected {n}",
                exponents.len()
            )));
        }
        let mut p = Self::zero(n);
        p.add_term(exponents.to_vec(), coeff.into());
        Ok(p)
    }

    /// `t_index` (1-based) raised to `power`.
    pub fn var_power(n: usize, index: usize, power: u32) -> Result<Self> {
        if index == 0 || index > n {
            return Err(Error::invalid(format!("variable t{index} out of range 1..={n}")));
        }
        let mut e = vec![0; n];
        e[index - 1] = power;
        Self::monomial(n, &e, 1)
    }

    pub fn n(&self) -> usize {
        self.n
    }

    pub fn terms(&self) -> &BTreeMap<Vec<u32>, BigInt> {
        &self.terms
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, exponents: &[u32]) -> BigInt {
        self.terms.get(exponents).cloned().unwrap_or_default()
    }

    fn add_term(&mut self, e: Vec<u32>, c: BigInt) {
        if c.is_zero() {
            return;
        }
        match self.terms.entry(e) {
            Entry::Vacant(v) => {
                v.insert(c);
            }
            Entry::Occupied(mut o) => {
                *o.get_mut() += c;
                if o.get().is_zero() {
                    o.remove();
                }
            }
        }
    }

    fn check_n(&self, other: &Self) -> Result<()> {
        if self.n != other.n {
            return Err(Error::invalid(format!(
                "polynomials in {} and {} variables",
                self.n, other.n
            )));
        }
        Ok(())
    }

    pub fn add(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = self.clone();
        for (e, c) in &other.terms {
            out.add_term(e.clone(), c.clone());
        }
        Ok(out)
    }

    pub fn mul(&self, other: &Self) -> Result<Self> {
        self.check_n(other)?;
        let mut out = Self::zero(self.n);
        for (e1, c1) in &self.terms {
            for (e2, c2) in &other.terms {
                let e = e1.iter().zip(e2).map(|(a, b)| a + b).collect();
                out.add_term(e, c1 * c2);
            }
        }
        Ok(out)
    }

    pub fn scale(&self, s: &BigInt) -> Self {
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            out.add_term(e.clone(), c * s);
        }
        out
    }

    /// Relabels variables: `t_i ↦ t_{perm[i-1]}` (1-based targets).
    pub fn permute(&self, perm: &[usize]) -> Result<Self> {
        let mut seen = vec![false; self.n];
        if perm.len() != self.n
            || perm.iter().any(|&p| p == 0 || p > self.n || std::mem::replace(&mut seen[p - 1], true))
        {
            return Err(Error::invalid("not a permutation"));
        }
        let mut out = Self::zero(self.n);
        for (e, c) in &self.terms {
            let mut f = vec![0; self.n];
            for (i, &a) in e.iter().enumerate() {
                f[perm[i] - 1] = a;
            }
            out.add_term(f, c.clone());
        }
        Ok(out)
    }

    /// Total degree if all terms share it.
    pub fn homogeneous_degree(&self) -> Option<u32> {
        let mut degrees = self.terms.keys().map(|e| e.iter().sum::<u32>());
        let d = degrees.next()?;
        degrees.all(|x| x == d).then_some(d)
    }

    /// True iff every exponent satisfies `a_i ≤ n − i`.
    pub fn is_normal(&self) -> bool {
        self.terms.keys().all(|e| violation(e).is_none())
    }

    /// Parses expressions like `"t1^3*t2^3 - 2*t1*t2^2 + 5"`.
    pub fn parse(n: usize, input: &str) -> Result<Self> {
        let cleaned: String = input.chars().filter(|c| !c.is_whitespace()).collect();
        if cleaned.is_empty() {
            return Err(Error::invalid("empty polynomial"));
        }
        let mut out = Self::zero(n);
        let mut rest = cleaned.as_str();
        while !rest.is_empty() {
            let (sign, body) = match rest.as_bytes()[0] {
                b'+' => (1, &rest[1..]),
                b'-' => (-1, &rest[1..]),
                _ if rest.len() == cleaned.len() => (1, rest),
                _ => return Err(Error::invalid(format!("expected '+' or '-' at '{rest}'"))),
            };
            let end = body.find(['+', '-']).unwrap_or(body.len());
            let (term, tail) = body.split_at(end);
            let (e, c) = parse_term(n, term)?;
            out.add_term(e, c * sign);
            rest = tail;
        }
        Ok(out)
    }
}

fn parse_term(n: usize, term: &str) -> Result<(Vec<u32>, BigInt)> {
    if term.is_empty() {
        return Err(Error::invalid("empty term"));
    }
    let mut coeff = BigInt::one();
    let mut e = vec![0u32; n];
    for factor in term.split('*') {
        if let Some(var) = factor.strip_prefix('t') {
            let (idx, pow) = match var.split_once('^') {
                Some((i, p)) => (i, p),
                None => (var, "1"),
            };
            let idx: usize = idx
                .parse()
                .map_err(|_| Error::invalid(format!("bad variable '{factor}'")))?;
            let pow: u32 = pow
                .parse()
                .map_err(|_| Error::invalid(format!("bad exponent in '{factor}'")))?;
            if idx == 0 || idx > n {
                return Err(Error::invalid(format!("variable t{idx} out of range 1..={n}")));
            }
            e[idx - 1] += pow;
        } else {
            let c: BigInt = factor
                .parse()
                .map_err(|_| Error::invalid(format!("bad factor '{factor}'")))?;
            coeff *= c;
        }
    }
    Ok((e, coeff))
}

impl fmt::Display for CoinvariantPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.terms.is_empty() {
            return f.write_str("0");
        }
        // descending in the normal-form order, top monomial first
        for (i, (e, c)) in self.terms.iter().rev().enumerate() {
            let vars: Vec<String> = e
                .iter()
                .enumerate()
                .filter(|(_, &a)| a > 0)
                .map(|(j, &a)| match a {
                    1 => format!("t{}", j + 1),
                    _ => format!("t{}^{a}", j + 1),
                })
                .collect();
            let mag = c.abs();
            let body = match (vars.is_empty(), mag.is_one()) {
                (true, _) => mag.to_string(),
                (false, true) => vars.join("*"),
                (false, false) => format!("{mag}*{}", vars.join("*")),
            };
            match (i, c.is_negative()) {
                (0, false) => write!(f, "{body}")?,
                (0, true) => write!(f, "-{body}")?,
                (_, false) => write!(f, " + {body}")?,
                (_, true) => write!(f, " - {body}")?,
            }
        }
        Ok(())
    }
}

/// Largest 1-based `k` with `a_k > n − k`.
fn violation(e: &[u32]) -> Option<usize> {
    let n = e.len();
    (1..=n).rev().find(|&k| e[k - 1] as usize > n - k)
}

/// All exponent vectors of total degree `d` supported on the first `k` of `n` variables.
fn monomials_of_degree(n: usize, k: usize, d: u32) -> Vec<Vec<u32>> {
    fn go(pos: usize, k: usize, left: u32, cur: &mut Vec<u32>, out: &mut Vec<Vec<u32>>) {
        if pos + 1 == k {
            cur[pos] = left;
            out.push(cur.clone());
            cur[pos] = 0;
            return;
        }
        for a in 0..=left {
            cur[pos] = a;
            go(pos + 1, k, left - a, cur, out);
        }
        cur[pos] = 0;
    }
    let mut out = Vec::new();
    if k > 0 {
        go(0, k, d, &mut vec![0; n], &mut out);
    }
    out
}

/// Lex order with `t_n > ... > t_1`.
fn lex_key(e: &[u32]) -> Vec<u32> {
    e.iter().rev().copied().collect()
}

/// Normal form modulo the symmetric ideal, by rewriting against the lex Gröbner
/// basis `g_k = h_{n−k+1}(t_1..t_k)` with leading monomial `t_k^{n−k+1}`.
pub fn reduce(p: &CoinvariantPoly) -> CoinvariantPoly {
    let n = p.n;
    // tails[k-1]: the non-leading monomials of g_k
    let tails: Vec<Vec<Vec<u32>>> = (1..=n)
        .map(|k| {
            let d = (n - k + 1) as u32;
            monomials_of_degree(n, k, d)
                .into_iter()
                .filter(|e| e[k - 1] != d)
                .collect()
        })
        .collect();
    let mut work: BTreeMap<Vec<u32>, BigInt> =
        p.terms.iter().map(|(e, c)| (lex_key(e), c.clone())).collect();
    let mut out = CoinvariantPoly::zero(n);
    // rewriting only produces lex-smaller monomials, so largest-first is a single pass
    while let Some((key, c)) = work.pop_last() {
        if c.is_zero() {
            continue;
        }
        let e: Vec<u32> = key.iter().rev().copied().collect();
        let Some(k) = violation(&e) else {
            out.add_term(e, c);
            continue;
        };
        let mut rest = e;
        rest[k - 1] -= (n - k + 1) as u32;
        for t in &tails[k - 1] {
            let m: Vec<u32> = rest.iter().zip(t).map(|(a, b)| a + b).collect();
            *work.entry(lex_key(&m)).or_default() -= &c;
        }
    }
    out
}

/// Polynomial degree of the fundamental class, `n(n−1)/2`.
pub fn top_degree(n: usize) -> u32 {
    (n * n.saturating_sub(1) / 2) as u32
}

/// The monomial `t_1^{n−1} t_2^{n−2} ⋯ t_{n−1}`, which pairs to `+1`.
pub fn top_monomial(n: usize) -> Vec<u32> {
    (1..=n).map(|i| (n - i) as u32).collect()
}

/// `⟨p, [Sp(n)/Sp(1)^n]⟩` under the convention `⟨t_1^{n−1}⋯t_{n−1}⟩ = +1`.
pub fn top_pairing(p: &CoinvariantPoly) -> BigInt {
    reduce(p).coeff(&top_monomial(p.n))
}

/// Pairings `⟨η^a ω^{n−a}, [B]⟩`, `a = 0..=n`, over a closed framed base of dimension `4n`.
#[derive(Clone, Debug, PartialEq, Eq)]
pub struct ChernGrid {
    pub n_formula: usize,
    pub level: Level,
    pub pairings: Vec<BigInt>,
}

impl ChernGrid {
    pub fn new(n_formula: usize, level: Level, pairings: Vec<BigInt>) -> Result<Self> {
        if pairings.len() != n_formula + 1 {
            return Err(Error::invalid(format!(
                "grid for n = {n_formula} needs {} pairings, got {}",
                n_formula + 1,
                pairings.len()
            )));
        }
        Ok(ChernGrid {
            n_formula,
            level,
            pairings,
        })
    }

    pub fn from_ints(n_formula: usize, level: Level, pairings: &[i64]) -> Result<Self> {
        Self::new(n_formula, level, pairings.iter().map(|&x| BigInt::from(x)).collect())
    }
}

/// Grid of the tautological lines `η = c_2(λ_i)`, `ω = c_2(λ_j)` over `Sp(n)/Sp(1)^n`.
pub fn taut_chern_grid(n: usize, i: usize, j: usize, level: Level) -> Result<ChernGrid> {
    if n < 2 {
        return Err(Error::invalid("flag size must be at least 2"));
    }
    if i == j {
        return Err(Error::invalid("the two lines must be distinct"));
    }
    for x in [i, j] {
        if x == 0 || x > n {
            return Err(Error::invalid(format!("line index {x} out of range 1..={n}")));
        }
    }
    let m = top_degree(n);
    let mut pairings = Vec::with_capacity(m as usize + 1);
    for a in 0..=m {
        let mut e = vec![0; n];
        e[i - 1] = a;
        e[j - 1] = m - a;
        pairings.push(top_pairing(&CoinvariantPoly::monomial(n, &e, 1)?));
    }
    ChernGrid::new(m as usize, level, pairings)
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::exactmath::Rational;
    use proptest::prelude::*;

    fn parse(n: usize, s: &str) -> CoinvariantPoly {
        CoinvariantPoly::parse(n, s).unwrap()
    }

    fn elementary(n: usize, k: usize) -> CoinvariantPoly {
        let mut out = CoinvariantPoly::zero(n);
        for mask in 0u32..(1 << n) {
            if mask.count_ones() as usize == k {
                let e: Vec<u32> = (0..n).map(|i| (mask >> i) & 1).collect();
                out.add_term(e, BigInt::one());
            }
        }
        out
    }

    /// Degree-`d` monomials with the non-normal ones first, the count of those,
    /// and a forward echelon basis of the degree-`d` part of the ideal.
    struct IdealSlice {
        cols: Vec<Vec<u32>>,
        first_normal: usize,
        echelon: Vec<(usize, Vec<Rational>)>,
    }

    impl IdealSlice {
        fn vector(&self, q: &CoinvariantPoly) -> Vec<Rational> {
            let mut v = vec![Rational::zero(); self.cols.len()];
            for (e, c) in &q.terms {
                let i = self.cols.iter().position(|x| x == e).unwrap();
                v[i] = Rational::from_integer(c.clone());
            }
            v
        }

        fn eliminate(&self, v: &mut [Rational]) {
            for (piv, row) in &self.echelon {
                if !v[*piv].is_zero() {
                    let f = v[*piv].clone();
                    for (x, y) in v.iter_mut().zip(row) {
                        if !y.is_zero() {
                            *x -= &f * y;
                        }
                    }
                }
            }
        }

        fn build(n: usize, d: u32) -> Self {
            let (mut cols, normal): (Vec<Vec<u32>>, Vec<Vec<u32>>) =
                monomials_of_degree(n, n, d).into_iter().partition(|e| violation(e).is_some());
            let first_normal = cols.len();
            cols.extend(normal);
            let mut slice = IdealSlice {
                cols,
                first_normal,
                echelon: Vec::new(),
            };
            'fill: for k in 1..=(d as usize).min(n) {
                for m in monomials_of_degree(n, n, d - k as u32) {
                    if slice.echelon.len() == first_normal {
                        break 'fill;
                    }
                    let g = elementary(n, k).mul(&CoinvariantPoly::monomial(n, &m, 1).unwrap()).unwrap();
                    let mut v = slice.vector(&g);
                    slice.eliminate(&mut v);
                    if let Some(piv) = v.iter().position(|x| !x.is_zero()) {
                        let inv = v[piv].recip();
                        v.iter_mut().for_each(|x| *x *= &inv);
                        slice.echelon.push((piv, v));
                    }
                }
            }
            // the non-normal monomials are exactly the pivots iff the normal ones span the quotient
            assert_eq!(slice.echelon.len(), first_normal);
            assert!(slice.echelon.iter().all(|(piv, _)| *piv < first_normal));
            slice
        }
    }

    thread_local! {
        static SLICES: std::cell::RefCell<BTreeMap<(usize, u32), std::rc::Rc<IdealSlice>>> =
            Default::default();
    }

    /// Normal form by elimination against all products `e_k · monomial`.
    fn brute_force(p: &CoinvariantPoly) -> CoinvariantPoly {
        let n = p.n;
        let mut by_degree: BTreeMap<u32, CoinvariantPoly> = BTreeMap::new();
        for (e, c) in &p.terms {
            by_degree
                .entry(e.iter().sum())
                .or_insert_with(|| CoinvariantPoly::zero(n))
                .add_term(e.clone(), c.clone());
        }
        let mut out = CoinvariantPoly::zero(n);
        for (d, part) in by_degree {
            let slice = SLICES.with(|s| {
                s.borrow_mut()
                    .entry((n, d))
                    .or_insert_with(|| std::rc::Rc::new(IdealSlice::build(n, d)))
                    .clone()
            });
            let mut v = slice.vector(&part);
            slice.eliminate(&mut v);
            for (e, c) in slice.cols[slice.first_normal..].iter().zip(&v[slice.first_normal..]) {
                assert!(c.is_integer());
                out.add_term(e.clone(), c.to_integer());
            }
        }
        out
    }

    #[test]
    fn reduce_examples() {
        assert!(reduce(&parse(4, "t1^4")).is_zero());
        assert!(reduce(&parse(4, "t1^3*t2^3")).is_zero());
        assert_eq!(reduce(&parse(3, "t1*t2^2")), parse(3, "-t1^2*t2"));
        assert!(reduce(&parse(3, "t1 + t2 + t3")).is_zero());
    }

    #[test]
    fn pairing_examples() {
        assert_eq!(top_pairing(&parse(3, "t1^2*t2")), BigInt::from(1));
        assert_eq!(top_pairing(&parse(3, "t1*t2^2")), BigInt::from(-1));
        for n in 2..=5 {
            let p = CoinvariantPoly::var_power(n, 1, n as u32).unwrap();
            assert!(top_pairing(&p).is_zero());
        }
        assert!(top_pairing(&parse(3, "t1^2")).is_zero());
    }

    #[test]
    fn grid_examples() {
        let ints = |v: &[i64]| v.iter().map(|&x| BigInt::from(x)).collect::<Vec<_>>();
        assert_eq!(taut_chern_grid(3, 1, 2, Level::Three).unwrap().pairings, ints(&[0, -1, 1, 0]));
        assert_eq!(taut_chern_grid(2, 1, 2, Level::Three).unwrap().pairings, ints(&[-1, 1]));
        let g4 = taut_chern_grid(4, 1, 2, Level::Three).unwrap();
        assert_eq!(g4.n_formula, 6);
        assert_eq!(g4.pairings, ints(&[0; 7]));
        assert!(taut_chern_grid(3, 2, 2, Level::Three).is_err());
        assert!(taut_chern_grid(3, 1, 4, Level::Three).is_err());
    }

    #[test]
    fn parse_and_display() {
        let p = parse(3, "t1*t2^2 - 2*t1^2*t2 + 3");
        assert_eq!(p.coeff(&[1, 2, 0]), BigInt::from(1));
        assert_eq!(p.coeff(&[2, 1, 0]), BigInt::from(-2));
        assert_eq!(p.coeff(&[0, 0, 0]), BigInt::from(3));
        assert_eq!(reduce(&p).to_string(), "-3*t1^2*t2 + 3");
        assert_eq!(CoinvariantPoly::zero(2).to_string(), "0");
        for bad in ["", "t0", "t4", "t1^x", "2t1", "t1++t2"] {
            assert!(CoinvariantPoly::parse(3, bad).is_err(), "{bad}");
        }
    }

    #[test]
    fn top_pairing_is_sign_of_top_normal_monomial() {
        for n in 2..=4 {
            let top = CoinvariantPoly::monomial(n, &top_monomial(n), 1).unwrap();
            assert_eq!(reduce(&top), top);
            assert_eq!(top_pairing(&top), BigInt::one());
        }
    }

    /// Random polynomials of total degree at most `top_degree(n) + 1`.
    fn arb_poly(n: usize) -> impl Strategy<Value = CoinvariantPoly> {
        let cap = top_degree(n) + 1;
        let term = (prop::collection::vec(0u32..=n as u32, n), -5i64..=5).prop_map(move |(mut e, c)| {
            while e.iter().sum::<u32>() > cap {
                let i = e.iter().rposition(|&a| a > 0).unwrap();
                e[i] -= 1;
            }
            (e, c)
        });
        prop::collection::vec(term, 1..6).prop_map(move |ts| {
            let mut p = CoinvariantPoly::zero(n);
            for (e, c) in ts {
                p.add_term(e, BigInt::from(c));
            }
            p
        })
    }

    fn arb_poly_any_n() -> impl Strategy<Value = CoinvariantPoly> {
        (2usize..=4).prop_flat_map(arb_poly)
    }

    fn arb_perm(n: usize) -> impl Strategy<Value = Vec<usize>> {
        Just((1..=n).collect::<Vec<_>>()).prop_shuffle()
    }

    proptest! {
        #![proptest_config(ProptestConfig::with_cases(64))]

        #[test]
        fn reduce_matches_brute_force(p in arb_poly_any_n()) {
            let r = reduce(&p);
            prop_assert!(r.is_normal());
            prop_assert_eq!(reduce(&r), r.clone());
            prop_assert_eq!(brute_force(&p), r);
        }

        #[test]
        fn symmetric_multiples_vanish(p in arb_poly(3), k in 1usize..=3) {
            prop_assert!(reduce(&elementary(3, k).mul(&p).unwrap()).is_zero());
        }

        #[test]
        fn reduce_is_linear(p in arb_poly(3), q in arb_poly(3), s in -4i64..=4) {
            let s = BigInt::from(s);
            prop_assert_eq!(reduce(&p.add(&q).unwrap()), reduce(&p).add(&reduce(&q)).unwrap());
            prop_assert_eq!(reduce(&p.scale(&s)), reduce(&p).scale(&s));
        }

        #[test]
        fn permutation_equivariance((p, perm) in (2usize..=4).prop_flat_map(|n| (arb_poly(n), arb_perm(n)))) {
            let moved = p.permute(&perm).unwrap();
            let via_normal = reduce(&p).permute(&perm).unwrap();
            prop_assert_eq!(reduce(&moved), reduce(&via_normal));
            prop_assert_eq!(top_pairing(&moved), top_pairing(&via_normal));
            prop_assert_eq!(brute_force(&moved), reduce(&moved));
        }
    }
}
