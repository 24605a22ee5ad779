//! Sparse bivariate polynomials `Σ c_ij u^i v^j` over Q.
//!
//! `u` is always the fibre coordinate and `v` the base coordinate of
//! whichever affine chart (or local blow-up chart) the polynomial lives in.

use alloc::collections::BTreeMap;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::{One, Zero};

use super::univariate::UniPoly;
use super::Rational;

pub type Exponent = (u32, u32);

#[derive(Clone, PartialEq, Eq, Debug, Default, Hash, PartialOrd, Ord)]
pub struct Poly2 {
    terms: BTreeMap<Exponent, Rational>,
}

/// Which variable to treat as the main one when viewing a bivariate
/// polynomial as univariate with polynomial coefficients.
#[derive(Clone, Copy, PartialEq, Eq, Debug)]
pub enum Var {
    U,
    V,
}

impl Var {
    pub fn other(self) -> Var {
        match self {
            Var::U => Var::V,
            Var::V => Var::U,
        }
    }
}

fn binomial_row(n: u32) -> Vec<BigInt> {
    let mut row = Vec::with_capacity(n as usize + 1);
    let mut c = BigInt::one();
    for k in 0..=n {
        row.push(c.clone());
        c = c * BigInt::from(n - k) / BigInt::from(k + 1);
    }
    row
}

impl Poly2 {
    pub fn zero() -> Self {
        Poly2::default()
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::monomial(c, 0, 0)
    }

    pub fn monomial(c: Rational, i: u32, j: u32) -> Self {
        let mut p = Poly2::zero();
        p.add_term((i, j), c);
        p
    }

    pub fn u() -> Self {
        Self::monomial(Rational::one(), 1, 0)
    }

    pub fn v() -> Self {
        Self::monomial(Rational::one(), 0, 1)
    }

    pub fn from_terms<I: IntoIterator<Item = (Exponent, Rational)>>(it: I) -> Self {
        let mut p = Poly2::zero();
        for (e, c) in it {
            p.add_term(e, c);
        }
        p
    }

    pub fn add_term(&mut self, e: Exponent, c: Rational) {
        if c.is_zero() {
            return;
        }
        let entry = self.terms.entry(e).or_insert_with(Rational::zero);
        *entry += c;
        if entry.is_zero() {
            self.terms.remove(&e);
        }
    }

    pub fn terms(&self) -> impl DoubleEndedIterator<Item = (&Exponent, &Rational)> {
        self.terms.iter()
    }

    pub fn len(&self) -> usize {
        self.terms.len()
    }

    pub fn is_empty(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn is_zero(&self) -> bool {
        self.terms.is_empty()
    }

    pub fn coeff(&self, i: u32, j: u32) -> Rational {
        self.terms.get(&(i, j)).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn degree_in(&self, var: Var) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| if var == Var::U { i } else { j }).max()
    }

    pub fn total_degree(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).max()
    }

    /// Least total degree of a term: the multiplicity at the origin.
    pub fn order(&self) -> Option<u32> {
        self.terms.keys().map(|&(i, j)| i + j).min()
    }

    /// Homogeneous part of least degree (the tangent cone).
    pub fn initial_form(&self) -> Poly2 {
        match self.order() {
            None => Poly2::zero(),
            Some(m) => Poly2::from_terms(
                self.terms
                    .iter()
                    .filter(|(&(i, j), _)| i + j == m)
                    .map(|(&e, c)| (e, c.clone())),
            ),
        }
    }

    pub fn add(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, c.clone());
        }
        out
    }

    pub fn sub(&self, other: &Self) -> Self {
        let mut out = self.clone();
        for (&e, c) in &other.terms {
            out.add_term(e, -c.clone());
        }
        out
    }

    pub fn neg(&self) -> Self {
        Poly2::from_terms(self.terms.iter().map(|(&e, c)| (e, -c.clone())))
    }

    pub fn mul(&self, other: &Self) -> Self {
        let mut out = Poly2::zero();
        for (&(i1, j1), c1) in &self.terms {
            for (&(i2, j2), c2) in &other.terms {
                out.add_term((i1 + i2, j1 + j2), c1 * c2);
            }
        }
        out
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Poly2::from_terms(self.terms.iter().map(|(&e, a)| (e, a * c)))
    }

    pub fn pow(&self, mut n: u32) -> Self {
        let mut base = self.clone();
        let mut acc = Poly2::one();
        while n > 0 {
            if n & 1 == 1 {
                acc = acc.mul(&base);
            }
            base = base.mul(&base);
            n >>= 1;
        }
        acc
    }

    pub fn eval(&self, u: &Rational, v: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for (&(i, j), c) in &self.terms {
            acc += c * num_traits::pow(u.clone(), i as usize) * num_traits::pow(v.clone(), j as usize);
        }
        acc
    }

    pub fn derivative(&self, var: Var) -> Self {
        Poly2::from_terms(self.terms.iter().filter_map(|(&(i, j), c)| {
            let (k, e) = match var {
                Var::U => (i, (i.wrapping_sub(1), j)),
                Var::V => (j, (i, j.wrapping_sub(1))),
            };
            (k > 0).then(|| (e, c * Rational::from_integer(BigInt::from(k))))
        }))
    }

    /// `p(u + a, v + b)`
    pub fn translate(&self, a: &Rational, b: &Rational) -> Self {
        let mut out = Poly2::zero();
        for (&(i, j), c) in &self.terms {
            let bi = binomial_row(i);
            let bj = binomial_row(j);
            for k in 0..=i {
                let ca =
                    c * Rational::from_integer(bi[k as usize].clone()) * num_traits::pow(a.clone(), (i - k) as usize);
                if ca.is_zero() {
                    continue;
                }
                for l in 0..=j {
                    let cb = &ca
                        * Rational::from_integer(bj[l as usize].clone())
                        * num_traits::pow(b.clone(), (j - l) as usize);
                    out.add_term((k, l), cb);
                }
            }
        }
        out
    }

    /// Substitute `u -> u^a v^b`, `v -> u^c v^d` (monomial maps; blow-up charts).
    pub fn monomial_substitute(&self, a: u32, b: u32, c: u32, d: u32) -> Self {
        Poly2::from_terms(
            self.terms
                .iter()
                .map(|(&(i, j), k)| ((a * i + c * j, b * i + d * j), k.clone())),
        )
    }

    /// Divide by `u^i v^j`; `None` if some term is not divisible.
    pub fn div_monomial(&self, i: u32, j: u32) -> Option<Self> {
        let mut out = Poly2::zero();
        for (&(a, b), c) in &self.terms {
            if a < i || b < j {
                return None;
            }
            out.add_term((a - i, b - j), c.clone());
        }
        Some(out)
    }

    pub fn swap_vars(&self) -> Self {
        Poly2::from_terms(self.terms.iter().map(|(&(i, j), c)| ((j, i), c.clone())))
    }

    /// Restrict `var = value`, giving a univariate polynomial in the other variable.
    pub fn specialize(&self, var: Var, value: &Rational) -> UniPoly {
        let mut coeffs: Vec<Rational> = Vec::new();
        for (&(i, j), c) in &self.terms {
            let (fixed, free) = match var {
                Var::U => (i, j),
                Var::V => (j, i),
            };
            let idx = free as usize;
            if coeffs.len() <= idx {
                coeffs.resize(idx + 1, Rational::zero());
            }
            coeffs[idx] += c * num_traits::pow(value.clone(), fixed as usize);
        }
        UniPoly::from_coeffs(coeffs)
    }

    /// Coefficients with respect to `main`, each a univariate polynomial in the other variable.
    pub fn coefficients_in(&self, main: Var) -> Vec<UniPoly> {
        let deg = self.degree_in(main).unwrap_or(0) as usize;
        let mut raw: Vec<Vec<Rational>> = alloc::vec![Vec::new(); deg + 1];
        for (&(i, j), c) in &self.terms {
            let (m, o) = match main {
                Var::U => (i as usize, j as usize),
                Var::V => (j as usize, i as usize),
            };
            if raw[m].len() <= o {
                raw[m].resize(o + 1, Rational::zero());
            }
            raw[m][o] += c;
        }
        raw.into_iter().map(UniPoly::from_coeffs).collect()
    }

    pub fn from_univariate(p: &UniPoly, var: Var) -> Self {
        Poly2::from_terms(p.coeffs().iter().enumerate().map(|(k, c)| {
            let k = k as u32;
            (if var == Var::U { (k, 0) } else { (0, k) }, c.clone())
        }))
    }

    /// Divide every coefficient (w.r.t. `main`) by `d`, which must divide each exactly.
    pub fn div_by_univariate(&self, main: Var, d: &UniPoly) -> Option<Self> {
        let mut out = Poly2::zero();
        for (k, c) in self.coefficients_in(main).iter().enumerate() {
            let (q, r) = c.div_rem(d);
            if !r.is_zero() {
                return None;
            }
            let qp = Poly2::from_univariate(&q, main.other());
            let shift = match main {
                Var::U => Poly2::monomial(Rational::one(), k as u32, 0),
                Var::V => Poly2::monomial(Rational::one(), 0, k as u32),
            };
            out = out.add(&qp.mul(&shift));
        }
        Some(out)
    }

    /// Gcd of the coefficients with respect to `main` (a polynomial in the other variable).
    pub fn content(&self, main: Var) -> UniPoly {
        self.coefficients_in(main)
            .iter()
            .fold(UniPoly::zero(), |acc, c| acc.gcd(c))
    }

    /// `Res_main(self, other)` as a polynomial in the other variable, by
    /// evaluation at enough points and interpolation.
    pub fn resultant(&self, other: &Self, main: Var) -> UniPoly {
        let m = self.degree_in(main).unwrap_or(0);
        let n = other.degree_in(main).unwrap_or(0);
        let da = self.degree_in(main.other()).unwrap_or(0);
        let db = other.degree_in(main.other()).unwrap_or(0);
        let bound = (n * da + m * db) as i64;
        let pts: Vec<(Rational, Rational)> = (0..=bound)
            .map(|k| {
                let x = Rational::from_integer(k.into());
                let fc = self.coeff_vector_at(main, m as usize, &x);
                let gc = other.coeff_vector_at(main, n as usize, &x);
                let r = UniPoly::resultant_of(&fc, &gc);
                (x, r)
            })
            .collect();
        UniPoly::interpolate(&pts)
    }

    /// Coefficient vector in `main` of length `deg + 1` after setting the other variable.
    fn coeff_vector_at(&self, main: Var, deg: usize, value: &Rational) -> Vec<Rational> {
        let mut out = alloc::vec![Rational::zero(); deg + 1];
        for (k, c) in self.coefficients_in(main).iter().enumerate() {
            out[k] = c.eval(value);
        }
        out
    }
}
