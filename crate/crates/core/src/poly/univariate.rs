//! Dense univariate polynomials over the rationals.
//!
//! These back the resultant and root-extraction steps of the singular point
//! search and the generic-fibre branch count.

use alloc::vec;
use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, Zero};

use super::Rational;

/// Coefficients in increasing degree; never carries trailing zeros.
#[derive(Clone, PartialEq, Eq, Debug, Default)]
pub struct UniPoly {
    coeffs: Vec<Rational>,
}

impl UniPoly {
    pub fn zero() -> Self {
        UniPoly { coeffs: Vec::new() }
    }

    pub fn one() -> Self {
        Self::constant(Rational::one())
    }

    pub fn constant(c: Rational) -> Self {
        Self::from_coeffs(vec![c])
    }

    /// `x - root`
    pub fn linear(root: &Rational) -> Self {
        Self::from_coeffs(vec![-root.clone(), Rational::one()])
    }

    pub fn from_coeffs(mut coeffs: Vec<Rational>) -> Self {
        while coeffs.last().is_some_and(Zero::is_zero) {
            coeffs.pop();
        }
        UniPoly { coeffs }
    }

    pub fn from_ints(coeffs: &[i64]) -> Self {
        Self::from_coeffs(coeffs.iter().map(|&c| Rational::from_integer(c.into())).collect())
    }

    pub fn coeffs(&self) -> &[Rational] {
        &self.coeffs
    }

    pub fn coeff(&self, i: usize) -> Rational {
        self.coeffs.get(i).cloned().unwrap_or_else(Rational::zero)
    }

    pub fn is_zero(&self) -> bool {
        self.coeffs.is_empty()
    }

    /// Degree, `None` for the zero polynomial.
    pub fn degree(&self) -> Option<usize> {
        self.coeffs.len().checked_sub(1)
    }

    pub fn leading(&self) -> Rational {
        self.coeffs.last().cloned().unwrap_or_else(Rational::zero)
    }

    pub fn eval(&self, x: &Rational) -> Rational {
        let mut acc = Rational::zero();
        for c in self.coeffs.iter().rev() {
            acc = acc * x + c;
        }
        acc
    }

    pub fn add(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) + other.coeff(i)).collect())
    }

    pub fn sub(&self, other: &Self) -> Self {
        let n = self.coeffs.len().max(other.coeffs.len());
        Self::from_coeffs((0..n).map(|i| self.coeff(i) - other.coeff(i)).collect())
    }

    pub fn mul(&self, other: &Self) -> Self {
        if self.is_zero() || other.is_zero() {
            return Self::zero();
        }
        let mut out = vec![Rational::zero(); self.coeffs.len() + other.coeffs.len() - 1];
        for (i, a) in self.coeffs.iter().enumerate() {
            for (j, b) in other.coeffs.iter().enumerate() {
                out[i + j] += a * b;
            }
        }
        Self::from_coeffs(out)
    }

    pub fn scale(&self, c: &Rational) -> Self {
        Self::from_coeffs(self.coeffs.iter().map(|a| a * c).collect())
    }

    pub fn derivative(&self) -> Self {
        Self::from_coeffs(
            self.coeffs
                .iter()
                .enumerate()
                .skip(1)
                .map(|(i, c)| c * Rational::from_integer(BigInt::from(i)))
                .collect(),
        )
    }

    /// Euclidean division; panics on a zero divisor.
    pub fn div_rem(&self, divisor: &Self) -> (Self, Self) {
        let dd = divisor.degree().expect("division by zero polynomial");
        let lead = divisor.leading();
        let mut rem = self.coeffs.clone();
        if rem.len() <= dd {
            return (Self::zero(), self.clone());
        }
        let mut quot = vec![Rational::zero(); rem.len() - dd];
        for k in (0..quot.len()).rev() {
            let c = &rem[k + dd] / &lead;
            if !c.is_zero() {
                for (j, d) in divisor.coeffs.iter().enumerate() {
                    rem[k + j] -= &c * d;
                }
            }
            quot[k] = c;
        }
        rem.truncate(dd);
        (Self::from_coeffs(quot), Self::from_coeffs(rem))
    }

    pub fn monic(&self) -> Self {
        if self.is_zero() {
            return Self::zero();
        }
        let l = self.leading();
        Self::from_coeffs(self.coeffs.iter().map(|c| c / &l).collect())
    }

    /// Monic gcd; `gcd(0, 0) = 0`.
    pub fn gcd(&self, other: &Self) -> Self {
        let mut a = self.clone();
        let mut b = other.clone();
        while !b.is_zero() {
            let (_, r) = a.div_rem(&b);
            a = b;
            b = r;
        }
        a.monic()
    }

    /// Product of the distinct irreducible factors, monic.
    pub fn squarefree_part(&self) -> Self {
        if self.degree().unwrap_or(0) == 0 {
            return self.monic();
        }
        let g = self.gcd(&self.derivative());
        self.div_rem(&g).0.monic()
    }

    /// Yun's algorithm: `[(a_1, 1), (a_2, 2), ...]` with each `a_i` squarefree
    /// and pairwise coprime; constant parts are dropped.
    pub fn squarefree_decomposition(&self) -> Vec<(UniPoly, u32)> {
        let mut out = Vec::new();
        if self.degree().unwrap_or(0) == 0 {
            return out;
        }
        let f = self.monic();
        let df = f.derivative();
        let mut a = f.gcd(&df);
        let mut b = f.div_rem(&a).0;
        let mut c = df.div_rem(&a).0;
        let mut d = c.sub(&b.derivative());
        let mut i = 1;
        while b.degree().unwrap_or(0) > 0 {
            a = b.gcd(&d);
            if a.degree().unwrap_or(0) > 0 {
                out.push((a.clone(), i));
            }
            b = b.div_rem(&a).0;
            c = d.div_rem(&a).0;
            d = c.sub(&b.derivative());
            i += 1;
        }
        out
    }

    /// Rational roots with multiplicity, sorted ascending, plus the cofactor
    /// left once every rational linear factor has been divided out.
    pub fn rational_roots(&self) -> (Vec<(Rational, u32)>, UniPoly) {
        let mut roots = Vec::new();
        if self.is_zero() {
            return (roots, Self::zero());
        }
        let mut rest = self.clone();
        // Roots at zero first; the rational root test needs a nonzero constant.
        let zeros = rest.coeffs.iter().take_while(|c| c.is_zero()).count();
        if zeros > 0 {
            rest = Self::from_coeffs(rest.coeffs[zeros..].to_vec());
            roots.push((Rational::zero(), zeros as u32));
        }
        let candidates = rational_root_candidates(&rest);
        for r in candidates {
            let lin = UniPoly::linear(&r);
            let mut mult = 0;
            loop {
                if rest.degree().unwrap_or(0) == 0 || !rest.eval(&r).is_zero() {
                    break;
                }
                rest = rest.div_rem(&lin).0;
                mult += 1;
            }
            if mult > 0 {
                roots.push((r, mult));
            }
        }
        roots.sort_by(|a, b| a.0.cmp(&b.0));
        (roots, rest)
    }

    /// Resultant via the Sylvester determinant of the coefficient vectors as
    /// given (degree is taken from the vectors, so specialising a family
    /// before calling this agrees with specialising its resultant).
    pub fn resultant_of(f: &[Rational], g: &[Rational]) -> Rational {
        let m = f.len().saturating_sub(1);
        let n = g.len().saturating_sub(1);
        if f.is_empty() || g.is_empty() {
            return Rational::zero();
        }
        if m == 0 && n == 0 {
            return Rational::one();
        }
        let size = m + n;
        let mut mat = vec![vec![Rational::zero(); size]; size];
        // Rows hold coefficients from the leading one down.
        for r in 0..n {
            for (k, c) in f.iter().rev().enumerate() {
                mat[r][r + k] = c.clone();
            }
        }
        for r in 0..m {
            for (k, c) in g.iter().rev().enumerate() {
                mat[n + r][r + k] = c.clone();
            }
        }
        determinant(mat)
    }

    pub fn resultant(&self, other: &Self) -> Rational {
        Self::resultant_of(&self.coeffs, &other.coeffs)
    }

    /// Lagrange interpolation through distinct nodes.
    pub fn interpolate(points: &[(Rational, Rational)]) -> Self {
        let mut acc = Self::zero();
        for (i, (xi, yi)) in points.iter().enumerate() {
            if yi.is_zero() {
                continue;
            }
            let mut basis = Self::one();
            let mut denom = Rational::one();
            for (j, (xj, _)) in points.iter().enumerate() {
                if i != j {
                    basis = basis.mul(&Self::linear(xj));
                    denom *= xi - xj;
                }
            }
            acc = acc.add(&basis.scale(&(yi / denom)));
        }
        acc
    }
}

/// Gaussian elimination over Q.
pub fn determinant(mut mat: Vec<Vec<Rational>>) -> Rational {
    let n = mat.len();
    let mut det = Rational::one();
    for col in 0..n {
        let Some(pivot) = (col..n).find(|&r| !mat[r][col].is_zero()) else {
            return Rational::zero();
        };
        if pivot != col {
            mat.swap(pivot, col);
            det = -det;
        }
        let p = mat[col][col].clone();
        det *= &p;
        for r in col + 1..n {
            if mat[r][col].is_zero() {
                continue;
            }
            let factor = &mat[r][col] / &p;
            for c in col..n {
                let v = &factor * &mat[col][c];
                mat[r][c] -= v;
            }
        }
    }
    det
}

fn divisors(n: &BigInt) -> Vec<BigInt> {
    let n = n.abs();
    let mut out = Vec::new();
    let mut d = BigInt::one();
    while &d * &d <= n {
        if n.is_multiple_of(&d) {
            out.push(d.clone());
            let q = &n / &d;
            if q != d {
                out.push(q);
            }
        }
        d += 1;
    }
    out
}

fn rational_root_candidates(p: &UniPoly) -> Vec<Rational> {
    if p.degree().unwrap_or(0) == 0 {
        return Vec::new();
    }
    // Clear denominators to get an integer polynomial.
    let lcm = p.coeffs.iter().fold(BigInt::one(), |acc, c| acc.lcm(c.denom()));
    let ints: Vec<BigInt> = p
        .coeffs
        .iter()
        .map(|c| (c * Rational::from_integer(lcm.clone())).to_integer())
        .collect();
    let a0 = ints.first().cloned().unwrap_or_default();
    let an = ints.last().cloned().unwrap_or_default();
    let mut out = Vec::new();
    for pn in divisors(&a0) {
        for qd in divisors(&an) {
            for sign in [1, -1] {
                let r = Rational::new(BigInt::from(sign) * &pn, qd.clone());
                if !out.contains(&r) {
                    out.push(r);
                }
            }
        }
    }
    out.sort();
    out
}

impl fmt::Display for UniPoly {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        if self.is_zero() {
            return f.write_str("0");
        }
        let mut first = true;
        for (i, c) in self.coeffs.iter().enumerate().rev() {
            if c.is_zero() {
                continue;
            }
            let neg = c.is_negative();
            if first {
                if neg {
                    f.write_str("-")?;
                }
            } else {
                f.write_str(if neg { " - " } else { " + " })?;
            }
            first = false;
            let a = c.abs();
            match (i, a.is_one()) {
                (0, _) => write!(f, "{a}")?,
                (_, true) => {}
                _ => write!(f, "{a}*")?,
            }
            match i {
                0 => {}
                1 => f.write_str("x")?,
                _ => write!(f, "x^{i}")?,
            }
        }
        Ok(())
    }
}

#[cfg(test)]
mod tests {
    use super::*;

    use std::vec::Vec;

    fn q(n: i64, d: i64) -> Rational {
        Rational::new(n.into(), d.into())
    }

    #[test]
    fn roots_with_multiplicity() {
        // (x - 1/2)^2 (x + 3) (x^2 + 1)
        let p = UniPoly::linear(&q(1, 2))
            .mul(&UniPoly::linear(&q(1, 2)))
            .mul(&UniPoly::linear(&q(-3, 1)))
            .mul(&UniPoly::from_ints(&[1, 0, 1]));
        let (roots, rest) = p.rational_roots();
        assert_eq!(roots, vec![(q(-3, 1), 1), (q(1, 2), 2)]);
        assert_eq!(rest.monic(), UniPoly::from_ints(&[1, 0, 1]));
    }

    #[test]
    fn root_at_zero() {
        let p = UniPoly::from_ints(&[0, 0, 1, 1]);
        let (roots, rest) = p.rational_roots();
        assert_eq!(roots, vec![(q(-1, 1), 1), (q(0, 1), 2)]);
        assert_eq!(rest.degree(), Some(0));
    }

    #[test]
    fn yun_decomposition() {
        // x (x+1)^2 (x^2+2)^3
        let a = UniPoly::from_ints(&[0, 1]);
        let b = UniPoly::from_ints(&[1, 1]);
        let c = UniPoly::from_ints(&[2, 0, 1]);
        let p = a.mul(&b).mul(&b).mul(&c).mul(&c).mul(&c);
        let d = p.squarefree_decomposition();
        assert_eq!(d, vec![(a, 1), (b, 2), (c, 3)]);
    }

    #[test]
    fn resultant_matches_root_product() {
        // Res(x^2 - 1, x - 3) = (1 - 3)(-1 - 3)... with lc(f)=1: prod g(roots of f) = (1-3)(-1-3) = 8
        let f = UniPoly::from_ints(&[-1, 0, 1]);
        let g = UniPoly::from_ints(&[-3, 1]);
        assert_eq!(f.resultant(&g), q(8, 1));
        // Common root gives zero.
        let h = UniPoly::from_ints(&[-1, 1]);
        assert!(f.resultant(&h).is_zero());
    }

    #[test]
    fn interpolation_recovers_polynomial() {
        let p = UniPoly::from_ints(&[3, -2, 0, 5]);
        let pts: Vec<_> = (0..4)
            .map(|i| {
                let x = q(i, 1);
                let y = p.eval(&x);
                (x, y)
            })
            .collect();
        assert_eq!(UniPoly::interpolate(&pts), p);
    }

    #[test]
    fn gcd_is_monic() {
        let f = UniPoly::from_ints(&[-2, 0, 2]);
        let g = UniPoly::from_ints(&[2, 2]);
        assert_eq!(f.gcd(&g), UniPoly::from_ints(&[1, 1]));
    }
}
