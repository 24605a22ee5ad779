//! Campana orbifold structure on the base of a fibration.

use alloc::vec::Vec;
use core::fmt;

use num_bigint::BigInt;
use num_integer::Integer;
use num_traits::{One, Signed, ToPrimitive, Zero};

use crate::poly::Rational;

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum OrbifoldError {
    #[error("orbifold multiplicity {0} is below 2")]
    MultiplicityTooSmall(u64),
    #[error("cover degree must be positive")]
    ZeroDegree,
    #[error("multiplicity {mult} does not divide the cover degree {degree}")]
    NotDivisible { mult: u64, degree: u64 },
    #[error("Riemann-Hurwitz gives a non-integral genus")]
    NonIntegralGenus,
    #[error("Riemann-Hurwitz gives negative genus {0}")]
    NegativeGenus(i64),
    #[error("no cover of P1 branched at {0} point(s) with this profile")]
    NambaException(usize),
}

/// Base genus together with the multiplicities `m(b) ≥ 2`, kept sorted.
#[derive(Debug, Clone, PartialEq, Eq, Hash)]
pub struct OrbifoldBase {
    base_genus: u32,
    mults: Vec<u64>,
}

impl OrbifoldBase {
    pub fn new(base_genus: u32, mults: impl IntoIterator<Item = u64>) -> Result<Self, OrbifoldError> {
        let mut mults: Vec<u64> = mults.into_iter().collect();
        if let Some(&m) = mults.iter().find(|&&m| m < 2) {
            return Err(OrbifoldError::MultiplicityTooSmall(m));
        }
        mults.sort_unstable();
        Ok(OrbifoldBase { base_genus, mults })
    }

    /// Drops entries equal to 1 instead of rejecting them.
    pub fn from_fibre_multiplicities(base_genus: u32, mults: impl IntoIterator<Item = u64>) -> Self {
        Self::new(base_genus, mults.into_iter().filter(|&m| m >= 2)).expect("filtered")
    }

    pub fn p1(mults: impl IntoIterator<Item = u64>) -> Result<Self, OrbifoldError> {
        Self::new(0, mults)
    }

    pub fn base_genus(&self) -> u32 {
        self.base_genus
    }

    pub fn mults(&self) -> &[u64] {
        &self.mults
    }
}

impl fmt::Display for OrbifoldBase {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "g={}; (", self.base_genus)?;
        for (i, m) in self.mults.iter().enumerate() {
            if i > 0 {
                f.write_str(",")?;
            }
            write!(f, "{m}")?;
        }
        f.write_str(")")
    }
}

/// `2 g_B - 2 + Σ (1 - 1/m_i)`
pub fn delta_degree(base: &OrbifoldBase) -> Rational {
    let mut d = Rational::from_integer(BigInt::from(2 * base.base_genus as i64 - 2));
    for &m in &base.mults {
        d += Rational::one() - Rational::new(BigInt::one(), BigInt::from(m));
    }
    d
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum ExceptionFamily {
    /// No orbifold points at all.
    Empty,
    /// `(n)`
    One,
    /// `(n,m)`
    Two,
    /// `(2,2,n)`
    Dihedral,
    /// `(2,3,k)` with `k ≤ 6`
    TwoThreeK,
    /// `(2,4,4)`
    TwoFourFour,
    /// `(3,3,3)`
    ThreeThreeThree,
    /// `(2,2,2,2)`
    FourTwos,
}

impl ExceptionFamily {
    pub fn label(&self) -> &'static str {
        match self {
            ExceptionFamily::Empty => "()",
            ExceptionFamily::One => "(n)",
            ExceptionFamily::Two => "(n,m)",
            ExceptionFamily::Dihedral => "(2,2,n)",
            ExceptionFamily::TwoThreeK => "(2,3,k)",
            ExceptionFamily::TwoFourFour => "(2,4,4)",
            ExceptionFamily::ThreeThreeThree => "(3,3,3)",
            ExceptionFamily::FourTwos => "(2,2,2,2)",
        }
    }
}

impl fmt::Display for ExceptionFamily {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(self.label())
    }
}

#[derive(Debug, Clone, Copy, PartialEq, Eq)]
pub enum Classification {
    GeneralType,
    Special { family: Option<ExceptionFamily> },
}

impl Classification {
    pub fn is_general_type(&self) -> bool {
        matches!(self, Classification::GeneralType)
    }
}

/// Match a sorted multiset on P1 against the list of non-general-type strings.
/// Pure pattern matching; no degree arithmetic.
pub fn recognize_exception(sorted: &[u64]) -> Option<ExceptionFamily> {
    use ExceptionFamily::*;
    match sorted {
        [] => Some(Empty),
        [_] => Some(One),
        [_, _] => Some(Two),
        [2, 2, _] => Some(Dihedral),
        [2, 3, k] if *k <= 6 => Some(TwoThreeK),
        [2, 4, 4] => Some(TwoFourFour),
        [3, 3, 3] => Some(ThreeThreeThree),
        [2, 2, 2, 2] => Some(FourTwos),
        _ => None,
    }
}

pub fn classify(base: &OrbifoldBase) -> Classification {
    if delta_degree(base).is_positive() {
        return Classification::GeneralType;
    }
    let family = if base.base_genus == 0 {
        recognize_exception(&base.mults)
    } else {
        None
    };
    Classification::Special { family }
}

/// Genus of a degree-`d` cover ramified with index exactly `m_i` over each
/// orbifold point and unramified elsewhere: `g' = 1 + (d/2)·deg`.
pub fn cover_genus(base: &OrbifoldBase, d: u64) -> Result<u64, OrbifoldError> {
    if d == 0 {
        return Err(OrbifoldError::ZeroDegree);
    }
    for &m in &base.mults {
        if !d.is_multiple_of(m) {
            return Err(OrbifoldError::NotDivisible { mult: m, degree: d });
        }
    }
    if base.base_genus == 0 {
        let k = base.mults.len();
        let unequal_pair = k == 2 && base.mults[0] != base.mults[1];
        if k == 1 || unequal_pair {
            return Err(OrbifoldError::NambaException(k));
        }
    }
    let twice = delta_degree(base) * Rational::from_integer(BigInt::from(d));
    if !twice.is_integer() {
        return Err(OrbifoldError::NonIntegralGenus);
    }
    let twice: BigInt = twice.to_integer();
    if twice.is_odd() {
        return Err(OrbifoldError::NonIntegralGenus);
    }
    let g: BigInt = BigInt::one() + twice / BigInt::from(2);
    let g = g.to_i64().ok_or(OrbifoldError::NonIntegralGenus)?;
    if g < 0 {
        return Err(OrbifoldError::NegativeGenus(g));
    }
    Ok(g as u64)
}

/// Sign of `x` as -1, 0, 1.
pub fn rational_sign(x: &Rational) -> i8 {
    if x.is_zero() {
        0
    } else if x.is_positive() {
        1
    } else {
        -1
    }
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::ratio;

    fn p1(m: &[u64]) -> OrbifoldBase {
        OrbifoldBase::p1(m.iter().copied()).unwrap()
    }

    #[test]
    fn degrees() {
        assert_eq!(delta_degree(&p1(&[2, 2, 2, 2])), ratio(0, 1));
        assert_eq!(delta_degree(&p1(&[])), ratio(-2, 1));
        assert_eq!(delta_degree(&p1(&[2, 3, 7])), ratio(1, 42));
        assert_eq!(delta_degree(&p1(&[2; 6])), ratio(1, 1));
    }

    #[test]
    fn two_three_k() {
        for k in 2..=6 {
            let c = classify(&p1(&[2, 3, k]));
            assert_eq!(
                c,
                Classification::Special {
                    family: Some(if k == 2 {
                        ExceptionFamily::Dihedral
                    } else {
                        ExceptionFamily::TwoThreeK
                    })
                }
            );
        }
        assert!(classify(&p1(&[2, 3, 7])).is_general_type());
    }

    #[test]
    fn higher_genus() {
        assert!(classify(&OrbifoldBase::new(2, []).unwrap()).is_general_type());
        assert_eq!(
            classify(&OrbifoldBase::new(1, []).unwrap()),
            Classification::Special { family: None }
        );
        assert!(classify(&OrbifoldBase::new(1, [2]).unwrap()).is_general_type());
    }

    #[test]
    fn covers() {
        assert_eq!(cover_genus(&p1(&[2, 2, 2, 2]), 2), Ok(1));
        assert_eq!(cover_genus(&p1(&[2, 3, 7]), 84), Ok(2));
        assert_eq!(cover_genus(&p1(&[3, 3]), 3), Ok(0));
        assert_eq!(cover_genus(&p1(&[2, 3]), 6), Err(OrbifoldError::NambaException(2)));
        assert_eq!(cover_genus(&p1(&[5]), 5), Err(OrbifoldError::NambaException(1)));
        assert_eq!(
            cover_genus(&p1(&[2, 3, 7]), 14),
            Err(OrbifoldError::NotDivisible { mult: 3, degree: 14 })
        );
        assert_eq!(cover_genus(&p1(&[2, 2, 2]), 2), Err(OrbifoldError::NonIntegralGenus));
    }

    #[test]
    fn rejects_small_multiplicity() {
        assert_eq!(OrbifoldBase::p1([1, 2]), Err(OrbifoldError::MultiplicityTooSmall(1)));
        assert_eq!(OrbifoldBase::from_fibre_multiplicities(0, [1, 2, 1]).mults(), &[2]);
    }
}
