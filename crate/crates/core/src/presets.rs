//! Branch curves of the built-in fibrations.

use alloc::format;
use alloc::string::String;
use alloc::vec::Vec;

use num_bigint::BigInt;
use num_traits::One;

use crate::poly::{parse_bihomogeneous, BiPolynomial, Chart, Poly2, PolyError, ProjCoord, Rational, UniPoly};

#[derive(Debug, Clone, PartialEq, Eq)]
pub enum Preset {
    /// `ts(s²x⁶ + α st x³z³ + t²z⁶)`
    Type1 { alpha: Rational },
    /// `ts(sx² + tz²)(sx⁴ + tz⁴)`
    Type2,
    /// `ts(t − s)(s²x³ + t²z³)(s²(x − z)³ + t²z³)`, times `(t + s)` when corrected.
    Type3 { corrected: bool },
    /// `ts(sʰ(sx³ − tz³)² + tʰ⁺²z⁶)`
    Type4 { h: u32 },
    /// `st ∏_{ζⁿ=1} (s²(x − ζz)³ + t²z³)`
    Even { n: u32 },
}

impl Preset {
    pub fn type1() -> Self {
        Preset::Type1 { alpha: Rational::one() }
    }

    pub fn name(&self) -> String {
        match self {
            Preset::Type1 { .. } => "type1".into(),
            Preset::Type2 => "type2".into(),
            Preset::Type3 { .. } => "type3".into(),
            Preset::Type4 { .. } => "type4".into(),
            Preset::Even { n } => format!("even:{n}"),
        }
    }

    /// Expression in `x, z, t, s` (not used for the even family).
    pub fn expression(&self) -> Option<String> {
        Some(match self {
            Preset::Type1 { alpha } => format!("t*s*(s^2*x^6 + ({alpha})*s*t*x^3*z^3 + t^2*z^6)"),
            Preset::Type2 => "t*s*(s*x^2 + t*z^2)*(s*x^4 + t*z^4)".into(),
            Preset::Type3 { corrected: false } => "t*s*(t - s)*(s^2*x^3 + t^2*z^3)*(s^2*(x - z)^3 + t^2*z^3)".into(),
            Preset::Type3 { corrected: true } => {
                "t*s*(t - s)*(t + s)*(s^2*x^3 + t^2*z^3)*(s^2*(x - z)^3 + t^2*z^3)".into()
            }
            Preset::Type4 { h } => format!("t*s*(s^{h}*(s*x^3 - t*z^3)^2 + t^{}*z^6)", h + 2),
            Preset::Even { .. } => return None,
        })
    }

    pub fn branch(&self) -> Result<BiPolynomial, PolyError> {
        match self {
            Preset::Even { n } => even_branch(*n),
            _ => parse_bihomogeneous(&self.expression().expect("explicit preset"), Chart::XT),
        }
    }

    /// Base points whose fibres are the ones the construction is about.
    pub fn tracked_bases(&self) -> Vec<ProjCoord> {
        match self {
            Preset::Type1 { .. } | Preset::Type2 => {
                alloc::vec![ProjCoord::Finite(Rational::from_integer(0.into())), ProjCoord::Infinity]
            }
            _ => alloc::vec![ProjCoord::Finite(Rational::from_integer(0.into()))],
        }
    }

    /// Bidegree stated for the branch after a degree-`n` base change.
    pub fn claimed_bidegree(&self, n: u32) -> Option<(u32, u32)> {
        match self {
            Preset::Type1 { .. } | Preset::Type2 => Some((4 * n, 6)),
            Preset::Type3 { .. } => Some((6 * n, 6)),
            Preset::Type4 { h } => Some((n * (h + 4), 6)),
            Preset::Even { .. } => None,
        }
    }

    /// Fibre genus stated for the construction.
    pub fn claimed_genus(&self) -> i64 {
        match self {
            Preset::Even { n } => *n as i64,
            _ => 2,
        }
    }
}

/// `∏_{ζⁿ=1} ((x − ζ)³ + t²)` as `Res_w(wⁿ − 1, (x − w)³ + t²)`, recovered by
/// interpolation on a grid.
pub fn root_of_unity_product(n: u32) -> Poly2 {
    let n = n as usize;
    let q = |k: usize| Rational::from_integer(BigInt::from(k));
    let mut f = alloc::vec![Rational::from_integer(BigInt::from(0)); n + 1];
    f[0] = -Rational::one();
    f[n] = Rational::one();
    let dx = 3 * n;
    let dt = 2 * n;
    // Coefficients in x, one interpolation per sample of t.
    let mut by_t: Vec<(Rational, UniPoly)> = Vec::new();
    for j in 0..=dt {
        let t0 = q(j);
        let samples: Vec<(Rational, Rational)> = (0..=dx)
            .map(|i| {
                let x0 = q(i);
                // (x0 - w)^3 + t0^2 in w, low to high
                let g = alloc::vec![
                    &x0 * &x0 * &x0 + &t0 * &t0,
                    -Rational::from_integer(3.into()) * &x0 * &x0,
                    Rational::from_integer(3.into()) * &x0,
                    -Rational::one(),
                ];
                (x0, UniPoly::resultant_of(&f, &g))
            })
            .collect();
        by_t.push((t0, UniPoly::interpolate(&samples)));
    }
    let mut out = Poly2::zero();
    for i in 0..=dx {
        let samples: Vec<(Rational, Rational)> = by_t.iter().map(|(t0, p)| (t0.clone(), p.coeff(i))).collect();
        let ct = UniPoly::interpolate(&samples);
        for (j, c) in ct.coeffs().iter().enumerate() {
            out.add_term((i as u32, j as u32), c.clone());
        }
    }
    out
}

/// The even-genus branch for `n` cusps on the fibre `t = 0`.
pub fn even_branch(n: u32) -> Result<BiPolynomial, PolyError> {
    let poly = root_of_unity_product(n).mul(&Poly2::v());
    BiPolynomial::new(poly, Chart::XT).with_bidegree(2 * n + 2, 3 * n)
}

/// Local equation `v(u³ + v²)` of the line through one cusp of the even family.
pub fn even_cusp_template() -> Poly2 {
    Poly2::v().mul(&Poly2::u().pow(3).add(&Poly2::v().pow(2)))
}
