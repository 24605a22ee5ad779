//! Exact polynomial arithmetic on P1 x P1.
//!
//! Homogeneous coordinates are `([x:z], [t:s])`: `[x:z]` on the fibre line and
//! `[t:s]` on the base. A [`BiPolynomial`] is stored in one of the four affine
//! charts, with `u` the affine fibre coordinate and `v` the affine base
//! coordinate of that chart.

pub mod bivariate;
pub mod parse;
pub mod singular;
pub mod univariate;

use alloc::string::String;
use alloc::vec::Vec;
use core::cmp::Ordering;
use core::fmt;

use num_bigint::BigInt;
use num_traits::{One, Signed, Zero};

pub use bivariate::{Poly2, Var};
pub use parse::{parse_poly4, Poly4};
pub use singular::{rational_singular_points, singular_points_on_fibre, SingularPoints};
pub use univariate::UniPoly;

/// Exact rationals; always reduced with a positive denominator.
pub type Rational = num_rational::BigRational;

pub fn rat(n: i64) -> Rational {
    Rational::from_integer(BigInt::from(n))
}

pub fn ratio(n: i64, d: i64) -> Rational {
    Rational::new(BigInt::from(n), BigInt::from(d))
}

#[derive(Debug, Clone, PartialEq, Eq, thiserror::Error)]
pub enum PolyError {
    #[error("syntax error at {position}: {message}")]
    Syntax { position: usize, message: String },
    #[error("unknown variable `{name}` at {position} (expected one of x, z, t, s)")]
    UnknownVariable { position: usize, name: String },
    #[error("expression is not bihomogeneous")]
    NotBihomogeneous,
    #[error("no bidegree attached; chart changes need a bihomogeneous form")]
    NoBidegree,
    #[error("term exceeds the attached bidegree ({0}, {1})")]
    BidegreeTooSmall(u32, u32),
    #[error("point lies in chart {point} but polynomial is in chart {poly}")]
    ChartMismatch { poly: Chart, point: Chart },
    #[error("zero polynomial")]
    ZeroPolynomial,
    #[error("polynomial is not square-free")]
    NotSquareFree,
}

/// Which fibre coordinate is set to one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum FibreChart {
    /// `z = 1`, affine coordinate `x`.
    X,
    /// `x = 1`, affine coordinate `z`.
    Z,
}

/// Which base coordinate is set to one.
#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub enum BaseChart {
    /// `s = 1`, affine coordinate `t`.
    T,
    /// `t = 1`, affine coordinate `s`.
    S,
}

#[derive(Clone, Copy, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct Chart {
    pub fibre: FibreChart,
    pub base: BaseChart,
}

impl Chart {
    pub const XT: Chart = Chart {
        fibre: FibreChart::X,
        base: BaseChart::T,
    };
    pub const ZT: Chart = Chart {
        fibre: FibreChart::Z,
        base: BaseChart::T,
    };
    pub const XS: Chart = Chart {
        fibre: FibreChart::X,
        base: BaseChart::S,
    };
    pub const ZS: Chart = Chart {
        fibre: FibreChart::Z,
        base: BaseChart::S,
    };
    pub const ALL: [Chart; 4] = [Chart::XT, Chart::ZT, Chart::XS, Chart::ZS];

    pub fn fibre_var(self) -> &'static str {
        match self.fibre {
            FibreChart::X => "x",
            FibreChart::Z => "z",
        }
    }

    pub fn base_var(self) -> &'static str {
        match self.base {
            BaseChart::T => "t",
            BaseChart::S => "s",
        }
    }

    pub fn parse(name: &str) -> Option<Chart> {
        Chart::ALL.into_iter().find(|c| {
            let mut n = String::from(c.fibre_var());
            n.push_str(c.base_var());
            n == name
        })
    }
}

impl fmt::Display for Chart {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "{}{}", self.fibre_var(), self.base_var())
    }
}

/// A point of P1 normalised to `[q:1]` or `[1:0]`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub enum ProjCoord {
    Finite(Rational),
    Infinity,
}

impl ProjCoord {
    pub fn from_pair(a: &Rational, b: &Rational) -> ProjCoord {
        if b.is_zero() {
            ProjCoord::Infinity
        } else {
            ProjCoord::Finite(a / b)
        }
    }
}

impl Ord for ProjCoord {
    fn cmp(&self, other: &Self) -> Ordering {
        match (self, other) {
            (ProjCoord::Finite(a), ProjCoord::Finite(b)) => a.cmp(b),
            (ProjCoord::Finite(_), ProjCoord::Infinity) => Ordering::Less,
            (ProjCoord::Infinity, ProjCoord::Finite(_)) => Ordering::Greater,
            (ProjCoord::Infinity, ProjCoord::Infinity) => Ordering::Equal,
        }
    }
}

impl PartialOrd for ProjCoord {
    fn partial_cmp(&self, other: &Self) -> Option<Ordering> {
        Some(self.cmp(other))
    }
}

impl fmt::Display for ProjCoord {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        match self {
            ProjCoord::Finite(q) => write!(f, "[{q}:1]"),
            ProjCoord::Infinity => f.write_str("[1:0]"),
        }
    }
}

/// A point of P1 x P1 in bihomogeneous form; ordered lexicographically.
#[derive(Clone, PartialEq, Eq, PartialOrd, Ord, Debug, Hash)]
pub struct ProjPoint {
    pub fibre: ProjCoord,
    pub base: ProjCoord,
}

impl ProjPoint {
    /// The affine chart in which this point has the simplest coordinates.
    pub fn to_affine(&self) -> AffinePoint {
        let (fc, u) = match &self.fibre {
            ProjCoord::Finite(q) => (FibreChart::X, q.clone()),
            ProjCoord::Infinity => (FibreChart::Z, Rational::zero()),
        };
        let (bc, v) = match &self.base {
            ProjCoord::Finite(q) => (BaseChart::T, q.clone()),
            ProjCoord::Infinity => (BaseChart::S, Rational::zero()),
        };
        AffinePoint {
            chart: Chart { fibre: fc, base: bc },
            u,
            v,
        }
    }
}

impl fmt::Display for ProjPoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(f, "({},{})", self.fibre, self.base)
    }
}

/// Point with finite coordinates `(u, v)` in `chart`.
#[derive(Clone, PartialEq, Eq, Debug, Hash)]
pub struct AffinePoint {
    pub chart: Chart,
    pub u: Rational,
    pub v: Rational,
}

impl AffinePoint {
    pub fn new(chart: Chart, u: Rational, v: Rational) -> Self {
        AffinePoint { chart, u, v }
    }

    pub fn to_projective(&self) -> ProjPoint {
        let one = Rational::one();
        let fibre = match self.chart.fibre {
            FibreChart::X => ProjCoord::from_pair(&self.u, &one),
            FibreChart::Z => ProjCoord::from_pair(&one, &self.u),
        };
        let base = match self.chart.base {
            BaseChart::T => ProjCoord::from_pair(&self.v, &one),
            BaseChart::S => ProjCoord::from_pair(&one, &self.v),
        };
        ProjPoint { fibre, base }
    }

    /// The base coordinate `[t:s]`, which names the fibre through the point.
    pub fn base_point(&self) -> ProjCoord {
        self.to_projective().base
    }
}

impl fmt::Display for AffinePoint {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        write!(
            f,
            "{}={}, {}={}",
            self.chart.fibre_var(),
            self.u,
            self.chart.base_var(),
            self.v
        )
    }
}

/// Polynomial in an affine chart, optionally remembering the bidegree
/// `(a, b)` = (degree in `[t:s]`, degree in `[x:z]`) of the form it came from.
#[derive(Clone, PartialEq, Eq, Debug)]
pub struct BiPolynomial {
    pub poly: Poly2,
    pub chart: Chart,
    pub bidegree: Option<(u32, u32)>,
}

fn dehomogenize(p: &Poly4, chart: Chart) -> Poly2 {
    Poly2::from_terms(p.terms.iter().map(|(e, c)| {
        let u = match chart.fibre {
            FibreChart::X => e[0],
            FibreChart::Z => e[1],
        };
        let v = match chart.base {
            BaseChart::T => e[2],
            BaseChart::S => e[3],
        };
        ((u, v), c.clone())
    }))
}

/// Parse `text` and dehomogenise it into `chart`. No bidegree is attached.
pub fn parse_poly(text: &str, chart: Chart) -> Result<BiPolynomial, PolyError> {
    let p4 = parse_poly4(text)?;
    Ok(BiPolynomial {
        poly: dehomogenize(&p4, chart),
        chart,
        bidegree: None,
    })
}

/// Parse a bihomogeneous form in `x, z, t, s` and store it in `chart`.
pub fn parse_bihomogeneous(text: &str, chart: Chart) -> Result<BiPolynomial, PolyError> {
    let p4 = parse_poly4(text)?;
    let bidegree = if p4.terms.is_empty() {
        (0, 0)
    } else {
        p4.bidegree().ok_or(PolyError::NotBihomogeneous)?
    };
    Ok(BiPolynomial {
        poly: dehomogenize(&p4, chart),
        chart,
        bidegree: Some(bidegree),
    })
}

impl BiPolynomial {
    pub fn new(poly: Poly2, chart: Chart) -> Self {
        BiPolynomial {
            poly,
            chart,
            bidegree: None,
        }
    }

    pub fn from_form(form: &Poly4, chart: Chart) -> Result<Self, PolyError> {
        let bidegree = if form.terms.is_empty() {
            (0, 0)
        } else {
            form.bidegree().ok_or(PolyError::NotBihomogeneous)?
        };
        Ok(BiPolynomial {
            poly: dehomogenize(form, chart),
            chart,
            bidegree: Some(bidegree),
        })
    }

    /// Attach a bidegree, checking that every term fits in it.
    pub fn with_bidegree(mut self, a: u32, b: u32) -> Result<Self, PolyError> {
        if self.poly.terms().any(|(&(i, j), _)| i > b || j > a) {
            return Err(PolyError::BidegreeTooSmall(a, b));
        }
        self.bidegree = Some((a, b));
        Ok(self)
    }

    pub fn is_zero(&self) -> bool {
        self.poly.is_zero()
    }

    pub fn homogenize(&self) -> Result<Poly4, PolyError> {
        let (a, b) = self.bidegree.ok_or(PolyError::NoBidegree)?;
        let mut out = Poly4::default();
        for (&(i, j), c) in self.poly.terms() {
            if i > b || j > a {
                return Err(PolyError::BidegreeTooSmall(a, b));
            }
            let (ex, ez) = match self.chart.fibre {
                FibreChart::X => (i, b - i),
                FibreChart::Z => (b - i, i),
            };
            let (et, es) = match self.chart.base {
                BaseChart::T => (j, a - j),
                BaseChart::S => (a - j, j),
            };
            out.add_term([ex, ez, et, es], c.clone());
        }
        Ok(out)
    }

    pub fn chart_change(&self, to: Chart) -> Result<BiPolynomial, PolyError> {
        if to == self.chart {
            return Ok(self.clone());
        }
        let form = self.homogenize()?;
        Ok(BiPolynomial {
            poly: dehomogenize(&form, to),
            chart: to,
            bidegree: self.bidegree,
        })
    }

    fn require_chart(&self, p: &AffinePoint) -> Result<(), PolyError> {
        if p.chart != self.chart {
            return Err(PolyError::ChartMismatch {
                poly: self.chart,
                point: p.chart,
            });
        }
        Ok(())
    }

    pub fn eval(&self, p: &AffinePoint) -> Result<Rational, PolyError> {
        self.require_chart(p)?;
        Ok(self.poly.eval(&p.u, &p.v))
    }

    /// Partial derivative in the chart's affine fibre (`U`) or base (`V`) coordinate.
    pub fn partial_derivative(&self, var: Var) -> BiPolynomial {
        BiPolynomial::new(self.poly.derivative(var), self.chart)
    }

    /// Substitute `u -> U(u, v)`, `v -> V(u, v)`.
    pub fn substitute(&self, u_image: &Poly2, v_image: &Poly2) -> BiPolynomial {
        let mut out = Poly2::zero();
        for (&(i, j), c) in self.poly.terms() {
            let term = u_image.pow(i).mul(&v_image.pow(j)).scale(c);
            out = out.add(&term);
        }
        BiPolynomial::new(out, self.chart)
    }

    pub fn multiply(&self, other: &BiPolynomial) -> Result<BiPolynomial, PolyError> {
        if self.chart != other.chart {
            return Err(PolyError::ChartMismatch {
                poly: self.chart,
                point: other.chart,
            });
        }
        let bidegree = match (self.bidegree, other.bidegree) {
            (Some((a, b)), Some((c, d))) => Some((a + c, b + d)),
            _ => None,
        };
        Ok(BiPolynomial {
            poly: self.poly.mul(&other.poly),
            chart: self.chart,
            bidegree,
        })
    }

    /// Local polynomial at `p`: translated so that `p` is the origin.
    pub fn local_at(&self, p: &AffinePoint) -> Result<Poly2, PolyError> {
        let here = if p.chart == self.chart {
            self.clone()
        } else {
            self.chart_change(p.chart)?
        };
        Ok(here.poly.translate(&p.u, &p.v))
    }

    /// Canonical text of the affine chart polynomial.
    pub fn to_canonical_string(&self) -> String {
        format_poly2(&self.poly, self.chart.fibre_var(), self.chart.base_var())
    }

    /// Canonical text of the bihomogeneous form.
    pub fn to_homogeneous_string(&self) -> Result<String, PolyError> {
        Ok(format_poly4(&self.homogenize()?))
    }
}

impl fmt::Display for BiPolynomial {
    fn fmt(&self, f: &mut fmt::Formatter<'_>) -> fmt::Result {
        f.write_str(&self.to_canonical_string())
    }
}

/// Multiplicity of `f` at `p`: least total degree after translating `p` to the origin.
pub fn multiplicity_at_point(f: &BiPolynomial, p: &AffinePoint) -> Result<u32, PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let local = f.local_at(p)?;
    Ok(local.order().unwrap_or(0))
}

fn push_term(out: &mut String, first: bool, c: &Rational, vars: &[(&str, u32)]) {
    use core::fmt::Write;
    let neg = c.is_negative();
    if first {
        if neg {
            out.push('-');
        }
    } else {
        out.push_str(if neg { " - " } else { " + " });
    }
    let a = c.abs();
    let mono: Vec<String> = vars
        .iter()
        .filter(|(_, e)| *e > 0)
        .map(|(n, e)| {
            if *e == 1 {
                String::from(*n)
            } else {
                alloc::format!("{n}^{e}")
            }
        })
        .collect();
    if mono.is_empty() {
        let _ = write!(out, "{a}");
    } else {
        if !a.is_one() {
            let _ = write!(out, "{a}*");
        }
        out.push_str(&mono.join("*"));
    }
}

/// Graded-lexicographic printing: total degree descending, then the first
/// variable's exponent descending. Explicit `*` and `^` throughout.
pub fn format_poly2(p: &Poly2, uname: &str, vname: &str) -> String {
    if p.is_zero() {
        return String::from("0");
    }
    let mut terms: Vec<_> = p.terms().collect();
    terms.sort_by(|(a, _), (b, _)| (b.0 + b.1, b.0).cmp(&(a.0 + a.1, a.0)));
    let mut out = String::new();
    for (k, (&(i, j), c)) in terms.into_iter().enumerate() {
        push_term(&mut out, k == 0, c, &[(uname, i), (vname, j)]);
    }
    out
}

pub fn format_poly4(p: &Poly4) -> String {
    if p.terms.is_empty() {
        return String::from("0");
    }
    let mut out = String::new();
    for (k, (e, c)) in p.terms.iter().rev().enumerate() {
        push_term(
            &mut out,
            k == 0,
            c,
            &[("x", e[0]), ("z", e[1]), ("t", e[2]), ("s", e[3])],
        );
    }
    out
}

#[cfg(test)]
mod tests {
    use super::*;
    use std::string::ToString;

    #[test]
    fn type_one_local_equation_has_three_terms() {
        let f = parse_poly("t*(x^6 + t*x^3 + t^2)", Chart::XT).unwrap();
        assert_eq!(f.poly.len(), 3);
        assert_eq!(f.to_canonical_string(), "x^6*t + x^3*t^2 + t^3");
    }

    #[test]
    fn zero_inputs() {
        assert!(parse_poly("0", Chart::XT).unwrap().is_zero());
        assert!(parse_poly("(x+t)^2 - x^2 - 2*x*t - t^2", Chart::XT).unwrap().is_zero());
    }

    #[test]
    fn multiplicities() {
        let f = parse_poly("t*(x^6 + t*x^3 + t^2)", Chart::XT).unwrap();
        let origin = AffinePoint::new(Chart::XT, rat(0), rat(0));
        assert_eq!(multiplicity_at_point(&f, &origin).unwrap(), 3);
        let g = parse_poly("x", Chart::XT).unwrap();
        let p = AffinePoint::new(Chart::XT, rat(0), rat(1));
        assert_eq!(multiplicity_at_point(&g, &p).unwrap(), 1);
        let p = AffinePoint::new(Chart::XT, rat(1), rat(0));
        assert_eq!(multiplicity_at_point(&g, &p).unwrap(), 0);
        let zero = parse_poly("0", Chart::XT).unwrap();
        assert_eq!(multiplicity_at_point(&zero, &origin), Err(PolyError::ZeroPolynomial));
    }

    #[test]
    fn chart_change_roundtrip() {
        let f = parse_bihomogeneous("t*s*(s^2*x^6 + s*t*x^3*z^3 + t^2*z^6)", Chart::XT).unwrap();
        assert_eq!(f.bidegree, Some((4, 6)));
        for c in Chart::ALL {
            let g = f.chart_change(c).unwrap();
            assert_eq!(g.chart_change(Chart::XT).unwrap(), f);
        }
        // The chart at ([1:0],[1:0]) looks like the chart at the origin with roles swapped.
        let g = f.chart_change(Chart::ZS).unwrap();
        assert_eq!(g.to_canonical_string(), "z^6*s + z^3*s^2 + s^3");
    }

    #[test]
    fn chart_mismatch_is_reported() {
        let f = parse_poly("x", Chart::XT).unwrap();
        let p = AffinePoint::new(Chart::ZS, rat(0), rat(0));
        assert!(matches!(f.eval(&p), Err(PolyError::ChartMismatch { .. })));
        assert_eq!(f.chart_change(Chart::ZS), Err(PolyError::NoBidegree));
    }

    #[test]
    fn projective_normalisation() {
        let p = AffinePoint::new(Chart::ZS, rat(0), rat(0));
        assert_eq!(p.to_projective().to_string(), "([1:0],[1:0])");
        let p = AffinePoint::new(Chart::ZT, rat(2), rat(3));
        assert_eq!(p.to_projective().to_string(), "([1/2:1],[3:1])");
        assert_eq!(p.to_projective().to_affine().to_projective(), p.to_projective());
    }

    #[test]
    fn printer_signs_and_fractions() {
        let f = parse_poly("-x + 1/2*t^2 - 3", Chart::XT).unwrap();
        assert_eq!(f.to_canonical_string(), "1/2*t^2 - x - 3");
        let g = parse_poly(&f.to_canonical_string(), Chart::XT).unwrap();
        assert_eq!(f, g);
    }
}
