//! Rational singular points of branch curves.
//!
//! Candidates for one coordinate come from the content of the polynomial and
//! the resultant `Res(g, ∂g)`; at each rational candidate the common roots of
//! `f, ∂f/∂u, ∂f/∂v` are found by univariate gcd. Any candidate factor without
//! rational roots may hide conjugate singular points and clears the
//! completeness flag.

use alloc::collections::BTreeSet;
use alloc::vec::Vec;

use num_traits::Zero;

use super::{AffinePoint, BiPolynomial, Chart, Poly2, PolyError, ProjCoord, ProjPoint, Rational, UniPoly, Var};

#[derive(Clone, Debug, PartialEq, Eq)]
pub struct SingularPoints {
    /// Sorted by bihomogeneous coordinates, each in its preferred chart.
    pub points: Vec<AffinePoint>,
    /// False when some singular point might have irrational coordinates.
    pub complete: bool,
}

struct SideResult {
    points: Vec<(Rational, Rational)>,
    complete: bool,
}

/// Singular points found by solving for the `main.other()` coordinate first.
fn solve_side(f: &Poly2, main: Var) -> Result<SideResult, PolyError> {
    let other = main.other();
    let content = f.content(main);
    if content.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    if content.squarefree_part().degree() != content.degree() {
        return Err(PolyError::NotSquareFree);
    }
    let g = f.div_by_univariate(main, &content).expect("content divides");
    let mut candidate_polys = Vec::new();
    candidate_polys.push(content);
    if g.degree_in(main).unwrap_or(0) >= 1 {
        let dg = g.derivative(main);
        let res = g.resultant(&dg, main);
        if res.is_zero() {
            return Err(PolyError::NotSquareFree);
        }
        candidate_polys.push(res);
    }
    let mut complete = true;
    let mut values: BTreeSet<Rational> = BTreeSet::new();
    for p in &candidate_polys {
        let (roots, rest) = p.rational_roots();
        if rest.degree().unwrap_or(0) > 0 {
            complete = false;
        }
        values.extend(roots.into_iter().map(|(r, _)| r));
    }
    let du = f.derivative(main);
    let dv = f.derivative(other);
    let mut points = Vec::new();
    for w in values {
        let h1 = f.specialize(other, &w);
        let h2 = du.specialize(other, &w);
        let h3 = dv.specialize(other, &w);
        if h1.is_zero() && h2.is_zero() && h3.is_zero() {
            return Err(PolyError::NotSquareFree);
        }
        let g = h1.gcd(&h2).gcd(&h3);
        let (roots, rest) = g.rational_roots();
        if rest.degree().unwrap_or(0) > 0 {
            complete = false;
        }
        for (r, _) in roots {
            points.push(match main {
                Var::U => (r, w.clone()),
                Var::V => (w.clone(), r),
            });
        }
    }
    Ok(SideResult { points, complete })
}

/// Rational singular points of a chart polynomial, with completeness.
pub fn singular_points_in_chart(f: &Poly2) -> Result<(Vec<(Rational, Rational)>, bool), PolyError> {
    if f.is_zero() {
        return Err(PolyError::ZeroPolynomial);
    }
    let a = solve_side(f, Var::U)?;
    if a.complete {
        return Ok((a.points, true));
    }
    let b = solve_side(f, Var::V)?;
    Ok((a.points, b.complete))
}

/// All rational points of multiplicity at least two, over every chart when a
/// bidegree is attached (otherwise just the polynomial's own chart).
pub fn rational_singular_points(f: &BiPolynomial) -> Result<SingularPoints, PolyError> {
    let charts: Vec<Chart> = if f.bidegree.is_some() {
        Chart::ALL.to_vec()
    } else {
        alloc::vec![f.chart]
    };
    let mut seen: BTreeSet<ProjPoint> = BTreeSet::new();
    let mut complete = true;
    for c in charts {
        let g = f.chart_change(c)?;
        let (pts, ok) = singular_points_in_chart(&g.poly)?;
        complete &= ok;
        for (u, v) in pts {
            seen.insert(AffinePoint::new(c, u, v).to_projective());
        }
    }
    let points = if f.bidegree.is_some() {
        seen.iter().map(ProjPoint::to_affine).collect()
    } else {
        // Keep the caller's chart when no chart change is possible.
        seen.iter()
            .map(|p| {
                let a = p.to_affine();
                if a.chart == f.chart {
                    a
                } else {
                    reexpress(p, f.chart)
                }
            })
            .collect()
    };
    Ok(SingularPoints { points, complete })
}

fn reexpress(p: &ProjPoint, chart: Chart) -> AffinePoint {
    let coord = |c: &ProjCoord, affine_is_first: bool| -> Rational {
        match (c, affine_is_first) {
            (ProjCoord::Finite(q), true) => q.clone(),
            (ProjCoord::Finite(q), false) => Rational::from_integer(1.into()) / q,
            (ProjCoord::Infinity, _) => Rational::zero(),
        }
    };
    AffinePoint::new(
        chart,
        coord(&p.fibre, chart.fibre == super::FibreChart::X),
        coord(&p.base, chart.base == super::BaseChart::T),
    )
}

/// Rational singular points on the fibre over `base`, searched along the
/// whole fibre line (both fibre charts). Needs an attached bidegree.
pub fn singular_points_on_fibre(f: &BiPolynomial, base: &ProjCoord) -> Result<SingularPoints, PolyError> {
    let (base_chart, w) = match base {
        ProjCoord::Finite(q) => (super::BaseChart::T, q.clone()),
        ProjCoord::Infinity => (super::BaseChart::S, Rational::zero()),
    };
    let mut seen: BTreeSet<ProjPoint> = BTreeSet::new();
    let mut complete = true;
    for fibre in [super::FibreChart::X, super::FibreChart::Z] {
        let chart = Chart {
            fibre,
            base: base_chart,
        };
        let g = f.chart_change(chart)?;
        let h1 = g.poly.specialize(Var::V, &w);
        let h2 = g.poly.derivative(Var::U).specialize(Var::V, &w);
        let h3 = g.poly.derivative(Var::V).specialize(Var::V, &w);
        if h1.is_zero() && h2.is_zero() && h3.is_zero() {
            return Err(PolyError::NotSquareFree);
        }
        let gcd: UniPoly = h1.gcd(&h2).gcd(&h3);
        let (roots, rest) = gcd.rational_roots();
        complete &= rest.degree().unwrap_or(0) == 0;
        for (r, _) in roots {
            seen.insert(AffinePoint::new(chart, r, w.clone()).to_projective());
        }
    }
    Ok(SingularPoints {
        points: seen.iter().map(ProjPoint::to_affine).collect(),
        complete,
    })
}

#[cfg(test)]
mod tests {
    use super::*;
    use crate::poly::{parse_bihomogeneous, parse_poly, rat};
    use std::string::ToString;
    use std::vec::Vec;

    #[test]
    fn type_one_branch_has_two_singular_points() {
        let f = parse_bihomogeneous("t*s*(s^2*x^6 + s*t*x^3*z^3 + t^2*z^6)", Chart::XT).unwrap();
        let sp = rational_singular_points(&f).unwrap();
        assert!(sp.complete);
        let names: Vec<_> = sp.points.iter().map(|p| p.to_projective().to_string()).collect();
        assert_eq!(names, ["([0:1],[0:1])", "([1:0],[1:0])"]);
    }

    #[test]
    fn smooth_curve_has_none() {
        let f = parse_poly("x*t - 1", Chart::XT).unwrap();
        let sp = rational_singular_points(&f).unwrap();
        assert!(sp.points.is_empty());
        assert!(sp.complete);
    }

    #[test]
    fn node_and_cusp() {
        let f = parse_poly("(x - 1)^3 + (t - 2)^2", Chart::XT).unwrap();
        let sp = rational_singular_points(&f).unwrap();
        assert_eq!(sp.points, [AffinePoint::new(Chart::XT, rat(1), rat(2))]);
        let g = parse_poly("x^2 - t^2 + x^3", Chart::XT).unwrap();
        let sp = rational_singular_points(&g).unwrap();
        assert_eq!(sp.points, [AffinePoint::new(Chart::XT, rat(0), rat(0))]);
    }

    #[test]
    fn conjugate_node_is_flagged() {
        // Two conics meeting at (±i, 0) and tangent nowhere rational.
        let f = parse_poly("(x^2 + 1 - t)*(x^2 + 1 + t)", Chart::XT).unwrap();
        let sp = rational_singular_points(&f).unwrap();
        assert!(sp.points.is_empty());
        assert!(!sp.complete);
    }

    #[test]
    fn non_reduced_is_rejected() {
        let f = parse_poly("(x - t)^2*(x + 1)", Chart::XT).unwrap();
        assert_eq!(rational_singular_points(&f), Err(PolyError::NotSquareFree));
        let g = parse_poly("t^2*x", Chart::XT).unwrap();
        assert_eq!(rational_singular_points(&g), Err(PolyError::NotSquareFree));
    }
}
